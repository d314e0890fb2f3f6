//! Study orchestration: the two-round protocol, seeded Monte Carlo sweeps
//! over shot counts and detunings, and analysis of the bundled
//! experimental data set.
//!
//! Round one of the protocol samples a tomography, reconstructs the
//! process, and builds a witness from its most negative eigenvector; round
//! two tests that witness on fresh, statistically independent data. Sweeps
//! repeat the protocol many times per parameter point; repetitions run in
//! parallel with per-repetition seed substreams, so results are identical
//! for any worker count.

use crate::channels::ChannelModel;
use crate::tomography::{
    exact_frequencies, frequencies, min_eigenpair, reconstruct_choi, sample_counts,
    substream_seed, ChoiMatrix, TomographyError, DEFAULT_CONJUGATE_B,
};
use crate::witness::{
    consistency_test, hoeffding_bound, witness_from_vector, TestReport, Verdict, Witness,
    WitnessError,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture data invalid: {0}")]
    BadFixture(String),
    #[error(transparent)]
    Tomography(#[from] TomographyError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// One row of a Monte Carlo sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub model: String,
    pub n_shots: u64,
    pub repetitions: u64,
    pub alpha: f64,
    /// Fraction of repetitions whose verdict was inconsistent.
    pub discard_fraction: f64,
    /// Mean of max(0, −expectation) over all repetitions.
    pub mean_abs_t: f64,
    pub master_seed: u64,
}

/// A stored experimental process matrix with its acquisition metadata.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub choi: ChoiMatrix,
    pub n_shots: u64,
    pub entry_uncertainty: Option<f64>,
}

/// Where the test witness comes from when analyzing stored data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WitnessSource {
    /// Min-eigenvector of the exact correlated-environment reconstruction.
    TheoreticalCorrelation,
    /// Min-eigenvector of the exact detuned-model reconstruction at the
    /// given ratio.
    TheoreticalDetuned(f64),
}

/// Witness predicted by a theoretical error model (exact probabilities,
/// no sampling).
pub fn theoretical_witness(source: WitnessSource) -> Result<Witness, CampaignError> {
    let model = match source {
        WitnessSource::TheoreticalCorrelation => ChannelModel::correlated_env(),
        WitnessSource::TheoreticalDetuned(ratio) => ChannelModel::detuned(ratio),
    };
    let f = exact_frequencies(&model)?;
    let choi = reconstruct_choi(&f, DEFAULT_CONJUGATE_B);
    let (_, vector) = min_eigenpair(&choi)?;
    Ok(witness_from_vector(&vector)?)
}

/// One full two-round consistency test on sampled data.
///
/// Round 1 reconstructs from a fresh sample; a non-negative spectrum ends
/// the protocol as consistent. Otherwise the min-eigenvector witness is
/// tested on a second, independent sample.
pub fn two_round_protocol(
    model: &ChannelModel,
    n_shots: u64,
    alpha: f64,
    seed: u64,
) -> Result<TestReport, CampaignError> {
    let counts1 = sample_counts(model, n_shots, substream_seed(seed, 0, 1))?;
    let f1 = frequencies(&counts1)?;
    let choi = reconstruct_choi(&f1, DEFAULT_CONJUGATE_B);
    let (lam_min, vector) = min_eigenpair(&choi)?;
    if lam_min >= 0.0 {
        return Ok(TestReport {
            expectation_t: lam_min,
            p_bound: 1.0,
            alpha,
            verdict: Verdict::Consistent,
            shots_per_setting: vec![n_shots; 12],
        });
    }
    let witness = witness_from_vector(&vector)?;
    let counts2 = sample_counts(model, n_shots, substream_seed(seed, 1, 1))?;
    Ok(consistency_test(&witness, &counts2, alpha)?)
}

fn sweep_point(
    model: &ChannelModel,
    n_shots: u64,
    repetitions: u64,
    alpha: f64,
    master_seed: u64,
    point_index: u64,
    pool: &rayon::ThreadPool,
) -> Result<SweepRecord, CampaignError> {
    let outcomes: Result<Vec<(bool, f64)>, CampaignError> = pool.install(|| {
        (0..repetitions)
            .into_par_iter()
            .map(|rep| {
                let seed = substream_seed(master_seed, point_index, rep);
                let report = two_round_protocol(model, n_shots, alpha, seed)?;
                Ok((report.is_inconsistent(), (-report.expectation_t).max(0.0)))
            })
            .collect()
    });
    let outcomes = outcomes?;
    let discarded = outcomes.iter().filter(|(d, _)| *d).count() as f64;
    let t_sum: f64 = outcomes.iter().map(|(_, t)| t).sum();
    Ok(SweepRecord {
        model: model.descriptor(),
        n_shots,
        repetitions,
        alpha,
        discard_fraction: discarded / repetitions as f64,
        mean_abs_t: t_sum / repetitions as f64,
        master_seed,
    })
}

/// Repeat the two-round protocol `repetitions` times for every shot count.
pub fn sweep_shots_with_pool(
    model: &ChannelModel,
    shots_list: &[u64],
    repetitions: u64,
    alpha: f64,
    master_seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<Vec<SweepRecord>, CampaignError> {
    shots_list
        .iter()
        .enumerate()
        .map(|(i, &n)| sweep_point(model, n, repetitions, alpha, master_seed, i as u64, pool))
        .collect()
}

/// `sweep_shots_with_pool` on a pool sized from `CHOI_GAUGE_THREADS`.
pub fn sweep_shots(
    model: &ChannelModel,
    shots_list: &[u64],
    repetitions: u64,
    alpha: f64,
    master_seed: u64,
) -> Result<Vec<SweepRecord>, CampaignError> {
    sweep_shots_with_pool(model, shots_list, repetitions, alpha, master_seed, &thread_pool_from_env())
}

/// Sweep the detuning ratio at a fixed shot count. Point seeds are offset
/// so shots sweeps and detuning sweeps never share substreams.
pub fn sweep_detuning_with_pool(
    ratios: &[f64],
    n_shots: u64,
    repetitions: u64,
    alpha: f64,
    master_seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<Vec<SweepRecord>, CampaignError> {
    ratios
        .iter()
        .enumerate()
        .map(|(i, &ratio)| {
            let model = ChannelModel::detuned(ratio);
            sweep_point(&model, n_shots, repetitions, alpha, master_seed, 1000 + i as u64, pool)
        })
        .collect()
}

pub fn sweep_detuning(
    ratios: &[f64],
    n_shots: u64,
    repetitions: u64,
    alpha: f64,
    master_seed: u64,
) -> Result<Vec<SweepRecord>, CampaignError> {
    sweep_detuning_with_pool(ratios, n_shots, repetitions, alpha, master_seed, &thread_pool_from_env())
}

/// Worker pool capped by the CHOI_GAUGE_THREADS environment variable
/// (positive integer); anything else falls back to the rayon default.
/// The cap never changes results, only scheduling.
pub fn thread_pool_from_env() -> rayon::ThreadPool {
    let n = std::env::var("CHOI_GAUGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool")
}

/// Test stored data against a theoretically predicted witness: the
/// expectation comes from the trace identity against the stored matrix and
/// the bound uses the stored per-setting shot count.
pub fn analyze_fixture(fx: &Fixture, source: WitnessSource) -> Result<TestReport, CampaignError> {
    let witness = theoretical_witness(source)?;
    let expectation = witness
        .observable()
        .matmul(&fx.choi.matrix)
        .map_err(TomographyError::from)?
        .trace()
        .re;
    let t = (-expectation).max(0.0);
    let shots: std::collections::BTreeMap<_, _> = crate::tomography::canonical_settings()
        .into_iter()
        .map(|k| (k, fx.n_shots))
        .collect();
    let p_bound = hoeffding_bound(t, &shots, &witness);
    let verdict = if expectation < 0.0 && p_bound < 0.01 {
        Verdict::Inconsistent
    } else {
        Verdict::Consistent
    };
    Ok(TestReport {
        expectation_t: expectation,
        p_bound,
        alpha: 0.01,
        verdict,
        shots_per_setting: vec![fx.n_shots; 12],
    })
}

/// The experimentally reconstructed process matrix shipped with the crate
/// (trapped-ion run with an engineered system–environment correlation,
/// 394 shots per setting).
pub const EXPERIMENT_FIXTURE_NAME: &str = "eq15";
pub const EXPERIMENT_FIXTURE_JSON: &str = include_str!("../fixtures/eq15.json");

/// Look up a built-in fixture by name.
pub fn builtin_fixture(name: &str) -> Result<Fixture, CampaignError> {
    if name != EXPERIMENT_FIXTURE_NAME {
        return Err(CampaignError::UnknownFixture(name.to_string()));
    }
    let file = crate::cli::formats::parse_choi_json(EXPERIMENT_FIXTURE_JSON)
        .map_err(|e| CampaignError::BadFixture(e.to_string()))?;
    let choi = file.to_choi().map_err(|e| CampaignError::BadFixture(e.to_string()))?;
    let n_shots = file
        .metadata
        .n_shots
        .ok_or_else(|| CampaignError::BadFixture("missing n_shots".to_string()))?;
    Ok(Fixture {
        name: name.to_string(),
        choi,
        n_shots,
        entry_uncertainty: file.metadata.entry_uncertainty,
    })
}

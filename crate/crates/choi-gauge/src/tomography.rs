//! Shot sampling, frequency tables and linear-inversion reconstruction.
//!
//! Process reconstruction keeps whatever the data says — including negative
//! eigenvalues. The reconstructed operator is
//!
//! ```text
//! ρ = Σ_k  D̃_k ⊗ ( Σ_j f(j|k) · D_j )
//! ```
//!
//! with k running over the four canonical preparations (first tensor
//! factor), j over the four canonical outcome labels, `D` the dual basis
//! and `D̃` the prep-side dual, conjugated by default. With exact
//! probabilities from a linear channel this equals the analytic Choi matrix
//! `choi_of_linear_channel` exactly; the conjugation default is the one
//! setting for which that holds.

use crate::bases::{meas_operator, qubit_dual, BasisLabel, Setting};
use crate::channels::{outcome_probabilities, ChannelError, ChannelModel};
use crate::linalg::{hermitian_eig, kron, CMatrix, LinalgError, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default conjugation setting for the prep-side duals, locked by the
/// requirement that reconstruction of the correlated-environment model
/// reproduce its known process matrix.
pub const DEFAULT_CONJUGATE_B: bool = true;

/// The 12 (preparation, setting) pairs in canonical enumeration order:
/// preparations z0, z1, x1, y1 each measured in x, y, z.
pub fn canonical_settings() -> Vec<(BasisLabel, Setting)> {
    let mut v = Vec::with_capacity(12);
    for prep in BasisLabel::CANONICAL {
        for setting in Setting::ALL {
            v.push((prep, setting));
        }
    }
    v
}

#[derive(Debug, Error, PartialEq)]
pub enum TomographyError {
    #[error("incomplete table: missing (prep {prep}, setting {setting})")]
    IncompleteTable { prep: &'static str, setting: &'static str },
    #[error("zero shots for (prep {prep}, setting {setting})")]
    ZeroShots { prep: &'static str, setting: &'static str },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Per-(preparation, setting) outcome counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CountsTable {
    counts: BTreeMap<(BasisLabel, Setting), [u64; 2]>,
}

impl CountsTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert (overwrite) the outcome counts of one setting.
    pub fn insert(&mut self, prep: BasisLabel, setting: Setting, n0: u64, n1: u64) {
        self.counts.insert((prep, setting), [n0, n1]);
    }

    /// Add to the outcome counts of one setting.
    pub fn accumulate(&mut self, prep: BasisLabel, setting: Setting, outcome: u8, n: u64) {
        let e = self.counts.entry((prep, setting)).or_insert([0, 0]);
        e[outcome as usize & 1] = e[outcome as usize & 1].saturating_add(n);
    }

    pub fn get(&self, prep: BasisLabel, setting: Setting) -> Option<[u64; 2]> {
        self.counts.get(&(prep, setting)).copied()
    }

    pub fn shots(&self, prep: BasisLabel, setting: Setting) -> Option<u64> {
        self.get(prep, setting).map(|c| c[0].saturating_add(c[1]))
    }

    pub fn is_complete(&self) -> bool {
        canonical_settings().iter().all(|&(p, s)| self.counts.contains_key(&(p, s)))
    }

    /// Rows in canonical order (prep, setting, outcome, count).
    pub fn rows(&self) -> Vec<(BasisLabel, Setting, u8, u64)> {
        let mut out = Vec::with_capacity(24);
        for (prep, setting) in canonical_settings() {
            if let Some(c) = self.get(prep, setting) {
                out.push((prep, setting, 0, c[0]));
                out.push((prep, setting, 1, c[1]));
            }
        }
        out
    }
}

/// Conditional outcome frequencies per (preparation, setting), plus the
/// shot counts they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    freqs: BTreeMap<(BasisLabel, Setting), [f64; 2]>,
    shots: BTreeMap<(BasisLabel, Setting), u64>,
}

impl FrequencyTable {
    pub fn get(&self, prep: BasisLabel, setting: Setting) -> [f64; 2] {
        self.freqs[&(prep, setting)]
    }

    pub fn shots(&self, prep: BasisLabel, setting: Setting) -> u64 {
        self.shots[&(prep, setting)]
    }

    pub fn shots_map(&self) -> &BTreeMap<(BasisLabel, Setting), u64> {
        &self.shots
    }

    /// Frequency of the canonical outcome label j given preparation k:
    /// z labels read their own outcome, x1/y1 read the outcome-1 frequency.
    pub fn canonical_frequency(&self, prep: BasisLabel, label: BasisLabel) -> f64 {
        self.get(prep, label.setting)[label.outcome as usize & 1]
    }

    /// Convex mixture of two tables (for linearity checks); shot counts are
    /// taken from `self`.
    pub fn mix(&self, other: &FrequencyTable, weight: f64) -> FrequencyTable {
        let mut freqs = BTreeMap::new();
        for (k, v) in &self.freqs {
            let o = other.freqs[k];
            freqs.insert(*k, [
                weight * v[0] + (1.0 - weight) * o[0],
                weight * v[1] + (1.0 - weight) * o[1],
            ]);
        }
        FrequencyTable { freqs, shots: self.shots.clone() }
    }

    /// Build directly from per-setting outcome-1 probabilities (exact data).
    pub fn from_probabilities(
        p1: impl Fn(BasisLabel, Setting) -> f64,
        shots_per_setting: u64,
    ) -> FrequencyTable {
        let mut freqs = BTreeMap::new();
        let mut shots = BTreeMap::new();
        for (prep, setting) in canonical_settings() {
            let p = p1(prep, setting);
            freqs.insert((prep, setting), [1.0 - p, p]);
            shots.insert((prep, setting), shots_per_setting);
        }
        FrequencyTable { freqs, shots }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic substream seed derived from a master seed and two indices.
/// Independent of evaluation order, so parallel and serial runs agree.
pub fn substream_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut s = master;
    let m0 = splitmix64(&mut s);
    let mut s = m0 ^ a.wrapping_mul(0xA076_1D64_78BD_642F);
    let m1 = splitmix64(&mut s);
    let mut s = m1 ^ b.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    splitmix64(&mut s)
}

/// Sample shot counts for all 12 settings of a model: one binomial draw per
/// setting with the model's exact outcome probability. Each setting uses
/// its own RNG substream keyed by the setting index, so results are
/// reproducible regardless of sampling order.
pub fn sample_counts(
    model: &ChannelModel,
    n_shots: u64,
    seed: u64,
) -> Result<CountsTable, TomographyError> {
    let mut table = CountsTable::new();
    for (idx, (prep, setting)) in canonical_settings().into_iter().enumerate() {
        let (_, p1) = outcome_probabilities(model, prep, setting)?;
        let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, idx as u64, 0));
        let mut n1 = 0u64;
        for _ in 0..n_shots {
            if rng.random::<f64>() < p1 {
                n1 += 1;
            }
        }
        table.insert(prep, setting, n_shots - n1, n1);
    }
    Ok(table)
}

/// Conditional frequencies from a complete counts table.
pub fn frequencies(counts: &CountsTable) -> Result<FrequencyTable, TomographyError> {
    let mut freqs = BTreeMap::new();
    let mut shots = BTreeMap::new();
    for (prep, setting) in canonical_settings() {
        let c = counts.get(prep, setting).ok_or(TomographyError::IncompleteTable {
            prep: prep.as_str(),
            setting: setting.as_str(),
        })?;
        let n = c[0].saturating_add(c[1]);
        if n == 0 {
            return Err(TomographyError::ZeroShots {
                prep: prep.as_str(),
                setting: setting.as_str(),
            });
        }
        freqs.insert((prep, setting), [c[0] as f64 / n as f64, c[1] as f64 / n as f64]);
        shots.insert((prep, setting), n);
    }
    Ok(FrequencyTable { freqs, shots })
}

/// Exact frequency table of a model (infinite-statistics limit). The shot
/// count recorded per setting is nominal.
pub fn exact_frequencies(model: &ChannelModel) -> Result<FrequencyTable, TomographyError> {
    let mut freqs = BTreeMap::new();
    let mut shots = BTreeMap::new();
    for (prep, setting) in canonical_settings() {
        let (p0, p1) = outcome_probabilities(model, prep, setting)?;
        freqs.insert((prep, setting), [p0, p1]);
        shots.insert((prep, setting), 1);
    }
    Ok(FrequencyTable { freqs, shots })
}

/// A reconstructed process matrix, trace fixed to the dimension (2).
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn new(matrix: CMatrix) -> Self {
        ChoiMatrix { matrix }
    }
}

/// Per-preparation state reconstruction ρ'_k = Σ_j f(j|k)·D_j, in canonical
/// preparation order.
pub fn reconstruct_states(f: &FrequencyTable) -> [CMatrix; 4] {
    let duals: Vec<CMatrix> = BasisLabel::CANONICAL
        .iter()
        .map(|&l| qubit_dual(l).expect("canonical"))
        .collect();
    let mut out: Vec<CMatrix> = Vec::with_capacity(4);
    for prep in BasisLabel::CANONICAL {
        let mut rho = CMatrix::zeros(2, 2);
        for (label, dual) in BasisLabel::CANONICAL.iter().zip(duals.iter()) {
            let fr = f.canonical_frequency(prep, *label);
            rho = rho.add(&dual.scale(C64::new(fr, 0.0))).expect("2x2");
        }
        out.push(rho);
    }
    out.try_into().expect("four preparations")
}

/// Linear-inversion process reconstruction from a frequency table.
pub fn reconstruct_choi(f: &FrequencyTable, conjugate_b_side: bool) -> ChoiMatrix {
    let states = reconstruct_states(f);
    let mut rho = CMatrix::zeros(4, 4);
    for (prep, state) in BasisLabel::CANONICAL.iter().zip(states.iter()) {
        let d = qubit_dual(*prep).expect("canonical");
        let d = if conjugate_b_side { d.conjugate() } else { d };
        rho = rho.add(&kron(&d, state)).expect("4x4");
    }
    ChoiMatrix::new(rho.symmetrize())
}

/// Minimal eigenvalue and its (phase-fixed) eigenvector.
pub fn min_eigenpair(choi: &ChoiMatrix) -> Result<(f64, Vec<C64>), TomographyError> {
    let eig = hermitian_eig(&choi.matrix, 1e-8)?;
    Ok((eig.eigenvalues[0], eig.eigenvectors[0].clone()))
}

/// Outcome-1 Born probability of a state in a canonical measurement setting.
pub fn born_probability(rho: &CMatrix, setting: Setting) -> f64 {
    meas_operator(BasisLabel { setting, outcome: 1 })
        .matmul(rho)
        .expect("2x2")
        .trace()
        .re
}

//! Rank-1 witness observables and the Hoeffding consistency test.
//!
//! A witness Z = |λ⟩⟨λ| is positive semidefinite, so a reconstructed
//! process that is physical can never give it a negative expectation value.
//! Expanding Z in the product basis of (conjugated) preparation elements
//! and measurement elements turns its expectation into a weighted sum of
//! observed frequencies; the Hoeffding inequality then bounds how likely
//! shot noise alone is to push that sum below zero by any observed margin.
//! A bound under the chosen threshold flags the data as inconsistent with
//! the assumed model.

use crate::bases::{meas_operator, prep_state, qubit_dual, BasisLabel, Setting};
use crate::linalg::{kron, solve_linear, CMatrix, LinalgError, C64};
use crate::tomography::{canonical_settings, FrequencyTable, TomographyError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WitnessError {
    #[error("witness vector must be a non-zero 4-component column")]
    ZeroVector,
    #[error("witness vector must have 4 components, got {0}")]
    WrongLength(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tomography(#[from] TomographyError),
}

/// The 16 (preparation label, output label) coefficient keys in canonical
/// order (preparation-major).
pub fn coefficient_keys() -> Vec<(BasisLabel, BasisLabel)> {
    let mut keys = Vec::with_capacity(16);
    for k in BasisLabel::CANONICAL {
        for j in BasisLabel::CANONICAL {
            keys.push((k, j));
        }
    }
    keys
}

/// A rank-1 test observable with its frequency-expansion coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// Unit vector |λ⟩ in the preparation⊗output tensor ordering,
    /// serialized as (re, im) pairs.
    pub vector: Vec<(f64, f64)>,
    /// Real expansion coefficients, one per (preparation, output) key in
    /// `coefficient_keys` order.
    pub coefficients: Vec<f64>,
    /// Per-(preparation, setting) coefficient ranges (min, max) over the
    /// per-shot values of that setting, in `canonical_settings` order.
    pub per_setting_ranges: Vec<(f64, f64)>,
    /// Σ over the 12 settings of (max − min)².
    pub range_constant: f64,
}

/// Verdict of a consistency test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Result of one consistency test: the signed witness expectation, the
/// Hoeffding bound on reaching it by shot noise alone, and the verdict
/// (inconsistent exactly when the expectation is negative and the bound
/// falls below the threshold).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestReport {
    pub expectation_t: f64,
    pub p_bound: f64,
    pub alpha: f64,
    pub verdict: Verdict,
    /// Shots per (prep, setting) key, canonical order.
    pub shots_per_setting: Vec<u64>,
}

impl TestReport {
    pub fn is_inconsistent(&self) -> bool {
        self.verdict == Verdict::Inconsistent
    }
}

/// Expansion basis element for coefficient index (k, j): the conjugated
/// preparation projector tensored with the output measurement operator.
fn expansion_op(k: BasisLabel, j: BasisLabel) -> CMatrix {
    let prep = prep_state(k, true).expect("canonical");
    kron(&prep, &meas_operator(j))
}

/// Dual of the expansion element, used by tests as an independent route to
/// the coefficients: w_(k,j) = Tr[(D̃_k ⊗ D_j)† Z].
pub fn coefficient_dual(k: BasisLabel, j: BasisLabel) -> CMatrix {
    kron(
        &qubit_dual(k).expect("canonical").conjugate(),
        &qubit_dual(j).expect("canonical"),
    )
}

fn vec4(matrix: &CMatrix) -> Vec<C64> {
    let mut v = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            v.push(matrix[(i, j)]);
        }
    }
    v
}

/// Build a witness from a state vector. The vector is normalized first;
/// coefficients come from solving the 16x16 linear system that expresses
/// |λ⟩⟨λ| in the product basis. Outcomes absent from the canonical basis
/// (x and y outcome 0) carry coefficient zero in the per-setting ranges.
pub fn witness_from_vector(v: &[C64]) -> Result<Witness, WitnessError> {
    if v.len() != 4 {
        return Err(WitnessError::WrongLength(v.len()));
    }
    let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    if norm2 < 1e-16 {
        return Err(WitnessError::ZeroVector);
    }
    let scale = 1.0 / norm2.sqrt();
    let unit: Vec<C64> = v.iter().map(|c| c * scale).collect();
    let z = CMatrix::projector(&unit);

    // columns of the 16x16 system are the vectorized basis elements
    let keys = coefficient_keys();
    let mut system = CMatrix::zeros(16, 16);
    for (col, &(k, j)) in keys.iter().enumerate() {
        let op = vec4(&expansion_op(k, j));
        for (row, val) in op.into_iter().enumerate() {
            system[(row, col)] = val;
        }
    }
    let solution = solve_linear(&system, &vec4(&z))?;
    let coefficients: Vec<f64> = solution.iter().map(|c| c.re).collect();

    let coeff = |k: BasisLabel, j: BasisLabel| -> f64 {
        let idx = keys.iter().position(|&p| p == (k, j)).expect("key");
        coefficients[idx]
    };
    let mut per_setting_ranges = Vec::with_capacity(12);
    let mut range_constant = 0.0;
    for (prep, setting) in canonical_settings() {
        let values: Vec<f64> = match setting {
            Setting::Z => vec![coeff(prep, BasisLabel::Z0), coeff(prep, BasisLabel::Z1)],
            Setting::X => vec![coeff(prep, BasisLabel::X1), 0.0],
            Setting::Y => vec![coeff(prep, BasisLabel::Y1), 0.0],
        };
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        per_setting_ranges.push((lo, hi));
        range_constant += (hi - lo) * (hi - lo);
    }

    Ok(Witness {
        vector: unit.iter().map(|c| (c.re, c.im)).collect(),
        coefficients,
        per_setting_ranges,
        range_constant,
    })
}

impl Witness {
    pub fn vector_c64(&self) -> Vec<C64> {
        self.vector.iter().map(|&(re, im)| C64::new(re, im)).collect()
    }

    /// |λ⟩⟨λ| as a matrix.
    pub fn observable(&self) -> CMatrix {
        CMatrix::projector(&self.vector_c64())
    }

    pub fn coefficient(&self, prep: BasisLabel, output: BasisLabel) -> f64 {
        let idx = coefficient_keys()
            .iter()
            .position(|&p| p == (prep, output))
            .expect("canonical key");
        self.coefficients[idx]
    }

    /// Σ w_(k,j) · B_k ⊗ M_j, for expansion-exactness checks.
    pub fn expansion(&self) -> CMatrix {
        let mut out = CMatrix::zeros(4, 4);
        for (&(k, j), &w) in coefficient_keys().iter().zip(self.coefficients.iter()) {
            out = out
                .add(&expansion_op(k, j).scale(C64::new(w, 0.0)))
                .expect("4x4");
        }
        out
    }
}

/// ⟨Z⟩ = Σ w_(k,j) · f(j|k): the witness expectation evaluated on observed
/// conditional frequencies. Equals Tr[Z · reconstruct_choi(f)].
pub fn expectation_from_frequencies(w: &Witness, f: &FrequencyTable) -> f64 {
    coefficient_keys()
        .iter()
        .zip(w.coefficients.iter())
        .map(|(&(k, j), &c)| c * f.canonical_frequency(k, j))
        .sum()
}

/// Hoeffding tail bound on observing expectation ≤ −t from shot noise when
/// the model truly has a non-negative expectation. Vacuous (1) for t ≤ 0.
/// Shots are per (prep, setting), canonical order; with equal shots N this
/// is exp(−2 t² N / C).
pub fn hoeffding_bound(t: f64, shots: &BTreeMap<(BasisLabel, Setting), u64>, w: &Witness) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let mut denom = 0.0;
    for ((prep, setting), (lo, hi)) in canonical_settings().iter().zip(w.per_setting_ranges.iter()) {
        let n = shots.get(&(*prep, *setting)).copied().unwrap_or(0).max(1) as f64;
        let range = hi - lo;
        denom += range * range / n;
    }
    if denom <= 0.0 {
        return if t > 0.0 { 0.0_f64.max(f64::MIN_POSITIVE) } else { 1.0 };
    }
    (-2.0 * t * t / denom).exp().clamp(f64::MIN_POSITIVE, 1.0)
}

/// The three-step test: frequencies, expectation, bound, verdict.
/// The witness must come from independent data or a theoretical hypothesis,
/// never from `counts` itself.
pub fn consistency_test(
    w: &Witness,
    counts: &crate::tomography::CountsTable,
    alpha: f64,
) -> Result<TestReport, WitnessError> {
    let f = crate::tomography::frequencies(counts)?;
    let expectation = expectation_from_frequencies(w, &f);
    let t = (-expectation).max(0.0);
    let p_bound = hoeffding_bound(t, f.shots_map(), w);
    let verdict = if expectation < 0.0 && p_bound < alpha {
        Verdict::Inconsistent
    } else {
        Verdict::Consistent
    };
    Ok(TestReport {
        expectation_t: expectation,
        p_bound,
        alpha,
        verdict,
        shots_per_setting: canonical_settings()
            .iter()
            .map(|&(p, s)| f.shots(p, s))
            .collect(),
    })
}

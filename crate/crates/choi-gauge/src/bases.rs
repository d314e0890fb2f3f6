//! Preparation states, measurement operators and their dual bases.
//!
//! The operator space of a qubit is spanned by four rank-1 projectors taken
//! from three projective measurement settings: both z outcomes plus the +1
//! outcomes of x and y. Duals `D_a` satisfy `Tr[D_a M_b] = δ_ab` and drive
//! linear-inversion reconstruction. A hard-coded dual set is the reference;
//! `dual_from_gram` rebuilds duals for any informationally complete operator
//! set and serves as an independent oracle for it.

use crate::linalg::{hermitian_eig, CMatrix, LinalgError, C64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Measurement setting (Pauli axis).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    X,
    Y,
    Z,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::X, Setting::Y, Setting::Z];

    pub fn as_str(self) -> &'static str {
        match self {
            Setting::X => "x",
            Setting::Y => "y",
            Setting::Z => "z",
        }
    }
}

impl std::str::FromStr for Setting {
    type Err = BasesError;
    fn from_str(s: &str) -> Result<Self, BasesError> {
        match s {
            "x" => Ok(Setting::X),
            "y" => Ok(Setting::Y),
            "z" => Ok(Setting::Z),
            other => Err(BasesError::UnknownLabel(other.to_string())),
        }
    }
}

/// A (setting, outcome) pair labelling a projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub setting: Setting,
    pub outcome: u8,
}

impl BasisLabel {
    pub const Z0: BasisLabel = BasisLabel { setting: Setting::Z, outcome: 0 };
    pub const Z1: BasisLabel = BasisLabel { setting: Setting::Z, outcome: 1 };
    pub const X1: BasisLabel = BasisLabel { setting: Setting::X, outcome: 1 };
    pub const Y1: BasisLabel = BasisLabel { setting: Setting::Y, outcome: 1 };

    /// The four labels forming the operator basis, in canonical order.
    pub const CANONICAL: [BasisLabel; 4] = [Self::Z0, Self::Z1, Self::X1, Self::Y1];

    pub fn is_canonical(self) -> bool {
        Self::CANONICAL.contains(&self)
    }

    /// Index into the canonical order, if canonical.
    pub fn canonical_index(self) -> Option<usize> {
        Self::CANONICAL.iter().position(|l| *l == self)
    }

    pub fn as_str(self) -> &'static str {
        match (self.setting, self.outcome) {
            (Setting::Z, 0) => "z0",
            (Setting::Z, 1) => "z1",
            (Setting::X, 0) => "x0",
            (Setting::X, 1) => "x1",
            (Setting::Y, 0) => "y0",
            (Setting::Y, 1) => "y1",
            _ => "??",
        }
    }
}

impl std::str::FromStr for BasisLabel {
    type Err = BasesError;
    fn from_str(s: &str) -> Result<Self, BasesError> {
        match s {
            "z0" => Ok(BasisLabel::Z0),
            "z1" => Ok(BasisLabel::Z1),
            "x0" => Ok(BasisLabel { setting: Setting::X, outcome: 0 }),
            "x1" => Ok(BasisLabel::X1),
            "y0" => Ok(BasisLabel { setting: Setting::Y, outcome: 0 }),
            "y1" => Ok(BasisLabel::Y1),
            other => Err(BasesError::UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BasesError {
    #[error("label {0:?} is not one of the four canonical basis labels")]
    NotCanonicalLabel(BasisLabel),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("operator set is not informationally complete (condition number {cond:.3e})")]
    SingularGram { cond: f64 },
    #[error("expected {expected} operators of dimension {dim}, got {got}")]
    WrongOperatorCount { expected: usize, got: usize, dim: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn ket(amplitudes: [(f64, f64); 2]) -> Vec<C64> {
    amplitudes.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

/// |0⟩, |1⟩, |+⟩, |i⟩ kets.
pub fn basis_ket(l: BasisLabel) -> Result<Vec<C64>, BasesError> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match l {
        BasisLabel::Z0 => Ok(ket([(1.0, 0.0), (0.0, 0.0)])),
        BasisLabel::Z1 => Ok(ket([(0.0, 0.0), (1.0, 0.0)])),
        BasisLabel::X1 => Ok(ket([(s, 0.0), (s, 0.0)])),
        BasisLabel::Y1 => Ok(ket([(s, 0.0), (0.0, s)])),
        other => Err(BasesError::NotCanonicalLabel(other)),
    }
}

/// Projective measurement operator for any of the six (setting, outcome)
/// pairs. The two outcomes of a setting sum to the identity.
pub fn meas_operator(l: BasisLabel) -> CMatrix {
    let canonical = BasisLabel { setting: l.setting, outcome: 1 };
    let canonical = if l.setting == Setting::Z { l } else { canonical };
    let proj = CMatrix::projector(&basis_ket(canonical).expect("canonical by construction"));
    if l.setting != Setting::Z && l.outcome == 0 {
        CMatrix::identity(2).sub(&proj).expect("2x2")
    } else {
        proj
    }
}

/// Density matrix prepared for a canonical label. With `conjugate_b_side`
/// set, the entrywise conjugate is returned (only the y element changes,
/// |i⟩⟨i| → |-i⟩⟨-i|).
pub fn prep_state(l: BasisLabel, conjugate_b_side: bool) -> Result<CMatrix, BasesError> {
    let m = CMatrix::projector(&basis_ket(l)?);
    Ok(if conjugate_b_side { m.conjugate() } else { m })
}

/// Hard-coded dual operators of the four canonical basis elements.
pub fn qubit_dual(l: BasisLabel) -> Result<CMatrix, BasesError> {
    let m = match l {
        BasisLabel::Z0 => CMatrix::from_re_im(2, &[(1.0, 0.0), (-0.5, 0.5), (-0.5, -0.5), (0.0, 0.0)]),
        BasisLabel::Z1 => CMatrix::from_re_im(2, &[(0.0, 0.0), (-0.5, 0.5), (-0.5, -0.5), (1.0, 0.0)]),
        BasisLabel::X1 => CMatrix::from_re_im(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        BasisLabel::Y1 => CMatrix::from_re_im(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
        other => return Err(BasesError::NotCanonicalLabel(other)),
    };
    Ok(m)
}

/// Duals of an arbitrary linearly independent operator set, from inverting
/// the Gram matrix G_ab = Tr[M_a† M_b]. Rejects sets whose Gram condition
/// number exceeds 1e10.
pub fn dual_from_gram(ops: &[CMatrix]) -> Result<Vec<CMatrix>, BasesError> {
    if ops.is_empty() {
        return Err(BasesError::WrongOperatorCount { expected: 1, got: 0, dim: 0 });
    }
    let dim = ops[0].rows();
    let expected = dim * dim;
    if ops.len() != expected || ops.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Err(BasesError::WrongOperatorCount { expected, got: ops.len(), dim });
    }
    let n = ops.len();
    let mut gram = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            gram[(a, b)] = ops[a].adjoint().matmul(&ops[b])?.trace();
        }
    }
    // Gram matrix of an independent set is Hermitian positive definite.
    let eig = hermitian_eig(&gram, 1e-8)?;
    let lam_min = eig.eigenvalues[0];
    let lam_max = eig.eigenvalues[n - 1];
    let cond = if lam_min <= 0.0 { f64::INFINITY } else { lam_max / lam_min };
    if cond > 1e10 {
        return Err(BasesError::SingularGram { cond });
    }
    // D_a = Σ_c (G⁻¹)_ac M_c†, giving Tr[D_a M_b] = δ_ab.
    let mut duals = Vec::with_capacity(n);
    for a in 0..n {
        let rhs: Vec<C64> = (0..n)
            .map(|i| if i == a { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        // solve G x = e_a, then D_a = Σ_c x_c M_c† (G row a of inverse,
        // using hermiticity of G)
        let x = crate::linalg::solve_linear(&gram, &rhs)?;
        let mut d = CMatrix::zeros(dim, dim);
        for (c, op) in ops.iter().enumerate() {
            // x_c = (G⁻¹)_ca, and G⁻¹ is Hermitian, so (G⁻¹)_ac = conj(x_c)
            d = d.add(&op.adjoint().scale(x[c].conj()))?;
        }
        duals.push(d);
    }
    Ok(duals)
}

/// The four canonical (label, element, dual) triples bundled together.
pub struct OperatorBasis {
    pub elements: Vec<(BasisLabel, CMatrix)>,
    pub duals: Vec<(BasisLabel, CMatrix)>,
}

impl OperatorBasis {
    pub fn canonical() -> Self {
        let elements = BasisLabel::CANONICAL
            .iter()
            .map(|&l| (l, meas_operator(l)))
            .collect();
        let duals = BasisLabel::CANONICAL
            .iter()
            .map(|&l| (l, qubit_dual(l).expect("canonical")))
            .collect();
        OperatorBasis { elements, duals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    #[test]
    fn measurement_examples() {
        let z0 = meas_operator(BasisLabel::Z0);
        assert_eq!(z0[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(z0[(1, 1)], C64::new(0.0, 0.0));

        let x1 = meas_operator(BasisLabel::X1);
        assert!((x1[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);

        let x0 = meas_operator(BasisLabel { setting: Setting::X, outcome: 0 });
        assert!(x0
            .add(&x1)
            .unwrap()
            .approx_eq(&CMatrix::identity(2), 1e-15));
        for s in Setting::ALL {
            let sum = meas_operator(BasisLabel { setting: s, outcome: 0 })
                .add(&meas_operator(BasisLabel { setting: s, outcome: 1 }))
                .unwrap();
            assert!(sum.approx_eq(&CMatrix::identity(2), 1e-15));
        }
    }

    #[test]
    fn duality_table_is_identity() {
        for a in BasisLabel::CANONICAL {
            for b in BasisLabel::CANONICAL {
                let t = qubit_dual(a)
                    .unwrap()
                    .matmul(&meas_operator(b))
                    .unwrap()
                    .trace();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (t - C64::new(expect, 0.0)).norm() < 1e-12,
                    "Tr[D_{} M_{}] = {t}",
                    a.as_str(),
                    b.as_str()
                );
            }
        }
    }

    #[test]
    fn gram_duals_match_hardcoded() {
        let ops: Vec<CMatrix> = BasisLabel::CANONICAL.iter().map(|&l| meas_operator(l)).collect();
        let duals = dual_from_gram(&ops).unwrap();
        for (l, d) in BasisLabel::CANONICAL.iter().zip(duals.iter()) {
            assert!(
                d.approx_eq(&qubit_dual(*l).unwrap(), 1e-12),
                "gram dual for {} deviates",
                l.as_str()
            );
        }
    }

    #[test]
    fn normalized_pauli_basis_is_self_dual() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sc = C64::new(s, 0.0);
        let i2 = CMatrix::identity(2).scale(sc);
        let sx = CMatrix::from_re_im(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).scale(sc);
        let sy = CMatrix::from_re_im(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]).scale(sc);
        let sz = CMatrix::from_re_im(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]).scale(sc);
        let ops = vec![i2, sx, sy, sz];
        let duals = dual_from_gram(&ops).unwrap();
        for (op, d) in ops.iter().zip(duals.iter()) {
            assert!(d.approx_eq(op, 1e-12));
        }
    }

    #[test]
    fn repeated_operator_is_singular() {
        let ops: Vec<CMatrix> = [BasisLabel::Z0, BasisLabel::Z0, BasisLabel::X1, BasisLabel::Y1]
            .iter()
            .map(|&l| meas_operator(l))
            .collect();
        assert!(matches!(dual_from_gram(&ops), Err(BasesError::SingularGram { .. })));
    }

    #[test]
    fn prep_state_conjugation() {
        let y = prep_state(BasisLabel::Y1, false).unwrap();
        let yc = prep_state(BasisLabel::Y1, true).unwrap();
        assert!((y[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((yc[(0, 1)] - C64::new(0.0, 0.5)).norm() < 1e-15);
        let z = prep_state(BasisLabel::Z0, false).unwrap();
        assert!(z.approx_eq(&prep_state(BasisLabel::Z0, true).unwrap(), 0.0));
        assert!(prep_state(BasisLabel { setting: Setting::X, outcome: 0 }, false).is_err());
    }

    #[test]
    fn completeness_identity() {
        // Σ_a Tr[D_a ρ] M_a = ρ for an arbitrary Hermitian ρ
        let rho = CMatrix::from_re_im(2, &[(0.3, 0.0), (0.2, -0.4), (0.2, 0.4), (0.7, 0.0)]);
        let mut rec = CMatrix::zeros(2, 2);
        for l in BasisLabel::CANONICAL {
            let c = qubit_dual(l).unwrap().matmul(&rho).unwrap().trace();
            rec = rec.add(&meas_operator(l).scale(c)).unwrap();
        }
        assert!(rec.approx_eq(&rho, 1e-12));
    }

    #[test]
    fn canonical_product_basis_spans_two_qubit_space() {
        // sanity for the witness expansion downstream
        let mut gram = CMatrix::zeros(16, 16);
        let ops: Vec<CMatrix> = BasisLabel::CANONICAL
            .iter()
            .flat_map(|&k| {
                BasisLabel::CANONICAL.iter().map(move |&j| {
                    kron(&prep_state(k, true).unwrap(), &meas_operator(j))
                })
            })
            .collect();
        for a in 0..16 {
            for b in 0..16 {
                gram[(a, b)] = ops[a].adjoint().matmul(&ops[b]).unwrap().trace();
            }
        }
        let eig = hermitian_eig(&gram, 1e-8).unwrap();
        assert!(eig.eigenvalues[0] > 1e-3);
    }
}

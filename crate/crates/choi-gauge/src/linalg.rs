//! Dense complex matrix algebra for small dimensions (up to 16x16).
//!
//! Everything here is sized for qubit work: 2x2 operators, 4x4 Choi matrices,
//! 16x16 expansion systems. Matrices are row-major, immutable in the public
//! API, and all operations are pure functions.

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Errors from matrix algebra and decompositions.
#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("hermiticity deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitian { deviation: f64, tol: f64 },
    #[error("dimension mismatch: {left} vs {right} for {op}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    BadDimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("singular linear system")]
    Singular,
}

/// Dense complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Which tensor factor of a 2⊗2 system to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// First factor.
    A,
    /// Second factor.
    B,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice of entries; length must equal rows*cols.
    pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        CMatrix {
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    /// Build a square matrix from (re, im) pairs, row-major.
    pub fn from_re_im(n: usize, pairs: &[(f64, f64)]) -> Self {
        assert_eq!(pairs.len(), n * n, "entry count mismatch");
        CMatrix {
            rows: n,
            cols: n,
            data: pairs.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        }
    }

    /// Column vector from a slice.
    pub fn col_vector(v: &[C64]) -> Self {
        CMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Rank-1 projector |v⟩⟨v| from a ket.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn dims(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "add",
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "sub",
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> CMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise |self - rhs|; panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within an absolute tolerance.
    pub fn approx_eq(&self, rhs: &CMatrix, tol: f64) -> bool {
        (self.rows, self.cols) == (rhs.rows, rhs.cols) && self.max_abs_diff(rhs) <= tol
    }

    /// max |A - A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// (A + A†)/2.
    pub fn symmetrize(&self) -> CMatrix {
        self.add(&self.adjoint())
            .expect("square by construction")
            .scale(C64::new(0.5, 0.0))
    }

    /// Conjugation U A U†.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<CMatrix, LinalgError> {
        u.matmul(self)?.matmul(&u.adjoint())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product, dimensions (r_a·r_b)x(c_a·c_b).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let av = a[(i, j)];
            if av == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = av * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Trace out one factor of a 4x4 (2⊗2) matrix; the trace is preserved.
pub fn partial_trace(a: &CMatrix, subsystem: Subsystem) -> Result<CMatrix, LinalgError> {
    if a.rows != 4 || a.cols != 4 {
        return Err(LinalgError::BadDimension {
            expected: 4,
            rows: a.rows,
            cols: a.cols,
        });
    }
    let mut out = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..2 {
                s += match subsystem {
                    // trace out the first factor: keep second-factor indices
                    Subsystem::A => a[(k * 2 + i, k * 2 + j)],
                    // trace out the second factor: keep first-factor indices
                    Subsystem::B => a[(i * 2 + k, j * 2 + k)],
                };
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascend; eigenvector columns are orthonormal and index-aligned.
/// The first component of each eigenvector with magnitude above 1e-8 is made
/// real and non-negative so decompositions are reproducible across runs.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<C64>>,
}

impl HermitianEig {
    /// Σ λ_i v_i v_i†, for residual checks.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut out = CMatrix::zeros(n, n);
        for (lam, v) in self.eigenvalues.iter().zip(self.eigenvectors.iter()) {
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += C64::new(*lam, 0.0) * v[i] * v[j].conj();
                }
            }
        }
        out
    }
}

fn fix_phase(v: &mut [C64]) {
    for i in 0..v.len() {
        if v[i].norm() > 1e-8 {
            let inv = (v[i] / v[i].norm()).conj();
            for x in v.iter_mut() {
                *x *= inv;
            }
            return;
        }
    }
}

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (A+A†)/2 before decomposition; inputs whose
/// hermiticity deviation exceeds `tol` are rejected.
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<HermitianEig, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let deviation = a.hermiticity_deviation();
    if deviation > tol {
        return Err(LinalgError::NonHermitian { deviation, tol });
    }
    let n = a.rows;
    let mut m = a.symmetrize();
    let mut v = CMatrix::identity(n);
    let scale = m.max_norm().max(1e-300);
    let threshold = scale * 1e-15;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b <= threshold * 1e-2 {
                    continue;
                }
                let phase = apq / b;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // zero the (p,q) entry of U† M U with
                // U = [[c, -s·phase], [s·conj(phase), c]] acting on columns p,q
                let zeta = (app - aqq) / (2.0 * b);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = C64::new(c, 0.0);
                let sp = phase.scale(s);

                // columns of M: M ← M U
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * cs + miq * sp.conj();
                    m[(i, q)] = miq * cs - mip * sp;
                }
                // rows of M: M ← U† M
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * cs + mqj * sp;
                    m[(q, j)] = mqj * cs - mpj * sp.conj();
                }
                // accumulate eigenvectors: V ← V U
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cs + viq * sp.conj();
                    v[(i, q)] = viq * cs - vip * sp;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let lam = m[(k, k)].re;
            let col: Vec<C64> = (0..n).map(|i| v[(i, k)]).collect();
            (lam, col)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (lam, mut col) in pairs {
        fix_phase(&mut col);
        eigenvalues.push(lam);
        eigenvectors.push(col);
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Solve A x = b by partial-pivot LU; A square complex.
pub fn solve_linear(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    assert_eq!(b.len(), n, "rhs length mismatch");
    let mut lu = a.clone();
    let mut x: Vec<C64> = b.to_vec();
    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lu[(r, col)].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("non-empty");
        if pivot_mag < 1e-300 {
            return Err(LinalgError::Singular);
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            x.swap(col, pivot_row);
        }
        let pivot = lu[(col, col)];
        for r in (col + 1)..n {
            let factor = lu[(r, col)] / pivot;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            lu[(r, col)] = factor;
            for j in (col + 1)..n {
                let sub = factor * lu[(col, j)];
                lu[(r, j)] -= sub;
            }
            let sub = factor * x[col];
            x[r] -= sub;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in (col + 1)..n {
            s -= lu[(col, j)] * x[j];
        }
        x[col] = s / lu[(col, col)];
    }
    Ok(x)
}

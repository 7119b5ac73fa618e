//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra` dense matrices over `Complex<f64>`. Tensor indices
//! are flattened row-major: the basis vector `x^{i_1} ⊗ … ⊗ x^{i_n}` (zero-based
//! letters) lives at offset `Σ i_k · N^{n-k}`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Complex64 = nalgebra::Complex<f64>;
pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

/// Environment variable consulted by [`Tolerance::from_env`].
pub const EPS_ENV_VAR: &str = "WICKFORGE_EPS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |A - A^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),
}

/// Global equality tolerance. Always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self, LinalgError> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Self(eps))
        } else {
            Err(LinalgError::InvalidTolerance(eps))
        }
    }

    /// Reads `WICKFORGE_EPS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self, LinalgError> {
        match std::env::var(EPS_ENV_VAR) {
            Ok(raw) => {
                let eps = raw
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| LinalgError::InvalidTolerance(f64::NAN))?;
                Self::new(eps)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    pub fn accepts(self, residual: f64) -> bool {
        residual <= self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(Self::DEFAULT_EPS)
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = LinalgError;

    fn try_from(eps: f64) -> Result<Self, Self::Error> {
        Self::new(eps)
    }
}

impl From<Tolerance> for f64 {
    fn from(tol: Tolerance) -> f64 {
        tol.0
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Kronecker product; block `(i, j)` of the result is `a[(i, j)] · b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (br, bc) = b.shape();
    let mut out = Matrix::zeros(a.nrows() * br, a.ncols() * bc);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let s = a[(i, j)];
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut block = out.view_mut((i * br, j * bc), (br, bc));
            block.zip_apply(b, |o, x| *o = s * x);
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(a: &Matrix) -> Matrix {
    a.adjoint()
}

/// Largest entry modulus, `‖A‖_max`. Zero for empty matrices.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
}

pub fn hermitian_residual(a: &Matrix) -> Result<f64, LinalgError> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    let mut worst = 0.0_f64;
    for j in 0..cols {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    Ok(worst)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_spectrum(a: &Matrix, tol: Tolerance) -> Result<Vec<f64>, LinalgError> {
    let residual = hermitian_residual(a)?;
    if !tol.accepts(residual) {
        return Err(LinalgError::NotHermitian { residual });
    }
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let mut eig: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    a.singular_values().iter().copied().collect()
}

/// Largest singular value.
pub fn operator_norm(a: &Matrix) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

/// Smallest singular value of a square matrix (zero for the empty matrix).
pub fn smallest_singular_value(a: &Matrix) -> f64 {
    singular_values(a).into_iter().reduce(f64::min).unwrap_or(0.0)
}

fn rank_threshold(sigma: &[f64], tol: Tolerance) -> f64 {
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    tol.eps() * sigma_max.max(1.0)
}

/// Orthonormal basis of the numerical null space of `a`.
///
/// Singular values at or below `eps · max(1, σ_max)` count as zero.
pub fn kernel_basis(a: &Matrix, tol: Tolerance) -> Vec<Vector> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Vec::new();
    }
    // Zero rows do not change the kernel but give a full n×n V^†.
    let padded = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("SVD computed with V");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let threshold = rank_threshold(&sigma, tol);
    sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect()
}

/// Orthonormal bases of `span(vectors)` and of its orthogonal complement in
/// `C^ambient_dim`.
pub fn span_and_complement(
    vectors: &[Vector],
    ambient_dim: usize,
    tol: Tolerance,
) -> (Vec<Vector>, Vec<Vector>) {
    if ambient_dim == 0 {
        return (Vec::new(), Vec::new());
    }
    for v in vectors {
        assert_eq!(v.len(), ambient_dim, "vector length differs from ambient dimension");
    }
    // Zero columns pad the generator matrix so U comes back square.
    let cols = vectors.len().max(ambient_dim);
    let mut m = Matrix::zeros(ambient_dim, cols);
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    let svd = m.svd(true, false);
    let u = svd.u.expect("SVD computed with U");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let threshold = rank_threshold(&sigma, tol);
    let mut span = Vec::new();
    let mut complement = Vec::new();
    for (k, s) in sigma.iter().enumerate() {
        let col = u.column(k).into_owned();
        if *s > threshold {
            span.push(col);
        } else {
            complement.push(col);
        }
    }
    (span, complement)
}

/// Packs column vectors into a `rows × vectors.len()` matrix.
pub fn columns_to_matrix(vectors: &[Vector], rows: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// `A · v` residual helper: `max_k |(A v)_k|`.
pub fn apply_residual(a: &Matrix, v: &Vector) -> f64 {
    (a * v).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Flip operator `x^i ⊗ x^j ↦ x^j ⊗ x^i` on `E ⊗ E`.
pub fn flip(dim: usize) -> Matrix {
    let mut m = Matrix::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(j * dim + i, i * dim + j)] = c64(1.0, 0.0);
        }
    }
    m
}

//! Cross and braid operators and their algebraic consistency checks.
//!
//! Both operators are stored as `N² × N²` matrices with
//! `mat[(k, l), (i, j)] = X^{ij}_{kl}`, pair `(a, b)` flattened to `a·N + b`.
//! For the cross operator the input pair is `x^{*i} ⊗ x^j` and the output pair
//! is `x^k ⊗ x^{*l}`.

mod file;
mod report;

pub use file::{OperatorFile, OperatorFileError, RawEntry, SystemKey};
pub use report::{Check, CheckStatus, ValidationReport};

use crate::linalg::{
    c64, hermitian_residual, identity, kron, max_abs, max_abs_diff, operator_norm,
    smallest_singular_value, Complex64, Matrix, Tolerance,
};
use thiserror::Error;

/// Largest supported number of species.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("species count must be in 1..={MAX_DIM}, got {0}")]
    InvalidDim(usize),
    #[error("operator matrix for dim {dim} must be {expected}x{expected}, got {rows}x{cols}")]
    Shape {
        dim: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cross operator has dim {cross} but braid operator has dim {braid}")]
    DimensionMismatch { cross: usize, braid: usize },
    #[error("operator entries must be finite")]
    NonFinite,
}

fn check_shape(dim: usize, mat: &Matrix) -> Result<(), OperatorError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(OperatorError::InvalidDim(dim));
    }
    let expected = dim * dim;
    if mat.shape() != (expected, expected) {
        return Err(OperatorError::Shape {
            dim,
            expected,
            rows: mat.nrows(),
            cols: mat.ncols(),
        });
    }
    if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(OperatorError::NonFinite);
    }
    Ok(())
}

/// The elementary cross `T : E^* ⊗ E → E ⊗ E^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossOperator {
    dim: usize,
    mat: Matrix,
}

impl CrossOperator {
    pub fn new(dim: usize, mat: Matrix) -> Result<Self, OperatorError> {
        check_shape(dim, &mat)?;
        Ok(Self { dim, mat })
    }

    pub fn zero(dim: usize) -> Result<Self, OperatorError> {
        Self::new(dim, Matrix::zeros(dim * dim, dim * dim))
    }

    /// Builds `T` from `(i, j, k, l, T^{ij}_{kl})` entries, zero-based.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, OperatorError>
    where
        I: IntoIterator<Item = (usize, usize, usize, usize, Complex64)>,
    {
        Self::new(dim, tensor_from_entries(dim, entries)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// `T^{ij}_{kl}` with zero-based indices.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        let n = self.dim;
        self.mat[(k * n + l, i * n + j)]
    }

    /// Inverse of [`build_ttilde`]: recovers `T` from the matrix of `T̃`.
    pub fn from_ttilde(dim: usize, ttilde: &Matrix) -> Result<Self, OperatorError> {
        check_shape(dim, ttilde)?;
        let n = dim;
        // T^{ab}_{cd} = T̃^{bd}_{ac} = T̃[(a,c),(b,d)]
        let mat = Matrix::from_fn(n * n, n * n, |row, col| {
            let (c, d) = (row / n, row % n);
            let (a, b) = (col / n, col % n);
            ttilde[(a * n + c, b * n + d)]
        });
        Self::new(dim, mat)
    }
}

/// An exchange operator `B : E ⊗ E → E ⊗ E`.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidOperator {
    dim: usize,
    mat: Matrix,
}

impl BraidOperator {
    pub fn new(dim: usize, mat: Matrix) -> Result<Self, OperatorError> {
        check_shape(dim, &mat)?;
        Ok(Self { dim, mat })
    }

    /// Builds `B` from `(i, j, k, l, B^{ij}_{kl})` entries, zero-based.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, OperatorError>
    where
        I: IntoIterator<Item = (usize, usize, usize, usize, Complex64)>,
    {
        Self::new(dim, tensor_from_entries(dim, entries)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        let n = self.dim;
        self.mat[(k * n + l, i * n + j)]
    }
}

fn tensor_from_entries<I>(dim: usize, entries: I) -> Result<Matrix, OperatorError>
where
    I: IntoIterator<Item = (usize, usize, usize, usize, Complex64)>,
{
    if dim == 0 || dim > MAX_DIM {
        return Err(OperatorError::InvalidDim(dim));
    }
    let n = dim;
    let mut mat = Matrix::zeros(n * n, n * n);
    for (i, j, k, l, v) in entries {
        mat[(k * n + l, i * n + j)] += v;
    }
    Ok(mat)
}

/// The canonical pairing `g_E(x^{*i} ⊗ x^j) = δ^{ij}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub dim: usize,
}

impl Pairing {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    /// The `1 × N²` row matrix of `g_E` on `E^* ⊗ E`.
    pub fn matrix(&self) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(1, n * n, |_, col| {
            if col / n == col % n {
                c64(1.0, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        })
    }
}

/// A cross operator, optionally paired with a braid operator.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticsSystem {
    pub cross: CrossOperator,
    pub braid: Option<BraidOperator>,
    pub label: String,
}

impl StatisticsSystem {
    pub fn new(
        cross: CrossOperator,
        braid: Option<BraidOperator>,
        label: impl Into<String>,
    ) -> Result<Self, OperatorError> {
        if let Some(b) = &braid {
            if b.dim() != cross.dim() {
                return Err(OperatorError::DimensionMismatch {
                    cross: cross.dim(),
                    braid: b.dim(),
                });
            }
        }
        Ok(Self {
            cross,
            braid,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.cross.dim()
    }

    pub fn pairing(&self) -> Pairing {
        Pairing::new(self.dim())
    }
}

/// Matrix of `T̃ : E ⊗ E → E ⊗ E`, `(T̃)^{ij}_{kl} = T^{ki}_{lj}`.
pub fn build_ttilde(t: &CrossOperator) -> Matrix {
    let n = t.dim();
    Matrix::from_fn(n * n, n * n, |row, col| {
        let (k, l) = (row / n, row % n);
        let (i, j) = (col / n, col % n);
        t.entry(k, i, l, j)
    })
}

/// `max |T^{ij}_{kl} − conj(T^{ji}_{lk})|`.
pub fn check_star(t: &CrossOperator, tol: Tolerance) -> (bool, f64) {
    let n = t.dim();
    let mut residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let d = t.entry(i, j, k, l) - t.entry(j, i, l, k).conj();
                    residual = residual.max(d.norm());
                }
            }
        }
    }
    (tol.accepts(residual), residual)
}

/// Residual of `X⁽¹⁾X⁽²⁾X⁽¹⁾ = X⁽²⁾X⁽¹⁾X⁽²⁾` on the triple tensor power.
fn braid_residual(x: &Matrix, dim: usize) -> f64 {
    let id = identity(dim);
    let x1 = kron(x, &id);
    let x2 = kron(&id, x);
    let left = &x1 * &x2 * &x1;
    let right = &x2 * &x1 * &x2;
    max_abs_diff(&left, &right)
}

pub fn check_braid(b: &BraidOperator, tol: Tolerance) -> (bool, f64) {
    let r = braid_residual(b.matrix(), b.dim());
    (tol.accepts(r), r)
}

/// Yang–Baxter residual for `T̃` (an `N² × N²` matrix).
pub fn check_yang_baxter(ttilde: &Matrix, tol: Tolerance) -> (bool, f64) {
    let dim = (ttilde.nrows() as f64).sqrt().round() as usize;
    assert_eq!(dim * dim, ttilde.nrows(), "T̃ must be N²×N²");
    let r = braid_residual(ttilde, dim);
    (tol.accepts(r), r)
}

/// Residuals of the two T–B compatibility conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyResiduals {
    /// `B⁽¹⁾T⁽²⁾T⁽¹⁾ − T⁽²⁾T⁽¹⁾B⁽²⁾` as maps `E^*⊗E⊗E → E⊗E⊗E^*`.
    pub mixed: f64,
    /// `(id + T̃)(id − B)`.
    pub kernel: f64,
}

pub fn check_consistency(
    t: &CrossOperator,
    b: &BraidOperator,
    tol: Tolerance,
) -> Result<(bool, ConsistencyResiduals), OperatorError> {
    if t.dim() != b.dim() {
        return Err(OperatorError::DimensionMismatch {
            cross: t.dim(),
            braid: b.dim(),
        });
    }
    let n = t.dim();
    let id = identity(n);
    let t1 = kron(t.matrix(), &id);
    let t2 = kron(&id, t.matrix());
    let b1 = kron(b.matrix(), &id);
    let b2 = kron(&id, b.matrix());
    let moved = &t2 * &t1;
    let mixed = max_abs_diff(&(&b1 * &moved), &(&moved * &b2));

    let id2 = identity(n * n);
    let kernel = max_abs(&((&id2 + build_ttilde(t)) * (&id2 - b.matrix())));

    let r = ConsistencyResiduals { mixed, kernel };
    Ok((tol.accepts(mixed) && tol.accepts(kernel), r))
}

/// Check names, in report order.
pub mod check_names {
    pub const STAR: &str = "star";
    pub const TTILDE_HERMITIAN: &str = "ttilde_hermitian";
    pub const CROSS_INVERTIBLE: &str = "cross_invertible";
    pub const TTILDE_NORM: &str = "ttilde_norm";
    pub const YANG_BAXTER: &str = "yang_baxter";
    pub const BRAID_RELATION: &str = "braid_relation";
    pub const BRAID_INVERTIBLE: &str = "braid_invertible";
    pub const CONSISTENCY_MIXED: &str = "consistency_mixed";
    pub const CONSISTENCY_KERNEL: &str = "consistency_kernel";

    pub const ALL: [&str; 9] = [
        STAR,
        TTILDE_HERMITIAN,
        CROSS_INVERTIBLE,
        TTILDE_NORM,
        YANG_BAXTER,
        BRAID_RELATION,
        BRAID_INVERTIBLE,
        CONSISTENCY_MIXED,
        CONSISTENCY_KERNEL,
    ];
}

fn pass_or(passed: bool, fallback: CheckStatus) -> CheckStatus {
    if passed {
        CheckStatus::Pass
    } else {
        fallback
    }
}

/// Runs every algebraic law on `system`.
///
/// Cross-operator invertibility and the `‖T̃‖ ≤ 1` bound only ever warn: the
/// Boltzmann case `T = 0` is a legitimate system, and the norm bound is a
/// sufficient condition for positivity, not a consistency law.
pub fn validate_system(system: &StatisticsSystem, tol: Tolerance) -> ValidationReport {
    use check_names::*;

    let t = &system.cross;
    let ttilde = build_ttilde(t);
    let mut report = ValidationReport::default();

    let (ok, r) = check_star(t, tol);
    report.push(STAR, pass_or(ok, CheckStatus::Fail), r, "max |T^ij_kl - conj(T^ji_lk)|");

    let r = hermitian_residual(&ttilde).expect("T̃ is square");
    report.push(
        TTILDE_HERMITIAN,
        pass_or(tol.accepts(r), CheckStatus::Fail),
        r,
        "max |T~ - T~^dagger|",
    );

    let s = smallest_singular_value(t.matrix());
    report.push(
        CROSS_INVERTIBLE,
        pass_or(s > tol.eps(), CheckStatus::Warn),
        s,
        "smallest singular value of T",
    );

    let norm = operator_norm(&ttilde);
    report.push(
        TTILDE_NORM,
        pass_or(norm <= 1.0 + tol.eps(), CheckStatus::Warn),
        norm,
        "operator norm of T~ (bound 1)",
    );

    let (ok, r) = check_yang_baxter(&ttilde, tol);
    report.push(YANG_BAXTER, pass_or(ok, CheckStatus::Fail), r, "Yang-Baxter residual of T~");

    match &system.braid {
        Some(b) => {
            let (ok, r) = check_braid(b, tol);
            report.push(BRAID_RELATION, pass_or(ok, CheckStatus::Fail), r, "B1 B2 B1 - B2 B1 B2");
            let s = smallest_singular_value(b.matrix());
            report.push(
                BRAID_INVERTIBLE,
                pass_or(s > tol.eps(), CheckStatus::Fail),
                s,
                "smallest singular value of B",
            );
            let (_, rs) = check_consistency(t, b, tol).expect("dims checked by StatisticsSystem");
            report.push(
                CONSISTENCY_MIXED,
                pass_or(tol.accepts(rs.mixed), CheckStatus::Fail),
                rs.mixed,
                "B1 T2 T1 - T2 T1 B2",
            );
            report.push(
                CONSISTENCY_KERNEL,
                pass_or(tol.accepts(rs.kernel), CheckStatus::Fail),
                rs.kernel,
                "(id + T~)(id - B)",
            );
        }
        None => {
            for name in [BRAID_RELATION, BRAID_INVERTIBLE, CONSISTENCY_MIXED, CONSISTENCY_KERNEL] {
                report.push(name, CheckStatus::Skipped, 0.0, "no braid operator");
            }
        }
    }
    report
}

/// `q·τ` as a cross operator: `T^{ij}_{kl} = q δ^i_l δ^j_k`.
pub fn scaled_flip(dim: usize, q: Complex64) -> Result<CrossOperator, OperatorError> {
    let entries = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j, j, i, q)));
    CrossOperator::from_entries(dim, entries)
}

//! Fock representation on the tensor algebra `TE` and its braid quotients.
//!
//! The degree-`n` sector has the word basis `x^{i_1} ⊗ … ⊗ x^{i_n}` in
//! lexicographic order, which is also the row-major flattening used by
//! [`crate::linalg`]. Creation operators prepend a letter; annihilation
//! operators follow
//!
//! ```text
//! a_i(x^j ⊗ w) = δ^{ij} w + Σ_{kl} T^{ij}_{kl} x^k ⊗ a_l(w),    a_i |0⟩ = 0.
//! ```
//!
//! The scalar product is the unique one with `⟨0|0⟩ = 1` that makes `a_i` the
//! adjoint of `c_i`.

mod cache;
mod space;

pub use cache::SectorCache;
pub use space::{DescendedOperators, FockSpace, SectorCheck, SectorReport};

use crate::linalg::{LinalgError, Matrix, Tolerance};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_SECTOR_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("sector of degree {degree} over {dim} species has {size} basis words, over the cap of {cap}")]
    SizeLimit {
        dim: usize,
        degree: usize,
        size: String,
        cap: usize,
    },
    #[error("species {species} outside 1..={dim}")]
    SpeciesOutOfRange { species: usize, dim: usize },
    #[error("annihilation operators act on sectors of degree >= 1, got {0}")]
    VacuumAnnihilation(usize),
    #[error("system has no braid operator, so there is no ideal to factor by")]
    NoBraid,
    #[error(
        "{operator} operator for species {species} does not preserve the ideal at degree {degree} (residual {residual:e})"
    )]
    NotWellDefined {
        operator: &'static str,
        species: usize,
        degree: usize,
        residual: f64,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A basis word with 1-based letters. The empty word is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row-major offset `Σ (i_k − 1)·N^{n−k}`.
    pub fn offset(&self, dim: usize) -> usize {
        self.0.iter().fold(0, |acc, &i| acc * dim + (i - 1))
    }

    pub fn from_offset(dim: usize, degree: usize, mut offset: usize) -> Self {
        let mut letters = vec![0; degree];
        for slot in letters.iter_mut().rev() {
            *slot = offset % dim + 1;
            offset /= dim;
        }
        Self(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("|0>");
        }
        for i in &self.0 {
            write!(f, "x{i}")?;
        }
        Ok(())
    }
}

/// `N^n`, or `SizeLimit` when it exceeds `cap`.
pub fn sector_size(dim: usize, degree: usize, cap: usize) -> Result<usize, FockError> {
    let size = u32::try_from(degree)
        .ok()
        .and_then(|d| dim.checked_pow(d))
        .filter(|s| *s <= cap);
    size.ok_or_else(|| FockError::SizeLimit {
        dim,
        degree,
        size: format!("{dim}^{degree}"),
        cap,
    })
}

/// Orthonormal representatives of a quotient sector `E^{⊗n} / S_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    /// Orthonormal basis of the ideal component `S_n`, as columns.
    pub ideal: Matrix,
    /// Orthonormal basis of `S_n^⊥`, as columns.
    pub complement: Matrix,
    /// Orthogonal projector onto `S_n^⊥`.
    pub projector: Matrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.complement.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockSector {
    pub n: usize,
    pub dim_full: usize,
    pub basis: Vec<Word>,
    pub quotient: Option<Arc<Quotient>>,
}

impl FockSector {
    pub fn quotient_dim(&self) -> Option<usize> {
        self.quotient.as_ref().map(|q| q.dim())
    }
}

/// All `N^n` words of length `n`, lexicographic.
pub fn sector_basis(dim: usize, n: usize, cap: usize) -> Result<FockSector, FockError> {
    let size = sector_size(dim, n, cap)?;
    let basis = (0..size).map(|o| Word::from_offset(dim, n, o)).collect();
    Ok(FockSector {
        n,
        dim_full: size,
        basis,
        quotient: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub n: usize,
    pub quotient: bool,
    pub mat: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityReport {
    pub n: usize,
    /// `None` for a zero-dimensional sector.
    pub min_eig: Option<f64>,
    pub kernel_dim: usize,
    pub positive_semidefinite: bool,
    pub positive_definite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub cap: usize,
    pub tol: Tolerance,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SECTOR_CAP,
            tol: Tolerance::default(),
        }
    }
}

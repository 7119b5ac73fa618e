use super::OperatorExpression;
use crate::fock::{FockError, FockSpace};
use crate::linalg::{max_abs, Matrix};
use std::collections::BTreeMap;

/// Action of an expression on one Fock sector, split by target degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorAction {
    pub source: usize,
    /// Target degree → matrix of shape `N^target × N^source`.
    pub blocks: BTreeMap<usize, Matrix>,
}

impl SectorAction {
    pub fn block(&self, target: usize) -> Option<&Matrix> {
        self.blocks.get(&target)
    }

    /// The only block, if the expression has a uniform degree shift.
    pub fn into_single(self) -> Option<(usize, Matrix)> {
        if self.blocks.len() == 1 {
            self.blocks.into_iter().next()
        } else {
            None
        }
    }

    /// Largest entry difference, reading missing blocks as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for (t, m) in &self.blocks {
            worst = worst.max(match other.blocks.get(t) {
                Some(o) if o.shape() == m.shape() => max_abs(&(m - o)),
                Some(_) => f64::INFINITY,
                None => max_abs(m),
            });
        }
        for (t, m) in &other.blocks {
            if !self.blocks.contains_key(t) {
                worst = worst.max(max_abs(m));
            }
        }
        worst
    }
}

/// Substitutes Fock matrices for the generators of `e` and composes them
/// right to left on sector `n`.
///
/// A term whose annihilators run past the vacuum contributes nothing.
pub fn evaluate_on_sector(e: &OperatorExpression, space: &FockSpace, n: usize) -> Result<SectorAction, FockError> {
    let source = space.sector_basis(n)?.dim_full;
    let mut blocks: BTreeMap<usize, Matrix> = BTreeMap::new();
    'terms: for (word, coeff) in e.terms() {
        let mut degree = n;
        let mut acc: Option<Matrix> = None;
        for g in word.iter().rev() {
            let op = if g.is_creation() {
                let c = space.creation_matrix(g.species, degree)?;
                degree += 1;
                c
            } else {
                if degree == 0 {
                    continue 'terms;
                }
                let a = space.annihilation_matrix(g.species, degree)?;
                degree -= 1;
                a
            };
            acc = Some(match acc {
                Some(m) => op * m,
                None => op,
            });
        }
        let m = acc.unwrap_or_else(|| Matrix::identity(source, source)) * *coeff;
        blocks
            .entry(degree)
            .and_modify(|b| *b += &m)
            .or_insert(m);
    }
    Ok(SectorAction { source: n, blocks })
}

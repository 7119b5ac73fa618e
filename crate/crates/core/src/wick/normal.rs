use super::{inversions, Generator, GeneratorKind, GeneratorWord, OperatorExpression};
use crate::linalg::{c64, Complex64, Tolerance};
use crate::operators::{CrossOperator, StatisticsSystem};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

/// Right-hand side of `a_i c_j = constant·1 + Σ coeff·c_k a_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reordering {
    pub constant: Complex64,
    /// `(k, l, coeff)` with 1-based species.
    pub crossed: Vec<(usize, usize, Complex64)>,
}

/// How an adjacent `a_i c_j` is rewritten into creator-first form.
pub trait ReorderRule {
    fn dim(&self) -> usize;

    /// Species are 1-based.
    fn reorder(&self, i: usize, j: usize) -> Reordering;
}

impl ReorderRule for CrossOperator {
    fn dim(&self) -> usize {
        CrossOperator::dim(self)
    }

    fn reorder(&self, i: usize, j: usize) -> Reordering {
        let n = CrossOperator::dim(self);
        let mut crossed = Vec::new();
        for k in 0..n {
            for l in 0..n {
                let t = self.entry(i - 1, j - 1, k, l);
                if t != c64(0.0, 0.0) {
                    crossed.push((k + 1, l + 1, t));
                }
            }
        }
        Reordering {
            constant: if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) },
            crossed,
        }
    }
}

/// An expression with every creator to the left of every annihilator.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm(OperatorExpression);

impl NormalForm {
    pub fn into_expression(self) -> OperatorExpression {
        self.0
    }
}

impl Deref for NormalForm {
    type Target = OperatorExpression;

    fn deref(&self) -> &OperatorExpression {
        &self.0
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewriteStats {
    /// Rounds of rewriting; every round removes at least one inversion from
    /// each surviving term.
    pub generations: usize,
    /// Individual `a c` rewrites performed.
    pub rewrites: usize,
    /// `max (word length)²` over the input terms.
    pub step_bound: usize,
}

fn leftmost_inversion(word: &[Generator]) -> Option<usize> {
    word.windows(2)
        .position(|p| p[0].kind == GeneratorKind::Annihilation && p[1].kind == GeneratorKind::Creation)
}

/// Normal-orders `e` by repeatedly rewriting the leftmost `a_i c_j`.
///
/// Terms are advanced one rewrite per round and merged between rounds, with
/// coefficients of magnitude at most `eps` dropped.
pub fn normal_order_with<R: ReorderRule + ?Sized>(
    e: &OperatorExpression,
    rule: &R,
    tol: Tolerance,
) -> (NormalForm, RewriteStats) {
    let dim = rule.dim();
    let table: Vec<Reordering> = (1..=dim)
        .flat_map(|i| (1..=dim).map(move |j| (i, j)))
        .map(|(i, j)| rule.reorder(i, j))
        .collect();

    let mut stats = RewriteStats {
        step_bound: e.terms().map(|(w, _)| w.len() * w.len()).max().unwrap_or(0),
        ..RewriteStats::default()
    };
    let mut done = OperatorExpression::zero();
    let mut pending: BTreeMap<GeneratorWord, Complex64> = e.clone().into_terms();

    while !pending.is_empty() {
        let mut next = OperatorExpression::zero();
        for (word, coeff) in pending {
            let Some(p) = leftmost_inversion(&word) else {
                done.add_term(word, coeff);
                continue;
            };
            stats.rewrites += 1;
            let (i, j) = (word[p].species, word[p + 1].species);
            let rule = &table[(i - 1) * dim + (j - 1)];
            let (prefix, suffix) = (&word[..p], &word[p + 2..]);
            if rule.constant != c64(0.0, 0.0) {
                let w = [prefix, suffix].concat();
                next.add_term(w, coeff * rule.constant);
            }
            for &(k, l, t) in &rule.crossed {
                let pair = [Generator::creation(k), Generator::annihilation(l)];
                let w = [prefix, &pair[..], suffix].concat();
                next.add_term(w, coeff * t);
            }
        }
        next.prune(tol);
        if next.is_empty() {
            break;
        }
        stats.generations += 1;
        debug_assert!(stats.generations <= stats.step_bound);
        pending = next.into_terms();
    }
    done.prune(tol);
    debug_assert!(done.terms().all(|(w, _)| inversions(w) == 0));
    (NormalForm(done), stats)
}

pub fn normal_order(e: &OperatorExpression, system: &StatisticsSystem, tol: Tolerance) -> NormalForm {
    normal_order_with(e, &system.cross, tol).0
}

/// Product in the Wick algebra: concatenate, then normal-order.
pub fn wick_product(
    e1: &OperatorExpression,
    e2: &OperatorExpression,
    system: &StatisticsSystem,
    tol: Tolerance,
) -> NormalForm {
    normal_order(&(e1 * e2), system, tol)
}

/// Reverses every word, swaps `c` and `a`, conjugates coefficients.
pub fn star(e: &OperatorExpression) -> OperatorExpression {
    OperatorExpression::from_terms(e.terms().map(|(w, c)| {
        let word = w.iter().rev().map(|g| g.star()).collect();
        (word, c.conj())
    }))
}

//! Degreewise checks that normal ordering realizes the cross symmetry.
//!
//! The symbolic side rewrites `a_i c_{j_1} … c_{j_l}` and
//! `a_{i_1} … a_{i_k} c_j` letter by letter. The reference side applies the
//! matrix of `T` slot by slot to basis tensors and contracts with the pairing
//! `g(x^{*i}, x^j) = δ^{ij}`, i.e. it moves the whole word at once.

use super::normal::{normal_order_with, star, ReorderRule};
use super::{Generator, OperatorExpression};
use crate::fock::Word;
use crate::linalg::{c64, Complex64, Tolerance, Vector};
use crate::operators::{CheckStatus, CrossOperator, StatisticsSystem, ValidationReport};

pub mod check_names {
    pub const PSI_CREATION: &str = "psi_creation_multiplicativity";
    pub const PSI_ANNIHILATION: &str = "psi_annihilation_multiplicativity";
    pub const STAR_AXIOM: &str = "star_axiom";
}

/// Highest word degree the checks enumerate.
pub const MAX_AXIOM_DEGREE: usize = 3;

pub fn check_cross_symmetry_axioms(system: &StatisticsSystem, max_degree: usize, tol: Tolerance) -> ValidationReport {
    check_cross_symmetry_axioms_with(&system.cross, &system.cross, max_degree, tol)
}

/// Compares the rewrites of `rule` against the matrix route built from
/// `cross`. `max_degree` is clamped to [`MAX_AXIOM_DEGREE`].
pub fn check_cross_symmetry_axioms_with<R: ReorderRule + ?Sized>(
    rule: &R,
    cross: &CrossOperator,
    max_degree: usize,
    tol: Tolerance,
) -> ValidationReport {
    let max_degree = max_degree.min(MAX_AXIOM_DEGREE);
    let dim = cross.dim();
    let mut report = ValidationReport::default();
    let status = |r: f64| if tol.accepts(r) { CheckStatus::Pass } else { CheckStatus::Fail };

    let (mut worst, mut count) = (0.0_f64, 0);
    for l in 1..=max_degree {
        for input in all_words(dim, l + 1) {
            let (i, js) = (input.letters()[0], &input.letters()[1..]);
            let mut word = vec![Generator::annihilation(i)];
            word.extend(js.iter().map(|&j| Generator::creation(j)));
            let symbolic = normal_order_with(&OperatorExpression::from_word(word, one()), rule, tol).0;
            let expected = creation_reference(cross, input.letters());
            worst = worst.max(symbolic.max_coeff_diff(&expected));
            count += 1;
        }
    }
    report.push(
        check_names::PSI_CREATION,
        status(worst),
        worst,
        format!("{count} words a_i c_J, |J| <= {max_degree}"),
    );

    let (mut worst, mut count) = (0.0_f64, 0);
    for k in 1..=max_degree {
        for input in all_words(dim, k + 1) {
            let (is, j) = (&input.letters()[..k], input.letters()[k]);
            let mut word: Vec<Generator> = is.iter().map(|&i| Generator::annihilation(i)).collect();
            word.push(Generator::creation(j));
            let symbolic = normal_order_with(&OperatorExpression::from_word(word, one()), rule, tol).0;
            let expected = annihilation_reference(cross, input.letters());
            worst = worst.max(symbolic.max_coeff_diff(&expected));
            count += 1;
        }
    }
    report.push(
        check_names::PSI_ANNIHILATION,
        status(worst),
        worst,
        format!("{count} words a_I c_j, |I| <= {max_degree}"),
    );

    let (mut worst, mut count) = (0.0_f64, 0);
    for total in 2..=max_degree + 1 {
        for k in 1..total {
            for input in all_words(dim, total) {
                let word: Vec<Generator> = input
                    .letters()
                    .iter()
                    .enumerate()
                    .map(|(p, &s)| {
                        if p < k {
                            Generator::annihilation(s)
                        } else {
                            Generator::creation(s)
                        }
                    })
                    .collect();
                let e = OperatorExpression::from_word(word, one());
                let lhs = star(&normal_order_with(&e, rule, tol).0);
                let rhs = normal_order_with(&star(&e), rule, tol).0;
                worst = worst.max(lhs.max_coeff_diff(&rhs));
                count += 1;
            }
        }
    }
    report.push(
        check_names::STAR_AXIOM,
        status(worst),
        worst,
        format!("{count} words a_I c_J, |I| + |J| <= {}", max_degree + 1),
    );
    report
}

fn one() -> Complex64 {
    c64(1.0, 0.0)
}

fn all_words(dim: usize, len: usize) -> impl Iterator<Item = Word> {
    (0..dim.pow(len as u32)).map(move |o| Word::from_offset(dim, len, o))
}

fn basis_vector(dim: usize, letters: &[usize]) -> Vector {
    let mut v = Vector::zeros(dim.pow(letters.len() as u32));
    v[Word::new(letters.to_vec()).offset(dim)] = one();
    v
}

/// Applies the matrix of `T` to tensor slots `p, p + 1` (zero-based).
fn apply_cross(t: &CrossOperator, v: &Vector, slots: usize, p: usize) -> Vector {
    let n = t.dim();
    let right = n.pow((slots - p - 2) as u32);
    let left = v.len() / (n * n * right);
    let mat = t.matrix();
    let mut out = Vector::zeros(v.len());
    for u in 0..left {
        for col in 0..n * n {
            for w in 0..right {
                let x = v[(u * n * n + col) * right + w];
                if x == c64(0.0, 0.0) {
                    continue;
                }
                for row in 0..n * n {
                    out[(u * n * n + row) * right + w] += mat[(row, col)] * x;
                }
            }
        }
    }
    out
}

/// Contracts slots `p, p + 1` with `δ^{ij}`, removing both.
fn contract(dim: usize, v: &Vector, slots: usize, p: usize) -> Vector {
    let right = dim.pow((slots - p - 2) as u32);
    let left = v.len() / (dim * dim * right);
    let mut out = Vector::zeros(left * right);
    for u in 0..left {
        for i in 0..dim {
            for w in 0..right {
                out[u * right + w] += v[(u * dim * dim + i * dim + i) * right + w];
            }
        }
    }
    out
}

fn expression_from(
    dim: usize,
    v: &Vector,
    len: usize,
    shape: impl Fn(&[usize]) -> Vec<Generator>,
) -> OperatorExpression {
    OperatorExpression::from_terms(
        v.iter()
            .enumerate()
            .filter(|(_, c)| **c != c64(0.0, 0.0))
            .map(|(o, c)| (shape(Word::from_offset(dim, len, o).letters()), *c)),
    )
}

/// Reference for `a_i c_{j_1} … c_{j_l}`, input letters `(i, j_1, …, j_l)`.
fn creation_reference(t: &CrossOperator, letters: &[usize]) -> OperatorExpression {
    let dim = t.dim();
    let l = letters.len() - 1;
    let mut v = basis_vector(dim, letters);
    let mut out = OperatorExpression::zero();
    for p in 0..l {
        // The annihilator now sits in slot p, next to the creator in slot p + 1.
        let contracted = contract(dim, &v, letters.len(), p);
        out = &out + &expression_from(dim, &contracted, letters.len() - 2, |w| w.iter().map(|&s| Generator::creation(s)).collect());
        v = apply_cross(t, &v, letters.len(), p);
    }
    let crossed = expression_from(dim, &v, letters.len(), |w| {
        let mut g: Vec<Generator> = w[..l].iter().map(|&s| Generator::creation(s)).collect();
        g.push(Generator::annihilation(w[l]));
        g
    });
    &out + &crossed
}

/// Reference for `a_{i_1} … a_{i_k} c_j`, input letters `(i_1, …, i_k, j)`.
fn annihilation_reference(t: &CrossOperator, letters: &[usize]) -> OperatorExpression {
    let dim = t.dim();
    let k = letters.len() - 1;
    let mut v = basis_vector(dim, letters);
    let mut out = OperatorExpression::zero();
    for p in (0..k).rev() {
        // The creator now sits in slot p + 1, next to the annihilator in slot p.
        let contracted = contract(dim, &v, letters.len(), p);
        out = &out
            + &expression_from(dim, &contracted, letters.len() - 2, |w| w.iter().map(|&s| Generator::annihilation(s)).collect());
        v = apply_cross(t, &v, letters.len(), p);
    }
    let crossed = expression_from(dim, &v, letters.len(), |w| {
        let mut g = vec![Generator::creation(w[0])];
        g.extend(w[1..].iter().map(|&s| Generator::annihilation(s)));
        g
    });
    &out + &crossed
}

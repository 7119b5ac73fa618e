//! Symbolic Wick algebra: formal sums of words in creators `c(i)` and
//! annihilators `a(i)`.
//!
//! A word is read as an operator product; the rightmost generator acts first.
//! Printing and parsing share one grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := coeff? factor+
//! coeff  := number | '(' number ',' number ')'
//! factor := 'c(' int ')' | 'a(' int ')' | '1'
//! ```

mod axioms;
mod eval;
mod normal;
mod parse;

pub use axioms::{
    check_cross_symmetry_axioms, check_cross_symmetry_axioms_with, check_names as axiom_check_names,
    MAX_AXIOM_DEGREE,
};
pub use eval::{evaluate_on_sector, SectorAction};
pub use normal::{
    normal_order, normal_order_with, star, wick_product, NormalForm, ReorderRule, Reordering,
    RewriteStats,
};
pub use parse::{parse_expression, ParseError};

use crate::linalg::{Complex64, Tolerance};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Creation,
    Annihilation,
}

/// A creator `c(i)` or annihilator `a(i)`, species 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub species: usize,
}

impl Generator {
    pub fn creation(species: usize) -> Self {
        Self {
            kind: GeneratorKind::Creation,
            species,
        }
    }

    pub fn annihilation(species: usize) -> Self {
        Self {
            kind: GeneratorKind::Annihilation,
            species,
        }
    }

    pub fn is_creation(self) -> bool {
        self.kind == GeneratorKind::Creation
    }

    /// `c(i)* = a(i)` and vice versa.
    pub fn star(self) -> Self {
        let kind = match self.kind {
            GeneratorKind::Creation => GeneratorKind::Annihilation,
            GeneratorKind::Annihilation => GeneratorKind::Creation,
        };
        Self { kind, ..self }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::Creation => write!(f, "c({})", self.species),
            GeneratorKind::Annihilation => write!(f, "a({})", self.species),
        }
    }
}

pub type GeneratorWord = Vec<Generator>;

/// Number of (annihilator, creator) pairs with the annihilator to the left.
pub fn inversions(word: &[Generator]) -> usize {
    let mut annihilators_seen = 0;
    let mut count = 0;
    for g in word {
        if g.is_creation() {
            count += annihilators_seen;
        } else {
            annihilators_seen += 1;
        }
    }
    count
}

/// A finite formal linear combination of generator words.
///
/// Never stores a zero coefficient; the empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorExpression {
    terms: BTreeMap<GeneratorWord, Complex64>,
}

impl OperatorExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_word(Vec::new(), Complex64::new(1.0, 0.0))
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_word(vec![g], Complex64::new(1.0, 0.0))
    }

    pub fn from_word(word: GeneratorWord, coeff: Complex64) -> Self {
        let mut e = Self::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (GeneratorWord, Complex64)>,
    {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    /// Adds `coeff · word`, dropping the term if it cancels exactly.
    pub fn add_term(&mut self, word: GeneratorWord, coeff: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(word) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == zero {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                if coeff != zero {
                    slot.insert(coeff);
                }
            }
        }
    }

    /// Removes terms with `|c| ≤ eps`.
    pub fn prune(&mut self, tol: Tolerance) {
        self.terms.retain(|_, c| c.norm() > tol.eps());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[Generator]) -> Complex64 {
        self.terms.get(word).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| inversions(w) == 0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * s)))
    }

    /// Largest coefficient difference over the union of words.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for (w, c) in &self.terms {
            worst = worst.max((c - other.coefficient(w)).norm());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub(crate) fn into_terms(self) -> BTreeMap<GeneratorWord, Complex64> {
        self.terms
    }
}

impl Add for &OperatorExpression {
    type Output = OperatorExpression;

    fn add(self, rhs: &OperatorExpression) -> OperatorExpression {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }
}

/// Formal (unordered) product: word concatenation.
impl Mul for &OperatorExpression {
    type Output = OperatorExpression;

    fn mul(self, rhs: &OperatorExpression) -> OperatorExpression {
        let mut out = OperatorExpression::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: Complex64, first: bool) -> fmt::Result {
    if c.im == 0.0 {
        let negative = c.re < 0.0;
        let magnitude = c.re.abs();
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        if magnitude != 1.0 {
            write!(f, "{magnitude} ")?;
        }
    } else {
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "({},{}) ", c.re, c.im)?;
    }
    Ok(())
}

impl fmt::Display for OperatorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0 1");
        }
        for (n, (word, c)) in self.terms.iter().enumerate() {
            write_coeff(f, *c, n == 0)?;
            if word.is_empty() {
                f.write_str("1")?;
            } else {
                let parts: Vec<String> = word.iter().map(Generator::to_string).collect();
                f.write_str(&parts.join(" "))?;
            }
        }
        Ok(())
    }
}

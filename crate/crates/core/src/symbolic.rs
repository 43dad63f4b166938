//! Finite and eventually periodic words over `E = {1, …, N}`, cylinders, the
//! shift, and the Bernoulli product measure on `E^ℕ`.
//!
//! Letters are 1-based. Infinite words only appear as `u v^∞` ([`EpWord`]) or
//! as seeded random streams (see [`crate::ergodic`]).

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{config_err, input_err, Result};

pub type Letter = u16;

/// Tolerance on `Σ r_i^s = 1` when building the Bernoulli weights.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Alphabet> {
        if size < 2 || size > Letter::MAX as usize {
            return Err(input_err!("alphabet size must be in [2, {}], got {size}", Letter::MAX));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        1..=self.size as Letter
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l == 0 || l as usize > self.size) {
            Some(l) => Err(input_err!("letter {l} outside alphabet 1..={}", self.size)),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: &[Letter]) -> Word {
        Word(letters.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `w|_n`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(letter);
        Word(v)
    }

    /// `w^k`.
    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Word {
        Word(v)
    }
}

/// Eventually periodic infinite word `pre · period^∞`.
#[derive(Clone, Serialize, Deserialize)]
pub struct EpWord {
    pre: Word,
    period: Word,
}

impl EpWord {
    pub fn new(pre: Word, period: Word) -> Result<EpWord> {
        if period.is_empty() {
            return Err(input_err!("period of an eventually periodic word must be nonempty"));
        }
        Ok(EpWord { pre, period })
    }

    /// `v^∞`.
    pub fn periodic(period: Word) -> Result<EpWord> {
        EpWord::new(Word::empty(), period)
    }

    pub fn pre(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// The `i`-th letter, 0-based.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre.0[i]
        } else {
            self.period.0[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// `w|_n`.
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.letter(i)).collect())
    }

    /// `σⁿ(w)`.
    pub fn shift(&self, n: usize) -> EpWord {
        if n <= self.pre.len() {
            return EpWord { pre: Word(self.pre.0[n..].to_vec()), period: self.period.clone() };
        }
        let k = (n - self.pre.len()) % self.period.len();
        let mut rotated = self.period.0[k..].to_vec();
        rotated.extend_from_slice(&self.period.0[..k]);
        EpWord { pre: Word::empty(), period: Word(rotated) }
    }

    /// `u w`.
    pub fn prepend(&self, u: &Word) -> EpWord {
        EpWord { pre: u.concat(&self.pre), period: self.period.clone() }
    }

    pub fn has_prefix(&self, u: &Word) -> bool {
        u.0.iter().enumerate().all(|(i, &l)| self.letter(i) == l)
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.normalized().pre.is_empty()
    }

    /// Canonical representation: primitive period, shortest preperiod.
    pub fn normalized(&self) -> EpWord {
        let p = &self.period.0;
        let primitive = (1..=p.len())
            .find(|&d| p.len().is_multiple_of(d) && (0..p.len()).all(|i| p[i] == p[i % d]))
            .unwrap_or(p.len());
        let mut pre = self.pre.0.clone();
        let mut period = p[..primitive].to_vec();
        // absorb trailing preperiod letters into a rotation of the period
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        EpWord { pre: Word(pre), period: Word(period) }
    }
}

impl PartialEq for EpWord {
    fn eq(&self, other: &EpWord) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.pre == b.pre && a.period == b.period
    }
}

impl fmt::Debug for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}^∞", if self.pre.is_empty() { String::new() } else { self.pre.to_string() }, self.period)
    }
}

/// `u w`.
pub fn concat(u: &Word, w: &EpWord) -> EpWord {
    w.prepend(u)
}

/// `w^k`.
pub fn power(w: &Word, k: usize) -> Word {
    w.power(k)
}

/// Is `u` a prefix of the infinite word `w`?
pub fn is_prefix(u: &Word, w: &EpWord) -> bool {
    w.has_prefix(u)
}

/// The cylinder `[v]` of infinite words starting with `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub base: Word,
}

impl Cylinder {
    pub fn new(base: Word) -> Cylinder {
        Cylinder { base }
    }

    pub fn contains(&self, w: &EpWord) -> bool {
        w.has_prefix(&self.base)
    }
}

/// Bernoulli weights `p_i = r_i^s`, checked to sum to one.
pub fn bernoulli_weights(ratios: &[f64], s: f64) -> Result<Vec<f64>> {
    let weights: Vec<f64> = ratios.iter().map(|r| r.powf(s)).collect();
    let total: f64 = weights.iter().sum();
    if !((total - 1.0).abs() <= NORMALIZATION_TOL) {
        return Err(config_err!("Σ r_i^s = {total} is not 1 (s = {s})"));
    }
    Ok(weights)
}

/// `μ̃([v]) = Π r_{v_j}^s`.
pub fn cylinder_prob(ratios: &[f64], s: f64, v: &Word) -> Result<f64> {
    let weights = bernoulli_weights(ratios, s)?;
    Alphabet::new(ratios.len())?.check(v)?;
    Ok(word_prob(&weights, v))
}

/// Product of weights along `v`; no validation.
pub(crate) fn word_prob(weights: &[f64], v: &Word) -> f64 {
    v.0.iter().fold(1.0, |acc, &l| acc * weights[l as usize - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn w(v: &[Letter]) -> Word {
        Word::new(v)
    }

    #[test]
    fn shift_examples() {
        let x = EpWord::periodic(w(&[1, 2])).unwrap();
        assert_eq!(x.shift(1), EpWord::periodic(w(&[2, 1])).unwrap());
        assert_eq!(x.shift(1).prefix(4), w(&[2, 1, 2, 1]));
        assert_eq!(x.shift(0), x);
        let y = EpWord::new(w(&[3]), w(&[1])).unwrap();
        assert_eq!(y.shift(1), EpWord::periodic(w(&[1])).unwrap());
    }

    #[test]
    fn word_operations() {
        assert_eq!(power(&w(&[1, 2]), 2), w(&[1, 2, 1, 2]));
        assert!(is_prefix(&w(&[1]), &EpWord::periodic(w(&[1, 2])).unwrap()));
        assert!(!is_prefix(&w(&[2]), &EpWord::periodic(w(&[1, 2])).unwrap()));
        let x = EpWord::new(w(&[2]), w(&[1, 1])).unwrap();
        assert_eq!(concat(&Word::empty(), &x), x);
        assert_eq!(concat(&w(&[3, 3]), &x).prefix(5), w(&[3, 3, 2, 1, 1]));
        assert!(EpWord::periodic(Word::empty()).is_err());
        assert!(Cylinder::new(w(&[2, 1])).contains(&x));
    }

    #[test]
    fn normalization() {
        let a = EpWord::new(w(&[1, 2]), w(&[1, 2, 1, 2])).unwrap();
        let b = EpWord::periodic(w(&[1, 2])).unwrap();
        assert_eq!(a, b);
        assert!(a.is_purely_periodic());
        assert_eq!(EpWord::new(w(&[3, 1]), w(&[1])).unwrap().normalized().pre, w(&[3]));
        assert!(!EpWord::new(w(&[3]), w(&[1])).unwrap().is_purely_periodic());
    }

    #[test]
    fn cylinder_probabilities() {
        let four = [0.25; 4];
        assert_relative_eq!(cylinder_prob(&four, 1.0, &w(&[1, 3])).unwrap(), 1.0 / 16.0);
        let s = 2f64.ln() / 3f64.ln();
        assert_relative_eq!(cylinder_prob(&[1.0 / 3.0; 2], s, &w(&[1])).unwrap(), 0.5, max_relative = 1e-14);
        assert_eq!(cylinder_prob(&four, 1.0, &Word::empty()).unwrap(), 1.0);
        assert!(matches!(cylinder_prob(&four, 0.5, &w(&[1])), Err(crate::Error::Config(_))));
        assert!(cylinder_prob(&four, 1.0, &w(&[5])).is_err());
    }

    #[test]
    fn total_mass_per_level() {
        let ratios = [0.5, 0.25, 0.2];
        let s = crate::ifs::similarity_dimension(&ratios).unwrap();
        let weights = bernoulli_weights(&ratios, s).unwrap();
        let mut level = vec![Word::empty()];
        for n in 1..=8 {
            level = level.iter().flat_map(|v| (1..=3).map(move |l| v.push(l))).collect();
            let total: f64 = level.iter().map(|v| word_prob(&weights, v)).sum();
            assert!((total - 1.0).abs() < 1e-10, "depth {n}: {total}");
        }
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(1u16..=3, 0..max).prop_map(Word)
    }

    proptest! {
        #[test]
        fn shift_is_additive(pre in word_strategy(5), per in word_strategy(4), a in 0usize..12, b in 0usize..12) {
            prop_assume!(!per.is_empty());
            let x = EpWord::new(pre, per).unwrap();
            prop_assert_eq!(x.shift(a).shift(b), x.shift(a + b));
            prop_assert_eq!(x.shift(a).prefix(10), Word((a..a + 10).map(|i| x.letter(i)).collect()));
        }

        #[test]
        fn prob_is_multiplicative(v in word_strategy(6), u in word_strategy(6)) {
            let weights = [0.5, 0.3, 0.2];
            let lhs = word_prob(&weights, &v.concat(&u));
            let rhs = word_prob(&weights, &v) * word_prob(&weights, &u);
            prop_assert!((lhs - rhs).abs() <= 1e-15 * rhs);
        }
    }
}

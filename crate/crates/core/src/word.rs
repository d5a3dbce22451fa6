//! Words in the free group on meridian generators `α_1, ..., α_n`.

use std::fmt;

use crate::error::{Error, Result};

/// A generator `α_index` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: usize,
    inverse: bool,
}

impl Letter {
    pub fn gen(index: usize) -> Self {
        Letter { index, inverse: false }
    }

    pub fn inv(index: usize) -> Self {
        Letter { index, inverse: true }
    }

    /// Builds a letter from the `[index, sign]` pair used in files.
    pub fn from_pair(index: i64, sign: i64) -> Result<Self> {
        if index < 1 {
            return Err(Error::IndexOutOfRange { index: index.max(0) as usize, n: 0 });
        }
        match sign {
            1 => Ok(Letter::gen(index as usize)),
            -1 => Ok(Letter::inv(index as usize)),
            s => Err(Error::BadSign(s)),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn inverted(&self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    pub fn to_pair(&self) -> [i64; 2] {
        [self.index as i64, self.sign()]
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// A word over `α_1^{±1}, ..., α_n^{±1}`. Stored letter by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    n: usize,
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|l| l.index == 0 || l.index > n) {
            return Err(Error::IndexOutOfRange { index: bad.index, n });
        }
        Ok(GroupWord { n, letters })
    }

    pub fn identity(n: usize) -> Self {
        GroupWord { n, letters: Vec::new() }
    }

    /// The single-letter word `α_i`.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        GroupWord::new(n, vec![Letter::gen(i)])
    }

    /// Parses `[index, sign]` pairs.
    pub fn from_pairs(n: usize, pairs: &[[i64; 2]]) -> Result<Self> {
        let letters = pairs
            .iter()
            .map(|&[i, s]| Letter::from_pair(i, s))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::IndexOutOfRange { index, .. } => Error::IndexOutOfRange { index, n },
                e => e,
            })?;
        GroupWord::new(n, letters)
    }

    /// Word from signed 1-based indices: `3` is `α_3`, `-3` is `α_3⁻¹`.
    pub fn from_signed(n: usize, signed: &[i64]) -> Result<Self> {
        let letters = signed
            .iter()
            .map(|&s| {
                if s > 0 {
                    Ok(Letter::gen(s as usize))
                } else if s < 0 {
                    Ok(Letter::inv((-s) as usize))
                } else {
                    Err(Error::IndexOutOfRange { index: 0, n })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        GroupWord::new(n, letters)
    }

    pub fn to_pairs(&self) -> Vec<[i64; 2]> {
        self.letters.iter().map(Letter::to_pair).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Free reduction, using a stack.
    pub fn reduce(&self) -> GroupWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(top) if top.cancels(&l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        GroupWord { n: self.n, letters: out }
    }

    pub fn invert(&self) -> GroupWord {
        GroupWord {
            n: self.n,
            letters: self.letters.iter().rev().map(Letter::inverted).collect(),
        }
    }

    /// Juxtaposition `self · other`, not reduced.
    pub fn concat(&self, other: &GroupWord) -> Result<GroupWord> {
        self.check_same(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GroupWord { n: self.n, letters })
    }

    /// Reduced product.
    pub fn mul(&self, other: &GroupWord) -> Result<GroupWord> {
        Ok(self.concat(other)?.reduce())
    }

    /// `self^e`, reduced. Negative exponents invert.
    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord { n: self.n, letters }.reduce()
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`, reduced.
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> Result<GroupWord> {
        x.check_same(y)?;
        let mut letters = Vec::with_capacity(2 * (x.len() + y.len()));
        letters.extend(x.invert().letters);
        letters.extend(y.invert().letters);
        letters.extend_from_slice(&x.letters);
        letters.extend_from_slice(&y.letters);
        Ok(GroupWord { n: x.n, letters }.reduce())
    }

    /// `g w g⁻¹`, reduced.
    pub fn conjugate(&self, g: &GroupWord) -> Result<GroupWord> {
        self.check_same(g)?;
        let mut letters = Vec::with_capacity(self.len() + 2 * g.len());
        letters.extend_from_slice(&g.letters);
        letters.extend_from_slice(&self.letters);
        letters.extend(g.invert().letters);
        Ok(GroupWord { n: self.n, letters }.reduce())
    }

    /// Signed count of occurrences of `α_i`.
    pub fn exponent_sum(&self, i: usize) -> i64 {
        self.letters.iter().filter(|l| l.index == i).map(Letter::sign).sum()
    }

    /// Same word viewed in a larger ambient group.
    pub fn widen(&self, n: usize) -> Result<GroupWord> {
        GroupWord::new(n, self.letters.clone())
    }

    fn check_same(&self, other: &GroupWord) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!(
                "words over {} and {} generators",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.inverse { format!("a{}^-1", l.index) } else { format!("a{}", l.index) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(n: usize, s: &[i64]) -> GroupWord {
        GroupWord::from_signed(n, s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w(2, &[1, -1]).reduce().is_empty());
        assert!(w(2, &[]).reduce().is_empty());
        assert_eq!(w(2, &[1, 2, -2, 1]).reduce(), w(2, &[1, 1]));
        assert_eq!(w(3, &[1, 2, 3, -3, -2, 2]).reduce(), w(3, &[1, 2]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(2, &[1, -2]).invert(), w(2, &[2, -1]));
        assert!(w(2, &[]).invert().is_empty());
        assert_eq!(w(3, &[3]).invert(), w(3, &[-3]));
    }

    #[test]
    fn commutator_examples() {
        let a1 = w(2, &[1]);
        let a2 = w(2, &[2]);
        assert_eq!(GroupWord::commutator(&a1, &a2).unwrap(), w(2, &[-1, -2, 1, 2]));
        assert!(GroupWord::commutator(&a1, &a1).unwrap().is_empty());
        assert!(GroupWord::commutator(&GroupWord::identity(2), &a2).unwrap().is_empty());
    }

    #[test]
    fn conjugate_examples() {
        let a1 = w(2, &[1]);
        let a2 = w(2, &[2]);
        let e = GroupWord::identity(2);
        assert_eq!(a1.conjugate(&e).unwrap(), a1);
        assert!(e.conjugate(&a2).unwrap().is_empty());
        assert_eq!(a1.conjugate(&a2).unwrap(), w(2, &[2, 1, -2]));
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w(2, &[1, 2, 1]).exponent_sum(1), 2);
        assert_eq!(w(2, &[1, -1]).exponent_sum(1), 0);
        assert_eq!(w(2, &[]).exponent_sum(2), 0);
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(matches!(
            GroupWord::from_pairs(2, &[[3, 1]]),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(matches!(GroupWord::from_pairs(2, &[[1, 2]]), Err(Error::BadSign(2))));
        assert!(GroupWord::from_pairs(2, &[[0, 1]]).is_err());
        assert!(GroupWord::generator(2, 1).unwrap().mul(&GroupWord::identity(3)).is_err());
    }

    #[test]
    fn pairs_round_trip() {
        let x = w(3, &[1, -3, 2]);
        assert_eq!(GroupWord::from_pairs(3, &x.to_pairs()).unwrap(), x);
    }

    fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
        prop::collection::vec((1..=n as i64, any::<bool>()), 0..max_len).prop_map(move |v| {
            let s: Vec<i64> = v.into_iter().map(|(i, neg)| if neg { -i } else { i }).collect();
            GroupWord::from_signed(n, &s).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(x in arb_word(3, 20)) {
            let r = x.reduce();
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.reduce(), r);
        }

        #[test]
        fn invert_is_involution(x in arb_word(3, 20)) {
            prop_assert_eq!(x.invert().invert().reduce(), x.reduce());
            prop_assert!(x.mul(&x.invert()).unwrap().is_empty());
        }

        #[test]
        fn exponent_sums(x in arb_word(4, 20), y in arb_word(4, 20), i in 1usize..=4) {
            prop_assert_eq!(x.reduce().exponent_sum(i), x.exponent_sum(i));
            prop_assert_eq!(x.invert().exponent_sum(i), -x.exponent_sum(i));
            prop_assert_eq!(GroupWord::commutator(&x, &y).unwrap().exponent_sum(i), 0);
        }
    }
}

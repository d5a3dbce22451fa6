//! Truncated power series in non-commuting variables `X_1, ..., X_n` with
//! integer coefficients, and the Magnus expansion `α_i ↦ 1 + X_i`.
//!
//! A [`MagnusSeries`] lives in the quotient of the power series ring by all
//! monomials of degree greater than its truncation degree. Every product is
//! truncated immediately.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::word::GroupWord;

/// A monomial `X_{i_1} X_{i_2} ⋯ X_{i_m}`, stored as its 1-based index
/// sequence. Ordered by degree first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn new(indices: &[usize]) -> Self {
        Monomial(indices.iter().map(|&i| to_u16(i)).collect())
    }

    pub fn var(i: usize) -> Self {
        let mut v = SmallVec::new();
        v.push(to_u16(i));
        Monomial(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.indices().collect()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.iter().any(|&x| x as usize == i)
    }

    /// True when no index occurs twice.
    pub fn is_non_repeated(&self) -> bool {
        let v = &self.0;
        (0..v.len()).all(|a| (a + 1..v.len()).all(|b| v[a] != v[b]))
    }

    pub fn max_index(&self) -> usize {
        self.indices().max().unwrap_or(0)
    }

    fn push(&mut self, i: u16) {
        self.0.push(i);
    }
}

fn to_u16(i: usize) -> u16 {
    u16::try_from(i).expect("variable index exceeds 65535")
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.iter().all(|&i| i <= 9) {
            write!(f, "X")?;
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "X[{}]", parts.join(","))
        }
    }
}

/// Element of `ℤ⟨⟨X_1..X_n⟩⟩ / (degree > q)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MagnusSeries {
    n: usize,
    degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MagnusSeries {
    pub fn zero(n: usize, degree: usize) -> Self {
        MagnusSeries { n, degree, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        Self::constant(n, degree, BigInt::one())
    }

    pub fn constant(n: usize, degree: usize, c: BigInt) -> Self {
        let mut s = Self::zero(n, degree);
        s.add_term(Monomial::one(), c);
        s
    }

    /// The series `X_i`.
    pub fn variable(n: usize, degree: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        let mut s = Self::zero(n, degree);
        if degree >= 1 {
            s.add_term(Monomial::var(i), BigInt::one());
        }
        Ok(s)
    }

    /// Builds a series from explicit terms. Terms above `degree` are rejected.
    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut s = Self::zero(n, degree);
        for (m, c) in terms {
            if m.degree() > degree {
                return Err(Error::DegreeTooHigh { degree: m.degree(), max: degree });
            }
            for i in m.indices() {
                check_index(i, n)?;
            }
            s.add_term(m, c);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coefficient(&self, m: &Monomial) -> Result<BigInt> {
        if m.degree() > self.degree {
            return Err(Error::DegreeTooHigh { degree: m.degree(), max: self.degree });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_default())
    }

    pub(crate) fn coeff_ref(&self, m: &Monomial) -> Option<&BigInt> {
        self.terms.get(m)
    }

    /// Smallest degree carrying a nonzero coefficient, ignoring the constant term.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).find(|&d| d > 0)
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous(&self, d: usize) -> MagnusSeries {
        MagnusSeries {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops all terms above `degree` and lowers the truncation degree.
    pub fn truncate(&self, degree: usize) -> MagnusSeries {
        MagnusSeries {
            n: self.n,
            degree: degree.min(self.degree),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &MagnusSeries) -> Result<MagnusSeries> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MagnusSeries) -> Result<MagnusSeries> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MagnusSeries {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> MagnusSeries {
        if k.is_zero() {
            return Self::zero(self.n, self.degree);
        }
        MagnusSeries {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// `self - 1`.
    pub fn minus_one(&self) -> MagnusSeries {
        let mut out = self.clone();
        out.add_term(Monomial::one(), BigInt::from(-1));
        out
    }

    /// Truncated product.
    pub fn mul(&self, rhs: &MagnusSeries) -> Result<MagnusSeries> {
        self.check_compatible(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &MagnusSeries) -> MagnusSeries {
        let q = self.degree;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let budget = q - ma.degree();
            for (mb, cb) in &rhs.terms {
                // terms are sorted by degree, so nothing further fits
                if mb.degree() > budget {
                    break;
                }
                let prod = ca * cb;
                match acc.entry(ma.concat(mb)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MagnusSeries { n: self.n, degree: q, terms: acc }
    }

    /// Right multiplication by `1 + X_i`.
    pub fn mul_generator(&self, i: usize) -> MagnusSeries {
        let mut out = self.clone();
        for (m, c) in &self.terms {
            if m.degree() < self.degree {
                let mut mm = m.clone();
                mm.push(i as u16);
                out.add_term(mm, c.clone());
            }
        }
        out
    }

    /// Right multiplication by `(1 + X_i)⁻¹ = 1 - X_i + X_i² - ⋯`.
    pub fn mul_generator_inverse(&self, i: usize) -> MagnusSeries {
        let mut out = self.clone();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let mut coeff = c.clone();
            for _ in m.degree()..self.degree {
                mm.push(i as u16);
                coeff = -coeff;
                out.add_term(mm.clone(), coeff.clone());
            }
        }
        out
    }

    /// Multiplicative inverse via the geometric series in `1 - self`.
    pub fn inverse(&self) -> Result<MagnusSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnitConstant);
        }
        let h = self.minus_one().neg();
        let mut sum = Self::one(self.n, self.degree);
        let mut power = Self::one(self.n, self.degree);
        for _ in 0..self.degree {
            power = power.mul_unchecked(&h);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum)
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &MagnusSeries, b: &MagnusSeries) -> Result<MagnusSeries> {
        a.check_compatible(b)?;
        let ai = a.inverse()?;
        let bi = b.inverse()?;
        Ok(ai.mul_unchecked(&bi).mul_unchecked(a).mul_unchecked(b))
    }

    /// Replaces each variable `Z_l` of `self` by `images[l - 1]`.
    ///
    /// The images must share a ring (their `n` and truncation degree become
    /// the result's) and have zero constant term.
    pub fn substitute(&self, images: &[MagnusSeries]) -> Result<MagnusSeries> {
        if images.len() != self.n {
            return Err(Error::Mismatch(format!(
                "series in {} variables, {} substitution images",
                self.n,
                images.len()
            )));
        }
        let (tn, tq) = match images.first() {
            Some(g) => (g.n, g.degree),
            None => {
                return Ok(MagnusSeries::constant(0, self.degree, self.constant_term()));
            }
        };
        for (l, g) in images.iter().enumerate() {
            if g.n != tn || g.degree != tq {
                return Err(Error::Mismatch("substitution images live in different rings".into()));
            }
            if !g.constant_term().is_zero() {
                return Err(Error::NonzeroConstant(l + 1));
            }
        }
        // zero images only contribute through the constant term
        let min_deg: Vec<Option<usize>> =
            images.iter().map(MagnusSeries::min_positive_degree).collect();

        let mut items: Vec<(&[u16], &BigInt)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= tq)
            .map(|(m, c)| (m.0.as_slice(), c))
            .collect();
        items.sort_by(|a, b| a.0.cmp(b.0));
        let one = MagnusSeries::one(tn, tq);
        Ok(substitute_rec(&items, 0, tq, images, &min_deg, &one))
    }

    /// Evaluates a word with `α_i ↦ gens[i-1]`, `α_i⁻¹ ↦ inverses[i-1]`.
    pub fn evaluate_word(
        w: &GroupWord,
        gens: &[MagnusSeries],
        inverses: &[MagnusSeries],
    ) -> Result<MagnusSeries> {
        let first = gens.first().ok_or_else(|| Error::Mismatch("no generator images".into()))?;
        if gens.len() < w.n() || inverses.len() < w.n() {
            return Err(Error::Mismatch("too few generator images".into()));
        }
        let mut acc = MagnusSeries::one(first.n, first.degree);
        for l in w.letters() {
            let img = if l.is_inverse() { &inverses[l.index() - 1] } else { &gens[l.index() - 1] };
            acc = acc.mul(img)?;
        }
        Ok(acc)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, rhs: &MagnusSeries) -> Result<()> {
        if self.n != rhs.n || self.degree != rhs.degree {
            return Err(Error::Mismatch(format!(
                "series rings (n={}, q={}) and (n={}, q={})",
                self.n, self.degree, rhs.n, rhs.degree
            )));
        }
        Ok(())
    }
}

fn substitute_rec(
    items: &[(&[u16], &BigInt)],
    depth: usize,
    budget: usize,
    images: &[MagnusSeries],
    min_deg: &[Option<usize>],
    one: &MagnusSeries,
) -> MagnusSeries {
    let mut out = MagnusSeries::zero(one.n, one.degree);
    let mut i = 0;
    while i < items.len() {
        let (m, c) = items[i];
        if m.len() == depth {
            out.add_term(Monomial::one(), c.clone());
            i += 1;
            continue;
        }
        let l = m[depth];
        let mut j = i + 1;
        while j < items.len() && items[j].0.len() > depth && items[j].0[depth] == l {
            j += 1;
        }
        if let Some(d) = min_deg[l as usize - 1] {
            if d <= budget {
                let tail = substitute_rec(&items[i..j], depth + 1, budget - d, images, min_deg, one);
                let prod = images[l as usize - 1].mul_unchecked(&tail);
                for (mm, cc) in prod.terms {
                    out.add_term(mm, cc);
                }
            }
        }
        i = j;
    }
    out
}

/// Magnus expansion of `w`, truncated at degree `q`.
pub fn expand(w: &GroupWord, q: usize) -> Result<MagnusSeries> {
    if q == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut acc = MagnusSeries::one(w.n(), q);
    for l in w.letters() {
        acc = if l.is_inverse() {
            acc.mul_generator_inverse(l.index())
        } else {
            acc.mul_generator(l.index())
        };
    }
    Ok(acc)
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

//! Milnor numbers of a bottom tangle presented by its longitudes, and the
//! gcds that measure their indeterminacy.
//!
//! For `I = i_1 ⋯ i_{m-1} j` the Milnor number `μ(I)` is the coefficient of
//! `X_{i_1} ⋯ X_{i_{m-1}}` in the Magnus expansion of the `j`th longitude;
//! `μ(j) = 0` for sequences of length one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::magnus::{expand, MagnusSeries, Monomial};
use crate::word::GroupWord;

/// A nonempty index sequence `i_1 i_2 ⋯ i_m`, ordered by length then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SequenceKey(Vec<usize>);

impl SequenceKey {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySequence);
        }
        if indices.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n: 0 });
        }
        Ok(SequenceKey(indices))
    }

    /// Parses `"1234"` (only when `n <= 9`) or `"1,2,3,4"`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadSequence(s.to_string());
        let indices: Vec<usize> = if s.contains(',') || n > 9 {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        let key = SequenceKey::new(indices)?;
        key.check_range(n)?;
        Ok(key)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("sequence is nonempty")
    }

    /// Everything but the last index, as a monomial.
    pub fn prefix_monomial(&self) -> Monomial {
        Monomial::new(&self.0[..self.0.len() - 1])
    }

    pub fn is_non_repeated(&self) -> bool {
        let set: BTreeSet<_> = self.0.iter().collect();
        set.len() == self.0.len()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }

    /// Appends `j`.
    pub fn with_last(&self, j: usize) -> SequenceKey {
        let mut v = self.0.clone();
        v.push(j);
        SequenceKey(v)
    }

    /// Order-preserving subsequences with length in `min_len..=max_len`,
    /// deduplicated.
    pub fn subsequences(&self, min_len: usize, max_len: usize) -> BTreeSet<SequenceKey> {
        let m = self.0.len();
        let mut out = BTreeSet::new();
        if m >= usize::BITS as usize {
            panic!("sequence too long for subsequence enumeration");
        }
        for mask in 1usize..(1 << m) {
            let len = mask.count_ones() as usize;
            if len < min_len.max(1) || len > max_len {
                continue;
            }
            let sub: Vec<usize> = (0..m).filter(|b| mask & (1 << b) != 0).map(|b| self.0[b]).collect();
            out.insert(SequenceKey(sub));
        }
        out
    }

    pub fn rotations(&self) -> impl Iterator<Item = SequenceKey> + '_ {
        let m = self.0.len();
        (0..m).map(move |r| {
            let mut v = self.0[r..].to_vec();
            v.extend_from_slice(&self.0[..r]);
            SequenceKey(v)
        })
    }
}

impl Ord for SequenceKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SequenceKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SequenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&i| i <= 9) {
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for SequenceKey {
    type Err = Error;

    /// Digit strings or comma-separated lists; no range check.
    fn from_str(s: &str) -> Result<Self> {
        SequenceKey::parse(s, if s.contains(',') { usize::MAX } else { 9 })
    }
}

/// All sequences of length `len` over `1..=n`, lexicographic.
pub fn all_sequences(n: usize, len: usize) -> Vec<SequenceKey> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (1..=n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out.into_iter().filter(|v| !v.is_empty()).map(SequenceKey).collect()
}

/// Non-repeated sequences of length `len` drawn from `alphabet`, lexicographic
/// when `alphabet` is sorted.
pub fn non_repeated_sequences(alphabet: &[usize], len: usize) -> Vec<Vec<usize>> {
    fn rec(alphabet: &[usize], len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for &a in alphabet {
            if !cur.contains(&a) {
                cur.push(a);
                rec(alphabet, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if len <= alphabet.len() {
        rec(alphabet, len, &mut Vec::new(), &mut out);
    }
    out
}

/// The non-repeated sequences of length `length` over `{1..n} \ {j}` in
/// lexicographic order; the coordinate basis of `H(2k+2, j)`.
pub fn seq_basis(n: usize, j: usize, length: usize) -> Result<Vec<SequenceKey>> {
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if length == 0 || length > n - 1 {
        return Err(Error::EmptyBasis { n, j, length });
    }
    let alphabet: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
    Ok(non_repeated_sequences(&alphabet, length).into_iter().map(SequenceKey).collect())
}

/// How strictly the longitudes' abelian parts are validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FramingCheck {
    /// `exponent_sum(λ_i, α_i) = 0` for each `i`.
    #[default]
    Framing,
    /// Every exponent sum of every longitude vanishes (`λ_i ∈ G_2`).
    Strict,
    Off,
}

/// A bottom tangle given by its longitudes `λ_1, ..., λ_n` as words in the meridians.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TanglePresentation {
    n: usize,
    longitudes: Vec<GroupWord>,
}

impl TanglePresentation {
    pub fn new(n: usize, longitudes: Vec<GroupWord>) -> Result<Self> {
        Self::with_check(n, longitudes, FramingCheck::Framing)
    }

    pub fn with_check(n: usize, longitudes: Vec<GroupWord>, check: FramingCheck) -> Result<Self> {
        if longitudes.len() != n {
            return Err(Error::ComponentCount { expected: n, got: longitudes.len() });
        }
        for w in &longitudes {
            if w.n() != n {
                return Err(Error::Mismatch(format!("longitude over {} generators, expected {n}", w.n())));
            }
        }
        for (c, w) in longitudes.iter().enumerate() {
            let gens: Vec<usize> = match check {
                FramingCheck::Framing => vec![c + 1],
                FramingCheck::Strict => (1..=n).collect(),
                FramingCheck::Off => vec![],
            };
            for g in gens {
                let sum = w.exponent_sum(g);
                if sum != 0 {
                    return Err(Error::Framing { component: c + 1, generator: g, sum });
                }
            }
        }
        Ok(TanglePresentation { n, longitudes })
    }

    /// All longitudes trivial.
    pub fn trivial(n: usize) -> Self {
        TanglePresentation { n, longitudes: vec![GroupWord::identity(n); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn longitudes(&self) -> &[GroupWord] {
        &self.longitudes
    }

    /// The `j`th longitude, 1-based.
    pub fn longitude(&self, j: usize) -> Result<&GroupWord> {
        self.longitudes.get(j.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: j, n: self.n })
    }

    pub fn expansion(&self, degree: usize) -> Result<LongitudeExpansion> {
        LongitudeExpansion::from_presentation(self, degree)
    }
}

/// Magnus expansions of all longitudes at a common truncation degree.
/// Milnor numbers of length up to `degree + 1` can be read off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongitudeExpansion {
    n: usize,
    degree: usize,
    series: Vec<MagnusSeries>,
}

/// `μ̄(I)`: residue of `μ(I)` modulo `Δ(I)`; modulus zero means the exact integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuBar {
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl LongitudeExpansion {
    pub fn from_presentation(t: &TanglePresentation, degree: usize) -> Result<Self> {
        let series = t.longitudes.iter().map(|w| expand(w, degree)).collect::<Result<Vec<_>>>()?;
        Ok(LongitudeExpansion { n: t.n, degree, series })
    }

    /// Wraps precomputed longitude series, e.g. the output of an SL-move.
    pub fn from_series(series: Vec<MagnusSeries>) -> Result<Self> {
        let n = series.len();
        let degree = series.first().map(MagnusSeries::degree).ok_or(Error::ComponentCount { expected: 1, got: 0 })?;
        for s in &series {
            if s.n() != n || s.degree() != degree {
                return Err(Error::Mismatch("longitude series in different rings".into()));
            }
            if s.constant_term() != BigInt::from(1) {
                return Err(Error::NonUnitConstant);
            }
        }
        Ok(LongitudeExpansion { n, degree, series })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn series(&self) -> &[MagnusSeries] {
        &self.series
    }

    pub fn into_series(self) -> Vec<MagnusSeries> {
        self.series
    }

    /// Longest sequence whose Milnor number this expansion determines.
    pub fn max_length(&self) -> usize {
        self.degree + 1
    }

    pub fn milnor_number(&self, seq: &SequenceKey) -> Result<BigInt> {
        seq.check_range(self.n)?;
        if seq.len() == 1 {
            return Ok(BigInt::zero());
        }
        if seq.len() > self.max_length() {
            return Err(Error::DegreeTooHigh { degree: seq.len() - 1, max: self.degree });
        }
        let j = seq.last();
        Ok(self.series[j - 1].coeff_ref(&seq.prefix_monomial()).cloned().unwrap_or_default())
    }

    /// Milnor numbers of every sequence of length `1..=max_len`, optionally
    /// restricted to non-repeated sequences.
    pub fn mu_table(&self, max_len: usize, non_repeated_only: bool) -> Result<BTreeMap<SequenceKey, BigInt>> {
        if max_len > self.max_length() {
            return Err(Error::DegreeTooHigh { degree: max_len - 1, max: self.degree });
        }
        let mut out = BTreeMap::new();
        for len in 1..=max_len {
            let keys: Vec<SequenceKey> = if non_repeated_only {
                let alphabet: Vec<usize> = (1..=self.n).collect();
                non_repeated_sequences(&alphabet, len).into_iter().map(SequenceKey).collect()
            } else {
                all_sequences(self.n, len)
            };
            for key in keys {
                let v = self.milnor_number(&key)?;
                out.insert(key, v);
            }
        }
        Ok(out)
    }

    /// `δ^k(I)`: gcd of `|μ(J)|` over order-preserving subsequences `J` of `I`
    /// obtained by deleting at least `k + 1` indices. No cyclic permutations.
    pub fn delta_k(&self, seq: &SequenceKey, k: usize) -> Result<BigInt> {
        seq.check_range(self.n)?;
        let Some(max_len) = seq.len().checked_sub(k + 1) else {
            return Ok(BigInt::zero());
        };
        let mut g = BigInt::zero();
        for sub in seq.subsequences(1, max_len) {
            g = g.gcd(&self.milnor_number(&sub)?);
        }
        Ok(g)
    }

    /// `Δ(I)`: gcd of `|μ(J)|` over cyclic permutations of proper subsequences of `I`.
    pub fn delta_link(&self, seq: &SequenceKey) -> Result<BigInt> {
        seq.check_range(self.n)?;
        let mut g = BigInt::zero();
        let mut seen = BTreeSet::new();
        for sub in seq.subsequences(1, seq.len() - 1) {
            for rot in sub.rotations() {
                if seen.insert(rot.clone()) {
                    g = g.gcd(&self.milnor_number(&rot)?);
                }
            }
        }
        Ok(g)
    }

    pub fn mu_bar(&self, seq: &SequenceKey) -> Result<MuBar> {
        let modulus = self.delta_link(seq)?;
        let mu = self.milnor_number(seq)?;
        let residue = if modulus.is_zero() { mu } else { mu.mod_floor(&modulus) };
        Ok(MuBar { residue, modulus })
    }

    /// First sequence of length `<= k` (non-repeated only when flagged)
    /// with nonzero Milnor number, in sequence order.
    pub fn first_nonvanishing(&self, k: usize, non_repeated_only: bool) -> Result<Option<(SequenceKey, BigInt)>> {
        if k > self.max_length() {
            return Err(Error::DegreeTooHigh { degree: k - 1, max: self.degree });
        }
        let mut best: Option<(SequenceKey, BigInt)> = None;
        for (idx, s) in self.series.iter().enumerate() {
            let j = idx + 1;
            for (m, c) in s.iter() {
                let d = m.degree();
                if d == 0 || d + 1 > k {
                    continue;
                }
                if non_repeated_only && (!m.is_non_repeated() || m.contains(j)) {
                    continue;
                }
                let mut v = m.to_vec();
                v.push(j);
                let key = SequenceKey(v);
                if !best.as_ref().is_some_and(|(b, _)| *b <= key) {
                    best = Some((key, c.clone()));
                }
            }
        }
        Ok(best)
    }

    /// True iff `μ(J) = 0` for every `J` with `|J| <= k`.
    pub fn check_vanishing(&self, k: usize, non_repeated_only: bool) -> Result<bool> {
        Ok(self.first_nonvanishing(k, non_repeated_only)?.is_none())
    }

    pub(crate) fn require_vanishing(&self, k: usize, non_repeated_only: bool) -> Result<()> {
        match self.first_nonvanishing(k, non_repeated_only)? {
            None => Ok(()),
            Some((witness, value)) => Err(Error::VanishingFailed {
                k,
                witness: witness.to_string(),
                value: value.to_string(),
            }),
        }
    }

    /// Pairs `p < q` with `μ(pq) ≠ μ(qp)`. Genuine tangles have none.
    pub fn linking_asymmetries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.degree == 0 {
            return out;
        }
        for p in 1..=self.n {
            for q in p + 1..=self.n {
                let pq = self.series[q - 1].coeff_ref(&Monomial::var(p)).cloned().unwrap_or_default();
                let qp = self.series[p - 1].coeff_ref(&Monomial::var(q)).cloned().unwrap_or_default();
                if pq != qp {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

fn degree_for(seq: &SequenceKey) -> usize {
    seq.len().saturating_sub(1).max(1)
}

pub fn milnor_number(t: &TanglePresentation, seq: &SequenceKey) -> Result<BigInt> {
    seq.check_range(t.n)?;
    t.expansion(degree_for(seq))?.milnor_number(seq)
}

pub fn mu_table(t: &TanglePresentation, max_len: usize, non_repeated_only: bool) -> Result<BTreeMap<SequenceKey, BigInt>> {
    t.expansion(max_len.max(1))?.mu_table(max_len, non_repeated_only)
}

pub fn delta_k(t: &TanglePresentation, seq: &SequenceKey, k: usize) -> Result<BigInt> {
    seq.check_range(t.n)?;
    t.expansion(degree_for(seq))?.delta_k(seq, k)
}

pub fn delta_link(t: &TanglePresentation, seq: &SequenceKey) -> Result<BigInt> {
    seq.check_range(t.n)?;
    t.expansion(degree_for(seq))?.delta_link(seq)
}

pub fn mu_bar(t: &TanglePresentation, seq: &SequenceKey) -> Result<MuBar> {
    seq.check_range(t.n)?;
    t.expansion(degree_for(seq))?.mu_bar(seq)
}

pub fn check_vanishing(t: &TanglePresentation, k: usize, non_repeated_only: bool) -> Result<bool> {
    t.expansion(k.max(1))?.check_vanishing(k, non_repeated_only)
}

/// Nonnegative gcd of a collection; zero for an empty or all-zero collection.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v)).abs()
}

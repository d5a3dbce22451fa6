//! SL-moves on bottom tangles, computed on Magnus expansions of longitudes.
//!
//! A move is given by a string link `u` whose longitudes `u_i` are words in
//! its own meridians `z_l`. Writing `α'_i ↦ 1 + Y_i` for the new meridians,
//! the new longitudes satisfy
//!
//! ```text
//! β_l  = [λ'_l, α'_l]
//! α_i  = u_i(β)⁻¹ α'_i u_i(β)
//! λ'_j = u_j(β) λ_j(α) u_j(β)⁻¹
//! ```
//!
//! which is solved as a fixed point in the truncated series ring. Each round
//! fixes at least one more degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::magnus::{expand, MagnusSeries, Monomial};
use crate::milnor::{non_repeated_sequences, LongitudeExpansion, SequenceKey, TanglePresentation};

/// Symmetric integer matrix `m[p][q]`, `p ≠ q`; the diagonal is zero and unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    n: usize,
    m: Vec<BigInt>,
}

impl LinkingMatrix {
    pub fn zero(n: usize) -> Self {
        LinkingMatrix { n, m: vec![BigInt::zero(); n * n] }
    }

    /// Builds the matrix from `f(p, q)` for `p < q` (1-based).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut out = Self::zero(n);
        for p in 1..=n {
            for q in p + 1..=n {
                out.set(p, q, f(p, q));
            }
        }
        out
    }

    /// `m[p][q] = m[q][p] = 1`, every other entry zero.
    pub fn elementary(n: usize, p: usize, q: usize) -> Result<Self> {
        if p == q {
            return Err(Error::Mismatch(format!("diagonal pair ({p}, {p})")));
        }
        let mut out = Self::zero(n);
        out.check(p)?;
        out.check(q)?;
        out.set(p, q, BigInt::one());
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> &BigInt {
        &self.m[(p - 1) * self.n + (q - 1)]
    }

    /// Sets both `m[p][q]` and `m[q][p]`. Diagonal writes are ignored.
    pub fn set(&mut self, p: usize, q: usize, v: BigInt) {
        if p == q {
            return;
        }
        let n = self.n;
        self.m[(q - 1) * n + (p - 1)] = v.clone();
        self.m[(p - 1) * n + (q - 1)] = v;
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }
}

impl fmt::Display for LinkingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            let row: Vec<String> = (1..=self.n).map(|q| self.get(p, q).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Linking numbers of a string link: `m[l][i]` is the coefficient of `Z_l` in `E(u_i)`.
pub fn linking_of(u: &TanglePresentation) -> Result<LinkingMatrix> {
    let n = u.n();
    let mut out = LinkingMatrix::zero(n);
    for p in 1..=n {
        for q in p + 1..=n {
            let pq = u.longitude(q)?.exponent_sum(p);
            let qp = u.longitude(p)?.exponent_sum(q);
            if pq != qp {
                return Err(Error::AsymmetricLinking { p, q, pq: pq.to_string(), qp: qp.to_string() });
            }
            out.set(p, q, pq.into());
        }
    }
    Ok(out)
}

/// A bottom tangle, the string link acting on it, and the truncation degree.
#[derive(Debug, Clone)]
pub struct SlMoveInput {
    pub gamma: TanglePresentation,
    pub u: TanglePresentation,
    pub degree: usize,
}

impl SlMoveInput {
    pub fn new(gamma: TanglePresentation, u: TanglePresentation, degree: usize) -> Result<Self> {
        if gamma.n() != u.n() {
            return Err(Error::ComponentCount { expected: gamma.n(), got: u.n() });
        }
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(SlMoveInput { gamma, u, degree })
    }
}

/// Magnus expansions `E(λ'_j)` of the moved tangle's longitudes, truncated at `input.degree`.
pub fn transform(input: &SlMoveInput) -> Result<Vec<MagnusSeries>> {
    let n = input.gamma.n();
    let q = input.degree;
    let ez: Vec<MagnusSeries> = input.u.longitudes().iter().map(|w| expand(w, q)).collect::<Result<_>>()?;
    let y: Vec<MagnusSeries> = (1..=n)
        .map(|i| MagnusSeries::variable(n, q, i)?.add(&MagnusSeries::one(n, q)))
        .collect::<Result<_>>()?;
    let y_inv: Vec<MagnusSeries> = y.iter().map(MagnusSeries::inverse).collect::<Result<_>>()?;

    let mut current: Vec<MagnusSeries> =
        input.gamma.longitudes().iter().map(|w| expand(w, q)).collect::<Result<_>>()?;
    for _ in 0..=q {
        let beta: Vec<MagnusSeries> = current
            .iter()
            .zip(&y)
            .map(|(l, yl)| Ok(MagnusSeries::commutator(l, yl)?.minus_one()))
            .collect::<Result<_>>()?;
        let mut us = Vec::with_capacity(n);
        let mut us_inv = Vec::with_capacity(n);
        let mut a = Vec::with_capacity(n);
        let mut a_inv = Vec::with_capacity(n);
        for i in 0..n {
            let ui = ez[i].substitute(&beta)?;
            let ui_inv = ui.inverse()?;
            a.push(ui_inv.mul(&y[i])?.mul(&ui)?);
            a_inv.push(ui_inv.mul(&y_inv[i])?.mul(&ui)?);
            us.push(ui);
            us_inv.push(ui_inv);
        }
        let next: Vec<MagnusSeries> = input
            .gamma
            .longitudes()
            .iter()
            .enumerate()
            .map(|(j, w)| us[j].mul(&MagnusSeries::evaluate_word(w, &a, &a_inv)?)?.mul(&us_inv[j]))
            .collect::<Result<_>>()?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::NonConvergence(q + 1))
}

/// [`transform`] wrapped as a longitude expansion.
pub fn transform_expansion(input: &SlMoveInput) -> Result<LongitudeExpansion> {
    LongitudeExpansion::from_series(transform(input)?)
}

/// Predicted change `Σ (μ'(Sj) − μ(Sj)) Y_S` over non-repeated `j`-free `S`
/// of length `2k + 1`, for a move with linking matrix `m`.
///
/// `mu` must hold `μ(Jj)` and `μ(Il)` for every split `S = J I l` with
/// `|J| = |I| = k`.
pub fn prop_delta_formula(
    mu: &BTreeMap<SequenceKey, BigInt>,
    m: &LinkingMatrix,
    k: usize,
    j: usize,
    n: usize,
) -> Result<MagnusSeries> {
    delta_formula_with(|seq| mu.get(seq).cloned().ok_or_else(|| Error::MissingMu(seq.to_string())), m, k, j, n)
}

pub(crate) fn delta_formula_with(
    mut mu: impl FnMut(&SequenceKey) -> Result<BigInt>,
    m: &LinkingMatrix,
    k: usize,
    j: usize,
    n: usize,
) -> Result<MagnusSeries> {
    if k == 0 {
        return Err(Error::Mismatch("k must be at least 1".into()));
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if m.n() != n {
        return Err(Error::Mismatch(format!("linking matrix of size {}, expected {n}", m.n())));
    }
    let d = 2 * k + 1;
    let alphabet: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
    let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for s in non_repeated_sequences(&alphabet, d) {
        let (jj, rest) = s.split_at(k);
        let (ii, l) = rest.split_at(k);
        let mu_j = mu(&SequenceKey::new([jj, &[j]].concat())?)?;
        if mu_j.is_zero() {
            continue;
        }
        let mu_i = mu(&SequenceKey::new([ii, l].concat())?)?;
        if mu_i.is_zero() {
            continue;
        }
        let c = mu_j * mu_i;
        for (pair, mono, sign) in split_terms(jj, ii, l[0], j) {
            let w = m.get(pair.0, pair.1);
            if !w.is_zero() {
                *terms.entry(Monomial::new(&mono)).or_default() += &c * w * sign;
            }
        }
    }
    MagnusSeries::from_terms(n, d, terms)
}

/// Signed monomials attached to one split `S = J I l`. Each `(pair, X, sign)`
/// contributes `sign · m[pair] · μ(Jj) μ(Il)` to the coefficient of `X`.
pub(crate) fn split_terms(jj: &[usize], ii: &[usize], l: usize, j: usize) -> Vec<((usize, usize), Vec<usize>, i64)> {
    let cat = |parts: &[&[usize]]| parts.concat();
    let lv: &[usize] = &[l];
    let pair = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut out = Vec::with_capacity(4 * (jj.len() + 1));
    for t in 0..jj.len() {
        let (pre, it, post) = (&jj[..t], &jj[t..=t], &jj[t + 1..]);
        let p = pair(l, jj[t]);
        out.push((p, cat(&[pre, it, ii, lv, post]), 1));
        out.push((p, cat(&[pre, it, lv, ii, post]), -1));
        out.push((p, cat(&[pre, ii, lv, it, post]), -1));
        out.push((p, cat(&[pre, lv, ii, it, post]), 1));
    }
    let p = pair(l, j);
    out.push((p, cat(&[ii, lv, jj]), 1));
    out.push((p, cat(&[lv, ii, jj]), -1));
    out.push((p, cat(&[jj, ii, lv]), -1));
    out.push((p, cat(&[jj, lv, ii]), 1));
    out
}

/// Outcome of comparing `μ(I)` before and after a move modulo `δ^k(I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub seq: SequenceKey,
    pub k: usize,
    pub before: BigInt,
    pub after: BigInt,
    /// `δ^k(I)` of the original tangle; zero means exact equality is required.
    pub modulus: BigInt,
    pub holds: bool,
}

impl CongruenceReport {
    /// Compares two expansions; the first must satisfy the `k`-vanishing hypothesis.
    pub fn compare(
        before: &LongitudeExpansion,
        after: &LongitudeExpansion,
        seq: &SequenceKey,
        k: usize,
    ) -> Result<Self> {
        before.require_vanishing(k, false)?;
        let modulus = before.delta_k(seq, k)?;
        let mu0 = before.milnor_number(seq)?;
        let mu1 = after.milnor_number(seq)?;
        let diff = &mu1 - &mu0;
        let holds = if modulus.is_zero() { diff.is_zero() } else { diff.is_multiple_of(&modulus) };
        Ok(CongruenceReport { seq: seq.clone(), k, before: mu0, after: mu1, modulus, holds })
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds" } else { "FAILS" };
        write!(
            f,
            "mu({}) before {} after {} modulo {}: {}",
            self.seq, self.before, self.after, self.modulus, verdict
        )
    }
}

/// Congruence report for a single move and sequence.
pub fn congruence_report(
    gamma: &TanglePresentation,
    u: &TanglePresentation,
    seq: &SequenceKey,
    k: usize,
) -> Result<CongruenceReport> {
    seq.check_range(gamma.n())?;
    let q = (seq.len().saturating_sub(1)).max(k).max(1);
    let before = gamma.expansion(q)?;
    let after = transform_expansion(&SlMoveInput::new(gamma.clone(), u.clone(), q)?)?;
    CongruenceReport::compare(&before, &after, seq, k)
}

/// Whether `μ'(I) ≡ μ(I) mod δ^k(I)` for the move `u` applied to `gamma`.
pub fn verify_congruence(gamma: &TanglePresentation, u: &TanglePresentation, seq: &SequenceKey, k: usize) -> Result<bool> {
    Ok(congruence_report(gamma, u, seq, k)?.holds)
}

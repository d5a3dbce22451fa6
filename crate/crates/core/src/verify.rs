//! Seeded random tangles and string links, and the property suites run by
//! `clover verify` and the acceptance tests.
//!
//! A suite with the same seed and case count always draws the same inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify_4clover, fingerprint, Verdict};
use crate::error::{Error, Result};
use crate::hset::hset_from_expansion;
use crate::magnus::{expand, MagnusSeries};
use crate::milnor::{all_sequences, LongitudeExpansion, SequenceKey, TanglePresentation};
use crate::realize::realize_word;
use crate::slmove::{linking_of, prop_delta_formula, transform, CongruenceReport, SlMoveInput};
use crate::word::GroupWord;
use crate::zlattice::{member, IntMatrix};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform word of the given length over `α_i^{±1}`, not reduced.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> GroupWord {
    let signed: Vec<i64> = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..=n) as i64;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    GroupWord::from_signed(n, &signed).expect("indices in range")
}

/// Left-normed commutator `[[x_1, x_2], ..., x_w]` of random letters.
pub fn random_commutator<R: Rng>(rng: &mut R, n: usize, weight: usize) -> GroupWord {
    let mut acc = random_word(rng, n, 1);
    for _ in 1..weight {
        let x = random_word(rng, n, 1);
        acc = GroupWord::commutator(&acc, &x).expect("same ambient group");
    }
    acc
}

/// Symmetric `(n + 1) x (n + 1)` table indexed from 1, zero diagonal.
fn symmetric_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n + 1]; n + 1];
    for (p, q) in (1..=n).flat_map(|p| (p + 1..=n).map(move |q| (p, q))) {
        let v = rng.gen_range(-bound..=bound);
        m[p][q] = v;
        m[q][p] = v;
    }
    m
}

fn shuffled_product<R: Rng>(rng: &mut R, n: usize, mut factors: Vec<GroupWord>) -> GroupWord {
    factors.shuffle(rng);
    factors.iter().fold(GroupWord::identity(n), |acc, f| acc.mul(f).expect("same ambient group"))
}

/// A bottom tangle all of whose Milnor numbers of length `<= k` vanish.
///
/// For `k = 1` the longitudes carry symmetric linking numbers in `[-2, 2]`;
/// for larger `k` they are products of commutators of weight `k` and `k + 1`.
pub fn random_gamma<R: Rng>(rng: &mut R, n: usize, k: usize) -> TanglePresentation {
    let link = symmetric_matrix(rng, n, if k == 1 { 2 } else { 0 });
    let weight = k.max(2);
    let longitudes = (1..=n)
        .map(|j| {
            let mut factors = Vec::new();
            for (i, row) in link.iter().enumerate().skip(1) {
                if i != j && row[j] != 0 {
                    factors.push(GroupWord::generator(n, i).expect("in range").pow(row[j]));
                }
            }
            for _ in 0..rng.gen_range(1..=3) {
                factors.push(random_commutator(rng, n, weight));
            }
            if rng.gen_bool(0.5) {
                factors.push(random_commutator(rng, n, weight + 1));
            }
            let w = shuffled_product(rng, n, factors);
            if rng.gen_bool(0.3) {
                let g = random_word(rng, n, 2);
                w.conjugate(&g).expect("same ambient group")
            } else {
                w
            }
        })
        .collect();
    TanglePresentation::new(n, longitudes).expect("framing-normalized by construction")
}

/// A string link with symmetric linking numbers in `[-bound, bound]`.
pub fn random_string_link<R: Rng>(rng: &mut R, n: usize, bound: i64) -> TanglePresentation {
    let link = symmetric_matrix(rng, n, bound);
    let longitudes = (1..=n)
        .map(|i| {
            let mut factors = Vec::new();
            for (l, row) in link.iter().enumerate().skip(1) {
                if l != i && row[i] != 0 {
                    factors.push(GroupWord::generator(n, l).expect("in range").pow(row[i]));
                }
            }
            for _ in 0..rng.gen_range(0..=2) {
                factors.push(random_commutator(rng, n, 2));
            }
            shuffled_product(rng, n, factors)
        })
        .collect();
    TanglePresentation::new(n, longitudes).expect("framing-normalized by construction")
}

/// Named property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    MagnusHom,
    SlCongruence,
    SlInvariance,
    SlClosedForm,
    LatticeInvariance,
    LatticeOracle,
    Classifier,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::MagnusHom,
        Property::SlCongruence,
        Property::SlInvariance,
        Property::SlClosedForm,
        Property::LatticeInvariance,
        Property::LatticeOracle,
        Property::Classifier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::MagnusHom => "magnus-hom",
            Property::SlCongruence => "sl-congruence",
            Property::SlInvariance => "sl-invariance",
            Property::SlClosedForm => "sl-closed-form",
            Property::LatticeInvariance => "lattice-invariance",
            Property::LatticeOracle => "lattice-oracle",
            Property::Classifier => "classifier",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Property::MagnusHom => 200,
            Property::SlCongruence => 100,
            Property::SlInvariance => 50,
            Property::SlClosedForm => 50,
            Property::LatticeInvariance => 20,
            Property::LatticeOracle => 100,
            Property::Classifier => 20,
        }
    }

    pub fn run(self, seed: u64, cases: usize) -> Result<SuiteReport> {
        let mut rng = rng_from_seed(seed);
        let mut report = SuiteReport { property: self.name(), seed, cases, failures: Vec::new() };
        for case in 0..cases {
            let outcome = match self {
                Property::MagnusHom => magnus_hom_case(&mut rng),
                Property::SlCongruence => sl_congruence_case(&mut rng),
                Property::SlInvariance => sl_invariance_case(&mut rng),
                Property::SlClosedForm => sl_closed_form_case(&mut rng, &[4, 5], &[1, 2]),
                Property::LatticeInvariance => lattice_invariance_case(&mut rng),
                Property::LatticeOracle => lattice_oracle_case(&mut rng),
                Property::Classifier => classifier_case(&mut rng),
            }?;
            if let Some(msg) = outcome {
                report.failures.push(format!("case {case}: {msg}"));
            }
        }
        Ok(report)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Mismatch(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub property: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{} seed={} cases={} {}", self.property, self.seed, self.cases, status)?;
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

/// `None` when the case passes, otherwise a description of the failure.
pub type CaseOutcome = Result<Option<String>>;

pub fn magnus_hom_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let n = rng.gen_range(1..=5);
    let q = rng.gen_range(1..=5);
    let len_v = rng.gen_range(0..=12);
    let len_w = rng.gen_range(0..=12);
    let v = random_word(rng, n, len_v);
    let w = random_word(rng, n, len_w);
    let lhs = expand(&v.concat(&w)?, q)?;
    let rhs = expand(&v, q)?.mul(&expand(&w, q)?)?;
    if lhs != rhs {
        return Ok(Some(format!("E({v} * {w}) != E({v}) E({w}) at q = {q}")));
    }
    if expand(&w, q)?.inverse()? != expand(&w.invert(), q)? {
        return Ok(Some(format!("E({w})^-1 != E({w}^-1) at q = {q}")));
    }
    Ok(None)
}

fn moved_pair<R: Rng>(rng: &mut R, n: usize, k: usize, q: usize) -> Result<(TanglePresentation, TanglePresentation, LongitudeExpansion, LongitudeExpansion)> {
    let gamma = random_gamma(rng, n, k);
    let u = random_string_link(rng, n, 2);
    let before = gamma.expansion(q)?;
    let after = LongitudeExpansion::from_series(transform(&SlMoveInput::new(gamma.clone(), u.clone(), q)?)?)?;
    Ok((gamma, u, before, after))
}

fn random_sequence<R: Rng>(rng: &mut R, n: usize, len: usize) -> SequenceKey {
    SequenceKey::new((0..len).map(|_| rng.gen_range(1..=n)).collect()).expect("nonempty")
}

/// `μ'(I) ≡ μ(I) mod δ^k(I)` for random `I` with `|I| <= 2k + 2`.
pub fn sl_congruence_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let n = rng.gen_range(3..=5);
    let k = rng.gen_range(1..=2);
    let q = 2 * k + 1;
    let (gamma, u, before, after) = moved_pair(rng, n, k, q)?;
    for _ in 0..8 {
        let len = rng.gen_range(2..=2 * k + 2);
        let seq = random_sequence(rng, n, len);
        let report = CongruenceReport::compare(&before, &after, &seq, k)?;
        if !report.holds {
            return Ok(Some(format!("{report} (k = {k}, gamma = {:?}, u = {:?})", words(&gamma), words(&u))));
        }
    }
    Ok(None)
}

fn words(t: &TanglePresentation) -> Vec<String> {
    t.longitudes().iter().map(ToString::to_string).collect()
}

/// Every Milnor number of length `<= 2k + 1` is unchanged by a move.
pub fn sl_invariance_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let n = rng.gen_range(3..=5);
    let k = rng.gen_range(1..=2);
    let q = 2 * k;
    let (gamma, u, before, after) = moved_pair(rng, n, k, q)?;
    for len in 2..=2 * k + 1 {
        for seq in all_sequences(n, len) {
            let (a, b) = (before.milnor_number(&seq)?, after.milnor_number(&seq)?);
            if a != b {
                return Ok(Some(format!(
                    "mu({seq}) changed from {a} to {b} (k = {k}, gamma = {:?}, u = {:?})",
                    words(&gamma),
                    words(&u)
                )));
            }
        }
    }
    Ok(None)
}

/// Degree `2k + 1` change of a move on non-repeated `j`-free monomials
/// equals the closed form, and lower degrees do not change.
pub fn sl_closed_form_case<R: Rng>(rng: &mut R, ns: &[usize], ks: &[usize]) -> CaseOutcome {
    let n = *ns.choose(rng).expect("nonempty");
    let k = *ks.choose(rng).expect("nonempty");
    let q = 2 * k + 1;
    let (gamma, u, before, after) = moved_pair(rng, n, k, q)?;
    let m = linking_of(&u)?;
    let mu = before.mu_table(k + 1, false)?;
    for j in 1..=n {
        let (b, a) = (&before.series()[j - 1], &after.series()[j - 1]);
        if a.truncate(2 * k) != b.truncate(2 * k) {
            return Ok(Some(format!("degree <= {} changed for j = {j}", 2 * k)));
        }
        let predicted = prop_delta_formula(&mu, &m, k, j, n)?;
        let actual = a.homogeneous(q).sub(&b.homogeneous(q))?;
        let actual = MagnusSeries::from_terms(
            n,
            q,
            actual.iter().filter(|(x, _)| x.is_non_repeated() && !x.contains(j)).map(|(x, c)| (x.clone(), c.clone())),
        )?;
        if actual != predicted {
            return Ok(Some(format!(
                "n = {n}, k = {k}, j = {j}: transform changed {actual}, closed form gives {predicted} (gamma = {:?}, u = {:?})",
                words(&gamma),
                words(&u)
            )));
        }
    }
    Ok(None)
}

/// The lattice built after a move equals the lattice built before it.
pub fn lattice_invariance_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let n = rng.gen_range(4..=5);
    let k = 1;
    let j = rng.gen_range(1..=n);
    let (gamma, u, before, after) = moved_pair(rng, n, k, 2 * k + 1)?;
    let l0 = hset_from_expansion(&before, k, j)?;
    let l1 = hset_from_expansion(&after, k, j)?;
    if !(l0.contains(&l1.base)? && l1.contains(&l0.base)? && l0.same_set(&l1)? && l1.same_set(&l0)?) {
        return Ok(Some(format!(
            "n = {n}, j = {j}: lattices differ (gamma = {:?}, u = {:?})",
            words(&gamma),
            words(&u)
        )));
    }
    Ok(None)
}

/// Membership agrees with exhaustive search over `[-5, 5]^3` for a random 4x3 system.
pub fn lattice_oracle_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..3).map(|_| rng.gen_range(-4..=4)).collect()).collect();
    let a = IntMatrix::from_rows(&rows)?;
    let b: Vec<BigInt> = if rng.gen_bool(0.5) {
        let x: Vec<BigInt> = (0..3).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        a.mul_vec(&x)?
    } else {
        (0..4).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect()
    };
    let found = member(&a, &b)?;
    if let Some(x) = &found {
        if a.mul_vec(x)? != b {
            return Ok(Some(format!("returned x does not solve A x = b for A = {rows:?}")));
        }
    }
    let brute = (-5i64..=5).any(|x0| {
        (-5i64..=5).any(|x1| {
            (-5i64..=5).any(|x2| {
                rows.iter().zip(&b).all(|(r, bi)| BigInt::from(r[0] * x0 + r[1] * x1 + r[2] * x2) == *bi)
            })
        })
    });
    if brute && found.is_none() {
        return Ok(Some(format!("member missed a solution for A = {rows:?}, b = {b:?}")));
    }
    Ok(None)
}

/// Realizes the longitudes of a moved tangle as words.
pub fn realize_moved(gamma: &TanglePresentation, u: &TanglePresentation, q: usize) -> Result<TanglePresentation> {
    let series = transform(&SlMoveInput::new(gamma.clone(), u.clone(), q)?)?;
    let words = series.iter().map(realize_word).collect::<Result<Vec<_>>>()?;
    TanglePresentation::new(gamma.n(), words)
}

/// A move-related pair classifies equivalent; a pair with a changed
/// length-2 or length-3 Milnor number classifies inequivalent.
pub fn classifier_case<R: Rng>(rng: &mut R) -> CaseOutcome {
    let gamma = random_gamma(rng, 4, 1);
    let u = random_string_link(rng, 4, 2);
    let moved = realize_moved(&gamma, &u, 3)?;
    let c = classify_4clover(&gamma, &moved)?;
    if c.verdict != Verdict::Equivalent {
        return Ok(Some(format!("move-related pair classified {} ({})", c.verdict, c.reason)));
    }
    let other = perturb(rng, &gamma)?;
    if fingerprint(&other)? == fingerprint(&gamma)? {
        return Ok(Some("perturbation left the fingerprint unchanged".into()));
    }
    for (a, b) in [(&gamma, &other), (&other, &gamma)] {
        let c = classify_4clover(a, b)?;
        if c.verdict != Verdict::Inequivalent {
            return Ok(Some(format!("pair with differing fingerprints classified {}", c.verdict)));
        }
    }
    Ok(None)
}

/// Changes one linking number symmetrically or one length-3 Milnor number.
fn perturb<R: Rng>(rng: &mut R, t: &TanglePresentation) -> Result<TanglePresentation> {
    let n = t.n();
    let mut words = t.longitudes().to_vec();
    let p = rng.gen_range(1..=n);
    let q = loop {
        let q = rng.gen_range(1..=n);
        if q != p {
            break q;
        }
    };
    if rng.gen_bool(0.5) {
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        words[q - 1] = words[q - 1].mul(&GroupWord::generator(n, p)?.pow(e))?;
        words[p - 1] = words[p - 1].mul(&GroupWord::generator(n, q)?.pow(e))?;
    } else {
        let r = (1..=n).find(|&r| r != p && r != q).expect("n >= 3");
        let c = GroupWord::commutator(&GroupWord::generator(n, p)?, &GroupWord::generator(n, q)?)?;
        words[r - 1] = words[r - 1].mul(&c)?;
    }
    TanglePresentation::new(n, words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_gamma_vanishes_to_k() {
        let mut rng = rng_from_seed(1);
        for k in 1..=3 {
            for _ in 0..5 {
                let t = random_gamma(&mut rng, 5, k);
                assert!(t.expansion(k.max(1)).unwrap().check_vanishing(k, false).unwrap());
            }
        }
        let t = random_gamma(&mut rng, 4, 1);
        assert!(t.expansion(1).unwrap().linking_asymmetries().is_empty());
    }

    #[test]
    fn string_links_have_symmetric_linking() {
        let mut rng = rng_from_seed(2);
        for _ in 0..10 {
            assert!(linking_of(&random_string_link(&mut rng, 5, 2)).is_ok());
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_gamma(&mut rng_from_seed(9), 4, 2);
        let b = random_gamma(&mut rng_from_seed(9), 4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for p in Property::ALL {
            let r = p.run(3, 3).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}

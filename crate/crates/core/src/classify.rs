//! Edge-homotopy classification of 4-clover links from bottom-tangle
//! presentations: equal non-repeated Milnor numbers of length at most 3 and
//! intersecting lattices `H(4, 4)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::hset::{hset_from_expansion, AffineLattice};
use crate::milnor::{non_repeated_sequences, LongitudeExpansion, SequenceKey, TanglePresentation};
use crate::zlattice::Infeasibility;

const COMPONENTS: usize = 4;

/// Non-repeated `μ(I)` for `|I| ∈ {2, 3}` over `{1, 2, 3, 4}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint(pub BTreeMap<SequenceKey, BigInt>);

impl Fingerprint {
    pub fn get(&self, seq: &SequenceKey) -> Option<&BigInt> {
        self.0.get(seq)
    }

    /// First sequence, in sequence order, on which two fingerprints differ.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<(SequenceKey, BigInt, BigInt)> {
        self.0
            .iter()
            .zip(&other.0)
            .find(|((_, a), (_, b))| a != b)
            .map(|((s, a), (_, b))| (s.clone(), a.clone(), b.clone()))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n != COMPONENTS {
        return Err(Error::ComponentCount { expected: COMPONENTS, got: n });
    }
    Ok(())
}

pub fn fingerprint_of(e: &LongitudeExpansion) -> Result<Fingerprint> {
    check_n(e.n())?;
    let alphabet: Vec<usize> = (1..=COMPONENTS).collect();
    let mut out = BTreeMap::new();
    for len in 2..=3 {
        for s in non_repeated_sequences(&alphabet, len) {
            let key = SequenceKey::new(s)?;
            let v = e.milnor_number(&key)?;
            out.insert(key, v);
        }
    }
    Ok(Fingerprint(out))
}

pub fn fingerprint(t: &TanglePresentation) -> Result<Fingerprint> {
    check_n(t.n())?;
    fingerprint_of(&t.expansion(3)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Inequivalent => "inequivalent",
        })
    }
}

/// Why the verdict was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// Coefficients `(m, m')` with `base1 + gens1·m = base2 + gens2·m'`.
    CommonPoint(Vec<BigInt>),
    MuDiffers { seq: SequenceKey, left: BigInt, right: BigInt },
    Disjoint(Infeasibility),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: Reason,
    pub lattices: Option<(AffineLattice, AffineLattice)>,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::CommonPoint(m) => {
                let parts: Vec<String> = m.iter().map(ToString::to_string).collect();
                write!(f, "lattices meet; combined coefficients ({})", parts.join(", "))
            }
            Reason::MuDiffers { seq, left, right } => write!(f, "mu({seq}) differs: {left} vs {right}"),
            Reason::Disjoint(cert) => write!(f, "lattices are disjoint: {cert}"),
        }
    }
}

/// Classifies two expansions of degree at least 3.
pub fn classify_expansions(e1: &LongitudeExpansion, e2: &LongitudeExpansion) -> Result<Classification> {
    let (f1, f2) = (fingerprint_of(e1)?, fingerprint_of(e2)?);
    if let Some((seq, left, right)) = f1.first_difference(&f2) {
        return Ok(Classification {
            verdict: Verdict::Inequivalent,
            reason: Reason::MuDiffers { seq, left, right },
            lattices: None,
        });
    }
    let l1 = hset_from_expansion(e1, 1, COMPONENTS)?;
    let l2 = hset_from_expansion(e2, 1, COMPONENTS)?;
    let (verdict, reason) = match l1.intersection(&l2)? {
        Ok(m) => (Verdict::Equivalent, Reason::CommonPoint(m)),
        Err(cert) => (Verdict::Inequivalent, Reason::Disjoint(cert)),
    };
    Ok(Classification { verdict, reason, lattices: Some((l1, l2)) })
}

pub fn classify_4clover(t1: &TanglePresentation, t2: &TanglePresentation) -> Result<Classification> {
    check_n(t1.n())?;
    check_n(t2.n())?;
    classify_expansions(&t1.expansion(3)?, &t2.expansion(3)?)
}

//! The affine lattices `H(2k+2, j)` of degree-`(2k+1)` Milnor coefficient
//! vectors reachable by SL-moves, built from a single presentation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::magnus::Monomial;
use crate::milnor::{non_repeated_sequences, seq_basis, LongitudeExpansion, SequenceKey, TanglePresentation};
use crate::slmove::{delta_formula_with, split_terms, LinkingMatrix};
use crate::zlattice::{self, hnf, Infeasibility, IntMatrix};

/// `base + gens · ℤ^{pairs}` in the coordinates `X_S`, `S ∈ basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub basis: Vec<SequenceKey>,
    pub base: Vec<BigInt>,
    /// Column labels `{p, q}`, `p < q`, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    pub gens: IntMatrix,
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|p| (p + 1..=n).map(move |q| (p, q))).collect()
}

/// Builds `H(2k+2, j)` from longitude expansions of degree at least `2k + 1`.
///
/// Requires every non-repeated Milnor number of length `<= k` to vanish,
/// which is automatic for `k = 1`.
pub fn hset_from_expansion(e: &LongitudeExpansion, k: usize, j: usize) -> Result<AffineLattice> {
    let n = e.n();
    if k == 0 {
        return Err(Error::Mismatch("k must be at least 1".into()));
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let d = 2 * k + 1;
    if e.degree() < d {
        return Err(Error::DegreeTooHigh { degree: d, max: e.degree() });
    }
    e.require_vanishing(k, true)?;
    let basis = seq_basis(n, j, d)?;
    let base = basis.iter().map(|s| e.milnor_number(&s.with_last(j))).collect::<Result<Vec<_>>>()?;
    let pairs = all_pairs(n);
    let mut columns = Vec::with_capacity(pairs.len());
    for &(p, q) in &pairs {
        let m = LinkingMatrix::elementary(n, p, q)?;
        let col = delta_formula_with(|s| e.milnor_number(s), &m, k, j, n)?;
        columns.push(basis.iter().map(|s| col.coeff_ref(&Monomial::new(s.indices())).cloned().unwrap_or_default()).collect());
    }
    let gens = IntMatrix::from_columns(basis.len(), &columns)?;
    Ok(AffineLattice { n, k, j, basis, base, pairs, gens })
}

/// [`hset_from_expansion`] for a presentation.
pub fn hset_generators(t: &TanglePresentation, k: usize, j: usize) -> Result<AffineLattice> {
    hset_from_expansion(&t.expansion(2 * k + 1)?, k, j)
}

impl AffineLattice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(v − base) ∈ gens · ℤ^{pairs}`.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.dim() {
            return Err(Error::Mismatch(format!("vector of length {}, lattice of dimension {}", v.len(), self.dim())));
        }
        let rhs: Vec<BigInt> = v.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        Ok(zlattice::member(&self.gens, &rhs)?.is_some())
    }

    fn check_same_frame(&self, other: &AffineLattice) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Mismatch("lattices use different coordinate bases".into()));
        }
        Ok(())
    }

    /// Solves `base1 + gens1·m = base2 + gens2·m'`, or explains why not.
    pub fn intersection(&self, other: &AffineLattice) -> Result<std::result::Result<Vec<BigInt>, Infeasibility>> {
        self.check_same_frame(other)?;
        zlattice::affine_intersection(&self.base, &self.gens, &other.base, &other.gens)
    }

    /// Equal as sets: same generator span (compared via HNF) and each base in the other.
    pub fn same_set(&self, other: &AffineLattice) -> Result<bool> {
        self.check_same_frame(other)?;
        Ok(hnf(&self.gens).basis() == hnf(&other.gens).basis() && other.contains(&self.base)?)
    }

    /// Text table: one row per basis monomial with its base value and generator coefficients.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let head: Vec<String> = self.pairs.iter().map(|(p, q)| format!("m{}", pair_label(*p, *q))).collect();
        let label_w = self.basis.iter().map(|s| s.to_string().len() + 1).max().unwrap_or(1).max(2);
        out.push_str(&format!("{:<label_w$}  {:>6}  {}\n", "", "base", head.join(" ")));
        for (r, s) in self.basis.iter().enumerate() {
            let cells: Vec<String> = self
                .gens
                .row(r)
                .iter()
                .zip(&head)
                .map(|(v, h)| format!("{:>w$}", v.to_string(), w = h.len()))
                .collect();
            out.push_str(&format!("{:<label_w$}  {:>6}  {}\n", format!("X{s}"), self.base[r].to_string(), cells.join(" ")));
        }
        out
    }
}

impl fmt::Display for AffineLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table())
    }
}

fn pair_label(p: usize, q: usize) -> String {
    if p.max(q) <= 9 {
        format!("{p}{q}")
    } else {
        format!("{p},{q}")
    }
}

pub fn hset_member(l: &AffineLattice, v: &[BigInt]) -> Result<bool> {
    l.contains(v)
}

pub fn hset_intersects(l1: &AffineLattice, l2: &AffineLattice) -> Result<bool> {
    Ok(l1.intersection(l2)?.is_ok())
}

pub type SymbolicTerms = BTreeMap<(SequenceKey, SequenceKey), BTreeMap<(usize, usize), i64>>;

/// One basis monomial's coefficient, written symbolically in the Milnor
/// numbers and linking parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicRow {
    pub monomial: SequenceKey,
    /// `(μ(A), μ(B))` with `A <= B`, mapped to the integer coefficients of each `m_pq`.
    pub terms: SymbolicTerms,
}

/// Generic form of the generator rows, with `μ` left as symbols.
///
/// With `symmetric_linking`, length-two sequences are identified with their
/// reversal, which is valid for genuine tangles.
pub fn symbolic_rows(n: usize, k: usize, j: usize, symmetric_linking: bool) -> Result<Vec<SymbolicRow>> {
    if k == 0 {
        return Err(Error::Mismatch("k must be at least 1".into()));
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let basis = seq_basis(n, j, 2 * k + 1)?;
    let canon = |mut s: Vec<usize>| {
        if symmetric_linking && s.len() == 2 && s[0] > s[1] {
            s.swap(0, 1);
        }
        SequenceKey::new(s)
    };
    let mut rows: BTreeMap<Vec<usize>, SymbolicTerms> =
        basis.iter().map(|s| (s.indices().to_vec(), BTreeMap::new())).collect();
    let alphabet: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
    for s in non_repeated_sequences(&alphabet, 2 * k + 1) {
        let (jj, rest) = s.split_at(k);
        let (ii, l) = rest.split_at(k);
        let a = canon([jj, &[j]].concat())?;
        let b = canon([ii, l].concat())?;
        let key = if a <= b { (a, b) } else { (b, a) };
        for (pair, mono, sign) in split_terms(jj, ii, l[0], j) {
            let row = rows.get_mut(&mono).expect("closed-form monomials are basis elements");
            *row.entry(key.clone()).or_default().entry(pair).or_default() += sign;
        }
    }
    Ok(rows
        .into_iter()
        .map(|(mono, mut terms)| {
            for coeffs in terms.values_mut() {
                coeffs.retain(|_, c| *c != 0);
            }
            terms.retain(|_, coeffs| !coeffs.is_empty());
            SymbolicRow { monomial: SequenceKey::new(mono).expect("nonempty"), terms }
        })
        .collect())
}

impl fmt::Display for SymbolicRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}: ", self.monomial)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), coeffs)| {
                let mut lin = String::new();
                for (i, ((p, q), c)) in coeffs.iter().enumerate() {
                    let sign = match (i, *c < 0) {
                        (0, false) => "",
                        (0, true) => "-",
                        (_, false) => " + ",
                        (_, true) => " - ",
                    };
                    let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
                    lin.push_str(&format!("{sign}{mag}m{}", pair_label(*p, *q)));
                }
                format!("mu({a})mu({b})({lin})")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::GroupWord;

    fn tangle(n: usize, words: &[&[i64]]) -> TanglePresentation {
        TanglePresentation::new(n, words.iter().map(|s| GroupWord::from_signed(n, s).unwrap()).collect()).unwrap()
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn trivial_tangle_gives_a_point() {
        let l = hset_generators(&TanglePresentation::trivial(4), 1, 4).unwrap();
        assert_eq!(l.dim(), 6);
        assert_eq!(l.gens.cols(), 6);
        assert!(l.gens.is_zero());
        assert!(hset_member(&l, &l.base).unwrap());
        let mut e1 = l.base.clone();
        e1[0] += 1;
        assert!(!hset_member(&l, &e1).unwrap());
        assert!(hset_member(&l, &v(&[0])).is_err());
    }

    #[test]
    fn hopf_pairs_lattice() {
        let t = tangle(4, &[&[2], &[1], &[4], &[3]]);
        let l = hset_generators(&t, 1, 4).unwrap();
        let names: Vec<String> = l.basis.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(l.base, v(&[0; 6]));
        assert_eq!(l.pairs, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        // t = m13 - m14 - m23 + m24
        let weights = [0, 1, -1, -1, 1, 0];
        let pattern = [1, 0, -1, 0, -1, 1];
        for (r, pr) in pattern.iter().enumerate() {
            for (c, w) in weights.iter().enumerate() {
                assert_eq!(l.gens.get(r, c), &BigInt::from(pr * w), "row {r} col {c}");
            }
        }
        assert!(hset_member(&l, &v(&[2, 0, -2, 0, -2, 2])).unwrap());
        assert!(!hset_member(&l, &v(&[1, 0, 0, 0, 0, 0])).unwrap());
        assert!(hset_intersects(&l, &l).unwrap());
        assert!(l.same_set(&l).unwrap());
    }

    #[test]
    fn disjoint_points() {
        let a = hset_generators(&TanglePresentation::trivial(4), 1, 4).unwrap();
        let mut b = a.clone();
        b.base[0] = BigInt::from(1);
        assert!(!hset_intersects(&a, &b).unwrap());
        let cert = a.intersection(&b).unwrap().unwrap_err();
        assert_eq!(cert.row, 0);
        let other_j = hset_generators(&TanglePresentation::trivial(4), 1, 3).unwrap();
        assert!(other_j.basis != a.basis);
        assert!(hset_intersects(&a, &other_j).is_err());
    }

    #[test]
    fn requires_vanishing_and_room() {
        let t = tangle(6, &[&[2], &[1], &[], &[], &[], &[]]);
        assert!(matches!(hset_generators(&t, 2, 6), Err(Error::VanishingFailed { .. })));
        assert!(matches!(
            hset_generators(&TanglePresentation::trivial(4), 2, 4),
            Err(Error::EmptyBasis { .. })
        ));
    }

    #[test]
    fn symbolic_first_row() {
        let rows = symbolic_rows(4, 1, 4, true).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(
            rows[0].to_string(),
            "X123: mu(12)mu(34)(m13 - m14 - m23 + m24) + mu(14)mu(23)(-m12 + m13 + m24 - m34)"
        );
    }

    mod props {
        use super::*;
        use crate::verify::{random_gamma, rng_from_seed};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn four_clover_row_symmetries(seed in any::<u64>()) {
                let t = random_gamma(&mut rng_from_seed(seed), 4, 1);
                let l = hset_generators(&t, 1, 4).unwrap();
                // rows: 123, 132, 213, 231, 312, 321
                for (a, b) in [(0, 5), (1, 3), (2, 4)] {
                    prop_assert_eq!(l.gens.row(a), l.gens.row(b));
                }
            }

            #[test]
            fn repeated_terms_do_not_move_the_lattice(seed in any::<u64>(), p in 1usize..=4, q in 1usize..=4, r in 1usize..=4) {
                prop_assume!(p != q);
                let t = random_gamma(&mut rng_from_seed(seed), 4, 1);
                // [[α_p, α_q], α_p] only touches sequences with a repeated index
                let g = |i| GroupWord::generator(4, i).unwrap();
                let c = GroupWord::commutator(&GroupWord::commutator(&g(p), &g(q)).unwrap(), &g(p)).unwrap();
                let mut words = t.longitudes().to_vec();
                words[r - 1] = words[r - 1].mul(&c).unwrap();
                let t2 = TanglePresentation::new(4, words).unwrap();
                for j in 1..=4 {
                    let (a, b) = (hset_generators(&t, 1, j).unwrap(), hset_generators(&t2, 1, j).unwrap());
                    prop_assert!(a.same_set(&b).unwrap());
                }
            }

            #[test]
            fn intersection_is_symmetric(s1 in any::<u64>(), s2 in any::<u64>(), j in 1usize..=4) {
                let a = hset_generators(&random_gamma(&mut rng_from_seed(s1), 4, 1), 1, j).unwrap();
                let b = hset_generators(&random_gamma(&mut rng_from_seed(s2), 4, 1), 1, j).unwrap();
                prop_assert_eq!(hset_intersects(&a, &b).unwrap(), hset_intersects(&b, &a).unwrap());
                prop_assert!(hset_intersects(&a, &a).unwrap());
            }
        }
    }
}

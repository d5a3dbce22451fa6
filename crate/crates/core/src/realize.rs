//! Recovering a group word from a Magnus series.
//!
//! A series that is the Magnus image of some element of `F / F_{q+1}` is
//! written as an ordered product of powers of basic commutators, one degree
//! at a time. Basic commutators are indexed by Lyndon words; the standard
//! bracketing of a Lyndon word `w` has leading Lie polynomial
//! `w + (lexicographically larger words)`, so the homogeneous part at each
//! degree is peeled off by repeatedly taking its smallest monomial.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::magnus::{expand, MagnusSeries};
use crate::word::GroupWord;

/// True when `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|r| {
        let rotated = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rotated)
    })
}

/// Standard factorization `w = u v` where `v` is the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[usize]) -> Option<(&[usize], &[usize])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&i| is_lyndon(&w[i..])).map(|i| w.split_at(i))
}

/// Group commutator attached to a Lyndon word: a letter for length one,
/// `[C(u), C(v)]` for the standard factorization otherwise.
pub fn basic_commutator(n: usize, w: &[usize]) -> Result<GroupWord> {
    match standard_factorization(w) {
        None if w.len() == 1 => GroupWord::generator(n, w[0]),
        None => Err(Error::NotGroupLike(format!("{w:?} is not a Lyndon word"))),
        Some((u, v)) => GroupWord::commutator(&basic_commutator(n, u)?, &basic_commutator(n, v)?),
    }
}

/// Finds a reduced word `w` with `expand(w, q) == series`.
pub fn realize_word(series: &MagnusSeries) -> Result<GroupWord> {
    let n = series.n();
    let q = series.degree();
    if !series.constant_term().eq(&BigInt::from(1)) {
        return Err(Error::NonUnitConstant);
    }
    let mut word = GroupWord::identity(n);
    for d in 1..=q {
        let rest = expand(&word.invert(), q)?.mul(series)?;
        if let Some(low) = rest.min_positive_degree().filter(|&m| m < d) {
            return Err(Error::NotGroupLike(format!("stray terms in degree {low}")));
        }
        let mut layer = rest.homogeneous(d);
        loop {
            let Some((m, c)) = layer.iter().next().map(|(m, c)| (m.clone(), c.clone())) else {
                break;
            };
            let letters = m.to_vec();
            if !is_lyndon(&letters) {
                return Err(Error::NotGroupLike(format!(
                    "leading monomial {m} in degree {d} is not a Lyndon word"
                )));
            }
            let comm = basic_commutator(n, &letters)?;
            let lie = expand(&comm, d)?.homogeneous(d);
            let lie = MagnusSeries::from_terms(n, q, lie.iter().map(|(m, c)| (m.clone(), c.clone())))?;
            layer = layer.sub(&lie.scale(&c))?;
            let e = c
                .to_i64()
                .ok_or_else(|| Error::NotGroupLike(format!("exponent {c} too large")))?;
            word = word.mul(&comm.pow(e))?;
        }
    }
    if &expand(&word, q)? != series {
        return Err(Error::NotGroupLike("residual after peeling all degrees".into()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::Monomial;
    use proptest::prelude::*;

    #[test]
    fn lyndon_words() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 1]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(is_lyndon(&[1, 2, 2]));
        assert!(!is_lyndon(&[1, 2, 1]));
        assert!(is_lyndon(&[1, 3, 2]));
        assert!(is_lyndon(&[1, 2, 1, 3]));
    }

    #[test]
    fn standard_factorizations() {
        assert_eq!(standard_factorization(&[1, 2]), Some((&[1][..], &[2][..])));
        assert_eq!(standard_factorization(&[1, 1, 2]), Some((&[1][..], &[1, 2][..])));
        assert_eq!(standard_factorization(&[1, 2, 2]), Some((&[1, 2][..], &[2][..])));
        assert_eq!(standard_factorization(&[1, 2, 1, 3]), Some((&[1, 2][..], &[1, 3][..])));
    }

    #[test]
    fn lyndon_bracket_leads_with_itself() {
        for w in [vec![1, 2], vec![1, 1, 2], vec![1, 2, 2], vec![1, 3, 2], vec![1, 2, 1, 3], vec![1, 1, 2, 2]] {
            let c = basic_commutator(3, &w).unwrap();
            let lie = expand(&c, w.len()).unwrap().homogeneous(w.len());
            let (m, coef) = lie.iter().next().unwrap();
            assert_eq!(m, &Monomial::new(&w));
            assert_eq!(coef, &BigInt::from(1));
        }
    }

    #[test]
    fn rejects_non_group_like() {
        let s = MagnusSeries::from_terms(2, 2, [(Monomial::one(), 1.into()), (Monomial::new(&[2, 1]), 1.into())])
            .unwrap();
        assert!(matches!(realize_word(&s), Err(Error::NotGroupLike(_))));
    }

    fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
        prop::collection::vec((1..=n as i64, any::<bool>()), 0..max_len).prop_map(move |v| {
            let s: Vec<i64> = v.into_iter().map(|(i, neg)| if neg { -i } else { i }).collect();
            GroupWord::from_signed(n, &s).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn realized_word_has_same_expansion(w in arb_word(3, 14), q in 1usize..=4) {
            let s = expand(&w, q).unwrap();
            let r = realize_word(&s).unwrap();
            prop_assert_eq!(expand(&r, q).unwrap(), s);
        }
    }
}

//! SL-move identities at n = 6, k = 2, the smallest size where the
//! degree-5 closed form and the lattice `H(6, j)` are nonempty.

use clover_core::hset::hset_from_expansion;
use clover_core::milnor::LongitudeExpansion;
use clover_core::slmove::{linking_of, prop_delta_formula, transform, SlMoveInput};
use clover_core::Monomial;
use clover_core::verify::{random_gamma, random_string_link, rng_from_seed};

#[test]
fn closed_form_and_lattice_at_k2() {
    let mut rng = rng_from_seed(66);
    let (n, k, q) = (6, 2, 5);
    let mut changed = 0;
    for case in 0..4 {
        let gamma = random_gamma(&mut rng, n, k);
        let u = random_string_link(&mut rng, n, 2);
        let before = gamma.expansion(q).unwrap();
        let after =
            LongitudeExpansion::from_series(transform(&SlMoveInput::new(gamma, u.clone(), q).unwrap()).unwrap()).unwrap();
        let m = linking_of(&u).unwrap();
        let mu = before.mu_table(k + 1, false).unwrap();
        for j in 1..=n {
            let (b, a) = (&before.series()[j - 1], &after.series()[j - 1]);
            assert_eq!(a.truncate(2 * k), b.truncate(2 * k), "case {case}, j = {j}");
            let predicted = prop_delta_formula(&mu, &m, k, j, n).unwrap();
            let l0 = hset_from_expansion(&before, k, j).unwrap();
            let l1 = hset_from_expansion(&after, k, j).unwrap();
            for (s, (v0, v1)) in l0.basis.iter().zip(l0.base.iter().zip(&l1.base)) {
                let x = Monomial::new(s.indices());
                assert_eq!(v1 - v0, predicted.coefficient(&x).unwrap(), "case {case}, j = {j}, X{s}");
                if v1 != v0 {
                    changed += 1;
                }
            }
            assert!(l0.same_set(&l1).unwrap() && l1.same_set(&l0).unwrap(), "case {case}, j = {j}");
            assert!(!l0.gens.is_zero() || predicted.is_zero());
        }
    }
    assert!(changed > 0, "no move changed a degree-5 coefficient");
}

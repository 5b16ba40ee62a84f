use proptest::prelude::*;

use num_bigint::BigInt;
use qatic::bounds::{Bounds, LeafConvention, Recursive};
use qatic::poset::{covers, descent_key, phi};
use qatic::{Error, MultiProfile, PrimePower, Profile};

fn profile(max_len: usize, max_coeff: u32) -> impl Strategy<Value = Profile> {
    prop::collection::vec(0..=max_coeff, 1..=max_len)
        .prop_map(Profile::new)
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn multiprofile() -> impl Strategy<Value = MultiProfile> {
    prop::collection::vec(profile(3, 2), 0..=3)
        .prop_map(|ps| MultiProfile::from_profiles(ps).unwrap())
}

fn prime_power() -> impl Strategy<Value = PrimePower> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]).prop_map(|q| PrimePower::from_q(q).unwrap())
}

proptest! {
    #[test]
    fn validity_is_downward_closed(a in profile(4, 6), q in prime_power()) {
        if a.is_profile(q) {
            for b in a.interval_below().filter(|b| !b.is_zero()) {
                prop_assert!(b.is_profile(q), "{a} valid but {b} is not at q = {q}");
            }
        }
    }

    #[test]
    fn multiprofile_text_round_trips(a in multiprofile()) {
        let back: MultiProfile = a.compact().parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(qatic::parse_multiprofile(&a.canonical()).unwrap(), a);
    }

    #[test]
    fn descent_along_covers(a in multiprofile()) {
        for c in covers(&a).unwrap() {
            prop_assert!(phi(&c.target) <= phi(&a));
            prop_assert!(descent_key(&c.target) < descent_key(&a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sweep_matches_recursion(a in multiprofile(), extra in -1i128..=2) {
        // Some tops this small already need millions of nodes; those are
        // discarded rather than counted.
        let cap = 20_000;
        let mut sweep = Bounds::new(LeafConvention::NodeCount).with_node_cap(cap);
        let r = sweep.r_bound(&a);
        prop_assume!(!matches!(r, Err(Error::CapExceeded { .. })));
        let r = r.unwrap();
        let mut rec = Recursive::new(LeafConvention::NodeCount, true).with_node_cap(cap as usize);
        prop_assert_eq!(rec.r_bound(&a).unwrap(), r);
        let at = r + extra;
        let (n1, n2) = sweep.n_at(&a, at).unwrap();
        prop_assert_eq!(n1, BigInt::from(rec.n1(&a, at).unwrap()));
        prop_assert_eq!(n2, rec.n2(&a, at).unwrap());
    }
}

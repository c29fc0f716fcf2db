mod common;

use common::{all_tables, distinct, exhaustive_fill, one_to_one, onto};
use effect_factor::finset::{
    check_diagonal_fill, compose, coproduct, exponential, factorize, identity_fun, product, FinFun, FinSet, Tagged,
};
use effect_factor::monad::{MonadKind, MonadSpec};
use proptest::prelude::*;

fn fun(max: usize) -> impl Strategy<Value = FinFun> {
    (0..=max, 1..=max).prop_flat_map(|(d, c)| {
        proptest::collection::vec(0..c, d).prop_map(move |t| FinFun::from_table(t.len(), c, t).unwrap())
    })
}

proptest! {
    #[test]
    fn factorization_composes_back(f in fun(6)) {
        let fac = factorize(&f);
        prop_assert_eq!(compose(&fac.n, &fac.e).unwrap(), f.clone());
        prop_assert!(fac.e.is_surjective());
        prop_assert!(fac.n.is_injective());
        prop_assert_eq!(fac.mid.size(), distinct(f.table()));
    }

    #[test]
    fn exponential_round_trips(b in 0usize..5, c in 1usize..5, seed in any::<u64>()) {
        let exp = exponential(&FinSet::new(b), &FinSet::new(c), 1_000_000).unwrap();
        let enc = (seed as usize) % exp.set().size();
        let g = exp.decode(enc);
        prop_assert_eq!(exp.tabulate(&g), enc);
        for (pos, &v) in g.iter().enumerate() {
            prop_assert_eq!(exp.apply(enc, pos), v);
            prop_assert_eq!(exp.eval_fun().apply(enc * b + pos), v);
        }
    }

    #[test]
    fn monad_values_round_trip(param in 0usize..3, x in 0usize..3, seed in any::<u64>()) {
        for kind in MonadKind::catalog(param) {
            let m = MonadSpec::new(kind);
            let Ok(size) = effect_factor::monad::carrier(&m, &FinSet::new(x)) else { continue };
            if size.size() == 0 {
                continue;
            }
            let t = (seed as usize) % size.size();
            prop_assert_eq!(m.encode(x, &m.decode(x, t)).unwrap(), t, "{}", kind);
        }
    }

    #[test]
    fn product_pairing_is_universal(f in fun(3), gc in 1usize..4, seed in any::<u64>()) {
        let g = FinFun::from_table(
            f.dom().size(),
            gc,
            (0..f.dom().size()).map(|i| (seed as usize >> i) % gc).collect(),
        ).unwrap();
        let p = product(f.cod(), g.cod());
        let h = p.pairing(&f, &g).unwrap();
        prop_assert_eq!(compose(&p.fst(), &h).unwrap(), f.clone());
        prop_assert_eq!(compose(&p.snd(), &h).unwrap(), g.clone());
        // any other map with both projections right is h
        for t in all_tables(f.dom().size(), p.set().size()) {
            let k = FinFun::from_table(f.dom().size(), p.set().size(), t).unwrap();
            if compose(&p.fst(), &k).unwrap() == f && compose(&p.snd(), &k).unwrap() == g {
                prop_assert_eq!(&k, &h);
            }
        }
    }

    #[test]
    fn coproduct_copairing_is_universal(x in 0usize..4, y in 0usize..4, c in 1usize..4, seed in any::<u64>()) {
        let f = FinFun::from_table(x, c, (0..x).map(|i| (seed as usize >> i) % c).collect()).unwrap();
        let g = FinFun::from_table(y, c, (0..y).map(|i| (seed as usize >> (i + 8)) % c).collect()).unwrap();
        let s = coproduct(&FinSet::new(x), &FinSet::new(y));
        let h = s.copairing(&f, &g).unwrap();
        prop_assert_eq!(compose(&h, &s.inl()).unwrap(), f.clone());
        prop_assert_eq!(compose(&h, &s.inr()).unwrap(), g.clone());
        let mut matching = 0;
        for t in all_tables(x + y, c) {
            let k = FinFun::from_table(x + y, c, t).unwrap();
            if compose(&k, &s.inl()).unwrap() == f && compose(&k, &s.inr()).unwrap() == g {
                matching += 1;
            }
        }
        prop_assert_eq!(matching, 1);
        for i in 0..x + y {
            match s.case(i) {
                Tagged::Left(v) => prop_assert_eq!(s.left(v), i),
                Tagged::Right(v) => prop_assert_eq!(s.right(v), i),
            }
        }
    }

    #[test]
    fn surjections_and_injections(f in fun(4)) {
        prop_assert_eq!(f.is_surjective(), onto(f.table(), f.cod().size()));
        prop_assert_eq!(f.is_injective(), one_to_one(f.table()));
        prop_assert_eq!(compose(&f, &identity_fun(f.dom())).unwrap(), f.clone());
        prop_assert_eq!(compose(&identity_fun(f.cod()), &f).unwrap(), f);
    }
}

#[test]
fn fill_in_is_unique_up_to_four() {
    let s = exhaustive_fill(4);
    assert!(s.failures.is_empty(), "{:?}", &s.failures[..s.failures.len().min(5)]);
    assert!(s.commuting > 100_000, "{s:?}");
}

#[test]
fn fill_rejects_wrong_classes() {
    let e = FinFun::from_table(2, 2, vec![0, 0]).unwrap();
    let m = FinFun::from_table(2, 2, vec![0, 1]).unwrap();
    let id = FinFun::from_table(2, 2, vec![0, 1]).unwrap();
    assert!(matches!(check_diagonal_fill(&e, &m, &id, &id), Err(effect_factor::Error::NotSurjective(_))));
    let m = FinFun::from_table(2, 2, vec![1, 1]).unwrap();
    assert!(matches!(check_diagonal_fill(&id, &m, &id, &id), Err(effect_factor::Error::NotInjective(_))));
}

use std::collections::HashSet;

use effect_factor::analysis::{correctness_check, kernel_partition, modularity_profile, stability_check};
use effect_factor::finset::{FinSet, DEFAULT_MAX_CARRIER};
use effect_factor::fixtures::merge_elements;
use effect_factor::monad::{MonadKind, MonadSpec};
use effect_factor::presets::{builtin_interpretation, preset, PRESETS};
use effect_factor::signature::{eval_term, FactoredMonad, Interpretation, Limits, Signature};

const CAP: usize = 1_000_000;

fn interp(name: &str) -> Interpretation {
    preset(name, 2, DEFAULT_MAX_CARRIER).unwrap()
}

/// Distinct denotations by direct evaluation of every enumerated term.
fn distinct_values(i: &Interpretation, x: usize, depth: usize) -> usize {
    let terms = effect_factor::signature::enumerate_terms(i.signature(), &FinSet::new(x), depth, CAP).unwrap();
    terms
        .iter()
        .map(|t| eval_term(t, i, &FinSet::new(x)).unwrap())
        .collect::<HashSet<_>>()
        .len()
}

#[test]
fn writer_kernel_has_six_blocks() {
    let i = interp("state-write");
    let p = kernel_partition(i.signature(), &i, &FinSet::new(2), 2, CAP).unwrap();
    assert_eq!(p.block_count(), 6);
    assert_eq!(p.block_count(), distinct_values(&i, 2, 2));
    // write(s; write(s'; x)) shares a block with write(s'; x)
    let find = |s: &str| (0..p.terms.len()).find(|&k| p.term(k) == s).unwrap();
    assert_eq!(p.labels()[find("write[0](write[1](x1))")], p.labels()[find("write[1](x1)")]);
    assert_ne!(p.labels()[find("write[1](x1)")], p.labels()[find("x1")]);
}

#[test]
fn empty_kernel_is_leaf_partition() {
    let i = interp("empty-signature");
    let p = kernel_partition(i.signature(), &i, &FinSet::new(3), 3, CAP).unwrap();
    assert_eq!(p.terms.len(), 3);
    assert_eq!(p.labels(), &[0, 1, 2]);
}

#[test]
fn or_kernel_is_a_semilattice() {
    let i = interp("powerset-or");
    let p = kernel_partition(i.signature(), &i, &FinSet::new(2), 2, CAP).unwrap();
    assert_eq!(p.block_count(), 3);
    let values: Vec<&str> = p.blocks.iter().map(|b| b.value.as_str()).collect();
    assert_eq!(values, ["{0}", "{1}", "{0,1}"]);
    let find = |s: &str| (0..p.terms.len()).find(|&k| p.term(k) == s).unwrap();
    assert_eq!(p.labels()[find("or[0](x0, x1)")], p.labels()[find("or[0](x1, x0)")]);
    assert_eq!(p.labels()[find("or[0](x0, x0)")], p.labels()[find("x0")]);
}

#[test]
fn block_count_matches_distinct_denotations() {
    for name in PRESETS {
        let i = interp(name);
        for x in 0..=2 {
            let p = kernel_partition(i.signature(), &i, &FinSet::new(x), 2, CAP).unwrap();
            assert_eq!(p.block_count(), distinct_values(&i, x, 2), "{name} at {x}");
        }
    }
}

#[test]
fn deeper_enumeration_never_merges_shallow_terms() {
    for name in PRESETS {
        let i = interp(name);
        let shallow = kernel_partition(i.signature(), &i, &FinSet::new(2), 1, CAP).unwrap();
        let deep = kernel_partition(i.signature(), &i, &FinSet::new(2), 2, CAP).unwrap();
        let pos: Vec<usize> = shallow
            .terms
            .iter()
            .map(|t| deep.terms.iter().position(|u| u == t).unwrap())
            .collect();
        for a in 0..pos.len() {
            for b in 0..pos.len() {
                let same_shallow = shallow.labels()[a] == shallow.labels()[b];
                let same_deep = deep.labels()[pos[a]] == deep.labels()[pos[b]];
                assert_eq!(same_shallow, same_deep, "{name}");
            }
        }
    }
}

#[test]
fn correctness_holds_for_presets() {
    for name in PRESETS {
        let mut f = FactoredMonad::new(interp(name), Limits::default());
        for x in 0..=2 {
            let r = correctness_check(&mut f, x, 3).unwrap();
            assert!(r.agree, "{name} at {x}: {:?}", r.counterexample);
            assert_eq!(r.blocks_in_r, r.blocks_in_t);
        }
    }
}

#[test]
fn merged_n_is_caught() {
    let mut f = FactoredMonad::new(interp("state-write"), Limits::default());
    f.prepare(2).unwrap();
    // keep x0, merge in "x0 after write 0"
    let entry = f.entry(2).unwrap();
    let drop = (0..entry.len()).find(|&r| entry.witness(r).depth() == 1).unwrap();
    merge_elements(&mut f, 2, 0, drop).unwrap();
    let r = correctness_check(&mut f, 2, 2).unwrap();
    assert!(!r.agree);
    let cx = r.counterexample.unwrap();
    assert!(cx.contains("identified in R but not in T"), "{cx}");
}

#[test]
fn modularity_profiles() {
    let limits = Limits::default();
    let w = interp("state-write");
    let p = modularity_profile(&w, w.signature(), &[0, 1, 2, 3], "writer", &limits).unwrap();
    assert_eq!(p.rows.iter().map(|r| r.size).collect::<Vec<_>>(), [0, 3, 6, 9]);
    assert!(p.passed());

    let r = interp("state-read");
    let p = modularity_profile(&r, r.signature(), &[1, 2, 3], "reader", &limits).unwrap();
    assert_eq!(p.rows.iter().map(|r| r.size).collect::<Vec<_>>(), [1, 4, 9]);
    assert!(p.passed());

    let c = interp("cont-abort");
    let p = modularity_profile(&c, c.signature(), &[0, 1, 2, 3], "exception", &limits).unwrap();
    assert_eq!(p.rows.iter().map(|r| r.size).collect::<Vec<_>>(), [2, 3, 4, 5]);
    assert!(p.passed());

    let p = modularity_profile(&w, w.signature(), &[1], "reader", &limits).unwrap();
    assert!(!p.passed());
    assert!(modularity_profile(&w, w.signature(), &[1], "bogus", &limits).is_err());
}

#[test]
fn writes_are_stable_under_exceptions() {
    let a = interp("state-write");
    let b = interp("stateexc-write");
    let r = stability_check(a.signature(), &a, &b, &[0, 1, 2], 3, CAP).unwrap();
    assert!(r.stable(), "{r:#?}");
    assert_eq!(r.rows[2].blocks_a, 6);
}

#[test]
fn empty_signature_is_always_stable() {
    let a = interp("state-write");
    let b = interp("powerset-or");
    let r = stability_check(&Signature::empty(), &a, &b, &[0, 1, 2, 3], 3, CAP).unwrap();
    assert!(r.stable());
}

#[test]
fn left_biased_choice_is_not_stable() {
    let a = interp("powerset-or");
    let b = builtin_interpretation(MonadSpec::new(MonadKind::Identity), &["choose-left"]).unwrap();
    // rename choose-left to or so both cover the same signature
    let sig = a.signature().clone();
    let b = Interpretation::new(b.monad().clone(), sig.clone(), vec![b.effect(0).clone()]).unwrap();
    let r = stability_check(&sig, &a, &b, &[2], 2, CAP).unwrap();
    assert!(!r.stable());
    let msg = r.rows[0].distinguishing.as_deref().unwrap();
    assert_eq!(msg, "or[0](x0, x1) vs x0: distinguished under powerset, identified under identity");
}

#[test]
fn stability_requires_coverage() {
    let a = interp("state-write");
    let b = interp("state-read");
    assert!(matches!(
        stability_check(a.signature(), &a, &b, &[1], 1, CAP),
        Err(effect_factor::Error::Uncovered(_))
    ));
}

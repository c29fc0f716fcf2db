use effect_factor::finset::{FinFun, FinSet, DEFAULT_MAX_CARRIER};
use effect_factor::fixtures::remove_element;
use effect_factor::monad::{Monad, MonadKind, MonadSpec, Value};
use effect_factor::presets::{builtin_interpretation, preset, PRESETS};
use effect_factor::report::Status;
use effect_factor::signature::{
    check_lemma2_stabilization, enumerate_terms, eval_term, saturate, verify_theorem1, CheckOptions, FactoredMonad,
    Interpretation, Limits, Signature,
};

fn factored(name: &str) -> FactoredMonad {
    FactoredMonad::new(preset(name, 2, DEFAULT_MAX_CARRIER).unwrap(), Limits::default())
}

fn size(name: &str, x: usize) -> usize {
    let interp = preset(name, 2, DEFAULT_MAX_CARRIER).unwrap();
    saturate(&interp, &FinSet::new(x), &Limits::default()).unwrap().len()
}

#[test]
fn saturation_sizes() {
    assert_eq!(size("state-write", 2), 6);
    assert_eq!(size("state-read", 2), 4);
    assert_eq!(size("state-read-write", 2), 16);
    assert_eq!(size("powerset-or", 3), 7);
    assert_eq!(size("cont-abort", 2), 4);
}

#[test]
fn read_write_recovers_state() {
    let interp = preset("state-read-write", 2, DEFAULT_MAX_CARRIER).unwrap();
    let entry = saturate(&interp, &FinSet::new(2), &Limits::default()).unwrap();
    assert_eq!(entry.carrier_size(), 16);
    assert!(entry.n().is_bijective());
}

#[test]
fn empty_signature_gives_identity() {
    for kind in MonadKind::catalog(2) {
        let m = MonadSpec::new(kind);
        let interp = Interpretation::new(m.clone(), Signature::empty(), vec![]).unwrap();
        for x in 0..=3 {
            let unit = effect_factor::monad::unit(&m, &FinSet::new(x)).unwrap();
            assert!(unit.is_injective());
            let entry = saturate(&interp, &FinSet::new(x), &Limits::default()).unwrap();
            assert_eq!(entry.len(), x, "{kind} at {x}");
            assert_eq!(entry.n(), unit);
        }
    }
}

#[test]
fn cont_abort_reaches_constants() {
    let interp = preset("cont-abort", 2, DEFAULT_MAX_CARRIER).unwrap();
    let m = interp.monad().clone();
    let entry = saturate(&interp, &FinSet::new(2), &Limits::default()).unwrap();
    let mut values: Vec<Value> = entry.elements().iter().map(|&t| m.decode(2, t)).collect();
    values.sort_by_key(|v| v.to_string());
    let mut expected: Vec<Value> = (0..2)
        .map(|v| m.decode(2, m.unit_at(2, v)))
        .chain((0..2).map(|a| Value::Cont(vec![a; 4])))
        .collect();
    expected.sort_by_key(|v| v.to_string());
    assert_eq!(values, expected);
}

#[test]
fn witnesses_evaluate_to_their_elements() {
    for name in PRESETS {
        let interp = preset(name, 2, DEFAULT_MAX_CARRIER).unwrap();
        for x in 0..=3 {
            let entry = saturate(&interp, &FinSet::new(x), &Limits::default()).unwrap();
            assert!(entry.n().is_injective());
            for (r, w) in entry.witnesses().iter().enumerate() {
                assert_eq!(eval_term(w, &interp, &FinSet::new(x)).unwrap(), entry.element(r));
            }
            // every term of depth ≤ 2 lands in the image of n
            let terms = enumerate_terms(interp.signature(), &FinSet::new(x), 2, 1_000_000).unwrap();
            for t in terms {
                let v = eval_term(&t, &interp, &FinSet::new(x)).unwrap();
                assert!(entry.lookup(v).is_some(), "{name}: {} escapes R", t.display(interp.signature()));
            }
        }
    }
}

#[test]
fn minimal_depth_witnesses() {
    let interp = preset("state-read-write", 2, DEFAULT_MAX_CARRIER).unwrap();
    let entry = saturate(&interp, &FinSet::new(2), &Limits::default()).unwrap();
    let trace = entry.layer_trace();
    for (r, w) in entry.witnesses().iter().enumerate() {
        let round = trace.iter().position(|&n| r < n).unwrap();
        assert_eq!(w.depth(), round);
    }
}

#[test]
fn right_unit_on_r() {
    for name in PRESETS {
        let mut f = factored(name);
        for x in 0..=2 {
            f.prepare(x).unwrap();
            let units = f.r_unit(x).unwrap();
            let bound = f.r_bind(x, &units).unwrap();
            assert_eq!(bound, effect_factor::finset::identity_fun(&f.entry(x).unwrap().rx()), "{name} {x}");
        }
    }
}

#[test]
fn writer_bind_stays_inside() {
    let mut f = factored("state-write");
    f.prepare(2).unwrap();
    let m = f.interpretation().monad().clone();
    let entry = f.entry(2).unwrap().clone();
    assert_eq!(entry.len(), 6);
    // the constant-write elements: s ↦ (v, s') for fixed v, s'
    let writes: Vec<usize> = (0..entry.len())
        .filter(|&r| matches!(m.decode(2, entry.element(r)), Value::State(ref g) if g[0] == g[1]))
        .collect();
    assert_eq!(writes.len(), 4);
    for &r in &writes {
        for &k0 in &writes {
            for &k1 in &writes {
                let out = f.r_bind_at(2, 2, r, &[k0, k1]).unwrap();
                assert!(out < 6);
                assert!(writes.contains(&out));
            }
        }
    }
}

#[test]
fn empty_signature_bind_is_application() {
    let mut f = factored("empty-signature");
    f.prepare(3).unwrap();
    f.prepare(2).unwrap();
    let k = FinFun::from_table(3, 2, vec![1, 0, 1]).unwrap();
    let bound = f.r_bind(2, &k).unwrap();
    assert_eq!(bound.table(), k.table());
    let map = f.r_map(&FinFun::from_table(3, 2, vec![1, 1, 0]).unwrap()).unwrap();
    assert_eq!(map.table(), &[1, 1, 0]);
}

#[test]
fn theorem_checks_pass_for_every_preset() {
    for name in PRESETS {
        let mut f = factored(name);
        for (x, y, z) in [(0, 1, 2), (1, 1, 1), (2, 2, 2), (2, 1, 0)] {
            let report = verify_theorem1(&mut f, x, y, z, &CheckOptions::default()).unwrap();
            assert!(report.passed(), "{name}: {:#?}", report.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn cont_abort_skips_only_oversized_products() {
    let mut f = factored("cont-abort");
    let report = verify_theorem1(&mut f, 2, 2, 2, &CheckOptions::default()).unwrap();
    let skipped: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status == Status::Skipped)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(skipped, ["r-strength-associativity"]);
    assert_eq!(report.check("strength-closure").unwrap().status, Status::Pass);
}

#[test]
fn removed_element_breaks_closure() {
    let mut f = factored("state-write");
    f.prepare(2).unwrap();
    let last = f.entry(2).unwrap().len() - 1;
    remove_element(&mut f, 2, last).unwrap();
    let report = verify_theorem1(&mut f, 2, 1, 1, &CheckOptions::default()).unwrap();
    let closure = report.checks.iter().find(|c| c.name == "closure" && c.objects == [2]).unwrap();
    assert_eq!(closure.status, Status::Fail);
    let detail = closure.detail.as_deref().unwrap();
    assert!(detail.contains("write["), "{detail}");

    let lemma = check_lemma2_stabilization(&f, 2).unwrap();
    assert!(!lemma.closed);
    assert!(!lemma.passed());
}

#[test]
fn stabilization_traces() {
    let mut f = factored("state-read-write");
    f.saturate(2).unwrap();
    let l = check_lemma2_stabilization(&f, 2).unwrap();
    assert_eq!(l.layer_trace.first(), Some(&2));
    assert_eq!(l.layer_trace.last(), Some(&16));
    assert!(l.rounds_to_fixpoint <= 16);
    assert!(l.passed());

    let mut f = factored("empty-signature");
    f.saturate(3).unwrap();
    let l = check_lemma2_stabilization(&f, 3).unwrap();
    assert_eq!(l.layer_trace, vec![3]);
    assert_eq!(l.rounds_to_fixpoint, 0);

    let mut f = factored("powerset-or");
    f.saturate(3).unwrap();
    let l = check_lemma2_stabilization(&f, 3).unwrap();
    assert_eq!(l.final_size, 7);
    assert_eq!(l.layer_trace.last(), Some(&7));
    assert!(l.passed());
}

#[test]
fn saturation_respects_round_cap() {
    let interp = preset("state-read-write", 2, DEFAULT_MAX_CARRIER).unwrap();
    let tight = Limits {
        max_terms: 1000,
        max_round_work: 20,
    };
    assert!(matches!(
        saturate(&interp, &FinSet::new(2), &tight),
        Err(effect_factor::Error::InstanceTooLarge { .. })
    ));
}

#[test]
fn nullary_and_parameterless_operations() {
    // raise : E → 0 in the exception monad reaches X + E; an op with A = 0
    // contributes nothing.
    let m = MonadSpec::new(MonadKind::Exception { errors: 3 });
    let interp = builtin_interpretation(m, &["raise"]).unwrap();
    for x in 0..=3 {
        assert_eq!(saturate(&interp, &FinSet::new(x), &Limits::default()).unwrap().len(), x + 3);
    }
    let none = builtin_interpretation(MonadSpec::new(MonadKind::Exception { errors: 0 }), &["raise"]).unwrap();
    assert_eq!(saturate(&none, &FinSet::new(2), &Limits::default()).unwrap().len(), 2);
}

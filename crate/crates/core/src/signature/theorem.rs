//! Finite verification that `R` is a strong monad and that `e` and `n` are
//! strong monad morphisms, plus the stabilization report for the saturation
//! chain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::factored::closure_gap;
use super::{enumerate_terms, FactoredMonad};
use crate::cases::run_cases;
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::monad::Monad;
use crate::report::{all_passed, CheckResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Cases per check before switching from enumeration to sampling.
    pub budget: u64,
    pub seed: u64,
    /// Depth of the terms used for the checks on `e`.
    pub term_depth: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: 100_000,
            seed: 0,
            term_depth: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub objects: Vec<usize>,
    pub checks: Vec<CheckResult>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn err_text(e: Error) -> Option<String> {
    Some(e.to_string())
}

fn differs<T: PartialEq + std::fmt::Debug>(what: String, lhs: T, rhs: T) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: lhs {lhs:?} ≠ rhs {rhs:?}"))
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return err_text(e),
        }
    };
}

/// Checks, at the objects `X`, `Y`, `Z`:
///
/// - `R` contains the unit values, is closed under the operations, and every
///   witness evaluates to its element;
/// - `n` is injective and commutes with unit and bind;
/// - `(R, r_unit, r_bind)` satisfies the monad laws;
/// - evaluation into `T` and into `R` respects substitution of terms, and
///   `m = n ∘ e` on enumerated terms;
/// - the strength of `T` restricts to `R` and satisfies the strength axioms
///   there.
///
/// Checks that need a product object whose carrier is over the cap are
/// reported as skipped.
pub fn verify_theorem1(f: &mut FactoredMonad, x: usize, y: usize, z: usize, opts: &CheckOptions) -> Result<TheoremReport> {
    for o in [x, y, z] {
        f.prepare(o)?;
    }
    let mut unavailable: BTreeMap<usize, String> = BTreeMap::new();
    for o in [x * y, y * z, x * z, x * y * z] {
        match f.saturate(o) {
            Ok(_) => {}
            Err(e @ Error::InstanceTooLarge { .. }) => {
                unavailable.insert(o, e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    let f = &*f;
    let need = |objs: &[usize]| objs.iter().find_map(|o| unavailable.get(o).cloned());

    let sig = f.interpretation().signature();
    let m = f.interpretation().monad();
    let tag_prefix = format!("{}/{}", m.name(), sig.names().join(","));
    let budget = opts.budget;
    let seed = opts.seed;
    let (ex, ey, ez) = (f.entry(x)?, f.entry(y)?, f.entry(z)?);
    let (rx, ry, rz) = (ex.len(), ey.len(), ez.len());
    let mut checks = Vec::new();

    let run = |name: &str, objs: &[usize], radices: Vec<usize>, check: &mut dyn FnMut(&[usize]) -> Option<String>| {
        let tag = format!("{tag_prefix}/{name}/{objs:?}");
        CheckResult::from_outcome(name, objs, run_cases(&radices, budget, seed, &tag, check))
    };

    // Saturation invariants.
    let missing_unit = (0..x).find(|&v| ex.lookup(m.unit_at(x, v)).is_none());
    checks.push(CheckResult::single(
        "unit-containment",
        &[x],
        missing_unit.map(|v| format!("unit at x{v} is not in R({x})")),
    ));
    let mut distinct = vec![x, y, z];
    distinct.sort_unstable();
    distinct.dedup();
    for o in distinct {
        let gap = closure_gap(f.interpretation(), f.entry(o)?, f.limits())?;
        checks.push(CheckResult::single(
            "closure",
            &[o],
            gap.map(|(t, w)| format!("R({o}) misses {} = {}", m.decode(o, t), w.display(sig))),
        ));
    }
    checks.push(run("witness-soundness", &[x], vec![rx], &mut |p| {
        let r = p[0];
        differs(
            format!("witness {}", ex.witness(r).display(sig)),
            f.eval_in_t(ex.witness(r), x),
            ex.element(r),
        )
    }));
    let n = ex.n();
    let merged = if n.is_injective() {
        None
    } else {
        let mut seen = BTreeMap::new();
        n.table().iter().enumerate().find_map(|(r, &t)| {
            seen.insert(t, r).map(|first| {
                format!(
                    "n({}) = n({}) = {}",
                    ex.witness(first).display(sig),
                    ex.witness(r).display(sig),
                    m.decode(x, t)
                )
            })
        })
    };
    checks.push(CheckResult::single("n-injective", &[x], merged));

    // Monad laws on R.
    checks.push(run("r-left-unit", &[x, y], [vec![x], vec![ry; x]].concat(), &mut |p| {
        let (v, k) = (p[0], &p[1..]);
        let lhs = attempt!(f.r_unit_at(x, v).and_then(|u| f.r_bind_at(x, y, u, k)));
        differs(format!("v={v} k={k:?}"), lhs, k[v])
    }));
    let units_x: Option<Vec<usize>> = (0..x).map(|v| f.r_unit_at(x, v).ok()).collect();
    checks.push(run("r-right-unit", &[x], vec![rx], &mut |p| {
        let units = match &units_x {
            Some(u) => u,
            None => return Some(format!("some unit at |X|={x} is not in R")),
        };
        differs(format!("r={}", p[0]), attempt!(f.r_bind_at(x, x, p[0], units)), p[0])
    }));
    checks.push(run(
        "r-associativity",
        &[x, y, z],
        [vec![rx], vec![ry; x], vec![rz; y]].concat(),
        &mut |p| {
            let r = p[0];
            let (k, h) = p[1..].split_at(x);
            let lhs = attempt!(f.r_bind_at(x, y, r, k).and_then(|s| f.r_bind_at(y, z, s, h)));
            let composite = attempt!(k.iter().map(|&kv| f.r_bind_at(y, z, kv, h)).collect::<Result<Vec<_>>>());
            let rhs = attempt!(f.r_bind_at(x, z, r, &composite));
            differs(format!("r={r} k={k:?} h={h:?}"), lhs, rhs)
        },
    ));

    // n is a monad morphism.
    checks.push(run("n-unit", &[x], vec![x], &mut |p| {
        let v = p[0];
        let r = attempt!(f.r_unit_at(x, v));
        differs(format!("x{v}"), ex.element(r), m.unit_at(x, v))
    }));
    checks.push(run("n-bind", &[x, y], [vec![rx], vec![ry; x]].concat(), &mut |p| {
        let (r, k) = (p[0], &p[1..]);
        let lhs = ey.element(attempt!(f.r_bind_at(x, y, r, k)));
        let nk: Vec<usize> = k.iter().map(|&j| ey.element(j)).collect();
        let rhs = m.bind_at(x, y, ex.element(r), &nk);
        differs(format!("r={r} k={k:?}"), lhs, rhs)
    }));

    // e is a monad morphism, on terms up to the configured depth.
    let max_terms = f.limits().max_terms;
    match enumerate_terms(sig, &FinSet::new(x), opts.term_depth, max_terms) {
        Ok(terms) => checks.push(run("factorization-identity", &[x], vec![terms.len()], &mut |p| {
            let t = &terms[p[0]];
            let via_r = ex.element(attempt!(f.eval_in_r(t, x)));
            differs(format!("term {}", t.display(sig)), f.eval_in_t(t, x), via_r)
        })),
        Err(e) => checks.push(CheckResult::skipped("factorization-identity", &[x], e.to_string())),
    }
    let outer = enumerate_terms(sig, &FinSet::new(x), opts.term_depth, max_terms);
    let inner = enumerate_terms(sig, &FinSet::new(y), opts.term_depth.saturating_sub(1), max_terms);
    match (outer, inner) {
        (Ok(ts), Ok(us)) => {
            checks.push(run("e-bind", &[x, y], [vec![ts.len()], vec![us.len(); x]].concat(), &mut |p| {
                let t = &ts[p[0]];
                let u: Vec<_> = p[1..].iter().map(|&i| us[i].clone()).collect();
                let s = t.subst(&u);
                let what = || format!("t={} u=[{}]", t.display(sig), u.iter().map(|w| w.display(sig).to_string()).collect::<Vec<_>>().join(", "));
                let ku: Vec<usize> = u.iter().map(|w| f.eval_in_t(w, y)).collect();
                if let Some(d) = differs(
                    format!("in T, {}", what()),
                    f.eval_in_t(&s, y),
                    m.bind_at(x, y, f.eval_in_t(t, x), &ku),
                ) {
                    return Some(d);
                }
                let ru = attempt!(u.iter().map(|w| f.eval_in_r(w, y)).collect::<Result<Vec<_>>>());
                let lhs = attempt!(f.eval_in_r(&s, y));
                let rhs = attempt!(f.eval_in_r(t, x).and_then(|r| f.r_bind_at(x, y, r, &ru)));
                differs(format!("in R, {}", what()), lhs, rhs)
            }))
        }
        (Err(e), _) | (_, Err(e)) => checks.push(CheckResult::skipped("e-bind", &[x, y], e.to_string())),
    }

    // Strength.
    let id = |k: usize| -> Vec<usize> { (0..k).collect() };
    match need(&[x * y]) {
        Some(reason) => checks.push(CheckResult::skipped("strength-closure", &[x, y], reason)),
        None => checks.push(run("strength-closure", &[x, y], vec![x, ry], &mut |p| {
            f.r_strength_at(x, y, p[0], p[1]).err().map(|e| e.to_string())
        })),
    }
    let id_y = id(y);
    checks.push(run("r-strength-unit-projection", &[y], vec![ry], &mut |p| {
        let r = p[0];
        let lhs = attempt!(f.r_strength_at(1, y, 0, r).and_then(|s| f.r_map_at(y, y, &id_y, s)));
        differs(format!("r={r}"), lhs, r)
    }));
    match need(&[y * z, x * y * z]) {
        Some(reason) => checks.push(CheckResult::skipped("r-strength-associativity", &[x, y, z], reason)),
        None => {
            let xyz = x * y * z;
            let alpha = id(xyz);
            checks.push(run("r-strength-associativity", &[x, y, z], vec![x, y, rz], &mut |p| {
                let (v, w, r) = (p[0], p[1], p[2]);
                let lhs = attempt!(f
                    .r_strength_at(x * y, z, v * y + w, r)
                    .and_then(|s| f.r_map_at(xyz, xyz, &alpha, s)));
                let rhs = attempt!(f.r_strength_at(y, z, w, r).and_then(|s| f.r_strength_at(x, y * z, v, s)));
                differs(format!("x={v} y={w} r={r}"), lhs, rhs)
            }));
        }
    }
    match need(&[x * y]) {
        Some(reason) => checks.push(CheckResult::skipped("r-strength-unit", &[x, y], reason)),
        None => checks.push(run("r-strength-unit", &[x, y], vec![x, y], &mut |p| {
            let (v, w) = (p[0], p[1]);
            let lhs = attempt!(f.r_unit_at(y, w).and_then(|u| f.r_strength_at(x, y, v, u)));
            let rhs = attempt!(f.r_unit_at(x * y, v * y + w));
            differs(format!("x={v} y={w}"), lhs, rhs)
        })),
    }
    match need(&[x * y, x * z]) {
        Some(reason) => checks.push(CheckResult::skipped("r-strength-bind", &[x, y, z], reason)),
        None => checks.push(run("r-strength-bind", &[x, y, z], [vec![x, ry], vec![rz; y]].concat(), &mut |p| {
            let (v, r, k) = (p[0], p[1], &p[2..]);
            let lhs = attempt!(f.r_bind_at(y, z, r, k).and_then(|s| f.r_strength_at(x, z, v, s)));
            let lifted = attempt!((0..x * y)
                .map(|i| f.r_strength_at(x, z, i / y, k[i % y]))
                .collect::<Result<Vec<_>>>());
            let rhs = attempt!(f.r_strength_at(x, y, v, r).and_then(|s| f.r_bind_at(x * y, x * z, s, &lifted)));
            differs(format!("x={v} r={r} k={k:?}"), lhs, rhs)
        })),
    }

    Ok(TheoremReport {
        objects: vec![x, y, z],
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub x: usize,
    pub carrier_size: usize,
    pub layer_trace: Vec<usize>,
    pub rounds_to_fixpoint: usize,
    pub final_size: usize,
    pub monotone: bool,
    /// Fixpoint reached within `|T X|` rounds.
    pub bounded: bool,
    /// One more round adds nothing.
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.monotone && self.bounded && self.closed && self.layer_trace.last() == Some(&self.final_size)
    }
}

/// Checks that the saturation chain at `X` is monotone, stabilizes within
/// `|T X|` rounds at `|R X|`, and that one further round adds nothing.
pub fn check_lemma2_stabilization(f: &FactoredMonad, x: usize) -> Result<Lemma2Report> {
    let entry = f.entry(x)?;
    let trace = entry.layer_trace().to_vec();
    let rounds = trace.len().saturating_sub(1);
    let gap = closure_gap(f.interpretation(), entry, f.limits())?;
    let sig = f.interpretation().signature();
    Ok(Lemma2Report {
        x,
        carrier_size: entry.carrier_size(),
        monotone: trace.windows(2).all(|w| w[0] <= w[1]),
        bounded: rounds <= entry.carrier_size(),
        closed: gap.is_none(),
        detail: gap.map(|(t, w)| {
            format!(
                "extra round reaches {} = {}",
                f.interpretation().monad().decode(x, t),
                w.display(sig)
            )
        }),
        rounds_to_fixpoint: rounds,
        final_size: entry.len(),
        layer_trace: trace,
    })
}

//! Monad, functor and strength law checking for any [`Monad`].

use serde::{Deserialize, Serialize};

use super::{fmap, Monad};
use crate::cases::{run_cases, space_size};
use crate::error::{Error, Result};
use crate::finset::{identity_fun, product, FinFun, FinSet};
use crate::report::{all_passed, CheckResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub monad: String,
    pub budget: u64,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Number of Kleisli maps `X → T Y`, i.e. `|T Y|^|X|`.
pub fn kleisli_map_count<M: Monad + ?Sized>(m: &M, x: usize, y: usize) -> Result<u128> {
    let ty = m.carrier_size(y)?;
    space_size(&vec![ty; x]).ok_or_else(|| Error::too_large("Kleisli map space", format!("{ty}^{x}"), usize::MAX))
}

type Law<M> = fn(&M, &[usize], u64, u64, &str) -> Result<CheckResult>;

/// Checks the unit, associativity, functor and strength laws on every tuple
/// drawn from `objects`.
///
/// Each law gets `budget` cases in total, split evenly across its tuples. A
/// tuple whose case space fits its share is enumerated exhaustively, otherwise
/// it is sampled. Tuples whose carriers exceed the cap are reported as
/// skipped.
pub fn check_monad_laws<M: Monad + ?Sized>(m: &M, objects: &[FinSet], budget: u64, seed: u64) -> LawReport {
    let sizes: Vec<usize> = objects.iter().map(FinSet::size).collect();
    let laws: [(&str, usize, Law<M>); 9] = [
        ("left-unit", 2, left_unit::<M>),
        ("right-unit", 1, right_unit::<M>),
        ("associativity", 3, associativity::<M>),
        ("functor-identity", 1, functor_identity::<M>),
        ("functor-composition", 3, functor_composition::<M>),
        ("strength-unit-projection", 1, strength_projection::<M>),
        ("strength-associativity", 3, strength_associativity::<M>),
        ("strength-unit", 2, strength_unit::<M>),
        ("strength-bind", 3, strength_bind::<M>),
    ];

    let mut checks = Vec::new();
    for (name, arity, law) in laws {
        let tuples = tuples(&sizes, arity);
        let allot = (budget / tuples.len().max(1) as u64).max(1);
        for tuple in tuples {
            let tag = format!("{}/{name}/{tuple:?}", m.name());
            checks.push(
                law(m, &tuple, allot, seed, &tag)
                    .unwrap_or_else(|e| CheckResult::skipped(name, &tuple, e.to_string())),
            );
        }
    }
    LawReport {
        monad: m.name(),
        budget,
        seed,
        checks,
    }
}

pub(crate) fn tuples(sizes: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                sizes.iter().map(move |&s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    out
}

fn radices(head: &[usize], repeated: &[(usize, usize)]) -> Vec<usize> {
    let mut r = head.to_vec();
    for &(value, times) in repeated {
        r.extend(std::iter::repeat_n(value, times));
    }
    r
}

fn mismatch(what: &str, lhs: usize, rhs: usize) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: lhs {lhs} ≠ rhs {rhs}"))
}

fn left_unit<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let (x, y) = (o[0], o[1]);
    m.carrier_size(x)?;
    let ty = m.carrier_size(y)?;
    let out = run_cases(&radices(&[x], &[(ty, x)]), allot, seed, tag, |p| {
        let (v, k) = (p[0], &p[1..]);
        mismatch(&format!("v={v} k={k:?}"), m.bind_at(x, y, m.unit_at(x, v), k), k[v])
    });
    Ok(CheckResult::from_outcome("left-unit", o, out))
}

fn right_unit<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let x = o[0];
    let tx = m.carrier_size(x)?;
    let units: Vec<usize> = (0..x).map(|v| m.unit_at(x, v)).collect();
    let out = run_cases(&[tx], allot, seed, tag, |p| {
        mismatch(&format!("t={}", p[0]), m.bind_at(x, x, p[0], &units), p[0])
    });
    Ok(CheckResult::from_outcome("right-unit", o, out))
}

fn associativity<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let (x, y, z) = (o[0], o[1], o[2]);
    let tx = m.carrier_size(x)?;
    let ty = m.carrier_size(y)?;
    let tz = m.carrier_size(z)?;
    let out = run_cases(&radices(&[tx], &[(ty, x), (tz, y)]), allot, seed, tag, |p| {
        let t = p[0];
        let (k, h) = p[1..].split_at(x);
        let lhs = m.bind_at(y, z, m.bind_at(x, y, t, k), h);
        let composite: Vec<usize> = k.iter().map(|&kv| m.bind_at(y, z, kv, h)).collect();
        let rhs = m.bind_at(x, z, t, &composite);
        mismatch(&format!("t={t} k={k:?} h={h:?}"), lhs, rhs)
    });
    Ok(CheckResult::from_outcome("associativity", o, out))
}

fn functor_identity<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let x = o[0];
    let tx = m.carrier_size(x)?;
    let id: Vec<usize> = (0..x).collect();
    let out = run_cases(&[tx], allot, seed, tag, |p| {
        mismatch(&format!("t={}", p[0]), m.fmap_at(x, x, &id, p[0]), p[0])
    });
    Ok(CheckResult::from_outcome("functor-identity", o, out))
}

fn functor_composition<M: Monad + ?Sized>(
    m: &M,
    o: &[usize],
    allot: u64,
    seed: u64,
    tag: &str,
) -> Result<CheckResult> {
    let (x, y, z) = (o[0], o[1], o[2]);
    let tx = m.carrier_size(x)?;
    m.carrier_size(y)?;
    m.carrier_size(z)?;
    let out = run_cases(&radices(&[tx], &[(y, x), (z, y)]), allot, seed, tag, |p| {
        let t = p[0];
        let (f, g) = p[1..].split_at(x);
        let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
        let lhs = m.fmap_at(x, z, &gf, t);
        let rhs = m.fmap_at(y, z, g, m.fmap_at(x, y, f, t));
        mismatch(&format!("t={t} f={f:?} g={g:?}"), lhs, rhs)
    });
    Ok(CheckResult::from_outcome("functor-composition", o, out))
}

fn strength_projection<M: Monad + ?Sized>(
    m: &M,
    o: &[usize],
    allot: u64,
    seed: u64,
    tag: &str,
) -> Result<CheckResult> {
    let y = o[0];
    let ty = m.carrier_size(y)?;
    // 1 × Y and Y share indices, so π₂ is the identity table.
    let proj: Vec<usize> = (0..y).collect();
    let out = run_cases(&[ty], allot, seed, tag, |p| {
        let t = p[0];
        mismatch(&format!("t={t}"), m.fmap_at(y, y, &proj, m.strength_at(1, y, 0, t)), t)
    });
    Ok(CheckResult::from_outcome("strength-unit-projection", o, out))
}

fn strength_associativity<M: Monad + ?Sized>(
    m: &M,
    o: &[usize],
    allot: u64,
    seed: u64,
    tag: &str,
) -> Result<CheckResult> {
    let (x, y, z) = (o[0], o[1], o[2]);
    let tz = m.carrier_size(z)?;
    m.carrier_size(y * z)?;
    m.carrier_size(x * y * z)?;
    let xyz = x * y * z;
    // ((x,y),z) and (x,(y,z)) have the same index, so α is the identity table.
    let alpha: Vec<usize> = (0..xyz).collect();
    let out = run_cases(&[x, y, tz], allot, seed, tag, |p| {
        let (v, w, t) = (p[0], p[1], p[2]);
        let lhs = m.fmap_at(xyz, xyz, &alpha, m.strength_at(x * y, z, v * y + w, t));
        let rhs = m.strength_at(x, y * z, v, m.strength_at(y, z, w, t));
        mismatch(&format!("x={v} y={w} t={t}"), lhs, rhs)
    });
    Ok(CheckResult::from_outcome("strength-associativity", o, out))
}

fn strength_unit<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let (x, y) = (o[0], o[1]);
    m.carrier_size(y)?;
    m.carrier_size(x * y)?;
    let out = run_cases(&[x, y], allot, seed, tag, |p| {
        let (v, w) = (p[0], p[1]);
        mismatch(
            &format!("x={v} y={w}"),
            m.strength_at(x, y, v, m.unit_at(y, w)),
            m.unit_at(x * y, v * y + w),
        )
    });
    Ok(CheckResult::from_outcome("strength-unit", o, out))
}

fn strength_bind<M: Monad + ?Sized>(m: &M, o: &[usize], allot: u64, seed: u64, tag: &str) -> Result<CheckResult> {
    let (x, y, z) = (o[0], o[1], o[2]);
    let ty = m.carrier_size(y)?;
    let tz = m.carrier_size(z)?;
    m.carrier_size(x * y)?;
    m.carrier_size(x * z)?;
    let out = run_cases(&radices(&[x, ty], &[(tz, y)]), allot, seed, tag, |p| {
        let (v, t, k) = (p[0], p[1], &p[2..]);
        let lhs = m.strength_at(x, z, v, m.bind_at(y, z, t, k));
        let lifted: Vec<usize> = (0..x * y).map(|i| m.strength_at(x, z, i / y, k[i % y])).collect();
        let rhs = m.bind_at(x * y, x * z, m.strength_at(x, y, v, t), &lifted);
        mismatch(&format!("x={v} t={t} k={k:?}"), lhs, rhs)
    });
    Ok(CheckResult::from_outcome("strength-bind", o, out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectionReport {
    pub fmap_surjective: bool,
    /// `(|Y|, e × id_Y surjective)` for each requested `Y`.
    pub products: Vec<(usize, bool)>,
}

impl SurjectionReport {
    pub fn passed(&self) -> bool {
        self.fmap_surjective && self.products.iter().all(|&(_, ok)| ok)
    }
}

/// Checks that `T e` and `e × id_Y` are surjective for a surjection `e`.
pub fn check_preserves_surjections<M: Monad + ?Sized>(m: &M, e: &FinFun, with: &[FinSet]) -> Result<SurjectionReport> {
    if !e.is_surjective() {
        return Err(Error::NotSurjective(e.to_string()));
    }
    let fmap_surjective = fmap(m, e)?.is_surjective();
    let products = with
        .iter()
        .map(|y| {
            let src = product(e.dom(), y);
            let dst = product(e.cod(), y);
            let map = src.map(&dst, e, &identity_fun(y)).expect("legs line up");
            (y.size(), map.is_surjective())
        })
        .collect();
    Ok(SurjectionReport {
        fmap_surjective,
        products,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{MonadKind, MonadSpec};

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(&[0, 1], 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(&[], 2).len(), 0);
        assert_eq!(tuples(&[3], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn powerset_kleisli_count() {
        let p = MonadSpec::new(MonadKind::Powerset);
        assert_eq!(kleisli_map_count(&p, 2, 2).unwrap(), 16);
        // every map X → T Y is visited by the left-unit check at (2, 2)
        let report = check_monad_laws(&p, &[FinSet::new(2)], 1_000_000, 0);
        let left = report.checks.iter().find(|c| c.name == "left-unit").unwrap();
        assert!(left.exhaustive);
        assert_eq!(left.cases, 2 * 16);
    }

    #[test]
    fn surjection_preservation() {
        let st = MonadSpec::new(MonadKind::State { states: 2 });
        let e = FinFun::from_table(2, 1, vec![0, 0]).unwrap();
        let r = check_preserves_surjections(&st, &e, &[FinSet::new(2)]).unwrap();
        assert!(r.passed());

        let p = MonadSpec::new(MonadKind::Powerset);
        let e = FinFun::from_table(3, 2, vec![0, 1, 1]).unwrap();
        let image = fmap(&p, &e).unwrap();
        let mut hit = [false; 4];
        for mask in 0..8 {
            hit[image.apply(mask)] = true;
        }
        assert!(hit.iter().all(|&h| h));
        assert!(check_preserves_surjections(&p, &e, &[]).unwrap().passed());

        let not_onto = FinFun::from_table(1, 2, vec![0]).unwrap();
        assert!(matches!(
            check_preserves_surjections(&p, &not_onto, &[]),
            Err(Error::NotSurjective(_))
        ));
    }
}

//! Pointwise image factorization of the interpretation morphism `m : S → T`.
//!
//! `R X` is computed as the least subset of `T X` that contains the unit
//! values and is closed under applying every generic effect to families of
//! already reached elements. Round `d` of the iteration reaches exactly the
//! values of terms of depth `≤ d`, so the rounds form the chain whose union
//! is the image of `m_X`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::term::{eval_unchecked, for_each_family};
use super::{Interpretation, Term};
use crate::error::{Error, Result};
use crate::finset::{FinFun, FinSet};
use crate::monad::Monad;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of enumerated terms.
    pub max_terms: usize,
    /// Maximum number of families examined in one saturation round.
    pub max_round_work: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 2_000_000,
            max_round_work: 10_000_000,
        }
    }
}

/// `R X` for one object: the reached elements of `T X` (the table of `n_X`),
/// a minimal-depth witness term for each, and the size after each round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectEntry {
    pub(crate) x: usize,
    pub(crate) carrier: usize,
    pub(crate) elements: Vec<usize>,
    pub(crate) index: HashMap<usize, usize>,
    pub(crate) witnesses: Vec<Arc<Term>>,
    pub(crate) layer_trace: Vec<usize>,
}

impl ObjectEntry {
    pub fn x(&self) -> usize {
        self.x
    }

    /// `|T X|`.
    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rx(&self) -> FinSet {
        FinSet::new(self.elements.len())
    }

    /// The inclusion `n_X : R X → T X`.
    pub fn n(&self) -> FinFun {
        FinFun::from_table_unchecked(self.elements.len(), self.carrier, self.elements.clone())
    }

    /// `n_X(r)`.
    pub fn element(&self, r: usize) -> usize {
        self.elements[r]
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// The `R X` element whose image is `t`, if any.
    pub fn lookup(&self, t: usize) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn witness(&self, r: usize) -> &Arc<Term> {
        &self.witnesses[r]
    }

    pub fn witnesses(&self) -> &[Arc<Term>] {
        &self.witnesses
    }

    /// `|Reach_d|` after each round `d`, starting with the unit values.
    pub fn layer_trace(&self) -> &[usize] {
        &self.layer_trace
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index = self.elements.iter().enumerate().map(|(r, &t)| (t, r)).collect();
    }
}

fn round_work(interp: &Interpretation, reached: usize) -> Option<usize> {
    interp.signature().ops().iter().try_fold(0usize, |acc, op| {
        let fams = reached.checked_pow(u32::try_from(op.arity().size()).ok()?)?;
        acc.checked_add(op.params().size().checked_mul(fams)?)
    })
}

/// One saturation step over `elements[..reached]`. Only families that use at
/// least one element at position `≥ fresh_from` are examined, unless
/// `fresh_from` is zero. `visit` receives the operation, parameter, family
/// and resulting value.
pub(crate) fn saturation_step(
    interp: &Interpretation,
    x: usize,
    elements: &[usize],
    fresh_from: usize,
    limits: &Limits,
    mut visit: impl FnMut(usize, usize, &[usize], usize),
) -> Result<()> {
    let m = interp.monad();
    let reached = elements.len();
    if round_work(interp, reached).is_none_or(|w| w > limits.max_round_work) {
        return Err(Error::too_large(
            format!("saturation round at |X|={x} with {reached} reached elements"),
            format!("more than {}", limits.max_round_work),
            limits.max_round_work,
        ));
    }
    for (i, op) in interp.signature().ops().iter().enumerate() {
        let b = op.arity().size();
        for a in op.params().elements() {
            let gen = interp.gen(i, a);
            for_each_family(reached, b, |fam| {
                if fresh_from > 0 && fam.iter().all(|&r| r < fresh_from) {
                    return;
                }
                let k: Vec<usize> = fam.iter().map(|&r| elements[r]).collect();
                visit(i, a, fam, m.bind_at(b, x, gen, &k));
            });
        }
    }
    Ok(())
}

/// Computes `R X = image(m_X)` by saturation to a fixpoint.
pub fn saturate(interp: &Interpretation, x: &FinSet, limits: &Limits) -> Result<ObjectEntry> {
    let m = interp.monad();
    let xs = x.size();
    let carrier = m.carrier_size(xs)?;
    for op in interp.signature().ops() {
        m.carrier_size(op.arity().size())?;
    }

    let mut entry = ObjectEntry {
        x: xs,
        carrier,
        elements: Vec::new(),
        index: HashMap::new(),
        witnesses: Vec::new(),
        layer_trace: Vec::new(),
    };
    for v in 0..xs {
        let t = m.unit_at(xs, v);
        if !entry.index.contains_key(&t) {
            entry.index.insert(t, entry.elements.len());
            entry.elements.push(t);
            entry.witnesses.push(Term::leaf(v));
        }
    }
    entry.layer_trace.push(entry.elements.len());

    // Elements at positions >= fresh_from were added by the previous round.
    let mut fresh_from = 0;
    loop {
        let snapshot = entry.elements.clone();
        let mut found: Vec<(usize, Arc<Term>)> = Vec::new();
        saturation_step(interp, xs, &snapshot, fresh_from, limits, |op, a, fam, t| {
            if !entry.index.contains_key(&t) {
                let witness = Term::node(op, a, fam.iter().map(|&r| entry.witnesses[r].clone()).collect());
                entry.index.insert(t, entry.elements.len() + found.len());
                found.push((t, witness));
            }
        })?;
        if found.is_empty() {
            break;
        }
        fresh_from = snapshot.len();
        for (t, w) in found {
            entry.elements.push(t);
            entry.witnesses.push(w);
        }
        entry.layer_trace.push(entry.elements.len());
    }
    Ok(entry)
}

/// Runs one full saturation round over the current elements and returns the
/// first value outside `R X` with a term producing it, if any.
pub(crate) fn closure_gap(
    interp: &Interpretation,
    entry: &ObjectEntry,
    limits: &Limits,
) -> Result<Option<(usize, Arc<Term>)>> {
    let mut gap = None;
    saturation_step(interp, entry.x, &entry.elements, 0, limits, |op, a, fam, t| {
        if gap.is_none() && !entry.index.contains_key(&t) {
            let w = Term::node(op, a, fam.iter().map(|&r| entry.witnesses[r].clone()).collect());
            gap = Some((t, w));
        }
    })?;
    Ok(gap)
}

/// The monad `T_ε`: saturated objects together with the structure induced on
/// them by corestricting `T` along `n`.
#[derive(Clone, Debug)]
pub struct FactoredMonad {
    interp: Interpretation,
    limits: Limits,
    objects: BTreeMap<usize, ObjectEntry>,
}

impl FactoredMonad {
    pub fn new(interp: Interpretation, limits: Limits) -> Self {
        FactoredMonad {
            interp,
            limits,
            objects: BTreeMap::new(),
        }
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Saturates `X` if it has not been saturated yet.
    pub fn saturate(&mut self, x: usize) -> Result<&ObjectEntry> {
        if !self.objects.contains_key(&x) {
            let entry = saturate(&self.interp, &FinSet::new(x), &self.limits)?;
            self.objects.insert(x, entry);
        }
        Ok(&self.objects[&x])
    }

    /// Saturates `X` and every result set `B` of the signature, which the
    /// Kleisli interpretations into `R` need.
    pub fn prepare(&mut self, x: usize) -> Result<()> {
        let arities: Vec<usize> = self.interp.signature().ops().iter().map(|op| op.arity().size()).collect();
        for b in arities {
            self.saturate(b)?;
        }
        self.saturate(x).map(drop)
    }

    pub fn entry(&self, x: usize) -> Result<&ObjectEntry> {
        self.objects.get(&x).ok_or(Error::NotSaturated(x))
    }

    pub(crate) fn entry_mut(&mut self, x: usize) -> Result<&mut ObjectEntry> {
        self.objects.get_mut(&x).ok_or(Error::NotSaturated(x))
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectEntry> {
        self.objects.values()
    }

    fn corestrict(&self, y: usize, t: usize, context: impl FnOnce() -> String) -> Result<usize> {
        let entry = self.entry(y)?;
        entry.lookup(t).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "{} produced {} ∉ R({y})",
                context(),
                self.interp.monad().decode(y, t)
            ))
        })
    }

    pub fn r_unit_at(&self, x: usize, v: usize) -> Result<usize> {
        let t = self.interp.monad().unit_at(x, v);
        self.corestrict(x, t, || format!("unit at x{v}"))
    }

    /// `r_bind(k)(r)` for `k : X → R Y` given as a table.
    pub fn r_bind_at(&self, x: usize, y: usize, r: usize, k: &[usize]) -> Result<usize> {
        let (ex, ey) = (self.entry(x)?, self.entry(y)?);
        let nk: Vec<usize> = k.iter().map(|&j| ey.element(j)).collect();
        let t = self.interp.monad().bind_at(x, y, ex.element(r), &nk);
        self.corestrict(y, t, || {
            let sig = self.interp.signature();
            let family: Vec<String> = k.iter().map(|&j| ey.witness(j).display(sig).to_string()).collect();
            format!(
                "binding {} along [{}]",
                ex.witness(r).display(sig),
                family.join(", ")
            )
        })
    }

    pub fn r_map_at(&self, x: usize, y: usize, f: &[usize], r: usize) -> Result<usize> {
        let k = f.iter().map(|&v| self.r_unit_at(y, v)).collect::<Result<Vec<_>>>()?;
        self.r_bind_at(x, y, r, &k)
    }

    /// Restricted strength `X × R Y → R(X × Y)`.
    pub fn r_strength_at(&self, x: usize, y: usize, v: usize, r: usize) -> Result<usize> {
        let ey = self.entry(y)?;
        let t = self.interp.monad().strength_at(x, y, v, ey.element(r));
        self.corestrict(x * y, t, || {
            format!("strength at (x{v}, {})", ey.witness(r).display(self.interp.signature()))
        })
    }

    /// `⟦op⟧_ε(a) ∈ R B`: the generic effect corestricted to `R B`.
    pub fn r_gen(&self, op: usize, a: usize) -> Result<usize> {
        let b = self.interp.signature().ops()[op].arity().size();
        let t = self.interp.gen(op, a);
        self.corestrict(b, t, || format!("generic effect {}[{a}]", self.interp.signature().ops()[op].name()))
    }

    /// `e_X(t)`, computed inside `R` from `r_unit`, `r_gen` and `r_bind`.
    pub fn eval_in_r(&self, t: &Term, x: usize) -> Result<usize> {
        match t {
            Term::Leaf(v) => self.r_unit_at(x, *v),
            Term::Node { op, param, children } => {
                let k = children
                    .iter()
                    .map(|c| self.eval_in_r(c, x))
                    .collect::<Result<Vec<_>>>()?;
                self.r_bind_at(children.len(), x, self.r_gen(*op, *param)?, &k)
            }
        }
    }

    /// `m_X(t)` computed directly in `T`.
    pub fn eval_in_t(&self, t: &Term, x: usize) -> usize {
        eval_unchecked(t, &self.interp, x)
    }

    pub fn r_unit(&self, x: usize) -> Result<FinFun> {
        let rx = self.entry(x)?.len();
        let table = (0..x).map(|v| self.r_unit_at(x, v)).collect::<Result<Vec<_>>>()?;
        Ok(FinFun::from_table_unchecked(x, rx, table))
    }

    /// `r_bind(k) : R X → R Y` for `k : X → R Y`.
    pub fn r_bind(&self, y: usize, k: &FinFun) -> Result<FinFun> {
        let x = k.dom().size();
        let (rx, ry) = (self.entry(x)?.len(), self.entry(y)?.len());
        if k.cod().size() != ry {
            return Err(Error::TypeMismatch(format!(
                "Kleisli map lands in a set of size {}, expected R({y}) of size {ry}",
                k.cod().size()
            )));
        }
        let table = (0..rx).map(|r| self.r_bind_at(x, y, r, k.table())).collect::<Result<Vec<_>>>()?;
        Ok(FinFun::from_table_unchecked(rx, ry, table))
    }

    pub fn r_map(&self, f: &FinFun) -> Result<FinFun> {
        let (x, y) = (f.dom().size(), f.cod().size());
        let (rx, ry) = (self.entry(x)?.len(), self.entry(y)?.len());
        let table = (0..rx).map(|r| self.r_map_at(x, y, f.table(), r)).collect::<Result<Vec<_>>>()?;
        Ok(FinFun::from_table_unchecked(rx, ry, table))
    }
}

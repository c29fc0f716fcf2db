//! Which programs a model identifies, how large `T_ε` is, and whether the
//! identifications survive a change of ambient monad.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::monad::MonadKind;
use crate::signature::{enumerate_terms, enumerate_with_values, FactoredMonad, Interpretation, Signature, Term};

/// Labels each key by the index of the first key equal to it, renumbered
/// densely in order of first occurrence.
fn first_occurrence_labels<K: Hash + Eq + Copy>(keys: &[K]) -> Vec<usize> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = seen.len();
            *seen.entry(*k).or_insert(next)
        })
        .collect()
}

/// Finds `(i, j)` in the same block of one labelling but not the other.
fn first_disagreement(a: &[usize], b: &[usize]) -> Option<(usize, usize)> {
    let mut rep_a: HashMap<usize, usize> = HashMap::new();
    let mut rep_b: HashMap<usize, usize> = HashMap::new();
    for i in 0..a.len() {
        let ra = *rep_a.entry(a[i]).or_insert(i);
        let rb = *rep_b.entry(b[i]).or_insert(i);
        if ra != rb {
            return Some((ra.min(rb), i));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Index of the shared value in `T X`.
    pub denotation: usize,
    pub value: String,
    /// Positions of the member terms in the enumeration.
    pub members: Vec<usize>,
}

/// Terms of depth `≤ d` over `X`, grouped by denotation.
#[derive(Clone, Debug)]
pub struct KernelPartition {
    pub x: usize,
    pub depth: usize,
    pub signature: Signature,
    pub terms: Vec<Arc<Term>>,
    pub blocks: Vec<Block>,
    labels: Vec<usize>,
}

impl KernelPartition {
    /// Block of each term, blocks numbered by first representative.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn same_partition(&self, other: &KernelPartition) -> bool {
        self.labels == other.labels
    }

    pub fn term(&self, i: usize) -> String {
        self.terms[i].display(&self.signature).to_string()
    }
}

pub fn kernel_partition(
    sig: &Signature,
    interp: &Interpretation,
    x: &FinSet,
    depth: usize,
    max_terms: usize,
) -> Result<KernelPartition> {
    let interp = interp.restrict(sig)?;
    let (terms, values) = enumerate_with_values(&interp, x, depth, max_terms)?;
    let labels = first_occurrence_labels(&values);
    let mut blocks: Vec<Block> = Vec::new();
    for (i, (&label, &v)) in labels.iter().zip(&values).enumerate() {
        if label == blocks.len() {
            blocks.push(Block {
                denotation: v,
                value: interp.monad().decode(x.size(), v).to_string(),
                members: Vec::new(),
            });
        }
        blocks[label].members.push(i);
    }
    Ok(KernelPartition {
        x: x.size(),
        depth,
        signature: sig.clone(),
        terms,
        blocks,
        labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectnessReport {
    pub x: usize,
    pub depth: usize,
    pub terms: usize,
    pub blocks_in_t: usize,
    pub blocks_in_r: usize,
    pub agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Compares the kernel of evaluation in `T` with the kernel of evaluation in
/// `R`, both computed from scratch on the terms of depth `≤ depth`.
pub fn correctness_check(f: &mut FactoredMonad, x: usize, depth: usize) -> Result<CorrectnessReport> {
    f.prepare(x)?;
    let f = &*f;
    let sig = f.interpretation().signature();
    let terms = enumerate_terms(sig, &FinSet::new(x), depth, f.limits().max_terms)?;
    let in_t: Vec<usize> = terms.iter().map(|t| f.eval_in_t(t, x)).collect();
    let mut in_r = Vec::with_capacity(terms.len());
    for t in &terms {
        match f.eval_in_r(t, x) {
            Ok(r) => in_r.push(r),
            Err(e @ Error::TheoremViolation(_)) => {
                return Ok(CorrectnessReport {
                    x,
                    depth,
                    terms: terms.len(),
                    blocks_in_t: 0,
                    blocks_in_r: 0,
                    agree: false,
                    counterexample: Some(format!("{} cannot be evaluated in R: {e}", t.display(sig))),
                });
            }
            Err(e) => return Err(e),
        }
    }
    let lt = first_occurrence_labels(&in_t);
    let lr = first_occurrence_labels(&in_r);
    let counterexample = first_disagreement(&lt, &lr).map(|(i, j)| {
        let (merged, split) = if lt[i] == lt[j] { ("T", "R") } else { ("R", "T") };
        format!(
            "{} and {} are identified in {merged} but not in {split}",
            terms[i].display(sig),
            terms[j].display(sig)
        )
    });
    Ok(CorrectnessReport {
        x,
        depth,
        terms: terms.len(),
        blocks_in_t: lt.iter().max().map_or(0, |m| m + 1),
        blocks_in_r: lr.iter().max().map_or(0, |m| m + 1),
        agree: counterexample.is_none(),
        counterexample,
    })
}

/// Closed forms for `|R X|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    Writer,
    Reader,
    State,
    Identity,
    NonemptyPowerset,
    Powerset,
    Exception,
}

impl Formula {
    pub const ALL: [Formula; 7] = [
        Formula::Writer,
        Formula::Reader,
        Formula::State,
        Formula::Identity,
        Formula::NonemptyPowerset,
        Formula::Powerset,
        Formula::Exception,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Formula::Writer => "writer",
            Formula::Reader => "reader",
            Formula::State => "state",
            Formula::Identity => "identity",
            Formula::NonemptyPowerset => "nonempty-powerset",
            Formula::Powerset => "powerset",
            Formula::Exception => "exception",
        }
    }

    pub fn parse(id: &str) -> Result<Formula> {
        Formula::ALL.into_iter().find(|f| f.id() == id).ok_or_else(|| Error::Unknown {
            kind: "formula",
            name: id.to_string(),
        })
    }

    pub fn expression(self) -> &'static str {
        match self {
            Formula::Writer => "|X|(1+|S|)",
            Formula::Reader => "|X|^|S|",
            Formula::State => "(|X||S|)^|S|",
            Formula::Identity => "|X|",
            Formula::NonemptyPowerset => "2^|X|-1",
            Formula::Powerset => "2^|X|",
            Formula::Exception => "|X|+|A|",
        }
    }

    /// Evaluates at `|X| = x` with `|S|` or `|A|` equal to `param`.
    pub fn eval(self, x: usize, param: usize) -> Option<u128> {
        let (x, p) = (x as u128, param as u128);
        let pow = |b: u128, e: u128| b.checked_pow(u32::try_from(e).ok()?);
        match self {
            Formula::Writer => x.checked_mul(1 + p),
            Formula::Reader => pow(x, p),
            Formula::State => pow(x.checked_mul(p)?, p),
            Formula::Identity => Some(x),
            Formula::NonemptyPowerset => pow(2, x).map(|n| n - 1),
            Formula::Powerset => pow(2, x),
            Formula::Exception => Some(x + p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub x: usize,
    pub size: usize,
    /// `None` when the closed form overflows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<u64>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularityProfile {
    pub formula: String,
    pub expression: String,
    pub param: usize,
    pub rows: Vec<ProfileRow>,
    /// What a match certifies.
    pub note: String,
}

impl ModularityProfile {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }
}

fn monad_param(kind: MonadKind) -> usize {
    kind.param().unwrap_or(0)
}

/// Tabulates `|R X|` for each size against a closed form.
pub fn modularity_profile(
    interp: &Interpretation,
    sig: &Signature,
    sizes: &[usize],
    formula: &str,
    limits: &crate::signature::Limits,
) -> Result<ModularityProfile> {
    let formula = Formula::parse(formula)?;
    let param = monad_param(interp.monad().kind());
    let mut f = FactoredMonad::new(interp.restrict(sig)?, *limits);
    let rows = sizes
        .iter()
        .map(|&x| {
            let size = f.saturate(x)?.len();
            let expected = formula.eval(x, param).and_then(|e| u64::try_from(e).ok());
            Ok(ProfileRow {
                x,
                size,
                expected,
                matches: expected == Some(size as u64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModularityProfile {
        formula: formula.id().to_string(),
        expression: formula.expression().to_string(),
        param,
        rows,
        note: "partial check: matching cardinalities, no isomorphism search".to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub x: usize,
    pub terms: usize,
    pub blocks_a: usize,
    pub blocks_b: usize,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguishing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub monad_a: String,
    pub monad_b: String,
    pub depth: usize,
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares the kernel partitions induced on the same terms by two
/// interpretations of `sig`.
pub fn stability_check(
    sig: &Signature,
    a: &Interpretation,
    b: &Interpretation,
    objects: &[usize],
    depth: usize,
    max_terms: usize,
) -> Result<StabilityReport> {
    for interp in [a, b] {
        if let Some(op) = sig.ops().iter().find(|op| interp.effect_by_name(op.name()).is_none()) {
            return Err(Error::Uncovered(op.name().to_string()));
        }
    }
    let (name_a, name_b) = (a.monad().kind().to_string(), b.monad().kind().to_string());
    let rows = objects
        .iter()
        .map(|&x| {
            let pa = kernel_partition(sig, a, &FinSet::new(x), depth, max_terms)?;
            let pb = kernel_partition(sig, b, &FinSet::new(x), depth, max_terms)?;
            let distinguishing = first_disagreement(pa.labels(), pb.labels()).map(|(i, j)| {
                let (split, merged) = if pa.labels()[i] == pa.labels()[j] {
                    (&name_b, &name_a)
                } else {
                    (&name_a, &name_b)
                };
                format!(
                    "{} vs {}: distinguished under {split}, identified under {merged}",
                    pa.term(j),
                    pa.term(i)
                )
            });
            Ok(StabilityRow {
                x,
                terms: pa.terms.len(),
                blocks_a: pa.block_count(),
                blocks_b: pb.block_count(),
                equal: distinguishing.is_none(),
                distinguishing,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport {
        monad_a: name_a,
        monad_b: name_b,
        depth,
        rows,
    })
}

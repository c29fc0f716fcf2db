//! Signatures, their interpretations as generic effects, free-monad terms,
//! and the factored monad `T_ε`.

mod factored;
mod term;
mod theorem;

pub use factored::{saturate, FactoredMonad, Limits, ObjectEntry};
pub use term::{enumerate_terms, enumerate_with_values, eval_term, Term};
pub use theorem::{check_lemma2_stabilization, verify_theorem1, CheckOptions, Lemma2Report, TheoremReport};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{FinFun, FinSet};
use crate::monad::{Monad, MonadSpec};

/// An operation `op : A → B`: it takes a parameter in `A` and continues with
/// one of `|B|` branches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operation {
    name: String,
    params: FinSet,
    arity: FinSet,
}

impl Operation {
    pub fn new(name: impl Into<String>, params: FinSet, arity: FinSet) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidSignature("operation name is empty".into()));
        }
        Ok(Operation { name, params, arity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The parameter set `A`.
    pub fn params(&self) -> &FinSet {
        &self.params
    }

    /// The result set `B`.
    pub fn arity(&self) -> &FinSet {
        &self.arity
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} → {}", self.name, self.params.size(), self.arity.size())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<Operation>,
}

impl Signature {
    pub fn new(ops: Vec<Operation>) -> Result<Self> {
        let mut seen = HashSet::new();
        for op in &ops {
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate operation `{}`", op.name)));
            }
        }
        Ok(Signature { ops })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.ops.iter().map(|op| op.name.as_str()).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{op}")?;
        }
        f.write_str("}")
    }
}

/// Generic effects `gen_op : A → T B` for every operation of a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    monad: MonadSpec,
    signature: Signature,
    effects: Vec<FinFun>,
}

impl Interpretation {
    pub fn new(monad: MonadSpec, signature: Signature, effects: Vec<FinFun>) -> Result<Self> {
        if effects.len() != signature.len() {
            return Err(Error::InvalidSignature(format!(
                "{} generic effects for {} operations",
                effects.len(),
                signature.len()
            )));
        }
        for (op, gen) in signature.ops.iter().zip(&effects) {
            let tb = monad.carrier_size(op.arity.size())?;
            if gen.dom().size() != op.params.size() || gen.cod().size() != tb {
                return Err(Error::TypeMismatch(format!(
                    "generic effect of `{}` is {} → {}, expected {} → {tb}",
                    op.name,
                    gen.dom().size(),
                    gen.cod().size(),
                    op.params.size()
                )));
            }
        }
        Ok(Interpretation {
            monad,
            signature,
            effects,
        })
    }

    pub fn monad(&self) -> &MonadSpec {
        &self.monad
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn effect(&self, op: usize) -> &FinFun {
        &self.effects[op]
    }

    pub fn effect_by_name(&self, name: &str) -> Option<&FinFun> {
        self.signature.position(name).map(|i| &self.effects[i])
    }

    /// `gen_op(a) ∈ T B`.
    pub(crate) fn gen(&self, op: usize, a: usize) -> usize {
        self.effects[op].apply(a)
    }

    /// The interpretation of a subsignature, matching operations by name.
    pub fn restrict(&self, sig: &Signature) -> Result<Interpretation> {
        let mut effects = Vec::with_capacity(sig.len());
        for op in &sig.ops {
            let i = self.signature.position(&op.name).ok_or_else(|| Error::Uncovered(op.name.clone()))?;
            let ours = &self.signature.ops[i];
            if !ours.params.same_as(&op.params) || !ours.arity.same_as(&op.arity) {
                return Err(Error::TypeMismatch(format!(
                    "`{}` is interpreted as {ours}, requested {op}",
                    op.name
                )));
            }
            effects.push(self.effects[i].clone());
        }
        Interpretation::new(self.monad.clone(), sig.clone(), effects)
    }

    pub fn covers(&self, sig: &Signature) -> bool {
        self.restrict(sig).is_ok()
    }
}

/// Plain-data view of an operation, used by the config and report layers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationShape {
    pub name: String,
    pub params: usize,
    pub arity: usize,
}

impl From<&Operation> for OperationShape {
    fn from(op: &Operation) -> Self {
        OperationShape {
            name: op.name.clone(),
            params: op.params.size(),
            arity: op.arity.size(),
        }
    }
}

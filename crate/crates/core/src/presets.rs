//! Built-in generic effects and the preset (monad, signature) pairs.

use crate::error::{Error, Result};
use crate::finset::{FinFun, FinSet};
use crate::monad::{Monad, MonadKind, MonadSpec, Value};
use crate::signature::{Interpretation, Operation, Signature};

/// Names of the generic effects [`builtin_effect`] knows.
pub const BUILTIN_EFFECTS: &[&str] = &["read", "write", "or", "fail", "abort", "raise", "choose-left"];

/// The expected `(|A|, |B|)` of a built-in operation in `monad`.
pub fn builtin_shape(name: &str, monad: MonadKind) -> Result<(usize, usize)> {
    use MonadKind::*;
    let shape = match (name, monad) {
        ("read", State { states } | StateExc { states } | Reader { states }) => (1, states),
        ("write", State { states } | StateExc { states }) => (states, 1),
        ("or", Powerset) => (1, 2),
        ("choose-left", _) => (1, 2),
        ("fail", Powerset | Exception { .. } | StateExc { .. }) => (1, 0),
        ("abort", Continuation { answers }) => (answers, 0),
        ("raise", Exception { errors }) => (errors, 0),
        _ => {
            return Err(Error::Unknown {
                kind: "built-in effect",
                name: format!("{name} for {monad}"),
            })
        }
    };
    Ok(shape)
}

/// The generic effect `gen : A → T B` of a built-in operation.
pub fn builtin_effect(name: &str, monad: &MonadSpec) -> Result<FinFun> {
    use MonadKind::*;
    let (a, b) = builtin_shape(name, monad.kind())?;
    let tb = monad.carrier_size(b)?;
    let value = |p: usize| -> Result<usize> {
        let v = match (name, monad.kind()) {
            ("read", State { states }) => Value::State((0..states).map(|s| (s, s)).collect()),
            ("read", StateExc { states }) => Value::StateExc((0..states).map(|s| Some((s, s))).collect()),
            ("read", Reader { states }) => Value::Reader((0..states).collect()),
            ("write", State { states }) => Value::State(vec![(0, p); states]),
            ("write", StateExc { states }) => Value::StateExc(vec![Some((0, p)); states]),
            ("or", Powerset) => Value::Set(vec![0, 1]),
            ("choose-left", _) => return Ok(monad.unit_at(2, 0)),
            ("fail", Powerset) => Value::Set(vec![]),
            ("fail", Exception { .. }) => Value::Raise(0),
            ("fail", StateExc { states }) => Value::StateExc(vec![None; states]),
            ("abort", Continuation { .. }) => Value::Cont(vec![p]),
            ("raise", Exception { .. }) => Value::Raise(p),
            _ => unreachable!("shape lookup accepted {name}"),
        };
        monad.encode(b, &v)
    };
    let table = (0..a).map(value).collect::<Result<Vec<_>>>()?;
    FinFun::from_table(a, tb, table)
}

/// Names of the built-in presets, in listing order.
pub const PRESETS: &[&str] = &[
    "state-read-write",
    "state-write",
    "state-read",
    "powerset-or",
    "powerset-or-fail",
    "cont-abort",
    "stateexc-write",
    "empty-signature",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub monad: &'static str,
    pub ops: &'static [&'static str],
    /// Closed form expected for `|R X|`.
    pub formula: &'static str,
    pub description: &'static str,
}

pub fn preset_info(name: &str) -> Result<PresetInfo> {
    let info = match name {
        "state-read-write" => PresetInfo {
            name: "state-read-write",
            monad: "state",
            ops: &["read", "write"],
            formula: "state",
            description: "global state, both operations: recovers all of T",
        },
        "state-write" => PresetInfo {
            name: "state-write",
            monad: "state",
            ops: &["write"],
            formula: "writer",
            description: "global state, writes only: (1+S) × X",
        },
        "state-read" => PresetInfo {
            name: "state-read",
            monad: "state",
            ops: &["read"],
            formula: "reader",
            description: "global state, reads only: the reader monad X^S",
        },
        "powerset-or" => PresetInfo {
            name: "powerset-or",
            monad: "powerset",
            ops: &["or"],
            formula: "nonempty-powerset",
            description: "binary choice: nonempty subsets",
        },
        "powerset-or-fail" => PresetInfo {
            name: "powerset-or-fail",
            monad: "powerset",
            ops: &["or", "fail"],
            formula: "powerset",
            description: "choice and failure: all subsets",
        },
        "cont-abort" => PresetInfo {
            name: "cont-abort",
            monad: "continuation",
            ops: &["abort"],
            formula: "exception",
            description: "continuations with abort: the exception monad X + A",
        },
        "stateexc-write" => PresetInfo {
            name: "stateexc-write",
            monad: "state_exc",
            ops: &["write"],
            formula: "writer",
            description: "state with exceptions, writes only: still (1+S) × X",
        },
        "empty-signature" => PresetInfo {
            name: "empty-signature",
            monad: "state",
            ops: &[],
            formula: "identity",
            description: "no operations: the identity monad",
        },
        other => {
            return Err(Error::Unknown {
                kind: "preset",
                name: other.to_string(),
            })
        }
    };
    Ok(info)
}

/// Builds the interpretation of a list of built-in operations in `monad`.
pub fn builtin_interpretation(monad: MonadSpec, ops: &[&str]) -> Result<Interpretation> {
    let mut operations = Vec::new();
    let mut effects = Vec::new();
    for &name in ops {
        let (a, b) = builtin_shape(name, monad.kind())?;
        operations.push(Operation::new(name, FinSet::new(a), FinSet::new(b))?);
        effects.push(builtin_effect(name, &monad)?);
    }
    Interpretation::new(monad, Signature::new(operations)?, effects)
}

/// Instantiates a preset with parameter size `param` (|S| or |A|).
pub fn preset(name: &str, param: usize, max_carrier: usize) -> Result<Interpretation> {
    let info = preset_info(name)?;
    let kind = MonadKind::from_id(info.monad, param)?;
    builtin_interpretation(MonadSpec::new(kind).with_max_carrier(max_carrier), info.ops)
}

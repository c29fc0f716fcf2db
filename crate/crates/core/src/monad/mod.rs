//! Concrete strong monads on finite sets.
//!
//! Every carrier `T X` is a [`FinSet`] whose elements are encoded with the
//! fixed schemes of [`crate::finset`]:
//!
//! | kind            | carrier             |
//! |-----------------|---------------------|
//! | identity        | `X`                 |
//! | exception(E)    | `X + E`             |
//! | reader(S)       | `X^S`               |
//! | state(S)        | `(X × S)^S`         |
//! | powerset        | bitmasks over `X`   |
//! | continuation(A) | `A^(A^X)`           |
//! | state_exc(S)    | `((X × S) + 1)^S`   |
//!
//! The [`Monad`] trait works on sizes and raw indices; the free functions
//! ([`carrier`], [`unit`](fn@unit), [`kleisli_extend`], [`fmap`], [`strength`]) lift
//! that to [`FinSet`]/[`FinFun`] with type checks.

mod laws;
mod value;

pub use laws::{check_monad_laws, check_preserves_surjections, kleisli_map_count, LawReport, SurjectionReport};
pub use value::Value;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{checked_power, decode_digits, digit, encode_digits, FinFun, FinSet, DEFAULT_MAX_CARRIER};

/// Raw monad structure on sizes and element indices.
///
/// `unit_at` and `bind_at` assume their arguments are in range and that the
/// carriers involved were checked with `carrier_size`.
pub trait Monad {
    fn name(&self) -> String;

    fn carrier_size(&self, x: usize) -> Result<usize>;

    /// `η_X(v)`.
    fn unit_at(&self, x: usize, v: usize) -> usize;

    /// `k*(t)` for `t ∈ T X` and `k : X → T Y` given as a table.
    fn bind_at(&self, x: usize, y: usize, t: usize, k: &[usize]) -> usize;

    fn fmap_at(&self, x: usize, y: usize, f: &[usize], t: usize) -> usize {
        let k: Vec<usize> = f.iter().map(|&v| self.unit_at(y, v)).collect();
        self.bind_at(x, y, t, &k)
    }

    /// Canonical strength `st(v, t) = T(w ↦ (v, w))(t)` landing in `T(X × Y)`.
    fn strength_at(&self, x: usize, y: usize, v: usize, t: usize) -> usize {
        let pairs: Vec<usize> = (0..y).map(|w| v * y + w).collect();
        self.fmap_at(y, x * y, &pairs, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MonadKind {
    Identity,
    Exception { errors: usize },
    Reader { states: usize },
    State { states: usize },
    Powerset,
    Continuation { answers: usize },
    StateExc { states: usize },
}

impl MonadKind {
    pub fn id(&self) -> &'static str {
        match self {
            MonadKind::Identity => "identity",
            MonadKind::Exception { .. } => "exception",
            MonadKind::Reader { .. } => "reader",
            MonadKind::State { .. } => "state",
            MonadKind::Powerset => "powerset",
            MonadKind::Continuation { .. } => "continuation",
            MonadKind::StateExc { .. } => "state_exc",
        }
    }

    /// Builds a kind from its id and its parameter size (ignored by the
    /// parameterless kinds).
    pub fn from_id(id: &str, param: usize) -> Result<Self> {
        Ok(match id {
            "identity" => MonadKind::Identity,
            "exception" => MonadKind::Exception { errors: param },
            "reader" => MonadKind::Reader { states: param },
            "state" => MonadKind::State { states: param },
            "powerset" => MonadKind::Powerset,
            "continuation" => MonadKind::Continuation { answers: param },
            "state_exc" => MonadKind::StateExc { states: param },
            other => {
                return Err(Error::Unknown {
                    kind: "monad kind",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn param(&self) -> Option<usize> {
        match *self {
            MonadKind::Identity | MonadKind::Powerset => None,
            MonadKind::Exception { errors } => Some(errors),
            MonadKind::Reader { states } | MonadKind::State { states } | MonadKind::StateExc { states } => {
                Some(states)
            }
            MonadKind::Continuation { answers } => Some(answers),
        }
    }

    /// One representative of every kind with the given parameter.
    pub fn catalog(param: usize) -> Vec<MonadKind> {
        vec![
            MonadKind::Identity,
            MonadKind::Exception { errors: param },
            MonadKind::Reader { states: param },
            MonadKind::State { states: param },
            MonadKind::Powerset,
            MonadKind::Continuation { answers: param },
            MonadKind::StateExc { states: param },
        ]
    }
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(p) => write!(f, "{}({p})", self.id()),
            None => f.write_str(self.id()),
        }
    }
}

/// A catalog monad together with the carrier size cap it enforces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonadSpec {
    kind: MonadKind,
    max_carrier: usize,
}

impl MonadSpec {
    pub fn new(kind: MonadKind) -> Self {
        MonadSpec {
            kind,
            max_carrier: DEFAULT_MAX_CARRIER,
        }
    }

    pub fn with_max_carrier(mut self, cap: usize) -> Self {
        self.max_carrier = cap;
        self
    }

    pub fn kind(&self) -> MonadKind {
        self.kind
    }

    pub fn max_carrier(&self) -> usize {
        self.max_carrier
    }

    fn too_large(&self, x: usize) -> Error {
        Error::too_large(format!("carrier of {} at |X|={x}", self.kind), format!("more than {}", self.max_carrier), self.max_carrier)
    }

    fn pow(&self, base: usize, exp: usize, x: usize) -> Result<usize> {
        checked_power(base, exp, self.max_carrier).ok_or_else(|| self.too_large(x))
    }

    fn capped(&self, n: Option<usize>, x: usize) -> Result<usize> {
        n.filter(|&n| n <= self.max_carrier).ok_or_else(|| self.too_large(x))
    }

    /// Decodes an element of `T X`.
    pub fn decode(&self, x: usize, t: usize) -> Value {
        match self.kind {
            MonadKind::Identity => Value::Pure(t),
            MonadKind::Exception { .. } => {
                if t < x {
                    Value::Pure(t)
                } else {
                    Value::Raise(t - x)
                }
            }
            MonadKind::Reader { states } => Value::Reader(decode_digits(t, x, states)),
            MonadKind::State { states } => Value::State(
                decode_digits(t, x * states, states)
                    .into_iter()
                    .map(|p| (p / states, p % states))
                    .collect(),
            ),
            MonadKind::Powerset => Value::Set((0..x).filter(|&i| t >> i & 1 == 1).collect()),
            MonadKind::Continuation { answers } => {
                let inner = answers.pow(x as u32);
                Value::Cont(decode_digits(t, answers, inner))
            }
            MonadKind::StateExc { states } => {
                let err = x * states;
                Value::StateExc(
                    decode_digits(t, err + 1, states)
                        .into_iter()
                        .map(|p| (p != err).then(|| (p / states, p % states)))
                        .collect(),
                )
            }
        }
    }

    /// Encodes a value of `T X`, checking it against the carrier shape.
    pub fn encode(&self, x: usize, v: &Value) -> Result<usize> {
        self.carrier_size(x)?;
        let bad = || Error::TypeMismatch(format!("{v} is not an element of {} at |X|={x}", self.kind));
        let in_x = |i: usize| if i < x { Ok(i) } else { Err(bad()) };
        match (self.kind, v) {
            (MonadKind::Identity, Value::Pure(i)) => in_x(*i),
            (MonadKind::Exception { .. }, Value::Pure(i)) => in_x(*i),
            (MonadKind::Exception { errors }, Value::Raise(e)) if *e < errors => Ok(x + e),
            (MonadKind::Reader { states }, Value::Reader(g)) if g.len() == states => {
                g.iter().try_for_each(|&i| in_x(i).map(drop))?;
                Ok(encode_digits(g, x))
            }
            (MonadKind::State { states }, Value::State(g)) if g.len() == states => {
                let digits = g
                    .iter()
                    .map(|&(v, s)| if v < x && s < states { Ok(v * states + s) } else { Err(bad()) })
                    .collect::<Result<Vec<_>>>()?;
                Ok(encode_digits(&digits, x * states))
            }
            (MonadKind::Powerset, Value::Set(items)) => items.iter().try_fold(0usize, |acc, &i| Ok(acc | 1 << in_x(i)?)),
            (MonadKind::Continuation { answers }, Value::Cont(table)) if table.len() == answers.pow(x as u32) => {
                if table.iter().any(|&a| a >= answers) {
                    return Err(bad());
                }
                Ok(encode_digits(table, answers))
            }
            (MonadKind::StateExc { states }, Value::StateExc(g)) if g.len() == states => {
                let err = x * states;
                let digits = g
                    .iter()
                    .map(|cell| match *cell {
                        None => Ok(err),
                        Some((v, s)) if v < x && s < states => Ok(v * states + s),
                        Some(_) => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(encode_digits(&digits, err + 1))
            }
            _ => Err(bad()),
        }
    }
}

impl Monad for MonadSpec {
    fn name(&self) -> String {
        self.kind.to_string()
    }

    fn carrier_size(&self, x: usize) -> Result<usize> {
        match self.kind {
            MonadKind::Identity => self.capped(Some(x), x),
            MonadKind::Exception { errors } => self.capped(x.checked_add(errors), x),
            MonadKind::Reader { states } => self.pow(x, states, x),
            MonadKind::State { states } => {
                let pairs = x.checked_mul(states).ok_or_else(|| self.too_large(x))?;
                self.pow(pairs, states, x)
            }
            MonadKind::Powerset => self.pow(2, x, x),
            MonadKind::Continuation { answers } => {
                let inner = checked_power(answers, x, usize::MAX).ok_or_else(|| self.too_large(x))?;
                self.pow(answers, inner, x)
            }
            MonadKind::StateExc { states } => {
                let cells = x
                    .checked_mul(states)
                    .and_then(|p| p.checked_add(1))
                    .ok_or_else(|| self.too_large(x))?;
                self.pow(cells, states, x)
            }
        }
    }

    fn unit_at(&self, x: usize, v: usize) -> usize {
        match self.kind {
            MonadKind::Identity | MonadKind::Exception { .. } => v,
            MonadKind::Reader { states } => encode_digits(&vec![v; states], x),
            MonadKind::State { states } => {
                let digits: Vec<usize> = (0..states).map(|s| v * states + s).collect();
                encode_digits(&digits, x * states)
            }
            MonadKind::Powerset => 1 << v,
            MonadKind::Continuation { answers } => {
                let inner = answers.pow(x as u32);
                let digits: Vec<usize> = (0..inner).map(|h| digit(h, answers, v)).collect();
                encode_digits(&digits, answers)
            }
            MonadKind::StateExc { states } => {
                let digits: Vec<usize> = (0..states).map(|s| v * states + s).collect();
                encode_digits(&digits, x * states + 1)
            }
        }
    }

    fn bind_at(&self, x: usize, y: usize, t: usize, k: &[usize]) -> usize {
        debug_assert_eq!(k.len(), x);
        match self.kind {
            MonadKind::Identity => k[t],
            MonadKind::Exception { .. } => {
                if t < x {
                    k[t]
                } else {
                    y + (t - x)
                }
            }
            MonadKind::Reader { states } => {
                let digits: Vec<usize> = decode_digits(t, x, states)
                    .into_iter()
                    .enumerate()
                    .map(|(s, v)| digit(k[v], y, s))
                    .collect();
                encode_digits(&digits, y)
            }
            MonadKind::State { states } => {
                let digits: Vec<usize> = decode_digits(t, x * states, states)
                    .into_iter()
                    .map(|p| digit(k[p / states], y * states, p % states))
                    .collect();
                encode_digits(&digits, y * states)
            }
            MonadKind::Powerset => (0..x).filter(|&i| t >> i & 1 == 1).fold(0, |acc, i| acc | k[i]),
            MonadKind::Continuation { answers } => {
                // (k* t)(h) = t(λv. k(v)(h))
                let inner_y = answers.pow(y as u32);
                let inner_x = answers.pow(x as u32);
                let t_table = decode_digits(t, answers, inner_x);
                let k_tables: Vec<Vec<usize>> = k.iter().map(|&c| decode_digits(c, answers, inner_y)).collect();
                let digits: Vec<usize> = (0..inner_y)
                    .map(|h| {
                        let g: Vec<usize> = k_tables.iter().map(|kt| kt[h]).collect();
                        t_table[encode_digits(&g, answers)]
                    })
                    .collect();
                encode_digits(&digits, answers)
            }
            MonadKind::StateExc { states } => {
                let err_x = x * states;
                let err_y = y * states;
                let digits: Vec<usize> = decode_digits(t, err_x + 1, states)
                    .into_iter()
                    .map(|p| {
                        if p == err_x {
                            err_y
                        } else {
                            digit(k[p / states], err_y + 1, p % states)
                        }
                    })
                    .collect();
                encode_digits(&digits, err_y + 1)
            }
        }
    }
}

pub fn carrier<M: Monad + ?Sized>(m: &M, x: &FinSet) -> Result<FinSet> {
    m.carrier_size(x.size()).map(FinSet::new)
}

pub fn unit<M: Monad + ?Sized>(m: &M, x: &FinSet) -> Result<FinFun> {
    let tx = m.carrier_size(x.size())?;
    let table = x.elements().map(|v| m.unit_at(x.size(), v)).collect();
    Ok(FinFun::new(x.clone(), FinSet::new(tx), table).expect("unit lands in the carrier"))
}

/// Extends `k : X → T Y` to `T X → T Y`.
pub fn kleisli_extend<M: Monad + ?Sized>(m: &M, y: &FinSet, k: &FinFun) -> Result<FinFun> {
    let x = k.dom().size();
    let tx = m.carrier_size(x)?;
    let ty = m.carrier_size(y.size())?;
    if k.cod().size() != ty {
        return Err(Error::TypeMismatch(format!(
            "Kleisli map lands in a set of size {}, expected T Y of size {ty}",
            k.cod().size()
        )));
    }
    let table = (0..tx).map(|t| m.bind_at(x, y.size(), t, k.table())).collect();
    Ok(FinFun::from_table_unchecked(tx, ty, table))
}

pub fn fmap<M: Monad + ?Sized>(m: &M, f: &FinFun) -> Result<FinFun> {
    let (x, y) = (f.dom().size(), f.cod().size());
    let tx = m.carrier_size(x)?;
    let ty = m.carrier_size(y)?;
    let table = (0..tx).map(|t| m.fmap_at(x, y, f.table(), t)).collect();
    Ok(FinFun::from_table_unchecked(tx, ty, table))
}

/// `st : X × T Y → T(X × Y)`, indexed by `v·|T Y| + t` on the domain.
pub fn strength<M: Monad + ?Sized>(m: &M, x: &FinSet, y: &FinSet) -> Result<FinFun> {
    let ty = m.carrier_size(y.size())?;
    let xy = x.size() * y.size();
    let txy = m.carrier_size(xy)?;
    let mut table = Vec::with_capacity(x.size() * ty);
    for v in x.elements() {
        for t in 0..ty {
            table.push(m.strength_at(x.size(), y.size(), v, t));
        }
    }
    Ok(FinFun::from_table_unchecked(x.size() * ty, txy, table))
}

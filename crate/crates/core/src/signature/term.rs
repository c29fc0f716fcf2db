//! Elements of the free monad on a signature, as finite trees.

use std::fmt;
use std::sync::Arc;

use super::{Interpretation, Signature};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::monad::Monad;

/// A term over `X`: a leaf `x`, or an operation applied to a parameter and
/// one subterm per element of its result set.
///
/// Operations are referred to by their position in the signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Leaf(usize),
    Node {
        op: usize,
        param: usize,
        children: Vec<Arc<Term>>,
    },
}

impl Term {
    pub fn leaf(x: usize) -> Arc<Term> {
        Arc::new(Term::Leaf(x))
    }

    pub fn node(op: usize, param: usize, children: Vec<Arc<Term>>) -> Arc<Term> {
        Arc::new(Term::Node { op, param, children })
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Node { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// Replaces every leaf `x` by `sub[x]`.
    pub fn subst(self: &Arc<Self>, sub: &[Arc<Term>]) -> Arc<Term> {
        match self.as_ref() {
            Term::Leaf(x) => sub[*x].clone(),
            Term::Node { op, param, children } => {
                Term::node(*op, *param, children.iter().map(|c| c.subst(sub)).collect())
            }
        }
    }

    pub fn check(&self, sig: &Signature, x: usize) -> Result<()> {
        match self {
            Term::Leaf(v) if *v < x => Ok(()),
            Term::Leaf(v) => Err(Error::IllTypedTerm(format!("leaf {v} outside X of size {x}"))),
            Term::Node { op, param, children } => {
                let o = sig
                    .ops()
                    .get(*op)
                    .ok_or_else(|| Error::IllTypedTerm(format!("operation #{op} not in the signature")))?;
                if *param >= o.params().size() {
                    return Err(Error::IllTypedTerm(format!("parameter {param} out of range for {o}")));
                }
                if children.len() != o.arity().size() {
                    return Err(Error::IllTypedTerm(format!(
                        "{} children for {o}",
                        children.len()
                    )));
                }
                children.iter().try_for_each(|c| c.check(sig, x))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        TermDisplay { term: self, sig }
    }
}

struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Leaf(x) => write!(f, "x{x}"),
            Term::Node { op, param, children } => {
                let name = self.sig.ops().get(*op).map_or("?", |o| o.name());
                write!(f, "{name}[{param}]")?;
                if !children.is_empty() {
                    f.write_str("(")?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", c.display(self.sig))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Calls `visit` on every length-`len` family over `0..n` in lexicographic
/// order (first position most significant).
pub(crate) fn for_each_family(n: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    if len > 0 && n == 0 {
        return;
    }
    let mut family = vec![0usize; len];
    loop {
        visit(&family);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            family[i] += 1;
            if family[i] < n {
                break;
            }
            family[i] = 0;
        }
    }
}

fn layer_count(sig: &Signature, x: usize, prev: usize) -> Option<usize> {
    sig.ops().iter().try_fold(x, |acc, op| {
        let fams = prev.checked_pow(u32::try_from(op.arity().size()).ok()?)?;
        acc.checked_add(op.params().size().checked_mul(fams)?)
    })
}

/// All terms over `X` of depth at most `depth`: the leaves, then nodes
/// ordered by operation, parameter and children (lexicographically by their
/// position in the previous layer).
pub fn enumerate_terms(sig: &Signature, x: &FinSet, depth: usize, max_terms: usize) -> Result<Vec<Arc<Term>>> {
    let x = x.size();
    let leaves: Vec<Arc<Term>> = (0..x).map(Term::leaf).collect();
    if leaves.len() > max_terms {
        return Err(Error::too_large("term enumeration", leaves.len(), max_terms));
    }
    let mut prev = leaves.clone();
    for _ in 0..depth {
        let count = layer_count(sig, x, prev.len())
            .filter(|&c| c <= max_terms)
            .ok_or_else(|| Error::too_large("term enumeration", format!("more than {max_terms}"), max_terms))?;
        let mut next = Vec::with_capacity(count);
        next.extend(leaves.iter().cloned());
        for (i, op) in sig.ops().iter().enumerate() {
            for a in op.params().elements() {
                for_each_family(prev.len(), op.arity().size(), |fam| {
                    next.push(Term::node(i, a, fam.iter().map(|&c| prev[c].clone()).collect()));
                });
            }
        }
        prev = next;
    }
    Ok(prev)
}

/// [`enumerate_terms`] together with each term's value in `T X`, computed
/// layer by layer from the children's values.
pub fn enumerate_with_values(
    interp: &Interpretation,
    x: &FinSet,
    depth: usize,
    max_terms: usize,
) -> Result<(Vec<Arc<Term>>, Vec<usize>)> {
    let m = interp.monad();
    let xs = x.size();
    m.carrier_size(xs)?;
    for op in interp.signature().ops() {
        m.carrier_size(op.arity().size())?;
    }
    let sig = interp.signature();
    let leaves: Vec<Arc<Term>> = (0..xs).map(Term::leaf).collect();
    let leaf_values: Vec<usize> = (0..xs).map(|v| m.unit_at(xs, v)).collect();
    if leaves.len() > max_terms {
        return Err(Error::too_large("term enumeration", leaves.len(), max_terms));
    }
    let (mut terms, mut values) = (leaves.clone(), leaf_values.clone());
    for _ in 0..depth {
        let count = layer_count(sig, xs, terms.len())
            .filter(|&c| c <= max_terms)
            .ok_or_else(|| Error::too_large("term enumeration", format!("more than {max_terms}"), max_terms))?;
        let mut next = Vec::with_capacity(count);
        let mut next_values = Vec::with_capacity(count);
        next.extend(leaves.iter().cloned());
        next_values.extend(leaf_values.iter().copied());
        for (i, op) in sig.ops().iter().enumerate() {
            let b = op.arity().size();
            for a in op.params().elements() {
                let gen = interp.gen(i, a);
                for_each_family(terms.len(), b, |fam| {
                    let k: Vec<usize> = fam.iter().map(|&c| values[c]).collect();
                    next_values.push(m.bind_at(b, xs, gen, &k));
                    next.push(Term::node(i, a, fam.iter().map(|&c| terms[c].clone()).collect()));
                });
            }
        }
        terms = next;
        values = next_values;
    }
    Ok((terms, values))
}

/// The interpretation morphism at `X`: leaves go to the unit, and
/// `op[a](t_b)_b` goes to the Kleisli extension of `b ↦ ⟦t_b⟧` applied to
/// `gen_op(a)`.
pub fn eval_term(t: &Term, interp: &Interpretation, x: &FinSet) -> Result<usize> {
    t.check(interp.signature(), x.size())?;
    let m = interp.monad();
    m.carrier_size(x.size())?;
    for op in interp.signature().ops() {
        m.carrier_size(op.arity().size())?;
    }
    Ok(eval_unchecked(t, interp, x.size()))
}

pub(crate) fn eval_unchecked(t: &Term, interp: &Interpretation, x: usize) -> usize {
    let m = interp.monad();
    match t {
        Term::Leaf(v) => m.unit_at(x, *v),
        Term::Node { op, param, children } => {
            let k: Vec<usize> = children.iter().map(|c| eval_unchecked(c, interp, x)).collect();
            m.bind_at(children.len(), x, interp.gen(*op, *param), &k)
        }
    }
}

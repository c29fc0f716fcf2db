//! Deliberately broken structures for exercising the failure paths of the
//! checkers.

use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::signature::FactoredMonad;

/// Wraps a monad and shifts the result of every bind whose argument is not a
/// unit value and whose continuation is not the unit map. Both unit laws
/// still hold; associativity does not.
#[derive(Clone, Debug)]
pub struct CorruptedBind<M> {
    pub inner: M,
}

impl<M: Monad> Monad for CorruptedBind<M> {
    fn name(&self) -> String {
        format!("corrupted-bind({})", self.inner.name())
    }

    fn carrier_size(&self, x: usize) -> Result<usize> {
        self.inner.carrier_size(x)
    }

    fn unit_at(&self, x: usize, v: usize) -> usize {
        self.inner.unit_at(x, v)
    }

    fn bind_at(&self, x: usize, y: usize, t: usize, k: &[usize]) -> usize {
        let out = self.inner.bind_at(x, y, t, k);
        let t_is_unit = (0..x).any(|v| self.inner.unit_at(x, v) == t);
        let k_is_unit = x == y && k.iter().enumerate().all(|(v, &kv)| self.inner.unit_at(y, v) == kv);
        if t_is_unit || k_is_unit {
            return out;
        }
        let ty = self.inner.carrier_size(y).unwrap_or(1).max(1);
        (out + 1) % ty
    }
}

/// Drops element `r` from `R X`. Returns its image in `T X`.
pub fn remove_element(f: &mut FactoredMonad, x: usize, r: usize) -> Result<usize> {
    let entry = f.entry_mut(x)?;
    if r >= entry.elements.len() {
        return Err(Error::InvalidTable(format!("R({x}) has no element {r}")));
    }
    let t = entry.elements.remove(r);
    entry.witnesses.remove(r);
    entry.rebuild_index();
    Ok(t)
}

/// Makes `n_X` identify `drop` with `keep`: `n(drop)` becomes `n(keep)` and
/// corestriction sends the old image of `drop` to `keep`.
pub fn merge_elements(f: &mut FactoredMonad, x: usize, keep: usize, drop: usize) -> Result<()> {
    let entry = f.entry_mut(x)?;
    let len = entry.elements.len();
    if keep >= len || drop >= len || keep == drop {
        return Err(Error::InvalidTable(format!("cannot merge {drop} into {keep} in R({x})")));
    }
    let old = entry.elements[drop];
    entry.elements[drop] = entry.elements[keep];
    entry.index.insert(old, keep);
    Ok(())
}

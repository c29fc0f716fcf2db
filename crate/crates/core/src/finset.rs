//! Finite sets, total functions stored as tables, and the
//! (surjection, injection) factorization system on them.
//!
//! Elements of a [`FinSet`] are the dense indices `0..size`. Structured
//! carriers are encoded with fixed schemes so that element equality is index
//! equality:
//!
//! - product `X × Y`: `(x, y) ↦ x·|Y| + y`
//! - coproduct `X + Y`: left `x ↦ x`, right `y ↦ |X| + y`
//! - exponential `C^B`: a function `g` is the base-`|C|` numeral with digit
//!   `g(b)` at position `b`, i.e. `Σ_b g(b)·|C|^b`

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of elements of any constructed carrier.
pub const DEFAULT_MAX_CARRIER: usize = 1_000_000;

/// A finite set `{0, …, size-1}` with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    /// A set whose elements are displayed with the given labels. Labels must
    /// be pairwise distinct.
    pub fn labelled<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTable(format!("duplicate label `{}`", w[0])));
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Same underlying set; labels are only for display.
    pub fn same_as(&self, other: &FinSet) -> bool {
        self.size == other.size
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0..{}}}", self.size)
    }
}

/// A total function between finite sets, stored as its table of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinFun {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFun {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::InvalidTable(format!(
                "table has {} entries but the domain has {}",
                table.len(),
                dom.size
            )));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= cod.size) {
            return Err(Error::InvalidTable(format!(
                "entry {i} is {v}, outside codomain of size {}",
                cod.size
            )));
        }
        Ok(FinFun { dom, cod, table })
    }

    /// Builds a function from sizes alone.
    pub fn from_table(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        FinFun::new(FinSet::new(dom), FinSet::new(cod), table)
    }

    pub(crate) fn from_table_unchecked(dom: usize, cod: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom);
        debug_assert!(table.iter().all(|&v| v < cod));
        FinFun {
            dom: FinSet::new(dom),
            cod: FinSet::new(cod),
            table,
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.size];
        for &v in &self.table {
            if std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size == self.cod.size && self.is_injective()
    }
}

impl fmt::Display for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} → {}", self.table, self.dom.size, self.cod.size)
    }
}

pub fn identity_fun(x: &FinSet) -> FinFun {
    FinFun {
        dom: x.clone(),
        cod: x.clone(),
        table: (0..x.size).collect(),
    }
}

/// `g ∘ f`.
pub fn compose(g: &FinFun, f: &FinFun) -> Result<FinFun> {
    if !f.cod.same_as(&g.dom) {
        return Err(Error::TypeMismatch(format!(
            "cannot compose: codomain of f has {} elements, domain of g has {}",
            f.cod.size, g.dom.size
        )));
    }
    Ok(FinFun {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        table: f.table.iter().map(|&i| g.table[i]).collect(),
    })
}

/// `X × Y` with lexicographic pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    left: usize,
    right: usize,
    set: FinSet,
}

pub fn product(x: &FinSet, y: &FinSet) -> Product {
    let size = x
        .size
        .checked_mul(y.size)
        .expect("product size overflows the index type");
    Product {
        left: x.size,
        right: y.size,
        set: FinSet::new(size),
    }
}

impl Product {
    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn pair(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.left && y < self.right);
        x * self.right + y
    }

    pub fn unpair(&self, i: usize) -> (usize, usize) {
        (i / self.right, i % self.right)
    }

    pub fn fst(&self) -> FinFun {
        FinFun::from_table_unchecked(
            self.set.size,
            self.left,
            (0..self.set.size).map(|i| i / self.right).collect(),
        )
    }

    pub fn snd(&self) -> FinFun {
        FinFun::from_table_unchecked(
            self.set.size,
            self.right,
            (0..self.set.size).map(|i| i % self.right).collect(),
        )
    }

    /// The mediating map `⟨f, g⟩ : Z → X × Y`.
    pub fn pairing(&self, f: &FinFun, g: &FinFun) -> Result<FinFun> {
        if f.cod.size != self.left || g.cod.size != self.right || !f.dom.same_as(&g.dom) {
            return Err(Error::TypeMismatch("pairing legs do not match the product".into()));
        }
        Ok(FinFun::from_table_unchecked(
            f.dom.size,
            self.set.size,
            (0..f.dom.size).map(|z| self.pair(f.table[z], g.table[z])).collect(),
        ))
    }

    /// `f × g : X × Y → X' × Y'`.
    pub fn map(&self, target: &Product, f: &FinFun, g: &FinFun) -> Result<FinFun> {
        if f.dom.size != self.left
            || g.dom.size != self.right
            || f.cod.size != target.left
            || g.cod.size != target.right
        {
            return Err(Error::TypeMismatch("product map legs do not match".into()));
        }
        Ok(FinFun::from_table_unchecked(
            self.set.size,
            target.set.size,
            (0..self.set.size)
                .map(|i| {
                    let (x, y) = self.unpair(i);
                    target.pair(f.table[x], g.table[y])
                })
                .collect(),
        ))
    }
}

/// `X + Y` with the right summand offset by `|X|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    left: usize,
    right: usize,
    set: FinSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tagged {
    Left(usize),
    Right(usize),
}

pub fn coproduct(x: &FinSet, y: &FinSet) -> Coproduct {
    Coproduct {
        left: x.size,
        right: y.size,
        set: FinSet::new(x.size + y.size),
    }
}

impl Coproduct {
    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn inl(&self) -> FinFun {
        FinFun::from_table_unchecked(self.left, self.set.size, (0..self.left).collect())
    }

    pub fn inr(&self) -> FinFun {
        FinFun::from_table_unchecked(
            self.right,
            self.set.size,
            (0..self.right).map(|y| y + self.left).collect(),
        )
    }

    pub fn left(&self, x: usize) -> usize {
        x
    }

    pub fn right(&self, y: usize) -> usize {
        self.left + y
    }

    pub fn case(&self, i: usize) -> Tagged {
        if i < self.left {
            Tagged::Left(i)
        } else {
            Tagged::Right(i - self.left)
        }
    }

    /// The mediating map `[f, g] : X + Y → Z`.
    pub fn copairing(&self, f: &FinFun, g: &FinFun) -> Result<FinFun> {
        if f.dom.size != self.left || g.dom.size != self.right || !f.cod.same_as(&g.cod) {
            return Err(Error::TypeMismatch("copairing legs do not match the coproduct".into()));
        }
        Ok(FinFun::from_table_unchecked(
            self.set.size,
            f.cod.size,
            f.table.iter().chain(g.table.iter()).copied().collect(),
        ))
    }
}

/// The set `C^B` of all functions `B → C`, encoded positionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponential {
    exponent: usize,
    base: usize,
    set: FinSet,
}

/// `|C|^|B|` under `cap`, or `None` on overflow or when over the cap.
pub(crate) fn checked_power(base: usize, exponent: usize, cap: usize) -> Option<usize> {
    let exponent = u32::try_from(exponent).ok()?;
    base.checked_pow(exponent).filter(|&n| n <= cap)
}

pub fn exponential(b: &FinSet, c: &FinSet, cap: usize) -> Result<Exponential> {
    let size = checked_power(c.size, b.size, cap).ok_or_else(|| {
        Error::too_large(
            "exponential",
            format!("{}^{}", c.size, b.size),
            cap,
        )
    })?;
    Ok(Exponential {
        exponent: b.size,
        base: c.size,
        set: FinSet::new(size),
    })
}

impl Exponential {
    pub fn set(&self) -> &FinSet {
        &self.set
    }

    /// `g(b)` where `enc` encodes `g`.
    pub fn apply(&self, enc: usize, b: usize) -> usize {
        digit(enc, self.base, b)
    }

    pub fn tabulate(&self, g: &[usize]) -> usize {
        debug_assert_eq!(g.len(), self.exponent);
        encode_digits(g, self.base)
    }

    pub fn decode(&self, enc: usize) -> Vec<usize> {
        decode_digits(enc, self.base, self.exponent)
    }

    /// Evaluation `C^B × B → C`.
    pub fn eval_fun(&self) -> FinFun {
        let pairs = product(&self.set, &FinSet::new(self.exponent));
        FinFun::from_table_unchecked(
            pairs.set.size,
            self.base,
            (0..pairs.set.size)
                .map(|i| {
                    let (enc, b) = pairs.unpair(i);
                    self.apply(enc, b)
                })
                .collect(),
        )
    }
}

pub(crate) fn digit(enc: usize, base: usize, pos: usize) -> usize {
    let mut e = enc;
    for _ in 0..pos {
        e /= base;
    }
    e % base
}

pub(crate) fn encode_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

pub(crate) fn decode_digits(mut enc: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(enc % base);
        enc /= base;
    }
    out
}

/// `f = n ∘ e` with `e` surjective onto the image and `n` the inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub e: FinFun,
    pub mid: FinSet,
    pub n: FinFun,
}

/// Image factorization. The image is ordered by first occurrence in the
/// table.
pub fn factorize(f: &FinFun) -> Factorization {
    let mut slot = vec![usize::MAX; f.cod.size];
    let mut image = Vec::new();
    let mut e_table = Vec::with_capacity(f.dom.size);
    for &v in &f.table {
        if slot[v] == usize::MAX {
            slot[v] = image.len();
            image.push(v);
        }
        e_table.push(slot[v]);
    }
    let mid = FinSet::new(image.len());
    Factorization {
        e: FinFun {
            dom: f.dom.clone(),
            cod: mid.clone(),
            table: e_table,
        },
        n: FinFun {
            dom: mid.clone(),
            cod: f.cod.clone(),
            table: image,
        },
        mid,
    }
}

/// Solves the lifting problem
///
/// ```text
///     A --e--> B
///     |        |
///    top     bottom
///     v        v
///     C --m--> D
/// ```
///
/// for `e` surjective and `m` injective, returning the unique `d : B → C`
/// with `d ∘ e = top` and `m ∘ d = bottom`.
pub fn check_diagonal_fill(e: &FinFun, m: &FinFun, top: &FinFun, bottom: &FinFun) -> Result<FinFun> {
    if !(e.dom.same_as(&top.dom)
        && e.cod.same_as(&bottom.dom)
        && top.cod.same_as(&m.dom)
        && m.cod.same_as(&bottom.cod))
    {
        return Err(Error::TypeMismatch("square edges do not line up".into()));
    }
    if !e.is_surjective() {
        return Err(Error::NotSurjective(format!("left edge {e}")));
    }
    if !m.is_injective() {
        return Err(Error::NotInjective(format!("right edge {m}")));
    }
    if let Some(a) = (0..e.dom.size).find(|&a| m.table[top.table[a]] != bottom.table[e.table[a]]) {
        return Err(Error::NotCommuting(format!("element {a}")));
    }

    // d(e(a)) = top(a) forces d on every point since e is onto.
    let mut d = vec![usize::MAX; e.cod.size];
    for a in 0..e.dom.size {
        let b = e.table[a];
        if d[b] == usize::MAX {
            d[b] = top.table[a];
        } else if d[b] != top.table[a] {
            return Err(Error::NotCommuting(format!(
                "preimages of {b} disagree under the top edge"
            )));
        }
    }
    let d = FinFun {
        dom: e.cod.clone(),
        cod: m.dom.clone(),
        table: d,
    };
    debug_assert_eq!(compose(m, &d)?.table, bottom.table);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(dom: usize, cod: usize, t: &[usize]) -> FinFun {
        FinFun::from_table(dom, cod, t.to_vec()).unwrap()
    }

    #[test]
    fn product_indices() {
        let p = product(&FinSet::new(2), &FinSet::new(3));
        assert_eq!(p.set().size(), 6);
        assert_eq!(p.pair(1, 2), 5);
        assert_eq!(p.unpair(5), (1, 2));
        assert_eq!(product(&FinSet::new(0), &FinSet::new(5)).set().size(), 0);
        let unit = product(&FinSet::new(1), &FinSet::new(4));
        assert_eq!(unit.set().size(), 4);
        assert!((0..4).all(|y| unit.pair(0, y) == y));
    }

    #[test]
    fn exponential_encoding() {
        let e = exponential(&FinSet::new(2), &FinSet::new(3), DEFAULT_MAX_CARRIER).unwrap();
        assert_eq!(e.set().size(), 9);
        assert_eq!(e.tabulate(&[1, 2]), 7);
        assert_eq!(e.apply(7, 0), 1);
        assert_eq!(e.apply(7, 1), 2);
        assert_eq!(exponential(&FinSet::new(0), &FinSet::new(4), 10).unwrap().set().size(), 1);
        assert_eq!(exponential(&FinSet::new(0), &FinSet::new(0), 10).unwrap().set().size(), 1);
        assert_eq!(exponential(&FinSet::new(3), &FinSet::new(1), 10).unwrap().set().size(), 1);
    }

    #[test]
    fn exponential_over_cap() {
        let err = exponential(&FinSet::new(20), &FinSet::new(2), DEFAULT_MAX_CARRIER).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { .. }));
        let err = exponential(&FinSet::new(200), &FinSet::new(3), usize::MAX).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { .. }));
    }

    #[test]
    fn coproduct_tags() {
        let c = coproduct(&FinSet::new(2), &FinSet::new(2));
        assert_eq!(c.set().size(), 4);
        assert_eq!(c.right(1), 3);
        assert_eq!(c.case(3), Tagged::Right(1));
        let c = coproduct(&FinSet::new(0), &FinSet::new(3));
        assert_eq!(c.inr().table(), &[0, 1, 2]);
        assert_eq!(coproduct(&FinSet::new(1), &FinSet::new(0)).set().size(), 1);
    }

    #[test]
    fn composition() {
        let swap = f(2, 2, &[1, 0]);
        assert_eq!(compose(&swap, &swap).unwrap(), identity_fun(&FinSet::new(2)));
        let g = f(1, 3, &[2]);
        let c = f(2, 1, &[0, 0]);
        assert_eq!(compose(&g, &c).unwrap().table(), &[2, 2]);
        assert_eq!(compose(&identity_fun(&FinSet::new(1)), &c).unwrap(), c);
        assert!(matches!(compose(&c, &g), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn table_validation() {
        assert!(FinFun::from_table(2, 2, vec![0]).is_err());
        assert!(FinFun::from_table(2, 2, vec![0, 2]).is_err());
        assert!(FinSet::labelled(["a", "a"]).is_err());
        let s = FinSet::labelled(["a", "b"]).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.label(1), "b");
    }

    #[test]
    fn factorize_first_occurrence() {
        let fac = factorize(&f(3, 3, &[2, 2, 0]));
        assert_eq!(fac.mid.size(), 2);
        assert_eq!(fac.e.table(), &[0, 0, 1]);
        assert_eq!(fac.n.table(), &[2, 0]);

        let inj = f(3, 4, &[3, 1, 0]);
        let fac = factorize(&inj);
        assert!(fac.e.is_bijective());
        assert_eq!(fac.mid.size(), 3);
    }

    #[test]
    fn diagonal_fill() {
        let id2 = identity_fun(&FinSet::new(2));
        let top = f(2, 2, &[1, 0]);
        assert_eq!(check_diagonal_fill(&id2, &id2, &top, &top).unwrap(), top);

        let e = f(2, 1, &[0, 0]);
        let top = f(2, 2, &[1, 1]);
        let m = f(2, 3, &[0, 1]);
        let bottom = f(1, 3, &[1]);
        assert_eq!(check_diagonal_fill(&e, &m, &top, &bottom).unwrap().table(), &[1]);

        let bad_bottom = f(1, 3, &[2]);
        assert!(matches!(
            check_diagonal_fill(&e, &m, &top, &bad_bottom),
            Err(Error::NotCommuting(_))
        ));
        assert!(matches!(
            check_diagonal_fill(&f(1, 2, &[0]), &m, &f(1, 2, &[0]), &f(2, 3, &[0, 0])),
            Err(Error::NotSurjective(_))
        ));
        assert!(matches!(
            check_diagonal_fill(&e, &f(2, 3, &[1, 1]), &top, &bottom),
            Err(Error::NotInjective(_))
        ));
    }
}

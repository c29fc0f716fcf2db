//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use effect_factor::finset::{check_diagonal_fill, FinFun};

/// Every table of a function `dom → cod`, first position least significant.
pub fn all_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    if dom > 0 && cod == 0 {
        return Vec::new();
    }
    let mut out = vec![Vec::with_capacity(dom)];
    for _ in 0..dom {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..cod).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn onto(t: &[usize], cod: usize) -> bool {
    (0..cod).all(|v| t.contains(&v))
}

pub fn one_to_one(t: &[usize]) -> bool {
    (0..t.len()).all(|i| (0..i).all(|j| t[i] != t[j]))
}

pub fn distinct(t: &[usize]) -> usize {
    let mut s = t.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Number of `d : B → C` with `d ∘ e = top` and `m ∘ d = bottom`, counted
/// pointwise: each `b` chooses among the `c` agreeing with the whole fibre.
pub fn fill_count(e: &[usize], m: &[usize], top: &[usize], bottom: &[usize]) -> usize {
    (0..bottom.len())
        .map(|b| {
            (0..m.len())
                .filter(|&c| m[c] == bottom[b] && (0..e.len()).all(|a| e[a] != b || top[a] == c))
                .count()
        })
        .product()
}

#[derive(Debug, Default)]
pub struct FillSummary {
    pub squares: u64,
    pub commuting: u64,
    pub failures: Vec<String>,
}

/// Every commuting square `A -e-> B -bottom-> D`, `A -top-> C -m-> D` with
/// `e` onto, `m` one-to-one and all four sets of size `≤ max`, enumerated as
/// `(e, m, top)` with `bottom` read off the square. Each must have exactly
/// one fill and the library must return it. Every one-point change of
/// `bottom`, and every `top` that splits a fibre of `e`, must be rejected.
pub fn exhaustive_fill(max: usize) -> FillSummary {
    let mut s = FillSummary::default();
    for a in 0..=max {
        for b in 0..=max {
            let es: Vec<_> = all_tables(a, b).into_iter().filter(|t| onto(t, b)).collect();
            for c in 0..=max {
                let tops = all_tables(a, c);
                for d in 0..=max {
                    let ms: Vec<_> = all_tables(c, d).into_iter().filter(|t| one_to_one(t)).collect();
                    for e in &es {
                        let ef = FinFun::from_table(a, b, e.clone()).unwrap();
                        for m in &ms {
                            let mf = FinFun::from_table(c, d, m.clone()).unwrap();
                            for top in &tops {
                                let tf = FinFun::from_table(a, c, top.clone()).unwrap();
                                let mut bottom = vec![None; b];
                                let mut consistent = true;
                                for i in 0..a {
                                    let v = m[top[i]];
                                    match bottom[e[i]] {
                                        None => bottom[e[i]] = Some(v),
                                        Some(w) if w != v => consistent = false,
                                        _ => {}
                                    }
                                }
                                let check = |bot: &[usize]| {
                                    check_diagonal_fill(&ef, &mf, &tf, &FinFun::from_table(b, d, bot.to_vec()).unwrap())
                                };
                                if !consistent {
                                    s.squares += 1;
                                    let bot = vec![0; b];
                                    if check(&bot).is_ok() {
                                        s.failures.push(format!("accepted split fibre e={e:?} m={m:?} top={top:?}"));
                                    }
                                    continue;
                                }
                                let bottom: Vec<usize> = bottom.into_iter().map(Option::unwrap).collect();
                                s.squares += 1;
                                s.commuting += 1;
                                let n = fill_count(e, m, top, &bottom);
                                let ok = n == 1
                                    && check(&bottom).is_ok_and(|f| {
                                        (0..a).all(|i| f.apply(e[i]) == top[i])
                                            && (0..b).all(|j| m[f.apply(j)] == bottom[j])
                                    });
                                if !ok {
                                    s.failures.push(format!("e={e:?} m={m:?} top={top:?} bottom={bottom:?}: {n} fills"));
                                }
                                for j in 0..b {
                                    for v in (0..d).filter(|&v| v != bottom[j]) {
                                        let mut bot = bottom.clone();
                                        bot[j] = v;
                                        s.squares += 1;
                                        if fill_count(e, m, top, &bot) != 0 || check(&bot).is_ok() {
                                            s.failures.push(format!("accepted e={e:?} m={m:?} top={top:?} bottom={bot:?}"));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    s
}

//! Exhaustive-or-sampled enumeration of check cases.
//!
//! A case space is a mixed-radix product. When it has at most `allot`
//! points every point is visited in order; otherwise `allot` points are drawn
//! uniformly with a ChaCha stream seeded from the run seed and a tag naming
//! the check, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CaseOutcome {
    pub cases: u64,
    pub exhaustive: bool,
    pub space: String,
    pub counterexample: Option<String>,
}

pub(crate) fn space_size(radices: &[usize]) -> Option<u128> {
    radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
}

pub(crate) fn describe_space(radices: &[usize]) -> String {
    match space_size(radices) {
        Some(n) => n.to_string(),
        None => "overflow".to_string(),
    }
}

pub(crate) fn derive_seed(seed: u64, tag: &str) -> u64 {
    // FNV-1a over the tag, folded with the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain(seed.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub(crate) fn run_cases(
    radices: &[usize],
    allot: u64,
    seed: u64,
    tag: &str,
    mut check: impl FnMut(&[usize]) -> Option<String>,
) -> CaseOutcome {
    let space = space_size(radices);
    let describe = describe_space(radices);
    let mut point = vec![0usize; radices.len()];
    let mut cases = 0u64;

    if space == Some(0) {
        return CaseOutcome {
            cases: 0,
            exhaustive: true,
            space: describe,
            counterexample: None,
        };
    }

    if matches!(space, Some(n) if n <= allot as u128) {
        loop {
            cases += 1;
            if let Some(cx) = check(&point) {
                return CaseOutcome {
                    cases,
                    exhaustive: true,
                    space: describe,
                    counterexample: Some(cx),
                };
            }
            // little-endian odometer
            let mut i = 0;
            loop {
                if i == point.len() {
                    return CaseOutcome {
                        cases,
                        exhaustive: true,
                        space: describe,
                        counterexample: None,
                    };
                }
                point[i] += 1;
                if point[i] < radices[i] {
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, tag));
    for _ in 0..allot {
        for (p, &r) in point.iter_mut().zip(radices) {
            *p = rng.gen_range(0..r);
        }
        cases += 1;
        if let Some(cx) = check(&point) {
            return CaseOutcome {
                cases,
                exhaustive: false,
                space: describe,
                counterexample: Some(cx),
            };
        }
    }
    CaseOutcome {
        cases,
        exhaustive: false,
        space: describe,
        counterexample: None,
    }
}

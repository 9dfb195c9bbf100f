//! Exhaustive oracles for cross-intersecting pairs `(A, B)` with `A` a family
//! of a-subsets and `B` a family of b-subsets of `[n]`.
//!
//! A family of a-sets is a bitmask over the colex list of a-sets. For each
//! `A` the largest partner is `B_max(A)`, the b-sets meeting every member of
//! `A`; it is the AND of per-set "meets" masks, computed incrementally over
//! the low bits of the subset index.

use std::time::Instant;

use rand::Rng;
use serde_json::json;

use super::certificate::Certificate;
use crate::constructions::lex_family;
use crate::error::{Error, Result};
use crate::exact::binom_u64;
use crate::family::{are_cross_intersecting, ksets, Set, UniformFamily};
use crate::gen;
use crate::par::Exec;

/// Largest number of a-sets whose power set the oracles will walk.
pub const MAX_A_SETS: usize = 26;
/// Largest number of b-sets a partner mask can hold.
pub const MAX_B_SETS: usize = 128;

/// Low-bit width handled by one parallel task.
const LOW_BITS: usize = 14;

struct Table {
    a_sets: Vec<Set>,
    b_sets: Vec<Set>,
    /// `meets[i]`: the b-sets meeting the i-th a-set.
    meets: Vec<u128>,
}

impl Table {
    fn new(n: usize, a: usize, b: usize) -> Result<Table> {
        let na = binom_u64(n, a) as usize;
        let nb = binom_u64(n, b) as usize;
        if na > MAX_A_SETS {
            return Err(Error::RangeTooLarge {
                what: format!("all families of {a}-subsets of [{n}]"),
                estimate: format!("2^{na} subsets"),
            });
        }
        if nb > MAX_B_SETS {
            return Err(Error::RangeTooLarge {
                what: format!("partner masks over {b}-subsets of [{n}]"),
                estimate: format!("{nb} bits"),
            });
        }
        let a_sets: Vec<Set> = ksets(n, a).collect();
        let b_sets: Vec<Set> = ksets(n, b).collect();
        let meets = a_sets
            .iter()
            .map(|s| {
                b_sets
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.intersects(*s))
                    .fold(0u128, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(Table { a_sets, b_sets, meets })
    }

    fn full_b(&self) -> u128 {
        if self.b_sets.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.b_sets.len()) - 1
        }
    }

    fn b_max(&self, a_mask: u64) -> u128 {
        (0..self.a_sets.len())
            .filter(|i| a_mask >> i & 1 == 1)
            .fold(self.full_b(), |m, i| m & self.meets[i])
    }

    /// Fold `visit(a_mask, b_max)` over every a-family, in parallel over the
    /// high bits of the mask. Results are combined in mask order.
    fn sweep<T, V, C>(&self, exec: Exec, init: T, visit: V, combine: C) -> T
    where
        T: Clone + Send + Sync,
        V: Fn(&mut T, u64, u128) + Sync,
        C: Fn(T, T) -> T,
    {
        let na = self.a_sets.len();
        let low = na.min(LOW_BITS);
        let high = na - low;
        let parts = exec.map_range(0..1u64 << high, |hi| {
            let mut acc = init.clone();
            let base = (0..high)
                .filter(|j| hi >> j & 1 == 1)
                .fold(self.full_b(), |m, j| m & self.meets[low + j]);
            let mut and = vec![base; 1 << low];
            for lo in 0..1usize << low {
                if lo > 0 {
                    let t = lo.trailing_zeros() as usize;
                    and[lo] = and[lo & (lo - 1)] & self.meets[t];
                }
                visit(&mut acc, hi << low | lo as u64, and[lo]);
            }
            acc
        });
        parts.into_iter().fold(init, combine)
    }

    /// Recompute `B_max` directly for a spread of a-families and compare.
    fn audit(&self, stride: u64) -> Result<()> {
        let n_masks = 1u64 << self.a_sets.len();
        let mut m = 0;
        while m < n_masks {
            let direct = self
                .b_sets
                .iter()
                .enumerate()
                .filter(|(_, t)| (0..self.a_sets.len()).all(|i| m >> i & 1 == 0 || t.intersects(self.a_sets[i])))
                .fold(0u128, |acc, (j, _)| acc | 1 << j);
            if direct != self.b_max(m) {
                return Err(Error::Internal(format!("partner mask mismatch at a-family {m:#x}")));
            }
            m += stride;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Default)]
struct SumStats {
    best: u64,
    best_pairs: u64,
    /// Best sum with `|A| > 1` and `|B| > 1`.
    best_both_big: u64,
}

/// Maximum of `|A| + |B|` over cross-intersecting pairs with both families
/// nonempty, `n >= a + b`, `a <= b`. The bound is `C(n,b) - C(n-a,b) + 1`,
/// strict once `|A|, |B| > 1` unless `n = a + b` or `a = b = 2`.
pub fn sum_bound_oracle(n: usize, a: usize, b: usize, exec: Exec) -> Result<(u64, Certificate)> {
    if a == 0 || a > b || n < a + b {
        return Err(Error::Precondition(format!("needs 1 <= a <= b and n >= a + b, got n={n}, a={a}, b={b}")));
    }
    let start = Instant::now();
    let t = Table::new(n, a, b)?;
    t.audit(997)?;
    let stats = t.sweep(
        exec,
        SumStats::default(),
        |s, am, bm| {
            let (sa, sb) = (am.count_ones() as u64, bm.count_ones() as u64);
            if sa == 0 || sb == 0 {
                return;
            }
            let v = sa + sb;
            if v > s.best {
                s.best = v;
                s.best_pairs = 0;
            }
            if v == s.best {
                s.best_pairs += 1;
            }
            if sa > 1 && sb > 1 {
                s.best_both_big = s.best_both_big.max(v);
            }
        },
        |x, y| {
            let best = x.best.max(y.best);
            let pairs = [x, y].iter().filter(|s| s.best == best).map(|s| s.best_pairs).sum();
            SumStats { best, best_pairs: pairs, best_both_big: x.best_both_big.max(y.best_both_big) }
        },
    );
    let bound = binom_u64(n, b) - binom_u64(n - a, b) + 1;
    let strict = n > a + b && !(a == 2 && b == 2);
    let mut witnesses = Vec::new();
    if stats.best != bound {
        witnesses.push(json!({"check": "max |A| + |B| = bound", "attained": stats.best, "bound": bound}));
    }
    if strict && stats.best_both_big >= bound {
        witnesses.push(json!({"check": "strict once |A|, |B| > 1", "attained": stats.best_both_big, "bound": bound}));
    }
    let cert = Certificate::new(
        "ORACLE-SUM",
        "|A| + |B| <= C(n,b) - C(n-a,b) + 1 for nonempty cross-intersecting A, B; strict when |A|, |B| > 1 unless n = a + b or a = b = 2",
        json!({
            "n": n, "a": a, "b": b, "bound": bound,
            "attained": stats.best, "optimal_pairs": stats.best_pairs,
            "attained_both_big": stats.best_both_big, "strict_clause": strict,
        }),
        witnesses,
        start.elapsed(),
    );
    Ok((stats.best, cert))
}

/// Maximum of `|A| + |B|` over cross-intersecting pairs of subfamilies of
/// `C([m],a)` and `C([m],b)` with `|A| <= C(m-1,a-1)` or
/// `|B| >= C(m-1,b-1)`; `m > a + b`, `a > b`. The bound is
/// `C(m-1,a-1) + C(m-1,b-1)`.
pub fn hilton_corollary_oracle(m: usize, a: usize, b: usize, exec: Exec) -> Result<(u64, Certificate)> {
    if b == 0 || a <= b || m <= a + b {
        return Err(Error::Precondition(format!("needs a > b >= 1 and m > a + b, got m={m}, a={a}, b={b}")));
    }
    let start = Instant::now();
    let t = Table::new(m, a, b)?;
    t.audit(997)?;
    let (cap_a, floor_b) = (binom_u64(m - 1, a - 1), binom_u64(m - 1, b - 1));
    let best = t.sweep(
        exec,
        0u64,
        |s, am, bm| {
            let (sa, sb) = (am.count_ones() as u64, bm.count_ones() as u64);
            if sa <= cap_a || sb >= floor_b {
                *s = (*s).max(sa + sb);
            }
        },
        u64::max,
    );
    let bound = cap_a + floor_b;
    let witnesses = if best > bound { vec![json!({"attained": best, "bound": bound})] } else { vec![] };
    let cert = Certificate::new(
        "ORACLE-HILTON-COR",
        "|A| + |B| <= C(m-1,a-1) + C(m-1,b-1) for cross-intersecting A, B with |A| <= C(m-1,a-1) or |B| >= C(m-1,b-1)",
        json!({"m": m, "a": a, "b": b, "bound": bound, "attained": best}),
        witnesses,
        start.elapsed(),
    );
    Ok((best, cert))
}

/// Lex-initial families of the given sizes, precomputed for each size pair.
fn lex_table(n: usize, a: usize, b: usize) -> Result<Vec<Vec<bool>>> {
    let (na, nb) = (binom_u64(n, a) as usize, binom_u64(n, b) as usize);
    let la: Vec<UniformFamily> = (0..=na).map(|s| lex_family(n, a, s)).collect::<Result<_>>()?;
    let lb: Vec<UniformFamily> = (0..=nb).map(|s| lex_family(n, b, s)).collect::<Result<_>>()?;
    la.iter()
        .map(|x| lb.iter().map(|y| are_cross_intersecting(x, y)).collect::<Result<Vec<bool>>>())
        .collect()
}

/// Every cross-intersecting `(A, B)`, by enumerating all submasks of
/// `B_max(A)`: the lex-initial families `L(n,a,|A|)` and `L(n,b,|B|)` are
/// cross-intersecting too.
pub fn hilton_lemma_exhaustive(n: usize, a: usize, b: usize, exec: Exec) -> Result<Certificate> {
    if a == 0 || b == 0 || n < a + b {
        return Err(Error::Precondition(format!("needs a, b >= 1 and n >= a + b, got n={n}, a={a}, b={b}")));
    }
    let start = Instant::now();
    let t = Table::new(n, a, b)?;
    if t.b_sets.len() > 24 {
        return Err(Error::RangeTooLarge {
            what: "submask enumeration of partner masks".into(),
            estimate: format!("2^{} per a-family", t.b_sets.len()),
        });
    }
    let ok = lex_table(n, a, b)?;
    // (pairs visited, violations as (a-mask, b-mask))
    let (pairs, bad) = t.sweep(
        exec,
        (0u64, Vec::<(u64, u128)>::new()),
        |s, am, bm| {
            let sa = am.count_ones() as usize;
            let mut sub = bm;
            loop {
                s.0 += 1;
                if !ok[sa][sub.count_ones() as usize] && s.1.len() < 16 {
                    s.1.push((am, sub));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & bm;
            }
        },
        |mut x, y| {
            x.0 += y.0;
            x.1.extend(y.1);
            x
        },
    );
    let witnesses = bad
        .iter()
        .map(|&(am, bm)| json!({"a_family": format!("{am:#x}"), "b_family": format!("{bm:#x}")}))
        .collect();
    Ok(Certificate::new(
        "ORACLE-HILTON-LEX",
        "if A, B are cross-intersecting then so are L(n,a,|A|) and L(n,b,|B|)",
        json!({"n": n, "a": a, "b": b, "mode": "exhaustive", "pairs": pairs}),
        witnesses,
        start.elapsed(),
    ))
}

/// Random cross-intersecting pairs: `A` keeps each a-set with a random
/// density, `B` is a random subfamily of `B_max(A)`.
pub fn hilton_lemma_random(n: usize, a: usize, b: usize, trials: usize, seed: u64) -> Result<Certificate> {
    if a == 0 || b == 0 || n < a + b {
        return Err(Error::Precondition(format!("needs a, b >= 1 and n >= a + b, got n={n}, a={a}, b={b}")));
    }
    let start = Instant::now();
    let t = Table::new(n, a, b)?;
    let ok = lex_table(n, a, b)?;
    let mut rng = gen::rng(seed);
    let mut witnesses = Vec::new();
    for trial in 0..trials {
        let p: f64 = rng.gen();
        let am = (0..t.a_sets.len()).filter(|_| rng.gen_bool(p)).fold(0u64, |m, i| m | 1 << i);
        let bmax = t.b_max(am);
        let q: f64 = rng.gen();
        let bm = (0..t.b_sets.len()).filter(|j| bmax >> j & 1 == 1 && rng.gen_bool(q)).fold(0u128, |m, j| m | 1 << j);
        let fa = UniformFamily::new(n, a, t.a_sets.iter().enumerate().filter(|(i, _)| am >> i & 1 == 1).map(|(_, s)| *s))?;
        let fb = UniformFamily::new(n, b, t.b_sets.iter().enumerate().filter(|(j, _)| bm >> j & 1 == 1).map(|(_, s)| *s))?;
        if !are_cross_intersecting(&fa, &fb)? {
            return Err(Error::Internal(format!("trial {trial}: sampled pair is not cross-intersecting")));
        }
        if !ok[fa.len()][fb.len()] {
            witnesses.push(json!({"trial": trial, "a_size": fa.len(), "b_size": fb.len()}));
        }
    }
    Ok(Certificate::new(
        "ORACLE-HILTON-LEX",
        "if A, B are cross-intersecting then so are L(n,a,|A|) and L(n,b,|B|)",
        json!({"n": n, "a": a, "b": b, "mode": "random", "trials": trials, "seed": seed}),
        witnesses,
        start.elapsed(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_bound_small_cases() {
        let (v, c) = sum_bound_oracle(4, 2, 2, Exec::Parallel).unwrap();
        assert_eq!(v, 6);
        assert!(c.passed(), "{:?}", c.witnesses);
        let (v, c) = sum_bound_oracle(5, 2, 3, Exec::Parallel).unwrap();
        assert_eq!(v, binom_u64(5, 3) - binom_u64(3, 3) + 1);
        assert!(c.passed());
        assert_eq!(c.params["strict_clause"], json!(false));
    }

    #[test]
    fn sum_bound_rejects_bad_input() {
        assert!(sum_bound_oracle(4, 3, 2, Exec::Sequential).is_err());
        assert!(matches!(sum_bound_oracle(9, 2, 3, Exec::Sequential), Err(Error::RangeTooLarge { .. })));
    }

    #[test]
    fn sweep_orders_agree() {
        let (a, _) = sum_bound_oracle(5, 2, 2, Exec::Sequential).unwrap();
        let (b, _) = sum_bound_oracle(5, 2, 2, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hilton_corollary_rejects_a_le_b() {
        assert!(hilton_corollary_oracle(6, 2, 2, Exec::Sequential).is_err());
        assert!(hilton_corollary_oracle(5, 3, 2, Exec::Sequential).is_err());
    }

    #[test]
    fn lex_lemma_small() {
        let c = hilton_lemma_exhaustive(4, 2, 2, Exec::Parallel).unwrap();
        assert!(c.passed());
        assert!(c.params["pairs"].as_u64().unwrap() > 64);
        let c = hilton_lemma_random(6, 2, 3, 500, 7).unwrap();
        assert!(c.passed());
    }
}

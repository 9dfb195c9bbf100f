//! Window inequalities on traces: bounds on `f_P` and on sums of `f_S` for
//! disjoint pairs `P, P'` inside a window `U`, and the `α`-sum bound for
//! disjoint subsets of `U`.
//!
//! A bound whose hypotheses fail on a given window is counted as skipped,
//! never as a violation.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use super::certificate::Certificate;
use crate::covers::tau;
use crate::error::Result;
use crate::exact::binom;
use crate::family::{is_intersecting, ksets, trace, Set, TraceStats, UniformFamily};
use crate::par::Exec;

pub const PAIR: &str = "pair-bound";
pub const DISJOINT_PAIR: &str = "disjoint-pair-bound";
pub const FOUR_TERM: &str = "four-term-bound";
pub const FOUR_TERM_K4: &str = "four-term-bound-k4";
pub const FIVE_WINDOW: &str = "five-window-bound";
pub const ALPHA_SUM: &str = "alpha-sum";

/// Tally of one or more window checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TraceReport {
    pub windows: u64,
    /// Bound name to number of evaluated instances.
    pub applied: BTreeMap<String, u64>,
    /// `"bound: reason"` to number of windows where the bound did not apply.
    pub skipped: BTreeMap<String, u64>,
    /// Instances of the k = 4 four-term bound attained with equality.
    pub equality_cases: u64,
    pub violations: Vec<Value>,
}

impl TraceReport {
    pub fn merge(&mut self, other: TraceReport) {
        self.windows += other.windows;
        for (k, v) in other.applied {
            *self.applied.entry(k).or_default() += v;
        }
        for (k, v) in other.skipped {
            *self.skipped.entry(k).or_default() += v;
        }
        self.equality_cases += other.equality_cases;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn applied(&self, bound: &str) -> u64 {
        self.applied.get(bound).copied().unwrap_or(0)
    }

    fn skip(&mut self, bound: &str, reason: &str) {
        *self.skipped.entry(format!("{bound}: {reason}")).or_default() += 1;
    }

    fn tick(&mut self, bound: &str) {
        *self.applied.entry(bound.to_string()).or_default() += 1;
    }
}

struct Window<'a> {
    f: &'a UniformFamily,
    u: Set,
    t: TraceStats,
    n: i64,
    k: i64,
    w: i64,
}

impl Window<'_> {
    fn f(&self, s: Set) -> BigInt {
        BigInt::from(self.t.f(s))
    }

    fn violation(&self, bound: &str, sets: &[(&str, Set)], lhs: String, rhs: String) -> Value {
        let mut v = json!({
            "bound": bound,
            "window": self.u.elems().collect::<Vec<_>>(),
            "lhs": lhs,
            "rhs": rhs,
        });
        for (name, s) in sets {
            v[*name] = json!(s.elems().collect::<Vec<_>>());
        }
        v
    }
}

fn b(a: i64, c: i64) -> BigInt {
    binom(a, c).expect("top argument checked by caller")
}

/// Check every applicable bound on each window of `f`.
pub fn trace_bound_check(f: &UniformFamily, windows: &[Set]) -> Result<TraceReport> {
    let intersecting = is_intersecting(f);
    let tau3 = intersecting && !f.is_empty() && tau(f)? >= 3;
    let mut rep = TraceReport::default();
    for &u in windows {
        let t = trace(f, u)?;
        let win = Window { f, u, t, n: f.n() as i64, k: f.k() as i64, w: u.len() as i64 };
        check_window(&win, intersecting, tau3, &mut rep);
        rep.windows += 1;
    }
    Ok(rep)
}

fn check_window(win: &Window<'_>, intersecting: bool, tau3: bool, rep: &mut TraceReport) {
    let (n, k, w) = (win.n, win.k, win.w);
    let hyp2 = win.f.sets().all(|s| s.inter(win.u).len() >= 2);
    let pairs: Vec<Set> = two_subsets(win.u);
    let disjoint: Vec<(Set, Set)> = pairs
        .iter()
        .tuple_combinations()
        .filter(|(p, q)| !p.intersects(**q))
        .map(|(p, q)| (*p, *q))
        .collect();
    let base = |rep: &mut TraceReport, bound: &str| -> bool {
        if !intersecting {
            rep.skip(bound, "family is not intersecting");
        } else if !tau3 {
            rep.skip(bound, "covering number below 3");
        } else if !hyp2 {
            rep.skip(bound, "some member meets the window in fewer than 2 points");
        } else {
            return true;
        }
        false
    };

    // f_P for a single pair, and f_P + f_P' for disjoint pairs
    let head = if n - k - w + 2 >= 0 { Some(b(n - w, k - 2) - b(n - k - w + 2, k - 2)) } else { None };
    if base(rep, PAIR) {
        match &head {
            None => rep.skip(PAIR, "n below threshold"),
            Some(h) => {
                for &p in &pairs {
                    rep.tick(PAIR);
                    if win.f(p) > *h {
                        rep.violations.push(win.violation(PAIR, &[("P", p)], win.f(p).to_string(), h.to_string()));
                    }
                }
            }
        }
    }
    if base(rep, DISJOINT_PAIR) {
        match &head {
            Some(h) if n >= 2 * k + w - 4 => {
                let rhs = h + 1;
                for &(p, q) in &disjoint {
                    rep.tick(DISJOINT_PAIR);
                    let lhs = win.f(p) + win.f(q);
                    if lhs > rhs {
                        rep.violations.push(win.violation(DISJOINT_PAIR, &[("P", p), ("P'", q)], lhs.to_string(), rhs.to_string()));
                    }
                }
            }
            _ => rep.skip(DISJOINT_PAIR, "n below threshold"),
        }
    }

    let four = |p: Set, q: Set| win.f(p) + win.f(q) + win.f(win.u.minus(p)) + win.f(win.u.minus(q));
    if base(rep, FOUR_TERM) {
        if w != 5 && w != 6 {
            rep.skip(FOUR_TERM, "window size not 5 or 6");
        } else if n < 2 * k + w - 4 {
            rep.skip(FOUR_TERM, "n below threshold");
        } else {
            let rhs = head.clone().expect("n >= 2k+w-4 keeps the top nonnegative")
                + b(n - w, k - w + 2)
                + b(n - w - 1, k - w + 1);
            for &(p, q) in &disjoint {
                rep.tick(FOUR_TERM);
                let lhs = four(p, q);
                if lhs > rhs {
                    rep.violations.push(win.violation(FOUR_TERM, &[("P", p), ("P'", q)], lhs.to_string(), rhs.to_string()));
                }
            }
        }
    }
    if base(rep, FOUR_TERM_K4) {
        if k != 4 || w != 5 {
            rep.skip(FOUR_TERM_K4, "needs k = 4 and window size 5");
        } else if n < 9 {
            rep.skip(FOUR_TERM_K4, "n below threshold");
        } else {
            let rhs = BigInt::from(3 * (n - 6));
            let extreme = BigInt::from(2 * n - 13);
            for &(p, q) in &disjoint {
                rep.tick(FOUR_TERM_K4);
                let lhs = four(p, q);
                if lhs > rhs {
                    rep.violations.push(win.violation(FOUR_TERM_K4, &[("P", p), ("P'", q)], lhs.to_string(), rhs.to_string()));
                } else if lhs == rhs {
                    rep.equality_cases += 1;
                    let (fp, fq) = (win.f(p), win.f(q));
                    let zero = BigInt::from(0);
                    let shape = (fp == zero && fq == extreme) || (fq == zero && fp == extreme);
                    if !shape {
                        rep.violations.push(win.violation(
                            "four-term-bound-k4 equality shape",
                            &[("P", p), ("P'", q)],
                            format!("f_P = {fp}, f_P' = {fq}"),
                            format!("one of them 0, the other {extreme}"),
                        ));
                    }
                }
            }
        }
    }
    if base(rep, FIVE_WINDOW) {
        if w != 5 {
            rep.skip(FIVE_WINDOW, "window size not 5");
        } else if n <= 2 * k {
            rep.skip(FIVE_WINDOW, "n below threshold");
        } else {
            let rhs = b(n - 5, k - 2) + b(n - 5, k - 3);
            for &(p, q) in &disjoint {
                rep.tick(FIVE_WINDOW);
                let lhs = four(p, q);
                if lhs > rhs {
                    rep.violations.push(win.violation(FIVE_WINDOW, &[("P", p), ("P'", q)], lhs.to_string(), rhs.to_string()));
                }
            }
        }
    }

    // α(A) + α(B) <= 1 for disjoint nonempty A, B inside the window
    if !intersecting {
        rep.skip(ALPHA_SUM, "family is not intersecting");
        return;
    }
    let subsets: Vec<Set> = (1..=win.u.len()).flat_map(|s| subsets_of(win.u, s)).collect();
    let one = BigRational::from_integer(BigInt::from(1));
    for (i, &a) in subsets.iter().enumerate() {
        for &c in &subsets[i + 1..] {
            if a.intersects(c) {
                continue;
            }
            if n < 2 * k - a.len() as i64 - c.len() as i64 + w {
                rep.skip(ALPHA_SUM, "n below threshold");
                continue;
            }
            let (Some(x), Some(y)) = (win.t.alpha(a).value().cloned(), win.t.alpha(c).value().cloned()) else {
                rep.skip(ALPHA_SUM, "alpha undefined");
                continue;
            };
            rep.tick(ALPHA_SUM);
            let s = x + y;
            if s > one {
                rep.violations.push(win.violation(ALPHA_SUM, &[("A", a), ("B", c)], s.to_string(), "1".into()));
            }
        }
    }
}

fn subsets_of(u: Set, size: usize) -> Vec<Set> {
    let elems: Vec<usize> = u.elems().collect();
    elems
        .into_iter()
        .combinations(size)
        .map(|c| Set::from_elems(c).expect("elements come from a valid set"))
        .collect()
}

fn two_subsets(u: Set) -> Vec<Set> {
    subsets_of(u, 2)
}

/// All windows of the given size meeting every member in at least 2 points.
pub fn hypothesis_windows(f: &UniformFamily, size: usize) -> Vec<Set> {
    if size > f.n() {
        return Vec::new();
    }
    ksets(f.n(), size)
        .filter(|u| f.sets().all(|s| s.inter(*u).len() >= 2))
        .collect()
}

/// The fixed windows `[4]`, `[5]`, `[6]` together with every hypothesis
/// window of size 5 and 6.
pub fn default_windows(f: &UniformFamily) -> Vec<Set> {
    let mut w: Vec<Set> = (4..=6.min(f.n())).map(Set::ground).collect();
    for size in [5, 6] {
        w.extend(hypothesis_windows(f, size));
    }
    w.sort_unstable();
    w.dedup();
    w
}

/// Run [`trace_bound_check`] on each family over its default windows.
pub fn trace_bounds_certificate(families: &[UniformFamily], exec: Exec) -> Result<Certificate> {
    let start = Instant::now();
    let reports = exec.map(families, |f| trace_bound_check(f, &default_windows(f)));
    let mut total = TraceReport::default();
    for (i, r) in reports.into_iter().enumerate() {
        let mut r = r?;
        for v in &mut r.violations {
            v["family"] = json!(i);
        }
        total.merge(r);
    }
    let (n, k) = families.first().map_or((0, 0), |f| (f.n(), f.k()));
    let params = json!({
        "n": n,
        "k": k,
        "families": families.len(),
        "windows": total.windows,
        "applied": total.applied,
        "skipped": total.skipped,
        "equality_cases": total.equality_cases,
    });
    Ok(Certificate::new(
        "TRACE-BOUNDS",
        "window bounds on f_P, f_P + f_P', four-term sums and alpha(A) + alpha(B) hold wherever their hypotheses do",
        params,
        total.violations,
        start.elapsed(),
    ))
}

//! Exact maximum intersecting families under covering-number and degree
//! constraints, for ground sets small enough that all k-sets fit in a
//! 256-bit index set.

mod bits;
mod canonical;
mod engine;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde_json::json;

pub use canonical::{canonical_form, CanonicalForm};
use engine::{Limits, Mode, Outcome, Problem};

use crate::bounds::Certificate;
use crate::covers::tau;
use crate::error::{Error, Result};
use crate::exact::binom_u64;
use crate::family::{is_intersecting, max_degree, Set, UniformFamily};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub time: Duration,
    /// Optional cap on visited nodes, mainly for tests.
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn time(time: Duration) -> Budget {
        Budget { time, nodes: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::time(Duration::from_secs(600))
    }
}

/// How the search space is split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Branch on k-sets, with the first member fixed to `[k]`.
    KSet,
    /// Case split on the covering number. Either `τ = r`, and up to
    /// relabelling `[r]` is a cover, so only k-sets meeting `[r]` are
    /// considered; or `τ ≥ r + 1`, searched over all k-sets.
    #[default]
    Seeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedOptimal,
    TimeboxedLowerBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvedOptimal => "proved-optimal",
            Status::TimeboxedLowerBound => "timeboxed-lower-bound",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    pub strategy: Strategy,
    pub exec: Exec,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: usize,
    pub witness: UniformFamily,
    pub status: Status,
    pub nodes: u64,
    pub elapsed: Duration,
    pub budget: Budget,
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < 2 * k {
        return Err(Error::Precondition(format!("needs n >= 2k >= 2, got n={n}, k={k}")));
    }
    Ok(())
}

/// One exhaustive subsearch: a universe, its constraints and a root.
struct Case {
    prob: Problem,
    first: Option<usize>,
}

fn cases(n: usize, k: usize, r: usize, cap: Option<usize>, strategy: Strategy) -> Result<Vec<Case>> {
    let plain = || -> Result<Case> {
        let prob = Problem::new(n, k, |_| true, r, cap)?;
        Ok(Case { prob, first: Some(0) })
    };
    if strategy == Strategy::KSet || r < 2 {
        return Ok(vec![plain()?]);
    }
    let seed = Set::interval(1, r);
    let mut out = vec![Case {
        prob: Problem::new(n, k, |s| s.intersects(seed), r, cap)?,
        first: None,
    }];
    if r < k {
        // τ ≥ r + 1
        let prob = Problem::new(n, k, |_| true, r + 1, cap)?;
        out.push(Case { prob, first: Some(0) });
    }
    Ok(out)
}

struct Run {
    value: usize,
    witness: UniformFamily,
    found: Vec<UniformFamily>,
    complete: bool,
    nodes: u64,
    elapsed: Duration,
}

fn run_cases(n: usize, k: usize, cases: &[Case], mode: Mode, opts: &SearchOptions) -> Run {
    let start = Instant::now();
    let limits = Limits::new(start + opts.budget.time, opts.budget.nodes);
    let mut best = 0;
    let mut witness = UniformFamily::empty(n, k).expect("n >= 2k");
    let mut found = Vec::new();
    for case in cases {
        let mode = match mode {
            Mode::Optimize { .. } => Mode::Optimize { floor: best },
            m => m,
        };
        let root = case.prob.root_with(case.first);
        let Outcome { best: b, witness: w, found: f } = engine::run(&case.prob, root, mode, &limits, opts.exec);
        if b > best {
            best = b;
            witness = case.prob.family(&w.expect("a value comes with a witness"));
        }
        found.extend(f.iter().map(|bits| case.prob.family(bits)));
    }
    Run {
        value: best,
        witness,
        found,
        complete: !limits.stop.load(std::sync::atomic::Ordering::Relaxed),
        nodes: limits.nodes.load(std::sync::atomic::Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

/// Independent re-check of a returned witness.
fn verify(res: &SearchResult, r: usize, cap: Option<usize>) -> Result<()> {
    let w = &res.witness;
    let bad = |what: &str| Err(Error::Internal(format!("search witness fails re-check: {what}")));
    if w.len() != res.value {
        return bad("size");
    }
    if w.is_empty() {
        return Ok(());
    }
    if !is_intersecting(w) {
        return bad("not intersecting");
    }
    if tau(w)? < r {
        return bad("covering number too small");
    }
    if let Some(c) = cap {
        if max_degree(w)?.1 > c {
            return bad("degree cap exceeded");
        }
    }
    Ok(())
}

fn search(n: usize, k: usize, r: usize, cap: Option<usize>, opts: &SearchOptions) -> Result<SearchResult> {
    let cs = cases(n, k, r, cap, opts.strategy)?;
    let run = run_cases(n, k, &cs, Mode::Optimize { floor: 0 }, opts);
    let res = SearchResult {
        value: run.value,
        witness: run.witness,
        status: if run.complete { Status::ProvedOptimal } else { Status::TimeboxedLowerBound },
        nodes: run.nodes,
        elapsed: run.elapsed,
        budget: opts.budget,
    };
    verify(&res, r, cap)?;
    log::info!("m({n},{k},{r}) search: value {} ({}), {} nodes", res.value, res.status.as_str(), res.nodes);
    Ok(res)
}

/// Largest intersecting family of k-subsets of `[n]` with covering number at
/// least `r_min`.
pub fn max_intersecting(n: usize, k: usize, r_min: usize, opts: &SearchOptions) -> Result<SearchResult> {
    check_params(n, k)?;
    if r_min == 0 || r_min > k {
        return Err(Error::Precondition(format!("r_min must lie in 1..={k}, got {r_min}")));
    }
    search(n, k, r_min, None, opts)
}

/// Maximum degree allowed and the resulting size bound for
/// [`max_intersecting_degcap`]:
/// `C(n-1,k-1) - C(n-l-1,k-1)` and that plus `C(n-l-1,k-l)`.
pub fn degcap_bounds(n: usize, k: usize, l: usize) -> Result<(u64, u64)> {
    if l < 2 || l > k {
        return Err(Error::Precondition(format!("l must lie in 2..={k}, got {l}")));
    }
    if n <= 2 * k {
        return Err(Error::Precondition(format!("needs n > 2k, got n={n}, k={k}")));
    }
    let cap = binom_u64(n - 1, k - 1) - binom_u64(n - l - 1, k - 1);
    Ok((cap, cap + binom_u64(n - l - 1, k - l)))
}

/// Largest intersecting family whose maximum degree is at most
/// `C(n-1,k-1) - C(n-l-1,k-1)`.
pub fn max_intersecting_degcap(n: usize, k: usize, l: usize, opts: &SearchOptions) -> Result<SearchResult> {
    let (cap, _) = degcap_bounds(n, k, l)?;
    search(n, k, 1, Some(cap as usize), opts)
}

#[derive(Clone, Debug)]
pub struct Optima {
    pub value: usize,
    /// Pairwise non-isomorphic optima, sorted.
    pub forms: Vec<CanonicalForm>,
    /// False when the budget ran out; the list may then be partial.
    pub complete: bool,
    pub elapsed: Duration,
}

/// Every optimum of [`max_intersecting`] up to isomorphism. Runs the
/// optimisation first, then collects all solutions of that size.
pub fn enumerate_optima(n: usize, k: usize, r_min: usize, opts: &SearchOptions) -> Result<Optima> {
    let start = Instant::now();
    let best = max_intersecting(n, k, r_min, opts)?;
    if best.status != Status::ProvedOptimal {
        return Err(Error::Precondition("optimum not proved within the budget".into()));
    }
    let left = opts.budget.time.saturating_sub(start.elapsed());
    let opts = SearchOptions {
        budget: Budget { time: left, ..opts.budget },
        ..*opts
    };
    let cs = cases(n, k, r_min, None, opts.strategy)?;
    let run = run_cases(n, k, &cs, Mode::Enumerate { target: best.value }, &opts);
    let forms: BTreeSet<CanonicalForm> = opts.exec.map(&run.found, canonical_form).into_iter().collect();
    Ok(Optima {
        value: best.value,
        forms: forms.into_iter().collect(),
        complete: run.complete,
        elapsed: start.elapsed(),
    })
}

/// Search outcome as a certificate. It passes when the search finished and,
/// if `expected` is given, the value matches it.
pub fn oracle_certificate(n: usize, k: usize, r: usize, res: &SearchResult, expected: Option<usize>) -> Certificate {
    let mut witnesses = Vec::new();
    if res.status != Status::ProvedOptimal {
        witnesses.push(json!({"reason": "budget exhausted", "lower_bound": res.value}));
    }
    if let Some(e) = expected {
        if e != res.value {
            witnesses.push(json!({"reason": "value differs from expected", "value": res.value, "expected": e}));
        }
    }
    let members: Vec<Vec<usize>> = res.witness.sets().map(|s| s.elems().collect()).collect();
    Certificate::new(
        "M-ORACLE",
        format!("max |F| over intersecting F in C([{n}],{k}) with tau(F) >= {r}"),
        json!({
            "n": n, "k": k, "r": r,
            "value": res.value,
            "expected": expected,
            "status": res.status.as_str(),
            "nodes": res.nodes,
            "witness": members,
        }),
        witnesses,
        res.elapsed,
    )
}

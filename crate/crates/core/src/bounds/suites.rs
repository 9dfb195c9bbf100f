//! Named sweeps of exact identities and inequalities over parameter grids.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::certificate::Certificate;
use crate::constructions::{build_g, g_size_formula};
use crate::covers::tau;
use crate::error::{Error, Result};
use crate::exact;
use crate::family::{is_intersecting, ksets, Set, UniformFamily};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    /// Direct count of `G(n,k)` against its closed form.
    GSize,
    /// The closed form as a polynomial in `n` for `k = 4, 5, 6`.
    GPoly,
    /// The closed form at `n = 2k`.
    GAtTwoK,
    /// Full stars.
    Ekr,
    /// Hilton–Milner families.
    HiltonMilner,
    /// The gap function `f(k)` and its recurrence.
    GapRecurrence,
    /// Bound when the 3-covers are all triples of a 4-set.
    FourSetBound,
    /// Intermediate binomial steps behind the four-term window bound.
    KeySteps,
    /// The degree-capped comparison at `n = 2k + 1`.
    GapFill,
    /// Counting chain when the 3-covers contain a copy of `R`.
    RCase,
    /// Counting chain when the 3-covers contain `S` but no `R`.
    SCase,
    /// Arithmetic of the `n = 9, k = 4` endgame.
    Endgame94,
}

impl SuiteId {
    pub const ALL: [SuiteId; 12] = [
        SuiteId::GSize,
        SuiteId::GPoly,
        SuiteId::GAtTwoK,
        SuiteId::Ekr,
        SuiteId::HiltonMilner,
        SuiteId::GapRecurrence,
        SuiteId::FourSetBound,
        SuiteId::KeySteps,
        SuiteId::GapFill,
        SuiteId::RCase,
        SuiteId::SCase,
        SuiteId::Endgame94,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::GSize => "ID-G-SIZE",
            SuiteId::GPoly => "ID-G-POLY",
            SuiteId::GAtTwoK => "ID-G-2K",
            SuiteId::Ekr => "ID-EKR",
            SuiteId::HiltonMilner => "ID-HM",
            SuiteId::GapRecurrence => "ID-F-REC",
            SuiteId::FourSetBound => "INEQ-PROP23",
            SuiteId::KeySteps => "INEQ-KEY-STEPS",
            SuiteId::GapFill => "INEQ-GAPFILL",
            SuiteId::RCase => "INEQ-CASE1",
            SuiteId::SCase => "INEQ-CASE2",
            SuiteId::Endgame94 => "ID-ENDGAME-94",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            SuiteId::GSize => "|G(n,k)| = C(n-1,k-1) - C(n-k,k-1) - C(n-k-1,k-1) + C(n-2k,k-1) + C(n-k-2,k-3) + 3 by direct count",
            SuiteId::GPoly => "|G(n,4)| = 13n-69 (n>=9); |G(n,5)| = (21n^2-295n+1102)/2 (n>=11); |G(n,6)| = (31n^3-792n^2+7157n-22632)/6 (n>=13)",
            SuiteId::GAtTwoK => "|G(2k,k)| = C(2k-1,k-1) = C(2k,k)/2",
            SuiteId::Ekr => "a full star has C(n-1,k-1) members and is intersecting; C(n-1,k-1) >= C(n-1,k-1) - C(n-k-1,k-1) + 1",
            SuiteId::HiltonMilner => "the Hilton-Milner family has C(n-1,k-1) - C(n-k-1,k-1) + 1 members, is intersecting with covering number 2, and is at least |G(n,k)|",
            SuiteId::GapRecurrence => "f(k) = C(2k-3,k-1) - C(2k-3,k-3) - 3k + 4: f(5) = 3, f(k+1) - f(k) = C(2k-3,k-1) - C(2k-3,k-4) - 3 = 6(k-1)/(k(k+1)) C(2k-3,k-1) - 3 > 0, f(k) >= 0",
            SuiteId::FourSetBound => "3(C(n-4,k-2) - C(n-k-2,k-2) + 1) + 4C(n-4,k-3) + C(n-4,k-4) < |G(n,k)| for n > 2k",
            SuiteId::KeySteps => "C(n-u,k-2) - C(n-k-u+2,k-2) >= C(n-u-1,k-3) + C(n-u-2,k-3) and C(n-u-1,k-u+2) >= C(n-u-2,k-4) for u in {5,6}, n >= 2k+u-4",
            SuiteId::GapFill => "at n = 2k+1: |G(n,k)| = C(n-1,k-1) - 3k + 4 and C(n-1,k-1) - C(n-4,k-1) + C(n-4,k-3) < |G(n,k)|",
            SuiteId::RCase => "counting chain with an R-copy among the 3-covers stays below |G(n,k)| for k = 4, 5, 6",
            SuiteId::SCase => "counting chain with an S-copy and no R-copy among the 3-covers stays below |G(n,k)| for k = 4, 5, 6",
            SuiteId::Endgame94 => "n = 9, k = 4: 3*5 + C(6,4) - 6 = 24, 24 + 4*9 - 12 = 48 = |G(9,4)|, 3*6 + C(6,4) - 6 = 27, 27 + 20 = 47 < 48, 24 + 22 = 46 < 48",
        }
    }

    /// Default `(k_min, k_max)` of the sweep.
    fn default_k(self) -> (usize, usize) {
        match self {
            SuiteId::GSize => (3, 8),
            SuiteId::GPoly | SuiteId::RCase | SuiteId::SCase => (4, 6),
            SuiteId::GAtTwoK => (3, 12),
            SuiteId::Ekr | SuiteId::HiltonMilner => (2, 6),
            SuiteId::GapRecurrence | SuiteId::GapFill => (5, 200),
            SuiteId::FourSetBound | SuiteId::KeySteps => (4, 12),
            SuiteId::Endgame94 => (4, 4),
        }
    }

    /// Default largest `n` for a given `k`.
    fn default_n_max(self, k: usize) -> usize {
        match self {
            SuiteId::GSize => 2 * k + 12,
            SuiteId::GPoly => 200,
            SuiteId::Ekr | SuiteId::HiltonMilner => 2 * k + 6,
            _ => 2 * k + 60,
        }
    }

    fn points(self, range: &SweepRange) -> Result<Vec<Point>> {
        let (dk0, dk1) = self.default_k();
        let k_lo = range.k_min.unwrap_or(dk0);
        let k_hi = range.k_max.unwrap_or(dk1);
        let n_hi = |k: usize| range.n_max.unwrap_or_else(|| self.default_n_max(k));
        let mut pts = Vec::new();
        let mut span = |k: usize, lo: usize, hi: usize, u: usize| {
            for n in lo..=hi {
                pts.push(Point { k, n, u });
            }
        };
        for k in k_lo..=k_hi {
            match self {
                SuiteId::GSize => {
                    if k >= 3 {
                        span(k, 2 * k, n_hi(k).min(crate::family::MAX_N), 0)
                    }
                }
                SuiteId::GPoly | SuiteId::RCase | SuiteId::SCase => {
                    if (4..=6).contains(&k) {
                        let lo = match self {
                            SuiteId::SCase if k == 4 => 9,
                            SuiteId::SCase => 2 * k + 2,
                            _ => 2 * k + 1,
                        };
                        span(k, lo, n_hi(k), 0)
                    }
                }
                SuiteId::GAtTwoK => {
                    if k >= 3 {
                        span(k, 2 * k, 2 * k, 0)
                    }
                }
                SuiteId::Ekr => {
                    if k >= 1 {
                        span(k, 2 * k, n_hi(k).min(crate::family::MAX_N), 0)
                    }
                }
                SuiteId::HiltonMilner => {
                    if k >= 2 {
                        span(k, 2 * k + 1, n_hi(k).min(crate::family::MAX_N), 0)
                    }
                }
                SuiteId::GapRecurrence | SuiteId::GapFill => {
                    if k >= 5 {
                        span(k, 2 * k + 1, 2 * k + 1, 0)
                    }
                }
                SuiteId::FourSetBound => {
                    if k >= 3 {
                        span(k, 2 * k + 1, n_hi(k), 0)
                    }
                }
                SuiteId::KeySteps => {
                    if k >= 4 {
                        for u in [5, 6] {
                            span(k, 2 * k + u - 4, n_hi(k), u)
                        }
                    }
                }
                SuiteId::Endgame94 => {
                    if k == 4 {
                        span(4, 9, 9, 0)
                    }
                }
            }
        }
        if matches!(self, SuiteId::GSize | SuiteId::Ekr | SuiteId::HiltonMilner) {
            if let Some(p) = pts.iter().find(|p| exact::binom_u64(p.n, p.k) > DIRECT_COUNT_LIMIT) {
                return Err(Error::RangeTooLarge {
                    what: format!("direct enumeration of C({},{})", p.n, p.k),
                    estimate: exact::binom_u64(p.n, p.k).to_string(),
                });
            }
        }
        Ok(pts)
    }

    fn checks(self, p: Point) -> Result<Vec<Check>> {
        let (k, n) = (p.k as i64, p.n as i64);
        let mut c = Checks::default();
        match self {
            SuiteId::GSize => {
                c.push("|G(n,k)| = formula", int(build_g(p.n, p.k)?.len()), Rel::Eq, g(p)?);
            }
            SuiteId::GPoly => {
                let poly = match k {
                    4 => poly(n, &[13, -69], 1),
                    5 => poly(n, &[21, -295, 1102], 2),
                    _ => poly(n, &[31, -792, 7157, -22632], 6),
                };
                c.push("formula = polynomial", g(p)?, Rel::Eq, poly);
            }
            SuiteId::GAtTwoK => {
                c.push("|G(2k,k)| = C(2k-1,k-1)", g(p)?, Rel::Eq, b(2 * k - 1, k - 1)?);
                c.push("C(2k-1,k-1) = C(2k,k)/2", b(2 * k - 1, k - 1)?, Rel::Eq, b(2 * k, k)? / r(2));
            }
            SuiteId::Ekr => {
                let star = UniformFamily::full_star(p.n, p.k, 1)?;
                c.push("|star| = C(n-1,k-1)", int(star.len()), Rel::Eq, b(n - 1, k - 1)?);
                c.push("star is intersecting", flag(is_intersecting(&star)), Rel::Eq, r(1));
                c.push("EKR >= HM", b(n - 1, k - 1)?, Rel::Ge, hm(n, k)?);
            }
            SuiteId::HiltonMilner => {
                let h = hm_family(p.n, p.k)?;
                c.push("|HM| = formula", int(h.len()), Rel::Eq, hm(n, k)?);
                c.push("HM is intersecting", flag(is_intersecting(&h)), Rel::Eq, r(1));
                c.push("tau(HM) = 2", int(tau(&h)?), Rel::Eq, r(2));
                if k >= 3 {
                    c.push("HM >= |G(n,k)|", hm(n, k)?, Rel::Ge, g(p)?);
                }
            }
            SuiteId::GapRecurrence => {
                let step = b(2 * k - 3, k - 1)? - b(2 * k - 3, k - 4)? - r(3);
                let (fk, fk1) = (gap_f(k)?, gap_f(k + 1)?);
                if k == 5 {
                    c.push("f(5) = 3", fk.clone(), Rel::Eq, r(3));
                }
                c.push("f(k+1) - f(k) = C(2k-3,k-1) - C(2k-3,k-4) - 3", &fk1 - &fk, Rel::Eq, step.clone());
                let closed = BigRational::new(BigInt::from(6 * (k - 1)), BigInt::from(k * (k + 1))) * b(2 * k - 3, k - 1)? - r(3);
                c.push("step = 6(k-1)/(k(k+1)) C(2k-3,k-1) - 3", step.clone(), Rel::Eq, closed);
                c.push("step > 0", step, Rel::Gt, r(0));
                c.push("f(k) by recurrence from f(5) = direct", gap_f_by_recurrence(k)?, Rel::Eq, fk.clone());
                c.push("f(k) >= 0", fk, Rel::Ge, r(0));
            }
            SuiteId::FourSetBound => {
                let lhs = r(3) * (b(n - 4, k - 2)? - b(n - k - 2, k - 2)? + r(1)) + r(4) * b(n - 4, k - 3)? + b(n - 4, k - 4)?;
                c.push("four-set bound < |G(n,k)|", lhs, Rel::Lt, g(p)?);
            }
            SuiteId::KeySteps => {
                let u = p.u as i64;
                let head = b(n - u, k - 2)? - b(n - k - u + 2, k - 2)?;
                c.push(
                    "C(n-u,k-2) - C(n-k-u+2,k-2) >= C(n-u-1,k-3) + C(n-u-2,k-3)",
                    head.clone(),
                    Rel::Ge,
                    b(n - u - 1, k - 3)? + b(n - u - 2, k - 3)?,
                );
                c.push("C(n-u-1,k-u+2) >= C(n-u-2,k-4)", b(n - u - 1, k - u + 2)?, Rel::Ge, b(n - u - 2, k - 4)?);
                c.push(
                    "four-term bound >= 2C(n-u-1,k-3) + 2C(n-u-1,k-u+1)",
                    head + b(n - u, k - u + 2)? + b(n - u - 1, k - u + 1)?,
                    Rel::Ge,
                    r(2) * b(n - u - 1, k - 3)? + r(2) * b(n - u - 1, k - u + 1)?,
                );
                c.push(
                    "reduced form equals C(n-u-1,k-u+2) - C(n-u-2,k-4)",
                    b(n - u, k - u + 2)? + b(n - u - 2, k - 3)? - b(n - u - 1, k - 3)? - b(n - u - 1, k - u + 1)?,
                    Rel::Eq,
                    b(n - u - 1, k - u + 2)? - b(n - u - 2, k - 4)?,
                );
            }
            SuiteId::GapFill => {
                let top = b(n - 1, k - 1)?;
                c.push("|G(2k+1,k)| = C(n-1,k-1) - 3k + 4", g(p)?, Rel::Eq, &top - r(3 * k - 4));
                let capped = &top - b(n - 4, k - 1)? + b(n - 4, k - 3)?;
                c.push(
                    "capped bound = C(n-1,k-1) - C(2k-3,k-1) + C(2k-3,k-3)",
                    capped.clone(),
                    Rel::Eq,
                    &top - b(2 * k - 3, k - 1)? + b(2 * k - 3, k - 3)?,
                );
                c.push("|G| - capped bound = f(k)", g(p)? - &capped, Rel::Eq, gap_f(k)?);
                c.push("capped bound < |G(2k+1,k)|", capped, Rel::Lt, g(p)?);
            }
            SuiteId::RCase => r_case(&mut c, p)?,
            SuiteId::SCase => s_case(&mut c, p)?,
            SuiteId::Endgame94 => endgame(&mut c)?,
        }
        Ok(c.0)
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteId> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Largest `C(n,k)` that suites enumerating families will touch.
const DIRECT_COUNT_LIMIT: u64 = 50_000_000;

/// Optional overrides of a suite's default grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepRange {
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub n_max: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Point {
    k: usize,
    n: usize,
    /// Window size, for suites that sweep it.
    u: usize,
}

impl Point {
    fn to_json(self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("k".into(), json!(self.k));
        m.insert("n".into(), json!(self.n));
        if self.u > 0 {
            m.insert("u".into(), json!(self.u));
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn holds(self, a: &BigRational, b: &BigRational) -> bool {
        match self {
            Rel::Eq => a == b,
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Gt => a > b,
            Rel::Ge => a >= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug)]
struct Check {
    label: &'static str,
    lhs: BigRational,
    rel: Rel,
    rhs: BigRational,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, label: &'static str, lhs: BigRational, rel: Rel, rhs: BigRational) {
        self.0.push(Check { label, lhs, rel, rhs });
    }
}

fn r(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn flag(x: bool) -> BigRational {
    r(x as i64)
}

fn b(a: i64, c: i64) -> Result<BigRational> {
    Ok(BigRational::from_integer(exact::binom(a, c)?))
}

fn g(p: Point) -> Result<BigRational> {
    Ok(BigRational::from_integer(g_size_formula(p.n, p.k)?))
}

/// `(c_0 n^d + ... + c_d) / den`.
fn poly(n: i64, coeffs: &[i64], den: i64) -> BigRational {
    let num = coeffs.iter().fold(BigInt::from(0), |acc, &c| acc * n + c);
    BigRational::new(num, BigInt::from(den))
}

fn hm(n: i64, k: i64) -> Result<BigRational> {
    Ok(b(n - 1, k - 1)? - b(n - k - 1, k - 1)? + r(1))
}

/// `{[2,k+1]}` together with every k-set through 1 that meets `[2,k+1]`.
fn hm_family(n: usize, k: usize) -> Result<UniformFamily> {
    let block = Set::interval(2, k + 1);
    let through = ksets(n, k).filter(|s| s.contains(1) && s.intersects(block));
    UniformFamily::new(n, k, through.chain([block]))
}

fn gap_f(k: i64) -> Result<BigRational> {
    Ok(b(2 * k - 3, k - 1)? - b(2 * k - 3, k - 3)? - r(3 * k) + r(4))
}

fn gap_f_by_recurrence(k: i64) -> Result<BigRational> {
    let mut f = r(3);
    for j in 5..k {
        f += b(2 * j - 3, j - 1)? - b(2 * j - 3, j - 4)? - r(3);
    }
    Ok(f)
}

fn r_case(c: &mut Checks, p: Point) -> Result<()> {
    let (k, n) = (p.k as i64, p.n as i64);
    let gp = g(p)?;
    c.push(
        "C(n-6,k-3) + C(n-6,k-4) = C(n-5,k-3)",
        b(n - 6, k - 3)? + b(n - 6, k - 4)?,
        Rel::Eq,
        b(n - 5, k - 3)?,
    );
    let key5 = b(n - 5, k - 2)? - b(n - k - 3, k - 2)? + b(n - 5, k - 3)? + b(n - 6, k - 4)?;
    c.push(
        "four-term bound at u=5 = C(n-4,k-2) - C(n-k-3,k-2) + C(n-6,k-4)",
        key5.clone(),
        Rel::Eq,
        b(n - 4, k - 2)? - b(n - k - 3, k - 2)? + b(n - 6, k - 4)?,
    );
    let head = r(3) * (b(n - 4, k - 2)? - b(n - k - 3, k - 2)?);
    let f23 = r(3) * key5 + b(n - 5, k - 3)? + r(3) * b(n - 5, k - 3)?;
    c.push(
        "layers 2,3 = 3(C(n-4,k-2) - C(n-k-3,k-2)) + 3C(n-6,k-4) + 4C(n-5,k-3)",
        f23.clone(),
        Rel::Eq,
        &head + r(3) * b(n - 6, k - 4)? + r(4) * b(n - 5, k - 3)?,
    );
    let total = f23 + r(5) * b(n - 5, k - 4)? + b(n - 5, k - 5)?;
    c.push(
        "total = 3(..) + 4C(n-4,k-3) + C(n-5,k-4) + 3C(n-6,k-4) + C(n-5,k-5)",
        total.clone(),
        Rel::Eq,
        &head + r(4) * b(n - 4, k - 3)? + b(n - 5, k - 4)? + r(3) * b(n - 6, k - 4)? + b(n - 5, k - 5)?,
    );
    let alt = r(3) * (b(n - 5, k - 2)? + b(n - 5, k - 3)?) + r(4) * b(n - 5, k - 3)? + r(5) * b(n - 5, k - 4)? + b(n - 5, k - 5)?;
    let alt_form = r(3) * b(n - 5, k - 2)? + r(7) * b(n - 5, k - 3)? + r(5) * b(n - 5, k - 4)? + b(n - 5, k - 5)?;
    match k {
        4 => {
            c.push("C(n-5,1) = n-5", b(n - 5, 1)?, Rel::Eq, r(n - 5));
            c.push("C(n-5,2) - C(n-7,2) + 1 = 2(n-6)", b(n - 5, 2)? - b(n - 7, 2)? + r(1), Rel::Eq, r(2 * (n - 6)));
            c.push("(n-5) + (n-6) + (n-7) = 3(n-6)", r(3 * n - 18), Rel::Eq, r(3 * (n - 6)));
            let key_k4 = b(n - 5, 2)? - b(n - 7, 2)? + b(n - 5, 1)? + b(n - 6, 0)?;
            c.push("3(n-6) < four-term bound at k=4", r(3 * (n - 6)), Rel::Lt, key_k4);
            let chain = r(9 * (n - 6)) + r(n - 5) + (b(5, 3)? - r(7)) * r(n - 5);
            c.push("3*3(n-6) + (n-5) + (C(5,3)-6-1)(n-5) = 13n-74", chain.clone(), Rel::Eq, r(13 * n - 74));
            c.push("13n-74 + C(5,4) = |G(n,4)|", chain + b(5, 4)?, Rel::Eq, gp);
        }
        5 => {
            if n >= 13 {
                let q = poly(n, &[16, -196, 636], 2);
                c.push("total = (16n^2-196n+636)/2", total, Rel::Eq, q.clone());
                c.push("(16n^2-196n+636)/2 < |G(n,5)|", q, Rel::Lt, gp);
            } else {
                let q = poly(n, &[1, -11, 40, -48], 2);
                c.push("alternate total = 3C(n-5,k-2) + 7C(n-5,k-3) + 5C(n-5,k-4) + C(n-5,k-5)", alt, Rel::Eq, alt_form.clone());
                c.push("alternate total = (n^3-11n^2+40n-48)/2", alt_form, Rel::Eq, q.clone());
                c.push("(n^3-11n^2+40n-48)/2 < |G(n,5)|", q, Rel::Lt, gp);
            }
        }
        _ => {
            if n >= 14 {
                let q = poly(n, &[19, -408, 3107, -8322], 6);
                c.push("total = (19n^3-408n^2+3107n-8322)/6", total, Rel::Eq, q.clone());
                c.push("(19n^3-408n^2+3107n-8322)/6 < |G(n,6)|", q, Rel::Lt, gp);
            } else {
                let q = poly(n, &[3, -50, 309, -838, 840], 24);
                c.push("alternate total = 3C(n-5,k-2) + 7C(n-5,k-3) + 5C(n-5,k-4) + C(n-5,k-5)", alt, Rel::Eq, alt_form.clone());
                c.push("alternate total = (3n^4-50n^3+309n^2-838n+840)/24", alt_form, Rel::Eq, q.clone());
                c.push("(3n^4-50n^3+309n^2-838n+840)/24 < |G(n,6)|", q, Rel::Lt, gp);
            }
        }
    }
    Ok(())
}

fn s_case(c: &mut Checks, p: Point) -> Result<()> {
    let (k, n) = (p.k as i64, p.n as i64);
    let gp = g(p)?;
    if k == 4 {
        for t in 0..=4 {
            let layer3 = r(t * (n - 6) + (10 - t) * 2);
            c.push("|T|(n-6) + (10-|T|)2 = |T|(n-8) + 20", layer3.clone(), Rel::Eq, r(t * (n - 8) + 20));
            c.push("|T|(n-8) + 20 <= 4n-12 for |T| <= 4", layer3, Rel::Le, r(4 * n - 12));
        }
        if n < 10 {
            return Ok(());
        }
    }
    let key6 = b(n - 6, k - 2)? - b(n - k - 4, k - 2)? + b(n - 6, k - 4)? + b(n - 7, k - 5)?;
    let head = r(3) * (b(n - 6, k - 2)? - b(n - k - 4, k - 2)?);
    let f24 = r(3) * key6 + r(9) * b(n - 6, k - 4)?;
    c.push(
        "layers 2,4 = 3(C(n-6,k-2) - C(n-k-4,k-2)) + 12C(n-6,k-4) + 3C(n-7,k-5)",
        f24.clone(),
        Rel::Eq,
        &head + r(12) * b(n - 6, k - 4)? + r(3) * b(n - 7, k - 5)?,
    );
    c.push("C(6,3)/2 = 10", b(6, 3)? / r(2), Rel::Eq, r(10));
    let total = &f24 + r(10) * b(n - 6, k - 3)? + r(6) * b(n - 6, k - 5)? + b(n - 6, k - 6)?;
    c.push(
        "total = 3(..) + C(n-3,k-3) + 3C(n-4,k-3) + 6C(n-5,k-3) - 3C(n-7,k-4)",
        total.clone(),
        Rel::Eq,
        &head + b(n - 3, k - 3)? + r(3) * b(n - 4, k - 3)? + r(6) * b(n - 5, k - 3)? - r(3) * b(n - 7, k - 4)?,
    );
    match k {
        4 => {
            c.push("layers 2,4 = 6n-33", f24, Rel::Eq, r(6 * n - 33));
            c.push("(6n-33) + (4n-12) = 10n-45", r(6 * n - 33 + 4 * n - 12), Rel::Eq, r(10 * n - 45));
            c.push("10n-45 < |G(n,4)|", r(10 * n - 45), Rel::Lt, gp);
        }
        5 => {
            let q = poly(n, &[19, -259, 948], 2);
            c.push("total = (19n^2-259n+948)/2", total, Rel::Eq, q.clone());
            c.push("(19n^2-259n+948)/2 < |G(n,5)|", q, Rel::Lt, gp);
        }
        _ => {
            let q = poly(n, &[22, -516, 4328, -12786], 6);
            c.push("total = (22n^3-516n^2+4328n-12786)/6", total, Rel::Eq, q.clone());
            c.push("(22n^3-516n^2+4328n-12786)/6 < |G(n,6)|", q, Rel::Lt, gp);
        }
    }
    Ok(())
}

fn endgame(c: &mut Checks) -> Result<()> {
    let n = 9;
    let g94 = BigRational::from_integer(g_size_formula(9, 4)?);
    let c64 = b(6, 4)?;
    let low = r(15) + &c64 - r(6);
    c.push("3*5 + C(6,4) - 6 = 24", low.clone(), Rel::Eq, r(24));
    c.push("24 + 4*9 - 12 = 48", &low + r(4 * n - 12), Rel::Eq, r(48));
    c.push("48 = |G(9,4)|", r(48), Rel::Eq, g94.clone());
    let high = r(18) + &c64 - r(6);
    c.push("3*6 + C(6,4) - 6 = 27", high.clone(), Rel::Eq, r(27));
    for t in 0..=4 {
        c.push("|T|(n-6) + (8-|T|)2 = |T|(n-8) + 16", r(t * (n - 6) + (8 - t) * 2), Rel::Eq, r(t * (n - 8) + 16));
        c.push("|T|(n-8) + 16 <= 4n-16 = 20", r(t * (n - 8) + 16), Rel::Le, r(4 * n - 16));
        c.push("|T|(n-6) + (10-|T|)2 - 2 <= 22", r(t * (n - 6) + (10 - t) * 2 - 2), Rel::Le, r(22));
    }
    c.push("4n-16 = 20", r(4 * n - 16), Rel::Eq, r(20));
    c.push("27 + 20 = 47", &high + r(20), Rel::Eq, r(47));
    c.push("47 < |G(9,4)|", r(47), Rel::Lt, g94.clone());
    c.push("24 + 22 = 46 < |G(9,4)|", &low + r(22), Rel::Lt, g94);
    Ok(())
}

/// Run one suite over its grid and return the certificate.
pub fn verify_identity_suite(id: SuiteId, range: &SweepRange, exec: Exec) -> Result<Certificate> {
    let start = Instant::now();
    let pts = id.points(range)?;
    if pts.is_empty() {
        return Err(Error::Precondition(format!("{id}: the requested range contains no parameter points")));
    }
    let results = exec.map(&pts, |&p| id.checks(p));
    let mut witnesses = Vec::new();
    let mut total = 0usize;
    let mut relations = BTreeSet::new();
    for (p, res) in pts.iter().zip(results) {
        for chk in res? {
            total += 1;
            relations.insert(format!("{} [{}]", chk.label, chk.rel.symbol()));
            if !chk.rel.holds(&chk.lhs, &chk.rhs) {
                let mut w = p.to_json();
                w.insert("check".into(), json!(chk.label));
                w.insert("lhs".into(), json!(chk.lhs.to_string()));
                w.insert("relation".into(), json!(chk.rel.symbol()));
                w.insert("rhs".into(), json!(chk.rhs.to_string()));
                witnesses.push(Value::Object(w));
            }
        }
    }
    let (k_min, k_max) = (pts.iter().map(|p| p.k).min(), pts.iter().map(|p| p.k).max());
    let mut params = json!({
        "k_min": k_min,
        "k_max": k_max,
        "n_min": pts.iter().map(|p| p.n).min(),
        "n_max": pts.iter().map(|p| p.n).max(),
        "points": pts.len(),
        "checks": total,
        "relations": relations.into_iter().collect::<Vec<_>>(),
    });
    if id == SuiteId::GapRecurrence && pts.iter().any(|p| p.k == 5) {
        params["f5"] = json!(gap_f(5)?.to_string());
    }
    Ok(Certificate::new(id.as_str(), id.statement(), params, witnesses, start.elapsed()))
}

//! Value types for k-uniform families over `[n] = {1, ..., n}` and the basic
//! predicates and trace statistics built on them.
//!
//! Element `i` lives at bit `i - 1` of a `u64` mask, so `n <= 64`. Comparing
//! masks as integers is exactly colex order on sets, which is the canonical
//! member order everywhere in this crate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::binom;

pub const MAX_N: usize = 64;

/// An arbitrary subset of `[64]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Set(pub u64);

impl Set {
    pub const EMPTY: Set = Set(0);

    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> Result<Set> {
        let mut mask = 0u64;
        for e in elems {
            if e == 0 || e > MAX_N {
                return Err(Error::ElementOutOfRange { elem: e, n: MAX_N });
            }
            mask |= 1 << (e - 1);
        }
        Ok(Set(mask))
    }

    /// `[1, n]`.
    pub fn ground(n: usize) -> Set {
        Set::interval(1, n)
    }

    /// The discrete interval `[a, b]`; empty when `a > b`.
    pub fn interval(a: usize, b: usize) -> Set {
        if a > b || b == 0 {
            return Set::EMPTY;
        }
        let a = a.max(1);
        let hi = if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
        let lo = (1u64 << (a - 1)) - 1;
        Set(hi & !lo)
    }

    pub fn singleton(x: usize) -> Set {
        Set(1 << (x - 1))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x >= 1 && x <= MAX_N && self.0 >> (x - 1) & 1 == 1
    }

    #[inline]
    pub fn intersects(self, other: Set) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn is_subset(self, other: Set) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Set) -> Set {
        Set(self.0 | other.0)
    }

    #[inline]
    pub fn inter(self, other: Set) -> Set {
        Set(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: Set) -> Set {
        Set(self.0 & !other.0)
    }

    pub fn with(self, x: usize) -> Set {
        Set(self.0 | 1 << (x - 1))
    }

    pub fn max_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn min_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order.
    pub fn elems(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let e = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            Some(e)
        })
    }

    /// Apply an element map given as a 1-based table: `x -> perm[x - 1]`.
    pub fn map(self, perm: &[usize]) -> Set {
        Set(self.elems().fold(0u64, |m, e| m | 1 << (perm[e - 1] - 1)))
    }
}

impl fmt::Display for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All `k`-subsets of `[n]` in colex order (Gosper's hack).
pub fn ksets(n: usize, k: usize) -> impl Iterator<Item = Set> {
    assert!(n <= MAX_N, "n = {n} exceeds {MAX_N}");
    let done = k > n;
    let mut cur: Option<u64> = if done {
        None
    } else if k == 0 {
        Some(0)
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 {
            None
        } else {
            let low = c & c.wrapping_neg();
            let ripple = c.wrapping_add(low);
            if ripple == 0 {
                None
            } else {
                let next = (((ripple ^ c) >> 2) / low) | ripple;
                (n == 64 || next >> n == 0).then_some(next)
            }
        };
        Some(Set(c))
    })
}

/// A `k`-element subset of `[n]`. Equality and order look at the mask only.
#[derive(Clone, Copy, Debug)]
pub struct KSet {
    mask: u64,
    n: u8,
    k: u8,
}

impl KSet {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, elems: I) -> Result<KSet> {
        let set = Set::from_elems(elems)?;
        KSet::from_set(n, set)
    }

    pub fn from_set(n: usize, set: Set) -> Result<KSet> {
        check_ground(n)?;
        if let Some(m) = set.max_elem() {
            if m > n {
                return Err(Error::ElementOutOfRange { elem: m, n });
            }
        }
        Ok(KSet {
            mask: set.0,
            n: n as u8,
            k: set.len() as u8,
        })
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn set(self) -> Set {
        Set(self.mask)
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn k(self) -> usize {
        self.k as usize
    }

    pub fn elems(self) -> impl Iterator<Item = usize> {
        self.set().elems()
    }
}

impl PartialEq for KSet {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
    }
}

impl Eq for KSet {}

impl std::hash::Hash for KSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mask.hash(state)
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mask.cmp(&other.mask)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.set().fmt(f)
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::GroundSetSize(n))
    } else {
        Ok(())
    }
}

/// A duplicate-free family of `k`-subsets of `[n]`, stored in colex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniformFamily {
    n: usize,
    k: usize,
    members: Vec<KSet>,
}

impl UniformFamily {
    /// Validates cardinality, range and uniqueness, then sorts.
    pub fn new<I: IntoIterator<Item = Set>>(n: usize, k: usize, sets: I) -> Result<Self> {
        check_ground(n)?;
        if k > n {
            return Err(Error::Precondition(format!("k = {k} exceeds n = {n}")));
        }
        let mut members = Vec::new();
        for s in sets {
            let ks = KSet::from_set(n, s)?;
            if ks.k() != k {
                return Err(Error::WrongCardinality {
                    set: s.to_string(),
                    expected: k,
                    found: ks.k(),
                });
            }
            members.push(ks);
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(w[0].to_string()));
        }
        Ok(UniformFamily { n, k, members })
    }

    /// Like [`UniformFamily::new`] but silently drops duplicates.
    pub fn new_dedup<I: IntoIterator<Item = Set>>(n: usize, k: usize, sets: I) -> Result<Self> {
        let mut v: Vec<Set> = sets.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        UniformFamily::new(n, k, v)
    }

    pub fn from_elem_lists(n: usize, k: usize, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| Set::from_elems(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        UniformFamily::new(n, k, sets)
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        UniformFamily::new(n, k, std::iter::empty())
    }

    /// Members already sorted, unique and validated by the caller.
    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, sets: Vec<Set>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sets.iter().all(|s| s.len() == k));
        let members = sets
            .into_iter()
            .map(|s| KSet {
                mask: s.0,
                n: n as u8,
                k: k as u8,
            })
            .collect();
        UniformFamily { n, k, members }
    }

    /// Every k-subset of `[n]`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(Self::from_sorted_unchecked(n, k, ksets(n, k).collect()))
    }

    /// All k-sets containing `x`.
    pub fn full_star(n: usize, k: usize, x: usize) -> Result<Self> {
        check_ground(n)?;
        if x == 0 || x > n {
            return Err(Error::ElementOutOfRange { elem: x, n });
        }
        let sets = ksets(n, k).filter(|s| s.contains(x)).collect();
        Ok(Self::from_sorted_unchecked(n, k, sets))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn sets(&self) -> impl Iterator<Item = Set> + '_ {
        self.members.iter().map(|m| m.set())
    }

    pub fn contains(&self, s: Set) -> bool {
        self.members.binary_search_by(|m| m.mask.cmp(&s.0)).is_ok()
    }

    /// Union of all members.
    pub fn support(&self) -> Set {
        Set(self.members.iter().fold(0, |m, s| m | s.mask))
    }

    pub fn is_subfamily_of(&self, other: &UniformFamily) -> bool {
        self.n == other.n && self.k == other.k && self.sets().all(|s| other.contains(s))
    }

    pub fn filter<P: FnMut(Set) -> bool>(&self, mut keep: P) -> UniformFamily {
        let sets = self.sets().filter(|&s| keep(s)).collect();
        Self::from_sorted_unchecked(self.n, self.k, sets)
    }

    pub fn union(&self, other: &UniformFamily) -> Result<UniformFamily> {
        if self.n != other.n {
            return Err(Error::GroundMismatch(self.n, other.n));
        }
        if self.k != other.k {
            return Err(Error::Precondition(format!(
                "uniformity differs: {} vs {}",
                self.k, other.k
            )));
        }
        UniformFamily::new_dedup(self.n, self.k, self.sets().chain(other.sets()))
    }

    /// Relabel by a permutation of `[n]` given as a 1-based table.
    pub fn permute(&self, perm: &[usize]) -> UniformFamily {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut sets: Vec<Set> = self.sets().map(|s| s.map(perm)).collect();
        sets.sort_unstable();
        Self::from_sorted_unchecked(self.n, self.k, sets)
    }

    /// Same sets viewed over a larger ground set.
    pub fn with_ground(&self, n: usize) -> Result<UniformFamily> {
        UniformFamily::new(n, self.k, self.sets())
    }
}

impl fmt::Display for UniformFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

/// Members of `sets` bucketed into stars: bucket `i` holds the members that
/// contain `apex_i` and no earlier apex. Members inside one bucket pairwise
/// intersect, so only cross-bucket pairs need checking.
fn star_buckets(sets: &[Set]) -> Vec<Vec<u64>> {
    let mut rest: Vec<u64> = sets.iter().map(|s| s.0).collect();
    let mut buckets = Vec::new();
    while !rest.is_empty() {
        let mut deg = [0usize; 64];
        for &m in &rest {
            let mut b = m;
            while b != 0 {
                deg[b.trailing_zeros() as usize] += 1;
                b &= b - 1;
            }
        }
        let apex = (0..64).max_by_key(|&i| (deg[i], std::cmp::Reverse(i))).unwrap();
        if deg[apex] == 0 {
            // only empty sets remain
            buckets.push(std::mem::take(&mut rest));
            break;
        }
        let (inside, outside): (Vec<u64>, Vec<u64>) =
            rest.into_iter().partition(|&m| m >> apex & 1 == 1);
        buckets.push(inside);
        rest = outside;
    }
    buckets
}

/// Every two members share an element. Checks only pairs that do not already
/// share a greedily chosen star apex.
pub fn is_intersecting(f: &UniformFamily) -> bool {
    first_disjoint_pair(f).is_none()
}

/// A disjoint pair of members, if there is one.
pub fn first_disjoint_pair(f: &UniformFamily) -> Option<(Set, Set)> {
    let sets: Vec<Set> = f.sets().collect();
    if sets.iter().any(|s| s.is_empty()) {
        return Some((Set::EMPTY, Set::EMPTY));
    }
    let buckets = star_buckets(&sets);
    for (i, bi) in buckets.iter().enumerate() {
        for bj in &buckets[i + 1..] {
            for &a in bi {
                for &b in bj {
                    if a & b == 0 {
                        let (x, y) = (Set(a.min(b)), Set(a.max(b)));
                        return Some((x, y));
                    }
                }
            }
        }
    }
    None
}

/// Every member of `a` meets every member of `b`.
pub fn are_cross_intersecting(a: &UniformFamily, b: &UniformFamily) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::GroundMismatch(a.n, b.n));
    }
    Ok(a
        .members
        .iter()
        .all(|x| b.members.iter().all(|y| x.mask & y.mask != 0)))
}

/// Number of members containing `x`.
pub fn degree(f: &UniformFamily, x: usize) -> usize {
    f.members.iter().filter(|m| m.set().contains(x)).count()
}

/// The element of largest degree (smallest such element on ties) and its degree.
pub fn max_degree(f: &UniformFamily) -> Result<(usize, usize)> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut deg = vec![0usize; f.n + 1];
    for m in &f.members {
        for e in m.elems() {
            deg[e] += 1;
        }
    }
    let mut best = (1, deg[1]);
    for (x, &d) in deg.iter().enumerate().skip(2) {
        if d > best.1 {
            best = (x, d);
        }
    }
    Ok(best)
}

/// Members meeting the window `u` in exactly `i` elements.
pub fn layer(f: &UniformFamily, u: Set, i: usize) -> UniformFamily {
    f.filter(|s| s.inter(u).len() == i)
}

/// One row of a trace table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub count: usize,
    /// `{F \ U : F in family, F ∩ U = S}`, uniformity `k - |S|`.
    pub residual: UniformFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaUndefined {
    /// `S` is empty.
    EmptyKey,
    /// `binom(n - |U|, k - |S|)` vanishes.
    ZeroDenominator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alpha {
    Defined(BigRational),
    Undefined(AlphaUndefined),
}

impl Alpha {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            Alpha::Defined(r) => Some(r),
            Alpha::Undefined(_) => None,
        }
    }
}

/// Trace of a family on a window `U`: for each realised `S = F ∩ U`, the
/// count `f_S` and the residual family on `[n] \ U`.
#[derive(Clone, Debug)]
pub struct TraceStats {
    n: usize,
    k: usize,
    window: Set,
    table: BTreeMap<Set, TraceEntry>,
}

impl TraceStats {
    pub fn window(&self) -> Set {
        self.window
    }

    pub fn table(&self) -> &BTreeMap<Set, TraceEntry> {
        &self.table
    }

    /// `f_S`; zero when `S` is not realised.
    pub fn f(&self, s: Set) -> usize {
        self.table.get(&s).map_or(0, |e| e.count)
    }

    pub fn total(&self) -> usize {
        self.table.values().map(|e| e.count).sum()
    }

    /// `binom(n - |U|, k - |S|)`.
    pub fn alpha_denominator(&self, s: Set) -> BigInt {
        let top = (self.n - self.window.len()) as i64;
        binom(top, self.k as i64 - s.len() as i64).expect("top is nonnegative")
    }

    /// `f_S / binom(n - |U|, k - |S|)` in lowest terms.
    pub fn alpha(&self, s: Set) -> Alpha {
        if s.is_empty() {
            return Alpha::Undefined(AlphaUndefined::EmptyKey);
        }
        let den = self.alpha_denominator(s);
        if den.is_zero() {
            return Alpha::Undefined(AlphaUndefined::ZeroDenominator);
        }
        Alpha::Defined(BigRational::new(BigInt::from(self.f(s)), den))
    }
}

/// Trace of `f` on the window `u`.
pub fn trace(f: &UniformFamily, u: Set) -> Result<TraceStats> {
    if !u.is_subset(Set::ground(f.n)) {
        return Err(Error::Precondition(format!(
            "window {u} is not a subset of [{}]",
            f.n
        )));
    }
    let mut groups: BTreeMap<Set, Vec<Set>> = BTreeMap::new();
    for s in f.sets() {
        groups.entry(s.inter(u)).or_default().push(s.minus(u));
    }
    let table = groups
        .into_iter()
        .map(|(key, mut rest)| {
            rest.sort_unstable();
            let residual = UniformFamily::from_sorted_unchecked(f.n, f.k - key.len(), rest);
            (
                key,
                TraceEntry {
                    count: residual.len(),
                    residual,
                },
            )
        })
        .collect();
    Ok(TraceStats {
        n: f.n,
        k: f.k,
        window: u,
        table,
    })
}

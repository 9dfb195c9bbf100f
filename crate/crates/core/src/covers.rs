//! Covers, the covering number and saturation.

use crate::error::{Error, Result};
use crate::family::{first_disjoint_pair, ksets, KSet, Set, UniformFamily};
use crate::par::Exec;

/// All `size`-subsets of `[n]` meeting every member of `base`, in colex order.
#[derive(Clone, Debug)]
pub struct CoverFamily<'a> {
    base: &'a UniformFamily,
    size: usize,
    members: Vec<KSet>,
}

impl<'a> CoverFamily<'a> {
    pub fn base(&self) -> &'a UniformFamily {
        self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn sets(&self) -> impl Iterator<Item = Set> + '_ {
        self.members.iter().map(|m| m.set())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The covers as a `size`-uniform family over the same ground set.
    pub fn to_family(&self) -> UniformFamily {
        UniformFamily::from_sorted_unchecked(self.base.n(), self.size, self.sets().collect())
    }
}

#[inline]
pub fn is_cover(f: &UniformFamily, t: Set) -> bool {
    f.members().iter().all(|m| m.mask() & t.0 != 0)
}

pub fn covers(f: &UniformFamily, size: usize) -> Result<CoverFamily<'_>> {
    covers_with(f, size, Exec::default())
}

/// [`covers`] with an explicit execution mode. The ℓ-subsets are split by
/// their largest element; concatenating the chunks in that order is colex.
pub fn covers_with(f: &UniformFamily, size: usize, exec: Exec) -> Result<CoverFamily<'_>> {
    let n = f.n();
    if size == 0 || size > n {
        return Err(Error::Precondition(format!("cover size {size} outside 1..={n}")));
    }
    let tops: Vec<usize> = (size..=n).collect();
    let chunks = exec.map(&tops, |&top| {
        ksets(top - 1, size - 1)
            .map(|s| s.with(top))
            .filter(|&t| is_cover(f, t))
            .collect::<Vec<Set>>()
    });
    let members = chunks
        .into_iter()
        .flatten()
        .map(|s| KSet::from_set(n, s).expect("subset of [n]"))
        .collect();
    Ok(CoverFamily {
        base: f,
        size,
        members,
    })
}

/// `T(H)`: every cover of size `1..=k`, in order of size then colex.
pub fn all_covers(f: &UniformFamily) -> Result<Vec<Set>> {
    let mut out = Vec::new();
    for l in 1..=f.k().min(f.n()) {
        out.extend(covers(f, l)?.sets());
    }
    Ok(out)
}

/// Covering number, by iterative deepening on the cover size with a
/// branch-and-bound decision procedure.
pub fn tau(f: &UniformFamily) -> Result<usize> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if f.k() == 0 {
        return Err(Error::Precondition("the empty set has no cover".into()));
    }
    let masks: Vec<u64> = f.members().iter().map(|m| m.mask()).collect();
    (1..=f.n())
        .find(|&l| cover_exists(&masks, l))
        .ok_or_else(|| Error::Internal("no cover found up to size n".into()))
}

/// Whether some set of at most `budget` elements meets every mask.
fn cover_exists(masks: &[u64], budget: usize) -> bool {
    if masks.is_empty() {
        return true;
    }
    if budget == 0 {
        return false;
    }
    // pairwise disjoint members each need their own element
    let mut used = 0u64;
    let mut packing = 0;
    for &m in masks {
        if m & used == 0 {
            used |= m;
            packing += 1;
            if packing > budget {
                return false;
            }
        }
    }
    let pivot = masks[0];
    let mut deg = [0u32; 64];
    for &m in masks {
        let mut b = m & pivot;
        while b != 0 {
            deg[b.trailing_zeros() as usize] += 1;
            b &= b - 1;
        }
    }
    let mut elems: Vec<usize> = (0..64).filter(|&i| pivot >> i & 1 == 1).collect();
    elems.sort_by_key(|&i| (deg[i], i));
    elems.into_iter().any(|i| {
        let rest: Vec<u64> = masks.iter().copied().filter(|m| m >> i & 1 == 0).collect();
        cover_exists(&rest, budget - 1)
    })
}

fn require_intersecting(f: &UniformFamily) -> Result<()> {
    match first_disjoint_pair(f) {
        Some((a, b)) => Err(Error::NotIntersecting(a.to_string(), b.to_string())),
        None => Ok(()),
    }
}

/// Extend an intersecting family to a maximal one: scan the k-sets of `[n]`
/// in colex order and keep each that meets every member kept so far.
pub fn saturate(f: &UniformFamily) -> Result<UniformFamily> {
    saturate_in_order(f, std::iter::empty())
}

/// Like [`saturate`], but first tries the sets of `order` (in that order),
/// then falls back to the colex scan. The result is maximal either way.
pub fn saturate_in_order<I>(f: &UniformFamily, order: I) -> Result<UniformFamily>
where
    I: IntoIterator<Item = Set>,
{
    require_intersecting(f)?;
    let (n, k) = (f.n(), f.k());
    let mut cur: Vec<u64> = f.members().iter().map(|m| m.mask()).collect();
    let mut push = |s: Set| {
        if s.len() == k && s.is_subset(Set::ground(n)) && cur.iter().all(|&m| m & s.0 != 0) {
            // members meet themselves, so a duplicate would also pass
            if !cur.contains(&s.0) {
                cur.push(s.0);
            }
        }
    };
    for s in order {
        push(s);
    }
    for s in ksets(n, k) {
        push(s);
    }
    UniformFamily::new(n, k, cur.into_iter().map(Set))
}

/// No k-set outside `f` meets every member.
pub fn is_saturated(f: &UniformFamily) -> Result<bool> {
    require_intersecting(f)?;
    Ok(ksets(f.n(), f.k()).all(|s| f.contains(s) || !is_cover(f, s)))
}

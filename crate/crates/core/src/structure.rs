//! Structure of the 3-covers `T^(3)(F)`: star / `K3(4)` / `S` / `R`
//! classification, pattern-copy detection and the 2-cover disjointness graph.

use itertools::Itertools;
use log::warn;

use crate::constructions::{build_r, build_s};
use crate::covers::{covers, tau};
use crate::error::{Error, Result};
use crate::family::{ksets, Set, UniformFamily};

/// The two three-edge 3-graphs that drive the case analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    S,
    R,
}

impl Pattern {
    pub fn edges(self) -> [Set; 3] {
        let fam = match self {
            Pattern::S => build_s(6),
            Pattern::R => build_r(5),
        }
        .expect("fixed pattern");
        let v: Vec<Set> = fam.sets().collect();
        [v[0], v[1], v[2]]
    }
}

/// For each vertex of `edges`, the 3-bit mask of edges containing it,
/// counted per mask value.
fn venn_counts(edges: [Set; 3]) -> [u8; 8] {
    let mut counts = [0u8; 8];
    let support = edges[0].union(edges[1]).union(edges[2]);
    for v in support.elems() {
        let sig = (0..3).fold(0usize, |acc, i| acc | (edges[i].contains(v) as usize) << i);
        counts[sig] += 1;
    }
    counts
}

/// Sorted pairwise intersection sizes plus support size.
fn profile(edges: [Set; 3]) -> ([usize; 3], usize) {
    let mut p = [
        edges[0].inter(edges[1]).len(),
        edges[0].inter(edges[2]).len(),
        edges[1].inter(edges[2]).len(),
    ];
    p.sort_unstable();
    (p, edges[0].union(edges[1]).union(edges[2]).len())
}

/// Two three-edge hypergraphs are isomorphic iff some reordering of the edges
/// makes their Venn-region vertex counts agree.
fn isomorphic3(a: [Set; 3], b: [Set; 3]) -> bool {
    let target = venn_counts(b);
    [0usize, 1, 2]
        .into_iter()
        .permutations(3)
        .any(|p| venn_counts([a[p[0]], a[p[1]], a[p[2]]]) == target)
}

/// A sub-family of `t` isomorphic to `pattern`, as three colex-sorted members.
pub fn contains_copy(t: &UniformFamily, pattern: Pattern) -> Result<Option<[Set; 3]>> {
    if t.k() != 3 {
        return Err(Error::Precondition(format!("expected a 3-graph, got {}-uniform", t.k())));
    }
    Ok(find_copy(&t.sets().collect::<Vec<_>>(), pattern))
}

pub(crate) fn find_copy(sets: &[Set], pattern: Pattern) -> Option<[Set; 3]> {
    let pat = pattern.edges();
    let want = profile(pat);
    sets.iter()
        .copied()
        .tuple_combinations()
        .map(|(a, b, c)| [a, b, c])
        .find(|&tri| profile(tri) == want && isomorphic3(tri, pat))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Empty,
    Star,
    K34,
    ContainsS,
    ContainsR,
    /// Nonempty, non-trivial, and none of the above. Never produced for a
    /// saturated intersecting family with n >= 2k.
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Empty,
    Star { apex: usize },
    K34 { vertices: Set },
    ContainsS { witness: [Set; 3] },
    ContainsR { witness: [Set; 3] },
    Unclassified,
}

impl Classification {
    pub fn tag(&self) -> Tag {
        match self {
            Classification::Empty => Tag::Empty,
            Classification::Star { .. } => Tag::Star,
            Classification::K34 { .. } => Tag::K34,
            Classification::ContainsS { .. } => Tag::ContainsS,
            Classification::ContainsR { .. } => Tag::ContainsR,
            Classification::Unclassified => Tag::Unclassified,
        }
    }

    /// The witness really supports the tag on the 3-graph `t`.
    pub fn validates(&self, t: &[Set]) -> bool {
        match self {
            Classification::Empty => t.is_empty(),
            Classification::Star { apex } => !t.is_empty() && t.iter().all(|s| s.contains(*apex)),
            Classification::K34 { vertices } => {
                let mut want: Vec<Set> = vertices
                    .elems()
                    .combinations(3)
                    .map(|c| Set::from_elems(c).expect("in range"))
                    .collect();
                want.sort_unstable();
                let mut got = t.to_vec();
                got.sort_unstable();
                vertices.len() == 4 && got == want
            }
            Classification::ContainsS { witness } => {
                witness.iter().all(|w| t.contains(w)) && isomorphic3(*witness, Pattern::S.edges())
            }
            Classification::ContainsR { witness } => {
                witness.iter().all(|w| t.contains(w)) && isomorphic3(*witness, Pattern::R.edges())
            }
            Classification::Unclassified => true,
        }
    }
}

/// Classify an explicit 3-graph playing the role of `T^(3)`.
pub fn classify_triples(t: &[Set]) -> Classification {
    if t.is_empty() {
        return Classification::Empty;
    }
    let common = t.iter().fold(Set(u64::MAX), |acc, s| acc.inter(*s));
    if let Some(apex) = common.min_elem() {
        return Classification::Star { apex };
    }
    let two_intersecting = t.iter().tuple_combinations().all(|(a, b)| a.inter(*b).len() == 2);
    if two_intersecting {
        // the pairwise-2 case forces all triples of one 4-set
        let support = t.iter().fold(Set::EMPTY, |acc, s| acc.union(*s));
        let k34 = Classification::K34 { vertices: support };
        return if k34.validates(t) {
            k34
        } else {
            Classification::Unclassified
        };
    }
    if let Some(witness) = find_copy(t, Pattern::R) {
        return Classification::ContainsR { witness };
    }
    if let Some(witness) = find_copy(t, Pattern::S) {
        return Classification::ContainsS { witness };
    }
    Classification::Unclassified
}

/// Classify `T^(3)(F)`. Logs a warning when `τ(F) != 3`.
pub fn classify_t3(f: &UniformFamily) -> Result<Classification> {
    if f.n() < 3 {
        return Ok(Classification::Empty);
    }
    if !f.is_empty() {
        let t = tau(f)?;
        if t != 3 {
            warn!("classify_t3 called on a family with covering number {t}");
        }
    }
    let t: Vec<Set> = covers(f, 3)?.sets().collect();
    Ok(classify_triples(&t))
}

/// Vertices are 2-sets; edges join disjoint vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessGraph {
    vertices: Vec<Set>,
    edges: Vec<(usize, usize)>,
}

impl DisjointnessGraph {
    pub fn vertices(&self) -> &[Set] {
        &self.vertices
    }

    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_sets(&self) -> Vec<(Set, Set)> {
        self.edges.iter().map(|&(i, j)| (self.vertices[i], self.vertices[j])).collect()
    }

    pub fn index_of(&self, v: Set) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn has_edge(&self, a: Set, b: Set) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.edges.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    pub fn without(&self, v: Set) -> DisjointnessGraph {
        let kept: Vec<Set> = self.vertices.iter().copied().filter(|&x| x != v).collect();
        build_graph(kept)
    }

    /// Connected and 2-regular.
    pub fn is_cycle(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.edges.len() != n || (0..n).any(|i| self.degree(i) != 2) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == i { b } else if b == i { a } else { continue };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_independent(&self, set: &[Set]) -> bool {
        set.iter().tuple_combinations().all(|(a, b)| !self.has_edge(*a, *b))
    }

    /// A perfect matching, found by trying the lowest unmatched vertex first.
    pub fn perfect_matching(&self) -> Option<Vec<(Set, Set)>> {
        let n = self.vertices.len();
        let mut mate = vec![usize::MAX; n];
        if !self.match_from(&mut mate) {
            return None;
        }
        Some(
            (0..n)
                .filter(|&i| mate[i] > i)
                .map(|i| (self.vertices[i], self.vertices[mate[i]]))
                .collect(),
        )
    }

    fn match_from(&self, mate: &mut [usize]) -> bool {
        let Some(i) = mate.iter().position(|&m| m == usize::MAX) else {
            return true;
        };
        for &(a, b) in &self.edges {
            let j = if a == i { b } else if b == i { a } else { continue };
            if mate[j] == usize::MAX && j != i {
                mate[i] = j;
                mate[j] = i;
                if self.match_from(mate) {
                    return true;
                }
                mate[i] = usize::MAX;
                mate[j] = usize::MAX;
            }
        }
        false
    }
}

fn build_graph(vertices: Vec<Set>) -> DisjointnessGraph {
    let edges = (0..vertices.len())
        .tuple_combinations()
        .filter(|&(i, j)| !vertices[i].intersects(vertices[j]))
        .collect();
    DisjointnessGraph { vertices, edges }
}

pub fn disjointness_graph(pairs: &[Set]) -> Result<DisjointnessGraph> {
    if let Some((a, _)) = pairs.iter().tuple_combinations().find(|(a, b)| a == b) {
        return Err(Error::Precondition(format!("duplicate vertex {a}")));
    }
    if let Some(p) = pairs.iter().find(|p| p.len() != 2) {
        return Err(Error::Precondition(format!("vertex {p} is not a 2-set")));
    }
    Ok(build_graph(pairs.to_vec()))
}

/// `P(R)`: the 2-covers of `R` in colex order.
pub fn two_covers_of_r() -> Vec<Set> {
    let r = build_r(5).expect("fixed");
    covers(&r, 2).expect("2 <= 5").sets().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim6Case {
    /// `{1,5}` is not heavy: match the 6-cycle left after deleting it.
    LeftoverOneFive,
    /// `{1,5}` is heavy: fixed matching, leftover `{3,4}`.
    LeftoverThreeFour,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim6Partition {
    pub case: Claim6Case,
    pub edges: Vec<(Set, Set)>,
    pub leftover: Set,
}

impl Claim6Partition {
    /// Edges are graph edges, pairwise vertex-disjoint, and together with the
    /// leftover they cover every vertex exactly once.
    pub fn is_valid_for(&self, g: &DisjointnessGraph, heavy: &[Set]) -> bool {
        let mut used: Vec<Set> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        used.push(self.leftover);
        used.sort_unstable();
        let mut all = g.vertices().to_vec();
        all.sort_unstable();
        self.edges.len() == 3
            && self.edges.iter().all(|&(a, b)| g.has_edge(a, b))
            && used == all
            && !heavy.contains(&self.leftover)
    }
}

/// Split the `P(R)` graph into three disjoint edges and one vertex outside the
/// independent set `heavy`.
pub fn claim6_partition(g: &DisjointnessGraph, heavy: &[Set]) -> Result<Claim6Partition> {
    let mut verts = g.vertices().to_vec();
    verts.sort_unstable();
    let mut expected = two_covers_of_r();
    expected.sort_unstable();
    if verts != expected {
        return Err(Error::Precondition("graph is not built on P(R)".into()));
    }
    if let Some(h) = heavy.iter().find(|h| g.index_of(**h).is_none()) {
        return Err(Error::Precondition(format!("{h} is not a vertex")));
    }
    if !g.is_independent(heavy) {
        return Err(Error::Precondition("heavy set is not independent".into()));
    }
    let p = |a: usize, b: usize| Set::from_elems([a, b]).expect("in range");
    let one_five = p(1, 5);
    let part = if !heavy.contains(&one_five) {
        let rest = g.without(one_five);
        if !rest.is_cycle() {
            return Err(Error::Internal("G - {1,5} is not a cycle".into()));
        }
        let edges = rest
            .perfect_matching()
            .ok_or_else(|| Error::Internal("6-cycle without perfect matching".into()))?;
        Claim6Partition {
            case: Claim6Case::LeftoverOneFive,
            edges,
            leftover: one_five,
        }
    } else {
        Claim6Partition {
            case: Claim6Case::LeftoverThreeFour,
            edges: vec![(p(1, 3), p(2, 5)), (p(3, 5), p(1, 2)), (p(1, 5), p(2, 4))],
            leftover: p(3, 4),
        }
    };
    if !part.is_valid_for(g, heavy) {
        return Err(Error::Internal(format!("invalid partition {part:?}")));
    }
    Ok(part)
}

/// Members `P` of `P(R)` with `f_P` above `threshold` in the trace on `[5]`.
pub fn heavy_pairs(f: &UniformFamily, threshold: usize) -> Result<Vec<Set>> {
    let t = crate::family::trace(f, Set::interval(1, 5))?;
    Ok(two_covers_of_r().into_iter().filter(|&p| t.f(p) > threshold).collect())
}

/// One complementary pair of triples that the `R`-free argument excludes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcludedPair {
    pub pair: (Set, Set),
    /// An `R`-copy inside `S ∪ {t}` for each member `t`, if any.
    pub witnesses: (Option<[Set; 3]>, Option<[Set; 3]>),
}

impl ExcludedPair {
    pub fn confirmed(&self) -> bool {
        self.witnesses.0.is_some() && self.witnesses.1.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim5Report {
    /// Largest intersecting `R`-free family of triples of `[6]` containing `S`.
    pub max_size: usize,
    pub witness: Vec<Set>,
    /// Number of such families.
    pub families: usize,
    pub excluded: Vec<ExcludedPair>,
}

impl Claim5Report {
    pub fn all_excluded_confirmed(&self) -> bool {
        self.excluded.len() == 6 && self.excluded.iter().all(ExcludedPair::confirmed)
    }
}

/// The six complementary pairs of `[6]` listed as excluded.
pub fn claim5_excluded_pairs() -> Vec<(Set, Set)> {
    let t = |e: [usize; 3]| Set::from_elems(e).expect("in range");
    vec![
        (t([2, 3, 4]), t([1, 5, 6])),
        (t([2, 3, 5]), t([1, 4, 6])),
        (t([2, 4, 5]), t([1, 3, 6])),
        (t([3, 4, 5]), t([1, 2, 6])),
        (t([3, 4, 6]), t([1, 2, 5])),
        (t([1, 3, 4]), t([2, 5, 6])),
    ]
}

/// Exhaustive bound on `|T|` for intersecting `R`-free `T ⊆ binom([6],3)`
/// containing `S`.
pub fn claim5_max_t() -> Claim5Report {
    let s: Vec<Set> = build_s(6).expect("fixed").sets().collect();
    let others: Vec<Set> = ksets(6, 3).filter(|t| !s.contains(t)).collect();
    let mut best = s.clone();
    let mut families = 0usize;
    let mut cur = s.clone();
    grow_r_free(&others, 0, &mut cur, &mut best, &mut families);
    best.sort_unstable();
    let excluded = claim5_excluded_pairs()
        .into_iter()
        .map(|(a, b)| {
            let with = |t: Set| {
                let mut v = s.clone();
                v.push(t);
                find_copy(&v, Pattern::R)
            };
            ExcludedPair {
                pair: (a, b),
                witnesses: (with(a), with(b)),
            }
        })
        .collect();
    Claim5Report {
        max_size: best.len(),
        witness: best,
        families,
        excluded,
    }
}

fn grow_r_free(pool: &[Set], from: usize, cur: &mut Vec<Set>, best: &mut Vec<Set>, count: &mut usize) {
    *count += 1;
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    for i in from..pool.len() {
        let t = pool[i];
        if cur.iter().any(|c| !c.intersects(t)) {
            continue;
        }
        let makes_r = cur
            .iter()
            .tuple_combinations()
            .any(|(a, b)| isomorphic3([*a, *b, t], Pattern::R.edges()));
        if makes_r {
            continue;
        }
        cur.push(t);
        grow_r_free(pool, i + 1, cur, best, count);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_g, build_k34};

    fn set(e: &[usize]) -> Set {
        Set::from_elems(e.iter().copied()).unwrap()
    }

    fn fam3(lists: &[&[usize]]) -> UniformFamily {
        UniformFamily::from_elem_lists(9, 3, lists).unwrap()
    }

    #[test]
    fn r_copy_from_claim5() {
        let t = fam3(&[&[1, 2, 3], &[2, 3, 4], &[1, 4, 5]]);
        assert!(contains_copy(&t, Pattern::R).unwrap().is_some());
    }

    #[test]
    fn s_contains_itself_not_r() {
        let s = build_s(6).unwrap();
        let w = contains_copy(&s, Pattern::S).unwrap().unwrap();
        assert_eq!(w.to_vec(), s.sets().collect::<Vec<_>>());
        assert_eq!(contains_copy(&s, Pattern::R).unwrap(), None);
        assert_eq!(contains_copy(&build_r(5).unwrap(), Pattern::S).unwrap(), None);
    }

    #[test]
    fn copy_detection_is_relabeling_invariant() {
        let r = build_r(9).unwrap();
        let moved = r.permute(&[9, 7, 5, 3, 1, 2, 4, 6, 8]);
        assert!(contains_copy(&moved, Pattern::R).unwrap().is_some());
        assert!(contains_copy(&moved, Pattern::S).unwrap().is_none());
    }

    #[test]
    fn rejects_non_triples() {
        let f = UniformFamily::full_star(6, 2, 1).unwrap();
        assert!(contains_copy(&f, Pattern::S).is_err());
    }

    #[test]
    fn classify_g94_is_star_at_one() {
        let g = build_g(9, 4).unwrap();
        assert_eq!(classify_t3(&g).unwrap(), Classification::Star { apex: 1 });
    }

    #[test]
    fn classify_synthetic_inputs() {
        let k: Vec<Set> = build_k34(4).unwrap().sets().collect();
        assert_eq!(classify_triples(&k), Classification::K34 { vertices: set(&[1, 2, 3, 4]) });
        assert_eq!(classify_triples(&[]), Classification::Empty);
        let r: Vec<Set> = build_r(5).unwrap().sets().collect();
        assert_eq!(classify_triples(&r).tag(), Tag::ContainsR);
        let s: Vec<Set> = build_s(6).unwrap().sets().collect();
        assert_eq!(classify_triples(&s).tag(), Tag::ContainsS);
        // both patterns present: R wins
        let mut both = s.clone();
        both.push(set(&[2, 3, 4]));
        let c = classify_triples(&both);
        assert_eq!(c.tag(), Tag::ContainsR);
        assert!(c.validates(&both));
        let star = vec![set(&[1, 2, 3]), set(&[1, 2, 4]), set(&[1, 3, 4])];
        assert_eq!(classify_triples(&star), Classification::Star { apex: 1 });
    }

    #[test]
    fn disjointness_graph_of_p_r() {
        let p = two_covers_of_r();
        let expect: Vec<Set> = [[1, 2], [1, 3], [1, 5], [2, 4], [2, 5], [3, 4], [3, 5]]
            .iter()
            .map(|x| set(x))
            .collect();
        let mut sorted = expect.clone();
        sorted.sort_unstable();
        assert_eq!(p, sorted);
        let g = disjointness_graph(&p).unwrap();
        // brute-force oracle over all vertex pairs
        let brute: Vec<(Set, Set)> = p
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| !a.intersects(**b))
            .map(|(a, b)| (*a, *b))
            .collect();
        assert_eq!(g.edge_sets(), brute);
        assert_eq!(g.edges().len(), 8);
        for (a, b) in [([1, 2], [3, 4]), ([1, 2], [3, 5]), ([1, 3], [2, 4]), ([1, 3], [2, 5]),
                       ([1, 5], [2, 4]), ([1, 5], [3, 4]), ([2, 4], [3, 5]), ([2, 5], [3, 4])] {
            assert!(g.has_edge(set(&a), set(&b)));
        }
        assert!(g.without(set(&[1, 5])).is_cycle());
        assert!(!g.is_cycle());
    }

    #[test]
    fn p_s_splits_into_three_disjoint_pairs() {
        let s = build_s(6).unwrap();
        let p: Vec<Set> = covers(&s, 2).unwrap().sets().collect();
        assert_eq!(p.len(), 6);
        let g = disjointness_graph(&p).unwrap();
        // 12-34, 14-25, 16-24, 16-25, 16-34, 25-34
        assert_eq!(g.edges().len(), 6);
        for (a, b) in [([1, 2], [3, 4]), ([2, 4], [1, 6]), ([1, 4], [2, 5])] {
            assert!(g.has_edge(set(&a), set(&b)));
        }
        let m = g.perfect_matching().unwrap();
        assert_eq!(m.len(), 3);
        let mut seen: Vec<Set> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort();
        assert_eq!(seen, p);
    }

    #[test]
    fn disjointness_graph_rejects_duplicates() {
        assert!(disjointness_graph(&[set(&[1, 2]), set(&[1, 2])]).is_err());
    }

    #[test]
    fn claim6_both_cases() {
        let g = disjointness_graph(&two_covers_of_r()).unwrap();
        let a = claim6_partition(&g, &[]).unwrap();
        assert_eq!(a.case, Claim6Case::LeftoverOneFive);
        assert_eq!(a.leftover, set(&[1, 5]));
        assert!(a.is_valid_for(&g, &[]));
        let heavy = [set(&[1, 5])];
        let b = claim6_partition(&g, &heavy).unwrap();
        assert_eq!(b.case, Claim6Case::LeftoverThreeFour);
        assert_eq!(b.leftover, set(&[3, 4]));
        assert!(b.is_valid_for(&g, &heavy));
        // every independent set of G gets a valid partition
        let verts = g.vertices().to_vec();
        for mask in 0u32..1 << verts.len() {
            let i: Vec<Set> = (0..verts.len()).filter(|b| mask >> b & 1 == 1).map(|b| verts[b]).collect();
            match claim6_partition(&g, &i) {
                Ok(p) => assert!(g.is_independent(&i) && p.is_valid_for(&g, &i)),
                Err(_) => assert!(!g.is_independent(&i)),
            }
        }
    }

    #[test]
    fn claim6_rejects_dependent_set() {
        let g = disjointness_graph(&two_covers_of_r()).unwrap();
        assert!(claim6_partition(&g, &[set(&[1, 2]), set(&[3, 4])]).is_err());
    }

    #[test]
    fn claim5_enumeration() {
        let rep = claim5_max_t();
        assert_eq!(rep.max_size, 4);
        assert!(rep.all_excluded_confirmed());
        let s: Vec<Set> = build_s(6).unwrap().sets().collect();
        assert!(s.iter().all(|x| rep.witness.contains(x)));
        // {2,3,4} together with 123 and 145 is the quoted R-copy
        let w = rep.excluded[0].witnesses.0.unwrap();
        assert!(w.contains(&set(&[2, 3, 4])));
    }
}

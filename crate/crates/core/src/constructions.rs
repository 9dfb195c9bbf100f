//! Named families: `S`, `R`, `K3(4)`, `G(n, k)`, `F_H`, and lexicographic
//! initial segments `L(n, k, m)`.

use itertools::Itertools;
use num_bigint::BigInt;

use crate::covers::is_cover;
use crate::error::{Error, Result};
use crate::exact::{binom, binom_u64};
use crate::family::{first_disjoint_pair, ksets, KSet, Set, UniformFamily};

fn triples(n: usize, min_n: usize, name: &str, lists: &[&[usize]]) -> Result<UniformFamily> {
    if n < min_n {
        return Err(Error::Precondition(format!("{name} needs n >= {min_n}, got {n}")));
    }
    UniformFamily::from_elem_lists(n, 3, lists)
}

/// `{123, 145, 246}`.
pub fn build_s(n: usize) -> Result<UniformFamily> {
    triples(n, 6, "S", &[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6]])
}

/// `{123, 145, 235}`.
pub fn build_r(n: usize) -> Result<UniformFamily> {
    triples(n, 5, "R", &[&[1, 2, 3], &[1, 4, 5], &[2, 3, 5]])
}

/// All four triples of `[4]`.
pub fn build_k34(n: usize) -> Result<UniformFamily> {
    triples(n, 4, "K3(4)", &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]])
}

fn check_g_params(n: usize, k: usize) -> Result<()> {
    if k < 3 || n < 2 * k {
        return Err(Error::Precondition(format!("G(n,k) needs n >= 2k >= 6, got n={n}, k={k}")));
    }
    if n > crate::family::MAX_N {
        return Err(Error::GroundSetSize(n));
    }
    Ok(())
}

/// The three sets avoiding 1: `[2,k+1]`, `{2} ∪ [k+2,2k]`, `{3} ∪ [k+2,2k]`.
pub fn g_blockers(k: usize) -> [Set; 3] {
    let tail = Set::interval(k + 2, 2 * k);
    [Set::interval(2, k + 1), tail.with(2), tail.with(3)]
}

/// `G(n, k) = A ∪ B`, where `A` is every k-set through 1 that meets the three
/// blockers. `A` is materialised by filtering, not counted.
pub fn build_g(n: usize, k: usize) -> Result<UniformFamily> {
    check_g_params(n, k)?;
    let blockers = g_blockers(k);
    let a = ksets(n, k).filter(|s| s.contains(1) && blockers.iter().all(|b| b.intersects(*s)));
    UniformFamily::new(n, k, a.chain(blockers))
}

/// Closed form for `|G(n, k)|`:
/// `C(n-1,k-1) - C(n-k,k-1) - C(n-k-1,k-1) + C(n-2k,k-1) + C(n-k-2,k-3) + 3`.
pub fn g_size_formula(n: usize, k: usize) -> Result<BigInt> {
    if k < 3 || n < 2 * k {
        return Err(Error::Precondition(format!("needs n >= 2k >= 6, got n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(binom(n - 1, k - 1)? - binom(n - k, k - 1)? - binom(n - k - 1, k - 1)?
        + binom(n - 2 * k, k - 1)?
        + binom(n - k - 2, k - 3)?
        + 3)
}

/// `F_H = H ∪ {F : 1 ∈ F, some T ∈ T(H) with T ⊂ F}`.
///
/// `H` must be intersecting, `k`-uniform and avoid element 1. A k-set through
/// 1 contains a cover of `H` exactly when the rest of it is a cover, since
/// element 1 hits nothing in `H`.
pub fn build_f_h(h: &UniformFamily, n: usize, k: usize) -> Result<UniformFamily> {
    if h.k() != k {
        return Err(Error::Precondition(format!("H is {}-uniform, expected {k}", h.k())));
    }
    if h.n() != n {
        return Err(Error::GroundMismatch(h.n(), n));
    }
    if h.support().contains(1) {
        return Err(Error::Precondition("H must avoid element 1".into()));
    }
    if let Some((a, b)) = first_disjoint_pair(h) {
        return Err(Error::NotIntersecting(a.to_string(), b.to_string()));
    }
    let one = Set::singleton(1);
    let added = ksets(n, k).filter(|s| s.contains(1) && is_cover(h, s.minus(one)));
    UniformFamily::new_dedup(n, k, h.sets().chain(added))
}

/// `F` precedes `G` when the least element of `F \ G` is below the least
/// element of `G \ F`.
pub fn lex_precedes(f: KSet, g: KSet) -> bool {
    let (a, b) = (f.set().minus(g.set()), g.set().minus(f.set()));
    match (a.min_elem(), b.min_elem()) {
        (Some(x), Some(y)) => x < y,
        _ => false,
    }
}

/// `L(n, k, m)`: the first `m` k-subsets of `[n]` in lexicographic order.
pub fn lex_family(n: usize, k: usize, m: usize) -> Result<UniformFamily> {
    if n == 0 || n > crate::family::MAX_N {
        return Err(Error::GroundSetSize(n));
    }
    let total = binom_u64(n, k);
    if m as u64 > total {
        return Err(Error::Precondition(format!("m = {m} exceeds C({n},{k}) = {total}")));
    }
    let sets = (1..=n)
        .combinations(k)
        .take(m)
        .map(|c| Set::from_elems(c).expect("in range"));
    UniformFamily::new(n, k, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{covers, is_saturated, tau};
    use crate::family::is_intersecting;

    fn set(e: &[usize]) -> Set {
        Set::from_elems(e.iter().copied()).unwrap()
    }

    #[test]
    fn named_triples() {
        let s = build_s(6).unwrap();
        assert_eq!(s, UniformFamily::from_elem_lists(6, 3, &[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6]]).unwrap());
        let r = build_r(5).unwrap();
        assert!(r.contains(set(&[2, 3, 5])));
        assert_eq!(build_k34(4).unwrap().len(), 4);
        assert!(build_s(5).is_err());
        assert!(build_r(4).is_err());
        assert!(build_k34(3).is_err());
    }

    #[test]
    fn g_sizes_match_known_values() {
        assert_eq!(build_g(9, 4).unwrap().len(), 48);
        assert_eq!(build_g(8, 4).unwrap().len(), 35);
        assert_eq!(build_g(11, 5).unwrap().len(), 199);
        assert_eq!(build_g(7, 3).unwrap().len(), 10);
        assert_eq!(g_size_formula(9, 4).unwrap(), BigInt::from(48));
        assert_eq!(g_size_formula(7, 3).unwrap(), BigInt::from(10));
        assert_eq!(g_size_formula(13, 6).unwrap(), BigInt::from(778));
        assert!(build_g(7, 4).is_err());
        assert!(build_g(4, 2).is_err());
    }

    #[test]
    fn g_is_intersecting_saturated_tau3() {
        let g = build_g(9, 4).unwrap();
        assert!(is_intersecting(&g));
        assert!(is_saturated(&g).unwrap());
        assert_eq!(tau(&g).unwrap(), 3);
    }

    #[test]
    fn f_h_single_edge() {
        let h = UniformFamily::from_elem_lists(7, 3, &[&[2, 3, 4]]).unwrap();
        let f = build_f_h(&h, 7, 3).unwrap();
        assert!(is_intersecting(&f));
        assert_eq!(tau(&f).unwrap(), 2);
        assert!(h.is_subfamily_of(&f));
        // 3-sets through 1 meeting {2,3,4}: C(6,2) - C(3,2)
        assert_eq!(f.len(), 1 + 15 - 3);
    }

    #[test]
    fn f_h_on_k34_satisfies_hypothesis() {
        let h = UniformFamily::from_elem_lists(7, 3, &[&[2, 3, 4], &[2, 3, 5], &[2, 4, 5], &[3, 4, 5]])
            .unwrap();
        // covers of size < k
        let small: Vec<Set> = (1..3).flat_map(|l| covers(&h, l).unwrap().sets().collect::<Vec<_>>()).collect();
        let small_fam = UniformFamily::new(7, 2, small.iter().copied().filter(|s| s.len() == 2)).unwrap();
        // the six pairs of {2,3,4,5} form K4, whose vertex cover number is 3
        assert_eq!(small_fam.len(), 6);
        assert_eq!(tau(&small_fam).unwrap(), 3);
        let f = build_f_h(&h, 7, 3).unwrap();
        assert_eq!(f, UniformFamily::complete(5, 3).unwrap().with_ground(7).unwrap());
        assert_eq!(tau(&f).unwrap(), 3);
    }

    #[test]
    fn f_h_rejects_element_one() {
        let h = UniformFamily::from_elem_lists(7, 3, &[&[1, 3, 4]]).unwrap();
        assert!(build_f_h(&h, 7, 3).is_err());
    }

    #[test]
    fn lex_examples() {
        let l = lex_family(5, 2, 4).unwrap();
        let expect: Vec<Set> = [[1, 2], [1, 3], [1, 4], [1, 5]].iter().map(|p| set(p)).collect();
        assert_eq!(l.sets().collect::<Vec<_>>(), expect);
        let a = KSet::new(5, [1, 3, 5]).unwrap();
        let b = KSet::new(5, [1, 4, 5]).unwrap();
        assert!(lex_precedes(a, b));
        assert!(!lex_precedes(b, a));
        assert!(!lex_precedes(a, a));
        assert!(lex_family(5, 2, 11).is_err());
    }

    #[test]
    fn lex_prefix_is_star() {
        let m = binom_u64(5, 2) as usize;
        let l = lex_family(6, 3, m).unwrap();
        assert!(l.sets().all(|s| s.contains(1)));
        assert_eq!(l, UniformFamily::full_star(6, 3, 1).unwrap());
    }

    #[test]
    fn lex_precedes_is_total_order_matching_generation() {
        let all: Vec<KSet> = (1..=6)
            .combinations(3)
            .map(|c| KSet::new(6, c).unwrap())
            .collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                assert_eq!(lex_precedes(*a, *b), i < j);
            }
        }
    }
}

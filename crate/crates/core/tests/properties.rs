use ekrforge_core::bounds::{verify_identity_suite, SuiteId, SweepRange};
use ekrforge_core::constructions::{build_f_h, build_g, lex_family};
use ekrforge_core::covers::{all_covers, covers, is_saturated, tau};
use ekrforge_core::exact::binom;
use ekrforge_core::family::{are_cross_intersecting, is_intersecting, ksets, layer, trace, Set, UniformFamily};
use ekrforge_core::gen::{random_perm, random_saturated, rng, Bias};
use ekrforge_core::io::{from_text, to_text};
use ekrforge_core::search::{canonical_form, max_intersecting, SearchOptions};
use ekrforge_core::structure::{classify_t3, contains_copy, disjointness_graph, heavy_pairs, two_covers_of_r, Pattern, Tag};
use ekrforge_core::Exec;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// A family given by a bit per k-set of `[n]`.
fn family_from_bits(n: usize, k: usize, bits: &[bool]) -> UniformFamily {
    let sets = ksets(n, k).zip(bits.iter().cycle()).filter(|(_, b)| **b).map(|(s, _)| s);
    UniformFamily::new(n, k, sets).unwrap()
}

fn any_family() -> impl Strategy<Value = UniformFamily> {
    (4usize..=8, 1usize..=3, prop::collection::vec(any::<bool>(), 1..64))
        .prop_map(|(n, k, bits)| family_from_bits(n, k, &bits))
}

fn bias(i: u8) -> Bias {
    [Bias::None, Bias::Pattern(Pattern::R), Bias::Pattern(Pattern::S)][i as usize % 3]
}

fn saturated(n: usize, k: usize, seed: u64, b: u8) -> UniformFamily {
    random_saturated(n, k, bias(b), &mut rng(seed)).unwrap()
}

fn window(n: usize, bits: u64, min: usize, max: usize) -> Set {
    let mut u = Set(bits & Set::ground(n).bits());
    let mut x = 1;
    while u.len() < min {
        u = u.with(x);
        x += 1;
    }
    while u.len() > max {
        u = u.minus(Set::singleton(u.max_elem().unwrap()));
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_partition_the_family(f in any_family(), bits in any::<u64>()) {
        let u = window(f.n(), bits, 0, f.n());
        let mut total = 0;
        for i in 0..=f.k().min(u.len()) {
            let l = layer(&f, u, i);
            prop_assert!(l.sets().all(|s| s.inter(u).len() == i));
            total += l.len();
        }
        prop_assert_eq!(total, f.len());
    }

    #[test]
    fn trace_counts_match_direct_count(f in any_family(), bits in any::<u64>()) {
        let u = window(f.n(), bits, 1, 6);
        let t = trace(&f, u).unwrap();
        for s in (0..=u.len()).flat_map(|i| u.elems().combinations(i)) {
            let s = Set::from_elems(s).unwrap();
            let direct = f.sets().filter(|m| m.inter(u) == s).count();
            prop_assert_eq!(t.f(s), direct);
        }
        prop_assert_eq!(t.total(), f.len());
    }

    #[test]
    fn cross_intersecting_is_symmetric(a in any_family(), bits in prop::collection::vec(any::<bool>(), 1..64), k in 1usize..=3) {
        let b = family_from_bits(a.n(), k.min(a.n()), &bits);
        prop_assert_eq!(are_cross_intersecting(&a, &b).unwrap(), are_cross_intersecting(&b, &a).unwrap());
    }

    #[test]
    fn alpha_sums_at_most_one(pick in 0usize..2, seed in any::<u64>(), b in any::<u8>(), bits in any::<u64>()) {
        let (n, k) = [(9, 4), (11, 5)][pick];
        let f = saturated(n, k, seed, b);
        let u = window(n, bits, 2, 6);
        let w = u.len() as i64;
        let subsets: Vec<Set> = (1..=u.len()).flat_map(|i| u.elems().combinations(i)).map(|c| Set::from_elems(c).unwrap()).collect();
        let alpha = |s: Set| -> Option<BigRational> {
            let den = binom(n as i64 - w, k as i64 - s.len() as i64).unwrap();
            if den == BigInt::from(0) {
                return None;
            }
            let count = f.sets().filter(|m| m.inter(u) == s).count();
            Some(BigRational::new(BigInt::from(count), den))
        };
        for (x, y) in subsets.iter().tuple_combinations() {
            if x.intersects(*y) || (n as i64) < 2 * k as i64 - x.len() as i64 - y.len() as i64 + w {
                continue;
            }
            if let (Some(ax), Some(ay)) = (alpha(*x), alpha(*y)) {
                prop_assert!(ax + ay <= BigRational::from_integer(BigInt::from(1)), "U={u} A={x} B={y}");
            }
        }
    }

    #[test]
    fn lex_families_inherit_cross_intersection(seed in any::<u64>(), density in 0.0f64..1.0, keep in 0.0f64..1.0) {
        use rand::Rng;
        let (n, a, b) = (6, 2, 3);
        let mut r = rng(seed);
        let fa = UniformFamily::new(n, a, ksets(n, a).filter(|_| r.gen_bool(density))).unwrap();
        let fb = UniformFamily::new(n, b, ksets(n, b).filter(|t| fa.sets().all(|s| s.intersects(*t)) && r.gen_bool(keep))).unwrap();
        prop_assert!(are_cross_intersecting(&fa, &fb).unwrap());
        let la = lex_family(n, a, fa.len()).unwrap();
        let lb = lex_family(n, b, fb.len()).unwrap();
        prop_assert!(are_cross_intersecting(&la, &lb).unwrap());
    }

    #[test]
    fn tau_is_monotone(f in any_family(), bits in prop::collection::vec(any::<bool>(), 1..64)) {
        prop_assume!(!f.is_empty());
        let sub = UniformFamily::new(f.n(), f.k(), f.sets().zip(bits.iter().cycle()).filter(|(_, b)| **b).map(|(s, _)| s)).unwrap();
        prop_assume!(!sub.is_empty());
        prop_assert!(tau(&sub).unwrap() <= tau(&f).unwrap());
    }

    #[test]
    fn covers_pad_upwards(f in any_family()) {
        prop_assume!(!f.is_empty());
        for l in 1..f.n() {
            if !covers(&f, l).unwrap().is_empty() {
                prop_assert!(!covers(&f, l + 1).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn saturated_families_are_well_behaved(pick in 0usize..3, seed in any::<u64>(), b in any::<u8>()) {
        let (n, k) = [(7, 3), (8, 3), (9, 4)][pick];
        let h = saturated(n, k, seed, b);
        prop_assert!(is_intersecting(&h));
        prop_assert!(is_saturated(&h).unwrap());
        prop_assert!(tau(&h).unwrap() <= k);
        let t = all_covers(&h).unwrap();
        for (x, y) in t.iter().tuple_combinations() {
            prop_assert!(x.intersects(*y), "covers {x} and {y} are disjoint");
        }
    }

    #[test]
    fn f_h_stays_intersecting(pick in 0usize..3, seed in any::<u64>(), b in any::<u8>()) {
        let (n, k) = [(7, 3), (8, 3), (9, 4)][pick];
        // a saturated family on [2, n]
        let shift: Vec<usize> = (1..=n).map(|x| x % n + 1).collect();
        let h = saturated(n - 1, k, seed, b).with_ground(n).unwrap().permute(&shift);
        let fh = build_f_h(&h, n, k).unwrap();
        prop_assert!(h.is_subfamily_of(&fh));
        prop_assert!(is_intersecting(&fh));
    }

    #[test]
    fn covering_triples_are_classified(pick in 0usize..3, seed in any::<u64>(), b in any::<u8>()) {
        let (n, k) = [(7, 3), (8, 3), (9, 4)][pick];
        let h = saturated(n, k, seed, b);
        prop_assume!(tau(&h).unwrap() == 3);
        let t: Vec<Set> = covers(&h, 3).unwrap().sets().collect();
        let c = classify_t3(&h).unwrap();
        prop_assert!(matches!(c.tag(), Tag::Star | Tag::K34 | Tag::ContainsS | Tag::ContainsR), "{:?}", c);
        prop_assert!(c.validates(&t));
    }

    #[test]
    fn canonical_form_ignores_labels(f in any_family(), seed in any::<u64>()) {
        let p = random_perm(f.n(), &mut rng(seed));
        prop_assert_eq!(canonical_form(&f), canonical_form(&f.permute(&p)));
    }

    #[test]
    fn text_format_round_trips(f in any_family()) {
        prop_assert_eq!(from_text(&to_text(&f)).unwrap(), f);
    }

    #[test]
    fn lex_families_nest(n in 4usize..=8, k in 1usize..=4, m in 0usize..30) {
        prop_assume!(k <= n);
        let total = ekrforge_core::exact::binom_u64(n, k) as usize;
        let m = m.min(total.saturating_sub(1));
        let small = lex_family(n, k, m).unwrap();
        let big = lex_family(n, k, m + 1).unwrap();
        prop_assert!(small.is_subfamily_of(&big));
    }
}

/// Relabel `f` so that the R-copy `w` among its 3-covers becomes the standard R on `[5]`.
fn move_r_copy_to_front(f: &UniformFamily, w: [Set; 3]) -> UniformFamily {
    let n = f.n();
    let support: Vec<usize> = w.iter().fold(Set::EMPTY, |a, s| a.union(*s)).elems().collect();
    let mut target: Vec<Set> = Pattern::R.edges().to_vec();
    target.sort_unstable();
    let perm = (1..=5)
        .permutations(5)
        .find_map(|img| {
            let mut table: Vec<usize> = vec![0; n];
            for (x, y) in support.iter().zip(&img) {
                table[x - 1] = *y;
            }
            let mut next = 6;
            for slot in table.iter_mut().filter(|v| **v == 0) {
                *slot = next;
                next += 1;
            }
            let mut mapped: Vec<Set> = w.iter().map(|s| s.map(&table)).collect();
            mapped.sort_unstable();
            (mapped == target).then_some(table)
        })
        .expect("an R-copy maps onto R");
    f.permute(&perm)
}

#[test]
fn heavy_pairs_are_independent() {
    let (n, k) = (9, 4);
    let threshold: usize = binom(n as i64 - 6, k as i64 - 3).unwrap().try_into().unwrap();
    let graph = disjointness_graph(&two_covers_of_r()).unwrap();
    let mut found = 0;
    for seed in 0..300 {
        let f = saturated(n, k, seed, 1);
        if tau(&f).unwrap() != 3 {
            continue;
        }
        let t3 = covers(&f, 3).unwrap().to_family();
        let Some(w) = contains_copy(&t3, Pattern::R).unwrap() else { continue };
        let g = move_r_copy_to_front(&f, w);
        let t3g: Vec<Set> = covers(&g, 3).unwrap().sets().collect();
        assert!(Pattern::R.edges().iter().all(|e| t3g.contains(e)));
        let heavy = heavy_pairs(&g, threshold).unwrap();
        assert!(graph.is_independent(&heavy), "seed {seed}: {heavy:?}");
        found += 1;
    }
    assert!(found >= 30, "only {found} families with an R-copy");
}

#[test]
fn search_matches_closed_forms_and_is_monotone() {
    for (n, k) in [(6, 3), (7, 3), (8, 3), (8, 4)] {
        let opts = SearchOptions::default();
        let v: Vec<usize> = (1..=3).map(|r| max_intersecting(n, k, r, &opts).unwrap().value).collect();
        let seq = SearchOptions { exec: Exec::Sequential, ..Default::default() };
        for r in 1..=3 {
            assert_eq!(max_intersecting(n, k, r, &seq).unwrap().value, v[r - 1]);
        }
        let top = ekrforge_core::exact::binom_u64(n - 1, k - 1) as usize;
        assert_eq!(v[0], top);
        if n > 2 * k {
            assert_eq!(v[1], top - ekrforge_core::exact::binom_u64(n - k - 1, k - 1) as usize + 1);
        }
        assert_eq!(BigInt::from(v[2]), ekrforge_core::constructions::g_size_formula(n, k).unwrap(), "({n},{k})");
        assert!(v[0] >= v[1] && v[1] >= v[2]);
    }
}

#[test]
fn g_is_saturated_at_tested_points() {
    for (n, k) in [(9, 4), (11, 5), (13, 6)] {
        let g = build_g(n, k).unwrap();
        assert!(is_intersecting(&g));
        assert!(is_saturated(&g).unwrap());
        assert_eq!(tau(&g).unwrap(), 3);
    }
}

#[test]
fn counted_and_polynomial_sizes_agree() {
    let small = SweepRange { k_min: Some(4), k_max: Some(6), n_max: Some(18) };
    let a = verify_identity_suite(SuiteId::GSize, &small, Exec::Parallel).unwrap();
    let b = verify_identity_suite(SuiteId::GPoly, &small, Exec::Parallel).unwrap();
    assert!(a.passed() && b.passed());
}

#[test]
fn certificates_are_reproducible() {
    for id in SuiteId::ALL {
        if matches!(id, SuiteId::GSize | SuiteId::Ekr | SuiteId::HiltonMilner) {
            continue;
        }
        let x = verify_identity_suite(id, &SweepRange::default(), Exec::Parallel).unwrap().without_timing();
        let y = verify_identity_suite(id, &SweepRange::default(), Exec::Sequential).unwrap().without_timing();
        assert_eq!(x.to_json_line(), y.to_json_line());
    }
}

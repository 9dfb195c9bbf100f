//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use ekrforge_core::bounds::{
    hilton_corollary_oracle, hilton_lemma_exhaustive, hilton_lemma_random, sum_bound_oracle,
    trace_bounds_certificate, verify_identity_suite, SuiteId, SweepRange,
};
use ekrforge_core::constructions::{build_g, build_r, build_s, g_size_formula};
use ekrforge_core::covers::{all_covers, covers, tau};
use ekrforge_core::exact::binom_u64;
use ekrforge_core::family::Set;
use ekrforge_core::gen::{random_saturated, rng, saturated_sample, Bias};
use ekrforge_core::search::{
    canonical_form, degcap_bounds, enumerate_optima, max_intersecting, max_intersecting_degcap, Budget,
    SearchOptions, Status,
};
use ekrforge_core::structure::{claim5_max_t, Pattern, claim6_partition, disjointness_graph, two_covers_of_r};
use ekrforge_core::{Exec, Result};

type Outcome = Result<(bool, String)>;

fn set(e: &[usize]) -> Set {
    Set::from_elems(e.iter().copied()).unwrap()
}

fn pairs(list: &[[usize; 2]]) -> Vec<Set> {
    let mut v: Vec<Set> = list.iter().map(|p| set(p)).collect();
    v.sort_unstable();
    v
}

fn ten_minutes() -> SearchOptions {
    SearchOptions { budget: Budget::time(Duration::from_secs(600)), ..Default::default() }
}

fn g_grid() -> impl Iterator<Item = (usize, usize)> {
    (3..=8).flat_map(|k| (2 * k..=2 * k + 12).map(move |n| (n, k)))
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    let mut points = 0;
    for (n, k) in g_grid() {
        points += 1;
        if num_bigint::BigInt::from(build_g(n, k)?.len()) != g_size_formula(n, k)? {
            bad.push((n, k));
        }
    }
    let cert = verify_identity_suite(SuiteId::GSize, &SweepRange::default(), Exec::Parallel)?;
    Ok((bad.is_empty() && cert.passed(), format!("{points} points, mismatches {bad:?}")))
}

fn c2() -> Outcome {
    let grid: Vec<(usize, usize)> = g_grid().collect();
    let taus = Exec::Parallel.map(&grid, |&(n, k)| build_g(n, k).and_then(|g| tau(&g)));
    let mut bad = Vec::new();
    for (p, t) in grid.iter().zip(taus) {
        if t? != 3 {
            bad.push(*p);
        }
    }
    Ok((bad.is_empty(), format!("{} points, tau != 3 at {bad:?}", grid.len())))
}

fn suite(id: SuiteId, range: SweepRange) -> Outcome {
    let c = verify_identity_suite(id, &range, Exec::Parallel)?;
    Ok((c.passed(), format!("{id}: {} checks, {} witnesses", c.params["checks"], c.witnesses.len())))
}

fn c3() -> Outcome {
    let (ok, msg) = suite(SuiteId::GPoly, SweepRange { n_max: Some(200), ..Default::default() })?;
    let c = verify_identity_suite(SuiteId::GPoly, &SweepRange { n_max: Some(200), ..Default::default() }, Exec::Parallel)?;
    let span = c.params["n_min"] == 9 && c.params["n_max"] == 200 && c.params["k_min"] == 4 && c.params["k_max"] == 6;
    Ok((ok && span, msg))
}

fn c4() -> Outcome {
    let c = verify_identity_suite(SuiteId::GapRecurrence, &SweepRange { k_min: Some(5), k_max: Some(200), ..Default::default() }, Exec::Parallel)?;
    let f5 = c.params["f5"].as_str().unwrap_or("missing");
    Ok((c.passed() && f5 == "3", format!("f(5) = {f5}, {} checks", c.params["checks"])))
}

fn c5() -> Outcome {
    let cases = [
        (7, 3, 1, binom_u64(6, 2)),
        (8, 3, 1, binom_u64(7, 2)),
        (7, 3, 2, binom_u64(6, 2) - binom_u64(3, 2) + 1),
        (8, 3, 2, binom_u64(7, 2) - binom_u64(4, 2) + 1),
        (7, 3, 3, 10),
        (8, 3, 3, 10),
        (9, 3, 3, 10),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k, r, want) in cases {
        let res = max_intersecting(n, k, r, &ten_minutes())?;
        let good = res.status == Status::ProvedOptimal && res.value as u64 == want;
        ok &= good;
        parts.push(format!("({n},{k},{r})={}{}", res.value, if good { "" } else { "!" }));
    }
    Ok((ok, parts.join(" ")))
}

fn c6() -> Outcome {
    let (sum, c_sum) = sum_bound_oracle(6, 2, 3, Exec::Parallel)?;
    let (cor, c_cor) = hilton_corollary_oracle(6, 3, 2, Exec::Parallel)?;
    let ex = hilton_lemma_exhaustive(5, 2, 2, Exec::Parallel)?;
    let rnd = hilton_lemma_random(6, 2, 3, 10_000, 0)?;
    let ok = sum == 17 && c_sum.passed() && cor == 15 && c_cor.passed() && ex.passed() && rnd.passed();
    Ok((
        ok,
        format!(
            "sum bound {sum}, corollary {cor}, lex lemma {} exhaustive pairs / {} random violations",
            ex.params["pairs"],
            rnd.witnesses.len()
        ),
    ))
}

fn c7() -> Outcome {
    let pr: Vec<Set> = covers(&build_r(5)?, 2)?.sets().collect();
    let ps: Vec<Set> = covers(&build_s(6)?, 2)?.sets().collect();
    let listed_r = pairs(&[[1, 2], [1, 3], [1, 5], [2, 4], [2, 5], [3, 4], [3, 5]]);
    let listed_s = pairs(&[[1, 2], [3, 4], [2, 4], [1, 6], [1, 4], [2, 5]]);
    let (mut sr, mut ss) = (pr.clone(), ps.clone());
    sr.sort_unstable();
    ss.sort_unstable();
    let g = disjointness_graph(&two_covers_of_r())?;
    let cycle = g.without(set(&[1, 5])).is_cycle();
    // every independent set of the graph, which covers both proof cases
    let verts = g.vertices().to_vec();
    let mut partitions = 0;
    let mut both_cases = [false, false];
    for mask in 0u32..1 << verts.len() {
        let heavy: Vec<Set> = (0..verts.len()).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        if !g.is_independent(&heavy) {
            continue;
        }
        let p = claim6_partition(&g, &heavy)?;
        if !p.is_valid_for(&g, &heavy) {
            return Ok((false, format!("invalid partition for {heavy:?}")));
        }
        both_cases[heavy.contains(&set(&[1, 5])) as usize] = true;
        partitions += 1;
    }
    let c5 = claim5_max_t();
    let ok = sr == listed_r
        && ss == listed_s
        && cycle
        && both_cases == [true, true]
        && c5.max_size <= 4
        && c5.all_excluded_confirmed();
    Ok((
        ok,
        format!(
            "|P(R)|={} |P(S)|={} G-{{1,5}} cycle={cycle} partitions={partitions} max|T|={} excluded confirmed={}",
            pr.len(),
            ps.len(),
            c5.max_size,
            c5.all_excluded_confirmed()
        ),
    ))
}

fn c8() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k, seed) in [(9, 4, 8u64), (11, 5, 8)] {
        let fams = saturated_sample(n, k, 3..=k, 1000, seed)?;
        let c = trace_bounds_certificate(&fams, Exec::Parallel)?;
        ok &= c.passed();
        parts.push(format!(
            "({n},{k}): {} families, {} windows, applied {}, {} equality cases, {} violations",
            fams.len(),
            c.params["windows"],
            c.params["applied"],
            c.params["equality_cases"],
            c.witnesses.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c9() -> Outcome {
    let mut r = rng(9);
    let mut checked = 0;
    let mut bad = 0;
    for (n, k) in [(7, 3), (8, 3), (9, 4)] {
        for i in 0..200 {
            let bias = [Bias::None, Bias::Pattern(Pattern::R), Bias::Pattern(Pattern::S)][i % 3];
            let h = random_saturated(n, k, bias, &mut r)?;
            let t = all_covers(&h)?;
            let intersecting = t.iter().enumerate().all(|(i, a)| t[i + 1..].iter().all(|b| a.intersects(*b)));
            checked += 1;
            bad += !intersecting as usize;
        }
    }
    Ok((bad == 0, format!("{checked} saturated families, {bad} with T(H) not intersecting")))
}

fn c10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in [SuiteId::FourSetBound, SuiteId::KeySteps, SuiteId::RCase, SuiteId::SCase, SuiteId::Endgame94] {
        let (good, msg) = suite(id, SweepRange::default())?;
        ok &= good;
        parts.push(msg);
    }
    Ok((ok, parts.join("; ")))
}

fn c11() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for l in [2, 3] {
        let (_, bound) = degcap_bounds(7, 3, l)?;
        let res = max_intersecting_degcap(7, 3, l, &ten_minutes())?;
        let good = bound == 13 && res.value as u64 <= bound && res.status == Status::ProvedOptimal;
        ok &= good;
        parts.push(format!("l={l}: value {} <= bound {bound}, {}", res.value, res.status.as_str()));
    }
    Ok((ok, parts.join("; ")))
}

fn c12() -> Outcome {
    let opts = SearchOptions { budget: Budget::time(Duration::from_secs(3600)), ..Default::default() };
    let res = max_intersecting(9, 4, 3, &opts)?;
    let optima = enumerate_optima(9, 4, 3, &opts)?;
    let g = canonical_form(&build_g(9, 4)?);
    let ok = res.value == 48
        && res.status == Status::ProvedOptimal
        && optima.complete
        && optima.forms.len() == 1
        && optima.forms[0] == g;
    Ok((
        ok,
        format!(
            "m(9,4,3) = {} {} in {:.1?}; {} optimal form(s), equal to G(9,4): {}",
            res.value,
            res.status.as_str(),
            res.elapsed,
            optima.forms.len(),
            optima.forms.first() == Some(&g)
        ),
    ))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 12] = [
        (1, "construction identity", Duration::from_secs(10), c1),
        (2, "covering number of G", Duration::from_secs(60), c2),
        (3, "polynomial forms", Duration::from_secs(1), c3),
        (4, "gap recurrence", Duration::from_secs(1), c4),
        (5, "search vs closed forms", Duration::from_secs(7 * 600), c5),
        (6, "cross-intersecting oracles", Duration::from_secs(600), c6),
        (7, "structure suite", Duration::from_secs(10), c7),
        (8, "trace-bound properties", Duration::from_secs(300), c8),
        (9, "covers of saturated families", Duration::from_secs(120), c9),
        (10, "inequality chains", Duration::from_secs(5), c10),
        (11, "degree-capped search", Duration::from_secs(1200), c11),
        (12, "m(9,4,3) and uniqueness", Duration::from_secs(3 * 3600), c12),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let (ok, detail) = match out {
            Ok((ok, d)) => (ok && took < limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !ok as usize;
        println!(
            "[{}] criterion {id:>2} {name}: {detail} ({took:.2?}, limit {limit:?})",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

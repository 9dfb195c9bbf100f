//! Seeded random intersecting families.
//!
//! A maximal family comes from a shuffled greedy scan: every k-set is tried
//! once, in random order, and kept if it meets everything kept so far. To
//! bias towards large covering number, some scans first try the k-sets
//! meeting each triple of a randomly placed 3-configuration, so that those
//! triples are likely to end up as covers.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covers::saturate_in_order;
use crate::error::{Error, Result};
use crate::family::{ksets, Set, UniformFamily};
use crate::structure::Pattern;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random permutation of `[n]` as a 1-based table.
pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bias {
    None,
    Pattern(Pattern),
}

/// One shuffled greedy scan. The result is intersecting and saturated.
pub fn random_saturated<R: Rng>(n: usize, k: usize, bias: Bias, rng: &mut R) -> Result<UniformFamily> {
    if k == 0 || n < 2 * k {
        return Err(Error::Precondition(format!("needs n >= 2k >= 2, got n={n}, k={k}")));
    }
    let mut all: Vec<Set> = ksets(n, k).collect();
    all.shuffle(rng);
    let order = match bias {
        Bias::None => all,
        Bias::Pattern(p) => {
            if n < 6 {
                return Err(Error::Precondition("pattern bias needs n >= 6".into()));
            }
            let perm = random_perm(n, rng);
            let triples: Vec<Set> = p.edges().iter().map(|t| t.map(&perm)).collect();
            let (hit, miss): (Vec<Set>, Vec<Set>) =
                all.into_iter().partition(|s| triples.iter().all(|t| t.intersects(*s)));
            hit.into_iter().chain(miss).collect()
        }
    };
    saturate_in_order(&UniformFamily::empty(n, k)?, order)
}

/// Draw saturated families, cycling through the biases, until one satisfies
/// `keep`. Gives up after `max_tries` scans.
pub fn random_saturated_where<R, P>(
    n: usize,
    k: usize,
    rng: &mut R,
    max_tries: usize,
    mut keep: P,
) -> Result<Option<UniformFamily>>
where
    R: Rng,
    P: FnMut(&UniformFamily) -> Result<bool>,
{
    let biases: &[Bias] = if k >= 3 && n >= 6 {
        &[Bias::Pattern(Pattern::R), Bias::Pattern(Pattern::S), Bias::None]
    } else {
        &[Bias::None]
    };
    for t in 0..max_tries {
        let f = random_saturated(n, k, biases[t % biases.len()], rng)?;
        if keep(&f)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// `count` saturated families with covering number in `taus`, drawn from
/// one seeded stream.
pub fn saturated_sample(
    n: usize,
    k: usize,
    taus: std::ops::RangeInclusive<usize>,
    count: usize,
    seed: u64,
) -> Result<Vec<UniformFamily>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_saturated_where(n, k, &mut r, 10_000, |f| Ok(taus.contains(&crate::covers::tau(f)?)))?
            .ok_or_else(|| Error::Internal(format!("no family with tau in {taus:?} at ({n},{k})")))?;
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{is_saturated, tau};
    use crate::family::is_intersecting;

    #[test]
    fn scans_are_saturated() {
        let mut r = rng(1);
        for bias in [Bias::None, Bias::Pattern(Pattern::R), Bias::Pattern(Pattern::S)] {
            let f = random_saturated(8, 3, bias, &mut r).unwrap();
            assert!(is_intersecting(&f));
            assert!(is_saturated(&f).unwrap());
        }
    }

    #[test]
    fn seeded_stream_is_reproducible() {
        let a = saturated_sample(9, 4, 3..=4, 5, 42).unwrap();
        let b = saturated_sample(9, 4, 3..=4, 5, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| tau(f).unwrap() >= 3));
    }

    #[test]
    fn perm_is_permutation() {
        let mut p = random_perm(10, &mut rng(3));
        p.sort();
        assert_eq!(p, (1..=10).collect::<Vec<_>>());
    }
}

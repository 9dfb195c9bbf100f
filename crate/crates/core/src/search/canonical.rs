use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::family::{Set, UniformFamily};

/// Isomorphism invariant of a family: the least sorted member list over all
/// relabellings of the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    n: usize,
    k: usize,
    members: Vec<u64>,
}

impl CanonicalForm {
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

    /// The canonical representative itself.
    pub fn to_family(&self) -> UniformFamily {
        UniformFamily::new(self.n, self.k, self.members.iter().map(|&m| Set(m))).expect("valid by construction")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_family())
    }
}

/// Colour refinement on elements: start from degrees, then repeatedly split
/// by the multiset of colour patterns of the members through each element.
/// Colours are ranks of label-free signatures, so the final ordered
/// partition is invariant under relabelling.
fn refine(n: usize, members: &[u64]) -> Vec<usize> {
    let mut colour: Vec<usize> = (0..n)
        .map(|x| members.iter().filter(|&&m| m >> x & 1 == 1).count())
        .collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|x| {
                let mut around: Vec<Vec<usize>> = members
                    .iter()
                    .filter(|&&m| m >> x & 1 == 1)
                    .map(|&m| {
                        let mut c: Vec<usize> = (0..n).filter(|&y| y != x && m >> y & 1 == 1).map(|y| colour[y]).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                around.sort_unstable();
                (colour[x], around)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<Vec<usize>>), usize> =
            sigs.iter().collect::<std::collections::BTreeSet<_>>().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
        let count = ranks.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

pub fn canonical_form(f: &UniformFamily) -> CanonicalForm {
    let n = f.n();
    let members: Vec<u64> = f.sets().map(|s| s.0).collect();
    let colour = refine(n, &members);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &c) in colour.iter().enumerate() {
        cells.entry(c).or_default().push(x);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();

    // label[x] = new 0-based position; each cell fills a fixed block
    let mut label = vec![0usize; n];
    let mut best: Option<Vec<u64>> = None;
    search_cells(&cells, 0, 0, &mut label, &members, &mut best);
    CanonicalForm {
        n,
        k: f.k(),
        members: best.unwrap_or_default(),
    }
}

fn search_cells(
    cells: &[Vec<usize>],
    idx: usize,
    offset: usize,
    label: &mut [usize],
    members: &[u64],
    best: &mut Option<Vec<u64>>,
) {
    let Some(cell) = cells.get(idx) else {
        let mut image: Vec<u64> = members
            .iter()
            .map(|&m| (0..label.len()).filter(|&x| m >> x & 1 == 1).fold(0u64, |a, x| a | 1 << label[x]))
            .collect();
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            *best = Some(image);
        }
        return;
    };
    let mut perm = cell.clone();
    permutations(&mut perm, 0, &mut |p| {
        for (i, &x) in p.iter().enumerate() {
            label[x] = offset + i;
        }
        search_cells(cells, idx + 1, offset + p.len(), label, members, best);
    });
}

fn permutations(v: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i + 1 >= v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, f);
        v.swap(i, j);
    }
}

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::time::Instant;

use itertools::Itertools;

use super::bits::{Bits, CAPACITY};
use crate::error::{Error, Result};
use crate::exact::binom_u64;
use crate::family::{ksets, Set, UniformFamily};
use crate::par::Exec;

/// Shallow nodes (by member count) where twin-element orbits are computed.
const SYMMETRY_DEPTH: usize = 4;
const FRONTIER_TASKS: usize = 256;
const FRONTIER_DEPTH: usize = 4;
const TICK: u64 = 256;

/// The search space: a list of allowed k-sets plus side constraints.
pub(crate) struct Problem {
    pub n: usize,
    pub k: usize,
    pub sets: Vec<u64>,
    meets: Vec<Bits>,
    /// For each required avoidance, the sets that avoid it. A solution must
    /// pick at least one set from every entry.
    constraints: Vec<Bits>,
    containing: Vec<Bits>,
    cap: Option<usize>,
    /// Index maps for element transpositions that preserve the universe.
    swaps: Vec<(usize, usize, Vec<u16>)>,
}

impl Problem {
    /// Universe: k-subsets of `[n]` accepted by `keep`, in colex order.
    /// Constraints: every `(r-1)`-subset of `[n]` must be avoided by some
    /// chosen set, i.e. the family has no cover of size `r - 1`.
    pub fn new(n: usize, k: usize, keep: impl Fn(Set) -> bool, r: usize, cap: Option<usize>) -> Result<Problem> {
        let total = binom_u64(n, k);
        if total > CAPACITY as u64 {
            return Err(Error::RangeTooLarge {
                what: format!("search over C({n},{k}) k-sets"),
                estimate: total.to_string(),
            });
        }
        let sets: Vec<u64> = ksets(n, k).filter(|&s| keep(s)).map(|s| s.0).collect();
        let m = sets.len();
        let meets = (0..m)
            .map(|i| {
                let mut b = Bits::EMPTY;
                (0..m).filter(|&j| sets[i] & sets[j] != 0).for_each(|j| b.insert(j));
                b
            })
            .collect();
        let constraints = if r >= 2 {
            ksets(n, r - 1)
                .map(|q| {
                    let mut b = Bits::EMPTY;
                    (0..m).filter(|&j| sets[j] & q.0 == 0).for_each(|j| b.insert(j));
                    b
                })
                .collect()
        } else {
            Vec::new()
        };
        let containing = (0..n)
            .map(|x| {
                let mut b = Bits::EMPTY;
                (0..m).filter(|&j| sets[j] >> x & 1 == 1).for_each(|j| b.insert(j));
                b
            })
            .collect();
        let index: std::collections::HashMap<u64, u16> =
            sets.iter().enumerate().map(|(i, &s)| (s, i as u16)).collect();
        let swaps = (0..n)
            .tuple_combinations()
            .filter_map(|(x, y)| {
                let perm: Option<Vec<u16>> = sets
                    .iter()
                    .map(|&s| index.get(&swap_bits(s, x, y)).copied())
                    .collect();
                perm.map(|p| (x, y, p))
            })
            .collect();
        Ok(Problem {
            n,
            k,
            sets,
            meets,
            constraints,
            containing,
            cap,
            swaps,
        })
    }

    pub fn family(&self, chosen: &Bits) -> UniformFamily {
        UniformFamily::new(self.n, self.k, chosen.iter().map(|i| Set(self.sets[i]))).expect("universe sets are valid k-sets")
    }

    pub fn root_with(&self, first: Option<usize>) -> Node {
        match first {
            Some(i) => {
                let mut chosen = Bits::EMPTY;
                chosen.insert(i);
                let mut cand = self.meets[i];
                cand.remove(i);
                Node { chosen, cand, count: 1 }
            }
            None => Node {
                chosen: Bits::EMPTY,
                cand: Bits::full(self.sets.len()),
                count: 0,
            },
        }
    }

    fn satisfied(&self, chosen: &Bits) -> bool {
        self.constraints.iter().all(|q| chosen.intersects(q))
    }

    /// Apply the degree cap and forced inclusions. `false` means no feasible
    /// completion exists.
    fn propagate(&self, node: &mut Node) -> bool {
        loop {
            if let Some(cap) = self.cap {
                for c in &self.containing {
                    let d = node.chosen.and(c).len();
                    if d > cap {
                        return false;
                    }
                    if d == cap {
                        node.cand = node.cand.and_not(c);
                    }
                }
            }
            let mut forced = None;
            for q in &self.constraints {
                if node.chosen.intersects(q) {
                    continue;
                }
                let avail = node.cand.and(q);
                if avail.is_empty() {
                    return false;
                }
                if let Some(v) = avail.single() {
                    forced = Some(v);
                    break;
                }
            }
            match forced {
                Some(v) => node.add(v, &self.meets[v]),
                None => return true,
            }
        }
    }

    /// Greedy partition of `cand` into classes of pairwise disjoint sets.
    /// Returns vertices with their class number, classes in increasing order.
    fn colour(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(cand.len());
        let mut left = *cand;
        let mut colour = 0;
        while !left.is_empty() {
            colour += 1;
            let mut avail = left;
            while let Some(v) = avail.first() {
                out.push((v, colour));
                left.remove(v);
                avail = avail.and_not(&self.meets[v]);
            }
        }
        out
    }

    /// Orbit key function for the twin-element symmetries of `node`: elements
    /// `x, y` are twins when swapping them fixes both the chosen and the
    /// candidate sets. Returns the twin classes as masks.
    fn twin_classes(&self, node: &Node) -> Vec<u64> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (x, y, perm) in &self.swaps {
            let (rx, ry) = (find(&mut parent, *x), find(&mut parent, *y));
            if rx == ry {
                continue;
            }
            let fixes = |b: &Bits| b.iter().all(|i| b.contains(perm[i] as usize));
            if fixes(&node.chosen) && fixes(&node.cand) {
                parent[ry] = rx;
            }
        }
        let mut classes: Vec<u64> = Vec::new();
        let mut root_of = vec![usize::MAX; self.n];
        for x in 0..self.n {
            let r = find(&mut parent, x);
            if root_of[r] == usize::MAX {
                root_of[r] = classes.len();
                classes.push(0);
            }
            classes[root_of[r]] |= 1 << x;
        }
        classes
    }
}

fn swap_bits(s: u64, x: usize, y: usize) -> u64 {
    let (bx, by) = (s >> x & 1, s >> y & 1);
    if bx == by {
        s
    } else {
        s ^ (1 << x | 1 << y)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    chosen: Bits,
    cand: Bits,
    count: usize,
}

impl Node {
    fn add(&mut self, v: usize, meets: &Bits) {
        self.chosen.insert(v);
        self.count += 1;
        self.cand = self.cand.and(meets);
        self.cand.remove(v);
    }

    fn child(&self, v: usize, rest: &Bits, meets: &Bits) -> Node {
        let mut c = Node {
            chosen: self.chosen,
            cand: *rest,
            count: self.count,
        };
        c.add(v, meets);
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Maximise; `floor` is a value already attained elsewhere that only a
    /// strictly larger solution may replace.
    Optimize { floor: usize },
    /// Collect every feasible solution of exactly this size.
    Enumerate { target: usize },
}

pub(crate) struct Limits {
    pub deadline: Instant,
    pub node_limit: Option<u64>,
    pub stop: AtomicBool,
    pub nodes: AtomicU64,
}

impl Limits {
    pub fn new(deadline: Instant, node_limit: Option<u64>) -> Limits {
        Limits {
            deadline,
            node_limit,
            stop: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub best: usize,
    pub witness: Option<Bits>,
    pub found: Vec<Bits>,
}

struct Shared<'a> {
    prob: &'a Problem,
    mode: Mode,
    limits: &'a Limits,
    global: AtomicUsize,
    by_task: Vec<AtomicUsize>,
}

struct Worker<'a> {
    sh: &'a Shared<'a>,
    task: usize,
    best: usize,
    lower: usize,
    witness: Option<Bits>,
    found: Vec<Bits>,
    ticks: u64,
}

impl<'a> Worker<'a> {
    fn new(sh: &'a Shared<'a>, task: usize) -> Self {
        let mut w = Worker {
            sh,
            task,
            best: 0,
            lower: 0,
            witness: None,
            found: Vec::new(),
            ticks: 0,
        };
        w.refresh_lower();
        w
    }

    fn refresh_lower(&mut self) {
        let floor = match self.sh.mode {
            Mode::Optimize { floor } => floor,
            Mode::Enumerate { .. } => 0,
        };
        self.lower = self.sh.by_task[..self.task]
            .iter()
            .map(|a| a.load(Relaxed))
            .fold(floor, usize::max);
    }

    fn stopped(&mut self) -> bool {
        let lim = self.sh.limits;
        if let Some(cap) = lim.node_limit {
            if lim.nodes.fetch_add(1, Relaxed) + 1 >= cap {
                lim.stop.store(true, Relaxed);
            }
        } else {
            self.ticks += 1;
        }
        if self.ticks % TICK == 0 {
            if self.ticks > 0 {
                lim.nodes.fetch_add(TICK, Relaxed);
            }
            if Instant::now() >= lim.deadline {
                lim.stop.store(true, Relaxed);
            }
            self.refresh_lower();
        }
        lim.stop.load(Relaxed)
    }

    fn flush(&self) {
        self.sh.limits.nodes.fetch_add(self.ticks % TICK, Relaxed);
    }

    /// A subtree whose best possible size is `bound` cannot matter.
    fn prunes(&self, bound: usize) -> bool {
        match self.sh.mode {
            Mode::Enumerate { target } => bound < target,
            Mode::Optimize { .. } => {
                bound <= self.best.max(self.lower) || bound < self.sh.global.load(Relaxed)
            }
        }
    }

    fn record(&mut self, node: &Node) {
        match self.sh.mode {
            Mode::Enumerate { target } => {
                if node.count == target {
                    self.found.push(node.chosen);
                }
            }
            Mode::Optimize { .. } => {
                if node.count > self.best.max(self.lower) {
                    self.best = node.count;
                    self.witness = Some(node.chosen);
                    self.sh.by_task[self.task].store(node.count, Relaxed);
                    self.sh.global.fetch_max(node.count, Relaxed);
                }
            }
        }
    }

    fn visit(&mut self, mut node: Node) {
        if self.stopped() || !self.sh.prob.propagate(&mut node) {
            return;
        }
        if self.sh.prob.satisfied(&node.chosen) {
            self.record(&node);
        }
        if !node.cand.is_empty() {
            self.branch(&node, |w, child| w.visit(child));
        }
    }

    /// Generate the children of a propagated node, handing each to `sink`
    /// in a fixed order. Every solution of the subtree lies under one child
    /// or is equivalent, by a twin swap, to one that does.
    fn branch<F: FnMut(&mut Self, Node)>(&mut self, node: &Node, mut sink: F) {
        let prob = self.sh.prob;
        let order = prob.colour(&node.cand);
        let colours = order.last().map_or(0, |&(_, c)| c);
        if self.prunes(node.count + colours) {
            return;
        }
        let classes = (node.count <= SYMMETRY_DEPTH).then(|| prob.twin_classes(node));
        let mut keys: HashSet<Vec<u8>> = HashSet::new();
        let mut fresh = |v: usize| match &classes {
            Some(cl) if cl.len() < prob.n => {
                let key = cl.iter().map(|c| (c & prob.sets[v]).count_ones() as u8).collect();
                keys.insert(key)
            }
            _ => true,
        };
        let mut rest = node.cand;
        if let Some(q) = self.tightest_constraint(node) {
            // some chosen set must come from `q`
            for v in q.iter() {
                if fresh(v) {
                    let child = node.child(v, &rest, &prob.meets[v]);
                    sink(self, child);
                }
                rest.remove(v);
            }
            return;
        }
        for &(v, c) in order.iter().rev() {
            if self.prunes(node.count + c) {
                return;
            }
            if fresh(v) {
                let child = node.child(v, &rest, &prob.meets[v]);
                sink(self, child);
            }
            rest.remove(v);
        }
    }

    /// The unsatisfied constraint with the fewest candidates left.
    fn tightest_constraint(&self, node: &Node) -> Option<Bits> {
        self.sh
            .prob
            .constraints
            .iter()
            .filter(|q| !node.chosen.intersects(q))
            .map(|q| node.cand.and(q))
            .min_by_key(|a| a.len())
    }
}

enum Item {
    Solution(Node),
    Task(Node),
}

/// Exhaustive search from `root`. The tree is split into a fixed frontier
/// of subtrees, explored in parallel with a shared incumbent. A subtree may
/// prune on ties only against itself and earlier subtrees, so the reported
/// witness is the first optimum in depth-first order whatever the schedule.
pub(crate) fn run(prob: &Problem, root: Node, mode: Mode, limits: &Limits, exec: Exec) -> Outcome {
    let probe = Shared {
        prob,
        mode,
        limits,
        global: AtomicUsize::new(0),
        by_task: vec![AtomicUsize::new(0)],
    };
    let mut items = vec![Item::Task(root)];
    for _ in 0..FRONTIER_DEPTH {
        if items.len() >= FRONTIER_TASKS {
            break;
        }
        let mut w = Worker::new(&probe, 0);
        let mut next = Vec::new();
        for item in items {
            match item {
                Item::Solution(_) => next.push(item),
                Item::Task(mut node) => {
                    if !prob.propagate(&mut node) {
                        continue;
                    }
                    if prob.satisfied(&node.chosen) {
                        next.push(Item::Solution(node));
                    }
                    if !node.cand.is_empty() {
                        let mut kids = Vec::new();
                        w.branch(&node, |_, c| kids.push(c));
                        next.extend(kids.into_iter().map(Item::Task));
                    }
                }
            }
        }
        items = next;
    }

    let sh = Shared {
        prob,
        mode,
        limits,
        global: AtomicUsize::new(0),
        by_task: (0..items.len()).map(|_| AtomicUsize::new(0)).collect(),
    };
    let mut solved: Vec<Option<Outcome>> = items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Item::Solution(node) => {
                let mut w = Worker::new(&sh, i);
                w.record(node);
                Some(Outcome {
                    best: w.best,
                    witness: w.witness,
                    found: w.found,
                })
            }
            Item::Task(_) => None,
        })
        .collect();
    let idx: Vec<usize> = (0..items.len()).collect();
    let results = exec.map(&idx, |&i| match &items[i] {
        Item::Solution(_) => None,
        Item::Task(node) => {
            let mut w = Worker::new(&sh, i);
            w.visit(*node);
            w.flush();
            Some(Outcome {
                best: w.best,
                witness: w.witness,
                found: w.found,
            })
        }
    });
    for (slot, r) in solved.iter_mut().zip(results) {
        if r.is_some() {
            *slot = r;
        }
    }

    let mut out = Outcome::default();
    for o in solved.into_iter().flatten() {
        if o.best > out.best {
            out.best = o.best;
            out.witness = o.witness;
        }
        out.found.extend(o.found);
    }
    out
}

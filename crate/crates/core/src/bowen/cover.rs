//! Minimum-cost integer covers of the target atoms: an exact tree DP for
//! nested windows, branch-and-bound per connected component otherwise, and
//! a greedy / dual-packing bracket beyond the atom budget.

use std::ops::{AddAssign, SubAssign};

use num_traits::Zero;

use super::family::{AtomSpace, BallFamily};

pub(crate) trait Cost:
    Clone + PartialOrd + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
}

impl<T> Cost for T where T: Clone + PartialOrd + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T> {}

/// Balls with nested windows form a forest: a ball's children are the balls
/// on the next window inside it.
#[derive(Clone, Debug)]
pub(crate) struct Laminar {
    levels: Vec<Vec<u32>>,
    children: Vec<Vec<u32>>,
}

impl Laminar {
    /// `None` unless the windows are nested and every atom lies in one ball
    /// per window.
    pub fn build(family: &BallFamily, atoms: &AtomSpace) -> Option<Laminar> {
        if !family.is_nested() {
            return None;
        }
        let depth = family.windows.len();
        let mut levels = vec![Vec::new(); depth];
        let mut children = vec![Vec::new(); family.len()];
        let mut seen = vec![false; family.len()];
        let mut chain = vec![0u32; depth];
        for a in 0..atoms.len() {
            let balls = atoms.balls_of(a);
            if balls.len() != depth {
                return None;
            }
            for &b in balls {
                chain[family.balls[b as usize].window] = b;
            }
            for (lvl, &b) in chain.iter().enumerate() {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    levels[lvl].push(b);
                    if lvl > 0 {
                        children[chain[lvl - 1] as usize].push(b);
                    }
                }
            }
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        Some(Laminar { levels, children })
    }

    /// Optimal cover value and the chosen balls (self on ties).
    pub fn solve<C: Cost>(&self, weights: &[C]) -> (C, Vec<usize>) {
        let mut opt: Vec<Option<C>> = vec![None; weights.len()];
        let mut take_self = vec![false; weights.len()];
        for lvl in (0..self.levels.len()).rev() {
            for &b in &self.levels[lvl] {
                let b = b as usize;
                let w = &weights[b];
                let kids = &self.children[b];
                if kids.is_empty() {
                    opt[b] = Some(w.clone());
                    take_self[b] = true;
                    continue;
                }
                let mut sum = C::zero();
                for &c in kids {
                    sum += opt[c as usize].as_ref().expect("child solved");
                }
                if *w <= sum {
                    opt[b] = Some(w.clone());
                    take_self[b] = true;
                } else {
                    opt[b] = Some(sum);
                }
            }
        }
        let mut total = C::zero();
        let mut chosen = Vec::new();
        let mut stack: Vec<u32> = self.levels.first().cloned().unwrap_or_default();
        for &r in &stack {
            total += opt[r as usize].as_ref().expect("root solved");
        }
        while let Some(b) = stack.pop() {
            if take_self[b as usize] {
                chosen.push(b as usize);
            } else {
                stack.extend(&self.children[b as usize]);
            }
        }
        chosen.sort_unstable();
        (total, chosen)
    }
}

/// A connected component of the atom–ball incidence graph.
#[derive(Clone, Debug)]
pub(crate) struct Component {
    pub balls: Vec<u32>,
    pub atoms: Vec<u32>,
}

/// Components over the given atoms; balls meeting none of them are dropped.
pub(crate) fn components(atoms: &AtomSpace, n_balls: usize, active: &[u32]) -> Vec<Component> {
    let mut parent: Vec<usize> = (0..n_balls).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &a in active {
        let bs = atoms.balls_of(a as usize);
        for w in bs.windows(2) {
            let (x, y) = (find(&mut parent, w[0] as usize), find(&mut parent, w[1] as usize));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut index = vec![usize::MAX; n_balls];
    let mut comps: Vec<Component> = Vec::new();
    for &a in active {
        let root = find(&mut parent, atoms.balls_of(a as usize)[0] as usize);
        if index[root] == usize::MAX {
            index[root] = comps.len();
            comps.push(Component {
                balls: Vec::new(),
                atoms: Vec::new(),
            });
        }
        comps[index[root]].atoms.push(a);
    }
    for comp in &mut comps {
        let mut bs: Vec<u32> = comp
            .atoms
            .iter()
            .flat_map(|&a| atoms.balls_of(a as usize).iter().copied())
            .collect();
        bs.sort_unstable();
        bs.dedup();
        comp.balls = bs;
    }
    comps
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn count_and(&self, o: &Bits) -> u32 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn remove(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

/// Component in local coordinates.
struct Local {
    weights: Vec<f64>,
    ball_bits: Vec<Bits>,
    atom_balls: Vec<Vec<usize>>,
    n_atoms: usize,
}

impl Local {
    fn new(comp: &Component, atoms: &AtomSpace, weights: &[f64]) -> Local {
        let n_atoms = comp.atoms.len();
        let ball_pos = |b: u32| comp.balls.binary_search(&b).expect("ball in component");
        let mut ball_bits = vec![Bits::new(n_atoms); comp.balls.len()];
        let mut atom_balls = Vec::with_capacity(n_atoms);
        for (i, &a) in comp.atoms.iter().enumerate() {
            let bs: Vec<usize> = atoms.balls_of(a as usize).iter().map(|&b| ball_pos(b)).collect();
            for &b in &bs {
                ball_bits[b].set(i);
            }
            atom_balls.push(bs);
        }
        Local {
            weights: comp.balls.iter().map(|&b| weights[b as usize]).collect(),
            ball_bits,
            atom_balls,
            n_atoms,
        }
    }

    fn all(&self) -> Bits {
        let mut u = Bits::new(self.n_atoms);
        for i in 0..self.n_atoms {
            u.set(i);
        }
        u
    }

    fn greedy(&self) -> (f64, Vec<usize>) {
        let mut uncovered = self.all();
        let mut chosen = Vec::new();
        let mut cost = 0.0;
        while !uncovered.is_empty() {
            let mut best: Option<(f64, usize)> = None;
            for (b, bits) in self.ball_bits.iter().enumerate() {
                let gain = bits.count_and(&uncovered);
                if gain == 0 {
                    continue;
                }
                let ratio = self.weights[b] / gain as f64;
                if best.is_none_or(|(r, _)| ratio < r) {
                    best = Some((ratio, b));
                }
            }
            let (_, b) = best.expect("component atoms are covered");
            uncovered.remove(&self.ball_bits[b]);
            cost += self.weights[b];
            chosen.push(b);
        }
        chosen.sort_unstable();
        (cost, chosen)
    }

    /// Sum over pairwise ball-disjoint uncovered atoms of their cheapest ball.
    fn independent_bound(&self, uncovered: &Bits) -> f64 {
        let mut blocked = Bits::new(self.n_atoms);
        let mut lb = 0.0;
        for a in uncovered.ones() {
            if blocked.get(a) {
                continue;
            }
            let mut cheapest = f64::INFINITY;
            for &b in &self.atom_balls[a] {
                cheapest = cheapest.min(self.weights[b]);
                for (w, o) in blocked.0.iter_mut().zip(&self.ball_bits[b].0) {
                    *w |= o;
                }
            }
            lb += cheapest;
        }
        lb
    }
}

struct Search<'a> {
    local: &'a Local,
    best: f64,
    best_set: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl Search<'_> {
    fn improves(&self, cost: f64) -> bool {
        cost < self.best - 1e-12 * self.best.abs()
    }

    fn dfs(&mut self, uncovered: &Bits, cost: f64, chosen: &mut Vec<usize>) {
        if uncovered.is_empty() {
            if self.improves(cost) {
                self.best = cost;
                self.best_set = chosen.clone();
            }
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        if !self.improves(cost + self.local.independent_bound(uncovered)) {
            return;
        }
        let pivot = uncovered
            .ones()
            .min_by_key(|&a| self.local.atom_balls[a].len())
            .expect("nonempty");
        for &b in &self.local.atom_balls[pivot] {
            let mut next = uncovered.clone();
            next.remove(&self.local.ball_bits[b]);
            chosen.push(b);
            self.dfs(&next, cost + self.local.weights[b], chosen);
            chosen.pop();
            if self.aborted {
                return;
            }
        }
    }
}

pub(crate) const NODE_LIMIT: u64 = 2_000_000;

/// Exact minimum cover of one component (global ball indices), or `None`
/// when the node limit is hit.
pub(crate) fn branch_and_bound(
    comp: &Component,
    atoms: &AtomSpace,
    weights: &[f64],
    node_limit: u64,
) -> Option<Vec<usize>> {
    let local = Local::new(comp, atoms, weights);
    let (gcost, gset) = local.greedy();
    let mut search = Search {
        local: &local,
        best: gcost,
        best_set: gset,
        nodes: 0,
        node_limit,
        aborted: false,
    };
    let mut chosen = Vec::new();
    search.dfs(&local.all(), 0.0, &mut chosen);
    if search.aborted {
        return None;
    }
    let mut set: Vec<usize> = search.best_set.iter().map(|&b| comp.balls[b] as usize).collect();
    set.sort_unstable();
    Some(set)
}

pub(crate) fn greedy_cover(comp: &Component, atoms: &AtomSpace, weights: &[f64]) -> Vec<usize> {
    let local = Local::new(comp, atoms, weights);
    local.greedy().1.iter().map(|&b| comp.balls[b] as usize).collect()
}

/// A feasible packing `y` (atoms in order, each taking the least residual
/// capacity of its balls); `Σ y` is a lower bound on any cover.
pub(crate) fn packing_bound<C: Cost>(comp: &Component, atoms: &AtomSpace, weights: &[C]) -> C {
    let mut residual: Vec<C> = comp.balls.iter().map(|&b| weights[b as usize].clone()).collect();
    let pos = |b: u32| comp.balls.binary_search(&b).expect("ball in component");
    let mut total = C::zero();
    for &a in &comp.atoms {
        let bs = atoms.balls_of(a as usize);
        let mut y = residual[pos(bs[0])].clone();
        for &b in &bs[1..] {
            if residual[pos(b)] < y {
                y = residual[pos(b)].clone();
            }
        }
        for &b in bs {
            residual[pos(b)] -= &y;
        }
        total += &y;
    }
    total
}

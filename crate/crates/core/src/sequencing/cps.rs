//! Exact Phase-1 ordering under constrained position shifting.
//!
//! For a fixed order the Phase-1 times follow a forward rule: committed
//! aircraft keep their committed time, every other aircraft lands at
//! `max(E, min(L, R))` where `R` is the largest `t_i + S_ij` over aircraft
//! placed before it. The search below enumerates orders depth first and
//! prunes with a bound that is valid for every completion of a prefix.

use super::{sorted_indices, WindowMember};
use crate::traffic::{separation_between, WakeMatrix};
use crate::trajopt::ObjectiveWeights;

#[derive(Debug, Clone, PartialEq)]
pub struct Phase1Item {
    pub id: usize,
    pub corner: usize,
    pub stream_index: usize,
    pub earliest: f64,
    pub latest: f64,
    pub absorb: f64,
    pub committed_t: Option<f64>,
}

/// A window in FOFFS order together with its separation matrix.
#[derive(Debug, Clone)]
pub struct Phase1Problem {
    pub items: Vec<Phase1Item>,
    sep: Vec<f64>,
    pub weights: ObjectiveWeights,
    stream_pred: Vec<Option<usize>>,
}

fn rel_tol(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

impl Phase1Problem {
    /// `sep[i * n + j]` is the separation when item `i` leads item `j`.
    pub fn new(items: Vec<Phase1Item>, sep: Vec<f64>, weights: ObjectiveWeights) -> Self {
        let n = items.len();
        assert_eq!(sep.len(), n * n, "separation matrix must be n x n");
        let stream_pred = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| items[i].corner == items[j].corner && items[i].stream_index < items[j].stream_index)
                    .max_by_key(|&i| items[i].stream_index)
            })
            .collect();
        Self {
            items,
            sep,
            weights,
            stream_pred,
        }
    }

    pub fn from_members(members: &[WindowMember<'_>], wake: &WakeMatrix, weights: ObjectiveWeights) -> Self {
        let order = sorted_indices(members, false);
        let items: Vec<Phase1Item> = order
            .iter()
            .map(|&m| {
                let w = &members[m];
                Phase1Item {
                    id: w.id(),
                    corner: w.aircraft.corner,
                    stream_index: w.aircraft.stream_index,
                    earliest: w.window.earliest,
                    latest: w.window.latest,
                    absorb: w.window.absorb,
                    committed_t: w.committed_t(),
                }
            })
            .collect();
        let mut sep = Vec::with_capacity(order.len() * order.len());
        for &a in &order {
            for &b in &order {
                sep.push(separation_between(&members[a].aircraft.kind, &members[b].aircraft.kind, wake));
            }
        }
        Self::new(items, sep, weights)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn sep(&self, leader: usize, trailer: usize) -> f64 {
        self.sep[leader * self.items.len() + trailer]
    }

    fn cap(&self, j: usize) -> f64 {
        let it = &self.items[j];
        it.committed_t.unwrap_or(it.latest.max(it.earliest))
    }

    fn time_after(&self, j: usize, release: f64) -> f64 {
        let it = &self.items[j];
        match it.committed_t {
            Some(t) => t,
            None => it.earliest.max(it.latest.min(release)),
        }
    }

    /// Forward-rule landing times for `order` (item indices).
    pub fn times(&self, order: &[usize]) -> Vec<f64> {
        let mut times: Vec<f64> = Vec::with_capacity(order.len());
        for (p, &j) in order.iter().enumerate() {
            let release = order[..p]
                .iter()
                .zip(&times)
                .map(|(&i, &t)| t + self.sep(i, j))
                .fold(f64::NEG_INFINITY, f64::max);
            times.push(self.time_after(j, release));
        }
        times
    }

    /// Phase-1 objective of a complete order under the forward rule.
    pub fn objective(&self, order: &[usize]) -> f64 {
        let times = self.times(order);
        let mut sigma = 0.0;
        let mut alpha = 0.0;
        let mut excess = 0.0;
        let mut t_max = f64::NEG_INFINITY;
        for (p, &j) in order.iter().enumerate() {
            let t = times[p];
            let it = &self.items[j];
            for (q, &i) in order[..p].iter().enumerate() {
                sigma += (times[q] + self.sep(i, j) - t).max(0.0);
            }
            alpha += (t - it.latest).max(0.0);
            if it.committed_t.is_none() {
                excess += (t - it.earliest - it.absorb).max(0.0);
            }
            t_max = t_max.max(t);
        }
        if order.is_empty() {
            return 0.0;
        }
        let w = &self.weights;
        w.safe * (sigma + alpha) + w.thru * t_max + w.delay * excess
    }

    /// CPS displacement and stream precedence check for a complete order.
    pub fn is_admissible(&self, order: &[usize], k: usize) -> bool {
        let n = self.items.len();
        if order.len() != n {
            return false;
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &j) in order.iter().enumerate() {
            if j >= n || pos[j] != usize::MAX {
                return false;
            }
            pos[j] = p;
        }
        (0..n).all(|j| pos[j].abs_diff(j) <= k && self.stream_pred[j].is_none_or(|i| pos[i] < pos[j]))
    }

    pub fn stream_pred(&self, j: usize) -> Option<usize> {
        self.stream_pred[j]
    }
}

pub type PairSet = Vec<(usize, usize)>;

/// Swap and far pair sets over items ranked `ranks[i]` (0-based FOFFS rank).
/// Pairs are `(i, j)` with `rank(j) > rank(i)`.
pub fn cps_swap_sets(ranks: &[usize], k: usize) -> (PairSet, PairSet) {
    let mut swap = Vec::new();
    let mut far = Vec::new();
    for (i, &ri) in ranks.iter().enumerate() {
        for (j, &rj) in ranks.iter().enumerate() {
            if rj > ri {
                if rj - ri <= k {
                    swap.push((i, j));
                } else {
                    far.push((i, j));
                }
            }
        }
    }
    (swap, far)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Phase1Solution {
    /// Item indices into the problem's FOFFS-ordered items.
    pub order: Vec<usize>,
    pub ids: Vec<usize>,
    pub objective: f64,
    pub nodes: u64,
    pub node_limit_hit: bool,
}

struct Search<'p> {
    problem: &'p Phase1Problem,
    k: usize,
    n: usize,
    placed: Vec<bool>,
    order: Vec<usize>,
    times: Vec<f64>,
    // per depth: release lower bound and separation shortfall against the cap
    release: Vec<Vec<f64>>,
    shortfall: Vec<Vec<f64>>,
    best: f64,
    best_order: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    hit: bool,
}

#[derive(Clone, Copy)]
struct Partial {
    sigma: f64,
    alpha: f64,
    excess: f64,
    t_max: f64,
}

impl Search<'_> {
    fn bound(&self, depth: usize, acc: Partial) -> f64 {
        let p = self.problem;
        let w = &p.weights;
        let mut sigma = acc.sigma + acc.alpha;
        let mut excess = acc.excess;
        let mut t_max = acc.t_max;
        for j in (0..self.n).filter(|&j| !self.placed[j]) {
            let it = &p.items[j];
            sigma += self.shortfall[depth][j];
            let lb = p.time_after(j, self.release[depth][j]);
            match it.committed_t {
                Some(t) => sigma += (t - it.latest).max(0.0),
                None => excess += (lb - it.earliest - it.absorb).max(0.0),
            }
            t_max = t_max.max(lb);
        }
        w.safe * sigma + w.thru * t_max + w.delay * excess
    }

    fn place(&mut self, depth: usize, j: usize, acc: Partial) -> Partial {
        let p = self.problem;
        let it = &p.items[j];
        let t = p.time_after(j, self.release[depth][j]);
        let mut sigma = acc.sigma;
        for (&i, &ti) in self.order.iter().zip(&self.times) {
            sigma += (ti + p.sep(i, j) - t).max(0.0);
        }
        let (lo, hi) = self.release.split_at_mut(depth + 1);
        let (slo, shi) = self.shortfall.split_at_mut(depth + 1);
        hi[0].copy_from_slice(&lo[depth]);
        shi[0].copy_from_slice(&slo[depth]);
        for u in (0..self.n).filter(|&u| !self.placed[u] && u != j) {
            let s = t + p.sep(j, u);
            hi[0][u] = hi[0][u].max(s);
            shi[0][u] += (s - p.cap(u)).max(0.0);
        }
        self.placed[j] = true;
        self.order.push(j);
        self.times.push(t);
        Partial {
            sigma,
            alpha: acc.alpha + (t - it.latest).max(0.0),
            excess: acc.excess
                + if it.committed_t.is_none() {
                    (t - it.earliest - it.absorb).max(0.0)
                } else {
                    0.0
                },
            t_max: acc.t_max.max(t),
        }
    }

    fn unplace(&mut self, j: usize) {
        self.placed[j] = false;
        self.order.pop();
        self.times.pop();
    }

    fn candidates(&self, depth: usize) -> Vec<usize> {
        let lo = depth.saturating_sub(self.k);
        let hi = (depth + self.k).min(self.n - 1);
        let ready = |j: usize| !self.placed[j] && self.problem.stream_pred[j].is_none_or(|i| self.placed[i]);
        if depth >= self.k && !self.placed[depth - self.k] {
            let forced = depth - self.k;
            return if ready(forced) { vec![forced] } else { Vec::new() };
        }
        (lo..=hi).filter(|&j| ready(j)).collect()
    }

    fn dfs(&mut self, depth: usize, acc: Partial) {
        if self.hit {
            return;
        }
        if depth == self.n {
            let value = self.problem.objective(&self.order);
            if value < self.best - rel_tol(self.best) {
                self.best = value;
                self.best_order.clone_from(&self.order);
            }
            return;
        }
        for j in self.candidates(depth) {
            if self.nodes >= self.node_limit {
                self.hit = true;
                return;
            }
            self.nodes += 1;
            let next = self.place(depth, j, acc);
            if self.bound(depth + 1, next) < self.best - rel_tol(self.best) {
                self.dfs(depth + 1, next);
            }
            self.unplace(j);
            if self.hit {
                return;
            }
        }
    }
}

/// Best order with every aircraft within `k` positions of its FOFFS rank.
/// `k = 0` returns the FOFFS order without searching.
pub fn solve_phase1_cps(problem: &Phase1Problem, k: usize, node_limit: u64) -> Phase1Solution {
    let n = problem.len();
    let foffs: Vec<usize> = (0..n).collect();
    let foffs_value = problem.objective(&foffs);
    let ids = |order: &[usize]| order.iter().map(|&j| problem.items[j].id).collect();
    if k == 0 || n <= 1 {
        return Phase1Solution {
            ids: ids(&foffs),
            order: foffs,
            objective: foffs_value,
            nodes: 0,
            node_limit_hit: false,
        };
    }
    let mut search = Search {
        problem,
        k,
        n,
        placed: vec![false; n],
        order: Vec::with_capacity(n),
        times: Vec::with_capacity(n),
        release: vec![vec![f64::NEG_INFINITY; n]; n + 1],
        shortfall: vec![vec![0.0; n]; n + 1],
        best: foffs_value,
        best_order: foffs,
        nodes: 0,
        node_limit,
        hit: false,
    };
    search.dfs(
        0,
        Partial {
            sigma: 0.0,
            alpha: 0.0,
            excess: 0.0,
            t_max: f64::NEG_INFINITY,
        },
    );
    Phase1Solution {
        ids: ids(&search.best_order),
        objective: search.best,
        order: search.best_order,
        nodes: search.nodes,
        node_limit_hit: search.hit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: usize, corner: usize, e: f64, committed: Option<f64>) -> Phase1Item {
        Phase1Item {
            id,
            corner,
            stream_index: id,
            earliest: e,
            latest: e + 600.0,
            absorb: 30.0,
            committed_t: committed,
        }
    }

    #[test]
    fn swap_set_sizes() {
        let ranks: Vec<usize> = (0..5).collect();
        assert_eq!(cps_swap_sets(&ranks, 1).0.len(), 4);
        assert_eq!(cps_swap_sets(&ranks, 2).0.len(), 7);
        let (s, f) = cps_swap_sets(&ranks, 4);
        assert_eq!(s.len(), 10);
        assert!(f.is_empty());
        for n in 2..12usize {
            let ranks: Vec<usize> = (0..n).collect();
            for k in 1..n {
                assert_eq!(cps_swap_sets(&ranks, k).0.len(), k * n - k * (k + 1) / 2);
            }
        }
    }

    #[test]
    fn heavy_then_small_swaps() {
        // Heavy leads a Small by 150 s, Small leads Heavy by 85 s
        let items = vec![item(1, 0, 0.0, None), item(2, 1, 0.0, None)];
        let sep = vec![0.0, 150.0, 85.0, 0.0];
        let p = Phase1Problem::new(items, sep, ObjectiveWeights::default());
        let sol = solve_phase1_cps(&p, 1, u64::MAX);
        assert_eq!(sol.ids, vec![2, 1]);
        assert!(sol.objective < p.objective(&[0, 1]));
        assert_eq!(solve_phase1_cps(&p, 0, u64::MAX).ids, vec![1, 2]);
    }

    #[test]
    fn committed_time_is_kept() {
        let items = vec![item(1, 0, 0.0, Some(50.0)), item(2, 1, 10.0, None)];
        let sep = vec![0.0, 90.0, 90.0, 0.0];
        let p = Phase1Problem::new(items, sep, ObjectiveWeights::default());
        assert_eq!(p.times(&[0, 1]), vec![50.0, 140.0]);
        assert_eq!(p.times(&[1, 0]), vec![10.0, 50.0]);
    }

    #[test]
    fn admissibility() {
        let items = vec![item(1, 0, 0.0, None), item(2, 0, 5.0, None), item(3, 1, 9.0, None)];
        let p = Phase1Problem::new(items, vec![60.0; 9], ObjectiveWeights::default());
        assert!(p.is_admissible(&[0, 2, 1], 1));
        assert!(!p.is_admissible(&[1, 0, 2], 1), "same stream overtakes");
        assert!(!p.is_admissible(&[2, 0, 1], 1), "shift of two");
    }
}

//! Event-driven rolling-horizon scheduler.
//!
//! Each aircraft is processed once, at its entry time. Its lookahead window
//! holds the committed aircraft that can still interact with it plus every
//! uncommitted aircraft entering before the entrant's free-flight time to the
//! FAF has elapsed. The window is ordered (Phase 1), assigned grid
//! trajectories (Phase 2), and only the entrant's trajectory is committed.
//!
//! Tentative trajectories of the other window members are kept as previews.
//! A preview is reused instead of solving when it provably equals what the
//! solve would return; see [`Scheduler::preview_is_consistent`].

use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::time::Instant;

use crate::error::Result;
use crate::geometry::ApproachLayout;
use crate::sequencing::{
    arrival_window, nominal_eta, solve_phase1_cps, sorted_indices, ArrivalWindow, Phase1Problem,
    Policy, WindowMember,
};
use crate::traffic::{separation_between, Aircraft, Scenario, WakeMatrix};
use crate::trajopt::{greedy_grid_assign, CandidateTables, GridSpec, ObjectiveWeights, SpeedBounds, TrajectoryDecision};
use crate::wind::WindContext;

#[derive(Debug, Clone)]
pub struct SchedulerConfig {
    pub layout: ApproachLayout<f64>,
    pub bounds: SpeedBounds,
    pub weights: ObjectiveWeights,
    pub wake: WakeMatrix,
    /// Branch-and-bound node budget per Phase-1 solve.
    pub node_limit: u64,
    pub use_cache: bool,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            layout: ApproachLayout::standard(),
            bounds: SpeedBounds::default(),
            weights: ObjectiveWeights::default(),
            wake: WakeMatrix::standard(),
            node_limit: 200_000,
            use_cache: true,
        }
    }
}

/// Per-scenario data shared by every policy run under one wind sample and grid.
#[derive(Debug)]
pub struct ScenarioContext<'s> {
    pub scenario: &'s Scenario,
    pub wind: WindContext<f64>,
    pub grid: GridSpec,
    pub eta: Vec<f64>,
    pub windows: Vec<ArrivalWindow>,
    pub tables: CandidateTables,
    max_sep: f64,
}

impl<'s> ScenarioContext<'s> {
    pub fn new(scenario: &'s Scenario, wind: WindContext<f64>, grid: GridSpec, config: &SchedulerConfig) -> Result<Self> {
        for (i, a) in scenario.aircraft.iter().enumerate() {
            assert_eq!(a.id, i + 1, "scenario ids must be 1..n in entry order");
        }
        let (layout, bounds) = (&config.layout, &config.bounds);
        let eta = scenario
            .aircraft
            .iter()
            .map(|a| nominal_eta(a, wind, layout, bounds))
            .collect::<Result<Vec<_>>>()?;
        let windows = scenario
            .aircraft
            .iter()
            .map(|a| arrival_window(a, wind, layout, bounds))
            .collect::<Result<Vec<_>>>()?;
        let tables = CandidateTables::build(&scenario.aircraft, layout, wind, bounds, &grid)?;
        let max_sep = scenario
            .aircraft
            .iter()
            .flat_map(|a| scenario.aircraft.iter().map(move |b| separation_between(&a.kind, &b.kind, &config.wake)))
            .fold(0.0, f64::max);
        Ok(Self {
            scenario,
            wind,
            grid,
            eta,
            windows,
            tables,
            max_sep,
        })
    }

    fn aircraft(&self, idx: usize) -> &'s Aircraft {
        &self.scenario.aircraft[idx]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntryStats {
    pub id: usize,
    pub solve_time_s: f64,
    pub window_size: usize,
    pub nodes: u64,
    pub node_limit_hit: bool,
    pub cache_hit: bool,
}

#[derive(Debug)]
struct Snapshot {
    window: HashSet<usize>,
    /// Tentative decisions of every member that was uncommitted, keyed by index.
    decisions: HashMap<usize, TrajectoryDecision>,
    /// Committed count when the snapshot was stored.
    version: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    /// Committed decisions in id order.
    pub decisions: Vec<TrajectoryDecision>,
    pub entries: Vec<EntryStats>,
}

pub struct Scheduler<'c, 's> {
    ctx: &'c ScenarioContext<'s>,
    config: &'c SchedulerConfig,
    policy: Policy,
    committed: Vec<Option<TrajectoryDecision>>,
    commit_pos: Vec<usize>,
    commit_order: Vec<usize>,
    previews: HashMap<usize, Rc<Snapshot>>,
    entries: Vec<EntryStats>,
}

fn same_trajectory(a: &TrajectoryDecision, b: &TrajectoryDecision) -> bool {
    (a.id, a.d, a.v_leg, a.v_arc, a.v_fin, a.t, a.sigma) == (b.id, b.d, b.v_leg, b.v_arc, b.v_fin, b.t, b.sigma)
}

impl<'c, 's> Scheduler<'c, 's> {
    pub fn new(ctx: &'c ScenarioContext<'s>, config: &'c SchedulerConfig, policy: Policy) -> Self {
        let n = ctx.scenario.aircraft.len();
        Self {
            ctx,
            config,
            policy,
            committed: vec![None; n],
            commit_pos: vec![usize::MAX; n],
            commit_order: Vec::with_capacity(n),
            previews: HashMap::new(),
            entries: Vec::with_capacity(n),
        }
    }

    pub fn is_done(&self) -> bool {
        self.commit_order.len() == self.committed.len()
    }

    pub fn committed(&self) -> impl Iterator<Item = &TrajectoryDecision> {
        self.commit_order.iter().filter_map(|&i| self.committed[i].as_ref())
    }

    fn by_entry(&self) -> bool {
        self.policy == Policy::Fefs
    }

    fn order_key(&self, idx: usize) -> (f64, usize) {
        let a = self.ctx.aircraft(idx);
        if self.by_entry() {
            (a.tau, a.id)
        } else {
            (self.ctx.eta[idx], a.id)
        }
    }

    fn key_less(&self, a: usize, b: usize) -> bool {
        let (ka, kb) = (self.order_key(a), self.order_key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.cmp(&kb.1)).is_lt()
    }

    /// Indices of the window of entrant `i`: committed survivors first, in
    /// commit order, then the uncommitted lookahead in entry order.
    pub fn build_window(&self, i: usize) -> Vec<usize> {
        let ctx = self.ctx;
        // tau_i + H_i is the entrant's nominal ETA
        let horizon = ctx.eta[i];
        let mut ahead = Vec::new();
        let mut j = i;
        while j < ctx.scenario.aircraft.len() && ctx.aircraft(j).tau <= horizon {
            if self.committed[j].is_none() {
                ahead.push(j);
            }
            j += 1;
        }
        let min_e = ahead.iter().map(|&j| ctx.windows[j].earliest).fold(f64::INFINITY, f64::min);
        let mut window: Vec<usize> = self
            .commit_order
            .iter()
            .copied()
            .filter(|&c| self.committed[c].is_some_and(|d| d.t >= min_e - ctx.max_sep))
            .collect();
        window.extend(ahead);
        window
    }

    /// True when the stored preview of `i` is exactly what a fresh solve over
    /// `window` would commit.
    ///
    /// For entry-order and nominal-ETA orders the reference key is global, so
    /// the predecessors of `i` are the same in both windows. The preview then
    /// stands when (1) the current window is contained in the preview window,
    /// (2) every aircraft committed since the preview committed its preview
    /// trajectory, and (3) those newly committed aircraft that land behind `i`
    /// or behind any uncommitted predecessor of `i` are already separated from
    /// the previewed trajectory. With position shifting the committed set must
    /// not have grown since the preview was stored.
    fn preview_is_consistent(&self, i: usize, window: &[usize]) -> Option<TrajectoryDecision> {
        if !self.config.use_cache {
            return None;
        }
        let snap = self.previews.get(&i)?;
        if !window.iter().all(|j| snap.window.contains(j)) {
            return None;
        }
        if self.policy.max_shift().is_some_and(|k| k > 0) && self.commit_order.len() != snap.version {
            return None;
        }
        let fresh: Vec<usize> = window
            .iter()
            .copied()
            .filter(|&j| self.commit_pos[j] != usize::MAX && self.commit_pos[j] >= snap.version)
            .collect();
        for &f in &fresh {
            let now = self.committed[f].as_ref()?;
            if !same_trajectory(snap.decisions.get(&f)?, now) {
                return None;
            }
        }
        let ahead = window
            .iter()
            .copied()
            .filter(|&j| j == i || (self.committed[j].is_none() && self.key_less(j, i)));
        let wake = &self.config.wake;
        for a in ahead {
            let tentative = snap.decisions.get(&a)?;
            let kind = &self.ctx.aircraft(a).kind;
            for &f in fresh.iter().filter(|&&f| self.key_less(a, f)) {
                let t_f = self.committed[f].as_ref()?.t;
                if tentative.t + separation_between(kind, &self.ctx.aircraft(f).kind, wake) > t_f {
                    return None;
                }
            }
        }
        snap.decisions.get(&i).copied()
    }

    fn members(&self, window: &[usize]) -> Vec<WindowMember<'s>> {
        window
            .iter()
            .map(|&j| WindowMember {
                aircraft: self.ctx.aircraft(j),
                eta: self.ctx.eta[j],
                window: self.ctx.windows[j],
                committed: self.committed[j],
            })
            .collect()
    }

    /// Processes the next entrant and commits it.
    ///
    /// # Panics
    /// If every aircraft is already committed.
    pub fn process_next(&mut self) -> Result<TrajectoryDecision> {
        let i = self.commit_order.len();
        assert!(i < self.committed.len(), "all aircraft already processed");
        let start = Instant::now();
        let window = self.build_window(i);
        let mut stats = EntryStats {
            id: self.ctx.aircraft(i).id,
            window_size: window.len(),
            ..EntryStats::default()
        };
        let decision = match self.preview_is_consistent(i, &window) {
            Some(d) => {
                stats.cache_hit = true;
                d
            }
            None => self.solve(i, &window, &mut stats)?,
        };
        let decision = TrajectoryDecision {
            committed: true,
            ..decision
        };
        self.commit_pos[i] = self.commit_order.len();
        self.commit_order.push(i);
        self.committed[i] = Some(decision);
        self.previews.remove(&i);
        stats.solve_time_s = start.elapsed().as_secs_f64();
        self.entries.push(stats);
        Ok(decision)
    }

    fn solve(&mut self, i: usize, window: &[usize], stats: &mut EntryStats) -> Result<TrajectoryDecision> {
        let members = self.members(window);
        let order: Vec<usize> = match self.policy {
            Policy::Cps(k) if k > 0 => {
                let problem = Phase1Problem::from_members(&members, &self.config.wake, self.config.weights);
                let sol = solve_phase1_cps(&problem, usize::from(k), self.config.node_limit);
                stats.nodes = sol.nodes;
                stats.node_limit_hit = sol.node_limit_hit;
                let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(m, w)| (w.id(), m)).collect();
                sol.ids.iter().map(|id| pos[id]).collect()
            }
            Policy::Fefs => sorted_indices(&members, true),
            _ => sorted_indices(&members, false),
        };
        let decisions = greedy_grid_assign(&members, &order, &self.ctx.tables, &self.config.wake, &self.config.weights)?;
        let mut mine = None;
        let mut tentative = HashMap::new();
        for (&m, d) in order.iter().zip(&decisions) {
            let idx = window[m];
            if idx == i {
                mine = Some(*d);
            }
            if self.committed[idx].is_none() {
                tentative.insert(idx, *d);
            }
        }
        let snapshot = Rc::new(Snapshot {
            window: window.iter().copied().collect(),
            decisions: tentative,
            version: self.commit_order.len(),
        });
        for &idx in window {
            if idx != i && self.committed[idx].is_none() {
                self.previews.insert(idx, Rc::clone(&snapshot));
            }
        }
        Ok(mine.expect("entrant is in its own window"))
    }

    pub fn finish(self) -> ScenarioOutcome {
        ScenarioOutcome {
            decisions: self.committed.into_iter().map(|d| d.expect("every aircraft committed")).collect(),
            entries: self.entries,
        }
    }
}

/// Runs every entry event of `ctx` under `policy`.
pub fn run_scenario(ctx: &ScenarioContext<'_>, policy: Policy, config: &SchedulerConfig) -> Result<ScenarioOutcome> {
    let mut scheduler = Scheduler::new(ctx, config, policy);
    while !scheduler.is_done() {
        scheduler.process_next()?;
    }
    Ok(scheduler.finish())
}

/// Realized separation shortfall per aircraft, in landing order of committed
/// times: `max(0, max over earlier landings of (t_i + S_ij) - t_j)`.
/// Returned in the order of `decisions`.
pub fn realized_violations(aircraft: &[Aircraft], decisions: &[TrajectoryDecision], wake: &WakeMatrix) -> Vec<f64> {
    let mut order: Vec<usize> = (0..decisions.len()).collect();
    order.sort_by(|&a, &b| decisions[a].t.total_cmp(&decisions[b].t).then(decisions[a].id.cmp(&decisions[b].id)));
    let mut out = vec![0.0; decisions.len()];
    for (p, &j) in order.iter().enumerate() {
        let release = order[..p]
            .iter()
            .map(|&i| decisions[i].t + separation_between(&aircraft[i].kind, &aircraft[j].kind, wake))
            .fold(f64::NEG_INFINITY, f64::max);
        out[j] = (release - decisions[j].t).max(0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traffic::{build_scenario_with_rates, FleetCatalog, TrafficParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scenario(seed: u64, rates: [u32; 4]) -> Scenario {
        build_scenario_with_rates(
            &ApproachLayout::standard(),
            &TrafficParams::default(),
            &FleetCatalog::standard(),
            &rates,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
    }

    #[test]
    fn empty_scenario() {
        let s = Scenario {
            aircraft: Vec::new(),
            rates: vec![0; 4],
            t_max: 3600.0,
        };
        let cfg = SchedulerConfig::default();
        let ctx = ScenarioContext::new(&s, WindContext::calm(), GridSpec::default(), &cfg).unwrap();
        let out = run_scenario(&ctx, Policy::Foffs, &cfg).unwrap();
        assert!(out.decisions.is_empty() && out.entries.is_empty());
    }

    #[test]
    fn lone_entrant_flies_free() {
        let full = scenario(4, [3, 3, 3, 3]);
        let s = Scenario {
            aircraft: full.aircraft[..1].to_vec(),
            rates: full.rates.clone(),
            t_max: full.t_max,
        };
        let cfg = SchedulerConfig::default();
        let ctx = ScenarioContext::new(&s, WindContext::new(5.0), GridSpec::default(), &cfg).unwrap();
        let d = run_scenario(&ctx, Policy::Cps(2), &cfg).unwrap().decisions[0];
        let fin_max = cfg.bounds.fin_range(s.aircraft[0].kind.v_ref).1;
        assert_eq!((d.d, d.v_leg, d.v_arc, d.v_fin, d.sigma), (0.0, 240.0, 200.0, fin_max, 0.0));
        assert_eq!(d.t, ctx.eta[0]);
    }

    #[test]
    fn one_touch_and_window_membership() {
        let s = scenario(8, [20, 25, 10, 15]);
        let cfg = SchedulerConfig::default();
        let ctx = ScenarioContext::new(&s, WindContext::new(5.0), GridSpec::default(), &cfg).unwrap();
        let mut sched = Scheduler::new(&ctx, &cfg, Policy::Cps(1));
        let mut history: Vec<TrajectoryDecision> = Vec::new();
        while !sched.is_done() {
            let i = history.len();
            assert!(sched.build_window(i).contains(&i));
            sched.process_next().unwrap();
            let now: Vec<TrajectoryDecision> = sched.committed().copied().collect();
            assert_eq!(&now[..history.len()], &history[..]);
            history = now;
        }
        let out = sched.finish();
        assert_eq!(out.decisions.len(), s.aircraft.len());
        assert!(out.decisions.iter().enumerate().all(|(i, d)| d.id == i + 1 && d.committed));
    }

    #[test]
    fn violation_metric_orders_by_landing_time() {
        let cat = FleetCatalog::standard();
        let mk = |id: usize, kind: &str| Aircraft {
            id,
            corner: 0,
            stream_index: id,
            entry_point: crate::geometry::Point2::new(0.0, 10.0),
            tau: 0.0,
            kind: cat.get(kind).unwrap().clone(),
        };
        let planes = vec![mk(1, "A359"), mk(2, "B735")];
        let dec = |id, t| TrajectoryDecision {
            id,
            d: 0.0,
            v_leg: 240.0,
            v_arc: 200.0,
            v_fin: 140.0,
            t,
            sigma: 0.0,
            committed: true,
        };
        let v = realized_violations(&planes, &[dec(1, 100.0), dec(2, 200.0)], &WakeMatrix::standard());
        assert_eq!(v, vec![0.0, 50.0]);
        let v = realized_violations(&planes, &[dec(1, 200.0), dec(2, 100.0)], &WakeMatrix::standard());
        assert_eq!(v, vec![0.0, 0.0]);
    }
}

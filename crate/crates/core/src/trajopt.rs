//! Fixed-sequence trajectory assignment on the `(d, v)` grid.
//!
//! Aircraft are visited in landing order. Each uncommitted aircraft takes the
//! grid tuple of lowest cost among those that land no earlier than every
//! predecessor's separation release and its own stream predecessor. When no
//! tuple is late enough the latest-landing tuple is taken and the shortfall
//! becomes its separation slack.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{headings_of, path_geometry, ApproachLayout, SegmentSpeeds};
use crate::sequencing::WindowMember;
use crate::traffic::{separation_between, Aircraft, WakeMatrix};
use crate::wind::{corrected_duration, WindContext};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveWeights {
    pub safe: f64,
    pub thru: f64,
    pub delay: f64,
    pub eff: f64,
    pub speed: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            safe: 1e4,
            thru: 1.0,
            delay: 0.5,
            eff: 0.1,
            speed: 0.01,
        }
    }
}

impl ObjectiveWeights {
    /// Human-readable notes for weights that break `safe >> thru >> delay >= eff >= speed`.
    pub fn hierarchy_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let all = [self.safe, self.thru, self.delay, self.eff, self.speed];
        if all.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            out.push("weights must be finite and nonnegative".to_string());
        }
        if self.safe < 10.0 * self.thru {
            out.push("safe weight is not much larger than thru".to_string());
        }
        if self.thru < 2.0 * self.delay {
            out.push("thru weight is not much larger than delay".to_string());
        }
        if self.delay < self.eff || self.eff < self.speed {
            out.push("expected delay >= eff >= speed".to_string());
        }
        out
    }
}

/// Per-aircraft control bounds. Final-segment speeds are relative to the
/// type's reference landing speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBounds {
    pub vl_min: f64,
    pub vl_max: f64,
    pub vtheta_min: f64,
    pub vtheta_max: f64,
    pub vf_below_ref: f64,
    pub vf_above_ref: f64,
    /// nmi
    pub d_max: f64,
}

impl Default for SpeedBounds {
    fn default() -> Self {
        Self {
            vl_min: 180.0,
            vl_max: 240.0,
            vtheta_min: 130.0,
            vtheta_max: 200.0,
            vf_below_ref: 5.0,
            vf_above_ref: 20.0,
            d_max: 27.5,
        }
    }
}

impl SpeedBounds {
    pub fn fin_range(&self, v_ref: f64) -> (f64, f64) {
        (v_ref - self.vf_below_ref, v_ref + self.vf_above_ref)
    }

    /// Normalized distance of each segment speed from its maximum, summed.
    pub fn speed_term(&self, speeds: SegmentSpeeds<f64>, v_ref: f64) -> f64 {
        let (f_lo, f_hi) = self.fin_range(v_ref);
        norm_gap(self.vl_min, self.vl_max, speeds.leg)
            + norm_gap(self.vtheta_min, self.vtheta_max, speeds.arc)
            + norm_gap(f_lo, f_hi, speeds.fin)
    }
}

fn norm_gap(lo: f64, hi: f64, v: f64) -> f64 {
    if hi > lo {
        (hi - v) / (hi - lo)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// nmi
    pub delta_d: f64,
    /// kts
    pub delta_s: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            delta_d: 0.5,
            delta_s: 5.0,
        }
    }
}

/// `lo, lo + step, ...` strictly below `hi`, then `hi` itself.
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::EmptyGrid(format!("range [{lo}, {hi}] with step {step}")));
    }
    let tol = 1e-9 * step;
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let v = lo + f64::from(i) * step;
        if v >= hi - tol {
            break;
        }
        out.push(v);
        i += 1;
    }
    out.push(hi);
    Ok(out)
}

pub fn extension_grid(d_max: f64, delta_d: f64) -> Result<Vec<f64>> {
    grid_points(0.0, d_max, delta_d)
}

/// Monotone speed tuples in tie-break preference order: larger `v_fin`
/// first, then larger `v_arc`, then larger `v_leg`.
pub fn speed_tuples(bounds: &SpeedBounds, v_ref: f64, delta_s: f64) -> Result<Vec<SegmentSpeeds<f64>>> {
    let (f_lo, f_hi) = bounds.fin_range(v_ref);
    let mut legs = grid_points(bounds.vl_min, bounds.vl_max, delta_s)?;
    let mut arcs = grid_points(bounds.vtheta_min, bounds.vtheta_max, delta_s)?;
    let mut fins = grid_points(f_lo, f_hi, delta_s)?;
    legs.reverse();
    arcs.reverse();
    fins.reverse();
    let mut out = Vec::new();
    for &fin in &fins {
        for &arc in arcs.iter().filter(|&&a| a >= fin) {
            for &leg in legs.iter().filter(|&&l| l >= arc) {
                out.push(SegmentSpeeds::new(leg, arc, fin));
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyGrid(format!(
            "no speed tuple with v_leg >= v_arc >= v_fin for v_ref {v_ref}"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryDecision {
    pub id: usize,
    /// nmi
    pub d: f64,
    pub v_leg: f64,
    pub v_arc: f64,
    pub v_fin: f64,
    /// FAF arrival time, s.
    pub t: f64,
    /// Separation shortfall against leaders, s.
    pub sigma: f64,
    pub committed: bool,
}

impl TrajectoryDecision {
    pub fn speeds(&self) -> SegmentSpeeds<f64> {
        SegmentSpeeds::new(self.v_leg, self.v_arc, self.v_fin)
    }
}

/// One aircraft's share of the unified objective.
pub fn per_aircraft_cost(
    decision: &TrajectoryDecision,
    t_free: f64,
    is_last: bool,
    weights: &ObjectiveWeights,
    bounds: &SpeedBounds,
    v_ref: f64,
) -> f64 {
    let w = weights;
    let last = if is_last { w.thru * decision.t } else { 0.0 };
    w.safe * decision.sigma
        + last
        + w.delay * (decision.t - t_free)
        + w.eff * decision.d
        + w.speed * bounds.speed_term(decision.speeds(), v_ref)
}

/// A decision with the data its cost needs.
#[derive(Debug, Clone, Copy)]
pub struct ScoredDecision {
    pub decision: TrajectoryDecision,
    pub t_free: f64,
    pub v_ref: f64,
}

/// Unified objective with the makespan charged to the latest arrival.
pub fn evaluate_unified_objective(entries: &[ScoredDecision], weights: &ObjectiveWeights, bounds: &SpeedBounds) -> f64 {
    let last = entries
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.decision.t.total_cmp(&b.1.decision.t).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| per_aircraft_cost(&e.decision, e.t_free, Some(i) == last, weights, bounds, e.v_ref))
        .sum()
}

/// What an aircraft's choice is scored against.
#[derive(Debug, Clone, Default)]
pub struct PlacementContext {
    pub tau: f64,
    /// Free-flight FAF time, s.
    pub t_free: f64,
    /// Latest `t_i + S_ix` over aircraft sequenced before, s.
    pub release: f64,
    /// Hard lower bound: release and same-stream predecessors, s.
    pub t_lo: f64,
    /// Makespan reference: `max(t_free, predecessor times)`.
    pub makespan_ref: f64,
    /// `(S_xf, t_f)` for committed aircraft sequenced after.
    pub followers: Vec<(f64, f64)>,
}

impl PlacementContext {
    /// Time-dependent part of the cost; nondecreasing in `t`.
    pub fn time_cost(&self, t: f64, w: &ObjectiveWeights) -> f64 {
        let mut over = 0.0;
        for &(sep, t_f) in &self.followers {
            over += (t + sep - t_f).max(0.0);
        }
        w.safe * over + w.thru * (t - self.makespan_ref).max(0.0) + w.delay * (t - self.t_free)
    }

    pub fn base_cost(&self, t: f64, d: f64, w: &ObjectiveWeights) -> f64 {
        self.time_cost(t, w) + w.eff * d
    }

    pub fn candidate_cost(&self, t: f64, d: f64, speed_term: f64, w: &ObjectiveWeights) -> f64 {
        self.base_cost(t, d, w) + w.speed * speed_term
    }
}

/// Every grid candidate of one `(corner, type)` pair, sorted by duration
/// within each extension.
#[derive(Debug, Clone)]
pub struct CandidateTable {
    pub speeds: Vec<SegmentSpeeds<f64>>,
    pub speed_terms: Vec<f64>,
    slices: Vec<ExtensionSlice>,
}

#[derive(Debug, Clone)]
struct ExtensionSlice {
    d_index: usize,
    d: f64,
    entries: Vec<(f64, u32)>,
}

/// Chosen grid point. `d_index` and `tuple` index the table's grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridChoice {
    pub d_index: usize,
    pub tuple: usize,
    pub d: f64,
    pub speeds: SegmentSpeeds<f64>,
    pub t: f64,
}

impl CandidateTable {
    pub fn build(
        aircraft: &Aircraft,
        layout: &ApproachLayout<f64>,
        wind: WindContext<f64>,
        bounds: &SpeedBounds,
        grid: &GridSpec,
    ) -> Result<Self> {
        let speeds = speed_tuples(bounds, aircraft.kind.v_ref, grid.delta_s)?;
        let speed_terms = speeds.iter().map(|s| bounds.speed_term(*s, aircraft.kind.v_ref)).collect();
        let mut slices = Vec::new();
        for (d_index, d) in extension_grid(bounds.d_max, grid.delta_d)?.into_iter().enumerate() {
            let Ok(geometry) = path_geometry(aircraft.entry_point, layout, d) else {
                continue;
            };
            let comps = wind.components(headings_of(aircraft.entry_point, &geometry));
            let mut entries: Vec<(f64, u32)> = speeds
                .iter()
                .enumerate()
                .filter_map(|(i, s)| corrected_duration(&geometry, *s, comps).ok().map(|dur| (dur, i as u32)))
                .collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if !entries.is_empty() {
                slices.push(ExtensionSlice { d_index, d, entries });
            }
        }
        if slices.is_empty() {
            return Err(Error::EmptyGrid(format!("no flyable grid point for aircraft {}", aircraft.id)));
        }
        Ok(Self {
            speeds,
            speed_terms,
            slices,
        })
    }

    fn choice(&self, slice: &ExtensionSlice, tau: f64, dur: f64, tuple: u32) -> GridChoice {
        GridChoice {
            d_index: slice.d_index,
            tuple: tuple as usize,
            d: slice.d,
            speeds: self.speeds[tuple as usize],
            t: tau + dur,
        }
    }

    /// Lowest `(cost, d, tuple)` among candidates landing at or after
    /// `ctx.t_lo`; the latest-landing candidate when there is none.
    pub fn select(&self, ctx: &PlacementContext, w: &ObjectiveWeights) -> GridChoice {
        let mut best: Option<(f64, GridChoice)> = None;
        let floor = ctx.time_cost(ctx.t_lo, w);
        for slice in &self.slices {
            if let Some((cost, _)) = best {
                if floor + w.eff * slice.d > cost {
                    break;
                }
            }
            let first = slice.entries.partition_point(|&(dur, _)| ctx.tau + dur < ctx.t_lo);
            for &(dur, tuple) in &slice.entries[first..] {
                let t = ctx.tau + dur;
                let base = ctx.base_cost(t, slice.d, w);
                if let Some((cost, _)) = best {
                    if base > cost {
                        break;
                    }
                }
                let cost = base + w.speed * self.speed_terms[tuple as usize];
                let better = match &best {
                    None => true,
                    Some((c, b)) => cost < *c || (cost == *c && (slice.d_index, tuple as usize) < (b.d_index, b.tuple)),
                };
                if better {
                    best = Some((cost, self.choice(slice, ctx.tau, dur, tuple)));
                }
            }
        }
        if let Some((_, choice)) = best {
            return choice;
        }
        let mut latest: Option<GridChoice> = None;
        for slice in &self.slices {
            let max_dur = slice.entries.last().map(|e| e.0).unwrap_or(f64::NEG_INFINITY);
            let start = slice.entries.partition_point(|&(dur, _)| dur < max_dur);
            let (dur, tuple) = slice.entries[start];
            let c = self.choice(slice, ctx.tau, dur, tuple);
            if latest.is_none_or(|l| c.t > l.t) {
                latest = Some(c);
            }
        }
        latest.expect("table has at least one slice")
    }
}

/// Candidate tables keyed by corner and reference speed.
#[derive(Debug, Clone, Default)]
pub struct CandidateTables {
    tables: HashMap<(usize, u64), CandidateTable>,
}

impl CandidateTables {
    fn key(a: &Aircraft) -> (usize, u64) {
        (a.corner, a.kind.v_ref.to_bits())
    }

    pub fn build<'a>(
        aircraft: impl IntoIterator<Item = &'a Aircraft>,
        layout: &ApproachLayout<f64>,
        wind: WindContext<f64>,
        bounds: &SpeedBounds,
        grid: &GridSpec,
    ) -> Result<Self> {
        let mut tables = HashMap::new();
        for a in aircraft {
            if let std::collections::hash_map::Entry::Vacant(e) = tables.entry(Self::key(a)) {
                e.insert(CandidateTable::build(a, layout, wind, bounds, grid)?);
            }
        }
        Ok(Self { tables })
    }

    pub fn get(&self, a: &Aircraft) -> Option<&CandidateTable> {
        self.tables.get(&Self::key(a))
    }
}

/// Builds the placement context for the member at `pos` of `order` given
/// landing times `times` of the members sequenced before it.
pub fn placement_context(
    members: &[WindowMember<'_>],
    order: &[usize],
    times: &[f64],
    pos: usize,
    wake: &WakeMatrix,
) -> PlacementContext {
    let x = &members[order[pos]];
    let kind = &x.aircraft.kind;
    let mut release = f64::NEG_INFINITY;
    let mut stream = f64::NEG_INFINITY;
    let mut latest_pred = f64::NEG_INFINITY;
    for (&m, &t) in order[..pos].iter().zip(times) {
        let a = members[m].aircraft;
        release = release.max(t + separation_between(&a.kind, kind, wake));
        if a.corner == x.aircraft.corner {
            stream = stream.max(t);
        }
        latest_pred = latest_pred.max(t);
    }
    let followers = order[pos + 1..]
        .iter()
        .filter_map(|&m| {
            let f = &members[m];
            f.committed_t()
                .map(|t_f| (separation_between(kind, &f.aircraft.kind, wake), t_f))
        })
        .collect();
    PlacementContext {
        tau: x.aircraft.tau,
        t_free: x.window.earliest,
        release,
        t_lo: release.max(stream),
        makespan_ref: x.window.earliest.max(latest_pred),
        followers,
    }
}

/// Assigns grid decisions to every uncommitted member of `order` (member
/// indices in landing order). Returns one decision per member of `order`;
/// committed members are passed through unchanged.
pub fn greedy_grid_assign(
    members: &[WindowMember<'_>],
    order: &[usize],
    tables: &CandidateTables,
    wake: &WakeMatrix,
    weights: &ObjectiveWeights,
) -> Result<Vec<TrajectoryDecision>> {
    let mut times = Vec::with_capacity(order.len());
    let mut out = Vec::with_capacity(order.len());
    for pos in 0..order.len() {
        let member = &members[order[pos]];
        let decision = match member.committed {
            Some(d) => d,
            None => {
                let ctx = placement_context(members, order, &times, pos, wake);
                let table = tables
                    .get(member.aircraft)
                    .ok_or_else(|| Error::EmptyGrid(format!("no candidate table for aircraft {}", member.id())))?;
                let c = table.select(&ctx, weights);
                TrajectoryDecision {
                    id: member.id(),
                    d: c.d,
                    v_leg: c.speeds.leg,
                    v_arc: c.speeds.arc,
                    v_fin: c.speeds.fin,
                    t: c.t,
                    sigma: (ctx.release - c.t).max(0.0),
                    committed: false,
                }
            }
        };
        times.push(decision.t);
        out.push(decision);
    }
    Ok(out)
}

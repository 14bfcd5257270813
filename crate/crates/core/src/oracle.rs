//! Brute-force references for the optimized code paths.
//!
//! Everything here is deliberately slow and written without the fast
//! machinery it checks: the path is integrated numerically from a
//! root-found tangent point, Phase-1 orders are enumerated outright,
//! trajectory choices are scanned over the whole grid, and stream counts
//! come from Erlang distribution functions.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::geometry::{
    max_feasible_extension, path_geometry, rf_arc_angle_expanded, ApproachLayout, Point2, SegmentSpeeds,
};
use crate::harness::seeds;
use crate::real::SECONDS_PER_HOUR;
use crate::sequencing::{
    arrival_window, nominal_eta, solve_phase1_cps, Phase1Item, Phase1Problem, WindowMember,
};
use crate::traffic::{generate_stream, separation_between, Aircraft, FleetCatalog, WakeMatrix};
use crate::trajopt::{
    evaluate_unified_objective, extension_grid, greedy_grid_assign, speed_tuples, CandidateTable,
    CandidateTables, GridSpec, ObjectiveWeights, PlacementContext, ScoredDecision, SpeedBounds,
};
use crate::wind::{wind_corrected_arrival_time, WindContext};

/// Numerically integrated route from an entry fix to the FAF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedPath {
    pub tangent_point: Point2<f64>,
    pub leg_len: f64,
    pub arc_angle: f64,
    pub arc_len: f64,
    pub extension: f64,
}

impl IntegratedPath {
    /// Still-air time, s.
    pub fn duration(&self, speeds: SegmentSpeeds<f64>) -> f64 {
        (self.leg_len / speeds.leg + self.arc_len / speeds.arc + self.extension / speeds.fin) * SECONDS_PER_HOUR
    }
}

fn polyline_len(points: impl Iterator<Item = Point2<f64>>) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<Point2<f64>> = None;
    for p in points {
        if let Some(q) = prev {
            total += p.sub(q).norm();
        }
        prev = Some(p);
    }
    total
}

/// Integrates the leg, arc and final segments as fine polylines.
///
/// The turn runs counterclockwise north of the centerline and clockwise
/// south of it, so that it ends heading `+x`. The tangent point is the root
/// of `cross(turn direction, point - entry)` on the circle, bracketed on a
/// coarse angular scan and refined by bisection.
pub fn integrate_path(entry: Point2<f64>, layout: &ApproachLayout<f64>, d: f64, steps: usize) -> Option<IntegratedPath> {
    let r = layout.turn_radius;
    let north = entry.y > layout.faf.y;
    let s = if north { 1.0 } else { -1.0 };
    let c = Point2::new(layout.faf.x - d, layout.faf.y + s * r);
    if entry.sub(c).norm() <= r {
        return None;
    }
    let on_circle = |phi: f64| Point2::new(c.x + r * phi.cos(), c.y + r * phi.sin());
    let dir = |phi: f64| Point2::new(-s * phi.sin(), s * phi.cos());
    // positive when the entry lies behind the point along the direction of travel
    let f = |phi: f64| dir(phi).cross(on_circle(phi).sub(entry));
    let along = |phi: f64| dir(phi).dot(on_circle(phi).sub(entry));
    let scan = 3600;
    let mut tangent = None;
    for i in 0..scan {
        let (a, b) = (
            std::f64::consts::TAU * i as f64 / scan as f64,
            std::f64::consts::TAU * (i + 1) as f64 / scan as f64,
        );
        if f(a) == 0.0 || f(a).signum() != f(b).signum() {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo).signum() == f(mid).signum() && f(mid) != 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let phi = 0.5 * (lo + hi);
            if along(phi) > 0.0 {
                tangent = Some(phi);
                break;
            }
        }
    }
    let phi_t = tangent?;
    let tp = on_circle(phi_t);
    // arc ends where the turn direction is +x: phi = -pi/2 (north) or pi/2 (south)
    let phi_end = -s * std::f64::consts::FRAC_PI_2;
    let sweep = (s * (phi_end - phi_t)).rem_euclid(std::f64::consts::TAU);
    let leg_len = polyline_len((0..=steps).map(|i| {
        let u = i as f64 / steps as f64;
        Point2::new(entry.x + u * (tp.x - entry.x), entry.y + u * (tp.y - entry.y))
    }));
    let arc_len = polyline_len((0..=steps).map(|i| on_circle(phi_t + s * sweep * i as f64 / steps as f64)));
    let end = on_circle(phi_end);
    let extension = polyline_len((0..=steps).map(|i| {
        let u = i as f64 / steps as f64;
        Point2::new(end.x + u * (layout.faf.x - end.x), end.y + u * (layout.faf.y - end.y))
    }));
    Some(IntegratedPath {
        tangent_point: tp,
        leg_len,
        arc_angle: arc_len / r,
        arc_len,
        extension,
    })
}

/// Forward-rule times and objective of `order`, computed from scratch.
pub fn phase1_objective(problem: &Phase1Problem, order: &[usize]) -> f64 {
    let mut times: Vec<f64> = Vec::new();
    for (p, &j) in order.iter().enumerate() {
        let it = &problem.items[j];
        let t = match it.committed_t {
            Some(t) => t,
            None => {
                let mut release = f64::NEG_INFINITY;
                for q in 0..p {
                    release = release.max(times[q] + problem.sep(order[q], j));
                }
                it.earliest.max(it.latest.min(release))
            }
        };
        times.push(t);
    }
    let (mut sigma, mut alpha, mut excess) = (0.0, 0.0, 0.0);
    for (p, &j) in order.iter().enumerate() {
        let it = &problem.items[j];
        for q in 0..p {
            sigma += (times[q] + problem.sep(order[q], j) - times[p]).max(0.0);
        }
        alpha += (times[p] - it.latest).max(0.0);
        if it.committed_t.is_none() {
            excess += (times[p] - it.earliest - it.absorb).max(0.0);
        }
    }
    let t_max = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if order.is_empty() {
        return 0.0;
    }
    let w = &problem.weights;
    w.safe * (sigma + alpha) + w.thru * t_max + w.delay * excess
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    pub objective: f64,
    pub order: Vec<usize>,
    /// Orders that passed the shift and stream checks.
    pub admissible: usize,
}

fn permutations(n: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], visit: &mut impl FnMut(&[usize])) {
        if prefix.len() == used.len() {
            visit(prefix);
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                rec(prefix, used, visit);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], visit);
}

/// Best order over all `n!` permutations that keep every item within `k`
/// positions of its index and never overtake within a stream.
pub fn brute_force_phase1(problem: &Phase1Problem, k: usize) -> BruteForce {
    let n = problem.len();
    let mut best = BruteForce {
        objective: f64::INFINITY,
        order: Vec::new(),
        admissible: 0,
    };
    permutations(n, &mut |order| {
        let shift_ok = order.iter().enumerate().all(|(p, &j)| p.abs_diff(j) <= k);
        let stream_ok = order.iter().enumerate().all(|(p, &j)| {
            order[p + 1..].iter().all(|&i| {
                let (a, b) = (&problem.items[j], &problem.items[i]);
                a.corner != b.corner || a.stream_index < b.stream_index
            })
        });
        if shift_ok && stream_ok {
            best.admissible += 1;
            let v = phase1_objective(problem, order);
            if v < best.objective {
                best.objective = v;
                best.order = order.to_vec();
            }
        }
    });
    best
}

/// Random Phase-1 window in FOFFS order: mixed fleet, interleaved corners,
/// a committed prefix of random length.
pub fn random_phase1_problem<R: Rng + ?Sized>(rng: &mut R, n: usize, weights: ObjectiveWeights) -> Phase1Problem {
    let catalog = FleetCatalog::standard();
    let wake = WakeMatrix::standard();
    let kinds: Vec<_> = (0..n).map(|_| catalog.sample(rng).clone()).collect();
    let committed = rng.random_range(0..=n / 2);
    let mut e = 0.0;
    let mut per_corner = [0usize; 4];
    let mut items = Vec::with_capacity(n);
    for j in 0..n {
        e += rng.random_range(0.0..90.0);
        let corner = rng.random_range(0..4);
        per_corner[corner] += 1;
        items.push(Phase1Item {
            id: j + 1,
            corner,
            stream_index: per_corner[corner],
            earliest: e,
            latest: e + rng.random_range(60.0..900.0),
            absorb: rng.random_range(0.0..90.0),
            committed_t: (j < committed).then(|| e + rng.random_range(0.0..150.0)),
        });
    }
    let sep = kinds
        .iter()
        .flat_map(|a| kinds.iter().map(|b| separation_between(a, b, &wake)))
        .collect();
    Phase1Problem::new(items, sep, weights)
}

/// Lowest-cost grid candidate landing no earlier than `ctx.t_lo`, found by
/// evaluating every extension and speed tuple. Ties go to the smaller
/// extension index, then the smaller tuple index. Returns
/// `(cost, d_index, tuple, t)`, or `None` if nothing lands late enough.
pub fn exhaustive_select(
    aircraft: &Aircraft,
    layout: &ApproachLayout<f64>,
    wind: WindContext<f64>,
    bounds: &SpeedBounds,
    grid: &GridSpec,
    ctx: &PlacementContext,
    w: &ObjectiveWeights,
) -> Option<(f64, usize, usize, f64)> {
    let v_ref = aircraft.kind.v_ref;
    let tuples = speed_tuples(bounds, v_ref, grid.delta_s).ok()?;
    let mut best: Option<(f64, usize, usize, f64)> = None;
    for (di, d) in extension_grid(bounds.d_max, grid.delta_d).ok()?.into_iter().enumerate() {
        for (ti, s) in tuples.iter().enumerate() {
            let Ok(t) = wind_corrected_arrival_time(aircraft.tau, aircraft.entry_point, layout, d, *s, wind) else {
                continue;
            };
            if t < ctx.t_lo {
                continue;
            }
            let over: f64 = ctx.followers.iter().map(|&(sep, t_f)| (t + sep - t_f).max(0.0)).sum();
            let cost = w.safe * over
                + w.thru * (t - ctx.makespan_ref).max(0.0)
                + w.delay * (t - ctx.t_free)
                + w.eff * d
                + w.speed * bounds.speed_term(*s, v_ref);
            if best.is_none_or(|b| cost < b.0) {
                best = Some((cost, di, ti, t));
            }
        }
    }
    best
}

/// Latest FAF time reachable on the grid.
pub fn latest_grid_landing(
    aircraft: &Aircraft,
    layout: &ApproachLayout<f64>,
    wind: WindContext<f64>,
    bounds: &SpeedBounds,
    grid: &GridSpec,
) -> f64 {
    let mut latest = f64::NEG_INFINITY;
    let (Ok(ds), Ok(tuples)) = (extension_grid(bounds.d_max, grid.delta_d), speed_tuples(bounds, aircraft.kind.v_ref, grid.delta_s)) else {
        return latest;
    };
    for d in ds {
        for s in &tuples {
            if let Ok(t) = wind_corrected_arrival_time(aircraft.tau, aircraft.entry_point, layout, d, *s, wind) {
                latest = latest.max(t);
            }
        }
    }
    latest
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn random_entry<R: Rng + ?Sized>(rng: &mut R, layout: &ApproachLayout<f64>) -> Point2<f64> {
    loop {
        let b = rng.random_range(0.0..std::f64::consts::TAU);
        let p = Point2::new(layout.tcp_radius * b.sin(), layout.tcp_radius * b.cos()).add(layout.faf);
        if (p.y - layout.faf.y).abs() > 2.0 * layout.turn_radius {
            return p;
        }
    }
}

/// Closed-form geometry against the integrated path on random entries.
pub fn geometry_suite(seed: u64, instances: usize) -> SuiteReport {
    let layout = ApproachLayout::<f64>::standard();
    let bounds = SpeedBounds::default();
    let mut rng = seeds::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let entry = random_entry(&mut rng, &layout);
        let d_hi = max_feasible_extension(entry, &layout, bounds.d_max).unwrap_or(0.0);
        let d = rng.random_range(0.0..=d_hi);
        let (Ok(g), Some(o)) = (path_geometry(entry, &layout, d), integrate_path(entry, &layout, d, 20_000)) else {
            return SuiteReport {
                name: "geometry-vs-integration",
                passed: false,
                detail: format!("no path for entry {entry:?}, d {d}"),
            };
        };
        let gaps = [
            g.tangent_point.sub(o.tangent_point).norm(),
            g.tangent_leg_len - o.leg_len,
            g.arc_angle - o.arc_angle,
            g.extension - o.extension,
        ];
        worst = gaps.iter().fold(worst, |m, x| m.max(x.abs()));
    }
    SuiteReport {
        name: "geometry-vs-integration",
        passed: worst < 1e-6,
        detail: format!("{instances} instances, largest gap {worst:.3e}"),
    }
}

/// Branch and bound against full enumeration for every `k` in 1..=3.
pub fn phase1_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = seeds::rng(seed);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..instances {
        let n = rng.random_range(2..=8);
        let p = random_phase1_problem(&mut rng, n, ObjectiveWeights::default());
        for k in 1..=3 {
            let exact = brute_force_phase1(&p, k);
            let sol = solve_phase1_cps(&p, k, u64::MAX);
            let gap = (sol.objective - exact.objective).abs();
            worst = worst.max(gap / exact.objective.abs().max(1.0));
            if gap > 1e-9 * exact.objective.abs().max(1.0) || !p.is_admissible(&sol.order, k) {
                failures += 1;
            }
        }
    }
    SuiteReport {
        name: "phase1-vs-enumeration",
        passed: failures == 0,
        detail: format!("{} solves, {failures} mismatches, largest relative gap {worst:.3e}", 3 * instances),
    }
}

fn random_aircraft<R: Rng + ?Sized>(rng: &mut R, layout: &ApproachLayout<f64>, id: usize, tau: f64) -> Aircraft {
    let catalog = FleetCatalog::standard();
    let corner = rng.random_range(0..layout.corners().len());
    Aircraft {
        id,
        corner,
        stream_index: id,
        entry_point: layout.corners()[corner].fix,
        tau,
        kind: catalog.types().choose(rng).expect("non-empty fleet").clone(),
    }
}

/// Table-driven candidate selection against a scan of the whole grid.
pub fn selection_suite(seed: u64, instances: usize) -> SuiteReport {
    let layout = ApproachLayout::standard();
    let bounds = SpeedBounds::default();
    let w = ObjectiveWeights::default();
    let wake = WakeMatrix::standard();
    let mut rng = seeds::rng(seed);
    let mut failures = 0;
    for i in 0..instances {
        let grid = if i % 2 == 0 {
            GridSpec::default()
        } else {
            GridSpec {
                delta_d: 1.0,
                delta_s: 10.0,
            }
        };
        let wind = WindContext::new(rng.random_range(-15.0..15.0));
        let a = random_aircraft(&mut rng, &layout, 1, 0.0);
        let Ok(win) = arrival_window(&a, wind, &layout, &bounds) else {
            failures += 1;
            continue;
        };
        let release = win.earliest + rng.random_range(-60.0..(win.latest - win.earliest + 120.0));
        let followers = (0..rng.random_range(0..3))
            .map(|_| {
                let other = random_aircraft(&mut rng, &layout, 2, 0.0);
                (
                    separation_between(&a.kind, &other.kind, &wake),
                    release + rng.random_range(0.0..400.0),
                )
            })
            .collect();
        let ctx = PlacementContext {
            tau: a.tau,
            t_free: win.earliest,
            release,
            t_lo: release,
            makespan_ref: win.earliest.max(release - rng.random_range(60.0..150.0)),
            followers,
        };
        let Ok(table) = CandidateTable::build(&a, &layout, wind, &bounds, &grid) else {
            failures += 1;
            continue;
        };
        let fast = table.select(&ctx, &w);
        match exhaustive_select(&a, &layout, wind, &bounds, &grid, &ctx, &w) {
            Some((cost, di, ti, _)) => {
                let fast_cost = ctx.candidate_cost(fast.t, fast.d, table.speed_terms[fast.tuple], &w);
                if (fast_cost - cost).abs() > 1e-9 * cost.abs().max(1.0) || (fast.d_index, fast.tuple) != (di, ti) {
                    failures += 1;
                }
            }
            None => {
                if fast.t != latest_grid_landing(&a, &layout, wind, &bounds, &grid) {
                    failures += 1;
                }
            }
        }
    }
    SuiteReport {
        name: "selection-vs-exhaustive",
        passed: failures == 0,
        detail: format!("{instances} placements, {failures} mismatches"),
    }
}

/// Result of one greedy-versus-joint comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointGap {
    pub greedy: f64,
    pub joint: f64,
    /// One grid time quantum, s.
    pub quantum: f64,
}

impl JointGap {
    pub fn allowance(&self, w: &ObjectiveWeights) -> f64 {
        2.0 * w.delay * self.quantum
    }
}

/// Largest single grid step in time: one extension step at the slowest final
/// ground speed, or one speed step on the tangent leg at its lowest speed.
pub fn time_quantum(aircraft: &Aircraft, layout: &ApproachLayout<f64>, wind: WindContext<f64>, bounds: &SpeedBounds, grid: &GridSpec) -> f64 {
    let (f_lo, _) = bounds.fin_range(aircraft.kind.v_ref);
    let Ok(g) = path_geometry(aircraft.entry_point, layout, 0.0) else {
        return 0.0;
    };
    let comps = wind.components(crate::geometry::headings_of(aircraft.entry_point, &g));
    let fin_gs = f_lo + comps.fin;
    let leg_slow = bounds.vl_min + comps.leg;
    let ext = grid.delta_d / fin_gs * SECONDS_PER_HOUR;
    let leg = g.tangent_leg_len * (1.0 / leg_slow - 1.0 / (leg_slow + grid.delta_s)) * SECONDS_PER_HOUR;
    ext.max(leg)
}

/// Greedy sequential assignment against the joint optimum over both
/// aircraft's full grids, landing order fixed to FOFFS.
pub fn greedy_vs_joint(
    pair: [&Aircraft; 2],
    layout: &ApproachLayout<f64>,
    wind: WindContext<f64>,
    bounds: &SpeedBounds,
    grid: &GridSpec,
    weights: &ObjectiveWeights,
    wake: &WakeMatrix,
) -> crate::Result<JointGap> {
    let members: Vec<WindowMember> = pair
        .iter()
        .map(|a| {
            Ok(WindowMember {
                aircraft: a,
                eta: nominal_eta(a, wind, layout, bounds)?,
                window: arrival_window(a, wind, layout, bounds)?,
                committed: None,
            })
        })
        .collect::<crate::Result<_>>()?;
    let order = crate::sequencing::sorted_indices(&members, false);
    let tables = CandidateTables::build(pair, layout, wind, bounds, grid)?;
    let greedy = greedy_grid_assign(&members, &order, &tables, wake, weights)?;
    let score = |decisions: &[crate::trajopt::TrajectoryDecision]| {
        let entries: Vec<ScoredDecision> = decisions
            .iter()
            .zip(&order)
            .map(|(d, &m)| ScoredDecision {
                decision: *d,
                t_free: members[m].window.earliest,
                v_ref: members[m].aircraft.kind.v_ref,
            })
            .collect();
        evaluate_unified_objective(&entries, weights, bounds)
    };
    let greedy_value = score(&greedy);

    let candidates = |a: &Aircraft| -> crate::Result<Vec<(f64, SegmentSpeeds<f64>, f64)>> {
        let mut out = Vec::new();
        for d in extension_grid(bounds.d_max, grid.delta_d)? {
            for s in speed_tuples(bounds, a.kind.v_ref, grid.delta_s)? {
                if let Ok(t) = wind_corrected_arrival_time(a.tau, a.entry_point, layout, d, s, wind) {
                    out.push((d, s, t));
                }
            }
        }
        Ok(out)
    };
    let (lead, trail) = (members[order[0]].aircraft, members[order[1]].aircraft);
    let (lc, tc) = (candidates(lead)?, candidates(trail)?);
    let sep = separation_between(&lead.kind, &trail.kind, wake);
    let mut joint = f64::INFINITY;
    let decision = |id, (d, s, t): (f64, SegmentSpeeds<f64>, f64), sigma| crate::trajopt::TrajectoryDecision {
        id,
        d,
        v_leg: s.leg,
        v_arc: s.arc,
        v_fin: s.fin,
        t,
        sigma,
        committed: false,
    };
    for &l in &lc {
        for &f in tc.iter().filter(|f| f.2 >= l.2) {
            let pair = [decision(lead.id, l, 0.0), decision(trail.id, f, (l.2 + sep - f.2).max(0.0))];
            joint = joint.min(score(&pair));
        }
    }
    let quantum = pair
        .iter()
        .map(|a| time_quantum(a, layout, wind, bounds, grid))
        .fold(0.0, f64::max);
    Ok(JointGap {
        greedy: greedy_value,
        joint,
        quantum,
    })
}

/// Random interacting pairs on a coarse grid.
pub fn greedy_suite(seed: u64, instances: usize) -> SuiteReport {
    let layout = ApproachLayout::standard();
    let bounds = SpeedBounds::default();
    let w = ObjectiveWeights::default();
    let wake = WakeMatrix::standard();
    let grid = GridSpec {
        delta_d: 2.5,
        delta_s: 10.0,
    };
    let mut rng = seeds::rng(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let a = random_aircraft(&mut rng, &layout, 1, 0.0);
        let tau = rng.random_range(0.0..150.0);
        let mut b = random_aircraft(&mut rng, &layout, 2, tau);
        if b.corner == a.corner {
            b.stream_index = a.stream_index + 1;
        }
        let wind = WindContext::new(rng.random_range(0.0..10.0));
        match greedy_vs_joint([&a, &b], &layout, wind, &bounds, &grid, &w, &wake) {
            Ok(g) => {
                let gap = g.greedy - g.joint;
                worst = worst.max(gap);
                if gap > g.allowance(&w) + 1e-9 || gap < -1e-9 * g.joint.abs().max(1.0) {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    SuiteReport {
        name: "greedy-vs-joint",
        passed: failures == 0,
        detail: format!("{instances} pairs, {failures} outside allowance, largest gap {worst:.4}"),
    }
}

/// `P(X <= x)` for `X ~ Erlang(n, rate)`.
pub fn erlang_cdf(n: u32, rate: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lx = rate * x;
    let mut term = (-lx).exp();
    let mut tail = term;
    for k in 1..n {
        term *= lx / f64::from(k);
        tail += term;
    }
    (1.0 - tail).max(0.0)
}

/// Expected stream length: the anchor at 0 plus every renewal
/// `n * t_sep + Erlang(n, rate)` at or before `t_max`.
pub fn expected_stream_len(lambda_per_hour: f64, t_sep: f64, t_max: f64) -> f64 {
    let rate = lambda_per_hour / SECONDS_PER_HOUR;
    let mut total = 1.0;
    let mut n = 1u32;
    loop {
        let slack = t_max - f64::from(n) * t_sep;
        let p = erlang_cdf(n, rate, slack);
        if slack <= 0.0 || (p < 1e-15 && f64::from(n) > rate * t_max) {
            break;
        }
        total += p;
        n += 1;
    }
    total
}

/// Mean generated stream length against the Erlang expectation.
pub fn traffic_suite(seed: u64, runs: usize) -> SuiteReport {
    let mut rng = seeds::rng(seed);
    let mut worst: f64 = 0.0;
    for lambda in [1.0, 5.0, 15.0, 30.0] {
        let total: usize = (0..runs).map(|_| generate_stream(lambda, 66.0, 3600.0, &mut rng).len()).sum();
        let mean = total as f64 / runs as f64;
        let expected = expected_stream_len(lambda, 66.0, 3600.0);
        worst = worst.max((mean / expected - 1.0).abs());
    }
    SuiteReport {
        name: "stream-count-vs-erlang",
        passed: worst < 0.02,
        detail: format!("{runs} streams per rate, largest relative error {worst:.4}"),
    }
}

/// Closed-form and expanded arc angles on random entries.
pub fn arc_angle_suite(seed: u64, instances: usize) -> SuiteReport {
    let layout = ApproachLayout::<f64>::standard();
    let mut rng = seeds::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let entry = random_entry(&mut rng, &layout);
        let d = rng.random_range(0.0..=max_feasible_extension(entry, &layout, 27.5).unwrap_or(0.0));
        if let (Ok(g), Ok(t)) = (path_geometry(entry, &layout, d), rf_arc_angle_expanded(entry, &layout, d)) {
            worst = worst.max((g.arc_angle - t).abs());
        }
    }
    SuiteReport {
        name: "arc-angle-forms",
        passed: worst < 1e-9,
        detail: format!("{instances} instances, largest gap {worst:.3e}"),
    }
}

/// Every suite with `instances` random cases each.
pub fn run_all(seed: u64, instances: usize) -> Vec<SuiteReport> {
    vec![
        geometry_suite(seed, instances),
        arc_angle_suite(seed, instances),
        phase1_suite(seed, instances),
        selection_suite(seed, instances),
        greedy_suite(seed, instances),
        traffic_suite(seed, instances.max(10_000)),
    ]
}

//! Landing-order policies over a lookahead window.

mod cps;

use std::fmt;
use std::str::FromStr;

pub use cps::{cps_swap_sets, solve_phase1_cps, Phase1Item, Phase1Problem, Phase1Solution};

use crate::error::Result;
use crate::geometry::{max_feasible_extension, ApproachLayout, SegmentSpeeds};
use crate::traffic::Aircraft;
use crate::trajopt::{SpeedBounds, TrajectoryDecision};
use crate::wind::{wind_corrected_arrival_time, WindContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    Fefs,
    Foffs,
    /// Constrained position shifting with maximum shift `k`.
    Cps(u8),
}

impl Policy {
    pub fn max_shift(self) -> Option<u8> {
        match self {
            Policy::Cps(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Fefs => f.write_str("fefs"),
            Policy::Foffs => f.write_str("foffs"),
            Policy::Cps(k) => write!(f, "cps{k}"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "fefs" => Ok(Policy::Fefs),
            "foffs" => Ok(Policy::Foffs),
            _ => lower
                .strip_prefix("cps")
                .and_then(|k| k.parse::<u8>().ok())
                .map(Policy::Cps)
                .ok_or_else(|| format!("unknown policy `{s}` (expected fefs, foffs or cpsK)")),
        }
    }
}

/// Feasible FAF time range of one aircraft.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalWindow {
    /// Earliest FAF time, s: `d = 0` at maximum speeds.
    pub earliest: f64,
    /// Latest FAF time, s: longest feasible extension at minimum speeds.
    pub latest: f64,
    /// Delay absorbable by slowing down at `d = 0`, s.
    pub absorb: f64,
    /// Extension used for `latest`; below `d_max` only when the layout forces it.
    pub latest_extension: f64,
}

fn max_speeds(bounds: &SpeedBounds, v_ref: f64) -> SegmentSpeeds<f64> {
    SegmentSpeeds::new(bounds.vl_max, bounds.vtheta_max, bounds.fin_range(v_ref).1)
}

/// Slowest speeds that still satisfy `v_leg >= v_arc >= v_fin`.
pub fn min_monotone_speeds(bounds: &SpeedBounds, v_ref: f64) -> SegmentSpeeds<f64> {
    let fin = bounds.fin_range(v_ref).0;
    let arc = bounds.vtheta_min.max(fin);
    let leg = bounds.vl_min.max(arc);
    SegmentSpeeds::new(leg, arc, fin)
}

/// Wind-corrected free-flight FAF time (`d = 0`, maximum speeds).
pub fn nominal_eta(
    aircraft: &Aircraft,
    wind: WindContext<f64>,
    layout: &ApproachLayout<f64>,
    bounds: &SpeedBounds,
) -> Result<f64> {
    wind_corrected_arrival_time(
        aircraft.tau,
        aircraft.entry_point,
        layout,
        0.0,
        max_speeds(bounds, aircraft.kind.v_ref),
        wind,
    )
}

pub fn arrival_window(
    aircraft: &Aircraft,
    wind: WindContext<f64>,
    layout: &ApproachLayout<f64>,
    bounds: &SpeedBounds,
) -> Result<ArrivalWindow> {
    let v_ref = aircraft.kind.v_ref;
    let at = |d: f64, speeds| wind_corrected_arrival_time(aircraft.tau, aircraft.entry_point, layout, d, speeds, wind);
    let slow = min_monotone_speeds(bounds, v_ref);
    let earliest = at(0.0, max_speeds(bounds, v_ref))?;
    let slow_at_zero = at(0.0, slow)?;
    let d_late = max_feasible_extension(aircraft.entry_point, layout, bounds.d_max).unwrap_or(0.0);
    let latest = at(d_late, slow)?.max(earliest);
    Ok(ArrivalWindow {
        earliest,
        latest,
        absorb: (slow_at_zero - earliest).max(0.0),
        latest_extension: d_late,
    })
}

/// One aircraft as seen by a window subproblem.
#[derive(Debug, Clone)]
pub struct WindowMember<'a> {
    pub aircraft: &'a Aircraft,
    pub eta: f64,
    pub window: ArrivalWindow,
    pub committed: Option<TrajectoryDecision>,
}

impl WindowMember<'_> {
    pub fn id(&self) -> usize {
        self.aircraft.id
    }

    pub fn committed_t(&self) -> Option<f64> {
        self.committed.as_ref().map(|d| d.t)
    }

    pub fn fefs_key(&self) -> (f64, usize) {
        (self.aircraft.tau, self.aircraft.id)
    }

    pub fn foffs_key(&self) -> (f64, usize) {
        (self.eta, self.aircraft.id)
    }
}

fn key_cmp(a: (f64, usize), b: (f64, usize)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandingSequence {
    /// Aircraft ids, first to land first.
    pub order: Vec<usize>,
    pub policy: Policy,
}

/// Window member indices sorted by the policy's reference key.
pub fn sorted_indices(members: &[WindowMember<'_>], by_entry: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..members.len()).collect();
    if by_entry {
        idx.sort_by(|&a, &b| key_cmp(members[a].fefs_key(), members[b].fefs_key()));
    } else {
        idx.sort_by(|&a, &b| key_cmp(members[a].foffs_key(), members[b].foffs_key()));
    }
    idx
}

/// FEFS or FOFFS order; CPS policies fall back to FOFFS here.
pub fn order_policy(members: &[WindowMember<'_>], policy: Policy) -> LandingSequence {
    let idx = sorted_indices(members, policy == Policy::Fefs);
    LandingSequence {
        order: idx.into_iter().map(|i| members[i].id()).collect(),
        policy,
    }
}

/// True when every same-corner pair lands in entry order.
pub fn respects_stream_precedence(order: &[&Aircraft]) -> bool {
    order.iter().enumerate().all(|(p, a)| {
        order[p + 1..]
            .iter()
            .all(|b| b.corner != a.corner || b.stream_index > a.stream_index)
    })
}

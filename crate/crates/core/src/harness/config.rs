//! Experiment configuration file.
//!
//! A TOML document with the blocks `layout`, `wind`, `traffic`, `fleet`,
//! `wake`, `grids`, `bounds`, `weights`, `fuel` and `experiment`. Every key
//! is optional; missing keys take the reference defaults. Unknown keys are
//! rejected. Validation errors report the line of the offending key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fuel::CoefficientTable;
use crate::geometry::{ApproachLayout, CornerFix, Point2};
use crate::sequencing::Policy;
use crate::traffic::{AircraftType, FleetCatalog, TrafficParams, WakeMatrix, WeightClass};
use crate::trajopt::{speed_tuples, GridSpec, ObjectiveWeights, SpeedBounds};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub layout: ApproachLayout<f64>,
    pub wind_mu: f64,
    pub wind_sigma: f64,
    pub winds: usize,
    pub traffic: TrafficParams,
    pub catalog: FleetCatalog,
    pub wake: WakeMatrix,
    pub grids: Vec<GridSpec>,
    pub bounds: SpeedBounds,
    pub weights: ObjectiveWeights,
    pub fuel: CoefficientTable,
    pub fuel_dt: f64,
    pub seeds: usize,
    pub master_seed: u64,
    pub policies: Vec<Policy>,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub out: PathBuf,
    pub cache: bool,
    pub node_limit: u64,
    pub record_timing: bool,
    /// Rate-bin half-width for aggregation, AC/hr.
    pub bin_half_width: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::from_toml_str("").expect("defaults are valid")
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorner {
    x: f64,
    y: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawLayout {
    faf_x: f64,
    faf_y: f64,
    turn_radius_nmi: f64,
    tcp_radius_nmi: f64,
    corner: Option<BTreeMap<String, RawCorner>>,
}

impl Default for RawLayout {
    fn default() -> Self {
        Self {
            faf_x: 0.0,
            faf_y: 0.0,
            turn_radius_nmi: 2.5,
            tcp_radius_nmi: 35.0,
            corner: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawWind {
    mu_kts: f64,
    sigma_kts: f64,
    samples_per_seed: usize,
}

impl Default for RawWind {
    fn default() -> Self {
        Self {
            mu_kts: 5.0,
            sigma_kts: 2.0,
            samples_per_seed: 10,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTraffic {
    lambda_min: u32,
    lambda_max: u32,
    t_sep_s: f64,
    t_max_s: f64,
    class_probs: [f64; 3],
}

impl Default for RawTraffic {
    fn default() -> Self {
        let t = TrafficParams::default();
        Self {
            lambda_min: t.lambda_min,
            lambda_max: t.lambda_max,
            t_sep_s: t.t_sep,
            t_max_s: t.t_max,
            class_probs: FleetCatalog::standard().class_probs(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawType {
    name: String,
    class: String,
    t_rwy_s: f64,
    v_ref_kts: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWakeRow {
    heavy: Option<f64>,
    large: Option<f64>,
    small: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWake {
    heavy: Option<RawWakeRow>,
    large: Option<RawWakeRow>,
    small: Option<RawWakeRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGrids {
    delta_d_nmi: OneOrMany,
    delta_s_kts: OneOrMany,
}

impl Default for RawGrids {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            delta_d_nmi: OneOrMany::One(g.delta_d),
            delta_s_kts: OneOrMany::One(g.delta_s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
struct RawBounds {
    vL_min: f64,
    vL_max: f64,
    vtheta_min: f64,
    vtheta_max: f64,
    vf_below_ref_kts: f64,
    vf_above_ref_kts: f64,
    d_max_nmi: f64,
}

impl Default for RawBounds {
    fn default() -> Self {
        let b = SpeedBounds::default();
        Self {
            vL_min: b.vl_min,
            vL_max: b.vl_max,
            vtheta_min: b.vtheta_min,
            vtheta_max: b.vtheta_max,
            vf_below_ref_kts: b.vf_below_ref,
            vf_above_ref_kts: b.vf_above_ref,
            d_max_nmi: b.d_max,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawWeights {
    safe: f64,
    thru: f64,
    delay: f64,
    eff: f64,
    speed: f64,
}

impl Default for RawWeights {
    fn default() -> Self {
        let w = ObjectiveWeights::default();
        Self {
            safe: w.safe,
            thru: w.thru,
            delay: w.delay,
            eff: w.eff,
            speed: w.speed,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawFuel {
    coefficients: Option<PathBuf>,
    dt_s: f64,
}

impl Default for RawFuel {
    fn default() -> Self {
        Self {
            coefficients: None,
            dt_s: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawExperiment {
    seeds: usize,
    seed: u64,
    policies: Vec<String>,
    threads: usize,
    out: PathBuf,
    cache: bool,
    node_limit: u64,
    record_timing: bool,
    bin_half_width: f64,
}

impl Default for RawExperiment {
    fn default() -> Self {
        Self {
            seeds: 1000,
            seed: 2024,
            policies: ["fefs", "foffs", "cps1", "cps2", "cps3"].map(String::from).to_vec(),
            threads: 0,
            out: PathBuf::from("out"),
            cache: true,
            node_limit: 200_000,
            record_timing: true,
            bin_half_width: 2.5,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    layout: RawLayout,
    wind: RawWind,
    traffic: RawTraffic,
    fleet: Option<Vec<RawType>>,
    wake: RawWake,
    grids: RawGrids,
    bounds: RawBounds,
    weights: RawWeights,
    fuel: RawFuel,
    experiment: RawExperiment,
}

/// 1-based line of `key` inside `[section]`, else the section header, else 0.
fn locate(text: &str, section: &str, key: &str) -> usize {
    let mut current = String::new();
    let mut header_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            if current == section && header_line == 0 {
                header_line = n + 1;
            }
            continue;
        }
        if current != section || key.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                return n + 1;
            }
        }
    }
    header_line
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

struct Checker<'t> {
    text: &'t str,
}

impl Checker<'_> {
    fn fail(&self, section: &str, key: &str, message: impl Into<String>) -> Error {
        Error::Config {
            line: locate(self.text, section, key),
            message: format!("{section}.{key}: {}", message.into()),
        }
    }

    fn positive(&self, section: &str, key: &str, v: f64) -> Result<()> {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(self.fail(section, key, format!("must be positive, got {v}")))
        }
    }

    fn nonnegative(&self, section: &str, key: &str, v: f64) -> Result<()> {
        if v >= 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(self.fail(section, key, format!("must be non-negative, got {v}")))
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses a config document; relative paths resolve against the working directory.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::parse(text, Path::new("."))
    }

    fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map_or(0, |s| line_of_offset(text, s.start)),
            message: e.message().trim().to_string(),
        })?;
        let ck = Checker { text };

        let l = &raw.layout;
        ck.positive("layout", "turn_radius_nmi", l.turn_radius_nmi)?;
        ck.positive("layout", "tcp_radius_nmi", l.tcp_radius_nmi)?;
        let layout = match &l.corner {
            None => {
                let std = ApproachLayout::<f64>::standard();
                let faf = Point2::new(l.faf_x, l.faf_y);
                let corners = std
                    .corners()
                    .iter()
                    .map(|c| CornerFix {
                        name: c.name.clone(),
                        fix: c.fix.scale(l.tcp_radius_nmi / std.tcp_radius).add(faf),
                    })
                    .collect();
                ApproachLayout::new(faf, l.turn_radius_nmi, l.tcp_radius_nmi, corners)
            }
            Some(map) => {
                if map.is_empty() {
                    return Err(ck.fail("layout", "corner", "at least one corner fix is required"));
                }
                let corners = map
                    .iter()
                    .map(|(name, c)| CornerFix {
                        name: name.clone(),
                        fix: Point2::new(c.x, c.y),
                    })
                    .collect();
                ApproachLayout::new(Point2::new(l.faf_x, l.faf_y), l.turn_radius_nmi, l.tcp_radius_nmi, corners)
            }
        };
        if let Some(bad) = layout.invalid_corners().first() {
            return Err(Error::Config {
                line: locate(text, &format!("layout.corner.{bad}"), "y"),
                message: format!("corner {bad} lies within two turn radii of the final course"),
            });
        }

        let w = &raw.wind;
        if !w.mu_kts.is_finite() {
            return Err(ck.fail("wind", "mu_kts", "must be finite"));
        }
        ck.nonnegative("wind", "sigma_kts", w.sigma_kts)?;
        if w.samples_per_seed == 0 {
            return Err(ck.fail("wind", "samples_per_seed", "must be at least 1"));
        }

        let t = &raw.traffic;
        if t.lambda_min == 0 || t.lambda_min > t.lambda_max {
            return Err(ck.fail("traffic", "lambda_min", "need 1 <= lambda_min <= lambda_max"));
        }
        ck.nonnegative("traffic", "t_sep_s", t.t_sep_s)?;
        ck.positive("traffic", "t_max_s", t.t_max_s)?;
        let psum: f64 = t.class_probs.iter().sum();
        if t.class_probs.iter().any(|p| !(*p >= 0.0)) || (psum - 1.0).abs() > 1e-9 {
            return Err(ck.fail("traffic", "class_probs", "must be non-negative and sum to 1"));
        }

        let types = match &raw.fleet {
            None => FleetCatalog::standard().types().to_vec(),
            Some(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for r in rows {
                    let class: WeightClass = r.class.parse().map_err(|m: String| ck.fail("fleet", "class", m))?;
                    ck.positive("fleet", "t_rwy_s", r.t_rwy_s)?;
                    ck.positive("fleet", "v_ref_kts", r.v_ref_kts)?;
                    out.push(AircraftType::new(&r.name, class, r.t_rwy_s, r.v_ref_kts));
                }
                out
            }
        };
        for (c, p) in WeightClass::ALL.iter().zip(t.class_probs) {
            if p > 0.0 && !types.iter().any(|ty| ty.class == *c) {
                return Err(ck.fail("traffic", "class_probs", format!("class {c} has probability {p} but no fleet type")));
            }
        }
        let catalog = FleetCatalog::new(types, t.class_probs);

        let mut wake = WakeMatrix::standard();
        for (leader, row) in WeightClass::ALL.iter().zip([&raw.wake.heavy, &raw.wake.large, &raw.wake.small]) {
            let Some(row) = row else { continue };
            for (trailer, v) in WeightClass::ALL.iter().zip([row.heavy, row.large, row.small]) {
                if let Some(v) = v {
                    ck.nonnegative(&format!("wake.{leader}"), &trailer.to_string(), v)?;
                    wake.set(*leader, *trailer, v);
                }
            }
        }

        let b = &raw.bounds;
        let bounds = SpeedBounds {
            vl_min: b.vL_min,
            vl_max: b.vL_max,
            vtheta_min: b.vtheta_min,
            vtheta_max: b.vtheta_max,
            vf_below_ref: b.vf_below_ref_kts,
            vf_above_ref: b.vf_above_ref_kts,
            d_max: b.d_max_nmi,
        };
        ck.positive("bounds", "vL_min", bounds.vl_min)?;
        ck.positive("bounds", "vtheta_min", bounds.vtheta_min)?;
        if bounds.vl_min > bounds.vl_max {
            return Err(ck.fail("bounds", "vL_max", "must not be below vL_min"));
        }
        if bounds.vtheta_min > bounds.vtheta_max {
            return Err(ck.fail("bounds", "vtheta_max", "must not be below vtheta_min"));
        }
        ck.nonnegative("bounds", "vf_below_ref_kts", bounds.vf_below_ref)?;
        ck.nonnegative("bounds", "vf_above_ref_kts", bounds.vf_above_ref)?;
        ck.nonnegative("bounds", "d_max_nmi", bounds.d_max)?;

        let dd = raw.grids.delta_d_nmi.into_vec();
        let ds = raw.grids.delta_s_kts.into_vec();
        if dd.is_empty() {
            return Err(ck.fail("grids", "delta_d_nmi", "needs at least one value"));
        }
        if ds.is_empty() {
            return Err(ck.fail("grids", "delta_s_kts", "needs at least one value"));
        }
        for &v in &dd {
            ck.positive("grids", "delta_d_nmi", v)?;
        }
        for &v in &ds {
            ck.positive("grids", "delta_s_kts", v)?;
        }
        let grids: Vec<GridSpec> = dd
            .iter()
            .flat_map(|&delta_d| ds.iter().map(move |&delta_s| GridSpec { delta_d, delta_s }))
            .collect();
        for ty in catalog.types() {
            for g in &grids {
                if let Err(e) = speed_tuples(&bounds, ty.v_ref, g.delta_s) {
                    return Err(ck.fail("bounds", "vL_min", format!("type {}: {e}", ty.name)));
                }
            }
        }

        let wt = &raw.weights;
        for (key, v) in [("safe", wt.safe), ("thru", wt.thru), ("delay", wt.delay), ("eff", wt.eff), ("speed", wt.speed)] {
            ck.nonnegative("weights", key, v)?;
        }
        let weights = ObjectiveWeights {
            safe: wt.safe,
            thru: wt.thru,
            delay: wt.delay,
            eff: wt.eff,
            speed: wt.speed,
        };

        ck.positive("fuel", "dt_s", raw.fuel.dt_s)?;
        let fuel = match &raw.fuel.coefficients {
            None => CoefficientTable::synthetic(),
            Some(p) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                CoefficientTable::load(&path)?
            }
        };
        for ty in catalog.types() {
            if fuel.get(&ty.name).is_none() {
                return Err(ck.fail("fuel", "coefficients", format!("no fuel coefficients for type {}", ty.name)));
            }
        }

        let e = raw.experiment;
        if e.seeds == 0 {
            return Err(ck.fail("experiment", "seeds", "must be at least 1"));
        }
        if e.node_limit == 0 {
            return Err(ck.fail("experiment", "node_limit", "must be at least 1"));
        }
        ck.positive("experiment", "bin_half_width", e.bin_half_width)?;
        let policies = e
            .policies
            .iter()
            .map(|s| s.parse::<Policy>().map_err(|m| ck.fail("experiment", "policies", m)))
            .collect::<Result<Vec<_>>>()?;
        if policies.is_empty() {
            return Err(ck.fail("experiment", "policies", "needs at least one policy"));
        }

        Ok(Self {
            layout,
            wind_mu: w.mu_kts,
            wind_sigma: w.sigma_kts,
            winds: w.samples_per_seed,
            traffic: TrafficParams {
                lambda_min: t.lambda_min,
                lambda_max: t.lambda_max,
                t_sep: t.t_sep_s,
                t_max: t.t_max_s,
            },
            catalog,
            wake,
            grids,
            bounds,
            weights,
            fuel,
            fuel_dt: raw.fuel.dt_s,
            seeds: e.seeds,
            master_seed: e.seed,
            policies,
            threads: e.threads,
            out: e.out,
            cache: e.cache,
            node_limit: e.node_limit,
            record_timing: e.record_timing,
            bin_half_width: e.bin_half_width,
        })
    }

    /// Non-fatal findings, such as weights that break the intended priority order.
    pub fn warnings(&self) -> Vec<String> {
        self.weights.hierarchy_warnings()
    }
}

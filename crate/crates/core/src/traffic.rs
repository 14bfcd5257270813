//! Arrival demand: shifted-Poisson streams per corner fix, a weighted fleet
//! mix and pair-specific landing separation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::geometry::{ApproachLayout, Point2};
use crate::real::SECONDS_PER_HOUR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightClass {
    Heavy,
    Large,
    Small,
}

impl WeightClass {
    pub const ALL: [WeightClass; 3] = [WeightClass::Heavy, WeightClass::Large, WeightClass::Small];

    fn index(self) -> usize {
        match self {
            WeightClass::Heavy => 0,
            WeightClass::Large => 1,
            WeightClass::Small => 2,
        }
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightClass::Heavy => "heavy",
            WeightClass::Large => "large",
            WeightClass::Small => "small",
        })
    }
}

impl FromStr for WeightClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "heavy" | "h" => Ok(WeightClass::Heavy),
            "large" | "l" => Ok(WeightClass::Large),
            "small" | "s" => Ok(WeightClass::Small),
            other => Err(format!("unknown weight class `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftType {
    pub name: String,
    pub class: WeightClass,
    /// Runway occupation time, s.
    pub t_rwy: f64,
    /// Reference landing speed, kts.
    pub v_ref: f64,
}

impl AircraftType {
    pub fn new(name: &str, class: WeightClass, t_rwy: f64, v_ref: f64) -> Self {
        Self {
            name: name.to_string(),
            class,
            t_rwy,
            v_ref,
        }
    }
}

/// Types grouped by class with the class draw probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct FleetCatalog {
    types: Vec<AircraftType>,
    class_probs: [f64; 3],
}

impl FleetCatalog {
    /// # Panics
    /// If some class with positive probability has no type, or the
    /// probabilities are negative or do not sum to a positive number.
    pub fn new(types: Vec<AircraftType>, class_probs: [f64; 3]) -> Self {
        let total: f64 = class_probs.iter().sum();
        assert!(class_probs.iter().all(|p| *p >= 0.0) && total > 0.0, "bad class probabilities");
        for class in WeightClass::ALL {
            assert!(
                class_probs[class.index()] == 0.0 || types.iter().any(|t| t.class == class),
                "no aircraft type for class {class}"
            );
        }
        Self {
            types,
            class_probs: class_probs.map(|p| p / total),
        }
    }

    pub fn standard() -> Self {
        use WeightClass::*;
        Self::new(
            vec![
                AircraftType::new("A359", Heavy, 85.0, 140.0),
                AircraftType::new("B773", Heavy, 85.0, 150.0),
                AircraftType::new("A321", Large, 66.0, 140.0),
                AircraftType::new("B737", Large, 62.0, 142.0),
                AircraftType::new("A221", Small, 72.0, 130.0),
                AircraftType::new("B735", Small, 72.0, 127.0),
            ],
            [0.4, 0.4, 0.2],
        )
    }

    pub fn types(&self) -> &[AircraftType] {
        &self.types
    }

    pub fn class_probs(&self) -> [f64; 3] {
        self.class_probs
    }

    pub fn get(&self, name: &str) -> Option<&AircraftType> {
        self.types.iter().find(|t| t.name == name)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &AircraftType {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut class = WeightClass::ALL[2];
        for c in WeightClass::ALL {
            acc += self.class_probs[c.index()];
            if u < acc {
                class = c;
                break;
            }
        }
        let members: Vec<&AircraftType> = self.types.iter().filter(|t| t.class == class).collect();
        members[rng.random_range(0..members.len())]
    }
}

impl Default for FleetCatalog {
    fn default() -> Self {
        Self::standard()
    }
}

/// Minimum wake separation in seconds, indexed `[leader][trailer]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WakeMatrix {
    seconds: [[f64; 3]; 3],
}

impl WakeMatrix {
    /// Rows and columns ordered Heavy, Large, Small.
    pub fn new(seconds: [[f64; 3]; 3]) -> Self {
        Self { seconds }
    }

    pub fn standard() -> Self {
        // leader rows H, L, S; trailer columns H, L, S
        Self::new([[82.0, 118.0, 150.0], [60.0, 64.0, 94.0], [60.0, 64.0, 94.0]])
    }

    pub fn get(&self, leader: WeightClass, trailer: WeightClass) -> f64 {
        self.seconds[leader.index()][trailer.index()]
    }

    pub fn set(&mut self, leader: WeightClass, trailer: WeightClass, value: f64) {
        self.seconds[leader.index()][trailer.index()] = value;
    }

    pub fn max(&self) -> f64 {
        self.seconds.iter().flatten().copied().fold(f64::MIN, f64::max)
    }
}

impl Default for WakeMatrix {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aircraft {
    /// 1-based position in the scenario's entry order.
    pub id: usize,
    /// Index into the layout's sorted corner list.
    pub corner: usize,
    /// Position of this aircraft within its corner's stream.
    pub stream_index: usize,
    pub entry_point: Point2<f64>,
    pub tau: f64,
    pub kind: AircraftType,
}

pub fn required_separation(leader: &Aircraft, trailer: &Aircraft, wake: &WakeMatrix) -> f64 {
    separation_between(&leader.kind, &trailer.kind, wake)
}

pub fn separation_between(leader: &AircraftType, trailer: &AircraftType, wake: &WakeMatrix) -> f64 {
    wake.get(leader.class, trailer.class).max(trailer.t_rwy)
}

/// Upper bound on `required_separation` over a catalog.
pub fn max_separation(catalog: &FleetCatalog, wake: &WakeMatrix) -> f64 {
    let t_rwy = catalog.types().iter().map(|t| t.t_rwy).fold(0.0, f64::max);
    wake.max().max(t_rwy)
}

/// Entry times of one shifted-Poisson stream: `tau_0 = 0`, then gaps of
/// `t_sep + Exp(lambda)` until the next time would pass `t_max`.
///
/// # Panics
/// If `lambda_per_hour` is not positive.
pub fn generate_stream<R: Rng + ?Sized>(lambda_per_hour: f64, t_sep: f64, t_max: f64, rng: &mut R) -> Vec<f64> {
    assert!(lambda_per_hour > 0.0, "arrival rate must be positive");
    let exp = Exp::new(lambda_per_hour / SECONDS_PER_HOUR).expect("positive rate");
    let mut out = Vec::new();
    if t_max < 0.0 {
        return out;
    }
    let mut tau = 0.0;
    while tau <= t_max {
        out.push(tau);
        tau += t_sep + exp.sample(rng);
    }
    out
}

pub fn sample_rates<R: Rng + ?Sized>(rng: &mut R, lambda_min: u32, lambda_max: u32, corners: usize) -> Vec<u32> {
    (0..corners).map(|_| rng.random_range(lambda_min..=lambda_max)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficParams {
    pub lambda_min: u32,
    pub lambda_max: u32,
    pub t_sep: f64,
    pub t_max: f64,
}

impl Default for TrafficParams {
    fn default() -> Self {
        Self {
            lambda_min: 1,
            lambda_max: 30,
            t_sep: 66.0,
            t_max: 3600.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub aircraft: Vec<Aircraft>,
    /// Arrival rate per corner, AC/hr, in layout corner order.
    pub rates: Vec<u32>,
    pub t_max: f64,
}

impl Scenario {
    /// Total arrivals scaled to one hour of generation window.
    pub fn aggregate_rate(&self) -> f64 {
        if self.t_max > 0.0 {
            self.aircraft.len() as f64 * SECONDS_PER_HOUR / self.t_max
        } else {
            0.0
        }
    }
}

/// Rates, streams and fleet draws for every corner, merged into one list
/// sorted by `(tau, corner, stream index)`.
pub fn build_scenario<R: Rng + ?Sized>(
    layout: &ApproachLayout<f64>,
    params: &TrafficParams,
    catalog: &FleetCatalog,
    rng: &mut R,
) -> Scenario {
    let rates = sample_rates(rng, params.lambda_min, params.lambda_max, layout.corners().len());
    build_scenario_with_rates(layout, params, catalog, &rates, rng)
}

pub fn build_scenario_with_rates<R: Rng + ?Sized>(
    layout: &ApproachLayout<f64>,
    params: &TrafficParams,
    catalog: &FleetCatalog,
    rates: &[u32],
    rng: &mut R,
) -> Scenario {
    let mut aircraft = Vec::new();
    for (corner, (fix, &rate)) in layout.corners().iter().zip(rates).enumerate() {
        let times = generate_stream(f64::from(rate), params.t_sep, params.t_max, rng);
        for (stream_index, tau) in times.into_iter().enumerate() {
            aircraft.push(Aircraft {
                id: 0,
                corner,
                stream_index,
                entry_point: fix.fix,
                tau,
                kind: catalog.sample(rng).clone(),
            });
        }
    }
    aircraft.sort_by(|a, b| {
        a.tau
            .total_cmp(&b.tau)
            .then(a.corner.cmp(&b.corner))
            .then(a.stream_index.cmp(&b.stream_index))
    });
    for (i, a) in aircraft.iter_mut().enumerate() {
        a.id = i + 1;
    }
    Scenario {
        aircraft,
        rates: rates.to_vec(),
        t_max: params.t_max,
    }
}

//! Total-energy fuel model evaluated over the level–descent–level profile.
//!
//! Flow is computed in kg/min from thrust in kN, true airspeed in knots and
//! altitude in feet. Drag uses SI units. Conversions live in this module only.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{PathGeometry, SegmentSpeeds};
use crate::real::{Real, SECONDS_PER_HOUR};
use crate::wind::WindComponents;

pub const G0: f64 = 9.80665;
pub const KTS_TO_MS: f64 = 1852.0 / 3600.0;
pub const FT_TO_M: f64 = 0.3048;
pub const NMI_TO_M: f64 = 1852.0;
/// Top of the troposphere, ft.
pub const TROPOPAUSE_FT: f64 = 36_089.0;

const RHO0: f64 = 1.225;
const T0: f64 = 288.15;
const LAPSE: f64 = 6.5e-3;
const DENSITY_EXPONENT: f64 = 4.2561;

/// Altitude at the start of the tangent leg, ft.
pub const DESCENT_TOP_FT: f64 = 10_000.0;
/// Level altitude on the arc and final extension, ft.
pub const APPROACH_LEVEL_FT: f64 = 2_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FuelError {
    #[error("altitude {0} ft outside the troposphere model")]
    AltitudeOutOfRange(f64),
    #[error("integration step must be positive, got {0}")]
    NonpositiveStep(f64),
    #[error("true airspeed must be positive, got {0}")]
    NonpositiveAirspeed(f64),
    #[error("bank angle {0} rad is not below 90 degrees")]
    BankTooSteep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Configuration {
    Clean,
    Approach,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlightPhase {
    Approach,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragPolar<T> {
    pub cd0: T,
    pub k: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuelCoefficients<T> {
    /// kg
    pub mass: T,
    /// m²
    pub wing_area: T,
    pub clean: DragPolar<T>,
    pub approach: DragPolar<T>,
    /// kg/(min·kN)
    pub cf1: T,
    /// kts
    pub cf2: T,
    /// kg/min
    pub cf3: T,
    /// ft
    pub cf4: T,
}

impl<T: Real> FuelCoefficients<T> {
    pub fn polar(&self, config: Configuration) -> DragPolar<T> {
        match config {
            Configuration::Clean => self.clean,
            Configuration::Approach => self.approach,
        }
    }

    /// Names of fields that are not strictly positive.
    pub fn nonpositive_fields(&self) -> Vec<&'static str> {
        let fields = [
            ("mass_kg", self.mass),
            ("wing_area_m2", self.wing_area),
            ("cd0_clean", self.clean.cd0),
            ("k_clean", self.clean.k),
            ("cd0_approach", self.approach.cd0),
            ("k_approach", self.approach.k),
            ("cf1", self.cf1),
            ("cf2", self.cf2),
            ("cf3", self.cf3),
            ("cf4", self.cf4),
        ];
        fields
            .into_iter()
            .filter(|(_, v)| !(*v > T::zero() && v.is_finite()))
            .map(|(name, _)| name)
            .collect()
    }
}

/// ISA troposphere density, kg/m³.
pub fn isa_density<T: Real>(h_ft: T) -> Result<T, FuelError> {
    if !(h_ft >= T::zero() && h_ft <= T::lit(TROPOPAUSE_FT)) {
        return Err(FuelError::AltitudeOutOfRange(h_ft.to_f64_lossy()));
    }
    let h_m = h_ft * T::lit(FT_TO_M);
    let theta = T::one() - T::lit(LAPSE) * h_m / T::lit(T0);
    Ok(T::lit(RHO0) * theta.powf(T::lit(DENSITY_EXPONENT)))
}

/// Lift coefficient required for level flight at bank `bank`.
pub fn lift_coefficient<T: Real>(mass: T, wing_area: T, rho: T, v_ms: T, bank: T) -> T {
    let two = T::lit(2.0);
    two * mass * T::lit(G0) / (rho * v_ms * v_ms * wing_area * bank.cos())
}

/// Aerodynamic drag in newtons.
pub fn drag<T: Real>(
    coeffs: &FuelCoefficients<T>,
    rho: T,
    v_ms: T,
    bank: T,
    config: Configuration,
) -> Result<T, FuelError> {
    if !(v_ms > T::zero()) {
        return Err(FuelError::NonpositiveAirspeed(v_ms.to_f64_lossy()));
    }
    if !(bank.abs() < T::FRAC_PI_2()) {
        return Err(FuelError::BankTooSteep(bank.to_f64_lossy()));
    }
    let polar = coeffs.polar(config);
    let cl = lift_coefficient(coeffs.mass, coeffs.wing_area, rho, v_ms, bank);
    let cd = polar.cd0 + polar.k * cl * cl;
    Ok(T::lit(0.5) * rho * v_ms * v_ms * coeffs.wing_area * cd)
}

/// Thrust-specific fuel consumption, kg/(min·kN).
pub fn tsfc<T: Real>(coeffs: &FuelCoefficients<T>, v_kts: T) -> T {
    coeffs.cf1 * (T::one() + v_kts / coeffs.cf2)
}

/// Idle fuel flow floor, kg/min.
pub fn idle_flow<T: Real>(coeffs: &FuelCoefficients<T>, h_ft: T) -> T {
    coeffs.cf3 * (T::one() - h_ft / coeffs.cf4)
}

/// Fuel flow in kg/min for `thrust_kn` at `v_kts` and `h_ft`.
pub fn fuel_flow<T: Real>(thrust_kn: T, v_kts: T, h_ft: T, coeffs: &FuelCoefficients<T>, phase: FlightPhase) -> T {
    let nominal = tsfc(coeffs, v_kts) * thrust_kn;
    match phase {
        FlightPhase::Approach => nominal.max(idle_flow(coeffs, h_ft)),
        FlightPhase::Other => nominal,
    }
}

/// Coordinated-turn bank angle for `v_ms` on a turn of `radius_m`.
pub fn turn_bank<T: Real>(v_ms: T, radius_m: T) -> T {
    (v_ms * v_ms / (T::lit(G0) * radius_m)).atan()
}

/// Midpoint-rule integral of `flow(t)` in kg/min over `duration_s`.
fn integrate<T: Real>(duration_s: T, dt: T, flow: impl Fn(T) -> T) -> T {
    let sixty = T::lit(60.0);
    let mut total = T::zero();
    let mut t = T::zero();
    while t < duration_s {
        let step = dt.min(duration_s - t);
        total = total + flow(t + step * T::lit(0.5)) * step / sixty;
        t = t + dt;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FuelBreakdown<T> {
    pub descent: T,
    pub arc: T,
    pub extension: T,
}

impl<T: Real> FuelBreakdown<T> {
    pub fn total(&self) -> T {
        self.descent + self.arc + self.extension
    }
}

/// Fuel flow on a level, constant-speed segment where thrust equals drag.
pub fn level_flow<T: Real>(coeffs: &FuelCoefficients<T>, v_kts: T, bank: T) -> Result<T, FuelError> {
    let h = T::lit(APPROACH_LEVEL_FT);
    let rho = isa_density(h)?;
    let thrust = drag(coeffs, rho, v_kts * T::lit(KTS_TO_MS), bank, Configuration::Approach)?;
    Ok(fuel_flow(thrust / T::lit(1000.0), v_kts, h, coeffs, FlightPhase::Approach))
}

/// Fuel burned from the entry fix to the FAF, kg.
///
/// The tangent leg is an idle descent from 10,000 ft to 2,000 ft with
/// altitude linear in time. The arc and extension are flown level at
/// 2,000 ft in approach configuration. Durations use ground speed.
pub fn trajectory_fuel<T: Real>(
    geometry: &PathGeometry<T>,
    speeds: SegmentSpeeds<T>,
    wind: WindComponents<T>,
    turn_radius_nmi: T,
    coeffs: &FuelCoefficients<T>,
    dt: T,
) -> Result<FuelBreakdown<T>, FuelError> {
    if !(dt > T::zero()) {
        return Err(FuelError::NonpositiveStep(dt.to_f64_lossy()));
    }
    let hour = T::lit(SECONDS_PER_HOUR);
    let seconds = |len: T, v: T, w: T| -> Result<T, FuelError> {
        let gs = v + w;
        if gs > T::zero() {
            Ok(len / gs * hour)
        } else {
            Err(FuelError::NonpositiveAirspeed(gs.to_f64_lossy()))
        }
    };

    let top = T::lit(DESCENT_TOP_FT);
    let bottom = T::lit(APPROACH_LEVEL_FT);
    let leg_s = seconds(geometry.tangent_leg_len, speeds.leg, wind.leg)?;
    let descent = if leg_s > T::zero() {
        integrate(leg_s, dt, |t| idle_flow(coeffs, top + (bottom - top) * t / leg_s))
    } else {
        T::zero()
    };

    let arc_s = seconds(geometry.arc_len, speeds.arc, wind.arc)?;
    let bank = turn_bank(speeds.arc * T::lit(KTS_TO_MS), turn_radius_nmi * T::lit(NMI_TO_M));
    let arc_flow = level_flow(coeffs, speeds.arc, bank)?;
    let arc = integrate(arc_s, dt, |_| arc_flow);

    let ext_s = seconds(geometry.extension, speeds.fin, wind.fin)?;
    let ext_flow = level_flow(coeffs, speeds.fin, T::zero())?;
    let extension = integrate(ext_s, dt, |_| ext_flow);

    Ok(FuelBreakdown { descent, arc, extension })
}

/// One row of the coefficient file.
#[derive(Debug, Clone, Deserialize)]
struct CoefficientRecord {
    #[serde(rename = "type")]
    kind: String,
    mass_kg: f64,
    wing_area_m2: f64,
    cd0_clean: f64,
    k_clean: f64,
    cd0_approach: f64,
    k_approach: f64,
    cf1: f64,
    cf2: f64,
    cf3: f64,
    cf4: f64,
}

impl From<CoefficientRecord> for (String, FuelCoefficients<f64>) {
    fn from(r: CoefficientRecord) -> Self {
        (
            r.kind,
            FuelCoefficients {
                mass: r.mass_kg,
                wing_area: r.wing_area_m2,
                clean: DragPolar { cd0: r.cd0_clean, k: r.k_clean },
                approach: DragPolar {
                    cd0: r.cd0_approach,
                    k: r.k_approach,
                },
                cf1: r.cf1,
                cf2: r.cf2,
                cf3: r.cf3,
                cf4: r.cf4,
            },
        )
    }
}

/// Per-type coefficient sets keyed by type name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientTable {
    entries: BTreeMap<String, FuelCoefficients<f64>>,
}

pub const COEFFICIENT_HEADER: &str =
    "type,mass_kg,wing_area_m2,cd0_clean,k_clean,cd0_approach,k_approach,cf1,cf2,cf3,cf4";

impl CoefficientTable {
    /// Synthetic placeholder coefficients for the default fleet. They are
    /// shaped like a jet performance table but are not real type data.
    pub fn synthetic() -> Self {
        let rows: [(&str, [f64; 10]); 6] = [
            ("A359", [210_000.0, 442.0, 0.018, 0.045, 0.045, 0.06, 0.6, 1300.0, 20.0, 90_000.0]),
            ("B773", [240_000.0, 428.0, 0.018, 0.045, 0.045, 0.06, 0.6, 1300.0, 22.0, 90_000.0]),
            ("A321", [70_000.0, 122.0, 0.02, 0.042, 0.05, 0.06, 0.45, 1100.0, 10.0, 90_000.0]),
            ("B737", [62_000.0, 125.0, 0.02, 0.042, 0.05, 0.06, 0.45, 1100.0, 9.0, 90_000.0]),
            ("A221", [55_000.0, 112.0, 0.021, 0.04, 0.05, 0.06, 0.42, 1000.0, 8.0, 90_000.0]),
            ("B735", [50_000.0, 105.0, 0.021, 0.04, 0.05, 0.06, 0.42, 1000.0, 8.0, 90_000.0]),
        ];
        let entries = rows
            .into_iter()
            .map(|(name, v)| {
                (
                    name.to_string(),
                    FuelCoefficients {
                        mass: v[0],
                        wing_area: v[1],
                        clean: DragPolar { cd0: v[2], k: v[3] },
                        approach: DragPolar { cd0: v[4], k: v[5] },
                        cf1: v[6],
                        cf2: v[7],
                        cf3: v[8],
                        cf4: v[9],
                    },
                )
            })
            .collect();
        Self { entries }
    }

    pub fn get(&self, kind: &str) -> Option<&FuelCoefficients<f64>> {
        self.entries.get(kind)
    }

    pub fn insert(&mut self, kind: &str, coeffs: FuelCoefficients<f64>) {
        self.entries.insert(kind.to_string(), coeffs);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FuelCoefficients<f64>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses the CSV coefficient format. Records with any nonpositive value
    /// are rejected with their line number.
    pub fn from_csv_str(text: &str, origin: &Path) -> crate::Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut entries = BTreeMap::new();
        for record in reader.deserialize::<CoefficientRecord>() {
            let record = record.map_err(|e| crate::Error::Parse {
                path: origin.to_path_buf(),
                message: e.to_string(),
            })?;
            let (kind, coeffs): (String, FuelCoefficients<f64>) = record.into();
            let bad = coeffs.nonpositive_fields();
            if !bad.is_empty() {
                return Err(crate::Error::Parse {
                    path: origin.to_path_buf(),
                    message: format!("type {kind}: nonpositive {}", bad.join(", ")),
                });
            }
            entries.insert(kind, coeffs);
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        Self::from_csv_str(&text, path)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(COEFFICIENT_HEADER);
        out.push('\n');
        for (name, c) in &self.entries {
            out.push_str(&format!(
                "{name},{},{},{},{},{},{},{},{},{},{}\n",
                c.mass, c.wing_area, c.clean.cd0, c.clean.k, c.approach.cd0, c.approach.k, c.cf1, c.cf2, c.cf3, c.cf4
            ));
        }
        out
    }
}

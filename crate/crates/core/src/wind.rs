//! Scenario wind: one scalar per scenario blowing from east to west, projected
//! onto each path segment as a signed along-track component.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{headings_of, path_geometry, ApproachLayout, PathGeometry, Point2, SegmentHeadings, SegmentSpeeds};
use crate::real::{Real, SECONDS_PER_HOUR};

/// Draws the scenario wind speed from `N(mu, sigma²)`.
///
/// # Panics
/// If `sigma` is negative or not finite.
pub fn sample_wind<T, R>(mu: T, sigma: T, rng: &mut R) -> T
where
    T: Real,
    StandardNormal: Distribution<T>,
    R: Rng + ?Sized,
{
    if sigma == T::zero() {
        return mu;
    }
    Normal::new(mu, sigma).expect("wind sigma must be finite and >= 0").sample(rng)
}

/// Signed along-track wind on each segment in knots; positive is a tailwind.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindComponents<T> {
    pub leg: T,
    pub arc: T,
    pub fin: T,
}

/// The scenario wind scalar. The wind vector is `(-w, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindContext<T> {
    pub w: T,
}

impl<T: Real> WindContext<T> {
    pub fn new(w: T) -> Self {
        Self { w }
    }

    pub fn calm() -> Self {
        Self { w: T::zero() }
    }

    pub fn components(&self, headings: SegmentHeadings<T>) -> WindComponents<T> {
        segment_wind_components(self.w, headings)
    }
}

pub fn segment_wind_components<T: Real>(w: T, headings: SegmentHeadings<T>) -> WindComponents<T> {
    WindComponents {
        leg: -w * headings.leg,
        arc: -w * headings.arc,
        fin: -w * headings.fin,
    }
}

fn ground_speed<T: Real>(segment: &'static str, airspeed: T, wind: T) -> Result<T> {
    let gs = airspeed + wind;
    if gs > T::zero() {
        Ok(gs)
    } else {
        Err(Error::NonpositiveGroundSpeed {
            segment,
            ground_speed_kts: gs.to_f64_lossy(),
        })
    }
}

/// Entry-to-FAF time in seconds over an already constructed path.
pub fn corrected_duration<T: Real>(
    geometry: &PathGeometry<T>,
    speeds: SegmentSpeeds<T>,
    wind: WindComponents<T>,
) -> Result<T> {
    let leg = ground_speed("tangent leg", speeds.leg, wind.leg)?;
    let arc = ground_speed("arc", speeds.arc, wind.arc)?;
    let fin = ground_speed("final", speeds.fin, wind.fin)?;
    let hours = geometry.tangent_leg_len / leg + geometry.arc_len / arc + geometry.extension / fin;
    Ok(hours * T::lit(SECONDS_PER_HOUR))
}

/// Builds the path for `(entry, d)` and returns it with its wind components
/// and wind-corrected duration in seconds.
pub fn corrected_path<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
    speeds: SegmentSpeeds<T>,
    wind: WindContext<T>,
) -> Result<(PathGeometry<T>, WindComponents<T>, T)> {
    let geometry = path_geometry(entry, layout, d)?;
    let comps = wind.components(headings_of(entry, &geometry));
    let duration = corrected_duration(&geometry, speeds, comps)?;
    Ok((geometry, comps, duration))
}

/// Absolute FAF arrival time `tau + duration` in seconds.
pub fn wind_corrected_arrival_time<T: Real>(
    tau: T,
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
    speeds: SegmentSpeeds<T>,
    wind: WindContext<T>,
) -> Result<T> {
    corrected_path(entry, layout, d, speeds, wind).map(|(_, _, dt)| tau + dt)
}

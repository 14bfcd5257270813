//! Closed-form three-segment terminal path: tangent leg, radius-to-fix arc and
//! final straight-in extension, all as functions of the base-leg extension `d`.
//!
//! Coordinates are in nautical miles with `x` east and `y` north. The final
//! course is flown along `+x` into the FAF. Arrivals north of the runway
//! centerline turn left around a center above the course, southern arrivals
//! turn right around a center below it.

use thiserror::Error;

use crate::real::{Real, SECONDS_PER_HOUR};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Counterclockwise perpendicular `(-y, x)`.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("entry fix lies within one turn radius of the runway centerline")]
    EntryInDeadBand,
    #[error("entry fix is not outside the turn circle; no tangent exists")]
    EntryInsideTurnCircle,
    #[error("segment speeds must be positive")]
    NonpositiveSpeed,
}

/// Which side of the runway centerline an arrival comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    North,
    South,
}

impl Side {
    fn sign<T: Real>(self) -> T {
        match self {
            Side::North => T::one(),
            Side::South => -T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CornerFix<T> {
    pub name: String,
    pub fix: Point2<T>,
}

/// Terminal layout: FAF, turn radius and the named feeder fixes.
///
/// The runway heading is fixed to `+x`. Corner fixes are kept sorted by name,
/// so a corner's index doubles as the tie-break order between streams.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproachLayout<T> {
    pub faf: Point2<T>,
    pub turn_radius: T,
    pub tcp_radius: T,
    corners: Vec<CornerFix<T>>,
}

impl<T: Real> ApproachLayout<T> {
    pub fn new(faf: Point2<T>, turn_radius: T, tcp_radius: T, mut corners: Vec<CornerFix<T>>) -> Self {
        corners.sort_by(|a, b| a.name.cmp(&b.name));
        Self {
            faf,
            turn_radius,
            tcp_radius,
            corners,
        }
    }

    /// FAF at the origin, r = 2.5 nmi, four corners on a 35 nmi TCP circle at
    /// bearings 315° (DALAS), 45° (LOGEN), 135° (HUSKY) and 225° (TIROE).
    pub fn standard() -> Self {
        let tcp = T::lit(35.0);
        let faf = Point2::new(T::zero(), T::zero());
        let corners = [("DALAS", 315.0), ("LOGEN", 45.0), ("HUSKY", 135.0), ("TIROE", 225.0)]
            .into_iter()
            .map(|(name, bearing)| {
                let b = T::lit(bearing).to_radians();
                CornerFix {
                    name: name.to_string(),
                    fix: Point2::new(faf.x + tcp * b.sin(), faf.y + tcp * b.cos()),
                }
            })
            .collect();
        Self::new(faf, T::lit(2.5), tcp, corners)
    }

    pub fn corners(&self) -> &[CornerFix<T>] {
        &self.corners
    }

    pub fn corner_index(&self, name: &str) -> Option<usize> {
        self.corners.iter().position(|c| c.name == name)
    }

    /// Corner fixes whose offset from the centerline is at most `2r`.
    pub fn invalid_corners(&self) -> Vec<&str> {
        let two_r = self.turn_radius + self.turn_radius;
        self.corners
            .iter()
            .filter(|c| !c.fix.is_finite() || (c.fix.y - self.faf.y).abs() <= two_r)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Start of the final segment for extension `d`.
    pub fn arc_end(&self, d: T) -> Point2<T> {
        Point2::new(self.faf.x - d, self.faf.y)
    }

    pub fn side_of(&self, entry: Point2<T>) -> Result<Side, GeometryError> {
        let r = self.turn_radius;
        if entry.y > self.faf.y + r {
            Ok(Side::North)
        } else if entry.y < self.faf.y - r {
            Ok(Side::South)
        } else {
            Err(GeometryError::EntryInDeadBand)
        }
    }
}

impl<T: Real> Default for ApproachLayout<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// Commanded airspeeds on the three segments, in knots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSpeeds<T> {
    pub leg: T,
    pub arc: T,
    pub fin: T,
}

impl<T: Real> SegmentSpeeds<T> {
    pub fn new(leg: T, arc: T, fin: T) -> Self {
        Self { leg, arc, fin }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGeometry<T> {
    pub side: Side,
    pub turn_center: Point2<T>,
    pub tangent_point: Point2<T>,
    pub arc_end: Point2<T>,
    /// nmi
    pub tangent_leg_len: T,
    /// radians, in `[0, π]`
    pub arc_angle: T,
    /// nmi
    pub arc_len: T,
    /// nmi
    pub extension: T,
    /// nmi
    pub total_len: T,
}

/// x-components of the unit headings of the three segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentHeadings<T> {
    pub leg: T,
    pub arc: T,
    pub fin: T,
}

pub fn turn_center<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
) -> Result<Point2<T>, GeometryError> {
    let side = layout.side_of(entry)?;
    Ok(center_for(layout, side, d))
}

fn center_for<T: Real>(layout: &ApproachLayout<T>, side: Side, d: T) -> Point2<T> {
    Point2::new(layout.faf.x - d, layout.faf.y + side.sign::<T>() * layout.turn_radius)
}

/// Tangent leg length and tangent point from `entry` onto the circle of
/// radius `r` around `center`.
pub fn tangent_geometry<T: Real>(
    entry: Point2<T>,
    center: Point2<T>,
    r: T,
    side: Side,
) -> Result<(T, Point2<T>), GeometryError> {
    let v = entry.sub(center);
    let d0_sq = v.dot(v);
    let r_sq = r * r;
    if !(d0_sq > r_sq) {
        return Err(GeometryError::EntryInsideTurnCircle);
    }
    let leg = (d0_sq - r_sq).sqrt();
    let a = r_sq / d0_sq;
    let b = r * leg / d0_sq;
    let offset = v.scale(a).add(v.perp().scale(side.sign::<T>() * b));
    Ok((leg, center.add(offset)))
}

/// Central angle swept from the tangent point to the arc end, from the
/// tangent-point offsets relative to the turn center.
pub fn rf_arc_angle<T: Real>(tangent_point: Point2<T>, center: Point2<T>, side: Side) -> T {
    let delta = tangent_point.sub(center);
    match side {
        Side::North => delta.x.abs().atan2(-delta.y),
        Side::South => delta.x.abs().atan2(delta.y),
    }
}

/// The same central angle written directly in the entry, FAF, radius and
/// extension, without forming the tangent point.
pub fn rf_arc_angle_expanded<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
) -> Result<T, GeometryError> {
    let side = layout.side_of(entry)?;
    let r = layout.turn_radius;
    let dx = entry.x - layout.faf.x + d;
    let dy = match side {
        Side::North => entry.y - layout.faf.y - r,
        Side::South => entry.y - layout.faf.y + r,
    };
    let d0_sq = dx * dx + dy * dy;
    if !(d0_sq > r * r) {
        return Err(GeometryError::EntryInsideTurnCircle);
    }
    let a = r * r / d0_sq;
    let b = r * (d0_sq - r * r).sqrt() / d0_sq;
    Ok(match side {
        Side::North => (a * dx - b * dy).abs().atan2(-(a * dy + b * dx)),
        Side::South => (a * dx + b * dy).abs().atan2(a * dy - b * dx),
    })
}

pub fn path_geometry<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
) -> Result<PathGeometry<T>, GeometryError> {
    let side = layout.side_of(entry)?;
    let center = center_for(layout, side, d);
    let r = layout.turn_radius;
    let (leg, tangent_point) = tangent_geometry(entry, center, r, side)?;
    let arc_angle = rf_arc_angle(tangent_point, center, side);
    let arc_len = r * arc_angle;
    Ok(PathGeometry {
        side,
        turn_center: center,
        tangent_point,
        arc_end: layout.arc_end(d),
        tangent_leg_len: leg,
        arc_angle,
        arc_len,
        extension: d,
        total_len: leg + arc_len + d,
    })
}

/// Still-air flight time over a constructed path, in seconds.
pub fn still_air_duration<T: Real>(
    geometry: &PathGeometry<T>,
    speeds: SegmentSpeeds<T>,
) -> Result<T, GeometryError> {
    if !(speeds.leg > T::zero() && speeds.arc > T::zero() && speeds.fin > T::zero()) {
        return Err(GeometryError::NonpositiveSpeed);
    }
    let hours = geometry.tangent_leg_len / speeds.leg
        + geometry.arc_len / speeds.arc
        + geometry.extension / speeds.fin;
    Ok(hours * T::lit(SECONDS_PER_HOUR))
}

/// Path and nominal (no-wind) entry-to-FAF duration in seconds.
pub fn path_and_time<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
    speeds: SegmentSpeeds<T>,
) -> Result<(PathGeometry<T>, T), GeometryError> {
    let geometry = path_geometry(entry, layout, d)?;
    let duration = still_air_duration(&geometry, speeds)?;
    Ok((geometry, duration))
}

/// Heading x-components used for the wind projection. The arc is represented
/// by its chord; a vanishing chord falls back to the final course (`1`).
pub fn headings_of<T: Real>(entry: Point2<T>, geometry: &PathGeometry<T>) -> SegmentHeadings<T> {
    let leg = if geometry.tangent_leg_len > T::zero() {
        (geometry.tangent_point.x - entry.x) / geometry.tangent_leg_len
    } else {
        T::one()
    };
    let chord = geometry.arc_end.sub(geometry.tangent_point);
    let chord_len = chord.norm();
    let arc = if chord_len > T::lit(1e-12) * geometry.arc_end.norm().max(T::one()) {
        chord.x / chord_len
    } else {
        T::one()
    };
    SegmentHeadings {
        leg: leg.max(-T::one()).min(T::one()),
        arc: arc.max(-T::one()).min(T::one()),
        fin: T::one(),
    }
}

pub fn segment_headings<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d: T,
) -> Result<SegmentHeadings<T>, GeometryError> {
    let geometry = path_geometry(entry, layout, d)?;
    Ok(headings_of(entry, &geometry))
}

/// Largest extension in `[0, d_max]` for which the entry still lies strictly
/// outside the turn circle, or `None` when no extension in range works.
pub fn max_feasible_extension<T: Real>(
    entry: Point2<T>,
    layout: &ApproachLayout<T>,
    d_max: T,
) -> Option<T> {
    let side = layout.side_of(entry).ok()?;
    let feasible = |d: T| path_geometry(entry, layout, d).is_ok();
    if feasible(d_max) {
        return Some(d_max);
    }
    let r = layout.turn_radius;
    let dy = entry.y - center_for(layout, side, T::zero()).y;
    // infeasible iff |entry.x - faf.x + d| <= sqrt(r² - dy²)
    let half = (r * r - dy * dy).max(T::zero()).sqrt();
    let lower_edge = layout.faf.x - entry.x - half;
    let edge = lower_edge.min(d_max);
    // step just below the closed infeasible interval, widening until the
    // rounding in the tangent construction agrees
    let mut eps = T::lit(1e-9) * (T::one() + edge.abs());
    for _ in 0..40 {
        let candidate = edge - eps;
        if candidate < T::zero() {
            break;
        }
        if feasible(candidate) {
            return Some(candidate);
        }
        eps = eps + eps;
    }
    feasible(T::zero()).then(T::zero)
}

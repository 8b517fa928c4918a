//! Convex-hull boundary of the reachable set of a unit-speed
//! differential-drive robot, the disk-and-slab enclosing set, exact and
//! sampled areas, and Jaccard-distance diagnostics.
//!
//! Everything here lives in the normalized frame: the robot starts at the
//! origin heading along +x, and one time unit equals one length unit. The
//! reachable set at time `t` is symmetric about both axes, so boundary
//! curves are parameterized in the first quadrant and mirrored.
//!
//! Area functions return first-quadrant areas; their names say so. Their
//! large-t limit is a quarter circle, `pi t^2 / 4`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::vec2::Vec2;

/// Absolute tolerance for inclusive boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Default boundary samples per quadrant.
pub const DEFAULT_SAMPLES: usize = 1024;

/// Vertical half-width of the enclosing set at time `t`: the tightest
/// `|y|` bound on the reachable set.
///
/// Piecewise: `1 - cos(t)` up to `t = pi/2`, then `t - pi/2 + 1`. The two
/// branches agree at the joint and the function is strictly increasing.
pub fn kset_half_width(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    Ok(half_width_raw(t))
}

pub(crate) fn half_width_raw(t: f64) -> f64 {
    if t <= FRAC_PI_2 {
        // 1 - cos(t) evaluated without cancellation near zero.
        let s = (0.5 * t).sin();
        2.0 * s * s
    } else {
        t - FRAC_PI_2 + 1.0
    }
}

/// The enclosing set at time `t`: the radius-`t` disk intersected with the
/// slab `|y| <= half_width`. A convex superset of the reachable set's hull.
#[derive(Clone, Copy, Debug)]
pub struct KSetParams {
    pub t: f64,
    pub half_width: f64,
}

impl KSetParams {
    pub fn new(t: f64) -> Result<Self> {
        Ok(KSetParams {
            t,
            half_width: kset_half_width(t)?,
        })
    }
}

/// A sample of the curved first-quadrant hull boundary together with its
/// curve parameter.
#[derive(Clone, Copy, Debug)]
pub struct HullBoundaryPoint {
    /// Curve parameter in [0, min(t, pi/2)].
    pub psi: f64,
    pub point: Vec2,
}

/// A point on the curved outer boundary of the reachable set's convex hull
/// in the first quadrant:
/// `(sin(psi) + (t - psi) cos(psi), 1 - cos(psi) + (t - psi) sin(psi))`.
///
/// At `psi = 0` this is `(t, 0)`; at the far end it reaches the apex where
/// the boundary flattens into the top edge of the hull.
pub fn hull_boundary_point(t: f64, psi: f64) -> Result<Vec2> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let psi_max = t.min(FRAC_PI_2);
    if !(0.0..=psi_max).contains(&psi) {
        return Err(Error::domain(format!(
            "curve parameter {psi} outside [0, {psi_max}]"
        )));
    }
    Ok(curve_point(t, psi))
}

fn curve_point(t: f64, psi: f64) -> Vec2 {
    let (s, c) = psi.sin_cos();
    let gamma = t - psi;
    Vec2::new(s + gamma * c, 1.0 - c + gamma * s)
}

/// Analytic derivative of the squared norm of the boundary curve with
/// respect to its parameter: `2 (t - psi) (cos(psi) - 1)`, which is
/// non-positive everywhere on the curve's domain.
pub fn boundary_norm_sq_derivative(t: f64, psi: f64) -> f64 {
    2.0 * (t - psi) * (psi.cos() - 1.0)
}

/// Uniformly sampled first-quadrant boundary, from the x-axis contact
/// (`psi = 0`) to the apex.
pub fn hull_boundary_samples(t: f64, samples: usize) -> Result<Vec<HullBoundaryPoint>> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if samples < 2 {
        return Err(Error::argument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let psi_max = t.min(FRAC_PI_2);
    Ok((0..samples)
        .map(|j| {
            let psi = psi_max * j as f64 / (samples - 1) as f64;
            HullBoundaryPoint {
                psi,
                point: curve_point(t, psi),
            }
        })
        .collect())
}

/// Counterclockwise closed polyline approximating the hull boundary:
/// the four mirrored quadrant curves plus the two horizontal edges that
/// join the apexes across the y-axis. The closing edge back to the first
/// vertex is implied; [`polyline_csv`] repeats it explicitly.
pub fn hull_boundary_polyline(t: f64, samples_per_quadrant: usize) -> Result<Vec<Vec2>> {
    if samples_per_quadrant < 4 {
        return Err(Error::argument(format!(
            "need at least 4 samples per quadrant, got {samples_per_quadrant}"
        )));
    }
    let q1: Vec<Vec2> = hull_boundary_samples(t, samples_per_quadrant)?
        .into_iter()
        .map(|s| s.point)
        .collect();
    Ok(mirror_ring(&q1))
}

/// Assembles a CCW ring from a first-quadrant arc running from the
/// positive x-axis towards the y-axis. Joint vertices that coincide under
/// reflection (on either axis) are emitted once.
fn mirror_ring(q1: &[Vec2]) -> Vec<Vec2> {
    fn push_unique(ring: &mut Vec<Vec2>, p: Vec2) {
        if ring.last() != Some(&p) {
            ring.push(p);
        }
    }
    let mut ring: Vec<Vec2> = Vec::with_capacity(4 * q1.len());
    for &p in q1 {
        push_unique(&mut ring, p);
    }
    for &p in q1.iter().rev() {
        push_unique(&mut ring, Vec2::new(-p.x, p.y));
    }
    for &p in q1 {
        push_unique(&mut ring, Vec2::new(-p.x, -p.y));
    }
    for &p in q1.iter().rev() {
        push_unique(&mut ring, Vec2::new(p.x, -p.y));
    }
    if ring.len() > 1 && ring.last() == Some(&ring[0]) {
        ring.pop();
    }
    ring
}

/// Closed-form first-quadrant hull area for `t > pi/2`:
/// `(12 pi (t^2 - 1) + t (48 - 6 pi^2) + pi^3) / 48`.
///
/// The formula integrates the boundary curve over its full parameter range
/// `[0, pi/2]`, which only covers times past `pi/2`; use
/// [`hull_area_polygon`] for smaller times.
pub fn hull_area_first_quadrant(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= FRAC_PI_2 {
        return Err(Error::domain(format!(
            "closed-form hull area needs t > pi/2, got {t}; integrate the sampled boundary instead"
        )));
    }
    Ok((12.0 * PI * (t * t - 1.0) + t * (48.0 - 6.0 * PI * PI) + PI.powi(3)) / 48.0)
}

/// Closed-form first-quadrant area of the enclosing set for `t > pi/2`:
/// `(t^2/2) (asin(1 - delta) + sin(2 asin(1 - delta)) / 2)` with
/// `delta = (pi/2 - 1) / t`.
pub fn kset_area_first_quadrant(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= FRAC_PI_2 {
        return Err(Error::domain(format!(
            "closed-form enclosing-set area needs t > pi/2, got {t}"
        )));
    }
    let delta = (FRAC_PI_2 - 1.0) / t;
    let theta = (1.0 - delta).asin();
    Ok(0.5 * t * t * (theta + 0.5 * (2.0 * theta).sin()))
}

/// First-quadrant hull area by shoelace integration of the sampled
/// boundary. Valid for every `t > 0`; this is the reference route the
/// closed form is checked against.
pub fn hull_area_polygon(t: f64, samples: usize) -> Result<f64> {
    Ok(polygon_area(&first_quadrant_ring(t, samples)?))
}

/// The closed first-quadrant region: origin, x-axis contact, boundary
/// curve, apex, then back along the top edge to the y-axis.
fn first_quadrant_ring(t: f64, samples: usize) -> Result<Vec<Vec2>> {
    let curve = hull_boundary_samples(t, samples)?;
    let half_width = half_width_raw(t);
    let mut ring = Vec::with_capacity(samples + 2);
    ring.push(Vec2::ZERO);
    ring.extend(curve.into_iter().map(|s| s.point));
    ring.push(Vec2::new(0.0, half_width));
    Ok(ring)
}

/// First-quadrant area of the enclosing set by composite Simpson
/// integration of `min(half_width, sqrt(t^2 - x^2))` over `[0, t]`.
/// Valid for every `t > 0`; reference route for the closed form.
pub fn kset_area_numeric(t: f64, intervals: usize) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if intervals < 2 {
        return Err(Error::argument(format!(
            "need at least 2 intervals, got {intervals}"
        )));
    }
    let n = intervals + (intervals % 2);
    let half_width = half_width_raw(t);
    let h = t / n as f64;
    let f = |x: f64| half_width.min((t * t - x * x).max(0.0).sqrt());
    let mut sum = f(0.0) + f(t);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    Ok(sum * h / 3.0)
}

/// Membership test for the enclosing set, boundary inclusive within
/// [`BOUNDARY_TOL`]: inside iff the norm is at most `t` and `|y|` is at
/// most the half-width. Non-positive times describe an empty set.
pub fn kset_contains(t: f64, p: Vec2) -> bool {
    if !t.is_finite() || t <= 0.0 {
        return false;
    }
    p.norm() <= t + BOUNDARY_TOL && p.y.abs() <= half_width_raw(t) + BOUNDARY_TOL
}

/// Counterclockwise closed polyline of the enclosing set's boundary:
/// arc portions of the radius-`t` circle joined by the two slab edges.
pub fn kset_boundary_polyline(t: f64, samples_per_quadrant: usize) -> Result<Vec<Vec2>> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if samples_per_quadrant < 4 {
        return Err(Error::argument(format!(
            "need at least 4 samples per quadrant, got {samples_per_quadrant}"
        )));
    }
    let half_width = half_width_raw(t);
    let theta_max = (half_width / t).min(1.0).asin();
    let corner_x = (t * t - half_width * half_width).max(0.0).sqrt();
    let n = samples_per_quadrant;
    let mut q1 = Vec::with_capacity(2 * n);
    for j in 0..n {
        let theta = theta_max * j as f64 / (n - 1) as f64;
        q1.push(Vec2::new(t * theta.cos(), t * theta.sin()));
    }
    // Top edge from the corner to the y-axis; the corner itself is the
    // last arc sample.
    for j in 1..n {
        let x = corner_x * (1.0 - j as f64 / (n - 1) as f64);
        q1.push(Vec2::new(x, half_width));
    }
    Ok(mirror_ring(&q1))
}

/// Jaccard distance between nested sets from their areas:
/// `1 - inner / outer`.
pub fn jaccard_nested(area_inner: f64, area_outer: f64) -> Result<f64> {
    let bad = |x: f64| !x.is_finite() || x <= 0.0;
    if bad(area_inner) || bad(area_outer) {
        return Err(Error::argument(format!(
            "areas must be positive, got inner={area_inner}, outer={area_outer}"
        )));
    }
    if area_inner > area_outer {
        return Err(Error::argument(format!(
            "inner area {area_inner} exceeds outer area {area_outer}"
        )));
    }
    Ok(1.0 - area_inner / area_outer)
}

/// Unsigned polygon area of a closed ring (shoelace). The closing edge
/// from the last vertex back to the first is implied.
pub fn polygon_area(ring: &[Vec2]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for (a, b) in ring.iter().zip(ring.iter().cycle().skip(1)) {
        twice += a.x * b.y - b.x * a.y;
    }
    (twice * 0.5).abs()
}

/// Renders a ring as CSV with header `x,y`, one vertex per row, with the
/// first vertex repeated last to close the ring.
pub fn polyline_csv(points: &[Vec2]) -> String {
    let mut out = String::with_capacity(32 * (points.len() + 2));
    out.push_str("x,y\n");
    for p in points.iter().chain(points.first()) {
        out.push_str(&sig9(p.x));
        out.push(',');
        out.push_str(&sig9(p.y));
        out.push('\n');
    }
    out
}

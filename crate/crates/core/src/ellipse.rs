//! Analytic minimum-area ellipse circumscribing the enclosing set, pose
//! transforms, and the membership tests used by the safe-time computation.
//!
//! The unposed ellipse is centred at the origin and axis-aligned, described
//! by the quadratic form `coeff_x * x^2 + coeff_y * y^2 <= 1`. Attaching a
//! pose translates the centre and rotates the axes with the robot heading.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::geometry::{half_width_raw, BOUNDARY_TOL};
use crate::pose::Pose;
use crate::vec2::Vec2;

/// Time beyond which the minimum-area ellipse is the radius-`t` circle:
/// `(1 + 1/sqrt(2)) (pi - 2)`, roughly 1.948832.
pub const CIRCLE_REGIME_ONSET: f64 = (1.0 + FRAC_1_SQRT_2) * (PI - 2.0);

/// Below this time the ellipse is treated as the single point at its
/// centre: any other point reports as outside. Keeps membership stable
/// where the quadratic-form coefficients blow up.
pub const DEGENERATE_TIME: f64 = 1e-9;

/// Quadratic-form coefficients `(A, B)` of the minimum-area ellipse
/// enclosing the reachable set's superset at time `t`.
///
/// Three regimes, continuous across both joints:
/// - `0 < t <= pi/2`: `A = 1 / (2 (t^2 - w^2))`, `B = 1 / (2 w^2)` with
///   `w = 1 - cos(t)`;
/// - `pi/2 < t <= CIRCLE_REGIME_ONSET`: same expressions with
///   `w = t - pi/2 + 1`;
/// - beyond that, the circle: `A = B = 1 / t^2`.
pub fn min_ellipse_params(t: f64) -> Result<(f64, f64)> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if t > CIRCLE_REGIME_ONSET {
        let c = 1.0 / (t * t);
        Ok((c, c))
    } else {
        let w = half_width_raw(t);
        let a = 1.0 / (2.0 * (t * t - w * w));
        let b = 1.0 / (2.0 * w * w);
        Ok((a, b))
    }
}

/// Time-indexed minimum-area ellipse, optionally placed at a robot pose.
#[derive(Clone, Copy, Debug)]
pub struct HorizonEllipse {
    pub t: f64,
    /// Quadratic-form coefficient along the (rotated) x axis.
    pub coeff_x: f64,
    /// Quadratic-form coefficient along the (rotated) y axis.
    pub coeff_y: f64,
    /// Centre and axis orientation; `None` means origin, unrotated.
    pub pose: Option<Pose>,
}

impl HorizonEllipse {
    /// The origin-centred ellipse for time `t`.
    pub fn for_time(t: f64) -> Result<Self> {
        let (coeff_x, coeff_y) = min_ellipse_params(t)?;
        Ok(HorizonEllipse {
            t,
            coeff_x,
            coeff_y,
            pose: None,
        })
    }

    /// Places the ellipse at a robot's start pose: the centre moves to the
    /// robot position and the long axis aligns with its heading.
    pub fn posed_at(mut self, pose: Pose) -> Self {
        self.pose = Some(pose);
        self
    }

    /// Semi-axis lengths `(along heading, across heading)`.
    pub fn semi_axes(&self) -> (f64, f64) {
        (1.0 / self.coeff_x.sqrt(), 1.0 / self.coeff_y.sqrt())
    }

    /// Grows both semi-axes by `radius`, for robots treated as disks
    /// rather than points.
    pub fn inflated(&self, radius: f64) -> Self {
        if radius <= 0.0 {
            return *self;
        }
        let (ax, ay) = self.semi_axes();
        HorizonEllipse {
            t: self.t,
            coeff_x: 1.0 / ((ax + radius) * (ax + radius)),
            coeff_y: 1.0 / ((ay + radius) * (ay + radius)),
            pose: self.pose,
        }
    }

    /// Quadratic-form value of a world-frame point: rotate the offset into
    /// the ellipse frame and evaluate `A u_x^2 + B u_y^2`. At most 1 inside,
    /// exactly 1 on the boundary.
    pub fn membership(&self, p: Vec2) -> f64 {
        let u = match &self.pose {
            Some(pose) => (p - pose.position).rotated(-pose.heading),
            None => p,
        };
        if self.t < DEGENERATE_TIME {
            return if u.norm() <= BOUNDARY_TOL {
                0.0
            } else {
                f64::INFINITY
            };
        }
        self.coeff_x * u.x * u.x + self.coeff_y * u.y * u.y
    }

    /// Boundary polyline with `samples` vertices, in the world frame when
    /// posed. Closing edge implied.
    pub fn boundary_polyline(&self, samples: usize) -> Vec<Vec2> {
        let (ax, ay) = self.semi_axes();
        let (center, heading) = match &self.pose {
            Some(pose) => (pose.position, pose.heading),
            None => (Vec2::ZERO, 0.0),
        };
        let (sh, ch) = heading.sin_cos();
        (0..samples)
            .map(|j| {
                let theta = std::f64::consts::TAU * j as f64 / samples as f64;
                let local = Vec2::new(ax * theta.cos(), ay * theta.sin());
                Vec2::new(
                    center.x + ch * local.x - sh * local.y,
                    center.y + sh * local.x + ch * local.y,
                )
            })
            .collect()
    }
}

/// The four points where the ellipse touches the enclosing set:
/// `(+-sqrt(t^2 - w^2), +-w)` with `w` the slab half-width. Only defined
/// up to [`CIRCLE_REGIME_ONSET`]; past it the contact locus is the whole
/// circular arc.
pub fn contact_points(t: f64) -> Result<[Vec2; 4]> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if t > CIRCLE_REGIME_ONSET {
        return Err(Error::domain(format!(
            "contact points are discrete only for t <= {CIRCLE_REGIME_ONSET}, got {t}"
        )));
    }
    let w = half_width_raw(t);
    let x = (t * t - w * w).sqrt();
    Ok([
        Vec2::new(x, w),
        Vec2::new(-x, w),
        Vec2::new(-x, -w),
        Vec2::new(x, -w),
    ])
}

/// CSV of ellipse parameters, one `t,A,B` row per requested time.
pub fn params_csv(times: &[f64]) -> Result<String> {
    let mut out = String::from("t,A,B\n");
    for &t in times {
        let (a, b) = min_ellipse_params(t)?;
        out.push_str(&format!("{},{},{}\n", sig9(t), sig9(a), sig9(b)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hull_boundary_polyline, kset_boundary_polyline, kset_contains};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn breakpoint_value() {
        // Sits past pi/2, so the three regimes are well ordered.
        assert!((CIRCLE_REGIME_ONSET - 1.94882056).abs() < 1e-6);
    }

    #[test]
    fn circle_regime() {
        let (a, b) = min_ellipse_params(10.0).unwrap();
        assert_eq!(a, 0.01);
        assert_eq!(b, 0.01);
    }

    #[test]
    fn early_regime_params() {
        // Closed form at t = 1: w = 1 - cos(1).
        let w = 1.0 - 1.0_f64.cos();
        let (a, b) = min_ellipse_params(1.0).unwrap();
        assert!((a - 1.0 / (2.0 * (1.0 - w * w))).abs() < 1e-12);
        assert!((b - 1.0 / (2.0 * w * w)).abs() < 1e-12);
        assert!((a - 0.634).abs() < 1e-3);
        assert!((b - 2.366).abs() < 1e-3);
    }

    #[test]
    fn rejects_non_positive_time() {
        assert!(min_ellipse_params(0.0).is_err());
        assert!(min_ellipse_params(-2.0).is_err());
        assert!(HorizonEllipse::for_time(0.0).is_err());
    }

    #[test]
    fn params_positive_and_ordered() {
        for i in 1..=3000 {
            let t = i as f64 * 0.01;
            let (a, b) = min_ellipse_params(t).unwrap();
            assert!(a > 0.0 && b > 0.0, "non-positive coefficient at t={t}");
            assert!(b >= a - 1e-15, "ordering violated at t={t}: a={a} b={b}");
        }
    }

    #[test]
    fn continuity_at_regime_joints() {
        for &joint in &[FRAC_PI_2, CIRCLE_REGIME_ONSET] {
            let (a_lo, b_lo) = min_ellipse_params(joint - 1e-12).unwrap();
            let (a_hi, b_hi) = min_ellipse_params(joint + 1e-12).unwrap();
            assert!((a_lo - a_hi).abs() < 1e-9, "A jumps at {joint}");
            assert!((b_lo - b_hi).abs() < 1e-9, "B jumps at {joint}");
        }
        // At the exact breakpoint both branch formulas coincide.
        let t = CIRCLE_REGIME_ONSET;
        let w = half_width_raw(t);
        assert!((t * t - 2.0 * w * w).abs() < 1e-12);
        let (a, b) = min_ellipse_params(t).unwrap();
        assert!((a - 1.0 / (t * t)).abs() < 1e-12);
        assert!((b - 1.0 / (t * t)).abs() < 1e-12);
    }

    #[test]
    fn constraint_relation_holds() {
        // B = (1 - A (t^2 - w^2)) / w^2 across both pre-circle regimes.
        let mut t = 0.01;
        while t <= CIRCLE_REGIME_ONSET {
            let w = half_width_raw(t);
            let (a, b) = min_ellipse_params(t).unwrap();
            let rhs = (1.0 - a * (t * t - w * w)) / (w * w);
            assert!(
                (b - rhs).abs() <= 1e-12 * b.abs().max(1.0),
                "relation broken at t={t}"
            );
            t += 0.007;
        }
    }

    #[test]
    fn membership_basics() {
        let e = HorizonEllipse::for_time(10.0).unwrap();
        assert_eq!(e.membership(Vec2::ZERO), 0.0);
        assert!((e.membership(Vec2::new(10.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!(e.membership(Vec2::new(10.1, 0.0)) > 1.0);
    }

    #[test]
    fn posed_membership() {
        // Rotate the regime-3 boundary point (10, 0) by pi/2 about (1, 1).
        let e = HorizonEllipse::for_time(10.0)
            .unwrap()
            .posed_at(Pose::new(1.0, 1.0, FRAC_PI_2));
        assert!((e.membership(Vec2::new(1.0, 11.0)) - 1.0).abs() < 1e-12);
        assert!((e.membership(Vec2::new(1.0, 1.0))).abs() < 1e-15);
    }

    #[test]
    fn degenerate_time_is_a_point() {
        let e = HorizonEllipse {
            t: 1e-12,
            coeff_x: 1e20,
            coeff_y: 1e20,
            pose: None,
        };
        assert_eq!(e.membership(Vec2::ZERO), 0.0);
        assert!(e.membership(Vec2::new(1e-6, 0.0)) > 1.0);
    }

    #[test]
    fn contact_point_geometry() {
        for &t in &[0.4, 1.0, FRAC_PI_2, 1.8, CIRCLE_REGIME_ONSET] {
            let e = HorizonEllipse::for_time(t).unwrap();
            let w = half_width_raw(t);
            for p in contact_points(t).unwrap() {
                assert!((e.membership(p) - 1.0).abs() < 1e-9, "t={t} p={p:?}");
                assert!((p.norm() - t).abs() < 1e-9, "not on the circle at t={t}");
                assert!((p.y.abs() - w).abs() < 1e-12, "not on the slab at t={t}");
                assert!(kset_contains(t, p));
            }
        }
        assert!(contact_points(2.0).is_err());
        assert!(contact_points(0.0).is_err());
    }

    #[test]
    fn contact_points_at_half_pi() {
        let pts = contact_points(FRAC_PI_2).unwrap();
        let x = (FRAC_PI_2 * FRAC_PI_2 - 1.0).sqrt();
        assert!((pts[0].x - x).abs() < 1e-12);
        assert!((pts[0].y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circumscribes_hull_and_kset() {
        for &t in &[0.2, 0.8, 1.5, 2.0, 5.0, 17.0, 30.0] {
            let e = HorizonEllipse::for_time(t).unwrap();
            for p in hull_boundary_polyline(t, 256).unwrap() {
                assert!(e.membership(p) <= 1.0 + 1e-9, "hull point escapes at t={t}");
            }
            for p in kset_boundary_polyline(t, 256).unwrap() {
                assert!(
                    e.membership(p) <= 1.0 + 1e-9,
                    "enclosing-set point escapes at t={t}"
                );
            }
        }
    }

    #[test]
    fn inflation_grows_axes() {
        let e = HorizonEllipse::for_time(2.0).unwrap();
        let bigger = e.inflated(0.25);
        let (ax, ay) = e.semi_axes();
        let (bx, by) = bigger.semi_axes();
        assert!((bx - ax - 0.25).abs() < 1e-12);
        assert!((by - ay - 0.25).abs() < 1e-12);
        // Boundary of the original is strictly inside the inflated one.
        assert!(bigger.membership(Vec2::new(ax, 0.0)) < 1.0);
    }

    #[test]
    fn boundary_polyline_on_boundary() {
        let e = HorizonEllipse::for_time(1.3)
            .unwrap()
            .posed_at(Pose::new(-2.0, 0.5, 0.7));
        for p in e.boundary_polyline(64) {
            assert!((e.membership(p) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn params_csv_shape() {
        let csv = params_csv(&[10.0]).unwrap();
        assert_eq!(csv, "t,A,B\n1.00000000e1,1.00000000e-2,1.00000000e-2\n");
        assert!(params_csv(&[0.0]).is_err());
    }
}

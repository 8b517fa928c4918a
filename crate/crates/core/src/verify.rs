//! Self-contained check suites that compare the analytic routes against
//! independent numerical ones: a discretized minimum-area-ellipse search,
//! polygon and quadrature areas, finite differences, random admissible
//! rollouts, and randomized fleet scenarios.
//!
//! The suites return structured results; the CLI prints one line per
//! check and the acceptance tests assert on them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ellipse::{min_ellipse_params, HorizonEllipse, CIRCLE_REGIME_ONSET};
use crate::geometry::{
    boundary_norm_sq_derivative, hull_area_first_quadrant, hull_area_polygon, hull_boundary_point,
    hull_boundary_polyline, jaccard_nested, kset_area_first_quadrant, kset_area_numeric,
    kset_boundary_polyline,
};
use crate::horizon::open_loop_position;
use crate::pose::{Pose, VelocityCommand};
use crate::sim::{run_scenario, OutageWindow, RobotSpec, ScenarioConfig};
use crate::vec2::Vec2;

/// One named comparison with its measured value and limit.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    /// Comparison the check performs, for display: measured `cmp` limit.
    pub cmp: &'static str,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= limit`.
    fn within(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            limit,
            cmp: "<=",
            passed: measured <= limit,
        }
    }

    /// Passes when `measured < limit`.
    fn strictly_below(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            limit,
            cmp: "<",
            passed: measured < limit,
        }
    }

    /// Passes when `measured > limit`.
    fn exceeds(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            limit,
            cmp: ">",
            passed: measured > limit,
        }
    }
}

/// A suite's worth of checks.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Minimum-area ellipse by brute force: sample the enclosing set's
/// boundary, reduce the program to the single free coefficient `A` (the
/// largest feasible `B` for a given `A` comes from the tightest sampled
/// containment constraint), and minimize `-log(A) - log(B(A))` by
/// golden-section search over `(0, 1/t^2]`.
pub fn min_ellipse_oracle(t: f64, samples_per_quadrant: usize) -> (f64, f64) {
    let pts = kset_boundary_polyline(t, samples_per_quadrant).expect("positive time");
    let b_for = |a: f64| -> f64 {
        let mut b = f64::INFINITY;
        for p in &pts {
            let y_sq = p.y * p.y;
            if y_sq > 1e-18 {
                let cand = (1.0 - a * p.x * p.x) / y_sq;
                if cand < b {
                    b = cand;
                }
            }
        }
        b
    };
    let objective = |a: f64| -> f64 {
        let b = b_for(a);
        if !a.is_finite() || a <= 0.0 || !b.is_finite() || b <= 0.0 {
            return f64::INFINITY;
        }
        -a.ln() - b.ln()
    };

    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut lo = 1e-9 / (t * t);
    let mut hi = 1.0 / (t * t);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    for _ in 0..140 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    let a = 0.5 * (lo + hi);
    (a, b_for(a))
}

/// Dense entry scan for the pairwise safe time, step `step`: walks the
/// elapsed-time axis point by point and returns the last grid point before
/// the first membership dip to 1 or below. Independent of the production
/// scan (no prefilter, no cell refinement, no bisection).
pub fn pairwise_entry_oracle(
    i_pose: &Pose,
    i_cmd: VelocityCommand,
    j_pose: &Pose,
    cap: f64,
    step: f64,
) -> f64 {
    let mut prev = 0.0;
    let mut k = 1u64;
    loop {
        let mu = k as f64 * step;
        if mu > cap + 1e-12 {
            return cap;
        }
        let ellipse = HorizonEllipse::for_time(mu)
            .expect("positive elapsed time")
            .posed_at(*j_pose);
        let m = ellipse.membership(open_loop_position(i_pose, i_cmd, mu));
        if m <= 1.0 {
            return prev;
        }
        prev = mu;
        k += 1;
    }
}

/// Analytic ellipse parameters versus the discretized oracle, plus regime
/// continuity at both joints.
pub fn ellipse_suite() -> Report {
    let mut checks = Vec::new();
    for &t in &[0.5, 1.0, 1.5, 2.5] {
        let (a, b) = min_ellipse_params(t).expect("positive time");
        let analytic = -(a * b).ln();
        // 90 samples per quadrant puts about 720 points on the boundary.
        let (oa, ob) = min_ellipse_oracle(t, 90);
        let oracle = -(oa * ob).ln();
        checks.push(Check::within(
            format!("min-area objective gap vs oracle at t={t}"),
            (analytic - oracle).abs(),
            1e-3,
        ));
    }
    for (label, joint) in [("t=pi/2", FRAC_PI_2), ("circle onset", CIRCLE_REGIME_ONSET)] {
        let (a_lo, b_lo) = min_ellipse_params(joint - 1e-12).unwrap();
        let (a_hi, b_hi) = min_ellipse_params(joint + 1e-12).unwrap();
        checks.push(Check::within(
            format!("regime continuity at {label}"),
            (a_lo - a_hi).abs().max((b_lo - b_hi).abs()),
            1e-9,
        ));
    }
    Report {
        suite: "ellipse",
        checks,
    }
}

/// Every sampled hull and enclosing-set boundary point sits inside the
/// ellipse, across random times in (0, 30].
pub fn containment_suite(trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = 0.0;
    for _ in 0..trials {
        let t = 30.0 * (1.0 - rng.random::<f64>());
        let ellipse = HorizonEllipse::for_time(t).expect("positive time");
        let mut local = f64::NEG_INFINITY;
        for p in hull_boundary_polyline(t, 512).expect("valid polyline") {
            local = local.max(ellipse.membership(p));
        }
        for p in kset_boundary_polyline(t, 128).expect("valid polyline") {
            local = local.max(ellipse.membership(p));
        }
        if local > worst {
            worst = local;
            worst_t = t;
        }
    }
    Report {
        suite: "containment",
        checks: vec![Check::within(
            format!("max boundary membership over {trials} random times (worst at t={worst_t:.6})"),
            worst,
            1.0 + 1e-9,
        )],
    }
}

/// Closed-form areas versus polygon and quadrature integration.
pub fn areas_suite() -> Report {
    let mut checks = Vec::new();
    for &t in &[2.0, PI, 5.0, 10.0, 25.0] {
        let hull_closed = hull_area_first_quadrant(t).expect("t > pi/2");
        let hull_sampled = hull_area_polygon(t, 4096).expect("valid polyline");
        checks.push(Check::within(
            format!("hull area closed vs polygon at t={t:.4}"),
            (hull_closed - hull_sampled).abs() / hull_closed,
            1e-4,
        ));
        let kset_closed = kset_area_first_quadrant(t).expect("t > pi/2");
        let kset_sampled = kset_area_numeric(t, 1 << 16).expect("valid quadrature");
        checks.push(Check::within(
            format!("enclosing-set area closed vs quadrature at t={t:.4}"),
            (kset_closed - kset_sampled).abs() / kset_closed,
            1e-4,
        ));
    }
    Report {
        suite: "areas",
        checks,
    }
}

/// Jaccard distances shrink with time: hull vs enclosing set and hull vs
/// ellipse, both over {5, 10, 25} (the distance peaks near t = 3 before
/// decaying, so the tail of the sweep carries the convergence claim).
/// All areas come from the sampled routes.
pub fn jaccard_suite() -> Report {
    let mut checks = Vec::new();

    let hull_area = |t: f64| hull_area_polygon(t, 2048).expect("valid polyline");
    let kset_area = |t: f64| kset_area_numeric(t, 1 << 15).expect("valid quadrature");
    let ellipse_area = |t: f64| {
        let (a, b) = min_ellipse_params(t).expect("positive time");
        0.25 * PI / (a * b).sqrt()
    };

    let sweep = [5.0, 10.0, 25.0];
    let d_kset: Vec<f64> = sweep
        .iter()
        .map(|&t| jaccard_nested(hull_area(t), kset_area(t)).expect("nested"))
        .collect();
    let max_step = d_kset
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::strictly_below(
        "hull-vs-enclosing-set distance strictly decreasing on {5,10,25}",
        max_step,
        0.0,
    ));
    checks.push(Check::strictly_below(
        "hull-vs-enclosing-set distance at t=25",
        *d_kset.last().unwrap(),
        0.01,
    ));

    let sweep_e = [5.0, 10.0, 25.0];
    let d_e: Vec<f64> = sweep_e
        .iter()
        .map(|&t| jaccard_nested(hull_area(t), ellipse_area(t)).expect("nested"))
        .collect();
    let max_step_e = d_e
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::strictly_below(
        "hull-vs-ellipse distance strictly decreasing on {5,10,25}",
        max_step_e,
        0.0,
    ));
    checks.push(Check::strictly_below(
        "hull-vs-ellipse distance at t=25",
        *d_e.last().unwrap(),
        0.02,
    ));

    Report {
        suite: "jaccard",
        checks,
    }
}

/// Analytic boundary-norm derivative versus central finite differences at
/// random parameter points.
pub fn derivative_suite(trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 1e-5;
    let mut worst = 0.0_f64;
    let mut max_value = f64::NEG_INFINITY;
    for _ in 0..trials {
        let t = 0.05 + 29.95 * rng.random::<f64>();
        let psi_max = t.min(FRAC_PI_2);
        let psi = psi_max * (0.01 + 0.98 * rng.random::<f64>());
        let analytic = boundary_norm_sq_derivative(t, psi);
        let hi = hull_boundary_point(t, psi + step).unwrap().norm_sq();
        let lo = hull_boundary_point(t, psi - step).unwrap().norm_sq();
        let fd = (hi - lo) / (2.0 * step);
        worst = worst.max((analytic - fd).abs());
        max_value = max_value.max(analytic);
    }
    Report {
        suite: "derivative",
        checks: vec![
            Check::within(
                format!("analytic vs finite-difference gap over {trials} points"),
                worst,
                1e-6,
            ),
            Check::within("derivative non-positive everywhere", max_value, 0.0),
        ],
    }
}

/// Random admissible piecewise-constant rollouts never leave the posed
/// ellipse of their duration.
pub fn rollout_suite(trials_per_horizon: usize, seed: u64) -> Report {
    const RESAMPLE: f64 = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for &horizon in &[0.5, 1.5, 3.0, 6.0] {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..trials_per_horizon {
            let pose = Pose::new(
                10.0 * rng.random::<f64>() - 5.0,
                10.0 * rng.random::<f64>() - 5.0,
                TAU * rng.random::<f64>() - PI,
            );
            let ellipse = HorizonEllipse::for_time(horizon)
                .expect("positive horizon")
                .posed_at(pose);
            let mut sim = pose;
            let mut time = 0.0;
            while time < horizon - 1e-12 {
                let piece = RESAMPLE.min(horizon - time);
                let cmd = VelocityCommand::new(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                );
                sim = sim.advanced(cmd, piece);
                time += piece;
            }
            worst = worst.max(ellipse.membership(sim.position));
        }
        checks.push(Check::within(
            format!("{trials_per_horizon} rollouts stay enclosed at horizon {horizon}"),
            worst,
            1.0 + 1e-6,
        ));
    }
    Report {
        suite: "rollout",
        checks,
    }
}

/// Randomized end-to-end fleet scenarios: 4-8 robots, scheduled outages,
/// packet drops up to 50%, and a zero-collision requirement at every
/// substep.
pub fn scenario_suite(runs: usize, seed: u64) -> Report {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut min_overall = f64::INFINITY;
    let mut worst_run = 0;
    let mut collisions = 0usize;
    for run in 0..runs {
        let cfg = random_fleet_scenario(&mut master);
        let log = run_scenario(&cfg).expect("generated scenario is valid");
        let d = log.min_pairwise_distance();
        if d < min_overall {
            min_overall = d;
            worst_run = run;
        }
        collisions += log.collision_count(cfg.collision_radius);
    }
    Report {
        suite: "scenarios",
        checks: vec![
            Check::exceeds(
                format!("min pairwise distance over {runs} runs (worst at run {worst_run})"),
                min_overall,
                1e-9,
            ),
            Check::within("collision events across all runs", collisions as f64, 0.0),
        ],
    }
}

/// Draws a random but well-formed fleet scenario: spread-out starts and
/// goals, one to three outage windows, and a drop rate up to one half.
pub fn random_fleet_scenario(rng: &mut ChaCha8Rng) -> ScenarioConfig {
    let n = 4 + (rng.random::<u64>() % 5) as usize;
    let sample_points = |rng: &mut ChaCha8Rng, count: usize| -> Vec<Vec2> {
        let mut points: Vec<Vec2> = Vec::with_capacity(count);
        let mut attempts = 0;
        while points.len() < count {
            let p = Vec2::new(
                8.0 * rng.random::<f64>() - 4.0,
                8.0 * rng.random::<f64>() - 4.0,
            );
            attempts += 1;
            if points.iter().all(|q| q.distance(p) >= 1.0) || attempts > 10_000 {
                points.push(p);
            }
        }
        points
    };
    let starts = sample_points(rng, n);
    let goals = sample_points(rng, n);
    let robots = starts
        .iter()
        .zip(&goals)
        .map(|(s, g)| RobotSpec {
            start: Pose::new(s.x, s.y, TAU * rng.random::<f64>() - PI),
            goal: *g,
        })
        .collect();

    let mut cfg = ScenarioConfig::with_robots(robots);
    cfg.horizon_cap = 1.5 + rng.random::<f64>();
    cfg.duration = 8.0 + 4.0 * rng.random::<f64>();
    cfg.failure.drop_probability = 0.5 * rng.random::<f64>();
    cfg.failure.seed = rng.random::<u64>();
    let outage_count = 1 + (rng.random::<u64>() % 3) as usize;
    for _ in 0..outage_count {
        let start = 1.0 + (cfg.duration - 3.0) * rng.random::<f64>();
        let end = (start + 1.0 + 3.0 * rng.random::<f64>()).min(cfg.duration);
        cfg.failure.outages.push(OutageWindow {
            robot_id: (rng.random::<u64>() % n as u64) as usize,
            start,
            end,
        });
    }
    cfg
}

/// Runs every suite with its standard sizes.
pub fn all_suites(runs: usize, seed: u64) -> Vec<Report> {
    vec![
        ellipse_suite(),
        containment_suite(200, seed),
        areas_suite(),
        jaccard_suite(),
        derivative_suite(100, seed),
        rollout_suite(200, seed),
        scenario_suite(runs, seed),
    ]
}

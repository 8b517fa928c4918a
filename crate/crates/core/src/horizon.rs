//! Open-loop trajectory prediction, neighbourhood sets, and pairwise /
//! fleet safe-time-horizon computation.
//!
//! A robot that stops receiving commands replays its last command, tracing
//! a circular arc (or a straight segment). Its pairwise safe time against a
//! neighbour is the longest prefix of that trajectory that stays strictly
//! outside the neighbour's time-indexed reachable-set ellipse. The fleet
//! horizon is the minimum over all neighbours, capped at `cap`.
//!
//! The entry time is found by a coarse grid scan refined by bisection. The
//! scan is conservative: intervals whose endpoints sit close to the growing
//! boundary are subdivided before being declared safe, and the returned
//! horizon is the left edge of the final bracket, optionally shortened by a
//! configurable margin.

use std::f64::consts::SQRT_2;

use crate::ellipse::{min_ellipse_params, DEGENERATE_TIME};
use crate::error::{Error, Result};
use crate::pose::{Pose, VelocityCommand};
use crate::vec2::Vec2;

/// Conservative bound on how fast the gap between a unit-speed trajectory
/// and a growing reachable-set boundary (axis growth rate at most sqrt(2))
/// can close, with slack.
const APPROACH_RATE: f64 = 3.0;

/// Near-boundary grid cells are split into this many sub-intervals, at
/// most this many levels deep, before being declared entry-free.
const REFINE_SPLIT: usize = 8;
const REFINE_DEPTH: usize = 2;

/// Options for the safe-time entry scan.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Coarse scan step along elapsed time.
    pub grid_step: f64,
    /// Final bisection bracket width.
    pub tolerance: f64,
    /// Safety margin subtracted from the returned horizon, in grid steps.
    pub margin_steps: f64,
    /// Robot disk radius; inflates every neighbour ellipse. Zero treats
    /// robots as points.
    pub robot_radius: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_step: 0.01,
            tolerance: 1e-6,
            margin_steps: 0.0,
            robot_radius: 0.0,
        }
    }
}

/// Outcome of a fleet safe-horizon query.
#[derive(Clone, Copy, Debug)]
pub struct SafeTimeResult {
    /// Guaranteed-safe open-loop duration, in [0, cap].
    pub horizon: f64,
    /// The neighbour whose reachable set limits the horizon, when any does.
    pub limiting_neighbor: Option<usize>,
    /// True iff the horizon equals the cap with no entry found.
    pub capped: bool,
}

/// Position along the open-loop trajectory after `elapsed` time: the arc
/// (or segment) traced by replaying a constant command.
pub fn open_loop_position(start: &Pose, cmd: VelocityCommand, elapsed: f64) -> Vec2 {
    start.advanced(cmd, elapsed).position
}

/// Ids of the robots that could collide with `robot` within the horizon
/// cap: all others strictly closer than `2 * cap`.
pub fn neighbors(positions: &[Vec2], robot: usize, cap: f64) -> Result<Vec<usize>> {
    if robot >= positions.len() {
        return Err(Error::argument(format!(
            "robot id {robot} out of range for fleet of {}",
            positions.len()
        )));
    }
    let me = positions[robot];
    Ok(positions
        .iter()
        .enumerate()
        .filter(|&(j, p)| j != robot && me.distance(*p) < 2.0 * cap)
        .map(|(j, _)| j)
        .collect())
}

/// Largest elapsed time `s <= cap` such that the open-loop trajectory of
/// robot `i` stays strictly outside the reachable-set ellipse of a robot
/// at `j_pose` for every elapsed time in `(0, s]`. Coincident positions
/// return 0.
pub fn pairwise_safe_time(
    i_pose: &Pose,
    i_cmd: VelocityCommand,
    j_pose: &Pose,
    cap: f64,
    opts: &SolverOptions,
) -> f64 {
    let solver = HorizonSolver::new(cap, *opts);
    let traj = solver.trajectory(i_pose, i_cmd);
    solver
        .scan_pair(&PairContext::new(i_pose, i_cmd, j_pose), &traj)
        .0
}

/// Fleet safe horizon of one robot: the minimum pairwise safe time over
/// its neighbourhood, capped at `cap` when the neighbourhood is empty or
/// no reachable set is entered.
pub fn safe_horizon(
    fleet: &[(Pose, VelocityCommand)],
    robot: usize,
    cap: f64,
    opts: &SolverOptions,
) -> Result<SafeTimeResult> {
    if robot >= fleet.len() {
        return Err(Error::argument(format!(
            "robot id {robot} out of range for fleet of {}",
            fleet.len()
        )));
    }
    if !cap.is_finite() || cap <= 0.0 {
        return Err(Error::argument(format!(
            "horizon cap must be positive, got {cap}"
        )));
    }
    let positions: Vec<Vec2> = fleet.iter().map(|(p, _)| p.position).collect();
    let hood = neighbors(&positions, robot, cap)?;
    let solver = HorizonSolver::new(cap, *opts);
    let traj = solver.trajectory(&fleet[robot].0, fleet[robot].1);
    Ok(solver.horizon_for(fleet, robot, &traj, &hood))
}

/// Safe horizons for the whole fleet in one pass, sharing the per-time
/// ellipse table and each robot's sampled trajectory across all pairs.
pub fn fleet_safe_horizons(
    fleet: &[(Pose, VelocityCommand)],
    cap: f64,
    opts: &SolverOptions,
) -> Vec<SafeTimeResult> {
    let solver = HorizonSolver::new(cap, *opts);
    solver.fleet_horizons(fleet)
}

/// First elapsed time at which the open-loop trajectory touches a static
/// obstacle disk, capped like the pairwise scan. Obstacles are
/// pseudo-robots with a point reachable set; the robot's own radius is
/// added to the obstacle's.
pub fn obstacle_safe_time(
    i_pose: &Pose,
    i_cmd: VelocityCommand,
    obstacle: Vec2,
    obstacle_radius: f64,
    cap: f64,
    opts: &SolverOptions,
) -> f64 {
    let solver = HorizonSolver::new(cap, *opts);
    let reach = obstacle_radius.max(0.0) + opts.robot_radius.max(0.0);
    let gap = |mu: f64| open_loop_position(i_pose, i_cmd, mu).distance(obstacle) - reach;
    if gap(0.0) <= 0.0 {
        return 0.0;
    }
    let mut prev = 0.0;
    for &mu in &solver.grid {
        let g = gap(mu);
        if g <= 0.0 {
            let lo = bisect_zero(&gap, prev, mu, opts.tolerance);
            return solver.finish(lo);
        }
        // Unit speed: the gap shrinks at most as fast as the robot moves,
        // so a cell is only suspect when the gap is within reach of it.
        if g <= mu - prev {
            if let Some((lo, hi)) = refine_zero(&gap, prev, mu, REFINE_DEPTH) {
                let lo = bisect_zero(&gap, lo, hi, opts.tolerance);
                return solver.finish(lo);
            }
        }
        prev = mu;
    }
    cap
}

/// Maps physical robot limits onto the normalized model, where both speed
/// bounds are 1: lengths scale by `v_max / w_max` and times by `1 / w_max`.
#[derive(Clone, Copy, Debug)]
pub struct UnitScale {
    pub length_unit: f64,
    pub time_unit: f64,
}

impl UnitScale {
    pub fn from_limits(max_linear_speed: f64, max_turn_rate: f64) -> Result<Self> {
        let bad = |x: f64| !x.is_finite() || x <= 0.0;
        if bad(max_linear_speed) || bad(max_turn_rate) {
            return Err(Error::argument(format!(
                "speed limits must be positive, got v={max_linear_speed}, w={max_turn_rate}"
            )));
        }
        Ok(UnitScale {
            length_unit: max_linear_speed / max_turn_rate,
            time_unit: 1.0 / max_turn_rate,
        })
    }

    pub fn time_to_normalized(&self, seconds: f64) -> f64 {
        seconds / self.time_unit
    }

    pub fn time_from_normalized(&self, t: f64) -> f64 {
        t * self.time_unit
    }

    pub fn length_to_normalized(&self, meters: f64) -> f64 {
        meters / self.length_unit
    }

    pub fn length_from_normalized(&self, x: f64) -> f64 {
        x * self.length_unit
    }
}

/// Shared scan state: the time grid and the per-time (radius-inflated)
/// quadratic-form coefficients, both reusable across pairs and robots.
pub(crate) struct HorizonSolver {
    cap: f64,
    opts: SolverOptions,
    grid: Vec<f64>,
    coeffs: Vec<(f64, f64)>,
}

impl HorizonSolver {
    pub(crate) fn new(cap: f64, opts: SolverOptions) -> Self {
        assert!(cap > 0.0, "horizon cap must be positive");
        assert!(opts.grid_step > 0.0, "grid step must be positive");
        let mut grid = Vec::with_capacity((cap / opts.grid_step) as usize + 2);
        let mut k = 1u64;
        loop {
            let mu = k as f64 * opts.grid_step;
            if mu >= cap - 1e-12 {
                break;
            }
            grid.push(mu);
            k += 1;
        }
        grid.push(cap);
        let coeffs = grid
            .iter()
            .map(|&mu| effective_coeffs(mu, opts.robot_radius))
            .collect();
        HorizonSolver {
            cap,
            opts,
            grid,
            coeffs,
        }
    }

    pub(crate) fn trajectory(&self, pose: &Pose, cmd: VelocityCommand) -> Vec<Vec2> {
        self.grid
            .iter()
            .map(|&mu| open_loop_position(pose, cmd, mu))
            .collect()
    }

    pub(crate) fn fleet_horizons(&self, fleet: &[(Pose, VelocityCommand)]) -> Vec<SafeTimeResult> {
        let positions: Vec<Vec2> = fleet.iter().map(|(p, _)| p.position).collect();
        let trajs: Vec<Vec<Vec2>> = fleet.iter().map(|(p, c)| self.trajectory(p, *c)).collect();
        (0..fleet.len())
            .map(|i| {
                let hood = neighbors(&positions, i, self.cap).expect("index in range");
                self.horizon_for(fleet, i, &trajs[i], &hood)
            })
            .collect()
    }

    fn horizon_for(
        &self,
        fleet: &[(Pose, VelocityCommand)],
        robot: usize,
        traj: &[Vec2],
        hood: &[usize],
    ) -> SafeTimeResult {
        let mut result = SafeTimeResult {
            horizon: self.cap,
            limiting_neighbor: None,
            capped: true,
        };
        for &j in hood {
            let ctx = PairContext::new(&fleet[robot].0, fleet[robot].1, &fleet[j].0);
            let (s, entered) = self.scan_pair(&ctx, traj);
            if entered {
                if result.capped || s < result.horizon {
                    result.horizon = s;
                    result.limiting_neighbor = Some(j);
                }
                result.capped = false;
            }
        }
        result
    }

    /// Scans the grid for the first entry into the neighbour's ellipse and
    /// returns `(horizon, entry_found)`.
    pub(crate) fn scan_pair(&self, ctx: &PairContext, traj: &[Vec2]) -> (f64, bool) {
        let start_gap = ctx.start_distance();
        if start_gap <= 1e-12 {
            return (0.0, true);
        }
        // The ellipse fits in a disk of radius sqrt(2) * mu around the
        // neighbour and the robot moves at most mu, so no entry is
        // possible while (1 + sqrt(2)) mu + radius < initial distance.
        let skip_below =
            ((start_gap - self.opts.robot_radius) / (1.0 + SQRT_2) - self.opts.grid_step).max(0.0);
        let mut prev = 0.0;
        for (k, &mu) in self.grid.iter().enumerate() {
            if mu < skip_below {
                prev = mu;
                continue;
            }
            let (a, b) = self.coeffs[k];
            let m = ctx.form_value(traj[k], a, b);
            if m <= 1.0 {
                let lo = self.bisect(ctx, prev, mu);
                return (self.finish(lo), true);
            }
            if near_boundary(m, a.max(b), mu - prev) {
                if let Some((lo, hi)) = self.refine(ctx, prev, mu, REFINE_DEPTH) {
                    let lo = self.bisect(ctx, lo, hi);
                    return (self.finish(lo), true);
                }
            }
            prev = mu;
        }
        (self.cap, false)
    }

    /// Subdivides a suspect cell; returns an entry bracket if one appears.
    fn refine(&self, ctx: &PairContext, lo: f64, hi: f64, depth: usize) -> Option<(f64, f64)> {
        let step = (hi - lo) / REFINE_SPLIT as f64;
        let mut prev = lo;
        for i in 1..=REFINE_SPLIT {
            let mu = lo + step * i as f64;
            let m = ctx.membership_at(mu, self.opts.robot_radius);
            if m <= 1.0 {
                return Some((prev, mu));
            }
            if depth > 1 {
                let (a, b) = effective_coeffs(mu, self.opts.robot_radius);
                if near_boundary(m, a.max(b), step) {
                    if let Some(hit) = self.refine(ctx, prev, mu, depth - 1) {
                        return Some(hit);
                    }
                }
            }
            prev = mu;
        }
        None
    }

    /// Shrinks an entry bracket `[lo, hi]` (outside at `lo`, inside at
    /// `hi`) down to the configured tolerance and returns the outside edge.
    fn bisect(&self, ctx: &PairContext, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            if hi - lo <= self.opts.tolerance {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if ctx.membership_at(mid, self.opts.robot_radius) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn finish(&self, entry_left: f64) -> f64 {
        (entry_left - self.opts.margin_steps * self.opts.grid_step).clamp(0.0, self.cap)
    }
}

/// One robot-vs-neighbour query with the neighbour's frame rotation
/// hoisted out of the inner loop.
pub(crate) struct PairContext<'a> {
    i_pose: &'a Pose,
    i_cmd: VelocityCommand,
    j_position: Vec2,
    sin_j: f64,
    cos_j: f64,
}

impl<'a> PairContext<'a> {
    pub(crate) fn new(i_pose: &'a Pose, i_cmd: VelocityCommand, j_pose: &Pose) -> Self {
        let (sin_j, cos_j) = j_pose.heading.sin_cos();
        PairContext {
            i_pose,
            i_cmd,
            j_position: j_pose.position,
            sin_j,
            cos_j,
        }
    }

    fn start_distance(&self) -> f64 {
        self.i_pose.position.distance(self.j_position)
    }

    /// Quadratic-form value of a precomputed trajectory point.
    fn form_value(&self, z: Vec2, a: f64, b: f64) -> f64 {
        let d = z - self.j_position;
        let ux = self.cos_j * d.x + self.sin_j * d.y;
        let uy = -self.sin_j * d.x + self.cos_j * d.y;
        a * ux * ux + b * uy * uy
    }

    /// Direct evaluation at an off-grid time.
    fn membership_at(&self, mu: f64, radius: f64) -> f64 {
        if mu < DEGENERATE_TIME {
            // The ellipse is the neighbour's position; the caller has
            // already ruled out coincident starts.
            return f64::INFINITY;
        }
        let z = open_loop_position(self.i_pose, self.i_cmd, mu);
        let (a, b) = effective_coeffs(mu, radius);
        self.form_value(z, a, b)
    }
}

fn effective_coeffs(mu: f64, radius: f64) -> (f64, f64) {
    let (a, b) = min_ellipse_params(mu).expect("grid times are positive");
    if radius <= 0.0 {
        (a, b)
    } else {
        let ax = 1.0 / a.sqrt() + radius;
        let ay = 1.0 / b.sqrt() + radius;
        (1.0 / (ax * ax), 1.0 / (ay * ay))
    }
}

/// True when the conservative distance bound from a membership value to
/// the ellipse boundary is within closing range of an interval of length
/// `len`: `(m - 1) / (2 sqrt(b_max m)) <= APPROACH_RATE * len`.
fn near_boundary(m: f64, b_max: f64, len: f64) -> bool {
    m - 1.0 <= 2.0 * APPROACH_RATE * len * (b_max * m).sqrt()
}

fn bisect_zero(gap: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn refine_zero(gap: &dyn Fn(f64) -> f64, lo: f64, hi: f64, depth: usize) -> Option<(f64, f64)> {
    let step = (hi - lo) / REFINE_SPLIT as f64;
    let mut prev = lo;
    for i in 1..=REFINE_SPLIT {
        let mu = lo + step * i as f64;
        let g = gap(mu);
        if g <= 0.0 {
            return Some((prev, mu));
        }
        if depth > 1 && g <= step {
            if let Some(hit) = refine_zero(gap, prev, mu, depth - 1) {
                return Some(hit);
            }
        }
        prev = mu;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn open_loop_examples() {
        let p = open_loop_position(
            &Pose::new(0.0, 0.0, 0.0),
            VelocityCommand::new(1.0, 0.0),
            2.0,
        );
        assert!((p.x - 2.0).abs() < 1e-12 && p.y.abs() < 1e-12);
        let p = open_loop_position(
            &Pose::new(0.0, 0.0, 0.0),
            VelocityCommand::new(1.0, 1.0),
            PI,
        );
        assert!(p.x.abs() < 1e-12 && (p.y - 2.0).abs() < 1e-12);
        let start = Pose::new(3.0, -1.0, 0.4);
        let p = open_loop_position(&start, VelocityCommand::new(0.0, 1.0), 7.7);
        assert_eq!(p, start.position);
    }

    #[test]
    fn neighborhood_rules() {
        let cap = 2.0;
        let positions = [
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0 * cap, 0.0), // exactly 2L: excluded
            Vec2::new(cap, 0.0),       // L: included
            Vec2::new(0.0, 3.0 * cap), // 3L: excluded
        ];
        assert_eq!(neighbors(&positions, 0, cap).unwrap(), vec![2]);
        assert_eq!(
            neighbors(&[Vec2::ZERO], 0, cap).unwrap(),
            Vec::<usize>::new()
        );
        assert!(neighbors(&positions, 9, cap).is_err());
    }

    #[test]
    fn head_on_pair() {
        let i = Pose::new(0.0, 0.0, 0.0);
        let j = Pose::new(6.0, 0.0, PI);
        let s = pairwise_safe_time(&i, VelocityCommand::new(1.0, 0.0), &j, 5.0, &opts());
        assert!((s - 3.0).abs() < 0.011, "head-on safe time {s}");
    }

    #[test]
    fn stationary_robot_along_heading() {
        // The neighbour's long axis points straight at the stationary
        // robot 3 units away; the circle regime reaches it at mu = 3.
        let j = Pose::new(0.0, 0.0, 0.0);
        let i = Pose::new(3.0, 0.0, 1.0);
        let s = pairwise_safe_time(&i, VelocityCommand::STOP, &j, 5.0, &opts());
        assert!((s - 3.0).abs() < 0.011, "stationary safe time {s}");
    }

    #[test]
    fn distant_pair_is_capped() {
        let i = Pose::new(0.0, 0.0, 0.0);
        let j = Pose::new(100.0, 0.0, 0.0);
        let s = pairwise_safe_time(&i, VelocityCommand::new(1.0, 0.0), &j, 5.0, &opts());
        assert_eq!(s, 5.0);
    }

    #[test]
    fn coincident_positions_yield_zero() {
        let i = Pose::new(1.0, 1.0, 0.0);
        let j = Pose::new(1.0, 1.0, 2.0);
        assert_eq!(
            pairwise_safe_time(&i, VelocityCommand::new(1.0, 0.0), &j, 5.0, &opts()),
            0.0
        );
    }

    #[test]
    fn sub_grid_membership_dip_is_caught() {
        // A robot dropping straight down across the thin early-time
        // ellipse, passing just inside its flank: the membership value
        // dips below 1 only within (0.0835, 0.0865), strictly between the
        // default grid points 0.08 and 0.09. The cell refinement must
        // find the entry that a bare grid scan would step over.
        let j = Pose::new(0.0, 0.0, 0.0);
        let i = Pose::new(0.107, 0.085, -FRAC_PI_2);
        let cmd = VelocityCommand::new(1.0, 0.0);

        // The dip is real and confined to one grid cell.
        let one_cell = crate::verify::pairwise_entry_oracle(&i, cmd, &j, 2.0, 1e-4);
        assert!(
            one_cell > 0.08 && one_cell < 0.09,
            "construction drifted: dense entry at {one_cell}"
        );
        let cross = |mu: f64| posed_membership(&j, &i, cmd, mu);
        assert!(cross(0.08) > 1.0);
        assert!(cross(0.09) > 1.0);
        assert!(cross(0.085) < 1.0);

        let s = pairwise_safe_time(&i, cmd, &j, 2.0, &opts());
        assert!(
            (s - one_cell).abs() <= 1e-3,
            "solver missed the dip: s={s}, dense={one_cell}"
        );
    }

    /// Posed-ellipse membership of the open-loop position, for probing.
    fn posed_membership(j: &Pose, i: &Pose, cmd: VelocityCommand, mu: f64) -> f64 {
        crate::ellipse::HorizonEllipse::for_time(mu)
            .unwrap()
            .posed_at(*j)
            .membership(open_loop_position(i, cmd, mu))
    }

    #[test]
    fn fleet_horizon_empty_neighborhood() {
        let fleet = vec![(Pose::new(0.0, 0.0, 0.0), VelocityCommand::new(1.0, 0.0))];
        let r = safe_horizon(&fleet, 0, 2.0, &opts()).unwrap();
        assert_eq!(r.horizon, 2.0);
        assert!(r.capped);
        assert!(r.limiting_neighbor.is_none());
    }

    #[test]
    fn fleet_horizon_takes_minimum() {
        // Three head-on neighbours at distances 6, 2.4, and out of range.
        // At distance 6 the circle regime gives entry at 3.0; at distance
        // 2.4 the entry falls in the first regime, at roughly 1.074 (the
        // long axis sqrt(2 (mu^2 - w^2)) meets the shrinking gap 2.4 - mu
        // before the circle regime would).
        let cap = 5.0;
        let fleet = vec![
            (Pose::new(0.0, 0.0, 0.0), VelocityCommand::new(1.0, 0.0)),
            (Pose::new(6.0, 0.0, PI), VelocityCommand::new(1.0, 0.0)),
            (Pose::new(2.4, 0.0, PI), VelocityCommand::new(1.0, 0.0)),
            (Pose::new(0.0, 11.0, 0.0), VelocityCommand::new(1.0, 0.0)),
        ];
        let r = safe_horizon(&fleet, 0, cap, &opts()).unwrap();
        assert!((r.horizon - 1.0738).abs() < 0.011, "horizon {}", r.horizon);
        assert_eq!(r.limiting_neighbor, Some(2));
        assert!(!r.capped);

        let single = pairwise_safe_time(&fleet[0].0, fleet[0].1, &fleet[1].0, cap, &opts());
        assert!((single - 3.0).abs() < 0.011);
        assert!(safe_horizon(&fleet, 7, cap, &opts()).is_err());
    }

    #[test]
    fn fleet_helper_matches_individual_queries() {
        let fleet = vec![
            (Pose::new(0.0, 0.0, 0.3), VelocityCommand::new(0.8, 0.2)),
            (Pose::new(2.5, 1.0, -2.0), VelocityCommand::new(1.0, -0.5)),
            (Pose::new(-1.0, 2.0, 1.2), VelocityCommand::new(0.5, 0.0)),
        ];
        let all = fleet_safe_horizons(&fleet, 2.0, &opts());
        for (i, batch) in all.iter().enumerate() {
            let one = safe_horizon(&fleet, i, 2.0, &opts()).unwrap();
            assert_eq!(batch.horizon, one.horizon);
            assert_eq!(batch.limiting_neighbor, one.limiting_neighbor);
            assert_eq!(batch.capped, one.capped);
        }
    }

    #[test]
    fn smaller_cap_never_exceeded() {
        let fleet = vec![
            (Pose::new(0.0, 0.0, 0.0), VelocityCommand::new(1.0, 0.1)),
            (Pose::new(4.0, 0.5, PI), VelocityCommand::new(1.0, 0.0)),
        ];
        for &cap in &[0.5, 1.0, 1.7] {
            let r = safe_horizon(&fleet, 0, cap, &opts()).unwrap();
            assert!(r.horizon <= cap);
        }
    }

    #[test]
    fn obstacle_entry_time() {
        let i = Pose::new(0.0, 0.0, 0.0);
        let s = obstacle_safe_time(
            &i,
            VelocityCommand::new(1.0, 0.0),
            Vec2::new(3.0, 0.0),
            0.5,
            5.0,
            &opts(),
        );
        assert!((s - 2.5).abs() < 0.011, "obstacle time {s}");
        // Off to the side: never touched.
        let s = obstacle_safe_time(
            &i,
            VelocityCommand::new(1.0, 0.0),
            Vec2::new(3.0, 2.0),
            0.5,
            5.0,
            &opts(),
        );
        assert_eq!(s, 5.0);
        // Already inside.
        let s = obstacle_safe_time(
            &i,
            VelocityCommand::new(1.0, 0.0),
            Vec2::new(0.1, 0.0),
            0.5,
            5.0,
            &opts(),
        );
        assert_eq!(s, 0.0);
    }

    #[test]
    fn unit_scale_round_trip() {
        let scale = UnitScale::from_limits(0.2, 2.5).unwrap();
        assert!((scale.length_unit - 0.08).abs() < 1e-15);
        assert!((scale.time_unit - 0.4).abs() < 1e-15);
        let t = scale.time_to_normalized(1.0);
        assert!((scale.time_from_normalized(t) - 1.0).abs() < 1e-12);
        let x = scale.length_to_normalized(0.5);
        assert!((scale.length_from_normalized(x) - 0.5).abs() < 1e-12);
        assert!(UnitScale::from_limits(0.0, 1.0).is_err());
    }

    #[test]
    fn margin_steps_shorten_the_horizon() {
        let i = Pose::new(0.0, 0.0, 0.0);
        let j = Pose::new(6.0, 0.0, PI);
        let cmd = VelocityCommand::new(1.0, 0.0);
        let base = pairwise_safe_time(&i, cmd, &j, 5.0, &opts());
        let careful = SolverOptions {
            margin_steps: 2.0,
            ..opts()
        };
        let shortened = pairwise_safe_time(&i, cmd, &j, 5.0, &careful);
        let expected = base - 2.0 * careful.grid_step;
        assert!(
            (shortened - expected).abs() < 1e-9,
            "base={base} shortened={shortened}"
        );
        // Capped results stay at the cap: the margin applies to entries.
        let far = Pose::new(100.0, 0.0, 0.0);
        assert_eq!(pairwise_safe_time(&i, cmd, &far, 5.0, &careful), 5.0);
    }

    #[test]
    fn robot_radius_is_conservative() {
        let i = Pose::new(0.0, 0.0, 0.0);
        let j = Pose::new(6.0, 0.0, PI);
        let cmd = VelocityCommand::new(1.0, 0.0);
        let point = pairwise_safe_time(&i, cmd, &j, 5.0, &opts());
        let disk = SolverOptions {
            robot_radius: 0.25,
            ..opts()
        };
        let padded = pairwise_safe_time(&i, cmd, &j, 5.0, &disk);
        assert!(padded < point, "padded={padded} point={point}");
        // Head-on with the circle regime grown by the radius: entry when
        // mu + (mu + r) = 6, so about (6 - r) / 2.
        assert!(
            (padded - (6.0 - 0.25) / 2.0).abs() < 0.02,
            "padded={padded}"
        );
    }
}

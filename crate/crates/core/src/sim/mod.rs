//! Deterministic discrete-time multi-robot simulation: a central decision
//! maker, a lossy command channel, per-robot command replay with safe
//! horizons, exact kinematic integration, and collision monitoring.
//!
//! Every tick of length `update_period` the decision maker computes a
//! go-to-goal command, a pairwise stop guard scales linear speeds to zero
//! where a one-tick extrapolation would break the separation margin, and a
//! safe horizon is attached to each command. The channel then drops whole
//! packets (scheduled outages and random losses from a seeded generator),
//! and each robot runs the same three-way branch: adopt a delivered
//! command; else replay the stored one while the elapsed time since its
//! adoption is strictly below the stored horizon; else stop.

mod log;
mod scenario;

pub use log::{LogRow, SimulationLog, TickSnapshot};
pub use scenario::{load_scenario, parse_scenario};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::horizon::{fleet_safe_horizons, SolverOptions};
use crate::pose::{wrap_angle, Pose, VelocityCommand};
use crate::vec2::Vec2;

/// Tick times within this distance of an outage edge resolve as the edge.
const OUTAGE_EDGE_TOL: f64 = 1e-9;

/// Execution mode of a robot after a tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Fresh command received this tick.
    Commanded,
    /// Replaying the stored command within its safe horizon.
    OpenLoop,
    /// No valid command; standing still.
    Stopped,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Commanded => "commanded",
            Mode::OpenLoop => "open_loop",
            Mode::Stopped => "stopped",
        }
    }
}

/// Per-robot state carried across ticks.
#[derive(Clone, Debug)]
pub struct RobotState {
    pub id: usize,
    pub pose: Pose,
    /// Last adopted command.
    pub last_cmd: VelocityCommand,
    /// Tick at which `last_cmd` was adopted.
    pub last_cmd_tick: u64,
    /// Safe horizon attached to `last_cmd`.
    pub last_horizon: f64,
    pub mode: Mode,
}

impl RobotState {
    /// Before any delivery a robot holds the zero command with a zero
    /// horizon, so it stands still.
    pub fn initial(id: usize, pose: Pose) -> Self {
        RobotState {
            id,
            pose,
            last_cmd: VelocityCommand::STOP,
            last_cmd_tick: 0,
            last_horizon: 0.0,
            mode: Mode::Stopped,
        }
    }

    /// The command the robot actually executes in its current mode.
    pub fn executed_cmd(&self) -> VelocityCommand {
        match self.mode {
            Mode::Stopped => VelocityCommand::STOP,
            _ => self.last_cmd,
        }
    }
}

/// One decision-maker transmission: desired velocities plus the safe
/// horizon they remain valid for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommandPacket {
    pub robot_id: usize,
    pub tick: u64,
    pub linear: f64,
    pub angular: f64,
    pub horizon: f64,
}

impl CommandPacket {
    /// One line of ASCII wire text:
    /// `SH1 <robot_id> <tick> <v> <omega> <horizon>\n`.
    pub fn encode(&self) -> String {
        format!(
            "SH1 {} {} {} {} {}\n",
            self.robot_id,
            self.tick,
            sig9(self.linear),
            sig9(self.angular),
            sig9(self.horizon)
        )
    }

    /// Parses a wire line, rejecting unknown magic, malformed fields,
    /// out-of-bound speeds, and negative or non-finite horizons.
    pub fn decode(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::packet(format!(
                "expected 6 fields, got {}",
                fields.len()
            )));
        }
        if fields[0] != "SH1" {
            return Err(Error::packet(format!("unknown magic `{}`", fields[0])));
        }
        let robot_id: usize = fields[1]
            .parse()
            .map_err(|_| Error::packet(format!("bad robot id `{}`", fields[1])))?;
        let tick: u64 = fields[2]
            .parse()
            .map_err(|_| Error::packet(format!("bad tick `{}`", fields[2])))?;
        let num = |s: &str, name: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::packet(format!("bad {name} `{s}`")))
        };
        let linear = num(fields[3], "linear speed")?;
        let angular = num(fields[4], "angular speed")?;
        let horizon = num(fields[5], "horizon")?;
        if !linear.is_finite() || linear.abs() > 1.0 {
            return Err(Error::packet(format!(
                "linear speed {linear} out of [-1, 1]"
            )));
        }
        if !angular.is_finite() || angular.abs() > 1.0 {
            return Err(Error::packet(format!(
                "angular speed {angular} out of [-1, 1]"
            )));
        }
        if !horizon.is_finite() || horizon < 0.0 {
            return Err(Error::packet(format!("horizon {horizon} must be >= 0")));
        }
        Ok(CommandPacket {
            robot_id,
            tick,
            linear,
            angular,
            horizon,
        })
    }
}

/// A scheduled communication blackout for one robot over `[start, end)`.
#[derive(Clone, Copy, Debug)]
pub struct OutageWindow {
    pub robot_id: usize,
    pub start: f64,
    pub end: f64,
}

/// When and how the channel fails: scheduled outages plus independent
/// per-packet drops from a seeded generator.
#[derive(Clone, Debug, Default)]
pub struct FailureModel {
    pub outages: Vec<OutageWindow>,
    pub drop_probability: f64,
    pub seed: u64,
}

impl FailureModel {
    pub fn in_outage(&self, robot_id: usize, time: f64) -> bool {
        self.outages.iter().any(|o| {
            o.robot_id == robot_id
                && time >= o.start - OUTAGE_EDGE_TOL
                && time < o.end - OUTAGE_EDGE_TOL
        })
    }
}

/// A robot's starting pose and its waypoint goal.
#[derive(Clone, Copy, Debug)]
pub struct RobotSpec {
    pub start: Pose,
    pub goal: Vec2,
}

/// Go-to-goal controller gains and the stop-guard margin.
#[derive(Clone, Copy, Debug)]
pub struct ControllerParams {
    pub gain_linear: f64,
    pub gain_angular: f64,
    /// Goal capture radius: within it the robot is commanded to rest.
    pub goal_tolerance: f64,
    /// Separation margin added to the collision radius by the stop guard.
    /// Should exceed twice the distance a robot covers per tick.
    pub guard_margin: f64,
}

impl Default for ControllerParams {
    fn default() -> Self {
        ControllerParams {
            gain_linear: 0.8,
            gain_angular: 2.0,
            goal_tolerance: 0.05,
            guard_margin: 0.3,
        }
    }
}

/// Full description of a simulation run.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub robots: Vec<RobotSpec>,
    /// Tick length; 1 / update_period is the command rate.
    pub update_period: f64,
    /// Safe-horizon cap.
    pub horizon_cap: f64,
    pub failure: FailureModel,
    pub controller: ControllerParams,
    pub duration: f64,
    /// Exact sub-integrations per tick, for logging and collision
    /// monitoring resolution.
    pub substeps_per_tick: u32,
    pub collision_radius: f64,
    pub solver: SolverOptions,
    /// When set, every transmitted horizon is zero: robots stop at the
    /// first missed tick. Same state machine, degraded behaviour.
    pub baseline: bool,
}

impl ScenarioConfig {
    /// A config with library defaults around the given fleet.
    pub fn with_robots(robots: Vec<RobotSpec>) -> Self {
        ScenarioConfig {
            robots,
            update_period: 0.1,
            horizon_cap: 2.0,
            failure: FailureModel::default(),
            controller: ControllerParams::default(),
            duration: 10.0,
            substeps_per_tick: 10,
            collision_radius: 0.0,
            solver: SolverOptions::default(),
            baseline: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, path: &str| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(path, format!("must be positive, got {v}")))
            }
        };
        positive(self.update_period, "update_period")?;
        positive(self.horizon_cap, "horizon_cap")?;
        positive(self.duration, "duration")?;
        positive(self.controller.gain_linear, "gain_linear")?;
        positive(self.controller.gain_angular, "gain_angular")?;
        positive(self.controller.goal_tolerance, "goal_tolerance")?;
        positive(self.solver.grid_step, "grid_step")?;
        positive(self.solver.tolerance, "tolerance")?;
        if self.substeps_per_tick == 0 {
            return Err(Error::config("substeps_per_tick", "must be at least 1"));
        }
        if self.collision_radius < 0.0 {
            return Err(Error::config(
                "collision_radius",
                format!("must be non-negative, got {}", self.collision_radius),
            ));
        }
        if self.controller.guard_margin < 0.0 {
            return Err(Error::config(
                "guard_margin",
                format!("must be non-negative, got {}", self.controller.guard_margin),
            ));
        }
        if self.solver.margin_steps < 0.0 {
            return Err(Error::config(
                "margin_steps",
                format!("must be non-negative, got {}", self.solver.margin_steps),
            ));
        }
        if self.solver.robot_radius < 0.0 {
            return Err(Error::config(
                "robot_radius",
                format!("must be non-negative, got {}", self.solver.robot_radius),
            ));
        }
        if self.robots.is_empty() {
            return Err(Error::config("robot", "at least one robot is required"));
        }
        for (i, r) in self.robots.iter().enumerate() {
            if !(r.start.position.x.is_finite()
                && r.start.position.y.is_finite()
                && r.start.heading.is_finite())
            {
                return Err(Error::config(
                    format!("robot {i}.start"),
                    "coordinates must be finite",
                ));
            }
            if !(r.goal.x.is_finite() && r.goal.y.is_finite()) {
                return Err(Error::config(format!("robot {i}.goal"), "must be finite"));
            }
        }
        if !(0.0..=1.0).contains(&self.failure.drop_probability) {
            return Err(Error::config(
                "drop_probability",
                format!("must lie in [0, 1], got {}", self.failure.drop_probability),
            ));
        }
        for (k, o) in self.failure.outages.iter().enumerate() {
            if o.robot_id >= self.robots.len() {
                return Err(Error::config(
                    format!("outage {k}.robot"),
                    format!("robot id {} out of range", o.robot_id),
                ));
            }
            if !(o.start.is_finite() && o.end.is_finite() && o.start < o.end) {
                return Err(Error::config(
                    format!("outage {k}.interval"),
                    format!("needs start < end, got {},{}", o.start, o.end),
                ));
            }
        }
        Ok(())
    }

    fn tick_count(&self) -> u64 {
        (self.duration / self.update_period - 1e-9).ceil().max(1.0) as u64
    }
}

/// The central controller: go-to-goal commands, the pairwise stop guard,
/// then a safe horizon per robot. One packet per robot, in id order.
pub fn decision_maker_tick(
    world: &[RobotState],
    cfg: &ScenarioConfig,
    tick: u64,
) -> Vec<CommandPacket> {
    let desired: Vec<VelocityCommand> = world
        .iter()
        .map(|r| goal_command(r, &cfg.robots[r.id], &cfg.controller))
        .collect();
    decision_maker_tick_with(world, cfg, tick, &desired)
}

/// Like [`decision_maker_tick`] but with caller-supplied desired
/// commands, so a different control law can replace the built-in
/// go-to-goal one. The stop guard and the horizon computation still run
/// on top of whatever the caller asks for.
pub fn decision_maker_tick_with(
    world: &[RobotState],
    cfg: &ScenarioConfig,
    tick: u64,
    desired: &[VelocityCommand],
) -> Vec<CommandPacket> {
    assert_eq!(desired.len(), world.len(), "one command per robot");
    let mut cmds = desired.to_vec();

    // Stop guard: a robot whose own one-tick motion would bring it within
    // the separation threshold of any other robot's current position loses
    // its linear speed (it may still turn in place). Decisions depend only
    // on current positions, so one pass settles.
    let threshold = cfg.collision_radius + cfg.controller.guard_margin;
    let predicted: Vec<Vec2> = world
        .iter()
        .zip(&cmds)
        .map(|(r, c)| r.pose.advanced(*c, cfg.update_period).position)
        .collect();
    for i in 0..world.len() {
        let blocked = world
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && predicted[i].distance(other.pose.position) < threshold);
        if blocked {
            cmds[i] = VelocityCommand::new(0.0, cmds[i].angular);
        }
    }

    let fleet: Vec<(Pose, VelocityCommand)> =
        world.iter().zip(&cmds).map(|(r, c)| (r.pose, *c)).collect();
    let horizons: Vec<f64> = if cfg.baseline {
        vec![0.0; world.len()]
    } else {
        fleet_safe_horizons(&fleet, cfg.horizon_cap, &cfg.solver)
            .into_iter()
            .map(|r| r.horizon)
            .collect()
    };

    world
        .iter()
        .zip(cmds.iter().zip(&horizons))
        .map(|(r, (c, h))| CommandPacket {
            robot_id: r.id,
            tick,
            linear: c.linear,
            angular: c.angular,
            horizon: *h,
        })
        .collect()
}

fn goal_command(
    robot: &RobotState,
    spec: &RobotSpec,
    params: &ControllerParams,
) -> VelocityCommand {
    let to_goal = spec.goal - robot.pose.position;
    let dist = to_goal.norm();
    if dist <= params.goal_tolerance {
        return VelocityCommand::STOP;
    }
    let desired = to_goal.y.atan2(to_goal.x);
    let err = wrap_angle(desired - robot.pose.heading);
    let angular = (params.gain_angular * err).clamp(-1.0, 1.0);
    // Slow down while misaligned; never drive backwards.
    let linear = (params.gain_linear * dist).clamp(0.0, 1.0) * err.cos().max(0.0);
    VelocityCommand::new(linear, angular)
}

/// Delivery flags for one tick: false inside a scheduled outage, otherwise
/// false with the configured drop probability. Exactly one draw per robot
/// per tick, in id order, so the stream is reproducible.
pub fn channel_deliver(
    packets: &[CommandPacket],
    failure: &FailureModel,
    tick_time: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<bool> {
    packets
        .iter()
        .map(|p| {
            let roll: f64 = rng.random();
            if failure.in_outage(p.robot_id, tick_time) {
                false
            } else {
                roll >= failure.drop_probability
            }
        })
        .collect()
}

/// The per-robot branch executed every tick: adopt a delivered packet;
/// else replay the stored command while the elapsed time since its
/// adoption is strictly below the stored horizon; else stop. The pose is
/// untouched here; integration happens between ticks.
pub fn robot_tick(
    state: &RobotState,
    delivered: Option<&CommandPacket>,
    tick: u64,
    cfg: &ScenarioConfig,
) -> RobotState {
    let mut next = state.clone();
    match delivered {
        Some(packet) => {
            next.last_cmd = VelocityCommand::new(packet.linear, packet.angular);
            next.last_cmd_tick = tick;
            next.last_horizon = packet.horizon;
            next.mode = Mode::Commanded;
        }
        None => {
            let elapsed = (tick - state.last_cmd_tick) as f64 * cfg.update_period;
            next.mode = if elapsed < state.last_horizon {
                Mode::OpenLoop
            } else {
                Mode::Stopped
            };
        }
    }
    next
}

/// Exact constant-control pose integration; the position component equals
/// [`open_loop_position`](crate::horizon::open_loop_position) for the same
/// inputs.
pub fn integrate_pose(pose: &Pose, cmd: VelocityCommand, dt: f64) -> Pose {
    pose.advanced(cmd, dt)
}

/// Runs a scenario to completion and returns the full log. Deterministic:
/// identical configs (including seed) produce identical logs.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimulationLog> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.failure.seed);
    let mut states: Vec<RobotState> = cfg
        .robots
        .iter()
        .enumerate()
        .map(|(i, spec)| RobotState::initial(i, spec.start))
        .collect();

    let n = states.len();
    let ticks = cfg.tick_count();
    let sub = cfg.substeps_per_tick.max(1);
    let sub_dt = cfg.update_period / sub as f64;
    let mut log = SimulationLog::new(cfg.update_period, sub);

    for tick in 0..ticks {
        let tick_time = tick as f64 * cfg.update_period;
        let packets = decision_maker_tick(&states, cfg, tick);
        let flags = channel_deliver(&packets, &cfg.failure, tick_time, &mut rng);
        for i in 0..n {
            let delivered = flags[i].then_some(&packets[i]);
            states[i] = robot_tick(&states[i], delivered, tick, cfg);
        }
        log.ticks.push(TickSnapshot {
            tick,
            time: tick_time,
            poses: states.iter().map(|r| r.pose).collect(),
            delivered: flags.clone(),
            modes: states.iter().map(|r| r.mode).collect(),
            horizons: states.iter().map(|r| r.last_horizon).collect(),
            cmd_ticks: states.iter().map(|r| r.last_cmd_tick).collect(),
        });

        for step in 0..sub {
            for state in states.iter_mut() {
                let cmd = state.executed_cmd();
                let move_time = match state.mode {
                    Mode::Stopped => 0.0,
                    Mode::Commanded => sub_dt,
                    Mode::OpenLoop => {
                        // Replay is only licensed up to the stored horizon;
                        // freeze mid-tick once the allowance runs out.
                        let elapsed = (tick - state.last_cmd_tick) as f64 * cfg.update_period
                            + step as f64 * sub_dt;
                        (state.last_horizon - elapsed).clamp(0.0, sub_dt)
                    }
                };
                if move_time > 0.0 {
                    state.pose = state.pose.advanced(cmd, move_time);
                }
            }
            let min_dist = min_pairwise_distance(&states);
            let row_time = tick_time + (step + 1) as f64 * sub_dt;
            for state in &states {
                let cmd = state.executed_cmd();
                log.rows.push(LogRow {
                    time: row_time,
                    robot_id: state.id,
                    x: state.pose.position.x,
                    y: state.pose.position.y,
                    heading: state.pose.heading,
                    linear: cmd.linear,
                    angular: cmd.angular,
                    mode: state.mode,
                    delivered: flags[state.id],
                    horizon: state.last_horizon,
                    min_pair_dist: min_dist,
                });
            }
        }
    }
    Ok(log)
}

fn min_pairwise_distance(states: &[RobotState]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let d = states[i].pose.position.distance(states[j].pose.position);
            if d < min {
                min = d;
            }
        }
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_robot_cfg() -> ScenarioConfig {
        ScenarioConfig::with_robots(vec![
            RobotSpec {
                start: Pose::new(-2.0, 0.0, 0.0),
                goal: Vec2::new(2.0, 0.0),
            },
            RobotSpec {
                start: Pose::new(2.0, 2.0, PI),
                goal: Vec2::new(-2.0, 2.0),
            },
        ])
    }

    #[test]
    fn packet_wire_round_trip() {
        let p = CommandPacket {
            robot_id: 3,
            tick: 41,
            linear: 0.75,
            angular: -0.5,
            horizon: 1.25,
        };
        let line = p.encode();
        assert_eq!(line, "SH1 3 41 7.50000000e-1 -5.00000000e-1 1.25000000e0\n");
        let q = CommandPacket::decode(&line).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn packet_rejects_bad_input() {
        assert!(CommandPacket::decode("SH1 0 0 1.5 0.0 1.0").is_err());
        assert!(CommandPacket::decode("SH1 0 0 0.0 -1.01 1.0").is_err());
        assert!(CommandPacket::decode("SH1 0 0 0.0 0.0 -0.5").is_err());
        assert!(CommandPacket::decode("SH2 0 0 0.0 0.0 1.0").is_err());
        assert!(CommandPacket::decode("SH1 0 0 0.0 0.0").is_err());
        assert!(CommandPacket::decode("SH1 x 0 0.0 0.0 1.0").is_err());
    }

    #[test]
    fn outage_suppresses_delivery() {
        let failure = FailureModel {
            outages: vec![OutageWindow {
                robot_id: 2,
                start: 3.1,
                end: 8.3,
            }],
            drop_probability: 0.0,
            seed: 0,
        };
        assert!(failure.in_outage(2, 5.0));
        assert!(failure.in_outage(2, 3.1));
        assert!(!failure.in_outage(2, 8.3));
        assert!(!failure.in_outage(2, 3.0));
        assert!(!failure.in_outage(1, 5.0));
    }

    #[test]
    fn deliver_is_deterministic() {
        let packets: Vec<CommandPacket> = (0..4)
            .map(|i| CommandPacket {
                robot_id: i,
                tick: 0,
                linear: 0.0,
                angular: 0.0,
                horizon: 0.0,
            })
            .collect();
        let failure = FailureModel {
            outages: vec![],
            drop_probability: 0.5,
            seed: 1234,
        };
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .flat_map(|k| channel_deliver(&packets, &failure, k as f64 * 0.1, &mut rng))
                .collect::<Vec<bool>>()
        };
        assert_eq!(run(1234), run(1234));
        assert_ne!(run(1234), run(99));
    }

    #[test]
    fn deliver_with_no_failures() {
        let packets = vec![CommandPacket {
            robot_id: 0,
            tick: 0,
            linear: 0.0,
            angular: 0.0,
            horizon: 0.0,
        }];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let flags = channel_deliver(&packets, &FailureModel::default(), 0.0, &mut rng);
        assert_eq!(flags, vec![true]);
    }

    #[test]
    fn robot_tick_branches() {
        let cfg = two_robot_cfg();
        let state = RobotState::initial(0, Pose::new(0.0, 0.0, 0.0));
        // Initial state without delivery: horizon 0 means stopped.
        let s = robot_tick(&state, None, 1, &cfg);
        assert_eq!(s.mode, Mode::Stopped);
        assert!(s.executed_cmd().is_stop());

        // Delivery adopts the packet.
        let packet = CommandPacket {
            robot_id: 0,
            tick: 3,
            linear: 1.0,
            angular: 0.0,
            horizon: 0.5,
        };
        let s = robot_tick(&state, Some(&packet), 3, &cfg);
        assert_eq!(s.mode, Mode::Commanded);
        assert_eq!(s.last_cmd_tick, 3);
        assert_eq!(s.last_horizon, 0.5);

        // Replay while strictly below the horizon, stop at it.
        // delta = 0.1, horizon 0.5: ticks 4..=7 replay, tick 8 stops.
        let mut cur = s;
        for tick in 4..=7 {
            cur = robot_tick(&cur, None, tick, &cfg);
            assert_eq!(cur.mode, Mode::OpenLoop, "tick {tick}");
            assert_eq!(cur.executed_cmd(), cur.last_cmd);
        }
        cur = robot_tick(&cur, None, 8, &cfg);
        assert_eq!(cur.mode, Mode::Stopped);
        assert!(cur.executed_cmd().is_stop());
    }

    #[test]
    fn integrate_matches_open_loop_and_composes() {
        let pose = Pose::new(0.3, -1.2, 0.9);
        let cmd = VelocityCommand::new(0.7, -0.4);
        let whole = integrate_pose(&pose, cmd, 0.8);
        let halves = integrate_pose(&integrate_pose(&pose, cmd, 0.4), cmd, 0.4);
        assert!((whole.position - halves.position).norm() < 1e-12);
        assert!((whole.heading - halves.heading).abs() < 1e-12);
        let z = crate::horizon::open_loop_position(&pose, cmd, 0.8);
        assert_eq!(whole.position, z);
    }

    #[test]
    fn validation_reports_field_paths() {
        let mut cfg = two_robot_cfg();
        cfg.update_period = 0.0;
        match cfg.validate() {
            Err(Error::Config { path, .. }) => assert_eq!(path, "update_period"),
            other => panic!("expected config error, got {other:?}"),
        }
        let mut cfg = two_robot_cfg();
        cfg.failure.outages.push(OutageWindow {
            robot_id: 9,
            start: 0.0,
            end: 1.0,
        });
        match cfg.validate() {
            Err(Error::Config { path, .. }) => assert_eq!(path, "outage 0.robot"),
            other => panic!("expected config error, got {other:?}"),
        }
        let mut cfg = two_robot_cfg();
        cfg.failure.drop_probability = 1.5;
        assert!(cfg.validate().is_err());
        let cfg = ScenarioConfig::with_robots(vec![]);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn decision_maker_examples() {
        // A robot at its goal is commanded to rest; isolated robots get
        // capped horizons.
        let mut cfg = ScenarioConfig::with_robots(vec![
            RobotSpec {
                start: Pose::new(0.0, 0.0, 0.0),
                goal: Vec2::new(0.0, 0.0),
            },
            RobotSpec {
                start: Pose::new(100.0, 0.0, 0.0),
                goal: Vec2::new(105.0, 0.0),
            },
        ]);
        cfg.horizon_cap = 2.0;
        let world: Vec<RobotState> = cfg
            .robots
            .iter()
            .enumerate()
            .map(|(i, s)| RobotState::initial(i, s.start))
            .collect();
        let packets = decision_maker_tick(&world, &cfg, 0);
        assert_eq!(packets[0].linear, 0.0);
        assert_eq!(packets[0].angular, 0.0);
        assert_eq!(packets[0].horizon, 2.0);
        assert_eq!(packets[1].horizon, 2.0);
        assert!(packets[1].linear > 0.0);
    }

    #[test]
    fn stop_guard_zeroes_converging_robots() {
        // Two robots heading straight at each other, inside guard range.
        let cfg = ScenarioConfig::with_robots(vec![
            RobotSpec {
                start: Pose::new(0.0, 0.0, 0.0),
                goal: Vec2::new(1.0, 0.0),
            },
            RobotSpec {
                start: Pose::new(0.35, 0.0, PI),
                goal: Vec2::new(-1.0, 0.0),
            },
        ]);
        let world: Vec<RobotState> = cfg
            .robots
            .iter()
            .enumerate()
            .map(|(i, s)| RobotState::initial(i, s.start))
            .collect();
        let packets = decision_maker_tick(&world, &cfg, 0);
        assert!(packets[0].linear == 0.0 || packets[1].linear == 0.0);
    }

    #[test]
    fn custom_commands_still_pass_through_the_guard() {
        // A caller-supplied control law is guarded and given horizons just
        // like the built-in one.
        let cfg = ScenarioConfig::with_robots(vec![
            RobotSpec {
                start: Pose::new(0.0, 0.0, 0.0),
                goal: Vec2::new(-5.0, 0.0),
            },
            RobotSpec {
                start: Pose::new(0.3, 0.0, 0.0),
                goal: Vec2::new(5.0, 0.0),
            },
        ]);
        let world: Vec<RobotState> = cfg
            .robots
            .iter()
            .enumerate()
            .map(|(i, s)| RobotState::initial(i, s.start))
            .collect();
        // Drive robot 0 straight into robot 1 on purpose.
        let desired = vec![
            VelocityCommand::new(1.0, 0.0),
            VelocityCommand::new(1.0, 0.0),
        ];
        let packets = decision_maker_tick_with(&world, &cfg, 5, &desired);
        assert_eq!(packets[0].linear, 0.0, "guard must zero the approacher");
        assert_eq!(packets[0].tick, 5);
        assert!(packets[1].horizon > 0.0);
    }

    #[test]
    fn baseline_forces_zero_horizons() {
        let mut cfg = two_robot_cfg();
        cfg.baseline = true;
        let world: Vec<RobotState> = cfg
            .robots
            .iter()
            .enumerate()
            .map(|(i, s)| RobotState::initial(i, s.start))
            .collect();
        for p in decision_maker_tick(&world, &cfg, 0) {
            assert_eq!(p.horizon, 0.0);
        }
    }

    #[test]
    fn scenario_runs_and_logs() {
        let mut cfg = two_robot_cfg();
        cfg.duration = 2.0;
        let log = run_scenario(&cfg).unwrap();
        assert_eq!(log.ticks.len(), 20);
        assert_eq!(log.rows.len(), 20 * 10 * 2);
        assert!(log.min_pairwise_distance() > 0.0);
        // Robots make progress towards their goals.
        let final_x = log.rows.iter().rev().find(|r| r.robot_id == 0).unwrap().x;
        assert!(final_x > -1.5);
    }

    #[test]
    fn scenario_is_deterministic() {
        let mut cfg = two_robot_cfg();
        cfg.duration = 3.0;
        cfg.failure.drop_probability = 0.4;
        cfg.failure.seed = 2024;
        let a = run_scenario(&cfg).unwrap().to_csv();
        let b = run_scenario(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
    }
}

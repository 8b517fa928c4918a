//! Simulation log: per-substep rows for CSV export plus per-tick
//! snapshots for programmatic checks.

use crate::format::sig9;
use crate::pose::Pose;
use crate::sim::Mode;

/// One robot at one substep boundary.
#[derive(Clone, Debug)]
pub struct LogRow {
    pub time: f64,
    pub robot_id: usize,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub linear: f64,
    pub angular: f64,
    pub mode: Mode,
    pub delivered: bool,
    pub horizon: f64,
    /// Minimum pairwise distance across the fleet at this substep.
    pub min_pair_dist: f64,
}

/// Fleet state right after a tick's command processing, before motion.
#[derive(Clone, Debug)]
pub struct TickSnapshot {
    pub tick: u64,
    pub time: f64,
    pub poses: Vec<Pose>,
    pub delivered: Vec<bool>,
    pub modes: Vec<Mode>,
    pub horizons: Vec<f64>,
    pub cmd_ticks: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SimulationLog {
    pub update_period: f64,
    pub substeps_per_tick: u32,
    pub rows: Vec<LogRow>,
    pub ticks: Vec<TickSnapshot>,
}

impl SimulationLog {
    pub(crate) fn new(update_period: f64, substeps_per_tick: u32) -> Self {
        SimulationLog {
            update_period,
            substeps_per_tick,
            rows: Vec::new(),
            ticks: Vec::new(),
        }
    }

    /// CSV with one row per robot per substep. All floats carry 9
    /// significant digits, so equal logs render to equal bytes.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("t,robot_id,x,y,heading,v,omega,mode,delivered,horizon,min_pair_dist\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                sig9(r.time),
                r.robot_id,
                sig9(r.x),
                sig9(r.y),
                sig9(r.heading),
                sig9(r.linear),
                sig9(r.angular),
                r.mode.label(),
                u8::from(r.delivered),
                sig9(r.horizon),
                sig9(r.min_pair_dist),
            ));
        }
        out
    }

    /// Smallest pairwise distance seen at any substep.
    pub fn min_pairwise_distance(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.min_pair_dist)
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of substeps whose minimum pairwise distance breached the
    /// collision radius (point robots collide below 1e-9).
    pub fn collision_count(&self, collision_radius: f64) -> usize {
        let threshold = collision_radius.max(1e-9);
        self.rows
            .iter()
            .filter(|r| r.robot_id == 0 && r.min_pair_dist <= threshold)
            .count()
    }

    /// Path length accumulated by a robot over rows with time in
    /// `(from, to]`, measured between consecutive logged positions.
    pub fn distance_traveled(&self, robot: usize, from: f64, to: f64) -> f64 {
        let mut total = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for r in self.rows.iter().filter(|r| r.robot_id == robot) {
            if let Some((px, py)) = prev {
                if r.time > from && r.time <= to {
                    total += ((r.x - px).powi(2) + (r.y - py).powi(2)).sqrt();
                }
            }
            prev = Some((r.x, r.y));
        }
        total
    }

    /// Maximal time spans over which a robot sat in stopped mode, as
    /// `(first stopped row time, last stopped row time)` pairs.
    pub fn stop_intervals(&self, robot: usize) -> Vec<(f64, f64)> {
        let mut spans = Vec::new();
        let mut open: Option<(f64, f64)> = None;
        for r in self.rows.iter().filter(|r| r.robot_id == robot) {
            if r.mode == Mode::Stopped {
                open = match open {
                    Some((s, _)) => Some((s, r.time)),
                    None => Some((r.time, r.time)),
                };
            } else if let Some(span) = open.take() {
                spans.push(span);
            }
        }
        if let Some(span) = open {
            spans.push(span);
        }
        spans
    }
}

//! Flat structured-text scenario files.
//!
//! Global `key = value` lines come first; `[robot N]` sections (in id
//! order) each define `start = x, y, heading` and `goal = x, y`; repeated
//! `[outage]` sections define `robot = id` and `interval = start, end`.
//! `#` starts a comment. Unknown keys are errors, so typos surface
//! immediately with their field path.
//!
//! ```text
//! update_period = 0.1
//! horizon_cap = 2.0
//! duration = 12.0
//! seed = 42
//!
//! [robot 0]
//! start = -3.0, 0.6, 0.0
//! goal = 3.0, 0.6
//!
//! [outage]
//! robot = 0
//! interval = 3.1, 8.3
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::pose::Pose;
use crate::sim::{OutageWindow, RobotSpec, ScenarioConfig};
use crate::vec2::Vec2;

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_scenario(&text)
}

/// Parses scenario text into a validated [`ScenarioConfig`].
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    enum Section {
        Globals,
        Robot(usize),
        Outage(usize),
    }

    struct PartialRobot {
        start: Option<Pose>,
        goal: Option<Vec2>,
    }

    // Outage fields accumulate as (robot id, interval) options until the
    // section is complete.
    type PartialOutage = (Option<usize>, Option<(f64, f64)>);

    let mut cfg = ScenarioConfig::with_robots(Vec::new());
    let mut robots: Vec<PartialRobot> = Vec::new();
    let mut outages: Vec<PartialOutage> = Vec::new();
    let mut section = Section::Globals;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }

        if let Some(header) = line.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or_else(|| {
                Error::config(
                    format!("line {line_no}"),
                    format!("unterminated section `{line}`"),
                )
            })?;
            let header = header.trim();
            if header == "outage" {
                outages.push((None, None));
                section = Section::Outage(outages.len() - 1);
            } else if let Some(id_text) = header.strip_prefix("robot") {
                let id: usize = id_text.trim().parse().map_err(|_| {
                    Error::config(
                        format!("line {line_no}"),
                        format!("bad robot section `[{header}]`"),
                    )
                })?;
                if id != robots.len() {
                    return Err(Error::config(
                        format!("robot {id}"),
                        format!(
                            "robot sections must appear in order; expected {}",
                            robots.len()
                        ),
                    ));
                }
                robots.push(PartialRobot {
                    start: None,
                    goal: None,
                });
                section = Section::Robot(id);
            } else {
                return Err(Error::config(
                    format!("line {line_no}"),
                    format!("unknown section `[{header}]`"),
                ));
            }
            continue;
        }

        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(
                format!("line {line_no}"),
                format!("expected `key = value`, got `{line}`"),
            )
        })?;
        let key = key.trim();
        let value = value.trim();

        match section {
            Section::Globals => apply_global(&mut cfg, key, value)?,
            Section::Robot(id) => {
                let path = format!("robot {id}.{key}");
                match key {
                    "start" => {
                        let v = parse_numbers(&path, value, 3)?;
                        robots[id].start = Some(Pose::new(v[0], v[1], v[2]));
                    }
                    "goal" => {
                        let v = parse_numbers(&path, value, 2)?;
                        robots[id].goal = Some(Vec2::new(v[0], v[1]));
                    }
                    _ => return Err(Error::config(path, "unknown robot key")),
                }
            }
            Section::Outage(id) => {
                let path = format!("outage {id}.{key}");
                match key {
                    "robot" => {
                        outages[id].0 = Some(value.parse().map_err(|_| {
                            Error::config(path.clone(), format!("bad robot id `{value}`"))
                        })?);
                    }
                    "interval" => {
                        let v = parse_numbers(&path, value, 2)?;
                        outages[id].1 = Some((v[0], v[1]));
                    }
                    _ => return Err(Error::config(path, "unknown outage key")),
                }
            }
        }
    }

    for (id, r) in robots.iter().enumerate() {
        let start = r
            .start
            .ok_or_else(|| Error::config(format!("robot {id}.start"), "missing"))?;
        let goal = r
            .goal
            .ok_or_else(|| Error::config(format!("robot {id}.goal"), "missing"))?;
        cfg.robots.push(RobotSpec { start, goal });
    }
    for (id, (robot, interval)) in outages.iter().enumerate() {
        let robot_id =
            robot.ok_or_else(|| Error::config(format!("outage {id}.robot"), "missing"))?;
        let (start, end) =
            interval.ok_or_else(|| Error::config(format!("outage {id}.interval"), "missing"))?;
        cfg.failure.outages.push(OutageWindow {
            robot_id,
            start,
            end,
        });
    }

    cfg.validate()?;
    Ok(cfg)
}

fn apply_global(cfg: &mut ScenarioConfig, key: &str, value: &str) -> Result<()> {
    let fnum = || -> Result<f64> {
        value
            .parse::<f64>()
            .map_err(|_| Error::config(key, format!("bad number `{value}`")))
    };
    match key {
        "update_period" => cfg.update_period = fnum()?,
        "horizon_cap" => cfg.horizon_cap = fnum()?,
        "duration" => cfg.duration = fnum()?,
        "collision_radius" => cfg.collision_radius = fnum()?,
        "drop_probability" => cfg.failure.drop_probability = fnum()?,
        "gain_linear" => cfg.controller.gain_linear = fnum()?,
        "gain_angular" => cfg.controller.gain_angular = fnum()?,
        "goal_tolerance" => cfg.controller.goal_tolerance = fnum()?,
        "guard_margin" => cfg.controller.guard_margin = fnum()?,
        "grid_step" => cfg.solver.grid_step = fnum()?,
        "tolerance" => cfg.solver.tolerance = fnum()?,
        "margin_steps" => cfg.solver.margin_steps = fnum()?,
        "robot_radius" => cfg.solver.robot_radius = fnum()?,
        "seed" => {
            cfg.failure.seed = value
                .parse()
                .map_err(|_| Error::config(key, format!("bad seed `{value}`")))?;
        }
        "substeps_per_tick" => {
            cfg.substeps_per_tick = value
                .parse()
                .map_err(|_| Error::config(key, format!("bad count `{value}`")))?;
        }
        "baseline" => {
            cfg.baseline = match value {
                "true" => true,
                "false" => false,
                _ => {
                    return Err(Error::config(
                        key,
                        format!("expected true/false, got `{value}`"),
                    ))
                }
            };
        }
        _ => return Err(Error::config(key, "unknown key")),
    }
    Ok(())
}

fn parse_numbers(path: &str, value: &str, expected: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(Error::config(
            path,
            format!("expected {expected} comma-separated numbers, got `{value}`"),
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::config(path, format!("bad number `{p}`")))
        })
        .collect()
}

//! `safe-horizon`: scenario execution, geometry and ellipse inspection,
//! and verification suites, all emitting plot-ready CSV.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config
//! error, 3 collision detected during simulation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use safe_horizon_core::ellipse::{self, HorizonEllipse};
use safe_horizon_core::geometry::{
    hull_area_first_quadrant, hull_area_polygon, hull_boundary_polyline, jaccard_nested,
    kset_area_numeric, polygon_area, polyline_csv, DEFAULT_SAMPLES,
};
use safe_horizon_core::horizon::safe_horizon;
use safe_horizon_core::sim::{decision_maker_tick, load_scenario, run_scenario, RobotState};
use safe_horizon_core::verify::{
    all_suites, areas_suite, containment_suite, derivative_suite, ellipse_suite, jaccard_suite,
    rollout_suite, scenario_suite, Report,
};
use safe_horizon_core::{sig9, Error};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COLLISION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "safe-horizon",
    version,
    about = "Safe open-loop time horizons for differential-drive fleets on lossy channels",
    after_help = "Output directory resolution: --out flag, else $SAFE_HORIZON_OUT, else the current directory."
)]
struct Cli {
    /// Directory for generated CSV and summary files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TimeList {
    /// Horizon times, repeatable or comma-separated.
    #[arg(
        long = "t",
        value_name = "TIME",
        value_delimiter = ',',
        required = true
    )]
    times: Vec<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-area ellipse parameters and boundary polylines.
    Ellipse {
        #[command(flatten)]
        times: TimeList,
    },
    /// Reachable-set hull boundary polylines and areas.
    Hull {
        #[command(flatten)]
        times: TimeList,
        /// Boundary samples per quadrant.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Jaccard-distance diagnostics between hull, enclosing set, and ellipse.
    Jaccard {
        #[command(flatten)]
        times: TimeList,
    },
    /// Safe time horizons for a scenario's initial fleet state.
    Safetime {
        /// Scenario file.
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
    /// Run a scenario and write the simulation log plus a summary.
    Simulate {
        /// Scenario file.
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Force zero horizons: robots freeze at the first missed packet.
        #[arg(long)]
        baseline: bool,
        /// Override the scenario's channel seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a verification suite and report each check.
    Verify {
        /// One of: ellipse, containment, areas, jaccard, derivative,
        /// rollout, scenarios, all.
        suite: String,
        /// Randomized scenario count (scenarios/all suites).
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = resolve_out_dir(cli.out.as_deref());
    match dispatch(&cli.command, &out_dir) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(env_dir) = std::env::var("SAFE_HORIZON_OUT") {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    PathBuf::from(".")
}

fn dispatch(command: &Command, out_dir: &Path) -> Result<u8, Error> {
    match command {
        Command::Ellipse { times } => cmd_ellipse(&times.times, out_dir),
        Command::Hull { times, samples } => cmd_hull(&times.times, *samples, out_dir),
        Command::Jaccard { times } => cmd_jaccard(&times.times, out_dir),
        Command::Safetime { config } => cmd_safetime(config, out_dir),
        Command::Simulate {
            config,
            baseline,
            seed,
        } => cmd_simulate(config, *baseline, *seed, out_dir),
        Command::Verify { suite, runs, seed } => cmd_verify(suite, *runs, *seed),
    }
}

fn write_file(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Config {
        path: out_dir.display().to_string(),
        message: format!("cannot create output directory: {e}"),
    })?;
    let path = out_dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Config {
        path: path.display().to_string(),
        message: format!("cannot write file: {e}"),
    })?;
    Ok(path)
}

fn cmd_ellipse(times: &[f64], out_dir: &Path) -> Result<u8, Error> {
    let params = ellipse::params_csv(times)?;
    let path = write_file(out_dir, "ellipse_params.csv", &params)?;
    println!("wrote {}", path.display());
    for (i, &t) in times.iter().enumerate() {
        let boundary = HorizonEllipse::for_time(t)?.boundary_polyline(256);
        let path = write_file(
            out_dir,
            &format!("ellipse_boundary_t{i}.csv"),
            &polyline_csv(&boundary),
        )?;
        let (a, b) = ellipse::min_ellipse_params(t)?;
        println!(
            "wrote {} (t={}, A={}, B={})",
            path.display(),
            sig9(t),
            sig9(a),
            sig9(b)
        );
    }
    Ok(EXIT_OK)
}

fn cmd_hull(times: &[f64], samples: usize, out_dir: &Path) -> Result<u8, Error> {
    for (i, &t) in times.iter().enumerate() {
        let ring = hull_boundary_polyline(t, samples)?;
        let path = write_file(
            out_dir,
            &format!("hull_boundary_t{i}.csv"),
            &polyline_csv(&ring),
        )?;
        let quadrant = hull_area_polygon(t, samples)?;
        let full = polygon_area(&ring);
        print!(
            "wrote {} (t={}, quadrant_area={}, full_area={}",
            path.display(),
            sig9(t),
            sig9(quadrant),
            sig9(full)
        );
        match hull_area_first_quadrant(t) {
            Ok(closed) => println!(", closed_form={})", sig9(closed)),
            Err(_) => println!(")"),
        }
    }
    Ok(EXIT_OK)
}

fn cmd_jaccard(times: &[f64], out_dir: &Path) -> Result<u8, Error> {
    let mut csv =
        String::from("t,hull_area,kset_area,ellipse_area,jaccard_hull_kset,jaccard_hull_ellipse\n");
    for &t in times {
        let hull = hull_area_polygon(t, 2048)?;
        let kset = kset_area_numeric(t, 1 << 15)?;
        let (a, b) = ellipse::min_ellipse_params(t)?;
        let ellipse_area = 0.25 * std::f64::consts::PI / (a * b).sqrt();
        let d_kset = jaccard_nested(hull, kset)?;
        let d_ellipse = jaccard_nested(hull, ellipse_area)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig9(t),
            sig9(hull),
            sig9(kset),
            sig9(ellipse_area),
            sig9(d_kset),
            sig9(d_ellipse)
        ));
        println!(
            "t={}: d(hull, enclosing_set)={}, d(hull, ellipse)={}",
            sig9(t),
            sig9(d_kset),
            sig9(d_ellipse)
        );
    }
    let path = write_file(out_dir, "jaccard.csv", &csv)?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_safetime(config: &Path, out_dir: &Path) -> Result<u8, Error> {
    let cfg = load_scenario(config)?;
    let world: Vec<RobotState> = cfg
        .robots
        .iter()
        .enumerate()
        .map(|(i, spec)| RobotState::initial(i, spec.start))
        .collect();
    let packets = decision_maker_tick(&world, &cfg, 0);
    let fleet: Vec<_> = world
        .iter()
        .zip(&packets)
        .map(|(r, p)| {
            (
                r.pose,
                safe_horizon_core::VelocityCommand::new(p.linear, p.angular),
            )
        })
        .collect();

    let mut csv = String::from("robot_id,v,omega,horizon,capped,limiting_neighbor\n");
    for (i, packet) in packets.iter().enumerate() {
        let result = safe_horizon(&fleet, i, cfg.horizon_cap, &cfg.solver)?;
        let limiting = result
            .limiting_neighbor
            .map_or(String::from("-"), |j| j.to_string());
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            i,
            sig9(packet.linear),
            sig9(packet.angular),
            sig9(result.horizon),
            u8::from(result.capped),
            limiting
        ));
        println!(
            "robot {i}: v={} omega={} horizon={} capped={} limiting={}",
            sig9(packet.linear),
            sig9(packet.angular),
            sig9(result.horizon),
            result.capped,
            limiting
        );
    }
    let path = write_file(out_dir, "safetime.csv", &csv)?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_simulate(
    config: &Path,
    baseline: bool,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<u8, Error> {
    let mut cfg = load_scenario(config)?;
    if baseline {
        cfg.baseline = true;
    }
    if let Some(seed) = seed {
        cfg.failure.seed = seed;
    }
    let log = run_scenario(&cfg)?;
    let log_path = write_file(out_dir, "sim_log.csv", &log.to_csv())?;

    let collisions = log.collision_count(cfg.collision_radius);
    let mut summary = String::new();
    summary.push_str(&format!("robots {}\n", cfg.robots.len()));
    summary.push_str(&format!("ticks {}\n", log.ticks.len()));
    summary.push_str(&format!("baseline {}\n", cfg.baseline));
    summary.push_str(&format!("collisions {collisions}\n"));
    summary.push_str(&format!(
        "min_pair_dist {}\n",
        sig9(log.min_pairwise_distance())
    ));
    for robot in 0..cfg.robots.len() {
        let stops = log
            .stop_intervals(robot)
            .iter()
            .map(|(a, b)| format!("{}..{}", sig9(*a), sig9(*b)))
            .collect::<Vec<_>>()
            .join(" ");
        summary.push_str(&format!("robot {robot} stop_intervals {stops}\n"));
    }
    for (k, outage) in cfg.failure.outages.iter().enumerate() {
        let traveled = log.distance_traveled(outage.robot_id, outage.start + 1e-6, outage.end);
        summary.push_str(&format!(
            "outage {k} robot {} interval {}..{} traveled {}\n",
            outage.robot_id,
            sig9(outage.start),
            sig9(outage.end),
            sig9(traveled)
        ));
    }
    let summary_path = write_file(out_dir, "summary.txt", &summary)?;
    println!("wrote {}", log_path.display());
    println!("wrote {}", summary_path.display());
    print!("{summary}");

    if collisions > 0 {
        eprintln!("collision detected: {collisions} substeps at or below the collision radius");
        return Ok(EXIT_COLLISION);
    }
    Ok(EXIT_OK)
}

fn print_report(report: &Report) -> bool {
    for check in &report.checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} [{}] {} (measured {} {} limit {})",
            report.suite,
            check.name,
            sig9(check.measured),
            check.cmp,
            sig9(check.limit)
        );
    }
    report.passed()
}

fn cmd_verify(suite: &str, runs: usize, seed: u64) -> Result<u8, Error> {
    let reports: Vec<Report> = match suite {
        "ellipse" => vec![ellipse_suite()],
        "containment" => vec![containment_suite(200, seed)],
        "areas" => vec![areas_suite()],
        "jaccard" => vec![jaccard_suite()],
        "derivative" => vec![derivative_suite(100, seed)],
        "rollout" => vec![rollout_suite(200, seed)],
        "scenarios" => vec![scenario_suite(runs, seed)],
        "all" => all_suites(runs, seed),
        other => {
            return Err(Error::Argument(format!(
                "unknown suite `{other}`; expected one of ellipse, containment, areas, jaccard, derivative, rollout, scenarios, all"
            )))
        }
    };
    let mut ok = true;
    for report in &reports {
        ok &= print_report(report);
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

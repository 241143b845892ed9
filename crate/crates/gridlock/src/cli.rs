//! Command-line front end and its file formats.
//!
//! Subcommands:
//!
//! - `bounds` — tabulate the analytic PoA bounds over a `(d, alpha*)`
//!   grid. CSV columns: `d,alpha_star,root,k,lambda_tilde,mu_tilde,bound`.
//! - `curve two-car` — the two-car distance study, one curve per weight
//!   configuration. CSV columns: `curve,delta_m,raw,normalized`.
//! - `curve multi-car` — the crowding study, one curve per degree. CSV
//!   columns: `curve,num_others,raw,normalized`.
//! - `solve <file>` — solve a scenario JSON; writes a JSON report and a
//!   human summary (stderr). Exit code 0 iff the (observed) price of
//!   anarchy is within the refined bound.
//! - `sweep-alpha <file>` — re-solve a scenario with every personal cost
//!   spec scaled by a grid of factors. CSV columns:
//!   `factor,alpha_star,poa,bound,bound_base,within_bound`.
//!
//! Scenario files are the versioned JSON serialization of
//! [`ScenarioSpec`]: `schema` (must be 1), `kind`, `grid`
//! (`cell_size`, `x_extent`, `y_extent`, `horizon_T`, `radii`), `levels`
//! (one coefficient array per proximity level, ascending powers, entries
//! as rational strings like `"1/4"` or plain numbers), `personal` (one
//! `{time_weight, accel_weight, goal_miss_penalty}` per agent), `agents`
//! (`{start: {x, y}, goal: {x, y}, max_speed}`), and an optional
//! top-level `horizon_T` override.
//!
//! All numeric CSV fields use `.` decimal separators and 12 significant
//! digits; outputs are byte-deterministic for a fixed config and seed.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{poa_bound_base, poa_bound_refined, BoundResult};
use crate::game::{
    price_of_anarchy, price_of_anarchy_sampled, AlphaStar, EquilibriumReport, GameInstance,
    DEFAULT_PROFILE_CAP,
};
use crate::rational::{self, Rational};
use crate::scenario::{
    build_scenario_with_cap, multi_car_curve, multi_car_grid, multi_car_offsets, multi_car_weights,
    two_car_curve, two_car_grid, two_car_weight_configs, CurveTable, ScenarioSpec,
};
use crate::{Error, Result};
use num::One;

/// Parsed command-line configuration.
#[derive(Parser, Debug)]
#[command(
    name = "gridlock",
    version,
    about = "Driving games as congestion games: equilibria, price of anarchy, and smoothness bounds"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the analytic PoA bounds over a (degree, alpha*) grid
    Bounds {
        /// Polynomial degrees to tabulate
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        degrees: Vec<u32>,
        /// Largest alpha* on the grid
        #[arg(long, default_value_t = 10.0)]
        alpha_max: f64,
        /// Grid step in alpha*
        #[arg(long, default_value_t = 0.1)]
        alpha_step: f64,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Reproduce a congestion cost curve study
    Curve {
        #[command(subcommand)]
        kind: CurveCommand,
    },
    /// Solve a scenario file: equilibria, price of anarchy, bound check
    Solve {
        /// Scenario JSON path
        file: PathBuf,
        /// Joint-strategy-space cap for exhaustive enumeration
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: u64,
        /// Sample seeded better-response walks instead of enumerating;
        /// the report then carries an observed (lower-bound) PoA
        #[arg(long)]
        sampled: bool,
        /// RNG seed for sampled mode
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled walks
        #[arg(long, default_value_t = 200)]
        samples: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Re-solve a scenario under scaled personal costs
    SweepAlpha {
        /// Scenario JSON path
        file: PathBuf,
        /// Scale factors applied to every personal cost spec
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4,8")]
        factors: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveCommand {
    /// Player cost against the separation of two cars
    TwoCar {
        #[arg(long, default_value_t = 15.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 0.25)]
        delta_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Ego cost against the number of nearby cars
    MultiCar {
        /// Load polynomial degrees, one curve each
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        degrees: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

/// Format with 12 significant digits, plain decimal where reasonable.
pub fn fmt_sig(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if value.is_nan() {
        return "nan".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let scientific = format!("{value:.11e}");
    let (mantissa, exponent) = scientific.split_once('e').expect("scientific notation");
    let exponent: i32 = exponent.parse().expect("exponent");
    if !(-4..12).contains(&exponent) {
        return scientific;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exponent + 1;
    let mut out = String::with_capacity(16);
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Machine-readable solve report; `schema` is 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: u32,
    pub sampled: bool,
    pub players: usize,
    pub strategy_counts: Vec<usize>,
    pub profile_count: String,
    pub nash_count: usize,
    pub nash_profiles: Vec<Vec<u32>>,
    pub optima: Vec<Vec<u32>>,
    pub worst_ne_cost: String,
    pub best_cost: String,
    /// Exact PoA as a rational string; absent when the optimal social
    /// cost is zero.
    pub poa: Option<String>,
    pub poa_value: Option<f64>,
    /// Rational string, or `"infinite"` when no equilibrium or optimum
    /// constrains the ratio.
    pub alpha_star: String,
    pub alpha_star_value: Option<f64>,
    pub degree: u32,
    /// Refined-bound details; absent for degree-0 (decoupled) games and
    /// for an infinite alpha*, where the bound value is exactly 1.
    pub bound: Option<BoundResult>,
    pub bound_value: f64,
    pub poa_within_bound: bool,
}

/// Assemble the report and bound comparison for a solved game.
pub fn solve_report(game: &GameInstance, report: &EquilibriumReport) -> Result<SolveReport> {
    let degree = game.levels().max_degree();
    let (bound, bound_value) = match (&report.alpha_star, degree) {
        (_, 0) => (None, 1.0),
        (AlphaStar::Infinite, _) => (None, 1.0),
        (AlphaStar::Finite(alpha), d) => {
            let result = poa_bound_refined(d, rational::to_f64(alpha))?;
            (Some(result), result.bound)
        }
    };
    let poa_within_bound = match (&report.poa, bound_value) {
        (None, _) => false,
        (Some(poa), value) => {
            if bound.is_none() {
                // degenerate cases certify PoA exactly 1
                *poa == Rational::one()
            } else {
                rational::to_f64(poa) <= value + 1e-9
            }
        }
    };
    Ok(SolveReport {
        schema: 1,
        sampled: report.sampled,
        players: game.num_players(),
        strategy_counts: game.strategy_counts(),
        profile_count: game.profile_count().to_string(),
        nash_count: report.nash_profiles.len(),
        nash_profiles: report
            .nash_profiles
            .iter()
            .map(|p| p.choices().to_vec())
            .collect(),
        optima: report.optima.iter().map(|p| p.choices().to_vec()).collect(),
        worst_ne_cost: rational::to_string(&report.worst_ne_cost),
        best_cost: rational::to_string(&report.best_cost),
        poa: report.poa.as_ref().map(rational::to_string),
        poa_value: report.poa_f64(),
        alpha_star: report.alpha_star.to_string(),
        alpha_star_value: report.alpha_star.as_f64(),
        degree,
        bound,
        bound_value,
        poa_within_bound,
    })
}

fn print_summary(report: &SolveReport) {
    let poa_label = if report.sampled {
        "observed PoA"
    } else {
        "PoA"
    };
    eprintln!(
        "players: {}, strategies: {:?}, profiles: {}",
        report.players, report.strategy_counts, report.profile_count
    );
    eprintln!(
        "{}: {} equilibria, {} social optima",
        if report.sampled {
            "observed"
        } else {
            "enumerated"
        },
        report.nash_count,
        report.optima.len()
    );
    eprintln!(
        "worst NE cost: {}, best cost: {}",
        report.worst_ne_cost, report.best_cost
    );
    match (&report.poa, report.poa_value) {
        (Some(exact), Some(value)) => eprintln!("{poa_label}: {exact} ({})", fmt_sig(value)),
        _ => eprintln!("{poa_label}: undefined (zero optimal cost)"),
    }
    eprintln!("empirical alpha*: {}", report.alpha_star);
    eprintln!(
        "degree: {}, refined bound: {}",
        report.degree,
        fmt_sig(report.bound_value)
    );
    eprintln!(
        "{poa_label} within bound: {}",
        if report.poa_within_bound { "yes" } else { "no" }
    );
}

fn load_scenario(path: &Path) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path)?;
    let spec: ScenarioSpec = serde_json::from_str(&text)?;
    spec.validate()?;
    Ok(spec)
}

fn bounds_rows(degrees: &[u32], alpha_max: f64, alpha_step: f64) -> Result<Vec<BoundResult>> {
    if !(alpha_step.is_finite() && alpha_step > 0.0 && alpha_max.is_finite() && alpha_max >= 0.0) {
        return Err(Error::InvalidArgument(
            "alpha grid must have a positive step".into(),
        ));
    }
    let steps = (alpha_max / alpha_step + 1e-9).floor() as u32;
    let mut rows = Vec::new();
    for &d in degrees {
        for i in 0..=steps {
            rows.push(poa_bound_refined(d, i as f64 * alpha_step)?);
        }
    }
    Ok(rows)
}

fn bounds_csv(rows: &[BoundResult]) -> String {
    let mut out = String::from("d,alpha_star,root,k,lambda_tilde,mu_tilde,bound\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.d,
            fmt_sig(row.alpha_star),
            fmt_sig(row.root),
            row.k,
            fmt_sig(row.lambda_tilde),
            fmt_sig(row.mu_tilde),
            fmt_sig(row.bound)
        ));
    }
    out
}

/// Flat curve row shared by the CSV and JSON outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveRow {
    pub curve: String,
    pub abscissa: f64,
    pub raw: f64,
    pub normalized: f64,
    pub raw_exact: String,
    pub normalized_exact: String,
}

fn curve_rows(tables: &[CurveTable]) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for table in tables {
        for point in &table.points {
            rows.push(CurveRow {
                curve: table.label.clone(),
                abscissa: point.abscissa,
                raw: rational::to_f64(&point.raw),
                normalized: rational::to_f64(&point.normalized),
                raw_exact: rational::to_string(&point.raw),
                normalized_exact: rational::to_string(&point.normalized),
            });
        }
    }
    rows
}

fn curve_csv(abscissa_name: &str, rows: &[CurveRow]) -> String {
    let mut out = format!("curve,{abscissa_name},raw,normalized\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.curve,
            fmt_sig(row.abscissa),
            fmt_sig(row.raw),
            fmt_sig(row.normalized)
        ));
    }
    out
}

/// One row of the personal-cost sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub factor: f64,
    /// Rational value or `"infinite"`.
    pub alpha_star: String,
    /// `"undefined"` when the optimal social cost is zero.
    pub poa: String,
    pub bound: f64,
    pub bound_base: f64,
    pub within_bound: bool,
}

fn sweep_rows(spec: &ScenarioSpec, factors: &[f64], cap: u64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &factor in factors {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factors must be non-negative, got {factor}"
            )));
        }
        let scale = rational::from_f64(factor).expect("finite factor");
        let mut scaled = spec.clone();
        scaled.personal = spec.personal.iter().map(|p| p.scaled(&scale)).collect();
        let game = build_scenario_with_cap(&scaled, crate::scenario::DEFAULT_AGENT_CAP)?;
        let report = price_of_anarchy(&game, cap)?;
        let solved = solve_report(&game, &report)?;
        rows.push(SweepRow {
            factor,
            alpha_star: solved.alpha_star.clone(),
            poa: solved.poa.clone().unwrap_or_else(|| "undefined".into()),
            bound: solved.bound_value,
            bound_base: poa_bound_base(solved.degree.max(1))?,
            within_bound: solved.poa_within_bound,
        });
    }
    Ok(rows)
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("factor,alpha_star,poa,bound,bound_base,within_bound\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_sig(row.factor),
            row.alpha_star,
            row.poa,
            fmt_sig(row.bound),
            fmt_sig(row.bound_base),
            row.within_bound
        ));
    }
    out
}

/// Execute a parsed command; returns the process exit code.
pub fn run(config: &RunConfig) -> Result<i32> {
    match &config.command {
        Command::Bounds {
            degrees,
            alpha_max,
            alpha_step,
            out,
            format,
        } => {
            let rows = bounds_rows(degrees, *alpha_max, *alpha_step)?;
            let content = match format {
                OutputFormat::Csv => bounds_csv(&rows),
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
            };
            write_output(out.as_deref(), &content)?;
            Ok(0)
        }
        Command::Curve { kind } => {
            let (tables, out, format) = match kind {
                CurveCommand::TwoCar {
                    delta_max,
                    delta_step,
                    out,
                    format,
                } => {
                    let grid = two_car_grid(*delta_max)?;
                    let mut tables = Vec::new();
                    for (label, weights) in two_car_weight_configs() {
                        let levels = crate::cost::LevelCosts::monomials(&weights, 2)?;
                        let mut table = two_car_curve(&grid, &levels, *delta_max, *delta_step)?;
                        table.label = label;
                        tables.push(table);
                    }
                    (tables, out, format)
                }
                CurveCommand::MultiCar {
                    degrees,
                    out,
                    format,
                } => {
                    let grid = multi_car_grid()?;
                    let tables = multi_car_curve(
                        &grid,
                        &multi_car_weights(),
                        &multi_car_offsets(),
                        degrees,
                    )?;
                    (tables, out, format)
                }
            };
            let abscissa = tables
                .first()
                .map(|t| t.abscissa.clone())
                .unwrap_or_else(|| "abscissa".into());
            let rows = curve_rows(&tables);
            let content = match format {
                OutputFormat::Csv => curve_csv(&abscissa, &rows),
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
            };
            write_output(out.as_deref(), &content)?;
            Ok(0)
        }
        Command::Solve {
            file,
            cap,
            sampled,
            seed,
            samples,
            out,
            format,
        } => {
            let spec = load_scenario(file)?;
            let game = build_scenario_with_cap(&spec, crate::scenario::DEFAULT_AGENT_CAP)?;
            let report = if *sampled {
                price_of_anarchy_sampled(&game, *seed, *samples)?
            } else {
                price_of_anarchy(&game, *cap)?
            };
            let solved = solve_report(&game, &report)?;
            print_summary(&solved);
            let content = match format {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&solved)?),
                OutputFormat::Csv => {
                    let mut out = String::from(
                        "players,profiles,nash_count,optima_count,worst_ne_cost,best_cost,poa,alpha_star,degree,bound,within_bound\n",
                    );
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{}\n",
                        solved.players,
                        solved.profile_count,
                        solved.nash_count,
                        solved.optima.len(),
                        solved.worst_ne_cost,
                        solved.best_cost,
                        solved.poa.clone().unwrap_or_else(|| "undefined".into()),
                        solved.alpha_star,
                        solved.degree,
                        fmt_sig(solved.bound_value),
                        solved.poa_within_bound
                    ));
                    out
                }
            };
            write_output(out.as_deref(), &content)?;
            Ok(if solved.poa_within_bound { 0 } else { 1 })
        }
        Command::SweepAlpha {
            file,
            factors,
            cap,
            out,
            format,
        } => {
            let spec = load_scenario(file)?;
            let rows = sweep_rows(&spec, factors, *cap)?;
            let content = match format {
                OutputFormat::Csv => sweep_csv(&rows),
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
            };
            write_output(out.as_deref(), &content)?;
            Ok(if rows.iter().all(|r| r.within_bound) {
                0
            } else {
                1
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_keeps_twelve_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(2.5), "2.50000000000");
        assert_eq!(fmt_sig(115.0 / 12.0), "9.58333333333");
        assert_eq!(fmt_sig(0.1), "0.100000000000");
        assert_eq!(fmt_sig(-404.25), "-404.250000000");
        assert_eq!(fmt_sig(1.5e-7), "1.50000000000e-7");
        assert_eq!(fmt_sig(3.0e14), "3.00000000000e14");
    }

    #[test]
    fn bounds_grid_has_the_documented_size() {
        let rows = bounds_rows(&[1, 2, 3, 4], 10.0, 0.1).unwrap();
        assert_eq!(rows.len(), 404);
        // alpha = 0 rows reproduce the base bounds
        assert!((rows[0].bound - 2.5).abs() < 1e-9);
    }

    #[test]
    fn csv_outputs_are_deterministic() {
        let rows = bounds_rows(&[1, 2], 1.0, 0.5).unwrap();
        assert_eq!(bounds_csv(&rows), bounds_csv(&rows));
        let first_line = bounds_csv(&rows).lines().nth(1).unwrap().to_string();
        assert!(first_line.starts_with("1,0,"));
    }
}

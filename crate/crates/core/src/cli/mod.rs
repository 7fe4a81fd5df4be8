//! Command-line driver.
//!
//! Exit codes: `0` success, `1` usage or configuration error, `2` numerical
//! or I/O failure.

mod config;
mod csv;
mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use self::config::{
    load_config, parse_config, ConfigError, OutputPaths, RunConfig, DEFAULT_GRID,
};
pub use self::csv::{emit_csv, format_sig, render_csv, Cell, Section};
pub use self::svg::{emit_svg_polyline, Axes, Series};

use crate::closed_form::{
    steady_u_with, steady_v_with, steady_w_with, vim_u, vim_v, vim_w, ClosedFormCoefficients,
    SteadyForm,
};
use crate::error::{Error, Result};
use crate::solver::{solve_steady, solve_transient, ConcentrationField, Grid};
use crate::validation::{
    profile_sweep, reproduce_table, sensitivity_analysis, Functional, SensitivityStatus, Species,
    SweepParam, TableId,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "glucomem",
    version,
    about = "Glucose-sensitive membrane transport model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Agm,
    VimSteady,
    VimTransient,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the steady nonlinear system.
    Steady {
        #[arg(long)]
        config: PathBuf,
        /// Number of grid nodes (overrides the config).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Integrate from the initial profile.
    Transient {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tau_end: f64,
        #[arg(long)]
        dt: Option<f64>,
        /// Comma-separated sample times (default: 11 evenly spaced).
        #[arg(long, value_delimiter = ',')]
        samples: Option<Vec<f64>>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an analytic approximation on the grid.
    ClosedForm {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        config: PathBuf,
        /// Time for `vim-transient`.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a numerical-versus-analytic comparison table.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        which: u32,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form profiles over a range of one parameter.
    Sweep {
        #[arg(long, value_parser = parse_sweep_param)]
        param: SweepParam,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        values: Vec<f64>,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_species, default_value = "u")]
        species: Species,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Normalized sensitivity shares of a steady functional.
    Sensitivity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_species, default_value = "u")]
        target: Species,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, value_parser = parse_functional, default_value = "center")]
        functional: Functional,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_species(s: &str) -> std::result::Result<Species, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sweep_param(s: &str) -> std::result::Result<SweepParam, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_functional(s: &str) -> std::result::Result<Functional, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_command`] with explicit output streams.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            let _ = writeln!(out, "{summary}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_FAILURE,
        Error::Scenario { source, .. } => exit_code(source),
        e if e.is_numeric() => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn load(path: &Path, grid: Option<usize>, dt: Option<f64>) -> Result<RunConfig> {
    let mut cfg = load_config(path)?;
    if let Some(n) = grid {
        Grid::new(n).map_err(|_| Error::Config(format!("n must be at least 3 (got {n})")))?;
        cfg.grid_n = n;
    }
    if let Some(dt) = dt {
        cfg.solver.dt = dt;
        cfg.solver
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(cfg)
}

fn resolve(flag: Option<PathBuf>, configured: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    flag.or_else(|| configured.clone())
        .ok_or_else(|| Error::Config(format!("no {what} path given (use --out or output.{what})")))
}

fn profile_rows(field: &ConcentrationField, grid: &Grid) -> Vec<Vec<Cell>> {
    grid.points()
        .enumerate()
        .map(|(i, x)| {
            vec![
                x.into(),
                field.u[i].into(),
                field.v[i].into(),
                field.w[i].into(),
            ]
        })
        .collect()
}

fn profile_series(field: &ConcentrationField, grid: &Grid) -> Vec<Series> {
    Species::ALL
        .iter()
        .map(|&s| Series {
            name: s.name().to_string(),
            points: grid.points().zip(s.column(field).iter().copied()).collect(),
        })
        .collect()
}

fn write_svg(path: &Path, series: &[Series], axes: &Axes) -> Result<()> {
    let svg = emit_svg_polyline(series, axes)?;
    csv::write_file(path, svg.as_bytes())
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Steady {
            config,
            grid,
            out,
            plot,
        } => {
            let cfg = load(&config, grid, None)?;
            let out = resolve(out, &cfg.output.csv, "csv")?;
            let plot = plot.or_else(|| cfg.output.svg.clone());
            let g = cfg.grid()?;
            let s = solve_steady(&cfg.params, &g, &cfg.solver)?;
            let meta = format!(
                "glucomem steady {} iterations={} residual={}",
                cfg.metadata(),
                s.iterations,
                format_sig(s.residual, 6)
            );
            emit_csv(
                &out,
                &["X", "u", "v", "w"],
                &[Section::new(profile_rows(&s.field, &g))],
                Some(&meta),
            )?;
            if let Some(p) = &plot {
                let axes = Axes {
                    title: "Steady concentration profiles".into(),
                    x_label: "X".into(),
                    y_label: "concentration".into(),
                    metadata: Some(meta.clone()),
                };
                write_svg(p, &profile_series(&s.field, &g), &axes)?;
            }
            Ok(format!(
                "steady: n={} iterations={} residual={} u(0)={} v(0)={} w(0)={} -> {}",
                g.len(),
                s.iterations,
                format_sig(s.residual, 3),
                format_sig(s.field.u[0], 6),
                format_sig(s.field.v[0], 6),
                format_sig(s.field.w[0], 6),
                out.display()
            ))
        }
        Command::Transient {
            config,
            tau_end,
            dt,
            samples,
            grid,
            out,
        } => {
            let cfg = load(&config, grid, dt)?;
            let out = resolve(out, &cfg.output.csv, "csv")?;
            let g = cfg.grid()?;
            let times =
                samples.unwrap_or_else(|| (0..=10).map(|i| tau_end * i as f64 / 10.0).collect());
            let run = solve_transient(&cfg.params, &g, &cfg.solver, tau_end, &times)?;
            let rows: Vec<Vec<Cell>> = run
                .samples
                .iter()
                .flat_map(|f| {
                    profile_rows(f, &g).into_iter().map(move |mut r| {
                        r.insert(0, f.tau.into());
                        r
                    })
                })
                .collect();
            let steady = run
                .steady_at
                .map_or_else(|| "none".to_string(), |t| format_sig(t, 6));
            let meta = format!(
                "glucomem transient {} tauEnd={tau_end} steps={} steadyAt={steady}",
                cfg.metadata(),
                run.steps
            );
            emit_csv(
                &out,
                &["tau", "X", "u", "v", "w"],
                &[Section::new(rows)],
                Some(&meta),
            )?;
            Ok(format!(
                "transient: n={} samples={} steps={} steady_at={steady} -> {}",
                g.len(),
                run.samples.len(),
                run.steps,
                out.display()
            ))
        }
        Command::ClosedForm {
            method,
            config,
            tau,
            grid,
            out,
        } => {
            let cfg = load(&config, grid, None)?;
            let out = resolve(out, &cfg.output.csv, "csv")?;
            let g = cfg.grid()?;
            let p = &cfg.params;
            let c = ClosedFormCoefficients::new(p)?;
            let (name, field) = match method {
                Method::Agm | Method::VimSteady => {
                    let form = if matches!(method, Method::Agm) {
                        SteadyForm::Agm
                    } else {
                        SteadyForm::Vim
                    };
                    let mut rows = Vec::with_capacity(g.len());
                    for x in g.points() {
                        rows.push((
                            steady_u_with(x, &c, form)?,
                            steady_v_with(x, p, &c, form)?,
                            steady_w_with(x, p, &c, form)?,
                        ));
                    }
                    let name = if form == SteadyForm::Agm {
                        "agm"
                    } else {
                        "vim-steady"
                    };
                    (name, field_from(&g, f64::INFINITY, rows))
                }
                Method::VimTransient => {
                    let tau = tau.ok_or_else(|| {
                        Error::Config("--tau is required for vim-transient".into())
                    })?;
                    let mut rows = Vec::with_capacity(g.len());
                    for x in g.points() {
                        rows.push((vim_u(x, tau, p)?, vim_v(x, tau, p)?, vim_w(x, tau, p)?));
                    }
                    ("vim-transient", field_from(&g, tau, rows))
                }
            };
            let consts = format!(
                "k={} sqrtK={} m={}",
                format_sig(c.k, 6),
                format_sig(c.sqrt_k, 6),
                format_sig(c.m, 6)
            );
            let mut meta = format!(
                "glucomem closed-form method={name} {} {consts}",
                cfg.metadata()
            );
            if matches!(method, Method::VimTransient) {
                meta.push_str(&format!(" tau={}", field.tau));
            }
            emit_csv(
                &out,
                &["X", "u", "v", "w"],
                &[Section::new(profile_rows(&field, &g))],
                Some(&meta),
            )?;
            Ok(format!("closed-form {name}: {consts} -> {}", out.display()))
        }
        Command::Tables { which, grid, out } => {
            let table = TableId::from_number(which)?;
            let n = grid.unwrap_or(DEFAULT_GRID);
            let g = Grid::new(n)
                .map_err(|_| Error::Config(format!("n must be at least 3 (got {n})")))?;
            let solver = crate::solver::SolverConfig::default();
            let reports = reproduce_table(table, &g, &solver)?;
            let dev = |d: Option<f64>| d.map_or_else(|| Cell::Text("flagged".into()), Cell::Num);
            let sections: Vec<Section> = reports
                .iter()
                .map(|r| {
                    let mut rows: Vec<Vec<Cell>> = r
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                row.x.into(),
                                row.numerical.into(),
                                row.vim.into(),
                                row.agm.into(),
                                dev(row.dev_vim),
                                dev(row.dev_agm),
                            ]
                        })
                        .collect();
                    rows.push(vec![
                        "mean".into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        r.mean_dev_vim.into(),
                        r.mean_dev_agm.into(),
                    ]);
                    let mut comment = format!(
                        "scenario {} species={} {} residual={}",
                        r.scenario.label,
                        r.species,
                        r.scenario.params,
                        format_sig(r.residual, 3)
                    );
                    if r.scenario.qualitative_only {
                        comment.push_str(" qualitative-only");
                    }
                    if r.audit.negative_concentration {
                        comment.push_str(" negative-concentration");
                    }
                    Section {
                        comment: Some(comment),
                        rows,
                    }
                })
                .collect();
            let meta = format!("glucomem tables which={which} n={n}");
            emit_csv(
                &out,
                &["X", "numerical", "vim", "agm", "dev_vim", "dev_agm"],
                &sections,
                Some(&meta),
            )?;
            let means: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{}: vim {} agm {}",
                        r.scenario.label,
                        format_sig(r.mean_dev_vim, 3),
                        format_sig(r.mean_dev_agm, 3)
                    )
                })
                .collect();
            Ok(format!(
                "tables {which}: mean deviations [{}] -> {}",
                means.join("; "),
                out.display()
            ))
        }
        Command::Sweep {
            param,
            values,
            config,
            species,
            out,
            plot,
        } => {
            let cfg = load(&config, None, None)?;
            let out = resolve(out, &cfg.output.csv, "csv")?;
            let plot = plot.or_else(|| cfg.output.svg.clone());
            let series = profile_sweep(species, param, &values, &cfg.params, cfg.grid_n)?;
            let sections: Vec<Section> = series
                .iter()
                .map(|s| {
                    Section::new(
                        s.points
                            .iter()
                            .map(|&(x, y)| vec![s.value.into(), x.into(), y.into()])
                            .collect(),
                    )
                })
                .collect();
            let meta = format!(
                "glucomem sweep param={param} species={species} {}",
                cfg.metadata()
            );
            emit_csv(
                &out,
                &[param.name(), "X", species.name()],
                &sections,
                Some(&meta),
            )?;
            if let Some(p) = &plot {
                let lines: Vec<Series> = series
                    .iter()
                    .map(|s| Series {
                        name: s.label.clone(),
                        points: s.points.clone(),
                    })
                    .collect();
                let axes = Axes {
                    title: format!("{species} profiles over {param}"),
                    x_label: "X".into(),
                    y_label: species.name().into(),
                    metadata: Some(meta.clone()),
                };
                write_svg(p, &lines, &axes)?;
            }
            Ok(format!(
                "sweep {param}: {} series of {species} -> {}",
                series.len(),
                out.display()
            ))
        }
        Command::Sensitivity {
            config,
            target,
            delta,
            functional,
            grid,
            out,
        } => {
            let cfg = load(&config, grid, None)?;
            let out = resolve(out, &cfg.output.csv, "csv")?;
            let g = cfg.grid()?;
            let r = sensitivity_analysis(target, &cfg.params, delta, functional, &g, &cfg.solver)?;
            let rows = r
                .entries
                .iter()
                .map(|e| vec![e.param.name().into(), e.share_percent.into()])
                .collect();
            let status: Vec<String> = r
                .entries
                .iter()
                .map(|e| {
                    let s = match &e.status {
                        SensitivityStatus::Computed => "computed".to_string(),
                        SensitivityStatus::NotApplicable => "not-applicable".to_string(),
                        SensitivityStatus::Failed(m) => format!("failed({m})"),
                    };
                    format!("{}:{s}", e.param)
                })
                .collect();
            let meta = format!(
                "glucomem sensitivity target={target} functional={functional} delta={delta} baseline={} {} status={}",
                format_sig(r.baseline, 6),
                cfg.metadata(),
                status.join(",")
            );
            emit_csv(
                &out,
                &["parameter", "share_percent"],
                &[Section::new(rows)],
                Some(&meta),
            )?;
            let failed = r
                .entries
                .iter()
                .filter(|e| matches!(e.status, SensitivityStatus::Failed(_)))
                .count();
            let shares: Vec<String> = r
                .entries
                .iter()
                .map(|e| format!("{}={}%", e.param, format_sig(e.share_percent, 3)))
                .collect();
            Ok(format!(
                "sensitivity of {target} {functional}: {} (failed: {failed}) -> {}",
                shares.join(" "),
                out.display()
            ))
        }
    }
}

fn field_from(grid: &Grid, tau: f64, rows: Vec<(f64, f64, f64)>) -> ConcentrationField {
    let mut it = rows.into_iter();
    ConcentrationField::from_fn(grid, tau, |_| it.next().expect("one row per node"))
}

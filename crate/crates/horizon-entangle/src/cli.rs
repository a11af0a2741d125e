//! Command-line front end: single-point evaluation, figure-preset sweeps,
//! conservation-law verification, and unit conversion.
//!
//! Exit codes form a stable contract:
//! 0 ok · 2 domain/usage error · 3 truncation infeasible · 4 unconverged
//! sweep rows (CSV still written) · 5 verification failure.
//!
//! A flat key-value config file can override constants and defaults. Grammar,
//! one entry per line:
//!
//! ```text
//! # comment (blank lines allowed)
//! key = value
//! ```
//!
//! with keys `c`, `g`, `m_sun` (floats), `tolerance` (float), `out` (path),
//! `workers` (integer), `angular` (true/false). Unknown keys are rejected.
//! The file is looked up from `--config` or the `HORIZON_ENTANGLE_CONFIG`
//! environment variable.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, Command};

use crate::constants::Constants;
use crate::geometry::{
    boundary_acceleration, schwarzschild_radius, squeeze_params, surface_gravity, to_natural,
    FrequencyConvention, NaturalScenario, PhysicalScenario, VALIDITY_THRESHOLD,
};
use crate::measures::{analyze_all, scalar_blockwise_reports, BipartitionReport};
use crate::states::{choose_nmax, dirac_entangled};
use crate::sweeps::{
    default_r0_grid, figure_presets, run_sweep, verify_conservation, write_csv, Field, GridSpec,
    Mode, Spacing, SweepSpec, PRESET_OMEGAS,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;
pub const EXIT_UNCONVERGED: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Runtime configuration: constants overrides plus defaults for tolerance,
/// output path, worker count, and the angular-frequency convention flag.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub constants: Constants,
    pub tolerance: f64,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub angular: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            constants: Constants::default(),
            tolerance: 1e-9,
            out: None,
            workers: None,
            angular: false,
        }
    }
}

impl RunConfig {
    pub fn convention(&self) -> FrequencyConvention {
        if self.angular {
            FrequencyConvention::Angular
        } else {
            FrequencyConvention::Ordinary
        }
    }

    /// Serialize to the flat key-value grammar accepted by [`parse_config`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("c = {:.16e}\n", self.constants.c));
        out.push_str(&format!("g = {:.16e}\n", self.constants.g));
        out.push_str(&format!("m_sun = {:.16e}\n", self.constants.m_sun));
        out.push_str(&format!("tolerance = {:e}\n", self.tolerance));
        if let Some(path) = &self.out {
            out.push_str(&format!("out = {}\n", path.display()));
        }
        if let Some(w) = self.workers {
            out.push_str(&format!("workers = {w}\n"));
        }
        out.push_str(&format!("angular = {}\n", self.angular));
        out
    }
}

/// Parse the flat key-value config grammar. Values are validated with the
/// same domain rules as the library types; unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("line {}: `{v}` is not a number", lineno + 1)))
        };
        match key {
            "c" => cfg.constants.c = parse_f64(value)?,
            "g" => cfg.constants.g = parse_f64(value)?,
            "m_sun" => cfg.constants.m_sun = parse_f64(value)?,
            "tolerance" => {
                let t = parse_f64(value)?;
                if !(t > 0.0 && t <= 1e-3) {
                    return Err(Error::Config(format!(
                        "line {}: tolerance must lie in (0, 1e-3], got {t}",
                        lineno + 1
                    )));
                }
                cfg.tolerance = t;
            }
            "out" => cfg.out = Some(PathBuf::from(value)),
            "workers" => {
                cfg.workers = Some(value.parse::<usize>().map_err(|_| {
                    Error::Config(format!("line {}: `{value}` is not an integer", lineno + 1))
                })?)
            }
            "angular" => {
                cfg.angular = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::Config(format!(
                            "line {}: angular must be true or false, got `{other}`",
                            lineno + 1
                        )))
                    }
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    cfg.constants.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Split a literal like `1e-5sun` into its numeric part and lowercase suffix.
fn split_suffix(s: &str) -> (&str, String) {
    let idx = s
        .rfind(|c: char| !c.is_ascii_alphabetic())
        .map(|i| i + 1)
        .unwrap_or(0);
    (&s[..idx], s[idx..].to_ascii_lowercase())
}

/// Mass literal: bare numbers are kilograms; `kg` and `sun` suffixes accepted
/// (`1e-5sun`, `2e30kg`).
pub fn parse_mass(s: &str, consts: &Constants) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let v: f64 = num
        .parse()
        .map_err(|_| Error::Domain(format!("`{s}` is not a mass literal")))?;
    match suffix.as_str() {
        "" | "kg" => Ok(v),
        "sun" => Ok(v * consts.m_sun),
        other => Err(Error::Domain(format!(
            "unknown mass suffix `{other}` (use kg or sun)"
        ))),
    }
}

/// Distance literal: bare numbers are meters; `m` and `cm` suffixes accepted.
pub fn parse_distance(s: &str) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let v: f64 = num
        .parse()
        .map_err(|_| Error::Domain(format!("`{s}` is not a distance literal")))?;
    match suffix.as_str() {
        "" | "m" => Ok(v),
        "cm" => Ok(v * 0.01),
        other => Err(Error::Domain(format!(
            "unknown distance suffix `{other}` (use m or cm)"
        ))),
    }
}

/// Frequency literal: bare numbers are Hz; `Hz`, `kHz`, `MHz` accepted
/// (case-insensitive).
pub fn parse_frequency(s: &str) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let v: f64 = num
        .parse()
        .map_err(|_| Error::Domain(format!("`{s}` is not a frequency literal")))?;
    match suffix.as_str() {
        "" | "hz" => Ok(v),
        "khz" => Ok(v * 1e3),
        "mhz" => Ok(v * 1e6),
        other => Err(Error::Domain(format!(
            "unknown frequency suffix `{other}` (use Hz, kHz, or MHz)"
        ))),
    }
}

fn parse_field(s: &str) -> Result<Field> {
    match s {
        "scalar" => Ok(Field::Scalar),
        "dirac" => Ok(Field::Dirac),
        other => Err(Error::Domain(format!(
            "field must be scalar or dirac, got `{other}`"
        ))),
    }
}

fn parse_bipartitions(list: &[String]) -> Result<[bool; 3]> {
    let mut want = [false; 3];
    for item in list {
        match item.as_str() {
            "ar" => want[0] = true,
            "arbar" => want[1] = true,
            "rrbar" => want[2] = true,
            other => {
                return Err(Error::Domain(format!(
                    "unknown bipartition `{other}` (use ar, arbar, rrbar)"
                )))
            }
        }
    }
    Ok(want)
}

/// The full CLI definition.
pub fn command() -> Command {
    let config_arg = Arg::new("config")
        .long("config")
        .value_name("PATH")
        .help("Config file (flat key = value); default from HORIZON_ENTANGLE_CONFIG");
    let tol_arg = Arg::new("tol")
        .long("tol")
        .value_name("TOL")
        .help("Scalar truncation tolerance (default 1e-9)");
    let angular_arg = Arg::new("angular")
        .long("angular")
        .action(ArgAction::SetTrue)
        .help("Interpret frequencies as angular (rad/s) instead of ordinary Hz");
    let workers_arg = Arg::new("workers")
        .long("workers")
        .value_name("N")
        .help("Worker threads for sweeps (default: all cores)");

    Command::new("horizon-entangle")
        .term_width(80)
        .about(
            "Entanglement degradation between a free-falling observer and a \
             near-horizon static observer of a Schwarzschild black hole",
        )
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("point")
                .about("Evaluate all three bipartitions at a single parameter point")
                .arg(
                    Arg::new("field")
                        .long("field")
                        .value_name("FIELD")
                        .required(true)
                        .help("scalar or dirac"),
                )
                .arg(Arg::new("omega").long("omega").value_name("OMEGA").help(
                    "Dimensionless mode frequency Ω (natural mode, with --r0)",
                ))
                .arg(
                    Arg::new("r0")
                        .long("r0")
                        .value_name("R0")
                        .help("Observer position R₀ = r₀/R_S > 1 (natural mode)"),
                )
                .arg(
                    Arg::new("mass")
                        .long("mass")
                        .value_name("MASS")
                        .help("Black-hole mass (kg, or `sun` suffix; physical mode)"),
                )
                .arg(
                    Arg::new("delta0")
                        .long("delta0")
                        .value_name("DIST")
                        .help("Distance to the horizon (m or cm; physical mode)"),
                )
                .arg(
                    Arg::new("freq")
                        .long("freq")
                        .value_name("FREQ")
                        .help("Mode frequency (Hz, kHz, MHz; physical mode)"),
                )
                .arg(tol_arg.clone())
                .arg(angular_arg.clone())
                .arg(config_arg.clone()),
        )
        .subcommand(
            Command::new("sweep")
                .about("Run a parameter sweep and write deterministic CSV")
                .arg(
                    Arg::new("preset")
                        .long("preset")
                        .value_name("NAME")
                        .help("Figure preset: fig3, fig4, fig5, fig6, fig7, fig8"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_name("PATH")
                        .help("Output CSV path, or `-` for standard output"),
                )
                .arg(
                    Arg::new("field")
                        .long("field")
                        .value_name("FIELD")
                        .help("scalar or dirac (explicit grid mode)"),
                )
                .arg(
                    Arg::new("omega")
                        .long("omega")
                        .value_name("LIST")
                        .value_delimiter(',')
                        .help("Comma-separated Ω series values"),
                )
                .arg(
                    Arg::new("r0-min")
                        .long("r0-min")
                        .value_name("R0")
                        .help("R₀ grid minimum (> 1)"),
                )
                .arg(
                    Arg::new("r0-max")
                        .long("r0-max")
                        .value_name("R0")
                        .help("R₀ grid maximum"),
                )
                .arg(
                    Arg::new("r0-count")
                        .long("r0-count")
                        .value_name("N")
                        .help("R₀ grid size (default 200)"),
                )
                .arg(
                    Arg::new("r0-spacing")
                        .long("r0-spacing")
                        .value_name("KIND")
                        .help("linear, or log (logarithmic in R₀ - 1; default)"),
                )
                .arg(
                    Arg::new("mass-min")
                        .long("mass-min")
                        .value_name("MASS")
                        .help("Mass grid minimum (kg or `sun` suffix)"),
                )
                .arg(
                    Arg::new("mass-max")
                        .long("mass-max")
                        .value_name("MASS")
                        .help("Mass grid maximum"),
                )
                .arg(
                    Arg::new("mass-count")
                        .long("mass-count")
                        .value_name("N")
                        .help("Mass grid size (default 201, log spacing)"),
                )
                .arg(
                    Arg::new("delta0")
                        .long("delta0")
                        .value_name("LIST")
                        .value_delimiter(',')
                        .help("Comma-separated Δ₀ series values (m or cm)"),
                )
                .arg(
                    Arg::new("freq")
                        .long("freq")
                        .value_name("FREQ")
                        .help("Mode frequency (Hz, kHz, MHz)"),
                )
                .arg(
                    Arg::new("bipartitions")
                        .long("bipartitions")
                        .value_name("LIST")
                        .value_delimiter(',')
                        .help("Subset of ar, arbar, rrbar (default ar,arbar)"),
                )
                .arg(
                    Arg::new("recheck")
                        .long("recheck")
                        .action(ArgAction::SetTrue)
                        .help("Re-verify scalar rows by doubling n_max"),
                )
                .arg(tol_arg.clone())
                .arg(angular_arg.clone())
                .arg(workers_arg.clone())
                .arg(config_arg.clone()),
        )
        .subcommand(
            Command::new("verify")
                .about("Run the conservation-law checks over a sweep grid")
                .arg(
                    Arg::new("field")
                        .long("field")
                        .value_name("FIELD")
                        .help("scalar or dirac (default grid mode)"),
                )
                .arg(
                    Arg::new("preset")
                        .long("preset")
                        .value_name("NAME")
                        .help("Figure preset to verify instead of the default grid"),
                )
                .arg(tol_arg.clone())
                .arg(workers_arg.clone())
                .arg(config_arg.clone()),
        )
        .subcommand(
            Command::new("units")
                .about("Convert an SI scenario to black-hole natural units")
                .arg(
                    Arg::new("mass")
                        .long("mass")
                        .value_name("MASS")
                        .required(true)
                        .help("Black-hole mass (kg or `sun` suffix)"),
                )
                .arg(
                    Arg::new("delta0")
                        .long("delta0")
                        .value_name("DIST")
                        .required(true)
                        .help("Distance to the horizon (m or cm)"),
                )
                .arg(
                    Arg::new("freq")
                        .long("freq")
                        .value_name("FREQ")
                        .required(true)
                        .help("Mode frequency (Hz, kHz, MHz)"),
                )
                .arg(angular_arg.clone())
                .arg(config_arg.clone()),
        )
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Usage(_) | Error::Config(_) => EXIT_DOMAIN,
        Error::TruncationInfeasible { .. } | Error::HorizonLimit(_) => EXIT_TRUNCATION,
        _ => EXIT_INTERNAL,
    }
}

fn effective_config(matches: &clap::ArgMatches) -> Result<RunConfig> {
    let mut cfg = match matches.get_one::<String>("config") {
        Some(path) => load_config(Path::new(path))?,
        None => match std::env::var_os("HORIZON_ENTANGLE_CONFIG") {
            Some(path) => load_config(Path::new(&path))?,
            None => RunConfig::default(),
        },
    };
    if let Ok(Some(t)) = matches.try_get_one::<String>("tol") {
        cfg.tolerance = t
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("`{t}` is not a tolerance")))?;
    }
    if let Ok(Some(true)) = matches.try_get_one::<bool>("angular").map(|v| v.copied()) {
        cfg.angular = true;
    }
    if let Ok(Some(w)) = matches.try_get_one::<String>("workers") {
        cfg.workers = Some(
            w.parse::<usize>()
                .map_err(|_| Error::Domain(format!("`{w}` is not a worker count")))?,
        );
    }
    Ok(cfg)
}

fn parse_flag_f64(matches: &clap::ArgMatches, name: &str) -> Result<Option<f64>> {
    match matches.get_one::<String>(name) {
        Some(s) => s
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Error::Domain(format!("`{s}` is not a number for --{name}"))),
        None => Ok(None),
    }
}

fn print_reports<W: Write>(
    out: &mut W,
    reports: &[Option<BipartitionReport>; 3],
) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<8} {:>18} {:>18} {:>12} {:>12} {:>12}",
        "bipart", "negativity", "mutual_info", "S_a", "S_b", "S_joint"
    )?;
    for report in reports.iter().flatten() {
        writeln!(
            out,
            "{:<8} {:>18.12} {:>18.12} {:>12.8} {:>12.8} {:>12.8}",
            report.bipartition.label(),
            report.negativity,
            report.mutual_information,
            report.entropy_a,
            report.entropy_b,
            report.entropy_joint,
        )?;
    }
    Ok(())
}

fn cmd_point<W: Write, E: Write>(
    matches: &clap::ArgMatches,
    stdout: &mut W,
    stderr: &mut E,
) -> Result<i32> {
    let cfg = effective_config(matches)?;
    let field = parse_field(matches.get_one::<String>("field").ok_or_else(|| {
        Error::Domain("--field is required".into())
    })?)?;

    let natural_given = matches.contains_id("omega") || matches.contains_id("r0");
    let physical_given = matches.contains_id("mass")
        || matches.contains_id("delta0")
        || matches.contains_id("freq");
    if natural_given == physical_given {
        return Err(Error::Domain(
            "give exactly one of (--omega, --r0) or (--mass, --delta0, --freq)".into(),
        ));
    }

    let scenario = if natural_given {
        let omega = parse_flag_f64(matches, "omega")?
            .ok_or_else(|| Error::Domain("--omega is required with --r0".into()))?;
        let r0 = parse_flag_f64(matches, "r0")?
            .ok_or_else(|| Error::Domain("--r0 is required with --omega".into()))?;
        NaturalScenario::new(omega, r0)?
    } else {
        let mass = parse_mass(
            matches
                .get_one::<String>("mass")
                .ok_or_else(|| Error::Domain("--mass is required in physical mode".into()))?,
            &cfg.constants,
        )?;
        let delta0 = parse_distance(
            matches
                .get_one::<String>("delta0")
                .ok_or_else(|| Error::Domain("--delta0 is required in physical mode".into()))?,
        )?;
        let freq = parse_frequency(
            matches
                .get_one::<String>("freq")
                .ok_or_else(|| Error::Domain("--freq is required in physical mode".into()))?,
        )?;
        to_natural(
            &cfg.constants,
            &PhysicalScenario::new(mass, delta0, freq, cfg.convention())?,
        )?
    };

    let params = squeeze_params(&scenario)?;
    writeln!(stdout, "field: {}", field.label())?;
    writeln!(
        stdout,
        "omega: {:.12e}   r0_over_rs: {:.12e}",
        scenario.omega, scenario.r0_over_rs
    )?;
    writeln!(
        stdout,
        "tanh_q: {:.12}   q_s: {:.12}   q_d: {:.12}",
        params.tanh_qs, params.qs, params.qd
    )?;
    writeln!(
        stdout,
        "f0: {:.12}   validity_ratio: {:.6e}",
        params.f0, params.validity_ratio
    )?;
    if params.beyond_validity {
        writeln!(
            stdout,
            "warning: outside Rindler-approximation regime (Δ₀ > {VALIDITY_THRESHOLD} R_S)"
        )?;
    }

    let reports = match field {
        Field::Dirac => {
            writeln!(stdout, "nmax: 0   tail_bound: 0")?;
            let all = analyze_all(&dirac_entangled(params.tan_qd)?, None)?;
            [Some(all[0]), Some(all[1]), Some(all[2])]
        }
        Field::Scalar => {
            let trunc = choose_nmax(params.tanh_qs, cfg.tolerance)?;
            writeln!(
                stdout,
                "nmax: {}   tail_bound: {:.6e}",
                trunc.n_max, trunc.tail_bound
            )?;
            if trunc.n_max > 1500 {
                writeln!(
                    stderr,
                    "note: RRbar negativity at n_max = {} is an O(n³) computation",
                    trunc.n_max
                )?;
            }
            scalar_blockwise_reports(params.tanh_qs, &trunc, [true; 3])?
        }
    };
    print_reports(stdout, &reports)?;
    Ok(EXIT_OK)
}

fn spec_from_sweep_flags(matches: &clap::ArgMatches, cfg: &RunConfig) -> Result<SweepSpec> {
    if let Some(name) = matches.get_one::<String>("preset") {
        let mut spec = figure_presets()
            .remove(name.as_str())
            .ok_or_else(|| Error::Domain(format!("unknown preset `{name}`")))?;
        if matches.contains_id("tol") {
            spec.tolerance = cfg.tolerance;
        }
        if let Some(list) = matches.get_many::<String>("bipartitions") {
            let items: Vec<String> = list.cloned().collect();
            spec.bipartitions = parse_bipartitions(&items)?;
        }
        if matches.get_flag("recheck") {
            spec.recheck = true;
        }
        return Ok(spec);
    }

    let field = parse_field(
        matches
            .get_one::<String>("field")
            .ok_or_else(|| Error::Domain("--field (or --preset) is required".into()))?,
    )?;
    let physical = matches.contains_id("mass-min");
    let bipartitions = match matches.get_many::<String>("bipartitions") {
        Some(list) => {
            let items: Vec<String> = list.cloned().collect();
            parse_bipartitions(&items)?
        }
        None => [true, true, false],
    };
    let spec = if physical {
        let min = parse_mass(
            matches
                .get_one::<String>("mass-min")
                .ok_or_else(|| Error::Domain("--mass-min required".into()))?,
            &cfg.constants,
        )?;
        let max = parse_mass(
            matches
                .get_one::<String>("mass-max")
                .ok_or_else(|| Error::Domain("--mass-max required".into()))?,
            &cfg.constants,
        )?;
        let count = matches
            .get_one::<String>("mass-count")
            .map(|s| s.parse::<usize>())
            .transpose()
            .map_err(|_| Error::Domain("--mass-count must be an integer".into()))?
            .unwrap_or(201);
        let delta0 = matches
            .get_many::<String>("delta0")
            .ok_or_else(|| Error::Domain("--delta0 required for a physical sweep".into()))?
            .map(|s| parse_distance(s))
            .collect::<Result<Vec<f64>>>()?;
        let freq = parse_frequency(
            matches
                .get_one::<String>("freq")
                .ok_or_else(|| Error::Domain("--freq required for a physical sweep".into()))?,
        )?;
        SweepSpec {
            field,
            mode: Mode::Physical,
            omega_values: vec![],
            r0_grid: default_r0_grid(),
            mass_grid: Some(GridSpec {
                min,
                max,
                count,
                spacing: Spacing::Log,
            }),
            delta0_values: delta0,
            frequency_hz: Some(freq),
            convention: cfg.convention(),
            tolerance: cfg.tolerance,
            bipartitions,
            recheck: matches.get_flag("recheck"),
        }
    } else {
        let omegas = match matches.get_many::<String>("omega") {
            Some(list) => list
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Domain(format!("`{s}` is not an Ω value")))
                })
                .collect::<Result<Vec<f64>>>()?,
            None => PRESET_OMEGAS.to_vec(),
        };
        let min = parse_flag_f64(matches, "r0-min")?.unwrap_or(1.0 + 1e-6);
        let max = parse_flag_f64(matches, "r0-max")?.unwrap_or(2.0);
        let count = matches
            .get_one::<String>("r0-count")
            .map(|s| s.parse::<usize>())
            .transpose()
            .map_err(|_| Error::Domain("--r0-count must be an integer".into()))?
            .unwrap_or(200);
        let spacing = match matches.get_one::<String>("r0-spacing").map(String::as_str) {
            None | Some("log") => Spacing::LogOffsetFromOne,
            Some("linear") => Spacing::Linear,
            Some(other) => {
                return Err(Error::Domain(format!(
                    "--r0-spacing must be linear or log, got `{other}`"
                )))
            }
        };
        let mut spec = SweepSpec::natural(
            field,
            omegas,
            GridSpec {
                min,
                max,
                count,
                spacing,
            },
        );
        spec.tolerance = cfg.tolerance;
        spec.bipartitions = bipartitions;
        spec.recheck = matches.get_flag("recheck");
        spec
    };
    Ok(spec)
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn cmd_sweep<W: Write, E: Write>(
    matches: &clap::ArgMatches,
    stdout: &mut W,
    stderr: &mut E,
) -> Result<i32> {
    let cfg = effective_config(matches)?;
    let spec = spec_from_sweep_flags(matches, &cfg)?;
    let out_arg = matches
        .get_one::<String>("out")
        .cloned()
        .or_else(|| cfg.out.as_ref().map(|p| p.display().to_string()))
        .ok_or_else(|| Error::Domain("--out is required (use `-` for stdout)".into()))?;

    let consts = cfg.constants;
    let rows = with_workers(cfg.workers, move || run_sweep(&spec, &consts))??;
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    let report = verify_conservation(&rows);

    if out_arg == "-" {
        write_csv(&rows, stdout)?;
        writeln!(
            stderr,
            "rows: {}  unconverged: {}  conservation: {}",
            rows.len(),
            unconverged,
            if report.pass() { "PASS" } else { "FAIL" }
        )?;
    } else {
        let mut file = std::fs::File::create(&out_arg)?;
        write_csv(&rows, &mut file)?;
        writeln!(
            stdout,
            "rows: {}  unconverged: {}  conservation: {}  -> {}",
            rows.len(),
            unconverged,
            if report.pass() { "PASS" } else { "FAIL" },
            out_arg
        )?;
    }
    Ok(if unconverged > 0 {
        EXIT_UNCONVERGED
    } else {
        EXIT_OK
    })
}

fn cmd_verify<W: Write, E: Write>(
    matches: &clap::ArgMatches,
    stdout: &mut W,
    _stderr: &mut E,
) -> Result<i32> {
    let cfg = effective_config(matches)?;
    let spec = if let Some(name) = matches.get_one::<String>("preset") {
        let mut spec = figure_presets()
            .remove(name.as_str())
            .ok_or_else(|| Error::Domain(format!("unknown preset `{name}`")))?;
        if matches.contains_id("tol") {
            spec.tolerance = cfg.tolerance;
        }
        spec
    } else {
        let field = parse_field(
            matches
                .get_one::<String>("field")
                .ok_or_else(|| Error::Domain("--field (or --preset) is required".into()))?,
        )?;
        let mut spec = SweepSpec::natural(field, PRESET_OMEGAS.to_vec(), default_r0_grid());
        spec.tolerance = cfg.tolerance;
        spec
    };

    // Fault-injection escape hatch: verify accepts an out-of-range tolerance
    // so a corrupted configuration demonstrably fails the checks instead of
    // being rejected up front.
    let mut spec = spec;
    if !(spec.tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            spec.tolerance
        )));
    }
    spec.bipartitions = [true, true, false];
    let relaxed = spec.tolerance > 1e-3;
    if relaxed {
        writeln!(
            stdout,
            "note: tolerance {:.3e} is outside the supported range (0, 1e-3]; \
             results below are uncertified",
            spec.tolerance
        )?;
    }

    let consts = cfg.constants;
    let rows = match with_workers(cfg.workers, {
        let spec = spec.clone();
        move || {
            if relaxed {
                run_sweep_unchecked(&spec, &consts)
            } else {
                run_sweep(&spec, &consts)
            }
        }
    }) {
        Ok(r) => r?,
        Err(e) => return Err(e),
    };
    let report = verify_conservation(&rows);
    write!(stdout, "{report}")?;
    Ok(if report.pass() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// `run_sweep` minus the tolerance-range validation, for the verify command's
/// negative test path.
fn run_sweep_unchecked(
    spec: &SweepSpec,
    consts: &Constants,
) -> Result<Vec<crate::sweeps::SweepRow>> {
    let mut clamped = spec.clone();
    clamped.tolerance = 1e-3;
    let mut rows = run_sweep(&clamped, consts)?;
    // Re-truncate every scalar row at the sloppy tolerance.
    if spec.field == Field::Scalar {
        rows = rows
            .into_iter()
            .map(|mut row| -> Result<_> {
                let trunc = match choose_nmax(row.tanh_q, spec.tolerance) {
                    Ok(t) => t,
                    Err(_) => return Ok(row),
                };
                let reports =
                    scalar_blockwise_reports(row.tanh_q, &trunc, [true, true, false])?;
                row.nmax = trunc.n_max;
                row.tail_bound = trunc.tail_bound;
                row.neg = [
                    reports[0].as_ref().map(|r| r.negativity),
                    reports[1].as_ref().map(|r| r.negativity),
                    None,
                ];
                row.mi = [
                    reports[0].as_ref().map(|r| r.mutual_information),
                    reports[1].as_ref().map(|r| r.mutual_information),
                    None,
                ];
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(rows)
}

fn cmd_units<W: Write, E: Write>(
    matches: &clap::ArgMatches,
    stdout: &mut W,
    _stderr: &mut E,
) -> Result<i32> {
    let cfg = effective_config(matches)?;
    let mass = parse_mass(matches.get_one::<String>("mass").unwrap(), &cfg.constants)?;
    let delta0 = parse_distance(matches.get_one::<String>("delta0").unwrap())?;
    let freq = parse_frequency(matches.get_one::<String>("freq").unwrap())?;
    let scenario = PhysicalScenario::new(mass, delta0, freq, cfg.convention())?;

    let rs = schwarzschild_radius(&cfg.constants, mass)?;
    let kappa = surface_gravity(&cfg.constants, mass)?;
    let nat = to_natural(&cfg.constants, &scenario)?;
    let params = squeeze_params(&nat)?;
    let acc = boundary_acceleration(nat.r0_over_rs)?;

    writeln!(stdout, "mass_kg:         {:.12e}", mass)?;
    writeln!(stdout, "delta0_m:        {:.12e}", delta0)?;
    writeln!(stdout, "freq_hz:         {:.12e}", freq)?;
    writeln!(stdout, "R_S_m:           {:.12e}", rs)?;
    writeln!(stdout, "kappa_per_s:     {:.12e}", kappa)?;
    writeln!(stdout, "f0:              {:.12e}", params.f0)?;
    writeln!(stdout, "sqrt_f0:         {:.12e}", params.f0.sqrt())?;
    writeln!(stdout, "omega:           {:.12e}", nat.omega)?;
    writeln!(stdout, "r0_over_rs:      {:.12e}", nat.r0_over_rs)?;
    writeln!(stdout, "tanh_q:          {:.12e}", params.tanh_qs)?;
    writeln!(stdout, "validity_ratio:  {:.12e}", params.validity_ratio)?;
    writeln!(
        stdout,
        "acceleration_kappa_units: exact {:.12e}  approx {:.12e}",
        acc.exact, acc.approx
    )?;
    writeln!(
        stdout,
        "verdict: {}",
        if params.beyond_validity {
            "outside Rindler-approximation regime"
        } else {
            "within near-horizon approximation regime"
        }
    )?;
    Ok(EXIT_OK)
}

/// Entry point shared by the binary and the CLI tests. Returns the process
/// exit code; output goes to the supplied writers.
pub fn run_from<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_DOMAIN
                }
            };
        }
    };

    let result = match matches.subcommand() {
        Some(("point", sub)) => cmd_point(sub, stdout, stderr),
        Some(("sweep", sub)) => cmd_sweep(sub, stdout, stderr),
        Some(("verify", sub)) => cmd_verify(sub, stdout, stderr),
        Some(("units", sub)) => cmd_units(sub, stdout, stderr),
        _ => unreachable!("subcommand required"),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

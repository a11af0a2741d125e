//! Parameter-sweep engine: reproduces the standard figure families with
//! certified convergence, conservation-law verification, and deterministic
//! CSV output.
//!
//! Rows are independent pure computations; execution order is arbitrary
//! (rayon), output order is not: rows are sorted by (series, grid point)
//! before emission, so identical specs produce byte-identical CSV regardless
//! of worker count.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::constants::Constants;
use crate::geometry::{
    squeeze_params, to_natural, FrequencyConvention, NaturalScenario, PhysicalScenario,
};
use crate::measures::{analyze_all, scalar_blockwise_reports, BipartitionReport};
use crate::states::{choose_nmax, dirac_entangled, ScalarTruncation, NMAX_CAP};
use crate::{Error, Result};

/// Which field the entangled mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Scalar,
    Dirac,
}

impl Field {
    pub fn label(&self) -> &'static str {
        match self {
            Field::Scalar => "scalar",
            Field::Dirac => "dirac",
        }
    }
}

/// Whether the sweep is parameterized in natural units (Ω, R₀) or SI units
/// (mass, Δ₀, frequency).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Natural,
    Physical,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Natural => "natural",
            Mode::Physical => "physical",
        }
    }
}

/// Grid spacing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Logarithmic in the value itself (mass grids).
    Log,
    /// Logarithmic in (value - 1); the natural choice for R₀ grids since all
    /// the action is near the horizon.
    LogOffsetFromOne,
}

/// A one-dimensional grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Domain("grid must be nonempty".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::Domain(format!(
                "grid bounds [{}, {}] invalid",
                self.min, self.max
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let n = self.count;
        let pts = match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                if self.min <= 0.0 {
                    return Err(Error::Domain("log grid needs min > 0".into()));
                }
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
            Spacing::LogOffsetFromOne => {
                if self.min <= 1.0 {
                    return Err(Error::Domain("log-offset grid needs min > 1".into()));
                }
                let (a, b) = ((self.min - 1.0).ln(), (self.max - 1.0).ln());
                (0..n)
                    .map(|i| 1.0 + (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        };
        Ok(pts)
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub field: Field,
    pub mode: Mode,
    /// Natural mode: one series per Ω value.
    pub omega_values: Vec<f64>,
    /// Natural mode: the R₀ grid (min > 1).
    pub r0_grid: GridSpec,
    /// Physical mode: the black-hole mass grid in kg.
    pub mass_grid: Option<GridSpec>,
    /// Physical mode: one series per distance-to-horizon value (m).
    pub delta0_values: Vec<f64>,
    /// Physical mode: Rob's mode frequency.
    pub frequency_hz: Option<f64>,
    pub convention: FrequencyConvention,
    /// Requested truncation tolerance for scalar points, in (0, 1e-3].
    pub tolerance: f64,
    /// Which bipartitions to evaluate, indexed [AR, AR̄, RR̄].
    pub bipartitions: [bool; 3],
    /// Re-verify scalar rows by doubling n_max (up to three times).
    pub recheck: bool,
}

impl SweepSpec {
    /// A natural-mode spec over the default near-horizon grid.
    pub fn natural(field: Field, omega_values: Vec<f64>, r0_grid: GridSpec) -> Self {
        SweepSpec {
            field,
            mode: Mode::Natural,
            omega_values,
            r0_grid,
            mass_grid: None,
            delta0_values: vec![],
            frequency_hz: None,
            convention: FrequencyConvention::Ordinary,
            tolerance: 1e-9,
            bipartitions: [true, true, false],
            recheck: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-3) {
            return Err(Error::Domain(format!(
                "tolerance must lie in (0, 1e-3], got {}",
                self.tolerance
            )));
        }
        if !self.bipartitions.iter().any(|&b| b) {
            return Err(Error::Domain("no bipartitions requested".into()));
        }
        match self.mode {
            Mode::Natural => {
                if self.omega_values.is_empty() {
                    return Err(Error::Domain("natural sweep needs Ω values".into()));
                }
                if self.omega_values.iter().any(|&o| !o.is_finite() || o <= 0.0) {
                    return Err(Error::Domain("Ω values must be > 0".into()));
                }
                if self.r0_grid.min <= 1.0 {
                    return Err(Error::Domain("R₀ grid minimum must be > 1".into()));
                }
                self.r0_grid.points()?;
            }
            Mode::Physical => {
                let grid = self
                    .mass_grid
                    .ok_or_else(|| Error::Domain("physical sweep needs a mass grid".into()))?;
                grid.points()?;
                if grid.min <= 0.0 {
                    return Err(Error::Domain("mass grid must be positive".into()));
                }
                if self.delta0_values.is_empty() {
                    return Err(Error::Domain("physical sweep needs Δ₀ values".into()));
                }
                if self.delta0_values.iter().any(|&d| !d.is_finite() || d <= 0.0) {
                    return Err(Error::Domain("Δ₀ values must be > 0".into()));
                }
                match self.frequency_hz {
                    Some(f) if f.is_finite() && f > 0.0 => {}
                    _ => return Err(Error::Domain("physical sweep needs a frequency > 0".into())),
                }
            }
        }
        Ok(())
    }
}

/// One evaluated grid point. Self-describing: every input coordinate needed
/// to re-derive the row is present.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub field: Field,
    pub mode: Mode,
    pub omega: f64,
    pub mass_kg: Option<f64>,
    pub delta0_m: Option<f64>,
    pub freq_hz: Option<f64>,
    pub r0_over_rs: f64,
    pub tanh_q: f64,
    pub validity_ratio: f64,
    pub nmax: usize,
    pub tail_bound: f64,
    /// Per-bipartition negativity, indexed [AR, AR̄, RR̄]; None when not
    /// requested.
    pub neg: [Option<f64>; 3],
    /// Per-bipartition mutual information, same indexing.
    pub mi: [Option<f64>; 3],
    pub converged: bool,
    pub warning: String,
}

fn reports_to_row_fields(
    reports: &[Option<BipartitionReport>; 3],
) -> ([Option<f64>; 3], [Option<f64>; 3]) {
    let neg = [
        reports[0].as_ref().map(|r| r.negativity),
        reports[1].as_ref().map(|r| r.negativity),
        reports[2].as_ref().map(|r| r.negativity),
    ];
    let mi = [
        reports[0].as_ref().map(|r| r.mutual_information),
        reports[1].as_ref().map(|r| r.mutual_information),
        reports[2].as_ref().map(|r| r.mutual_information),
    ];
    (neg, mi)
}

/// Evaluate the requested measures at a squeezing value. For scalar points a
/// truncation infeasible at the requested tolerance degrades to the hard cap
/// with its certified (larger) tail bound and a warning, so the row is still
/// self-describing rather than silently dropped.
fn evaluate_point(
    field: Field,
    tanh_q: f64,
    tolerance: f64,
    want: [bool; 3],
) -> Result<(usize, f64, [Option<f64>; 3], [Option<f64>; 3], bool, String)> {
    match field {
        Field::Dirac => {
            let state = dirac_entangled(tanh_q)?;
            let all = analyze_all(&state, None)?;
            let reports = [
                want[0].then_some(all[0]),
                want[1].then_some(all[1]),
                want[2].then_some(all[2]),
            ];
            let (neg, mi) = reports_to_row_fields(&reports);
            Ok((0, 0.0, neg, mi, true, String::new()))
        }
        Field::Scalar => {
            let (trunc, converged, mut warning) = match choose_nmax(tanh_q, tolerance) {
                Ok(t) => (t, true, String::new()),
                Err(Error::TruncationInfeasible { .. }) => {
                    let t = ScalarTruncation::with_nmax(NMAX_CAP, tanh_q, tolerance);
                    (
                        t,
                        false,
                        format!(
                            "truncation infeasible: tolerance {tolerance:e} unreachable below \
                             n_max = {NMAX_CAP}; reported at the cap with tail bound {:e}",
                            t.tail_bound
                        ),
                    )
                }
                Err(e) => return Err(e),
            };
            // RR̄ at the cap is an O(n³) computation; skip it on degraded
            // rows rather than stall the sweep.
            let mut want = want;
            if !converged && want[2] {
                want[2] = false;
                warning.push_str("; rrbar negativity omitted at cap truncation");
            }
            let reports = scalar_blockwise_reports(tanh_q, &trunc, want)?;
            let (neg, mi) = reports_to_row_fields(&reports);
            Ok((trunc.n_max, trunc.tail_bound, neg, mi, converged, warning))
        }
    }
}

/// Run a sweep: one row per grid point, ordered by (series, grid point)
/// deterministically regardless of execution parallelism.
pub fn run_sweep(spec: &SweepSpec, consts: &Constants) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    // (series index, point index, coordinates)
    struct Point {
        series: usize,
        index: usize,
        omega: f64,
        r0: f64,
        mass: Option<f64>,
        delta0: Option<f64>,
    }
    let mut points = Vec::new();
    match spec.mode {
        Mode::Natural => {
            let r0s = spec.r0_grid.points()?;
            for (s, &omega) in spec.omega_values.iter().enumerate() {
                for (i, &r0) in r0s.iter().enumerate() {
                    points.push(Point {
                        series: s,
                        index: i,
                        omega,
                        r0,
                        mass: None,
                        delta0: None,
                    });
                }
            }
        }
        Mode::Physical => {
            let masses = spec.mass_grid.unwrap().points()?;
            let freq = spec.frequency_hz.unwrap();
            for (s, &delta0) in spec.delta0_values.iter().enumerate() {
                for (i, &mass) in masses.iter().enumerate() {
                    let scenario = PhysicalScenario::new(mass, delta0, freq, spec.convention)?;
                    let nat = to_natural(consts, &scenario)?;
                    points.push(Point {
                        series: s,
                        index: i,
                        omega: nat.omega,
                        r0: nat.r0_over_rs,
                        mass: Some(mass),
                        delta0: Some(delta0),
                    });
                }
            }
        }
    }

    let mut rows: Vec<(usize, usize, SweepRow)> = points
        .par_iter()
        .map(|p| -> Result<(usize, usize, SweepRow)> {
            let params = squeeze_params(&NaturalScenario::new(p.omega, p.r0)?)?;
            let (nmax, tail, neg, mi, converged, mut warning) =
                evaluate_point(spec.field, params.tanh_qs, spec.tolerance, spec.bipartitions)?;
            if params.beyond_validity {
                if !warning.is_empty() {
                    warning.push_str("; ");
                }
                warning.push_str("outside Rindler-approximation regime (Δ₀ > 0.05 R_S)");
            }
            let row = SweepRow {
                field: spec.field,
                mode: spec.mode,
                omega: p.omega,
                mass_kg: p.mass,
                delta0_m: p.delta0,
                freq_hz: p.mass.is_some().then(|| spec.frequency_hz.unwrap()),
                r0_over_rs: p.r0,
                tanh_q: params.tanh_qs,
                validity_ratio: params.validity_ratio,
                nmax,
                tail_bound: tail,
                neg,
                mi,
                converged,
                warning,
            };
            Ok((p.series, p.index, row))
        })
        .collect::<Result<Vec<_>>>()?;

    rows.sort_by_key(|(s, i, _)| (*s, *i));
    let mut rows: Vec<SweepRow> = rows.into_iter().map(|(_, _, r)| r).collect();

    if spec.recheck && spec.field == Field::Scalar {
        rows = rows
            .into_par_iter()
            .map(|row| convergence_recheck(&row, spec.tolerance))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(rows)
}

/// Re-verify a scalar row by doubling n_max: accepted once every reported
/// measure moves by less than 10× the tolerance between consecutive
/// truncations, otherwise marked unconverged after three doublings. Never
/// aborts; Dirac rows pass through unchanged.
pub fn convergence_recheck(row: &SweepRow, tolerance: f64) -> Result<SweepRow> {
    if row.field != Field::Dirac && row.tanh_q > 0.0 {
        let want = [row.neg[0].is_some(), row.neg[1].is_some(), row.neg[2].is_some()];
        let mut prev = row.clone();
        let mut n = row.nmax.max(1);
        for _ in 0..3 {
            n *= 2;
            let trunc = ScalarTruncation::with_nmax(n, row.tanh_q, tolerance);
            let reports = scalar_blockwise_reports(row.tanh_q, &trunc, want)?;
            let (neg, mi) = reports_to_row_fields(&reports);
            let mut moved = 0.0f64;
            for k in 0..3 {
                if let (Some(a), Some(b)) = (prev.neg[k], neg[k]) {
                    moved = moved.max((a - b).abs());
                }
                if let (Some(a), Some(b)) = (prev.mi[k], mi[k]) {
                    moved = moved.max((a - b).abs());
                }
            }
            let mut refined = prev.clone();
            refined.nmax = n;
            refined.tail_bound = trunc.tail_bound;
            refined.neg = neg;
            refined.mi = mi;
            if moved < 10.0 * tolerance {
                refined.converged = true;
                return Ok(refined);
            }
            prev = refined;
        }
        prev.converged = false;
        if !prev.warning.is_empty() {
            prev.warning.push_str("; ");
        }
        prev.warning
            .push_str("unconverged after 3 truncation doublings");
        return Ok(prev);
    }
    Ok(row.clone())
}

/// Result of checking the conservation laws over a set of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub rows: usize,
    /// max |𝒩_AR + 𝒩_AR̄ - 1/2| over Dirac rows; None when not applicable.
    pub max_neg_dev: Option<f64>,
    pub neg_pass: Option<bool>,
    /// max |I_AR + I_AR̄ - 2| over all rows with both CCA bipartitions.
    pub max_mi_dev: Option<f64>,
    /// max over rows of (deviation - allowance), allowance being 1e-12 for
    /// Dirac and min(max(1e-9, 10·tail_bound), 0.1) for scalar.
    pub max_mi_excess: Option<f64>,
    pub mi_pass: Option<bool>,
    /// max 𝒩_AR̄ over scalar rows; None when not applicable.
    pub max_neg_arbar: Option<f64>,
    pub arbar_pass: Option<bool>,
}

impl ConservationReport {
    pub fn pass(&self) -> bool {
        self.neg_pass.unwrap_or(true)
            && self.mi_pass.unwrap_or(true)
            && self.arbar_pass.unwrap_or(true)
    }
}

impl std::fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "rows checked: {}", self.rows)?;
        match (self.max_neg_dev, self.neg_pass) {
            (Some(d), Some(p)) => writeln!(
                f,
                "negativity conservation |N_AR + N_ARbar - 1/2|: max {:.3e}  [{}]",
                d,
                if p { "PASS" } else { "FAIL" }
            )?,
            _ => writeln!(f, "negativity conservation: not applicable")?,
        }
        match (self.max_mi_dev, self.mi_pass) {
            (Some(d), Some(p)) => writeln!(
                f,
                "mutual-information conservation |I_AR + I_ARbar - 2|: max {:.3e}  [{}]",
                d,
                if p { "PASS" } else { "FAIL" }
            )?,
            _ => writeln!(f, "mutual-information conservation: not applicable")?,
        }
        match (self.max_neg_arbar, self.arbar_pass) {
            (Some(d), Some(p)) => writeln!(
                f,
                "scalar Alice-AntiRob separability max N_ARbar: {:.3e}  [{}]",
                d,
                if p { "PASS" } else { "FAIL" }
            )?,
            _ => writeln!(f, "scalar Alice-AntiRob separability: not applicable")?,
        }
        Ok(())
    }
}

/// Conservation allowance for scalar mutual information on a row with the
/// given certified tail bound. Capped at 0.1 so a result without meaningful
/// certification is reported as failing rather than trivially passing.
pub fn scalar_mi_allowance(tail_bound: f64) -> f64 {
    (10.0 * tail_bound).max(1e-9).min(0.1)
}

/// Check the conservation laws across rows: 𝒩_AR + 𝒩_AR̄ = 1/2 (Dirac),
/// I_AR + I_AR̄ = 2 (both fields), and 𝒩_AR̄ = 0 (scalar).
pub fn verify_conservation(rows: &[SweepRow]) -> ConservationReport {
    let mut max_neg_dev: Option<f64> = None;
    let mut max_mi_dev: Option<f64> = None;
    let mut max_mi_excess: Option<f64> = None;
    let mut max_neg_arbar: Option<f64> = None;

    for row in rows {
        if let (Some(nar), Some(narb)) = (row.neg[0], row.neg[1]) {
            if row.field == Field::Dirac {
                let dev = (nar + narb - 0.5).abs();
                max_neg_dev = Some(max_neg_dev.unwrap_or(0.0).max(dev));
            }
        }
        if let Some(narb) = row.neg[1] {
            if row.field == Field::Scalar {
                max_neg_arbar = Some(max_neg_arbar.unwrap_or(0.0).max(narb));
            }
        }
        if let (Some(iar), Some(iarb)) = (row.mi[0], row.mi[1]) {
            let dev = (iar + iarb - 2.0).abs();
            let allowance = match row.field {
                Field::Dirac => 1e-12,
                Field::Scalar => scalar_mi_allowance(row.tail_bound),
            };
            max_mi_dev = Some(max_mi_dev.unwrap_or(0.0).max(dev));
            max_mi_excess = Some(max_mi_excess.unwrap_or(f64::NEG_INFINITY).max(dev - allowance));
        }
    }

    ConservationReport {
        rows: rows.len(),
        max_neg_dev,
        neg_pass: max_neg_dev.map(|d| d <= 1e-12),
        max_mi_dev,
        max_mi_excess,
        mi_pass: max_mi_excess.map(|e| e <= 0.0),
        max_neg_arbar,
        arbar_pass: max_neg_arbar.map(|d| d <= 1e-10),
    }
}

/// The default near-horizon R₀ grid: log-offset spacing of R₀ - 1 over
/// [1e-6, 1], 200 points.
pub fn default_r0_grid() -> GridSpec {
    GridSpec {
        min: 1.0 + 1e-6,
        max: 2.0,
        count: 200,
        spacing: Spacing::LogOffsetFromOne,
    }
}

/// The Ω series used by the natural-unit figure presets. The exact values
/// behind the published figure families are a free choice; these span the
/// visible dynamic range and can be overridden with explicit grid flags.
pub const PRESET_OMEGAS: [f64; 5] = [2.0, 6.0, 10.0, 20.0, 40.0];

/// Named sweep presets reproducing the standard figure families:
///
/// * `fig3`/`fig4` — CCA negativities vs R₀ for several Ω (scalar/Dirac);
/// * `fig5`/`fig6` — across-horizon RR̄ negativity vs R₀ (scalar/Dirac).
///   The scalar RR̄ value diverges at the horizon and its fast path is
///   O(n_max³), so `fig5` uses a shallower grid (R₀ - 1 ≥ 1e-3) and a 1e-6
///   tolerance to keep the certified truncations tractable;
/// * `fig7`/`fig8` — CCA negativities vs black-hole mass at Δ₀ ∈ {1 cm,
///   10 cm}, ω_R = 1.5 MHz (scalar/Dirac).
pub fn figure_presets() -> BTreeMap<&'static str, SweepSpec> {
    let mut map = BTreeMap::new();
    let omegas = PRESET_OMEGAS.to_vec();
    map.insert(
        "fig3",
        SweepSpec::natural(Field::Scalar, omegas.clone(), default_r0_grid()),
    );
    map.insert(
        "fig4",
        SweepSpec::natural(Field::Dirac, omegas.clone(), default_r0_grid()),
    );
    let mut fig5 = SweepSpec::natural(
        Field::Scalar,
        omegas.clone(),
        GridSpec {
            min: 1.0 + 1e-3,
            max: 2.0,
            count: 100,
            spacing: Spacing::LogOffsetFromOne,
        },
    );
    fig5.bipartitions = [false, false, true];
    fig5.tolerance = 1e-6;
    map.insert("fig5", fig5);
    let mut fig6 = SweepSpec::natural(Field::Dirac, omegas.clone(), default_r0_grid());
    fig6.bipartitions = [false, false, true];
    map.insert("fig6", fig6);

    let mass_grid = GridSpec {
        min: 1e-6 * crate::constants::SOLAR_MASS,
        max: 1e-2 * crate::constants::SOLAR_MASS,
        count: 201,
        spacing: Spacing::Log,
    };
    for (name, field) in [("fig7", Field::Scalar), ("fig8", Field::Dirac)] {
        map.insert(
            name,
            SweepSpec {
                field,
                mode: Mode::Physical,
                omega_values: vec![],
                r0_grid: default_r0_grid(),
                mass_grid: Some(mass_grid),
                delta0_values: vec![0.01, 0.1],
                frequency_hz: Some(1.5e6),
                convention: FrequencyConvention::Ordinary,
                tolerance: 1e-9,
                bipartitions: [true, true, false],
                recheck: false,
            },
        );
    }
    map
}

/// CSV header, fixed column order.
pub const CSV_HEADER: &str = "field,mode,omega,mass_kg,delta0_m,freq_hz,r0_over_rs,tanh_q,\
     validity_ratio,nmax,tail_bound,neg_ar,neg_arbar,neg_rrbar,mi_ar,mi_arbar,mi_rrbar,\
     converged,warning";

fn fmt_f64(x: f64) -> String {
    // 17 significant digits: round-trippable f64.
    format!("{:.16e}", x)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Write rows as CSV with floating-point fields at 17 significant digits.
/// Byte-identical for identical inputs.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.field.label(),
            r.mode.label(),
            fmt_f64(r.omega),
            fmt_opt(r.mass_kg),
            fmt_opt(r.delta0_m),
            fmt_opt(r.freq_hz),
            fmt_f64(r.r0_over_rs),
            fmt_f64(r.tanh_q),
            fmt_f64(r.validity_ratio),
            r.nmax,
            fmt_f64(r.tail_bound),
            fmt_opt(r.neg[0]),
            fmt_opt(r.neg[1]),
            fmt_opt(r.neg[2]),
            fmt_opt(r.mi[0]),
            fmt_opt(r.mi[1]),
            fmt_opt(r.mi[2]),
            r.converged,
            r.warning.replace(',', ";")
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_grid(min: f64, max: f64, count: usize) -> GridSpec {
        GridSpec {
            min,
            max,
            count,
            spacing: Spacing::LogOffsetFromOne,
        }
    }

    #[test]
    fn grid_points_shapes() {
        let lin = GridSpec {
            min: 0.0,
            max: 1.0,
            count: 5,
            spacing: Spacing::Linear,
        };
        assert_eq!(lin.points().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);

        let log = GridSpec {
            min: 1.0,
            max: 100.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let pts = log.points().unwrap();
        assert_relative_eq!(pts[1], 10.0, max_relative = 1e-12);

        let off = small_grid(1.0 + 1e-4, 1.0 + 1e-2, 3);
        let pts = off.points().unwrap();
        assert_relative_eq!(pts[1] - 1.0, 1e-3, max_relative = 1e-12);

        assert!(small_grid(1.0, 2.0, 3).points().is_err());
        assert!(
            GridSpec {
                min: 1.1,
                max: 2.0,
                count: 0,
                spacing: Spacing::Linear
            }
            .points()
            .is_err()
        );
    }

    #[test]
    fn far_point_is_bell_like() {
        // Single point with R₀ huge: exp-suppressed deviation from 1/2.
        let spec = SweepSpec {
            tolerance: 1e-9,
            ..SweepSpec::natural(
                Field::Scalar,
                vec![25.0],
                GridSpec {
                    min: 1e6,
                    max: 1e6,
                    count: 1,
                    spacing: Spacing::Linear,
                },
            )
        };
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].neg[0].unwrap() - 0.5).abs() < 1e-5);
        assert!(rows[0].neg[1].unwrap() < 1e-12);
        assert!(rows[0].converged);
    }

    #[test]
    fn dirac_rows_satisfy_conservation() {
        let spec = SweepSpec::natural(
            Field::Dirac,
            vec![2.0, 10.0],
            small_grid(1.0 + 1e-5, 1.5, 25),
        );
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        assert_eq!(rows.len(), 50);
        for row in &rows {
            let s = row.neg[0].unwrap() + row.neg[1].unwrap();
            assert!((s - 0.5).abs() < 1e-12, "sum {s}");
            assert_eq!(row.nmax, 0);
        }
        let report = verify_conservation(&rows);
        assert!(report.pass());
        assert!(report.max_neg_dev.unwrap() < 1e-12);
        assert!(report.max_mi_dev.unwrap() < 1e-12);
        assert!(report.max_neg_arbar.is_none());
    }

    #[test]
    fn scalar_rows_conservation_and_separability() {
        let spec = SweepSpec {
            tolerance: 1e-8,
            ..SweepSpec::natural(Field::Scalar, vec![5.0, 15.0], small_grid(1.0 + 1e-4, 1.8, 20))
        };
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        let report = verify_conservation(&rows);
        assert!(report.pass(), "{report}");
        assert!(report.max_neg_arbar.unwrap() <= 1e-10);
        // Monotone: 𝒩_AR nonincreasing as R₀ decreases toward 1.
        for series in rows.chunks(20) {
            for pair in series.windows(2) {
                assert!(pair[0].neg[0].unwrap() <= pair[1].neg[0].unwrap() + 1e-12);
            }
        }
        // Every row is either within its requested tolerance or marked.
        for row in &rows {
            assert!(row.tail_bound <= spec.tolerance || !row.converged);
        }
    }

    #[test]
    fn verify_without_cca_rows_is_not_applicable() {
        let mut spec = SweepSpec::natural(Field::Dirac, vec![3.0], small_grid(1.0 + 1e-3, 1.5, 5));
        spec.bipartitions = [false, false, true];
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        let report = verify_conservation(&rows);
        assert!(report.max_neg_dev.is_none());
        assert!(report.max_mi_dev.is_none());
        assert!(report.max_neg_arbar.is_none());
        assert!(report.pass());
        assert!(format!("{report}").contains("not applicable"));
    }

    #[test]
    fn infeasible_points_carry_failure_marker() {
        let spec = SweepSpec {
            tolerance: 1e-9,
            ..SweepSpec::natural(
                Field::Scalar,
                vec![0.05],
                GridSpec {
                    min: 1.0 + 1e-9,
                    max: 1.0 + 1e-9,
                    count: 1,
                    spacing: Spacing::Linear,
                },
            )
        };
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(!rows[0].converged);
        assert!(rows[0].warning.contains("truncation infeasible"));
        assert_eq!(rows[0].nmax, NMAX_CAP);
        // Cheap measures still present at the cap.
        assert!(rows[0].neg[0].is_some());
        assert!(rows[0].tail_bound > 1e-9);
    }

    #[test]
    fn recheck_accepts_converged_and_flags_divergent() {
        // tanh = 0: identical after recheck.
        let spec = SweepSpec {
            recheck: true,
            tolerance: 1e-8,
            ..SweepSpec::natural(Field::Scalar, vec![9.0], small_grid(1.0 + 1e-3, 1.1, 4))
        };
        let rows = run_sweep(&spec, &Constants::default()).unwrap();
        assert!(rows.iter().all(|r| r.converged));

        // A near-horizon RR̄ row keeps growing under refinement.
        let trunc_row = SweepRow {
            field: Field::Scalar,
            mode: Mode::Natural,
            omega: 1.0,
            mass_kg: None,
            delta0_m: None,
            freq_hz: None,
            r0_over_rs: 1.0 + 1e-9,
            tanh_q: 1.0 - 1e-9,
            validity_ratio: 1e-9,
            nmax: 64,
            tail_bound: 1.0,
            neg: [None, None, Some(0.0)],
            mi: [None, None, None],
            converged: true,
            warning: String::new(),
        };
        let refined = convergence_recheck(&trunc_row, 1e-8).unwrap();
        assert!(!refined.converged);
        assert!(refined.warning.contains("unconverged"));
        assert!(refined.neg[2].unwrap() > trunc_row.neg[2].unwrap());
    }

    #[test]
    fn cross_mode_consistency() {
        // A physical-mode row agrees with the natural-mode row at its
        // converted coordinates to 1e-12.
        let consts = Constants::default();
        let mass = 1.98892e25;
        let spec_phys = SweepSpec {
            field: Field::Scalar,
            mode: Mode::Physical,
            omega_values: vec![],
            r0_grid: default_r0_grid(),
            mass_grid: Some(GridSpec {
                min: mass,
                max: mass,
                count: 1,
                spacing: Spacing::Log,
            }),
            delta0_values: vec![0.01],
            frequency_hz: Some(1.5e6),
            convention: FrequencyConvention::Ordinary,
            tolerance: 1e-9,
            bipartitions: [true, true, false],
            recheck: false,
        };
        let phys = run_sweep(&spec_phys, &consts).unwrap();
        assert_eq!(phys.len(), 1);

        let nat = to_natural(
            &consts,
            &PhysicalScenario::new(mass, 0.01, 1.5e6, FrequencyConvention::Ordinary).unwrap(),
        )
        .unwrap();
        let spec_nat = SweepSpec {
            tolerance: 1e-9,
            ..SweepSpec::natural(
                Field::Scalar,
                vec![nat.omega],
                GridSpec {
                    min: nat.r0_over_rs,
                    max: nat.r0_over_rs,
                    count: 1,
                    spacing: Spacing::Linear,
                },
            )
        };
        let natural = run_sweep(&spec_nat, &consts).unwrap();
        for k in 0..2 {
            assert!(
                (phys[0].neg[k].unwrap() - natural[0].neg[k].unwrap()).abs() < 1e-12,
                "neg[{k}]"
            );
            assert!(
                (phys[0].mi[k].unwrap() - natural[0].mi[k].unwrap()).abs() < 1e-12,
                "mi[{k}]"
            );
        }
        // Physical rows carry their tanh_q ≈ exp(-π √f₀ ω_ang/κ) chain.
        assert!(phys[0].tanh_q > 0.99 && phys[0].tanh_q < 1.0);
    }

    #[test]
    fn csv_is_deterministic_and_ordered() {
        let spec = SweepSpec {
            tolerance: 1e-8,
            ..SweepSpec::natural(Field::Dirac, vec![4.0, 8.0], small_grid(1.0 + 1e-3, 1.2, 7))
        };
        let consts = Constants::default();
        let rows1 = run_sweep(&spec, &consts).unwrap();
        let rows2 = run_sweep(&spec, &consts).unwrap();
        let mut buf1 = Vec::new();
        let mut buf2 = Vec::new();
        write_csv(&rows1, &mut buf1).unwrap();
        write_csv(&rows2, &mut buf2).unwrap();
        assert_eq!(buf1, buf2);
        let text = String::from_utf8(buf1).unwrap();
        assert!(text.starts_with("field,mode,omega,"));
        assert_eq!(text.lines().count(), 15);
        // Ordered by (series, R₀ ascending).
        let r0s: Vec<f64> = rows1.iter().map(|r| r.r0_over_rs).collect();
        assert!(r0s[..7].windows(2).all(|w| w[0] < w[1]));
        assert_relative_eq!(rows1[0].r0_over_rs, rows1[7].r0_over_rs, epsilon = 0.0);
    }

    #[test]
    fn presets_cover_fig3_to_fig8() {
        let presets = figure_presets();
        for name in ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8"] {
            let spec = presets.get(name).unwrap();
            spec.validate().unwrap();
        }
        assert_eq!(presets["fig3"].field, Field::Scalar);
        assert_eq!(presets["fig4"].field, Field::Dirac);
        assert_eq!(presets["fig7"].mode, Mode::Physical);
        assert_eq!(presets["fig7"].delta0_values, vec![0.01, 0.1]);
        assert_eq!(presets["fig7"].frequency_hz, Some(1.5e6));
        assert!(presets["fig5"].bipartitions[2]);
    }
}

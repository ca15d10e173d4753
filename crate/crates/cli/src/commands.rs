use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use spacelife::analysis::{
    aggregate_annual, annual_mean_series, annual_volume_series, assign_ordinality, build_end_dated_series,
    compare_models, volume_for_lifespan, year_for_lifespan, Law, SeriesBuild, WindowPolicy, Windowable,
};
use spacelife::bias_sim::{run_bias_experiment, BiasReport, FleetScenario};
use spacelife::fitting::{
    doubling_time, fit_moore, fit_wright, wright_doubling_factor, wright_volume_increase_for_doubling, DoublingTime,
    FitDiagnostics, Residual, MIN_FIT_POINTS,
};
use spacelife::ingest::{write_records_csv, write_rejects_csv, StatusBreakdown};
use spacelife::{
    AnnualAggregate, ComparisonReport, EndDatedSeries, Error, MooreFit, RecordStatus, ResidualSpace, VolumeSeries,
    WrightFit,
};

use crate::error::{CliError, CliResult};
use crate::input::{load, InputArgs, Kind, Loaded};
use crate::svg::{self, Curve, Plot};

pub const SCHEMA_VERSION: u32 = 1;

/// Satellite fits start once launch rates settled.
const SATCAT_MOORE_START: i32 = 1967;
const SATCAT_WRIGHT_START: i32 = 1961;
/// Craft flown before the first mission in the list.
const MISSION_VOLUME_OFFSET: i64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Comma-separated output formats.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Json, Format::Svg])]
    pub format: Vec<Format>,
}

impl OutputArgs {
    fn wants(&self, format: Format) -> bool {
        self.format.contains(&format)
    }
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(path.display(), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

fn aggregate_csv(agg: &AnnualAggregate) -> CliResult<Vec<u8>> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["year", "ended_count", "mean_lifespan", "cumulative_ordinality"])
        .map_err(Error::from)?;
    for row in &agg.rows {
        out.write_record([
            row.year.to_string(),
            row.ended_count.to_string(),
            row.mean_lifespan.map(|m| m.to_string()).unwrap_or_default(),
            row.cumulative_ordinality.to_string(),
        ])
        .map_err(Error::from)?;
    }
    out.into_inner()
        .map_err(|e| CliError::io("annual aggregate", e.into_error()))
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    schema_version: u32,
    command: &'static str,
    kind: Kind,
    input: String,
    operator: Option<&'a str>,
    records: usize,
    ended: usize,
    operational: usize,
    excluded: usize,
    rejected: usize,
    /// Counts over the whole catalog, before any operator filter.
    catalog_status: Option<&'a StatusBreakdown>,
}

pub fn ingest(args: &IngestArgs) -> CliResult<()> {
    if !args.output.wants(Format::Csv) && !args.output.wants(Format::Json) {
        return Err(CliError::usage("ingest writes csv and/or json; --format has neither"));
    }
    let loaded = load(&args.input)?;
    if loaded.empty_input {
        eprintln!("warning: {} is empty", args.input.input.display());
    }
    let count = |status| loaded.records.iter().filter(|r| r.status == status).count();
    let summary = IngestSummary {
        schema_version: SCHEMA_VERSION,
        command: "ingest",
        kind: args.input.kind,
        input: args.input.input.display().to_string(),
        operator: args.input.operator.as_deref(),
        records: loaded.records.len(),
        ended: count(RecordStatus::Ended),
        operational: count(RecordStatus::Operational),
        excluded: count(RecordStatus::ExcludedInOrbit) + count(RecordStatus::ExcludedNoStatusDate),
        rejected: loaded.rejects.len(),
        catalog_status: loaded.status.as_ref(),
    };
    let dir = &args.output.out_dir;
    if args.output.wants(Format::Csv) {
        let mut records = Vec::new();
        write_records_csv(&mut records, &loaded.records)?;
        write_file(dir, "records.csv", &records)?;
        let mut rejects = Vec::new();
        write_rejects_csv(&mut rejects, &loaded.rejects)?;
        write_file(dir, "rejects.csv", &rejects)?;
        write_file(
            dir,
            "annual_aggregate.csv",
            &aggregate_csv(&aggregate_annual(&loaded.records))?,
        )?;
    }
    if args.output.wants(Format::Json) {
        write_file(dir, "ingest_summary.json", &json(&summary)?)?;
    }
    eprintln!(
        "{} records: {} ended, {} operational, {} excluded; {} rejected lines",
        summary.records, summary.ended, summary.operational, summary.excluded, summary.rejected
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Log2,
    Linear,
}

impl From<Space> for ResidualSpace {
    fn from(s: Space) -> Self {
        match s {
            Space::Log2 => ResidualSpace::Log2,
            Space::Linear => ResidualSpace::Linear,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Year at which the Moore intercept is reported. Defaults to the first end
    /// year for missions and the first launch year for catalogs.
    #[arg(long)]
    pub base_year: Option<f64>,
    /// First end year fitted (both laws unless --wright-window-start is given).
    #[arg(long)]
    pub window_start: Option<i32>,
    /// Last end year fitted.
    #[arg(long)]
    pub window_end: Option<i32>,
    /// First end year for the Wright fit.
    #[arg(long)]
    pub wright_window_start: Option<i32>,
    /// Units produced before the first counted one. Defaults to 7 for missions, 0 for catalogs.
    #[arg(long, allow_negative_numbers = true)]
    pub offset: Option<i64>,
    #[arg(long, value_enum, default_value_t = Space::Log2)]
    pub residual_space: Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawChoice {
    Moore,
    Wright,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = LawChoice::Both)]
    pub law: LawChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

struct Dataset {
    loaded: Loaded,
    build: SeriesBuild,
    aggregate: AnnualAggregate,
    moore_full: EndDatedSeries,
    wright_full: VolumeSeries,
    base_year: f64,
    offset: u32,
}

fn prepare(args: &ModelArgs) -> CliResult<Dataset> {
    let loaded = load(&args.input)?;
    let build = build_end_dated_series(&loaded.records);
    let aggregate = aggregate_annual(&loaded.records);
    let default_offset = match args.input.kind {
        Kind::Mission => MISSION_VOLUME_OFFSET,
        Kind::Satcat => 0,
    };
    let requested = args.offset.unwrap_or(default_offset);
    let offset = u32::try_from(requested).map_err(|_| Error::NegativeOffset(requested))?;
    let (moore_full, wright_full) = match args.input.kind {
        Kind::Mission => (
            build.series.clone(),
            assign_ordinality(&build.series, i64::from(offset))?,
        ),
        Kind::Satcat => (annual_mean_series(&aggregate), annual_volume_series(&aggregate, offset)),
    };
    let Some(first) = moore_full.points().first() else {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_POINTS,
            found: 0,
        }
        .into());
    };
    let default_base = match args.input.kind {
        Kind::Mission => first.end_time.floor(),
        Kind::Satcat => loaded
            .records
            .iter()
            .map(|r| f64::from(r.launch.year()))
            .fold(first.end_time.floor(), f64::min),
    };
    let base_year = args.base_year.unwrap_or(default_base);
    if !base_year.is_finite() {
        return Err(Error::NonFinite("base year").into());
    }
    Ok(Dataset {
        loaded,
        build,
        aggregate,
        moore_full,
        wright_full,
        base_year,
        offset,
    })
}

fn window_policy(args: &ModelArgs) -> WindowPolicy {
    let (moore_default, wright_default) = match args.input.kind {
        Kind::Satcat if args.window_start.is_none() && args.wright_window_start.is_none() => {
            (Some(SATCAT_MOORE_START), Some(SATCAT_WRIGHT_START))
        }
        _ => (None, None),
    };
    WindowPolicy {
        moore_start_year: args.window_start.or(moore_default),
        wright_start_year: args.wright_window_start.or(args.window_start).or(wright_default),
        end_year: args.window_end,
    }
}

#[derive(Serialize)]
struct SeriesSummary {
    records: usize,
    points: usize,
    /// Points are annual mean lifespans rather than individual craft.
    annual_means: bool,
    dropped_operational: usize,
    dropped_without_end: usize,
    dropped_nonpositive: usize,
}

#[derive(Serialize)]
struct WindowReport {
    start_year: Option<i32>,
    end_year: Option<i32>,
    trimmed: usize,
}

#[derive(Serialize)]
struct FitStats {
    n_points: usize,
    excluded_nonpositive: usize,
    rms_log2: f64,
    rms_linear: f64,
    refinement: Option<spacelife::fitting::Refinement>,
    fallback: bool,
}

impl From<&FitDiagnostics> for FitStats {
    fn from(d: &FitDiagnostics) -> Self {
        Self {
            n_points: d.n_points,
            excluded_nonpositive: d.excluded_nonpositive,
            rms_log2: d.rms_log2,
            rms_linear: d.rms_linear,
            refinement: d.refinement,
            fallback: d.fallback,
        }
    }
}

#[derive(Serialize)]
struct MooreSection {
    window: WindowReport,
    fit: MooreFit,
    coefficient: f64,
    doubling_time: DoublingTime,
    #[serde(flatten)]
    stats: FitStats,
}

#[derive(Serialize)]
struct WrightSection {
    window: WindowReport,
    fit: WrightFit,
    /// Lifespan multiplier per doubling of cumulative volume.
    doubling_factor: f64,
    /// Fractional volume increase that doubles lifespan; absent for non-growing fits.
    volume_increase_for_doubling: Option<f64>,
    #[serde(flatten)]
    stats: FitStats,
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    command: &'static str,
    kind: Kind,
    input: String,
    operator: Option<&'a str>,
    residual_space: ResidualSpace,
    base_year: f64,
    volume_offset: u32,
    series: SeriesSummary,
    moore: Option<MooreSection>,
    wright: Option<WrightSection>,
}

fn series_summary(data: &Dataset, kind: Kind) -> SeriesSummary {
    SeriesSummary {
        records: data.loaded.records.len(),
        points: data.moore_full.len(),
        annual_means: kind == Kind::Satcat,
        dropped_operational: data.build.dropped_operational,
        dropped_without_end: data.build.dropped_without_end,
        dropped_nonpositive: data.build.dropped_nonpositive,
    }
}

fn moore_section(fit: MooreFit, diag: &FitDiagnostics, policy: &WindowPolicy, trimmed: usize) -> MooreSection {
    MooreSection {
        window: WindowReport {
            start_year: policy.moore_start_year,
            end_year: policy.end_year,
            trimmed,
        },
        fit,
        coefficient: fit.coefficient(),
        doubling_time: doubling_time(&fit),
        stats: diag.into(),
    }
}

fn wright_section(
    fit: WrightFit,
    diag: &FitDiagnostics,
    start_year: Option<i32>,
    end_year: Option<i32>,
    trimmed: usize,
) -> WrightSection {
    WrightSection {
        window: WindowReport {
            start_year,
            end_year,
            trimmed,
        },
        fit,
        doubling_factor: wright_doubling_factor(fit.exponent_w),
        volume_increase_for_doubling: wright_volume_increase_for_doubling(fit.exponent_w).ok(),
        stats: diag.into(),
    }
}

fn residuals_csv(rows: &[(&str, &[Residual])]) -> CliResult<Vec<u8>> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["law", "x", "observed", "predicted"])
        .map_err(Error::from)?;
    for (law, residuals) in rows {
        for r in *residuals {
            out.write_record([
                law.to_string(),
                r.x.to_string(),
                r.observed.to_string(),
                r.predicted.to_string(),
            ])
            .map_err(Error::from)?;
        }
    }
    out.into_inner().map_err(|e| CliError::io("residuals", e.into_error()))
}

fn moore_curve(fit: &MooreFit) -> Curve {
    let (lo, hi) = fit.fit_window;
    let points = (0..=100)
        .map(|i| {
            let t = lo + (hi - lo) * f64::from(i) / 100.0;
            (t, fit.predict(t))
        })
        .collect();
    Curve {
        label: format!(
            "Moore: {:.4} * 2^((t - {}) / {:.2})",
            fit.coefficient(),
            fit.base_year,
            1.0 / fit.slope_log2
        ),
        color: "#1f5fbf",
        points,
    }
}

fn wright_curve(fit: &WrightFit, series: &VolumeSeries) -> Curve {
    Curve {
        label: format!(
            "Wright: {:.4e} * (n + {})^{:.3}",
            fit.scale_b, fit.volume_offset, fit.exponent_w
        ),
        color: "#c0392b",
        points: series
            .points()
            .iter()
            .map(|p| (p.end_time, fit.predict(p.ordinality)))
            .collect(),
    }
}

fn plot_title(kind: Kind) -> (String, String) {
    match kind {
        Kind::Mission => ("Lifespan by end of operations".into(), "end date (year)".into()),
        Kind::Satcat => ("Mean lifespan by year of end of operations".into(), "end year".into()),
    }
}

pub fn fit(args: &FitArgs) -> CliResult<()> {
    let data = prepare(&args.model)?;
    let policy = window_policy(&args.model);
    policy.validate()?;
    let space = ResidualSpace::from(args.model.residual_space);
    let kind = args.model.input.kind;

    let moore = if args.law != LawChoice::Wright {
        let windowed = data.moore_full.apply_window(&policy, Law::Moore)?;
        let (fit, diag) = fit_moore(&windowed.data, data.base_year, space)?;
        Some((fit, diag, windowed.trimmed))
    } else {
        None
    };
    let wright = if args.law != LawChoice::Moore {
        let windowed = data.wright_full.apply_window(&policy, Law::Wright)?;
        let (fit, diag) = fit_wright(&windowed.data, space)?;
        Some((fit, diag, windowed))
    } else {
        None
    };

    let report = FitReport {
        schema_version: SCHEMA_VERSION,
        command: "fit",
        kind,
        input: args.model.input.input.display().to_string(),
        operator: args.model.input.operator.as_deref(),
        residual_space: space,
        base_year: data.base_year,
        volume_offset: data.offset,
        series: series_summary(&data, kind),
        moore: moore
            .as_ref()
            .map(|(fit, diag, trimmed)| moore_section(*fit, diag, &policy, *trimmed)),
        wright: wright.as_ref().map(|(fit, diag, windowed)| {
            wright_section(*fit, diag, policy.wright_start_year, policy.end_year, windowed.trimmed)
        }),
    };

    let dir = &args.output.out_dir;
    if args.output.wants(Format::Json) {
        write_file(dir, "fit_report.json", &json(&report)?)?;
    }
    if args.output.wants(Format::Csv) {
        write_file(dir, "annual_aggregate.csv", &aggregate_csv(&data.aggregate)?)?;
        let mut rows: Vec<(&str, &[Residual])> = Vec::new();
        if let Some((_, diag, _)) = &moore {
            rows.push(("moore", &diag.residuals));
        }
        if let Some((_, diag, _)) = &wright {
            rows.push(("wright", &diag.residuals));
        }
        write_file(dir, "fit_residuals.csv", &residuals_csv(&rows)?)?;
    }
    if args.output.wants(Format::Svg) {
        let (title, x_label) = plot_title(kind);
        let mut curves = Vec::new();
        if let Some((fit, _, _)) = &moore {
            curves.push(moore_curve(fit));
        }
        if let Some((fit, _, windowed)) = &wright {
            curves.push(wright_curve(fit, &windowed.data));
        }
        let plot = Plot {
            title,
            x_label,
            points: data
                .moore_full
                .points()
                .iter()
                .map(|p| (p.end_time, p.lifespan))
                .collect(),
            curves,
        };
        write_file(dir, "fit_plot.svg", svg::render(&plot).as_bytes())?;
    }

    if let Some(m) = &report.moore {
        match m.doubling_time.years() {
            Some(years) => eprintln!(
                "Moore: slope {:.5}/yr, doubling time {years:.2} years",
                m.fit.slope_log2
            ),
            None => eprintln!("Moore: slope {:.5}/yr, no doubling", m.fit.slope_log2),
        }
    }
    if let Some(w) = &report.wright {
        eprintln!(
            "Wright: B {:.4e}, w {:.4}, factor {:.3} per volume doubling",
            w.fit.scale_b, w.fit.exponent_w, w.doubling_factor
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct Comparisons {
    log2: ComparisonReport,
    linear: ComparisonReport,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    schema_version: u32,
    command: &'static str,
    kind: Kind,
    input: String,
    operator: Option<&'a str>,
    /// Space the models were fitted in; RMS is reported in both.
    residual_space: ResidualSpace,
    base_year: f64,
    volume_offset: u32,
    series: SeriesSummary,
    moore: MooreSection,
    wright: WrightSection,
    comparison: Comparisons,
}

/// Fits both laws to the same windowed series and reports their RMS errors.
pub fn compare(args: &CompareArgs) -> CliResult<()> {
    if args.model.wright_window_start.is_some() {
        return Err(CliError::usage(
            "compare fits both laws over one window; use --window-start",
        ));
    }
    let data = prepare(&args.model)?;
    let mut policy = window_policy(&args.model);
    policy.wright_start_year = policy.moore_start_year;
    policy.validate()?;
    let space = ResidualSpace::from(args.model.residual_space);
    let kind = args.model.input.kind;

    let windowed = data.wright_full.apply_window(&policy, Law::Moore)?;
    let (moore, moore_diag) = fit_moore(&windowed.data.to_end_dated(), data.base_year, space)?;
    let (wright, wright_diag) = fit_wright(&windowed.data, space)?;
    let comparison = Comparisons {
        log2: compare_models(&windowed.data, &moore, &wright, ResidualSpace::Log2)?,
        linear: compare_models(&windowed.data, &moore, &wright, ResidualSpace::Linear)?,
    };
    let report = CompareReport {
        schema_version: SCHEMA_VERSION,
        command: "compare",
        kind,
        input: args.model.input.input.display().to_string(),
        operator: args.model.input.operator.as_deref(),
        residual_space: space,
        base_year: data.base_year,
        volume_offset: data.offset,
        series: series_summary(&data, kind),
        moore: moore_section(moore, &moore_diag, &policy, windowed.trimmed),
        wright: wright_section(
            wright,
            &wright_diag,
            policy.moore_start_year,
            policy.end_year,
            windowed.trimmed,
        ),
        comparison,
    };

    let dir = &args.output.out_dir;
    if args.output.wants(Format::Json) {
        write_file(dir, "compare_report.json", &json(&report)?)?;
    }
    if args.output.wants(Format::Csv) {
        let rows: [(&str, &[Residual]); 2] = [("moore", &moore_diag.residuals), ("wright", &wright_diag.residuals)];
        write_file(dir, "compare_residuals.csv", &residuals_csv(&rows)?)?;
    }
    if args.output.wants(Format::Svg) {
        let (title, x_label) = plot_title(kind);
        let plot = Plot {
            title,
            x_label,
            points: windowed
                .data
                .points()
                .iter()
                .map(|p| (p.end_time, p.lifespan))
                .collect(),
            curves: vec![moore_curve(&moore), wright_curve(&wright, &windowed.data)],
        };
        write_file(dir, "compare_plot.svg", svg::render(&plot).as_bytes())?;
    }
    let c = &report.comparison.log2;
    eprintln!(
        "log2 RMS: Moore {:.4}, Wright {:.4} over {} points; winner {:?}",
        c.moore_rms, c.wright_rms, c.n_points, c.winner
    );
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct ForecastArgs {
    /// A fit or compare report to take the models from.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Moore lifespan at the base year, in years.
    #[arg(long, requires_all = ["moore_doubling", "base_year"])]
    pub moore_coefficient: Option<f64>,
    /// Moore doubling period in years.
    #[arg(long, allow_negative_numbers = true, requires = "moore_coefficient")]
    pub moore_doubling: Option<f64>,
    #[arg(long)]
    pub base_year: Option<f64>,
    /// Wright scale B.
    #[arg(long, requires = "wright_exponent")]
    pub wright_scale: Option<f64>,
    /// Wright exponent w.
    #[arg(long, allow_negative_numbers = true, requires = "wright_scale")]
    pub wright_exponent: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub offset: u32,
    /// Lifespan to reach, in years.
    #[arg(long, allow_negative_numbers = true)]
    pub target_lifespan: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct MooreForecast {
    model: MooreFit,
    coefficient: f64,
    doubling_time: DoublingTime,
    /// Decimal year at which the model reaches the target.
    year: f64,
}

#[derive(Serialize)]
struct WrightForecast {
    model: WrightFit,
    /// Ordinality at which the model reaches the target (not rounded).
    ordinality: f64,
    /// Ordinality plus the model's volume offset.
    cumulative_volume: f64,
}

#[derive(Serialize)]
struct ForecastReport {
    schema_version: u32,
    command: &'static str,
    target_lifespan: f64,
    moore: Option<MooreForecast>,
    wright: Option<WrightForecast>,
}

fn models_from_report(path: &Path) -> CliResult<(Option<MooreFit>, Option<WrightFit>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let section = |name: &str| {
        value
            .get(name)
            .and_then(|s| s.get("fit"))
            .filter(|v| !v.is_null())
            .cloned()
    };
    let moore = section("moore").map(serde_json::from_value).transpose()?;
    let wright = section("wright").map(serde_json::from_value).transpose()?;
    Ok((moore, wright))
}

pub fn forecast(args: &ForecastArgs) -> CliResult<()> {
    let (mut moore, mut wright) = match &args.report {
        Some(path) => models_from_report(path)?,
        None => (None, None),
    };
    if let (Some(c), Some(d), Some(base)) = (args.moore_coefficient, args.moore_doubling, args.base_year) {
        if !(c.is_finite() && c > 0.0 && d.is_finite() && d != 0.0) {
            return Err(CliError::usage(
                "--moore-coefficient must be positive and --moore-doubling nonzero",
            ));
        }
        moore = Some(MooreFit::from_coefficient(base, c, d));
    }
    if let (Some(b), Some(w)) = (args.wright_scale, args.wright_exponent) {
        wright = Some(WrightFit::new(b, w, args.offset));
    }
    if moore.is_none() && wright.is_none() {
        return Err(CliError::usage(
            "no model given: pass --report, --moore-coefficient/--moore-doubling/--base-year, or --wright-scale/--wright-exponent",
        ));
    }
    let target = args.target_lifespan;
    let report = ForecastReport {
        schema_version: SCHEMA_VERSION,
        command: "forecast",
        target_lifespan: target,
        moore: moore
            .map(|m| -> CliResult<_> {
                Ok(MooreForecast {
                    model: m,
                    coefficient: m.coefficient(),
                    doubling_time: doubling_time(&m),
                    year: year_for_lifespan(&m, target)?,
                })
            })
            .transpose()?,
        wright: wright
            .map(|w| -> CliResult<_> {
                let ordinality = volume_for_lifespan(&w, target)?;
                Ok(WrightForecast {
                    model: w,
                    ordinality,
                    cumulative_volume: ordinality + f64::from(w.volume_offset),
                })
            })
            .transpose()?,
    };
    write_file(&args.out_dir, "forecast.json", &json(&report)?)?;
    if let Some(m) = &report.moore {
        eprintln!("Moore reaches {target} years in {:.2}", m.year);
    }
    if let Some(w) = &report.wright {
        eprintln!("Wright reaches {target} years at ordinality {:.1}", w.ordinality);
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct BiasArgs {
    /// First seed; seeds seed..seed+n_seeds-1 are run. Default 20181231.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub n_seeds: usize,
    /// Generating log2 lifespan at the start year. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub intercept: Option<f64>,
    /// Generating log2 growth per launch year. Default 0.1.
    #[arg(long, allow_negative_numbers = true)]
    pub slope: Option<f64>,
    /// Standard deviation of log2 lifespan noise. Default 0.3.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Default 60.
    #[arg(long)]
    pub launches_per_year: Option<u32>,
    /// Default 1960.
    #[arg(long)]
    pub start_year: Option<i32>,
    /// Craft still running at the start of this year are censored. Default 2018.
    #[arg(long)]
    pub observation_year: Option<i32>,
    /// Default: the year before the observation year.
    #[arg(long)]
    pub last_launch_year: Option<i32>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct BiasOutput<'a> {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    report: &'a BiasReport,
}

pub fn simulate_bias(args: &BiasArgs) -> CliResult<()> {
    let d = FleetScenario::default();
    let scenario = FleetScenario {
        true_intercept_log2: args.intercept.unwrap_or(d.true_intercept_log2),
        true_slope_log2: args.slope.unwrap_or(d.true_slope_log2),
        launches_per_year: args.launches_per_year.unwrap_or(d.launches_per_year),
        start_year: args.start_year.unwrap_or(d.start_year),
        observation_year: args.observation_year.unwrap_or(d.observation_year),
        last_launch_year: args.last_launch_year,
        lifespan_noise_sigma_log2: args.sigma.unwrap_or(d.lifespan_noise_sigma_log2),
        seed: args.seed.unwrap_or(d.seed),
    };
    let report = run_bias_experiment(&scenario, args.n_seeds)?;
    let output = BiasOutput {
        schema_version: SCHEMA_VERSION,
        command: "simulate-bias",
        report: &report,
    };
    write_file(&args.out_dir, "bias_report.json", &json(&output)?)?;
    eprintln!(
        "launch-binned slope below {} in {}/{} seeds; end-binned median {:?} (population end-time slope {:.5})",
        report.true_slope_log2,
        report.launch_below_true,
        report.n_seeds,
        report.end_summary.median,
        report.end_reference_slope_log2
    );
    Ok(())
}

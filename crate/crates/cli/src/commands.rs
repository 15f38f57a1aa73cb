use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use prodfn_core::{
    ces_like_member, ces_reduction, cobb_douglas_member, constancy_check, constancy_profile, crs_elasticities,
    default_share, fit_system, fundamental_invariant_capital, fundamental_invariant_labor, load_series,
    normalize_base100, parse_model, render_series_csv, ExponentialModel, FitError, IngestError, MathError,
    ModelSpec, ParseError, ProductionFunction, Schema, TimeSeries, Warning,
};
use serde_json::Value;
use thiserror::Error;

use crate::json::{fmt_f64, Json};
use crate::schema::{diagnostics_json, function_json, model_json, warning_json, FunctionDoc, ModelDoc};
use crate::{CheckArgs, Command, DeriveArgs, ExportArgs, Family, FitArgs, ModelSourceArgs, SimulateArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Ingest { path: PathBuf, source: IngestError },
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: malformed JSON: {message}")]
    Json { path: PathBuf, message: String },
    #[error(transparent)]
    Math(#[from] MathError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) | CliError::Fit(FitError::Model(_)) => 4,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            4 => "math",
            _ => "data",
        }
    }

    pub fn to_json(&self) -> Json {
        Json::obj().with(
            "error",
            Json::obj()
                .with("kind", self.kind())
                .with("exit_code", self.exit_code())
                .with("message", self.to_string()),
        )
    }
}

/// Command result: what goes to stdout and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, exit_code: 0 }
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Fit(a) => cmd_fit(a),
        Command::Derive(a) => cmd_derive(a),
        Command::Check(a) => cmd_check(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Export(a) => cmd_export(a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load(path: &Path, schema: &Schema, normalize: bool) -> Result<Vec<TimeSeries>, CliError> {
    let file = File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let series: Vec<TimeSeries> =
        load_series(file, schema).map_err(|source| CliError::Ingest { path: path.to_path_buf(), source })?;
    log::info!("loaded {} series of {} rows from {}", series.len(), series[0].len(), path.display());
    Ok(if normalize {
        series.iter().map(normalize_base100).collect()
    } else {
        series
    })
}

pub fn cmd_fit(a: &FitArgs) -> Result<Outcome, CliError> {
    let schema = Schema::new(&a.year_col)
        .column(&a.labor_col, "labor")
        .column(&a.capital_col, "capital")
        .column(&a.output_col, "output");
    let s = load(&a.csv, &schema, a.normalize)?;
    let fit = fit_system(&s[0], &s[1], &s[2])?;
    let report = Json::obj()
        .with("command", "fit")
        .with("normalized", a.normalize)
        .with("base_year", fit.model.base_year())
        .with("model", model_json(&fit.model))
        .with(
            "diagnostics",
            Json::obj()
                .with("labor", diagnostics_json(&fit.labor))
                .with("capital", diagnostics_json(&fit.capital))
                .with("output", diagnostics_json(&fit.output)),
        );
    Ok(Outcome::ok(report.render()))
}

fn json_doc(path: &Path, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json { path: path.to_path_buf(), message: e.to_string() })
}

fn model_from_json(path: &Path, text: &str) -> Result<ExponentialModel, CliError> {
    let v = json_doc(path, text)?;
    let v = v.get("model").cloned().unwrap_or(v);
    let doc: ModelDoc =
        serde_json::from_value(v).map_err(|e| CliError::Json { path: path.to_path_buf(), message: e.to_string() })?;
    Ok(doc.to_model()?)
}

fn model_from_spec(path: &Path, text: &str) -> Result<ExponentialModel, CliError> {
    let spec: ModelSpec = parse_model(text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })?;
    Ok(spec.to_model()?)
}

/// Loads a model from JSON when the file looks like JSON, else from the model language.
fn model_from_any(path: &Path) -> Result<ExponentialModel, CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        model_from_json(path, &text)
    } else {
        model_from_spec(path, &text)
    }
}

fn model_from_source(src: &ModelSourceArgs) -> Result<ExponentialModel, CliError> {
    match (&src.from_fit, &src.from_spec) {
        (Some(p), _) => model_from_json(p, &read(p)?),
        (None, Some(p)) => model_from_spec(p, &read(p)?),
        (None, None) => Err(CliError::Usage("one of --from-fit or --from-spec is required".into())),
    }
}

/// Evenly spaced times from `START:STOP:STEP`, inclusive of STOP when it lies on the grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid grid `{spec}`: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected START:STOP:STEP"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| bad("not a finite number"))?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is before start"));
    }
    let n = ((stop - start) / step + 1e-9).floor();
    if n > 1e7 {
        return Err(bad("more than 10^7 points"));
    }
    Ok((0..=n as usize).map(|i| start + i as f64 * step).collect())
}

fn check_alpha(alpha: f64) -> Result<f64, CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(CliError::Usage(format!("--alpha must lie strictly inside (0, 1), got {alpha}")))
    }
}

pub fn cmd_derive(a: &DeriveArgs) -> Result<Outcome, CliError> {
    let model = model_from_source(&a.source)?;
    if !(a.horizon >= 0.0 && a.horizon.is_finite()) {
        return Err(CliError::Usage(format!("--horizon must be non-negative, got {}", a.horizon)));
    }
    let grid = parse_grid(&format!("0:{}:{}", a.horizon, a.step))?;
    let mut warnings: Vec<Warning> = Vec::new();

    let crs = crs_elasticities(&model).ok();
    if let Some(w) = crs.and_then(|e| e.warning) {
        warnings.push(w);
    }
    let alpha = match (a.family, a.alpha) {
        (Family::Fundamental, _) => None,
        (_, Some(x)) => Some(check_alpha(x)?),
        (_, None) => {
            let (x, w) = default_share(&model);
            warnings.extend(w);
            Some(x)
        }
    };

    let functions: Vec<ProductionFunction> = match a.family {
        Family::Fundamental => vec![
            fundamental_invariant_labor(&model)?.into(),
            fundamental_invariant_capital(&model)?.into(),
        ],
        Family::CobbDouglas => vec![cobb_douglas_member(&model, alpha.unwrap())?.into()],
        Family::CesLike => vec![ces_like_member(&model, alpha.unwrap())?.into()],
        Family::Ces => {
            let r = ces_reduction(&model, alpha.unwrap(), a.tol)?;
            warnings.extend(r.warning);
            vec![r.function.into()]
        }
    };
    for w in &warnings {
        log::warn!("{w}");
    }

    let entries = functions
        .iter()
        .map(|f| {
            Json::obj()
                .with("function", function_json(f))
                .with("max_relative_deviation", constancy_check(f, &model, &grid))
        })
        .collect::<Vec<_>>();
    let report = Json::obj()
        .with("command", "derive")
        .with("family", a.family.name())
        .with("model", model_json(&model))
        .with("alpha", alpha)
        .with(
            "crs_elasticities",
            crs.map_or(Json::Null, |e| Json::obj().with("alpha", e.alpha).with("beta", e.beta)),
        )
        .with("functions", entries)
        .with(
            "constancy_grid",
            Json::obj()
                .with("start", 0.0)
                .with("stop", a.horizon)
                .with("step", a.step)
                .with("points", grid.len()),
        )
        .with("warnings", warnings.iter().map(warning_json).collect::<Vec<_>>());
    Ok(Outcome::ok(report.render()))
}

/// Accepts a function object, a `{"function": …}` entry, or a derive report.
fn function_from_json(path: &Path) -> Result<ProductionFunction, CliError> {
    let v = json_doc(path, &read(path)?)?;
    let v = if let Some(list) = v.get("functions") {
        list.get(0)
            .and_then(|e| e.get("function"))
            .cloned()
            .ok_or_else(|| CliError::Json { path: path.to_path_buf(), message: "report has no functions".into() })?
    } else if let Some(f) = v.get("function") {
        f.clone()
    } else {
        v
    };
    let doc: FunctionDoc =
        serde_json::from_value(v).map_err(|e| CliError::Json { path: path.to_path_buf(), message: e.to_string() })?;
    doc.to_function().map_err(|e| CliError::Json { path: path.to_path_buf(), message: e.to_string() })
}

fn grid_json(spec: &str, points: usize) -> Json {
    Json::obj().with("spec", spec).with("points", points)
}

pub fn cmd_check(a: &CheckArgs) -> Result<Outcome, CliError> {
    let grid = parse_grid(&a.grid)?;
    let model = model_from_any(&a.model)?;
    let f = function_from_json(&a.function)?;
    let rows = constancy_profile(&f, &model, &grid);
    let max_dev = constancy_check(&f, &model, &grid);
    let pass = max_dev <= a.tol;
    if !pass {
        log::warn!("max relative deviation {max_dev:e} exceeds {:e}", a.tol);
    }

    if let Some(path) = &a.table {
        let mut csv = String::from("t,Y_model,Y_fn,rel_dev\n");
        for r in &rows {
            writeln!(csv, "{},{},{},{}", fmt_f64(r.t), fmt_f64(r.y_model), fmt_f64(r.y_function), fmt_f64(r.rel_dev))
                .unwrap();
        }
        fs::write(path, csv).map_err(|source| CliError::Write { path: path.clone(), source })?;
    }

    let table = rows
        .iter()
        .map(|r| {
            Json::obj()
                .with("t", r.t)
                .with("Y_model", r.y_model)
                .with("Y_fn", r.y_function)
                .with("rel_dev", r.rel_dev)
        })
        .collect::<Vec<_>>();
    let report = Json::obj()
        .with("command", "check")
        .with("model", model_json(&model))
        .with("function", function_json(&f))
        .with("grid", grid_json(&a.grid, grid.len()))
        .with("tol", a.tol)
        .with("max_relative_deviation", max_dev)
        .with("pass", pass)
        .with("table", table);
    Ok(Outcome {
        stdout: report.render(),
        exit_code: if pass { 0 } else { 1 },
    })
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let grid = parse_grid(&a.grid)?;
    let model = model_from_any(&a.model)?;
    let mut csv = String::from("t,L,K,Y\n");
    for t in grid {
        let s = model.trajectory(t)?;
        writeln!(csv, "{},{},{},{}", fmt_f64(t), fmt_f64(s.labor), fmt_f64(s.capital), fmt_f64(s.output)).unwrap();
    }
    Ok(Outcome::ok(csv))
}

pub fn cmd_export(a: &ExportArgs) -> Result<Outcome, CliError> {
    let schema = a.cols.iter().fold(Schema::new(&a.year_col), |s, c| s.column(c, c));
    let series = load(&a.csv, &schema, a.normalize)?;
    let csv = render_series_csv(&a.year_col, &series)
        .map_err(|source| CliError::Ingest { path: a.csv.clone(), source })?;
    Ok(Outcome::ok(csv))
}

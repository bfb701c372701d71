//! Front end for `coxnet-core`: argument handling, the four subcommands and
//! their CSV output. `main.rs` only maps [`CliError`] onto exit statuses.

pub mod csv;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coxnet_core::analytic::{ase, optimal_p, success_probability};
use coxnet_core::simulate::{default_window, estimate_pc, estimate_pc_thresholds, EstimateRecord};
use coxnet_core::{AnalyticError, NetworkParams, ParamError, PcModel, QuadratureSpec, RawParams, SimError};
use thiserror::Error;

use crate::csv::{Cell, Table};
use crate::sweep::{db_to_linear, Axis, SweepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Analytic(AnalyticError),
    #[error("validation failed: analytic pc {pc} outside 99% interval [{ci_low}, {ci_high}]")]
    ValidationFailed { pc: f64, ci_low: f64, ci_high: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Analytic(AnalyticError::Param(_)) => 2,
            CliError::Analytic(AnalyticError::Quadrature(_)) => 3,
            CliError::Analytic(AnalyticError::NonUnimodalObjective { .. }) => 4,
            CliError::ValidationFailed { .. } => 5,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::Param(p) => p.into(),
            other => CliError::Analytic(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "coxnet",
    version,
    about = "Success probability and ASE of a Cox bipolar vehicular network"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success probability and ASE at one parameter point.
    Pc(PointArgs),
    /// Evaluate the models along one swept parameter.
    Sweep(SweepArgs),
    /// ALOHA transmission probability that maximizes the ASE.
    Optp(OptpArgs),
    /// Compare the analytic Cox value with a Monte-Carlo estimate.
    Validate(ValidateArgs),
}

/// Config file plus per-key overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// `key=value` config file (keys: mu_l lambda_v p d alpha p_t sigma2 beta).
    pub config: Option<PathBuf>,
    /// SINR threshold in dB (overrides `beta`).
    #[arg(long = "beta-db", allow_hyphen_values = true)]
    pub beta_db: Option<f64>,
    /// Line density in lines per km.
    #[arg(long = "mu-l")]
    pub mu_l: Option<f64>,
    /// Node density per line in nodes per km.
    #[arg(long = "lambda-v")]
    pub lambda_v: Option<f64>,
    /// ALOHA transmission probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Link distance in km.
    #[arg(long)]
    pub d: Option<f64>,
    /// Path-loss exponent (must exceed 2).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Noise power.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Transmit power.
    #[arg(long = "pt")]
    pub p_t: Option<f64>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<NetworkParams, CliError> {
        let mut raw = RawParams::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            raw = raw.merge_config(&text)?;
        }
        let overrides = [
            (self.mu_l, &mut raw.mu_l),
            (self.lambda_v, &mut raw.lambda_v),
            (self.p, &mut raw.p),
            (self.d, &mut raw.d),
            (self.alpha, &mut raw.alpha),
            (self.sigma2, &mut raw.sigma2),
            (self.p_t, &mut raw.p_t),
            (self.beta_db.map(db_to_linear), &mut raw.beta),
        ];
        for (value, slot) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        Ok(raw.validate()?)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct McArgs {
    /// Monte-Carlo trials per point (enables the MC columns).
    #[arg(long = "mc", value_name = "N_TRIALS")]
    pub n_trials: Option<u64>,
    /// Seed for the trial streams.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Simulation window radius in km [default: max(2, 200·d)].
    #[arg(long = "window", value_name = "KM")]
    pub window: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Model to evaluate; repeatable [default: cox].
    #[arg(long = "model", value_name = "cox|1d|2d")]
    pub models: Vec<PcModel>,
    /// Also report the ASE-optimal p for each model.
    #[arg(long = "p-star")]
    pub p_star: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// `axis:start:stop:steps` with axis one of beta_db, mu_l, lambda_v, p.
    #[arg(long = "sweep", allow_hyphen_values = true)]
    pub sweep: SweepSpec,
}

#[derive(Debug, Clone, Args)]
pub struct OptpArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Model to optimize; repeatable [default: cox, 1d, 2d].
    #[arg(long = "model", value_name = "cox|1d|2d")]
    pub models: Vec<PcModel>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Monte-Carlo trials.
    #[arg(long = "mc", value_name = "N_TRIALS", default_value_t = 100_000)]
    pub n_trials: u64,
    /// Seed for the trial streams.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Simulation window radius in km [default: max(2, 200·d)].
    #[arg(long = "window", value_name = "KM")]
    pub window: Option<f64>,
}

pub const POINT_COLUMNS: [&str; 11] = [
    "axis_name",
    "axis_value",
    "model",
    "pc",
    "ase",
    "p_star",
    "pc_hat",
    "ci_low",
    "ci_high",
    "n_trials",
    "seed",
];

/// Result of a subcommand: CSV for stdout, an optional summary for stderr,
/// and an optional failure that sets the exit status after printing.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub summary: Option<String>,
    pub failure: Option<CliError>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            summary: None,
            failure: None,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let spec = QuadratureSpec::default();
    match &cli.command {
        Command::Pc(args) => cmd_pc(args, &spec).map(Into::into),
        Command::Sweep(args) => cmd_sweep(args, &spec).map(Into::into),
        Command::Optp(args) => cmd_optp(args, &spec).map(Into::into),
        Command::Validate(args) => cmd_validate(args, &spec),
    }
}

fn models_or(models: &[PcModel], default: &[PcModel]) -> Vec<PcModel> {
    if models.is_empty() {
        default.to_vec()
    } else {
        models.to_vec()
    }
}

fn point_row(
    axis: Option<(Axis, f64)>,
    params: &NetworkParams,
    model: PcModel,
    want_p_star: bool,
    mc: Option<&EstimateRecord>,
    spec: &QuadratureSpec,
) -> Result<Vec<Cell>, CliError> {
    let r = ase(params, model, spec)?;
    let p_star = if want_p_star {
        Some(optimal_p(params, model, spec)?.p_star)
    } else {
        None
    };
    // MC columns annotate Cox rows only.
    let mc = mc.filter(|_| model == PcModel::Cox);
    Ok(vec![
        axis.map(|(a, _)| a.name()).into(),
        axis.map(|(_, v)| v).into(),
        model.label().into(),
        r.pc.into(),
        r.ase.into(),
        p_star.into(),
        mc.map(|m| m.pc_hat).into(),
        mc.map(|m| m.ci_low).into(),
        mc.map(|m| m.ci_high).into(),
        mc.map(|m| m.n_trials).into(),
        mc.map(|m| m.seed).into(),
    ])
}

fn window_for(window: Option<f64>, params: &NetworkParams) -> f64 {
    window.unwrap_or_else(|| default_window(params))
}

pub fn cmd_pc(args: &PointArgs, spec: &QuadratureSpec) -> Result<Table, CliError> {
    let params = args.params.resolve()?;
    let models = models_or(&args.models, &[PcModel::Cox]);
    let mc = match args.mc.n_trials {
        Some(n) if models.contains(&PcModel::Cox) => Some(estimate_pc(
            &params,
            window_for(args.mc.window, &params),
            n,
            args.mc.seed,
        )?),
        _ => None,
    };
    let mut table = Table::new(&POINT_COLUMNS);
    for model in models {
        table.push(point_row(None, &params, model, args.p_star, mc.as_ref(), spec)?);
    }
    Ok(table)
}

pub fn cmd_sweep(args: &SweepArgs, spec: &QuadratureSpec) -> Result<Table, CliError> {
    let base = args.point.params.resolve()?;
    let models = models_or(&args.point.models, &[PcModel::Cox]);
    let sweep = args.sweep;
    let values = sweep.values();
    let points = values
        .iter()
        .map(|&v| sweep.axis.apply(&base, v))
        .collect::<Result<Vec<_>, _>>()?;

    let mc = args.point.mc.clone();
    let estimates: Vec<Option<EstimateRecord>> = match mc.n_trials {
        Some(n) if models.contains(&PcModel::Cox) => {
            let window = window_for(mc.window, &base);
            if sweep.axis == Axis::BetaDb {
                // One set of trials serves every threshold.
                let betas: Vec<f64> = points.iter().map(|p| p.beta()).collect();
                estimate_pc_thresholds(&base, &betas, window, n, mc.seed)?
                    .into_iter()
                    .map(Some)
                    .collect()
            } else {
                points
                    .iter()
                    .map(|p| estimate_pc(p, window, n, mc.seed).map(Some))
                    .collect::<Result<_, _>>()?
            }
        }
        _ => vec![None; points.len()],
    };

    let mut table = Table::new(&POINT_COLUMNS);
    for ((value, params), estimate) in values.iter().zip(&points).zip(&estimates) {
        for &model in &models {
            table.push(point_row(
                Some((sweep.axis, *value)),
                params,
                model,
                args.point.p_star,
                estimate.as_ref(),
                spec,
            )?);
        }
    }
    Ok(table)
}

pub fn cmd_optp(args: &OptpArgs, spec: &QuadratureSpec) -> Result<Table, CliError> {
    let params = args.params.resolve()?;
    let models = models_or(&args.models, &PcModel::ALL);
    let mut table = Table::new(&["model", "p_star", "ase_star", "pc_star", "lambda_active", "iterations"]);
    for model in models {
        let opt = optimal_p(&params, model, spec)?;
        let at = params.with(|raw| raw.p = opt.p_star)?;
        let r = ase(&at, model, spec)?;
        table.push(vec![
            model.label().into(),
            opt.p_star.into(),
            opt.ase_star.into(),
            r.pc.into(),
            r.lambda_active.into(),
            (model == PcModel::Cox).then_some(opt.iterations as u64).into(),
        ]);
    }
    Ok(table)
}

pub const VALIDATE_COLUMNS: [&str; 15] = [
    "mu_l", "lambda_v", "p", "d", "alpha", "beta", "pc", "pc_hat", "ci_low", "ci_high", "gap", "n_trials", "seed",
    "window", "verdict",
];

pub fn cmd_validate(args: &ValidateArgs, spec: &QuadratureSpec) -> Result<Report, CliError> {
    let params = args.params.resolve()?;
    let window = window_for(args.window, &params);
    let pc = success_probability(&params, PcModel::Cox, spec)?;
    let est = estimate_pc(&params, window, args.n_trials, args.seed)?;
    let pass = est.contains(pc);
    let gap = (est.pc_hat - pc).abs();
    let mut table = Table::new(&VALIDATE_COLUMNS);
    table.push(vec![
        params.mu_l().into(),
        params.lambda_v().into(),
        params.p().into(),
        params.d().into(),
        params.alpha().into(),
        params.beta().into(),
        pc.into(),
        est.pc_hat.into(),
        est.ci_low.into(),
        est.ci_high.into(),
        gap.into(),
        est.n_trials.into(),
        est.seed.into(),
        window.into(),
        if pass { "PASS" } else { "FAIL" }.into(),
    ]);
    let summary = format!(
        "{}: analytic pc {} {} 99% interval [{}, {}] from {} trials (|gap| {})",
        if pass { "PASS" } else { "FAIL" },
        csv::fmt_num(pc),
        if pass { "inside" } else { "outside" },
        csv::fmt_num(est.ci_low),
        csv::fmt_num(est.ci_high),
        est.n_trials,
        csv::fmt_num(gap),
    );
    Ok(Report {
        table,
        summary: Some(summary),
        failure: (!pass).then_some(CliError::ValidationFailed {
            pc,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
        }),
    })
}

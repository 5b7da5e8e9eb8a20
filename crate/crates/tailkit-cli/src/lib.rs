//! Command-line front end for the product-tail asymptotics library.
//!
//! `tailkit` evaluates closed-form tail asymptotics on threshold grids
//! (`asym ...`), computes weak tail dependence coefficients (`chi`), runs
//! verification sweeps of every closed form against its independent
//! numerical oracle (`verify ...`), and emits raw oracle values
//! (`oracle quad`, `oracle mc`).
//!
//! All results go to standard output as CSV with a header row and
//! 17-significant-digit values, so emitted numbers re-parse to the exact
//! binary float that produced them.  Diagnostics go to standard error.
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! (quadrature) failure.
//!
//! Inputs come from flags plus one JSON risk-spec document (see
//! [`config::RiskSpecDocument`]).  The only environment variable read is
//! `TAILKIT_THREADS`, which caps sweep/Monte-Carlo parallelism; results
//! are byte-identical for any thread count.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use tailkit::brownian::bm_sup_tail;
use tailkit::elliptical::{
    eghd_joint_tail, elliptical_joint_tail, scaled_elliptical_joint_tail, weak_tail_dependence,
    ChiVariant,
};
use tailkit::laplace::laplace_consistency_check;
use tailkit::oracle::mc::mc_product_tail;
use tailkit::oracle::quad::{
    density_product_quadrature_with, survival_product_quadrature_with,
};
use tailkit::oracle::sweep::ratio_sweep;
use tailkit::product::{
    check_dependence_condition, gaussian_product_tail, m_fold_product_tail,
    product_pdf_asymptotic, product_tail_dependent,
};
use tailkit::tail::{AsymptoticForm, DependenceSpec};
use tailkit::TailError;

pub mod config;

use config::RiskSpecDocument;

/// Failure of a command: either the configuration/usage is wrong (exit 2)
/// or a numerical engine could not reach its tolerance (exit 3).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    /// Exit code for this failure.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn prefixed(self, field: &str) -> CliError {
        match self {
            CliError::Config(m) => CliError::Config(format!("{field}: {m}")),
            other => other,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<TailError> for CliError {
    fn from(e: TailError) -> Self {
        match e {
            TailError::QuadratureFailure { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tailkit",
    version,
    about = "Closed-form tail asymptotics for products of Weibull-type risks, \
             with verification oracles",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form asymptotic on a threshold grid.
    #[command(subcommand)]
    Asym(AsymCommand),
    /// Weak tail dependence coefficient chi.
    Chi(ChiArgs),
    /// Verify closed forms against independent numerical oracles.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Raw oracle values (adaptive quadrature, Monte Carlo).
    #[command(subcommand)]
    Oracle(OracleCommand),
}

/// Flags shared by every grid-evaluating subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON risk-spec document.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Threshold to evaluate at; repeatable.
    #[arg(long = "x", value_name = "X", allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Name of a threshold grid from the config document.
    #[arg(long, value_name = "NAME", conflicts_with = "x")]
    grid: Option<String>,
}

impl CommonArgs {
    fn load_config(&self) -> Result<Option<RiskSpecDocument>, CliError> {
        self.config
            .as_deref()
            .map(RiskSpecDocument::load)
            .transpose()
    }

    fn require_config(&self) -> Result<RiskSpecDocument, CliError> {
        match &self.config {
            Some(path) => RiskSpecDocument::load(path),
            None => Err(CliError::Config(
                "this subcommand needs --config <FILE>".to_string(),
            )),
        }
    }

    fn thresholds(&self, doc: Option<&RiskSpecDocument>) -> Result<Vec<f64>, CliError> {
        if let Some(name) = &self.grid {
            let doc = doc.ok_or_else(|| {
                CliError::Config("--grid names a grid in the config; pass --config too".to_string())
            })?;
            return doc.grid(name);
        }
        if self.x.is_empty() {
            return Err(CliError::Config(
                "no thresholds given: pass --x (repeatable) or --grid <NAME>".to_string(),
            ));
        }
        for &x in &self.x {
            if !x.is_finite() {
                return Err(CliError::Config(format!(
                    "--x must be finite, got {x}"
                )));
            }
        }
        Ok(self.x.clone())
    }
}

#[derive(Subcommand)]
enum AsymCommand {
    /// Survival asymptotic of a product of two independent tails.
    Product {
        #[command(flatten)]
        common: CommonArgs,
        /// Name of the first tail in the config.
        #[arg(long, value_name = "NAME")]
        tail1: String,
        /// Name of the second tail in the config.
        #[arg(long, value_name = "NAME")]
        tail2: String,
    },
    /// Survival asymptotic of an m-fold product of one tail.
    Mfold {
        #[command(flatten)]
        common: CommonArgs,
        /// Name of the tail in the config.
        #[arg(long, value_name = "NAME")]
        tail: String,
        /// Number of factors (1..=64).
        #[arg(long)]
        m: u32,
    },
    /// Survival asymptotic of a two-factor product under FGM dependence.
    Fgm {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
        /// FGM parameter in [-1, 1].
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Survival asymptotic of the product of two correlated standard
    /// Gaussian coordinates.
    Gaussian {
        #[command(flatten)]
        common: CommonArgs,
        /// Correlation in (-1, 1).
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
    },
    /// Density (not survival) asymptotic of a two-factor product.
    Pdf {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
    },
    /// Tail of the Brownian supremum over an independent random horizon.
    BmSup {
        #[command(flatten)]
        common: CommonArgs,
        /// Name of the horizon's tail in the config.
        #[arg(long, value_name = "NAME")]
        time: String,
    },
    /// Joint exceedance tail of an elliptical pair (config `elliptical`
    /// section; a `scale` entry selects the scale-mixture form).
    Elliptical {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Joint exceedance tail of the elliptical generalized hyperbolic
    /// pair (config `gig` section).
    Eghd {
        #[command(flatten)]
        common: CommonArgs,
        /// Correlation in (-1, 1).
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
    },
}

#[derive(Args)]
struct ChiArgs {
    /// Which chi formula to use.
    #[arg(long, value_enum)]
    variant: ChiVariantArg,
    /// Gumbel self-scaling exponent (variant `theta` only).
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// First tail exponent (variant `product` only).
    #[arg(long)]
    p1: Option<f64>,
    /// Second tail exponent (variant `product` only).
    #[arg(long)]
    p2: Option<f64>,
    /// Correlation in (-1, 1); repeatable.
    #[arg(long = "rho", value_name = "RHO", allow_negative_numbers = true, required = true)]
    rho: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChiVariantArg {
    /// chi from an explicit exponent theta.
    Theta,
    /// chi of a two-factor Weibull-type product.
    Product,
    /// chi of the elliptical generalized hyperbolic pair.
    Eghd,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exact-vs-asymptotic ratio sweep for a two-factor product.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
    },
    /// Collapsed form against direct quadrature of its saddle integrand.
    Laplace {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
    },
    /// Check the config's dependence factor against its declared limit
    /// profile on the saddle window.
    Depcond {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
        /// Acceptance threshold for the final deviation.
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Survival (or, with --density, density) of the product by adaptive
    /// quadrature.
    Quad {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
        /// Integrate the product density instead of the survival function
        /// (independent factors only).
        #[arg(long)]
        density: bool,
    },
    /// Monte Carlo exceedance estimate (config `mc` section: n, seed).
    Mc {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "NAME")]
        tail1: String,
        #[arg(long, value_name = "NAME")]
        tail2: String,
    },
}

/// Runs one command line.  `argv[0]` is the program name.  CSV goes to
/// `stdout` in one buffered write so rows always appear in input order;
/// diagnostics go to `stderr`.  Returns the process exit code.
pub fn run_command(
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{rendered}");
                0
            } else {
                let _ = write!(stderr, "{rendered}");
                2
            };
        }
    };
    match with_thread_pool(|| dispatch(&cli.command)) {
        Ok(csv) => {
            let _ = write!(stdout, "{csv}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

/// Applies `TAILKIT_THREADS` if set: the closure runs inside a rayon pool
/// of exactly that many threads, so sweep and Monte Carlo parallelism is
/// capped.  Unset means the default pool (available cores).  Results do
/// not depend on the thread count; only wall time does.
fn with_thread_pool<T: Send>(
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    match std::env::var("TAILKIT_THREADS") {
        Err(std::env::VarError::NotPresent) => f(),
        Err(e) => Err(CliError::Config(format!("TAILKIT_THREADS: {e}"))),
        Ok(raw) => {
            let threads: usize = raw.trim().parse().map_err(|_| {
                CliError::Config(format!(
                    "TAILKIT_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if threads == 0 {
                return Err(CliError::Config(
                    "TAILKIT_THREADS must be at least 1".to_string(),
                ));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(f)
        }
    }
}

fn dispatch(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Asym(cmd) => run_asym(cmd),
        Command::Chi(args) => run_chi(args),
        Command::Verify(cmd) => run_verify(cmd),
        Command::Oracle(cmd) => run_oracle(cmd),
    }
}

/// One float, 17 significant digits: enough that re-parsing recovers the
/// exact binary value.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_flag(flag: bool) -> &'static str {
    if flag {
        "1"
    } else {
        "0"
    }
}

/// Evaluates a form over the thresholds into a three-column CSV.
fn form_csv(
    form: &AsymptoticForm,
    thresholds: &[f64],
    value_column: &str,
) -> Result<String, CliError> {
    let mut out = format!("x,{value_column},pre_asymptotic_flag\n");
    for &x in thresholds {
        let eval = form.eval_log_survival(x)?;
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(x),
            fmt_float(eval.log_value),
            fmt_flag(eval.pre_asymptotic)
        ));
    }
    Ok(out)
}

fn run_asym(cmd: &AsymCommand) -> Result<String, CliError> {
    match cmd {
        AsymCommand::Product {
            common,
            tail1,
            tail2,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let form = product_tail_dependent(
                &doc.tail(tail1)?,
                &doc.tail(tail2)?,
                &DependenceSpec::Independent,
            )?;
            form_csv(&form, &xs, "log_survival")
        }
        AsymCommand::Mfold { common, tail, m } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let form = m_fold_product_tail(&doc.tail(tail)?, *m)?;
            form_csv(&form, &xs, "log_survival")
        }
        AsymCommand::Fgm {
            common,
            tail1,
            tail2,
            tau,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let form = product_tail_dependent(
                &doc.tail(tail1)?,
                &doc.tail(tail2)?,
                &DependenceSpec::Fgm { tau: *tau },
            )?;
            form_csv(&form, &xs, "log_survival")
        }
        AsymCommand::Gaussian { common, rho } => {
            let doc = common.load_config()?;
            let xs = common.thresholds(doc.as_ref())?;
            let form = gaussian_product_tail(*rho)?;
            form_csv(&form, &xs, "log_survival")
        }
        AsymCommand::Pdf {
            common,
            tail1,
            tail2,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let form = product_pdf_asymptotic(&doc.tail(tail1)?, &doc.tail(tail2)?)?;
            form_csv(&form, &xs, "log_density")
        }
        AsymCommand::BmSup { common, time } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let form = bm_sup_tail(&doc.tail(time)?)?;
            form_csv(&form, &xs, "log_survival")
        }
        AsymCommand::Elliptical { common } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let section = doc.elliptical.as_ref().ok_or_else(|| {
                CliError::Config(
                    "asym elliptical needs an `elliptical` section in the config".to_string(),
                )
            })?;
            let spec = section.build(&doc)?;
            let form = if spec.scale().is_some() {
                scaled_elliptical_joint_tail(&spec)?
            } else {
                elliptical_joint_tail(spec.radial(), spec.rho())?
            };
            form_csv(&form, &xs, "log_joint_survival")
        }
        AsymCommand::Eghd { common, rho } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let gig = doc
                .gig
                .as_ref()
                .ok_or_else(|| {
                    CliError::Config(
                        "asym eghd needs a `gig` section in the config".to_string(),
                    )
                })?
                .params()?;
            let form = eghd_joint_tail(&gig, *rho)?;
            form_csv(&form, &xs, "log_joint_survival")
        }
    }
}

fn run_chi(args: &ChiArgs) -> Result<String, CliError> {
    let reject = |flag: &str, variant: &str| {
        Err(CliError::Config(format!(
            "--{flag} does not apply to --variant {variant}"
        )))
    };
    let (label, variant) = match args.variant {
        ChiVariantArg::Theta => {
            if args.p1.is_some() || args.p2.is_some() {
                return reject("p1/--p2", "theta");
            }
            let theta = args.theta.ok_or_else(|| {
                CliError::Config("--variant theta needs --theta".to_string())
            })?;
            ("theta", ChiVariant::ThetaForm { theta })
        }
        ChiVariantArg::Product => {
            if args.theta.is_some() {
                return reject("theta", "product");
            }
            let (p1, p2) = match (args.p1, args.p2) {
                (Some(p1), Some(p2)) => (p1, p2),
                _ => {
                    return Err(CliError::Config(
                        "--variant product needs --p1 and --p2".to_string(),
                    ))
                }
            };
            ("product", ChiVariant::ProductForm { p1, p2 })
        }
        ChiVariantArg::Eghd => {
            if args.theta.is_some() || args.p1.is_some() || args.p2.is_some() {
                return reject("theta/--p1/--p2", "eghd");
            }
            ("eghd", ChiVariant::Eghd)
        }
    };
    let mut out = String::from("variant,rho,chi\n");
    for &rho in &args.rho {
        let chi = weak_tail_dependence(variant, rho)?;
        out.push_str(&format!("{label},{},{}\n", fmt_float(rho), fmt_float(chi)));
    }
    Ok(out)
}

fn run_verify(cmd: &VerifyCommand) -> Result<String, CliError> {
    match cmd {
        VerifyCommand::Sweep {
            common,
            tail1,
            tail2,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let dep = doc.dependence_spec()?;
            let settings = doc.quad_settings()?;
            let d1 = doc.distribution(tail1)?;
            let d2 = doc.distribution(tail2)?;
            let form = product_tail_dependent(&doc.tail(tail1)?, &doc.tail(tail2)?, &dep)?;
            let rows = ratio_sweep(
                &form,
                |x| survival_product_quadrature_with(&d1, &d2, &dep, x, &settings),
                &xs,
            )?;
            let mut out =
                String::from("x,log_exact,log_asym,ratio,abs_log_gap,pre_asymptotic_flag\n");
            for row in rows {
                let row = row?;
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_float(row.x),
                    fmt_float(row.log_exact),
                    fmt_float(row.log_asymptotic),
                    fmt_float(row.ratio),
                    fmt_float(row.abs_log_gap),
                    fmt_flag(row.pre_asymptotic)
                ));
            }
            Ok(out)
        }
        VerifyCommand::Laplace {
            common,
            tail1,
            tail2,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let report = laplace_consistency_check(&doc.tail(tail1)?, &doc.tail(tail2)?, &xs)?;
            let mut out = String::from("x,log_asym,log_quad,abs_log_gap\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_float(row.x),
                    fmt_float(row.log_asymptotic),
                    fmt_float(row.log_quadrature),
                    fmt_float(row.abs_log_gap)
                ));
            }
            Ok(out)
        }
        VerifyCommand::Depcond {
            common,
            tail1,
            tail2,
            tolerance,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let dep = doc.dependence_spec()?;
            let report = check_dependence_condition(
                &dep,
                &doc.distribution(tail1)?,
                &doc.distribution(tail2)?,
                &xs,
                *tolerance,
            )?;
            let mut out = String::from("x,max_deviation,verdict\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_float(row.x),
                    fmt_float(row.max_deviation),
                    report.verdict
                ));
            }
            Ok(out)
        }
    }
}

fn run_oracle(cmd: &OracleCommand) -> Result<String, CliError> {
    match cmd {
        OracleCommand::Quad {
            common,
            tail1,
            tail2,
            density,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let dep = doc.dependence_spec()?;
            let settings = doc.quad_settings()?;
            let d1 = doc.distribution(tail1)?;
            let d2 = doc.distribution(tail2)?;
            if *density && !matches!(dep, DependenceSpec::Independent) {
                return Err(CliError::Config(
                    "--density integrates the independent product density; remove the \
                     dependence section or drop the flag"
                        .to_string(),
                ));
            }
            let mut out = String::from("x,log_value\n");
            for &x in &xs {
                let value = if *density {
                    density_product_quadrature_with(&d1, &d2, x, &settings)?
                } else {
                    survival_product_quadrature_with(&d1, &d2, &dep, x, &settings)?
                };
                out.push_str(&format!("{},{}\n", fmt_float(x), fmt_float(value)));
            }
            Ok(out)
        }
        OracleCommand::Mc {
            common,
            tail1,
            tail2,
        } => {
            let doc = common.require_config()?;
            let xs = common.thresholds(Some(&doc))?;
            let dep = doc.dependence_spec()?;
            let (n, seed) = doc.mc_params()?;
            let d1 = doc.distribution(tail1)?;
            let d2 = doc.distribution(tail2)?;
            let mut out = String::from("x,n,seed,estimate,std_error\n");
            for &x in &xs {
                let est = mc_product_tail(&d1, &d2, &dep, x, n, seed)?;
                out.push_str(&format!(
                    "{},{n},{seed},{},{}\n",
                    fmt_float(x),
                    fmt_float(est.estimate),
                    fmt_float(est.std_error)
                ));
            }
            Ok(out)
        }
    }
}

//! Risk-specification documents: the JSON configuration consumed by the
//! command-line front end.
//!
//! A document is a bag of named ingredients — tail models, an optional
//! dependence structure, elliptical and GIG parameter blocks, named
//! threshold grids, and numerical knobs.  Unknown keys are rejected at
//! parse time, every numeric range is validated on load with the same
//! rules as the library constructors, and diagnostics name the offending
//! field (`tails.exp1`, `grids.main`, ...).
//!
//! Tail entries come in two flavours.  A *named law* (`exponential`,
//! `weibull`, `gamma`, `half_normal`, `gig_sqrt`) provides both the
//! Weibull-type tail for closed forms and the exact distribution behind
//! the quadrature and Monte Carlo oracles.  A bare `power_tail` provides
//! only the tail parameters (c, alpha, l, p); subcommands that need a
//! sampling law reject it with a pointed message.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use tailkit::elliptical::{EllipticalSpec, GigParams};
use tailkit::numerics::quad::QuadratureSettings;
use tailkit::oracle::dist::OracleDistribution;
use tailkit::tail::{DependenceSpec, WeibullTypeTail};

use crate::CliError;

/// Parsed and validated configuration document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskSpecDocument {
    /// Named tail models.
    #[serde(default)]
    pub tails: BTreeMap<String, TailSpec>,
    /// Joint structure of a two-factor product; omitted means independent.
    pub dependence: Option<DependenceConfig>,
    /// Elliptical-pair block for `asym elliptical`.
    pub elliptical: Option<EllipticalConfig>,
    /// GIG scale parameters for `asym eghd`.
    pub gig: Option<GigConfig>,
    /// Named threshold grids, each strictly increasing.
    #[serde(default)]
    pub grids: BTreeMap<String, Vec<f64>>,
    /// Quadrature tolerances; omitted fields keep the library defaults.
    pub quadrature: Option<QuadratureConfig>,
    /// Monte Carlo sample count and seed for `oracle mc`.
    pub mc: Option<McConfig>,
}

/// One named tail entry.
#[derive(Debug, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailSpec {
    Exponential { rate: f64 },
    Weibull { rate: f64, exponent: f64 },
    Gamma { shape: f64, scale: f64 },
    HalfNormal,
    GigSqrt { lambda: f64, delta: f64, alpha: f64 },
    PowerTail { c: f64, alpha: f64, l: f64, p: f64 },
}

impl TailSpec {
    /// The exact sampling law behind this entry, when it has one.
    pub fn distribution(&self) -> Option<OracleDistribution> {
        match *self {
            TailSpec::Exponential { rate } => Some(OracleDistribution::Exponential { rate }),
            TailSpec::Weibull { rate, exponent } => {
                Some(OracleDistribution::Weibull { rate, exponent })
            }
            TailSpec::Gamma { shape, scale } => Some(OracleDistribution::Gamma { shape, scale }),
            TailSpec::HalfNormal => Some(OracleDistribution::HalfNormal),
            TailSpec::GigSqrt {
                lambda,
                delta,
                alpha,
            } => Some(OracleDistribution::GigSqrt {
                lambda,
                delta,
                alpha,
            }),
            TailSpec::PowerTail { .. } => None,
        }
    }

    /// The Weibull-type tail of this entry.
    pub fn tail(&self) -> tailkit::Result<WeibullTypeTail> {
        match *self {
            TailSpec::PowerTail { c, alpha, l, p } => WeibullTypeTail::new(c, alpha, l, p),
            _ => self
                .distribution()
                .expect("every named law carries a distribution")
                .asymptotic_tail(),
        }
    }
}

/// Dependence structure between the two product factors.
#[derive(Debug, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum DependenceConfig {
    Independent,
    Fgm { tau: f64 },
}

impl DependenceConfig {
    /// The library dependence value, with the FGM parameter range checked.
    pub fn spec(&self) -> Result<DependenceSpec, CliError> {
        match *self {
            DependenceConfig::Independent => Ok(DependenceSpec::Independent),
            DependenceConfig::Fgm { tau } => {
                if !tau.is_finite() || tau.abs() > 1.0 {
                    return Err(CliError::Config(format!(
                        "dependence.tau must lie in [-1, 1], got {tau}"
                    )));
                }
                Ok(DependenceSpec::Fgm { tau })
            }
        }
    }
}

/// Elliptical-pair parameters; `radial` and `scale` name entries of the
/// `tails` section.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticalConfig {
    pub rho: f64,
    #[serde(default)]
    pub tau: f64,
    pub radial: String,
    pub scale: Option<String>,
}

impl EllipticalConfig {
    /// Resolves the named tails and builds the validated spec.
    pub fn build(&self, doc: &RiskSpecDocument) -> Result<EllipticalSpec, CliError> {
        let radial = doc
            .tail(&self.radial)
            .map_err(|e| e.prefixed("elliptical.radial"))?;
        let scale = match &self.scale {
            Some(name) => Some(doc.tail(name).map_err(|e| e.prefixed("elliptical.scale"))?),
            None => None,
        };
        EllipticalSpec::new(self.rho, radial, scale, self.tau)
            .map_err(|e| CliError::Config(format!("elliptical: {e}")))
    }
}

/// GIG scale-mixing parameters.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GigConfig {
    pub lambda: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl GigConfig {
    pub fn params(&self) -> Result<GigParams, CliError> {
        let params = GigParams {
            lambda: self.lambda,
            delta: self.delta,
            alpha: self.alpha,
        };
        params
            .validate()
            .map_err(|e| CliError::Config(format!("gig: {e}")))?;
        Ok(params)
    }
}

/// Overrides for the adaptive-quadrature defaults.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub max_panels: Option<usize>,
}

impl QuadratureConfig {
    pub fn settings(&self) -> Result<QuadratureSettings, CliError> {
        let mut settings = QuadratureSettings::default();
        if let Some(tol) = self.rel_tol {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(CliError::Config(format!(
                    "quadrature.rel_tol must be a positive finite real, got {tol}"
                )));
            }
            settings.rel_tol = tol;
        }
        if let Some(panels) = self.max_panels {
            if panels == 0 {
                return Err(CliError::Config(
                    "quadrature.max_panels must be at least 1".to_string(),
                ));
            }
            settings.max_panels = panels;
        }
        Ok(settings)
    }
}

/// Monte Carlo controls; both fields are required so runs are reproducible
/// by construction.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n: u64,
    pub seed: u64,
}

impl RiskSpecDocument {
    /// Reads, parses, and fully validates a document.  Every section is
    /// checked on load — including ones the current subcommand does not
    /// use — so a bad document fails the same way no matter how it is
    /// exercised.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let doc: RiskSpecDocument = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, spec) in &self.tails {
            spec.tail()
                .map_err(|e| CliError::Config(format!("tails.{name}: {e}")))?;
        }
        if let Some(dep) = &self.dependence {
            dep.spec()?;
        }
        for (name, grid) in &self.grids {
            if grid.is_empty() {
                return Err(CliError::Config(format!("grids.{name}: grid is empty")));
            }
            for &x in grid {
                if !x.is_finite() {
                    return Err(CliError::Config(format!(
                        "grids.{name}: thresholds must be finite, got {x}"
                    )));
                }
            }
            for pair in grid.windows(2) {
                if !(pair[1] > pair[0]) {
                    return Err(CliError::Config(format!(
                        "grids.{name}: thresholds must be strictly increasing, got {} then {}",
                        pair[0], pair[1]
                    )));
                }
            }
        }
        if let Some(elliptical) = &self.elliptical {
            elliptical.build(self)?;
        }
        if let Some(gig) = &self.gig {
            gig.params()?;
        }
        if let Some(quadrature) = &self.quadrature {
            quadrature.settings()?;
        }
        if let Some(mc) = &self.mc {
            if mc.n < 1000 {
                return Err(CliError::Config(format!(
                    "mc.n must be at least 1000 for a meaningful standard error, got {}",
                    mc.n
                )));
            }
        }
        Ok(())
    }

    /// Looks up a tail entry by name.
    pub fn tail(&self, name: &str) -> Result<WeibullTypeTail, CliError> {
        self.entry(name)?
            .tail()
            .map_err(|e| CliError::Config(format!("tails.{name}: {e}")))
    }

    /// Looks up the sampling law behind a tail entry; bare power tails are
    /// rejected because no exact oracle exists for them.
    pub fn distribution(&self, name: &str) -> Result<OracleDistribution, CliError> {
        self.entry(name)?.distribution().ok_or_else(|| {
            CliError::Config(format!(
                "tails.{name} is a bare power tail with no sampling law; this subcommand \
                 needs a named law (exponential, weibull, gamma, half_normal, gig_sqrt)"
            ))
        })
    }

    /// Looks up a named threshold grid.
    pub fn grid(&self, name: &str) -> Result<Vec<f64>, CliError> {
        self.grids.get(name).cloned().ok_or_else(|| {
            CliError::Config(format!("no grid named {name:?} in the configuration"))
        })
    }

    /// The document's dependence structure, defaulting to independence.
    pub fn dependence_spec(&self) -> Result<DependenceSpec, CliError> {
        match &self.dependence {
            Some(dep) => dep.spec(),
            None => Ok(DependenceSpec::Independent),
        }
    }

    /// Quadrature settings with the document's overrides applied.
    pub fn quad_settings(&self) -> Result<QuadratureSettings, CliError> {
        match &self.quadrature {
            Some(q) => q.settings(),
            None => Ok(QuadratureSettings::default()),
        }
    }

    /// The Monte Carlo block, required for `oracle mc`.
    pub fn mc_params(&self) -> Result<(u64, u64), CliError> {
        let mc = self.mc.as_ref().ok_or_else(|| {
            CliError::Config("oracle mc needs an `mc` section (n, seed) in the config".to_string())
        })?;
        Ok((mc.n, mc.seed))
    }

    fn entry(&self, name: &str) -> Result<&TailSpec, CliError> {
        self.tails.get(name).ok_or_else(|| {
            CliError::Config(format!("no tail named {name:?} in the configuration"))
        })
    }
}

//! Experiment configuration.
//!
//! Config files are TOML with material values in the units of the published
//! parameter table (MPa, GPa⁻¹, 10⁻¹⁵ m², 10⁻¹⁰ kg/(m·s)); they are converted
//! to SI on load. Example:
//!
//! ```toml
//! output = "runs/etalon"
//! bc = "prose"
//! load_amplitude = 1.0
//!
//! [mesh]
//! resolution = 32
//! grading = 2.0
//!
//! [material]
//! set = 1
//! alpha2 = 0.0      # optional per-value overrides
//!
//! [scheme]
//! kind = "coupled"
//! theta = 1.0
//! tau = 0.0025
//! t_end = 0.5
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fem::MaterialParams;
use crate::mesh::{generate_unit_square, read_msh2, Mesh, MeshSpec};
use crate::schemes::{SchemeConfig, SchemeKind};
use crate::system::BcLayout;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeshSource {
    File { file: PathBuf },
    Generate(MeshSpec),
}

impl Default for MeshSource {
    fn default() -> Self {
        Self::Generate(MeshSpec::default())
    }
}

impl MeshSource {
    pub fn load(&self) -> Result<Mesh> {
        match self {
            Self::File { file } => {
                if !file.is_file() {
                    return Err(Error::MissingFile(file.clone()));
                }
                read_msh2(file)
            }
            Self::Generate(spec) => generate_unit_square(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcVariant {
    /// Loaded G1, drained G2.
    #[default]
    Prose,
    /// Loaded G2, drained G1.
    EquationList,
}

impl BcVariant {
    pub fn layout(self) -> BcLayout {
        match self {
            Self::Prose => BcLayout::default(),
            Self::EquationList => BcLayout::equation_list(),
        }
    }
}

/// A parameter set plus optional overrides, in table units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub set: u8,
    /// MPa.
    pub mu: Option<f64>,
    /// MPa.
    pub lambda: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    /// GPa⁻¹.
    pub beta1: Option<f64>,
    /// GPa⁻¹.
    pub beta2: Option<f64>,
    /// 10⁻¹⁵ m².
    pub k1: Option<f64>,
    /// 10⁻¹⁵ m².
    pub k2: Option<f64>,
    /// Pa·s.
    pub eta: Option<f64>,
    /// 10⁻¹⁰ kg/(m·s).
    pub gamma: Option<f64>,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            set: 1,
            mu: None,
            lambda: None,
            alpha1: None,
            alpha2: None,
            beta1: None,
            beta2: None,
            k1: None,
            k2: None,
            eta: None,
            gamma: None,
        }
    }
}

impl MaterialConfig {
    pub fn set(set: u8) -> Self {
        Self { set, ..Self::default() }
    }

    /// SI parameters.
    pub fn params(&self) -> Result<MaterialParams> {
        let mut p = MaterialParams::parameter_set(self.set)?;
        let conv = |v: Option<f64>, scale: f64, slot: &mut f64| {
            if let Some(v) = v {
                *slot = v * scale;
            }
        };
        conv(self.mu, 1e6, &mut p.mu);
        conv(self.lambda, 1e6, &mut p.lambda);
        conv(self.alpha1, 1.0, &mut p.alpha1);
        conv(self.alpha2, 1.0, &mut p.alpha2);
        conv(self.beta1, 1e-9, &mut p.beta1);
        conv(self.beta2, 1e-9, &mut p.beta2);
        conv(self.k1, 1e-15, &mut p.k1);
        conv(self.k2, 1e-15, &mut p.k2);
        conv(self.eta, 1.0, &mut p.eta);
        conv(self.gamma, 1e-10, &mut p.gamma);
        p.validate()?;
        Ok(p)
    }

    pub fn is_custom(&self) -> bool {
        *self != Self::set(self.set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mesh: MeshSource,
    pub material: MaterialConfig,
    pub scheme: SchemeConfig,
    pub output: PathBuf,
    pub bc: BcVariant,
    /// Peak traction in Pa.
    pub load_amplitude: f64,
    /// Seed of spectral start vectors and random initial pressures.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mesh: MeshSource::default(),
            material: MaterialConfig::default(),
            scheme: SchemeConfig { t_end: 0.5, ..SchemeConfig::default() },
            output: PathBuf::from("run"),
            bc: BcVariant::Prose,
            load_amplitude: 1.0,
            seed: 0,
        }
    }
}

/// Command-line values that replace config file entries when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mesh_file: Option<PathBuf>,
    pub resolution: Option<usize>,
    pub grading: Option<f64>,
    pub set: Option<u8>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub kind: Option<SchemeKind>,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub t_end: Option<f64>,
    pub tol: Option<f64>,
    pub snapshot_every: Option<usize>,
    pub monitor_energy: bool,
    pub output: Option<PathBuf>,
    pub bc: Option<BcVariant>,
    pub load_amplitude: Option<f64>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(f) = &o.mesh_file {
            self.mesh = MeshSource::File { file: f.clone() };
        }
        if o.resolution.is_some() || o.grading.is_some() {
            let mut spec = match &self.mesh {
                MeshSource::Generate(s) => *s,
                MeshSource::File { .. } => MeshSpec::default(),
            };
            spec.resolution = o.resolution.unwrap_or(spec.resolution);
            spec.grading = o.grading.unwrap_or(spec.grading);
            self.mesh = MeshSource::Generate(spec);
        }
        if let Some(s) = o.set {
            self.material.set = s;
        }
        self.material.alpha1 = o.alpha1.or(self.material.alpha1);
        self.material.alpha2 = o.alpha2.or(self.material.alpha2);
        let s = &mut self.scheme;
        s.kind = o.kind.unwrap_or(s.kind);
        s.theta = o.theta.unwrap_or(s.theta);
        s.tau = o.tau.unwrap_or(s.tau);
        s.t_end = o.t_end.unwrap_or(s.t_end);
        s.tol = o.tol.unwrap_or(s.tol);
        s.snapshot_every = o.snapshot_every.unwrap_or(s.snapshot_every);
        s.monitor_energy |= o.monitor_energy;
        if let Some(out) = &o.output {
            self.output = out.clone();
        }
        self.bc = o.bc.unwrap_or(self.bc);
        self.load_amplitude = o.load_amplitude.unwrap_or(self.load_amplitude);
        self.seed = o.seed.unwrap_or(self.seed);
    }

    pub fn validate(&self) -> Result<()> {
        if let MeshSource::File { file } = &self.mesh {
            if !file.is_file() {
                return Err(Error::MissingFile(file.clone()));
            }
        }
        if let MeshSource::Generate(spec) = &self.mesh {
            spec.validate()?;
        }
        self.material.params()?;
        self.scheme.validate()?;
        if self.scheme.snapshot_every == 0 {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }
        if !self.load_amplitude.is_finite() {
            return Err(Error::Config("load amplitude must be finite".into()));
        }
        Ok(())
    }
}

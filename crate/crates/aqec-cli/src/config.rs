//! Experiment configuration files.

use std::path::{Path, PathBuf};

use aqec::codes::{format, zoo, CodeSpace, LocalCircuit};
use aqec::engine::SearchBudget;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError, Result};
use crate::region::RegionSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub restarts: usize,
    pub max_iterations: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-7
}

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec { restarts: 2, max_iterations: 8, tolerance: default_tolerance() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateFamily {
    None,
    Brickwork,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub family: GateFamily,
    #[serde(default)]
    pub eps: f64,
    #[serde(default = "one")]
    pub depth: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "unit")]
    pub c: f64,
    #[serde(default = "unit")]
    pub c_prime: f64,
    #[serde(default = "unit")]
    pub c_double_prime: f64,
}

fn unit() -> f64 {
    1.0
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 1.0, c_prime: 1.0, c_double_prime: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    #[serde(default)]
    pub delta: f64,
    pub ell: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyMember {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

/// `δ(ℓ) = amplitude · e^{−ℓ/ξ}` along a code family, once at `fixed_ell` and once at `ℓ = ξ log n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub amplitude: f64,
    pub xi: f64,
    pub fixed_ell: f64,
    pub family: Vec<FamilyMember>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub dimension: usize,
    #[serde(default)]
    pub points: Vec<SweepPoint>,
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Zoo name, or a path to a stabilizer text file (relative to the config file).
    pub code: String,
    /// Layout sidecar for a code file.
    #[serde(default)]
    pub layout: Option<String>,
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    #[serde(default)]
    pub ell: Vec<f64>,
    #[serde(default)]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: String,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub bounds: Option<BoundsSpec>,
}

fn default_out() -> String {
    "aqec-out".into()
}

/// A loaded code plus the bytes that identify it.
pub struct LoadedCode {
    pub space: CodeSpace,
    pub fingerprint_bytes: Vec<u8>,
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json_str(&text)?, base))
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budget;
        if b.restarts == 0 || b.max_iterations == 0 || !(b.tolerance > 0.0) {
            return config_err("budget needs restarts > 0, max_iterations > 0 and tolerance > 0");
        }
        if let Some(ell) = self.ell.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return config_err(format!("shield width {ell} must be finite and nonnegative"));
        }
        if let Some(p) = &self.perturbation {
            if !(p.eps.is_finite() && p.eps >= 0.0) || p.depth == 0 {
                return config_err("perturbation needs eps >= 0 and depth > 0");
            }
        }
        for r in &self.regions {
            r.literal()?;
        }
        let consts = [self.constants.c, self.constants.c_prime, self.constants.c_double_prime];
        if consts.iter().any(|c| !c.is_finite()) {
            return config_err("constants must be finite");
        }
        Ok(())
    }

    pub fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            restarts: self.budget.restarts,
            max_iterations: self.budget.max_iterations,
            tolerance: self.budget.tolerance,
            seed: self.seed,
        }
    }

    /// SHA-256 of the canonical JSON form; object keys are sorted, so reordering a file does
    /// not change it. The output directory is left out.
    pub fn hash(&self) -> Result<String> {
        let v = serde_json::to_value(ExperimentConfig { out: String::new(), ..self.clone() })?;
        Ok(crate::cache::digest(serde_json::to_string(&v)?.as_bytes()))
    }

    pub fn load_code(&self, base: &Path) -> Result<LoadedCode> {
        let (space, mut bytes) = match zoo::by_name(&self.code) {
            Ok(space) => {
                let text = space.stabilizer().map(format::stabilizer_to_text).unwrap_or_default();
                (space, format!("zoo:{}\n{text}", self.code).into_bytes())
            }
            Err(_) => {
                let path = base.join(&self.code);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Config(format!("code {:?} is neither a zoo name nor a readable file: {e}", self.code)))?;
                let side = match &self.layout {
                    Some(l) => Some(std::fs::read_to_string(base.join(l)).map_err(|e| CliError::Config(format!("{l}: {e}")))?),
                    None => None,
                };
                let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("code").to_string();
                let space = format::load_code(&name, &text, side.as_deref()).map_err(|e| CliError::Config(e.to_string()))?;
                let mut bytes = text.into_bytes();
                bytes.extend(side.unwrap_or_default().into_bytes());
                (space, bytes)
            }
        };
        let space = match &self.perturbation {
            Some(p) if p.family == GateFamily::Brickwork => {
                let circuit = LocalCircuit::brickwork(space.layout(), p.depth, p.eps, self.seed)?;
                bytes.extend(serde_json::to_vec(p)?);
                bytes.extend(self.seed.to_le_bytes());
                space.perturb(&circuit)?
            }
            _ => space,
        };
        Ok(LoadedCode { space, fingerprint_bytes: bytes })
    }
}

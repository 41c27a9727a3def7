//! Experiment configuration, read from TOML or JSON.
//!
//! Polynomials in u are written as arrays of field elements, each field
//! element being its coefficient vector over F_p: `[[1],[0],[1]]` is
//! `u^2 + 1`. Polynomials in T are arrays of such polynomials, constant
//! term first.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::CenterSpec;
use crate::field::FieldSpec;

pub type NestedPoly = Vec<Vec<u64>>;
pub type NestedTPoly = Vec<NestedPoly>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sweep,
    Mordell,
    Variance,
    Covariance,
    Control,
    IdentitySuite,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Mordell => "mordell",
            ExperimentKind::Variance => "variance",
            ExperimentKind::Covariance => "covariance",
            ExperimentKind::Control => "control",
            ExperimentKind::IdentitySuite => "identity-suite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum FamilySpec {
    MixedChar {
        exponents: Vec<u64>,
        #[serde(default)]
        f: NestedTPoly,
        #[serde(default)]
        a: NestedTPoly,
        #[serde(default)]
        b: NestedTPoly,
    },
    Kloosterman {
        k: u32,
        #[serde(default = "one_poly")]
        b: NestedPoly,
    },
    ValueSet {
        poly: NestedTPoly,
    },
    Custom {
        path: PathBuf,
    },
    /// Every built-in mixed-character triple over every squarefree monic
    /// modulus of the listed fields.
    CorCatalog {
        primes: Vec<u64>,
        max_deg: usize,
        #[serde(default = "default_max_chars")]
        max_chars: usize,
    },
}

fn one_poly() -> NestedPoly {
    vec![vec![1]]
}

fn default_max_chars() -> usize {
    200
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Mainres,
    HooleyCor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Interval lengths as exponents `n` (`X = q^n`); default `0..=deg g`.
    pub n: Option<Vec<u32>>,
    /// A single `X`, which must be a power of q.
    pub x: Option<u64>,
    /// Window exponents for variance/covariance; default `0..=deg P`.
    pub k: Option<Vec<u32>>,
    #[serde(default)]
    pub centers: CenterSpec,
    pub bound: Option<BoundKind>,
    /// Covariance: compare against this value of the main-term indicator.
    #[serde(default)]
    pub main_indicator: bool,
    /// Covariance: use the first family translated by this residue index
    /// when no second family is given.
    pub shift: Option<usize>,
    /// Square-phase control: the `m` values to test; default every valid one.
    pub m_small: Option<Vec<u32>>,
    /// Constant in front of reported error budgets when they are asserted.
    pub constant: Option<f64>,
    /// Identity suite: number of random tables.
    pub tables: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub rank: Option<u32>,
    pub conductor: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    pub field: Option<FieldSpec>,
    pub modulus: Option<NestedPoly>,
    pub family: Option<FamilySpec>,
    /// Second trace function for covariance runs.
    pub second: Option<FamilySpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub metadata: Metadata,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    /// JSON when the extension is `.json`, TOML otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    /// Make relative custom-table paths relative to the config's directory.
    fn resolve_paths(&mut self, dir: &Path) {
        for fam in [&mut self.family, &mut self.second].into_iter().flatten() {
            if let FamilySpec::Custom { path } = fam {
                if path.is_relative() {
                    *path = dir.join(&*path);
                }
            }
        }
    }

    pub fn field_spec(&self) -> Result<&FieldSpec> {
        self.field.as_ref().ok_or_else(|| Error::Validation("missing [field]".into()))
    }

    pub fn modulus_spec(&self) -> Result<&NestedPoly> {
        self.modulus.as_ref().ok_or_else(|| Error::Validation("missing modulus".into()))
    }

    pub fn family_spec(&self) -> Result<&FamilySpec> {
        self.family.as_ref().ok_or_else(|| Error::Validation("missing [family]".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"
experiment = "sweep"
seed = 7
field = { p = 3, e = 1 }
modulus = [[1], [0], [1]]

[family]
kind = "mixed-char"
exponents = [2]
f = [[[0]], [[1]]]
b = [[[1]]]

[params]
n = [0, 1, 2]
centers = { mode = "sample", count = 4 }
bound = "hooley-cor"
"#;

    #[test]
    fn toml_and_json_agree() {
        let cfg = ExperimentConfig::from_toml(SWEEP).unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Sweep);
        assert_eq!(cfg.params.centers, CenterSpec::Sample { count: 4 });
        assert!(matches!(&cfg.family, Some(FamilySpec::MixedChar { a, .. }) if a.is_empty()));
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn parse_errors() {
        let bad = SWEEP.replace("experiment = \"sweep\"", "experiment = \"nope\"");
        assert!(matches!(ExperimentConfig::from_toml(&bad), Err(Error::ConfigParse(_))));
        let extra = format!("{SWEEP}\nunknown = 1\n");
        assert!(matches!(ExperimentConfig::from_toml(&extra), Err(Error::ConfigParse(_))));
        let cfg = ExperimentConfig::from_toml("experiment = \"control\"").unwrap();
        assert!(matches!(cfg.field_spec(), Err(Error::Validation(_))));
    }

    #[test]
    fn kloosterman_default_b() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment":"sweep","field":{"p":5,"e":1},"modulus":[[0],[1]],"family":{"kind":"kloosterman","k":2}}"#,
        )
        .unwrap();
        assert_eq!(cfg.family, Some(FamilySpec::Kloosterman { k: 2, b: vec![vec![1]] }));
    }
}

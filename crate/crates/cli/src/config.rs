//! Run configuration: one flat JSON object holding the IFS, the kernel and
//! the command parameters.
//!
//! ```json
//! {"geometry": {"kind": "euclidean", "dim": 1},
//!  "maps": [{"r": 0.333, "q": [0.0]}, {"r": 0.333, "q": [0.667]}],
//!  "kernel": {"s": 0.63, "omega": {"kind": "sign"}},
//!  "word": [1], "K": 6, "depth": 10}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use selfsim::ifs::IfsConfig;
use selfsim::kernels::KernelSpec;
use selfsim::symbolic::{EpWord, Word};
use selfsim::{Error, Result};

/// `[1, 2]` (a finite word, or its periodic extension where an infinite
/// word is expected) or `{"pre": [..], "period": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordParam {
    Letters(Vec<u16>),
    Eventual { #[serde(default)] pre: Vec<u16>, period: Vec<u16> },
}

impl WordParam {
    pub fn finite(&self) -> Result<Word> {
        match self {
            WordParam::Letters(v) => Ok(Word::new(v)),
            WordParam::Eventual { .. } => Err(Error::Config("this command needs a finite word".into())),
        }
    }

    pub fn infinite(&self) -> Result<EpWord> {
        match self {
            WordParam::Letters(v) => EpWord::periodic(Word::new(v)),
            WordParam::Eventual { pre, period } => EpWord::new(Word::new(pre), Word::new(period)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Cylinder,
    MonteCarlo,
}

/// Integrands available from a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrandSpec {
    One,
    /// `c · Π x_i^{p_i}` (Euclidean only).
    Monomial {
        #[serde(default = "one")]
        c: f64,
        powers: Vec<u32>,
    },
    /// `y ↦ k(point, y)` with the configured kernel.
    Kernel { point: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    #[default]
    Whole,
    Cylinder { word: Vec<u16> },
    Complement { word: Vec<u16> },
    BallComplement { center: Vec<f64>, eps: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub ifs: IfsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<WordParam>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<u16>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrand: Option<IntegrandSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Perturbation parameters for `perturb`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_points: Option<usize>,
}

impl RunConfig {
    pub fn kernel(&self) -> Result<&KernelSpec> {
        self.kernel.as_ref().ok_or_else(|| Error::Config("missing \"kernel\"".into()))
    }

    pub fn word(&self) -> Result<&WordParam> {
        self.word.as_ref().ok_or_else(|| Error::Config("missing \"word\"".into()))
    }

    pub fn depth(&self, default: usize) -> usize {
        self.depth.unwrap_or(default)
    }
}

/// Set `path` (dot-separated) in a JSON object to `raw`, read as JSON when
/// it parses and as a string otherwise.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Input(format!("override {assignment:?} is not key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Input(format!("bad override key {path:?}")));
    }
    for key in &keys[..keys.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(|| Error::Input(format!("{path}: not an object")))?;
        node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(|| Error::Input(format!("{path}: not an object")))?;
    obj.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Read a configuration file. A previous JSON report is accepted too: its
/// embedded `"config"` is used, so any run can be replayed from its output.
pub fn load(path: &Path, overrides: &[String], seed: Option<u64>) -> Result<(RunConfig, Value)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if let Some(embedded) = value.get("config") {
        value = embedded.clone();
    }
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    if let Some(seed) = seed {
        apply_override(&mut value, &format!("seed={seed}"))?;
    }
    let cfg: RunConfig = serde_json::from_value(value.clone()).map_err(|e| Error::Config(e.to_string()))?;
    Ok((cfg, value))
}

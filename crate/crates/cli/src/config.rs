//! Experiment manifests: TOML sections with full defaulting; flags win over
//! file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub symbol: SymbolSection,
    pub grid: GridSection,
    pub solve: SolveSection,
    pub kernel: KernelSection,
    pub decay: DecaySection,
    pub regions: RegionsSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymbolSection {
    /// Default `1+|x|^4`.
    pub poly: Option<String>,
    /// Default 2.
    pub n: Option<usize>,
    pub m_expect: Option<u32>,
    /// Sphere probe count; default depends on `n`.
    pub directions: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    #[serde(rename = "N")]
    pub points: Option<usize>,
    #[serde(rename = "L")]
    pub half_length: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSection {
    /// Default `[0.1, 1, 10, 100]`.
    pub t_list: Option<Vec<f64>>,
    /// Exponent of the `lq` column in `norms.csv`; default 4.
    pub q: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    /// `I1` (default) or `I2`.
    pub kind: Option<String>,
    /// `+` (default) or `-`.
    pub sign: Option<String>,
    /// Default: 9 log-spaced times in `[0.01, 0.5]`.
    pub t_list: Option<Vec<f64>>,
    /// Damping values; default `[0.2, 0.1, 0.05, 0.025]`.
    pub eps_list: Option<Vec<f64>>,
    /// `auto` (default), `lattice` or `radial`.
    pub path: Option<String>,
    /// Sample offsets along `e1`, in units of the regime scale
    /// (`|t|^{1/m₁}` for `|t| <= 1`, `|t|` beyond); default `[0, 0.5, 1, 2]`.
    pub offsets: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecaySection {
    /// Default: `V` and `U` at `(1/p, 1/q) = (1/2, 1/2)`, small time.
    pub queries: Option<Vec<QueryEntry>>,
    /// Default: the regime window of each query.
    pub t_list: Option<Vec<f64>>,
    /// Slope tolerance for a `consistent` verdict; default 0.1.
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryEntry {
    /// `U` or `V`.
    pub part: String,
    /// `small` or `large`.
    pub regime: String,
    pub inv_p: String,
    pub inv_q: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegionsSection {
    pub m: Option<u32>,
    pub n: Option<usize>,
    /// `figure` (default), `delta_m`, `delta_0`, `delta_<a>`, `aef`, `hexagon`, `pentagon`.
    pub kind: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())))
    }
}

//! Serialized results and their CSV/JSON encodings.

use serde::{Deserialize, Serialize};

use crate::config::{EntropyBaseSpec, RunConfig};
use crate::error::CliResult;

/// How γ was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    /// Gaussian CM state with given amplitudes.
    Direct,
    /// Lattice of Gaussian atoms, closed-form CM damping.
    Asymptotic,
    /// Lattice of non-Gaussian atoms by quadrature.
    Oracle,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Direct => "direct",
            Pipeline::Asymptotic => "asymptotic",
            Pipeline::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStatus {
    Ok,
    /// `|q|σ₀ ≥ 1`: already below `1/e` before any drift.
    Undefined,
    /// `σ₀ = 0`: never decoheres.
    Static,
}

impl TauStatus {
    pub fn name(self) -> &'static str {
        match self {
            TauStatus::Ok => "ok",
            TauStatus::Undefined => "undefined",
            TauStatus::Static => "static",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamTau {
    pub q_per_nm: [f64; 3],
    pub tau_s: Option<f64>,
    pub status: TauStatus,
}

/// γ in row-major order as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    pub dim: usize,
    pub row_major: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub version: u32,
    pub inputs: RunConfig,
    pub pipeline: Pipeline,
    /// CM width after the drift.
    pub sigma0_pm: f64,
    pub drift_time_s: f64,
    pub purity: f64,
    pub entropy: f64,
    pub entropy_base: EntropyBaseSpec,
    pub contrast: Option<f64>,
    pub tau_per_beam: Vec<BeamTau>,
    pub tau_min_s: Option<f64>,
    pub matrix: Option<MatrixRecord>,
}

pub const RHO_CSV_HEADER: [&str; 8] = [
    "pipeline",
    "sigma0_pm",
    "drift_time_s",
    "purity",
    "entropy",
    "entropy_base",
    "contrast",
    "tau_min_s",
];

/// Nine significant digits, locale independent.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn sig9_opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

/// Write `header` and `rows` as RFC 4180 CSV.
pub fn csv_string<R, I>(header: &[&str], rows: I) -> CliResult<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

impl ResultRecord {
    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let row = [
            self.pipeline.name().to_string(),
            sig9(self.sigma0_pm),
            sig9(self.drift_time_s),
            sig9(self.purity),
            sig9(self.entropy),
            match self.entropy_base {
                EntropyBaseSpec::Nats => "nats".into(),
                EntropyBaseSpec::Bits => "bits".into(),
            },
            sig9_opt(self.contrast),
            sig9_opt(self.tau_min_s),
        ];
        csv_string(&RHO_CSV_HEADER, [row])
    }
}

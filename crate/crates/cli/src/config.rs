//! JSON run configuration (`version: 1`, unknown fields rejected).

use std::path::{Path, PathBuf};

use bragg_entanglement::{
    cm_state_from_lattice, AmplitudeModel, AtomWavefunction, BeamSet, EntropyBase, Lattice, Length, Mass, Position,
    SampleState, TabulatedWavefunction, Time, WaveVector,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<DirectSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    pub beams: BeamsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coulomb_prefactor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy_base: Option<EntropyBaseSpec>,
}

/// Gaussian CM state given directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectSample {
    pub sigma0_pm: f64,
    pub total_mass_amu: f64,
    #[serde(default)]
    pub cm_mean_nm: [f64; 3],
}

/// Identical atoms at explicit sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub positions_nm: Vec<[f64; 3]>,
    pub atomic_number: u32,
    pub atom_mass_amu: f64,
    pub wavefunction: WavefunctionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WavefunctionSpec {
    Gaussian { sigma_pm: f64 },
    Box { width_pm: f64 },
    Triangle { half_width_pm: f64 },
    /// Amplitudes in nm^(-1/2) on a strictly increasing grid in nm.
    Tabulated {
        x_nm: Vec<f64>,
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamsSpec {
    #[serde(default)]
    pub k0_per_nm: [f64; 3],
    pub transfers_per_nm: Vec<[f64; 3]>,
    /// `[re, im]` per beam. Direct samples only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBaseSpec {
    Nats,
    Bits,
}

impl From<EntropyBaseSpec> for EntropyBase {
    fn from(b: EntropyBaseSpec) -> Self {
        match b {
            EntropyBaseSpec::Nats => EntropyBase::Nats,
            EntropyBaseSpec::Bits => EntropyBase::Bits,
        }
    }
}

/// Where the density matrix comes from.
#[derive(Debug, Clone)]
pub enum Scatterer {
    /// Gaussian CM state with caller (or point-scatterer) amplitudes.
    Direct { state: SampleState, amplitudes: Vec<Complex64> },
    /// Lattice of Gaussian atoms, closed-form pipeline.
    GaussianLattice { state: SampleState, lattice: Lattice, wf: AtomWavefunction },
    /// Lattice of non-Gaussian atoms, quadrature oracle.
    OracleLattice { lattice: Lattice, wf: AtomWavefunction },
}

/// A validated configuration in library types.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub beams: BeamSet,
    pub scatterer: Scatterer,
    pub drift_time: Time,
    pub model: AmplitudeModel,
}

fn finite3(field: &str, v: &[f64; 3]) -> CliResult<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(CliError::config(field, "components must be finite"))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::config("config", e))?;
        if cfg.version != CONFIG_VERSION {
            return Err(CliError::config(
                "version",
                format!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        let beams = self.resolve_beams()?;
        let drift_time = match self.drift_time_s {
            Some(t) if !(t >= 0.0 && t.is_finite()) => {
                return Err(CliError::config("drift_time_s", "must be finite and ≥ 0"));
            }
            Some(t) => Time::from_s(t),
            None => Time::ZERO,
        };
        let model = match self.coulomb_prefactor {
            Some(c) if !(c > 0.0 && c.is_finite()) => {
                return Err(CliError::config("coulomb_prefactor", "must be finite and > 0"));
            }
            Some(c) => AmplitudeModel { coulomb_prefactor: c },
            None => AmplitudeModel::default(),
        };
        let scatterer = match (&self.sample, &self.lattice) {
            (Some(s), None) => self.resolve_direct(s, &beams)?,
            (None, Some(l)) => {
                if self.beams.amplitudes.is_some() {
                    return Err(CliError::config(
                        "beams.amplitudes",
                        "only allowed with a direct sample; lattice amplitudes are computed",
                    ));
                }
                resolve_lattice(l)?
            }
            (Some(_), Some(_)) => {
                return Err(CliError::config("sample/lattice", "give exactly one of `sample` or `lattice`, not both"))
            }
            (None, None) => return Err(CliError::config("sample/lattice", "one of `sample` or `lattice` is required")),
        };
        if let Scatterer::OracleLattice { wf, .. } = &scatterer {
            if drift_time.si() > 0.0 {
                return Err(CliError::config(
                    "drift_time_s",
                    format!("free dispersion needs Gaussian atoms, got {}", wf.kind()),
                ));
            }
        }
        Ok(Resolved { beams, scatterer, drift_time, model })
    }

    fn resolve_beams(&self) -> CliResult<BeamSet> {
        let b = &self.beams;
        finite3("beams.k0_per_nm", &b.k0_per_nm)?;
        if b.transfers_per_nm.is_empty() {
            return Err(CliError::config("beams.transfers_per_nm", "at least one beam is required"));
        }
        for (i, q) in b.transfers_per_nm.iter().enumerate() {
            let field = format!("beams.transfers_per_nm[{i}]");
            finite3(&field, q)?;
            if q.iter().all(|c| *c == 0.0) {
                return Err(CliError::config(&field, "q = 0 (forward beam) is not allowed"));
            }
        }
        let qs = b.transfers_per_nm.iter().map(|q| WaveVector::from_per_nm(*q)).collect();
        BeamSet::new(WaveVector::from_per_nm(b.k0_per_nm), qs).map_err(|e| CliError::config("beams", e))
    }

    fn resolve_direct(&self, s: &DirectSample, beams: &BeamSet) -> CliResult<Scatterer> {
        if !(s.sigma0_pm >= 0.0 && s.sigma0_pm.is_finite()) {
            return Err(CliError::config("sample.sigma0_pm", "must be finite and ≥ 0"));
        }
        if !(s.total_mass_amu > 0.0 && s.total_mass_amu.is_finite()) {
            return Err(CliError::config("sample.total_mass_amu", "must be finite and > 0"));
        }
        finite3("sample.cm_mean_nm", &s.cm_mean_nm)?;
        let state = SampleState::new(
            Position::from_nm(s.cm_mean_nm),
            Length::from_pm(s.sigma0_pm),
            Mass::from_amu(s.total_mass_amu),
        )
        .map_err(|e| CliError::config("sample", e))?;
        let amplitudes = match &self.beams.amplitudes {
            Some(a) => {
                if a.len() != beams.len() {
                    return Err(CliError::config(
                        "beams.amplitudes",
                        format!("{} amplitudes for {} beams", a.len(), beams.len()),
                    ));
                }
                if a.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(CliError::config("beams.amplitudes", "entries must be finite"));
                }
                a.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
            }
            None => beams
                .transfers()
                .iter()
                .map(|q| Complex64::new(q.norm().per_nm().powi(-2), 0.0))
                .collect(),
        };
        Ok(Scatterer::Direct { state, amplitudes })
    }
}

fn resolve_lattice(l: &LatticeSpec) -> CliResult<Scatterer> {
    if l.positions_nm.is_empty() {
        return Err(CliError::config("lattice.positions_nm", "at least one atom is required"));
    }
    for (i, p) in l.positions_nm.iter().enumerate() {
        finite3(&format!("lattice.positions_nm[{i}]"), p)?;
    }
    if !(l.atom_mass_amu > 0.0 && l.atom_mass_amu.is_finite()) {
        return Err(CliError::config("lattice.atom_mass_amu", "must be finite and > 0"));
    }
    let lattice = Lattice::new(
        l.positions_nm.iter().map(|p| Position::from_nm(*p)).collect(),
        l.atomic_number,
        Mass::from_amu(l.atom_mass_amu),
    )
    .map_err(|e| CliError::config("lattice", e))?;
    let wf = resolve_wavefunction(&l.wavefunction)?;
    if wf.is_gaussian() {
        let state = cm_state_from_lattice(&lattice, &wf).map_err(|e| CliError::config("lattice", e))?;
        Ok(Scatterer::GaussianLattice { state, lattice, wf })
    } else {
        Ok(Scatterer::OracleLattice { lattice, wf })
    }
}

fn resolve_wavefunction(w: &WavefunctionSpec) -> CliResult<AtomWavefunction> {
    let field = "lattice.wavefunction";
    let wf = match w {
        WavefunctionSpec::Gaussian { sigma_pm } => AtomWavefunction::gaussian(Length::from_pm(*sigma_pm)),
        WavefunctionSpec::Box { width_pm } => AtomWavefunction::box_profile(Length::from_pm(*width_pm)),
        WavefunctionSpec::Triangle { half_width_pm } => AtomWavefunction::triangle(Length::from_pm(*half_width_pm)),
        WavefunctionSpec::Tabulated { x_nm, re, im } => {
            if re.len() != x_nm.len() || im.as_ref().is_some_and(|im| im.len() != x_nm.len()) {
                return Err(CliError::config(field, "x_nm, re and im must have equal lengths"));
            }
            let grid: Vec<(f64, Complex64)> = x_nm
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, Complex64::new(re[i], im.as_ref().map_or(0.0, |im| im[i]))))
                .collect();
            TabulatedWavefunction::from_nm_grid(&grid).map(AtomWavefunction::Tabulated)
        }
    };
    wf.map_err(|e| CliError::config(field, e))
}

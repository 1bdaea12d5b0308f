//! The computations behind each subcommand, free of argument parsing and I/O.

use bragg_entanglement::decoherence::benchmark_rows;
use bragg_entanglement::{
    build_rho_asymptotic, build_rho_from_amplitudes, build_rho_gaussian_product, build_rho_oracle, clt_convergence,
    decoherence_time, sweep_tau, AtomWavefunction, BeamSet, CltRow, DensityMatrix, DispersionScenario, EntropyBase,
    InverseLength, Lattice, Length, Mass, OracleSettings, Position, ProductState, SampleState,
    TauRow, WaveVector,
};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::config::{EntropyBaseSpec, Resolved, RunConfig, Scatterer, CONFIG_VERSION};
use crate::error::{CliError, CliResult};
use crate::record::{BeamTau, MatrixRecord, Pipeline, ResultRecord, TauStatus};

/// γ together with the CM states it was built from.
#[derive(Debug, Clone)]
pub struct BuiltRho {
    pub rho: DensityMatrix,
    pub pipeline: Pipeline,
    /// CM state before the drift; Gaussian-equivalent (`σ/√n`) for oracle runs.
    pub initial: SampleState,
    pub dispersed: SampleState,
}

pub fn build_rho(r: &Resolved) -> CliResult<BuiltRho> {
    let disperse = |state: SampleState| -> CliResult<SampleState> {
        Ok(DispersionScenario::new(state, r.drift_time)?.dispersed_state()?)
    };
    Ok(match &r.scatterer {
        Scatterer::Direct { state, amplitudes } => {
            let dispersed = disperse(*state)?;
            BuiltRho {
                rho: build_rho_from_amplitudes(&dispersed, &r.beams, amplitudes)?,
                pipeline: Pipeline::Direct,
                initial: *state,
                dispersed,
            }
        }
        Scatterer::GaussianLattice { state, lattice, wf } => {
            let dispersed = disperse(*state)?;
            BuiltRho {
                rho: build_rho_asymptotic(&dispersed, lattice, wf, &r.beams, &r.model)?,
                pipeline: Pipeline::Asymptotic,
                initial: *state,
                dispersed,
            }
        }
        Scatterer::OracleLattice { lattice, wf } => {
            if !lattice.is_axial() || !r.beams.is_axial() {
                return Err(CliError::Config(format!(
                    "{} atoms are handled by the 1D quadrature oracle: lattice and beams must lie along z",
                    wf.kind()
                )));
            }
            let state = ProductState::from_lattice(lattice, wf.clone(), OracleSettings::default())?;
            let equivalent = SampleState::new(
                lattice.cm_mean(),
                wf.std_dev() / (lattice.n() as f64).sqrt(),
                lattice.total_mass(),
            )?;
            BuiltRho {
                rho: build_rho_oracle(&state, &r.beams, lattice.atomic_number(), &r.model)?.rho,
                pipeline: Pipeline::Oracle,
                initial: equivalent,
                dispersed: equivalent,
            }
        }
    })
}

/// Unit vector along `q₁ - q₀` (or `z` for a single beam).
pub fn fringe_direction(beams: &BeamSet) -> Vector3<f64> {
    let qs = beams.transfers();
    if qs.len() < 2 {
        return Vector3::z();
    }
    (qs[1] - qs[0]).0.normalize()
}

pub fn beam_taus(state: &SampleState, beams: &BeamSet) -> Vec<BeamTau> {
    beams
        .transfers()
        .iter()
        .map(|q| {
            let (tau_s, status) = if state.sigma0().si() == 0.0 {
                (None, TauStatus::Static)
            } else {
                match decoherence_time(state, q.norm()) {
                    Ok(t) => (Some(t.si()), TauStatus::Ok),
                    Err(_) => (None, TauStatus::Undefined),
                }
            };
            BeamTau { q_per_nm: q.to_per_nm(), tau_s, status }
        })
        .collect()
}

/// Run `rho` on a config whose overrides have already been applied.
pub fn rho(cfg: &RunConfig) -> CliResult<ResultRecord> {
    let resolved = cfg.resolve()?;
    let built = build_rho(&resolved)?;
    let base_spec = cfg.entropy_base.unwrap_or(EntropyBaseSpec::Nats);
    let entropy = built.rho.von_neumann_entropy(EntropyBase::from(base_spec))?;
    let contrast = if built.rho.dim() == 2 {
        Some(built.rho.fringe_contrast(&fringe_direction(&resolved.beams))?)
    } else {
        None
    };
    let tau_per_beam = beam_taus(&built.initial, &resolved.beams);
    let tau_min_s = tau_per_beam.iter().filter_map(|t| t.tau_s).min_by(f64::total_cmp);
    let g = built.rho.gamma();
    let d = built.rho.dim();
    let row_major = (0..d).flat_map(|i| (0..d).map(move |j| [g[(i, j)].re, g[(i, j)].im])).collect();
    Ok(ResultRecord {
        version: CONFIG_VERSION,
        inputs: cfg.clone(),
        pipeline: built.pipeline,
        sigma0_pm: built.dispersed.sigma0().pm(),
        drift_time_s: resolved.drift_time.si(),
        purity: built.rho.purity(),
        entropy,
        entropy_base: base_spec,
        contrast,
        tau_per_beam,
        tau_min_s,
        matrix: Some(MatrixRecord { dim: d, row_major }),
    })
}

/// `I(r)` sampled along a line through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityProfile {
    pub direction: [f64; 3],
    pub r_nm: Vec<f64>,
    pub intensity: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<f64>,
}

pub struct IntensityRequest {
    pub r_min_nm: f64,
    /// Defaults to one fringe period past `r_min_nm`.
    pub r_max_nm: Option<f64>,
    pub samples: usize,
    pub direction: Option<[f64; 3]>,
    pub contrast: bool,
}

pub fn intensity(cfg: &RunConfig, req: &IntensityRequest) -> CliResult<IntensityProfile> {
    if req.samples < 2 {
        return Err(CliError::config("--samples", "need at least 2 samples"));
    }
    let resolved = cfg.resolve()?;
    let built = build_rho(&resolved)?;
    let dir = match req.direction {
        Some(d) => Vector3::from(d)
            .try_normalize(0.0)
            .filter(|v| v.iter().all(|c| c.is_finite()))
            .ok_or_else(|| CliError::config("--direction", "must be a finite nonzero vector"))?,
        None => fringe_direction(&resolved.beams),
    };
    let r_max = match req.r_max_nm {
        Some(r) => r,
        None => {
            let qs = resolved.beams.transfers();
            let k = if qs.len() >= 2 { (qs[1] - qs[0]).0.dot(&dir).abs() } else { 0.0 };
            if k == 0.0 {
                return Err(CliError::config("--r-max", "required when the beams give no fringe along the direction"));
            }
            req.r_min_nm + 2.0 * std::f64::consts::PI / k * 1e9
        }
    };
    if !(req.r_min_nm.is_finite() && r_max.is_finite() && r_max > req.r_min_nm) {
        return Err(CliError::config("--r-min/--r-max", "need finite r_min < r_max"));
    }
    let step = (r_max - req.r_min_nm) / (req.samples - 1) as f64;
    let r_nm: Vec<f64> = (0..req.samples).map(|i| req.r_min_nm + step * i as f64).collect();
    let intensity = r_nm.iter().map(|&r| built.rho.intensity(&Position(dir * (r * 1e-9)))).collect();
    let contrast = if req.contrast { Some(built.rho.fringe_contrast(&dir)?) } else { None };
    Ok(IntensityProfile {
        direction: [dir.x, dir.y, dir.z],
        r_nm,
        intensity,
        contrast,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRecord {
    pub mass_amu: f64,
    pub sigma0_pm: f64,
    pub q_per_nm: f64,
    pub tau_s: Option<f64>,
    pub status: TauStatus,
}

impl From<&TauRow> for TauRecord {
    fn from(r: &TauRow) -> Self {
        TauRecord {
            mass_amu: r.mass.amu(),
            sigma0_pm: r.sigma0.pm(),
            q_per_nm: r.q.per_nm(),
            tau_s: r.tau.map(|t| t.si()),
            status: if r.tau.is_some() { TauStatus::Ok } else { TauStatus::Undefined },
        }
    }
}

/// The three benchmark scatterers.
pub fn tau_benchmarks() -> Vec<TauRecord> {
    benchmark_rows().iter().map(TauRecord::from).collect()
}

/// Sweep over `masses × sigma0s × qs`. A lone row without a τ is an error.
pub fn tau_sweep(masses_amu: &[f64], sigma0s_pm: &[f64], qs_per_nm: &[f64]) -> CliResult<Vec<TauRecord>> {
    for (flag, v) in [("--masses", masses_amu), ("--sigma0s", sigma0s_pm), ("--qs", qs_per_nm)] {
        if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::config(flag, "values must be finite and > 0"));
        }
    }
    let rows = sweep_tau(
        &masses_amu.iter().map(|&m| Mass::from_amu(m)).collect::<Vec<_>>(),
        &sigma0s_pm.iter().map(|&s| Length::from_pm(s)).collect::<Vec<_>>(),
        &qs_per_nm.iter().map(|&q| InverseLength::from_per_nm(q)).collect::<Vec<_>>(),
    )?;
    if let [row] = rows.as_slice() {
        if row.tau.is_none() {
            let state = SampleState::new(Position::default(), row.sigma0, row.mass)?;
            decoherence_time(&state, row.q)?;
        }
    }
    Ok(rows.iter().map(TauRecord::from).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WfKind {
    Gaussian,
    Box,
    Triangle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltRecord {
    pub n: usize,
    pub k_sigma0: f64,
    pub deviation: f64,
}

impl From<&CltRow> for CltRecord {
    fn from(r: &CltRow) -> Self {
        CltRecord { n: r.n, k_sigma0: r.k_sigma0, deviation: r.deviation }
    }
}

/// Convergence of the CM characteristic function to its Gaussian limit for
/// atoms with density standard deviation `sigma_pm`.
pub fn clt(kind: WfKind, n_values: &[usize], k_sigma0: f64, sigma_pm: f64, max_atoms: usize) -> CliResult<Vec<CltRecord>> {
    if n_values.is_empty() || n_values.contains(&0) {
        return Err(CliError::config("--n", "need a nonempty list of atom counts ≥ 1"));
    }
    let sigma = Length::from_pm(sigma_pm);
    let wf = match kind {
        WfKind::Gaussian => AtomWavefunction::gaussian(sigma),
        WfKind::Box => AtomWavefunction::box_with_std(sigma),
        WfKind::Triangle => AtomWavefunction::triangle_with_std(sigma),
    }
    .map_err(|e| CliError::config("--sigma-pm", e))?;
    let settings = OracleSettings { max_atoms, ..Default::default() };
    Ok(clt_convergence(&wf, n_values, k_sigma0, &settings)?.iter().map(CltRecord::from).collect())
}

/// Frobenius distances of the quadrature oracle from the closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub n: usize,
    pub transfers_per_nm: Vec<f64>,
    /// `‖γ_oracle - γ_asymptotic‖_F`.
    pub vs_asymptotic: f64,
    /// `‖γ_oracle - γ_product‖_F` against the exact Gaussian product state.
    pub vs_exact_gaussian: f64,
}

fn compare_one(lattice: &Lattice, sigma: Length, beams: &BeamSet, model: &bragg_entanglement::AmplitudeModel) -> CliResult<OracleComparison> {
    let wf = AtomWavefunction::gaussian(sigma)?;
    let state = ProductState::from_lattice(lattice, wf.clone(), OracleSettings::default())?;
    let quad = build_rho_oracle(&state, beams, lattice.atomic_number(), model)?.rho;
    let cm = bragg_entanglement::cm_state_from_lattice(lattice, &wf)?;
    let asym = build_rho_asymptotic(&cm, lattice, &wf, beams, model)?;
    let exact = build_rho_gaussian_product(lattice, sigma, beams, model)?;
    Ok(OracleComparison {
        n: lattice.n(),
        transfers_per_nm: beams.transfers().iter().map(|q| q.to_per_nm()[2]).collect(),
        vs_asymptotic: (quad.gamma() - asym.gamma()).norm(),
        vs_exact_gaussian: (quad.gamma() - exact.gamma()).norm(),
    })
}

pub struct OracleSuite {
    pub n_values: Vec<usize>,
    pub sigma_pm: f64,
    pub spacing_nm: f64,
    pub g_per_nm: f64,
}

/// Linear chains of Gaussian atoms against the symmetric pair `{-G, G}` and
/// the three-beam set `{-G, G, 2G}`.
pub fn oracle_compare_suite(s: &OracleSuite) -> CliResult<Vec<OracleComparison>> {
    if !(s.g_per_nm.is_finite() && s.g_per_nm > 0.0) {
        return Err(CliError::config("--g-per-nm", "must be finite and > 0"));
    }
    if s.n_values.is_empty() || s.n_values.contains(&0) {
        return Err(CliError::config("--n", "need a nonempty list of atom counts ≥ 1"));
    }
    let qz = |q: f64| WaveVector::from_per_nm([0.0, 0.0, q]);
    let g = s.g_per_nm;
    let sets = [
        BeamSet::new(WaveVector::default(), vec![qz(-g), qz(g)])?,
        BeamSet::new(WaveVector::default(), vec![qz(-g), qz(g), qz(2.0 * g)])?,
    ];
    let model = Default::default();
    let mut out = Vec::new();
    for &n in &s.n_values {
        let lattice = Lattice::linear_chain(n, Length::from_nm(s.spacing_nm))?;
        for beams in &sets {
            out.push(compare_one(&lattice, Length::from_pm(s.sigma_pm), beams, &model)?);
        }
    }
    Ok(out)
}

/// Compare on the lattice and beams of a config (Gaussian atoms along `z`).
pub fn oracle_compare_config(cfg: &RunConfig) -> CliResult<Vec<OracleComparison>> {
    let resolved = cfg.resolve()?;
    let Scatterer::GaussianLattice { lattice, wf, .. } = &resolved.scatterer else {
        return Err(CliError::config("lattice", "oracle-compare needs a lattice of Gaussian atoms"));
    };
    let AtomWavefunction::Gaussian { sigma } = wf else { unreachable!("resolved as Gaussian") };
    if !lattice.is_axial() || !resolved.beams.is_axial() {
        return Err(CliError::config("lattice/beams", "oracle-compare needs atoms and beams along z"));
    }
    Ok(vec![compare_one(lattice, *sigma, &resolved.beams, &resolved.model)?])
}

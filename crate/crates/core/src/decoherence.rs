//! Free dispersion of the scatterer's centre of mass between interactions and
//! the resulting decoherence time.
//!
//! A free Gaussian CM wavepacket spreads as
//! `σ₀(t)² = σ₀² (1 + (ħt / (M σ₀²))²)`. The decoherence time `τ` is the drift
//! time after which the diagonal damping `e^{-q²σ₀(t)²}` has fallen to `1/e`:
//! `τ = (σ₀² M / ħ) √(1/(q²σ₀²) - 1)`.
//!
//! `q` is always the modulus of the momentum transfer.

use crate::error::{Error, Result};
use crate::sample::SampleState;
use crate::units::{constants, InverseLength, Length, Mass, Time};

/// A CM state left to drift freely for `drift_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionScenario {
    state: SampleState,
    drift_time: Time,
}

impl DispersionScenario {
    pub fn new(state: SampleState, drift_time: Time) -> Result<Self> {
        check_drift_time(drift_time)?;
        Ok(Self { state, drift_time })
    }

    pub fn state(&self) -> &SampleState {
        &self.state
    }

    pub fn drift_time(&self) -> Time {
        self.drift_time
    }

    /// The CM state after the drift (same mean and mass, wider σ₀).
    pub fn dispersed_state(&self) -> Result<SampleState> {
        if self.drift_time.si() == 0.0 {
            return Ok(self.state);
        }
        self.state.with_sigma0(dispersed_sigma0(&self.state, self.drift_time)?)
    }
}

fn check_drift_time(t: Time) -> Result<()> {
    if t.si() >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("drift time must be finite and ≥ 0, got {} s", t.si())))
    }
}

/// `ħt / (Mσ₀²)`, the dimensionless spreading parameter.
fn spreading(mass: Mass, sigma0: Length, t: Time) -> f64 {
    let s = sigma0.si();
    constants::HBAR * t.si() / (mass.si() * s * s)
}

/// Width of the freely dispersed CM wavepacket after time `t`.
pub fn dispersed_sigma0(state: &SampleState, t: Time) -> Result<Length> {
    check_drift_time(t)?;
    if !(state.sigma0().si() > 0.0) {
        return Err(Error::Domain("dispersion needs σ₀ > 0".into()));
    }
    let x = spreading(state.total_mass(), state.sigma0(), t);
    Ok(state.sigma0() * (1.0 + x * x).sqrt())
}

/// Drift time after which `e^{-q²σ₀(t)²}` reaches `1/e`.
pub fn decoherence_time(state: &SampleState, q: InverseLength) -> Result<Time> {
    let q = InverseLength::from_per_m(q.si().abs());
    let sigma0 = state.sigma0();
    if !(sigma0.si() > 0.0) {
        return Err(Error::Domain("decoherence time needs σ₀ > 0".into()));
    }
    if !(q.si() > 0.0 && q.is_finite()) {
        return Err(Error::ForwardBeam);
    }
    let qs = q * sigma0;
    if qs >= 1.0 {
        return Err(Error::AlreadyDecohered(qs));
    }
    let s = sigma0.si();
    let scale = s * s * state.total_mass().si() / constants::HBAR;
    Ok(Time::from_s(scale * (1.0 / (qs * qs) - 1.0).sqrt()))
}

/// One row of a τ sweep. `tau` is `None` when `qσ₀ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauRow {
    pub mass: Mass,
    pub sigma0: Length,
    pub q: InverseLength,
    pub tau: Option<Time>,
}

impl TauRow {
    pub fn status(&self) -> &'static str {
        if self.tau.is_some() {
            "ok"
        } else {
            "undefined"
        }
    }
}

/// Cartesian product `masses × sigma0s × qs` (mass outermost). Rows whose τ
/// does not exist are flagged rather than failing the batch.
pub fn sweep_tau(masses: &[Mass], sigma0s: &[Length], qs: &[InverseLength]) -> Result<Vec<TauRow>> {
    for (name, len) in [("masses", masses.len()), ("sigma0s", sigma0s.len()), ("qs", qs.len())] {
        if len == 0 {
            return Err(Error::InvalidInput(format!("{name} must not be empty")));
        }
    }
    let mut rows = Vec::with_capacity(masses.len() * sigma0s.len() * qs.len());
    for &mass in masses {
        for &sigma0 in sigma0s {
            let state = SampleState::new(Default::default(), sigma0, mass)?;
            for &q in qs {
                rows.push(TauRow {
                    mass,
                    sigma0,
                    q,
                    tau: decoherence_time(&state, q).ok(),
                });
            }
        }
    }
    Ok(rows)
}

/// The three benchmark scatterers: a C₆₀ fullerene, a 10⁶ amu cluster and a
/// 2·10⁹ amu levitated nanoparticle, all at σ₀ = 3 pm and |q| = 10 nm⁻¹.
pub fn benchmark_rows() -> Vec<TauRow> {
    sweep_tau(
        &[Mass::from_amu(720.0), Mass::from_amu(1e6), Mass::from_amu(2e9)],
        &[Length::from_pm(3.0)],
        &[InverseLength::from_per_nm(10.0)],
    )
    .expect("benchmark inputs are valid")
}

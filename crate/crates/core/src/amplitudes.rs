//! Kinematic scattering amplitudes `f_q` and the damped coefficients `c_q` of
//! the Gaussian centre-of-mass regime.
//!
//! `f_q = (Z e²/q²) ⟨φ|e^{-iq·X}|φ⟩ Σ_j e^{-iq·R_j}`. The Rutherford envelope is
//! evaluated as `coulomb_prefactor · Z / |q|²` with `|q|` in nm⁻¹; the absolute
//! normalization is irrelevant for every observable, which are all ratios.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sample::{AtomWavefunction, Lattice, SampleState};
use crate::units::{constants, Length};
use crate::vectors::WaveVector;

/// A momentum transfer together with its amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitude {
    pub q: WaveVector,
    pub value: Complex64,
}

/// Amplitude normalization. Only the relative amplitudes across a beam set
/// matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeModel {
    pub coulomb_prefactor: f64,
}

impl Default for AmplitudeModel {
    fn default() -> Self {
        Self { coulomb_prefactor: 1.0 }
    }
}

impl AmplitudeModel {
    /// `prefactor · Z / |q|²`, `|q|` in nm⁻¹.
    pub fn rutherford_envelope(&self, atomic_number: u32, q: &WaveVector) -> Result<f64> {
        if q.is_zero() {
            return Err(Error::ForwardBeam);
        }
        let q_nm = q.norm().per_nm();
        Ok(self.coulomb_prefactor * atomic_number as f64 / (q_nm * q_nm))
    }

    /// Conventional kinematic amplitude `f_q` for Gaussian atoms.
    pub fn f_q(&self, lattice: &Lattice, wf: &AtomWavefunction, q: &WaveVector) -> Result<Complex64> {
        let envelope = self.rutherford_envelope(lattice.atomic_number(), q)?;
        let form = atomic_form_factor(wf, q)?;
        Ok(structure_factor(lattice, q) * (envelope * form))
    }

    /// `c_q → e^{-q²σ₀²/2} e^{iq·⟨X̄⟩} f_q`.
    pub fn c_q_asymptotic(
        &self,
        state: &SampleState,
        lattice: &Lattice,
        wf: &AtomWavefunction,
        q: &WaveVector,
    ) -> Result<Complex64> {
        let f = self.f_q(lattice, wf, q)?;
        let damping = cm_damping(state, q);
        let phase = Complex64::from_polar(1.0, q.phase(&state.cm_mean()));
        Ok(f * phase * damping)
    }

    pub fn amplitudes(&self, lattice: &Lattice, wf: &AtomWavefunction, qs: &[WaveVector]) -> Result<Vec<ScatteringAmplitude>> {
        qs.iter()
            .map(|q| Ok(ScatteringAmplitude { q: *q, value: self.f_q(lattice, wf, q)? }))
            .collect()
    }
}

/// Lattice sum `Σ_j e^{-iq·R_j}`.
pub fn structure_factor(lattice: &Lattice, q: &WaveVector) -> Complex64 {
    lattice
        .positions()
        .iter()
        .map(|r| Complex64::from_polar(1.0, -q.phase(r)))
        .sum()
}

/// `⟨φ|e^{-iq·X}|φ⟩` for an atom centred at the origin. Only the Gaussian has
/// a closed form here; every other profile goes through the quadrature oracle.
pub fn atomic_form_factor(wf: &AtomWavefunction, q: &WaveVector) -> Result<f64> {
    match wf {
        AtomWavefunction::Gaussian { sigma } => Ok(gaussian_characteristic(q.norm_squared(), *sigma)),
        other => Err(Error::UnsupportedAnalytic(other.kind())),
    }
}

/// `e^{-|q|²σ²/2}`.
pub fn gaussian_characteristic(q_squared: f64, sigma: Length) -> f64 {
    let s = sigma.si();
    (-0.5 * q_squared * s * s).exp()
}

/// Entanglement damping `e^{-q²σ₀²/2}` of `c_q`.
pub fn cm_damping(state: &SampleState, q: &WaveVector) -> f64 {
    gaussian_characteristic(q.norm_squared(), state.sigma0())
}

/// Relativistic de Broglie wavelength of an electron with the given kinetic
/// energy.
pub fn electron_wavelength(kinetic_energy_kev: f64) -> Result<Length> {
    if !(kinetic_energy_kev > 0.0 && kinetic_energy_kev.is_finite()) {
        return Err(Error::Domain(format!(
            "electron kinetic energy must be positive, got {kinetic_energy_kev} keV"
        )));
    }
    let e = kinetic_energy_kev * 1e3 * constants::ELEMENTARY_CHARGE;
    let m = constants::ELECTRON_MASS;
    let c2 = constants::SPEED_OF_LIGHT * constants::SPEED_OF_LIGHT;
    let p = (2.0 * m * e * (1.0 + e / (2.0 * m * c2))).sqrt();
    Ok(Length::from_m(constants::PLANCK / p))
}

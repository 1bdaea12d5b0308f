//! Reduced density matrix of the probe electron over a finite set of Bragg
//! beams, and the observables derived from it.
//!
//! In the Gaussian centre-of-mass regime
//!
//! ```text
//! γ_{q,q'} ∝ e^{-(|q|² + |q'|² - q·q') σ₀²} f_q f_{q'}*
//! ```
//!
//! which is also reachable as `c_q c_{q'}* ⟨F_{q'}|F_q⟩` with the damped
//! coefficients from [`crate::amplitudes`] and [`overlap_gaussian`]. Both
//! routes are exposed so they can be checked against each other.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::amplitudes::AmplitudeModel;
use crate::error::{Error, Result};
use crate::sample::{AtomWavefunction, Lattice, SampleState};
use crate::vectors::{Position, WaveVector};

pub mod tolerances {
    /// Relative Frobenius norm of `γ - γ†`.
    pub const HERMITIAN: f64 = 1e-12;
    /// `|tr γ - 1|`.
    pub const TRACE: f64 = 1e-12;
    /// Smallest eigenvalue must be `≥ -PSD · λ_max`.
    pub const PSD: f64 = 1e-12;
    /// Eigenvalues this close outside `[0, 1]` are clipped; further out is an error.
    pub const EIGEN_CLIP: f64 = 1e-10;
    /// Samples per fringe period for the contrast scan.
    pub const CONTRAST_SCAN_SAMPLES: usize = 1024;
}

/// Ordered set of momentum transfers `q` around the incident wave vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet {
    k0: WaveVector,
    transfers: Vec<WaveVector>,
}

impl BeamSet {
    pub fn new(k0: WaveVector, transfers: Vec<WaveVector>) -> Result<Self> {
        if transfers.is_empty() {
            return Err(Error::InvalidInput("beam set must contain at least one beam".into()));
        }
        if !k0.is_finite() || transfers.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidInput("wave vectors must be finite".into()));
        }
        if transfers.iter().any(WaveVector::is_zero) {
            return Err(Error::ForwardBeam);
        }
        for (i, a) in transfers.iter().enumerate() {
            if transfers[..i].contains(a) {
                return Err(Error::InvalidInput(format!(
                    "duplicate momentum transfer {:?} nm^-1",
                    a.to_per_nm()
                )));
            }
        }
        Ok(Self { k0, transfers })
    }

    /// The `{k₀ - G, k₀ + G}` basis.
    pub fn symmetric_two_beam(k0: WaveVector, g: WaveVector) -> Result<Self> {
        Self::new(k0, vec![-g, g])
    }

    pub fn k0(&self) -> WaveVector {
        self.k0
    }

    pub fn transfers(&self) -> &[WaveVector] {
        &self.transfers
    }

    pub fn len(&self) -> usize {
        self.transfers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transfers.is_empty()
    }

    /// Final electron wave vectors `k₀ + q`.
    pub fn final_states(&self) -> impl Iterator<Item = WaveVector> + '_ {
        self.transfers.iter().map(move |q| self.k0 + *q)
    }

    pub fn is_axial(&self) -> bool {
        self.transfers.iter().all(WaveVector::is_axial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyBase {
    #[default]
    Nats,
    Bits,
}

impl EntropyBase {
    pub fn name(self) -> &'static str {
        match self {
            Self::Nats => "nats",
            Self::Bits => "bits",
        }
    }
}

impl fmt::Display for EntropyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntropyBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" => Ok(Self::Nats),
            "bits" => Ok(Self::Bits),
            other => Err(Error::InvalidInput(format!("unknown entropy base `{other}`"))),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix `γ_{f,f'}` over a
/// [`BeamSet`]. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: BeamSet,
    gamma: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Normalize `unnormalized` to unit trace and validate it.
    pub fn from_unnormalized(basis: BeamSet, unnormalized: DMatrix<Complex64>) -> Result<Self> {
        let d = basis.len();
        if unnormalized.shape() != (d, d) {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix shape {:?} does not match {d} beams",
                unnormalized.shape()
            )));
        }
        let trace = unnormalized.trace().re;
        if !(trace > 0.0 && trace.is_finite()) {
            return Err(Error::DegenerateNormalization);
        }
        let rho = Self {
            basis,
            gamma: unnormalized.unscale(trace),
        };
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Pure state `|v⟩⟨v|/⟨v|v⟩`.
    pub fn pure(basis: BeamSet, amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Self::from_unnormalized(basis, &v * v.adjoint())
    }

    pub fn basis(&self) -> &BeamSet {
        &self.basis
    }

    pub fn gamma(&self) -> &DMatrix<Complex64> {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.gamma.trace()
    }

    /// `‖γ - γ†‖_F / ‖γ‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.gamma - self.gamma.adjoint()).norm() / self.gamma.norm()
    }

    /// Raw eigenvalues of the Hermitian part, ascending.
    pub fn raw_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.gamma + self.gamma.adjoint()).unscale(2.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn check_invariants(&self) -> Result<()> {
        let herm = self.hermiticity_residual();
        if !(herm <= tolerances::HERMITIAN) {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = self.trace();
        if !((tr.re - 1.0).abs() <= tolerances::TRACE && tr.im.abs() <= tolerances::TRACE) {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} ≠ 1")));
        }
        let ev = self.raw_eigenvalues();
        let (min, max) = (ev[0], ev[ev.len() - 1]);
        if min < -tolerances::PSD * max {
            return Err(Error::PositivityViolation(min));
        }
        Ok(())
    }

    /// Eigenvalues clipped into `[0, 1]` (ascending). Values further than
    /// [`tolerances::EIGEN_CLIP`] outside that range are errors.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.raw_eigenvalues()
            .into_iter()
            .map(|l| {
                if l < -tolerances::EIGEN_CLIP {
                    Err(Error::PositivityViolation(l))
                } else if l > 1.0 + tolerances::EIGEN_CLIP {
                    Err(Error::InvalidDensityMatrix(format!("eigenvalue {l} exceeds 1")))
                } else {
                    Ok(l.clamp(0.0, 1.0))
                }
            })
            .collect()
    }

    /// `tr γ² = Σ |γ_{q,q'}|²`.
    pub fn purity(&self) -> f64 {
        self.gamma.iter().map(Complex64::norm_sqr).sum()
    }

    /// `-Σ λ ln λ` from the eigenvalues, with `0 ln 0 = 0`.
    pub fn von_neumann_entropy(&self, base: EntropyBase) -> Result<f64> {
        let nats: f64 = self
            .eigenvalues()?
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.ln())
            .sum();
        Ok(match base {
            EntropyBase::Nats => nats,
            EntropyBase::Bits => nats / LN_2,
        })
    }

    /// Real-space diagonal `⟨r|ρ|r⟩ = Σ γ_{q,q'} e^{i(q-q')·r}`; averages to 1
    /// over a period because the trace is 1.
    pub fn intensity(&self, r: &Position) -> f64 {
        let qs = self.basis.transfers();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, qi) in qs.iter().enumerate() {
            for (j, qj) in qs.iter().enumerate() {
                acc += self.gamma[(i, j)] * Complex64::from_polar(1.0, (*qi - *qj).phase(r));
            }
        }
        acc.re
    }

    /// Fringe visibility `(I_max - I_min)/(I_max + I_min)` along
    /// `g_direction`, found by scanning one fringe period and refining the
    /// bracketing extrema. Two-beam bases only.
    pub fn fringe_contrast(&self, g_direction: &Vector3<f64>) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::UnsupportedBasis {
                expected: 2,
                actual: self.dim(),
            });
        }
        let dir = g_direction
            .try_normalize(0.0)
            .ok_or_else(|| Error::InvalidInput("fringe direction must be nonzero".into()))?;
        let qs = self.basis.transfers();
        let k = (qs[0] - qs[1]).0.dot(&dir).abs();
        if k == 0.0 {
            return Err(Error::Domain("fringes are perpendicular to the scan direction".into()));
        }
        let period = 2.0 * PI / k;
        let profile = |s: f64| self.intensity(&Position(dir * s));

        let n = tolerances::CONTRAST_SCAN_SAMPLES;
        let step = period / n as f64;
        let samples: Vec<f64> = (0..n).map(|i| profile(i as f64 * step)).collect();
        let (imax, _) = samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty scan");
        let (imin, _) = samples
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty scan");

        let refine = |i: usize, sign: f64| {
            let centre = i as f64 * step;
            let best = golden_section_min(|s| -sign * profile(s), centre - step, centre + step);
            (sign * profile(best)).max(sign * samples[i]) * sign
        };
        let max = refine(imax, 1.0);
        let min = refine(imin, -1.0);
        Ok((max - min) / (max + min))
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// `⟨F_{q'}|F_q⟩ = e^{i(q'-q)·⟨X̄⟩} e^{-|q'-q|² σ₀²/2}` for a Gaussian CM state.
pub fn overlap_gaussian(state: &SampleState, q: &WaveVector, q_prime: &WaveVector) -> Complex64 {
    if q == q_prime {
        return Complex64::new(1.0, 0.0);
    }
    let dq = *q_prime - *q;
    let u = dq.scaled_by(state.sigma0());
    Complex64::from_polar((-0.5 * u.norm_squared()).exp(), dq.phase(&state.cm_mean()))
}

/// Direct exponent route: `γ ∝ e^{-(|q|²+|q'|²-q·q')σ₀²} f_q f_{q'}*` with
/// caller-supplied amplitudes (one per beam).
pub fn build_rho_from_amplitudes(state: &SampleState, beams: &BeamSet, amplitudes: &[Complex64]) -> Result<DensityMatrix> {
    if amplitudes.len() != beams.len() {
        return Err(Error::InvalidInput(format!(
            "{} amplitudes for {} beams",
            amplitudes.len(),
            beams.len()
        )));
    }
    if amplitudes.iter().any(|f| !f.is_finite()) {
        return Err(Error::InvalidInput("amplitudes must be finite".into()));
    }
    let u: Vec<Vector3<f64>> = beams.transfers().iter().map(|q| q.scaled_by(state.sigma0())).collect();
    let d = beams.len();
    // shifting every exponent by the smallest diagonal one cancels in the
    // normalization and keeps wide CM states from underflowing to zero
    let shift = u.iter().map(Vector3::norm_squared).fold(f64::INFINITY, f64::min);
    let gamma = DMatrix::from_fn(d, d, |i, j| {
        let exponent = u[i].norm_squared() + u[j].norm_squared() - u[j].dot(&u[i]);
        amplitudes[i] * amplitudes[j].conj() * (shift - exponent).exp()
    });
    DensityMatrix::from_unnormalized(beams.clone(), gamma)
}

/// Gaussian-CM density matrix with lattice amplitudes (direct exponent route).
pub fn build_rho_asymptotic(
    state: &SampleState,
    lattice: &Lattice,
    wf: &AtomWavefunction,
    beams: &BeamSet,
    model: &AmplitudeModel,
) -> Result<DensityMatrix> {
    let f: Vec<Complex64> = beams
        .transfers()
        .iter()
        .map(|q| model.f_q(lattice, wf, q))
        .collect::<Result<_>>()?;
    build_rho_from_amplitudes(state, beams, &f)
}

/// Same matrix via `c_q c_{q'}* ⟨F_{q'}|F_q⟩`.
pub fn build_rho_factorized(
    state: &SampleState,
    lattice: &Lattice,
    wf: &AtomWavefunction,
    beams: &BeamSet,
    model: &AmplitudeModel,
) -> Result<DensityMatrix> {
    let qs = beams.transfers();
    // common factor e^{min q²σ₀²/2} on every c_q, removed again by the trace
    let shift = qs
        .iter()
        .map(|q| q.scaled_by(state.sigma0()).norm_squared())
        .fold(f64::INFINITY, f64::min);
    let c: Vec<Complex64> = qs
        .iter()
        .map(|q| {
            let f = model.f_q(lattice, wf, q)?;
            let u2 = q.scaled_by(state.sigma0()).norm_squared();
            Ok(f * Complex64::from_polar((0.5 * (shift - u2)).exp(), q.phase(&state.cm_mean())))
        })
        .collect::<Result<_>>()?;
    let d = beams.len();
    let gamma = DMatrix::from_fn(d, d, |i, j| c[i] * c[j].conj() * overlap_gaussian(state, &qs[i], &qs[j]));
    DensityMatrix::from_unnormalized(beams.clone(), gamma)
}

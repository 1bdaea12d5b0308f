//! Brute-force evaluation of the general elastic-scattering expressions for
//! a product of independent single-atom wavefunctions, by direct quadrature.
//!
//! The sample state is `|I⟩ = ⊗_j |φ_j⟩` with `φ_j(x) = φ(x - R_j)` in 1D
//! (along `z`). Every expectation value needed here is of the form
//! `⟨I| e^{i Σ_j a_j X_j} |I⟩`, which factorizes into a product of
//! one-dimensional integrals `∫ |φ(u)|² e^{i a_j u} du · e^{i a_j R_j}`.
//!
//! Conventions: the final sample state after a transfer `q` is the rigid
//! boost `e^{-iq X̄}|I⟩`, so
//!
//! * `c_q = (Z e²/q²) ⟨I| Σ_j e^{iq(X̄ - X_j)} |I⟩`
//! * `⟨F_{q'}|F_q⟩ = ⟨I| e^{i(q' - q) X̄} |I⟩`
//! * `γ_{q,q'} ∝ c_q c_{q'}* ⟨F_{q'}|F_q⟩`
//!
//! This `c_q` is the complex conjugate phase convention of writing the
//! interaction as `e^{-iq·X_j}` sandwiched between `⟨F|` and `|I⟩`; moduli
//! and all observables agree.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::amplitudes::AmplitudeModel;
use crate::density_matrix::{BeamSet, DensityMatrix};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::sample::{AtomWavefunction, Lattice};
use crate::units::{InverseLength, Length};
use crate::vectors::WaveVector;

/// Quadrature and guard settings for the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Gauss–Legendre order per panel.
    pub order: usize,
    /// Panels per smooth segment of the single-atom density.
    pub panels: usize,
    /// Half-width of the integration window for Gaussian atoms, in σ.
    pub gaussian_cutoff: f64,
    /// Largest atom count accepted by [`ProductState`].
    pub max_atoms: usize,
    /// Largest acceptable quadrature error estimate.
    pub tolerance: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            order: 16,
            panels: 16,
            gaussian_cutoff: 8.0,
            max_atoms: 8,
            tolerance: 1e-8,
        }
    }
}

impl OracleSettings {
    /// Same rule with half the panel width.
    pub fn refined(&self) -> Self {
        Self {
            panels: self.panels * 2,
            ..self.clone()
        }
    }
}

/// `n` identical atoms at 1D sites `R_j`.
#[derive(Debug, Clone)]
pub struct ProductState {
    shape: AtomWavefunction,
    sites: Vec<Length>,
    settings: OracleSettings,
    rule: GaussLegendre,
}

impl ProductState {
    pub fn new(shape: AtomWavefunction, sites: Vec<Length>) -> Result<Self> {
        Self::with_settings(shape, sites, OracleSettings::default())
    }

    pub fn with_settings(shape: AtomWavefunction, sites: Vec<Length>, settings: OracleSettings) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidInput("product state needs at least one atom".into()));
        }
        if sites.len() > settings.max_atoms {
            return Err(Error::InvalidInput(format!(
                "{} atoms exceed the oracle limit of {}",
                sites.len(),
                settings.max_atoms
            )));
        }
        if sites.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidInput("atom sites must be finite".into()));
        }
        if settings.order == 0 || settings.panels == 0 {
            return Err(Error::InvalidInput("quadrature needs at least one node and panel".into()));
        }
        let rule = GaussLegendre::new(settings.order);
        let state = Self {
            shape,
            sites,
            settings,
            rule,
        };
        let norm = state.single_atom_characteristic(0.0)?;
        if (norm.re - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "single-atom density integrates to {} on the quadrature grid",
                norm.re
            )));
        }
        Ok(state)
    }

    /// Sites taken from the `z` coordinates of an axial lattice.
    pub fn from_lattice(lattice: &Lattice, shape: AtomWavefunction, settings: OracleSettings) -> Result<Self> {
        if !lattice.is_axial() {
            return Err(Error::InvalidInput("oracle lattices must lie along z".into()));
        }
        let sites = lattice.positions().iter().map(|p| Length::from_m(p.0.z)).collect();
        Self::with_settings(shape, sites, settings)
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Length] {
        &self.sites
    }

    pub fn shape(&self) -> &AtomWavefunction {
        &self.shape
    }

    pub fn settings(&self) -> &OracleSettings {
        &self.settings
    }

    /// Same state with half the panel width.
    pub fn refined(&self) -> Result<Self> {
        Self::with_settings(self.shape.clone(), self.sites.clone(), self.settings.refined())
    }

    /// `∫ |φ(u)|² e^{iku} du` in the atom's local coordinate, `k` in m⁻¹.
    ///
    /// Each call also evaluates the rule on twice as many panels and fails if
    /// the two disagree by more than the tolerance.
    pub fn single_atom_characteristic(&self, k: f64) -> Result<Complex64> {
        let (value, estimate) = match &self.shape {
            AtomWavefunction::Tabulated(tab) => {
                let k_nm = k * 1e-9;
                let fine = trapezoid_characteristic(tab.positions(), tab.amplitudes(), k_nm, 1);
                let coarse = trapezoid_characteristic(tab.positions(), tab.amplitudes(), k_nm, 2);
                // Richardson: error of the fine trapezoid ≈ (fine - coarse)/3
                (fine, (fine - coarse).norm() / 3.0)
            }
            shape => {
                let segments = density_segments(shape, self.settings.gaussian_cutoff);
                let eval = |panels: usize| {
                    segments
                        .iter()
                        .map(|&(a, b)| {
                            self.rule.integrate_composite(a, b, panels, |u| {
                                Complex64::from_polar(density(shape, u), k * u)
                            })
                        })
                        .sum::<Complex64>()
                };
                let fine = eval(self.settings.panels * 2);
                (fine, (fine - eval(self.settings.panels)).norm())
            }
        };
        if estimate > self.settings.tolerance {
            return Err(Error::QuadratureAccuracy {
                estimate,
                tolerance: self.settings.tolerance,
            });
        }
        Ok(value)
    }

    /// `⟨I| e^{i Σ_j a_j X_j} |I⟩` for per-atom wave numbers `a_j`.
    fn product_expectation(&self, a: impl Fn(usize) -> f64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for (j, r) in self.sites.iter().enumerate() {
            let k = a(j);
            acc *= self.single_atom_characteristic(k)? * Complex64::from_polar(1.0, k * r.si());
        }
        Ok(acc)
    }

    /// CM characteristic function `⟨I| e^{ik X̄} |I⟩`.
    pub fn cm_characteristic(&self, k: InverseLength) -> Result<Complex64> {
        if k.si() == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let n = self.n() as f64;
        self.product_expectation(|_| k.si() / n)
    }

    /// `c_q = (Z e²/q²) ⟨I| Σ_j e^{iq(X̄ - X_j)} |I⟩`.
    pub fn c_q_exact(&self, q: InverseLength, atomic_number: u32, model: &AmplitudeModel) -> Result<Complex64> {
        let envelope = model.rutherford_envelope(atomic_number, &WaveVector::along_z(q))?;
        let n = self.n() as f64;
        let q = q.si();
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..self.n() {
            sum += self.product_expectation(|m| if m == j { -q * (1.0 - 1.0 / n) } else { q / n })?;
        }
        Ok(sum * envelope)
    }
}

/// Trapezoid of `|φ|² e^{ikx}` using every `stride`-th grid point (the last
/// point is always kept). Positions in nm, `k` in nm⁻¹.
fn trapezoid_characteristic(x: &[Length], amp: &[Complex64], k_nm: f64, stride: usize) -> Complex64 {
    let mut idx: Vec<usize> = (0..x.len()).step_by(stride).collect();
    if *idx.last().expect("nonempty grid") != x.len() - 1 {
        idx.push(x.len() - 1);
    }
    let f = |i: usize| {
        let xn = x[i].nm();
        (xn, Complex64::from_polar(amp[i].norm_sqr(), k_nm * xn))
    };
    idx.windows(2)
        .map(|w| {
            let (x0, f0) = f(w[0]);
            let (x1, f1) = f(w[1]);
            (f0 + f1) * (0.5 * (x1 - x0))
        })
        .sum()
}

/// Smooth pieces of the density's support, in metres.
fn density_segments(shape: &AtomWavefunction, gaussian_cutoff: f64) -> Vec<(f64, f64)> {
    match shape {
        AtomWavefunction::Gaussian { sigma } => {
            let h = gaussian_cutoff * sigma.si();
            vec![(-h, h)]
        }
        AtomWavefunction::Box { width } => vec![(-0.5 * width.si(), 0.5 * width.si())],
        AtomWavefunction::Triangle { half_width } => {
            let h = half_width.si();
            vec![(-h, 0.0), (0.0, h)]
        }
        AtomWavefunction::Tabulated(_) => unreachable!("tabulated densities use the trapezoid path"),
    }
}

/// Single-atom probability density in m⁻¹ at local coordinate `u` (m).
fn density(shape: &AtomWavefunction, u: f64) -> f64 {
    match shape {
        AtomWavefunction::Gaussian { sigma } => {
            let s = sigma.si();
            (-0.5 * (u / s).powi(2)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
        }
        AtomWavefunction::Box { width } => {
            let w = width.si();
            if u.abs() <= 0.5 * w {
                1.0 / w
            } else {
                0.0
            }
        }
        AtomWavefunction::Triangle { half_width } => {
            let h = half_width.si();
            ((1.0 - u.abs() / h) / h).max(0.0)
        }
        AtomWavefunction::Tabulated(_) => unreachable!("tabulated densities use the trapezoid path"),
    }
}

/// Everything the oracle computes for one beam set.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// `c_q` in beam order.
    pub c_q: Vec<Complex64>,
    /// `⟨F_{q_j}|F_{q_i}⟩` at `(i, j)`.
    pub overlaps: DMatrix<Complex64>,
    pub rho: DensityMatrix,
}

/// `γ_{q,q'} ∝ c_q c_{q'}* ⟨I|e^{i(q'-q)X̄}|I⟩` by quadrature. Beams must be
/// along `z`.
pub fn build_rho_oracle(
    state: &ProductState,
    beams: &BeamSet,
    atomic_number: u32,
    model: &AmplitudeModel,
) -> Result<OracleResult> {
    if !beams.is_axial() {
        return Err(Error::InvalidInput("oracle beams must lie along z".into()));
    }
    let qs: Vec<f64> = beams.transfers().iter().map(WaveVector::z).collect();
    let c_q: Vec<Complex64> = qs
        .iter()
        .map(|&q| state.c_q_exact(InverseLength::from_per_m(q), atomic_number, model))
        .collect::<Result<_>>()?;
    let d = qs.len();
    let mut overlaps = DMatrix::from_element(d, d, Complex64::new(1.0, 0.0));
    for i in 0..d {
        for j in 0..d {
            if i != j {
                overlaps[(i, j)] = state.cm_characteristic(InverseLength::from_per_m(qs[j] - qs[i]))?;
            }
        }
    }
    let gamma = DMatrix::from_fn(d, d, |i, j| c_q[i] * c_q[j].conj() * overlaps[(i, j)]);
    let rho = DensityMatrix::from_unnormalized(beams.clone(), gamma)?;
    Ok(OracleResult { c_q, overlaps, rho })
}

/// Closed-form evaluation of the same expectations for Gaussian atoms of
/// width `σ` on a lattice (any direction):
///
/// * `c_q = (Z e²/q²) e^{-q²σ²(1-1/n)/2} Σ_j e^{iq·(R̄ - R_j)}`
/// * `⟨F_{q'}|F_q⟩ = e^{i(q'-q)·R̄} e^{-|q'-q|²σ²/(2n)}`
pub fn build_rho_gaussian_product(
    lattice: &Lattice,
    sigma: Length,
    beams: &BeamSet,
    model: &AmplitudeModel,
) -> Result<DensityMatrix> {
    if !(sigma.si() > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput("atomic σ must be finite and > 0".into()));
    }
    let n = lattice.n() as f64;
    let centre = lattice.cm_mean();
    let s2 = sigma.si() * sigma.si();
    let qs = beams.transfers();
    let c: Vec<Complex64> = qs
        .iter()
        .map(|q| {
            let envelope = model.rutherford_envelope(lattice.atomic_number(), q)?;
            let phases: Complex64 = lattice
                .positions()
                .iter()
                .map(|r| Complex64::from_polar(1.0, q.phase(&(centre - *r))))
                .sum();
            Ok(phases * envelope * (-0.5 * q.norm_squared() * s2 * (1.0 - 1.0 / n)).exp())
        })
        .collect::<Result<_>>()?;
    let d = qs.len();
    let gamma = DMatrix::from_fn(d, d, |i, j| {
        let dq = qs[j] - qs[i];
        let overlap = Complex64::from_polar((-0.5 * dq.norm_squared() * s2 / n).exp(), dq.phase(&centre));
        c[i] * c[j].conj() * overlap
    });
    DensityMatrix::from_unnormalized(beams.clone(), gamma)
}

/// One row of a central-limit convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltRow {
    pub n: usize,
    pub k_sigma0: f64,
    pub deviation: f64,
}

/// Distance between the CM characteristic function of `n` co-centred atoms
/// and its Gaussian limit, at fixed `k·σ₀` with `σ₀ = σ/√n`.
pub fn clt_convergence(wf: &AtomWavefunction, n_values: &[usize], k_sigma0: f64, settings: &OracleSettings) -> Result<Vec<CltRow>> {
    if !k_sigma0.is_finite() {
        return Err(Error::InvalidInput("k·σ₀ must be finite".into()));
    }
    let sigma = wf.std_dev();
    let limit = (-0.5 * k_sigma0 * k_sigma0).exp();
    n_values
        .iter()
        .map(|&n| {
            let state = ProductState::with_settings(wf.clone(), vec![Length::ZERO; n], settings.clone())?;
            let sigma0 = sigma / (n as f64).sqrt();
            let k = InverseLength::from_per_m(k_sigma0 / sigma0.si());
            let chi = state.cm_characteristic(k)?;
            Ok(CltRow {
                n,
                k_sigma0,
                deviation: (chi - limit).norm(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::gaussian_characteristic;
    use crate::sample::TabulatedWavefunction;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gaussian(pm: f64) -> AtomWavefunction {
        AtomWavefunction::gaussian(Length::from_pm(pm)).unwrap()
    }

    fn sites_nm(z: &[f64]) -> Vec<Length> {
        z.iter().map(|&z| Length::from_nm(z)).collect()
    }

    fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            x.sin() / x
        }
    }

    #[test]
    fn single_atom_shapes_match_closed_forms() {
        let k = 3.7e10;
        let g = ProductState::new(gaussian(15.0), sites_nm(&[0.0])).unwrap();
        assert_relative_eq!(
            g.single_atom_characteristic(k).unwrap().re,
            gaussian_characteristic(k * k, Length::from_pm(15.0)),
            epsilon = 1e-13
        );
        let w = 40e-12;
        let b = ProductState::new(AtomWavefunction::box_profile(Length::from_m(w)).unwrap(), sites_nm(&[0.0])).unwrap();
        let chi = b.single_atom_characteristic(k).unwrap();
        assert_relative_eq!(chi.re, sinc(k * w / 2.0), epsilon = 1e-13);
        assert!(chi.im.abs() < 1e-13);
        let h = 25e-12;
        let t = ProductState::new(AtomWavefunction::triangle(Length::from_m(h)).unwrap(), sites_nm(&[0.0])).unwrap();
        assert_relative_eq!(t.single_atom_characteristic(k).unwrap().re, sinc(k * h / 2.0).powi(2), epsilon = 1e-13);
    }

    #[test]
    fn cm_characteristic_at_zero_is_one() {
        let s = ProductState::new(AtomWavefunction::box_profile(Length::from_pm(30.0)).unwrap(), sites_nm(&[0.0, 0.2, 0.4])).unwrap();
        assert_eq!(s.cm_characteristic(InverseLength::ZERO).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gaussian_cm_characteristic_is_exact_for_any_n() {
        let sigma = Length::from_pm(20.0);
        for n in 1..=8 {
            let z: Vec<f64> = (0..n).map(|j| 0.17 * j as f64 - 0.05).collect();
            let s = ProductState::new(AtomWavefunction::Gaussian { sigma }, sites_nm(&z)).unwrap();
            let mean = z.iter().sum::<f64>() / n as f64 * 1e-9;
            let sigma0 = sigma.si() / (n as f64).sqrt();
            for k in [1e9, 1.3e10, 4e10] {
                let want = Complex64::from_polar((-0.5 * (k * sigma0).powi(2)).exp(), k * mean);
                let got = s.cm_characteristic(InverseLength::from_per_m(k)).unwrap();
                assert!((got - want).norm() < 1e-8, "n={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn box_small_k_series() {
        let w = 50e-12;
        let s = ProductState::new(AtomWavefunction::box_profile(Length::from_m(w)).unwrap(), sites_nm(&[0.0])).unwrap();
        let k = 1e9; // k w = 0.05
        let chi = s.cm_characteristic(InverseLength::from_per_m(k)).unwrap();
        // sinc(x/2) = 1 - x²/24 + x⁴/1920 - ..., x = k w; the x² term is k²(w²/12)/2
        let x = k * w;
        let series = 1.0 - k * k * (w * w / 12.0) / 2.0 + x.powi(4) / 1920.0;
        assert!((chi.re - series).abs() < 1e-12, "{chi} vs {series}");
    }

    #[test]
    fn c_q_single_atom_is_rutherford() {
        let m = AmplitudeModel::default();
        for shape in [gaussian(10.0), AtomWavefunction::box_profile(Length::from_pm(30.0)).unwrap()] {
            let s = ProductState::new(shape, sites_nm(&[0.3])).unwrap();
            let c = s.c_q_exact(InverseLength::from_per_nm(10.0), 6, &m).unwrap();
            assert_relative_eq!(c.re, 6.0 / 100.0, max_relative = 1e-13);
            assert!(c.im.abs() < 1e-15);
        }
    }

    #[test]
    fn c_q_gaussian_closed_form() {
        // For independent Gaussians X_j - X̄ is Gaussian with variance
        // σ²(1 - 1/n) and independent of X̄, so
        // c_q = env · e^{-q²σ²(1-1/n)/2} Σ_j e^{iq(R̄ - R_j)}.
        let sigma = 12e-12;
        let z = [0.0, 0.21, 0.39, 0.62];
        let s = ProductState::new(gaussian(12.0), sites_nm(&z)).unwrap();
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n * 1e-9;
        let m = AmplitudeModel::default();
        for q_nm in [-25.0, 7.0, 31.4] {
            let q = q_nm * 1e9;
            let phase: Complex64 = z.iter().map(|&r| Complex64::from_polar(1.0, q * (mean - r * 1e-9))).sum();
            let want = phase * (6.0 / (q_nm * q_nm)) * (-0.5 * q * q * sigma * sigma * (1.0 - 1.0 / n)).exp();
            let got = s.c_q_exact(InverseLength::from_per_m(q), 6, &m).unwrap();
            assert!((got - want).norm() < 1e-10 * want.norm().max(1e-3), "{got} vs {want}");
        }
    }

    #[test]
    fn gaussian_product_closed_form_matches_quadrature() {
        let z = [0.0, 0.21, 0.39];
        let s = ProductState::new(gaussian(18.0), sites_nm(&z)).unwrap();
        let lattice = Lattice::new(
            z.iter().map(|&z| crate::vectors::Position::from_nm([0.0, 0.0, z])).collect(),
            6,
            crate::units::Mass::from_amu(12.0),
        )
        .unwrap();
        let beams = BeamSet::new(WaveVector::default(), [-15.0, 15.0, 30.0].map(|q| WaveVector::from_per_nm([0.0, 0.0, q])).to_vec()).unwrap();
        let m = AmplitudeModel::default();
        let quad = build_rho_oracle(&s, &beams, 6, &m).unwrap().rho;
        let closed = build_rho_gaussian_product(&lattice, Length::from_pm(18.0), &beams, &m).unwrap();
        assert!((quad.gamma() - closed.gamma()).norm() < 1e-9);
    }

    #[test]
    fn point_atoms_are_pure() {
        let s = ProductState::new(gaussian(1e-4), sites_nm(&[0.0, 0.2])).unwrap();
        let beams = BeamSet::new(WaveVector::default(), [-10.0, 5.0, 20.0].map(|q| WaveVector::from_per_nm([0.0, 0.0, q])).to_vec()).unwrap();
        let r = build_rho_oracle(&s, &beams, 6, &AmplitudeModel::default()).unwrap();
        assert!((r.rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_box_atoms_are_mixed() {
        let s = ProductState::new(AtomWavefunction::box_profile(Length::from_pm(80.0)).unwrap(), sites_nm(&[0.0, 0.2])).unwrap();
        let beams = BeamSet::symmetric_two_beam(WaveVector::default(), WaveVector::from_per_nm([0.0, 0.0, 2.0 * std::f64::consts::PI / 0.2])).unwrap();
        let r = build_rho_oracle(&s, &beams, 6, &AmplitudeModel::default()).unwrap();
        let p = r.rho.purity();
        assert!(p < 1.0);
        // regression baseline from the first verified run
        assert!((p - TWO_BOX_PURITY).abs() < 1e-10, "{p:.15}");
        for i in 0..2 {
            assert!((r.overlaps[(i, i)] - 1.0).norm() < 1e-10);
        }
    }

    // cross-checked with an independent 200-point Gauss-Legendre tensor rule in numpy
    const TWO_BOX_PURITY: f64 = 0.664_042_300_236_004;

    #[test]
    fn too_many_atoms_rejected() {
        let z: Vec<f64> = (0..9).map(|j| j as f64 * 0.1).collect();
        assert!(ProductState::new(gaussian(5.0), sites_nm(&z)).is_err());
        let settings = OracleSettings { max_atoms: 16, ..Default::default() };
        assert!(ProductState::with_settings(gaussian(5.0), sites_nm(&z), settings).is_ok());
    }

    #[test]
    fn coarse_grid_is_reported() {
        let settings = OracleSettings { order: 2, panels: 1, ..Default::default() };
        let s = ProductState::with_settings(gaussian(20.0), sites_nm(&[0.0]), settings);
        assert!(matches!(s, Err(Error::QuadratureAccuracy { .. })), "{s:?}");
    }

    #[test]
    fn off_axis_beams_rejected() {
        let s = ProductState::new(gaussian(5.0), sites_nm(&[0.0])).unwrap();
        let beams = BeamSet::new(WaveVector::default(), vec![WaveVector::from_per_nm([1.0, 0.0, 3.0])]).unwrap();
        assert!(build_rho_oracle(&s, &beams, 6, &AmplitudeModel::default()).is_err());
    }

    #[test]
    fn tabulated_gaussian_matches_analytic() {
        let sigma_nm = 0.015;
        let grid: Vec<(f64, Complex64)> = (-400..=400)
            .map(|i| {
                let x = i as f64 * 0.0005;
                let rho = (-0.5 * (x / sigma_nm).powi(2)).exp() / (sigma_nm * (2.0 * std::f64::consts::PI).sqrt());
                (x, Complex64::new(rho.sqrt(), 0.0))
            })
            .collect();
        let tab = TabulatedWavefunction::from_nm_grid(&grid).unwrap();
        let wf = AtomWavefunction::Tabulated(tab);
        assert_relative_eq!(wf.std_dev().nm(), sigma_nm, max_relative = 1e-9);
        let s = ProductState::new(wf, sites_nm(&[0.0, 0.3])).unwrap();
        let g = ProductState::new(gaussian(15.0), sites_nm(&[0.0, 0.3])).unwrap();
        let k = InverseLength::from_per_nm(20.0);
        assert!((s.cm_characteristic(k).unwrap() - g.cm_characteristic(k).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn clt_examples() {
        let st = OracleSettings::default();
        let rows = clt_convergence(&gaussian(10.0), &[1, 2, 4, 8], 1.3, &st).unwrap();
        assert!(rows.iter().all(|r| r.deviation <= 1e-10), "{rows:?}");

        let rows = clt_convergence(&AtomWavefunction::box_profile(Length::from_pm(30.0)).unwrap(), &[1, 2, 4, 8], 1.0, &st).unwrap();
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation), "{rows:?}");

        let rows = clt_convergence(&AtomWavefunction::triangle(Length::from_pm(30.0)).unwrap(), &[1, 2, 3], 0.0, &st).unwrap();
        assert!(rows.iter().all(|r| r.deviation == 0.0));
    }

    proptest! {
        #[test]
        fn characteristic_is_bounded_and_hermitian(k_nm in -60.0f64..60.0, shape_ix in 0usize..3, z in prop::collection::vec(-0.5f64..0.5, 1..5)) {
            let shape = match shape_ix {
                0 => gaussian(14.0),
                1 => AtomWavefunction::box_profile(Length::from_pm(45.0)).unwrap(),
                _ => AtomWavefunction::triangle(Length::from_pm(30.0)).unwrap(),
            };
            let s = ProductState::new(shape, sites_nm(&z)).unwrap();
            let k = InverseLength::from_per_nm(k_nm);
            let plus = s.cm_characteristic(k).unwrap();
            let minus = s.cm_characteristic(InverseLength::from_per_nm(-k_nm)).unwrap();
            prop_assert!(plus.norm() <= 1.0 + 1e-12);
            prop_assert!((minus - plus.conj()).norm() <= 1e-12);
        }
    }
}

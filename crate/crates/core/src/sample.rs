//! The scatterer: a rigid lattice of identical atoms, the single-atom
//! probability profile, and the Gaussian centre-of-mass state derived from
//! them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{Length, Mass};
use crate::vectors::Position;

/// Rigid monoatomic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    positions: Vec<Position>,
    atomic_number: u32,
    atom_mass: Mass,
}

impl Lattice {
    pub const CARBON_Z: u32 = 6;
    pub const CARBON_MASS_AMU: f64 = 12.0;

    pub fn new(positions: Vec<Position>, atomic_number: u32, atom_mass: Mass) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidInput("lattice needs at least one atom".into()));
        }
        if let Some(j) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("atom {j} has a non-finite position")));
        }
        if atomic_number == 0 {
            return Err(Error::InvalidInput("atomic number must be positive".into()));
        }
        if !(atom_mass.si() > 0.0 && atom_mass.is_finite()) {
            return Err(Error::InvalidInput("atom mass must be positive".into()));
        }
        Ok(Self {
            positions,
            atomic_number,
            atom_mass,
        })
    }

    /// `n` carbon atoms at `j·spacing` along `z`, `j = 0..n`.
    pub fn linear_chain(n: usize, spacing: Length) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("chain needs at least one atom".into()));
        }
        if !(spacing.si() > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidInput("chain spacing must be positive".into()));
        }
        let positions = (0..n).map(|j| Position::along_z(spacing * j as f64)).collect();
        Self::new(positions, Self::CARBON_Z, Mass::from_amu(Self::CARBON_MASS_AMU))
    }

    pub fn with_species(mut self, atomic_number: u32, atom_mass: Mass) -> Result<Self> {
        self.atomic_number = atomic_number;
        self.atom_mass = atom_mass;
        Self::new(self.positions, self.atomic_number, self.atom_mass)
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn atomic_number(&self) -> u32 {
        self.atomic_number
    }

    pub fn atom_mass(&self) -> Mass {
        self.atom_mass
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn total_mass(&self) -> Mass {
        self.atom_mass * self.n() as f64
    }

    pub fn cm_mean(&self) -> Position {
        let sum = self
            .positions
            .iter()
            .fold(nalgebra::Vector3::zeros(), |acc, p| acc + p.0);
        Position(sum / self.n() as f64)
    }

    pub fn translated(&self, d: Position) -> Self {
        Self {
            positions: self.positions.iter().map(|p| *p + d).collect(),
            ..self.clone()
        }
    }

    /// True when every position is only along `z`.
    pub fn is_axial(&self) -> bool {
        self.positions.iter().all(|p| p.0.x == 0.0 && p.0.y == 0.0)
    }
}

/// Single-atom wavefunction on a tabulated 1D grid (local coordinate relative
/// to the atom's lattice site). Amplitudes are in nm^(-1/2) so that
/// `∫|φ|² dx = 1` with `x` in nm.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedWavefunction {
    positions: Vec<Length>,
    amplitudes: Vec<Complex64>,
}

impl TabulatedWavefunction {
    pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

    pub fn new(positions: Vec<Length>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if positions.len() != amplitudes.len() {
            return Err(Error::InvalidInput(format!(
                "tabulated wavefunction has {} positions but {} amplitudes",
                positions.len(),
                amplitudes.len()
            )));
        }
        if positions.len() < 3 {
            return Err(Error::InvalidInput("tabulated wavefunction needs at least 3 grid points".into()));
        }
        if positions.windows(2).any(|w| !(w[1].si() > w[0].si())) {
            return Err(Error::InvalidInput("tabulated grid must be strictly increasing".into()));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("tabulated amplitudes must be finite".into()));
        }
        let tab = Self { positions, amplitudes };
        let norm = tab.trapezoid(|_, rho| rho);
        if (norm - 1.0).abs() > Self::NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "tabulated wavefunction is not normalized: ∫|φ|²dx = {norm}"
            )));
        }
        Ok(tab)
    }

    /// Build from `(position nm, amplitude)` pairs.
    pub fn from_nm_grid(grid: &[(f64, Complex64)]) -> Result<Self> {
        Self::new(
            grid.iter().map(|(x, _)| Length::from_nm(*x)).collect(),
            grid.iter().map(|(_, a)| *a).collect(),
        )
    }

    pub fn positions(&self) -> &[Length] {
        &self.positions
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Trapezoidal `∫ g(x, |φ(x)|²) dx` with `x` in nm.
    pub fn trapezoid(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .positions
            .iter()
            .zip(&self.amplitudes)
            .map(|(x, a)| {
                let x = x.nm();
                (x, g(x, a.norm_sqr()))
            })
            .collect();
        pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
    }

    fn std_dev(&self) -> Length {
        let mean = self.trapezoid(|x, rho| x * rho);
        let var = self.trapezoid(|x, rho| (x - mean).powi(2) * rho);
        Length::from_nm(var.max(0.0).sqrt())
    }
}

/// Single-atom position profile. All widths refer to the probability density
/// `|φ|²`, not the amplitude.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomWavefunction {
    /// Gaussian density with standard deviation `sigma`.
    Gaussian { sigma: Length },
    /// Uniform density on `[-width/2, width/2]`.
    Box { width: Length },
    /// Triangular density on `[-half_width, half_width]`.
    Triangle { half_width: Length },
    Tabulated(TabulatedWavefunction),
}

impl AtomWavefunction {
    pub fn gaussian(sigma: Length) -> Result<Self> {
        Self::Gaussian { sigma }.validated()
    }

    pub fn box_profile(width: Length) -> Result<Self> {
        Self::Box { width }.validated()
    }

    pub fn triangle(half_width: Length) -> Result<Self> {
        Self::Triangle { half_width }.validated()
    }

    /// Box with the given density standard deviation.
    pub fn box_with_std(sigma: Length) -> Result<Self> {
        Self::box_profile(sigma * 12f64.sqrt())
    }

    /// Triangle with the given density standard deviation.
    pub fn triangle_with_std(sigma: Length) -> Result<Self> {
        Self::triangle(sigma * 6f64.sqrt())
    }

    fn validated(self) -> Result<Self> {
        let w = match &self {
            Self::Gaussian { sigma } => *sigma,
            Self::Box { width } => *width,
            Self::Triangle { half_width } => *half_width,
            Self::Tabulated(_) => return Ok(self),
        };
        if w.si() > 0.0 && w.is_finite() {
            Ok(self)
        } else {
            Err(Error::InvalidInput(format!("{} width must be positive", self.kind())))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Box { .. } => "box",
            Self::Triangle { .. } => "triangle",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// Standard deviation of the single-atom density.
    pub fn std_dev(&self) -> Length {
        match self {
            Self::Gaussian { sigma } => *sigma,
            Self::Box { width } => *width / 12f64.sqrt(),
            Self::Triangle { half_width } => *half_width / 6f64.sqrt(),
            Self::Tabulated(t) => t.std_dev(),
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, Self::Gaussian { .. })
    }
}

/// Gaussian centre-of-mass description of the scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleState {
    cm_mean: Position,
    sigma0: Length,
    total_mass: Mass,
}

impl SampleState {
    /// `sigma0 = 0` is accepted and represents a perfectly localized
    /// (static-potential) scatterer.
    pub fn new(cm_mean: Position, sigma0: Length, total_mass: Mass) -> Result<Self> {
        if !cm_mean.is_finite() {
            return Err(Error::InvalidInput("centre-of-mass mean must be finite".into()));
        }
        if !(sigma0.si() >= 0.0 && sigma0.is_finite()) {
            return Err(Error::InvalidInput("σ₀ must be finite and non-negative".into()));
        }
        if !(total_mass.si() > 0.0 && total_mass.is_finite()) {
            return Err(Error::InvalidInput("total mass must be positive".into()));
        }
        Ok(Self {
            cm_mean,
            sigma0,
            total_mass,
        })
    }

    /// CM state of `n` independent Gaussian atoms without materializing the
    /// lattice: `σ₀ = σ/√n`, `M = n·m`.
    pub fn from_identical_atoms(n: f64, atom_mass: Mass, atom_sigma: Length, cm_mean: Position) -> Result<Self> {
        if !(n >= 1.0 && n.is_finite()) {
            return Err(Error::InvalidInput("atom count must be at least 1".into()));
        }
        Self::new(cm_mean, atom_sigma / n.sqrt(), atom_mass * n)
    }

    pub fn cm_mean(&self) -> Position {
        self.cm_mean
    }

    pub fn sigma0(&self) -> Length {
        self.sigma0
    }

    pub fn total_mass(&self) -> Mass {
        self.total_mass
    }

    pub fn with_sigma0(self, sigma0: Length) -> Result<Self> {
        Self::new(self.cm_mean, sigma0, self.total_mass)
    }

    pub fn translated(self, d: Position) -> Self {
        Self {
            cm_mean: self.cm_mean + d,
            ..self
        }
    }
}

/// Gaussian CM state of a lattice of independent Gaussian atoms.
pub fn cm_state_from_lattice(lattice: &Lattice, wf: &AtomWavefunction) -> Result<SampleState> {
    let AtomWavefunction::Gaussian { sigma } = wf else {
        return Err(Error::UnsupportedAnalytic(wf.kind()));
    };
    SampleState::new(
        lattice.cm_mean(),
        *sigma / (lattice.n() as f64).sqrt(),
        lattice.total_mass(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gaussian(pm: f64) -> AtomWavefunction {
        AtomWavefunction::gaussian(Length::from_pm(pm)).unwrap()
    }

    #[test]
    fn single_atom_keeps_sigma() {
        let lat = Lattice::linear_chain(1, Length::from_nm(0.2)).unwrap();
        let s = cm_state_from_lattice(&lat, &gaussian(3.0)).unwrap();
        assert_relative_eq!(s.sigma0().pm(), 3.0, max_relative = 1e-15);
        assert_eq!(s.cm_mean(), Position::default());
    }

    #[test]
    fn four_atoms_halve_sigma() {
        let lat = Lattice::linear_chain(4, Length::from_nm(0.2)).unwrap();
        let s = cm_state_from_lattice(&lat, &gaussian(6.0)).unwrap();
        assert_relative_eq!(s.sigma0().pm(), 3.0, max_relative = 1e-15);
    }

    #[test]
    fn sixty_carbon_atoms() {
        let lat = Lattice::linear_chain(60, Length::from_nm(0.142)).unwrap();
        let s = cm_state_from_lattice(&lat, &gaussian(23.24)).unwrap();
        assert!((s.sigma0().pm() - 3.0003).abs() < 5e-5, "{}", s.sigma0().pm());
        assert_relative_eq!(s.total_mass().amu(), 720.0, max_relative = 1e-14);
    }

    #[test]
    fn tabulated_is_not_analytic() {
        let grid: Vec<(f64, Complex64)> = (0..=200)
            .map(|i| {
                let x = -0.1 + 0.001 * i as f64;
                (x, Complex64::new(if x.abs() <= 0.05 + 1e-12 { 10f64.sqrt() } else { 0.0 }, 0.0))
            })
            .collect();
        // trapezoid of a box edge is not exactly 1; rescale onto the grid first
        let raw = TabulatedWavefunction {
            positions: grid.iter().map(|(x, _)| Length::from_nm(*x)).collect(),
            amplitudes: grid.iter().map(|(_, a)| *a).collect(),
        };
        let norm = raw.trapezoid(|_, r| r);
        let grid: Vec<_> = grid.iter().map(|(x, a)| (*x, a / norm.sqrt())).collect();
        let wf = AtomWavefunction::Tabulated(TabulatedWavefunction::from_nm_grid(&grid).unwrap());
        let lat = Lattice::linear_chain(2, Length::from_nm(0.2)).unwrap();
        assert_eq!(cm_state_from_lattice(&lat, &wf), Err(Error::UnsupportedAnalytic("tabulated")));
    }

    #[test]
    fn chain_geometry() {
        let lat = Lattice::linear_chain(1, Length::from_nm(0.2)).unwrap();
        assert_eq!(lat.positions(), &[Position::default()]);

        let lat = Lattice::linear_chain(3, Length::from_nm(0.2)).unwrap();
        let z: Vec<f64> = lat.positions().iter().map(|p| p.to_nm()[2]).collect();
        for (got, want) in z.iter().zip([0.0, 0.2, 0.4]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }

        let lat = Lattice::linear_chain(2, Length::from_nm(0.142)).unwrap();
        assert_relative_eq!(lat.cm_mean().to_nm()[2], 0.071, max_relative = 1e-14);
    }

    #[test]
    fn invalid_inputs() {
        assert!(Lattice::linear_chain(0, Length::from_nm(0.2)).is_err());
        assert!(Lattice::linear_chain(3, Length::from_nm(-0.2)).is_err());
        assert!(Lattice::new(vec![Position::from_nm([f64::NAN, 0.0, 0.0])], 6, Mass::from_amu(12.0)).is_err());
        assert!(AtomWavefunction::gaussian(Length::ZERO).is_err());
        assert!(SampleState::new(Position::default(), Length::from_pm(-1.0), Mass::from_amu(1.0)).is_err());
        assert!(SampleState::new(Position::default(), Length::from_pm(1.0), Mass::ZERO).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        let one = Complex64::new(1.0, 0.0);
        assert!(TabulatedWavefunction::from_nm_grid(&[(0.0, one), (0.0, one), (1.0, one)]).is_err());
        // ∫ = 2 on [0, 2]
        assert!(TabulatedWavefunction::from_nm_grid(&[(0.0, one), (1.0, one), (2.0, one)]).is_err());
        let a = Complex64::new(0.5f64.sqrt(), 0.0);
        assert!(TabulatedWavefunction::from_nm_grid(&[(0.0, a), (1.0, a), (2.0, a)]).is_ok());
    }

    #[test]
    fn shape_standard_deviations() {
        let s = Length::from_pm(7.0);
        for wf in [
            AtomWavefunction::gaussian(s).unwrap(),
            AtomWavefunction::box_with_std(s).unwrap(),
            AtomWavefunction::triangle_with_std(s).unwrap(),
        ] {
            assert_relative_eq!(wf.std_dev().pm(), 7.0, max_relative = 1e-14);
        }
    }

    fn positions_strategy() -> impl Strategy<Value = Vec<[f64; 3]>> {
        prop::collection::vec(prop::array::uniform3(-5.0f64..5.0), 1..12)
    }

    proptest! {
        #[test]
        fn permutation_invariance(pos in positions_strategy(), seed in any::<u64>()) {
            let wf = gaussian(4.0);
            let lat = Lattice::new(pos.iter().map(|p| Position::from_nm(*p)).collect(), 6, Mass::from_amu(12.0)).unwrap();
            let mut shuffled = pos.clone();
            let len = shuffled.len();
            shuffled.rotate_left((seed as usize) % len);
            shuffled.reverse();
            let lat2 = Lattice::new(shuffled.iter().map(|p| Position::from_nm(*p)).collect(), 6, Mass::from_amu(12.0)).unwrap();
            let a = cm_state_from_lattice(&lat, &wf).unwrap();
            let b = cm_state_from_lattice(&lat2, &wf).unwrap();
            prop_assert_eq!(a.sigma0(), b.sigma0());
            prop_assert_eq!(a.total_mass(), b.total_mass());
            prop_assert!((a.cm_mean().0 - b.cm_mean().0).norm() <= 1e-12 * 1e-9 * 5.0 * 3.0);
        }

        #[test]
        fn translation_shifts_mean_only(pos in positions_strategy(), d in prop::array::uniform3(-3.0f64..3.0)) {
            let wf = gaussian(4.0);
            let lat = Lattice::new(pos.iter().map(|p| Position::from_nm(*p)).collect(), 6, Mass::from_amu(12.0)).unwrap();
            let shift = Position::from_nm(d);
            let a = cm_state_from_lattice(&lat, &wf).unwrap();
            let b = cm_state_from_lattice(&lat.translated(shift), &wf).unwrap();
            prop_assert_eq!(a.sigma0(), b.sigma0());
            prop_assert!(((a.cm_mean() + shift).0 - b.cm_mean().0).norm() <= 1e-20);
        }
    }
}

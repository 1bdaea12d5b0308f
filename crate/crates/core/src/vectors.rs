//! Three-component real-space positions and wave vectors.
//!
//! One-dimensional problems are encoded along `z` with zero transverse
//! components.

use std::ops::{Add, Neg, Sub};

use nalgebra::Vector3;

use crate::units::{InverseLength, Length};

/// Position in real space, stored in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position(pub Vector3<f64>);

/// Wave vector / momentum transfer, stored in m⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveVector(pub Vector3<f64>);

impl Position {
    pub fn from_nm(xyz: [f64; 3]) -> Self {
        Self(Vector3::from(xyz) * 1e-9)
    }

    pub fn along_z(z: Length) -> Self {
        Self(Vector3::new(0.0, 0.0, z.si()))
    }

    pub fn to_nm(self) -> [f64; 3] {
        let v = self.0 / 1e-9;
        [v.x, v.y, v.z]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scale(self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

impl WaveVector {
    pub fn from_per_nm(xyz: [f64; 3]) -> Self {
        Self(Vector3::from(xyz) * 1e9)
    }

    pub fn along_z(k: InverseLength) -> Self {
        Self(Vector3::new(0.0, 0.0, k.si()))
    }

    pub fn to_per_nm(self) -> [f64; 3] {
        let v = self.0 / 1e9;
        [v.x, v.y, v.z]
    }

    pub fn norm(&self) -> InverseLength {
        InverseLength::from_per_m(self.0.norm())
    }

    /// |q|² in m⁻².
    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn dot(&self, other: &WaveVector) -> f64 {
        self.0.dot(&other.0)
    }

    /// Phase `q·r` (dimensionless).
    pub fn phase(&self, r: &Position) -> f64 {
        self.0.dot(&r.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// True when only the `z` component may be nonzero.
    pub fn is_axial(&self) -> bool {
        self.0.x == 0.0 && self.0.y == 0.0
    }

    /// `q·σ` as a pure-number vector.
    pub fn scaled_by(&self, length: Length) -> Vector3<f64> {
        self.0 * length.si()
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }
}

impl Add for Position {
    type Output = Position;
    fn add(self, rhs: Position) -> Position {
        Position(self.0 + rhs.0)
    }
}

impl Sub for Position {
    type Output = Position;
    fn sub(self, rhs: Position) -> Position {
        Position(self.0 - rhs.0)
    }
}

impl Add for WaveVector {
    type Output = WaveVector;
    fn add(self, rhs: WaveVector) -> WaveVector {
        WaveVector(self.0 + rhs.0)
    }
}

impl Sub for WaveVector {
    type Output = WaveVector;
    fn sub(self, rhs: WaveVector) -> WaveVector {
        WaveVector(self.0 - rhs.0)
    }
}

impl Neg for WaveVector {
    type Output = WaveVector;
    fn neg(self) -> WaveVector {
        WaveVector(-self.0)
    }
}

//! Physical constants and unit handling.
//!
//! Everything is stored in SI internally. The boundary types ([`Length`],
//! [`InverseLength`], [`Mass`], [`Time`]) carry their value in SI units and
//! expose constructors/accessors for the domain units used at the I/O edge
//! (pm, nm, nm⁻¹, amu, ps, ...).

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use thiserror::Error;

/// CODATA 2018 values.
pub mod constants {
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Planck constant, J·s (exact).
    pub const PLANCK: f64 = 6.626_070_15e-34;
    /// Atomic mass unit, kg.
    pub const AMU: f64 = 1.660_539_066_60e-27;
    /// Elementary charge, C (exact).
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Electron rest mass, kg.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    /// Speed of light in vacuum, m/s (exact).
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
}

/// The constants that enter the scattering formulas, bundled for callers that
/// want to echo them in output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub amu: f64,
    pub elementary_charge: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: constants::HBAR,
        amu: constants::AMU,
        elementary_charge: constants::ELEMENTARY_CHARGE,
    };
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: Dimension, right: Dimension },
    #[error("expected a dimensionless quantity, got {0}")]
    NotDimensionless(Dimension),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
}

/// Dimension as integer exponents of (length, mass, time).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    pub length: i8,
    pub mass: i8,
    pub time: i8,
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension::new(0, 0, 0);
    pub const LENGTH: Dimension = Dimension::new(1, 0, 0);
    pub const INVERSE_LENGTH: Dimension = Dimension::new(-1, 0, 0);
    pub const MASS: Dimension = Dimension::new(0, 1, 0);
    pub const TIME: Dimension = Dimension::new(0, 0, 1);
    /// J·s = kg·m²·s⁻¹
    pub const ACTION: Dimension = Dimension::new(2, 1, -1);

    pub const fn new(length: i8, mass: i8, time: i8) -> Self {
        Self { length, mass, time }
    }

    fn combine(self, other: Dimension, sign: i8) -> Dimension {
        Dimension::new(
            self.length + sign * other.length,
            self.mass + sign * other.mass,
            self.time + sign * other.time,
        )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Dimension::DIMENSIONLESS => f.write_str("dimensionless"),
            Dimension::LENGTH => f.write_str("length"),
            Dimension::INVERSE_LENGTH => f.write_str("inverse length"),
            Dimension::MASS => f.write_str("mass"),
            Dimension::TIME => f.write_str("time"),
            Dimension::ACTION => f.write_str("action"),
            d => write!(f, "L^{} M^{} T^{}", d.length, d.mass, d.time),
        }
    }
}

/// Unit tags accepted at the I/O boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Meter,
    Nanometer,
    Picometer,
    PerMeter,
    PerNanometer,
    PerPicometer,
    Kilogram,
    Amu,
    Second,
    Picosecond,
    Nanosecond,
    Microsecond,
    JouleSecond,
    One,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Meter | Nanometer | Picometer => Dimension::LENGTH,
            PerMeter | PerNanometer | PerPicometer => Dimension::INVERSE_LENGTH,
            Kilogram | Amu => Dimension::MASS,
            Second | Picosecond | Nanosecond | Microsecond => Dimension::TIME,
            JouleSecond => Dimension::ACTION,
            One => Dimension::DIMENSIONLESS,
        }
    }

    /// Size of one unit in SI.
    pub fn si_scale(self) -> f64 {
        use Unit::*;
        match self {
            Meter | PerMeter | Kilogram | Second | JouleSecond | One => 1.0,
            Nanometer => 1e-9,
            Picometer => 1e-12,
            PerNanometer => 1e9,
            PerPicometer => 1e12,
            Amu => constants::AMU,
            Picosecond => 1e-12,
            Nanosecond => 1e-9,
            Microsecond => 1e-6,
        }
    }

    pub fn symbol(self) -> &'static str {
        use Unit::*;
        match self {
            Meter => "m",
            Nanometer => "nm",
            Picometer => "pm",
            PerMeter => "m^-1",
            PerNanometer => "nm^-1",
            PerPicometer => "pm^-1",
            Kilogram => "kg",
            Amu => "amu",
            Second => "s",
            Picosecond => "ps",
            Nanosecond => "ns",
            Microsecond => "us",
            JouleSecond => "J*s",
            One => "1",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Unit {
    type Err = UnitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use Unit::*;
        Ok(match s.trim() {
            "m" => Meter,
            "nm" => Nanometer,
            "pm" => Picometer,
            "m^-1" | "1/m" => PerMeter,
            "nm^-1" | "1/nm" => PerNanometer,
            "pm^-1" | "1/pm" => PerPicometer,
            "kg" => Kilogram,
            "amu" | "u" | "Da" => Amu,
            "s" => Second,
            "ps" => Picosecond,
            "ns" => Nanosecond,
            "us" | "µs" => Microsecond,
            "J*s" | "J s" => JouleSecond,
            "1" | "" => One,
            other => return Err(UnitError::UnknownUnit(other.to_owned())),
        })
    }
}

/// Convert `value` expressed in `from` into `to`.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64, UnitError> {
    if from.dimension() != to.dimension() {
        return Err(UnitError::DimensionMismatch {
            left: from.dimension(),
            right: to.dimension(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.si_scale() / to.si_scale())
}

/// A runtime-dimensioned scalar, used where the dimension is only known at
/// run time (config ingestion, exponent guards).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    si_value: f64,
    dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self {
            si_value: value * unit.si_scale(),
            dimension: unit.dimension(),
        }
    }

    pub fn dimensionless(value: f64) -> Self {
        Self {
            si_value: value,
            dimension: Dimension::DIMENSIONLESS,
        }
    }

    pub fn si_value(&self) -> f64 {
        self.si_value
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn value_in(&self, unit: Unit) -> Result<f64, UnitError> {
        self.expect_dimension(unit.dimension())?;
        Ok(self.si_value / unit.si_scale())
    }

    fn expect_dimension(&self, dim: Dimension) -> Result<(), UnitError> {
        if self.dimension == dim {
            Ok(())
        } else {
            Err(UnitError::DimensionMismatch {
                left: self.dimension,
                right: dim,
            })
        }
    }

    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity, UnitError> {
        rhs.expect_dimension(self.dimension)?;
        Ok(Quantity {
            si_value: self.si_value + rhs.si_value,
            dimension: self.dimension,
        })
    }

    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity, UnitError> {
        rhs.expect_dimension(self.dimension)?;
        Ok(Quantity {
            si_value: self.si_value - rhs.si_value,
            dimension: self.dimension,
        })
    }

    pub fn powi(self, n: i8) -> Quantity {
        Quantity {
            si_value: self.si_value.powi(n as i32),
            dimension: Dimension::new(
                self.dimension.length * n,
                self.dimension.mass * n,
                self.dimension.time * n,
            ),
        }
    }

    /// `e^(-self)`; the argument must reduce to a pure number.
    pub fn exp_neg(self) -> Result<f64, UnitError> {
        if self.dimension != Dimension::DIMENSIONLESS {
            return Err(UnitError::NotDimensionless(self.dimension));
        }
        Ok((-self.si_value).exp())
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity {
            si_value: self.si_value * rhs.si_value,
            dimension: self.dimension.combine(rhs.dimension, 1),
        }
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity {
            si_value: self.si_value / rhs.si_value,
            dimension: self.dimension.combine(rhs.dimension, -1),
        }
    }
}

macro_rules! scalar_newtype {
    ($(#[$meta:meta])* $name:ident, $si:ident, $dim:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
        pub struct $name(f64);

        impl $name {
            pub const ZERO: $name = $name(0.0);

            pub const fn $si(value: f64) -> Self {
                Self(value)
            }

            pub fn from_unit(value: f64, unit: Unit) -> Result<Self, UnitError> {
                if unit.dimension() != $dim {
                    return Err(UnitError::DimensionMismatch { left: unit.dimension(), right: $dim });
                }
                Ok(Self(value * unit.si_scale()))
            }

            /// Value in SI units.
            pub fn si(self) -> f64 {
                self.0
            }

            pub fn to_unit(self, unit: Unit) -> Result<f64, UnitError> {
                convert(self.0, Self::SI_UNIT, unit)
            }

            pub fn quantity(self) -> Quantity {
                Quantity { si_value: self.0, dimension: $dim }
            }

            pub fn is_finite(self) -> bool {
                self.0.is_finite()
            }
        }

        impl Mul<f64> for $name {
            type Output = $name;
            fn mul(self, rhs: f64) -> $name {
                $name(self.0 * rhs)
            }
        }

        impl Div<f64> for $name {
            type Output = $name;
            fn div(self, rhs: f64) -> $name {
                $name(self.0 / rhs)
            }
        }

        impl Div for $name {
            type Output = f64;
            fn div(self, rhs: $name) -> f64 {
                self.0 / rhs.0
            }
        }
    };
}

scalar_newtype!(
    /// Length, stored in metres.
    Length, from_m, Dimension::LENGTH
);
scalar_newtype!(
    /// Inverse length (wavenumber), stored in m⁻¹.
    InverseLength, from_per_m, Dimension::INVERSE_LENGTH
);
scalar_newtype!(
    /// Mass, stored in kilograms.
    Mass, from_kg, Dimension::MASS
);
scalar_newtype!(
    /// Time, stored in seconds.
    Time, from_s, Dimension::TIME
);

impl Length {
    const SI_UNIT: Unit = Unit::Meter;

    pub fn from_nm(v: f64) -> Self {
        Self(v * 1e-9)
    }
    pub fn from_pm(v: f64) -> Self {
        Self(v * 1e-12)
    }
    pub fn nm(self) -> f64 {
        self.0 / 1e-9
    }
    pub fn pm(self) -> f64 {
        self.0 / 1e-12
    }
}

impl InverseLength {
    const SI_UNIT: Unit = Unit::PerMeter;

    pub fn from_per_nm(v: f64) -> Self {
        Self(v * 1e9)
    }
    pub fn per_nm(self) -> f64 {
        self.0 / 1e9
    }
}

impl Mass {
    const SI_UNIT: Unit = Unit::Kilogram;

    pub fn from_amu(v: f64) -> Self {
        Self(v * constants::AMU)
    }
    pub fn amu(self) -> f64 {
        self.0 / constants::AMU
    }
}

impl Time {
    const SI_UNIT: Unit = Unit::Second;

    pub fn from_ps(v: f64) -> Self {
        Self(v * 1e-12)
    }
    pub fn ps(self) -> f64 {
        self.0 / 1e-12
    }
}

/// `q·σ` is a pure number.
impl Mul<Length> for InverseLength {
    type Output = f64;
    fn mul(self, rhs: Length) -> f64 {
        self.0 * rhs.0
    }
}

impl Mul<InverseLength> for Length {
    type Output = f64;
    fn mul(self, rhs: InverseLength) -> f64 {
        self.0 * rhs.0
    }
}

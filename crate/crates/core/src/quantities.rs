//! Physical constants, the prefactor convention, and validated scalar
//! quantities.
//!
//! All inputs are SI. The Green-function expressions are used exactly in
//! their Gaussian-looking printed form, so the absolute scale of a spectrum
//! is fixed by a single global prefactor selected through [`UnitSystem`].

use core::f64::consts::PI;
use core::fmt;

use crate::error::{domain, Result};

/// Fundamental constants in SI units (CODATA 2018).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    k_b: f64,
    eps0: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        Self {
            hbar: 1.054_571_817e-34,
            c: 299_792_458.0,
            k_b: 1.380_649e-23,
            eps0: 8.854_187_812_8e-12,
        }
    }

    /// Reduced Planck constant, J·s.
    #[inline]
    pub const fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Speed of light, m/s.
    #[inline]
    pub const fn c(&self) -> f64 {
        self.c
    }

    /// Boltzmann constant, J/K.
    #[inline]
    pub const fn k_b(&self) -> f64 {
        self.k_b
    }

    /// Vacuum permittivity, F/m.
    #[inline]
    pub const fn eps0(&self) -> f64 {
        self.eps0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// The constants every module evaluates with.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants::codata2018();

/// Selects the global prefactor multiplying the power integrand.
///
/// `GaussianPrefactor` uses hbar / (2 pi c^2) in front of Green
/// functions carrying their 2 pi i Gaussian factors. `ScaleFree` sets the
/// prefactor to one. Signs, ratios and shapes are identical in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    #[default]
    GaussianPrefactor,
    ScaleFree,
}

impl UnitSystem {
    pub fn power_prefactor(self, constants: &PhysicalConstants) -> f64 {
        match self {
            UnitSystem::GaussianPrefactor => {
                constants.hbar() / (2.0 * PI * constants.c() * constants.c())
            }
            UnitSystem::ScaleFree => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::GaussianPrefactor => "gaussian-prefactor",
            UnitSystem::ScaleFree => "scale-free",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "gaussian-prefactor" => Some(UnitSystem::GaussianPrefactor),
            "scale-free" => Some(UnitSystem::ScaleFree),
            _ => None,
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Angular frequency in rad/s, nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_finite() && omega >= 0.0 {
            Ok(Self(omega))
        } else {
            Err(domain("omega", omega, "finite and >= 0 rad/s"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Velocity along x in m/s, strictly subluminal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Velocity(f64);

impl Velocity {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && v.abs() < CONSTANTS.c() {
            Ok(Self(v))
        } else {
            Err(domain("V0", v, "|V0| < c"))
        }
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta.abs() < 1.0 {
            Ok(Self(beta * CONSTANTS.c()))
        } else {
            Err(domain("V0_over_c", beta, "|V0/c| < 1"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn beta(self) -> f64 {
        self.0 / CONSTANTS.c()
    }
}

/// Height above the conductor surface in m, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Height(f64);

impl Height {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_finite() && z > 0.0 {
            Ok(Self(z))
        } else {
            Err(domain("z", z, "finite and > 0 m"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Absolute temperature in K; zero is allowed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t >= 0.0 {
            Ok(Self(t))
        } else {
            Err(domain("temperature", t, "finite and >= 0 K"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Lorentz factor 1/sqrt(1 - v^2/c^2).
pub fn lorentz_gamma(v: f64) -> Result<f64> {
    let beta = v / CONSTANTS.c();
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(domain("V0", v, "|V0| < c"));
    }
    // 1 - beta^2 factored to keep precision for beta near 1
    Ok(1.0 / libm::sqrt((1.0 - beta) * (1.0 + beta)))
}

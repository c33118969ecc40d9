//! Dielectric models and the dipole polarizability of a small sphere.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quantities::CONSTANTS;
use crate::thermal::OddSpectralResponse;

/// Bulk dielectric response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DielectricModel {
    /// Metal described by its DC conductivity `sigma0` (S/m):
    /// eps = 1 + i sigma0 / (eps0 omega).
    DrudeDc { sigma0: f64 },
    /// eps -> infinity. Only meaningful through reflection limits.
    IdealConductor,
    /// eps = 1 + omega_p^2 / (omega_0^2 - omega^2 - i damping omega).
    Lorentzian {
        omega_p: f64,
        omega_0: f64,
        damping: f64,
    },
}

impl DielectricModel {
    pub fn drude_dc(sigma0: f64) -> Result<Self> {
        if sigma0.is_finite() && sigma0 > 0.0 {
            Ok(Self::DrudeDc { sigma0 })
        } else {
            Err(domain("sigma0", sigma0, "finite and > 0 S/m"))
        }
    }

    pub fn lorentzian(omega_p: f64, omega_0: f64, damping: f64) -> Result<Self> {
        for (name, v) in [
            ("omega_p", omega_p),
            ("omega_0", omega_0),
            ("damping", damping),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(name, v, "finite and > 0 rad/s"));
            }
        }
        Ok(Self::Lorentzian {
            omega_p,
            omega_0,
            damping,
        })
    }

    /// Relative permittivity at `omega > 0`.
    pub fn epsilon(&self, omega: f64) -> Result<Complex64> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(domain("omega", omega, "finite and > 0 rad/s"));
        }
        match *self {
            Self::DrudeDc { sigma0 } => {
                Ok(Complex64::new(1.0, sigma0 / (CONSTANTS.eps0() * omega)))
            }
            Self::IdealConductor => Err(Error::IdealConductorNumeric),
            Self::Lorentzian {
                omega_p,
                omega_0,
                damping,
            } => {
                let denom = Complex64::new(omega_0 * omega_0 - omega * omega, -damping * omega);
                Ok(Complex64::new(1.0, 0.0) + omega_p * omega_p / denom)
            }
        }
    }

    /// Im eps computed without forming the complex quotient.
    pub(crate) fn im_epsilon(&self, omega: f64) -> Result<f64> {
        match *self {
            Self::DrudeDc { sigma0 } => Ok(sigma0 / (CONSTANTS.eps0() * omega)),
            Self::IdealConductor => Err(Error::IdealConductorNumeric),
            Self::Lorentzian {
                omega_p,
                omega_0,
                damping,
            } => {
                let detuning = omega_0 * omega_0 - omega * omega;
                let gw = damping * omega;
                Ok(omega_p * omega_p * gw / (detuning * detuning + gw * gw))
            }
        }
    }
}

/// Small sphere of radius `radius` (m) in the dipole approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleModel {
    radius: f64,
    dielectric: DielectricModel,
}

/// Largest a omega / c for which the dipole expansion is trusted without a warning.
pub const DIPOLE_VALIDITY_LIMIT: f64 = 0.1;

impl ParticleModel {
    pub fn new(radius: f64, dielectric: DielectricModel) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(domain("radius", radius, "finite and > 0 m"));
        }
        if let DielectricModel::IdealConductor = dielectric {
            return Err(Error::IdealConductorNumeric);
        }
        Ok(Self { radius, dielectric })
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[inline]
    pub fn dielectric(&self) -> &DielectricModel {
        &self.dielectric
    }

    /// Size parameter a omega / c.
    pub fn size_parameter(&self, omega: f64) -> f64 {
        self.radius * omega / CONSTANTS.c()
    }

    /// True when a omega_max / c stays below [`DIPOLE_VALIDITY_LIMIT`].
    pub fn dipole_valid_up_to(&self, omega_max: f64) -> bool {
        self.size_parameter(omega_max) <= DIPOLE_VALIDITY_LIMIT
    }

    /// alpha(omega) = a^3 (eps - 1) / (eps + 2), in m^3.
    pub fn polarizability(&self, omega: f64) -> Result<Complex64> {
        let eps = self.dielectric.epsilon(omega)?;
        let denom = eps + 2.0;
        if denom.norm_sqr() == 0.0 {
            return Err(Error::FrohlichPole { omega });
        }
        let a3 = self.radius * self.radius * self.radius;
        Ok(a3 * (eps - 1.0) / denom)
    }

    /// Im alpha(omega) for omega > 0, as 3 a^3 Im eps / |eps + 2|^2.
    pub fn im_polarizability(&self, omega: f64) -> Result<f64> {
        let eps = self.dielectric.epsilon(omega)?;
        let denom = (eps + 2.0).norm_sqr();
        if denom == 0.0 {
            return Err(Error::FrohlichPole { omega });
        }
        let a3 = self.radius * self.radius * self.radius;
        Ok(3.0 * a3 * self.dielectric.im_epsilon(omega)? / denom)
    }

    /// Im alpha extended to any real argument by alpha(-x) = conj(alpha(x)).
    pub fn im_polarizability_signed(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(domain("x", x, "finite"));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let v = self.im_polarizability(x.abs())?;
        Ok(if x > 0.0 { v } else { -v })
    }

    /// lim_{x -> 0} Im alpha(x) / x.
    pub fn im_polarizability_slope_at_zero(&self) -> f64 {
        let a3 = self.radius * self.radius * self.radius;
        match self.dielectric {
            // Im alpha -> 3 a^3 eps0 x / sigma0 once sigma0/(eps0 x) >> 1
            DielectricModel::DrudeDc { sigma0 } => 3.0 * a3 * CONSTANTS.eps0() / sigma0,
            DielectricModel::Lorentzian {
                omega_p,
                omega_0,
                damping,
            } => {
                let w02 = omega_0 * omega_0;
                let eps_static = 1.0 + omega_p * omega_p / w02;
                let im_eps_slope = omega_p * omega_p * damping / (w02 * w02);
                3.0 * a3 * im_eps_slope / ((eps_static + 2.0) * (eps_static + 2.0))
            }
            DielectricModel::IdealConductor => 0.0,
        }
    }
}

impl OddSpectralResponse for ParticleModel {
    fn im_signed(&self, x: f64) -> Result<f64> {
        self.im_polarizability_signed(x)
    }

    fn im_slope_at_zero(&self) -> Result<f64> {
        Ok(self.im_polarizability_slope_at_zero())
    }

    fn im_signed_increment(&self, x: f64, shift: f64) -> Result<f64> {
        match self.dielectric {
            DielectricModel::DrudeDc { sigma0 } => {
                let y = x - shift;
                if !(x.is_finite() && y.is_finite()) {
                    return Err(domain("x", x, "finite"));
                }
                // Im alpha(x) = 3 a^3 s x / (9 x^2 + s^2), s = sigma0 / eps0, so
                // Im alpha(y) - Im alpha(x) = 3 a^3 s (y - x)(s^2 - 9 x y) / (D_x D_y)
                let s = sigma0 / CONSTANTS.eps0();
                let a3 = self.radius * self.radius * self.radius;
                let dx = 9.0 * x * x + s * s;
                let dy = 9.0 * y * y + s * s;
                Ok(3.0 * a3 * s * (-shift) * (s * s - 9.0 * x * y) / (dx * dy))
            }
            _ => Ok(self.im_polarizability_signed(x - shift)? - self.im_polarizability_signed(x)?),
        }
    }

    fn im_signed_second_difference(&self, x: f64, d: f64) -> Result<f64> {
        match self.dielectric {
            DielectricModel::DrudeDc { sigma0 } => {
                if !(x.is_finite() && d.is_finite()) {
                    return Err(domain("x", x, "finite"));
                }
                // 54 d^2 x (3 (x - d)(x + d) - s^2) / (D(x) D(x - d) D(x + d)),
                // D(u) = 9 u^2 + s^2, times 3 a^3 s
                let s = sigma0 / CONSTANTS.eps0();
                let a3 = self.radius * self.radius * self.radius;
                let den = |u: f64| 9.0 * u * u + s * s;
                let num = 54.0 * d * d * x * (3.0 * (x - d) * (x + d) - s * s);
                Ok(3.0 * a3 * s * num / (den(x) * den(x - d) * den(x + d)))
            }
            _ => Ok(self.im_polarizability_signed(x - d)?
                + self.im_polarizability_signed(x + d)?
                - 2.0 * self.im_polarizability_signed(x)?),
        }
    }
}

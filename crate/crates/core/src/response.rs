//! Response functions of the moving polarizable body.
//!
//! The body's matter field is a continuum of oscillators of frequency `nu`
//! coupled with strength `f(nu)`. The pieces here are:
//!
//! * the retarded oscillator Green function in the lab frame,
//! * the coupling strength fixed by the rest-frame susceptibility,
//! * the Doppler connection `chi_ee(omega, k_x) = chi0(omega - k_x V0)`,
//! * the noise spectral density `Gamma`.
//!
//! [`chi_ee_spectral`] evaluates the oscillator-sum representation of the
//! lab-frame susceptibility directly, so the connection can be checked
//! against an independent route.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::materials::{DielectricModel, ParticleModel};
use crate::quadrature::{integrate_adaptive_1d_fallible, EndpointSingularity, QuadratureSpec};
use crate::quantities::{lorentz_gamma, Velocity, CONSTANTS};
use crate::thermal::{thermal_factor, OddSpectralResponse};

/// Uniform motion along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionState {
    velocity: Velocity,
    gamma: f64,
}

impl MotionState {
    pub fn new(v0: f64) -> Result<Self> {
        let velocity = Velocity::new(v0)?;
        Ok(Self {
            velocity,
            gamma: lorentz_gamma(v0)?,
        })
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        let velocity = Velocity::from_beta(beta)?;
        Ok(Self {
            velocity,
            gamma: lorentz_gamma(velocity.get())?,
        })
    }

    pub fn at_rest() -> Self {
        Self {
            velocity: Velocity::new(0.0).unwrap_or_else(|_| unreachable!()),
            gamma: 1.0,
        }
    }

    #[inline]
    pub fn v0(&self) -> f64 {
        self.velocity.get()
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.velocity.beta()
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Rest-frame scalar susceptibility of one principal axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Susceptibility {
    /// chi0 = strength^2 / (omega_0^2 - omega^2 - i damping omega).
    Lorentzian {
        strength: f64,
        omega_0: f64,
        damping: f64,
    },
    /// chi0 = eps - 1.
    Dielectric(DielectricModel),
    /// chi0 = alpha, the sphere polarizability in m^3.
    Particle(ParticleModel),
}

impl Susceptibility {
    pub fn lorentzian(strength: f64, omega_0: f64, damping: f64) -> Result<Self> {
        // same parameter domain as the Lorentz dielectric
        DielectricModel::lorentzian(strength, omega_0, damping)?;
        Ok(Self::Lorentzian {
            strength,
            omega_0,
            damping,
        })
    }

    fn at_positive(&self, omega: f64) -> Result<Complex64> {
        match self {
            Self::Lorentzian {
                strength,
                omega_0,
                damping,
            } => Ok(strength * strength
                / Complex64::new(omega_0 * omega_0 - omega * omega, -damping * omega)),
            Self::Dielectric(m) => Ok(m.epsilon(omega)? - 1.0),
            Self::Particle(p) => p.polarizability(omega),
        }
    }

    /// Static limit chi0(0); real.
    pub fn static_value(&self) -> Result<f64> {
        match *self {
            Self::Lorentzian {
                strength, omega_0, ..
            } => Ok(strength * strength / (omega_0 * omega_0)),
            Self::Dielectric(DielectricModel::Lorentzian {
                omega_p, omega_0, ..
            }) => Ok(omega_p * omega_p / (omega_0 * omega_0)),
            Self::Dielectric(_) => Err(domain("omega", 0.0, "> 0 for a conducting medium")),
            Self::Particle(p) => {
                let a3 = p.radius() * p.radius() * p.radius();
                match *p.dielectric() {
                    DielectricModel::Lorentzian {
                        omega_p, omega_0, ..
                    } => {
                        let eps = 1.0 + omega_p * omega_p / (omega_0 * omega_0);
                        Ok(a3 * (eps - 1.0) / (eps + 2.0))
                    }
                    // conductor: eps -> infinity at zero frequency
                    _ => Ok(a3),
                }
            }
        }
    }

    /// chi0 at any real argument, using chi0(-x) = conj(chi0(x)).
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(domain("omega", x, "finite"));
        }
        if x == 0.0 {
            return Ok(Complex64::new(self.static_value()?, 0.0));
        }
        let v = self.at_positive(x.abs())?;
        Ok(if x > 0.0 { v } else { v.conj() })
    }

    /// Frequency scale of the response, used to size integration ranges.
    pub fn characteristic_frequency(&self) -> f64 {
        match *self {
            Self::Lorentzian { omega_0, .. } => omega_0,
            Self::Dielectric(DielectricModel::Lorentzian { omega_0, .. }) => omega_0,
            Self::Dielectric(DielectricModel::DrudeDc { sigma0 }) => sigma0 / CONSTANTS.eps0(),
            Self::Dielectric(DielectricModel::IdealConductor) => 1.0,
            Self::Particle(p) => Self::Dielectric(*p.dielectric()).characteristic_frequency(),
        }
    }
}

impl OddSpectralResponse for Susceptibility {
    fn im_signed(&self, x: f64) -> Result<f64> {
        match self {
            Self::Particle(p) => p.im_polarizability_signed(x),
            _ => Ok(self.eval(x)?.im),
        }
    }

    fn im_slope_at_zero(&self) -> Result<f64> {
        match *self {
            Self::Lorentzian {
                strength,
                omega_0,
                damping,
            } => Ok(strength * strength * damping / (omega_0 * omega_0 * omega_0 * omega_0)),
            Self::Dielectric(DielectricModel::Lorentzian {
                omega_p,
                omega_0,
                damping,
            }) => Ok(omega_p * omega_p * damping / (omega_0 * omega_0 * omega_0 * omega_0)),
            Self::Dielectric(_) => Err(domain("omega", 0.0, "> 0 for a conducting medium")),
            Self::Particle(p) => Ok(p.im_polarizability_slope_at_zero()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Diagonal susceptibility tensor; the axes are independent channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseModel {
    pub xx: Susceptibility,
    pub yy: Susceptibility,
    pub zz: Susceptibility,
}

impl ResponseModel {
    pub fn isotropic(chi: Susceptibility) -> Self {
        Self {
            xx: chi,
            yy: chi,
            zz: chi,
        }
    }

    pub fn axis(&self, axis: Axis) -> &Susceptibility {
        match axis {
            Axis::X => &self.xx,
            Axis::Y => &self.yy,
            Axis::Z => &self.zz,
        }
    }
}

/// Retarded oscillator Green function in the lab frame,
/// `exp(i k_x V0 tau) sin(nu tau / gamma) / nu` for `tau > 0`, else 0.
pub fn oscillator_green_time(kx: f64, nu: f64, tau: f64, motion: &MotionState) -> Complex64 {
    if tau <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = kx * motion.v0() * tau;
    let amplitude = libm::sin(nu * tau / motion.gamma()) / nu;
    Complex64::new(libm::cos(phase), libm::sin(phase)) * amplitude
}

/// Squared coupling `f^2(gamma nu) = (2 nu / pi eps0) Im chi0(nu)`.
///
/// The returned number is the coupling of the lab-frame oscillator of
/// frequency `gamma nu`.
pub fn coupling_strength_sq(
    model: &ResponseModel,
    axis: Axis,
    nu: f64,
    _motion: &MotionState,
) -> Result<f64> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(domain("nu", nu, "finite and > 0 rad/s"));
    }
    let im = model.axis(axis).im_signed(nu)?;
    if im < 0.0 {
        return Err(Error::PassivityViolation { omega: nu, im });
    }
    Ok(2.0 * nu * im / (PI * CONSTANTS.eps0()))
}

/// Lab-frame susceptibility `chi0(omega - k_x V0)`.
pub fn chi_ee_doppler(
    model: &ResponseModel,
    axis: Axis,
    omega: f64,
    kx: f64,
    motion: &MotionState,
) -> Result<Complex64> {
    model.axis(axis).eval(omega - kx * motion.v0())
}

/// Noise spectral density `Gamma = 2 Im chi0(k_x V0 - omega) a_T(k_x V0 - omega)`.
pub fn gamma_spectral(
    model: &ResponseModel,
    axis: Axis,
    omega: f64,
    kx: f64,
    motion: &MotionState,
    t: f64,
) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    let x = kx * motion.v0() - omega;
    let coth = thermal_factor(t, x)?;
    Ok(2.0 * model.axis(axis).im_signed(x)? * coth)
}

/// Treatment of the oscillator pole in the spectral representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolePrescription {
    /// `eta -> 0^+`: principal value plus the delta-function residue.
    Limit,
    /// Finite retarded broadening `omega -> omega + i eta`.
    Broadened { eta: f64 },
}

impl PolePrescription {
    /// `eta = 1e-6` of the susceptibility's characteristic frequency.
    pub fn default_for(chi: &Susceptibility) -> Self {
        PolePrescription::Broadened {
            eta: 1e-6 * chi.characteristic_frequency(),
        }
    }
}

/// Lab-frame susceptibility from the oscillator sum
/// `eps0 int_0^inf dmu f^2(mu) / (gamma (mu^2/gamma^2 - (omega - k_x V0)^2))`,
/// with `f^2` taken from [`coupling_strength_sq`].
///
/// Substituting `mu = gamma nu` the integral runs over the rest-frame
/// frequency `nu`. The range is split at the pole `nu = |w|` and mapped to a
/// finite interval.
pub fn chi_ee_spectral(
    model: &ResponseModel,
    axis: Axis,
    omega: f64,
    kx: f64,
    motion: &MotionState,
    prescription: PolePrescription,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let w = omega - kx * motion.v0();
    if !w.is_finite() {
        return Err(domain("omega - k_x V0", w, "finite"));
    }
    let eps0 = CONSTANTS.eps0();
    let scale = model.axis(axis).characteristic_frequency();
    let pole = w.abs();
    // eps0 * gamma * f^2(gamma nu) / (gamma (nu^2 - w^2)) = eps0 f^2(gamma nu) / (nu^2 - w^2)
    let weight =
        |nu: f64| -> Result<f64> { Ok(eps0 * coupling_strength_sq(model, axis, nu, motion)?) };

    match prescription {
        PolePrescription::Limit => {
            let g_pole = if pole > 0.0 { weight(pole)? } else { 0.0 };
            let subtracted = |nu: f64| -> Result<f64> {
                if pole == 0.0 {
                    // f^2(nu) ~ nu^2 near zero: the ratio stays finite
                    return Ok(weight(nu)? / (nu * nu));
                }
                Ok((weight(nu)? - g_pole) / ((nu - pole) * (nu + pole)))
            };
            let re = split_half_line(subtracted, pole, scale, spec)?;
            let im = model.axis(axis).im_signed(w)?;
            Ok(Complex64::new(re, im))
        }
        PolePrescription::Broadened { eta } => {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(domain("eta", eta, "finite and > 0"));
            }
            let z = Complex64::new(w, eta);
            let z2 = z * z;
            let kernel = |nu: f64| -> Result<Complex64> { Ok(weight(nu)? / (nu * nu - z2)) };
            let re = split_half_line(|nu| Ok(kernel(nu)?.re), pole, scale, spec)?;
            let im = split_half_line(|nu| Ok(kernel(nu)?.im), pole, scale, spec)?;
            Ok(Complex64::new(re, im))
        }
    }
}

/// `int_0^inf g(nu) dnu` with a panel break at `split`, the tail mapped by
/// `nu = split + scale s / (1 - s)`.
fn split_half_line<G>(mut g: G, split: f64, scale: f64, spec: &QuadratureSpec) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut total = 0.0;
    if split > 0.0 {
        total +=
            integrate_adaptive_1d_fallible(&mut g, 0.0, split, EndpointSingularity::None, spec)?
                .value;
    }
    let tail = integrate_adaptive_1d_fallible(
        |s| {
            let one_minus = 1.0 - s;
            let nu = split + scale * s / one_minus;
            Ok(g(nu)? * scale / (one_minus * one_minus))
        },
        0.0,
        1.0,
        EndpointSingularity::None,
        spec,
    )?;
    Ok(total + tail.value)
}

//! Green functions above a half-space `z < 0` of permittivity `eps`.
//!
//! Scalar components are evaluated at coincidence `z = z'` (the real
//! contact term of `g_zz` is dropped since only imaginary parts enter the
//! power). The printed sign convention is carried unchanged: for the ideal
//! conductor every `Im g` is `<= 0`.

use core::f64::consts::PI;
use core::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_polar_disk_radial, QuadratureResult, QuadratureSpec};
use crate::quantities::CONSTANTS;

/// Permittivity of the lower half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(Complex64),
    IdealConductor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Propagating,
    Evanescent,
}

/// Normal wavenumbers for a given `(omega, |k_par|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceKinematics {
    pub omega: f64,
    pub k_par: f64,
    /// Vacuum normal wavenumber, `Im k >= 0`.
    pub k: Complex64,
    /// Medium normal wavenumber; `None` for the ideal conductor.
    pub k1: Option<Complex64>,
}

impl HalfSpaceKinematics {
    #[inline]
    pub fn light_cone(&self) -> f64 {
        self.omega / CONSTANTS.c()
    }

    pub fn sector(&self) -> Sector {
        if self.k_par <= self.light_cone() {
            Sector::Propagating
        } else {
            Sector::Evanescent
        }
    }
}

/// `k = sqrt(omega^2/c^2 - k_par^2)` with `Im k >= 0`, and
/// `k1 = -sqrt(eps omega^2/c^2 - k_par^2)` on the principal branch, which
/// makes `exp(i k1 z)` decay for `z -> -infinity` and gives no reflection
/// for `eps = 1`.
pub fn kinematics(omega: f64, k_par: f64, eps: Permittivity) -> Result<HalfSpaceKinematics> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    if !(k_par.is_finite() && k_par >= 0.0) {
        return Err(domain("k_par", k_par, "finite and >= 0 rad/m"));
    }
    let kv = omega / CONSTANTS.c();
    let k = Complex64::new((kv - k_par) * (kv + k_par), 0.0).sqrt();
    let k1 = match eps {
        Permittivity::Finite(e) => Some(-(e * (kv * kv) - k_par * k_par).sqrt()),
        Permittivity::IdealConductor => None,
    };
    Ok(HalfSpaceKinematics {
        omega,
        k_par,
        k,
        k1,
    })
}

/// Reflection ratios `r_p = (k1 + eps k)/(k1 - eps k)` and
/// `r_s = (k1 + k)/(k1 - k)` multiplying the image terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionRatios {
    pub p: Complex64,
    pub s: Complex64,
}

impl ReflectionRatios {
    pub fn new(kin: &HalfSpaceKinematics, eps: Permittivity) -> Result<Self> {
        match (eps, kin.k1) {
            (Permittivity::Finite(e), Some(k1)) => {
                let ek = e * kin.k;
                Ok(Self {
                    p: (k1 + ek) / (k1 - ek),
                    s: (k1 + kin.k) / (k1 - kin.k),
                })
            }
            (Permittivity::IdealConductor, _) => Ok(Self::ideal_conductor()),
            (Permittivity::Finite(_), None) => Err(Error::IdealConductorNumeric),
        }
    }

    /// `eps -> infinity`.
    pub fn ideal_conductor() -> Self {
        Self {
            p: Complex64::new(-1.0, 0.0),
            s: Complex64::new(1.0, 0.0),
        }
    }

    /// Mirror removed: free-space terms only.
    pub fn none() -> Self {
        Self {
            p: Complex64::new(0.0, 0.0),
            s: Complex64::new(0.0, 0.0),
        }
    }
}

/// The three scalar components `g_xx`, `g_yy`, `g_zz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components<T> {
    pub xx: T,
    pub yy: T,
    pub zz: T,
}

impl<T: Add<Output = T> + Copy> Components<T> {
    pub fn trace(&self) -> T {
        self.xx + self.yy + self.zz
    }
}

impl Components<Complex64> {
    pub fn im(&self) -> Components<f64> {
        Components {
            xx: self.xx.im,
            yy: self.yy.im,
            zz: self.zz.im,
        }
    }
}

pub type ScalarGreens = Components<Complex64>;
pub type ImGreens = Components<f64>;

/// Scalar Green functions at `z = z'` for a finite permittivity.
pub fn scalar_greens(kin: &HalfSpaceKinematics, eps: Complex64, z: f64) -> Result<ScalarGreens> {
    let refl = ReflectionRatios::new(kin, Permittivity::Finite(eps))?;
    scalar_greens_with(kin, &refl, z)
}

/// Scalar Green functions at `z = z'` for given reflection ratios.
pub fn scalar_greens_with(
    kin: &HalfSpaceKinematics,
    refl: &ReflectionRatios,
    z: f64,
) -> Result<ScalarGreens> {
    if !(z.is_finite() && z > 0.0) {
        return Err(domain("z", z, "finite and > 0 m"));
    }
    let k = kin.k;
    if k.norm_sqr() == 0.0 {
        return Err(domain(
            "k_par",
            kin.k_par,
            "off the light cone (k = 0 is a pole of g_yy)",
        ));
    }
    let i = Complex64::i();
    let kv2 = kin.light_cone() * kin.light_cone();
    let image = (2.0 * i * k * z).exp();
    let two_pi_i = 2.0 * PI * i;
    Ok(ScalarGreens {
        xx: -two_pi_i * k / kv2 * (refl.p * image + 1.0),
        yy: two_pi_i / k * (refl.s * image - 1.0),
        zz: two_pi_i * (kin.k_par * kin.k_par) / (k * kv2) * (refl.p * image - 1.0),
    })
}

fn ideal_conductor_im(kv: f64, k_par: f64, k: f64, z: f64) -> ImGreens {
    // 1 - cos 2kz = 2 sin^2 kz, 1 + cos 2kz = 2 cos^2 kz
    let s = libm::sin(k * z);
    let c = libm::cos(k * z);
    let kv2 = kv * kv;
    ImGreens {
        xx: -2.0 * PI * k / kv2 * (2.0 * s * s),
        yy: -2.0 * PI / k * (2.0 * s * s),
        zz: -2.0 * PI * k_par * k_par / (k * kv2) * (2.0 * c * c),
    }
}

/// Imaginary parts of the scalar Green functions above an ideal
/// conductor at `z = z'`, propagating sector only.
pub fn im_ideal_conductor(omega: f64, k_par: f64, z: f64) -> Result<ImGreens> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(domain("z", z, "finite and > 0 m"));
    }
    let kv = omega / CONSTANTS.c();
    if !(k_par >= 0.0 && k_par <= kv) {
        return Err(Error::SectorViolation {
            k_par,
            light_cone: kv,
        });
    }
    let k = libm::sqrt((kv - k_par) * (kv + k_par));
    if k == 0.0 {
        return Err(domain("k_par", k_par, "strictly inside the light cone"));
    }
    Ok(ideal_conductor_im(kv, k_par, k, z))
}

/// As [`im_ideal_conductor`] but parametrised by the normal wavenumber
/// `k in (0, omega/c]`, which is exact near the light cone.
pub fn im_ideal_conductor_normal(omega: f64, k_normal: f64, z: f64) -> Result<ImGreens> {
    let kv = omega / CONSTANTS.c();
    if !(k_normal > 0.0 && k_normal <= kv) {
        return Err(domain("k", k_normal, "in (0, omega/c]"));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(domain("z", z, "finite and > 0 m"));
    }
    let k_par = libm::sqrt((kv - k_normal) * (kv + k_normal));
    Ok(ideal_conductor_im(kv, k_par, k_normal, z))
}

/// Projection weights `(k_x^2/k_par^2, k_y^2/k_par^2)`; one half each at
/// `k_par = 0`.
pub fn projection_weights(kx: f64, ky: f64) -> (f64, f64) {
    let k2 = kx * kx + ky * ky;
    if k2 == 0.0 {
        (0.5, 0.5)
    } else {
        (kx * kx / k2, ky * ky / k2)
    }
}

/// Dyadic components from the scalar ones:
/// `D_xx = wx g_xx + wy g_yy`, `D_yy = wy g_xx + wx g_yy`, `D_zz = g_zz`.
pub fn dyadic_components<T>(g: &Components<T>, kx: f64, ky: f64) -> Components<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let (wx, wy) = projection_weights(kx, ky);
    Components {
        xx: g.xx * wx + g.yy * wy,
        yy: g.xx * wy + g.yy * wx,
        zz: g.zz,
    }
}

/// Full evaluation at one lateral wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEvaluation {
    pub g: ScalarGreens,
    pub d: ScalarGreens,
    pub sector: Sector,
}

pub fn evaluate(
    omega: f64,
    kx: f64,
    ky: f64,
    eps: Permittivity,
    z: f64,
) -> Result<GreenEvaluation> {
    let k_par = libm::sqrt(kx * kx + ky * ky);
    let kin = kinematics(omega, k_par, eps)?;
    let refl = ReflectionRatios::new(&kin, eps)?;
    let g = scalar_greens_with(&kin, &refl, z)?;
    Ok(GreenEvaluation {
        g,
        d: dyadic_components(&g, kx, ky),
        sector: kin.sector(),
    })
}

/// `Im (g_xx + g_yy + g_zz)` multiplied by the normal wavenumber `k`,
/// which is finite on the whole propagating disk.
pub(crate) fn ideal_conductor_trace_times_k(omega: f64, k_normal: f64, z: f64) -> f64 {
    let kv = omega / CONSTANTS.c();
    let kv2 = kv * kv;
    let k_par2 = (kv - k_normal) * (kv + k_normal);
    let s = libm::sin(k_normal * z);
    let c = libm::cos(k_normal * z);
    -4.0 * PI * (k_normal * k_normal * s * s / kv2 + s * s + k_par2 * c * c / kv2)
}

/// `int d^2k_par/(2 pi)^2 [Im D_xx + Im D_yy + Im D_zz]` over the
/// propagating disk above an ideal conductor.
///
/// The dyadic trace equals the scalar trace, so the angular integral is
/// trivial and only the radial quadrature remains.
pub fn ldos_trace(omega: f64, z: f64, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(domain("z", z, "finite and > 0 m"));
    }
    let kv = omega / CONSTANTS.c();
    integrate_polar_disk_radial(
        |p| Ok(ideal_conductor_trace_times_k(omega, p.k_normal, z) / p.k_normal),
        kv,
        spec,
    )
}

/// Free-space value of [`ldos_trace`]: `-2 omega/c`.
pub fn ldos_trace_free_space(omega: f64) -> f64 {
    -2.0 * omega / CONSTANTS.c()
}

//! Thermal occupation factors and the fluctuation-dissipation weights.
//!
//! `a_T(x) = coth(hbar x / 2 k_B T)` is odd in `x` and has a simple pole at
//! `x = 0`. Any odd response `Im chi(x) ~ x` cancels the pole, so products
//! of the two are evaluated through [`im_response_times_coth`], which
//! substitutes the analytic limit next to the zero instead of multiplying
//! a vanishing number by a diverging one.

use crate::error::{domain, Error, Result};
use crate::quantities::{Temperature, CONSTANTS};

/// Half-width in `hbar x / 2 k_B T` inside which the analytic `x -> 0`
/// limit replaces the direct product.
pub const DOPPLER_ZERO_WINDOW: f64 = 1e-8;

/// Above this argument `sinh` loses range; differences fall back to
/// `1 + 2/expm1(2u)` forms.
const SINH_RANGE: f64 = 300.0;

/// Imaginary part of a causal response, extended oddly to negative
/// arguments.
pub trait OddSpectralResponse {
    fn im_signed(&self, x: f64) -> Result<f64>;

    /// `lim_{x -> 0} Im chi(x) / x`.
    fn im_slope_at_zero(&self) -> Result<f64>;

    /// `Im chi(x - shift) - Im chi(x)`. Implementations with a closed form
    /// should override this to keep relative precision for small shifts.
    fn im_signed_increment(&self, x: f64, shift: f64) -> Result<f64> {
        Ok(self.im_signed(x - shift)? - self.im_signed(x)?)
    }

    /// `Im chi(x - d) + Im chi(x + d) - 2 Im chi(x)`; same remark as for
    /// [`Self::im_signed_increment`].
    fn im_signed_second_difference(&self, x: f64, d: f64) -> Result<f64> {
        Ok(self.im_signed(x - d)? + self.im_signed(x + d)? - 2.0 * self.im_signed(x)?)
    }
}

/// Particle temperature `T` and environment temperature `T0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    particle: Temperature,
    environment: Temperature,
}

impl ThermalState {
    pub fn new(t_particle: f64, t_env: f64) -> Result<Self> {
        Ok(Self {
            particle: Temperature::new(t_particle)
                .map_err(|_| domain("T_particle", t_particle, "finite and >= 0 K"))?,
            environment: Temperature::new(t_env)
                .map_err(|_| domain("T_env", t_env, "finite and >= 0 K"))?,
        })
    }

    #[inline]
    pub fn t_particle(&self) -> f64 {
        self.particle.get()
    }

    #[inline]
    pub fn t_env(&self) -> f64 {
        self.environment.get()
    }

    pub fn swapped(&self) -> Self {
        Self {
            particle: self.environment,
            environment: self.particle,
        }
    }

    pub fn is_equilibrium(&self) -> bool {
        self.particle == self.environment
    }
}

#[inline]
fn half_beta(t: f64) -> f64 {
    CONSTANTS.hbar() / (2.0 * CONSTANTS.k_b() * t)
}

/// Bose-Einstein occupation 1/(exp(hbar omega / k_B T) - 1).
pub fn mean_photon_number(t: f64, omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain("temperature", t, "finite and >= 0 K"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / libm::expm1(2.0 * half_beta(t) * omega))
}

/// coth(u), accurate for both small and large `u`.
fn coth(u: f64) -> f64 {
    let m = u.abs();
    let v = 1.0 + 2.0 / libm::expm1(2.0 * m);
    if u < 0.0 {
        -v
    } else {
        v
    }
}

/// a_T(x) = coth(hbar x / 2 k_B T). At `T = 0` this is `sign(x)`.
pub fn thermal_factor(t: f64, x: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain("temperature", t, "finite and >= 0 K"));
    }
    if !x.is_finite() {
        return Err(domain("x", x, "finite"));
    }
    if t == 0.0 {
        return Ok(if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        });
    }
    if x == 0.0 {
        return Err(Error::IntegrableSingularity { at: 0.0 });
    }
    Ok(coth(half_beta(t) * x))
}

/// `a_T(omega_doppler) - a_T0(omega)`.
pub fn occupation_difference(state: &ThermalState, omega: f64, omega_doppler: f64) -> Result<f64> {
    occupation_difference_shifted(state, omega, omega - omega_doppler)
}

/// `a_T(omega - shift) - a_T0(omega)` with the Doppler shift passed
/// separately, so that the bracket keeps full relative precision when
/// `shift << omega`.
pub fn occupation_difference_shifted(state: &ThermalState, omega: f64, shift: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    let t = state.t_particle();
    let t0 = state.t_env();
    let x = omega - shift;
    if t > 0.0 && x == 0.0 {
        return Err(Error::IntegrableSingularity { at: x });
    }
    if t > 0.0 && t0 > 0.0 {
        let a = half_beta(t) * x;
        let b = half_beta(t0) * omega;
        if a.abs() < SINH_RANGE && b < SINH_RANGE {
            // coth a - coth b = sinh(b - a) / (sinh a sinh b)
            let hb = CONSTANTS.hbar() / (2.0 * CONSTANTS.k_b());
            let inv_diff = 1.0 / t0 - 1.0 / t;
            let b_minus_a = hb * (omega * inv_diff + shift / t);
            return Ok(libm::sinh(b_minus_a) / (libm::sinh(a) * libm::sinh(b)));
        }
    }
    Ok(thermal_factor(t, x)? - thermal_factor(t0, omega)?)
}

/// Even and odd parts of `a_T` about `omega`:
/// `((a_T(omega - d) + a_T(omega + d))/2 - a_T(omega), (a_T(omega - d) - a_T(omega + d))/2)`.
///
/// Both are evaluated from hyperbolic identities, so they keep full
/// relative precision however small `d` is. Requires `|d| < omega`.
pub fn thermal_factor_split(t: f64, omega: f64, d: f64) -> Result<(f64, f64)> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(domain("omega", omega, "finite and > 0 rad/s"));
    }
    if !(d.is_finite() && d.abs() < omega) {
        return Err(domain("d", d, "|d| < omega"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain("temperature", t, "finite and >= 0 K"));
    }
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let a = half_beta(t) * omega;
    let e = half_beta(t) * d;
    if a + e.abs() > 2.0 * SINH_RANGE {
        let lo = thermal_factor(t, omega - d)?;
        let hi = thermal_factor(t, omega + d)?;
        return Ok((0.5 * (lo + hi) - thermal_factor(t, omega)?, 0.5 * (lo - hi)));
    }
    // coth(a-e) + coth(a+e) - 2 coth a = 2 coth a sinh^2 e / (sinh(a-e) sinh(a+e))
    // coth(a-e) - coth(a+e) = sinh 2e / (sinh(a-e) sinh(a+e))
    let denom = libm::sinh(a - e) * libm::sinh(a + e);
    let sh = libm::sinh(e);
    Ok((coth(a) * sh * sh / denom, 0.5 * libm::sinh(2.0 * e) / denom))
}

/// `Im chi(x) * a_T(x)`, finite everywhere including `x = 0`.
///
/// Inside `|hbar x / 2 k_B T| < DOPPLER_ZERO_WINDOW` the value is the
/// analytic limit `slope * 2 k_B T / hbar`.
pub fn im_response_times_coth<R: OddSpectralResponse + ?Sized>(
    response: &R,
    t: f64,
    x: f64,
) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain("temperature", t, "finite and >= 0 K"));
    }
    if t == 0.0 {
        return Ok(response.im_signed(x)?.abs());
    }
    let u = half_beta(t) * x;
    if u.abs() < DOPPLER_ZERO_WINDOW {
        return Ok(response.im_slope_at_zero()? / half_beta(t));
    }
    Ok(response.im_signed(x)? * coth(u))
}

/// How the product of the odd response and the thermal bracket is formed
/// next to the Doppler zero `omega = shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DopplerZeroHandling {
    /// Use [`im_response_times_coth`] inside the window.
    #[default]
    Combined,
    /// Multiply the factors directly; the pole surfaces as an error.
    /// Diagnostic only.
    Direct,
}

/// `Im chi(omega - shift) * [a_T(omega - shift) - a_T0(omega)]`.
pub fn weighted_occupation_difference<R: OddSpectralResponse + ?Sized>(
    response: &R,
    state: &ThermalState,
    omega: f64,
    shift: f64,
    handling: DopplerZeroHandling,
) -> Result<f64> {
    let x = omega - shift;
    let t = state.t_particle();
    let near_zero = t > 0.0 && (half_beta(t) * x).abs() < DOPPLER_ZERO_WINDOW;
    if near_zero && handling == DopplerZeroHandling::Combined {
        let pole_part = im_response_times_coth(response, t, x)?;
        let env_part = response.im_signed(x)? * thermal_factor(state.t_env(), omega)?;
        return Ok(pole_part - env_part);
    }
    Ok(response.im_signed(x)? * occupation_difference_shifted(state, omega, shift)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn omega_for(t: f64, hbar_omega_over_kt: f64) -> f64 {
        hbar_omega_over_kt * CONSTANTS.k_b() * t / CONSTANTS.hbar()
    }

    /// Linear odd response with a known slope.
    struct Ohmic(f64);

    impl OddSpectralResponse for Ohmic {
        fn im_signed(&self, x: f64) -> Result<f64> {
            Ok(self.0 * x)
        }
        fn im_slope_at_zero(&self) -> Result<f64> {
            Ok(self.0)
        }
    }

    #[test]
    fn photon_number_vacuum_and_ln2() {
        assert_eq!(mean_photon_number(0.0, 1e10).unwrap(), 0.0);
        let t = 0.11;
        let w = omega_for(t, core::f64::consts::LN_2);
        assert_relative_eq!(mean_photon_number(t, w).unwrap(), 1.0, max_relative = 1e-14);
        assert!(mean_photon_number(t, 0.0).is_err());
        assert!(mean_photon_number(t, -1.0).is_err());
    }

    #[test]
    fn photon_number_classical_limit() {
        // n = 1/y - 1/2 + y/12 + ... ; at y = 1e-4 the leading term is within 1e-4
        let t = 0.12;
        let y = 1e-4;
        let n = mean_photon_number(t, omega_for(t, y)).unwrap();
        assert_relative_eq!(n, 1.0 / y, max_relative = 1e-4);
        assert_relative_eq!(n, 1.0 / y - 0.5 + y / 12.0, max_relative = 1e-12);
    }

    #[test]
    fn coth_of_one() {
        let t = 0.11;
        let x = omega_for(t, 2.0);
        assert_relative_eq!(
            thermal_factor(t, x).unwrap(),
            1.313_035_285_499_331_3,
            max_relative = 1e-12
        );
    }

    #[test]
    fn thermal_factor_zero_temperature_and_pole() {
        assert_eq!(thermal_factor(0.0, 3.0).unwrap(), 1.0);
        assert_eq!(thermal_factor(0.0, -3.0).unwrap(), -1.0);
        assert_eq!(
            thermal_factor(0.1, 0.0),
            Err(Error::IntegrableSingularity { at: 0.0 })
        );
    }

    #[test]
    fn zero_temperature_limit_pointwise() {
        let t = 1e-6;
        for y in [50.5, 80.0, 400.0, 1e4] {
            let x = omega_for(t, y);
            let diff = thermal_factor(t, x).unwrap() - thermal_factor(0.0, x).unwrap();
            assert!(diff.abs() < 1e-9, "y = {y}: {diff}");
        }
    }

    #[test]
    fn occupation_difference_cases() {
        let eq = ThermalState::new(0.11, 0.11).unwrap();
        assert_eq!(occupation_difference(&eq, 1e10, 1e10).unwrap(), 0.0);

        let a = ThermalState::new(0.11, 0.12).unwrap();
        let d = occupation_difference(&a, 1e10, 1e10).unwrap();
        assert!(d < 0.0);
        assert_eq!(occupation_difference(&a.swapped(), 1e10, 1e10).unwrap(), -d);

        // identity against 2 (n_T - n_T0)
        let n = mean_photon_number(0.11, 1e10).unwrap() - mean_photon_number(0.12, 1e10).unwrap();
        assert_relative_eq!(d, 2.0 * n, max_relative = 1e-12);
    }

    #[test]
    fn occupation_difference_zero_temperature_branches() {
        let s = ThermalState::new(0.0, 0.12).unwrap();
        let w = 2e10;
        let expected = 1.0 - thermal_factor(0.12, w).unwrap();
        assert_relative_eq!(
            occupation_difference(&s, w, w).unwrap(),
            expected,
            max_relative = 1e-14
        );
        let cold = ThermalState::new(0.0, 0.0).unwrap();
        assert_eq!(occupation_difference(&cold, w, w).unwrap(), 0.0);
        assert_eq!(occupation_difference(&cold, w, -w).unwrap(), -2.0);
    }

    #[test]
    fn shifted_bracket_keeps_precision_for_tiny_shifts() {
        let s = ThermalState::new(0.11, 0.11).unwrap();
        let w = 1.4e10;
        let shift = w * 1e-6;
        let d = occupation_difference_shifted(&s, w, shift).unwrap();
        // first-order: -a_T'(w) * shift = hb sinh^-2(hb w) * shift
        let hb = half_beta(0.11);
        let sh = libm::sinh(hb * w);
        assert_relative_eq!(d, hb * shift / (sh * sh), max_relative = 1e-5);
        assert!(d > 0.0);
    }

    #[test]
    fn combined_product_is_finite_at_the_pole() {
        let r = Ohmic(2.5);
        let t = 0.11;
        let lim = 2.5 / half_beta(t);
        assert_relative_eq!(
            im_response_times_coth(&r, t, 0.0).unwrap(),
            lim,
            max_relative = 1e-15
        );
        let inside = omega_for(t, 1e-9);
        assert_relative_eq!(
            im_response_times_coth(&r, t, inside).unwrap(),
            lim,
            max_relative = 1e-15
        );
        let outside = omega_for(t, 1e-6);
        assert_relative_eq!(
            im_response_times_coth(&r, t, outside).unwrap(),
            lim,
            max_relative = 1e-12
        );
        assert_eq!(im_response_times_coth(&r, 0.0, -3.0).unwrap(), 7.5);
    }

    #[test]
    fn weighted_bracket_across_the_doppler_zero() {
        let r = Ohmic(1.0);
        let s = ThermalState::new(0.11, 0.12).unwrap();
        let w = 1e10;
        let combined =
            weighted_occupation_difference(&r, &s, w, w, DopplerZeroHandling::Combined).unwrap();
        assert_relative_eq!(combined, 1.0 / half_beta(0.11), max_relative = 1e-15);
        assert!(weighted_occupation_difference(&r, &s, w, w, DopplerZeroHandling::Direct).is_err());
        // continuity across the window edge
        let eps = omega_for(0.11, 2e-8);
        let lo = weighted_occupation_difference(&r, &s, w, w - eps, DopplerZeroHandling::Combined)
            .unwrap();
        let hi =
            weighted_occupation_difference(&r, &s, w, w + 0.5 * eps, DopplerZeroHandling::Combined)
                .unwrap();
        assert_relative_eq!(lo, combined, max_relative = 1e-6);
        assert_relative_eq!(hi, combined, max_relative = 1e-6);
    }

    proptest::proptest! {
        #[test]
        fn thermal_split_matches_direct(t in 0.05f64..2.0, y in 0.05f64..20.0, frac in -0.9f64..0.9) {
            let omega = omega_for(t, y);
            let d = frac * omega;
            let (even, odd) = thermal_factor_split(t, omega, d).unwrap();
            let lo = thermal_factor(t, omega - d).unwrap();
            let hi = thermal_factor(t, omega + d).unwrap();
            let mid = thermal_factor(t, omega).unwrap();
            let scale = lo.abs() + hi.abs();
            proptest::prop_assert!((even - (0.5 * (lo + hi) - mid)).abs() <= 1e-12 * scale);
            proptest::prop_assert!((odd - 0.5 * (lo - hi)).abs() <= 1e-12 * scale);
            proptest::prop_assert!(even >= 0.0);
        }

        #[test]
        fn coth_identity(t in 1e-3f64..10.0, y in 1e-3f64..50.0) {
            let x = omega_for(t, y);
            let a = thermal_factor(t, x).unwrap();
            let n = mean_photon_number(t, x).unwrap();
            approx::assert_relative_eq!(a, 2.0 * n + 1.0, max_relative = 1e-12);
            proptest::prop_assert_eq!(thermal_factor(t, -x).unwrap(), -a);
        }

        #[test]
        fn bracket_antisymmetry(t1 in 0.01f64..2.0, t2 in 0.01f64..2.0, y in 1e-2f64..40.0) {
            let s = ThermalState::new(t1, t2).unwrap();
            let w = omega_for(t1.max(t2), y);
            let d = occupation_difference(&s, w, w).unwrap();
            proptest::prop_assert_eq!(occupation_difference(&s.swapped(), w, w).unwrap(), -d);
        }
    }
}

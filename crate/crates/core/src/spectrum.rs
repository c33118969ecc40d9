//! Spectral radiation power of a dipole particle moving parallel to an
//! ideal-conductor mirror.
//!
//! Per angular frequency the power density is
//!
//! ```text
//! S(omega) = P omega^3 int d^2k/(2 pi)^2  2 Im alpha(omega - k_x V0)
//!            [a_T(omega - k_x V0) - a_T0(omega)] [Im D_xx + Im D_yy + Im D_zz]
//! ```
//!
//! over the propagating disk `|k| <= omega/c`, with `P` fixed by the
//! [`UnitSystem`]. Signs are those of the ideal-conductor Green functions
//! (`Im g <= 0`); [`calibration_factor`] maps them onto "absorbed power is
//! positive when the environment is hotter".
//!
//! The friction part `S_moving - S_static` is of relative size
//! `(V0/c)^2`, far below any practical quadrature tolerance of the two
//! terms separately. It is therefore integrated on its own, from the
//! `k_x -> -k_x` symmetrised difference of the integrand built out of
//! cancellation-free increments, and `S_moving` is assembled as
//! `S_static` plus that increment.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::halfspace::{
    dyadic_components, ideal_conductor_trace_times_k, im_ideal_conductor,
    im_ideal_conductor_normal, ldos_trace,
};
use crate::materials::ParticleModel;
use crate::quadrature::{
    integrate_polar_disk, DiskPoint, PhiSymmetry, QuadratureResult, QuadratureSpec,
};
use crate::quantities::{UnitSystem, CONSTANTS};
use crate::response::MotionState;
use crate::thermal::{
    occupation_difference_shifted, thermal_factor_split, weighted_occupation_difference,
    DopplerZeroHandling, OddSpectralResponse, ThermalState,
};

/// Which lateral wavevector component carries the Doppler shift.
///
/// `Ky` is a consistency hook: for an isotropic particle over a laterally
/// isotropic mirror it must give the same spectrum as `Kx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DopplerComponent {
    #[default]
    Kx,
    Ky,
}

/// Default grid bounds in units of `k_B T_max / hbar`.
pub const DEFAULT_GRID_LOWER: f64 = 1e-3;
pub const DEFAULT_GRID_UPPER: f64 = 30.0;
pub const DEFAULT_GRID_POINTS: usize = 64;
/// Edge-to-peak ratio of `|S|` above which the grid is reported as
/// truncating the thermal band.
pub const EDGE_WEIGHT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    pub particle: ParticleModel,
    pub motion: MotionState,
    pub thermal: ThermalState,
    /// Height above the mirror, m.
    pub z: f64,
    /// Strictly increasing, positive, rad/s.
    pub omega_grid: Vec<f64>,
    pub quad: QuadratureSpec,
    pub units: UnitSystem,
    pub doppler_handling: DopplerZeroHandling,
    pub doppler_component: DopplerComponent,
}

impl SpectrumConfig {
    pub fn new(
        particle: ParticleModel,
        motion: MotionState,
        thermal: ThermalState,
        z: f64,
        omega_grid: Vec<f64>,
    ) -> Result<Self> {
        let cfg = Self {
            particle,
            motion,
            thermal,
            z,
            omega_grid,
            quad: QuadratureSpec::default(),
            units: UnitSystem::default(),
            doppler_handling: DopplerZeroHandling::default(),
            doppler_component: DopplerComponent::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z.is_finite() && self.z > 0.0) {
            return Err(domain("z", self.z, "finite and > 0 m"));
        }
        if self.omega_grid.is_empty() {
            return Err(Error::InvalidGrid("omega grid is empty"));
        }
        if self.omega_grid.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidGrid(
                "omega grid values must be finite and > 0",
            ));
        }
        if self.omega_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("omega grid must be strictly increasing"));
        }
        self.quad.validate()
    }

    fn prefactor(&self) -> f64 {
        self.units.power_prefactor(&CONSTANTS)
    }

    fn shift(&self, p: &DiskPoint) -> f64 {
        let lateral = match self.doppler_component {
            DopplerComponent::Kx => p.k_par * libm::cos(p.phi),
            DopplerComponent::Ky => p.k_par * libm::sin(p.phi),
        };
        lateral * self.motion.v0()
    }
}

/// `n` logarithmically spaced points from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    check_grid_bounds(min, max, n)?;
    let (l0, l1) = (libm::log(min), libm::log(max));
    let step = (l1 - l0) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| libm::exp(l0 + step * i as f64)).collect();
    grid[0] = min;
    grid[n - 1] = max;
    Ok(grid)
}

/// `n` evenly spaced points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    check_grid_bounds(min, max, n)?;
    let step = (max - min) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| min + step * i as f64).collect();
    grid[n - 1] = max;
    Ok(grid)
}

fn check_grid_bounds(min: f64, max: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidGrid("at least two omega points are required"));
    }
    if !(min.is_finite() && min > 0.0) {
        return Err(domain("omega_min", min, "finite and > 0 rad/s"));
    }
    if !(max.is_finite() && max > min) {
        return Err(domain("omega_max", max, "finite and > omega_min"));
    }
    Ok(())
}

/// Frequency bounds covering `hbar omega / k_B T_max` in
/// `[DEFAULT_GRID_LOWER, DEFAULT_GRID_UPPER]`.
pub fn default_omega_bounds(thermal: &ThermalState) -> Result<(f64, f64)> {
    let t_max = thermal.t_particle().max(thermal.t_env());
    if t_max <= 0.0 {
        return Err(Error::InvalidSpec(
            "both temperatures are zero; the omega range must be given explicitly",
        ));
    }
    let scale = CONSTANTS.k_b() * t_max / CONSTANTS.hbar();
    Ok((DEFAULT_GRID_LOWER * scale, DEFAULT_GRID_UPPER * scale))
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(domain("omega", omega, "finite and > 0 rad/s"))
    }
}

/// Integrand of the disk integral at one lateral wavevector, propagating
/// sector only.
pub fn integrand_point(cfg: &SpectrumConfig, omega: f64, k_par: f64, phi: f64) -> Result<f64> {
    check_omega(omega)?;
    let g = im_ideal_conductor(omega, k_par, cfg.z)?;
    let p = DiskPoint {
        k_par,
        k_normal: 0.0,
        phi,
    };
    let d = dyadic_components(&g, k_par * libm::cos(phi), k_par * libm::sin(phi));
    let weight = weighted_occupation_difference(
        &cfg.particle,
        &cfg.thermal,
        omega,
        cfg.shift(&p),
        cfg.doppler_handling,
    )?;
    Ok(cfg.prefactor() * omega * omega * omega * 2.0 * weight * d.trace())
}

/// Moving-particle spectral density from the full two-dimensional disk
/// integral of [`integrand_point`].
pub fn spectral_density(cfg: &SpectrumConfig, omega: f64) -> Result<QuadratureResult> {
    check_omega(omega)?;
    let kv = omega / CONSTANTS.c();
    let scale = cfg.prefactor() * omega * omega * omega * 2.0;
    let symmetry = match cfg.doppler_component {
        DopplerComponent::Kx => PhiSymmetry::Even,
        DopplerComponent::Ky => PhiSymmetry::Full,
    };
    let r = integrate_polar_disk(
        |p| {
            let g = im_ideal_conductor_normal(omega, p.k_normal, cfg.z)?;
            let d = dyadic_components(&g, p.k_par * libm::cos(p.phi), p.k_par * libm::sin(p.phi));
            let weight = weighted_occupation_difference(
                &cfg.particle,
                &cfg.thermal,
                omega,
                cfg.shift(&p),
                cfg.doppler_handling,
            )?;
            Ok(weight * d.trace())
        },
        kv,
        symmetry,
        &cfg.quad,
    )?;
    Ok(scaled(r, scale))
}

/// Static spectral density, with the thermal bracket factored out of the
/// disk integral.
pub fn static_spectral_density(cfg: &SpectrumConfig, omega: f64) -> Result<QuadratureResult> {
    check_omega(omega)?;
    let bracket = occupation_difference_shifted(&cfg.thermal, omega, 0.0)?;
    if bracket == 0.0 {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let im_alpha = cfg.particle.im_polarizability(omega)?;
    let trace = ldos_trace(omega, cfg.z, &cfg.quad)?;
    let scale = cfg.prefactor() * omega * omega * omega * 2.0 * im_alpha * bracket;
    Ok(scaled(trace, scale))
}

/// `S_moving - S_static`, integrated directly.
///
/// With `F(d) = I(omega - d) [a_T(omega - d) - a_T0(omega)]`, `I = Im alpha`,
/// the integrand is `(F(d) + F(-d))/2 - F(0)` (the disk is symmetric under
/// `k -> -k`). Splitting `I` and `a_T` into even and odd parts about
/// `omega`,
///
/// ```text
/// (F(d) + F(-d))/2 - F(0) = dI_e (da_e + b0) + I(omega) da_e + dI_o da_o
/// ```
///
/// with `dI_e`, `da_e` the even second differences, `dI_o`, `da_o` the odd
/// half differences and `b0 = a_T(omega) - a_T0(omega)`. Every factor is
/// formed without subtracting nearly equal numbers.
pub fn friction_increment(cfg: &SpectrumConfig, omega: f64) -> Result<QuadratureResult> {
    check_omega(omega)?;
    if cfg.motion.v0() == 0.0 {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let kv = omega / CONSTANTS.c();
    let scale = cfg.prefactor() * omega * omega * omega * 2.0;
    let b0 = occupation_difference_shifted(&cfg.thermal, omega, 0.0)?;
    let t = cfg.thermal.t_particle();
    let particle = &cfg.particle;
    let i0 = particle.im_signed(omega)?;
    let symmetric_part = |d: f64| -> Result<f64> {
        let di_even = 0.5 * particle.im_signed_second_difference(omega, d)?;
        let di_odd = 0.5
            * (particle.im_signed_increment(omega, d)?
                - particle.im_signed_increment(omega, -d)?);
        let (da_even, da_odd) = thermal_factor_split(t, omega, d)?;
        Ok(di_even * (da_even + b0) + i0 * da_even + di_odd * da_odd)
    };
    let r = integrate_polar_disk(
        |p| {
            let trace = ideal_conductor_trace_times_k(omega, p.k_normal, cfg.z) / p.k_normal;
            Ok(symmetric_part(cfg.shift(&p))? * trace)
        },
        kv,
        PhiSymmetry::Even,
        &cfg.quad,
    )?;
    Ok(scaled(r, scale))
}

fn scaled(r: QuadratureResult, scale: f64) -> QuadratureResult {
    QuadratureResult {
        value: r.value * scale,
        error_estimate: r.error_estimate * scale.abs(),
        evaluations: r.evaluations,
        converged: r.converged,
    }
}

/// One frequency of the friction spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub omega: f64,
    pub s_static: f64,
    pub s_moving: f64,
    /// Always `s_moving - s_static`.
    pub s_friction: f64,
    pub err_static: f64,
    pub err_moving: f64,
    /// Error estimate of the friction increment alone.
    pub err_friction: f64,
    pub converged: bool,
    /// Set when this frequency could not be evaluated; values are NaN.
    pub failure: Option<Error>,
}

impl SpectrumRow {
    fn failed(omega: f64, e: Error) -> Self {
        Self {
            omega,
            s_static: f64::NAN,
            s_moving: f64::NAN,
            s_friction: f64::NAN,
            err_static: f64::NAN,
            err_moving: f64::NAN,
            err_friction: f64::NAN,
            converged: false,
            failure: Some(e),
        }
    }
}

/// Evaluate one frequency. Failures are recorded in the row rather than
/// returned, so a sweep can continue past them.
pub fn evaluate_row(cfg: &SpectrumConfig, omega: f64) -> SpectrumRow {
    let compute = || -> Result<SpectrumRow> {
        let st = static_spectral_density(cfg, omega)?;
        let inc = friction_increment(cfg, omega)?;
        let s_moving = st.value + inc.value;
        Ok(SpectrumRow {
            omega,
            s_static: st.value,
            s_moving,
            s_friction: s_moving - st.value,
            err_static: st.error_estimate,
            err_moving: st.error_estimate + inc.error_estimate,
            err_friction: inc.error_estimate,
            converged: st.converged && inc.converged,
            failure: None,
        })
    };
    compute().unwrap_or_else(|e| SpectrumRow::failed(omega, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumResult {
    /// Rows in grid order; `rows` may come from any evaluation order.
    pub fn from_rows(mut rows: Vec<SpectrumRow>) -> Self {
        rows.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        Self { rows }
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }
}

/// Sequential evaluation over the configured grid.
pub fn friction_spectrum(cfg: &SpectrumConfig) -> Result<SpectrumResult> {
    cfg.validate()?;
    Ok(SpectrumResult::from_rows(
        cfg.omega_grid
            .iter()
            .map(|&w| evaluate_row(cfg, w))
            .collect(),
    ))
}

/// A frequency-integrated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrated {
    /// Trapezoidal value on the full grid.
    pub value: f64,
    /// `|T_h - T_2h| / 3` from the every-other-point subgrid.
    pub richardson: f64,
    /// Trapezoidal integral of the per-frequency error estimates.
    pub quadrature: f64,
}

impl Integrated {
    pub fn error(&self) -> f64 {
        self.richardson + self.quadrature
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalPower {
    pub s_static: Integrated,
    pub s_moving: Integrated,
    pub s_friction: Integrated,
    /// `|S|` at a grid edge exceeds `EDGE_WEIGHT_LIMIT` of its peak, so
    /// the grid likely truncates the thermal band.
    pub edge_warning: bool,
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut sum = crate::quadrature::CompensatedSum::default();
    for i in 1..x.len() {
        sum.add(0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]));
    }
    sum.value()
}

fn integrate_column(x: &[f64], y: &[f64], err: &[f64]) -> Integrated {
    let fine = trapezoid(x, y);
    // every other point, always keeping the last one
    let mut idx: Vec<usize> = (0..x.len()).step_by(2).collect();
    if *idx.last().unwrap() != x.len() - 1 {
        idx.push(x.len() - 1);
    }
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let coarse = trapezoid(&xs, &ys);
    Integrated {
        value: fine,
        richardson: (fine - coarse).abs() / 3.0,
        quadrature: trapezoid(x, err),
    }
}

fn edge_heavy(y: &[f64]) -> bool {
    let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return false;
    }
    let first = y[0].abs();
    let last = y[y.len() - 1].abs();
    first > EDGE_WEIGHT_LIMIT * peak || last > EDGE_WEIGHT_LIMIT * peak
}

/// Integrate a computed spectrum over frequency.
pub fn integrate_spectrum(result: &SpectrumResult) -> Result<TotalPower> {
    let rows = &result.rows;
    if rows.len() < 3 {
        return Err(Error::InvalidGrid(
            "frequency integration needs at least three points",
        ));
    }
    if let Some(bad) = rows.iter().find(|r| r.failure.is_some()) {
        return Err(Error::NonFinite {
            abscissa: bad.omega,
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.omega).collect();
    let col = |f: fn(&SpectrumRow) -> f64| -> Vec<f64> { rows.iter().map(f).collect() };
    let s_static = col(|r| r.s_static);
    let s_moving = col(|r| r.s_moving);
    let s_friction = col(|r| r.s_friction);
    Ok(TotalPower {
        s_static: integrate_column(&x, &s_static, &col(|r| r.err_static)),
        s_moving: integrate_column(&x, &s_moving, &col(|r| r.err_moving)),
        s_friction: integrate_column(&x, &s_friction, &col(|r| r.err_friction)),
        edge_warning: edge_heavy(&s_static) || edge_heavy(&s_moving),
    })
}

/// Total power over the configured grid.
pub fn total_power(cfg: &SpectrumConfig) -> Result<TotalPower> {
    integrate_spectrum(&friction_spectrum(cfg)?)
}

/// Sign (`+1` or `-1`) that turns the carried convention into "absorbed
/// power is positive when the environment is hotter", determined from a
/// static run with the environment at twice the particle temperature.
pub fn calibration_factor(particle: &ParticleModel, z: f64, quad: &QuadratureSpec) -> Result<f64> {
    let t = 1.0;
    let omega = CONSTANTS.k_b() * t / CONSTANTS.hbar();
    let cfg = SpectrumConfig {
        quad: *quad,
        ..SpectrumConfig::new(
            *particle,
            MotionState::at_rest(),
            ThermalState::new(t, 2.0 * t)?,
            z,
            alloc::vec![omega],
        )?
    };
    let s = static_spectral_density(&cfg, omega)?.value;
    if s > 0.0 {
        Ok(1.0)
    } else if s < 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::InvalidSpec("calibration run produced zero power"))
    }
}

/// `k_B T / hbar` in rad/s.
pub fn thermal_frequency(t: f64) -> f64 {
    CONSTANTS.k_b() * t / CONSTANTS.hbar()
}

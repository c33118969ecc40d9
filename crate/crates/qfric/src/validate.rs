//! Built-in invariant checks on a configuration.

use std::io::{self, Write};

use qfric_core::response::MotionState;
use qfric_core::spectrum::{spectral_density, static_spectral_density, SpectrumConfig};
use qfric_core::thermal::ThermalState;

use crate::sweep::compute_spectrum;

pub const ANTISYMMETRY_TOL: f64 = 1e-12;
pub const FACTORIZATION_TOL: f64 = 1e-10;
pub const FACTORIZATION_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn sample_indices(n: usize, k: usize) -> Vec<usize> {
    if n <= k {
        return (0..n).collect();
    }
    (0..k).map(|i| i * (n - 1) / (k - 1)).collect()
}

/// Equilibrium null, static antisymmetry, factorization, friction identity
/// and integrated friction sign for the given configuration.
pub fn run_invariants(cfg: &SpectrumConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let t = cfg.thermal.t_particle();
    let t0 = cfg.thermal.t_env();

    let mut eq = cfg.clone();
    eq.motion = MotionState::at_rest();
    eq.thermal = ThermalState::new(t, t).expect("temperature was validated");
    let worst = compute_spectrum(&eq)
        .rows
        .iter()
        .map(|r| r.s_static.abs().max(r.s_moving.abs()))
        .fold(0.0, f64::max);
    checks.push(check(
        "equilibrium-null",
        worst == 0.0,
        format!("V0 = 0, T = T0 = {t:e} K: max |S| = {worst:e}"),
    ));

    if t != t0 {
        let mut swapped = cfg.clone();
        swapped.thermal = cfg.thermal.swapped();
        let mut worst = 0.0f64;
        let mut failed = false;
        for &w in &cfg.omega_grid {
            match (
                static_spectral_density(cfg, w),
                static_spectral_density(&swapped, w),
            ) {
                (Ok(a), Ok(b)) if a.value != 0.0 => {
                    worst = worst.max((a.value + b.value).abs() / a.value.abs())
                }
                (Ok(_), Ok(_)) => {}
                _ => failed = true,
            }
        }
        checks.push(check(
            "static-antisymmetry",
            !failed && worst <= ANTISYMMETRY_TOL,
            format!("max |S(T,T0) + S(T0,T)| / |S| = {worst:e}"),
        ));
    }

    let mut rest = cfg.clone();
    rest.motion = MotionState::at_rest();
    if t == t0 {
        // the static path is identically zero in equilibrium; factorize a
        // non-trivial bracket instead
        rest.thermal = ThermalState::new(t, 1.1 * t + 0.01).expect("finite temperatures");
    }
    let mut worst = 0.0f64;
    let mut failed = false;
    for i in sample_indices(cfg.omega_grid.len(), FACTORIZATION_POINTS) {
        let w = cfg.omega_grid[i];
        match (
            spectral_density(&rest, w),
            static_spectral_density(&rest, w),
        ) {
            (Ok(a), Ok(b)) if b.value != 0.0 => {
                worst = worst.max((a.value - b.value).abs() / b.value.abs())
            }
            (Ok(a), Ok(b)) => failed |= a.value != b.value,
            _ => failed = true,
        }
    }
    checks.push(check(
        "factorization",
        !failed && worst <= FACTORIZATION_TOL,
        format!("max relative gap, 2-D vs factorized path = {worst:e}"),
    ));

    let result = compute_spectrum(cfg);
    let identity = result
        .rows
        .iter()
        .all(|r| r.failure.is_some() || r.s_friction == r.s_moving - r.s_static);
    checks.push(check(
        "friction-identity",
        identity && result.failures() == 0,
        format!("{} rows, {} failed", result.rows.len(), result.failures()),
    ));

    match qfric_core::spectrum::integrate_spectrum(&result) {
        Ok(total) => checks.push(check(
            "friction-sign",
            total.s_friction.value <= 0.0,
            format!(
                "integrated S_friction = {:e} (error {:e})",
                total.s_friction.value,
                total.s_friction.error()
            ),
        )),
        Err(e) => checks.push(check("friction-sign", false, e.to_string())),
    }
    checks
}

pub fn write_checks<W: Write>(mut out: W, checks: &[Check]) -> io::Result<()> {
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", c.name, c.detail)?;
    }
    out.flush()
}

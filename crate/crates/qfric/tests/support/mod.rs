//! Shared test helpers.

#![allow(dead_code)]

pub mod time_domain;

use qfric::config::{RawConfig, RunConfig};

/// Particle and geometry used throughout: a = 10 nm, sigma0 = 1.6e7 S/m,
/// z = 100 nm.
pub fn run_config(t: f64, t0: f64, beta: f64, extra: &[&str]) -> RunConfig {
    let mut raw = RawConfig::parse(&format!(
        "radius_nm = 10\nsigma0 = 1.6e7\nT_particle = {t}\nT_env = {t0}\nz_nm = 100\nV0_over_c = {beta}\n"
    ))
    .unwrap();
    for e in extra {
        raw.set(e).unwrap();
    }
    RunConfig::from_raw(&raw).unwrap()
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that the report reads in
//! criterion order; the process exits non-zero if any criterion fails.

mod support;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use qfric::config::RunConfig;
use qfric::output::write_spectrum;
use qfric::sweep::{run_sweep, SweepReport};
use qfric_core::halfspace::{
    im_ideal_conductor, kinematics, ldos_trace, ldos_trace_free_space, scalar_greens_with,
    Permittivity, ReflectionRatios,
};
use qfric_core::quadrature::QuadratureSpec;
use qfric_core::quantities::CONSTANTS;
use qfric_core::response::{
    chi_ee_doppler, chi_ee_spectral, Axis, MotionState, PolePrescription, ResponseModel,
    Susceptibility,
};
use qfric_core::spectrum::{evaluate_row, spectral_density, static_spectral_density};
use rayon::prelude::*;

use support::run_config;
use support::time_domain::TimeDomainOracle;

const T_COLD: f64 = 0.11;
const T_WARM: f64 = 0.12;

// criterion tolerances
const NULL_ABS_TOL: f64 = 1e-30;
const ANTISYMMETRY_REL_TOL: f64 = 1e-12;
const FACTORIZATION_REL_TOL: f64 = 1e-10;
const FACTORIZATION_POINTS: usize = 5;
const NEAR_FIELD_X: f64 = 1e-3;
const TANGENTIAL_SUPPRESSION: f64 = 1e-6;
const NORMAL_DOUBLING_REL_TOL: f64 = 1e-4;
const FAR_FIELD_X: f64 = 200.0;
const FAR_FIELD_REL_TOL: f64 = 0.02;
const RESPONSE_REL_TOL: f64 = 1e-5;
const VELOCITIES: [f64; 3] = [1e-4, 1e-3, 1e-2];
const COARSE_REL_TOL: f64 = 1e-8;
const FINE_REL_TOL: f64 = 5e-9;

/// Regression goldens for the friction-sign sweep, fixed after the first
/// verified run: (V0/c, T, T0, S_static, S_moving, S_friction), integrated
/// over the default 64-point grid.
const GOLDENS: [(f64, f64, f64, f64, f64, f64); 9] = [
    (
        1e-4,
        T_COLD,
        T_WARM,
        4.136001111993308e-39,
        4.136000749985442e-39,
        -3.620078655678417e-46,
    ),
    (
        1e-4,
        T_WARM,
        T_COLD,
        -4.136001111993308e-39,
        -4.1360017221604705e-39,
        -6.101671627753038e-46,
    ),
    (
        1e-4,
        T_COLD,
        T_COLD,
        0.0,
        -3.620074149919885e-46,
        -3.620074149919885e-46,
    ),
    (
        1e-3,
        T_COLD,
        T_WARM,
        4.136001111993308e-39,
        4.135964911099233e-39,
        -3.620089407470609e-44,
    ),
    (
        1e-3,
        T_WARM,
        T_COLD,
        -4.136001111993308e-39,
        -4.136062128890806e-39,
        -6.101689749802302e-44,
    ),
    (
        1e-3,
        T_COLD,
        T_COLD,
        0.0,
        -3.6200849013466137e-44,
        -3.6200849013466137e-44,
    ),
    (
        1e-2,
        T_COLD,
        T_WARM,
        4.136001111993308e-39,
        4.132379947184577e-39,
        -3.621164808730813e-42,
    ),
    (
        1e-2,
        T_WARM,
        T_COLD,
        -4.136001111993308e-39,
        -4.142104614309634e-39,
        -6.103502316326284e-42,
    ),
    (
        1e-2,
        T_COLD,
        T_COLD,
        0.0,
        -3.621160282917466e-42,
        -3.621160282917466e-42,
    ),
];
const GOLDEN_REL_TOL: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn equilibrium_null() -> Outcome {
    let cfg = run_config(T_COLD, T_COLD, 0.0, &[]).spectrum;
    let mut worst = 0.0f64;
    let mut failed = 0;
    let rows: Vec<_> = cfg
        .omega_grid
        .par_iter()
        .map(|&w| (evaluate_row(&cfg, w), spectral_density(&cfg, w)))
        .collect();
    for (row, two_d) in rows {
        match (row.failure, two_d) {
            (None, Ok(s)) => {
                for v in [row.s_static, row.s_moving, row.s_friction, s.value] {
                    worst = worst.max(v.abs());
                }
            }
            _ => failed += 1,
        }
    }
    outcome(
        failed == 0 && cfg.omega_grid.len() == 64 && worst <= NULL_ABS_TOL,
        format!(
            "{} points, factorized and 2-D paths: max |S| = {worst:e} (tol {NULL_ABS_TOL:e}), {failed} failed",
            cfg.omega_grid.len()
        ),
    )
}

fn static_antisymmetry() -> Outcome {
    let a = run_config(T_COLD, T_WARM, 1e-3, &[]).spectrum;
    let b = run_config(T_WARM, T_COLD, 1e-3, &[]).spectrum;
    if a.omega_grid != b.omega_grid {
        return outcome(
            false,
            "swapped configurations resolved different grids".into(),
        );
    }
    let gaps: Vec<Option<f64>> = a
        .omega_grid
        .par_iter()
        .map(|&w| {
            let x = static_spectral_density(&a, w).ok()?.value;
            let y = static_spectral_density(&b, w).ok()?.value;
            (x != 0.0).then(|| (x + y).abs() / x.abs())
        })
        .collect();
    let worst = gaps.iter().flatten().fold(0.0f64, |m, g| m.max(*g));
    let complete = gaps.iter().all(Option::is_some);
    outcome(
        complete && worst <= ANTISYMMETRY_REL_TOL,
        format!(
            "{} points: max |S(T,T0) + S(T0,T)| / |S| = {worst:e} (tol {ANTISYMMETRY_REL_TOL:e})",
            gaps.len()
        ),
    )
}

fn factorization() -> Outcome {
    let cfg = run_config(T_COLD, T_WARM, 0.0, &[]).spectrum;
    let n = cfg.omega_grid.len();
    let picks: Vec<f64> = (0..FACTORIZATION_POINTS)
        .map(|i| cfg.omega_grid[i * (n - 1) / (FACTORIZATION_POINTS - 1)])
        .collect();
    let gaps: Vec<Option<f64>> = picks
        .par_iter()
        .map(|&w| {
            let two_d = spectral_density(&cfg, w).ok()?.value;
            let fact = static_spectral_density(&cfg, w).ok()?.value;
            (fact != 0.0).then(|| rel(two_d, fact))
        })
        .collect();
    let worst = gaps.iter().flatten().fold(0.0f64, |m, g| m.max(*g));
    outcome(
        gaps.iter().all(Option::is_some) && worst <= FACTORIZATION_REL_TOL,
        format!(
            "{} points from {:e} to {:e} rad/s: max relative gap = {worst:e} (tol {FACTORIZATION_REL_TOL:e})",
            picks.len(),
            picks[0],
            picks[picks.len() - 1]
        ),
    )
}

fn mirror_limits() -> Outcome {
    let omega = 1e11;
    let kv = omega / CONSTANTS.c();
    let mut tangential = 0.0f64;
    let mut normal = 0.0f64;
    // 2 omega z / c = 5e-4
    let z = 0.5 * NEAR_FIELD_X / (2.0 * kv);
    for f in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let k_par = f * kv;
        let mirror = match im_ideal_conductor(omega, k_par, z) {
            Ok(g) => g,
            Err(e) => return outcome(false, e.to_string()),
        };
        let kin = kinematics(omega, k_par, Permittivity::IdealConductor).unwrap();
        let free = scalar_greens_with(&kin, &ReflectionRatios::none(), z)
            .unwrap()
            .im();
        tangential = tangential
            .max(mirror.xx.abs() / free.xx.abs())
            .max(mirror.yy.abs() / free.yy.abs());
        if free.zz != 0.0 {
            normal = normal.max(rel(mirror.zz, 2.0 * free.zz));
        }
    }

    // average over one period of 2 omega z / c
    let n = 16;
    let spec = QuadratureSpec::default();
    let mut avg = 0.0;
    for j in 0..n {
        let x = FAR_FIELD_X + 2.0 * PI * (j as f64 + 0.5) / n as f64;
        match ldos_trace(omega, x / (2.0 * kv), &spec) {
            Ok(r) => avg += r.value / n as f64,
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let far = rel(avg, ldos_trace_free_space(omega));
    outcome(
        tangential < TANGENTIAL_SUPPRESSION
            && normal <= NORMAL_DOUBLING_REL_TOL
            && far <= FAR_FIELD_REL_TOL,
        format!(
            "2wz/c = {:e}: tangential/free = {tangential:e} (tol {TANGENTIAL_SUPPRESSION:e}), zz vs 2x free = {normal:e} (tol {NORMAL_DOUBLING_REL_TOL:e}); 2wz/c in [{FAR_FIELD_X}, {FAR_FIELD_X}+2pi]: averaged trace vs free = {far:e} (tol {FAR_FIELD_REL_TOL})",
            0.5 * NEAR_FIELD_X
        ),
    )
}

fn response_consistency() -> Outcome {
    const OMEGAS: [f64; 5] = [0.3, 0.7, 1.0, 1.3, 2.5];
    const DOPPLER: [f64; 4] = [-1.5, 0.0, 0.5, 2.0];
    let model = ResponseModel::isotropic(Susceptibility::lorentzian(1.0, 1.0, 0.3).unwrap());
    let motion = MotionState::from_beta(0.3).unwrap();
    let oracle = TimeDomainOracle::new(&model, Axis::X, &motion, 1 << 17, 0.02);
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut worst_spectral = 0.0f64;
    let mut beyond = 0;
    for omega in OMEGAS {
        for shift in DOPPLER {
            beyond += usize::from(shift > omega);
            let kx = shift / motion.v0();
            let reference = oracle.chi(omega, kx);
            let direct = chi_ee_doppler(&model, Axis::X, omega, kx, &motion);
            let spectral = chi_ee_spectral(
                &model,
                Axis::X,
                omega,
                kx,
                &motion,
                PolePrescription::Limit,
                &spec,
            );
            match (direct, spectral) {
                (Ok(d), Ok(s)) => {
                    worst = worst.max((d - reference).norm() / reference.norm());
                    worst_spectral = worst_spectral.max((s - reference).norm() / reference.norm());
                }
                (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
            }
        }
    }
    outcome(
        worst <= RESPONSE_REL_TOL && worst_spectral <= RESPONSE_REL_TOL && beyond > 0,
        format!(
            "20 samples ({beyond} with k_x V0 > w): chi_ee_doppler max rel = {worst:e}, spectral representation max rel = {worst_spectral:e} (tol {RESPONSE_REL_TOL:e})"
        ),
    )
}

struct SweepRun {
    beta: f64,
    t: f64,
    t0: f64,
    cfg: RunConfig,
    report: SweepReport,
}

fn sweep_runs() -> Vec<SweepRun> {
    let mut runs = Vec::new();
    for beta in VELOCITIES {
        for (t, t0) in [(T_COLD, T_WARM), (T_WARM, T_COLD), (T_COLD, T_COLD)] {
            let cfg = run_config(t, t0, beta, &[]);
            let report = run_sweep(&cfg.spectrum).expect("sweep runs");
            runs.push(SweepRun {
                beta,
                t,
                t0,
                cfg,
                report,
            });
        }
    }
    runs
}

fn friction_sign(runs: &[SweepRun]) -> Outcome {
    let mut passed = true;
    let mut notes = Vec::new();
    for (run, golden) in runs.iter().zip(GOLDENS) {
        let Some(tot) = &run.report.totals else {
            passed = false;
            notes.push(format!(
                "V0/c={:e} T={} T0={}: no totals",
                run.beta, run.t, run.t0
            ));
            continue;
        };
        let c = run.report.calibration;
        let (s, m, f) = (
            c * tot.s_static.value,
            c * tot.s_moving.value,
            c * tot.s_friction.value,
        );
        println!(
            "    V0/c = {:e}, T = {}, T0 = {}: S_static = {s:e}, S_moving = {m:e}, S_friction = {f:e} (+- {:e})",
            run.beta,
            run.t,
            run.t0,
            tot.s_friction.error()
        );
        let mut ok = f <= 0.0 && run.report.result.failures() == 0;
        if run.t == run.t0 {
            let row_static_zero = run.report.result.rows.iter().all(|r| r.s_static == 0.0);
            ok &= s == 0.0 && row_static_zero && m != 0.0;
        }
        let matches_golden = (golden.0, golden.1, golden.2) == (run.beta, run.t, run.t0)
            && rel(s, golden.3) <= GOLDEN_REL_TOL
            && rel(m, golden.4) <= GOLDEN_REL_TOL
            && rel(f, golden.5) <= GOLDEN_REL_TOL;
        if !matches_golden {
            notes.push(format!(
                "V0/c={:e} T={} T0={}: differs from golden",
                run.beta, run.t, run.t0
            ));
        }
        passed &= ok && matches_golden;
    }
    let worst_friction = runs
        .iter()
        .filter_map(|r| r.report.totals.as_ref())
        .map(|t| t.s_friction.value)
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(
        passed,
        format!(
            "{} configs: max integrated S_friction = {worst_friction:e} (<= 0 required); equilibrium S_static = 0 with S_moving != 0{}",
            runs.len(),
            if notes.is_empty() {
                "; goldens match".to_string()
            } else {
                format!("; {}", notes.join("; "))
            }
        ),
    )
}

fn quadrature_robustness() -> Outcome {
    let coarse = run_config(
        T_COLD,
        T_WARM,
        1e-3,
        &[&format!("rel_tol = {COARSE_REL_TOL:e}")],
    );
    let fine = run_config(
        T_COLD,
        T_WARM,
        1e-3,
        &[&format!("rel_tol = {FINE_REL_TOL:e}")],
    );
    let a = run_sweep(&coarse.spectrum).expect("sweep runs");
    let b = run_sweep(&fine.spectrum).expect("sweep runs");
    let mut violations = 0;
    let mut changed = 0;
    let mut estimate = 0.0f64;
    let mut worst = 0.0f64;
    for (x, y) in a.result.rows.iter().zip(&b.result.rows) {
        for (p, q, err) in [
            (x.s_static, y.s_static, x.err_static),
            (x.s_moving, y.s_moving, x.err_moving),
            (x.s_friction, y.s_friction, x.err_friction),
        ] {
            let d = (p - q).abs();
            changed += usize::from(d != 0.0);
            if p != 0.0 {
                estimate = estimate.max(err / p.abs());
            }
            if d > err {
                violations += 1;
            }
            if err > 0.0 {
                worst = worst.max(d / err);
            }
        }
    }

    let doubled = run_config(T_COLD, T_WARM, 1e-3, &["omega_points = 128"]);
    let c = run_sweep(&doubled.spectrum).expect("sweep runs");
    let (Some(t64), Some(t128)) = (&a.totals, &c.totals) else {
        return outcome(false, "totals missing".into());
    };
    let mut grid_ratio = 0.0f64;
    let mut grid_ok = true;
    for (p, q) in [
        (t64.s_static, t128.s_static),
        (t64.s_moving, t128.s_moving),
        (t64.s_friction, t128.s_friction),
    ] {
        let d = (p.value - q.value).abs();
        grid_ok &= d < p.richardson;
        grid_ratio = grid_ratio.max(d / p.richardson);
    }
    outcome(
        violations == 0 && grid_ok,
        format!(
            "rel_tol {COARSE_REL_TOL:e} -> {FINE_REL_TOL:e}: {changed} of {} values changed, {violations} beyond their error (max change/error = {worst:.3}, max error/|S| = {estimate:e}); 64 -> 128 points: max |change| / Richardson error = {grid_ratio:.3}",
            3 * a.result.rows.len()
        ),
    )
}

fn determinism(runs: &[SweepRun]) -> Outcome {
    let mut differing = Vec::new();
    for run in runs {
        let mut first = Vec::new();
        let mut second = Vec::new();
        write_spectrum(&mut first, &run.cfg, &run.report).expect("in-memory write");
        let again = run_sweep(&run.cfg.spectrum).expect("sweep runs");
        write_spectrum(&mut second, &run.cfg, &again).expect("in-memory write");
        if first != second {
            differing.push(format!("V0/c={:e} T={} T0={}", run.beta, run.t, run.t0));
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} configs: CSV byte-identical across two runs", runs.len())
        } else {
            format!("CSV differs for {}", differing.join(", "))
        },
    )
}

fn report(n: usize, name: &str, start: Instant, o: Outcome) -> bool {
    let status = if o.passed { "PASS" } else { "FAIL" };
    println!(
        "{status} [{n}] {name}: {} ({:.1} s)",
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.passed
}

fn main() -> ExitCode {
    let mut all = true;
    let s = Instant::now();
    all &= report(1, "equilibrium null", s, equilibrium_null());
    let s = Instant::now();
    all &= report(
        2,
        "static temperature antisymmetry",
        s,
        static_antisymmetry(),
    );
    let s = Instant::now();
    all &= report(3, "factorization oracle", s, factorization());
    let s = Instant::now();
    all &= report(4, "mirror-boundary limits", s, mirror_limits());
    let s = Instant::now();
    all &= report(5, "Doppler/response consistency", s, response_consistency());
    let s = Instant::now();
    let runs = sweep_runs();
    all &= report(6, "friction-sign sweep", s, friction_sign(&runs));
    let s = Instant::now();
    all &= report(7, "quadrature robustness", s, quadrature_robustness());
    let s = Instant::now();
    all &= report(8, "determinism", s, determinism(&runs));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

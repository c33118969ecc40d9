//! Deterministic globally adaptive quadrature.
//!
//! Panels are bisected in order of decreasing error estimate until the
//! summed estimate meets the tolerance. The traversal is sequential and the
//! final sum is a Neumaier-compensated sum over panels ordered by position,
//! so a given integrand and spec always produce bit-identical results.
//!
//! Both base rules are open: no abscissa ever coincides with a panel
//! endpoint.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Embedded rule pair used on every panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseRule {
    /// 15-point Kronrod extension of the 7-point Gauss rule.
    #[default]
    GaussKronrod15,
    /// Chebyshev rule on the interior nodes of the 33-point Clenshaw-Curtis
    /// grid (Fejer's second rule, 31 nodes) with its nested 15-node rule.
    ClenshawCurtis33,
}

impl BaseRule {
    pub fn name(self) -> &'static str {
        match self {
            BaseRule::GaussKronrod15 => "gk15",
            BaseRule::ClenshawCurtis33 => "cc33",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "gk15" | "GaussKronrod15" => Some(BaseRule::GaussKronrod15),
            "cc33" | "ClenshawCurtis33" => Some(BaseRule::ClenshawCurtis33),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub base_rule: BaseRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 2000,
            base_rule: BaseRule::GaussKronrod15,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0 && self.abs_tol >= 0.0) {
            return Err(Error::InvalidSpec("tolerances must be >= 0"));
        }
        if !(self.rel_tol > 0.0 || self.abs_tol > 0.0) {
            return Err(Error::InvalidSpec("rel_tol or abs_tol must be > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec("max_subdivisions must be >= 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    #[inline]
    fn tolerance(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Algebraic endpoint behaviour `f ~ |x - endpoint|^exponent`, exponent > -1.
///
/// The affected end is removed with the substitution
/// `x = endpoint +- L t^m`, `m = 1 / (1 + exponent)`, which makes the
/// transformed integrand bounded at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EndpointSingularity {
    #[default]
    None,
    Lower(f64),
    Upper(f64),
    Both(f64, f64),
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[allow(clippy::excessive_precision)] // published 30-digit tables
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)] // published 30-digit tables
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)] // published 30-digit tables
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const FEJER_N: usize = 32;
const FEJER_FINE: usize = FEJER_N - 1;
const FEJER_COARSE: usize = FEJER_N / 2 - 1;

/// Fejer second-rule nodes and weights on [-1, 1] with `n - 1` interior nodes.
fn fejer2<const M: usize>(n: usize) -> ([f64; M], [f64; M]) {
    let mut x = [0.0; M];
    let mut w = [0.0; M];
    for k in 1..n {
        let theta = k as f64 * PI / n as f64;
        let mut s = 0.0;
        for j in 1..=n / 2 {
            let odd = (2 * j - 1) as f64;
            s += libm::sin(odd * theta) / odd;
        }
        x[k - 1] = libm::cos(theta);
        w[k - 1] = 4.0 * libm::sin(theta) * s / n as f64;
    }
    (x, w)
}

struct FejerPair {
    x: [f64; FEJER_FINE],
    w_fine: [f64; FEJER_FINE],
    w_coarse: [f64; FEJER_COARSE],
}

impl FejerPair {
    fn new() -> Self {
        let (x, w_fine) = fejer2::<FEJER_FINE>(FEJER_N);
        let (_, w_coarse) = fejer2::<FEJER_COARSE>(FEJER_N / 2);
        Self {
            x,
            w_fine,
            w_coarse,
        }
    }
}

enum Rule {
    Kronrod,
    Fejer(Box<FejerPair>),
}

struct PanelEstimate {
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = libm::pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

impl Rule {
    fn new(base: BaseRule) -> Self {
        match base {
            BaseRule::GaussKronrod15 => Rule::Kronrod,
            BaseRule::ClenshawCurtis33 => Rule::Fejer(Box::new(FejerPair::new())),
        }
    }

    fn evaluations(&self) -> usize {
        match self {
            Rule::Kronrod => 15,
            Rule::Fejer(_) => FEJER_FINE,
        }
    }

    fn apply(
        &self,
        f: &mut dyn FnMut(f64) -> Result<f64>,
        a: f64,
        b: f64,
    ) -> Result<PanelEstimate> {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut eval = |x: f64| -> Result<f64> {
            let y = f(x)?;
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::NonFinite { abscissa: x })
            }
        };
        match self {
            Rule::Kronrod => {
                let fc = eval(center)?;
                let mut res_k = fc * WGK[7];
                let mut res_g = fc * WG[3];
                let mut res_abs = fc.abs() * WGK[7];
                let mut fv1 = [0.0; 7];
                let mut fv2 = [0.0; 7];
                for j in 0..7 {
                    let dx = half * XGK[j];
                    let f1 = eval(center - dx)?;
                    let f2 = eval(center + dx)?;
                    fv1[j] = f1;
                    fv2[j] = f2;
                    res_k += WGK[j] * (f1 + f2);
                    res_abs += WGK[j] * (f1.abs() + f2.abs());
                    if j % 2 == 1 {
                        res_g += WG[j / 2] * (f1 + f2);
                    }
                }
                let mean = 0.5 * res_k;
                let mut res_asc = WGK[7] * (fc - mean).abs();
                for j in 0..7 {
                    res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
                }
                let scale = half.abs();
                let err = (res_k - res_g) * half;
                Ok(PanelEstimate {
                    value: res_k * half,
                    error: rescale_error(err, res_abs * scale, res_asc * scale),
                })
            }
            Rule::Fejer(pair) => {
                let mut fine = 0.0;
                let mut coarse = 0.0;
                for (k, (&x, &w)) in pair.x.iter().zip(pair.w_fine.iter()).enumerate() {
                    let y = eval(center + half * x)?;
                    fine += w * y;
                    // odd positions of the 31-node grid are the 15-node grid
                    if k % 2 == 1 {
                        coarse += pair.w_coarse[k / 2] * y;
                    }
                }
                Ok(PanelEstimate {
                    value: fine * half,
                    error: ((fine - coarse) * half).abs(),
                })
            }
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration of a fallible integrand over `[a, b]`.
pub fn integrate_adaptive_1d_fallible<F>(
    mut f: F,
    a: f64,
    b: f64,
    hint: EndpointSingularity,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidSpec(
            "integration bounds must be finite with a < b",
        ));
    }
    for exponent in match hint {
        EndpointSingularity::None => [None, None],
        EndpointSingularity::Lower(e) | EndpointSingularity::Upper(e) => [Some(e), None],
        EndpointSingularity::Both(e1, e2) => [Some(e1), Some(e2)],
    }
    .into_iter()
    .flatten()
    {
        if !(exponent > -1.0 && exponent.is_finite()) {
            return Err(Error::InvalidSpec("endpoint exponent must be > -1"));
        }
    }
    transformed(&mut f, a, b, hint, spec)
}

fn transformed(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    hint: EndpointSingularity,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let len = b - a;
    match hint {
        EndpointSingularity::None => adaptive(f, a, b, spec),
        EndpointSingularity::Lower(e) => {
            let m = 1.0 / (1.0 + e);
            adaptive(
                &mut |t: f64| {
                    let tm = libm::pow(t, m);
                    let x = a + len * tm;
                    let y = f(x)?;
                    if !y.is_finite() {
                        return Err(Error::NonFinite { abscissa: x });
                    }
                    Ok(y * len * m * tm / t)
                },
                0.0,
                1.0,
                spec,
            )
        }
        EndpointSingularity::Upper(e) => {
            let m = 1.0 / (1.0 + e);
            adaptive(
                &mut |t: f64| {
                    let tm = libm::pow(t, m);
                    let x = b - len * tm;
                    let y = f(x)?;
                    if !y.is_finite() {
                        return Err(Error::NonFinite { abscissa: x });
                    }
                    Ok(y * len * m * tm / t)
                },
                0.0,
                1.0,
                spec,
            )
        }
        EndpointSingularity::Both(lo, hi) => {
            let mid = a + 0.5 * len;
            let half_spec = spec.with_abs_tol(0.5 * spec.abs_tol);
            let left = transformed(f, a, mid, EndpointSingularity::Lower(lo), &half_spec)?;
            let right = transformed(f, mid, b, EndpointSingularity::Upper(hi), &half_spec)?;
            let value = left.value + right.value;
            let error_estimate = left.error_estimate + right.error_estimate;
            Ok(QuadratureResult {
                value,
                error_estimate,
                evaluations: left.evaluations + right.evaluations,
                converged: error_estimate <= spec.tolerance(value),
            })
        }
    }
}

/// Adaptive integration of `f` over `[a, b]` with an optional endpoint
/// singularity hint.
pub fn integrate_adaptive_1d<F>(
    mut f: F,
    a: f64,
    b: f64,
    hint: EndpointSingularity,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_adaptive_1d_fallible(|x| Ok(f(x)), a, b, hint, spec)
}

fn adaptive(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let rule = Rule::new(spec.base_rule);
    let first = rule.apply(f, a, b)?;
    let mut evaluations = rule.evaluations();
    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    panels.push(Panel {
        a,
        b,
        value: first.value,
        error: first.error,
    });

    let mut converged;
    loop {
        let (value, error) = totals(&panels);
        converged = error <= spec.tolerance(value);
        if converged || panels.len() >= spec.max_subdivisions {
            break;
        }
        // first panel with the largest error; ties resolve to the lowest index
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        let width = pb - pa;
        if width <= 1e3 * f64::EPSILON * pa.abs().max(pb.abs()).max(f64::MIN_POSITIVE) {
            // roundoff-limited: further bisection cannot reduce the error
            break;
        }
        let left = rule.apply(f, pa, mid)?;
        let right = rule.apply(f, mid, pb)?;
        evaluations += 2 * rule.evaluations();
        panels[worst] = Panel {
            a: pa,
            b: mid,
            value: left.value,
            error: left.error,
        };
        panels.push(Panel {
            a: mid,
            b: pb,
            value: right.value,
            error: right.error,
        });
    }

    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, error_estimate) = totals(&panels);
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged,
    })
}

fn totals(panels: &[Panel]) -> (f64, f64) {
    let mut value = CompensatedSum::default();
    let mut error = 0.0;
    for p in panels {
        value.add(p.value);
        error += p.error;
    }
    (value.value(), error)
}

/// Angular symmetry of a disk integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiSymmetry {
    /// Integrate over the full circle.
    #[default]
    Full,
    /// `f(phi) = f(-phi)`: integrate over [0, pi] and double.
    Even,
}

/// A node of the disk rule. `k_normal = sqrt(k_max^2 - k_par^2)` is the
/// substitution variable and is exact; `k_par` is derived from it without
/// cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub k_par: f64,
    pub k_normal: f64,
    pub phi: f64,
}

/// `(1/(2 pi)^2) int_0^{k_max} k_par dk_par int_0^{2 pi} dphi f`.
///
/// The radial integral runs over `q = sqrt(k_max^2 - k_par^2)` with
/// `k_par dk_par = q dq`, so the light cone `k_par = k_max` sits at the
/// open endpoint `q = 0` and `1/q` factors of the integrand are cancelled
/// by the measure.
pub fn integrate_polar_disk<F>(
    mut f: F,
    k_max: f64,
    symmetry: PhiSymmetry,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(DiskPoint) -> Result<f64>,
{
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidSpec("k_max must be finite and > 0"));
    }
    let (phi_max, phi_weight) = match symmetry {
        PhiSymmetry::Full => (2.0 * PI, 1.0),
        PhiSymmetry::Even => (PI, 2.0),
    };
    let norm = 1.0 / (4.0 * PI * PI);
    // the tolerance budget is split evenly between the radial integral and
    // the angular integrals it is built from; the inner absolute tolerance
    // is spread over the disk so that it integrates to half of `abs_tol`
    let disk_measure = norm * phi_weight * 0.5 * k_max * k_max;
    let inner_spec = QuadratureSpec {
        rel_tol: 0.5 * spec.rel_tol,
        abs_tol: 0.5 * spec.abs_tol / disk_measure,
        ..*spec
    };
    let outer_spec = QuadratureSpec {
        rel_tol: 0.5 * spec.rel_tol,
        abs_tol: 0.5 * spec.abs_tol,
        ..*spec
    };
    let mut evaluations = 0usize;
    // (q, radial density of the angular error) at every radial node
    let mut inner_errors: Vec<(f64, f64)> = Vec::new();
    let mut all_inner_converged = true;
    let outer = integrate_adaptive_1d_fallible(
        |q| {
            let k_par = libm::sqrt((k_max - q) * (k_max + q));
            let inner = integrate_adaptive_1d_fallible(
                |phi| {
                    f(DiskPoint {
                        k_par,
                        k_normal: q,
                        phi,
                    })
                },
                0.0,
                phi_max,
                EndpointSingularity::None,
                &inner_spec,
            )?;
            evaluations += inner.evaluations;
            inner_errors.push((q, q * phi_weight * inner.error_estimate));
            all_inner_converged &= inner.converged;
            Ok(q * phi_weight * inner.value)
        },
        0.0,
        k_max,
        EndpointSingularity::None,
        &outer_spec,
    )?;
    let value = norm * outer.value;
    let error_estimate =
        norm * (outer.error_estimate + integrate_samples(&mut inner_errors, k_max));
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged: outer.converged && all_inner_converged,
    })
}

/// Trapezoid integral over `[0, end]` of scattered samples, held constant
/// beyond the outermost ones.
fn integrate_samples(samples: &mut [(f64, f64)], end: f64) -> f64 {
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return 0.0;
    };
    let mut acc = first.0 * first.1 + (end - last.0) * last.1;
    for w in samples.windows(2) {
        acc += 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1);
    }
    acc
}

/// Radial-only disk integral for integrands independent of `phi`:
/// `(1/2 pi) int_0^{k_max} k_par dk_par f`.
pub fn integrate_polar_disk_radial<F>(
    mut f: F,
    k_max: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: FnMut(DiskPoint) -> Result<f64>,
{
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidSpec("k_max must be finite and > 0"));
    }
    let outer = integrate_adaptive_1d_fallible(
        |q| {
            let k_par = libm::sqrt((k_max - q) * (k_max + q));
            Ok(q * f(DiskPoint {
                k_par,
                k_normal: q,
                phi: 0.0,
            })?)
        },
        0.0,
        k_max,
        EndpointSingularity::None,
        spec,
    )?;
    let norm = 1.0 / (2.0 * PI);
    Ok(QuadratureResult {
        value: norm * outer.value,
        error_estimate: norm * outer.error_estimate,
        evaluations: outer.evaluations,
        converged: outer.converged,
    })
}

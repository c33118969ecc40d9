use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside its domain (expected {expected})")]
    Domain {
        quantity: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The ideal conductor has no finite permittivity; it is only usable
    /// through its reflection limits.
    #[error("the ideal conductor has no finite permittivity to evaluate")]
    IdealConductorNumeric,

    #[error("polarizability pole: eps(omega) = -2 at omega = {omega} rad/s")]
    FrohlichPole { omega: f64 },

    /// coth(hbar x / 2 k_B T) at x = 0. Finite only in combination with an
    /// odd response that vanishes at the same point.
    #[error("integrable singularity of the thermal factor at x = {at}")]
    IntegrableSingularity { at: f64 },

    #[error("passivity violated: Im chi = {im} < 0 at omega = {omega} rad/s")]
    PassivityViolation { omega: f64, im: f64 },

    #[error("k_par = {k_par} rad/m lies outside the propagating disk (light cone at {light_cone} rad/m)")]
    SectorViolation { k_par: f64, light_cone: f64 },

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    NonFinite { abscissa: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(quantity: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        quantity,
        value,
        expected,
    }
}

//! Susceptibility of a moving oscillator bath reconstructed in the time
//! domain.
//!
//! The kernel `K(tau) = eps0 int dmu f^2(mu) G(tau; k_x, mu)` is built from
//! the crate's coupling strengths and oscillator Green function, with
//! `mu = gamma nu`. Its `k_x`-independent part
//! `R(tau) = eps0 int dnu gamma f^2(gamma nu) sin(nu tau) / (gamma nu)` is
//! evaluated for all `tau` at once by a discrete sine transform (an FFT of
//! the odd extension), then `chi(omega, k_x) = conj(int_0^inf dtau
//! exp(-i omega tau) K(tau))` by the trapezoid rule with the leading
//! Euler-Maclaurin endpoint correction.

use qfric_core::quantities::CONSTANTS;
use qfric_core::response::{
    coupling_strength_sq, oscillator_green_time, Axis, MotionState, ResponseModel,
};
use rustfft::num_complex::{Complex, Complex64};
use rustfft::FftPlanner;

pub struct TimeDomainOracle {
    dtau: f64,
    /// `R(tau_j)`, `tau_j = j dtau`, `j = 0..n`.
    r: Vec<f64>,
    v0: f64,
}

impl TimeDomainOracle {
    /// `n` frequency samples spaced by `dnu`; the time step is
    /// `pi / (n dnu)`.
    pub fn new(
        model: &ResponseModel,
        axis: Axis,
        motion: &MotionState,
        n: usize,
        dnu: f64,
    ) -> Self {
        let gamma = motion.gamma();
        let eps0 = CONSTANTS.eps0();
        let dtau = std::f64::consts::PI / (n as f64 * dnu);

        // the oscillator Green function factorizes into the Doppler phase
        // and sin(nu tau) / (gamma nu); confirm before relying on it
        for (kx, nu, tau) in [(0.7, 1.3, 2.1), (-2.0, 0.4, 9.0)] {
            let g = oscillator_green_time(kx, gamma * nu, tau, motion);
            let phase = Complex64::from_polar(1.0, kx * motion.v0() * tau);
            let expected = phase * ((nu * tau).sin() / (gamma * nu));
            assert!((g.re - expected.re).abs() < 1e-12 && (g.im - expected.im).abs() < 1e-12);
        }

        // odd extension of the weights, length 2n
        let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
        for k in 1..n {
            let nu = k as f64 * dnu;
            let f2 = coupling_strength_sq(model, axis, nu, motion).unwrap();
            let amplitude =
                oscillator_green_time(0.0, gamma * nu, 0.5 * std::f64::consts::PI / nu, motion).re;
            // amplitude = 1 / (gamma nu) at nu tau = pi / 2
            let w = eps0 * gamma * dnu * f2 * amplitude;
            buf[k] = Complex::new(w, 0.0);
            buf[2 * n - k] = Complex::new(-w, 0.0);
        }
        FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
        // X_j = -2i sum_k w_k sin(pi k j / n)
        let r = (0..n).map(|j| -0.5 * buf[j].im).collect();
        Self {
            dtau,
            r,
            v0: motion.v0(),
        }
    }

    pub fn chi(&self, omega: f64, kx: f64) -> Complex64 {
        let w = omega - kx * self.v0;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, r) in self.r.iter().enumerate().skip(1) {
            let tau = j as f64 * self.dtau;
            // exp(-i omega tau) exp(+i k_x V0 tau), conjugated at the end
            acc += Complex64::from_polar(*r, -w * tau);
        }
        // f(0) = 0; the dtau^2/12 f'(0) endpoint term
        let slope0 = self.r[1] / self.dtau;
        (acc * self.dtau + Complex64::new(self.dtau * self.dtau / 12.0 * slope0, 0.0)).conj()
    }
}

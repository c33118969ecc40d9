//! The Doppler-shifted susceptibility against its time-domain
//! construction, at 20 (omega, k_x V0) samples including k_x V0 > omega.

mod support;

use qfric_core::quadrature::QuadratureSpec;
use qfric_core::response::{
    chi_ee_doppler, chi_ee_spectral, Axis, MotionState, PolePrescription, ResponseModel,
    Susceptibility,
};
use support::time_domain::TimeDomainOracle;

const OMEGAS: [f64; 5] = [0.3, 0.7, 1.0, 1.3, 2.5];
const DOPPLER: [f64; 4] = [-1.5, 0.0, 0.5, 2.0];

#[test]
fn doppler_susceptibility_matches_time_domain() {
    let model = ResponseModel::isotropic(Susceptibility::lorentzian(1.0, 1.0, 0.3).unwrap());
    let motion = MotionState::from_beta(0.3).unwrap();
    let oracle = TimeDomainOracle::new(&model, Axis::X, &motion, 1 << 17, 0.02);
    let mut worst = 0.0f64;
    for omega in OMEGAS {
        for shift in DOPPLER {
            let kx = shift / motion.v0();
            let reference = oracle.chi(omega, kx);
            let direct = chi_ee_doppler(&model, Axis::X, omega, kx, &motion).unwrap();
            let rel = (direct - reference).norm() / reference.norm();
            worst = worst.max(rel);
            let spectral = chi_ee_spectral(
                &model,
                Axis::X,
                omega,
                kx,
                &motion,
                PolePrescription::Limit,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!(
                (spectral - reference).norm() <= 1e-5 * reference.norm(),
                "omega {omega}, k_x V0 {shift}"
            );
        }
    }
    assert!(worst <= 1e-5, "worst relative deviation {worst:e}");
}

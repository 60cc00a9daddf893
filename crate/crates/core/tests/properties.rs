use std::f64::consts::PI;

use proptest::prelude::*;

use xepecs_core::amplitudes::XepecsCalculator;
use xepecs_core::entanglement::{entanglement_entropy, reduce_to_polarization};
use xepecs_core::{
    closed_form_state, entangled_state, full_density_matrix, reduce_to_spin, EmissionGeometry, ModelParams,
};

fn geometry() -> impl Strategy<Value = EmissionGeometry> {
    (0.0..=PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.05..PI - 0.05)
        .prop_map(|(theta, phi, b1, gap)| EmissionGeometry::new(theta, phi, b1, b1 + gap).unwrap())
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.01..1.5f64, 0.01..1.0f64, 0.05..2.0f64).prop_map(|(g, zeta, gamma_1s)| ModelParams {
        g,
        zeta,
        gamma_1s,
        ..ModelParams::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_matrices_are_physical(geom in geometry(), eps in 2.0..11.0f64) {
        let calc = XepecsCalculator::new(ModelParams::default()).unwrap();
        let state = entangled_state(&calc.amplitudes(&geom, eps)).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-12);
        let rho = full_density_matrix(&state);
        prop_assert!(rho.hermitian_deviation() < 1e-12);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|x| *x > -1e-12));
        let s = entanglement_entropy(&state).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        let (a, b) = (reduce_to_spin(&state).eigenvalues(), reduce_to_polarization(&state).eigenvalues());
        prop_assert!((a[0] - b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10);
    }

    /// The entanglement structure does not depend on the sp-model energetics.
    #[test]
    fn entropy_is_parameter_independent(p in params(), theta in 0.0..=PI, eps in 2.0..11.0f64) {
        let calc = XepecsCalculator::new(p).unwrap();
        let geom = EmissionGeometry::with_direction(theta, 0.3);
        let path = entangled_state(&calc.amplitudes(&geom, eps)).unwrap();
        let closed = closed_form_state(&geom).unwrap();
        prop_assert!(1.0 - path.fidelity(&closed) < 1e-10);
    }
}

#[test]
fn reduced_density_matrix_is_consistent_with_closed_form() {
    let calc = XepecsCalculator::new(ModelParams::default()).unwrap();
    for theta_deg in [20.0f64, 90.0, 160.0] {
        let geom = EmissionGeometry::with_direction(theta_deg.to_radians(), 1.0);
        let a = reduce_to_spin(&entangled_state(&calc.amplitudes(&geom, 6.0)).unwrap());
        let b = reduce_to_spin(&closed_form_state(&geom).unwrap());
        assert!((a.entries - b.entries).norm() < 1e-12);
    }
}

use fluxbec::dynamics::{hamiltonian_for_window, HybridParams, HybridState, ValidationTerms};
use fluxbec::loop_field::{magnetic_field_at, LoopGeometry};
use fluxbec::tomography::{reduce_to_bec, rotate_for_axis, Axis, QubitDensityMatrix};
use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn hamiltonian_hermitian(w in 0.5f64..1.0, mag in 0.0f64..1e7, phase in -3.2f64..3.2, s in -1e5f64..1e5, j in -1e5f64..1e5) {
        let mut p = HybridParams::new(6.28e8, Complex64::from_polar(mag, phase));
        p.validation = Some(ValidationTerms { diagonal_shift: s, zz_coupling: j });
        let h = hamiltonian_for_window(w, &p);
        prop_assert_eq!(h, h.adjoint());
    }

    #[test]
    fn reduction_is_a_state(re in prop::array::uniform4(-1.0f64..1.0), im in prop::array::uniform4(-1.0f64..1.0)) {
        let v = Vector4::from_fn(|i, _| Complex64::new(re[i], im[i]));
        prop_assume!(v.norm() > 1e-3);
        let state = HybridState::new(v / Complex64::new(v.norm(), 0.0), 0.0).unwrap();
        let rho = reduce_to_bec(&state);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues()[0] >= -1e-12);
    }

    #[test]
    fn rotation_maps_axis_to_z(x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57) {
        let rho = QubitDensityMatrix::from_bloch(Vector3::new(x, y, z));
        for axis in Axis::ALL {
            let r = rotate_for_axis(&rho, axis);
            prop_assert!((r.spin_expectation(Axis::Z) - rho.spin_expectation(axis)).abs() < 1e-12);
        }
    }

    #[test]
    fn field_linear_in_current(x in -3.0f64..3.0, y in -3.0f64..3.0, z in 0.2f64..3.0, i in 1e-6f64..1e-2) {
        let g = LoopGeometry::centered(1e-6, 1e-8).unwrap();
        let p = Vector3::new(x, y, z) * 1e-6;
        let a = magnetic_field_at(&p, &g, i).unwrap();
        let b = magnetic_field_at(&p, &g, 2.0 * i).unwrap();
        prop_assert!((b - a * 2.0).norm() <= 1e-14 * b.norm());
    }
}

use nalgebra::Vector3;
use proptest::prelude::*;

use pc4::classify::{canonicalize, triple_distance};
use pc4::construct::KTuple;
use pc4::idempotent::{plane_equation_residual, solve_plane_idempotents};

fn arb_lambda() -> impl Strategy<Value = f64> {
    (0.05f64..3.0).prop_flat_map(|m| prop_oneof![Just(m), Just(-m)])
}

fn arb_vec3() -> impl Strategy<Value = Vector3<f64>> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

fn arb_kappa() -> impl Strategy<Value = KTuple> {
    (
        arb_vec3(),
        arb_vec3(),
        arb_vec3(),
        (0.05f64..1.5, 0.0f64..1.0, 0.0f64..1.0),
        arb_lambda(),
    )
        .prop_map(|(x, y, z, (d1, g1, g2), lambda)| {
            KTuple::new(x, y, z, Vector3::new(d1, d1 + g1, d1 + g1 + g2), lambda).unwrap()
        })
}

proptest! {
    #[test]
    fn plane_solutions_satisfy_defining_system(s in -3.0f64..3.0, lambda in arb_lambda()) {
        let r = solve_plane_idempotents(s, lambda).unwrap();
        for &(alpha, beta) in &r.extra_solutions {
            prop_assert!(plane_equation_residual(s, lambda, alpha, beta) < 1e-8);
        }
    }

    #[test]
    fn construction_routes_agree(kappa in arb_kappa()) {
        let direct = kappa.build_pc_algebra().unwrap();
        let isotope = kappa.build_pc_algebra_isotope_route().unwrap();
        prop_assert!(direct.max_entry_distance(&isotope).unwrap() < 1e-10);
    }

    #[test]
    fn canonicalize_is_idempotent(kappa in arb_kappa()) {
        let c = canonicalize(&kappa, 1e-9).unwrap();
        let again = canonicalize(&c.kappa, 1e-9).unwrap();
        prop_assert!(triple_distance(&c.kappa, &again.kappa) < 1e-9);
    }
}

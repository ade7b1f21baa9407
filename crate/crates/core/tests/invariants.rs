use frac_hardy::constants::{fs_constant, kappa};
use frac_hardy::energy::{gagliardo_direct, EnergyOptions};
use frac_hardy::functions::{sample_bump, BumpSpec};
use frac_hardy::geometry::{build_sphere_quadrature, convex_weight, dir_dist, m_weight, DomainSpec};
use frac_hardy::hardy::{quotient, remainder, WeightKind};
use frac_hardy::Workers;
use proptest::prelude::*;

fn serial() -> EnergyOptions {
    EnergyOptions { workers: Workers::serial(), richardson: false }
}

fn unit_dir(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

fn domains() -> Vec<DomainSpec<f64>> {
    vec![
        DomainSpec::unit_box(2),
        DomainSpec::ball(vec![0.5, 0.5], 0.5).unwrap(),
        DomainSpec::from_json(
            r#"{"type":"polytope","halfspaces":[{"normal":[0,1],"offset":0},{"normal":[1,0],"offset":0},{"normal":[-0.7071067811865476,-0.7071067811865476],"offset":-0.848528137423857}],"interior_point":[0.2,0.2]}"#,
        )
        .unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_positive_away_from_one(n in 1usize..5, alpha in prop_oneof![0.05f64..0.95, 1.05f64..1.95]) {
        prop_assert!(kappa(n, alpha).unwrap() > 0.0);
    }

    #[test]
    fn fs_constant_at_p2_is_twice_kappa(n in 1usize..5, alpha in 1.05f64..1.95) {
        let d = fs_constant(n, 2.0, alpha).unwrap();
        prop_assert!((d / kappa(n, alpha).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn remainder_nonnegative(x in 0.0f64..=1.0, alpha in 1.0f64..=2.0) {
        prop_assert!(remainder(x, alpha) >= -1e-15);
    }

    #[test]
    fn dir_dist_is_even(which in 0usize..3, u in 0.05f64..0.95, v in 0.05f64..0.95, theta in 0.0f64..6.283) {
        let dom = &domains()[which];
        let x = [u * 0.6 + 0.1, v * 0.4 + 0.1];
        prop_assume!(dom.contains(&x));
        let w = unit_dir(theta);
        let a = dir_dist(dom, &x, &w).unwrap();
        let b = dir_dist(dom, &x, &[-w[0], -w[1]]).unwrap();
        prop_assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
    }

    #[test]
    fn ray_trace_matches_membership(which in 0usize..3, u in 0.0f64..1.0, v in 0.0f64..1.0, theta in 0.0f64..6.283) {
        let dom = &domains()[which];
        let x = [u * 0.6 + 0.1, v * 0.4 + 0.1];
        prop_assume!(dom.contains(&x));
        let w = unit_dir(theta);
        let trace = dom.ray_intervals(&x, &w).unwrap();
        for k in -300..=300 {
            let t = k as f64 * 0.005 + 1e-4;
            let y = [x[0] + t * w[0], x[1] + t * w[1]];
            let near_edge = [trace.inf(), trace.sup()].iter().flatten().any(|e| (e - t).abs() < 1e-9);
            if !near_edge {
                prop_assert_eq!(trace.contains(t), dom.contains(&y), "t = {}", t);
            }
        }
    }

    #[test]
    fn weights_grow_as_the_domain_shrinks(r in 0.3f64..0.9, s in 1.0f64..2.0, u in -0.25f64..0.25, v in -0.25f64..0.25, alpha in 1.1f64..1.9) {
        let quad = build_sphere_quadrature::<f64>(2, 256).unwrap();
        let small = DomainSpec::ball(vec![0.0, 0.0], r).unwrap();
        let big = DomainSpec::ball(vec![0.0, 0.0], r * s).unwrap();
        let x = [u, v];
        prop_assert!(small.dist_to_boundary(&x).unwrap() <= big.dist_to_boundary(&x).unwrap());
        for two_sided in [true, false] {
            let a = m_weight(&small, &x, alpha, &quad, two_sided).unwrap();
            let b = m_weight(&big, &x, alpha, &quad, two_sided).unwrap();
            prop_assert!(a >= b * (1.0 - 1e-12));
        }
    }

    #[test]
    fn direction_average_dominates_convex_weight(u in 0.02f64..0.98, v in 0.02f64..0.98, alpha in 1.05f64..1.95) {
        let quad = build_sphere_quadrature::<f64>(2, 4096).unwrap();
        let sq = DomainSpec::unit_box(2);
        let m = m_weight(&sq, &[u, v], alpha, &quad, true).unwrap();
        let c = convex_weight(&sq, &[u, v], alpha).unwrap();
        prop_assert!(m >= c * (1.0 - 1e-6), "{} < {}", m, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn energy_is_p_homogeneous(c in 0.35f64..0.65, r in 0.2f64..0.3, lambda in -3.0f64..3.0, p in 1.5f64..3.0, alpha in 1.1f64..1.4) {
        prop_assume!(lambda.abs() > 0.1);
        let dom = DomainSpec::interval(0.0, 1.0).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![c], r), &dom, 0.01).unwrap();
        let e = gagliardo_direct(&f, &dom, p, alpha, &serial()).unwrap().value;
        let el = gagliardo_direct(&f.scaled(lambda), &dom, p, alpha, &serial()).unwrap().value;
        prop_assert!((el / (e * lambda.abs().powf(p)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quotient_is_scale_invariant(c in 0.35f64..0.65, r in 0.2f64..0.3, lambda in -3.0f64..3.0, alpha in 1.1f64..1.9) {
        prop_assume!(lambda.abs() > 0.1);
        let dom = DomainSpec::interval(0.0, 1.0).unwrap();
        let quad = build_sphere_quadrature::<f64>(1, 2).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![c], r), &dom, 0.01).unwrap();
        let kind = WeightKind::OneDTwoSided;
        let a = quotient(&f, &dom, alpha, 2.0, kind, &quad, &serial()).unwrap().value;
        let b = quotient(&f.scaled(lambda), &dom, alpha, 2.0, kind, &quad, &serial()).unwrap().value;
        prop_assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weight_ordering_orders_quotients(cx in 0.3f64..0.7, cy in 0.3f64..0.7, alpha in 1.2f64..1.8) {
        let dom = DomainSpec::unit_box(2);
        let quad = build_sphere_quadrature::<f64>(2, 1024).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![cx, cy], 0.25), &dom, 0.05).unwrap();
        let m = quotient(&f, &dom, alpha, 2.0, WeightKind::MAlpha, &quad, &serial()).unwrap();
        let c = quotient(&f, &dom, alpha, 2.0, WeightKind::ConvexTwoSided, &quad, &serial()).unwrap();
        prop_assert!(m.value <= c.value * (1.0 + 1e-6));
    }
}

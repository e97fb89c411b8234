mod common;

use bcnf_core::cones::verify_cone;
use bcnf_core::geometry::build_omega;
use bcnf_core::sampling::{sample_cone_segment, sample_in_region};
use bcnf_core::spectra::{enumerate_periodic_orbits, tangent_orbit, verify_instability};
use bcnf_core::{Matrix2, Point2, Side, DEFAULT_ETA};
use common::{in_r_with_rng, rel_close};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn growth_log_telescopes((p, mut rng) in in_r_with_rng()) {
        let omega = build_omega(&p).unwrap();
        let z0 = sample_in_region(&mut rng, &omega);
        let k = verify_cone(&p).unwrap().interval;
        let v0 = Point2::new(1.0, rng.gen_range(k.q_l..=k.q_r));
        let n = rng.gen_range(1..=1000);
        let run = tangent_orbit(&p, z0, v0, n, DEFAULT_ETA).unwrap();
        prop_assume!(run.steps > 0);

        // one matrix product, rescaled now and then to stay finite
        let mut m = Matrix2::IDENTITY;
        let mut log_scale = 0.0;
        let mut z = z0;
        for _ in 0..run.steps {
            m = p.matrix(Side::of(z)).mul(&m);
            z = p.step(z);
            let s = m.a11.abs().max(m.a12.abs()).max(m.a21.abs()).max(m.a22.abs());
            if s > 1e100 {
                m = Matrix2::new(m.a11 / s, m.a12 / s, m.a21 / s, m.a22 / s);
                log_scale += s.ln();
            }
        }
        let direct = log_scale + m.apply(v0).norm().ln() - v0.norm().ln();
        let sum: f64 = run.growth_log.iter().sum();
        prop_assert!((sum - direct).abs() <= 1e-8 * direct.abs().max(1.0), "{sum} vs {direct}");
    }

    #[test]
    fn cone_survives_and_bounds_exponent((p, mut rng) in in_r_with_rng()) {
        let omega = build_omega(&p).unwrap();
        let cert = verify_cone(&p).unwrap();
        let (a, b) = sample_cone_segment(&mut rng, &omega, &cert.interval, 1e-3 * omega.diameter());
        let run = tangent_orbit(&p, a, b - a, 1000, DEFAULT_ETA).unwrap();
        prop_assert!(run.all_in_cone());
        if run.steps > 0 {
            prop_assert!(run.finite_time_exponent >= cert.c.ln() - 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cycles_close_and_multipliers_match_determinant((p, _) in in_r_with_rng()) {
        let e = enumerate_periodic_orbits(&p, 10).unwrap();
        for r in &e.records {
            prop_assert!(r.closure_residual(&p) < 1e-9, "{} residual {}", r.word, r.closure_residual(&p));
            let det: f64 = r
                .word
                .chars()
                .map(|c| if c == 'L' { p.delta_l } else { p.delta_r })
                .product();
            prop_assert!(rel_close(r.multipliers.product(), det, 1e-10), "{}", r.word);
        }
        prop_assert!(verify_instability(&p, &e.records, 1e-9).unwrap().passed());
    }
}

mod common;

use common::*;
use dstk::analysis::is_stable;
use dstk::ops::series;
use dstk::solve::*;
use dstk::{random_system, Config, Error, RandomSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn nullspace_annihilates(seed in any::<u64>(), i in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = rng.gen_range(1..3);
        let (m, p) = (inner + rng.gen_range(0..3), inner + rng.gen_range(0..3));
        let g = low_rank(&mut rng, i, inner, m, p);
        let cfg = Config::default();
        let nr = right_nullspace(&g, &cfg).unwrap();
        let nl = left_nullspace(&g, &cfg).unwrap();
        prop_assert_eq!(nr.inputs(), m - inner);
        prop_assert_eq!(nl.outputs(), p - inner);
        for s in probes(&mut rng, 4) {
            let v = eval(&g, s);
            let scale = v.norm().max(1.0);
            if nr.inputs() > 0 {
                let w = eval(&nr, s);
                prop_assert!((&v * &w).norm() <= 1e-7 * scale * w.norm().max(1.0));
            }
            if nl.outputs() > 0 {
                let w = eval(&nl, s);
                prop_assert!((&w * &v).norm() <= 1e-7 * scale * w.norm().max(1.0));
            }
        }
    }

    #[test]
    fn solve_left_recovers(seed in any::<u64>(), i in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, p) = (rng.gen_range(1..4), rng.gen_range(1..4));
        let g = random_any(&mut rng, i, 4, m, p);
        let x = random_system(rng.gen_range(0..3), p, rng.gen_range(1..3), g.domain, RandomSpec::PROPER, &mut rng);
        let f = series(&x, &g).unwrap();
        let sol = solve_left(&g, &f, &Config::default()).unwrap();
        for s in probes(&mut rng, 4) {
            prop_assert!(rel_err(&(eval(&sol.particular, s) * eval(&g, s)), &eval(&f, s)) <= 1e-7);
        }
    }
}

#[test]
fn incompatible_right_hand_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = low_rank(&mut rng, 1, 1, 2, 3);
    let f = random_any(&mut rng, 1, 2, 1, 3);
    assert_eq!(solve_right(&g, &f, &Config::default()).err(), Some(Error::Incompatible));
}

#[test]
fn discrete_model_matching_error_matches_quadrature() {
    let cfg = Config::default();
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_system(rng.gen_range(1..3), 1, 2, domain(1), RandomSpec::STABLE, &mut rng);
        let f = random_system(rng.gen_range(1..3), 1, 2, domain(1), RandomSpec::STABLE, &mut rng);
        let (x, parts) = l2_model_match(&g, &f, &cfg).unwrap();
        assert!(is_stable(&x, &cfg));
        let resid = dstk::ops::difference(&series(&g, &x).unwrap(), &f).unwrap();
        let q = l2_quadrature(&resid);
        assert!((q - parts.error_norm).abs() <= 1e-4 * (1.0 + q), "seed {seed}: {q} vs {}", parts.error_norm);
    }
}

#[test]
fn continuous_model_matching_is_optimal_against_perturbations() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_system(2, 1, 2, domain(0), RandomSpec::STABLE, &mut rng);
    let mut f = random_system(2, 1, 2, domain(0), RandomSpec::STABLE, &mut rng);
    f.d.fill(0.0);
    let (x, parts) = l2_model_match(&g, &f, &cfg).unwrap();
    for k in 0..4 {
        let mut dx = random_system(1, 1, 1, domain(0), RandomSpec::STABLE, &mut rng);
        dx.d.fill(0.0);
        let dx = dstk::ops::scale(&dx, 0.1 * (k + 1) as f64);
        let x2 = dstk::ops::parallel(&x, &dx).unwrap();
        let r = dstk::ops::difference(&series(&g, &x2).unwrap(), &f).unwrap();
        assert!(l2_norm(&r, &cfg).unwrap() >= parts.error_norm - 1e-9);
    }
}

mod common;

use common::*;
use dstk::analysis::{is_stable, StabilityRegion};
use dstk::factor::*;
use dstk::ops::{conjugate, inverse, series, InverseMode};
use dstk::{random_system, Config, RandomSpec};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn additive_split_sums_back(seed in any::<u64>(), i in 1usize..6, m in 1usize..3, p in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_any(&mut rng, i, 5, m, p);
        let cfg = Config::default();
        let region = StabilityRegion::for_domain(g.domain);
        let Ok(fp) = additive_decompose_with(&g, region, InfinitePolicy::ToBad, &cfg) else {
            return Ok(());
        };
        prop_assert!(is_stable(&fp.first, &cfg));
        for s in probes(&mut rng, 4) {
            let sum = eval(&fp.first, s) + eval(&fp.second, s);
            prop_assert!(rel_err(&sum, &eval(&g, s)) <= 1e-8);
        }
    }

    #[test]
    fn coprime_factors_are_stable(seed in any::<u64>(), i in 0usize..6, m in 1usize..3, p in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_any(&mut rng, i, 4, m, p);
        let cfg = Config::default();
        let region = StabilityRegion::for_domain(g.domain);
        let r = rcf(&g, region, None, &cfg).unwrap();
        let l = lcf(&g, region, None, &cfg).unwrap();
        for fp in [&r, &l] {
            prop_assert!(is_stable(&fp.first, &cfg) && is_stable(&fp.second, &cfg));
        }
        for s in probes(&mut rng, 4) {
            let (n, d) = (eval(&r.first, s), eval(&r.second, s));
            prop_assert!(rel_err(&(&n * inv(&d)), &eval(&g, s)) <= 1e-7);
            let (n, d) = (eval(&l.first, s), eval(&l.second, s));
            prop_assert!(rel_err(&(inv(&d) * &n), &eval(&g, s)) <= 1e-7);
        }
    }

    #[test]
    fn inner_outer_of_stable_tall(seed in any::<u64>(), i in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..3);
        let p = m + rng.gen_range(0..2);
        let n = rng.gen_range(1..4);
        let g = random_system(n, m, p, domain(i), RandomSpec::STABLE, &mut rng);
        let cfg = Config::default();
        let fp = inner_outer(&g, &cfg).unwrap();
        let q1 = fp.inner_part().unwrap();
        let qq = series(&conjugate(&q1), &q1).unwrap();
        for s in probes(&mut rng, 3) {
            prop_assert!(rel_err(&(eval(&q1, s) * eval(&fp.second, s)), &eval(&g, s)) <= 1e-7);
        }
        // inner: Q~ Q = I on the boundary
        for t in [0.3, 1.1, 2.7] {
            let z = match g.domain {
                dstk::TimeDomain::Continuous => Complex64::new(0.0, t),
                dstk::TimeDomain::Discrete => Complex64::from_polar(1.0, t),
            };
            let v = eval(&qq, z);
            let id = dstk::linalg::CMat::identity(v.nrows(), v.ncols());
            prop_assert!((v - id).norm() <= 1e-7);
        }
    }
}

#[test]
fn first_order_rcf_has_no_unstable_poles() {
    let g = dstk::cli::io::parse_system("dstk-dss v1\ndomain continuous\ndims 1 1 1\nA\n2\nB\n1\nC\n-1\nD\n0\n").unwrap();
    let cfg = Config::default();
    let fp = rcf(&g, StabilityRegion::ContinuousLeftHalfPlane, Some(&[Complex64::new(-3.0, 0.0)]), &cfg).unwrap();
    let m_inv = inverse(&fp.second, InverseMode::General).unwrap();
    let back = series(&fp.first, &m_inv).unwrap();
    let s = Complex64::new(0.5, 1.0);
    assert!(rel_err(&eval(&back, s), &eval(&g, s)) < 1e-12);
    let pz = dstk::analysis::poles(&fp.second, &cfg);
    assert!(pz.finite.iter().all(|l| (l.re + 3.0).abs() < 1e-10));
}

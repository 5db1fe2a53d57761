mod common;

use common::*;
use dstk::analysis::{mcmillan_degree, normal_rank, poles, zeros};
use dstk::linalg::Mat;
use dstk::pencil::klf;
use dstk::Config;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sub(m: &Mat, r: (usize, usize), c: (usize, usize)) -> Mat {
    m.view((r.0, c.0), (r.1 - r.0, c.1 - c.0)).clone_owned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn klf_reconstructs_pencil(seed in any::<u64>(), i in 0usize..6, m in 1usize..4, p in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if i % 2 == 0 { low_rank(&mut rng, i, 1, m, p) } else { random_any(&mut rng, i, 4, m, p) };
        let (mm, nn) = g.system_pencil();
        let k = klf(&mm, &nn, None).unwrap();
        let scale = 1.0 + mm.norm() + nn.norm();
        prop_assert!((&k.u * &mm * &k.v - &k.mk).norm() <= 1e-12 * scale);
        prop_assert!((&k.u * &nn * &k.v - &k.nk).norm() <= 1e-12 * scale);
        let (r, c) = mm.shape();
        prop_assert!((&k.u * k.u.transpose() - Mat::identity(r, r)).norm() <= 1e-12);
        prop_assert!((&k.v * k.v.transpose() - Mat::identity(c, c)).norm() <= 1e-12);
        // block upper triangular
        let ro = k.blocks.row_offsets();
        let co = k.blocks.col_offsets();
        for bi in 1..4 {
            let rows = (ro[bi], if bi == 3 { r } else { ro[bi + 1] });
            for bj in 0..bi {
                let cols = (co[bj], co[bj + 1]);
                prop_assert!(sub(&k.mk, rows, cols).norm() <= 1e-12 * scale);
                prop_assert!(sub(&k.nk, rows, cols).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn pole_zero_count_identity(seed in any::<u64>(), i in 0usize..6, m in 1usize..4, p in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_any(&mut rng, i, 4, m, p);
        let cfg = Config::default();
        let pz = poles(&g, &cfg);
        let zz = zeros(&g, &cfg);
        let (nr, nl) = zz.kronecker_ranks;
        prop_assert_eq!(pz.total, zz.total + nr + nl);
        prop_assert_eq!(mcmillan_degree(&g, &cfg), pz.total);
    }

    #[test]
    fn normal_rank_of_products(seed in any::<u64>(), i in 0usize..6, inner in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = low_rank(&mut rng, i, inner, 3, 3);
        let cfg = Config::default();
        let r = normal_rank(&g, &cfg);
        prop_assert!(r <= inner);
        let s = probes(&mut rng, 1)[0];
        let v = eval(&g, s);
        let sv = v.singular_values();
        let numeric = sv.iter().filter(|&&x| x > 1e-9 * sv[0].max(1.0)).count();
        prop_assert_eq!(r, numeric);
    }
}

#[test]
fn integrator_has_one_pole_at_origin() {
    let g = dstk::cli::io::parse_system("dstk-dss v1\ndomain continuous\ndims 1 1 1\nA\n0\nB\n1\nC\n1\nD\n0\n").unwrap();
    let pz = poles(&g, &Config::default());
    assert_eq!(pz.total, 1);
    assert!(pz.finite[0].norm() < 1e-14);
}

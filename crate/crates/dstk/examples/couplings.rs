//! Series, parallel and stacked couplings, inverse and conjugate.

use dstk::ops::*;
use dstk::{random_system, RandomSpec, TimeDomain};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g1 = random_system(3, 2, 2, TimeDomain::Continuous, RandomSpec::PROPER, &mut rng);
    let g2 = random_system(2, 2, 2, TimeDomain::Continuous, RandomSpec::IMPROPER, &mut rng);
    let s = Complex64::new(0.5, 2.0);

    let prod = series(&g1, &g2)?;
    let want = g1.eval(s)? * g2.eval(s)?;
    println!("series: order {} err {:.1e}", prod.order(), (prod.eval(s)? - want).norm());

    let sum = parallel(&g1, &g2)?;
    println!("parallel: order {} err {:.1e}", sum.order(), (sum.eval(s)? - (g1.eval(s)? + g2.eval(s)?)).norm());

    let stacked = concat_col(&g1, &g2)?;
    println!("stacked: {}x{}", stacked.outputs(), stacked.inputs());

    let gi = inverse(&g1, InverseMode::General)?;
    let id = g1.eval(s)? * gi.eval(s)?;
    println!("G G^-1 - I: {:.1e}", (id - dstk::linalg::CMat::identity(2, 2)).norm());

    let gc = conjugate(&g1);
    println!("conjugate at s equals G(-s)^T: {:.1e}", (gc.eval(s)? - g1.eval(-s)?.transpose()).norm());
    Ok(())
}

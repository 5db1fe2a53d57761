//! Splits an unstable improper system into a stable part and the rest.

use dstk::analysis::{is_stable, StabilityRegion};
use dstk::factor::{additive_decompose_with, InfinitePolicy};
use dstk::{random_system, Config, RandomSpec, TimeDomain};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_system(5, 1, 1, TimeDomain::Continuous, RandomSpec::IMPROPER, &mut rng);
    let fp = additive_decompose_with(&g, StabilityRegion::ContinuousLeftHalfPlane, InfinitePolicy::ToBad, &cfg)?;
    println!("good order {} stable {}", fp.first.order(), is_stable(&fp.first, &cfg));
    println!("bad order {}", fp.second.order());
    let s = Complex64::new(0.3, 1.7);
    let err = (fp.first.eval(s)? + fp.second.eval(s)? - g.eval(s)?).norm();
    println!("sum error {err:.1e}");
    Ok(())
}

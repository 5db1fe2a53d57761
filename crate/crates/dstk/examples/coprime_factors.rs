//! Right and left coprime factorizations of an unstable discrete system.

use dstk::analysis::{is_stable, StabilityRegion};
use dstk::factor::{lcf, rcf};
use dstk::{random_system, Config, RandomSpec, TimeDomain};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = random_system(3, 2, 1, TimeDomain::Discrete, RandomSpec::PROPER, &mut rng);
    let z = Complex64::from_polar(1.3, 0.4);
    let r = rcf(&g, StabilityRegion::ScaledDisk(0.8), None, &cfg)?;
    let nm = r.first.eval(z)? * r.second.eval(z)?.try_inverse().unwrap();
    println!("rcf: N, M stable {} {}, error {:.1e}", is_stable(&r.first, &cfg), is_stable(&r.second, &cfg), (nm - g.eval(z)?).norm());
    let l = lcf(&g, StabilityRegion::DiscreteUnitDisk, None, &cfg)?;
    let mn = l.second.eval(z)?.try_inverse().unwrap() * l.first.eval(z)?;
    println!("lcf: error {:.1e}", (mn - g.eval(z)?).norm());
    Ok(())
}

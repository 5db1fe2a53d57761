//! Doubles a system through a redundant parallel connection and removes the
//! redundancy again.

use dstk::analysis::{mcmillan_degree, minimality_report, minreal, poles, zeros};
use dstk::ops::{parallel, scale};
use dstk::{random_system, Config, RandomSpec, TimeDomain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = random_system(4, 1, 2, TimeDomain::Continuous, RandomSpec::IMPROPER, &mut rng);
    // G/2 + G/2 has twice the states of G
    let half = scale(&g, 0.5);
    let twice = parallel(&half, &half)?;
    println!("padded order {}, minimal: {}", twice.order(), minimality_report(&twice, &cfg).is_minimal());
    let r = minreal(&twice, &cfg);
    println!("reduced order {} (nilpotent part counted with its index), McMillan degree {}", r.order(), mcmillan_degree(&g, &cfg));
    let p = poles(&r, &cfg);
    println!("poles: {:?} plus {} at infinity", p.finite, p.infinite_count);
    println!("zeros: {:?}", zeros(&r, &cfg).finite);
    Ok(())
}

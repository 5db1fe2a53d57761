//! L2-optimal approximate solution of `G X ≈ F` with stable `X`.

use dstk::ops::{difference, series};
use dstk::solve::{l2_model_match, l2_norm};
use dstk::{random_system, Config, RandomSpec, TimeDomain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for dom in [TimeDomain::Continuous, TimeDomain::Discrete] {
        let g = random_system(2, 1, 2, dom, RandomSpec::STABLE, &mut rng);
        let mut f = random_system(2, 1, 2, dom, RandomSpec::STABLE, &mut rng);
        if dom == TimeDomain::Continuous {
            f.d.fill(0.0);
        }
        let (x, parts) = l2_model_match(&g, &f, &cfg)?;
        let r = difference(&series(&g, &x)?, &f)?;
        println!("{}: X order {}, error {:.6}, direct {:.6}", dom.name(), x.order(), parts.error_norm, l2_norm(&r, &cfg)?);
    }
    Ok(())
}

//! Rational nullspaces of a rank-deficient system and solutions of
//! `G X = F`.

use dstk::ops::series;
use dstk::solve::{left_nullspace, right_nullspace, solve_right};
use dstk::{random_system, Config, RandomSpec, TimeDomain};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dstk::Result<()> {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let dom = TimeDomain::Continuous;
    // 3x3 of normal rank 1
    let g = series(
        &random_system(2, 1, 3, dom, RandomSpec::PROPER, &mut rng),
        &random_system(1, 3, 1, dom, RandomSpec::PROPER, &mut rng),
    )?;
    let s = Complex64::new(0.2, 1.1);
    let nr = right_nullspace(&g, &cfg)?;
    let nl = left_nullspace(&g, &cfg)?;
    println!("right basis {}x{}, |G N| = {:.1e}", nr.outputs(), nr.inputs(), (g.eval(s)? * nr.eval(s)?).norm());
    println!("left basis {}x{}, |N G| = {:.1e}", nl.outputs(), nl.inputs(), (nl.eval(s)? * g.eval(s)?).norm());

    let x = random_system(1, 1, 3, dom, RandomSpec::PROPER, &mut rng);
    let f = series(&g, &x)?;
    let sol = solve_right(&g, &f, &cfg)?;
    let resid = g.eval(s)? * sol.particular.eval(s)? - f.eval(s)?;
    println!("G X = F residual {:.1e}, null basis has {} columns", resid.norm(), sol.null_basis.inputs());
    Ok(())
}

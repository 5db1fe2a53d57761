//! Builds `G(s) = 1/(s+1)` and an improper descriptor system, then
//! evaluates both.

use dstk::linalg::Mat;
use dstk::{DescriptorSystem, TimeDomain};
use num_complex::Complex64;

fn main() -> dstk::Result<()> {
    let m = |r, c, v: &[f64]| Mat::from_row_slice(r, c, v);
    let g = DescriptorSystem::standard(m(1, 1, &[-1.0]), m(1, 1, &[1.0]), m(1, 1, &[-1.0]), m(1, 1, &[0.0]), TimeDomain::Continuous)?;
    println!("G(0) = {}", g.eval(Complex64::new(0.0, 0.0))?[(0, 0)]);
    println!("G(j) = {}", g.eval(Complex64::new(0.0, 1.0))?[(0, 0)]);

    // s + 1 realized with a singular E
    let a = m(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    let e = m(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let d = DescriptorSystem::new(a, e, m(2, 1, &[0.0, 1.0]), m(1, 2, &[1.0, 0.0]), m(1, 1, &[1.0]), TimeDomain::Continuous)?;
    println!("s+1 at s=2: {}", d.eval(Complex64::new(2.0, 0.0))?[(0, 0)]);
    Ok(())
}

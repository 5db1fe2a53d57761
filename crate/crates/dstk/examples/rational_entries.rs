//! Realizes a matrix given entry by entry as polynomial ratios.

use dstk::analysis::{mcmillan_degree, poles};
use dstk::ops::{realize_rational, RationalMatrixData};
use dstk::{Config, TimeDomain};
use num_complex::Complex64;

fn main() -> dstk::Result<()> {
    // coefficients in ascending powers: [ 1/(s+2) , s ; 0 , (s-1)/(s+1) ]
    let data = RationalMatrixData::new(vec![
        vec![(vec![1.0], vec![2.0, 1.0]), (vec![0.0, 1.0], vec![1.0])],
        vec![(vec![0.0], vec![1.0]), (vec![-1.0, 1.0], vec![1.0, 1.0])],
    ]);
    let g = realize_rational(&data, TimeDomain::Continuous)?;
    let cfg = Config::default();
    let s = Complex64::new(1.0, 1.0);
    println!("order {}, McMillan degree {}", g.order(), mcmillan_degree(&g, &cfg));
    println!("poles {:?}, {} infinite", poles(&g, &cfg).finite, poles(&g, &cfg).infinite_count);
    println!("entry error {:.1e}", (g.eval(s)? - data.eval(s)).norm());
    Ok(())
}

//! Inner-outer factorization of a stable non-minimum-phase system.

use dstk::cli::io::parse_system;
use dstk::factor::inner_outer;
use dstk::Config;
use num_complex::Complex64;

fn main() -> dstk::Result<()> {
    // (s − 1)/(s + 2)
    let g = parse_system("dstk-dss v1\ndomain continuous\ndims 1 1 1\nA\n-2\nB\n1\nC\n3\nD\n1\n")?;
    let fp = inner_outer(&g, &Config::default())?;
    let q = fp.inner_part().unwrap();
    for w in [0.0, 1.0, 10.0] {
        let s = Complex64::new(0.0, w);
        println!("w={w:>4}: |Q| = {:.6}, |R| = {:.6}", q.eval(s)?[(0, 0)].norm(), fp.second.eval(s)?[(0, 0)].norm());
    }
    Ok(())
}

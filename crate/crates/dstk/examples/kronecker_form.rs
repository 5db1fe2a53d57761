//! Kronecker structure of a few pencils.

use dstk::linalg::Mat;
use dstk::pencil::klf;

fn show(label: &str, m: Mat, n: Mat) -> dstk::Result<()> {
    let k = klf(&m, &n, None)?;
    let s = &k.structure;
    println!(
        "{label}: right {:?} left {:?} finite {:?} infinite {:?} normal rank {}",
        s.right_indices,
        s.left_indices,
        s.finite_eigenvalues,
        s.infinite_divisor_degrees,
        s.normal_rank()
    );
    Ok(())
}

fn main() -> dstk::Result<()> {
    // [−λ 1]
    show("row", Mat::from_row_slice(1, 2, &[0.0, 1.0]), Mat::from_row_slice(1, 2, &[1.0, 0.0]))?;
    // [−λ; 1]
    show("column", Mat::from_row_slice(2, 1, &[0.0, 1.0]), Mat::from_row_slice(2, 1, &[1.0, 0.0]))?;
    // diag(2 − λ, 1) with a nilpotent part
    let m = Mat::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let n = Mat::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    show("regular", m, n)
}

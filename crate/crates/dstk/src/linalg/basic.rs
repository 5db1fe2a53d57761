use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense real matrix.
pub type Mat = DMatrix<f64>;
/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn is_finite(m: &Mat) -> bool {
    m.iter().all(|x| x.is_finite())
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Horizontal concatenation `[a b]`.
pub fn hcat(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.nrows(), b.nrows(), "hcat: row mismatch");
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Vertical concatenation `[a; b]`.
pub fn vcat(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.ncols(), b.ncols(), "vcat: column mismatch");
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Block-diagonal matrix `diag(a, b)`.
pub fn blkdiag(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

/// 2x2 block matrix `[a b; c d]`.
pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    vcat(&hcat(a, b), &hcat(c, d))
}

pub fn sub(m: &Mat, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
    m.view((r0, c0), (nr, nc)).into_owned()
}

/// Largest singular value (spectral norm); zero for empty matrices.
pub fn norm2(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Frobenius norm.
pub fn normf(m: &Mat) -> f64 {
    m.norm()
}

/// Singular values in descending order.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Singular values of a complex matrix in descending order.
pub fn singular_values_c(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Default rank tolerance `max(r, c) * eps * sigma_max`.
pub fn default_tol(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Number of singular values above the tolerance; `tol = None` selects
/// [`default_tol`].
pub fn rank_tol(m: &Mat, tol: Option<f64>) -> usize {
    let s = singular_values(m);
    count_above(&s, m.nrows(), m.ncols(), tol)
}

pub fn rank_tol_c(m: &CMat, tol: Option<f64>) -> usize {
    let s = singular_values_c(m);
    count_above(&s, m.nrows(), m.ncols(), tol)
}

fn count_above(s: &[f64], r: usize, c: usize, tol: Option<f64>) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    let t = tol.unwrap_or_else(|| default_tol(r, c, smax));
    s.iter().filter(|&&x| x > t).count()
}

/// Singular values (descending, length `min(r, c)`) together with a full
/// orthogonal `c x c` matrix `V` whose leading columns are the matching right
/// singular vectors.
pub fn right_svd(m: &Mat) -> (Vec<f64>, Mat) {
    let (r, c) = m.shape();
    if c == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    if r == 0 {
        return (Vec::new(), eye(c));
    }
    let padded = if r >= c { m.clone() } else { vcat(m, &zeros(c - r, c)) };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sv = svd.singular_values;
    let mut idx: Vec<usize> = (0..sv.len()).collect();
    idx.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
    let mut v = zeros(c, c);
    for (k, &i) in idx.iter().enumerate() {
        v.set_column(k, &vt.row(i).transpose());
    }
    let s: Vec<f64> = idx.iter().take(r.min(c)).map(|&i| sv[i]).collect();
    (s, v)
}

/// Singular values together with a full orthogonal `r x r` matrix `U` whose
/// leading columns are the matching left singular vectors.
pub fn left_svd(m: &Mat) -> (Vec<f64>, Mat) {
    right_svd(&m.transpose())
}

/// Orthonormal basis of the right nullspace.
pub fn null_basis(m: &Mat, tol: Option<f64>) -> Mat {
    let c = m.ncols();
    let (s, v) = right_svd(m);
    let rank = count_above(&s, m.nrows(), c, tol);
    sub(&v, 0, rank, c, c - rank)
}

/// Orthonormal basis of the column range.
pub fn range_basis(m: &Mat, tol: Option<f64>) -> Mat {
    let r = m.nrows();
    let (s, u) = left_svd(m);
    let rank = count_above(&s, r, m.ncols(), tol);
    sub(&u, 0, 0, r, rank)
}

/// Orthogonal matrix whose first columns span `range(m)` (assumed full column
/// rank), completed to a basis of the whole space.
pub fn orth_complete(m: &Mat) -> Mat {
    let (_, u) = left_svd(m);
    // left singular vectors for the nonzero singular values span range(m)
    u
}

/// Solves `a x = b` with LU; `None` if `a` is numerically singular.
pub fn solve(a: &Mat, b: &Mat) -> Option<Mat> {
    if a.nrows() == 0 {
        return Some(zeros(0, b.ncols()));
    }
    let s = singular_values(a);
    let smax = s[0];
    let smin = *s.last().unwrap();
    if smax == 0.0 || smin <= 1e3 * default_tol(a.nrows(), a.ncols(), smax) {
        return None;
    }
    a.clone().lu().solve(b)
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    solve(a, &eye(a.nrows()))
}

/// Solves the complex system `a x = b`; `None` on numerical singularity.
pub fn solve_c(a: &CMat, b: &CMat) -> Option<CMat> {
    if a.nrows() == 0 {
        return Some(CMat::zeros(0, b.ncols()));
    }
    let s = singular_values_c(a);
    let smax = s[0];
    let smin = *s.last().unwrap();
    if smax == 0.0 || smin <= 1e3 * default_tol(a.nrows(), a.ncols(), smax) {
        return None;
    }
    a.clone().lu().solve(b)
}

/// Tolerance used for rank decisions on pencils and composite matrices:
/// `rows * cols * eps * scale`, never smaller than the plain default.
pub fn pencil_tol(rows: usize, cols: usize, scale: f64) -> f64 {
    let k = (rows.max(1) * cols.max(1)) as f64;
    k.max(10.0) * f64::EPSILON * scale.max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_tol(&eye(3), None), 3);
        assert_eq!(rank_tol(&zeros(2, 4), None), 0);
        assert_eq!(rank_tol(&Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]), None), 1);
        assert_eq!(rank_tol(&zeros(0, 3), None), 0);
    }

    #[test]
    fn rank_explicit_tol_scales() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-6]);
        assert_eq!(rank_tol(&m, Some(1e-5)), 1);
        assert_eq!(rank_tol(&(m.clone() * 10.0), Some(1e-4)), 1);
        assert_eq!(rank_tol(&m, Some(1e-7)), 2);
    }

    #[test]
    fn null_basis_examples() {
        let n = null_basis(&Mat::from_row_slice(1, 2, &[1.0, 0.0]), None);
        assert_eq!(n.shape(), (2, 1));
        assert!(n[(0, 0)].abs() < 1e-15 && (n[(1, 0)].abs() - 1.0).abs() < 1e-15);

        let n = null_basis(&Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]), None);
        assert_eq!(n.shape(), (2, 0));

        let n = null_basis(&Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]), None);
        assert_eq!(n.ncols(), 1);
        assert!((n[(0, 0)] + n[(1, 0)]).abs() < 1e-14);
        assert!((n.column(0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn right_svd_is_orthogonal_for_wide() {
        let m = Mat::from_row_slice(1, 3, &[1.0, 2.0, 3.0]);
        let (s, v) = right_svd(&m);
        assert_eq!(s.len(), 1);
        assert!((v.transpose() * &v - eye(3)).norm() < 1e-14);
        let mv = &m * &v;
        assert!(mv[(0, 1)].abs() < 1e-14 && mv[(0, 2)].abs() < 1e-14);
    }
}

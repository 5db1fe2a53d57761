//! Generalized real Schur decomposition of a regular pencil `A - λB`.
//!
//! Infinite eigenvalues are deflated first with an orthogonal staircase on the
//! nullspace of `B`, which leaves a finite part with nonsingular `B`; that part
//! is reduced by Hessenberg-triangular reduction and a Givens-based
//! double-shift QZ sweep. Reordering swaps adjacent 1x1/2x2 blocks by solving
//! the small generalized Sylvester equation that block-diagonalizes them.

use super::basic::*;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordered generalized real Schur form: `Qᵀ A Z = S`, `Qᵀ B Z = T`.
#[derive(Debug, Clone)]
pub struct GschurResult {
    pub s: Mat,
    pub t: Mat,
    pub q: Mat,
    pub z: Mat,
    /// One `(alpha, beta)` pair per eigenvalue, in diagonal order; the
    /// eigenvalue is `alpha / beta` and `beta == 0` marks an infinite one.
    pub eigenvalues: Vec<(Complex64, f64)>,
    /// Sizes (1 or 2) of the diagonal blocks of `S`, in order.
    pub blocks: Vec<usize>,
    /// Number of leading eigenvalues that satisfy the ordering predicate.
    pub selected_count: usize,
}

impl GschurResult {
    /// Eigenvalues as complex numbers; `None` for infinite ones.
    pub fn eigen_values(&self) -> Vec<Option<Complex64>> {
        self.eigenvalues
            .iter()
            .map(|&(a, b)| if b == 0.0 { None } else { Some(a / b) })
            .collect()
    }
}

struct Work {
    s: Mat,
    t: Mat,
    q: Mat,
    z: Mat,
}

impl Work {
    fn n(&self) -> usize {
        self.s.nrows()
    }

    /// Rows `i`, `k` ← `[c s; -s c]` applied from the left.
    fn rot_rows(&mut self, i: usize, k: usize, c: f64, s: f64) {
        for m in [&mut self.s, &mut self.t] {
            for j in 0..m.ncols() {
                let (x, y) = (m[(i, j)], m[(k, j)]);
                m[(i, j)] = c * x + s * y;
                m[(k, j)] = -s * x + c * y;
            }
        }
        let q = &mut self.q;
        for r in 0..q.nrows() {
            let (x, y) = (q[(r, i)], q[(r, k)]);
            q[(r, i)] = c * x + s * y;
            q[(r, k)] = -s * x + c * y;
        }
    }

    /// Columns `p`, `q` ← `(c·p - s·q, s·p + c·q)`.
    fn rot_cols(&mut self, p: usize, q: usize, c: f64, s: f64) {
        for m in [&mut self.s, &mut self.t, &mut self.z] {
            for r in 0..m.nrows() {
                let (x, y) = (m[(r, p)], m[(r, q)]);
                m[(r, p)] = c * x - s * y;
                m[(r, q)] = s * x + c * y;
            }
        }
    }

    /// Left rotation on rows `i`, `k` that annihilates the `k` component of
    /// the pair `(a, b)`.
    fn zero_row_pair(&mut self, i: usize, k: usize, a: f64, b: f64) {
        let r = a.hypot(b);
        if r == 0.0 || b == 0.0 {
            return;
        }
        self.rot_rows(i, k, a / r, b / r);
    }

    /// Right rotation on columns `p`, `q` that zeroes `T[row, p]`.
    fn zero_t_entry(&mut self, row: usize, p: usize, q: usize) {
        let (x, y) = (self.t[(row, p)], self.t[(row, q)]);
        let r = x.hypot(y);
        if r == 0.0 || x == 0.0 {
            return;
        }
        self.rot_cols(p, q, y / r, x / r);
        self.t[(row, p)] = 0.0;
    }

    /// Applies orthogonal `u` (size k) to rows `r0..r0+k` (as `uᵀ·`) and
    /// accumulates into `Q`.
    fn apply_left_block(&mut self, r0: usize, u: &Mat) {
        let k = u.nrows();
        let n = self.n();
        for m in [&mut self.s, &mut self.t] {
            let blk = sub(m, r0, 0, k, n);
            m.view_mut((r0, 0), (k, n)).copy_from(&(u.transpose() * blk));
        }
        let blk = sub(&self.q, 0, r0, n, k);
        self.q.view_mut((0, r0), (n, k)).copy_from(&(blk * u));
    }

    /// Applies orthogonal `v` (size k) to columns `c0..c0+k` and accumulates
    /// into `Z`.
    fn apply_right_block(&mut self, c0: usize, v: &Mat) {
        let k = v.nrows();
        let n = self.n();
        for m in [&mut self.s, &mut self.t, &mut self.z] {
            let blk = sub(m, 0, c0, n, k);
            m.view_mut((0, c0), (n, k)).copy_from(&(blk * v));
        }
    }
}

fn probe_regular(a: &Mat, b: &Mat) -> bool {
    let n = a.nrows();
    if n == 0 {
        return true;
    }
    let scale = normf(a).max(normf(b)).max(1.0);
    let tol = pencil_tol(n, n, scale);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_9e9c);
    (0..3).any(|_| {
        let shift: f64 = rng.gen_range(-2.0..2.0) * scale;
        rank_tol(&(a - b * shift), Some(tol)) == n
    })
}

/// Unordered generalized real Schur decomposition.
pub fn gschur(a: &Mat, b: &Mat) -> Result<GschurResult> {
    gschur_ordered(a, b, |_, _| false)
}

/// Generalized real Schur decomposition with the eigenvalues satisfying
/// `select(alpha, beta)` moved to the leading positions. Complex pairs are
/// tested through the member with positive imaginary part.
pub fn gschur_ordered<F>(a: &Mat, b: &Mat, select: F) -> Result<GschurResult>
where
    F: Fn(Complex64, f64) -> bool,
{
    let n = a.nrows();
    if a.ncols() != n || b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "gschur needs square pencils of equal order, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if !is_finite(a) || !is_finite(b) {
        return Err(Error::NonFinite("pencil"));
    }
    if !probe_regular(a, b) {
        return Err(Error::SingularPencil);
    }
    let mut w = Work { s: a.clone(), t: b.clone(), q: eye(n), z: eye(n) };
    let scale = normf(a).max(normf(b)).max(f64::MIN_POSITIVE);
    let tol = pencil_tol(n, n, scale);

    let ninf = deflate_infinite(&mut w, tol)?;
    let mut blocks = vec![1; ninf];
    if ninf < n {
        hessenberg_triangular(&mut w, ninf);
        qz_iterate(&mut w, ninf)?;
        blocks.extend(standardize(&mut w, ninf));
    }
    normalize_signs(&mut w, &blocks);

    let mut res = GschurResult {
        eigenvalues: Vec::new(),
        blocks,
        selected_count: 0,
        s: Mat::zeros(0, 0),
        t: Mat::zeros(0, 0),
        q: Mat::zeros(0, 0),
        z: Mat::zeros(0, 0),
    };
    let ev = block_eigenvalues(&w, &res.blocks);
    let flags: Vec<bool> = ev.iter().map(|e| select(e.0, e.1)).collect();
    res.selected_count = reorder(&mut w, &mut res.blocks, flags)?;
    normalize_signs(&mut w, &res.blocks);
    res.eigenvalues = block_eigenvalues(&w, &res.blocks).into_iter().flat_map(|(a, b)| {
        if a.im != 0.0 {
            vec![(a, b), (a.conj(), b)]
        } else {
            vec![(a, b)]
        }
    }).collect();
    // eigenvalue list carries pairs expanded; recompute selected eigenvalue count
    let mut cnt = 0;
    for &bs in res.blocks.iter().take(res.selected_count) {
        cnt += bs;
    }
    res.selected_count = cnt;
    res.s = w.s;
    res.t = w.t;
    res.q = w.q;
    res.z = w.z;
    Ok(res)
}

/// Moves the infinite eigenvalues to the leading part, leaving `S`
/// upper-triangular and `T` with zero diagonal there. Returns their count.
fn deflate_infinite(w: &mut Work, tol: f64) -> Result<usize> {
    let n = w.n();
    let mut k0 = 0;
    while k0 < n {
        let m = n - k0;
        let bw = sub(&w.t, k0, k0, m, m);
        let (sv, v) = right_svd(&bw);
        let rank = sv.iter().filter(|&&x| x > tol).count();
        let nu = m - rank;
        if nu == 0 {
            break;
        }
        // null columns first
        let mut vp = Mat::zeros(m, m);
        for j in 0..nu {
            vp.set_column(j, &v.column(rank + j));
        }
        for j in 0..rank {
            vp.set_column(nu + j, &v.column(j));
        }
        w.apply_right_block(k0, &vp);
        for r in k0..n {
            for c in k0..k0 + nu {
                w.t[(r, c)] = 0.0;
            }
        }
        let a1 = sub(&w.s, k0, k0, m, nu);
        let (sa, u) = left_svd(&a1);
        let rho = sa.iter().filter(|&&x| x > tol).count();
        if rho < nu {
            return Err(Error::SingularPencil);
        }
        w.apply_left_block(k0, &u);
        for r in k0 + nu..n {
            for c in k0..k0 + nu {
                w.s[(r, c)] = 0.0;
            }
        }
        // triangularize the leading nu x nu block of S
        let blk = sub(&w.s, k0, k0, nu, nu);
        let qr = blk.qr();
        let qb = qr.q();
        w.apply_left_block(k0, &qb);
        for r in 0..nu {
            for c in 0..r {
                w.s[(k0 + r, k0 + c)] = 0.0;
            }
        }
        k0 += nu;
    }
    Ok(k0)
}

fn hessenberg_triangular(w: &mut Work, w0: usize) {
    let n = w.n();
    let m = n - w0;
    let bw = sub(&w.t, w0, w0, m, m);
    let q0 = bw.qr().q();
    w.apply_left_block(w0, &q0);
    for r in w0..n {
        for c in w0..r {
            w.t[(r, c)] = 0.0;
        }
    }
    if m < 3 {
        return;
    }
    for j in w0..n - 2 {
        for i in (j + 2..n).rev() {
            let (a, b) = (w.s[(i - 1, j)], w.s[(i, j)]);
            w.zero_row_pair(i - 1, i, a, b);
            w.s[(i, j)] = 0.0;
            w.zero_t_entry(i, i - 1, i);
        }
    }
}

fn small_sub(w: &Work, k: usize, snorm: f64) -> bool {
    let d = w.s[(k - 1, k - 1)].abs() + w.s[(k, k)].abs();
    let d = if d == 0.0 { snorm } else { d };
    w.s[(k, k - 1)].abs() <= f64::EPSILON * d
}

fn qz_iterate(w: &mut Work, w0: usize) -> Result<()> {
    let n = w.n();
    let snorm = normf(&w.s).max(f64::MIN_POSITIVE);
    let tnorm = normf(&w.t).max(f64::MIN_POSITIVE);
    // guard tiny diagonal entries of T (finite part has nonsingular T)
    for k in w0..n {
        if w.t[(k, k)].abs() < f64::EPSILON * tnorm {
            w.t[(k, k)] = f64::EPSILON * tnorm;
        }
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 60 * (n - w0).max(1);
    while hi > w0 {
        let mut l = hi;
        while l > w0 {
            if small_sub(w, l, snorm) {
                w.s[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == hi {
            if hi < 2 {
                break;
            }
            hi -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(Error::IterationFailure);
        }
        double_shift_step(w, l, hi, iter % 11 == 10);
    }
    Ok(())
}

fn double_shift_step(w: &mut Work, l: usize, h: usize, exceptional: bool) {
    let m = h - l + 1;
    let sw = sub(&w.s, l, l, m, m);
    let tw = sub(&w.t, l, l, m, m);
    // M = S T^{-1} on the active window
    let mm = tw
        .transpose()
        .solve_lower_triangular(&sw.transpose())
        .map(|x| x.transpose())
        .unwrap_or_else(|| sw.clone());
    let (s, p) = if exceptional {
        let wv = mm[(m - 1, m - 2)].abs() + mm[(m - 2, m - 3)].abs();
        (1.5 * wv, wv * wv)
    } else {
        let (a, b, c, d) = (mm[(m - 2, m - 2)], mm[(m - 2, m - 1)], mm[(m - 1, m - 2)], mm[(m - 1, m - 1)]);
        (a + d, a * d - b * c)
    };
    let x = mm[(0, 0)] * mm[(0, 0)] + mm[(0, 1)] * mm[(1, 0)] - s * mm[(0, 0)] + p;
    let y = mm[(1, 0)] * (mm[(0, 0)] + mm[(1, 1)] - s);
    let z = mm[(1, 0)] * mm[(2, 1)];

    // k = l - 1 is the initial bulge-introducing step
    for kk in 0..=(h - 1 - l) {
        let r0 = l + kk;
        let r1 = r0 + 1;
        let r2 = r0 + 2;
        let (vx, vy, vz) = if kk == 0 {
            (x, y, z)
        } else {
            let k = r0 - 1;
            (w.s[(r0, k)], w.s[(r1, k)], if r2 <= h { w.s[(r2, k)] } else { 0.0 })
        };
        let mut vy = vy;
        if r2 <= h {
            w.zero_row_pair(r1, r2, vy, vz);
            vy = vy.hypot(vz);
        }
        w.zero_row_pair(r0, r1, vx, vy);
        if kk > 0 {
            let k = r0 - 1;
            w.s[(r1, k)] = 0.0;
            if r2 <= h {
                w.s[(r2, k)] = 0.0;
            }
        }
        if r2 <= h {
            w.zero_t_entry(r2, r1, r2);
        }
        w.zero_t_entry(r1, r0, r1);
    }
}

fn pencil2_roots(s: &Mat, t: &Mat) -> (Complex64, Complex64) {
    let (s11, s12, s21, s22) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    let (t11, t12, t22) = (t[(0, 0)], t[(0, 1)], t[(1, 1)]);
    let qa = t11 * t22;
    let qb = -(s11 * t22 + s22 * t11 - t12 * s21);
    let qc = s11 * s22 - s12 * s21;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let r1 = (-qb - qb.signum() * sq) / (2.0 * qa);
        let r2 = if r1 != 0.0 { qc / (qa * r1) } else { (-qb + qb.signum() * sq) / (2.0 * qa) };
        (Complex64::new(r1, 0.0), Complex64::new(r2, 0.0))
    } else {
        let re = -qb / (2.0 * qa);
        let im = (-disc).sqrt() / (2.0 * qa.abs());
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

/// Splits 2x2 blocks with real eigenvalues; returns block sizes from `w0`.
fn standardize(w: &mut Work, w0: usize) -> Vec<usize> {
    let n = w.n();
    let mut blocks = Vec::new();
    let mut k = w0;
    while k < n {
        if k + 1 < n && w.s[(k + 1, k)] != 0.0 {
            let sb = sub(&w.s, k, k, 2, 2);
            let tb = sub(&w.t, k, k, 2, 2);
            let (r1, _) = pencil2_roots(&sb, &tb);
            if r1.im == 0.0 {
                let lam = r1.re;
                let mb = &sb - &tb * lam;
                let (_, v) = right_svd(&mb);
                let (z0, z1) = (v[(0, 1)], v[(1, 1)]);
                w.rot_cols(k, k + 1, z0, -z1);
                let (a, b) = (w.t[(k, k)], w.t[(k + 1, k)]);
                w.zero_row_pair(k, k + 1, a, b);
                w.t[(k + 1, k)] = 0.0;
                w.s[(k + 1, k)] = 0.0;
                blocks.push(1);
                blocks.push(1);
            } else {
                let (a, b) = (w.t[(k, k)], w.t[(k + 1, k)]);
                w.zero_row_pair(k, k + 1, a, b);
                w.t[(k + 1, k)] = 0.0;
                blocks.push(2);
            }
            k += 2;
        } else {
            blocks.push(1);
            k += 1;
        }
    }
    blocks
}

fn normalize_signs(w: &mut Work, blocks: &[usize]) {
    let n = w.n();
    let mut k = 0;
    for &bs in blocks {
        for i in k..k + bs {
            if w.t[(i, i)] < 0.0 {
                for j in 0..n {
                    w.s[(i, j)] = -w.s[(i, j)];
                    w.t[(i, j)] = -w.t[(i, j)];
                    w.q[(j, i)] = -w.q[(j, i)];
                }
            }
        }
        k += bs;
    }
}

/// One representative `(alpha, beta)` per block (positive imaginary part for
/// complex pairs).
fn block_eigenvalues(w: &Work, blocks: &[usize]) -> Vec<(Complex64, f64)> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut k = 0;
    for &bs in blocks {
        if bs == 1 {
            out.push((Complex64::new(w.s[(k, k)], 0.0), w.t[(k, k)]));
        } else {
            let (r1, r2) = pencil2_roots(&sub(&w.s, k, k, 2, 2), &sub(&w.t, k, k, 2, 2));
            let r = if r1.im >= 0.0 { r1 } else { r2 };
            out.push((r, 1.0));
        }
        k += bs;
    }
    out
}

/// Moves the flagged blocks to the front, preserving relative order.
/// Returns the number of selected blocks.
fn reorder(w: &mut Work, blocks: &mut [usize], flags: Vec<bool>) -> Result<usize> {
    let mut flags = flags;
    let mut target = 0; // index in the block list
    for idx in 0..blocks.len() {
        if !flags[idx] {
            continue;
        }
        let mut cur = idx;
        while cur > target {
            let start: usize = blocks[..cur - 1].iter().sum();
            swap_adjacent(w, start, blocks[cur - 1], blocks[cur])?;
            blocks.swap(cur - 1, cur);
            flags.swap(cur - 1, cur);
            cur -= 1;
        }
        target += 1;
    }
    Ok(target)
}

/// Swaps the diagonal block of size `n1` at `j` with the following block of
/// size `n2`.
fn swap_adjacent(w: &mut Work, j: usize, n1: usize, n2: usize) -> Result<()> {
    let m = n1 + n2;
    let sb = sub(&w.s, j, j, m, m);
    let tb = sub(&w.t, j, j, m, m);
    let a11 = sub(&sb, 0, 0, n1, n1);
    let a12 = sub(&sb, 0, n1, n1, n2);
    let a22 = sub(&sb, n1, n1, n2, n2);
    let b11 = sub(&tb, 0, 0, n1, n1);
    let b12 = sub(&tb, 0, n1, n1, n2);
    let b22 = sub(&tb, n1, n1, n2, n2);
    // A11 R - L A22 = -A12, B11 R - L B22 = -B12
    let k = n1 * n2;
    let mut sys = Mat::zeros(2 * k, 2 * k);
    let i1 = eye(n1);
    let i2 = eye(n2);
    sys.view_mut((0, 0), (k, k)).copy_from(&i2.kronecker(&a11));
    sys.view_mut((0, k), (k, k)).copy_from(&(-a22.transpose().kronecker(&i1)));
    sys.view_mut((k, 0), (k, k)).copy_from(&i2.kronecker(&b11));
    sys.view_mut((k, k), (k, k)).copy_from(&(-b22.transpose().kronecker(&i1)));
    let mut rhs = Mat::zeros(2 * k, 1);
    for c in 0..n2 {
        for r in 0..n1 {
            rhs[(c * n1 + r, 0)] = -a12[(r, c)];
            rhs[(k + c * n1 + r, 0)] = -b12[(r, c)];
        }
    }
    let sol = solve(&sys, &rhs).ok_or(Error::SpectraNotDisjoint)?;
    let mut rr = Mat::zeros(n1, n2);
    let mut ll = Mat::zeros(n1, n2);
    for c in 0..n2 {
        for r in 0..n1 {
            rr[(r, c)] = sol[(c * n1 + r, 0)];
            ll[(r, c)] = sol[(k + c * n1 + r, 0)];
        }
    }
    let zr = vcat(&rr, &i2).qr().q();
    let zr = complete_q(&zr, m);
    let ql = vcat(&ll, &i2).qr().q();
    let ql = complete_q(&ql, m);
    let snew = ql.transpose() * &sb * &zr;
    let tnew = ql.transpose() * &tb * &zr;
    let resid = sub(&snew, n2, 0, n1, n2).norm() + sub(&tnew, n2, 0, n1, n2).norm();
    let scale = sb.norm() + tb.norm();
    if resid > 1e-10 * scale.max(1.0) {
        return Err(Error::SpectraNotDisjoint);
    }
    w.apply_left_block(j, &ql);
    w.apply_right_block(j, &zr);
    for r in 0..n1 {
        for c in 0..n2 {
            w.s[(j + n2 + r, j + c)] = 0.0;
            w.t[(j + n2 + r, j + c)] = 0.0;
        }
    }
    // re-triangularize T inside the new diagonal blocks
    for (off, bs) in [(0, n2), (n2, n1)] {
        if bs == 2 {
            let p = j + off;
            let (a, b) = (w.t[(p, p)], w.t[(p + 1, p)]);
            w.zero_row_pair(p, p + 1, a, b);
            w.t[(p + 1, p)] = 0.0;
        }
    }
    Ok(())
}

/// Completes the thin `Q` of a QR factorization to a square orthogonal
/// matrix.
fn complete_q(q: &Mat, m: usize) -> Mat {
    if q.ncols() == m {
        return q.clone();
    }
    let (_, u) = left_svd(q);
    let mut out = Mat::zeros(m, m);
    out.view_mut((0, 0), q.shape()).copy_from(q);
    let k = q.ncols();
    out.view_mut((0, k), (m, m - k)).copy_from(&sub(&u, 0, k, m, m - k));
    out
}

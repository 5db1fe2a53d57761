//! Orthogonal staircase reduction of arbitrary pencils `M − λN` and the
//! Kronecker / Weierstrass structure read off the stair sizes.

use crate::error::{Error, Result};
use crate::linalg::*;
use crate::system::{pencil_is_regular, probe_points, Config};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KroneckerStructure {
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
    pub finite_eigenvalues: Vec<Complex64>,
    pub infinite_divisor_degrees: Vec<usize>,
    pub nr: usize,
    pub nl: usize,
    pub nreg: usize,
}

impl KroneckerStructure {
    pub fn normal_rank(&self) -> usize {
        self.nr + self.nreg + self.nl
    }

    pub fn is_regular(&self) -> bool {
        self.right_indices.is_empty() && self.left_indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassStructure {
    pub finite_eigenvalues: Vec<Complex64>,
    pub infinite_divisor_degrees: Vec<usize>,
    pub nf: usize,
    pub ninf: usize,
}

/// Row/column extents of the diagonal blocks of a Kronecker-like form, in the
/// order right-singular, infinite, finite, left-singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KlfBlocks {
    pub right: (usize, usize),
    pub infinite: (usize, usize),
    pub finite: (usize, usize),
    pub left: (usize, usize),
}

impl KlfBlocks {
    pub fn row_offsets(&self) -> [usize; 4] {
        let r0 = self.right.0;
        let r1 = r0 + self.infinite.0;
        let r2 = r1 + self.finite.0;
        [0, r0, r1, r2]
    }

    pub fn col_offsets(&self) -> [usize; 4] {
        let c0 = self.right.1;
        let c1 = c0 + self.infinite.1;
        let c2 = c1 + self.finite.1;
        [0, c0, c1, c2]
    }
}

/// `U (M − λN) V = Mk − λNk` in block upper triangular form.
#[derive(Debug, Clone)]
pub struct Klf {
    pub mk: Mat,
    pub nk: Mat,
    pub u: Mat,
    pub v: Mat,
    pub structure: KroneckerStructure,
    pub blocks: KlfBlocks,
}

struct Work {
    m: Mat,
    n: Mat,
    u: Mat,
    v: Mat,
    tol: f64,
}

#[derive(Clone, Copy)]
enum Coef {
    M,
    N,
}

impl Work {
    fn coef(&self, c: Coef) -> &Mat {
        match c {
            Coef::M => &self.m,
            Coef::N => &self.n,
        }
    }

    /// Rows `r0..r0+k` ← `qᵀ ·` rows.
    fn left(&mut self, r0: usize, q: &Mat) {
        let k = q.nrows();
        if k == 0 {
            return;
        }
        let qt = q.transpose();
        for x in [&mut self.m, &mut self.n, &mut self.u] {
            let blk = &qt * x.rows(r0, k);
            x.rows_mut(r0, k).copy_from(&blk);
        }
    }

    /// Columns `c0..c0+k` ← columns `· z`.
    fn right(&mut self, c0: usize, z: &Mat) {
        let k = z.nrows();
        if k == 0 {
            return;
        }
        for x in [&mut self.m, &mut self.n, &mut self.v] {
            let blk = x.columns(c0, k) * z;
            x.columns_mut(c0, k).copy_from(&blk);
        }
    }

    fn rank_count(&self, s: &[f64]) -> usize {
        s.iter().filter(|&&x| x > self.tol).count()
    }

    /// Column staircase on the sub-pencil `rows r0..r1`, `cols c0..c1`, with
    /// `e` the compressed coefficient and `a` the other one. Returns the stair
    /// sizes `(ν_i, ρ_i)`; the leading `Σρ x Σν` block collects the right
    /// singular structure together with the eigenvalues at which `e` loses
    /// rank.
    fn col_staircase(&mut self, r0: usize, r1: usize, c0: usize, c1: usize, a: Coef, e: Coef) -> Vec<(usize, usize)> {
        let (mut ro, mut co) = (r0, c0);
        let mut steps = Vec::new();
        while co < c1 {
            let ecur = self.coef(e).view((ro, co), (r1 - ro, c1 - co)).clone_owned();
            let (s, vfull) = right_svd(&ecur);
            let rk = self.rank_count(&s);
            let nu = (c1 - co) - rk;
            if nu == 0 {
                break;
            }
            // null directions first
            let w = c1 - co;
            let mut z = zeros(w, w);
            z.columns_mut(0, nu).copy_from(&vfull.columns(rk, nu));
            z.columns_mut(nu, rk).copy_from(&vfull.columns(0, rk));
            self.right(co, &z);

            let ablk = self.coef(a).view((ro, co), (r1 - ro, nu)).clone_owned();
            let (sa, ufull) = left_svd(&ablk);
            let rho = self.rank_count(&sa);
            self.left(ro, &ufull);
            // exact zeros below the stair
            for x in [&mut self.m, &mut self.n] {
                x.view_mut((ro + rho, co), (r1 - ro - rho, nu)).fill(0.0);
            }
            self.zero_block(e, ro, co, r1 - ro, nu);
            steps.push((nu, rho));
            ro += rho;
            co += nu;
        }
        steps
    }

    fn zero_block(&mut self, e: Coef, r: usize, c: usize, nr: usize, nc: usize) {
        let x = match e {
            Coef::M => &mut self.m,
            Coef::N => &mut self.n,
        };
        x.view_mut((r, c), (nr, nc)).fill(0.0);
    }

    /// Row staircase working upward from the bottom-right corner of the
    /// sub-pencil; the trailing `Σν x Σρ` block collects the left singular
    /// structure. Returns `(ν_i, ρ_i)` with `ν` counted in rows.
    fn row_staircase(&mut self, r0: usize, r1: usize, c0: usize, c1: usize, a: Coef, e: Coef) -> Vec<(usize, usize)> {
        let (mut re, mut ce) = (r1, c1);
        let mut steps = Vec::new();
        while re > r0 {
            let h = re - r0;
            let ecur = self.coef(e).view((r0, c0), (h, ce - c0)).clone_owned();
            let (s, ufull) = left_svd(&ecur);
            let rk = self.rank_count(&s);
            let nu = h - rk;
            if nu == 0 {
                break;
            }
            // left null directions last
            let mut q = zeros(h, h);
            q.columns_mut(0, rk).copy_from(&ufull.columns(0, rk));
            q.columns_mut(rk, nu).copy_from(&ufull.columns(rk, nu));
            self.left(r0, &q);

            let w = ce - c0;
            let ablk = self.coef(a).view((re - nu, c0), (nu, w)).clone_owned();
            let (sa, vfull) = right_svd(&ablk);
            let rho = self.rank_count(&sa);
            // range directions last
            let mut z = zeros(w, w);
            z.columns_mut(0, w - rho).copy_from(&vfull.columns(rho, w - rho));
            z.columns_mut(w - rho, rho).copy_from(&vfull.columns(0, rho));
            self.right(c0, &z);
            for x in [&mut self.m, &mut self.n] {
                x.view_mut((re - nu, c0), (nu, w - rho)).fill(0.0);
            }
            self.zero_block(e, re - nu, c0, nu, w);
            steps.push((nu, rho));
            re -= nu;
            ce -= rho;
        }
        steps
    }
}

/// Minimal indices from stair sizes: `ν_i − ρ_i` blocks of index `i − 1`.
fn indices_from_steps(steps: &[(usize, usize)]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &(nu, rho)) in steps.iter().enumerate() {
        out.extend(std::iter::repeat(i).take(nu.saturating_sub(rho)));
    }
    out
}

/// Sizes of the Jordan blocks at the compressed-coefficient eigenvalue:
/// `ρ_i − ν_{i+1}` blocks of size `i`.
fn degrees_from_steps(steps: &[(usize, usize)]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..steps.len() {
        let next = steps.get(i + 1).map_or(0, |s| s.0);
        out.extend(std::iter::repeat(i + 1).take(steps[i].1.saturating_sub(next)));
    }
    out
}

/// Imaginary parts below `1e-10 |λ|` are cleared.
pub(crate) fn clean_eigenvalue(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-10 * z.norm() {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn klf_tol(m: &Mat, n: &Mat, tol: Option<f64>) -> f64 {
    let (r, c) = m.shape();
    // staircase rounding grows with the number of steps
    tol.unwrap_or_else(|| 10.0 * pencil_tol(r, c, normf(m).max(normf(n))))
}

/// Kronecker-like form of `M − λN` computed with orthogonal transformations
/// only. `tol` is an absolute rank threshold; `None` selects a default scaled
/// by the pencil norm.
pub fn klf(m: &Mat, n: &Mat, tol: Option<f64>) -> Result<Klf> {
    if m.shape() != n.shape() {
        return Err(Error::DimensionMismatch(format!("pencil coefficients {:?} and {:?}", m.shape(), n.shape())));
    }
    if !is_finite(m) || !is_finite(n) {
        return Err(Error::NonFinite("pencil"));
    }
    let (rows, cols) = m.shape();
    let mut w = Work { m: m.clone(), n: n.clone(), u: eye(rows), v: eye(cols), tol: klf_tol(m, n, tol) };

    // right structure + infinite eigenvalues to the leading block
    let s1 = w.col_staircase(0, rows, 0, cols, Coef::M, Coef::N);
    let r1: usize = s1.iter().map(|s| s.1).sum();
    let c1: usize = s1.iter().map(|s| s.0).sum();

    // split that block: right structure first, infinite part after
    let s2 = w.col_staircase(0, r1, 0, c1, Coef::N, Coef::M);
    let rr: usize = s2.iter().map(|s| s.1).sum();
    let rc: usize = s2.iter().map(|s| s.0).sum();
    let right_indices = indices_from_steps(&s2);

    // infinite divisors from a staircase of the nilpotent part
    let s_inf = w.col_staircase(rr, r1, rc, c1, Coef::M, Coef::N);
    let infinite_divisor_degrees = degrees_from_steps(&s_inf);

    // left structure to the trailing block
    let s3 = w.row_staircase(r1, rows, c1, cols, Coef::M, Coef::N);
    let lr: usize = s3.iter().map(|s| s.0).sum();
    let lc: usize = s3.iter().map(|s| s.1).sum();
    let left_indices = indices_from_steps(&s3);

    let fr = rows - r1 - lr;
    let fc = cols - c1 - lc;
    let mut finite_eigenvalues = Vec::new();
    if fr == fc && fr > 0 {
        let mf = w.m.view((r1, c1), (fr, fc)).clone_owned();
        let nf = w.n.view((r1, c1), (fr, fc)).clone_owned();
        if let Ok(g) = gschur(&mf, &nf) {
            w.left(r1, &g.q);
            w.right(c1, &g.z);
            finite_eigenvalues = g.eigen_values().into_iter().flatten().map(clean_eigenvalue).collect();
        }
    }

    let nr: usize = right_indices.iter().sum();
    let nl: usize = left_indices.iter().sum();
    let ninf: usize = infinite_divisor_degrees.iter().sum();
    let structure = KroneckerStructure {
        nreg: finite_eigenvalues.len() + ninf,
        right_indices,
        left_indices,
        finite_eigenvalues,
        infinite_divisor_degrees,
        nr,
        nl,
    };
    let blocks = KlfBlocks { right: (rr, rc), infinite: (r1 - rr, c1 - rc), finite: (fr, fc), left: (lr, lc) };
    Ok(Klf { mk: w.m, nk: w.n, u: w.u, v: w.v, structure, blocks })
}

/// Finite eigenvalues and infinite elementary divisor degrees of a regular
/// pencil `A − λE`.
pub fn weierstrass_structure(a: &Mat, e: &Mat, tol: Option<f64>) -> Result<WeierstrassStructure> {
    if a.nrows() != a.ncols() || a.shape() != e.shape() {
        return Err(Error::DimensionMismatch(format!("pencil {:?} / {:?} not square", a.shape(), e.shape())));
    }
    if !pencil_is_regular(a, e) {
        return Err(Error::SingularPencil);
    }
    let k = klf(a, e, tol)?;
    if !k.structure.is_regular() {
        return Err(Error::SingularPencil);
    }
    let s = k.structure;
    Ok(WeierstrassStructure {
        nf: s.finite_eigenvalues.len(),
        ninf: s.infinite_divisor_degrees.iter().sum(),
        finite_eigenvalues: s.finite_eigenvalues,
        infinite_divisor_degrees: s.infinite_divisor_degrees,
    })
}

/// Normal rank of `M − λN`: the largest rank over three random probes.
pub fn pencil_normal_rank(m: &Mat, n: &Mat, cfg: &Config) -> usize {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return 0;
    }
    let (mn, nn) = (normf(m), normf(n));
    let radius = 1.0 + if nn > 0.0 { mn / nn } else { 1.0 };
    let mut rng = cfg.rng();
    let (mc, nc) = (to_complex(m), to_complex(n));
    probe_points(radius, 3, &mut rng)
        .into_iter()
        .map(|lam| {
            let p = &mc - &nc * lam;
            let tol = cfg.tol_for(r, c, mn + lam.norm() * nn);
            rank_tol_c(&p, Some(tol))
        })
        .max()
        .unwrap_or(0)
}

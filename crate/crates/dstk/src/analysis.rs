//! Structural analysis: normal rank, poles and zeros, McMillan degree,
//! stability predicates, minimality tests, minimal realization and the H2
//! norm.

use crate::error::{Error, Result};
use crate::linalg::*;
use crate::linalg::zeros as zmat;
use crate::pencil::{klf, pencil_normal_rank, weierstrass_structure};
use crate::system::{Config, DescriptorSystem, TimeDomain};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct PoleZeroInfo {
    pub finite: Vec<Complex64>,
    pub infinite_count: usize,
    pub total: usize,
    /// `(nr, nl)` of the system pencil; zero for pole data.
    pub kronecker_ranks: (usize, usize),
    /// Order of the reduced realization the data was computed on.
    pub reduced_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalityReport {
    pub finite_controllable: bool,
    pub infinite_controllable: bool,
    pub finite_observable: bool,
    pub infinite_observable: bool,
    pub no_nondynamic_modes: bool,
    pub order: usize,
}

impl MinimalityReport {
    pub fn is_irreducible(&self) -> bool {
        self.finite_controllable && self.infinite_controllable && self.finite_observable && self.infinite_observable
    }

    pub fn is_minimal(&self) -> bool {
        self.is_irreducible() && self.no_nondynamic_modes
    }
}

/// Stability domains symmetric about the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StabilityRegion {
    ContinuousLeftHalfPlane,
    DiscreteUnitDisk,
    /// `Re λ < α`.
    ShiftedHalfPlane(f64),
    /// `|λ| < ρ`.
    ScaledDisk(f64),
}

impl StabilityRegion {
    pub fn for_domain(domain: TimeDomain) -> Self {
        match domain {
            TimeDomain::Continuous => StabilityRegion::ContinuousLeftHalfPlane,
            TimeDomain::Discrete => StabilityRegion::DiscreteUnitDisk,
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            StabilityRegion::ShiftedHalfPlane(a) if !a.is_finite() => Err(Error::RegionInvalid(format!("shift {a}"))),
            StabilityRegion::ScaledDisk(r) if !(r.is_finite() && r > 0.0) => {
                Err(Error::RegionInvalid(format!("radius {r} must be positive")))
            }
            _ => Ok(self),
        }
    }

    /// Open-region membership; the point at infinity is never inside.
    pub fn contains(self, z: Complex64) -> bool {
        match self {
            StabilityRegion::ContinuousLeftHalfPlane => z.re < 0.0,
            StabilityRegion::DiscreteUnitDisk => z.norm() < 1.0,
            StabilityRegion::ShiftedHalfPlane(a) => z.re < a,
            StabilityRegion::ScaledDisk(r) => z.norm() < r,
        }
    }

    /// Distance-like margin: positive inside, negative outside.
    pub fn margin(self, z: Complex64) -> f64 {
        match self {
            StabilityRegion::ContinuousLeftHalfPlane => -z.re,
            StabilityRegion::DiscreteUnitDisk => 1.0 - z.norm(),
            StabilityRegion::ShiftedHalfPlane(a) => a - z.re,
            StabilityRegion::ScaledDisk(r) => r - z.norm(),
        }
    }
}

/// Normal rank of the TFM from the system pencil at random probes.
pub fn normal_rank(sys: &DescriptorSystem, cfg: &Config) -> usize {
    let (m, n) = sys.system_pencil();
    pencil_normal_rank(&m, &n, cfg).saturating_sub(sys.order())
}

pub fn poles(sys: &DescriptorSystem, cfg: &Config) -> PoleZeroInfo {
    let r = minreal(sys, cfg);
    let ws = match weierstrass_structure(&r.a, &r.e, cfg.tol) {
        Ok(w) => w,
        Err(_) => return empty_info(r.order()),
    };
    let infinite_count = ws.infinite_divisor_degrees.iter().map(|d| d - 1).sum();
    PoleZeroInfo {
        total: ws.finite_eigenvalues.len() + infinite_count,
        finite: ws.finite_eigenvalues,
        infinite_count,
        kronecker_ranks: (0, 0),
        reduced_order: r.order(),
    }
}

fn empty_info(order: usize) -> PoleZeroInfo {
    PoleZeroInfo { finite: Vec::new(), infinite_count: 0, total: 0, kronecker_ranks: (0, 0), reduced_order: order }
}

/// Transmission zeros of the minimal realization, with the infinite zero
/// count and the singular structure of the system pencil.
pub fn zeros(sys: &DescriptorSystem, cfg: &Config) -> PoleZeroInfo {
    let r = minreal(sys, cfg);
    let (m, n) = r.system_pencil();
    let k = match klf(&m, &n, cfg.tol) {
        Ok(k) => k.structure,
        Err(_) => return empty_info(r.order()),
    };
    let infinite_count = k.infinite_divisor_degrees.iter().map(|d| d - 1).sum();
    PoleZeroInfo {
        total: k.finite_eigenvalues.len() + infinite_count,
        finite: k.finite_eigenvalues,
        infinite_count,
        kronecker_ranks: (k.nr, k.nl),
        reduced_order: r.order(),
    }
}

pub fn mcmillan_degree(sys: &DescriptorSystem, cfg: &Config) -> usize {
    poles(sys, cfg).total
}

/// All poles, finite and infinite, inside the stability domain.
pub fn is_stable(sys: &DescriptorSystem, cfg: &Config) -> bool {
    let p = poles(sys, cfg);
    let region = StabilityRegion::for_domain(sys.domain);
    p.infinite_count == 0 && p.finite.iter().all(|&z| region.contains(z))
}

/// All zeros finite and inside the stability domain.
pub fn is_minimum_phase(sys: &DescriptorSystem, cfg: &Config) -> bool {
    let z = zeros(sys, cfg);
    let region = StabilityRegion::for_domain(sys.domain);
    z.infinite_count == 0 && z.finite.iter().all(|&x| region.contains(x))
}

pub fn minimality_report(sys: &DescriptorSystem, cfg: &Config) -> MinimalityReport {
    let n = sys.order();
    let (p, m) = sys.d.shape();
    let scale = normf(&sys.a).max(normf(&sys.e)).max(normf(&sys.b)).max(normf(&sys.c)).max(1e-300);
    let tol = Some(cfg.tol_for(n + p, n + m, scale));

    let fin_ok = |mm: Mat, nn: Mat| match klf(&mm, &nn, tol) {
        Ok(k) => k.structure.finite_eigenvalues.is_empty() && k.structure.normal_rank() == n,
        Err(_) => false,
    };
    let finite_controllable = fin_ok(hcat(&sys.a, &sys.b), hcat(&sys.e, &zmat(n, m)));
    let finite_observable = fin_ok(vcat(&sys.a, &sys.c), vcat(&sys.e, &zmat(p, n)));
    let infinite_controllable = rank_tol(&hcat(&sys.e, &sys.b), tol) == n;
    let infinite_observable = rank_tol(&vcat(&sys.e, &sys.c), tol) == n;
    let z = null_basis(&sys.e, tol);
    let re = rank_tol(&sys.e, tol);
    let no_nondynamic_modes = rank_tol(&hcat(&sys.e, &(&sys.a * &z)), tol) == re;
    MinimalityReport {
        finite_controllable,
        infinite_controllable,
        finite_observable,
        infinite_observable,
        no_nondynamic_modes,
        order: n,
    }
}

/// Block-diagonalizing equivalence for a regular pencil: `U (A − λE) V =
/// diag(A1 − λE1, A2 − λE2)` where the first block carries the eigenvalues
/// accepted by `select`. `U`, `V` are returned together with the blocks.
pub(crate) struct Split {
    pub u: Mat,
    pub v: Mat,
    pub a1: Mat,
    pub e1: Mat,
    pub a2: Mat,
    pub e2: Mat,
}

pub(crate) fn split_spectrum<F>(a: &Mat, e: &Mat, select: F) -> Result<Split>
where
    F: Fn(Complex64, f64) -> bool,
{
    let n = a.nrows();
    let g = gschur_ordered(a, e, select)?;
    let k = g.selected_count;
    let (s, t) = (&g.s, &g.t);
    let sol = gsylv_separation(
        &sub(s, 0, 0, k, k),
        &sub(s, 0, k, k, n - k),
        &sub(s, k, k, n - k, n - k),
        &sub(t, 0, 0, k, k),
        &sub(t, 0, k, k, n - k),
        &sub(t, k, k, n - k, n - k),
    )?;
    let mut ul = eye(n);
    ul.view_mut((0, k), (k, n - k)).copy_from(&(-&sol.l));
    let mut vr = eye(n);
    vr.view_mut((0, k), (k, n - k)).copy_from(&sol.r);
    Ok(Split {
        u: ul * g.q.transpose(),
        v: &g.z * vr,
        a1: sub(s, 0, 0, k, k),
        e1: sub(t, 0, 0, k, k),
        a2: sub(s, k, k, n - k, n - k),
        e2: sub(t, k, k, n - k, n - k),
    })
}

/// Relative rank floor (in units of machine epsilon) for the reductions in
/// [`minreal`], which run after a QZ reordering and inherit its error.
const STAIR_FLOOR: f64 = 1000.0;

/// Orthogonal controllability staircase of a standard pair `(A, B)`; returns
/// the controllable part `(A11, B1, C1)`.
fn ctrb_reduce(a: &Mat, b: &Mat, c: &Mat, tol: f64) -> (Mat, Mat, Mat) {
    let n = a.nrows();
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    let mut off = 0;
    let mut prev: Option<usize> = None;
    // error in the next coupling block grows like ‖A‖ / σ_min of the last kept block
    let anorm = norm2(&a).max(f64::MIN_POSITIVE);
    let mut amp = 1.0f64;
    while off < n {
        let mut blk = match prev {
            None => b.rows(0, n).clone_owned(),
            Some(p) => a.view((off, p), (n - off, off - p)).clone_owned(),
        };
        // entries at noise level would tilt the compressed basis
        blk.apply(|x| {
            if x.abs() <= tol * amp {
                *x = 0.0
            }
        });
        let (s, u) = left_svd(&blk);
        let step_tol = tol * amp;
        let rho = s.iter().filter(|&&x| x > step_tol).count();
        // similarity on states off..n
        let k = n - off;
        let ut = u.transpose();
        let rows = &ut * a.rows(off, k);
        a.rows_mut(off, k).copy_from(&rows);
        let cols = a.columns(off, k) * &u;
        a.columns_mut(off, k).copy_from(&cols);
        let br = &ut * b.rows(off, k);
        b.rows_mut(off, k).copy_from(&br);
        let cc = c.columns(off, k) * &u;
        c.columns_mut(off, k).copy_from(&cc);
        if rho == 0 {
            break;
        }
        amp = (anorm / s[rho - 1]).max(1.0);
        prev = Some(off);
        off += rho;
    }
    (sub(&a, 0, 0, off, off), b.rows(0, off).clone_owned(), c.columns(0, off).clone_owned())
}

/// Controllable and observable part of a standard triple.
fn kalman_minimal(a: &Mat, b: &Mat, c: &Mat, tol: f64) -> (Mat, Mat, Mat) {
    let (a1, b1, c1) = ctrb_reduce(a, b, c, tol);
    let (a2, c2, b2) = ctrb_reduce(&a1.transpose(), &c1.transpose(), &b1.transpose(), tol);
    (a2.transpose(), b2.transpose(), c2.transpose())
}

/// Removes non-dynamic modes: the part of `A` acting on `N(E)` that is
/// invertible is eliminated by a Schur complement and absorbed into `D`.
fn remove_nondynamic(sys: &DescriptorSystem, tol: f64) -> DescriptorSystem {
    let n = sys.order();
    if n == 0 {
        return sys.clone();
    }
    let (se, ve) = right_svd(&sys.e);
    let re = se.iter().filter(|&&x| x > tol).count();
    if re == n {
        return sys.clone();
    }
    let (_, ue) = left_svd(&sys.e);
    let (mut a, mut e) = (ue.transpose() * &sys.a * &ve, ue.transpose() * &sys.e * &ve);
    let (mut b, mut c) = (ue.transpose() * &sys.b, &sys.c * &ve);
    // compress the A22 block of the zero part of E
    let k = n - re;
    let a22 = sub(&a, re, re, k, k);
    let (s2, v2) = right_svd(&a22);
    let (_, u2) = left_svd(&a22);
    // A22 inherits the rotation error of the SVD of E
    let amp = if re == 0 { 1.0 } else { 1.0 + norm2(&sys.a) / se[re - 1] };
    let tol2 = tol.max(STAIR_FLOOR * f64::EPSILON * norm2(&sys.a)) * amp;
    let r2 = s2.iter().filter(|&&x| x > tol2).count();
    if r2 == 0 {
        return sys.clone();
    }
    let mut ul = eye(n);
    ul.view_mut((re, re), (k, k)).copy_from(&u2.transpose());
    let mut vr = eye(n);
    vr.view_mut((re, re), (k, k)).copy_from(&v2);
    a = &ul * a * &vr;
    e = &ul * e * &vr;
    b = &ul * b;
    c = c * &vr;

    let keep: Vec<usize> = (0..re).chain(re + r2..n).collect();
    let elim: Vec<usize> = (re..re + r2).collect();
    let pick = |m: &Mat, rows: &[usize], cols: &[usize]| Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
    let all_b: Vec<usize> = (0..b.ncols()).collect();
    let all_c: Vec<usize> = (0..c.nrows()).collect();
    let a22 = pick(&a, &elim, &elim);
    let Some(a22i) = inverse(&a22) else {
        return sys.clone();
    };
    let a12 = pick(&a, &keep, &elim);
    let a21 = pick(&a, &elim, &keep);
    let b2 = pick(&b, &elim, &all_b);
    let c2 = pick(&c, &all_c, &elim);
    let a11 = pick(&a, &keep, &keep) - &a12 * &a22i * &a21;
    let e11 = pick(&e, &keep, &keep);
    let b1 = pick(&b, &keep, &all_b) - &a12 * &a22i * &b2;
    let c1 = pick(&c, &all_c, &keep) - &c2 * &a22i * &a21;
    let d = &sys.d + &c2 * &a22i * &b2;
    DescriptorSystem::from_parts_unchecked(a11, e11, b1, c1, d, sys.domain)
}

/// Minimal realization: finite and infinite parts are separated, each is
/// reduced to a controllable and observable triple, and non-dynamic modes
/// are eliminated. The transfer function is preserved.
pub fn minreal(sys: &DescriptorSystem, cfg: &Config) -> DescriptorSystem {
    let n = sys.order();
    if n == 0 {
        return sys.clone();
    }
    let scale = normf(&sys.a).max(normf(&sys.e)).max(normf(&sys.b)).max(normf(&sys.c));
    let (p, m) = sys.d.shape();
    let tol = cfg.tol_for(n + p, n + m, scale.max(1e-300));

    let Ok(sp) = split_spectrum(&sys.a, &sys.e, |_, beta| beta == 0.0) else {
        return remove_nondynamic(sys, tol);
    };
    let b = &sp.u * &sys.b;
    let c = &sys.c * &sp.v;
    let ni = sp.a1.nrows();
    let (bi, bf) = (b.rows(0, ni).clone_owned(), b.rows(ni, n - ni).clone_owned());
    let (ci, cf) = (c.columns(0, ni).clone_owned(), c.columns(ni, n - ni).clone_owned());

    // infinite part: A1 invertible, E1 nilpotent -> (I − λN)
    let (a1i, e2i) = match (inverse(&sp.a1), inverse(&sp.e2)) {
        (Some(x), Some(y)) => (x, y),
        _ => return remove_nondynamic(sys, tol),
    };
    // rank decisions cannot be sharper than the backward error of the split
    let blocks_a = blkdiag(&sp.a1, &sp.a2);
    let blocks_e = blkdiag(&sp.e1, &sp.e2);
    let resid = normf(&(&sp.u * &sys.a * &sp.v - blocks_a)) + normf(&(&sp.u * &sys.e * &sp.v - blocks_e));
    let stair_tol = |a: &Mat, b: &Mat, c: &Mat, inv_norm: f64| {
        let k = a.nrows();
        let sc = normf(a).max(normf(b)).max(normf(c)).max(1e-300);
        cfg.tol.unwrap_or_else(|| {
            pencil_tol(k + c.nrows(), k + b.ncols(), sc)
                .max(10.0 * resid * inv_norm * sc / scale.max(1e-300))
                .max(STAIR_FLOOR * f64::EPSILON * sc)
        })
    };
    let nil = &a1i * &sp.e1;
    let bi = &a1i * &bi;
    let (nm, bm, cm) = kalman_minimal(&nil, &bi, &ci, stair_tol(&nil, &bi, &ci, norm2(&a1i)));
    let (af, bf) = (&e2i * &sp.a2, &e2i * &bf);
    let (fa, fb, fc) = kalman_minimal(&af, &bf, &cf, stair_tol(&af, &bf, &cf, norm2(&e2i)));

    let ki = nm.nrows();
    let kf = fa.nrows();
    let red = DescriptorSystem::from_parts_unchecked(
        blkdiag(&eye(ki), &fa),
        blkdiag(&nm, &eye(kf)),
        vcat(&bm, &fb),
        hcat(&cm, &fc),
        sys.d.clone(),
        sys.domain,
    );
    remove_nondynamic(&red, tol)
}

/// H2 norm from the controllability Gramian of the minimal realization.
pub fn h2_norm(sys: &DescriptorSystem, cfg: &Config) -> Result<f64> {
    let r = minreal(sys, cfg);
    if !is_stable(&r, cfg) {
        return Err(Error::UnstableSystem);
    }
    let dn = normf(&r.d);
    let scale = normf(&r.a).max(normf(&r.b)).max(normf(&r.c)).max(1.0);
    if sys.domain == TimeDomain::Continuous && dn > cfg.tol_for(r.outputs(), r.inputs(), scale) {
        return Err(Error::NonstrictlyProperContinuous);
    }
    if r.order() == 0 {
        return Ok(if sys.domain == TimeDomain::Discrete { dn } else { 0.0 });
    }
    let w = &r.b * r.b.transpose();
    let x = glyap(&r.a, &r.e, &w, r.domain).map_err(|_| Error::UnstableSystem)?;
    let mut v = (&r.c * x * r.c.transpose()).trace();
    if r.domain == TimeDomain::Discrete {
        v += dn * dn;
    }
    Ok(v.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::zeros as zmat;
    use crate::ops::{inverse as tfm_inverse, parallel, series, transpose_dual, InverseMode};
    use crate::system::{random_system, RandomSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config {
        Config::default()
    }

    fn lag(pole: f64, gain: f64) -> DescriptorSystem {
        DescriptorSystem::standard(
            Mat::from_element(1, 1, pole),
            eye(1),
            Mat::from_element(1, 1, -gain),
            zmat(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap()
    }

    /// Order-2 realization of `G(s) = s`.
    fn differentiator() -> DescriptorSystem {
        DescriptorSystem::new(
            eye(2),
            Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            Mat::from_row_slice(2, 1, &[0.0, 1.0]),
            Mat::from_row_slice(1, 2, &[1.0, 0.0]),
            zmat(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap()
    }

    fn tfm_close(g: &DescriptorSystem, h: &DescriptorSystem, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 1.0 + g.spectral_scale().max(h.spectral_scale());
        for lam in crate::system::probe_points(r, 7, &mut rng) {
            let (x, y) = (g.eval(lam).unwrap(), h.eval(lam).unwrap());
            assert!((&x - &y).norm() <= 1e-8 * (1.0 + x.norm()), "{x} vs {y}");
        }
    }

    #[test]
    fn normal_rank_examples() {
        let col = crate::ops::concat_col(&DescriptorSystem::gain(eye(1), TimeDomain::Continuous), &differentiator()).unwrap();
        assert_eq!(normal_rank(&col, &cfg()), 1);
        let z = DescriptorSystem::gain(zmat(2, 4), TimeDomain::Continuous);
        assert_eq!(normal_rank(&z, &cfg()), 0);
        let dg = crate::ops::diag_stack(&lag(-1.0, 1.0), &differentiator()).unwrap();
        assert_eq!(normal_rank(&dg, &cfg()), 2);
    }

    #[test]
    fn pole_examples() {
        let p = poles(&lag(-2.0, 1.0), &cfg());
        assert_eq!((p.finite.len(), p.infinite_count, p.total), (1, 0, 1));
        assert!((p.finite[0] + 2.0).norm() < 1e-12);

        let p = poles(&differentiator(), &cfg());
        assert_eq!((p.finite.len(), p.infinite_count, p.total), (0, 1, 1));

        let j = DescriptorSystem::standard(
            Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            Mat::from_row_slice(2, 1, &[0.0, 1.0]),
            Mat::from_row_slice(1, 2, &[1.0, 0.0]),
            zmat(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap();
        let p = poles(&j, &cfg());
        assert_eq!(p.total, 2);
        assert!(p.finite.iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn zero_examples() {
        // (s+1)/(s+2) = 1 + (-1)/(s+2)
        let mut g = lag(-2.0, -1.0);
        g.d[(0, 0)] = 1.0;
        let z = zeros(&g, &cfg());
        assert_eq!(z.finite.len(), 1);
        assert!((z.finite[0] + 1.0).norm() < 1e-10);

        let z = zeros(&differentiator(), &cfg());
        assert_eq!(z.finite.len(), 1);
        assert!(z.finite[0].norm() < 1e-10);
        assert_eq!((z.infinite_count, z.kronecker_ranks), (0, (0, 0)));

        let row = crate::ops::concat_row(&DescriptorSystem::gain(eye(1), TimeDomain::Continuous), &differentiator()).unwrap();
        let z = zeros(&row, &cfg());
        let p = poles(&row, &cfg());
        assert_eq!(z.total, 0);
        assert_eq!(p.total, 1);
        assert_eq!(z.kronecker_ranks, (1, 0));
    }

    #[test]
    fn degree_and_predicates() {
        assert_eq!(mcmillan_degree(&DescriptorSystem::gain(eye(2), TimeDomain::Continuous), &cfg()), 0);
        assert_eq!(mcmillan_degree(&differentiator(), &cfg()), 1);
        assert_eq!(mcmillan_degree(&series(&lag(-1.0, 1.0), &lag(-2.0, 1.0)).unwrap(), &cfg()), 2);
        assert!(is_stable(&lag(-1.0, 1.0), &cfg()));
        assert!(!is_stable(&differentiator(), &cfg()));
        // (s-1)/(s+2) = 1 - 3/(s+2)
        let mut g = lag(-2.0, -3.0);
        g.d[(0, 0)] = 1.0;
        assert!(is_stable(&g, &cfg()));
        assert!(!is_minimum_phase(&g, &cfg()));
    }

    #[test]
    fn minimality_examples() {
        assert!(minimality_report(&lag(-1.0, 1.0), &cfg()).is_minimal());
        let orphan = DescriptorSystem::standard(
            Mat::from_element(1, 1, -3.0),
            zmat(1, 1),
            Mat::from_element(1, 1, 1.0),
            zmat(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap();
        let g = crate::ops::diag_stack(&lag(-1.0, 1.0), &orphan).unwrap();
        let g = crate::ops::select(&g, &[0, 1], &[0]);
        let r = minimality_report(&g, &cfg());
        assert!(!r.finite_controllable);
        let nd = DescriptorSystem::new(eye(1), zmat(1, 1), eye(1), eye(1), zmat(1, 1), TimeDomain::Continuous).unwrap();
        let r = minimality_report(&nd, &cfg());
        assert!(!r.no_nondynamic_modes);
        assert!(r.is_irreducible());
    }

    #[test]
    fn minreal_examples() {
        let g = lag(-1.0, 1.0);
        assert_eq!(minreal(&g, &cfg()).order(), 1);
        let gg = parallel(&g, &g).unwrap();
        let r = minreal(&gg, &cfg());
        assert_eq!(r.order(), 1);
        tfm_close(&r, &gg, 1);
        let inv = tfm_inverse(&g, InverseMode::General).unwrap();
        let r = minreal(&inv, &cfg());
        assert_eq!(r.order(), 2);
        tfm_close(&r, &inv, 2);
        assert!(minimality_report(&r, &cfg()).is_minimal());
        let nd = DescriptorSystem::new(eye(1), zmat(1, 1), eye(1), eye(1), zmat(1, 1), TimeDomain::Continuous).unwrap();
        let r = minreal(&nd, &cfg());
        assert_eq!(r.order(), 0);
        assert!((r.d[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn minreal_random_nonminimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..30 {
            let dom = if trial % 2 == 0 { TimeDomain::Continuous } else { TimeDomain::Discrete };
            let spec = if trial % 3 == 0 { RandomSpec::IMPROPER } else { RandomSpec::PROPER };
            let n = rng.gen_range(1..5);
            let g = random_system(n, 2, 2, dom, spec, &mut rng);
            let h = random_system(rng.gen_range(1..4), 2, 2, dom, RandomSpec::PROPER, &mut rng);
            let big = parallel(&parallel(&g, &h).unwrap(), &g).unwrap();
            let r = minreal(&big, &cfg());
            tfm_close(&r, &big, trial);
            assert!(minimality_report(&r, &cfg()).is_minimal(), "trial {trial}");
            assert_eq!(minreal(&r, &cfg()).order(), r.order());
            assert_eq!(mcmillan_degree(&big, &cfg()), r.order() - infinite_simple(&r));
        }
    }

    fn infinite_simple(r: &DescriptorSystem) -> usize {
        weierstrass_structure(&r.a, &r.e, None).unwrap().infinite_divisor_degrees.len()
    }

    #[test]
    fn pole_zero_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..30 {
            let n = rng.gen_range(0..5);
            let m = rng.gen_range(1..4);
            let p = rng.gen_range(1..4);
            let spec = if trial % 3 == 0 { RandomSpec::IMPROPER } else { RandomSpec::PROPER };
            let g = random_system(n, m, p, TimeDomain::Continuous, spec, &mut rng);
            let pz = poles(&g, &cfg());
            let z = zeros(&g, &cfg());
            assert_eq!(pz.total, z.total + z.kronecker_ranks.0 + z.kronecker_ranks.1, "trial {trial}");
            assert_eq!(normal_rank(&g, &cfg()), normal_rank(&transpose_dual(&g), &cfg()));
        }
    }

    #[test]
    fn h2_examples() {
        assert!((h2_norm(&lag(-1.0, 1.0), &cfg()).unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
        assert_eq!(h2_norm(&DescriptorSystem::gain(zmat(1, 1), TimeDomain::Continuous), &cfg()).unwrap(), 0.0);
        let z = DescriptorSystem::standard(zmat(1, 1), eye(1), -eye(1), zmat(1, 1), TimeDomain::Discrete).unwrap();
        assert!((h2_norm(&z, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(h2_norm(&lag(1.0, 1.0), &cfg()).unwrap_err(), Error::UnstableSystem);
        let mut d = lag(-1.0, 1.0);
        d.d[(0, 0)] = 1.0;
        assert_eq!(h2_norm(&d, &cfg()).unwrap_err(), Error::NonstrictlyProperContinuous);
        assert_eq!(h2_norm(&differentiator(), &cfg()).unwrap_err(), Error::UnstableSystem);
    }
}

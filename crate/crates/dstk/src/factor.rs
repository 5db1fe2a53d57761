//! Additive spectral decomposition, coprime factorizations by Schur-based
//! pole placement, and inner-outer factorization of stable proper systems.

use crate::analysis::{minreal, normal_rank, split_spectrum, zeros as system_zeros, StabilityRegion};
use crate::error::{Error, Result};
use crate::linalg::*;
use crate::ops::transpose_dual;
use crate::system::{Config, DescriptorSystem, TimeDomain};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `(Gg, Gb)` with `G = Gg + Gb`.
    Additive,
    /// `(N, M)` with `G = N M⁻¹`.
    Rcf,
    /// `(N, M)` with `G = M⁻¹ N`.
    Lcf,
    /// `(Qfull, R)` with `G = Q₁ R`, `Q₁` the leading columns of `Qfull`.
    InnerOuter,
    /// `(R, Qfull)` with `G = R Q₁`, `Q₁` the leading rows of `Qfull`.
    CoOuterCoInner,
}

#[derive(Debug, Clone)]
pub struct FactorPair {
    pub first: DescriptorSystem,
    pub second: DescriptorSystem,
    pub kind: FactorKind,
    /// Number of inner columns (rows for the co-inner case); zero otherwise.
    pub inner_columns: usize,
}

impl FactorPair {
    /// `Q₁` for inner-outer results: the leading `inner_columns` columns (or
    /// rows) of the square inner factor.
    pub fn inner_part(&self) -> Option<DescriptorSystem> {
        let r = self.inner_columns;
        match self.kind {
            FactorKind::InnerOuter => {
                let q = &self.first;
                Some(crate::ops::select(q, &(0..q.outputs()).collect::<Vec<_>>(), &(0..r).collect::<Vec<_>>()))
            }
            FactorKind::CoOuterCoInner => {
                let q = &self.second;
                Some(crate::ops::select(q, &(0..r).collect::<Vec<_>>(), &(0..q.inputs()).collect::<Vec<_>>()))
            }
            _ => None,
        }
    }
}

/// Where infinite poles go in an additive split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinitePolicy {
    /// Disks send infinite poles to the bad part; half-plane splits of
    /// improper systems are rejected.
    Auto,
    ToGood,
    ToBad,
}

fn on_boundary(region: StabilityRegion, z: Complex64) -> bool {
    region.margin(z).abs() <= 1e-8 * (1.0 + z.norm())
}

/// `G = Gg + Gb` with the poles of `Gg` in `region` and those of `Gb`
/// outside; `D` is kept in `Gg`.
pub fn additive_decompose(sys: &DescriptorSystem, region: StabilityRegion, cfg: &Config) -> Result<FactorPair> {
    additive_decompose_with(sys, region, InfinitePolicy::Auto, cfg)
}

pub fn additive_decompose_with(
    sys: &DescriptorSystem,
    region: StabilityRegion,
    policy: InfinitePolicy,
    cfg: &Config,
) -> Result<FactorPair> {
    let region = region.validate()?;
    let r = minreal(sys, cfg);
    let n = r.order();
    let empty = |r: &DescriptorSystem| {
        DescriptorSystem::from_parts_unchecked(zeros(0, 0), zeros(0, 0), zeros(0, r.inputs()), zeros(r.outputs(), 0), zeros(r.outputs(), r.inputs()), r.domain)
    };
    if n == 0 {
        return Ok(FactorPair { second: empty(&r), first: r, kind: FactorKind::Additive, inner_columns: 0 });
    }
    let g = gschur(&r.a, &r.e)?;
    let has_inf = g.eigenvalues.iter().any(|e| e.1 == 0.0);
    for z in g.eigen_values().into_iter().flatten() {
        if on_boundary(region, z) {
            return Err(Error::PoleOnBoundary);
        }
    }
    let inf_good = match policy {
        InfinitePolicy::ToGood => true,
        InfinitePolicy::ToBad => false,
        InfinitePolicy::Auto => match region {
            StabilityRegion::DiscreteUnitDisk | StabilityRegion::ScaledDisk(_) => false,
            _ if has_inf => return Err(Error::PoleOnBoundary),
            _ => false,
        },
    };
    let sp = split_spectrum(&r.a, &r.e, |al, be| if be == 0.0 { inf_good } else { region.contains(al / be) })?;
    let k = sp.a1.nrows();
    let b = &sp.u * &r.b;
    let c = &r.c * &sp.v;
    let gg = DescriptorSystem::from_parts_unchecked(
        sp.a1,
        sp.e1,
        b.rows(0, k).clone_owned(),
        c.columns(0, k).clone_owned(),
        r.d.clone(),
        r.domain,
    );
    let gb = DescriptorSystem::from_parts_unchecked(
        sp.a2,
        sp.e2,
        b.rows(k, n - k).clone_owned(),
        c.columns(k, n - k).clone_owned(),
        zeros(r.outputs(), r.inputs()),
        r.domain,
    );
    Ok(FactorPair { first: gg, second: gb, kind: FactorKind::Additive, inner_columns: 0 })
}

/// Default target for a bad eigenvalue: reflected into the region.
fn reflect(region: StabilityRegion, z: Complex64) -> Complex64 {
    match region {
        StabilityRegion::ContinuousLeftHalfPlane => Complex64::new(-z.re.abs() - 1.0, z.im),
        StabilityRegion::ShiftedHalfPlane(a) => Complex64::new(a - (z.re - a).abs() - 1.0, z.im),
        StabilityRegion::DiscreteUnitDisk => shrink(z, 1.0),
        StabilityRegion::ScaledDisk(rho) => shrink(z, rho),
    }
}

fn shrink(z: Complex64, rho: f64) -> Complex64 {
    let mag = z.norm();
    let target = (rho * rho / mag).min(0.5 * rho);
    z * (target / mag)
}

struct Targets {
    list: Vec<Complex64>,
}

impl Targets {
    fn real(&mut self) -> Option<f64> {
        let i = self.list.iter().position(|z| z.im == 0.0)?;
        Some(self.list.remove(i).re)
    }

    /// A conjugate pair or two reals, as (sum, product).
    fn pair(&mut self) -> Option<(f64, f64)> {
        if let Some(i) = self.list.iter().position(|z| z.im > 0.0) {
            let z = self.list.remove(i);
            if let Some(j) = self.list.iter().position(|w| (w - z.conj()).norm() <= 1e-12 * (1.0 + z.norm())) {
                self.list.remove(j);
            }
            return Some((2.0 * z.re, z.norm_sqr()));
        }
        let a = self.real()?;
        match self.real() {
            Some(b) => Some((a + b, a * b)),
            None => {
                self.list.push(Complex64::new(a, 0.0));
                None
            }
        }
    }
}

fn validate_targets(region: StabilityRegion, poles: &[Complex64]) -> Result<()> {
    for z in poles {
        if !z.re.is_finite() || !z.im.is_finite() || region.margin(*z) <= 0.0 {
            return Err(Error::PlacementFailure(format!("target {z} not inside the region")));
        }
        if z.im != 0.0 && !poles.iter().any(|w| (w - z.conj()).norm() <= 1e-12 * (1.0 + z.norm())) {
            return Err(Error::PlacementFailure(format!("target {z} lacks its conjugate")));
        }
    }
    Ok(())
}

/// State feedback `F` such that the finite eigenvalues of `A + BF − λE`
/// lie in `region` and its infinite eigenvalues are simple.
pub fn place_poles(
    a: &Mat,
    e: &Mat,
    b: &Mat,
    region: StabilityRegion,
    poles: Option<&[Complex64]>,
    cfg: &Config,
) -> Result<Mat> {
    let region = region.validate()?;
    let n = a.nrows();
    let m = b.ncols();
    if let Some(p) = poles {
        validate_targets(region, p)?;
    }
    let mut targets = Targets { list: poles.map(|p| p.to_vec()).unwrap_or_default() };
    let scale = normf(a).max(normf(e)).max(normf(b)).max(1e-300);
    let tol = cfg.tol_for(n, n + m, scale);
    let mut f = zeros(m, n);

    // make the infinite eigenvalues simple
    let re = rank_tol(e, Some(tol));
    if re < n {
        let u2 = null_basis(&e.transpose(), Some(tol));
        let v2 = null_basis(e, Some(tol));
        let k = u2.ncols();
        let ub = u2.transpose() * b;
        let a22 = u2.transpose() * a * &v2;
        if rank_tol(&a22, Some(tol)) < k {
            if rank_tol(&ub, Some(tol)) < k {
                return Err(Error::PlacementFailure("infinite eigenvalues not controllable".into()));
            }
            let ubp = ub.clone().pseudo_inverse(tol).map_err(|e| Error::PlacementFailure(e.into()))?;
            let sigma = normf(a).max(1.0);
            f += ubp * (eye(k) * sigma - a22) * v2.transpose();
        }
    }

    for _ in 0..(2 * n + 2) {
        let acl = a + b * &f;
        let g = gschur_ordered(&acl, e, |al, be| be == 0.0 || region.contains(al / be))?;
        if g.selected_count == n {
            return Ok(f);
        }
        let kb = *g.blocks.last().expect("nonempty");
        let off = n - kb;
        let s22 = sub(&g.s, off, off, kb, kb);
        let t22 = sub(&g.t, off, off, kb, kb);
        let bq = g.q.transpose() * b;
        let b2 = bq.rows(off, kb).clone_owned();
        let z2 = g.z.columns(off, kb).clone_owned();
        let f2 = if kb == 1 {
            let (s, t) = (s22[(0, 0)], t22[(0, 0)]);
            let target = targets.real().unwrap_or_else(|| reflect(region, Complex64::new(s / t, 0.0)).re);
            let nb = b2.norm_squared();
            if nb.sqrt() <= tol {
                return Err(Error::PlacementFailure("uncontrollable eigenvalue outside the region".into()));
            }
            b2.transpose() * ((target * t - s) / nb)
        } else {
            let ev = g.eigen_values();
            let z = ev[n - 1].unwrap_or_default();
            let (sum, prod) = targets.pair().unwrap_or_else(|| {
                let w = reflect(region, z);
                (2.0 * w.re, w.norm_sqr())
            });
            place_pair(&s22, &t22, &b2, sum, prod, tol)?
        };
        f += f2 * z2.transpose();
    }
    Err(Error::PlacementFailure("eigenvalue assignment did not converge".into()))
}

/// Feedback for a 2x2 block: eigenvalues of `T⁻¹(S + B F)` become the roots
/// of `λ² − sum·λ + prod`.
fn place_pair(s: &Mat, t: &Mat, b: &Mat, sum: f64, prod: f64, tol: f64) -> Result<Mat> {
    let ti = inverse(t).ok_or_else(|| Error::PlacementFailure("singular block".into()))?;
    let at = &ti * s;
    let bt = &ti * b;
    let m = b.ncols();
    let (_, v) = right_svd(&bt);
    let mut candidates: Vec<Mat> = (0..m).map(|j| v.columns(j, 1).clone_owned()).collect();
    if m >= 2 {
        candidates.push((v.columns(0, 1) + v.columns(1, 1)) / 2f64.sqrt());
        candidates.push((v.columns(0, 1) - v.columns(1, 1)) / 2f64.sqrt());
    }
    let mut best: Option<(f64, Mat, Mat)> = None;
    for g in candidates {
        let bv = &bt * &g;
        let ctrb = hcat(&bv, &(&at * &bv));
        let sv = singular_values(&ctrb);
        let smin = *sv.last().unwrap_or(&0.0);
        if best.as_ref().map_or(true, |(s0, _, _)| smin > *s0) {
            best = Some((smin, g, ctrb));
        }
    }
    let (smin, g, ctrb) = best.ok_or_else(|| Error::PlacementFailure("no input".into()))?;
    if smin <= tol {
        return Err(Error::PlacementFailure("uncontrollable eigenvalue pair outside the region".into()));
    }
    let pa = &at * &at - &at * sum + eye(2) * prod;
    let ci = inverse(&ctrb).ok_or_else(|| Error::PlacementFailure("ill-conditioned block".into()))?;
    let k = Mat::from_row_slice(1, 2, &[0.0, 1.0]) * ci * pa;
    Ok(g * (-k))
}

/// Right coprime factorization `G = N M⁻¹` with the poles of both factors in
/// `region`.
pub fn rcf(sys: &DescriptorSystem, region: StabilityRegion, poles: Option<&[Complex64]>, cfg: &Config) -> Result<FactorPair> {
    let r = minreal(sys, cfg);
    let m = r.inputs();
    let f = place_poles(&r.a, &r.e, &r.b, region, poles, cfg)?;
    let acl = &r.a + &r.b * &f;
    let n_sys = DescriptorSystem::from_parts_unchecked(acl.clone(), r.e.clone(), r.b.clone(), &r.c - &r.d * &f, r.d.clone(), r.domain);
    let m_sys = DescriptorSystem::from_parts_unchecked(acl, r.e.clone(), r.b.clone(), -f, eye(m), r.domain);
    Ok(FactorPair { first: n_sys, second: m_sys, kind: FactorKind::Rcf, inner_columns: 0 })
}

/// Left coprime factorization `G = M⁻¹ N`, computed as the dual of a right
/// factorization of `Gᵀ`.
pub fn lcf(sys: &DescriptorSystem, region: StabilityRegion, poles: Option<&[Complex64]>, cfg: &Config) -> Result<FactorPair> {
    let fp = rcf(&transpose_dual(sys), region, poles, cfg)?;
    Ok(FactorPair {
        first: transpose_dual(&fp.first),
        second: transpose_dual(&fp.second),
        kind: FactorKind::Lcf,
        inner_columns: 0,
    })
}

/// Stabilizing Riccati solution for the factorization of `(A, B, C, D)`
/// (standard sign convention): returns `(X, F)` with `u = F x` optimal.
fn riccati(a: &Mat, b: &Mat, c: &Mat, d: &Mat, domain: TimeDomain) -> Result<(Mat, Mat)> {
    let n = a.nrows();
    let m = b.ncols();
    let q = c.transpose() * c;
    let s = c.transpose() * d;
    let r = d.transpose() * d;
    let k = 2 * n + m;
    let mut mm = zeros(k, k);
    let mut nn = zeros(k, k);
    mm.view_mut((0, 0), (n, n)).copy_from(a);
    mm.view_mut((0, 2 * n), (n, m)).copy_from(b);
    mm.view_mut((n, 0), (n, n)).copy_from(&(-&q));
    mm.view_mut((n, 2 * n), (n, m)).copy_from(&(-&s));
    mm.view_mut((2 * n, 0), (m, n)).copy_from(&s.transpose());
    mm.view_mut((2 * n, 2 * n), (m, m)).copy_from(&r);
    nn.view_mut((0, 0), (n, n)).copy_from(&eye(n));
    match domain {
        TimeDomain::Continuous => {
            mm.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));
            mm.view_mut((2 * n, n), (m, n)).copy_from(&b.transpose());
            nn.view_mut((n, n), (n, n)).copy_from(&eye(n));
        }
        TimeDomain::Discrete => {
            mm.view_mut((n, n), (n, n)).copy_from(&eye(n));
            nn.view_mut((n, n), (n, n)).copy_from(&a.transpose());
            nn.view_mut((2 * n, n), (m, n)).copy_from(&(-b.transpose()));
        }
    }
    let g = gschur_ordered(&mm, &nn, |al, be| be != 0.0 && domain.is_stable_point(al / be))?;
    if g.selected_count != n {
        return Err(Error::BoundaryZeros);
    }
    let u1 = sub(&g.z, 0, 0, n, n);
    let u2 = sub(&g.z, n, 0, n, n);
    let u3 = sub(&g.z, 2 * n, 0, m, n);
    let u1i = inverse(&u1).ok_or(Error::BoundaryZeros)?;
    let x = &u2 * &u1i;
    let x = (&x + x.transpose()) * 0.5;
    Ok((x, u3 * u1i))
}

/// Inner-outer factorization `G = Q₁ R` of a stable proper system with full
/// column normal rank and no zeros on the stability boundary. `Qfull` is
/// square inner; `R` is outer.
pub fn inner_outer(sys: &DescriptorSystem, cfg: &Config) -> Result<FactorPair> {
    let r = minreal(sys, cfg);
    let (p, m) = r.d.shape();
    let n = r.order();
    let dom = r.domain;
    let ei = inverse(&r.e).ok_or(Error::ImproperInput)?;
    let a = &ei * &r.a;
    let b = &ei * &r.b;
    let c = -&r.c;
    let d = r.d.clone();
    if n > 0 {
        let g = gschur(&a, &eye(n))?;
        if g.eigen_values().into_iter().any(|z| z.map_or(true, |z| !dom.is_stable_point(z))) {
            return Err(Error::UnstableInput);
        }
    }
    if normal_rank(&r, cfg) < m {
        return Err(Error::RankDeficiencyUnsupported);
    }
    let region = StabilityRegion::for_domain(dom);
    let zi = system_zeros(&r, cfg);
    if zi.finite.iter().any(|&z| on_boundary(region, z)) {
        return Err(Error::BoundaryZeros);
    }
    let dscale = normf(&d).max(normf(&c)).max(1.0);
    if dom == TimeDomain::Continuous && rank_tol(&d, Some(cfg.tol_for(p, m, dscale))) < m {
        // zero at infinity
        return Err(Error::BoundaryZeros);
    }

    let (x, f) = if n == 0 { (zeros(0, 0), zeros(m, 0)) } else { riccati(&a, &b, &c, &d, dom)? };
    let rd = match dom {
        TimeDomain::Continuous => d.transpose() * &d,
        TimeDomain::Discrete => d.transpose() * &d + b.transpose() * &x * &b,
    };
    let rd = (&rd + rd.transpose()) * 0.5;
    let l = rd.cholesky().ok_or(Error::BoundaryZeros)?.l();
    let lti = inverse(&l.transpose()).ok_or(Error::BoundaryZeros)?;

    let ai = &a + &b * &f;
    let bi = &b * &lti;
    let ci = &c + &d * &f;
    let di = &d * &lti;
    let (bperp, dperp) = inner_complement(&ai, &bi, &ci, &di, dom, cfg)?;

    let qfull = DescriptorSystem::from_parts_unchecked(
        ai,
        eye(n),
        hcat(&bi, &bperp),
        -ci,
        hcat(&di, &dperp),
        dom,
    );
    let outer = DescriptorSystem::from_parts_unchecked(a, eye(n), b, l.transpose() * &f, l.transpose(), dom);
    Ok(FactorPair { first: qfull, second: outer, kind: FactorKind::InnerOuter, inner_columns: m })
}

/// Columns completing an inner `(Ai, Bi, Ci, Di)` to a square inner system.
fn inner_complement(ai: &Mat, bi: &Mat, ci: &Mat, di: &Mat, dom: TimeDomain, cfg: &Config) -> Result<(Mat, Mat)> {
    let n = ai.nrows();
    let (p, m) = di.shape();
    if p == m {
        return Ok((zeros(n, 0), zeros(p, 0)));
    }
    if n == 0 {
        return Ok((zeros(0, p - m), null_basis(&di.transpose(), None)));
    }
    let y = glyap(&ai.transpose(), &eye(n), &(ci.transpose() * ci), dom)?;
    let ytol = cfg.tol_for(n, n, normf(&y).max(1.0));
    match dom {
        TimeDomain::Continuous => {
            let dperp = null_basis(&di.transpose(), None);
            let yp = y.clone().pseudo_inverse(ytol).map_err(|e| Error::UnsupportedShape(e.into()))?;
            Ok((-(yp * ci.transpose() * &dperp), dperp))
        }
        TimeDomain::Discrete => {
            let eig = y.clone().symmetric_eigen();
            let sq = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
            let ysq = &eig.eigenvectors * Mat::from_diagonal(&sq) * eig.eigenvectors.transpose();
            let isq = sq.map(|v| if v > ytol.sqrt() { 1.0 / v } else { 0.0 });
            let yisq = &eig.eigenvectors * Mat::from_diagonal(&isq) * eig.eigenvectors.transpose();
            let theta = vcat(&(&ysq * ai), ci);
            let omega = vcat(&(&ysq * bi), di);
            let w = null_basis(&hcat(&theta, &omega).transpose(), None);
            if w.ncols() != p - m {
                return Err(Error::RankDeficiencyUnsupported);
            }
            Ok((yisq * w.rows(0, n), w.rows(n, p).clone_owned()))
        }
    }
}

/// `G = R Q₁` with `Q₁` co-inner, from the inner-outer factorization of
/// `Gᵀ`.
pub fn co_outer_co_inner(sys: &DescriptorSystem, cfg: &Config) -> Result<FactorPair> {
    let io = inner_outer(&transpose_dual(sys), cfg)?;
    Ok(FactorPair {
        first: transpose_dual(&io.second),
        second: transpose_dual(&io.first),
        kind: FactorKind::CoOuterCoInner,
        inner_columns: io.inner_columns,
    })
}

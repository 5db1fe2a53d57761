//! Rational nullspace bases, linear rational matrix equations and L2
//! model matching.

use crate::analysis::{h2_norm, is_stable, minreal, normal_rank, StabilityRegion};
use crate::error::{Error, Result};
use crate::factor::{additive_decompose_with, inner_outer, place_poles, InfinitePolicy};
use crate::linalg::*;
use crate::ops::{concat_row, conjugate, inverse as tfm_inverse, select, series, transpose_dual, InverseMode};
use crate::pencil::{klf, Klf};
use crate::system::{Config, DescriptorSystem, TimeDomain};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// A particular solution `X₀`.
    pub particular: DescriptorSystem,
    /// Nullspace basis `X_r`; every solution is `X₀ + X_r Y`.
    pub null_basis: DescriptorSystem,
}

#[derive(Debug, Clone)]
pub struct LdpParts {
    pub f1_tilde: DescriptorSystem,
    pub f2_tilde: DescriptorSystem,
    pub ls: DescriptorSystem,
    pub lu: DescriptorSystem,
    pub error_norm: f64,
}

/// Region and pole list used for the free dynamics of nullspace bases and
/// particular solutions.
fn default_poles(domain: TimeDomain, k: usize) -> (StabilityRegion, Vec<Complex64>) {
    match domain {
        TimeDomain::Continuous => {
            (StabilityRegion::ShiftedHalfPlane(-0.5), (1..=k).map(|i| Complex64::new(-(i as f64), 0.0)).collect())
        }
        TimeDomain::Discrete => {
            let steps = [0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3, 0.4, -0.4];
            (StabilityRegion::ScaledDisk(0.5), (0..k).map(|i| Complex64::new(steps[i % steps.len()], 0.0)).collect())
        }
    }
}

/// Splits the right singular block `Ar − λEr` of a Kronecker-like form as
/// `[Acl − λẼ, B̃]` after a column transformation `W·[I 0; F I]` that places
/// the eigenvalues of `Acl − λẼ`. Returns `(Acl, Ẽ, B̃, W1 + W2 F, W2)`.
struct RightBlock {
    acl: Mat,
    e: Mat,
    b: Mat,
    /// Columns carrying the state part: `W₁ + W₂F`.
    wx: Mat,
    /// Columns carrying the free part: `W₂`.
    wu: Mat,
}

fn right_block(k: &Klf, domain: TimeDomain, cfg: &Config) -> Result<RightBlock> {
    let (rr, rc) = k.blocks.right;
    let ar = sub(&k.mk, 0, 0, rr, rc);
    let er = sub(&k.nk, 0, 0, rr, rc);
    let (_, w) = right_svd(&er);
    let w = if rc == 0 { zeros(0, 0) } else { w };
    let w1 = w.columns(0, rr).clone_owned();
    let w2 = w.columns(rr, rc - rr).clone_owned();
    let e = &er * &w1;
    let a = &ar * &w1;
    let b = &ar * &w2;
    let f = if rr == 0 {
        zeros(rc - rr, 0)
    } else {
        let (region, poles) = default_poles(domain, rr);
        match place_poles(&a, &e, &b, region, Some(&poles), cfg) {
            Ok(f) => f,
            // a nearly singular E can leave modes the feedback cannot reach;
            // the open-loop block is still a valid basis
            Err(Error::PlacementFailure(_)) => zeros(rc - rr, rr),
            Err(err) => return Err(err),
        }
    };
    Ok(RightBlock { acl: &a + &b * &f, e, b, wx: &w1 + &w2 * &f, wu: w2 })
}

/// Proper right nullspace basis `N_r` (`m x (m − r)`) with `G N_r = 0`.
pub fn right_nullspace(sys: &DescriptorSystem, cfg: &Config) -> Result<DescriptorSystem> {
    let n = sys.order();
    let m = sys.inputs();
    let (mm, nn) = sys.system_pencil();
    let k = klf(&mm, &nn, cfg.tol)?;
    let rb = right_block(&k, sys.domain, cfg)?;
    let rc = k.blocks.right.1;
    let vb = sub(&k.v, n, 0, m, rc);
    Ok(DescriptorSystem::from_parts_unchecked(rb.acl, rb.e, rb.b, -(&vb * &rb.wx), &vb * &rb.wu, sys.domain))
}

/// Proper left nullspace basis `N_l` (`(p − r) x p`) with `N_l G = 0`.
pub fn left_nullspace(sys: &DescriptorSystem, cfg: &Config) -> Result<DescriptorSystem> {
    Ok(transpose_dual(&right_nullspace(&transpose_dual(sys), cfg)?))
}

/// Solves `G X = F`.
pub fn solve_right(g: &DescriptorSystem, f: &DescriptorSystem, cfg: &Config) -> Result<SolveResult> {
    if g.domain != f.domain {
        return Err(Error::DomainMismatch);
    }
    if g.outputs() != f.outputs() {
        return Err(Error::DimensionMismatch(format!("G has {} rows, F has {}", g.outputs(), f.outputs())));
    }
    let gf = concat_row(g, f)?;
    if normal_rank(&gf, cfg) > normal_rank(g, cfg) {
        return Err(Error::Incompatible);
    }
    let null_basis = right_nullspace(g, cfg)?;

    // lifted pencil [A − λE, B_G; −C, D_G] [Y; X] = [B_F; D_F] on the joint state
    let (m, mf) = (g.inputs(), f.inputs());
    let nb = gf.order();
    let bg = gf.b.columns(0, m).clone_owned();
    let bf = gf.b.columns(m, mf).clone_owned();
    let dg = gf.d.columns(0, m).clone_owned();
    let df = gf.d.columns(m, mf).clone_owned();
    let mm = block2(&gf.a, &bg, &(-&gf.c), &dg);
    let nn = blkdiag(&gf.e, &zeros(g.outputs(), m));
    let rhs = vcat(&bf, &df);

    let particular = if g.outputs() == m && normal_rank(g, cfg) == m {
        DescriptorSystem::from_parts_unchecked(mm, nn, rhs, hcat(&zeros(m, nb), &eye(m)), zeros(m, mf), g.domain)
    } else {
        let k = klf(&mm, &nn, cfg.tol)?;
        let rb = right_block(&k, g.domain, cfg)?;
        let (rr, rc) = k.blocks.right;
        let reg_r = k.blocks.infinite.0 + k.blocks.finite.0;
        let reg_c = k.blocks.infinite.1 + k.blocks.finite.1;
        if reg_r != reg_c {
            return Err(Error::Incompatible);
        }
        let vsel = hcat(&(k.v.columns(0, rc) * &rb.wx), &k.v.columns(rc, reg_c).clone_owned());
        let usel = k.u.rows(0, rr + reg_r).clone_owned();
        DescriptorSystem::from_parts_unchecked(
            &usel * &mm * &vsel,
            &usel * &nn * &vsel,
            &usel * &rhs,
            vsel.rows(nb, m).clone_owned(),
            zeros(m, mf),
            g.domain,
        )
    };
    Ok(SolveResult { particular, null_basis })
}

/// Solves `X G = F` through the dual equation `Gᵀ Xᵀ = Fᵀ`.
pub fn solve_left(g: &DescriptorSystem, f: &DescriptorSystem, cfg: &Config) -> Result<SolveResult> {
    let r = solve_right(&transpose_dual(g), &transpose_dual(f), cfg)?;
    Ok(SolveResult { particular: transpose_dual(&r.particular), null_basis: transpose_dual(&r.null_basis) })
}

/// Stable/antistable split; in discrete time the constant term is moved to
/// the stable part so the antistable part vanishes at the origin.
fn stable_antistable(h: &DescriptorSystem, cfg: &Config) -> Result<(DescriptorSystem, DescriptorSystem)> {
    let region = StabilityRegion::for_domain(h.domain);
    let fp = additive_decompose_with(h, region, InfinitePolicy::ToBad, cfg)?;
    let (mut s, mut u) = (fp.first, fp.second);
    if h.domain == TimeDomain::Discrete && u.order() > 0 {
        let c0 = u.eval(Complex64::new(0.0, 0.0))?.map(|z| z.re);
        s.d += &c0;
        u.d -= &c0;
    }
    Ok((s, u))
}

/// L2 norm of a system without poles on the stability boundary.
pub fn l2_norm(h: &DescriptorSystem, cfg: &Config) -> Result<f64> {
    let (s, u) = stable_antistable(h, cfg)?;
    let ns = h2_norm(&s, cfg)?;
    let nu = if u.order() == 0 { 0.0 } else { h2_norm(&conjugate(&u), cfg)? };
    Ok((ns * ns + nu * nu).sqrt())
}

/// Solves `min ‖F − G X‖₂` over stable `X` for stable `G` with full column
/// normal rank and no zeros on the stability boundary.
pub fn l2_model_match(g: &DescriptorSystem, f: &DescriptorSystem, cfg: &Config) -> Result<(DescriptorSystem, LdpParts)> {
    if g.domain != f.domain {
        return Err(Error::DomainMismatch);
    }
    if g.outputs() != f.outputs() {
        return Err(Error::DimensionMismatch(format!("G has {} rows, F has {}", g.outputs(), f.outputs())));
    }
    if !is_stable(g, cfg) || !is_stable(f, cfg) {
        return Err(Error::UnstableInput);
    }
    let fr = minreal(f, cfg);
    if f.domain == TimeDomain::Continuous && normf(&fr.d) > cfg.tol_for(fr.outputs(), fr.inputs(), normf(&fr.c).max(1.0)) {
        return Err(Error::NonstrictlyProperF);
    }
    let m = g.inputs();
    if normal_rank(g, cfg) < m {
        return Err(Error::UnsupportedShape(format!("normal rank of G below its {m} columns")));
    }
    let io = inner_outer(g, cfg).map_err(|e| match e {
        Error::RankDeficiencyUnsupported => Error::UnsupportedShape("rank-deficient G".into()),
        other => other,
    })?;
    let p = g.outputs();
    let qc = conjugate(&io.first);
    let rows1: Vec<usize> = (0..m).collect();
    let rows2: Vec<usize> = (m..p).collect();
    let all: Vec<usize> = (0..p).collect();
    let f1 = minreal(&series(&select(&qc, &rows1, &all), &fr)?, cfg);
    let f2 = minreal(&series(&select(&qc, &rows2, &all), &fr)?, cfg);

    let (ls, lu) = stable_antistable(&f1, cfg)?;
    let rinv = tfm_inverse(&io.second, InverseMode::DInverse)?;
    let x = minreal(&series(&rinv, &ls)?, cfg);

    let nu = if lu.order() == 0 { 0.0 } else { h2_norm(&conjugate(&lu), cfg)? };
    let n2 = if f2.outputs() == 0 { 0.0 } else { l2_norm(&f2, cfg)? };
    let error_norm = (nu * nu + n2 * n2).sqrt();
    Ok((x, LdpParts { f1_tilde: f1, f2_tilde: f2, ls, lu, error_norm }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::normal_rank;
    use crate::ops::{concat_col, parallel};
    use crate::system::{random_system, RandomSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config {
        Config::default()
    }

    fn first_order(pole: f64, k: f64, d: f64) -> DescriptorSystem {
        DescriptorSystem::standard(
            Mat::from_element(1, 1, pole),
            eye(1),
            Mat::from_element(1, 1, -k),
            Mat::from_element(1, 1, d),
            TimeDomain::Continuous,
        )
        .unwrap()
    }

    fn differentiator() -> DescriptorSystem {
        DescriptorSystem::new(
            eye(2),
            Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            Mat::from_row_slice(2, 1, &[0.0, 1.0]),
            Mat::from_row_slice(1, 2, &[1.0, 0.0]),
            zeros(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap()
    }

    fn probes(seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        crate::system::probe_points(2.7, 5, &mut rng)
    }

    fn product_small(a: &DescriptorSystem, b: &DescriptorSystem, seed: u64) {
        for s in probes(seed) {
            let (x, y) = (a.eval(s).unwrap(), b.eval(s).unwrap());
            let prod = &x * &y;
            assert!(prod.norm() <= 1e-8 * (1.0 + x.norm()) * (1.0 + y.norm()), "residual {}", prod.norm());
        }
    }

    #[test]
    fn nullspace_examples() {
        let full = first_order(-1.0, 1.0, 0.0);
        assert_eq!(left_nullspace(&full, &cfg()).unwrap().outputs(), 0);
        assert_eq!(right_nullspace(&full, &cfg()).unwrap().inputs(), 0);

        let g = concat_col(&full, &full).unwrap();
        let nl = left_nullspace(&g, &cfg()).unwrap();
        assert_eq!(nl.outputs(), 1);
        let v = nl.eval(Complex64::new(0.3, 0.2)).unwrap();
        assert!((v[(0, 0)] + v[(0, 1)]).norm() < 1e-10);
        product_small(&nl, &g, 1);

        let one = DescriptorSystem::gain(eye(1), TimeDomain::Continuous);
        let col = concat_col(&one, &differentiator()).unwrap();
        let nl = left_nullspace(&col, &cfg()).unwrap();
        assert_eq!(nl.outputs(), 1);
        product_small(&nl, &col, 2);
        assert!(crate::analysis::poles(&nl, &cfg()).infinite_count == 0);

        let row = concat_row(&one, &differentiator()).unwrap();
        let nr = right_nullspace(&row, &cfg()).unwrap();
        assert_eq!(nr.inputs(), 1);
        product_small(&row, &nr, 3);
    }

    #[test]
    fn nullspace_dimension_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for trial in 0..25 {
            let dom = if trial % 2 == 0 { TimeDomain::Continuous } else { TimeDomain::Discrete };
            let spec = if trial % 3 == 0 { RandomSpec::IMPROPER } else { RandomSpec::PROPER };
            let inner = rng.gen_range(1..3);
            let a = random_system(rng.gen_range(0..4), inner, rng.gen_range(1..4), dom, spec, &mut rng);
            let b = random_system(rng.gen_range(0..4), rng.gen_range(1..4), inner, dom, RandomSpec::PROPER, &mut rng);
            let g = series(&a, &b).unwrap();
            let r = normal_rank(&g, &cfg());
            let nr = right_nullspace(&g, &cfg()).unwrap();
            let nl = left_nullspace(&g, &cfg()).unwrap();
            assert_eq!(nr.inputs(), g.inputs() - r, "trial {trial}");
            assert_eq!(nl.outputs(), g.outputs() - r, "trial {trial}");
            product_small(&g, &nr, trial);
            product_small(&nl, &g, trial + 50);
            assert_eq!(normal_rank(&nr, &cfg()), nr.inputs());
        }
    }

    fn residual_ok(g: &DescriptorSystem, x: &DescriptorSystem, f: &DescriptorSystem, seed: u64) {
        for s in probes(seed) {
            let want = f.eval(s).unwrap();
            let got = g.eval(s).unwrap() * x.eval(s).unwrap();
            assert!((&got - &want).norm() <= 1e-8 * (1.0 + want.norm()), "{got} vs {want}");
        }
    }

    #[test]
    fn solve_examples() {
        let f = first_order(-2.0, 1.0, 0.0);
        let r = solve_right(&DescriptorSystem::gain(eye(1), TimeDomain::Continuous), &f, &cfg()).unwrap();
        residual_ok(&DescriptorSystem::gain(eye(1), TimeDomain::Continuous), &r.particular, &f, 1);

        let g = first_order(-1.0, 1.0, 0.0);
        let f = series(&g, &first_order(-2.0, 1.0, 0.0)).unwrap();
        let r = solve_right(&g, &f, &cfg()).unwrap();
        for s in probes(2) {
            assert!((r.particular.eval(s).unwrap()[(0, 0)] - 1.0 / (s + 2.0)).norm() < 1e-10);
        }

        let g = DescriptorSystem::gain(Mat::from_row_slice(2, 1, &[1.0, 0.0]), TimeDomain::Continuous);
        let f = DescriptorSystem::gain(Mat::from_row_slice(2, 1, &[0.0, 1.0]), TimeDomain::Continuous);
        assert_eq!(solve_right(&g, &f, &cfg()).unwrap_err(), Error::Incompatible);

        let one = DescriptorSystem::gain(eye(1), TimeDomain::Continuous);
        let lf = solve_left(&one, &f, &cfg()).unwrap();
        assert_eq!(lf.particular.outputs(), 2);
    }

    #[test]
    fn solve_random_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..25 {
            let dom = if trial % 2 == 0 { TimeDomain::Continuous } else { TimeDomain::Discrete };
            let spec = if trial % 4 == 0 { RandomSpec::IMPROPER } else { RandomSpec::PROPER };
            let p = rng.gen_range(1..4);
            let m = rng.gen_range(1..4);
            let g = random_system(rng.gen_range(0..4), m, p, dom, spec, &mut rng);
            let xt = random_system(rng.gen_range(0..3), rng.gen_range(1..3), m, dom, RandomSpec::PROPER, &mut rng);
            let f = series(&g, &xt).unwrap();
            let r = solve_right(&g, &f, &cfg()).unwrap();
            residual_ok(&g, &r.particular, &f, trial);
            let l = solve_left(&transpose_dual(&g), &transpose_dual(&f), &cfg()).unwrap();
            for s in probes(trial + 9) {
                let want = transpose_dual(&f).eval(s).unwrap();
                let got = l.particular.eval(s).unwrap() * transpose_dual(&g).eval(s).unwrap();
                assert!((&got - &want).norm() <= 1e-8 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn incompatible_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let a = random_system(rng.gen_range(0..3), 1, 3, TimeDomain::Continuous, RandomSpec::PROPER, &mut rng);
            let b = random_system(rng.gen_range(0..3), 2, 1, TimeDomain::Continuous, RandomSpec::PROPER, &mut rng);
            let g = series(&a, &b).unwrap();
            let f = random_system(rng.gen_range(0..3), 1, 3, TimeDomain::Continuous, RandomSpec::PROPER, &mut rng);
            assert_eq!(solve_right(&g, &f, &cfg()).unwrap_err(), Error::Incompatible);
        }
    }

    #[test]
    fn model_matching_examples() {
        let g = first_order(-1.0, 1.0, 0.0);
        let g2 = parallel(&g, &DescriptorSystem::gain(Mat::from_element(1, 1, 0.5), TimeDomain::Continuous)).unwrap();
        let (x, parts) = l2_model_match(&g2, &g, &cfg()).unwrap();
        residual_ok(&g2, &x, &g, 3);
        assert!(parts.error_norm < 1e-8);

        let zero = DescriptorSystem::gain(zeros(1, 1), TimeDomain::Continuous);
        let (x, parts) = l2_model_match(&g2, &zero, &cfg()).unwrap();
        assert!(x.eval(Complex64::new(0.1, 0.3)).unwrap().norm() < 1e-12);
        assert_eq!(parts.error_norm, 0.0);

        let inner = first_order(-1.0, -2.0, 1.0);
        let (x, parts) = l2_model_match(&inner, &g, &cfg()).unwrap();
        assert!(x.eval(Complex64::new(0.1, 0.3)).unwrap().norm() < 1e-10);
        assert!((parts.error_norm - 0.5f64.sqrt()).abs() < 1e-8);
        assert_eq!(l2_model_match(&inner, &first_order(1.0, 1.0, 0.0), &cfg()).unwrap_err(), Error::UnstableInput);
    }
}

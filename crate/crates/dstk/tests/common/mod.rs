#![allow(dead_code)]

use dstk::linalg::{blkdiag, hcat, vcat, zeros, CMat, Mat};
use dstk::{random_system, DescriptorSystem, RandomSpec, TimeDomain};
use num_complex::Complex64;
use rand::Rng;

pub fn domain(i: usize) -> TimeDomain {
    if i % 2 == 0 {
        TimeDomain::Continuous
    } else {
        TimeDomain::Discrete
    }
}

/// Points on a circle comfortably away from the poles of the test systems.
pub fn probes(rng: &mut impl Rng, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = rng.gen_range(2.5..4.0);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// `‖x − y‖ / max(1, ‖y‖)`.
pub fn rel_err(x: &CMat, y: &CMat) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

pub fn eval(g: &DescriptorSystem, s: Complex64) -> CMat {
    g.eval(s).expect("probe hit a pole")
}

pub fn inv(m: &CMat) -> CMat {
    m.clone().try_inverse().expect("singular probe value")
}

pub fn rand_mat(r: usize, c: usize, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn orthogonal(n: usize, rng: &mut impl Rng) -> Mat {
    if n == 0 {
        return zeros(0, 0);
    }
    rand_mat(n, n, rng).qr().q()
}

/// A random system that is generically minimal.
pub fn random_any(rng: &mut impl Rng, i: usize, max_order: usize, m: usize, p: usize) -> DescriptorSystem {
    let spec = if i % 3 == 0 { RandomSpec::IMPROPER } else { RandomSpec::PROPER };
    random_system(rng.gen_range(0..=max_order), m, p, domain(i), spec, rng)
}

/// Product of two random factors through `inner` channels; normal rank at
/// most `inner`.
pub fn low_rank(rng: &mut impl Rng, i: usize, inner: usize, m: usize, p: usize) -> DescriptorSystem {
    let a = random_any(rng, i, 3, inner, p);
    let b = random_system(rng.gen_range(0..3), m, inner, domain(i), RandomSpec::PROPER, rng);
    dstk::ops::series(&a, &b).unwrap()
}

/// Pads `g` with an uncontrollable block, an unobservable block and
/// (optionally) a non-dynamic block, then hides the structure by orthogonal
/// transformations. The transfer function is unchanged.
pub fn pad_nonminimal(g: &DescriptorSystem, rng: &mut impl Rng, nondynamic: bool) -> DescriptorSystem {
    let (m, p) = (g.inputs(), g.outputs());
    let nu = rng.gen_range(1..3);
    let no = rng.gen_range(1..3);
    let nd = if nondynamic { rng.gen_range(1..3) } else { 0 };
    let a = blkdiag(&blkdiag(&blkdiag(&g.a, &rand_mat(nu, nu, rng)), &rand_mat(no, no, rng)), &Mat::identity(nd, nd));
    let e = blkdiag(&blkdiag(&blkdiag(&g.e, &Mat::identity(nu, nu)), &Mat::identity(no, no)), &zeros(nd, nd));
    let bd = rand_mat(nd, m, rng);
    let cd = rand_mat(p, nd, rng);
    let b = vcat(&vcat(&vcat(&g.b, &zeros(nu, m)), &rand_mat(no, m, rng)), &bd);
    let c = hcat(&hcat(&hcat(&g.c, &rand_mat(p, nu, rng)), &zeros(p, no)), &cd);
    // the non-dynamic block contributes Cd Bd; compensate in D
    let d = &g.d - &cd * &bd;
    let n = a.nrows();
    let u = orthogonal(n, rng);
    let v = orthogonal(n, rng);
    DescriptorSystem::new(&u * a * &v, &u * e * &v, &u * b, c * &v, d, g.domain).unwrap()
}

/// `∫ ‖H‖F²` over the imaginary axis (divided by 2π) or the unit circle
/// (divided by 2π), by the trapezoid rule on a dense grid.
pub fn l2_quadrature(h: &DescriptorSystem) -> f64 {
    match h.domain {
        TimeDomain::Continuous => {
            // ω = tan(θ), θ ∈ (−π/2, π/2)
            let n = 20001;
            let mut acc = 0.0;
            let dt = std::f64::consts::PI / (n as f64 + 1.0);
            for k in 1..=n {
                let t = -std::f64::consts::FRAC_PI_2 + k as f64 * dt;
                let w = t.tan();
                let v = eval(h, Complex64::new(0.0, w)).norm_squared();
                acc += v * (1.0 + w * w) * dt;
            }
            (acc / std::f64::consts::TAU).sqrt()
        }
        TimeDomain::Discrete => {
            let n = 4000;
            let dt = std::f64::consts::TAU / n as f64;
            let acc: f64 = (0..n).map(|k| eval(h, Complex64::from_polar(1.0, k as f64 * dt)).norm_squared() * dt).sum();
            (acc / std::f64::consts::TAU).sqrt()
        }
    }
}

pub fn vcat_c(a: &CMat, b: &CMat) -> CMat {
    let mut m = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    m
}

pub fn hcat_c(a: &CMat, b: &CMat) -> CMat {
    vcat_c(&a.transpose(), &b.transpose()).transpose()
}

pub fn blkdiag_c(a: &CMat, b: &CMat) -> CMat {
    let mut m = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

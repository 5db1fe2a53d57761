//! The descriptor system `(A − λE, B, C, D)` and its transfer-function
//! evaluation `G(λ) = C (A − λE)⁻¹ B + D`.

use crate::error::{Error, Result};
use crate::linalg::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeDomain {
    Continuous,
    Discrete,
}

impl TimeDomain {
    /// Whether `lambda` lies in the open stability region of the domain.
    pub fn is_stable_point(self, lambda: Complex64) -> bool {
        match self {
            TimeDomain::Continuous => lambda.re < 0.0,
            TimeDomain::Discrete => lambda.norm() < 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeDomain::Continuous => "continuous",
            TimeDomain::Discrete => "discrete",
        }
    }
}

/// Tolerance and random-probe settings shared by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Absolute rank tolerance; `None` picks a size- and norm-scaled default.
    pub tol: Option<f64>,
    /// Seed of the frequency-probe generator.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: None, seed: 0x00d5_7c0d }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config { seed, ..Default::default() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Tolerance for a rank decision on a `rows x cols` matrix of scale
    /// `scale`.
    pub fn tol_for(&self, rows: usize, cols: usize, scale: f64) -> f64 {
        self.tol.unwrap_or_else(|| pencil_tol(rows, cols, scale))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorSystem {
    pub a: Mat,
    pub e: Mat,
    pub b: Mat,
    pub c: Mat,
    pub d: Mat,
    pub domain: TimeDomain,
}

impl DescriptorSystem {
    /// Validating constructor: dimensions, finiteness and a randomized
    /// regularity probe of `A − λE`.
    pub fn new(a: Mat, e: Mat, b: Mat, c: Mat, d: Mat, domain: TimeDomain) -> Result<Self> {
        let sys = Self::from_parts_unchecked(a, e, b, c, d, domain);
        sys.check_dims()?;
        for (m, name) in [(&sys.a, "A"), (&sys.e, "E"), (&sys.b, "B"), (&sys.c, "C"), (&sys.d, "D")] {
            if !is_finite(m) {
                return Err(Error::NonFinite(name));
            }
        }
        if !pencil_is_regular(&sys.a, &sys.e) {
            return Err(Error::SingularPencil);
        }
        Ok(sys)
    }

    /// Standard state-space system with `E = I`.
    pub fn standard(a: Mat, b: Mat, c: Mat, d: Mat, domain: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        Self::new(a, eye(n), b, c, d, domain)
    }

    /// Static gain (order zero).
    pub fn gain(d: Mat, domain: TimeDomain) -> Self {
        let (p, m) = d.shape();
        Self::from_parts_unchecked(zeros(0, 0), zeros(0, 0), zeros(0, m), zeros(p, 0), d, domain)
    }

    /// Builds a system whose realization formulas guarantee validity.
    pub(crate) fn from_parts_unchecked(a: Mat, e: Mat, b: Mat, c: Mat, d: Mat, domain: TimeDomain) -> Self {
        DescriptorSystem { a, e, b, c, d, domain }
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.a.nrows();
        let (p, m) = self.d.shape();
        let ok = self.a.shape() == (n, n)
            && self.e.shape() == (n, n)
            && self.b.shape() == (n, m)
            && self.c.shape() == (p, n);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "A {:?}, E {:?}, B {:?}, C {:?}, D {:?}",
                self.a.shape(),
                self.e.shape(),
                self.b.shape(),
                self.c.shape(),
                self.d.shape()
            )))
        }
    }

    /// State dimension `n`.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    /// `E == I` exactly.
    pub fn is_standard(&self) -> bool {
        self.e == eye(self.order())
    }

    /// Frequency response `C (A − λE)⁻¹ B + D`.
    pub fn eval(&self, lambda: Complex64) -> Result<CMat> {
        let d = to_complex(&self.d);
        if self.order() == 0 {
            return Ok(d);
        }
        let pencil = to_complex(&self.a) - to_complex(&self.e) * lambda;
        let x = solve_c(&pencil, &to_complex(&self.b)).ok_or(Error::EvalAtPole)?;
        Ok(to_complex(&self.c) * x + d)
    }

    /// System matrix pencil `S(λ) = [A − λE, B; −C, D]` as the pair `(M, N)`
    /// with `S(λ) = M − λN`. Its Schur complement is `G(λ)`.
    pub fn system_pencil(&self) -> (Mat, Mat) {
        let (p, m) = self.d.shape();
        let n = self.order();
        let mm = block2(&self.a, &self.b, &(-&self.c), &self.d);
        let nn = blkdiag(&self.e, &zeros(p, m));
        debug_assert_eq!(nn.shape(), (n + p, n + m));
        (mm, nn)
    }

    /// Magnitude estimate used to place probe points away from the spectrum.
    pub fn spectral_scale(&self) -> f64 {
        if self.order() == 0 {
            return 1.0;
        }
        let en = normf(&self.e);
        if en == 0.0 {
            1.0
        } else {
            normf(&self.a) / en
        }
    }

    /// Random complex probe points on the circle of radius
    /// `1 + spectral_scale`, kept away from the real axis.
    pub fn probe_points(&self, count: usize, rng: &mut impl Rng) -> Vec<Complex64> {
        probe_points(1.0 + self.spectral_scale(), count, rng)
    }
}

pub(crate) fn probe_points(radius: f64, count: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let mut th = rng.gen_range(0.1..(PI - 0.1));
            if rng.gen_bool(0.5) {
                th = -th;
            }
            Complex64::from_polar(radius, th)
        })
        .collect()
}

/// Randomized regularity test: `A − λ₀E` nonsingular for one of three real
/// shifts.
pub fn pencil_is_regular(a: &Mat, e: &Mat) -> bool {
    let n = a.nrows();
    if n == 0 {
        return true;
    }
    let scale = normf(a).max(normf(e));
    if scale == 0.0 {
        return false;
    }
    let tol = pencil_tol(n, n, scale);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e6a_11a7);
    (0..3).any(|_| {
        let shift: f64 = rng.gen_range(-1.0..1.0) * (1.0 + scale);
        rank_tol(&(a - e * shift), Some(tol)) == n
    })
}

/// Validating constructor.
pub fn make_system(a: Mat, e: Mat, b: Mat, c: Mat, d: Mat, domain: TimeDomain) -> Result<DescriptorSystem> {
    DescriptorSystem::new(a, e, b, c, d, domain)
}

/// Evaluates `G(λ)`.
pub fn eval_tfm(sys: &DescriptorSystem, lambda: Complex64) -> Result<CMat> {
    sys.eval(lambda)
}

/// Restricted similarity `(U(A − λE)V, UB, CV, D)`.
pub fn apply_similarity(sys: &DescriptorSystem, u: &Mat, v: &Mat) -> Result<DescriptorSystem> {
    let n = sys.order();
    if u.shape() != (n, n) || v.shape() != (n, n) {
        return Err(Error::DimensionMismatch("similarity transforms must be n x n".into()));
    }
    if n > 0 && (rank_tol(u, None) < n || rank_tol(v, None) < n) {
        return Err(Error::SingularTransform);
    }
    Ok(DescriptorSystem::from_parts_unchecked(
        u * &sys.a * v,
        u * &sys.e * v,
        u * &sys.b,
        &sys.c * v,
        sys.d.clone(),
        sys.domain,
    ))
}

/// Traits requested from [`random_system`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub improper: bool,
    pub stable: bool,
}

impl RandomSpec {
    pub const PROPER: RandomSpec = RandomSpec { improper: false, stable: false };
    pub const STABLE: RandomSpec = RandomSpec { improper: false, stable: true };
    pub const IMPROPER: RandomSpec = RandomSpec { improper: true, stable: false };
}

pub(crate) fn random_matrix(r: usize, c: usize, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

pub(crate) fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Mat {
    if n == 0 {
        return zeros(0, 0);
    }
    random_matrix(n, n, rng).qr().q()
}

/// Random standard matrix whose eigenvalues lie in the stability region.
pub(crate) fn random_stable_matrix(n: usize, domain: TimeDomain, rng: &mut impl Rng) -> Mat {
    let a = random_matrix(n, n, rng);
    if n == 0 {
        return a;
    }
    let eig = a.complex_eigenvalues();
    match domain {
        TimeDomain::Continuous => {
            let abscissa = eig.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            let shift = abscissa + rng.gen_range(0.3..1.0);
            a - eye(n) * shift
        }
        TimeDomain::Discrete => {
            let rho = eig.iter().map(|l| l.norm()).fold(0.0, f64::max).max(1e-3);
            a * (rng.gen_range(0.5..0.9) / rho)
        }
    }
}

/// Test-data generator. An improper request (needs `n ≥ 2`) embeds a
/// nilpotent `E` block of index two; all matrices are mixed by random
/// orthogonal transformations.
pub fn random_system(
    n: usize,
    m: usize,
    p: usize,
    domain: TimeDomain,
    spec: RandomSpec,
    rng: &mut impl Rng,
) -> DescriptorSystem {
    let ninf = if spec.improper && n >= 2 { 2 } else { 0 };
    let nf = n - ninf;
    let af = if spec.stable {
        random_stable_matrix(nf, domain, rng)
    } else {
        random_matrix(nf, nf, rng) * 1.5
    };
    let mut e = eye(n);
    let mut a = zeros(n, n);
    a.view_mut((0, 0), (nf, nf)).copy_from(&af);
    for k in nf..n {
        a[(k, k)] = 1.0;
        e[(k, k)] = 0.0;
    }
    if ninf == 2 {
        e[(nf, nf + 1)] = 1.0;
    }
    let b = random_matrix(n, m, rng);
    let c = random_matrix(p, n, rng);
    let d = random_matrix(p, m, rng);
    let u = random_orthogonal(n, rng);
    let v = random_orthogonal(n, rng);
    DescriptorSystem::from_parts_unchecked(&u * a * &v, &u * e * &v, u * b, c * v, d, domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: usize, c: usize, v: &[f64]) -> Mat {
        Mat::from_row_slice(r, c, v)
    }

    fn first_order() -> DescriptorSystem {
        make_system(m(1, 1, &[-1.0]), eye(1), eye(1), m(1, 1, &[-1.0]), zeros(1, 1), TimeDomain::Continuous).unwrap()
    }

    #[test]
    fn first_order_lag() {
        let g = first_order();
        let v = g.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // 1/(s+1) at s = 2j
        let s = Complex64::new(0.0, 2.0);
        let v = g.eval(s).unwrap();
        assert!((v[(0, 0)] - 1.0 / (s + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn static_gain_everywhere() {
        let g = make_system(zeros(0, 0), zeros(0, 0), zeros(0, 1), zeros(1, 0), m(1, 1, &[2.0]), TimeDomain::Continuous).unwrap();
        for lam in [Complex64::new(0.0, 0.0), Complex64::new(3.0, -1.0)] {
            assert_eq!(g.eval(lam).unwrap()[(0, 0)], Complex64::new(2.0, 0.0));
        }
    }

    #[test]
    fn singular_pencil_rejected() {
        let r = make_system(zeros(1, 1), zeros(1, 1), eye(1), eye(1), zeros(1, 1), TimeDomain::Continuous);
        assert_eq!(r.unwrap_err(), Error::SingularPencil);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = make_system(eye(2), eye(2), zeros(1, 1), zeros(1, 2), zeros(1, 1), TimeDomain::Continuous);
        assert!(matches!(r.unwrap_err(), Error::DimensionMismatch(_)));
    }

    #[test]
    fn pure_derivative() {
        let g = make_system(eye(2), m(2, 2, &[0.0, 1.0, 0.0, 0.0]), m(2, 1, &[0.0, 1.0]), m(1, 2, &[1.0, 0.0]), zeros(1, 1), TimeDomain::Continuous).unwrap();
        let v = g.eval(Complex64::new(3.0, 0.0)).unwrap();
        assert!((v[(0, 0)].re - 3.0).abs() < 1e-14 && v[(0, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn eval_at_pole_errors() {
        assert_eq!(first_order().eval(Complex64::new(-1.0, 0.0)).unwrap_err(), Error::EvalAtPole);
    }

    #[test]
    fn similarity_keeps_tfm() {
        let g = first_order();
        let g2 = apply_similarity(&g, &(eye(1) * 2.0), &eye(1)).unwrap();
        let v = g2.eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v[(0, 0)].re - 0.5).abs() < 1e-15);
        assert_eq!(apply_similarity(&g, &eye(1), &eye(1)).unwrap(), g);
        assert_eq!(apply_similarity(&g, &zeros(1, 1), &eye(1)).unwrap_err(), Error::SingularTransform);
    }

    #[test]
    fn eval_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_system(4, 2, 3, TimeDomain::Continuous, RandomSpec::IMPROPER, &mut rng);
        let lam = Complex64::new(0.3, 1.7);
        assert_eq!(g.eval(lam).unwrap(), g.eval(lam).unwrap());
    }
}

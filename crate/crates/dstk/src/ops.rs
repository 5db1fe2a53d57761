//! Realizations of the basic rational-matrix operations and couplings, plus
//! descriptor realization of explicitly given rational matrices.
//!
//! All formulas are written for `G(λ) = C (A − λE)⁻¹ B + D`.

use crate::analysis::normal_rank;
use crate::error::{Error, Result};
use crate::linalg::*;
use crate::system::{Config, DescriptorSystem, TimeDomain};
use num_complex::Complex64;

fn same_domain(a: &DescriptorSystem, b: &DescriptorSystem) -> Result<TimeDomain> {
    if a.domain == b.domain {
        Ok(a.domain)
    } else {
        Err(Error::DomainMismatch)
    }
}

/// Transposed TFM `Gᵀ(λ)` (dual system).
pub fn transpose_dual(sys: &DescriptorSystem) -> DescriptorSystem {
    DescriptorSystem::from_parts_unchecked(
        sys.a.transpose(),
        sys.e.transpose(),
        sys.c.transpose(),
        sys.b.transpose(),
        sys.d.transpose(),
        sys.domain,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMode {
    /// Inversion-free realization of order `n + m`.
    General,
    /// Order-`n` realization; requires an invertible `D`.
    DInverse,
}

/// Inverse TFM `G⁻¹(λ)`.
pub fn inverse(sys: &DescriptorSystem, mode: InverseMode) -> Result<DescriptorSystem> {
    let (p, m) = sys.d.shape();
    if p != m {
        return Err(Error::NotSquare);
    }
    let n = sys.order();
    match mode {
        InverseMode::General => {
            if normal_rank(sys, &Config::default()) != m {
                return Err(Error::NotInvertibleTfm);
            }
            let a = block2(&sys.a, &sys.b, &(-&sys.c), &sys.d);
            let e = blkdiag(&sys.e, &zeros(m, m));
            let b = vcat(&zeros(n, m), &eye(m));
            let c = hcat(&zeros(m, n), &eye(m));
            Ok(DescriptorSystem::from_parts_unchecked(a, e, b, c, zeros(m, m), sys.domain))
        }
        InverseMode::DInverse => {
            let di = inverse_matrix(&sys.d).ok_or(Error::SingularD)?;
            let bdi = &sys.b * &di;
            let a = &sys.a + &bdi * &sys.c;
            let out = DescriptorSystem::from_parts_unchecked(a, sys.e.clone(), -bdi, &di * &sys.c, di, sys.domain);
            if !crate::system::pencil_is_regular(&out.a, &out.e) {
                return Err(Error::NotInvertibleTfm);
            }
            Ok(out)
        }
    }
}

fn inverse_matrix(d: &Mat) -> Option<Mat> {
    crate::linalg::inverse(d)
}

/// Conjugate TFM: `Gᵀ(−s)` in continuous time, `Gᵀ(1/z)` in discrete time.
/// Discrete standard systems with invertible `A` use the order-`n`
/// realization; otherwise the order `n + m` pencil realization is built.
pub fn conjugate(sys: &DescriptorSystem) -> DescriptorSystem {
    let n = sys.order();
    let (p, m) = sys.d.shape();
    match sys.domain {
        TimeDomain::Continuous => DescriptorSystem::from_parts_unchecked(
            -sys.a.transpose(),
            sys.e.transpose(),
            sys.c.transpose(),
            -sys.b.transpose(),
            sys.d.transpose(),
            sys.domain,
        ),
        TimeDomain::Discrete => {
            if n == 0 {
                return DescriptorSystem::gain(sys.d.transpose(), sys.domain);
            }
            if sys.is_standard() {
                if let Some(ait) = inverse_matrix(&sys.a).map(|x| x.transpose()) {
                    let bt_ait = sys.b.transpose() * &ait;
                    let ct = sys.c.transpose();
                    return DescriptorSystem::from_parts_unchecked(
                        ait.clone(),
                        eye(n),
                        -&ait * &ct,
                        bt_ait.clone(),
                        sys.d.transpose() + bt_ait * ct,
                        sys.domain,
                    );
                }
            }
            conjugate_discrete_general(sys, n, p, m)
        }
    }
}

fn conjugate_discrete_general(sys: &DescriptorSystem, n: usize, p: usize, m: usize) -> DescriptorSystem {
    // pencil [Eᵀ − zAᵀ, 0; zBᵀ, I]
    let a = blkdiag(&sys.e.transpose(), &eye(m));
    let e = block2(&sys.a.transpose(), &zeros(n, m), &(-sys.b.transpose()), &zeros(m, m));
    let b = vcat(&sys.c.transpose(), &sys.d.transpose());
    let c = hcat(&zeros(m, n), &eye(m));
    DescriptorSystem::from_parts_unchecked(a, e, b, c, zeros(m, p), sys.domain)
}

/// Series coupling `G1·G2` (`G2` feeds `G1`).
pub fn series(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    let dom = same_domain(g1, g2)?;
    if g1.inputs() != g2.outputs() {
        return Err(Error::DimensionMismatch(format!(
            "series: G1 has {} inputs, G2 has {} outputs",
            g1.inputs(),
            g2.outputs()
        )));
    }
    let a = block2(&g1.a, &(-(&g1.b * &g2.c)), &zeros(g2.order(), g1.order()), &g2.a);
    let e = blkdiag(&g1.e, &g2.e);
    let b = vcat(&(&g1.b * &g2.d), &g2.b);
    let c = hcat(&g1.c, &(&g1.d * &g2.c));
    Ok(DescriptorSystem::from_parts_unchecked(a, e, b, c, &g1.d * &g2.d, dom))
}

/// Parallel coupling `G1 + G2`.
pub fn parallel(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    let dom = same_domain(g1, g2)?;
    if g1.d.shape() != g2.d.shape() {
        return Err(Error::DimensionMismatch(format!("parallel: {:?} vs {:?}", g1.d.shape(), g2.d.shape())));
    }
    Ok(DescriptorSystem::from_parts_unchecked(
        blkdiag(&g1.a, &g2.a),
        blkdiag(&g1.e, &g2.e),
        vcat(&g1.b, &g2.b),
        hcat(&g1.c, &g2.c),
        &g1.d + &g2.d,
        dom,
    ))
}

/// Difference `G1 − G2`.
pub fn difference(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    parallel(g1, &scale(g2, -1.0))
}

/// `k·G`.
pub fn scale(g: &DescriptorSystem, k: f64) -> DescriptorSystem {
    let mut out = g.clone();
    out.c *= k;
    out.d *= k;
    out
}

/// Column concatenation `[G1; G2]`.
pub fn concat_col(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    let dom = same_domain(g1, g2)?;
    if g1.inputs() != g2.inputs() {
        return Err(Error::DimensionMismatch("concat_col: input counts differ".into()));
    }
    Ok(DescriptorSystem::from_parts_unchecked(
        blkdiag(&g1.a, &g2.a),
        blkdiag(&g1.e, &g2.e),
        vcat(&g1.b, &g2.b),
        blkdiag(&g1.c, &g2.c),
        vcat(&g1.d, &g2.d),
        dom,
    ))
}

/// Row concatenation `[G1 G2]`.
pub fn concat_row(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    let dom = same_domain(g1, g2)?;
    if g1.outputs() != g2.outputs() {
        return Err(Error::DimensionMismatch("concat_row: output counts differ".into()));
    }
    Ok(DescriptorSystem::from_parts_unchecked(
        blkdiag(&g1.a, &g2.a),
        blkdiag(&g1.e, &g2.e),
        blkdiag(&g1.b, &g2.b),
        hcat(&g1.c, &g2.c),
        hcat(&g1.d, &g2.d),
        dom,
    ))
}

/// Diagonal stacking `diag(G1, G2)`.
pub fn diag_stack(g1: &DescriptorSystem, g2: &DescriptorSystem) -> Result<DescriptorSystem> {
    let dom = same_domain(g1, g2)?;
    Ok(DescriptorSystem::from_parts_unchecked(
        blkdiag(&g1.a, &g2.a),
        blkdiag(&g1.e, &g2.e),
        blkdiag(&g1.b, &g2.b),
        blkdiag(&g1.c, &g2.c),
        blkdiag(&g1.d, &g2.d),
        dom,
    ))
}

/// Selects rows (outputs) and columns (inputs) of a system.
pub fn select(sys: &DescriptorSystem, rows: &[usize], cols: &[usize]) -> DescriptorSystem {
    let c = Mat::from_fn(rows.len(), sys.order(), |i, j| sys.c[(rows[i], j)]);
    let b = Mat::from_fn(sys.order(), cols.len(), |i, j| sys.b[(i, cols[j])]);
    let d = Mat::from_fn(rows.len(), cols.len(), |i, j| sys.d[(rows[i], cols[j])]);
    DescriptorSystem::from_parts_unchecked(sys.a.clone(), sys.e.clone(), b, c, d, sys.domain)
}

/// A polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Drops leading coefficients below `1e-12 · max|coeff|`.
    fn trimmed(&self) -> Vec<f64> {
        let cmax = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut v = self.0.clone();
        while let Some(&last) = v.last() {
            if last.abs() <= 1e-12 * cmax || last == 0.0 {
                v.pop();
            } else {
                break;
            }
        }
        v
    }
}

/// Rational matrix given entrywise as numerator/denominator pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrixData {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(Poly, Poly)>>,
}

impl RationalMatrixData {
    pub fn new(entries: Vec<Vec<(Vec<f64>, Vec<f64>)>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let entries = entries
            .into_iter()
            .map(|r| r.into_iter().map(|(n, d)| (Poly(n), Poly(d))).collect())
            .collect();
        RationalMatrixData { rows, cols, entries }
    }

    /// Direct entrywise evaluation.
    pub fn eval(&self, x: Complex64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| {
            let (n, d) = &self.entries[i][j];
            n.eval(x) / d.eval(x)
        })
    }
}

/// Quotient and remainder of `num / den` (ascending coefficients, `den`
/// with nonzero leading coefficient).
fn poly_divide(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (Vec::new(), rem);
    }
    let lead = den[dn];
    let mut quot = vec![0.0; rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let coef = rem[k + dn] / lead;
        quot[k] = coef;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= coef * dc;
        }
    }
    rem.truncate(dn);
    (quot, rem)
}

fn realize_entry(num: &Poly, den: &Poly, i: usize, j: usize, domain: TimeDomain) -> Result<DescriptorSystem> {
    let den_t = den.trimmed();
    if den_t.is_empty() {
        return Err(Error::ZeroDenominator(i, j));
    }
    let num_t = num.trimmed();
    let (quot, rem) = poly_divide(&num_t, &den_t);
    let d0 = quot.first().copied().unwrap_or(0.0);

    // strictly proper part: controllable companion form
    let k = den_t.len() - 1;
    let lead = den_t[k];
    let proper = if k == 0 || rem.iter().all(|&r| r == 0.0) {
        DescriptorSystem::gain(Mat::from_element(1, 1, d0), domain)
    } else {
        let mut a = zeros(k, k);
        for r in 0..k - 1 {
            a[(r, r + 1)] = 1.0;
        }
        for c in 0..k {
            a[(k - 1, c)] = -den_t[c] / lead;
        }
        let mut b = zeros(k, 1);
        b[(k - 1, 0)] = 1.0;
        let c = Mat::from_fn(1, k, |_, c| -rem.get(c).copied().unwrap_or(0.0) / lead);
        DescriptorSystem::from_parts_unchecked(a, eye(k), b, c, Mat::from_element(1, 1, d0), domain)
    };

    // strict polynomial part p1 λ + ... + pq λ^q through the nilpotent block I − λN
    let q = quot.len().saturating_sub(1);
    if q == 0 || quot[1..].iter().all(|&c| c == 0.0) {
        return Ok(proper);
    }
    let np = q + 1;
    let mut nil = zeros(np, np);
    for r in 0..np - 1 {
        nil[(r, r + 1)] = 1.0;
    }
    let mut bp = zeros(np, 1);
    bp[(np - 1, 0)] = 1.0;
    let cp = Mat::from_fn(1, np, |_, c| if c < q { quot[q - c] } else { 0.0 });
    let pol = DescriptorSystem::from_parts_unchecked(eye(np), nil, bp, cp, zeros(1, 1), domain);
    parallel(&proper, &pol)
}

/// Descriptor realization of a rational matrix, built entrywise (proper part
/// in companion form, polynomial part as a nilpotent pencil block) and
/// assembled by concatenation. The result is generally not minimal.
pub fn realize_rational(data: &RationalMatrixData, domain: TimeDomain) -> Result<DescriptorSystem> {
    if data.entries.len() != data.rows || data.entries.iter().any(|r| r.len() != data.cols) {
        return Err(Error::DimensionMismatch("ragged rational matrix".into()));
    }
    let mut rows: Vec<DescriptorSystem> = Vec::with_capacity(data.rows);
    for (i, row) in data.entries.iter().enumerate() {
        let mut acc = DescriptorSystem::gain(zeros(1, 0), domain);
        for (j, (n, d)) in row.iter().enumerate() {
            let ent = realize_entry(n, d, i, j, domain)?;
            acc = concat_row(&acc, &ent)?;
        }
        rows.push(acc);
    }
    let mut out = DescriptorSystem::gain(zeros(0, data.cols), domain);
    for r in rows {
        out = concat_col(&out, &r)?;
    }
    Ok(out)
}

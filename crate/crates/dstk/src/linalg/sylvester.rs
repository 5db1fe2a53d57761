//! Generalized Sylvester and Lyapunov solvers via the Kronecker-product
//! linear system (intended for the small orders this crate targets).

use super::basic::*;
use super::qz::gschur;
use crate::error::{Error, Result};
use crate::system::TimeDomain;

/// Solution `(L, R)` of the block-separating pair
/// `A11·R − L·A22 = −A12`, `E11·R − L·E22 = −E12`.
#[derive(Debug, Clone)]
pub struct GsylvSolution {
    pub l: Mat,
    pub r: Mat,
}

/// LU solve that reports numerical singularity through the pivot ratio.
pub(crate) fn lu_solve_checked(a: &Mat, b: &Mat, ratio: f64) -> Option<Mat> {
    if a.nrows() == 0 {
        return Some(Mat::zeros(0, b.ncols()));
    }
    let lu = a.clone().full_piv_lu();
    let u = lu.u();
    let d: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].abs()).collect();
    let dmax = d.iter().cloned().fold(0.0, f64::max);
    let dmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= ratio * dmax {
        return None;
    }
    let x = lu.solve(b)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}

pub fn gsylv_separation(
    a11: &Mat,
    a12: &Mat,
    a22: &Mat,
    e11: &Mat,
    e12: &Mat,
    e22: &Mat,
) -> Result<GsylvSolution> {
    let n1 = a11.nrows();
    let n2 = a22.nrows();
    if a11.shape() != (n1, n1)
        || e11.shape() != (n1, n1)
        || a22.shape() != (n2, n2)
        || e22.shape() != (n2, n2)
        || a12.shape() != (n1, n2)
        || e12.shape() != (n1, n2)
    {
        return Err(Error::DimensionMismatch("gsylv_separation blocks".into()));
    }
    let k = n1 * n2;
    if k == 0 {
        return Ok(GsylvSolution { l: Mat::zeros(n1, n2), r: Mat::zeros(n1, n2) });
    }
    let i1 = eye(n1);
    let i2 = eye(n2);
    let mut sys = Mat::zeros(2 * k, 2 * k);
    sys.view_mut((0, 0), (k, k)).copy_from(&i2.kronecker(a11));
    sys.view_mut((0, k), (k, k)).copy_from(&(-a22.transpose().kronecker(&i1)));
    sys.view_mut((k, 0), (k, k)).copy_from(&i2.kronecker(e11));
    sys.view_mut((k, k), (k, k)).copy_from(&(-e22.transpose().kronecker(&i1)));
    let mut rhs = Mat::zeros(2 * k, 1);
    for c in 0..n2 {
        for r in 0..n1 {
            rhs[(c * n1 + r, 0)] = -a12[(r, c)];
            rhs[(k + c * n1 + r, 0)] = -e12[(r, c)];
        }
    }
    let x = lu_solve_checked(&sys, &rhs, 1e-13).ok_or(Error::SpectraNotDisjoint)?;
    let r = Mat::from_fn(n1, n2, |i, j| x[(j * n1 + i, 0)]);
    let l = Mat::from_fn(n1, n2, |i, j| x[(k + j * n1 + i, 0)]);
    Ok(GsylvSolution { l, r })
}

/// Generalized Lyapunov equation:
/// continuous `A X Eᵀ + E X Aᵀ + W = 0`, discrete `A X Aᵀ − E X Eᵀ + W = 0`.
pub fn glyap(a: &Mat, e: &Mat, wm: &Mat, domain: TimeDomain) -> Result<Mat> {
    let n = a.nrows();
    if a.shape() != (n, n) || e.shape() != (n, n) || wm.shape() != (n, n) {
        return Err(Error::DimensionMismatch("glyap operands".into()));
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let gs = gschur(a, e).map_err(|_| Error::UnstablePair)?;
    let stable = gs.eigen_values().iter().all(|ev| match ev {
        None => false,
        Some(l) => match domain {
            TimeDomain::Continuous => l.re < 0.0,
            TimeDomain::Discrete => l.norm() < 1.0,
        },
    });
    if !stable {
        return Err(Error::UnstablePair);
    }
    let op = match domain {
        TimeDomain::Continuous => e.kronecker(a) + a.kronecker(e),
        TimeDomain::Discrete => a.kronecker(a) - e.kronecker(e),
    };
    let rhs = Mat::from_column_slice(n * n, 1, (-wm).as_slice());
    let x = lu_solve_checked(&op, &rhs, 1e-15).ok_or(Error::UnstablePair)?;
    let x = Mat::from_column_slice(n, n, x.as_slice());
    Ok((&x + x.transpose()) * 0.5)
}

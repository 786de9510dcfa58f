use itertools::Itertools;

use super::{Complex, Matrix, PrecisionContext, Real};
use crate::error::{Error, Result};

/// Least-squares solution of `A x ~ b`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: Vec<Complex>,
    pub residual_norm: Real,
}

/// Householder QR least squares. Fails when a diagonal entry of R falls
/// below `tol * max |R_ii|`.
pub fn lsq_solve(a: &Matrix, b: &[Complex], ctx: &PrecisionContext) -> Result<LeastSquares> {
    let (m, n) = (a.rows(), a.cols());
    if m < n || n == 0 {
        return Err(Error::contract(format!("lsq_solve needs rows >= cols >= 1, got {m}x{n}")));
    }
    if b.len() != m {
        return Err(Error::contract("right-hand side length differs from row count"));
    }
    let bits = ctx.bits();
    let mut r = a.with_bits(bits);
    let mut y: Vec<Complex> = b.iter().map(|z| z.with_bits(bits)).collect();
    let two = Real::from_i64(2, bits);

    for k in 0..n {
        let mut norm2 = Real::zero(bits);
        for i in k..m {
            norm2 += r[(i, k)].norm_sqr();
        }
        if norm2.is_zero() {
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = r[(k, k)].clone();
        let unit = if x0.is_zero() { Complex::one(bits) } else { &x0 / &x0.abs() };
        let mut v: Vec<Complex> = (k..m).map(|i| r[(i, k)].clone()).collect();
        v[0] = &v[0] + &unit.scale(&norm);
        let vn = v.iter().map(Complex::norm_sqr).fold(Real::zero(bits), |acc, t| acc + t).sqrt();
        if vn.is_zero() {
            continue;
        }
        for z in &mut v {
            *z = &*z / &vn;
        }
        for j in k..n {
            let mut s = Complex::zero(bits);
            for (t, vi) in v.iter().enumerate() {
                s += &vi.conj() * &r[(k + t, j)];
            }
            let s = s.scale(&two);
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] -= vi * &s;
            }
        }
        let mut s = Complex::zero(bits);
        for (t, vi) in v.iter().enumerate() {
            s += &vi.conj() * &y[k + t];
        }
        let s = s.scale(&two);
        for (t, vi) in v.iter().enumerate() {
            y[k + t] -= vi * &s;
        }
    }

    let diag: Vec<Real> = (0..n).map(|i| r[(i, i)].abs()).collect();
    let rmax = diag.iter().cloned().fold(Real::zero(bits), Real::max);
    let floor = &ctx.tol() * &rmax;
    if let Some((column, _)) = diag.iter().find_position(|d| **d <= floor) {
        return Err(Error::RankDeficient { column });
    }

    let mut x = vec![Complex::zero(bits); n];
    for i in (0..n).rev() {
        let mut acc = y[i].clone();
        for j in i + 1..n {
            acc -= &r[(i, j)] * &x[j];
        }
        x[i] = &acc / &r[(i, i)];
    }

    let ax = a.with_bits(bits).matvec(&x)?;
    let mut res = Real::zero(bits);
    for (lhs, rhs) in ax.iter().zip(b) {
        res += (lhs - rhs).norm_sqr();
    }
    Ok(LeastSquares { x, residual_norm: res.sqrt() })
}

use itertools::Itertools;

use super::{Complex, Matrix, PrecisionContext};
use crate::error::{Error, Result};

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_mp(a: &Matrix, ctx: &PrecisionContext) -> Result<Complex> {
    if !a.is_square() {
        return Err(Error::contract("determinant of a non-square matrix"));
    }
    let n = a.rows();
    let bits = ctx.bits();
    let mut m = a.with_bits(bits);
    let mut det = Complex::one(bits);
    for k in 0..n {
        let (piv, _) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite entries"))
            .expect("non-empty pivot range");
        if m[(piv, k)].is_zero() {
            return Ok(Complex::zero(bits));
        }
        if piv != k {
            for j in 0..n {
                m.swap((piv, j), (k, j));
            }
            det = -det;
        }
        let p = m[(k, k)].clone();
        det *= &p;
        for i in k + 1..n {
            let f = &m[(i, k)] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let upd = &f * &m[(k, j)];
                m[(i, j)] -= &upd;
            }
        }
    }
    Ok(det)
}

/// Sum of the determinants of all principal submatrices of the given order,
/// i.e. the elementary symmetric function `e_order` of the eigenvalues.
pub fn principal_minor_sum(a: &Matrix, order: usize, ctx: &PrecisionContext) -> Result<Complex> {
    if !a.is_square() {
        return Err(Error::contract("principal minors of a non-square matrix"));
    }
    let k = a.rows();
    if order == 0 || order > k {
        return Err(Error::contract(format!("minor order {order} outside 1..={k}")));
    }
    let mut acc = Complex::zero(ctx.bits());
    for idx in (0..k).combinations(order) {
        acc += det_mp(&a.principal_submatrix(&idx), ctx)?;
    }
    Ok(acc)
}

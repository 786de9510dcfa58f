//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Schur rotation to the resulting
//! real 2x2 block. Absolute accuracy of every eigenvalue is of the order of
//! the working roundoff times `||A||`, which keeps tiny positive eigenvalues
//! resolvable from exact zeros.

use super::{Complex, Matrix, PrecisionContext, Real};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;

/// Spectral decomposition `A = V diag(values) V^H` with ascending values.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<Real>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

pub fn hermitian_eig(a: &Matrix, ctx: &PrecisionContext) -> Result<HermitianEig> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::contract("hermitian_eig needs a non-empty square matrix"));
    }
    if !a.is_hermitian() {
        return Err(Error::contract("hermitian_eig input is not Hermitian"));
    }
    let n = a.rows();
    let bits = ctx.bits();
    let mut m = a.with_bits(bits);
    let mut v = Matrix::identity(n, bits);

    let frob = m.frobenius();
    // Rotate any pivot above eps*||A||_F; the sweep is converged once none remain.
    let pivot_tol = &ctx.eps() * &frob;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].abs() > pivot_tol {
                    rotate(&mut m, &mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps >= MAX_SWEEPS {
            let off = off_diagonal_norm(&m);
            if off > &pivot_tol * n as i64 {
                return Err(Error::NoConvergence {
                    solver: "jacobi",
                    iterations: sweeps,
                    detail: format!("off-diagonal norm {}", off.to_sci_string(6)),
                });
            }
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[(i, i)].re.clone()).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])].clone());
    Ok(HermitianEig { values, vectors, sweeps })
}

fn off_diagonal_norm(m: &Matrix) -> Real {
    let mut acc = Real::zero(m.bits());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)].clone();
    let r = apq.abs();
    // e^{-i phi} where a_pq = r e^{i phi}
    let phase = (&apq / &r).conj();
    let app = m[(p, p)].re.clone();
    let aqq = m[(q, q)].re.clone();

    let tau = (&aqq - &app) / (&r * 2);
    let one = Real::one(r.bits());
    let t = if tau.is_zero() {
        one.clone()
    } else {
        let t = &one / (tau.abs() + (&one + &tau * &tau).sqrt());
        if tau.is_negative() {
            -t
        } else {
            t
        }
    };
    let c = &one / (&one + &t * &t).sqrt();
    let s = &t * &c;
    let s_phase = phase.scale(&s);
    let c_phase = phase.scale(&c);

    // Columns: W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)].clone();
        let akq = m[(k, q)].clone();
        let new_kp = akp.scale(&c) - &s_phase * &akq;
        let new_kq = akp.scale(&s) + &c_phase * &akq;
        m[(p, k)] = new_kp.conj();
        m[(q, k)] = new_kq.conj();
        m[(k, p)] = new_kp;
        m[(k, q)] = new_kq;
    }
    let tr = &t * &r;
    m[(p, p)] = Complex::from_real(&app - &tr);
    m[(q, q)] = Complex::from_real(&aqq + &tr);
    m[(p, q)] = Complex::zero(r.bits());
    m[(q, p)] = Complex::zero(r.bits());

    for k in 0..n {
        let vkp = v[(k, p)].clone();
        let vkq = v[(k, q)].clone();
        v[(k, p)] = vkp.scale(&c) - &s_phase * &vkq;
        v[(k, q)] = vkp.scale(&s) + &c_phase * &vkq;
    }
}

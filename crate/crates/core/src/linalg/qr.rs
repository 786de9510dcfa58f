//! Eigenvalues of a general complex matrix: balancing, Householder
//! reduction to upper Hessenberg form, then single-shift QR sweeps with a
//! Wilkinson shift and relative deflation.

use super::{Complex, Matrix, PrecisionContext, Real};
use crate::error::{Error, Result};

const MAX_ITER_PER_EIGENVALUE: usize = 40;

pub fn general_eigvals(a: &Matrix, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::contract("general_eigvals needs a non-empty square matrix"));
    }
    let mut h = a.with_bits(ctx.bits());
    balance(&mut h);
    hessenberg(&mut h);
    hessenberg_qr(h, ctx)
}

/// Parlett-Reinsch balancing with power-of-two scalings (exact in binary).
pub fn balance(m: &mut Matrix) {
    let n = m.rows();
    let bits = m.bits();
    let two = Real::from_i64(2, bits);
    let four = Real::from_i64(4, bits);
    let cutoff = Real::parse("0.95", bits).expect("literal");
    for _ in 0..200 {
        let mut converged = true;
        for i in 0..n {
            let mut c = Real::zero(bits);
            let mut r = Real::zero(bits);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1();
                    r += m[(i, j)].l1();
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let s = &c + &r;
            let mut f = Real::one(bits);
            let mut g = &r / &two;
            while c < g {
                f *= &two;
                c *= &four;
            }
            g = &r * &two;
            while c >= g {
                f /= &two;
                c /= &four;
            }
            if (&c + &r) / &f < &cutoff * &s {
                converged = false;
                let inv = Real::one(bits) / &f;
                for j in 0..n {
                    m[(i, j)] = m[(i, j)].scale(&inv);
                    m[(j, i)] = m[(j, i)].scale(&f);
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// In-place unitary similarity to upper Hessenberg form.
pub fn hessenberg(m: &mut Matrix) {
    let n = m.rows();
    let bits = m.bits();
    for k in 0..n.saturating_sub(2) {
        let mut tail = Real::zero(bits);
        for i in k + 2..n {
            tail += m[(i, k)].norm_sqr();
        }
        if tail.is_zero() {
            continue;
        }
        let x0 = m[(k + 1, k)].clone();
        let norm = (&tail + x0.norm_sqr()).sqrt();
        let unit = if x0.is_zero() { Complex::one(bits) } else { &x0 / &x0.abs() };
        // v = x + e^{i arg x0} ||x|| e1, normalised to unit length
        let mut v: Vec<Complex> = (k + 1..n).map(|i| m[(i, k)].clone()).collect();
        v[0] = &v[0] + &unit.scale(&norm);
        let mut vn = Real::zero(bits);
        for z in &v {
            vn += z.norm_sqr();
        }
        let vn = vn.sqrt();
        for z in &mut v {
            *z = &*z / &vn;
        }
        // left: (I - 2 v v^H) M
        for j in 0..n {
            let mut s = Complex::zero(bits);
            for (t, vi) in v.iter().enumerate() {
                s += &vi.conj() * &m[(k + 1 + t, j)];
            }
            let s2 = s.scale(&Real::from_i64(2, bits));
            for (t, vi) in v.iter().enumerate() {
                let upd = vi * &s2;
                m[(k + 1 + t, j)] -= &upd;
            }
        }
        // right: M (I - 2 v v^H)
        for i in 0..n {
            let mut s = Complex::zero(bits);
            for (t, vi) in v.iter().enumerate() {
                s += &m[(i, k + 1 + t)] * vi;
            }
            let s2 = s.scale(&Real::from_i64(2, bits));
            for (t, vi) in v.iter().enumerate() {
                let upd = &s2 * &vi.conj();
                m[(i, k + 1 + t)] -= &upd;
            }
        }
        for i in k + 2..n {
            m[(i, k)] = Complex::zero(bits);
        }
    }
}

struct Givens {
    c: Real,
    s: Complex,
}

impl Givens {
    /// Rotation with `[c, s; -conj(s), c] [a; b] = [r; 0]`.
    fn new(a: &Complex, b: &Complex) -> Givens {
        let bits = a.bits().max(b.bits());
        if b.is_zero() {
            return Givens { c: Real::one(bits), s: Complex::zero(bits) };
        }
        if a.is_zero() {
            return Givens { c: Real::zero(bits), s: &b.conj() / &b.abs() };
        }
        let na = a.abs();
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let c = &na / &norm;
        let s = &(a / &na) * &b.conj() / &norm;
        Givens { c, s }
    }
}

fn hessenberg_qr(mut h: Matrix, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let n = h.rows();
    let bits = h.bits();
    let tol = ctx.tol();
    let norm = h.max_abs();
    let mut eig: Vec<Complex> = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    while hi >= 0 {
        let hi_u = hi as usize;
        // Locate the start of the unreduced block ending at hi.
        let mut l = hi_u;
        while l > 0 {
            let mut scale = h[(l, l)].l1() + h[(l - 1, l - 1)].l1();
            if scale.is_zero() {
                scale = norm.clone();
            }
            if h[(l, l - 1)].l1() <= &tol * &scale {
                h[(l, l - 1)] = Complex::zero(bits);
                break;
            }
            l -= 1;
        }
        if l == hi_u {
            eig.push(h[(hi_u, hi_u)].clone());
            hi -= 1;
            iter = 0;
            continue;
        }
        if iter >= MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                solver: "hessenberg qr",
                iterations: total,
                detail: format!("unreduced block of size {}", hi_u - l + 1),
            });
        }
        iter += 1;
        total += 1;

        let mu = if iter.is_multiple_of(11) {
            // exceptional shift
            &h[(hi_u, hi_u)] + &Complex::from_real(h[(hi_u, hi_u - 1)].l1() * 3 / 4)
        } else {
            wilkinson_shift(&h, hi_u)
        };

        for i in l..=hi_u {
            h[(i, i)] -= &mu;
        }
        let mut rots = Vec::with_capacity(hi_u - l);
        for k in l..hi_u {
            let g = Givens::new(&h[(k, k)], &h[(k + 1, k)]);
            for j in k..=hi_u {
                let x = h[(k, j)].clone();
                let y = h[(k + 1, j)].clone();
                h[(k, j)] = x.scale(&g.c) + &g.s * &y;
                h[(k + 1, j)] = y.scale(&g.c) - &g.s.conj() * &x;
            }
            h[(k + 1, k)] = Complex::zero(bits);
            rots.push(g);
        }
        for (offset, g) in rots.iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 1).min(hi_u) {
                let x = h[(i, k)].clone();
                let y = h[(i, k + 1)].clone();
                h[(i, k)] = x.scale(&g.c) + &y * &g.s.conj();
                h[(i, k + 1)] = y.scale(&g.c) - &x * &g.s;
            }
        }
        for i in l..=hi_u {
            h[(i, i)] += &mu;
        }
    }
    eig.reverse();
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &Matrix, hi: usize) -> Complex {
    let a = &h[(hi - 1, hi - 1)];
    let b = &h[(hi - 1, hi)];
    let c = &h[(hi, hi - 1)];
    let d = &h[(hi, hi)];
    let bits = h.bits();
    let half = Real::ratio(1, 2, bits);
    let mean = (a + d).scale(&half);
    let diff = (a - d).scale(&half);
    let disc = (&(&diff * &diff) + &(b * c)).sqrt();
    let r1 = &mean + &disc;
    let r2 = &mean - &disc;
    if (&r1 - d).l1() <= (&r2 - d).l1() {
        r1
    } else {
        r2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn cx(ctx: &PrecisionContext, re: i64, im: i64) -> Complex {
        Complex::new(ctx.int(re), ctx.int(im))
    }

    fn contains(set: &[Complex], z: &Complex, tol: &Real) -> bool {
        set.iter().any(|w| (w - z).abs() < *tol)
    }

    #[test]
    fn diagonal_spectrum() {
        let ctx = ctx();
        let m = Matrix::diagonal(&[cx(&ctx, 2, 0), cx(&ctx, 0, 3)]);
        let e = general_eigvals(&m, &ctx).unwrap();
        assert!(contains(&e, &cx(&ctx, 2, 0), &ctx.tol()));
        assert!(contains(&e, &cx(&ctx, 0, 3), &ctx.tol()));
    }

    #[test]
    fn rotation_matrix() {
        let ctx = ctx();
        let m = Matrix::from_rows(vec![vec![cx(&ctx, 0, 0), cx(&ctx, -1, 0)], vec![cx(&ctx, 1, 0), cx(&ctx, 0, 0)]])
            .unwrap();
        let e = general_eigvals(&m, &ctx).unwrap();
        assert_eq!(e.len(), 2);
        assert!(contains(&e, &cx(&ctx, 0, 1), &ctx.tol()));
        assert!(contains(&e, &cx(&ctx, 0, -1), &ctx.tol()));
    }

    #[test]
    fn badly_scaled_similarity_is_balanced() {
        // D^{-1} diag(1, 2, 3) D with wildly different scales plus coupling
        let ctx = ctx();
        let b = ctx.bits();
        let big = Real::pow10(30, b);
        let small = Real::pow10(-30, b);
        let mut m = Matrix::diagonal(&[cx(&ctx, 1, 0), cx(&ctx, 2, 0), cx(&ctx, 3, 0)]);
        m[(0, 1)] = Complex::from_real(big.clone());
        m[(0, 2)] = Complex::from_real(big);
        m[(1, 2)] = Complex::from_real(small.clone());
        let e = general_eigvals(&m, &ctx).unwrap();
        for k in 1..=3 {
            assert!(contains(&e, &cx(&ctx, k, 0), &ctx.tol()));
        }
    }

    #[test]
    fn hessenberg_is_similarity() {
        let ctx = ctx();
        let m = Matrix::from_fn(4, 4, |i, j| cx(&ctx, (i * 3 + j * 5) as i64 % 7 - 3, (i + 2 * j) as i64 % 3 - 1));
        let mut h = m.clone();
        hessenberg(&mut h);
        for i in 2..4 {
            for j in 0..i - 1 {
                assert!(h[(i, j)].is_zero());
            }
        }
        assert!((&h.trace() - &m.trace()).abs() < ctx.tol());
    }
}

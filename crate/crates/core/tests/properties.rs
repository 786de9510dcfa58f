use hi_spectra::inversion::build_matrices;
use hi_spectra::lambda::build_r;
use hi_spectra::linalg::{det_mp, general_eigvals, hermitian_eig, Complex, Matrix, PrecisionContext, Real};
use hi_spectra::signal::{alias_shift, synthesize, SampledSignal, SpectralModel};
use proptest::prelude::*;

const P: u32 = 40;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(P).unwrap()
}

fn model(freqs: &[f64], amps: &[f64], ctx: &PrecisionContext) -> SpectralModel {
    let bits = ctx.bits();
    SpectralModel::new(
        freqs.iter().map(|w| Real::from_f64(*w, bits)).collect(),
        amps.iter().map(|d| Real::from_f64(*d, bits)).collect(),
    )
    .unwrap()
}

fn lines(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max).prop_flat_map(|k| (prop::collection::vec(-50.0..50.0f64, k), prop::collection::vec(0.01..2.0f64, k)))
}

fn complex_matrix(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
}

fn to_matrix(n: usize, entries: &[(f64, f64)], bits: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        let (re, im) = entries[i * n + j];
        Complex::new(Real::from_f64(re, bits), Real::from_f64(im, bits))
    })
}

fn hermitian(n: usize, entries: &[(f64, f64)], bits: usize) -> Matrix {
    let a = to_matrix(n, entries, bits);
    let mut h = Matrix::zeros(n, n, bits);
    for i in 0..n {
        for j in 0..n {
            let z = &a[(i, j)] + &a[(j, i)].conj();
            h[(i, j)] = z;
        }
        h[(i, i)] = Complex::from_real(h[(i, i)].re.clone());
    }
    h
}

fn max_sample_diff(a: &SampledSignal, b: &SampledSignal) -> Real {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).abs())
        .fold(Real::zero(a.dt().bits()), Real::max)
}

fn sorted_desc(mut v: Vec<Real>) -> Vec<Real> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_aliasing_leaves_samples_unchanged((w, d) in lines(4), n in 1usize..12, m in -3i64..=3) {
        let ctx = ctx();
        let t = ctx.parse("0.7").unwrap();
        let base = model(&w, &d, &ctx);
        let a = synthesize(&base, n, &t, &ctx).unwrap();
        let b = synthesize(&alias_shift(&base, a.dt(), m), n, &t, &ctx).unwrap();
        let tol = ctx.tol() * (w.len() * n) as i64 * (1 + m.abs());
        prop_assert!(max_sample_diff(&a, &b) <= tol);
    }

    #[test]
    fn negative_indices_conjugate_and_s_is_hermitian((w, d) in lines(4), n in 1usize..10) {
        let ctx = ctx();
        let sig = synthesize(&model(&w, &d, &ctx), n, &ctx.one(), &ctx).unwrap();
        for k in 0..=n as isize {
            prop_assert_eq!(sig.sample(-k), sig.sample(k).conj());
        }
        let km = build_matrices(&sig, n, &ctx).unwrap();
        prop_assert!(km.s().is_hermitian());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(km.s_entry(i, j), &sig.sample(j as isize - i as isize));
            }
        }
    }

    #[test]
    fn synthesis_is_linear_in_the_lines((w1, d1) in lines(3), (w2, d2) in lines(3), n in 1usize..10) {
        let ctx = ctx();
        prop_assume!(w1.iter().all(|a| w2.iter().all(|b| a != b)));
        let t = ctx.parse("0.3").unwrap();
        let a = model(&w1, &d1, &ctx);
        let b = model(&w2, &d2, &ctx);
        let joint = synthesize(&a.union(&b).unwrap(), n, &t, &ctx).unwrap();
        let sa = synthesize(&a, n, &t, &ctx).unwrap();
        let sb = synthesize(&b, n, &t, &ctx).unwrap();
        let tol = ctx.tol() * (w1.len() + w2.len()) as i64 * 2;
        for ((j, x), y) in joint.samples().iter().zip(sa.samples()).zip(sb.samples()) {
            prop_assert!((j - &(x + y)).abs() <= tol);
        }
    }

    #[test]
    fn negated_frequencies_conjugate_samples((w, d) in lines(4), n in 1usize..10) {
        let ctx = ctx();
        let t = ctx.parse("0.9").unwrap();
        let m = model(&w, &d, &ctx);
        let a = synthesize(&m, n, &t, &ctx).unwrap();
        let b = synthesize(&m.negated(), n, &t, &ctx).unwrap();
        let tol = ctx.tol() * w.len() as i64;
        for (x, y) in a.samples().iter().zip(b.samples()) {
            prop_assert!((&x.conj() - y).abs() <= tol);
        }
    }

    #[test]
    fn jacobi_reconstructs_hermitian_input(entries in complex_matrix(5), n in 2usize..=5) {
        let ctx = ctx();
        let a = hermitian(n, &entries[..n * n], ctx.bits());
        let eig = hermitian_eig(&a, &ctx).unwrap();
        let lambda = Matrix::diagonal(&eig.values.iter().cloned().map(Complex::from_real).collect::<Vec<_>>());
        let av = a.matmul(&eig.vectors).unwrap();
        let vl = eig.vectors.matmul(&lambda).unwrap();
        let tol = ctx.tol() * (n * n) as i64 * a.max_abs();
        prop_assert!(av.sub(&vl).unwrap().max_abs() <= tol);
        let gram = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
        let unit = Matrix::identity(n, ctx.bits());
        prop_assert!(gram.sub(&unit).unwrap().max_abs() <= ctx.tol() * (n * n) as i64);
        prop_assert!(eig.values.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn spectrum_is_invariant_under_unitary_similarity(
        entries in complex_matrix(4),
        rot in complex_matrix(4),
        n in 2usize..=4,
    ) {
        let ctx = ctx();
        let bits = ctx.bits();
        let a = hermitian(n, &entries[..n * n], bits);
        let q = hermitian_eig(&hermitian(n, &rot[..n * n], bits), &ctx).unwrap().vectors;
        let raw = q.adjoint().matmul(&a).unwrap().matmul(&q).unwrap();
        // Rounding leaves Q^H A Q Hermitian only up to the last bit.
        let half = Real::ratio(1, 2, bits);
        let mut b = Matrix::from_fn(n, n, |i, j| (&raw[(i, j)] + &raw[(j, i)].conj()).scale(&half));
        for i in 0..n {
            b[(i, i)] = Complex::from_real(b[(i, i)].re.clone());
        }
        let ea = hermitian_eig(&a, &ctx).unwrap().values;
        let eb = hermitian_eig(&b, &ctx).unwrap().values;
        let tol = ctx.tol() * (n * n) as i64 * a.max_abs() * 2;
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() <= tol);
        }
    }

    #[test]
    fn determinant_equals_eigenvalue_product(entries in complex_matrix(5), n in 1usize..=5) {
        let ctx = ctx();
        let a = to_matrix(n, &entries[..n * n], ctx.bits());
        let det = det_mp(&a, &ctx).unwrap();
        let eig = general_eigvals(&a, &ctx).unwrap();
        let prod = eig.iter().fold(Complex::one(ctx.bits()), |acc, l| &acc * l);
        let trace: Complex = eig.iter().fold(Complex::zero(ctx.bits()), |acc, l| &acc + l);
        let scale = a.max_abs().max(ctx.one());
        let tol = ctx.tol() * (n * n * n) as i64 * scale.powi(n);
        prop_assert!((&det - &prod).abs() <= tol);
        prop_assert!((&a.trace() - &trace).abs() <= ctx.tol() * (n * n * n) as i64 * scale);
    }

    #[test]
    fn gram_matrix_carries_nonzero_spectrum_of_s(
        w in prop::collection::vec(0.0..300.0f64, 1..=3),
        extra in 0usize..3,
    ) {
        let ctx = ctx();
        let k = w.len();
        prop_assume!(w.iter().enumerate().all(|(i, a)| w[i + 1..].iter().all(|b| (a - b).abs() > 20.0)));
        let n = k + extra;
        let t = ctx.parse("0.01").unwrap();
        let m = model(&w, &vec![1.0; k], &ctx);
        let sig = synthesize(&m, n, &t, &ctx).unwrap();
        let s = build_matrices(&sig, n, &ctx).unwrap().s();
        let r = build_r(m.freqs(), n, sig.dt(), &ctx).unwrap();
        let gram = r.matmul(&r.adjoint()).unwrap();
        let from_gram = sorted_desc(
            hermitian_eig(&gram, &ctx).unwrap().values.into_iter().map(|l| l * n as i64).collect(),
        );
        let from_s = sorted_desc(hermitian_eig(&s, &ctx).unwrap().values);
        let tol = ctx.tol() * (n * n) as i64 * s.max_abs();
        for (x, y) in from_gram.iter().zip(&from_s) {
            prop_assert!((x - y).abs() <= tol);
        }
        for y in &from_s[k..] {
            prop_assert!(y.abs() <= tol);
        }
    }
}

//! The harmonic-inversion pipeline.
//!
//! From samples `c_0..c_N` build the Toeplitz matrices `S_ij = c_{j-i}` and
//! `U_ij = c_{j-i+1}` (`i, j < N`), restrict the generalized problem
//! `U x = u S x` to the range of `S`, read the frequencies off the phases of
//! the eigenvalues `u_k = exp(-i w_k dt)`, and finally fit the amplitudes by
//! linear least squares.

mod rank;

pub use rank::{rank_reduce, RankAmbiguity, RankReduction, WITNESS_FACTOR};

use crate::error::{Error, Result, Stage};
use crate::linalg::{general_eigvals, lsq_solve, Complex, Matrix, PrecisionContext, Real};
use crate::signal::SampledSignal;

/// Generating sequence `c_{-(N-1)}..c_N` of the `N x N` matrices `S` and `U`.
#[derive(Clone, Debug)]
pub struct KrylovMatrices {
    n: usize,
    seq: Vec<Complex>,
}

impl KrylovMatrices {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c_k` for `-(N-1) <= k <= N`.
    pub fn c(&self, k: isize) -> &Complex {
        &self.seq[(k + self.n as isize - 1) as usize]
    }

    pub fn sequence(&self) -> &[Complex] {
        &self.seq
    }

    pub fn s_entry(&self, i: usize, j: usize) -> &Complex {
        self.c(j as isize - i as isize)
    }

    pub fn u_entry(&self, i: usize, j: usize) -> &Complex {
        self.c(j as isize - i as isize + 1)
    }

    pub fn s(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.s_entry(i, j).clone())
    }

    pub fn u(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.u_entry(i, j).clone())
    }
}

/// Builds `S` and `U` of dimension `n` from the first `n + 1` samples.
///
/// `c_0` enters through its real part only, so that `c_{-0} = conj(c_0)` and
/// `S` is exactly Hermitian even for noisy input.
pub fn build_matrices(sig: &SampledSignal, n: usize, ctx: &PrecisionContext) -> Result<KrylovMatrices> {
    if n == 0 {
        return Err(Error::contract("matrix dimension must be at least 1"));
    }
    if sig.samples().len() < n + 1 {
        return Err(Error::contract(format!(
            "dimension {n} needs {} samples c_0..c_{n}, signal has {}",
            n + 1,
            sig.samples().len()
        )));
    }
    let bits = ctx.bits();
    let seq = (-(n as isize - 1)..=n as isize)
        .map(|k| {
            if k == 0 {
                Complex::from_real(sig.samples()[0].re.with_bits(bits))
            } else {
                sig.sample(k).with_bits(bits)
            }
        })
        .collect();
    Ok(KrylovMatrices { n, seq })
}

/// Eigenvalues `u_k` of the reduced problem.
///
/// The retained block is `S' = diag(s')`, `U' = G^H U G`; the eigenvalues of
/// `S'^{-1} U'` are computed from the similar matrix
/// `S'^{-1/2} U' S'^{-1/2}`, which is unitary in exact arithmetic.
pub fn solve_gep(km: &KrylovMatrices, rr: &RankReduction, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    if rr.g.rows() != km.dim() {
        return Err(Error::contract("rank reduction does not belong to these matrices"));
    }
    let u = km.u();
    let g = &rr.g;
    let ug = u.matmul(g)?;
    let reduced = g.adjoint().matmul(&ug)?;
    let root: Vec<Real> = rr.s_prime.iter().map(Real::sqrt).collect();
    let k = rr.k_detected();
    let m = Matrix::from_fn(k, k, |i, j| &reduced[(i, j)] / &(&root[i] * &root[j]));
    general_eigvals(&m, ctx)
}

/// Frequencies `w_k = -arg(u_k) / dt` on the principal branch, ascending,
/// together with the moduli `|u_k|`.
#[derive(Clone, Debug)]
pub struct Frequencies {
    pub freqs: Vec<Real>,
    pub moduli: Vec<Real>,
}

pub fn extract_frequencies(us: &[Complex], dt: &Real) -> Result<Frequencies> {
    if !dt.is_positive() {
        return Err(Error::contract("dt must be positive"));
    }
    if let Some(index) = us.iter().position(Complex::is_zero) {
        return Err(Error::DegenerateEigenvalue { index });
    }
    let mut pairs: Vec<(Real, Real)> = us.iter().map(|u| (-(u.arg() / dt), u.abs())).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite frequencies"));
    let (freqs, moduli) = pairs.into_iter().unzip();
    Ok(Frequencies { freqs, moduli })
}

#[derive(Clone, Debug)]
pub struct AmplitudeFit {
    pub amps: Vec<Real>,
    pub residual: Real,
    /// Some negative amplitude was clamped to zero.
    pub clamped: bool,
}

/// Real least-squares fit of `sum_k d_k exp(-i w_k t_n) = c_n` over all
/// samples, with real and imaginary parts stacked.
pub fn recover_amplitudes(sig: &SampledSignal, freqs: &[Real], ctx: &PrecisionContext) -> Result<AmplitudeFit> {
    let k = freqs.len();
    if k == 0 {
        return Err(Error::contract("no frequencies to fit"));
    }
    if sig.samples().len() < k {
        return Err(Error::contract(format!("{k} frequencies but only {} samples", sig.samples().len())));
    }
    let bits = ctx.bits();
    let dt = sig.dt().with_bits(bits);
    let rows = 2 * sig.samples().len();
    let mut a = Matrix::zeros(rows, k, bits);
    for n in 0..sig.samples().len() {
        let tn = &dt * n as i64;
        for (j, w) in freqs.iter().enumerate() {
            let phase = w.with_bits(bits) * &tn;
            a[(2 * n, j)] = Complex::from_real(phase.cos());
            a[(2 * n + 1, j)] = Complex::from_real(-phase.sin());
        }
    }
    let b: Vec<Complex> = sig
        .samples()
        .iter()
        .flat_map(|c| [Complex::from_real(c.re.clone()), Complex::from_real(c.im.clone())])
        .collect();
    let sol = lsq_solve(&a, &b, ctx).map_err(|e| match e {
        Error::RankDeficient { column } => {
            let partner = (0..column)
                .min_by(|&x, &y| {
                    let dx = (&freqs[x] - &freqs[column]).abs();
                    let dy = (&freqs[y] - &freqs[column]).abs();
                    dx.partial_cmp(&dy).expect("finite")
                })
                .unwrap_or(0);
            Error::CoalescingFrequencies(partner, column)
        }
        other => other,
    })?;
    let mut clamped = false;
    let amps = sol
        .x
        .into_iter()
        .map(|z| {
            if z.re.is_negative() {
                clamped = true;
                Real::zero(bits)
            } else {
                z.re
            }
        })
        .collect();
    Ok(AmplitudeFit { amps, residual: sol.residual_norm, clamped })
}

/// Per-frequency absolute error bound `2 K N^2 eta / (lambda_min T)`.
pub fn error_bound(k: usize, n: usize, t: &Real, lambda_min: &Real, eta: &Real) -> Result<Real> {
    if !lambda_min.is_positive() {
        return Err(Error::contract("error bound needs lambda_min > 0"));
    }
    if !t.is_positive() {
        return Err(Error::contract("error bound needs T > 0"));
    }
    let scale = 2 * (k as i64) * (n as i64) * (n as i64);
    Ok(eta * scale / lambda_min / t)
}

/// Rank-detection threshold `4 N eta`. With `eta = 0` the roundoff floor
/// `10^{1-P}` scaled by `c0_scale` stands in for the noise level.
pub fn default_threshold(n: usize, eta: &Real, c0_scale: &Real, ctx: &PrecisionContext) -> Real {
    let four_n = 4 * n as i64;
    if eta.is_positive() {
        eta.with_bits(ctx.bits()) * four_n
    } else {
        ctx.roundoff_floor() * c0_scale * four_n
    }
}

/// Outcome of a full inversion.
#[derive(Clone, Debug)]
pub struct InversionResult {
    /// Recovered frequencies, principal branch, ascending.
    pub freqs: Vec<Real>,
    pub moduli: Vec<Real>,
    pub amps: Vec<Real>,
    pub amps_clamped: bool,
    pub lambda_min: Real,
    pub residual: Real,
    /// Error bound at the signal's declared noise level; infinite when that is zero.
    pub bound: Real,
    /// Error bound at the roundoff floor `10^{1-P}`.
    pub roundoff_bound: Real,
    pub threshold: Real,
    pub rank: RankReduction,
    pub n: usize,
    pub t: Real,
}

impl InversionResult {
    pub fn k_detected(&self) -> usize {
        self.rank.k_detected()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.rank.ambiguity.is_some()
    }
}

/// Runs the whole pipeline with matrix dimension `N = samples - 1`.
/// `threshold = None` selects [`default_threshold`].
pub fn invert(sig: &SampledSignal, threshold: Option<&Real>, ctx: &PrecisionContext) -> Result<InversionResult> {
    let n = sig.n();
    let bits = ctx.bits();
    let t = sig.span().with_bits(bits);
    let c0 = sig.samples()[0].abs();
    let eta = sig.noise_bound().with_bits(bits);
    let threshold = match threshold {
        Some(th) => th.with_bits(bits),
        None => default_threshold(n, &eta, &c0, ctx),
    };

    let km = build_matrices(sig, n, ctx).map_err(|e| e.at(Stage::BuildMatrices))?;
    let rank = rank_reduce(&km.s(), &threshold, ctx).map_err(|e| e.at(Stage::RankReduce))?;
    let us = solve_gep(&km, &rank, ctx).map_err(|e| e.at(Stage::SolveGep))?;
    let fr = extract_frequencies(&us, sig.dt()).map_err(|e| e.at(Stage::ExtractFrequencies))?;
    let fit = recover_amplitudes(sig, &fr.freqs, ctx).map_err(|e| e.at(Stage::RecoverAmplitudes))?;

    let k = rank.k_detected();
    let lambda_min = rank.lambda_min.clone();
    let bound = if eta.is_positive() { error_bound(k, n, &t, &lambda_min, &eta)? } else { Real::infinity(bits) };
    let roundoff_bound = error_bound(k, n, &t, &lambda_min, &(ctx.roundoff_floor() * &c0))?;
    Ok(InversionResult {
        freqs: fr.freqs,
        moduli: fr.moduli,
        amps: fit.amps,
        amps_clamped: fit.clamped,
        lambda_min,
        residual: fit.residual,
        bound,
        roundoff_bound,
        threshold,
        rank,
        n,
        t,
    })
}

//! Smallest positive eigenvalue of `S`: the short-signal estimate from the
//! Gram matrix of the single-line eigenvectors, the exponent law
//! `lambda_min / (K N) ~ (a Omega T)^{2(K-1)}`, and Monte-Carlo statistics
//! of `a` over random frequency sets.
//!
//! All eigenvalues here refer to the unit-amplitude signal `S = sum_k S_k`,
//! whose lines each contribute a rank-one term with eigenvalue `N`. A signal
//! with equal amplitudes `d` has eigenvalues `d` times these.

use crate::error::{Error, Result};
use crate::inversion::build_matrices;
use crate::linalg::{det_mp, hermitian_eig, principal_minor_sum, Complex, Matrix, PrecisionContext, Real};
use crate::par::{map_indexed, Execution};
use crate::rng::SplitMix64;
use crate::signal::{synthesize, SpectralModel};

/// Cap on precision doublings in the adaptive solvers.
pub const MAX_DOUBLINGS: u32 = 6;

/// Frequencies closer than this are redrawn in [`monte_carlo_a`].
pub const MIN_GAP_EXP: i64 = -8;

pub const HISTOGRAM_BINS: usize = 20;

/// `K x N` matrix with rows `(1, e^{i w_k dt}, ..., e^{i w_k (N-1) dt}) / sqrt(N)`.
pub fn build_r(freqs: &[Real], n: usize, dt: &Real, ctx: &PrecisionContext) -> Result<Matrix> {
    let k = freqs.len();
    if k == 0 || n < k {
        return Err(Error::contract(format!("build_r needs N >= K >= 1, got N = {n}, K = {k}")));
    }
    let bits = ctx.bits();
    let inv = ctx.one() / ctx.int(n as i64).sqrt();
    let dt = dt.with_bits(bits);
    Ok(Matrix::from_fn(k, n, |r, c| {
        let phase = freqs[r].with_bits(bits) * &dt * c as i64;
        Complex::cis(&phase).scale(&inv)
    }))
}

#[derive(Clone, Debug)]
pub struct LambdaEstimate {
    pub lambda_est: Real,
    /// `det(R R^H / K)`.
    pub det_term: Real,
    /// Signed linear coefficient of the characteristic polynomial of
    /// `R R^H / K`, `(-1)^{K-1} e_{K-1}`.
    pub a1_term: Real,
    /// `None` for `K = 1`, where the exponent vanishes.
    pub a_value: Option<Real>,
    pub omega_max: Real,
    /// Decimal digits at which the estimate stabilized.
    pub digits_used: u32,
}

impl LambdaEstimate {
    /// The estimate for a signal whose lines all have amplitude `d`.
    pub fn for_amplitude(&self, d: &Real) -> Real {
        &self.lambda_est * d
    }
}

fn check_distinct(freqs: &[Real]) -> Result<()> {
    for i in 0..freqs.len() {
        for j in i + 1..freqs.len() {
            if freqs[i] == freqs[j] {
                return Err(Error::CoalescingFrequencies(i, j));
            }
        }
    }
    Ok(())
}

fn omega_max(freqs: &[Real], bits: usize) -> Real {
    freqs.iter().map(Real::abs).fold(Real::zero(bits), Real::max)
}

fn relative_gap(a: &Real, b: &Real) -> Real {
    (a - b).abs() / a.abs()
}

fn estimate_at(freqs: &[Real], n: usize, dt: &Real, ctx: &PrecisionContext) -> Result<(Real, Real, Real)> {
    let k = freqs.len();
    let r = build_r(freqs, n, dt, ctx)?;
    let kk = ctx.int(k as i64);
    let rr = r.matmul(&r.adjoint())?;
    // Rows of R are unit vectors, so the diagonal of M is exactly 1/K.
    let m = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            Complex::from_real(ctx.one() / &kk)
        } else {
            rr[(i, j)].scale(&(ctx.one() / &kk))
        }
    });
    let det = det_mp(&m, ctx)?.re;
    let e = if k == 1 { ctx.one() } else { principal_minor_sum(&m, k - 1, ctx)?.re };
    let lambda = if e.is_positive() { &det / &e * &kk * n as i64 } else { ctx.zero() };
    Ok((lambda, det, e))
}

/// First-order estimate `lambda_est = N K det(M) / e_{K-1}(M)` of the
/// smallest nonzero eigenvalue of `S`, `M = R R^H / K`.
///
/// `det(M)` and `e_{K-1}(M)` are tiny differences of `O(1)` terms for short
/// signals, so they are evaluated at increasing precision until two
/// successive estimates agree to `P/2` digits.
pub fn estimate_lambda_min(freqs: &[Real], n: usize, t: &Real, ctx: &PrecisionContext) -> Result<LambdaEstimate> {
    check_distinct(freqs)?;
    if !t.is_positive() {
        return Err(Error::contract("estimate needs T > 0"));
    }
    let k = freqs.len();
    let agree = ctx.pow10(-i64::from(ctx.digits() / 2));
    let mut digits = ctx.working_digits();
    let mut prev: Option<Real> = None;
    for _ in 0..=MAX_DOUBLINGS {
        let wide = PrecisionContext::with_guard(digits, 0)?;
        let dt = t.with_bits(wide.bits()) / wide.int(n as i64);
        let (lambda, det, e) = estimate_at(freqs, n, &dt, &wide)?;
        let converged = lambda.is_positive()
            && det.is_positive()
            && prev.as_ref().is_some_and(|p| relative_gap(&lambda, p) <= agree);
        if converged || k == 1 {
            let bits = ctx.bits();
            let sign = if (k - 1).is_multiple_of(2) { 1 } else { -1 };
            let lambda_est = lambda.with_bits(bits);
            let omega = omega_max(freqs, bits);
            let a_value =
                if k >= 2 { Some(extract_a(&lambda_est, k, n, &omega, &t.with_bits(bits))?) } else { None };
            return Ok(LambdaEstimate {
                lambda_est,
                det_term: det.with_bits(bits),
                a1_term: e.with_bits(bits) * sign,
                a_value,
                omega_max: omega,
                digits_used: digits,
            });
        }
        prev = Some(lambda);
        digits *= 2;
    }
    Err(Error::IndeterminateEstimate(format!(
        "no stable positive estimate up to {} digits",
        digits / 2
    )))
}

/// `a = (lambda_min / (K N))^{1/(2(K-1))} / (Omega T)`.
pub fn extract_a(lambda_min: &Real, k: usize, n: usize, omega_max: &Real, t: &Real) -> Result<Real> {
    if k < 2 {
        return Err(Error::UndefinedExponent);
    }
    if !lambda_min.is_positive() {
        return Err(Error::contract("extract_a needs lambda_min > 0"));
    }
    if !omega_max.is_positive() || !t.is_positive() {
        return Err(Error::contract("extract_a needs Omega > 0 and T > 0"));
    }
    let bits = lambda_min.bits();
    let base = lambda_min / ((k * n) as i64);
    let root = (base.ln() / ((2 * (k - 1)) as i64)).exp();
    Ok(root / &(omega_max.with_bits(bits) * t))
}

/// Smallest nonzero eigenvalue of the unit-amplitude `S` from a full
/// Hermitian eigensolve, with precision raised until it stands clear of
/// the solver's absolute error.
pub fn oracle_lambda_min(freqs: &[Real], n: usize, t: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_distinct(freqs)?;
    let k = freqs.len();
    if k == 0 || n < k {
        return Err(Error::contract(format!("oracle needs N >= K >= 1, got N = {n}, K = {k}")));
    }
    let mut wide = *ctx;
    for _ in 0..=MAX_DOUBLINGS {
        let model = SpectralModel::unit_amplitudes(freqs.to_vec(), &wide)?;
        let sig = synthesize(&model, n, t, &wide)?;
        let s = build_matrices(&sig, n, &wide)?.s();
        let eig = hermitian_eig(&s, &wide)?;
        let lambda = eig.values[n - k].clone();
        let floor = wide.eps() * s.frobenius() * 1_000_000;
        if lambda > floor {
            return Ok(lambda.with_bits(ctx.bits()));
        }
        wide = PrecisionContext::with_guard(wide.digits() * 2, wide.guard())?;
    }
    Err(Error::IndeterminateEstimate("lambda_min below roundoff at every precision tried".into()))
}

#[derive(Clone, Debug)]
pub struct EnsembleStats {
    pub k: usize,
    pub trials: usize,
    pub a_samples: Vec<Real>,
    pub mode: Real,
    pub p05: Real,
    pub p95: Real,
    /// Frequency sets rejected for a gap below `10^-8`.
    pub redraws: usize,
}

/// `K` ascending frequencies uniform in `(0.5, 1.0)` with pairwise gaps of at
/// least `10^-8`, from the stream keyed by `(seed, trial)`. Returns the
/// number of rejected sets alongside.
pub fn draw_frequencies(k: usize, seed: u64, trial: u64, ctx: &PrecisionContext) -> (Vec<Real>, usize) {
    let bits = ctx.bits();
    let mut rng = SplitMix64::keyed(seed, trial);
    let scale = Real::from_f64(2f64.powi(-66), bits);
    let half = Real::ratio(1, 2, bits);
    let min_gap = ctx.pow10(MIN_GAP_EXP);
    let mut redraws = 0;
    loop {
        let mut f: Vec<Real> = (0..k)
            .map(|_| {
                let u = Real::from_u64(rng.next_u64(), bits);
                &half + (u * 2 + 1) * &scale
            })
            .collect();
        f.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if f.windows(2).all(|w| &w[1] - &w[0] >= min_gap) {
            return (f, redraws);
        }
        redraws += 1;
    }
}

fn nearest_rank(sorted: &[Real], pct: usize) -> Real {
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1].clone()
}

/// Nearest-rank 5th/95th percentiles and the centre of the fullest of
/// [`HISTOGRAM_BINS`] equal bins over the sample range (lower bin wins ties),
/// clamped into the percentile band.
pub fn ensemble_summary(samples: &[Real]) -> Result<(Real, Real, Real)> {
    if samples.is_empty() {
        return Err(Error::contract("no samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let p05 = nearest_rank(&sorted, 5);
    let p95 = nearest_rank(&sorted, 95);
    let (lo, hi) = (&sorted[0], &sorted[sorted.len() - 1]);
    let width = (hi - lo) / HISTOGRAM_BINS as i64;
    let mode = if width.is_zero() {
        lo.clone()
    } else {
        let mut counts = [0usize; HISTOGRAM_BINS];
        for s in &sorted {
            let pos = ((s - lo) / &width).to_f64().floor() as usize;
            counts[pos.min(HISTOGRAM_BINS - 1)] += 1;
        }
        let best = (0..HISTOGRAM_BINS).fold(0, |b, i| if counts[i] > counts[b] { i } else { b });
        lo + &width * (2 * best as i64 + 1) / 2
    };
    let mode = mode.max(p05.clone()).min(p95.clone());
    Ok((mode, p05, p95))
}

/// Statistics of `a` over `trials` random frequency sets.
pub fn monte_carlo_a(k: usize, trials: usize, seed: u64, n: usize, t: &Real, ctx: &PrecisionContext) -> Result<EnsembleStats> {
    monte_carlo_a_with(Execution::default(), k, trials, seed, n, t, ctx)
}

pub fn monte_carlo_a_with(
    exec: Execution,
    k: usize,
    trials: usize,
    seed: u64,
    n: usize,
    t: &Real,
    ctx: &PrecisionContext,
) -> Result<EnsembleStats> {
    if trials == 0 {
        return Err(Error::contract("monte_carlo_a needs at least one trial"));
    }
    if k < 2 {
        return Err(Error::UndefinedExponent);
    }
    let runs = map_indexed(exec, trials, |trial| -> Result<(Real, usize)> {
        let (freqs, redraws) = draw_frequencies(k, seed, trial as u64, ctx);
        let lambda = oracle_lambda_min(&freqs, n, t, ctx)?;
        let a = extract_a(&lambda, k, n, &omega_max(&freqs, ctx.bits()), t)?;
        Ok((a, redraws))
    });
    let mut a_samples = Vec::with_capacity(trials);
    let mut redraws = 0;
    for run in runs {
        let (a, r) = run?;
        a_samples.push(a);
        redraws += r;
    }
    let (mode, p05, p95) = ensemble_summary(&a_samples)?;
    Ok(EnsembleStats { k, trials, a_samples, mode, p05, p95, redraws })
}

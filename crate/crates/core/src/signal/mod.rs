//! Spectral models and their uniformly sampled signals.
//!
//! A model with frequencies `w_k` and amplitudes `d_k` is sampled as
//! `c_n = sum_k d_k exp(-i w_k n dt)` for `n = 0..=N`, `dt = T / N`.

mod file;

pub use file::{parse_signal, write_signal};

use crate::error::{Error, Result};
use crate::linalg::{Complex, PrecisionContext, Real};
use crate::rng::splitmix_at;

/// The hidden truth: `K` real frequencies with non-negative real amplitudes.
#[derive(Clone, Debug)]
pub struct SpectralModel {
    freqs: Vec<Real>,
    amps: Vec<Real>,
    normalized: bool,
}

impl SpectralModel {
    pub fn new(freqs: Vec<Real>, amps: Vec<Real>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::contract("a spectral model needs at least one line"));
        }
        if freqs.len() != amps.len() {
            return Err(Error::contract(format!("{} frequencies but {} amplitudes", freqs.len(), amps.len())));
        }
        if let Some(i) = amps.iter().position(Real::is_negative) {
            return Err(Error::contract(format!("amplitude {i} is negative")));
        }
        for i in 0..freqs.len() {
            for j in i + 1..freqs.len() {
                if freqs[i] == freqs[j] {
                    return Err(Error::contract(format!("frequencies {i} and {j} coincide")));
                }
            }
        }
        Ok(SpectralModel { freqs, amps, normalized: false })
    }

    /// Equal amplitudes `1/K`, so that `c_0 = 1`.
    pub fn equal_amplitudes(freqs: Vec<Real>, ctx: &PrecisionContext) -> Result<Self> {
        let k = freqs.len().max(1) as i64;
        let d = ctx.one() / ctx.int(k);
        let mut m = Self::new(freqs, vec![d; k as usize])?;
        m.normalized = true;
        m
            .freqs
            .iter_mut()
            .for_each(|w| *w = w.with_bits(ctx.bits()));
        Ok(m)
    }

    /// Unit amplitude on every line.
    pub fn unit_amplitudes(freqs: Vec<Real>, ctx: &PrecisionContext) -> Result<Self> {
        let k = freqs.len();
        Self::new(freqs, vec![ctx.one(); k])
    }

    /// Rescales amplitudes so that they sum to one.
    pub fn normalize(mut self) -> Result<Self> {
        let total = self.total_amplitude();
        if total.is_zero() {
            return Err(Error::contract("cannot normalise an all-zero amplitude vector"));
        }
        for d in &mut self.amps {
            *d = &*d / &total;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[Real] {
        &self.freqs
    }

    pub fn amps(&self) -> &[Real] {
        &self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn total_amplitude(&self) -> Real {
        let bits = self.amps[0].bits();
        self.amps.iter().fold(Real::zero(bits), |acc, d| acc + d)
    }

    /// Largest `|w_k|`.
    pub fn omega_max(&self) -> Real {
        let bits = self.freqs[0].bits();
        self.freqs.iter().fold(Real::zero(bits), |acc, w| acc.max(w.abs()))
    }

    /// Same model with every frequency negated.
    pub fn negated(&self) -> SpectralModel {
        SpectralModel { freqs: self.freqs.iter().map(|w| -w).collect(), amps: self.amps.clone(), normalized: self.normalized }
    }

    /// Lines of both models; fails if any frequency appears in both.
    pub fn union(&self, other: &SpectralModel) -> Result<SpectralModel> {
        let freqs = self.freqs.iter().chain(&other.freqs).cloned().collect();
        let amps = self.amps.iter().chain(&other.amps).cloned().collect();
        SpectralModel::new(freqs, amps)
    }
}

/// `N+1` complex samples `c_0..c_N` on a grid of step `dt`.
#[derive(Clone, Debug)]
pub struct SampledSignal {
    samples: Vec<Complex>,
    dt: Real,
    noise_bound: Real,
    underdetermined: bool,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex>, dt: Real, noise_bound: Real) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::contract("a sampled signal needs at least two samples"));
        }
        if !dt.is_positive() {
            return Err(Error::contract("sampling step must be positive"));
        }
        if noise_bound.is_negative() {
            return Err(Error::contract("noise bound must be non-negative"));
        }
        Ok(SampledSignal { samples, dt, noise_bound, underdetermined: false })
    }

    pub fn samples(&self) -> &[Complex] {
        &self.samples
    }

    /// `N`, the number of sampling intervals (one less than the sample count).
    pub fn n(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn dt(&self) -> &Real {
        &self.dt
    }

    /// `T = N dt`.
    pub fn span(&self) -> Real {
        &self.dt * self.n() as i64
    }

    pub fn noise_bound(&self) -> &Real {
        &self.noise_bound
    }

    /// Set when the model had more lines than sampling intervals (`N < K`).
    pub fn is_underdetermined(&self) -> bool {
        self.underdetermined
    }

    /// `c_n` for any `|n| <= N`, using `c_{-n} = conj(c_n)`.
    pub fn sample(&self, n: isize) -> Complex {
        let idx = n.unsigned_abs();
        if n < 0 {
            self.samples[idx].conj()
        } else {
            self.samples[idx].clone()
        }
    }

    /// Each sample rounded to `digits` significant decimal digits.
    pub fn quantized(&self, digits: usize) -> SampledSignal {
        SampledSignal {
            samples: self
                .samples
                .iter()
                .map(|z| Complex::new(z.re.round_decimal(digits), z.im.round_decimal(digits)))
                .collect(),
            ..self.clone()
        }
    }

    pub fn with_noise_bound(mut self, eta: Real) -> SampledSignal {
        self.noise_bound = eta;
        self
    }
}

/// Bounded noise: real and imaginary parts drawn from `(-eta_max, eta_max)`.
#[derive(Clone, Debug)]
pub struct NoiseSpec {
    pub eta_max: Real,
    pub seed: u64,
}

pub fn synthesize(model: &SpectralModel, n: usize, t: &Real, ctx: &PrecisionContext) -> Result<SampledSignal> {
    if n == 0 {
        return Err(Error::contract("synthesize needs N >= 1"));
    }
    if !t.is_positive() {
        return Err(Error::contract("synthesize needs T > 0"));
    }
    let bits = ctx.bits();
    let dt = t.with_bits(bits) / ctx.int(n as i64);
    let freqs: Vec<Real> = model.freqs.iter().map(|w| w.with_bits(bits)).collect();
    let amps: Vec<Real> = model.amps.iter().map(|d| d.with_bits(bits)).collect();
    let samples = (0..=n)
        .map(|step| {
            let tn = &dt * step as i64;
            let mut acc = Complex::zero(bits);
            for (w, d) in freqs.iter().zip(&amps) {
                let phase = w * &tn;
                acc += Complex::new(d * phase.cos(), -(d * phase.sin()));
            }
            acc
        })
        .collect();
    let mut sig = SampledSignal::new(samples, dt, ctx.zero())?;
    sig.underdetermined = n < model.k();
    Ok(sig)
}

/// Independent uniform perturbation of every real and imaginary part.
///
/// The draw for sample `n` uses splitmix64 output `2n` (real part) and
/// `2n+1` (imaginary part) of the stream seeded with `spec.seed`, mapped to
/// `(u / 2^64 - 1/2) * 2 eta_max`.
pub fn add_noise(sig: &SampledSignal, spec: &NoiseSpec, ctx: &PrecisionContext) -> SampledSignal {
    let bits = ctx.bits();
    let eta = spec.eta_max.with_bits(bits);
    if eta.is_zero() {
        return sig.clone().with_noise_bound(eta);
    }
    let two_pow_64 = Real::from_f64(18_446_744_073_709_551_616.0, bits);
    let half = Real::ratio(1, 2, bits);
    let twice_eta = &eta * 2;
    let draw = |index: u64| -> Real {
        let u = Real::from_u64(splitmix_at(spec.seed, index), bits);
        (u / &two_pow_64 - &half) * &twice_eta
    };
    let samples = sig
        .samples
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let n = n as u64;
            Complex::new(&c.re + draw(2 * n), &c.im + draw(2 * n + 1))
        })
        .collect();
    SampledSignal { samples, dt: sig.dt.clone(), noise_bound: eta, underdetermined: sig.underdetermined }
}

/// Half-width `2 pi N N! / T` of the frequency interval the literature quotes
/// for unique recovery. Informational only; exact grid aliasing already
/// occurs at shifts of `2 pi / dt` (see [`alias_shift`]).
pub fn paper_unique_halfwidth(n: u32, t: &Real) -> Result<Real> {
    if n == 0 || !t.is_positive() {
        return Err(Error::contract("unique half-width needs N >= 1 and T > 0"));
    }
    // N! stays exact at this precision.
    let log2_fact: f64 = (1..=n).map(|k| f64::from(k).log2()).sum();
    let bits = t.bits().max(log2_fact.ceil() as usize + 64);
    let mut fact = Real::one(bits);
    for k in 2..=n {
        fact = fact * i64::from(k);
    }
    Ok(Real::pi(bits) * 2 * i64::from(n) * &fact / t.with_bits(bits))
}

/// Shifts every frequency by `m 2 pi / dt`, which leaves the samples on a
/// grid of step `dt` unchanged.
pub fn alias_shift(model: &SpectralModel, dt: &Real, m: i64) -> SpectralModel {
    let bits = dt.bits();
    let shift = Real::pi(bits) * 2 * m / dt;
    SpectralModel {
        freqs: model.freqs.iter().map(|w| w + &shift).collect(),
        amps: model.amps.clone(),
        normalized: model.normalized,
    }
}

/// Sample-wise `|c_n|^2`. The noise bound becomes `2 |c_0| eta + eta^2`,
/// with `|c_0|` standing in for the total amplitude.
pub fn modulus_squared_signal(sig: &SampledSignal) -> SampledSignal {
    let samples: Vec<Complex> = sig.samples.iter().map(|c| Complex::from_real(c.norm_sqr())).collect();
    let eta = &sig.noise_bound;
    let noise_bound = if eta.is_zero() {
        eta.clone()
    } else {
        sig.samples[0].abs() * 2 * eta + eta * eta
    };
    SampledSignal { samples, dt: sig.dt.clone(), noise_bound, underdetermined: sig.underdetermined }
}

/// Spectral model of `|c(t)|^2`: a DC line of amplitude `sum d_k^2` and lines
/// at `+-(w_k - w_l)` of amplitude `d_k d_l` for every pair `k < l`, sorted by
/// frequency.
pub fn difference_model(model: &SpectralModel, ctx: &PrecisionContext) -> Result<SpectralModel> {
    let bits = ctx.bits();
    let w: Vec<Real> = model.freqs.iter().map(|x| x.with_bits(bits)).collect();
    let d: Vec<Real> = model.amps.iter().map(|x| x.with_bits(bits)).collect();
    let k = w.len();

    let mut gaps: Vec<((usize, usize), Real)> = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            gaps.push(((a, b), (&w[a] - &w[b]).abs()));
        }
    }
    let scale = gaps.iter().fold(ctx.zero(), |acc, (_, g)| acc.max(g.clone()));
    let tol = &ctx.tol() * &scale;
    for i in 0..gaps.len() {
        for j in i + 1..gaps.len() {
            if (&gaps[i].1 - &gaps[j].1).abs() <= tol {
                return Err(Error::DegenerateDifference { first: gaps[i].0, second: gaps[j].0 });
            }
        }
    }

    let mut lines: Vec<(Real, Real)> = Vec::with_capacity(1 + k * (k - 1));
    lines.push((ctx.zero(), d.iter().fold(ctx.zero(), |acc, x| acc + x * x)));
    for ((a, b), _) in &gaps {
        let diff = &w[*a] - &w[*b];
        let amp = &d[*a] * &d[*b];
        lines.push((-&diff, amp.clone()));
        lines.push((diff, amp));
    }
    lines.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite frequencies"));
    let (freqs, amps) = lines.into_iter().unzip();
    SpectralModel::new(freqs, amps)
}

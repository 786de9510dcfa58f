use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, Matrix, PrecisionContext, Real};

/// A discarded eigenvalue more than this many times the observed noise
/// level is reported as a possibly hidden line.
pub const WITNESS_FACTOR: i64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum RankAmbiguity {
    /// A discarded eigenvalue lies in `(threshold/2, threshold]`, outside
    /// the band a perturbed zero eigenvalue can reach.
    GrayZone { eigenvalue: Real },
    /// A discarded eigenvalue stands far above the spread of the other
    /// discarded ones.
    AboveNoise { eigenvalue: Real, noise: Real },
    /// Every eigenvalue was retained and the smallest is close to the threshold.
    FullRank { lambda_min: Real },
}

impl std::fmt::Display for RankAmbiguity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankAmbiguity::GrayZone { eigenvalue } => {
                write!(f, "discarded eigenvalue {} is within a factor 2 of the threshold", eigenvalue.to_sci_string(3))
            }
            RankAmbiguity::AboveNoise { eigenvalue, noise } => write!(
                f,
                "discarded eigenvalue {} far exceeds the noise level {}",
                eigenvalue.to_sci_string(3),
                noise.to_sci_string(3)
            ),
            RankAmbiguity::FullRank { lambda_min } => {
                write!(f, "full rank with lambda_min {} near the threshold", lambda_min.to_sci_string(3))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankReduction {
    /// Eigenvectors of the retained eigenvalues, `N x K`.
    pub g: Matrix,
    /// Retained eigenvalues, descending.
    pub s_prime: Vec<Real>,
    pub lambda_min: Real,
    /// Full spectrum of `S`, ascending.
    pub eigenvalues: Vec<Real>,
    pub threshold: Real,
    /// Noise level inferred from the discarded part of the spectrum.
    pub noise: Real,
    pub ambiguity: Option<RankAmbiguity>,
}

impl RankReduction {
    pub fn k_detected(&self) -> usize {
        self.s_prime.len()
    }

    pub fn discarded(&self) -> &[Real] {
        &self.eigenvalues[..self.eigenvalues.len() - self.k_detected()]
    }
}

fn median_abs(values: &[Real]) -> Option<Real> {
    let mut a: Vec<Real> = values.iter().map(Real::abs).collect();
    if a.is_empty() {
        return None;
    }
    a.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    let m = a.len() / 2;
    Some(if a.len() % 2 == 1 { a[m].clone() } else { (&a[m - 1] + &a[m]) / 2 })
}

/// Keeps the eigenvalues of the Hermitian `S` strictly above `threshold`.
pub fn rank_reduce(s: &Matrix, threshold: &Real, ctx: &PrecisionContext) -> Result<RankReduction> {
    if !threshold.is_positive() {
        return Err(Error::contract("rank threshold must be positive"));
    }
    let eig = hermitian_eig(s, ctx)?;
    let n = s.rows();
    let keep: Vec<usize> = (0..n).rev().filter(|&i| eig.values[i] > *threshold).collect();
    if keep.is_empty() {
        return Err(Error::EmptySpectrum { threshold: threshold.to_sci_string(6) });
    }
    let g = Matrix::from_fn(n, keep.len(), |r, c| eig.vectors[(r, keep[c])].clone());
    let s_prime: Vec<Real> = keep.iter().map(|&i| eig.values[i].clone()).collect();
    let lambda_min = s_prime.last().expect("non-empty").clone();
    let discarded = &eig.values[..n - keep.len()];

    let roundoff = ctx.roundoff_floor() * s.max_abs() * n as i64;
    let most_negative = discarded.iter().filter(|v| v.is_negative()).map(Real::abs).fold(Real::zero(ctx.bits()), Real::max);
    let noise = median_abs(discarded).unwrap_or_else(|| Real::zero(ctx.bits())).max(most_negative).max(roundoff);

    let half = threshold / 2;
    let ambiguity = if let Some(top) = discarded.last() {
        if *top > half {
            Some(RankAmbiguity::GrayZone { eigenvalue: top.clone() })
        } else if *top > &noise * WITNESS_FACTOR {
            Some(RankAmbiguity::AboveNoise { eigenvalue: top.clone(), noise: noise.clone() })
        } else {
            None
        }
    } else if lambda_min <= threshold * 2 {
        Some(RankAmbiguity::FullRank { lambda_min: lambda_min.clone() })
    } else {
        None
    };

    Ok(RankReduction { g, s_prime, lambda_min, eigenvalues: eig.values, threshold: threshold.clone(), noise, ambiguity })
}

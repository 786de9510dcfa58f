//! Model spec files: `freq <decimal>` and `amp <decimal>` lines, one pair per
//! spectral line, plus optional `N:`, `T:` and `eta_max:` headers. Blank
//! lines and `#` comments are ignored. Without `amp` lines all amplitudes
//! are `1/K`.

use hi_spectra::signal::SpectralModel;
use hi_spectra::{PrecisionContext, Real};

use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub model: SpectralModel,
    pub n: Option<usize>,
    pub t: Option<Real>,
    pub eta_max: Option<Real>,
}

fn usage(line: usize, field: &str, message: impl Into<String>) -> CliError {
    CliError::Usage { field: format!("{field} (line {line})"), message: message.into() }
}

pub fn parse_model_spec(text: &str, ctx: &PrecisionContext) -> Result<ModelSpec, CliError> {
    let mut freqs = Vec::new();
    let mut amps = Vec::new();
    let (mut n, mut t, mut eta) = (None, None, None);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let real = |field: &str, v: &str| ctx.parse(v.trim()).map_err(|e| usage(line, field, e.to_string()));
        if let Some(v) = body.strip_prefix("freq ") {
            freqs.push(real("freq", v)?);
        } else if let Some(v) = body.strip_prefix("amp ") {
            amps.push(real("amp", v)?);
        } else if let Some(v) = body.strip_prefix("N:") {
            let parsed: usize = v.trim().parse().map_err(|_| usage(line, "N", format!("bad integer {:?}", v.trim())))?;
            n = Some(parsed);
        } else if let Some(v) = body.strip_prefix("T:") {
            t = Some(real("T", v)?);
        } else if let Some(v) = body.strip_prefix("eta_max:") {
            eta = Some(real("eta_max", v)?);
        } else {
            return Err(usage(line, "spec", format!("unrecognized line {body:?}")));
        }
    }
    if freqs.is_empty() {
        return Err(CliError::Usage { field: "freq".into(), message: "spec lists no frequencies".into() });
    }
    let model = if amps.is_empty() {
        SpectralModel::equal_amplitudes(freqs, ctx)
    } else if amps.len() == freqs.len() {
        SpectralModel::new(freqs, amps)
    } else {
        return Err(CliError::Usage {
            field: "amp".into(),
            message: format!("{} amp lines for {} freq lines", amps.len(), freqs.len()),
        });
    }
    .map_err(|e| CliError::Usage { field: "spec".into(), message: e.to_string() })?;
    Ok(ModelSpec { model, n, t, eta_max: eta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_and_lines() {
        let ctx = PrecisionContext::new(20).unwrap();
        let s = parse_model_spec("# demo\nN: 4\nT: 0.01\nfreq 0.5\nfreq 0.7  # second\n", &ctx).unwrap();
        assert_eq!(s.n, Some(4));
        assert_eq!(s.model.k(), 2);
        assert_eq!(s.model.amps()[0], ctx.parse("0.5").unwrap());
        assert!(s.eta_max.is_none());
    }

    #[test]
    fn offending_field_is_named() {
        let ctx = PrecisionContext::new(20).unwrap();
        let err = parse_model_spec("freq 0.5\namp x\n", &ctx).unwrap_err();
        assert!(err.to_string().contains("amp (line 2)"), "{err}");
        let err = parse_model_spec("freq 0.5\nfreq 0.6\namp 1\n", &ctx).unwrap_err();
        assert!(err.to_string().contains("amp"), "{err}");
        assert!(parse_model_spec("N: 3\n", &ctx).is_err());
    }
}

//! `hi-signal v1` text format.
//!
//! ```text
//! hi-signal v1
//! precision: <P>
//! N: <N>
//! T: <decimal>
//! eta_max: <decimal>
//! <n> <Re c_n> <Im c_n>      (n = 0..=N, P significant digits)
//! ```
//!
//! UTF-8, LF line endings, every line terminated.

use std::fmt::Write as _;

use super::SampledSignal;
use crate::error::{Error, Result};
use crate::linalg::{Complex, PrecisionContext, Real};

pub const MAGIC: &str = "hi-signal v1";

pub fn write_signal(sig: &SampledSignal, ctx: &PrecisionContext) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "precision: {}", ctx.digits());
    let _ = writeln!(out, "N: {}", sig.n());
    let _ = writeln!(out, "T: {}", ctx.fmt(&sig.span()));
    let _ = writeln!(out, "eta_max: {}", ctx.fmt(sig.noise_bound()));
    for (n, c) in sig.samples().iter().enumerate() {
        let _ = writeln!(out, "{n} {} {}", ctx.fmt(&c.re), ctx.fmt(&c.im));
    }
    out
}

fn header<'a>(lines: &mut std::iter::Enumerate<std::str::Lines<'a>>, key: &str) -> Result<(usize, &'a str)> {
    let (idx, line) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 0, message: format!("missing `{key}:` header") })?;
    let lineno = idx + 1;
    let value = line
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(": "))
        .ok_or_else(|| Error::Parse { line: lineno, message: format!("expected `{key}: <value>`") })?;
    Ok((lineno, value))
}

/// Parses a signal file. The guard digits are not part of the format and
/// are supplied by the caller.
pub fn parse_signal(text: &str, guard: u32) -> Result<(SampledSignal, PrecisionContext)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(Error::Parse { line: 1, message: format!("expected `{MAGIC}`") }),
    }
    let (ln, p) = header(&mut lines, "precision")?;
    let digits: u32 =
        p.parse().map_err(|_| Error::Parse { line: ln, message: format!("bad precision {p:?}") })?;
    let ctx = PrecisionContext::with_guard(digits, guard)
        .map_err(|e| Error::Parse { line: ln, message: e.to_string() })?;
    let bits = ctx.bits();

    let (ln, n) = header(&mut lines, "N")?;
    let n: usize = n.parse().map_err(|_| Error::Parse { line: ln, message: format!("bad N {n:?}") })?;
    if n == 0 {
        return Err(Error::Parse { line: ln, message: "N must be at least 1".into() });
    }
    let real = |ln: usize, s: &str| Real::parse(s, bits).map_err(|e| Error::Parse { line: ln, message: e.to_string() });
    let (ln, t) = header(&mut lines, "T")?;
    let t = real(ln, t)?;
    if !t.is_positive() {
        return Err(Error::Parse { line: ln, message: "T must be positive".into() });
    }
    let (ln, eta) = header(&mut lines, "eta_max")?;
    let eta = real(ln, eta)?;
    if eta.is_negative() {
        return Err(Error::Parse { line: ln, message: "eta_max must be non-negative".into() });
    }

    let mut samples = Vec::with_capacity(n + 1);
    for expected in 0..=n {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::Parse {
                line: 6 + expected,
                message: format!("missing sample {expected} (file ends after {} of {} samples)", expected, n + 1),
            });
        };
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: lineno, message: "expected `<n> <re> <im>`".into() });
        }
        if fields[0].parse::<usize>().ok() != Some(expected) {
            return Err(Error::Parse { line: lineno, message: format!("expected sample index {expected}") });
        }
        samples.push(Complex::new(real(lineno, fields[1])?, real(lineno, fields[2])?));
    }
    if let Some((idx, _)) = lines.next() {
        return Err(Error::Parse { line: idx + 1, message: "trailing content after last sample".into() });
    }
    let dt = t / ctx.int(n as i64);
    let sig = SampledSignal::new(samples, dt, eta).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    Ok((sig, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{synthesize, SpectralModel};

    fn fixture() -> (SampledSignal, PrecisionContext) {
        let ctx = PrecisionContext::new(20).unwrap();
        let m = SpectralModel::new(vec![ctx.parse("0.5").unwrap()], vec![ctx.one()]).unwrap();
        (synthesize(&m, 4, &ctx.parse("0.01").unwrap(), &ctx).unwrap(), ctx)
    }

    #[test]
    fn layout() {
        let (sig, ctx) = fixture();
        let text = write_signal(&sig, &ctx);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "hi-signal v1");
        assert_eq!(lines[1], "precision: 20");
        assert_eq!(lines[2], "N: 4");
        assert_eq!(lines[3], "T: 1.0000000000000000000e-2");
        assert_eq!(lines[4], "eta_max: 0");
        assert_eq!(lines[5], "0 1.0000000000000000000e0 0");
        assert_eq!(lines.len(), 10);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn reparse_is_stable() {
        let (sig, ctx) = fixture();
        let text = write_signal(&sig, &ctx);
        let (back, ctx2) = parse_signal(&text, ctx.guard()).unwrap();
        assert_eq!(ctx2, ctx);
        assert_eq!(write_signal(&back, &ctx2), text);
    }

    #[test]
    fn truncated_file_names_missing_sample() {
        let (sig, ctx) = fixture();
        let text = write_signal(&sig, &ctx);
        let cut: String = text.lines().take(7).map(|l| format!("{l}\n")).collect();
        let err = parse_signal(&cut, 15).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 8);
                assert!(message.contains("missing sample 2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_header_reports_line() {
        let err = parse_signal("hi-signal v1\nprecision: x\n", 15).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_signal("nope\n", 15).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}

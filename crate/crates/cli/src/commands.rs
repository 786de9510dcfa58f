use std::fmt::Write as _;
use std::path::Path;

use hi_spectra::experiments::{
    certainty_sweep, pair_frequencies, run_table1, sweep_model, SweepRow, SWEEP_N, SWEEP_PRECISION, SWEEP_T,
    TABLE1_LAMBDA_MIN, TABLE1_MAX_ERROR, TABLE1_OMEGA, TABLE1_PRECISION,
};
use hi_spectra::inversion::{invert, InversionResult};
use hi_spectra::lambda::monte_carlo_a_with;
use hi_spectra::signal::{add_noise, parse_signal, synthesize, write_signal, NoiseSpec, SpectralModel};
use hi_spectra::{PrecisionContext, Real};

use crate::spec_file::{parse_model_spec, ModelSpec};
use crate::{Cli, CliError, Command, Fig1Args, Format, GlobalArgs, InvertArgs, Outcome, SweepArgs, SynthArgs};

pub const DEFAULT_PRECISION: u32 = TABLE1_PRECISION;
pub const FIG1_PRECISION: u32 = 40;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Synth(a) => cmd_synth(a, g),
        Command::Invert(a) => cmd_invert(a, g),
        Command::Table1 => cmd_table1(g),
        Command::Fig1(a) => cmd_fig1(a, g),
        Command::CertaintySweep(a) => cmd_certainty_sweep(a, g),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn num(ctx: &PrecisionContext, x: &Real) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        ctx.fmt(x)
    }
}

fn parse_real(ctx: &PrecisionContext, field: &str, v: &str) -> Result<Real, CliError> {
    ctx.parse(v.trim()).map_err(|e| CliError::usage(field, e.to_string()))
}

fn threshold(g: &GlobalArgs, ctx: &PrecisionContext) -> Result<Option<Real>, CliError> {
    let th = g.threshold.as_deref().map(|s| parse_real(ctx, "threshold", s)).transpose()?;
    if th.as_ref().is_some_and(|t| !t.is_positive()) {
        return Err(CliError::usage("threshold", "must be positive"));
    }
    Ok(th)
}

fn load_spec(path: &Option<std::path::PathBuf>, ctx: &PrecisionContext) -> Result<Option<ModelSpec>, CliError> {
    path.as_ref().map(|p| parse_model_spec(&read(p)?, ctx)).transpose()
}

fn cmd_synth(a: &SynthArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let ctx = g.context(DEFAULT_PRECISION)?;
    let spec = load_spec(&a.spec, &ctx)?;
    let model = match (&spec, a.freqs.is_empty()) {
        (Some(_), false) => return Err(CliError::usage("freq", "give either --spec or --freq, not both")),
        (Some(s), true) => s.model.clone(),
        (None, false) => {
            let freqs = a.freqs.iter().map(|f| parse_real(&ctx, "freq", f)).collect::<Result<Vec<_>, _>>()?;
            if a.amps.is_empty() {
                SpectralModel::equal_amplitudes(freqs, &ctx)
            } else {
                if a.amps.len() != freqs.len() {
                    return Err(CliError::usage("amp", format!("{} amplitudes for {} frequencies", a.amps.len(), freqs.len())));
                }
                let amps = a.amps.iter().map(|d| parse_real(&ctx, "amp", d)).collect::<Result<Vec<_>, _>>()?;
                SpectralModel::new(freqs, amps)
            }
            .map_err(|e| CliError::usage("model", e.to_string()))?
        }
        (None, true) => return Err(CliError::usage("freq", "no model given (use --spec or --freq)")),
    };
    let n = a.n.or(spec.as_ref().and_then(|s| s.n)).ok_or_else(|| CliError::usage("N", "missing sample count"))?;
    let t = match &a.t {
        Some(v) => parse_real(&ctx, "T", v)?,
        None => spec.as_ref().and_then(|s| s.t.clone()).ok_or_else(|| CliError::usage("T", "missing signal span"))?,
    };
    let eta = match &a.eta {
        Some(v) => parse_real(&ctx, "eta", v)?,
        None => spec.as_ref().and_then(|s| s.eta_max.clone()).unwrap_or_else(|| ctx.zero()),
    };
    if eta.is_negative() {
        return Err(CliError::usage("eta", "must be non-negative"));
    }
    let clean = synthesize(&model, n, &t, &ctx).map_err(|e| CliError::usage("model", e.to_string()))?;
    let sig = if eta.is_zero() { clean } else { add_noise(&clean, &NoiseSpec { eta_max: eta.clone(), seed: g.seed }, &ctx) };
    let mut summary = format!("c_0 = {}  eta_max = {}", ctx.fmt(&sig.samples()[0].re), ctx.fmt(&eta));
    if sig.is_underdetermined() {
        summary.push_str("  (warning: fewer sampling intervals than lines)");
    }
    Ok(Outcome { output: write_signal(&sig, &ctx), summary, code: 0 })
}

fn rank_line(res: &InversionResult) -> String {
    match &res.rank.ambiguity {
        None => "ok".into(),
        Some(a) => format!("ambiguous: {a}"),
    }
}

fn cmd_invert(a: &InvertArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let text = read(&a.file)?;
    let (sig, ctx) =
        parse_signal(&text, crate::guard_digits()?).map_err(|source| CliError::Input { path: a.file.clone(), source })?;
    let th = threshold(g, &ctx)?;
    let truth = load_spec(&a.truth, &ctx)?;
    let res = invert(&sig, th.as_ref(), &ctx)?;

    let mut truth_of: Vec<Option<(Real, Real)>> = vec![None; res.freqs.len()];
    let mut k_mismatch = false;
    if let Some(t) = &truth {
        for (i, j, d) in pair_frequencies(&res.freqs, t.model.freqs()) {
            truth_of[i] = Some((t.model.freqs()[j].clone(), d));
        }
        k_mismatch = t.model.k() != res.k_detected();
    }
    let format = g.format.unwrap_or(Format::Report);
    let mut out = String::new();
    match format {
        Format::Report => {
            let _ = writeln!(out, "hi-spectra invert");
            let _ = writeln!(out, "precision: {}", ctx.digits());
            let _ = writeln!(out, "guard: {}", ctx.guard());
            let _ = writeln!(out, "N: {}", res.n);
            let _ = writeln!(out, "T: {}", ctx.fmt(&res.t));
            let _ = writeln!(out, "eta_max: {}", ctx.fmt(sig.noise_bound()));
            let _ = writeln!(out, "threshold: {}", ctx.fmt(&res.threshold));
            let _ = writeln!(out, "K_detected: {}", res.k_detected());
            if let Some(t) = &truth {
                let _ = writeln!(out, "K_true: {}", t.model.k());
            }
            let _ = writeln!(out, "lambda_min: {}", ctx.fmt(&res.lambda_min));
            let _ = writeln!(out, "bound: {}", num(&ctx, &res.bound));
            let _ = writeln!(out, "roundoff_bound: {}", num(&ctx, &res.roundoff_bound));
            let _ = writeln!(out, "residual: {}", ctx.fmt(&res.residual));
            let _ = writeln!(out, "rank: {}", rank_line(&res));
            let _ = writeln!(out, "omega omega_recovered abs_error amplitude");
            for (i, w) in res.freqs.iter().enumerate() {
                let (tw, d) = match &truth_of[i] {
                    Some((tw, d)) => (ctx.fmt(tw), ctx.fmt(d)),
                    None => ("-".into(), "-".into()),
                };
                let _ = writeln!(out, "{tw} {} {d} {}", ctx.fmt(w), ctx.fmt(&res.amps[i]));
            }
        }
        Format::Csv => {
            let _ = writeln!(out, "omega,omega_recovered,abs_error,amplitude");
            for (i, w) in res.freqs.iter().enumerate() {
                let (tw, d) = match &truth_of[i] {
                    Some((tw, d)) => (ctx.fmt(tw), ctx.fmt(d)),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(out, "{tw},{},{d},{}", ctx.fmt(w), ctx.fmt(&res.amps[i]));
            }
        }
    }
    let ambiguous = res.is_ambiguous() || k_mismatch;
    let summary = format!(
        "K_detected = {}  lambda_min = {}  rank {}{}",
        res.k_detected(),
        res.lambda_min.to_sci_string(4),
        rank_line(&res),
        if k_mismatch { "  (differs from the true line count)" } else { "" }
    );
    Ok(Outcome { output: out, summary, code: if ambiguous { 2 } else { 0 } })
}

fn cmd_table1(g: &GlobalArgs) -> Result<Outcome, CliError> {
    let ctx = g.context(DEFAULT_PRECISION)?;
    let run = run_table1(&ctx)?;
    let status = |b: bool| if b { "PASS" } else { "FAIL" };
    let opt = |x: &Option<Real>| x.as_ref().map(|v| ctx.fmt(v)).unwrap_or_else(|| "-".into());
    let mut out = String::new();
    match g.format.unwrap_or(Format::Report) {
        Format::Report => {
            let _ = writeln!(out, "hi-spectra table1");
            let _ = writeln!(out, "precision: {}", ctx.digits());
            let _ = writeln!(out, "guard: {}", ctx.guard());
            let _ = writeln!(out, "N: {}", run.result.n);
            let _ = writeln!(out, "T: {}", ctx.fmt(&run.result.t));
            let _ = writeln!(out, "K_detected: {}", run.result.k_detected());
            let _ = writeln!(out, "rank: {}", rank_line(&run.result));
            let _ = writeln!(out, "omega omega_recovered abs_error published published_diff status");
            for r in &run.rows {
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {}",
                    ctx.fmt(&r.omega),
                    opt(&r.recovered),
                    opt(&r.error),
                    ctx.fmt(&r.published),
                    opt(&r.published_diff),
                    status(r.pass)
                );
            }
            let _ = writeln!(
                out,
                "lambda_min: {} reference {} ratio {} {}",
                ctx.fmt(&run.result.lambda_min),
                TABLE1_LAMBDA_MIN,
                run.lambda_ratio.to_sci_string(4),
                status(run.lambda_ok())
            );
            let _ = writeln!(out, "max_error: {} published {}", ctx.fmt(&run.max_error), TABLE1_MAX_ERROR);
            let _ = writeln!(out, "bound: {}", num(&ctx, &run.result.bound));
            let _ = writeln!(out, "rows_passed: {}/{}", run.rows_passed(), run.rows.len());
        }
        Format::Csv => {
            let _ = writeln!(out, "omega,omega_recovered,abs_error,published,published_diff,status");
            for r in &run.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    ctx.fmt(&r.omega),
                    opt(&r.recovered),
                    opt(&r.error),
                    ctx.fmt(&r.published),
                    opt(&r.published_diff),
                    status(r.pass)
                );
            }
        }
    }
    let code = if !run.rank_ok() {
        2
    } else if run.rows_passed() == run.rows.len() && run.lambda_ok() {
        0
    } else {
        1
    };
    let summary = format!(
        "K_detected = {}/{}  rows {}/{} PASS  lambda_min ratio {}",
        run.result.k_detected(),
        TABLE1_OMEGA.len(),
        run.rows_passed(),
        run.rows.len(),
        run.lambda_ratio.to_sci_string(3)
    );
    Ok(Outcome { output: out, summary, code })
}

fn cmd_fig1(a: &Fig1Args, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if a.k_min < 2 || a.k_min > a.k_max {
        return Err(CliError::usage("k-min", "need 2 <= k-min <= k-max"));
    }
    if a.trials == 0 {
        return Err(CliError::usage("trials", "need at least one trial"));
    }
    let ctx = g.context(FIG1_PRECISION)?;
    let t = parse_real(&ctx, "T", &a.t)?;
    let mut out = String::new();
    let format = g.format.unwrap_or(Format::Csv);
    match format {
        Format::Csv => out.push_str("K,a_mode,a_p05,a_p95\n"),
        Format::Report => out.push_str("K N trials redraws a_mode a_p05 a_p95\n"),
    }
    let mut redraws = 0;
    for k in a.k_min..=a.k_max {
        let n = a.n.unwrap_or(k);
        let s = monte_carlo_a_with(g.execution(), k, a.trials, g.seed, n, &t, &ctx)?;
        redraws += s.redraws;
        let (m, lo, hi) = (ctx.fmt(&s.mode), ctx.fmt(&s.p05), ctx.fmt(&s.p95));
        let _ = match format {
            Format::Csv => writeln!(out, "{k},{m},{lo},{hi}"),
            Format::Report => writeln!(out, "{k} {n} {} {} {m} {lo} {hi}", s.trials, s.redraws),
        };
    }
    let summary = format!("K = {}..={}  trials {}  redraws {redraws}", a.k_min, a.k_max, a.trials);
    Ok(Outcome { output: out, summary, code: 0 })
}

fn sweep_csv_row(ctx: &PrecisionContext, r: &SweepRow) -> String {
    let kmin = r.trials.iter().map(|t| t.k_detected).min().unwrap_or(0);
    let kmax = r.trials.iter().map(|t| t.k_detected).max().unwrap_or(0);
    let amb = r.trials.iter().filter(|t| t.ambiguous).count();
    format!(
        "{},{},{},{},{kmin},{kmax},{amb}",
        ctx.fmt(&r.eta),
        ctx.fmt(&r.measured),
        ctx.fmt(&r.bound),
        ctx.fmt(&r.ratio)
    )
}

fn cmd_certainty_sweep(a: &SweepArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let ctx = g.context(SWEEP_PRECISION)?;
    let spec = load_spec(&a.spec, &ctx)?;
    let model = match &spec {
        Some(s) => s.model.clone(),
        None => sweep_model(&ctx)?,
    };
    let n = a.n.or(spec.as_ref().and_then(|s| s.n)).unwrap_or(SWEEP_N);
    let t = match (&a.t, spec.as_ref().and_then(|s| s.t.clone())) {
        (Some(v), _) => parse_real(&ctx, "T", v)?,
        (None, Some(t)) => t,
        (None, None) => ctx.parse(SWEEP_T)?,
    };
    let etas = a.etas.iter().map(|e| parse_real(&ctx, "eta", e)).collect::<Result<Vec<_>, _>>()?;
    if etas.iter().any(Real::is_negative) {
        return Err(CliError::usage("eta", "noise levels must be non-negative"));
    }
    if etas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::usage("eta", "noise levels must be strictly descending"));
    }
    if a.seeds == 0 {
        return Err(CliError::usage("seeds", "need at least one seed"));
    }
    let seeds: Vec<u64> = (0..a.seeds).map(|i| g.seed.wrapping_add(i)).collect();
    let rows = certainty_sweep(g.execution(), &model, n, &t, &etas, &seeds, &ctx)?;

    let mut out = String::new();
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => out.push_str("eta,measured,bound,ratio,k_detected_min,k_detected_max,ambiguous\n"),
        Format::Report => {
            let _ = writeln!(out, "hi-spectra certainty-sweep");
            let _ = writeln!(out, "precision: {}", ctx.digits());
            let _ = writeln!(out, "K: {}", model.k());
            let _ = writeln!(out, "N: {n}");
            let _ = writeln!(out, "T: {}", ctx.fmt(&t));
            let _ = writeln!(out, "seeds: {}", seeds.len());
            out.push_str("eta measured bound ratio k_detected_min k_detected_max ambiguous\n");
        }
    }
    let sep = if g.format == Some(Format::Report) { " " } else { "," };
    let mut violations = Vec::new();
    for r in &rows {
        let line = sweep_csv_row(&ctx, r);
        out.push_str(&line.replace(',', sep));
        out.push('\n');
        for tr in r.trials.iter().filter(|tr| !tr.within_bound()) {
            violations.push(format!(
                "eta {} seed {}: measured {} > bound {}",
                tr.eta.to_sci_string(3),
                tr.seed,
                tr.measured.to_sci_string(6),
                tr.bound.to_sci_string(6)
            ));
        }
    }
    let mismatched = rows.iter().flat_map(|r| &r.trials).filter(|t| t.k_detected != model.k()).count();
    let mut summary = format!("{} levels x {} seeds", rows.len(), seeds.len());
    if mismatched > 0 {
        let _ = write!(summary, "  ({mismatched} trials resolved fewer than K lines)");
    }
    if !violations.is_empty() {
        let _ = write!(summary, "\n{}", CliError::BoundViolation(violations.join("; ")));
        return Ok(Outcome { output: out, summary, code: 1 });
    }
    Ok(Outcome { output: out, summary, code: 0 })
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hi_spectra::{PrecisionContext, Real};
use proptest::prelude::*;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_hi-spectra");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("HI_SPECTRA_GUARD_DIGITS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Value of a `key: value` header line in a report.
fn header<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} line in\n{report}"))
}

fn table_rows(report: &str) -> Vec<Vec<String>> {
    report
        .lines()
        .skip_while(|l| !l.starts_with("omega "))
        .skip(1)
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect()
}

fn mantissa_digits(v: &str) -> usize {
    let m = v.split('e').next().unwrap();
    m.chars().filter(char::is_ascii_digit).count()
}

#[test]
fn single_unit_line_synthesizes_unit_c0() {
    let out = run(&["synth", "--freq", "1.5", "-n", "4", "-t", "1", "--precision", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let samples: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("eta_max")).skip(1).collect();
    assert_eq!(samples.len(), 5);
    let c0: Vec<&str> = samples[0].split_whitespace().collect();
    assert_eq!(c0[0], "0");
    let ctx = PrecisionContext::new(20).unwrap();
    assert_eq!(ctx.parse(c0[1]).unwrap(), ctx.one());
    assert_eq!(ctx.parse(c0[2]).unwrap(), ctx.zero());
}

#[test]
fn noise_is_reproducible_from_the_seed() {
    let args = |seed: &'static str| {
        ["synth", "--freq", "0.3,0.9", "-n", "6", "-t", "2", "--eta", "1e-10", "--precision", "30", "--seed", seed]
    };
    let a = stdout(&run(&args("7")));
    let b = stdout(&run(&args("7")));
    let c = stdout(&run(&args("8")));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn truncated_file_names_the_missing_sample() {
    let dir = TempDir::new().unwrap();
    let full = stdout(&run(&["synth", "--freq", "1.5", "-n", "4", "-t", "1", "--precision", "20"]));
    let cut: Vec<&str> = full.lines().collect();
    let path = write(&dir, "cut.txt", &(cut[..cut.len() - 1].join("\n") + "\n"));
    let out = run(&["invert", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing sample 4"), "{}", stderr(&out));
}

#[test]
fn single_line_inverts_to_precision() {
    let dir = TempDir::new().unwrap();
    let signal = dir.path().join("one.txt");
    let p = 40;
    let synth = run(&["synth", "--freq", "2.25", "-n", "4", "-t", "1", "--precision", "40", "--out", s(&signal)]);
    assert!(synth.status.success());
    let truth = write(&dir, "truth.txt", "freq 2.25\n");
    let out = run(&["invert", s(&signal), "--truth", s(&truth)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout(&out);
    let rows = table_rows(&report);
    assert_eq!(rows.len(), 1);
    let ctx = PrecisionContext::new(p).unwrap();
    let err = ctx.parse(&rows[0][2]).unwrap();
    assert!(err <= ctx.pow10(10 - i64::from(p)), "error {}", rows[0][2]);
    for v in &rows[0] {
        assert_eq!(mantissa_digits(v), p as usize, "{v}");
    }
    assert_eq!(ctx.parse(&rows[0][0]).unwrap(), ctx.parse("2.25").unwrap());
}

#[test]
fn lost_line_exits_with_rank_code() {
    let dir = TempDir::new().unwrap();
    let spec = "N: 9\nT: 0.01\neta_max: 1e-30\nfreq 0.55\nfreq 0.63\nfreq 0.71\nfreq 0.82\nfreq 0.94\n";
    let spec_path = write(&dir, "model.txt", spec);
    let signal = dir.path().join("noisy.txt");
    assert!(run(&["synth", "--spec", s(&spec_path), "--precision", "70", "--out", s(&signal)]).status.success());
    let out = run(&["invert", s(&signal), "--truth", s(&spec_path)]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert_eq!(header(&stdout(&out), "K_true"), "5");
}

#[test]
fn table1_at_forty_digits_reports_rank_failure() {
    let out = run(&["table1", "--precision", "40"]);
    assert_eq!(out.status.code(), Some(2));
    let k: usize = header(&stdout(&out), "K_detected").parse().unwrap();
    assert!(k < 10);
}

#[test]
fn fig1_single_trial_row() {
    let out = run(&["fig1", "--k-min", "2", "--k-max", "2", "--trials", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "K,a_mode,a_p05,a_p95");
    assert_eq!(lines.len(), 2);
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols[0], "2");
    assert!(cols[1] == cols[2] && cols[2] == cols[3]);
}

#[test]
fn fig1_is_deterministic_and_thread_independent() {
    let args = ["fig1", "--k-min", "2", "--k-max", "4", "--trials", "12", "--seed", "3", "--format", "csv"];
    let a = stdout(&run(&args));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a, stdout(&run(&seq)));
}

#[test]
fn zero_noise_sweep_sits_at_roundoff() {
    let out = run(&["certainty-sweep", "--eta", "0", "--seeds", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eta,measured,bound,ratio,k_detected_min,k_detected_max,ambiguous");
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols[0], "0");
    let ctx = PrecisionContext::new(70).unwrap();
    let ratio = ctx.parse(cols[3]).unwrap();
    assert!(ratio.is_positive() && ratio <= ctx.one());
    assert!(ctx.parse(cols[1]).unwrap() <= ctx.pow10(-50));
}

#[test]
fn sweep_rejects_ascending_noise_levels() {
    let out = run(&["certainty-sweep", "--eta", "1e-40,1e-30", "--seeds", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("descending"));
}

#[test]
fn guard_digits_come_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let signal = dir.path().join("g.txt");
    assert!(run(&["synth", "--freq", "1", "-n", "3", "-t", "1", "--precision", "20", "--out", s(&signal)]).status.success());
    let with = |g: &str| Command::new(BIN).args(["invert", s(&signal)]).env("HI_SPECTRA_GUARD_DIGITS", g).output().unwrap();
    assert_eq!(header(&stdout(&with("22")), "guard"), "22");
    assert_eq!(header(&stdout(&run(&["invert", s(&signal)])), "guard"), "15");
    assert_eq!(with("lots").status.code(), Some(1));
}

#[test]
fn bad_spec_names_the_field() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.txt", "freq 1\namp nope\n");
    let out = run(&["synth", "--spec", s(&spec), "-n", "3", "-t", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("amp (line 2)"), "{}", stderr(&out));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn synth_then_invert_stays_within_bound(
        start in 0.0..1.0f64,
        gaps in prop::collection::vec(0.6..1.5f64, 0..3),
        seed in 0u64..1000,
    ) {
        let dir = TempDir::new().unwrap();
        let mut freqs = vec![start];
        for g in &gaps {
            freqs.push(freqs.last().unwrap() + g);
        }
        let k = freqs.len();
        let n = 2 * k + 2;
        let spec: String = format!("N: {n}\nT: 1\neta_max: 1e-40\n")
            + &freqs.iter().map(|w| format!("freq {w:e}\n")).collect::<String>();
        let spec_path = write(&dir, "m.txt", &spec);
        let signal = dir.path().join("sig.txt");
        let seed = seed.to_string();
        let synth = run(&["synth", "--spec", s(&spec_path), "--precision", "60", "--seed", &seed, "--out", s(&signal)]);
        prop_assert!(synth.status.success());
        let out = run(&["invert", s(&signal), "--truth", s(&spec_path)]);
        prop_assert_eq!(out.status.code(), Some(0));
        let report = stdout(&out);
        let ctx = PrecisionContext::new(60).unwrap();
        let bound = ctx.parse(header(&report, "bound")).unwrap();
        let rows = table_rows(&report);
        prop_assert_eq!(rows.len(), k);
        let worst = rows.iter().map(|r| ctx.parse(&r[2]).unwrap()).fold(ctx.zero(), Real::max);
        prop_assert!(worst <= bound);
    }
}

use hi_spectra::experiments::{run_table1, TABLE1_MAX_ERROR, TABLE1_PRECISION};
use hi_spectra::linalg::{PrecisionContext, Real};

#[test]
fn eigenvalues_sit_on_the_unit_circle() {
    let ctx = PrecisionContext::new(TABLE1_PRECISION).unwrap();
    let run = run_table1(&ctx).unwrap();
    let worst = run.result.moduli.iter().map(|m| (m - &ctx.one()).abs()).fold(ctx.zero(), Real::max);
    assert!(worst <= ctx.pow10(-10), "max ||u| - 1| = {}", worst.to_sci_string(3));
}

#[test]
fn more_digits_do_not_worsen_the_error() {
    let ctx = PrecisionContext::new(100).unwrap();
    let run = run_table1(&ctx).unwrap();
    assert_eq!(run.result.k_detected(), 10);
    assert!(run.max_error <= ctx.parse(TABLE1_MAX_ERROR).unwrap(), "max error {}", run.max_error.to_sci_string(3));
}

#[test]
fn forty_digits_lose_lines() {
    let ctx = PrecisionContext::new(40).unwrap();
    let run = run_table1(&ctx).unwrap();
    assert!(run.result.k_detected() < 10);
    assert!(!run.rank_ok());
}

use zeitlin_oracle::{cross_check, DEFAULT_LIMIT};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::ranges::parse_list;
use crate::report::Emitter;

pub struct OracleArgs {
    pub n_spec: String,
    pub quotient: bool,
}

/// Runs the dense-matrix verification battery for each requested N.
/// Always exact-vs-oracle; the engine flag does not apply here.
pub fn run(args: &OracleArgs, config: &RunConfig) -> Result<i32, CliError> {
    let ns = parse_list(&args.n_spec, "N")?;
    for &n in &ns {
        if !(2..=DEFAULT_LIMIT).contains(&n) {
            return Err(CliError::usage(format!(
                "oracle runs need 2 <= N <= {DEFAULT_LIMIT}, got {n}"
            )));
        }
        if args.quotient && n < 3 {
            return Err(CliError::usage("quotient checks need N >= 3"));
        }
    }

    let mut out = Emitter::default();
    let mut all_pass = true;
    for &n in &ns {
        let report = cross_check(n, args.quotient)?;
        all_pass &= report.pass;
        match config.format {
            Format::Json => out.push(serde_json::to_string(&report).unwrap()),
            Format::Csv => {
                let worst = report
                    .comparisons
                    .iter()
                    .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
                    .expect("battery is never empty");
                out.push(format!(
                    "N={n}: {} comparisons, worst rel err {:.3e} ({}, l={}): {}",
                    report.comparisons.len(),
                    worst.rel_err,
                    worst.check,
                    worst.l,
                    if report.pass { "ok" } else { "FAIL" }
                ));
                for c in report.comparisons.iter().filter(|c| !c.pass) {
                    out.push(serde_json::to_string(c).unwrap());
                }
            }
        }
        if config.progress {
            eprintln!("N={n} done");
        }
    }
    print!("{}", out.finish());
    Ok(if all_pass { 0 } else { 1 })
}

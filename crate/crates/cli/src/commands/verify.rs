use std::str::FromStr;

use zeitlin_core::identities::{
    check_identity, unknown_term_sums, verify_range, IdentityId, IdentityReport, VerifySummary,
};
use zeitlin_core::wigner::SphereSymbols;

use zeitlin_core::rational::ratio_string;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::ranges::parse_list;
use crate::report::{csv_row, ratio_decimal, Emitter};

pub struct VerifyArgs {
    pub ids: Option<String>,
    pub n_spec: String,
    pub j: Option<u32>,
    pub l: Option<u32>,
    pub unknown_sums: bool,
}

fn chosen_ids(spec: &Option<String>) -> Result<Vec<IdentityId>, CliError> {
    match spec {
        None => Ok(IdentityId::ALL.to_vec()),
        Some(name) => Ok(vec![IdentityId::from_str(name)?]),
    }
}

/// Exact identity verification. All checks run on the exact engine no
/// matter what `--engine` says; a single nonzero residual fails the run.
pub fn run(args: &VerifyArgs, config: &RunConfig) -> Result<i32, CliError> {
    let ns = parse_list(&args.n_spec, "N")?;

    if args.unknown_sums {
        return emit_unknown_sums(args, &ns, config);
    }

    let ids = chosen_ids(&args.ids)?;

    if args.j.is_some() || args.l.is_some() {
        return run_single_pair(args, &ids, &ns, config);
    }

    let mut total = VerifySummary { checks: 0, failures: 0, first_failure: None };
    for &n in &ns {
        let summary = verify_range(&ids, n, n)?;
        total.checks += summary.checks;
        total.failures += summary.failures;
        if total.first_failure.is_none() {
            total.first_failure = summary.first_failure;
        }
        if config.progress {
            eprintln!("N={n} done ({} checks)", summary.checks);
        }
    }

    match config.format {
        Format::Json => println!("{}", serde_json::to_string(&total).unwrap()),
        Format::Csv => {
            println!(
                "identities: {}  truncations: {}  checks: {}  failures: {}",
                ids.len(),
                ns.len(),
                total.checks,
                total.failures
            );
            if let Some(report) = &total.first_failure {
                println!("first failure: {}", serde_json::to_string(report).unwrap());
            }
        }
    }
    Ok(if total.failures == 0 { 0 } else { 1 })
}

fn run_single_pair(
    args: &VerifyArgs,
    ids: &[IdentityId],
    ns: &[u32],
    config: &RunConfig,
) -> Result<i32, CliError> {
    let j = args
        .j
        .ok_or_else(|| CliError::usage("--l without --j; give the row index too"))?;
    let mut reports: Vec<IdentityReport> = Vec::new();
    for &n in ns {
        let sphere = SphereSymbols::new(n)?;
        for &id in ids {
            let l = match (id.uses_l(), args.l) {
                (true, Some(l)) => l,
                (true, None) => {
                    return Err(CliError::usage(format!(
                        "identity {id} needs --l alongside --j"
                    )))
                }
                (false, _) => 0,
            };
            reports.push(check_identity(&sphere, id, j, l)?);
        }
    }
    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push("identity,N,j,l,lhs,rhs,residual,pass".to_string());
    }
    let mut failed = false;
    for report in &reports {
        failed |= !report.pass;
        match config.format {
            Format::Json => out.push(serde_json::to_string(report).unwrap()),
            Format::Csv => out.push(csv_row(&[
                report.identity.to_string(),
                report.n.to_string(),
                report.j.to_string(),
                report.l.to_string(),
                ratio_string(&report.lhs),
                ratio_string(&report.rhs),
                ratio_string(&report.residual),
                report.pass.to_string(),
            ])),
        }
    }
    print!("{}", out.finish());
    Ok(if failed { 1 } else { 0 })
}

fn emit_unknown_sums(args: &VerifyArgs, ns: &[u32], config: &RunConfig) -> Result<i32, CliError> {
    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push("N,j,l,alternating,odd_diagonal,alternating_dec,odd_diagonal_dec".to_string());
    }
    for &n in ns {
        if n < 2 {
            return Err(CliError::usage("unknown-term sums need N >= 2"));
        }
        let sphere = SphereSymbols::new(n)?;
        let js: Vec<u32> = match args.j {
            Some(j) => vec![j],
            None => (1..n).collect(),
        };
        let ls: Vec<u32> = match args.l {
            Some(l) => vec![l],
            None => (1..n).collect(),
        };
        for &j in &js {
            for &l in &ls {
                let sums = unknown_term_sums(&sphere, j, l)?;
                match config.format {
                    Format::Json => out.push(serde_json::to_string(&sums).unwrap()),
                    Format::Csv => out.push(csv_row(&[
                        n.to_string(),
                        j.to_string(),
                        l.to_string(),
                        zeitlin_core::rational::ratio_string(&sums.alternating),
                        zeitlin_core::rational::ratio_string(&sums.odd_diagonal),
                        ratio_decimal(&sums.alternating, config.digits),
                        ratio_decimal(&sums.odd_diagonal, config.digits),
                    ])),
                }
            }
        }
        if config.progress {
            eprintln!("N={n} done");
        }
    }
    print!("{}", out.finish());
    Ok(0)
}

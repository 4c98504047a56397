use serde_json::json;

use zeitlin_core::rational::ratio_string;
use zeitlin_core::ricci::{
    asymptotic_gap, averaged_plus_float, averaged_ricci_float, ricci_row, transition_scan,
};
use zeitlin_core::wigner::{odd_parity_max_ratio, SphereSymbols};

use crate::config::{Engine, Format, RunConfig};
use crate::error::CliError;
use crate::ranges::parse_list;
use crate::report::{csv_row, float_decimal, ratio_decimal, Emitter};

pub struct AsymptoteArgs {
    pub ell: Option<String>,
    pub n_spec: Option<String>,
    pub gap: bool,
    pub transition: bool,
    pub odd_bound: bool,
}

/// Emits plot-ready large-N trend data: averaged curvature and its gap to
/// the limiting value, the first positive wavenumber per N, or the observed
/// odd-parity symbol bound. Every value row carries a certified error
/// column (zero under the exact engine).
pub fn run(args: &AsymptoteArgs, config: &RunConfig) -> Result<i32, CliError> {
    let ns = parse_list(
        args.n_spec.as_deref().ok_or_else(|| CliError::usage("give --N"))?,
        "N",
    )?;
    if args.transition {
        return emit_transitions(&ns, config);
    }
    if args.odd_bound {
        return emit_odd_bound(&ns, config);
    }

    let ells = parse_list(
        args.ell.as_deref().ok_or_else(|| CliError::usage("give --ell (or --transition / --odd-bound)"))?,
        "ell",
    )?;
    let gap_mode = args.gap || ells.iter().all(|&l| l >= 2);
    if gap_mode {
        if let Some(&l) = ells.iter().find(|&&l| l < 2) {
            return Err(CliError::usage(format!(
                "the gap column is defined for l >= 2 only, got l = {l}"
            )));
        }
    }

    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push(
            if gap_mode { "N,ell,r_avg,r_avg_err,gap,gap_err" } else { "N,ell,r_avg,r_avg_err" }
                .to_string(),
        );
    }
    for &n in &ns {
        let sphere = SphereSymbols::new(n)?;
        for &l in &ells {
            let (r_avg, avg_err, gap, gap_err) = match config.engine_for(n) {
                Engine::Exact => {
                    let row = ricci_row(&sphere, l)?;
                    let gap = if gap_mode {
                        Some(ratio_decimal(&asymptotic_gap(&sphere, l)?, config.digits))
                    } else {
                        None
                    };
                    (ratio_decimal(&row.r_avg, config.digits), "0".to_string(), gap, "0".to_string())
                }
                Engine::Float => {
                    let (v, e) = averaged_ricci_float(&sphere, l, config.float_target_error)?;
                    let (gap, gap_err) = if gap_mode {
                        let (g, ge) = averaged_plus_float(&sphere, l, config.float_target_error)?;
                        (Some(float_decimal(g, config.digits)), format!("{ge:e}"))
                    } else {
                        (None, "0".to_string())
                    };
                    (float_decimal(v, config.digits), format!("{e:e}"), gap, gap_err)
                }
            };
            match config.format {
                Format::Csv => {
                    let mut cells =
                        vec![n.to_string(), l.to_string(), r_avg.clone(), avg_err.clone()];
                    if gap_mode {
                        cells.push(gap.clone().unwrap_or_default());
                        cells.push(gap_err.clone());
                    }
                    out.push(csv_row(&cells));
                }
                Format::Json => {
                    let mut v = json!({"N": n, "ell": l, "r_avg": r_avg, "r_avg_err": avg_err});
                    if gap_mode {
                        let obj = v.as_object_mut().unwrap();
                        obj.insert("gap".into(), json!(gap));
                        obj.insert("gap_err".into(), json!(gap_err));
                    }
                    out.push(v.to_string());
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

fn emit_transitions(ns: &[u32], config: &RunConfig) -> Result<i32, CliError> {
    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push("N,first_positive,ratio".to_string());
    }
    for &n in ns {
        let sphere = SphereSymbols::new(n)?;
        let report = transition_scan(&sphere)?;
        match config.format {
            Format::Json => out.push(serde_json::to_string(&report).unwrap()),
            Format::Csv => out.push(csv_row(&[
                n.to_string(),
                report.first_positive.map(|l| l.to_string()).unwrap_or_default(),
                report.ratio.map(|r| float_decimal(r, config.digits)).unwrap_or_default(),
            ])),
        }
        if config.progress {
            eprintln!("N={n} done");
        }
    }
    print!("{}", out.finish());
    Ok(0)
}

fn emit_odd_bound(ns: &[u32], config: &RunConfig) -> Result<i32, CliError> {
    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push("N,max_ratio,max_ratio_dec,i,j,l".to_string());
    }
    for &n in ns {
        let sphere = SphereSymbols::new(n)?;
        let (max, [i, j, l]) = odd_parity_max_ratio(&sphere)?;
        match config.format {
            Format::Json => out.push(
                json!({
                    "N": n,
                    "max_ratio": ratio_string(&max),
                    "max_ratio_dec": ratio_decimal(&max, config.digits),
                    "i": i, "j": j, "l": l,
                })
                .to_string(),
            ),
            Format::Csv => out.push(csv_row(&[
                n.to_string(),
                ratio_string(&max),
                ratio_decimal(&max, config.digits),
                i.to_string(),
                j.to_string(),
                l.to_string(),
            ])),
        }
        if config.progress {
            eprintln!("N={n} done");
        }
    }
    print!("{}", out.finish());
    Ok(0)
}

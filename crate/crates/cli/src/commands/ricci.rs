use rayon::prelude::*;
use serde_json::json;

use zeitlin_core::rational::{parse_ratio, ratio_string};
use zeitlin_core::ricci::{
    averaged_plus_float, averaged_ricci_float, ricci_row, sign_table, RicciRow, Sign,
};
use zeitlin_core::wigner::SphereSymbols;
use zeitlin_core::Rational;

use crate::cache::{Cache, CacheError};
use crate::config::{CacheSource, Engine, Format, RunConfig};
use crate::error::CliError;
use crate::ranges::parse_list;
use crate::report::{csv_row, float_decimal, ratio_decimal, Emitter};

pub struct RicciArgs {
    pub n_spec: String,
    pub ell: Option<String>,
    pub sign_table: bool,
}

const HEADER: &str =
    "N,ell,r_plus,r_minus,r,r_avg,r_quotient,sign,r_plus_dec,r_minus_dec,r_dec,r_avg_dec,r_quotient_dec";

fn sign_word(sign: Sign) -> &'static str {
    match sign {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
        Sign::Zero => "zero",
    }
}

/// Emits one curvature row per (N, l): exact rationals plus decimal
/// companions under the exact engine, certified decimals under the float
/// engine. Work fans out over l within each N; rows keep request order.
pub fn run(args: &RicciArgs, config: &RunConfig) -> Result<i32, CliError> {
    let ns = parse_list(&args.n_spec, "N")?;
    if args.sign_table {
        return emit_sign_table(*ns.iter().max().unwrap(), config);
    }

    let (mut cache, cache_path) = load_cache(&config.cache)?;
    let mut out = Emitter::default();
    if config.format == Format::Csv {
        out.push(HEADER.to_string());
    }

    for &n in &ns {
        let ells: Vec<u32> = match &args.ell {
            Some(spec) => parse_list(spec, "ell")?,
            None => {
                if n < 2 {
                    return Err(CliError::usage("curvature needs N >= 2"));
                }
                (1..n).collect()
            }
        };
        match config.engine_for(n) {
            Engine::Exact => exact_rows(n, &ells, &mut cache, config, &mut out)?,
            Engine::Float => float_rows(n, &ells, config, &mut out)?,
        }
        if config.progress {
            eprintln!("N={n} done");
        }
    }

    if let Some(path) = cache_path {
        cache.write(&path)?;
    }
    print!("{}", out.finish());
    Ok(0)
}

fn load_cache(source: &Option<CacheSource>) -> Result<(Cache, Option<std::path::PathBuf>), CliError> {
    let Some(src) = source else { return Ok((Cache::default(), None)) };
    match Cache::read(&src.path) {
        Ok(c) => Ok((c, Some(src.path.clone()))),
        Err(CacheError::Io(_)) => Ok((Cache::default(), Some(src.path.clone()))),
        Err(e @ CacheError::Corrupt(_)) => {
            if src.explicit {
                Err(CliError::internal(e.to_string()))
            } else {
                eprintln!("warning: {e}; recomputing");
                Ok((Cache::default(), Some(src.path.clone())))
            }
        }
    }
}

fn exact_rows(
    n: u32,
    ells: &[u32],
    cache: &mut Cache,
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let sphere = SphereSymbols::new(n)?;
    let seeds: Vec<((u32, u32, u32), Rational)> = cache
        .entries
        .range((n, 0, 0, 0)..=(n, u32::MAX, u32::MAX, u32::MAX))
        .map(|(&(_, i, j, l), v)| ((i, j, l), parse_ratio(v).expect("validated on read")))
        .collect();
    sphere.seed_squares(seeds);

    let rows = ells
        .par_iter()
        .map(|&l| ricci_row(&sphere, l))
        .collect::<Result<Vec<RicciRow>, _>>()?;
    for row in &rows {
        emit_exact(row, config, out);
    }

    for ((i, j, l), r) in sphere.export_squares() {
        cache.entries.insert((n, i, j, l), ratio_string(&r));
    }
    Ok(())
}

fn emit_exact(row: &RicciRow, config: &RunConfig, out: &mut Emitter) {
    let d = config.digits;
    match config.format {
        Format::Csv => out.push(csv_row(&[
            row.n.to_string(),
            row.ell.to_string(),
            ratio_string(&row.r_plus),
            ratio_string(&row.r_minus),
            ratio_string(&row.r),
            ratio_string(&row.r_avg),
            row.r_quotient.as_ref().map(ratio_string).unwrap_or_default(),
            sign_word(row.sign).to_string(),
            ratio_decimal(&row.r_plus, d),
            ratio_decimal(&row.r_minus, d),
            ratio_decimal(&row.r, d),
            ratio_decimal(&row.r_avg, d),
            row.r_quotient.as_ref().map(|q| ratio_decimal(q, d)).unwrap_or_default(),
        ])),
        Format::Json => {
            let mut v = serde_json::to_value(row).unwrap();
            let obj = v.as_object_mut().unwrap();
            obj.insert("r_plus_dec".into(), json!(ratio_decimal(&row.r_plus, d)));
            obj.insert("r_minus_dec".into(), json!(ratio_decimal(&row.r_minus, d)));
            obj.insert("r_dec".into(), json!(ratio_decimal(&row.r, d)));
            obj.insert("r_avg_dec".into(), json!(ratio_decimal(&row.r_avg, d)));
            obj.insert(
                "r_quotient_dec".into(),
                row.r_quotient
                    .as_ref()
                    .map(|q| json!(ratio_decimal(q, d)))
                    .unwrap_or(serde_json::Value::Null),
            );
            out.push(v.to_string());
        }
    }
}

fn float_rows(
    n: u32,
    ells: &[u32],
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let sphere = SphereSymbols::new(n)?;
    let target = config.float_target_error;
    let d = config.digits;
    let scale = (n as f64) * (n as f64) - 1.0;
    for &l in ells {
        let (r_avg, avg_err) = averaged_ricci_float(&sphere, l, target)?;
        let (rp_avg, _) = averaged_plus_float(&sphere, l, target)?;
        let rm_avg = rp_avg - r_avg;
        if r_avg.abs() <= avg_err {
            return Err(CliError::internal(format!(
                "float engine cannot certify the sign of r at (N={n}, l={l}): \
                 value {r_avg:e} within error bound {avg_err:e}; tighten --float-target-error"
            )));
        }
        let sign = if r_avg > 0.0 { Sign::Positive } else { Sign::Negative };
        let r = r_avg * scale;
        let r_plus = rp_avg * scale;
        let r_minus = rm_avg * scale;
        let r_quotient =
            (l >= 2).then(|| r + 3.0 / ((l as f64) * (l as f64 + 1.0)));
        match config.format {
            Format::Csv => out.push(csv_row(&[
                n.to_string(),
                l.to_string(),
                float_decimal(r_plus, d),
                float_decimal(r_minus, d),
                float_decimal(r, d),
                float_decimal(r_avg, d),
                r_quotient.map(|q| float_decimal(q, d)).unwrap_or_default(),
                sign_word(sign).to_string(),
                float_decimal(r_plus, d),
                float_decimal(r_minus, d),
                float_decimal(r, d),
                float_decimal(r_avg, d),
                r_quotient.map(|q| float_decimal(q, d)).unwrap_or_default(),
            ])),
            Format::Json => out.push(
                json!({
                    "N": n,
                    "ell": l,
                    "r_plus": float_decimal(r_plus, d),
                    "r_minus": float_decimal(r_minus, d),
                    "r": float_decimal(r, d),
                    "r_avg": float_decimal(r_avg, d),
                    "r_quotient": r_quotient.map(|q| float_decimal(q, d)),
                    "sign": sign_word(sign),
                    "r_plus_dec": float_decimal(r_plus, d),
                    "r_minus_dec": float_decimal(r_minus, d),
                    "r_dec": float_decimal(r, d),
                    "r_avg_dec": float_decimal(r_avg, d),
                    "r_quotient_dec": r_quotient.map(|q| float_decimal(q, d)),
                })
                .to_string(),
            ),
        }
    }
    Ok(())
}

fn emit_sign_table(n_max: u32, config: &RunConfig) -> Result<i32, CliError> {
    let table = sign_table(n_max)?;
    let mut out = Emitter::default();
    match config.format {
        Format::Csv => {
            let mut head = vec!["l/N".to_string()];
            head.extend((3..=n_max).map(|n| n.to_string()));
            out.push(csv_row(&head));
            for l in 1..n_max {
                let mut cells = vec![l.to_string()];
                for n in 3..=n_max {
                    cells.push(
                        table.get(l, n).map(|s| s.letter().to_string()).unwrap_or_default(),
                    );
                }
                out.push(csv_row(&cells));
            }
        }
        Format::Json => {
            for l in 1..n_max {
                let signs: Vec<serde_json::Value> = (3..=n_max)
                    .filter_map(|n| {
                        table.get(l, n).map(|s| json!({"N": n, "sign": sign_word(s)}))
                    })
                    .collect();
                out.push(json!({"ell": l, "signs": signs}).to_string());
            }
        }
    }
    print!("{}", out.finish());
    Ok(0)
}

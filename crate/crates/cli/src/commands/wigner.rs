use zeitlin_core::wigner::WignerEngine;
use zeitlin_core::HalfInt;

use crate::config::{Engine, RunConfig};
use crate::error::CliError;
use crate::report::float_decimal;

/// Evaluates a single 3j or 6j symbol and prints the exact value followed
/// by its decimal companion (or a bounded float under the float engine).
pub fn run(kind: &str, spins: &[HalfInt], config: &RunConfig) -> Result<i32, CliError> {
    if spins.len() != 6 {
        return Err(CliError::usage(format!(
            "{kind} takes exactly six spins, got {}",
            spins.len()
        )));
    }
    let args: [HalfInt; 6] = spins.try_into().unwrap();
    let max_spin = spins.iter().copied().max().unwrap();
    let engine = WignerEngine::for_max_spin(max_spin);

    let float_engine = match config.engine {
        crate::config::EngineChoice::Auto => false,
        _ => config.engine_for(2) == Engine::Float,
    };

    let line = match (kind, float_engine) {
        ("6j", false) => {
            let v = engine.six_j(args)?;
            format!("{v} = {}", float_decimal(v.to_f64(), config.digits))
        }
        ("6j", true) => {
            let f = engine.six_j_float(args, config.float_target_error)?;
            format!(
                "{} (abs error <= {:e})",
                float_decimal(f.value, config.digits),
                f.error_bound
            )
        }
        ("3j", _) => {
            let v = engine.three_j(
                [args[0], args[1], args[2]],
                [args[3], args[4], args[5]],
            )?;
            format!("{v} = {}", float_decimal(v.to_f64(), config.digits))
        }
        _ => return Err(CliError::usage(format!("unknown symbol kind `{kind}`"))),
    };
    println!("{line}");
    Ok(0)
}

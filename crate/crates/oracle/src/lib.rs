//! Dense-matrix oracle for small N, cross-checking the exact engine.
//!
//! Everything here is rebuilt from scratch on explicit N×N matrices: the
//! spin representation, the quantized Laplacian and its eigenspaces, and
//! two independent Ricci computations, plus the O'Neill curvature of the
//! quotient by rigid rotations. None of it touches the Wigner recurrences,
//! so agreement with the exact pipeline validates both sides.

pub mod curvature;
pub mod generators;
pub mod quotient;
pub mod spectral;

use serde::Serialize;
use thiserror::Error;

use zeitlin_core::rational::ratio_to_f64;
use zeitlin_core::ricci::ricci_row;
use zeitlin_core::wigner::SphereSymbols;

pub use generators::DEFAULT_LIMIT;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("N = {n} exceeds the dense oracle limit {limit}")]
    Capacity { n: u32, limit: u32 },

    #[error("spectral assembly failed: {0}")]
    Spectral(String),

    #[error("block-Einstein violation: {0}")]
    BlockEinstein(String),

    #[error("oracle inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Exact(#[from] zeitlin_core::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// One oracle-versus-exact comparison; `l` is 0 for whole-algebra checks.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub check: String,
    pub l: u32,
    pub oracle: f64,
    pub exact: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn compare(check: &str, l: u32, oracle: f64, exact: f64, tolerance: f64) -> Comparison {
    let rel_err = (oracle - exact).abs() / exact.abs().max(1.0);
    Comparison {
        check: check.to_string(),
        l,
        oracle,
        exact,
        rel_err,
        tolerance,
        pass: rel_err <= tolerance,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub comparisons: Vec<Comparison>,
    pub pass: bool,
}

/// Runs the full verification battery at one N: both Ricci paths against
/// the exact eigenvalues, block diagonality, the projected-trace identity,
/// ad⋆ adjointness, and (optionally) the quotient-space checks.
pub fn cross_check(n: u32, include_quotient: bool) -> Result<CrossCheckReport> {
    cross_check_with_limit(n, include_quotient, DEFAULT_LIMIT)
}

pub fn cross_check_with_limit(
    n: u32,
    include_quotient: bool,
    limit: u32,
) -> Result<CrossCheckReport> {
    let dec = spectral::laplacian_eigenbasis_with_limit(n, limit)?;
    let sphere = SphereSymbols::new(n)?;
    let mut rows = Vec::new();

    for l in 1..n {
        let exact = ratio_to_f64(&ricci_row(&sphere, l)?.r);
        rows.push(compare(
            "ricci-trace",
            l,
            curvature::ricci_trace_formula(&dec, l)?,
            exact,
            1e-6,
        ));
        rows.push(compare(
            "ricci-arnold",
            l,
            curvature::ricci_arnold_sum(&dec, l)?,
            exact,
            1e-6,
        ));
    }

    for l in 1..n.saturating_sub(1) {
        let worst = curvature::ricci_cross_block(&dec, l, l + 1)?;
        rows.push(compare("ricci-cross-block", l, worst, 0.0, 1e-8));
    }
    if n >= 4 {
        let worst = curvature::ricci_cross_block(&dec, 1, n - 1)?;
        rows.push(compare("ricci-cross-block", 1, worst, 0.0, 1e-8));
    }

    let trace_report = curvature::trace_identity_check(&dec, &sphere)?;
    rows.push(compare("trace-identity", 0, trace_report.max_rel_err, 0.0, 1e-8));

    let adjoint = curvature::check_adstar_adjointness(&dec, 16, 2024);
    rows.push(compare("adstar-adjointness", 0, adjoint, 0.0, 1e-10));

    if include_quotient {
        for l in 2..n {
            let lam = (l * (l + 1)) as f64;
            let row = ricci_row(&sphere, l)?;
            let exact = ratio_to_f64(&row.r_quotient.expect("l >= 2 has a quotient value"));
            rows.push(compare(
                "quotient-oneill",
                l,
                quotient::quotient_ricci_oneill(&dec, l)?,
                exact,
                1e-6,
            ));
            rows.push(compare(
                "a-tensor-sum",
                l,
                quotient::a_tensor_vertical_sum(&dec, l)?,
                4.5 / lam,
                1e-8,
            ));
            rows.push(compare(
                "vertical-sectional-sum",
                l,
                quotient::vertical_sectional_sum(&dec, l)?,
                1.5 / lam,
                1e-8,
            ));
        }
        let nf = n as f64;
        for l in 1..n {
            let lam = (l * (l + 1)) as f64;
            rows.push(compare(
                "bracket-vertical-sum",
                l,
                quotient::bracket_vertical_square_sum(&dec, l)?,
                12.0 * lam / (nf * (nf * nf - 1.0)),
                1e-8,
            ));
        }
    }

    let pass = rows.iter().all(|c| c.pass);
    Ok(CrossCheckReport { n, comparisons: rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_battery_passes_with_quotient() {
        for n in [3u32, 4] {
            let report = cross_check(n, true).unwrap();
            assert!(report.pass, "N={n}: {:#?}", report.comparisons);
        }
    }

    #[test]
    fn capacity_limit_propagates() {
        assert!(matches!(cross_check(64, false), Err(OracleError::Capacity { .. })));
        assert!(cross_check_with_limit(13, false, 12).is_err());
    }

    #[test]
    fn report_serializes_per_comparison() {
        let report = cross_check(2, false).unwrap();
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        assert_eq!(v["N"], 2);
        assert!(v["pass"].as_bool().unwrap());
        assert_eq!(v["comparisons"][0]["check"], "ricci-trace");
        assert!(v["comparisons"][0]["rel_err"].as_f64().unwrap() < 1e-6);
    }
}

//! Exact Ricci curvature eigenvalues of the Zeitlin metric on su(N).
//!
//! The curvature is block diagonal over the Laplacian eigenspaces, so each
//! pair (N, l) carries a single eigenvalue r = r_plus - r_minus. Both parts
//! are nonnegative double sums over wavenumber pairs (k, k') with k + k' + l
//! odd, weighted by squared 6j symbols from the sphere family.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{harmonic, rat, rat_int, ser_ratio, ser_ratio_opt, Rational};
use crate::wigner::SphereSymbols;

pub(crate) fn lambda_int(i: u32) -> i64 {
    i as i64 * (i as i64 + 1)
}

/// The Laplacian eigenvalue magnitude at wavenumber `i`: λ_i = i(i+1).
pub fn lambda(i: u32) -> Rational {
    rat_int(lambda_int(i))
}

/// The quantization step squared: ħ² = 4/(N²-1).
pub fn hbar_squared(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::domain("hbar is defined for N >= 2"));
    }
    let n = n as i64;
    Ok(rat(4, n * n - 1))
}

/// The prefactor N/ħ² = N(N²-1)/4 shared by both curvature sums.
pub fn metric_prefactor(n: u32) -> Rational {
    let n = n as i64;
    rat(n * (n * n - 1), 4)
}

fn check_ell(n: u32, l: u32) -> Result<()> {
    if l < 1 || l > n - 1 {
        return Err(Error::domain(format!(
            "eigenspace index {l} outside 1..={} for N = {n}",
            n - 1
        )));
    }
    Ok(())
}

/// Exact positive and negative curvature parts at eigenspace `l`.
///
/// The inner index is windowed to `|k - k'| <= l` before any symbol work;
/// pairs outside the triangle contribute structural zeros.
pub fn ricci_parts(sphere: &SphereSymbols, l: u32) -> Result<(Rational, Rational)> {
    let n = sphere.n();
    check_ell(n, l)?;
    let ll = lambda_int(l);
    let mut plus = Rational::zero();
    let mut minus = Rational::zero();
    for k in 1..n {
        let lo = k.saturating_sub(l).max(1);
        let hi = (k + l).min(n - 1);
        for kp in lo..=hi {
            if (k + kp + l).is_multiple_of(2) || k + kp < l {
                continue;
            }
            let sq = sphere.w_squared(l, k, kp)?;
            if sq.is_zero() {
                continue;
            }
            let lk = lambda_int(k);
            let lkp = lambda_int(kp);
            let deg = (2 * k as i128 + 1) * (2 * kp as i128 + 1);
            let den = lk as i128 * lkp as i128;
            plus += Rational::new(BigInt::from(ll as i128 * deg), BigInt::from(den)) * &sq;
            let diff = (lk - lkp) as i128;
            if diff != 0 {
                minus += Rational::new(
                    BigInt::from(diff * diff * deg),
                    BigInt::from(den * ll as i128),
                ) * &sq;
            }
        }
    }
    let pref = metric_prefactor(n);
    Ok((plus * &pref, minus * pref))
}

/// Sign of an exact rational, kept three-valued rather than folding zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn letter(self) -> char {
        match self {
            Sign::Positive => 'P',
            Sign::Negative => 'N',
            Sign::Zero => 'Z',
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One exact curvature record. The quotient eigenvalue exists only for
/// l >= 2; the l = 1 eigenspace is the vertical space of the quotient.
#[derive(Debug, Clone, Serialize)]
pub struct RicciRow {
    #[serde(rename = "N")]
    pub n: u32,
    pub ell: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub r_plus: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub r_minus: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub r: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub r_avg: Rational,
    #[serde(serialize_with = "ser_ratio_opt")]
    pub r_quotient: Option<Rational>,
    pub sign: Sign,
}

/// Assembles the full exact record for one (N, l) pair.
pub fn ricci_row(sphere: &SphereSymbols, l: u32) -> Result<RicciRow> {
    let n = sphere.n();
    let (r_plus, r_minus) = ricci_parts(sphere, l)?;
    let r = &r_plus - &r_minus;
    let nn = n as i64;
    let r_avg = &r / rat_int(nn * nn - 1);
    let r_quotient = if l >= 2 { Some(&r + rat(3, lambda_int(l))) } else { None };
    let sign = Sign::of(&r);
    Ok(RicciRow { n, ell: l, r_plus, r_minus, r, r_avg, r_quotient, sign })
}

/// Exact curvature signs for all 3 <= N <= n_max, 1 <= l <= N-1, keyed
/// (l, N) to match the row-per-wavenumber presentation.
#[derive(Debug, Clone)]
pub struct SignTable {
    pub n_max: u32,
    pub entries: BTreeMap<(u32, u32), Sign>,
}

impl SignTable {
    pub fn get(&self, l: u32, n: u32) -> Option<Sign> {
        self.entries.get(&(l, n)).copied()
    }
}

pub fn sign_table(n_max: u32) -> Result<SignTable> {
    if n_max < 3 {
        return Err(Error::domain("the sign table starts at N = 3"));
    }
    let per_n: Vec<Vec<((u32, u32), Sign)>> = (3..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<((u32, u32), Sign)>> {
            let sphere = SphereSymbols::new(n)?;
            (1..n)
                .map(|l| Ok(((l, n), ricci_row(&sphere, l)?.sign)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let entries = per_n.into_iter().flatten().collect();
    Ok(SignTable { n_max, entries })
}

/// Exact check of the negative part against its harmonic-number closed form
/// r_minus = (H_l - 1)(N²-1)/2, plus the companion upper bound on r_plus.
#[derive(Debug, Clone)]
pub struct MinusClosedFormCheck {
    pub residual: Rational,
    pub bound_satisfied: bool,
}

pub fn check_minus_closed_form(sphere: &SphereSymbols, l: u32) -> Result<MinusClosedFormCheck> {
    let n = sphere.n();
    let (r_plus, r_minus) = ricci_parts(sphere, l)?;
    let nn = n as i64;
    let quarter = rat_int(nn * nn - 1) / rat_int(4);
    let h = harmonic(l);
    let target = rat_int(2) * (&h - rat_int(1)) * &quarter;
    let residual = r_minus - target;
    let cap = (rat_int(4) * h + rat_int(2 * l as i64 + 1)) * quarter;
    Ok(MinusClosedFormCheck { residual, bound_satisfied: r_plus <= cap })
}

/// The averaged-curvature gap r/(N²-1) + (H_l - 1)/2, whose decay in N is
/// the content of the asymptotic conjecture; it equals the averaged positive
/// part exactly whenever the closed form for r_minus holds.
pub fn asymptotic_gap(sphere: &SphereSymbols, l: u32) -> Result<Rational> {
    if l < 2 {
        return Err(Error::domain("the averaged gap is studied for l >= 2"));
    }
    let row = ricci_row(sphere, l)?;
    Ok(row.r_avg + (harmonic(l) - rat_int(1)) / rat_int(2))
}

const EPS: f64 = f64::EPSILON;

fn float_sum(
    sphere: &SphereSymbols,
    l: u32,
    symbol_target: f64,
    positive_part: bool,
) -> Result<(f64, f64)> {
    let n = sphere.n();
    let ll = lambda_int(l);
    let mut sum = 0.0f64;
    let mut err = 0.0f64;
    for k in 1..n {
        let lo = k.saturating_sub(l).max(1);
        let hi = (k + l).min(n - 1);
        for kp in lo..=hi {
            if (k + kp + l).is_multiple_of(2) || k + kp < l {
                continue;
            }
            let lk = lambda_int(k);
            let lkp = lambda_int(kp);
            let deg = (2 * k as i128 + 1) * (2 * kp as i128 + 1);
            let (num, den) = if positive_part {
                (ll as i128 * deg, lk as i128 * lkp as i128)
            } else {
                let diff = (lk - lkp) as i128;
                if diff == 0 {
                    continue;
                }
                (diff * diff * deg, lk as i128 * lkp as i128 * ll as i128)
            };
            // Numerators and denominators stay below 2^53 for every N the
            // table supports, so each converts to f64 exactly.
            let coef = num as f64 / den as f64;
            let w = sphere.w_float(l, k, kp, symbol_target)?;
            let term = coef * w.value * w.value;
            let term_err = coef
                * (2.0 * w.value.abs() * w.error_bound + w.error_bound * w.error_bound)
                + 4.0 * EPS * term.abs();
            sum += term;
            err += term_err + EPS * sum.abs();
        }
    }
    Ok((sum, err))
}

/// The averaged positive part r_plus/(N²-1) as a float with a certified
/// absolute error bound; this is the float engine behind large-N gap trends.
pub fn averaged_plus_float(
    sphere: &SphereSymbols,
    l: u32,
    symbol_target: f64,
) -> Result<(f64, f64)> {
    let n = sphere.n();
    check_ell(n, l)?;
    let (sum, err) = float_sum(sphere, l, symbol_target, true)?;
    let scale = n as f64 / 4.0;
    let value = sum * scale;
    let bound = err * scale * (1.0 + 8.0 * EPS) + 2.0 * EPS * value.abs();
    Ok((value, bound))
}

/// The averaged curvature r/(N²-1) as a float with a certified bound.
pub fn averaged_ricci_float(
    sphere: &SphereSymbols,
    l: u32,
    symbol_target: f64,
) -> Result<(f64, f64)> {
    let n = sphere.n();
    check_ell(n, l)?;
    let (plus, perr) = float_sum(sphere, l, symbol_target, true)?;
    let (minus, merr) = float_sum(sphere, l, symbol_target, false)?;
    let scale = n as f64 / 4.0;
    let value = (plus - minus) * scale;
    let bound = (perr + merr) * scale * (1.0 + 8.0 * EPS)
        + 2.0 * EPS * (plus.abs() + minus.abs()) * scale;
    Ok((value, bound))
}

/// The smallest l >= 2 whose curvature is positive, with the observed
/// ratio l/N; absent when every l >= 2 curves nonpositively.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub first_positive: Option<u32>,
    pub ratio: Option<f64>,
}

pub fn transition_scan(sphere: &SphereSymbols) -> Result<TransitionReport> {
    let n = sphere.n();
    if n < 7 {
        return Err(Error::domain("transition scanning starts at N = 7"));
    }
    for l in 2..n {
        let (r_plus, r_minus) = ricci_parts(sphere, l)?;
        if r_plus > r_minus {
            return Ok(TransitionReport {
                n,
                first_positive: Some(l),
                ratio: Some(l as f64 / n as f64),
            });
        }
    }
    Ok(TransitionReport { n, first_positive: None, ratio: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_to_f64;

    fn sphere(n: u32) -> SphereSymbols {
        SphereSymbols::new(n).unwrap()
    }

    #[test]
    fn smallest_case_by_hand() {
        // N = 2 has the single eigenspace l = 1 with one admissible pair
        // k = k' = 1: r_plus = (3/2)·(λ_1/λ_1²)·9·W(1,1,1)² = 3/4.
        let sph = sphere(2);
        let (plus, minus) = ricci_parts(&sph, 1).unwrap();
        assert_eq!(plus, rat(3, 4));
        assert!(minus.is_zero());
        let row = ricci_row(&sph, 1).unwrap();
        assert_eq!(row.r, rat(3, 4));
        assert_eq!(row.r_avg, rat(1, 4));
        assert!(row.r_quotient.is_none());
        assert_eq!(row.sign, Sign::Positive);
    }

    #[test]
    fn lowest_eigenspace_has_no_negative_part() {
        for n in 2..=16 {
            let sph = sphere(n);
            let (_, minus) = ricci_parts(&sph, 1).unwrap();
            assert!(minus.is_zero(), "N={n}");
        }
    }

    #[test]
    fn harmonic_closed_form_and_bound() {
        for n in [2u32, 5, 7, 8, 12, 16] {
            let sph = sphere(n);
            for l in 1..n {
                let check = check_minus_closed_form(&sph, l).unwrap();
                assert!(check.residual.is_zero(), "N={n} l={l}");
                assert!(check.bound_satisfied, "N={n} l={l}");
            }
        }
        // Spot value: (H_2 - 1)(N²-1)/2 = 12 at N = 7.
        let sph = sphere(7);
        let (_, minus) = ricci_parts(&sph, 2).unwrap();
        assert_eq!(minus, rat_int(12));
    }

    #[test]
    fn parts_are_nonnegative_and_r_splits() {
        for n in [3u32, 6, 11] {
            let sph = sphere(n);
            for l in 1..n {
                let row = ricci_row(&sph, l).unwrap();
                assert!(!row.r_plus.is_negative(), "N={n} l={l}");
                assert!(!row.r_minus.is_negative(), "N={n} l={l}");
                assert_eq!(row.r, &row.r_plus - &row.r_minus, "N={n} l={l}");
            }
        }
    }

    #[test]
    fn quotient_shift_is_three_over_lambda() {
        for n in [4u32, 7, 10] {
            let sph = sphere(n);
            for l in 2..n {
                let row = ricci_row(&sph, l).unwrap();
                let shift = row.r_quotient.unwrap() - &row.r;
                assert_eq!(shift, rat(3, lambda_int(l)), "N={n} l={l}");
            }
        }
    }

    #[test]
    fn eigenspace_index_is_validated() {
        let sph = sphere(5);
        assert!(ricci_parts(&sph, 0).is_err());
        assert!(ricci_parts(&sph, 5).is_err());
        assert!(ricci_parts(&sph, 4).is_ok());
    }

    #[test]
    fn sign_spot_checks() {
        let table = sign_table(16).unwrap();
        for n in 3..=16 {
            assert_eq!(table.get(1, n), Some(Sign::Positive), "N={n}");
        }
        // First negative entries along each wavenumber row.
        for (l, n_first) in [(2u32, 7u32), (3, 9), (4, 11), (5, 13), (6, 16)] {
            assert_eq!(table.get(l, n_first), Some(Sign::Negative), "l={l}");
            assert_eq!(table.get(l, n_first - 1), Some(Sign::Positive), "l={l}");
        }
        assert_eq!(table.get(7, 16), Some(Sign::Positive));
        assert_eq!(table.entries.len(), (2..=15).sum::<usize>());
        assert!(sign_table(2).is_err());
    }

    #[test]
    fn gap_equals_averaged_positive_part_exactly() {
        for n in [8u32, 16] {
            let sph = sphere(n);
            for l in 2..n.min(6) {
                let gap = asymptotic_gap(&sph, l).unwrap();
                let (plus, _) = ricci_parts(&sph, l).unwrap();
                let nn = n as i64;
                assert_eq!(gap, plus / rat_int(nn * nn - 1), "N={n} l={l}");
                assert!(!gap.is_negative(), "N={n} l={l}");
            }
        }
        assert!(asymptotic_gap(&sphere(8), 1).is_err());
    }

    #[test]
    fn float_engine_matches_exact_averages() {
        for n in [12u32, 32] {
            let sph = sphere(n);
            for l in 2..6 {
                let exact_gap = ratio_to_f64(&asymptotic_gap(&sph, l).unwrap());
                let (value, bound) = averaged_plus_float(&sph, l, 1e-13).unwrap();
                assert!(bound < 1e-9, "N={n} l={l} bound {bound}");
                assert!((value - exact_gap).abs() <= bound + 1e-15, "N={n} l={l}");

                let row = ricci_row(&sph, l).unwrap();
                let exact_avg = ratio_to_f64(&row.r_avg);
                let (avg, avg_bound) = averaged_ricci_float(&sph, l, 1e-13).unwrap();
                assert!((avg - exact_avg).abs() <= avg_bound + 1e-15, "N={n} l={l}");
            }
        }
    }

    #[test]
    fn transition_indices_match_sign_table() {
        let report = transition_scan(&sphere(7)).unwrap();
        assert_eq!(report.first_positive, Some(3));
        let report = transition_scan(&sphere(16)).unwrap();
        assert_eq!(report.first_positive, Some(7));
        assert!((report.ratio.unwrap() - 7.0 / 16.0).abs() < 1e-12);
        assert!(transition_scan(&sphere(6)).is_err());
    }

    #[test]
    fn final_two_sided_estimate_holds() {
        // -(N²-1)(H_l - 1)/2 <= r <= (N²-1)(2H_l + 2l + 3)/4.
        for n in [6u32, 9, 13] {
            let sph = sphere(n);
            let quarter = rat_int(n as i64 * n as i64 - 1) / rat_int(4);
            for l in 1..n {
                let row = ricci_row(&sph, l).unwrap();
                let h = harmonic(l);
                let lower = -(rat_int(2) * (&h - rat_int(1)) * &quarter);
                let upper = (rat_int(2) * h + rat_int(2 * l as i64 + 3)) * &quarter;
                assert!(row.r >= lower, "N={n} l={l}");
                assert!(row.r <= upper, "N={n} l={l}");
            }
        }
    }
}

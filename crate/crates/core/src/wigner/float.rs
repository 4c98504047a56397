//! Floating-point symbol evaluation with certified error bounds.
//!
//! Every multiplication is counted and charged one rounding unit, and the
//! term sum is compensated, so the returned bound is a true worst case
//! rather than an estimate. When the bound misses the target the caller
//! escalates to the exact engine and converts.

use super::racah::SymbolRows;
use crate::rational::{ldexp, ScaledF64};

const EPS: f64 = f64::EPSILON;

/// A symbol value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatSymbol {
    pub value: f64,
    pub error_bound: f64,
}

/// Multiplies `acc` by `p^e` (e may be negative), counting the f64
/// multiplications performed. The mantissa stays in `[1, 2)`.
fn mul_prime_power(acc: &mut ScaledF64, nmul: &mut u32, p: u32, e: i32) {
    if e == 0 {
        return;
    }
    // p = pm * 2^pe with pm in [1, 2), both exact.
    let pe = (p as u64).ilog2() as i64;
    let pm = p as f64 * 2f64.powi(-(pe as i32));
    let mut k = e.unsigned_abs();
    let mut bm = pm;
    let mut be = pe;
    let mut rm = 1.0f64;
    let mut re = 0i64;
    loop {
        if k & 1 == 1 {
            rm *= bm;
            *nmul += 1;
            re += be;
            if rm >= 2.0 {
                rm *= 0.5;
                re += 1;
            }
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        bm *= bm;
        *nmul += 1;
        be *= 2;
        if bm >= 2.0 {
            bm *= 0.5;
            be += 1;
        }
    }
    if e < 0 {
        rm = 1.0 / rm;
        *nmul += 1;
        re = -re;
        if rm < 1.0 {
            rm *= 2.0;
            re -= 1;
        }
    }
    acc.m *= rm;
    *nmul += 1;
    acc.e2 += re;
    if acc.m >= 2.0 {
        acc.m *= 0.5;
        acc.e2 += 1;
    }
}

/// `prod primes[i]^exps[i]` as a scaled float, with the count of roundings.
fn scaled_from_exps(primes: &[u32], exps: &[i32]) -> (ScaledF64, u32) {
    let mut acc = ScaledF64 { m: 1.0, e2: 0 };
    let mut nmul = 0u32;
    for (i, &e) in exps.iter().enumerate() {
        mul_prime_power(&mut acc, &mut nmul, primes[i], e);
    }
    (acc, nmul)
}

/// Evaluates prepared rows in floats. Returns `None` when the certified
/// bound misses `target_abs_err`.
pub(super) fn from_rows(
    primes: &[u32],
    sym: &SymbolRows,
    target_abs_err: f64,
) -> Option<FloatSymbol> {
    let nt = sym.term_count();
    let mut terms: Vec<(f64, i64, f64)> = Vec::with_capacity(nt);
    let mut e_max = i64::MIN;
    for ti in 0..nt {
        let (scaled, nmul) = scaled_from_exps(primes, sym.row(ti));
        let rel = nmul as f64 * EPS * 1.1;
        let m = if (sym.t0() + ti as i64) % 2 == 0 { scaled.m } else { -scaled.m };
        e_max = e_max.max(scaled.e2);
        terms.push((m, scaled.e2, rel));
    }

    // Compensated sum of mantissas aligned to the largest exponent.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut conv_err = 0.0f64;
    let mut dropped = 0.0f64;
    for &(m, e2, rel) in &terms {
        let shift = e2 - e_max;
        if shift < -200 {
            // Contributes below 2^-199 of the leading term; count, don't add.
            dropped += ldexp(2.0, shift);
            continue;
        }
        let t = m * 2f64.powi(shift as i32);
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += t.abs();
        conv_err += t.abs() * rel;
    }
    let sum_err = 4.0 * EPS * abs_sum + conv_err + dropped;

    let (pref, nmul_pref) = scaled_from_exps(primes, sym.prefactor());
    let rel_pref = nmul_pref as f64 * EPS * 1.1;
    let mut pm = pref.m;
    let mut pe = pref.e2;
    if pe % 2 != 0 {
        pm *= 2.0;
        pe -= 1;
    }
    let sqrt_m = pm.sqrt();
    let sqrt_e = pe / 2;
    let rel_sqrt = rel_pref * 0.5 + EPS;

    let signed = if sym.phase() < 0 { -sum } else { sum };
    let value = ldexp(signed * sqrt_m, e_max + sqrt_e);
    let err_mant = sum_err * sqrt_m + sum.abs() * sqrt_m * (rel_sqrt + 2.0 * EPS);
    // Tier 1 never certifies an exact zero; structural zeros are caught
    // before rows are built, so keep a subnormal floor under the bound.
    let error_bound = (ldexp(err_mant, e_max + sqrt_e) * 2.0).max(f64::MIN_POSITIVE);

    (error_bound <= target_abs_err && value.is_finite())
        .then_some(FloatSymbol { value, error_bound })
}

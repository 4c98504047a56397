//! Exact rationals: formatting, parsing, decimal rendering, harmonic numbers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by the backing `Ratio` type).
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders as `p/q`, or just `p` for integers.
pub fn ratio_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde field helper: emits a rational as its `p/q` string.
pub(crate) fn ser_ratio<S>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    s.serialize_str(&ratio_string(r))
}

pub(crate) fn ser_ratio_opt<S>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    match r {
        Some(v) => s.serialize_str(&ratio_string(v)),
        None => s.serialize_none(),
    }
}

/// Parses `p` or `p/q` with a positive denominator.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::domain(format!("`{s}` is not a rational p/q"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let n: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = q.trim().parse().map_err(|_| bad())?;
            if d.is_positive() {
                Ok(Rational::new(n, d))
            } else {
                Err(bad())
            }
        }
    }
}

fn pow10(e: u64) -> BigInt {
    BigInt::from(10u32).pow(e as u32)
}

/// Compares `a/b` against `10^e` for nonnegative `a`, positive `b`.
fn cmp_pow10(a: &BigInt, b: &BigInt, e: i64) -> std::cmp::Ordering {
    if e >= 0 {
        a.cmp(&(b * pow10(e as u64)))
    } else {
        (a * pow10((-e) as u64)).cmp(b)
    }
}

/// Renders `r` rounded to `digits` significant decimal digits, in positional
/// or scientific notation following the usual `%g` cutoffs. The string is a
/// display companion; exact values travel as `p/q`.
pub fn decimal_string(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let a = r.numer().abs();
    let b = r.denom().clone();
    // Decimal exponent e with 10^e <= |r| < 10^(e+1).
    let bits_a = a.to_biguint().unwrap().bits() as i64;
    let bits_b = b.to_biguint().unwrap().bits() as i64;
    let mut e = ((bits_a - bits_b) as f64 * std::f64::consts::LOG10_2).round() as i64;
    while cmp_pow10(&a, &b, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while cmp_pow10(&a, &b, e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }
    // Round a/b * 10^(digits-1-e) to an integer with exactly `digits` digits.
    let k = digits as i64 - 1 - e;
    let (num, den) = if k >= 0 {
        (a * pow10(k as u64), b)
    } else {
        (a, b * pow10((-k) as u64))
    };
    let (q, rem) = num.div_rem(&den);
    let mut mant = if &rem * 2 >= den { q + 1 } else { q };
    if mant == pow10(digits as u64) {
        mant /= BigInt::from(10);
        e += 1;
    }
    let digits_str = mant.to_string();
    let trimmed = digits_str.trim_end_matches('0');
    let sign = if r.is_negative() { "-" } else { "" };

    if e >= -4 && (e as i128) < digits as i128 {
        if e >= 0 {
            let point = (e + 1) as usize;
            if trimmed.len() <= point {
                let mut body = trimmed.to_string();
                body.push_str(&"0".repeat(point - trimmed.len()));
                format!("{sign}{body}")
            } else {
                format!("{sign}{}.{}", &trimmed[..point], &trimmed[point..])
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("{sign}0.{zeros}{trimmed}")
        }
    } else {
        let head = &trimmed[..1];
        let tail = &trimmed[1..];
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

/// The harmonic number `H_l = 1 + 1/2 + ... + 1/l`, with `H_0 = 0`.
pub fn harmonic(l: u32) -> Rational {
    let mut h = Rational::zero();
    for k in 1..=i64::from(l) {
        h += rat(1, k);
    }
    h
}

/// A harmonic number together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicNumber {
    pub index: u32,
    pub value: Rational,
}

impl HarmonicNumber {
    pub fn new(index: u32) -> Self {
        HarmonicNumber { index, value: harmonic(index) }
    }
}

/// A float in the form `m * 2^e2` with `|m|` in `[1, 2)` (or zero), used to
/// carry magnitudes far outside the f64 exponent range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScaledF64 {
    pub m: f64,
    pub e2: i64,
}

impl ScaledF64 {
    pub(crate) const ZERO: ScaledF64 = ScaledF64 { m: 0.0, e2: 0 };

    /// Collapses to a plain f64, saturating hard under/overflow.
    pub(crate) fn to_f64(self) -> f64 {
        ldexp(self.m, self.e2)
    }
}

/// `x * 2^e` with the exponent applied in safe steps.
pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return 0.0;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Rounds `r` to a scaled f64. Correct to within 2 units of the 53-bit
/// mantissa regardless of how large the numerator and denominator are.
pub(crate) fn ratio_to_scaled(r: &Rational) -> ScaledF64 {
    if r.is_zero() {
        return ScaledF64::ZERO;
    }
    let a: BigUint = r.numer().abs().to_biguint().unwrap();
    let b: BigUint = r.denom().to_biguint().unwrap();
    let shift = a.bits() as i64 - b.bits() as i64;
    // Scale so the quotient has 54 or 55 bits, then round.
    let k = 54 - shift;
    let (num, den) = if k >= 0 {
        (a << k as u64, b)
    } else {
        (a, b << (-k) as u64)
    };
    let (q, rem) = num.div_rem(&den);
    let q = if &rem * 2u32 >= den { q + 1u32 } else { q };
    let d = q.bits() as i64 - 1;
    let m = q.to_f64().expect("55-bit integer fits f64 range") * 2f64.powi((-d) as i32);
    let m = if r.is_negative() { -m } else { m };
    ScaledF64 { m, e2: d - k }
}

/// `r` as the nearest f64, safe for huge numerators and denominators.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    ratio_to_scaled(r).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_strings() {
        assert_eq!(ratio_string(&rat(1, 6)), "1/6");
        assert_eq!(ratio_string(&rat(-3, 4)), "-3/4");
        assert_eq!(ratio_string(&rat_int(12)), "12");
        assert_eq!(ratio_string(&rat(0, 5)), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/6", "-3/4", "12", "0", "355/113"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(ratio_string(&r), s);
        }
        assert!(parse_ratio("1/-2").is_err());
        assert!(parse_ratio("a/b").is_err());
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn decimal_rendering_matches_known_expansions() {
        assert_eq!(decimal_string(&rat(1, 6), 15), "0.166666666666667");
        assert_eq!(decimal_string(&rat(3, 4), 15), "0.75");
        assert_eq!(decimal_string(&rat_int(12), 15), "12");
        assert_eq!(decimal_string(&rat(-1, 48), 15), "-0.0208333333333333");
        assert_eq!(decimal_string(&rat_int(0), 15), "0");
        assert_eq!(decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(decimal_string(&rat(1, 1024), 4), "0.0009766");
        assert_eq!(decimal_string(&rat(1, 100_000_000), 3), "1e-8");
        assert_eq!(decimal_string(&rat_int(2_000_000_000_000_000_000), 3), "2e18");
        assert_eq!(decimal_string(&rat(1999, 1000), 2), "2");
    }

    #[test]
    fn decimal_rendering_rounds_up_across_magnitudes() {
        assert_eq!(decimal_string(&rat(999_999, 1_000_000), 3), "1");
        assert_eq!(decimal_string(&rat(-999_999, 100_000), 3), "-10");
    }

    #[test]
    fn harmonic_matches_direct_sums() {
        assert_eq!(harmonic(0), rat_int(0));
        assert_eq!(harmonic(1), rat_int(1));
        assert_eq!(harmonic(2), rat(3, 2));
        assert_eq!(harmonic(4), rat(25, 12));
        let mut prev = harmonic(0);
        for l in 1..40 {
            let h = harmonic(l);
            assert!(h > prev, "H_l must increase");
            prev = h;
        }
        assert_eq!(HarmonicNumber::new(6).value, rat(49, 20));
    }

    #[test]
    fn scaled_conversion_handles_huge_components() {
        let big = BigInt::from(10u32).pow(500);
        let r = Rational::new(big.clone() * 3, big * 7 + 1);
        let f = ratio_to_f64(&r);
        assert!((f - 3.0 / 7.0).abs() < 1e-15);

        let tiny = Rational::new(BigInt::one(), BigInt::from(10u32).pow(400));
        assert_eq!(ratio_to_f64(&tiny), 0.0);
        let scaled = ratio_to_scaled(&tiny);
        // 10^-400 is 2^-1328.77..., far outside plain f64 range.
        assert!(scaled.e2 == -1329);
        assert!(scaled.m >= 1.0 && scaled.m < 2.0);

        for (n, d) in [(1i64, 6i64), (-22, 7), (355, 113), (1, 3)] {
            let r = rat(n, d);
            let expect = n as f64 / d as f64;
            assert!((ratio_to_f64(&r) - expect).abs() <= expect.abs() * 1e-15);
        }
    }
}

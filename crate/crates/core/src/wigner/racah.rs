//! Racah single-sum evaluation of 3j and 6j symbols.
//!
//! Each term of the sum is a ratio of factorials, kept as a vector of prime
//! exponents. The terms are put over their componentwise-minimum common
//! denominator, reconstructed as big integers, and summed once, so no
//! per-term GCD reduction ever runs. The square-root prefactor is split into
//! an exact rational root and a squarefree residual by exponent parity.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{triangle_ok, QuadExact};
use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::primes::{FactorialTable, PrimeExpRational};
use crate::rational::Rational;

/// The fully combinatorial part of a symbol: one factorial exponent row per
/// sum term plus the prefactor under the square root.
pub(super) struct SymbolRows {
    np: usize,
    nt: usize,
    /// First summation index, fixing the sign of the first row.
    t0: i64,
    /// `nt * np` exponents, row-major over summation terms.
    rows: Vec<i32>,
    /// Exponents of the squared prefactor.
    prefactor: Vec<i32>,
    /// Overall sign applied to the whole sum.
    phase: i8,
}

impl SymbolRows {
    pub(super) fn term_count(&self) -> usize {
        self.nt
    }

    pub(super) fn t0(&self) -> i64 {
        self.t0
    }

    pub(super) fn row(&self, ti: usize) -> &[i32] {
        &self.rows[ti * self.np..(ti + 1) * self.np]
    }

    pub(super) fn prefactor(&self) -> &[i32] {
        &self.prefactor
    }

    pub(super) fn phase(&self) -> i8 {
        self.phase
    }
}

fn add_row(acc: &mut [i32], row: &[i32]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a += r;
    }
}

fn sub_row(acc: &mut [i32], row: &[i32]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a -= r;
    }
}

/// `prod primes[i]^exps[i]` for nonnegative exponents, built through u64
/// chunks to keep big-integer multiplications coarse.
fn prod_pow(primes: &[u32], exps: &[i32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut chunk: u64 = 1;
    for (i, &e) in exps.iter().enumerate() {
        debug_assert!(e >= 0);
        let p = primes[i] as u64;
        for _ in 0..e {
            if chunk > u64::MAX / p {
                acc *= chunk;
                chunk = 1;
            }
            chunk *= p;
        }
    }
    if chunk > 1 {
        acc *= chunk;
    }
    acc
}

/// Adds the exponent rows of the triangle coefficient
/// `Delta(x,y,z) = (x+y-z)!(x-y+z)!(-x+y+z)! / (x+y+z+1)!`.
fn add_triangle_delta(
    table: &FactorialTable,
    acc: &mut [i32],
    x: HalfInt,
    y: HalfInt,
    z: HalfInt,
) -> Result<()> {
    let (tx, ty, tz) = (x.twice() as i64, y.twice() as i64, z.twice() as i64);
    add_row(acc, table.row(((tx + ty - tz) / 2) as usize)?);
    add_row(acc, table.row(((tx - ty + tz) / 2) as usize)?);
    add_row(acc, table.row(((-tx + ty + tz) / 2) as usize)?);
    sub_row(acc, table.row(((tx + ty + tz) / 2 + 1) as usize)?);
    Ok(())
}

/// Builds the term rows of `{a b c; d e f}`. `None` means a triad fails the
/// triangle condition and the symbol is zero.
pub(super) fn six_j_rows(
    table: &FactorialTable,
    args: [HalfInt; 6],
) -> Result<Option<SymbolRows>> {
    if args.iter().any(|x| x.is_negative()) {
        return Err(Error::domain("6j arguments must be nonnegative"));
    }
    let [a, b, c, d, e, f] = args;
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if !triads.iter().all(|&(x, y, z)| triangle_ok(x, y, z)) {
        return Ok(None);
    }
    let half_sum = |x: HalfInt, y: HalfInt, z: HalfInt| -> i64 {
        (x.twice() as i64 + y.twice() as i64 + z.twice() as i64) / 2
    };
    let caps = [
        half_sum(a, b, c),
        half_sum(a, e, f),
        half_sum(d, b, f),
        half_sum(d, e, c),
    ];
    let quads = [
        (a.twice() as i64 + b.twice() as i64 + d.twice() as i64 + e.twice() as i64) / 2,
        (b.twice() as i64 + c.twice() as i64 + e.twice() as i64 + f.twice() as i64) / 2,
        (a.twice() as i64 + c.twice() as i64 + d.twice() as i64 + f.twice() as i64) / 2,
    ];
    let t_min = *caps.iter().max().unwrap();
    let t_max = *quads.iter().min().unwrap();
    if t_min > t_max {
        return Ok(None);
    }
    // Largest factorial consumed: probe once so later lookups cannot fail.
    let needed = (t_max + 1).max(quads.iter().max().unwrap() - t_min) as usize;
    table.row(needed)?;

    let np = table.primes().len();
    let nt = (t_max - t_min + 1) as usize;
    let mut rows = vec![0i32; nt * np];
    for (ti, t) in (t_min..=t_max).enumerate() {
        let row = &mut rows[ti * np..(ti + 1) * np];
        add_row(row, table.row((t + 1) as usize)?);
        for cap in caps {
            sub_row(row, table.row((t - cap) as usize)?);
        }
        for quad in quads {
            sub_row(row, table.row((quad - t) as usize)?);
        }
    }
    let mut prefactor = vec![0i32; np];
    for (x, y, z) in triads {
        add_triangle_delta(table, &mut prefactor, x, y, z)?;
    }
    Ok(Some(SymbolRows { np, nt, t0: t_min, rows, prefactor, phase: 1 }))
}

/// Builds the term rows of `(j1 j2 j3; m1 m2 m3)`. `None` means the symbol
/// vanishes structurally (projection sum or triangle condition).
pub(super) fn three_j_rows(
    table: &FactorialTable,
    js: [HalfInt; 3],
    ms: [HalfInt; 3],
) -> Result<Option<SymbolRows>> {
    for (j, m) in js.iter().zip(ms.iter()) {
        if j.is_negative() {
            return Err(Error::domain("3j spins must be nonnegative"));
        }
        if (j.twice() + m.twice()) % 2 != 0 {
            return Err(Error::domain(format!(
                "projection {m} has the wrong parity for spin {j}"
            )));
        }
        if m.abs() > *j {
            return Err(Error::domain(format!("projection {m} exceeds spin {j}")));
        }
    }
    if ms[0].twice() + ms[1].twice() + ms[2].twice() != 0 {
        return Ok(None);
    }
    if !triangle_ok(js[0], js[1], js[2]) {
        return Ok(None);
    }
    let tj = [js[0].twice() as i64, js[1].twice() as i64, js[2].twice() as i64];
    let tm = [ms[0].twice() as i64, ms[1].twice() as i64, ms[2].twice() as i64];
    // Denominator factorial arguments: t!, (c1-t)!, (c2-t)!, (c3-t)!,
    // (c4+t)!, (c5+t)!.
    let c1 = (tj[0] + tj[1] - tj[2]) / 2;
    let c2 = (tj[0] - tm[0]) / 2;
    let c3 = (tj[1] + tm[1]) / 2;
    let c4 = (tj[2] - tj[1] + tm[0]) / 2;
    let c5 = (tj[2] - tj[0] - tm[1]) / 2;
    let t_min = 0i64.max(-c4).max(-c5);
    let t_max = c1.min(c2).min(c3);
    if t_min > t_max {
        return Ok(None);
    }
    let needed = [c1, c2, c3, c4 + t_max, c5 + t_max, (tj[0] + tj[1] + tj[2]) / 2 + 1]
        .into_iter()
        .chain(tj.iter().zip(tm.iter()).flat_map(|(&j, &m)| [(j + m) / 2, (j - m) / 2]))
        .max()
        .unwrap() as usize;
    table.row(needed)?;

    let np = table.primes().len();
    let nt = (t_max - t_min + 1) as usize;
    let mut rows = vec![0i32; nt * np];
    for (ti, t) in (t_min..=t_max).enumerate() {
        let row = &mut rows[ti * np..(ti + 1) * np];
        sub_row(row, table.row(t as usize)?);
        sub_row(row, table.row((c1 - t) as usize)?);
        sub_row(row, table.row((c2 - t) as usize)?);
        sub_row(row, table.row((c3 - t) as usize)?);
        sub_row(row, table.row((c4 + t) as usize)?);
        sub_row(row, table.row((c5 + t) as usize)?);
    }
    let mut prefactor = vec![0i32; np];
    add_triangle_delta(table, &mut prefactor, js[0], js[1], js[2])?;
    for (&j, &m) in tj.iter().zip(tm.iter()) {
        add_row(&mut prefactor, table.row(((j + m) / 2) as usize)?);
        add_row(&mut prefactor, table.row(((j - m) / 2) as usize)?);
    }
    // Overall sign (-1)^(j1 - j2 - m3); the exponent is an integer here.
    let phase_exp = (tj[0] - tj[1] - tm[2]) / 2;
    let phase = if phase_exp.rem_euclid(2) == 1 { -1 } else { 1 };
    Ok(Some(SymbolRows { np, nt, t0: t_min, rows, prefactor, phase }))
}

/// Evaluates prepared rows exactly: common-denominator big-integer sum times
/// the square-root prefactor split into `root * sqrt(residual)`.
pub(super) fn exact_from_rows(table: &FactorialTable, sym: &SymbolRows) -> QuadExact {
    let np = sym.np;
    let primes = table.primes();

    let mut mins = sym.row(0).to_vec();
    for ti in 1..sym.nt {
        for (m, &e) in mins.iter_mut().zip(sym.row(ti)) {
            if e < *m {
                *m = e;
            }
        }
    }
    let mut scratch = vec![0i32; np];
    let mut sum = BigInt::zero();
    for ti in 0..sym.nt {
        for ((s, &e), &m) in scratch.iter_mut().zip(sym.row(ti)).zip(&mins) {
            *s = e - m;
        }
        let term = BigInt::from(prod_pow(primes, &scratch));
        if (sym.t0 + ti as i64) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return QuadExact::zero();
    }
    if sym.phase < 0 {
        sum = -sum;
    }

    let common = PrimeExpRational::from_parts(1, mins);
    let (root, residual) = PrimeExpRational::from_parts(1, sym.prefactor.clone())
        .sqrt_extract()
        .expect("prefactor is a product of factorials, hence positive");
    let coeff = root.to_rational() * common.to_rational() * Rational::from_integer(sum);
    QuadExact::from_sqrt_parts(coeff, residual.to_rational())
}

//! Prime-exponent arithmetic and the shared factorial table.
//!
//! Factorials and their ratios dominate the Racah sums, so values are kept as
//! signed products of prime powers for as long as possible. Multiplication
//! and division are then exponent additions, and square-root extraction is an
//! exponent parity split, with big-integer work deferred to a single
//! reconstruction step per symbol.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;

struct Sieve {
    bound: usize,
    primes: Vec<u32>,
}

static SIEVE: RwLock<Sieve> = RwLock::new(Sieve { bound: 0, primes: Vec::new() });

fn sieve_upto(bound: usize) -> Vec<u32> {
    let mut is_composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for p in 2..=bound {
        if !is_composite[p] {
            primes.push(p as u32);
            let mut q = p * p;
            while q <= bound {
                is_composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Runs `f` on the primes up to at least `bound`.
fn with_primes_upto<R>(bound: usize, f: impl FnOnce(&[u32]) -> R) -> R {
    {
        let sieve = SIEVE.read().unwrap();
        if sieve.bound >= bound {
            return f(&sieve.primes);
        }
    }
    let mut sieve = SIEVE.write().unwrap();
    if sieve.bound < bound {
        let grown = bound.max(sieve.bound * 2).max(64);
        sieve.primes = sieve_upto(grown);
        sieve.bound = grown;
    }
    f(&sieve.primes)
}

/// Runs `f` on a slice holding at least `count` primes.
fn with_primes_count<R>(count: usize, f: impl FnOnce(&[u32]) -> R) -> R {
    {
        let sieve = SIEVE.read().unwrap();
        if sieve.primes.len() >= count {
            return f(&sieve.primes);
        }
    }
    let mut sieve = SIEVE.write().unwrap();
    while sieve.primes.len() < count {
        let grown = (sieve.bound * 2).max(64);
        sieve.primes = sieve_upto(grown);
        sieve.bound = grown;
    }
    f(&sieve.primes)
}

/// A nonzero rational as a finite product of prime powers, or zero.
///
/// `exps[k]` is the exponent of the k-th prime (2, 3, 5, ...); trailing zero
/// entries are trimmed so equal values compare equal. The zero value has
/// `sign == 0` and no exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeExpRational {
    sign: i8,
    exps: Vec<i32>,
}

impl PrimeExpRational {
    pub fn zero() -> Self {
        PrimeExpRational { sign: 0, exps: Vec::new() }
    }

    pub fn one() -> Self {
        PrimeExpRational { sign: 1, exps: Vec::new() }
    }

    pub(crate) fn from_parts(sign: i8, mut exps: Vec<i32>) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            return PrimeExpRational::zero();
        }
        while exps.last() == Some(&0) {
            exps.pop();
        }
        PrimeExpRational { sign, exps }
    }

    /// Factorizes an ordinary integer by trial division.
    pub fn from_i64(n: i64) -> Self {
        if n == 0 {
            return PrimeExpRational::zero();
        }
        let sign = if n < 0 { -1 } else { 1 };
        let mut rest = n.unsigned_abs();
        let mut exps: Vec<i32> = Vec::new();
        let root = (rest as f64).sqrt() as usize + 2;
        with_primes_upto(root, |primes| {
            for (i, &p) in primes.iter().enumerate() {
                let p = p as u64;
                if p * p > rest {
                    break;
                }
                while rest.is_multiple_of(p) {
                    rest /= p;
                    if exps.len() <= i {
                        exps.resize(i + 1, 0);
                    }
                    exps[i] += 1;
                }
            }
        });
        let value = PrimeExpRational::from_parts(sign, exps);
        if rest > 1 {
            // The remaining cofactor exceeds the square root, hence is prime.
            value.mul(&PrimeExpRational::single_prime(rest))
        } else {
            value
        }
    }

    fn single_prime(p: u64) -> Self {
        with_primes_upto(p as usize, |primes| {
            let idx = primes.binary_search(&(p as u32)).expect("argument is prime");
            let mut exps = vec![0; idx + 1];
            exps[idx] = 1;
            PrimeExpRational { sign: 1, exps }
        })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn negate(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    /// Nonzero (prime, exponent) pairs in increasing prime order.
    pub fn factor_pairs(&self) -> Vec<(u64, i32)> {
        with_primes_count(self.exps.len(), |primes| {
            self.exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| (primes[i] as u64, e))
                .collect()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return PrimeExpRational::zero();
        }
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (i, &e) in short.exps.iter().enumerate() {
            exps[i] += e;
        }
        PrimeExpRational::from_parts(self.sign * other.sign, exps)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.sign == 0 {
            return Err(Error::domain("division by zero"));
        }
        Ok(self.mul(&other.clone().pow(-1)))
    }

    pub fn pow(mut self, k: i32) -> Self {
        if self.sign == 0 {
            return if k == 0 { PrimeExpRational::one() } else { self };
        }
        if k == 0 {
            return PrimeExpRational::one();
        }
        if self.sign == -1 && k % 2 == 0 {
            self.sign = 1;
        }
        for e in &mut self.exps {
            *e *= k;
        }
        PrimeExpRational::from_parts(self.sign, self.exps)
    }

    pub fn is_perfect_square(&self) -> bool {
        self.sign >= 0 && self.exps.iter().all(|e| e % 2 == 0)
    }

    /// Splits a nonnegative value into `root² · residual` with the residual
    /// squarefree (every surviving exponent is exactly 1).
    pub fn sqrt_extract(&self) -> Result<(Self, Self)> {
        if self.sign < 0 {
            return Err(Error::domain("square root of a negative value"));
        }
        if self.sign == 0 {
            return Ok((PrimeExpRational::zero(), PrimeExpRational::one()));
        }
        let root: Vec<i32> = self.exps.iter().map(|e| e.div_euclid(2)).collect();
        let resid: Vec<i32> = self.exps.iter().map(|e| e.rem_euclid(2)).collect();
        Ok((
            PrimeExpRational::from_parts(1, root),
            PrimeExpRational::from_parts(1, resid),
        ))
    }

    /// Exact conversion; the represented value is rational by construction.
    pub fn to_rational(&self) -> Rational {
        if self.sign == 0 {
            return Rational::from_integer(BigInt::from(0));
        }
        let mut numer = BigInt::from(i32::from(self.sign));
        let mut denom = BigInt::from(1);
        with_primes_count(self.exps.len(), |primes| {
            for (i, &e) in self.exps.iter().enumerate() {
                if e > 0 {
                    numer *= BigInt::from(primes[i]).pow(e as u32);
                } else if e < 0 {
                    denom *= BigInt::from(primes[i]).pow((-e) as u32);
                }
            }
        });
        // Numerator and denominator are built from disjoint primes.
        Rational::new_raw(numer, denom)
    }
}

impl fmt::Display for PrimeExpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        let pairs = self.factor_pairs();
        if pairs.is_empty() {
            return write!(f, "1");
        }
        let body: Vec<String> = pairs
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", body.join("*"))
    }
}

/// Prime factorizations of every `n!` up to a fixed limit, shared read-only.
///
/// Rows are stored flat, one `i32` exponent per prime below the limit, so a
/// factorial lookup is a slice borrow.
pub struct FactorialTable {
    limit: usize,
    primes: Vec<u32>,
    rows: Vec<i32>,
}

impl FactorialTable {
    /// Builds the table for `0! ..= limit!`.
    pub fn new(limit: usize) -> Self {
        let primes = if limit >= 2 { sieve_upto(limit) } else { Vec::new() };
        let np = primes.len();
        let mut rows = vec![0i32; (limit + 1) * np];
        for n in 2..=limit {
            let (head, tail) = rows.split_at_mut(n * np);
            let prev = &head[(n - 1) * np..];
            let row = &mut tail[..np];
            row.copy_from_slice(prev);
            let mut rest = n;
            for (i, &p) in primes.iter().enumerate() {
                let p = p as usize;
                if p * p > rest {
                    break;
                }
                while rest % p == 0 {
                    rest /= p;
                    row[i] += 1;
                }
            }
            if rest > 1 {
                let i = primes.binary_search(&(rest as u32)).expect("cofactor is prime");
                row[i] += 1;
            }
        }
        FactorialTable { limit, primes, rows }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Exponent row of `n!` over `primes()`, padded with zeros.
    pub fn row(&self, n: usize) -> Result<&[i32]> {
        if n > self.limit {
            return Err(Error::Capacity { needed: n as u64, limit: self.limit as u64 });
        }
        let np = self.primes.len();
        Ok(&self.rows[n * np..(n + 1) * np])
    }

    pub fn factorial(&self, n: usize) -> Result<PrimeExpRational> {
        Ok(PrimeExpRational::from_parts(1, self.row(n)?.to_vec()))
    }
}

//! Wigner 3j and 6j symbols in exact arithmetic.
//!
//! Values are `coeff * sqrt(radicand)` with both parts exact rationals, so
//! squares and linear combinations over a common radical stay exact. The
//! `SphereSymbols` family fixes the 6j lower row at `(s, s, s)` with
//! `2s = N - 1`, which is the shape every curvature and identity sum uses.

mod float;
mod racah;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::primes::FactorialTable;
use crate::rational::{ldexp, ratio_to_scaled, Rational};

pub use float::FloatSymbol;

/// Triangle condition: `|a-b| <= c <= a+b` with an integer perimeter.
pub fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    if a.is_negative() || b.is_negative() || c.is_negative() {
        return false;
    }
    let (ta, tb, tc) = (a.twice(), b.twice(), c.twice());
    (ta + tb + tc) % 2 == 0 && (ta - tb).abs() <= tc && tc <= ta + tb
}

/// An exact value of the form `coeff * sqrt(radicand)`.
///
/// The radicand is a squarefree positive integer (any denominator is folded
/// into the coefficient), so two values admit exact addition exactly when
/// their radicands agree. Zero is represented as `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExact {
    coeff: Rational,
    radicand: Rational,
}

impl QuadExact {
    pub fn zero() -> Self {
        QuadExact { coeff: Rational::zero(), radicand: Rational::one() }
    }

    pub fn from_rational(coeff: Rational) -> Self {
        if coeff.is_zero() {
            return QuadExact::zero();
        }
        QuadExact { coeff, radicand: Rational::one() }
    }

    /// Builds `coeff * sqrt(radicand)` from a squarefree rational radicand,
    /// moving the radicand's denominator into the coefficient.
    pub(crate) fn from_sqrt_parts(coeff: Rational, radicand: Rational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        if coeff.is_zero() || radicand.is_zero() {
            return QuadExact::zero();
        }
        // c*sqrt(p/q) = (c/q)*sqrt(pq), and pq stays squarefree for
        // coprime squarefree p and q.
        let p = radicand.numer().clone();
        let q = radicand.denom().clone();
        QuadExact {
            coeff: coeff / Rational::from_integer(q.clone()),
            radicand: Rational::from_integer(p * q),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// The exact square, always rational.
    pub fn squared(&self) -> Rational {
        &self.coeff * &self.coeff * &self.radicand
    }

    pub fn neg(&self) -> Self {
        QuadExact { coeff: -self.coeff.clone(), radicand: self.radicand.clone() }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return QuadExact::zero();
        }
        QuadExact { coeff: &self.coeff * r, radicand: self.radicand.clone() }
    }

    /// Exact product. The radicands are squarefree integers, so their gcd
    /// comes out of the root as a rational factor.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QuadExact::zero();
        }
        let g = num_integer::Integer::gcd(self.radicand.numer(), other.radicand.numer());
        let r1 = self.radicand.numer() / &g;
        let r2 = other.radicand.numer() / &g;
        let coeff = &self.coeff * &other.coeff * Rational::from_integer(g);
        QuadExact::from_sqrt_parts(coeff, Rational::from_integer(r1 * r2))
    }

    /// Exact sum, defined only when the radicands agree (or a side is zero).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::domain(format!(
                "cannot add sqrt({}) and sqrt({}) terms exactly",
                self.radicand, other.radicand
            )));
        }
        let coeff = &self.coeff + &other.coeff;
        if coeff.is_zero() {
            return Ok(QuadExact::zero());
        }
        Ok(QuadExact { coeff, radicand: self.radicand.clone() })
    }

    /// Nearest f64 together with an absolute error bound.
    pub fn to_f64_with_bound(&self) -> (f64, f64) {
        if self.is_zero() {
            return (0.0, 0.0);
        }
        let c = ratio_to_scaled(&self.coeff);
        let mut r = ratio_to_scaled(&self.radicand);
        if r.e2 % 2 != 0 {
            r.m *= 2.0;
            r.e2 -= 1;
        }
        let m = c.m * r.m.sqrt();
        let e2 = c.e2 + r.e2 / 2;
        let value = ldexp(m, e2);
        let bound = if value == 0.0 || !value.is_finite() {
            // Underflow or overflow of the final scaling; |m| < 4 bounds it.
            ldexp(4.0, e2).max(f64::MIN_POSITIVE)
        } else {
            value.abs() * 8.0 * f64::EPSILON
        };
        (value, bound)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_with_bound().0
    }
}

impl std::fmt::Display for QuadExact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_rational() {
            return write!(f, "{}", crate::rational::ratio_string(&self.coeff));
        }
        write!(
            f,
            "{}*sqrt({})",
            crate::rational::ratio_string(&self.coeff),
            self.radicand.numer()
        )
    }
}

/// Canonical cache key for a 6j symbol under its 24 classical symmetries:
/// the 6 column permutations combined with swapping the rows in any two
/// columns at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SixJKey {
    args: [i32; 6],
}

const COLUMN_PERMS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const ROW_FLIPS: [[bool; 3]; 4] = [
    [false, false, false],
    [true, true, false],
    [true, false, true],
    [false, true, true],
];

impl SixJKey {
    /// Canonicalizes `{a b c; d e f}` given as `[a, b, c, d, e, f]`.
    pub fn canonical(args: [HalfInt; 6]) -> Self {
        let cols = [
            (args[0].twice(), args[3].twice()),
            (args[1].twice(), args[4].twice()),
            (args[2].twice(), args[5].twice()),
        ];
        let mut best: Option<[i32; 6]> = None;
        for perm in COLUMN_PERMS {
            for flips in ROW_FLIPS {
                let mut cand = [0i32; 6];
                for (slot, (&src, &flip)) in perm.iter().zip(flips.iter()).enumerate() {
                    let (up, down) = cols[src];
                    let (up, down) = if flip { (down, up) } else { (up, down) };
                    cand[slot] = up;
                    cand[slot + 3] = down;
                }
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        SixJKey { args: best.unwrap() }
    }

    pub fn args(&self) -> [HalfInt; 6] {
        self.args.map(HalfInt::from_twice)
    }
}

/// Exact 3j/6j evaluator over a shared factorial table, with a 6j cache
/// keyed by canonicalized arguments.
pub struct WignerEngine {
    table: Arc<FactorialTable>,
    cache: RwLock<HashMap<SixJKey, QuadExact>>,
    cache_cap: Option<usize>,
}

impl WignerEngine {
    pub fn new(table: Arc<FactorialTable>) -> Self {
        WignerEngine { table, cache: RwLock::new(HashMap::new()), cache_cap: None }
    }

    /// Sizes the factorial table for arbitrary symbols with spins up to
    /// `max_spin` (the largest factorial a 6j needs is `(4*max+1)!`, at the
    /// top of its summation range).
    pub fn for_max_spin(max_spin: HalfInt) -> Self {
        let limit = 2 * (max_spin.twice().max(0) as usize) + 2;
        WignerEngine::new(Arc::new(FactorialTable::new(limit)))
    }

    /// Caps the cache; when the cap is hit the whole cache is cleared.
    pub fn with_cache_cap(mut self, cap: usize) -> Self {
        self.cache_cap = Some(cap);
        self
    }

    pub fn table(&self) -> &Arc<FactorialTable> {
        &self.table
    }

    /// `{a b c; d e f}`, exact. Zero when any triad violates the triangle
    /// condition.
    pub fn six_j(&self, args: [HalfInt; 6]) -> Result<QuadExact> {
        let key = SixJKey::canonical(args);
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let value = match racah::six_j_rows(&self.table, args)? {
            None => QuadExact::zero(),
            Some(rows) => racah::exact_from_rows(&self.table, &rows),
        };
        let mut cache = self.cache.write().unwrap();
        if let Some(cap) = self.cache_cap {
            if cache.len() >= cap {
                cache.clear();
            }
        }
        cache.insert(key, value.clone());
        Ok(value)
    }

    /// `{a b c; d e f}` as a float with a certified absolute error bound.
    ///
    /// A compensated prime-power summation is tried first; if its bound
    /// misses `target_abs_err` the exact engine is consulted and converted.
    pub fn six_j_float(&self, args: [HalfInt; 6], target_abs_err: f64) -> Result<FloatSymbol> {
        let rows = match racah::six_j_rows(&self.table, args)? {
            None => return Ok(FloatSymbol { value: 0.0, error_bound: 0.0 }),
            Some(rows) => rows,
        };
        if let Some(fast) = float::from_rows(self.table.primes(), &rows, target_abs_err) {
            return Ok(fast);
        }
        let exact = racah::exact_from_rows(&self.table, &rows);
        let (value, error_bound) = exact.to_f64_with_bound();
        if error_bound <= target_abs_err {
            Ok(FloatSymbol { value, error_bound })
        } else {
            Err(Error::Precision { target: target_abs_err, achieved: error_bound })
        }
    }

    /// `(j1 j2 j3; m1 m2 m3)`, exact. Zero when the projections do not sum
    /// to zero or the spins violate the triangle condition.
    pub fn three_j(&self, js: [HalfInt; 3], ms: [HalfInt; 3]) -> Result<QuadExact> {
        match racah::three_j_rows(&self.table, js, ms)? {
            None => Ok(QuadExact::zero()),
            Some(rows) => Ok(racah::exact_from_rows(&self.table, &rows)),
        }
    }
}

fn sort3(i: u32, j: u32, l: u32) -> (u32, u32, u32) {
    let mut v = [i, j, l];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

/// The 6j families attached to the su(N) truncation: `W(i,j,l)` is
/// `{i j l; s s s}` and `W_upper(i,j)` is `{i s s; j s s}`, with `2s = N-1`.
///
/// `W(i,j,l)` is fully symmetric in its upper row, so caches key on the
/// sorted triple. `W_upper` is always rational and symmetric in `(i, j)`.
pub struct SphereSymbols {
    n: u32,
    table: Arc<FactorialTable>,
    values: RwLock<HashMap<(u32, u32, u32), QuadExact>>,
    squares: RwLock<HashMap<(u32, u32, u32), Rational>>,
    uppers: RwLock<HashMap<(u32, u32), Rational>>,
}

impl SphereSymbols {
    pub fn new(n: u32) -> Result<Self> {
        let limit = 3 * (n as usize - 1) + 2;
        Self::with_table(n, Arc::new(FactorialTable::new(limit)))
    }

    /// Shares a prebuilt factorial table; it must hold `(3(N-1)+2)!`.
    pub fn with_table(n: u32, table: Arc<FactorialTable>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("the truncation needs N >= 2"));
        }
        let needed = 3 * (n as usize - 1) + 2;
        if table.limit() < needed {
            return Err(Error::Capacity { needed: needed as u64, limit: table.limit() as u64 });
        }
        Ok(SphereSymbols {
            n,
            table,
            values: RwLock::new(HashMap::new()),
            squares: RwLock::new(HashMap::new()),
            uppers: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The common lower-row spin `s = (N-1)/2`.
    pub fn s(&self) -> HalfInt {
        HalfInt::from_twice(self.n as i32 - 1)
    }

    pub fn table(&self) -> &Arc<FactorialTable> {
        &self.table
    }

    fn check_index(&self, idx: u32) -> Result<()> {
        if idx > self.n - 1 {
            return Err(Error::domain(format!(
                "index {idx} outside 0..={} for N = {}",
                self.n - 1,
                self.n
            )));
        }
        Ok(())
    }

    /// `W(i,j,l) = {i j l; s s s}`, exact and order-insensitive.
    pub fn w(&self, i: u32, j: u32, l: u32) -> Result<QuadExact> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(l)?;
        let key = sort3(i, j, l);
        let (i, j, l) = key;
        if !triangle_ok(HalfInt::from_int(i as i32), HalfInt::from_int(j as i32), HalfInt::from_int(l as i32)) {
            return Ok(QuadExact::zero());
        }
        if let Some(hit) = self.values.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let s = self.s();
        let args = [
            HalfInt::from_int(i as i32),
            HalfInt::from_int(j as i32),
            HalfInt::from_int(l as i32),
            s,
            s,
            s,
        ];
        let value = match racah::six_j_rows(&self.table, args)? {
            None => QuadExact::zero(),
            Some(rows) => racah::exact_from_rows(&self.table, &rows),
        };
        self.values.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// `W(i,j,l)^2`, exact rational.
    pub fn w_squared(&self, i: u32, j: u32, l: u32) -> Result<Rational> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(l)?;
        let key = sort3(i, j, l);
        if let Some(hit) = self.squares.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let sq = self.w(key.0, key.1, key.2)?.squared();
        self.squares.write().unwrap().insert(key, sq.clone());
        Ok(sq)
    }

    /// `W(i,j,l)` as a float with a certified absolute error bound.
    pub fn w_float(&self, i: u32, j: u32, l: u32, target_abs_err: f64) -> Result<FloatSymbol> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(l)?;
        let s = self.s();
        let args = [
            HalfInt::from_int(i as i32),
            HalfInt::from_int(j as i32),
            HalfInt::from_int(l as i32),
            s,
            s,
            s,
        ];
        let rows = match racah::six_j_rows(&self.table, args)? {
            None => return Ok(FloatSymbol { value: 0.0, error_bound: 0.0 }),
            Some(rows) => rows,
        };
        if let Some(fast) = float::from_rows(self.table.primes(), &rows, target_abs_err) {
            return Ok(fast);
        }
        let (value, error_bound) = racah::exact_from_rows(&self.table, &rows).to_f64_with_bound();
        if error_bound <= target_abs_err {
            Ok(FloatSymbol { value, error_bound })
        } else {
            Err(Error::Precision { target: target_abs_err, achieved: error_bound })
        }
    }

    /// `W_upper(i,j) = {i s s; j s s}`, exact. The prefactor is a perfect
    /// square for this shape, so the value is rational; that is asserted.
    pub fn w_upper(&self, i: u32, j: u32) -> Result<Rational> {
        self.check_index(i)?;
        self.check_index(j)?;
        let key = (i.min(j), i.max(j));
        if let Some(hit) = self.uppers.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let s = self.s();
        let args = [
            HalfInt::from_int(key.0 as i32),
            s,
            s,
            HalfInt::from_int(key.1 as i32),
            s,
            s,
        ];
        let value = match racah::six_j_rows(&self.table, args)? {
            None => QuadExact::zero(),
            Some(rows) => racah::exact_from_rows(&self.table, &rows),
        };
        assert!(
            value.is_rational(),
            "W_upper({}, {}) must normalize to a rational, got {value}",
            key.0,
            key.1
        );
        let value = value.coeff().clone();
        self.uppers.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// Preloads exact squares, e.g. from a disk cache.
    pub fn seed_squares(&self, entries: impl IntoIterator<Item = ((u32, u32, u32), Rational)>) {
        let mut squares = self.squares.write().unwrap();
        for (key, sq) in entries {
            let (i, j, l) = key;
            squares.insert(sort3(i, j, l), sq);
        }
    }

    /// Exact squares accumulated so far, sorted by key.
    pub fn export_squares(&self) -> Vec<((u32, u32, u32), Rational)> {
        let squares = self.squares.read().unwrap();
        let mut out: Vec<_> = squares.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

/// Comparison of an exact squared symbol against its Clebsch-Gordan
/// large-N estimate (valid for even `i + j + l` only).
#[derive(Debug, Clone, Copy)]
pub struct CgComparison {
    pub exact: f64,
    pub estimate: f64,
    pub ratio: f64,
}

/// Compares `W(i,j,l)^2` with `(C^{l0}_{i0j0})^2 / ((N-1)(2l+1))`, the
/// classical large-spin estimate. The squared Clebsch-Gordan coefficient
/// reduces to `(2l+1)` times a squared 3j symbol, so the `2l+1` factors
/// cancel and the estimate is exact-rational before the final conversion.
pub fn cg_asymptotic_check(sphere: &SphereSymbols, i: u32, j: u32, l: u32) -> Result<CgComparison> {
    if !(i + j + l).is_multiple_of(2) {
        return Err(Error::domain(
            "the Clebsch-Gordan estimate applies only to even i + j + l",
        ));
    }
    let (hi, hj, hl) = (
        HalfInt::from_int(i as i32),
        HalfInt::from_int(j as i32),
        HalfInt::from_int(l as i32),
    );
    if !triangle_ok(hi, hj, hl) {
        return Err(Error::domain("triangle condition fails"));
    }
    let engine = WignerEngine::new(sphere.table().clone());
    let tj = engine.three_j([hi, hj, hl], [HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO])?;
    let estimate = tj.squared() / crate::rational::rat_int(sphere.n() as i64 - 1);
    let exact = sphere.w_squared(i, j, l)?;
    let exact_f = crate::rational::ratio_to_f64(&exact);
    let estimate_f = crate::rational::ratio_to_f64(&estimate);
    Ok(CgComparison { exact: exact_f, estimate: estimate_f, ratio: exact_f / estimate_f })
}

/// Largest observed `N(2l+1) W(i,j,l)^2` over odd-parity triples with
/// `l = max(i,j,l)`; for even parity this quantity is bounded by 1, and the
/// odd-parity analogue is reported as data rather than asserted.
pub fn odd_parity_max_ratio(sphere: &SphereSymbols) -> Result<(Rational, [u32; 3])> {
    let n = sphere.n();
    let mut best: Option<(Rational, [u32; 3])> = None;
    for l in 0..n {
        for j in 0..=l {
            for i in 0..=j {
                if (i + j + l) % 2 == 0 || i + j < l {
                    continue;
                }
                let sq = sphere.w_squared(i, j, l)?;
                let ratio = sq * crate::rational::rat_int(n as i64 * (2 * l as i64 + 1));
                if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                    best = Some((ratio, [i, j, l]));
                }
            }
        }
    }
    Ok(best.expect("every N >= 2 admits the odd triple (1,1,1)"))
}

#[cfg(test)]
mod tests;

//! Exact verification of 6j summation identities over the sphere families.
//!
//! Each identity equates a single sum of weighted squared symbols (or first
//! powers, for the two involving W_j^i) with a closed-form rational. All
//! arithmetic is exact, so a report passes only when the residual is
//! identically zero. The `sum-*` identities have textbook proofs and start
//! their sums at i = 0; the `conj-*` ones are conjectural, hold in every
//! case ever computed, and start at i = 1 where a λ_i appears in a
//! denominator.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{harmonic, rat, rat_int, ser_ratio, Rational};
use crate::ricci::{lambda_int, ricci_parts};
use crate::wigner::SphereSymbols;

/// The seven summation identities, named for the shape of their summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    SumBasic,
    SumAlternatingSq,
    SumAlternatingW,
    ConjInvLambda,
    ConjAltLambda,
    ConjLambda,
    ConjHarmonic,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::SumBasic,
        IdentityId::SumAlternatingSq,
        IdentityId::SumAlternatingW,
        IdentityId::ConjInvLambda,
        IdentityId::ConjAltLambda,
        IdentityId::ConjLambda,
        IdentityId::ConjHarmonic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::SumBasic => "sum-basic",
            IdentityId::SumAlternatingSq => "sum-alternating-sq",
            IdentityId::SumAlternatingW => "sum-alternating-w",
            IdentityId::ConjInvLambda => "conj-inv-lambda",
            IdentityId::ConjAltLambda => "conj-alt-lambda",
            IdentityId::ConjLambda => "conj-lambda",
            IdentityId::ConjHarmonic => "conj-harmonic",
        }
    }

    /// True for the identities that lack a proof.
    pub fn is_conjectured(self) -> bool {
        matches!(
            self,
            IdentityId::ConjInvLambda
                | IdentityId::ConjAltLambda
                | IdentityId::ConjLambda
                | IdentityId::ConjHarmonic
        )
    }

    /// True when the identity takes a second free index l; the others carry
    /// l = 0 in their reports.
    pub fn uses_l(self) -> bool {
        !matches!(self, IdentityId::SumAlternatingW | IdentityId::ConjHarmonic)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown identity `{s}`; expected one of sum-basic, \
                     sum-alternating-sq, sum-alternating-w, conj-inv-lambda, \
                     conj-alt-lambda, conj-lambda, conj-harmonic"
                ))
            })
    }
}

/// One exact check: both sides and their difference, all as rationals.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    #[serde(rename = "N")]
    pub n: u32,
    pub j: u32,
    pub l: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub rhs: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub residual: Rational,
    pub pass: bool,
}

fn sign(parity: u32) -> Rational {
    if parity.is_multiple_of(2) { rat_int(1) } else { rat_int(-1) }
}

fn check_range(n: u32, name: &str, value: u32, min: u32) -> Result<()> {
    if value < min || value > n - 1 {
        return Err(Error::domain(format!(
            "index {name} = {value} outside {min}..={} for N = {n}",
            n - 1
        )));
    }
    Ok(())
}

/// Evaluates one identity at (j, l) over the N-truncation family carried by
/// `sphere`. For the one-index identities the `l` argument is ignored and
/// reported as 0.
pub fn check_identity(
    sphere: &SphereSymbols,
    id: IdentityId,
    j: u32,
    l: u32,
) -> Result<IdentityReport> {
    let n = sphere.n();
    let min_j = if id == IdentityId::SumAlternatingW { 0 } else { 1 };
    check_range(n, "j", j, min_j)?;
    if id.uses_l() {
        check_range(n, "l", l, 1)?;
    }
    if id == IdentityId::ConjInvLambda && j == l {
        return Err(Error::domain(
            "conj-inv-lambda has no closed form at j = l; pick distinct indices",
        ));
    }

    let nn = n as i64;
    let (lhs, rhs) = match id {
        IdentityId::SumBasic => {
            let mut lhs = Rational::zero();
            for i in 0..n {
                lhs += rat_int(2 * i as i64 + 1) * sphere.w_squared(i, j, l)?;
            }
            (lhs, rat(1, nn))
        }
        IdentityId::SumAlternatingSq => {
            let mut lhs = Rational::zero();
            for i in 0..n {
                lhs += sign(i) * rat_int(2 * i as i64 + 1) * sphere.w_squared(i, j, l)?;
            }
            (lhs, sign(n + 1) * sphere.w_upper(l, j)?)
        }
        IdentityId::SumAlternatingW => {
            let mut lhs = Rational::zero();
            for i in 0..n {
                lhs += sign(i) * rat_int(2 * i as i64 + 1) * sphere.w_upper(i, j)?;
            }
            let rhs = if j == 0 { sign(n + 1) * rat_int(nn) } else { Rational::zero() };
            (lhs, rhs)
        }
        IdentityId::ConjInvLambda => {
            let mut lhs = Rational::zero();
            for i in 1..n {
                lhs += rat(2 * i as i64 + 1, lambda_int(i)) * sphere.w_squared(i, j, l)?;
            }
            let gap = (j as i64 - l as i64).abs();
            (lhs, rat(1, nn * gap * (j as i64 + l as i64 + 1)))
        }
        IdentityId::ConjAltLambda => {
            let mut lhs = Rational::zero();
            for i in 1..n {
                lhs += sign(i)
                    * rat_int(lambda_int(i) * (2 * i as i64 + 1))
                    * sphere.w_squared(i, j, l)?;
            }
            let rhs = sign(n + 1)
                * rat_int(lambda_int(j) + lambda_int(l))
                * sphere.w_upper(l, j)?;
            (lhs, rhs)
        }
        IdentityId::ConjLambda => {
            let mut lhs = Rational::zero();
            for i in 1..n {
                lhs += rat_int(lambda_int(i) * (2 * i as i64 + 1))
                    * sphere.w_squared(i, j, l)?;
            }
            let lj = lambda_int(j);
            let ll = lambda_int(l);
            let rhs = rat(
                (nn * nn - 1) * (lj + ll) - 2 * lj * ll,
                nn * (nn * nn - 1),
            );
            (lhs, rhs)
        }
        IdentityId::ConjHarmonic => {
            let mut lhs = Rational::zero();
            for i in 1..n {
                let inner = rat(1, nn) + sign(i + j + n) * sphere.w_upper(i, j)?;
                lhs += rat(2 * i as i64 + 1, lambda_int(i)) * inner;
            }
            (lhs, rat(2, nn) * harmonic(j))
        }
    };

    let l_report = if id.uses_l() { l } else { 0 };
    let residual = &lhs - &rhs;
    let pass = residual.is_zero();
    Ok(IdentityReport { identity: id, n, j, l: l_report, lhs, rhs, residual, pass })
}

/// All (j, l) pairs an identity admits at truncation N, in ascending order.
pub fn admissible_pairs(id: IdentityId, n: u32) -> Vec<(u32, u32)> {
    match id {
        IdentityId::SumAlternatingW => (0..n).map(|j| (j, 0)).collect(),
        IdentityId::ConjHarmonic => (1..n).map(|j| (j, 0)).collect(),
        IdentityId::ConjInvLambda => (1..n)
            .flat_map(|j| (1..n).filter(move |&l| l != j).map(move |l| (j, l)))
            .collect(),
        _ => (1..n).flat_map(|j| (1..n).map(move |l| (j, l))).collect(),
    }
}

/// Outcome of sweeping a set of identities over a range of truncations.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<IdentityReport>,
}

/// Checks every admissible (j, l) for each requested identity and every
/// N in `n_min..=n_max`. Work fans out across index pairs, but the summary
/// is assembled in the fixed (N, identity, j, l) order, so the outcome and
/// the first reported failure never depend on thread count.
pub fn verify_range(ids: &[IdentityId], n_min: u32, n_max: u32) -> Result<VerifySummary> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::domain("need 2 <= N_min <= N_max"));
    }
    let ids: Vec<IdentityId> =
        IdentityId::ALL.into_iter().filter(|id| ids.contains(id)).collect();
    let mut checks = 0u64;
    let mut failures = 0u64;
    let mut first_failure = None;
    for n in n_min..=n_max {
        let sphere = SphereSymbols::new(n)?;
        let tuples: Vec<(IdentityId, u32, u32)> = ids
            .iter()
            .flat_map(|&id| {
                admissible_pairs(id, n).into_iter().map(move |(j, l)| (id, j, l))
            })
            .collect();
        let reports: Vec<IdentityReport> = tuples
            .into_par_iter()
            .map(|(id, j, l)| check_identity(&sphere, id, j, l))
            .collect::<Result<_>>()?;
        for report in reports {
            checks += 1;
            if !report.pass {
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(report);
                }
            }
        }
    }
    Ok(VerifySummary { checks, failures, first_failure })
}

/// Exact check of the two auxiliary double sums behind the closed form for
/// the negative curvature part, and of their difference.
///
/// With the sums over 1 <= i, k <= N-1 restricted to i + k + l odd,
///
/// * 2A = Σ λ_k (2i+1)(2k+1)/λ_i W(i,l,k)² doubled, with closed form
///   (N²-1-2λ_l)/N + 2λ_l H_l/N + (-1)^(l+N+1) W_0^l,
/// * 2B = Σ (2i+1)(2k+1) W(i,l,k)² doubled, with closed form
///   (N²-1)/N + (-1)^(l+N+1) W_0^l, which collapses to exactly N,
/// * 2A - 2B = 2 λ_l (H_l - 1)/N, and N(2A - 2B) = ħ² λ_l r_minus.
#[derive(Debug, Clone)]
pub struct DerivationReport {
    pub n: u32,
    pub l: u32,
    pub two_a: Rational,
    pub two_b: Rational,
    pub residual_a: Rational,
    pub residual_b: Rational,
    pub residual_diff: Rational,
    pub residual_ricci: Rational,
    pub pass: bool,
}

pub fn check_derivation_identities(sphere: &SphereSymbols, l: u32) -> Result<DerivationReport> {
    let n = sphere.n();
    check_range(n, "l", l, 1)?;
    let nn = n as i64;
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for i in 1..n {
        for k in 1..n {
            if (i + k + l).is_multiple_of(2) {
                continue;
            }
            let sq = sphere.w_squared(i, l, k)?;
            if sq.is_zero() {
                continue;
            }
            let deg = (2 * i as i64 + 1) * (2 * k as i64 + 1);
            a += rat(lambda_int(k) * deg, lambda_int(i)) * &sq;
            b += rat_int(deg) * sq;
        }
    }
    let two_a = rat_int(2) * a;
    let two_b = rat_int(2) * b;

    let ll = lambda_int(l);
    let w0 = sign(l + n + 1) * sphere.w_upper(l, 0)?;
    let h = harmonic(l);
    let closed_a = rat(nn * nn - 1 - 2 * ll, nn) + rat(2 * ll, nn) * &h + &w0;
    let closed_b = rat(nn * nn - 1, nn) + w0;
    let residual_a = &two_a - closed_a;
    let residual_b = &two_b - closed_b;
    let diff = &two_a - &two_b;
    let residual_diff = &diff - rat(2 * ll, nn) * (&h - rat_int(1));

    let (_, r_minus) = ricci_parts(sphere, l)?;
    let hbar_sq_lambda = rat(4 * ll, nn * nn - 1);
    let residual_ricci = rat_int(nn) * diff - hbar_sq_lambda * r_minus;

    let pass = residual_a.is_zero()
        && residual_b.is_zero()
        && residual_diff.is_zero()
        && residual_ricci.is_zero();
    Ok(DerivationReport {
        n,
        l,
        two_a,
        two_b,
        residual_a,
        residual_b,
        residual_diff,
        residual_ricci,
        pass,
    })
}

/// Two weighted sums with no known closed form, computed exactly and
/// reported as data: an alternating analogue of conj-inv-lambda and its
/// odd-index diagonal restriction.
#[derive(Debug, Clone, Serialize)]
pub struct UnknownSums {
    #[serde(rename = "N")]
    pub n: u32,
    pub j: u32,
    pub l: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub alternating: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub odd_diagonal: Rational,
}

pub fn unknown_term_sums(sphere: &SphereSymbols, j: u32, l: u32) -> Result<UnknownSums> {
    let n = sphere.n();
    check_range(n, "j", j, 1)?;
    check_range(n, "l", l, 1)?;
    let mut alternating = Rational::zero();
    let mut odd_diagonal = Rational::zero();
    for k in 1..n {
        let weight = rat(2 * k as i64 + 1, lambda_int(k));
        alternating += sign(k) * &weight * sphere.w_squared(j, l, k)?;
        if k % 2 == 1 {
            odd_diagonal += weight * sphere.w_squared(l, l, k)?;
        }
    }
    Ok(UnknownSums { n, j, l, alternating, odd_diagonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_string;

    fn sphere(n: u32) -> SphereSymbols {
        SphereSymbols::new(n).unwrap()
    }

    #[test]
    fn id_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("sum_basic".parse::<IdentityId>().is_err());
        assert_eq!(IdentityId::ConjInvLambda.to_string(), "conj-inv-lambda");
    }

    #[test]
    fn known_right_hand_sides() {
        let sph = sphere(8);
        let r = check_identity(&sph, IdentityId::SumBasic, 3, 2).unwrap();
        assert_eq!(r.rhs, rat(1, 8));
        assert!(r.pass, "residual {}", ratio_string(&r.residual));

        let r = check_identity(&sph, IdentityId::ConjInvLambda, 3, 2).unwrap();
        assert_eq!(r.rhs, rat(1, 48));
        assert!(r.pass);

        let r = check_identity(&sph, IdentityId::ConjHarmonic, 2, 0).unwrap();
        assert_eq!(r.rhs, rat(3, 8));
        assert_eq!(r.l, 0);
        assert!(r.pass);
    }

    #[test]
    fn every_identity_passes_at_small_n() {
        for n in 2..=12 {
            let sph = sphere(n);
            for id in IdentityId::ALL {
                for (j, l) in admissible_pairs(id, n) {
                    let r = check_identity(&sph, id, j, l).unwrap();
                    assert!(
                        r.pass,
                        "{id} N={n} j={j} l={l} residual {}",
                        ratio_string(&r.residual)
                    );
                }
            }
        }
    }

    #[test]
    fn alternating_w_telescopes_to_delta() {
        let sph = sphere(9);
        let r = check_identity(&sph, IdentityId::SumAlternatingW, 0, 0).unwrap();
        assert_eq!(r.rhs, rat_int(9));
        assert!(r.pass);
        for j in 1..9 {
            let r = check_identity(&sph, IdentityId::SumAlternatingW, j, 0).unwrap();
            assert!(r.rhs.is_zero());
            assert!(r.pass, "j={j}");
        }
    }

    #[test]
    fn basic_sum_head_term_is_kronecker_delta() {
        // Dropping the i = 0 term changes the sum by exactly
        // δ_{jl} / (N(2l+1)), the squared head symbol.
        let sph = sphere(10);
        for (j, l) in [(3u32, 3u32), (3, 5), (7, 7), (1, 2)] {
            let full = check_identity(&sph, IdentityId::SumBasic, j, l).unwrap().lhs;
            let mut tail = Rational::zero();
            for i in 1..10 {
                tail += rat_int(2 * i as i64 + 1) * sph.w_squared(i, j, l).unwrap();
            }
            let head = if j == l { rat(1, 10 * (2 * l as i64 + 1)) } else { Rational::zero() };
            assert_eq!(full - tail, head, "j={j} l={l}");
        }
    }

    #[test]
    fn domain_errors() {
        let sph = sphere(6);
        assert!(check_identity(&sph, IdentityId::ConjInvLambda, 3, 3).is_err());
        assert!(check_identity(&sph, IdentityId::SumBasic, 0, 2).is_err());
        assert!(check_identity(&sph, IdentityId::SumBasic, 6, 2).is_err());
        assert!(check_identity(&sph, IdentityId::SumBasic, 2, 0).is_err());
        assert!(check_identity(&sph, IdentityId::ConjHarmonic, 0, 0).is_err());
        assert!(check_identity(&sph, IdentityId::SumAlternatingW, 0, 0).is_ok());
    }

    #[test]
    fn range_sweep_counts_and_determinism() {
        let ids = [IdentityId::SumBasic, IdentityId::ConjHarmonic];
        let first = verify_range(&ids, 2, 6).unwrap();
        // (N-1)² pairs for sum-basic plus N-1 for conj-harmonic.
        let expect: u64 = (2u64..=6).map(|n| (n - 1) * (n - 1) + (n - 1)).sum();
        assert_eq!(first.checks, expect);
        assert_eq!(first.failures, 0);
        assert!(first.first_failure.is_none());

        let second = verify_range(&ids, 2, 6).unwrap();
        assert_eq!(second.checks, first.checks);

        let empty = verify_range(&[], 2, 6).unwrap();
        assert_eq!(empty.checks, 0);
        assert!(verify_range(&ids, 1, 6).is_err());
        assert!(verify_range(&ids, 5, 4).is_err());
    }

    #[test]
    fn derivation_sums_match_their_closed_forms() {
        let sph = sphere(5);
        let r = check_derivation_identities(&sph, 2).unwrap();
        assert_eq!(r.two_a, rat(31, 5));
        assert_eq!(r.two_b, rat_int(5));
        assert!(r.pass);

        let r = check_derivation_identities(&sphere(8), 3).unwrap();
        assert_eq!(r.two_a, rat(21, 2));
        assert_eq!(r.two_b, rat_int(8));
        assert!(r.pass);

        for (n, l) in [(5u32, 1u32), (6, 4), (12, 5), (9, 8)] {
            let r = check_derivation_identities(&sphere(n), l).unwrap();
            assert_eq!(r.two_b, rat_int(n as i64), "N={n} l={l}");
            assert!(r.pass, "N={n} l={l}");
        }
    }

    #[test]
    fn unknown_sums_are_finite_data() {
        let sph = sphere(7);
        let sums = unknown_term_sums(&sph, 2, 3).unwrap();
        assert!(!sums.odd_diagonal.is_zero());
        let back = unknown_term_sums(&sph, 2, 3).unwrap();
        assert_eq!(sums.alternating, back.alternating);
        assert!(unknown_term_sums(&sph, 0, 3).is_err());
    }

    #[test]
    fn reports_serialize_with_plain_ratio_strings() {
        let sph = sphere(8);
        let r = check_identity(&sph, IdentityId::SumBasic, 3, 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["identity"], "sum-basic");
        assert_eq!(v["N"], 8);
        assert_eq!(v["j"], 3);
        assert_eq!(v["l"], 2);
        assert_eq!(v["rhs"], "1/8");
        assert_eq!(v["residual"], "0");
        assert_eq!(v["pass"], true);
    }
}

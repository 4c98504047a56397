use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::*;
use crate::primes::FactorialTable;
use crate::rational::{rat, rat_int};

fn hi(n: i32) -> HalfInt {
    HalfInt::from_int(n)
}

fn hh(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn engine(max_spin_twice: i32) -> WignerEngine {
    WignerEngine::for_max_spin(hh(max_spin_twice))
}

/// Small deterministic generator for sweep tests.
struct Lcg(u64);

impl Lcg {
    fn next_below(&mut self, bound: u32) -> u32 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) % bound as u64) as u32
    }
}

mod quad {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(QuadExact::zero().to_string(), "0");
        assert_eq!(QuadExact::from_rational(rat(1, 6)).to_string(), "1/6");
        let v = QuadExact::from_sqrt_parts(rat(1, 35), rat_int(14));
        assert_eq!(v.to_string(), "1/35*sqrt(14)");
        let w = QuadExact::from_sqrt_parts(rat(-1, 3), rat(2, 3));
        // -1/3 * sqrt(2/3) = -1/9 * sqrt(6)
        assert_eq!(w.to_string(), "-1/9*sqrt(6)");
        assert_eq!(w.squared(), rat(2, 27));
    }

    #[test]
    fn addition_requires_matching_radicand() {
        let a = QuadExact::from_sqrt_parts(rat(1, 2), rat_int(6));
        let b = QuadExact::from_sqrt_parts(rat(1, 3), rat_int(6));
        let c = QuadExact::from_sqrt_parts(rat(1, 3), rat_int(10));
        assert_eq!(a.add(&b).unwrap(), QuadExact::from_sqrt_parts(rat(5, 6), rat_int(6)));
        assert!(a.add(&c).is_err());
        assert_eq!(a.add(&QuadExact::zero()).unwrap(), a);
        assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn multiplication_extracts_common_square() {
        let a = QuadExact::from_sqrt_parts(rat(1, 2), rat_int(6));
        let b = QuadExact::from_sqrt_parts(rat(1, 5), rat_int(10));
        // sqrt(6) * sqrt(10) = 2 sqrt(15)
        assert_eq!(a.mul(&b), QuadExact::from_sqrt_parts(rat(1, 5), rat_int(15)));
        assert_eq!(a.mul(&a), QuadExact::from_rational(rat(3, 2)));
        assert!(a.mul(&QuadExact::zero()).is_zero());
    }

    #[test]
    fn f64_conversion_is_tight() {
        let v = QuadExact::from_sqrt_parts(rat(1, 35), rat_int(14));
        let (f, bound) = v.to_f64_with_bound();
        assert!((f - 14f64.sqrt() / 35.0).abs() <= bound);
        assert!(bound < 1e-15);
    }
}

mod six_j {
    use super::*;

    #[test]
    fn frozen_values() {
        let eng = engine(10);
        let cases: [([i32; 6], QuadExact); 4] = [
            ([1, 1, 1, 1, 1, 1], QuadExact::from_rational(rat(1, 6))),
            ([1, 2, 3, 3, 2, 1], QuadExact::from_sqrt_parts(rat(1, 35), rat_int(14))),
            ([3, 3, 3, 3, 3, 3], QuadExact::from_rational(rat(-1, 14))),
            ([5, 5, 5, 5, 5, 5], QuadExact::from_rational(rat(1, 52))),
        ];
        let eng_large = engine(16);
        let got = eng_large.six_j([hi(8); 6]).unwrap();
        assert_eq!(got, QuadExact::from_rational(rat(-12219, 965770)));
        for (args, expect) in cases {
            let got = eng.six_j(args.map(hi)).unwrap();
            assert_eq!(got, expect, "6j{args:?}");
        }
        // All-lower-row-halves case: {1 1 1; 1/2 1/2 1/2} = -1/3.
        let got = eng.six_j([hi(1), hi(1), hi(1), hh(1), hh(1), hh(1)]).unwrap();
        assert_eq!(got, QuadExact::from_rational(rat(-1, 3)));
    }

    #[test]
    fn triangle_violations_give_zero() {
        let eng = engine(8);
        assert!(eng.six_j([hi(1), hi(1), hi(3), hi(1), hi(1), hi(1)]).unwrap().is_zero());
        // Half-integer perimeter in a triad is also structural zero.
        assert!(eng.six_j([hi(1), hi(1), hi(1), hh(1), hi(1), hh(1)]).unwrap().is_zero());
    }

    #[test]
    fn negative_arguments_are_domain_errors() {
        let eng = engine(4);
        assert!(eng.six_j([hh(-1), hi(1), hi(1), hi(1), hi(1), hi(1)]).is_err());
    }

    #[test]
    fn one_argument_zero_closed_form() {
        // {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
        let eng = engine(12);
        for (ta, tb, tc) in [(2, 2, 2), (4, 6, 8), (3, 5, 4), (1, 1, 2), (6, 5, 5)] {
            let (a, b, c) = (hh(ta), hh(tb), hh(tc));
            assert!(triangle_ok(a, b, c), "pick valid triads");
            let got = eng.six_j([a, b, c, hi(0), c, b]).unwrap();
            let norm = rat_int((i64::from(tb) + 1) * (i64::from(tc) + 1));
            assert_eq!(got.squared(), rat_int(1) / norm, "a={ta}/2 b={tb}/2 c={tc}/2");
            let negative = ((ta + tb + tc) / 2) % 2 == 1;
            assert_eq!(got.coeff().is_negative(), negative, "a={ta}/2 b={tb}/2 c={tc}/2");
        }
    }

    #[test]
    fn all_24_symmetry_images_agree() {
        let eng = engine(9);
        let mut lcg = Lcg(7);
        let mut tested = 0;
        while tested < 40 {
            let base: Vec<i32> = (0..6).map(|_| lcg.next_below(7) as i32).collect();
            let args = [
                hh(base[0]),
                hh(base[1]),
                hh(base[2]),
                hh(base[3]),
                hh(base[4]),
                hh(base[5]),
            ];
            let value = match eng.six_j(args) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if value.is_zero() {
                continue;
            }
            tested += 1;
            let cols = [(base[0], base[3]), (base[1], base[4]), (base[2], base[5])];
            for perm in COLUMN_PERMS {
                for flips in ROW_FLIPS {
                    let mut img = [0i32; 6];
                    for (slot, (&src, &flip)) in perm.iter().zip(flips.iter()).enumerate() {
                        let (up, down) = cols[src];
                        let (up, down) = if flip { (down, up) } else { (up, down) };
                        img[slot] = up;
                        img[slot + 3] = down;
                    }
                    let got = eng.six_j(img.map(hh)).unwrap();
                    assert_eq!(got, value, "image {img:?} of {base:?}");
                }
            }
        }
    }

    #[test]
    fn canonical_key_is_stable_across_images() {
        let args = [hi(1), hi(2), hi(3), hi(3), hi(2), hi(1)];
        let key = SixJKey::canonical(args);
        let swapped = [hi(2), hi(1), hi(3), hi(2), hi(3), hi(1)];
        assert_eq!(key, SixJKey::canonical(swapped));
        let flipped = [hi(3), hi(2), hi(3), hi(1), hi(2), hi(1)];
        assert_eq!(key, SixJKey::canonical(flipped));
        assert_ne!(key, SixJKey::canonical([hi(1); 6]));
    }

    /// Contracts four 3j symbols over magnetic quantum numbers; an
    /// independent (slower) route to the same 6j value.
    fn six_j_contracted(eng: &WignerEngine, args: [HalfInt; 6]) -> f64 {
        let [j1, j2, j3, l1, l2, l3] = args;
        // Each triad must close or the symbol is structurally zero; skipping
        // here also keeps every projection parity-consistent below.
        if !(triangle_ok(j1, j2, j3)
            && triangle_ok(j1, l2, l3)
            && triangle_ok(l1, j2, l3)
            && triangle_ok(l1, l2, j3))
        {
            return 0.0;
        }
        let mut total = 0.0f64;
        let range = |j: HalfInt| {
            let t = j.twice();
            (-t..=t).step_by(2).map(HalfInt::from_twice).collect::<Vec<_>>()
        };
        for &m1 in &range(j1) {
            for &m2 in &range(j2) {
                let m3 = -(m1 + m2);
                if m3.abs() > j3 {
                    continue;
                }
                for &n2 in &range(l2) {
                    let n3 = m1 + n2;
                    if n3.abs() > l3 {
                        continue;
                    }
                    let n1 = m2 + n3;
                    if n1.abs() > l1 {
                        continue;
                    }
                    let a = eng.three_j([j1, j2, j3], [m1, m2, m3]).unwrap();
                    if a.is_zero() {
                        continue;
                    }
                    let b = eng.three_j([j1, l2, l3], [m1, n2, -n3]).unwrap();
                    if b.is_zero() {
                        continue;
                    }
                    let c = eng.three_j([l1, j2, l3], [-n1, m2, n3]).unwrap();
                    if c.is_zero() {
                        continue;
                    }
                    let d = eng.three_j([l1, l2, j3], [n1, -n2, m3]).unwrap();
                    let phase_exp = (l1.twice()
                        + l2.twice()
                        + l3.twice()
                        + n1.twice()
                        + n2.twice()
                        + n3.twice())
                        / 2;
                    let sign = if phase_exp.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                    total += sign * a.to_f64() * b.to_f64() * c.to_f64() * d.to_f64();
                }
            }
        }
        total
    }

    #[test]
    fn contraction_oracle_agrees() {
        let eng = engine(8);
        let explicit: [[i32; 6]; 3] = [
            [1, 1, 1, 1, 1, 1],
            [1, 2, 3, 3, 2, 1],
            [3, 3, 3, 3, 3, 3],
        ];
        for args in explicit {
            let args = args.map(hi);
            let exact = eng.six_j(args).unwrap().to_f64();
            let contracted = six_j_contracted(&eng, args);
            assert!(
                (exact - contracted).abs() < 1e-10,
                "{args:?}: exact {exact} vs contracted {contracted}"
            );
        }
        let mut lcg = Lcg(99);
        let mut tested = 0;
        while tested < 25 {
            let t: Vec<i32> = (0..6).map(|_| lcg.next_below(7) as i32).collect();
            let args = [hh(t[0]), hh(t[1]), hh(t[2]), hh(t[3]), hh(t[4]), hh(t[5])];
            let exact = eng.six_j(args).unwrap();
            let contracted = six_j_contracted(&eng, args);
            assert!(
                (exact.to_f64() - contracted).abs() < 1e-10,
                "{t:?}: exact {exact} vs contracted {contracted}"
            );
            if !exact.is_zero() {
                tested += 1;
            }
        }
    }
}

mod three_j {
    use super::*;

    #[test]
    fn trivial_and_frozen_values() {
        let eng = engine(6);
        let one = eng.three_j([hi(0); 3], [hi(0); 3]).unwrap();
        assert_eq!(one, QuadExact::from_rational(rat_int(1)));
        // (1 1 1; 1 -1 0) = 1/sqrt(6)
        let v = eng.three_j([hi(1), hi(1), hi(1)], [hi(1), hi(-1), hi(0)]).unwrap();
        assert_eq!(v, QuadExact::from_sqrt_parts(rat(1, 6), rat_int(6)));
    }

    #[test]
    fn structural_zeros_and_domain_errors() {
        let eng = engine(6);
        // Nonzero projection sum.
        assert!(eng
            .three_j([hi(1), hi(1), hi(1)], [hi(1), hi(0), hi(0)])
            .unwrap()
            .is_zero());
        // Triangle violation.
        assert!(eng
            .three_j([hi(1), hi(1), hi(3)], [hi(0), hi(0), hi(0)])
            .unwrap()
            .is_zero());
        // Projection exceeding the spin.
        assert!(eng.three_j([hi(1), hi(1), hi(1)], [hi(2), hi(-2), hi(0)]).is_err());
        // Projection with the wrong parity.
        assert!(eng.three_j([hi(1), hi(1), hi(1)], [hh(1), hh(-1), hi(0)]).is_err());
    }

    #[test]
    fn closed_forms_for_l_l_1() {
        let eng = engine(16);
        for l in 1i32..=6 {
            let lam = rat_int(i64::from(l) * i64::from(l + 1));
            let norm = lam.clone() * rat_int(2 * i64::from(l) + 1);
            for m in -l..=l {
                // (l l 1; m -m 0)^2 = m^2 / (l(l+1)(2l+1))
                let v = eng
                    .three_j([hi(l), hi(l), hi(1)], [hi(m), hi(-m), hi(0)])
                    .unwrap()
                    .squared();
                assert_eq!(v, rat_int(i64::from(m) * i64::from(m)) / norm.clone());
                // (l l 1; m 1-m -1)^2 = (l-m+1)(l+m) / (2 l(l+1)(2l+1))
                if (1 - m).abs() <= l {
                    let v = eng
                        .three_j([hi(l), hi(l), hi(1)], [hi(m), hi(1 - m), hi(-1)])
                        .unwrap()
                        .squared();
                    let expect = rat_int(i64::from(l - m + 1) * i64::from(l + m))
                        / (rat_int(2) * norm.clone());
                    assert_eq!(v, expect);
                }
                // (l l 1; m -1-m 1)^2 = (l-m)(1+l+m) / (2 l(l+1)(2l+1))
                if (-1 - m).abs() <= l {
                    let v = eng
                        .three_j([hi(l), hi(l), hi(1)], [hi(m), hi(-1 - m), hi(1)])
                        .unwrap()
                        .squared();
                    let expect = rat_int(i64::from(l - m) * i64::from(1 + l + m))
                        / (rat_int(2) * norm.clone());
                    assert_eq!(v, expect);
                }
            }
        }
    }

    /// Exact orthogonality: grouped by radicand, every component of the sum
    /// over projections must vanish or hit the normalization exactly.
    #[test]
    fn orthogonality_exact() {
        let eng = engine(8);
        let j1 = hh(3);
        let j2 = hh(3);
        for tj3 in (0..=6).step_by(2) {
            for tj3p in (0..=6).step_by(2) {
                let j3 = hh(tj3);
                let j3p = hh(tj3p);
                let mut sums: HashMap<BigInt, Rational> = HashMap::new();
                for tm1 in (-3..=3).step_by(2) {
                    for tm2 in (-3..=3).step_by(2) {
                        let m1 = hh(tm1);
                        let m2 = hh(tm2);
                        let m3 = -(m1 + m2);
                        if m3.abs() > j3 || m3.abs() > j3p {
                            continue;
                        }
                        let a = eng.three_j([j1, j2, j3], [m1, m2, m3]).unwrap();
                        let b = eng.three_j([j1, j2, j3p], [m1, m2, m3]).unwrap();
                        let p = a.mul(&b);
                        if p.is_zero() {
                            continue;
                        }
                        *sums
                            .entry(p.radicand().numer().clone())
                            .or_insert_with(Rational::zero) += p.coeff().clone();
                    }
                }
                for (radicand, total) in &sums {
                    if tj3 == tj3p && radicand.is_one() {
                        assert_eq!(*total, rat_int(1), "diagonal j3 = {tj3}/2");
                    } else {
                        assert!(
                            total.is_zero(),
                            "j3 = {tj3}/2 vs {tj3p}/2, sqrt({radicand}) component = {total}"
                        );
                    }
                }
            }
        }
    }
}

mod sphere {
    use super::*;

    #[test]
    fn needs_n_at_least_two() {
        assert!(SphereSymbols::new(1).is_err());
        assert!(SphereSymbols::new(2).is_ok());
    }

    #[test]
    fn shared_table_must_be_large_enough() {
        let table = Arc::new(FactorialTable::new(11));
        assert!(SphereSymbols::with_table(4, table.clone()).is_ok());
        assert!(SphereSymbols::with_table(6, table).is_err());
    }

    #[test]
    fn indices_beyond_n_minus_one_are_rejected() {
        let sph = SphereSymbols::new(4).unwrap();
        assert!(sph.w(0, 1, 4).is_err());
        assert!(sph.w_upper(4, 0).is_err());
    }

    #[test]
    fn l_l_1_closed_form() {
        // W(l,l,1)^2 = l(l+1) / (N (N^2-1) (2l+1))
        for n in 2u32..=10 {
            let sph = SphereSymbols::new(n).unwrap();
            let nn = i64::from(n);
            for l in 1..n {
                let ll = i64::from(l);
                let got = sph.w_squared(l, l, 1).unwrap();
                let expect = rat_int(ll * (ll + 1))
                    / rat_int(nn * (nn * nn - 1) * (2 * ll + 1));
                assert_eq!(got, expect, "N={n} l={l}");
            }
        }
    }

    #[test]
    fn index_zero_reduces_to_kronecker() {
        // W(0,j,l)^2 = delta_jl / (N (2l+1))
        let sph = SphereSymbols::new(7).unwrap();
        for j in 0..7 {
            for l in 0..7 {
                let got = sph.w_squared(0, j, l).unwrap();
                if j == l {
                    assert_eq!(got, rat(1, 7 * (2 * i64::from(l) + 1)));
                } else {
                    assert!(got.is_zero());
                }
            }
        }
    }

    #[test]
    fn upper_family_is_rational_symmetric_and_matches_row_zero() {
        for n in 2u32..=9 {
            let sph = SphereSymbols::new(n).unwrap();
            for i in 0..n {
                for j in 0..=i {
                    let a = sph.w_upper(i, j).unwrap();
                    let b = sph.w_upper(j, i).unwrap();
                    assert_eq!(a, b, "N={n} ({i},{j})");
                }
                // W_upper(i, 0) = (-1)^(i+N+1) / N
                let sign = if (i + n + 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    sph.w_upper(i, 0).unwrap(),
                    rat(sign, i64::from(n)),
                    "N={n} i={i}"
                );
            }
        }
    }

    #[test]
    fn squares_respect_uniform_bound() {
        // W(i,j,l)^2 <= 1 / (N (2 max + 1)), with equality patterns at i=0.
        for n in [2u32, 3, 5, 8, 12] {
            let sph = SphereSymbols::new(n).unwrap();
            for l in 0..n {
                for j in 0..=l {
                    for i in 0..=j {
                        let sq = sph.w_squared(i, j, l).unwrap();
                        let bound = rat(1, i64::from(n) * (2 * i64::from(l) + 1));
                        assert!(sq <= bound, "N={n} ({i},{j},{l}): {sq} > {bound}");
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_squares_are_served_from_cache() {
        let sph = SphereSymbols::new(5).unwrap();
        let fake = rat(99, 7);
        sph.seed_squares([((3u32, 2u32, 1u32), fake.clone())]);
        // Any permutation of the seeded triple hits the seeded value.
        assert_eq!(sph.w_squared(1, 2, 3).unwrap(), fake);
        let exported = sph.export_squares();
        assert_eq!(exported.len(), 1);
        assert_eq!(exported[0], ((1, 2, 3), fake));
    }

    #[test]
    fn odd_parity_ratio_reports_its_witness() {
        for n in [3u32, 6, 11] {
            let sph = SphereSymbols::new(n).unwrap();
            let (ratio, [i, j, l]) = odd_parity_max_ratio(&sph).unwrap();
            assert_eq!((i + j + l) % 2, 1, "N={n}");
            assert!(i <= j && j <= l, "N={n}");
            let recomputed = sph.w_squared(i, j, l).unwrap()
                * rat_int(i64::from(n) * (2 * i64::from(l) + 1));
            assert_eq!(ratio, recomputed, "N={n}");
            assert!(ratio > Rational::zero() && ratio <= rat_int(1), "N={n} ratio {ratio}");
        }
    }
}

mod float_engine {
    use super::*;

    #[test]
    fn simple_symbol_hits_default_target() {
        let eng = engine(8);
        let f = eng.six_j_float([hi(1); 6], 1e-12).unwrap();
        assert!((f.value - 1.0 / 6.0).abs() <= f.error_bound);
        assert!(f.error_bound <= 1e-12);
    }

    #[test]
    fn triangle_violation_returns_exact_zero() {
        let eng = engine(8);
        let f = eng.six_j_float([hi(1), hi(1), hi(3), hi(1), hi(1), hi(1)], 1e-12).unwrap();
        assert_eq!(f.value, 0.0);
        assert_eq!(f.error_bound, 0.0);
    }

    #[test]
    fn impossible_target_is_a_precision_error() {
        let eng = engine(8);
        let err = eng.six_j_float([hi(1); 6], 1e-40).unwrap_err();
        assert!(matches!(err, Error::Precision { .. }), "{err}");
    }

    #[test]
    fn corpus_float_value_reproduced() {
        let eng = engine(16);
        let f = eng.six_j_float([hi(8); 6], 1e-12).unwrap();
        assert!((f.value - (-0.01265208072315355)).abs() < 1e-13);
    }

    #[test]
    fn bounds_hold_against_exact_values_across_sweep() {
        let eng = engine(24);
        let mut lcg = Lcg(2024);
        let mut checked = 0;
        while checked < 300 {
            let t: Vec<i32> = (0..6).map(|_| lcg.next_below(25) as i32).collect();
            let args = [hh(t[0]), hh(t[1]), hh(t[2]), hh(t[3]), hh(t[4]), hh(t[5])];
            let exact = match eng.six_j(args) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let f = eng.six_j_float(args, 1e-12).unwrap();
            let (e, e_bound) = exact.to_f64_with_bound();
            assert!(
                (f.value - e).abs() <= f.error_bound + e_bound,
                "{t:?}: float {} exact {} bound {}",
                f.value,
                e,
                f.error_bound
            );
            assert!(f.error_bound <= 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn sphere_floats_match_exact_squares() {
        let sph = SphereSymbols::new(24).unwrap();
        let mut lcg = Lcg(5);
        for _ in 0..120 {
            let l = 1 + lcg.next_below(23);
            let j = 1 + lcg.next_below(23);
            let i = 1 + lcg.next_below(23);
            let f = sph.w_float(i, j, l, 1e-12).unwrap();
            let exact = crate::rational::ratio_to_f64(&sph.w_squared(i, j, l).unwrap());
            let sq_err = 2.0 * f.value.abs() * f.error_bound + f.error_bound * f.error_bound;
            assert!(
                (f.value * f.value - exact).abs() <= sq_err + 1e-15,
                "({i},{j},{l})"
            );
        }
    }
}

mod cg {
    use super::*;

    #[test]
    fn estimate_approaches_exact_at_large_n() {
        let sph = SphereSymbols::new(64).unwrap();
        let cmp = cg_asymptotic_check(&sph, 2, 2, 2).unwrap();
        assert!(
            (cmp.ratio - 1.0).abs() < 0.1,
            "ratio {} strays from 1",
            cmp.ratio
        );
    }

    #[test]
    fn odd_parity_is_rejected() {
        let sph = SphereSymbols::new(16).unwrap();
        assert!(cg_asymptotic_check(&sph, 1, 1, 1).is_err());
        assert!(cg_asymptotic_check(&sph, 1, 1, 4).is_err());
    }
}

//! The spin-(N-1)/2 irreducible representation of so(3) as explicit
//! anti-Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::{OracleError, Result};

pub type CMat = DMatrix<Complex<f64>>;

/// Default ceiling on N: the Arnold-sum path costs O(N^6) and beyond this
/// the dense oracle stops being a quick cross-check.
pub const DEFAULT_LIMIT: u32 = 12;

fn ladder_plus(n: u32) -> CMat {
    let s = (n as f64 - 1.0) / 2.0;
    let mut lp = CMat::zeros(n as usize, n as usize);
    // Row i holds m = s - i; the raising operator sends m to m + 1.
    for i in 1..n as usize {
        let m = s - i as f64;
        lp[(i - 1, i)] = Complex::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    lp
}

/// Builds X_i = -i L_i with L_3 diagonal (s, s-1, ..., -s) and L_1, L_2
/// from the standard ladder matrices, then verifies the so(3) commutation
/// relations [X_i, X_j] = ε_ijk X_k to 1e-12.
pub fn build_generators(n: u32) -> Result<[CMat; 3]> {
    build_generators_with_limit(n, DEFAULT_LIMIT)
}

pub fn build_generators_with_limit(n: u32, limit: u32) -> Result<[CMat; 3]> {
    if n < 2 {
        return Err(OracleError::Domain("generators need N >= 2".into()));
    }
    if n > limit {
        return Err(OracleError::Capacity { n, limit });
    }
    let dim = n as usize;
    let s = (n as f64 - 1.0) / 2.0;
    let lp = ladder_plus(n);
    let lm = lp.adjoint();
    let half = Complex::new(0.5, 0.0);
    let half_i = Complex::new(0.0, 0.5);
    let l1 = (&lp + &lm) * half;
    let l2 = (&lp - &lm) * -half_i;
    let mut l3 = CMat::zeros(dim, dim);
    for i in 0..dim {
        l3[(i, i)] = Complex::new(s - i as f64, 0.0);
    }
    let minus_i = Complex::new(0.0, -1.0);
    let x = [l1 * minus_i, l2 * minus_i, l3 * minus_i];

    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let residual = (&x[i] * &x[j] - &x[j] * &x[i] - &x[k]).norm();
        if residual > 1e-12 {
            return Err(OracleError::Spectral(format!(
                "commutator residual {residual:.3e} for generator pair ({i}, {j})"
            )));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half_is_the_pauli_representation() {
        let x = build_generators(2).unwrap();
        assert!((x[2][(0, 0)] - Complex::new(0.0, -0.5)).norm() < 1e-15);
        assert!((x[2][(1, 1)] - Complex::new(0.0, 0.5)).norm() < 1e-15);
        assert!((x[0][(0, 1)] - Complex::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn casimir_is_scalar() {
        for n in 2..=12 {
            let x = build_generators(n).unwrap();
            let casimir = &x[0] * &x[0] + &x[1] * &x[1] + &x[2] * &x[2];
            let s = (n as f64 - 1.0) / 2.0;
            let expect = -s * (s + 1.0);
            for i in 0..n as usize {
                for j in 0..n as usize {
                    let want = if i == j { expect } else { 0.0 };
                    assert!(
                        (casimir[(i, j)] - Complex::new(want, 0.0)).norm() < 1e-10,
                        "N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn generators_are_anti_hermitian_and_traceless() {
        for n in [3u32, 7, 12] {
            let x = build_generators(n).unwrap();
            for xi in &x {
                assert!((xi + xi.adjoint()).norm() < 1e-12, "N={n}");
                assert!(xi.trace().norm() < 1e-12, "N={n}");
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(build_generators(13), Err(OracleError::Capacity { .. })));
        assert!(build_generators_with_limit(13, 16).is_ok());
        assert!(build_generators(1).is_err());
    }
}

//! Ricci curvature of the quotient by the rigid rotations, computed from
//! O'Neill's submersion formula with the A-tensor taken as half the
//! vertical (wavenumber-one) projection of the scaled bracket.


use crate::curvature::{ad, arnold_numerator, coords};
use crate::spectral::{commutator, inner_bi, SpectralDecomposition};
use crate::{OracleError, Result};

fn block_constant(values: &[f64], what: &str, l: u32) -> Result<f64> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = values.iter().map(|v| (v - mean).abs()).fold(0.0f64, f64::max);
    if spread > 1e-8 * mean.abs().max(1.0) {
        return Err(OracleError::BlockEinstein(format!(
            "{what} varies by {spread:.3e} within eigenspace l = {l}"
        )));
    }
    Ok(mean)
}

/// Σ over the vertical slots of c², the squared bi-invariant norm of the
/// wavenumber-one projection.
fn vertical_square(dec: &SpectralDecomposition, c: &[f64]) -> Result<f64> {
    let v1 = dec.block(1)?;
    Ok(v1.range().map(|a| c[a] * c[a]).sum())
}

/// Ricci eigenvalue of the quotient metric on eigenspace `l`, by summing
/// base sectional curvatures K_B = K_G + 3‖A_XY‖²/‖X∧Y‖² over a horizontal
/// basis; must reproduce r_l(N) + 3/λ_l.
pub fn quotient_ricci_oneill(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    if l < 2 {
        return Err(OracleError::Domain(
            "the quotient Ricci lives on l >= 2; wavenumber one is vertical".into(),
        ));
    }
    let block = dec.block(l)?;
    let lambdas = dec.lambdas();
    let lambda_u = (l * (l + 1)) as f64;
    let n = dec.n;
    let nf = n as f64;
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let u = &dec.basis[idx];
        let mut ric = 0.0;
        for (t, v) in dec.basis.iter().enumerate() {
            if t == idx || dec.wavenumber(t) == 1 {
                continue;
            }
            let c = coords(dec, &ad(dec, u, v));
            let sectional_scale = (n * n) as f64 / (lambda_u * lambdas[t]);
            let kg = arnold_numerator(n, &lambdas, lambda_u, lambdas[t], &c) * sectional_scale;
            let a_term =
                3.0 * vertical_square(dec, &c)? / (2.0 * nf) * sectional_scale;
            ric += kg + a_term;
        }
        values.push(ric);
    }
    block_constant(&values, "O'Neill quotient Ricci", l)
}

/// Σ over the horizontal basis of 3‖A_XY‖²/‖X∧Y‖², which collapses to
/// 9/(2λ_l) independent of N and of the basis vector.
pub fn a_tensor_vertical_sum(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    if l < 2 {
        return Err(OracleError::Domain("the A-tensor sum needs l >= 2".into()));
    }
    let block = dec.block(l)?;
    let lambdas = dec.lambdas();
    let lambda_u = (l * (l + 1)) as f64;
    let n = dec.n;
    let nf = n as f64;
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let u = &dec.basis[idx];
        let mut sum = 0.0;
        for (t, v) in dec.basis.iter().enumerate() {
            if t == idx || dec.wavenumber(t) == 1 {
                continue;
            }
            let c = coords(dec, &ad(dec, u, v));
            sum += 3.0 * vertical_square(dec, &c)? / (2.0 * nf) * (n * n) as f64
                / (lambda_u * lambdas[t]);
        }
        values.push(sum);
    }
    block_constant(&values, "A-tensor vertical sum", l)
}

/// Σ over the vertical slots of the group sectional curvature, which
/// collapses to 3/(2λ_l) for every unit vector in the eigenspace.
pub fn vertical_sectional_sum(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    if l < 2 {
        return Err(OracleError::Domain("the vertical sum needs l >= 2".into()));
    }
    let block = dec.block(l)?;
    let v1 = dec.block(1)?;
    let lambdas = dec.lambdas();
    let lambda_u = (l * (l + 1)) as f64;
    let n = dec.n;
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let u = &dec.basis[idx];
        let mut sum = 0.0;
        for t in v1.range() {
            let c = coords(dec, &ad(dec, u, &dec.basis[t]));
            sum += arnold_numerator(n, &lambdas, lambda_u, lambdas[t], &c) * (n * n) as f64
                / (lambda_u * lambdas[t]);
        }
        values.push(sum);
    }
    block_constant(&values, "vertical sectional sum", l)
}

/// Σ over the eigenspace basis of ‖P₁[u, e]‖² with the plain commutator:
/// the squared structure constants feeding V₁ aggregate to
/// 12λ_l/(N(N²-1)) for every unit u.
pub fn bracket_vertical_square_sum(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    let block = dec.block(l)?;
    let v1 = dec.block(1)?;
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let u = &dec.basis[idx];
        let mut sum = 0.0;
        for e_idx in block.range() {
            let w = commutator(u, &dec.basis[e_idx]);
            for a in v1.range() {
                let c = inner_bi(&dec.basis[a], &w);
                sum += c * c;
            }
        }
        values.push(sum);
    }
    block_constant(&values, "vertical bracket square sum", l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::laplacian_eigenbasis;
    use zeitlin_core::rational::ratio_to_f64;
    use zeitlin_core::ricci::ricci_row;
    use zeitlin_core::wigner::SphereSymbols;

    #[test]
    fn oneill_reproduces_the_shifted_eigenvalue() {
        for n in [3u32, 4, 5] {
            let dec = laplacian_eigenbasis(n).unwrap();
            let sphere = SphereSymbols::new(n).unwrap();
            for l in 2..n {
                let oracle = quotient_ricci_oneill(&dec, l).unwrap();
                let row = ricci_row(&sphere, l).unwrap();
                let exact = ratio_to_f64(&row.r_quotient.unwrap());
                let rel = (oracle - exact).abs() / exact.abs().max(1.0);
                assert!(rel < 1e-6, "N={n} l={l} oracle {oracle} exact {exact}");
            }
        }
    }

    #[test]
    fn vertical_sums_collapse_to_their_closed_forms() {
        for n in [4u32, 6] {
            let dec = laplacian_eigenbasis(n).unwrap();
            for l in 2..n {
                let lam = (l * (l + 1)) as f64;
                let a_sum = a_tensor_vertical_sum(&dec, l).unwrap();
                assert!((a_sum - 4.5 / lam).abs() < 1e-8, "N={n} l={l} a {a_sum}");
                let kg_sum = vertical_sectional_sum(&dec, l).unwrap();
                assert!((kg_sum - 1.5 / lam).abs() < 1e-8, "N={n} l={l} kg {kg_sum}");
            }
        }
    }

    #[test]
    fn bracket_square_sum_matches_all_wavenumbers() {
        for n in [3u32, 5] {
            let dec = laplacian_eigenbasis(n).unwrap();
            let nf = n as f64;
            for l in 1..n {
                let lam = (l * (l + 1)) as f64;
                let got = bracket_vertical_square_sum(&dec, l).unwrap();
                let want = 12.0 * lam / (nf * (nf * nf - 1.0));
                assert!((got - want).abs() < 1e-8, "N={n} l={l} got {got} want {want}");
            }
        }
    }

    #[test]
    fn wavenumber_one_is_rejected() {
        let dec = laplacian_eigenbasis(3).unwrap();
        assert!(quotient_ricci_oneill(&dec, 1).is_err());
        assert!(a_tensor_vertical_sum(&dec, 1).is_err());
        assert!(vertical_sectional_sum(&dec, 1).is_err());
    }
}

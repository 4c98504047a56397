//! Two independent Ricci computations on the dense model: a weighted trace
//! formula over eigenspace projections, and a direct Arnold sectional sum.
//! Both produce the per-eigenspace Ricci eigenvalue of the Zeitlin metric.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeitlin_core::wigner::SphereSymbols;

use crate::generators::CMat;
use crate::spectral::{commutator, inner_bi, SpectralDecomposition};
use crate::{OracleError, Result};

/// The adjoint action with the quantization-scaled bracket: -[u, v]/ħ.
pub fn ad(dec: &SpectralDecomposition, u: &CMat, v: &CMat) -> CMat {
    commutator(u, v) * Complex::new(-1.0 / dec.hbar, 0.0)
}

/// Coordinates of `w` over the orthonormal eigenbasis.
pub fn coords(dec: &SpectralDecomposition, w: &CMat) -> Vec<f64> {
    dec.basis.iter().map(|v| inner_bi(v, w)).collect()
}

/// Δ⁻¹ applied through the spectral decomposition.
pub fn inv_laplacian(dec: &SpectralDecomposition, w: &CMat) -> CMat {
    let lambdas = dec.lambdas();
    let mut out = CMat::zeros(w.nrows(), w.ncols());
    for (a, v) in dec.basis.iter().enumerate() {
        let c = inner_bi(v, w);
        out += v * Complex::new(-c / lambdas[a], 0.0);
    }
    out
}

/// The Zeitlin inner product ⟨u, v⟩ = Tr(u†(-Δ)v)/N, evaluated by direct
/// operator application so it stays independent of the spectral data.
pub fn zeitlin_inner(dec: &SpectralDecomposition, u: &CMat, v: &CMat) -> f64 {
    -inner_bi(u, &dec.laplacian(v)) / dec.n as f64
}

fn alpha(l: u32, n: u32) -> f64 {
    (l * (l + 1)) as f64 / n as f64
}

/// Matrix of ad_u over the eigenbasis: entry (a, b) = (v_a, ad_u v_b).
fn ad_matrix(dec: &SpectralDecomposition, u: &CMat) -> DMatrix<f64> {
    let b = dec.basis.len();
    let mut m = DMatrix::<f64>::zeros(b, b);
    for (col, v) in dec.basis.iter().enumerate() {
        let image = ad(dec, u, v);
        for (row, e) in dec.basis.iter().enumerate() {
            m[(row, col)] = inner_bi(e, &image);
        }
    }
    m
}

/// Tr(P_k ad_u P_k' ad_v P_k) from the eigenbasis matrices of the two
/// adjoint actions.
fn projected_trace(
    dec: &SpectralDecomposition,
    mu: &DMatrix<f64>,
    mv: &DMatrix<f64>,
    k: u32,
    kp: u32,
) -> Result<f64> {
    let bk = dec.block(k)?;
    let bkp = dec.block(kp)?;
    let mut t = 0.0;
    for i in bk.range() {
        for j in bkp.range() {
            t += mu[(i, j)] * mv[(j, i)];
        }
    }
    Ok(t)
}

fn ricci_from_traces(
    dec: &SpectralDecomposition,
    mu: &DMatrix<f64>,
    mv: &DMatrix<f64>,
    l: u32,
    lp: u32,
) -> Result<f64> {
    let n = dec.n;
    let al = alpha(l, n);
    let alp = alpha(lp, n);
    let mut ric = 0.0;
    for k in 1..n {
        for kp in 1..n {
            let ak = alpha(k, n);
            let akp = alpha(kp, n);
            let weight = (al * alp - (ak - akp) * (ak - akp)) / (4.0 * ak * akp);
            ric -= weight * projected_trace(dec, mu, mv, k, kp)?;
        }
    }
    Ok(ric)
}

/// Ricci eigenvalue of eigenspace `l` by the weighted-trace formula,
/// verified constant across the whole eigenbasis of the block.
pub fn ricci_trace_formula(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    let block = dec.block(l)?;
    let al = alpha(l, dec.n);
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let m = ad_matrix(dec, &dec.basis[idx]);
        values.push(ricci_from_traces(dec, &m, &m, l, l)? / al);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = values
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0f64, f64::max);
    if spread > 1e-8 * mean.abs().max(1.0) {
        return Err(OracleError::BlockEinstein(format!(
            "trace-formula Ricci varies by {spread:.3e} within eigenspace l = {l}"
        )));
    }
    Ok(mean)
}

/// Largest |Ric(u, v)| over pairs with u in eigenspace `l`, v in `lp`;
/// block diagonality demands this vanish for l ≠ lp.
pub fn ricci_cross_block(dec: &SpectralDecomposition, l: u32, lp: u32) -> Result<f64> {
    let bl = dec.block(l)?;
    let blp = dec.block(lp)?;
    let ms_l: Vec<DMatrix<f64>> =
        bl.range().map(|i| ad_matrix(dec, &dec.basis[i])).collect();
    let ms_lp: Vec<DMatrix<f64>> =
        blp.range().map(|i| ad_matrix(dec, &dec.basis[i])).collect();
    let mut worst = 0.0f64;
    for mu in &ms_l {
        for mv in &ms_lp {
            worst = worst.max(ricci_from_traces(dec, mu, mv, l, lp)?.abs());
        }
    }
    Ok(worst)
}

/// Arnold sectional-sum numerator for eigenvectors, in eigencoordinates.
/// `c` holds the coordinates of w = ad_u v; the ad⋆ terms reduce to
/// rational multiples of the same coordinates because u and v are
/// Laplacian eigenvectors.
pub(crate) fn arnold_numerator(
    n: u32,
    lambdas: &[f64],
    lambda_u: f64,
    lambda_v: f64,
    c: &[f64],
) -> f64 {
    let mut quad_p = 0.0;
    let mut quad_q = 0.0;
    for (a, &ca) in c.iter().enumerate() {
        let la = lambdas[a];
        let p = ca * (la - lambda_v + lambda_u) / la;
        let q = ca * (la - lambda_v) / la;
        quad_p += p * p * la;
        quad_q += q * ca * la;
    }
    (0.25 * quad_p - quad_q) / n as f64
}

/// Ricci eigenvalue of eigenspace `l` by summing Arnold sectional
/// numerators over the full eigenbasis. Errors if the result disagrees
/// with the trace formula beyond 1e-6 relative.
pub fn ricci_arnold_sum(dec: &SpectralDecomposition, l: u32) -> Result<f64> {
    let block = dec.block(l)?;
    let lambdas = dec.lambdas();
    let lambda_u = (l * (l + 1)) as f64;
    let n = dec.n;
    let mut values = Vec::with_capacity(block.len);
    for idx in block.range() {
        let u = &dec.basis[idx];
        let mut ric = 0.0;
        for (t, v) in dec.basis.iter().enumerate() {
            if t == idx {
                continue;
            }
            let c = coords(dec, &ad(dec, u, v));
            let numer = arnold_numerator(n, &lambdas, lambda_u, lambdas[t], &c);
            ric += numer * (n * n) as f64 / (lambda_u * lambdas[t]);
        }
        values.push(ric);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;

    let trace_value = ricci_trace_formula(dec, l)?;
    let rel = (mean - trace_value).abs() / trace_value.abs().max(1.0);
    if rel > 1e-6 {
        return Err(OracleError::Inconsistency(format!(
            "Arnold sum {mean} vs trace formula {trace_value} at l = {l} (rel {rel:.3e})"
        )));
    }
    Ok(mean)
}

/// Verifies ⟨ad⋆_u v, w⟩ = ⟨v, ad_u w⟩ on seeded random triples, with ad⋆
/// computed as -Δ⁻¹ ad_u Δ; returns the largest residual.
pub fn check_adstar_adjointness(dec: &SpectralDecomposition, trials: u32, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = dec.n as usize;
    let random_vector = |rng: &mut ChaCha8Rng| {
        let mut m = CMat::zeros(dim, dim);
        for v in &dec.basis {
            m += v * Complex::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        let norm = zeitlin_inner(dec, &m, &m).sqrt();
        m * Complex::new(1.0 / norm, 0.0)
    };
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let u = random_vector(&mut rng);
        let v = random_vector(&mut rng);
        let w = random_vector(&mut rng);
        let adstar_uv = -inv_laplacian(dec, &ad(dec, &u, &dec.laplacian(&v)));
        let lhs = zeitlin_inner(dec, &adstar_uv, &w);
        let rhs = zeitlin_inner(dec, &v, &ad(dec, &u, &w));
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Outcome of comparing every projected trace against the exact squared
/// 6j prediction 4(2k+1)(2k'+1)/ħ² · W²  (zero off the selection rules).
#[derive(Debug, Clone)]
pub struct TraceIdentityReport {
    pub n: u32,
    pub checks: u64,
    pub max_rel_err: f64,
    pub first_failure: Option<(u32, u32, u32)>,
}

impl TraceIdentityReport {
    pub fn pass(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn trace_identity_check(
    dec: &SpectralDecomposition,
    sphere: &SphereSymbols,
) -> Result<TraceIdentityReport> {
    let n = dec.n;
    if sphere.n() != n {
        return Err(OracleError::Domain(
            "sphere family and decomposition disagree on N".into(),
        ));
    }
    let scale = 4.0 / (dec.hbar * dec.hbar);
    let mut checks = 0u64;
    let mut max_rel_err = 0.0f64;
    let mut first_failure = None;
    for l in 1..n {
        let block = dec.block(l)?;
        let ms: Vec<DMatrix<f64>> =
            block.range().map(|i| ad_matrix(dec, &dec.basis[i])).collect();
        for k in 1..n {
            for kp in 1..n {
                let admissible = (l + k + kp) % 2 == 1
                    && k + kp >= l
                    && l + kp >= k
                    && l + k >= kp;
                let exact = if admissible {
                    let w2 = zeitlin_core::rational::ratio_to_f64(
                        &sphere.w_squared(l, k, kp)?,
                    );
                    scale * (2 * k + 1) as f64 * (2 * kp + 1) as f64 * w2
                } else {
                    0.0
                };
                for m in &ms {
                    let got = -projected_trace(dec, m, m, k, kp)?;
                    let rel = (got - exact).abs() / exact.abs().max(1.0);
                    checks += 1;
                    max_rel_err = max_rel_err.max(rel);
                    if rel > 1e-8 && first_failure.is_none() {
                        first_failure = Some((l, k, kp));
                    }
                }
            }
        }
    }
    Ok(TraceIdentityReport { n, checks, max_rel_err, first_failure })
}

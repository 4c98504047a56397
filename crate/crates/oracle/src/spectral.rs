//! Diagonalization of the quantized Laplacian on su(N).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::generators::{build_generators_with_limit, CMat, DEFAULT_LIMIT};
use crate::{OracleError, Result};

/// Real inner product Tr(a†b) on su(N); real-valued for anti-Hermitian
/// arguments, so only the real part is accumulated.
pub fn inner_bi(a: &CMat, b: &CMat) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.re * y.re + x.im * y.im;
    }
    acc
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// A real orthonormal basis of su(N) under Tr(a†b): antisymmetric pairs,
/// symmetric-imaginary pairs, and imaginary traceless diagonals.
pub fn su_basis(n: u32) -> Vec<CMat> {
    let dim = n as usize;
    let mut basis = Vec::with_capacity(dim * dim - 1);
    let inv_sqrt2 = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i_inv_sqrt2 = Complex::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    for p in 0..dim {
        for q in (p + 1)..dim {
            let mut a = CMat::zeros(dim, dim);
            a[(p, q)] = inv_sqrt2;
            a[(q, p)] = -inv_sqrt2;
            basis.push(a);
            let mut s = CMat::zeros(dim, dim);
            s[(p, q)] = i_inv_sqrt2;
            s[(q, p)] = i_inv_sqrt2;
            basis.push(s);
        }
    }
    for k in 1..dim {
        let scale = 1.0 / ((k * (k + 1)) as f64).sqrt();
        let mut d = CMat::zeros(dim, dim);
        for t in 0..k {
            d[(t, t)] = Complex::new(0.0, scale);
        }
        d[(k, k)] = Complex::new(0.0, -(k as f64) * scale);
        basis.push(d);
    }
    basis
}

/// One Laplacian eigenspace: wavenumber and the index range of its
/// eigenvectors inside the decomposition's ordered basis.
#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub l: u32,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// su(N) diagonalized under Δ: an orthonormal eigenbasis in matrix form,
/// grouped into blocks of ascending wavenumber.
pub struct SpectralDecomposition {
    pub n: u32,
    pub generators: [CMat; 3],
    pub basis: Vec<CMat>,
    pub blocks: Vec<Block>,
    pub hbar: f64,
}

impl SpectralDecomposition {
    pub fn block(&self, l: u32) -> Result<Block> {
        self.blocks
            .iter()
            .copied()
            .find(|b| b.l == l)
            .ok_or_else(|| OracleError::Domain(format!("no eigenspace with l = {l}")))
    }

    /// Wavenumber of the block containing basis slot `idx`.
    pub fn wavenumber(&self, idx: usize) -> u32 {
        self.blocks
            .iter()
            .find(|b| b.range().contains(&idx))
            .map(|b| b.l)
            .expect("every slot lies in a block")
    }

    /// λ = l(l+1) per basis slot, precomputed order.
    pub fn lambdas(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.basis.len());
        for b in &self.blocks {
            for _ in b.range() {
                out.push((b.l * (b.l + 1)) as f64);
            }
        }
        out
    }

    /// Δ applied to an arbitrary matrix: Σ_i [X_i, [X_i, a]].
    pub fn laplacian(&self, a: &CMat) -> CMat {
        let mut out = CMat::zeros(a.nrows(), a.ncols());
        for x in &self.generators {
            out += commutator(x, &commutator(x, a));
        }
        out
    }
}

pub fn laplacian_eigenbasis(n: u32) -> Result<SpectralDecomposition> {
    laplacian_eigenbasis_with_limit(n, DEFAULT_LIMIT)
}

pub fn laplacian_eigenbasis_with_limit(n: u32, limit: u32) -> Result<SpectralDecomposition> {
    let generators = build_generators_with_limit(n, limit)?;
    let raw = su_basis(n);
    let dim = raw.len();

    let images: Vec<CMat> = raw
        .iter()
        .map(|a| {
            let mut out = CMat::zeros(n as usize, n as usize);
            for x in &generators {
                out += commutator(x, &commutator(x, a));
            }
            out
        })
        .collect();
    let mut op = DMatrix::<f64>::zeros(dim, dim);
    for (j, img) in images.iter().enumerate() {
        for (i, e) in raw.iter().enumerate() {
            op[(i, j)] = inner_bi(e, img);
        }
    }
    let asym = (&op - op.transpose()).norm();
    if asym > 1e-10 {
        return Err(OracleError::Spectral(format!(
            "Laplacian operator is not symmetric: residual {asym:.3e}"
        )));
    }
    let op = (&op + op.transpose()) * 0.5;
    let eig = op.symmetric_eigen();

    // Group eigenvalues at -l(l+1) with a guard band, then demand exact
    // so(3) multiplicities.
    let mut tagged: Vec<(u32, DVector<f64>)> = Vec::with_capacity(dim);
    for (idx, &ev) in eig.eigenvalues.iter().enumerate() {
        let l_guess = ((-1.0 + (1.0 - 4.0 * ev).sqrt()) / 2.0).round();
        if !l_guess.is_finite() || l_guess < 1.0 || l_guess > (n - 1) as f64 {
            return Err(OracleError::Spectral(format!(
                "eigenvalue {ev} does not sit near any -l(l+1)"
            )));
        }
        let l = l_guess as u32;
        let target = -((l * (l + 1)) as f64);
        if (ev - target).abs() > 0.5 || (ev - target).abs() > 1e-6 * target.abs() {
            return Err(OracleError::Spectral(format!(
                "eigenvalue {ev} strays from {target} beyond tolerance"
            )));
        }
        tagged.push((l, eig.eigenvectors.column(idx).into_owned()));
    }
    tagged.sort_by_key(|(l, _)| *l);

    let mut blocks = Vec::new();
    let mut basis = Vec::with_capacity(dim);
    let mut cursor = 0usize;
    for l in 1..n {
        let count = tagged.iter().filter(|(tl, _)| *tl == l).count();
        if count != (2 * l + 1) as usize {
            return Err(OracleError::Spectral(format!(
                "eigenspace l = {l} has multiplicity {count}, expected {}",
                2 * l + 1
            )));
        }
        blocks.push(Block { l, start: cursor, len: count });
        cursor += count;
    }

    for (_, coords) in &tagged {
        let mut m = CMat::zeros(n as usize, n as usize);
        for (a, &c) in raw.iter().zip(coords.iter()) {
            m += a * Complex::new(c, 0.0);
        }
        basis.push(m);
    }

    // The QL eigenvectors can leave visible cross-eigenspace leakage even
    // when every eigenvalue lands cleanly, so refine each vector with the
    // exact Lagrange projector onto its eigenspace: the Laplacian spectrum
    // is the known integer set {-l(l+1)}, which makes the projector a short
    // product of (Δ + λ_k)/(λ_k - λ_l) factors. Distant eigenvalues are
    // annihilated first to keep the partial products small.
    let lap = |a: &CMat| -> CMat {
        let mut out = CMat::zeros(n as usize, n as usize);
        for x in &generators {
            out += commutator(x, &commutator(x, a));
        }
        out
    };
    for block in &blocks {
        let lam_l = (block.l * (block.l + 1)) as f64;
        let mut others: Vec<f64> = (1..n)
            .filter(|k| *k != block.l)
            .map(|k| (k * (k + 1)) as f64)
            .collect();
        others.sort_by(|a, b| {
            ((b - lam_l).abs()).total_cmp(&(a - lam_l).abs())
        });
        for _pass in 0..2 {
            for idx in block.range() {
                let mut v = basis[idx].clone();
                for &lam_k in &others {
                    v = (lap(&v) + &v * Complex::new(lam_k, 0.0))
                        / Complex::new(lam_k - lam_l, 0.0);
                }
                basis[idx] = v;
            }

            // Löwdin step: restore orthonormality inside the block without
            // preferring any vector over another.
            let len = block.len;
            let mut gram = DMatrix::<f64>::zeros(len, len);
            for (bi, i) in block.range().enumerate() {
                for (bj, j) in block.range().enumerate() {
                    gram[(bi, bj)] = inner_bi(&basis[i], &basis[j]);
                }
            }
            let geig = gram.symmetric_eigen();
            let mut inv_sqrt = DMatrix::<f64>::zeros(len, len);
            for (k, &ev) in geig.eigenvalues.iter().enumerate() {
                if ev <= 0.5 {
                    return Err(OracleError::Spectral(format!(
                        "eigenspace l = {} degenerated during refinement",
                        block.l
                    )));
                }
                let q = geig.eigenvectors.column(k);
                let scale = 1.0 / ev.sqrt();
                for bi in 0..len {
                    for bj in 0..len {
                        inv_sqrt[(bi, bj)] += q[bi] * q[bj] * scale;
                    }
                }
            }
            let old: Vec<CMat> = block.range().map(|i| basis[i].clone()).collect();
            for (bi, i) in block.range().enumerate() {
                let mut m = CMat::zeros(n as usize, n as usize);
                for (bj, o) in old.iter().enumerate() {
                    m += o * Complex::new(inv_sqrt[(bj, bi)], 0.0);
                }
                basis[i] = m;
            }
        }

        for idx in block.range() {
            let resid = (lap(&basis[idx]) + &basis[idx] * Complex::new(lam_l, 0.0)).norm();
            if resid > 1e-8 {
                return Err(OracleError::Spectral(format!(
                    "refined eigenvector in l = {} has residual {resid:.3e}",
                    block.l
                )));
            }
        }
    }

    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            if (inner_bi(u, v) - want).abs() > 1e-10 {
                return Err(OracleError::Spectral(format!(
                    "eigenbasis Gram defect at slots ({i}, {j})"
                )));
            }
        }
    }

    let hbar = 2.0 / ((n as f64) * (n as f64) - 1.0).sqrt();
    Ok(SpectralDecomposition { n, generators, basis, blocks, hbar })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su3_spectrum_is_minus_two_and_minus_six() {
        let dec = laplacian_eigenbasis(3).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!((dec.blocks[0].l, dec.blocks[0].len), (1, 3));
        assert_eq!((dec.blocks[1].l, dec.blocks[1].len), (2, 5));
        for b in &dec.blocks {
            let target = -((b.l * (b.l + 1)) as f64);
            for idx in b.range() {
                let u = &dec.basis[idx];
                let residual = (dec.laplacian(u) - u * Complex::new(target, 0.0)).norm();
                assert!(residual < 1e-10, "l={} residual {residual:.3e}", b.l);
            }
        }
    }

    #[test]
    fn multiplicities_fill_su5() {
        let dec = laplacian_eigenbasis(5).unwrap();
        let lens: Vec<usize> = dec.blocks.iter().map(|b| b.len).collect();
        assert_eq!(lens, vec![3, 5, 7, 9]);
        assert_eq!(lens.iter().sum::<usize>(), 24);
    }

    #[test]
    fn eigenbasis_is_anti_hermitian_and_orthonormal() {
        let dec = laplacian_eigenbasis(6).unwrap();
        for u in &dec.basis {
            assert!((u + u.adjoint()).norm() < 1e-10);
            assert!(u.trace().norm() < 1e-10);
        }
        for (i, u) in dec.basis.iter().enumerate() {
            for (j, v) in dec.basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner_bi(u, v) - want).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn raw_basis_is_orthonormal() {
        let raw = su_basis(4);
        assert_eq!(raw.len(), 15);
        for (i, u) in raw.iter().enumerate() {
            for (j, v) in raw.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner_bi(u, v) - want).abs() < 1e-14, "({i},{j})");
            }
        }
    }
}

//! Reference computations that share no code path with the library.
//!
//! - Schmidt coefficients from the eigenvalues of the reduced density matrix,
//!   using a cyclic Jacobi solver on the real 2n×2n embedding of a Hermitian
//!   matrix.
//! - OPM solution-space dimension from the dense real constraint matrix,
//!   ranked by Gaussian elimination with full pivoting.

#![allow(dead_code)]

use num_complex::Complex64;

pub type C = Complex64;

/// Digits of `index` in the mixed radix `dims` (most significant first).
pub fn digits(dims: &[usize], index: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    let mut rest = index;
    for k in (0..dims.len()).rev() {
        out[k] = rest % dims[k];
        rest /= dims[k];
    }
    out
}

/// Index of the sub-label on `block` (row-major, ascending party order).
pub fn block_index(dims: &[usize], label: &[usize], block: &[usize]) -> usize {
    let mut idx = 0;
    for &p in block {
        idx = idx * dims[p] + label[p];
    }
    idx
}

/// Eigenvalues of a real symmetric matrix (row-major `n×n`), ascending.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[i * n + j].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Eigenvalues of a Hermitian matrix (row-major), descending.
pub fn hermitian_eigenvalues(h: &[C], n: usize) -> Vec<f64> {
    // [[Re, -Im], [Im, Re]] has each eigenvalue of h twice
    let m = 2 * n;
    let mut s = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[i * m + (j + n)] = -z.im;
            s[(i + n) * m + j] = z.im;
        }
    }
    let ev = jacobi_eigenvalues(s, m);
    let mut out: Vec<f64> = ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    out.reverse();
    out
}

/// Schmidt coefficients of `amplitudes` across `block_a | block_b`, from the
/// eigenvalues of the reduced density matrix on block A. Returns
/// `min(d_A, d_B)` values, descending.
pub fn schmidt_via_density(amplitudes: &[C], dims: &[usize], block_a: &[usize], block_b: &[usize]) -> Vec<f64> {
    let da: usize = block_a.iter().map(|&p| dims[p]).product();
    let db: usize = block_b.iter().map(|&p| dims[p]).product();
    let mut m = vec![C::new(0.0, 0.0); da * db];
    for (i, a) in amplitudes.iter().enumerate() {
        let label = digits(dims, i);
        m[block_index(dims, &label, block_a) * db + block_index(dims, &label, block_b)] = *a;
    }
    let mut rho = vec![C::new(0.0, 0.0); da * da];
    for r in 0..da {
        for s in 0..da {
            rho[r * da + s] = (0..db).map(|c| m[r * db + c] * m[s * db + c].conj()).sum();
        }
    }
    hermitian_eigenvalues(&rho, da)
        .into_iter()
        .take(da.min(db))
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Rank of a dense real matrix by Gaussian elimination with full pivoting.
pub fn rank(mut a: Vec<Vec<f64>>, threshold: f64) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut col_used = vec![false; cols];
    let mut row_used = vec![false; rows];
    loop {
        let mut best = (0.0, 0, 0);
        for r in (0..rows).filter(|&r| !row_used[r]) {
            for c in (0..cols).filter(|&c| !col_used[c]) {
                if a[r][c].abs() > best.0 {
                    best = (a[r][c].abs(), r, c);
                }
            }
        }
        if best.0 <= threshold {
            return rank;
        }
        let (_, pr, pc) = best;
        row_used[pr] = true;
        col_used[pc] = true;
        rank += 1;
        let pivot_row = a[pr].clone();
        for r in (0..rows).filter(|&r| !row_used[r]) {
            let f = a[r][pc] / pivot_row[pc];
            if f != 0.0 {
                for c in 0..cols {
                    a[r][c] -= f * pivot_row[c];
                }
            }
        }
    }
}

/// Dimension of the real space of Hermitian `E` on the measured block with
/// `⟨ψ_i|(E⊗I)|ψ_j⟩ = 0` for all `i < j`.
///
/// Unknowns: `E[r,r]`, and for `r < s` the pair `Re E[r,s]`, `Im E[r,s]`.
pub fn opm_space_dim(states: &[Vec<C>], dims: &[usize], measured: &[usize], threshold: f64) -> usize {
    let other: Vec<usize> = (0..dims.len()).filter(|p| !measured.contains(p)).collect();
    let dm: usize = measured.iter().map(|&p| dims[p]).product();
    let doth: usize = other.iter().map(|&p| dims[p]).product();
    let split = |psi: &Vec<C>| {
        let mut m = vec![C::new(0.0, 0.0); dm * doth];
        for (i, a) in psi.iter().enumerate() {
            let label = digits(dims, i);
            m[block_index(dims, &label, measured) * doth + block_index(dims, &label, &other)] = *a;
        }
        m
    };
    let mats: Vec<Vec<C>> = states.iter().map(split).collect();

    let unknown = |r: usize, s: usize, imag: bool| -> usize {
        // diag r -> r*dm + r; (r<s) real -> r*dm + s; (r<s) imag -> s*dm + r
        if r == s {
            r * dm + r
        } else if !imag {
            r * dm + s
        } else {
            s * dm + r
        }
    };

    let mut rows = Vec::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let mut re = vec![0.0; dm * dm];
            let mut im = vec![0.0; dm * dm];
            for r in 0..dm {
                for s in 0..dm {
                    let w: C = (0..doth).map(|c| mats[i][r * doth + c].conj() * mats[j][s * doth + c]).sum();
                    if r == s {
                        re[unknown(r, r, false)] += w.re;
                        im[unknown(r, r, false)] += w.im;
                    } else {
                        let (lo, hi) = (r.min(s), r.max(s));
                        // E[r,s] = x ± i y with + when r < s
                        let sign = if r < s { 1.0 } else { -1.0 };
                        let x = w;
                        let y = w * C::new(0.0, sign);
                        re[unknown(lo, hi, false)] += x.re;
                        im[unknown(lo, hi, false)] += x.im;
                        re[unknown(lo, hi, true)] += y.re;
                        im[unknown(lo, hi, true)] += y.im;
                    }
                }
            }
            rows.push(re);
            rows.push(im);
        }
    }
    dm * dm - rank(rows, threshold)
}

//! Dense multipartite pure states and the bipartite views of them.
//!
//! Basis labels flatten row-major over parties: for dims `(d0, d1, …)` the
//! label `(a0, a1, …)` lives at `((a0·d1 + a1)·d2 + a2)…`. Regrouping across a
//! bipartition applies the same convention inside each block, with parties in
//! ascending index order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bipartition::{Bipartition, Side};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::{CMatrix, C64};

const ZERO: C64 = Complex64::new(0.0, 0.0);

/// One term `coeff · |basis⟩` of an unnormalized superposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub basis: Vec<usize>,
}

impl Term {
    pub fn new(coeff: C64, basis: impl Into<Vec<usize>>) -> Self {
        Self { coeff, basis: basis.into() }
    }

    /// Unit-coefficient term.
    pub fn ket(basis: impl Into<Vec<usize>>) -> Self {
        Self::new(Complex64::new(1.0, 0.0), basis)
    }
}

/// A normalized pure state on `d0 ⊗ d1 ⊗ …`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
    pub label: String,
}

impl StateVector {
    /// Normalize `amplitudes` into a state on `dims`.
    pub fn new(dims: &[usize], amplitudes: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        check_dims(dims)?;
        let len: usize = dims.iter().product();
        if amplitudes.len() != len {
            return Err(Error::Shape(format!(
                "{} amplitudes for dims {dims:?} (expected {len})",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("state has zero or non-finite norm".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { dims: dims.to_vec(), amplitudes, label: label.into() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitude(&self, label: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[flat_index(&self.dims, label)?])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Multiply by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            dims: self.dims.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
            label: self.label.clone(),
        }
    }

    /// Nonzero amplitudes as `(basis label, amplitude)` in flattened order.
    pub fn nonzero_terms(&self) -> Vec<Term> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(i, a)| Term::new(*a, unflatten(&self.dims, i)))
            .collect()
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Shape("a state needs at least one party".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Shape(format!("party dimension {d} < 2 in {dims:?}")));
    }
    Ok(())
}

/// Row-major flattened index of a basis label.
pub fn flat_index(dims: &[usize], label: &[usize]) -> Result<usize> {
    if label.len() != dims.len() || label.iter().zip(dims).any(|(a, d)| a >= d) {
        return Err(Error::Domain { label: label.to_vec(), dims: dims.to_vec() });
    }
    Ok(label.iter().zip(dims).fold(0, |acc, (a, d)| acc * d + a))
}

/// Inverse of [`flat_index`]; `index` must be in range.
pub fn unflatten(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut label = vec![0; dims.len()];
    for (slot, d) in label.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    label
}

/// Normalized superposition of basis kets.
///
/// Repeated labels add up.
pub fn superpose(terms: &[Term], dims: &[usize]) -> Result<StateVector> {
    check_dims(dims)?;
    let mut amplitudes = vec![ZERO; dims.iter().product()];
    for t in terms {
        amplitudes[flat_index(dims, &t.basis)?] += t.coeff;
    }
    if amplitudes.iter().all(|a| *a == ZERO) {
        return Err(Error::Degenerate("all coefficients are zero".into()));
    }
    StateVector::new(dims, amplitudes, "")
}

/// `⟨x|y⟩`, conjugate-linear in `x`.
pub fn inner_product(x: &StateVector, y: &StateVector) -> Result<C64> {
    if x.dims != y.dims {
        return Err(Error::Shape(format!("dims {:?} vs {:?}", x.dims, y.dims)));
    }
    Ok(x.amplitudes.iter().zip(&y.amplitudes).map(|(a, b)| a.conj() * b).sum())
}

/// Gram matrix `G[i,j] = ⟨ψ_i|ψ_j⟩`.
pub fn gram(states: &[StateVector]) -> Result<CMatrix> {
    if states.is_empty() {
        return Err(Error::Degenerate("gram of an empty set".into()));
    }
    let n = states.len();
    let mut g = DMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        g[(i, i)] = inner_product(&states[i], &states[i])?;
        for j in i + 1..n {
            let v = inner_product(&states[i], &states[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

fn check_bipartition(dims: &[usize], bip: &Bipartition) -> Result<()> {
    if bip.n_parties() != dims.len() {
        return Err(Error::Shape(format!(
            "bipartition {bip} over {} parties, state has {}",
            bip.n_parties(),
            dims.len()
        )));
    }
    Ok(())
}

/// For each flattened state index, its (row, column) in the regrouped matrix.
fn regroup_map<'a>(dims: &'a [usize], bip: &Bipartition) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
    let total: usize = dims.iter().product();
    let a = bip.block_a().to_vec();
    let b = bip.block_b().to_vec();
    (0..total).map(move |i| {
        let label = unflatten(dims, i);
        let r = a.iter().fold(0, |acc, &p| acc * dims[p] + label[p]);
        let c = b.iter().fold(0, |acc, &p| acc * dims[p] + label[p]);
        (i, r, c)
    })
}

/// Amplitudes as a `(∏_{A} d) × (∏_{B} d)` matrix.
pub fn regroup(state: &StateVector, bip: &Bipartition) -> Result<CMatrix> {
    check_bipartition(&state.dims, bip)?;
    let rows = bip.side_dim(&state.dims, Side::A);
    let cols = bip.side_dim(&state.dims, Side::B);
    let mut m = DMatrix::from_element(rows, cols, ZERO);
    for (i, r, c) in regroup_map(&state.dims, bip) {
        m[(r, c)] = state.amplitudes[i];
    }
    Ok(m)
}

/// Inverse of [`regroup`]: flattened amplitudes from the regrouped matrix.
pub fn unregroup(m: &CMatrix, dims: &[usize], bip: &Bipartition) -> Result<Vec<C64>> {
    check_bipartition(dims, bip)?;
    let shape = (bip.side_dim(dims, Side::A), bip.side_dim(dims, Side::B));
    if m.shape() != shape {
        return Err(Error::Shape(format!("matrix {:?} does not match {shape:?}", m.shape())));
    }
    let mut out = vec![ZERO; dims.iter().product()];
    for (i, r, c) in regroup_map(dims, bip) {
        out[i] = m[(r, c)];
    }
    Ok(out)
}

/// Regrouped matrix with the chosen side on the rows.
///
/// For side B this is the plain transpose, so that an operator `E` acting on
/// side B satisfies `⟨ψ_i|(I⊗E)|ψ_j⟩ = Σ conj(N_i[c,r]) E[c,c'] N_j[c',r]`.
pub fn side_matrix(state: &StateVector, bip: &Bipartition, side: Side) -> Result<CMatrix> {
    let m = regroup(state, bip)?;
    Ok(match side {
        Side::A => m,
        Side::B => m.transpose(),
    })
}

/// Schmidt coefficients of a regrouped state.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtData {
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// `max_i |σ_i − 1/√rank|` over the nonzero values.
    pub max_deviation_from_flat: f64,
}

impl SchmidtData {
    fn from_values(mut values: Vec<f64>, rank_tol: f64) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let rank = values.iter().filter(|&&s| s > rank_tol).count();
        let max_deviation_from_flat = if rank == 0 {
            f64::INFINITY
        } else {
            let flat = 1.0 / (rank as f64).sqrt();
            values[..rank].iter().map(|s| (s - flat).abs()).fold(0.0, f64::max)
        };
        Self { singular_values: values, rank, max_deviation_from_flat }
    }

    /// Flat spectrum at full rank `r`: every value within `tol` of `1/√r`.
    pub fn is_flat_at(&self, r: usize, tol: f64) -> bool {
        let flat = 1.0 / (r as f64).sqrt();
        self.singular_values.len() == r
            && self.singular_values.iter().all(|s| (s - flat).abs() <= tol)
    }
}

pub(crate) fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

/// Singular values of a unit-Frobenius-norm matrix.
pub fn schmidt(m: &CMatrix, tol: &Tolerances) -> Result<SchmidtData> {
    let norm = frobenius(m);
    if (norm - 1.0).abs() > tol.norm {
        return Err(Error::Precondition(format!("Frobenius norm {norm} is not 1")));
    }
    Ok(SchmidtData::from_values(singular_values(m), tol.rank))
}

/// Column-orthonormal basis of a subspace of `C^ambient_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Span of the columns of `spanning`, with a deterministic basis.
    ///
    /// Candidate directions are the projections of the computational basis
    /// vectors onto the span; the basis is built by pivoted Gram–Schmidt on
    /// those, choosing the largest residual each step and breaking ties by
    /// ascending basis index. A span of computational basis vectors therefore
    /// comes back as exactly those vectors, in ascending order.
    pub fn span(spanning: &CMatrix, rank_tol: f64) -> Self {
        let ambient = spanning.nrows();
        let q = orthonormal_range(spanning, rank_tol);
        let r = q.ncols();
        // Coordinates of P·e_b in the basis q: conj of row b.
        let mut coords: Vec<Vec<C64>> =
            (0..ambient).map(|b| (0..r).map(|k| q[(b, k)].conj()).collect()).collect();
        let mut chosen: Vec<Vec<C64>> = Vec::with_capacity(r);
        let mut used = vec![false; ambient];
        for _ in 0..r {
            let norms: Vec<f64> = coords.iter().map(|v| norm2(v)).collect();
            let max = (0..ambient).filter(|&b| !used[b]).map(|b| norms[b]).fold(0.0, f64::max);
            if max <= rank_tol {
                break;
            }
            let pivot = (0..ambient)
                .find(|&b| !used[b] && norms[b] >= max * (1.0 - 1e-9))
                .expect("pivot exists");
            used[pivot] = true;
            let mut v = coords[pivot].clone();
            // second pass against earlier picks
            for c in &chosen {
                let proj = dot(c, &v);
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= y * proj);
            }
            let n = norm2(&v);
            v.iter_mut().for_each(|x| *x /= n);
            for w in coords.iter_mut() {
                let proj = dot(&v, w);
                w.iter_mut().zip(&v).for_each(|(x, y)| *x -= y * proj);
            }
            chosen.push(v);
        }
        let k = chosen.len();
        let mut basis = DMatrix::from_element(ambient, k, ZERO);
        for (j, v) in chosen.iter().enumerate() {
            for i in 0..ambient {
                let x: C64 = (0..r).map(|t| q[(i, t)] * v[t]).sum();
                basis[(i, j)] = snap(x);
            }
        }
        Self { basis }
    }

    /// Subspace spanned by the given computational basis indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut basis = DMatrix::from_element(ambient_dim, idx.len(), ZERO);
        for (j, &i) in idx.iter().enumerate() {
            basis[(i, j)] = Complex64::new(1.0, 0.0);
        }
        Self { basis }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Frobenius norm of the part of `m`'s columns outside this subspace.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let proj = &self.basis * (self.basis.adjoint() * m);
        frobenius(&(m - proj))
    }

    /// Same subspace within `tol` (equal dimension, mutual containment).
    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && self.residual(&other.basis) <= tol
    }

    /// `max |BᴴB − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis;
        let mut err = 0.0f64;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((g[(i, j)] - target).norm());
            }
        }
        err
    }
}

/// Round entries within `1e-14` of `0` or `±1` onto those values so spans of
/// computational basis vectors come out exact.
fn snap(x: C64) -> C64 {
    let clean = |v: f64| {
        if v.abs() < 1e-14 {
            0.0
        } else if (v.abs() - 1.0).abs() < 1e-14 {
            v.signum()
        } else {
            v
        }
    };
    Complex64::new(clean(x.re), clean(x.im))
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`.
fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Left singular vectors with singular value above `tol`.
pub(crate) fn orthonormal_range(m: &CMatrix, tol: f64) -> CMatrix {
    if m.ncols() == 0 {
        return DMatrix::from_element(m.nrows(), 0, ZERO);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Support of the reduced state on one side.
///
/// Side A is the column space of the regrouped matrix `M`; side B is the
/// column space of `Mᴴ`. Both have dimension equal to the Schmidt rank.
pub fn reduced_support(
    state: &StateVector,
    bip: &Bipartition,
    side: Side,
    tol: &Tolerances,
) -> Result<Subspace> {
    let m = regroup(state, bip)?;
    Ok(match side {
        Side::A => Subspace::span(&m, tol.rank),
        Side::B => Subspace::span(&m.adjoint(), tol.rank),
    })
}

//! Orthogonality-preserving local measurements on one side of a cut.
//!
//! A Hermitian `E` on the measured side preserves orthogonality when
//! `⟨ψ_i|(E⊗I)|ψ_j⟩ = 0` for every `i < j`. Each pair gives two real linear
//! equations in the `D²` real parameters of `E`. The parameters are
//! coordinates in the trace-orthonormal basis
//!
//! - `|r⟩⟨r|`,
//! - `(|r⟩⟨s| + |s⟩⟨r|)/√2` and `i(|r⟩⟨s| − |s⟩⟨r|)/√2` for `r < s`,
//!
//! so Euclidean orthonormality of parameter vectors is orthonormality under
//! `Tr(EF)`. Equations only couple the parameters they touch; the system is
//! split into connected components and each component's nullspace is taken
//! from a dense SVD. Parameters that no equation touches are free.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bipartition::{Bipartition, Side};
use crate::constructions::StateSet;
use crate::error::Result;
use crate::tensor::side_matrix;
use crate::tolerance::Tolerances;
use crate::{CMatrix, C64};

/// Real coordinate of a Hermitian operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Diag(usize),
    /// Symmetric real part of the `(r, s)` entry, `r < s`.
    Re(usize, usize),
    /// Antisymmetric imaginary part of the `(r, s)` entry, `r < s`.
    Im(usize, usize),
}

impl Param {
    /// Position in the fixed ordering used for the full parameter vector.
    fn ordinal(self, dim: usize) -> usize {
        match self {
            Param::Diag(r) => r * dim + r,
            Param::Re(r, s) => r * dim + s,
            Param::Im(r, s) => s * dim + r,
        }
    }
}

/// Sparse Hermitian operator on a `dim`-dimensional space, stored as its
/// upper-triangular entries (diagonal included).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOp {
    pub dim: usize,
    pub upper: Vec<(usize, usize, C64)>,
}

impl HermitianOp {
    fn from_params(dim: usize, coeffs: &[(Param, f64)]) -> Self {
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for &(p, v) in coeffs {
            if v == 0.0 {
                continue;
            }
            let (key, val) = match p {
                Param::Diag(r) => ((r, r), Complex64::new(v, 0.0)),
                Param::Re(r, s) => ((r, s), Complex64::new(v * FRAC_1_SQRT_2, 0.0)),
                Param::Im(r, s) => ((r, s), Complex64::new(0.0, v * FRAC_1_SQRT_2)),
            };
            *acc.entry(key).or_default() += val;
        }
        Self { dim, upper: acc.into_iter().map(|((r, s), v)| (r, s, v)).collect() }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, s, v) in &self.upper {
            m[(r, s)] = v;
            if r != s {
                m[(s, r)] = v.conj();
            }
        }
        m
    }

    /// `Tr(self · other)`, real for Hermitian operands.
    pub fn trace_inner(&self, other: &HermitianOp) -> f64 {
        let lookup: HashMap<(usize, usize), C64> = other.upper.iter().map(|&(r, s, v)| ((r, s), v)).collect();
        self.upper
            .iter()
            .filter_map(|&(r, s, v)| {
                lookup.get(&(r, s)).map(|w| {
                    let t = v.conj() * w;
                    if r == s {
                        t.re
                    } else {
                        2.0 * t.re
                    }
                })
            })
            .sum()
    }
}

/// A projector `P = Σ_{b∈S} |b⟩⟨b|` on grouped computational basis vectors
/// such that both `P` and `I − P` preserve orthogonality and each outcome
/// rules out at least one state.
#[derive(Clone, Debug, PartialEq)]
pub struct Eliminator {
    pub dim: usize,
    /// Grouped basis indices `S`, ascending.
    pub support: Vec<usize>,
    /// States annihilated by `P ⊗ I`.
    pub eliminated_by_projector: Vec<usize>,
    /// States annihilated by `(I − P) ⊗ I`.
    pub eliminated_by_complement: Vec<usize>,
}

impl Eliminator {
    pub fn projector(&self) -> CMatrix {
        let mut p = DMatrix::zeros(self.dim, self.dim);
        for &b in &self.support {
            p[(b, b)] = Complex64::new(1.0, 0.0);
        }
        p
    }
}

/// Orthogonality-preserving measurement analysis of one side of a cut.
#[derive(Clone, Debug, PartialEq)]
pub struct OpmReport {
    pub bipartition: Bipartition,
    pub measured_side: Side,
    /// Grouped dimension `D` of the measured side.
    pub side_dim: usize,
    /// Real dimension of the space of orthogonality-preserving Hermitian
    /// operators.
    pub space_dim: usize,
    /// Trace-orthonormal basis of that space.
    pub hermitian_basis: Vec<HermitianOp>,
    pub trivial: bool,
    pub eliminator: Option<Eliminator>,
}

impl OpmReport {
    /// Norm of the component of `op` outside the solution space, measured
    /// in the trace norm.
    pub fn outside_norm(&self, op: &HermitianOp) -> f64 {
        let mut residual: BTreeMap<(usize, usize), C64> = op.upper.iter().map(|&(r, s, v)| ((r, s), v)).collect();
        for b in &self.hermitian_basis {
            let c = b.trace_inner(op);
            if c != 0.0 {
                for &(r, s, v) in &b.upper {
                    *residual.entry((r, s)).or_default() -= v * c;
                }
            }
        }
        let rest = HermitianOp { dim: op.dim, upper: residual.into_iter().map(|((r, s), v)| (r, s, v)).collect() };
        rest.trace_inner(&rest).max(0.0).sqrt()
    }

    pub fn identity(&self) -> HermitianOp {
        HermitianOp {
            dim: self.side_dim,
            upper: (0..self.side_dim).map(|r| (r, r, Complex64::new(1.0, 0.0))).collect(),
        }
    }
}

/// Nonzero rows of each state's side matrix, keyed by the other side's
/// column: `col -> [(row, amplitude)]`.
type SparseColumns = BTreeMap<usize, Vec<(usize, C64)>>;

fn sparse_columns(set: &StateSet, bip: &Bipartition, side: Side) -> Result<Vec<SparseColumns>> {
    set.states()
        .iter()
        .map(|s| {
            let n = side_matrix(s, bip, side)?;
            let mut cols = SparseColumns::new();
            for c in 0..n.ncols() {
                for r in 0..n.nrows() {
                    let v = n[(r, c)];
                    if v.re != 0.0 || v.im != 0.0 {
                        cols.entry(c).or_default().push((r, v));
                    }
                }
            }
            Ok(cols)
        })
        .collect()
}

/// Coefficients `w[(r, s)] = Σ_c conj(N_i[r,c]) N_j[s,c]` of `⟨ψ_i|(E⊗I)|ψ_j⟩`
/// in the entries `E[r,s]`.
fn pair_coefficients(ci: &SparseColumns, cj: &SparseColumns) -> BTreeMap<(usize, usize), C64> {
    let mut w: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for (c, rows_i) in ci {
        if let Some(rows_j) = cj.get(c) {
            for &(r, a) in rows_i {
                for &(s, b) in rows_j {
                    *w.entry((r, s)).or_default() += a.conj() * b;
                }
            }
        }
    }
    w
}

/// The same functional in the real parameters.
fn param_coefficients(w: &BTreeMap<(usize, usize), C64>) -> BTreeMap<Param, C64> {
    let mut out: BTreeMap<Param, C64> = BTreeMap::new();
    let i = Complex64::new(0.0, 1.0);
    for (&(r, s), &v) in w {
        if r == s {
            *out.entry(Param::Diag(r)).or_default() += v;
        } else if r < s {
            // E[r,s] = (x + i y)/√2
            *out.entry(Param::Re(r, s)).or_default() += v * FRAC_1_SQRT_2;
            *out.entry(Param::Im(r, s)).or_default() += v * i * FRAC_1_SQRT_2;
        } else {
            // E[r,s] with r > s is conj(E[s,r]) = (x − i y)/√2
            *out.entry(Param::Re(s, r)).or_default() += v * FRAC_1_SQRT_2;
            *out.entry(Param::Im(s, r)).or_default() -= v * i * FRAC_1_SQRT_2;
        }
    }
    out.retain(|_, v| v.re != 0.0 || v.im != 0.0);
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root for a stable component order
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn all_params(dim: usize) -> Vec<Param> {
    let mut params = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for s in 0..dim {
            params.push(match r.cmp(&s) {
                std::cmp::Ordering::Equal => Param::Diag(r),
                std::cmp::Ordering::Less => Param::Re(r, s),
                std::cmp::Ordering::Greater => Param::Im(s, r),
            });
        }
    }
    params
}

/// Solution space of the orthogonality-preserving constraints on `side`.
///
/// The returned report carries no eliminator; see [`find_eliminator`].
pub fn opm_solution_space(set: &StateSet, bip: &Bipartition, side: Side, tol: &Tolerances) -> Result<OpmReport> {
    let dim = bip.side_dim(set.dims(), side);
    let cols = sparse_columns(set, bip, side)?;
    let n = cols.len();

    let mut constraints: Vec<BTreeMap<Param, C64>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let coeffs = param_coefficients(&pair_coefficients(&cols[i], &cols[j]));
            if !coeffs.is_empty() {
                constraints.push(coeffs);
            }
        }
    }

    let params = all_params(dim);
    let mut uf = UnionFind::new(dim * dim);
    let mut touched = vec![false; dim * dim];
    for c in &constraints {
        let mut it = c.keys().map(|p| p.ordinal(dim));
        if let Some(first) = it.next() {
            touched[first] = true;
            for o in it {
                touched[o] = true;
                uf.union(first, o);
            }
        }
    }

    // component root -> (params, constraint indices)
    let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (o, _) in touched.iter().enumerate().filter(|(_, &t)| t) {
        let root = uf.find(o);
        components.entry(root).or_default().0.push(o);
    }
    for (k, c) in constraints.iter().enumerate() {
        let first = c.keys().next().expect("nonempty").ordinal(dim);
        let root = uf.find(first);
        components.get_mut(&root).expect("component exists").1.push(k);
    }

    let mut basis = Vec::new();
    for (ordinals, rows) in components.values() {
        let local: HashMap<usize, usize> = ordinals.iter().enumerate().map(|(k, &o)| (o, k)).collect();
        let ncols = ordinals.len();
        let nrows = (2 * rows.len()).max(ncols);
        let mut a = DMatrix::<f64>::zeros(nrows, ncols);
        for (k, &ci) in rows.iter().enumerate() {
            for (p, v) in &constraints[ci] {
                let col = local[&p.ordinal(dim)];
                a[(2 * k, col)] = v.re;
                a[(2 * k + 1, col)] = v.im;
            }
        }
        for v in nullspace(a, tol.nullspace) {
            let coeffs: Vec<(Param, f64)> = ordinals.iter().zip(&v).map(|(&o, &x)| (params[o], x)).collect();
            basis.push(HermitianOp::from_params(dim, &coeffs));
        }
    }
    for (o, p) in params.iter().enumerate() {
        if !touched[o] {
            basis.push(HermitianOp::from_params(dim, &[(*p, 1.0)]));
        }
    }

    let space_dim = basis.len();
    Ok(OpmReport {
        bipartition: bip.clone(),
        measured_side: side,
        side_dim: dim,
        space_dim,
        hermitian_basis: basis,
        trivial: space_dim == 1,
        eliminator: None,
    })
}

/// Orthonormal nullspace vectors of a real matrix with at least as many
/// rows as columns.
fn nullspace(a: DMatrix<f64>, threshold: f64) -> Vec<Vec<f64>> {
    let ncols = a.ncols();
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested Vᴴ");
    (0..ncols)
        .filter(|&k| svd.singular_values[k] <= threshold)
        .map(|k| {
            let mut v: Vec<f64> = vt.row(k).iter().copied().collect();
            // sign convention: first entry of largest magnitude is positive
            let lead = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v.iter_mut().for_each(|x| {
                if x.abs() < 1e-15 {
                    *x = 0.0
                }
            });
            v
        })
        .collect()
}

/// Maximum number of class unions tried before giving up.
const ELIMINATOR_SEARCH_LIMIT: usize = 1 << 16;

/// Search for a class projector that splits the set while preserving
/// orthogonality.
///
/// Grouped basis vectors are grouped into classes by the exact set of
/// states having weight on them. Candidate projectors are unions of classes,
/// tried by increasing number of classes and then lexicographically in class
/// order (classes ordered by their smallest basis index). `None` means no
/// class projector was found, not that the set is locally irreducible.
pub fn find_eliminator(set: &StateSet, bip: &Bipartition, side: Side, tol: &Tolerances) -> Result<Option<Eliminator>> {
    let dim = bip.side_dim(set.dims(), side);
    let n = set.len();
    let mats: Vec<CMatrix> = set.states().iter().map(|s| side_matrix(s, bip, side)).collect::<Result<_>>()?;

    let row_weight = |m: &CMatrix, b: usize| m.row(b).iter().map(|x| x.norm_sqr()).sum::<f64>();
    let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (pattern, basis indices)
    for b in 0..dim {
        let pattern: Vec<usize> = (0..n).filter(|&i| row_weight(&mats[i], b).sqrt() > tol.rank).collect();
        if pattern.is_empty() {
            continue;
        }
        match classes.iter_mut().find(|(p, _)| *p == pattern) {
            Some((_, members)) => members.push(b),
            None => classes.push((pattern, vec![b])),
        }
    }
    let c = classes.len();
    if c < 2 {
        return Ok(None);
    }

    // Per-class contribution to ⟨ψ_i|(P⊗I)|ψ_j⟩.
    let blocks: Vec<CMatrix> = classes
        .iter()
        .map(|(_, rows)| {
            DMatrix::from_fn(n, n, |i, j| {
                rows.iter()
                    .map(|&b| mats[i].row(b).iter().zip(mats[j].row(b).iter()).map(|(x, y)| x.conj() * y).sum::<C64>())
                    .sum()
            })
        })
        .collect();

    let kill = tol.nullspace * tol.nullspace;
    let mut tried = 0usize;
    for size in 1..c {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            tried += 1;
            if tried > ELIMINATOR_SEARCH_LIMIT {
                return Ok(None);
            }
            let mut acc = DMatrix::<C64>::zeros(n, n);
            for &k in &combo {
                acc += &blocks[k];
            }
            let preserves = (0..n).all(|i| (i + 1..n).all(|j| acc[(i, j)].norm() <= tol.nullspace));
            if preserves {
                let by_p: Vec<usize> = (0..n).filter(|&i| acc[(i, i)].re <= kill).collect();
                let outside = |i: usize| -> f64 {
                    (0..c).filter(|k| !combo.contains(k)).map(|k| blocks[k][(i, i)].re).sum()
                };
                let by_complement: Vec<usize> = (0..n).filter(|&i| outside(i) <= kill).collect();
                if !by_p.is_empty() && !by_complement.is_empty() {
                    let mut support: Vec<usize> = combo.iter().flat_map(|&k| classes[k].1.iter().copied()).collect();
                    support.sort_unstable();
                    return Ok(Some(Eliminator {
                        dim,
                        support,
                        eliminated_by_projector: by_p,
                        eliminated_by_complement: by_complement,
                    }));
                }
            }
            if !next_combination(&mut combo, c) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advance to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ghz_subset_3qubit, SetParams};
    use crate::tensor::{superpose, Term};

    fn bell_triple() -> StateSet {
        let one = Complex64::new(1.0, 0.0);
        let members = vec![
            ("b1".to_string(), vec![Term::new(one, [0, 0]), Term::new(one, [1, 1])]),
            ("b2".to_string(), vec![Term::new(one, [0, 0]), Term::new(-one, [1, 1])]),
            ("b3".to_string(), vec![Term::new(one, [0, 1]), Term::new(one, [1, 0])]),
        ];
        StateSet::from_terms("bell3", &[2, 2], members, SetParams::default()).unwrap()
    }

    #[test]
    fn bell_triple_is_trivial_on_both_sides() {
        let set = bell_triple();
        let bip = Bipartition::new(2, &[0], &[1]).unwrap();
        let tol = Tolerances::default();
        for side in [Side::A, Side::B] {
            let r = opm_solution_space(&set, &bip, side, &tol).unwrap();
            assert_eq!(r.space_dim, 1, "side {side}");
            assert!(r.trivial);
            assert!(r.outside_norm(&r.identity()) < 1e-9);
            assert_eq!(find_eliminator(&set, &bip, side, &tol).unwrap(), None);
        }
    }

    #[test]
    fn single_state_is_unconstrained() {
        let s = superpose(&[Term::ket([0, 0, 0]), Term::ket([1, 1, 1])], &[2, 2, 2]).unwrap();
        let set = StateSet::from_states("one", vec![s], SetParams::default()).unwrap();
        let bip = Bipartition::from_block(3, &[0, 1]).unwrap();
        let r = opm_solution_space(&set, &bip, Side::A, &Tolerances::default()).unwrap();
        assert_eq!(r.space_dim, 16);
    }

    #[test]
    fn ghz_subset_ab_side_contains_class_projector() {
        let set = ghz_subset_3qubit();
        let bip = Bipartition::from_block(3, &[0, 1]).unwrap();
        let tol = Tolerances::default();
        let r = opm_solution_space(&set, &bip, Side::A, &tol).unwrap();
        assert!(r.space_dim >= 2 && !r.trivial);
        let p = HermitianOp {
            dim: 4,
            upper: vec![(0, 0, Complex64::new(1.0, 0.0)), (3, 3, Complex64::new(1.0, 0.0))],
        };
        assert!(r.outside_norm(&p) < 1e-9);

        let e = find_eliminator(&set, &bip, Side::A, &tol).unwrap().expect("eliminator");
        assert_eq!(e.support, vec![0, 3]);
        assert_eq!(e.eliminated_by_projector, vec![2, 4]);
        assert_eq!(e.eliminated_by_complement, vec![0, 1, 3]);
    }

    #[test]
    fn basis_is_trace_orthonormal() {
        let set = ghz_subset_3qubit();
        let bip = Bipartition::from_block(3, &[0, 1]).unwrap();
        let r = opm_solution_space(&set, &bip, Side::A, &Tolerances::default()).unwrap();
        for (i, a) in r.hermitian_basis.iter().enumerate() {
            for (j, b) in r.hermitian_basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.trace_inner(b) - want).abs() < 1e-10);
            }
            let dense = a.to_dense();
            assert!((&dense - dense.adjoint()).iter().all(|x| x.norm() < 1e-15));
        }
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}

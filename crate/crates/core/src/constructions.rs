//! Generators for the GHZ-subset and maximally-entangled state families.
//!
//! Every generator keeps the unnormalized terms it was built from alongside
//! the normalized vectors, so a set can be written back out in the same
//! notation it was defined in.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{gram, superpose, StateVector, Term};
use crate::tolerance::Tolerances;
use crate::{CMatrix, C64};

/// Construction parameters recorded with a set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetParams {
    pub family: Option<String>,
    /// Number of qubits for the GHZ-subset family.
    pub n: Option<usize>,
    /// Local dimension.
    pub d: Option<usize>,
    /// Number of parties for the k-partite family.
    pub k: Option<usize>,
}

impl SetParams {
    fn family(name: &str) -> Self {
        Self { family: Some(name.to_string()), ..Self::default() }
    }
}

/// A labeled family of states over shared party dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSet {
    pub label: String,
    dims: Vec<usize>,
    states: Vec<StateVector>,
    terms: Vec<Vec<Term>>,
    pub params: SetParams,
}

impl StateSet {
    /// Build a set from unnormalized terms, one `(label, terms)` per state.
    pub fn from_terms(
        label: impl Into<String>,
        dims: &[usize],
        members: Vec<(String, Vec<Term>)>,
        params: SetParams,
    ) -> Result<Self> {
        let mut states = Vec::with_capacity(members.len());
        let mut terms = Vec::with_capacity(members.len());
        for (name, t) in members {
            states.push(superpose(&t, dims)?.with_label(name));
            terms.push(t);
        }
        Ok(Self { label: label.into(), dims: dims.to_vec(), states, terms, params })
    }

    /// Build a set from already-normalized vectors.
    pub fn from_states(label: impl Into<String>, states: Vec<StateVector>, params: SetParams) -> Result<Self> {
        let dims = states
            .first()
            .ok_or_else(|| Error::Degenerate("empty state set".into()))?
            .dims()
            .to_vec();
        if let Some(s) = states.iter().find(|s| s.dims() != dims.as_slice()) {
            return Err(Error::Shape(format!("state {:?} has dims {:?}, set has {dims:?}", s.label, s.dims())));
        }
        let terms = states.iter().map(StateVector::nonzero_terms).collect();
        Ok(Self { label: label.into(), dims, states, terms, params })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// The unnormalized terms each state was built from.
    pub fn terms(&self) -> &[Vec<Term>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn gram(&self) -> Result<CMatrix> {
        gram(&self.states)
    }

    /// First Gram entry (row-major, upper triangle) off the identity by more
    /// than the orthogonality tolerance.
    pub fn check_orthonormal(&self, tol: &Tolerances) -> Result<()> {
        let g = self.gram()?;
        for i in 0..g.nrows() {
            for j in i..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                let deviation = (g[(i, j)] - Complex64::new(target, 0.0)).norm();
                if deviation > tol.orthogonality {
                    return Err(Error::NotOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(())
    }

    /// Copy of the set with every state multiplied by its own global phase.
    pub fn with_phases(&self, thetas: &[f64]) -> Self {
        let mut out = self.clone();
        for (k, theta) in thetas.iter().enumerate().take(self.len()) {
            out.states[k] = self.states[k].with_global_phase(*theta);
            let phase = Complex64::from_polar(1.0, *theta);
            out.terms[k].iter_mut().for_each(|t| t.coeff *= phase);
        }
        out
    }
}

/// Powers of the primitive `d`-th root of unity `ω = e^{2πi/d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseRoot {
    d: usize,
}

impl PhaseRoot {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "modulus must be positive");
        Self { d }
    }

    pub fn modulus(&self) -> usize {
        self.d
    }

    /// `ω^{j·l}`, with the exponent reduced mod `d` before taking the angle.
    pub fn value(&self, j: usize, l: usize) -> C64 {
        let e = ((j % self.d) * (l % self.d)) % self.d;
        if e == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let angle = 2.0 * PI * e as f64 / self.d as f64;
        Complex64::new(angle.cos(), angle.sin())
    }
}

fn bits(n: usize, value: usize) -> Vec<usize> {
    (0..n).rev().map(|i| (value >> i) & 1).collect()
}

fn complement(bits: &[usize]) -> Vec<usize> {
    bits.iter().map(|b| (b + 1) % 2).collect()
}

/// The five three-qubit GHZ-basis states `|000⟩ ± |111⟩`, `|011⟩ + |100⟩`,
/// `|001⟩ + |110⟩`, `|010⟩ + |101⟩`, in that order.
pub fn ghz_subset_3qubit() -> StateSet {
    let one = Complex64::new(1.0, 0.0);
    let pair = |a: [usize; 3], b: [usize; 3], sign: f64| vec![Term::new(one, a), Term::new(one * sign, b)];
    let members = vec![
        ("phi1".to_string(), pair([0, 0, 0], [1, 1, 1], 1.0)),
        ("phi2".to_string(), pair([0, 0, 0], [1, 1, 1], -1.0)),
        ("phi3".to_string(), pair([0, 1, 1], [1, 0, 0], 1.0)),
        ("phi4".to_string(), pair([0, 0, 1], [1, 1, 0], 1.0)),
        ("phi5".to_string(), pair([0, 1, 0], [1, 0, 1], 1.0)),
    ];
    StateSet::from_terms("ghz_subset_3qubit", &[2, 2, 2], members, SetParams::family("eq1"))
        .expect("fixed construction is valid")
}

/// `2^{N-1}+1` N-qubit GHZ-basis states.
///
/// Position 0 holds `|0…0⟩ − |1…1⟩`. For every `(a₂,…,a_N)` the state
/// `|0 a₂…a_N⟩ + |1 ā₂…ā_N⟩` sits at position `1 + Σ a_i 2^{N-i}` (the
/// first bit is the most significant), so the labels `phi1…` follow the
/// one-based index `2 + Σ a_i 2^{N-i}`.
pub fn ghz_subset_nqubit(n: usize) -> Result<StateSet> {
    if n < 3 {
        return Err(Error::Parameter(format!("N-qubit GHZ subset requires N >= 3, got {n}")));
    }
    if n > 20 {
        return Err(Error::Parameter(format!("N = {n} is too large for dense state vectors")));
    }
    let one = Complex64::new(1.0, 0.0);
    let zeros = vec![0; n];
    let ones = vec![1; n];
    let mut members = vec![("phi1".to_string(), vec![Term::new(one, zeros), Term::new(-one, ones)])];
    for idx in 0..1usize << (n - 1) {
        let mut a = vec![0];
        a.extend(bits(n - 1, idx));
        let abar = complement(&a);
        members.push((format!("phi{}", idx + 2), vec![Term::new(one, a), Term::new(one, abar)]));
    }
    let params = SetParams { n: Some(n), ..SetParams::family("eq3") };
    StateSet::from_terms(format!("ghz_subset_n{n}"), &vec![2; n], members, params)
}

/// The six `3⊗3⊗3` maximally entangled states, written out term by term.
pub fn mes_set_3x3x3() -> StateSet {
    let w = PhaseRoot::new(3);
    let one = Complex64::new(1.0, 0.0);
    let t = |c: C64, l: [usize; 3]| Term::new(c, l);
    let members = vec![
        vec![t(one, [0, 0, 0]), t(one, [1, 1, 1]), t(one, [2, 2, 2])],
        vec![t(one, [0, 0, 0]), t(w.value(1, 1), [1, 1, 1]), t(w.value(1, 2), [2, 2, 2])],
        vec![t(one, [0, 0, 0]), t(w.value(1, 2), [1, 1, 1]), t(w.value(1, 1), [2, 2, 2])],
        vec![t(one, [1, 0, 0]), t(one, [2, 1, 1]), t(one, [0, 2, 2])],
        vec![t(one, [0, 1, 0]), t(one, [1, 2, 1]), t(one, [2, 0, 2])],
        vec![t(one, [0, 0, 1]), t(one, [1, 1, 2]), t(one, [2, 2, 0])],
    ];
    let members = members.into_iter().enumerate().map(|(i, m)| (format!("psi{}", i + 1), m)).collect();
    let params = SetParams { d: Some(3), ..SetParams::family("lemma1") };
    StateSet::from_terms("mes_3x3x3", &[3, 3, 3], members, params).expect("fixed construction is valid")
}

/// Shift pattern of the `k`-party constructions: `None` leaves every party
/// at level `l`; `Some(p)` moves party `p` to `l ⊕_d 1`.
fn pattern_label(k: usize, d: usize, shift: Option<usize>, l: usize) -> Vec<usize> {
    (0..k).map(|p| if Some(p) == shift { (l + 1) % d } else { l }).collect()
}

fn phase_family(k: usize, d: usize, shift: Option<usize>, j: usize) -> Vec<Term> {
    let w = PhaseRoot::new(d);
    (0..d).map(|l| Term::new(w.value(j, l), pattern_label(k, d, shift, l))).collect()
}

/// `d+3` maximally entangled states on `d⊗d⊗d`.
///
/// The first `d` are `Σ_l ω^{jl}|lll⟩`; the last three shift one party
/// (first, second, third) to `l ⊕_d 1`.
pub fn mes_set_tripartite(d: usize) -> Result<StateSet> {
    if d < 3 {
        return Err(Error::Parameter(format!("d⊗d⊗d family requires d >= 3, got {d}")));
    }
    let mut members: Vec<(String, Vec<Term>)> =
        (0..d).map(|j| (format!("psi{}", j + 1), phase_family(3, d, None, j))).collect();
    for p in 0..3 {
        members.push((format!("psi{}", d + p + 1), phase_family(3, d, Some(p), 0)));
    }
    let label = if d == 3 { "mes_3x3x3".to_string() } else { format!("mes_tripartite_d{d}") };
    let family = if d == 3 { "lemma1" } else { "thm3" };
    let params = SetParams { d: Some(d), ..SetParams::family(family) };
    StateSet::from_terms(label, &[d; 3], members, params)
}

/// `(k+1)d` maximally entangled states on `k` parties of dimension `d`.
///
/// Ordered pattern-major: the unshifted phase family first, then the family
/// with party 1 shifted, …, party `k` shifted; within a pattern, phase
/// index `j = 0…d-1`.
pub fn mes_set_kpartite(k: usize, d: usize) -> Result<StateSet> {
    if k < 4 {
        return Err(Error::Parameter(format!("k-partite family requires k >= 4, got {k}")));
    }
    if d < 3 {
        return Err(Error::Parameter(format!("k-partite family requires d >= 3, got {d}")));
    }
    if (d as f64).powi(k as i32) > 1e7 {
        return Err(Error::Parameter(format!("d^k = {d}^{k} is too large for dense state vectors")));
    }
    let shifts = std::iter::once(None).chain((0..k).map(Some));
    let mut members = Vec::with_capacity((k + 1) * d);
    for shift in shifts {
        for j in 0..d {
            let tag = match shift {
                None => format!("s0_j{j}"),
                Some(p) => format!("s{}_j{j}", p + 1),
            };
            members.push((tag, phase_family(k, d, shift, j)));
        }
    }
    let params = SetParams { k: Some(k), d: Some(d), ..SetParams::family("thm4") };
    StateSet::from_terms(format!("mes_k{k}_d{d}"), &vec![d; k], members, params)
}

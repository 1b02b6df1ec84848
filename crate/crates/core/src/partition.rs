//! Bipartitions and the effective `d'⊗d'` systems a sub-family of states
//! lives in across a cut.

use nalgebra::DMatrix;

use crate::bipartition::{Bipartition, Side};
use crate::error::{Error, Result};
use crate::tensor::{frobenius, regroup, schmidt, SchmidtData, StateVector, Subspace};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// All canonical bipartitions of `n` parties (party 0 on side A), sorted by
/// the size of block A and then lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 3 {
        return Err(Error::Parameter(format!("bipartition analysis needs n >= 3 parties, got {n}")));
    }
    if n > 24 {
        return Err(Error::Parameter(format!("{n} parties is too many to enumerate")));
    }
    let mut blocks: Vec<Vec<usize>> = (0..1usize << (n - 1))
        .map(|mask| {
            // bit i of mask selects party i+1
            std::iter::once(0).chain((1..n).filter(|p| mask >> (p - 1) & 1 == 1)).collect::<Vec<_>>()
        })
        .filter(|b| b.len() < n)
        .collect();
    blocks.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    blocks.into_iter().map(|b| Bipartition::from_block(n, &b)).collect()
}

/// Pair of subspaces spanned by the reduced supports of a state subset.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveFrame {
    pub bipartition: Bipartition,
    pub subspace_a: Subspace,
    pub subspace_b: Subspace,
}

impl EffectiveFrame {
    /// Frame spanned by precomputed per-state supports.
    pub fn from_supports<'a>(
        bipartition: &Bipartition,
        supports_a: impl IntoIterator<Item = &'a Subspace>,
        supports_b: impl IntoIterator<Item = &'a Subspace>,
        tol: &Tolerances,
    ) -> Result<Self> {
        Ok(Self {
            bipartition: bipartition.clone(),
            subspace_a: union(supports_a, tol)?,
            subspace_b: union(supports_b, tol)?,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.subspace_a.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.subspace_b.dim()
    }

    pub fn subspace(&self, side: Side) -> &Subspace {
        match side {
            Side::A => &self.subspace_a,
            Side::B => &self.subspace_b,
        }
    }

    pub fn is_square(&self) -> bool {
        self.dim_a() == self.dim_b()
    }

    /// Whether both subspaces of `other` lie inside this frame.
    pub fn contains(&self, a: &Subspace, b: &Subspace, tol: &Tolerances) -> bool {
        self.subspace_a.residual(a.basis()) <= tol.out_of_frame
            && self.subspace_b.residual(b.basis()) <= tol.out_of_frame
    }
}

fn union<'a>(parts: impl IntoIterator<Item = &'a Subspace>, tol: &Tolerances) -> Result<Subspace> {
    let parts: Vec<&Subspace> = parts.into_iter().collect();
    let ambient = parts
        .first()
        .ok_or_else(|| Error::Degenerate("frame of an empty state subset".into()))?
        .ambient_dim();
    let cols: usize = parts.iter().map(|s| s.dim()).sum();
    let mut stacked = DMatrix::zeros(ambient, cols);
    let mut offset = 0;
    for s in parts {
        stacked.columns_mut(offset, s.dim()).copy_from(s.basis());
        offset += s.dim();
    }
    Ok(Subspace::span(&stacked, tol.rank))
}

/// Frame of a nonempty state subset across `bipartition`.
///
/// Side A spans the column spaces of the regrouped matrices, side B the
/// column spaces of their conjugate transposes.
pub fn effective_frame<'a>(
    states: impl IntoIterator<Item = &'a StateVector>,
    bipartition: &Bipartition,
    tol: &Tolerances,
) -> Result<EffectiveFrame> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for s in states {
        let m = regroup(s, bipartition)?;
        a.push(Subspace::span(&m, tol.rank));
        b.push(Subspace::span(&m.adjoint(), tol.rank));
    }
    EffectiveFrame::from_supports(bipartition, &a, &b, tol)
}

/// Coordinates `B_aᴴ · M · B_b` of a state's regrouped matrix in the frame.
pub fn restrict(state: &StateVector, frame: &EffectiveFrame, tol: &Tolerances) -> Result<CMatrix> {
    let m = regroup(state, &frame.bipartition)?;
    restrict_matrix(&m, frame, tol)
}

pub(crate) fn restrict_matrix(m: &CMatrix, frame: &EffectiveFrame, tol: &Tolerances) -> Result<CMatrix> {
    let ba = frame.subspace_a.basis();
    let bb = frame.subspace_b.basis();
    let coords = ba.adjoint() * m * bb;
    let back = ba * &coords * bb.adjoint();
    let residual = frobenius(&(m - back));
    if residual > tol.out_of_frame {
        return Err(Error::Support { residual });
    }
    Ok(coords)
}

/// Whether the state is maximally entangled inside the frame: the frame is
/// `r×r` and every singular value of the restricted matrix is `1/√r`.
pub fn is_mes_in_frame(
    state: &StateVector,
    frame: &EffectiveFrame,
    tol: &Tolerances,
) -> Result<(bool, SchmidtData)> {
    let coords = restrict(state, frame, tol)?;
    mes_verdict(&coords, frame, tol)
}

pub(crate) fn mes_verdict(
    coords: &CMatrix,
    frame: &EffectiveFrame,
    tol: &Tolerances,
) -> Result<(bool, SchmidtData)> {
    let data = schmidt(coords, tol)?;
    let r = frame.dim_a();
    let ok = frame.is_square() && r > 0 && data.rank == r && data.is_flat_at(r, tol.flat_spectrum);
    Ok((ok, data))
}

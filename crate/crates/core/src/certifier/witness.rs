use crate::bipartition::Bipartition;
use crate::constructions::StateSet;
use crate::error::{Error, Result};
use crate::partition::{effective_frame, is_mes_in_frame, mes_verdict, restrict_matrix, EffectiveFrame};
use crate::tensor::{regroup, SchmidtData, Subspace};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// A sub-family of states that are all maximally entangled on one common
/// `r×r` effective frame across a cut, with at least `r + 1` members.
#[derive(Clone, Debug, PartialEq)]
pub struct MesWitness {
    pub bipartition: Bipartition,
    /// Indices into the set, ascending.
    pub member_indices: Vec<usize>,
    pub frame: EffectiveFrame,
    pub effective_dim: usize,
    /// Schmidt data of each member restricted to the frame, in member order.
    pub schmidt: Vec<SchmidtData>,
}

/// Rebuild the frame of `members` from scratch and check every witness
/// condition. `Ok(None)` when the subset is not a witness.
pub fn validate_witness(
    set: &StateSet,
    bip: &Bipartition,
    members: &[usize],
    tol: &Tolerances,
) -> Result<Option<MesWitness>> {
    check_indices(set, members)?;
    let mut members = members.to_vec();
    members.sort_unstable();
    let frame = effective_frame(members.iter().map(|&i| &set.states()[i]), bip, tol)?;
    let r = frame.dim_a();
    if !frame.is_square() || members.len() < r + 1 {
        return Ok(None);
    }
    let mut schmidt = Vec::with_capacity(members.len());
    for &i in &members {
        match is_mes_in_frame(&set.states()[i], &frame, tol) {
            Ok((true, data)) => schmidt.push(data),
            Ok((false, _)) | Err(Error::Support { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(MesWitness { bipartition: bip.clone(), member_indices: members, frame, effective_dim: r, schmidt }))
}

fn check_indices(set: &StateSet, members: &[usize]) -> Result<()> {
    if members.is_empty() {
        return Err(Error::Parameter("witness hint is empty".into()));
    }
    if let Some(i) = members.iter().find(|&&i| i >= set.len()) {
        return Err(Error::Parameter(format!("hint index {i} out of range for {} states", set.len())));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parameter(format!("hint {members:?} repeats an index")));
    }
    Ok(())
}

/// Per-cut data shared by the witness search and the diagnostics.
pub(crate) struct CutData {
    pub mats: Vec<CMatrix>,
    pub support_a: Vec<Subspace>,
    pub support_b: Vec<Subspace>,
}

impl CutData {
    pub fn new(set: &StateSet, bip: &Bipartition, tol: &Tolerances) -> Result<Self> {
        let mats: Vec<CMatrix> = set.states().iter().map(|s| regroup(s, bip)).collect::<Result<_>>()?;
        let support_a = mats.iter().map(|m| Subspace::span(m, tol.rank)).collect();
        let support_b = mats.iter().map(|m| Subspace::span(&m.adjoint(), tol.rank)).collect();
        Ok(Self { mats, support_a, support_b })
    }

    /// State indices grouped by identical support pair, in order of first
    /// member.
    pub fn support_groups(&self, tol: &Tolerances) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.mats.len() {
            let same = |g: &Vec<usize>| {
                let k = g[0];
                self.support_a[k].same_as(&self.support_a[i], tol.out_of_frame)
                    && self.support_b[k].same_as(&self.support_b[i], tol.out_of_frame)
            };
            match groups.iter_mut().find(|g| same(g)) {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        groups
    }
}

/// Summary of one support group tried by the search.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSummary {
    pub members: Vec<usize>,
    pub dim_a: usize,
    pub dim_b: usize,
    /// Members that are maximally entangled in the group's frame.
    pub mes_members: usize,
}

pub(crate) struct SearchOutcome {
    pub witness: Option<MesWitness>,
    pub candidates: Vec<CandidateSummary>,
}

/// Greedy witness search over support groups.
///
/// For each group (in order of first member) the frame of the group is
/// formed and every other state whose supports fit inside is added. The
/// first candidate with a square `r×r` frame whose group members are all
/// maximally entangled there, and with at least `r + 1` such members, is
/// trimmed to its first `r + 1` members and revalidated from scratch.
pub(crate) fn search(set: &StateSet, bip: &Bipartition, data: &CutData, tol: &Tolerances) -> Result<SearchOutcome> {
    let mut candidates = Vec::new();
    for group in data.support_groups(tol) {
        let frame = EffectiveFrame::from_supports(
            bip,
            group.iter().map(|&i| &data.support_a[i]),
            group.iter().map(|&i| &data.support_b[i]),
            tol,
        )?;
        let mut members = group.clone();
        for i in 0..set.len() {
            if !group.contains(&i) && frame.contains(&data.support_a[i], &data.support_b[i], tol) {
                members.push(i);
            }
        }
        members.sort_unstable();

        let mut mes = Vec::new();
        let mut group_ok = true;
        for &i in &members {
            let ok = match restrict_matrix(&data.mats[i], &frame, tol) {
                Ok(coords) => mes_verdict(&coords, &frame, tol)?.0,
                Err(Error::Support { .. }) => false,
                Err(e) => return Err(e),
            };
            if ok {
                mes.push(i);
            } else if group.contains(&i) {
                group_ok = false;
            }
        }
        candidates.push(CandidateSummary {
            members: members.clone(),
            dim_a: frame.dim_a(),
            dim_b: frame.dim_b(),
            mes_members: mes.len(),
        });

        let r = frame.dim_a();
        if !group_ok || !frame.is_square() || mes.len() < r + 1 {
            continue;
        }
        let trimmed = &mes[..r + 1];
        if let Some(w) = validate_witness(set, bip, trimmed, tol)? {
            return Ok(SearchOutcome { witness: Some(w), candidates });
        }
        if let Some(w) = validate_witness(set, bip, &mes, tol)? {
            return Ok(SearchOutcome { witness: Some(w), candidates });
        }
    }
    Ok(SearchOutcome { witness: None, candidates })
}

/// Find an embedded maximally-entangled witness for the cut.
///
/// With a hint, only that subset is validated. Without one, the greedy
/// search over support groups runs.
pub fn find_mes_witness(
    set: &StateSet,
    bip: &Bipartition,
    hint: Option<&[usize]>,
    tol: &Tolerances,
) -> Result<Option<MesWitness>> {
    if let Some(h) = hint {
        return validate_witness(set, bip, h, tol);
    }
    let data = CutData::new(set, bip, tol)?;
    Ok(search(set, bip, &data, tol)?.witness)
}

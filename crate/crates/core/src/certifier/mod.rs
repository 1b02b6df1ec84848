//! Strong-nonlocality certificates.
//!
//! A cut is certified when it carries an [`MesWitness`]: at least `r + 1`
//! states that are maximally entangled on one common `r⊗r` effective system.
//! Such a family cannot be perfectly distinguished by LOCC across the cut,
//! which is taken as a trusted premise. Since any protocol that distinguishes
//! the whole set also distinguishes every subset of it, the witness certifies
//! the whole set on that cut. The set is certified strongly nonlocal when
//! every bipartition is certified.
//!
//! Alongside each cut the report carries orthogonality-preserving measurement
//! (OPM) diagnostics for both sides; these speak to local reducibility only and
//! never enter the verdict.

mod opm;
mod witness;

use rayon::prelude::*;

pub use opm::{find_eliminator, opm_solution_space, Eliminator, HermitianOp, OpmReport, Param};
pub use witness::{find_mes_witness, validate_witness, CandidateSummary, MesWitness};

use crate::bipartition::{Bipartition, Side};
use crate::constructions::{SetParams, StateSet};
use crate::error::Result;
use crate::partition::{enumerate_bipartitions, EffectiveFrame};
use crate::tolerance::Tolerances;
use witness::{search, CutData};

/// Trusted external result the certificates rest on.
pub const PREMISE: &str = "Trusted premise: any d+1 maximally entangled states of a d⊗d system \
cannot be perfectly distinguished by LOCC (the three Bell states (|00⟩±|11⟩), |01⟩+|10⟩ are the d=2 case).";

/// How a certificate for a cut carries over to the full set.
pub const SUBSET_INFERENCE: &str = "Subset monotonicity: an LOCC protocol distinguishing the full set \
would distinguish every subset, so a locally indistinguishable subset makes the full set locally \
indistinguishable across that cut.";

/// Taxonomy note: certification of every bipartition is the same as
/// indistinguishability under super-LOCC.
pub const TAXONOMY: &str = "Certified in every bipartition: the set cannot be perfectly distinguished \
by super-LOCC (LOCC with at least two parties merged into one subsystem).";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Uncertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverallVerdict {
    StronglyNonlocalCertified,
    NotCertified,
}

/// Where a cut's witness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    Hint,
    Search,
}

/// Structural data reported for every cut, certified or not.
#[derive(Clone, Debug, PartialEq)]
pub struct CutDiagnostics {
    /// Frame of the whole set: `(dim_a, dim_b)`.
    pub full_frame_dims: (usize, usize),
    /// Schmidt rank of each state across the cut.
    pub state_ranks: Vec<usize>,
    /// Support groups examined by the search (empty when a hint was used).
    pub candidates: Vec<CandidateSummary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutEntry {
    pub bipartition: Bipartition,
    pub verdict: Verdict,
    pub witness: Option<MesWitness>,
    pub witness_source: WitnessSource,
    pub diagnostics: CutDiagnostics,
    /// OPM reports for sides A and B, unless skipped.
    pub opm: Option<[OpmReport; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificationReport {
    pub set_label: String,
    pub params: SetParams,
    pub dims: Vec<usize>,
    pub n_states: usize,
    pub entries: Vec<CutEntry>,
    pub overall: OverallVerdict,
    pub premise: &'static str,
    pub inference: &'static str,
    pub tolerances: Tolerances,
}

impl CertificationReport {
    pub fn certified_count(&self) -> usize {
        self.entries.iter().filter(|e| e.verdict == Verdict::Certified).count()
    }
}

/// Options for [`certify_with`].
#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    /// Witness hints. A hint bound to a bipartition (either orientation)
    /// applies to that cut; an unbound hint applies to every cut without a
    /// bound one. Hinted cuts are validated, never searched.
    pub hints: Vec<(Option<Bipartition>, Vec<usize>)>,
    pub skip_opm: bool,
}

impl CertifyOptions {
    fn hint_for(&self, bip: &Bipartition) -> Option<&[usize]> {
        let bound = self
            .hints
            .iter()
            .find(|(b, _)| b.as_ref().map(|b| b.canonical()) == Some(bip.canonical()));
        bound
            .or_else(|| self.hints.iter().find(|(b, _)| b.is_none()))
            .map(|(_, h)| h.as_slice())
    }
}

/// Certify every canonical bipartition with default options.
pub fn certify(set: &StateSet, tol: &Tolerances) -> Result<CertificationReport> {
    certify_with(set, &CertifyOptions::default(), tol)
}

pub fn certify_with(set: &StateSet, opts: &CertifyOptions, tol: &Tolerances) -> Result<CertificationReport> {
    set.check_orthonormal(tol)?;
    let cuts = enumerate_bipartitions(set.n_parties())?;
    let entries = cuts
        .par_iter()
        .map(|bip| certify_cut(set, bip, opts, tol))
        .collect::<Result<Vec<_>>>()?;
    let overall = if entries.iter().all(|e| e.verdict == Verdict::Certified) {
        OverallVerdict::StronglyNonlocalCertified
    } else {
        OverallVerdict::NotCertified
    };
    Ok(CertificationReport {
        set_label: set.label.clone(),
        params: set.params.clone(),
        dims: set.dims().to_vec(),
        n_states: set.len(),
        entries,
        overall,
        premise: PREMISE,
        inference: SUBSET_INFERENCE,
        tolerances: *tol,
    })
}

fn certify_cut(set: &StateSet, bip: &Bipartition, opts: &CertifyOptions, tol: &Tolerances) -> Result<CutEntry> {
    let data = CutData::new(set, bip, tol)?;
    let full = EffectiveFrame::from_supports(bip, &data.support_a, &data.support_b, tol)?;
    let state_ranks = data.support_a.iter().map(|s| s.dim()).collect();

    let (witness, source, candidates) = match opts.hint_for(bip) {
        Some(h) => (validate_witness(set, bip, h, tol)?, WitnessSource::Hint, Vec::new()),
        None => {
            let out = search(set, bip, &data, tol)?;
            (out.witness, WitnessSource::Search, out.candidates)
        }
    };

    let opm = if opts.skip_opm {
        None
    } else {
        let side = |s: Side| -> Result<OpmReport> {
            let mut r = opm_solution_space(set, bip, s, tol)?;
            if !r.trivial {
                r.eliminator = find_eliminator(set, bip, s, tol)?;
            }
            Ok(r)
        };
        Some([side(Side::A)?, side(Side::B)?])
    };

    Ok(CutEntry {
        bipartition: bip.clone(),
        verdict: if witness.is_some() { Verdict::Certified } else { Verdict::Uncertified },
        witness,
        witness_source: source,
        diagnostics: CutDiagnostics {
            full_frame_dims: (full.dim_a(), full.dim_b()),
            state_ranks,
            candidates,
        },
        opm,
    })
}

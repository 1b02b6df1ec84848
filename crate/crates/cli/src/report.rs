//! Certification report documents and the plain-text summary.

use std::fmt::Write as _;

use nonloc_core::bipartition::Side;
use nonloc_core::tensor::unflatten;
use nonloc_core::{
    CertificationReport, CutEntry, Eliminator, MesWitness, OpmReport, OverallVerdict, Subspace, Tolerances, Verdict,
    WitnessSource,
};
use serde::{Deserialize, Serialize};

use crate::document::ParamsEntry;
use crate::layout::{self, FloatStyle};

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_NAME: &str = "nonloc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool: ToolEntry,
    pub set: SetEntry,
    pub premise: String,
    pub inference: String,
    pub tolerances: ToleranceEntry,
    pub bipartitions: Vec<CutReport>,
    pub overall: OverallEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolEntry {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetEntry {
    pub label: String,
    pub dims: Vec<usize>,
    pub n_states: usize,
    pub params: Option<ParamsEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEntry {
    pub rank: f64,
    pub orthogonality: f64,
    pub flat_spectrum: f64,
    pub out_of_frame: f64,
    pub nullspace: f64,
    pub norm: f64,
}

impl From<&Tolerances> for ToleranceEntry {
    fn from(t: &Tolerances) -> Self {
        Self {
            rank: t.rank,
            orthogonality: t.orthogonality,
            flat_spectrum: t.flat_spectrum,
            out_of_frame: t.out_of_frame,
            nullspace: t.nullspace,
            norm: t.norm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub cut: String,
    pub block_a: Vec<usize>,
    pub block_b: Vec<usize>,
    pub verdict: String,
    pub witness: Option<WitnessEntry>,
    pub diagnostics: DiagnosticsEntry,
    pub opm: Option<Vec<OpmEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub source: String,
    pub members: Vec<usize>,
    pub member_labels: Vec<String>,
    pub effective_dim: usize,
    pub max_deviation_from_flat: f64,
    pub frame_a: Vec<Vec<AmplitudeEntry>>,
    pub frame_b: Vec<Vec<AmplitudeEntry>>,
}

/// One nonzero entry of a frame basis vector over the grouped side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub index: usize,
    pub basis: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsEntry {
    pub full_frame_dims: [usize; 2],
    pub state_ranks: Vec<usize>,
    pub candidates: Vec<CandidateEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub members: Vec<usize>,
    pub frame_dims: [usize; 2],
    pub mes_members: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpmEntry {
    pub side: String,
    pub parties: Vec<usize>,
    pub side_dim: usize,
    pub space_dim: usize,
    pub trivial: bool,
    pub eliminator: Option<EliminatorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminatorEntry {
    /// Grouped basis indices spanned by the projector.
    pub support: Vec<usize>,
    pub eliminated_by_projector: Vec<usize>,
    pub eliminated_by_complement: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverallEntry {
    pub verdict: String,
    pub certified_bipartitions: usize,
    pub total_bipartitions: usize,
    pub taxonomy: Option<String>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Certified => "CERTIFIED",
        Verdict::Uncertified => "UNCERTIFIED",
    }
}

pub fn overall_name(v: OverallVerdict) -> &'static str {
    match v {
        OverallVerdict::StronglyNonlocalCertified => "STRONGLY_NONLOCAL_CERTIFIED",
        OverallVerdict::NotCertified => "NOT_CERTIFIED",
    }
}

fn sparse_columns(sub: &Subspace, side_dims: &[usize]) -> Vec<Vec<AmplitudeEntry>> {
    sub.basis()
        .column_iter()
        .map(|col| {
            col.iter()
                .enumerate()
                .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                .map(|(index, z)| AmplitudeEntry { index, basis: unflatten(side_dims, index), re: z.re, im: z.im })
                .collect()
        })
        .collect()
}

fn witness_entry(w: &MesWitness, source: WitnessSource, dims: &[usize], labels: &[String]) -> WitnessEntry {
    let bip = &w.bipartition;
    let side_dims = |side: Side| -> Vec<usize> { bip.block(side).iter().map(|&p| dims[p]).collect() };
    WitnessEntry {
        source: match source {
            WitnessSource::Hint => "hint",
            WitnessSource::Search => "search",
        }
        .to_string(),
        members: w.member_indices.clone(),
        member_labels: w.member_indices.iter().map(|&i| labels[i].clone()).collect(),
        effective_dim: w.effective_dim,
        max_deviation_from_flat: w.schmidt.iter().map(|s| s.max_deviation_from_flat).fold(0.0, f64::max),
        frame_a: sparse_columns(&w.frame.subspace_a, &side_dims(Side::A)),
        frame_b: sparse_columns(&w.frame.subspace_b, &side_dims(Side::B)),
    }
}

fn eliminator_entry(e: &Eliminator) -> EliminatorEntry {
    EliminatorEntry {
        support: e.support.clone(),
        eliminated_by_projector: e.eliminated_by_projector.clone(),
        eliminated_by_complement: e.eliminated_by_complement.clone(),
    }
}

fn opm_entry(r: &OpmReport) -> OpmEntry {
    OpmEntry {
        side: r.measured_side.to_string(),
        parties: r.bipartition.block(r.measured_side).to_vec(),
        side_dim: r.side_dim,
        space_dim: r.space_dim,
        trivial: r.trivial,
        eliminator: r.eliminator.as_ref().map(eliminator_entry),
    }
}

fn cut_report(e: &CutEntry, dims: &[usize], labels: &[String]) -> CutReport {
    CutReport {
        cut: e.bipartition.to_string(),
        block_a: e.bipartition.block_a().to_vec(),
        block_b: e.bipartition.block_b().to_vec(),
        verdict: verdict_name(e.verdict).to_string(),
        witness: e.witness.as_ref().map(|w| witness_entry(w, e.witness_source, dims, labels)),
        diagnostics: DiagnosticsEntry {
            full_frame_dims: [e.diagnostics.full_frame_dims.0, e.diagnostics.full_frame_dims.1],
            state_ranks: e.diagnostics.state_ranks.clone(),
            candidates: e
                .diagnostics
                .candidates
                .iter()
                .map(|c| CandidateEntry {
                    members: c.members.clone(),
                    frame_dims: [c.dim_a, c.dim_b],
                    mes_members: c.mes_members,
                })
                .collect(),
        },
        opm: e.opm.as_ref().map(|sides| sides.iter().map(opm_entry).collect()),
    }
}

impl ReportDocument {
    /// `labels` are the state labels of the certified set, in order.
    pub fn new(report: &CertificationReport, labels: &[String]) -> Self {
        let params = (report.params != Default::default()).then(|| ParamsEntry::from(&report.params));
        let certified = report.overall == OverallVerdict::StronglyNonlocalCertified;
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            tool: ToolEntry { name: TOOL_NAME.to_string(), version: TOOL_VERSION.to_string() },
            set: SetEntry {
                label: report.set_label.clone(),
                dims: report.dims.clone(),
                n_states: report.n_states,
                params,
            },
            premise: report.premise.to_string(),
            inference: report.inference.to_string(),
            tolerances: ToleranceEntry::from(&report.tolerances),
            bipartitions: report.entries.iter().map(|e| cut_report(e, &report.dims, labels)).collect(),
            overall: OverallEntry {
                verdict: overall_name(report.overall).to_string(),
                certified_bipartitions: report.certified_count(),
                total_bipartitions: report.entries.len(),
                taxonomy: certified.then(|| nonloc_core::certifier::TAXONOMY.to_string()),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        layout::to_string(&value, FloatStyle::Significant17)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Human-readable summary printed by `certify`.
pub fn summary(report: &CertificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "set {} dims {:?} with {} states, {} bipartitions",
        report.set_label,
        report.dims,
        report.n_states,
        report.entries.len()
    );
    for e in &report.entries {
        let _ = write!(out, "  {:<16} {:<11}", e.bipartition.to_string(), verdict_name(e.verdict));
        match &e.witness {
            Some(w) => {
                let _ = write!(out, " witness {:?} at effective dim {}", w.member_indices, w.effective_dim);
                if e.witness_source == WitnessSource::Hint {
                    out.push_str(" (hint)");
                }
            }
            None => {
                let (a, b) = e.diagnostics.full_frame_dims;
                let mut ranks = e.diagnostics.state_ranks.clone();
                ranks.sort_unstable();
                ranks.dedup();
                let _ = write!(out, " full frame {a}x{b}, state ranks {ranks:?}");
            }
        }
        if let Some(sides) = &e.opm {
            let dims: Vec<String> = sides
                .iter()
                .map(|r| {
                    let elim = if r.eliminator.is_some() { "+elim" } else { "" };
                    format!("{}:{}{elim}", r.measured_side, r.space_dim)
                })
                .collect();
            let _ = write!(out, "; opm {}", dims.join(" "));
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "overall: {} ({}/{} bipartitions certified)",
        overall_name(report.overall),
        report.certified_count(),
        report.entries.len()
    );
    let _ = writeln!(out, "{}", report.premise);
    out
}

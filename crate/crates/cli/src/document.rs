//! State-set documents.
//!
//! A document stores each state as the unnormalized sparse terms it was
//! written in; normalization happens on load. The canonical form orders
//! terms by flattened basis index, with repeated basis labels summed.

use std::path::Path;

use nonloc_core::tensor::flat_index;
use nonloc_core::{SetParams, StateSet, Term, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::layout::{self, FloatStyle};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetDocument {
    pub schema_version: String,
    pub label: String,
    pub dims: Vec<usize>,
    pub states: Vec<StateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub label: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub basis: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl From<&SetParams> for ParamsEntry {
    fn from(p: &SetParams) -> Self {
        Self { family: p.family.clone(), n: p.n, d: p.d, k: p.k }
    }
}

impl From<&ParamsEntry> for SetParams {
    fn from(p: &ParamsEntry) -> Self {
        Self { family: p.family.clone(), n: p.n, d: p.d, k: p.k }
    }
}

impl StateSetDocument {
    /// Canonical document of a set, from the terms it was built from.
    pub fn from_set(set: &StateSet) -> Self {
        let states = set
            .states()
            .iter()
            .zip(set.terms())
            .map(|(s, terms)| StateEntry {
                label: s.label.clone(),
                terms: terms
                    .iter()
                    .map(|t| TermEntry { basis: t.basis.clone(), re: t.coeff.re, im: t.coeff.im })
                    .collect(),
            })
            .collect();
        let params = (set.params != SetParams::default()).then(|| ParamsEntry::from(&set.params));
        let mut doc = Self {
            schema_version: SCHEMA_VERSION.to_string(),
            label: set.label.clone(),
            dims: set.dims().to_vec(),
            states,
            params,
        };
        doc.canonicalize();
        doc
    }

    /// Sort terms by flattened index and merge repeated basis labels.
    /// Terms must already lie within `dims`.
    pub fn canonicalize(&mut self) {
        let dims = self.dims.clone();
        for state in &mut self.states {
            let mut keyed: Vec<(usize, TermEntry)> = state
                .terms
                .drain(..)
                .map(|t| (flat_index(&dims, &t.basis).unwrap_or(usize::MAX), t))
                .collect();
            keyed.sort_by_key(|(k, _)| *k);
            let mut merged: Vec<(usize, TermEntry)> = Vec::with_capacity(keyed.len());
            for (k, t) in keyed {
                match merged.last_mut() {
                    Some((last, acc)) if *last == k => {
                        acc.re += t.re;
                        acc.im += t.im;
                    }
                    _ => merged.push((k, t)),
                }
            }
            state.terms = merged.into_iter().map(|(_, t)| t).collect();
        }
    }

    /// Check the schema; the error names the first offending location.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::document(
                "$.schema_version",
                format!("expected \"{SCHEMA_VERSION}\", found {:?}", self.schema_version),
            ));
        }
        if self.dims.is_empty() {
            return Err(CliError::document("$.dims", "at least one party is required"));
        }
        if let Some(p) = self.dims.iter().position(|&d| d < 2) {
            return Err(CliError::document(format!("$.dims[{p}]"), "every party dimension must be at least 2"));
        }
        if self.states.is_empty() {
            return Err(CliError::document("$.states", "at least one state is required"));
        }
        for (s, state) in self.states.iter().enumerate() {
            if state.terms.is_empty() {
                return Err(CliError::document(format!("$.states[{s}].terms"), "a state needs at least one term"));
            }
            for (t, term) in state.terms.iter().enumerate() {
                let at = format!("$.states[{s}].terms[{t}]");
                if term.basis.len() != self.dims.len() {
                    return Err(CliError::document(
                        format!("{at}.basis"),
                        format!("expected {} labels, found {}", self.dims.len(), term.basis.len()),
                    ));
                }
                if let Some(p) = term.basis.iter().zip(&self.dims).position(|(l, d)| l >= d) {
                    return Err(CliError::document(
                        format!("{at}.basis[{p}]"),
                        format!("label {} out of range for dimension {}", term.basis[p], self.dims[p]),
                    ));
                }
                if !term.re.is_finite() || !term.im.is_finite() {
                    return Err(CliError::document(at, "coefficients must be finite"));
                }
            }
            if state.terms.iter().all(|t| t.re == 0.0 && t.im == 0.0) {
                return Err(CliError::document(format!("$.states[{s}].terms"), "all coefficients are zero"));
            }
        }
        Ok(())
    }

    /// Validate and build the normalized set.
    pub fn to_set(&self) -> Result<StateSet, CliError> {
        self.validate()?;
        let members = self
            .states
            .iter()
            .map(|s| {
                let terms = s.terms.iter().map(|t| Term::new(C64::new(t.re, t.im), t.basis.clone())).collect();
                (s.label.clone(), terms)
            })
            .collect();
        let params = self.params.as_ref().map(SetParams::from).unwrap_or_default();
        Ok(StateSet::from_terms(self.label.clone(), &self.dims, members, params)?)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("document serializes");
        layout::to_string(&value, FloatStyle::Shortest)
    }

    /// Parse a document; syntax errors carry `line:column`.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| CliError::document(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json())
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
    }
}

//! The `generate`, `certify` and `inspect` subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonloc_core::bipartition::Side;
use nonloc_core::{
    certify_with, effective_frame, ghz_subset_3qubit, ghz_subset_nqubit, is_mes_in_frame, mes_set_3x3x3,
    mes_set_kpartite, mes_set_tripartite, opm_solution_space, regroup, schmidt, Bipartition, CertifyOptions,
    OverallVerdict, StateSet, Tolerances,
};

use crate::document::StateSetDocument;
use crate::error::{exit, CliError};
use crate::report::{self, ReportDocument};

pub const TOLERANCE_SCALE_VAR: &str = "NONLOC_TOLERANCE_SCALE";

#[derive(Debug, Parser)]
#[command(name = "nonloc", version, about = "Generate, certify and inspect sets of orthogonal multipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated state set as a JSON document.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output path; the document goes to stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Certify every bipartition of a state set.
    Certify {
        #[command(flatten)]
        source: SourceArgs,
        /// Witness subset as zero-based indices `i,j,k`, or bound to one cut as `0,1|2=i,j,k`.
        #[arg(long = "hint")]
        hints: Vec<String>,
        /// Write the full report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Skip the orthogonality-preserving measurement analysis.
        #[arg(long)]
        skip_opm: bool,
    },
    /// Print Schmidt data, frame dimensions and OPM dimensions for one cut.
    Inspect {
        #[command(flatten)]
        source: SourceArgs,
        /// Cut as comma-separated party indices with blocks separated by `|`, e.g. `0,1|2`.
        #[arg(long)]
        bipartition: String,
        /// Subset whose frame is reported instead of the full set's.
        #[arg(long)]
        hint: Option<String>,
        #[arg(long)]
        skip_opm: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Five three-qubit GHZ-basis states.
    Eq1,
    /// 2^(N-1)+1 N-qubit GHZ-basis states (needs --n).
    Eq3,
    /// Six maximally entangled states in 3⊗3⊗3.
    Lemma1,
    /// d+3 maximally entangled states in d⊗d⊗d (needs --d).
    Thm3,
    /// (k+1)d maximally entangled states in k parties of dimension d (needs --k, --d).
    Thm4,
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct SourceArgs {
    /// State-set document to read.
    #[arg(conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Build the set from a family instead of reading a document.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

fn required(value: Option<usize>, flag: &str, family: Family) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("family {family:?} needs --{flag}").to_lowercase()))
}

pub fn build_family(family: Family, n: Option<usize>, d: Option<usize>, k: Option<usize>) -> Result<StateSet, CliError> {
    let set = match family {
        Family::Eq1 => ghz_subset_3qubit(),
        Family::Lemma1 => mes_set_3x3x3(),
        Family::Eq3 => ghz_subset_nqubit(required(n, "n", family)?)?,
        Family::Thm3 => mes_set_tripartite(required(d, "d", family)?)?,
        Family::Thm4 => mes_set_kpartite(required(k, "k", family)?, required(d, "d", family)?)?,
    };
    Ok(set)
}

impl SourceArgs {
    pub fn load(&self) -> Result<StateSet, CliError> {
        match (&self.input, self.family) {
            (Some(path), None) => StateSetDocument::load(path)?.to_set(),
            (None, Some(f)) => build_family(f, self.n, self.d, self.k),
            _ => Err(CliError::Usage("give either an input document or --family".into())),
        }
    }
}

/// Default tolerances scaled by `NONLOC_TOLERANCE_SCALE` when set.
pub fn tolerances_from_env() -> Result<Tolerances, CliError> {
    match std::env::var(TOLERANCE_SCALE_VAR) {
        Err(_) => Ok(Tolerances::default()),
        Ok(raw) => {
            let scale: f64 = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{TOLERANCE_SCALE_VAR}={raw:?} is not a number")))?;
            if !scale.is_finite() || scale <= 0.0 {
                return Err(CliError::Usage(format!("{TOLERANCE_SCALE_VAR} must be positive and finite")));
            }
            Ok(Tolerances::scaled(scale))
        }
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad state index {t:?} in hint {text:?}"))))
        .collect()
}

/// Parse `i,j,k` or `CUT=i,j,k` for a set of `n_parties`.
pub fn parse_hint(text: &str, n_parties: usize) -> Result<(Option<Bipartition>, Vec<usize>), CliError> {
    match text.split_once('=') {
        Some((cut, members)) => {
            let bip = Bipartition::parse(cut.trim(), n_parties).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((Some(bip), parse_indices(members)?))
        }
        None => Ok((None, parse_indices(text)?)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), message: e.to_string() }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Generate { family, out: path } => generate(family, path.as_deref(), out),
        Command::Certify { source, hints, json, skip_opm } => {
            let set = source.load()?;
            certify(&set, hints, json.as_deref(), *skip_opm, &tolerances_from_env()?, out)
        }
        Command::Inspect { source, bipartition, hint, skip_opm } => {
            let set = source.load()?;
            inspect(&set, bipartition, hint.as_deref(), *skip_opm, &tolerances_from_env()?, out)
        }
    }
}

pub fn generate(family: &FamilyArgs, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let set = build_family(family.family, family.n, family.d, family.k)?;
    let doc = StateSetDocument::from_set(&set);
    let summary = format!("{}: {} states, dims {:?}", set.label, set.len(), set.dims());
    match path {
        Some(p) => {
            doc.save(p)?;
            writeln!(out, "{summary} -> {}", p.display()).map_err(io)?;
        }
        None => {
            out.write_all(doc.to_json().as_bytes()).map_err(io)?;
            eprintln!("{summary}");
        }
    }
    Ok(exit::OK)
}

pub fn certify(
    set: &StateSet,
    hints: &[String],
    json: Option<&Path>,
    skip_opm: bool,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let hints = hints.iter().map(|h| parse_hint(h, set.n_parties())).collect::<Result<Vec<_>, _>>()?;
    let opts = CertifyOptions { hints, skip_opm };
    let report = certify_with(set, &opts, tol)?;
    out.write_all(report::summary(&report).as_bytes()).map_err(io)?;
    if let Some(path) = json {
        let labels: Vec<String> = set.states().iter().map(|s| s.label.clone()).collect();
        write_file(path, &ReportDocument::new(&report, &labels).to_json())?;
    }
    Ok(match report.overall {
        OverallVerdict::StronglyNonlocalCertified => exit::CERTIFIED,
        OverallVerdict::NotCertified => exit::NOT_CERTIFIED,
    })
}

pub fn inspect(
    set: &StateSet,
    cut: &str,
    hint: Option<&str>,
    skip_opm: bool,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let bip = Bipartition::parse(cut, set.n_parties()).map_err(|e| CliError::Usage(e.to_string()))?;
    set.check_orthonormal(tol)?;
    let mut text = String::new();
    let side_a = bip.side_dim(set.dims(), Side::A);
    let side_b = bip.side_dim(set.dims(), Side::B);
    text.push_str(&format!("set {} dims {:?}, cut {bip} ({side_a}x{side_b})\n", set.label, set.dims()));
    for (i, s) in set.states().iter().enumerate() {
        let data = schmidt(&regroup(s, &bip)?, tol)?;
        let values: Vec<String> = data.singular_values[..data.rank].iter().map(|v| format!("{v:.12}")).collect();
        text.push_str(&format!(
            "  [{i}] {:<8} rank {} schmidt ({}) max deviation from flat {:.3e}\n",
            s.label,
            data.rank,
            values.join(", "),
            data.max_deviation_from_flat
        ));
    }

    let members: Vec<usize> = match hint {
        Some(h) => {
            let members = parse_indices(h)?;
            if let Some(&bad) = members.iter().find(|&&i| i >= set.len()) {
                return Err(CliError::Usage(format!("hint index {bad} out of range for {} states", set.len())));
            }
            members
        }
        None => (0..set.len()).collect(),
    };
    let frame = effective_frame(members.iter().map(|&i| &set.states()[i]), &bip, tol)?;
    let scope = if hint.is_some() { format!("subset {members:?}") } else { "all states".to_string() };
    text.push_str(&format!("frame of {scope}: {}x{}\n", frame.dim_a(), frame.dim_b()));
    if hint.is_some() {
        for &i in &members {
            let verdict = match is_mes_in_frame(&set.states()[i], &frame, tol) {
                Ok((true, _)) => "maximally entangled in frame",
                Ok((false, _)) => "not maximally entangled in frame",
                Err(nonloc_core::Error::Support { .. }) => "outside frame",
                Err(e) => return Err(e.into()),
            };
            text.push_str(&format!("  [{i}] {verdict}\n"));
        }
    }
    if !skip_opm {
        for side in [Side::A, Side::B] {
            let r = opm_solution_space(set, &bip, side, tol)?;
            text.push_str(&format!(
                "opm side {side} (parties {:?}, dim {}): space dim {}{}\n",
                bip.block(side),
                r.side_dim,
                r.space_dim,
                if r.trivial { " (trivial)" } else { "" }
            ));
        }
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hints_parse_bound_and_unbound() {
        let (cut, members) = parse_hint("0,1|2=0,1,2,5", 3).unwrap();
        assert_eq!(cut.unwrap().to_string(), "0,1|2");
        assert_eq!(members, vec![0, 1, 2, 5]);
        assert_eq!(parse_hint("3, 4,5", 3).unwrap(), (None, vec![3, 4, 5]));
        assert!(parse_hint("0|1=0,1", 3).is_err());
        assert!(parse_hint("a,b", 3).is_err());
    }

    #[test]
    fn family_parameters_are_required() {
        assert!(matches!(build_family(Family::Thm3, None, None, None), Err(CliError::Usage(_))));
        let err = build_family(Family::Thm3, None, Some(2), None).unwrap_err();
        assert_eq!(err.exit_code(), exit::INPUT);
        assert!(err.to_string().contains("d >= 3"));
        assert_eq!(build_family(Family::Thm4, None, Some(3), Some(4)).unwrap().len(), 15);
    }

    #[test]
    fn inspect_reports_hinted_frame() {
        let set = mes_set_3x3x3();
        let mut buf = Vec::new();
        inspect(&set, "0|1,2", Some("0,1,2,3"), true, &Tolerances::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("frame of subset [0, 1, 2, 3]: 3x3"), "{text}");
    }
}

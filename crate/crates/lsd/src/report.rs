use crate::commands::Counts;
use crate::error::{CliError, Result};
use crate::spec;
use crate::sweep::Metadata;
use lsd_core::bounds::{battery::standard_battery, certify_density, BoundOptions, Outcome};
use lsd_core::{Density, Settings};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

/// The built-in battery for `default`; otherwise every `*.json` file of the
/// directory `suite`, in file-name order, named by file stem.
pub fn load_suite(suite: &str, settings: &Settings) -> Result<Vec<(String, Density)>> {
    if suite == "default" {
        return Ok(standard_battery(settings)?);
    }
    let dir = Path::new(suite);
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::input(dir, e))?;
    let mut paths = Vec::new();
    for e in entries {
        let p = e.map_err(|e| CliError::input(dir, e))?.path();
        if p.extension().is_some_and(|x| x == "json") {
            paths.push(p);
        }
    }
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok((name, spec::load(p, settings)?))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSummary {
    pub bound_id: &'static str,
    #[serde(flatten)]
    pub counts: Counts,
    /// Smallest slack over the certified members.
    pub worst_slack: Option<f64>,
    pub worst_member: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub bound_id: &'static str,
    pub member: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub members: Vec<String>,
    pub counts: Counts,
    pub bounds: Vec<BoundSummary>,
    pub entries: Vec<Entry>,
    pub metadata: Metadata,
}

/// Certify every bound on every member; members run in parallel and entries
/// are ordered by bound, then member.
pub fn report(
    suite: &str,
    members: &[(String, Density)],
    ids: &[&'static str],
    opts: &BoundOptions,
    settings: &Settings,
) -> Report {
    let per_member: Vec<Vec<Outcome>> = members.par_iter().map(|(_, mu)| certify_density(mu, ids, opts)).collect();
    let mut counts = Counts::default();
    let mut bounds = Vec::new();
    let mut entries = Vec::new();
    if !members.is_empty() {
        for (k, id) in ids.iter().enumerate() {
            let mut s = BoundSummary { bound_id: id, counts: Counts::default(), worst_slack: None, worst_member: None };
            for ((name, _), outs) in members.iter().zip(&per_member) {
                let o = &outs[k];
                s.counts.add(o);
                counts.add(o);
                if let Some(c) = o.certificate() {
                    if s.worst_slack.is_none_or(|w| c.slack < w) {
                        s.worst_slack = Some(c.slack);
                        s.worst_member = Some(name.clone());
                    }
                }
                entries.push(Entry { bound_id: id, member: name.clone(), outcome: o.clone() });
            }
            bounds.push(s);
        }
    }
    Report {
        suite: suite.to_string(),
        members: members.iter().map(|(n, _)| n.clone()).collect(),
        counts,
        bounds,
        entries,
        metadata: Metadata::new(settings, opts.tol),
    }
}

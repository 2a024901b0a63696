use crate::cli::{BoundArgs, Metric};
use crate::error::{CliError, Result};
use crate::spec;
use lsd_core::bounds::{bound_ids, certify_density, lookup, BoundCertificate, BoundOptions, Outcome};
use lsd_core::functionals::{self, reference_gaussian, FunctionalValue};
use lsd_core::transport::{transport_cost, CostFn};
use lsd_core::{Density, Density1D, Error, Settings};
use serde::Serialize;
use std::path::Path;

/// Resolve `all` and validate the requested ids.
pub fn resolve_bounds(ids: &[String]) -> Result<Vec<&'static str>> {
    if ids.is_empty() || ids.iter().any(|i| i == "all") {
        return Ok(bound_ids().collect());
    }
    ids.iter().map(|i| Ok(lookup(i.trim())?.id)).collect()
}

pub fn bound_options(args: &BoundArgs, tol: f64, settings: &Settings) -> Result<BoundOptions> {
    let partner = match &args.partner {
        Some(p) => match spec::load(p, settings)? {
            Density::Line(d) => Some(d),
            _ => return Err(CliError::input(p, "the partner law must be one-dimensional")),
        },
        None => None,
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a non-negative number, got {tol}")));
    }
    Ok(BoundOptions {
        tol,
        t: args.t,
        partner,
        thm41_scaled: args.thm41_scaled,
        median_variant: args.median_variant,
        ..BoundOptions::default()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceValue {
    pub metric: &'static str,
    pub value: f64,
    /// Quadrature error estimate of `value`.
    pub error: f64,
}

fn one_dimensional(d: &Density) -> Option<&Density1D> {
    match d {
        Density::Line(l) => Some(l),
        Density::Product(p) if p.dim() == 1 => Some(&p.factors()[0]),
        _ => None,
    }
}

fn pair<'a>(mu: &'a Density, nu: &'a Density, metric: Metric) -> Result<(&'a Density1D, &'a Density1D)> {
    match (one_dimensional(mu), one_dimensional(nu)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::ShapeMismatch(format!("`{}` needs one-dimensional laws", metric.id())).into()),
    }
}

/// Square root of a cost together with its propagated error.
fn root(sq: f64, err: f64) -> (f64, f64) {
    let v = sq.max(0.0).sqrt();
    (v, if v > 0.0 { err / (2.0 * v) } else { err.sqrt() })
}

pub fn distance(mu: &Density, nu: &Density, metric: Metric) -> Result<DistanceValue> {
    let fv = |v: FunctionalValue| (v.value, v.error_estimate);
    let (value, error) = match metric {
        Metric::Kl => fv(functionals::relative_entropy(mu, nu)?),
        Metric::Fisher => fv(functionals::relative_fisher(mu, nu)?),
        Metric::Tv => fv(functionals::total_variation(mu, nu)?),
        Metric::Deficit => fv(functionals::deficit(mu)?),
        Metric::W2 => match (mu, nu) {
            (Density::Product(a), Density::Product(b)) if a.dim() == b.dim() => {
                let (mut v, mut e) = (0.0, 0.0);
                for (x, y) in a.factors().iter().zip(b.factors()) {
                    let c = transport_cost(x, y, CostFn::Sq)?;
                    v += c.value;
                    e += c.error_estimate;
                }
                root(v, e)
            }
            _ => {
                let (a, b) = pair(mu, nu, metric)?;
                let c = transport_cost(a, b, CostFn::Sq)?;
                root(c.value, c.error_estimate)
            }
        },
        Metric::W1 | Metric::Tdelta => {
            let (a, b) = pair(mu, nu, metric)?;
            let cost = if metric == Metric::W1 { CostFn::Abs } else { CostFn::Delta };
            fv(transport_cost(a, b, cost)?)
        }
    };
    Ok(DistanceValue { metric: metric.id(), value, error })
}

pub fn cmd_distance(dist: &Path, metric: Metric, reference: &str, settings: &Settings) -> Result<String> {
    let mu = spec::load(dist, settings)?;
    let nu = if reference == "gaussian" { reference_gaussian(&mu) } else { spec::load(Path::new(reference), settings)? };
    if metric == Metric::Deficit && reference != "gaussian" {
        return Err(CliError::Usage("the deficit is always taken against the standard Gaussian".into()));
    }
    to_json(&distance(&mu, &nu, metric)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl Counts {
    pub fn add(&mut self, o: &Outcome) {
        match o {
            Outcome::Certified(c) if c.pass => self.pass += 1,
            Outcome::Skipped { .. } => self.skip += 1,
            _ => self.fail += 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub bound_id: &'static str,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub bound_id: &'static str,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub tol: f64,
    pub counts: Counts,
    pub certificates: Vec<BoundCertificate>,
    pub skipped: Vec<Skip>,
    pub failed: Vec<Failure>,
}

pub fn certify(mu: &Density, ids: &[&'static str], opts: &BoundOptions) -> CertifyReport {
    let mut r = CertifyReport {
        tol: opts.tol,
        counts: Counts::default(),
        certificates: Vec::new(),
        skipped: Vec::new(),
        failed: Vec::new(),
    };
    for (id, o) in ids.iter().zip(certify_density(mu, ids, opts)) {
        r.counts.add(&o);
        match o {
            Outcome::Certified(c) => r.certificates.push(c),
            Outcome::Skipped { reason } => r.skipped.push(Skip { bound_id: id, reason }),
            Outcome::Failed { error } => r.failed.push(Failure { bound_id: id, error }),
        }
    }
    r
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

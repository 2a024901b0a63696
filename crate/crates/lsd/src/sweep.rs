//! One-parameter sweeps. Columns, in CSV order:
//!
//! | column | meaning |
//! |---|---|
//! | `d` | `D(μ\|γ)` |
//! | `i_rel` | `I(μ\|γ)` |
//! | `deficit` | `I/2 − D` |
//! | `w2_sq` | `W2²(μ, γ)` |
//! | `w1` | `W1(μ, γ)` |
//! | `t_delta` | transport cost with `Δ(\|x − z\|)` |
//! | `t_delta_sq_over_d` | `T_Δ²/D` for the mean-centred law, `0/0 = 0` |
//! | `w1_4_over_d` | `W1⁴/D` for the mean-centred law, `0/0 = 0` |
//! | `deficit_over_dev2` | `deficit/(σ − 1)²` (`gaussian-sigma` only) |
//! | `w2_sq_over_dev2` | `W2²/(σ − 1)²` (`gaussian-sigma` only) |
//! | `failures` | certificates that failed at this point |
//! | `slack_<id>` | slack of each requested bound, empty when skipped |

use crate::error::{CliError, Result};
use lsd_core::bounds::{battery::symmetric_mixture, certify_density, BoundOptions, Outcome};
use lsd_core::functionals::{reference_gaussian, relative_entropy, relative_fisher};
use lsd_core::transport::{transport_costs, CostFn};
use lsd_core::{Density, Density1D, Settings};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Below this a relative entropy in a denominator is treated as zero.
const RATIO_FLOOR: f64 = 1e-12;
const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// `N(0, σ²)`.
    GaussianSigma,
    /// `N(m, 1)`.
    GaussianShift,
    /// `½N(−g/2, 1) + ½N(g/2, 1)`.
    MixtureGap,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::GaussianSigma => "gaussian-sigma",
            Family::GaussianShift => "gaussian-shift",
            Family::MixtureGap => "mixture-gap",
        }
    }

    pub fn parameter(self) -> &'static str {
        match self {
            Family::GaussianSigma => "sigma",
            Family::GaussianShift => "shift",
            Family::MixtureGap => "gap",
        }
    }

    pub fn density(self, v: f64, settings: &Settings) -> lsd_core::Result<Density1D> {
        match self {
            Family::GaussianSigma => Density1D::gaussian_with(0.0, v * v, settings),
            Family::GaussianShift => Density1D::gaussian_with(v, 1.0, settings),
            Family::MixtureGap => symmetric_mixture(v, settings),
        }
    }
}

/// Parse `lo:hi:step` into the grid `lo, lo + step, …` up to `hi`.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("range `{s}`: {why}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(bad("expected lo:hi:step"));
    };
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if lo > hi {
        return Err(bad("lo exceeds hi"));
    }
    if step < 1e-9 {
        return Err(bad("step must be at least 1e-9"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if n > MAX_POINTS {
        return Err(bad("too many points"));
    }
    // rounding keeps 0.9 + 11 × 0.01 printing as 1.01
    Ok((0..n).map(|k| (1e12 * (lo + k as f64 * step)).round() / 1e12).collect())
}

/// Named columns, serialised as a JSON object in CSV order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Columns(pub Vec<(String, Vec<Option<f64>>)>);

impl Columns {
    pub fn get(&self, name: &str) -> Option<&[Option<f64>]> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

impl Serialize for Columns {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub grid_points: usize,
    pub support_radius: f64,
    pub plane_points: usize,
    pub tol: f64,
}

impl Metadata {
    pub fn new(settings: &Settings, tol: f64) -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            grid_points: settings.grid_points,
            support_radius: settings.support_radius,
            plane_points: settings.plane_points,
            tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: &'static str,
    pub parameter: &'static str,
    pub values: Vec<f64>,
    pub columns: Columns,
    pub metadata: Metadata,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den <= RATIO_FLOOR {
        0.0
    } else {
        num / den
    }
}

fn point(family: Family, v: f64, settings: &Settings, ids: &[&str], opts: &BoundOptions) -> Result<Vec<Option<f64>>> {
    let line = family.density(v, settings)?;
    let mu = Density::Line(line.clone());
    let gamma = reference_gaussian(&mu);
    let g = gamma.as_line().expect("reference of a line");
    let d = relative_entropy(&mu, &gamma)?.value;
    let i = relative_fisher(&mu, &gamma)?.value;
    let c = transport_costs(&line, g, &[CostFn::Sq, CostFn::Abs, CostFn::Delta])?;
    let (w2, w1, t) = (c[0].value, c[1].value, c[2].value);
    let m = line.mean();
    let (dc, w1c, tc) = if m == 0.0 {
        (d, w1, t)
    } else {
        let centred = line.shifted(-m);
        let cc = transport_costs(&centred, g, &[CostFn::Abs, CostFn::Delta])?;
        (relative_entropy(&Density::Line(centred), &gamma)?.value, cc[0].value, cc[1].value)
    };
    let deficit = 0.5 * i - d;
    let mut row = vec![
        Some(d),
        Some(i),
        Some(deficit),
        Some(w2),
        Some(w1),
        Some(t),
        Some(ratio(tc * tc, dc)),
        Some(ratio(w1c.powi(4), dc)),
    ];
    if family == Family::GaussianSigma {
        let dev2 = (v - 1.0) * (v - 1.0);
        let norm = |x: f64| (dev2 > 1e-24).then(|| x / dev2);
        row.push(norm(deficit));
        row.push(norm(w2));
    }
    let outcomes = certify_density(&mu, ids, opts);
    row.push(Some(outcomes.iter().filter(|o| !o.is_ok()).count() as f64));
    row.extend(outcomes.iter().map(|o| match o {
        Outcome::Certified(c) => Some(c.slack),
        _ => None,
    }));
    Ok(row)
}

pub fn column_names(family: Family, ids: &[&str]) -> Vec<String> {
    let mut names: Vec<String> =
        ["d", "i_rel", "deficit", "w2_sq", "w1", "t_delta", "t_delta_sq_over_d", "w1_4_over_d"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    if family == Family::GaussianSigma {
        names.push("deficit_over_dev2".into());
        names.push("w2_sq_over_dev2".into());
    }
    names.push("failures".into());
    names.extend(ids.iter().map(|id| format!("slack_{id}")));
    names
}

/// Evaluate every point of the sweep; points run in parallel and are
/// assembled in input order.
pub fn sweep(
    family: Family,
    values: &[f64],
    settings: &Settings,
    ids: &[&str],
    opts: &BoundOptions,
) -> Result<SweepReport> {
    if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(format!("sweep values must increase strictly ({} then {})", w[0], w[1])));
    }
    let rows: Vec<Vec<Option<f64>>> =
        values.par_iter().map(|v| point(family, *v, settings, ids, opts)).collect::<Result<_>>()?;
    let names = column_names(family, ids);
    let columns = names
        .into_iter()
        .enumerate()
        .map(|(k, name)| (name, rows.iter().map(|r| r[k]).collect()))
        .collect();
    Ok(SweepReport {
        family: family.id(),
        parameter: family.parameter(),
        values: values.to_vec(),
        columns: Columns(columns),
        metadata: Metadata::new(settings, opts.tol),
    })
}

impl SweepReport {
    /// Header row, then one row per value; skipped entries are empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(self.parameter);
        for (name, _) in &self.columns.0 {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (k, v) in self.values.iter().enumerate() {
            out.push_str(&num(*v));
            for (_, col) in &self.columns.0 {
                out.push(',');
                if let Some(x) = col[k] {
                    out.push_str(&num(x));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Same digits as the JSON output.
fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_default()
}

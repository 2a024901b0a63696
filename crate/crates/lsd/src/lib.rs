//! Command-line front end, file formats and reports for `lsd-core`.
//!
//! Densities are read from density-spec JSON files (see [`spec`]). Every
//! command writes deterministic output: JSON objects are emitted in a fixed
//! field order and numbers in shortest round-trip form.

pub mod cli;
pub mod commands;
pub mod error;
pub mod report;
pub mod spec;
pub mod sweep;

pub use error::{CliError, Result};

use cli::{Cli, Command, Format};
use std::path::Path;

/// Text for stdout, plus the error that decides the exit status when the
/// command produced output but did not fully succeed.
#[derive(Debug)]
pub struct Run {
    pub stdout: String,
    pub error: Option<CliError>,
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Output { path: path.to_path_buf(), source })
}

pub fn run(cli: &Cli) -> Result<Run> {
    let settings = cli.global.settings();
    if settings.grid_points < lsd_core::GridSpec::MIN_POINTS || settings.plane_points < lsd_core::GridSpec::MIN_POINTS {
        return Err(CliError::Usage(format!(
            "--grid-points and --plane-points must be at least {}",
            lsd_core::GridSpec::MIN_POINTS
        )));
    }
    if !(settings.support_radius > 0.0 && settings.support_radius.is_finite()) {
        return Err(CliError::Usage("--support-radius must be positive".into()));
    }
    let tol = cli.global.tol;
    match &cli.command {
        Command::Distance { dist, metric, reference } => {
            Ok(Run { stdout: commands::cmd_distance(dist, *metric, reference, &settings)?, error: None })
        }
        Command::Certify { dist, bounds } => {
            let ids = commands::resolve_bounds(&bounds.bounds)?;
            let opts = commands::bound_options(bounds, tol, &settings)?;
            let mu = spec::load(dist, &settings)?;
            let r = commands::certify(&mu, &ids, &opts);
            let error = (r.counts.fail > 0).then_some(CliError::Failures(r.counts.fail, ids.len()));
            Ok(Run { stdout: commands::to_json(&r)?, error })
        }
        Command::Sweep { family, range, out, format, bounds } => {
            let ids = commands::resolve_bounds(&bounds.bounds)?;
            let opts = commands::bound_options(bounds, tol, &settings)?;
            let values = sweep::parse_range(range)?;
            let r = sweep::sweep(*family, &values, &settings, &ids, &opts)?;
            let text = match format {
                Format::Json => commands::to_json(&r)?,
                Format::Csv => r.to_csv(),
            };
            write(out, &text)?;
            Ok(Run { stdout: String::new(), error: None })
        }
        Command::Report { suite, out, bounds } => {
            let ids = commands::resolve_bounds(&bounds.bounds)?;
            let opts = commands::bound_options(bounds, tol, &settings)?;
            let members = report::load_suite(suite, &settings)?;
            let r = report::report(suite, &members, &ids, &opts, &settings);
            write(out, &commands::to_json(&r)?)?;
            let total = r.entries.len();
            let error = (r.counts.fail > 0).then_some(CliError::Failures(r.counts.fail, total));
            Ok(Run { stdout: String::new(), error })
        }
    }
}

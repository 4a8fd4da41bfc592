use rayon::prelude::*;

use thetaflow::ledger::output::write_table;

use super::ensure_dir;
use super::run::execute;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::Status;

/// Environment variable capping the number of concurrent cells.
pub const THREADS_VAR: &str = "THETAFLOW_THREADS";

/// One axis of a sweep: a configuration key and its values.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<String>,
}

/// Parses `key=v1,v2;key2=w1,w2`.
pub fn parse_grid(spec: &str) -> Result<Vec<Axis>> {
    let mut axes: Vec<Axis> = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| CliError::Grid(format!("expected 'key=v1,v2,...', got '{part}'")))?;
        let key = key.trim().to_string();
        if key == "output" {
            return Err(CliError::Grid("output cannot be swept".into()));
        }
        if axes.iter().any(|a| a.key == key) {
            return Err(CliError::Grid(format!("'{key}' appears twice")));
        }
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(CliError::Grid(format!("empty value for '{key}'")));
        }
        axes.push(Axis { key, values });
    }
    if axes.is_empty() {
        return Err(CliError::Grid("no axes given".into()));
    }
    Ok(axes)
}

/// Cartesian product of the axes, first axis slowest. Each cell lists its
/// `(key, value)` assignments.
pub fn cells(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    let mut out: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut cell = prefix.clone();
                    cell.push((axis.key.clone(), v.clone()));
                    cell
                })
            })
            .collect();
    }
    out
}

/// Cell configurations, each writing to `<output>/cell-NNN`.
pub fn cell_configs(base: &RunConfig, axes: &[Axis]) -> Result<Vec<(Vec<(String, String)>, RunConfig)>> {
    cells(axes)
        .into_iter()
        .enumerate()
        .map(|(idx, assignments)| {
            let mut cfg = base.clone();
            for (k, v) in &assignments {
                cfg.set(k, v).map_err(|m| CliError::Grid(format!("{k}={v}: {m}")))?;
            }
            cfg.output = base.output.join(format!("cell-{idx:03}"));
            cfg.validate()
                .map_err(|e| CliError::Grid(format!("cell {idx}: {e}")))?;
            Ok((assignments, cfg))
        })
        .collect()
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Invalid(format!("{THREADS_VAR} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs every cell in a work pool and writes `summary.csv`. Blowups are
/// reported per cell; a cell that fails to run makes the sweep exit 1.
pub fn cmd_sweep(base: &RunConfig, grid: &str) -> Result<Status> {
    let configs = cell_configs(base, &parse_grid(grid)?)?;
    ensure_dir(&base.output)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| configs.par_iter().map(|(_, cfg)| execute(cfg)).collect());

    let mut rows = Vec::new();
    let mut failed = false;
    for (idx, ((assignments, cfg), res)) in configs.iter().zip(results).enumerate() {
        let label = assignments
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let row = match res {
            Ok(r) => vec![
                format!("{idx:03}"),
                label,
                format!("{:e}", r.e0),
                format!("{:e}", r.max_e),
                format!("{:e}", r.continuity_c),
                r.exit_reason(),
            ],
            Err(e) => {
                failed = true;
                vec![format!("{idx:03}"), label, String::new(), String::new(), String::new(), format!("error: {e}")]
            }
        };
        println!("cell {} [{}] {}: {}", row[0], cfg.output.display(), row[1], row[5]);
        rows.push(row);
    }
    write_table(
        &base.output.join("summary.csv"),
        "summary",
        &["cell", "assignments", "e0", "max_e", "continuity_c", "exit"],
        &rows,
    )?;
    Ok(if failed { Status::Invalid } else { Status::Ok })
}

//! Batch driver: configuration, subcommands and reproducible output.

// negated float comparisons reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod record;

use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use config::RunConfig;
use error::{CliError, CliResult};
use output::write_atomic;
use record::{sha256_hex, OutputEntry, RunRecord};

/// Run `config`, write its tables and `run_record.json` into `out`, and
/// check the manifest against the files on disk. `threads = 0` uses all cores.
pub fn run(config: &RunConfig, out: &Path, threads: usize) -> CliResult<RunRecord> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let tables = pool.install(|| commands::execute(config))?;

    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut outputs = Vec::with_capacity(tables.len());
    for table in &tables {
        let text = table.to_csv();
        write_atomic(&out.join(&table.name), text.as_bytes())?;
        outputs.push(OutputEntry { file: table.name.clone(), bytes: text.len() as u64, sha256: sha256_hex(text.as_bytes()) });
    }
    let record = RunRecord {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        threads: pool.current_num_threads(),
        started_unix_seconds: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        outputs,
    };
    record.write(out)?;
    record.verify(out)?;
    Ok(record)
}

//! Command-line front end: parses flags, runs the Monte Carlo sweep (in
//! parallel if asked), writes the CSV and prints a short summary with the
//! resolved availability probabilities and high-SNR slope estimates.

use std::io::Write;

use anyhow::Context;
use clap::Parser;
use rayon::prelude::*;

use multiway_core::simulate::{
    assemble, estimate_slope, run_trial, SimConfig, SweepResult, TrialOutcome,
};

pub mod args;
pub mod csv;

use args::{build_sim_config, Cli, TauSource};

/// Slope estimates in the summary use this SNR window (dB).
const SLOPE_WINDOW_DB: (f64, f64) = (40.0, 60.0);

/// Run all trials, serially or on a worker pool. Outcomes are keyed by trial
/// index either way, so the assembled result does not depend on `threads`.
pub fn run_trials(sc: &SimConfig, threads: usize) -> anyhow::Result<Vec<TrialOutcome>> {
    if threads == 1 {
        return (0..sc.trials as u64)
            .map(|t| run_trial(sc, t))
            .collect::<multiway_core::Result<_>>()
            .context("trial failed");
    }
    let body = || {
        (0..sc.trials as u64)
            .into_par_iter()
            .map(|t| run_trial(sc, t))
            .collect::<multiway_core::Result<Vec<_>>>()
    };
    let outcomes = if threads == 0 {
        body()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("could not build the worker pool")?;
        pool.install(body)
    };
    outcomes.context("trial failed")
}

fn print_summary<W: Write>(
    mut sink: W,
    sc: &SimConfig,
    sources: &[TauSource],
    res: &SweepResult,
) -> std::io::Result<()> {
    let taus: Vec<String> = {
        let mut sorted = sc.taus.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.iter().map(|&t| csv::sig6(t)).collect()
    };
    writeln!(sink, "# taus: {}", taus.join(" "))?;
    for s in sources {
        if let Some((env, angle)) = s.env {
            writeln!(
                sink,
                "# env {}: elevation {} deg, tau {}",
                env.token(),
                csv::sig6(angle),
                csv::sig6(s.tau)
            )?;
        }
    }
    if res.resamples > 0 {
        writeln!(sink, "# resampled degenerate draws: {}", res.resamples)?;
    }

    // Per-(scheme, tau) slope over the window, when the grid covers it.
    let (lo, hi) = SLOPE_WINDOW_DB;
    let mut schemes: Vec<_> = sc.schemes.clone();
    schemes.sort_by_key(|s| s.token());
    let mut taus_sorted = sc.taus.clone();
    taus_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for scheme in schemes {
        for &tau in &taus_sorted {
            let mut snrs = Vec::new();
            let mut means = Vec::new();
            for r in &res.records {
                if r.scheme == scheme && r.tau == tau && r.snr_db >= lo && r.snr_db <= hi {
                    snrs.push(r.snr_db);
                    means.push(r.mean);
                }
            }
            if snrs.len() < 2 {
                continue;
            }
            let n = snrs.len();
            if let Ok(slope) = estimate_slope(&snrs, &means, 0..n) {
                writeln!(
                    sink,
                    "# slope {}-{} dB {} tau {}: {}",
                    lo,
                    hi,
                    scheme.token(),
                    csv::sig6(tau),
                    csv::sig6(slope)
                )?;
            }
        }
    }
    Ok(())
}

/// Parse, sweep, emit. Exit codes: 0 success, 2 bad usage or config, 3 I/O
/// or numerical failure.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; they are not usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (sc, sources) = match build_sim_config(&cli) {
        Ok(built) => built,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let res = match run_trials(&sc, cli.threads).and_then(|outcomes| {
        assemble(&sc, &outcomes).context("aggregation failed")
    }) {
        Ok(res) => res,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 3;
        }
    };

    let stdout = std::io::stdout();
    let io_result = match &cli.out {
        Some(path) => std::fs::File::create(path)
            .and_then(|f| csv::write_csv(&res, std::io::BufWriter::new(f)))
            .and_then(|()| print_summary(stdout.lock(), &sc, &sources, &res)),
        None => {
            let mut lock = stdout.lock();
            csv::write_csv(&res, &mut lock)
                .and_then(|()| print_summary(&mut lock, &sc, &sources, &res))
        }
    };
    match io_result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

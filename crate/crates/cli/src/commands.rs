//! The five batch commands. Each consumes a parsed [`Config`], runs a
//! pipeline from the core library, writes CSV (when the command produces
//! rows) and prints a one-paragraph summary to standard output.
//!
//! Exit codes: 0 success, 1 config error (surfaced as `Err`), 2 invariant
//! violation, 3 truncation or Monte Carlo abort.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use smm_core::degree::{build_categorical, DegreeDistribution};
use smm_core::events::{
    chain_lower, mc_estimate, required_chain_window, run_chain_trial_rng, ChainParams, EventKind,
    EventReport, EventSpec,
};
use smm_core::graph::{components, strong_pairs, ComponentReport};
use smm_core::matching::{greedy_reference, naive_round_oracle, run_to_completion, Matching};
use smm_core::point_process::{sample_poisson_rng, PointConfiguration, Window};
use smm_core::{rng_from_seed, trial_rng, Error, Result};

use crate::config::{parse_masses, Config};

/// Round cap handed to the engine when the config does not set one: high
/// enough that only an explicit `max_rounds` key ever truncates.
const UNCAPPED: u32 = u32::MAX;

/// Guard cap for the reference engines in `oracle-check`.
const ORACLE_CAP: u32 = 1_000_000;

fn sample_instance(
    window: Window<f64>,
    intensity: f64,
    law: &DegreeDistribution,
    seed: u64,
) -> Result<PointConfiguration<f64>> {
    let mut rng = rng_from_seed(seed);
    let config = sample_poisson_rng(window, intensity, &mut rng)?;
    smm_core::degree::sample_degrees_rng(law, &config, &mut rng, None)
}

/// Writes via a `.tmp` sibling and a rename, so the target is never partial.
fn write_atomic(path: &str, contents: &[u8]) -> Result<()> {
    let tmp = PathBuf::from(format!("{path}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Compact one-token label for a degree law: `deg:mass` atoms joined by `|`.
fn law_label(law: &DegreeDistribution) -> String {
    law.support()
        .iter()
        .zip(law.masses())
        .map(|(d, m)| format!("{d}:{m}"))
        .collect::<Vec<_>>()
        .join("|")
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Strongly connected interior pairs that the finished matching failed to
/// join; each one is reported on standard error.
fn strong_violations(matching: &Matching<f64>, seed: u64) -> Result<u64> {
    let mut violations = 0;
    for (i, j) in strong_pairs(matching.config(), None)? {
        if !matching.contains_edge(i, j) {
            eprintln!("seed {seed}: strongly connected pair ({i}, {j}) left unmatched");
            violations += 1;
        }
    }
    Ok(violations)
}

pub fn simulate(mut cfg: Config) -> Result<i32> {
    let window = cfg.window()?;
    let intensity = cfg.get_f64("intensity")?.unwrap_or(1.0);
    let law = cfg.require_distribution()?;
    let base_seed = cfg.get_u64("seed")?.unwrap_or(0);
    let seeds = cfg.get_u64("seeds")?.unwrap_or(1);
    let max_rounds = cfg.get_u32("max_rounds")?.unwrap_or(UNCAPPED);
    let strong_check = cfg.get_bool("strong_check")?.unwrap_or(true);
    let out = cfg.require_string("out")?;
    cfg.finish()?;
    if seeds == 0 {
        return Err(Error::invalid("seeds must be at least 1"));
    }

    let mut buf = Vec::new();
    writeln!(buf, "{}", ComponentReport::CSV_HEADER)?;
    let mut truncated = 0u64;
    let mut violations = 0u64;
    let mut spanning = 0u64;
    let mut fractions = Vec::new();
    for k in 0..seeds {
        let seed = base_seed + k;
        let config = sample_instance(window, intensity, &law, seed)?;
        let matching = run_to_completion(config, Some(max_rounds))?;
        if matching.truncated() {
            eprintln!("seed {seed}: hit max_rounds = {max_rounds} before termination");
            truncated += 1;
        } else if strong_check {
            violations += strong_violations(&matching, seed)?;
        }
        let report = components(&matching);
        spanning += report.spans as u64;
        fractions.push(report.largest_fraction);
        report.write_csv_row(&mut buf, seed)?;
    }
    write_atomic(&out, &buf)?;

    println!(
        "simulate: {seeds} runs, window length {}, law {}; spanning {spanning}/{seeds}; \
         largest fraction mean {:.4}, min {:.4}, max {:.4}; rows -> {out}",
        window.length(),
        law_label(&law),
        mean(&fractions),
        fractions.iter().cloned().fold(f64::INFINITY, f64::min),
        fractions.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    if violations > 0 {
        eprintln!("simulate: {violations} strong-connection violations");
        return Ok(2);
    }
    if truncated > 0 {
        eprintln!("simulate: {truncated} of {seeds} runs truncated");
        return Ok(3);
    }
    Ok(0)
}

pub fn oracle_check(mut cfg: Config) -> Result<i32> {
    let window = cfg.window()?;
    let intensity = cfg.get_f64("intensity")?.unwrap_or(1.0);
    let law = cfg.require_distribution()?;
    let base_seed = cfg.get_u64("seed")?.unwrap_or(0);
    let instances = cfg.get_u64("instances")?.unwrap_or(1000);
    cfg.finish()?;
    if instances == 0 {
        return Err(Error::invalid("instances must be at least 1"));
    }

    let mut largest = 0usize;
    let mut most_rounds = 0u32;
    for k in 0..instances {
        let seed = base_seed + k;
        let config = sample_instance(window, intensity, &law, seed)?;
        largest = largest.max(config.len());
        let engine = run_to_completion(config.clone(), Some(ORACLE_CAP))?;
        let oracle = naive_round_oracle(config.clone(), Some(ORACLE_CAP))?;
        let greedy = greedy_reference(config)?;
        engine.verify_stable()?;
        most_rounds = most_rounds.max(engine.rounds_run());

        let labeled = |m: &Matching<f64>| {
            m.edges().iter().map(|e| (e.a, e.b, e.round)).collect::<Vec<_>>()
        };
        let agree = labeled(&engine) == labeled(&oracle)
            && engine.rounds_run() == oracle.rounds_run()
            && engine.leftover() == oracle.leftover()
            && engine.edge_id_set() == greedy.edge_id_set()
            && engine.leftover() == greedy.leftover();
        if !agree {
            eprintln!("seed {seed}: the three engines disagree");
            return Ok(2);
        }
    }
    println!(
        "oracle-check: {instances} instances agree across all three engines \
         (largest n {largest}, most rounds {most_rounds})"
    );
    Ok(0)
}

fn parse_event_kind(cfg: &mut Config) -> Result<EventKind> {
    let text = cfg.require_string("event.kind")?;
    match text.as_str() {
        "F" => Ok(EventKind::F),
        "A_failure" => Ok(EventKind::AFailure),
        "B_failure" => Ok(EventKind::BFailure),
        "C_failure" => Ok(EventKind::CFailure),
        "D_given_F" => Ok(EventKind::DGivenF),
        _ => Err(Error::invalid(format!(
            "event.kind: expected F, A_failure, B_failure, C_failure or D_given_F, got {text:?}"
        ))),
    }
}

pub fn event(mut cfg: Config) -> Result<i32> {
    let kind = parse_event_kind(&mut cfg)?;
    let i = cfg.require_u32("event.i")?;
    let shift = cfg.get_u32("event.parity_shift")?.unwrap_or(0);
    let params = ChainParams::new(i, shift)?;
    let spec = match cfg.distribution()? {
        Some(law) => EventSpec { kind, law },
        None => EventSpec::with_default_law(kind, &params)?,
    };
    let trials = cfg.require_u64("trials")?;
    let seed = cfg.get_u64("seed")?.unwrap_or(0);
    let out = cfg.require_string("out")?;
    cfg.finish()?;

    let report = mc_estimate(&spec, &params, trials, seed)?;
    let mut buf = Vec::new();
    writeln!(buf, "{}", EventReport::CSV_HEADER)?;
    report.write_csv_row(&mut buf)?;
    write_atomic(&out, &buf)?;
    println!(
        "event {} at stage {}: estimate {:.6} (SE {:.2e}) against {} {:.6}, \
         {} of {} trials; row -> {out}",
        report.event,
        report.i,
        report.estimate,
        report.std_error,
        report.bound_kind,
        report.analytic,
        report.successes,
        report.trials,
    );
    Ok(0)
}

pub fn chain(mut cfg: Config) -> Result<i32> {
    let i0 = cfg.require_u32("chain.i0")?;
    let i_max = cfg.require_u32("chain.i_max")?;
    let shift = cfg.get_u32("chain.parity_shift")?.unwrap_or(0);
    let required = required_chain_window(i0, i_max, shift)?;
    let window_length = cfg.get_f64("chain.window_length")?.unwrap_or(required);
    if window_length < required {
        return Err(Error::invalid(format!(
            "chain.window_length = {window_length} is below the derived minimum {required}"
        )));
    }
    let trials = cfg.require_u64("trials")?;
    let seed = cfg.get_u64("seed")?.unwrap_or(0);
    let out = cfg.require_string("out")?;
    cfg.finish()?;
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }

    let mut buf = Vec::new();
    writeln!(buf, "trial,i,a,b,c,d")?;
    let mut successes = 0u64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let outcome = run_chain_trial_rng(i0, i_max, shift, window_length, &mut rng)?;
        successes += outcome.full_success as u64;
        for s in &outcome.stages {
            writeln!(
                buf,
                "{t},{},{},{},{},{}",
                s.i, s.a as u8, s.b as u8, s.c as u8, s.d as u8
            )?;
        }
    }
    write_atomic(&out, &buf)?;

    let fraction = successes as f64 / trials as f64;
    println!(
        "chain stages {i0}..={i_max} (window {window_length}): {successes}/{trials} \
         full successes ({fraction:.4}); analytic lower bound {:.4}; rows -> {out}",
        chain_lower(i0),
    );
    Ok(0)
}

/// One sweep cell: a degree law (by label) and a window length.
struct SweepGrid {
    laws: Vec<(String, DegreeDistribution)>,
    lengths: Vec<f64>,
}

fn sweep_grid(cfg: &mut Config) -> Result<SweepGrid> {
    let lengths = cfg.require_f64_list("sweep.lengths")?;
    let mut laws = Vec::new();
    if let Some((text, line)) = cfg.get_with_line("sweep.masses") {
        for entry in text.split(';') {
            let atoms = parse_masses("sweep.masses", entry, line)?;
            let law = build_categorical(&atoms)
                .map_err(|e| Error::parse(line, format!("sweep.masses: {e}")))?;
            laws.push((law_label(&law), law));
        }
    } else if let Some(law) = cfg.distribution()? {
        laws.push((law_label(&law), law));
    } else {
        return Err(Error::invalid(
            "missing required key 'sweep.masses' (or a distribution.* block)",
        ));
    }
    Ok(SweepGrid { laws, lengths })
}

/// Reads rows of a previous (possibly interrupted) sweep, keyed by
/// `(distribution, length, seed)`. Rows that do not fit the schema — e.g. a
/// line cut short by an interruption — are dropped and recomputed.
fn read_existing_rows(path: &str, header: &str) -> Result<BTreeMap<(String, String, String), String>> {
    let mut rows = BTreeMap::new();
    if !Path::new(path).exists() {
        return Ok(rows);
    }
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        None => return Ok(rows),
        Some(h) if h == header => {}
        Some(h) => {
            return Err(Error::invalid(format!(
                "{path} starts with {h:?}, expected the sweep schema {header:?}; \
                 refusing to overwrite"
            )))
        }
    }
    let want_fields = header.split(',').count();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != want_fields {
            continue;
        }
        let key = (fields[0].to_owned(), fields[1].to_owned(), fields[2].to_owned());
        rows.insert(key, line.to_owned());
    }
    Ok(rows)
}

pub fn sweep(mut cfg: Config) -> Result<i32> {
    let boundary = cfg.boundary()?;
    let grid = sweep_grid(&mut cfg)?;
    let intensity = cfg.get_f64("intensity")?.unwrap_or(1.0);
    let base_seed = cfg.get_u64("seed")?.unwrap_or(0);
    let seeds = cfg.get_u64("seeds")?.unwrap_or(1);
    let max_rounds = cfg.get_u32("max_rounds")?.unwrap_or(UNCAPPED);
    let strong_check = cfg.get_bool("strong_check")?.unwrap_or(false);
    let out = cfg.require_string("out")?;
    cfg.finish()?;
    if seeds == 0 {
        return Err(Error::invalid("seeds must be at least 1"));
    }

    let header = format!("distribution,length,{}", ComponentReport::CSV_HEADER);
    let existing = read_existing_rows(&out, &header)?;

    // stream rows in canonical (law, length, seed) order straight to the
    // final file; an interrupted run leaves a complete prefix that the next
    // run picks up via `existing`
    let mut file = std::io::BufWriter::new(fs::File::create(&out)?);
    writeln!(file, "{header}")?;
    let mut reused = 0u64;
    let mut computed = 0u64;
    let mut violations = 0u64;
    let mut summary: Vec<(String, String, u64, Vec<f64>)> = Vec::new();
    for (label, law) in &grid.laws {
        for &length in &grid.lengths {
            let length_text = format!("{length}");
            let margin = match boundary {
                smm_core::point_process::Boundary::Open => 0.05 * length,
                smm_core::point_process::Boundary::Torus => 0.0,
            };
            let window = Window::new(length, boundary, margin)?;
            let mut spanning = 0u64;
            let mut fractions = Vec::new();
            for k in 0..seeds {
                let seed = base_seed + k;
                let key = (label.clone(), length_text.clone(), seed.to_string());
                let row = match existing.get(&key) {
                    Some(row) => {
                        reused += 1;
                        row.clone()
                    }
                    None => {
                        let config = sample_instance(window, intensity, law, seed)?;
                        let matching = run_to_completion(config, Some(max_rounds))?;
                        if matching.truncated() {
                            eprintln!(
                                "cell ({label}, {length_text}, {seed}): hit max_rounds = \
                                 {max_rounds}; aborting the sweep"
                            );
                            file.flush()?;
                            return Ok(3);
                        }
                        if strong_check {
                            violations += strong_violations(&matching, seed)?;
                        }
                        let report = components(&matching);
                        let mut line = Vec::new();
                        report.write_csv_row(&mut line, seed)?;
                        computed += 1;
                        format!("{label},{length_text},{}", String::from_utf8_lossy(&line).trim_end())
                    }
                };
                // spans and largest_fraction are the two rightmost columns
                let fields: Vec<&str> = row.split(',').collect();
                spanning += u64::from(fields[fields.len() - 1] == "1");
                if let Ok(f) = fields[fields.len() - 2].parse::<f64>() {
                    fractions.push(f);
                }
                writeln!(file, "{row}")?;
                file.flush()?;
            }
            summary.push((label.clone(), length_text, spanning, fractions));
        }
    }
    file.flush()?;

    println!(
        "sweep: {} cells -> {out} ({computed} computed, {reused} reused)",
        computed + reused
    );
    for (label, length, spanning, fractions) in &summary {
        println!(
            "  law {label}, length {length}: spanning {spanning}/{seeds}, \
             largest fraction mean {:.4}",
            mean(fractions)
        );
    }
    if violations > 0 {
        eprintln!("sweep: {violations} strong-connection violations");
        return Ok(2);
    }
    Ok(0)
}

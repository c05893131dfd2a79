//! End-to-end checks of the `smm` binary: config diagnostics, exit codes,
//! deterministic output, and sweep resumability.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_smm")
}

/// Fresh scratch directory per test so runs cannot collide.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smm-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn unknown_key_is_named_with_its_line() {
    let dir = scratch("unknown-key");
    let cfg = dir.join("bad.cfg");
    write(
        &cfg,
        "window.length = 100\ndistribution.kind = constant\ndistribution.value = 2\n\
         out = x.csv\nwindow.lenght = 5\n",
    );
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("unknown key 'window.lenght'"), "{err}");
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn duplicate_key_is_rejected() {
    let dir = scratch("dup-key");
    let cfg = dir.join("dup.cfg");
    write(&cfg, "seed = 1\nseed = 2\n");
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("duplicate key 'seed'"));
}

#[test]
fn missing_required_key_is_named() {
    let dir = scratch("missing-key");
    let cfg = dir.join("m.cfg");
    write(&cfg, "window.length = 100\nout = x.csv\n");
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("distribution.kind"));
}

#[test]
fn bad_masses_name_the_key() {
    let dir = scratch("bad-masses");
    let cfg = dir.join("m.cfg");
    write(
        &cfg,
        "window.length = 100\ndistribution.kind = categorical\n\
         distribution.masses = 1:0.5,2:0.4\nout = x.csv\n",
    );
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("distribution.masses"));
}

#[test]
fn short_chain_window_cites_the_derived_minimum() {
    let dir = scratch("short-chain");
    let cfg = dir.join("c.cfg");
    write(
        &cfg,
        "chain.i0 = 1\nchain.i_max = 2\nchain.window_length = 100\ntrials = 1\nout = c.csv\n",
    );
    let out = run(&["chain", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("below the derived minimum 208"), "{err}");
}

#[test]
fn empty_sweep_list_is_a_diagnostic() {
    let dir = scratch("empty-sweep");
    let cfg = dir.join("s.cfg");
    write(
        &cfg,
        "sweep.lengths = ,\ndistribution.kind = constant\ndistribution.value = 2\nout = s.csv\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("sweep.lengths"));
}

#[test]
fn unreadable_config_exits_1() {
    let out = run(&["simulate", "--config", "/nonexistent/nowhere.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("cannot read config"));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let out = run(&["simulate"]); // missing --config
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("smm"));
}

#[test]
fn simulate_is_deterministic_and_seed_override_changes_rows() {
    let dir = scratch("sim-det");
    let cfg = dir.join("sim.cfg");
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    let out_c = dir.join("c.csv");
    write(
        &cfg,
        "window.length = 300\ndistribution.kind = categorical\n\
         distribution.masses = 1:0.5,2:0.5\nseed = 4\nseeds = 4\nout = placeholder\n",
    );
    for out_path in [&out_a, &out_b] {
        let out = run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    }
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());

    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        out_c.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(fs::read(&out_a).unwrap(), fs::read(&out_c).unwrap());

    let text = fs::read_to_string(&out_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,n,n_edges,leftover_total,n_components,largest_size,largest_fraction,spans"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn simulate_truncation_exits_3() {
    let dir = scratch("sim-trunc");
    let cfg = dir.join("t.cfg");
    write(
        &cfg,
        "window.length = 300\ndistribution.kind = constant\ndistribution.value = 2\n\
         max_rounds = 1\nseed = 0\nout = t.csv\n",
    );
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("t.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("max_rounds"));
}

#[test]
fn oracle_check_agrees_on_small_instances() {
    let dir = scratch("oracle");
    let cfg = dir.join("o.cfg");
    write(
        &cfg,
        "window.length = 50\ndistribution.kind = categorical\n\
         distribution.masses = 1:0.4,2:0.4,4:0.2\ninstances = 40\nseed = 21\n",
    );
    let out = run(&["oracle-check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("40 instances agree"));
}

#[test]
fn event_rows_are_deterministic() {
    let dir = scratch("event");
    let cfg = dir.join("e.cfg");
    let out_csv = dir.join("e.csv");
    write(&cfg, "event.kind = F\nevent.i = 1\ntrials = 500\nseed = 2\nout = placeholder\n");
    let mut bytes = Vec::new();
    for _ in 0..2 {
        let out = run(&[
            "event",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
        bytes.push(fs::read(&out_csv).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let text = String::from_utf8(bytes[0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "event,i,trials,successes,estimate,stderr,analytic,bound_kind");
    let row = lines.next().unwrap();
    assert!(row.starts_with("F,1,500,"), "{row}");
    assert_eq!(lines.next(), None);
}

#[test]
fn chain_rows_carry_stage_outcomes() {
    let dir = scratch("chain");
    let cfg = dir.join("c.cfg");
    let out_csv = dir.join("c.csv");
    write(&cfg, "chain.i0 = 1\nchain.i_max = 2\ntrials = 10\nseed = 8\nout = placeholder\n");
    let out = run(&[
        "chain",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = fs::read_to_string(&out_csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "trial,i,a,b,c,d");
    let mut trials_seen = std::collections::BTreeSet::new();
    for row in lines {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6, "{row}");
        let trial: u64 = fields[0].parse().unwrap();
        assert!(trial < 10);
        trials_seen.insert(trial);
        for flag in &fields[2..] {
            assert!(*flag == "0" || *flag == "1", "{row}");
        }
    }
    // every trial reports at least its first stage
    assert_eq!(trials_seen.len(), 10);
}

#[test]
fn sweep_resumes_from_a_cut_file_and_reuses_complete_ones() {
    let dir = scratch("sweep-resume");
    let cfg = dir.join("s.cfg");
    let out_csv = dir.join("s.csv");
    write(
        &cfg,
        "sweep.lengths = 150,250\nsweep.masses = 1:0.5,2:0.5 ; 2:1\nseeds = 3\nseed = 5\n\
         out = placeholder\n",
    );
    let args = [
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ];

    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("12 computed, 0 reused"));
    let full = fs::read(&out_csv).unwrap();

    // a rerun reuses every cell and reproduces the bytes
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("0 computed, 12 reused"), "{}", stdout_of(&out));
    assert_eq!(fs::read(&out_csv).unwrap(), full);

    // simulate an interruption: keep the header, four complete rows and one
    // cut-off row; the rerun must drop the partial row, recompute the rest
    // and restore the identical file
    let text = String::from_utf8(full.clone()).unwrap();
    let keep: Vec<&str> = text.lines().take(5).collect();
    let partial = &text.lines().nth(5).unwrap()[..10];
    fs::write(&out_csv, format!("{}\n{partial}", keep.join("\n"))).unwrap();

    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("8 computed, 4 reused"), "{}", stdout_of(&out));
    assert_eq!(fs::read(&out_csv).unwrap(), full);
}

#[test]
fn sweep_refuses_a_foreign_output_file() {
    let dir = scratch("sweep-foreign");
    let cfg = dir.join("s.cfg");
    let out_csv = dir.join("s.csv");
    write(
        &cfg,
        "sweep.lengths = 150\ndistribution.kind = constant\ndistribution.value = 2\n\
         seeds = 1\nout = placeholder\n",
    );
    fs::write(&out_csv, "totally,different,schema\n1,2,3\n").unwrap();
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("refusing"));
}

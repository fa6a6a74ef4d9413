use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use ddikge_cli::commands::{
    cmd_eval, cmd_export, cmd_ingest, cmd_synth, cmd_train, import_model, CHECKPOINT_FILE,
    ENTITIES_CSV, EPOCHS_FILE, RELATIONS_CSV, RESOLVED_CONFIG,
};
use ddikge_cli::{EvalArgs, ExportArgs, IngestArgs, SynthArgs, Task, TrainArgs};
use ddikge_core::evalkit::TaskMetrics;
use ddikge_core::scorers::read_checkpoint;
use ddikge_core::{RngStream, Triplet};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_ddikge"))
}

fn ingest_args(tsv: &Path, out: &Path) -> IngestArgs {
    IngestArgs {
        tsv: tsv.into(),
        out: out.into(),
        header: false,
        seed: 0,
        split_by_pair: false,
        valid_ratio: 0.1,
        test_ratio: 0.1,
    }
}

fn synth_args(out: &Path, seed: u64) -> SynthArgs {
    SynthArgs {
        out: out.into(),
        entities: 50,
        relations: 5,
        clusters: 4,
        density: 0.3,
        noise: 0.0,
        seed,
    }
}

/// Synthetic graph ingested into `<root>/data`.
fn dataset(root: &Path) -> PathBuf {
    let tsv = root.join("kg.tsv");
    cmd_synth(&synth_args(&tsv, 3)).unwrap();
    let data = root.join("data");
    cmd_ingest(&ingest_args(&tsv, &data)).unwrap();
    data
}

fn config(root: &Path, name: &str, body: &str) -> PathBuf {
    let path = root.join(name);
    fs::write(
        &path,
        format!("data_dir = \"data\"\noutput_dir = \"{name}.out\"\n{body}"),
    )
    .unwrap();
    path
}

fn train_args(config: &Path, sets: &[&str]) -> TrainArgs {
    TrainArgs {
        config: config.into(),
        overrides: sets.iter().map(|s| s.to_string()).collect(),
        quiet: true,
    }
}

#[test]
fn ingest_three_lines() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("three.tsv");
    fs::write(&tsv, "a\tinc\tb\nb\tdec\tc\nc\tinc\ta\n").unwrap();
    let s = cmd_ingest(&ingest_args(&tsv, &dir.path().join("out"))).unwrap();
    assert_eq!((s.triplets, s.duplicates), (3, 0));
    assert!(s.report.contains("triplets    3"));
    assert!(s.report.contains("duplicates  0"));
    for f in [
        "entities.tsv",
        "relations.tsv",
        "triplets.tsv",
        "train.tsv",
        "split.manifest",
        "ingest_report.txt",
    ] {
        assert!(dir.path().join("out").join(f).is_file(), "{f}");
    }
}

#[test]
fn ingest_deepddi_shaped_input() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("deepddi.tsv");
    let (drugs, types) = (1710usize, 86usize);
    let mut text = String::with_capacity(192_284 * 32);
    for k in 0..192_284usize {
        let h = k % drugs;
        let r = (k / drugs) % types;
        let t = (h + 1 + k / (drugs * types)) % drugs;
        text.push_str(&format!("DB{h:05}\tDDI_{r}\tDB{t:05}\n"));
    }
    fs::write(&tsv, text).unwrap();
    let s = cmd_ingest(&ingest_args(&tsv, &dir.path().join("out"))).unwrap();
    assert_eq!((s.manifest.entities, s.manifest.relations), (1710, 86));
    assert_eq!(
        (s.manifest.train, s.manifest.valid, s.manifest.test),
        (153_828, 19_228, 19_228)
    );
    assert!(s.report.contains("entities    1710"));
    assert!(s.report.contains("relations   86"));
}

#[test]
fn ingest_counts_duplicates_and_reports_parse_lines() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("dup.tsv");
    fs::write(&tsv, "a\tr\tb\r\na\tr\tb\r\n\r\nb\tr\tc\r\nc\tr\ta\n").unwrap();
    let s = cmd_ingest(&ingest_args(&tsv, &dir.path().join("o"))).unwrap();
    assert_eq!((s.triplets, s.duplicates), (3, 1));

    fs::write(&tsv, "a\tr\tb\nbroken line\n").unwrap();
    let out = bin()
        .arg("ingest")
        .arg(&tsv)
        .arg("--out")
        .arg(dir.path().join("p"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn unreadable_path_exits_two_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.tsv");
    let out = bin()
        .arg("ingest")
        .arg(&missing)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.tsv"));
}

#[test]
fn invalid_config_key_exits_two_before_training() {
    let dir = tempfile::tempdir().unwrap();
    dataset(dir.path());
    let cfg = config(dir.path(), "bad", "learning_rate = 0.1\n");
    let out = bin()
        .arg("train")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("learning_rate"));
    assert!(!dir.path().join("bad.out").exists());

    let out = bin()
        .args(["train", "--config"])
        .arg(&cfg)
        .args(["--set", "scorer=quantum"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn train_writes_all_artifacts_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    dataset(dir.path());
    let cfg = config(
        dir.path(),
        "run",
        "epochs = 2\ndim = 6\ncheckpoint_every = 1\n",
    );
    let a = cmd_train(&train_args(&cfg, &[])).unwrap();
    let first = fs::read(&a.checkpoint).unwrap();
    let out = &a.run.output_dir;
    for f in [
        CHECKPOINT_FILE,
        EPOCHS_FILE,
        RESOLVED_CONFIG,
        "checkpoint.manifest",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    assert_eq!(
        fs::read_to_string(out.join(EPOCHS_FILE))
            .unwrap()
            .lines()
            .count(),
        3
    );
    cmd_train(&train_args(&cfg, &[])).unwrap();
    assert_eq!(fs::read(&a.checkpoint).unwrap(), first);

    // the resolved config alone reproduces the run
    let replay = dir.path().join("replay.toml");
    let resolved = fs::read_to_string(out.join(RESOLVED_CONFIG)).unwrap();
    fs::write(&replay, resolved).unwrap();
    let b = cmd_train(&train_args(&replay, &["output_dir=\"replay.out\""])).unwrap();
    assert_eq!(fs::read(&b.checkpoint).unwrap(), first);
    assert!(!out.read_dir().unwrap().any(|e| e
        .unwrap()
        .file_name()
        .to_string_lossy()
        .ends_with(".tmp")));
}

#[test]
fn eval_reports_are_consistent_and_training_helps() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    let cfg = config(
        dir.path(),
        "lp",
        "sampler = \"uniform\"\nepochs = 60\nbatch_size = 16\nlr_dis = 0.5\n",
    );
    let trained = cmd_train(&train_args(&cfg, &[])).unwrap();
    let untrained =
        cmd_train(&train_args(&cfg, &["epochs=0", "output_dir=\"untrained\""])).unwrap();
    let eval = |ckpt: &Path, task, out: &str| {
        cmd_eval(&EvalArgs {
            checkpoint: ckpt.into(),
            data: data.clone(),
            task,
            out: dir.path().join(out),
            plot: true,
            workers: 2,
        })
        .unwrap()
    };
    let mrr = |ckpt: &Path, out: &str| match eval(ckpt, Task::Lp, out).report.metrics {
        TaskMetrics::LinkPrediction(m) => {
            assert!(m.hits_at_1 <= m.hits_at_3 && m.hits_at_3 <= m.hits_at_10);
            m.mrr
        }
        _ => unreachable!(),
    };
    let (after, before) = (
        mrr(&trained.checkpoint, "e1"),
        mrr(&untrained.checkpoint, "e2"),
    );
    assert!(after > before, "trained {after} vs untrained {before}");
    match eval(&trained.checkpoint, Task::Clf, "e3").report.metrics {
        TaskMetrics::Classification(m) => {
            assert!((0.0..=1.0).contains(&m.roc_auc));
            assert!((0.0..=1.0).contains(&m.pr_auc));
        }
        _ => unreachable!(),
    }
    for f in ["rank_histogram.csv", "metrics_lp.csv", "metrics_lp.txt"] {
        assert!(dir.path().join("e1").join(f).is_file());
    }
    assert!(dir.path().join("e3/roc_curve.csv").is_file());
}

#[test]
fn eval_rejects_mismatched_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    dataset(dir.path());
    let cfg = config(dir.path(), "m", "epochs = 0\n");
    let trained = cmd_train(&train_args(&cfg, &[])).unwrap();
    let other = dir.path().join("other.tsv");
    fs::write(&other, "x\tr\ty\ny\tr\tz\nz\tr\tx\n").unwrap();
    cmd_ingest(&ingest_args(&other, &dir.path().join("other"))).unwrap();
    let out = bin()
        .arg("eval")
        .arg("--checkpoint")
        .arg(&trained.checkpoint)
        .arg("--data")
        .arg(dir.path().join("other"))
        .args(["--task", "lp", "--out"])
        .arg(dir.path().join("ev"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("50 entities") && err.contains("3 and 1"),
        "{err}"
    );
}

#[test]
fn export_round_trips_scores() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path());
    let cfg = config(
        dir.path(),
        "x",
        "epochs = 1\nscorer = \"simple\"\ndim = 5\n",
    );
    let trained = cmd_train(&train_args(&cfg, &[])).unwrap();
    let out = dir.path().join("export");
    cmd_export(&ExportArgs {
        checkpoint: trained.checkpoint.clone(),
        data,
        out: out.clone(),
    })
    .unwrap();
    let text = fs::read_to_string(out.join(ENTITIES_CSV)).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "name,0,1,2,3,4,5,6,7,8,9");
    assert_eq!(lines.count(), 50);

    let original = read_checkpoint(&trained.checkpoint).unwrap();
    let back = import_model(
        original.kind(),
        5,
        &out.join(ENTITIES_CSV),
        &out.join(RELATIONS_CSV),
    )
    .unwrap();
    let mut rng = RngStream::new(1);
    for _ in 0..500 {
        let t = Triplet::new(rng.below(50), rng.below(5), rng.below(50));
        assert!((original.score(&t).unwrap() - back.score(&t).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn synth_is_deterministic_and_reingests_losslessly() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.tsv"), dir.path().join("b.tsv"));
    let n = cmd_synth(&synth_args(&a, 7)).unwrap();
    cmd_synth(&synth_args(&b, 7)).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let s = cmd_ingest(&ingest_args(&a, &dir.path().join("d"))).unwrap();
    assert_eq!((s.triplets, s.duplicates), (n, 0));
    let mut original: Vec<String> = fs::read_to_string(&a)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    let mut stored: Vec<String> = fs::read_to_string(dir.path().join("d/triplets.tsv"))
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    original.sort();
    stored.sort();
    assert_eq!(original, stored);
}

#[test]
fn zero_density_fails_at_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("empty.tsv");
    let n = cmd_synth(&SynthArgs {
        density: 0.0,
        ..synth_args(&tsv, 1)
    })
    .unwrap();
    assert_eq!(n, 0);
    let out = bin()
        .arg("ingest")
        .arg(&tsv)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty dataset"));
}

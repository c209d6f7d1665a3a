//! End-to-end checks of the `fbeta` binary: exit codes, CSV shapes, and
//! the round trip between `simulate` output and `train` input.

use std::process::{Command, Output};

use fbeta_core::dist::{cdf_uiu, CdfQuery, UniformMixture};
use fbeta_core::fbeta::PrecisionRecall;

fn fbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbeta")).args(args).output().expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8(output.stdout.clone()).unwrap().lines().map(String::from).collect()
}

#[test]
fn cdf_single_point_matches_the_library() {
    let out = fbeta(&[
        "cdf", "--model", "uiu", "--beta-star", "8", "--p", "0.5", "--r", "0.5", "--z", "0.4",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "model,p,r,z,prob");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..4], &["uiu_8", "0.5", "0.5", "0.4"]);
    let expected = cdf_uiu(
        &CdfQuery::new(0.4, PrecisionRecall::new(0.5, 0.5).unwrap()),
        &UniformMixture::new(8.0).unwrap(),
    )
    .unwrap();
    assert_eq!(fields[4].parse::<f64>().unwrap(), expected);
}

#[test]
fn cdf_zero_recall_is_a_domain_error() {
    let out = fbeta(&[
        "cdf", "--model", "uiu", "--beta-star", "8", "--p", "0.5", "--r", "0", "--z", "0.4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("recall = 0"), "{stderr}");
}

#[test]
fn cdf_grid_emits_the_full_cartesian_product() {
    let out = fbeta(&[
        "cdf", "--model", "gaie", "--lambda", "0.5", "--sigma2", "2", "--grid", "10", "--z",
        "0.4,0.8",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1 + 10 * 10 * 2);
    for line in &lines[1..] {
        let prob: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&prob), "{line}");
    }
}

#[test]
fn verify_rejects_sample_counts_below_the_floor() {
    let out = fbeta(&["verify", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_detects_a_corrupted_closed_form() {
    let out = fbeta(&["verify", "--samples", "10000", "--corrupt"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL"));
}

#[test]
fn verify_passes_on_the_reference_grid() {
    // Deterministic for the fixed default seed. 2e5 draws put the 0.005
    // tolerance floor well above the Monte-Carlo standard error; the
    // 1e4 floor itself leaves individual points inside 3 standard errors
    // only by luck, which is why this does not test the minimum.
    let out = fbeta(&["verify", "--samples", "200000"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("max |delta|"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn surface_resolution_two_gives_four_rows() {
    let out = fbeta(&[
        "surface", "--model", "m2", "--lambda", "2", "--sigma2", "2", "--resolution", "2",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "p,r,beta_opt");
    assert_eq!(lines.len(), 5);
}

#[test]
fn surface_m1_covers_the_unit_square_at_default_resolution() {
    let out = fbeta(&["surface", "--model", "m1", "--beta-max", "16"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1 + 50 * 50);
    for line in &lines[1..] {
        let beta_opt: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(beta_opt > 0.0 && beta_opt <= 1.0, "{line}");
    }
}

#[test]
fn simulate_is_deterministic_and_respects_imbalance() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("one.csv");
    let second = dir.path().join("two.csv");
    for file in [&first, &second] {
        let out = fbeta(&[
            "simulate", "--scenario", "cve", "--a", "3.2", "--b", "5.0", "--size", "1200",
            "--imbalance", "0.25", "--seed", "7", "--out", file.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes = std::fs::read(&first).unwrap();
    assert_eq!(bytes, std::fs::read(&second).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "volume,height,label");
    assert_eq!(lines.len(), 1201);
    let positives = lines[1..].iter().filter(|l| l.ends_with(",1")).count();
    assert_eq!(positives, 300);
}

#[test]
fn training_on_a_simulate_csv_matches_training_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cve.csv");
    let sim = fbeta(&[
        "simulate", "--scenario", "cve", "--a", "3.2", "--b", "5.0", "--size", "1200",
        "--imbalance", "0.25", "--seed", "7", "--out", file.to_str().unwrap(),
    ]);
    assert!(sim.status.success());
    let shared = ["--loss", "m2_0.5_0.5", "--epochs", "5", "--seed", "7"];
    let from_csv = fbeta(&[&["train", "--data", file.to_str().unwrap()], &shared[..]].concat());
    let in_memory = fbeta(&[&["train", "--scenario", "cve-easy"], &shared[..]].concat());
    assert!(from_csv.status.success());
    assert!(in_memory.status.success());
    assert!(!from_csv.stdout.is_empty());
    assert_eq!(from_csv.stdout, in_memory.stdout);
}

#[test]
fn train_reports_per_epoch_metrics() {
    let out = fbeta(&["train", "--scenario", "pv-easy", "--loss", "baseline", "--epochs", "3",
        "--seed", "1"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "epoch,train_loss,precision,recall,f1,mean_beta_opt,default_fraction");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
    assert!(lines[3].starts_with("3,"));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("best F1:"), "{stderr}");
}

#[test]
fn bench_emits_the_plan_in_order_with_a_winner_summary() {
    let out = fbeta(&[
        "bench", "--scenarios", "cve-easy", "--models", "mb,m2_0.5_0.5", "--seeds", "2",
        "--epochs", "2",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "scenario,model,seed,best_f1");
    assert_eq!(lines.len(), 5);
    let keys: Vec<&str> = lines[1..].iter().map(|l| l.rsplit_once(',').unwrap().0).collect();
    assert_eq!(
        keys,
        ["cve-easy,mb,1", "cve-easy,mb,2", "cve-easy,m2_0.5_0.5,1", "cve-easy,m2_0.5_0.5,2"]
    );
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("winner"), "{stderr}");
}

#[test]
fn bench_is_deterministic_across_invocations() {
    let args =
        ["bench", "--scenarios", "pv-easy", "--models", "m1_8", "--seeds", "2", "--epochs", "2"];
    let first = fbeta(&args);
    let second = fbeta(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_errors_exit_with_code_two() {
    // Missing required --z.
    let missing = fbeta(&["cdf", "--model", "uiu", "--beta-star", "8", "--p", "0.5", "--r", "0.5"]);
    assert_eq!(missing.status.code(), Some(2));
    // Unparseable model id.
    let bad_model = fbeta(&["bench", "--models", "zzz"]);
    assert_eq!(bad_model.status.code(), Some(2));
    // Unknown subcommand.
    let unknown = fbeta(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    // Neither a point nor a grid.
    let no_points = fbeta(&["cdf", "--model", "uiu", "--beta-star", "8", "--z", "0.4"]);
    assert_eq!(no_points.status.code(), Some(2));
}

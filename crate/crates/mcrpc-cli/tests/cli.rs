//! End-to-end tests of the binary: exit codes, report contents, and the
//! solve/verify round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcrpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mcrpc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn fixture_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.json"))
}

#[test]
fn solve_exact_on_fixture_name() {
    let output = run(&["solve", "--algo", "exact", "--input", "fig2"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("value: 3"), "{text}");
    assert!(text.contains("algo: exact"));
}

#[test]
fn solve_exact_on_fixture_path() {
    let path = fixture_file("fig2");
    let output = run(&["solve", "--algo", "exact", "--input", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("value: 3"));
}

#[test]
fn solve_approx2_reports_four_on_the_example() {
    let output = run(&["solve", "--algo", "approx2", "--input", "fig2"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("value: 4"), "{text}");
    assert!(text.contains("sides: ++++++"));
}

#[test]
fn solve_fpt_rejects_non_uniform_weights_with_exit_2() {
    let output = run(&["solve", "--algo", "fpt", "--input", "fig3"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("weights"));
}

#[test]
fn solve_lp32_json_report() {
    let output = run(&["solve", "--algo", "lp32", "--input", "fig2", "--json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(report["algo"], "lp32");
    assert_eq!(report["value"], "3");
    assert!(report["lp"]["opt_f"].is_string());
    assert!(report["lp"]["bound"].is_string());
    assert!(report["lp"].get("cut_dump").is_none());
}

#[test]
fn solve_dump_cuts_appear_in_json() {
    let output = run(&[
        "solve", "--algo", "lp32", "--input", "fig2", "--json", "--dump-cuts",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert!(report["lp"]["cut_dump"].is_array());
}

#[test]
fn solve_then_verify_round_trip() {
    let routing = temp_path("fig2-exact.json");
    let output = run(&[
        "solve",
        "--algo",
        "exact",
        "--input",
        "fig2",
        "--output",
        routing.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let output = run(&[
        "verify",
        "--input",
        "fig2",
        "--routing",
        routing.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    assert!(stdout_of(&output).contains("match: true"));

    // Tampering with the claimed value flips the exit code to 3.
    let text = std::fs::read_to_string(&routing).unwrap();
    let tampered = text.replace("\"value\": \"3\"", "\"value\": \"4\"");
    assert_ne!(text, tampered);
    std::fs::write(&routing, tampered).unwrap();
    let output = run(&[
        "verify",
        "--input",
        "fig2",
        "--routing",
        routing.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stdout_of(&output).contains("match: false"));
}

#[test]
fn verify_rejects_mismatched_routing_length_with_exit_2() {
    let routing = temp_path("bad-length.json");
    std::fs::write(
        &routing,
        "{\n  \"n\": 8,\n  \"sides\": \"++\",\n  \"value\": \"1\"\n}\n",
    )
    .unwrap();
    let output = run(&[
        "verify",
        "--input",
        "fig2",
        "--routing",
        routing.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn generate_partition_matches_fixture_fig3() {
    let out = temp_path("partition.json");
    let output = run(&[
        "generate",
        "partition",
        "--set",
        "1,2,3,4",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let generated = std::fs::read_to_string(&out).unwrap();
    let fixture = std::fs::read_to_string(fixture_file("fig3")).unwrap();
    assert_eq!(generated, fixture);
}

#[test]
fn generate_fixture_matches_shipped_file() {
    let output = run(&["generate", "fixture", "--name", "fig5"]);
    assert!(output.status.success());
    let fixture = std::fs::read_to_string(fixture_file("fig5")).unwrap();
    assert_eq!(stdout_of(&output), fixture);
}

#[test]
fn generate_unknown_fixture_exits_2() {
    let output = run(&["generate", "fixture", "--name", "fig9"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn generate_random_is_reproducible() {
    let a = run(&[
        "generate", "random", "--n", "8", "--demands", "6", "--max-weight", "10", "--seed", "42",
    ]);
    let b = run(&[
        "generate", "random", "--n", "8", "--demands", "6", "--max-weight", "10", "--seed", "42",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));
    let c = run(&[
        "generate", "random", "--n", "8", "--demands", "6", "--max-weight", "10", "--seed", "43",
    ]);
    assert_ne!(stdout_of(&a), stdout_of(&c));
}

#[test]
fn unreadable_input_exits_2() {
    let output = run(&["solve", "--algo", "exact", "--input", "no-such-file.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("no-such-file.json"));
}

#[test]
fn compare_reports_ratios_and_violations() {
    let output = run(&[
        "compare", "--algos", "approx2,lp32,exact", "--trials", "4", "--n", "9", "--demands",
        "6", "--seed", "5", "--json",
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(report["trials"], 4);
    assert_eq!(report["violations"], 0);
    assert!(report["worst_ratios"]["approx2"].is_string());
    assert!(report["rows"].as_array().unwrap().len() == 4);
}

#[test]
fn compare_marks_oversized_exact_as_skipped() {
    let output = run(&[
        "compare", "--algos", "exact,approx2", "--trials", "1", "--n", "30", "--demands", "26",
        "--seed", "5",
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("exact=skipped"), "{text}");
    assert!(text.contains("approx2="));
}

#[test]
fn bench_reports_work_counter() {
    let output = run(&[
        "bench", "--trials", "2", "--n", "9", "--demands", "6", "--uniform", "--seed", "7",
        "--json",
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert!(report["per_algo"]["exact"]["mean_seconds"].is_number());
    assert_eq!(report["fpt_work"]["within_budget"], true);
}

#[test]
fn solve_reports_stable_output_across_runs() {
    let a = run(&["solve", "--algo", "lp32", "--input", "fig3", "--json"]);
    let b = run(&["solve", "--algo", "lp32", "--input", "fig3", "--json"]);
    assert!(a.status.success());
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

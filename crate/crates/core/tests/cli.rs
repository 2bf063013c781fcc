use std::path::Path;
use std::process::Command;

use serde_json::Value;
use spectra::cli::{run_with_level, Level, EXIT_CONFIG, EXIT_EXHAUSTED, EXIT_OK, EXIT_STRUCTURE};

const ALTERNATING: &str = "type a fvals=0\ntype b fvals=1,0\nemit a x1\nemit b x1\nrepeat\n";

fn spectra(args: &[&str]) -> (i32, Vec<Value>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spectra").chain(args.iter().copied());
    let code = run_with_level(argv, Level::Info, &mut out, &mut err);
    let records = String::from_utf8(out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (code, records, String::from_utf8(err).unwrap())
}

fn kinds<'a>(records: &'a [Value], kind: &str) -> Vec<&'a Value> {
    records.iter().filter(|r| r["kind"] == kind).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn decompose_reports_blocks_and_escapes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "f.spec", ALTERNATING);
    let (code, records, summary) = spectra(&["decompose", "--spec", &spec, "-n", "9"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(kinds(&records, "block").len(), 6);
    assert!(summary.contains("6 blocks of 2 types"));
    let (code, records, _) = spectra(&["decompose", "--spec", &spec, "-n", "8"]);
    assert_eq!(code, EXIT_STRUCTURE);
    assert_eq!(kinds(&records, "error").len(), 1);
}

#[test]
fn recover_reads_a_schedule_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "f.spec",
        "type a fvals=0\ntype b fvals=1,0\ntype c fvals=1,2,0\ntype d fvals=1,2,3,0\nemit a x1\nemit b x1\nemit c x1\nemit d x1\n",
    );
    let schedule = write(dir.path(), "s.txt", "append\ninsert 0\nappend\n");
    let (code, records, summary) =
        spectra(&["recover", "--spec", &spec, "--schedule", &schedule, "-x", "1", "--segments", "2", "--window", "10"]);
    assert_eq!(code, EXIT_OK, "{summary}");
    let answer = records.iter().find(|r| r["event"] == "answer").unwrap();
    assert_eq!(answer["successor"], 0);

    let (code, _, _) = spectra(&["recover", "--spec", &spec, "-x", "1", "--segments", "9", "--window", "10"]);
    assert_eq!(code, EXIT_EXHAUSTED);
}

#[test]
fn injury_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.spec", ALTERNATING);
    let config = write(
        dir.path(),
        "run.toml",
        "mode = \"tree\"\nspec = \"f.spec\"\nstages = 40\nopponents = [\"cooperating\"]\n",
    );
    let out = dir.path().join("records.jsonl");
    let (code, stdout, summary) = spectra(&["injury", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{summary}");
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let checks: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["kind"] == "stop-check")
        .collect();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["check"]["result"], "verified");

    // Flags override the file.
    let (code, records, _) = spectra(&["injury", "--config", &config, "--mode", "finite", "--stages", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(kinds(&records, "stage-record").len(), 5);
}

#[test]
fn tree_rejects_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "id.spec", "type a fvals=0\nemit a x1\nrepeat\n");
    let (code, _, summary) = spectra(&["injury", "--mode", "tree", "--spec", &spec, "--stages", "3"]);
    assert_eq!(code, EXIT_STRUCTURE);
    assert!(summary.contains("precondition"));
}

#[test]
fn classify_translate_and_encode() {
    let dir = tempfile::tempdir().unwrap();
    let program = write(dir.path(), "p.prog", &spectra::catalog::constant(3).to_string());
    let (code, records, _) = spectra(&["classify", "--program", &program, "-n", "32"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(kinds(&records, "verdict")[0]["verdict"], "almost-constant");

    let bundle = write(dir.path(), "n.bundle", &spectra::notation::Notation::from_listing(&[1, 0, 2]).to_string());
    let (code, records, _) = spectra(&["translate", "--notation", &bundle, "-n", "8"]);
    assert_eq!(code, EXIT_STRUCTURE);
    assert_eq!(kinds(&records, "acceptability")[0]["verdict"], "refuted");

    let (code, records, _) = spectra(&["encode", "--budget", "1000"]);
    assert_eq!(code, EXIT_OK);
    let markers = kinds(&records, "marker");
    assert_eq!(markers.len(), 16);
    assert!(markers.iter().all(|m| m["adjacent"] != m["enumerated"]));
}

#[test]
fn configuration_errors_exit_one() {
    let (code, _, _) = spectra(&["decompose", "--spec", "/nonexistent/f.spec", "-n", "4"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = spectra(&["frobnicate"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = spectra(&["decompose", "-n", "4"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn binary_honours_log_level() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "f.spec", ALTERNATING);
    let run = |level: &str| {
        Command::new(env!("CARGO_BIN_EXE_spectra"))
            .args(["decompose", "--spec", &spec, "-n", "8"])
            .env("SPECTRA_LOG_LEVEL", level)
            .output()
            .unwrap()
    };
    let quiet = run("off");
    assert_eq!(quiet.status.code(), Some(EXIT_STRUCTURE));
    assert!(quiet.stderr.is_empty());
    let loud = run("info");
    assert!(String::from_utf8_lossy(&loud.stderr).contains("escapes the prefix"));
    assert_eq!(quiet.stdout, loud.stdout);
}

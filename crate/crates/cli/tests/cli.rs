//! End-to-end CLI tests through the compiled binary: verb output pins,
//! file round trips, byte determinism, and the exit-code contract.

use std::process::{Command, Output};

use tempfile::TempDir;

fn qmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmat")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = qmat(args);
    assert!(
        out.status.success(),
        "qmat {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    qmat(args).status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn qbinom_prints_the_exact_integer() {
    assert_eq!(stdout_of(&["qbinom", "-n", "4", "-k", "2", "-q", "2"]), "35\n");

    // Independent oracle: the product formula in exact arithmetic.
    let q = num_bigint::BigUint::from(3u32);
    let one = num_bigint::BigUint::from(1u32);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..25u32 {
        num *= q.pow(50 - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    assert_eq!(stdout_of(&["qbinom", "-n", "50", "-k", "25", "-q", "3"]), format!("{}\n", num / den));
}

#[test]
fn uniform_check_and_dual_agree() {
    let dir = TempDir::new().unwrap();
    let u = stdout_of(&["uniform", "-q", "2", "-n", "4", "-k", "1"]);
    let path = write(&dir, "u14.json", &u);
    assert_eq!(
        stdout_of(&["check", "--in", &path]),
        "{\"format\":\"qml-v1\",\"verdict\":\"pass\"}\n"
    );
    let dual = stdout_of(&["dual", "--in", &path]);
    let u3 = stdout_of(&["uniform", "-q", "2", "-n", "4", "-k", "3"]);
    assert_eq!(dual, u3, "dual of U_{{1,4}} must be U_{{3,4}}");
}

#[test]
fn paving_and_from_generator_coincide_on_the_motivating_example() {
    let dir = TempDir::new().unwrap();
    let collection = write(
        &dir,
        "members.json",
        r#"{"format":"qml-v1","q":2,"n":4,"k":2,"codewords":[
            [["1","0","0","0"],["0","1","0","0"]],
            [["0","0","1","0"],["0","0","0","1"]]]}"#,
    );
    let generator = write(
        &dir,
        "gen.json",
        r#"{"format":"qml-v1","field":{"p":2,"e":4,"modulus":[1,1,0,0,1]},"n":4,
            "rows":[["1000","0100","0000","0000"],["0000","0000","1000","0010"]]}"#,
    );
    let from_paving = stdout_of(&["paving", "--in", &collection]);
    let from_gen = stdout_of(&["from-generator", "--in", &generator]);
    assert_eq!(from_paving, from_gen, "the two constructions disagree");

    let table = write(&dir, "paving.json", &from_paving);
    let structure: serde_json::Value =
        serde_json::from_str(&stdout_of(&["structure", "--in", &table])).unwrap();
    assert_eq!(structure["is_paving"], serde_json::json!(true));
    assert_eq!(structure["rank"], serde_json::json!(2));
    assert_eq!(structure["bases"].as_array().unwrap().len(), 33);
    assert_eq!(structure["circuits"].as_array().unwrap().len(), 11);
}

#[test]
fn search_rep_honors_the_mrd_threshold_and_roundtrips() {
    let dir = TempDir::new().unwrap();
    let u24 = stdout_of(&["uniform", "-q", "2", "-n", "4", "-k", "2"]);
    let path = write(&dir, "u24.json", &u24);

    assert_eq!(
        stdout_of(&["search-rep", "--in", &path, "--m-max", "3"]),
        "{\"format\":\"qml-v1\",\"found\":false}\n"
    );

    let found = stdout_of(&["search-rep", "--in", &path, "--m-max", "4"]);
    assert!(found.contains("\"found\":true,\"m\":4"));
    assert!(found.contains(r#""modulus":[1,1,0,0,1]"#));

    // Extract the generator document and feed it back through from-generator:
    // the induced table must be the original uniform table.
    let gen_start = found.find("{\"format\":\"qml-v1\",\"field\"").unwrap();
    let gen_json = &found[gen_start..found.len() - 2]; // strip closing brace + newline
    let gen_path = write(&dir, "witness.json", gen_json);
    assert_eq!(stdout_of(&["from-generator", "--in", &gen_path]), u24);
}

#[test]
fn lifted_mrd_chain_produces_a_valid_paving() {
    let dir = TempDir::new().unwrap();
    let cdc = stdout_of(&["lifted-mrd", "-q", "2", "-n", "6", "-k", "3", "--d", "4"]);
    let cdc_path = write(&dir, "cdc.json", &cdc);

    let dist = stdout_of(&["cdc-distance", "--in", &cdc_path]);
    assert!(dist.contains("\"size\":64,\"distance\":4"), "got {dist}");

    let paving = stdout_of(&["cdc-to-paving", "--in", &cdc_path]);
    let paving_path = write(&dir, "paving.json", &paving);
    assert!(stdout_of(&["check", "--in", &paving_path]).contains("\"verdict\":\"pass\""));
    assert!(stdout_of(&["pattern-of", "--in", &paving_path]).contains("\"pattern\":\""));
}

#[test]
fn zero_sweep_matches_its_pinned_output() {
    assert_eq!(
        stdout_of(&["zero-sweep", "-q", "2", "-n", "2", "-k", "1", "-m", "1", "--patterns"]),
        "{\"format\":\"qml-v1\",\"q\":2,\"n\":2,\"k\":1,\"m\":1,\"count\":4,\"bound\":\"7\",\
         \"patterns\":[\"000\",\"0**\",\"*0*\",\"**0\"]}\n"
    );
}

#[test]
fn bounds_table_is_deterministic_in_both_formats() {
    let csv = stdout_of(&["bounds-table", "-q", "2", "-n", "8", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,log2_lower_N,log2_upper_R,gap"));
    assert_eq!(lines.next(), Some("4,4,31.907178143707,-27.907178143707"));
    assert!(csv.lines().last().unwrap().starts_with("8,4096,"));

    let again = stdout_of(&["bounds-table", "-q", "2", "-n", "8", "--format", "csv"]);
    assert_eq!(csv, again, "reruns must be byte-identical");

    let json = stdout_of(&["bounds-table", "-q", "2", "-n", "8"]);
    assert!(json.contains("\"log2_lower_N\":\"4\""));
    assert!(json.contains("\"log2_upper_R\":\"31.907178143707\""));

    let summed = stdout_of(&["bounds-table", "-q", "2", "-n", "8", "--sum-over-k", "--format", "csv"]);
    assert_ne!(csv, summed, "the opt-in k-sum must change the upper bounds");
}

#[test]
fn census_counts_are_pinned() {
    let out = stdout_of(&["rank1-census", "-q", "2", "-n", "4"]);
    assert!(out.contains("\"count\":66"), "got {out}");
    let out = stdout_of(&["enumerate-qmatroids", "-q", "2", "-n", "2", "-k", "2", "--full"]);
    assert!(out.contains("\"count\":6"));
    assert!(out.contains("\"tables\":[[0,0,0,0,0]"), "got {out}");
}

#[test]
fn out_flag_writes_the_same_bytes_plus_newline() {
    let dir = TempDir::new().unwrap();
    let stdout = stdout_of(&["uniform", "-q", "3", "-n", "2", "-k", "1"]);
    let path = dir.path().join("u.json");
    let out = qmat(&["uniform", "-q", "3", "-n", "2", "-k", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn threads_and_seed_flags_never_change_bytes() {
    let one = stdout_of(&["lifted-mrd", "-q", "2", "-n", "6", "-k", "2", "--d", "4"]);
    let four = stdout_of(&["--threads", "4", "lifted-mrd", "-q", "2", "-n", "6", "-k", "2", "--d", "4"]);
    assert_eq!(one, four);
    let seeded = stdout_of(&["--seed", "99", "lifted-mrd", "-q", "2", "-n", "6", "-k", "2", "--d", "4"]);
    assert_eq!(one, seeded);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: unknown verb, missing required flag, csv on a non-table.
    assert_eq!(exit_code(&["no-such-verb"]), 2);
    assert_eq!(exit_code(&["qbinom", "-n", "4"]), 2);
    assert_eq!(exit_code(&["check", "--in", "x.json", "--format", "csv"]), 2);

    // Domain errors: unreadable input, invalid parameters, bad documents.
    assert_eq!(exit_code(&["check", "--in", "/definitely/missing.json"]), 1);
    assert_eq!(exit_code(&["uniform", "-q", "2", "-n", "3", "-k", "7"]), 1);
    assert_eq!(exit_code(&["uniform", "-q", "6", "-n", "2", "-k", "1"]), 1);
    assert_eq!(exit_code(&["lifted-mrd", "-q", "2", "-n", "4", "-k", "2", "--d", "6"]), 1);

    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"format":"qml-v0","q":2,"n":2,"ordering":"canonical-v1","ranks":[0,1,1,1,1]}"#);
    assert_eq!(exit_code(&["check", "--in", &bad]), 1);
}

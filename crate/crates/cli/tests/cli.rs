use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balltheory"))
        .args(args)
        .env_remove("BALLTHEORY_SEED")
        .output()
        .expect("spawn balltheory")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn transitivity_spin9_passes() {
    let out = bin(&["transitivity", "--family", "spin9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["report"]["group"]["d"], 16);
}

#[test]
fn su4_lemma_reports_no_eight_dimensional_irrep() {
    let out = bin(&["irreps", "--family", "su", "--n", "4", "--lemma", "--text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no 8-dimensional irrep"), "{text}");
}

#[test]
fn g2_bracket_refutation_is_expected() {
    let out = bin(&["refute", "--family", "g2", "--construct", "bracket"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["outcome"], "refuted");
    assert_eq!(v["report"]["step"], "g2_bracket");
    assert!(
        v["report"]["witness"]["diagnostics"]["map_rank"]
            .as_f64()
            .unwrap()
            == 6.0
    );
}

#[test]
fn local_generator_is_consistent_and_unexpected_outcome_exits_one() {
    let ok = bin(&["refute", "--family", "so", "--d", "4", "--construct", "local"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["report"]["outcome"], "consistent");
    let bad = bin(&[
        "refute",
        "--family",
        "so",
        "--d",
        "4",
        "--construct",
        "local",
        "--expect",
        "refuted",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn supplied_matrix_round_trip() {
    let dir = std::env::temp_dir().join(format!("balltheory-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // X₁ = J on the e₁e₂ plane at d = 4: W[a₁, c₂₁] = 1, W[a₂, c₁₁] = -1
    let d = 4;
    let n = (d + 1) * (d + 1);
    let mut w = vec![0.0; n * n];
    let a = |i: usize| 1 + d + i;
    let c = |i: usize, j: usize| 1 + 2 * d + i * d + j;
    let mut set = |r: usize, col: usize, v: f64| {
        w[r * n + col] = v;
        w[col * n + r] = -v;
    };
    set(a(0), c(1, 0), 1.0);
    set(a(1), c(0, 0), -1.0);
    let path = dir.join("w.json");
    let body = serde_json::json!({ "rows": n, "cols": n, "entries": w });
    std::fs::write(&path, body.to_string()).unwrap();
    let out = bin(&[
        "refute",
        "--family",
        "so",
        "--d",
        "4",
        "--input",
        path.to_str().unwrap(),
    ]);
    // supplied generators are expected to be consistent; this one is not
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["step"], "so_d");
    let out = bin(&[
        "refute",
        "--family",
        "so",
        "--d",
        "4",
        "--input",
        path.to_str().unwrap(),
        "--expect",
        "refuted",
    ]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["transitivity", "--family", "e8"]).status.code(), Some(2));
    assert_eq!(
        bin(&["transitivity", "--family", "su", "--d", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["refute", "--family", "so", "--d", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["quantum", "--tol", "1e-3", "--tol-refute", "1e-6"])
            .status
            .code(),
        Some(2)
    );
    let out = bin(&["catalog", "--json", "--text"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn deadband_exits_three() {
    // the default construction has violation 1; a refute threshold above it
    // leaves the value in the inconclusive band
    let out = bin(&["refute", "--family", "so", "--d", "4", "--tol-refute", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconclusive"));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_balltheory"));
        c.args(args);
        match env {
            Some(s) => c.env("BALLTHEORY_SEED", s),
            None => c.env_remove("BALLTHEORY_SEED"),
        };
        json(&c.output().unwrap())
    };
    let args = ["quantum", "--samples", "50"];
    assert_eq!(run(Some("42"), &args)["seed"], 42);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "7"]);
    assert_eq!(run(Some("42"), &with_flag)["seed"], 7);
    assert_eq!(run(None, &args)["seed"], 0);
}

#[test]
fn reports_are_deterministic_and_written_atomically() {
    let dir = std::env::temp_dir().join(format!("balltheory-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p1 = dir.join("a.json");
    let p2 = dir.join("b.json");
    for p in [&p1, &p2] {
        let out = bin(&[
            "constraints",
            "--family",
            "g2",
            "--samples",
            "300",
            "--seed",
            "5",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert!(!dir.join("a.tmp").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn catalog_and_commutant_verbs() {
    let v = json(&bin(&["catalog", "--cap", "8"]));
    let groups = v["groups"].as_array().unwrap();
    assert!(groups
        .iter()
        .any(|g| g["family"] == "g2" && g["algebra_dim"] == 14));
    assert!(groups.iter().all(|g| g["d"].as_u64().unwrap() <= 8));
    let c = json(&bin(&["commutant", "--family", "sp", "--d", "8"]));
    assert_eq!(c["all"], 4);
    assert_eq!(c["mform"]["pair_symmetric_dim"], 10);
    let t = json(&bin(&[
        "twirl-demo",
        "--family",
        "so",
        "--d",
        "5",
        "--samples",
        "2000",
    ]));
    assert_eq!(t["pass"], true);
    assert_eq!(t["commutant_dim"], 1);
}

//! Acceptance gate: one PASS/FAIL line per criterion, then a single assert.
//!
//! Run with `cargo test -p balltheory-cli --test acceptance -- --nocapture`
//! to see the table.

use std::process::Command;
use std::time::{Duration, Instant};

use balltheory::catalog::{
    catalog, g2_special_elements, generators, stabilizer_subalgebra, Family, GroupSpec,
};
use balltheory::gpt::local_algebra;
use balltheory::irreps::{enumerate_irreps, verify_lemma, Series};
use balltheory::linalg::frobenius_inner;
use balltheory::nogo::{
    construct, g2_bracket_residuals, quantum_positive_check, refute, stabilizer_commutant_dims, Construction,
    Outcome, Tolerances,
};
use balltheory::par::Execution;
use balltheory::realify::spin_pipeline;
use balltheory::suite::{crippled_control, local_constraints};
use balltheory::transitivity::{certify_algebra, commutant, transitivity_certificate, Constraint};

const SEED: u64 = 20_240_601;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    note: String,
    elapsed: Duration,
}

fn timed(id: u8, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (mut pass, mut note) = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            pass = false;
            note.push_str(&format!("; over budget {b:?}"));
        }
    }
    Line {
        id,
        name,
        pass,
        note,
        elapsed,
    }
}

fn algebra_dim(f: Family, d: usize) -> usize {
    let n2 = d / 2;
    let n4 = d / 4;
    match f {
        Family::SO => d * (d - 1) / 2,
        Family::SU => n2 * n2 - 1,
        Family::U => n2 * n2,
        Family::Sp => n4 * (2 * n4 + 1),
        Family::SpU1 => n4 * (2 * n4 + 1) + 1,
        Family::SpSU2 => n4 * (2 * n4 + 1) + 3,
        Family::G2 => 14,
        Family::Spin7 => 21,
        Family::Spin9 => 36,
    }
}

fn catalog_integrity() -> (bool, String) {
    let mut bad = Vec::new();
    for f in Family::ALL {
        let spec = GroupSpec::smallest(f);
        let h = generators(&spec).unwrap();
        let ok = h.max_antisymmetry_residual() <= 1e-12
            && h.closure_residual().unwrap() <= 1e-10
            && h.len() == algebra_dim(f, spec.d);
        if !ok {
            bad.push(spec.to_string());
        }
    }
    (bad.is_empty(), format!("9 families; failing: {bad:?}"))
}

fn transitivity() -> (bool, String) {
    let entries = catalog(16);
    let mut bad = Vec::new();
    for e in &entries {
        let spec = GroupSpec::new(e.family, e.d).unwrap();
        let r = transitivity_certificate(&spec, 10, SEED).unwrap();
        if !(r.pass && r.checks.len() == 11) {
            bad.push(spec.to_string());
        }
    }
    let control = certify_algebra(&crippled_control().unwrap(), "control", 10, SEED).unwrap();
    (
        bad.is_empty() && !control.pass,
        format!(
            "{} groups; failing: {bad:?}; control rejected: {}",
            entries.len(),
            !control.pass
        ),
    )
}

fn commutants() -> (bool, String) {
    let dim = |f, d| {
        commutant(
            &generators(&GroupSpec::new(f, d).unwrap()).unwrap(),
            Constraint::All,
        )
        .dim()
    };
    let su = dim(Family::SU, 6);
    let sp = dim(Family::Sp, 8);
    let irreducible: Vec<usize> = [Family::SO, Family::G2, Family::Spin7, Family::Spin9]
        .into_iter()
        .map(|f| dim(f, f.smallest_d()))
        .collect();
    let stab = stabilizer_subalgebra(&GroupSpec::new(Family::G2, 7).unwrap(), 1).unwrap();
    let c = commutant(&stab, Constraint::Antisymmetric);
    let (t, _) = g2_special_elements();
    let overlap = c
        .basis
        .first()
        .map(|b| frobenius_inner(b, &t).abs() / t.norm())
        .unwrap_or(0.0);
    let pass =
        su == 2 && sp == 4 && irreducible == [1, 1, 1, 1] && c.dim() == 1 && (overlap - 1.0).abs() < 1e-10;
    (
        pass,
        format!(
            "su {su}, sp {sp}, irreducible {irreducible:?}, g2 stabilizer {} (|<B,T>|/|T| = {overlap:.12})",
            c.dim()
        ),
    )
}

fn clifford() -> (bool, String) {
    let near = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() <= 1e-10 && (a.1 - b.1).abs() <= 1e-10;
    let nine = spin_pipeline(9).unwrap();
    let seven = spin_pipeline(7).unwrap();
    let pass = near(nine.full_traces, (1.0, 1.0))
        && near(seven.full_traces, (1.0, 0.0))
        && near(seven.spin_traces, (1.0, 1.0))
        && nine.solution_space_dim == 1
        && seven.solution_space_dim == 1
        && nine.generator_imag_residual.max(seven.generator_imag_residual) <= 1e-9
        && nine.minus_identity_residual.max(seven.minus_identity_residual) <= 1e-10;
    (
        pass,
        format!(
            "orders {}/{}; imag {:e}; expm(pi g1) + 1 = {:e}",
            nine.order,
            seven.order,
            nine.generator_imag_residual.max(seven.generator_imag_residual),
            nine.minus_identity_residual.max(seven.minus_identity_residual)
        ),
    )
}

fn constraints() -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for f in Family::ALL {
        for r in local_constraints(&GroupSpec::smallest(f), 10_000, SEED, Execution::default()).unwrap() {
            pass &= r.pass && r.max_residual <= 1e-10;
            worst = worst.max(r.max_residual);
        }
    }
    let q = quantum_positive_check(10_000, SEED, Execution::default()).unwrap();
    pass &= q.pass;
    (
        pass,
        format!("local worst {worst:e}; quantum worst {:e}", q.max_residual),
    )
}

fn nogo() -> (bool, String) {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for (f, d) in [(Family::SO, 4), (Family::Sp, 8), (Family::SU, 6), (Family::G2, 7)] {
        let spec = GroupSpec::new(f, d).unwrap();
        let w = construct(&spec, Construction::Interacting, SEED).unwrap();
        let r = refute(&spec, &w, tol).unwrap();
        let refuted = r.outcome == Outcome::Refuted && r.residual >= 1e-6;
        let mut local_worst: f64 = 0.0;
        let mut local_ok = true;
        for g in local_algebra(&generators(&spec).unwrap()).unwrap().generators {
            let r = refute(&spec, &g, tol).unwrap();
            local_ok &= r.outcome == Outcome::Consistent && r.residual <= 1e-9;
            local_worst = local_worst.max(r.residual);
        }
        pass &= refuted && local_ok;
        notes.push(format!(
            "{spec}: {} {:.3e} / local {local_worst:.1e}",
            r.step.label(),
            r.residual
        ));
    }
    let bracket = g2_bracket_residuals();
    let fails = bracket.iter().any(|r| *r > 1e-6);
    pass &= fails;
    notes.push(format!(
        "bracket max {:.3}",
        bracket.iter().cloned().fold(0.0, f64::max)
    ));
    (pass, notes.join("; "))
}

fn escape() -> (bool, String) {
    let dims: Vec<usize> = (3..=10).map(|d| stabilizer_commutant_dims(d).unwrap()).collect();
    (dims == [3, 2, 2, 2, 2, 2, 2, 2], format!("d = 3..10: {dims:?}"))
}

fn lemmas() -> (bool, String) {
    let su_list = |n| -> Vec<String> {
        verify_lemma(Series::Su, n).unwrap()[0]
            .found
            .iter()
            .map(|e| e.weight.to_string())
            .collect()
    };
    let mut pass = su_list(3) == ["(0,2)", "(2,0)"]
        && su_list(4).is_empty()
        && su_list(5) == ["(0,0,1,0)", "(0,1,0,0)"]
        && (6..=12).all(|n| su_list(n).is_empty());
    let sp2: Vec<u64> = enumerate_irreps(Series::Sp, 2, 10)
        .unwrap()
        .iter()
        .map(|e| e.dim)
        .collect();
    pass &= sp2 == [1, 4, 5, 10];
    for n in 3..=8 {
        let r = &verify_lemma(Series::Sp, n).unwrap()[0];
        pass &= r.found.len() == 1 && r.found[0].weight.a[0] == 1 && r.found[0].dim == 2 * n as u64;
    }
    (pass, format!("sp(2) smallest {sp2:?}"))
}

fn determinism() -> (bool, String) {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_balltheory"))
            .args(["all", "--seed", "11"])
            .output()
            .expect("spawn balltheory")
    };
    let a = run();
    let b = run();
    let pass = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    (
        pass,
        format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

#[test]
fn acceptance() {
    let s = |n| Some(Duration::from_secs(n));
    let lines = vec![
        timed(1, "catalog integrity", s(10), catalog_integrity),
        timed(2, "transitivity", s(30), transitivity),
        timed(3, "commutant fixtures", None, commutants),
        timed(4, "clifford/spin pipeline", s(60), clifford),
        timed(5, "constraint suite", None, constraints),
        timed(6, "no-go refutations", None, nogo),
        timed(7, "d = 3 escape signature", None, escape),
        timed(8, "irrep lemmas", s(5), lemmas),
        timed(9, "determinism of `all`", s(600), determinism),
    ];
    for l in &lines {
        println!(
            "criterion {} {:<24} {}  ({:.2}s)  {}",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.elapsed.as_secs_f64(),
            l.note
        );
    }
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! The full verification sweep, one section per acceptance criterion.
//!
//! Reports carry no timings or host data, so a fixed seed gives
//! byte-identical JSON.

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{
    catalog, g2_special_elements, generators, stabilizer_subalgebra, AlgebraBasis, Family, GroupSpec,
};
use crate::error::Result;
use crate::gpt::{
    constraint_suite, local_algebra, local_pool, mform_solve, random_mform, CheckReport, MForm,
};
use crate::irreps::{enumerate_irreps, verify_lemma, Series};
use crate::linalg::frobenius_inner;
use crate::nogo::{
    construct, g2_bracket_residuals, quantum_positive_check, refute, stabilizer_commutant_dims, Construction,
    Outcome, Tolerances,
};
use crate::par::Execution;
use crate::realify::spin_pipeline;
use crate::sampling::stream;
use crate::transitivity::{certify_algebra, commutant, transitivity_certificate, Constraint};

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub criterion: u8,
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub tol_consistent: f64,
    pub tol_refute: f64,
    pub pass: bool,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerances,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 10_000,
            tol: Tolerances::default(),
            exec: Execution::default(),
        }
    }
}

/// Independent closed form for the algebra dimension of each family.
pub fn expected_algebra_dim(spec: &GroupSpec) -> usize {
    let d = spec.d;
    match spec.family {
        Family::SO => d * (d - 1) / 2,
        Family::SU => (d / 2) * (d / 2) - 1,
        Family::U => (d / 2) * (d / 2),
        Family::Sp => (d / 4) * (2 * (d / 4) + 1),
        Family::SpU1 => (d / 4) * (2 * (d / 4) + 1) + 1,
        Family::SpSU2 => (d / 4) * (2 * (d / 4) + 1) + 3,
        Family::G2 => 14,
        Family::Spin7 => 21,
        Family::Spin9 => 36,
    }
}

pub fn catalog_integrity() -> Result<Section> {
    let mut rows = Vec::new();
    let mut pass = true;
    for f in Family::ALL {
        let spec = GroupSpec::smallest(f);
        let h = generators(&spec)?;
        let anti = h.max_antisymmetry_residual();
        let closure = h.closure_residual()?;
        let expected = expected_algebra_dim(&spec);
        let ok = anti <= 1e-12 && closure <= 1e-10 && h.len() == expected && h.rank() == expected;
        pass &= ok;
        rows.push(json!({
            "group": spec,
            "generators": h.len(),
            "expected_dim": expected,
            "antisymmetry_residual": anti,
            "closure_residual": closure,
            "pass": ok,
        }));
    }
    Ok(Section {
        criterion: 1,
        name: "catalog_integrity",
        pass,
        summary: format!("{} families at their smallest d", rows.len()),
        detail: Value::Array(rows),
    })
}

/// The deliberately non-transitive control: a single rotation generator.
pub fn crippled_control() -> Result<AlgebraBasis> {
    let so3 = generators(&GroupSpec::new(Family::SO, 3)?)?;
    AlgebraBasis::new(3, vec![so3.generators[0].clone()])
}

pub fn transitivity_sweep(cap: usize, trials: usize, seed: u64, exec: Execution) -> Result<Section> {
    let entries = catalog(cap);
    let reports = exec.map(entries.len(), |k| {
        let e = &entries[k];
        transitivity_certificate(&GroupSpec::new(e.family, e.d)?, trials, seed)
    });
    let mut rows = Vec::new();
    let mut pass = true;
    for r in reports {
        let r = r?;
        pass &= r.pass;
        let min_span = r.checks.iter().map(|c| c.span_dim).min().unwrap_or(0);
        rows.push(
            json!({ "group": r.group, "pass": r.pass, "min_span_dim": min_span, "points": r.checks.len() }),
        );
    }
    let control = certify_algebra(&crippled_control()?, "crippled_so3", trials, seed)?;
    pass &= !control.pass;
    Ok(Section {
        criterion: 2,
        name: "transitivity",
        pass,
        summary: format!(
            "{} groups with d <= {cap}; control fails: {}",
            rows.len(),
            !control.pass
        ),
        detail: json!({ "groups": rows, "control_pass": control.pass }),
    })
}

pub fn commutant_fixtures() -> Result<Section> {
    let mut rows = Vec::new();
    let mut pass = true;
    let mut push = |label: String, got: usize, want: usize, pass: &mut bool| {
        *pass &= got == want;
        rows.push(json!({ "algebra": label, "dim": got, "expected": want }));
    };
    for (f, d, want) in [(Family::SU, 6, 2), (Family::Sp, 8, 4)] {
        let spec = GroupSpec::new(f, d)?;
        push(
            spec.to_string(),
            commutant(&generators(&spec)?, Constraint::All).dim(),
            want,
            &mut pass,
        );
    }
    for f in Family::ALL.into_iter().filter(|f| f.complex_irreducible()) {
        let spec = GroupSpec::smallest(f);
        push(
            spec.to_string(),
            commutant(&generators(&spec)?, Constraint::All).dim(),
            1,
            &mut pass,
        );
    }
    let stab = stabilizer_subalgebra(&GroupSpec::new(Family::G2, 7)?, 1)?;
    let c = commutant(&stab, Constraint::Antisymmetric);
    push("g2 stabilizer (antisymmetric)".into(), c.dim(), 1, &mut pass);
    let (t, _) = g2_special_elements();
    let overlap = c
        .basis
        .first()
        .map(|b| frobenius_inner(b, &t).abs() / t.norm())
        .unwrap_or(0.0);
    pass &= (overlap - 1.0).abs() < 1e-10;
    Ok(Section {
        criterion: 3,
        name: "commutant_fixtures",
        pass,
        summary: format!(
            "{} commutants; stabilizer basis overlap with T = {overlap:.12}",
            rows.len()
        ),
        detail: json!({ "commutants": rows, "t_overlap": overlap }),
    })
}

pub fn clifford_pipeline() -> Result<Section> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (n, full_want, spin_want) in [(9, (1.0, 1.0), (1.0, 1.0)), (7, (1.0, 0.0), (1.0, 1.0))] {
        let r = spin_pipeline(n)?;
        let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() <= 1e-10 && (a.1 - b.1).abs() <= 1e-10;
        let ok = close(r.full_traces, full_want)
            && close(r.spin_traces, spin_want)
            && r.solution_space_dim == 1
            && r.generator_imag_residual <= 1e-9
            && r.minus_identity_residual <= 1e-10;
        pass &= ok;
        rows.push(serde_json::to_value(&r)?);
    }
    Ok(Section {
        criterion: 4,
        name: "clifford_spin",
        pass,
        summary: "CL(9) and CL+(7) realified".into(),
        detail: Value::Array(rows),
    })
}

/// Local-algebra constraint checks for one group, at `M = 1` and at a
/// random admissible `M`.
pub fn local_constraints(
    spec: &GroupSpec,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<CheckReport>> {
    let h = generators(spec)?;
    let pool = local_pool(&h, seed);
    let sol = mform_solve(&h)?;
    let m = random_mform(&mut stream(seed, u64::MAX), &sol)?;
    Ok(vec![
        constraint_suite(
            &format!("{spec} local, M = 1"),
            &pool,
            &MForm::identity(spec.d),
            samples,
            seed,
            exec,
        )?,
        constraint_suite(&format!("{spec} local, random M"), &pool, &m, samples, seed, exec)?,
    ])
}

pub fn constraint_sweep(samples: usize, seed: u64, exec: Execution) -> Result<Section> {
    let mut reports = Vec::new();
    for f in Family::ALL {
        reports.extend(local_constraints(&GroupSpec::smallest(f), samples, seed, exec)?);
    }
    reports.push(quantum_positive_check(samples, seed, exec)?);
    let pass = reports.iter().all(|r| r.pass);
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Ok(Section {
        criterion: 5,
        name: "constraints",
        pass,
        summary: format!(
            "{} suites x {samples} tuples, worst residual {worst:e}",
            reports.len()
        ),
        detail: serde_json::to_value(&reports)?,
    })
}

pub const NOGO_TARGETS: [(Family, usize); 4] =
    [(Family::SO, 4), (Family::Sp, 8), (Family::SU, 6), (Family::G2, 7)];

pub fn nogo_sweep(seed: u64, tol: Tolerances, exec: Execution) -> Result<Section> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (f, d) in NOGO_TARGETS {
        let spec = GroupSpec::new(f, d)?;
        let w = construct(&spec, Construction::Interacting, seed)?;
        let r = refute(&spec, &w, tol)?;
        let refuted = r.refuted() && r.residual >= tol.refute;
        let locals = local_algebra(&generators(&spec)?)?.generators;
        let results = exec.map(locals.len(), |k| refute(&spec, &locals[k], tol));
        let mut local_residual: f64 = 0.0;
        let mut local_ok = true;
        for res in results {
            let res = res?;
            local_ok &= res.outcome == Outcome::Consistent && res.residual <= tol.consistent;
            local_residual = local_residual.max(res.residual);
        }
        pass &= refuted && local_ok;
        rows.push(json!({
            "group": spec,
            "interacting_step": r.step,
            "interacting_violation": r.residual,
            "refuted": refuted,
            "local_generators": locals.len(),
            "local_max_residual": local_residual,
            "local_consistent": local_ok,
        }));
    }
    let bracket = g2_bracket_residuals();
    let bracket_fails = bracket.iter().any(|r| *r > tol.refute);
    pass &= bracket_fails;
    Ok(Section {
        criterion: 6,
        name: "nogo",
        pass,
        summary: format!(
            "{} groups refuted; bracket identity fails: {bracket_fails}",
            rows.len()
        ),
        detail: json!({ "groups": rows, "bracket_residuals": bracket }),
    })
}

pub fn escape_signature() -> Result<Section> {
    let mut dims = Vec::new();
    let mut pass = true;
    for d in 3..=10 {
        let got = stabilizer_commutant_dims(d)?;
        pass &= got == if d == 3 { 3 } else { 2 };
        dims.push(json!({ "d": d, "dim": got }));
    }
    Ok(Section {
        criterion: 7,
        name: "d3_escape",
        pass,
        summary: "stabilizer commutant is 3-dimensional only at d = 3".into(),
        detail: Value::Array(dims),
    })
}

pub fn irrep_lemmas() -> Result<Section> {
    let mut rows = Vec::new();
    for n in 3..=12 {
        rows.extend(verify_lemma(Series::Su, n)?);
    }
    for n in 2..=8 {
        rows.extend(verify_lemma(Series::Sp, n)?);
    }
    let sp2: Vec<u64> = enumerate_irreps(Series::Sp, 2, 10)?
        .iter()
        .map(|e| e.dim)
        .collect();
    let pass = rows.iter().all(|r| r.holds) && sp2 == [1, 4, 5, 10];
    Ok(Section {
        criterion: 8,
        name: "irrep_lemmas",
        pass,
        summary: format!("{} lemma instances", rows.len()),
        detail: json!({ "lemmas": rows, "sp2_smallest": sp2 }),
    })
}

pub fn run_all(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let sections = vec![
        catalog_integrity()?,
        transitivity_sweep(16, 10, cfg.seed, cfg.exec)?,
        commutant_fixtures()?,
        clifford_pipeline()?,
        constraint_sweep(cfg.samples, cfg.seed, cfg.exec)?,
        nogo_sweep(cfg.seed, cfg.tol, cfg.exec)?,
        escape_signature()?,
        irrep_lemmas()?,
    ];
    Ok(SuiteReport {
        seed: cfg.seed,
        samples: cfg.samples,
        tol_consistent: cfg.tol.consistent,
        tol_refute: cfg.tol.refute,
        pass: sections.iter().all(|s| s.pass),
        sections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_sections_pass() {
        for s in [
            catalog_integrity(),
            commutant_fixtures(),
            escape_signature(),
            irrep_lemmas(),
        ] {
            let s = s.unwrap();
            assert!(s.pass, "{}: {}", s.name, s.detail);
        }
    }

    #[test]
    fn expected_dims() {
        let g = |f, d| expected_algebra_dim(&GroupSpec::new(f, d).unwrap());
        assert_eq!(g(Family::SO, 5), 10);
        assert_eq!(g(Family::SU, 6), 8);
        assert_eq!(g(Family::U, 6), 9);
        assert_eq!(g(Family::Sp, 8), 10);
        assert_eq!(g(Family::SpSU2, 8), 13);
    }
}

//! Numerical refutation of interacting generators for every sphere-transitive
//! family except `SO(3)`, and the positive check for the quantum case.
//!
//! Each refuter takes a joint generator with the admissible zero pattern,
//! projects it with stabilizer twirls and sign flips until a single coupling
//! block is isolated, and evaluates the second-order constraints that force
//! that block to vanish. Values below `-tol_refute` refute; values between
//! `-tol_refute` and `-tol_consistent` are reported as inconclusive.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    g2_axis_rotation, g2_basis, g2_special_elements, generators, minus_identity_witness, stabilizer_of,
    stabilizer_subalgebra, AlgebraBasis, Family, GroupSpec,
};
use crate::error::{Error, Result};
use crate::gpt::{
    constraint_suite, decompose_generator, generator_from_blocks, local_element, noninteracting_check,
    random_local_generator, swap_systems, BlockLayout, CheckReport, ConstraintForms, MForm,
};
use crate::linalg::{
    antisymmetry_residual, commutator, expm, frobenius_inner, realign, ComplexMatrix, RealMatrix,
};
use crate::par::Execution;
use crate::realify::pauli;
use crate::sampling::{algebra_element, antisymmetric_matrix, stream};
use crate::transitivity::{commutant, BipartiteTwirl, Constraint, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub consistent: f64,
    pub refute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            consistent: 1e-9,
            refute: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn new(consistent: f64, refute: f64) -> Result<Self> {
        if !(consistent > 0.0 && consistent < refute) {
            return Err(Error::Precondition(format!(
                "need 0 < tol ({consistent:e}) < tol_refute ({refute:e})"
            )));
        }
        Ok(Tolerances { consistent, refute })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "so_d")]
    SoD,
    #[serde(rename = "minus_one")]
    MinusOne,
    #[serde(rename = "su_d")]
    SuD,
    #[serde(rename = "g2_xy")]
    G2Xy,
    #[serde(rename = "g2_bracket")]
    G2Bracket,
    #[serde(rename = "g2_Y1")]
    G2Y1,
}

impl Step {
    pub fn label(self) -> &'static str {
        match self {
            Step::SoD => "so_d",
            Step::MinusOne => "minus_one",
            Step::SuD => "su_d",
            Step::G2Xy => "g2_xy",
            Step::G2Bracket => "g2_bracket",
            Step::G2Y1 => "g2_Y1",
        }
    }
}

/// Which coupling rows a check targets: `x` for the first system's `X_i`,
/// `y` for the second system's `Y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Refuted,
    Consistent,
}

/// One evaluated proof step. `violation` is the nonnegative amount by which
/// the required inequality (or identity) fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepResult {
    pub step: Step,
    pub target: Target,
    /// 1-based axis.
    pub axis: usize,
    pub value: f64,
    pub violation: f64,
    pub vectors: BTreeMap<String, Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl StepResult {
    fn new(step: Step, target: Target, axis: usize, value: f64, violation: f64) -> Self {
        StepResult {
            step,
            target,
            axis,
            value,
            violation,
            vectors: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    fn vector(mut self, name: &str, v: &DVector<f64>) -> Self {
        self.vectors.insert(name.to_string(), v.iter().copied().collect());
        self
    }

    fn diag(mut self, name: &str, v: f64) -> Self {
        self.diagnostics.insert(name.to_string(), v);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefutationReport {
    pub family: GroupSpec,
    pub step: Step,
    pub outcome: Outcome,
    pub witness: Option<StepResult>,
    pub residual: f64,
    pub tol_consistent: f64,
    pub tol_refute: f64,
    pub checks: Vec<StepResult>,
}

impl RefutationReport {
    pub fn refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }
}

fn conclude(
    family: GroupSpec,
    default: Step,
    checks: Vec<StepResult>,
    tol: Tolerances,
) -> Result<RefutationReport> {
    let refuting = checks.iter().find(|c| c.violation > tol.refute).cloned();
    if let Some(w) = refuting {
        return Ok(RefutationReport {
            family,
            step: w.step,
            outcome: Outcome::Refuted,
            residual: w.violation,
            witness: Some(w),
            tol_consistent: tol.consistent,
            tol_refute: tol.refute,
            checks,
        });
    }
    if let Some(c) = checks.iter().find(|c| c.violation > tol.consistent) {
        return Err(Error::Inconclusive {
            step: c.step.label().to_string(),
            value: c.violation,
        });
    }
    let residual = checks
        .iter()
        .fold(0.0f64, |m, c| m.max(c.value.abs()).max(c.violation));
    Ok(RefutationReport {
        family,
        step: default,
        outcome: Outcome::Consistent,
        witness: None,
        residual,
        tol_consistent: tol.consistent,
        tol_refute: tol.refute,
        checks,
    })
}

fn e(d: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[k] = 1.0;
    v
}

fn projector(d: usize, k: usize) -> RealMatrix {
    let mut p = RealMatrix::zeros(d, d);
    p[(k, k)] = 1.0;
    p
}

fn check_input(w: &RealMatrix, d: usize) -> Result<()> {
    let l = BlockLayout::new(d);
    if w.shape() != (l.dim(), l.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "generator {:?} for d = {d}",
            w.shape()
        )));
    }
    let r = antisymmetry_residual(w);
    if r > 1e-9 {
        return Err(Error::NotAntisymmetric(r));
    }
    let f = decompose_generator(w)?.forbidden.max();
    if f > 1e-9 {
        return Err(Error::Precondition(format!(
            "generator violates the first-order zero pattern (norm {f:e})"
        )));
    }
    Ok(())
}

/// `½(W ∓ L W Lᵀ)` for an orthogonal joint operator `L`.
fn average(w: &RealMatrix, l: &RealMatrix, sign: f64) -> RealMatrix {
    (w + l * w * l.transpose() * sign) * 0.5
}

fn oriented(w: &RealMatrix, target: Target) -> Result<RealMatrix> {
    match target {
        Target::X => Ok(w.clone()),
        Target::Y => swap_systems(w),
    }
}

/// `a ↦ e+−₂` at `b = e_k'`, `x = a` over the basis, returning the minimum.
fn so_d_axis(
    w: &RealMatrix,
    stab: &BipartiteTwirl,
    d: usize,
    k: usize,
    target: Target,
) -> Result<StepResult> {
    let wp = stab.apply(w, Side::Right)?;
    let pattern = llast_residual(&wp, k)?;
    let k2 = (k + 1) % d;
    let h = RealMatrix::identity(d, d) - (projector(d, k) + projector(d, k2)) * 2.0;
    let anti = average(&wp, &local_element(&RealMatrix::identity(d, d), &h), -1.0);
    let forms = ConstraintForms::new(&anti, &MForm::identity(d))?;
    let b = e(d, k2);
    let mut best = (f64::INFINITY, 0);
    for i in 0..d {
        let a = e(d, i);
        let v = forms.second_order(&a, &b, &a, &b)[2];
        if v < best.0 {
            best = (v, i);
        }
    }
    let a = e(d, best.1);
    Ok(
        StepResult::new(Step::SoD, target, k + 1, best.0, (-best.0).max(0.0))
            .vector("a", &a)
            .vector("b", &b)
            .vector("x", &a)
            .diag("llast_pattern_residual", pattern),
    )
}

/// Distance of a right-twirled generator from the shape with only `X_k` in
/// the coupling rows and a corner in `M ⊗ span{P_k, Q_k}`.
fn llast_residual(wp: &RealMatrix, k: usize) -> Result<f64> {
    let g = decompose_generator(wp)?;
    let d = g.d;
    let mut r = g.y0.norm_squared();
    r += g.y_row.iter().map(|m| m.norm_squared()).sum::<f64>();
    r += g
        .x_row
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, m)| m.norm_squared())
        .sum::<f64>();
    let p = crate::linalg::vec_rm(&projector(d, k));
    let q = crate::linalg::vec_rm(&(RealMatrix::identity(d, d) - projector(d, k)));
    let q = &q / q.norm();
    let realigned = realign(&g.z, d);
    let kept = &realigned * (&p * p.transpose() + &q * q.transpose());
    r += (realigned - kept).norm_squared();
    Ok(r.sqrt())
}

fn so_d_refute_checks(spec: GroupSpec, w: &RealMatrix) -> Result<Vec<StepResult>> {
    let d = spec.d;
    let mut checks = Vec::new();
    let stabs = (0..d)
        .map(|k| BipartiteTwirl::new(&stabilizer_subalgebra(&spec, k + 1)?))
        .collect::<Result<Vec<_>>>()?;
    for target in [Target::X, Target::Y] {
        let wt = oriented(w, target)?;
        for (k, stab) in stabs.iter().enumerate() {
            checks.push(so_d_axis(&wt, stab, d, k, target)?);
        }
    }
    Ok(checks)
}

pub fn so_d_refute(d: usize, w: &RealMatrix, tol: Tolerances) -> Result<RefutationReport> {
    if d < 4 {
        return Err(Error::Precondition(format!(
            "the stabilizer argument needs d >= 4, got d = {d}"
        )));
    }
    let spec = GroupSpec::new(Family::SO, d)?;
    check_input(w, d)?;
    conclude(spec, Step::SoD, so_d_refute_checks(spec, w)?, tol)
}

/// Evaluates `e+−₂` (`x = a`) and `e−+₂` (`y = −b`) on an element of the
/// sign-flipped shape for all basis pairs `(a, b)`.
fn minus_one_eval(
    anti: &RealMatrix,
    d: usize,
    step: Step,
    target: Target,
    axis: usize,
) -> Result<StepResult> {
    let forms = ConstraintForms::new(anti, &MForm::identity(d))?;
    let g = decompose_generator(anti)?;
    let s: f64 = g.x_row.iter().map(|m| m.norm_squared()).sum();
    let mut worst = (f64::INFINITY, 0, 0);
    let mut sum1 = 0.0;
    let mut pair = 0.0f64;
    for i in 0..d {
        let a = e(d, i);
        for j in 0..d {
            let b = e(d, j);
            let v1 = forms.second_order(&a, &b, &a, &b)[2];
            let v2 = forms.second_order(&a, &b, &a, &-&b)[1];
            sum1 += v1;
            pair = pair.max((v1 + v2).abs());
            let m = v1.min(v2);
            if m < worst.0 {
                worst = (m, i, j);
            }
        }
    }
    let lhs = d as f64 * s;
    Ok(StepResult::new(step, target, axis, worst.0, (-worst.0).max(0.0))
        .vector("a", &e(d, worst.1))
        .vector("b", &e(d, worst.2))
        .diag("trace_lhs", lhs)
        .diag("trace_rhs", lhs + sum1)
        .diag("pair_sum_residual", pair))
}

pub fn minus_one_refute(spec: &GroupSpec, w: &RealMatrix, tol: Tolerances) -> Result<RefutationReport> {
    let spec = GroupSpec::new(spec.family, spec.d)?;
    let d = spec.d;
    let x = minus_identity_witness(&spec)?
        .ok_or_else(|| Error::Precondition(format!("{spec} does not contain -1")))?;
    check_input(w, d)?;
    let h = expm(&(x * std::f64::consts::PI))?;
    let l = local_element(&RealMatrix::identity(d, d), &h);
    let mut checks = Vec::new();
    for target in [Target::X, Target::Y] {
        let wt = oriented(w, target)?;
        let anti = average(&wt, &l, -1.0);
        checks.push(minus_one_eval(&anti, d, Step::MinusOne, target, 0)?);
    }
    conclude(spec, Step::MinusOne, checks, tol)
}

/// Distance of `z` from the depolarized pattern of the `SU` stabilizer of
/// `e_k` (`n = d/2`, partner axis `k + n`). Only meaningful for `n >= 4`:
/// at `n = 3` the stabilizer is `SU(2)`, whose commutant is quaternionic.
pub fn w_depol_residual(z: &RealMatrix, k: usize) -> f64 {
    let d = z.nrows();
    let n = d / 2;
    let unit = |i: usize, j: usize| {
        let mut m = RealMatrix::zeros(d, d);
        m[(i, j)] = 1.0;
        m
    };
    let mut pattern = vec![unit(k, k), unit(k, k + n), unit(k + n, k), unit(k + n, k + n)];
    let mut diag = RealMatrix::zeros(d, d);
    let mut off = RealMatrix::zeros(d, d);
    for i in (0..n).filter(|i| *i != k) {
        diag += unit(i, i) + unit(i + n, i + n);
        off += unit(i, i + n) - unit(i + n, i);
    }
    if n > 1 {
        pattern.push(&diag / diag.norm());
        pattern.push(&off / off.norm());
    }
    let proj = pattern
        .iter()
        .fold(RealMatrix::zeros(d, d), |acc, p| acc + p * frobenius_inner(p, z));
    (z - proj).norm()
}

pub fn su_d_refute(d: usize, w: &RealMatrix, tol: Tolerances) -> Result<RefutationReport> {
    if d == 4 {
        return Err(Error::Precondition(
            "d = 4 contains -1 and is handled by the minus-one refuter".into(),
        ));
    }
    let spec = GroupSpec::new(Family::SU, d)?;
    check_input(w, d)?;
    let n = d / 2;
    let mut checks = Vec::new();
    let stabs = (0..n)
        .map(|k| BipartiteTwirl::new(&stabilizer_subalgebra(&spec, k + 1)?))
        .collect::<Result<Vec<_>>>()?;
    for target in [Target::X, Target::Y] {
        let wt = oriented(w, target)?;
        for (k, stab) in stabs.iter().enumerate() {
            let wp = stab.apply(&wt, Side::Right)?;
            let g = decompose_generator(&wp)?;
            let stray: f64 = g
                .x_row
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k && *i != k + n)
                .map(|(_, m)| m.norm_squared())
                .sum();
            let mut u = DVector::from_element(n, 1.0);
            u[k] = -1.0;
            u[(k + 1) % n] = -1.0;
            let full = DVector::from_fn(d, |i, _| u[i % n]);
            let h = RealMatrix::from_diagonal(&full);
            let anti = average(&wp, &local_element(&RealMatrix::identity(d, d), &h), -1.0);
            let mut r =
                minus_one_eval(&anti, d, Step::SuD, target, k + 1)?.diag("stray_coupling", stray.sqrt());
            if n >= 4 {
                r = r.diag("w_depol_residual", w_depol_residual(&g.y0, k));
            }
            checks.push(r);
        }
    }
    conclude(spec, Step::SuD, checks, tol)
}

/// `[[A, T], T] + A P₁ + P₁ A`.
pub fn g2_bracket_defect(a: &RealMatrix) -> RealMatrix {
    let (t, _) = g2_special_elements();
    let p1 = projector(7, 0);
    commutator(&commutator(a, &t), &t) + a * &p1 + &p1 * a
}

/// Defect norms over the 14 basis generators `r₁…r₇, s₁…s₇`.
pub fn g2_bracket_residuals() -> Vec<f64> {
    g2_basis().iter().map(|a| g2_bracket_defect(a).norm()).collect()
}

/// Rank of `A ↦ [[A,T],T] + AP₁ + P₁A` on the G2 algebra.
pub fn g2_bracket_map_rank() -> usize {
    let cols: Vec<DVector<f64>> = g2_basis()
        .iter()
        .map(|a| crate::linalg::vec_rm(&g2_bracket_defect(a)))
        .collect();
    let m = RealMatrix::from_columns(&cols);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > 1e-10 * max).count()
}

/// Label of the `k`-th G2 basis generator.
pub fn g2_basis_label(k: usize) -> String {
    if k < 7 {
        format!("r{}", k + 1)
    } else {
        format!("s{}", k - 6)
    }
}

/// The element with `Y₁ = ±T`, `X₁ = T` and nothing else.
pub fn g2_w_pm(sign: f64) -> RealMatrix {
    let (t, _) = g2_special_elements();
    let zero = RealMatrix::zeros(7, 7);
    let mut xr = vec![zero.clone(); 7];
    let mut yr = vec![zero.clone(); 7];
    xr[0] = t.clone();
    yr[0] = t * sign;
    generator_from_blocks(&zero, &zero, &yr, &xr, &RealMatrix::zeros(49, 49))
}

struct G2Context {
    full: BipartiteTwirl,
    stab: BipartiteTwirl,
    t: RealMatrix,
    h: RealMatrix,
    rotations: Vec<RealMatrix>,
}

impl G2Context {
    fn new() -> Result<Self> {
        let g2 = generators(&GroupSpec::new(Family::G2, 7)?)?;
        let stab = stabilizer_of(&g2, 1)?;
        let (t, h) = g2_special_elements();
        let rotations = (1..=7)
            .map(|k| {
                let g = g2_axis_rotation(k)?;
                Ok(local_element(&g, &g))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(G2Context {
            full: BipartiteTwirl::new(&g2)?,
            stab: BipartiteTwirl::new(&stab)?,
            t,
            h,
            rotations,
        })
    }
}

fn g2_axis(
    ctx: &G2Context,
    w0: &RealMatrix,
    target: Target,
    axis: usize,
    tol: Tolerances,
) -> Result<Vec<StepResult>> {
    let d = 7;
    let id = RealMatrix::identity(d, d);
    let m = MForm::identity(d);
    let e2 = e(d, 1);
    let mut out = Vec::new();

    // subtract both one-sided full twirls; each must be non-interacting
    let left = ctx.full.apply(w0, Side::Left)?;
    let right = ctx.full.apply(w0, Side::Right)?;
    let nl = noninteracting_check(&decompose_generator(&left)?, &RealMatrix::identity(49, 49))?;
    let nr = noninteracting_check(&decompose_generator(&right)?, &RealMatrix::identity(49, 49))?;
    let v_res = nl.max_residual.max(nr.max_residual);
    out.push(
        StepResult::new(Step::G2Xy, target, axis, v_res, v_res)
            .diag("v_equals_y0_residual", nl.max_residual)
            .diag("u_equals_x0_residual", nr.max_residual),
    );
    let wp = w0 - &left - &right;

    // double stabilizer twirl, then the H⊗H average
    let w2 = ctx.stab.apply(&wp, Side::Both)?;
    let g2 = decompose_generator(&w2)?;
    let tn = ctx.t.norm_squared();
    let x = frobenius_inner(&ctx.t, &g2.x_row[0]) / tn;
    let y = frobenius_inner(&ctx.t, &g2.y_row[0]) / tn;
    let w3 = average(&w2, &local_element(&ctx.h, &ctx.h), 1.0);
    let f3 = ConstraintForms::new(&w3, &m)?;
    let v_mp = f3.second_order(&e2, &e2, &e2, &e2)[1];
    let v_pm = f3.second_order(&e2, &e2, &e2, &e2)[2];
    let v = v_mp.min(v_pm);
    out.push(
        StepResult::new(Step::G2Xy, target, axis, v, (-v).max(0.0))
            .vector("a", &e2)
            .vector("b", &e2)
            .diag("x", x)
            .diag("y", y)
            .diag("e_mp2", v_mp)
            .diag("e_pm2", v_pm),
    );

    // a surviving x = ±y ≠ 0 would put W± in the algebra
    if x.abs().max(y.abs()) > tol.consistent {
        let residuals = g2_bracket_residuals();
        let (kmax, rmax) = residuals
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0), |best, (k, r)| if r > best.1 { (k, r) } else { best });
        let a = &g2_basis()[kmax];
        let wpm = g2_w_pm(if x * y >= 0.0 { 1.0 } else { -1.0 });
        let lift = crate::gpt::lift_left(a);
        let c = commutator(&commutator(&lift, &wpm), &wpm);
        let ni = noninteracting_check(&decompose_generator(&c)?, &RealMatrix::identity(49, 49))?;
        let mut r = StepResult::new(Step::G2Bracket, target, axis, rmax, rmax)
            .diag("generator", kmax as f64)
            .diag("double_commutator_trace_t2", ni.trace_t_squared)
            .diag("map_rank", g2_bracket_map_rank() as f64);
        r.vectors.insert("residuals".into(), residuals);
        out.push(r);
    }

    // Y₁ step: left stabilizer twirl and the H⊗1 flip
    let w4 = ctx.stab.apply(&wp, Side::Left)?;
    let las = average(&w4, &local_element(&ctx.h, &id), -1.0);
    let f = ConstraintForms::new(&las, &m)?;
    let mut first: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (e(d, i), e(d, j));
            for k in 0..d {
                first = first.max(f.first_order(&a, &b, &e(d, k), &b)[2].abs());
            }
        }
    }
    let mut worst = (f64::INFINITY, 0);
    for j in 0..d {
        let b = e(d, j);
        let v = f.second_order(&e2, &b, &e2, &b)[1];
        if v < worst.0 {
            worst = (v, j);
        }
    }
    let violation = (-worst.0).max(0.0).max(first);
    out.push(
        StepResult::new(Step::G2Y1, target, axis, worst.0, violation)
            .vector("a", &e2)
            .vector("b", &e(d, worst.1))
            .vector("y", &e(d, worst.1))
            .diag("first_order_residual", first),
    );
    Ok(out)
}

pub fn g2_refute(spec: &GroupSpec, w: &RealMatrix, tol: Tolerances) -> Result<RefutationReport> {
    if spec.family != Family::G2 || spec.d != 7 {
        return Err(Error::InvalidGroup {
            family: format!("{} (expected g2)", spec.family),
            d: spec.d,
        });
    }
    check_input(w, 7)?;
    let ctx = G2Context::new()?;
    let mut checks = Vec::new();
    for target in [Target::Y, Target::X] {
        let wt = oriented(w, target)?;
        for (k, rot) in ctx.rotations.iter().enumerate() {
            let w0 = rot * &wt * rot.transpose();
            checks.extend(g2_axis(&ctx, &w0, target, k + 1, tol)?);
        }
    }
    conclude(*spec, Step::G2Xy, checks, tol)
}

/// Runs the refuter appropriate to the family.
pub fn refute(spec: &GroupSpec, w: &RealMatrix, tol: Tolerances) -> Result<RefutationReport> {
    let spec = GroupSpec::new(spec.family, spec.d)?;
    match spec.family {
        Family::SO => so_d_refute(spec.d, w, tol),
        Family::SU if spec.d == 4 => minus_one_refute(&spec, w, tol),
        Family::SU => su_d_refute(spec.d, w, tol),
        Family::G2 => g2_refute(&spec, w, tol),
        _ => minus_one_refute(&spec, w, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// A single coupling block `X₁` on the `e₁e₂` plane.
    Interacting,
    /// A random element of the local algebra.
    Local,
    /// `W₊` with `X₁ = Y₁ = T` (G2 only).
    Bracket,
    /// Random blocks in every admissible position.
    Random,
}

pub fn construct(spec: &GroupSpec, kind: Construction, seed: u64) -> Result<RealMatrix> {
    let spec = GroupSpec::new(spec.family, spec.d)?;
    let d = spec.d;
    let zero = RealMatrix::zeros(d, d);
    Ok(match kind {
        Construction::Interacting => {
            let mut x1 = zero.clone();
            x1[(0, 1)] = 1.0;
            x1[(1, 0)] = -1.0;
            let mut xr = vec![zero.clone(); d];
            xr[0] = x1;
            generator_from_blocks(
                &zero,
                &zero,
                &vec![zero.clone(); d],
                &xr,
                &RealMatrix::zeros(d * d, d * d),
            )
        }
        Construction::Local => random_local_generator(&mut stream(seed, 0), &generators(&spec)?),
        Construction::Bracket => {
            if spec.family != Family::G2 {
                return Err(Error::Precondition(
                    "the bracket construction is specific to g2".into(),
                ));
            }
            g2_w_pm(1.0)
        }
        Construction::Random => {
            let mut rng = stream(seed, 1);
            let y0 = antisymmetric_matrix(&mut rng, d);
            let x0 = antisymmetric_matrix(&mut rng, d);
            let yr: Vec<RealMatrix> = (0..d).map(|_| antisymmetric_matrix(&mut rng, d)).collect();
            let xr: Vec<RealMatrix> = (0..d).map(|_| antisymmetric_matrix(&mut rng, d)).collect();
            let z = antisymmetric_matrix(&mut rng, d * d);
            generator_from_blocks(&y0, &x0, &yr, &xr, &z)
        }
    })
}

/// Dimension of the commutant of the `SO(d)` stabilizer of `e₁`.
pub fn stabilizer_commutant_dims(d: usize) -> Result<usize> {
    let stab = stabilizer_subalgebra(&GroupSpec::new(Family::SO, d)?, 1)?;
    Ok(commutant(&stab, Constraint::All).dim())
}

fn sigma_pair(mu: usize, nu: usize) -> ComplexMatrix {
    crate::linalg::ckron(&pauli(mu), &pauli(nu))
}

/// `ρ ↦ −(i/2)[σ_μ⊗σ_ν, ρ]` in the coordinates `r_κλ = tr(σ_κ⊗σ_λ ρ)`,
/// reordered to `(1, b, a, c)`.
pub fn adjoint_generator(mu: usize, nu: usize) -> RealMatrix {
    let hgen = sigma_pair(mu, nu);
    let basis: Vec<ComplexMatrix> = (0..16).map(|k| sigma_pair(k / 4, k % 4)).collect();
    let f = Complex64::new(0.0, -0.5);
    let kron_form = RealMatrix::from_fn(16, 16, |r, c| {
        let s = &basis[c];
        let dr = (&hgen * s - s * &hgen) * f;
        (&basis[r] * dr).trace().re / 4.0
    });
    BlockLayout::new(3).kron_to_block(&kron_form)
}

/// The 15 generators `ad(σ_μ⊗σ_ν)`, `(μ,ν) ≠ (0,0)` in lexicographic order.
pub fn adjoint_su4() -> Result<AlgebraBasis> {
    let gens = (1..16).map(|k| adjoint_generator(k / 4, k % 4)).collect();
    AlgebraBasis::new(16, gens)
}

/// Joint coordinates of a two-qubit density matrix in `(1, b, a, c)` order.
pub fn two_qubit_coordinates(rho: &ComplexMatrix) -> DVector<f64> {
    let k = DVector::from_fn(16, |i, _| (sigma_pair(i / 4, i % 4) * rho).trace().re);
    BlockLayout::new(3).vector_kron_to_block(&k)
}

/// Sampled probabilities, first-order residuals and second-order signs for
/// the adjoint `SU(4)` dynamics.
pub fn quantum_positive_check(samples: usize, seed: u64, exec: Execution) -> Result<CheckReport> {
    let h = adjoint_su4()?;
    let pool: Vec<RealMatrix> = (0..crate::gpt::POOL)
        .map(|k| {
            let x = algebra_element(&mut stream(seed ^ 0xad, k as u64), &h);
            let n = x.norm();
            x / n
        })
        .collect();
    constraint_suite(
        "quantum_adjoint_su4",
        &pool,
        &MForm::identity(3),
        samples,
        seed,
        exec,
    )
}

//! Sphere-transitivity certificates, commutants and Haar twirls.
//!
//! For an orthogonal group the Haar average `∫ G Z G⁻¹ dG` is the
//! Frobenius-orthogonal projection of `Z` onto the commutant of the Lie
//! algebra, so every twirl below is exact linear algebra.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::catalog::{antisymmetric_units, generators, symmetric_units, AlgebraBasis, GroupSpec};
use crate::error::{Error, Result};
use crate::gpt::{hat_generator, BlockLayout};
use crate::linalg::{
    common_nullspace, frobenius_inner, realign, unrealign, vec_rm, RealMatrix, NULLSPACE_TOL,
};
use crate::par::Execution;
use crate::sampling::{group_element, stream, unit_vector};

/// Singular values at or below this count as zero in span checks.
pub const SPAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct SpanCheck {
    pub vector: Vec<f64>,
    pub span_dim: usize,
    pub singular_values: Vec<f64>,
    pub pass: bool,
}

/// Whether `{X u : X ∈ h}` spans the tangent space `u⊥`.
pub fn tangent_span_check(h: &AlgebraBasis, u: &DVector<f64>) -> Result<SpanCheck> {
    let d = h.dim_space;
    if u.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a {d}-dimensional algebra",
            u.len()
        )));
    }
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("‖u‖ = {} is not 1", u.norm())));
    }
    let span_dim;
    let mut singular_values = Vec::new();
    if h.is_empty() {
        span_dim = 0;
    } else {
        let cols: Vec<DVector<f64>> = h.generators.iter().map(|x| x * u).collect();
        let m = RealMatrix::from_columns(&cols);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        span_dim = sv.iter().filter(|s| **s > SPAN_TOL).count();
        singular_values = sv;
    }
    Ok(SpanCheck {
        vector: u.iter().copied().collect(),
        span_dim,
        singular_values,
        pass: span_dim + 1 == d,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub label: String,
    pub checks: Vec<SpanCheck>,
    pub pass: bool,
}

/// Span checks at `e₁` and at `trials` seeded random unit vectors.
pub fn certify_algebra(
    h: &AlgebraBasis,
    label: &str,
    trials: usize,
    seed: u64,
) -> Result<TransitivityReport> {
    let d = h.dim_space;
    let mut vectors = Vec::with_capacity(trials + 1);
    let mut e1 = DVector::zeros(d);
    e1[0] = 1.0;
    vectors.push(e1);
    for i in 0..trials {
        vectors.push(unit_vector(&mut stream(seed, i as u64), d));
    }
    let checks = vectors
        .iter()
        .map(|u| tangent_span_check(h, u))
        .collect::<Result<Vec<_>>>()?;
    let pass = checks.iter().all(|c| c.pass);
    Ok(TransitivityReport {
        group: None,
        label: label.to_string(),
        checks,
        pass,
    })
}

pub fn transitivity_certificate(spec: &GroupSpec, trials: usize, seed: u64) -> Result<TransitivityReport> {
    let h = generators(spec)?;
    let mut r = certify_algebra(&h, &spec.to_string(), trials, seed)?;
    r.group = Some(*spec);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    All,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub constraint: Constraint,
    pub basis: Vec<RealMatrix>,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the span (the basis is orthonormal).
    pub fn project(&self, z: &RealMatrix) -> RealMatrix {
        self.basis
            .iter()
            .fold(RealMatrix::zeros(z.nrows(), z.ncols()), |acc, b| {
                acc + b * frobenius_inner(b, z)
            })
    }
}

/// Frobenius-orthonormal basis of the constrained matrix subspace.
fn constrained_basis(n: usize, constraint: Constraint) -> Vec<RealMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match constraint {
        Constraint::All => (0..n * n)
            .map(|k| {
                let mut e = RealMatrix::zeros(n, n);
                e[(k / n, k % n)] = 1.0;
                e
            })
            .collect(),
        Constraint::Symmetric => symmetric_units(n)
            .into_iter()
            .enumerate()
            .map(|(k, e)| if k < n { e } else { e * r })
            .collect(),
        Constraint::Antisymmetric => antisymmetric_units(n).into_iter().map(|e| e * r).collect(),
    }
}

/// `{Z : [X, Z] = 0 ∀X ∈ h}` intersected with the constraint subspace.
pub fn commutant(h: &AlgebraBasis, constraint: Constraint) -> CommutantBasis {
    let n = h.dim_space;
    let sub = constrained_basis(n, constraint);
    let ops: Vec<RealMatrix> = h
        .generators
        .iter()
        .map(|x| {
            let cols: Vec<DVector<f64>> = sub.iter().map(|b| vec_rm(&(x * b - b * x))).collect();
            if cols.is_empty() {
                RealMatrix::zeros(n * n, 0)
            } else {
                RealMatrix::from_columns(&cols)
            }
        })
        .collect();
    let coeffs = common_nullspace(&ops, sub.len(), NULLSPACE_TOL);
    let basis = coeffs
        .column_iter()
        .map(|c| {
            sub.iter()
                .zip(c.iter())
                .fold(RealMatrix::zeros(n, n), |acc, (b, w)| acc + b * *w)
        })
        .collect();
    CommutantBasis { constraint, basis }
}

fn ensure_antisymmetric(h: &AlgebraBasis) -> Result<()> {
    let r = h.max_antisymmetry_residual();
    if r > 1e-10 {
        return Err(Error::NotAntisymmetric(r));
    }
    Ok(())
}

/// Cached Haar average over the connected group generated by `h`.
#[derive(Debug, Clone)]
pub struct Twirl {
    pub dim: usize,
    pub commutant: CommutantBasis,
}

impl Twirl {
    pub fn new(h: &AlgebraBasis) -> Result<Self> {
        ensure_antisymmetric(h)?;
        Ok(Twirl {
            dim: h.dim_space,
            commutant: commutant(h, Constraint::All),
        })
    }

    pub fn apply(&self, z: &RealMatrix) -> Result<RealMatrix> {
        if z.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "twirl on {}x{} applied to {:?}",
                self.dim,
                self.dim,
                z.shape()
            )));
        }
        Ok(self.commutant.project(z))
    }

    /// The twirl as an operator on row-major vectorizations.
    pub fn projector(&self) -> RealMatrix {
        let n = self.dim * self.dim;
        let mut p = RealMatrix::zeros(n, n);
        for b in &self.commutant.basis {
            let v = vec_rm(b);
            p += &v * v.transpose();
        }
        p
    }
}

pub fn twirl(z: &RealMatrix, h: &AlgebraBasis) -> Result<RealMatrix> {
    Twirl::new(h)?.apply(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

/// Lifts `h` to `{0 ⊕ X}` on the hat space.
pub fn hat_algebra(h: &AlgebraBasis) -> Result<AlgebraBasis> {
    AlgebraBasis::new(h.dim_space + 1, h.generators.iter().map(hat_generator).collect())
}

/// Twirl of joint operators by the hat-lifted group of `h`, with the
/// projector computed once.
#[derive(Debug, Clone)]
pub struct BipartiteTwirl {
    layout: BlockLayout,
    projector: RealMatrix,
}

impl BipartiteTwirl {
    pub fn new(h: &AlgebraBasis) -> Result<Self> {
        Ok(BipartiteTwirl {
            layout: BlockLayout::new(h.dim_space),
            projector: Twirl::new(&hat_algebra(h)?)?.projector(),
        })
    }

    pub fn apply(&self, w: &RealMatrix, side: Side) -> Result<RealMatrix> {
        let l = self.layout;
        if w.shape() != (l.dim(), l.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "joint operator {:?} for d = {}",
                w.shape(),
                l.d
            )));
        }
        let p = &self.projector;
        let s = l.d + 1;
        let r = realign(&l.block_to_kron(w), s);
        // rows of the realignment carry the first factor, columns the second
        let r = match side {
            Side::Right => r * p,
            Side::Left => p * r,
            Side::Both => p * r * p,
        };
        Ok(l.kron_to_block(&unrealign(&r, s)))
    }
}

/// Twirl of a joint operator by the hat-lifted group acting on one or both
/// subsystems.
pub fn bipartite_twirl(w: &RealMatrix, h: &AlgebraBasis, side: Side) -> Result<RealMatrix> {
    BipartiteTwirl::new(h)?.apply(w, side)
}

/// Number of random exponential factors per Monte-Carlo group sample.
pub const MC_FACTORS: usize = 6;

/// Sampled average of `G Z Gᵀ`, used only as a loose cross-check.
pub fn monte_carlo_twirl(
    z: &RealMatrix,
    h: &AlgebraBasis,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> RealMatrix {
    let n = h.dim_space;
    let sum = exec.chunked_fold(
        samples,
        || RealMatrix::zeros(n, n),
        |acc, i| {
            let g = group_element(&mut stream(seed, i as u64), h, MC_FACTORS);
            *acc += &g * z * g.transpose();
        },
        |a, b| a + b,
    );
    sum / samples.max(1) as f64
}

//! Explicit real generator bases for the sphere-transitive groups.
//!
//! Complex algebras are rendered real by `Q ↦ 1₂⊗re Q + J⊗im Q` where
//! `J = [[0,1],[-1,0]]` plays the imaginary unit.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    antisymmetry_residual, expm, frobenius_inner, kron_all, nullspace, RealMatrix, NULLSPACE_TOL,
};
use crate::realify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    SO,
    SU,
    U,
    Sp,
    SpU1,
    SpSU2,
    G2,
    Spin7,
    Spin9,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::SO,
        Family::SU,
        Family::U,
        Family::Sp,
        Family::SpU1,
        Family::SpSU2,
        Family::G2,
        Family::Spin7,
        Family::Spin9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SO => "so",
            Family::SU => "su",
            Family::U => "u",
            Family::Sp => "sp",
            Family::SpU1 => "spu1",
            Family::SpSU2 => "spsu2",
            Family::G2 => "g2",
            Family::Spin7 => "spin7",
            Family::Spin9 => "spin9",
        }
    }

    pub fn admits(self, d: usize) -> bool {
        match self {
            Family::SO => d >= 3,
            Family::SU => d >= 4 && d.is_multiple_of(2),
            Family::U => d >= 2 && d.is_multiple_of(2),
            Family::Sp | Family::SpU1 => d >= 8 && d.is_multiple_of(4),
            Family::SpSU2 => d >= 4 && d.is_multiple_of(4),
            Family::G2 => d == 7,
            Family::Spin7 => d == 8,
            Family::Spin9 => d == 16,
        }
    }

    pub fn smallest_d(self) -> usize {
        match self {
            Family::SO => 3,
            Family::SU | Family::SpSU2 => 4,
            Family::U => 2,
            Family::Sp | Family::SpU1 => 8,
            Family::G2 => 7,
            Family::Spin7 => 8,
            Family::Spin9 => 16,
        }
    }

    /// Irreducible over the complex numbers, so the full commutant is `span{I}`.
    pub fn complex_irreducible(self) -> bool {
        matches!(self, Family::SO | Family::G2 | Family::Spin7 | Family::Spin9)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidGroup {
                family: s.to_string(),
                d: 0,
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub d: usize,
}

impl GroupSpec {
    pub fn new(family: Family, d: usize) -> Result<Self> {
        if !family.admits(d) {
            return Err(Error::InvalidGroup {
                family: family.name().to_string(),
                d,
            });
        }
        Ok(GroupSpec { family, d })
    }

    pub fn smallest(family: Family) -> Self {
        GroupSpec {
            family,
            d: family.smallest_d(),
        }
    }

    pub fn algebra_dim(&self) -> usize {
        let d = self.d;
        let sp = |n: usize| n * (2 * n + 1);
        match self.family {
            Family::SO => d * (d - 1) / 2,
            Family::SU => (d / 2) * (d / 2) - 1,
            Family::U => (d / 2) * (d / 2),
            Family::Sp => sp(d / 4),
            Family::SpU1 => sp(d / 4) + 1,
            Family::SpSU2 => sp(d / 4) + 3,
            Family::G2 => 14,
            Family::Spin7 => 21,
            Family::Spin9 => 36,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={})", self.family, self.d)
    }
}

/// Ordered basis of a matrix Lie algebra acting on `R^dim_space`.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub dim_space: usize,
    pub generators: Vec<RealMatrix>,
}

impl AlgebraBasis {
    pub fn new(dim_space: usize, generators: Vec<RealMatrix>) -> Result<Self> {
        for g in &generators {
            if g.shape() != (dim_space, dim_space) {
                return Err(Error::DimensionMismatch(format!(
                    "generator {:?} in a {dim_space}-dimensional algebra",
                    g.shape()
                )));
            }
        }
        Ok(AlgebraBasis {
            dim_space,
            generators,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn combination(&self, coeffs: &[f64]) -> RealMatrix {
        self.generators.iter().zip(coeffs).fold(
            RealMatrix::zeros(self.dim_space, self.dim_space),
            |acc, (g, c)| acc + g * *c,
        )
    }

    pub fn max_antisymmetry_residual(&self) -> f64 {
        self.generators
            .iter()
            .map(antisymmetry_residual)
            .fold(0.0, f64::max)
    }

    /// Numerical rank of the generators as vectors in matrix space.
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let k = self.len();
        let gram = RealMatrix::from_fn(k, k, |i, j| {
            frobenius_inner(&self.generators[i], &self.generators[j])
        });
        let ev = gram.symmetric_eigen().eigenvalues;
        let max = ev.iter().cloned().fold(0.0, f64::max);
        ev.iter().filter(|e| **e > 1e-12 * max).count()
    }

    /// Largest residual of `[X_i, X_j]` after projection onto the span.
    pub fn closure_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let (a, b) = (&self.generators[i], &self.generators[j]);
                let c = a * b - b * a;
                let p = crate::linalg::frobenius_project(&c, &self.generators)?;
                worst = worst.max((c - p).norm());
            }
        }
        Ok(worst)
    }

    pub fn extend(mut self, more: AlgebraBasis) -> Self {
        self.generators.extend(more.generators);
        self
    }
}

fn unit(n: usize, i: usize, j: usize) -> RealMatrix {
    let mut e = RealMatrix::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

pub(crate) fn eye(n: usize) -> RealMatrix {
    RealMatrix::identity(n, n)
}

/// `J = iσ₂` rendered real.
pub fn j2() -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

pub fn sigma1() -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma3() -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `E_ij - E_ji` for `i < j`, lexicographic.
pub fn antisymmetric_units(n: usize) -> Vec<RealMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j) - unit(n, j, i));
        }
    }
    out
}

/// Symmetric basis: the diagonal units, then `E_ij + E_ji` for `i < j`.
pub fn symmetric_units(n: usize) -> Vec<RealMatrix> {
    let mut out: Vec<RealMatrix> = (0..n).map(|i| unit(n, i, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j) + unit(n, j, i));
        }
    }
    out
}

/// Traceless symmetric basis: `E_ij + E_ji` for `i < j`, then
/// `E_kk - E_(k+1)(k+1)`.
pub fn traceless_symmetric_units(n: usize) -> Vec<RealMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j) + unit(n, j, i));
        }
    }
    for k in 0..n.saturating_sub(1) {
        out.push(unit(n, k, k) - unit(n, k + 1, k + 1));
    }
    out
}

fn so_basis(d: usize) -> Vec<RealMatrix> {
    antisymmetric_units(d)
}

fn su_basis(n: usize) -> Vec<RealMatrix> {
    let i2 = eye(2);
    let j = j2();
    let mut out: Vec<RealMatrix> = antisymmetric_units(n)
        .iter()
        .map(|a| kron_all(&[&i2, a]))
        .collect();
    out.extend(traceless_symmetric_units(n).iter().map(|s| kron_all(&[&j, s])));
    out
}

fn sp_basis(n: usize) -> Vec<RealMatrix> {
    let (i2, j, s1, s3) = (eye(2), j2(), sigma1(), sigma3());
    let mut out: Vec<RealMatrix> = antisymmetric_units(n)
        .iter()
        .map(|a| kron_all(&[&i2, &i2, a]))
        .collect();
    let sym = symmetric_units(n);
    out.extend(sym.iter().map(|b| kron_all(&[&j, &s3, b])));
    out.extend(sym.iter().map(|c| kron_all(&[&i2, &j, c])));
    out.extend(sym.iter().map(|dd| kron_all(&[&j, &s1, dd])));
    out
}

/// Generic element of the 7-dimensional G2 algebra in the `(r, s)`
/// parametrization.
pub fn g2_matrix(r: &[f64; 7], s: &[f64; 7]) -> RealMatrix {
    let [r1, r2, r3, r4, r5, r6, r7] = *r;
    let [s1, s2, s3, s4, s5, s6, s7] = *s;
    #[rustfmt::skip]
    let m = RealMatrix::from_row_slice(7, 7, &[
        0.0, r3, -r2, r5, -r4, -r7, -r6 + s6,
        -r3, 0.0, r1, r6, -r7 + s7, r4 - s4, r5 + s5,
        r2, -r1, 0.0, -s7, s6, s5, s4,
        -r5, -r6, s7, 0.0, -r1 + s1, -r2 + s2, -r3 + s3,
        r4, r7 - s7, -s6, r1 - s1, 0.0, s3, -s2,
        r7, -r4 + s4, -s5, r2 - s2, -s3, 0.0, s1,
        r6 - s6, -r5 - s5, -s4, r3 - s3, s2, -s1, 0.0,
    ]);
    m
}

/// The 14 single-parameter G2 generators, `r₁..r₇` then `s₁..s₇`.
pub fn g2_basis() -> Vec<RealMatrix> {
    (0..14)
        .map(|k| {
            let mut r = [0.0; 7];
            let mut s = [0.0; 7];
            if k < 7 {
                r[k] = 1.0;
            } else {
                s[k - 7] = 1.0;
            }
            g2_matrix(&r, &s)
        })
        .collect()
}

/// Stabilizer of `e₁` in G2 written with its defining parameter constraints
/// (`r₂ = r₃ = r₄ = r₅ = r₇ = 0`, `r₆ = s₆`).
pub fn g2_stabilizer_e1_literal() -> Vec<RealMatrix> {
    let b = g2_basis();
    vec![
        b[0].clone(),
        b[7].clone(),
        b[8].clone(),
        b[9].clone(),
        b[10].clone(),
        b[11].clone(),
        b[13].clone(),
        &b[5] + &b[12],
    ]
}

pub fn generators(spec: &GroupSpec) -> Result<AlgebraBasis> {
    let spec = GroupSpec::new(spec.family, spec.d)?;
    let d = spec.d;
    let gens = match spec.family {
        Family::SO => so_basis(d),
        Family::SU => su_basis(d / 2),
        Family::U => {
            let mut g = su_basis(d / 2);
            g.push(kron_all(&[&j2(), &eye(d / 2)]));
            g
        }
        Family::Sp => sp_basis(d / 4),
        Family::SpU1 => {
            let mut g = sp_basis(d / 4);
            g.extend(f_generators(FKind::U1, d)?.generators);
            g
        }
        Family::SpSU2 => {
            let mut g = sp_basis(d / 4);
            g.extend(f_generators(FKind::SU2, d)?.generators);
            g
        }
        Family::G2 => g2_basis(),
        Family::Spin7 => return realify::spin_algebra(7),
        Family::Spin9 => return realify::spin_algebra(9),
    };
    AlgebraBasis::new(d, gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FKind {
    U1,
    SU2,
}

/// Generators of the commuting factor acting alongside the symplectic part.
pub fn f_generators(kind: FKind, d: usize) -> Result<AlgebraBasis> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(Error::NotMultipleOfFour(d));
    }
    let (i2, j, s1, s3, im) = (eye(2), j2(), sigma1(), sigma3(), eye(d / 4));
    let g2 = kron_all(&[&j, &i2, &im]);
    let gens = match kind {
        FKind::U1 => vec![g2],
        FKind::SU2 => vec![kron_all(&[&s1, &j, &im]), g2, kron_all(&[&s3, &j, &im])],
    };
    AlgebraBasis::new(d, gens)
}

/// Basis of `{X in h : X e_axis = 0}`; `axis` is 1-based.
pub fn stabilizer_subalgebra(spec: &GroupSpec, axis: usize) -> Result<AlgebraBasis> {
    let h = generators(spec)?;
    stabilizer_of(&h, axis)
}

pub fn stabilizer_of(h: &AlgebraBasis, axis: usize) -> Result<AlgebraBasis> {
    let d = h.dim_space;
    if axis == 0 || axis > d {
        return Err(Error::InvalidAxis { axis, d });
    }
    let k = h.len();
    let eval = RealMatrix::from_fn(d, k, |r, c| h.generators[c][(r, axis - 1)]);
    let kernel = nullspace(&eval, NULLSPACE_TOL);
    let gens = kernel
        .iter()
        .map(|v: &DVector<f64>| h.combination(v.as_slice()))
        .collect();
    AlgebraBasis::new(d, gens)
}

/// An algebra element whose `π`-exponential is `-I`, where the family has one.
pub fn minus_identity_witness(spec: &GroupSpec) -> Result<Option<RealMatrix>> {
    let spec = GroupSpec::new(spec.family, spec.d)?;
    let d = spec.d;
    Ok(match spec.family {
        Family::U => Some(kron_all(&[&j2(), &eye(d / 2)])),
        Family::SU if (d / 2) % 2 == 0 => {
            let n = d / 2;
            let diag =
                RealMatrix::from_diagonal(&DVector::from_fn(n, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 }));
            Some(kron_all(&[&j2(), &diag]))
        }
        Family::Sp | Family::SpU1 | Family::SpSU2 => Some(kron_all(&[&j2(), &sigma3(), &eye(d / 4)])),
        Family::Spin7 => Some(realify::spin_algebra(7)?.generators[0].clone()),
        Family::Spin9 => Some(realify::spin_algebra(9)?.generators[0].clone()),
        Family::SO | Family::SU | Family::G2 => None,
    })
}

/// `(T, H)`: the antisymmetric commutant generator of the G2 stabilizer of
/// `e₁` and the group element `exp(π X_{r₃})`.
pub fn g2_special_elements() -> (RealMatrix, RealMatrix) {
    let mut t = RealMatrix::zeros(7, 7);
    t[(1, 2)] = 1.0;
    t[(2, 1)] = -1.0;
    t[(3, 4)] = 1.0;
    t[(4, 3)] = -1.0;
    t[(5, 6)] = -1.0;
    t[(6, 5)] = 1.0;
    let h = RealMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]));
    (t, h)
}

/// G2 group element mapping `e_axis` to `e₁` (`axis` 1-based), built from a
/// quarter turn generated by a single basis element.
pub fn g2_axis_rotation(axis: usize) -> Result<RealMatrix> {
    if axis == 0 || axis > 7 {
        return Err(Error::InvalidAxis { axis, d: 7 });
    }
    if axis == 1 {
        return Ok(eye(7));
    }
    let target = axis - 1;
    for x in g2_basis() {
        for angle in [std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2] {
            let r = expm(&(&x * angle))?;
            // r maps e1 to e_axis, so its transpose maps e_axis to e1
            if (r[(target, 0)] - 1.0).abs() < 1e-12 {
                return Ok(r.transpose());
            }
        }
    }
    Err(Error::Precondition(format!("no quarter turn maps e1 to e{axis}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub d: usize,
    pub algebra_dim: usize,
}

/// All `(family, d)` pairs with `d <= cap`, ordered by family then `d`.
pub fn catalog(cap: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for d in 1..=cap {
            if family.admits(d) {
                let spec = GroupSpec { family, d };
                out.push(CatalogEntry {
                    family,
                    d,
                    algebra_dim: spec.algebra_dim(),
                });
            }
        }
    }
    out
}

//! Bipartite Bloch-ball formalism.
//!
//! Joint vectors live in `R^{(1+d)²}` with component order `(1, b, a, c)`:
//! the second system's Bloch vector comes before the first system's, and
//! `c = a ⊗ b`. All index arithmetic goes through [`BlockLayout`].

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::catalog::AlgebraBasis;
use crate::error::{Error, Result};
use crate::linalg::{expm, kron, realign, schmidt_decompose, unrealign, RealMatrix, SchmidtTerm};
use crate::par::Execution;
use crate::sampling::{algebra_element, stream, unit_vector};

/// Index map for the `(1, b, a, c)` ordering. All indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub d: usize,
}

impl BlockLayout {
    pub fn new(d: usize) -> Self {
        BlockLayout { d }
    }

    /// Infers `d` from a joint dimension `(1+d)²`.
    pub fn for_joint_dim(n: usize) -> Result<Self> {
        let side = crate::linalg::tensor_factor(n).ok_or(Error::NotTensorSquare(n))?;
        if side == 0 {
            return Err(Error::NotTensorSquare(n));
        }
        Ok(BlockLayout { d: side - 1 })
    }

    pub fn dim(&self) -> usize {
        (self.d + 1) * (self.d + 1)
    }

    pub const fn one(&self) -> usize {
        0
    }

    pub fn b(&self, j: usize) -> usize {
        1 + j
    }

    pub fn a(&self, i: usize) -> usize {
        1 + self.d + i
    }

    pub fn c(&self, i: usize, j: usize) -> usize {
        1 + 2 * self.d + i * self.d + j
    }

    /// Position of kron index `i(d+1) + j` (hat indices, 0 = the constant).
    pub fn from_kron(&self, k: usize) -> usize {
        let s = self.d + 1;
        match (k / s, k % s) {
            (0, 0) => self.one(),
            (0, j) => self.b(j - 1),
            (i, 0) => self.a(i - 1),
            (i, j) => self.c(i - 1, j - 1),
        }
    }

    fn perm(&self) -> Vec<usize> {
        (0..self.dim()).map(|k| self.from_kron(k)).collect()
    }

    pub fn kron_to_block(&self, m: &RealMatrix) -> RealMatrix {
        let p = self.perm();
        let mut out = RealMatrix::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                out[(p[r], p[c])] = m[(r, c)];
            }
        }
        out
    }

    pub fn block_to_kron(&self, m: &RealMatrix) -> RealMatrix {
        let p = self.perm();
        RealMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(p[r], p[c])])
    }

    pub fn vector_kron_to_block(&self, v: &DVector<f64>) -> DVector<f64> {
        let p = self.perm();
        let mut out = DVector::zeros(v.len());
        for k in 0..v.len() {
            out[p[k]] = v[k];
        }
        out
    }

    /// `(1, b, a, a⊗b)` without norm checks.
    pub fn joint(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let d = self.d;
        let mut v = DVector::zeros(self.dim());
        v[0] = 1.0;
        for j in 0..d {
            v[self.b(j)] = b[j];
        }
        for i in 0..d {
            v[self.a(i)] = a[i];
            for j in 0..d {
                v[self.c(i, j)] = a[i] * b[j];
            }
        }
        v
    }

    fn check_joint(&self, m: &RealMatrix) -> Result<()> {
        if m.shape() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} joint operator for d = {}, got {:?}",
                self.d,
                m.shape(),
                n = self.dim()
            )));
        }
        Ok(())
    }
}

pub fn hat(a: &DVector<f64>) -> DVector<f64> {
    let mut v = DVector::zeros(a.len() + 1);
    v[0] = 1.0;
    v.rows_mut(1, a.len()).copy_from(a);
    v
}

/// `1 ⊕ A`.
pub fn hat_op(a: &RealMatrix) -> RealMatrix {
    let d = a.nrows();
    let mut m = RealMatrix::identity(d + 1, d + 1);
    m.view_mut((1, 1), (d, d)).copy_from(a);
    m
}

/// `0 ⊕ X`, the algebra version of [`hat_op`].
pub fn hat_generator(x: &RealMatrix) -> RealMatrix {
    let d = x.nrows();
    let mut m = RealMatrix::zeros(d + 1, d + 1);
    m.view_mut((1, 1), (d, d)).copy_from(x);
    m
}

fn check_ball(v: &DVector<f64>) -> Result<()> {
    let n = v.norm();
    if n > 1.0 + 1e-12 {
        return Err(Error::NormViolation(n));
    }
    Ok(())
}

pub fn product_state(a: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vectors of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    check_ball(a)?;
    check_ball(b)?;
    Ok(BlockLayout::new(a.len()).joint(a, b))
}

/// Probability of outcomes `(x, y)` on the joint state `omega`.
pub fn joint_prob(x: &DVector<f64>, y: &DVector<f64>, omega: &DVector<f64>) -> Result<f64> {
    let l = BlockLayout::new(x.len());
    if omega.len() != l.dim() || y.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for d = {}",
            omega.len(),
            l.d
        )));
    }
    Ok(l.joint(x, y).dot(omega) / 4.0)
}

/// Joint action of `hat(A) ⊗ hat(B)`, i.e. `diag(1, B, A, A⊗B)`.
pub fn local_element(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let l = BlockLayout::new(a.nrows());
    l.kron_to_block(&kron(&hat_op(a), &hat_op(b)))
}

/// First-system generator: `X` on the `a` block and `X ⊗ 1` on `c`.
pub fn lift_left(x: &RealMatrix) -> RealMatrix {
    let d = x.nrows();
    let l = BlockLayout::new(d);
    l.kron_to_block(&kron(&hat_generator(x), &RealMatrix::identity(d + 1, d + 1)))
}

/// Second-system generator: `Y` on the `b` block and `1 ⊗ Y` on `c`.
pub fn lift_right(y: &RealMatrix) -> RealMatrix {
    let d = y.nrows();
    let l = BlockLayout::new(d);
    l.kron_to_block(&kron(&RealMatrix::identity(d + 1, d + 1), &hat_generator(y)))
}

/// Swaps the two subsystems of a joint operator.
pub fn swap_systems(w: &RealMatrix) -> Result<RealMatrix> {
    let l = BlockLayout::for_joint_dim(w.nrows())?;
    let s = l.d + 1;
    let k = l.block_to_kron(w);
    let sw = |x: usize| (x % s) * s + x / s;
    Ok(
        l.kron_to_block(&RealMatrix::from_fn(k.nrows(), k.ncols(), |r, c| {
            k[(sw(r), sw(c))]
        })),
    )
}

/// `{lift_left(X)} ∪ {lift_right(Y)}` over the basis of `h`.
pub fn local_algebra(h: &AlgebraBasis) -> Result<AlgebraBasis> {
    let l = BlockLayout::new(h.dim_space);
    let mut gens: Vec<RealMatrix> = h.generators.iter().map(lift_left).collect();
    gens.extend(h.generators.iter().map(lift_right));
    AlgebraBasis::new(l.dim(), gens)
}

/// Random element `lift_left(X) + lift_right(Y)` with unit-norm `X, Y`.
pub fn random_local_generator<R: Rng>(rng: &mut R, h: &AlgebraBasis) -> RealMatrix {
    let side = |rng: &mut R| {
        let x = algebra_element(rng, h);
        let n = x.norm();
        if n > 0.0 {
            x / n
        } else {
            x
        }
    };
    let x = side(rng);
    let y = side(rng);
    lift_left(&x) + lift_right(&y)
}

pub fn constraint_value(
    g: &RealMatrix,
    x: &DVector<f64>,
    y: &DVector<f64>,
    a: &DVector<f64>,
    b: &DVector<f64>,
) -> Result<f64> {
    let l = BlockLayout::new(a.len());
    l.check_joint(g)?;
    Ok(l.joint(x, y).dot(&(g * l.joint(a, b))) / 4.0)
}

/// Tail of the `M` matrix on the `c` block.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MTail {
    Gamma(f64),
    #[serde(serialize_with = "ser_matrix")]
    NMatrix(RealMatrix),
}

fn ser_matrix<S: serde::Serializer>(m: &RealMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::linalg::MatrixJson::from(m).serialize(s)
}

/// `M = diag(1, β·1, α·1, tail)` in the `(1, b, a, c)` order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MForm {
    pub d: usize,
    pub beta: f64,
    pub alpha: f64,
    pub tail: MTail,
}

impl MForm {
    pub fn identity(d: usize) -> Self {
        MForm {
            d,
            beta: 1.0,
            alpha: 1.0,
            tail: MTail::Gamma(1.0),
        }
    }

    pub fn scalar(d: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let m = MForm {
            d,
            beta,
            alpha,
            tail: MTail::Gamma(gamma),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_n(d: usize, alpha: f64, beta: f64, n: RealMatrix) -> Result<Self> {
        let m = MForm {
            d,
            beta,
            alpha,
            tail: MTail::NMatrix(n),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        match &self.tail {
            MTail::Gamma(g) if *g > 0.0 => Ok(()),
            MTail::Gamma(_) => Err(Error::NotPositiveDefinite),
            MTail::NMatrix(n) => {
                let dd = self.d * self.d;
                if n.shape() != (dd, dd) {
                    return Err(Error::DimensionMismatch(format!(
                        "N must be {dd}x{dd}, got {:?}",
                        n.shape()
                    )));
                }
                check_spd(n)
            }
        }
    }

    fn assemble(&self, beta: f64, alpha: f64, tail: RealMatrix) -> RealMatrix {
        let l = BlockLayout::new(self.d);
        let d = self.d;
        let mut m = RealMatrix::zeros(l.dim(), l.dim());
        m[(0, 0)] = 1.0;
        for i in 0..d {
            m[(l.b(i), l.b(i))] = beta;
            m[(l.a(i), l.a(i))] = alpha;
        }
        m.view_mut((l.c(0, 0), l.c(0, 0)), (d * d, d * d))
            .copy_from(&tail);
        m
    }

    pub fn matrix(&self) -> RealMatrix {
        let dd = self.d * self.d;
        let tail = match &self.tail {
            MTail::Gamma(g) => RealMatrix::identity(dd, dd) * *g,
            MTail::NMatrix(n) => n.clone(),
        };
        self.assemble(self.beta, self.alpha, tail)
    }

    pub fn inverse(&self) -> RealMatrix {
        let dd = self.d * self.d;
        let tail = match &self.tail {
            MTail::Gamma(g) => RealMatrix::identity(dd, dd) / *g,
            MTail::NMatrix(n) => n
                .clone()
                .cholesky()
                .expect("validated positive definite")
                .inverse(),
        };
        self.assemble(1.0 / self.beta, 1.0 / self.alpha, tail)
    }

    pub fn is_identity(&self) -> bool {
        self.alpha == 1.0 && self.beta == 1.0 && self.tail == MTail::Gamma(1.0)
    }
}

fn check_spd(n: &RealMatrix) -> Result<()> {
    if (n - n.transpose()).norm() > 1e-12 * n.norm().max(1.0) {
        return Err(Error::NotPositiveDefinite);
    }
    n.clone().cholesky().map(|_| ()).ok_or(Error::NotPositiveDefinite)
}

/// `M W M⁻¹` and `M W² M⁻¹`, precomputed so each tuple costs two
/// matrix-vector products.
#[derive(Debug, Clone)]
pub struct ConstraintForms {
    pub layout: BlockLayout,
    pub k1: RealMatrix,
    pub k2: RealMatrix,
}

impl ConstraintForms {
    pub fn new(w: &RealMatrix, m: &MForm) -> Result<Self> {
        let layout = BlockLayout::new(m.d);
        layout.check_joint(w)?;
        let (k1, k2) = if m.is_identity() {
            (w.clone(), w * w)
        } else {
            let (mm, mi) = (m.matrix(), m.inverse());
            (&mm * w * &mi, &mm * (w * w) * &mi)
        };
        Ok(ConstraintForms { layout, k1, k2 })
    }

    fn forms(
        &self,
        k: &RealMatrix,
        a: &DVector<f64>,
        b: &DVector<f64>,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> [f64; 3] {
        let l = &self.layout;
        let u = k * l.joint(a, b);
        [
            l.joint(a, b).dot(&u),
            l.joint(&-a, y).dot(&u),
            l.joint(x, &-b).dot(&u),
        ]
    }

    /// `(e++, e−+, e+−)`, all of which must vanish.
    pub fn first_order(
        &self,
        a: &DVector<f64>,
        b: &DVector<f64>,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> [f64; 3] {
        self.forms(&self.k1, a, b, x, y)
    }

    /// `(e++, e−+, e+−)` with `W²`; signs must be `≤ 0, ≥ 0, ≥ 0`.
    pub fn second_order(
        &self,
        a: &DVector<f64>,
        b: &DVector<f64>,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> [f64; 3] {
        self.forms(&self.k2, a, b, x, y)
    }

    /// `a ↦ v(0,0)·K1 v(a,b)` style combinations that certify the zero
    /// pattern; returns the largest absolute value.
    pub fn zero_pattern_residual(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        let l = &self.layout;
        let z = DVector::zeros(l.d);
        let k = &self.k1;
        let form = |p: &DVector<f64>, q: &DVector<f64>, r: &DVector<f64>, s: &DVector<f64>| {
            l.joint(p, q).dot(&(k * l.joint(r, s)))
        };
        [
            form(&z, &z, a, b),
            form(&z, b, a, &z),
            form(&z, &z, a, &z),
            form(a, b, &z, &z),
            form(a, &z, &z, b),
            form(&z, &z, &z, b),
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn first_order_residuals(
    w: &RealMatrix,
    m: &MForm,
    a: &DVector<f64>,
    b: &DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<[f64; 3]> {
    Ok(ConstraintForms::new(w, m)?.first_order(a, b, x, y))
}

pub fn second_order_values(
    w: &RealMatrix,
    m: &MForm,
    a: &DVector<f64>,
    b: &DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<[f64; 3]> {
    Ok(ConstraintForms::new(w, m)?.second_order(a, b, x, y))
}

/// Amount by which the second-order values miss their required signs.
pub fn sign_violation(v: &[f64; 3]) -> f64 {
    v[0].max(0.0).max((-v[1]).max(0.0)).max((-v[2]).max(0.0))
}

/// Block decomposition of a joint generator.
#[derive(Debug, Clone)]
pub struct BipartiteGenerator {
    pub d: usize,
    pub w: RealMatrix,
    pub y0: RealMatrix,
    pub x0: RealMatrix,
    /// `Y_i[p,q] = W[b_p, c_{iq}]`.
    pub y_row: Vec<RealMatrix>,
    /// `X_i[p,q] = W[a_p, c_{qi}]`.
    pub x_row: Vec<RealMatrix>,
    /// The `c`–`c` block.
    pub z: RealMatrix,
    pub forbidden: ForbiddenNorms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForbiddenNorms {
    pub first_row_col: f64,
    pub ab_cross: f64,
}

impl ForbiddenNorms {
    pub fn max(&self) -> f64 {
        self.first_row_col.max(self.ab_cross)
    }
}

pub fn decompose_generator(w: &RealMatrix) -> Result<BipartiteGenerator> {
    let l = BlockLayout::for_joint_dim(w.nrows())?;
    l.check_joint(w)?;
    let d = l.d;
    let y0 = RealMatrix::from_fn(d, d, |p, q| w[(l.b(p), l.b(q))]);
    let x0 = RealMatrix::from_fn(d, d, |p, q| w[(l.a(p), l.a(q))]);
    let y_row = (0..d)
        .map(|i| RealMatrix::from_fn(d, d, |p, q| w[(l.b(p), l.c(i, q))]))
        .collect();
    let x_row = (0..d)
        .map(|i| RealMatrix::from_fn(d, d, |p, q| w[(l.a(p), l.c(q, i))]))
        .collect();
    let z = w.view((l.c(0, 0), l.c(0, 0)), (d * d, d * d)).into_owned();
    let first = (w.row(0).norm_squared() + w.column(0).norm_squared() - w[(0, 0)].powi(2)).sqrt();
    let cross = (w.view((l.b(0), l.a(0)), (d, d)).norm_squared()
        + w.view((l.a(0), l.b(0)), (d, d)).norm_squared())
    .sqrt();
    Ok(BipartiteGenerator {
        d,
        w: w.clone(),
        y0,
        x0,
        y_row,
        x_row,
        z,
        forbidden: ForbiddenNorms {
            first_row_col: first,
            ab_cross: cross,
        },
    })
}

impl BipartiteGenerator {
    pub fn layout(&self) -> BlockLayout {
        BlockLayout::new(self.d)
    }

    /// Operator Schmidt terms of the corner block.
    pub fn corner(&self) -> Result<Vec<SchmidtTerm>> {
        schmidt_decompose(&self.z)
    }

    /// Rebuilds the admissible part of `w` from the extracted blocks.
    pub fn assemble(&self) -> RealMatrix {
        let l = self.layout();
        let d = self.d;
        let mut w = RealMatrix::zeros(l.dim(), l.dim());
        for p in 0..d {
            for q in 0..d {
                w[(l.b(p), l.b(q))] = self.y0[(p, q)];
                w[(l.a(p), l.a(q))] = self.x0[(p, q)];
            }
        }
        for i in 0..d {
            for p in 0..d {
                for q in 0..d {
                    w[(l.b(p), l.c(i, q))] = self.y_row[i][(p, q)];
                    w[(l.c(i, q), l.b(p))] = -self.y_row[i][(p, q)];
                    w[(l.a(p), l.c(q, i))] = self.x_row[i][(p, q)];
                    w[(l.c(q, i), l.a(p))] = -self.x_row[i][(p, q)];
                }
            }
        }
        w.view_mut((l.c(0, 0), l.c(0, 0)), (d * d, d * d))
            .copy_from(&self.z);
        w
    }

    /// `w − assemble()`: the first row/column and the `a`–`b` cross blocks.
    pub fn remainder(&self) -> RealMatrix {
        &self.w - self.assemble()
    }

    pub fn coupling_norm(&self) -> f64 {
        let x: f64 = self.x_row.iter().map(|m| m.norm_squared()).sum();
        let y: f64 = self.y_row.iter().map(|m| m.norm_squared()).sum();
        (x + y).sqrt()
    }

    pub fn is_block_diagonal(&self, tol: f64) -> bool {
        self.coupling_norm() <= tol && self.forbidden.max() <= tol
    }
}

/// Builds the joint generator with the given blocks (first row/column and
/// cross blocks zero).
pub fn generator_from_blocks(
    y0: &RealMatrix,
    x0: &RealMatrix,
    y_row: &[RealMatrix],
    x_row: &[RealMatrix],
    z: &RealMatrix,
) -> RealMatrix {
    let d = y0.nrows();
    let l = BlockLayout::new(d);
    BipartiteGenerator {
        d,
        w: RealMatrix::zeros(l.dim(), l.dim()),
        y0: y0.clone(),
        x0: x0.clone(),
        y_row: y_row.to_vec(),
        x_row: x_row.to_vec(),
        z: z.clone(),
        forbidden: ForbiddenNorms {
            first_row_col: 0.0,
            ab_cross: 0.0,
        },
    }
    .assemble()
}

/// Symmetrizes the second tensor factor of a realigned operator.
fn symmetrize_columns(r: &RealMatrix, d: usize) -> RealMatrix {
    RealMatrix::from_fn(r.nrows(), r.ncols(), |i, k| {
        let (p, q) = (k / d, k % d);
        0.5 * (r[(i, k)] + r[(i, q * d + p)])
    })
}

fn symmetrize_rows(r: &RealMatrix, d: usize) -> RealMatrix {
    symmetrize_columns(&r.transpose(), d).transpose()
}

#[derive(Debug, Clone, Serialize)]
pub struct NonInteractingReport {
    pub check: &'static str,
    pub pass: bool,
    /// `‖P_{M⊗M₊}(NZN⁻¹) − X⊗1‖`.
    pub left_projection_residual: f64,
    /// `‖P_{M₊⊗M}(NZN⁻¹) − 1⊗Y‖`.
    pub right_projection_residual: f64,
    pub trace_t_squared: f64,
    pub max_residual: f64,
    pub commutation_residual: f64,
}

/// Checks that a block-diagonal generator acts as `X⊗1 + 1⊗Y` on the
/// correlation block.
pub fn noninteracting_check(g: &BipartiteGenerator, n: &RealMatrix) -> Result<NonInteractingReport> {
    let d = g.d;
    let dd = d * d;
    if n.shape() != (dd, dd) {
        return Err(Error::DimensionMismatch(format!(
            "N must be {dd}x{dd}, got {:?}",
            n.shape()
        )));
    }
    check_spd(n)?;
    let n_inv = n.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.inverse();
    let zt = n * &g.z * &n_inv;
    let id = RealMatrix::identity(d, d);
    let x1 = kron(&g.x0, &id);
    let y1 = kron(&id, &g.y0);
    let r = realign(&zt, d);
    let left = unrealign(&symmetrize_columns(&r, d), d);
    let right = unrealign(&symmetrize_rows(&r, d), d);
    let t = &zt - &x1 - &y1;
    let tr_t2 = (&t * &t).trace();
    let max_residual = t.norm();
    let commutation = (n * &g.z - &g.z * n).norm();
    Ok(NonInteractingReport {
        check: "noninteracting",
        pass: max_residual <= 1e-9 && commutation <= 1e-9,
        left_projection_residual: (left - x1).norm(),
        right_projection_residual: (right - y1).norm(),
        trace_t_squared: tr_t2,
        max_residual,
        commutation_residual: commutation,
    })
}

/// Symmetric commutant data for the `M` matrix of a group.
#[derive(Debug, Clone, Serialize)]
pub struct MFormSolution {
    /// Dimension of the symmetric commutant of `h` on `R^d`.
    pub single_symmetric_dim: usize,
    /// Whether every symmetric matrix commuting with `h` is scalar.
    pub single_scalar: bool,
    /// Dimension of the symmetric commutant of `{A⊗B}` on `R^d⊗R^d`.
    pub pair_symmetric_dim: usize,
    #[serde(skip)]
    pub pair_symmetric_basis: Vec<RealMatrix>,
    pub form: MForm,
}

/// The symmetric commutant of `{X⊗1, 1⊗Y}` is `C⊗C` restricted to symmetric
/// elements, where `C` is the commutant of `h`; its symmetric part is spanned
/// by `S⊗S'` and `A⊗A'` with `S, S'` symmetric and `A, A'` antisymmetric.
pub fn mform_solve(h: &AlgebraBasis) -> Result<MFormSolution> {
    use crate::transitivity::{commutant, Constraint};
    let sym = commutant(h, Constraint::Symmetric).basis;
    let anti = commutant(h, Constraint::Antisymmetric).basis;
    if sym.is_empty() {
        return Err(Error::Precondition("empty symmetric commutant".into()));
    }
    let d = h.dim_space;
    let id = RealMatrix::identity(d, d) / (d as f64).sqrt();
    let single_scalar = sym.len() == 1
        && (sym[0].clone() - &id * crate::linalg::frobenius_inner(&sym[0], &id)).norm() < 1e-10;
    let mut pair = Vec::new();
    for group in [&sym, &anti] {
        for p in group.iter() {
            for q in group.iter() {
                pair.push(kron(p, q));
            }
        }
    }
    let form = if pair.len() == 1 {
        MForm::identity(d)
    } else {
        MForm::with_n(d, 1.0, 1.0, RealMatrix::identity(d * d, d * d))?
    };
    Ok(MFormSolution {
        single_symmetric_dim: sym.len(),
        single_scalar,
        pair_symmetric_dim: pair.len(),
        pair_symmetric_basis: pair,
        form,
    })
}

/// Random `M` compatible with `h`: positive `α, β` and either a scalar tail
/// or `N = exp(S)` for a random symmetric `S` in the pair commutant.
pub fn random_mform<R: Rng>(rng: &mut R, sol: &MFormSolution) -> Result<MForm> {
    let d = sol.form.d;
    let pos = |rng: &mut R| 0.5 + rng.random::<f64>();
    let (alpha, beta) = (pos(rng), pos(rng));
    if sol.pair_symmetric_dim == 1 {
        let gamma = pos(rng);
        return MForm::scalar(d, alpha, beta, gamma);
    }
    let s = sol
        .pair_symmetric_basis
        .iter()
        .fold(RealMatrix::zeros(d * d, d * d), |acc, b| {
            acc + b * (rng.random::<f64>() - 0.5)
        });
    let n = expm(&s)?;
    let n = (&n + n.transpose()) * 0.5;
    MForm::with_n(d, alpha, beta, n)
}

/// Tuple reproducing a constraint violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
}

/// Outcome of a sampled check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub max_residual: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
struct Worst {
    value: f64,
    witness: Option<Witness>,
}

impl Worst {
    fn none() -> Self {
        Worst {
            value: 0.0,
            witness: None,
        }
    }

    fn offer(&mut self, value: f64, tuple: [&DVector<f64>; 4]) {
        if self.witness.is_none() || value > self.value {
            let v = |x: &DVector<f64>| x.iter().copied().collect();
            self.value = value;
            self.witness = Some(Witness {
                a: v(tuple[0]),
                b: v(tuple[1]),
                x: v(tuple[2]),
                y: v(tuple[3]),
                value,
            });
        }
    }

    fn merge(self, other: Worst) -> Worst {
        match (&self.witness, &other.witness) {
            (None, _) => other,
            (_, None) => self,
            _ if other.value > self.value => other,
            _ => self,
        }
    }
}

/// Sample `i` of a tuple stream: the first `2d` samples put `a` on the
/// coordinate axes `±e_k`, the rest are random.
fn sample_tuple(seed: u64, i: usize, d: usize) -> [DVector<f64>; 4] {
    let mut rng = stream(seed, i as u64);
    let mut a = unit_vector(&mut rng, d);
    if i < 2 * d {
        a = DVector::zeros(d);
        a[i / 2] = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    }
    let b = unit_vector(&mut rng, d);
    let x = unit_vector(&mut rng, d);
    let y = unit_vector(&mut rng, d);
    [a, b, x, y]
}

/// Number of distinct generators drawn for the sampled suites.
pub const POOL: usize = 16;

/// First-order residuals, second-order signs and group-level probabilities
/// for random elements of a generator family.
pub fn constraint_suite(
    name: &str,
    algebra: &[RealMatrix],
    m: &MForm,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<CheckReport> {
    let forms: Vec<ConstraintForms> = algebra
        .iter()
        .map(|w| ConstraintForms::new(w, m))
        .collect::<Result<_>>()?;
    let groups: Vec<RealMatrix> = algebra
        .iter()
        .map(|w| {
            let g = expm(w)?;
            Ok(m.matrix() * g * m.inverse())
        })
        .collect::<Result<_>>()?;
    let d = m.d;
    let worst = exec.chunked_fold(
        samples,
        Worst::none,
        |acc, i| {
            let [a, b, x, y] = sample_tuple(seed, i, d);
            let k = i % forms.len();
            let f = &forms[k];
            let first = f.first_order(&a, &b, &x, &y);
            let r1 = first.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let r2 = sign_violation(&f.second_order(&a, &b, &x, &y));
            let p = constraint_value(&groups[k], &x, &y, &a, &b).unwrap_or(f64::NAN);
            let r3 = (-p).max(p - 1.0).max(0.0);
            let r = r1.max(r2).max(if p.is_nan() { f64::INFINITY } else { r3 });
            acc.offer(r, [&a, &b, &x, &y]);
        },
        Worst::merge,
    );
    Ok(CheckReport {
        check: name.to_string(),
        pass: worst.value <= 1e-9,
        max_residual: worst.value,
        witness: worst.witness,
        samples,
        seed,
    })
}

/// Random local generators for [`constraint_suite`].
pub fn local_pool(h: &AlgebraBasis, seed: u64) -> Vec<RealMatrix> {
    (0..POOL)
        .map(|k| random_local_generator(&mut stream(seed ^ 0x5eed, k as u64), h))
        .collect()
}

/// Evaluates the zero-pattern combinations of the first-order constraints
/// on sampled `(a, b)`.
pub fn first_order_zero_pattern(w: &RealMatrix, m: &MForm, samples: usize, seed: u64) -> Result<CheckReport> {
    let f = ConstraintForms::new(w, m)?;
    let d = m.d;
    let mut worst = Worst::none();
    for i in 0..samples {
        let [a, b, _, _] = sample_tuple(seed, i, d);
        let r = f.zero_pattern_residual(&a, &b);
        worst.offer(r, [&a, &b, &a, &b]);
    }
    Ok(CheckReport {
        check: "first_order_zero_pattern".into(),
        pass: worst.value <= 1e-9,
        max_residual: worst.value,
        witness: worst.witness,
        samples,
        seed,
    })
}

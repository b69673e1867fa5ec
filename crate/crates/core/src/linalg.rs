//! Dense real and complex matrix kernels.
//!
//! Everything here is a thin layer over `nalgebra` dense matrices. Storage
//! inside `nalgebra` is column-major, but every flattening exposed by this
//! module (`vec_rm`, the JSON format) is row-major and indices are 0-based.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default relative singular-value threshold for nullspace computations.
pub const NULLSPACE_TOL: f64 = 1e-10;
/// Default absolute weight below which Schmidt terms are dropped.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// One term `weight * (left ⊗ right)` of an operator Schmidt decomposition.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    pub left: RealMatrix,
    pub right: RealMatrix,
    pub weight: f64,
}

pub fn kron(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    a.kronecker(b)
}

pub fn kron_all(factors: &[&RealMatrix]) -> RealMatrix {
    factors
        .iter()
        .fold(RealMatrix::identity(1, 1), |acc, f| acc.kronecker(*f))
}

pub fn ckron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

fn ensure_square(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring around a degree-13 Padé
/// approximant.
pub fn expm(x: &RealMatrix) -> Result<RealMatrix> {
    let n = ensure_square(x)?;
    let eye = RealMatrix::identity(n, n);
    let norm1 = (0..n)
        .map(|j| x.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x * 2f64.powi(-squarings);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let u_inner =
        &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &eye * b[1];
    let u = &a * u_inner;
    let v =
        &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &eye * b[0];

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Precondition("Padé denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Right singular vectors of `l` whose singular values fall below
/// `tol * sigma_max`. Wide inputs are padded with zero rows so the SVD
/// returns the full right basis.
fn right_null_basis(l: &RealMatrix, threshold: impl Fn(f64) -> f64) -> RealMatrix {
    let (m, n) = l.shape();
    if n == 0 {
        return RealMatrix::zeros(0, 0);
    }
    if m == 0 {
        return RealMatrix::identity(n, n);
    }
    let padded = if m < n {
        let mut p = RealMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(l);
        p
    } else {
        l.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = threshold(smax);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cut)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        RealMatrix::zeros(n, 0)
    } else {
        RealMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of `{v : |l v| <= tol * sigma_max(l) |v|}`.
pub fn nullspace(l: &RealMatrix, tol: f64) -> Vec<DVector<f64>> {
    let basis = right_null_basis(l, |smax| tol * smax);
    basis.column_iter().map(|c| c.into_owned()).collect()
}

/// Orthonormal basis (as columns) of the common kernel of several operators
/// sharing the same domain. Each operator is restricted to the kernel of the
/// previous ones, so no stacked matrix is ever formed.
pub fn common_nullspace(ops: &[RealMatrix], n: usize, tol: f64) -> RealMatrix {
    let mut basis = RealMatrix::identity(n, n);
    for op in ops {
        if basis.ncols() == 0 {
            break;
        }
        let scale = op.norm();
        if scale == 0.0 {
            continue;
        }
        let restricted = op * &basis;
        let coeffs = right_null_basis(&restricted, |_| tol * scale);
        basis = &basis * coeffs;
    }
    basis
}

/// Complex analogue of [`nullspace`].
pub fn complex_nullspace(l: &ComplexMatrix, tol: f64) -> Vec<DVector<Complex64>> {
    let (m, n) = l.shape();
    let padded = if m < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(l);
        p
    } else {
        l.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol * smax)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

pub fn sym_antisym_split(z: &RealMatrix) -> Result<(RealMatrix, RealMatrix)> {
    ensure_square(z)?;
    let zt = z.transpose();
    Ok(((z + &zt) * 0.5, (z - &zt) * 0.5))
}

pub fn antisymmetry_residual(z: &RealMatrix) -> f64 {
    (z + z.transpose()).norm()
}

pub fn commutator(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    a * b - b * a
}

pub fn frobenius_inner(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Row-major flattening.
pub fn vec_rm(m: &RealMatrix) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.transpose().iter().cloned())
}

/// Inverse of [`vec_rm`].
pub fn unvec_rm(v: &[f64], rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_row_slice(rows, cols, v)
}

/// Integer square root of a perfect square, if it is one.
pub fn tensor_factor(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d * d == n).then_some(d)
}

/// Realignment of an operator on `R^d ⊗ R^d`: entry `((i1,i2),(j1,j2))`
/// moves to `((i1,j1),(i2,j2))`, so `kron(A, B)` becomes `vec(A) vec(B)^T`.
pub fn realign(c: &RealMatrix, d: usize) -> RealMatrix {
    let mut r = RealMatrix::zeros(d * d, d * d);
    for i1 in 0..d {
        for i2 in 0..d {
            for j1 in 0..d {
                for j2 in 0..d {
                    r[(i1 * d + j1, i2 * d + j2)] = c[(i1 * d + i2, j1 * d + j2)];
                }
            }
        }
    }
    r
}

/// Inverse of [`realign`] (the map is an involution up to index naming).
pub fn unrealign(r: &RealMatrix, d: usize) -> RealMatrix {
    let mut c = RealMatrix::zeros(d * d, d * d);
    for i1 in 0..d {
        for i2 in 0..d {
            for j1 in 0..d {
                for j2 in 0..d {
                    c[(i1 * d + i2, j1 * d + j2)] = r[(i1 * d + j1, i2 * d + j2)];
                }
            }
        }
    }
    c
}

pub fn schmidt_decompose(c: &RealMatrix) -> Result<Vec<SchmidtTerm>> {
    schmidt_decompose_tol(c, SCHMIDT_TOL)
}

/// Operator Schmidt decomposition `c = Σ w_j left_j ⊗ right_j` via the SVD of
/// the realigned matrix. Terms are sorted by descending weight.
pub fn schmidt_decompose_tol(c: &RealMatrix, tol: f64) -> Result<Vec<SchmidtTerm>> {
    let n = ensure_square(c)?;
    let d = tensor_factor(n).ok_or(Error::NotTensorSquare(n))?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let svd = realign(c, d).svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let v_t = svd.v_t.expect("right vectors requested");
    let mut terms: Vec<SchmidtTerm> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > tol)
        .map(|(k, w)| SchmidtTerm {
            left: unvec_rm(u.column(k).as_slice(), d, d),
            right: unvec_rm(v_t.row(k).transpose().as_slice(), d, d),
            weight: *w,
        })
        .collect();
    terms.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(terms)
}

pub fn schmidt_reassemble(terms: &[SchmidtTerm], d: usize) -> RealMatrix {
    terms.iter().fold(RealMatrix::zeros(d * d, d * d), |acc, t| {
        acc + kron(&t.left, &t.right) * t.weight
    })
}

/// Frobenius-orthogonal projection of `z` onto `span(basis)`.
pub fn frobenius_project(z: &RealMatrix, basis: &[RealMatrix]) -> Result<RealMatrix> {
    if basis.is_empty() {
        return Ok(RealMatrix::zeros(z.nrows(), z.ncols()));
    }
    for b in basis {
        if b.shape() != z.shape() {
            return Err(Error::DimensionMismatch(format!(
                "basis element {:?} vs target {:?}",
                b.shape(),
                z.shape()
            )));
        }
    }
    let k = basis.len();
    let gram = RealMatrix::from_fn(k, k, |i, j| frobenius_inner(&basis[i], &basis[j]));
    let eig = gram.clone().symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let emin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if emax <= 0.0 || emin <= 1e-12 * emax {
        return Err(Error::DependentBasis(if emax > 0.0 { emin / emax } else { 0.0 }));
    }
    let rhs = DVector::from_fn(k, |i, _| frobenius_inner(&basis[i], z));
    let coeffs = gram
        .cholesky()
        .ok_or(Error::DependentBasis(emin / emax))?
        .solve(&rhs);
    Ok(basis
        .iter()
        .zip(coeffs.iter())
        .fold(RealMatrix::zeros(z.nrows(), z.ncols()), |acc, (b, c)| {
            acc + b * *c
        }))
}

/// Gram-Schmidt under the Frobenius inner product, dropping elements whose
/// residual norm falls below `tol` times their original norm.
pub fn orthonormalize(basis: &[RealMatrix], tol: f64) -> Vec<RealMatrix> {
    let mut out: Vec<RealMatrix> = Vec::with_capacity(basis.len());
    for b in basis {
        let norm0 = b.norm();
        if norm0 == 0.0 {
            continue;
        }
        let mut r = b.clone();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for q in &out {
                let c = frobenius_inner(q, &r);
                r -= q * c;
            }
        }
        let n = r.norm();
        if n > tol * norm0 {
            out.push(r / n);
        }
    }
    out
}

pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn complex_max_abs_imag(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.im.abs()))
}

pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.re)
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `{"rows": n, "cols": m, "entries": [row-major reals]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
}

/// Complex matrices carry separate real and imaginary row-major arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&RealMatrix> for MatrixJson {
    fn from(m: &RealMatrix) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: vec_rm(m).as_slice().to_vec(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<RealMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if self.entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("matrix entries must be finite".into()));
        }
        Ok(unvec_rm(&self.entries, self.rows, self.cols))
    }
}

impl From<&ComplexMatrix> for ComplexMatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let t = m.transpose();
        ComplexMatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            re: t.iter().map(|z| z.re).collect(),
            im: t.iter().map(|z| z.im).collect(),
        }
    }
}

impl ComplexMatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "re/im lengths {}/{} for a {}x{} matrix",
                self.re.len(),
                self.im.len(),
                self.rows,
                self.cols
            )));
        }
        let data: Vec<Complex64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| Complex64::new(*r, *i))
            .collect();
        Ok(ComplexMatrix::from_row_slice(self.rows, self.cols, &data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn j2() -> RealMatrix {
        RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
    }

    #[test]
    fn kron_examples() {
        let i2 = RealMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), RealMatrix::identity(4, 4));
        let z = RealMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let expected = RealMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
        assert_eq!(kron(&z, &i2), expected);
    }

    #[test]
    fn kron_of_rotations_is_symmetric_involution() {
        // oracle: explicit entries of J⊗J
        let k = kron(&j2(), &j2());
        let oracle = RealMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, -1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0,
            ],
        );
        assert_eq!(k, oracle);
        assert_eq!(k.transpose(), k);
        assert_eq!(&k * &k, RealMatrix::identity(4, 4));
    }

    #[test]
    fn expm_examples() {
        assert_eq!(
            expm(&RealMatrix::zeros(3, 3)).unwrap(),
            RealMatrix::identity(3, 3)
        );
        let r = expm(&(j2() * PI)).unwrap();
        assert!((r + RealMatrix::identity(2, 2)).norm() < 1e-14);
        assert!(matches!(
            expm(&RealMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn expm_matches_taylor_for_large_norm() {
        // Taylor series with exact rescaling oracle: exp(A) = exp(A/2^k)^(2^k)
        let a = RealMatrix::from_row_slice(3, 3, &[0.3, 4.0, -1.0, -2.0, 0.1, 7.0, 1.5, -3.0, -0.2]);
        let k = 10;
        let small = &a / 2f64.powi(k);
        let mut term = RealMatrix::identity(3, 3);
        let mut sum = term.clone();
        for i in 1..30 {
            term = &term * &small / i as f64;
            sum += &term;
        }
        for _ in 0..k {
            sum = &sum * &sum;
        }
        let e = expm(&a).unwrap();
        assert!((&e - &sum).norm() / sum.norm() < 1e-12);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&RealMatrix::identity(3, 3), NULLSPACE_TOL).is_empty());
        let z = nullspace(&RealMatrix::zeros(2, 2), NULLSPACE_TOL);
        assert_eq!(z.len(), 2);
        assert!((z[0].dot(&z[1])).abs() < 1e-14);

        // Z -> J Z - Z J on row-major vec(Z); solved by hand: Z = [[p, q], [-q, p]]
        let j = j2();
        let op = RealMatrix::from_fn(4, 4, |r, c| {
            let mut e = RealMatrix::zeros(2, 2);
            e[(c / 2, c % 2)] = 1.0;
            let img = commutator(&j, &e);
            img[(r / 2, r % 2)]
        });
        let ns = nullspace(&op, NULLSPACE_TOL);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let m = unvec_rm(v.as_slice(), 2, 2);
            assert!((m[(0, 0)] - m[(1, 1)]).abs() < 1e-12);
            assert!((m[(0, 1)] + m[(1, 0)]).abs() < 1e-12);
        }
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let l = RealMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&l, NULLSPACE_TOL);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&l * v).norm() < 1e-14);
        }
    }

    #[test]
    fn common_nullspace_intersects() {
        let a = RealMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let b = RealMatrix::from_row_slice(1, 3, &[0.0, 1.0, 0.0]);
        let basis = common_nullspace(&[a, b], 3, NULLSPACE_TOL);
        assert_eq!(basis.ncols(), 1);
        assert!((basis[(2, 0)].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn split_examples() {
        let (s, a) = sym_antisym_split(&RealMatrix::identity(2, 2)).unwrap();
        assert_eq!(s, RealMatrix::identity(2, 2));
        assert_eq!(a, RealMatrix::zeros(2, 2));
        let (s, a) = sym_antisym_split(&j2()).unwrap();
        assert_eq!(s, RealMatrix::zeros(2, 2));
        assert_eq!(a, j2());
        let z = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let (s, a) = sym_antisym_split(&z).unwrap();
        assert_eq!(s, RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        assert_eq!(a, j2());
        assert_eq!(s + a, z);
        assert!(sym_antisym_split(&RealMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let a = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, 5.0, -1.0]);
        let terms = schmidt_decompose(&kron(&a, &b)).unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].weight - a.norm() * b.norm()).abs() < 1e-12);

        // X⊗1 + 1⊗Y with traceless X, Y: realignment has rank two
        let x = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, -1.0]);
        let y = j2();
        let i2 = RealMatrix::identity(2, 2);
        let c = kron(&x, &i2) + kron(&i2, &y);
        let terms = schmidt_decompose(&c).unwrap();
        assert_eq!(terms.len(), 2);
        assert!((schmidt_reassemble(&terms, 2) - c).norm() < 1e-12);

        assert!(schmidt_decompose(&RealMatrix::zeros(4, 4)).unwrap().is_empty());
        assert!(matches!(
            schmidt_decompose(&RealMatrix::zeros(3, 3)),
            Err(Error::NotTensorSquare(3))
        ));
    }

    #[test]
    fn projection_examples() {
        let z = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 5.0]);
        let p = frobenius_project(&z, &[RealMatrix::identity(2, 2)]).unwrap();
        assert!((p - RealMatrix::identity(2, 2) * 3.0).norm() < 1e-14);
        let full: Vec<RealMatrix> = (0..4)
            .map(|k| {
                let mut e = RealMatrix::zeros(2, 2);
                e[(k / 2, k % 2)] = 1.0;
                e
            })
            .collect();
        assert!((frobenius_project(&z, &full).unwrap() - &z).norm() < 1e-14);
        let p = frobenius_project(&j2(), &[RealMatrix::identity(2, 2)]).unwrap();
        assert!(p.norm() < 1e-15);
        let dep = vec![RealMatrix::identity(2, 2), RealMatrix::identity(2, 2) * 2.0];
        assert!(matches!(
            frobenius_project(&z, &dep),
            Err(Error::DependentBasis(_))
        ));
    }

    #[test]
    fn matrix_json_is_row_major() {
        let m = RealMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let j = MatrixJson::from(&m);
        assert_eq!(j.entries, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"entries":[1.0,2.0,3.0,4.0,5.0,6.0]}"#);
        assert_eq!(j.to_matrix().unwrap(), m);
        let bad = MatrixJson {
            rows: 2,
            cols: 2,
            entries: vec![1.0],
        };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn complex_json_roundtrip() {
        let m = ComplexMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, -1.0), Complex64::new(0.0, 2.0)]);
        let j = ComplexMatrixJson::from(&m);
        assert_eq!(j.re, vec![1.0, 0.0]);
        assert_eq!(j.im, vec![-1.0, 2.0]);
        assert_eq!(j.to_matrix().unwrap(), m);
    }
}

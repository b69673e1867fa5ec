//! Clifford generators, their finite groups and the real form of the Spin
//! representations.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::catalog::AlgebraBasis;
use crate::error::{Error, Result};
use serde::Serialize;

use crate::linalg::{
    ckron, complex_max_abs_imag, complex_nullspace, expm, real_part, ComplexMatrix, RealMatrix,
};
use crate::par::Execution;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Generic mixing weight for the simultaneous diagonalization in the Takagi
/// step; any value avoiding accidental degeneracy works.
const TAKAGI_MU: f64 = 0.577_215_664_901_532_9;

pub(crate) fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::from_row_slice(2, 2, &[C1, C0, C0, C1]),
        1 => ComplexMatrix::from_row_slice(2, 2, &[C0, C1, C1, C0]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[C0, -CI, CI, C0]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[C1, C0, C0, -C1]),
        _ => unreachable!("pauli index"),
    }
}

fn pauli_string(ks: &[usize]) -> ComplexMatrix {
    ks.iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, k| ckron(&acc, &pauli(*k)))
}

#[derive(Debug, Clone)]
pub struct CliffordSet {
    pub n: usize,
    pub dim: usize,
    pub gammas: Vec<ComplexMatrix>,
}

/// Pauli-tensor generators of the Clifford algebra on `n ∈ {7, 9}` symbols.
pub fn clifford_generators(n: usize) -> Result<CliffordSet> {
    let factors = match n {
        7 => 3,
        9 => 4,
        _ => return Err(Error::UnsupportedClifford(n)),
    };
    // γ_{2k+1} = σ2^{⊗k} ⊗ σ1 ⊗ 1…, γ_{2k+2} = σ2^{⊗k} ⊗ σ3 ⊗ 1…, last = σ2^{⊗factors}
    let mut gammas = Vec::with_capacity(n);
    for k in 0..factors {
        for head in [1, 3] {
            let mut ks = vec![2; k];
            ks.push(head);
            ks.resize(factors, 0);
            gammas.push(pauli_string(&ks));
        }
    }
    gammas.push(pauli_string(&vec![2; factors]));
    Ok(CliffordSet {
        n,
        dim: 1 << factors,
        gammas,
    })
}

#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    pub elements: Vec<ComplexMatrix>,
}

impl FiniteGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements.first().map_or(0, |g| g.nrows())
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: f64) -> bool {
        self.elements.iter().any(|g| (g - m).norm() <= tol)
    }
}

/// Exact key: Clifford products only have entries in {0, ±1, ±i}.
fn exact_key(m: &ComplexMatrix) -> Vec<(i8, i8)> {
    m.transpose()
        .iter()
        .map(|z| (z.re.round() as i8, z.im.round() as i8))
        .collect()
}

pub fn clifford_group(n: usize, even_only: bool) -> Result<FiniteGroupTable> {
    clifford_group_with(n, even_only, Execution::default())
}

/// All signed products `±γ_S` over subsets `S` (even subsets only when
/// `even_only`), deduplicated.
pub fn clifford_group_with(n: usize, even_only: bool, exec: Execution) -> Result<FiniteGroupTable> {
    let set = clifford_generators(n)?;
    let dim = set.dim;
    let subsets: Vec<u32> = (0u32..(1 << n))
        .filter(|s| !even_only || s.count_ones() % 2 == 0)
        .collect();
    let products = exec.map(subsets.len(), |k| {
        let s = subsets[k];
        (0..n)
            .filter(|i| s & (1 << i) != 0)
            .fold(ComplexMatrix::identity(dim, dim), |acc, i| acc * &set.gammas[i])
    });
    let mut seen = BTreeMap::new();
    let mut elements = Vec::new();
    for p in products {
        for m in [p.clone(), -p] {
            let key = exact_key(&m);
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(elements.len());
                elements.push(m);
            }
        }
    }
    Ok(FiniteGroupTable { elements })
}

/// `(c_irr, c_real) = (mean |tr G|², mean tr G²)`.
pub fn irreducibility_traces(g: &FiniteGroupTable) -> (f64, f64) {
    let n = g.order() as f64;
    let c_irr = g.elements.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / n;
    let c_real = g.elements.iter().map(|m| (m * m).trace().re).sum::<f64>() / n;
    (c_irr, c_real)
}

/// The symmetric unitary `S` with `mean Gᵀ S G = S`, normalised so that its
/// first nonzero entry is real positive and `‖S‖_F = √dim`.
pub fn schur_fixed_point(g: &FiniteGroupTable) -> Result<ComplexMatrix> {
    let dim = g.dim();
    let nn = dim * dim;
    // column-major vec: vec(Gᵀ S G) = (Gᵀ ⊗ Gᵀ) vec(S)
    let mut p = ComplexMatrix::zeros(nn, nn);
    for m in &g.elements {
        let t = m.transpose();
        p += ckron(&t, &t);
    }
    p /= Complex64::new(g.order() as f64, 0.0);
    p -= ComplexMatrix::identity(nn, nn);
    let kernel = complex_nullspace(&p, 1e-10);
    if kernel.len() != 1 {
        return Err(Error::SolutionSpace {
            expected: 1,
            found: kernel.len(),
        });
    }
    let v: &DVector<Complex64> = &kernel[0];
    let mut s = ComplexMatrix::from_column_slice(dim, dim, v.as_slice());
    let peak = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let first = s
        .transpose()
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-8 * peak)
        .expect("kernel vector is nonzero");
    s *= first.conj() / first.norm();
    let scale = (dim as f64).sqrt() / s.norm();
    s *= Complex64::new(scale, 0.0);
    Ok(s)
}

fn takagi(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let a = s.map(|z| z.re);
    let b = s.map(|z| z.im);
    let mix = (&a + &b * TAKAGI_MU + (&a + &b * TAKAGI_MU).transpose()) * 0.5;
    let o = mix.symmetric_eigen().eigenvectors;
    let oc = o.map(|x| Complex64::new(x, 0.0));
    let diag = oc.transpose() * s * &oc;
    let off: f64 = diag
        .iter()
        .enumerate()
        .filter(|(k, _)| k % (diag.nrows() + 1) != 0)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    if off > 1e-8 {
        return Err(Error::Precondition(format!(
            "fixed point is not diagonalised by a real orthogonal basis (off-diagonal {off:e})"
        )));
    }
    let half = DVector::from_fn(diag.nrows(), |k, _| {
        Complex64::from_polar(1.0, diag[(k, k)].arg() / 2.0)
    });
    Ok(ComplexMatrix::from_diagonal(&half) * oc.transpose())
}

fn reality_residual(u: &ComplexMatrix, g: &FiniteGroupTable) -> f64 {
    let ud = u.adjoint();
    g.elements
        .iter()
        .map(|m| complex_max_abs_imag(&(u * m * &ud)))
        .fold(0.0, f64::max)
}

/// Unitary `U` with `UᵀU = s` conjugating every element of `g` to a real
/// matrix.
pub fn realizing_unitary(s: &ComplexMatrix, g: &FiniteGroupTable) -> Result<ComplexMatrix> {
    let mut worst: f64 = 0.0;
    for candidate in [s.clone(), -s] {
        let u = takagi(&candidate)?;
        let res = reality_residual(&u, g);
        if res <= 1e-9 {
            return Ok(u);
        }
        worst = worst.max(res);
    }
    Err(Error::NotReal(worst))
}

fn spin_group(n: usize) -> Result<FiniteGroupTable> {
    match n {
        9 => clifford_group(9, false),
        7 => clifford_group(7, true),
        _ => Err(Error::UnsupportedClifford(n)),
    }
}

fn build_spin_algebra(n: usize) -> Result<AlgebraBasis> {
    let set = clifford_generators(n)?;
    let table = spin_group(n)?;
    let s = schur_fixed_point(&table)?;
    let u = realizing_unitary(&s, &table)?;
    let ud = u.adjoint();
    let mut gens = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let c = &u * &set.gammas[i] * &set.gammas[j] * &ud;
            let im = complex_max_abs_imag(&c);
            if im > 1e-9 {
                return Err(Error::NotReal(im));
            }
            gens.push(real_part(&c));
        }
    }
    AlgebraBasis::new(set.dim, gens)
}

static SPIN7: OnceLock<AlgebraBasis> = OnceLock::new();
static SPIN9: OnceLock<AlgebraBasis> = OnceLock::new();

/// Real generators `U γ_i γ_j U†` (`i < j`) of the Spin representation.
pub fn spin_algebra(n: usize) -> Result<AlgebraBasis> {
    let cell = match n {
        7 => &SPIN7,
        9 => &SPIN9,
        _ => return Err(Error::UnsupportedClifford(n)),
    };
    if let Some(h) = cell.get() {
        return Ok(h.clone());
    }
    let h = build_spin_algebra(n)?;
    Ok(cell.get_or_init(|| h).clone())
}

/// Every stage of the Clifford-to-real-Spin pipeline for one `n`.
#[derive(Debug, Clone, Serialize)]
pub struct SpinPipelineReport {
    pub n: usize,
    pub even_only: bool,
    pub order: usize,
    pub dim: usize,
    /// `(mean |tr g|², mean tr g²)` over the full group.
    pub full_traces: (f64, f64),
    /// The same pair over the group actually realified.
    pub spin_traces: (f64, f64),
    pub solution_space_dim: usize,
    pub generator_imag_residual: f64,
    /// `‖expm(π g₁) + 1‖`.
    pub minus_identity_residual: f64,
    pub generators: usize,
}

pub fn spin_pipeline(n: usize) -> Result<SpinPipelineReport> {
    let full = clifford_group(n, false)?;
    let table = spin_group(n)?;
    let s = schur_fixed_point(&table)?;
    let u = realizing_unitary(&s, &table)?;
    let ud = u.adjoint();
    let set = clifford_generators(n)?;
    let mut imag: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            imag = imag.max(complex_max_abs_imag(
                &(&u * &set.gammas[i] * &set.gammas[j] * &ud),
            ));
        }
    }
    let h = spin_algebra(n)?;
    let minus = expm(&(&h.generators[0] * std::f64::consts::PI))?;
    let dim = h.dim_space;
    Ok(SpinPipelineReport {
        n,
        even_only: n == 7,
        order: table.order(),
        dim,
        full_traces: irreducibility_traces(&full),
        spin_traces: irreducibility_traces(&table),
        solution_space_dim: 1,
        generator_imag_residual: imag,
        minus_identity_residual: (minus + RealMatrix::identity(dim, dim)).norm(),
        generators: h.len(),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn signed_perm8() -> Vec<(usize, usize, f64)> {
        vec![
            (0, 5, 1.0),
            (1, 4, -1.0),
            (2, 7, 1.0),
            (3, 6, -1.0),
            (4, 1, -1.0),
            (5, 0, 1.0),
            (6, 3, -1.0),
            (7, 2, 1.0),
        ]
    }

    fn block_diag(blocks: usize, f: impl Fn() -> ComplexMatrix) -> ComplexMatrix {
        let b = f();
        let n = b.nrows();
        let mut m = ComplexMatrix::zeros(n * blocks, n * blocks);
        for k in 0..blocks {
            m.view_mut((k * n, k * n), (n, n)).copy_from(&b);
        }
        m
    }

    /// Displayed value of `UᵀU` for the 8-dimensional case.
    pub fn utu8() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(8, 8);
        for (r, c, v) in signed_perm8() {
            m[(r, c)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Displayed 8×8 realizing unitary.
    pub fn u8() -> ComplexMatrix {
        let o = C0;
        let l = C1;
        let i = CI;
        #[rustfmt::skip]
        let rows = [
            [l, o, o, o, o, l, o, o],
            [o, i, o, o, i, o, o, o],
            [o, o, l, o, o, o, o, l],
            [o, o, o, i, o, o, i, o],
            [o, -l, o, o, l, o, o, o],
            [i, o, o, o, o, -i, o, o],
            [o, o, o, -l, o, o, l, o],
            [o, o, i, o, o, o, o, -i],
        ];
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        ComplexMatrix::from_row_slice(8, 8, &flat) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }

    /// The 16-dimensional fixtures are two copies of the 8-dimensional ones.
    pub fn utu16() -> ComplexMatrix {
        block_diag(2, utu8)
    }

    pub fn u16() -> ComplexMatrix {
        block_diag(2, u8)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::{antisymmetry_residual, expm};
    use std::f64::consts::PI;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn generators_are_literal() {
        let c9 = clifford_generators(9).unwrap();
        assert_eq!(c9.dim, 16);
        assert_eq!(c9.gammas[0], pauli_string(&[1, 0, 0, 0]));
        assert_eq!(c9.gammas[8], pauli_string(&[2, 2, 2, 2]));
        assert_eq!(c9.gammas[5], pauli_string(&[2, 2, 3, 0]));
        let c7 = clifford_generators(7).unwrap();
        assert_eq!(c7.dim, 8);
        assert_eq!(c7.gammas[6], pauli_string(&[2, 2, 2]));
        assert!(matches!(
            clifford_generators(5),
            Err(Error::UnsupportedClifford(5))
        ));
    }

    #[test]
    fn clifford_relations() {
        for n in [7, 9] {
            let c = clifford_generators(n).unwrap();
            let id = ComplexMatrix::identity(c.dim, c.dim);
            for i in 0..n {
                assert!(close(&c.gammas[i].adjoint(), &c.gammas[i], 0.0));
                for j in 0..n {
                    let ac = &c.gammas[i] * &c.gammas[j] + &c.gammas[j] * &c.gammas[i];
                    let want = if i == j {
                        &id * Complex64::new(2.0, 0.0)
                    } else {
                        id.clone() * C0
                    };
                    assert!(close(&ac, &want, 1e-12), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        // observed by exhaustive enumeration
        assert_eq!(clifford_group(9, false).unwrap().order(), 512);
        assert_eq!(clifford_group(7, false).unwrap().order(), 256);
        assert_eq!(clifford_group(7, true).unwrap().order(), 128);
    }

    #[test]
    fn group_closure_and_identity() {
        let g = clifford_group(7, true).unwrap();
        let id = ComplexMatrix::identity(8, 8);
        assert!(g.contains(&id, 1e-12));
        for (i, j) in [(3, 17), (40, 99), (127, 5)] {
            let p = &g.elements[i] * &g.elements[j];
            assert!(g.contains(&p, 1e-12));
        }
    }

    #[test]
    fn traces() {
        let (a, b) = irreducibility_traces(&clifford_group(9, false).unwrap());
        assert!((a - 1.0).abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
        let (a, b) = irreducibility_traces(&clifford_group(7, false).unwrap());
        assert!((a - 1.0).abs() < 1e-10 && b.abs() < 1e-10);
        let (a, b) = irreducibility_traces(&clifford_group(7, true).unwrap());
        assert!((a - 1.0).abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fixed_point_matches_displayed_solution() {
        let s7 = schur_fixed_point(&clifford_group(7, true).unwrap()).unwrap();
        assert!(close(&s7, &utu8(), 1e-10));
        let s9 = schur_fixed_point(&clifford_group(9, false).unwrap()).unwrap();
        assert!(close(&s9, &utu16(), 1e-10));
        assert!(close(&s9.transpose(), &s9, 1e-10));
        assert!(close(
            &(s9.adjoint() * &s9),
            &ComplexMatrix::identity(16, 16),
            1e-10
        ));
    }

    #[test]
    fn fixed_point_rejects_trivial_and_complex_groups() {
        let trivial = FiniteGroupTable {
            elements: vec![ComplexMatrix::identity(3, 3)],
        };
        assert!(matches!(
            schur_fixed_point(&trivial),
            Err(Error::SolutionSpace {
                expected: 1,
                found: 9
            })
        ));
        assert!(matches!(
            schur_fixed_point(&clifford_group(7, false).unwrap()),
            Err(Error::SolutionSpace { found: 0, .. })
        ));
    }

    #[test]
    fn displayed_unitaries_are_valid_fixtures() {
        for (u, s, table) in [
            (u8(), utu8(), clifford_group(7, true).unwrap()),
            (u16(), utu16(), clifford_group(9, false).unwrap()),
        ] {
            let n = u.nrows();
            assert!(close(&(u.adjoint() * &u), &ComplexMatrix::identity(n, n), 1e-12));
            assert!(close(&(u.transpose() * &u), &s, 1e-12));
            assert!(reality_residual(&u, &table) < 1e-12);
        }
    }

    #[test]
    fn computed_unitary_realifies() {
        for (n, even) in [(7, true), (9, false)] {
            let g = clifford_group(n, even).unwrap();
            let s = schur_fixed_point(&g).unwrap();
            let u = realizing_unitary(&s, &g).unwrap();
            let dim = u.nrows();
            assert!(close(
                &(u.adjoint() * &u),
                &ComplexMatrix::identity(dim, dim),
                1e-10
            ));
            assert!(close(&(u.transpose() * &u), &s, 1e-10));
            assert!(reality_residual(&u, &g) <= 1e-9);
        }
    }

    #[test]
    fn identity_unitary_for_real_groups() {
        let g = FiniteGroupTable {
            elements: vec![
                ComplexMatrix::identity(2, 2),
                ComplexMatrix::from_row_slice(2, 2, &[C0, C1, C1, C0]),
            ],
        };
        let u = realizing_unitary(&ComplexMatrix::identity(2, 2), &g).unwrap();
        assert!(close(
            &(u.transpose() * &u),
            &ComplexMatrix::identity(2, 2),
            1e-12
        ));
        assert!(complex_max_abs_imag(&u) < 1e-12);
    }

    #[test]
    fn spin_algebras() {
        for (n, dim, count) in [(7, 8, 21), (9, 16, 36)] {
            let h = spin_algebra(n).unwrap();
            assert_eq!(h.dim_space, dim);
            assert_eq!(h.len(), count);
            assert!(h.max_antisymmetry_residual() < 1e-12);
            for g in &h.generators {
                assert!(antisymmetry_residual(g) < 1e-12);
            }
            let minus = expm(&(&h.generators[0] * PI)).unwrap();
            assert!((minus + RealMatrix::identity(dim, dim)).norm() < 1e-10);
        }
        assert!(spin_algebra(9).unwrap().closure_residual().unwrap() < 1e-10);
    }

    use crate::linalg::RealMatrix;
}

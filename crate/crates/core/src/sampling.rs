//! Seeded random objects. Each sample index gets its own ChaCha stream so
//! results do not depend on how work is scheduled.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::catalog::AlgebraBasis;
use crate::linalg::{expm, RealMatrix};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> DVector<f64> {
    loop {
        let v = gaussian_vector(rng, d);
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Uniform point of the closed unit ball.
pub fn ball_vector<R: Rng>(rng: &mut R, d: usize) -> DVector<f64> {
    let u = unit_vector(rng, d);
    let r: f64 = rng.random::<f64>().powf(1.0 / d as f64);
    u * r
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn antisymmetric_matrix<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g - g.transpose()) * 0.5
}

/// Gaussian combination of the basis elements.
pub fn algebra_element<R: Rng>(rng: &mut R, h: &AlgebraBasis) -> RealMatrix {
    let coeffs: Vec<f64> = (0..h.len()).map(|_| rng.sample(StandardNormal)).collect();
    h.combination(&coeffs)
}

/// Group element as a product of `factors` exponentials of random algebra
/// elements. Not exactly Haar distributed, but the walk mixes quickly.
pub fn group_element<R: Rng>(rng: &mut R, h: &AlgebraBasis, factors: usize) -> RealMatrix {
    let d = h.dim_space;
    let mut g = RealMatrix::identity(d, d);
    for _ in 0..factors {
        let x = algebra_element(rng, h);
        g = expm(&x).expect("algebra elements are square") * g;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_vector(&mut stream(7, 3), 4);
        let b = gaussian_vector(&mut stream(7, 3), 4);
        let c = gaussian_vector(&mut stream(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_and_ball_vectors() {
        let mut rng = stream(1, 0);
        for _ in 0..20 {
            assert!((unit_vector(&mut rng, 5).norm() - 1.0).abs() < 1e-14);
            assert!(ball_vector(&mut rng, 5).norm() <= 1.0 + 1e-14);
        }
    }
}

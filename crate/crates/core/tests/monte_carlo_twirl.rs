//! Sampled group averages against the exact commutant projection.

use balltheory::catalog::{generators, Family, GroupSpec};
use balltheory::linalg::max_abs;
use balltheory::par::Execution;
use balltheory::sampling::{gaussian_matrix, stream};
use balltheory::transitivity::{monte_carlo_twirl, twirl};

const SAMPLES: usize = 10_000;
const TOL: f64 = 1e-2;

#[test]
fn sampled_average_matches_projection() {
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        let spec = GroupSpec::smallest(f);
        let h = generators(&spec).unwrap();
        for k in 0..5u64 {
            let z = gaussian_matrix(&mut stream(100 + k, 0), spec.d, spec.d);
            let z = &z / z.norm();
            let exact = twirl(&z, &h).unwrap();
            let mc = monte_carlo_twirl(&z, &h, SAMPLES, 31 + k, Execution::default());
            let diff = max_abs(&(mc - &exact));
            worst = worst.max(diff);
            assert!(diff <= TOL, "{spec}, Z #{k}: {diff:e}");
        }
    }
    println!("worst entrywise deviation {worst:e}");
}

#[test]
fn so_twirl_is_scalar_trace() {
    for d in 3..=6 {
        let h = generators(&GroupSpec::new(Family::SO, d).unwrap()).unwrap();
        let z = gaussian_matrix(&mut stream(5, d as u64), d, d);
        let t = twirl(&z, &h).unwrap();
        let want = nalgebra::DMatrix::identity(d, d) * (z.trace() / d as f64);
        assert!(max_abs(&(t - &want)) <= 1e-12);
        let mc = monte_carlo_twirl(&z, &h, SAMPLES, 9, Execution::Sequential);
        assert!(max_abs(&(mc - want)) <= TOL * z.norm());
    }
}

//! Fixtures shared by the criterion benches.

use polyrep::{shapes, Polytope};

pub fn octahedron() -> Polytope {
    Polytope::from_halfspaces(3, &shapes::octahedron()).expect("octahedron is a polytope")
}

/// Deterministic points of the box `[-1.5, 1.5]^3`.
pub fn points(n: usize) -> Vec<Vec<f64>> {
    let mut rng = polyrep::sampling::Rng::new(1, 0);
    (0..n).map(|_| rng.in_box(&[-1.5; 3], &[1.5; 3])).collect()
}

//! Halfspace descriptions of a few standard polyhedra.

use std::f64::consts::TAU;

use crate::geometry::Halfspace;

fn h(a: &[f64], b: f64) -> Halfspace {
    Halfspace::new(a.to_vec(), b)
}

/// `[0, 1]^2`.
pub fn unit_square() -> Vec<Halfspace> {
    vec![h(&[1.0, 0.0], 1.0), h(&[-1.0, 0.0], 0.0), h(&[0.0, 1.0], 1.0), h(&[0.0, -1.0], 0.0)]
}

/// `conv{(0,0), (1,0), (0,1)}`.
pub fn triangle() -> Vec<Halfspace> {
    vec![h(&[-1.0, 0.0], 0.0), h(&[0.0, -1.0], 0.0), h(&[1.0, 1.0], 1.0)]
}

/// Regular `n`-gon with inradius one centred at the origin.
pub fn regular_polygon(n: usize) -> Vec<Halfspace> {
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            h(&[t.cos(), t.sin()], 1.0)
        })
        .collect()
}

/// `{|x_1| + |x_2| + |x_3| <= 1}` with unit normals.
pub fn octahedron() -> Vec<Halfspace> {
    let s = 1.0 / 3f64.sqrt();
    let mut out = Vec::with_capacity(8);
    for a in [1.0, -1.0] {
        for b in [1.0, -1.0] {
            for c in [1.0, -1.0] {
                out.push(h(&[a * s, b * s, c * s], s));
            }
        }
    }
    out
}

/// `[-1, 1]^3`.
pub fn cube() -> Vec<Halfspace> {
    let mut out = Vec::with_capacity(6);
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut a = [0.0; 3];
            a[i] = s;
            out.push(h(&a, 1.0));
        }
    }
    out
}

/// `conv{o, e_1, e_2, e_3}`.
pub fn tetrahedron() -> Vec<Halfspace> {
    vec![
        h(&[-1.0, 0.0, 0.0], 0.0),
        h(&[0.0, -1.0, 0.0], 0.0),
        h(&[0.0, 0.0, -1.0], 0.0),
        h(&[1.0, 1.0, 1.0], 1.0),
    ]
}

/// `{x_1 >= 0, x_2 >= 0}`.
pub fn quadrant() -> Vec<Halfspace> {
    vec![h(&[-1.0, 0.0], 0.0), h(&[0.0, -1.0], 0.0)]
}

/// `{|x_1| <= 1}` in three dimensions.
pub fn slab() -> Vec<Halfspace> {
    vec![h(&[1.0, 0.0, 0.0], 1.0), h(&[-1.0, 0.0, 0.0], 1.0)]
}

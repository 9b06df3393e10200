//! Seeded random and lattice point generators.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A ChaCha8 stream selected by `(seed, stream)`.
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(stream);
        Self(r)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.gen::<f64>()
    }

    pub fn unit(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Uniform direction on the unit sphere of `R^dim`.
    pub fn direction(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                return v.into_iter().map(|x| x / n).collect();
            }
        }
    }

    /// Uniform point of the ball of radius `r` about `c`.
    pub fn in_ball(&mut self, c: &[f64], r: f64) -> Vec<f64> {
        let d = self.direction(c.len());
        let s = r * self.unit().powf(1.0 / c.len() as f64);
        c.iter().zip(&d).map(|(a, b)| a + s * b).collect()
    }

    pub fn in_box(&mut self, lo: &[f64], hi: &[f64]) -> Vec<f64> {
        lo.iter().zip(hi).map(|(a, b)| self.uniform(*a, *b)).collect()
    }

    /// Random convex combination of the given points.
    pub fn convex_combination(&mut self, pts: &[&[f64]]) -> Vec<f64> {
        let w: Vec<f64> = pts.iter().map(|_| -(1.0 - self.unit()).ln()).collect();
        let total: f64 = w.iter().sum();
        let dim = pts[0].len();
        let mut x = vec![0.0; dim];
        for (p, wi) in pts.iter().zip(&w) {
            for (xj, pj) in x.iter_mut().zip(p.iter()) {
                *xj += wi / total * pj;
            }
        }
        x
    }
}

/// `n` well-spread unit directions: a Fibonacci lattice on the sphere, an
/// equiangular fan on the circle, `±1` on the line.
pub fn directions(dim: usize, n: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    let mut v = vec![r * phi.cos(), r * phi.sin(), z];
                    v.resize(dim, 0.0);
                    v
                })
                .collect()
        }
    }
}

//! Small dense helpers on `&[f64]` points plus thin wrappers around nalgebra.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| x * c).collect()
}

/// `a + c * b`
pub fn axpy(a: &[f64], c: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| scale(a, 1.0 / n))
}

pub fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let n = points.len().max(1) as f64;
    c.iter_mut().for_each(|ci| *ci /= n);
    c
}

/// Solves the square system `rows * x = rhs` with LU and partial pivoting.
pub fn solve(rows: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    m.lu().solve(&b).map(|x| x.iter().copied().collect())
}

/// 1-norm condition number estimate from an explicit inverse; fine for the
/// small systems used here.
pub fn condition_estimate(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let norm1 = |a: &DMatrix<f64>| {
        (0..a.ncols())
            .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match m.clone().try_inverse() {
        Some(inv) => norm1(&m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Orthonormal basis of the null space of the matrix with the given rows
/// (each of length `dim`), computed from the SVD with a relative threshold.
pub fn null_space(rows: &[Vec<f64>], dim: usize, rel_tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
    }
    // Pad to at least `dim` rows so the SVD yields a full V.
    let nrows = rows.len().max(dim);
    let m = DMatrix::from_fn(nrows, dim, |i, j| rows.get(i).map_or(0.0, |r| r[j]));
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thresh = rel_tol * smax.max(1e-300);
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= thresh {
            basis.push(v_t.row(k).iter().copied().collect());
        }
    }
    basis
}

pub fn rank(rows: &[Vec<f64>], dim: usize, rel_tol: f64) -> usize {
    dim - null_space(rows, dim, rel_tol).len()
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in R^dim.
pub fn complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    null_space(basis, dim, 1e-10)
}

/// Orthonormal basis of the hyperplane `u^perp` for a nonzero `u`.
pub fn hyperplane_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let mut basis = complement(&[u.to_vec()], u.len());
    // Deterministic orientation: make the largest-magnitude entry positive.
    for b in &mut basis {
        let (idx, _) = b
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, v)| {
                if v.abs() > bv + 1e-12 {
                    (i, v.abs())
                } else {
                    (bi, bv)
                }
            });
        if b[idx] < 0.0 {
            b.iter_mut().for_each(|v| *v = -*v);
        }
    }
    basis
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eigenvalue(h: &[Vec<f64>]) -> f64 {
    let n = h.len();
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (h[i][j] + h[j][i]));
    m.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

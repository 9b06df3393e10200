//! Sparse multivariate polynomials with `f64` coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration (and
//! therefore evaluation order and serialization) is lexicographic and
//! reproducible bit-for-bit.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// A single stored term `coef * x^exp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exp: Vec<u32>,
    pub coef: f64,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exp.iter().sum()
    }
}

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut exp = vec![0; dim];
        exp[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(exp, 1.0);
        p
    }

    /// `<lin, x> + c`.
    pub fn affine(lin: &[f64], c: f64) -> Self {
        let dim = lin.len();
        let mut p = Self::constant(dim, c);
        for (i, &a) in lin.iter().enumerate() {
            let mut exp = vec![0; dim];
            exp[i] = 1;
            p.add_term(exp, a);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for m in terms {
            check_dim(dim, m.exp.len())?;
            p.add_term(m.exp, m.coef);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, &c)| Monomial {
            exp: e.clone(),
            coef: c,
        })
    }

    pub fn coefficient(&self, exp: &[u32]) -> f64 {
        self.terms.get(exp).copied().unwrap_or(0.0)
    }

    fn add_term(&mut self, exp: Vec<u32>, coef: f64) {
        if coef == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d0) => degrees.all(|d| d == d0),
        }
    }

    pub fn is_even_degree(&self) -> bool {
        let d = self.degree();
        d >= 0 && d % 2 == 0
    }

    /// Evaluates with Neumaier-compensated summation over the lexicographic
    /// term order.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (exp, &c) in &self.terms {
            let mut t = c;
            for (xi, &e) in x.iter().zip(exp) {
                if e > 0 {
                    t *= xi.powi(e as i32);
                }
            }
            let s = sum + t;
            if sum.abs() >= t.abs() {
                comp += (sum - s) + t;
            } else {
                comp += (t - s) + sum;
            }
            sum = s;
        }
        sum + comp
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Repeated squaring; `power(a, 0) == 1`.
    pub fn power(&self, n: u32) -> Self {
        let mut result = Self::constant(self.dim, 1.0);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same dim");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same dim");
            }
        }
        result
    }

    /// Homogeneous continuation of degree `n` of the restriction of `self`
    /// to the hyperplane `{x : <x,u> = 1}`: each term `c x^a` is multiplied
    /// by `<x,u>^(n - |a|)`.
    pub fn homogenize(&self, u: &[f64], n: u32) -> Result<Self> {
        check_dim(self.dim, u.len())?;
        if u.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidArgument("homogenize: u must be nonzero".into()));
        }
        if self.degree() > n as i64 {
            return Err(Error::InvalidArgument(format!(
                "homogenize: target degree {n} below polynomial degree {}",
                self.degree()
            )));
        }
        let lin = Self::affine(u, 0.0);
        let mut powers: BTreeMap<u32, Self> = BTreeMap::new();
        let mut out = Self::zero(self.dim);
        for (e, &c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let k = n - deg;
            let mult = powers.entry(k).or_insert_with(|| lin.power(k));
            let mut mono = Self::zero(self.dim);
            mono.add_term(e.clone(), c);
            out = out.add(&mono.mul(mult)?)?;
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.add_term(ne, c * e[i] as f64);
            }
        }
        out
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        Ok((0..self.dim)
            .map(|i| self.derivative(i).eval_unchecked(x))
            .collect())
    }

    /// Symmetric Hessian; the upper triangle is computed and mirrored.
    pub fn hessian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_dim(self.dim, x.len())?;
        let mut h = vec![vec![0.0; self.dim]; self.dim];
        for i in 0..self.dim {
            let di = self.derivative(i);
            for j in i..self.dim {
                let v = di.derivative(j).eval_unchecked(x);
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        Ok(h)
    }

    /// Substitutes `x = M y + c` where `M` has `self.dim()` rows, giving a
    /// polynomial in `y`.
    pub fn compose_affine(&self, rows: &[Vec<f64>], offset: &[f64]) -> Result<Self> {
        check_dim(self.dim, rows.len())?;
        check_dim(self.dim, offset.len())?;
        let new_dim = rows.first().map_or(0, Vec::len);
        let images: Vec<Self> = rows
            .iter()
            .zip(offset)
            .map(|(r, &c)| Self::affine(r, c))
            .collect();
        let mut out = Self::zero(new_dim);
        for (e, &c) in &self.terms {
            let mut t = Self::constant(new_dim, c);
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&img.power(k))?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Largest absolute coefficient difference, used for approximate equality.
    pub fn max_coef_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    dim: usize,
    terms: Vec<Monomial>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr {
            dim: self.dim,
            terms: self.terms().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(d)?;
        Polynomial::from_terms(repr.dim, repr.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn x(dim: usize, i: usize) -> Polynomial {
        Polynomial::variable(dim, i)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::constant(2, 1.0).eval(&[3.0, -7.0]).unwrap(), 1.0);
        let p = x(2, 0).add(&x(2, 1).power(2)).unwrap();
        assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), 11.0);
        assert!(matches!(
            p.eval(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn facet_product_of_unit_square_at_center() {
        // q_F = (h - <u_F, x>) / sqrt(2) for the four edges of [0,1]^2.
        let d = 2f64.sqrt();
        let qs = [
            Polynomial::affine(&[-1.0 / d, 0.0], 1.0 / d),
            Polynomial::affine(&[1.0 / d, 0.0], 0.0),
            Polynomial::affine(&[0.0, -1.0 / d], 1.0 / d),
            Polynomial::affine(&[0.0, 1.0 / d], 0.0),
        ];
        let p = qs
            .iter()
            .fold(Polynomial::constant(2, 1.0), |acc, q| acc.mul(q).unwrap());
        assert_relative_eq!(p.eval(&[0.5, 0.5]).unwrap(), 0.015625, max_relative = 1e-14);
    }

    #[test]
    fn arithmetic_examples() {
        let x1 = x(2, 0);
        assert!(x1.add(&x1.scale(-1.0)).unwrap().is_zero());
        let one = Polynomial::constant(2, 1.0);
        let p = x1.add(&one).unwrap().mul(&x1.sub(&one).unwrap()).unwrap();
        let expected = x1.power(2).sub(&one).unwrap();
        assert_eq!(p, expected);
        let sq = x(2, 0).add(&x(2, 1)).unwrap().power(2);
        assert_eq!(sq.coefficient(&[2, 0]), 1.0);
        assert_eq!(sq.coefficient(&[1, 1]), 2.0);
        assert_eq!(sq.coefficient(&[0, 2]), 1.0);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(x1.power(0), one);
        assert!(x1.add(&x(3, 0)).is_err());
    }

    #[test]
    fn degree_and_parity() {
        let p = x(2, 0).power(2).mul(&x(2, 1)).unwrap().add(&x(2, 1).power(3)).unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), 3);
        let q = x(2, 0).power(2).add(&Polynomial::constant(2, 1.0)).unwrap();
        assert!(!q.is_homogeneous());
        assert!(q.is_even_degree());
        let z = Polynomial::zero(2);
        assert_eq!(z.degree(), -1);
        assert!(!z.is_even_degree());
    }

    #[test]
    fn homogenize_examples() {
        // x1 + x2^2 on {x3 = 1} -> x1 x3 + x2^2
        let p = x(3, 0).add(&x(3, 1).power(2)).unwrap();
        let h = p.homogenize(&[0.0, 0.0, 1.0], 2).unwrap();
        let expected = x(3, 0).mul(&x(3, 2)).unwrap().add(&x(3, 1).power(2)).unwrap();
        assert_eq!(h, expected);
        let pt = [0.2, 0.3, 1.0];
        assert_relative_eq!(h.eval(&pt).unwrap(), p.eval(&pt).unwrap(), max_relative = 1e-15);
        let one = Polynomial::constant(3, 1.0);
        assert_eq!(one.homogenize(&[0.0, 0.0, 1.0], 0).unwrap(), one);
        assert!(p.homogenize(&[0.0, 0.0, 1.0], 1).is_err());
        assert!(p.homogenize(&[0.0, 0.0, 0.0], 2).is_err());
    }

    #[test]
    fn derivative_examples() {
        let p = x(2, 0).power(2).add(&x(2, 1).power(2)).unwrap();
        assert_eq!(p.gradient(&[1.0, 2.0]).unwrap(), vec![2.0, 4.0]);
        assert_eq!(p.hessian(&[1.0, 2.0]).unwrap(), vec![vec![2.0, 0.0], vec![0.0, 2.0]]);
        let q = x(2, 0).power(4).add(&x(2, 1).power(4)).unwrap().scale(-1.0);
        assert_eq!(
            q.hessian(&[1.0, 1.0]).unwrap(),
            vec![vec![-12.0, 0.0], vec![0.0, -12.0]]
        );
    }

    #[test]
    fn compose_affine_matches_pointwise() {
        let p = x(2, 0).mul(&x(2, 1)).unwrap().add(&x(2, 0).power(3)).unwrap();
        let rows = vec![vec![1.0, 2.0, 0.0], vec![0.0, -1.0, 3.0]];
        let off = vec![0.5, -0.25];
        let c = p.compose_affine(&rows, &off).unwrap();
        let y = [0.3, -0.7, 1.1];
        let xv = [0.3 - 1.4 + 0.5, 0.7 + 3.3 - 0.25];
        assert_relative_eq!(c.eval(&y).unwrap(), p.eval(&xv).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn json_shape() {
        let p = x(2, 1).add(&Polynomial::constant(2, 0.1)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"terms":[{"exp":[0,0],"coef":0.1},{"exp":[0,1],"coef":1.0}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}

//! Evaluation forms: polynomials carried as an expression tree of affine
//! leaves, sums, products and powers.
//!
//! The interpolants used by the builders have degree `4(l+l0)^2`; expanding
//! them into monomials cancels catastrophically in `f64`. An [`EvalForm`]
//! keeps the recipe instead. Values, gradients and Hessians are exact up to
//! rounding (second-order forward mode), degrees and homogeneity are tracked
//! with integer bookkeeping, and [`EvalForm::expand`] produces the monomial
//! form when it fits the term budget.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;
use crate::poly::Polynomial;

/// Default cap on the number of terms produced by [`EvalForm::expand`].
pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Node {
    Const { value: f64 },
    /// `<lin, x> + c`
    Affine { lin: Vec<f64>, c: f64 },
    Poly { poly: Polynomial },
    Sum { terms: Vec<Node> },
    Product { factors: Vec<Node> },
    Scale { by: f64, of: Box<Node> },
    Pow { base: Box<Node>, exp: u32 },
}

impl Node {
    pub fn affine(lin: Vec<f64>, c: f64) -> Self {
        Node::Affine { lin, c }
    }

    pub fn pow(base: Node, exp: u32) -> Self {
        match exp {
            1 => base,
            _ => Node::Pow {
                base: Box::new(base),
                exp,
            },
        }
    }

    pub fn scale(by: f64, of: Node) -> Self {
        if by == 1.0 {
            of
        } else {
            Node::Scale {
                by,
                of: Box::new(of),
            }
        }
    }

    pub fn product(mut factors: Vec<Node>) -> Self {
        match factors.len() {
            0 => Node::Const { value: 1.0 },
            1 => factors.pop().expect("len 1"),
            _ => Node::Product { factors },
        }
    }

    pub fn sum(mut terms: Vec<Node>) -> Self {
        match terms.len() {
            0 => Node::Const { value: 0.0 },
            1 => terms.pop().expect("len 1"),
            _ => Node::Sum { terms },
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Node::Const { value } => *value,
            Node::Affine { lin, c } => dot(lin, x) + c,
            Node::Poly { poly } => poly.eval_unchecked(x),
            Node::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
            Node::Product { factors } => factors.iter().map(|f| f.eval(x)).product(),
            Node::Scale { by, of } => by * of.eval(x),
            Node::Pow { base, exp } => powu(base.eval(x), *exp),
        }
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let n = x.len();
        match self {
            Node::Const { value } => Jet::constant(n, *value),
            Node::Affine { lin, c } => Jet {
                v: dot(lin, x) + c,
                g: lin.clone(),
                h: vec![0.0; n * n],
            },
            Node::Poly { poly } => {
                let g = poly.gradient(x).expect("dim checked");
                let hm = poly.hessian(x).expect("dim checked");
                Jet {
                    v: poly.eval_unchecked(x),
                    g,
                    h: hm.into_iter().flatten().collect(),
                }
            }
            Node::Sum { terms } => {
                let mut acc = Jet::constant(n, 0.0);
                for t in terms {
                    acc.add_assign(&t.jet(x));
                }
                acc
            }
            Node::Product { factors } => {
                let mut acc = Jet::constant(n, 1.0);
                for f in factors {
                    acc = acc.mul(&f.jet(x));
                }
                acc
            }
            Node::Scale { by, of } => {
                let mut j = of.jet(x);
                j.scale(*by);
                j
            }
            Node::Pow { base, exp } => base.jet(x).powu(*exp),
        }
    }

    /// Structural total degree (an upper bound that is exact unless leading
    /// terms cancel); `-1` for identically-zero leaves.
    fn degree(&self) -> i64 {
        match self {
            Node::Const { value } => {
                if *value == 0.0 {
                    -1
                } else {
                    0
                }
            }
            Node::Affine { lin, c } => {
                if lin.iter().any(|&a| a != 0.0) {
                    1
                } else if *c != 0.0 {
                    0
                } else {
                    -1
                }
            }
            Node::Poly { poly } => poly.degree(),
            Node::Sum { terms } => terms.iter().map(Node::degree).max().unwrap_or(-1),
            Node::Product { factors } => {
                let mut total = 0;
                for f in factors {
                    let d = f.degree();
                    if d < 0 {
                        return -1;
                    }
                    total += d;
                }
                total
            }
            Node::Scale { by, of } => {
                if *by == 0.0 {
                    -1
                } else {
                    of.degree()
                }
            }
            Node::Pow { base, exp } => {
                if *exp == 0 {
                    0
                } else {
                    let d = base.degree();
                    if d < 0 {
                        -1
                    } else {
                        d * *exp as i64
                    }
                }
            }
        }
    }

    /// Homogeneity by construction: returns the common degree of every
    /// monomial the node can produce, or `None` when it mixes degrees.
    /// Zero subtrees report `Some(-1)` and are compatible with anything.
    fn homogeneous_degree(&self) -> Option<i64> {
        match self {
            Node::Const { .. } => Some(self.degree().min(0)),
            Node::Affine { lin, c } => {
                let has_lin = lin.iter().any(|&a| a != 0.0);
                match (has_lin, *c != 0.0) {
                    (true, true) => None,
                    (true, false) => Some(1),
                    (false, true) => Some(0),
                    (false, false) => Some(-1),
                }
            }
            Node::Poly { poly } => poly.is_homogeneous().then(|| poly.degree()),
            Node::Sum { terms } => {
                let mut common: i64 = -1;
                for t in terms {
                    let d = t.homogeneous_degree()?;
                    if d < 0 {
                        continue;
                    }
                    if common >= 0 && common != d {
                        return None;
                    }
                    common = d;
                }
                Some(common)
            }
            Node::Product { factors } => {
                let mut total = 0;
                for f in factors {
                    let d = f.homogeneous_degree()?;
                    if d < 0 {
                        return Some(-1);
                    }
                    total += d;
                }
                Some(total)
            }
            Node::Scale { by, of } => {
                if *by == 0.0 {
                    Some(-1)
                } else {
                    of.homogeneous_degree()
                }
            }
            Node::Pow { base, exp } => {
                if *exp == 0 {
                    return Some(0);
                }
                let d = base.homogeneous_degree()?;
                Some(if d < 0 { -1 } else { d * *exp as i64 })
            }
        }
    }

    fn homogenize(&self, u: &[f64], n: i64) -> Node {
        let d = self.degree();
        if d < 0 {
            return Node::Const { value: 0.0 };
        }
        debug_assert!(n >= d);
        let lift = |node: Node, extra: i64| -> Node {
            if extra == 0 {
                node
            } else {
                Node::product(vec![
                    node,
                    Node::pow(Node::affine(u.to_vec(), 0.0), extra as u32),
                ])
            }
        };
        match self {
            Node::Const { value } => {
                if n == 0 {
                    self.clone()
                } else {
                    Node::scale(*value, Node::pow(Node::affine(u.to_vec(), 0.0), n as u32))
                }
            }
            Node::Affine { lin, c } => {
                if d == 0 {
                    return Node::Const { value: *c }.homogenize(u, n);
                }
                let hl: Vec<f64> = lin.iter().zip(u).map(|(a, b)| a + c * b).collect();
                lift(Node::affine(hl, 0.0), n - 1)
            }
            Node::Poly { poly } => Node::Poly {
                poly: poly.homogenize(u, n as u32).expect("degree checked"),
            },
            Node::Sum { terms } => Node::sum(
                terms
                    .iter()
                    .filter(|t| t.degree() >= 0)
                    .map(|t| t.homogenize(u, n))
                    .collect(),
            ),
            Node::Product { factors } => {
                let hf: Vec<Node> = factors.iter().map(|f| f.homogenize(u, f.degree())).collect();
                lift(Node::product(hf), n - d)
            }
            Node::Scale { by, of } => Node::scale(*by, of.homogenize(u, n)),
            Node::Pow { base, exp } => {
                if *exp == 0 {
                    return Node::Const { value: 1.0 }.homogenize(u, n);
                }
                let bd = base.degree();
                lift(Node::pow(base.homogenize(u, bd), *exp), n - d)
            }
        }
    }

    fn substitute(&self, rows: &[Vec<f64>], offset: &[f64]) -> Result<Node> {
        Ok(match self {
            Node::Const { .. } => self.clone(),
            Node::Affine { lin, c } => {
                let new_dim = rows.first().map_or(0, Vec::len);
                let mut nl = vec![0.0; new_dim];
                for (li, row) in lin.iter().zip(rows) {
                    for (j, r) in row.iter().enumerate() {
                        nl[j] += li * r;
                    }
                }
                Node::Affine {
                    lin: nl,
                    c: c + dot(lin, offset),
                }
            }
            Node::Poly { poly } => Node::Poly {
                poly: poly.compose_affine(rows, offset)?,
            },
            Node::Sum { terms } => Node::Sum {
                terms: terms
                    .iter()
                    .map(|t| t.substitute(rows, offset))
                    .collect::<Result<_>>()?,
            },
            Node::Product { factors } => Node::Product {
                factors: factors
                    .iter()
                    .map(|t| t.substitute(rows, offset))
                    .collect::<Result<_>>()?,
            },
            Node::Scale { by, of } => Node::Scale {
                by: *by,
                of: Box::new(of.substitute(rows, offset)?),
            },
            Node::Pow { base, exp } => Node::Pow {
                base: Box::new(base.substitute(rows, offset)?),
                exp: *exp,
            },
        })
    }

    fn expand(&self, dim: usize, budget: usize) -> Result<Polynomial> {
        let check = |p: Polynomial| {
            if p.num_terms() > budget {
                Err(Error::TermBudget { budget })
            } else {
                Ok(p)
            }
        };
        match self {
            Node::Const { value } => Ok(Polynomial::constant(dim, *value)),
            Node::Affine { lin, c } => Ok(Polynomial::affine(lin, *c)),
            Node::Poly { poly } => Ok(poly.clone()),
            Node::Sum { terms } => {
                let mut acc = Polynomial::zero(dim);
                for t in terms {
                    acc = check(acc.add(&t.expand(dim, budget)?)?)?;
                }
                Ok(acc)
            }
            Node::Product { factors } => {
                let mut acc = Polynomial::constant(dim, 1.0);
                for f in factors {
                    acc = check(acc.mul(&f.expand(dim, budget)?)?)?;
                }
                Ok(acc)
            }
            Node::Scale { by, of } => Ok(of.expand(dim, budget)?.scale(*by)),
            Node::Pow { base, exp } => {
                let b = base.expand(dim, budget)?;
                let mut acc = Polynomial::constant(dim, 1.0);
                for _ in 0..*exp {
                    acc = check(acc.mul(&b)?)?;
                }
                Ok(acc)
            }
        }
    }

    fn leaf_dims(&self, out: &mut Vec<usize>) {
        match self {
            Node::Const { .. } => {}
            Node::Affine { lin, .. } => out.push(lin.len()),
            Node::Poly { poly } => out.push(poly.dim()),
            Node::Sum { terms } => terms.iter().for_each(|t| t.leaf_dims(out)),
            Node::Product { factors } => factors.iter().for_each(|t| t.leaf_dims(out)),
            Node::Scale { of, .. } => of.leaf_dims(out),
            Node::Pow { base, .. } => base.leaf_dims(out),
        }
    }
}

fn powu(v: f64, exp: u32) -> f64 {
    if exp <= i32::MAX as u32 {
        v.powi(exp as i32)
    } else {
        v.powf(exp as f64)
    }
}

/// Value, gradient and row-major Hessian at a point.
#[derive(Clone, Debug)]
struct Jet {
    v: f64,
    g: Vec<f64>,
    h: Vec<f64>,
}

impl Jet {
    fn constant(n: usize, v: f64) -> Self {
        Jet {
            v,
            g: vec![0.0; n],
            h: vec![0.0; n * n],
        }
    }

    fn add_assign(&mut self, o: &Jet) {
        self.v += o.v;
        self.g.iter_mut().zip(&o.g).for_each(|(a, b)| *a += b);
        self.h.iter_mut().zip(&o.h).for_each(|(a, b)| *a += b);
    }

    fn scale(&mut self, c: f64) {
        self.v *= c;
        self.g.iter_mut().for_each(|a| *a *= c);
        self.h.iter_mut().for_each(|a| *a *= c);
    }

    fn mul(&self, o: &Jet) -> Jet {
        let n = self.g.len();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = self.v * o.h[i * n + j]
                    + o.v * self.h[i * n + j]
                    + self.g[i] * o.g[j]
                    + o.g[i] * self.g[j];
            }
        }
        Jet {
            v: self.v * o.v,
            g: self
                .g
                .iter()
                .zip(&o.g)
                .map(|(a, b)| self.v * b + o.v * a)
                .collect(),
            h,
        }
    }

    fn powu(&self, exp: u32) -> Jet {
        let n = self.g.len();
        if exp == 0 {
            return Jet::constant(n, 1.0);
        }
        let e = exp as f64;
        let f = powu(self.v, exp);
        let f1 = e * powu(self.v, exp - 1);
        let f2 = if exp >= 2 {
            e * (e - 1.0) * powu(self.v, exp - 2)
        } else {
            0.0
        };
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = f1 * self.h[i * n + j] + f2 * self.g[i] * self.g[j];
            }
        }
        Jet {
            v: f,
            g: self.g.iter().map(|a| f1 * a).collect(),
            h,
        }
    }
}

/// A polynomial in `dim` variables, stored as an expression recipe.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalForm {
    dim: usize,
    root: Node,
}

impl EvalForm {
    pub fn new(dim: usize, root: Node) -> Result<Self> {
        let mut dims = Vec::new();
        root.leaf_dims(&mut dims);
        for d in dims {
            check_dim(dim, d)?;
        }
        Ok(Self { dim, root })
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self {
            dim,
            root: Node::Const { value },
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self {
            dim: p.dim(),
            root: Node::Poly { poly: p },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.root.eval(x))
    }

    /// Evaluation without the dimension check, for hot loops over points
    /// that are known to have the right length.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.root.eval(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        Ok(self.root.jet(x).g)
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_dim(self.dim, x.len())?;
        let j = self.root.jet(x);
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|k| 0.5 * (j.h[i * n + k] + j.h[k * n + i]))
                    .collect()
            })
            .collect())
    }

    pub fn degree(&self) -> i64 {
        self.root.degree()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.root.homogeneous_degree().is_some()
    }

    pub fn is_even_degree(&self) -> bool {
        let d = self.degree();
        d >= 0 && d % 2 == 0
    }

    /// Homogeneous continuation of degree `n` of the restriction to
    /// `{x : <x,u> = 1}`.
    pub fn homogenize(&self, u: &[f64], n: u32) -> Result<Self> {
        check_dim(self.dim, u.len())?;
        if u.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidArgument("homogenize: u must be nonzero".into()));
        }
        if self.degree() > n as i64 {
            return Err(Error::InvalidArgument(format!(
                "homogenize: target degree {n} below degree {}",
                self.degree()
            )));
        }
        Ok(Self {
            dim: self.dim,
            root: self.root.homogenize(u, n as i64),
        })
    }

    /// Composition with `x = M y + c`, where `M` has `self.dim()` rows.
    pub fn substitute_affine(&self, rows: &[Vec<f64>], offset: &[f64]) -> Result<Self> {
        check_dim(self.dim, rows.len())?;
        check_dim(self.dim, offset.len())?;
        let new_dim = rows.first().map_or(0, Vec::len);
        Ok(Self {
            dim: new_dim,
            root: self.root.substitute(rows, offset)?,
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            root: Node::scale(c, self.root.clone()),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            root: Node::product(vec![self.root.clone(), other.root.clone()]),
        })
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn expand(&self, budget: usize) -> Result<Polynomial> {
        self.root.expand(self.dim, budget)
    }
}

#[derive(Serialize, Deserialize)]
struct RecipeRepr {
    dim: usize,
    recipe: Node,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyFormRepr {
    Recipe(RecipeRepr),
    Expanded(Polynomial),
}

impl Serialize for EvalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RecipeRepr {
            dim: self.dim,
            recipe: self.root.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EvalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match AnyFormRepr::deserialize(d)? {
            AnyFormRepr::Recipe(r) => EvalForm::new(r.dim, r.recipe).map_err(serde::de::Error::custom),
            AnyFormRepr::Expanded(p) => Ok(EvalForm::from_polynomial(p)),
        }
    }
}

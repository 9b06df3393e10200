use approx::assert_relative_eq;
use polyrep::geometry::Polytope;
use polyrep::sampling::Rng;
use polyrep::{shapes, EvalForm, Monomial, Node, Polynomial};
use proptest::prelude::*;

fn poly(dim: usize, terms: &[(&[u32], f64)]) -> Polynomial {
    Polynomial::from_terms(
        dim,
        terms.iter().map(|(e, c)| Monomial {
            exp: e.to_vec(),
            coef: *c,
        }),
    )
    .unwrap()
}

fn x(i: usize) -> Polynomial {
    Polynomial::variable(2, i)
}

#[test]
fn eval_examples() {
    assert_eq!(Polynomial::constant(2, 1.0).eval(&[3.0, -7.0]).unwrap(), 1.0);
    let p = x(0).add(&x(1).power(2)).unwrap();
    assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), 11.0);
    assert!(p.eval(&[1.0]).is_err());
}

#[test]
fn square_facet_product_at_centre() {
    let sq = Polytope::from_halfspaces(2, &shapes::unit_square()).unwrap();
    let prod = (0..4).fold(Polynomial::constant(2, 1.0), |acc, f| acc.mul(&sq.q_f(f)).unwrap());
    assert_relative_eq!(prod.eval(&[0.5, 0.5]).unwrap(), 0.015625, max_relative = 1e-12);
}

#[test]
fn arithmetic_examples() {
    assert!(x(0).sub(&x(0)).unwrap().is_zero());
    let one = Polynomial::constant(2, 1.0);
    let prod = x(0).add(&one).unwrap().mul(&x(0).sub(&one).unwrap()).unwrap();
    assert_eq!(prod, poly(2, &[(&[2, 0], 1.0), (&[0, 0], -1.0)]));
    let sq = x(0).add(&x(1)).unwrap().power(2);
    assert_eq!(sq, poly(2, &[(&[2, 0], 1.0), (&[1, 1], 2.0), (&[0, 2], 1.0)]));
    assert_eq!(x(1).power(0), one);
}

#[test]
fn degree_and_parity() {
    let p = poly(2, &[(&[2, 1], 1.0), (&[0, 3], 1.0)]);
    assert!(p.is_homogeneous());
    assert_eq!(p.degree(), 3);
    let q = poly(2, &[(&[2, 0], 1.0), (&[0, 0], 1.0)]);
    assert!(!q.is_homogeneous());
    assert!(q.is_even_degree());
    let z = Polynomial::zero(2);
    assert_eq!(z.degree(), -1);
    assert!(!z.is_even_degree());
}

#[test]
fn homogenize_example() {
    let p = Polynomial::variable(3, 0).add(&Polynomial::variable(3, 1).power(2)).unwrap();
    let h = p.homogenize(&[0.0, 0.0, 1.0], 2).unwrap();
    assert_eq!(h, poly(3, &[(&[1, 0, 1], 1.0), (&[0, 2, 0], 1.0)]));
    let at = [0.2, 0.3, 1.0];
    assert_relative_eq!(h.eval(&at).unwrap(), p.eval(&at).unwrap(), max_relative = 1e-15);
    assert_eq!(
        Polynomial::constant(3, 1.0).homogenize(&[0.0, 0.0, 1.0], 0).unwrap(),
        Polynomial::constant(3, 1.0)
    );
    assert!(p.homogenize(&[0.0, 0.0, 1.0], 1).is_err());
}

#[test]
fn derivative_examples() {
    let p = x(0).power(2).add(&x(1).power(2)).unwrap();
    assert_eq!(p.gradient(&[1.0, 2.0]).unwrap(), vec![2.0, 4.0]);
    assert_eq!(p.hessian(&[1.0, 2.0]).unwrap(), vec![vec![2.0, 0.0], vec![0.0, 2.0]]);
    let q = x(0).power(4).add(&x(1).power(4)).unwrap().scale(-1.0);
    assert_eq!(q.hessian(&[1.0, 1.0]).unwrap(), vec![vec![-12.0, 0.0], vec![0.0, -12.0]]);
}

fn random_poly(rng: &mut Rng, dim: usize, deg: u32, terms: usize) -> Polynomial {
    let ms = (0..terms).map(|_| {
        let mut exp = vec![0u32; dim];
        let mut left = (rng.unit() * (deg + 1) as f64) as u32;
        for e in exp.iter_mut() {
            let take = (rng.unit() * (left + 1) as f64) as u32;
            *e = take.min(left);
            left -= *e;
        }
        Monomial {
            exp,
            coef: rng.uniform(-2.0, 2.0),
        }
    });
    Polynomial::from_terms(dim, ms.collect::<Vec<_>>()).unwrap()
}

fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn gradient_and_hessian_match_central_differences() {
    let mut rng = Rng::new(11, 0);
    for _ in 0..10 {
        let p = random_poly(&mut rng, 3, 4, 12);
        for _ in 0..50 {
            let at = rng.in_box(&[-1.0; 3], &[1.0; 3]);
            let f = |y: &[f64]| p.eval(y).unwrap();
            let g = p.gradient(&at).unwrap();
            for (a, b) in g.iter().zip(fd_gradient(&f, &at, 1e-5)) {
                assert!(close(*a, b, 1e-6), "{a} vs {b}");
            }
            let hess = p.hessian(&at).unwrap();
            for i in 0..3 {
                let gi = |y: &[f64]| p.gradient(y).unwrap()[i];
                for (j, fd) in fd_gradient(&gi, &at, 1e-5).into_iter().enumerate() {
                    assert!(close(hess[i][j], fd, 1e-5), "{} vs {fd}", hess[i][j]);
                    assert_eq!(hess[i][j], hess[j][i]);
                }
            }
        }
    }
}

#[test]
fn evaluation_form_agrees_with_expansion() {
    let sq = Polytope::from_halfspaces(2, &shapes::unit_square()).unwrap();
    let q = |f: usize| Node::Poly { poly: sq.q_f(f) };
    let root = Node::sum(vec![
        Node::Const { value: 1.0 },
        Node::scale(-0.5, Node::pow(Node::sum(vec![q(0), q(2)]), 4)),
        Node::product(vec![q(1), q(3), Node::pow(q(0), 2)]),
    ]);
    let form = EvalForm::new(2, root).unwrap();
    let expanded = form.expand(10_000).unwrap();
    assert_eq!(form.degree(), expanded.degree());
    let mut rng = Rng::new(5, 0);
    for _ in 0..100 {
        let at = rng.in_box(&[-1.0, -1.0], &[2.0, 2.0]);
        let (a, b) = (form.eval(&at).unwrap(), expanded.eval(&at).unwrap());
        assert!(close(a, b, 1e-12), "{a} vs {b}");
        for (g1, g2) in form.gradient(&at).unwrap().iter().zip(expanded.gradient(&at).unwrap()) {
            assert!(close(*g1, g2, 1e-12));
        }
        let (h1, h2) = (form.hessian(&at).unwrap(), expanded.hessian(&at).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(h1[i][j], h2[i][j], 1e-11));
            }
        }
    }
    assert!(form.expand(3).is_err());
}

#[test]
fn json_round_trip_is_exact() {
    let mut rng = Rng::new(2, 0);
    let p = random_poly(&mut rng, 3, 5, 20);
    let text = serde_json::to_string(&p).unwrap();
    let back: Polynomial = serde_json::from_str(&text).unwrap();
    assert_eq!(p, back);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let exps: Vec<Vec<u64>> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["exp"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).collect())
        .collect();
    let mut sorted = exps.clone();
    sorted.sort();
    assert_eq!(exps, sorted);
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, 2), -3.0f64..3.0), 0..6).prop_map(|ts| {
        Polynomial::from_terms(2, ts.into_iter().map(|(exp, coef)| Monomial { exp, coef })).unwrap()
    })
}

fn coefficient_close(a: &Polynomial, b: &Polynomial) -> bool {
    let scale = 1.0 + a.max_abs_coef().max(b.max_abs_coef());
    a.max_coef_diff(b) <= 1e-12 * scale
}

proptest! {
    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        let l = a.add(&b).unwrap().add(&c).unwrap();
        let r = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert!(coefficient_close(&l, &r));
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(coefficient_close(&l, &r));
    }

    #[test]
    fn homogenize_agrees_on_the_plane(
        a in small_poly(),
        u in prop::collection::vec(-2.0f64..2.0, 3),
        s in prop::collection::vec(-2.0f64..2.0, 3),
        alpha in 0.1f64..3.0,
    ) {
        let un: f64 = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assume!(un > 0.1);
        // Lift `a` to three variables so the plane `<x, u> = 1` is a proper affine chart.
        let lifted = a.compose_affine(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], &[0.0, 0.0]).unwrap();
        let n = lifted.degree().max(0) as u32 + 1;
        let h = lifted.homogenize(&u, n).unwrap();
        prop_assert!(h.is_homogeneous() || h.is_zero());
        // Move `s` onto the plane along u.
        let t = (1.0 - s.iter().zip(&u).map(|(p, q)| p * q).sum::<f64>()) / (un * un);
        let on: Vec<f64> = s.iter().zip(&u).map(|(p, q)| p + t * q).collect();
        let (hv, pv) = (h.eval(&on).unwrap(), lifted.eval(&on).unwrap());
        let mag = 1.0 + lifted.max_abs_coef() * (1.0 + on.iter().map(|c| c.abs()).sum::<f64>()).powi(n as i32);
        prop_assert!((hv - pv).abs() <= 1e-10 * mag, "{} vs {}", hv, pv);
        let scaled: Vec<f64> = on.iter().map(|c| alpha * c).collect();
        let hs = h.eval(&scaled).unwrap();
        prop_assert!((hs - alpha.powi(n as i32) * hv).abs() <= 1e-10 * mag * alpha.powi(n as i32).max(1.0));
    }
}

#![allow(dead_code)]

use howe3::elliptic::{j_legendre, j_of_quartic_cover, QuarticCover};
use howe3::field_tower::{embedding, make_field, Fe, Field, FieldCtx};
use howe3::howe_construct::{build_ciani, ciani_coefficients, lambda_prime, mu_from_lambdas, mu_quadratic, OortTriple, TwoTorsionParams};
use howe3::hyperelliptic::{decomposed_richelot, transform, weierstrass_points, HyperCurve};
use howe3::invariants::{igusa, shioda, weighted_equal};
use howe3::polynomials::{is_squarefree, resultant, Poly};
use howe3::quartic::{factor_diagnose, is_nonsingular, CianiQuartic, FactorCase, QuadraticCase};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn field(p: u64, level: usize) -> FieldCtx {
    make_field(p, level).unwrap()
}

fn elems<const N: usize>(k: &Field, idx: [u64; N]) -> [Fe; N] {
    let q = k.order_u64().unwrap();
    idx.map(|i| k.element_from_index(i % q))
}

fn params(k: &Field, idx: [u64; 4]) -> Option<TwoTorsionParams> {
    let [a2, a3, b2, b3] = elems(k, idx);
    let t = TwoTorsionParams::new(a2, a3, b2, b3).ok()?;
    (k.mul(a2, a3) != k.mul(b2, b3)).then_some(t)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![11u64, 13, 17, 19, 23])
}

pub type Outcome = Result<(), String>;

/// Deterministic runner that stops after `cases` accepted inputs.
fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn random_octic(k: &Field, idx: [u64; 8]) -> Option<Poly> {
    let mut c: Vec<Fe> = elems(k, idx).to_vec();
    c.push(k.one());
    let f = Poly::from_vec(c);
    is_squarefree(k, &f).then_some(f)
}

pub fn ciani_coefficients_satisfy_identities(cases: u32) -> Outcome {
    runner(cases)
        .run(&(prime(), any::<[u64; 4]>(), any::<[u64; 2]>()), |(p, idx, uw)| {
            let k = field(p, 1);
            let t = params(&k, idx);
            prop_assume!(t.is_some());
            let t = t.unwrap();
            let [b40, b22, b04, b20, b02, b00] = ciani_coefficients(&k, &t);
            let m = |a: Fe, b: Fe| k.mul(a, b);
            let four = |a: Fe| k.mul_int(a, 4);

            // the quartic is Res_x(Q1 - x Y^2, Q2 - x Z^2) as a form in u = Y^2, w = Z^2
            let [u, w] = elems(&k, uw);
            let q1 = Poly::from_vec(vec![m(t.a2, t.a3), k.neg(k.add(k.add(t.a2, t.a3), u)), k.one()]);
            let q2 = Poly::from_vec(vec![m(t.b2, t.b3), k.neg(k.add(k.add(t.b2, t.b3), w)), k.one()]);
            let f = [m(b40, m(u, u)), m(b22, m(u, w)), m(b04, m(w, w)), m(b20, u), m(b02, w), b00].into_iter().fold(k.zero(), |s, x| k.add(s, x));
            prop_assert_eq!(resultant(&k, &q1, &q2).unwrap(), f);

            let d2 = k.sqr(k.sub(m(t.a2, t.a3), m(t.b2, t.b3)));
            prop_assert_eq!(k.sub(k.sqr(b22), four(m(b40, b04))), d2);
            prop_assert_eq!(k.sub(k.sqr(b20), four(m(b40, b00))), m(k.sqr(k.sub(t.b2, t.b3)), d2));
            prop_assert_eq!(k.sub(k.sqr(b02), four(m(b04, b00))), m(k.sqr(k.sub(t.a2, t.a3)), d2));
            let n4 = k.sub(k.add(k.add(k.sub(m(k.sqr(b20), b04), m(m(b20, b22), b02)), m(k.sqr(b02), b40)), m(k.sqr(b22), b00)), four(m(m(b40, b00), b04)));
            prop_assert_eq!(n4, k.sqr(d2));
            let prod = [t.a2, t.a3].iter().flat_map(|&a| [t.b2, t.b3].map(|b| k.sub(a, b))).fold(k.one(), &m);
            prop_assert_eq!(b00, prod);
            prop_assert_eq!(b40, m(t.b2, t.b3));
            prop_assert_eq!(b04, m(t.a2, t.a3));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn ciani_quartics_are_nonsingular_and_irreducible(cases: u32) -> Outcome {
    runner(cases)
        .run(&(prime(), any::<[u64; 4]>()), |(p, idx)| {
            let k = field(p, 1);
            let t = params(&k, idx);
            prop_assume!(t.is_some());
            let t = t.unwrap();
            let c = build_ciani(&k, &t).unwrap();
            prop_assert!(c.is_nonsingular());
            prop_assert!(is_nonsingular(&c.to_general()).unwrap());
            prop_assert_eq!(factor_diagnose(&c).unwrap(), FactorCase::Irreducible);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn factored_quartics_are_diagnosed(cases: u32) -> Outcome {
    runner(cases)
        .run(&(any::<[u64; 7]>(),), |(idx,)| {
            let k = field(101, 0);
            let [b40, a1, a2, u, u2, v, v2] = elems(&k, idx);
            prop_assume!(!b40.is_zero() && !a1.is_zero() && !a2.is_zero());
            // b40 (Y^2 - a1^2 Z^2 - a2^2)^2 - 4 b40 a1^2 a2^2 Z^2 splits into four lines
            let (s1, s2) = (k.sqr(a1), k.sqr(a2));
            let lines = [
                b40,
                k.mul_int(k.mul(b40, s1), -2),
                k.mul(b40, k.sqr(s1)),
                k.mul_int(k.mul(b40, s2), -2),
                k.mul_int(k.mul(b40, k.mul(s1, s2)), -2),
                k.mul(b40, k.sqr(s2)),
            ];
            prop_assert_eq!(factor_diagnose(&CianiQuartic::new(&k, lines).unwrap()).unwrap(), FactorCase::LinearFactor);

            // b40 (Y^2 + u Z^2 + v)(Y^2 + u2 Z^2 + v2) with distinct factors
            let b = [
                b40,
                k.mul(b40, k.add(u, u2)),
                k.mul(b40, k.mul(u, u2)),
                k.mul(b40, k.add(v, v2)),
                k.mul(b40, k.add(k.mul(u, v2), k.mul(v, u2))),
                k.mul(b40, k.mul(v, v2)),
            ];
            prop_assume!(u != u2 && v != v2 && !k.mul(u, u2).is_zero() && !k.mul(v, v2).is_zero());
            prop_assert_eq!(factor_diagnose(&CianiQuartic::new(&k, b).unwrap()).unwrap(), FactorCase::Quadratic(QuadraticCase::IV));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn lambda_prime_round_trips_through_mu_quadratic(cases: u32) -> Outcome {
    runner(cases)
        .run(&(prime(), any::<[u64; 3]>()), |(p, idx)| {
            let k = field(p, 1);
            let [nu, mu, lambda] = elems(&k, idx);
            let o = OortTriple::new(&k, nu, mu, lambda);
            prop_assume!(o.is_ok());
            let o = o.unwrap();
            prop_assume!(k.sqr(mu) != k.div(nu, lambda));
            let lp = lambda_prime(&k, &o);
            prop_assume!(lp.as_ref().is_ok_and(|&l| l != k.one()));
            let lp = lp.unwrap();
            prop_assert!(mu_quadratic(&k, nu, lambda, lp).unwrap().eval(&k, mu).is_zero());
            let (l, mus) = mu_from_lambdas(&k, nu, lambda, lp).unwrap();
            prop_assert!(mus.contains(&embedding(&k, &l).unwrap().embed(mu)));
            let j3 = j_of_quartic_cover(&QuarticCover::new(&k, o.e3_quartic(&k)).unwrap()).unwrap();
            prop_assert_eq!(j3, j_legendre(&k, lp).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Anticommuting trace-zero A, B with eigenvalues +-lA, +-lB: (AB)^2 = -(lA lB)^2.
pub fn product_of_anticommuting_involutions(cases: u32) -> Outcome {
    runner(cases)
        .run(&(prime(), any::<[u64; 5]>()), |(p, idx)| {
            let k = field(p, 1);
            let [a, b, c, a2, b2] = elems(&k, idx);
            prop_assume!(!b.is_zero());
            // 2 a a2 + b c2 + c b2 = 0
            let c2 = k.div(k.neg(k.add(k.mul_int(k.mul(a, a2), 2), k.mul(c, b2))), b);
            let mat = |x: Fe, y: Fe, z: Fe| [[x, y], [z, k.neg(x)]];
            let (ma, mb) = (mat(a, b, c), mat(a2, b2, c2));
            let mul = |x: [[Fe; 2]; 2], y: [[Fe; 2]; 2]| {
                let e = |i: usize, j: usize| k.add(k.mul(x[i][0], y[0][j]), k.mul(x[i][1], y[1][j]));
                [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
            };
            let sq_a = k.add(k.sqr(a), k.mul(b, c));
            let sq_b = k.add(k.sqr(a2), k.mul(b2, c2));
            prop_assume!(!sq_a.is_zero() && !sq_b.is_zero());
            let ab = mul(ma, mb);
            prop_assert_eq!(mul(ab, ab), [[k.neg(k.mul(sq_a, sq_b)), k.zero()], [k.zero(), k.neg(k.mul(sq_a, sq_b))]]);
            prop_assert_eq!(mul(ma, mb), mul(mb, ma).map(|r| r.map(|x| k.neg(x))));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn shioda_is_gl2_invariant(cases: u32) -> Outcome {
    runner(cases)
        .run(&(any::<[u64; 8]>(), any::<[u64; 5]>()), |(idx, m)| {
            let k = field(13, 1);
            let f = random_octic(&k, idx);
            prop_assume!(f.is_some());
            let f = f.unwrap();
            let [a, b, c, d, s] = elems(&k, m);
            prop_assume!(!k.sub(k.mul(a, d), k.mul(b, c)).is_zero() && !s.is_zero());
            let c1 = HyperCurve::new(&k, f).unwrap();
            let c2 = transform(&c1, [a, b, c, d], s).unwrap();
            prop_assert!(weighted_equal(&shioda(&k, &c1.f).unwrap(), &shioda(&k, &c2.f).unwrap()).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn igusa_is_gl2_invariant(cases: u32) -> Outcome {
    runner(cases)
        .run(&(any::<[u64; 6]>(), any::<[u64; 5]>()), |(idx, m)| {
            let k = field(13, 1);
            let mut co = elems(&k, idx).to_vec();
            co.push(k.one());
            let f = Poly::from_vec(co);
            prop_assume!(is_squarefree(&k, &f));
            let [a, b, c, d, s] = elems(&k, m);
            prop_assume!(!k.sub(k.mul(a, d), k.mul(b, c)).is_zero() && !s.is_zero());
            let c1 = HyperCurve::new(&k, f).unwrap();
            let c2 = transform(&c1, [a, b, c, d], s).unwrap();
            prop_assert!(weighted_equal(&igusa(&k, &c1.f).unwrap(), &igusa(&k, &c2.f).unwrap()).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// y^2 = f(x^2) against each decomposed Richelot pair (y^2 = f1, y^2 = x f1):
/// the fibre product y^2 = f1(x^2) has the Shioda invariants of the input.
pub fn richelot_pairs_rebuild_the_curve(cases: u32) -> Outcome {
    runner(cases)
        .run(&(prop::sample::select(vec![11u64, 13]), any::<[u64; 4]>()), |(p, idx)| {
            let k = field(p, 0);
            let mut co = elems(&k, idx).to_vec();
            co.push(k.one());
            let f = Poly::from_vec(co);
            prop_assume!(!f.coeff(0).is_zero());
            let g = f.compose_square(&k);
            prop_assume!(is_squarefree(&k, &g));
            let c = HyperCurve::new(&k, g).unwrap();
            prop_assume!(weierstrass_points(&c).is_ok_and(|w| w.field.level() <= 4));
            let s = shioda(&k, &c.f).unwrap();
            let pairs = decomposed_richelot(&c).unwrap();
            prop_assert!(!pairs.is_empty());
            for (e, h) in &pairs {
                prop_assert_eq!(e.genus, 1);
                prop_assert_eq!(h.genus, 2);
                let rebuilt = shioda(&e.k, &e.f.compose_square(&e.k)).unwrap();
                prop_assert!(weighted_equal(&s.lift(&e.k).unwrap(), &rebuilt).unwrap());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Suite = (&'static str, u32, fn(u32) -> Outcome);

/// Every suite with its case count.
pub const SUITES: [Suite; 8] = [
    ("b_ij identities", 500, ciani_coefficients_satisfy_identities),
    ("nonsingular and irreducible Ciani quartics", 500, ciani_quartics_are_nonsingular_and_irreducible),
    ("factorization controls", 500, factored_quartics_are_diagnosed),
    ("lambda' and mu-quadratic round trip", 500, lambda_prime_round_trips_through_mu_quadratic),
    ("anticommuting involution product", 500, product_of_anticommuting_involutions),
    ("Shioda GL2 invariance", 200, shioda_is_gl2_invariant),
    ("Igusa GL2 invariance", 200, igusa_is_gl2_invariant),
    ("decomposed Richelot round trip", 100, richelot_pairs_rebuild_the_curve),
];

//! Legendre curves, supersingular parameter lists and j-invariants of
//! genus-one double covers y^2 = q(x).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, Fe, Field, FieldCtx};
use crate::polynomials::{all_roots, distinct_roots, is_squarefree, Poly};

/// y^2 = x(x-1)(x-t).
#[derive(Clone, Debug)]
pub struct LegendreCurve {
    pub k: FieldCtx,
    pub t: Fe,
}

impl LegendreCurve {
    pub fn new(k: &FieldCtx, t: Fe) -> Result<LegendreCurve> {
        check_legendre(k, t)?;
        Ok(LegendreCurve { k: k.clone(), t })
    }

    pub fn cover(&self) -> QuarticCover {
        let k = &self.k;
        QuarticCover { k: k.clone(), q: Poly::from_roots(k, &[k.zero(), k.one(), self.t]) }
    }
}

/// Genus-one curve y^2 = q(x), deg q in {3, 4}, q square-free.
#[derive(Clone, Debug)]
pub struct QuarticCover {
    pub k: FieldCtx,
    pub q: Poly,
}

impl QuarticCover {
    pub fn new(k: &FieldCtx, q: Poly) -> Result<QuarticCover> {
        let e = QuarticCover { k: k.clone(), q };
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<()> {
        let d = self.q.deg();
        if d != 3 && d != 4 {
            return Err(Error::NotGenusOne(format!("degree {d}")));
        }
        if !is_squarefree(&self.k, &self.q) {
            return Err(Error::NotGenusOne("repeated root".into()));
        }
        Ok(())
    }
}

fn check_legendre(k: &Field, t: Fe) -> Result<()> {
    if t.is_zero() || t == k.one() {
        return Err(Error::BadParameter("Legendre parameter in {0, 1}".into()));
    }
    Ok(())
}

fn binom_mod(n: u64, p: u64) -> Vec<u64> {
    // C(n, i) mod p for i = 0..=n, n < p
    let mut out = vec![1u64];
    for i in 1..=n {
        let prev = *out.last().unwrap();
        let v = prev * ((n - i + 1) % p) % p * crate::field_tower::pow_mod(i, p - 2, p) % p;
        out.push(v);
    }
    out
}

/// H_p(t) = sum C(m, i)^2 t^i with m = (p-1)/2. Coefficients lie in F_p, so
/// the result is valid over every level of the tower for p = char k.
pub fn deuring_poly(k: &Field) -> Poly {
    let p = k.p() as u64;
    let m = (p - 1) / 2;
    let c = binom_mod(m, p);
    Poly::from_vec(c.iter().map(|&b| k.from_u64(b * b % p)).collect())
}

pub fn is_supersingular(k: &Field, t: Fe) -> Result<bool> {
    check_legendre(k, t)?;
    Ok(deuring_poly(k).eval(k, t).is_zero())
}

/// j = 2^8 (t^2 - t + 1)^3 / (t^2 (t - 1)^2).
pub fn j_legendre(k: &Field, t: Fe) -> Result<Fe> {
    check_legendre(k, t)?;
    let one = k.one();
    let n = k.add(k.sub(k.sqr(t), t), one);
    let num = k.mul_int(k.mul(k.sqr(n), n), 256);
    let tm1 = k.sub(t, one);
    let den = k.sqr(k.mul(t, tm1));
    Ok(k.div(num, den))
}

/// Supersingular data in characteristic p, all in F_{p^2}.
#[derive(Clone, Debug)]
pub struct SupersingularLists {
    pub field: FieldCtx,
    /// Distinct supersingular j-invariants.
    pub s_p: Vec<Fe>,
    /// Roots of the Deuring polynomial.
    pub t_p: Vec<Fe>,
    /// Legendre parameters grouped by j.
    pub t_pj: BTreeMap<Fe, Vec<Fe>>,
}

impl SupersingularLists {
    pub fn contains_j(&self, j: Fe) -> bool {
        self.s_p.binary_search(&j).is_ok()
    }

    pub fn ts_with_j(&self, j: Fe) -> &[Fe] {
        self.t_pj.get(&j).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

pub fn supersingular_lists(p: u64) -> Result<SupersingularLists> {
    let k2 = make_field(p, 1)?;
    let h = deuring_poly(&k2);
    let t_p = distinct_roots(&k2, &h);
    // every supersingular Legendre parameter is defined over F_{p^2}
    assert_eq!(t_p.len() as isize, h.deg(), "Deuring polynomial does not split over F_p^2");
    let mut t_pj: BTreeMap<Fe, Vec<Fe>> = BTreeMap::new();
    for &t in &t_p {
        t_pj.entry(j_legendre(&k2, t)?).or_default().push(t);
    }
    for v in t_pj.values_mut() {
        v.sort();
        debug_assert!(v.len() <= 6);
    }
    let s_p = t_pj.keys().copied().collect();
    Ok(SupersingularLists { field: k2, s_p, t_p, t_pj })
}

/// j-invariant of y^2 = q(x): a root of q is sent to infinity over a splitting
/// field and the Legendre parameter of the remaining three roots is read off.
pub fn j_of_quartic_cover(e: &QuarticCover) -> Result<Fe> {
    e.validate()?;
    let k = &e.k;
    let (big, roots) = all_roots(k, &e.q)?;
    let t = if roots.len() == 3 {
        legendre_of_three(&big, roots[0], roots[1], roots[2])
    } else {
        let r4 = roots[3];
        let u: Vec<Fe> = roots[..3].iter().map(|&r| big.inv(big.sub(r, r4)).unwrap()).collect();
        legendre_of_three(&big, u[0], u[1], u[2])
    };
    let j = j_legendre(&big, t)?;
    let emb = embedding(k, &big)?;
    emb.project(j).ok_or_else(|| Error::FieldMismatch("j-invariant outside the base field".into()))
}

fn legendre_of_three(k: &Field, a: Fe, b: Fe, c: Fe) -> Fe {
    k.div(k.sub(c, a), k.sub(b, a))
}

/// Root-free j via the classical invariants of the binary quartic
/// (I = 12ae - 3bd + c^2, J = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3); p >= 5.
pub fn j_of_quartic_invariants(k: &Field, q: &Poly) -> Option<Fe> {
    if k.p() < 5 {
        return None;
    }
    let (e, d, c, b, a) = (q.coeff(0), q.coeff(1), q.coeff(2), q.coeff(3), q.coeff(4));
    let m = |x: Fe, y: Fe| k.mul(x, y);
    let i = k.add(k.sub(k.mul_int(m(a, e), 12), k.mul_int(m(b, d), 3)), k.sqr(c));
    let j = {
        let t1 = k.mul_int(m(m(a, c), e), 72);
        let t2 = k.mul_int(m(m(b, c), d), 9);
        let t3 = k.mul_int(m(a, k.sqr(d)), 27);
        let t4 = k.mul_int(m(e, k.sqr(b)), 27);
        let t5 = k.mul_int(m(k.sqr(c), c), 2);
        k.sub(k.sub(k.sub(k.add(t1, t2), t3), t4), t5)
    };
    let i3 = m(k.sqr(i), i);
    let den = k.sub(k.mul_int(i3, 4), k.sqr(j));
    let inv = k.inv(den)?;
    Some(k.mul(k.mul_int(i3, 6912), inv))
}

/// Number of points of the smooth model of y^2 = q(x) over the field of level m.
pub fn count_points_genus1(e: &QuarticCover, m: usize) -> Result<u64> {
    e.validate()?;
    let big = make_field(e.k.p() as u64, m)?;
    let emb = embedding(&e.k, &big)?;
    let q = e.q.map(|a| emb.embed(a));
    Ok(count_double_cover(&big, &q))
}

/// Points on the smooth model of y^2 = f(x) over k (any degree >= 1).
pub(crate) fn count_double_cover(k: &Field, f: &Poly) -> u64 {
    let mut total: i64 = 0;
    for x in k.elements() {
        total += 1 + k.chi(f.eval(k, x)) as i64;
    }
    let infinity = if f.deg() % 2 == 1 { 1 } else { 1 + k.chi(f.lead()) as i64 };
    (total + infinity) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deuring_examples() {
        let k7 = make_field(7, 0).unwrap();
        assert_eq!(deuring_poly(&k7), Poly::from_ints(&k7, &[1, 2, 2, 1]));
        let k3 = make_field(3, 0).unwrap();
        assert_eq!(deuring_poly(&k3), Poly::from_ints(&k3, &[1, 1]));
        for p in [3u64, 5, 7, 11, 101, 199] {
            let k = make_field(p, 0).unwrap();
            assert_eq!(deuring_poly(&k).deg(), ((p - 1) / 2) as isize);
        }
    }

    #[test]
    fn supersingular_examples() {
        let k7 = make_field(7, 0).unwrap();
        assert!(is_supersingular(&k7, k7.from_i64(-1)).unwrap());
        assert!(is_supersingular(&k7, k7.from_u64(2)).unwrap());
        let k13 = make_field(13, 0).unwrap();
        assert!(!is_supersingular(&k13, k13.from_u64(2)).unwrap());
        assert!(is_supersingular(&k13, k13.one()).is_err());
    }

    #[test]
    fn j_examples_and_orbit() {
        let k = make_field(13, 1).unwrap();
        assert_eq!(j_legendre(&k, k.from_u64(2)).unwrap(), k.from_u64(1728));
        assert_eq!(j_legendre(&k, k.from_i64(-1)).unwrap(), k.from_u64(1728));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t = k.random(&mut rng);
            if t.is_zero() || t == k.one() {
                continue;
            }
            let j = j_legendre(&k, t).unwrap();
            assert_eq!(j, j_legendre(&k, k.sub(k.one(), t)).unwrap());
            assert_eq!(j, j_legendre(&k, k.inv(t).unwrap()).unwrap());
        }
    }

    fn eichler(p: u64) -> usize {
        let eps = match p % 12 {
            1 => 0,
            5 | 7 => 1,
            11 => 2,
            _ => unreachable!(),
        };
        (p / 12) as usize + eps
    }

    #[test]
    fn supersingular_list_sizes() {
        let l7 = supersingular_lists(7).unwrap();
        assert_eq!(l7.s_p, vec![l7.field.from_u64(6)]);
        assert_eq!(l7.t_p.len(), 3);
        let l11 = supersingular_lists(11).unwrap();
        assert_eq!(l11.s_p, vec![l11.field.zero(), l11.field.one()]);
        for p in (5u64..200).filter(|&p| crate::field_tower::is_prime(p)) {
            let l = supersingular_lists(p).unwrap();
            assert_eq!(l.s_p.len(), eichler(p), "p = {p}");
            assert!(l.t_pj.values().all(|v| v.len() <= 6));
        }
    }

    #[test]
    fn quartic_cover_j() {
        let k = make_field(13, 0).unwrap();
        let t = k.from_u64(5);
        let e = LegendreCurve::new(&k, t).unwrap().cover();
        assert_eq!(j_of_quartic_cover(&e).unwrap(), j_legendre(&k, t).unwrap());
        // (x-1)(x-2)(x-3)(x-12): lambda' = 9
        let f = Poly::from_roots(&k, &[1, 2, 3, 12].map(|v| k.from_u64(v)));
        let e = QuarticCover::new(&k, f).unwrap();
        assert_eq!(j_of_quartic_cover(&e).unwrap(), j_legendre(&k, k.from_u64(9)).unwrap());
        let sq = Poly::from_ints(&k, &[1, 1]).pow(&k, 2).mul(&k, &Poly::from_ints(&k, &[0, 1, 1]));
        assert!(QuarticCover::new(&k, sq).is_err());
    }

    #[test]
    fn quartic_j_independent_of_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (p, m) in [(13u64, 0usize), (11, 1), (7, 1)] {
            let k = make_field(p, m).unwrap();
            let mut done = 0;
            while done < 100 {
                let q = Poly::from_vec((0..5).map(|_| k.random(&mut rng)).collect());
                let Ok(e) = QuarticCover::new(&k, q.clone()) else { continue };
                let j = j_of_quartic_cover(&e).unwrap();
                if let Some(j2) = j_of_quartic_invariants(&k, &q) {
                    assert_eq!(j, j2);
                }
                // x -> (x + 1)/(x - c) changes the model, not the curve
                let c = k.random(&mut rng);
                let num = Poly::from_vec(vec![k.one(), k.one()]);
                let den = Poly::from_vec(vec![k.neg(c), k.one()]);
                let mut t = Poly::zero();
                for i in 0..=4 {
                    let term = num.pow(&k, i as u64).mul(&k, &den.pow(&k, 4 - i as u64));
                    t = t.add(&k, &term.scale(&k, q.coeff(i)));
                }
                if let Ok(e2) = QuarticCover::new(&k, t) {
                    assert_eq!(j_of_quartic_cover(&e2).unwrap(), j);
                }
                done += 1;
            }
        }
    }

    #[test]
    fn point_counts() {
        let k7 = make_field(7, 0).unwrap();
        let e = LegendreCurve::new(&k7, k7.from_i64(-1)).unwrap().cover();
        assert_eq!(count_points_genus1(&e, 1).unwrap(), 64);
        // Hasse bound and supersingular <=> trace = 0 mod p over F_p
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let k = make_field(p, 0).unwrap();
            for t in 2..p {
                let t = k.from_u64(t);
                let e = LegendreCurve::new(&k, t).unwrap().cover();
                let n = count_points_genus1(&e, 0).unwrap() as i64;
                let a = p as i64 + 1 - n;
                assert!(a * a <= 4 * p as i64);
                assert_eq!(a.rem_euclid(p as i64) == 0, is_supersingular(&k, t).unwrap());
            }
        }
        let l = supersingular_lists(11).unwrap();
        for &t in &l.t_p {
            let e = LegendreCurve::new(&l.field, t).unwrap().cover();
            let n = count_points_genus1(&e, 1).unwrap();
            assert!(n == 121 + 1 + 22 || n == 121 + 1 - 22);
        }
    }
}

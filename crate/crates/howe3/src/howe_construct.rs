//! Closed-form genus-3 Howe curves: the hyperelliptic octic of Oort type, the
//! Howe-type octic y^2 = f(x^2), the Ciani quartic of Oort type and the
//! Legendre parameter algebra relating the three elliptic quotients.

use crate::error::{Error, Result};
use crate::field_tower::{embedding, sqrt_any, Fe, Field, FieldCtx};
use crate::hyperelliptic::HyperCurve;
use crate::polynomials::{is_squarefree, roots_at_level, Poly};
use crate::quartic::CianiQuartic;

/// E1: y^2 = x(x-a2)(x-a3) and E2: y^2 = x(x-b2)(x-b3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoTorsionParams {
    pub a2: Fe,
    pub a3: Fe,
    pub b2: Fe,
    pub b3: Fe,
}

impl TwoTorsionParams {
    pub fn new(a2: Fe, a3: Fe, b2: Fe, b3: Fe) -> Result<TwoTorsionParams> {
        let v = [a2, a3, b2, b3];
        for i in 0..4 {
            if v[i].is_zero() {
                return Err(Error::BadParameter("two-torsion parameters must be nonzero".into()));
            }
            for j in 0..i {
                if v[i] == v[j] {
                    return Err(Error::BadParameter("two-torsion parameters must be distinct".into()));
                }
            }
        }
        Ok(TwoTorsionParams { a2, a3, b2, b3 })
    }

    pub fn from_ints(k: &Field, v: [i64; 4]) -> Result<TwoTorsionParams> {
        TwoTorsionParams::new(k.from_i64(v[0]), k.from_i64(v[1]), k.from_i64(v[2]), k.from_i64(v[3]))
    }

    /// (1, nu, mu, mu*lambda).
    pub fn legendre(k: &Field, o: &OortTriple) -> Result<TwoTorsionParams> {
        TwoTorsionParams::new(k.one(), o.nu, o.mu, k.mul(o.mu, o.lambda))
    }

    /// (tau1, tau2, rho1, rho2).
    pub fn symmetric(&self, k: &Field) -> [Fe; 4] {
        [k.add(self.a2, self.a3), k.mul(self.a2, self.a3), k.add(self.b2, self.b3), k.mul(self.b2, self.b3)]
    }
}

/// E_nu: y^2 = x(x-1)(x-nu) and E_{mu,lambda}: y^2 = x(x-mu)(x-mu*lambda).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OortTriple {
    pub nu: Fe,
    pub mu: Fe,
    pub lambda: Fe,
}

impl OortTriple {
    pub fn new(k: &Field, nu: Fe, mu: Fe, lambda: Fe) -> Result<OortTriple> {
        let (zero, one) = (k.zero(), k.one());
        let bad = |s: &str| Err(Error::BadParameter(s.into()));
        if nu == zero || nu == one {
            return bad("nu must avoid 0 and 1");
        }
        if mu == zero || mu == one || mu == nu {
            return bad("mu must avoid 0, 1 and nu");
        }
        let ml = k.mul(mu, lambda);
        if lambda == zero || lambda == one || ml == one || ml == nu {
            return bad("lambda must avoid 0, 1, 1/mu and nu/mu");
        }
        Ok(OortTriple { nu, mu, lambda })
    }

    /// y^2 = (x-1)(x-nu)(x-mu)(x-mu*lambda).
    pub fn e3_quartic(&self, k: &Field) -> Poly {
        Poly::from_roots(k, &[k.one(), self.nu, self.mu, k.mul(self.mu, self.lambda)])
    }
}

pub fn is_oort_hyperelliptic(k: &Field, t: &TwoTorsionParams) -> bool {
    k.mul(t.a2, t.a3) == k.mul(t.b2, t.b3)
}

/// Square roots of every entry, in one common field.
fn common_sqrts(k: &FieldCtx, vals: &[Fe]) -> Result<(FieldCtx, Vec<Fe>)> {
    let mut l = k.clone();
    let mut roots: Vec<Fe> = vec![];
    for &v in vals {
        let e = embedding(k, &l)?;
        let (up, r) = sqrt_any(&l, e.embed(v))?;
        if up.level() != l.level() {
            let lift = embedding(&l, &up)?;
            roots = roots.into_iter().map(|x| lift.embed(x)).collect();
            l = up;
        }
        roots.push(r[0]);
    }
    Ok((l, roots))
}

/// The four constants A_i of y^2 = prod (x^2 - A_i), with the branch
/// sqrt(a2) sqrt(a3) = sqrt(b2) sqrt(b3); returned in the field they were built in.
pub fn howe_hyperelliptic_constants(k: &FieldCtx, t: &TwoTorsionParams) -> Result<(FieldCtx, [Fe; 4])> {
    if !is_oort_hyperelliptic(k, t) {
        return Err(Error::NotHyperellipticCase);
    }
    let d = k.sub(k.add(t.a2, t.a3), k.add(t.b2, t.b3));
    if d.is_zero() {
        return Err(Error::DegenerateDenominator("a2 + a3 - b2 - b3"));
    }
    let (l, r) = common_sqrts(k, &[t.a2, t.a3, t.b2])?;
    let (s2, s3, r2) = (r[0], r[1], r[2]);
    let r3 = l.div(l.mul(s2, s3), r2);
    let d = embedding(k, &l)?.embed(d);
    let sums =
        [l.add(l.add(s2, s3), l.add(r2, r3)), l.sub(l.add(s2, s3), l.add(r2, r3)), l.sub(l.add(s2, r2), l.add(s3, r3)), l.sub(l.add(s2, r3), l.add(s3, r2))];
    let a = sums.map(|n| l.div(l.sqr(n), d));
    Ok((l, a))
}

/// Hyperelliptic Oort-type octic; over k when its coefficients descend, else
/// over the field holding the square roots.
pub fn build_howe_hyperelliptic(k: &FieldCtx, t: &TwoTorsionParams) -> Result<HyperCurve> {
    let (l, a) = howe_hyperelliptic_constants(k, t)?;
    let octic = Poly::from_roots(&l, &a).compose_square(&l);
    let e = embedding(k, &l)?;
    let down: Option<Vec<Fe>> = octic.coeffs().iter().map(|&c| e.project(c)).collect();
    match down {
        Some(c) => HyperCurve::new(k, Poly::from_vec(c)),
        None => HyperCurve::new(&l, octic),
    }
}

/// Howe-type octic y^2 = f(x^2) for a square-free quartic f with f(0) != 0.
pub fn build_howe_from_eh(k: &FieldCtx, f: &Poly) -> Result<HyperCurve> {
    if f.deg() != 4 || !is_squarefree(k, f) || f.coeff(0).is_zero() {
        return Err(Error::BadQuartic("need a square-free quartic with f(0) != 0".into()));
    }
    HyperCurve::new(k, f.compose_square(k))
}

/// Coefficients (b40, b22, b04, b20, b02, b00) of Res_x(Q1 - xY^2, Q2 - xZ^2).
pub fn ciani_coefficients(k: &Field, t: &TwoTorsionParams) -> [Fe; 6] {
    let [t1, t2, r1, r2] = t.symmetric(k);
    let m = |a: Fe, b: Fe| k.mul(a, b);
    let b40 = r2;
    let b22 = k.neg(k.add(t2, r2));
    let b04 = t2;
    let b20 = k.sub(k.sub(k.mul_int(m(t1, r2), 2), m(t2, r1)), m(r1, r2));
    let b02 = k.add(k.neg(k.add(m(t1, t2), m(t1, r2))), k.mul_int(m(t2, r1), 2));
    let b00 = {
        let mut s = m(m(t1, t1), r2);
        s = k.sub(s, m(m(t1, t2), r1));
        s = k.sub(s, m(m(t1, r1), r2));
        s = k.add(s, k.sqr(t2));
        s = k.add(s, m(t2, k.sqr(r1)));
        s = k.sub(s, k.mul_int(m(t2, r2), 2));
        k.add(s, k.sqr(r2))
    };
    [b40, b22, b04, b20, b02, b00]
}

pub fn build_ciani(k: &FieldCtx, t: &TwoTorsionParams) -> Result<CianiQuartic> {
    if is_oort_hyperelliptic(k, t) {
        return Err(Error::HyperellipticCase);
    }
    let b = ciani_coefficients(k, t);
    debug_assert_eq!(b, ciani_by_resultant(k, t));
    CianiQuartic::new(k, b)
}

/// The same coefficients read off the Sylvester determinant, by evaluating
/// the resultant at enough (Y^2, Z^2) pairs.
pub(crate) fn ciani_by_resultant(k: &Field, t: &TwoTorsionParams) -> [Fe; 6] {
    let [t1, t2, r1, r2] = t.symmetric(k);
    // f(u, w) with u = Y^2, w = Z^2 is quadratic in each: r2 u^2 + b22 u w + t2 w^2 + b20 u + b02 w + b00
    let res = |u: Fe, w: Fe| {
        let f1 = Poly::from_vec(vec![t2, k.neg(k.add(t1, u)), k.one()]);
        let f2 = Poly::from_vec(vec![r2, k.neg(k.add(r1, w)), k.one()]);
        crate::polynomials::resultant(k, &f1, &f2).unwrap()
    };
    let z = k.zero();
    let o = k.one();
    let b00 = res(z, z);
    let (f10, fm10) = (res(o, z), res(k.neg(o), z));
    let (f01, f0m1) = (res(z, o), res(z, k.neg(o)));
    let half = k.inv(k.from_u64(2)).unwrap();
    let b40 = k.mul(k.sub(k.add(f10, fm10), k.mul_int(b00, 2)), half);
    let b20 = k.mul(k.sub(f10, fm10), half);
    let b04 = k.mul(k.sub(k.add(f01, f0m1), k.mul_int(b00, 2)), half);
    let b02 = k.mul(k.sub(f01, f0m1), half);
    let f11 = res(o, o);
    let b22 = k.sub(f11, k.add(k.add(k.add(b40, b04), k.add(b20, b02)), b00));
    [b40, b22, b04, b20, b02, b00]
}

/// Legendre parameter of E3 relative to (nu, mu, lambda).
pub fn lambda_prime(k: &Field, o: &OortTriple) -> Result<Fe> {
    let ml = k.mul(o.mu, o.lambda);
    let num = k.mul(k.sub(ml, k.one()), k.sub(o.mu, o.nu));
    let den = k.mul(k.sub(ml, o.nu), k.sub(o.mu, k.one()));
    if den.is_zero() {
        return Err(Error::DegenerateDenominator("(mu lambda - nu)(mu - 1)"));
    }
    Ok(k.div(num, den))
}

/// The quadratic lambda mu^2 + ((lambda'(nu + lambda) - (1 + lambda nu)) / (1 - lambda')) mu + nu.
pub fn mu_quadratic(k: &Field, nu: Fe, lambda: Fe, lp: Fe) -> Result<Poly> {
    let den = k.sub(k.one(), lp);
    if den.is_zero() || lambda.is_zero() {
        return Err(Error::DegenerateDenominator("1 - lambda'"));
    }
    let mid = k.div(k.sub(k.mul(lp, k.add(nu, lambda)), k.add(k.one(), k.mul(lambda, nu))), den);
    Ok(Poly::from_vec(vec![nu, mid, lambda]))
}

/// Admissible roots mu of the quadratic, sorted, in the field of level
/// max(k, 2): the roots always lie in F_{p^4} when k is F_{p^2}.
pub fn mu_from_lambdas(k: &FieldCtx, nu: Fe, lambda: Fe, lp: Fe) -> Result<(FieldCtx, Vec<Fe>)> {
    let q = mu_quadratic(k, nu, lambda, lp)?;
    let level = if k.level() == 0 { 1 } else { 2 * k.level() };
    let (l, roots) = roots_at_level(k, &q, level)?;
    let e = embedding(k, &l)?;
    let (nu, lambda) = (e.embed(nu), e.embed(lambda));
    let linv = l.inv(lambda).unwrap();
    let r = l.mul(linv, nu);
    let excluded = [l.zero(), l.one(), nu, linv, r];
    let mut out: Vec<Fe> = roots.into_iter().map(|(m, _)| m).filter(|m| !excluded.contains(m) && l.sqr(*m) != r).collect();
    out.sort();
    out.dedup();
    Ok((l, out))
}

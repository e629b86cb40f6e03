//! Plane quartics: Ciani forms, nonsingularity, quotient elliptic curves,
//! factorization diagnostics, point counts, and (in [`aut`]) automorphism
//! groups and isomorphism testing through involution centres.

pub mod aut;
pub mod solver;

pub use aut::{
    aut_order, aut_order_with, canonical_key, involutions, isom_quartic, key_of, standard_form_reduce, InvolutionData, QuarticIsomorphism, QuarticKey,
    StandardForm,
};
pub use solver::{solve_zero_dim, MPoly, Solutions, ZeroDimSystem};

use crate::elliptic::QuarticCover;
use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, make_field_bounded, Fe, Field, FieldCtx};
use crate::polynomials::{gcd, powmod, Poly};

/// Exponents (X, Y, Z) of the 15 quartic monomials in graded-lex order.
pub const MONOMIALS: [[u8; 3]; 15] = [
    [4, 0, 0],
    [3, 1, 0],
    [3, 0, 1],
    [2, 2, 0],
    [2, 1, 1],
    [2, 0, 2],
    [1, 3, 0],
    [1, 2, 1],
    [1, 1, 2],
    [1, 0, 3],
    [0, 4, 0],
    [0, 3, 1],
    [0, 2, 2],
    [0, 1, 3],
    [0, 0, 4],
];

pub(crate) fn monomial_index(e: [u8; 3]) -> usize {
    MONOMIALS.iter().position(|m| *m == e).expect("quartic monomial")
}

/// Ternary quartic form; `c[i]` multiplies `MONOMIALS[i]`.
#[derive(Clone, Debug)]
pub struct GeneralQuartic {
    pub k: FieldCtx,
    pub c: [Fe; 15],
}

impl GeneralQuartic {
    pub fn new(k: &FieldCtx, c: [Fe; 15]) -> Result<GeneralQuartic> {
        if c.iter().all(|a| a.is_zero()) {
            return Err(Error::BadQuartic("zero form".into()));
        }
        Ok(GeneralQuartic { k: k.clone(), c })
    }

    pub fn from_ints(k: &FieldCtx, c: [i64; 15]) -> Result<GeneralQuartic> {
        GeneralQuartic::new(k, c.map(|v| k.from_i64(v)))
    }

    /// X^4 + Y^4 + Z^4.
    pub fn fermat(k: &FieldCtx) -> GeneralQuartic {
        let mut c = [0i64; 15];
        c[0] = 1;
        c[10] = 1;
        c[14] = 1;
        GeneralQuartic::from_ints(k, c).expect("nonzero")
    }

    /// X^3 Y + Y^3 Z + Z^3 X.
    pub fn klein(k: &FieldCtx) -> GeneralQuartic {
        let mut c = [0i64; 15];
        c[monomial_index([3, 1, 0])] = 1;
        c[monomial_index([0, 3, 1])] = 1;
        c[monomial_index([1, 0, 3])] = 1;
        GeneralQuartic::from_ints(k, c).expect("nonzero")
    }

    pub fn coeff(&self, e: [u8; 3]) -> Fe {
        self.c[monomial_index(e)]
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(&self.k, 3, MONOMIALS.iter().zip(self.c).map(|(m, c)| (m.to_vec(), c)))
    }

    pub fn from_mpoly(k: &FieldCtx, f: &MPoly) -> Result<GeneralQuartic> {
        let mut c = [Fe::ZERO; 15];
        for (e, &v) in f.terms() {
            if e.len() != 3 || e.iter().map(|&x| x as usize).sum::<usize>() != 4 {
                return Err(Error::BadQuartic("not a homogeneous quartic".into()));
            }
            c[monomial_index([e[0], e[1], e[2]])] = v;
        }
        GeneralQuartic::new(k, c)
    }

    pub fn eval(&self, v: [Fe; 3]) -> Fe {
        self.to_mpoly().eval(&self.k, &v)
    }

    /// The form v -> F(M v).
    pub fn compose(&self, m: &[[Fe; 3]; 3]) -> GeneralQuartic {
        let k = &self.k;
        let lin: Vec<MPoly> = (0..3).map(|r| (0..3).fold(MPoly::zero(3), |acc, c| acc.add(k, &MPoly::var(k, 3, c).scale(k, m[r][c])))).collect();
        let pows: Vec<Vec<MPoly>> = lin.iter().map(|l| (0..=4).map(|e| l.pow(k, e)).collect()).collect();
        let mut out = MPoly::zero(3);
        for (e, &c) in MONOMIALS.iter().zip(&self.c) {
            if c.is_zero() {
                continue;
            }
            let t = pows[0][e[0] as usize].mul(k, &pows[1][e[1] as usize]).mul(k, &pows[2][e[2] as usize]);
            out = out.add(k, &t.scale(k, c));
        }
        let mut c = [Fe::ZERO; 15];
        for (e, &v) in out.terms() {
            c[monomial_index([e[0], e[1], e[2]])] = v;
        }
        GeneralQuartic { k: k.clone(), c }
    }

    /// Same form over a field containing this one.
    pub fn lift(&self, big: &FieldCtx) -> Result<GeneralQuartic> {
        let e = embedding(&self.k, big)?;
        Ok(GeneralQuartic { k: big.clone(), c: self.c.map(|a| e.embed(a)) })
    }

    /// c with self = c * other, when the forms are proportional.
    pub fn ratio_to(&self, other: &GeneralQuartic) -> Option<Fe> {
        let k = &self.k;
        let i = other.c.iter().position(|a| !a.is_zero())?;
        let c = k.div(self.c[i], other.c[i]);
        if c.is_zero() {
            return None;
        }
        let ok = self.c.iter().zip(&other.c).all(|(&a, &b)| a == k.mul(c, b));
        ok.then_some(c)
    }

    /// The Ciani coefficients when only X^4, Y^4, Z^4, X^2Y^2, X^2Z^2, Y^2Z^2 occur.
    pub fn as_ciani(&self) -> Option<CianiQuartic> {
        let even = MONOMIALS.iter().zip(&self.c).all(|(e, c)| c.is_zero() || e.iter().all(|x| x % 2 == 0));
        if !even {
            return None;
        }
        let b = [self.coeff([0, 4, 0]), self.coeff([0, 2, 2]), self.coeff([0, 0, 4]), self.coeff([2, 2, 0]), self.coeff([2, 0, 2]), self.coeff([4, 0, 0])];
        CianiQuartic::new(&self.k, b).ok()
    }

    /// Text form "p; level; c1,...,c15".
    pub fn encode(&self) -> String {
        let cs: Vec<String> = self.c.iter().map(|&a| self.k.encode(a)).collect();
        format!("{}; {}; {}", self.k.p(), self.k.level(), cs.join(","))
    }

    pub fn parse(s: &str) -> Result<GeneralQuartic> {
        let (k, cs) = parse_header(s, 15)?;
        let mut c = [Fe::ZERO; 15];
        c.copy_from_slice(&cs);
        GeneralQuartic::new(&k, c)
    }
}

impl PartialEq for GeneralQuartic {
    fn eq(&self, o: &Self) -> bool {
        self.k.p() == o.k.p() && self.k.level() == o.k.level() && self.c == o.c
    }
}

impl Eq for GeneralQuartic {}

fn parse_header(s: &str, n: usize) -> Result<(FieldCtx, Vec<Fe>)> {
    let parts: Vec<&str> = s.trim().split(';').map(|t| t.trim()).collect();
    if parts.len() != 3 {
        return Err(Error::Parse("expected 'p; level; coefficients'".into()));
    }
    let p: u64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad prime '{}'", parts[0])))?;
    let m: usize = parts[1].parse().map_err(|_| Error::Parse(format!("bad level '{}'", parts[1])))?;
    let k = make_field(p, m)?;
    let cs = parts[2].split(',').map(|t| k.parse(t)).collect::<Result<Vec<_>>>()?;
    if cs.len() != n {
        return Err(Error::Parse(format!("expected {n} coefficients, got {}", cs.len())));
    }
    Ok((k, cs))
}

/// b40 Y^4 + b22 Y^2 Z^2 + b04 Z^4 + b20 Y^2 + b02 Z^2 + b00 = 0, stored in
/// that order; the projective closure uses X as the third coordinate.
#[derive(Clone, Debug)]
pub struct CianiQuartic {
    pub k: FieldCtx,
    pub b: [Fe; 6],
}

impl CianiQuartic {
    pub fn new(k: &FieldCtx, b: [Fe; 6]) -> Result<CianiQuartic> {
        if b[0].is_zero() || b[2].is_zero() || b[5].is_zero() {
            return Err(Error::ZeroCorner);
        }
        Ok(CianiQuartic { k: k.clone(), b })
    }

    pub fn from_ints(k: &FieldCtx, b: [i64; 6]) -> Result<CianiQuartic> {
        CianiQuartic::new(k, b.map(|v| k.from_i64(v)))
    }

    /// (a1, ..., a6) of a1 x^4 + a2 y^4 + a3 x^2 y^2 + a4 x^2 + a5 y^2 + a6 with x = Y, y = Z.
    pub fn standard_coefficients(&self) -> [Fe; 6] {
        let [b40, b22, b04, b20, b02, b00] = self.b;
        [b40, b04, b22, b20, b02, b00]
    }

    pub fn to_general(&self) -> GeneralQuartic {
        let [b40, b22, b04, b20, b02, b00] = self.b;
        let mut c = [Fe::ZERO; 15];
        c[monomial_index([0, 4, 0])] = b40;
        c[monomial_index([0, 2, 2])] = b22;
        c[monomial_index([0, 0, 4])] = b04;
        c[monomial_index([2, 2, 0])] = b20;
        c[monomial_index([2, 0, 2])] = b02;
        c[monomial_index([4, 0, 0])] = b00;
        GeneralQuartic { k: self.k.clone(), c }
    }

    pub fn lift(&self, big: &FieldCtx) -> Result<CianiQuartic> {
        let e = embedding(&self.k, big)?;
        Ok(CianiQuartic { k: big.clone(), b: self.b.map(|a| e.embed(a)) })
    }

    /// The closed-form criterion: the five critical values of the affine
    /// part and the leading discriminant are all nonzero.
    pub fn is_nonsingular(&self) -> bool {
        let k = &self.k;
        let [b40, b22, b04, b20, b02, b00] = self.b;
        if b40.is_zero() || b04.is_zero() {
            return false;
        }
        let d22 = disc(k, b22, b40, b04);
        let d20 = disc(k, b20, b40, b00);
        let d02 = disc(k, b02, b04, b00);
        [b00, d22, d20, d02, fourth_value(k, &self.b)].iter().all(|v| !v.is_zero())
    }

    /// Text form "p; level; b40,b22,b04,b20,b02,b00".
    pub fn encode(&self) -> String {
        let cs: Vec<String> = self.b.iter().map(|&a| self.k.encode(a)).collect();
        format!("{}; {}; {}", self.k.p(), self.k.level(), cs.join(","))
    }

    pub fn parse(s: &str) -> Result<CianiQuartic> {
        let (k, cs) = parse_header(s, 6)?;
        CianiQuartic::new(&k, [cs[0], cs[1], cs[2], cs[3], cs[4], cs[5]])
    }
}

impl PartialEq for CianiQuartic {
    fn eq(&self, o: &Self) -> bool {
        self.k.p() == o.k.p() && self.k.level() == o.k.level() && self.b == o.b
    }
}

impl Eq for CianiQuartic {}

/// x^2 - 4 y z.
fn disc(k: &Field, x: Fe, y: Fe, z: Fe) -> Fe {
    k.sub(k.sqr(x), k.mul_int(k.mul(y, z), 4))
}

/// b20^2 b04 - b20 b22 b02 + b02^2 b40 + b22^2 b00 - 4 b40 b00 b04, the value
/// of f at the critical points off the axes times -(b22^2 - 4 b40 b04).
pub(crate) fn fourth_value(k: &Field, b: &[Fe; 6]) -> Fe {
    let [b40, b22, b04, b20, b02, b00] = *b;
    let m = |x: Fe, y: Fe| k.mul(x, y);
    let mut s = m(k.sqr(b20), b04);
    s = k.sub(s, m(m(b20, b22), b02));
    s = k.add(s, m(k.sqr(b02), b40));
    s = k.add(s, m(k.sqr(b22), b00));
    k.sub(s, k.mul_int(m(m(b40, b00), b04), 4))
}

/// True iff F and its partial derivatives have no common projective zero.
pub fn is_nonsingular(f: &GeneralQuartic) -> Result<bool> {
    let k = &f.k;
    if k.p() == 2 {
        return Err(Error::SmallCharacteristic(2));
    }
    let g = f.to_mpoly();
    let partials: Vec<MPoly> = (0..3).map(|i| g.derivative(k, i)).collect();
    match aut::projective_zeros(k, &partials, crate::field_tower::DEFAULT_MAX_LEVEL) {
        Ok((_, pts)) => Ok(pts.is_empty()),
        Err(Error::NotZeroDimensional) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The three genus-one quotients of a Ciani quartic by its coordinate involutions.
pub fn quartic_quotients(c: &CianiQuartic) -> Result<[QuarticCover; 3]> {
    let k = &c.k;
    let [a1, a2, a3, a4, a5, a6] = c.standard_coefficients();
    // disc in X of A X^2 + (P t^2 + Q) X + (R t^4 + S t^2 + T)
    let cover = |a: Fe, p: Fe, q: Fe, r: Fe, s: Fe, t: Fe| -> Result<QuarticCover> {
        let four_a = k.mul_int(a, 4);
        let c4 = k.sub(k.sqr(p), k.mul(four_a, r));
        let c2 = k.sub(k.mul_int(k.mul(p, q), 2), k.mul(four_a, s));
        let c0 = k.sub(k.sqr(q), k.mul(four_a, t));
        let poly = Poly::from_vec(vec![c0, Fe::ZERO, c2, Fe::ZERO, c4]);
        QuarticCover::new(k, poly).map_err(|e| Error::DegenerateQuotient(e.to_string()))
    };
    Ok([cover(a1, a3, a4, a2, a5, a6)?, cover(a2, a3, a5, a1, a4, a6)?, cover(a6, a4, a5, a1, a3, a2)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuadraticCase {
    I,
    II,
    III,
    IV,
}

/// Outcome of the factorization criteria for a Ciani polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorCase {
    Irreducible,
    LinearFactor,
    Quadratic(QuadraticCase),
}

/// The first factorization shape whose necessary condition holds, checked
/// in the order: linear factor, (II), (I), (III), (IV). `Irreducible` means
/// no shape is possible.
pub fn factor_diagnose(c: &CianiQuartic) -> Result<FactorCase> {
    let k = &c.k;
    let [b40, b22, b04, b20, b02, b00] = c.b;
    if b40.is_zero() || b04.is_zero() || b00.is_zero() {
        return Err(Error::ZeroCorner);
    }
    let d22 = disc(k, b22, b40, b04);
    let d20 = disc(k, b20, b40, b00);
    let d02 = disc(k, b02, b04, b00);
    let mixed = k.add(k.mul(b22, b20), k.mul_int(k.mul(b40, b02), 2));
    if d22.is_zero() && d20.is_zero() && mixed.is_zero() {
        return Ok(FactorCase::LinearFactor);
    }
    if d22.is_zero() && d20.is_zero() {
        return Ok(FactorCase::Quadratic(QuadraticCase::II));
    }
    if d22.is_zero() {
        return Ok(FactorCase::Quadratic(QuadraticCase::I));
    }
    if d20.is_zero() && d02.is_zero() {
        return Ok(FactorCase::Quadratic(QuadraticCase::III));
    }
    let big = make_field(k.p() as u64, (2 * k.level()).max(1))?;
    let e = embedding(k, &big)?;
    let s1 = big.sqrt(e.embed(d22)).expect("quadratic extension contains the root");
    let s2 = big.sqrt(e.embed(d20)).expect("quadratic extension contains the root");
    let base = e.embed(k.sub(k.mul_int(k.mul(b40, b02), 2), k.mul(b22, b20)));
    let prod = big.mul(s1, s2);
    if big.add(base, prod).is_zero() || big.sub(base, prod).is_zero() {
        return Ok(FactorCase::Quadratic(QuadraticCase::IV));
    }
    Ok(FactorCase::Irreducible)
}

/// Projective points of F = 0 over the level-m field.
pub fn count_points_quartic(f: &GeneralQuartic, m: usize) -> Result<u64> {
    let big = make_field_bounded(f.k.p() as u64, m, crate::field_tower::DEFAULT_MAX_LEVEL)?;
    let g = f.lift(&big)?;
    if let Some(c) = g.as_ciani() {
        return Ok(count_ciani(&c));
    }
    let k = &big;
    let q = k.order().to_u64_digits();
    let mut total = 0u64;
    // Z = 1
    for x in k.elements() {
        let mut ys = vec![Fe::ZERO; 5];
        for (e, &c) in MONOMIALS.iter().zip(&g.c) {
            if !c.is_zero() {
                let t = k.mul(c, k.pow_u64(x, e[0] as u64));
                ys[e[1] as usize] = k.add(ys[e[1] as usize], t);
            }
        }
        total += count_roots(k, &Poly::from_vec(ys), &q);
    }
    // Z = 0, Y = 1
    let mut xs = vec![Fe::ZERO; 5];
    for (e, &c) in MONOMIALS.iter().zip(&g.c) {
        if e[2] == 0 {
            xs[e[0] as usize] = k.add(xs[e[0] as usize], c);
        }
    }
    total += count_roots(k, &Poly::from_vec(xs), &q);
    if g.c[0].is_zero() {
        total += 1;
    }
    Ok(total)
}

fn count_roots(k: &Field, f: &Poly, q: &[u64]) -> u64 {
    match f.deg() {
        d if d < 0 => k.order_u64().expect("small field"),
        0 => 0,
        1 => 1,
        _ => {
            let f = f.monic(k);
            let x = Poly::x(k);
            let xq = powmod(k, &x, q, &f);
            gcd(k, &f, &xq.sub(k, &x)).deg() as u64
        }
    }
}

fn count_ciani(c: &CianiQuartic) -> u64 {
    let k = &c.k;
    let [b40, b22, b04, b20, b02, b00] = c.b;
    // Y-count above a root s of Y^2 = s
    let fiber = |s: Fe| -> u64 { (1 + k.chi(s)) as u64 };
    // roots in k of A s^2 + B s + C, A != 0
    let quad = |a: Fe, b: Fe, cc: Fe| -> u64 {
        let d = k.sub(k.sqr(b), k.mul_int(k.mul(a, cc), 4));
        let two_a = k.mul_int(a, 2);
        if d.is_zero() {
            return fiber(k.div(k.neg(b), two_a));
        }
        match k.sqrt(d) {
            None => 0,
            Some(r) => fiber(k.div(k.sub(r, b), two_a)) + fiber(k.div(k.sub(k.neg(r), b), two_a)),
        }
    };
    let mut total = 0u64;
    // X = 1: f(Y, Z) = 0
    let mut z2_seen = std::collections::HashMap::new();
    for z in k.elements() {
        let z2 = k.sqr(z);
        let n = *z2_seen.entry(z2).or_insert_with(|| {
            let bb = k.add(k.mul(b22, z2), b20);
            let cc = k.add(k.add(k.mul(b04, k.sqr(z2)), k.mul(b02, z2)), b00);
            quad(b40, bb, cc)
        });
        total += n;
    }
    // X = 0, Z = 1: b40 t^2 + b22 t + b04 with t = Y^2; Y = 1, Z = 0 is impossible
    total + quad(b40, b22, b04)
}

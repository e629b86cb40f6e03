//! Dense univariate polynomials over a [`Field`], resultants, square-freeness
//! and root finding by Cantor-Zassenhaus splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, Fe, Field, FieldCtx};

/// Seed for the probabilistic splitting step.
pub const DEFAULT_ROOT_SEED: u64 = 0x5eed_0fc0_ffee;

/// Dense polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: vec![] }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::from_vec(vec![a])
    }

    pub fn one(k: &Field) -> Poly {
        Poly::constant(k.one())
    }

    /// The polynomial x.
    pub fn x(k: &Field) -> Poly {
        Poly::from_vec(vec![k.zero(), k.one()])
    }

    /// x - a.
    pub fn linear(k: &Field, a: Fe) -> Poly {
        Poly::from_vec(vec![k.neg(a), k.one()])
    }

    pub fn monomial(k: &Field, c: Fe, d: usize) -> Poly {
        let mut v = vec![k.zero(); d + 1];
        v[d] = c;
        Poly::from_vec(v)
    }

    pub fn from_vec(mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_coeffs(_k: &Field, c: Vec<Fe>) -> Poly {
        Poly::from_vec(c)
    }

    pub fn from_ints(k: &Field, c: &[i64]) -> Poly {
        Poly::from_vec(c.iter().map(|&v| k.from_i64(v)).collect())
    }

    /// Product of (x - r) over the given roots.
    pub fn from_roots(k: &Field, roots: &[Fe]) -> Poly {
        let mut f = Poly::one(k);
        for &r in roots {
            f = f.mul(k, &Poly::linear(k, r));
        }
        f
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn add(&self, k: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_vec((0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, k: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_vec((0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, k: &Field) -> Poly {
        Poly::from_vec(self.c.iter().map(|&a| k.neg(a)).collect())
    }

    pub fn scale(&self, k: &Field, s: Fe) -> Poly {
        Poly::from_vec(self.c.iter().map(|&a| k.mul(a, s)).collect())
    }

    pub fn mul(&self, k: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![k.zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = k.add(r[i + j], k.mul(a, b));
            }
        }
        Poly::from_vec(r)
    }

    pub fn pow(&self, k: &Field, mut e: u64) -> Poly {
        let mut r = Poly::one(k);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(k, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(k, &b);
            }
        }
        r
    }

    pub fn eval(&self, k: &Field, x: Fe) -> Fe {
        let mut r = k.zero();
        for &a in self.c.iter().rev() {
            r = k.add(k.mul(r, x), a);
        }
        r
    }

    pub fn derivative(&self, k: &Field) -> Poly {
        Poly::from_vec(self.c.iter().enumerate().skip(1).map(|(i, &a)| k.mul_int(a, i as i64)).collect())
    }

    /// f(x) -> f(x^2).
    pub fn compose_square(&self, k: &Field) -> Poly {
        let mut v = vec![k.zero(); 2 * self.c.len()];
        for (i, &a) in self.c.iter().enumerate() {
            v[2 * i] = a;
        }
        Poly::from_vec(v)
    }

    pub fn monic(&self, k: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = k.inv(self.lead()).expect("nonzero lead");
        self.scale(k, inv)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, k: &Field, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let inv = k.inv(d.lead()).expect("nonzero lead");
        let mut q = vec![k.zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = k.mul(r[i + dl - 1], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for j in 0..dl {
                r[i + j] = k.sub(r[i + j], k.mul(c, d.c[j]));
            }
        }
        r.truncate(dl - 1);
        (Poly::from_vec(q), Poly::from_vec(r))
    }

    pub fn rem(&self, k: &Field, d: &Poly) -> Poly {
        self.divrem(k, d).1
    }

    /// Map coefficients through a function (e.g. an embedding).
    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::from_vec(self.c.iter().map(|&a| f(a)).collect())
    }

    /// Comma-separated element encodings, constant term first.
    pub fn encode(&self, k: &Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.c.iter().map(|&a| k.encode(a)).collect::<Vec<_>>().join(",")
    }

    pub fn parse(k: &Field, s: &str) -> Result<Poly> {
        let c = s.split(',').map(|t| k.parse(t)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_vec(c))
    }
}

/// Monic gcd (zero if both are zero).
pub fn gcd(k: &Field, a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(k, &b);
        a = b;
        b = r;
    }
    a.monic(k)
}

/// (a^e) mod m with e given by little-endian limbs.
pub fn powmod(k: &Field, a: &Poly, e: &[u64], m: &Poly) -> Poly {
    let mut r = Poly::one(k).rem(k, m);
    let a = a.rem(k, m);
    for &limb in e.iter().rev() {
        for bit in (0..64).rev() {
            r = r.mul(k, &r).rem(k, m);
            if (limb >> bit) & 1 == 1 {
                r = r.mul(k, &a).rem(k, m);
            }
        }
    }
    r
}

fn det(k: &Field, mut m: Vec<Vec<Fe>>) -> Fe {
    let n = m.len();
    let mut d = k.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return k.zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = k.neg(d);
        }
        let pv = m[col][col];
        d = k.mul(d, pv);
        let inv = k.inv(pv).expect("pivot nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = k.mul(m[r][col], inv);
            for c in col..n {
                let t = k.mul(f, m[col][c]);
                m[r][c] = k.sub(m[r][c], t);
            }
        }
    }
    d
}

/// Determinant of a square matrix over k.
pub fn determinant(k: &Field, m: Vec<Vec<Fe>>) -> Fe {
    det(k, m)
}

/// Sylvester resultant with formal degrees df >= deg f, dg >= deg g.
pub fn resultant_formal(k: &Field, f: &Poly, df: usize, g: &Poly, dg: usize) -> Fe {
    let n = df + dg;
    if n == 0 {
        return k.one();
    }
    let mut m = vec![vec![k.zero(); n]; n];
    for i in 0..dg {
        for j in 0..=df {
            m[i][i + j] = f.coeff(df - j);
        }
    }
    for i in 0..df {
        for j in 0..=dg {
            m[dg + i][i + j] = g.coeff(dg - j);
        }
    }
    det(k, m)
}

/// Sylvester-matrix resultant; zero iff f and g share a root over the closure.
pub fn resultant(k: &Field, f: &Poly, g: &Poly) -> Result<Fe> {
    match (f.degree(), g.degree()) {
        (None, None) => Err(Error::ZeroInputs),
        (None, Some(_)) | (Some(_), None) => Ok(k.zero()),
        (Some(df), Some(dg)) => Ok(resultant_formal(k, f, df, g, dg)),
    }
}

/// gcd(f, f') is constant.
pub fn is_squarefree(k: &Field, f: &Poly) -> bool {
    if f.is_zero() {
        return false;
    }
    gcd(k, f, &f.derivative(k)).deg() == 0
}

fn q_limbs(k: &Field) -> Vec<u64> {
    k.order().to_u64_digits()
}

fn split_linear(k: &Field, g: &Poly, rng: &mut ChaCha8Rng, half: &[u64], out: &mut Vec<Fe>) {
    match g.deg() {
        d if d <= 0 => {}
        1 => {
            let r = k.neg(k.div(g.coeff(0), g.coeff(1)));
            out.push(r);
        }
        _ => loop {
            let a = k.random(rng);
            let base = Poly::from_vec(vec![a, k.one()]);
            let h = powmod(k, &base, half, g).sub(k, &Poly::one(k));
            let d = gcd(k, g, &h);
            if d.deg() > 0 && d.deg() < g.deg() {
                let (q, _) = g.divrem(k, &d);
                split_linear(k, &d, rng, half, out);
                split_linear(k, &q.monic(k), rng, half, out);
                return;
            }
        },
    }
}

/// Distinct roots in k of a polynomial over k, sorted.
pub fn distinct_roots_seeded(k: &Field, f: &Poly, seed: u64) -> Vec<Fe> {
    if f.deg() <= 0 {
        return vec![];
    }
    let f = f.monic(k);
    let x = Poly::x(k);
    let xq = powmod(k, &x, &q_limbs(k), &f);
    let g = gcd(k, &f, &xq.sub(k, &x));
    let mut out = vec![];
    if g.deg() <= 0 {
        return out;
    }
    // odd characteristic: split with (x + a)^{(q-1)/2} - 1
    let half: BigUint = (k.order() - BigUint::one()) >> 1usize;
    let half = half.to_u64_digits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    split_linear(k, &g, &mut rng, &half, &mut out);
    out.sort();
    out
}

pub fn distinct_roots(k: &Field, f: &Poly) -> Vec<Fe> {
    distinct_roots_seeded(k, f, DEFAULT_ROOT_SEED)
}

/// Roots in k with multiplicities, sorted by canonical element order.
pub fn roots_in(k: &Field, f: &Poly) -> Vec<(Fe, usize)> {
    let rs = distinct_roots(k, f);
    rs.into_iter()
        .map(|r| {
            let lin = Poly::linear(k, r);
            let mut m = 0;
            let mut h = f.clone();
            loop {
                let (q, rem) = h.divrem(k, &lin);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                h = q;
            }
            (r, m)
        })
        .collect()
}

/// Roots of f (over `k`) lying in the field of level `m`.
pub fn roots_at_level(k: &FieldCtx, f: &Poly, m: usize) -> Result<(FieldCtx, Vec<(Fe, usize)>)> {
    if f.is_zero() {
        return Err(Error::BadParameter("roots of the zero polynomial".into()));
    }
    let target = make_field(k.p() as u64, m)?;
    let e = embedding(k, &target)?;
    let g = f.map(|a| e.embed(a));
    let r = roots_in(&target, &g);
    Ok((target, r))
}

/// Degrees of the irreducible factors of a square-free f (distinct-degree
/// factorization), sorted.
pub fn factor_degrees(k: &Field, f: &Poly) -> Vec<usize> {
    let mut out = vec![];
    if f.deg() <= 0 {
        return out;
    }
    let mut f = f.monic(k);
    let x = Poly::x(k);
    let q = q_limbs(k);
    let mut h = x.rem(k, &f);
    let mut d = 1;
    while f.deg() > 0 {
        if 2 * d > f.deg() as usize {
            out.push(f.deg() as usize);
            break;
        }
        h = powmod(k, &h, &q, &f);
        let g = gcd(k, &f, &h.sub(k, &x));
        if g.deg() > 0 {
            for _ in 0..(g.deg() as usize / d) {
                out.push(d);
            }
            f = f.divrem(k, &g).0.monic(k);
            h = h.rem(k, &f);
        }
        d += 1;
    }
    out.sort();
    out
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Smallest tower level over which the square-free f splits completely.
pub fn splitting_level(k: &Field, f: &Poly) -> usize {
    let base = k.degree();
    let mut n = base;
    for d in factor_degrees(k, f) {
        n = lcm(n, base * d);
    }
    if n == 1 {
        0
    } else {
        lcm(n, 2) / 2
    }
}

/// Distinct roots of f over its splitting level (at least the level of k).
pub fn all_roots(k: &FieldCtx, f: &Poly) -> Result<(FieldCtx, Vec<Fe>)> {
    let m = splitting_level(k, f).max(k.level());
    let (target, r) = roots_at_level(k, f, m)?;
    Ok((target, r.into_iter().map(|x| x.0).collect()))
}

/// Requested coefficients of f^e.
pub fn power_coeffs(k: &Field, f: &Poly, e: u64, idxs: &[usize]) -> Vec<Fe> {
    let mut acc = Poly::one(k);
    for _ in 0..e {
        acc = acc.mul(k, f);
    }
    idxs.iter().map(|&i| acc.coeff(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;
    use rand::Rng;

    #[test]
    fn resultant_examples() {
        let k = make_field(7, 0).unwrap();
        let f = Poly::from_ints(&k, &[-1, 1]);
        let g = Poly::from_ints(&k, &[-3, 1]);
        assert_eq!(resultant(&k, &f, &g).unwrap(), k.from_u64(5));
        assert_eq!(resultant(&k, &f, &f).unwrap(), k.zero());
        let a = Poly::from_ints(&k, &[1, 0, 1]);
        let b = Poly::from_ints(&k, &[-1, 0, 1]);
        assert_eq!(resultant(&k, &a, &b).unwrap(), k.from_u64(4));
        assert_eq!(resultant(&k, &Poly::zero(), &Poly::zero()), Err(Error::ZeroInputs));
    }

    #[test]
    fn squarefree_examples() {
        let k = make_field(7, 0).unwrap();
        assert!(is_squarefree(&k, &Poly::from_ints(&k, &[-1, 0, 1])));
        assert!(!is_squarefree(&k, &Poly::from_ints(&k, &[1, -2, 1])));
        let k11 = make_field(11, 0).unwrap();
        let mut c = vec![0i64; 9];
        c[0] = -1;
        c[8] = 1;
        assert!(is_squarefree(&k11, &Poly::from_ints(&k11, &c)));
    }

    #[test]
    fn root_examples() {
        let k = make_field(7, 0).unwrap();
        let f = Poly::from_ints(&k, &[-2, 0, 1]);
        let r: Vec<Fe> = roots_in(&k, &f).into_iter().map(|x| x.0).collect();
        assert_eq!(r, vec![k.from_u64(3), k.from_u64(4)]);
        let g = Poly::from_ints(&k, &[1, 0, 1]);
        assert!(roots_in(&k, &g).is_empty());
        let (k2, r2) = roots_at_level(&k, &g, 1).unwrap();
        assert_eq!(r2.len(), 2);
        for (r, m) in r2 {
            assert_eq!(m, 1);
            assert!(k2.add(k2.sqr(r), k2.one()).is_zero());
        }
        let k13 = make_field(13, 0).unwrap();
        let h = Poly::from_ints(&k13, &[2, 9, 4]);
        let r: Vec<Fe> = roots_in(&k13, &h).into_iter().map(|x| x.0).collect();
        assert_eq!(r, vec![k13.from_u64(3), k13.from_u64(11)]);
        let dbl = Poly::from_ints(&k13, &[1, -2, 1]).mul(&k13, &Poly::from_ints(&k13, &[-5, 1]));
        assert_eq!(roots_in(&k13, &dbl), vec![(k13.from_u64(1), 2), (k13.from_u64(5), 1)]);
    }

    #[test]
    fn factor_degree_examples() {
        let k = make_field(7, 0).unwrap();
        // (x^2+1)(x-3)(x^3 - 2) ; x^3 - 2 irreducible mod 7 (2 not a cube)
        let f = Poly::from_ints(&k, &[1, 0, 1]).mul(&k, &Poly::from_ints(&k, &[-3, 1])).mul(&k, &Poly::from_ints(&k, &[-2, 0, 0, 1]));
        assert_eq!(factor_degrees(&k, &f), vec![1, 2, 3]);
        assert_eq!(splitting_level(&k, &f), 3);
        let (k6, rs) = all_roots(&k, &f).unwrap();
        assert_eq!(k6.degree(), 6);
        assert_eq!(rs.len(), 6);
    }

    #[test]
    fn power_coeff_examples() {
        let k = make_field(11, 0).unwrap();
        let mut c = vec![0i64; 9];
        c[0] = -1;
        c[8] = 1;
        let f = Poly::from_ints(&k, &c);
        assert_eq!(power_coeffs(&k, &f, 1, &[0, 8]), vec![k.from_i64(-1), k.one()]);
        let k3 = make_field(3, 0).unwrap();
        let g = Poly::from_ints(&k3, &[0, 1, 0, 1]);
        assert_eq!(power_coeffs(&k3, &g, 1, &[2]), vec![k3.zero()]);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = make_field(5, 0).unwrap();
        for _ in 0..1000 {
            let da = rng.gen_range(1..=8);
            let db = rng.gen_range(1..=8);
            let a = Poly::from_vec((0..=da).map(|_| k.random(&mut rng)).collect());
            let b = Poly::from_vec((0..=db).map(|_| k.random(&mut rng)).collect());
            if a.deg() < 1 || b.deg() < 1 {
                continue;
            }
            let r = resultant(&k, &a, &b).unwrap();
            assert_eq!(r.is_zero(), gcd(&k, &a, &b).deg() >= 1);
        }
    }

    #[test]
    fn roots_divide_and_cofactor_has_no_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = make_field(13, 1).unwrap();
        for _ in 0..100 {
            let d = rng.gen_range(1..=10);
            let f = Poly::from_vec((0..=d).map(|_| k.random(&mut rng)).collect());
            if f.deg() < 1 {
                continue;
            }
            let rs = roots_in(&k, &f);
            let mut h = f.clone();
            for &(r, m) in &rs {
                for _ in 0..m {
                    let (q, rem) = h.divrem(&k, &Poly::linear(&k, r));
                    assert!(rem.is_zero());
                    h = q;
                }
            }
            assert!(distinct_roots(&k, &h).is_empty());
        }
    }
}

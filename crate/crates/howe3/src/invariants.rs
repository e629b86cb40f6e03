//! Igusa (genus 2) and Shioda (genus 3) invariants via transvectants, and
//! equality of invariant tuples in weighted projective space.

use crate::error::{Error, Result};
use crate::field_tower::{Fe, Field, FieldCtx};
use crate::polynomials::Poly;

/// Binary form sum c_i x^i z^{d-i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub d: usize,
    pub c: Vec<Fe>,
}

impl BinaryForm {
    /// Homogenization of f to formal degree d.
    pub fn from_poly(k: &Field, f: &Poly, d: usize) -> BinaryForm {
        let mut c: Vec<Fe> = (0..=d).map(|i| f.coeff(i)).collect();
        c.resize(d + 1, k.zero());
        BinaryForm { d, c }
    }

    fn dx(&self, k: &Field) -> BinaryForm {
        if self.d == 0 {
            return BinaryForm { d: 0, c: vec![k.zero()] };
        }
        let c = (1..=self.d).map(|i| k.mul_int(self.c[i], i as i64)).collect();
        BinaryForm { d: self.d - 1, c }
    }

    fn dz(&self, k: &Field) -> BinaryForm {
        if self.d == 0 {
            return BinaryForm { d: 0, c: vec![k.zero()] };
        }
        let c = (0..self.d).map(|i| k.mul_int(self.c[i], (self.d - i) as i64)).collect();
        BinaryForm { d: self.d - 1, c }
    }

    fn mul(&self, k: &Field, o: &BinaryForm) -> BinaryForm {
        let mut c = vec![k.zero(); self.d + o.d + 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        BinaryForm { d: self.d + o.d, c }
    }

    fn constant(&self) -> Fe {
        debug_assert_eq!(self.d, 0);
        self.c[0]
    }
}

fn factorial_mod(n: usize, p: u64) -> u64 {
    (1..=n as u64).fold(1, |a, b| a * b % p)
}

fn binom(n: usize, r: usize) -> i64 {
    (0..r).fold(1i64, |a, i| a * (n - i) as i64 / (i + 1) as i64)
}

/// r-th transvectant, normalized by (d1-r)!(d2-r)!/(d1! d2!). Degrees must be < p.
pub fn transvectant(k: &Field, f: &BinaryForm, g: &BinaryForm, r: usize) -> BinaryForm {
    assert!(r <= f.d && r <= g.d);
    let p = k.p() as u64;
    // derivative tables: fd[a] = d^r f / dx^{r-a} dz^a
    let table = |h: &BinaryForm| -> Vec<BinaryForm> {
        (0..=r)
            .map(|a| {
                let mut t = h.clone();
                for _ in 0..(r - a) {
                    t = t.dx(k);
                }
                for _ in 0..a {
                    t = t.dz(k);
                }
                t
            })
            .collect()
    };
    let fd = table(f);
    let gd = table(g);
    let mut acc = BinaryForm { d: f.d + g.d - 2 * r, c: vec![k.zero(); f.d + g.d - 2 * r + 1] };
    for i in 0..=r {
        // d^r f/dx^{r-i}dz^i * d^r g/dx^i dz^{r-i}
        let term = fd[i].mul(k, &gd[r - i]);
        let s = if i % 2 == 0 { binom(r, i) } else { -binom(r, i) };
        for (a, b) in acc.c.iter_mut().zip(term.c.iter()) {
            *a = k.add(*a, k.mul_int(*b, s));
        }
    }
    let num = factorial_mod(f.d - r, p) * factorial_mod(g.d - r, p) % p;
    let den = factorial_mod(f.d, p) * factorial_mod(g.d, p) % p;
    let scale = k.div(k.from_u64(num), k.from_u64(den));
    for a in acc.c.iter_mut() {
        *a = k.mul(*a, scale);
    }
    acc
}

/// Invariant tuple with weights, compared up to scaling v_i -> c^{w_i} v_i.
#[derive(Clone, Debug)]
pub struct WeightedInvariants {
    pub k: FieldCtx,
    pub genus: u8,
    pub values: Vec<Fe>,
    pub weights: Vec<u32>,
}

impl WeightedInvariants {
    /// The same tuple viewed in an extension field.
    pub fn lift(&self, big: &FieldCtx) -> Result<WeightedInvariants> {
        let e = crate::field_tower::embedding(&self.k, big)?;
        Ok(WeightedInvariants { k: big.clone(), genus: self.genus, values: self.values.iter().map(|&v| e.embed(v)).collect(), weights: self.weights.clone() })
    }

    pub fn encode(&self) -> Vec<String> {
        self.values.iter().map(|&v| self.k.encode(v)).collect()
    }
}

/// Igusa-Clebsch (I2, I4, I6, I10) of a sextic (formal degree 6).
pub fn igusa_clebsch(k: &Field, f: &Poly) -> Result<[Fe; 4]> {
    if k.p() < 7 {
        return Err(Error::SmallCharacteristic(k.p()));
    }
    let f = BinaryForm::from_poly(k, f, 6);
    let i = transvectant(k, &f, &f, 4);
    let delta = transvectant(k, &i, &i, 2);
    let y1 = transvectant(k, &f, &i, 4);
    let y2 = transvectant(k, &i, &y1, 2);
    let y3 = transvectant(k, &i, &y2, 2);
    let a = transvectant(k, &f, &f, 6).constant();
    let b = transvectant(k, &i, &i, 4).constant();
    let c = transvectant(k, &i, &delta, 4).constant();
    let d = transvectant(k, &y3, &y1, 2).constant();
    let lin = |terms: &[(i64, Fe)]| terms.iter().fold(k.zero(), |s, &(n, v)| k.add(s, k.mul_int(v, n)));
    let m = |x: Fe, y: Fe| k.mul(x, y);
    let a2 = k.sqr(a);
    let a3 = m(a2, a);
    let a5 = m(a3, a2);
    let i2 = k.mul_int(a, -120);
    let i4 = lin(&[(-720, a2), (6750, b)]);
    let i6 = lin(&[(8640, a3), (-108000, m(a, b)), (202500, c)]);
    let i10 = lin(&[(-62208, a5), (972000, m(a3, b)), (1620000, m(a2, c)), (-3037500, m(a, k.sqr(b))), (-6075000, m(b, c)), (-4556250, d)]);
    Ok([i2, i4, i6, i10])
}

/// Igusa invariants (J2, J4, J6, J8, J10) of a genus-2 curve y^2 = f(x).
pub fn igusa(k: &FieldCtx, f: &Poly) -> Result<WeightedInvariants> {
    if f.deg() != 5 && f.deg() != 6 {
        return Err(Error::InvalidCurve("igusa needs a quintic or sextic".into()));
    }
    let [i2, i4, i6, i10] = igusa_clebsch(k, f)?;
    let q = |a: Fe, n: u64| k.div(a, k.from_u64(n));
    let j2 = q(i2, 8);
    let j4 = q(k.sub(k.mul_int(k.sqr(j2), 4), i4), 96);
    let j6 = q(k.sub(k.sub(k.mul_int(k.mul(k.sqr(j2), j2), 8), k.mul_int(k.mul(j2, j4), 160)), i6), 576);
    let j8 = q(k.sub(k.mul(j2, j6), k.sqr(j4)), 4);
    let j10 = q(i10, 4096);
    Ok(WeightedInvariants { k: k.clone(), genus: 2, values: vec![j2, j4, j6, j8, j10], weights: vec![2, 4, 6, 8, 10] })
}

/// Shioda invariants J2..J10 of a genus-3 curve y^2 = f(x), deg f in {7, 8}.
pub fn shioda(k: &FieldCtx, f: &Poly) -> Result<WeightedInvariants> {
    if k.p() <= 7 {
        return Err(Error::SmallCharacteristic(k.p()));
    }
    if f.deg() != 7 && f.deg() != 8 {
        return Err(Error::InvalidCurve("shioda needs a degree 7 or 8 polynomial".into()));
    }
    let t = |a: &BinaryForm, b: &BinaryForm, r| transvectant(k, a, b, r);
    let f = BinaryForm::from_poly(k, f, 8);
    let g = t(&f, &f, 4);
    let kk = t(&f, &f, 6);
    let h = t(&kk, &kk, 2);
    let m = t(&f, &kk, 4);
    let n = t(&f, &h, 4);
    let pp = t(&g, &kk, 4);
    let q = t(&g, &h, 4);
    let values = vec![
        t(&f, &f, 8).constant(),
        t(&f, &g, 8).constant(),
        t(&kk, &kk, 4).constant(),
        t(&m, &kk, 4).constant(),
        t(&kk, &h, 4).constant(),
        t(&m, &h, 4).constant(),
        t(&pp, &h, 4).constant(),
        t(&n, &h, 4).constant(),
        t(&q, &h, 4).constant(),
    ];
    Ok(WeightedInvariants { k: k.clone(), genus: 3, values, weights: (2..=10).collect() })
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn pow_signed(k: &Field, a: Fe, e: i64) -> Fe {
    let base = if e < 0 { k.inv(a).expect("nonzero") } else { a };
    k.pow_u64(base, e.unsigned_abs())
}

/// Whether b = (c^{w_i} a_i) for some nonzero c over the algebraic closure.
pub fn weighted_equal(a: &WeightedInvariants, b: &WeightedInvariants) -> Result<bool> {
    if a.genus != b.genus || a.weights != b.weights {
        return Err(Error::GenusMismatch);
    }
    let k = &a.k;
    let support: Vec<usize> = (0..a.values.len()).filter(|&i| !a.values[i].is_zero()).collect();
    for i in 0..a.values.len() {
        if a.values[i].is_zero() != b.values[i].is_zero() {
            return Ok(false);
        }
    }
    if support.is_empty() {
        return Ok(true);
    }
    let w = |i: usize| a.weights[i] as i64;
    for (x, &i) in support.iter().enumerate() {
        for &j in &support[x + 1..] {
            let g = ext_gcd(w(i), w(j)).0;
            let (ei, ej) = ((w(j) / g) as u64, (w(i) / g) as u64);
            let lhs = k.mul(k.pow_u64(a.values[i], ei), k.pow_u64(b.values[j], ej));
            let rhs = k.mul(k.pow_u64(b.values[i], ei), k.pow_u64(a.values[j], ej));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    // c^d from a Bezout combination of the support weights, then every
    // ratio must be the corresponding power of it
    let ratio = |i: usize| k.div(b.values[i], a.values[i]);
    let mut d = w(support[0]);
    let mut cd = ratio(support[0]);
    for &i in &support[1..] {
        let (g, x, y) = ext_gcd(d, w(i));
        cd = k.mul(pow_signed(k, cd, x), pow_signed(k, ratio(i), y));
        d = g;
    }
    for &i in &support {
        if k.pow_u64(cd, (w(i) / d) as u64) != ratio(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;
    use crate::polynomials::{all_roots, is_squarefree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// f transformed by x -> (ax+b)/(cx+d), times (cx+d)^n and lambda^2.
    pub(crate) fn transform(k: &Field, f: &Poly, n: usize, m: [Fe; 4], lam2: Fe) -> Poly {
        let num = Poly::from_vec(vec![m[1], m[0]]);
        let den = Poly::from_vec(vec![m[3], m[2]]);
        let mut t = Poly::zero();
        for i in 0..=n {
            let term = num.pow(k, i as u64).mul(k, &den.pow(k, (n - i) as u64));
            t = t.add(k, &term.scale(k, f.coeff(i)));
        }
        t.scale(k, lam2)
    }

    fn random_sqfree(k: &Field, d: usize, rng: &mut ChaCha8Rng) -> Poly {
        loop {
            let f = Poly::from_vec((0..=d).map(|_| k.random(rng)).collect());
            if f.deg() == d as isize && is_squarefree(k, &f) {
                return f;
            }
        }
    }

    fn random_gl2(k: &Field, rng: &mut ChaCha8Rng) -> [Fe; 4] {
        loop {
            let m = [k.random(rng), k.random(rng), k.random(rng), k.random(rng)];
            if !k.sub(k.mul(m[0], m[3]), k.mul(m[1], m[2])).is_zero() {
                return m;
            }
        }
    }

    fn d2(k: &Field, a: Fe, b: Fe) -> Fe {
        k.sqr(k.sub(a, b))
    }

    #[test]
    fn igusa_clebsch_matches_root_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [11u64, 13, 17] {
            let k = make_field(p, 0).unwrap();
            for _ in 0..20 {
                let f = random_sqfree(&k, 6, &mut rng);
                let ic = igusa_clebsch(&k, &f).unwrap();
                let (big, r) = all_roots(&k, &f).unwrap();
                let emb = crate::field_tower::embedding(&k, &big).unwrap();
                let a6 = emb.embed(f.lead());
                let b = &big;
                let pairs: Vec<[usize; 6]> = {
                    let mut out = vec![];
                    for j in 1..6 {
                        let rest: Vec<usize> = (1..6).filter(|&x| x != j).collect();
                        for l in 1..4 {
                            let r2: Vec<usize> = rest.iter().copied().filter(|&x| x != rest[0] && x != rest[l]).collect();
                            out.push([0, j, rest[0], rest[l], r2[0], r2[1]]);
                        }
                    }
                    out
                };
                assert_eq!(pairs.len(), 15);
                let mut i2 = b.zero();
                for q in &pairs {
                    let t = b.mul(b.mul(d2(b, r[q[0]], r[q[1]]), d2(b, r[q[2]], r[q[3]])), d2(b, r[q[4]], r[q[5]]));
                    i2 = b.add(i2, t);
                }
                i2 = b.mul(i2, b.sqr(a6));
                let mut splits = vec![];
                for x in 1..6 {
                    for y in x + 1..6 {
                        let other: Vec<usize> = (1..6).filter(|&z| z != x && z != y).collect();
                        splits.push(([0, x, y], [other[0], other[1], other[2]]));
                    }
                }
                assert_eq!(splits.len(), 10);
                let tri = |t: [usize; 3]| b.mul(b.mul(d2(b, r[t[0]], r[t[1]]), d2(b, r[t[1]], r[t[2]])), d2(b, r[t[2]], r[t[0]]));
                let mut i4 = b.zero();
                let mut i6 = b.zero();
                let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
                for (s, t) in &splits {
                    let base = b.mul(tri(*s), tri(*t));
                    i4 = b.add(i4, base);
                    for pm in &perms {
                        let mut v = base;
                        for z in 0..3 {
                            v = b.mul(v, d2(b, r[s[z]], r[t[pm[z]]]));
                        }
                        i6 = b.add(i6, v);
                    }
                }
                i4 = b.mul(i4, b.pow_u64(a6, 4));
                i6 = b.mul(i6, b.pow_u64(a6, 6));
                let mut i10 = b.pow_u64(a6, 10);
                for x in 0..6 {
                    for y in x + 1..6 {
                        i10 = b.mul(i10, d2(b, r[x], r[y]));
                    }
                }
                assert_eq!(emb.embed(ic[0]), i2);
                assert_eq!(emb.embed(ic[1]), i4);
                assert_eq!(emb.embed(ic[2]), i6);
                assert_eq!(emb.embed(ic[3]), i10);
            }
        }
    }

    #[test]
    fn igusa_invariance_and_discriminant() {
        let k = make_field(13, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let f = random_sqfree(&k, 6, &mut rng);
            let a = igusa(&k, &f).unwrap();
            assert!(!a.values[4].is_zero());
            let g = transform(&k, &f, 6, random_gl2(&k, &mut rng), k.random_nonzero(&mut rng));
            let b = igusa(&k, &g).unwrap();
            assert!(weighted_equal(&a, &b).unwrap());
        }
    }

    #[test]
    fn shioda_invariance() {
        let k = make_field(13, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut distinct = 0;
        for _ in 0..200 {
            let f = random_sqfree(&k, 8, &mut rng);
            let a = shioda(&k, &f).unwrap();
            let g = transform(&k, &f, 8, random_gl2(&k, &mut rng), k.random_nonzero(&mut rng));
            let b = shioda(&k, &g).unwrap();
            assert!(weighted_equal(&a, &b).unwrap());
            let h = random_sqfree(&k, 8, &mut rng);
            if !weighted_equal(&a, &shioda(&k, &h).unwrap()).unwrap() {
                distinct += 1;
            }
        }
        assert!(distinct > 190);
        // scaling x -> c x
        let c = k.from_u64(3);
        let f = Poly::from_vec({
            let mut v = vec![k.zero(); 9];
            v[0] = k.neg(k.one());
            v[8] = k.one();
            v
        });
        let c8 = k.pow_u64(c, 8);
        let g = f.scale(&k, c8);
        let g = Poly::from_vec((0..9).map(|i| if i == 8 { c8 } else { g.coeff(i) }).collect());
        assert!(weighted_equal(&shioda(&k, &f).unwrap(), &shioda(&k, &g).unwrap()).unwrap());
        let k7 = make_field(7, 1).unwrap();
        assert_eq!(shioda(&k7, &f).unwrap_err(), Error::SmallCharacteristic(7));
    }

    #[test]
    fn weighted_equality_relation() {
        let k = make_field(11, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mk = |v: Vec<Fe>| WeightedInvariants { k: k.clone(), genus: 3, values: v, weights: (2..=10).collect() };
        let scale = |a: &WeightedInvariants, c: Fe| mk(a.values.iter().zip(&a.weights).map(|(&v, &w)| k.mul(v, k.pow_u64(c, w as u64))).collect());
        for _ in 0..500 {
            let mut v: Vec<Fe> = (0..9).map(|_| k.random(&mut rng)).collect();
            for x in v.iter_mut() {
                if rng.gen_bool(0.3) {
                    *x = k.zero();
                }
            }
            let a = mk(v);
            let b = scale(&a, k.random_nonzero(&mut rng));
            let c = scale(&b, k.random_nonzero(&mut rng));
            assert!(weighted_equal(&a, &a).unwrap());
            assert!(weighted_equal(&a, &b).unwrap() && weighted_equal(&b, &a).unwrap());
            assert!(weighted_equal(&a, &c).unwrap());
            if let Some(i) = a.values.iter().position(|x| !x.is_zero()) {
                let mut z = b.clone();
                z.values[i] = k.zero();
                assert!(!weighted_equal(&a, &z).unwrap());
            }
            let r = mk((0..9).map(|_| k.random_nonzero(&mut rng)).collect());
            let s = mk((0..9).map(|_| k.random_nonzero(&mut rng)).collect());
            assert_eq!(weighted_equal(&r, &s).unwrap(), weighted_equal(&s, &r).unwrap());
        }
        let g2 = WeightedInvariants { k: k.clone(), genus: 2, values: vec![k.one(); 5], weights: vec![2, 4, 6, 8, 10] };
        assert_eq!(weighted_equal(&g2, &mk(vec![k.one(); 9])), Err(Error::GenusMismatch));
    }

    use rand::Rng;
}

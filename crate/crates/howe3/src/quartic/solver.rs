//! Sparse multivariate polynomials and a resultant-elimination solver for
//! zero-dimensional systems.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field_bounded, Fe, Field, FieldCtx};
use crate::hyperelliptic::common_level;
use crate::polynomials::{factor_degrees, gcd, resultant_formal, roots_in, Poly};

const SOLVER_SEED: u64 = 0x5eed_0d1e;

/// Polynomial in `nvars` variables; exponent vectors index the terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Fe>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Fe) -> MPoly {
        let mut m = MPoly::zero(nvars);
        if !c.is_zero() {
            m.terms.insert(vec![0; nvars], c);
        }
        m
    }

    pub fn var(k: &Field, nvars: usize, i: usize) -> MPoly {
        MPoly::monomial(nvars, unit(nvars, i), k.one())
    }

    pub fn monomial(nvars: usize, e: Vec<u8>, c: Fe) -> MPoly {
        assert_eq!(e.len(), nvars);
        let mut m = MPoly::zero(nvars);
        if !c.is_zero() {
            m.terms.insert(e, c);
        }
        m
    }

    pub fn from_terms(k: &Field, nvars: usize, it: impl IntoIterator<Item = (Vec<u8>, Fe)>) -> MPoly {
        let mut m = MPoly::zero(nvars);
        for (e, c) in it {
            m.add_term(k, e, c);
        }
        m
    }

    fn add_term(&mut self, k: &Field, e: Vec<u8>, c: Fe) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert(Fe::ZERO);
        *slot = k.add(*slot, c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Fe)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8]) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn total_degree(&self) -> isize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as isize).sum()).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, i: usize) -> usize {
        self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)
    }

    pub fn add(&self, k: &Field, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, &c) in &o.terms {
            r.add_term(k, e.clone(), c);
        }
        r
    }

    pub fn sub(&self, k: &Field, o: &MPoly) -> MPoly {
        self.add(k, &o.scale(k, k.neg(k.one())))
    }

    pub fn scale(&self, k: &Field, s: Fe) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, &c)| (e.clone(), k.mul(c, s))).collect() }
    }

    pub fn mul(&self, k: &Field, o: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Vec<u8>, Fe> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(Fe::ZERO);
                *slot = k.add(*slot, k.mul(c1, c2));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, k: &Field, e: u32) -> MPoly {
        let mut r = MPoly::constant(self.nvars, k.one());
        for _ in 0..e {
            r = r.mul(k, self);
        }
        r
    }

    pub fn derivative(&self, k: &Field, i: usize) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(k, e2, k.mul_int(c, e[i] as i64));
            }
        }
        r
    }

    pub fn eval(&self, k: &Field, pt: &[Fe]) -> Fe {
        let pows = powers(k, pt, self);
        let mut s = k.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    t = k.mul(t, pows[i][d as usize]);
                }
            }
            s = k.add(s, t);
        }
        s
    }

    /// Substitute x_i = a and drop the variable.
    pub fn specialize(&self, k: &Field, i: usize, a: Fe) -> MPoly {
        let d = self.degree_in(i);
        let mut pw = vec![k.one()];
        for _ in 0..d {
            pw.push(k.mul(*pw.last().unwrap(), a));
        }
        let mut r = MPoly::zero(self.nvars - 1);
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            let x = e2.remove(i);
            r.add_term(k, e2, k.mul(c, pw[x as usize]));
        }
        r
    }

    /// Drop variable i, which must not occur.
    pub fn drop_var(&self, i: usize) -> MPoly {
        debug_assert_eq!(self.degree_in(i), 0);
        MPoly {
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| {
                    let mut e2 = e.clone();
                    e2.remove(i);
                    (e2, c)
                })
                .collect(),
        }
    }

    /// The polynomial viewed in variable i alone; all other exponents must be zero.
    pub fn to_univariate(&self, i: usize) -> Poly {
        let d = self.degree_in(i);
        let mut c = vec![Fe::ZERO; d + 1];
        for (e, &v) in &self.terms {
            debug_assert!(e.iter().enumerate().all(|(j, &x)| j == i || x == 0));
            c[e[i] as usize] = v;
        }
        Poly::from_vec(c)
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> MPoly {
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        MPoly { nvars: self.nvars, terms }
    }
}

fn unit(n: usize, i: usize) -> Vec<u8> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn powers(k: &Field, pt: &[Fe], f: &MPoly) -> Vec<Vec<Fe>> {
    (0..f.nvars)
        .map(|i| {
            let d = f.degree_in(i);
            let mut v = vec![k.one()];
            for _ in 0..d {
                v.push(k.mul(*v.last().unwrap(), pt[i]));
            }
            v
        })
        .collect()
}

/// Polynomial system whose solution set is expected to be finite.
#[derive(Clone, Debug)]
pub struct ZeroDimSystem {
    pub k: FieldCtx,
    pub nvars: usize,
    pub polys: Vec<MPoly>,
}

/// Solutions of a system, all coordinates in `field`, sorted canonically.
#[derive(Clone, Debug)]
pub struct Solutions {
    pub field: FieldCtx,
    pub points: Vec<Vec<Fe>>,
}

pub(crate) enum Step<T> {
    Done(T),
    Need(usize),
}

/// All solutions over the algebraic closure, found at the smallest level
/// (at most `max_level`) containing them, by eliminating the last variable
/// with resultants of random combinations and back-substituting. Every
/// returned point is checked against every input polynomial.
pub fn solve_zero_dim(sys: &ZeroDimSystem, max_level: usize) -> Result<Solutions> {
    let mut level = sys.k.level();
    loop {
        let e = make_field_bounded(sys.k.p() as u64, level, max_level)?;
        match solve_at(sys, &e)? {
            Step::Done(points) => return Ok(Solutions { field: e, points }),
            Step::Need(l) => {
                let next = common_level(&[level, l]);
                if next > max_level {
                    return Err(Error::LevelOverflow { requested: next, max: max_level });
                }
                level = next;
            }
        }
    }
}

/// Solutions with coordinates in `e`, or the level that is needed instead.
pub(crate) fn solve_at(sys: &ZeroDimSystem, e: &FieldCtx) -> Result<Step<Vec<Vec<Fe>>>> {
    let emb = embedding(&sys.k, e)?;
    let polys: Vec<MPoly> = sys.polys.iter().map(|f| f.map(|a| emb.embed(a))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SOLVER_SEED);
    let step = solve_rec(e, &polys, sys.nvars, &mut rng)?;
    Ok(match step {
        Step::Done(mut pts) => {
            pts.retain(|p| polys.iter().all(|f| f.eval(e, p).is_zero()));
            pts.sort();
            pts.dedup();
            Step::Done(pts)
        }
        need => need,
    })
}

fn solve_rec(k: &FieldCtx, polys: &[MPoly], n: usize, rng: &mut ChaCha8Rng) -> Result<Step<Vec<Vec<Fe>>>> {
    let polys: Vec<MPoly> = polys.iter().filter(|f| !f.is_zero()).cloned().collect();
    if n == 0 {
        return Ok(Step::Done(if polys.is_empty() { vec![vec![]] } else { vec![] }));
    }
    if polys.is_empty() {
        return Err(Error::NotZeroDimensional);
    }
    if polys.iter().any(|f| f.total_degree() == 0) {
        return Ok(Step::Done(vec![]));
    }
    if n == 1 {
        let g = polys.iter().fold(Poly::zero(), |acc, f| gcd(k, &acc, &f.to_univariate(0)));
        return Ok(match split_roots(k, &g) {
            Step::Done(r) => Step::Done(r.into_iter().map(|x| vec![x]).collect()),
            Step::Need(l) => Step::Need(l),
        });
    }
    let last = n - 1;
    let (with, without): (Vec<MPoly>, Vec<MPoly>) = polys.iter().cloned().partition(|f| f.degree_in(last) > 0);
    let mut elim: Vec<MPoly> = without.iter().map(|f| f.drop_var(last)).collect();
    if with.len() >= 2 {
        let mut found = 0;
        for _ in 0..6 {
            let a = random_combination(k, &with, rng);
            let b = random_combination(k, &with, rng);
            match resultant_last(k, &a, &b)? {
                Step::Need(l) => return Ok(Step::Need(l)),
                Step::Done(r) => {
                    if !r.is_zero() {
                        elim.push(r);
                        found += 1;
                        if found == 2 {
                            break;
                        }
                    }
                }
            }
        }
        if found == 0 {
            return Err(Error::NotZeroDimensional);
        }
    }
    let partial = match solve_rec(k, &elim, n - 1, rng)? {
        Step::Done(p) => p,
        Step::Need(l) => return Ok(Step::Need(l)),
    };
    let mut out = vec![];
    for pt in partial {
        let mut g = Poly::zero();
        for f in &with {
            let mut h = f.clone();
            for &x in &pt {
                h = h.specialize(k, 0, x);
            }
            g = gcd(k, &g, &h.to_univariate(0));
        }
        let ys = if with.is_empty() || g.is_zero() {
            return Err(Error::NotZeroDimensional);
        } else {
            match split_roots(k, &g) {
                Step::Done(r) => r,
                Step::Need(l) => return Ok(Step::Need(l)),
            }
        };
        for y in ys {
            let mut full = pt.clone();
            full.push(y);
            if polys.iter().all(|f| f.eval(k, &full).is_zero()) {
                out.push(full);
            }
        }
    }
    Ok(Step::Done(out))
}

fn random_combination(k: &Field, fs: &[MPoly], rng: &mut ChaCha8Rng) -> MPoly {
    let mut acc = MPoly::zero(fs[0].nvars);
    for f in fs {
        acc = acc.add(k, &f.scale(k, k.random_nonzero(rng)));
    }
    acc
}

/// Distinct roots of g in k when g splits there.
fn split_roots(k: &FieldCtx, g: &Poly) -> Step<Vec<Fe>> {
    if g.deg() <= 0 {
        return Step::Done(vec![]);
    }
    let roots = roots_in(k, g);
    let mut rest = g.monic(k);
    for &(r, m) in &roots {
        for _ in 0..m {
            rest = rest.divrem(k, &Poly::linear(k, r)).0;
        }
    }
    if rest.deg() <= 0 {
        return Step::Done(roots.into_iter().map(|r| r.0).collect());
    }
    Step::Need(needed_level(k, &rest))
}

/// Level over which the root-free polynomial h acquires all its roots.
fn needed_level(k: &FieldCtx, h: &Poly) -> usize {
    let d = h.derivative(k);
    let base = k.level().max(1);
    if d.is_zero() {
        return 2 * base;
    }
    let sf = h.divrem(k, &gcd(k, h, &d)).0;
    let mut levels = vec![k.level()];
    levels.extend(factor_degrees(k, &sf).into_iter().map(|deg| level_of_degree(k.degree() * deg)));
    let l = common_level(&levels);
    if l <= k.level() {
        2 * base
    } else {
        l
    }
}

fn level_of_degree(n: usize) -> usize {
    if n == 1 {
        0
    } else {
        n.div_ceil(2)
    }
}

/// Res_{x_last}(a, b) as a polynomial in the remaining variables, by
/// evaluation at a grid of points and interpolation.
fn resultant_last(k: &FieldCtx, a: &MPoly, b: &MPoly) -> Result<Step<MPoly>> {
    let n = a.nvars;
    let last = n - 1;
    let (da, db) = (a.degree_in(last), b.degree_in(last));
    let tot = (a.total_degree().max(0) * b.total_degree().max(0)) as usize;
    let bounds: Vec<usize> = (0..last).map(|i| (a.degree_in(i) * db + b.degree_in(i) * da).min(tot)).collect();
    let need = bounds.iter().copied().max().unwrap_or(0) + 1;
    if let Some(q) = k.order_u64() {
        if q < need as u64 {
            let mut l = k.level().max(1);
            let base = l;
            while (k.p() as u64).checked_pow(2 * l as u32).is_some_and(|q| q < need as u64) {
                l += base;
            }
            return Ok(Step::Need(l));
        }
    }
    Ok(Step::Done(interp_resultant(k, a, b, da, db, &bounds)))
}

fn interp_resultant(k: &Field, a: &MPoly, b: &MPoly, da: usize, db: usize, bounds: &[usize]) -> MPoly {
    if bounds.is_empty() {
        let r = resultant_formal(k, &a.to_univariate(0), da, &b.to_univariate(0), db);
        return MPoly::constant(0, r);
    }
    let d = bounds[0];
    let pts: Vec<Fe> = (0..=d as u64).map(|i| k.element_from_index(i)).collect();
    let vals: Vec<MPoly> = pts.iter().map(|&x| interp_resultant(k, &a.specialize(k, 0, x), &b.specialize(k, 0, x), da, db, &bounds[1..])).collect();
    let basis = lagrange_basis(k, &pts);
    let nv = bounds.len();
    let mut out = MPoly::zero(nv);
    for (v, l) in vals.iter().zip(&basis) {
        for (e, &c) in v.terms() {
            for (i, &li) in l.coeffs().iter().enumerate() {
                if li.is_zero() {
                    continue;
                }
                let mut e2 = Vec::with_capacity(nv);
                e2.push(i as u8);
                e2.extend_from_slice(e);
                out.add_term(k, e2, k.mul(c, li));
            }
        }
    }
    out
}

/// Polynomials l_j with l_j(x_i) = [i = j].
pub(crate) fn lagrange_basis(k: &Field, xs: &[Fe]) -> Vec<Poly> {
    let master = Poly::from_roots(k, xs);
    let dm = master.derivative(k);
    xs.iter()
        .map(|&x| {
            let q = master.divrem(k, &Poly::linear(k, x)).0;
            let s = k.inv(dm.eval(k, x)).expect("distinct interpolation nodes");
            q.scale(k, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    fn sys(k: &FieldCtx, n: usize, polys: Vec<Vec<(Vec<u8>, i64)>>) -> ZeroDimSystem {
        let polys = polys.into_iter().map(|ts| MPoly::from_terms(k, n, ts.into_iter().map(|(e, c)| (e, k.from_i64(c))))).collect();
        ZeroDimSystem { k: k.clone(), nvars: n, polys }
    }

    #[test]
    fn linear_system() {
        let k = make_field(7, 0).unwrap();
        let s = sys(&k, 2, vec![vec![(vec![1, 0], 1), (vec![0, 0], -1)], vec![(vec![0, 1], 1), (vec![0, 0], -2)]]);
        let r = solve_zero_dim(&s, 12).unwrap();
        assert_eq!(r.points, vec![vec![k.from_u64(1), k.from_u64(2)]]);
    }

    #[test]
    fn square_root_system() {
        let k = make_field(7, 0).unwrap();
        let s = sys(&k, 2, vec![vec![(vec![2, 0], 1), (vec![0, 0], -2)], vec![(vec![0, 1], 1), (vec![1, 0], -1)]]);
        let r = solve_zero_dim(&s, 12).unwrap();
        let three = k.from_u64(3);
        let four = k.from_u64(4);
        assert_eq!(r.points, vec![vec![three, three], vec![four, four]]);
    }

    #[test]
    fn extends_the_field_when_needed() {
        // x^2 + 1 = 0, y^2 = x over F_7: y is a primitive 8th root of unity
        let k = make_field(7, 0).unwrap();
        let s = sys(&k, 2, vec![vec![(vec![2, 0], 1), (vec![0, 0], 1)], vec![(vec![0, 2], 1), (vec![1, 0], -1)]]);
        let r = solve_zero_dim(&s, 12).unwrap();
        assert_eq!(r.points.len(), 4);
        assert_eq!(r.field.level(), 1);
        for p in &r.points {
            let e = &r.field;
            assert_eq!(e.add(e.sqr(p[0]), e.one()), e.zero());
            assert_eq!(e.sqr(p[1]), p[0]);
        }
    }

    #[test]
    fn three_variables() {
        // x + y + z = 6, xy + yz + zx = 11, xyz = 6 over F_101: permutations of (1, 2, 3)
        let k = make_field(101, 0).unwrap();
        let s = sys(
            &k,
            3,
            vec![
                vec![(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 1), (vec![0, 0, 0], -6)],
                vec![(vec![1, 1, 0], 1), (vec![0, 1, 1], 1), (vec![1, 0, 1], 1), (vec![0, 0, 0], -11)],
                vec![(vec![1, 1, 1], 1), (vec![0, 0, 0], -6)],
            ],
        );
        let r = solve_zero_dim(&s, 12).unwrap();
        assert_eq!(r.points.len(), 6);
    }

    #[test]
    fn positive_dimensional_is_reported() {
        let k = make_field(11, 0).unwrap();
        let s = sys(&k, 2, vec![vec![(vec![1, 0], 1), (vec![0, 1], -1)]]);
        assert_eq!(solve_zero_dim(&s, 12).unwrap_err(), Error::NotZeroDimensional);
    }
}

//! Richelot isogenies of genus-2 curves, Rosenhain forms and enumeration of
//! superspecial genus-2 curves by breadth-first search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::elliptic::{j_of_quartic_cover, j_of_quartic_invariants, supersingular_lists, QuarticCover};
use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, Fe, Field, FieldCtx};
use crate::hyperelliptic::{cartier_manin, is_superspecial, weierstrass_points, HyperCurve, WPoint};
use crate::polynomials::{determinant, Poly};

/// f = G1 G2 G3 with deg G_i <= 2.
#[derive(Clone, Debug)]
pub struct QuadraticSplitting {
    pub field: FieldCtx,
    pub g: [Poly; 3],
    /// det of the rows (g_i2, g_i1, g_i0).
    pub delta: Fe,
}

#[derive(Clone, Debug)]
pub enum RichelotResult {
    NonDegenerate(HyperCurve),
    /// Codomain is a product of elliptic curves.
    Degenerate,
}

/// (a, b, c) for y^2 = x(x-1)(x-a)(x-b)(x-c); stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RosenhainTriple {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
}

impl RosenhainTriple {
    pub fn new(mut v: [Fe; 3]) -> RosenhainTriple {
        v.sort();
        RosenhainTriple { a: v[0], b: v[1], c: v[2] }
    }

    pub fn as_array(&self) -> [Fe; 3] {
        [self.a, self.b, self.c]
    }

    pub fn curve(&self, k: &FieldCtx) -> Result<HyperCurve> {
        HyperCurve::new(k, rosenhain_poly(k, self.as_array()))
    }

    /// Quartic (x-1)(x-a)(x-b)(x-c).
    pub fn elliptic_part(&self, k: &Field) -> Poly {
        Poly::from_roots(k, &[k.one(), self.a, self.b, self.c])
    }
}

pub fn rosenhain_poly(k: &Field, t: [Fe; 3]) -> Poly {
    Poly::from_roots(k, &[k.zero(), k.one(), t[0], t[1], t[2]])
}

fn all_pairings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = rest[0];
        for i in 1..rest.len() {
            let b = rest[i];
            let rem: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != b).collect();
            cur.push((a, b));
            go(&rem, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(&(0..n).collect::<Vec<_>>(), &mut vec![], &mut out);
    out
}

fn factor_for(k: &Field, pts: [WPoint; 2]) -> Poly {
    let mut g = Poly::one(k);
    for p in pts {
        if let WPoint::Affine(r) = p {
            g = g.mul(k, &Poly::linear(k, r));
        }
    }
    g
}

/// The 15 splittings of a genus-2 curve over the field of its Weierstrass points.
pub fn splittings(h: &HyperCurve) -> Result<Vec<QuadraticSplitting>> {
    if h.genus != 2 {
        return Err(Error::InvalidCurve("genus 2 required".into()));
    }
    let w = weierstrass_points(h)?;
    let l = &w.field;
    let e = embedding(&h.k, l)?;
    let lead = e.embed(h.f.lead());
    let mut out = Vec::with_capacity(15);
    for pairing in all_pairings(6) {
        let mut g: Vec<Poly> = pairing.iter().map(|&(i, j)| factor_for(l, [w.points[i], w.points[j]])).collect();
        g[0] = g[0].scale(l, lead);
        let rows: Vec<Vec<Fe>> = g.iter().map(|q| vec![q.coeff(2), q.coeff(1), q.coeff(0)]).collect();
        let delta = determinant(l, rows);
        let g: [Poly; 3] = [g[0].clone(), g[1].clone(), g[2].clone()];
        debug_assert_eq!(g[0].mul(l, &g[1]).mul(l, &g[2]), h.f.map(|a| e.embed(a)));
        out.push(QuadraticSplitting { field: l.clone(), g, delta });
    }
    Ok(out)
}

/// Codomain delta y^2 = H1 H2 H3, H_i = G_j' G_k - G_j G_k', written as
/// y^2 = delta H1 H2 H3.
pub fn richelot_step(s: &QuadraticSplitting) -> RichelotResult {
    let l = &s.field;
    if s.delta.is_zero() {
        return RichelotResult::Degenerate;
    }
    let h = |j: usize, k: usize| {
        let (gj, gk) = (&s.g[j], &s.g[k]);
        gj.derivative(l).mul(l, gk).sub(l, &gj.mul(l, &gk.derivative(l)))
    };
    let prod = h(1, 2).mul(l, &h(2, 0)).mul(l, &h(0, 1)).scale(l, s.delta);
    match HyperCurve::new(l, prod) {
        Ok(c) if c.genus == 2 => RichelotResult::NonDegenerate(c),
        _ => RichelotResult::Degenerate,
    }
}

fn proj(p: WPoint, k: &Field) -> (Fe, Fe) {
    match p {
        WPoint::Affine(x) => (x, k.one()),
        WPoint::Infinity => (k.one(), k.zero()),
    }
}

/// Moebius map sending p0 -> 0, p1 -> 1, p2 -> infinity, applied to q.
fn cross_ratio(k: &Field, p0: (Fe, Fe), p1: (Fe, Fe), p2: (Fe, Fe), q: (Fe, Fe)) -> Option<Fe> {
    // ell_i(x) vanishes at p_i
    let ell = |p: (Fe, Fe), x: (Fe, Fe)| k.sub(k.mul(p.1, x.0), k.mul(p.0, x.1));
    let num = k.mul(ell(p0, q), ell(p2, p1));
    let den = k.mul(ell(p2, q), ell(p0, p1));
    if den.is_zero() {
        None
    } else {
        Some(k.div(num, den))
    }
}

/// All Rosenhain triples of h (up to 120), over the field of its Weierstrass points.
pub fn rosenhain_forms(h: &HyperCurve) -> Result<(FieldCtx, Vec<RosenhainTriple>)> {
    let w = weierstrass_points(h)?;
    let l = w.field.clone();
    Ok((l.clone(), rosenhain_from_points(&l, &w.points)))
}

pub fn rosenhain_from_points(l: &Field, pts: &[WPoint]) -> Vec<RosenhainTriple> {
    let mut out = BTreeSet::new();
    let pr: Vec<(Fe, Fe)> = pts.iter().map(|&p| proj(p, l)).collect();
    for i in 0..6 {
        for j in 0..6 {
            for m in 0..6 {
                if i == j || j == m || i == m {
                    continue;
                }
                let rest: Vec<Fe> =
                    (0..6).filter(|&t| t != i && t != j && t != m).map(|t| cross_ratio(l, pr[i], pr[j], pr[m], pr[t]).expect("distinct points")).collect();
                out.insert(RosenhainTriple::new([rest[0], rest[1], rest[2]]));
            }
        }
    }
    let v: Vec<RosenhainTriple> = out.into_iter().collect();
    assert!(v.len() <= 120);
    v
}

/// One Rosenhain triple from the first three Weierstrass points.
fn first_triple(l: &Field, pts: &[WPoint]) -> [Fe; 3] {
    let pr: Vec<(Fe, Fe)> = pts.iter().map(|&p| proj(p, l)).collect();
    let r: Vec<Fe> = (3..6).map(|t| cross_ratio(l, pr[0], pr[1], pr[2], pr[t]).unwrap()).collect();
    [r[0], r[1], r[2]]
}

/// Canonical class key over k: smallest of the Rosenhain triples of H_t.
pub fn canonical_key(k: &Field, t: [Fe; 3]) -> RosenhainTriple {
    let mut pts = vec![WPoint::Affine(k.zero()), WPoint::Affine(k.one())];
    pts.extend(t.iter().map(|&x| WPoint::Affine(x)));
    pts.push(WPoint::Infinity);
    rosenhain_from_points(k, &pts)[0]
}

/// Superspecial genus-2 classes, keyed by canonical Rosenhain triple over F_{p^2}.
#[derive(Clone, Debug)]
pub struct Genus2Classes {
    pub field: FieldCtx,
    pub classes: BTreeMap<RosenhainTriple, HyperCurve>,
}

impl Genus2Classes {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Rosenhain triple over F_{p^2} of a curve whose Weierstrass points are
/// rational over F_{p^2} up to a Moebius change (None otherwise).
fn triple_over(k2: &FieldCtx, h: &HyperCurve) -> Result<Option<[Fe; 3]>> {
    let w = weierstrass_points(h)?;
    let t = first_triple(&w.field, &w.points);
    let e = embedding(k2, &w.field)?;
    let mut out = [Fe::ZERO; 3];
    for i in 0..3 {
        match e.project(t[i]) {
            Some(v) => out[i] = v,
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Genus-2 curves y^2 = g(x^2) with g = (x-1)(x-a)(x-b) whose two elliptic
/// quotients are supersingular; every such curve is superspecial.
fn decomposable_seeds(k2: &FieldCtx) -> Result<Vec<[Fe; 3]>> {
    let p = k2.p() as u64;
    let lists = supersingular_lists(p)?;
    let k = k2;
    let mut out = vec![];
    for a in k.elements() {
        if a.is_zero() || a == k.one() {
            continue;
        }
        for &t in &lists.t_p {
            let b = k.add(k.one(), k.mul(t, k.sub(a, k.one())));
            if b.is_zero() || b == k.one() || b == a {
                continue;
            }
            let g = Poly::from_roots(k, &[k.one(), a, b]);
            let xg = g.mul(k, &Poly::x(k));
            let j = match j_of_quartic_invariants(k, &xg) {
                Some(j) => j,
                None => j_of_quartic_cover(&QuarticCover::new(k, xg)?)?,
            };
            if !lists.contains_j(j) {
                continue;
            }
            let h = HyperCurve::new(k, g.compose_square(k))?;
            if let Some(tr) = triple_over(k, &h)? {
                out.push(tr);
            }
        }
    }
    Ok(out)
}

/// Breadth-first search over superspecial genus-2 curves along Richelot isogenies.
pub fn enumerate_ssp_genus2(p: u64) -> Result<Genus2Classes> {
    let k2 = make_field(p, 1)?;
    let mut classes: BTreeMap<RosenhainTriple, HyperCurve> = BTreeMap::new();
    let mut queue: VecDeque<RosenhainTriple> = VecDeque::new();
    let visit = |t: [Fe; 3], classes: &mut BTreeMap<RosenhainTriple, HyperCurve>, queue: &mut VecDeque<RosenhainTriple>| -> Result<()> {
        let key = canonical_key(&k2, t);
        if classes.contains_key(&key) {
            return Ok(());
        }
        let h = key.curve(&k2)?;
        if !is_superspecial(&h) {
            return Ok(());
        }
        classes.insert(key, h);
        queue.push_back(key);
        Ok(())
    };
    for seed in decomposable_seeds(&k2)? {
        visit(seed, &mut classes, &mut queue)?;
        while let Some(node) = queue.pop_front() {
            let h = classes[&node].clone();
            for s in splittings(&h)? {
                let RichelotResult::NonDegenerate(c) = richelot_step(&s) else { continue };
                // codomain model over F_{p^2}: same field as h since all roots are rational
                let c = if c.k.level() == k2.level() { c } else { continue };
                if !cartier_manin(&c).is_zero() {
                    continue;
                }
                if let Some(t) = triple_over(&k2, &c)? {
                    visit(t, &mut classes, &mut queue)?;
                }
            }
        }
    }
    Ok(Genus2Classes { field: k2, classes })
}

/// Exhaustive oracle: every Rosenhain triple over F_{p^2} with vanishing
/// Cartier-Manin matrix, grouped by canonical key.
pub fn brute_force_ssp_genus2(p: u64) -> Result<Genus2Classes> {
    let k = make_field(p, 1)?;
    let m = ((p - 1) / 2) as usize;
    let pu = p as usize;
    let binom: Vec<Fe> = {
        let mut v = vec![k.one()];
        for i in 1..=m {
            let prev = *v.last().unwrap();
            v.push(k.div(k.mul_int(prev, (m - i + 1) as i64), k.from_u64(i as u64)));
        }
        v
    };
    let idx = [pu - 1, pu - 2, 2 * pu - 1, 2 * pu - 2];
    let elems: Vec<Fe> = k.elements().filter(|&x| !x.is_zero() && x != k.one()).collect();
    let mut classes = BTreeMap::new();
    for (ia, &a) in elems.iter().enumerate() {
        for (ib, &b) in elems.iter().enumerate().skip(ia + 1) {
            // A = (x(x-1)(x-a)(x-b))^m; the entries are then polynomials in c
            let big_a = Poly::from_roots(&k, &[k.zero(), k.one(), a, b]).pow(&k, m as u64);
            for &c in &elems[ib + 1..] {
                let mc = k.neg(c);
                let mut pw = vec![k.one(); m + 1];
                for i in 1..=m {
                    pw[i] = k.mul(pw[i - 1], mc);
                }
                let zero = idx.iter().all(|&n| {
                    let mut s = k.zero();
                    // coefficient of x^n in A * (x - c)^m
                    for t in 0..=m.min(n) {
                        let coef = k.mul(binom[t], pw[m - t]);
                        s = k.add(s, k.mul(big_a.coeff(n - t), coef));
                    }
                    s.is_zero()
                });
                if zero {
                    let key = canonical_key(&k, [a, b, c]);
                    if let std::collections::btree_map::Entry::Vacant(e) = classes.entry(key) {
                        e.insert(key.curve(&k)?);
                    }
                }
            }
        }
    }
    Ok(Genus2Classes { field: k, classes })
}

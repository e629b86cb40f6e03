//! Hyperelliptic curves y^2 = f(x): Weierstrass points, Cartier-Manin matrix,
//! extra involutions, decomposed Richelot codomains and isomorphism testing.

use std::collections::BTreeSet;

use crate::elliptic::{count_double_cover, QuarticCover};
use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, sqrt_any, Fe, Field, FieldCtx};
use crate::polynomials::{all_roots, is_squarefree, Poly};

#[derive(Clone, Debug)]
pub struct HyperCurve {
    pub k: FieldCtx,
    pub f: Poly,
    pub genus: usize,
}

impl HyperCurve {
    pub fn new(k: &FieldCtx, f: Poly) -> Result<HyperCurve> {
        let d = f.deg();
        if d < 3 {
            return Err(Error::InvalidCurve(format!("degree {d} is too small")));
        }
        if !is_squarefree(k, &f) {
            return Err(Error::InvalidCurve("f is not square-free".into()));
        }
        let genus = (d as usize).div_ceil(2) - 1;
        Ok(HyperCurve { k: k.clone(), f, genus })
    }

    /// Text form "p; level; c0,c1,...".
    pub fn encode(&self) -> String {
        format!("{}; {}; {}", self.k.p(), self.k.level(), self.f.encode(&self.k))
    }

    pub fn parse(s: &str) -> Result<HyperCurve> {
        let parts: Vec<&str> = s.trim().split(';').map(|t| t.trim()).collect();
        if parts.len() != 3 {
            return Err(Error::Parse("expected 'p; level; coefficients'".into()));
        }
        let p: u64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad prime '{}'", parts[0])))?;
        let m: usize = parts[1].parse().map_err(|_| Error::Parse(format!("bad level '{}'", parts[1])))?;
        let k = make_field(p, m)?;
        let f = Poly::parse(&k, parts[2])?;
        HyperCurve::new(&k, f)
    }

    /// Same curve over a larger field.
    pub fn lift(&self, big: &FieldCtx) -> Result<HyperCurve> {
        let e = embedding(&self.k, big)?;
        Ok(HyperCurve { k: big.clone(), f: self.f.map(|a| e.embed(a)), genus: self.genus })
    }
}

/// A point of P^1 carrying a Weierstrass point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WPoint {
    Affine(Fe),
    Infinity,
}

#[derive(Clone, Debug)]
pub struct WeierstrassData {
    pub field: FieldCtx,
    pub points: Vec<WPoint>,
}

pub fn weierstrass_points(c: &HyperCurve) -> Result<WeierstrassData> {
    let (field, roots) = all_roots(&c.k, &c.f)?;
    let mut points: Vec<WPoint> = roots.into_iter().map(WPoint::Affine).collect();
    if c.f.deg() % 2 == 1 {
        points.push(WPoint::Infinity);
    }
    debug_assert_eq!(points.len(), 2 * c.genus + 2);
    Ok(WeierstrassData { field, points })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierManin {
    pub rows: Vec<Vec<Fe>>,
}

impl CartierManin {
    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|a| a.is_zero())
    }
}

/// Entry (i, j) is the coefficient of x^{ip - j} in f^{(p-1)/2}, 1 <= i, j <= g.
pub fn cartier_manin(c: &HyperCurve) -> CartierManin {
    let k = &c.k;
    let p = k.p() as usize;
    let h = c.f.pow(k, ((p - 1) / 2) as u64);
    let g = c.genus;
    let rows = (1..=g).map(|i| (1..=g).map(|j| h.coeff(i * p - j)).collect()).collect();
    CartierManin { rows }
}

pub fn is_superspecial(c: &HyperCurve) -> bool {
    cartier_manin(c).is_zero()
}

/// For y^2 = f(x^2): the quotients y^2 = f(x) and y^2 = x f(x).
pub fn quotient_pair(c: &HyperCurve) -> Result<(HyperCurve, HyperCurve)> {
    let k = &c.k;
    let cs = c.f.coeffs();
    if cs.iter().enumerate().any(|(i, a)| i % 2 == 1 && !a.is_zero()) {
        return Err(Error::NotSymmetric);
    }
    if c.f.coeff(0).is_zero() {
        return Err(Error::RamifiedAtZero);
    }
    let f = Poly::from_vec(cs.iter().step_by(2).copied().collect());
    let xf = f.mul(k, &Poly::x(k));
    Ok((HyperCurve::new(k, f)?, HyperCurve::new(k, xf)?))
}

/// y^2 = lambda^2 (cx+d)^{2g+2} f((ax+b)/(cx+d)) for m = [a, b, c, d].
pub fn transform(c: &HyperCurve, m: [Fe; 4], lambda: Fe) -> Result<HyperCurve> {
    let k = &c.k;
    let g = transform_poly(k, &c.f, 2 * c.genus + 2, m).scale(k, k.sqr(lambda));
    HyperCurve::new(k, g)
}

pub(crate) fn transform_poly(k: &Field, f: &Poly, n: usize, m: [Fe; 4]) -> Poly {
    let num = Poly::from_vec(vec![m[1], m[0]]);
    let den = Poly::from_vec(vec![m[3], m[2]]);
    let mut t = Poly::zero();
    for i in 0..=n {
        let a = f.coeff(i);
        if a.is_zero() {
            continue;
        }
        let term = num.pow(k, i as u64).mul(k, &den.pow(k, (n - i) as u64));
        t = t.add(k, &term.scale(k, a));
    }
    t
}

/// An extra involution brought to the form x -> -x.
#[derive(Clone, Debug)]
pub struct InvolutionCandidate {
    pub field: FieldCtx,
    /// Trace-zero representative [[alpha, beta], [gamma, -alpha]] of the involution.
    pub alpha: Fe,
    pub beta: Fe,
    pub gamma: Fe,
    /// lambda^2 = alpha^2 + beta gamma.
    pub lambda: Fe,
    /// Normalizing matrix [[alpha + lambda, beta], [-alpha + lambda, -beta]]
    /// (another matrix with the same fixed-point images when beta = 0).
    pub q: [Fe; 4],
    /// Images of the Weierstrass x-coordinates; closed under negation.
    pub xs: Vec<Fe>,
    /// Induced permutation of the Weierstrass points.
    pub perm: Vec<usize>,
}

/// All distinct images x'_i = Q(x_i) for a trace-zero involution matrix, in the
/// field where lambda lives. None when a denominator vanishes or the image is
/// not closed under negation.
fn normalize(k: &FieldCtx, m: [Fe; 3], roots: &[Fe], sign: bool) -> Result<Option<InvolutionCandidate>> {
    let [alpha, beta, gamma] = m;
    let rad = k.add(k.sqr(alpha), k.mul(beta, gamma));
    if rad.is_zero() {
        return Ok(None);
    }
    let (l, sq) = sqrt_any(k, rad)?;
    let e = embedding(k, &l)?;
    let (a, b, g) = (e.embed(alpha), e.embed(beta), e.embed(gamma));
    let lam = if sign { sq[0] } else { sq[1] };
    let q = if !b.is_zero() {
        [l.add(a, lam), b, l.add(l.neg(a), lam), l.neg(b)]
    } else if !g.is_zero() {
        // the matrix above is singular when beta = 0; send the fixed points
        // (alpha - lambda)/gamma and (alpha + lambda)/gamma to 0 and infinity
        [g, l.sub(lam, a), g, l.neg(l.add(a, lam))]
    } else {
        [l.one(), l.zero(), l.zero(), l.one()]
    };
    let mut xs = Vec::with_capacity(roots.len());
    for &r in roots {
        let x = e.embed(r);
        let den = l.add(l.mul(q[2], x), q[3]);
        if den.is_zero() {
            return Ok(None);
        }
        xs.push(l.div(l.add(l.mul(q[0], x), q[1]), den));
    }
    let mut perm = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let nx = l.neg(x);
        match xs.iter().position(|&y| y == nx) {
            Some(j) if j != i => perm.push(j),
            _ => return Ok(None),
        }
    }
    Ok(Some(InvolutionCandidate { field: l, alpha: a, beta: b, gamma: g, lambda: lam, q, xs, perm }))
}

/// Model with every Weierstrass point affine: odd degree curves are moved by
/// x -> c + 1/x with c the smallest element of F_p that is not a root.
pub fn affine_model(c: &HyperCurve) -> HyperCurve {
    if c.f.deg() as usize == 2 * c.genus + 2 {
        return c.clone();
    }
    let k = &c.k;
    let shift = (0..k.p() as u64).map(|v| k.from_u64(v)).find(|&v| !c.f.eval(k, v).is_zero()).expect("a non-root exists in F_p");
    // x = (shift * u + 1) / u
    let g = transform_poly(k, &c.f, 2 * c.genus + 2, [shift, k.one(), k.one(), k.zero()]);
    HyperCurve::new(k, g).expect("Moebius image stays square-free")
}

/// Extra involution candidates of a curve with all Weierstrass points affine,
/// given its roots. Returns the candidates before and after deduplication.
pub fn algorithm1(k: &FieldCtx, roots: &[Fe]) -> Result<(usize, Vec<InvolutionCandidate>)> {
    let n = roots.len();
    let x = |i: usize| roots[i - 1];
    let mut raw = 0;
    let mut out: Vec<InvolutionCandidate> = vec![];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t1 in 2..=n {
        let rest: Vec<usize> = (2..=n).filter(|&i| i != t1).collect();
        let s = rest[0];
        for &t2 in &rest[1..] {
            let alpha = k.sub(k.mul(x(s), x(t2)), k.mul(x(1), x(t1)));
            let sum_a = k.add(x(1), x(t1));
            let sum_b = k.add(x(s), x(t2));
            let beta = k.sub(k.mul(sum_b, k.mul(x(1), x(t1))), k.mul(sum_a, k.mul(x(s), x(t2))));
            let gamma = k.sub(sum_b, sum_a);
            for sign in [true, false] {
                if let Some(cand) = normalize(k, [alpha, beta, gamma], roots, sign)? {
                    raw += 1;
                    if seen.insert(cand.perm.clone()) {
                        out.push(cand);
                    }
                }
            }
        }
    }
    Ok((raw, out))
}

/// The affine model used by Algorithm 1, its roots and the accepted candidates.
pub fn extra_involutions(c: &HyperCurve) -> Result<(HyperCurve, Vec<InvolutionCandidate>)> {
    let a = affine_model(c);
    let w = weierstrass_points(&a)?;
    let roots: Vec<Fe> = w
        .points
        .iter()
        .map(|p| match p {
            WPoint::Affine(x) => *x,
            WPoint::Infinity => unreachable!(),
        })
        .collect();
    let (raw, cands) = algorithm1(&w.field, &roots)?;
    let g = c.genus;
    assert!(raw <= 2 * (2 * g + 1) * (2 * g - 1), "candidate bound exceeded");
    Ok((a, cands))
}

/// f_1 = prod over negation pairs of (x - x'^2).
fn quotient_poly(l: &Field, xs: &[Fe]) -> Poly {
    let mut used = vec![false; xs.len()];
    let mut f = Poly::one(l);
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by_key(|&i| xs[i]);
    for &i in &order {
        if used[i] {
            continue;
        }
        let j = (0..xs.len()).find(|&j| !used[j] && j != i && xs[j] == l.neg(xs[i])).expect("negation pair");
        used[i] = true;
        used[j] = true;
        f = f.mul(l, &Poly::linear(l, l.sqr(xs[i])));
    }
    f
}

/// Algorithm 2: (y^2 = f_1(x), y^2 = x f_1(x)) for each extra involution.
pub fn decomposed_richelot(c: &HyperCurve) -> Result<Vec<(HyperCurve, HyperCurve)>> {
    let (_, cands) = extra_involutions(c)?;
    if cands.is_empty() {
        return Err(Error::NoExtraInvolution);
    }
    let mut out = vec![];
    for cand in &cands {
        let l = &cand.field;
        let f1 = quotient_poly(l, &cand.xs);
        let f2 = f1.mul(l, &Poly::x(l));
        out.push((HyperCurve::new(l, f1)?, HyperCurve::new(l, f2)?));
    }
    Ok(out)
}

fn anticommute(k: &Field, a: &InvolutionCandidate, b: &InvolutionCandidate) -> bool {
    let t = k.add(k.mul_int(k.mul(a.alpha, b.alpha), 2), k.add(k.mul(a.beta, b.gamma), k.mul(a.gamma, b.beta)));
    t.is_zero()
}

/// Triples of elliptic quotients for commuting pairs of extra involutions.
pub fn completely_decomposed_g3(c: &HyperCurve) -> Result<Vec<[QuarticCover; 3]>> {
    if c.genus != 3 {
        return Err(Error::InvalidCurve("genus 3 required".into()));
    }
    let (a, cands) = extra_involutions(c)?;
    let (base, roots) = all_roots(&a.k, &a.f)?;
    let mut out = vec![];
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let (ci, cj) = (&cands[i], &cands[j]);
            let lvl = ci.field.level().max(cj.field.level());
            let big = make_field(base.p() as u64, lvl)?;
            let ei = embedding(&ci.field, &big)?;
            let ej = embedding(&cj.field, &big)?;
            let lift = |e: &crate::field_tower::Embedding, c: &InvolutionCandidate| InvolutionCandidate {
                field: big.clone(),
                alpha: e.embed(c.alpha),
                beta: e.embed(c.beta),
                gamma: e.embed(c.gamma),
                lambda: e.embed(c.lambda),
                q: c.q.map(|v| e.embed(v)),
                xs: c.xs.iter().map(|&v| e.embed(v)).collect(),
                perm: c.perm.clone(),
            };
            let (ai, bj) = (lift(&ei, ci), lift(&ej, cj));
            if !anticommute(&big, &ai, &bj) {
                continue;
            }
            // AB for trace-zero A, B anticommuting is again trace zero
            let n11 = big.add(big.mul(ai.alpha, bj.alpha), big.mul(ai.beta, bj.gamma));
            let n12 = big.sub(big.mul(ai.alpha, bj.beta), big.mul(ai.beta, bj.alpha));
            let n21 = big.sub(big.mul(ai.gamma, bj.alpha), big.mul(ai.alpha, bj.gamma));
            let eb = embedding(&base, &big)?;
            let r_big: Vec<Fe> = roots.iter().map(|&r| eb.embed(r)).collect();
            let Some(ab) = normalize(&big, [n11, n12, n21], &r_big, true)? else {
                continue;
            };
            let quartic = |cand: &InvolutionCandidate| -> Result<QuarticCover> { QuarticCover::new(&cand.field, quotient_poly(&cand.field, &cand.xs)) };
            out.push([quartic(ci)?, quartic(cj)?, quartic(&ab)?]);
        }
    }
    if out.is_empty() {
        return Err(Error::NoCommutingPair);
    }
    Ok(out)
}

/// (x, y) -> Lemma-style pair: f_2(x) = lambda_sq (cx+d)^{2g+2} f_1((ax+b)/(cx+d)).
#[derive(Clone, Debug)]
pub struct IsomWitness {
    pub field: FieldCtx,
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
    pub lambda_sq: Fe,
}

fn proj(p: WPoint, k: &Field) -> (Fe, Fe) {
    match p {
        WPoint::Affine(x) => (x, k.one()),
        WPoint::Infinity => (k.one(), k.zero()),
    }
}

/// Matrix sending p1, p2, p3 to 0, infinity, 1.
fn to_standard(k: &Field, p: [(Fe, Fe); 3]) -> [Fe; 4] {
    let ell = |i: usize, q: (Fe, Fe)| k.sub(k.mul(p[i].1, q.0), k.mul(p[i].0, q.1));
    let s1 = ell(1, p[2]);
    let s2 = ell(0, p[2]);
    [k.mul(s1, p[0].1), k.neg(k.mul(s1, p[0].0)), k.mul(s2, p[1].1), k.neg(k.mul(s2, p[1].0))]
}

fn mat_mul(k: &Field, a: [Fe; 4], b: [Fe; 4]) -> [Fe; 4] {
    [
        k.add(k.mul(a[0], b[0]), k.mul(a[1], b[2])),
        k.add(k.mul(a[0], b[1]), k.mul(a[1], b[3])),
        k.add(k.mul(a[2], b[0]), k.mul(a[3], b[2])),
        k.add(k.mul(a[2], b[1]), k.mul(a[3], b[3])),
    ]
}

fn adjugate(k: &Field, a: [Fe; 4]) -> [Fe; 4] {
    [a[3], k.neg(a[1]), k.neg(a[2]), a[0]]
}

fn normalize_point(k: &Field, p: (Fe, Fe)) -> Option<WPoint> {
    if p.1.is_zero() {
        if p.0.is_zero() {
            None
        } else {
            Some(WPoint::Infinity)
        }
    } else {
        Some(WPoint::Affine(k.div(p.0, p.1)))
    }
}

/// Exact isomorphism test through Moebius maps between Weierstrass points.
pub fn isom_exact(c1: &HyperCurve, c2: &HyperCurve) -> Result<Option<IsomWitness>> {
    if c1.genus != c2.genus || c1.k.p() != c2.k.p() {
        return Ok(None);
    }
    let w1 = weierstrass_points(c1)?;
    let w2 = weierstrass_points(c2)?;
    let lvl = common_level(&[w1.field.level(), w2.field.level(), c1.k.level(), c2.k.level()]);
    let big = make_field(c1.k.p() as u64, lvl)?;
    let lift_pts = |w: &WeierstrassData| -> Result<Vec<WPoint>> {
        let e = embedding(&w.field, &big)?;
        Ok(w.points
            .iter()
            .map(|p| match p {
                WPoint::Affine(x) => WPoint::Affine(e.embed(*x)),
                WPoint::Infinity => WPoint::Infinity,
            })
            .collect())
    };
    let p1 = lift_pts(&w1)?;
    let p2 = lift_pts(&w2)?;
    let target: BTreeSet<WPoint> = p2.iter().copied().collect();
    let f1 = c1.lift(&big)?.f;
    let f2 = c2.lift(&big)?.f;
    let n = 2 * c1.genus + 2;
    let k = &big;
    let src = to_standard(k, [proj(p1[0], k), proj(p1[1], k), proj(p1[2], k)]);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i == j || j == l || i == l {
                    continue;
                }
                let dst = to_standard(k, [proj(p2[i], k), proj(p2[j], k), proj(p2[l], k)]);
                let m = mat_mul(k, adjugate(k, dst), src);
                let ok = p1.iter().all(|&pt| {
                    let (x, z) = proj(pt, k);
                    let img = (k.add(k.mul(m[0], x), k.mul(m[1], z)), k.add(k.mul(m[2], x), k.mul(m[3], z)));
                    normalize_point(k, img).is_some_and(|q| target.contains(&q))
                });
                if !ok {
                    continue;
                }
                // f_2 is proportional to f_1 pulled back along m^{-1}
                let inv = adjugate(k, m);
                let g = transform_poly(k, &f1, n, inv);
                let idx = (0..=n).find(|&t| !g.coeff(t).is_zero()).expect("nonzero");
                let kappa = k.div(f2.coeff(idx), g.coeff(idx));
                if g.scale(k, kappa) != f2 {
                    continue;
                }
                return Ok(Some(IsomWitness { field: big.clone(), a: inv[0], b: inv[1], c: inv[2], d: inv[3], lambda_sq: kappa }));
            }
        }
    }
    Ok(None)
}

/// Smallest level whose degree is divisible by the degrees of all given levels.
pub fn common_level(levels: &[usize]) -> usize {
    let deg = |l: usize| if l == 0 { 1 } else { 2 * l };
    let mut n = 1;
    for &l in levels {
        let d = deg(l);
        let g = gcd(n, d);
        n = n / g * d;
    }
    if n == 1 {
        0
    } else {
        let g = gcd(n, 2);
        (n / g * 2) / 2
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Points on the smooth model over the level-m field.
pub fn count_points_hyp(c: &HyperCurve, m: usize) -> Result<u64> {
    let big = make_field(c.k.p() as u64, m)?;
    let lifted = c.lift(&big)?;
    Ok(count_double_cover(&big, &lifted.f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{is_supersingular, j_of_quartic_cover};
    use crate::invariants::{shioda, weighted_equal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(k: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(k, c)
    }

    fn x8m1(k: &Field) -> Poly {
        let mut c = vec![0i64; 9];
        c[0] = -1;
        c[8] = 1;
        poly(k, &c)
    }

    #[test]
    fn weierstrass_examples() {
        let k = make_field(17, 0).unwrap();
        let c = HyperCurve::new(&k, x8m1(&k)).unwrap();
        let w = weierstrass_points(&c).unwrap();
        assert_eq!(w.points.len(), 8);
        // 8 divides 17 - 1, so the roots of unity are already in F_17
        assert_eq!(w.field.degree(), 1);
        let k19 = make_field(19, 0).unwrap();
        let w = weierstrass_points(&HyperCurve::new(&k19, x8m1(&k19)).unwrap()).unwrap();
        assert_eq!(w.field.degree(), 2);
        let k7 = make_field(7, 0).unwrap();
        let c = HyperCurve::new(&k7, poly(&k7, &[0, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.genus, 2);
        let w = weierstrass_points(&c).unwrap();
        assert_eq!(w.points.len(), 6);
        assert_eq!(*w.points.last().unwrap(), WPoint::Infinity);
    }

    #[test]
    fn cartier_manin_examples() {
        let k3 = make_field(3, 0).unwrap();
        let c = HyperCurve::new(&k3, x8m1(&k3)).unwrap();
        let cm = cartier_manin(&c);
        let (o, m1, z) = (k3.one(), k3.from_i64(-1), k3.zero());
        assert_eq!(cm.rows, vec![vec![z, z, m1], vec![z, z, z], vec![o, z, z]]);
        assert!(!is_superspecial(&c));
        let e = HyperCurve::new(&k3, poly(&k3, &[0, 1, 0, 1])).unwrap();
        assert!(is_superspecial(&e));
        for p in [7u64, 11, 13] {
            let k = make_field(p, 0).unwrap();
            for t in 2..p {
                let t = k.from_u64(t);
                let e = HyperCurve::new(&k, Poly::from_roots(&k, &[k.zero(), k.one(), t])).unwrap();
                assert_eq!(is_superspecial(&e), is_supersingular(&k, t).unwrap());
            }
        }
    }

    #[test]
    fn quotient_pair_examples() {
        let k = make_field(17, 0).unwrap();
        let c = HyperCurve::new(&k, x8m1(&k)).unwrap();
        let (a, b) = quotient_pair(&c).unwrap();
        assert_eq!(a.f, poly(&k, &[-1, 0, 0, 0, 1]));
        assert_eq!(b.f, poly(&k, &[0, -1, 0, 0, 0, 1]));
        assert_eq!((a.genus, b.genus), (1, 2));
        let odd = HyperCurve::new(&k, poly(&k, &[1, 1, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(quotient_pair(&odd).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn algorithm1_on_symmetric_and_generic() {
        let k = make_field(101, 0).unwrap();
        let f = Poly::from_roots(&k, &[-1, 1, -2, 2, -3, 3, -4, 4].map(|v| k.from_i64(v)));
        let c = HyperCurve::new(&k, f).unwrap();
        let (_, cands) = extra_involutions(&c).unwrap();
        assert!(!cands.is_empty());
        for cand in &cands {
            let l = &cand.field;
            let set: BTreeSet<Fe> = cand.xs.iter().copied().collect();
            assert!(cand.xs.iter().all(|&x| set.contains(&l.neg(x))));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut empty = 0;
        for _ in 0..20 {
            let mut roots = BTreeSet::new();
            while roots.len() < 8 {
                roots.insert(rng.gen_range(0..101u64));
            }
            let rs: Vec<Fe> = roots.iter().map(|&v| k.from_u64(v)).collect();
            let (_, cands) = algorithm1(&k, &rs).unwrap();
            // brute force: an involution of P^1 permuting the roots fixed-point
            // freely is determined by the images of two of them
            let brute = brute_involutions(&k, &rs);
            assert_eq!(cands.len(), brute);
            if cands.is_empty() {
                empty += 1;
            }
        }
        assert!(empty >= 15);
    }

    fn brute_involutions(k: &Field, rs: &[Fe]) -> usize {
        let set: BTreeSet<Fe> = rs.iter().copied().collect();
        let mut perms = BTreeSet::new();
        for t1 in 1..rs.len() {
            for s in 1..rs.len() {
                for t2 in 1..rs.len() {
                    if [t1, s, t2].iter().collect::<BTreeSet<_>>().len() < 3 {
                        continue;
                    }
                    let (a, b, c, d) = (rs[0], rs[t1], rs[s], rs[t2]);
                    let al = k.sub(k.mul(c, d), k.mul(a, b));
                    let be = k.sub(k.mul(k.add(c, d), k.mul(a, b)), k.mul(k.add(a, b), k.mul(c, d)));
                    let ga = k.sub(k.add(c, d), k.add(a, b));
                    let mut perm = vec![];
                    for &x in rs {
                        let den = k.sub(k.mul(ga, x), al);
                        if den.is_zero() {
                            break;
                        }
                        let y = k.div(k.add(k.mul(al, x), be), den);
                        if !set.contains(&y) || y == x {
                            break;
                        }
                        perm.push(y);
                    }
                    if perm.len() == rs.len() && !k.add(k.sqr(al), k.mul(be, ga)).is_zero() {
                        perms.insert(perm);
                    }
                }
            }
        }
        perms.len()
    }

    #[test]
    fn richelot_of_x8_minus_1() {
        let k = make_field(17, 0).unwrap();
        let c = HyperCurve::new(&k, x8m1(&k)).unwrap();
        let pairs = decomposed_richelot(&c).unwrap();
        let (e0, h0) = quotient_pair(&c).unwrap();
        let je = j_of_quartic_cover(&QuarticCover::new(&k, e0.f.clone()).unwrap()).unwrap();
        let ih = crate::invariants::igusa(&k, &h0.f).unwrap();
        let found = pairs.iter().any(|(e, h)| {
            let emb = embedding(&k, &e.k).unwrap();
            let j = j_of_quartic_cover(&QuarticCover::new(&e.k, e.f.clone()).unwrap()).unwrap();
            let ih2 = crate::invariants::igusa(&h.k, &h.f).unwrap();
            let big = ih.lift(&h.k).unwrap();
            j == emb.embed(je) && weighted_equal(&big, &ih2).unwrap()
        });
        assert!(found);
    }

    #[test]
    fn richelot_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for p in [11u64, 13] {
            let k = make_field(p, 0).unwrap();
            let mut done = 0;
            while done < 50 {
                let f = Poly::from_vec((0..5).map(|_| k.random(&mut rng)).collect());
                if f.deg() != 4 || f.coeff(0).is_zero() {
                    continue;
                }
                let g = f.compose_square(&k);
                if !is_squarefree(&k, &g) {
                    continue;
                }
                let c = HyperCurve::new(&k, g).unwrap();
                let Ok(w) = weierstrass_points(&c) else { continue };
                if w.field.level() > 4 {
                    continue;
                }
                let s = shioda(&k, &c.f).unwrap();
                let pairs = decomposed_richelot(&c).unwrap();
                let mut hit = false;
                for (e, _) in &pairs {
                    let s2 = shioda(&e.k, &e.f.compose_square(&e.k)).unwrap();
                    let sb = s.lift(&e.k).unwrap();
                    assert!(weighted_equal(&sb, &s2).unwrap());
                    hit = true;
                }
                assert!(hit);
                done += 1;
            }
        }
    }

    #[test]
    fn completely_decomposed_x8_minus_1() {
        let k = make_field(13, 0).unwrap();
        let c = HyperCurve::new(&k, x8m1(&k)).unwrap();
        let triples = completely_decomposed_g3(&c).unwrap();
        assert!(!triples.is_empty());
        // a generic symmetric octic has a single extra involution
        let f = Poly::from_roots(&k, &[1, 2, 3, 5].map(|v| k.from_u64(v))).compose_square(&k);
        let c = HyperCurve::new(&k, f).unwrap();
        let (_, cands) = extra_involutions(&c).unwrap();
        if cands.len() == 1 {
            assert_eq!(completely_decomposed_g3(&c).unwrap_err(), Error::NoCommutingPair);
        }
    }

    #[test]
    fn prop_eigenvalues_of_product() {
        let k = make_field(13, 0).unwrap();
        let (o, z) = (k.one(), k.zero());
        // A = diag(1, -1), B = antidiag(1, 1): (AB)^2 = -I
        let a = [o, z, z, k.neg(o)];
        let b = [z, o, o, z];
        let ab = mat_mul(&k, a, b);
        let sq = mat_mul(&k, ab, ab);
        assert_eq!(sq, [k.neg(o), z, z, k.neg(o)]);
    }

    #[test]
    fn isomorphism_exact_vs_invariants() {
        let k = make_field(13, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pos = 0;
        let mut neg = 0;
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| {
                let mut s = BTreeSet::new();
                while s.len() < 8 {
                    s.insert(rng.gen_range(0..13u64));
                }
                Poly::from_roots(&k, &s.iter().map(|&v| k.from_u64(v)).collect::<Vec<_>>())
            };
            let c1 = HyperCurve::new(&k, pick(&mut rng)).unwrap();
            let c2 = if rng.gen_bool(0.5) {
                let m = loop {
                    let m = [k.random(&mut rng), k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
                    if !k.sub(k.mul(m[0], m[3]), k.mul(m[1], m[2])).is_zero() {
                        break m;
                    }
                };
                transform(&c1, m, k.random_nonzero(&mut rng)).unwrap()
            } else {
                HyperCurve::new(&k, pick(&mut rng)).unwrap()
            };
            let w = isom_exact(&c1, &c2).unwrap();
            let inv = weighted_equal(&shioda(&k, &c1.f).unwrap(), &shioda(&k, &c2.f).unwrap()).unwrap();
            assert_eq!(w.is_some(), inv);
            if let Some(w) = w {
                pos += 1;
                let big = &w.field;
                let f1 = c1.lift(big).unwrap().f;
                let f2 = c2.lift(big).unwrap().f;
                assert_eq!(transform_poly(big, &f1, 8, [w.a, w.b, w.c, w.d]).scale(big, w.lambda_sq), f2);
            } else {
                neg += 1;
            }
        }
        assert!(pos > 50 && neg > 20);
    }

    #[test]
    fn point_counts_respect_weil() {
        let k = make_field(7, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let f = Poly::from_vec((0..9).map(|_| k.random(&mut rng)).collect());
            let Ok(c) = HyperCurve::new(&k, f) else { continue };
            for m in [0usize, 1] {
                let q = if m == 0 { 7i64 } else { 49 };
                let n = count_points_hyp(&c, m).unwrap() as i64;
                let g = c.genus as i64;
                assert!((n - q - 1).pow(2) <= 4 * g * g * q);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let k = make_field(13, 1).unwrap();
        let c = HyperCurve::new(&k, Poly::from_vec(vec![k.gen(), k.one(), k.zero(), k.one(), k.one()])).unwrap();
        let back = HyperCurve::parse(&c.encode()).unwrap();
        assert_eq!(back.f, c.f);
    }
}

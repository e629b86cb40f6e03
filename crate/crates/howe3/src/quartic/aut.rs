//! Automorphisms and isomorphisms of nonsingular plane quartics.
//!
//! Every involution of a nonsingular quartic is a homology: it fixes a
//! point P (the centre) and a line L (the axis). A point P with F(P) != 0 is
//! a centre exactly when the cubic covariant
//!
//!   1728 F(P)^2 D_P F - 72 F(P) L D_P^2 F + L^3,   L = D_P^3 F,
//!
//! vanishes identically, and then L is the axis. Centres of two commuting
//! involutions lie on each other's axes, so a Klein four-group is a triangle
//! of centres; in the frame of that triangle the form has only even
//! exponents. Any isomorphism carries the triangle of one four-group onto
//! the triangle of another, so it becomes a monomial matrix between the two
//! even forms, and those are counted in closed form.

use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, make_field_bounded, Fe, Field, FieldCtx, DEFAULT_MAX_LEVEL};
use crate::hyperelliptic::common_level;

use super::solver::{solve_at, MPoly, Step, ZeroDimSystem};
use super::{CianiQuartic, GeneralQuartic};

pub type Matrix3 = [[Fe; 3]; 3];

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Coefficients of an even form: `pure[i]` of x_i^4, `mixed[l]` of
/// x_a^2 x_b^2 with {a, b, l} = {0, 1, 2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvenForm {
    pub pure: [Fe; 3],
    pub mixed: [Fe; 3],
}

impl EvenForm {
    fn from_quartic(g: &GeneralQuartic) -> Option<EvenForm> {
        let even = super::MONOMIALS.iter().zip(&g.c).all(|(e, c)| c.is_zero() || e.iter().all(|x| x % 2 == 0));
        even.then(|| EvenForm {
            pure: [g.coeff([4, 0, 0]), g.coeff([0, 4, 0]), g.coeff([0, 0, 4])],
            mixed: [g.coeff([0, 2, 2]), g.coeff([2, 0, 2]), g.coeff([2, 2, 0])],
        })
    }

    /// Coefficients of v -> F(v_{pi(0)}, v_{pi(1)}, v_{pi(2)}).
    fn permute(&self, pi: &[usize; 3]) -> EvenForm {
        let mut out = *self;
        for a in 0..3 {
            out.pure[pi[a]] = self.pure[a];
            out.mixed[pi[a]] = self.mixed[a];
        }
        out
    }

    /// Invariants under diagonal scaling and overall scale.
    pub fn invariants(&self, k: &Field) -> [Fe; 4] {
        let [a1, a2, a6] = self.pure;
        let [a5, a4, a3] = self.mixed;
        let m = |x: Fe, y: Fe| k.mul(x, y);
        [k.div(k.sqr(a3), m(a1, a2)), k.div(k.sqr(a4), m(a1, a6)), k.div(k.sqr(a5), m(a2, a6)), k.div(m(m(a3, a4), a5), m(m(a1, a2), a6))]
    }
}

/// Involutions of a quartic with the frames of its Klein four-subgroups.
#[derive(Clone, Debug)]
pub struct InvolutionData {
    pub field: FieldCtx,
    pub form: GeneralQuartic,
    /// Centres, normalized with last nonzero coordinate 1, sorted.
    pub centres: Vec<[Fe; 3]>,
    pub axes: Vec<[Fe; 3]>,
    /// Index triples of mutually commuting involutions.
    pub v4s: Vec<[usize; 3]>,
    /// Matrix with the three centres of each four-group as columns.
    pub frames: Vec<Matrix3>,
    pub even_forms: Vec<EvenForm>,
}

struct CentreSystem {
    k: FieldCtx,
    equations: Vec<MPoly>,
    axis: [MPoly; 3],
    value: MPoly,
}

fn centre_system(f: &GeneralQuartic) -> Result<CentreSystem> {
    let k = &f.k;
    if k.p() < 5 {
        return Err(Error::SmallCharacteristic(k.p()));
    }
    // variables 0..3 hold P, 3..6 hold v
    let fv = MPoly::from_terms(k, 6, super::MONOMIALS.iter().zip(f.c).map(|(m, c)| (vec![0, 0, 0, m[0], m[1], m[2]], c)));
    let fp = MPoly::from_terms(k, 6, super::MONOMIALS.iter().zip(f.c).map(|(m, c)| (vec![m[0], m[1], m[2], 0, 0, 0], c)));
    let polar = |g: &MPoly| -> MPoly { (0..3).fold(MPoly::zero(6), |acc, i| acc.add(k, &g.derivative(k, 3 + i).mul(k, &MPoly::var(k, 6, i)))) };
    let d1 = polar(&fv);
    let d2 = polar(&d1);
    let d3 = polar(&d2);
    let t1 = fp.mul(k, &fp).mul(k, &d1).scale(k, k.from_u64(1728));
    let t2 = fp.mul(k, &d3).mul(k, &d2).scale(k, k.from_u64(72));
    let t3 = d3.mul(k, &d3).mul(k, &d3);
    let g = t1.sub(k, &t2).add(k, &t3);
    let mut groups: std::collections::BTreeMap<Vec<u8>, Vec<(Vec<u8>, Fe)>> = Default::default();
    for (e, &c) in g.terms() {
        groups.entry(e[3..].to_vec()).or_default().push((e[..3].to_vec(), c));
    }
    let equations = groups.into_values().map(|ts| MPoly::from_terms(k, 3, ts)).collect();
    let axis = [0, 1, 2].map(|i| {
        let mut e = [0u8; 3];
        e[i] = 1;
        MPoly::from_terms(k, 3, d3.terms().filter(|(t, _)| t[3..] == e[..]).map(|(t, &c)| (t[..3].to_vec(), c)))
    });
    Ok(CentreSystem { k: k.clone(), equations, axis, value: f.to_mpoly() })
}

/// Common projective zeros of homogeneous polynomials in three variables,
/// at the smallest level (up to `max_level`) containing all of them.
pub(crate) fn projective_zeros(k: &FieldCtx, polys: &[MPoly], max_level: usize) -> Result<(FieldCtx, Vec<[Fe; 3]>)> {
    let mut level = k.level();
    loop {
        let e = make_field_bounded(k.p() as u64, level, max_level)?;
        match projective_zeros_at(k, polys, &e)? {
            Step::Done(pts) => return Ok((e, pts)),
            Step::Need(l) => level = bump(level, l, max_level)?,
        }
    }
}

fn bump(level: usize, need: usize, max_level: usize) -> Result<usize> {
    let next = common_level(&[level, need]);
    if next > max_level {
        return Err(Error::LevelOverflow { requested: next, max: max_level });
    }
    Ok(next)
}

fn projective_zeros_at(k: &FieldCtx, polys: &[MPoly], e: &FieldCtx) -> Result<Step<Vec<[Fe; 3]>>> {
    let mut out = vec![];
    // z = 1
    let chart: Vec<MPoly> = polys.iter().map(|f| f.specialize(k, 2, k.one())).collect();
    match solve_at(&ZeroDimSystem { k: k.clone(), nvars: 2, polys: chart }, e)? {
        Step::Done(pts) => out.extend(pts.into_iter().map(|p| [p[0], p[1], e.one()])),
        Step::Need(l) => return Ok(Step::Need(l)),
    }
    // (x, 1, 0)
    let line: Vec<MPoly> = polys.iter().map(|f| f.specialize(k, 2, k.zero()).specialize(k, 1, k.one())).collect();
    match solve_at(&ZeroDimSystem { k: k.clone(), nvars: 1, polys: line }, e)? {
        Step::Done(pts) => out.extend(pts.into_iter().map(|p| [p[0], e.one(), e.zero()])),
        Step::Need(l) => return Ok(Step::Need(l)),
    }
    if polys.iter().all(|f| f.eval(k, &[k.one(), k.zero(), k.zero()]).is_zero()) {
        out.push([e.one(), e.zero(), e.zero()]);
    }
    Ok(Step::Done(out))
}

fn dot(k: &Field, a: &[Fe; 3], b: &[Fe; 3]) -> Fe {
    k.add(k.add(k.mul(a[0], b[0]), k.mul(a[1], b[1])), k.mul(a[2], b[2]))
}

fn involutions_at(sys: &CentreSystem, f: &GeneralQuartic, e: &FieldCtx) -> Result<Step<InvolutionData>> {
    let centres = match projective_zeros_at(&sys.k, &sys.equations, e)? {
        Step::Done(c) => c,
        Step::Need(l) => return Ok(Step::Need(l)),
    };
    let emb = embedding(&sys.k, e)?;
    let lift = |g: &MPoly| g.map(|a| emb.embed(a));
    let value = lift(&sys.value);
    let axis_polys = sys.axis.clone().map(|g| lift(&g));
    let mut axes = Vec::with_capacity(centres.len());
    for c in &centres {
        if value.eval(e, c).is_zero() {
            return Err(Error::BadQuartic("singular quartic".into()));
        }
        axes.push([0, 1, 2].map(|i| axis_polys[i].eval(e, c)));
    }
    let n = centres.len();
    let commute = |i: usize, j: usize| dot(e, &axes[i], &centres[j]).is_zero() && dot(e, &axes[j], &centres[i]).is_zero();
    let form = f.lift(e)?;
    let mut v4s = vec![];
    let mut frames = vec![];
    let mut even_forms = vec![];
    for i in 0..n {
        for j in i + 1..n {
            if !commute(i, j) {
                continue;
            }
            for l in j + 1..n {
                if commute(i, l) && commute(j, l) {
                    let q: Matrix3 = [0, 1, 2].map(|r| [centres[i][r], centres[j][r], centres[l][r]]);
                    let g = form.compose(&q);
                    let ev = EvenForm::from_quartic(&g).ok_or_else(|| Error::BadQuartic("centre triangle does not diagonalize the form".into()))?;
                    if ev.pure.iter().any(|a| a.is_zero()) {
                        return Err(Error::BadQuartic("singular quartic".into()));
                    }
                    v4s.push([i, j, l]);
                    frames.push(q);
                    even_forms.push(ev);
                }
            }
        }
    }
    Ok(Step::Done(InvolutionData { field: e.clone(), form, centres, axes, v4s, frames, even_forms }))
}

/// Involutions over the smallest level (up to `max_level`) that contains all
/// of their centres.
pub fn involutions(f: &GeneralQuartic, max_level: usize) -> Result<InvolutionData> {
    involutions_from(f, f.k.level(), max_level)
}

fn involutions_from(f: &GeneralQuartic, start: usize, max_level: usize) -> Result<InvolutionData> {
    let sys = centre_system(f)?;
    let mut level = common_level(&[start, f.k.level()]);
    loop {
        let e = make_field_bounded(f.k.p() as u64, level, max_level)?;
        match involutions_at(&sys, f, &e)? {
            Step::Done(d) => return Ok(d),
            Step::Need(l) => level = bump(level, l, max_level)?,
        }
    }
}

#[derive(Clone, Copy)]
enum Scale {
    Fixed(Fe),
    Free,
    Impossible,
}

/// Number of (u, v) over the closure with g(u x, v y, z) = c f for the
/// squared diagonal entries u, v (z pinned to 1).
fn count_diagonal(k: &Field, g: &EvenForm, f: &EvenForm) -> u64 {
    let c = k.div(g.pure[2], f.pure[2]);
    let a = k.div(k.mul(c, f.pure[0]), g.pure[0]);
    let b = k.div(k.mul(c, f.pure[1]), g.pure[1]);
    let det = |gm: Fe, fm: Fe, sq: Fe| {
        if !gm.is_zero() {
            let u = k.div(k.mul(c, fm), gm);
            if !u.is_zero() && k.sqr(u) == sq {
                Scale::Fixed(u)
            } else {
                Scale::Impossible
            }
        } else if fm.is_zero() {
            Scale::Free
        } else {
            Scale::Impossible
        }
    };
    let du = det(g.mixed[1], f.mixed[1], a);
    let dv = det(g.mixed[0], f.mixed[0], b);
    let (gm, fm) = (g.mixed[2], f.mixed[2]);
    let cf = k.mul(c, fm);
    let one_free = |fixed: Fe, sq: Fe| -> u64 {
        if !gm.is_zero() {
            let w = k.div(cf, k.mul(gm, fixed));
            u64::from(!w.is_zero() && k.sqr(w) == sq)
        } else if fm.is_zero() {
            2
        } else {
            0
        }
    };
    match (du, dv) {
        (Scale::Impossible, _) | (_, Scale::Impossible) => 0,
        (Scale::Fixed(u), Scale::Fixed(v)) => u64::from(k.mul(gm, k.mul(u, v)) == cf),
        (Scale::Fixed(u), Scale::Free) => one_free(u, b),
        (Scale::Free, Scale::Fixed(v)) => one_free(v, a),
        (Scale::Free, Scale::Free) => {
            if !gm.is_zero() {
                let w = k.div(cf, gm);
                2 * u64::from(!w.is_zero() && k.sqr(w) == k.mul(a, b))
            } else if fm.is_zero() {
                4
            } else {
                0
            }
        }
    }
}

/// Order of the automorphism group in PGL_3 over the algebraic closure.
pub fn aut_order(f: &GeneralQuartic) -> Result<u64> {
    aut_order_with(&involutions(f, DEFAULT_MAX_LEVEL)?)
}

pub fn aut_order_with(d: &InvolutionData) -> Result<u64> {
    let f0 = d.even_forms.first().ok_or(Error::NoV4)?;
    let k = &d.field;
    let mut total = 0;
    for g in &d.even_forms {
        for pi in &PERMS {
            total += 4 * count_diagonal(k, &g.permute(pi), f0);
        }
    }
    Ok(total)
}

/// Complete isomorphism invariant of a quartic with a four-group, valid for
/// comparisons between keys computed at the same level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarticKey {
    pub level: usize,
    pub values: [Fe; 4],
}

impl QuarticKey {
    pub fn encode(&self, k: &Field) -> Vec<String> {
        self.values.iter().map(|&a| k.encode(a)).collect()
    }
}

/// Smallest diagonal invariant over all four-groups and coordinate orders,
/// computed at exactly `level`.
pub fn canonical_key(f: &GeneralQuartic, level: usize) -> Result<QuarticKey> {
    let sys = centre_system(f)?;
    let e = make_field(f.k.p() as u64, level)?;
    let d = match involutions_at(&sys, f, &e)? {
        Step::Done(d) => d,
        Step::Need(l) => return Err(Error::LevelOverflow { requested: common_level(&[level, l]), max: level }),
    };
    key_of(&d)
}

pub fn key_of(d: &InvolutionData) -> Result<QuarticKey> {
    let k = &d.field;
    d.even_forms
        .iter()
        .flat_map(|g| PERMS.iter().map(move |pi| g.permute(pi).invariants(k)))
        .min()
        .map(|values| QuarticKey { level: k.level(), values })
        .ok_or(Error::NoV4)
}

/// A Ciani model of a quartic with a four-group and the coordinate change
/// realising it: `ciani` is F(Q v).
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub field: FieldCtx,
    pub ciani: CianiQuartic,
    pub q: Matrix3,
}

/// Ciani model from the four-group and coordinate order with the smallest invariants.
pub fn standard_form_reduce(f: &GeneralQuartic) -> Result<StandardForm> {
    let d = involutions(f, DEFAULT_MAX_LEVEL)?;
    let k = &d.field;
    let mut best: Option<([Fe; 4], usize, usize)> = None;
    for (w, g) in d.even_forms.iter().enumerate() {
        for (pi_idx, pi) in PERMS.iter().enumerate() {
            let inv = g.permute(pi).invariants(k);
            if best.is_none_or(|b| inv < b.0) {
                best = Some((inv, w, pi_idx));
            }
        }
    }
    let (_, w, pi_idx) = best.ok_or(Error::NoV4)?;
    let q = mat_mul(k, &d.frames[w], &perm_matrix(k, &PERMS[pi_idx]));
    let g = d.form.compose(&q);
    let ciani = g.as_ciani().ok_or_else(|| Error::BadQuartic("reduction did not give a Ciani form".into()))?;
    Ok(StandardForm { field: k.clone(), ciani, q })
}

/// Witness of an isomorphism: F2(m v) = c F1(v), with both forms over `field`.
#[derive(Clone, Debug)]
pub struct QuarticIsomorphism {
    pub field: FieldCtx,
    pub f1: GeneralQuartic,
    pub f2: GeneralQuartic,
    pub m: Matrix3,
    pub c: Fe,
}

/// Decide whether two quartics with four-groups are isomorphic over the
/// algebraic closure; the search over four-group frames is exhaustive.
pub fn isom_quartic(f1: &GeneralQuartic, f2: &GeneralQuartic) -> Result<Option<QuarticIsomorphism>> {
    if f1.k.p() != f2.k.p() {
        return Err(Error::FieldMismatch("quartics over different characteristics".into()));
    }
    let base = make_field(f1.k.p() as u64, common_level(&[f1.k.level(), f2.k.level()]))?;
    let (g1, g2) = (f1.lift(&base)?, f2.lift(&base)?);
    let mut d1 = involutions(&g1, DEFAULT_MAX_LEVEL)?;
    let mut d2 = involutions(&g2, DEFAULT_MAX_LEVEL)?;
    let level = common_level(&[d1.field.level(), d2.field.level()]);
    if d1.field.level() != level {
        d1 = involutions_from(&g1, level, DEFAULT_MAX_LEVEL)?;
    }
    if d2.field.level() != level {
        d2 = involutions_from(&g2, level, DEFAULT_MAX_LEVEL)?;
    }
    if d1.field.level() != d2.field.level() {
        return Err(Error::FieldMismatch("involution fields disagree".into()));
    }
    if d1.v4s.is_empty() || d2.v4s.is_empty() {
        return if d1.v4s.len() == d2.v4s.len() { Err(Error::NoV4) } else { Ok(None) };
    }
    if d1.centres.len() != d2.centres.len() || d1.v4s.len() != d2.v4s.len() {
        return Ok(None);
    }
    let k = d1.field.clone();
    let f0 = d1.even_forms[0];
    for (w, g) in d2.even_forms.iter().enumerate() {
        for pi in &PERMS {
            if count_diagonal(&k, &g.permute(pi), &f0) > 0 {
                return witness(&d1, &d2, w, pi).map(Some);
            }
        }
    }
    Ok(None)
}

fn witness(d1: &InvolutionData, d2: &InvolutionData, w: usize, pi: &[usize; 3]) -> Result<QuarticIsomorphism> {
    let k0 = &d1.field;
    let base = k0.level().max(1);
    for mult in [1usize, 2, 4] {
        let level = if mult == 1 { k0.level() } else { base * mult };
        let e = make_field(k0.p() as u64, level)?;
        let emb = embedding(k0, &e)?;
        let lift_m = |m: &Matrix3| m.map(|r| r.map(|a| emb.embed(a)));
        let lift_ev = |g: &EvenForm| EvenForm { pure: g.pure.map(|a| emb.embed(a)), mixed: g.mixed.map(|a| emb.embed(a)) };
        let g = lift_ev(&d2.even_forms[w].permute(pi));
        let f = lift_ev(&d1.even_forms[0]);
        if let Some((d_x, d_y)) = diagonal_roots(&e, &g, &f) {
            let diag: Matrix3 = [[d_x, e.zero(), e.zero()], [e.zero(), d_y, e.zero()], [e.zero(), e.zero(), e.one()]];
            let q1inv = mat_inv(&e, &lift_m(&d1.frames[0])).expect("frame is invertible");
            let m = mat_mul(&e, &mat_mul(&e, &lift_m(&d2.frames[w]), &perm_matrix(&e, pi)), &diag);
            let m = mat_mul(&e, &m, &q1inv);
            let f1 = d1.form.lift(&e)?;
            let f2 = d2.form.lift(&e)?;
            let c = f2.compose(&m).ratio_to(&f1).ok_or_else(|| Error::BadQuartic("isomorphism witness failed verification".into()))?;
            return Ok(QuarticIsomorphism { field: e, f1, f2, m, c });
        }
    }
    Err(Error::LevelOverflow { requested: 4 * base, max: 4 * base })
}

/// Diagonal entries (d_x, d_y) in k with g(d_x x, d_y y, z) proportional to f.
fn diagonal_roots(k: &Field, g: &EvenForm, f: &EvenForm) -> Option<(Fe, Fe)> {
    let c = k.div(g.pure[2], f.pure[2]);
    let a = k.div(k.mul(c, f.pure[0]), g.pure[0]);
    let b = k.div(k.mul(c, f.pure[1]), g.pure[1]);
    for u in k.sqrt_all(a) {
        for v in k.sqrt_all(b) {
            let ok = k.mul(g.mixed[1], u) == k.mul(c, f.mixed[1])
                && k.mul(g.mixed[0], v) == k.mul(c, f.mixed[0])
                && k.mul(g.mixed[2], k.mul(u, v)) == k.mul(c, f.mixed[2]);
            if ok {
                if let (Some(x), Some(y)) = (k.sqrt(u), k.sqrt(v)) {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

fn perm_matrix(k: &Field, pi: &[usize; 3]) -> Matrix3 {
    let mut m = [[k.zero(); 3]; 3];
    for a in 0..3 {
        m[a][pi[a]] = k.one();
    }
    m
}

pub fn mat_mul(k: &Field, a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut m = [[k.zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                m[i][j] = k.add(m[i][j], k.mul(a[i][l], b[l][j]));
            }
        }
    }
    m
}

pub fn mat_inv(k: &Field, a: &Matrix3) -> Option<Matrix3> {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        k.sub(k.mul(a[r0][c0], a[r1][c1]), k.mul(a[r0][c1], a[r1][c0]))
    };
    let det = (0..3).fold(k.zero(), |acc, j| k.add(acc, k.mul(a[0][j], c(0, j))));
    let di = k.inv(det)?;
    let mut m = [[k.zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[j][i] = k.mul(c(i, j), di);
        }
    }
    Some(m)
}

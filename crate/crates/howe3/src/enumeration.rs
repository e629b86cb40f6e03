//! Enumeration of superspecial genus-3 Howe curves: the hyperelliptic curves
//! of Howe type (from superspecial genus-2 curves) and Oort type (from pairs of
//! Legendre parameters), and the non-hyperelliptic Ciani quartics bucketed by
//! automorphism group.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::{j_of_quartic_cover, j_of_quartic_invariants, supersingular_lists, QuarticCover, SupersingularLists};
use crate::error::{Error, Result};
use crate::field_tower::{embedding, make_field, sqrt_any, Fe, FieldCtx, DEFAULT_MAX_LEVEL};
use crate::howe_construct::{build_ciani, build_howe_from_eh, build_howe_hyperelliptic, mu_from_lambdas, TwoTorsionParams};
use crate::hyperelliptic::{common_level, count_points_hyp, is_superspecial, isom_exact, HyperCurve};
use crate::invariants::{shioda, weighted_equal, WeightedInvariants};
use crate::polynomials::Poly;
use crate::quartic::{aut_order_with, canonical_key, count_points_quartic, involutions, isom_quartic, key_of, GeneralQuartic, QuarticKey};
use crate::richelot_g2::{enumerate_ssp_genus2, rosenhain_forms};

pub const SCHEMA_VERSION: u32 = 1;

const CROSS_BUCKET_CHECKS: usize = 100;

/// Largest number of Rosenhain forms of a genus-2 curve.
pub const MAX_ROSENHAIN: usize = 120;
/// Largest number of admissible triples attached to one j-multiset.
pub const MAX_TRIPLES_PER_J: u64 = 2592;

/// Automorphism groups of non-hyperelliptic Howe curves, by order.
pub const QUARTIC_GROUPS: [(u64, &str); 7] = [(4, "V4"), (8, "D4"), (16, "G16"), (24, "S4"), (48, "G48"), (96, "G96"), (168, "G168")];

pub fn group_name(order: u64) -> Option<&'static str> {
    QUARTIC_GROUPS.iter().find(|g| g.0 == order).map(|g| g.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    HoweType,
    OortType,
    Quartic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::HoweType => "howe-type",
            Kind::OortType => "oort-type",
            Kind::Quartic => "quartic",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "howe-type" | "howe" => Ok(Kind::HoweType),
            "oort-type" | "oort" => Ok(Kind::OortType),
            "quartic" => Ok(Kind::Quartic),
            _ => Err(Error::Parse(format!("unknown kind '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Hyperelliptic,
    PlaneQuartic,
}

/// One isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub model: Model,
    /// `HyperCurve::encode` or `GeneralQuartic::encode` of the representative.
    pub curve: String,
    /// Parameters the representative was built from: (a, b, c) for Howe
    /// type, (nu, lambda, mu) otherwise.
    pub params: Vec<String>,
    /// Shioda invariants, or the diagonal invariants of a quartic.
    pub key: Vec<String>,
    pub aut_order: Option<u64>,
    pub group: Option<String>,
}

impl ClassEntry {
    /// The representative in tagged curve file form.
    pub fn tagged_curve(&self) -> String {
        match self.model {
            Model::Hyperelliptic => format!("hyperelliptic: {}", self.curve),
            Model::PlaneQuartic => format!("quartic: {}", self.curve),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub group: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub schema_version: u32,
    pub p: u64,
    pub kind: Kind,
    pub classes: Vec<ClassEntry>,
    /// Classes per group; a single "total" row for hyperelliptic kinds.
    pub tallies: Vec<Tally>,
    /// Admissible (nu, lambda, mu) per group, counted with multiplicity.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triple_tallies: Vec<Tally>,
    /// Candidates whose automorphism group could not be determined.
    #[serde(default)]
    pub undetermined: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl ClassReport {
    fn new(p: u64, kind: Kind) -> ClassReport {
        ClassReport { schema_version: SCHEMA_VERSION, p, kind, classes: vec![], tallies: vec![], triple_tallies: vec![], undetermined: 0, timings: None }
    }

    pub fn total(&self) -> u64 {
        self.classes.len() as u64
    }

    pub fn tally(&self, group: &str) -> u64 {
        self.tallies.iter().find(|t| t.group == group).map_or(0, |t| t.count)
    }

    pub fn triple_tally(&self, group: &str) -> u64 {
        self.triple_tallies.iter().find(|t| t.group == group).map_or(0, |t| t.count)
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub workers: usize,
    pub max_level: usize,
    /// Re-check superspeciality of every class and the dedup decisions with
    /// exact isomorphism tests.
    pub verify: bool,
    pub timings: bool,
    /// Seed of the randomized spot checks run under `verify`.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options { workers: 1, max_level: DEFAULT_MAX_LEVEL, verify: false, timings: false, seed: 0 }
    }
}

struct Clock {
    on: bool,
    start: Instant,
    rows: Vec<Timing>,
}

impl Clock {
    fn new(on: bool) -> Clock {
        Clock { on, start: Instant::now(), rows: vec![] }
    }

    fn lap(&mut self, step: &str) {
        if self.on {
            let now = Instant::now();
            self.rows.push(Timing { step: step.into(), seconds: (now - self.start).as_secs_f64() });
            self.start = now;
        }
    }

    fn finish(self) -> Option<Vec<Timing>> {
        self.on.then_some(self.rows)
    }
}

fn check_p(p: u64) -> Result<()> {
    make_field(p, 0).map(|_| ())
}

fn j_of(k: &FieldCtx, q: &Poly) -> Result<Fe> {
    match j_of_quartic_invariants(k, q) {
        Some(j) => Ok(j),
        None => j_of_quartic_cover(&QuarticCover::new(k, q.clone())?),
    }
}

/// j-invariant of y^2 = q(x) as an element of the F_{p^2} of `lists`, if it lies there.
fn j_in_lists(lists: &SupersingularLists, k: &FieldCtx, q: &Poly) -> Result<Option<Fe>> {
    let j = j_of(k, q)?;
    let e = embedding(&lists.field, k)?;
    Ok(e.project(j))
}

fn is_ss_quotient(lists: &SupersingularLists, k: &FieldCtx, q: &Poly) -> Result<bool> {
    Ok(j_in_lists(lists, k, q)?.is_some_and(|j| lists.contains_j(j)))
}

/// Dedup of hyperelliptic genus-3 curves: Shioda invariants for p > 7,
/// exact isomorphism tests below.
struct HyperClasses {
    exact: bool,
    reps: Vec<(HyperCurve, Option<WeightedInvariants>)>,
}

impl HyperClasses {
    fn new(p: u64) -> HyperClasses {
        HyperClasses { exact: p <= 7, reps: vec![] }
    }

    /// Inserts `c` unless it is isomorphic to a stored class; returns the new index.
    fn insert(&mut self, c: HyperCurve) -> Result<Option<usize>> {
        if self.exact {
            for (r, _) in &self.reps {
                if isom_exact(r, &c)?.is_some() {
                    return Ok(None);
                }
            }
            self.reps.push((c, None));
        } else {
            let inv = shioda(&c.k, &c.f)?;
            for (_, r) in &self.reps {
                if same_invariants(r.as_ref().expect("shioda"), &inv)? {
                    return Ok(None);
                }
            }
            self.reps.push((c, Some(inv)));
        }
        Ok(Some(self.reps.len() - 1))
    }
}

fn same_invariants(a: &WeightedInvariants, b: &WeightedInvariants) -> Result<bool> {
    if a.k.level() == b.k.level() {
        return weighted_equal(a, b);
    }
    let big = make_field(a.k.p() as u64, common_level(&[a.k.level(), b.k.level()]))?;
    weighted_equal(&a.lift(&big)?, &b.lift(&big)?)
}

fn hyper_entry(c: &HyperCurve, inv: &Option<WeightedInvariants>, params: Vec<String>) -> ClassEntry {
    ClassEntry {
        model: Model::Hyperelliptic,
        curve: c.encode(),
        params,
        key: inv.as_ref().map(|i| i.encode()).unwrap_or_default(),
        aut_order: None,
        group: None,
    }
}

fn total_tally(n: usize) -> Vec<Tally> {
    vec![Tally { group: "total".into(), count: n as u64 }]
}

fn verify_hyper(c: &HyperCurve) -> Result<()> {
    if is_superspecial(c) {
        Ok(())
    } else {
        Err(Error::InvalidCurve(format!("class {} is not superspecial", c.encode())))
    }
}

/// Howe-type enumeration through Rosenhain forms of superspecial genus-2 curves.
pub fn method1(p: u64) -> Result<ClassReport> {
    method1_with(p, &Options::default())
}

pub fn method1_with(p: u64, opt: &Options) -> Result<ClassReport> {
    let mut out = ClassReport::new(p, Kind::HoweType);
    let mut clock = Clock::new(opt.timings);
    run_method1(p, opt, &mut out, &mut clock, false)?;
    out.timings = clock.finish();
    Ok(out)
}

fn run_method1(p: u64, opt: &Options, out: &mut ClassReport, clock: &mut Clock, first_only: bool) -> Result<()> {
    check_p(p)?;
    let lists = supersingular_lists(p)?;
    clock.lap("supersingular lists");
    let g2 = enumerate_ssp_genus2(p)?;
    clock.lap("genus-2 classes");
    let mut classes = HyperClasses::new(p);
    let mut params = vec![];
    'outer: for h in g2.classes.values() {
        let (l, triples) = rosenhain_forms(h)?;
        assert!(triples.len() <= MAX_ROSENHAIN, "{} Rosenhain forms", triples.len());
        for t in triples {
            let [a, b, c] = t.as_array();
            let f = Poly::from_roots(&l, &[l.one(), a, b, c]);
            if !is_ss_quotient(&lists, &l, &f)? {
                continue;
            }
            let curve = build_howe_from_eh(&l, &f)?;
            if let Some(i) = classes.insert(curve)? {
                params.push(vec![l.encode(a), l.encode(b), l.encode(c)]);
                if opt.verify {
                    verify_hyper(&classes.reps[i].0)?;
                }
                if first_only {
                    break 'outer;
                }
            }
        }
    }
    clock.lap("rosenhain forms and dedup");
    out.classes = classes.reps.iter().zip(params).map(|((c, inv), pr)| hyper_entry(c, inv, pr)).collect();
    out.tallies = total_tally(out.classes.len());
    Ok(())
}

/// Oort-type hyperelliptic enumeration over pairs of supersingular Legendre parameters.
pub fn method2(p: u64) -> Result<ClassReport> {
    method2_with(p, &Options::default())
}

pub fn method2_with(p: u64, opt: &Options) -> Result<ClassReport> {
    let mut out = ClassReport::new(p, Kind::OortType);
    let mut clock = Clock::new(opt.timings);
    run_method2(p, opt, &mut out, &mut clock, false)?;
    out.timings = clock.finish();
    Ok(out)
}

fn run_method2(p: u64, opt: &Options, out: &mut ClassReport, clock: &mut Clock, first_only: bool) -> Result<()> {
    check_p(p)?;
    let lists = supersingular_lists(p)?;
    let k = lists.field.clone();
    clock.lap("supersingular lists");
    let mut classes = HyperClasses::new(p);
    let mut params = vec![];
    'outer: for &nu in &lists.t_p {
        for &lambda in &lists.t_p {
            let linv = k.inv(lambda).expect("Legendre parameters are nonzero");
            let r = k.mul(nu, linv);
            let (l, mus) = sqrt_any(&k, r)?;
            let e = embedding(&k, &l)?;
            let (nu_l, la_l, linv_l) = (e.embed(nu), e.embed(lambda), e.embed(linv));
            let excluded = [l.zero(), l.one(), nu_l, linv_l, e.embed(r)];
            let mut mus = mus;
            mus.sort();
            mus.dedup();
            for mu in mus {
                if excluded.contains(&mu) {
                    continue;
                }
                let ml = l.mul(mu, la_l);
                let e3 = Poly::from_roots(&l, &[l.one(), nu_l, mu, ml]);
                if !is_ss_quotient(&lists, &l, &e3)? {
                    continue;
                }
                let t = TwoTorsionParams::new(l.one(), nu_l, mu, ml)?;
                let curve = build_howe_hyperelliptic(&l, &t)?;
                if let Some(i) = classes.insert(curve)? {
                    params.push(vec![l.encode(nu_l), l.encode(la_l), l.encode(mu)]);
                    if opt.verify {
                        verify_hyper(&classes.reps[i].0)?;
                    }
                    if first_only {
                        break 'outer;
                    }
                }
            }
        }
    }
    clock.lap("pairs and dedup");
    out.classes = classes.reps.iter().zip(params).map(|((c, inv), pr)| hyper_entry(c, inv, pr)).collect();
    out.tallies = total_tally(out.classes.len());
    Ok(())
}

/// A candidate (nu, lambda, mu) with its quartic, group order and key.
#[derive(Clone, Debug)]
struct Candidate {
    nu: Fe,
    lambda: Fe,
    mu: Fe,
    quartic: GeneralQuartic,
    order: Option<u64>,
    key: Option<QuarticKey>,
}

/// Admissible triples of every j-multiset, in lexicographic multiset order,
/// with the index permutations counted separately.
fn method3_triples(lists: &SupersingularLists, k4: &FieldCtx) -> Result<Vec<Vec<(Fe, Fe, Fe)>>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let k2 = &lists.field;
    let e24 = embedding(k2, k4)?;
    let s = &lists.s_p;
    let mut out = vec![];
    for a in 0..s.len() {
        for b in a..s.len() {
            for c in b..s.len() {
                let js = [s[a], s[b], s[c]];
                let mut bucket = vec![];
                for pi in PERMS {
                    for &nu in lists.ts_with_j(js[pi[0]]) {
                        for &lambda in lists.ts_with_j(js[pi[1]]) {
                            for &lp in lists.ts_with_j(js[pi[2]]) {
                                let (l, mus) = mu_from_lambdas(k2, nu, lambda, lp)?;
                                let e = embedding(&l, k4)?;
                                for mu in mus {
                                    bucket.push((e24.embed(nu), e24.embed(lambda), e.embed(mu)));
                                }
                            }
                        }
                    }
                }
                out.push(bucket);
            }
        }
    }
    Ok(out)
}

fn candidate(k4: &FieldCtx, (nu, lambda, mu): (Fe, Fe, Fe), max_level: usize) -> Result<Option<Candidate>> {
    let t = TwoTorsionParams::new(k4.one(), nu, mu, k4.mul(mu, lambda))?;
    let c = build_ciani(k4, &t)?;
    if !c.is_nonsingular() {
        return Ok(None);
    }
    let quartic = c.to_general();
    let (order, key) = match involutions(&quartic, max_level) {
        Ok(d) => (Some(aut_order_with(&d)?), Some(key_of(&d)?)),
        Err(Error::LevelOverflow { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(Some(Candidate { nu, lambda, mu, quartic, order, key }))
}

/// Runs `f` over `items` on `workers` threads; results keep the input order.
fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let f = &f;
    let mut parts: Vec<Vec<(usize, R)>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            (0..workers).map(|w| s.spawn(move || items.iter().enumerate().skip(w).step_by(workers).map(|(i, x)| (i, f(x))).collect::<Vec<_>>())).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut all: Vec<(usize, R)> = parts.drain(..).flatten().collect();
    all.sort_by_key(|x| x.0);
    all.into_iter().map(|x| x.1).collect()
}

/// Non-hyperelliptic enumeration over j-multisets, bucketed by automorphism group.
pub fn method3(p: u64) -> Result<ClassReport> {
    method3_with(p, &Options::default())
}

pub fn method3_with(p: u64, opt: &Options) -> Result<ClassReport> {
    check_p(p)?;
    let mut out = ClassReport::new(p, Kind::Quartic);
    let mut clock = Clock::new(opt.timings);
    let lists = supersingular_lists(p)?;
    let k4 = make_field(p, 2)?;
    clock.lap("supersingular lists");
    let buckets = method3_triples(&lists, &k4)?;
    for b in &buckets {
        assert!(b.len() as u64 <= MAX_TRIPLES_PER_J, "{} triples for one j-multiset", b.len());
    }
    // distinct triples in first-appearance order
    let mut index: HashMap<(Fe, Fe, Fe), usize> = HashMap::new();
    let mut distinct = vec![];
    for b in &buckets {
        for &t in b {
            index.entry(t).or_insert_with(|| {
                distinct.push(t);
                distinct.len() - 1
            });
        }
    }
    clock.lap("triples");
    let mut cands: Vec<Option<Candidate>> = par_map(&distinct, opt.workers, |&t| candidate(&k4, t, opt.max_level)).into_iter().collect::<Result<_>>()?;
    clock.lap("automorphism groups");
    rekey_common_level(&mut cands)?;

    let mut triple_counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut seen: HashMap<(u64, usize), Vec<(QuarticKey, usize)>> = HashMap::new();
    let mut reps: Vec<&Candidate> = vec![];
    let mut dups: Vec<(usize, usize)> = vec![];
    for (jdx, b) in buckets.iter().enumerate() {
        for t in b {
            let Some(c) = &cands[index[t]] else { continue };
            let (Some(r), Some(key)) = (c.order, &c.key) else {
                out.undetermined += 1;
                continue;
            };
            *triple_counts.entry(r).or_default() += 1;
            // four-group curves are only compared within their j-multiset
            let bucket = (r, if r == 4 { jdx } else { usize::MAX });
            let list = seen.entry(bucket).or_default();
            match list.iter().find(|(k, _)| k == key) {
                Some(&(_, rep)) => {
                    if opt.verify {
                        dups.push((rep, index[t]));
                    }
                }
                None => {
                    list.push((*key, index[t]));
                    reps.push(c);
                }
            }
        }
    }
    clock.lap("classification");
    if opt.verify {
        verify_quartic_classes(&reps, &cands, &dups)?;
        verify_cross_buckets(&buckets, &cands, &index, opt.seed)?;
        clock.lap("verification");
    }
    out.classes = reps.iter().map(|c| quartic_entry(c)).collect();
    out.tallies = group_tallies(out.classes.iter().filter_map(|c| c.aut_order));
    out.triple_tallies = QUARTIC_GROUPS.iter().map(|&(r, n)| Tally { group: n.into(), count: triple_counts.get(&r).copied().unwrap_or(0) }).collect();
    for (&r, &n) in &triple_counts {
        if group_name(r).is_none() {
            out.triple_tallies.push(Tally { group: format!("order-{r}"), count: n });
        }
    }
    out.timings = clock.finish();
    Ok(out)
}

fn group_tallies(orders: impl Iterator<Item = u64>) -> Vec<Tally> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for r in orders {
        *counts.entry(r).or_default() += 1;
    }
    let mut out: Vec<Tally> = QUARTIC_GROUPS.iter().map(|&(r, n)| Tally { group: n.into(), count: counts.get(&r).copied().unwrap_or(0) }).collect();
    for (&r, &n) in &counts {
        if group_name(r).is_none() {
            out.push(Tally { group: format!("order-{r}"), count: n });
        }
    }
    out
}

/// Keys are only comparable at one level: recompute those found elsewhere.
fn rekey_common_level(cands: &mut [Option<Candidate>]) -> Result<()> {
    let levels: Vec<usize> = cands.iter().flatten().filter_map(|c| c.key.as_ref().map(|k| k.level)).collect();
    let target = common_level(&levels);
    for c in cands.iter_mut().flatten() {
        if c.key.as_ref().is_some_and(|k| k.level != target) {
            c.key = Some(canonical_key(&c.quartic, target)?);
        }
    }
    Ok(())
}

fn quartic_entry(c: &Candidate) -> ClassEntry {
    let k = &c.quartic.k;
    let key = c.key.as_ref().expect("classified candidates carry a key");
    let kk = make_field(k.p() as u64, key.level).expect("key field");
    ClassEntry {
        model: Model::PlaneQuartic,
        curve: c.quartic.encode(),
        params: vec![k.encode(c.nu), k.encode(c.lambda), k.encode(c.mu)],
        key: key.encode(&kk),
        aut_order: c.order,
        group: c.order.and_then(group_name).map(String::from),
    }
}

/// Four-group curves of different j-multisets are never isomorphic: checked
/// on random pairs.
fn verify_cross_buckets(buckets: &[Vec<(Fe, Fe, Fe)>], cands: &[Option<Candidate>], index: &HashMap<(Fe, Fe, Fe), usize>, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v4: Vec<(usize, &Candidate)> = buckets
        .iter()
        .enumerate()
        .flat_map(|(j, b)| b.iter().filter_map(move |t| cands[index[t]].as_ref().filter(|c| c.order == Some(4)).map(|c| (j, c))))
        .collect();
    if v4.iter().all(|x| x.0 == v4[0].0) {
        return Ok(());
    }
    let mut checked = 0;
    while checked < CROSS_BUCKET_CHECKS {
        let (a, b) = (&v4[rng.gen_range(0..v4.len())], &v4[rng.gen_range(0..v4.len())]);
        if a.0 == b.0 {
            continue;
        }
        if isom_quartic(&a.1.quartic, &b.1.quartic)?.is_some() {
            return Err(Error::InvalidCurve(format!("isomorphic curves {} and {} in different buckets", a.1.quartic.encode(), b.1.quartic.encode())));
        }
        checked += 1;
    }
    Ok(())
}

fn verify_quartic_classes(reps: &[&Candidate], cands: &[Option<Candidate>], dups: &[(usize, usize)]) -> Result<()> {
    for c in reps {
        let r = c.order.expect("classified");
        for d in reps.iter().filter(|d| d.order == Some(r) && !std::ptr::eq(**d, *c)) {
            if isom_quartic(&c.quartic, &d.quartic)?.is_some() {
                return Err(Error::InvalidCurve(format!("classes {} and {} are isomorphic", c.quartic.encode(), d.quartic.encode())));
            }
        }
    }
    for &(rep, dup) in dups {
        let (a, b) = (cands[rep].as_ref().expect("rep"), cands[dup].as_ref().expect("dup"));
        if isom_quartic(&a.quartic, &b.quartic)?.is_none() {
            return Err(Error::InvalidCurve(format!("equal keys for non-isomorphic {} and {}", a.quartic.encode(), b.quartic.encode())));
        }
    }
    Ok(())
}

/// First superspecial curve found by the method for `kind`, if any.
pub fn decide_exists(p: u64, kind: Kind) -> Result<Option<ClassEntry>> {
    let opt = Options::default();
    let mut out = ClassReport::new(p, kind);
    let mut clock = Clock::new(false);
    match kind {
        Kind::HoweType => run_method1(p, &opt, &mut out, &mut clock, true)?,
        Kind::OortType => run_method2(p, &opt, &mut out, &mut clock, true)?,
        Kind::Quartic => {
            check_p(p)?;
            let lists = supersingular_lists(p)?;
            let k4 = make_field(p, 2)?;
            for b in method3_triples(&lists, &k4)? {
                for t in b {
                    if let Some(c) = candidate(&k4, t, opt.max_level)? {
                        if c.key.is_some() {
                            return Ok(Some(quartic_entry(&c)));
                        }
                    }
                }
            }
        }
    }
    Ok(out.classes.into_iter().next())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extremality {
    Maximal,
    Minimal,
}

/// Expected behaviour of the report's classes: hyperelliptic ones over
/// F_{p^2} (maximal for p = 3 mod 4, minimal for p = 1 mod 4), quartics
/// minimal over F_{p^4}.
pub fn expected_extremality(report: &ClassReport) -> Extremality {
    match report.kind {
        Kind::Quartic => Extremality::Minimal,
        _ if report.p % 4 == 3 => Extremality::Maximal,
        _ => Extremality::Minimal,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub index: usize,
    /// Level of the field the points were counted over.
    pub level: usize,
    pub points: u64,
    pub expected: u64,
    pub ok: bool,
}

/// q + 1 +- 2 g sqrt(q) for genus 3 over F_q, q = p^(2m).
fn extremal_count(p: u64, level: usize, mode: Extremality) -> u64 {
    let root = p.pow(level as u32);
    let q = root * root;
    match mode {
        Extremality::Maximal => q + 1 + 6 * root,
        Extremality::Minimal => q + 1 - 6 * root,
    }
}

/// Counts points of every class representative over F_{p^2} (hyperelliptic)
/// or F_{p^4} (quartic) and compares with the extremal value for `mode`.
pub fn verify_extremality(report: &ClassReport, mode: Extremality) -> Result<Vec<Verdict>> {
    let mut out = vec![];
    for (index, c) in report.classes.iter().enumerate() {
        let (level, points) = match c.model {
            Model::Hyperelliptic => (1, count_points_hyp(&HyperCurve::parse(&c.curve)?, 1)?),
            Model::PlaneQuartic => (2, count_points_quartic(&GeneralQuartic::parse(&c.curve)?, 2)?),
        };
        let expected = extremal_count(report.p, level, mode);
        out.push(Verdict { index, level, points, expected, ok: points == expected });
    }
    Ok(out)
}

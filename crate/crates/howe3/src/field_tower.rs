//! Arithmetic in F_p and its even-degree extensions F_{p^{2m}}.
//!
//! Level `m` denotes F_{p^{2m}}; level 0 is the prime field. Each level is
//! built directly over F_p from the smallest monic irreducible polynomial of
//! its degree, coefficients compared from x^{n-1} down to x^0. Elements are
//! plain coefficient arrays; every operation goes through the owning [`Field`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported extension degree over F_p.
pub const MAX_DEGREE: usize = 24;
/// Largest supported level (degree 2 * level).
pub const DEFAULT_MAX_LEVEL: usize = MAX_DEGREE / 2;

/// Element of some F_{p^n}; coefficients of 1, u, u^2, ... with u the generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) [u16; MAX_DEGREE]);

impl Fe {
    pub const ZERO: Fe = Fe([0; MAX_DEGREE]);

    pub fn coeffs(&self) -> &[u16; MAX_DEGREE] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Constant coefficient, meaningful for elements of the prime field.
    pub fn c0(&self) -> u32 {
        self.0[0] as u32
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        write!(f, "Fe{:?}", &self.0[..=last])
    }
}

struct SqrtData {
    s: u32,
    t: Vec<u64>,
    t_plus_1_half: Vec<u64>,
    c: Fe,
}

/// A finite field F_{p^n} with n = 1 or n = 2 * level.
pub struct Field {
    p: u32,
    level: usize,
    n: usize,
    /// Low coefficients g_0..g_{n-1} of the monic modulus.
    modulus: Vec<u32>,
    /// u^{i p} for i < n.
    frob: Vec<Fe>,
    order: BigUint,
    sqrt: SqrtData,
}

/// Shared handle to an immutable field.
pub type FieldCtx = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.n, self.modulus)
    }
}

/// Primality by trial division; inputs are below 2^16.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<u32> {
    if p == 2 || p >= 65536 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p as u32)
}

fn degree_of_level(level: usize) -> usize {
    if level == 0 {
        1
    } else {
        2 * level
    }
}

type FieldCache = Mutex<HashMap<(u32, usize), FieldCtx>>;

fn field_cache() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Field F_{p^{2m}} (F_p for m = 0) with the default level bound.
pub fn make_field(p: u64, m: usize) -> Result<FieldCtx> {
    make_field_bounded(p, m, DEFAULT_MAX_LEVEL)
}

/// Field F_{p^{2m}} with an explicit level bound (at most [`DEFAULT_MAX_LEVEL`]).
pub fn make_field_bounded(p: u64, m: usize, max_level: usize) -> Result<FieldCtx> {
    let p = check_prime(p)?;
    let max = max_level.min(DEFAULT_MAX_LEVEL);
    if m > max {
        return Err(Error::LevelOverflow { requested: m, max });
    }
    let mut cache = field_cache().lock().expect("field cache poisoned");
    if let Some(k) = cache.get(&(p, m)) {
        return Ok(k.clone());
    }
    let k = Arc::new(Field::build(p, m));
    cache.insert((p, m), k.clone());
    Ok(k)
}

// ---- helpers over F_p[x], used only to find moduli ----

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mulmod(a: &[u32], b: &[u32], g: &[u32], p: u64) -> Vec<u32> {
    // g monic, given with leading 1
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut t = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            t[i + j] = (t[i + j] + x as u64 * y as u64) % p;
        }
    }
    let n = g.len() - 1;
    for i in (n..t.len()).rev() {
        let c = t[i] % p;
        if c == 0 {
            continue;
        }
        for j in 0..n {
            t[i - n + j] = (t[i - n + j] + c * (p - g[j] as u64)) % p;
        }
        t[i] = 0;
    }
    let mut r: Vec<u32> = t.into_iter().take(n).map(|x| (x % p) as u32).collect();
    fp_trim(&mut r);
    r
}

fn fp_powmod(a: &[u32], mut e: u64, g: &[u32], p: u64) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = fp_mulmod(&result, &base, g, p);
        }
        base = fp_mulmod(&base, &base, g, p);
        e >>= 1;
    }
    result
}

fn fp_inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn fp_gcd(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lb = fp_inv(*b.last().unwrap() as u64, p);
        while a.len() >= b.len() {
            let c = *a.last().unwrap() as u64 * lb % p;
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                let v = (a[shift + j] as u64 + p - c * bj as u64 % p) % p;
                a[shift + j] = v as u32;
            }
            fp_trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic g (leading 1 included).
fn fp_is_irreducible(g: &[u32], p: u64) -> bool {
    let n = g.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // powers[k] = x^{p^k} mod g
    let mut powers = vec![fp_mulmod(&x, &[1], g, p)];
    for k in 1..=n {
        let prev = powers[k - 1].clone();
        powers.push(fp_powmod(&prev, p, g, p));
    }
    let mut diff = powers[n].clone();
    diff.resize(diff.len().max(2), 0);
    diff[1] = ((diff[1] as u64 + p - 1) % p) as u32;
    fp_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for r in prime_factors(n) {
        let mut h = powers[n / r].clone();
        h.resize(h.len().max(2), 0);
        h[1] = ((h[1] as u64 + p - 1) % p) as u32;
        fp_trim(&mut h);
        let gcd = fp_gcd(g, &h, p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree n, ordered by (c_{n-1}, ..., c_0).
pub fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let pp = p as u64;
    if n == 1 {
        return vec![0];
    }
    let mut digits = vec![0u32; n]; // digits[0] = c_{n-1}
    loop {
        let mut g: Vec<u32> = digits.iter().rev().copied().collect();
        g.push(1);
        if g[0] != 0 && fp_is_irreducible(&g, pp) {
            g.pop();
            return g;
        }
        // increment, least significant digit is c_0 = digits[n-1]
        let mut i = n;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
        }
    }
}

fn big_to_limbs(b: &BigUint) -> Vec<u64> {
    b.to_u64_digits()
}

impl Field {
    fn build(p: u32, level: usize) -> Field {
        let n = degree_of_level(level);
        let modulus = smallest_irreducible(p, n);
        let order = BigUint::from(p).pow(n as u32);
        let mut k = Field { p, level, n, modulus, frob: vec![], order, sqrt: SqrtData { s: 0, t: vec![], t_plus_1_half: vec![], c: Fe::ZERO } };
        // Frobenius images of the power basis
        let u = if n == 1 { k.from_u64(1) } else { k.gen() };
        let up = k.pow_u64(u, p as u64);
        let mut frob = Vec::with_capacity(n);
        let mut acc = k.one();
        for _ in 0..n {
            frob.push(acc);
            acc = k.mul(acc, up);
        }
        k.frob = frob;
        // Tonelli-Shanks data
        let qm1 = &k.order - BigUint::one();
        let mut t = qm1.clone();
        let mut s = 0u32;
        while (&t & BigUint::one()).is_zero() {
            t >>= 1;
            s += 1;
        }
        let z = (2u64..).map(|i| k.element_from_index(i)).find(|&z| !k.is_square(z)).expect("non-residue exists");
        let tl = big_to_limbs(&t);
        let c = k.pow_limbs(z, &tl);
        let tp = (&t + BigUint::one()) >> 1;
        k.sqrt = SqrtData { s, t: tl, t_plus_1_half: big_to_limbs(&tp), c };
        k
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn level(&self) -> usize {
        self.level
    }
    /// Extension degree over F_p.
    pub fn degree(&self) -> usize {
        self.n
    }
    /// Low coefficients of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn order(&self) -> &BigUint {
        &self.order
    }
    /// Field size as u64, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        let d = self.order.to_u64_digits();
        match d.len() {
            0 => Some(0),
            1 => Some(d[0]),
            _ => None,
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }
    /// Generator u of the power basis (requires degree > 1).
    pub fn gen(&self) -> Fe {
        let mut c = [0u16; MAX_DEGREE];
        if self.n > 1 {
            c[1] = 1;
        } else {
            c[0] = ((self.p - self.modulus[0]) % self.p) as u16;
        }
        Fe(c)
    }

    pub fn from_u64(&self, v: u64) -> Fe {
        let mut c = [0u16; MAX_DEGREE];
        c[0] = (v % self.p as u64) as u16;
        Fe(c)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let p = self.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// Element from coefficients (constant first); extra entries must be absent.
    pub fn from_coeffs(&self, cs: &[u64]) -> Result<Fe> {
        if cs.len() > self.n {
            return Err(Error::FieldMismatch(format!("{} coefficients for a degree-{} field", cs.len(), self.n)));
        }
        let mut c = [0u16; MAX_DEGREE];
        for (i, &v) in cs.iter().enumerate() {
            c[i] = (v % self.p as u64) as u16;
        }
        Ok(Fe(c))
    }

    /// The i-th element in base-p digit order (constant digit first).
    pub fn element_from_index(&self, mut i: u64) -> Fe {
        let mut c = [0u16; MAX_DEGREE];
        for slot in c.iter_mut().take(self.n) {
            *slot = (i % self.p as u64) as u16;
            i /= self.p as u64;
        }
        Fe(c)
    }

    /// Inverse of [`Field::element_from_index`].
    pub fn index_of(&self, a: Fe) -> u64 {
        let mut i = 0u64;
        for k in (0..self.n).rev() {
            i = i * self.p as u64 + a.0[k] as u64;
        }
        i
    }

    /// All elements, for small fields.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let q = self.order_u64().expect("field too large to enumerate");
        (0..q).map(move |i| self.element_from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut c = [0u16; MAX_DEGREE];
        for slot in c.iter_mut().take(self.n) {
            *slot = rng.gen_range(0..self.p) as u16;
        }
        Fe(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..self.n {
            let s = a.0[i] as u32 + b.0[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        Fe(c)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..self.n {
            let s = a.0[i] as u32 + p - b.0[i] as u32;
            c[i] = if s >= p { s - p } else { s } as u16;
        }
        Fe(c)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.sub(Fe::ZERO, a)
    }

    /// Multiplication by an integer.
    pub fn mul_int(&self, a: Fe, k: i64) -> Fe {
        let kk = k.rem_euclid(self.p as i64) as u32;
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..self.n {
            c[i] = ((a.0[i] as u32 * kk) % self.p) as u16;
        }
        Fe(c)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let n = self.n;
        let p = self.p as u64;
        if n == 1 {
            let mut c = [0u16; MAX_DEGREE];
            c[0] = ((a.0[0] as u64 * b.0[0] as u64) % p) as u16;
            return Fe(c);
        }
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                t[i + j] += ai * b.0[j] as u64;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..n {
                t[i - n + j] += c * (p - self.modulus[j] as u64);
            }
        }
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..n {
            c[i] = (t[i] % p) as u16;
        }
        Fe(c)
    }

    #[inline]
    pub fn sqr(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow_u64(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.sqr(b);
            e >>= 1;
        }
        r
    }

    /// a^e with e given as little-endian 64-bit limbs.
    pub fn pow_limbs(&self, a: Fe, e: &[u64]) -> Fe {
        let mut r = self.one();
        for &limb in e.iter().rev() {
            for bit in (0..64).rev() {
                r = self.sqr(r);
                if (limb >> bit) & 1 == 1 {
                    r = self.mul(r, a);
                }
            }
        }
        r
    }

    pub fn pow_big(&self, a: Fe, e: &BigUint) -> Fe {
        self.pow_limbs(a, &big_to_limbs(e))
    }

    /// One application of x -> x^p.
    pub fn frob1(&self, a: Fe) -> Fe {
        let n = self.n;
        if n == 1 {
            return a;
        }
        let p = self.p as u64;
        let mut t = [0u64; MAX_DEGREE];
        for i in 0..n {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            let f = &self.frob[i];
            for j in 0..n {
                t[j] += ai * f.0[j] as u64;
            }
            if i % 16 == 15 {
                for x in t.iter_mut().take(n) {
                    *x %= p;
                }
            }
        }
        let mut c = [0u16; MAX_DEGREE];
        for j in 0..n {
            c[j] = (t[j] % p) as u16;
        }
        Fe(c)
    }

    /// a^{p^e}.
    pub fn frobenius(&self, a: Fe, e: usize) -> Fe {
        let mut r = a;
        for _ in 0..(e % self.n) {
            r = self.frob1(r);
        }
        r
    }

    /// Membership in the subfield F_{p^d}.
    pub fn in_subfield(&self, a: Fe, d: usize) -> bool {
        self.frobenius(a, d) == a
    }

    /// Product of conjugates sigma(a) ... sigma^{n-1}(a).
    fn conj_product(&self, a: Fe) -> Fe {
        let mut r = self.one();
        let mut c = a;
        for _ in 1..self.n {
            c = self.frob1(c);
            r = self.mul(r, c);
        }
        r
    }

    /// Norm down to F_p, as an integer in [0, p).
    pub fn norm(&self, a: Fe) -> u32 {
        if self.n == 1 {
            return a.0[0] as u32;
        }
        self.mul(a, self.conj_product(a)).0[0] as u32
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let p = self.p as u64;
        if self.n == 1 {
            return Some(self.from_u64(fp_inv(a.0[0] as u64, p)));
        }
        let r = self.conj_product(a);
        let nrm = self.mul(a, r).0[0] as u64;
        Some(self.mul_int(r, fp_inv(nrm, p) as i64))
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn chi(&self, a: Fe) -> i32 {
        if a.is_zero() {
            return 0;
        }
        let p = self.p as u64;
        let nrm = self.norm(a) as u64;
        if pow_mod(nrm, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.chi(a) >= 0
    }

    /// A square root in this field, canonical (the smaller of r and -r).
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let sd = &self.sqrt;
        let mut x = self.pow_limbs(a, &sd.t_plus_1_half);
        let mut b = self.pow_limbs(a, &sd.t);
        let mut c = sd.c;
        let mut m = sd.s;
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut b2 = b;
            while b2 != one {
                b2 = self.sqr(b2);
                i += 1;
            }
            let mut w = c;
            for _ in 0..(m - i - 1) {
                w = self.sqr(w);
            }
            x = self.mul(x, w);
            c = self.sqr(w);
            b = self.mul(b, c);
            m = i;
        }
        let nx = self.neg(x);
        Some(if nx < x { nx } else { x })
    }

    /// Both square roots (one when a = 0), sorted.
    pub fn sqrt_all(&self, a: Fe) -> Vec<Fe> {
        match self.sqrt(a) {
            None => vec![],
            Some(r) if r.is_zero() => vec![r],
            Some(r) => {
                let mut v = vec![r, self.neg(r)];
                v.sort();
                v
            }
        }
    }

    /// Text encoding "c0+c1*u+c2*u^2", zero terms omitted.
    pub fn encode(&self, a: Fe) -> String {
        let mut terms = vec![];
        for i in 0..self.n {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*u"),
                _ => format!("{c}*u^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parse the text encoding; accepts terms in any order and bare "u".
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let bad = || Error::Parse(format!("bad field element '{s}'"));
        let mut c = [0u64; MAX_DEGREE];
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        for term in s.split('+') {
            let term = term.trim();
            let (coef, exp) = if let Some((a, b)) = term.split_once('*') {
                (a.trim().parse::<u64>().map_err(|_| bad())?, parse_power(b.trim()).ok_or_else(bad)?)
            } else if term.starts_with('u') {
                (1, parse_power(term).ok_or_else(bad)?)
            } else {
                (term.parse::<u64>().map_err(|_| bad())?, 0)
            };
            if exp >= self.n {
                return Err(bad());
            }
            c[exp] = (c[exp] + coef) % self.p as u64;
        }
        self.from_coeffs(&c[..self.n])
    }
}

fn parse_power(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('u')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

/// Embedding of a subfield into a larger field, u_src mapped to the
/// smallest root of the source modulus.
pub struct Embedding {
    src: FieldCtx,
    dst: FieldCtx,
    /// Images of u_src^i.
    basis: Vec<Fe>,
    /// Pivot rows for projection: (row index in dst coordinates, elimination data).
    proj: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

type EmbedCache = Mutex<HashMap<(u32, usize, usize), Arc<Embedding>>>;

fn embed_cache() -> &'static EmbedCache {
    static CACHE: OnceLock<EmbedCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The embedding F_{p^{deg src}} -> F_{p^{deg dst}}; requires divisibility of degrees.
pub fn embedding(src: &FieldCtx, dst: &FieldCtx) -> Result<Arc<Embedding>> {
    if src.p != dst.p || !dst.n.is_multiple_of(src.n) {
        return Err(Error::FieldMismatch(format!("cannot embed {src:?} into {dst:?}")));
    }
    let key = (src.p, src.level, dst.level);
    if let Some(e) = embed_cache().lock().expect("embed cache poisoned").get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(Embedding::build(src.clone(), dst.clone()));
    embed_cache().lock().expect("embed cache poisoned").insert(key, e.clone());
    Ok(e)
}

impl Embedding {
    fn build(src: FieldCtx, dst: FieldCtx) -> Embedding {
        let image_of_u = if src.n == 1 {
            dst.one()
        } else {
            let mut g: Vec<Fe> = src.modulus.iter().map(|&c| dst.from_u64(c as u64)).collect();
            g.push(dst.one());
            let g = crate::polynomials::Poly::from_coeffs(&dst, g);
            let roots = crate::polynomials::roots_in(&dst, &g);
            roots[0].0
        };
        let mut basis = Vec::with_capacity(src.n);
        let mut acc = dst.one();
        for _ in 0..src.n {
            basis.push(acc);
            acc = dst.mul(acc, image_of_u);
        }
        // matrix rows: dst coordinate r, columns: src coordinate i
        let p = dst.p as u64;
        let rows: Vec<Vec<u64>> = (0..dst.n).map(|r| basis.iter().map(|b| b.0[r] as u64).collect()).collect();
        // choose pivot rows giving an invertible square submatrix, store its inverse
        let mut pivots = vec![];
        let mut sel: Vec<Vec<u64>> = vec![];
        for (r, row) in rows.iter().enumerate() {
            let mut trial = sel.clone();
            trial.push(row.clone());
            if rank_mod(&trial, p) == trial.len() {
                sel = trial;
                pivots.push(r);
                if sel.len() == src.n {
                    break;
                }
            }
        }
        let proj = invert_mod(&sel, p).expect("embedding matrix has full rank");
        Embedding { src, dst, basis, proj, pivots }
    }

    pub fn src(&self) -> &FieldCtx {
        &self.src
    }
    pub fn dst(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn embed(&self, a: Fe) -> Fe {
        let mut r = Fe::ZERO;
        for i in 0..self.src.n {
            if a.0[i] != 0 {
                r = self.dst.add(r, self.dst.mul_int(self.basis[i], a.0[i] as i64));
            }
        }
        r
    }

    /// Preimage of b, if b lies in the image.
    pub fn project(&self, b: Fe) -> Option<Fe> {
        let p = self.dst.p as u64;
        let n = self.src.n;
        let mut c = [0u16; MAX_DEGREE];
        for i in 0..n {
            let mut s = 0u64;
            for (k, &r) in self.pivots.iter().enumerate() {
                s = (s + self.proj[i][k] * b.0[r] as u64) % p;
            }
            c[i] = s as u16;
        }
        let a = Fe(c);
        if self.embed(a) == b {
            Some(a)
        } else {
            None
        }
    }
}

fn rank_mod(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_multiple_of(p)) else { continue };
        a.swap(rank, piv);
        let inv = fp_inv(a[rank][col], p);
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col] * inv % p;
                for c in 0..cols {
                    a[r][c] = (a[r][c] + p * p - f * a[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn invert_mod(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_multiple_of(p))?;
        a.swap(col, piv);
        let inv = fp_inv(a[col][col], p);
        for c in 0..2 * n {
            a[col][c] = a[col][c] * inv % p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    a[r][c] = (a[r][c] + p * p - f * a[col][c] % p) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Square roots of a: in its own field when a is a square, otherwise in the
/// field of level max(1, 2 * level).
pub fn sqrt_any(k: &FieldCtx, a: Fe) -> Result<(FieldCtx, Vec<Fe>)> {
    if k.is_square(a) {
        return Ok((k.clone(), k.sqrt_all(a)));
    }
    let up = make_field(k.p as u64, (2 * k.level).max(1))?;
    let e = embedding(k, &up)?;
    let roots = up.sqrt_all(e.embed(a));
    Ok((up, roots))
}

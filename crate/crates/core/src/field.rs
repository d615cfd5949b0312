//! Finite fields `F_{p^e}` with elements encoded as their index in the
//! canonical element order.
//!
//! An element `c_0 + c_1 g + ... + c_{e-1} g^{e-1}` (with `g` a root of the
//! modulus) is stored as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`.
//! That integer is both the raw representation used by all arithmetic
//! routines and the element's position in [`FieldSpec::elements`], so
//! comparing raw values compares elements in the deterministic order used
//! for canonical point and line representatives.
//!
//! Field contexts are interned: asking twice for the same `(p, e, modulus)`
//! yields the same shared context, so the embedding cache is shared too.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::upoly;

/// Largest supported extension degree over the prime field.
pub const MAX_EXTENSION_DEGREE: u32 = 12;

const MUL_TABLE_MAX: u64 = 1 << 20;
const ADD_TABLE_MAX: u64 = 1 << 10;
const MAX_CHARACTERISTIC: u64 = 1 << 31;

type FieldKey = (u64, u32, Vec<u64>);

struct Inner {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus, constant term first, length `e + 1`.
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u32>,
    /// Powers of the chosen root of a subfield's modulus, keyed by subfield.
    embeddings: RwLock<HashMap<FieldKey, Arc<Vec<u64>>>>,
}

/// Arithmetic context for `F_{p^e}`.
///
/// Cheap to clone; immutable after construction apart from the internal
/// embedding cache, which is lock-guarded.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.e > 1 {
            write!(f, "[{:?}]", self.0.modulus)?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.e)
        }
    }
}

fn registry() -> &'static Mutex<HashMap<FieldKey, FieldSpec>> {
    static REGISTRY: OnceLock<Mutex<HashMap<FieldKey, FieldSpec>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Builds (or fetches) the field `F_{p^e}`.
///
/// Without an explicit modulus, the monic irreducible polynomial of degree
/// `e` whose coefficient sequence `(c_0, ..., c_{e-1})` is lexicographically
/// smallest is used. An explicit modulus is given constant term first and
/// must include the leading 1.
pub fn make_field(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    if e == 0 || e > MAX_EXTENSION_DEGREE {
        return Err(Error::DegreeTooLarge(e));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(Error::FieldTooLarge { p, e });
    }
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    let q = p
        .checked_pow(e)
        .filter(|q| *q < (1u64 << 62))
        .ok_or(Error::FieldTooLarge { p, e })?;

    let modulus = match modulus {
        Some(m) => {
            if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|c| *c >= p) {
                return Err(Error::InvalidModulus { expected: e });
            }
            if e > 1 && !is_irreducible(p, m)? {
                return Err(Error::ReducibleModulus { p });
            }
            m.to_vec()
        }
        None => default_modulus(p, e)?,
    };

    let key = (p, e, modulus.clone());
    if let Some(f) = registry().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let field = FieldSpec(Arc::new(build_inner(p, e, q, modulus)));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry(key).or_insert(field).clone())
}

/// Parses a field literal `"p"` or `"p^e"`.
pub fn parse_field_literal(text: &str) -> Result<FieldSpec> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("bad field literal {text:?}"));
    let (p, e) = match text.split_once('^') {
        Some((p, e)) => (
            p.trim().parse::<u64>().map_err(|_| bad())?,
            e.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => (text.parse::<u64>().map_err(|_| bad())?, 1),
    };
    make_field(p, e, None)
}

fn prime_field_unchecked(p: u64) -> FieldSpec {
    make_field(p, 1, None).expect("prime field")
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
fn is_irreducible(p: u64, modulus: &[u64]) -> Result<bool> {
    let fp = prime_field_unchecked(p);
    let e = modulus.len() - 1;
    if e <= 1 {
        return Ok(true);
    }
    let x = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![x.clone()];
    for i in 1..=e {
        let prev = &frob[i - 1];
        frob.push(upoly::pow_mod(&fp, prev, p, modulus));
    }
    if upoly::sub(&fp, &frob[e], &x) != Vec::<u64>::new() {
        return Ok(false);
    }
    for r in prime_factors(e as u64) {
        let h = upoly::sub(&fp, &frob[e / r as usize], &x);
        let g = upoly::gcd(&fp, &h, modulus);
        if g.len() > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn default_modulus(p: u64, e: u32) -> Result<Vec<u64>> {
    if e == 1 {
        return Ok(vec![0, 1]);
    }
    let count = p.pow(e);
    for idx in 0..count {
        // c_0 is the most significant digit of the lexicographic index.
        let mut m = vec![0u64; e as usize + 1];
        let mut rest = idx;
        for i in (0..e as usize).rev() {
            m[i] = rest % p;
            rest /= p;
        }
        m[e as usize] = 1;
        if m[0] == 0 {
            continue;
        }
        if is_irreducible(p, &m)? {
            return Ok(m);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_inner(p: u64, e: u32, q: u64, modulus: Vec<u64>) -> Inner {
    let pow_p = (0..=e).map(|i| p.pow(i)).collect();
    let mut inner = Inner {
        p,
        e,
        q,
        modulus,
        pow_p,
        log: Vec::new(),
        exp: Vec::new(),
        add: Vec::new(),
        neg: Vec::new(),
        embeddings: RwLock::new(HashMap::new()),
    };
    if e > 1 && q <= MUL_TABLE_MAX {
        let neg: Vec<u32> = (0..q).map(|a| inner.neg_digits(a) as u32).collect();
        let factors = prime_factors(q - 1);
        let generator = (2..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|r| inner.pow_generic(g, (q - 1) / r) != 1)
            })
            .expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp[i] = x as u32;
            exp[i + n] = x as u32;
            log[x as usize] = i as u32;
            x = inner.mul_generic(x, generator);
        }
        inner.neg = neg;
        inner.exp = exp;
        inner.log = log;
        if q <= ADD_TABLE_MAX {
            let mut add = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = inner.add_digits(a, b) as u16;
                }
            }
            inner.add = add;
        }
    }
    inner
}

impl Inner {
    fn digits(&self, mut a: u64, out: &mut [u64; 12]) {
        for d in out.iter_mut().take(self.e as usize) {
            *d = a % self.p;
            a /= self.p;
        }
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter()
            .take(self.e as usize)
            .zip(&self.pow_p)
            .map(|(c, w)| c * w)
            .sum()
    }

    fn add_digits(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.e as usize {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, mut a: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.e as usize {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * self.pow_p[i];
            a /= self.p;
        }
        out
    }

    fn mul_generic(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let e = self.e as usize;
        let (mut da, mut db) = ([0u64; 12], [0u64; 12]);
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 24];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                let sub = c * self.modulus[i] % p;
                prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
            }
        }
        self.undigits(&prod[..e])
    }

    fn pow_generic(&self, mut a: u64, mut n: u64) -> u64 {
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_generic(acc, a);
            }
            a = self.mul_generic(a, a);
            n >>= 1;
        }
        acc
    }
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// `F_{q^k}` built with its default modulus.
    pub fn extension(&self, k: u32) -> Result<FieldSpec> {
        if k == 1 {
            return Ok(self.clone());
        }
        make_field(self.0.p, self.0.e * k, None)
    }

    pub fn element(&self, raw: u64) -> FieldElement {
        assert!(raw < self.0.q, "raw element {raw} out of range");
        FieldElement {
            spec: self.clone(),
            value: raw,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    /// All `q` elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |v| self.element(v))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let f = &*self.0;
        if f.e == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if !f.add.is_empty() {
            f.add[(a * f.q + b) as usize] as u64
        } else {
            f.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let f = &*self.0;
        if f.e == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else if !f.neg.is_empty() {
            f.neg[a as usize] as u64
        } else {
            f.neg_digits(a)
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &*self.0;
        if f.e == 1 {
            a * b % f.p
        } else if a == 0 || b == 0 {
            0
        } else if !f.log.is_empty() {
            f.exp[(f.log[a as usize] + f.log[b as usize]) as usize] as u64
        } else {
            f.mul_generic(a, b)
        }
    }

    pub fn pow(&self, mut a: u64, mut n: u64) -> u64 {
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, a);
            }
            n >>= 1;
            if n > 0 {
                a = self.mul(a, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        if !f.log.is_empty() {
            let n = (f.q - 1) as usize;
            Some(f.exp[(n - f.log[a as usize] as usize) % n] as u64)
        } else {
            Some(self.pow(a, f.q - 2))
        }
    }

    /// Multiplies `a` by the prime-field integer `n`.
    pub fn mul_int(&self, a: u64, n: u64) -> u64 {
        self.mul(a, n % self.0.p)
    }

    /// Degree `a` with `base = p^a` dividing this field's degree, if any.
    pub fn subfield_degree(&self, base: u64) -> Option<u32> {
        (1..=self.0.e)
            .filter(|a| self.0.e.is_multiple_of(*a))
            .find(|a| self.0.p.pow(*a) == base)
    }

    /// `x^base`, where `base` is the order of a subfield.
    pub fn frobenius_raw(&self, x: u64, base: u64) -> Result<u64> {
        if self.subfield_degree(base).is_none() {
            return Err(Error::NotAPowerOfBase {
                field: self.0.q,
                base,
            });
        }
        Ok(self.pow(x, base))
    }

    /// The subfield basis images `r^0, ..., r^{a-1}` where `r` is the
    /// smallest root of `from`'s modulus in this field.
    fn embedding_into_self(&self, from: &FieldSpec) -> Result<Arc<Vec<u64>>> {
        if from.0.p != self.0.p || !self.0.e.is_multiple_of(from.0.e) {
            return Err(Error::NoEmbedding {
                from: from.0.q,
                into: self.0.q,
            });
        }
        let key = (from.0.p, from.0.e, from.0.modulus.clone());
        if let Some(hit) = self.0.embeddings.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let powers = if from.0.e == 1 {
            vec![1]
        } else {
            let modulus = &from.0.modulus;
            let root = (0..self.0.q)
                .find(|&r| {
                    let mut acc = 0u64;
                    for c in modulus.iter().rev() {
                        acc = self.add(self.mul(acc, r), *c);
                    }
                    acc == 0
                })
                .expect("a field contains every subfield");
            let mut powers = Vec::with_capacity(from.0.e as usize);
            let mut x = 1;
            for _ in 0..from.0.e {
                powers.push(x);
                x = self.mul(x, root);
            }
            powers
        };
        let powers = Arc::new(powers);
        self.0
            .embeddings
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| powers.clone());
        Ok(powers)
    }

    /// Returns a map sending raw elements of `from` to raw elements of `self`.
    pub fn embedding_from(&self, from: &FieldSpec) -> Result<Embedding> {
        let powers = self.embedding_into_self(from)?;
        Ok(Embedding {
            from: from.clone(),
            into: self.clone(),
            powers,
        })
    }

    /// Formats a raw element with the literal syntax `(c0+c1*g+...)`.
    pub fn format_raw(&self, a: u64) -> String {
        if a < self.0.p {
            return a.to_string();
        }
        let mut d = [0u64; 12];
        self.0.digits(a, &mut d);
        let mut parts = Vec::new();
        for (i, c) in d.iter().enumerate().take(self.0.e as usize) {
            if *c == 0 {
                continue;
            }
            let g = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (i, *c) {
                (0, c) => c.to_string(),
                (_, 1) => g,
                (_, c) => format!("{c}*{g}"),
            });
        }
        format!("({})", parts.join("+"))
    }

    /// Parses an element literal: an integer in `[0, p)` (optionally
    /// negated), or a parenthesised combination of powers of `g`.
    pub fn parse_raw(&self, text: &str) -> Result<u64> {
        let t = text.trim();
        let out_of_field = || Error::CoefficientOutOfField(t.to_string());
        if let Some(rest) = t.strip_prefix('-') {
            return Ok(self.neg(self.parse_raw(rest)?));
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let mut digits = [0u64; 12];
            let mut chunk = String::new();
            let mut terms = Vec::new();
            for ch in inner.chars().filter(|c| !c.is_whitespace()) {
                if (ch == '+' || ch == '-') && !chunk.is_empty() {
                    terms.push(std::mem::take(&mut chunk));
                }
                chunk.push(ch);
            }
            if !chunk.is_empty() {
                terms.push(chunk);
            }
            if terms.is_empty() {
                return Err(out_of_field());
            }
            for term in terms {
                let (negative, body) = match term.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, term.strip_prefix('+').unwrap_or(&term)),
                };
                let (coef, power) = match body.split_once('*') {
                    Some((c, g)) => (c.parse::<u64>().map_err(|_| out_of_field())?, parse_g(g)),
                    None if body.starts_with('g') => (1, parse_g(body)),
                    None => (body.parse::<u64>().map_err(|_| out_of_field())?, Some(0)),
                };
                let power = power.ok_or_else(out_of_field)?;
                if coef >= self.0.p || power >= self.0.e as usize {
                    return Err(out_of_field());
                }
                let c = if negative {
                    (self.0.p - coef) % self.0.p
                } else {
                    coef
                };
                digits[power] = (digits[power] + c) % self.0.p;
            }
            return Ok(self.0.undigits(&digits));
        }
        let n = t.parse::<u64>().map_err(|_| out_of_field())?;
        if n >= self.0.p {
            return Err(out_of_field());
        }
        Ok(n)
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        Ok(self.element(self.parse_raw(text)?))
    }
}

fn parse_g(text: &str) -> Option<usize> {
    let rest = text.strip_prefix('g')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

/// A fixed ring embedding `F_{p^a} -> F_{p^b}`.
#[derive(Clone)]
pub struct Embedding {
    from: FieldSpec,
    into: FieldSpec,
    powers: Arc<Vec<u64>>,
}

impl Embedding {
    pub fn source(&self) -> &FieldSpec {
        &self.from
    }

    pub fn target(&self) -> &FieldSpec {
        &self.into
    }

    pub fn apply(&self, mut x: u64) -> u64 {
        let p = self.from.0.p;
        let mut acc = 0u64;
        for r in self.powers.iter() {
            let c = x % p;
            x /= p;
            if c != 0 {
                acc = self.into.add(acc, self.into.mul_int(*r, c));
            }
        }
        acc
    }
}

/// An element together with its field.
///
/// The operator impls panic when the operands live in different fields; the
/// `checked_*` methods report [`Error::FieldMismatch`] instead.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u64,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Index of the element in the canonical order.
    pub fn raw(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.spec.element(self.spec.add(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.spec.element(self.spec.sub(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.spec.element(self.spec.mul(self.value, other.value)))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.spec.inv(self.value).map(|v| self.spec.element(v))
    }

    pub fn pow(&self, n: u64) -> Self {
        self.spec.element(self.spec.pow(self.value, n))
    }

    /// `x^base` where `base` is the order of a subfield (the `base`-power
    /// Frobenius).
    pub fn frobenius(&self, base: u64) -> Result<Self> {
        Ok(self
            .spec
            .element(self.spec.frobenius_raw(self.value, base)?))
    }

    pub fn embed(&self, into: &FieldSpec) -> Result<Self> {
        let emb = into.embedding_from(&self.spec)?;
        Ok(into.element(emb.apply(self.value)))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
        impl std::ops::$tr for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.spec.element(self.spec.neg(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_raw(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_raw(self.value))
    }
}

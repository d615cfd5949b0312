//! Sparse multivariate polynomials over a finite field.

mod binary;
mod hessian;
mod monomial;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use binary::{BinaryForm, P1Point, Restrictor, Squarefreeness};
pub use monomial::{Monomial, MAX_VARS};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A polynomial in `nvars` variables, stored as a map from monomials to
/// nonzero raw coefficients, ascending in grevlex order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Polynomial {
    pub fn zero(field: &FieldSpec, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Self {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldSpec, nvars: usize, c: u64) -> Self {
        Self::from_terms(field, nvars, [(Monomial::one(), c)])
    }

    pub fn variable(field: &FieldSpec, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::from_terms(field, nvars, [(Monomial::variable(i), 1)])
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(
        field: &FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Self {
        let mut out = Self::zero(field, nvars);
        for (m, c) in terms {
            debug_assert!(m.exponents()[nvars..].iter().all(|e| *e == 0));
            out.add_term(m, c);
        }
        out
    }

    pub fn parse(text: &str, field: &FieldSpec, nvars: usize) -> Result<Self> {
        parse::parse_polynomial(text, field, nvars)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u64)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(Monomial, u64)> {
        self.terms.last_key_value().map(|(m, c)| (*m, *c))
    }

    /// Highest total degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last_key_value().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, self.field.neg(*c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(*ma * *mb, f.mul(*ca, *cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = &self.field;
        Self::from_terms(
            f,
            self.nvars,
            self.terms.iter().map(|(m, x)| (*m, f.mul(*x, c))),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Self {
        let f = &self.field;
        Self::from_terms(
            f,
            self.nvars,
            self.terms.iter().map(|(t, x)| (*t * *m, f.mul(*x, c))),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.nvars, 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `X_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let f = &self.field;
        Ok(Self::from_terms(
            f,
            self.nvars,
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(i) > 0)
                .map(|(m, c)| {
                    let e = m.exponent(i);
                    (m.with_exponent(i, e - 1), f.mul_int(*c, e as u64))
                }),
        ))
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Replaces every `X_i` by `X_i^(q^n)`, `q` the order of the
    /// coefficient field. Coefficients are unchanged.
    pub fn frobenius_substitute(&self, n: u32) -> Self {
        let k = self.field.order().pow(n);
        let k = u32::try_from(k).expect("Frobenius power too large");
        Self {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.scaled(k), *c)).collect(),
        }
    }

    /// `sum_i X_i * dF/dX_i`, which equals `(d mod p) F` for homogeneous `F`.
    pub fn euler_combination(&self) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        for i in 0..self.nvars {
            let xi = Monomial::variable(i);
            for (m, c) in self.partial_derivative(i).unwrap().terms {
                out.add_term(m * xi, c);
            }
        }
        out
    }

    /// Maps the coefficients into an extension field.
    pub fn embed(&self, into: &FieldSpec) -> Result<Self> {
        if *into == self.field {
            return Ok(self.clone());
        }
        let emb = into.embedding_from(&self.field)?;
        Ok(Self::from_terms(
            into,
            self.nvars,
            self.terms.iter().map(|(m, c)| (*m, emb.apply(*c))),
        ))
    }

    /// Evaluates at raw coordinates in the polynomial's own field.
    pub fn eval_raw(&self, point: &[u64]) -> u64 {
        let f = &self.field;
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                let e = m.exponent(i);
                if e > 0 {
                    t = f.mul(t, f.pow(*x, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluates at a point whose coordinates lie in an extension of the
    /// coefficient field.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                point.len()
            )));
        }
        let target = point[0].spec().clone();
        if point.iter().any(|x| *x.spec() != target) {
            return Err(Error::FieldMismatch);
        }
        let g = self.embed(&target)?;
        let raw: Vec<u64> = point.iter().map(|x| x.raw()).collect();
        Ok(target.element(g.eval_raw(&raw)))
    }

    /// A precomputed form for repeated evaluation.
    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }

    /// Substitutes `X_i -> sum_j matrix[i][j] X_j`.
    pub fn substitute_linear(&self, matrix: &[Vec<u64>]) -> Result<Self> {
        if matrix.len() != self.nvars || matrix.iter().any(|r| r.len() != self.nvars) {
            return Err(Error::InvalidArgument("matrix shape".into()));
        }
        let f = &self.field;
        let images: Vec<Polynomial> = matrix
            .iter()
            .map(|row| {
                Self::from_terms(
                    f,
                    self.nvars,
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| (Monomial::variable(j), *c)),
                )
            })
            .collect();
        let max_exp: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, e)| {
                let mut v = vec![Self::constant(f, self.nvars, 1)];
                for k in 0..*e as usize {
                    let next = &v[k] * img;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(f, self.nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(f, self.nvars, *c);
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    t = &t * &pw[e];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Multivariate division by a single divisor under grevlex.
    ///
    /// Returns `(quotient, remainder)` with `self = quotient * divisor +
    /// remainder` and no remainder term divisible by the divisor's leading
    /// monomial.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_compatible(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::ZeroDivisor)?;
        let f = &self.field;
        let lc_inv = f.inv(lc).unwrap();
        let tail: Vec<(Monomial, u64)> = divisor
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (*m, *c))
            .collect();
        let mut work = self.terms.clone();
        let mut quotient = Self::zero(f, self.nvars);
        let mut remainder = Self::zero(f, self.nvars);
        while let Some((m, c)) = work.pop_last() {
            match lm.quotient_of(&m) {
                Some(shift) => {
                    let k = f.mul(c, lc_inv);
                    quotient.terms.insert(shift, k);
                    let negk = f.neg(k);
                    for (tm, tc) in &tail {
                        let key = *tm * shift;
                        let delta = f.mul(negk, *tc);
                        let entry = work.entry(key).or_insert(0);
                        *entry = f.add(*entry, delta);
                        if *entry == 0 {
                            work.remove(&key);
                        }
                    }
                }
                None => {
                    remainder.terms.insert(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    /// Whether `self` divides `other`: `other` reduces to zero modulo the
    /// principal ideal generated by `self`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if other.is_zero() {
            self.check_compatible(other)?;
            return Ok(true);
        }
        Ok(other.div_rem(self)?.1.is_zero())
    }

    /// Restriction to the line spanned by `a` and `b`: the binary form
    /// `F(s a + t b)`.
    pub fn restrict_to_line(&self, a: &[u64], b: &[u64]) -> Result<BinaryForm> {
        if a.len() != self.nvars || b.len() != self.nvars {
            return Err(Error::InvalidArgument("row length".into()));
        }
        if !independent(&self.field, a, b) {
            return Err(Error::DependentSpan);
        }
        Ok(Restrictor::new(self)?.restrict(a, b))
    }

    /// Determinant of the matrix of second partial derivatives.
    pub fn hessian_det(&self) -> Result<Self> {
        hessian::hessian_det(self)
    }
}

/// Whether two coordinate rows span a 2-dimensional space.
pub(crate) fn independent(f: &FieldSpec, a: &[u64], b: &[u64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])) != 0 {
                return true;
            }
        }
    }
    false
}

/// Term list with per-variable power tables for fast repeated evaluation.
#[derive(Clone)]
pub struct Evaluator {
    field: FieldSpec,
    nvars: usize,
    terms: Vec<(Monomial, u64)>,
    max_exp: Vec<u32>,
}

impl Evaluator {
    fn new(p: &Polynomial) -> Self {
        let max_exp = (0..p.nvars)
            .map(|i| p.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        Self {
            field: p.field.clone(),
            nvars: p.nvars,
            terms: p.terms.iter().map(|(m, c)| (*m, *c)).collect(),
            max_exp,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at raw coordinates, reusing `scratch` for power tables.
    pub fn eval(&self, point: &[u64], scratch: &mut Vec<u64>) -> u64 {
        let f = &self.field;
        scratch.clear();
        let mut offsets = [0usize; MAX_VARS];
        for i in 0..self.nvars {
            offsets[i] = scratch.len();
            let mut x = 1;
            for _ in 0..=self.max_exp[i] {
                scratch.push(x);
                x = f.mul(x, point[i]);
            }
        }
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..self.nvars {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    t = f.mul(t, scratch[offsets[i] + e]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("incompatible polynomials")
            }
        }
        impl std::ops::$tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$checked(&rhs).expect("incompatible polynomials")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.field.neg(1))
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: grevlex-descending terms joined by `" + "`, with
    /// coefficients printed as field literals and `1` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_one = *m == Monomial::one();
            if *c == 1 && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{}", self.field.format_raw(*c))?;
            } else {
                write!(f, "{}*{m}", self.field.format_raw(*c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {:?}", self.field)
    }
}

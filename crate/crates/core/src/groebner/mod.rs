//! Buchberger's algorithm under grevlex, sized for ideal-membership and
//! dimension questions on a handful of low-degree generators.
//!
//! Pairs are processed by the normal strategy (smallest lcm degree, ties by
//! pair index). A pair is skipped when its leading monomials are coprime, or
//! when a third element's leading monomial divides their lcm and both pairs
//! with that element are already treated.

mod smooth;

use std::collections::{BTreeMap, HashSet};

pub use smooth::{certify_smooth, certify_smooth_with, SmoothnessOptions, SmoothnessVerdict};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// Default bound on the degree of S-polynomials.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// A Groebner basis under grevlex.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    polys: Vec<Polynomial>,
    generators: Vec<Polynomial>,
    reduced: bool,
    complete: bool,
    nvars: usize,
}

/// Returned when an S-polynomial would exceed the degree cap.
#[derive(Clone, Debug)]
pub struct CapExceeded {
    pub cap: u32,
    pub degree: u32,
    /// The basis built so far (not a Groebner basis).
    pub partial: GroebnerBasis,
}

impl From<CapExceeded> for Error {
    fn from(e: CapExceeded) -> Self {
        Error::DegreeCapExceeded {
            cap: e.cap,
            degree: e.degree,
        }
    }
}

/// Projective dimension of a common zero set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveDimension {
    Empty,
    Dimension(u32),
    Inconclusive { degree: u32 },
}

impl ProjectiveDimension {
    /// `-1` for the empty set, `None` when inconclusive.
    pub fn value(&self) -> Option<i64> {
        match self {
            ProjectiveDimension::Empty => Some(-1),
            ProjectiveDimension::Dimension(d) => Some(*d as i64),
            ProjectiveDimension::Inconclusive { .. } => None,
        }
    }
}

fn monic(p: &Polynomial) -> Polynomial {
    let (_, lc) = p.leading_term().expect("nonzero");
    p.scale(p.field().inv(lc).unwrap())
}

fn lm(p: &Polynomial) -> Monomial {
    p.leading_term().expect("nonzero").0
}

/// Full reduction of `h` by monic `basis` elements.
fn reduce(h: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let f = h.field().clone();
    let leads: Vec<Monomial> = basis.iter().map(lm).collect();
    let tails: Vec<Vec<(Monomial, u64)>> = basis
        .iter()
        .map(|g| g.terms().skip(1).map(|(m, c)| (*m, *c)).collect())
        .collect();
    let mut work: BTreeMap<Monomial, u64> = h.terms().map(|(m, c)| (*m, *c)).collect();
    let mut remainder = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(k, l)| l.quotient_of(&m).map(|s| (k, s)));
        match hit {
            Some((k, shift)) => {
                let negc = f.neg(c);
                for (tm, tc) in &tails[k] {
                    let key = *tm * shift;
                    let delta = f.mul(negc, *tc);
                    let entry = work.entry(key).or_insert(0);
                    *entry = f.add(*entry, delta);
                    if *entry == 0 {
                        work.remove(&key);
                    }
                }
            }
            None => remainder.push((m, c)),
        }
    }
    Polynomial::from_terms(&f, h.nvars(), remainder)
}

fn s_polynomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (la, lb) = (lm(a), lm(b));
    let l = la.lcm(&lb);
    let ua = la.quotient_of(&l).unwrap();
    let ub = lb.quotient_of(&l).unwrap();
    let neg_one = a.field().neg(1);
    &a.mul_monomial(&ua, 1) + &b.mul_monomial(&ub, neg_one)
}

/// Computes the reduced Groebner basis of the ideal generated by
/// `generators`, refusing S-polynomials of degree above `degree_cap`.
pub fn buchberger(
    generators: &[Polynomial],
    degree_cap: u32,
) -> std::result::Result<GroebnerBasis, CapExceeded> {
    let nonzero: Vec<Polynomial> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .cloned()
        .collect();
    let nvars = generators.first().map(|g| g.nvars()).unwrap_or(0);
    let mut basis: Vec<Polynomial> = Vec::new();
    let fail = |degree: u32, basis: &[Polynomial]| CapExceeded {
        cap: degree_cap,
        degree,
        partial: GroebnerBasis {
            polys: basis.to_vec(),
            generators: nonzero.clone(),
            reduced: false,
            complete: false,
            nvars,
        },
    };
    for g in &nonzero {
        let d = g.degree().unwrap();
        if d > degree_cap {
            return Err(fail(d, &basis));
        }
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(monic(&r));
        }
    }
    // pending pairs keyed by (lcm degree, i, j)
    let mut pairs: BTreeMap<(u32, usize, usize), ()> = BTreeMap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((lm(&basis[i]).lcm(&lm(&basis[j])).degree(), i, j), ());
            pending.insert((i, j));
        }
    }
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut leads: Vec<Monomial> = basis.iter().map(lm).collect();
    while let Some(((deg, i, j), ())) = pairs.pop_first() {
        pending.remove(&(i, j));
        let (li, lj) = (leads[i], leads[j]);
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chained = (0..basis.len()).any(|m| {
            m != i
                && m != j
                && leads[m].divides(&l)
                && !pending.contains(&key(i, m))
                && !pending.contains(&key(j, m))
        });
        if chained {
            continue;
        }
        if deg > degree_cap {
            return Err(fail(deg, &basis));
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        let new = monic(&r);
        let ln = lm(&new);
        let k = basis.len();
        basis.push(new);
        leads.push(ln);
        for (a, la) in leads[..k].iter().enumerate() {
            pairs.insert((la.lcm(&ln).degree(), a, k), ());
            pending.insert((a, k));
        }
    }
    Ok(GroebnerBasis {
        polys: interreduce(basis),
        generators: nonzero,
        reduced: true,
        complete: true,
        nvars,
    })
}

fn interreduce(basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut sorted = basis;
    sorted.sort_by_key(lm);
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in sorted {
        let l = lm(&g);
        if !minimal.iter().any(|h| lm(h).divides(&l)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, g)| g.clone())
            .collect();
        out.push(monic(&reduce(&minimal[k], &others)));
    }
    out
}

impl GroebnerBasis {
    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(lm).collect()
    }

    /// Normal form of `h` modulo the basis.
    pub fn normal_form(&self, h: &Polynomial) -> Polynomial {
        reduce(h, &self.polys)
    }

    pub fn contains(&self, h: &Polynomial) -> Result<bool> {
        if !self.complete {
            return Err(Error::IncompleteBasis);
        }
        Ok(self.normal_form(h).is_zero())
    }

    /// Checks every S-polynomial reduces to zero and, for reduced bases,
    /// that leading coefficients are 1 and no leading monomial divides a
    /// term of another element.
    pub fn verify(&self) -> bool {
        for j in 0..self.polys.len() {
            for i in 0..j {
                if !reduce(&s_polynomial(&self.polys[i], &self.polys[j]), &self.polys).is_zero() {
                    return false;
                }
            }
        }
        if self.reduced {
            for (k, g) in self.polys.iter().enumerate() {
                if g.leading_term().unwrap().1 != 1 {
                    return false;
                }
                for (j, h) in self.polys.iter().enumerate() {
                    if j != k && h.terms().any(|(m, _)| lm(g).divides(m)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Krull dimension of `k[X] / LT(I)`: the size of the largest set of
    /// variables containing the support of no leading monomial. `-1` for
    /// the unit ideal.
    pub fn lt_ideal_dimension(&self) -> Result<i64> {
        if !self.complete {
            return Err(Error::IncompleteBasis);
        }
        Ok(dimension_of_monomial_ideal(
            &self.leading_monomials(),
            self.nvars,
        ))
    }

    /// Projective dimension of `V(I)` for a homogeneous ideal.
    pub fn projective_dimension(&self) -> Result<ProjectiveDimension> {
        let affine = self.lt_ideal_dimension()?;
        Ok(if affine <= 0 {
            ProjectiveDimension::Empty
        } else {
            ProjectiveDimension::Dimension((affine - 1) as u32)
        })
    }
}

/// Dimension of the monomial ideal generated by `leads` in `nvars`
/// variables, by subset enumeration.
pub fn dimension_of_monomial_ideal(leads: &[Monomial], nvars: usize) -> i64 {
    let supports: Vec<u32> = leads.iter().map(|m| m.support()).collect();
    let mut best = -1i64;
    for set in 0u32..(1 << nvars) {
        if supports.iter().all(|s| s & !set != 0) {
            best = best.max(set.count_ones() as i64);
        }
    }
    best
}

/// Projective dimension of the common zero set of homogeneous generators.
pub fn projective_dimension(generators: &[Polynomial], degree_cap: u32) -> ProjectiveDimension {
    if generators.iter().all(|g| g.is_zero()) {
        let n = generators.first().map(|g| g.nvars()).unwrap_or(1);
        return ProjectiveDimension::Dimension(n as u32 - 1);
    }
    match buchberger(generators, degree_cap) {
        Ok(gb) => gb.projective_dimension().expect("complete basis"),
        Err(e) => ProjectiveDimension::Inconclusive { degree: e.degree },
    }
}

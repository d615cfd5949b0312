//! Named surfaces and seeded random generators.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::groebner::{certify_smooth, SmoothnessVerdict};
use crate::poly::{Monomial, Polynomial};

fn var(field: &FieldSpec, i: usize) -> Polynomial {
    Polynomial::variable(field, 4, i)
}

/// `X_i^q X_j - X_i X_j^q`.
fn frobenius_minor(field: &FieldSpec, i: usize, j: usize) -> Polynomial {
    let q = field.order() as u32;
    let (xi, xj) = (var(field, i), var(field, j));
    &(&xi.pow(q) * &xj) - &(&xi * &xj.pow(q))
}

/// `X0^q X1 - X0 X1^q + X2^q X3 - X2 X3^q`, a smooth surface of degree
/// `q + 1` containing every rational point.
pub fn katz_surface(field: &FieldSpec) -> Polynomial {
    &frobenius_minor(field, 0, 1) + &frobenius_minor(field, 2, 3)
}

/// Pairs `(i, j)` in the order the six linear forms multiply
/// `X_i^q X_j - X_i X_j^q`.
pub const SPACEFILLING_PAIRS: [(usize, usize); 6] =
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `sum_k L_k (X_i^q X_j - X_i X_j^q)` over [`SPACEFILLING_PAIRS`]: degree
/// `q + 2` and space-filling whenever nonzero.
pub fn spacefilling_surface(field: &FieldSpec, forms: &[Polynomial; 6]) -> Result<Polynomial> {
    let mut out = Polynomial::zero(field, 4);
    for (form, (i, j)) in forms.iter().zip(SPACEFILLING_PAIRS) {
        if form.field() != field || form.nvars() != 4 {
            return Err(Error::FieldMismatch);
        }
        if !form.is_zero() && form.homogeneous_degree() != Some(1) {
            return Err(Error::InvalidArgument(format!(
                "{form} is not a linear form"
            )));
        }
        out = &out + &(form * &frobenius_minor(field, i, j));
    }
    if out.is_zero() {
        return Err(Error::ZeroSurface);
    }
    Ok(out)
}

/// `sum_i X_i^(p+1)` with `p` the characteristic.
pub fn fermat_surface(field: &FieldSpec) -> Polynomial {
    let e = field.characteristic() as u32 + 1;
    (0..4).fold(Polynomial::zero(field, 4), |acc, i| {
        &acc + &var(field, i).pow(e)
    })
}

/// `sum_i X_i T_i^p` for forms `T_i` of a common degree `r`. The surface is
/// smooth exactly when the `T_i` have no common zero.
pub fn nonreflexive_family(field: &FieldSpec, forms: &[Polynomial; 4]) -> Result<Polynomial> {
    let p = field.characteristic() as u32;
    let mut degree = None;
    let mut out = Polynomial::zero(field, 4);
    for (i, t) in forms.iter().enumerate() {
        if t.field() != field || t.nvars() != 4 {
            return Err(Error::FieldMismatch);
        }
        if t.is_zero() {
            continue;
        }
        let r = t.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if *degree.get_or_insert(r) != r {
            return Err(Error::InvalidArgument("forms must share one degree".into()));
        }
        out = &out + &(&var(field, i) * &t.pow(p));
    }
    if out.is_zero() {
        return Err(Error::ZeroSurface);
    }
    Ok(out)
}

/// Monomials of degree `d` in 4 variables, ascending in grevlex.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                out.push(Monomial::from_exponents(&[a, b, c, d - a - b - c]));
            }
        }
    }
    out.sort();
    out
}

/// A form of degree `d` with independent uniform coefficients.
pub fn random_form(field: &FieldSpec, d: u32, rng: &mut impl Rng) -> Polynomial {
    let terms: Vec<(Monomial, u64)> = monomials_of_degree(d)
        .into_iter()
        .map(|m| (m, rng.gen_range(0..field.order())))
        .collect();
    Polynomial::from_terms(field, 4, terms)
}

/// Draws random forms of degree `d` until one is certified smooth.
pub fn random_smooth_surface(
    field: &FieldSpec,
    d: u32,
    seed: u64,
    attempts: u32,
) -> Result<Polynomial> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let f = random_form(field, d, &mut rng);
        if !f.is_zero() && certify_smooth(&f).is_smooth() {
            return Ok(f);
        }
    }
    Err(Error::NoSmoothFound)
}

/// Verdict on one search candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateVerdict {
    ZeroSurface,
    Smooth,
    Singular,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundSurface {
    /// Position of the candidate in the seeded sequence.
    pub candidate: usize,
    pub surface: String,
    pub forms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub seed: u64,
    pub tried: usize,
    pub found: Vec<FoundSurface>,
    pub verdicts: Vec<CandidateVerdict>,
    pub elapsed_ms: u64,
}

/// Certifies one member of the space-filling family.
pub fn evaluate_candidate(
    field: &FieldSpec,
    forms: &[Polynomial; 6],
) -> (CandidateVerdict, Option<Polynomial>) {
    match spacefilling_surface(field, forms) {
        Err(_) => (CandidateVerdict::ZeroSurface, None),
        Ok(f) => {
            let verdict = match certify_smooth(&f) {
                SmoothnessVerdict::Smooth => CandidateVerdict::Smooth,
                SmoothnessVerdict::Singular { .. } => CandidateVerdict::Singular,
                SmoothnessVerdict::Inconclusive { .. } => CandidateVerdict::Inconclusive,
            };
            (verdict, Some(f))
        }
    }
}

/// The first `count` seeded 6-tuples of linear forms with uniform
/// coefficients.
pub fn spacefilling_candidates(field: &FieldSpec, count: usize, seed: u64) -> Vec<[Polynomial; 6]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| random_form(field, 1, &mut rng)))
        .collect()
}

/// Searches the space-filling family for smooth members. Candidates are
/// certified in parallel but reported in seed order.
pub fn search_smooth_spacefilling(field: &FieldSpec, budget: usize, seed: u64) -> SearchOutcome {
    let started = Instant::now();
    let candidates = spacefilling_candidates(field, budget, seed);
    let results: Vec<(CandidateVerdict, Option<Polynomial>)> = candidates
        .par_iter()
        .map(|forms| evaluate_candidate(field, forms))
        .collect();
    let mut found = Vec::new();
    let mut verdicts = Vec::with_capacity(results.len());
    for (k, (verdict, poly)) in results.into_iter().enumerate() {
        if verdict == CandidateVerdict::Smooth {
            found.push(FoundSurface {
                candidate: k,
                surface: poly.unwrap().to_string(),
                forms: candidates[k].iter().map(|l| l.to_string()).collect(),
            });
        }
        verdicts.push(verdict);
    }
    SearchOutcome {
        seed,
        tried: budget,
        found,
        verdicts,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

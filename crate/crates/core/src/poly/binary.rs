use super::{Monomial, Polynomial, MAX_VARS};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::upoly;

/// A binary form `g(s, t) = sum_i c_i s^(d-i) t^i` of formal degree `d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

/// A point `[s : t]` of the projective line, normalized so the first
/// nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct P1Point {
    pub s: u64,
    pub t: u64,
}

impl P1Point {
    /// The `q + 1` rational points in canonical order: `[1:a]` for every
    /// `a` in element order, then `[0:1]`.
    pub fn all(field: &FieldSpec) -> impl Iterator<Item = P1Point> {
        (0..field.order())
            .map(|t| P1Point { s: 1, t })
            .chain(std::iter::once(P1Point { s: 0, t: 1 }))
    }
}

/// Outcome of the squarefreeness test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Squarefreeness {
    pub squarefree: bool,
    /// Root multiplicity at `[0:1]`, i.e. `d - deg g(1, t)`.
    pub multiplicity_at_infinity: usize,
}

impl BinaryForm {
    pub fn new(field: &FieldSpec, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has d + 1 coefficients");
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    pub fn eval(&self, s: u64, t: u64) -> u64 {
        let f = &self.field;
        let d = self.degree() as u64;
        self.coeffs.iter().enumerate().fold(0, |acc, (i, c)| {
            let i = i as u64;
            f.add(acc, f.mul(*c, f.mul(f.pow(s, d - i), f.pow(t, i))))
        })
    }

    /// `u(t) = g(1, t)`, trimmed.
    pub fn dehomogenize(&self) -> Vec<u64> {
        upoly::trim(self.coeffs.clone())
    }

    /// Whether `g` has `d` distinct roots over the algebraic closure.
    pub fn squarefree(&self) -> Result<Squarefreeness> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = &self.field;
        let u = self.dehomogenize();
        let deg_u = u.len() - 1;
        let at_infinity = self.degree() - deg_u;
        let g = upoly::gcd(f, &u, &upoly::derivative(f, &u));
        Ok(Squarefreeness {
            squarefree: at_infinity <= 1 && g.len() == 1,
            multiplicity_at_infinity: at_infinity,
        })
    }

    /// Root multiplicity at every rational point of the projective line,
    /// in canonical point order.
    pub fn rational_multiplicities(&self) -> Result<Vec<(P1Point, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = &self.field;
        let u = self.dehomogenize();
        let at_infinity = self.degree() - (u.len() - 1);
        Ok(P1Point::all(f)
            .map(|pt| {
                let mult = if pt.s == 0 {
                    at_infinity
                } else {
                    root_multiplicity(f, &u, pt.t)
                };
                (pt, mult)
            })
            .collect())
    }
}

/// Number of times `(t - a)` divides the nonzero `u`, by repeated synthetic
/// division.
pub(crate) fn root_multiplicity(f: &FieldSpec, u: &[u64], a: u64) -> usize {
    let mut cur = u.to_vec();
    let mut mult = 0;
    while cur.len() > 1 {
        // synthetic division: quotient coefficients from the top down
        let n = cur.len() - 1;
        let mut quot = vec![0u64; n];
        let mut carry = 0u64;
        for k in (0..=n).rev() {
            let v = f.add(cur[k], f.mul(carry, a));
            if k == 0 {
                carry = v;
            } else {
                quot[k - 1] = v;
                carry = v;
            }
        }
        if carry != 0 {
            break;
        }
        mult += 1;
        cur = quot;
    }
    mult
}

/// Reusable restriction of a homogeneous polynomial to lines.
#[derive(Clone)]
pub struct Restrictor {
    field: FieldSpec,
    nvars: usize,
    degree: usize,
    terms: Vec<(Monomial, u64)>,
    max_exp: [u32; MAX_VARS],
}

impl Restrictor {
    pub fn new(p: &Polynomial) -> Result<Self> {
        let degree = if p.is_zero() {
            0
        } else {
            p.homogeneous_degree().ok_or(Error::NotHomogeneous)? as usize
        };
        let mut max_exp = [0u32; MAX_VARS];
        for m in p.terms.keys() {
            for (i, e) in max_exp.iter_mut().enumerate() {
                *e = (*e).max(m.exponent(i));
            }
        }
        Ok(Self {
            field: p.field.clone(),
            nvars: p.nvars,
            degree,
            terms: p.terms.iter().map(|(m, c)| (*m, *c)).collect(),
            max_exp,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `F(s a + t b)`.
    pub fn restrict(&self, a: &[u64], b: &[u64]) -> BinaryForm {
        let f = &self.field;
        // powers[i][k] = (a_i s + b_i t)^k, flattened per variable
        let mut powers: Vec<Vec<Vec<u64>>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut v = vec![vec![1u64]];
            for k in 0..self.max_exp[i] as usize {
                let prev = &v[k];
                let mut next = vec![0u64; prev.len() + 1];
                for (j, c) in prev.iter().enumerate() {
                    next[j] = f.add(next[j], f.mul(*c, a[i]));
                    next[j + 1] = f.add(next[j + 1], f.mul(*c, b[i]));
                }
                v.push(next);
            }
            powers.push(v);
        }
        let mut out = vec![0u64; self.degree + 1];
        let mut prod: Vec<u64> = Vec::with_capacity(self.degree + 1);
        let mut tmp: Vec<u64> = Vec::with_capacity(self.degree + 1);
        for (m, c) in &self.terms {
            prod.clear();
            prod.push(*c);
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                let factor = &pw[e];
                if factor.iter().all(|x| *x == 0) {
                    prod.clear();
                    break;
                }
                tmp.clear();
                tmp.resize(prod.len() + factor.len() - 1, 0);
                for (j, x) in prod.iter().enumerate() {
                    if *x == 0 {
                        continue;
                    }
                    for (k, y) in factor.iter().enumerate() {
                        if *y != 0 {
                            tmp[j + k] = f.add(tmp[j + k], f.mul(*x, *y));
                        }
                    }
                }
                std::mem::swap(&mut prod, &mut tmp);
            }
            for (j, x) in prod.iter().enumerate() {
                out[j] = f.add(out[j], *x);
            }
        }
        BinaryForm::new(f, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f3() -> FieldSpec {
        make_field(3, 1, None).unwrap()
    }

    #[test]
    fn quadric_restrictions() {
        let f = f3();
        let quad = Polynomial::parse("X0*X3 - X1*X2", &f, 4).unwrap();
        let st = quad.restrict_to_line(&[1, 0, 0, 0], &[0, 1, 0, 1]).unwrap();
        assert_eq!(st.coeffs(), &[0, 1, 0]);
        let minus_t2 = quad.restrict_to_line(&[1, 0, 0, 0], &[0, 1, 1, 0]).unwrap();
        assert_eq!(minus_t2.coeffs(), &[0, 0, 2]);
        let contained = quad.restrict_to_line(&[1, 0, 0, 0], &[0, 0, 1, 0]).unwrap();
        assert!(contained.is_zero());
        assert_eq!(
            quad.restrict_to_line(&[1, 0, 0, 0], &[2, 0, 0, 0])
                .unwrap_err(),
            Error::DependentSpan
        );
    }

    #[test]
    fn squarefree_examples() {
        let f = f3();
        let st = BinaryForm::new(&f, vec![0, 1, 0]);
        assert!(st.squarefree().unwrap().squarefree);
        let t2 = BinaryForm::new(&f, vec![0, 0, 2]);
        let sq = t2.squarefree().unwrap();
        assert!(!sq.squarefree);
        assert_eq!(sq.multiplicity_at_infinity, 0);
        // s^3 + s t^2
        let cubic = BinaryForm::new(&f, vec![1, 0, 1, 0]);
        let sq = cubic.squarefree().unwrap();
        assert!(sq.squarefree);
        assert_eq!(sq.multiplicity_at_infinity, 1);
        // s^2: double root at [0:1]
        let s2 = BinaryForm::new(&f, vec![1, 0, 0]);
        assert!(!s2.squarefree().unwrap().squarefree);
        // t^3 - 1 = (t - 1)^3 in characteristic 3: derivative vanishes
        let frob = BinaryForm::new(&f, vec![2, 0, 0, 1]);
        assert!(!frob.squarefree().unwrap().squarefree);
        assert_eq!(
            BinaryForm::new(&f, vec![0, 0]).squarefree().unwrap_err(),
            Error::ZeroForm
        );
    }

    #[test]
    fn multiplicity_examples() {
        let f = f3();
        let t2 = BinaryForm::new(&f, vec![0, 0, 2]);
        let m = t2.rational_multiplicities().unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m[0], (P1Point { s: 1, t: 0 }, 2));
        assert!(m[1..].iter().all(|(_, k)| *k == 0));
        let st = BinaryForm::new(&f, vec![0, 1, 0]);
        let m = st.rational_multiplicities().unwrap();
        assert_eq!(m[0].1, 1);
        assert_eq!(m[3], (P1Point { s: 0, t: 1 }, 1));
        assert_eq!(m[1].1 + m[2].1, 0);
        let s2t2 = BinaryForm::new(&f, vec![1, 0, 1]);
        assert!(s2t2
            .rational_multiplicities()
            .unwrap()
            .iter()
            .all(|(_, k)| *k == 0));
    }

    #[test]
    fn restriction_matches_pointwise_evaluation() {
        for (p, e) in [(3, 1), (5, 1), (3, 2)] {
            let f = make_field(p, e, None).unwrap();
            let g = Polynomial::parse("X0^3 + 2*X1*X2*X3 + X0*X3^2 - X2^3", &f, 4).unwrap();
            let a = [1, 2, 0, 1];
            let b = [0, 1, 1, 2];
            let form = g.restrict_to_line(&a, &b).unwrap();
            for s in 0..f.order() {
                for t in 0..f.order() {
                    let pt: Vec<u64> = (0..4)
                        .map(|i| f.add(f.mul(s, a[i]), f.mul(t, b[i])))
                        .collect();
                    assert_eq!(form.eval(s, t), g.eval_raw(&pt));
                }
            }
        }
    }
}

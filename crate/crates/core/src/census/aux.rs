use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{Monomial, Polynomial};

/// `sum_i X_i^(q^m) * F_Xi(X_0^(q^n), ..., X_3^(q^n))`, where `q` is the
/// order of the coefficient field. May be zero.
pub fn aux_surface(poly: &Polynomial, m: u32, n: u32) -> Result<Polynomial> {
    if !poly.is_zero() && !poly.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let q = poly.field().order();
    let qm = u32::try_from(q.pow(m)).map_err(|_| Error::InvalidArgument("q^m too large".into()))?;
    let mut out = Polynomial::zero(poly.field(), poly.nvars());
    for (i, d) in poly.gradient().iter().enumerate() {
        let shifted = d.frobenius_substitute(n);
        let lead = Monomial::variable(i).scaled(qm);
        out = &out + &shifted.mul_monomial(&lead, 1);
    }
    Ok(out)
}

/// Evaluates the auxiliary form at a point over an extension without
/// expanding the polynomial: `sum_i x_i^(q^m) * F_Xi(Phi^n(x))`.
pub struct AuxEvaluator {
    field: FieldSpec,
    base_order: u64,
    partials: Vec<crate::poly::Evaluator>,
}

impl AuxEvaluator {
    /// `field` must contain the coefficient field of `poly`.
    pub fn new(poly: &Polynomial, field: &FieldSpec) -> Result<Self> {
        let lifted = crate::projective::lift(poly, field)?;
        Ok(Self {
            field: field.clone(),
            base_order: poly.field().order(),
            partials: lifted.gradient().iter().map(|g| g.evaluator()).collect(),
        })
    }

    fn frob(&self, x: u64, times: u32) -> u64 {
        (0..times).fold(x, |acc, _| self.field.pow(acc, self.base_order))
    }

    pub fn eval(&self, m: u32, n: u32, point: &[u64], scratch: &mut Vec<u64>) -> u64 {
        let f = &self.field;
        let shifted: Vec<u64> = point.iter().map(|x| self.frob(*x, n)).collect();
        self.partials.iter().enumerate().fold(0, |acc, (i, ev)| {
            let v = ev.eval(&shifted, scratch);
            f.add(acc, f.mul(self.frob(point[i], m), v))
        })
    }
}

/// Rejects `F` when every exponent is divisible by `p`: such a polynomial
/// is a `p`-th power (Frobenius is onto the coefficients), so `F = 0` is
/// not reduced.
pub fn check_not_pth_power(poly: &Polynomial) -> Result<()> {
    if poly.is_zero() {
        return Err(Error::ZeroSurface);
    }
    let p = poly.field().characteristic();
    let all_divisible = poly
        .terms()
        .all(|(m, _)| m.exponents().iter().all(|e| (*e as u64).is_multiple_of(p)));
    if all_divisible {
        return Err(Error::NotReduced);
    }
    Ok(())
}

/// Whether some smooth point `P` has `Phi^r(P)` outside `T_P S`.
///
/// Decided exactly: for irreducible reduced `F`, `Phi^r(P) in T_P S` on all
/// of `S` exactly when `F` divides the auxiliary form with `(m, n) = (r, 0)`.
/// Irreducibility is the caller's responsibility; only the `p`-th power case
/// is rejected here.
pub fn is_frobenius_classical(poly: &Polynomial, r: u32) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    check_not_pth_power(poly)?;
    let aux = aux_surface(poly, r, 0)?;
    Ok(!poly.divides(&aux)?)
}

/// Whether the Hessian determinant vanishes on `F = 0`, i.e. `F` divides it.
pub fn hessian_vanishes_on(poly: &Polynomial) -> Result<bool> {
    check_not_pth_power(poly)?;
    let h = poly.hessian_det()?;
    poly.divides(&h)
}

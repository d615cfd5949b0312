//! Dense univariate polynomials over a [`FieldSpec`], stored constant term
//! first with no trailing zeros (the zero polynomial is empty).

use crate::field::FieldSpec;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|c| *c != 0)
}

pub fn add(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.add(x, y)
        })
        .collect();
    trim(out)
}

pub fn sub(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

pub fn mul(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    trim(out)
}

/// Formal derivative.
pub fn derivative(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul_int(*c, i as u64))
        .collect();
    trim(out)
}

/// Quotient and remainder of `a` by the nonzero `b`.
pub fn div_rem(f: &FieldSpec, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem[dr], lead_inv);
        quot[dr - db] = c;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            let k = dr - db + i;
            rem[k] = f.sub(rem[k], f.mul(c, *bc));
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn rem(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    div_rem(f, a, b).1
}

pub fn monic(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(a[d]).unwrap();
            a[..=d].iter().map(|c| f.mul(*c, inv)).collect()
        }
    }
}

/// Monic gcd; `gcd(a, 0) = monic(a)`.
pub fn gcd(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `base^n mod modulus`.
pub fn pow_mod(f: &FieldSpec, base: &[u64], mut n: u64, modulus: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(f, base, modulus);
    while n > 0 {
        if n & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), modulus);
        }
        n >>= 1;
        if n > 0 {
            b = rem(f, &mul(f, &b, &b), modulus);
        }
    }
    acc
}

pub fn eval(f: &FieldSpec, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, c| f.add(f.mul(acc, x), *c))
}

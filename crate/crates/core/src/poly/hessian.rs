use std::collections::HashMap;

use super::Polynomial;
use crate::error::{Error, Result};

/// Determinant of the Hessian matrix by Laplace expansion along rows, with
/// minors memoized by their column set.
pub(super) fn hessian_det(p: &Polynomial) -> Result<Polynomial> {
    if p.field.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let grad = p.gradient();
    let matrix: Vec<Vec<Polynomial>> = grad.iter().map(|g| g.gradient()).collect();
    Ok(determinant(&matrix, p))
}

fn determinant(matrix: &[Vec<Polynomial>], like: &Polynomial) -> Polynomial {
    let n = matrix.len();
    let field = like.field();
    let neg_one = field.neg(1);
    // minors[mask] for masks of the current size
    let mut minors: HashMap<u32, Polynomial> = HashMap::new();
    minors.insert(0, Polynomial::constant(field, like.nvars(), 1));
    for size in 1..=n {
        let row = n - size;
        let mut next = HashMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = Polynomial::zero(field, like.nvars());
            for (pos, j) in (0..n).filter(|j| mask & (1 << j) != 0).enumerate() {
                let entry = &matrix[row][j];
                if entry.is_zero() {
                    continue;
                }
                let minor = &minors[&(mask & !(1 << j))];
                if minor.is_zero() {
                    continue;
                }
                let term = entry * minor;
                acc = if pos % 2 == 0 {
                    &acc + &term
                } else {
                    &acc + &term.scale(neg_one)
                };
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).unwrap()
}

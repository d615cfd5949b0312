use serde::Serialize;

use super::{buchberger, DEFAULT_DEGREE_CAP};
use crate::poly::Polynomial;
use crate::projective::{find_common_zero, point_count, ProjectivePoint, EXTENSION_CAP};

/// Outcome of [`certify_smooth`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum SmoothnessVerdict {
    Smooth,
    /// The singular locus is nonempty. The witness is the first singular
    /// point found by scanning extensions, if any was found within the
    /// scan limits.
    Singular {
        witness: Option<ProjectivePoint>,
    },
    /// The Groebner computation hit its degree cap and the scan found no
    /// singular point.
    Inconclusive {
        degree: u32,
    },
}

impl SmoothnessVerdict {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothnessVerdict::Smooth)
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, SmoothnessVerdict::Singular { .. })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SmoothnessOptions {
    pub degree_cap: u32,
    /// Largest extension degree scanned for a singular point.
    pub extension_cap: u32,
    /// Extensions whose projective space has more points than this are
    /// not scanned.
    pub scan_budget: u64,
}

impl Default for SmoothnessOptions {
    fn default() -> Self {
        Self {
            degree_cap: DEFAULT_DEGREE_CAP,
            extension_cap: EXTENSION_CAP,
            scan_budget: 20_000_000,
        }
    }
}

/// Decides whether `F = 0` is smooth with default options.
pub fn certify_smooth(poly: &Polynomial) -> SmoothnessVerdict {
    certify_smooth_with(poly, &SmoothnessOptions::default())
}

/// Decides smoothness from the ideal `(F, F_X0, ..., F_Xn)`.
///
/// The ideal is homogeneous, so its affine zero set is a cone. A cone of
/// dimension 0 is the origin alone, which means the projective singular
/// locus is empty. Dimension at least 1 means a projective singular point
/// exists over the algebraic closure.
pub fn certify_smooth_with(poly: &Polynomial, opts: &SmoothnessOptions) -> SmoothnessVerdict {
    let mut ideal = vec![poly.clone()];
    ideal.extend(poly.gradient());
    let scan = || witness_scan(&ideal, opts);
    match buchberger(&ideal, opts.degree_cap) {
        Ok(gb) => {
            if gb.lt_ideal_dimension().expect("complete basis") <= 0 {
                SmoothnessVerdict::Smooth
            } else {
                SmoothnessVerdict::Singular { witness: scan() }
            }
        }
        Err(cap) => match scan() {
            Some(w) => SmoothnessVerdict::Singular { witness: Some(w) },
            None => SmoothnessVerdict::Inconclusive { degree: cap.degree },
        },
    }
}

fn witness_scan(ideal: &[Polynomial], opts: &SmoothnessOptions) -> Option<ProjectivePoint> {
    let base = ideal[0].field();
    let n = ideal[0].nvars() - 1;
    let nonzero: Vec<Polynomial> = ideal.iter().filter(|p| !p.is_zero()).cloned().collect();
    for k in 1..=opts.extension_cap.min(EXTENSION_CAP) {
        let Ok(ext) = base.extension(k) else { break };
        if point_count(n, &ext) > opts.scan_budget {
            break;
        }
        if nonzero.is_empty() {
            return crate::projective::enumerate_points(n, &ext).next();
        }
        if let Ok(Some(p)) = find_common_zero(&nonzero, k) {
            return Some(p);
        }
    }
    None
}

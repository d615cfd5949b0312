//! Classification of every F_q-line of P^3 against a surface, together with
//! the hypothesis checks and bounds the counts are compared against.

mod aux;
mod bounds;
mod classify;

use std::time::Instant;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use aux::{
    aux_surface, check_not_pth_power, hessian_vanishes_on, is_frobenius_classical, AuxEvaluator,
};
pub use bounds::{
    bound_sheet, Bound, BoundHypotheses, BoundKind, BoundSheet, ExistenceThresholds, Quantity,
    Rational,
};
pub use classify::{classify_line, Classifier, LineClass, LineClassification};

use crate::error::{Error, Result};
use crate::groebner::{
    certify_smooth_with, projective_dimension, ProjectiveDimension, SmoothnessOptions,
    SmoothnessVerdict, DEFAULT_DEGREE_CAP,
};
use crate::poly::Polynomial;
use crate::projective::{
    count_points_on, count_points_where, lift, par_lines, point_count, LineRep, EXTENSION_CAP,
};

/// Number of lines in each class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassCounts {
    pub contained: u64,
    pub transverse: u64,
    pub rational_tangent: u64,
    pub special_tangent: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.contained + self.transverse + self.rational_tangent + self.special_tangent
    }

    pub fn add(&mut self, class: LineClass) {
        match class {
            LineClass::Contained => self.contained += 1,
            LineClass::Transverse => self.transverse += 1,
            LineClass::RationalTangent => self.rational_tangent += 1,
            LineClass::SpecialTangent => self.special_tangent += 1,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.contained += other.contained;
        self.transverse += other.transverse;
        self.rational_tangent += other.rational_tangent;
        self.special_tangent += other.special_tangent;
        self
    }
}

impl Serialize for ClassCounts {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClassCounts", 5)?;
        st.serialize_field("contained", &self.contained)?;
        st.serialize_field("transverse", &self.transverse)?;
        st.serialize_field("rational_tangent", &self.rational_tangent)?;
        st.serialize_field("special_tangent", &self.special_tangent)?;
        st.serialize_field("total", &self.total())?;
        st.end()
    }
}

/// Classifies every line in parallel on the current rayon pool. Returns
/// the tallies and the contained lines in enumeration order.
pub fn count_line_classes(poly: &Polynomial) -> Result<(ClassCounts, Vec<LineRep>)> {
    let classifier = Classifier::new(poly)?;
    let (counts, contained) = par_lines(poly.field())
        .fold(
            || (ClassCounts::default(), Vec::new()),
            |(mut counts, mut contained), line| {
                let class = classifier.class_of(&line);
                counts.add(class);
                if class == LineClass::Contained {
                    contained.push(line);
                }
                (counts, contained)
            },
        )
        .reduce(
            || (ClassCounts::default(), Vec::new()),
            |(a, mut la), (b, lb)| {
                la.extend(lb);
                (a.merge(b), la)
            },
        );
    let mut contained = contained;
    contained.sort_by_key(|l| l.index());
    Ok((counts, contained))
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
    pub degree_cap: u32,
    /// Largest extension degree for point scans.
    pub extension_cap: u32,
    /// Largest projective space (in points) an extension scan may visit.
    pub scan_budget: u64,
    /// Largest field order accepted.
    pub max_q: u64,
    /// Treat the surface as geometrically irreducible and reduced.
    pub assume_irreducible: bool,
    /// Run the smoothness, classicality and Gamma checks.
    pub check_hypotheses: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            workers: None,
            degree_cap: DEFAULT_DEGREE_CAP,
            extension_cap: 2,
            scan_budget: 20_000_000,
            max_q: 13,
            assume_irreducible: false,
            check_hypotheses: true,
        }
    }
}

/// Why a Frobenius classicality verdict may be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precondition {
    /// Smooth surfaces in P^3 are irreducible and reduced.
    Smooth,
    Assumed,
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalityVerdict {
    pub value: Option<bool>,
    pub method: &'static str,
    pub precondition: Precondition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ClassicalityVerdict {
    /// The verdict when its preconditions hold.
    pub fn trusted(&self) -> Option<bool> {
        match self.precondition {
            Precondition::Unverified => None,
            _ => self.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaVerdict {
    /// Projective dimension; `-1` for the empty set.
    pub value: Option<i64>,
    /// `"groebner"` (certified) or `"heuristic"` (point counts).
    pub method: &'static str,
    /// Heuristic only: common zeros over `F_{q^k}` for `k = 1, 2, ...`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_counts: Vec<u64>,
    /// Heuristic only: product of the degrees, the largest possible size of
    /// a finite intersection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bezout_bound: Option<u64>,
}

impl GammaVerdict {
    pub fn certified_zero_dimensional(&self) -> bool {
        self.method == "groebner" && matches!(self.value, Some(v) if v <= 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub smooth: SmoothnessVerdict,
    pub frobenius_classical_r1: ClassicalityVerdict,
    pub frobenius_classical_r2: ClassicalityVerdict,
    pub gamma_dimension: GammaVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInfo {
    pub text: String,
    pub degree: u32,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCounts {
    pub count_q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_q2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_q3: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub wall_ms: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub field: FieldInfo,
    pub surface: SurfaceInfo,
    pub census: ClassCounts,
    pub points: PointCounts,
    pub lines_in_surface: Vec<LineRep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<Hypotheses>,
    pub bounds: BoundSheet,
    pub timing: Timing,
}

impl CensusReport {
    /// Names of applicable bounds the counts violate. Each is a proved
    /// inequality, so any entry signals a bug.
    pub fn violations(&self) -> Vec<&'static str> {
        self.bounds.violations()
    }
}

/// Runs the full census of `F` with default options.
pub fn full_census(poly: &Polynomial) -> Result<CensusReport> {
    full_census_with(poly, &CensusOptions::default())
}

pub fn full_census_with(poly: &Polynomial, opts: &CensusOptions) -> Result<CensusReport> {
    let started = Instant::now();
    let field = poly.field();
    if poly.nvars() != 4 {
        return Err(Error::InvalidArgument("a surface needs 4 variables".into()));
    }
    if poly.is_zero() {
        return Err(Error::ZeroSurface);
    }
    let degree = poly.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if field.order() > opts.max_q {
        return Err(Error::BudgetExceeded {
            q: field.order(),
            max: opts.max_q,
        });
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| {
        let (counts, contained) = count_line_classes(poly)?;
        let points = point_counts(poly, opts)?;
        let hypotheses = if opts.check_hypotheses {
            Some(check_hypotheses(poly, opts)?)
        } else {
            None
        };
        let hyp = match &hypotheses {
            Some(h) => BoundHypotheses {
                smooth: h.smooth.is_smooth(),
                classical: h.frobenius_classical_r1.trusted(),
                gamma_zero_dimensional: h.gamma_dimension.certified_zero_dimensional(),
                contained_lines: Some(contained.len() as u64),
            },
            None => BoundHypotheses {
                contained_lines: Some(contained.len() as u64),
                ..Default::default()
            },
        };
        let mut bounds = bound_sheet(field.order(), degree as u64, points.count_q, &hyp);
        bounds.evaluate(&counts);
        Ok(CensusReport {
            field: FieldInfo {
                p: field.characteristic(),
                e: field.degree(),
                modulus: field.modulus().to_vec(),
            },
            surface: SurfaceInfo {
                text: poly.to_string(),
                degree,
                source: "inline".into(),
            },
            census: counts,
            points,
            lines_in_surface: contained,
            hypotheses,
            bounds,
            timing: Timing {
                wall_ms: started.elapsed().as_millis() as u64,
                workers: rayon::current_num_threads(),
            },
        })
    })
}

fn point_counts(poly: &Polynomial, opts: &CensusOptions) -> Result<PointCounts> {
    let mut extra = [None, None];
    for k in 2..=opts.extension_cap.min(EXTENSION_CAP) {
        let ext = poly.field().extension(k)?;
        if point_count(3, &ext) > opts.scan_budget {
            break;
        }
        extra[k as usize - 2] = Some(count_points_on(poly, k)?);
    }
    Ok(PointCounts {
        count_q: count_points_on(poly, 1)?,
        count_q2: extra[0],
        count_q3: extra[1],
    })
}

fn classicality(poly: &Polynomial, r: u32, precondition: Precondition) -> ClassicalityVerdict {
    match is_frobenius_classical(poly, r) {
        Ok(v) => ClassicalityVerdict {
            value: Some(v),
            method: "divisibility",
            precondition,
            error: None,
        },
        Err(e) => ClassicalityVerdict {
            value: None,
            method: "divisibility",
            precondition,
            error: Some(e.to_string()),
        },
    }
}

/// Smoothness, Frobenius classicality for `r = 1, 2`, and the dimension of
/// `S ∩ S_{1,0} ∩ S_{0,1}`.
pub fn check_hypotheses(poly: &Polynomial, opts: &CensusOptions) -> Result<Hypotheses> {
    let smooth = certify_smooth_with(
        poly,
        &SmoothnessOptions {
            degree_cap: opts.degree_cap,
            extension_cap: EXTENSION_CAP,
            scan_budget: opts.scan_budget,
        },
    );
    let precondition = if smooth.is_smooth() {
        Precondition::Smooth
    } else if opts.assume_irreducible {
        Precondition::Assumed
    } else {
        Precondition::Unverified
    };
    Ok(Hypotheses {
        frobenius_classical_r1: classicality(poly, 1, precondition),
        frobenius_classical_r2: classicality(poly, 2, precondition),
        gamma_dimension: gamma_dimension(poly, opts)?,
        smooth,
    })
}

/// Dimension of `S ∩ S_{1,0} ∩ S_{0,1}`: by Groebner basis when the
/// auxiliary degrees stay within the cap, otherwise estimated from point
/// counts over small extensions.
pub fn gamma_dimension(poly: &Polynomial, opts: &CensusOptions) -> Result<GammaVerdict> {
    let q = poly.field().order();
    let d = poly.homogeneous_degree().ok_or(Error::NotHomogeneous)? as u64;
    if q * q + d - 1 <= opts.degree_cap as u64 {
        let gens = [
            poly.clone(),
            aux_surface(poly, 1, 0)?,
            aux_surface(poly, 0, 1)?,
        ];
        match projective_dimension(&gens, opts.degree_cap) {
            ProjectiveDimension::Inconclusive { .. } => {}
            dim => {
                return Ok(GammaVerdict {
                    value: dim.value(),
                    method: "groebner",
                    point_counts: Vec::new(),
                    bezout_bound: None,
                })
            }
        }
    }
    gamma_heuristic(poly, opts)
}

/// Counts common zeros over `F_{q^k}`. More zeros than the Bezout bound
/// proves a positive-dimensional intersection; otherwise dimension 0 is
/// reported as a guess.
fn gamma_heuristic(poly: &Polynomial, opts: &CensusOptions) -> Result<GammaVerdict> {
    let q = poly.field().order();
    let d = poly.homogeneous_degree().ok_or(Error::NotHomogeneous)? as u64;
    let bezout = d * (q + d - 1) * (q * d - q + 1);
    let mut counts = Vec::new();
    let mut positive = false;
    for k in 1..=opts.extension_cap.clamp(1, EXTENSION_CAP) {
        let ext = poly.field().extension(k)?;
        if point_count(3, &ext) > opts.scan_budget {
            break;
        }
        let f = lift(poly, &ext)?.evaluator();
        let aux = AuxEvaluator::new(poly, &ext)?;
        let n = count_points_where(3, &ext, |c, s| {
            f.eval(c, s) == 0 && aux.eval(1, 0, c, s) == 0 && aux.eval(0, 1, c, s) == 0
        });
        counts.push(n);
        if n > bezout {
            positive = true;
            break;
        }
    }
    Ok(GammaVerdict {
        value: Some(if positive { 1 } else { 0 }),
        method: "heuristic",
        point_counts: counts,
        bezout_bound: Some(bezout),
    })
}

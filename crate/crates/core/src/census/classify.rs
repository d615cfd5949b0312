use serde::Serialize;

use crate::error::Result;
use crate::poly::{Polynomial, Restrictor};
use crate::projective::{LineRep, ProjectivePoint};
use crate::upoly;

/// How an F_q-line meets a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum LineClassification {
    /// The surface polynomial vanishes on the whole line.
    Contained,
    /// The line meets the surface in `d` distinct geometric points.
    Transverse,
    /// Tangent at a rational point; `point` is the smallest such point in
    /// canonical order and `multiplicity` its root multiplicity.
    RationalTangent {
        point: ProjectivePoint,
        multiplicity: usize,
    },
    /// Tangent only at non-rational points. `repeated_degree` is the
    /// degree of `gcd(u, u')` for the dehomogenized restriction `u`.
    SpecialTangent { repeated_degree: usize },
}

/// Class labels without witness data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineClass {
    Contained,
    Transverse,
    RationalTangent,
    SpecialTangent,
}

impl LineClassification {
    pub fn class(&self) -> LineClass {
        match self {
            LineClassification::Contained => LineClass::Contained,
            LineClassification::Transverse => LineClass::Transverse,
            LineClassification::RationalTangent { .. } => LineClass::RationalTangent,
            LineClassification::SpecialTangent { .. } => LineClass::SpecialTangent,
        }
    }
}

/// Classifies lines against a fixed surface.
#[derive(Clone)]
pub struct Classifier {
    restrictor: Restrictor,
}

impl Classifier {
    pub fn new(poly: &Polynomial) -> Result<Self> {
        Ok(Self {
            restrictor: Restrictor::new(poly)?,
        })
    }

    /// Class label only; skips witness construction.
    pub fn class_of(&self, line: &LineRep) -> LineClass {
        let [a, b] = line.rows();
        let form = self.restrictor.restrict(a, b);
        if form.is_zero() {
            return LineClass::Contained;
        }
        if form.squarefree().unwrap().squarefree {
            return LineClass::Transverse;
        }
        if form
            .rational_multiplicities()
            .unwrap()
            .iter()
            .any(|(_, m)| *m >= 2)
        {
            LineClass::RationalTangent
        } else {
            LineClass::SpecialTangent
        }
    }

    pub fn classify(&self, line: &LineRep) -> LineClassification {
        let [a, b] = line.rows();
        let form = self.restrictor.restrict(a, b);
        if form.is_zero() {
            return LineClassification::Contained;
        }
        if form.squarefree().unwrap().squarefree {
            return LineClassification::Transverse;
        }
        let witness = form
            .rational_multiplicities()
            .unwrap()
            .into_iter()
            .filter(|(_, m)| *m >= 2)
            .map(|(st, m)| (line.point(st), m))
            .min_by(|x, y| x.0.cmp(&y.0));
        match witness {
            Some((point, multiplicity)) => LineClassification::RationalTangent {
                point,
                multiplicity,
            },
            None => {
                let f = form.field();
                let u = form.dehomogenize();
                let g = upoly::gcd(f, &u, &upoly::derivative(f, &u));
                LineClassification::SpecialTangent {
                    repeated_degree: g.len() - 1,
                }
            }
        }
    }
}

/// Classifies one line; see [`Classifier`] for repeated use.
pub fn classify_line(poly: &Polynomial, line: &LineRep) -> Result<LineClassification> {
    Ok(Classifier::new(poly)?.classify(line))
}

//! Exact evaluation of the point-count and line-count inequalities.

use num_rational::Ratio;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::ClassCounts;

pub type Rational = Ratio<i128>;

/// Which side of the inequality the bound sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
}

/// The observed quantity a bound constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    TotalLines,
    /// Rational tangents together with contained lines, which are tangent
    /// at each of their rational points.
    TangentAtRationalPoint,
    RationalPoints,
    SpecialTangents,
    TransverseLines,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub name: &'static str,
    pub kind: BoundKind,
    pub quantity: Quantity,
    pub value: Rational,
    pub applicable: bool,
    pub observed: Option<u64>,
}

impl Bound {
    /// `ceil` of a lower bound, `floor` of an upper bound, the value itself
    /// for an exact count.
    pub fn integer_threshold(&self) -> i128 {
        match self.kind {
            BoundKind::Lower => self.value.ceil().to_integer(),
            _ => self.value.floor().to_integer(),
        }
    }

    pub fn holds_for(&self, observed: u64) -> bool {
        let obs = Rational::from_integer(observed as i128);
        match self.kind {
            BoundKind::Exact => obs == self.value,
            BoundKind::Upper => obs <= self.value,
            BoundKind::Lower => obs >= self.value,
        }
    }

    /// `None` when not applicable or not yet evaluated.
    pub fn satisfied(&self) -> Option<bool> {
        match (self.applicable, self.observed) {
            (true, Some(o)) => Some(self.holds_for(o)),
            _ => None,
        }
    }

    pub fn violated(&self) -> bool {
        self.satisfied() == Some(false)
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Bound", 8)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("quantity", &self.quantity)?;
        st.serialize_field("value_numerator", &i64::try_from(*self.value.numer()).ok())?;
        st.serialize_field(
            "value_denominator",
            &i64::try_from(*self.value.denom()).ok(),
        )?;
        st.serialize_field(
            "integer_threshold",
            &i64::try_from(self.integer_threshold()).ok(),
        )?;
        st.serialize_field("applicable", &self.applicable)?;
        st.serialize_field("observed", &self.observed)?;
        st.serialize_field("satisfied", &self.satisfied())?;
        st.end()
    }
}

/// Hypotheses feeding applicability.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundHypotheses {
    /// Smoothness certified.
    pub smooth: bool,
    /// Frobenius classical for `r = 1`, when decided with its
    /// preconditions met.
    pub classical: Option<bool>,
    /// `S ∩ S_{1,0} ∩ S_{0,1}` certified zero-dimensional.
    pub gamma_zero_dimensional: bool,
    /// Number of rational lines on the surface, when known.
    pub contained_lines: Option<u64>,
}

/// Whether `q >= c d` holds for the constants in the transverse-line
/// existence results, decided with integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceThresholds {
    /// `c` the real root of `2x^3 - 2x^2 - x - 1` (about 1.536974).
    pub q_at_least_1_537d: bool,
    /// `c = (3 + sqrt 17) / 4` (about 1.780776).
    pub q_at_least_1_781d: bool,
    pub q_at_least_d_squared: bool,
}

impl ExistenceThresholds {
    pub fn new(q: u64, d: u64) -> Self {
        let (q, d) = (q as i128, d as i128);
        Self {
            // x = q/d >= root  <=>  2x^3 - 2x^2 - x - 1 >= 0, scaled by d^3
            q_at_least_1_537d: 2 * q * q * q - 2 * q * q * d - q * d * d - d * d * d >= 0,
            // the other root of 2x^2 - 3x - 1 is negative
            q_at_least_1_781d: 2 * q * q - 3 * q * d - d * d >= 0,
            q_at_least_d_squared: q >= d * d,
        }
    }
}

/// Every inequality relating `q`, `d`, `#S(F_q)` and the line classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSheet {
    pub q: u64,
    pub d: u64,
    pub points: u64,
    pub bounds: Vec<Bound>,
    pub thresholds: ExistenceThresholds,
}

fn r(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Builds the sheet; observed values are filled by [`BoundSheet::evaluate`].
pub fn bound_sheet(q: u64, d: u64, points: u64, hyp: &BoundHypotheses) -> BoundSheet {
    let (qi, di, s) = (q as i128, d as i128, points as i128);
    let half = Rational::new(1, 2);
    let q_ge_d = q >= d;
    let classical = hyp.classical == Some(true);
    let mut bounds = Vec::new();
    let mut push = |name, kind, quantity, value, applicable| {
        bounds.push(Bound {
            name,
            kind,
            quantity,
            value,
            applicable,
            observed: None,
        })
    };
    push(
        "line_total",
        BoundKind::Exact,
        Quantity::TotalLines,
        r((qi * qi + 1) * (qi * qi + qi + 1)),
        true,
    );
    push(
        "rational_tangents",
        BoundKind::Upper,
        Quantity::TangentAtRationalPoint,
        r(s * (qi + 1)),
        hyp.smooth,
    );
    push(
        "homma",
        BoundKind::Upper,
        Quantity::RationalPoints,
        r((di - 1) * (qi * qi + 1)),
        hyp.smooth && d >= 2 && hyp.contained_lines == Some(0),
    );
    push(
        "homma_kim",
        BoundKind::Upper,
        Quantity::RationalPoints,
        r((qi + 1) * (qi * di - qi + 1)),
        hyp.smooth && d >= 2,
    );
    push(
        "special_tangents_gamma",
        BoundKind::Upper,
        Quantity::SpecialTangents,
        r(di * (qi + di - 1) * (qi * di - qi + 1) - s) * half,
        hyp.smooth && hyp.gamma_zero_dimensional,
    );
    push(
        "special_tangents_classical",
        BoundKind::Upper,
        Quantity::SpecialTangents,
        r(di * (qi + di - 1) * (qi * qi + di - 1)) * half,
        hyp.smooth && classical && q_ge_d,
    );
    push(
        "special_tangents_smooth",
        BoundKind::Upper,
        Quantity::SpecialTangents,
        r(di * (qi * qi + di - 1) * (qi * di - qi + 1)) * half,
        hyp.smooth && q_ge_d && d >= 2,
    );
    let q2 = qi * qi;
    let q3 = q2 * qi;
    let q4 = q3 * qi;
    push(
        "transverse_gamma",
        BoundKind::Lower,
        Quantity::TransverseLines,
        r(q4 - (di - 2) * q3)
            - r((di * di - 5) * q2
                + (di * di * di - 2 * di * di + 4 * di - 4) * qi
                + (di * di - 3))
                * half,
        hyp.smooth && hyp.gamma_zero_dimensional,
    );
    push(
        "transverse_classical",
        BoundKind::Lower,
        Quantity::TransverseLines,
        r(q4)
            - r((3 * di - 4) * q3
                + (di * di + 3 * di - 6) * q2
                + di * (di + 1) * qi
                + di * (di - 1) * (di - 1))
                * half,
        hyp.smooth && classical && q_ge_d,
    );
    push(
        "transverse_smooth",
        BoundKind::Lower,
        Quantity::TransverseLines,
        r(q4)
            - r((di * di + di - 4) * q3
                + (5 * di - 6) * q2
                + di * (di * di - 2 * di + 3) * qi
                + di * (di - 1))
                * half,
        hyp.smooth && q_ge_d,
    );
    BoundSheet {
        q,
        d,
        points,
        bounds,
        thresholds: ExistenceThresholds::new(q, d),
    }
}

impl BoundSheet {
    pub fn get(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Records the observed quantities of a census.
    pub fn evaluate(&mut self, counts: &ClassCounts) {
        for b in &mut self.bounds {
            b.observed = Some(match b.quantity {
                Quantity::TotalLines => counts.total(),
                Quantity::TangentAtRationalPoint => counts.rational_tangent + counts.contained,
                Quantity::RationalPoints => self.points,
                Quantity::SpecialTangents => counts.special_tangent,
                Quantity::TransverseLines => counts.transverse,
            });
        }
    }

    /// Names of applicable bounds that fail.
    pub fn violations(&self) -> Vec<&'static str> {
        self.bounds
            .iter()
            .filter(|b| b.violated())
            .map(|b| b.name)
            .collect()
    }
}

impl Serialize for BoundSheet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.bounds.len() + 1))?;
        for b in &self.bounds {
            m.serialize_entry(b.name, b)?;
        }
        m.serialize_entry("existence_thresholds", &self.thresholds)?;
        m.end()
    }
}

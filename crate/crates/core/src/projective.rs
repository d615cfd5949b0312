//! Points of projective space, lines and planes of P^3, and exhaustive scans.
//!
//! Points and lines are addressed by a dense index so that scans split into
//! independent index ranges for rayon.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{P1Point, Polynomial, Restrictor};

/// Largest extension degree accepted by the point scans.
pub const EXTENSION_CAP: u32 = 3;

/// A point with coordinates normalized so the first nonzero one is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    field: FieldSpec,
    coords: Vec<u64>,
}

impl ProjectivePoint {
    /// Normalizes `coords`; `None` when all are zero.
    pub fn new(field: &FieldSpec, coords: &[u64]) -> Option<Self> {
        let pivot = coords.iter().position(|c| *c != 0)?;
        let inv = field.inv(coords[pivot]).unwrap();
        Some(Self {
            field: field.clone(),
            coords: coords.iter().map(|c| field.mul(*c, inv)).collect(),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Index of the first nonzero coordinate.
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| *c != 0).unwrap()
    }

    /// Position in the enumeration order of [`enumerate_points`].
    pub fn index(&self) -> u64 {
        let q = self.field.order();
        let n = self.coords.len() - 1;
        let j = self.pivot();
        let before: u64 = (0..j).map(|i| q.pow((n - i) as u32)).sum();
        before + self.coords[j + 1..].iter().fold(0, |acc, c| acc * q + c)
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjectivePoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pivot()
            .cmp(&other.pivot())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| self.field.format_raw(*c))
            .collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Number of points of P^n over `field`.
pub fn point_count(n: usize, field: &FieldSpec) -> u64 {
    let q = field.order();
    (0..=n).map(|i| q.pow(i as u32)).sum()
}

/// Writes the coordinates of the point with the given enumeration index.
pub fn point_at(field: &FieldSpec, index: u64, coords: &mut [u64]) {
    let q = field.order();
    let n = coords.len() - 1;
    let mut rest = index;
    for j in 0..=n {
        let block = q.pow((n - j) as u32);
        if rest < block {
            coords[..j].fill(0);
            coords[j] = 1;
            for c in coords[j + 1..].iter_mut().rev() {
                *c = rest % q;
                rest /= q;
            }
            return;
        }
        rest -= block;
    }
    panic!("point index {index} out of range");
}

/// All points of P^n over `field`, ordered by pivot position and then
/// lexicographically in the remaining coordinates.
pub fn enumerate_points(n: usize, field: &FieldSpec) -> impl Iterator<Item = ProjectivePoint> + '_ {
    (0..point_count(n, field)).map(move |i| {
        let mut coords = vec![0u64; n + 1];
        point_at(field, i, &mut coords);
        ProjectivePoint {
            field: field.clone(),
            coords,
        }
    })
}

/// Counts the points of P^n satisfying `pred`, in parallel.
pub fn count_points_where<P>(n: usize, field: &FieldSpec, pred: P) -> u64
where
    P: Fn(&[u64], &mut Vec<u64>) -> bool + Sync,
{
    (0..point_count(n, field))
        .into_par_iter()
        .map_init(
            || (vec![0u64; n + 1], Vec::new()),
            |(coords, scratch), i| {
                point_at(field, i, coords);
                pred(coords, scratch) as u64
            },
        )
        .sum()
}

/// The first point of P^n (in enumeration order) satisfying `pred`.
pub fn find_point_where<P>(n: usize, field: &FieldSpec, pred: P) -> Option<ProjectivePoint>
where
    P: Fn(&[u64], &mut Vec<u64>) -> bool + Sync,
{
    (0..point_count(n, field))
        .into_par_iter()
        .map_init(
            || (vec![0u64; n + 1], Vec::new()),
            |(coords, scratch), i| {
                point_at(field, i, coords);
                pred(coords, scratch).then_some(i)
            },
        )
        .flatten()
        .min()
        .map(|i| {
            let mut coords = vec![0u64; n + 1];
            point_at(field, i, &mut coords);
            ProjectivePoint {
                field: field.clone(),
                coords,
            }
        })
}

/// Pivot column pairs of a rank-2 RREF 2x4 matrix, in enumeration order.
const PIVOTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn free_positions(i: usize, j: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (i + 1..4).filter(|k| *k != j).map(|k| (0, k)).collect();
    out.extend((j + 1..4).map(|k| (1, k)));
    out
}

/// A line of P^3 over F_q held as the RREF basis of its row space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LineRep {
    field: FieldSpec,
    rows: [[u64; 4]; 2],
}

/// Number of lines of P^3 over `field`.
pub fn line_count(field: &FieldSpec) -> u64 {
    let q = field.order();
    (q * q + 1) * (q * q + q + 1)
}

/// The line with the given enumeration index.
pub fn line_at(field: &FieldSpec, index: u64) -> LineRep {
    let q = field.order();
    let mut rest = index;
    for (i, j) in PIVOTS {
        let free = free_positions(i, j);
        let block = q.pow(free.len() as u32);
        if rest < block {
            let mut rows = [[0u64; 4]; 2];
            rows[0][i] = 1;
            rows[1][j] = 1;
            for (r, k) in free.iter().rev() {
                rows[*r][*k] = rest % q;
                rest /= q;
            }
            return LineRep {
                field: field.clone(),
                rows,
            };
        }
        rest -= block;
    }
    panic!("line index {index} out of range");
}

/// All lines of P^3 over `field`, pivot pattern by pivot pattern, free
/// entries in lexicographic order.
pub fn enumerate_lines(field: &FieldSpec) -> impl Iterator<Item = LineRep> + '_ {
    (0..line_count(field)).map(move |i| line_at(field, i))
}

/// Parallel version of [`enumerate_lines`].
pub fn par_lines(field: &FieldSpec) -> impl ParallelIterator<Item = LineRep> + '_ {
    (0..line_count(field))
        .into_par_iter()
        .map(move |i| line_at(field, i))
}

impl LineRep {
    /// The line spanned by two rows, reduced to RREF.
    pub fn from_rows(field: &FieldSpec, a: &[u64], b: &[u64]) -> Result<Self> {
        if a.len() != 4 || b.len() != 4 {
            return Err(Error::InvalidArgument(
                "a line needs two rows of 4 coordinates".into(),
            ));
        }
        let f = field;
        let mut m = [[0u64; 4]; 2];
        m[0].copy_from_slice(a);
        m[1].copy_from_slice(b);
        let mut row = 0;
        for col in 0..4 {
            if row == 2 {
                break;
            }
            let Some(pr) = (row..2).find(|r| m[*r][col] != 0) else {
                continue;
            };
            m.swap(row, pr);
            let inv = f.inv(m[row][col]).unwrap();
            for x in m[row].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let other = 1 - row;
            let factor = m[other][col];
            if factor != 0 {
                let pivot_row = m[row];
                for (x, y) in m[other].iter_mut().zip(pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
            row += 1;
        }
        if row < 2 {
            return Err(Error::DependentSpan);
        }
        Ok(Self {
            field: field.clone(),
            rows: m,
        })
    }

    /// Parses `"a0,a1,a2,a3|b0,b1,b2,b3"` with field element literals.
    pub fn parse(text: &str, field: &FieldSpec) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed line literal {text:?}"));
        let (a, b) = text.split_once('|').ok_or_else(bad)?;
        let row = |s: &str| -> Result<Vec<u64>> {
            let s = s.trim().trim_start_matches('[').trim_end_matches(']');
            s.split(',').map(|x| field.parse_raw(x)).collect()
        };
        let (a, b) = (row(a)?, row(b)?);
        if a.len() != 4 || b.len() != 4 {
            return Err(bad());
        }
        Self::from_rows(field, &a, &b)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> &[[u64; 4]; 2] {
        &self.rows
    }

    /// Plücker coordinates `(p01, p02, p03, p12, p13, p23)`, normalized so
    /// the first nonzero one is 1.
    pub fn plucker(&self) -> [u64; 6] {
        let f = &self.field;
        let [a, b] = &self.rows;
        let mut p = [0u64; 6];
        for (k, (i, j)) in PIVOTS.iter().enumerate() {
            p[k] = f.sub(f.mul(a[*i], b[*j]), f.mul(a[*j], b[*i]));
        }
        let first = p.iter().find(|x| **x != 0).copied().unwrap();
        let inv = f.inv(first).unwrap();
        p.map(|x| f.mul(x, inv))
    }

    /// Position in the enumeration order of [`enumerate_lines`].
    pub fn index(&self) -> u64 {
        let q = self.field.order();
        let i = self.rows[0].iter().position(|x| *x != 0).unwrap();
        let j = self.rows[1].iter().position(|x| *x != 0).unwrap();
        let mut before = 0;
        for (pi, pj) in PIVOTS {
            if (pi, pj) == (i, j) {
                break;
            }
            before += q.pow(free_positions(pi, pj).len() as u32);
        }
        before
            + free_positions(i, j)
                .iter()
                .fold(0, |acc, (r, k)| acc * q + self.rows[*r][*k])
    }

    /// The point `s a + t b` for a point `[s:t]` of the projective line.
    pub fn point(&self, st: P1Point) -> ProjectivePoint {
        let f = &self.field;
        let coords: Vec<u64> = (0..4)
            .map(|k| f.add(f.mul(st.s, self.rows[0][k]), f.mul(st.t, self.rows[1][k])))
            .collect();
        ProjectivePoint::new(f, &coords).unwrap()
    }

    /// The `q + 1` rational points of the line.
    pub fn points(&self) -> Vec<ProjectivePoint> {
        P1Point::all(&self.field).map(|st| self.point(st)).collect()
    }

    pub fn contains_point(&self, p: &ProjectivePoint) -> bool {
        let f = &self.field;
        let c = p.coords();
        // rank of the 3x4 matrix stays 2 iff every 3x3 minor vanishes
        let m = [self.rows[0], self.rows[1], [c[0], c[1], c[2], c[3]]];
        let det3 = |cols: [usize; 3]| {
            let e = |r: usize, k: usize| m[r][cols[k]];
            let t1 = f.mul(
                e(0, 0),
                f.sub(f.mul(e(1, 1), e(2, 2)), f.mul(e(1, 2), e(2, 1))),
            );
            let t2 = f.mul(
                e(0, 1),
                f.sub(f.mul(e(1, 0), e(2, 2)), f.mul(e(1, 2), e(2, 0))),
            );
            let t3 = f.mul(
                e(0, 2),
                f.sub(f.mul(e(1, 0), e(2, 1)), f.mul(e(1, 1), e(2, 0))),
            );
            f.add(f.sub(t1, t2), t3)
        };
        [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .iter()
            .all(|cols| det3(*cols) == 0)
    }
}

impl fmt::Display for LineRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[u64; 4]| {
            r.iter()
                .map(|x| self.field.format_raw(*x))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", row(&self.rows[0]), row(&self.rows[1]))
    }
}

impl fmt::Debug for LineRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LineRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A plane `sum c_i X_i = 0`, normalized so the first nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneRep {
    field: FieldSpec,
    coeffs: [u64; 4],
}

impl PlaneRep {
    pub fn new(field: &FieldSpec, coeffs: [u64; 4]) -> Option<Self> {
        let p = ProjectivePoint::new(field, &coeffs)?;
        let mut c = [0u64; 4];
        c.copy_from_slice(p.coords());
        Some(Self {
            field: field.clone(),
            coeffs: c,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64; 4] {
        &self.coeffs
    }

    pub fn eval(&self, coords: &[u64]) -> u64 {
        let f = &self.field;
        (0..4).fold(0, |acc, i| f.add(acc, f.mul(self.coeffs[i], coords[i])))
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.eval(p.coords()) == 0
    }
}

impl fmt::Display for PlaneRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| self.field.format_raw(*c))
            .collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Debug for PlaneRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `poly` carried into `field`, which must contain its coefficient field.
pub(crate) fn lift(poly: &Polynomial, field: &FieldSpec) -> Result<Polynomial> {
    if poly.field() == field {
        Ok(poly.clone())
    } else {
        poly.embed(field)
    }
}

/// The tangent plane `sum F_{X_i}(P) X_i = 0` at a smooth point of `F = 0`,
/// over the field of `point`.
pub fn tangent_plane(poly: &Polynomial, point: &ProjectivePoint) -> Result<PlaneRep> {
    let field = point.field();
    let g = lift(poly, field)?;
    if g.eval_raw(point.coords()) != 0 {
        return Err(Error::PointNotOnSurface);
    }
    let mut c = [0u64; 4];
    for (i, d) in g.gradient().iter().enumerate().take(4) {
        c[i] = d.eval_raw(point.coords());
    }
    let plane = PlaneRep::new(field, c).ok_or(Error::SingularPoint)?;
    debug_assert!(
        plane.contains(point)
            || (g.homogeneous_degree().unwrap() as u64).is_multiple_of(field.characteristic())
    );
    Ok(plane)
}

fn check_extension(k: u32) -> Result<()> {
    if k == 0 || k > EXTENSION_CAP {
        return Err(Error::ExtensionTooLarge {
            k,
            cap: EXTENSION_CAP,
        });
    }
    Ok(())
}

/// Number of points of `F = 0` in P^(n-1) over the degree-`k` extension of
/// the coefficient field.
pub fn count_points_on(poly: &Polynomial, k: u32) -> Result<u64> {
    check_extension(k)?;
    let field = poly.field().extension(k)?;
    let ev = lift(poly, &field)?.evaluator();
    Ok(count_points_where(poly.nvars() - 1, &field, |c, s| {
        ev.eval(c, s) == 0
    }))
}

/// The first point of the common zero set of `polys` over the degree-`k`
/// extension, if any.
pub fn find_common_zero(polys: &[Polynomial], k: u32) -> Result<Option<ProjectivePoint>> {
    check_extension(k)?;
    let Some(first) = polys.first() else {
        return Err(Error::InvalidArgument("no polynomials given".into()));
    };
    let field = first.field().extension(k)?;
    let evs = polys
        .iter()
        .map(|p| lift(p, &field).map(|p| p.evaluator()))
        .collect::<Result<Vec<_>>>()?;
    Ok(find_point_where(first.nvars() - 1, &field, |c, s| {
        evs.iter().all(|e| e.eval(c, s) == 0)
    }))
}

/// Every rational line on which `F` vanishes identically, in enumeration order.
pub fn lines_contained_in(poly: &Polynomial) -> Result<Vec<LineRep>> {
    let r = Restrictor::new(poly)?;
    Ok(par_lines(poly.field())
        .filter(|l| r.restrict(&l.rows[0], &l.rows[1]).is_zero())
        .collect())
}

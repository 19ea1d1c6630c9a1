//! Curves, families, pairwise intersections and hypothesis validation.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::geom::{fmt_q, lerp, parse_q, Point, Q};
use crate::order;
use crate::scan::{self, Contact};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    pub id: String,
    vertices: Vec<Point>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve {0}: fewer than two vertices")]
    TooShort(String),
    #[error("curve {0}: x not strictly increasing at vertex {1}")]
    NotMonotone(String, usize),
    #[error("x = {0} outside the curve's domain")]
    OutOfDomain(String),
    #[error("point {0} is not on curve {1}")]
    NotOnCurve(String, String),
    #[error("empty fragment")]
    EmptyFragment,
}

impl Curve {
    pub fn new(id: impl Into<String>, vertices: Vec<Point>) -> Result<Self, CurveError> {
        let id = id.into();
        if vertices.len() < 2 {
            return Err(CurveError::TooShort(id));
        }
        for (k, w) in vertices.windows(2).enumerate() {
            if w[0].x >= w[1].x {
                return Err(CurveError::NotMonotone(id, k + 1));
            }
        }
        Ok(Curve { id, vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn left(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn right(&self) -> &Point {
        &self.vertices[self.vertices.len() - 1]
    }

    pub fn contains_x(&self, x: &Q) -> bool {
        &self.left().x <= x && x <= &self.right().x
    }

    pub fn eval_at(&self, x: &Q) -> Result<Q, CurveError> {
        if !self.contains_x(x) {
            return Err(CurveError::OutOfDomain(fmt_q(x)));
        }
        let v = &self.vertices;
        let k = v.partition_point(|p| &p.x < x);
        if &v[k].x == x {
            return Ok(v[k].y.clone());
        }
        Ok(lerp(&v[k - 1], &v[k], x))
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        self.eval_at(&p.x).map(|y| y == p.y).unwrap_or(false)
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Curve {
        let mut v: Vec<Point> = self.vertices.iter().map(f).collect();
        if v.len() > 1 && v[0].x > v[1].x {
            v.reverse();
        }
        Curve { id: self.id.clone(), vertices: v }
    }
}

#[derive(Clone, Debug)]
pub enum Cut {
    Left,
    Right,
    At(Point),
}

/// The part of `c` between two cuts (either order).
pub fn subcurve(c: &Curve, p: &Cut, r: &Cut) -> Result<Curve, CurveError> {
    let resolve = |cut: &Cut| -> Result<Point, CurveError> {
        match cut {
            Cut::Left => Ok(c.left().clone()),
            Cut::Right => Ok(c.right().clone()),
            Cut::At(p) if c.on_curve(p) => Ok(p.clone()),
            Cut::At(p) => Err(CurveError::NotOnCurve(p.to_string(), c.id.clone())),
        }
    };
    let (mut a, mut b) = (resolve(p)?, resolve(r)?);
    if a.x > b.x {
        std::mem::swap(&mut a, &mut b);
    }
    if a.x == b.x {
        return Err(CurveError::EmptyFragment);
    }
    let mut v = vec![a.clone()];
    v.extend(c.vertices.iter().filter(|p| p.x > a.x && p.x < b.x).cloned());
    v.push(b);
    Curve::new(c.id.clone(), v)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Family {
    pub curves: Vec<Curve>,
    pub meta: Option<Value>,
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("malformed family JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("curve {0}: {1}")]
    Rational(String, crate::geom::ParseRationalError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("duplicate curve id {0}")]
    DuplicateId(String),
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    id: String,
    vertices: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    curves: Vec<CurveJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

impl Family {
    pub fn new(curves: Vec<Curve>) -> Self {
        Family { curves, meta: None }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    pub fn from_json(s: &str) -> Result<Self, FamilyError> {
        let raw: FamilyJson = serde_json::from_str(s)?;
        let mut seen = std::collections::HashSet::new();
        let mut curves = Vec::with_capacity(raw.curves.len());
        for c in raw.curves {
            if !seen.insert(c.id.clone()) {
                return Err(FamilyError::DuplicateId(c.id));
            }
            let mut vs = Vec::with_capacity(c.vertices.len());
            for [x, y] in &c.vertices {
                let px = parse_q(x).map_err(|e| FamilyError::Rational(c.id.clone(), e))?;
                let py = parse_q(y).map_err(|e| FamilyError::Rational(c.id.clone(), e))?;
                vs.push(Point::new(px, py));
            }
            curves.push(Curve::new(c.id, vs)?);
        }
        Ok(Family { curves, meta: raw.meta })
    }

    pub fn to_json(&self) -> String {
        let raw = FamilyJson {
            curves: self
                .curves
                .iter()
                .map(|c| CurveJson {
                    id: c.id.clone(),
                    vertices: c.vertices.iter().map(|p| [fmt_q(&p.x), fmt_q(&p.y)]).collect(),
                })
                .collect(),
            meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("family serializes")
    }

    /// Sub-family of the given curve indices (in that order), without metadata.
    pub fn slice(&self, idx: &[usize]) -> Family {
        Family::new(idx.iter().map(|&i| self.curves[i].clone()).collect())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("curves share a positive-length piece")]
pub struct OverlapError;

pub(crate) fn contacts(c1: &Curve, c2: &Curve) -> Result<Vec<Contact<Q>>, OverlapError> {
    scan::scan(&c1.vertices, &c2.vertices).map_err(|_| OverlapError)
}

pub fn pair_intersections(c1: &Curve, c2: &Curve) -> Result<Vec<Point>, OverlapError> {
    Ok(contacts(c1, c2)?.into_iter().map(|c| Point::new(c.x, c.y)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Crossing,
    Touching,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("point is not a common interior point")]
    NotInterior,
    #[error("zero difference beside the point (overlap)")]
    ZeroSide,
}

/// Side test at the midpoints between `p.x` and the neighbouring event abscissas.
pub fn classify_point(c1: &Curve, c2: &Curve, p: &Point) -> Result<Kind, ClassifyError> {
    if !c1.on_curve(p) || !c2.on_curve(p) {
        return Err(ClassifyError::NotInterior);
    }
    let mut events: Vec<Q> = c1.vertices.iter().chain(&c2.vertices).map(|v| v.x.clone()).collect();
    if let Ok(pts) = pair_intersections(c1, c2) {
        events.extend(pts.into_iter().map(|v| v.x));
    }
    let lo = c1.left().x.clone().max(c2.left().x.clone());
    let hi = c1.right().x.clone().min(c2.right().x.clone());
    let prev = events.iter().filter(|x| **x < p.x && **x >= lo).max().cloned();
    let next = events.iter().filter(|x| **x > p.x && **x <= hi).min().cloned();
    let (Some(prev), Some(next)) = (prev, next) else {
        return Err(ClassifyError::NotInterior);
    };
    let two = crate::geom::q(2);
    let side = |x: Q| -> i8 {
        let d = c1.eval_at(&x).unwrap() - c2.eval_at(&x).unwrap();
        crate::geom::sign(&d)
    };
    let l = side((&prev + &p.x) / &two);
    let r = side((&p.x + &next) / &two);
    if l == 0 || r == 0 {
        return Err(ClassifyError::ZeroSide);
    }
    Ok(if l == r { Kind::Touching } else { Kind::Crossing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Above {
    C1Above,
    C2Above,
    TheyCross,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AboveError {
    #[error("x-domains do not overlap")]
    EmptyDomain,
    #[error("curves overlap")]
    Overlap,
}

pub fn above(c1: &Curve, c2: &Curve) -> Result<Above, AboveError> {
    let (xs, d, _) = scan::profile(&c1.vertices, &c2.vertices);
    if xs.is_empty() {
        return Err(AboveError::EmptyDomain);
    }
    let pos = d.iter().any(|v| v > &Q::from_integer(0.into()));
    let neg = d.iter().any(|v| v < &Q::from_integer(0.into()));
    match (pos, neg) {
        (true, true) => Ok(Above::TheyCross),
        (true, false) => Ok(Above::C1Above),
        (false, true) => Ok(Above::C2Above),
        (false, false) => Err(AboveError::Overlap),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionRecord {
    pub a: usize,
    pub b: usize,
    pub point: Point,
    pub kind: Kind,
    pub lower: Option<usize>,
    pub ttype: Option<u8>,
    pub marked: bool,
}

impl IntersectionRecord {
    pub fn upper(&self) -> Option<usize> {
        self.lower.map(|l| if l == self.a { self.b } else { self.a })
    }

    pub fn other(&self, i: usize) -> usize {
        if i == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    PairCount { a: String, b: String, count: usize },
    Overlap { a: String, b: String },
    EndpointIntersection { a: String, b: String, x: String, y: String },
    TriplePoint { x: String, y: String, curves: Vec<String> },
    DuplicateEndpoint { x: String, y: String, curves: Vec<String> },
    EmptyFamily,
}

impl Violation {
    pub fn describe(&self) -> String {
        match self {
            Violation::PairCount { a, b, count } => format!("pair {a},{b} intersects {count} times"),
            Violation::Overlap { a, b } => format!("pair {a},{b} overlaps"),
            Violation::EndpointIntersection { a, b, x, y } => {
                format!("pair {a},{b} meets at an endpoint ({x}, {y})")
            }
            Violation::TriplePoint { x, y, curves } => {
                format!("triple point ({x}, {y}) on {}", curves.join(","))
            }
            Violation::DuplicateEndpoint { x, y, curves } => {
                format!("duplicate endpoint ({x}, {y}) of {}", curves.join(","))
            }
            Violation::EmptyFamily => "family has no curves".into(),
        }
    }

    /// Curve ids involved, for counterexample slicing.
    pub fn curves(&self) -> Vec<String> {
        match self {
            Violation::PairCount { a, b, .. }
            | Violation::Overlap { a, b }
            | Violation::EndpointIntersection { a, b, .. } => vec![a.clone(), b.clone()],
            Violation::TriplePoint { curves, .. } | Violation::DuplicateEndpoint { curves, .. } => curves.clone(),
            Violation::EmptyFamily => vec![],
        }
    }
}

/// A family that passed validation, with its records (types filled in).
#[derive(Clone, Debug)]
pub struct ValidFamily {
    pub family: Family,
    pub records: Vec<IntersectionRecord>,
    index: HashMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub valid: Option<ValidFamily>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.valid.is_some()
    }

    /// `{valid, violations, records}`; records only for valid families.
    pub fn to_json(&self) -> String {
        let records: Vec<Value> = match &self.valid {
            None => vec![],
            Some(v) => v
                .records
                .iter()
                .map(|r| {
                    let mut o = serde_json::json!({
                        "a": v.id(r.a),
                        "b": v.id(r.b),
                        "x": fmt_q(&r.point.x),
                        "y": fmt_q(&r.point.y),
                        "kind": r.kind,
                    });
                    if let (Some(lo), Some(t)) = (r.lower, r.ttype) {
                        o["lower"] = v.id(lo).into();
                        o["type"] = t.into();
                    }
                    o
                })
                .collect(),
        };
        let out = serde_json::json!({
            "valid": self.is_valid(),
            "violations": self.violations,
            "records": records,
        });
        serde_json::to_string_pretty(&out).expect("report serializes") + "\n"
    }
}

impl ValidFamily {
    pub fn n(&self) -> usize {
        self.family.len()
    }

    pub fn curve(&self, i: usize) -> &Curve {
        &self.family.curves[i]
    }

    pub fn record(&self, i: usize, j: usize) -> &IntersectionRecord {
        let key = if i < j { (i, j) } else { (j, i) };
        &self.records[self.index[&key]]
    }

    pub fn meet(&self, i: usize, j: usize) -> &Point {
        &self.record(i, j).point
    }

    pub fn touching(&self) -> impl Iterator<Item = &IntersectionRecord> {
        self.records.iter().filter(|r| r.kind == Kind::Touching)
    }

    pub fn id(&self, i: usize) -> &str {
        &self.family.curves[i].id
    }
}

pub fn validate_family(f: &Family) -> ValidationReport {
    let n = f.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::EmptyFamily);
    }

    let mut ends: BTreeMap<&Point, Vec<String>> = BTreeMap::new();
    for c in &f.curves {
        ends.entry(c.left()).or_default().push(c.id.clone());
        ends.entry(c.right()).or_default().push(c.id.clone());
    }
    for (p, ids) in ends {
        if ids.len() > 1 {
            violations.push(Violation::DuplicateEndpoint { x: fmt_q(&p.x), y: fmt_q(&p.y), curves: ids });
        }
    }

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let found: Vec<Result<Vec<Contact<Q>>, OverlapError>> =
        pairs.par_iter().map(|&(i, j)| contacts(&f.curves[i], &f.curves[j])).collect();

    let mut records = Vec::with_capacity(pairs.len());
    let mut at: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (&(i, j), res) in pairs.iter().zip(found) {
        let (a, b) = (f.curves[i].id.clone(), f.curves[j].id.clone());
        let cs = match res {
            Err(_) => {
                violations.push(Violation::Overlap { a, b });
                continue;
            }
            Ok(cs) => cs,
        };
        for c in &cs {
            let e = at.entry(Point::new(c.x.clone(), c.y.clone())).or_default();
            e.push(i);
            e.push(j);
        }
        if cs.len() != 1 {
            violations.push(Violation::PairCount { a, b, count: cs.len() });
            continue;
        }
        let c = &cs[0];
        if !c.interior() {
            violations.push(Violation::EndpointIntersection { a, b, x: fmt_q(&c.x), y: fmt_q(&c.y) });
            continue;
        }
        let kind = if c.crossing() { Kind::Crossing } else { Kind::Touching };
        let lower = (kind == Kind::Touching).then_some(if c.left < 0 { i } else { j });
        records.push(IntersectionRecord {
            a: i,
            b: j,
            point: Point::new(c.x.clone(), c.y.clone()),
            kind,
            lower,
            ttype: None,
            marked: false,
        });
    }
    for (p, mut who) in at {
        who.sort_unstable();
        who.dedup();
        if who.len() > 2 {
            violations.push(Violation::TriplePoint {
                x: fmt_q(&p.x),
                y: fmt_q(&p.y),
                curves: who.iter().map(|&k| f.curves[k].id.clone()).collect(),
            });
        }
    }

    if !violations.is_empty() {
        return ValidationReport { violations, valid: None };
    }
    for r in records.iter_mut() {
        if let Some(lo) = r.lower {
            r.ttype = Some(order::touch_type_of(f, lo, r.other(lo)));
        }
    }
    let index = records.iter().enumerate().map(|(k, r)| ((r.a, r.b), k)).collect();
    ValidationReport { violations, valid: Some(ValidFamily { family: f.clone(), records, index }) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qr};

    fn c(id: &str, v: &[(i64, i64)]) -> Curve {
        Curve::new(id, v.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(c("a", &[(0, 0), (2, 2)]).eval_at(&q(1)).unwrap(), q(1));
        assert_eq!(c("a", &[(0, 0), (1, 1), (2, 0)]).eval_at(&qr(3, 2)).unwrap(), qr(1, 2));
        assert!(c("a", &[(0, 0), (2, 2)]).eval_at(&q(3)).is_err());
    }

    #[test]
    fn curve_invariants() {
        assert_eq!(Curve::new("a", vec![Point::ints(0, 0)]), Err(CurveError::TooShort("a".into())));
        assert!(Curve::new("a", vec![Point::ints(0, 0), Point::ints(0, 1)]).is_err());
    }

    #[test]
    fn intersection_examples() {
        let w = c("w", &[(0, 0), (1, 1), (2, 0)]);
        let h = c("h", &[(0, 1), (2, 1)]);
        assert_eq!(pair_intersections(&w, &h).unwrap(), vec![Point::ints(1, 1)]);
        assert_eq!(pair_intersections(&c("a", &[(0, 0), (2, 0)]), &c("b", &[(1, 0), (3, 0)])), Err(OverlapError));
        assert_eq!(pair_intersections(&c("a", &[(0, 0), (2, 2)]), &c("b", &[(0, 2), (2, 0)])).unwrap().len(), 1);
    }

    #[test]
    fn classify_examples() {
        let o = Point::ints(0, 0);
        assert_eq!(classify_point(&c("a", &[(-1, -1), (1, 1)]), &c("b", &[(-1, 1), (1, -1)]), &o), Ok(Kind::Crossing));
        let w = c("w", &[(0, 0), (1, 1), (2, 0)]);
        let h = c("h", &[(0, 1), (2, 1)]);
        assert_eq!(classify_point(&w, &h, &Point::ints(1, 1)), Ok(Kind::Touching));
        let a = c("a", &[(0, 0), (1, 1), (2, 2)]);
        let b = Curve::new("b", vec![Point::ints(0, 2), Point::ints(1, 1), Point::new(q(2), qr(3, 2))]).unwrap();
        assert_eq!(classify_point(&a, &b, &Point::ints(1, 1)), Ok(Kind::Crossing));
    }

    #[test]
    fn above_examples() {
        assert_eq!(above(&c("a", &[(0, 1), (1, 1)]), &c("b", &[(0, 0), (1, 0)])), Ok(Above::C1Above));
        let w = c("w", &[(0, 0), (1, 1), (2, 0)]);
        let h = c("h", &[(0, 1), (2, 1)]);
        assert_eq!(above(&w, &h), Ok(Above::C2Above));
        assert_eq!(above(&c("a", &[(0, 0), (2, 2)]), &c("b", &[(0, 2), (2, 0)])), Ok(Above::TheyCross));
        assert_eq!(above(&c("a", &[(0, 0), (1, 0)]), &c("b", &[(2, 0), (3, 0)])), Err(AboveError::EmptyDomain));
    }

    #[test]
    fn subcurve_examples() {
        let a = c("a", &[(0, 0), (2, 2)]);
        let f = subcurve(&a, &Cut::At(Point::ints(0, 0)), &Cut::At(Point::ints(1, 1))).unwrap();
        assert_eq!(f.vertices(), &[Point::ints(0, 0), Point::ints(1, 1)]);
        let left = subcurve(&a, &Cut::Left, &Cut::At(Point::ints(1, 1))).unwrap();
        assert_eq!(left.right(), &Point::ints(1, 1));
        assert!(subcurve(&a, &Cut::Left, &Cut::At(Point::ints(1, 0))).is_err());
    }

    fn fam(cs: Vec<Curve>) -> Family {
        Family::new(cs)
    }

    #[test]
    fn validate_examples() {
        let lines: Vec<Curve> =
            (1..=5).map(|m| c(&format!("l{m}"), &[(-2 * 5 - m, (-2 * 5 - m) * m + m * m), (m, 2 * m * m)])).collect();
        let rep = validate_family(&fam(lines));
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        let v = rep.valid.unwrap();
        assert_eq!(v.records.len(), 10);
        assert!(v.records.iter().all(|r| r.kind == Kind::Crossing));

        let rep = validate_family(&fam(vec![c("a", &[(0, 0), (1, 0)]), c("b", &[(0, 1), (1, 1)])]));
        assert_eq!(rep.violations, vec![Violation::PairCount { a: "a".into(), b: "b".into(), count: 0 }]);

        let rep = validate_family(&fam(vec![
            c("a", &[(-1, -1), (1, 1)]),
            c("b", &[(-1, 1), (1, -1)]),
            c("c", &[(-2, 0), (2, 0)]),
        ]));
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::TriplePoint { .. })));
    }

    #[test]
    fn endpoint_and_duplicate_violations() {
        let rep = validate_family(&fam(vec![c("a", &[(0, 0), (2, 2)]), c("b", &[(1, 1), (3, 0)])]));
        assert!(matches!(rep.violations[0], Violation::EndpointIntersection { .. }));
        let rep = validate_family(&fam(vec![c("a", &[(0, 0), (2, 2)]), c("b", &[(0, 0), (2, -2)])]));
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::DuplicateEndpoint { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let f = fam(vec![Curve::new("x", vec![Point::new(qr(1, 3), qr(-7, 2)), Point::ints(5, 0)]).unwrap()]);
        let s = f.to_json();
        assert!(s.contains("\"1/3\"") && s.contains("\"-7/2\""));
        assert_eq!(Family::from_json(&s).unwrap(), f);
        assert!(matches!(
            Family::from_json(
                r#"{"curves":[{"id":"a","vertices":[["0","0"],["1","1"]]},{"id":"a","vertices":[["0","0"],["1","1"]]}]}"#
            ),
            Err(FamilyError::DuplicateId(_))
        ));
    }
}

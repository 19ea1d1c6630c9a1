//! Exact rational points, segments and the two primitive predicates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Accepts "p" or "p/q" (q != 0); the value is reduced.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Ordered lexicographically by (x, y).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(q(x), q(y))
    }

    pub fn cmp_x(&self, other: &Point) -> Ordering {
        self.x.cmp(&other.x)
    }

    pub fn cmp_y(&self, other: &Point) -> Ordering {
        self.y.cmp(&other.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

/// A non-vertical segment; `a.x < b.x` always holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    a: Point,
    b: Point,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("vertical or degenerate segment at x = {0}")]
pub struct VerticalSegment(pub String);

impl Segment {
    /// Endpoints may be given in either order; equal abscissas are rejected.
    pub fn new(p: Point, r: Point) -> Result<Self, VerticalSegment> {
        match p.x.cmp(&r.x) {
            Ordering::Less => Ok(Segment { a: p, b: r }),
            Ordering::Greater => Ok(Segment { a: r, b: p }),
            Ordering::Equal => Err(VerticalSegment(fmt_q(&p.x))),
        }
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    /// y on the supporting line at `x`.
    pub fn y_at(&self, x: &Q) -> Q {
        lerp(&self.a, &self.b, x)
    }
}

pub(crate) fn lerp(a: &Point, b: &Point, x: &Q) -> Q {
    &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
}

/// Sign of (q - p) x (r - p).
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    let v = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    sign(&v)
}

pub fn sign(v: &Q) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegHit {
    Empty,
    SinglePoint(Point),
    OverlapSegment,
}

pub fn seg_intersect(s1: &Segment, s2: &Segment) -> SegHit {
    let lo = (&s1.a.x).max(&s2.a.x).clone();
    let hi = (&s1.b.x).min(&s2.b.x).clone();
    if lo > hi {
        return SegHit::Empty;
    }
    let d_lo = s1.y_at(&lo) - s2.y_at(&lo);
    if lo == hi {
        return if d_lo.is_zero() { SegHit::SinglePoint(Point::new(lo.clone(), s1.y_at(&lo))) } else { SegHit::Empty };
    }
    let d_hi = s1.y_at(&hi) - s2.y_at(&hi);
    match (sign(&d_lo), sign(&d_hi)) {
        (0, 0) => SegHit::OverlapSegment,
        (0, _) => SegHit::SinglePoint(Point::new(lo.clone(), s1.y_at(&lo))),
        (_, 0) => SegHit::SinglePoint(Point::new(hi.clone(), s1.y_at(&hi))),
        (a, b) if a != b => {
            let x = &lo + &d_lo * (&hi - &lo) / (&d_lo - &d_hi);
            let y = s1.y_at(&x);
            SegHit::SinglePoint(Point::new(x, y))
        }
        _ => SegHit::Empty,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::new(Point::ints(ax, ay), Point::ints(bx, by)).unwrap()
    }

    #[test]
    fn orient_examples() {
        let o = Point::ints(0, 0);
        assert_eq!(orient(&o, &Point::ints(1, 0), &Point::ints(2, 0)), 0);
        assert_eq!(orient(&o, &Point::ints(1, 0), &Point::ints(1, 1)), 1);
        assert_eq!(orient(&o, &Point::ints(1, 0), &Point::ints(1, -1)), -1);
    }

    #[test]
    fn seg_examples() {
        assert_eq!(seg_intersect(&seg(0, 0, 2, 2), &seg(0, 2, 2, 0)), SegHit::SinglePoint(Point::ints(1, 1)));
        assert_eq!(seg_intersect(&seg(0, 0, 1, 0), &seg(2, 0, 3, 0)), SegHit::Empty);
        assert_eq!(seg_intersect(&seg(0, 0, 2, 0), &seg(1, 0, 3, 0)), SegHit::OverlapSegment);
    }

    #[test]
    fn seg_touching_at_shared_abscissa() {
        assert_eq!(seg_intersect(&seg(0, 0, 1, 1), &seg(1, 1, 2, 0)), SegHit::SinglePoint(Point::ints(1, 1)));
        assert_eq!(seg_intersect(&seg(0, 0, 1, 1), &seg(1, 2, 2, 0)), SegHit::Empty);
    }

    #[test]
    fn vertical_rejected() {
        assert!(Segment::new(Point::ints(1, 0), Point::ints(1, 5)).is_err());
        let s = Segment::new(Point::ints(3, 0), Point::ints(1, 5)).unwrap();
        assert_eq!(s.a().x, q(1));
    }

    #[test]
    fn rational_text() {
        assert_eq!(fmt_q(&parse_q("4/6").unwrap()), "2/3");
        assert_eq!(fmt_q(&parse_q("-8/4").unwrap()), "-2");
        assert_eq!(fmt_q(&parse_q("3/-6").unwrap()), "-1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
    }
}

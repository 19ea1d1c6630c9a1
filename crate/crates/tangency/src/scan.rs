//! Pairwise contact scan over the merged breakpoints of two x-monotone polylines.
//!
//! Generic over the exact scalar so the enumeration kernel can run the same
//! code on `Ratio<i64>` while everything else uses `BigRational`.

use num_traits::{Num, Signed};

pub trait Exact: Clone + Ord + Num + Signed {}
impl<T: Clone + Ord + Num + Signed> Exact for T {}

pub trait Xy<T> {
    fn px(&self) -> &T;
    fn py(&self) -> &T;
}

impl<T> Xy<T> for (T, T) {
    fn px(&self) -> &T {
        &self.0
    }
    fn py(&self) -> &T {
        &self.1
    }
}

impl Xy<crate::geom::Q> for crate::geom::Point {
    fn px(&self) -> &crate::geom::Q {
        &self.x
    }
    fn py(&self) -> &crate::geom::Q {
        &self.y
    }
}

/// A common point of two polylines. `left`/`right` are the signs of
/// (first − second) just left/right of it; 0 means the common domain ends there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contact<T> {
    pub x: T,
    pub y: T,
    pub left: i8,
    pub right: i8,
}

impl<T> Contact<T> {
    pub fn interior(&self) -> bool {
        self.left != 0 && self.right != 0
    }

    pub fn crossing(&self) -> bool {
        self.left != self.right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overlap;

fn sgn<T: Exact>(v: &T) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn interp<T: Exact>(x0: &T, y0: &T, x1: &T, y1: &T, x: &T) -> T {
    y0.clone() + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
}

/// Values of the polyline at the sorted abscissas `xs` (all inside its domain).
fn walk<T: Exact, P: Xy<T>>(v: &[P], xs: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(xs.len());
    let mut i = 0;
    for x in xs {
        while i + 2 < v.len() && v[i + 1].px() < x {
            i += 1;
        }
        let (a, b) = (&v[i], &v[i + 1]);
        if a.px() == x {
            out.push(a.py().clone());
        } else if b.px() == x {
            out.push(b.py().clone());
        } else {
            out.push(interp(a.px(), a.py(), b.px(), b.py(), x));
        }
    }
    out
}

/// Merged breakpoints of both polylines over the common domain, with the
/// difference (a − b) and a's value at each. Empty if the domains are disjoint.
pub fn profile<T: Exact, P: Xy<T>>(a: &[P], b: &[P]) -> (Vec<T>, Vec<T>, Vec<T>) {
    let lo = a[0].px().max(b[0].px()).clone();
    let hi = a[a.len() - 1].px().min(b[b.len() - 1].px()).clone();
    if lo > hi {
        return (vec![], vec![], vec![]);
    }
    let mut xs = Vec::with_capacity(a.len() + b.len());
    xs.push(lo.clone());
    let (mut i, mut j) = (0, 0);
    loop {
        let xa = a.get(i).map(|p| p.px());
        let xb = b.get(j).map(|p| p.px());
        let next = match (xa, xb) {
            (None, None) => break,
            (Some(u), None) => {
                i += 1;
                u
            }
            (None, Some(w)) => {
                j += 1;
                w
            }
            (Some(u), Some(w)) => {
                if u <= w {
                    i += 1;
                    u
                } else {
                    j += 1;
                    w
                }
            }
        };
        if next > &lo && next < &hi && xs.last() != Some(next) {
            xs.push(next.clone());
        }
    }
    if hi > lo {
        xs.push(hi);
    }
    let ya = walk(a, &xs);
    let yb = walk(b, &xs);
    let d = ya.iter().zip(&yb).map(|(u, w)| u.clone() - w.clone()).collect();
    (xs, d, ya)
}

/// All common points, sorted by x, each with its side signs.
pub fn scan<T: Exact, P: Xy<T>>(a: &[P], b: &[P]) -> Result<Vec<Contact<T>>, Overlap> {
    let (xs, d, ya) = profile(a, b);
    let m = xs.len();
    let mut out = Vec::new();
    for k in 0..m {
        let s = sgn(&d[k]);
        if s == 0 {
            if k > 0 && sgn(&d[k - 1]) == 0 {
                return Err(Overlap);
            }
            out.push(Contact {
                x: xs[k].clone(),
                y: ya[k].clone(),
                left: if k > 0 { sgn(&d[k - 1]) } else { 0 },
                right: if k + 1 < m { sgn(&d[k + 1]) } else { 0 },
            });
        } else if k + 1 < m {
            let t = sgn(&d[k + 1]);
            if t != 0 && t != s {
                let x = xs[k].clone()
                    + d[k].clone() * (xs[k + 1].clone() - xs[k].clone()) / (d[k].clone() - d[k + 1].clone());
                let y = interp(&xs[k], &ya[k], &xs[k + 1], &ya[k + 1], &x);
                out.push(Contact { x, y, left: s, right: t });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type R = Ratio<i64>;

    fn pl(v: &[(i64, i64)]) -> Vec<(R, R)> {
        v.iter().map(|&(x, y)| (R::from(x), R::from(y))).collect()
    }

    #[test]
    fn crossing_inside_piece() {
        let c = scan(&pl(&[(0, 0), (2, 2)]), &pl(&[(0, 2), (2, 0)])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].x, R::from(1));
        assert!(c[0].crossing() && c[0].interior());
    }

    #[test]
    fn touch_at_vertex() {
        let c = scan(&pl(&[(0, 0), (1, 1), (2, 0)]), &pl(&[(0, 1), (2, 1)])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].left, c[0].right), (-1, -1));
    }

    #[test]
    fn overlap_detected() {
        assert_eq!(scan(&pl(&[(0, 0), (2, 0)]), &pl(&[(1, 0), (3, 0)])), Err(Overlap));
    }

    #[test]
    fn endpoint_contact_has_zero_side() {
        let c = scan(&pl(&[(0, 0), (2, 2)]), &pl(&[(1, 1), (3, 0)])).unwrap();
        assert_eq!(c.len(), 1);
        assert!(!c[0].interior());
    }

    #[test]
    fn disjoint_domains() {
        assert!(scan(&pl(&[(0, 0), (1, 0)]), &pl(&[(2, 0), (3, 0)])).unwrap().is_empty());
    }
}

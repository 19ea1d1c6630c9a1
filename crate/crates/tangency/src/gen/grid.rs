//! Many tangency points from point–line incidences.
//!
//! Points {1..k} × {1..4k²}, lines y = m·x + b with m ∈ 1..k, b ∈ 1..2k².
//! Each incident point (x0, y0) gets a convex gadget: the chord polyline of
//! the parabola y = y0 − h + a·(x − x0)² through abscissas x0 + j/(2a),
//! j = 0..k+1. Line m is lowered by h + m²/(4a), which makes it tangent to
//! that parabola at j = m — a gadget vertex — and strictly below it elsewhere.
//! Every incidence becomes one tangency point. Lines still cross one another,
//! so the family is only checked in relaxed mode.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::curve::{contacts, Curve, Family, Violation};
use crate::geom::{fmt_q, q, qr, to_f64, Point, Q};

#[derive(Clone, Debug)]
pub struct RelaxedFamily {
    pub family: Family,
    pub k: usize,
    /// Incidences counted by direct enumeration of the grid.
    pub incidences: usize,
    pub report: RelaxedReport,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RelaxedReport {
    pub n: usize,
    pub tangency_points: usize,
    pub tangent_pairs: usize,
    pub violations: Vec<Violation>,
}

impl RelaxedReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn count_incidences(k: usize) -> usize {
    let k = k as i64;
    let mut t = 0;
    for m in 1..=k {
        for b in 1..=2 * k * k {
            t += (1..=k).filter(|&x| (1..=4 * k * k).contains(&(m * x + b))).count();
        }
    }
    t
}

pub fn gen_grid_incidence(k: usize) -> RelaxedFamily {
    assert!(k >= 2);
    let ki = k as i64;
    let a = 4 * (ki + 1) * (ki + 1);
    let h = qr(1, 8);

    let mut incident: BTreeSet<(i64, i64)> = BTreeSet::new();
    for m in 1..=ki {
        for b in 1..=2 * ki * ki {
            for x in 1..=ki {
                if m * x + b <= 4 * ki * ki {
                    incident.insert((x, m * x + b));
                }
            }
        }
    }

    let mut curves = Vec::new();
    for &(x0, y0) in &incident {
        let v = (0..=ki + 1).map(|j| Point::new(q(x0) + qr(j, 2 * a), q(y0) - &h + qr(j * j, 4 * a))).collect();
        curves.push(Curve::new(format!("g{x0}_{y0}"), v).expect("increasing x"));
    }
    let (lo, hi) = (qr(1, 2), q(ki) + qr(1, 2));
    for m in 1..=ki {
        let drop = h.clone() + qr(m * m, 4 * a);
        for b in 1..=2 * ki * ki {
            let at = |x: &Q| Point::new(x.clone(), q(m) * x + q(b) - &drop);
            curves.push(Curve::new(format!("m{m}b{b}"), vec![at(&lo), at(&hi)]).expect("increasing x"));
        }
    }
    let mut family = Family::new(curves);
    let report = validate_relaxed(&family);
    family.meta = Some(json!({
        "generator": "grid-incidence",
        "k": k,
        "relaxed": true,
        "n": family.len(),
        "tangencyPoints": report.tangency_points,
        "relaxedValid": report.is_valid(),
    }));
    RelaxedFamily { family, k, incidences: count_incidences(k), report }
}

/// Float bounding data used only to skip pairs that provably cannot meet.
struct Approx {
    v: Vec<(f64, f64)>,
}

const SLACK: f64 = 1e-6;

impl Approx {
    fn new(c: &Curve) -> Self {
        Approx { v: c.vertices().iter().map(|p| (to_f64(&p.x), to_f64(&p.y))).collect() }
    }

    fn xr(&self) -> (f64, f64) {
        (self.v[0].0, self.v[self.v.len() - 1].0)
    }

    fn y_range(&self, lo: f64, hi: f64) -> (f64, f64) {
        let at = |x: f64| {
            let k = self.v.partition_point(|p| p.0 < x).clamp(1, self.v.len() - 1);
            let (p, r) = (self.v[k - 1], self.v[k]);
            p.1 + (r.1 - p.1) * (x - p.0) / (r.0 - p.0)
        };
        let mut ys = vec![at(lo), at(hi)];
        ys.extend(self.v.iter().filter(|p| p.0 > lo && p.0 < hi).map(|p| p.1));
        ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)))
    }

    fn may_meet(&self, o: &Approx) -> bool {
        let ((a0, a1), (b0, b1)) = (self.xr(), o.xr());
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        if lo > hi + SLACK {
            return false;
        }
        let (lo, hi) = (lo.min(hi), hi.max(lo));
        let ((p0, p1), (q0, q1)) = (self.y_range(lo, hi), o.y_range(lo, hi));
        !(p1 + SLACK < q0 || q1 + SLACK < p0)
    }
}

/// Relaxed hypotheses: each pair meets at most once and never overlaps;
/// tangencies are interior; no third curve passes through a tangency point.
pub fn validate_relaxed(f: &Family) -> RelaxedReport {
    let n = f.len();
    let approx: Vec<Approx> = f.curves.par_iter().map(Approx::new).collect();
    let found: Vec<(usize, usize, Result<Vec<_>, _>)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let approx = &approx;
            (i + 1..n).filter(move |&j| approx[i].may_meet(&approx[j])).map(move |j| (i, j))
        })
        .map(|(i, j)| (i, j, contacts(&f.curves[i], &f.curves[j])))
        .collect();

    let mut violations = Vec::new();
    let mut at: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    let mut touch_points: BTreeSet<Point> = BTreeSet::new();
    let mut tangent_pairs = 0;
    for (i, j, res) in found {
        let (a, b) = (f.curves[i].id.clone(), f.curves[j].id.clone());
        let cs = match res {
            Ok(cs) => cs,
            Err(_) => {
                violations.push(Violation::Overlap { a, b });
                continue;
            }
        };
        if cs.len() > 1 {
            violations.push(Violation::PairCount { a: a.clone(), b: b.clone(), count: cs.len() });
        }
        for c in cs {
            let p = Point::new(c.x.clone(), c.y.clone());
            at.entry(p.clone()).or_default().extend([i, j]);
            if c.crossing() {
                continue;
            }
            if !c.interior() {
                violations.push(Violation::EndpointIntersection {
                    a: a.clone(),
                    b: b.clone(),
                    x: fmt_q(&c.x),
                    y: fmt_q(&c.y),
                });
                continue;
            }
            tangent_pairs += 1;
            touch_points.insert(p);
        }
    }
    for p in &touch_points {
        let who = &at[p];
        if who.len() > 2 {
            violations.push(Violation::TriplePoint {
                x: fmt_q(&p.x),
                y: fmt_q(&p.y),
                curves: who.iter().map(|&k| f.curves[k].id.clone()).collect(),
            });
        }
    }
    RelaxedReport { n, tangency_points: touch_points.len(), tangent_pairs, violations }
}

//! Brute-force checkers for every structural claim, run on all qualifying tuples.

use std::collections::{BTreeMap, BTreeSet};

use crate::curve::{subcurve, Cut, Kind, ValidFamily};
use crate::geom::{q, Point, Q};
use crate::graph::{ForestVerdict, Rodl, TangencyGraph};
use crate::order::{longest_chain, Color};

use super::pipelines::{NestedRun, NonNestedRun};

pub const NAMES: &[&str] = &[
    "poset",
    "blue-cross",
    "blue-cross-between",
    "b-above",
    "red-cross-between",
    "b0-b2",
    "structure",
    "forest",
    "surviving-blues-cross",
    "no-7-path",
    "k-path",
    "reds-cross-non-nested",
    "blues-cross-non-nested",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub curves: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub instances: usize,
    pub failure: Option<Failure>,
}

struct Tally {
    instances: usize,
    failure: Option<Failure>,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: 0, failure: None }
    }

    fn check(&mut self, ok: bool, curves: &[usize], detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Failure { curves: curves.to_vec(), detail: detail() });
        }
    }

    fn done(self) -> Outcome {
        Outcome { instances: self.instances, failure: self.failure }
    }
}

fn ix(v: &ValidFamily, a: usize, b: usize) -> &Q {
    &v.meet(a, b).x
}

fn y_at(v: &ValidFamily, c: usize, x: &Q) -> Q {
    v.curve(c).eval_at(x).expect("abscissa inside the curve's domain")
}

/// Is `upper` above `lower` just left of their common point?
fn above_before_meet(v: &ValidFamily, upper: usize, lower: usize) -> bool {
    let (cu, cl) = (v.curve(upper), v.curve(lower));
    let lo = (&cu.left().x).max(&cl.left().x).clone();
    let x = (lo + ix(v, upper, lower)) / q(2);
    y_at(v, upper, &x) > y_at(v, lower, &x)
}

fn touching_partners(v: &ValidFamily, recs: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &k in recs {
        let r = &v.records[k];
        let (lo, up) = (r.lower.unwrap(), r.upper().unwrap());
        m.entry(up).or_default().push(lo);
        m.entry(lo).or_default().push(up);
    }
    m
}

pub fn poset(v: &ValidFamily) -> Outcome {
    let all: Vec<usize> = (0..v.n()).collect();
    let mut t = Tally::new();
    for i in 1..=4u8 {
        let (len, chain) = longest_chain(v, &all, i);
        t.check(len <= 2, &chain, || format!("chain of length {len} in relation {i}"));
    }
    t.instances = v.touching().count();
    t.done()
}

pub fn blue_cross(run: &NestedRun) -> Outcome {
    let v = &run.norm.v;
    let blues = run.blues();
    let mut t = Tally::new();
    for (x, &a) in blues.iter().enumerate() {
        for &b in &blues[x + 1..] {
            t.check(v.record(a, b).kind == Kind::Crossing, &[a, b], || "two blue curves touch".into());
        }
    }
    t.done()
}

pub fn blue_cross_between(run: &NestedRun) -> Outcome {
    let v = &run.norm.v;
    let mut t = Tally::new();
    let partners = touching_partners(v, &run.considered);
    for r in run.reds() {
        let bs = &partners[&r];
        for &b1 in bs {
            for &b2 in bs {
                if b1 == b2 || ix(v, r, b1) >= ix(v, r, b2) {
                    continue;
                }
                let m = ix(v, b1, b2);
                t.check(ix(v, r, b1) < m && m < ix(v, r, b2), &[r, b1, b2], || {
                    "blues touching one red do not cross between the tangencies".into()
                });
            }
        }
    }
    t.done()
}

pub fn b_above(run: &NestedRun) -> Outcome {
    let v = &run.norm.v;
    let blues = run.blues();
    let partners = touching_partners(v, &run.considered);
    let share_red = |a: usize, b: usize| -> Option<usize> {
        let pa: BTreeSet<&usize> = partners[&a].iter().collect();
        partners[&b].iter().find(|r| pa.contains(r)).copied()
    };
    let mut t = Tally::new();
    for (x, &b1) in blues.iter().enumerate() {
        for &b2 in &blues[x + 1..] {
            let Some(r) = share_red(b1, b2) else { continue };
            let p = v.meet(b1, b2);
            for &b in &blues {
                if b == b1 || b == b2 {
                    continue;
                }
                let (u, w) = (ix(v, b1, b), ix(v, b2, b));
                let between = (u < &p.x && &p.x < w) || (w < &p.x && &p.x < u);
                if !between {
                    continue;
                }
                t.check(p.y < y_at(v, b, &p.x), &[b1, b2, b, r], || {
                    "blue-blue crossing lies above a third blue".into()
                });
            }
        }
    }
    t.done()
}

pub fn red_cross_between(run: &NestedRun) -> Outcome {
    let v = &run.norm.v;
    let mut t = Tally::new();
    let partners = touching_partners(v, &run.unmarked);
    for b in run.blues() {
        let Some(rs) = partners.get(&b) else { continue };
        for &r1 in rs {
            for &r2 in rs {
                if r1 == r2 || ix(v, b, r1) >= ix(v, b, r2) {
                    continue;
                }
                let m = ix(v, r1, r2);
                t.check(ix(v, b, r1) < m && m < ix(v, b, r2), &[b, r1, r2], || {
                    "reds touching one blue do not cross between the tangencies".into()
                });
            }
        }
    }
    t.done()
}

fn neighbours(g: &TangencyGraph) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &g.edges {
        m.entry(e.blue).or_default().push(e.red);
        m.entry(e.red).or_default().push(e.blue);
    }
    m
}

pub fn b0_b2(run: &NestedRun) -> Outcome {
    let v = &run.norm.v;
    let ell = &run.norm.ell;
    let nb = neighbours(&run.graph);
    let mut t = Tally::new();
    for &b1 in &run.graph.blue {
        let Some(rs) = nb.get(&b1) else { continue };
        for &r0 in rs {
            for &r1 in rs {
                if r0 == r1 {
                    continue;
                }
                for &b0 in &nb[&r0] {
                    for &b2 in &nb[&r1] {
                        if b0 == b1 || b2 == b1 || b0 == b2 {
                            continue;
                        }
                        let (y0, y1, y2) = (y_at(v, b0, ell), y_at(v, b1, ell), y_at(v, b2, ell));
                        if !(y1 < y0 && y0 < y2) {
                            continue;
                        }
                        t.check(ix(v, b0, b2) < ell, &[b0, r0, b1, r1, b2], || {
                            "b0 and b2 meet right of the stabbing line".into()
                        });
                    }
                }
            }
        }
    }
    t.done()
}

fn on_fragment(v: &ValidFamily, c: usize, from: Cut, to: Cut, p: &Point) -> bool {
    match subcurve(v.curve(c), &from, &to) {
        Ok(frag) => frag.on_curve(p) && frag.left() != p && frag.right() != p,
        Err(_) => false,
    }
}

/// Evaluated along the shortest-cycle witness; vacuous when the graph is a forest.
pub fn structure(run: &NestedRun) -> Outcome {
    let mut t = Tally::new();
    let ForestVerdict::Cycle(cyc) = &run.forest else { return t.done() };
    let v = &run.norm.v;
    let ell = &run.norm.ell;
    let blue: BTreeSet<usize> = run.graph.blue.iter().copied().collect();
    let m = cyc.len();
    // rotate so that the lowest blue at ℓ sits at position 2 (b1), pick the direction with b0 below b2
    let low = (0..m)
        .filter(|&k| blue.contains(&cyc[k]))
        .min_by(|&a, &b| y_at(v, cyc[a], ell).cmp(&y_at(v, cyc[b], ell)))
        .unwrap();
    let fwd: Vec<usize> = (0..m).map(|k| cyc[(low + m - 2 + k) % m]).collect();
    let bwd: Vec<usize> = (0..m).map(|k| cyc[(low + 2 + m * 2 - k) % m]).collect();
    let seq = if y_at(v, fwd[0], ell) < y_at(v, fwd[4 % m], ell) { fwd } else { bwd };
    let (b0, r0, b1) = (seq[0], seq[1], seq[2]);
    let i_b0r0 = v.meet(b0, r0).clone();
    let i_b1b0 = v.meet(b1, b0).clone();
    let ell_pt = |c: usize| Point::new(ell.clone(), y_at(v, c, ell));
    for k in (3..m).step_by(2) {
        let ri = seq[k];
        let ok = y_at(v, ri, ell) > y_at(v, r0, ell)
            && on_fragment(v, b0, Cut::Left, Cut::At(ell_pt(b0)), v.meet(ri, b0))
            && on_fragment(v, r0, Cut::At(i_b0r0.clone()), Cut::Right, v.meet(ri, r0))
            && on_fragment(v, b1, Cut::At(i_b1b0.clone()), Cut::Right, v.meet(ri, b1));
        t.check(ok, &seq, || format!("cycle red {} violates the cycle structure", v.id(ri)));
    }
    t.done()
}

pub fn forest(run: &NestedRun) -> Outcome {
    let mut t = Tally::new();
    let cyc = match &run.forest {
        ForestVerdict::Cycle(c) => c.clone(),
        ForestVerdict::Forest => vec![],
    };
    t.check(run.forest_ok(), &cyc, || format!("graph has {} edges or a cycle", run.graph.edges.len()));
    t.done()
}

pub fn surviving_blues_cross(run: &NonNestedRun) -> Outcome {
    let mut t = Tally::new();
    let bad = run.non_crossing_survivors();
    let s = run.survivors.len();
    t.check(bad.is_none(), &bad.map(|(a, b)| vec![a, b]).unwrap_or_default(), || "surviving blues touch".into());
    t.instances = s * s.saturating_sub(1) / 2;
    t.done()
}

pub fn no_7_path(run: &NonNestedRun) -> Outcome {
    let mut t = Tally::new();
    let walk: Vec<usize> =
        run.path_b.1.iter().flat_map(|&e| [run.graph.edges[e].blue, run.graph.edges[e].red]).collect();
    t.check(run.path_b.0 <= 6, &walk, || format!("monotone path of {} edges from B", run.path_b.0));
    t.done()
}

pub fn k_path(run: &NonNestedRun) -> Outcome {
    let mut t = Tally::new();
    t.check(run.rodl == Rodl::Holds, &[], || format!("edge bound check: {:?}", run.rodl));
    t.done()
}

/// Monotone paths b-r-b'(-r') of the non-nested graph, as edge-index tuples.
fn monotone_paths(g: &TangencyGraph, len: usize) -> Vec<Vec<usize>> {
    let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, e) in g.edges.iter().enumerate() {
        by_vertex.entry(e.blue).or_default().push(k);
        by_vertex.entry(e.red).or_default().push(k);
    }
    let mut out = Vec::new();
    for (k1, e1) in g.edges.iter().enumerate() {
        for &k2 in &by_vertex[&e1.red] {
            let e2 = &g.edges[k2];
            if k2 <= k1 || e2.blue == e1.blue {
                continue;
            }
            if len == 2 {
                out.push(vec![k1, k2]);
                continue;
            }
            for &k3 in &by_vertex[&e2.blue] {
                let e3 = &g.edges[k3];
                if k3 > k2 && e3.red != e1.red {
                    out.push(vec![k1, k2, k3]);
                }
            }
        }
    }
    out
}

pub fn reds_cross_non_nested(run: &NonNestedRun) -> Outcome {
    let v = &run.norm.v;
    let g = &run.graph;
    let mut t = Tally::new();
    for p in monotone_paths(g, 3) {
        let (b, r, b2, r2) = (g.edges[p[0]].blue, g.edges[p[0]].red, g.edges[p[1]].blue, g.edges[p[2]].red);
        let m = ix(v, r, r2);
        let ok = ix(v, b2, r) < m && m < ix(v, b2, r2) && above_before_meet(v, r2, r);
        t.check(ok, &[b, r, b2, r2], || "consecutive reds of a monotone path misordered".into());
    }
    t.done()
}

pub fn blues_cross_non_nested(run: &NonNestedRun) -> Outcome {
    let v = &run.norm.v;
    let g = &run.graph;
    let mut t = Tally::new();
    for p in monotone_paths(g, 2) {
        let (b, r, b2) = (g.edges[p[0]].blue, g.edges[p[0]].red, g.edges[p[1]].blue);
        // b2 passes strictly below b where b touches r; which blue is on top
        // left of their crossing depends on whether it precedes that tangency
        let m = v.meet(b, r);
        let ok = ix(v, b, b2) < ix(v, b2, r) && y_at(v, b2, &m.x) < m.y;
        t.check(ok, &[b, r, b2], || "consecutive blues of a monotone path misordered".into());
    }
    t.done()
}

pub fn colour_conflict(run_col: &Result<BTreeMap<usize, Color>, crate::order::NotBipartite>) -> Option<Failure> {
    run_col.as_ref().err().map(|e| Failure {
        curves: vec![e.below, e.mid, e.above],
        detail: "a curve touches one curve from above and another from below at considered tangencies".into(),
    })
}

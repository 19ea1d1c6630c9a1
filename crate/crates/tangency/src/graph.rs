//! Stabbing line, reflections, rightmost marking, the ordered tangency graph,
//! forest check, monotone-path DP and the Rödl edge bound.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::curve::{pair_intersections, Family, IntersectionRecord, Kind, ValidFamily};
use crate::geom::{fmt_q, q, Point, Q};
use crate::order::{touch_type_of, Color};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabError {
    #[error("no vertical line meets every curve")]
    EmptyCommonInterval,
    #[error("empty family")]
    Empty,
}

pub fn stabbing_abscissa(f: &Family) -> Result<Q, StabError> {
    let mut events = Vec::new();
    for (i, a) in f.curves.iter().enumerate() {
        for b in &f.curves[i + 1..] {
            if let Ok(ps) = pair_intersections(a, b) {
                events.extend(ps.into_iter().map(|p| p.x));
            }
        }
    }
    stab_with(f, events)
}

/// Same choice as [`stabbing_abscissa`], reusing the validated records.
pub fn stabbing_line(v: &ValidFamily) -> Q {
    let ev = v.records.iter().map(|r| r.point.x.clone()).collect();
    stab_with(&v.family, ev).expect("validated families have a common abscissa")
}

fn stab_with(f: &Family, mut events: Vec<Q>) -> Result<Q, StabError> {
    if f.is_empty() {
        return Err(StabError::Empty);
    }
    let lo = f.curves.iter().map(|c| &c.left().x).max().unwrap().clone();
    let hi = f.curves.iter().map(|c| &c.right().x).min().unwrap().clone();
    if lo >= hi {
        return Err(StabError::EmptyCommonInterval);
    }
    events.extend(f.curves.iter().flat_map(|c| c.vertices().iter().map(|p| p.x.clone())));
    events.push(lo.clone());
    events.push(hi.clone());
    events.retain(|x| x >= &lo && x <= &hi);
    events.sort();
    events.dedup();
    let mut best = 0;
    for k in 1..events.len() - 1 {
        if &events[k + 1] - &events[k] > &events[best + 1] - &events[best] {
            best = k;
        }
    }
    let g_lo = events[best].clone();
    let two = q(2);
    let mut x = (&g_lo + &events[best + 1]) / &two;
    loop {
        let mut ys: Vec<Q> = f.curves.iter().map(|c| c.eval_at(&x).unwrap()).collect();
        ys.sort();
        if ys.windows(2).all(|w| w[0] != w[1]) {
            return Ok(x);
        }
        x = (&g_lo + &x) / &two;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axis {
    Vertical(Q),
    Horizontal,
}

impl Axis {
    fn map(&self, p: &Point) -> Point {
        match self {
            Axis::Vertical(x0) => Point::new(q(2) * x0 - &p.x, p.y.clone()),
            Axis::Horizontal => Point::new(p.x.clone(), -p.y.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Axis::Vertical(x0) => format!("vertical x={}", fmt_q(x0)),
            Axis::Horizontal => "horizontal".to_string(),
        }
    }
}

pub fn reflect(f: &Family, axis: &Axis) -> Family {
    Family { curves: f.curves.iter().map(|c| c.map_points(|p| axis.map(p))).collect(), meta: f.meta.clone() }
}

/// Reflection of a validated family; records are carried over, not recomputed.
pub fn reflect_valid(v: &ValidFamily, axis: &Axis) -> ValidFamily {
    let family = reflect(&v.family, axis);
    let mut out = v.clone();
    out.family = family;
    for r in out.records.iter_mut() {
        r.point = axis.map(&r.point);
        if let Some(lo) = r.lower {
            let lo = if *axis == Axis::Horizontal { r.other(lo) } else { lo };
            r.lower = Some(lo);
            r.ttype = Some(touch_type_of(&out.family, lo, r.other(lo)));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left = 0,
    Right = 1,
}

/// counts[type - 1][side]
pub type Census = [[usize; 2]; 4];

pub fn side_of(x: &Q, ell: &Q) -> Side {
    if x < ell {
        Side::Left
    } else {
        Side::Right
    }
}

pub fn side_type_census(v: &ValidFamily, ell: &Q) -> Census {
    let mut c = [[0; 2]; 4];
    for r in v.touching() {
        let t = r.ttype.expect("typed") as usize;
        c[t - 1][side_of(&r.point.x, ell) as usize] += 1;
    }
    c
}

/// Rightmost considered record on each red curve (record indices).
pub fn mark_rightmost(v: &ValidFamily, reds: &BTreeSet<usize>, recs: &[usize]) -> BTreeSet<usize> {
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in recs {
        let r = &v.records[k];
        let up = r.upper().expect("touching record");
        if !reds.contains(&up) {
            continue;
        }
        match best.get(&up) {
            Some(&b) if v.records[b].point.x >= r.point.x => {}
            _ => {
                best.insert(up, k);
            }
        }
    }
    best.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub blue: usize,
    pub red: usize,
    pub point: Point,
    pub rec: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TangencyGraph {
    pub blue: Vec<usize>,
    pub red: Vec<usize>,
    pub edges: Vec<Edge>,
    /// Two edges share an abscissa, so the (y, ids) refinement decided their order.
    pub tie_break_fired: bool,
}

impl TangencyGraph {
    pub fn vertex_count(&self) -> usize {
        self.blue.len() + self.red.len()
    }

    pub fn to_text(&self, v: &ValidFamily) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s += &format!("{} {} {} {}\n", v.id(e.blue), v.id(e.red), fmt_q(&e.point.x), fmt_q(&e.point.y));
        }
        s
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("record {rec} joins two curves of the same colour")]
pub struct SameColor {
    pub rec: usize,
}

/// Vertices are the keys of `coloring`; one edge per record.
pub fn build_graph(
    v: &ValidFamily,
    coloring: &BTreeMap<usize, Color>,
    recs: &[usize],
) -> Result<TangencyGraph, SameColor> {
    let mut edges = Vec::with_capacity(recs.len());
    for &k in recs {
        let r: &IntersectionRecord = &v.records[k];
        debug_assert_eq!(r.kind, Kind::Touching);
        let (a, b) = (r.a, r.b);
        let (blue, red) = match (coloring.get(&a), coloring.get(&b)) {
            (Some(Color::Blue), Some(Color::Red)) => (a, b),
            (Some(Color::Red), Some(Color::Blue)) => (b, a),
            _ => return Err(SameColor { rec: k }),
        };
        edges.push(Edge { blue, red, point: r.point.clone(), rec: k });
    }
    edges.sort_by(|e, f| {
        e.point
            .x
            .cmp(&f.point.x)
            .then_with(|| e.point.y.cmp(&f.point.y))
            .then_with(|| v.id(e.blue).cmp(v.id(f.blue)))
            .then_with(|| v.id(e.red).cmp(v.id(f.red)))
    });
    let tie_break_fired = edges.windows(2).any(|w| w[0].point.x == w[1].point.x);
    let blue = coloring.iter().filter(|(_, c)| **c == Color::Blue).map(|(k, _)| *k).collect();
    let red = coloring.iter().filter(|(_, c)| **c == Color::Red).map(|(k, _)| *k).collect();
    Ok(TangencyGraph { blue, red, edges, tie_break_fired })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForestVerdict {
    Forest,
    /// Closed vertex sequence of a shortest cycle (first vertex not repeated).
    Cycle(Vec<usize>),
}

fn adjacency(g: &TangencyGraph) -> BTreeMap<usize, Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &u in g.blue.iter().chain(&g.red) {
        adj.entry(u).or_default();
    }
    for e in &g.edges {
        adj.entry(e.blue).or_default().push(e.red);
        adj.entry(e.red).or_default().push(e.blue);
    }
    adj
}

pub fn is_forest(g: &TangencyGraph) -> ForestVerdict {
    let adj = adjacency(g);
    let mut best: Option<Vec<usize>> = None;
    for &root in adj.keys() {
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        let mut par: BTreeMap<usize, usize> = BTreeMap::new();
        dist.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if par.get(&u) == Some(&w) {
                    continue;
                }
                if let Some(&dw) = dist.get(&w) {
                    let len = dist[&u] + dw + 1;
                    if best.as_ref().is_none_or(|b| len < b.len()) {
                        let path = |mut x: usize| {
                            let mut p = vec![x];
                            while x != root {
                                x = par[&x];
                                p.push(x);
                            }
                            p
                        };
                        let mut cyc = path(u);
                        cyc.reverse();
                        let mut back = path(w);
                        back.pop();
                        cyc.extend(back);
                        best = Some(cyc);
                    }
                } else {
                    dist.insert(w, dist[&u] + 1);
                    par.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
    }
    match best {
        None => ForestVerdict::Forest,
        Some(c) => ForestVerdict::Cycle(c),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    B,
    R,
    Any,
}

/// Longest edge-increasing walk, by DP over the edges in order. Vertices may
/// repeat, so this is an upper bound on the longest monotone path.
pub fn longest_monotone_path(g: &TangencyGraph, start: Start) -> (usize, Vec<usize>) {
    // per vertex: best length ending there and the (edge, arrival) that achieved it
    let mut state: BTreeMap<usize, Option<(usize, Option<usize>)>> = BTreeMap::new();
    for &b in &g.blue {
        state.insert(b, matches!(start, Start::B | Start::Any).then_some((0, None)));
    }
    for &r in &g.red {
        state.insert(r, matches!(start, Start::R | Start::Any).then_some((0, None)));
    }
    // arrival slot s = 2*edge + (0 into red, 1 into blue) -> predecessor slot
    let mut pred: Vec<Option<usize>> = vec![None; 2 * g.edges.len()];
    let mut best = (0, None);
    for (k, e) in g.edges.iter().enumerate() {
        let sb = state.get(&e.blue).copied().flatten();
        let sr = state.get(&e.red).copied().flatten();
        let mut upd = Vec::new();
        if let Some((l, p)) = sb {
            pred[2 * k] = p;
            upd.push((e.red, l + 1, 2 * k));
        }
        if let Some((l, p)) = sr {
            pred[2 * k + 1] = p;
            upd.push((e.blue, l + 1, 2 * k + 1));
        }
        for (v, l, slot) in upd {
            let cur = state.get(&v).copied().flatten();
            if cur.is_none_or(|(cl, _)| l > cl) {
                state.insert(v, Some((l, Some(slot))));
                if l > best.0 {
                    best = (l, Some(slot));
                }
            }
        }
    }
    let mut walk = Vec::new();
    let mut s = best.1;
    while let Some(slot) = s {
        walk.push(slot / 2);
        s = pred[slot];
    }
    walk.reverse();
    (best.0, walk)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rodl {
    Holds,
    Fails,
    /// A monotone path of this many edges exists, so the bound does not apply.
    PremiseFailed(usize),
}

pub fn rodl_check(g: &TangencyGraph, k: usize) -> Rodl {
    let (len, _) = longest_monotone_path(g, Start::Any);
    if len >= k {
        return Rodl::PremiseFailed(len);
    }
    if g.edges.len() < k * (k - 1) / 2 * g.vertex_count() || g.edges.is_empty() {
        Rodl::Holds
    } else {
        Rodl::Fails
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::geom::qr;

    fn c(id: &str, v: &[(i64, i64)]) -> Curve {
        Curve::new(id, v.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn stab_examples() {
        let f = Family::new(vec![
            c("a", &[(0, 0), (5, 0), (10, 0)]),
            c("b", &[(2, 1), (8, 1)]),
            c("d", &[(4, 2), (12, 2)]),
        ]);
        assert_eq!(stabbing_abscissa(&f), Ok(qr(13, 2)));
        assert_eq!(stabbing_abscissa(&Family::new(vec![c("a", &[(0, 0), (1, 0)])])), Ok(qr(1, 2)));
        let f = Family::new(vec![c("a", &[(0, 0), (1, 0)]), c("b", &[(2, 0), (3, 0)])]);
        assert_eq!(stabbing_abscissa(&f), Err(StabError::EmptyCommonInterval));
    }

    #[test]
    fn stab_prefers_leftmost_of_equal_gaps() {
        let f = Family::new(vec![c("a", &[(0, 0), (2, 2)]), c("b", &[(0, 2), (2, 0)])]);
        let x = stabbing_abscissa(&f).unwrap();
        assert_eq!(x, qr(1, 2));
    }

    fn graph(edges: &[(usize, usize, i64)]) -> TangencyGraph {
        let mut blue: Vec<usize> = edges.iter().map(|e| e.0).collect();
        let mut red: Vec<usize> = edges.iter().map(|e| e.1).collect();
        blue.sort();
        blue.dedup();
        red.sort();
        red.dedup();
        TangencyGraph {
            blue,
            red,
            edges: edges.iter().map(|&(b, r, x)| Edge { blue: b, red: r, point: Point::ints(x, 0), rec: 0 }).collect(),
            tie_break_fired: false,
        }
    }

    #[test]
    fn forest_examples() {
        assert_eq!(is_forest(&graph(&[(0, 10, 1), (1, 10, 2), (1, 11, 3)])), ForestVerdict::Forest);
        match is_forest(&graph(&[(0, 10, 1), (1, 10, 2), (1, 11, 3), (0, 11, 4), (2, 11, 5)])) {
            ForestVerdict::Cycle(c) => assert_eq!(c.len(), 4),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn shortest_cycle_is_found() {
        // a 6-cycle sharing a vertex with a 4-cycle
        let g = graph(&[
            (0, 10, 1),
            (1, 10, 2),
            (1, 11, 3),
            (2, 11, 4),
            (2, 12, 5),
            (0, 12, 6),
            (3, 12, 7),
            (3, 13, 8),
            (2, 13, 9),
        ]);
        match is_forest(&g) {
            ForestVerdict::Cycle(c) => assert_eq!(c.len(), 4),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(longest_monotone_path(&graph(&[(0, 10, 1)]), Start::B).0, 1);
        let inc = graph(&[(0, 10, 1), (1, 10, 2)]);
        assert_eq!(longest_monotone_path(&inc, Start::B), (2, vec![0, 1]));
        let dec = graph(&[(0, 10, 2), (1, 10, 1)]);
        assert_eq!(longest_monotone_path(&dec, Start::B).0, 2);
        let dec_b0 = graph(&[(1, 10, 1), (0, 10, 2)]);
        assert_eq!(longest_monotone_path(&dec_b0, Start::B).0, 2);
        let only_red = graph(&[(0, 10, 1), (0, 11, 2)]);
        assert_eq!(longest_monotone_path(&only_red, Start::B).0, 1);
        assert_eq!(longest_monotone_path(&only_red, Start::R).0, 2);
    }

    #[test]
    fn rodl_examples() {
        let g = graph(&[(0, 10, 1), (1, 10, 2)]);
        assert_eq!(rodl_check(&g, 3), Rodl::Holds);
        assert_eq!(rodl_check(&TangencyGraph::default(), 3), Rodl::Holds);
        assert_eq!(rodl_check(&g, 2), Rodl::PremiseFailed(2));
    }
}

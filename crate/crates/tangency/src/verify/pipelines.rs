//! The two counting pipelines: Types 1&2 (nested projections) and Types 3&4.

use std::collections::{BTreeMap, BTreeSet};

use crate::curve::{Kind, ValidFamily};
use crate::geom::Q;
use crate::graph::{
    build_graph, is_forest, longest_monotone_path, mark_rightmost, reflect_valid, rodl_check, side_of,
    side_type_census, stabbing_line, Axis, ForestVerdict, Rodl, Side, Start, TangencyGraph,
};
use crate::order::{blue_red_partition, mirsky_split, Color, NotBipartite};

/// A family brought into the normal position for one pipeline.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub v: ValidFamily,
    pub ell: Q,
    pub reflections: Vec<Axis>,
}

/// Reflect toward "majority right of ℓ", then toward "majority of type `want`".
fn normalize(v: &ValidFamily, ell: &Q, pair: (u8, u8), want: u8) -> Normalized {
    let (t1, t2) = (pair.0 as usize - 1, pair.1 as usize - 1);
    let mut cur = v.clone();
    let mut reflections = Vec::new();
    let c = side_type_census(&cur, ell);
    let (l, r) = (c[t1][0] + c[t2][0], c[t1][1] + c[t2][1]);
    if r < l {
        let ax = Axis::Vertical(ell.clone());
        cur = reflect_valid(&cur, &ax);
        reflections.push(ax);
    }
    let c = side_type_census(&cur, ell);
    let other = if want == pair.0 { pair.1 } else { pair.0 };
    if c[want as usize - 1][1] < c[other as usize - 1][1] {
        cur = reflect_valid(&cur, &Axis::Horizontal);
        reflections.push(Axis::Horizontal);
    }
    Normalized { v: cur, ell: ell.clone(), reflections }
}

fn considered(norm: &Normalized, t: u8) -> Vec<usize> {
    norm.v
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.kind == Kind::Touching && r.ttype == Some(t) && side_of(&r.point.x, &norm.ell) == Side::Right
        })
        .map(|(k, _)| k)
        .collect()
}

fn colour(norm: &Normalized, recs: &[usize]) -> Result<BTreeMap<usize, Color>, NotBipartite> {
    let rs: Vec<_> = recs.iter().map(|&k| &norm.v.records[k]).collect();
    blue_red_partition(&rs)
}

#[derive(Clone, Debug)]
pub struct NestedRun {
    pub norm: Normalized,
    pub types12: usize,
    pub considered: Vec<usize>,
    pub coloring: Result<BTreeMap<usize, Color>, NotBipartite>,
    pub marked: BTreeSet<usize>,
    pub unmarked: Vec<usize>,
    pub graph: TangencyGraph,
    pub forest: ForestVerdict,
}

impl NestedRun {
    pub fn blues(&self) -> Vec<usize> {
        by_colour(&self.coloring, Color::Blue)
    }

    pub fn reds(&self) -> Vec<usize> {
        by_colour(&self.coloring, Color::Red)
    }

    pub fn bound_2n1(&self) -> bool {
        self.considered.len() < 2 * self.norm.v.n()
    }

    pub fn bound_8n4(&self) -> bool {
        self.types12 + 4 <= 8 * self.norm.v.n()
    }

    pub fn forest_ok(&self) -> bool {
        self.forest == ForestVerdict::Forest && self.graph.edges.len() < self.norm.v.n().max(1)
    }
}

fn by_colour(c: &Result<BTreeMap<usize, Color>, NotBipartite>, want: Color) -> Vec<usize> {
    match c {
        Ok(m) => m.iter().filter(|(_, c)| **c == want).map(|(k, _)| *k).collect(),
        Err(_) => vec![],
    }
}

pub fn run_nested(v: &ValidFamily) -> NestedRun {
    let ell = stabbing_line(v);
    let norm = normalize(v, &ell, (1, 2), 2);
    let types12 = norm.v.touching().filter(|r| matches!(r.ttype, Some(1 | 2))).count();
    let considered = considered(&norm, 2);
    let coloring = colour(&norm, &considered);
    let (marked, unmarked, graph) = match &coloring {
        Ok(col) => {
            let reds: BTreeSet<usize> = col.iter().filter(|(_, c)| **c == Color::Red).map(|(k, _)| *k).collect();
            let marked = mark_rightmost(&norm.v, &reds, &considered);
            let unmarked: Vec<usize> = considered.iter().copied().filter(|k| !marked.contains(k)).collect();
            let graph = build_graph(&norm.v, col, &unmarked).expect("partition colours every considered pair");
            (marked, unmarked, graph)
        }
        Err(_) => (BTreeSet::new(), vec![], TangencyGraph::default()),
    };
    let forest = is_forest(&graph);
    NestedRun { norm, types12, considered, coloring, marked, unmarked, graph, forest }
}

#[derive(Clone, Debug)]
pub struct Round {
    pub relation: u8,
    pub minimal: Vec<usize>,
    pub rest: Vec<usize>,
    pub minimal_tangencies: usize,
    pub rest_tangencies: usize,
    pub kept_minimal: bool,
    /// Set when the split was refused because of a 3-chain.
    pub chain: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct NonNestedRun {
    pub norm: Normalized,
    pub types34: usize,
    pub considered: Vec<usize>,
    pub coloring: Result<BTreeMap<usize, Color>, NotBipartite>,
    pub rounds: Vec<Round>,
    pub survivors: Vec<usize>,
    pub graph: TangencyGraph,
    pub path_b: (usize, Vec<usize>),
    pub path_any: (usize, Vec<usize>),
    pub rodl: Rodl,
}

impl NonNestedRun {
    pub fn bound_28n(&self) -> bool {
        self.graph.edges.len() <= 28 * self.norm.v.n()
    }

    pub fn bound_896n(&self) -> bool {
        self.types34 <= 896 * self.norm.v.n()
    }

    /// First surviving blue pair that does not cross, if any.
    pub fn non_crossing_survivors(&self) -> Option<(usize, usize)> {
        let s = &self.survivors;
        for (x, &a) in s.iter().enumerate() {
            for &b in &s[x + 1..] {
                if self.norm.v.record(a, b).kind != Kind::Crossing {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

pub fn run_non_nested(v: &ValidFamily) -> NonNestedRun {
    let ell = stabbing_line(v);
    let norm = normalize(v, &ell, (3, 4), 4);
    let types34 = norm.v.touching().filter(|r| matches!(r.ttype, Some(3 | 4))).count();
    let considered = considered(&norm, 4);
    let coloring = colour(&norm, &considered);
    let mut rounds = Vec::new();
    let mut survivors = by_colour(&coloring, Color::Blue);
    let carried =
        |set: &[usize]| considered.iter().filter(|&&k| set.contains(&norm.v.records[k].lower.unwrap())).count();
    for rel in 1..=3u8 {
        match mirsky_split(&norm.v, &survivors, rel) {
            Ok((minimal, rest)) => {
                let (tm, tr) = (carried(&minimal), carried(&rest));
                let kept_minimal = tm >= tr;
                let next = if kept_minimal { minimal.clone() } else { rest.clone() };
                rounds.push(Round {
                    relation: rel,
                    minimal,
                    rest,
                    minimal_tangencies: tm,
                    rest_tangencies: tr,
                    kept_minimal,
                    chain: None,
                });
                survivors = next;
            }
            Err(chain) => {
                rounds.push(Round {
                    relation: rel,
                    minimal: vec![],
                    rest: vec![],
                    minimal_tangencies: 0,
                    rest_tangencies: 0,
                    kept_minimal: true,
                    chain: Some(chain.0),
                });
            }
        }
    }
    let recs: Vec<usize> =
        considered.iter().copied().filter(|&k| survivors.contains(&norm.v.records[k].lower.unwrap())).collect();
    let mut col: BTreeMap<usize, Color> = survivors.iter().map(|&b| (b, Color::Blue)).collect();
    for &k in &recs {
        col.insert(norm.v.records[k].upper().unwrap(), Color::Red);
    }
    let graph = build_graph(&norm.v, &col, &recs).expect("blue lower, red upper by construction");
    let path_b = longest_monotone_path(&graph, Start::B);
    let path_any = longest_monotone_path(&graph, Start::Any);
    let rodl = rodl_check(&graph, 8);
    NonNestedRun { norm, types34, considered, coloring, rounds, survivors, graph, path_b, path_any, rodl }
}

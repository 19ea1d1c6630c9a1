//! Exhaustive enumeration of small families on an integer grid.
//!
//! Candidate curves are strictly x-monotone polylines with vertices on the
//! grid and no three consecutive vertices collinear. Pairs are screened once
//! (exactly one interior contact, distinct endpoints) into bitset rows; a
//! family is a clique of that relation with no point shared by three curves.
//! Families are deduplicated by their event signature: endpoints and
//! intersections in x-order, curves labelled by left endpoint, tokens at a
//! common abscissa taken as a set. All maxima are relative to the grid, so
//! they are lower bounds on the true maxima.
//!
//! Canonical pruning: among all translates and reflections of a family that
//! fit the grid, only those whose smallest curve index is minimal are
//! walked. Such a family starts at x = 0, has a vertex at y = 0, and every
//! reflection of every member has index at least that of the first curve.
//! The stream then adds the reflections of each walked family, so mirror
//! images still appear as separate signatures.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{validate_family, Curve, Family};
use crate::geom::Point;
use crate::io::write_atomic;
use crate::scan;

/// Projected candidate families allowed before the search refuses to run.
pub const GUARD: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub x_slots: usize,
    pub y_slots: usize,
    pub max_vertices: usize,
}

impl GridSpec {
    pub fn new(x_slots: usize, y_slots: usize, max_vertices: usize) -> Self {
        GridSpec { x_slots, y_slots, max_vertices }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.x_slots, self.y_slots, self.max_vertices)
    }
}

impl FromStr for GridSpec {
    type Err = SearchError;
    /// `XxY` or `XxYxV`; without V the vertex bound defaults to 2.
    fn from_str(s: &str) -> Result<Self, SearchError> {
        let parts: Vec<usize> = s
            .split('x')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| SearchError::BadGrid(s.to_string()))?;
        match parts[..] {
            [x, y] => Ok(GridSpec::new(x, y, 2)),
            [x, y, v] => Ok(GridSpec::new(x, y, v)),
            _ => Err(SearchError::BadGrid(s.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("grid {0:?}: expected XxY or XxYxV")]
    BadGrid(String),
    #[error("grid slots and vertex bound must be at least 2")]
    GridTooSmall,
    #[error("n must be at least 1")]
    EmptyFamily,
    #[error("search space guard exceeded: {projected} projected candidates (limit {limit})")]
    Guard { projected: u128, limit: u128 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type R = Ratio<i64>;
type Poly = Vec<(i64, i64)>;

#[derive(Clone, Copy, Debug)]
struct Meet {
    /// x and y as numerator / positive denominator
    x: (i64, i64),
    y: (i64, i64),
    touching: bool,
    /// for touching pairs: the lower-indexed curve is below
    first_below: bool,
}

impl Meet {
    fn same_point(&self, o: &Meet) -> bool {
        self.x == o.x && self.y == o.y
    }
}

fn cmp_frac(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
}

/// All candidate curves, sorted by left endpoint then the remaining vertices.
pub fn candidate_curves(g: &GridSpec) -> Vec<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    let xs: Vec<i64> = (0..g.x_slots as i64).collect();
    for s in 2..=g.max_vertices.min(g.x_slots) {
        for xset in combinations(&xs, s) {
            let mut ys = vec![0i64; s];
            loop {
                let p: Poly = xset.iter().copied().zip(ys.iter().copied()).collect();
                if p.windows(3).all(|w| {
                    let (a, b, c) = (w[0], w[1], w[2]);
                    (b.0 - a.0) * (c.1 - a.1) != (b.1 - a.1) * (c.0 - a.0)
                }) {
                    out.push(p);
                }
                let mut k = 0;
                while k < s && ys[k] + 1 == g.y_slots as i64 {
                    ys[k] = 0;
                    k += 1;
                }
                if k == s {
                    break;
                }
                ys[k] += 1;
            }
        }
    }
    out.sort_by(|a, b| (a[0], a).cmp(&(b[0], b)));
    out
}

fn combinations(xs: &[i64], s: usize) -> Vec<Vec<i64>> {
    if s == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for mut rest in combinations(&xs[i + 1..], s - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn meet(a: &[(R, R)], b: &[(R, R)], pa: &Poly, pb: &Poly) -> Option<Meet> {
    let ends = [pa[0], pa[pa.len() - 1], pb[0], pb[pb.len() - 1]];
    if ends[0] == ends[2] || ends[0] == ends[3] || ends[1] == ends[2] || ends[1] == ends[3] {
        return None;
    }
    if pa[pa.len() - 1].0 < pb[0].0 || pb[pb.len() - 1].0 < pa[0].0 {
        return None;
    }
    let cs = scan::scan(a, b).ok()?;
    if cs.len() != 1 || !cs[0].interior() {
        return None;
    }
    let c = &cs[0];
    Some(Meet {
        x: (*c.x.numer(), *c.x.denom()),
        y: (*c.y.numer(), *c.y.denom()),
        touching: !c.crossing(),
        first_below: c.left < 0,
    })
}

/// Pair table: bitset rows (j > i only) and the meeting data of valid pairs.
struct Table {
    curves: Vec<Poly>,
    words: usize,
    rows: Vec<Vec<u64>>,
    partners: Vec<Vec<(u32, Meet)>>,
    /// index of each curve under the three non-trivial reflections
    images: [Vec<u32>; 3],
    min_image: Vec<u32>,
}

impl Table {
    fn build(curves: Vec<Poly>, g: &GridSpec) -> Self {
        let m = curves.len();
        let at: std::collections::HashMap<&Poly, u32> = curves.iter().enumerate().map(|(k, c)| (c, k as u32)).collect();
        let (xm, ym) = (g.x_slots as i64 - 1, g.y_slots as i64 - 1);
        let image = |fx: bool, fy: bool| -> Vec<u32> {
            curves
                .iter()
                .map(|c| {
                    let mut r: Poly =
                        c.iter().map(|&(x, y)| (if fx { xm - x } else { x }, if fy { ym - y } else { y })).collect();
                    if fx {
                        r.reverse();
                    }
                    at[&r]
                })
                .collect()
        };
        let images = [image(true, false), image(false, true), image(true, true)];
        let min_image = (0..m).map(|c| images.iter().map(|v| v[c]).min().unwrap().min(c as u32)).collect();
        let words = m.div_ceil(64);
        let exact: Vec<Vec<(R, R)>> =
            curves.iter().map(|p| p.iter().map(|&(x, y)| (R::from(x), R::from(y))).collect()).collect();
        let partners: Vec<Vec<(u32, Meet)>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (i + 1..m)
                    .filter_map(|j| meet(&exact[i], &exact[j], &curves[i], &curves[j]).map(|mt| (j as u32, mt)))
                    .collect()
            })
            .collect();
        let rows = partners
            .iter()
            .map(|ps| {
                let mut row = vec![0u64; words];
                for &(j, _) in ps {
                    row[j as usize / 64] |= 1 << (j % 64);
                }
                row
            })
            .collect();
        Table { curves, words, rows, partners, images, min_image }
    }

    /// Partners allowed after `first`, or `None` if no canonical family starts there.
    fn first_mask(&self, first: usize) -> Option<Vec<u64>> {
        if self.curves[first][0].0 != 0 || (self.min_image[first] as usize) < first {
            return None;
        }
        let mut row = self.rows[first].clone();
        for (w, word) in row.iter_mut().enumerate() {
            let mut bits = *word;
            while bits != 0 {
                let c = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if (self.min_image[c] as usize) < first {
                    *word &= !(1u64 << (c % 64));
                }
            }
        }
        Some(row)
    }

    fn reflect(&self, set: &[usize], r: usize, out: &mut Vec<usize>) {
        out.clear();
        out.extend(set.iter().map(|&c| self.images[r][c] as usize));
        out.sort_unstable();
    }

    fn meet(&self, i: usize, j: usize) -> &Meet {
        let ps = &self.partners[i];
        let k = ps.binary_search_by_key(&(j as u32), |p| p.0).expect("valid pair");
        &ps[k].1
    }

    /// Families still possible after pair screening and canonical pruning:
    /// for each first edge, the (n − 2)-subsets of common partners.
    fn projected(&self, n: usize) -> u128 {
        let firsts = (0..self.curves.len()).filter_map(|i| self.first_mask(i).map(|m| (i, m)));
        if n == 1 {
            return firsts.count() as u128;
        }
        let mut total = 0u128;
        for (_, mask) in firsts {
            for (w, &word) in mask.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let common: u32 = mask.iter().zip(&self.rows[j]).map(|(a, b)| (a & b).count_ones()).sum();
                    total = total.saturating_add(binom(common as u128, n as u128 - 2));
                }
            }
        }
        total
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Event signature of the family `set` (indices increasing).
fn signature(t: &Table, set: &[usize], buf: &mut Vec<u16>, ev: &mut Vec<((i64, i64), u16)>) {
    let n = set.len();
    ev.clear();
    for (a, &i) in set.iter().enumerate() {
        let c = &t.curves[i];
        ev.push(((c[0].0, 1), a as u16));
        ev.push(((c[c.len() - 1].0, 1), (n + a) as u16));
    }
    let mut pair = 0u16;
    for a in 0..n {
        for b in a + 1..n {
            let m = t.meet(set[a], set[b]);
            let kind = match (m.touching, m.first_below) {
                (false, _) => 0,
                (true, true) => 1,
                (true, false) => 2,
            };
            ev.push((m.x, 2 * n as u16 + 3 * pair + kind));
            pair += 1;
        }
    }
    ev.sort_by(|p, q| cmp_frac(p.0, q.0).then(p.1.cmp(&q.1)));
    buf.clear();
    for (k, e) in ev.iter().enumerate() {
        if k > 0 && cmp_frac(ev[k - 1].0, e.0).is_ne() {
            buf.push(u16::MAX);
        }
        buf.push(e.1);
    }
}

fn touch_count(t: &Table, set: &[usize]) -> usize {
    let mut c = 0;
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            c += t.meet(set[a], set[b]).touching as usize;
        }
    }
    c
}

/// Depth-first over canonical cliques whose first curve is `first`.
fn walk(t: &Table, n: usize, first: usize, visit: &mut dyn FnMut(&[usize])) {
    let Some(cand) = t.first_mask(first) else { return };
    let mut on_floor = |set: &[usize]| {
        if set.iter().any(|&c| t.curves[c].iter().any(|p| p.1 == 0)) {
            visit(set);
        }
    };
    let mut set = vec![first];
    if n == 1 {
        on_floor(&set);
        return;
    }
    extend(t, n, &mut set, &cand, &mut on_floor);
}

fn extend(t: &Table, n: usize, set: &mut Vec<usize>, cand: &[u64], visit: &mut dyn FnMut(&[usize])) {
    for w in 0..t.words {
        let mut bits = cand[w];
        while bits != 0 {
            let k = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            // a third curve through the meeting point of two members
            let mut ok = true;
            'pairs: for x in 0..set.len() {
                for y in x + 1..set.len() {
                    if t.meet(set[x], k).same_point(t.meet(set[y], k)) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if !ok {
                continue;
            }
            set.push(k);
            if set.len() == n {
                visit(set);
            } else {
                let next: Vec<u64> = cand.iter().zip(&t.rows[k]).map(|(a, b)| a & b).collect();
                if next.iter().any(|&b| b != 0) {
                    extend(t, n, set, &next, visit);
                }
            }
            set.pop();
        }
    }
}

fn to_family(t: &Table, set: &[usize]) -> Family {
    let curves = set
        .iter()
        .enumerate()
        .map(|(a, &i)| {
            let v = t.curves[i].iter().map(|&(x, y)| Point::ints(x, y)).collect();
            Curve::new(format!("c{a}"), v).expect("grid curves are x-monotone")
        })
        .collect();
    Family::new(curves)
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchStats {
    pub curves: usize,
    pub valid_pairs: usize,
    pub projected: u128,
    pub families: u64,
    pub signatures: usize,
}

fn prepare(n: usize, g: &GridSpec) -> Result<Table, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyFamily);
    }
    if g.x_slots < 2 || g.y_slots < 2 || g.max_vertices < 2 {
        return Err(SearchError::GridTooSmall);
    }
    let curves = candidate_curves(g);
    let pairs = binom(curves.len() as u128, 2);
    if pairs > GUARD {
        return Err(SearchError::Guard { projected: pairs, limit: GUARD });
    }
    let t = Table::build(curves, g);
    let projected = t.projected(n);
    if projected > GUARD {
        return Err(SearchError::Guard { projected, limit: GUARD });
    }
    Ok(t)
}

/// (signature, members) pairs found under one first curve, plus the raw count.
type FirstHits = (Vec<(Vec<u16>, Vec<usize>)>, u64);

/// One family per distinct signature, each the first in enumeration order
/// and re-validated with arbitrary-precision arithmetic.
pub fn enumerate_families(n: usize, g: &GridSpec) -> Result<(Vec<Family>, SearchStats), SearchError> {
    let t = prepare(n, g)?;
    let per_first: Vec<FirstHits> = (0..t.curves.len())
        .into_par_iter()
        .map(|i| {
            let mut seen: HashSet<Vec<u16>> = HashSet::new();
            let mut found = Vec::new();
            let (mut buf, mut ev, mut img) = (Vec::new(), Vec::new(), Vec::new());
            let mut count = 0u64;
            walk(&t, n, i, &mut |set| {
                count += 1;
                signature(&t, set, &mut buf, &mut ev);
                if seen.contains(buf.as_slice()) {
                    return;
                }
                seen.insert(buf.clone());
                found.push((buf.clone(), set.to_vec()));
                for r in 0..3 {
                    t.reflect(set, r, &mut img);
                    signature(&t, &img, &mut buf, &mut ev);
                    if !seen.contains(buf.as_slice()) {
                        seen.insert(buf.clone());
                        found.push((buf.clone(), img.clone()));
                    }
                }
            });
            (found, count)
        })
        .collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut out = Vec::new();
    let mut families = 0;
    for (found, count) in per_first {
        families += count;
        for (sig, set) in found {
            if seen.insert(sig) {
                let f = to_family(&t, &set);
                debug_assert!(validate_family(&f).is_valid());
                out.push(f);
            }
        }
    }
    let stats = SearchStats {
        curves: t.curves.len(),
        valid_pairs: t.partners.iter().map(Vec::len).sum(),
        projected: t.projected(n),
        families,
        signatures: out.len(),
    };
    Ok((out, stats))
}

#[derive(Clone, Debug)]
pub struct Best {
    pub value: usize,
    pub witness: Family,
    pub stats: SearchStats,
}

struct Checkpoint {
    next: usize,
    best: usize,
    witness: Option<Family>,
}

const MAGIC: &str = "tangency-search checkpoint v1";

fn write_checkpoint(path: &Path, n: usize, g: &GridSpec, c: &Checkpoint) -> Result<(), SearchError> {
    let mut s = format!("{MAGIC}\nn {n}\ngrid {g}\nnext {}\nbest {}\n", c.next, c.best);
    if let Some(w) = &c.witness {
        s.push_str("witness\n");
        s.push_str(&w.to_json());
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())?;
    Ok(())
}

fn read_checkpoint(path: &Path, n: usize, g: &GridSpec) -> Result<Checkpoint, SearchError> {
    let text = std::fs::read_to_string(path)?;
    let bad = |m: &str| SearchError::Checkpoint(m.to_string());
    let (head, witness) = match text.split_once("witness\n") {
        Some((h, w)) => (h, Some(Family::from_json(w).map_err(|e| bad(&e.to_string()))?)),
        None => (text.as_str(), None),
    };
    let mut lines = head.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("not a search checkpoint"));
    }
    let mut field = |key: &str| -> Result<String, SearchError> {
        let line = lines.next().ok_or_else(|| bad("truncated"))?;
        line.strip_prefix(key)
            .and_then(|v| v.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected {key}")))
    };
    if field("n")? != n.to_string() || field("grid")? != g.to_string() {
        return Err(bad("checkpoint was written for a different n or grid"));
    }
    let next = field("next")?.parse().map_err(|_| bad("next"))?;
    let best = field("best")?.parse().map_err(|_| bad("best"))?;
    Ok(Checkpoint { next, best, witness })
}

/// Curves taken per checkpointed chunk of first curves.
const CHUNK: usize = 256;

/// Maximum number of touching pairs, with the first witness in enumeration
/// order. With `checkpoint`, progress is saved after every chunk and an
/// existing file is resumed from.
pub fn max_tangencies(n: usize, g: &GridSpec, checkpoint: Option<&Path>) -> Result<Best, SearchError> {
    let t = prepare(n, g)?;
    let mut state = match checkpoint {
        Some(p) if p.exists() => read_checkpoint(p, n, g)?,
        _ => Checkpoint { next: 0, best: 0, witness: None },
    };
    let mut families = 0u64;
    let m = t.curves.len();
    while state.next < m {
        let hi = (state.next + CHUNK).min(m);
        let part: Vec<(usize, Option<Vec<usize>>, u64)> = (state.next..hi)
            .into_par_iter()
            .map(|i| {
                let (mut best, mut wit, mut count) = (0, None, 0u64);
                walk(&t, n, i, &mut |set| {
                    count += 1;
                    let v = touch_count(&t, set);
                    if wit.is_none() || v > best {
                        best = v;
                        wit = Some(set.to_vec());
                    }
                });
                (best, wit, count)
            })
            .collect();
        for (v, wit, count) in part {
            families += count;
            if let Some(set) = wit {
                if state.witness.is_none() || v > state.best {
                    state.best = v;
                    state.witness = Some(to_family(&t, &set));
                }
            }
        }
        state.next = hi;
        if let Some(p) = checkpoint {
            write_checkpoint(p, n, g, &state)?;
        }
    }
    let stats = SearchStats {
        curves: m,
        valid_pairs: t.partners.iter().map(Vec::len).sum(),
        projected: t.projected(n),
        families,
        signatures: 0,
    };
    let witness = state.witness.ok_or(SearchError::Checkpoint("no family exists on this grid".into()))?;
    Ok(Best { value: state.best, witness, stats })
}

//! Blue curves below red curves, touching along a spanning caterpillar.
//!
//! Spine: red r_k touches blues b_k and b_{k+1}. Surplus blues all touch
//! r_0, surplus reds all touch b_0. Every blue starts before every red and
//! every red ends before every blue, so all tangencies are Type 2 and lie
//! right of the stabbing line, which sits in a wide gap after the last start.

use serde_json::json;

use super::wiring::{close, last_start, realize, Ev};
use crate::curve::Family;

struct Sched {
    ev: Vec<Ev>,
    cur: Vec<usize>,
}

impl Sched {
    fn at(&self, w: usize) -> usize {
        self.cur.iter().position(|&v| v == w).expect("alive")
    }

    fn cross(&mut self, a: usize, b: usize) {
        let (i, j) = (self.at(a), self.at(b));
        debug_assert_eq!(i.abs_diff(j), 1);
        self.cur.swap(i, j);
        self.ev.push(Ev::X(a, b));
    }

    fn touch(&mut self, a: usize, b: usize) {
        debug_assert_eq!(self.at(a) + 1, self.at(b));
        self.ev.push(Ev::T(a, b));
    }

    fn end(&mut self, w: usize) {
        self.cur.retain(|&v| v != w);
        self.ev.push(Ev::E(w));
    }

    fn between(&self, lo: usize, hi: usize) -> Vec<usize> {
        self.cur[self.at(lo) + 1..self.at(hi)].to_vec()
    }
}

/// Schedule over wires 0..nb (blues) and nb..nb+nr (reds), plus the touching pairs.
pub fn schedule(nb: usize, nr: usize) -> (Vec<Ev>, Vec<(usize, usize)>) {
    assert!(nb >= 1 && nr >= 1);
    let b = |k: usize| k;
    let r = |k: usize| nb + k;
    let m = nr.min(nb - 1);
    let extra_b: Vec<usize> = (m + 1..nb).map(b).collect();
    let extra_r: Vec<usize> = (m..nr).map(r).collect();

    let mut target: Vec<usize> = extra_b.iter().rev().copied().collect();
    target.push(b(m));
    for k in (0..m).rev() {
        target.extend([b(k), r(k)]);
    }
    target.extend(&extra_r);

    let mut s = Sched { ev: vec![], cur: vec![] };
    let blue_first = target.iter().filter(|&&w| w < nb).chain(target.iter().filter(|&&w| w >= nb));
    for &w in blue_first {
        let p = s
            .cur
            .iter()
            .filter(|&&v| target.iter().position(|&t| t == v) < target.iter().position(|&t| t == w))
            .count();
        s.cur.insert(p, w);
        s.ev.push(Ev::S(w, p));
    }
    let mut pairs = Vec::new();

    for k in (0..m).rev() {
        for el in s.between(b(k + 1), b(k)).into_iter().rev() {
            s.cross(el, b(k));
            s.cross(el, r(k));
        }
        s.touch(b(k), r(k));
        s.cross(b(k + 1), b(k));
        s.touch(b(k + 1), r(k));
        pairs.extend([(b(k), r(k)), (b(k + 1), r(k))]);
    }

    for (j, &e) in extra_b.iter().enumerate() {
        while s.cur[s.at(e) + 1] != r(0) {
            let above = s.cur[s.at(e) + 1];
            s.cross(e, above);
        }
        s.touch(e, r(0));
        pairs.push((e, r(0)));
        debug_assert!(j == 0 || s.at(extra_b[j - 1]) + 1 == s.at(e));
    }
    if !extra_b.is_empty() {
        s.end(r(0));
        let top_e = *extra_b.last().expect("non-empty");
        while s.at(top_e) + 1 < s.cur.len() {
            let el = s.cur[s.at(top_e) + 1];
            for &e in extra_b.iter().rev() {
                s.cross(e, el);
            }
        }
    }

    for &f in &extra_r {
        while s.cur[s.at(f) - 1] != b(0) {
            let below = s.cur[s.at(f) - 1];
            s.cross(below, f);
        }
        s.touch(b(0), f);
        pairs.push((b(0), f));
    }

    let reds: Vec<usize> = s.cur.iter().copied().filter(|&w| w >= nb).collect();
    reds.into_iter().for_each(|w| s.end(w));
    (close(&s.ev), pairs)
}

pub fn gen_caterpillar(nb: usize, nr: usize) -> Family {
    let (ev, pairs) = schedule(nb, nr);
    let name = |w: usize| if w < nb { format!("b{w}") } else { format!("r{}", w - nb) };
    let mut f = realize(&ev, last_start(&ev), name).expect("schedule is well formed");
    f.meta = Some(json!({
        "generator": "caterpillar",
        "nBlue": nb,
        "nRed": nr,
        "requestedPairs": nb * nr,
        "realizedPairs": pairs.iter().map(|&(a, b)| [name(a), name(b)]).collect::<Vec<_>>(),
        "expectedTangencies": pairs.len(),
        "subset": "spanning caterpillar: one tree edge per curve beyond the first",
    }));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::validate_family;
    use crate::graph::{side_of, stabbing_line, Side};

    #[test]
    fn all_small_parameters() {
        for nb in 1..=8 {
            for nr in 1..=8 {
                let f = gen_caterpillar(nb, nr);
                let rep = validate_family(&f);
                assert!(rep.is_valid(), "({nb},{nr}) {:?}", rep.violations);
                let v = rep.valid.unwrap();
                let ell = stabbing_line(&v);
                let t: Vec<_> = v.touching().collect();
                assert_eq!(t.len(), nb + nr - 1, "({nb},{nr})");
                for rec in t {
                    assert_eq!(rec.ttype, Some(2), "({nb},{nr})");
                    assert_eq!(side_of(&rec.point.x, &ell), Side::Right);
                    assert!(v.id(rec.lower.unwrap()).starts_with('b'));
                }
            }
        }
    }
}

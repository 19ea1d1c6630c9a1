//! Endpoint-interleaving relations ≺1..≺4, tangency types, chains, the
//! two-antichain split and the blue/red partition.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::curve::{Family, IntersectionRecord, Kind, ValidFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    L,
    R,
}

/// Total order on endpoints. Ties in x are resolved as if every curve were
/// extended by its own infinitesimal: lefts before rights, tied lefts by
/// ascending id, tied rights by descending id.
pub fn endpoint_cmp(f: &Family, a: (usize, End), b: (usize, End)) -> Ordering {
    let pt = |(i, e): (usize, End)| match e {
        End::L => f.curves[i].left(),
        End::R => f.curves[i].right(),
    };
    pt(a).x.cmp(&pt(b).x).then_with(|| match (a.1, b.1) {
        (End::L, End::R) => Ordering::Less,
        (End::R, End::L) => Ordering::Greater,
        (End::L, End::L) => f.curves[a.0].id.cmp(&f.curves[b.0].id),
        (End::R, End::R) => f.curves[b.0].id.cmp(&f.curves[a.0].id),
    })
}

/// Case index for a non-crossing pair with the given lower and upper curve.
pub fn touch_type_of(f: &Family, lower: usize, upper: usize) -> u8 {
    let up_left_first = endpoint_cmp(f, (upper, End::L), (lower, End::L)) == Ordering::Less;
    let low_right_first = endpoint_cmp(f, (lower, End::R), (upper, End::R)) == Ordering::Less;
    match (up_left_first, low_right_first) {
        (true, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
        (false, true) => 4,
    }
}

pub fn touch_type(rec: &IntersectionRecord, v: &ValidFamily) -> Option<u8> {
    let lo = rec.lower?;
    Some(touch_type_of(&v.family, lo, rec.other(lo)))
}

/// `a ≺_i b`: a is below b, they do not cross, and the endpoints follow case i.
pub fn prec(v: &ValidFamily, i: u8, a: usize, b: usize) -> bool {
    if a == b {
        return false;
    }
    let r = v.record(a, b);
    r.kind == Kind::Touching && r.lower == Some(a) && r.ttype == Some(i)
}

/// Longest chain of ≺_i within `set`, as (length, witness bottom-to-top).
pub fn longest_chain(v: &ValidFamily, set: &[usize], i: u8) -> (usize, Vec<usize>) {
    if set.is_empty() {
        return (0, vec![]);
    }
    let m = set.len();
    let mut memo: Vec<Option<(usize, Option<usize>)>> = vec![None; m];
    fn go(v: &ValidFamily, set: &[usize], i: u8, k: usize, memo: &mut Vec<Option<(usize, Option<usize>)>>) -> usize {
        if let Some((len, _)) = memo[k] {
            return len;
        }
        let mut best = (1, None);
        for t in 0..set.len() {
            if prec(v, i, set[k], set[t]) {
                let l = 1 + go(v, set, i, t, memo);
                if l > best.0 {
                    best = (l, Some(t));
                }
            }
        }
        memo[k] = Some(best);
        best.0
    }
    let mut top = (0, 0);
    for k in 0..m {
        let l = go(v, set, i, k, &mut memo);
        if l > top.0 {
            top = (l, k);
        }
    }
    let mut chain = vec![set[top.1]];
    let mut k = top.1;
    while let Some((_, Some(nx))) = memo[k] {
        chain.push(set[nx]);
        k = nx;
    }
    (top.0, chain)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOfThree(pub Vec<usize>);

/// Minimal elements of ≺_i within `set`, then the rest.
pub fn mirsky_split(v: &ValidFamily, set: &[usize], i: u8) -> Result<(Vec<usize>, Vec<usize>), ChainOfThree> {
    let (len, witness) = longest_chain(v, set, i);
    if len > 2 {
        return Err(ChainOfThree(witness));
    }
    let (a, b): (Vec<usize>, Vec<usize>) = set.iter().partition(|&&c| !set.iter().any(|&d| prec(v, i, d, c)));
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

/// Witness for a colour conflict: `mid` touches `below` from above and `above`
/// from below, i.e. below ≺ mid ≺ above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotBipartite {
    pub below: usize,
    pub mid: usize,
    pub above: usize,
}

pub fn blue_red_partition(recs: &[&IntersectionRecord]) -> Result<BTreeMap<usize, Color>, NotBipartite> {
    let mut col = BTreeMap::new();
    let mut seen_as: BTreeMap<usize, (Color, usize)> = BTreeMap::new();
    for r in recs {
        let lo = r.lower.expect("touching record");
        let up = r.other(lo);
        for (c, want, partner) in [(lo, Color::Blue, up), (up, Color::Red, lo)] {
            match seen_as.get(&c) {
                Some(&(have, other)) if have != want => {
                    let (below, above) = if want == Color::Blue { (other, partner) } else { (partner, other) };
                    return Err(NotBipartite { below, mid: c, above });
                }
                Some(_) => {}
                None => {
                    seen_as.insert(c, (want, partner));
                    col.insert(c, want);
                }
            }
        }
    }
    Ok(col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate_family, Curve};
    use crate::geom::Point;

    fn c(id: &str, v: &[(i64, i64)]) -> Curve {
        Curve::new(id, v.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    fn valid(cs: Vec<Curve>) -> ValidFamily {
        let r = validate_family(&Family::new(cs));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        r.valid.unwrap()
    }

    #[test]
    fn prec_examples() {
        let v = valid(vec![c("low", &[(-2, 0), (5, 4), (12, 0)]), c("up", &[(0, 4), (10, 4)])]);
        assert!(prec(&v, 2, 0, 1));
        for i in [1, 3, 4] {
            assert!(!prec(&v, i, 0, 1));
        }
        assert!(!prec(&v, 2, 1, 0));

        let x = valid(vec![c("a", &[(0, 0), (2, 2)]), c("b", &[(0, 2), (2, 0)])]);
        assert!((1..=4).all(|i| !prec(&x, i, 0, 1) && !prec(&x, i, 1, 0)));

        let v = valid(vec![c("low", &[(0, 0), (5, 4), (10, 0)]), c("up", &[(-1, 4), (8, 4)])]);
        assert!(prec(&v, 3, 0, 1));
    }

    #[test]
    fn touch_type_table() {
        let v = valid(vec![c("low", &[(0, 0), (1, 1), (2, 0)]), c("up", &[(-1, 1), (3, 1)])]);
        assert_eq!(v.records[0].ttype, Some(1));
        let v = valid(vec![c("low", &[(0, 0), (5, 4), (10, 0)]), c("up", &[(1, 4), (11, 4)])]);
        assert_eq!(v.records[0].ttype, Some(4));
    }

    #[test]
    fn tied_endpoints_break_symbolically() {
        // lower and upper share the left abscissa: ids decide ("a" < "b" so a starts first).
        let v = valid(vec![c("a", &[(0, 0), (2, 2), (4, 0)]), c("b", &[(0, 2), (3, 2)])]);
        assert_eq!(v.records[0].ttype, Some(2));
        let v = valid(vec![c("b", &[(0, 0), (2, 2), (4, 0)]), c("a", &[(0, 2), (3, 2)])]);
        assert_eq!(v.records[0].ttype, Some(3));
    }

    #[test]
    fn chains_and_split() {
        let x = valid(vec![c("a", &[(0, 0), (2, 2)]), c("b", &[(0, 2), (2, 0)])]);
        assert_eq!(longest_chain(&x, &[0, 1], 1).0, 1);
        let v = valid(vec![
            c("low", &[(-2, 0), (5, 4), (12, 0)]),
            c("up", &[(0, 4), (10, 4)]),
            c("z", &[(-3, -10), (13, 20)]),
        ]);
        assert_eq!(longest_chain(&v, &[0, 1, 2], 2), (2, vec![0, 1]));
        assert_eq!(mirsky_split(&v, &[0, 1, 2], 2), Ok((vec![0, 2], vec![1])));
        assert_eq!(mirsky_split(&v, &[0, 1, 2], 1), Ok((vec![0, 1, 2], vec![])));
    }

    #[test]
    fn partition_conflict_is_a_chain() {
        let v = valid(vec![c("low", &[(-2, 0), (5, 4), (12, 0)]), c("up", &[(0, 4), (10, 4)])]);
        let recs: Vec<_> = v.touching().collect();
        let col = blue_red_partition(&recs).unwrap();
        assert_eq!(col[&0], Color::Blue);
        assert_eq!(col[&1], Color::Red);

        let mk = |a, b, lower| IntersectionRecord {
            a,
            b,
            point: Point::ints(0, 0),
            kind: Kind::Touching,
            lower: Some(lower),
            ttype: Some(2),
            marked: false,
        };
        let r1 = mk(0, 1, 0);
        let r2 = mk(1, 2, 1);
        let err = blue_red_partition(&[&r1, &r2]).unwrap_err();
        assert_eq!(err, NotBipartite { below: 0, mid: 1, above: 2 });
    }
}

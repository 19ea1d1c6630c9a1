//! Wiring schedules: a left-to-right list of start / touch / cross / end
//! events over a vertical stack of wires, realized as exact polylines.
//!
//! Each event occupies its own column. Alive wires sit at integer heights
//! equal to their rank in the stack; a meeting pair shares the half-integer
//! point between its two ranks. Between columns every wire moves linearly,
//! and since ranks only change order at meetings, nothing else intersects.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::curve::{Curve, Family};
use crate::geom::{orient, q, qr, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ev {
    /// Start wire at the given bottom-to-top index of the new stack.
    S(usize, usize),
    /// Adjacent pair touches.
    T(usize, usize),
    /// Adjacent pair crosses and swaps.
    X(usize, usize),
    E(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WiringError {
    #[error("event {0}: wire {1} started twice")]
    Restart(usize, usize),
    #[error("event {0}: position {1} outside the stack")]
    Position(usize, usize),
    #[error("event {0}: wire {1} is not alive")]
    NotAlive(usize, usize),
    #[error("event {0}: wires {1} and {2} are not adjacent")]
    NotAdjacent(usize, usize, usize),
    #[error("wires {0} and {1} meet more than once")]
    MeetTwice(usize, usize),
    #[error("wires {0} and {1} never meet")]
    NeverMeet(usize, usize),
}

/// Wires still alive at the end get `E` events (bottom to top).
pub fn close(events: &[Ev]) -> Vec<Ev> {
    let mut ev = events.to_vec();
    let mut order: Vec<usize> = Vec::new();
    for e in events {
        match *e {
            Ev::S(w, p) if p <= order.len() => order.insert(p, w),
            Ev::X(a, b) => {
                if let (Some(i), Some(j)) = (order.iter().position(|&w| w == a), order.iter().position(|&w| w == b)) {
                    order.swap(i, j);
                }
            }
            Ev::E(w) => order.retain(|&v| v != w),
            _ => {}
        }
    }
    ev.extend(order.into_iter().map(Ev::E));
    ev
}

/// Realize a closed schedule. The gap after event `wide_after` is doubled.
pub fn realize(
    events: &[Ev],
    wide_after: Option<usize>,
    name: impl Fn(usize) -> String,
) -> Result<Family, WiringError> {
    let mut order: Vec<usize> = Vec::new();
    let mut started = BTreeSet::new();
    let mut pts: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    let mut met: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut x = q(0);
    let half = qr(1, 2);

    let pos =
        |order: &Vec<usize>, t: usize, w: usize| order.iter().position(|&v| v == w).ok_or(WiringError::NotAlive(t, w));

    for (t, e) in events.iter().enumerate() {
        if t > 0 {
            x += if wide_after == Some(t - 1) { q(2) } else { q(1) };
        }
        let mut meeting: Option<(usize, usize)> = None;
        match *e {
            Ev::S(w, p) => {
                if !started.insert(w) {
                    return Err(WiringError::Restart(t, w));
                }
                if p > order.len() {
                    return Err(WiringError::Position(t, p));
                }
                order.insert(p, w);
            }
            Ev::T(a, b) | Ev::X(a, b) => {
                let (i, j) = (pos(&order, t, a)?, pos(&order, t, b)?);
                if i.abs_diff(j) != 1 {
                    return Err(WiringError::NotAdjacent(t, a, b));
                }
                if !met.insert((a.min(b), a.max(b))) {
                    return Err(WiringError::MeetTwice(a.min(b), a.max(b)));
                }
                meeting = Some((i.min(j), i.max(j)));
            }
            Ev::E(w) => {
                pos(&order, t, w)?;
            }
        }
        for (r, &w) in order.iter().enumerate() {
            let y = match meeting {
                Some((lo, hi)) if r == lo || r == hi => q(lo as i64) + &half,
                _ => q(r as i64),
            };
            pts.entry(w).or_default().push(Point::new(x.clone(), y));
        }
        match *e {
            Ev::X(..) => {
                let (lo, hi) = meeting.expect("set above");
                order.swap(lo, hi);
            }
            Ev::E(w) => order.retain(|&v| v != w),
            _ => {}
        }
    }
    if let Some(&w) = order.first() {
        return Err(WiringError::NotAlive(events.len(), w));
    }
    let wires: Vec<usize> = pts.keys().copied().collect();
    for (k, &a) in wires.iter().enumerate() {
        for &b in &wires[k + 1..] {
            if !met.contains(&(a.min(b), a.max(b))) {
                return Err(WiringError::NeverMeet(a.min(b), a.max(b)));
            }
        }
    }
    let curves =
        pts.into_iter().map(|(w, v)| Curve::new(name(w), simplify(v)).expect("columns strictly increase")).collect();
    Ok(Family::new(curves))
}

fn simplify(v: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(v.len());
    for p in v {
        while out.len() >= 2 && orient(&out[out.len() - 2], &out[out.len() - 1], &p) == 0 {
            out.pop();
        }
        out.push(p);
    }
    out
}

/// Touching pairs of a schedule.
pub fn touches(events: &[Ev]) -> Vec<(usize, usize)> {
    events
        .iter()
        .filter_map(|e| match *e {
            Ev::T(a, b) => Some((a, b)),
            _ => None,
        })
        .collect()
}

pub fn last_start(events: &[Ev]) -> Option<usize> {
    events.iter().rposition(|e| matches!(e, Ev::S(..)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate_family, Kind};

    #[test]
    fn two_wires_touch() {
        let ev = close(&[Ev::S(0, 0), Ev::S(1, 1), Ev::T(0, 1)]);
        let f = realize(&ev, None, |w| format!("w{w}")).unwrap();
        let v = validate_family(&f).valid.unwrap();
        assert_eq!(v.records[0].kind, Kind::Touching);
    }

    #[test]
    fn errors() {
        let name = |w: usize| w.to_string();
        assert_eq!(realize(&[Ev::S(0, 1)], None, name), Err(WiringError::Position(0, 1)));
        let ev = [Ev::S(0, 0), Ev::S(1, 1), Ev::S(2, 2), Ev::T(0, 2)];
        assert_eq!(realize(&ev, None, name), Err(WiringError::NotAdjacent(3, 0, 2)));
        let ev = close(&[Ev::S(0, 0), Ev::S(1, 1)]);
        assert_eq!(realize(&ev, None, name), Err(WiringError::NeverMeet(0, 1)));
        let ev = [Ev::S(0, 0), Ev::S(1, 1), Ev::X(0, 1), Ev::X(0, 1)];
        assert_eq!(realize(&ev, None, name), Err(WiringError::MeetTwice(0, 1)));
    }

    #[test]
    fn collinear_vertices_dropped() {
        let v = simplify(vec![Point::ints(0, 0), Point::ints(1, 1), Point::ints(2, 2), Point::ints(3, 0)]);
        assert_eq!(v, vec![Point::ints(0, 0), Point::ints(2, 2), Point::ints(3, 0)]);
    }
}

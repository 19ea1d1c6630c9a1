//! Pairwise-crossing segments on the tangent lines of a parabola.
//!
//! Line m is y = m·x + m²; lines i and j meet at (−(i+j), −i·j), and a third
//! line k passes there only if k ∈ {i, j}. Domain of line m is [−2n−m, m],
//! so every meeting is interior and all endpoints are distinct.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::curve::{Curve, Family};
use crate::geom::{q, Point};

pub fn gen_lines(n: usize, seed: u64) -> Family {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (dx, dy) = (rng.gen_range(-8i64..=8), rng.gen_range(-8i64..=8));
    let n = n as i64;
    let mut curves: Vec<Curve> = (1..=n)
        .map(|m| {
            let at = |x: i64| Point::new(q(x + dx), q(m * x + m * m + dy));
            Curve::new(format!("l{m}"), vec![at(-2 * n - m), at(m)]).expect("increasing x")
        })
        .collect();
    curves.shuffle(&mut rng);
    let mut f = Family::new(curves);
    f.meta = Some(json!({
        "generator": "lines",
        "n": n,
        "seed": seed,
        "expectedCrossings": n * (n - 1) / 2,
        "expectedTangencies": 0,
    }));
    f
}

//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tangency::curve::{classify_point, validate_family, Curve, Family, Kind};
use tangency::gen::{gen_3n4, gen_caterpillar, gen_grid_incidence, gen_lines};
use tangency::geom::{qr, to_f64, Point};
use tangency::search::{enumerate_families, max_tangencies, GridSpec};
use tangency::verify::{analyze, write_counterexamples, Analysis, Report};

/// t₃ for the 5×5 grid with at most 4 vertices, pinned from the exhaustive run.
const T3_PINNED: usize = 2;

struct Line {
    ok: bool,
    text: String,
}

fn line(id: &str, ok: bool, budget: Duration, took: Duration, detail: String) -> Line {
    let ok = ok && took <= budget;
    let verdict = if ok { "PASS" } else { "FAIL" };
    Line { ok, text: format!("{verdict} {id}: {detail} [{:.2}s, budget {}s]", took.as_secs_f64(), budget.as_secs()) }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn analysis(r: &Report) -> &Analysis {
    r.analysis.as_ref().expect("valid family")
}

fn cx_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-counterexamples")
}

struct Corpus {
    items: Vec<(String, Family, Report)>,
    build: Duration,
    enumerated: usize,
}

fn corpus() -> Corpus {
    let t = Instant::now();
    let mut fams: Vec<(String, Family)> = Vec::new();
    for b in 1..=8 {
        for r in 1..=8 {
            fams.push((format!("caterpillar({b},{r})"), gen_caterpillar(b, r)));
        }
    }
    for n in 2..=50 {
        fams.push((format!("3n-4({n})"), gen_3n4(n)));
    }
    let (found, _) = enumerate_families(3, &GridSpec::new(5, 5, 4)).expect("within guard");
    let enumerated = found.len();
    fams.extend(found.into_iter().enumerate().map(|(k, f)| (format!("grid5x5x4#{k}"), f)));
    let items = fams
        .into_iter()
        .map(|(name, f)| {
            let r = analyze(&f);
            (name, f, r)
        })
        .collect();
    Corpus { items, build: t.elapsed(), enumerated }
}

/// Writes counterexamples for failing items; returns the first failing name.
fn first_failure(c: &Corpus, bad: impl Fn(&Report) -> bool) -> Option<&str> {
    let mut first = None;
    for (name, f, r) in &c.items {
        if bad(r) {
            let dir = cx_dir().join(name.replace(['(', ')', ',', '#'], "_"));
            let _ = write_counterexamples(&dir, f, r);
            first.get_or_insert(name.as_str());
        }
    }
    first
}

fn c1() -> Line {
    let t = Instant::now();
    let r = analyze(&gen_lines(20, 0));
    let a = analysis(&r);
    let ok = a.crossings == 190 && a.total_tangencies == 0 && r.all_pass();
    line(
        "C1 baseline lines(20)",
        ok,
        secs(1),
        t.elapsed(),
        format!("crossings={} tangencies={} allPass={}", a.crossings, a.total_tangencies, r.all_pass()),
    )
}

fn c2() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [4usize, 10, 20, 50] {
        let r = analyze(&gen_3n4(n));
        let Some(a) = &r.analysis else {
            ok = false;
            parts.push(format!("n={n}: invalid"));
            continue;
        };
        let want = 3 * n - 4;
        let good = a.total_tangencies == want && r.all_pass() && a.bound904n4;
        ok &= good;
        parts.push(if good {
            format!("n={n}: {want}")
        } else {
            format!("n={n}: {} != {want} (allPass={})", a.total_tangencies, r.all_pass())
        });
    }
    let mut detail = parts.join(", ");
    if !ok {
        detail.push_str("; 3n-4 exceeds C(n,2) at n=4, unattainable (see decisions ledger)");
    }
    line("C2 3n-4 construction", ok, secs(10), t.elapsed(), detail)
}

fn c3(c: &Corpus, took: Duration) -> Line {
    let t = Instant::now();
    let bad = |r: &Report| {
        let a = analysis(r);
        let p = &a.nested_pipeline;
        p.forest_verdict != "forest" || p.graph_size.edges + 1 > r.n.max(1)
    };
    let fail = first_failure(c, bad);
    let detail = format!(
        "{} families ({} enumerated): forest with <= n-1 edges{}",
        c.items.len(),
        c.enumerated,
        fail.map(|f| format!("; first failure {f}")).unwrap_or_default()
    );
    line("C3 forest", fail.is_none() && c.items.len() >= 500, secs(300), took + t.elapsed(), detail)
}

fn c4(c: &Corpus, took: Duration) -> Line {
    let t = Instant::now();
    let bad = |r: &Report| {
        let a = analysis(r);
        let p = &a.non_nested_pipeline;
        let (v, e) = (p.graph_size.vertices, p.graph_size.edges);
        let t34 = a.counts_by_type[2] + a.counts_by_type[3];
        p.max_monotone_path_from_b > 6 || (e > 0 && e >= 28 * v) || t34 > 896 * r.n
    };
    let fail = first_failure(c, bad);
    let longest = c.items.iter().map(|(_, _, r)| analysis(r).non_nested_pipeline.max_monotone_path_from_b).max();
    let detail = format!(
        "path from B <= 6 (max seen {}), |E| < 28|V|, types 3+4 <= 896n{}",
        longest.unwrap_or(0),
        fail.map(|f| format!("; first failure {f}")).unwrap_or_default()
    );
    line("C4 monotone path / Rodl", fail.is_none(), secs(300), took + t.elapsed(), detail)
}

fn c5(c: &Corpus, took: Duration) -> Line {
    let t = Instant::now();
    let fail = first_failure(c, |r| !r.failures().is_empty() || !r.valid);
    let checked: usize = c
        .items
        .iter()
        .map(|(_, _, r)| analysis(r).proposition_verdicts.values().map(|v| v.instances).sum::<usize>())
        .sum();
    let detail = format!(
        "all propositions on {} families, {checked} tuples{}",
        c.items.len(),
        fail.map(|f| format!("; first failure {f}")).unwrap_or_default()
    );
    line("C5 proposition sweep", fail.is_none(), secs(600), took + t.elapsed(), detail)
}

fn c6() -> Line {
    let t = Instant::now();
    let mut pts = Vec::new();
    let mut ok = true;
    for k in 2..=6 {
        let g = gen_grid_incidence(k);
        ok &= g.report.is_valid() && g.report.tangency_points == g.incidences;
        pts.push(((g.report.n as f64).ln(), (g.report.tangency_points as f64).ln()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = num / den;
    ok &= (1.25..=1.40).contains(&slope);
    let counts: Vec<String> = pts.iter().map(|p| format!("{:.0}", p.1.exp())).collect();
    line(
        "C6 incidence growth",
        ok,
        secs(60),
        t.elapsed(),
        format!("T = [{}], slope {slope:.4} in [1.25, 1.40]", counts.join(", ")),
    )
}

fn c7(c: &Corpus) -> Line {
    let t = Instant::now();
    let small = max_tangencies(2, &GridSpec::new(3, 3, 3), None).ok().map(|b| b.value);
    let t3 = max_tangencies(3, &GridSpec::new(5, 5, 4), None).ok().map(|b| b.value);
    let enumerated: Vec<&Report> =
        c.items.iter().filter(|(n, _, _)| n.starts_with("grid")).map(|(_, _, r)| r).collect();
    let seen = enumerated.iter().map(|r| analysis(r).total_tangencies).max().unwrap_or(0);
    let sound = enumerated.iter().all(|r| {
        let a = analysis(r);
        a.bound904n4 && a.proposition_verdicts["poset"].pass()
    });
    let ok = small == Some(1) && t3 == Some(T3_PINNED) && seen == T3_PINNED && sound;
    line(
        "C7 brute-force oracle",
        ok,
        secs(1800),
        t.elapsed(),
        format!(
            "max(2, 3x3x3) = {:?}, t3 = max(3, 5x5x4) = {:?} (pinned {T3_PINNED}, enumeration max {seen}), poset + 904n-4 on {} families",
            small,
            t3,
            enumerated.len()
        ),
    )
}

// --- C8: exact classification against a perturbed floating-point oracle ---

fn eval_f64(v: &[(f64, f64)], x: f64) -> f64 {
    let k = v.partition_point(|p| p.0 < x).clamp(1, v.len() - 1);
    let (a, b) = (v[k - 1], v[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

fn small_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> tangency::Q {
    let d = rng.gen_range(1..=4);
    qr(rng.gen_range(lo * d..=hi * d), d)
}

/// Two short polylines meeting at a random point: bends at the point, or a
/// straight segment through it, or two unrelated segments.
fn instance(rng: &mut ChaCha8Rng) -> (Curve, Curve) {
    let p = Point::new(small_q(rng, -5, 5), small_q(rng, -5, 5));
    let arm = |rng: &mut ChaCha8Rng, bend: bool| -> Vec<Point> {
        let (a, b) = (small_q(rng, 1, 4), small_q(rng, 1, 4));
        let s = small_q(rng, -3, 3);
        let left = Point::new(&p.x - &a, &p.y - &s * &a);
        if bend {
            let t = small_q(rng, -3, 3);
            vec![left, p.clone(), Point::new(&p.x + &b, &p.y + &t * &b)]
        } else {
            vec![left, Point::new(&p.x + &b, &p.y + &s * &b)]
        }
    };
    match rng.gen_range(0..4) {
        0 => (Curve::new("a", arm(rng, true)).unwrap(), Curve::new("b", arm(rng, true)).unwrap()),
        1 => (Curve::new("a", arm(rng, true)).unwrap(), Curve::new("b", arm(rng, false)).unwrap()),
        2 => (Curve::new("a", arm(rng, false)).unwrap(), Curve::new("b", arm(rng, false)).unwrap()),
        _ => {
            let seg = |rng: &mut ChaCha8Rng| {
                let x0 = small_q(rng, -8, 0);
                let x1 = &x0 + small_q(rng, 1, 8);
                vec![Point::new(x0, small_q(rng, -8, 8)), Point::new(x1, small_q(rng, -8, 8))]
            };
            (Curve::new("a", seg(rng)).unwrap(), Curve::new("b", seg(rng)).unwrap())
        }
    }
}

const EPS: f64 = 1e-9;

/// Side signs just left and right of `px` for endpoint-perturbed copies;
/// `None` when perturbations disagree or a difference is too close to zero.
fn oracle(a: &Curve, b: &Curve, px: f64, rng: &mut ChaCha8Rng) -> Option<Kind> {
    let fv = |c: &Curve| -> Vec<(f64, f64)> { c.vertices().iter().map(|p| (to_f64(&p.x), to_f64(&p.y))).collect() };
    let (va, vb) = (fv(a), fv(b));
    let gap = va.iter().chain(&vb).map(|p| (p.0 - px).abs()).filter(|d| *d > 1e-7).fold(f64::INFINITY, f64::min);
    let h = gap / 2.0;
    let mut answer = None;
    for _ in 0..8 {
        let mut jitter = |v: &[(f64, f64)]| -> Vec<(f64, f64)> {
            v.iter().map(|p| (p.0 + rng.gen_range(-EPS..=EPS), p.1 + rng.gen_range(-EPS..=EPS))).collect()
        };
        let (pa, pb) = (jitter(&va), jitter(&vb));
        let l = eval_f64(&pa, px - h) - eval_f64(&pb, px - h);
        let r = eval_f64(&pa, px + h) - eval_f64(&pb, px + h);
        if l.abs() < 1e-6 || r.abs() < 1e-6 {
            return None;
        }
        let k = if (l > 0.0) == (r > 0.0) { Kind::Touching } else { Kind::Crossing };
        if answer.is_some_and(|x| x != k) {
            return None;
        }
        answer = Some(k);
    }
    answer
}

fn c8() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut stable, mut agree, mut touching, mut tries) = (0usize, 0usize, 0usize, 0usize);
    let mut first_bad = None;
    while stable < 10_000 && tries < 200_000 {
        tries += 1;
        let (a, b) = instance(&mut rng);
        let f = Family::new(vec![a.clone(), b.clone()]);
        let Some(v) = validate_family(&f).valid else { continue };
        let p = &v.records[0].point;
        let exact = classify_point(&a, &b, p).expect("interior isolated point");
        let Some(k) = oracle(&a, &b, to_f64(&p.x), &mut rng) else { continue };
        stable += 1;
        touching += (exact == Kind::Touching) as usize;
        if k == exact {
            agree += 1;
        } else {
            first_bad.get_or_insert_with(|| f.to_json());
        }
    }
    let ok = stable >= 10_000 && agree == stable;
    let mut detail = format!("{agree}/{stable} stable instances agree ({touching} touching, {tries} drawn, eps 1e-9)");
    if let Some(j) = first_bad {
        detail.push_str(&format!("; first disagreement {}", j.replace('\n', "")));
    }
    line("C8 exact vs float oracle", ok, secs(30), t.elapsed(), detail)
}

fn c9(c: &Corpus) -> Line {
    let t = Instant::now();
    let diff = c.items.iter().find(|(_, f, r)| analyze(f).to_json() != r.to_json()).map(|(n, _, _)| n.clone());
    let detail = format!(
        "byte-identical reports on {} families{}",
        c.items.len(),
        diff.as_ref().map(|d| format!("; differs on {d}")).unwrap_or_default()
    );
    line("C9 determinism", diff.is_none(), secs(600), t.elapsed(), detail)
}

fn main() {
    // `cargo test -- --list` and filters pass arguments; there is only one case
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut lines = vec![c1(), c2()];
    let corpus = corpus();
    let build = corpus.build;
    lines.push(c3(&corpus, build));
    lines.push(c4(&corpus, build));
    lines.push(c5(&corpus, build));
    lines.push(c6());
    lines.push(c7(&corpus));
    lines.push(c8());
    lines.push(c9(&corpus));
    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

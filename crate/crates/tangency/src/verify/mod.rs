//! End-to-end certificate: validation, census, both pipelines, proposition sweep.

pub mod pipelines;
pub mod props;

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::curve::{validate_family, Family, Kind, ValidFamily, Violation};
use crate::geom::fmt_q;
use crate::graph::{side_type_census, stabbing_line, ForestVerdict, Rodl};
use crate::io::write_atomic;
use crate::order::Color;
pub use pipelines::{run_nested, run_non_nested, NestedRun, NonNestedRun};
use props::Outcome;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct GraphSize {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct Coloring {
    pub blue: Vec<String>,
    pub red: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct NestedReport {
    pub reflections: Vec<String>,
    pub types12: usize,
    pub considered: usize,
    pub coloring: Option<Coloring>,
    pub marked_count: usize,
    pub graph_size: GraphSize,
    pub forest_verdict: String,
    pub cycle: Vec<String>,
    pub tie_break_fired: bool,
    pub bound2n1: bool,
    pub bound8n4: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct AntichainSelection {
    pub relation: u8,
    pub minimal: usize,
    pub rest: usize,
    pub minimal_tangencies: usize,
    pub rest_tangencies: usize,
    pub kept: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct NonNestedReport {
    pub reflections: Vec<String>,
    pub types34: usize,
    pub considered: usize,
    pub coloring: Option<Coloring>,
    pub antichain_selections: Vec<AntichainSelection>,
    pub surviving_blues: Vec<String>,
    pub graph_size: GraphSize,
    pub tie_break_fired: bool,
    pub max_monotone_path_from_b: usize,
    pub max_monotone_path_any: usize,
    pub rodl_verdict: String,
    pub bound28n: bool,
    pub bound896n: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleRef {
    pub curves: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub status: String,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleRef>,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub crossings: usize,
    pub counts_by_type: [usize; 4],
    pub total_tangencies: usize,
    pub ell: String,
    pub reflections_applied: Vec<String>,
    pub nested_pipeline: NestedReport,
    pub non_nested_pipeline: NonNestedReport,
    pub proposition_verdicts: BTreeMap<String, Verdict>,
    pub bound904n4: bool,
    /// Not asserted: the right constant is open.
    pub observation3n4: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub n: usize,
    pub valid: bool,
    pub violations: Vec<Violation>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Valid input and every assertion holds.
    pub fn all_pass(&self) -> bool {
        match &self.analysis {
            None => false,
            Some(a) => {
                a.bound904n4
                    && a.nested_pipeline.bound2n1
                    && a.nested_pipeline.bound8n4
                    && a.non_nested_pipeline.bound28n
                    && a.non_nested_pipeline.bound896n
                    && a.proposition_verdicts.values().all(Verdict::pass)
            }
        }
    }

    pub fn failures(&self) -> Vec<(&str, &Verdict)> {
        match &self.analysis {
            None => vec![],
            Some(a) => a.proposition_verdicts.iter().filter(|(_, v)| !v.pass()).map(|(k, v)| (k.as_str(), v)).collect(),
        }
    }
}

fn ids(v: &ValidFamily, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&k| v.id(k).to_string()).collect()
}

fn coloring_of(v: &ValidFamily, c: &Result<BTreeMap<usize, Color>, crate::order::NotBipartite>) -> Option<Coloring> {
    let m = c.as_ref().ok()?;
    let pick = |want| m.iter().filter(|(_, c)| **c == want).map(|(k, _)| v.id(*k).to_string()).collect();
    Some(Coloring { blue: pick(Color::Blue), red: pick(Color::Red) })
}

/// All checkers, in a fixed order; `only` restricts by name.
pub fn check_propositions(
    v: &ValidFamily,
    nested: &NestedRun,
    non: &NonNestedRun,
    only: Option<&[String]>,
) -> BTreeMap<String, Verdict> {
    let want = |name: &str| only.is_none_or(|o| o.iter().any(|s| s == name));
    let mut out = BTreeMap::new();
    let mut put = |name: &str, ctx: &ValidFamily, o: Outcome| {
        let counterexample = o.failure.map(|f| CounterexampleRef { curves: ids(ctx, &f.curves), detail: f.detail });
        let status = if counterexample.is_some() { "fail" } else { "pass" }.to_string();
        out.insert(name.to_string(), Verdict { status, instances: o.instances, counterexample });
    };
    let nv = &nested.norm.v;
    let xv = &non.norm.v;
    if want("poset") {
        let mut o = props::poset(v);
        // a colour conflict is a 3-chain too
        for c in [&nested.coloring, &non.coloring] {
            if o.failure.is_none() {
                o.failure = props::colour_conflict(c);
            }
        }
        put("poset", v, o);
    }
    if want("blue-cross") {
        put("blue-cross", nv, props::blue_cross(nested));
    }
    if want("blue-cross-between") {
        put("blue-cross-between", nv, props::blue_cross_between(nested));
    }
    if want("b-above") {
        put("b-above", nv, props::b_above(nested));
    }
    if want("red-cross-between") {
        put("red-cross-between", nv, props::red_cross_between(nested));
    }
    if want("b0-b2") {
        put("b0-b2", nv, props::b0_b2(nested));
    }
    if want("structure") {
        put("structure", nv, props::structure(nested));
    }
    if want("forest") {
        put("forest", nv, props::forest(nested));
    }
    if want("surviving-blues-cross") {
        put("surviving-blues-cross", xv, props::surviving_blues_cross(non));
    }
    if want("no-7-path") {
        put("no-7-path", xv, props::no_7_path(non));
    }
    if want("k-path") {
        put("k-path", xv, props::k_path(non));
    }
    if want("reds-cross-non-nested") {
        put("reds-cross-non-nested", xv, props::reds_cross_non_nested(non));
    }
    if want("blues-cross-non-nested") {
        put("blues-cross-non-nested", xv, props::blues_cross_non_nested(non));
    }
    out
}

fn nested_report(v: &ValidFamily, r: &NestedRun) -> NestedReport {
    let (verdict, cycle) = match &r.forest {
        ForestVerdict::Forest => ("forest".to_string(), vec![]),
        ForestVerdict::Cycle(c) => ("cycle".to_string(), ids(v, c)),
    };
    NestedReport {
        reflections: r.norm.reflections.iter().map(|a| a.label()).collect(),
        types12: r.types12,
        considered: r.considered.len(),
        coloring: coloring_of(v, &r.coloring),
        marked_count: r.marked.len(),
        graph_size: GraphSize { vertices: r.graph.vertex_count(), edges: r.graph.edges.len() },
        forest_verdict: verdict,
        cycle,
        tie_break_fired: r.graph.tie_break_fired,
        bound2n1: r.bound_2n1(),
        bound8n4: r.bound_8n4(),
    }
}

fn non_nested_report(v: &ValidFamily, r: &NonNestedRun) -> NonNestedReport {
    NonNestedReport {
        reflections: r.norm.reflections.iter().map(|a| a.label()).collect(),
        types34: r.types34,
        considered: r.considered.len(),
        coloring: coloring_of(v, &r.coloring),
        antichain_selections: r
            .rounds
            .iter()
            .map(|x| AntichainSelection {
                relation: x.relation,
                minimal: x.minimal.len(),
                rest: x.rest.len(),
                minimal_tangencies: x.minimal_tangencies,
                rest_tangencies: x.rest_tangencies,
                kept: match (&x.chain, x.kept_minimal) {
                    (Some(_), _) => "refused: chain of three".into(),
                    (None, true) => "minimal".into(),
                    (None, false) => "rest".into(),
                },
            })
            .collect(),
        surviving_blues: ids(v, &r.survivors),
        graph_size: GraphSize { vertices: r.graph.vertex_count(), edges: r.graph.edges.len() },
        tie_break_fired: r.graph.tie_break_fired,
        max_monotone_path_from_b: r.path_b.0,
        max_monotone_path_any: r.path_any.0,
        rodl_verdict: match r.rodl {
            Rodl::Holds => "holds".into(),
            Rodl::Fails => "fails".into(),
            Rodl::PremiseFailed(k) => format!("premise failed: monotone path of {k} edges"),
        },
        bound28n: r.bound_28n(),
        bound896n: r.bound_896n(),
    }
}

pub fn analyze_valid(v: &ValidFamily, only: Option<&[String]>) -> Report {
    let n = v.n();
    let ell = stabbing_line(v);
    let census = side_type_census(v, &ell);
    let counts_by_type = [0, 1, 2, 3].map(|t| census[t][0] + census[t][1]);
    let total: usize = counts_by_type.iter().sum();
    let nested = run_nested(v);
    let non = run_non_nested(v);
    let verdicts = check_propositions(v, &nested, &non, only);
    let mut reflections_applied = Vec::new();
    for (tag, rs) in [("nested", &nested.norm.reflections), ("non-nested", &non.norm.reflections)] {
        reflections_applied.extend(rs.iter().map(|a| format!("{tag}: {}", a.label())));
    }
    let analysis = Analysis {
        crossings: v.records.iter().filter(|r| r.kind == Kind::Crossing).count(),
        counts_by_type,
        total_tangencies: total,
        ell: fmt_q(&ell),
        reflections_applied,
        nested_pipeline: nested_report(&nested.norm.v, &nested),
        non_nested_pipeline: non_nested_report(&non.norm.v, &non),
        proposition_verdicts: verdicts,
        bound904n4: total as i64 <= 904 * n as i64 - 4,
        observation3n4: total as i64 <= 3 * n as i64 - 4,
    };
    Report { n, valid: true, violations: vec![], analysis: Some(analysis) }
}

pub fn analyze(f: &Family) -> Report {
    analyze_only(f, None)
}

pub fn analyze_only(f: &Family, only: Option<&[String]>) -> Report {
    let rep = validate_family(f);
    match rep.valid {
        Some(v) => analyze_valid(&v, only),
        None => Report { n: f.len(), valid: false, violations: rep.violations, analysis: None },
    }
}

/// Writes `<stem>.family.json` (whole input; re-analysing it reproduces the
/// failure), `<stem>.slice.json` (witness curves only) and `<stem>.txt`.
pub fn write_counterexamples(dir: &Path, f: &Family, report: &Report) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let failures = report.failures();
    if failures.is_empty() {
        return Ok(written);
    }
    std::fs::create_dir_all(dir)?;
    for (name, verdict) in failures {
        let cx = verdict.counterexample.as_ref().expect("failed verdicts carry a witness");
        let whole = dir.join(format!("{name}.family.json"));
        write_atomic(&whole, f.to_json().as_bytes())?;
        let idx: Vec<usize> = cx.curves.iter().filter_map(|id| f.index_of(id)).collect();
        let slice = dir.join(format!("{name}.slice.json"));
        write_atomic(&slice, f.slice(&idx).to_json().as_bytes())?;
        let note = dir.join(format!("{name}.txt"));
        let text = format!("violated: {name}\ncurves: {}\ndetail: {}\n", cx.curves.join(","), cx.detail);
        write_atomic(&note, text.as_bytes())?;
        written.extend([whole, slice, note]);
    }
    Ok(written)
}

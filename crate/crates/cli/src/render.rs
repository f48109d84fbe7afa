//! Text, JSON and DOT renderings of engine results.

use std::fmt::Write;

use pevkit::bar::TruncatedComplex;
use pevkit::engine::{ArsReport, ReductionGraph};
use pevkit::monad::LawReport;
use serde_json::{json, Value as Json};

use crate::format::value_to_json;

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per expression, one edge per related pair labelled with its
/// witness count. The seed is drawn as a box, the total evaluation doubled.
pub fn graph_dot(g: &ReductionGraph) -> String {
    let mut out = String::from("digraph reduction {\n    rankdir=LR;\n");
    for (i, n) in g.nodes().iter().enumerate() {
        let mut attrs = format!("label=\"{}\"", dot_escape(&n.value().to_string()));
        if i == g.seed() {
            attrs.push_str(", shape=box");
        }
        if Some(i) == g.total_evaluation() {
            attrs.push_str(", peripheries=2");
        }
        writeln!(out, "    n{i} [{attrs}];").unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "    n{} -> n{} [label=\"{}\"];",
            e.source, e.target, e.witnesses
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn graph_json(g: &ReductionGraph, ars: &ArsReport) -> Json {
    json!({
        "nodes": g.nodes().iter().map(|n| value_to_json(n.value())).collect::<Vec<_>>(),
        "edges": g
            .edges()
            .iter()
            .map(|e| json!({ "source": e.source, "target": e.target, "witnesses": e.witnesses }))
            .collect::<Vec<_>>(),
        "seed": g.seed(),
        "total_evaluation": g.total_evaluation(),
        "properties": ars_json(ars),
    })
}

pub fn ars_json(ars: &ArsReport) -> Json {
    json!({
        "reflexive": ars.reflexive,
        "confluent": ars.confluent,
        "joined_by_total_evaluation": ars.joined_by_total_evaluation,
        "transitive": ars.transitive,
        "violations": ars.violations,
    })
}

pub fn graph_text(g: &ReductionGraph, ars: &ArsReport) -> String {
    let mut out = String::new();
    writeln!(out, "{} nodes, {} edges", g.nodes().len(), g.edges().len()).unwrap();
    for (i, n) in g.nodes().iter().enumerate() {
        let mut marks = String::new();
        if i == g.seed() {
            marks.push_str(" (seed)");
        }
        if Some(i) == g.total_evaluation() {
            marks.push_str(" (total evaluation)");
        }
        writeln!(out, "  n{i}: {}{marks}", n.value()).unwrap();
    }
    for e in g.edges() {
        let plural = if e.witnesses == 1 { "" } else { "es" };
        writeln!(
            out,
            "  n{} -> n{}  [{} witness{plural}]",
            e.source, e.target, e.witnesses
        )
        .unwrap();
    }
    writeln!(
        out,
        "reflexive: {}, confluent: {}, joined by total evaluation: {}, transitive: {}",
        ars.reflexive, ars.confluent, ars.joined_by_total_evaluation, ars.transitive
    )
    .unwrap();
    for v in &ars.violations {
        writeln!(out, "  violation: {v}").unwrap();
    }
    out
}

pub fn complex_json(c: &TruncatedComplex) -> Json {
    json!({
        "max_level": c.max_level,
        "levels": c
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| json!({
                "level": i,
                "simplices": l.iter().map(|x| value_to_json(x.value())).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "faces": c.faces,
        "degeneracies": c.degeneracies,
    })
}

/// The 1-skeleton: vertices, and one arrow d₀ → d₁ per 1-simplex.
pub fn complex_dot(c: &TruncatedComplex) -> String {
    let mut out = String::from("digraph skeleton {\n    rankdir=LR;\n");
    for (i, v) in c.levels[0].iter().enumerate() {
        writeln!(
            out,
            "    v{i} [label=\"{}\"];",
            dot_escape(&v.value().to_string())
        )
        .unwrap();
    }
    if c.max_level >= 1 {
        for (e, row) in c.faces[0].iter().enumerate() {
            let label = dot_escape(&c.levels[1][e].value().to_string());
            writeln!(out, "    v{} -> v{} [label=\"{label}\"];", row[0], row[1]).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn complex_text(c: &TruncatedComplex) -> String {
    let mut out = String::new();
    for (i, l) in c.levels.iter().enumerate() {
        writeln!(out, "level {i}: {} simplices", l.len()).unwrap();
        for (x, s) in l.iter().enumerate() {
            let mut line = format!("  {x}: {}", s.value());
            if i > 0 {
                write!(line, "  faces {:?}", c.faces[i - 1][x]).unwrap();
            }
            writeln!(out, "{line}").unwrap();
        }
    }
    out
}

pub fn law_report_json(title: &str, r: &LawReport) -> Json {
    json!({
        "subject": title,
        "passed": r.passed(),
        "laws": r
            .verdicts
            .iter()
            .map(|v| json!({
                "law": v.law,
                "checked": v.checked,
                "passed": v.passed(),
                "counterexample": v.counterexample.as_ref().map(|c| json!({
                    "input": value_to_json(&c.input),
                    "detail": c.detail,
                })),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn law_report_text(title: &str, r: &LawReport) -> String {
    let mut out = format!("{title}\n");
    for v in &r.verdicts {
        let status = if v.passed() { "pass" } else { "FAIL" };
        writeln!(out, "  {:<24} {status}  ({} checked)", v.law, v.checked).unwrap();
        if let Some(c) = &v.counterexample {
            writeln!(out, "    counterexample: {}", c.input).unwrap();
            writeln!(out, "    {}", c.detail).unwrap();
        }
    }
    out
}

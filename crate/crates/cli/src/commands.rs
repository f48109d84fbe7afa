//! The subcommands, as pure functions from a job to an exit code and output.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use pevkit::bar::build_truncated_complex;
use pevkit::engine::{
    check_ars_properties, check_total_evaluation_law, decide, reduction_graph, validate_witness,
    Witness,
};
use pevkit::faults::{DoubledUnit, IdleElement, PairShortcut};
use pevkit::instances::point_dist;
use pevkit::instances::{
    ConvexAlgebra, DistributionMonad, ListMonad, MultisetMonad, TerminalMonad,
};
use pevkit::monad::{check_algebra_laws, check_monad_laws, sample_nested};
use pevkit::stochastics::{decide_pev, on_line, sosd_1d, wasserstein1_1d};
use pevkit::{Algebra, Error, Limits, Monad, Nested, Tag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::format::{
    algebra_to_json, envelope_tag, parse_algebra, parse_nested, value_to_json, AlgebraSpec,
};
use crate::render;

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The unit inserts two layers.
    Unit,
    /// The evaluation map takes a shortcut.
    Eval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check {
        p: String,
        q: String,
    },
    Validate {
        witness: String,
        source: Option<String>,
        target: Option<String>,
    },
    Graph {
        seed: String,
    },
    Bar {
        seed: String,
        level: usize,
    },
    Laws {
        samples: usize,
        seed: u64,
        fault: Option<Fault>,
    },
    Sosd {
        p: String,
        q: String,
    },
}

/// Everything one invocation needs. Inputs are file paths or inline JSON.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    pub instance: Option<Tag>,
    pub algebra: Option<String>,
    pub limits: Limits,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FillerNotFound(_) => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<crate::format::FormatError> for CliError {
    fn from(e: crate::format::FormatError) -> Self {
        CliError::input(e.0)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Inline JSON when the argument starts with `{`, `[` or `"`; otherwise a path.
pub fn load_json(arg: &str) -> Result<Json> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{arg}: {e}")))
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        let l = &self.limits;
        if l.fiber == 0 || l.nodes == 0 || l.fillers == 0 || l.lp_vars == 0 {
            return Err(CliError::input("limits must be positive"));
        }
        match &self.command {
            Command::Laws { samples: 0, .. } => Err(CliError::input("--samples must be positive")),
            Command::Bar { level, .. } if *level > 2 => Err(CliError::input(format!(
                "--level {level} is above the supported maximum 2"
            ))),
            Command::Check { .. } | Command::Sosd { .. } | Command::Validate { .. }
                if self.format == OutputFormat::Dot =>
            {
                Err(CliError::input(
                    "DOT output is only available for graph and bar",
                ))
            }
            Command::Laws { .. } if self.format == OutputFormat::Dot => Err(CliError::input(
                "DOT output is only available for graph and bar",
            )),
            _ => Ok(()),
        }
    }

    /// The instance from `--instance`, else from the first expression.
    fn resolve_tag(&self, first: Option<&Json>) -> Result<Option<Tag>> {
        let from_expr = first.map(envelope_tag).transpose()?;
        match (self.instance, from_expr) {
            (Some(a), Some(b)) if a != b => Err(CliError::input(format!(
                "--instance {a} does not match an expression of the {b} monad"
            ))),
            (Some(a), _) => Ok(Some(a)),
            (None, b) => Ok(b),
        }
    }

    fn algebra(&self, tag: Option<Tag>) -> Result<AlgebraSpec> {
        match (&self.algebra, tag) {
            (Some(a), t) => Ok(parse_algebra(&load_algebra_arg(a)?, t)?),
            (None, Some(t)) => Ok(AlgebraSpec::default_for(t)),
            (None, None) => Err(CliError::input("give --instance or --alg")),
        }
    }
}

/// Bare algebra names are accepted besides files and inline JSON.
fn load_algebra_arg(arg: &str) -> Result<Json> {
    match arg {
        "nat-add" | "terminal" | "barycenter" => Ok(json!(arg)),
        _ => load_json(arg),
    }
}

fn expression(j: &Json, tag: Tag) -> Result<Nested> {
    let t = envelope_tag(j)?;
    if t != tag {
        return Err(CliError::input(format!(
            "expected a {tag} expression, found a {t} one"
        )));
    }
    Ok(parse_nested(j, 1)?)
}

fn emit_json(j: &Json) -> String {
    let mut s = serde_json::to_string(j).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn run(job: &JobConfig) -> Result<Outcome> {
    job.validate()?;
    match &job.command {
        Command::Check { p, q } => check(job, p, q),
        Command::Validate {
            witness,
            source,
            target,
        } => validate(job, witness, source.as_deref(), target.as_deref()),
        Command::Graph { seed } => graph(job, seed),
        Command::Bar { seed, level } => bar(job, seed, *level),
        Command::Laws {
            samples,
            seed,
            fault,
        } => laws(job, *samples, *seed, *fault),
        Command::Sosd { p, q } => sosd(job, p, q),
    }
}

/// Re-checks a witness the engine produced: exact boundaries and the
/// total-evaluation law.
fn audit(alg: &dyn Algebra, w: &Witness, p: &Nested, q: &Nested) -> Result<()> {
    if !validate_witness(alg, w) || w.source != *p || w.target != *q {
        return Err(CliError::internal(format!(
            "engine returned {} which does not witness {} → {}",
            w.nesting, p, q
        )));
    }
    if !check_total_evaluation_law(alg, w)? {
        return Err(CliError::internal(format!(
            "witness {} relates expressions with different results",
            w.nesting
        )));
    }
    Ok(())
}

fn check(job: &JobConfig, p: &str, q: &str) -> Result<Outcome> {
    let (pj, qj) = (load_json(p)?, load_json(q)?);
    let tag = job
        .resolve_tag(Some(&pj))?
        .expect("an expression fixes the instance");
    let spec = job.algebra(Some(tag))?;
    let alg = spec.algebra();
    let (p, q) = (expression(&pj, tag)?, expression(&qj, tag)?);
    let found = decide(alg, &p, &q, &job.limits)?;
    if let Some(w) = &found {
        audit(alg, w, &p, &q)?;
    }
    let stdout = match job.format {
        OutputFormat::Json => {
            let mut out = json!({
                "relation": found.is_some(),
                "source": value_to_json(p.value()),
                "target": value_to_json(q.value()),
            });
            if let Some(w) = &found {
                out["witness"] = value_to_json(w.nesting.value());
            }
            emit_json(&out)
        }
        _ => match &found {
            Some(w) => format!("{} → {}\nwitness: {}\n", p, q, w.nesting),
            None => format!("no partial evaluation: {} ↛ {}\n", p, q),
        },
    };
    Ok(Outcome {
        code: if found.is_some() { EXIT_YES } else { EXIT_NO },
        stdout,
    })
}

fn validate(
    job: &JobConfig,
    w: &str,
    source: Option<&str>,
    target: Option<&str>,
) -> Result<Outcome> {
    let wj = load_json(w)?;
    let inner = wj.get("witness").unwrap_or(&wj);
    let tag = job
        .resolve_tag(Some(inner))?
        .expect("a nesting fixes the instance");
    let spec = job.algebra(Some(tag))?;
    let alg = spec.algebra();
    let nesting = parse_nested(&wj, 2)?;
    if let Some(a) = nesting
        .value()
        .atoms()
        .into_iter()
        .find(|a| !alg.contains(a))
    {
        return Err(CliError::input(format!(
            "atom {a} is not in the carrier of {}",
            alg.name()
        )));
    }
    let w = Witness::from_nesting(alg, nesting)?;
    if !check_total_evaluation_law(alg, &w)? {
        return Err(CliError::internal(format!(
            "{} relates expressions with different results",
            w.nesting
        )));
    }
    // expected boundaries: explicit flags win over those recorded in the file
    let expect = |flag: Option<&str>, key: &str| -> Result<Option<Nested>> {
        match (flag, wj.get("witness").and(wj.get(key))) {
            (Some(arg), _) => Ok(Some(expression(&load_json(arg)?, tag)?)),
            (None, Some(j)) => Ok(Some(expression(j, tag)?)),
            (None, None) => Ok(None),
        }
    };
    let (want_p, want_q) = (expect(source, "source")?, expect(target, "target")?);
    let mut mismatches = Vec::new();
    if let Some(p) = &want_p {
        if *p != w.source {
            mismatches.push(format!("source is {}, expected {}", w.source, p));
        }
    }
    if let Some(q) = &want_q {
        if *q != w.target {
            mismatches.push(format!("target is {}, expected {}", w.target, q));
        }
    }
    let ok = mismatches.is_empty();
    let stdout = match job.format {
        OutputFormat::Json => emit_json(&json!({
            "valid": ok,
            "witness": value_to_json(w.nesting.value()),
            "source": value_to_json(w.source.value()),
            "target": value_to_json(w.target.value()),
            "mismatches": mismatches,
        })),
        _ => {
            let mut s = format!("{} witnesses {} → {}\n", w.nesting, w.source, w.target);
            for m in &mismatches {
                s.push_str(&format!("mismatch: {m}\n"));
            }
            s
        }
    };
    Ok(Outcome {
        code: if ok { EXIT_YES } else { EXIT_NO },
        stdout,
    })
}

fn graph(job: &JobConfig, seed: &str) -> Result<Outcome> {
    let sj = load_json(seed)?;
    let tag = job
        .resolve_tag(Some(&sj))?
        .expect("an expression fixes the instance");
    let spec = job.algebra(Some(tag))?;
    let seed = expression(&sj, tag)?;
    let g = reduction_graph(spec.algebra(), &seed, &job.limits)?;
    let ars = check_ars_properties(&g);
    if !ars.all_hold() {
        return Err(CliError::internal(format!(
            "reduction graph violates its expected properties: {}",
            ars.violations.join("; ")
        )));
    }
    let stdout = match job.format {
        OutputFormat::Dot => render::graph_dot(&g),
        OutputFormat::Json => emit_json(&render::graph_json(&g, &ars)),
        OutputFormat::Text => render::graph_text(&g, &ars),
    };
    Ok(Outcome {
        code: EXIT_YES,
        stdout,
    })
}

fn bar(job: &JobConfig, seed: &str, level: usize) -> Result<Outcome> {
    let sj = load_json(seed)?;
    let tag = job
        .resolve_tag(Some(&sj))?
        .expect("an expression fixes the instance");
    let spec = job.algebra(Some(tag))?;
    let seed = expression(&sj, tag)?;
    let c = build_truncated_complex(spec.algebra(), &seed, level, &job.limits)?;
    if !c.verify(spec.algebra()) {
        return Err(CliError::internal(
            "complex incidences do not match recomputed faces",
        ));
    }
    let stdout = match job.format {
        OutputFormat::Dot => render::complex_dot(&c),
        OutputFormat::Json => emit_json(&render::complex_json(&c)),
        OutputFormat::Text => render::complex_text(&c),
    };
    Ok(Outcome {
        code: EXIT_YES,
        stdout,
    })
}

fn monad_of(spec: &AlgebraSpec) -> Arc<dyn Monad> {
    match spec {
        AlgebraSpec::Action(a) => Arc::new(a.action_monad().clone()),
        _ => match spec.tag() {
            Tag::Multiset => Arc::new(MultisetMonad),
            Tag::List => Arc::new(ListMonad),
            Tag::Distribution => Arc::new(DistributionMonad),
            _ => Arc::new(TerminalMonad),
        },
    }
}

fn faulty_algebra(spec: &AlgebraSpec) -> Result<Box<dyn Algebra>> {
    Ok(match spec {
        AlgebraSpec::NatAdd(a) => Box::new(PairShortcut::new(a.clone())),
        AlgebraSpec::Table(a) => Box::new(PairShortcut::new(a.clone())),
        AlgebraSpec::Convex(a) => Box::new(PairShortcut::new(a.clone())),
        AlgebraSpec::Action(a) => Box::new(IdleElement::new(a.clone())),
        AlgebraSpec::Terminal(_) => {
            return Err(CliError::input(
                "every evaluation on the one-point carrier is lawful; no fault to inject",
            ))
        }
    })
}

fn laws(job: &JobConfig, samples: usize, seed: u64, fault: Option<Fault>) -> Result<Outcome> {
    let tag = job.resolve_tag(None)?;
    let spec = job.algebra(tag)?;
    let alg = spec.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |depths: std::ops::RangeInclusive<usize>| -> Vec<Nested> {
        (0..samples)
            .map(|_| {
                let d = rng.gen_range(depths.clone());
                sample_nested(alg.monad(), alg.carrier(), d, &mut rng)
            })
            .collect()
    };
    let (monad_samples, algebra_samples) = (draw(1..=3), draw(1..=2));

    let base = monad_of(&spec);
    let monad: Arc<dyn Monad> = match fault {
        Some(Fault::Unit) if spec.tag() == Tag::Terminal => {
            return Err(CliError::input(
                "the terminal monad's unit cannot be doubled observably",
            ))
        }
        Some(Fault::Unit) => Arc::new(DoubledUnit::new(base)),
        _ => base,
    };
    let faulty;
    let algebra: &dyn Algebra = match fault {
        Some(Fault::Eval) => {
            faulty = faulty_algebra(&spec)?;
            faulty.as_ref()
        }
        _ => alg,
    };
    let monad_report = check_monad_laws(monad.as_ref(), &monad_samples)?;
    let algebra_report = check_algebra_laws(algebra, &algebra_samples)?;
    let passed = monad_report.passed() && algebra_report.passed();
    let (mt, at) = (
        format!("monad laws: {}", monad.name()),
        format!("algebra laws: {}", algebra.name()),
    );
    let stdout = match job.format {
        OutputFormat::Json => emit_json(&json!({
            "algebra": algebra_to_json(&spec),
            "samples": samples,
            "seed": seed,
            "passed": passed,
            "reports": [
                render::law_report_json(&mt, &monad_report),
                render::law_report_json(&at, &algebra_report),
            ],
        })),
        _ => format!(
            "{}{}{}\n",
            render::law_report_text(&mt, &monad_report),
            render::law_report_text(&at, &algebra_report),
            if passed {
                "all laws hold"
            } else {
                "some laws fail"
            }
        ),
    };
    Ok(Outcome {
        code: if passed { EXIT_YES } else { EXIT_NO },
        stdout,
    })
}

fn sosd(job: &JobConfig, p: &str, q: &str) -> Result<Outcome> {
    let (pj, qj) = (load_json(p)?, load_json(q)?);
    let (p, q) = (
        expression(&pj, Tag::Distribution)?,
        expression(&qj, Tag::Distribution)?,
    );
    let (pd, qd) = (point_dist(p.value())?, point_dist(q.value())?);
    let (pl, ql) = (on_line(&pd)?, on_line(&qd)?);
    let dominated = sosd_1d(&pl, &ql);
    let line = ConvexAlgebra::new(1);
    let witness = decide_pev(&pd, &qd, &line, &job.limits)?;
    if let Some(xi) = &witness {
        let w = Witness::from_nesting(
            &line,
            Nested::new(2, pevkit::instances::point_dist2_value(xi))?,
        )?;
        audit(&line, &w, &p, &q)?;
    }
    if dominated != witness.is_some() {
        return Err(CliError::internal(format!(
            "second-order dominance says {dominated} but the partial-evaluation LP says {}",
            witness.is_some()
        )));
    }
    let distance = wasserstein1_1d(&pl, &ql);
    let stdout = match job.format {
        OutputFormat::Json => emit_json(&json!({
            "sosd": dominated,
            "partial_evaluation": witness.is_some(),
            "wasserstein1": crate::format::rational_to_json(&distance),
        })),
        _ => format!(
            "second-order dominance: {dominated}\npartial evaluation: {}\nwasserstein-1 distance: {distance}\n",
            witness.is_some()
        ),
    };
    Ok(Outcome {
        code: if dominated { EXIT_YES } else { EXIT_NO },
        stdout,
    })
}

//! JSON envelopes for expressions, nestings and algebras.
//!
//! Rationals are always `[num, den]` pairs. Integer coordinates are accepted
//! on input as a shorthand for `[n, 1]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use pevkit::distribution::Distribution;
use pevkit::instances::{
    ActionAlgebra, ConvexAlgebra, FiniteMonoid, MonoidAlgebra, NatSum, TerminalAlgebra,
};
use pevkit::{Algebra, Atom, Multiset, Nested, Point, Tag, Value};
use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

type Result<T> = std::result::Result<T, FormatError>;

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError(msg.into()))
}

/// Names accepted by `--instance`.
pub fn parse_tag(s: &str) -> Result<Tag> {
    match s {
        "multiset" | "ms" => Ok(Tag::Multiset),
        "list" => Ok(Tag::List),
        "action" | "act" => Ok(Tag::Action),
        "dist" | "distribution" => Ok(Tag::Distribution),
        "terminal" | "unit" => Ok(Tag::Terminal),
        other => bad(format!("unknown instance {other:?}")),
    }
}

/// The instance an expression envelope belongs to.
pub fn envelope_tag(j: &Json) -> Result<Tag> {
    let Some(obj) = j.as_object() else {
        return bad(format!("expected an expression object, found {j}"));
    };
    if obj.len() != 1 {
        return bad("an expression object has exactly one key");
    }
    parse_tag(obj.keys().next().unwrap())
}

pub fn rational_to_json(r: &BigRational) -> Json {
    json!([int_to_json(r.numer()), int_to_json(r.denom())])
}

fn int_to_json(n: &BigInt) -> Json {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn json_to_int(j: &Json) -> Result<BigInt> {
    if let Some(i) = j.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(u) = j.as_u64() {
        return Ok(BigInt::from(u));
    }
    if let Some(s) = j.as_str() {
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(n);
        }
    }
    bad(format!("expected an integer, found {j}"))
}

pub fn json_to_rational(j: &Json) -> Result<BigRational> {
    if j.is_number() {
        return Ok(BigRational::from_integer(json_to_int(j)?));
    }
    match j.as_array().map(Vec::as_slice) {
        Some([n, d]) => {
            let (n, d) = (json_to_int(n)?, json_to_int(d)?);
            if d.is_zero() {
                return bad("zero denominator");
            }
            Ok(BigRational::new(n, d))
        }
        _ => bad(format!("expected a rational [num, den], found {j}")),
    }
}

fn point_to_json(p: &Point) -> Json {
    Json::Array(p.coords().iter().map(rational_to_json).collect())
}

fn json_to_point(j: &Json) -> Result<Point> {
    let Some(items) = j.as_array() else {
        return bad(format!("expected a point array, found {j}"));
    };
    Ok(Point(
        items.iter().map(json_to_rational).collect::<Result<_>>()?,
    ))
}

pub fn atom_to_json(a: &Atom) -> Json {
    match a {
        Atom::Int(n) => match n.to_i64() {
            Some(i) => json!(i),
            None => json!({ "int": n.to_string() }),
        },
        Atom::Sym(s) => json!(s),
        Atom::Point(p) => point_to_json(p),
    }
}

pub fn json_to_atom(j: &Json) -> Result<Atom> {
    match j {
        Json::Number(_) => Ok(Atom::Int(json_to_int(j)?)),
        Json::String(s) => Ok(Atom::Sym(s.clone())),
        Json::Array(_) => Ok(Atom::Point(json_to_point(j)?)),
        Json::Object(o) if o.len() == 1 && o.contains_key("int") => {
            Ok(Atom::Int(json_to_int(&o["int"])?))
        }
        _ => bad(format!("expected an atom, found {j}")),
    }
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Atom(a) => atom_to_json(a),
        Value::Bag(m) => json!({
            "ms": m.entries().iter().map(|(x, n)| json!([value_to_json(x), n])).collect::<Vec<_>>()
        }),
        Value::Seq(items) => json!({ "list": items.iter().map(value_to_json).collect::<Vec<_>>() }),
        Value::Act(g, x) => json!({ "act": { "g": atom_to_json(g), "x": value_to_json(x) } }),
        Value::Dist(d) => json!({
            "dist": d
                .support()
                .iter()
                .map(|(x, w)| json!([value_to_json(x), rational_to_json(w)]))
                .collect::<Vec<_>>()
        }),
        Value::Unit => json!({ "unit": null }),
    }
}

pub fn json_to_value(j: &Json) -> Result<Value> {
    let Some(obj) = j.as_object().filter(|o| !o.contains_key("int")) else {
        return json_to_atom(j).map(Value::Atom);
    };
    if obj.len() != 1 {
        return bad(format!(
            "an expression object has exactly one key, found {j}"
        ));
    }
    let (key, body) = obj.iter().next().unwrap();
    match key.as_str() {
        "ms" => {
            let Some(entries) = body.as_array() else {
                return bad("\"ms\" takes an array of [element, multiplicity] pairs");
            };
            let mut counts = Vec::new();
            for e in entries {
                match e.as_array().map(Vec::as_slice) {
                    Some([x, n]) => {
                        let Some(n) = n.as_u64().filter(|&n| n > 0) else {
                            return bad(format!(
                                "multiplicity must be a positive integer, found {n}"
                            ));
                        };
                        counts.push((json_to_value(x)?, n));
                    }
                    _ => return bad(format!("expected [element, multiplicity], found {e}")),
                }
            }
            Ok(Value::Bag(Multiset::from_counts(counts)))
        }
        "list" => {
            let Some(items) = body.as_array() else {
                return bad("\"list\" takes an array");
            };
            Ok(Value::Seq(
                items.iter().map(json_to_value).collect::<Result<_>>()?,
            ))
        }
        "act" => {
            let (Some(g), Some(x)) = (body.get("g"), body.get("x")) else {
                return bad("\"act\" takes an object with keys \"g\" and \"x\"");
            };
            Ok(Value::act(json_to_atom(g)?, json_to_value(x)?))
        }
        "dist" => {
            let Some(entries) = body.as_array() else {
                return bad("\"dist\" takes an array of [point, [num, den]] pairs");
            };
            let mut weights = Vec::new();
            for e in entries {
                match e.as_array().map(Vec::as_slice) {
                    Some([x, w]) => {
                        let w = json_to_rational(w)?;
                        if w <= BigRational::zero() {
                            return bad(format!("weights must be positive, found {w}"));
                        }
                        weights.push((json_to_value(x)?, w));
                    }
                    _ => return bad(format!("expected [point, weight], found {e}")),
                }
            }
            let total: BigRational = weights.iter().map(|(_, w)| w.clone()).sum();
            if total != BigRational::one() {
                return bad(format!("weights sum to {total}, not 1"));
            }
            Distribution::from_weights(weights)
                .map(Value::Dist)
                .map_err(|e| FormatError(e.to_string()))
        }
        "unit" => Ok(Value::Unit),
        other => bad(format!("unknown expression key {other:?}")),
    }
}

/// Parses a nesting of the given depth. A top-level object with a
/// `"witness"` key (as printed by `check --format json`) is unwrapped.
pub fn parse_nested(j: &Json, depth: usize) -> Result<Nested> {
    let j = match j.get("witness") {
        Some(w) if depth == 2 => w,
        _ => j,
    };
    let v = json_to_value(j)?;
    Nested::new(depth, v).map_err(|e| FormatError(e.to_string()))
}

pub fn parse_monoid(j: &Json) -> Result<FiniteMonoid> {
    if let Some(n) = j.get("cyclic") {
        return match n.as_u64() {
            Some(n) if n >= 1 => Ok(FiniteMonoid::cyclic(n as usize)),
            _ => bad(format!("\"cyclic\" takes a positive integer, found {n}")),
        };
    }
    let (Some(elements), Some(op)) = (
        j.get("elements").and_then(Json::as_array),
        j.get("op").and_then(Json::as_array),
    ) else {
        return bad("a monoid is {\"cyclic\": n} or {\"elements\": [...], \"op\": [[...]]}");
    };
    let elements: Vec<Atom> = elements.iter().map(json_to_atom).collect::<Result<_>>()?;
    let table = op
        .iter()
        .map(|row| match row.as_array() {
            Some(r) => r.iter().map(json_to_atom).collect::<Result<Vec<_>>>(),
            None => bad("Cayley table rows must be arrays"),
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteMonoid::new(elements, table).map_err(|e| FormatError(e.to_string()))
}

/// A parsed algebra description, kept alongside the built algebra so the
/// fault wrappers can reach the concrete type.
pub enum AlgebraSpec {
    NatAdd(NatSum),
    Table(MonoidAlgebra),
    Convex(ConvexAlgebra),
    Action(ActionAlgebra),
    Terminal(TerminalAlgebra),
}

impl AlgebraSpec {
    pub fn algebra(&self) -> &dyn Algebra {
        match self {
            AlgebraSpec::NatAdd(a) => a,
            AlgebraSpec::Table(a) => a,
            AlgebraSpec::Convex(a) => a,
            AlgebraSpec::Action(a) => a,
            AlgebraSpec::Terminal(a) => a,
        }
    }

    pub fn tag(&self) -> Tag {
        self.algebra().monad().tag()
    }

    /// The algebra used when none is given.
    pub fn default_for(tag: Tag) -> Self {
        match tag {
            Tag::Multiset => AlgebraSpec::NatAdd(NatSum::multiset()),
            Tag::List => AlgebraSpec::NatAdd(NatSum::list()),
            Tag::Action => {
                AlgebraSpec::Action(ActionAlgebra::regular(Arc::new(FiniteMonoid::cyclic(4))))
            }
            Tag::Distribution => AlgebraSpec::Convex(ConvexAlgebra::new(1)),
            Tag::Terminal => AlgebraSpec::Terminal(TerminalAlgebra::default()),
        }
    }
}

/// Builds an algebra from `{"alg": ...}` (or the bare inner value) for the
/// given instance. Without an instance, one is chosen from the algebra kind.
pub fn parse_algebra(j: &Json, tag: Option<Tag>) -> Result<AlgebraSpec> {
    let body = j.get("alg").unwrap_or(j);
    let spec = match body {
        Json::String(s) if s == "nat-add" => match tag.unwrap_or(Tag::Multiset) {
            Tag::Multiset => AlgebraSpec::NatAdd(NatSum::multiset()),
            Tag::List => AlgebraSpec::NatAdd(NatSum::list()),
            t => return bad(format!("nat-add is not an algebra of the {t} monad")),
        },
        Json::String(s) if s == "terminal" => AlgebraSpec::Terminal(TerminalAlgebra::default()),
        Json::String(s) if s == "barycenter" => AlgebraSpec::Convex(ConvexAlgebra::new(1)),
        Json::Object(o) if o.contains_key("table") => {
            let monoid = Arc::new(parse_monoid(&o["table"])?);
            match tag.unwrap_or(Tag::List) {
                Tag::List => AlgebraSpec::Table(MonoidAlgebra::list(monoid)),
                Tag::Multiset => AlgebraSpec::Table(
                    MonoidAlgebra::multiset(monoid).map_err(|e| FormatError(e.to_string()))?,
                ),
                t => return bad(format!("a monoid table is not an algebra of the {t} monad")),
            }
        }
        Json::Object(o) if o.contains_key("convex") => {
            let Some(dim) = o["convex"]
                .get("dim")
                .and_then(Json::as_u64)
                .filter(|&d| d >= 1)
            else {
                return bad("\"convex\" takes {\"dim\": d} with d ≥ 1");
            };
            AlgebraSpec::Convex(ConvexAlgebra::new(dim as usize))
        }
        Json::Object(o) if o.contains_key("cayley") => {
            let monoid = Arc::new(parse_monoid(&o["cayley"])?);
            match (o.get("carrier"), o.get("action")) {
                (None, None) => AlgebraSpec::Action(ActionAlgebra::regular(monoid)),
                (Some(c), Some(a)) => {
                    let carrier = c
                        .as_array()
                        .ok_or_else(|| FormatError("\"carrier\" must be an array".into()))?
                        .iter()
                        .map(json_to_atom)
                        .collect::<Result<Vec<_>>>()?;
                    let act = a
                        .as_array()
                        .ok_or_else(|| FormatError("\"action\" must be an array of rows".into()))?
                        .iter()
                        .map(|row| match row.as_array() {
                            Some(r) => r.iter().map(json_to_atom).collect::<Result<Vec<_>>>(),
                            None => bad("action rows must be arrays"),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    AlgebraSpec::Action(
                        ActionAlgebra::new(monoid, carrier, act)
                            .map_err(|e| FormatError(e.to_string()))?,
                    )
                }
                _ => return bad("\"carrier\" and \"action\" come together"),
            }
        }
        other => return bad(format!("unknown algebra {other}")),
    };
    if let Some(t) = tag {
        if spec.tag() != t {
            return bad(format!(
                "algebra {} does not belong to the {t} monad",
                spec.algebra().name()
            ));
        }
    }
    Ok(spec)
}

/// Serializes an algebra description back to its envelope.
pub fn algebra_to_json(spec: &AlgebraSpec) -> Json {
    let inner = match spec {
        AlgebraSpec::NatAdd(_) => json!("nat-add"),
        AlgebraSpec::Terminal(_) => json!("terminal"),
        AlgebraSpec::Convex(a) => json!({ "convex": { "dim": a.dim() } }),
        AlgebraSpec::Table(a) => json!({ "table": monoid_to_json(a.monoid()) }),
        AlgebraSpec::Action(a) => json!({ "cayley": monoid_to_json(a.monoid()) }),
    };
    json!({ "alg": inner })
}

fn monoid_to_json(m: &FiniteMonoid) -> Json {
    let elements: Vec<Json> = m.elements().iter().map(atom_to_json).collect();
    let op: Vec<Json> = m
        .elements()
        .iter()
        .map(|a| {
            Json::Array(
                m.elements()
                    .iter()
                    .map(|b| atom_to_json(&m.op(a, b).expect("elements of the monoid")))
                    .collect(),
            )
        })
        .collect();
    let mut o = Map::new();
    o.insert("elements".into(), Json::Array(elements));
    o.insert("op".into(), Json::Array(op));
    Json::Object(o)
}

//! The JSON input document.
//!
//! ```json
//! {"coxeter_matrix": [[1, 3], [3, 1]]}
//! {"cartan_matrix": [[2, "-2"], ["-2", 2]], "mode": "exact"}
//! {"generators": [{"alpha": [1, 0], "v": [2, "1/2"]}], "labels": ["a"]}
//! ```
//!
//! Integers and `"p/q"` strings are exact; anything else numeric is a float.

use serde_json::{Map, Value};
use vinberg_core::scalar::{format_rational, parse_rational};
use vinberg_core::{Mode, Order, Rational, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Shape { path: String, msg: String },
}

fn shape(path: impl Into<String>, msg: impl Into<String>) -> InputError {
    InputError::Shape { path: path.into(), msg: msg.into() }
}

/// A matrix or vector entry as written.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64(),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    fn parse(v: &Value, path: &str) -> Result<Self, InputError> {
        match v {
            Value::Number(n) if n.is_i64() || n.is_u64() => {
                let r = parse_rational(&n.to_string()).ok_or_else(|| shape(path, "integer out of range"))?;
                Ok(Number::Exact(r))
            }
            Value::Number(n) => Ok(Number::Float(n.as_f64().ok_or_else(|| shape(path, "not a finite number"))?)),
            Value::String(s) => {
                let t = s.trim();
                let integral = t.strip_prefix('-').unwrap_or(t).chars().all(|c| c.is_ascii_digit()) && !t.is_empty();
                if t.contains('/') || integral {
                    return parse_rational(t).map(Number::Exact).ok_or_else(|| shape(path, format!("bad rational {s:?}")));
                }
                match t.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Number::Float(x)),
                    _ => Err(shape(path, format!("bad number {s:?}"))),
                }
            }
            _ => Err(shape(path, "expected a number or a string \"p/q\"")),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Number::Exact(r) => match format_rational(r).parse::<i64>() {
                Ok(i) => Value::from(i),
                Err(_) => Value::String(format_rational(r)),
            },
            Number::Float(x) => Value::from(*x),
        }
    }
}

/// One facet: covector `alpha` and reflection vector `v`, with `alpha(v) = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub alpha: Vec<Number>,
    pub v: Vec<Number>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    CoxeterMatrix(Vec<Vec<Order>>),
    CartanMatrix(Vec<Vec<Number>>),
    Generators(Vec<Generator>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub source: Source,
    pub mode: Option<Mode>,
    pub labels: Option<Vec<String>>,
}

const VARIANTS: [&str; 3] = ["coxeter_matrix", "cartan_matrix", "generators"];

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn square_rows<'a>(v: &'a Value, path: &str) -> Result<Vec<&'a Vec<Value>>, InputError> {
    let rows = array(v, path)?;
    if rows.is_empty() {
        return Err(shape(path, "matrix is empty"));
    }
    let rows: Vec<&Vec<Value>> = rows.iter().enumerate().map(|(i, r)| array(r, &format!("{path}[{i}]"))).collect::<Result<_, _>>()?;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != rows.len() {
            return Err(shape(format!("{path}[{i}]"), format!("row has {} entries, expected {}", r.len(), rows.len())));
        }
    }
    Ok(rows)
}

fn parse_order(v: &Value, path: &str) -> Result<Order, InputError> {
    match v {
        Value::String(s) if s.trim() == "inf" => Ok(Order::Infinite),
        Value::Number(n) => match n.as_u64() {
            Some(m) if (1..=u32::MAX as u64).contains(&m) => Ok(Order::Finite(m as u32)),
            _ => Err(shape(path, "expected a positive integer or \"inf\"")),
        },
        _ => Err(shape(path, "expected a positive integer or \"inf\"")),
    }
}

fn parse_vector(v: &Value, path: &str) -> Result<Vec<Number>, InputError> {
    array(v, path)?.iter().enumerate().map(|(i, x)| Number::parse(x, &format!("{path}[{i}]"))).collect()
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, InputError> {
        let obj = value.as_object().ok_or_else(|| shape("$", "expected a JSON object"))?;
        for key in obj.keys() {
            if !VARIANTS.contains(&key.as_str()) && key != "mode" && key != "labels" {
                return Err(shape(format!("$.{key}"), "unknown field"));
            }
        }
        let present: Vec<&str> = VARIANTS.iter().copied().filter(|k| obj.contains_key(*k)).collect();
        if present.len() != 1 {
            return Err(shape("$", format!("expected exactly one of {}, found {}", VARIANTS.join(", "), present.len())));
        }
        let key = present[0];
        let path = format!("$.{key}");
        let body = &obj[key];
        let source = match key {
            "coxeter_matrix" => {
                let rows = square_rows(body, &path)?;
                let m = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.iter().enumerate().map(|(j, x)| parse_order(x, &format!("{path}[{i}][{j}]"))).collect())
                    .collect::<Result<_, _>>()?;
                Source::CoxeterMatrix(m)
            }
            "cartan_matrix" => {
                let rows = square_rows(body, &path)?;
                let m = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.iter().enumerate().map(|(j, x)| Number::parse(x, &format!("{path}[{i}][{j}]"))).collect())
                    .collect::<Result<_, _>>()?;
                Source::CartanMatrix(m)
            }
            _ => {
                let gens = array(body, &path)?;
                if gens.is_empty() {
                    return Err(shape(&path, "no generators"));
                }
                let mut out = Vec::with_capacity(gens.len());
                for (i, g) in gens.iter().enumerate() {
                    let gp = format!("{path}[{i}]");
                    let o = g.as_object().ok_or_else(|| shape(&gp, "expected an object with alpha and v"))?;
                    if let Some(k) = o.keys().find(|k| *k != "alpha" && *k != "v") {
                        return Err(shape(format!("{gp}.{k}"), "unknown field"));
                    }
                    let field = |k: &str| o.get(k).ok_or_else(|| shape(format!("{gp}.{k}"), "missing"));
                    let alpha = parse_vector(field("alpha")?, &format!("{gp}.alpha"))?;
                    let v = parse_vector(field("v")?, &format!("{gp}.v"))?;
                    out.push(Generator { alpha, v });
                }
                Source::Generators(out)
            }
        };
        let mode = match obj.get("mode") {
            None => None,
            Some(Value::String(s)) => Some(s.parse::<Mode>().map_err(|_| shape("$.mode", "expected \"exact\" or \"approx\""))?),
            Some(_) => return Err(shape("$.mode", "expected \"exact\" or \"approx\"")),
        };
        let labels = match obj.get("labels") {
            None => None,
            Some(v) => Some(
                array(v, "$.labels")?
                    .iter()
                    .enumerate()
                    .map(|(i, l)| l.as_str().map(String::from).ok_or_else(|| shape(format!("$.labels[{i}]"), "expected a string")))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let doc = InputDocument { source, mode, labels };
        if let Some(l) = &doc.labels {
            if l.len() != doc.size() {
                return Err(shape("$.labels", format!("{} labels for {} facets", l.len(), doc.size())));
            }
        }
        Ok(doc)
    }

    /// Number of facets described.
    pub fn size(&self) -> usize {
        match &self.source {
            Source::CoxeterMatrix(m) => m.len(),
            Source::CartanMatrix(m) => m.len(),
            Source::Generators(g) => g.len(),
        }
    }

    /// Every number is exact (Coxeter matrices count as exact input).
    pub fn is_exact(&self) -> bool {
        match &self.source {
            Source::CoxeterMatrix(_) => true,
            Source::CartanMatrix(m) => m.iter().flatten().all(|x| x.as_exact().is_some()),
            Source::Generators(g) => g.iter().all(|g| g.alpha.iter().chain(&g.v).all(|x| x.as_exact().is_some())),
        }
    }

    /// Facet labels, defaulting to `1..=n`.
    pub fn facet_labels(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| (1..=self.size()).map(|i| i.to_string()).collect())
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        let matrix = |rows: Vec<Vec<Value>>| Value::Array(rows.into_iter().map(Value::Array).collect());
        match &self.source {
            Source::CoxeterMatrix(m) => {
                let rows = m
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|o| match o {
                                Order::Finite(k) => Value::from(*k),
                                Order::Infinite => Value::from("inf"),
                            })
                            .collect()
                    })
                    .collect();
                obj.insert("coxeter_matrix".into(), matrix(rows));
            }
            Source::CartanMatrix(m) => {
                obj.insert("cartan_matrix".into(), matrix(m.iter().map(|r| r.iter().map(Number::to_json).collect()).collect()));
            }
            Source::Generators(g) => {
                let gens = g
                    .iter()
                    .map(|g| {
                        let mut o = Map::new();
                        o.insert("alpha".into(), Value::Array(g.alpha.iter().map(Number::to_json).collect()));
                        o.insert("v".into(), Value::Array(g.v.iter().map(Number::to_json).collect()));
                        Value::Object(o)
                    })
                    .collect();
                obj.insert("generators".into(), Value::Array(gens));
            }
        }
        if let Some(m) = self.mode {
            obj.insert("mode".into(), Value::from(m.as_str()));
        }
        if let Some(l) = &self.labels {
            obj.insert("labels".into(), Value::from(l.clone()));
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("documents serialize");
        s.push('\n');
        s
    }
}

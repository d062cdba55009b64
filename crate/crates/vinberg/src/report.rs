//! Canonical JSON reports.
//!
//! Keys are sorted (serde_json's default map is ordered) and floats are
//! rounded to 12 significant digits, so identical runs give identical bytes.

use serde_json::{Map, Value};
use vinberg_core::cartan::{ComponentType, TypeTag};
use vinberg_core::coxeter::GroupClass;
use vinberg_core::decision::{Certificate, FactorVerdict, Verdict};
use vinberg_core::hilbert::VolumeEstimate;
use vinberg_core::polytope::FaceDescriptor;
use vinberg_core::scalar::format_rational;
use vinberg_core::vinberg::RepresentationReport;
use vinberg_core::{Matrix, Rational, Scalar};

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_nan() {
        return Value::from("nan");
    }
    if x.is_infinite() {
        return Value::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // Normalize -0 so that it prints like 0.
    Value::from(if rounded == 0.0 { 0.0 } else { rounded })
}

/// Scalars in reports: exact values as `"p/q"` strings, floats rounded.
pub trait ReportScalar {
    fn report(&self) -> Value;
}

impl ReportScalar for f64 {
    fn report(&self) -> Value {
        num(*self)
    }
}

impl ReportScalar for Rational {
    fn report(&self) -> Value {
        Value::from(format_rational(self))
    }
}

pub fn vector<F: ReportScalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(ReportScalar::report).collect())
}

pub fn matrix<F: Scalar + ReportScalar>(m: &Matrix<F>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector(r)).collect())
}

/// Small builder for ordered objects.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn set(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn opt(self, key: &str, v: Option<Value>) -> Self {
        match v {
            Some(v) => self.set(key, v),
            None => self.set(key, Value::Null),
        }
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Value {
        Value::Object(o.0)
    }
}

pub fn labels(labels: &[String], facets: &[usize]) -> Value {
    Value::from(facets.iter().map(|&s| labels[s].clone()).collect::<Vec<_>>())
}

pub fn component(labels_: &[String], c: &ComponentType) -> Value {
    Obj::new()
        .set("facets", labels(labels_, &c.indices))
        .set("type", c.kind.as_str())
        .set("lambda", num(c.lambda))
        .set("margin", num(c.margin))
        .set("warning", c.warning)
        .into()
}

pub fn type_tag(labels_: &[String], t: &TypeTag) -> Value {
    Obj::new()
        .set("overall", t.overall.as_str())
        .set("components", t.components.iter().map(|c| component(labels_, c)).collect::<Vec<_>>())
        .set("min_margin", num(t.min_margin()))
        .set("warning", t.warning())
        .into()
}

pub fn group_class(labels_: &[String], g: &GroupClass) -> Value {
    Obj::new()
        .opt("overall", g.overall.map(|k| Value::from(k.as_str())))
        .set(
            "components",
            g.components
                .iter()
                .map(|(ix, k)| Value::from(Obj::new().set("facets", labels(labels_, ix)).set("class", k.as_str())))
                .collect::<Vec<_>>(),
        )
        .set("warning", g.warning)
        .into()
}

pub fn representation(r: &RepresentationReport) -> Value {
    Obj::new()
        .set("v_alpha_dim", r.v_alpha_dim)
        .set("v_v_dim", r.v_v_dim)
        .set("cartan_rank", r.cartan_rank)
        .set("ambient_dim", r.ambient_dim)
        .set("reduced", r.reduced)
        .set("dual_reduced", r.dual_reduced)
        .set("irreducible", r.irreducible)
        .set("full_rank", r.full_rank)
        .into()
}

pub fn face<F: Scalar + ReportScalar>(labels_: &[String], f: &FaceDescriptor<F>) -> Value {
    Obj::new()
        .set("facets", labels(labels_, &f.facets))
        .set("dim", f.dim)
        .set("type", f.type_tag.overall.as_str())
        .set("kind", f.kind.label())
        .set("parabolic", f.kind.is_parabolic())
        .set("loxodromic", f.kind == vinberg_core::FaceKind::NegativeType { loxodromic: true })
        .set("margin", num(f.margin))
        .set("witness", vector(&f.witness))
        .into()
}

fn factor<F: Scalar + ReportScalar>(labels_: &[String], f: &FactorVerdict<F>) -> Value {
    // Factor vertices are numbered within the factor; map them back.
    let vertex = f.vertex.as_ref().map(|v| {
        let global: Vec<usize> = v.facets.iter().map(|&s| f.facets[s]).collect();
        Value::from(Obj::new().set("facets", labels(labels_, &global)).set("kind", v.kind.label()))
    });
    Obj::new()
        .set("facets", labels(labels_, &f.facets))
        .set("negative_type", f.negative_type)
        .set("quasiperfect", f.quasiperfect)
        .opt("vertex", vertex)
        .into()
}

fn certificate<F: Scalar + ReportScalar>(labels_: &[String], c: &Certificate<F>) -> Value {
    let mut o = Obj::new()
        .opt("vertex", c.vertex.as_ref().map(|v| face(labels_, v)))
        .opt("negative_face", c.negative_face.as_ref().map(|v| face(labels_, v)))
        .set("num_facets", c.num_facets);
    if let Some(r) = &c.rank {
        o = o.set(
            "rank",
            Obj::new().set("irreducible", r.irreducible).set("cartan_rank", r.cartan_rank).set("ambient_dim", r.ambient_dim),
        );
    }
    if !c.factors.is_empty() {
        o = o.set("factors", c.factors.iter().map(|f| factor(labels_, f)).collect::<Vec<_>>());
    }
    if let Some(g) = &c.group {
        o = o.set("group", group_class(labels_, g));
    }
    o.into()
}

pub fn verdict<F: Scalar + ReportScalar>(labels_: &[String], v: &Verdict<F>) -> Value {
    Obj::new()
        .set("question", v.question.as_str())
        .set("answer", if v.answer { "yes" } else { "no" })
        .set(
            "routes",
            v.routes
                .iter()
                .map(|r| Value::from(Obj::new().set("name", r.name).set("answer", if r.answer { "yes" } else { "no" })))
                .collect::<Vec<_>>(),
        )
        .set("routes_agree", v.routes_agree())
        .set("certificate", certificate(labels_, &v.certificate))
        .into()
}

pub fn estimate(e: &VolumeEstimate) -> Value {
    Obj::new()
        .set("depth", e.depth)
        .set("value", num(e.value))
        .set("stderr", num(e.stderr))
        .opt("paired_stderr", e.paired_stderr.map(num))
        .set("samples", e.samples)
        .set("seed", e.seed)
        .set("resampled", e.resampled)
        .into()
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(num(-1.0 / 3.0).to_string(), "-0.333333333333");
        assert_eq!(num(1e-20 * 1.23456789012345).to_string(), "1.23456789012e-20");
        assert_eq!(num(-0.0).to_string(), "0.0");
        assert_eq!(num(f64::INFINITY), Value::from("inf"));
    }

    #[test]
    fn keys_are_sorted() {
        let v: Value = Obj::new().set("b", 1).set("a", 2).into();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":2,"b":1}"#);
    }
}

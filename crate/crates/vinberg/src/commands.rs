//! The subcommands, as functions from a loaded document to a report.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use vinberg_core::cartan::CartanError;
use vinberg_core::coxeter::{classify_cartan_group, AnyCartan};
use vinberg_core::decision::{
    decide_finite_volume, decide_limit_set_fills_boundary_necessary, decide_min_domain_equals_vinberg, decide_unique_domain, Question,
    Verdict,
};
use vinberg_core::geometry::Chart;
use vinberg_core::limit_set::sample_limit_set;
use vinberg_core::vinberg::{domain_approx, expand_orbit, perron_covector, quadric_domain, representation_report, vertex_rays};
use vinberg_core::volume::{estimate_volumes, volume_problem};
use vinberg_core::{AnyPolytope, CartanMatrix, CoxeterMatrix, CoxeterPolytope, Scalar};

use crate::input::InputDocument;
use crate::load::{cartan_of, load, LoadError, Loaded, Options};
use crate::report::{self, num, Obj, ReportScalar};
use crate::svg::{render_points, render_tiling, Conic, TilingFigure};

/// How a successful command ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Exit code 0.
    Done,
    /// A decision answered No: exit code 3.
    No,
    /// The input failed validation; the report says why. Exit code 2.
    Invalid,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Done => 0,
            Outcome::No => 3,
            Outcome::Invalid => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub report: Value,
    pub outcome: Outcome,
}

impl Output {
    fn done(report: impl Into<Value>) -> Self {
        Output { report: report.into(), outcome: Outcome::Done }
    }
}

macro_rules! dispatch {
    ($any:expr, $p:ident => $body:expr) => {
        match $any {
            AnyPolytope::Exact($p) => $body,
            AnyPolytope::Approx($p) => $body,
        }
    };
}

fn base(command: &str, loaded: &Loaded) -> Obj {
    Obj::new()
        .set("command", command)
        .set("mode", loaded.mode().as_str())
        .set("num_facets", loaded.polytope.num_facets())
        .set("dim", loaded.polytope.dim())
        .set("labels", loaded.labels.clone())
}

fn cartan_summary<F: Scalar + ReportScalar>(a: &CartanMatrix<F>) -> Obj {
    let orders = CoxeterMatrix::from_cartan(a).rows();
    Obj::new()
        .set("cartan_matrix", report::matrix(a.matrix()))
        .set("orders", orders.iter().map(|r| r.iter().map(|o| o.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
        .set("symmetric", a.is_symmetric())
        .set("label_residual", num(a.label_residual()))
}

/// `validate`: the Cartan axioms, then the polytope itself.
pub fn validate(doc: &InputDocument, opts: &Options) -> Result<Output> {
    let labels = doc.facet_labels();
    let mode = crate::load::resolve_mode(doc, opts);
    let head = Obj::new().set("command", "validate").set("mode", mode.as_str()).set("num_facets", doc.size()).set("labels", labels);
    let invalid = |head: Obj, violations: Vec<String>| Output {
        report: head.set("valid", false).set("violations", violations).into(),
        outcome: Outcome::Invalid,
    };
    let cartan = match cartan_of(doc, opts) {
        Ok((a, _)) => a,
        Err(LoadError::Cartan(CartanError::Invalid(v))) => return Ok(invalid(head, v.iter().map(|x| x.to_string()).collect())),
        Err(e @ (LoadError::Cartan(_) | LoadError::Coxeter(_) | LoadError::Polytope(_))) => return Ok(invalid(head, vec![e.to_string()])),
        Err(e) => return Err(e.into()),
    };
    if let Err(e) = load(doc, opts) {
        return Ok(invalid(head, vec![e.to_string()]));
    }
    let summary = match &cartan {
        AnyCartan::Exact(a) => cartan_summary(a),
        AnyCartan::Approx(a) => cartan_summary(a),
    };
    Ok(Output::done(head.set("valid", true).set("violations", Vec::<String>::new()).set("cartan", summary)))
}

fn classify_typed<F: Scalar + ReportScalar>(loaded: &Loaded, p: &CoxeterPolytope<F>) -> Obj {
    let a = p.cartan();
    let components: Vec<Value> = a.irreducible_components().iter().map(|c| report::labels(&loaded.labels, c)).collect();
    base("classify", loaded)
        .set("type", report::type_tag(&loaded.labels, &a.classify_type()))
        .set("group", report::group_class(&loaded.labels, &classify_cartan_group(a)))
        .set("irreducible_components", components)
        .set("representation", report::representation(&representation_report(p)))
        .set("cartan", cartan_summary(a))
}

/// `classify`: types, group class, components, representation.
pub fn classify(loaded: &Loaded) -> Result<Output> {
    Ok(Output::done(dispatch!(&loaded.polytope, p => classify_typed(loaded, p))))
}

fn faces_typed<F: Scalar + ReportScalar>(loaded: &Loaded, p: &CoxeterPolytope<F>, max_facets: usize) -> Result<Obj> {
    let faces = p.enumerate_faces(max_facets)?;
    let table: Vec<Value> = faces.iter().map(|f| report::face(&loaded.labels, f)).collect();
    Ok(base("faces", loaded)
        .set("faces", table)
        .set("num_faces", faces.len())
        .set("perfect", p.is_perfect(max_facets)?.holds)
        .set("quasiperfect", p.is_quasiperfect(max_facets)?.holds)
        .set("two_perfect", p.is_2perfect(max_facets)?.holds))
}

/// `faces`: the face table.
pub fn faces(loaded: &Loaded, opts: &Options) -> Result<Output> {
    Ok(Output::done(dispatch!(&loaded.polytope, p => faces_typed(loaded, p, opts.max_facets)?)))
}

fn decide_typed<F: Scalar + ReportScalar>(loaded: &Loaded, p: &CoxeterPolytope<F>, q: Question, max_facets: usize) -> Result<Output> {
    let v: Verdict<F> = match q {
        Question::FiniteVolume => decide_finite_volume(p, max_facets)?,
        Question::UniqueDomain => decide_unique_domain(p, max_facets)?,
        Question::MinDomainEqualsVinberg => decide_min_domain_equals_vinberg(p, max_facets)?,
        Question::LimitSetFillsBoundaryNecessary => decide_limit_set_fills_boundary_necessary(p, max_facets)?,
    };
    let outcome = if v.answer { Outcome::Done } else { Outcome::No };
    Ok(Output { report: base("decide", loaded).set("verdict", report::verdict(&loaded.labels, &v)).into(), outcome })
}

/// `decide <question>`: exit 0 on Yes, 3 on No.
pub fn decide(loaded: &Loaded, q: Question, opts: &Options) -> Result<Output> {
    dispatch!(&loaded.polytope, p => decide_typed(loaded, p, q, opts.max_facets))
}

fn require_plane(loaded: &Loaded) -> Result<()> {
    if loaded.polytope.dim() != 2 {
        bail!("this command supports dimension 2 only, the polytope has dimension {}", loaded.polytope.dim());
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// `volume`: paired estimates over depths `1..=depth`.
pub fn volume(loaded: &Loaded, depth: usize, samples: usize, seed: u64, out: Option<&Path>) -> Result<Output> {
    require_plane(loaded)?;
    let depths: Vec<usize> = (1..=depth.max(1)).collect();
    let prob = dispatch!(&loaded.polytope, p => volume_problem(p, &depths)?);
    let est = estimate_volumes(&prob, samples, seed)?;
    let polygon: Vec<Value> = prob.polygon.iter().map(|v| report::vector(v)).collect();
    let report: Value = base("volume", loaded)
        .set("exact_domain", prob.exact_domain)
        .set("polygon", polygon)
        .set("ideal_vertices", prob.ideal.clone())
        .set("samples", samples)
        .set("seed", seed)
        .set("estimates", est.iter().map(report::estimate).collect::<Vec<_>>())
        .into();
    if let Some(path) = out {
        write_file(path, &report::render(&report))?;
    }
    Ok(Output { report, outcome: Outcome::Done })
}

fn chart_conic(chart: &Chart, form: Option<vinberg_core::Matrix<f64>>) -> Option<Conic> {
    form.map(|b| {
        let (a, b, c) = chart.quadric(&b);
        Conic { a, b, c }
    })
}

/// `tile`: SVG of the tiles up to `depth`.
pub fn tile(loaded: &Loaded, depth: usize, out: &Path) -> Result<Output> {
    require_plane(loaded)?;
    let (approx, levels) = dispatch!(&loaded.polytope, p => {
        let t = expand_orbit(p, depth)?;
        let levels: Vec<usize> = (0..t.len()).map(|i| t.level(i)).collect();
        (domain_approx(&t)?, (levels, t.level_sizes().to_vec()))
    });
    let (levels, level_sizes) = levels;
    let tiles: Vec<(usize, Vec<[f64; 2]>)> = approx
        .tile_vertices
        .iter()
        .zip(&levels)
        .filter_map(|(vs, &l)| {
            let pts: Option<Vec<[f64; 2]>> = vs.iter().map(|v| approx.chart.to_chart(v).map(|y| [y[0], y[1]])).collect();
            pts.map(|p| (l, p))
        })
        .collect();
    let sizes: Vec<usize> = level_sizes.iter().take(depth + 1).copied().collect();
    let cumulative: Vec<usize> = sizes.iter().scan(0, |acc, &s| {
        *acc += s;
        Some(*acc)
    }).collect();
    let conic = chart_conic(&approx.chart, approx.quadric.clone());
    let meta: Value = Obj::new()
        .set("depth", depth)
        .set("level_sizes", sizes.clone())
        .set("tile_counts", cumulative.clone())
        .set("conic", conic.is_some())
        .into();
    let svg = render_tiling(&TilingFigure { tiles: &tiles, depth, conic: conic.as_ref(), metadata: &serde_json::to_string(&meta)? })?;
    write_file(out, &svg)?;
    Ok(Output::done(
        base("tile", loaded)
            .set("depth", depth)
            .set("level_sizes", sizes)
            .set("tile_counts", cumulative)
            .set("tiles_drawn", tiles.len())
            .set("conic", conic.is_some())
            .set("out", out.display().to_string()),
    ))
}

/// CSV of chart points with 12 significant digits.
pub fn points_csv(points: &[Vec<f64>], dim: usize) -> String {
    let header = ["x", "y", "z"][..dim.min(3)].join(",");
    let mut s = header;
    s.push('\n');
    for p in points {
        let row: Vec<String> = p.iter().map(|&x| num(x).to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// `limit-set`: attracting fixed points as CSV, optionally drawn.
pub fn limit_set(loaded: &Loaded, words: usize, count: usize, seed: u64, out: &Path, svg: Option<&Path>) -> Result<Output> {
    if loaded.polytope.dim() > 3 {
        bail!("limit-set export supports dimension at most 3");
    }
    let (sample, conic, outline) = dispatch!(&loaded.polytope, p => {
        let s = sample_limit_set(p, words, count, seed)?;
        let chart = Chart::new(&perron_covector(p));
        let conic = if p.dim() == 2 { chart_conic(&chart, quadric_domain(p)) } else { None };
        let outline: Vec<[f64; 2]> = if p.dim() == 2 {
            vertex_rays(p)?.iter().filter_map(|v| chart.to_chart(v)).map(|y| [y[0], y[1]]).collect()
        } else {
            Vec::new()
        };
        (s, conic, outline)
    });
    let pts = sample.chart_points();
    let dim = sample.chart.dim();
    write_file(out, &points_csv(&pts, dim))?;
    let meta: Value = Obj::new()
        .set("word_length", words)
        .set("count", count)
        .set("seed", seed)
        .set("points", pts.len())
        .into();
    if let Some(path) = svg {
        if dim != 2 {
            bail!("SVG output needs dimension 2");
        }
        let flat: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        let s = render_points(&flat, Some(&outline), conic.as_ref(), &serde_json::to_string(&meta)?)?;
        write_file(path, &s)?;
    }
    let max_residual = sample.points.iter().fold(0.0f64, |m, q| m.max(q.residual));
    Ok(Output::done(
        base("limit-set", loaded)
            .set("word_length", words)
            .set("count", count)
            .set("seed", seed)
            .set("points", pts.len())
            .set("rejected", sample.rejected)
            .set("indeterminate", sample.indeterminate)
            .set("max_residual", num(max_residual))
            .set("out", out.display().to_string())
            .opt("svg", svg.map(|p| Value::from(p.display().to_string()))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loaded(text: &str) -> Loaded {
        load(&InputDocument::parse(text).unwrap(), &Options::default()).unwrap()
    }

    #[test]
    fn product_six_certificate_names_the_vertex() {
        let l = loaded(r#"{"cartan_matrix": [[2, -1, 0], [-1, 2, -3], [0, -2, 2]]}"#);
        let out = decide(&l, Question::FiniteVolume, &Options::default()).unwrap();
        assert_eq!(out.outcome, Outcome::No);
        let v = &out.report["verdict"];
        assert_eq!(v["certificate"]["vertex"]["facets"], serde_json::json!(["2", "3"]));
        assert_eq!(v["routes_agree"], Value::from(true));
    }

    #[test]
    fn invalid_cartan_is_reported() {
        let doc = InputDocument::parse(r#"{"cartan_matrix": [[2, -1], [0, 2]]}"#).unwrap();
        let out = validate(&doc, &Options::default()).unwrap();
        assert_eq!(out.outcome, Outcome::Invalid);
        assert!(out.report["violations"][0].as_str().unwrap().contains("(1,2)"));
    }

    #[test]
    fn csv_header_follows_dimension() {
        assert_eq!(points_csv(&[vec![0.5, -0.25]], 2), "x,y\n0.5,-0.25\n");
        assert!(points_csv(&[], 3).starts_with("x,y,z\n"));
    }
}

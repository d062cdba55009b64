//! From an [`InputDocument`] to a validated polytope.

use vinberg_core::cartan::CartanError;
use vinberg_core::coxeter::{AnyCartan, CoxeterError};
use vinberg_core::polytope::{PolytopeError, DEFAULT_MAX_FACETS};
use vinberg_core::scalar::DEFAULT_EPS;
use vinberg_core::{AnyPolytope, CartanMatrix, CoxeterMatrix, CoxeterPolytope, Mode, Rational};

use crate::input::{InputDocument, Number, Source};

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    /// Overrides the document's mode.
    pub mode: Option<Mode>,
    pub eps: f64,
    pub max_facets: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: None, eps: DEFAULT_EPS, max_facets: DEFAULT_MAX_FACETS }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("{0}")]
    Polytope(String),
    #[error("exact mode needs integer or \"p/q\" entries; {0} is a float")]
    FloatInExactMode(String),
    #[error("the Gram matrix of this Coxeter matrix is irrational; use --mode approx")]
    IrrationalGram,
    #[error("{n} facets exceed --max-facets {cap}")]
    TooManyFacets { n: usize, cap: usize },
}

/// A polytope with the facet labels of its document.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub polytope: AnyPolytope,
    pub labels: Vec<String>,
    /// Present for Coxeter-matrix input.
    pub coxeter: Option<CoxeterMatrix>,
}

impl Loaded {
    pub fn mode(&self) -> Mode {
        self.polytope.mode()
    }

    pub fn label_set(&self, facets: &[usize]) -> Vec<String> {
        facets.iter().map(|&s| self.labels[s].clone()).collect()
    }
}

/// Mode requested by the options, then the document, then inferred.
pub fn resolve_mode(doc: &InputDocument, opts: &Options) -> Mode {
    if let Some(m) = opts.mode.or(doc.mode) {
        return m;
    }
    let exact = match &doc.source {
        Source::CoxeterMatrix(rows) => CoxeterMatrix::new(rows).map(|m| m.gram_is_rational()).unwrap_or(true),
        _ => doc.is_exact(),
    };
    if exact {
        Mode::Exact
    } else {
        Mode::Approx
    }
}

fn exact_rows(rows: &[Vec<Number>], path: impl Fn(usize, usize) -> String) -> Result<Vec<Vec<Rational>>, LoadError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| x.as_exact().cloned().ok_or_else(|| LoadError::FloatInExactMode(path(i, j))))
                .collect()
        })
        .collect()
}

fn float_rows(rows: &[Vec<Number>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(Number::to_f64).collect()).collect()
}

fn polytope_error(e: PolytopeError, labels: &[String]) -> LoadError {
    match e {
        PolytopeError::Normalization { s, value } => {
            LoadError::Polytope(format!("facet {}: alpha({0}) applied to v({0}) is {value}, expected 2", labels[s]))
        }
        PolytopeError::RedundantFacet(s) => LoadError::Polytope(format!("facet {} is redundant", labels[s])),
        PolytopeError::InvalidCartan(c) => LoadError::Cartan(c),
        e => LoadError::Polytope(e.to_string()),
    }
}

/// Cartan matrix named by the document, without building the polytope.
pub fn cartan_of(doc: &InputDocument, opts: &Options) -> Result<(AnyCartan, Option<CoxeterMatrix>), LoadError> {
    let mode = resolve_mode(doc, opts);
    match &doc.source {
        Source::CoxeterMatrix(rows) => {
            let m = CoxeterMatrix::new(rows)?;
            let a = AnyCartan::gram(&m, mode == Mode::Approx, opts.eps);
            if mode == Mode::Exact && matches!(a, AnyCartan::Approx(_)) {
                return Err(LoadError::IrrationalGram);
            }
            Ok((a, Some(m)))
        }
        Source::CartanMatrix(rows) => {
            let a = match mode {
                Mode::Exact => {
                    AnyCartan::Exact(CartanMatrix::from_rows(&exact_rows(rows, |i, j| format!("$.cartan_matrix[{i}][{j}]"))?, 0.0)?)
                }
                Mode::Approx => AnyCartan::Approx(CartanMatrix::from_rows(&float_rows(rows), opts.eps)?),
            };
            Ok((a, None))
        }
        Source::Generators(_) => {
            let p = load(doc, opts)?;
            let a = match p.polytope {
                AnyPolytope::Exact(p) => AnyCartan::Exact(p.cartan().clone()),
                AnyPolytope::Approx(p) => AnyCartan::Approx(p.cartan().clone()),
            };
            Ok((a, None))
        }
    }
}

/// Builds the polytope: Tits construction for matrices, facet pairs otherwise.
pub fn load(doc: &InputDocument, opts: &Options) -> Result<Loaded, LoadError> {
    let labels = doc.facet_labels();
    if doc.size() > opts.max_facets {
        return Err(LoadError::TooManyFacets { n: doc.size(), cap: opts.max_facets });
    }
    let (polytope, coxeter) = match &doc.source {
        Source::CoxeterMatrix(_) | Source::CartanMatrix(_) => {
            let (a, m) = cartan_of(doc, opts)?;
            let p = match a {
                AnyCartan::Exact(a) => AnyPolytope::Exact(CoxeterPolytope::tits(&a)),
                AnyCartan::Approx(a) => AnyPolytope::Approx(CoxeterPolytope::tits(&a)),
            };
            (p, m)
        }
        Source::Generators(gens) => {
            let alphas: Vec<Vec<Number>> = gens.iter().map(|g| g.alpha.clone()).collect();
            let polars: Vec<Vec<Number>> = gens.iter().map(|g| g.v.clone()).collect();
            let p = match resolve_mode(doc, opts) {
                Mode::Exact => {
                    let a = exact_rows(&alphas, |i, j| format!("$.generators[{i}].alpha[{j}]"))?;
                    let v = exact_rows(&polars, |i, j| format!("$.generators[{i}].v[{j}]"))?;
                    AnyPolytope::Exact(CoxeterPolytope::new(a, v, 0.0).map_err(|e| polytope_error(e, &labels))?)
                }
                Mode::Approx => AnyPolytope::Approx(
                    CoxeterPolytope::new(float_rows(&alphas), float_rows(&polars), opts.eps).map_err(|e| polytope_error(e, &labels))?,
                ),
            };
            (p, None)
        }
    };
    Ok(Loaded { polytope, labels, coxeter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> InputDocument {
        InputDocument::parse(s).unwrap()
    }

    #[test]
    fn modes_are_inferred() {
        let o = Options::default();
        assert_eq!(resolve_mode(&parse(r#"{"coxeter_matrix": [[1, 3], [3, 1]]}"#), &o), Mode::Exact);
        assert_eq!(resolve_mode(&parse(r#"{"coxeter_matrix": [[1, 5], [5, 1]]}"#), &o), Mode::Approx);
        assert_eq!(resolve_mode(&parse(r#"{"cartan_matrix": [[2, -0.5], [-2, 2]]}"#), &o), Mode::Approx);
        let forced = Options { mode: Some(Mode::Approx), ..o.clone() };
        assert_eq!(resolve_mode(&parse(r#"{"cartan_matrix": [[2, -1], [-1, 2]], "mode": "exact"}"#), &forced), Mode::Approx);
    }

    #[test]
    fn exact_mode_rejects_floats_and_irrational_grams() {
        let o = Options { mode: Some(Mode::Exact), ..Options::default() };
        let e = load(&parse(r#"{"cartan_matrix": [[2, -0.5], [-2, 2]]}"#), &o).unwrap_err();
        assert!(e.to_string().contains("$.cartan_matrix[0][1]"), "{e}");
        assert!(matches!(load(&parse(r#"{"coxeter_matrix": [[1, 5], [5, 1]]}"#), &o), Err(LoadError::IrrationalGram)));
    }

    #[test]
    fn ideal_triangle_from_cartan_strings() {
        let d = parse(r#"{"cartan_matrix": [[2, "-2", "-2"], ["-2", 2, "-2"], ["-2", "-2", 2]]}"#);
        let l = load(&d, &Options::default()).unwrap();
        assert_eq!(l.polytope, AnyPolytope::Exact(vinberg_core::corpus::ideal_triangle()));
    }

    #[test]
    fn normalization_error_names_the_facet() {
        let d = parse(
            r#"{"generators": [{"alpha": [1, 0, 0], "v": [3, 0, 0]}, {"alpha": [0, 1, 0], "v": [0, 2, 0]}, {"alpha": [0, 0, 1], "v": [0, 0, 2]}],
                "labels": ["a", "b", "c"]}"#,
        );
        let e = load(&d, &Options::default()).unwrap_err().to_string();
        assert!(e.contains("facet a") && e.contains("expected 2"), "{e}");
    }
}

//! Decision procedures with certificates.
//!
//! Where two independent criteria are known to be equivalent, both are
//! computed and a disagreement is reported as an error.

use alloc::vec::Vec;

use crate::cartan::MatrixType;
use crate::coxeter::{classify_cartan_group, CoxeterMatrix, GroupClass, GroupKind};
use crate::polytope::{CoxeterPolytope, Decomposition, FaceDescriptor, PolytopeError};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Question {
    FiniteVolume,
    UniqueDomain,
    MinDomainEqualsVinberg,
    LimitSetFillsBoundaryNecessary,
}

impl Question {
    pub fn as_str(self) -> &'static str {
        match self {
            Question::FiniteVolume => "finite-volume",
            Question::UniqueDomain => "unique-domain",
            Question::MinDomainEqualsVinberg => "min-equals-vinberg",
            Question::LimitSetFillsBoundaryNecessary => "limit-set-fills-boundary-necessary",
        }
    }
}

/// One criterion that was evaluated, with its answer.
#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    pub name: &'static str,
    pub answer: bool,
}

/// Irreducibility and rank of `A_P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub irreducible: bool,
    pub cartan_rank: usize,
    pub ambient_dim: usize,
}

/// Per-factor verdict of a join decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorVerdict<F> {
    /// Facets of `P` belonging to the factor.
    pub facets: Vec<usize>,
    pub negative_type: bool,
    pub quasiperfect: bool,
    /// Offending vertex of the factor, in its own facet numbering.
    pub vertex: Option<FaceDescriptor<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<F> {
    /// Offending vertex found by the vertex scan.
    pub vertex: Option<FaceDescriptor<F>>,
    /// Proper face with a negative-type link.
    pub negative_face: Option<FaceDescriptor<F>>,
    pub rank: Option<RankReport>,
    pub factors: Vec<FactorVerdict<F>>,
    pub group: Option<GroupClass>,
    pub num_facets: usize,
}

impl<F> Certificate<F> {
    fn new(num_facets: usize) -> Self {
        Certificate { vertex: None, negative_face: None, rank: None, factors: Vec::new(), group: None, num_facets }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<F> {
    pub question: Question,
    pub answer: bool,
    pub routes: Vec<Route>,
    pub certificate: Certificate<F>,
}

impl<F> Verdict<F> {
    /// All recorded routes gave the same answer.
    pub fn routes_agree(&self) -> bool {
        self.routes.iter().all(|r| r.answer == self.answer)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DecisionError {
    #[error("the Cartan matrix is not of negative type")]
    NotNegativeType,
    #[error("vertex scan says {vertex_scan}, face scan says {face_scan}")]
    RouteDisagreement { vertex_scan: bool, face_scan: bool },
    #[error("consistency failure: irreducible = {irreducible}, rank A = {cartan_rank}, expected {ambient_dim}")]
    Consistency { irreducible: bool, cartan_rank: usize, ambient_dim: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn require_negative<F: Scalar>(p: &CoxeterPolytope<F>) -> Result<(), DecisionError> {
    if p.cartan().classify_type().is(MatrixType::Negative) {
        Ok(())
    } else {
        Err(DecisionError::NotNegativeType)
    }
}

/// First proper face whose link has a component of negative type.
pub fn negative_type_face<F: Scalar>(p: &CoxeterPolytope<F>, max_facets: usize) -> Result<Option<FaceDescriptor<F>>, PolytopeError> {
    Ok(p.enumerate_faces(max_facets)?.into_iter().find(|f| {
        !f.facets.is_empty() && f.type_tag.components.iter().any(|c| c.kind == MatrixType::Negative)
    }))
}

/// Finite volume in the Vinberg domain: quasiperfect, and independently, no
/// proper face of negative type.
pub fn decide_finite_volume<F: Scalar>(p: &CoxeterPolytope<F>, max_facets: usize) -> Result<Verdict<F>, DecisionError> {
    require_negative(p)?;
    let scan = p.is_quasiperfect(max_facets)?;
    let face = negative_type_face(p, max_facets)?;
    let (a, b) = (scan.holds, face.is_none());
    if a != b {
        return Err(DecisionError::RouteDisagreement { vertex_scan: a, face_scan: b });
    }
    let mut cert = Certificate::new(p.num_facets());
    cert.vertex = scan.certificate;
    cert.negative_face = face;
    Ok(Verdict {
        question: Question::FiniteVolume,
        answer: a,
        routes: alloc::vec![Route { name: "quasiperfect", answer: a }, Route { name: "no-negative-face", answer: b }],
        certificate: cert,
    })
}

pub fn rank_report<F: Scalar>(p: &CoxeterPolytope<F>) -> RankReport {
    RankReport {
        irreducible: p.cartan().is_irreducible(),
        cartan_rank: p.cartan().rank(),
        ambient_dim: p.ambient_dim(),
    }
}

/// Unique invariant properly convex domain: quasiperfect with at least three
/// facets. A Yes also asserts that `A_P` is irreducible of full rank.
pub fn decide_unique_domain<F: Scalar>(p: &CoxeterPolytope<F>, max_facets: usize) -> Result<Verdict<F>, DecisionError> {
    require_negative(p)?;
    let scan = p.is_quasiperfect(max_facets)?;
    let enough = p.num_facets() >= 3;
    let answer = scan.holds && enough;
    let mut cert = Certificate::new(p.num_facets());
    cert.vertex = scan.certificate;
    if answer {
        let r = rank_report(p);
        if !r.irreducible || r.cartan_rank != r.ambient_dim {
            return Err(DecisionError::Consistency {
                irreducible: r.irreducible,
                cartan_rank: r.cartan_rank,
                ambient_dim: r.ambient_dim,
            });
        }
        cert.rank = Some(r);
    }
    Ok(Verdict {
        question: Question::UniqueDomain,
        answer,
        routes: alloc::vec![Route { name: "quasiperfect-and-three-facets", answer }],
        certificate: cert,
    })
}

/// `Omega_P = Int Conv(Lambda_P)`: every join factor is quasiperfect of
/// negative type.
pub fn decide_min_domain_equals_vinberg<F: Scalar>(p: &CoxeterPolytope<F>, max_facets: usize) -> Result<Verdict<F>, DecisionError> {
    require_negative(p)?;
    let parts: Vec<(Vec<usize>, CoxeterPolytope<F>)> = match p.decompose() {
        Decomposition::Indecomposable => alloc::vec![((0..p.num_facets()).collect(), p.clone())],
        Decomposition::Join(j) => j.blocks.into_iter().zip(j.factors).collect(),
    };
    let mut factors = Vec::with_capacity(parts.len());
    for (facets, f) in parts {
        let scan = f.is_quasiperfect(max_facets)?;
        factors.push(FactorVerdict {
            facets,
            negative_type: f.cartan().classify_type().is(MatrixType::Negative),
            quasiperfect: scan.holds,
            vertex: scan.certificate,
        });
    }
    let answer = factors.iter().all(|f| f.negative_type && f.quasiperfect);
    let mut cert = Certificate::new(p.num_facets());
    cert.factors = factors;
    Ok(Verdict {
        question: Question::MinDomainEqualsVinberg,
        answer,
        routes: alloc::vec![Route { name: "factors-quasiperfect", answer }],
        certificate: cert,
    })
}

/// Necessary condition for `Lambda_P = boundary of Omega_P`: the group is
/// large and `P` is quasiperfect. The hypothesis itself is not checked.
pub fn decide_limit_set_fills_boundary_necessary<F: Scalar>(
    p: &CoxeterPolytope<F>,
    max_facets: usize,
) -> Result<Verdict<F>, DecisionError> {
    require_negative(p)?;
    let group = classify_cartan_group(p.cartan());
    let large = group.is(GroupKind::Large);
    let scan = p.is_quasiperfect(max_facets)?;
    let answer = large && scan.holds;
    let mut cert = Certificate::new(p.num_facets());
    cert.vertex = scan.certificate;
    cert.group = Some(group);
    Ok(Verdict {
        question: Question::LimitSetFillsBoundaryNecessary,
        answer,
        routes: alloc::vec![Route { name: "large", answer: large }, Route { name: "quasiperfect", answer: scan.holds }],
        certificate: cert,
    })
}

/// Negative-type polytopes have large groups or affine groups of type `A~`.
pub fn group_class_consistent<F: Scalar>(p: &CoxeterPolytope<F>) -> bool {
    let g = classify_cartan_group(p.cartan());
    if g.is(GroupKind::Large) {
        return true;
    }
    g.is(GroupKind::Affine) && CoxeterMatrix::from_cartan(p.cartan()).is_affine_a_tilde()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::polytope::DEFAULT_MAX_FACETS as M;

    #[test]
    fn finite_volume_examples() {
        assert!(decide_finite_volume(&corpus::triangle_237(), M).unwrap().answer);
        let v = decide_finite_volume(&corpus::ideal_triangle(), M).unwrap();
        assert!(v.answer && v.routes_agree());
        assert!(!corpus::ideal_triangle().is_perfect(M).unwrap().holds);
        let v = decide_finite_volume(&corpus::triangle_product_6(), M).unwrap();
        assert!(!v.answer);
        assert_eq!(v.certificate.vertex.unwrap().facets, alloc::vec![1, 2]);
        assert_eq!(v.certificate.negative_face.unwrap().facets, alloc::vec![1, 2]);
    }

    #[test]
    fn non_negative_is_an_error() {
        assert_eq!(decide_finite_volume(&corpus::a2(), M).unwrap_err(), DecisionError::NotNegativeType);
        assert_eq!(decide_unique_domain(&corpus::affine_a1(), M).unwrap_err(), DecisionError::NotNegativeType);
    }

    #[test]
    fn unique_domain_examples() {
        let v = decide_unique_domain(&corpus::triangle_237(), M).unwrap();
        assert!(v.answer);
        assert_eq!(v.certificate.rank.unwrap().cartan_rank, 3);
        assert!(!decide_unique_domain(&corpus::segment(), M).unwrap().answer);
        assert!(!decide_unique_domain(&corpus::triangle_product_6(), M).unwrap().answer);
    }

    #[test]
    fn min_domain_examples() {
        let ii = corpus::ideal_triangle().join(&corpus::ideal_triangle());
        let v = decide_min_domain_equals_vinberg(&ii, M).unwrap();
        assert!(v.answer);
        assert_eq!(v.certificate.factors.len(), 2);
        let i6 = corpus::ideal_triangle().join(&corpus::triangle_product_6());
        let v = decide_min_domain_equals_vinberg(&i6, M).unwrap();
        assert!(!v.answer);
        let bad: Vec<_> = v.certificate.factors.iter().filter(|f| !f.quasiperfect).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].facets, alloc::vec![3, 4, 5]);
        assert!(decide_min_domain_equals_vinberg(&corpus::ideal_triangle(), M).unwrap().answer);
    }

    #[test]
    fn boundary_necessary_examples() {
        assert!(decide_limit_set_fills_boundary_necessary(&corpus::triangle_237(), M).unwrap().answer);
        let v = decide_limit_set_fills_boundary_necessary(&corpus::affine_a2_simplex(), M).unwrap();
        assert!(!v.answer);
        assert!(v.certificate.group.unwrap().is(GroupKind::Affine));
        assert!(!decide_limit_set_fills_boundary_necessary(&corpus::triangle_product_6(), M).unwrap().answer);
    }

    #[test]
    fn corpus_group_classes() {
        for e in corpus::negative_corpus() {
            let ok = match &e.polytope {
                crate::AnyPolytope::Exact(p) => group_class_consistent(p),
                crate::AnyPolytope::Approx(p) => group_class_consistent(p),
            };
            assert!(ok, "{}", e.name);
        }
    }
}

//! Facet census of local MAC polytopes.

use super::{
    canonicalize_facets, positivity_facets, sparse_form, to_points, v_to_h, Facet, PolytopeError, RationalPoint,
    RationalPolytope, SymmetryGroup,
};
use crate::mac::{enumerate_vertices, Alphabets};
use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct CensusClass {
    pub representative: Facet,
    /// Minimal 1-norm form of the representative.
    pub display: Facet,
    pub size: usize,
    pub positivity: bool,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub alphabets: Alphabets,
    pub locality: usize,
    pub vertices: Vec<RationalPoint>,
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub positivity_count: usize,
    pub classes: Vec<CensusClass>,
}

impl Census {
    pub fn nontrivial_classes(&self) -> impl Iterator<Item = &CensusClass> {
        self.classes.iter().filter(|c| !c.positivity)
    }

    pub fn summary(&self) -> CensusSummary {
        CensusSummary {
            parties: self.alphabets.parties(),
            locality: self.locality,
            vertices: self.vertices.len(),
            dim: self.dim,
            facets: self.facets.len(),
            positivity: self.positivity_count,
            nontrivial_classes: self.nontrivial_classes().count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub parties: usize,
    pub locality: usize,
    pub vertices: usize,
    pub dim: usize,
    pub facets: usize,
    pub positivity: usize,
    pub nontrivial_classes: usize,
}

/// Vertices, facets and facet classes of the `k`-local polytope.
pub fn census(k: usize, alphabets: &Alphabets) -> Result<Census, PolytopeError> {
    let macs = enumerate_vertices::<BigRational>(k, alphabets)?;
    let polytope = v_to_h(&RationalPolytope::from_vertices(to_points(&macs)))?;
    let hull = polytope.hull()?;
    let facets = polytope.facets.clone().unwrap_or_default();
    let positivity = positivity_facets(&hull);
    let group = SymmetryGroup::for_alphabets(alphabets);
    let classes = canonicalize_facets(&facets, &group)
        .into_iter()
        .map(|c| CensusClass {
            display: sparse_form(&c.representative, &hull),
            positivity: positivity.contains(&c.representative),
            size: c.size,
            representative: c.representative,
        })
        .collect();
    Ok(Census {
        alphabets: alphabets.clone(),
        locality: k,
        dim: hull.dim(),
        positivity_count: facets.iter().filter(|f| positivity.contains(f)).count(),
        facets,
        vertices: polytope.vertices,
        classes,
    })
}

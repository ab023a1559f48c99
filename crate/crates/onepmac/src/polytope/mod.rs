//! Exact-rational polyhedral computations.
//!
//! Facets are stored in a canonical form that does not depend on how the
//! affine hull was parametrized: the normal is projected orthogonally onto
//! the hull's direction space, the offset is adjusted to match, and the
//! pair is scaled to coprime integers by a positive factor.

mod affine;
mod census;
mod dd;
mod lp;
mod symmetry;

pub use affine::{affine_dimension, affine_dimension_stream, affine_dimension_tol, AffineHull, AffineRank};
pub use census::{census, Census, CensusClass, CensusSummary};
pub use lp::{solve as solve_lp, LpOutcome};
pub use symmetry::{canonicalize_facets, FacetClass, SymmetryGroup};

use crate::mac::{deterministic_tables, Alphabets, LinearInequality, MacError};
use affine::dot;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashSet;
use thiserror::Error;

pub type RationalPoint = Vec<BigRational>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("empty point set")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("all points coincide")]
    DegenerateInput,
    #[error(transparent)]
    Mac(#[from] MacError),
}

/// `normal·x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Facet {
    pub fn value(&self, x: &[BigRational]) -> BigRational {
        dot(&self.normal, x)
    }

    pub fn holds(&self, x: &[BigRational]) -> bool {
        self.value(x) <= self.offset
    }

    pub fn is_tight(&self, x: &[BigRational]) -> bool {
        self.value(x) == self.offset
    }

    pub fn to_inequality(&self, alphabets: &Alphabets) -> Result<LinearInequality<BigRational>, MacError> {
        LinearInequality::new(alphabets.clone(), self.normal.clone(), self.offset.clone())
    }
}

/// Positive rescaling to coprime integers.
pub fn scale_to_coprime(normal: Vec<BigRational>, offset: BigRational) -> Facet {
    let lcm = normal.iter().chain([&offset]).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = normal.iter().chain([&offset]).map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let mut it = ints.into_iter().map(|x| BigRational::from_integer(x / &g));
    let normal: Vec<BigRational> = it.by_ref().take(normal.len()).collect();
    let offset = it.next().expect("offset");
    Facet { normal, offset }
}

/// Canonical representative of `normal·x ≤ offset` restricted to the hull.
pub fn canonical_facet(hull: &AffineHull, normal: &[BigRational], offset: &BigRational) -> Facet {
    let projected = hull.project(normal);
    let residual: Vec<BigRational> = normal.iter().zip(&projected).map(|(a, b)| a - b).collect();
    let offset = offset - dot(&residual, hull.origin());
    scale_to_coprime(projected, offset)
}

/// Vertex list with an optional facet list.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolytope {
    pub vertices: Vec<RationalPoint>,
    pub facets: Option<Vec<Facet>>,
}

impl RationalPolytope {
    pub fn from_vertices(vertices: Vec<RationalPoint>) -> Self {
        Self { vertices, facets: None }
    }

    pub fn dim(&self) -> Result<usize, PolytopeError> {
        affine_dimension(&self.vertices)
    }

    pub fn hull(&self) -> Result<AffineHull, PolytopeError> {
        AffineHull::new(&self.vertices)
    }

    /// Number of affinely independent vertices on the facet.
    pub fn support_rank(&self, facet: &Facet) -> usize {
        let tight: Vec<RationalPoint> = self.vertices.iter().filter(|v| facet.is_tight(v)).cloned().collect();
        if tight.is_empty() {
            0
        } else {
            affine_dimension(&tight).expect("nonempty") + 1
        }
    }
}

/// Complete irredundant facet list of `conv(vertices)` inside its affine
/// hull, canonical and sorted.
pub fn v_to_h(polytope: &RationalPolytope) -> Result<RationalPolytope, PolytopeError> {
    let hull = polytope.hull()?;
    let d = hull.dim();
    if d == 0 {
        return Err(PolytopeError::DegenerateInput);
    }
    let rows: Vec<Vec<BigInt>> = polytope
        .vertices
        .iter()
        .map(|v| {
            let mut row = hull.reduce(v);
            row.push(-BigRational::one());
            let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let pivots = hull.pivots();
    let mut facets: Vec<Facet> = dd::extreme_rays(&rows)
        .into_iter()
        .map(|ray| {
            let mut normal = vec![BigRational::zero(); hull.ambient()];
            for (k, &p) in pivots.iter().enumerate() {
                normal[p] = BigRational::from_integer(ray[k].clone());
            }
            canonical_facet(&hull, &normal, &BigRational::from_integer(ray[d].clone()))
        })
        .filter(|f| f.normal.iter().any(|x| !x.is_zero()))
        .collect();
    facets.sort();
    facets.dedup();
    Ok(RationalPolytope { vertices: polytope.vertices.clone(), facets: Some(facets) })
}

/// Canonical forms of `p_k ≥ 0` and `p_k ≤ 1` for every coordinate that
/// is not constant on the hull.
pub fn positivity_facets(hull: &AffineHull) -> HashSet<Facet> {
    let n = hull.ambient();
    let mut out = HashSet::new();
    for k in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[k] = BigRational::one();
        let upper = canonical_facet(hull, &e, &BigRational::one());
        if upper.normal.iter().all(Zero::is_zero) {
            continue;
        }
        e[k] = -BigRational::one();
        out.insert(canonical_facet(hull, &e, &BigRational::zero()));
        out.insert(upper);
    }
    out
}

/// Outcome of a convex-hull membership query.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Convex weights, one per vertex.
    Weights(Vec<BigRational>),
    /// Every vertex satisfies the inequality and the point violates it.
    Separator(Facet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub certificate: Certificate,
}

/// Decides `point ∈ conv(vertices)` exactly.
///
/// Points off the affine hull are separated by the component of
/// `point − v_0` normal to the hull, which is constant on all vertices.
pub fn lp_membership(point: &[BigRational], vertices: &[RationalPoint]) -> Result<Membership, PolytopeError> {
    let first = vertices.first().ok_or(PolytopeError::EmptyInput)?;
    let n = first.len();
    if point.len() != n {
        return Err(PolytopeError::DimensionMismatch { expected: n, found: point.len() });
    }
    if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
        return Err(PolytopeError::DimensionMismatch { expected: n, found: bad.len() });
    }
    let hull = AffineHull::new(vertices)?;
    if !hull.contains(point)? {
        let diff: Vec<BigRational> = point.iter().zip(hull.origin()).map(|(a, b)| a - b).collect();
        let along = hull.project(&diff);
        let normal: Vec<BigRational> = diff.iter().zip(&along).map(|(a, b)| a - b).collect();
        let offset = dot(&normal, hull.origin());
        return Ok(Membership { member: false, certificate: Certificate::Separator(scale_to_coprime(normal, offset)) });
    }
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|k| vertices.iter().map(|v| v[k].clone()).collect()).collect();
    a.push(vec![BigRational::one(); vertices.len()]);
    let mut b = point.to_vec();
    b.push(BigRational::one());
    let zero = vec![BigRational::zero(); vertices.len()];
    match lp::solve(a, b, &zero) {
        LpOutcome::Optimal { x, .. } => Ok(Membership { member: true, certificate: Certificate::Weights(x) }),
        LpOutcome::Infeasible { farkas } => {
            let (w, t) = farkas.split_at(n);
            let facet = scale_to_coprime(w.to_vec(), -t[0].clone());
            Ok(Membership { member: false, certificate: Certificate::Separator(facet) })
        }
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    }
}

/// An equivalent form of a facet with minimal coefficient 1-norm, obtained
/// by adding multiples of the hull's equations. Used for display.
pub fn sparse_form(facet: &Facet, hull: &AffineHull) -> Facet {
    let c = &facet.normal;
    let n = c.len();
    let eqs = hull.complement_basis();
    let j = eqs.len();
    if j == 0 {
        return facet.clone();
    }
    // variables: t⁺ (j), t⁻ (j), u (n), s1 (n), s2 (n);
    // rows are u − s·(c + Eᵀt) − slack = 0 for s = ±1
    let width = 2 * j + 3 * n;
    let zero = BigRational::zero;
    let mut a = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for k in 0..n {
        for sign in [-1i64, 1] {
            let s = BigRational::from_integer(sign.into());
            let mut row = vec![zero(); width];
            for (jj, e) in eqs.iter().enumerate() {
                row[jj] = -(&s * &e[k]);
                row[j + jj] = &s * &e[k];
            }
            row[2 * j + k] = BigRational::one();
            row[2 * j + n + if sign < 0 { 0 } else { n } + k] = -BigRational::one();
            a.push(row);
            b.push(&s * &c[k]);
        }
    }
    let mut cost = vec![zero(); width];
    for x in cost.iter_mut().skip(2 * j).take(n) {
        *x = BigRational::one();
    }
    let LpOutcome::Optimal { x, .. } = lp::solve(a, b, &cost) else {
        return facet.clone();
    };
    let mut normal = c.clone();
    let mut offset = facet.offset.clone();
    for (jj, e) in eqs.iter().enumerate() {
        let t = &x[jj] - &x[j + jj];
        if t.is_zero() {
            continue;
        }
        for (nk, ek) in normal.iter_mut().zip(e) {
            *nk += &t * ek;
        }
        offset += &t * dot(e, hull.origin());
    }
    scale_to_coprime(normal, offset)
}

/// Exact affine dimension of all deterministic `k`-local MACs over
/// `alphabets`, streamed so large vertex sets never materialize.
pub fn vertex_affine_dimension(k: usize, alphabets: &Alphabets) -> Result<usize, PolytopeError> {
    let n = alphabets.input_count();
    let outputs = alphabets.output_size();
    let points = deterministic_tables(k, alphabets)?.map(move |table| {
        let mut p = vec![0i64; outputs * n];
        for (a, &b) in table.iter().enumerate() {
            p[b as usize * n + a] = 1;
        }
        p
    });
    // normalization confines every MAC to a space of this dimension
    affine_dimension_stream(points, Some((outputs - 1) * n))
}

pub fn to_points(macs: &[crate::mac::Mac<BigRational>]) -> Vec<RationalPoint> {
    macs.iter().map(|m| m.probs().to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn pts(v: &[&[i64]]) -> Vec<RationalPoint> {
        v.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn square_has_four_facets() {
        let square = RationalPolytope::from_vertices(pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        let h = v_to_h(&square).unwrap();
        let facets = h.facets.unwrap();
        assert_eq!(facets.len(), 4);
        let expected = [
            Facet { normal: vec![q(-1), q(0)], offset: q(0) },
            Facet { normal: vec![q(0), q(-1)], offset: q(0) },
            Facet { normal: vec![q(0), q(1)], offset: q(1) },
            Facet { normal: vec![q(1), q(0)], offset: q(1) },
        ];
        assert_eq!(facets, expected.to_vec());
    }

    #[test]
    fn simplex_in_three_space() {
        let simplex = RationalPolytope::from_vertices(pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        let h = v_to_h(&simplex).unwrap();
        let facets = h.facets.unwrap();
        assert_eq!(facets.len(), 3);
        let hull = simplex.hull().unwrap();
        let pos = positivity_facets(&hull);
        assert!(facets.iter().all(|f| pos.contains(f)));
        for f in &facets {
            assert_eq!(simplex.support_rank(f), 2);
            assert!(simplex.vertices.iter().all(|v| f.holds(v)));
        }
    }

    #[test]
    fn degenerate_and_empty() {
        let single = RationalPolytope::from_vertices(pts(&[&[1, 1], &[1, 1]]));
        assert_eq!(v_to_h(&single).unwrap_err(), PolytopeError::DegenerateInput);
        assert_eq!(lp_membership(&[q(0)], &[]).unwrap_err(), PolytopeError::EmptyInput);
    }

    #[test]
    fn membership_of_vertices_and_midpoints() {
        let verts = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let m = lp_membership(&verts[2], &verts).unwrap();
        assert!(m.member);
        assert_eq!(m.certificate, Certificate::Weights(vec![q(0), q(0), q(1), q(0)]));
        let mid = vec![q(1), q(0)];
        let m = lp_membership(&mid, &verts).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(m.certificate, Certificate::Weights(vec![half.clone(), half, q(0), q(0)]));
        let outside = vec![q(3), q(1)];
        let m = lp_membership(&outside, &verts).unwrap();
        assert!(!m.member);
        let Certificate::Separator(f) = m.certificate else { panic!() };
        assert!(verts.iter().all(|v| f.holds(v)));
        assert!(!f.holds(&outside));
        assert_eq!(
            lp_membership(&[q(1)], &verts).unwrap_err(),
            PolytopeError::DimensionMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn off_hull_point_is_separated_by_hull_normal() {
        let verts = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let m = lp_membership(&[q(1), q(1), q(0)], &verts).unwrap();
        let Certificate::Separator(f) = m.certificate else { panic!() };
        assert_eq!(f, Facet { normal: vec![q(1), q(1), q(1)], offset: q(1) });
    }

    #[test]
    fn sparse_form_of_simplex_facet() {
        let verts = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let hull = AffineHull::new(&verts).unwrap();
        let f = canonical_facet(&hull, &[q(-1), q(0), q(0)], &q(0));
        assert_ne!(f.normal, vec![q(-1), q(0), q(0)]);
        let s = sparse_form(&f, &hull);
        let l1: BigRational = s.normal.iter().map(|x| x.abs()).sum::<BigRational>() / s.offset.abs().max(q(1));
        assert!(l1 <= q(1));
        assert_eq!(canonical_facet(&hull, &s.normal, &s.offset), f);
    }
}

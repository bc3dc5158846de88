//! Characteristic matrices over simple polytopes.
//!
//! A [`QuasitoricPair`] is the combinatorial surrogate of a quasitoric
//! manifold: a simple polytope, an `n x m` integer matrix whose column `j`
//! is the (signed) primitive vector of facet `j`, and the vertex orientation
//! of the polytope that fixes the orientation of the manifold.

mod canonical;

pub use canonical::{canonical_form, strong_equiv, weak_equiv, CanonicalForm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det, unimodular_inverse, IntMatrix, IntVector};
use crate::polytope::{orientation_assignment, permutation_sign, FacetBijection, OrientationAssignment, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasitoricPair {
    polytope: SimplePolytope,
    lambda: IntMatrix,
    orientation: OrientationAssignment,
}

/// Checks primitivity of every column and `|det| = 1` at every vertex.
pub fn validate_characteristic(polytope: SimplePolytope, lambda: IntMatrix) -> Result<QuasitoricPair> {
    let (n, m) = (polytope.dim(), polytope.facet_count());
    if lambda.rows() != n || lambda.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "characteristic matrix is {}x{}, polytope needs {n}x{m}",
            lambda.rows(),
            lambda.cols()
        )));
    }
    if let Some(j) = (0..m).find(|&j| !lambda.column(j).is_primitive()) {
        return Err(Error::NonPrimitiveColumn(j));
    }
    for v in polytope.vertices() {
        let d = det(&lambda.select_columns(v))?;
        if d.abs() != 1 {
            return Err(Error::SingularVertex { vertex: v.clone(), det: d });
        }
    }
    let orientation = orientation_assignment(&polytope)?;
    Ok(QuasitoricPair { polytope, lambda, orientation })
}

impl QuasitoricPair {
    pub fn new(polytope: SimplePolytope, lambda: IntMatrix) -> Result<Self> {
        validate_characteristic(polytope, lambda)
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn facet_count(&self) -> usize {
        self.polytope.facet_count()
    }

    pub fn polytope(&self) -> &SimplePolytope {
        &self.polytope
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn orientation(&self) -> &OrientationAssignment {
        &self.orientation
    }

    pub fn column(&self, j: usize) -> IntVector {
        self.lambda.column(j)
    }

    /// Frames at every vertex, indexed like the polytope's vertices.
    pub fn frames(&self) -> Vec<VertexFrame> {
        (0..self.polytope.vertex_count()).map(|v| vertex_frame(self, v)).collect()
    }

    /// Applies a relabeling, a change of torus basis and column sign flips.
    pub fn twisted(&self, twist: &Twist) -> Result<QuasitoricPair> {
        let m = self.facet_count();
        if twist.relabel.len() != m || !twist.relabel.is_permutation() || twist.signs.len() != m {
            return Err(Error::DimensionMismatch("twist does not match facet count".into()));
        }
        let polytope = self.polytope.relabeled(&twist.relabel);
        let mut columns = vec![IntVector::zeros(self.dim()); m];
        for j in 0..m {
            columns[twist.relabel.apply(j)] = twist.matrix.mul_vec(&self.column(j))?.scaled(twist.signs[j])?;
        }
        validate_characteristic(polytope, IntMatrix::from_columns(self.dim(), &columns)?)
    }
}

/// Refined form: `Λ_{v,ordering}^{-1} · Λ`, whose `ordering` columns are the
/// standard basis in order.
pub fn refine_at_vertex(q: &QuasitoricPair, v: usize, ordering: &[usize]) -> Result<IntMatrix> {
    check_ordering(q, v, ordering)?;
    let a = unimodular_inverse(&q.lambda.select_columns(ordering))?;
    a.mul(&q.lambda)
}

fn check_ordering(q: &QuasitoricPair, v: usize, ordering: &[usize]) -> Result<()> {
    let mut sorted = ordering.to_vec();
    sorted.sort_unstable();
    if sorted != q.polytope.vertex(v) {
        return Err(Error::DimensionMismatch(format!(
            "{ordering:?} is not an ordering of vertex {:?}",
            q.polytope.vertex(v)
        )));
    }
    Ok(())
}

/// Local data at a fixed point: the dual basis of the facet vectors at `v`
/// (the tangent weights) and the sign comparing the omniorientation frame
/// with the global orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFrame {
    pub vertex: usize,
    /// Facets at `v` in sorted order.
    pub facets: Vec<usize>,
    pub lambda_v: IntMatrix,
    /// `weights[k]` pairs to 1 with the column of `facets[k]` and to 0 with the others.
    pub weights: Vec<IntVector>,
    pub sign: i64,
}

impl VertexFrame {
    /// Weight of the edge leaving `v` by dropping `facet`.
    pub fn weight_for(&self, facet: usize) -> Option<&IntVector> {
        self.facets.iter().position(|&f| f == facet).map(|k| &self.weights[k])
    }
}

pub fn vertex_frame(q: &QuasitoricPair, v: usize) -> VertexFrame {
    let facets = q.polytope.vertex(v).to_vec();
    let lambda_v = q.lambda.select_columns(&facets);
    // validated input: |det| = 1 and the inverse cannot overflow for the
    // entry sizes that pass validation
    let inv = unimodular_inverse(&lambda_v).expect("validated vertex is unimodular");
    let weights = (0..facets.len()).map(|k| inv.row(k)).collect();
    let sign = q.orientation.sign(v) * det(&lambda_v).expect("validated vertex determinant");
    VertexFrame { vertex: v, facets, lambda_v, weights, sign }
}

/// `σ(v)` computed with the facets of `v` listed in `ordering`.
pub fn local_sign_with_ordering(q: &QuasitoricPair, v: usize, ordering: &[usize]) -> Result<i64> {
    check_ordering(q, v, ordering)?;
    let d = det(&q.lambda.select_columns(ordering))?;
    Ok(q.orientation.sign(v) * permutation_sign(ordering) * d)
}

/// A weak-equivalence witness: facet `j` goes to `relabel(j)` and
/// `λ'_{relabel(j)} = signs[j] · matrix · λ_j`. Strong equivalence uses the
/// identity matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub relabel: FacetBijection,
    pub matrix: IntMatrix,
    pub signs: Vec<i64>,
}

impl Twist {
    pub fn identity(n: usize, m: usize) -> Self {
        Twist { relabel: FacetBijection::identity(m), matrix: IntMatrix::identity(n), signs: vec![1; m] }
    }

    /// True iff this twist carries `q` exactly onto `target`.
    pub fn maps(&self, q: &QuasitoricPair, target: &QuasitoricPair) -> bool {
        if q.dim() != target.dim() || q.facet_count() != target.facet_count() {
            return false;
        }
        if self.signs.iter().any(|s| s.abs() != 1) || det(&self.matrix).map_or(true, |d| d.abs() != 1) {
            return false;
        }
        if !self.relabel.is_isomorphism(&q.polytope, &target.polytope) {
            return false;
        }
        (0..q.facet_count()).all(|j| {
            let image = self.matrix.mul_vec(&q.column(j)).and_then(|c| c.scaled(self.signs[j]));
            image.is_ok_and(|c| c == target.column(self.relabel.apply(j)))
        })
    }
}

//! Quasitoric manifolds as combinatorial data.
//!
//! A manifold is represented by a simple polytope, given by its vertex–facet
//! incidences, together with an integer characteristic matrix. On top of
//! that the crate computes cohomology presentations, top-degree pairings and
//! characteristic numbers, GKM graphs, and canonical forms deciding weak and
//! strong equivariant equivalence.
//!
//! ```
//! use qtoric::families::hirzebruch;
//! use qtoric::weak_equiv;
//!
//! let a = hirzebruch(1).unwrap();
//! let b = hirzebruch(-1).unwrap();
//! let twist = weak_equiv(&a, &b).unwrap().expect("equivalent");
//! assert!(twist.maps(&a, &b));
//! ```

pub mod cohomology;
pub mod document;
pub mod error;
pub mod families;
pub mod gkm;
pub mod lattice;
pub mod oracle;
pub mod polytope;
pub mod qtoric;

pub use cohomology::{CharNumberVector, CohomologyPresentation, Monomial};
pub use document::QuasitoricDocument;
pub use error::{Error, Result};
pub use gkm::GkmGraph;
pub use lattice::{IntMatrix, IntVector};
pub use polytope::{FacetBijection, SimplePolytope};
pub use qtoric::{canonical_form, strong_equiv, weak_equiv, CanonicalForm, QuasitoricPair, Twist};

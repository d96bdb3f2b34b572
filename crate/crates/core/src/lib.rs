//! Resolution of singularities of oriented simplicial pseudo-manifolds.
//!
//! Given a closed oriented pseudo-manifold `Z` with a good ridge labeling,
//! every state `(flag, pairing family, parity vector)` is an `n`-cube and
//! the involutions `Φ_j^ε` glue those cubes into a closed oriented
//! PL manifold `M`. The barycentric projection `g: M → Z` is a covering
//! off the codimension-2 skeleton; its degree `r` is the multiplicity with
//! which `M` realizes the fundamental class of `Z`.
//!
//! ```
//! use pseudoresolve::{catalog, resolve, ResolveOptions};
//!
//! let run = resolve(catalog::polygon(3), &ResolveOptions::default()).unwrap();
//! assert_eq!(run.component.len(), 12);
//! assert_eq!(run.degree.degree, 2);
//! ```

pub mod catalog;
pub mod census;
pub mod complex;
pub mod cubes;
pub mod error;
pub mod homology;
pub mod io;
pub mod labeling;
pub mod lattice;
pub mod pipeline;
pub mod projection;
pub mod states;

pub use complex::{Cell, OrientationAssignment, PseudoManifold, SimplicialComplex};
pub use error::{Error, Result};
pub use labeling::{ensure_good, GoodLabeling, LabelSet, LabeledComplex, Provenance, UserLabeling};
pub use pipeline::{resolve, ResolveOptions, Resolution};
pub use states::{Flag, ResolutionState, Resolver};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/complexes.md")]
    struct Complexes;
    #[doc = include_str!("../../../book/src/labelings.md")]
    struct Labelings;
    #[doc = include_str!("../../../book/src/states.md")]
    struct States;
    #[doc = include_str!("../../../book/src/cubes.md")]
    struct Cubes;
    #[doc = include_str!("../../../book/src/degree.md")]
    struct Degree;
    #[doc = include_str!("../../../book/src/census.md")]
    struct Census;
}

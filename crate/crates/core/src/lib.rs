//! Geometric torsion of pseudotriangulated closed 3-manifolds placed in R⁴.
//!
//! The crate is `no_std` (it needs `alloc`). It covers the whole numerical
//! pipeline:
//!
//! - [`pseudotriangulation`]: tetrahedra with explicit face gluings, derived
//!   edges, faces and stars, and the Pachner moves 2↔3, 1↔4 plus the
//!   auxiliary 0→2 move.
//! - [`euclid4`]: volumes and angles of simplices in R⁴, the signed angle θ
//!   between adjacent tetrahedra, apex placement and edge holonomy.
//! - [`chain_complex`]: the based maps f₁…f₅ of the complex
//!   `e₄ → (dx) → (dl ⊕ dθ) → (dω) → (dρ) → (dα ⊕ dβ)` built by forward-mode
//!   differentiation, plus composition and acyclicity checks.
//! - [`torsion`]: τ-chain selection, torsion, the invariant
//!   `|τ|·∏l³/∏2S`, and checks of how the torsion changes under moves.
#![cfg_attr(not(test), no_std)]
// `!(x > eps)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chain_complex;
pub mod euclid4;
pub mod jet;
pub mod linalg;
pub mod pseudotriangulation;
pub mod scalar;
pub mod torsion;

pub use chain_complex::{GeometricComplex, LinearMap};
pub use euclid4::{Embedding, MetricData, Point4};
pub use jet::Jet;
pub use pseudotriangulation::{
    EdgeId, FaceGluing, FaceId, Pseudotriangulation, RawTriangulation, TetId, Tetrahedron, VertexId,
};
pub use scalar::Scalar;
pub use torsion::{InvariantResult, TauChain, TorsionResult};

//! Symbolic calculator for the Whitehead groups `Wh_n^R(Γ)` of fundamental
//! groups of closed oriented 3-manifolds.
//!
//! The pipeline is:
//!
//! 1. [`manifold`]: parse a prime/JSJ description into a [`ManifoldSpec`].
//! 2. [`group`]: derive the [`GroupProfile`] (torsion, maximal finite
//!    subgroups, virtually cyclic kinds, solvable form).
//! 3. [`assembly`]: split `Wh_n^R(Γ)` into the finite-relative and the
//!    virtually-cyclic-relative summands and build each as an [`Expr`].
//! 4. [`ring`] and [`kdb`]: specialize the expression to a coefficient ring,
//!    substituting tabulated values for finite groups.
//! 5. [`report`]: render as text, JSON or LaTeX.

pub mod assembly;
pub mod error;
pub mod fgab;
pub mod group;
pub mod kdb;
pub mod kexpr;
mod lex;
pub mod manifold;
pub mod report;
pub mod ring;

pub use assembly::{assemble_wh, Annotations, Assembler, DegreeResult, DegreeWindow, WhResult};
pub use error::{Error, Result};
pub use fgab::FGAb;
pub use group::{analyze, GroupProfile};
pub use kdb::KnowledgeBase;
pub use kexpr::{Atom, Expr, LesNode, LesRow, Multiplicity};
pub use manifold::{parse_manifold, FiniteGroupSpec, ManifoldSpec, PrimeSpec};
pub use ring::{apply_ring_profile, RingKind, RingProfile};

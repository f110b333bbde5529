//! Exact computer algebra for polynomial automorphisms of affine space.
//!
//! The crate covers sparse polynomial arithmetic over `Q`, `Q(zeta_m)` and
//! `Q(x)`, polynomial self-maps given by coordinates or by words in tame
//! generators, exponentials and logarithms of locally nilpotent derivations,
//! one-parameter multiplicative flows, Gröbner bases and fixpoint analysis,
//! and a classifier for plane automorphisms by the transcendence degree of
//! their invariant field.

pub mod budget;
pub mod casestudy;
pub mod classify;
pub mod endo;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod lnd;
pub mod poly;
pub mod scalar;
pub mod torus;

pub use budget::Budget;
pub use classify::{classify_plane, ClassificationReport, ClassifyOptions, NormalForm, Verdict};
pub use endo::{ElementaryFactor, PolyMap};
pub use error::{Error, Result};
pub use ideal::{GroebnerBasis, Ideal};
pub use linalg::SquareMatrix;
pub use lnd::{Derivation, FlowLaw, ParametricMap};
pub use poly::{MonomialOrder, MultiPoly, PolyRing, Ring};
pub use scalar::{Field, FieldSpec, Scalar};

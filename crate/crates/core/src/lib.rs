//! Exact homological algebra over finitely generated abelian groups.
//!
//! The crate is layered:
//!
//! * [`matrix`], [`snf`], [`group`], [`hom`]: integer matrices, Smith normal
//!   form, presentations and homomorphisms.
//! * [`functor`]: `⊗`, `Tor`, `Λⁿ`, `L₁Λ²` and integral homology with
//!   induced maps.
//! * [`bar`]: a brute-force bar-complex oracle for homology of small groups.
//! * [`tower`]: inverse systems over finite windows and the comparison map
//!   `F(lim Aᵢ) → lim F(Aᵢ)`.
//! * [`cotorsion`]: a rule engine that judges symbolic group expressions.
//!
//! ```
//! use abelim::{dsl::parse_group_expr, functor::homology};
//!
//! let a = parse_group_expr("Z/2 + Z/2").unwrap();
//! let h = homology(&a, 3);
//! assert_eq!(h.degree(3).canonical_form().to_expr(), "Z/2^3");
//! ```

pub mod bar;
pub mod cotorsion;
pub mod dsl;
pub mod error;
pub mod functor;
pub mod group;
pub mod hom;
pub mod matrix;
mod scalar;
pub mod snf;
pub mod suite;
pub mod tower;

pub use error::{Error, Result};
pub use group::{CanonicalForm, Element, Presentation};
pub use hom::Homomorphism;
pub use matrix::IntMatrix;

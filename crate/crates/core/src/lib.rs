//! Cyclic hypergeometric functions at a root of unity and the integrable
//! chiral Potts model.
//!
//! - [`branched`]: ω-Pochhammer symbols, `Δ`, `p`, `p₀` with explicit cut handling.
//! - [`series`]: direct evaluation of `_{p+1}Φ_p` at q = ω, cyclicity and
//!   Saalschütz predicates.
//! - [`summation`]: product formula for `₂Φ₁`, cut-region classification and
//!   the piecewise phase factor.
//! - [`transform`]: Fourier duality, the order-4 map μ, `₃Φ₂` convolution and
//!   its generators.
//! - [`potts`]: rapidity curve, Boltzmann weights, star-triangle check,
//!   order parameters.
//! - [`fermat`]: dictionary between affine parameters and homogeneous
//!   Fermat-curve points.
//! - [`sampling`]: seeded random parameter generators.

pub mod branched;
pub mod dd;
pub mod error;
pub mod fermat;
pub mod numeric;
pub mod potts;
pub mod sampling;
pub mod series;
pub mod summation;
pub mod transform;

pub use branched::{BranchedValue, UnityContext};
pub use error::{Error, Result};
pub use numeric::NumericConfig;
pub use series::HypSpec;

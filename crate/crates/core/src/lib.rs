//! Noise, entropy and hypercontractivity bounds on the boolean cube.
//!
//! The crate has five parts:
//! * [`cube`] — dense functions on {0,1}ⁿ with the Walsh spectrum, the noise
//!   operator T_ε, norms, entropies, the Dirichlet form and sphere
//!   constructors;
//! * [`special`] — the scalar bound functions (binary entropy and inverse,
//!   Φ/φ_ε and derivatives, ψ₂,q, κ₂,q, the Mrs. Gerber function, the
//!   log-Sobolev constant C, threshold curves);
//! * [`bounds`] — inequality checks producing [`bounds::CheckReport`]s;
//! * [`extremal`] — the (α, ν) level-set domain, the implicit exponent
//!   maximization behind κ₂,q, and sphere-mixture tightness instances;
//! * [`verify`] — the seeded randomized suite.

pub mod bounds;
pub mod cube;
pub mod error;
pub mod extremal;
pub mod logspace;
pub mod special;
pub mod verify;

pub use cube::{
    ball_indicator, sphere_indicator, sphere_mixture, CubeFunction, GeneratorSpec, NoiseParam,
    Spectrum,
};
pub use error::{Error, Result};

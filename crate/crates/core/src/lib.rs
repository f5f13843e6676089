//! Numerical toolkit for degenerate Beltrami equations `f_z̄ = μ f_z`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: grids, domains and the dashed lines `D ∩ S(z0, r)`;
//! * [`field`]: coefficient and dilatation fields, circle norms and averages;
//! * [`modulus`]: discrete conformal modulus and its closed-form bounds;
//! * [`criteria`]: BMO/FMO probes, Φ-integral conditions, radial divergence;
//! * [`solver`]: Wirtinger derivatives, the Beurling transform and the
//!   Neumann-series solver for homeomorphic solutions;
//! * [`dirichlet`]: Schwarz integral, star-domain Riemann maps and the
//!   composed Dirichlet pipeline `f = h ∘ g`.

// `!(x > 0.0)` also rejects NaN, which is the point of writing it that way.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod criteria;
pub mod modulus;
pub mod quad;
pub mod solver;
pub mod dirichlet;
pub mod geometry;

pub use error::{Error, Result};
pub use field::{
    circle_average, circle_norm, dilatation, extend_by_zero, truncate_mu, Analytic, ComplexField,
    MuGenerator, PlaneFunction, RadialProfile, RealField,
};
pub use geometry::{
    circle_trace, domain_mask, make_grid, ArcSet, BBox, DashedLine, DomainSpec, Grid, C64,
};

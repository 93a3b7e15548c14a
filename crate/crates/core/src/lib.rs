//! Exact computer-algebra kernel for studying the fibers of a rational map
//! `P^m --> P^n` given by forms of a common degree `d`.
//!
//! The crate computes the Jacobian matrix of the forms and the gcd `F` of
//! its 3-minors, discovers the hypersurfaces contracted to points by the map
//! together with their defining equations, and checks the chain
//!
//! ```text
//! sum deg(h_y) <= sum (2e - 1) deg(P_e) <= deg(F) <= 3(d - 1)
//! ```
//!
//! along with the refinement `deg(F) <= 3(d - 1) - indeg(Syz(I))` for
//! surface maps `P^2 --> P^3`.

pub mod error;
pub mod fibers;
pub mod field;
pub mod fixtures;
pub mod gcd;
pub mod jacobian;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod sqfree;
pub mod syzygy;
pub mod univariate;

pub use error::{Error, Result};
pub use fibers::{
    discover_fibers, fiber_equation, fiber_equation_with_pivot, minor_vanishing_check,
    sample_hypersurface_points, tangent_rank_check, verify_bound_chain, BoundChainReport,
    DiscoveryOptions, DiscoveryResult, FiberRecord, ProjectivePoint, RankCheck,
};
pub use field::{Field, PrimeField, RationalField, DEFAULT_PRIME, SECOND_PRIME};
pub use gcd::{gcd_multivariate, gcd_many};
pub use jacobian::{
    build_jacobian, euler_syzygy, fitting_invariance_check, gcd_of_minors,
    generic_finiteness_check, linear_dependence_check, minors, EulerSyzygy, FinitenessFlags,
    JacobianReport, LinearDependence, Minor, RationalMapInput,
};
pub use monomial::Monomial;
pub use poly::MvPoly;
pub use sqfree::{squarefree_decompose, SquarefreeDecomposition};
pub use syzygy::{graded_syzygy_kernel, indeg_syzygy, GradedKernelBasis, IndegResult};
pub use univariate::{univariate_roots, UniPoly};

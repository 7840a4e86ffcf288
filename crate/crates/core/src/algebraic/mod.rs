//! Exact algebraic layer: integer polynomials, algebraic parameters,
//! Liouville-type bounds and the twist-polynomial family.

pub mod bounds;
pub mod family;
pub mod number;
pub mod poly;

pub use bounds::{guting_bound, liouville_bound, liouville_ln_bound, LiouvilleReport};
pub use family::{
    family_height, family_height_ln_bound, kappa_constant, lower_bound_chain, membership_a,
    twist_polynomials, A2Witness, FamilyCaps, KappaReport, LowerBoundChainReport,
    MembershipReport, TwistIndex, TwistPolynomials,
};
pub use number::{AlgebraicParameter, AlgebraicSpec, RationalInterval};
pub use poly::IntegerPolynomial;

//! Lattice chains, simplices of the building of GL_n(F), flags of the
//! barycentric subdivision, apartments and finite ball regions.

mod apartment;
mod chain;
mod random;
mod region;
mod simplex;

pub use apartment::{apartment_coords, embed_affine, AffineEmbedding, ApartmentPoint};
pub use chain::{
    adapted_basis, are_conjugate, chain_invariants, least_period, min_rotation, ChainInvariants, LatticeChain,
};
pub use random::{random_chain, random_gl};
pub use region::{ball, cliques, neighbors, Ball, MAX_BALL_VERTICES};
pub use simplex::{
    adjacent, chambers_containing, is_semistandard, sd_flags, simplex_relations, FlagSd, SimplexRelation, SimplexX,
    CHAMBER_GUARD,
};

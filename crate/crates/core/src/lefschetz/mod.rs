//! Group elements acting on the building: normalizer decomposition, orbits
//! of compact subgroups, elliptic elements, fixed simplices, Lefschetz sums
//! and Euler-Poincaré functions.

mod elliptic;
mod ep;
mod group;
mod trace;

pub use elliptic::{is_minimal, EllipticElement, Minimality};
pub use ep::{ep_function_build, EPFunction, EPTerm};
pub use group::{
    chain_shift_element, normalizer_decompose, orbit_apartment_intersection, orbit_bfs, parahoric_generators,
    GroupElement, NormalizerDecomposition,
};
pub use trace::{
    fixed_simplices, lefschetz_minimal, lefschetz_sum, ConjugacyDatum, DimensionOracle, FixedSimplex, LefschetzSum,
    LefschetzTerm, MinimalTerm, SymbolicOracle, TraceOracle, TraceSum, TraceValue,
};

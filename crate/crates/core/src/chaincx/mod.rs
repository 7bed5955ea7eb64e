//! Finite chain complexes of the building with coefficient systems, exact
//! homology, and q-counts of parahoric subgroups.

mod complex;
mod qcomb;
mod scalar;
mod sparse;

pub use complex::{
    build_complex, compare_styles, euler_characteristic, homology_ranks, incidence_number, Cell, ChainComplexData,
    CoefficientSystem, DetLabel, DimSpec, FiniteComplex, OrbitKey, RegionTag, Style, TransitionOracle, VertexLabel,
};
pub use qcomb::{gl_order, parahoric_order, q_multinomial, relative_volume, relative_volume_of};
pub use scalar::{Scalar, Zp};
pub use sparse::SparseMatrix;

pub type Rational = num_rational::BigRational;
pub type QMatrix = SparseMatrix<Rational>;
pub type QChainComplex = ChainComplexData<Rational>;
pub type F2 = Zp<2>;

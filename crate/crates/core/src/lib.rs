//! Rayleigh-damped elastodynamic networks.
//!
//! Assemble mass–spring–damper networks whose damping is `C = αK + βM`,
//! evaluate their Laplace-domain terminal response `W(λ)`, extract its
//! pole–residue canonical form, check a candidate canonical form for
//! admissibility, synthesize a network realizing it, and describe the set of
//! resonances reachable for fixed `(α, β)`.
//!
//! All algebra is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod atlas;
pub mod characterize;
mod dense;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod network;
pub mod response;
pub mod sampling;
pub mod scalar;
pub mod serde_util;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub use atlas::{locus, LocusCase, LocusDescription, LocusPiece};
pub use characterize::{check_balanced, check_canonical, passivity_margin, CharacterizationReport, CheckOptions};
pub use linalg::{schur_complement, BlockPartition, SchurMode, SymMatrix};
pub use network::{
    random_network, ElastodynamicNetwork, Node, RandomNetworkSpec, RayleighParams, Spring, SystemMatrices,
};
pub use response::{
    eliminate_massless, evaluate_canonical, evaluate_response, extract_canonical, CanonicalResponse, ExtractOptions,
    ReducedSystem, ResponseSample,
};
pub use synth::{
    balance_forces, build_rank_one_gadget, decompose_two_node_element, synthesize, GeneralizedNetwork,
    IdealElasticElement, NetworkComponent, SynthesisOptions,
};

pub type Complex64 = Cx<f64>;
pub type Network = ElastodynamicNetwork<f64>;
pub type Matrices = SystemMatrices<f64>;
pub type Canonical = CanonicalResponse<f64>;
pub type Reduced = ReducedSystem<f64>;
pub type Sample = ResponseSample<f64>;
pub type Rayleigh = RayleighParams<f64>;
pub type Generalized = GeneralizedNetwork<f64>;
pub type Component = NetworkComponent<f64>;
pub type SymMatrix64 = SymMatrix<f64>;

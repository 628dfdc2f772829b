//! Exact simulation of multiphoton states that carry several degrees of
//! freedom (spatial mode, polarization, frequency).
//!
//! States are kept in the occupation-number basis ([`fock`]) and can be
//! expanded into ordered-tuple coefficient tensors ([`first_quantized`]),
//! where permutation symmetry and inter-DOF entanglement are analysed
//! ([`symmetry`]). [`optics`] propagates states through linear networks with
//! threshold detection and [`fringe`] turns phase sweeps into visibilities.

pub mod error;
pub mod first_quantized;
pub mod fock;
pub mod fringe;
pub mod io;
pub mod optics;
pub mod report;
pub mod schema;
pub mod states;
pub mod symmetry;

pub use error::{Error, Result};
pub use first_quantized::{from_first_quantized, to_first_quantized, FirstQuantizedTensor, Limits};
pub use fock::{CreationMonomial, FockKet, StateVector, C64};
pub use fringe::{fringe_sweep, visibility_prediction, FringeResult};
pub use optics::{
    apply_network, build_ghz_projection_network, build_noon_projection_network,
    coincidence_probability, noon_operator_expectation, single_photon_map, DetectorLayout,
    Element, LinearNetwork, MeasurementNormalization,
};
pub use schema::{DofSchema, Mode};
pub use states::{compute_k, make_profile, KValue, ProfileKind, SpectralProfile};
pub use symmetry::{
    check_bosonic_symmetry, check_single_dof_symmetry, project_doubly_symmetric, schmidt_analysis,
    DofPartition, SchmidtReport,
};

//! Entanglement witnesses for four-qubit states, trained as support vector
//! machines.
//!
//! Density operators are vectorized in the orthonormal multi-qubit Pauli
//! basis ([`pauli`]); labeled samples are drawn from the nine SLOCC families
//! of entangled pure states, from convex hulls of Haar-random product states,
//! and from the Werner family ([`sampling`], [`werner`]). Linear witnesses
//! and RBF-kernel models are trained and evaluated in [`svm`], and the
//! [`pipeline`] module persists datasets, models and reports for the CLI.

pub mod error;
pub mod linalg;
pub mod par;
pub mod pauli;
pub mod pipeline;
pub mod rng;
pub mod sampling;
pub mod state;
pub mod svm;
pub mod werner;

pub use error::{Error, Result};
pub use pauli::{basis_element, devectorize, hs_inner, vectorize, BasisElement, Operator, PauliVector};
pub use sampling::{FamilyTag, Orbit};
pub use state::{density_from_pure, validate_density, DensityOperator, PureState};
pub use svm::{Label, LabeledSample, Model, TrainConfig, Witness};

//! Federated recommendation simulation framework.
//!
//! Clients hold private user-item interactions and train local
//! recommendation models (matrix factorization with BPR, or a
//! parameter-free linear graph filter). Instead of averaging model
//! parameters, the collaborative-information aggregator averages
//! item-similarity matrices (or linear filters) on the server, and each
//! client realigns its item embeddings to the global similarity. The
//! classic weighted-summation (FedAvg-style) aggregator and a
//! no-aggregation baseline are included for comparison, along with local
//! differential privacy (Laplace noise), truncated-SVD upload
//! compression, and top-K ranking evaluation.

pub mod backbones;
pub mod collab;
pub mod dataset;
mod error;
pub mod eval;
pub mod matrixkit;
pub mod orchestrator;
pub(crate) mod par;
pub mod rng;

pub use error::{Error, Result};

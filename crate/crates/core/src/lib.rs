//! Entanglement of purification, its certified bounds, and the quantum
//! advantage of dense coding for small finite-dimensional quantum states.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense complex linear algebra on multipartite Hilbert spaces.
//! - [`states`]: constructors for the named states and state families.
//! - [`info`]: von Neumann entropy and derived information functionals.
//! - [`purification`]: standard purifications and the ancilla-unitary chart.
//! - [`ep`]: multi-start estimation of the entanglement of purification.
//! - [`dense_coding`]: dense-coding advantage over channels on the sender.
//! - [`lab`]: one audit per monogamy / polygamy / additivity claim.
//!
//! All entropies are in bits.

pub mod audit;
pub mod dense_coding;
pub mod ep;
pub mod error;
pub mod info;
pub mod io;
pub mod lab;
pub mod purification;
pub mod states;
pub mod tensor;
pub mod tol;

mod search;

pub use error::{Error, Result};
pub use tensor::{CMatrix, CVector, DensityMatrix, Dims, Operator, PureState, C64};

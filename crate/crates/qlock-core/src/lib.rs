//! # qlock-core
//!
//! Numerical toolkit for quantum data locking in finite dimensions.
//!
//! The crate simulates locking schemes (a message basis encrypted by a short
//! list of key-indexed unitaries), evaluates how much information an
//! adversary without the key can extract by measuring, and computes the
//! capacity-style bounds that govern locking over noisy channels:
//!
//! - [`qcore`] — dense complex-matrix kernel: density operators, Kraus
//!   channels, entropies, distances, Haar sampling, partial traces.
//! - [`accinfo`] — lower/upper bound engines for the accessible information
//!   of finite ensembles (see-saw rank-1 POVM ascent, Holevo bound, pretty
//!   good measurement, entropy-minimization objective).
//! - [`locking`] — scheme construction, end-to-end protocol evaluation,
//!   variational-distance security criteria, the r1/r2 ratios, and
//!   composition bounds.
//! - [`channels`] — channel zoo, entanglement-breaking detection via the PPT
//!   criterion, single-letter locking-capacity bound evaluators, and wiretap
//!   private-information machinery.
//! - [`bosonic`] — analytic bosonic formulas and Fock-truncated numerics:
//!   thermal entropy g(N), Wehrl entropy by quadrature, coherent-state
//!   locking bounds, heterodyne information.
//! - [`ppm`] — pulse-position-modulation enigma-machine simulators
//!   (single-photon with loss and feedback, weak-coherent with the
//!   photon-number adversary).
//! - [`config`] / [`report`] — the structured text formats consumed and
//!   emitted by the CLI.
//!
//! All randomness flows through seeded ChaCha8 streams so that every result
//! is reproducible; reports record the seed and the RNG algorithm name.

pub mod accinfo;
pub mod bosonic;
pub mod channels;
pub mod config;
pub mod error;
pub mod locking;
pub mod ppm;
pub mod qcore;
pub mod quad;
pub mod report;
pub mod rng;

pub use error::{Error, Result};

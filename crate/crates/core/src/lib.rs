//! Entanglement swapping with four photons, its perfect correlations, and a
//! machine-checked refutation of deterministic local-realistic models for
//! them.
//!
//! * [`quantum`]: exact 16-amplitude statevector, polarization rotations and
//!   the double Bell-basis decomposition (numeric and closed form).
//! * [`correlation`]: outcome probabilities, phase classification,
//!   perfect-correlation reports and a seeded event sampler.
//! * [`lhv`]: the local-realistic unknowns and the parity constraints the
//!   perfect correlations impose on them.
//! * [`solver`]: brute-force and GF(2) deciders with checkable certificates.
//! * [`format`]: versioned JSON documents for constraint sets and results.

pub mod correlation;
pub mod format;
pub mod lhv;
pub mod quantum;
pub mod sign;
pub mod solver;

pub use sign::Sign;

//! Multi-photon interference in lossless linear optics.
//!
//! The crate simulates bosonic Fock states through beam-splitter networks
//! from first principles: Hong-Ou-Mandel-type destructive interference,
//! generalized photon bunching, NOON-state fringes with an N-photon period,
//! and the degradation of all of these under partial temporal
//! distinguishability of the photons.
//!
//! Layout:
//!
//! * [`fock`] — sparse multimode Fock states: construction, creation and
//!   annihilation operators, inner products, tensor products, outcome
//!   probabilities.
//! * [`optics`] — two-mode couplers, phase shifters, post-selection,
//!   classical particle baselines, NOON construction and projection.
//! * [`temporal`] — Gaussian spectral packets, Gram matrices and their
//!   permanents, the internal-mode embedding for partially distinguishable
//!   photons, and two-photon spectral functionals.
//! * [`experiments`] — named parameterized reproductions of the interference
//!   effects, each with closed-form oracle checks.
//! * [`scan`], [`fit`] — sweep tables, pass/fail checks, cosine fits.
//!
//! The numeric core is generic over the scalar type through [`float::Real`];
//! the aliases below pin the `f64` instantiation that the experiment suite
//! and all quoted tolerances target.
//!
//! ```
//! use multiphoton::fock::{FockVector, OccupationVector};
//! use multiphoton::optics::BeamSplitter;
//!
//! // two photons meeting at a balanced coupler never exit separately
//! let photons = FockVector::<f64>::basis(OccupationVector::new(vec![1, 1])?);
//! let out = BeamSplitter::balanced((0, 1))?.apply(&photons)?;
//! let separate = out.outcome_probability(&OccupationVector::new(vec![1, 1])?)?;
//! assert!(separate < 1e-12);
//!
//! // but an unbalanced one leaks coincidences at (T - R)^2
//! let out = BeamSplitter::new(0.4, (0, 1))?.apply(&photons)?;
//! let separate = out.outcome_probability(&OccupationVector::new(vec![1, 1])?)?;
//! assert!((separate - 0.04).abs() < 1e-12);
//! # Ok::<(), multiphoton::Error>(())
//! ```

pub mod error;
pub mod experiments;
pub mod fit;
pub mod float;
pub mod fock;
pub mod optics;
pub mod scan;
pub mod temporal;

pub use error::{Error, Result};
pub use float::Real;

/// Complex amplitude at double precision.
pub type Complex64 = num_complex::Complex<f64>;

/// Double-precision instantiations of the core types.
pub type FockVector64 = fock::FockVector<f64>;
pub type BeamSplitter64 = optics::BeamSplitter<f64>;
pub type PhaseShifter64 = optics::PhaseShifter<f64>;
pub type GaussianPacket64 = temporal::GaussianPacket<f64>;
pub type PacketSet64 = temporal::PacketSet<f64>;
pub type JointAmplitude64 = temporal::JointAmplitude<f64>;

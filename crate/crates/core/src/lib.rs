//! Convex, ε-convex, ε-affine and Wright-convex finite sequences.
//!
//! The crate classifies a finite sequence `u_0, ..., u_{m-1}`, computes the
//! smallest ε for which it is ε-convex or ε-affine (with the index pair that
//! forces it), and decomposes it into a convex or arithmetic part plus a
//! bounded residual.
//!
//! ```
//! use seqconvex_core::{classify, decompose, QuantifierMode, Sequence, Tolerance};
//!
//! let u = Sequence::new(vec![0.0, 1.0, 0.0]).unwrap();
//! assert!(!classify::is_convex(&u, Tolerance::default()).holds);
//!
//! let eps = classify::min_eps_convex(&u, QuantifierMode::Exists).eps;
//! assert_eq!(eps, 2.0);
//!
//! let d = decompose::convex_approx_hyers(&u, QuantifierMode::Exists, Tolerance::default()).unwrap();
//! assert!(d.bound <= eps / 2.0);
//! ```

pub mod classify;
pub mod decompose;
pub mod error;
pub mod extend;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod sequence;
#[cfg(feature = "oracle")]
pub mod verify;

pub use classify::{Certificate, CertificateKind, EpsMin, Verdict, Witness};
pub use decompose::{Decomposition, Line};
pub use error::{Error, Result};
pub use extend::{PiecewiseLinear, SamplePlan, SampledVerdict};
pub use sequence::{deltas, mediant_bounds, DeltaSequence, Epsilon, QuantifierMode, Sequence, Tolerance};

//! Variable-radius Blaschke factorization of complex polynomials and the
//! unwinding series built from it.
//!
//! ```
//! use vblaschke::{unwind, Complex, RadiusSchedule, RootForm};
//!
//! let f = RootForm::monic(vec![Complex::new(0.5, 0.0), Complex::new(0.0, 2.0)])
//!     .unwrap()
//!     .to_polynomial();
//! let series = unwind(&f, &RadiusSchedule::Fixed { radius: 1.0 }, 10).unwrap();
//! assert!(series.is_complete());
//! let z = Complex::new(0.3, -0.2);
//! assert!((series.eval_partial(series.len(), z).unwrap() - f.evaluate(z)).norm() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod unwind;
pub mod verify;

pub use blaschke::{
    factorize, factorize_polynomial, Factorization, OneStepEnergies, RBlaschkeProduct,
};
pub use error::{Error, Result};
pub use experiment::{SweepConfig, SweepResult, SweepRow};
pub use metrics::ContractionReport;
pub use poly::{Complex, Polynomial, RootForm};
pub use roots::{find_roots, roots_of};
pub use unwind::{unwind, RadiusSchedule, Term, UnwindingSeries};
pub use verify::{SuiteSummary, VerifyOptions, VerifyReport};

//! Exact intersection theory on Grassmannians and bundles over them.
//!
//! The crate is layered bottom-up:
//!
//! - [`partition`]: partitions in a box, Pieri and Giambelli, Schubert products;
//! - [`graded`]: exact rationals, truncated series, Newton identities;
//! - [`space`]: Chow rings of projective spaces, Grassmannians, products and
//!   projective bundles, with integration and pushforwards;
//! - [`sheaf`]: virtual bundles through the Chern character, Adams operations,
//!   symmetric powers, Segre and Euler classes;
//! - [`chern_poly`]: polynomials in the Chern classes of `E*`;
//! - [`voisin`]: the enumerative computations for Fano varieties of planes in
//!   cubics;
//! - [`report`] and [`cli`]: the verification suite and its front end.

pub mod chern_poly;
pub mod cli;
pub mod error;
pub mod graded;
pub mod partition;
pub mod report;
pub mod sheaf;
pub mod space;
pub mod voisin;

pub use chern_poly::{express_in_chern_monomials, ChernPolynomial};
pub use error::{ChowError, Result};
pub use graded::{Rational, TruncatedSeries};
pub use partition::{BoxShape, Partition};
pub use sheaf::Sheaf;
pub use space::{GradedElement, Label, Space};

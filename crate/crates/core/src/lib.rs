//! Numerical curvature laboratory for semi-Riemannian coordinate metrics.
//!
//! The crate evaluates metric components given as expression trees into
//! truncated Taylor jets, derives connection and curvature data from them
//! (Riemann, Ricci, Weyl, divergence of Weyl, Bach), and layers geometric
//! classification on top: Einstein and quasi-Einstein fits, weak conformal
//! flatness, warped-product structure checks, and contact metric geometry.
//! A built-in catalog of charts with known properties anchors every
//! computation against closed-form expectations.

pub mod catalog;
pub mod classify;
pub mod contact;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod jet;
pub mod metric;
pub mod metricfile;
pub mod report;
pub mod tensor;
pub mod warped;

pub use error::{Error, Result};
pub use expr::{parse_expr, ScalarExpr};
pub use jet::{Jet, JetSpace};
pub use metric::{DomainBox, MetricField, Point};
pub use tensor::{TensorValue, Variance};

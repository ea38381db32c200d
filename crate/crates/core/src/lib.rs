//! Construction and numerical verification of the close-to-convex class
//! `K_s(φ)`: functions `f = z + a₂z² + …` with
//! `−z²f′(z)/(g(z)g(−z)) ≺ φ(z)` for some `g` starlike of order 1/2.
//!
//! * [`series`]: truncated complex power series, the working representation;
//! * [`phi`]: Ma–Minda targets `φ`;
//! * [`generators`]: starlike `g`, Schwarz maps `w`, members `f`;
//! * [`bounds`]: Fekete–Szegő, inverse-coefficient, distortion, growth and
//!   covering bounds;
//! * [`subord`]: grid-based subordination and membership tests;
//! * [`harness`]: seeded verification campaigns and their reports.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod generators;
pub mod harness;
pub mod phi;
pub mod quadrature;
pub mod series;
pub mod subord;

pub use generators::{ClassMember, ExtremalKind, SchwarzKind, SchwarzMap, StarlikeAtomic};
pub use phi::{MaMindaFunction, PhiKind};
pub use series::PowerSeries;

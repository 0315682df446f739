//! Exact-arithmetic toolkit for blackbox polynomial identity testing via
//! variable-reducing faithful homomorphisms.
//!
//! The layers, bottom up:
//!
//! - [`field`], [`poly`], [`linalg`]: prime fields and rationals, sparse
//!   multivariate polynomials (gcd, resultants, Kronecker substitution),
//!   fraction-free elimination.
//! - [`circuit`]: general DAG circuits and depth-4 `ΣΠΣΠ` circuits, with a
//!   brute-force expansion oracle and JSON files.
//! - [`indep`]: Jacobian matrices, transcendence degree with certificates,
//!   annihilating polynomials under the Perron degree cap.
//! - [`maps`]: the Kronecker-style map `Φ` and the Vandermonde-style map `Ψ`,
//!   their parameter schedules and certified searches.
//! - [`depth4`]: gcd part, simple part, minimality, rank, identity lifting.
//! - [`hitting`]: hitting-set generators and the blackbox PIT driver.
//! - [`corpus`]: seeded instances judged against brute-force expansion.
//!
//! With the default `parallel` feature the hot loops (hitting-set evaluation,
//! randomized rank trials, candidate scans) run on rayon; results never depend
//! on scheduling.

pub mod circuit;
pub mod corpus;
pub mod depth4;
pub mod error;
pub mod exec;
pub mod field;
pub mod gen;
pub mod hitting;
pub mod indep;
pub mod linalg;
pub mod maps;
pub mod poly;
pub mod primes;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use poly::{Monomial, SparsePoly, Vars};

//! Discrete eigenvalues and explicit eigenfunctions of second-order
//! eigenvalue problems on the whole line whose coefficients are rational
//! functions of a heteroclinic orbit. The pipeline: endpoint asymptotics
//! and spectrum classification, complex-plane singularity analysis,
//! triangularizability of the monodromy group via the odd-integer test on
//! exponent differences, terminating-series eigenfunctions, numerical
//! monodromy, and an independent shooting oracle.

pub mod asymptotics;
pub mod eigenfunction;
pub mod error;
pub mod frobenius;
pub mod kimura;
pub mod matrix;
pub mod monodromy;
pub mod ode;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod problem;
pub mod spectra_report;

pub use error::{Error, Result};
pub use problem::{make_allen_cahn, make_hulthen, parse_problem, Family, SLProblem};

//! Library for `(n, n-2, 2)` MDS array codes over small finite fields:
//! explicit constructions meeting the optimal worst-case repair bandwidth
//! and repair I/O, exact brute-force repair-cost computation by two
//! independent methods, closed-form evaluation of the optima, and the
//! exhaustive small-field searches that certify the small-parameter cases.
//!
//! The pieces fit together as follows. [`gf`] provides arithmetic in
//! GF(p^m) for q up to 2^16; [`linalg`] provides dense matrix algebra over
//! such a field for the tiny shapes that appear here (at most 4x4).
//! [`code`] defines the array-code object itself: n parity-check blocks of
//! shape 4x2 with every pairwise 4x4 concatenation invertible. [`repair`]
//! computes the per-node optimal repair bandwidth and repair I/O exactly,
//! both by enumerating normalized repair matrices and by enumerating
//! feasible repair subspaces. [`formulas`] evaluates the closed-form
//! optima and lower bounds. [`constructions`] builds codes attaining the
//! optimum for every supported (q, n), and [`search`] re-runs the finite
//! witness and non-existence searches.
//!
//! ```
//! use mds22::constructions::{construct_optimal, Metric};
//! use mds22::{formulas, repair};
//!
//! // a 9-node code over GF(9) with the best possible worst-case repair
//! let built = construct_optimal(9, 9, Metric::Bandwidth).unwrap();
//! assert!(built.code.is_mds());
//!
//! let report = repair::cost_report(&built.code).unwrap();
//! assert_eq!(report.beta, 9);
//! assert_eq!(report.beta, formulas::beta_opt(9, 9).unwrap());
//!
//! // the witness scheme for node 0 downloads 9 symbols from 8 helpers
//! assert_eq!(report.beta_witnesses[0].bandwidth(), 9);
//! ```

pub mod code;
pub mod constructions;
pub mod formulas;
pub mod gf;
pub mod linalg;
pub mod repair;
pub mod search;

pub use code::ArrayCode;
pub use gf::FieldCtx;
pub use linalg::Mat;

//! School choice under priorities: the classic assignment mechanisms, and
//! farsighted coalition dynamics over the space of matchings.
//!
//! ```
//! use farsight_core::{fixtures, run_ttc, Matching};
//!
//! let p = fixtures::ttc_vs_da();
//! let (m, _) = run_ttc(&p);
//! assert_eq!(m.display(&p).to_string(), "i1->s1, i2->s1, i3->s2, i4->s3");
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bits;
pub mod farsight;
pub mod fixtures;
pub mod matching;
pub mod mechanisms;
pub mod paths;
pub mod problem;
pub mod welfare;

#[cfg(test)]
mod testing;

pub use farsight::{Coalition, Horizon, PathCertificate};
pub use matching::{enumerate_matchings, CapacityError, Matching};
pub use mechanisms::{run_ct, run_da, run_ettc, run_fct, run_ia, run_ttc, Mechanism, Trace};
pub use paths::{
    build_path_to_ct, build_path_to_ettc, build_path_to_fct, build_path_to_ttc, BuildError, ConstructionLog,
};
pub use problem::{Problem, RawProblem, SchoolId, StudentId};

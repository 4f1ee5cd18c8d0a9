//! Orbit statistics for power maps in finite fields and residue rings.
//!
//! * [`field`]: arithmetic in `F_{p^n}`, primitive roots, traces, dual bases.
//! * [`points`]: unit-cube point sets from power orbits.
//! * [`expsum`]: additive character sums and the Koksma-Szusz bracket.
//! * [`equidist`]: region counts, box discrepancy, boundary shells.
//! * [`arith`]: sieved arithmetic functions and their averages.
//! * [`residue`]: orbit structure of maps on `Z_ell`.
//! * [`cli`]: the `orbitlab` command-line runner.

pub mod arith;
pub mod cli;
pub mod equidist;
pub mod error;
pub mod expsum;
pub mod field;
pub mod fmt;
pub mod limits;
pub mod nt;
pub mod points;
pub mod residue;

pub use error::{Error, Result};
pub use field::{FFElem, FieldCtx};
pub use limits::Limits;
pub use points::{generate, ExponentSchedule, ScheduleKind, UnitPointSet};

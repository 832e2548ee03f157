//! Construction and verification of linear index codes for symmetric
//! side-information broadcast problems over GF(2).
//!
//! A source holds `K` messages; receiver `R_k` demands message `k` and
//! already knows a window of neighboring messages (its antidotes). This
//! crate generates optimal scalar codes for the one-sided window patterns
//! whose parameters fall into one of ten divisibility classes, extends any
//! such scalar code into an optimal vector code for the matching two-sided
//! patterns by packing message components into composite symbols, and
//! checks both decodability (span criterion, with witnesses) and optimality
//! (exact rate-versus-capacity comparison) independently of the
//! construction path. Small instances can additionally be certified by an
//! exhaustive minimum-length search.
//!
//! ```
//! use indexcode::{
//!     build_schedule, capacity, check_optimality, construct, one_sided_problem, substitute,
//!     CodeClass, ConstructionParams, Rational, SymmetricParams,
//! };
//!
//! // 16 pair symbols for 20 messages with 4 one-sided antidotes each.
//! let params = ConstructionParams::new(CodeClass::DeltaDividesK, 20, 4, None);
//! let scalar = construct(&params)?;
//! assert_eq!(scalar.len(), 16);
//!
//! // Extended twice: blocks of 3 components, same 16 symbols, rate 3/16.
//! let code = substitute(&scalar, 2)?;
//! let report = check_optimality(SymmetricParams::new(20, 2, 6)?, &code, "example")?;
//! assert!(report.optimal);
//! assert_eq!(report.rate, capacity(20, 2, 6)?);
//! assert_eq!(report.rate, Rational::new(3, 16));
//!
//! // The constructive decoder behind it: one schedule per receiver.
//! let schedule = build_schedule(&scalar, 2, &one_sided_problem(20, 4)?)?;
//! assert_eq!(schedule.steps[0].len(), 3);
//! # Ok::<(), indexcode::Error>(())
//! ```

pub mod code;
pub mod construct;
mod error;
pub mod extend;
pub mod gf2;
pub mod golden;
pub mod problem;
pub mod rational;
pub mod verify;

pub use code::{Component, LinearCode};
pub use construct::{
    applicable_classes, capacity, construct, valid_lambdas, ClassApplicability, CodeClass,
    ConstructionParams,
};
pub use error::Error;
pub use extend::{
    build_schedule, decode_with_schedule, encode, find_sum, side_info_for, substitute,
    DecodingSchedule, KnownComponents, ScheduleStep, SubstitutionMap, SumWitness, TwoSidedCodec,
};
pub use gf2::{BitMatrix, BitVec};
pub use problem::{
    extended_problem, one_sided_problem, two_sided_problem, ProblemSpec, SymmetricParams,
};
pub use rational::Rational;
pub use verify::{
    check_optimality, compare_golden, decodable, minrank_oracle, verify_against_problem,
    GoldenDiff, ReceiverCheck, VerificationReport,
};

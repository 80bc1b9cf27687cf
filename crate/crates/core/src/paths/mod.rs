//! Constructive improving paths toward the outcomes of TTC, FCT, CT and ETTC.
//!
//! Each builder replays the mechanism's trace: cycle by cycle (and clinch
//! group by clinch group) it moves the students concerned into their final
//! schools through a short sequence of enforceable moves, skipping groups
//! already in place. The result is a [`PathCertificate`] that
//! [`validate_path`](crate::farsight::validate_path) accepts.

use alloc::vec::Vec;
use core::fmt;

use crate::farsight::{MoveViolation, PathCertificate};
use crate::matching::Matching;
use crate::mechanisms::{Mechanism, Step, Trace};
use crate::problem::{Problem, StudentId};

mod builder;
mod inheritance;
mod trading;

/// The kind of move a builder made.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Phase {
    /// Clinched students join their schools.
    Clinch { round: usize },
    /// Group students leave schools outside their cycle before inserting.
    PreVacate,
    /// Cycle students join the school pointing at them.
    Insert,
    /// Cycle students leave for the outside option.
    Vacate,
    /// Cycle students join their final schools.
    Join,
    /// A student holding several seats of one cycle passes through one of them.
    Hop { student: StudentId, seats: usize },
    /// Students assigned in an inheritance step join their schools.
    Settle,
    /// Students with nothing left leave their schools.
    Unplaced,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Clinch { round } => write!(f, "clinch round {}", round + 1),
            Phase::PreVacate => f.write_str("pre-vacate"),
            Phase::Insert => f.write_str("insert"),
            Phase::Vacate => f.write_str("vacate"),
            Phase::Join => f.write_str("join"),
            Phase::Hop { student, seats } => write!(f, "hop (student {}, {} seats)", student.0 + 1, seats),
            Phase::Settle => f.write_str("settle"),
            Phase::Unplaced => f.write_str("unplaced"),
        }
    }
}

/// Bookkeeping for one emitted move.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseRecord {
    /// Index into the mechanism trace's steps.
    pub mechanism_step: usize,
    /// Running index of the cycle or clinch group, in trace order.
    pub group: usize,
    pub phase: Phase,
    /// Position of the move in the certificate.
    pub move_index: usize,
    /// Occupants sent to the outside option to make room.
    pub evicted: Vec<StudentId>,
}

/// One record per certificate move, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstructionLog {
    pub records: Vec<PhaseRecord>,
    /// Groups found already in place.
    pub groups_skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("the matching already equals the mechanism outcome")]
    Identity,
    #[error("the starting matching exceeds a quota")]
    Infeasible,
    #[error("{0} has no constructive path builder")]
    Unsupported(Mechanism),
    #[error("no enforceable move for group {group} of step {step}: {reason}")]
    Stuck { step: usize, group: usize, reason: MoveViolation },
    #[error("the construction did not reach the mechanism outcome")]
    Incomplete,
}

/// Builds an improving path from `start` to the outcome of `mechanism`,
/// with the log of how each move arose.
pub fn build_path_logged(
    p: &Problem,
    mechanism: Mechanism,
    start: &Matching,
) -> Result<(PathCertificate, ConstructionLog), BuildError> {
    if !start.is_feasible(p) {
        return Err(BuildError::Infeasible);
    }
    let (target, trace) = mechanism.run(p);
    if *start == target {
        return Err(BuildError::Identity);
    }
    match mechanism {
        Mechanism::Ttc | Mechanism::Fct | Mechanism::Ct => trading::build(p, start, target, &trace),
        Mechanism::Ettc => inheritance::build(p, start, target, &trace),
        Mechanism::Da | Mechanism::Ia => Err(BuildError::Unsupported(mechanism)),
    }
}

pub fn build_path(p: &Problem, mechanism: Mechanism, start: &Matching) -> Result<PathCertificate, BuildError> {
    build_path_logged(p, mechanism, start).map(|(c, _)| c)
}

pub fn build_path_to_ttc(p: &Problem, start: &Matching) -> Result<PathCertificate, BuildError> {
    build_path(p, Mechanism::Ttc, start)
}

pub fn build_path_to_fct(p: &Problem, start: &Matching) -> Result<PathCertificate, BuildError> {
    build_path(p, Mechanism::Fct, start)
}

pub fn build_path_to_ct(p: &Problem, start: &Matching) -> Result<PathCertificate, BuildError> {
    build_path(p, Mechanism::Ct, start)
}

pub fn build_path_to_ettc(p: &Problem, start: &Matching) -> Result<PathCertificate, BuildError> {
    build_path(p, Mechanism::Ettc, start)
}

/// Upper bound on the length of any certificate built from `trace`: three
/// moves per cycle (self-cycles included), one per clinch round, and for
/// inheritance steps two per extra seat a student holds in a cycle, one
/// settle move and one move for unplaced students; plus one.
pub fn move_bound(trace: &Trace) -> usize {
    let mut bound = 1;
    for step in &trace.steps {
        match step {
            Step::Trading(t) => bound += 3 * (t.cycles.len() + t.self_cycles.len()) + t.clinch_rounds.len(),
            Step::Inheritance(t) => {
                let hops: usize = t.cycles.iter().map(|c| 2 * (c.seats.len() - c.students().len())).sum();
                bound += 3 * t.cycles.len() + hops + 1 + usize::from(!t.unplaced.is_empty());
            }
            Step::Proposal(_) => {}
        }
    }
    bound
}

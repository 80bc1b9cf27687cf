//! Improving-path certificates and their validation.

use alloc::vec::Vec;
use core::fmt;

use super::coalition::{check_move, Coalition, MoveViolation};
use crate::matching::Matching;
use crate::problem::Problem;

/// How far ahead students look when judging a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Horizon {
    /// Students compare against the end of the path.
    Farsighted,
    /// Students compare against the matching `k` steps ahead (or the end).
    Steps(usize),
}

impl Horizon {
    /// Index of the matching that step `l` of a path of `len` steps looks at.
    pub fn reference(self, l: usize, len: usize) -> usize {
        match self {
            Horizon::Farsighted => len,
            Horizon::Steps(k) => (l + k).min(len),
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Farsighted => f.write_str("farsighted"),
            Horizon::Steps(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MoveStep {
    pub from: Matching,
    pub to: Matching,
    pub coalition: Coalition,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathCertificate {
    pub matchings: Vec<Matching>,
    pub steps: Vec<MoveStep>,
    pub horizon: Horizon,
}

impl PathCertificate {
    /// Builds the steps from consecutive matchings and their coalitions.
    pub fn from_parts(matchings: Vec<Matching>, coalitions: Vec<Coalition>, horizon: Horizon) -> PathCertificate {
        let steps = matchings
            .windows(2)
            .zip(coalitions)
            .map(|(w, coalition)| MoveStep { from: w[0].clone(), to: w[1].clone(), coalition })
            .collect();
        PathCertificate { matchings, steps, horizon }
    }

    pub fn start(&self) -> Option<&Matching> {
        self.matchings.first()
    }

    pub fn end(&self) -> Option<&Matching> {
        self.matchings.last()
    }

    /// Number of moves.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathViolation {
    #[error("a path needs at least two matchings")]
    TooShort,
    #[error("{matchings} matchings need {expected} steps, found {found}")]
    StepCount { matchings: usize, expected: usize, found: usize },
    #[error("step {step} does not connect matching {step} to matching {next}", next = step + 1)]
    Disconnected { step: usize },
    #[error("matching {index} does not fit the instance")]
    Infeasible { index: usize },
    #[error("matchings not distinct: {first} and {second} coincide")]
    Repeated { first: usize, second: usize },
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("step {step}: {violation}")]
    Step { step: usize, violation: MoveViolation },
}

impl PathViolation {
    /// The failing step, when the problem is local to one.
    pub fn step(&self) -> Option<usize> {
        match self {
            PathViolation::Disconnected { step } | PathViolation::Step { step, .. } => Some(*step),
            _ => None,
        }
    }
}

/// Checks a certificate under its own horizon.
pub fn validate(p: &Problem, cert: &PathCertificate) -> Result<(), PathViolation> {
    validate_with(p, cert, cert.horizon)
}

/// Checks a certificate with students looking to the end of the path.
pub fn validate_path(p: &Problem, cert: &PathCertificate) -> Result<(), PathViolation> {
    validate_with(p, cert, Horizon::Farsighted)
}

/// Checks a certificate with students looking `k` steps ahead.
pub fn validate_path_horizon(p: &Problem, cert: &PathCertificate, k: usize) -> Result<(), PathViolation> {
    validate_with(p, cert, Horizon::Steps(k))
}

fn validate_with(p: &Problem, cert: &PathCertificate, horizon: Horizon) -> Result<(), PathViolation> {
    if horizon == Horizon::Steps(0) {
        return Err(PathViolation::ZeroHorizon);
    }
    let ms = &cert.matchings;
    if ms.len() < 2 {
        return Err(PathViolation::TooShort);
    }
    let len = ms.len() - 1;
    if cert.steps.len() != len {
        return Err(PathViolation::StepCount { matchings: ms.len(), expected: len, found: cert.steps.len() });
    }
    if let Some(index) = ms.iter().position(|m| !m.is_feasible(p)) {
        return Err(PathViolation::Infeasible { index });
    }
    for second in 1..ms.len() {
        if let Some(first) = ms[..second].iter().position(|m| *m == ms[second]) {
            return Err(PathViolation::Repeated { first, second });
        }
    }
    for (l, step) in cert.steps.iter().enumerate() {
        if step.from != ms[l] || step.to != ms[l + 1] {
            return Err(PathViolation::Disconnected { step: l });
        }
        let reference = &ms[horizon.reference(l, len)];
        check_move(p, &step.from, &step.to, &step.coalition, reference)
            .map_err(|violation| PathViolation::Step { step: l, violation })?;
    }
    Ok(())
}

//! Matchings, the `i1->s1, i2->self` literal, and exhaustive enumeration.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::problem::{Assignment, Problem, SchoolId, StudentId, SELF_NAME};

/// Default ceiling on the number of matchings an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// Assignment of every student to a school or to herself.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matching {
    assignment: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("expected {expected} students, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("school index {0} out of range")]
    UnknownSchool(usize),
    #[error("school {school} holds {holds} students but has {quota} seats")]
    OverQuota { school: String, holds: usize, quota: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LiteralError {
    #[error("malformed term `{0}` (expected student->school or student->self)")]
    Malformed(String),
    #[error("unknown student `{0}`")]
    UnknownStudent(String),
    #[error("unknown school `{0}`")]
    UnknownSchool(String),
    #[error("student `{0}` assigned twice")]
    Duplicate(String),
    #[error("student `{0}` missing")]
    Missing(String),
    #[error(transparent)]
    Infeasible(#[from] MatchingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("matching space exceeds the cap of {cap}")]
pub struct CapacityError {
    pub cap: usize,
}

impl Matching {
    /// Everyone at the outside option.
    pub fn empty(p: &Problem) -> Matching {
        Matching { assignment: vec![None; p.num_students()] }
    }

    /// Checked constructor: length, school indices and quotas.
    pub fn new(p: &Problem, assignment: Vec<Assignment>) -> Result<Matching, MatchingError> {
        if assignment.len() != p.num_students() {
            return Err(MatchingError::WrongLength { expected: p.num_students(), found: assignment.len() });
        }
        let mut load = vec![0usize; p.num_schools()];
        for a in assignment.iter().flatten() {
            if a.0 >= p.num_schools() {
                return Err(MatchingError::UnknownSchool(a.0));
            }
            load[a.0] += 1;
        }
        for s in p.school_ids() {
            if load[s.0] > p.quota(s) {
                return Err(MatchingError::OverQuota {
                    school: p.school_name(s).into(),
                    holds: load[s.0],
                    quota: p.quota(s),
                });
            }
        }
        Ok(Matching { assignment })
    }

    pub(crate) fn from_vec(assignment: Vec<Assignment>) -> Matching {
        Matching { assignment }
    }

    pub fn get(&self, i: StudentId) -> Assignment {
        self.assignment[i.0]
    }

    pub fn assignment(&self) -> &[Assignment] {
        &self.assignment
    }

    pub(crate) fn set(&mut self, i: StudentId, a: Assignment) {
        self.assignment[i.0] = a;
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.iter().all(Option::is_none)
    }

    /// Students at `s`, in index order.
    pub fn roster(&self, s: SchoolId) -> Vec<StudentId> {
        self.assignment.iter().enumerate().filter(|(_, a)| **a == Some(s)).map(|(i, _)| StudentId(i)).collect()
    }

    pub fn load(&self, s: SchoolId) -> usize {
        self.assignment.iter().filter(|a| **a == Some(s)).count()
    }

    /// Number of students at every school.
    pub fn loads(&self, p: &Problem) -> Vec<usize> {
        let mut load = vec![0; p.num_schools()];
        for a in self.assignment.iter().flatten() {
            load[a.0] += 1;
        }
        load
    }

    pub fn is_feasible(&self, p: &Problem) -> bool {
        self.assignment.len() == p.num_students()
            && self.assignment.iter().flatten().all(|s| s.0 < p.num_schools())
            && self.loads(p).iter().zip(p.quotas()).all(|(l, q)| l <= q)
    }

    /// Renders as a matching literal.
    pub fn display<'a>(&'a self, p: &'a Problem) -> MatchingDisplay<'a> {
        MatchingDisplay { matching: self, problem: p }
    }

    /// Parse a literal such as `i1->s1, i2->self`.
    pub fn parse(p: &Problem, text: &str) -> Result<Matching, LiteralError> {
        let mut assignment: Vec<Option<Assignment>> = vec![None; p.num_students()];
        for term in text.split(',') {
            let term = term.trim();
            if term.is_empty() && text.trim().is_empty() {
                continue;
            }
            let Some((lhs, rhs)) = term.split_once("->") else {
                return Err(LiteralError::Malformed(term.into()));
            };
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if lhs.is_empty()
                || rhs.is_empty()
                || lhs.contains(char::is_whitespace)
                || rhs.contains(char::is_whitespace)
            {
                return Err(LiteralError::Malformed(term.into()));
            }
            let i = p.student_by_name(lhs).ok_or_else(|| LiteralError::UnknownStudent(lhs.into()))?;
            let a = if rhs == SELF_NAME {
                None
            } else {
                Some(p.school_by_name(rhs).ok_or_else(|| LiteralError::UnknownSchool(rhs.into()))?)
            };
            if assignment[i.0].is_some() {
                return Err(LiteralError::Duplicate(lhs.into()));
            }
            assignment[i.0] = Some(a);
        }
        let mut out = Vec::with_capacity(assignment.len());
        for (k, a) in assignment.into_iter().enumerate() {
            match a {
                Some(a) => out.push(a),
                None => return Err(LiteralError::Missing(p.student_name(StudentId(k)).into())),
            }
        }
        Ok(Matching::new(p, out)?)
    }
}

pub struct MatchingDisplay<'a> {
    matching: &'a Matching,
    problem: &'a Problem,
}

impl fmt::Display for MatchingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.matching.assignment.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            let school = match a {
                Some(s) => self.problem.school_name(*s),
                None => SELF_NAME,
            };
            write!(f, "{}->{}", self.problem.student_name(StudentId(k)), school)?;
        }
        Ok(())
    }
}

/// Every quota-respecting matching, including individually irrational
/// ones, in lexicographic order (outside option first, then schools in
/// declaration order, student by student).
pub fn enumerate_matchings(p: &Problem) -> Result<Vec<Matching>, CapacityError> {
    enumerate_matchings_capped(p, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_matchings_capped(p: &Problem, cap: usize) -> Result<Vec<Matching>, CapacityError> {
    let mut out = Vec::new();
    let mut current = vec![None; p.num_students()];
    let mut room: Vec<usize> = p.quotas().to_vec();
    extend(p, 0, &mut current, &mut room, &mut out, cap)?;
    Ok(out)
}

fn extend(
    p: &Problem,
    k: usize,
    current: &mut Vec<Assignment>,
    room: &mut Vec<usize>,
    out: &mut Vec<Matching>,
    cap: usize,
) -> Result<(), CapacityError> {
    if k == current.len() {
        if out.len() == cap {
            return Err(CapacityError { cap });
        }
        out.push(Matching::from_vec(current.clone()));
        return Ok(());
    }
    current[k] = None;
    extend(p, k + 1, current, room, out, cap)?;
    for s in p.school_ids() {
        if room[s.0] > 0 {
            room[s.0] -= 1;
            current[k] = Some(s);
            extend(p, k + 1, current, room, out, cap)?;
            room[s.0] += 1;
        }
    }
    current[k] = None;
    Ok(())
}

//! Coalitions and the conditions under which they can carry out a move.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::matching::Matching;
use crate::problem::{Problem, SchoolId, StudentId};

/// Students and schools acting together in one move. Both lists are kept
/// sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coalition {
    pub students: Vec<StudentId>,
    pub schools: Vec<SchoolId>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoalitionParseError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("empty coalition")]
    Empty,
}

impl Coalition {
    pub fn new(mut students: Vec<StudentId>, mut schools: Vec<SchoolId>) -> Coalition {
        students.sort();
        students.dedup();
        schools.sort();
        schools.dedup();
        Coalition { students, schools }
    }

    pub fn is_empty(&self) -> bool {
        self.students.is_empty() && self.schools.is_empty()
    }

    pub fn contains_student(&self, i: StudentId) -> bool {
        self.students.binary_search(&i).is_ok()
    }

    pub fn contains_school(&self, s: SchoolId) -> bool {
        self.schools.binary_search(&s).is_ok()
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        let mut students = self.students.clone();
        students.extend_from_slice(&other.students);
        let mut schools = self.schools.clone();
        schools.extend_from_slice(&other.schools);
        Coalition::new(students, schools)
    }

    /// Whitespace-separated agent names, e.g. `i2 i3 s1 s2`.
    pub fn parse(p: &Problem, text: &str) -> Result<Coalition, CoalitionParseError> {
        let mut students = Vec::new();
        let mut schools = Vec::new();
        for name in text.split(|c: char| c.is_whitespace() || c == ',') {
            if name.is_empty() {
                continue;
            }
            if let Some(i) = p.student_by_name(name) {
                students.push(i);
            } else if let Some(s) = p.school_by_name(name) {
                schools.push(s);
            } else {
                return Err(CoalitionParseError::UnknownAgent(name.into()));
            }
        }
        let c = Coalition::new(students, schools);
        if c.is_empty() {
            return Err(CoalitionParseError::Empty);
        }
        Ok(c)
    }

    /// Students first, then schools, separated by spaces.
    pub fn display<'a>(&'a self, p: &'a Problem) -> CoalitionDisplay<'a> {
        CoalitionDisplay { coalition: self, problem: p }
    }
}

pub struct CoalitionDisplay<'a> {
    coalition: &'a Coalition,
    problem: &'a Problem,
}

impl fmt::Display for CoalitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self
            .coalition
            .students
            .iter()
            .map(|&i| self.problem.student_name(i))
            .chain(self.coalition.schools.iter().map(|&s| self.problem.school_name(s)));
        for (k, name) in names.enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

/// Who changes between two matchings.
#[derive(Clone, Debug, Default)]
pub(crate) struct Delta {
    /// Students whose assignment differs.
    pub(crate) students: Vec<StudentId>,
    /// Schools that take in at least one new student, with those students.
    pub(crate) gaining: Vec<(SchoolId, Vec<StudentId>)>,
    /// Schools that only lose students, with the leavers.
    pub(crate) shrinking: Vec<(SchoolId, Vec<StudentId>)>,
}

impl Delta {
    pub(crate) fn between(p: &Problem, a: &Matching, b: &Matching) -> Delta {
        let mut joiners = vec![Vec::new(); p.num_schools()];
        let mut leavers = vec![Vec::new(); p.num_schools()];
        let mut students = Vec::new();
        for i in p.student_ids() {
            let (x, y) = (a.get(i), b.get(i));
            if x == y {
                continue;
            }
            students.push(i);
            if let Some(s) = x {
                leavers[s.0].push(i);
            }
            if let Some(s) = y {
                joiners[s.0].push(i);
            }
        }
        let mut gaining = Vec::new();
        let mut shrinking = Vec::new();
        for (s, (j, l)) in joiners.into_iter().zip(leavers).enumerate() {
            if !j.is_empty() {
                gaining.push((SchoolId(s), j));
            } else if !l.is_empty() {
                shrinking.push((SchoolId(s), l));
            }
        }
        Delta { students, gaining, shrinking }
    }

    pub(crate) fn is_changed_student(&self, i: StudentId) -> bool {
        self.students.binary_search(&i).is_ok()
    }

    pub(crate) fn is_changed_school(&self, s: SchoolId) -> bool {
        self.gaining.iter().chain(&self.shrinking).any(|(x, _)| *x == s)
    }
}

/// Why a coalition cannot carry out a move.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveViolation {
    #[error("the move leaves the matching unchanged")]
    Identical,
    #[error("the resulting matching exceeds a quota")]
    Infeasible,
    #[error("the coalition is empty")]
    EmptyCoalition,
    #[error("coalition member {0} is unaffected by the move")]
    Unchanged(String),
    #[error("the coalition contains no student")]
    NoStudent,
    #[error("school {0} admits new students but is not in the coalition")]
    MissingSchool(String),
    #[error("student {0} joins a school but is not in the coalition")]
    MissingJoiner(String),
    #[error("school {0} loses students but neither it nor all of its leavers are in the coalition")]
    UncoveredDeparture(String),
    #[error("student {0} does not weakly prefer the reference matching")]
    WorseOff(String),
    #[error("no coalition student strictly prefers the reference matching")]
    NoStrictImprover,
    #[error("school {0} would replace students by lower-priority ones")]
    SchoolRejects(String),
}

/// Rejects coalitions holding agents the move leaves untouched.
fn check_restriction(p: &Problem, delta: &Delta, n: &Coalition) -> Result<(), MoveViolation> {
    if let Some(&i) = n.students.iter().find(|&&i| !delta.is_changed_student(i)) {
        return Err(MoveViolation::Unchanged(p.student_name(i).into()));
    }
    if let Some(&s) = n.schools.iter().find(|&&s| !delta.is_changed_school(s)) {
        return Err(MoveViolation::Unchanged(p.school_name(s).into()));
    }
    Ok(())
}

/// The membership conditions for carrying out a move, without preferences.
fn check_membership(p: &Problem, delta: &Delta, n: &Coalition) -> Result<(), MoveViolation> {
    for (s, joiners) in &delta.gaining {
        if !n.contains_school(*s) {
            return Err(MoveViolation::MissingSchool(p.school_name(*s).into()));
        }
        if let Some(&i) = joiners.iter().find(|&&i| !n.contains_student(i)) {
            return Err(MoveViolation::MissingJoiner(p.student_name(i).into()));
        }
    }
    for (s, leavers) in &delta.shrinking {
        if !n.contains_school(*s) && !leavers.iter().all(|&i| n.contains_student(i)) {
            return Err(MoveViolation::UncoveredDeparture(p.school_name(*s).into()));
        }
    }
    Ok(())
}

/// Can `n` turn `a` into `b`? Errors when `a == b` or when `n` holds an
/// agent whose assignment or roster is the same in both matchings.
pub fn can_enforce(p: &Problem, a: &Matching, b: &Matching, n: &Coalition) -> Result<bool, MoveViolation> {
    if a == b {
        return Err(MoveViolation::Identical);
    }
    if !a.is_feasible(p) || !b.is_feasible(p) {
        return Err(MoveViolation::Infeasible);
    }
    if n.is_empty() {
        return Err(MoveViolation::EmptyCoalition);
    }
    let delta = Delta::between(p, a, b);
    check_restriction(p, &delta, n)?;
    Ok(check_membership(p, &delta, n).is_ok())
}

/// A school taking in new students while full must trade each departing
/// student for a distinct newcomer of higher priority.
pub fn school_move_admissible(p: &Problem, s: SchoolId, a: &Matching, b: &Matching) -> bool {
    let before = a.roster(s);
    let after = b.roster(s);
    let mut joiners: Vec<StudentId> = after.iter().copied().filter(|i| !before.contains(i)).collect();
    let mut leavers: Vec<StudentId> = before.iter().copied().filter(|i| !after.contains(i)).collect();
    admissible(p, s, before.len(), &mut joiners, &mut leavers)
}

fn admissible(p: &Problem, s: SchoolId, held: usize, joiners: &mut [StudentId], leavers: &mut [StudentId]) -> bool {
    if held + joiners.len() <= p.quota(s) {
        return true;
    }
    if joiners.len() < leavers.len() {
        return false;
    }
    joiners.sort_by_key(|&i| p.priority_rank(s, i));
    leavers.sort_by_key(|&i| p.priority_rank(s, i));
    joiners.iter().zip(leavers.iter()).all(|(&j, &l)| p.outranks(s, j, l))
}

pub(crate) fn gaining_admissible(p: &Problem, a: &Matching, delta: &Delta, s: SchoolId, joiners: &[StudentId]) -> bool {
    let mut joiners = joiners.to_vec();
    let mut leavers: Vec<StudentId> = delta.students.iter().copied().filter(|&i| a.get(i) == Some(s)).collect();
    admissible(p, s, a.load(s), &mut joiners, &mut leavers)
}

/// Full check of one step of an improving path: `n` moves the market from
/// `a` to `b` while its students look ahead to `reference`.
pub fn check_move(
    p: &Problem,
    a: &Matching,
    b: &Matching,
    n: &Coalition,
    reference: &Matching,
) -> Result<(), MoveViolation> {
    if a == b {
        return Err(MoveViolation::Identical);
    }
    if !b.is_feasible(p) {
        return Err(MoveViolation::Infeasible);
    }
    if n.is_empty() {
        return Err(MoveViolation::EmptyCoalition);
    }
    let delta = Delta::between(p, a, b);
    check_restriction(p, &delta, n)?;
    if n.students.is_empty() {
        return Err(MoveViolation::NoStudent);
    }
    check_membership(p, &delta, n)?;
    for &i in &n.students {
        if !p.weakly_prefers(i, reference.get(i), a.get(i)) {
            return Err(MoveViolation::WorseOff(p.student_name(i).into()));
        }
    }
    if !n.students.iter().any(|&i| p.prefers(i, reference.get(i), a.get(i))) {
        return Err(MoveViolation::NoStrictImprover);
    }
    for (s, joiners) in &delta.gaining {
        if !gaining_admissible(p, a, &delta, *s, joiners) {
            return Err(MoveViolation::SchoolRejects(p.school_name(*s).into()));
        }
    }
    Ok(())
}

/// A coalition that can carry out the move from `a` to `b` as a step of an
/// improving path whose students look ahead to `reference`, if one exists.
///
/// Joiners and gaining schools are always members. A school that only
/// loses students is covered by its leavers when they all weakly gain,
/// and by itself otherwise. If nobody in the coalition strictly gains yet,
/// a departing student who does is added.
pub fn find_enforcing_coalition(p: &Problem, a: &Matching, b: &Matching, reference: &Matching) -> Option<Coalition> {
    if a == b || !a.is_feasible(p) || !b.is_feasible(p) {
        return None;
    }
    let delta = Delta::between(p, a, b);
    let weak = |i: StudentId| p.weakly_prefers(i, reference.get(i), a.get(i));
    let strict = |i: StudentId| p.prefers(i, reference.get(i), a.get(i));

    let mut students = Vec::new();
    let mut schools = Vec::new();
    for (s, joiners) in &delta.gaining {
        if !joiners.iter().all(|&i| weak(i)) || !gaining_admissible(p, a, &delta, *s, joiners) {
            return None;
        }
        schools.push(*s);
        students.extend_from_slice(joiners);
    }
    for (s, leavers) in &delta.shrinking {
        if leavers.iter().all(|&i| weak(i)) {
            students.extend_from_slice(leavers);
        } else {
            schools.push(*s);
        }
    }
    if !students.iter().any(|&i| strict(i)) {
        students.push(delta.students.iter().copied().find(|&i| strict(i))?);
    }
    Some(Coalition::new(students, schools))
}

//! Stability and efficiency predicates.

use alloc::vec::Vec;

use crate::matching::{enumerate_matchings, CapacityError, Matching};
use crate::problem::{Problem, SchoolId, StudentId};

/// `student` prefers `school`, where `rival` holds a seat with lower priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Envy {
    pub student: StudentId,
    pub rival: StudentId,
    pub school: SchoolId,
}

/// Every matched student finds her school acceptable.
pub fn is_individually_rational(p: &Problem, m: &Matching) -> bool {
    p.student_ids().all(|i| match m.get(i) {
        None => true,
        Some(s) => p.is_acceptable(i, s),
    })
}

/// Pairs (student, school) where the student prefers a school with a free seat.
pub fn waste(p: &Problem, m: &Matching) -> Vec<(StudentId, SchoolId)> {
    let loads = m.loads(p);
    let mut out = Vec::new();
    for i in p.student_ids() {
        for s in p.school_ids() {
            if loads[s.0] < p.quota(s) && p.prefers(i, Some(s), m.get(i)) {
                out.push((i, s));
            }
        }
    }
    out
}

pub fn is_non_wasteful(p: &Problem, m: &Matching) -> bool {
    waste(p, m).is_empty()
}

/// All justified-envy witnesses.
pub fn justified_envy(p: &Problem, m: &Matching) -> Vec<Envy> {
    let mut out = Vec::new();
    for i in p.student_ids() {
        for j in p.student_ids() {
            let Some(s) = m.get(j) else { continue };
            if i != j && p.prefers(i, Some(s), m.get(i)) && p.outranks(s, i, j) {
                out.push(Envy { student: i, rival: j, school: s });
            }
        }
    }
    out
}

pub fn has_no_justified_envy(p: &Problem, m: &Matching) -> bool {
    justified_envy(p, m).is_empty()
}

pub fn is_stable(p: &Problem, m: &Matching) -> bool {
    is_individually_rational(p, m) && is_non_wasteful(p, m) && has_no_justified_envy(p, m)
}

/// Every student weakly prefers `a` to `b` and someone strictly.
pub fn pareto_dominates(p: &Problem, a: &Matching, b: &Matching) -> bool {
    let mut strict = false;
    for i in p.student_ids() {
        if p.prefers(i, b.get(i), a.get(i)) {
            return false;
        }
        strict |= p.prefers(i, a.get(i), b.get(i));
    }
    strict
}

/// A matching that Pareto dominates `m`, if any, from the full matching space.
pub fn pareto_improvement(p: &Problem, m: &Matching) -> Result<Option<Matching>, CapacityError> {
    Ok(enumerate_matchings(p)?.into_iter().find(|x| pareto_dominates(p, x, m)))
}

pub fn is_pareto_efficient(p: &Problem, m: &Matching) -> Result<bool, CapacityError> {
    Ok(pareto_improvement(p, m)?.is_none())
}

/// Same as [`is_pareto_efficient`] against a precomputed matching space.
pub fn is_pareto_efficient_in(p: &Problem, m: &Matching, space: &[Matching]) -> bool {
    !space.iter().any(|x| pareto_dominates(p, x, m))
}

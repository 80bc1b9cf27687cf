use alloc::vec;
use alloc::vec::Vec;

use super::builder::{Builder, Change, Group, Stage};
use super::{BuildError, ConstructionLog, Phase};
use crate::farsight::PathCertificate;
use crate::matching::Matching;
use crate::mechanisms::{SeatCycle, Step, Trace};
use crate::problem::{Problem, SchoolId, StudentId};

enum Kind<'t> {
    Unplaced,
    Cycle(&'t SeatCycle),
    Settle(Vec<Change>),
}

pub(super) fn build(
    p: &Problem,
    start: &Matching,
    target: Matching,
    trace: &Trace,
) -> Result<(PathCertificate, ConstructionLog), BuildError> {
    let mut groups = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let Step::Inheritance(step) = step else { continue };
        if !step.unplaced.is_empty() {
            groups.push(Group { step: k, students: step.unplaced.clone(), fix: true, kind: Kind::Unplaced });
        }
        for c in &step.cycles {
            groups.push(Group { step: k, students: c.students(), fix: false, kind: Kind::Cycle(c) });
        }
        let students = step.assigned.iter().map(|a| a.0).collect();
        let settle = step.assigned.iter().map(|&(i, s)| (i, Some(s))).collect();
        groups.push(Group { step: k, students, fix: true, kind: Kind::Settle(settle) });
    }
    let mut b = Builder::new(p, start, target);
    b.solve(&groups, |b, g| match &g.kind {
        Kind::Unplaced => vec![vec![(g.students.iter().map(|&i| (i, None)).collect(), Phase::Unplaced)]],
        Kind::Cycle(c) => cycle_strategies(b, c),
        Kind::Settle(settle) => {
            let leave: Vec<Change> = settle
                .iter()
                .filter(|&&(i, a)| b.current().get(i).is_some() && b.current().get(i) != a)
                .map(|&(i, _)| (i, None))
                .collect();
            vec![vec![(settle.clone(), Phase::Settle)], vec![(leave, Phase::Vacate), (settle.clone(), Phase::Settle)]]
        }
    })?;
    b.finish()
}

/// Schools of `i`'s seats in the cycle, ascending.
fn seat_schools(c: &SeatCycle, i: StudentId) -> Vec<SchoolId> {
    let mut out: Vec<SchoolId> = c.seats.iter().filter(|s| s.student == i).map(|s| s.school).collect();
    out.sort();
    out
}

/// Largest number of in-place students whose subsets a cycle tries leaving out.
const MAX_SUBSET_BITS: usize = 6;

fn cycle_strategies(b: &Builder<'_>, c: &SeatCycle) -> Vec<Vec<Stage>> {
    let schools: Vec<(StudentId, Vec<SchoolId>)> = c.students().into_iter().map(|i| (i, seat_schools(c, i))).collect();
    let placed: Vec<StudentId> =
        schools.iter().map(|e| e.0).filter(|&i| b.current().get(i) == b.target().get(i)).collect();
    let mut subsets: Vec<usize> = if placed.len() <= MAX_SUBSET_BITS {
        (0..1usize << placed.len()).collect()
    } else {
        vec![0, (1usize << MAX_SUBSET_BITS) - 1]
    };
    subsets.sort_by_key(|m| m.count_ones());
    let mut out = Vec::new();
    for with_hops in [true, false] {
        for &mask in &subsets {
            let kept: Vec<(StudentId, Vec<SchoolId>)> = schools
                .iter()
                .filter(|(i, _)| placed.iter().position(|j| j == i).is_none_or(|k| mask & (1 << k) == 0))
                .cloned()
                .collect();
            out.extend(variants(b, &kept, with_hops));
        }
    }
    out.push(Vec::new());
    out
}

/// Insert, vacate and hop sequences for the given students and their seat schools.
fn variants(b: &Builder<'_>, schools: &[(StudentId, Vec<SchoolId>)], with_hops: bool) -> Vec<Vec<Stage>> {
    let target = b.target();
    let insert: Vec<Change> = schools.iter().map(|(i, ss)| (*i, Some(ss[0]))).collect();
    let vacate: Vec<Change> = schools
        .iter()
        .filter(|(i, ss)| !(ss.len() == 1 && target.get(*i) == Some(ss[0])))
        .map(|(i, _)| (*i, None))
        .collect();
    let mut hops = Vec::new();
    for (i, ss) in schools.iter().filter(|_| with_hops) {
        if ss.len() < 2 {
            continue;
        }
        let mut rest: Vec<SchoolId> = ss[1..].to_vec();
        if let Some(k) = rest.iter().position(|&s| target.get(*i) == Some(s)) {
            let t = rest.remove(k);
            rest.push(t);
        }
        let phase = Phase::Hop { student: *i, seats: ss.len() };
        for s in rest {
            hops.push((vec![(*i, Some(s))], phase));
            if target.get(*i) != Some(s) {
                hops.push((vec![(*i, None)], phase));
            }
        }
    }
    let off_cycle: Vec<Change> = schools
        .iter()
        .filter(|(i, ss)| b.current().get(*i).is_some_and(|s| !ss.contains(&s)))
        .map(|(i, _)| (*i, None))
        .collect();
    let leaving = |i: StudentId| vacate.iter().any(|v| v.0 == i);
    let seated: Vec<Change> =
        insert.iter().map(|&(i, a)| if b.current().get(i) == a && leaving(i) { (i, None) } else { (i, a) }).collect();
    let sequences = [
        vec![(insert.clone(), Phase::Insert), (vacate.clone(), Phase::Vacate)],
        vec![(seated, Phase::Insert), (vacate.clone(), Phase::Vacate)],
        vec![(off_cycle, Phase::PreVacate), (insert, Phase::Insert), (vacate.clone(), Phase::Vacate)],
        vec![(vacate, Phase::Vacate)],
    ];
    sequences
        .into_iter()
        .map(|mut stages| {
            stages.extend(hops.iter().cloned());
            stages
        })
        .collect()
}

use alloc::vec;
use alloc::vec::Vec;

use super::builder::{Builder, Change, Group, Stage};
use super::{BuildError, ConstructionLog, Phase};
use crate::farsight::PathCertificate;
use crate::matching::Matching;
use crate::mechanisms::{Cycle, Step, Trace};
use crate::problem::{Assignment, Problem, SchoolId, StudentId};

enum Kind<'t> {
    Clinch { round: usize, joins: Vec<Change> },
    Cycle(&'t Cycle),
    SelfCycle(StudentId),
}

pub(super) fn build(
    p: &Problem,
    start: &Matching,
    target: Matching,
    trace: &Trace,
) -> Result<(PathCertificate, ConstructionLog), BuildError> {
    let mut groups = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let Step::Trading(step) = step else { continue };
        for (round, r) in step.clinch_rounds.iter().enumerate() {
            let students = r.clinched.iter().map(|c| c.0).collect();
            let joins = r.clinched.iter().map(|&(i, s)| (i, Some(s))).collect();
            groups.push(Group { step: k, students, fix: true, kind: Kind::Clinch { round, joins } });
        }
        for c in &step.cycles {
            groups.push(Group { step: k, students: c.students().collect(), fix: true, kind: Kind::Cycle(c) });
        }
        for &i in &step.self_cycles {
            groups.push(Group { step: k, students: vec![i], fix: true, kind: Kind::SelfCycle(i) });
        }
    }
    let mut b = Builder::new(p, start, target);
    b.solve(&groups, |b, g| match &g.kind {
        Kind::Clinch { round, joins } => {
            let phase = Phase::Clinch { round: *round };
            vec![vec![(joins.clone(), phase)], vec![(pre_vacate(b, joins), Phase::PreVacate), (joins.clone(), phase)]]
        }
        Kind::Cycle(c) => cycle_strategies(b, c),
        Kind::SelfCycle(i) => vec![vec![(vec![(*i, None)], Phase::Vacate)]],
    })?;
    b.finish()
}

/// Sends matched students not already where `changes` puts them to the outside option.
fn pre_vacate(b: &Builder<'_>, changes: &[Change]) -> Vec<Change> {
    changes
        .iter()
        .filter(|&&(i, a)| b.current().get(i).is_some() && b.current().get(i) != a)
        .map(|&(i, _)| (i, None))
        .collect()
}

fn cycle_strategies(b: &Builder<'_>, c: &Cycle) -> Vec<Vec<Stage>> {
    let links: Vec<Link> = c.students().map(|i| (i, c.pointer_of(i), c.target_of(i))).collect();
    let placed: Vec<StudentId> =
        links.iter().map(|l| l.0).filter(|&i| b.current().get(i) == l_target(&links, i)).collect();
    let mut subsets: Vec<usize> = if placed.len() <= MAX_SUBSET_BITS {
        (0..1usize << placed.len()).collect()
    } else {
        vec![0, (1usize << MAX_SUBSET_BITS) - 1]
    };
    subsets.sort_by_key(|m| m.count_ones());
    let kept = |mask: usize| -> Vec<Link> {
        links
            .iter()
            .filter(|l| placed.iter().position(|&j| j == l.0).is_none_or(|k| mask & (1 << k) == 0))
            .copied()
            .collect()
    };
    let mut short = Vec::new();
    let mut long = Vec::new();
    for &mask in &subsets {
        let (s, l) = sequences(b, &kept(mask));
        short.extend(s);
        long.push(l);
    }
    let students: Vec<StudentId> = links.iter().map(|l| l.0).collect();
    if !short.iter().any(|s| b.feasible(s, &students)) {
        let goal: Vec<Change> = links.iter().map(|&(i, _, to)| (i, to)).collect();
        let options: Vec<Vec<Assignment>> = links
            .iter()
            .map(|&(i, from, to)| {
                let mut o = vec![to, from, None, b.current().get(i)];
                o.dedup();
                o.sort();
                o.dedup();
                o
            })
            .collect();
        short.extend(b.shortest_moves(&goal, &options, &students, SEARCH_MOVES));
    }
    short.extend(long);
    short
}

/// Longest move sequence the per-cycle search looks for.
const SEARCH_MOVES: usize = 3;

/// Largest number of in-place students whose subsets a cycle tries leaving out.
const MAX_SUBSET_BITS: usize = 6;

/// A cycle student with the school pointing at her and the school she points to.
type Link = (StudentId, Option<SchoolId>, Option<SchoolId>);

fn l_target(links: &[Link], i: StudentId) -> Option<SchoolId> {
    links.iter().find(|l| l.0 == i).and_then(|l| l.2)
}

/// Move sequences of at most three moves, and the four-move sequence with a pre-vacate.
fn sequences(b: &Builder<'_>, links: &[Link]) -> (Vec<Vec<Stage>>, Vec<Stage>) {
    let insert: Vec<Change> = links.iter().map(|&(i, from, _)| (i, from)).collect();
    let vacate: Vec<Change> = links.iter().filter(|l| l.1 != l.2).map(|&(i, _, _)| (i, None)).collect();
    let join: Vec<Change> = links.iter().map(|&(i, _, to)| (i, to)).collect();
    let off_cycle: Vec<Change> = links
        .iter()
        .filter(|&&(i, from, to)| {
            let a = b.current().get(i);
            a.is_some() && a != from && a != to
        })
        .map(|&(i, _, _)| (i, None))
        .collect();
    let leave_all = pre_vacate(b, &join);
    let seated: Vec<Change> = links
        .iter()
        .map(|&(i, from, to)| if b.current().get(i) == from && from != to { (i, None) } else { (i, from) })
        .collect();
    let short = vec![
        vec![(insert.clone(), Phase::Insert), (vacate.clone(), Phase::Vacate), (join.clone(), Phase::Join)],
        vec![(seated, Phase::Insert), (vacate.clone(), Phase::Vacate), (join.clone(), Phase::Join)],
        vec![(leave_all, Phase::Vacate), (join.clone(), Phase::Join)],
        vec![(join.clone(), Phase::Join)],
    ];
    let long =
        vec![(off_cycle, Phase::PreVacate), (insert, Phase::Insert), (vacate, Phase::Vacate), (join, Phase::Join)];
    (short, long)
}

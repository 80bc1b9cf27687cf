use alloc::vec;
use alloc::vec::Vec;

use super::{Mechanism, ProposalRound, Step, Trace};
use crate::matching::Matching;
use crate::problem::{Problem, SchoolId, StudentId};

/// Student-proposing deferred acceptance.
pub fn run_da(p: &Problem) -> Matching {
    run_da_traced(p).0
}

pub fn run_da_traced(p: &Problem) -> (Matching, Trace) {
    let n = p.num_students();
    let mut next = vec![0usize; n];
    let mut held: Vec<Vec<StudentId>> = vec![Vec::new(); p.num_schools()];
    let mut free: Vec<StudentId> = p.student_ids().collect();
    let mut steps = Vec::new();
    while !free.is_empty() {
        let mut round = ProposalRound::default();
        for &i in &free {
            match p.preference(i).get(next[i.0]) {
                Some(&s) => {
                    next[i.0] += 1;
                    round.proposals.push((i, s));
                    held[s.0].push(i);
                }
                None => round.exhausted.push(i),
            }
        }
        for s in p.school_ids() {
            let list = &mut held[s.0];
            list.sort_by_key(|&i| p.priority_rank(s, i));
            if list.len() > p.quota(s) {
                round.rejected.extend(list.drain(p.quota(s)..));
            }
        }
        round.rejected.sort();
        free = round.rejected.clone();
        steps.push(Step::Proposal(round));
    }
    let mut assignment = vec![None; n];
    for s in p.school_ids() {
        for &i in &held[s.0] {
            assignment[i.0] = Some(s);
        }
    }
    (Matching::from_vec(assignment), Trace { mechanism: Mechanism::Da, steps })
}

/// Immediate acceptance: in round r each unassigned student applies to
/// her r-th acceptable school, which admits applicants for good by
/// priority while seats remain.
pub fn run_ia(p: &Problem) -> Matching {
    run_ia_traced(p).0
}

pub fn run_ia_traced(p: &Problem) -> (Matching, Trace) {
    let mut assignment = vec![None; p.num_students()];
    let mut room = p.quotas().to_vec();
    let mut waiting: Vec<StudentId> = p.student_ids().collect();
    let mut steps = Vec::new();
    let mut r = 0;
    while !waiting.is_empty() {
        let mut round = ProposalRound::default();
        let mut applicants: Vec<Vec<StudentId>> = vec![Vec::new(); p.num_schools()];
        for &i in &waiting {
            match p.preference(i).get(r) {
                Some(&s) => {
                    round.proposals.push((i, s));
                    applicants[s.0].push(i);
                }
                None => round.exhausted.push(i),
            }
        }
        let mut admitted = Vec::new();
        for (k, list) in applicants.iter_mut().enumerate() {
            let s = SchoolId(k);
            list.sort_by_key(|&i| p.priority_rank(s, i));
            let take = room[k].min(list.len());
            for &i in &list[..take] {
                assignment[i.0] = Some(s);
                admitted.push(i);
            }
            room[k] -= take;
            round.rejected.extend_from_slice(&list[take..]);
        }
        round.rejected.sort();
        waiting.retain(|i| !admitted.contains(i) && !round.exhausted.contains(i));
        steps.push(Step::Proposal(round));
        r += 1;
    }
    (Matching::from_vec(assignment), Trace { mechanism: Mechanism::Ia, steps })
}

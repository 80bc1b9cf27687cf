use alloc::vec;
use alloc::vec::Vec;

use super::{InheritanceStep, Mechanism, Seat, SeatCycle, Step, Trace};
use crate::matching::Matching;
use crate::problem::{Problem, StudentId};

/// Equitable top trading cycles.
///
/// Each step hands every remaining seat of a school to its highest
/// priority remaining students (a school with `q` seats left forms `q`
/// seats). A seat `(i, s)` points to the seat at `i`'s best school with
/// seats left whose holder has the highest priority at `s`. Students in a
/// cycle take the school their seats point to; seats not traded go back
/// to the pool for the next step. Students with no acceptable school
/// left leave unassigned before seats are handed out.
pub fn run_ettc(p: &Problem) -> (Matching, Trace) {
    let n = p.num_students();
    let mut matching = Matching::empty(p);
    let mut capacities = p.quotas().to_vec();
    let mut remaining: Vec<StudentId> = p.student_ids().collect();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let mut step = InheritanceStep { capacities: capacities.clone(), ..InheritanceStep::default() };
        let mut target = vec![None; n];
        for &i in &remaining {
            target[i.0] = p.best_school(i, |s| capacities[s.0] > 0);
            if target[i.0].is_none() {
                step.unplaced.push(i);
            }
        }
        remaining.retain(|i| target[i.0].is_some());
        let mut active = vec![false; n];
        for &i in &remaining {
            active[i.0] = true;
        }
        for s in p.school_ids() {
            let holders = p.priority(s).iter().filter(|i| active[i.0]).take(capacities[s.0]);
            step.seats.extend(holders.map(|&i| Seat { student: i, school: s }));
        }
        let points: Vec<usize> = step
            .seats
            .iter()
            .map(|seat| {
                let t = target[seat.student.0];
                (0..step.seats.len())
                    .filter(|&k| Some(step.seats[k].school) == t)
                    .min_by_key(|&k| p.priority_rank(seat.school, step.seats[k].student))
                    .unwrap_or(0)
            })
            .collect();

        let mut state = vec![0u8; step.seats.len()];
        for start in 0..step.seats.len() {
            let mut path = Vec::new();
            let mut k = start;
            while state[k] == 0 {
                state[k] = 1;
                path.push(k);
                k = points[k];
            }
            if state[k] == 1 {
                let from = path.iter().position(|&x| x == k).unwrap_or(0);
                let seats = path[from..].iter().map(|&x| step.seats[x]).collect();
                step.cycles.push(SeatCycle { seats });
            }
            for x in path {
                state[x] = 2;
            }
        }

        let mut in_cycle = vec![false; n];
        for c in &step.cycles {
            for seat in &c.seats {
                in_cycle[seat.student.0] = true;
            }
        }
        for &i in &remaining {
            if in_cycle[i.0] {
                let s = target[i.0].unwrap_or_else(|| unreachable!());
                step.assigned.push((i, s));
                matching.set(i, Some(s));
                capacities[s.0] -= 1;
            }
        }
        step.assigned.sort();
        remaining.retain(|i| !in_cycle[i.0]);
        steps.push(Step::Inheritance(step));
    }
    debug_assert!(matching.is_feasible(p));
    (matching, Trace { mechanism: Mechanism::Ettc, steps })
}

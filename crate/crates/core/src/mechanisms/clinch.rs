use alloc::vec;
use alloc::vec::Vec;

use super::{trading_round, ClinchRound, Mechanism, Step, Trace, TradingStep};
use crate::matching::Matching;
use crate::problem::{Problem, SchoolId, StudentId};

fn top_k(p: &Problem, s: SchoolId, k: usize, keep: impl Fn(StudentId) -> bool) -> Vec<StudentId> {
    p.priority(s).iter().copied().filter(|&i| keep(i)).take(k).collect()
}

fn settle_cycles(
    step: &TradingStep,
    matching: &mut Matching,
    capacities: &mut [usize],
    remaining: &mut Vec<StudentId>,
) {
    for c in &step.cycles {
        for (i, s) in c.matches() {
            matching.set(i, Some(s));
            capacities[s.0] -= 1;
        }
    }
    remaining.retain(|i| !step.self_cycles.contains(i) && !step.cycles.iter().any(|c| c.students().any(|x| x == *i)));
}

/// First clinch and trade. A student is guaranteed a school when she is
/// among its `q_s` highest-priority students; guarantees are fixed once.
/// Each step clinches every student pointing at a school that guarantees
/// her, then runs one trading round among the others. Schools point over
/// all students present at the start of the step, so a school whose top
/// student has just clinched sits the round out.
pub fn run_fct(p: &Problem) -> (Matching, Trace) {
    let n = p.num_students();
    let guarantees: Vec<Vec<StudentId>> = p.school_ids().map(|s| top_k(p, s, p.quota(s), |_| true)).collect();
    let mut matching = Matching::empty(p);
    let mut capacities = p.quotas().to_vec();
    let mut remaining: Vec<StudentId> = p.student_ids().collect();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let mut step = TradingStep { capacities: capacities.clone(), ..TradingStep::default() };
        let mut round = ClinchRound { guarantees: guarantees.clone(), clinched: Vec::new() };
        for &i in &remaining {
            if let Some(s) = p.best_school(i, |s| capacities[s.0] > 0) {
                if guarantees[s.0].contains(&i) {
                    round.clinched.push((i, s));
                }
            }
        }
        let mut clinched = vec![false; n];
        for &(i, s) in &round.clinched {
            debug_assert!(capacities[s.0] > 0);
            capacities[s.0] -= 1;
            matching.set(i, Some(s));
            clinched[i.0] = true;
        }
        let traders: Vec<StudentId> = remaining.iter().copied().filter(|i| !clinched[i.0]).collect();
        let pointing = trading_round(p, &traders, &remaining, &capacities);
        step.clinch_rounds.push(round);
        step.cycles = pointing.cycles;
        step.self_cycles = pointing.self_cycles;
        remaining = traders;
        settle_cycles(&step, &mut matching, &mut capacities, &mut remaining);
        steps.push(Step::Trading(step));
    }
    (matching, Trace { mechanism: Mechanism::Fct, steps })
}

/// Clinch and trade. Each step repeats clinching rounds until one
/// clinches nobody: a student pointing at her first choice clinches it
/// when fewer than the school's remaining seats are held by
/// higher-priority students still in the market. Students whose trading
/// target from the previous step still has seats sit the clinching out.
/// One trading round then follows.
pub fn run_ct(p: &Problem) -> (Matching, Trace) {
    let n = p.num_students();
    let mut matching = Matching::empty(p);
    let mut capacities = p.quotas().to_vec();
    let mut remaining: Vec<StudentId> = p.student_ids().collect();
    let mut last_targets: Vec<(StudentId, Option<SchoolId>)> = Vec::new();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let mut step = TradingStep { capacities: capacities.clone(), ..TradingStep::default() };
        let mut withheld = vec![false; n];
        for &(i, t) in &last_targets {
            if let Some(s) = t {
                if capacities[s.0] > 0 && remaining.contains(&i) {
                    withheld[i.0] = true;
                    step.withheld.push(i);
                }
            }
        }
        let mut gone = vec![true; n];
        for &i in &remaining {
            gone[i.0] = false;
        }
        loop {
            let guarantees: Vec<Vec<StudentId>> =
                p.school_ids().map(|s| top_k(p, s, capacities[s.0], |i| !gone[i.0])).collect();
            let mut round = ClinchRound { guarantees, clinched: Vec::new() };
            for &i in &remaining {
                if gone[i.0] || withheld[i.0] {
                    continue;
                }
                if let Some(&s) = p.preference(i).first() {
                    if round.guarantees[s.0].contains(&i) {
                        round.clinched.push((i, s));
                    }
                }
            }
            if round.clinched.is_empty() {
                break;
            }
            for &(i, s) in &round.clinched {
                capacities[s.0] -= 1;
                matching.set(i, Some(s));
                gone[i.0] = true;
            }
            step.clinch_rounds.push(round);
        }
        let traders: Vec<StudentId> = remaining.iter().copied().filter(|i| !gone[i.0]).collect();
        let pointing = trading_round(p, &traders, &traders, &capacities);
        step.cycles = pointing.cycles;
        step.self_cycles = pointing.self_cycles;
        last_targets = pointing.student_targets;
        remaining = traders;
        settle_cycles(&step, &mut matching, &mut capacities, &mut remaining);
        steps.push(Step::Trading(step));
    }
    (matching, Trace { mechanism: Mechanism::Ct, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;

    fn show(p: &Problem, m: &Matching) -> alloc::string::String {
        m.display(p).to_string()
    }

    #[test]
    fn fct_goldens() {
        let p = fixtures::clinch_first();
        assert_eq!(show(&p, &run_fct(&p).0), "i1->s1, i2->s1, i3->s2");
        let p = fixtures::iterated_clinch();
        assert_eq!(show(&p, &run_fct(&p).0), "i1->s2, i2->s1, i3->s1, i4->s3");
    }

    #[test]
    fn fct_first_step_has_no_trade() {
        let p = fixtures::clinch_first();
        let trace = run_fct(&p).1;
        let first = trace.trading_steps().next().unwrap();
        assert_eq!(first.clinch_rounds[0].clinched, [(StudentId(1), SchoolId(0))]);
        assert!(first.cycles.is_empty());
    }

    #[test]
    fn ct_goldens_and_clinch_order() {
        let p = fixtures::iterated_clinch();
        let (m, trace) = run_ct(&p);
        assert_eq!(show(&p, &m), "i1->s1, i2->s1, i3->s2, i4->s3");
        let step = trace.trading_steps().next().unwrap();
        let order: Vec<_> = step.clinch_rounds.iter().map(|r| r.clinched.clone()).collect();
        assert_eq!(
            order,
            [[(StudentId(3), SchoolId(2))], [(StudentId(1), SchoolId(0))], [(StudentId(2), SchoolId(1))]]
        );
        assert_eq!(step.cycles.len(), 1);
        assert_eq!(step.cycles[0].links, [(SchoolId(0), StudentId(0))]);

        let p = fixtures::clinch_first();
        assert_eq!(show(&p, &run_ct(&p).0), "i1->s1, i2->s1, i3->s2");
    }
}

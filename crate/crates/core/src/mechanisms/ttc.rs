use alloc::vec::Vec;

use super::{trading_round, Mechanism, Step, Trace, TradingStep};
use crate::matching::Matching;
use crate::problem::{Problem, StudentId};

/// Top trading cycles. Every cycle present in a step is executed in that
/// step; students with no acceptable school left form self-cycles.
pub fn run_ttc(p: &Problem) -> (Matching, Trace) {
    let mut matching = Matching::empty(p);
    let mut capacities = p.quotas().to_vec();
    let mut remaining: Vec<StudentId> = p.student_ids().collect();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let round = trading_round(p, &remaining, &remaining, &capacities);
        let step = TradingStep {
            capacities: capacities.clone(),
            cycles: round.cycles,
            self_cycles: round.self_cycles,
            ..TradingStep::default()
        };
        for c in &step.cycles {
            for (i, s) in c.matches() {
                matching.set(i, Some(s));
                capacities[s.0] -= 1;
            }
        }
        remaining
            .retain(|i| !step.self_cycles.contains(i) && !step.cycles.iter().any(|c| c.students().any(|x| x == *i)));
        steps.push(Step::Trading(step));
    }
    debug_assert!(matching.is_feasible(p));
    (matching, Trace { mechanism: Mechanism::Ttc, steps })
}

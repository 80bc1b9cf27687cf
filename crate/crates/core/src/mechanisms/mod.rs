//! Assignment mechanisms with per-step traces.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::matching::Matching;
use crate::problem::{Assignment, Problem, SchoolId, StudentId};

mod clinch;
mod deferred;
mod ettc;
mod ttc;

pub use clinch::{run_ct, run_fct};
pub use deferred::{run_da, run_da_traced, run_ia, run_ia_traced};
pub use ettc::run_ettc;
pub use ttc::run_ttc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mechanism {
    Ttc,
    Da,
    Ia,
    Fct,
    Ct,
    Ettc,
}

impl Mechanism {
    pub const ALL: [Mechanism; 6] =
        [Mechanism::Ttc, Mechanism::Da, Mechanism::Ia, Mechanism::Fct, Mechanism::Ct, Mechanism::Ettc];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Ttc => "ttc",
            Mechanism::Da => "da",
            Mechanism::Ia => "ia",
            Mechanism::Fct => "fct",
            Mechanism::Ct => "ct",
            Mechanism::Ettc => "ettc",
        }
    }

    pub fn run(self, p: &Problem) -> (Matching, Trace) {
        match self {
            Mechanism::Ttc => run_ttc(p),
            Mechanism::Da => run_da_traced(p),
            Mechanism::Ia => run_ia_traced(p),
            Mechanism::Fct => run_fct(p),
            Mechanism::Ct => run_ct(p),
            Mechanism::Ettc => run_ettc(p),
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown mechanism `{0}`")]
pub struct UnknownMechanism(pub alloc::string::String);

impl FromStr for Mechanism {
    type Err = UnknownMechanism;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mechanism::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| UnknownMechanism(s.into()))
    }
}

/// A trading cycle: `links[t].0` points to `links[t].1`, who points to
/// the school of the next link.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cycle {
    pub links: Vec<(SchoolId, StudentId)>,
}

impl Cycle {
    pub fn students(&self) -> impl Iterator<Item = StudentId> + '_ {
        self.links.iter().map(|l| l.1)
    }

    pub fn schools(&self) -> impl Iterator<Item = SchoolId> + '_ {
        self.links.iter().map(|l| l.0)
    }

    /// The school `i` points to (and is assigned).
    pub fn target_of(&self, i: StudentId) -> Option<SchoolId> {
        let k = self.links.iter().position(|l| l.1 == i)?;
        Some(self.links[(k + 1) % self.links.len()].0)
    }

    /// The school pointing to `i`.
    pub fn pointer_of(&self, i: StudentId) -> Option<SchoolId> {
        self.links.iter().find(|l| l.1 == i).map(|l| l.0)
    }

    /// Assignments realized by the cycle.
    pub fn matches(&self) -> Vec<(StudentId, SchoolId)> {
        let n = self.links.len();
        (0..n).map(|k| (self.links[k].1, self.links[(k + 1) % n].0)).collect()
    }
}

/// Students clinched in one round, with the guarantee sets in force.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClinchRound {
    pub guarantees: Vec<Vec<StudentId>>,
    pub clinched: Vec<(StudentId, SchoolId)>,
}

/// One step of TTC, FCT or CT.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TradingStep {
    pub capacities: Vec<usize>,
    /// CT only: students sitting out the clinching rounds.
    pub withheld: Vec<StudentId>,
    pub clinch_rounds: Vec<ClinchRound>,
    pub cycles: Vec<Cycle>,
    pub self_cycles: Vec<StudentId>,
}

/// A seat at `school` held by `student` during one inheritance step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Seat {
    pub student: StudentId,
    pub school: SchoolId,
}

/// Seats pointing around a loop; each seat points to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeatCycle {
    pub seats: Vec<Seat>,
}

impl SeatCycle {
    /// The seat `k` points to.
    pub fn next(&self, k: usize) -> Seat {
        self.seats[(k + 1) % self.seats.len()]
    }

    pub fn students(&self) -> Vec<StudentId> {
        let mut out: Vec<_> = self.seats.iter().map(|s| s.student).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// One step of ETTC.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InheritanceStep {
    pub capacities: Vec<usize>,
    /// Students with no acceptable school left, leaving unassigned.
    pub unplaced: Vec<StudentId>,
    pub seats: Vec<Seat>,
    pub cycles: Vec<SeatCycle>,
    pub assigned: Vec<(StudentId, SchoolId)>,
}

/// One round of DA or IA.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProposalRound {
    pub proposals: Vec<(StudentId, SchoolId)>,
    pub rejected: Vec<StudentId>,
    /// Students who ran out of acceptable schools this round.
    pub exhausted: Vec<StudentId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Step {
    Trading(TradingStep),
    Inheritance(InheritanceStep),
    Proposal(ProposalRound),
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trace {
    pub mechanism: Mechanism,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn trading_steps(&self) -> impl Iterator<Item = &TradingStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Trading(t) => Some(t),
            _ => None,
        })
    }

    pub fn inheritance_steps(&self) -> impl Iterator<Item = &InheritanceStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Inheritance(t) => Some(t),
            _ => None,
        })
    }

    /// Final assignment of each student as recorded by the steps, with
    /// the number of times each student was settled. Proposal traces
    /// record no settlements.
    pub fn settlements(&self, p: &Problem) -> (Vec<Assignment>, Vec<usize>) {
        let mut out = vec![None; p.num_students()];
        let mut count = vec![0; p.num_students()];
        let mut settle = |i: StudentId, a: Assignment| {
            out[i.0] = a;
            count[i.0] += 1;
        };
        for step in &self.steps {
            match step {
                Step::Trading(t) => {
                    for r in &t.clinch_rounds {
                        for &(i, s) in &r.clinched {
                            settle(i, Some(s));
                        }
                    }
                    for c in &t.cycles {
                        for (i, s) in c.matches() {
                            settle(i, Some(s));
                        }
                    }
                    for &i in &t.self_cycles {
                        settle(i, None);
                    }
                }
                Step::Inheritance(t) => {
                    for &i in &t.unplaced {
                        settle(i, None);
                    }
                    for &(i, s) in &t.assigned {
                        settle(i, Some(s));
                    }
                }
                Step::Proposal(_) => {}
            }
        }
        (out, count)
    }
}

/// Student and school pointers of one trading round.
pub(crate) struct Pointing {
    pub(crate) cycles: Vec<Cycle>,
    pub(crate) self_cycles: Vec<StudentId>,
    /// Where each participant pointed (`None`: herself).
    pub(crate) student_targets: Vec<(StudentId, Option<SchoolId>)>,
}

/// One round of top trading cycles. `traders` point to their best
/// acceptable school with a free seat; each school with a free seat
/// points to its best student in `pool` (which may include students who
/// are not trading this round).
pub(crate) fn trading_round(p: &Problem, traders: &[StudentId], pool: &[StudentId], capacities: &[usize]) -> Pointing {
    let n = p.num_students();
    let mut trading = vec![false; n];
    for &i in traders {
        trading[i.0] = true;
    }
    let mut in_pool = vec![false; n];
    for &i in pool {
        in_pool[i.0] = true;
    }
    let student_target: Vec<Option<SchoolId>> =
        (0..n).map(|i| if trading[i] { p.best_school(StudentId(i), |s| capacities[s.0] > 0) } else { None }).collect();
    let school_target: Vec<Option<StudentId>> =
        p.school_ids().map(|s| if capacities[s.0] > 0 { p.top_student(s, |i| in_pool[i.0]) } else { None }).collect();

    let mut self_cycles = Vec::new();
    let mut student_targets = Vec::new();
    for &i in traders {
        student_targets.push((i, student_target[i.0]));
        if student_target[i.0].is_none() {
            self_cycles.push(i);
        }
    }
    self_cycles.sort();
    student_targets.sort();

    // Walk school -> student -> school; 0 unvisited, 1 on stack, 2 done.
    let mut state = vec![0u8; p.num_schools()];
    let mut cycles = Vec::new();
    for start in p.school_ids() {
        if state[start.0] != 0 {
            continue;
        }
        let mut path: Vec<SchoolId> = Vec::new();
        let mut s = start;
        loop {
            if state[s.0] == 2 {
                break;
            }
            if state[s.0] == 1 {
                let k = path.iter().position(|&x| x == s).unwrap_or(0);
                let mut links: Vec<(SchoolId, StudentId)> =
                    path[k..].iter().map(|&x| (x, school_target[x.0].unwrap_or(StudentId(0)))).collect();
                let lo = (0..links.len()).min_by_key(|&t| links[t].0).unwrap_or(0);
                links.rotate_left(lo);
                cycles.push(Cycle { links });
                break;
            }
            state[s.0] = 1;
            path.push(s);
            let next = school_target[s.0].filter(|i| trading[i.0]).and_then(|i| student_target[i.0]);
            match next {
                Some(t) => s = t,
                None => break,
            }
        }
        for x in path {
            state[x.0] = 2;
        }
    }
    cycles.sort_by_key(|c| c.links[0].0);
    Pointing { cycles, self_cycles, student_targets }
}

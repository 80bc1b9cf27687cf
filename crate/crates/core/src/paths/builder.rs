//! Move-by-move construction of improving paths toward a fixed end matching.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{BuildError, ConstructionLog, Phase, PhaseRecord};
use crate::farsight::{check_move, Coalition, Horizon, MoveViolation, PathCertificate};
use crate::matching::Matching;
use crate::problem::{Assignment, Problem, SchoolId, StudentId};

/// A requested reassignment of one student.
pub(crate) type Change = (StudentId, Assignment);

/// One stage of a strategy: the reassignments and the label they carry.
pub(crate) type Stage = (Vec<Change>, Phase);

struct Draft {
    to: Matching,
    coalition: Coalition,
    record: PhaseRecord,
}

/// Strategy applications tried before a construction gives up.
const SEARCH_BUDGET: usize = 100_000;

/// A cycle or clinch group of a mechanism step.
pub(crate) struct Group<K> {
    pub(crate) step: usize,
    pub(crate) students: Vec<StudentId>,
    /// Whether the students stay put once the group is done.
    pub(crate) fix: bool,
    pub(crate) kind: K,
}

struct Solver {
    budget: usize,
    deepest: Option<(usize, MoveFailure)>,
}

impl Solver {
    fn descend<K>(
        &mut self,
        b: &mut Builder<'_>,
        groups: &[Group<K>],
        k: usize,
        strategies: &impl Fn(&Builder<'_>, &Group<K>) -> Vec<Vec<Stage>>,
    ) -> bool {
        let Some(g) = groups.get(k) else { return true };
        let saved = (b.current.clone(), b.drafts.len(), b.fixed.clone(), b.skipped);
        let restore = |b: &mut Builder<'_>| {
            b.current = saved.0.clone();
            b.drafts.truncate(saved.1);
            b.fixed = saved.2.clone();
            b.skipped = saved.3;
        };
        let skip = b.at_target(&g.students);
        let options = if skip { vec![Vec::new()] } else { strategies(b, g) };
        let record =
            PhaseRecord { mechanism_step: g.step, group: k, phase: Phase::Join, move_index: 0, evicted: Vec::new() };
        for stages in options {
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            match b.attempt(&stages, &g.students, &record) {
                Ok(()) => {
                    b.skipped += usize::from(skip);
                    if g.fix {
                        b.fix(g.students.iter().copied());
                    }
                    if self.descend(b, groups, k + 1, strategies) {
                        return true;
                    }
                }
                Err(e) => {
                    if self.deepest.as_ref().is_none_or(|d| d.0 <= k) {
                        self.deepest = Some((k, e));
                    }
                }
            }
            restore(b);
        }
        false
    }
}

/// Why a single move could not be made.
#[derive(Debug)]
pub(crate) enum MoveFailure {
    NoRoom(SchoolId),
    Invalid(MoveViolation),
}

pub(crate) struct Builder<'p> {
    p: &'p Problem,
    target: Matching,
    start: Matching,
    current: Matching,
    fixed: Vec<bool>,
    drafts: Vec<Draft>,
    skipped: usize,
}

impl<'p> Builder<'p> {
    pub(crate) fn new(p: &'p Problem, start: &Matching, target: Matching) -> Builder<'p> {
        Builder {
            p,
            target,
            start: start.clone(),
            current: start.clone(),
            fixed: vec![false; p.num_students()],
            drafts: Vec::new(),
            skipped: 0,
        }
    }

    pub(crate) fn current(&self) -> &Matching {
        &self.current
    }

    pub(crate) fn target(&self) -> &Matching {
        &self.target
    }

    pub(crate) fn fix(&mut self, students: impl IntoIterator<Item = StudentId>) {
        for i in students {
            self.fixed[i.0] = true;
        }
    }

    pub(crate) fn at_target(&self, students: &[StudentId]) -> bool {
        students.iter().all(|&i| self.current.get(i) == self.target.get(i))
    }

    /// The matching after `changes`, evicting the lowest-priority
    /// unprotected occupants of any school pushed over its quota.
    fn plan(
        &self,
        changes: &[Change],
        protect: &[StudentId],
    ) -> Result<Option<(Matching, Coalition, Vec<StudentId>)>, MoveFailure> {
        self.plan_from(&self.current, changes, protect)
    }

    fn plan_from(
        &self,
        from: &Matching,
        changes: &[Change],
        protect: &[StudentId],
    ) -> Result<Option<(Matching, Coalition, Vec<StudentId>)>, MoveFailure> {
        let p = self.p;
        let mut next = from.clone();
        let mut movers = Vec::new();
        for &(i, a) in changes {
            if next.get(i) != a {
                next.set(i, a);
                movers.push(i);
            }
        }
        if movers.is_empty() {
            return Ok(None);
        }
        let mut evicted = Vec::new();
        for s in p.school_ids() {
            let gains = movers.iter().any(|&i| next.get(i) == Some(s));
            while gains && next.load(s) > p.quota(s) {
                let victim = p
                    .priority(s)
                    .iter()
                    .rev()
                    .copied()
                    .find(|&j| {
                        next.get(j) == Some(s) && !self.fixed[j.0] && !protect.contains(&j) && !movers.contains(&j)
                    })
                    .ok_or(MoveFailure::NoRoom(s))?;
                next.set(victim, None);
                evicted.push(victim);
            }
        }
        let schools = p.school_ids().filter(|&s| movers.iter().any(|&i| next.get(i) == Some(s))).collect();
        let coalition = Coalition::new(movers, schools);
        match check_move(p, from, &next, &coalition, &self.target) {
            Err(v) => Err(MoveFailure::Invalid(v)),
            Ok(()) => Ok(Some((next, coalition, evicted))),
        }
    }

    /// Whether every move of `stages` would be valid from the current matching.
    pub(crate) fn feasible(&self, stages: &[Stage], protect: &[StudentId]) -> bool {
        let mut m = self.current.clone();
        for (changes, _) in stages {
            match self.plan_from(&m, changes, protect) {
                Ok(Some((next, _, _))) => m = next,
                Ok(None) => {}
                Err(_) => return false,
            }
        }
        true
    }

    /// Fewest moves, at most `max_moves`, taking `goal` students to their
    /// goal assignments when each may only sit at one of `options`.
    pub(crate) fn shortest_moves(
        &self,
        goal: &[Change],
        options: &[Vec<Assignment>],
        protect: &[StudentId],
        max_moves: usize,
    ) -> Option<Vec<Stage>> {
        let done = |m: &Matching| goal.iter().all(|&(i, a)| m.get(i) == a);
        let mut seen = BTreeSet::new();
        seen.insert(self.current.clone());
        let mut layer: Vec<(Matching, Vec<Vec<Change>>)> = vec![(self.current.clone(), Vec::new())];
        for _ in 0..max_moves {
            let mut next_layer = Vec::new();
            for (m, moves) in &layer {
                let mut pick = vec![0usize; goal.len()];
                loop {
                    let changes: Vec<Change> =
                        goal.iter().zip(&pick).enumerate().map(|(k, (&(i, _), &c))| (i, options[k][c])).collect();
                    if let Ok(Some((to, _, _))) = self.plan_from(m, &changes, protect) {
                        if seen.insert(to.clone()) {
                            let mut moves = moves.clone();
                            moves.push(changes);
                            if done(&to) {
                                let last = moves.len() - 1;
                                return Some(
                                    moves
                                        .into_iter()
                                        .enumerate()
                                        .map(|(k, c)| {
                                            let phase = if k == last {
                                                Phase::Join
                                            } else if c.iter().all(|x| x.1.is_none()) {
                                                Phase::Vacate
                                            } else {
                                                Phase::Insert
                                            };
                                            (c, phase)
                                        })
                                        .collect(),
                                );
                            }
                            next_layer.push((to, moves));
                        }
                    }
                    let mut k = 0;
                    while k < pick.len() && pick[k] + 1 == options[k].len() {
                        pick[k] = 0;
                        k += 1;
                    }
                    if k == pick.len() {
                        break;
                    }
                    pick[k] += 1;
                }
            }
            layer = next_layer;
        }
        None
    }

    fn push(&mut self, changes: &[Change], protect: &[StudentId], record: &PhaseRecord) -> Result<(), MoveFailure> {
        if let Some((next, coalition, evicted)) = self.plan(changes, protect)? {
            let record = PhaseRecord { evicted, ..record.clone() };
            self.current = next.clone();
            self.drafts.push(Draft { to: next, coalition, record });
        }
        Ok(())
    }

    fn attempt(&mut self, stages: &[Stage], protect: &[StudentId], record: &PhaseRecord) -> Result<(), MoveFailure> {
        for (changes, phase) in stages {
            let record = PhaseRecord { phase: *phase, ..record.clone() };
            self.push(changes, protect, &record)?;
        }
        Ok(())
    }

    /// Realizes every group in order, backtracking over the strategies
    /// offered for each until all groups succeed.
    pub(crate) fn solve<K>(
        &mut self,
        groups: &[Group<K>],
        strategies: impl Fn(&Builder<'_>, &Group<K>) -> Vec<Vec<Stage>>,
    ) -> Result<(), BuildError> {
        let mut search = Solver { budget: SEARCH_BUDGET, deepest: None };
        if search.descend(self, groups, 0, &strategies) {
            return Ok(());
        }
        let (k, failure) = search.deepest.unwrap_or((0, MoveFailure::Invalid(MoveViolation::Identical)));
        let group = groups.get(k);
        Err(BuildError::Stuck {
            step: group.map_or(0, |g| g.step),
            group: k,
            reason: match failure {
                MoveFailure::Invalid(v) => v,
                MoveFailure::NoRoom(s) => MoveViolation::SchoolRejects(self.p.school_name(s).into()),
            },
        })
    }

    /// Certificate from the recorded moves, with any loop between two
    /// visits of the same matching cut out.
    pub(crate) fn finish(self) -> Result<(PathCertificate, ConstructionLog), BuildError> {
        if self.current != self.target {
            return Err(BuildError::Incomplete);
        }
        let mut matchings = vec![self.start];
        let mut coalitions: Vec<Coalition> = Vec::new();
        let mut records: Vec<PhaseRecord> = Vec::new();
        for d in self.drafts {
            if let Some(k) = matchings.iter().position(|m| *m == d.to) {
                matchings.truncate(k + 1);
                coalitions.truncate(k);
                records.truncate(k);
                continue;
            }
            matchings.push(d.to);
            coalitions.push(d.coalition);
            records.push(d.record);
        }
        if matchings.len() < 2 {
            return Err(BuildError::Identity);
        }
        for (k, r) in records.iter_mut().enumerate() {
            r.move_index = k;
        }
        let cert = PathCertificate::from_parts(matchings, coalitions, Horizon::Farsighted);
        Ok((cert, ConstructionLog { records, groups_skipped: self.skipped }))
    }
}

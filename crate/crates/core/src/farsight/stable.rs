//! Stable set checks and searches.

use alloc::vec;
use alloc::vec::Vec;

use super::certificate::Horizon;
use super::engine::{PhiEngine, SearchError};
use super::horizon::HorizonOptions;
use crate::bits::Bits;
use crate::matching::Matching;
use crate::problem::Problem;

/// Ceiling on the number of candidate sets `find_stable_sets` may examine.
pub const SUBSET_CAP: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Stable,
    NotStable,
    /// No violation found, but some searches were cut short.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StableSetReport {
    pub candidate: Vec<Matching>,
    /// Pairs `(from, to)` inside the candidate with `to` reachable from `from`.
    pub internal: Vec<(Matching, Matching)>,
    /// Matchings outside the candidate that reach none of it.
    pub external: Vec<Matching>,
    /// Matchings whose status the bounded search could not settle.
    pub unresolved: Vec<Matching>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StableSetSearch {
    pub sets: Vec<Vec<Matching>>,
    /// Some reachability search was cut short; the list may be wrong.
    pub partial: bool,
}

impl PhiEngine<'_> {
    fn indices_of(&self, v: &[Matching]) -> Result<Vec<usize>, SearchError> {
        if v.is_empty() {
            return Err(SearchError::EmptySet);
        }
        let mut idx = v.iter().map(|m| self.index_or_err(m)).collect::<Result<Vec<_>, _>>()?;
        idx.sort();
        idx.dedup();
        Ok(idx)
    }

    fn singleton_bits(&self, t: usize) -> Bits {
        let mut b = Bits::new(self.len());
        b.insert(t);
        b
    }

    pub fn check_stable_set(
        &self,
        v: &[Matching],
        horizon: Horizon,
        opts: &HorizonOptions,
    ) -> Result<StableSetReport, SearchError> {
        let idx = self.indices_of(v)?;
        let n = self.len();
        let mut in_v = Bits::new(n);
        for &t in &idx {
            in_v.insert(t);
        }
        let mut internal = Vec::new();
        let mut external = Vec::new();
        let mut unresolved = Vec::new();
        match horizon {
            Horizon::Farsighted => {
                let mut covered = Bits::new(n);
                for &t in &idx {
                    for x in self.sources_of(t) {
                        covered.insert(x);
                        if x != t && in_v.contains(x) {
                            internal.push((x, t));
                        }
                    }
                }
                external.extend((0..n).filter(|&x| !covered.contains(x)));
            }
            Horizon::Steps(k) => {
                for &x in &idx {
                    for &t in &idx {
                        if x == t {
                            continue;
                        }
                        match self.horizon_reaches(x, &self.singleton_bits(t), k, opts) {
                            Some(true) => internal.push((x, t)),
                            Some(false) => {}
                            None => unresolved.push(x),
                        }
                    }
                }
                for x in (0..n).filter(|&x| !in_v.contains(x)) {
                    match self.horizon_reaches(x, &in_v, k, opts) {
                        Some(true) => {}
                        Some(false) => external.push(x),
                        None => unresolved.push(x),
                    }
                }
            }
        }
        internal.sort();
        unresolved.sort();
        unresolved.dedup();
        let verdict = if !internal.is_empty() || !external.is_empty() {
            Verdict::NotStable
        } else if !unresolved.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Stable
        };
        let space = self.space();
        Ok(StableSetReport {
            candidate: idx.iter().map(|&t| space[t].clone()).collect(),
            internal: internal.into_iter().map(|(x, t)| (space[x].clone(), space[t].clone())).collect(),
            external: external.into_iter().map(|x| space[x].clone()).collect(),
            unresolved: unresolved.into_iter().map(|x| space[x].clone()).collect(),
            verdict,
        })
    }

    /// Every matching forming a stable set on its own. Under a bounded
    /// horizon, a candidate whose check is cut short is reported as
    /// unresolved instead.
    pub fn find_singleton_stable_sets(&self, horizon: Horizon, opts: &HorizonOptions) -> StableSetSearch {
        let n = self.len();
        let mut out = StableSetSearch::default();
        for t in 0..n {
            let stable = match horizon {
                Horizon::Farsighted => Some(self.sources_of(t).len() == n),
                Horizon::Steps(k) => {
                    let goal = self.singleton_bits(t);
                    let mut status = Some(true);
                    for x in (0..n).filter(|&x| x != t) {
                        match self.horizon_reaches(x, &goal, k, opts) {
                            Some(true) => {}
                            Some(false) => {
                                status = Some(false);
                                break;
                            }
                            None => {
                                status = None;
                                break;
                            }
                        }
                    }
                    status
                }
            };
            match stable {
                Some(true) => out.sets.push(vec![self.space()[t].clone()]),
                Some(false) => {}
                None => out.partial = true,
            }
        }
        out
    }

    /// All stable sets with at most `max_size` members.
    pub fn find_stable_sets(
        &self,
        max_size: usize,
        horizon: Horizon,
        opts: &HorizonOptions,
    ) -> Result<StableSetSearch, SearchError> {
        let n = self.len();
        let count = subset_count(n, max_size);
        if count > SUBSET_CAP {
            return Err(SearchError::TooManySubsets { count, cap: SUBSET_CAP });
        }
        let mut forward = vec![Bits::new(n); n];
        let mut partial = false;
        match horizon {
            Horizon::Farsighted => {
                for (x, targets) in self.phi_map().into_iter().enumerate() {
                    for t in targets {
                        forward[x].insert(t);
                    }
                }
            }
            Horizon::Steps(k) => {
                for (x, row) in forward.iter_mut().enumerate() {
                    let (targets, cut) = self.phi_horizon_indices(x, k, opts);
                    partial |= cut;
                    for t in targets {
                        row.insert(t);
                    }
                }
            }
        }
        let mut backward = vec![Bits::new(n); n];
        for (x, row) in forward.iter().enumerate() {
            backward[x].insert(x);
            for t in row.iter() {
                backward[t].insert(x);
            }
        }
        let mut sets = Vec::new();
        let mut chosen = Vec::new();
        extend_sets(&forward, &backward, max_size, 0, &mut chosen, &Bits::new(n), &mut sets);
        let space = self.space();
        Ok(StableSetSearch {
            sets: sets.into_iter().map(|s| s.into_iter().map(|t| space[t].clone()).collect()).collect(),
            partial,
        })
    }
}

fn extend_sets(
    forward: &[Bits],
    backward: &[Bits],
    max_size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    covered: &Bits,
    out: &mut Vec<Vec<usize>>,
) {
    let n = forward.len();
    if !chosen.is_empty() && covered.count() == n {
        out.push(chosen.clone());
    }
    if chosen.len() == max_size {
        return;
    }
    for y in from..n {
        if chosen.iter().any(|&x| forward[x].contains(y) || forward[y].contains(x)) {
            continue;
        }
        let mut next = covered.clone();
        next.or_assign(&backward[y]);
        chosen.push(y);
        extend_sets(forward, backward, max_size, y + 1, chosen, &next, out);
        chosen.pop();
    }
}

fn subset_count(n: usize, max_size: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for s in 1..=max_size.min(n) {
        term = term * (n - s + 1) as u128 / s as u128;
        total = total.saturating_add(term);
    }
    total
}

pub fn check_stable_set(p: &Problem, v: &[Matching], horizon: Horizon) -> Result<StableSetReport, SearchError> {
    PhiEngine::new(p)?.check_stable_set(v, horizon, &HorizonOptions::default())
}

pub fn find_singleton_stable_sets(p: &Problem, horizon: Horizon) -> Result<StableSetSearch, SearchError> {
    Ok(PhiEngine::new(p)?.find_singleton_stable_sets(horizon, &HorizonOptions::default()))
}

pub fn find_stable_sets(p: &Problem, max_size: usize, horizon: Horizon) -> Result<StableSetSearch, SearchError> {
    PhiEngine::new(p)?.find_stable_sets(max_size, horizon, &HorizonOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::problem::RawProblem;

    fn lit(p: &Problem, s: &str) -> Matching {
        Matching::parse(p, s).unwrap()
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subset_count(5, 2), 15);
        assert_eq!(subset_count(3, 9), 7);
    }

    #[test]
    fn single_seat_market() {
        let p = Problem::new(&RawProblem::from_tables(&["i1"], &[("s1", 1)], &[("i1", &["s1"])], &[("s1", &["i1"])]))
            .unwrap();
        let found = find_singleton_stable_sets(&p, Horizon::Farsighted).unwrap();
        assert_eq!(found.sets, [vec![lit(&p, "i1->s1")]]);
        assert!(!found.partial);
        let report = check_stable_set(&p, &[lit(&p, "i1->self")], Horizon::Farsighted).unwrap();
        assert_eq!(report.external, [lit(&p, "i1->s1")]);
        assert_eq!(report.verdict, Verdict::NotStable);
    }

    #[test]
    fn empty_candidate_is_rejected() {
        let p = fixtures::clinch_first();
        assert_eq!(check_stable_set(&p, &[], Horizon::Farsighted), Err(SearchError::EmptySet));
    }

    #[test]
    fn both_members_reaching_each_other_break_internal_stability() {
        let p = fixtures::ttc_vs_da();
        let b = lit(&p, "i1->s1, i2->s3, i3->s2, i4->s1");
        let d = lit(&p, "i1->s1, i2->s2, i3->s1, i4->s3");
        let r = check_stable_set(&p, &[b.clone(), d.clone()], Horizon::Farsighted).unwrap();
        assert!(r.internal.contains(&(b, d)));
        assert_eq!(r.verdict, Verdict::NotStable);
    }
}

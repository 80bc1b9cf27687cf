//! Reachability when students look only a bounded number of steps ahead.
//!
//! Paths are explored depth-first by increasing length. A step's student
//! condition is settled once the matching it looks at is known: either the
//! matching `k` positions later or, if the path stops sooner, its end.

use alloc::vec::Vec;

use super::engine::{PhiEngine, SearchError};
use crate::bits::Bits;
use crate::matching::Matching;
use crate::problem::Problem;

/// Default ceiling on the number of path extensions one search may try.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Default path length cap.
pub const DEFAULT_DEPTH_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HorizonOptions {
    /// Longest path explored; `None` means `min(#matchings, 12)`.
    pub depth_cap: Option<usize>,
    pub node_budget: usize,
}

impl Default for HorizonOptions {
    fn default() -> Self {
        HorizonOptions { depth_cap: None, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HorizonReach {
    pub targets: Vec<Matching>,
    /// Some branch was cut by the depth cap or the node budget, so targets
    /// beyond those listed may exist.
    pub partial: bool,
}

/// Outcome of a search over index space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Found {
    pub(crate) targets: Vec<usize>,
    pub(crate) partial: bool,
}

struct Search<'a, 'p> {
    e: &'a PhiEngine<'p>,
    k: usize,
    limit: usize,
    budget: usize,
    nodes: usize,
    goals: Option<&'a Bits>,
    path: Vec<usize>,
    visited: Bits,
    refs: Vec<Bits>,
    found: Bits,
    cut: bool,
    exhausted: bool,
    done: bool,
}

impl Search<'_, '_> {
    fn run(&mut self) {
        let last = *self.path.last().unwrap_or(&0);
        let mut moves: Vec<(usize, Bits)> = Vec::new();
        self.e.for_each_edge(last, |y, r| {
            if !self.visited.contains(y) {
                moves.push((y, r.clone()));
            }
        });
        let steps = self.path.len() - 1;
        if steps == self.limit {
            if !moves.is_empty() {
                self.cut = true;
            }
            return;
        }
        let len = steps + 1;
        for (y, r) in moves {
            if self.done {
                return;
            }
            if len >= self.k && !self.refs_at(len - self.k, &r).contains(y) {
                continue;
            }
            self.refs.push(r);
            let first_pending = (len + 1).saturating_sub(self.k);
            let viable = (first_pending..len).all(|l| self.refs[l].has_outside(&self.visited));
            if viable {
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.exhausted = true;
                    self.done = true;
                    self.refs.pop();
                    return;
                }
                self.visited.insert(y);
                self.path.push(y);
                if (first_pending..len).all(|l| self.refs[l].contains(y)) {
                    self.found.insert(y);
                    if self.goals.is_some_and(|g| g.contains(y)) {
                        self.done = true;
                    }
                }
                if !self.done {
                    self.run();
                }
                self.path.pop();
                self.visited.remove(y);
            }
            self.refs.pop();
        }
    }

    fn refs_at<'b>(&'b self, l: usize, newest: &'b Bits) -> &'b Bits {
        if l < self.refs.len() {
            &self.refs[l]
        } else {
            newest
        }
    }
}

impl PhiEngine<'_> {
    fn effective_cap(&self, opts: &HorizonOptions) -> usize {
        opts.depth_cap.unwrap_or(self.len().min(DEFAULT_DEPTH_CAP)).max(1)
    }

    fn exact(&self, k: usize, cap: usize) -> bool {
        let longest = self.len().saturating_sub(1);
        k >= longest && cap >= longest
    }

    /// Bounded-lookahead targets of `x` by iterative deepening. With
    /// `goals`, stops at the first goal reached.
    pub(crate) fn horizon_search(&self, x: usize, k: usize, opts: &HorizonOptions, goals: Option<&Bits>) -> Found {
        let n = self.len();
        let cap = self.effective_cap(opts);
        let mut visited = Bits::new(n);
        visited.insert(x);
        let mut s = Search {
            e: self,
            k: k.max(1),
            limit: 0,
            budget: opts.node_budget,
            nodes: 0,
            goals,
            path: alloc::vec![x],
            visited,
            refs: Vec::new(),
            found: Bits::new(n),
            cut: false,
            exhausted: false,
            done: false,
        };
        for limit in 1..=cap {
            s.limit = limit;
            s.cut = false;
            s.run();
            if s.done || !s.cut {
                break;
            }
        }
        let reached_goal = goals.is_some_and(|g| s.found.intersects(g));
        Found { targets: s.found.iter().collect(), partial: !reached_goal && (s.exhausted || s.cut) }
    }

    /// φ with `k`-step lookahead, as sorted indices plus a partial flag.
    pub fn phi_horizon_indices(&self, x: usize, k: usize, opts: &HorizonOptions) -> (Vec<usize>, bool) {
        if self.exact(k, self.effective_cap(opts)) {
            return (self.phi_indices(x), false);
        }
        let f = self.horizon_search(x, k, opts, None);
        (f.targets, f.partial)
    }

    /// Can `x` reach some matching in `goals` with `k`-step lookahead?
    /// `None` when the search was cut before reaching one.
    pub(crate) fn horizon_reaches(&self, x: usize, goals: &Bits, k: usize, opts: &HorizonOptions) -> Option<bool> {
        if self.exact(k, self.effective_cap(opts)) {
            return Some(self.phi_indices(x).iter().any(|&t| goals.contains(t)));
        }
        let f = self.horizon_search(x, k, opts, Some(goals));
        if f.targets.iter().any(|&t| goals.contains(t)) {
            Some(true)
        } else if f.partial {
            None
        } else {
            Some(false)
        }
    }

    pub fn phi_horizon(&self, m: &Matching, k: usize, opts: &HorizonOptions) -> Result<HorizonReach, SearchError> {
        let x = self.index_or_err(m)?;
        let (targets, partial) = self.phi_horizon_indices(x, k, opts);
        Ok(HorizonReach { targets: targets.into_iter().map(|t| self.space()[t].clone()).collect(), partial })
    }
}

/// φ with students looking `k` steps ahead, searched up to `depth_cap` moves.
pub fn phi_horizon(p: &Problem, m: &Matching, k: usize, depth_cap: Option<usize>) -> Result<HorizonReach, SearchError> {
    let opts = HorizonOptions { depth_cap, ..HorizonOptions::default() };
    PhiEngine::new(p)?.phi_horizon(m, k, &opts)
}

//! Reachability over the matching space.
//!
//! For an edge `x -> y` the engine keeps the set of end matchings `t` for
//! which some coalition can move the market from `x` to `y` as a step of an
//! improving path ending at `t`. A matching `t` is then reachable from `x`
//! exactly when `t` can be reached from `x` along edges whose sets hold `t`.

use alloc::borrow::Cow;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::coalition::{gaining_admissible, Delta};
use crate::bits::Bits;
use crate::matching::{enumerate_matchings_capped, CapacityError, Matching};
use crate::problem::{Assignment, Problem};

/// Default ceiling on the matching space the engine accepts.
pub const DEFAULT_PHI_CAP: usize = 4096;

/// Spaces up to this size get a precomputed edge table.
const TABLE_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("matching does not fit the instance")]
    NotInSpace,
    #[error("the candidate set is empty")]
    EmptySet,
    #[error("{count} candidate sets exceed the cap of {cap}")]
    TooManySubsets { count: u128, cap: u128 },
}

struct Table {
    out: Vec<Vec<(usize, Bits)>>,
    rev: Vec<Vec<(usize, usize)>>,
}

pub struct PhiEngine<'p> {
    p: &'p Problem,
    space: Vec<Matching>,
    weak: Vec<Vec<Bits>>,
    strict: Vec<Vec<Bits>>,
    table: Option<Table>,
}

fn option_index(a: Assignment) -> usize {
    a.map_or(0, |s| s.0 + 1)
}

impl<'p> PhiEngine<'p> {
    pub fn new(p: &'p Problem) -> Result<PhiEngine<'p>, CapacityError> {
        PhiEngine::with_cap(p, DEFAULT_PHI_CAP)
    }

    pub fn with_cap(p: &'p Problem, cap: usize) -> Result<PhiEngine<'p>, CapacityError> {
        let space = enumerate_matchings_capped(p, cap)?;
        let n = space.len();
        let mut weak = Vec::with_capacity(p.num_students());
        let mut strict = Vec::with_capacity(p.num_students());
        for i in p.student_ids() {
            let options = core::iter::once(None).chain(p.school_ids().map(Some));
            let (mut w, mut s) = (Vec::new(), Vec::new());
            for a in options {
                let mut wb = Bits::new(n);
                let mut sb = Bits::new(n);
                for (t, m) in space.iter().enumerate() {
                    if p.weakly_prefers(i, m.get(i), a) {
                        wb.insert(t);
                    }
                    if p.prefers(i, m.get(i), a) {
                        sb.insert(t);
                    }
                }
                w.push(wb);
                s.push(sb);
            }
            weak.push(w);
            strict.push(s);
        }
        let mut engine = PhiEngine { p, space, weak, strict, table: None };
        if n <= TABLE_LIMIT {
            let mut out = vec![Vec::new(); n];
            let mut rev = vec![Vec::new(); n];
            for (x, row) in out.iter_mut().enumerate() {
                for (y, incoming) in rev.iter_mut().enumerate() {
                    let refs = engine.compute_refs(x, y);
                    if !refs.is_empty() {
                        incoming.push((x, row.len()));
                        row.push((y, refs));
                    }
                }
            }
            engine.table = Some(Table { out, rev });
        }
        Ok(engine)
    }

    pub fn problem(&self) -> &'p Problem {
        self.p
    }

    /// All feasible matchings in enumeration order.
    pub fn space(&self) -> &[Matching] {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn index_of(&self, m: &Matching) -> Option<usize> {
        self.space.binary_search(m).ok()
    }

    pub(crate) fn index_or_err(&self, m: &Matching) -> Result<usize, SearchError> {
        if !m.is_feasible(self.p) {
            return Err(SearchError::NotInSpace);
        }
        self.index_of(m).ok_or(SearchError::NotInSpace)
    }

    fn compute_refs(&self, x: usize, y: usize) -> Bits {
        let n = self.space.len();
        if x == y {
            return Bits::new(n);
        }
        let (a, b) = (&self.space[x], &self.space[y]);
        let delta = Delta::between(self.p, a, b);
        let mut refs = Bits::full(n);
        for (s, joiners) in &delta.gaining {
            if !gaining_admissible(self.p, a, &delta, *s, joiners) {
                return Bits::new(n);
            }
            for &i in joiners {
                refs.and_assign(&self.weak[i.0][option_index(a.get(i))]);
            }
        }
        let mut gain = Bits::new(n);
        for &i in &delta.students {
            gain.or_assign(&self.strict[i.0][option_index(a.get(i))]);
        }
        refs.and_assign(&gain);
        refs
    }

    /// End matchings for which the move `x -> y` can be a step.
    pub(crate) fn refs(&self, x: usize, y: usize) -> Cow<'_, Bits> {
        match &self.table {
            Some(t) => match t.out[x].iter().find(|(v, _)| *v == y) {
                Some((_, r)) => Cow::Borrowed(r),
                None => Cow::Owned(Bits::new(self.space.len())),
            },
            None => Cow::Owned(self.compute_refs(x, y)),
        }
    }

    /// Calls `f` for every move out of `x` that serves some end matching.
    pub(crate) fn for_each_edge(&self, x: usize, mut f: impl FnMut(usize, &Bits)) {
        match &self.table {
            Some(t) => {
                for (y, r) in &t.out[x] {
                    f(*y, r);
                }
            }
            None => {
                for y in 0..self.space.len() {
                    let r = self.compute_refs(x, y);
                    if !r.is_empty() {
                        f(y, &r);
                    }
                }
            }
        }
    }

    fn edge_serves(&self, x: usize, y: usize, t: usize) -> bool {
        match &self.table {
            Some(_) => self.refs(x, y).contains(t),
            None => x != y && self.compute_refs(x, y).contains(t),
        }
    }

    /// Indices of φ(`x`), ascending.
    pub fn phi_indices(&self, x: usize) -> Vec<usize> {
        let n = self.space.len();
        let mut reach = vec![Bits::new(n); n];
        reach[x] = Bits::full(n);
        let mut queued = vec![false; n];
        let mut queue = VecDeque::from([x]);
        queued[x] = true;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let carried = reach[u].clone();
            self.for_each_edge(u, |v, refs| {
                if reach[v].absorb_masked(&carried, refs) && !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            });
        }
        (0..n).filter(|&t| t != x && reach[t].contains(t)).collect()
    }

    /// Every `x` with `t` in φ(`x`), plus `t` itself.
    pub fn sources_of(&self, t: usize) -> Vec<usize> {
        let n = self.space.len();
        let mut seen = vec![false; n];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            match &self.table {
                Some(table) => {
                    for &(u, k) in &table.rev[v] {
                        if !seen[u] && table.out[u][k].1.contains(t) {
                            seen[u] = true;
                            queue.push_back(u);
                        }
                    }
                }
                None => {
                    for (u, s) in seen.iter_mut().enumerate() {
                        if !*s && self.edge_serves(u, v, t) {
                            *s = true;
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        (0..n).filter(|&u| seen[u]).collect()
    }

    /// φ of every matching, as sorted index lists.
    pub fn phi_map(&self) -> Vec<Vec<usize>> {
        let n = self.space.len();
        let mut map = vec![Vec::new(); n];
        for t in 0..n {
            for x in self.sources_of(t) {
                if x != t {
                    map[x].push(t);
                }
            }
        }
        map
    }

    pub fn phi(&self, m: &Matching) -> Result<Vec<Matching>, SearchError> {
        let x = self.index_or_err(m)?;
        Ok(self.phi_indices(x).into_iter().map(|t| self.space[t].clone()).collect())
    }

    /// Shortest improving path from `x` to `t`, as matching indices.
    pub fn path_indices(&self, x: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.space.len();
        if x == t {
            return None;
        }
        let mut parent = vec![usize::MAX; n];
        parent[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let mut next = Vec::new();
            self.for_each_edge(u, |v, refs| {
                if parent[v] == usize::MAX && refs.contains(t) {
                    next.push(v);
                }
            });
            for v in next {
                parent[v] = u;
                if v == t {
                    let mut path = vec![t];
                    let mut w = t;
                    while w != x {
                        w = parent[w];
                        path.push(w);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
        None
    }
}

/// φ(`m`): every matching reachable from `m` by a farsighted improving path.
pub fn phi(p: &Problem, m: &Matching) -> Result<Vec<Matching>, SearchError> {
    PhiEngine::new(p)?.phi(m)
}

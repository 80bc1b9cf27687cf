//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's search or enforcement code.

#![allow(dead_code)]

use farsight_core::problem::{Entry, RawProblem};
use farsight_core::{Matching, Problem, SchoolId, StudentId};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Assignment = Option<SchoolId>;

pub fn lit(p: &Problem, s: &str) -> Matching {
    Matching::parse(p, s).unwrap()
}

/// All quota-respecting matchings by counting through the full product.
pub fn product_space(p: &Problem) -> Vec<Matching> {
    let n = p.num_students();
    let base = p.num_schools() + 1;
    let mut out = Vec::new();
    for code in 0..base.pow(n as u32) {
        let mut c = code;
        let mut a = Vec::with_capacity(n);
        for _ in 0..n {
            let d = c % base;
            c /= base;
            a.push(if d == 0 { None } else { Some(SchoolId(d - 1)) });
        }
        if let Ok(m) = Matching::new(p, a) {
            out.push(m);
        }
    }
    out.sort();
    out
}

fn rank(p: &Problem, i: StudentId, a: Assignment) -> usize {
    let list = p.preference(i);
    match a {
        None => list.len(),
        Some(s) => list.iter().position(|&x| x == s).unwrap_or(list.len() + 1),
    }
}

pub fn better(p: &Problem, i: StudentId, a: Assignment, b: Assignment) -> bool {
    rank(p, i, a) < rank(p, i, b)
}

pub fn at_least(p: &Problem, i: StudentId, a: Assignment, b: Assignment) -> bool {
    rank(p, i, a) <= rank(p, i, b)
}

fn prio(p: &Problem, s: SchoolId, i: StudentId) -> usize {
    p.priority(s).iter().position(|&j| j == i).unwrap()
}

pub fn dominates(p: &Problem, a: &Matching, b: &Matching) -> bool {
    p.student_ids().all(|i| at_least(p, i, a.get(i), b.get(i)))
        && p.student_ids().any(|i| better(p, i, a.get(i), b.get(i)))
}

pub fn pareto_efficient(p: &Problem, m: &Matching, space: &[Matching]) -> bool {
    !space.iter().any(|x| dominates(p, x, m))
}

/// Individually rational, non-wasteful and free of justified envy.
pub fn stable(p: &Problem, m: &Matching) -> bool {
    for i in p.student_ids() {
        if !at_least(p, i, m.get(i), None) {
            return false;
        }
        for s in p.school_ids() {
            if !better(p, i, Some(s), m.get(i)) {
                continue;
            }
            let roster: Vec<StudentId> = p.student_ids().filter(|&j| m.get(j) == Some(s)).collect();
            if roster.len() < p.quota(s) || roster.iter().any(|&j| prio(p, s, i) < prio(p, s, j)) {
                return false;
            }
        }
    }
    true
}

/// Can some injection send every leaver to a distinct joiner of higher priority?
fn injection(p: &Problem, s: SchoolId, leavers: &[StudentId], joiners: &[StudentId], used: &mut Vec<bool>) -> bool {
    let Some((&l, rest)) = leavers.split_first() else { return true };
    for (k, &j) in joiners.iter().enumerate() {
        if !used[k] && prio(p, s, j) < prio(p, s, l) {
            used[k] = true;
            if injection(p, s, rest, joiners, used) {
                return true;
            }
            used[k] = false;
        }
    }
    false
}

/// Can some coalition of changed agents move `a` to `b` as a step of an
/// improving path ending at `t`? Tries every such coalition.
pub fn step_allowed(p: &Problem, a: &Matching, b: &Matching, t: &Matching) -> bool {
    if a == b {
        return false;
    }
    let students: Vec<StudentId> = p.student_ids().filter(|&i| a.get(i) != b.get(i)).collect();
    let roster =
        |m: &Matching, s: SchoolId| -> Vec<StudentId> { p.student_ids().filter(|&i| m.get(i) == Some(s)).collect() };
    let schools: Vec<SchoolId> = p.school_ids().filter(|&s| roster(a, s) != roster(b, s)).collect();
    let agents = students.len() + schools.len();
    for mask in 1u64..(1 << agents) {
        let in_n = |i: StudentId| students.iter().position(|&x| x == i).is_some_and(|k| mask & (1 << k) != 0);
        let school_in =
            |s: SchoolId| schools.iter().position(|&x| x == s).is_some_and(|k| mask & (1 << (students.len() + k)) != 0);
        let members: Vec<StudentId> = students.iter().copied().filter(|&i| in_n(i)).collect();
        if members.is_empty() {
            continue;
        }
        let mut ok = true;
        for &s in &schools {
            let before = roster(a, s);
            let after = roster(b, s);
            let joiners: Vec<StudentId> = after.iter().copied().filter(|i| !before.contains(i)).collect();
            let leavers: Vec<StudentId> = before.iter().copied().filter(|i| !after.contains(i)).collect();
            if !joiners.is_empty() {
                ok &= school_in(s) && joiners.iter().all(|&i| in_n(i));
            } else if !leavers.is_empty() {
                ok &= school_in(s) || leavers.iter().all(|&i| in_n(i));
            }
            if school_in(s) && before.len() + joiners.len() > p.quota(s) {
                ok &= injection(p, s, &leavers, &joiners, &mut vec![false; joiners.len()]);
            }
        }
        ok &= members.iter().all(|&i| at_least(p, i, t.get(i), a.get(i)));
        ok &= members.iter().any(|&i| better(p, i, t.get(i), a.get(i)));
        if ok {
            return true;
        }
    }
    false
}

/// Ends of all simple improving paths from `space[x]`, found by listing
/// every simple path toward every candidate end.
pub fn phi_by_paths(p: &Problem, space: &[Matching], x: usize) -> Vec<Matching> {
    fn walk(p: &Problem, space: &[Matching], t: usize, at: usize, on_path: &mut Vec<bool>) -> bool {
        if at == t {
            return true;
        }
        for y in 0..space.len() {
            if !on_path[y] && step_allowed(p, &space[at], &space[y], &space[t]) {
                on_path[y] = true;
                let hit = walk(p, space, t, y, on_path);
                on_path[y] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    (0..space.len())
        .filter(|&t| t != x)
        .filter(|&t| {
            let mut on_path = vec![false; space.len()];
            on_path[x] = true;
            walk(p, space, t, x, &mut on_path)
        })
        .map(|t| space[t].clone())
        .collect()
}

/// A market with `n` students, `m` schools, quotas in `1..=max_quota`,
/// truncated preference lists and full priority orders.
pub fn random_problem(rng: &mut impl Rng, n: usize, m: usize, max_quota: usize) -> Problem {
    let students: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
    let schools: Vec<String> = (1..=m).map(|k| format!("s{k}")).collect();
    let preferences = students
        .iter()
        .map(|i| {
            let mut list = schools.clone();
            list.shuffle(rng);
            list.truncate(rng.random_range(0..=m));
            Entry::new(i.clone(), list)
        })
        .collect();
    let priorities = schools
        .iter()
        .map(|s| {
            let mut list = students.clone();
            list.shuffle(rng);
            Entry::new(s.clone(), list)
        })
        .collect();
    let quotas = schools.iter().map(|s| Entry::new(s.clone(), rng.random_range(1..=max_quota))).collect();
    let raw =
        RawProblem { students, schools, quotas, preferences, priorities, students_line: None, schools_line: None };
    Problem::new(&raw).unwrap()
}

/// Every truncated ordering of `m` schools.
pub fn all_lists(m: usize) -> Vec<Vec<usize>> {
    fn extend(m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for s in 0..m {
            if !prefix.contains(&s) {
                prefix.push(s);
                extend(m, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(m, &mut Vec::new(), &mut out);
    out
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    all_lists(n).into_iter().filter(|l| l.len() == n).collect()
}

/// A market from index tables: preference lists of school indices and
/// priority orders of student indices.
pub fn market(quotas: &[usize], preferences: &[Vec<usize>], priorities: &[Vec<usize>]) -> Problem {
    let student = |i: usize| format!("i{}", i + 1);
    let school = |s: usize| format!("s{}", s + 1);
    let raw = RawProblem {
        students: (0..preferences.len()).map(student).collect(),
        schools: (0..quotas.len()).map(school).collect(),
        quotas: quotas.iter().enumerate().map(|(s, &q)| Entry::new(school(s), q)).collect(),
        preferences: preferences
            .iter()
            .enumerate()
            .map(|(i, l)| Entry::new(student(i), l.iter().map(|&s| school(s)).collect()))
            .collect(),
        priorities: priorities
            .iter()
            .enumerate()
            .map(|(s, l)| Entry::new(school(s), l.iter().map(|&i| student(i)).collect()))
            .collect(),
        students_line: None,
        schools_line: None,
    };
    Problem::new(&raw).unwrap()
}

//! Random markets for property tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::problem::{Entry, Problem, RawProblem};

/// Markets with `1..=max_students` students and `1..=max_schools` schools,
/// quotas up to 2, truncated preference lists and full priority orders.
pub(crate) fn problems(max_students: usize, max_schools: usize) -> impl Strategy<Value = Problem> {
    (1..=max_students, 1..=max_schools).prop_flat_map(|(n, m)| {
        let quotas = proptest::collection::vec(1..=2usize, m);
        let prefs = proptest::collection::vec((Just((0..m).collect::<Vec<_>>()).prop_shuffle(), 0..=m), n);
        let prios = proptest::collection::vec(Just((0..n).collect::<Vec<_>>()).prop_shuffle(), m);
        (quotas, prefs, prios).prop_map(move |(quotas, prefs, prios)| build(n, m, &quotas, &prefs, &prios))
    })
}

fn build(n: usize, m: usize, quotas: &[usize], prefs: &[(Vec<usize>, usize)], prios: &[Vec<usize>]) -> Problem {
    let student = |i: usize| format!("i{}", i + 1);
    let school = |s: usize| format!("s{}", s + 1);
    let raw = RawProblem {
        students: (0..n).map(student).collect(),
        schools: (0..m).map(school).collect(),
        quotas: (0..m).map(|s| Entry::new(school(s), quotas[s])).collect(),
        preferences: (0..n)
            .map(|i| {
                Entry::new(student(i), prefs[i].0[..prefs[i].1].iter().map(|&s| school(s)).collect::<Vec<String>>())
            })
            .collect(),
        priorities: (0..m).map(|s| Entry::new(school(s), prios[s].iter().map(|&i| student(i)).collect())).collect(),
        students_line: None,
        schools_line: None,
    };
    Problem::new(&raw).expect("generated tables are valid")
}

/// One-line rendering for failure messages.
pub(crate) fn describe(p: &Problem) -> String {
    let mut out = String::new();
    for s in p.school_ids() {
        out += &format!("{}({}): ", p.school_name(s), p.quota(s));
        out += &p.priority(s).iter().map(|&i| p.student_name(i)).collect::<Vec<_>>().join(" ");
        out += "; ";
    }
    for i in p.student_ids() {
        out += &format!("{}: ", p.student_name(i));
        out += &p.preference(i).iter().map(|&s| p.school_name(s)).collect::<Vec<_>>().join(" ");
        out += "; ";
    }
    out
}

//! School choice problems: students, schools, quotas, truncated
//! preferences and strict priorities.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Index of a student in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StudentId(pub usize);

/// Index of a school in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchoolId(pub usize);

/// Where a student sits: a school, or `None` for the outside option.
pub type Assignment = Option<SchoolId>;

/// Name reserved for the outside option in matching literals.
pub const SELF_NAME: &str = "self";

/// A line of a raw instance attached to one student or school.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry<T> {
    pub owner: String,
    pub value: T,
    pub line: Option<usize>,
}

impl<T> Entry<T> {
    pub fn new(owner: impl Into<String>, value: T) -> Self {
        Entry { owner: owner.into(), value, line: None }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

/// Unchecked, name-based description of a problem, as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawProblem {
    pub students: Vec<String>,
    pub schools: Vec<String>,
    pub quotas: Vec<Entry<usize>>,
    pub preferences: Vec<Entry<Vec<String>>>,
    pub priorities: Vec<Entry<Vec<String>>>,
    pub students_line: Option<usize>,
    pub schools_line: Option<usize>,
}

impl RawProblem {
    /// Convenience constructor from string tables.
    pub fn from_tables(
        students: &[&str],
        schools: &[(&str, usize)],
        preferences: &[(&str, &[&str])],
        priorities: &[(&str, &[&str])],
    ) -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        RawProblem {
            students: owned(students),
            schools: schools.iter().map(|(s, _)| s.to_string()).collect(),
            quotas: schools.iter().map(|(s, q)| Entry::new(*s, *q)).collect(),
            preferences: preferences.iter().map(|(i, l)| Entry::new(*i, owned(l))).collect(),
            priorities: priorities.iter().map(|(s, l)| Entry::new(*s, owned(l))).collect(),
            students_line: None,
            schools_line: None,
        }
    }
}

/// One invariant violation found while validating a [`RawProblem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {}: {}", line, self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagnosticKind {
    #[error("no students declared")]
    NoStudents,
    #[error("no schools declared")]
    NoSchools,
    #[error("identifier `{0}` is reserved")]
    ReservedName(String),
    #[error("empty identifier")]
    EmptyName,
    #[error("student `{0}` declared twice")]
    DuplicateStudent(String),
    #[error("school `{0}` declared twice")]
    DuplicateSchool(String),
    #[error("`{0}` is both a student and a school")]
    SharedName(String),
    #[error("unknown school `{0}`")]
    UnknownSchool(String),
    #[error("unknown student `{0}`")]
    UnknownStudent(String),
    #[error("missing quota for school {0}")]
    MissingQuota(String),
    #[error("quota of {0} given twice")]
    DuplicateQuota(String),
    #[error("quota of {0} must be ≥ 1")]
    ZeroQuota(String),
    #[error("missing preference line for student {0}")]
    MissingPreference(String),
    #[error("preference of {0} given twice")]
    DuplicatePreference(String),
    #[error("preference of {student} lists {school} more than once")]
    RepeatedSchool { student: String, school: String },
    #[error("missing priority line for school {0}")]
    MissingPriority(String),
    #[error("priority of {0} given twice")]
    DuplicatePriority(String),
    #[error("priority of {0} not a permutation of the students")]
    NotPermutation(String),
}

/// A validated school choice problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    students: Vec<String>,
    schools: Vec<String>,
    quotas: Vec<usize>,
    preferences: Vec<Vec<SchoolId>>,
    priorities: Vec<Vec<StudentId>>,
    // [student][school] position in the preference list
    pref_pos: Vec<Vec<Option<usize>>>,
    // [school][student] 1-based priority rank
    prio_rank: Vec<Vec<usize>>,
}

/// Check every invariant of a raw problem and report all violations.
pub fn validate_problem(raw: &RawProblem) -> Vec<Diagnostic> {
    match Problem::new(raw) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

impl Problem {
    /// Validate `raw` and build the indexed problem.
    pub fn new(raw: &RawProblem) -> Result<Problem, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut push = |line: Option<usize>, kind| diags.push(Diagnostic { line, kind });

        if raw.students.is_empty() {
            push(raw.students_line, DiagnosticKind::NoStudents);
        }
        if raw.schools.is_empty() {
            push(raw.schools_line, DiagnosticKind::NoSchools);
        }

        let mut student_idx = BTreeMap::new();
        for name in &raw.students {
            check_name(name, raw.students_line, &mut push);
            if student_idx.insert(name.clone(), StudentId(student_idx.len())).is_some() {
                push(raw.students_line, DiagnosticKind::DuplicateStudent(name.clone()));
            }
        }
        let mut school_idx = BTreeMap::new();
        for name in &raw.schools {
            check_name(name, raw.schools_line, &mut push);
            if school_idx.insert(name.clone(), SchoolId(school_idx.len())).is_some() {
                push(raw.schools_line, DiagnosticKind::DuplicateSchool(name.clone()));
            }
            if student_idx.contains_key(name) {
                push(raw.schools_line, DiagnosticKind::SharedName(name.clone()));
            }
        }
        // Index lookups below use first occurrence positions.
        let student_pos = |n: &str| raw.students.iter().position(|x| x == n).map(StudentId);
        let school_pos = |n: &str| raw.schools.iter().position(|x| x == n).map(SchoolId);

        let n = raw.students.len();
        let m = raw.schools.len();

        let mut quotas: Vec<Option<usize>> = vec![None; m];
        for e in &raw.quotas {
            match school_pos(&e.owner) {
                None => push(e.line, DiagnosticKind::UnknownSchool(e.owner.clone())),
                Some(s) => {
                    if quotas[s.0].is_some() {
                        push(e.line, DiagnosticKind::DuplicateQuota(e.owner.clone()));
                    } else {
                        if e.value == 0 {
                            push(e.line, DiagnosticKind::ZeroQuota(e.owner.clone()));
                        }
                        quotas[s.0] = Some(e.value);
                    }
                }
            }
        }
        for (s, q) in quotas.iter().enumerate() {
            if q.is_none() {
                push(raw.schools_line, DiagnosticKind::MissingQuota(raw.schools[s].clone()));
            }
        }

        let mut preferences: Vec<Option<Vec<SchoolId>>> = vec![None; n];
        for e in &raw.preferences {
            let Some(i) = student_pos(&e.owner) else {
                push(e.line, DiagnosticKind::UnknownStudent(e.owner.clone()));
                continue;
            };
            if preferences[i.0].is_some() {
                push(e.line, DiagnosticKind::DuplicatePreference(e.owner.clone()));
                continue;
            }
            let mut list = Vec::new();
            for name in &e.value {
                match school_pos(name) {
                    None => push(e.line, DiagnosticKind::UnknownSchool(name.clone())),
                    Some(s) if list.contains(&s) => {
                        push(e.line, DiagnosticKind::RepeatedSchool { student: e.owner.clone(), school: name.clone() })
                    }
                    Some(s) => list.push(s),
                }
            }
            preferences[i.0] = Some(list);
        }
        for (i, p) in preferences.iter().enumerate() {
            if p.is_none() {
                push(raw.students_line, DiagnosticKind::MissingPreference(raw.students[i].clone()));
            }
        }

        let mut priorities: Vec<Option<Vec<StudentId>>> = vec![None; m];
        for e in &raw.priorities {
            let Some(s) = school_pos(&e.owner) else {
                push(e.line, DiagnosticKind::UnknownSchool(e.owner.clone()));
                continue;
            };
            if priorities[s.0].is_some() {
                push(e.line, DiagnosticKind::DuplicatePriority(e.owner.clone()));
                continue;
            }
            let mut seen = vec![false; n];
            let mut list = Vec::new();
            let mut ok = e.value.len() == n;
            for name in &e.value {
                match student_pos(name) {
                    None => {
                        push(e.line, DiagnosticKind::UnknownStudent(name.clone()));
                        ok = false;
                    }
                    Some(i) if seen[i.0] => ok = false,
                    Some(i) => {
                        seen[i.0] = true;
                        list.push(i);
                    }
                }
            }
            if !ok || seen.iter().any(|x| !x) {
                push(e.line, DiagnosticKind::NotPermutation(e.owner.clone()));
            }
            priorities[s.0] = Some(list);
        }
        for (s, p) in priorities.iter().enumerate() {
            if p.is_none() {
                push(raw.schools_line, DiagnosticKind::MissingPriority(raw.schools[s].clone()));
            }
        }

        if !diags.is_empty() {
            return Err(diags);
        }

        let quotas: Vec<usize> = quotas.into_iter().map(|q| q.unwrap_or(0)).collect();
        let preferences: Vec<Vec<SchoolId>> = preferences.into_iter().map(|p| p.unwrap_or_default()).collect();
        let priorities: Vec<Vec<StudentId>> = priorities.into_iter().map(|p| p.unwrap_or_default()).collect();

        let mut pref_pos = vec![vec![None; m]; n];
        for (i, list) in preferences.iter().enumerate() {
            for (k, s) in list.iter().enumerate() {
                pref_pos[i][s.0] = Some(k);
            }
        }
        let mut prio_rank = vec![vec![0; n]; m];
        for (s, list) in priorities.iter().enumerate() {
            for (k, i) in list.iter().enumerate() {
                prio_rank[s][i.0] = k + 1;
            }
        }

        Ok(Problem {
            students: raw.students.clone(),
            schools: raw.schools.clone(),
            quotas,
            preferences,
            priorities,
            pref_pos,
            prio_rank,
        })
    }

    /// Rebuild the name-based description (canonical order, no line info).
    pub fn to_raw(&self) -> RawProblem {
        RawProblem {
            students: self.students.clone(),
            schools: self.schools.clone(),
            quotas: self.school_ids().map(|s| Entry::new(self.school_name(s), self.quota(s))).collect(),
            preferences: self
                .student_ids()
                .map(|i| {
                    let list = self.preference(i).iter().map(|&s| self.school_name(s).to_string());
                    Entry::new(self.student_name(i), list.collect())
                })
                .collect(),
            priorities: self
                .school_ids()
                .map(|s| {
                    let list = self.priority(s).iter().map(|&i| self.student_name(i).to_string());
                    Entry::new(self.school_name(s), list.collect())
                })
                .collect(),
            students_line: None,
            schools_line: None,
        }
    }

    pub fn num_students(&self) -> usize {
        self.students.len()
    }

    pub fn num_schools(&self) -> usize {
        self.schools.len()
    }

    pub fn student_ids(&self) -> impl DoubleEndedIterator<Item = StudentId> + ExactSizeIterator {
        (0..self.students.len()).map(StudentId)
    }

    pub fn school_ids(&self) -> impl DoubleEndedIterator<Item = SchoolId> + ExactSizeIterator {
        (0..self.schools.len()).map(SchoolId)
    }

    pub fn student_name(&self, i: StudentId) -> &str {
        &self.students[i.0]
    }

    pub fn school_name(&self, s: SchoolId) -> &str {
        &self.schools[s.0]
    }

    pub fn student_by_name(&self, name: &str) -> Option<StudentId> {
        self.students.iter().position(|x| x == name).map(StudentId)
    }

    pub fn school_by_name(&self, name: &str) -> Option<SchoolId> {
        self.schools.iter().position(|x| x == name).map(SchoolId)
    }

    pub fn quota(&self, s: SchoolId) -> usize {
        self.quotas[s.0]
    }

    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    /// Acceptable schools of `i`, best first.
    pub fn preference(&self, i: StudentId) -> &[SchoolId] {
        &self.preferences[i.0]
    }

    /// Students in priority order at `s`, highest first.
    pub fn priority(&self, s: SchoolId) -> &[StudentId] {
        &self.priorities[s.0]
    }

    /// 1-based priority rank of `i` at `s`; lower is better.
    pub fn priority_rank(&self, s: SchoolId, i: StudentId) -> usize {
        self.prio_rank[s.0][i.0]
    }

    /// Does `a` have higher priority than `b` at `s`?
    pub fn outranks(&self, s: SchoolId, a: StudentId, b: StudentId) -> bool {
        self.priority_rank(s, a) < self.priority_rank(s, b)
    }

    pub fn is_acceptable(&self, i: StudentId, s: SchoolId) -> bool {
        self.pref_pos[i.0][s.0].is_some()
    }

    /// Position of an assignment in `i`'s ranking; lower is better. The
    /// outside option sits right after the acceptable schools and every
    /// unacceptable school shares the slot below it.
    pub fn pref_rank(&self, i: StudentId, a: Assignment) -> usize {
        let len = self.preferences[i.0].len();
        match a {
            None => len,
            Some(s) => self.pref_pos[i.0][s.0].unwrap_or(len + 1),
        }
    }

    /// Strict preference of `i` for `a` over `b`.
    pub fn prefers(&self, i: StudentId, a: Assignment, b: Assignment) -> bool {
        self.pref_rank(i, a) < self.pref_rank(i, b)
    }

    /// Weak preference of `i` for `a` over `b`.
    pub fn weakly_prefers(&self, i: StudentId, a: Assignment, b: Assignment) -> bool {
        self.pref_rank(i, a) <= self.pref_rank(i, b)
    }

    /// Best acceptable school of `i` among those passing `open`.
    pub fn best_school(&self, i: StudentId, mut open: impl FnMut(SchoolId) -> bool) -> Option<SchoolId> {
        self.preferences[i.0].iter().copied().find(|&s| open(s))
    }

    /// Highest-priority student at `s` among those passing `keep`.
    pub fn top_student(&self, s: SchoolId, mut keep: impl FnMut(StudentId) -> bool) -> Option<StudentId> {
        self.priorities[s.0].iter().copied().find(|&i| keep(i))
    }
}

fn check_name(name: &str, line: Option<usize>, push: &mut impl FnMut(Option<usize>, DiagnosticKind)) {
    if name.is_empty() {
        push(line, DiagnosticKind::EmptyName);
    } else if name == SELF_NAME {
        push(line, DiagnosticKind::ReservedName(name.to_string()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_market_validates() {
        let p = fixtures::ttc_vs_da();
        assert_eq!(p.quotas(), &[2, 1, 1]);
        assert_eq!(p.priority_rank(SchoolId(0), StudentId(3)), 3);
        assert!(validate_problem(&p.to_raw()).is_empty());
    }

    #[test]
    fn missing_student_in_priority_is_reported() {
        let mut raw = fixtures::ttc_vs_da().to_raw();
        raw.priorities[0].value.retain(|x| x != "i2");
        let d = validate_problem(&raw);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::NotPermutation("s1".into()));
        assert_eq!(d[0].to_string(), "priority of s1 not a permutation of the students");
    }

    #[test]
    fn zero_quota_is_reported() {
        let mut raw = fixtures::ttc_vs_da().to_raw();
        raw.quotas[0].value = 0;
        let d = validate_problem(&raw);
        assert_eq!(d, vec![Diagnostic { line: None, kind: DiagnosticKind::ZeroQuota("s1".into()) }]);
        assert!(d[0].to_string().contains("must be ≥ 1"));
    }

    #[test]
    fn unacceptable_schools_rank_below_outside_option() {
        let raw =
            RawProblem::from_tables(&["a"], &[("x", 1), ("y", 1)], &[("a", &["x"])], &[("x", &["a"]), ("y", &["a"])]);
        let p = Problem::new(&raw).unwrap();
        let (a, x, y) = (StudentId(0), Some(SchoolId(0)), Some(SchoolId(1)));
        assert!(p.prefers(a, x, None));
        assert!(p.prefers(a, None, y));
        assert!(!p.is_acceptable(a, SchoolId(1)));
    }

    #[test]
    fn reserved_and_shared_names_are_rejected() {
        let raw = RawProblem::from_tables(
            &["self", "x"],
            &[("x", 1)],
            &[("self", &[]), ("x", &[])],
            &[("x", &["self", "x"])],
        );
        let kinds: Vec<_> = validate_problem(&raw).into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::ReservedName("self".into())));
        assert!(kinds.contains(&DiagnosticKind::SharedName("x".into())));
    }
}

//! Instance files.
//!
//! ```text
//! students: i1 i2
//! schools: s1
//! quota s1 = 1
//! pref i1: s1
//! pref i2:
//! priority s1: i2 i1
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The five kinds of
//! line must appear in the order above.

use std::fmt;
use std::fmt::Write as _;

use farsight_core::problem::Entry;
use farsight_core::{Problem, RawProblem};

/// A problem with the input, tied to a line when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        Diagnostic { line: Some(line), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<farsight_core::problem::Diagnostic> for Diagnostic {
    fn from(d: farsight_core::problem::Diagnostic) -> Self {
        Diagnostic { line: d.line, message: d.kind.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Students,
    Schools,
    Quota,
    Pref,
    Priority,
}

impl Section {
    fn keyword(self) -> &'static str {
        match self {
            Section::Students => "students",
            Section::Schools => "schools",
            Section::Quota => "quota",
            Section::Pref => "pref",
            Section::Priority => "priority",
        }
    }
}

/// Text of a line with any comment removed.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before).trim()
}

/// `owner: a b c` after the keyword, with a single-token owner.
fn owned_list(rest: &str) -> Option<(String, Vec<String>)> {
    let (owner, list) = rest.split_once(':')?;
    let owner = owner.trim();
    if owner.is_empty() || owner.contains(char::is_whitespace) {
        return None;
    }
    Some((owner.to_string(), list.split_whitespace().map(String::from).collect()))
}

/// Reads the line structure without checking names against each other.
pub fn parse_raw(text: &str) -> Result<RawProblem, Vec<Diagnostic>> {
    let mut raw = RawProblem::default();
    let mut diagnostics = Vec::new();
    let mut last: Option<Section> = None;
    for (k, line) in text.lines().enumerate() {
        let n = k + 1;
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let (word, rest) = match body.find(|c: char| c == ':' || c.is_whitespace()) {
            Some(at) => (&body[..at], &body[at..]),
            None => (body, ""),
        };
        let section = match word {
            "students" => Section::Students,
            "schools" => Section::Schools,
            "quota" => Section::Quota,
            "pref" => Section::Pref,
            "priority" => Section::Priority,
            _ => {
                diagnostics.push(Diagnostic::at(n, format!("unrecognised line `{body}`")));
                continue;
            }
        };
        if let Some(prev) = last {
            if section < prev {
                diagnostics.push(Diagnostic::at(
                    n,
                    format!(
                        "`{}` line after `{}` lines (order is students, schools, quota, pref, priority)",
                        section.keyword(),
                        prev.keyword()
                    ),
                ));
                continue;
            }
        }
        last = Some(section);
        match section {
            Section::Students | Section::Schools => {
                let Some(names) = rest.trim_start().strip_prefix(':') else {
                    diagnostics.push(Diagnostic::at(n, format!("expected `{}:`", section.keyword())));
                    continue;
                };
                let names: Vec<String> = names.split_whitespace().map(String::from).collect();
                let (list, line) = if section == Section::Students {
                    (&mut raw.students, &mut raw.students_line)
                } else {
                    (&mut raw.schools, &mut raw.schools_line)
                };
                if line.is_some() {
                    diagnostics.push(Diagnostic::at(n, format!("`{}:` given twice", section.keyword())));
                    continue;
                }
                *list = names;
                *line = Some(n);
            }
            Section::Quota => {
                let parsed = rest.split_once('=').and_then(|(school, value)| {
                    let school = school.trim();
                    (!school.is_empty() && !school.contains(char::is_whitespace))
                        .then(|| (school.to_string(), value.trim()))
                });
                let Some((school, value)) = parsed else {
                    diagnostics.push(Diagnostic::at(n, "expected `quota <school> = <integer>`"));
                    continue;
                };
                match value.parse::<usize>() {
                    Ok(q) => raw.quotas.push(Entry::new(school, q).at_line(n)),
                    Err(_) => diagnostics
                        .push(Diagnostic::at(n, format!("quota of {school} is not a whole number: `{value}`"))),
                }
            }
            Section::Pref | Section::Priority => {
                let Some((owner, list)) = owned_list(rest) else {
                    let what = if section == Section::Pref { "pref <student>:" } else { "priority <school>:" };
                    diagnostics.push(Diagnostic::at(n, format!("expected `{what} ...`")));
                    continue;
                };
                let entry = Entry::new(owner, list).at_line(n);
                if section == Section::Pref {
                    raw.preferences.push(entry);
                } else {
                    raw.priorities.push(entry);
                }
            }
        }
    }
    if diagnostics.is_empty() {
        Ok(raw)
    } else {
        Err(diagnostics)
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Problem, Vec<Diagnostic>> {
    let raw = parse_raw(text)?;
    Problem::new(&raw).map_err(|ds| ds.into_iter().map(Diagnostic::from).collect())
}

/// Canonical text of a problem; [`parse_instance`] reads it back unchanged.
pub fn serialize(p: &Problem) -> String {
    let raw = p.to_raw();
    let mut out = String::new();
    let _ = writeln!(out, "students: {}", raw.students.join(" "));
    let _ = writeln!(out, "schools: {}", raw.schools.join(" "));
    out.push('\n');
    for q in &raw.quotas {
        let _ = writeln!(out, "quota {} = {}", q.owner, q.value);
    }
    out.push('\n');
    for e in &raw.preferences {
        let _ = writeln!(out, "{}", list_line("pref", e));
    }
    out.push('\n');
    for e in &raw.priorities {
        let _ = writeln!(out, "{}", list_line("priority", e));
    }
    out
}

fn list_line(keyword: &str, e: &Entry<Vec<String>>) -> String {
    if e.value.is_empty() {
        format!("{keyword} {}:", e.owner)
    } else {
        format!("{keyword} {}: {}", e.owner, e.value.join(" "))
    }
}

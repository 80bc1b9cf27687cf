//! Certificate files.
//!
//! Text form, one field of the certificate after another:
//!
//! ```text
//! matching: i1->s1, i2->s2
//! matching: i1->s2, i2->s1
//! coalition: i1 i2 s1 s2
//! horizon: farsighted
//! ```
//!
//! The `k`-th `coalition:` line enforces matching `k + 1` over matching `k`.
//! `horizon:` takes `farsighted` or a positive step count. JSON files use
//! the keys of [`CertificateJson`], either at the top level or under a
//! `certificate` key as printed by `path --format json`.

use std::fmt::Write as _;

use farsight_core::farsight::MoveStep;
use farsight_core::{Coalition, Horizon, Matching, PathCertificate, Problem};
use serde::{Deserialize, Serialize};

use crate::instance::{strip_comment, Diagnostic};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HorizonJson {
    Steps(usize),
    Farsighted(FarsightedTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FarsightedTag {
    Farsighted,
}

impl From<Horizon> for HorizonJson {
    fn from(h: Horizon) -> Self {
        match h {
            Horizon::Farsighted => HorizonJson::Farsighted(FarsightedTag::Farsighted),
            Horizon::Steps(k) => HorizonJson::Steps(k),
        }
    }
}

impl From<HorizonJson> for Horizon {
    fn from(h: HorizonJson) -> Self {
        match h {
            HorizonJson::Farsighted(_) => Horizon::Farsighted,
            HorizonJson::Steps(k) => Horizon::Steps(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalitionJson {
    pub students: Vec<String>,
    pub schools: Vec<String>,
}

impl CoalitionJson {
    pub fn new(p: &Problem, c: &Coalition) -> Self {
        CoalitionJson {
            students: c.students.iter().map(|&i| p.student_name(i).to_string()).collect(),
            schools: c.schools.iter().map(|&s| p.school_name(s).to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStepJson {
    pub from: String,
    pub to: String,
    pub coalition: CoalitionJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub matchings: Vec<String>,
    pub steps: Vec<MoveStepJson>,
    pub horizon: HorizonJson,
}

impl CertificateJson {
    pub fn new(p: &Problem, cert: &PathCertificate) -> Self {
        let lit = |m: &Matching| m.display(p).to_string();
        CertificateJson {
            matchings: cert.matchings.iter().map(lit).collect(),
            steps: cert
                .steps
                .iter()
                .map(|s| MoveStepJson {
                    from: lit(&s.from),
                    to: lit(&s.to),
                    coalition: CoalitionJson::new(p, &s.coalition),
                })
                .collect(),
            horizon: cert.horizon.into(),
        }
    }

    pub fn resolve(&self, p: &Problem) -> Result<PathCertificate, Vec<Diagnostic>> {
        let mut diagnostics = Vec::new();
        let mut note = |what: String, e: &dyn std::fmt::Display| {
            diagnostics.push(Diagnostic { line: None, message: format!("{what}: {e}") });
        };
        let mut matchings = Vec::new();
        for (k, text) in self.matchings.iter().enumerate() {
            match Matching::parse(p, text) {
                Ok(m) => matchings.push(m),
                Err(e) => note(format!("matching {k}"), &e),
            }
        }
        let mut steps = Vec::new();
        for (k, s) in self.steps.iter().enumerate() {
            let from = Matching::parse(p, &s.from).map_err(|e| note(format!("step {k} from"), &e));
            let to = Matching::parse(p, &s.to).map_err(|e| note(format!("step {k} to"), &e));
            let names: Vec<&str> =
                s.coalition.students.iter().chain(&s.coalition.schools).map(String::as_str).collect();
            let coalition = Coalition::parse(p, &names.join(" ")).map_err(|e| note(format!("step {k} coalition"), &e));
            if let (Ok(from), Ok(to), Ok(coalition)) = (from, to, coalition) {
                steps.push(MoveStep { from, to, coalition });
            }
        }
        if diagnostics.is_empty() {
            Ok(PathCertificate { matchings, steps, horizon: self.horizon.clone().into() })
        } else {
            Err(diagnostics)
        }
    }
}

/// Text form of a certificate.
pub fn write_text(p: &Problem, cert: &PathCertificate) -> String {
    let mut out = String::new();
    for m in &cert.matchings {
        let _ = writeln!(out, "matching: {}", m.display(p));
    }
    for s in &cert.steps {
        let c = s.coalition.display(p).to_string();
        if c.is_empty() {
            out.push_str("coalition:\n");
        } else {
            let _ = writeln!(out, "coalition: {c}");
        }
    }
    let _ = writeln!(out, "horizon: {}", cert.horizon);
    out
}

fn field_rank(key: &str) -> Option<usize> {
    ["matching", "coalition", "horizon"].iter().position(|k| *k == key)
}

/// Reads the text form.
pub fn parse_text(p: &Problem, text: &str) -> Result<PathCertificate, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let mut matchings = Vec::new();
    let mut coalitions: Vec<(usize, Coalition)> = Vec::new();
    let mut horizon = None;
    let mut last = 0;
    for (k, line) in text.lines().enumerate() {
        let n = k + 1;
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once(':').map(|(k, v)| (k.trim(), v.trim())) else {
            diagnostics.push(Diagnostic::at(n, format!("unrecognised line `{body}`")));
            continue;
        };
        let Some(rank) = field_rank(key) else {
            diagnostics.push(Diagnostic::at(n, format!("unknown field `{key}`")));
            continue;
        };
        if rank < last || (rank == 2 && horizon.is_some()) {
            diagnostics
                .push(Diagnostic::at(n, format!("`{key}` out of place (order is matching, coalition, horizon)")));
            continue;
        }
        last = rank;
        match rank {
            0 => match Matching::parse(p, value) {
                Ok(m) => matchings.push(m),
                Err(e) => diagnostics.push(Diagnostic::at(n, e.to_string())),
            },
            1 => match Coalition::parse(p, value) {
                Ok(c) => coalitions.push((n, c)),
                Err(e) => diagnostics.push(Diagnostic::at(n, e.to_string())),
            },
            _ => match value {
                "farsighted" => horizon = Some(Horizon::Farsighted),
                _ => match value.parse::<usize>() {
                    Ok(k) if k > 0 => horizon = Some(Horizon::Steps(k)),
                    _ => diagnostics.push(Diagnostic::at(
                        n,
                        format!("horizon must be `farsighted` or a positive integer, found `{value}`"),
                    )),
                },
            },
        }
    }
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }
    let mut steps = Vec::new();
    for (k, (n, coalition)) in coalitions.into_iter().enumerate() {
        match (matchings.get(k), matchings.get(k + 1)) {
            (Some(from), Some(to)) => steps.push(MoveStep { from: from.clone(), to: to.clone(), coalition }),
            _ => diagnostics.push(Diagnostic::at(n, format!("coalition {k} has no matching to move to"))),
        }
    }
    let Some(horizon) = horizon else {
        diagnostics.push(Diagnostic { line: None, message: "missing `horizon:` line".into() });
        return Err(diagnostics);
    };
    if diagnostics.is_empty() {
        Ok(PathCertificate { matchings, steps, horizon })
    } else {
        Err(diagnostics)
    }
}

/// Reads either form; JSON is recognised by a leading `{`.
pub fn parse(p: &Problem, text: &str) -> Result<PathCertificate, Vec<Diagnostic>> {
    if !text.trim_start().starts_with('{') {
        return parse_text(p, text);
    }
    let json_error = |e: serde_json::Error| vec![Diagnostic { line: Some(e.line()), message: e.to_string() }];
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    if let Some(inner) = value.get_mut("certificate") {
        value = inner.take();
    }
    let cert: CertificateJson =
        serde_json::from_value(value).map_err(|e| vec![Diagnostic { line: None, message: e.to_string() }])?;
    cert.resolve(p)
}

//! Command reports and their text rendering.
//!
//! Every report serializes to JSON with the field names below; the text
//! form carries the same content.

use std::fmt::Write as _;

use farsight_core::farsight::{StableSetReport, Verdict};
use farsight_core::mechanisms::{Cycle, SeatCycle, Step};
use farsight_core::paths::{ConstructionLog, Phase};
use farsight_core::welfare::Envy;
use farsight_core::{Matching, PathCertificate, Problem, SchoolId, StudentId, Trace};
use serde::Serialize;

use crate::certificate::{write_text, CertificateJson, HorizonJson};

pub trait Report: Serialize {
    fn text(&self) -> String;

    /// The answer to a yes/no question the command was asked is no.
    fn negative(&self) -> bool {
        false
    }
}

pub(crate) fn literal(p: &Problem, m: &Matching) -> String {
    m.display(p).to_string()
}

/// Literals sorted lexicographically.
pub(crate) fn sorted_literals<'a>(p: &Problem, ms: impl IntoIterator<Item = &'a Matching>) -> Vec<String> {
    let mut out: Vec<String> = ms.into_iter().map(|m| literal(p, m)).collect();
    out.sort();
    out
}

fn students(p: &Problem, ids: &[StudentId]) -> Vec<String> {
    ids.iter().map(|&i| p.student_name(i).to_string()).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn horizon_text(h: &HorizonJson) -> String {
    match h {
        HorizonJson::Steps(k) => k.to_string(),
        HorizonJson::Farsighted(_) => "farsighted".into(),
    }
}

/// Writes `label: n` and then each item indented.
fn listing(out: &mut String, label: &str, items: &[String]) {
    let _ = writeln!(out, "{label}: {}", items.len());
    for item in items {
        let _ = writeln!(out, "  {item}");
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub student: String,
    pub school: String,
}

impl Placement {
    fn new(p: &Problem, i: StudentId, s: SchoolId) -> Self {
        Placement { student: p.student_name(i).into(), school: p.school_name(s).into() }
    }

    fn all(p: &Problem, pairs: &[(StudentId, SchoolId)]) -> Vec<Placement> {
        pairs.iter().map(|&(i, s)| Placement::new(p, i, s)).collect()
    }
}

fn placements_text(ps: &[Placement]) -> String {
    ps.iter().map(|x| format!("{}->{}", x.student, x.school)).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchoolCapacity {
    pub school: String,
    pub capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Guarantee {
    pub school: String,
    pub students: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClinchRoundReport {
    pub guarantees: Vec<Guarantee>,
    pub clinched: Vec<Placement>,
}

/// A school pointing at a student, who points at the next link's school.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Link {
    pub school: String,
    pub student: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepReport {
    Trading {
        capacities: Vec<SchoolCapacity>,
        withheld: Vec<String>,
        clinch_rounds: Vec<ClinchRoundReport>,
        cycles: Vec<Vec<Link>>,
        self_cycles: Vec<String>,
    },
    Inheritance {
        capacities: Vec<SchoolCapacity>,
        unplaced: Vec<String>,
        seats: Vec<Placement>,
        cycles: Vec<Vec<Placement>>,
        assigned: Vec<Placement>,
    },
    Proposal {
        proposals: Vec<Placement>,
        rejected: Vec<String>,
        exhausted: Vec<String>,
    },
}

fn capacities(p: &Problem, caps: &[usize]) -> Vec<SchoolCapacity> {
    p.school_ids().map(|s| SchoolCapacity { school: p.school_name(s).into(), capacity: caps[s.0] }).collect()
}

fn links(p: &Problem, c: &Cycle) -> Vec<Link> {
    c.links.iter().map(|&(s, i)| Link { school: p.school_name(s).into(), student: p.student_name(i).into() }).collect()
}

fn seat_cycle(p: &Problem, c: &SeatCycle) -> Vec<Placement> {
    c.seats.iter().map(|s| Placement::new(p, s.student, s.school)).collect()
}

impl StepReport {
    pub fn new(p: &Problem, step: &Step) -> Self {
        match step {
            Step::Trading(t) => StepReport::Trading {
                capacities: capacities(p, &t.capacities),
                withheld: students(p, &t.withheld),
                clinch_rounds: t
                    .clinch_rounds
                    .iter()
                    .map(|r| ClinchRoundReport {
                        guarantees: p
                            .school_ids()
                            .zip(&r.guarantees)
                            .map(|(s, g)| Guarantee { school: p.school_name(s).into(), students: students(p, g) })
                            .collect(),
                        clinched: Placement::all(p, &r.clinched),
                    })
                    .collect(),
                cycles: t.cycles.iter().map(|c| links(p, c)).collect(),
                self_cycles: students(p, &t.self_cycles),
            },
            Step::Inheritance(s) => StepReport::Inheritance {
                capacities: capacities(p, &s.capacities),
                unplaced: students(p, &s.unplaced),
                seats: s.seats.iter().map(|x| Placement::new(p, x.student, x.school)).collect(),
                cycles: s.cycles.iter().map(|c| seat_cycle(p, c)).collect(),
                assigned: Placement::all(p, &s.assigned),
            },
            Step::Proposal(r) => StepReport::Proposal {
                proposals: Placement::all(p, &r.proposals),
                rejected: students(p, &r.rejected),
                exhausted: students(p, &r.exhausted),
            },
        }
    }

    fn write_text(&self, out: &mut String) {
        let line = |out: &mut String, label: &str, value: String| {
            if !value.is_empty() {
                let _ = writeln!(out, "  {label}: {value}");
            }
        };
        let caps = |cs: &[SchoolCapacity]| {
            cs.iter().map(|c| format!("{}={}", c.school, c.capacity)).collect::<Vec<_>>().join(" ")
        };
        match self {
            StepReport::Trading { capacities, withheld, clinch_rounds, cycles, self_cycles } => {
                line(out, "capacities", caps(capacities));
                line(out, "withheld", withheld.join(" "));
                for (r, round) in clinch_rounds.iter().enumerate() {
                    let g = round
                        .guarantees
                        .iter()
                        .filter(|g| !g.students.is_empty())
                        .map(|g| format!("{} {{{}}}", g.school, g.students.join(" ")))
                        .collect::<Vec<_>>()
                        .join(", ");
                    line(out, &format!("clinch round {} guarantees", r + 1), g);
                    line(out, &format!("clinch round {} clinched", r + 1), placements_text(&round.clinched));
                }
                for c in cycles {
                    let names: Vec<&str> = c.iter().flat_map(|l| [l.school.as_str(), l.student.as_str()]).collect();
                    line(out, "cycle", format!("({})", names.join(", ")));
                }
                line(out, "self-cycles", self_cycles.join(" "));
            }
            StepReport::Inheritance { capacities, unplaced, seats, cycles, assigned } => {
                line(out, "capacities", caps(capacities));
                line(out, "unplaced", unplaced.join(" "));
                let pair = |x: &Placement| format!("({}, {})", x.student, x.school);
                line(out, "seats", seats.iter().map(pair).collect::<Vec<_>>().join(" "));
                for c in cycles {
                    line(out, "cycle", c.iter().map(pair).collect::<Vec<_>>().join(" -> "));
                }
                line(out, "assigned", placements_text(assigned));
            }
            StepReport::Proposal { proposals, rejected, exhausted } => {
                line(out, "proposals", placements_text(proposals));
                line(out, "rejected", rejected.join(" "));
                line(out, "exhausted", exhausted.join(" "));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub mechanism: String,
    pub matching: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepReport>>,
}

impl SolveReport {
    pub fn new(p: &Problem, m: &Matching, trace: Option<&Trace>) -> Self {
        SolveReport {
            mechanism: trace.map_or_else(String::new, |t| t.mechanism.name().to_string()),
            matching: literal(p, m),
            trace: trace.map(|t| t.steps.iter().map(|s| StepReport::new(p, s)).collect()),
        }
    }
}

impl Report for SolveReport {
    fn text(&self) -> String {
        let mut out = format!("{}\n", self.matching);
        for (k, step) in self.trace.iter().flatten().enumerate() {
            let label = if matches!(step, StepReport::Proposal { .. }) { "round" } else { "step" };
            let _ = writeln!(out, "{label} {}", k + 1);
            step.write_text(&mut out);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvyReport {
    pub student: String,
    pub rival: String,
    pub school: String,
}

impl EnvyReport {
    pub fn new(p: &Problem, e: &Envy) -> Self {
        EnvyReport {
            student: p.student_name(e.student).into(),
            rival: p.student_name(e.rival).into(),
            school: p.school_name(e.school).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub property: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertiesReport {
    pub matching: String,
    pub individually_rational: bool,
    pub non_wasteful: bool,
    pub waste: Vec<Placement>,
    pub no_justified_envy: bool,
    pub justified_envy: Vec<EnvyReport>,
    pub stable: bool,
    pub pareto_efficient: bool,
    pub pareto_improvement: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub requirements: Vec<Requirement>,
}

impl Report for PropertiesReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "matching: {}", self.matching);
        let _ = writeln!(out, "individually rational: {}", yes_no(self.individually_rational));
        let _ = writeln!(out, "non-wasteful: {}", yes_no(self.non_wasteful));
        for w in &self.waste {
            let _ = writeln!(out, "  {} prefers {}, which has a free seat", w.student, w.school);
        }
        let _ = writeln!(out, "no justified envy: {}", yes_no(self.no_justified_envy));
        for e in &self.justified_envy {
            let _ = writeln!(out, "  {} envies {} at {}", e.student, e.rival, e.school);
        }
        let _ = writeln!(out, "stable: {}", yes_no(self.stable));
        let _ = writeln!(out, "pareto efficient: {}", yes_no(self.pareto_efficient));
        if let Some(m) = &self.pareto_improvement {
            let _ = writeln!(out, "  dominated by {m}");
        }
        for r in &self.requirements {
            let _ = writeln!(out, "required {}: {}", r.property, if r.holds { "holds" } else { "fails" });
        }
        out
    }

    fn negative(&self) -> bool {
        self.requirements.iter().any(|r| !r.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub from: String,
    pub horizon: HorizonJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_cap: Option<usize>,
    pub partial: bool,
    pub matchings: Vec<String>,
}

impl Report for PhiReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "from: {}", self.from);
        let _ = writeln!(out, "horizon: {}", horizon_text(&self.horizon));
        if let Some(d) = self.depth_cap {
            let _ = writeln!(out, "depth cap: {d}");
        }
        if self.partial {
            out.push_str("PARTIAL: the search was cut short; more matchings may be reachable\n");
        }
        listing(&mut out, "reachable", &self.matchings);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reach {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSetReport {
    pub candidate: Vec<String>,
    pub horizon: HorizonJson,
    pub internal: Vec<Reach>,
    pub external: Vec<String>,
    pub unresolved: Vec<String>,
    pub verdict: String,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::NotStable => "not_stable",
        Verdict::Inconclusive => "inconclusive",
    }
}

impl CheckSetReport {
    pub fn new(p: &Problem, r: &StableSetReport, horizon: HorizonJson) -> Self {
        let mut internal: Vec<Reach> =
            r.internal.iter().map(|(a, b)| Reach { from: literal(p, a), to: literal(p, b) }).collect();
        internal.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        CheckSetReport {
            candidate: sorted_literals(p, &r.candidate),
            horizon,
            internal,
            external: sorted_literals(p, &r.external),
            unresolved: sorted_literals(p, &r.unresolved),
            verdict: verdict_name(r.verdict).into(),
        }
    }
}

impl Report for CheckSetReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.replace('_', " "));
        let _ = writeln!(out, "horizon: {}", horizon_text(&self.horizon));
        listing(&mut out, "candidate", &self.candidate);
        let internal: Vec<String> = self.internal.iter().map(|r| format!("{} reaches {}", r.from, r.to)).collect();
        listing(&mut out, "internal violations", &internal);
        listing(&mut out, "external violations", &self.external);
        listing(&mut out, "unresolved", &self.unresolved);
        out
    }

    fn negative(&self) -> bool {
        self.verdict != "stable"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetsReport {
    pub horizon: HorizonJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    pub partial: bool,
    pub sets: Vec<Vec<String>>,
}

impl SetsReport {
    pub fn new(
        p: &Problem,
        sets: &[Vec<Matching>],
        partial: bool,
        horizon: HorizonJson,
        max_size: Option<usize>,
    ) -> Self {
        let mut sets: Vec<Vec<String>> = sets.iter().map(|v| sorted_literals(p, v)).collect();
        sets.sort();
        SetsReport { horizon, max_size, partial, sets }
    }
}

impl Report for SetsReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "horizon: {}", horizon_text(&self.horizon));
        if let Some(n) = self.max_size {
            let _ = writeln!(out, "max size: {n}");
        }
        if self.partial {
            out.push_str("PARTIAL: some searches were cut short; the list may be wrong\n");
        }
        let sets: Vec<String> = self.sets.iter().map(|v| v.join("; ")).collect();
        listing(&mut out, "stable sets", &sets);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateReport {
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matchings: Option<Vec<String>>,
}

impl Report for EnumerateReport {
    fn text(&self) -> String {
        match &self.matchings {
            Some(ms) => {
                let mut out = String::new();
                listing(&mut out, "matchings", ms);
                out
            }
            None => format!("matchings: {}\n", self.count),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseReport {
    Clinch { round: usize },
    PreVacate,
    Insert,
    Vacate,
    Join,
    Hop { student: String, seats: usize },
    Settle,
    Unplaced,
}

impl PhaseReport {
    fn new(p: &Problem, phase: Phase) -> Self {
        match phase {
            Phase::Clinch { round } => PhaseReport::Clinch { round: round + 1 },
            Phase::PreVacate => PhaseReport::PreVacate,
            Phase::Insert => PhaseReport::Insert,
            Phase::Vacate => PhaseReport::Vacate,
            Phase::Join => PhaseReport::Join,
            Phase::Hop { student, seats } => PhaseReport::Hop { student: p.student_name(student).into(), seats },
            Phase::Settle => PhaseReport::Settle,
            Phase::Unplaced => PhaseReport::Unplaced,
        }
    }

    fn text(&self) -> String {
        match self {
            PhaseReport::Clinch { round } => format!("clinch round {round}"),
            PhaseReport::PreVacate => "pre-vacate".into(),
            PhaseReport::Insert => "insert".into(),
            PhaseReport::Vacate => "vacate".into(),
            PhaseReport::Join => "join".into(),
            PhaseReport::Hop { student, seats } => format!("hop by {student} ({seats} seats)"),
            PhaseReport::Settle => "settle".into(),
            PhaseReport::Unplaced => "unplaced".into(),
        }
    }
}

/// How one move of a constructed path arose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    /// 1-based position in the path.
    pub r#move: usize,
    /// 1-based step of the mechanism trace.
    pub mechanism_step: usize,
    /// 1-based cycle or clinch group, in trace order.
    pub group: usize,
    pub phase: PhaseReport,
    pub evicted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub horizon: HorizonJson,
    pub valid: bool,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathReport {
    pub target: String,
    pub certificate: CertificateJson,
    #[serde(skip)]
    pub certificate_text: String,
    pub construction: Vec<MoveRecord>,
    pub groups_skipped: usize,
    pub validation: Validation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon_check: Option<Validation>,
}

impl PathReport {
    pub fn new(
        p: &Problem,
        target: &str,
        cert: &PathCertificate,
        log: &ConstructionLog,
        validation: Validation,
        horizon_check: Option<Validation>,
    ) -> Self {
        PathReport {
            target: target.into(),
            certificate: CertificateJson::new(p, cert),
            certificate_text: write_text(p, cert),
            construction: log
                .records
                .iter()
                .map(|r| MoveRecord {
                    r#move: r.move_index + 1,
                    mechanism_step: r.mechanism_step + 1,
                    group: r.group + 1,
                    phase: PhaseReport::new(p, r.phase),
                    evicted: students(p, &r.evicted),
                })
                .collect(),
            groups_skipped: log.groups_skipped,
            validation,
            horizon_check,
        }
    }
}

fn validation_text(v: &Validation) -> String {
    match &v.violation {
        None => "valid".into(),
        Some(e) => format!("invalid ({e})"),
    }
}

impl Report for PathReport {
    fn text(&self) -> String {
        let mut out = self.certificate_text.clone();
        let _ = writeln!(out, "# target: {}", self.target);
        for r in &self.construction {
            let _ = write!(
                out,
                "# move {}: {} (mechanism step {}, group {})",
                r.r#move,
                r.phase.text(),
                r.mechanism_step,
                r.group
            );
            if !r.evicted.is_empty() {
                let _ = write!(out, ", evicting {}", r.evicted.join(" "));
            }
            out.push('\n');
        }
        if self.groups_skipped > 0 {
            let _ = writeln!(out, "# groups already in place: {}", self.groups_skipped);
        }
        let _ = writeln!(
            out,
            "# check ({}): {}",
            horizon_text(&self.validation.horizon),
            validation_text(&self.validation)
        );
        if let Some(h) = &self.horizon_check {
            let _ = writeln!(out, "# check (horizon {}): {}", horizon_text(&h.horizon), validation_text(h));
        }
        out
    }

    fn negative(&self) -> bool {
        !self.validation.valid || self.horizon_check.as_ref().is_some_and(|h| !h.valid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidateReport {
    pub moves: usize,
    pub horizon: HorizonJson,
    pub valid: bool,
    pub violation: Option<String>,
    /// 0-based index of the failing move, when the violation is local to one.
    pub failing_step: Option<usize>,
}

impl Report for ValidateReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "moves: {}", self.moves);
        let _ = writeln!(out, "horizon: {}", horizon_text(&self.horizon));
        match &self.violation {
            None => out.push_str("verdict: valid\n"),
            Some(e) => {
                let _ = writeln!(out, "verdict: invalid\nviolation: {e}");
            }
        }
        out
    }

    fn negative(&self) -> bool {
        !self.valid
    }
}

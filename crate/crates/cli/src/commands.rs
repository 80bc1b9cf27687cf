use std::path::Path;

use farsight_core::farsight::{
    validate, validate_path_horizon, HorizonOptions, PathViolation, PhiEngine, DEFAULT_PHI_CAP,
};
use farsight_core::matching::{enumerate_matchings_capped, DEFAULT_ENUMERATION_CAP};
use farsight_core::paths::build_path_logged;
use farsight_core::welfare;
use farsight_core::{Horizon, Matching, Mechanism, Problem};

use crate::args::{horizon, Cli, Command, Format, Property};
use crate::certificate;
use crate::error::CliError;
use crate::instance::parse_instance;
use crate::report::*;

/// What to print and the exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    parse_instance(&read(path)?).map_err(|diagnostics| CliError::Invalid { path: path.to_path_buf(), diagnostics })
}

fn matching(p: &Problem, text: &str) -> Result<Matching, CliError> {
    Matching::parse(p, text).map_err(|source| CliError::Literal { text: text.trim().into(), source })
}

fn emit(report: &impl Report, format: Format) -> Output {
    let stdout = match format {
        Format::Text => report.text(),
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
    };
    Output { stdout, code: u8::from(report.negative()) }
}

fn engine(p: &Problem, cap: Option<usize>) -> Result<PhiEngine<'_>, CliError> {
    Ok(PhiEngine::with_cap(p, cap.unwrap_or(DEFAULT_PHI_CAP))?)
}

fn validation(h: Horizon, result: Result<(), PathViolation>) -> Validation {
    Validation { horizon: h.into(), valid: result.is_ok(), violation: result.err().map(|e| e.to_string()) }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Solve { instance, mechanism, trace } => {
            let p = load(&instance.instance)?;
            let (m, t) = Mechanism::from(*mechanism).run(&p);
            let mut report = SolveReport::new(&p, &m, Some(&t));
            if !trace {
                report.trace = None;
            }
            Ok(emit(&report, format))
        }
        Command::Properties { instance, matching: text, require } => {
            let p = load(&instance.instance)?;
            let m = matching(&p, text)?;
            let improvement = match cli.cap {
                Some(cap) => {
                    enumerate_matchings_capped(&p, cap)?.into_iter().find(|x| welfare::pareto_dominates(&p, x, &m))
                }
                None => welfare::pareto_improvement(&p, &m)?,
            };
            let mut report = PropertiesReport {
                matching: literal(&p, &m),
                individually_rational: welfare::is_individually_rational(&p, &m),
                non_wasteful: welfare::is_non_wasteful(&p, &m),
                waste: welfare::waste(&p, &m)
                    .into_iter()
                    .map(|(i, s)| Placement { student: p.student_name(i).into(), school: p.school_name(s).into() })
                    .collect(),
                no_justified_envy: welfare::has_no_justified_envy(&p, &m),
                justified_envy: welfare::justified_envy(&p, &m).iter().map(|e| EnvyReport::new(&p, e)).collect(),
                stable: welfare::is_stable(&p, &m),
                pareto_efficient: improvement.is_none(),
                pareto_improvement: improvement.map(|x| literal(&p, &x)),
                requirements: Vec::new(),
            };
            let mut wanted = require.clone();
            wanted.sort_by_key(|r| *r as u8);
            wanted.dedup();
            report.requirements = wanted
                .into_iter()
                .map(|r| {
                    let (name, holds) = match r {
                        Property::IndividuallyRational => ("individually-rational", report.individually_rational),
                        Property::NonWasteful => ("non-wasteful", report.non_wasteful),
                        Property::NoJustifiedEnvy => ("no-justified-envy", report.no_justified_envy),
                        Property::Stable => ("stable", report.stable),
                        Property::ParetoEfficient => ("pareto-efficient", report.pareto_efficient),
                    };
                    Requirement { property: name.into(), holds }
                })
                .collect();
            Ok(emit(&report, format))
        }
        Command::Phi { instance, from, horizon: k, depth_cap } => {
            let p = load(&instance.instance)?;
            let m = matching(&p, from)?;
            let e = engine(&p, cli.cap)?;
            let (targets, partial) = match k {
                None => (e.phi(&m)?, false),
                Some(k) => {
                    let opts = HorizonOptions { depth_cap: *depth_cap, ..HorizonOptions::default() };
                    let reach = e.phi_horizon(&m, k.get(), &opts)?;
                    (reach.targets, reach.partial)
                }
            };
            let report = PhiReport {
                from: literal(&p, &m),
                horizon: horizon(*k).into(),
                depth_cap: *depth_cap,
                partial,
                matchings: sorted_literals(&p, &targets),
            };
            Ok(emit(&report, format))
        }
        Command::Path { instance, target, from, check_horizon } => {
            let p = load(&instance.instance)?;
            let m = matching(&p, from)?;
            let mechanism = Mechanism::from(*target);
            let (cert, log) = build_path_logged(&p, mechanism, &m)?;
            let own = validation(cert.horizon, validate(&p, &cert));
            let extra =
                check_horizon.map(|k| validation(Horizon::Steps(k.get()), validate_path_horizon(&p, &cert, k.get())));
            Ok(emit(&PathReport::new(&p, mechanism.name(), &cert, &log, own, extra), format))
        }
        Command::ValidatePath { instance, file } => {
            let p = load(&instance.instance)?;
            let cert = certificate::parse(&p, &read(file)?)
                .map_err(|diagnostics| CliError::Invalid { path: file.clone(), diagnostics })?;
            let result = validate(&p, &cert);
            let report = ValidateReport {
                moves: cert.len(),
                horizon: cert.horizon.into(),
                valid: result.is_ok(),
                failing_step: result.as_ref().err().and_then(|e| e.step()),
                violation: result.err().map(|e| e.to_string()),
            };
            Ok(emit(&report, format))
        }
        Command::CheckSet { instance, set, horizon: k } => {
            let p = load(&instance.instance)?;
            let v = set
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(|t| matching(&p, t))
                .collect::<Result<Vec<_>, _>>()?;
            let h = horizon(*k);
            let r = engine(&p, cli.cap)?.check_stable_set(&v, h, &HorizonOptions::default())?;
            Ok(emit(&CheckSetReport::new(&p, &r, h.into()), format))
        }
        Command::FindSingletons { instance, horizon: k } => {
            let p = load(&instance.instance)?;
            let h = horizon(*k);
            let found = engine(&p, cli.cap)?.find_singleton_stable_sets(h, &HorizonOptions::default());
            Ok(emit(&SetsReport::new(&p, &found.sets, found.partial, h.into(), None), format))
        }
        Command::FindSets { instance, max_size, horizon: k } => {
            let p = load(&instance.instance)?;
            let h = horizon(*k);
            let found = engine(&p, cli.cap)?.find_stable_sets(*max_size, h, &HorizonOptions::default())?;
            Ok(emit(&SetsReport::new(&p, &found.sets, found.partial, h.into(), Some(*max_size)), format))
        }
        Command::Enumerate { instance, list } => {
            let p = load(&instance.instance)?;
            let all = enumerate_matchings_capped(&p, cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP))?;
            let report = EnumerateReport { count: all.len(), matchings: list.then(|| sorted_literals(&p, &all)) };
            Ok(emit(&report, format))
        }
    }
}

//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{
    all_lists, lit, market, pareto_efficient, permutations, phi_by_paths, product_space, random_problem, stable,
    step_allowed,
};
use farsight_core::farsight::{
    check_stable_set, find_enforcing_coalition, find_singleton_stable_sets, find_stable_sets, validate_path,
    validate_path_horizon, PhiEngine, Verdict,
};
use farsight_core::paths::build_path_logged;
use farsight_core::{fixtures, Coalition, Horizon, Matching, Mechanism, PathCertificate, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Default)]
struct Report {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn show(p: &Problem, ms: &[Matching]) -> String {
    ms.iter().map(|m| format!("{{{}}}", m.display(p))).collect::<Vec<_>>().join(" ")
}

/// A shortest improving path from `from` to `to`, checked by the
/// library validator and edge by edge by the brute-force oracle.
fn evidence(p: &Problem, engine: &PhiEngine<'_>, from: &Matching, to: &Matching) -> String {
    let (x, t) = (engine.index_of(from).unwrap(), engine.index_of(to).unwrap());
    let Some(path) = engine.path_indices(x, t) else { return format!("no path to {{{}}}", to.display(p)) };
    let ms: Vec<Matching> = path.iter().map(|&k| engine.space()[k].clone()).collect();
    let coalitions: Vec<Coalition> =
        ms.windows(2).map(|w| find_enforcing_coalition(p, &w[0], &w[1], to).unwrap()).collect();
    let oracle = ms.windows(2).all(|w| step_allowed(p, &w[0], &w[1], to));
    let cert = PathCertificate::from_parts(ms.clone(), coalitions.clone(), Horizon::Farsighted);
    let mut out = format!("{{{}}}", ms[0].display(p));
    for (m, n) in ms[1..].iter().zip(&coalitions) {
        out += &format!(" --[{}]--> {{{}}}", n.display(p), m.display(p));
    }
    let verdict = match validate_path(p, &cert) {
        Ok(()) if oracle => "valid, oracle agrees".to_string(),
        Ok(()) => "valid, ORACLE DISAGREES".to_string(),
        Err(e) => format!("invalid: {e}"),
    };
    format!("{out} ({verdict})")
}

fn mechanism_goldens() -> Report {
    let mut r = Report::default();
    let mut golden = |p: &Problem, market: &str, mech: Mechanism, want: &str| {
        let got = mech.run(p).0;
        r.expect(got == lit(p, want), format!("{market} {mech}: got {{{}}}, want {{{want}}}", got.display(p)));
    };
    let ex1 = fixtures::ttc_vs_da();
    golden(&ex1, "ttc_vs_da", Mechanism::Ttc, "i1->s1, i2->s1, i3->s2, i4->s3");
    golden(&ex1, "ttc_vs_da", Mechanism::Da, "i1->s1, i2->s2, i3->s1, i4->s3");
    golden(&ex1, "ttc_vs_da", Mechanism::Ia, "i1->s1, i2->s3, i3->s2, i4->s1");
    let ex2 = fixtures::clinch_first();
    golden(&ex2, "clinch_first", Mechanism::Fct, "i1->s1, i2->s1, i3->s2");
    golden(&ex2, "clinch_first", Mechanism::Ttc, "i1->s2, i2->s1, i3->s1");
    let ex3 = fixtures::iterated_clinch();
    golden(&ex3, "iterated_clinch", Mechanism::Ct, "i1->s1, i2->s1, i3->s2, i4->s3");
    golden(&ex3, "iterated_clinch", Mechanism::Ttc, "i1->s2, i2->s1, i3->s1, i4->s3");
    golden(&ex3, "iterated_clinch", Mechanism::Fct, "i1->s2, i2->s1, i3->s1, i4->s3");
    let ex4 = fixtures::seat_inheritance();
    golden(&ex4, "seat_inheritance", Mechanism::Ettc, "i1->s1, i2->s3, i3->s1, i4->s2");
    golden(&ex4, "seat_inheritance", Mechanism::Ttc, "i1->s1, i2->s3, i3->s2, i4->s1");
    golden(&ex4, "seat_inheritance", Mechanism::Da, "i1->s1, i2->s1, i3->s2, i4->s3");

    let out = |p: &Problem, m: Mechanism| m.run(p).0;
    use Mechanism::*;
    let t1 = out(&ex1, Ttc);
    r.expect(
        t1 == out(&ex1, Fct) && t1 == out(&ex1, Ct) && t1 == out(&ex1, Ettc) && t1 != out(&ex1, Da),
        "ttc_vs_da: TTC = FCT = CT = ETTC != DA",
    );
    let f2 = out(&ex2, Fct);
    r.expect(
        out(&ex2, Ttc) == out(&ex2, Ettc) && out(&ex2, Ttc) != f2 && f2 == out(&ex2, Ct) && f2 == out(&ex2, Da),
        "clinch_first: TTC = ETTC != FCT = CT = DA",
    );
    let t3 = out(&ex3, Ttc);
    r.expect(
        t3 == out(&ex3, Ettc) && t3 == out(&ex3, Fct) && t3 != out(&ex3, Ct) && out(&ex3, Ct) == out(&ex3, Da),
        "iterated_clinch: TTC = ETTC = FCT != CT = DA",
    );
    r
}

struct ExampleOne {
    p: Problem,
    t: Matching,
    d: Matching,
    b: Matching,
    mu: [Matching; 5],
}

fn example_one() -> ExampleOne {
    let p = fixtures::ttc_vs_da();
    let mu = [
        "i1->s1, i2->self, i3->s2, i4->s1",
        "i1->s1, i2->s3, i3->s2, i4->s1",
        "i1->s1, i2->s2, i3->self, i4->s1",
        "i1->s1, i2->s2, i3->s3, i4->s1",
        "i1->s1, i2->s2, i3->s1, i4->self",
    ]
    .map(|s| lit(&p, s));
    ExampleOne {
        t: lit(&p, "i1->s1, i2->s1, i3->s2, i4->s3"),
        d: lit(&p, "i1->s1, i2->s2, i3->s1, i4->s3"),
        b: lit(&p, "i1->s1, i2->s3, i3->s2, i4->s1"),
        mu,
        p,
    }
}

fn phi_goldens() -> Report {
    let mut r = Report::default();
    let e = example_one();
    let p = &e.p;
    let started = Instant::now();
    let engine = PhiEngine::new(p).unwrap();
    let map = engine.phi_map();
    let elapsed = started.elapsed();
    r.expect(elapsed.as_secs_f64() < 10.0, format!("phi map took {elapsed:?}"));
    let phi = |m: &Matching| -> Vec<Matching> {
        map[engine.index_of(m).unwrap()].iter().map(|&k| engine.space()[k].clone()).collect()
    };
    let phi_d = phi(&e.d);
    let phi_t = phi(&e.t);
    r.note(format!("|phi(mu^D)| = {}, |phi(mu^T)| = {}, phi map in {elapsed:.2?}", phi_d.len(), phi_t.len()));
    r.expect(phi_d == [e.t.clone()], format!("phi(mu^D) = {{mu^T}}: found {} matchings", phi_d.len()));
    let mut four = e.mu[..4].to_vec();
    four.sort();
    r.expect(phi_t == four, format!("phi(mu^T) = {{mu^1..mu^4}}: found {} matchings", phi_t.len()));
    r.expect(e.mu[..4].iter().all(|m| phi_t.contains(m)), "mu^1..mu^4 in phi(mu^T)");
    r.expect(!phi_t.contains(&e.mu[4]), "mu^5 not in phi(mu^T)");
    for (k, m) in e.mu.iter().enumerate() {
        r.expect(phi(m).contains(&e.d), format!("mu^D in phi(mu^{})", k + 1));
    }
    if let Some(other) = phi_d.iter().find(|m| **m == lit(p, "i1->s1, i2->s1, i3->s2, i4->self")) {
        r.note(format!("mu^D reaches {}", evidence(p, &engine, &e.d, other)));
    }
    if let Some(extra) = phi_t.iter().find(|m| !four.contains(m)) {
        r.note(format!("mu^T reaches {}", evidence(p, &engine, &e.t, extra)));
    }
    r
}

fn stable_set_verdicts() -> Report {
    let mut r = Report::default();
    let e = example_one();
    let p = &e.p;
    let verdict = |v: &[Matching]| check_stable_set(p, v, Horizon::Farsighted).unwrap();
    let t = verdict(std::slice::from_ref(&e.t));
    r.expect(t.verdict == Verdict::Stable, "{mu^T} stable");
    let d = verdict(std::slice::from_ref(&e.d));
    r.expect(d.verdict == Verdict::NotStable && !d.external.is_empty(), "{mu^D} fails external stability");
    let b = verdict(std::slice::from_ref(&e.b));
    r.expect(b.verdict == Verdict::NotStable && !b.external.is_empty(), "{mu^B} fails external stability");
    r.note(format!("{{mu^B}} verdict: {:?}, {} external failures", b.verdict, b.external.len()));
    let sets = find_stable_sets(p, 3, Horizon::Farsighted).unwrap();
    r.expect(!sets.partial && !sets.sets.iter().any(|v| v.contains(&e.d)), "no stable set of size <= 3 holds mu^D");
    r.note(format!("{} stable sets of size <= 3", sets.sets.len()));
    let singles = find_singleton_stable_sets(p, Horizon::Farsighted).unwrap();
    let found: Vec<Matching> = singles.sets.iter().map(|v| v[0].clone()).collect();
    r.expect(found == [e.t.clone()], format!("singleton stable sets = {{mu^T}}: found {}", found.len()));
    r.note(format!("singleton stable sets: {}", show(p, &found)));
    r
}

fn constructive_paths() -> Report {
    let mut r = Report::default();
    let mut built = 0;
    for (name, p) in fixtures::all() {
        let space = product_space(&p);
        for mech in [Mechanism::Ttc, Mechanism::Fct, Mechanism::Ct, Mechanism::Ettc] {
            let target = mech.run(&p).0;
            for m in space.iter().filter(|m| **m != target) {
                let what = || format!("{name} {mech} from {{{}}}", m.display(&p));
                match build_path_logged(&p, mech, m) {
                    Err(e) => r.expect(false, format!("{}: {e}", what())),
                    Ok((cert, _)) => {
                        built += 1;
                        r.expect(cert.end() == Some(&target), format!("{}: wrong end", what()));
                        if let Err(e) = validate_path(&p, &cert) {
                            r.expect(false, format!("{}: {e}", what()));
                        }
                        if mech == Mechanism::Ttc {
                            if let Err(e) = validate_path_horizon(&p, &cert, 3) {
                                r.expect(false, format!("{}: horizon 3: {e}", what()));
                            }
                        }
                    }
                }
            }
        }
    }
    let p = fixtures::ttc_vs_da();
    let walk = build_path_logged(&p, Mechanism::Ttc, &lit(&p, "i1->s1, i2->s2, i3->s3, i4->s1")).unwrap().0;
    r.expect(validate_path_horizon(&p, &walk, 1).is_err(), "walkthrough path fails horizon 1");
    r.note(format!("{built} certificates built and validated"));
    r
}

fn ttc_reached_from_everywhere() -> Report {
    let mut r = Report::default();
    let e = example_one();
    let engine = PhiEngine::new(&e.p).unwrap();
    let t = engine.index_of(&e.t).unwrap();
    let sources = engine.sources_of(t);
    let missing: Vec<Matching> =
        (0..engine.len()).filter(|k| !sources.contains(k)).map(|k| engine.space()[k].clone()).collect();
    r.expect(missing.is_empty(), format!("mu^T not reachable from {}", show(&e.p, &missing)));
    r.note(format!("{} of {} matchings reach mu^T", sources.len() - 1, engine.len() - 1));
    r
}

fn phi_matches_path_enumeration() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut instances = 0;
    let mut compared = 0;
    while instances < 50 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=2);
        let p = random_problem(&mut rng, n, m, 2);
        let space = product_space(&p);
        if space.len() > 8 || space.len() < 2 {
            continue;
        }
        instances += 1;
        let engine = PhiEngine::new(&p).unwrap();
        for x in 0..space.len() {
            compared += 1;
            let bfs = engine.phi(&space[x]).unwrap();
            let brute = phi_by_paths(&p, &space, x);
            r.expect(bfs == brute, format!("mismatch from {{{}}}", space[x].display(&p)));
        }
    }
    r.note(format!("{instances} instances, {compared} phi sets compared"));
    r
}

fn misreport_gains(p: &Problem) -> Option<String> {
    let lists = all_lists(p.num_schools());
    for mech in [Mechanism::Ttc, Mechanism::Da] {
        let truthful = mech.run(p).0;
        for i in p.student_ids() {
            for list in &lists {
                let mut raw = p.to_raw();
                raw.preferences[i.0].value = list.iter().map(|&s| format!("s{}", s + 1)).collect();
                let lied = mech.run(&Problem::new(&raw).unwrap()).0;
                if p.prefers(i, lied.get(i), truthful.get(i)) {
                    return Some(format!("{mech}: {} gains by reporting {list:?}", p.student_name(i)));
                }
            }
        }
    }
    None
}

/// Every market with `n` students and `m` schools, quotas capped at `n`.
fn every_market(n: usize, m: usize, mut visit: impl FnMut(&Problem)) {
    let lists = all_lists(m);
    let orders = permutations(n);
    let mut quotas = vec![1; m];
    loop {
        let mut prefs = vec![0; n];
        loop {
            let mut prios = vec![0; m];
            loop {
                let p = market(
                    &quotas,
                    &prefs.iter().map(|&k| lists[k].clone()).collect::<Vec<_>>(),
                    &prios.iter().map(|&k| orders[k].clone()).collect::<Vec<_>>(),
                );
                visit(&p);
                if !advance(&mut prios, orders.len()) {
                    break;
                }
            }
            if !advance(&mut prefs, lists.len()) {
                break;
            }
        }
        let mut k = 0;
        while k < m && quotas[k] == n {
            quotas[k] = 1;
            k += 1;
        }
        if k == m {
            break;
        }
        quotas[k] += 1;
    }
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn property_suite() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (n, m) = (rng.random_range(1..=5), rng.random_range(1..=4));
        let p = random_problem(&mut rng, n, m, 2);
        let space = product_space(&p);
        for mech in Mechanism::ALL {
            let out = mech.run(&p).0;
            let ok = match mech {
                Mechanism::Da => stable(&p, &out),
                _ => pareto_efficient(&p, &out, &space),
            };
            r.expect(ok, format!("{mech} on a {n}x{m} market gives {{{}}}", out.display(&p)));
        }
    }
    let mut exhaustive = 0;
    for n in 1..=3 {
        for m in 1..=3 {
            if (n, m) == (3, 3) {
                continue;
            }
            every_market(n, m, |p| {
                exhaustive += 1;
                if let Some(gain) = misreport_gains(p) {
                    r.expect(false, gain);
                }
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sampled = 5000;
    for _ in 0..sampled {
        let p = random_problem(&mut rng, 3, 3, 3);
        if let Some(gain) = misreport_gains(&p) {
            r.expect(false, gain);
        }
    }
    r.note(format!(
        "200 random markets; misreports checked on every market up to 3x3 except 3x3 ({exhaustive}), plus {sampled} sampled 3x3"
    ));
    r
}

fn negative_results() -> Report {
    let mut r = Report::default();
    let e = example_one();
    let p = &e.p;
    r.expect(pareto_efficient(p, &e.b, &product_space(p)), "mu^B is Pareto efficient");
    let sets = find_stable_sets(p, 3, Horizon::Farsighted).unwrap();
    r.expect(!sets.partial, "stable set search completed");
    r.expect(!sets.sets.iter().any(|v| v.contains(&e.d)), "mu^D in no stable set of size <= 3");
    let with_b: Vec<&Vec<Matching>> = sets.sets.iter().filter(|v| v.contains(&e.b)).collect();
    r.expect(with_b.is_empty(), format!("mu^B in no stable set of size <= 3: found in {}", with_b.len()));
    let engine = PhiEngine::new(p).unwrap();
    let b = engine.index_of(&e.b).unwrap();
    let d = engine.index_of(&e.d).unwrap();
    r.note(format!("mu^D reaches mu^B: {}", engine.path_indices(d, b).is_some()));
    r
}

type Criterion = (&'static str, fn() -> Report);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("mechanism goldens", mechanism_goldens),
        ("phi on the ttc_vs_da market", phi_goldens),
        ("stable-set verdicts on the ttc_vs_da market", stable_set_verdicts),
        ("constructive paths", constructive_paths),
        ("TTC outcome reached from every matching", ttc_reached_from_everywhere),
        ("phi against simple-path enumeration", phi_matches_path_enumeration),
        ("mechanism properties", property_suite),
        ("DA and IA outcomes outside every stable set", negative_results),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let report = run();
        let status = if report.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} ({title}): {status} [{:.2?}]", k + 1, started.elapsed());
        for f in report.failures.iter().take(5) {
            println!("    failed: {f}");
        }
        if report.failures.len() > 5 {
            println!("    ... {} more", report.failures.len() - 5);
        }
        for n in &report.notes {
            println!("    {n}");
        }
        failed += usize::from(!report.failures.is_empty());
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance report: one line per criterion, then wall-clock timings.
//!
//! The suite runs twice; criterion 10 compares the two reports byte for
//! byte. Timings are printed after the report and never enter it.

mod common;

use std::fmt::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use beliefkit::fixtures;
use beliefkit::hypothesis_testing::{eps_os_to_ht, ht_rule, ht_select, os_to_ht, rules_equal};
use beliefkit::lps::{indifference_resolution_demo, lps_compare};
use beliefkit::ordered_surprises::{cps_to_os, eps_os_update, os_rule, os_update};
use beliefkit::preferences::{
    check_conditional_consistency, check_consequentialism, check_risk_independence, consequentialism_pairs,
    constant_act_rankings_agree, default_triples, os_prefer, risk_probe_lotteries, PreferenceFamily, RuleFamily,
    Verdict,
};
use beliefkit::rules::{check_chain_rule, conservative_rule, nested_triples, validate_cps, CpsVerdict};
use beliefkit::{Event, OsRepresentation, Rational, UtilityFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

struct Suite {
    corpus: Vec<OsRepresentation>,
    report: String,
    timings: Vec<(&'static str, Duration)>,
    failed: usize,
}

impl Suite {
    fn record(&mut self, id: u32, pass: bool, detail: impl AsRef<str>) {
        let mark = if pass { "PASS" } else { "FAIL" };
        let _ = writeln!(self.report, "[{mark}] AC-{id} {}", detail.as_ref());
        self.failed += usize::from(!pass);
    }

    fn timed<T>(&mut self, label: &'static str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push((label, start.elapsed()));
        out
    }
}

fn show_list(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn ac1(s: &mut Suite) {
    let coin = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/coin.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_beliefkit"))
        .arg("update")
        .arg(&coin)
        .args(["--os", "--event", "el,l1,l2"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    s.timings.push(("AC-1 binary", elapsed));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let pass = out.status.code() == Some(0)
        && stdout.contains("selected: mu1 (order 1)\n")
        && stdout.contains("belief: el↦1\n")
        && elapsed < Duration::from_secs(1);
    s.record(1, pass, "coin update on {el,l1,l2} selects mu1 and returns el↦1 within 1 s");
}

fn ac2(s: &mut Suite) {
    let ht = fixtures::coin_ht_counterexample();
    let space = ht.space().clone();
    let a = space.event(["el", "l1", "l2"]).unwrap();
    let e = space.event(["e", "el", "l1", "l2"]).unwrap();
    let (on_a, _) = ht_select(&ht, a).unwrap();
    let (on_e, _) = ht_select(&ht, e).unwrap();
    let scores_ok = on_a.scores == [q(0, 1), q(1, 24), q(1, 6)]
        && on_a.chosen == 2
        && on_e.scores == [q(0, 1), q(1, 3), q(1, 6)]
        && on_e.chosen == 1;
    let verdict = validate_cps(&ht_rule(&ht).unwrap());
    let (witness_ok, detail) = match &verdict {
        CpsVerdict::Violation(w) => (
            w.lhs == q(1, 8) && w.g_given_f.is_zero() && w.f_given_e == q(1, 8) && w.rhs.is_zero(),
            format!(
                "G={} F={} E={}: {} ≠ {}·{}",
                space.show(w.g),
                space.show(w.f),
                space.show(w.e),
                w.lhs,
                w.g_given_f,
                w.f_given_e
            ),
        ),
        other => (false, format!("{other:?}")),
    };
    s.record(
        2,
        scores_ok && witness_ok,
        format!(
            "hypothesis testing picks mu{} on A {} and mu{} on E {}; chain rule fails at {detail}",
            on_a.chosen,
            show_list(&on_a.scores),
            on_e.chosen,
            show_list(&on_e.scores)
        ),
    );
}

fn ac3(s: &mut Suite) {
    let start = Instant::now();
    let mut valid = 0;
    let mut triples = 0usize;
    for os in &s.corpus {
        let rule = os_rule(os);
        let screened = validate_cps(&rule).is_valid();
        let mut exhaustive = true;
        for (g, f, e) in nested_triples(rule.space()) {
            triples += 1;
            if check_chain_rule(&rule, g, f, e).unwrap().is_some() {
                exhaustive = false;
                break;
            }
        }
        valid += usize::from(screened && exhaustive);
    }
    let elapsed = start.elapsed();
    s.timings.push(("AC-3 corpus", elapsed));
    let n = s.corpus.len();
    s.record(
        3,
        valid == n && elapsed < Duration::from_secs(60),
        format!("{valid}/{n} ordered-surprises rules are CPS ({triples} nested triples checked), within 60 s"),
    );
}

fn ac4(s: &mut Suite) {
    let mut ok = 0;
    for os in &s.corpus {
        let rule = os_rule(os);
        let Ok(back) = cps_to_os(&rule) else { continue };
        ok += usize::from(back == *os && os_rule(&back) == rule);
    }
    let coin = fixtures::coin_os();
    let recovered = cps_to_os(&os_rule(&coin)).map(|o| o.priors().to_vec());
    let coin_ok = recovered.as_deref() == Ok(&fixtures::coin_priors()[..]);
    let n = s.corpus.len();
    s.record(
        4,
        ok == n && coin_ok,
        format!("{ok}/{n} round trips exact; coin rule decomposes to mu0, mu1, mu2: {coin_ok}"),
    );
}

fn ac5(s: &mut Suite) {
    let coin = fixtures::coin_os();
    let c = os_to_ht(&coin);
    let space = coin.space().clone();
    let events = space.events();
    let coin_ok = c.ht.rho() == [q(64, 81), q(16, 81), q(1, 81)]
        && c.deltas[..2] == [q(1, 2), q(1, 8)]
        && rules_equal(&os_rule(&coin), &ht_rule(&c.ht).unwrap(), events.iter().copied());
    let mut agree = 0;
    for os in &s.corpus {
        let c = os_to_ht(os);
        if let Ok(rule) = ht_rule(&c.ht) {
            agree += usize::from(rules_equal(&os_rule(os), &rule, os.space().events()));
        }
    }
    let n = s.corpus.len();
    s.record(
        5,
        coin_ok && agree == n,
        format!(
            "coin rho {} from deltas {}, rules equal on all {} events; {agree}/{n} corpus embeddings equal",
            show_list(c.ht.rho()),
            show_list(&c.deltas[..2]),
            events.len()
        ),
    );
}

/// Whether `edges` on `n` nodes admit a topological order.
fn acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; n];
    for &(_, b) in edges {
        indegree[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(a) = stack.pop() {
        seen += 1;
        for &(x, b) in edges {
            if x == a {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    seen == n
}

fn ac6(s: &mut Suite) {
    let mut parts = Vec::new();
    let mut pass = true;
    for eps in [q(0, 1), q(1, 8), q(1, 4)] {
        let (mut agree, mut acyclic_count, mut zero_threshold, mut defined) = (0, 0, 0, 0usize);
        for os in &s.corpus {
            let Ok(c) = eps_os_to_ht(os, &eps) else { continue };
            let mut all = true;
            for e in os.space().events() {
                if let Ok(want) = eps_os_update(os, &eps, e) {
                    defined += 1;
                    all &= matches!(ht_select(&c.ht, e), Ok((_, got)) if got == want);
                }
            }
            agree += usize::from(all);
            acyclic_count += usize::from(acyclic(c.ht.priors().len(), &c.relation));
            zero_threshold += usize::from(c.threshold().is_zero());
        }
        let n = s.corpus.len();
        pass &= agree == n && acyclic_count == n && (!eps.is_zero() || zero_threshold == n);
        parts.push(format!("eps {eps}: {agree}/{n} agree on {defined} defined events, {acyclic_count}/{n} acyclic"));
        if eps.is_zero() {
            parts.push(format!("threshold 0 in {zero_threshold}/{n}"));
        }
    }
    s.record(6, pass, parts.join("; "));
}

fn ac7(s: &mut Suite) {
    let fam = fixtures::coin_family();
    let lps = fixtures::coin_lps();
    let u = fixtures::money_utility();
    let space = lps.space().clone();
    let g = fixtures::edge_hedge(&space);
    let f1 = fixtures::faces_bet(&space, 1);
    let f2 = fixtures::faces_bet(&space, 2);
    let edges = space.event(["e", "el"]).unwrap();
    let at2 = lps_compare(&lps, &u, &f2, &g).unwrap();
    let at1 = lps_compare(&lps, &u, &f1, &g).unwrap();
    let ex_ante = os_prefer(&fam, space.full(), &f1, &g).unwrap();
    let given = os_prefer(&fam, edges, &f1, &g).unwrap();
    let demo = indifference_resolution_demo(&fam, &lps, &u, &f1, &g, edges).unwrap();
    let pass = at2 == Verdict::PrefersFirst
        && at1 == Verdict::PrefersSecond
        && ex_ante == Verdict::Indifferent
        && given == Verdict::PrefersSecond
        && demo.os_only_resolution();
    s.record(
        7,
        pass,
        format!(
            "lps v=2 {at2}, v=1 {at1}; os ex ante {ex_ante}, given {} {given}; os-only resolution {}",
            space.show(edges),
            demo.os_only_resolution()
        ),
    );
}

fn ac8(s: &mut Suite) {
    let [mu0, ..] = fixtures::coin_priors();
    let space = mu0.space().clone();
    let half = conservative_rule(&mu0, &q(1, 2)).unwrap();
    let e = space.event(["e"]).unwrap();
    let witness = half.concentration_violations().find(|(x, _)| *x == e);
    let witness_ok = witness.as_ref().is_some_and(|(_, m)| *m == q(1, 2));
    let one = conservative_rule(&mu0, &Rational::one()).unwrap();
    let prior_everywhere = one.entries().all(|(_, b)| *b == mu0) && one.is_complete();
    let pass = half.is_complete() && !half.is_concentrated() && witness_ok && prior_everywhere;
    s.record(
        8,
        pass,
        format!(
            "delta 1/2: complete {}, concentrated {}, P({{e}}|{{e}}) = {}; delta 1 returns the prior on all {} events: {prior_everywhere}",
            half.is_complete(),
            half.is_concentrated(),
            witness.map_or("none".into(), |(_, m)| m.to_string()),
            one.len()
        ),
    );
}

fn base_utility() -> UtilityFunction {
    UtilityFunction::new([("x0", q(0, 1)), ("x1", q(1, 1)), ("x2", q(3, 1))])
}

/// `S_k`: the states no earlier prior supports.
fn surprise_levels(os: &OsRepresentation) -> Vec<Event> {
    let mut claimed = Event::EMPTY;
    os.priors()
        .iter()
        .map(|mu| {
            let level = os.space().full().difference(claimed);
            claimed = claimed.union(mu.support());
            level
        })
        .collect()
}

/// Nested `(E, A)` pairs with `A` feasible given `E`: each `(S_k, supp μ_k)`
/// and `RANDOM_PAIRS` random ones.
fn axiom_pairs(rng: &mut ChaCha8Rng, os: &OsRepresentation) -> Vec<(Event, Event)> {
    const RANDOM_PAIRS: usize = 3;
    let mut pairs: Vec<(Event, Event)> = surprise_levels(os).into_iter().zip(os.priors().iter().map(|mu| mu.support())).collect();
    for _ in 0..RANDOM_PAIRS {
        let e = common::event_in(rng, os.space());
        let support = os_update(os, e).unwrap().support();
        let a = Event::from_bits(e.bits() & rng.gen_range(1..=e.bits()));
        let a = if a.intersects(support) { a } else { a.union(Event::singleton(support.states().next().unwrap())) };
        pairs.push((e, a));
    }
    pairs
}

fn ac9(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(common::CORPUS_SEED ^ 9);
    let u0 = base_utility();
    let (mut families_ok, mut cc_checks, mut cq_checks) = (0, 0usize, 0usize);
    let corpus = std::mem::take(&mut s.corpus);
    for os in &corpus {
        let utilities = (0..os.len() as i64).map(|k| u0.affine(&q(k + 1, 1), &q(k, 1))).collect();
        let fam = PreferenceFamily::new(os.clone(), utilities).unwrap();
        let triples = default_triples(os.space(), &u0).unwrap();
        let mut ok = true;
        for (e, a) in axiom_pairs(&mut rng, os) {
            ok &= check_conditional_consistency(&fam, e, a, &triples).unwrap().is_none();
            cc_checks += triples.len();
            let pairs = consequentialism_pairs(os.space(), e, &u0).unwrap();
            ok &= check_consequentialism(&fam, e, &pairs).unwrap().is_none();
            cq_checks += pairs.len();
        }
        families_ok += usize::from(ok);
    }
    s.corpus = corpus;

    let adversarial = adversarial_witness();
    let (risk_ok, risk_detail) = risk_fixtures();
    let n = s.corpus.len();
    s.record(
        9,
        families_ok == n && adversarial.is_some() && risk_ok,
        format!(
            "{families_ok}/{n} families satisfy both axioms ({cc_checks} consistency triples, {cq_checks} consequentialism pairs); conservative updating fails: {}; {risk_detail}",
            adversarial.as_deref().unwrap_or("no witness")
        ),
    );
}

/// First axiom failure of conservative updating on the coin faces.
fn adversarial_witness() -> Option<String> {
    let [mu0, ..] = fixtures::coin_priors();
    let space = mu0.space().clone();
    let u = fixtures::money_utility();
    let fam = RuleFamily::new(conservative_rule(&mu0, &q(1, 2)).unwrap(), u.clone()).unwrap();
    let triples = default_triples(&space, &u).unwrap();
    for e in space.events() {
        let pairs = consequentialism_pairs(&space, e, &u).unwrap();
        if let Some(w) = check_consequentialism(&fam, e, &pairs).unwrap() {
            return Some(format!("consequentialism given {} ({})", space.show(e), w.verdict));
        }
        for a in e.nonempty_subsets() {
            if let Ok(Some(w)) = check_conditional_consistency(&fam, e, a, &triples) {
                return Some(format!(
                    "consistency of {} within {} ({} vs {})",
                    space.show(a),
                    space.show(e),
                    w.given_e,
                    w.given_a
                ));
            }
        }
    }
    None
}

fn risk_fixtures() -> (bool, String) {
    let os = fixtures::coin_os();
    let u0 = base_utility();
    let affine = u0.affine(&q(2, 1), &q(3, 1));
    let fam = PreferenceFamily::new(os.clone(), vec![u0.clone(), affine, u0.clone()]).unwrap();
    let report = check_risk_independence(&fam).unwrap();
    let coefficients = report.coefficients.get(&1).cloned();
    let probes = risk_probe_lotteries(&u0).unwrap();
    let affine_agrees = constant_act_rankings_agree(&fam, &probes).unwrap();

    let quadratic = UtilityFunction::new(u0.table().iter().map(|(x, v)| (x.clone(), v * v)));
    let qfam = PreferenceFamily::new(os, vec![u0.clone(), quadratic, u0]).unwrap();
    let qreport = check_risk_independence(&qfam).unwrap();
    let quadratic_agrees = constant_act_rankings_agree(&qfam, &probes).unwrap();

    let pass = report.holds
        && coefficients == Some((q(2, 1), q(3, 1)))
        && affine_agrees
        && !qreport.holds
        && !quadratic_agrees;
    let shown = coefficients.map_or("none".into(), |(a, b)| format!("({a}, {b})"));
    (
        pass,
        format!("risk independence recovers {shown} for 2u+3 and fails for u² (constant rankings agree: {affine_agrees}, {quadratic_agrees})"),
    )
}

fn run_suite() -> Suite {
    let mut s = Suite {
        corpus: Vec::new(),
        report: String::new(),
        timings: Vec::new(),
        failed: 0,
    };
    s.corpus = s.timed("corpus generation", |_| common::corpus());
    ac1(&mut s);
    s.timed("AC-2", ac2);
    ac3(&mut s);
    s.timed("AC-4", ac4);
    s.timed("AC-5", ac5);
    s.timed("AC-6", ac6);
    s.timed("AC-7", ac7);
    s.timed("AC-8", ac8);
    s.timed("AC-9", ac9);
    s
}

fn main() {
    let first = run_suite();
    let second = run_suite();
    let identical = first.report == second.report && first.failed == second.failed;
    let mut failed = first.failed;
    print!("{}", first.report);
    let mark = if identical { "PASS" } else { "FAIL" };
    println!("[{mark}] AC-10 two runs of the suite produce byte-identical reports ({} bytes)", first.report.len());
    failed += usize::from(!identical);

    println!("\ntimings (first run):");
    for (label, d) in &first.timings {
        println!("  {label}: {:.3} s", d.as_secs_f64());
    }
    println!("\n{} of 10 criteria failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

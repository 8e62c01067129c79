use std::fmt::Write as _;

use indexmap::IndexMap;
use serde_json::{json, Value};

use super::scenario::{belief_masses, Scenario, ScenarioDoc};
use super::{error_name, Command, Format, RuleChoice, EXIT_OK, EXIT_WITNESS};
use crate::act::{Act, UtilityFunction};
use crate::belief::{bayes_update, Belief};
use crate::error::Error;
use crate::hypothesis_testing::{eps_os_to_ht, first_difference, ht_rule, ht_select, os_to_ht, Branch};
use crate::lps::{clps_condition, indifference_resolution_demo, lps_compare, lps_value, LpsRepresentation};
use crate::ordered_surprises::{cps_to_os, eps_os_update, os_rule, os_update, surprise_partition, OsRepresentation};
use crate::preferences::{
    check_conditional_consistency, check_consequentialism, check_risk_independence, consequentialism_pairs,
    constant_act_rankings_agree, default_triples, risk_probe_lotteries, ConditionalPreferences, Verdict,
};
use crate::rational::Rational;
use crate::rules::{
    bayesian_rule, conservative_rule, conservative_update, validate_cps, CpsVerdict, CpsWitness, NotCandidate,
    UpdatingRule,
};
use crate::space::{Event, StateSpace};

pub(super) struct Report {
    text: String,
    json: Value,
    pub(super) code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: EXIT_OK }
    }

    fn witness(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: EXIT_WITNESS,
        }
    }

    pub(super) fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// A failure that is the caller's fault; rendered with a typed name.
pub(super) struct Failure {
    pub(super) kind: String,
    pub(super) message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: error_name(&e),
            message: e.to_string(),
        }
    }
}

fn missing(block: &str) -> Failure {
    Failure {
        kind: "MissingBlock".into(),
        message: format!("the scenario has no {block} block"),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        kind: "Usage".into(),
        message: message.into(),
    }
}

pub(super) fn dispatch(sc: &Scenario, command: Command) -> Result<Report, Failure> {
    match command {
        Command::ValidateCps { rule, .. } => validate(sc, &rule),
        Command::Decompose { rule, .. } => decompose(sc, &rule),
        Command::Update { rule, event, .. } => update(sc, &rule, &event),
        Command::EpsUpdate { eps, event, .. } => eps_update(sc, &eps, &event),
        Command::OsToHt { .. } => os_ht(sc),
        Command::EpsOsToHt { eps, .. } => eps_os_ht(sc, &eps),
        Command::HtSelect { event, .. } => select(sc, &event),
        Command::LpsCompare {
            acts, event, utility, ..
        } => lps(sc, &acts, event.as_deref(), utility.as_deref()),
        Command::CheckAxioms {
            conservative, utility, ..
        } => axioms(sc, conservative, utility.as_deref()),
        Command::Conservative { .. } => conservative(sc),
        Command::Partition { eps, .. } => partition(sc, &eps),
    }
}

fn ev(space: &StateSpace, e: Event) -> Value {
    Value::from(e.states().map(|i| space.label(i).to_string()).collect::<Vec<_>>())
}

fn bel(b: &Belief) -> Value {
    serde_json::to_value(belief_masses(b)).expect("masses serialize")
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn list(rs: &[Rational]) -> String {
    rs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn event_arg(sc: &Scenario, labels: &str) -> Result<Event, Failure> {
    let e = sc.space.parse_event(labels)?;
    if e.is_empty() {
        return Err(Error::EmptyEvent.into());
    }
    Ok(e)
}

fn os_block(sc: &Scenario) -> Result<&OsRepresentation, Failure> {
    sc.os.as_ref().ok_or_else(|| missing("os"))
}

fn names_or_default(names: Option<&Vec<String>>, len: usize, stem: &str) -> Vec<String> {
    names.cloned().unwrap_or_else(|| (0..len).map(|k| format!("{stem}{k}")).collect())
}

enum Source<'a> {
    Os(&'a OsRepresentation),
    Ht,
    Bayes(&'a str, &'a Belief),
    Conservative(&'a Belief, &'a Rational),
}

impl Source<'_> {
    fn label(&self, sc: &Scenario) -> String {
        match self {
            Source::Os(_) => "os".into(),
            Source::Ht => "ht".into(),
            Source::Bayes(name, _) => format!("bayes({name})"),
            Source::Conservative(_, delta) => {
                let prior = &sc.doc.conservative.as_ref().expect("block present").prior;
                format!("conservative({prior}, delta {delta})")
            }
        }
    }
}

fn source<'a>(sc: &'a Scenario, choice: &'a RuleChoice) -> Result<Source<'a>, Failure> {
    if choice.os {
        return Ok(Source::Os(os_block(sc)?));
    }
    if choice.ht {
        sc.ht.as_ref().ok_or_else(|| missing("ht"))?;
        return Ok(Source::Ht);
    }
    if let Some(name) = &choice.bayes {
        let b = sc
            .beliefs
            .get(name)
            .ok_or_else(|| usage(format!("no belief named {name:?}")))?;
        return Ok(Source::Bayes(name, b));
    }
    let (prior, delta) = sc.conservative.as_ref().ok_or_else(|| missing("conservative"))?;
    Ok(Source::Conservative(prior, delta))
}

fn build_rule(sc: &Scenario, src: &Source) -> Result<UpdatingRule, Error> {
    match src {
        Source::Os(os) => Ok(os_rule(os)),
        Source::Ht => ht_rule(sc.ht.as_ref().expect("checked")),
        Source::Bayes(_, b) => Ok(bayesian_rule(b)),
        Source::Conservative(b, d) => conservative_rule(b, d),
    }
}

fn witness_lines(space: &StateSpace, w: &CpsWitness) -> String {
    format!(
        "G: {}\nF: {}\nE: {}\nP(G|E): {}\nP(G|F): {}\nP(F|E): {}\nP(G|F)·P(F|E): {}\n",
        space.show(w.g),
        space.show(w.f),
        space.show(w.e),
        w.lhs,
        w.g_given_f,
        w.f_given_e,
        w.rhs
    )
}

fn witness_json(space: &StateSpace, w: &CpsWitness) -> Value {
    json!({
        "G": ev(space, w.g),
        "F": ev(space, w.f),
        "E": ev(space, w.e),
        "P(G|E)": rat(&w.lhs),
        "P(G|F)": rat(&w.g_given_f),
        "P(F|E)": rat(&w.f_given_e),
        "P(G|F)·P(F|E)": rat(&w.rhs),
    })
}

/// Text, JSON and exit code describing a CPS verdict.
fn verdict_report(sc: &Scenario, label: &str, verdict: &CpsVerdict) -> Report {
    let space = &sc.space;
    let mut text = format!("rule: {label}\n");
    match verdict {
        CpsVerdict::Valid => {
            text.push_str("verdict: valid\n");
            Report::ok(text, json!({"rule": label, "verdict": "valid"}))
        }
        CpsVerdict::Violation(w) => {
            text.push_str("verdict: chain rule violated\n");
            text.push_str(&witness_lines(space, w));
            Report::witness(
                text,
                json!({"rule": label, "verdict": "violation", "witness": witness_json(space, w)}),
            )
        }
        CpsVerdict::NotCandidate(NotCandidate::Incomplete { missing }) => {
            let _ = writeln!(text, "verdict: incomplete\nmissing: {}", space.show(*missing));
            Report::witness(
                text,
                json!({"rule": label, "verdict": "incomplete", "missing": ev(space, *missing)}),
            )
        }
        CpsVerdict::NotCandidate(NotCandidate::NotConcentrated { event, mass }) => {
            let e = space.show(*event);
            let _ = writeln!(text, "verdict: not concentrated\nP({e}|{e}): {mass}");
            Report::witness(
                text,
                json!({"rule": label, "verdict": "not-concentrated", "event": ev(space, *event), "mass": rat(mass)}),
            )
        }
    }
}

fn validate(sc: &Scenario, choice: &RuleChoice) -> Result<Report, Failure> {
    let src = source(sc, choice)?;
    let rule = build_rule(sc, &src)?;
    Ok(verdict_report(sc, &src.label(sc), &validate_cps(&rule)))
}

fn decompose(sc: &Scenario, choice: &RuleChoice) -> Result<Report, Failure> {
    let src = source(sc, choice)?;
    let rule = build_rule(sc, &src)?;
    let verdict = validate_cps(&rule);
    if !verdict.is_valid() {
        return Ok(verdict_report(sc, &src.label(sc), &verdict));
    }
    let os = cps_to_os(&rule)?;
    let names: Vec<String> = (0..os.len()).map(|k| format!("mu{k}")).collect();
    let doc = ScenarioDoc {
        states: sc.space.labels().to_vec(),
        beliefs: names.iter().cloned().zip(os.priors().iter().map(belief_masses)).collect(),
        os: Some(names.clone()),
        ..ScenarioDoc::default()
    };
    let mut text = format!("rule: {}\norders: {}\n", src.label(sc), os.len());
    for (name, b) in names.iter().zip(os.priors()) {
        let _ = writeln!(text, "{name}: {b}");
    }
    Ok(Report::ok(text, serde_json::to_value(&doc).expect("documents serialize")))
}

fn update(sc: &Scenario, choice: &RuleChoice, labels: &str) -> Result<Report, Failure> {
    let src = source(sc, choice)?;
    let e = event_arg(sc, labels)?;
    let (belief, selected, selected_json) = match &src {
        Source::Os(os) => {
            let k = os.surprise_order(e)?;
            let name = names_or_default(sc.doc.os.as_ref(), os.len(), "mu")[k].clone();
            (os_update(os, e)?, format!("{name} (order {k})"), json!({"prior": name, "order": k}))
        }
        Source::Ht => {
            let ht = sc.ht.as_ref().expect("checked");
            let (t, b) = ht_select(ht, e)?;
            let name = sc.doc.ht.as_ref().expect("checked").priors[t.chosen].clone();
            let branch = branch_name(t.branch);
            (b, format!("{name} ({branch})"), json!({"prior": name, "branch": branch}))
        }
        Source::Bayes(name, b) => (bayes_update(b, e)?, name.to_string(), json!({ "prior": name })),
        Source::Conservative(b, d) => {
            let label = src.label(sc);
            (conservative_update(b, d, e)?, label.clone(), json!({ "rule": label }))
        }
    };
    let text = format!(
        "event: {}\nrule: {}\nselected: {selected}\nbelief: {belief}\n",
        sc.space.show(e),
        src.label(sc)
    );
    let json = json!({
        "event": ev(&sc.space, e),
        "rule": src.label(sc),
        "selected": selected_json,
        "belief": bel(&belief),
    });
    Ok(Report::ok(text, json))
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Bayesian => "bayesian",
        Branch::Argmax => "argmax",
    }
}

fn eps_update(sc: &Scenario, eps: &Rational, labels: &str) -> Result<Report, Failure> {
    let os = os_block(sc)?;
    let e = event_arg(sc, labels)?;
    let shown = sc.space.show(e);
    match eps_os_update(os, eps, e) {
        Ok(belief) => {
            let k = os.threshold_order(eps, e).expect("defined");
            let name = names_or_default(sc.doc.os.as_ref(), os.len(), "mu")[k].clone();
            let text = format!("event: {shown}\neps: {eps}\nselected: {name} (order {k})\nbelief: {belief}\n");
            let json = json!({
                "event": ev(&sc.space, e),
                "eps": rat(eps),
                "selected": {"prior": name, "order": k},
                "belief": bel(&belief),
            });
            Ok(Report::ok(text, json))
        }
        Err(Error::NoPriorExceedsThreshold { .. }) => {
            let text = format!("event: {shown}\neps: {eps}\nundefined: no prior gives the event probability above {eps}\n");
            let json = json!({"event": ev(&sc.space, e), "eps": rat(eps), "undefined": true});
            Ok(Report::witness(text, json))
        }
        Err(err) => Err(err.into()),
    }
}

fn os_ht(sc: &Scenario) -> Result<Report, Failure> {
    let os = os_block(sc)?;
    let c = os_to_ht(os);
    let events = sc.space.events();
    let total = events.len();
    let diff = first_difference(&os_rule(os), &ht_rule(&c.ht)?, events)?;
    let mut text = format!(
        "deltas: {}\nv: {}\nrho: {}\neps: {}\npriors:\n",
        list(&c.deltas),
        list(&c.weights),
        list(c.ht.rho()),
        c.ht.eps()
    );
    for (k, b) in c.ht.priors().iter().enumerate() {
        let _ = writeln!(text, "  {k}: {b}");
    }
    let json = json!({
        "deltas": c.deltas.iter().map(rat).collect::<Vec<_>>(),
        "v": c.weights.iter().map(rat).collect::<Vec<_>>(),
        "rho": c.ht.rho().iter().map(rat).collect::<Vec<_>>(),
        "eps": rat(c.ht.eps()),
        "priors": c.ht.priors().iter().map(bel).collect::<Vec<_>>(),
        "agrees": diff.is_none(),
        "first_difference": diff.map(|e| ev(&sc.space, e)),
    });
    match diff {
        None => {
            let _ = writeln!(text, "agrees with os on all {total} events");
            Ok(Report::ok(text, json))
        }
        Some(e) => {
            let _ = writeln!(text, "differs from os at {}", sc.space.show(e));
            Ok(Report::witness(text, json))
        }
    }
}

fn eps_os_ht(sc: &Scenario, eps: &Rational) -> Result<Report, Failure> {
    let os = os_block(sc)?;
    let c = eps_os_to_ht(os, eps)?;
    let space = &sc.space;
    let mut defined = 0usize;
    let mut undefined = 0usize;
    let mut mismatch = None;
    for e in space.events() {
        match eps_os_update(os, eps, e) {
            Ok(want) => {
                defined += 1;
                let got = ht_select(&c.ht, e).map(|(_, b)| b);
                if mismatch.is_none() && got.as_ref() != Ok(&want) {
                    mismatch = Some(e);
                }
            }
            Err(Error::NoPriorExceedsThreshold { .. }) => undefined += 1,
            Err(err) => return Err(err.into()),
        }
    }
    let mut text = format!("eps: {eps}\nthreshold: {}\nintervals:\n", c.threshold());
    for (k, (hi, lo)) in c.intervals.iter().enumerate() {
        let _ = writeln!(text, "  order {k}: ({lo}, {hi})");
    }
    text.push_str("priors:\n");
    for (i, b) in c.ht.priors().iter().enumerate() {
        let _ = writeln!(
            text,
            "  {i}: order {}, rho {}, from {}: {b}",
            c.levels[i],
            c.ht.rho()[i],
            space.show(c.sources[i])
        );
    }
    let edges: Vec<String> = c.relation.iter().map(|(a, b)| format!("{a}>{b}")).collect();
    let _ = writeln!(text, "relation: {}", if edges.is_empty() { "(none)".into() } else { edges.join(" ") });
    let _ = writeln!(text, "defined events: {defined}\nundefined events: {undefined}");
    let json = json!({
        "eps": rat(eps),
        "threshold": rat(c.threshold()),
        "intervals": c.intervals.iter().map(|(hi, lo)| json!({"upper": rat(hi), "lower": rat(lo)})).collect::<Vec<_>>(),
        "priors": c.ht.priors().iter().enumerate().map(|(i, b)| json!({
            "order": c.levels[i],
            "rho": rat(&c.ht.rho()[i]),
            "source": ev(space, c.sources[i]),
            "belief": bel(b),
        })).collect::<Vec<_>>(),
        "relation": c.relation,
        "defined": defined,
        "undefined": undefined,
        "agrees": mismatch.is_none(),
        "first_difference": mismatch.map(|e| ev(space, e)),
    });
    match mismatch {
        None => {
            text.push_str("agrees with eps-update on every defined event\n");
            Ok(Report::ok(text, json))
        }
        Some(e) => {
            let _ = writeln!(text, "differs from eps-update at {}", space.show(e));
            Ok(Report::witness(text, json))
        }
    }
}

fn select(sc: &Scenario, labels: &str) -> Result<Report, Failure> {
    let ht = sc.ht.as_ref().ok_or_else(|| missing("ht"))?;
    let names = &sc.doc.ht.as_ref().expect("block present").priors;
    let e = event_arg(sc, labels)?;
    let shown = sc.space.show(e);
    match ht_select(ht, e) {
        Ok((t, b)) => {
            let mut text = format!("event: {shown}\nbranch: {}\nscores:\n", branch_name(t.branch));
            for (name, s) in names.iter().zip(&t.scores) {
                let _ = writeln!(text, "  {name}: {s}");
            }
            let _ = writeln!(text, "chosen: {}\nbelief: {b}", names[t.chosen]);
            let scores: IndexMap<&String, Value> = names.iter().zip(t.scores.iter().map(rat)).collect();
            let json = json!({
                "event": ev(&sc.space, e),
                "branch": branch_name(t.branch),
                "scores": scores,
                "chosen": names[t.chosen],
                "belief": bel(&b),
            });
            Ok(Report::ok(text, json))
        }
        Err(Error::AmbiguousArgmax { indices, .. }) => {
            let tied: Vec<&str> = indices.iter().map(|&i| names[i].as_str()).collect();
            let text = format!("event: {shown}\nbranch: argmax\nambiguous: {} share the highest score\n", tied.join(", "));
            let json = json!({"event": ev(&sc.space, e), "branch": "argmax", "ambiguous": tied});
            Ok(Report::witness(text, json))
        }
        Err(err) => Err(err.into()),
    }
}

fn pick_utility<'a>(sc: &'a Scenario, name: Option<&str>) -> Result<&'a UtilityFunction, Failure> {
    match name {
        Some(n) => sc.utilities.get(n).ok_or_else(|| usage(format!("no utility named {n:?}"))),
        None => {
            if let Some(fam) = &sc.family {
                return Ok(&fam.utilities()[0]);
            }
            match sc.utilities.len() {
                1 => Ok(&sc.utilities[0]),
                0 => Err(missing("utilities")),
                _ => Err(usage("several utilities are defined; choose one with --utility")),
            }
        }
    }
}

fn act<'a>(sc: &'a Scenario, name: &str) -> Result<&'a Act, Failure> {
    sc.acts.get(name).ok_or_else(|| usage(format!("no act named {name:?}")))
}

fn verdict_text(v: Verdict, f: &str, g: &str) -> String {
    match v {
        Verdict::PrefersFirst => format!("{f} ≻ {g}"),
        Verdict::PrefersSecond => format!("{g} ≻ {f}"),
        Verdict::Indifferent => format!("{f} ∼ {g}"),
    }
}

fn verdict_json(v: Verdict, f: &str, g: &str) -> Value {
    match v {
        Verdict::PrefersFirst => json!({ "strict": f }),
        Verdict::PrefersSecond => json!({ "strict": g }),
        Verdict::Indifferent => json!("indifferent"),
    }
}

fn lps(sc: &Scenario, acts: &[String], event: Option<&str>, utility: Option<&str>) -> Result<Report, Failure> {
    let model = sc.lps.as_ref().ok_or_else(|| missing("lps"))?;
    let [fname, gname] = acts else {
        return Err(usage("lps-compare needs exactly two --act names"));
    };
    let (f, g) = (act(sc, fname)?, act(sc, gname)?);
    let u = pick_utility(sc, utility)?;
    let (fv, gv) = (lps_value(model, u, f)?, lps_value(model, u, g)?);
    let v = lps_compare(model, u, f, g)?;
    let mut text = format!("{fname}: {fv}\n{gname}: {gv}\nlps: {}\n", verdict_text(v, fname, gname));
    let mut json = json!({
        "values": {fname.as_str(): fv.components().iter().map(rat).collect::<Vec<_>>(),
                   gname.as_str(): gv.components().iter().map(rat).collect::<Vec<_>>()},
        "lps": verdict_json(v, fname, gname),
    });
    if let Some(labels) = event {
        let e = event_arg(sc, labels)?;
        let shown = sc.space.show(e);
        let cond: LpsRepresentation = clps_condition(model, e)?;
        let (fc, gc) = (lps_value(&cond, u, f)?, lps_value(&cond, u, g)?);
        let vc = lps_compare(&cond, u, f, g)?;
        let _ = writeln!(
            text,
            "given {shown}:\n  {fname}: {fc}\n  {gname}: {gc}\n  clps: {}",
            verdict_text(vc, fname, gname)
        );
        json["event"] = ev(&sc.space, e);
        json["clps"] = verdict_json(vc, fname, gname);
        if let Some(fam) = &sc.family {
            let r = indifference_resolution_demo(fam, model, u, f, g, e)?;
            let _ = writeln!(
                text,
                "os ex ante: {}\nos given {shown}: {}\nos resolves indifference: {}\nlps resolves indifference: {}\nclps agrees with ex ante: {}\nresolution under os only: {}",
                verdict_text(r.os_ex_ante, fname, gname),
                verdict_text(r.os_given, fname, gname),
                yes(r.os_resolves()),
                yes(r.lps_resolves()),
                yes(r.clps_agrees()),
                yes(r.os_only_resolution()),
            );
            json["os_ex_ante"] = verdict_json(r.os_ex_ante, fname, gname);
            json["os_given"] = verdict_json(r.os_given, fname, gname);
            json["os_resolves"] = r.os_resolves().into();
            json["lps_resolves"] = r.lps_resolves().into();
            json["clps_agrees"] = r.clps_agrees().into();
            json["os_only_resolution"] = r.os_only_resolution().into();
        }
    }
    Ok(Report::ok(text, json))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Conservative updating as a preference family with one utility.
struct ConservativeFamily<'a> {
    prior: &'a Belief,
    delta: &'a Rational,
    u: &'a UtilityFunction,
}

impl ConditionalPreferences for ConservativeFamily<'_> {
    fn space(&self) -> &StateSpace {
        self.prior.space()
    }

    fn conditional_belief(&self, e: Event) -> Result<Belief, Error> {
        conservative_update(self.prior, self.delta, e)
    }

    fn conditional_utility(&self, _e: Event) -> Result<&UtilityFunction, Error> {
        Ok(self.u)
    }
}

fn axioms(sc: &Scenario, use_conservative: bool, utility: Option<&str>) -> Result<Report, Failure> {
    let u0 = pick_utility(sc, utility)?;
    let conservative;
    let fam: &dyn ConditionalPreferences = if use_conservative {
        let (prior, delta) = sc.conservative.as_ref().ok_or_else(|| missing("conservative"))?;
        conservative = ConservativeFamily { prior, delta, u: u0 };
        &conservative
    } else {
        sc.family.as_ref().ok_or_else(|| missing("preferences"))?
    };
    let space = &sc.space;
    let mut conditioning = vec![space.full()];
    conditioning.extend(sc.events.values().copied().filter(|e| !e.is_empty()));
    conditioning.dedup();
    let triples = default_triples(space, u0)?;
    let mut text = String::new();
    let mut checks = Vec::new();
    let mut failed = false;
    for &e in &conditioning {
        let pairs = consequentialism_pairs(space, e, u0)?;
        let shown = space.show(e);
        match check_consequentialism(fam, e, &pairs)? {
            None => {
                let _ = writeln!(text, "consequentialism given {shown}: holds");
                checks.push(json!({"axiom": "consequentialism", "event": ev(space, e), "holds": true}));
            }
            Some(w) => {
                failed = true;
                let _ = writeln!(text, "consequentialism given {shown}: fails\n  f: {:?}\n  g: {:?}\n  verdict: {}", w.f, w.g, w.verdict);
                checks.push(json!({
                    "axiom": "consequentialism", "event": ev(space, e), "holds": false,
                    "witness": {"f": format!("{:?}", w.f), "g": format!("{:?}", w.g), "verdict": w.verdict.to_string()},
                }));
            }
        }
        let mut subs: Vec<Event> = sc.events.values().copied().filter(|a| !a.is_empty() && a.is_subset_of(e)).collect();
        subs.extend(e.states().map(Event::singleton));
        subs.sort();
        subs.dedup();
        for a in subs {
            let label = format!("conditional consistency of {} within {shown}", space.show(a));
            match check_conditional_consistency(fam, e, a, &triples) {
                Ok(None) => {
                    let _ = writeln!(text, "{label}: holds");
                    checks.push(json!({"axiom": "conditional-consistency", "event": ev(space, e), "sub": ev(space, a), "holds": true}));
                }
                Ok(Some(w)) => {
                    failed = true;
                    let _ = writeln!(
                        text,
                        "{label}: fails\n  f: {:?}\n  g: {:?}\n  h: {:?}\n  composite acts given {shown}: {}\n  f, g given {}: {}",
                        w.f, w.g, w.h, w.given_e, space.show(a), w.given_a
                    );
                    checks.push(json!({
                        "axiom": "conditional-consistency", "event": ev(space, e), "sub": ev(space, a), "holds": false,
                        "witness": {"f": format!("{:?}", w.f), "g": format!("{:?}", w.g), "h": format!("{:?}", w.h),
                                    "given_event": w.given_e.to_string(), "given_sub": w.given_a.to_string()},
                    }));
                }
                Err(Error::InfeasibleSubevent { .. }) => {}
                Err(err) => return Err(err.into()),
            }
        }
    }
    let mut json = json!({ "checks": checks });
    if !use_conservative {
        let family = sc.family.as_ref().expect("checked");
        let r = check_risk_independence(family)?;
        let agree = constant_act_rankings_agree(family, &risk_probe_lotteries(&family.utilities()[0])?)?;
        failed |= !r.holds;
        let _ = writeln!(text, "risk independence: {}", if r.holds { "holds" } else { "fails" });
        for k in 0..family.utilities().len() {
            match r.coefficients.get(&k) {
                Some((a, b)) => {
                    let _ = writeln!(text, "  order {k}: u = {a}·u0 + {b}");
                }
                None => {
                    let _ = writeln!(text, "  order {k}: not a positive affine transform of u0");
                }
            }
        }
        let _ = writeln!(text, "constant-act rankings agree across events: {}", yes(agree));
        let coefficients: IndexMap<String, Value> = r
            .coefficients
            .iter()
            .map(|(k, (a, b))| (k.to_string(), json!({"alpha": rat(a), "beta": rat(b)})))
            .collect();
        json["risk_independence"] = json!({"holds": r.holds, "coefficients": coefficients, "constant_rankings_agree": agree});
    }
    json["holds"] = (!failed).into();
    Ok(if failed {
        Report::witness(text, json)
    } else {
        Report::ok(text, json)
    })
}

fn conservative(sc: &Scenario) -> Result<Report, Failure> {
    let (prior, delta) = sc.conservative.as_ref().ok_or_else(|| missing("conservative"))?;
    let name = &sc.doc.conservative.as_ref().expect("block present").prior;
    let space = &sc.space;
    let mut first = None;
    for e in space.events() {
        let b = conservative_update(prior, delta, e)?;
        if !b.support().is_subset_of(e) {
            first = Some((e, b.prob(e)));
            break;
        }
    }
    let mut text = format!("prior: {name}\ndelta: {delta}\ncomplete: yes\nconcentrated: {}\n", yes(first.is_none()));
    let mut json = json!({"prior": name, "delta": rat(delta), "complete": true, "concentrated": first.is_none()});
    if let Some((e, m)) = &first {
        let s = space.show(*e);
        let _ = writeln!(text, "first witness: P({s}|{s}) = {m}");
        json["witness"] = json!({"event": ev(space, *e), "mass": rat(m)});
    }
    let mut named = Vec::new();
    for (label, &e) in &sc.events {
        if e.is_empty() {
            continue;
        }
        let b = conservative_update(prior, delta, e)?;
        let s = space.show(e);
        let _ = writeln!(text, "{label}: P({s}|{s}) = {}; belief {b}", b.prob(e));
        named.push(json!({"name": label, "event": ev(space, e), "mass": rat(&b.prob(e)), "belief": bel(&b)}));
    }
    json["events"] = named.into();
    Ok(if first.is_some() {
        Report::witness(text, json)
    } else {
        Report::ok(text, json)
    })
}

fn partition(sc: &Scenario, eps: &Rational) -> Result<Report, Failure> {
    let os = os_block(sc)?;
    let p = surprise_partition(os, eps)?;
    let names = names_or_default(sc.doc.os.as_ref(), os.len(), "mu");
    let space = &sc.space;
    let mut text = format!("eps: {eps}\n");
    let mut classes = Vec::new();
    for (k, class) in p.classes.iter().enumerate() {
        let _ = writeln!(text, "order {k} ({}): {} events", names[k], class.len());
        for &e in class {
            let _ = writeln!(text, "  {}", space.show(e));
        }
        classes.push(json!({"order": k, "prior": names[k], "events": class.iter().map(|&e| ev(space, e)).collect::<Vec<_>>()}));
    }
    let _ = writeln!(text, "undefined: {} events", p.undefined.len());
    for &e in &p.undefined {
        let _ = writeln!(text, "  {}", space.show(e));
    }
    let json = json!({
        "eps": rat(eps),
        "classes": classes,
        "undefined": p.undefined.iter().map(|&e| ev(space, e)).collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, json))
}

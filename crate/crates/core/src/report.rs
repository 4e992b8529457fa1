//! Suites behind the command-line driver and their report records.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::evs::{axiom_violated, check_axioms, check_order, check_primitive_scaling, Evs};
use crate::instances::faults::{
    halfline_identity_scale, halfline_without_modulus, lattice_without_canonical_join, twisted_without_zero_case, Mutated,
};
use crate::instances::{AnyEvs, InstanceError};
use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::parse::{parse_lines, ParseError, SetRep};
use crate::rng::substream;
use crate::sets::corpus::{check_interval_form, check_oracle_agreement, halfline_corpus};
use crate::sets::radial::{check_radial, check_radial_subevs, ConeSubevs};
use crate::sets::transport::{check_absorbing_transport, check_radial_transport, ShippedMap, TransportError};
use crate::sets::{
    check_closure_laws, random_family, random_interval_union, random_rect_union, random_slice, IntervalUnion, Property, SetAlgebra,
    SetSource,
};
use crate::topology::{
    check_audit_agreement, check_bounded_laws, check_family_transport, check_local_base_conditions, check_nbhd_witnesses, check_open_form,
    check_sequence_criterion, finest_topology_audit, is_bounded_interval, is_bounded_slice, random_usual_open, NbhdFamily, TopologyError,
};
use crate::Rational;

/// Corpus sizes and pair counts are capped so that `all` stays quick at
/// large axiom budgets.
const CORPUS_CAP: u64 = 1000;
const PAIR_CAP: u64 = 500;
const WITNESS_CAP: u64 = 200;
const SEQUENCE_N: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Sets,
    Radial,
    Bounded,
    Localbase,
    Audit,
    Morphism,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Axioms => "axioms",
            Suite::Sets => "sets",
            Suite::Radial => "radial",
            Suite::Bounded => "bounded",
            Suite::Localbase => "localbase",
            Suite::Audit => "audit",
            Suite::Morphism => "morphism",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "jsonlines" => Ok(Format::JsonLines),
            other => Err(format!("unknown format `{other}` (expected text or jsonlines)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub suite: Suite,
    /// Instance name, or the map name for `morphism`.
    pub target: String,
    pub budget: u64,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub format: Format,
    pub findings_ok: bool,
    /// `localbase`: extend the input family by every `[0, 1/m)`.
    pub reciprocal_tail: bool,
}

impl RunConfig {
    pub fn new(suite: Suite, target: impl Into<String>) -> Self {
        RunConfig {
            suite,
            target: target.into(),
            budget: 1000,
            seed: 42,
            input: None,
            format: Format::Text,
            findings_ok: false,
            reciprocal_tail: false,
        }
    }
}

/// How a record enters the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// A law that must hold; Refuted fails the run.
    Law,
    /// A reported finding; Refuted fails the run unless `--findings-ok`.
    Finding,
    /// A property decision about an input; never fails the run.
    Decision,
    /// A planted fault; Refuted means it was caught.
    Fault,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRecord {
    pub check: String,
    pub instance: String,
    pub role: Role,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub samples_tried: u64,
    pub seed: u64,
    /// Seconds spent in the step that produced the record.
    pub elapsed: f64,
}

impl ReportRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

impl fmt::Display for ReportRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<40} {:<12} {:<12} n={}", self.check, self.instance, self.verdict.to_string(), self.samples_tried)?;
        if let Some(w) = &self.witness {
            write!(f, "  [{w}]")?;
        }
        if let Some(n) = &self.note {
            write!(f, "  ({n})")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {error}")]
    Parse { path: PathBuf, line: usize, error: ParseError },
    #[error("suite {suite} needs --input")]
    MissingInput { suite: Suite },
    #[error("suite {suite} is not available for {instance}")]
    Unsupported { suite: Suite, instance: String },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("budget must be at least 1")]
    Budget,
}

/// Collects records for one instance, timing each step.
struct Recorder {
    instance: String,
    records: Vec<ReportRecord>,
    started: Instant,
}

impl Recorder {
    fn new(instance: impl Into<String>) -> Self {
        Recorder { instance: instance.into(), records: Vec::new(), started: Instant::now() }
    }

    /// Starts timing the next step.
    fn step(&mut self) {
        self.started = Instant::now();
    }

    fn push(&mut self, check: impl Into<String>, role: Role, o: CheckOutcome) {
        self.records.push(ReportRecord {
            check: check.into(),
            instance: self.instance.clone(),
            role,
            verdict: o.verdict,
            witness: o.witness,
            note: o.note,
            samples_tried: o.samples_tried,
            seed: o.seed,
            elapsed: self.started.elapsed().as_secs_f64(),
        });
    }
}

fn read_input(config: &RunConfig) -> Result<Option<(PathBuf, String)>, RunError> {
    let Some(path) = &config.input else { return Ok(None) };
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Input { path: path.clone(), source })?;
    Ok(Some((path.clone(), text)))
}

fn read_sets(config: &RunConfig, e: &AnyEvs) -> Result<Vec<SetRep>, RunError> {
    match read_input(config)? {
        None => Ok(Vec::new()),
        Some((path, text)) => parse_lines(&text, e).map_err(|(line, error)| RunError::Parse { path, line, error }),
    }
}

fn halfline_sets(sets: &[SetRep]) -> Vec<IntervalUnion<Rational>> {
    sets.iter().filter_map(|s| s.as_intervals().cloned()).collect()
}

fn fault_record<E: Evs>(rec: &mut Recorder, m: &Mutated<E>, budget: u64, seed: u64) {
    rec.step();
    let found = check_axioms(m, budget, seed).into_iter().find(|r| r.outcome.is_refuted());
    let outcome = match found {
        Some(r) => {
            let inst = r.counterexample.expect("refuted laws carry their instance");
            let mut w = r.outcome.witness.unwrap_or_default();
            w.push("reverified", axiom_violated(m, r.axiom, &inst));
            CheckOutcome::refuted(w, r.outcome.samples_tried, seed)
        }
        None => CheckOutcome::unfalsified(budget, seed).with_note("planted fault not detected"),
    };
    rec.push(format!("fault.{}", m.label()), Role::Fault, outcome);
}

fn run_axioms(rec: &mut Recorder, e: &AnyEvs, budget: u64, seed: u64) {
    rec.step();
    for r in check_axioms(e, budget, seed) {
        rec.push(format!("axiom.{}", r.axiom.id()), Role::Law, r.outcome);
    }
    for r in check_order(e, budget, seed) {
        rec.push(format!("order.{}", r.axiom.id()), Role::Law, r.outcome);
    }
    rec.step();
    rec.push("primitive.scaling", Role::Law, check_primitive_scaling(e, budget.min(PAIR_CAP), seed));
    match e {
        AnyEvs::HalfLine(_) => {
            fault_record(rec, &halfline_without_modulus(), budget, seed);
            fault_record(rec, &halfline_identity_scale(), budget, seed);
        }
        AnyEvs::Twisted(t) => fault_record(rec, &twisted_without_zero_case(t.dim()), budget, seed),
        AnyEvs::Lattice(_) => fault_record(rec, &lattice_without_canonical_join(), budget, seed),
        _ => {}
    }
}

fn closure_records<S: SetAlgebra>(
    rec: &mut Recorder,
    e: &AnyEvs,
    generate: &(dyn Fn(&mut crate::rng::CheckRng) -> S + Sync),
    budget: u64,
    seed: u64,
) {
    let source = SetSource { generate, scalar_mode: e.scalar_mode(), field: e.field_mode() };
    for p in [Property::Absorbing, Property::Balanced] {
        rec.step();
        for (id, o) in check_closure_laws(p, &source, budget, seed) {
            rec.push(format!("sets.{id}"), Role::Law, o);
        }
    }
}

fn supports_sets(e: &AnyEvs) -> bool {
    matches!(e, AnyEvs::HalfLine(_) | AnyEvs::Dict(_) | AnyEvs::Lattice(_) | AnyEvs::Cone(_))
}

fn run_sets(rec: &mut Recorder, e: &AnyEvs, inputs: &[SetRep], budget: u64, seed: u64) -> Result<(), RunError> {
    let n = budget.min(CORPUS_CAP);
    match e {
        AnyEvs::HalfLine(_) => closure_records(rec, e, &random_interval_union, n, seed),
        AnyEvs::Dict(_) => closure_records(rec, e, &random_rect_union, n, seed),
        AnyEvs::Lattice(_) => closure_records(rec, e, &random_family, n, seed),
        AnyEvs::Cone(c) => {
            let dim = c.dim();
            closure_records(rec, e, &move |rng: &mut crate::rng::CheckRng| random_slice(rng, dim), n, seed)
        }
        _ => return Err(RunError::Unsupported { suite: Suite::Sets, instance: e.name() }),
    }
    if let AnyEvs::HalfLine(_) = e {
        rec.step();
        let mut corpus = halfline_corpus(n, seed);
        let [b, a] = check_oracle_agreement(&corpus, seed);
        rec.push("sets.oracle.balanced", Role::Law, b);
        rec.push("sets.oracle.absorbing", Role::Law, a);
        let (amended, unamended) = check_interval_form(&corpus, seed);
        rec.push("sets.interval-form", Role::Law, amended);
        rec.push(
            "sets.interval-form.unamended",
            Role::Decision,
            unamended.with_note("the statement without positive length admits {0}; checked with the amendment"),
        );
        let mut rng = substream(seed, "usual-open-corpus");
        corpus.extend((0..n).map(|_| random_usual_open(&mut rng)));
        rec.push("sets.open-interval-form", Role::Law, check_open_form(&corpus, seed));
    }
    for (i, s) in inputs.iter().enumerate() {
        rec.step();
        for (name, o) in [("balanced", s.is_balanced()), ("absorbing", s.is_absorbing())] {
            let o = o.unwrap_or_else(|err| {
                CheckOutcome::refuted(Witness::new().with("A", s).with("error", err), 0, seed).with_note("decider rejects the input")
            });
            let mut w = o.witness.clone().unwrap_or_default();
            if w.get("A").is_none() {
                w = Witness::new().with("A", s).with_all(w);
            }
            rec.push(format!("input.{i:04}.{name}"), Role::Decision, CheckOutcome { witness: Some(w), ..o });
        }
    }
    Ok(())
}

fn run_radial(rec: &mut Recorder, e: &AnyEvs, budget: u64, seed: u64) {
    rec.step();
    let n = budget.min(PAIR_CAP);
    rec.push("radial", Role::Decision, check_radial(e, n, seed).outcome);
    if let AnyEvs::Cone(c) = e {
        for sub in [ConeSubevs::Axis, ConeSubevs::Vectors] {
            rec.step();
            rec.push(format!("radial.subevs.{}", sub.name()), Role::Law, check_radial_subevs(c.dim(), sub, n.min(100), seed).outcome);
        }
    }
}

fn run_bounded(rec: &mut Recorder, e: &AnyEvs, inputs: &[SetRep], budget: u64, seed: u64) -> Result<(), RunError> {
    let n = budget.min(CORPUS_CAP);
    match e {
        AnyEvs::HalfLine(_) => {
            rec.step();
            for (id, o) in check_bounded_laws(n, seed) {
                rec.push(id, Role::Law, o);
            }
            rec.step();
            let mut corpus = halfline_corpus(n, seed);
            corpus.extend(halfline_sets(inputs));
            rec.push("bounded.sequence", Role::Law, check_sequence_criterion(&corpus, SEQUENCE_N, seed));
        }
        AnyEvs::Cone(_) => {}
        _ => return Err(RunError::Unsupported { suite: Suite::Bounded, instance: e.name() }),
    }
    for (i, s) in inputs.iter().enumerate() {
        rec.step();
        let o = match s {
            SetRep::Interval(a) => is_bounded_interval(a),
            SetRep::Slice(a) => is_bounded_slice(a),
            _ => unreachable!("inputs parsed for a supported instance"),
        };
        let w = Witness::new().with("A", s).with_all(o.witness.clone().unwrap_or_default());
        rec.push(format!("input.{i:04}.bounded"), Role::Decision, CheckOutcome { witness: Some(w), seed, ..o });
    }
    Ok(())
}

fn run_localbase(rec: &mut Recorder, family: &NbhdFamily, budget: u64, seed: u64) -> Result<(), RunError> {
    rec.step();
    let mut w = Witness::new();
    for (i, u) in family.members().iter().enumerate() {
        w.push(format!("U{i}"), u);
    }
    if let Some(c) = family.tail() {
        w.push("tail", format!("[0,{c}/m) for every m >= 1"));
    }
    rec.push("localbase.family", Role::Decision, CheckOutcome::proven(family.members().len() as u64, seed).with_witness(w));
    rec.step();
    for (id, o) in check_local_base_conditions(family, budget.min(WITNESS_CAP), seed) {
        rec.push(id, Role::Finding, o);
    }
    rec.step();
    let t = check_family_transport(ShippedMap::Doubling, family, budget.min(WITNESS_CAP), seed)?;
    rec.push("localbase.transport.doubling", Role::Law, t);
    Ok(())
}

fn run_topology(rec: &mut Recorder, budget: u64, seed: u64) {
    rec.step();
    for (id, o) in check_nbhd_witnesses(budget.min(WITNESS_CAP), seed) {
        rec.push(id, Role::Law, o);
    }
}

fn run_audit(rec: &mut Recorder, generators: &[IntervalUnion<Rational>], seed: u64) {
    rec.step();
    let records = finest_topology_audit(generators);
    let failing: Vec<usize> = records.iter().filter(|r| r.outcome.is_refuted()).map(|r| r.index).collect();
    for r in records {
        let w = Witness::new().with("generator", &r.generator).with_all(r.outcome.witness.clone().unwrap_or_default());
        rec.push(format!("audit.{:04}", r.index), Role::Finding, CheckOutcome { witness: Some(w), seed, ..r.outcome });
    }
    let summary = if failing.is_empty() {
        CheckOutcome::proven(generators.len() as u64, seed)
            .with_note("every generator is usual-open; the family generates a coarsening of the usual topology")
    } else {
        let idx: Vec<String> = failing.iter().map(ToString::to_string).collect();
        CheckOutcome::refuted(Witness::new().with("failing", idx.join(",")), generators.len() as u64, seed)
    };
    rec.push("audit.family", Role::Finding, summary);
    rec.step();
    let mut rng = substream(seed, "audit-fuzz");
    let fuzz: Vec<_> =
        (0..CORPUS_CAP).map(|i| if i % 2 == 0 { random_interval_union(&mut rng) } else { random_usual_open(&mut rng) }).collect();
    rec.push("audit.agreement", Role::Law, check_audit_agreement(&fuzz, seed));
}

fn run_morphism(rec: &mut Recorder, map: ShippedMap, budget: u64, seed: u64) -> Result<(), RunError> {
    rec.step();
    let o = map.check(budget.min(2000), seed);
    let ok = !o.is_refuted();
    rec.push(format!("morphism.{map}"), Role::Law, o);
    if ok {
        let n = budget.min(PAIR_CAP);
        rec.step();
        rec.push(format!("transport.{map}.absorbing"), Role::Law, check_absorbing_transport(map, n, seed)?);
        rec.step();
        rec.push(format!("transport.{map}.radial"), Role::Law, check_radial_transport(map, n, seed)?);
    }
    Ok(())
}

fn family_from(sets: Vec<SetRep>) -> Result<NbhdFamily, RunError> {
    Ok(NbhdFamily::new(halfline_sets(&sets))?)
}

/// Runs the configured suite and returns its records in report order.
pub fn run_suite(config: &RunConfig) -> Result<Vec<ReportRecord>, RunError> {
    if config.budget == 0 {
        return Err(RunError::Budget);
    }
    let (budget, seed) = (config.budget, config.seed);
    if config.suite == Suite::Morphism {
        let map: ShippedMap = config.target.parse()?;
        let mut rec = Recorder::new(map.to_string());
        run_morphism(&mut rec, map, budget, seed)?;
        return Ok(rec.records);
    }
    if config.suite == Suite::Audit {
        let halfline = AnyEvs::HalfLine(Default::default());
        let sets = read_sets(config, &halfline)?;
        if config.input.is_none() {
            return Err(RunError::MissingInput { suite: Suite::Audit });
        }
        let mut rec = Recorder::new("halfline");
        run_audit(&mut rec, &halfline_sets(&sets), seed);
        return Ok(rec.records);
    }
    let e: AnyEvs = config.target.parse()?;
    let mut rec = Recorder::new(e.name());
    let unsupported = || RunError::Unsupported { suite: config.suite, instance: e.name() };
    match config.suite {
        Suite::Axioms => run_axioms(&mut rec, &e, budget, seed),
        Suite::Sets => {
            let inputs = if supports_sets(&e) { read_sets(config, &e)? } else { Vec::new() };
            run_sets(&mut rec, &e, &inputs, budget, seed)?;
        }
        Suite::Radial => run_radial(&mut rec, &e, budget, seed),
        Suite::Bounded => {
            if !matches!(e, AnyEvs::HalfLine(_) | AnyEvs::Cone(_)) {
                return Err(unsupported());
            }
            let inputs = read_sets(config, &e)?;
            run_bounded(&mut rec, &e, &inputs, budget, seed)?;
        }
        Suite::Localbase => {
            if !matches!(e, AnyEvs::HalfLine(_)) {
                return Err(unsupported());
            }
            if config.input.is_none() {
                return Err(RunError::MissingInput { suite: Suite::Localbase });
            }
            let mut family = family_from(read_sets(config, &e)?)?;
            if config.reciprocal_tail {
                family = family.with_tail(Rational::from_integer(1.into()));
            }
            run_localbase(&mut rec, &family, budget, seed)?;
        }
        Suite::All => {
            run_axioms(&mut rec, &e, budget, seed);
            if supports_sets(&e) {
                run_sets(&mut rec, &e, &[], budget, seed)?;
            }
            run_radial(&mut rec, &e, budget, seed);
            if matches!(e, AnyEvs::HalfLine(_) | AnyEvs::Cone(_)) {
                run_bounded(&mut rec, &e, &[], budget, seed)?;
            }
            if let AnyEvs::HalfLine(_) = e {
                run_topology(&mut rec, budget, seed);
                run_localbase(&mut rec, &NbhdFamily::reciprocal_sequence(8), budget, seed)?;
                let mut rng = substream(seed, "all-audit");
                let gens: Vec<_> = (0..8).map(|_| random_usual_open(&mut rng)).collect();
                run_audit(&mut rec, &gens, seed);
                for map in [ShippedMap::Doubling, ShippedMap::ConeAxis(2)] {
                    let mut sub = Recorder::new(map.to_string());
                    run_morphism(&mut sub, map, budget, seed)?;
                    rec.records.extend(sub.records);
                }
            }
        }
        Suite::Morphism | Suite::Audit => unreachable!("handled above"),
    }
    Ok(rec.records)
}

/// 0 when no law is Refuted and, unless `findings_ok`, no finding either.
pub fn exit_code(records: &[ReportRecord], findings_ok: bool) -> i32 {
    let failed =
        records.iter().any(|r| r.verdict == Verdict::Refuted && (r.role == Role::Law || (r.role == Role::Finding && !findings_ok)));
    i32::from(failed)
}

pub fn render(records: &[ReportRecord], format: Format) -> String {
    let mut out = String::new();
    for r in records {
        match format {
            Format::Text => out.push_str(&r.to_string()),
            Format::JsonLines => out.push_str(&r.to_json()),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfline_axioms_pass_and_faults_are_caught() {
        let mut c = RunConfig::new(Suite::Axioms, "halfline");
        c.budget = 500;
        let recs = run_suite(&c).unwrap();
        assert_eq!(exit_code(&recs, false), 0);
        assert_eq!(recs.iter().filter(|r| r.check.starts_with("axiom.")).count(), 13);
        let faults: Vec<_> = recs.iter().filter(|r| r.role == Role::Fault).collect();
        assert_eq!(faults.len(), 2);
        assert!(faults.iter().all(|r| r.verdict == Verdict::Refuted));
        assert!(faults.iter().all(|r| r.witness.as_ref().unwrap().get("reverified") == Some("true")));
    }

    #[test]
    fn lattice_radial_is_refuted() {
        let recs = run_suite(&RunConfig::new(Suite::Radial, "lattice2")).unwrap();
        assert_eq!(recs[0].check, "radial");
        assert_eq!(recs[0].verdict, Verdict::Refuted);
        assert_eq!(exit_code(&recs, false), 0);
    }

    #[test]
    fn squaring_fails_the_run() {
        let recs = run_suite(&RunConfig::new(Suite::Morphism, "squaring")).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(exit_code(&recs, false), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(run_suite(&RunConfig::new(Suite::Axioms, "torus")), Err(RunError::Instance(_))));
        assert!(matches!(run_suite(&RunConfig::new(Suite::Audit, "")), Err(RunError::MissingInput { .. })));
        let mut c = RunConfig::new(Suite::Bounded, "halfline");
        c.input = Some("/nonexistent/gens.txt".into());
        assert!(matches!(run_suite(&c), Err(RunError::Input { .. })));
        assert!(matches!(run_suite(&RunConfig::new(Suite::Sets, "twisted:2")), Err(RunError::Unsupported { .. })));
    }
}

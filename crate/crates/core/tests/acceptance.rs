//! Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
//!
//! Run with `cargo test -p evs-lab --test acceptance`.

use std::process::Command;
use std::time::Instant;

use evs_lab::instances::AnyEvs;
use evs_lab::report::{run_suite, ReportRecord, Role, RunConfig, Suite};
use evs_lab::rng::substream;
use evs_lab::sets::corpus::{check_interval_form, check_oracle_agreement, halfline_corpus};
use evs_lab::sets::radial::{check_radial, check_radial_subevs, verify_separator, ConeSubevs};
use evs_lab::sets::transport::{check_absorbing_transport, check_radial_transport, ShippedMap};
use evs_lab::topology::{
    audit_generator, check_audit_agreement, check_bounded_laws, check_local_base_conditions, check_nbhd_witnesses, check_open_form,
    check_sequence_criterion, is_bounded_interval, random_usual_open, sequence_escape, NbhdFamily,
};
use evs_lab::{CheckOutcome, Verdict};

const SEED: u64 = 42;
const INSTANCES: [&str; 6] = ["halfline", "cone:2", "twisted:2", "dict2", "lattice2", "product:(halfline,dict2)"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn not_refuted(id: &str, o: &CheckOutcome) -> Result<(), String> {
    ensure(!o.is_refuted(), format!("{id} refuted: {:?}", o.witness.as_ref().map(ToString::to_string)))
}

fn suite(s: Suite, target: &str, budget: u64) -> Result<Vec<ReportRecord>, String> {
    let mut c = RunConfig::new(s, target);
    c.budget = budget;
    c.seed = SEED;
    run_suite(&c).map_err(|e| e.to_string())
}

fn record<'a>(recs: &'a [ReportRecord], check: &str) -> Result<&'a ReportRecord, String> {
    recs.iter().find(|r| r.check == check).ok_or_else(|| format!("no {check} record"))
}

fn witness_field(o: &CheckOutcome, key: &str) -> Option<String> {
    o.witness.as_ref()?.get(key).map(str::to_string)
}

fn axioms_and_faults() -> Outcome {
    let start = Instant::now();
    let mut axiom_records = 0;
    let mut faults = Vec::new();
    for name in INSTANCES {
        let recs = suite(Suite::All, name, 10_000)?;
        for r in recs.iter().filter(|r| r.check.starts_with("axiom.")) {
            axiom_records += 1;
            ensure(r.verdict != Verdict::Refuted, format!("{name} {} refuted: {:?}", r.check, r.witness))?;
        }
        faults.extend(recs.into_iter().filter(|r| r.role == Role::Fault));
    }
    for label in ["drop-modulus", "drop-zero-case", "uncanonical-join"] {
        let f = record(&faults, &format!("fault.{label}"))?;
        ensure(f.verdict == Verdict::Refuted, format!("fault {label} not caught"))?;
        let reverified = f.witness.as_ref().and_then(|w| w.get("reverified"));
        ensure(reverified == Some("true"), format!("fault {label} witness does not re-verify"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("{axiom_records} axiom records, {} faults caught, {secs:.1}s", faults.len()))
}

fn closure_laws() -> Outcome {
    let recs = suite(Suite::Sets, "halfline", 1000)?;
    let laws: Vec<_> = recs.iter().filter(|r| r.check.starts_with("sets.absorbing.") || r.check.starts_with("sets.balanced.")).collect();
    ensure(laws.len() == 10, format!("{} closure laws", laws.len()))?;
    for r in &laws {
        ensure(r.verdict != Verdict::Refuted && r.samples_tried >= 1000, format!("{} {} n={}", r.check, r.verdict, r.samples_tried))?;
    }
    let corpus = halfline_corpus(1000, SEED);
    let [b, a] = check_oracle_agreement(&corpus, SEED);
    not_refuted("oracle.balanced", &b)?;
    not_refuted("oracle.absorbing", &a)?;
    Ok(format!("10 laws over 1000 sets, oracle agreement {}/{}", b.samples_tried, a.samples_tried))
}

fn interval_form() -> Outcome {
    let (amended, unamended) = check_interval_form(&halfline_corpus(1000, SEED), SEED);
    not_refuted("interval-form", &amended)?;
    ensure(unamended.is_refuted(), "unamended form not refuted")?;
    let (count, sets) = (witness_field(&unamended, "count"), witness_field(&unamended, "sets"));
    ensure(count.as_deref() == Some("1") && sets.as_deref() == Some("[0,0]"), format!("violators {count:?} {sets:?}"))?;
    Ok(format!("{} sets agree; unamended form fails only on [0,0]", amended.samples_tried))
}

fn open_interval_form() -> Outcome {
    let o = check_open_form(&halfline_corpus(1000, SEED), SEED);
    not_refuted("open-interval-form", &o)?;
    Ok(format!("{} sets, zero disagreements", o.samples_tried))
}

fn nbhd_witnesses() -> Outcome {
    for (id, o) in check_nbhd_witnesses(200, SEED) {
        not_refuted(id, &o)?;
        ensure(o.samples_tried == 200, format!("{id} ran {} cases", o.samples_tried))?;
    }
    Ok("5 constructors x 200 cases re-verified".into())
}

fn bounded() -> Outcome {
    let laws = check_bounded_laws(1000, SEED);
    for (id, o) in &laws {
        not_refuted(id, o)?;
    }
    ensure(laws["bounded.a"].samples_tried == 1000, "grid comparison short")?;
    ensure(laws["bounded.d"].samples_tried >= 500, format!("{} bounded pairs", laws["bounded.d"].samples_tried))?;
    let corpus = halfline_corpus(1000, SEED);
    not_refuted("bounded.sequence", &check_sequence_criterion(&corpus, 1000, SEED))?;
    let halfline = AnyEvs::HalfLine(Default::default());
    let mut worst = 0;
    for text in ["[1,inf)", "[0,inf)", "(5,inf)", "[0,1) U [3,inf)", "[1/2,1/2] U (100,inf)"] {
        let Ok(evs_lab::parse::SetRep::Interval(a)) = evs_lab::parse::parse_set(text, &halfline) else {
            return Err(format!("{text} does not parse"));
        };
        ensure(!is_bounded_interval(&a).is_proven(), format!("{text} called bounded"))?;
        let n = sequence_escape(&|x| a.contains(x), 1000).ok_or(format!("{text} never escapes"))?;
        worst = worst.max(n);
    }
    Ok(format!("laws a-e hold, {} bounded pairs, unbounded sets escape by n = {worst}", laws["bounded.d"].samples_tried))
}

fn radial() -> Outcome {
    let mut summary = Vec::new();
    for (name, pairs) in [("halfline", 500), ("dict2", 500), ("product:(halfline,dict2)", 100)] {
        let e: AnyEvs = name.parse().map_err(|e| format!("{e}"))?;
        let report = check_radial(&e, pairs, SEED);
        ensure(report.pairs.len() == pairs as usize, format!("{name}: {} pairs", report.pairs.len()))?;
        for p in &report.pairs {
            let sep = p.separator.as_ref().ok_or(format!("{name}: no separator for {} {}", p.x, p.y))?;
            ensure(verify_separator(sep, &p.x, &p.y).is_proven(), format!("{name}: separator fails for {} {}", p.x, p.y))?;
        }
        summary.push(format!("{name} {pairs}"));
    }
    for sub in [ConeSubevs::Axis, ConeSubevs::Vectors] {
        let r = check_radial_subevs(2, sub, 100, SEED);
        not_refuted(sub.name(), &r.outcome)?;
        ensure(r.pairs.len() == 100 && r.pairs.iter().all(|p| p.outcome.is_proven()), format!("subevs {}", sub.name()))?;
    }
    let lattice = check_radial(&"lattice2".parse().map_err(|e| format!("{e}"))?, 500, SEED);
    ensure(lattice.outcome.is_refuted(), "lattice2 not refuted")?;
    let (x, y) = (witness_field(&lattice.outcome, "x"), witness_field(&lattice.outcome, "y"));
    ensure(x.is_some() && x != y, format!("lattice witness {x:?} {y:?}"))?;
    ensure(witness_field(&lattice.outcome, "absorbing_families").as_deref() == Some("ALL only"), "lattice reasoning missing")?;
    Ok(format!("separators verified ({}), subevs 2x100, lattice2 refuted with {} / {}", summary.join(", "), x.unwrap(), y.unwrap()))
}

fn local_base() -> Outcome {
    let family = NbhdFamily::reciprocal_sequence(8);
    let mut v_witness = None;
    for seed in [SEED, 1, 7, 2024] {
        let r = check_local_base_conditions(&family, 200, seed);
        for id in ["localbase.i", "localbase.ii", "localbase.iii"] {
            ensure(r[id].is_proven(), format!("{id} {} (seed {seed}): {:?}", r[id].verdict, r[id].witness))?;
        }
        let iv = &r["localbase.iv"];
        ensure(iv.verdict == Verdict::Unfalsified && iv.samples_tried == 200, format!("(iv) {} n={}", iv.verdict, iv.samples_tried))?;
        let v = &r["localbase.v"];
        ensure(v.is_refuted(), "(v) not refuted")?;
        let w = v.witness.as_ref().map(ToString::to_string);
        ensure(v_witness.is_none() || v_witness == w, format!("(v) witness changes with seed {seed}"))?;
        v_witness = w;
    }
    let w = v_witness.unwrap_or_default();
    ensure(w.contains("W=[0,1)") && w.contains("x=1") && w.contains("alpha=1"), w.clone())?;
    Ok("(i)-(iii) Proven, (iv) Unfalsified on 200 pairs, (v) Refuted at W=[0,1), x=1, alpha=1 on 4 seeds".into())
}

fn audit() -> Outcome {
    let halfline = AnyEvs::HalfLine(Default::default());
    for (text, t) in [("[1,2)", "1 - eps/2"), ("[0,1]", "1 + eps/2 (|t| > 1)")] {
        let Ok(evs_lab::parse::SetRep::Interval(g)) = evs_lab::parse::parse_set(text, &halfline) else {
            return Err(format!("{text} does not parse"));
        };
        let o = audit_generator(&g);
        ensure(o.is_refuted() && witness_field(&o, "t").as_deref() == Some(t), format!("{text}: {:?}", o.witness))?;
    }
    let mut rng = substream(SEED, "acceptance-open");
    let gens: Vec<_> = (0..50).map(|_| random_usual_open(&mut rng)).collect();
    let path = std::env::temp_dir().join(format!("evs-lab-acceptance-{}.txt", std::process::id()));
    std::fs::write(&path, gens.iter().map(|g| format!("{g}\n")).collect::<String>()).map_err(|e| e.to_string())?;
    let mut c = RunConfig::new(Suite::Audit, "halfline");
    c.input = Some(path);
    let recs = run_suite(&c).map_err(|e| e.to_string())?;
    let family = record(&recs, "audit.family")?;
    ensure(family.verdict == Verdict::Proven, format!("usual-open file not certified: {:?}", family.witness))?;
    let mut fuzz = halfline_corpus(500, SEED);
    fuzz.extend((0..500).map(|_| random_usual_open(&mut rng)));
    let agreement = check_audit_agreement(&fuzz, SEED);
    not_refuted("audit.agreement", &agreement)?;
    Ok(format!("escape scalars match, 50 usual-open generators certified, {} fuzz sets agree", agreement.samples_tried))
}

fn transport() -> Outcome {
    for map in [ShippedMap::Doubling, ShippedMap::ConeAxis(2)] {
        let a = check_absorbing_transport(map, 500, SEED).map_err(|e| e.to_string())?;
        let r = check_radial_transport(map, 500, SEED).map_err(|e| e.to_string())?;
        not_refuted(&format!("{map} absorbing"), &a)?;
        not_refuted(&format!("{map} radial"), &r)?;
        ensure(a.samples_tried == 500 && r.samples_tried == 500, format!("{map}: {} sets, {} pairs", a.samples_tried, r.samples_tried))?;
    }
    Ok("doubling and cone-axis:2, 500 sets and 500 pairs each".into())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_evs-lab"))
            .args(["all", "halfline", "--format", "jsonlines", "--seed", "42"])
            .env_remove("EVS_LAB_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let strip = |out: &[u8]| -> Result<Vec<serde_json::Value>, String> {
        String::from_utf8_lossy(out)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).map_err(|e| e.to_string())?;
                v.as_object_mut().ok_or("record is not an object")?.remove("elapsed");
                Ok(v)
            })
            .collect()
    };
    let (a, b) = (run()?, run()?);
    let (ra, rb) = (strip(&a.stdout)?, strip(&b.stdout)?);
    ensure(!ra.is_empty() && ra == rb, "outputs differ")?;
    Ok(format!("{} records identical modulo elapsed", ra.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("axioms.all-instances", axioms_and_faults),
        ("sets.closure-laws", closure_laws),
        ("sets.interval-form", interval_form),
        ("sets.open-interval-form", open_interval_form),
        ("topology.nbhd-witnesses", nbhd_witnesses),
        ("topology.bounded", bounded),
        ("sets.radial", radial),
        ("topology.local-base", local_base),
        ("topology.finest-audit", audit),
        ("sets.transport", transport),
        ("cli.determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (id, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {id:<26} {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {id:<26} {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

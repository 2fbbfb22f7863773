//! Acceptance criteria 1 to 12, one line each. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use hurwitz::abelian::{count_quadruples, n_count, theta_gjt};
use hurwitz::group::{parse_group_spec, Group};
use hurwitz::orbits::EquivalenceConfig;
use hurwitz::ramification::{sigma_classes, SignatureType, SystemTable, DEFAULT_SYSTEM_BUDGET};
use hurwitz::verify::{existence_audit, inn_lemma_audit, move_property_suite, MoveSuiteConfig};
use hurwitz::{count_components, count_components_one_stage, Error, GroupElement, Rational};

/// Runtime limits, in seconds.
const LIMIT_C1: u64 = 1;
const LIMIT_C2: u64 = 5;
const LIMIT_C3: u64 = 120;
const LIMIT_C5: u64 = 600;
const LIMIT_C6: u64 = 60;
const LIMIT_C7: u64 = 60;
const LIMIT_C9: u64 = 300;
const LIMIT_C10: u64 = 60;
/// Systems the move suite must sample.
const MIN_MOVE_SYSTEMS: u64 = 1000;
/// The ratio window of criterion 3.
const RATIO_LO: (i128, i128) = (1, 72);
const RATIO_HI: (i128, i128) = (1, 6);
const THREADS: [&str; 3] = ["1", "4", "8"];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, secs: u64) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < Duration::from_secs(secs), || format!("took {t:?}, limit {secs} s"))
}

fn cli(args: &[&str]) -> (i32, Value, String) {
    let mut full = vec!["hurwitz", "--no-cache"];
    full.extend_from_slice(args);
    let out = hurwitz_cli::run(full);
    let doc = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, doc, out.stdout)
}

fn grp(s: &str) -> Arc<Group> {
    Arc::new(parse_group_spec(s).unwrap())
}

fn ty(s: &str) -> SignatureType {
    s.parse().unwrap()
}

fn beauville_h(p: u64) -> Result<u64, String> {
    let g = grp(&format!("Zn:{p},{p}"));
    let t = ty(&format!("0|{p},{p},{p}"));
    count_components(&g, &t, &t, &EquivalenceConfig::default()).map(|r| r.h).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (code, doc, _) = cli(&["count", "--group", "Zn:5,5", "--type1", "0|5,5,5", "--type2", "0|5,5,5"]);
    let theta = theta_gjt(5).map_err(|e| e.to_string())?.theta;
    within(start, LIMIT_C1)?;
    ensure(code == 0 && doc["h"] == 1, || format!("count returned {code}, h = {}", doc["h"]))?;
    ensure(theta == Rational::from_integer(1), || format!("theta(5) = {theta}"))?;
    Ok(format!("h = 1, theta(5) = 1, {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let h = beauville_h(7)?;
    let theta = theta_gjt(7).map_err(|e| e.to_string())?.theta;
    within(start, LIMIT_C2)?;
    ensure(theta == Rational::from_integer(h as i128), || format!("h = {h}, theta(7) = {theta}"))?;
    ensure((5..=60).contains(&h), || format!("h = {h} outside [5, 60]"))?;
    Ok(format!("h = theta(7) = {h}, {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut sandwich = Vec::new();
    let mut ratio_failures = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let h = beauville_h(p)?;
        let nn = n_count(p).map_err(|e| e.to_string())?;
        let ok = 72 * h >= nn && 6 * h <= nn;
        sandwich.push(format!("p={p}: {}/72 <= {h} <= {}/6 {}", nn, nn, if ok { "ok" } else { "VIOLATED" }));
        if !ok {
            return Err(format!("sandwich violated: {}", sandwich.join("; ")));
        }
        let ratio = Rational::new(h as i128, (p as i128).pow(4));
        if ratio < Rational::new(RATIO_LO.0, RATIO_LO.1) || ratio > Rational::new(RATIO_HI.0, RATIO_HI.1) {
            ratio_failures.push(format!("p={p}: h/p^4 = {ratio}"));
        }
    }
    within(start, LIMIT_C3)?;
    ensure(ratio_failures.is_empty(), || {
        format!(
            "sandwich holds at p = 5, 7, 11, 13; ratio clause fails, h/p^4 outside [1/72, 1/6] at {}",
            ratio_failures.join(", ")
        )
    })?;
    Ok(format!("sandwich and ratio hold, {:?}", start.elapsed()))
}

fn criterion_4() -> Outcome {
    for n in [5, 7] {
        let t = theta_gjt(n).map_err(|e| e.to_string())?;
        ensure(t.integral, || format!("theta({n}) = {} not integral", t.theta))?;
    }
    let mut notes = Vec::new();
    for (n, h) in [("11", 79), ("13", 178)] {
        let (code, doc, _) = cli(&["theta", "--n", n, "--cross-check"]);
        ensure(code == 0, || format!("theta --n {n} exited {code}"))?;
        ensure(doc["integral"] == false && doc["flag"].is_string(), || format!("theta({n}) not flagged: {doc}"))?;
        let status = doc["cross_check"]["status"].as_str().unwrap_or("");
        ensure(doc["cross_check"]["h"] == h && status.contains("ground truth"), || {
            format!("theta({n}) cross-check does not report enumeration: {}", doc["cross_check"])
        })?;
        notes.push(format!("theta({n}) = {} flagged, enumeration h = {h}", doc["theta"].as_str().unwrap_or("?")));
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let audit = existence_audit(100, &[3, 4, 5]).map_err(|e| e.to_string())?;
    within(start, LIMIT_C5)?;
    ensure(audit.pass, || format!("{} disagreements, first {:?}", audit.disagreements.len(), audit.disagreements.first()))?;
    Ok(format!("{} groups, {} cases, 0 disagreements, {:?}", audit.groups, audit.cases, start.elapsed()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    for p in [5, 7, 11, 13] {
        let (a, b) = (count_quadruples(p).map_err(|e| e.to_string())?, n_count(p).map_err(|e| e.to_string())?);
        ensure(a == b, || format!("p = {p}: exhaustive {a}, closed form {b}"))?;
    }
    let c25 = count_quadruples(25).map_err(|e| e.to_string())?;
    ensure(c25 == 15000, || format!("n = 25: {c25}"))?;
    within(start, LIMIT_C6)?;
    Ok(format!("N_p matches at 5, 7, 11, 13; n = 25 gives 15000, {:?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let g = grp("Alt:5");
    let mut types = Vec::new();
    for (i, &a) in [2u32, 3, 5].iter().enumerate() {
        for (j, &b) in [2u32, 3, 5].iter().enumerate().skip(i) {
            for &c in [2u32, 3, 5].iter().skip(j) {
                let t = SignatureType::new(0, vec![a, b, c]).unwrap();
                if t.is_hyperbolic() {
                    types.push(t);
                }
            }
        }
    }
    let mut systems = 0usize;
    let sigmas: Vec<Vec<hurwitz::BitSet>> = types
        .iter()
        .map(|t| {
            let table = SystemTable::unordered(&g, t, DEFAULT_SYSTEM_BUDGET).unwrap();
            systems += table.len();
            let mut s: Vec<hurwitz::BitSet> = (0..table.len())
                .map(|i| {
                    let branch: Vec<GroupElement> = table.row(i).iter().map(|&x| GroupElement(x)).collect();
                    sigma_classes(&g, &branch)
                })
                .collect();
            s.sort_by_key(|b| b.iter().collect::<Vec<_>>());
            s.dedup();
            s
        })
        .collect();
    let mut disjoint = 0u64;
    for i in 0..types.len() {
        for j in i..types.len() {
            for s1 in &sigmas[i] {
                for s2 in &sigmas[j] {
                    if s1.intersection_count(s2) == 1 {
                        disjoint += 1;
                    }
                }
            }
        }
    }
    within(start, LIMIT_C7)?;
    ensure(disjoint == 0, || format!("{disjoint} disjoint pairs found"))?;
    let distinct: usize = sigmas.iter().map(Vec::len).sum();
    Ok(format!(
        "{} hyperbolic triangle types, {systems} systems, {distinct} distinct Σ-sets, 0 disjoint pairs, {:?}",
        types.len(),
        start.elapsed()
    ))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let trivial = path("trivial.txt", "# trivial group\nZn:1\n");
    let z2 = path("z2.txt", "Zn:2\n");
    let (c1, d1, _) = cli(&["scan", "--catalog", &trivial, "--chi", "1", "--q", "4"]);
    let (c2, d2, _) = cli(&["scan", "--catalog", &z2, "--chi", "1", "--q", "3"]);
    ensure(c1 == 0 && d1["total_h"] == 1, || format!("q = 4 over Zn:1: {d1}"))?;
    ensure(c2 == 0 && d2["total_h"] == 1, || format!("q = 3 over Zn:2: {d2}"))?;
    let user = path("user.txt", "Zn:1\nZn:2\nZn:3\n");
    let out = hurwitz_cli::run(["hurwitz", "--no-cache", "scan", "--catalog", &user, "--chi", "1", "--q", "3", "--format", "csv"]);
    let rows = out.stdout.lines().count().saturating_sub(1);
    ensure(out.code == 0 && rows >= 1 && out.stdout.starts_with("group,"), || format!("csv scan: {}", out.stdout))?;
    Ok(format!("q = 4 over Zn:1 total 1; q = 3 over Zn:2 total 1; user catalog gives {rows} csv rows"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let rep = move_property_suite(&MoveSuiteConfig::default()).map_err(|e| e.to_string())?;
    within(start, LIMIT_C9)?;
    ensure(rep.systems >= MIN_MOVE_SYSTEMS, || format!("only {} systems sampled", rep.systems))?;
    ensure(rep.pass, || format!("{} violations, first {:?}", rep.violation_count, rep.violations.first()))?;
    Ok(format!("{} systems, {} checks, 0 violations, {:?}", rep.systems, rep.checks, start.elapsed()))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let reps = inn_lemma_audit().map_err(|e| e.to_string())?;
    within(start, LIMIT_C10)?;
    for r in &reps {
        ensure(r.pass && r.exhaustive, || format!("{} {}: {:?}", r.group, r.tau, r.counterexamples))?;
    }
    Ok(reps.iter().map(|r| format!("{} {}: {} checks", r.group, r.tau, r.checked)).collect::<Vec<_>>().join("; "))
}

fn criterion_11() -> Outcome {
    let cases = [
        ("Zn:5,5", "0|5,5,5", "0|5,5,5"),
        ("Zn:7,7", "0|7,7,7", "0|7,7,7"),
        ("Zn:11,11", "0|11,11,11", "0|11,11,11"),
        ("Zn:13,13", "0|13,13,13", "0|13,13,13"),
        ("Zn:1", "2|", "2|"),
        ("Zn:2", "1|2,2", "2|"),
        ("Zn:3,3", "0|3,3,3,3", "0|3,3,3,3"),
        ("Sym:4", "0|2,2,2,2,2,2", "0|3,4,4"),
        ("Alt:5", "0|2,2,2,3", "0|5,5,5"),
    ];
    let config = EquivalenceConfig::default();
    let mut compared = Vec::new();
    let mut skipped = Vec::new();
    for (g, t1, t2) in cases {
        let (g, t1, t2) = (grp(g), ty(t1), ty(t2));
        let two = count_components(&g, &t1, &t2, &config).map_err(|e| e.to_string())?;
        match count_components_one_stage(&g, &t1, &t2, &config) {
            Ok(one) => {
                ensure(one.h == two.h, || format!("{} {t1} x {t2}: two-stage {} one-stage {}", g.spec(), two.h, one.h))?;
                compared.push(format!("{} {t1} x {t2} h={}", g.spec(), two.h));
            }
            Err(Error::TooLarge { .. } | Error::Budget { .. }) => skipped.push(g.spec().to_string()),
            Err(e) => return Err(e.to_string()),
        }
    }
    let nonzero = compared.iter().any(|c| c.starts_with("Sym:4") && !c.ends_with("h=0"));
    ensure(nonzero, || "no Sym:4 instance with nonzero h was compared".into())?;
    Ok(format!("{} agree ({}); one-stage out of range: {}", compared.len(), compared.join(", "), skipped.join(", ")))
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let catalog = dir.path().join("cat.txt");
    std::fs::write(&catalog, "Zn:1\nZn:2\nSym:3\n").map_err(|e| e.to_string())?;
    let catalog = catalog.to_string_lossy().into_owned();
    let commands: Vec<Vec<&str>> = vec![
        vec!["invariants", "--group", "Zn:2", "--type1", "1|2,2", "--type2", "2|"],
        vec!["enumerate", "--group", "Sym:4", "--type", "0|2,3,4", "--limit", "50"],
        vec!["count", "--group", "Zn:7,7", "--type1", "0|7,7,7", "--type2", "0|7,7,7", "--representatives"],
        vec!["count", "--group", "Alt:5", "--type1", "0|2,2,2,3", "--type2", "0|5,5,5", "--one-stage"],
        vec!["theta", "--n", "13", "--cross-check"],
        vec!["abelian-exists", "--group", "Zn:2,2,2", "--r1", "5", "--r2", "6", "--cross-check"],
        vec!["scan", "--catalog", &catalog, "--chi", "1", "--q", "3"],
        vec!["scan", "--catalog", &catalog, "--chi", "1", "--q", "3", "--format", "csv"],
        vec!["verify", "--samples", "5", "--primes", "5,7", "--existence-max-order", "16"],
    ];
    for cmd in &commands {
        let mut outs = Vec::new();
        for t in THREADS {
            let mut args = vec!["hurwitz", "--no-cache", "--threads", t];
            args.extend(cmd.iter().copied());
            let out = hurwitz_cli::run(args);
            ensure(out.code == 0, || format!("{cmd:?} exited {}: {}", out.code, out.stderr))?;
            outs.push(out.stdout);
        }
        ensure(outs.windows(2).all(|w| w[0] == w[1]), || format!("{cmd:?} differs across thread counts"))?;
    }
    // cache miss, cache hit and no cache agree
    let cache = dir.path().join("cache").to_string_lossy().into_owned();
    let count = ["count", "--group", "Zn:5,5", "--type1", "0|5,5,5", "--type2", "0|5,5,5"];
    let mut outs = Vec::new();
    for _ in 0..2 {
        let mut args = vec!["hurwitz", "--cache-dir", &cache];
        args.extend(count);
        outs.push(hurwitz_cli::run(args).stdout);
    }
    let mut args = vec!["hurwitz", "--no-cache"];
    args.extend(count);
    outs.push(hurwitz_cli::run(args).stdout);
    ensure(outs.windows(2).all(|w| w[0] == w[1]), || "cache changes output bytes".into())?;
    Ok(format!("{} commands byte-identical at threads 1, 4, 8; cache on/off identical", commands.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, f) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {detail}");
            }
        }
    }
    println!("acceptance: {failed} failing");
    if failed > 0 {
        std::process::exit(1);
    }
}

//! The acceptance suite: twelve criteria, each printed as one PASS/FAIL line
//! with its tolerance, runtime limit and measured time. Runs without the
//! test harness so criteria execute one at a time and timings are not
//! skewed by parallel tests.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::hull_oracle::{axioms_run, oracle_run};
use common::pools::{constructible_pool, one_letter_pieces, sample_points, unit_set};
use common::*;
use serde_json::Value;
use shiftsem_core::chars::{
    epsilon_criterion, ess_membership_witness, finiteness_criterion, meets_finitely, prefix_criterion, string_of_point,
    Character, StringPoint,
};
use shiftsem_core::constructible::{follower, interior_boundary, lattice, ConstructibleSet};
use shiftsem_core::specfile::CORPUS;
use shiftsem_core::{Error, EvPeriodicWord, ShiftAutomaton};

type Outcome = Result<String, String>;

/// Runs the binary and remembers every invocation for the determinism
/// criterion.
#[derive(Default)]
struct Cli {
    log: Vec<(Vec<String>, Vec<u8>)>,
}

impl Cli {
    fn raw(args: &[String]) -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_shiftsem"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "`shiftsem {}` exited with {}: {}",
                args.join(" "),
                out.status,
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        Ok(out.stdout)
    }

    fn json(&mut self, args: &[&str]) -> Result<Value, String> {
        let mut args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        args.push("--json".into());
        let bytes = Self::raw(&args)?;
        let v = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
        self.log.push((args, bytes));
        Ok(v)
    }
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect())
        .unwrap_or_default()
}

fn zeros_then_four(n: usize) -> String {
    format!("{}4", "0".repeat(n))
}

fn c1(cli: &mut Cli) -> Outcome {
    let r = cli.json(&["follower", "--spec", "abc", "--lambda", "a,b"])?;
    ensure(r["verdict"] == "Finite", format!("verdict {}", r["verdict"]))?;
    let words = strings(&r["results"]["sample"]["words"]);
    ensure(
        words == ["c"] && r["results"]["sample"]["truncated"] == false,
        format!("set {words:?}"),
    )?;
    Ok("F_{a,b} = {c}, Finite".into())
}

fn c2(cli: &mut Cli) -> Outcome {
    let r = cli.json(&[
        "cover",
        "--spec",
        "ex4",
        "--set",
        "F:1,2",
        "--with",
        "E:1;E:2;E:3;E:4;C:0|10,20,30",
    ])?;
    ensure(r["verdict"] == "Covered", format!("verdict {}", r["verdict"]))?;
    let d = &r["results"]["defect"];
    ensure(d["cardinality"] == "Infinite", format!("defect {}", d["cardinality"]))?;
    ensure(d["max_len"] == 20, "sample length")?;
    let got: BTreeSet<String> = strings(&d["words"]).into_iter().collect();
    let mut want: BTreeSet<String> = ["0", "1", "2", "3", "4"].iter().map(|s| s.to_string()).collect();
    want.extend((1..=19).map(zeros_then_four));
    ensure(got == want, format!("D ∩ Σ^≤20 = {got:?}"))?;
    Ok(format!("Covered; D Infinite; |D ∩ Σ^≤20| = {}", got.len()))
}

fn c3(cli: &mut Cli) -> Outcome {
    let aut = load("ex4");
    let x = unit_set(&aut, &lam(&aut, &["1", "2"]));
    let (_, boundary) = interior_boundary(&x);
    ensure(boundary.is_infinite(), "∂F_{1,2} is not infinite")?;
    for n in 1..=19 {
        let v = w(&aut, &zeros_then_four(n));
        ensure(
            boundary.contains(v.letters()),
            format!("0^{n}4 missing from the boundary"),
        )?;
    }
    let r = cli.json(&["hyp", "--spec", "ex4", "--max-len", "20"])?;
    ensure(r["verdict"] == "NotCertified", format!("verdict {}", r["verdict"]))?;
    ensure(
        strings(&r["results"]["failed"]) == ["boundaries_finite"],
        format!("failed hypotheses {}", r["results"]["failed"]),
    )?;
    let shown = strings(&r["results"]["boundary_witness"]["boundary"]["words"]);
    ensure(
        (1..=19).all(|n| shown.contains(&zeros_then_four(n))),
        "witness boundary lacks 0ⁿ4",
    )?;
    Ok("∂F_{1,2} Infinite ∋ 0ⁿ4 (n ≤ 19); finite-boundary hypothesis fails".into())
}

fn c4(cli: &mut Cli) -> Outcome {
    let aut = load("ex4");
    let short = all_words(aut.num_letters(), 5);
    for (case, samples, how, atoms) in FMU_CASES {
        let mu = samples[0];
        let f = follower(&aut, &ew(&aut, mu)).map_err(|e| e.to_string())?;
        let expected = fmu_expected(&aut, how, atoms);
        ensure(f.equals(&expected).unwrap(), format!("case ({case}), μ = {mu}"))?;
        // Brute force on short words: s ∈ F_μ iff μs is admissible.
        let m = w(&aut, mu).into_letters();
        for s in &short {
            let ms: Vec<u8> = m.iter().chain(s).copied().collect();
            ensure(
                f.contains(s) == in_l(&aut, &ms),
                format!("case ({case}) at {}", aut.render(s)),
            )?;
        }
        let r = cli.json(&["follower", "--spec", "ex4", "--lambda", mu])?;
        ensure(
            r["verdict"] == "Infinite",
            format!("case ({case}) CLI verdict {}", r["verdict"]),
        )?;
    }
    Ok(format!(
        "{} cases, exact equality plus brute force to length 5",
        FMU_CASES.len()
    ))
}

fn c5(cli: &mut Cli) -> Outcome {
    let r = cli.json(&[
        "char-eval",
        "--spec",
        "abc",
        "--principal",
        "F:a,b",
        "--set",
        "F:a,b",
        "--family",
        "",
    ])?;
    ensure(r["verdict"] == "1", format!("ψ₁ on {{c}} = {}", r["verdict"]))?;
    ensure(r["results"]["join"]["agree"] == false, "the join equation holds")?;
    ensure(
        r["results"]["outside_essential_closure"] == true,
        "not certified outside",
    )?;
    let g = cli.json(&["ground", "--spec", "abc"])?;
    ensure(g["verdict"] == "Fails", format!("ground {}", g["verdict"]))?;
    let lambda: BTreeSet<String> = strings(&g["results"]["witness"]["lambda"]).into_iter().collect();
    let want: BTreeSet<String> = ["ε", "a", "b"].iter().map(|s| s.to_string()).collect();
    ensure(lambda == want, format!("witness Λ = {lambda:?}"))?;
    ensure(g["results"]["witness"]["set"] == "{c}", "witness set")?;
    Ok("ψ₁({c}) = 1 with empty join; ground fails at F_{a,b} = {c}".into())
}

fn c6(cli: &mut Cli) -> Outcome {
    let r = cli.json(&[
        "defect",
        "--universe",
        "{0,1,2}",
        "--members",
        "{};{0};{1};{0,1,2}",
        "--set",
        "{0,1,2}",
        "--with",
        "{0};{1}",
    ])?;
    ensure(r["verdict"] == "Finite", format!("verdict {}", r["verdict"]))?;
    ensure(
        r["results"]["defect"]["elements"] == serde_json::json!([2]),
        "defect ≠ {2}",
    )?;
    ensure(
        r["results"]["family_essentially_tight"] == true,
        "not essentially tight",
    )?;
    let n = cli.json(&[
        "defect",
        "--naturals",
        "50",
        "--members",
        "{};{0};{1};{0..49}",
        "--set",
        "{0..49}",
        "--with",
        "{0};{1}",
    ])?;
    ensure(n["verdict"] == "Infinite", format!("verdict {}", n["verdict"]))?;
    let want: Vec<u64> = (2..50).collect();
    ensure(
        n["results"]["defect"]["elements"] == serde_json::json!(want),
        "defect ≠ {2, …, 49}",
    )?;
    ensure(
        n["results"]["family_essentially_tight"] == false,
        "N variant essentially tight",
    )?;
    Ok("Ω={0,1,2}: D={2} Finite; Ω=N (0..50): D={2,…} Infinite".into())
}

fn c7(cli: &mut Cli) -> Outcome {
    let mut runs = 0;
    for (name, seed) in [("golden", 17u64), ("ex4", 19)] {
        runs += oracle_run(name, seed, 1000)?;
    }
    let mut triples = 0;
    for (name, seed) in [("golden", 23u64), ("ex4", 29)] {
        triples += axioms_run(name, seed, 200)?;
    }
    let e = cli.json(&["hull-eq", "--spec", "golden", "--a", "+0 +1", "--b", "+01"])?;
    ensure(e["verdict"] == "Equal", "θ_0θ_1 ≠ θ_01")?;
    let z = cli.json(&["hull-mul", "--spec", "golden", "--a", "+1", "--b", "+1"])?;
    ensure(z["verdict"] == "Zero", "θ_1θ_1 ≠ 0")?;
    let z = cli.json(&["hull-mul", "--spec", "ex4", "--a", "+104", "--b", "-204"])?;
    ensure(z["verdict"] == "Zero", "θ_104θ_204⁻¹ ≠ 0")?;
    Ok(format!("{runs} oracle computations, {triples} axiom triples"))
}

fn c8(cli: &mut Cli) -> Outcome {
    let mut agreements = 0usize;
    let mut joins = 0usize;
    let mut strings_used = Vec::new();
    for name in CORPUS {
        let aut = load(name);
        let pts = sample_points(&aut);
        strings_used.push(format!("{name}:{}", pts.len()));
        let pool = constructible_pool(&aut);
        for x in &pool {
            for p in &pts {
                let a = prefix_criterion(&aut, p, x);
                let b = epsilon_criterion(x, &StringPoint::Inf(p.clone()));
                let c = finiteness_criterion(x, p);
                ensure(
                    a == b && b == c,
                    format!("{name}: criteria split on {}", p.render(aut.alphabet())),
                )?;
                ensure(c ^ meets_finitely(x, p), format!("{name}: alternative fails"))?;
                agreements += 1;
            }
        }
        joins += join_families(&aut, &pool, &pts)?;
    }
    let r = cli.json(&["char-eval", "--spec", "ex4", "--point", "(1)", "--set", "F:1,2"])?;
    let aut = load("ex4");
    let x = unit_set(&aut, &lam(&aut, &["1", "2"]));
    let want = prefix_criterion(&aut, &point(&aut, "(1)"), &x);
    ensure(
        r["verdict"] == u8::from(want).to_string(),
        "CLI disagrees with the prefix criterion",
    )?;
    Ok(format!(
        "{agreements} set×string agreements, {joins} join equations; strings per shift {}",
        strings_used.join(" ")
    ))
}

/// Families of size ≤ 3 drawn from pieces of each pool set, checked with
/// every infinite string; returns the number of equations checked.
fn join_families(aut: &ShiftAutomaton, pool: &[ConstructibleSet], pts: &[EvPeriodicWord]) -> Result<usize, String> {
    let lat = lattice(aut).map_err(|e| e.to_string())?;
    let units: Vec<ConstructibleSet> = lat.elements.iter().map(|el| unit_set(aut, &el.lambda(aut))).collect();
    let chars: Vec<Character> = pts
        .iter()
        .map(|p| Character::StringChar(string_of_point(aut, p).unwrap()))
        .collect();
    let mut checked = 0;
    for x in pool {
        let mut cands = one_letter_pieces(aut, x);
        cands.push(x.clone());
        cands.extend(units.iter().filter(|y| y.set().is_subset(x.set()).unwrap()).cloned());
        let n = cands.len();
        let mut families: Vec<Vec<usize>> = vec![vec![]];
        for i in 0..n {
            families.push(vec![i]);
            for j in i + 1..n {
                families.push(vec![i, j]);
                for k in j + 1..n {
                    families.push(vec![i, j, k]);
                }
            }
        }
        for fam in families {
            let ys: Vec<ConstructibleSet> = fam.iter().map(|&i| cands[i].clone()).collect();
            for c in &chars {
                match ess_membership_witness(aut, c, x, &ys) {
                    Ok(r) => {
                        ensure(r.agree, format!("join fails inside {}", x.render(aut)))?;
                        checked += 1;
                    }
                    Err(Error::PremiseViolated(_)) => break,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    Ok(checked)
}

fn c9(cli: &mut Cli) -> Outcome {
    let mut summary = Vec::new();
    for name in CORPUS {
        let r = cli.json(&["star", "--spec", name, "--limit", "1000000"])?;
        ensure(r["verdict"] != "Unknown", format!("{name}: Unknown"))?;
        ensure(
            r["results"]["budget_exhausted"] == false,
            format!("{name}: budget exhausted"),
        )?;
        let entries = r["results"]["entries"]["items"].as_array().cloned().unwrap_or_default();
        ensure(!entries.is_empty(), format!("{name}: no classes"))?;
        summary.push(format!("{name}={}", r["verdict"].as_str().unwrap_or("?")));
        if *name != "golden" {
            continue;
        }
        ensure(r["verdict"] == "Holds", "golden does not hold")?;
        let aut = load(name);
        for e in entries.iter().filter(|e| e["premise"] == "Infinite") {
            let omega = e["witness"]
                .as_str()
                .ok_or_else(|| format!("golden: class without witness: {e}"))?;
            let omega = EvPeriodicWord::parse(aut.alphabet(), omega).map_err(|x| x.to_string())?;
            ensure(in_l(&aut, &omega.prefix(30)), "ω ∉ X")?;
            for t in strings(&e["lambda"]) {
                let tw = omega.prepend(ew(&aut, &t).letters());
                ensure(in_l(&aut, &tw.prefix(30)), format!("{t}ω ∉ X"))?;
            }
            for r in strings(&e["gamma"]) {
                let rw = omega.prepend(ew(&aut, &r).letters());
                ensure(!in_l(&aut, &rw.prefix(30)), format!("{r}ω ∈ X"))?;
            }
        }
    }
    Ok(summary.join(" "))
}

fn c10(cli: &mut Cli) -> Outcome {
    let need = [
        "orthogonality",
        "semi-saturation",
        "prefix-nesting",
        "shift-decomposition",
        "round-trip",
        "functoriality",
    ];
    let mut germs = Vec::new();
    for name in CORPUS {
        let r = cli.json(&["groupoid-check", "--spec", name, "--budget", "4", "--radius", "4"])?;
        let checks = r["results"]["checks"].as_array().cloned().unwrap_or_default();
        for c in checks.iter().filter(|c| c["passed"] != true) {
            return Err(format!("{name}: {} failed: {}", c["name"], c["counterexample"]));
        }
        for n in need {
            ensure(checks.iter().any(|c| c["name"] == n), format!("{name}: no {n} check"))?;
        }
        ensure(r["verdict"] == "Pass", format!("{name}: {}", r["verdict"]))?;
        germs.push(format!("{name}:{}", r["results"]["germs"]));
    }
    Ok(format!("germs {}", germs.join(" ")))
}

fn c11(cli: &mut Cli) -> Outcome {
    let need = [
        "partial-isometry",
        "vacuum-rank-one",
        "matrix-units",
        "expectation-kills-nonidempotents",
        "tensor-grading",
    ];
    let mut dims = Vec::new();
    for name in CORPUS {
        let r = cli.json(&["matrix-verify", "--spec", name, "--n", "4,6,8"])?;
        for size in r["results"]["sizes"].as_array().cloned().unwrap_or_default() {
            let checks = size["checks"].as_array().cloned().unwrap_or_default();
            for c in checks.iter().filter(|c| c["passed"] != true) {
                return Err(format!(
                    "{name} N={}: {} failed: {}",
                    size["n"], c["name"], c["counterexample"]
                ));
            }
            for n in need {
                ensure(checks.iter().any(|c| c["name"] == n), format!("{name}: no {n} check"))?;
            }
        }
        ensure(r["verdict"] == "Pass", format!("{name}: {}", r["verdict"]))?;
        let top = r["results"]["sizes"][2]["basis_len"].clone();
        dims.push(format!("{name}:{top}"));
    }
    Ok(format!("N ∈ {{4,6,8}}; basis size at N=8 {}", dims.join(" ")))
}

fn c12(cli: &mut Cli) -> Outcome {
    ensure(!cli.log.is_empty(), "no CLI invocations recorded")?;
    for (args, first) in &cli.log {
        let again = Cli::raw(args)?;
        ensure(
            &again == first,
            format!("`shiftsem {}` differs between runs", args.join(" ")),
        )?;
    }
    Ok(format!("{} invocations byte-identical on rerun", cli.log.len()))
}

struct Criterion {
    id: usize,
    title: &'static str,
    tolerance: &'static str,
    limit: Option<Duration>,
    run: fn(&mut Cli) -> Outcome,
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            title: "follower F_{a,b} on abc",
            tolerance: "exact",
            limit: secs(1),
            run: c1,
        },
        Criterion {
            id: 2,
            title: "cover of F_{1,2} and its defect",
            tolerance: "exact",
            limit: secs(5),
            run: c2,
        },
        Criterion {
            id: 3,
            title: "infinite boundary of F_{1,2}",
            tolerance: "exact",
            limit: secs(5),
            run: c3,
        },
        Criterion {
            id: 4,
            title: "F_μ case table (a)-(j)",
            tolerance: "exact",
            limit: secs(10),
            run: c4,
        },
        Criterion {
            id: 5,
            title: "principal character on {c}, ground",
            tolerance: "exact",
            limit: secs(1),
            run: c5,
        },
        Criterion {
            id: 6,
            title: "finite-universe defects",
            tolerance: "exact",
            limit: secs(1),
            run: c6,
        },
        Criterion {
            id: 7,
            title: "hull vs brute-force partial maps",
            tolerance: "exact",
            limit: secs(60),
            run: c7,
        },
        Criterion {
            id: 8,
            title: "character criteria and joins",
            tolerance: "exact",
            limit: secs(120),
            run: c8,
        },
        Criterion {
            id: 9,
            title: "condition (*) on the corpus",
            tolerance: "exact",
            limit: secs(60),
            run: c9,
        },
        Criterion {
            id: 10,
            title: "groupoid model, B=4, radius 4",
            tolerance: "exact",
            limit: secs(60),
            run: c10,
        },
        Criterion {
            id: 11,
            title: "matrix identities, N=4,6,8",
            tolerance: "exact",
            limit: secs(60),
            run: c11,
        },
        Criterion {
            id: 12,
            title: "CLI determinism",
            tolerance: "byte-identical",
            limit: None,
            run: c12,
        },
    ];
    let mut cli = Cli::default();
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)(&mut cli))).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let in_time = c.limit.is_none_or(|l| took <= l);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(status == "FAIL");
        let limit = c.limit.map_or("none".to_string(), |l| format!("< {} s", l.as_secs()));
        println!(
            "{status} {:>2}. {} [tolerance {}; limit {limit}; took {:.2} s] {detail}",
            c.id,
            c.title,
            c.tolerance,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

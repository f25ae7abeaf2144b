//! Command dispatch for the `shiftsem` binary. Every command returns a
//! [`Report`]; negative verdicts are reports too, and only malformed input
//! is an error.

pub mod expr;
pub mod report;

use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use shiftsem_core::chars::{
    char_eval, classify_string, ess_membership_witness, ground_report, principal_ultra, string_of_point,
    string_of_word, Character,
};
use shiftsem_core::constructible::{f_lambda_gamma, interior_boundary, WordSetLambda};
use shiftsem_core::groupoid::{self, groupoid_check, PointSample};
use shiftsem_core::hull::{equals, leq, mul};
use shiftsem_core::matrix::{matrix_verify, MatrixParams};
use shiftsem_core::regset::Cardinality;
use shiftsem_core::specfile::{self, SpecFile, CORPUS};
use shiftsem_core::tightness::{
    condition_star, cover_verdict, defect_set, hypotheses_check, CoverVerdict, FiniteUniverseFamily, StarVerdict,
    STAR_BUDGET,
};
use shiftsem_core::{compile, ExtWord, ShiftAutomaton};

pub use report::Report;

/// Exit status for malformed input (bad spec, word or set syntax).
pub const EXIT_INPUT: i32 = 1;
/// Exit status for usage errors, matching clap.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] shiftsem_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "shiftsem",
    version,
    about = "Subshift semigroups, hulls, covers and their models"
)]
pub struct Cli {
    /// Print the machine report (JSON) instead of the human rendering.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArg {
    /// Bundled shift name (golden, ex4, abc, full1, full2) or a path to a
    /// presentation file.
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Enumerate or count the language, or test membership.
    Lang {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Report only the number of words of each length.
        #[arg(long)]
        count: bool,
        /// Test whether a finite word lies in the language.
        #[arg(long)]
        word: Option<String>,
        /// Test whether an eventually periodic word `pre(period)` is a point.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Product in the subshift semigroup.
    Mul {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The follower intersection F_Λ, or F_{Λ,Γ} with --gamma.
    Follower {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Product of two inverse-hull elements.
    HullMul {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Equality and order of two inverse-hull elements.
    HullEq {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Evaluate a character on a constructible set.
    CharEval {
        #[command(flatten)]
        spec: SpecArg,
        /// String character of a finite word.
        #[arg(long, conflicts_with_all = ["point", "principal"])]
        word: Option<String>,
        /// String character of an eventually periodic point `pre(period)`.
        #[arg(long, conflicts_with = "principal")]
        point: Option<String>,
        /// Principal character of a finite minimal constructible set.
        #[arg(long)]
        principal: Option<String>,
        #[arg(long)]
        set: String,
        /// `;`-separated family whose union differs from the set by a finite
        /// set; checks the join equation. The empty string is the empty
        /// family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Decide whether a family covers a constructible set.
    Cover {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        set: String,
        #[arg(long = "with")]
        with: String,
        /// Extension length for the fallback search.
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long, default_value_t = 20)]
        sample_len: usize,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Defect set of a family, on a shift or in a finite universe.
    Defect {
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        set: String,
        #[arg(long = "with")]
        with: String,
        /// Finite universe, e.g. `{0,1,2}`.
        #[arg(long, conflicts_with_all = ["spec", "naturals"])]
        universe: Option<String>,
        /// The naturals truncated to `0..n`, with `n-1` marking the tail.
        #[arg(long, conflicts_with = "spec")]
        naturals: Option<u64>,
        /// Finite-universe family, e.g. `{};{0};{1};{0,1,2}`.
        #[arg(long)]
        members: Option<String>,
        #[arg(long, default_value_t = 20)]
        sample_len: usize,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Check the hypotheses that certify essential tightness.
    Hyp {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Decide condition (*) class by class.
    Star {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = STAR_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Whether every follower intersection is empty or infinite.
    Ground {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Verify the partial action and groupoid identities on sampled points.
    GroupoidCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = groupoid::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = groupoid::DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = groupoid::DEFAULT_MAX_SEEDS)]
        max_seeds: usize,
    },
    /// Verify the truncated operator identities at each size.
    MatrixVerify {
        #[command(flatten)]
        spec: SpecArg,
        /// Comma-separated truncation lengths.
        #[arg(long, default_value = "4")]
        n: String,
        #[arg(long)]
        word_len: Option<usize>,
        #[arg(long)]
        hull_len: Option<usize>,
        #[arg(long)]
        tensor_radius: Option<usize>,
        #[arg(long)]
        pair_cap: Option<usize>,
    },
}

/// Resolves `--spec`: an existing file wins over a bundled name.
pub fn load_spec(spec: &str) -> Result<(SpecFile, ShiftAutomaton), CliError> {
    let file = if Path::new(spec).is_file() {
        specfile::parse_spec(Path::new(spec))?
    } else if CORPUS.contains(&spec) {
        specfile::corpus(spec)?
    } else {
        return Err(CliError::Input(format!(
            "'{spec}' is neither a file nor a bundled shift ({})",
            CORPUS.join(", ")
        )));
    };
    let aut = compile(&file.spec)?;
    Ok((file, aut))
}

fn lambda_value(aut: &ShiftAutomaton, l: &WordSetLambda) -> Value {
    Value::Array(l.iter().map(|t| Value::String(aut.render_ext(t))).collect())
}

fn words_value(aut: &ShiftAutomaton, ws: &[shiftsem_core::Word], limit: usize) -> Value {
    let listed: Vec<String> = ws.iter().take(limit).map(|w| aut.render(w.letters())).collect();
    json!({ "words": listed, "truncated": ws.len() > limit })
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

/// Runs one command.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Lang {
            spec,
            max_len,
            count,
            word,
            point,
            limit,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let mut r = Report::new("lang", Some(&file.name));
            r.input("max_len", *max_len).input("count", *count);
            let words = aut.enumerate_language(*max_len);
            let counts: Vec<usize> = (1..=*max_len)
                .map(|n| words.iter().filter(|w| w.len() == n).count())
                .collect();
            r.result("counts", counts.clone());
            if !*count {
                r.result("language", words_value(&aut, &words, *limit));
            }
            r.verdict = counts.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            if let Some(w) = word {
                r.input("word", w.as_str());
                let inside = aut.contains(&expr::word(&aut, w)?)?;
                r.result("word_in_language", inside);
                r.verdict = yes_no(inside, "InLanguage", "NotInLanguage");
            }
            if let Some(p) = point {
                r.input("point", p.as_str());
                let inside = aut.contains_point(&expr::point(&aut, p)?)?;
                r.result("point_in_shift", inside);
                r.verdict = yes_no(inside, "InShift", "NotInShift");
            }
            Ok(r)
        }
        Command::Mul { spec, x, y } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let (a, b) = (aut.alphabet().ext_word(x)?, aut.alphabet().ext_word(y)?);
            for (t, w) in [(x, &a), (y, &b)] {
                if let ExtWord::W(w) = w {
                    if !aut.contains(w)? {
                        return Err(CliError::Input(format!("'{t}' is not in the language")));
                    }
                }
            }
            let p = aut.sx_mul(&a, &b);
            let mut r = Report::new("mul", Some(&file.name));
            r.input("x", x.as_str()).input("y", y.as_str());
            r.result(
                "product",
                if p.is_zero() {
                    "0".to_string()
                } else {
                    aut.render_ext(&p)
                },
            );
            r.verdict = yes_no(p.is_zero(), "Zero", "NonZero");
            Ok(r)
        }
        Command::Follower {
            spec,
            lambda,
            gamma,
            max_len,
            limit,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let l = expr::word_list(&aut, lambda)?;
            let g = match gamma {
                Some(g) => expr::word_list(&aut, g)?,
                None => WordSetLambda::new(),
            };
            let f = f_lambda_gamma(&aut, &l, &g)?;
            let mut r = Report::new("follower", Some(&file.name));
            r.input("lambda", lambda_value(&aut, &l))
                .input("gamma", lambda_value(&aut, &g));
            let sample = report::word_sample(&aut, &f, *max_len, *limit);
            let listed: Vec<String> = serde_json::from_value(sample["words"].clone()).unwrap_or_default();
            r.result("set", report::brace(&listed, sample["truncated"] == true));
            r.result("sample", sample);
            r.verdict = f.cardinality().label().into();
            Ok(r)
        }
        Command::HullMul { spec, a, b } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let (x, y) = (expr::hull_expr(&aut, a)?, expr::hull_expr(&aut, b)?);
            let p = mul(&aut, &x, &y);
            let mut r = Report::new("hull-mul", Some(&file.name));
            r.input("a", a.as_str()).input("b", b.as_str());
            r.result("a", x.render(&aut)).result("b", y.render(&aut));
            r.result("product", p.render(&aut));
            r.result("idempotent", p.is_idempotent());
            r.result("d", p.d_map().map(|d| d.render(aut.alphabet())));
            r.verdict = yes_no(p.is_zero(), "Zero", "NonZero");
            Ok(r)
        }
        Command::HullEq { spec, a, b } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let (x, y) = (expr::hull_expr(&aut, a)?, expr::hull_expr(&aut, b)?);
            let mut r = Report::new("hull-eq", Some(&file.name));
            r.input("a", a.as_str()).input("b", b.as_str());
            r.result("a", x.render(&aut)).result("b", y.render(&aut));
            r.result("a_leq_b", leq(&aut, &x, &y))
                .result("b_leq_a", leq(&aut, &y, &x));
            r.verdict = yes_no(equals(&aut, &x, &y), "Equal", "NotEqual");
            Ok(r)
        }
        Command::CharEval {
            spec,
            word,
            point,
            principal,
            set,
            family,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let mut r = Report::new("char-eval", Some(&file.name));
            let c = match (word, point, principal) {
                (Some(w), None, None) => {
                    r.input("word", w.as_str());
                    Character::StringChar(string_of_word(&aut, &expr::word(&aut, w)?)?)
                }
                (None, Some(p), None) => {
                    r.input("point", p.as_str());
                    Character::StringChar(string_of_point(&aut, &expr::point(&aut, p)?)?)
                }
                (None, None, Some(y)) => {
                    r.input("principal", y.as_str());
                    let ys = expr::set_expr(&aut, y)?;
                    principal_ultra(&aut, ys.constructible(y)?)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --word, --point, --principal".into(),
                    ))
                }
            };
            if let Character::StringChar(s) = &c {
                let class = classify_string(s);
                r.result(
                    "string",
                    json!({ "open": class.open, "maximal": class.maximal, "bounded": class.bounded }),
                );
            }
            r.input("set", set.as_str());
            let xv = expr::set_expr(&aut, set)?;
            let x = xv.constructible(set)?;
            let value = char_eval(&aut, &c, x)?;
            r.result("value", u8::from(value));
            if let Some(fam) = family {
                r.input("family", fam.as_str());
                let ys = expr::set_family(&aut, fam)?;
                let e = ess_membership_witness(&aut, &c, x, &ys)?;
                r.result(
                    "join",
                    json!({
                        "phi_set": e.phi_x,
                        "phi_union": e.phi_union,
                        "agree": e.agree,
                        "phi_set_by_finiteness": e.phi_x_by_finiteness,
                    }),
                );
                r.result("outside_essential_closure", !e.agree);
                r.scope("a disagreement certifies the character is not in the closure of the string characters");
            }
            r.verdict = u8::from(value).to_string();
            Ok(r)
        }
        Command::Cover {
            spec,
            set,
            with,
            bound,
            sample_len,
            limit,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let x = expr::set_expr(&aut, set)?;
            let x = x.constructible(set)?;
            let cands = expr::set_family(&aut, with)?;
            let mut r = Report::new("cover", Some(&file.name));
            r.input("set", set.as_str())
                .input("with", with.as_str())
                .input("bound", *bound);
            let verdict = cover_verdict(&aut, x, &cands, *bound)?;
            match &verdict {
                CoverVerdict::Covered { pairs, classes } => {
                    r.result("search", json!({ "pairs": pairs, "classes": classes }));
                }
                CoverVerdict::NotCovered { witness } => {
                    r.result("witness", witness.render(&aut));
                }
                CoverVerdict::UnknownUpTo(b) => {
                    r.scope(format!("no witness with extensions up to length {b}"));
                }
            }
            let d = defect_set(&aut, x, &cands)?;
            r.result("defect", report::word_sample(&aut, &d, *sample_len, *limit));
            r.verdict = verdict.label().into();
            Ok(r)
        }
        Command::Defect {
            spec,
            set,
            with,
            universe,
            naturals,
            members,
            sample_len,
            limit,
        } => {
            if let Some(spec) = spec {
                let (file, aut) = load_spec(spec)?;
                let x = expr::set_expr(&aut, set)?;
                let x = x.constructible(set)?;
                let cands = expr::set_family(&aut, with)?;
                let d = defect_set(&aut, x, &cands)?;
                let (interior, _) = interior_boundary(x);
                let mut r = Report::new("defect", Some(&file.name));
                r.input("set", set.as_str()).input("with", with.as_str());
                r.result("defect", report::word_sample(&aut, &d, *sample_len, *limit));
                r.result("defect_in_interior", d.intersect(&interior)?.cardinality().label());
                r.verdict = d.cardinality().label().into();
                return Ok(r);
            }
            let members = expr::num_family(members.as_deref().unwrap_or(""))?;
            let fam = match (universe, naturals) {
                (Some(u), None) => FiniteUniverseFamily::new(expr::num_set(u)?, members, None)?,
                (None, Some(n)) if *n > 0 => FiniteUniverseFamily::truncated_naturals(*n, members)?,
                _ => {
                    return Err(CliError::Usage(
                        "give --spec, --universe or --naturals N (N > 0)".into(),
                    ))
                }
            };
            let (x, covers) = (expr::num_set(set)?, expr::num_family(with)?);
            let d = fam.defect(&x, &covers)?;
            let (tight, ess) = fam.tightness();
            let mut r = Report::new("defect", None);
            r.input("set", set.as_str()).input("with", with.as_str());
            if let Some(u) = universe {
                r.input("universe", u.as_str());
            }
            if let Some(n) = naturals {
                r.input("naturals", *n);
                r.scope(format!(
                    "N truncated to 0..{n}; a set is Infinite iff it contains {}",
                    n - 1
                ));
            }
            let listed: Vec<u64> = d.set.iter().copied().take(*limit).collect();
            r.result(
                "defect",
                json!({ "elements": listed, "truncated": d.set.len() > *limit }),
            );
            r.result("is_cover", fam.is_cover(&x, &covers));
            r.result("family_tight", tight).result("family_essentially_tight", ess);
            r.verdict = if d.set.is_empty() {
                "Empty"
            } else if d.infinite {
                "Infinite"
            } else {
                "Finite"
            }
            .into();
            Ok(r)
        }
        Command::Hyp { spec, max_len, limit } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let h = hypotheses_check(&aut, *max_len)?;
            let mut r = Report::new("hyp", Some(&file.name));
            r.input("max_len", *max_len);
            r.result("length_function", h.length_function);
            let leftover: Vec<String> = match &h.leftover {
                Cardinality::Finite(ws) => ws.iter().map(|w| aut.render(w.letters())).collect(),
                _ => Vec::new(),
            };
            r.result(
                "leftover",
                json!({ "cardinality": h.leftover.label(), "words": leftover }),
            );
            r.result("leftover_finite", h.leftover_finite);
            r.result("boundaries_finite", h.boundaries_finite);
            r.result("classes_checked", h.classes_checked);
            if let Some((l, ws)) = &h.boundary_witness {
                r.result(
                    "boundary_witness",
                    json!({ "lambda": lambda_value(&aut, l), "cardinality": "Infinite", "boundary": words_value(&aut, ws, *limit) }),
                );
            }
            let mut failed = Vec::new();
            if !h.length_function {
                failed.push("length_function");
            }
            if !h.leftover_finite {
                failed.push("leftover_finite");
            }
            if !h.boundaries_finite {
                failed.push("boundaries_finite");
            }
            r.result("failed", failed);
            r.verdict = yes_no(h.certified, "Certified", "NotCertified");
            Ok(r)
        }
        Command::Star { spec, budget, limit } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let s = condition_star(&aut, *budget)?;
            let mut r = Report::new("star", Some(&file.name));
            r.input("budget", *budget);
            let (mut vac, mut wit, mut refuted) = (0usize, 0usize, 0usize);
            let mut entries = Vec::new();
            for e in &s.entries {
                let (label, witness) = match &e.verdict {
                    StarVerdict::VacuouslyTrue => {
                        vac += 1;
                        ("VacuouslyTrue", None)
                    }
                    StarVerdict::Witness(w) => {
                        wit += 1;
                        ("Witness", Some(w.render(aut.alphabet())))
                    }
                    StarVerdict::Refuted => {
                        refuted += 1;
                        ("Refuted", None)
                    }
                };
                // Refutations are listed first so truncation never hides them.
                entries.push((
                    label != "Refuted",
                    json!({
                        "lambda": lambda_value(&aut, &e.lambda),
                        "gamma": lambda_value(&aut, &e.gamma),
                        "premise": e.premise,
                        "verdict": label,
                        "witness": witness,
                    }),
                ));
            }
            entries.sort_by_key(|(k, _)| *k);
            let total = entries.len();
            let listed: Vec<Value> = entries.into_iter().take(*limit).map(|(_, v)| v).collect();
            r.result("entries", json!({ "items": listed, "truncated": total > *limit }));
            r.result(
                "counts",
                json!({ "pairs": total, "vacuous": vac, "witnessed": wit, "refuted": refuted }),
            );
            r.result("budget_exhausted", s.truncated);
            r.verdict = s.verdict.label().into();
            Ok(r)
        }
        Command::Ground { spec } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let g = ground_report(&aut)?;
            let mut r = Report::new("ground", Some(&file.name));
            r.result("classes_checked", g.classes_checked);
            if let Some((l, ws)) = &g.witness {
                let listed: Vec<String> = ws.iter().map(|w| aut.render(w.letters())).collect();
                r.result(
                    "witness",
                    json!({ "lambda": lambda_value(&aut, l), "set": report::brace(&listed, false) }),
                );
            }
            r.verdict = yes_no(g.holds, "Holds", "Fails");
            Ok(r)
        }
        Command::GroupoidCheck {
            spec,
            budget,
            radius,
            max_period,
            max_seeds,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let sample = PointSample::new(&aut, *budget, *max_period, *max_seeds);
            let g = groupoid_check(&aut, &sample, *radius);
            let mut r = Report::new("groupoid-check", Some(&file.name));
            r.input("budget", *budget).input("radius", *radius);
            r.input("max_period", *max_period).input("max_seeds", *max_seeds);
            r.result("sample_size", g.sample_size).result("germs", g.germs);
            r.result("checks", report::checks_value(&g.checks));
            r.scope("identities verified on the sampled points and the free-group ball only");
            r.verdict = yes_no(g.all_passed(), "Pass", "Fail");
            Ok(r)
        }
        Command::MatrixVerify {
            spec,
            n,
            word_len,
            hull_len,
            tensor_radius,
            pair_cap,
        } => {
            let (file, aut) = load_spec(&spec.spec)?;
            let mut params = MatrixParams::default();
            params.word_len = word_len.unwrap_or(params.word_len);
            params.hull_len = hull_len.unwrap_or(params.hull_len);
            params.tensor_radius = tensor_radius.unwrap_or(params.tensor_radius);
            params.pair_cap = pair_cap.unwrap_or(params.pair_cap);
            let sizes: Vec<usize> = n
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| CliError::Usage(format!("--n '{t}': {e}")))
                })
                .collect::<Result<_, _>>()?;
            let mut r = Report::new("matrix-verify", Some(&file.name));
            r.input("n", sizes.clone()).input(
                "params",
                json!({
                    "word_len": params.word_len,
                    "hull_len": params.hull_len,
                    "tensor_radius": params.tensor_radius,
                    "pair_cap": params.pair_cap,
                }),
            );
            let mut all = true;
            let mut per = Vec::new();
            for &size in &sizes {
                let m = matrix_verify(&aut, size, params);
                all &= m.all_passed();
                per.push(json!({
                    "n": m.n,
                    "basis_len": m.basis_len,
                    "operators": m.operators,
                    "checks": report::checks_value(&m.checks),
                }));
            }
            r.result("sizes", per);
            r.scope("exact integer arithmetic on the truncated basis of words up to length n");
            r.verdict = yes_no(all, "Pass", "Fail");
            Ok(r)
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the rendered output with its exit status.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return (e.to_string(), code);
        }
    };
    match execute(&cli.command) {
        Ok(r) => (if cli.json { r.to_json() } else { r.to_human() }, 0),
        Err(e) => (format!("error: {e}\n"), e.exit_code()),
    }
}

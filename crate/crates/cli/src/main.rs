//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a computational negative (membership
//! false, Wicks false, certificate or verify failure) with the result still
//! printed, 2 on usage or parse errors. JSON mode emits exactly one document
//! on standard output. `WORDLAB_BUDGET` overrides the default word-length
//! budget of 10^7 letters.

mod verify;

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use wordlab_core::{
    cl_bounds, cl_upper_bound, is_commutator, lcs_degree, parse_budgeted, remark_identity_check,
    rewrite, scan_generators, sup_divergence_table, syllables, weight, Alphabet, CertificateParams,
    ClBounds, ClUpperBound, FreeWord, LcsDegreeResult, SchreierLetter, Split, SubgroupGraph,
    TowerAlphabet, TowerCertificate,
};

const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "wordlab", version, about = "Free-group word calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word and print its canonical form.
    Reduce {
        word: String,
        /// Comma-separated generator names; inferred from the input when omitted.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Rhemtulla weight w_b of a word under a two-part split.
    Wb {
        /// Split notation "a1,a2|b1,b2" (A-part before the bar).
        #[arg(long)]
        split: String,
        /// The base element b (must lie in one part).
        #[arg(long)]
        b: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Alternating syllable decomposition of a word under a split.
    Syllables {
        #[arg(long)]
        split: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Commutator-length sandwich: weight lower bound against the rewriting
    /// upper bound, tightened by the Wicks decision.
    ClBounds {
        #[arg(long)]
        split: String,
        #[arg(long)]
        b: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Rewriting upper bound, with the letters as (coset, generator, sign)
    /// triples.
    ClUpper {
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a word is a single commutator.
    Wicks {
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Weight and lower-bound table for powers of [ab, ba].
    SupTable {
        #[arg(long)]
        split: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long = "l-max")]
        l_max: u64,
        #[arg(long)]
        json: bool,
    },
    /// Verify the power-of-a-commutator identities under b^2 = 1 on random
    /// integer matrix assignments.
    RemarkCheck {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Truncated Magnus expansion, nonzero terms in degree-then-lex order.
    Magnus {
        #[arg(long)]
        cap: usize,
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Lower-central-series degree of a word.
    LcsDegree {
        #[arg(long)]
        cap: usize,
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Folded subgroup automaton queries.
    Stallings {
        #[command(subcommand)]
        action: StallingsAction,
    },
    /// Substitution tower operations.
    Tower {
        #[command(subcommand)]
        action: TowerAction,
    },
    /// Run the property suites.
    Verify {
        /// Which suite: props, tower, or all.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Case count per fuzzed property.
        #[arg(long, default_value_t = 120)]
        cases: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum StallingsAction {
    /// Rank of the subgroup generated by the words in the file.
    Rank {
        /// File with one generator word per line.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Membership of a word in the generated subgroup.
    Member {
        #[arg(long)]
        gens: String,
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// A free basis of the generated subgroup.
    Basis {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum TowerAction {
    /// The stage-n image of generator x_i in the base group.
    Expand {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        json: bool,
    },
    /// Least series index excluding both stage-n words.
    Mn {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build the inequality-chain certificate.
    Certificate {
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: u64,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// Emit the certificate as JSON; "-" or no value for stdout, else a
        /// file path.
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn budget() -> Result<u64, String> {
    match std::env::var("WORDLAB_BUDGET") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("WORDLAB_BUDGET must be an unsigned integer, got {text:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn make_alphabet(declared: Option<&str>, inputs: &[&str]) -> Result<Arc<Alphabet>, String> {
    let names: Vec<String> = match declared {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect(),
        None => {
            let mut names = Vec::new();
            for text in inputs {
                for name in scan_generators(text) {
                    if !names.contains(&name) {
                        names.push(name);
                    }
                }
            }
            names
        }
    };
    if names.is_empty() {
        return Err("cannot determine an alphabet (declare one with --alphabet)".to_string());
    }
    Alphabet::new(names).map_err(|e| e.to_string())
}

fn parse_word(text: &str, alphabet: &Arc<Alphabet>, budget: u64) -> Result<FreeWord, String> {
    parse_budgeted(text, alphabet, budget).map_err(|e| format!("{text:?}: {e}"))
}

fn ensure_budget(w: &FreeWord, budget: u64, role: &str) -> Result<(), String> {
    if w.letter_len() > budget.into() {
        return Err(format!(
            "{role} has more than {budget} letters (raise WORDLAB_BUDGET to override)"
        ));
    }
    Ok(())
}

fn emit(value: Value) {
    println!("{value}");
}

fn letter_json(letter: &SchreierLetter, sign: i8, alphabet: &Arc<Alphabet>) -> Value {
    let coset: Vec<String> = letter
        .coset()
        .entries()
        .iter()
        .map(|e| e.to_string())
        .collect();
    json!({
        "coset": coset,
        "generator": alphabet.name(letter.generator()),
        "sign": sign,
    })
}

fn certificate_json(certificate: &TowerCertificate) -> Value {
    json!({
        "stages": certificate
            .stages
            .iter()
            .map(|s| {
                json!({
                    "n": s.n,
                    "m_n": s.m,
                    "K_hat": s.k_hat,
                    "L": s.l,
                    "weight": s.weight,
                    "lower_bound": s.lower_bound,
                    "slack": s.slack,
                })
            })
            .collect::<Vec<_>>(),
        "verdict": if certificate.verdict { "pass" } else { "fail" },
    })
}

fn run(command: Command) -> Result<u8, String> {
    let budget = budget()?;
    match command {
        Command::Reduce {
            word,
            alphabet,
            json,
        } => {
            let alphabet = make_alphabet(alphabet.as_deref(), &[&word])?;
            let w = parse_word(&word, &alphabet, budget)?;
            if json {
                emit(json!({ "reduced": w.to_string() }));
            } else {
                println!("{w}");
            }
            Ok(0)
        }
        Command::Wb {
            split,
            b,
            word,
            json,
        } => {
            let split = Split::parse(&split).map_err(|e| e.to_string())?;
            let b = parse_word(&b, split.alphabet(), budget)?;
            let w = parse_word(&word, split.alphabet(), budget)?;
            let value = weight(&w, &split, &b).map_err(|e| e.to_string())?;
            if json {
                emit(json!({ "weight": value }));
            } else {
                println!("{value}");
            }
            Ok(0)
        }
        Command::Syllables { split, word, json } => {
            let split = Split::parse(&split).map_err(|e| e.to_string())?;
            let w = parse_word(&word, split.alphabet(), budget)?;
            let form = syllables(&w, &split).map_err(|e| e.to_string())?;
            if json {
                let rows: Vec<Value> = form
                    .syllables()
                    .iter()
                    .map(|(p, s)| json!({ "part": p.to_string(), "word": s.to_string() }))
                    .collect();
                emit(json!({ "syllables": rows }));
            } else {
                for (part, syllable) in form.syllables() {
                    println!("{part} {syllable}");
                }
            }
            Ok(0)
        }
        Command::ClBounds {
            split,
            b,
            word,
            json,
        } => {
            let split = Split::parse(&split).map_err(|e| e.to_string())?;
            let b = parse_word(&b, split.alphabet(), budget)?;
            let w = parse_word(&word, split.alphabet(), budget)?;
            ensure_budget(&w, budget, "word")?;
            match cl_bounds(&w, &split, &b).map_err(|e| e.to_string())? {
                ClBounds::Infinite => {
                    if json {
                        emit(json!({ "cl": "infinite" }));
                    } else {
                        println!("infinite");
                    }
                }
                ClBounds::Finite { lower, upper } => {
                    if json {
                        emit(json!({ "lower": lower, "upper": upper }));
                    } else {
                        println!("lower {lower}");
                        println!("upper {upper}");
                    }
                }
            }
            Ok(0)
        }
        Command::ClUpper {
            word,
            alphabet,
            json,
        } => {
            let alphabet = make_alphabet(alphabet.as_deref(), &[&word])?;
            let w = parse_word(&word, &alphabet, budget)?;
            ensure_budget(&w, budget, "word")?;
            match cl_upper_bound(&w) {
                ClUpperBound::Infinite => {
                    if json {
                        emit(json!({ "upper": "infinite" }));
                    } else {
                        println!("infinite");
                    }
                }
                ClUpperBound::Finite(n) => {
                    let letters = rewrite(&w).map_err(|e| e.to_string())?;
                    debug_assert_eq!(letters.len() as u64, n);
                    if json {
                        let rows: Vec<Value> = letters
                            .iter()
                            .map(|(l, s)| letter_json(l, *s, &alphabet))
                            .collect();
                        emit(json!({ "upper": n, "letters": rows }));
                    } else {
                        println!("{n}");
                        for (letter, sign) in &letters {
                            println!(
                                "({}) {} {:+}",
                                letter
                                    .coset()
                                    .entries()
                                    .iter()
                                    .map(|e| e.to_string())
                                    .collect::<Vec<_>>()
                                    .join(","),
                                alphabet.name(letter.generator()),
                                sign
                            );
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Wicks {
            word,
            alphabet,
            json,
        } => {
            let alphabet = make_alphabet(alphabet.as_deref(), &[&word])?;
            let w = parse_word(&word, &alphabet, budget)?;
            ensure_budget(&w, budget, "word")?;
            let verdict = is_commutator(&w);
            if json {
                emit(json!({ "commutator": verdict }));
            } else {
                println!("{verdict}");
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Command::SupTable {
            split,
            a,
            b,
            l_max,
            json,
        } => {
            let split = Split::parse(&split).map_err(|e| e.to_string())?;
            let a = parse_word(&a, split.alphabet(), budget)?;
            let b = parse_word(&b, split.alphabet(), budget)?;
            let rows = sup_divergence_table(l_max, &split, &a, &b).map_err(|e| e.to_string())?;
            if json {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({ "L": r.exponent, "weight": r.weight, "lower_bound": r.lower_bound }))
                    .collect();
                emit(Value::Array(rows));
            } else {
                for row in rows {
                    println!("{}\t{}\t{}", row.exponent, row.weight, row.lower_bound);
                }
            }
            Ok(0)
        }
        Command::RemarkCheck {
            n,
            trials,
            seed,
            json,
        } => {
            let report = remark_identity_check(n, trials, seed);
            let pass = report.all_pass();
            if json {
                let rows: Vec<Value> = report
                    .trials
                    .iter()
                    .map(|t| json!({ "index": t.index, "pass": t.pass() }))
                    .collect();
                emit(json!({
                    "n": report.n,
                    "trials": rows,
                    "free_group_control_distinct": report.free_group_control_distinct,
                    "pass": pass,
                }));
            } else {
                for trial in &report.trials {
                    println!(
                        "trial {}: {}",
                        trial.index,
                        if trial.pass() { "pass" } else { "fail" }
                    );
                }
                println!(
                    "free-group control distinct: {}",
                    report.free_group_control_distinct
                );
                println!("overall: {}", if pass { "pass" } else { "fail" });
            }
            Ok(if pass { 0 } else { 1 })
        }
        Command::Magnus {
            cap,
            word,
            alphabet,
            json,
        } => {
            let alphabet = make_alphabet(alphabet.as_deref(), &[&word])?;
            let w = parse_word(&word, &alphabet, budget)?;
            let series = wordlab_core::expand(&w, cap).map_err(|e| e.to_string())?;
            if json {
                let terms: Vec<Value> = series
                    .terms()
                    .map(|(m, c)| {
                        let names: Vec<&str> = m
                            .vars()
                            .iter()
                            .map(|&v| alphabet.name(v as usize))
                            .collect();
                        json!({ "coefficient": c.to_string(), "monomial": names })
                    })
                    .collect();
                emit(json!({ "cap": cap, "terms": terms }));
            } else {
                for (monomial, coefficient) in series.terms() {
                    let rendered = if monomial.degree() == 0 {
                        "1".to_string()
                    } else {
                        monomial
                            .vars()
                            .iter()
                            .map(|&v| alphabet.name(v as usize))
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    println!("{coefficient}\t{rendered}");
                }
            }
            Ok(0)
        }
        Command::LcsDegree {
            cap,
            word,
            alphabet,
            json,
        } => {
            let alphabet = make_alphabet(alphabet.as_deref(), &[&word])?;
            let w = parse_word(&word, &alphabet, budget)?;
            match lcs_degree(&w, cap).map_err(|e| e.to_string())? {
                LcsDegreeResult::Degree(d) => {
                    if json {
                        emit(json!({ "degree": d }));
                    } else {
                        println!("{d}");
                    }
                }
                LcsDegreeResult::ExceedsCap { cap } => {
                    if json {
                        emit(json!({ "exceeds_cap": cap }));
                    } else {
                        println!("exceeds cap {cap}");
                    }
                }
            }
            Ok(0)
        }
        Command::Stallings { action } => run_stallings(action, budget),
        Command::Tower { action } => run_tower(action, budget),
        Command::Verify {
            suite,
            seed,
            cases,
            json,
        } => {
            let suite = match suite.as_str() {
                "props" => verify::Suite::Props,
                "tower" => verify::Suite::Tower,
                "all" => verify::Suite::All,
                other => return Err(format!("unknown suite {other:?} (props, tower or all)")),
            };
            let results = verify::run_suite(suite, seed, cases);
            let pass = results.iter().all(|r| r.pass);
            if json {
                let rows: Vec<Value> = results
                    .iter()
                    .map(|r| {
                        json!({
                            "property": r.id,
                            "cases": r.cases,
                            "pass": r.pass,
                            "detail": r.detail,
                        })
                    })
                    .collect();
                emit(json!({ "seed": seed, "results": rows, "pass": pass }));
            } else {
                for r in &results {
                    let mut line = format!(
                        "{} {} (cases={})",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.id,
                        r.cases
                    );
                    if let Some(detail) = &r.detail {
                        let _ = write!(line, ": {detail}");
                    }
                    println!("{line}");
                }
                println!("overall: {}", if pass { "pass" } else { "fail" });
            }
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn load_generators(
    path: &str,
    declared: Option<&str>,
    extra: &[&str],
    budget: u64,
) -> Result<(Arc<Alphabet>, Vec<FreeWord>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let mut inputs: Vec<&str> = lines.clone();
    inputs.extend_from_slice(extra);
    let alphabet = make_alphabet(declared, &inputs)?;
    let mut generators = Vec::with_capacity(lines.len());
    for line in lines {
        let w = parse_word(line, &alphabet, budget)?;
        ensure_budget(&w, budget, "generator")?;
        generators.push(w);
    }
    Ok((alphabet, generators))
}

fn run_stallings(action: StallingsAction, budget: u64) -> Result<u8, String> {
    match action {
        StallingsAction::Rank {
            gens,
            alphabet,
            json,
        } => {
            let (alphabet, generators) = load_generators(&gens, alphabet.as_deref(), &[], budget)?;
            let graph = SubgroupGraph::build(&alphabet, &generators).map_err(|e| e.to_string())?;
            if json {
                emit(json!({
                    "rank": graph.rank(),
                    "vertices": graph.vertex_count(),
                    "edges": graph.edge_count(),
                }));
            } else {
                println!("{}", graph.rank());
            }
            Ok(0)
        }
        StallingsAction::Member {
            gens,
            word,
            alphabet,
            json,
        } => {
            let (alphabet, generators) =
                load_generators(&gens, alphabet.as_deref(), &[word.as_str()], budget)?;
            let graph = SubgroupGraph::build(&alphabet, &generators).map_err(|e| e.to_string())?;
            let w = parse_word(&word, &alphabet, budget)?;
            ensure_budget(&w, budget, "word")?;
            let verdict = graph.contains(&w).map_err(|e| e.to_string())?;
            if json {
                emit(json!({ "member": verdict }));
            } else {
                println!("{verdict}");
            }
            Ok(if verdict { 0 } else { 1 })
        }
        StallingsAction::Basis {
            gens,
            alphabet,
            json,
        } => {
            let (alphabet, generators) = load_generators(&gens, alphabet.as_deref(), &[], budget)?;
            let graph = SubgroupGraph::build(&alphabet, &generators).map_err(|e| e.to_string())?;
            let basis = graph.basis();
            if json {
                let words: Vec<String> = basis.iter().map(FreeWord::to_string).collect();
                emit(json!({ "rank": basis.len(), "basis": words }));
            } else {
                for w in basis {
                    println!("{w}");
                }
            }
            Ok(0)
        }
    }
}

fn run_tower(action: TowerAction, budget: u64) -> Result<u8, String> {
    let tower = TowerAlphabet::new();
    match action {
        TowerAction::Expand { n, i, json } => {
            let word = tower.expand_to_base(n, i).map_err(|e| e.to_string())?;
            if json {
                emit(json!({ "n": n, "i": i, "word": word.to_string() }));
            } else {
                println!("{word}");
            }
            Ok(0)
        }
        TowerAction::Mn { n, cap, json } => {
            let m = tower.find_m(n, cap).map_err(|e| e.to_string())?;
            if json {
                emit(json!({ "n": n, "m_n": m }));
            } else {
                println!("{m}");
            }
            Ok(0)
        }
        TowerAction::Certificate { n_max, cap, json } => {
            let params = CertificateParams {
                n_max,
                magnus_cap: cap,
                letter_budget: budget,
            };
            let certificate = tower
                .build_certificate(&params)
                .map_err(|e| e.to_string())?;
            match json.as_deref() {
                Some("-") => emit(certificate_json(&certificate)),
                Some(path) => {
                    let document = certificate_json(&certificate).to_string();
                    fs::write(path, document + "\n").map_err(|e| format!("{path}: {e}"))?;
                }
                None => {
                    for s in &certificate.stages {
                        println!(
                            "stage n={} m_n={} K_hat={} L={} weight={} lower_bound={} slack={} {}",
                            s.n,
                            s.m,
                            s.k_hat,
                            s.l,
                            s.weight,
                            s.lower_bound,
                            s.slack,
                            if s.pass { "pass" } else { "fail" }
                        );
                    }
                    println!(
                        "verdict: {}",
                        if certificate.verdict { "pass" } else { "fail" }
                    );
                }
            }
            Ok(if certificate.verdict { 0 } else { 1 })
        }
    }
}

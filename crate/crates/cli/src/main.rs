use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skein_core::fkb::{self, BoundaryManifold, GeneratorFamily};
use skein_core::invariant::{closed_invariant, torus_bracket_pairing, torus_pairing};
use skein_core::lattice::{self, BasisFamily, FamilyKind};
use skein_core::verify::{self, CriterionResult, Suite, VerifyReport};
use skein_core::{theory, CycloElt, SkeinVector, SurgeryPresentation, TheoryParams};

#[derive(Parser)]
#[command(
    name = "skein",
    version,
    about = "Exact quantum invariants and integral lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    Bracket,
    #[value(name = "I")]
    I,
    Theta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// `(x, y)`, the integral form.
    Integral,
    /// `⟨x, y⟩ = (x, y)/D`.
    Bracket,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    First,
    Second,
}

#[derive(Subcommand)]
enum Command {
    /// Closed invariants of a surgery presentation given as JSON.
    Invariant {
        #[arg(long)]
        theory: u32,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum)]
        normalization: Option<Normalization>,
    },
    /// Torus pairing of two solid-torus vectors (`1`, `z`, `e<i>`, `w`, `t<k>`).
    Pairing {
        #[arg(long)]
        theory: u32,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value = "integral")]
        form: Form,
    },
    /// Gram matrix of a basis family, exact and in decimals.
    Gram {
        #[arg(long)]
        theory: u32,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        genus: u32,
    },
    /// Full Gram report; fails when the determinant is not a unit.
    BasisCheck {
        #[arg(long)]
        theory: u32,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        genus: u32,
    },
    /// FKB ideal of a torus or eyeglass complement.
    Fkb {
        #[arg(long)]
        theory: u32,
        #[arg(long, value_name = "L,K", conflicts_with = "eyeglass")]
        torus: Option<String>,
        #[arg(long, value_name = "L1,L2,M,K")]
        eyeglass: Option<String>,
        #[arg(long, value_enum, default_value = "first")]
        family: Family,
    },
    /// Compares J_2r with i_r(J_2) j_r(J_r).
    FkbFactor {
        #[arg(long)]
        r: u32,
        #[arg(long, value_name = "L,K")]
        torus: String,
    },
    /// Quantum integers [1..d] and whether they are units.
    Units {
        #[arg(long)]
        theory: u32,
    },
    /// Constants of a theory.
    Theory {
        #[arg(long)]
        theory: u32,
    },
    /// Replays the acceptance checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<Value, Failure>;

fn decimal(x: &CycloElt) -> String {
    let z = x.to_complex();
    let re = if z.re.abs() < 1e-13 { 0.0 } else { z.re };
    let im = if z.im.abs() < 1e-13 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re:.12}")
    } else {
        format!(
            "{re:.12}{}{:.12}i",
            if im < 0.0 { "-" } else { "+" },
            im.abs()
        )
    }
}

fn elt(x: &CycloElt) -> Value {
    json!({ "value": x, "decimal": decimal(x) })
}

fn parse_ints<const N: usize>(s: &str, what: &str) -> Result<[i64; N], Failure> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--{what}: {e}")))?;
    v.try_into()
        .map_err(|_| Failure::Usage(format!("--{what} expects {N} comma-separated integers")))
}

fn parse_vector(t: &TheoryParams, s: &str) -> Result<SkeinVector, Failure> {
    let s = s.trim();
    let v = match s {
        "1" => SkeinVector::basis(t, 0)?,
        "z" => SkeinVector::basis(t, 1)?,
        "w" | "omega" => t.omega(),
        _ if s.starts_with('e') => SkeinVector::basis(
            t,
            s[1..]
                .parse()
                .map_err(|e| Failure::Usage(format!("{s}: {e}")))?,
        )?,
        _ if s.starts_with('t') => {
            let k: i64 = s[1..]
                .parse()
                .map_err(|e| Failure::Usage(format!("{s}: {e}")))?;
            t.omega().twist_power(t, k)
        }
        _ => {
            return Err(Failure::Usage(format!(
                "unknown vector {s:?}; use 1, z, e<i>, w or t<k>"
            )))
        }
    };
    Ok(v)
}

fn family_of(name: &str, genus: u32) -> Result<BasisFamily, Failure> {
    let kind: FamilyKind = name.parse()?;
    Ok(if kind == FamilyKind::TwoTheoryGenusG {
        BasisFamily::genus(genus)
    } else {
        BasisFamily::torus(kind)
    })
}

fn matrix_json(m: &[Vec<CycloElt>]) -> (Value, Value) {
    let exact = m
        .iter()
        .map(|r| r.iter().map(|x| json!(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    let dec = m
        .iter()
        .map(|r| r.iter().map(decimal).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    (json!(exact), json!(dec))
}

fn thread_count() -> usize {
    std::env::var("SKEIN_NUM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn run_verify(suite: Suite) -> VerifyReport {
    let ids = suite.criteria();
    let queue = Mutex::new(ids.clone());
    let results = Mutex::new(Vec::<CriterionResult>::new());
    std::thread::scope(|s| {
        for _ in 0..thread_count().min(ids.len()) {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue poisoned").pop();
                let Some(id) = next else { break };
                let r = verify::run_criterion(id);
                results.lock().expect("results poisoned").push(r);
            });
        }
    });
    let mut criteria = results.into_inner().expect("results poisoned");
    criteria.sort_by(|a, b| a.id.cmp(&b.id));
    VerifyReport {
        suite: suite.to_string(),
        passed: criteria.iter().all(|c| c.passed),
        criteria,
        witnesses: verify::witnesses(),
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Invariant {
            theory: p,
            pattern,
            normalization,
        } => {
            let t = theory(p)?;
            let text = std::fs::read_to_string(&pattern)
                .map_err(|e| Failure::Usage(format!("{}: {e}", pattern.display())))?;
            let pres: SurgeryPresentation = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", pattern.display())))?;
            let r = closed_invariant(&t, &pres)?;
            let mut out = json!({ "theory": p, "signature": r.signature, "beta1": r.beta1 });
            let picks: Vec<(&str, &CycloElt)> = match normalization {
                None => vec![("bracket", &r.bracket), ("I", &r.i), ("theta", &r.theta)],
                Some(Normalization::Bracket) => vec![("bracket", &r.bracket)],
                Some(Normalization::I) => vec![("I", &r.i)],
                Some(Normalization::Theta) => vec![("theta", &r.theta)],
            };
            let mut dec = serde_json::Map::new();
            for (k, v) in picks {
                out[k] = json!(v);
                dec.insert(k.to_string(), json!(decimal(v)));
            }
            out["decimal"] = Value::Object(dec);
            Ok(out)
        }
        Command::Pairing {
            theory: p,
            x,
            y,
            form,
        } => {
            let t = theory(p)?;
            let (xv, yv) = (parse_vector(&t, &x)?, parse_vector(&t, &y)?);
            let v = match form {
                Form::Integral => torus_pairing(&t, &xv, &yv)?,
                Form::Bracket => torus_bracket_pairing(&t, &xv, &yv)?,
            };
            let mut out = elt(&v);
            out["theory"] = json!(p);
            Ok(out)
        }
        Command::Gram {
            theory: p,
            family,
            genus,
        } => {
            let t = theory(p)?;
            let fam = family_of(&family, genus)?;
            let rep = lattice::gram_and_unimodularity(&t, &fam)?;
            let (exact, dec) = matrix_json(&rep.gram);
            Ok(
                json!({ "theory": p, "family": rep.family, "genus": rep.genus, "gram": exact, "decimal": dec }),
            )
        }
        Command::BasisCheck {
            theory: p,
            family,
            genus,
        } => {
            let t = theory(p)?;
            let fam = family_of(&family, genus)?;
            let rep = lattice::gram_and_unimodularity(&t, &fam)?;
            let ok = rep.det_is_unit && rep.hermitian;
            let mut out = serde_json::to_value(&rep)?;
            out["det_decimal"] = json!(decimal(&rep.det));
            if ok {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Fkb {
            theory: p,
            torus,
            eyeglass,
            family,
        } => {
            let t = theory(p)?;
            let boundary = match (torus, eyeglass) {
                (Some(s), None) => {
                    let [l, k] = parse_ints::<2>(&s, "torus")?;
                    BoundaryManifold::TorusComplement { l, k }
                }
                (None, Some(s)) => {
                    let [l1, l2, m, k] = parse_ints::<4>(&s, "eyeglass")?;
                    BoundaryManifold::EyeglassComplement { l1, l2, m, k }
                }
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --torus or --eyeglass".into(),
                    ))
                }
            };
            let family = match family {
                Family::First => GeneratorFamily::First,
                Family::Second => GeneratorFamily::Second,
            };
            let gens = fkb::fkb_generators(&t, &boundary, family)?;
            let ideal = skein_core::IntegralIdeal::from_generators(t.level(), &gens)?;
            Ok(json!({
                "theory": p,
                "boundary": boundary,
                "generators": gens.iter().map(elt).collect::<Vec<_>>(),
                "ideal": ideal,
                "classification": fkb::classify_ideal(&ideal).to_string(),
            }))
        }
        Command::FkbFactor { r, torus } => {
            let [l, k] = parse_ints::<2>(&torus, "torus")?;
            let rep =
                fkb::ideal_factorization_check(r, &BoundaryManifold::TorusComplement { l, k })?;
            let out = serde_json::to_value(&rep)?;
            if rep.containment_holds && rep.equality_holds {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Units { theory: p } => {
            let t = theory(p)?;
            let rows: Vec<Value> = (1..=t.rank() as i64)
                .map(|n| {
                    let q = t.quantum_int(n);
                    json!({ "n": n, "value": q, "decimal": decimal(&q), "is_unit": q.is_unit() })
                })
                .collect();
            Ok(json!({ "theory": p, "quantum_integers": rows }))
        }
        Command::Theory { theory: p } => {
            let t = theory(p)?;
            Ok(json!({
                "p": p,
                "kind": t.kind(),
                "level": t.level(),
                "rank": t.rank(),
                "max_color": t.max_color(),
                "A": elt(&t.a()),
                "D": elt(t.d()),
                "kappa": elt(t.kappa()),
                "omega": t.omega_coefficients().iter().map(elt).collect::<Vec<_>>(),
            }))
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let rep = run_verify(suite);
            for c in &rep.criteria {
                eprintln!(
                    "{} {} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.title
                );
            }
            let out = serde_json::to_value(&rep)?;
            if rep.passed {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
    }
}

fn emit(v: &Value) {
    // a closed pipe downstream is not an error worth reporting
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! `zlab`: command-line front end for zlab-core.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 budget exhausted. With `--json` every run prints one JSON document,
//! checked against the shipped schema before it is written.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zlab_core::cohomology::pairing::PairingContext;
use zlab_core::cohomology::{massey_word, CoboundarySolver};
use zlab_core::free_group::zassenhaus_degree;
use zlab_core::unipotent::{kernel_intersection, DEFAULT_TUPLE_BUDGET};
use zlab_core::verify::{self, Status, VerificationReport, VerifyConfig};
use zlab_core::{epsilon, magnus, Degree, Error, FiniteGroup, GroupWord, Quotient, Word};

const SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Parser, Debug)]
#[command(name = "zlab", version, about = "Magnus expansions, Zassenhaus quotients and Massey products over F_p")]
struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on quotient orders.
    #[arg(long, global = true, env = "ZLAB_BUDGET_ELEMS", default_value_t = zlab_core::quotient::DEFAULT_ORDER_BUDGET)]
    budget_elems: usize,
    /// Cap on representation tuples enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_TUPLE_BUDGET)]
    budget_tuples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Magnus expansion of a word, truncated at a degree.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Coefficient modulus (any m >= 2).
        #[arg(long = "mod", visible_alias = "p")]
        modulus: u32,
        #[arg(long = "deg")]
        degree: usize,
        /// Alphabet size; defaults to the letters used.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Zassenhaus degree of a word.
    Degree {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// The quotient S/S_m as a JSON group document.
    Quotient {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: usize,
    },
    /// Intersection of kernels of all maps S/S_{n+1} -> U_n(F_p).
    Reps {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Massey product attached to a word, on S/S_n with n its length.
    Massey {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u32,
        /// Letters such as `0,1,0` or `a0a1a0`.
        #[arg(long)]
        word: String,
    },
    /// Pairing of an element of S_n with the Massey class of a word of length n.
    Pairing {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        word: String,
    },
    /// Run a verifier.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// With `all`, include the larger parameter sets.
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    Duality,
    MasseyCup,
    SmallGroups,
    Filtration,
    All,
}

/// One run's output: the JSON document, its schema entry, a text
/// rendering and whether it counts as a pass.
struct Output {
    kind: &'static str,
    doc: Value,
    text: String,
    pass: bool,
}

impl Output {
    fn ok(kind: &'static str, doc: Value, text: String) -> Self {
        Output {
            kind,
            doc,
            text,
            pass: true,
        }
    }
}

fn parse_word(s: &str) -> zlab_core::Result<GroupWord> {
    GroupWord::parse(s)
}

fn cmd_expand(word: &str, modulus: u32, degree: usize, k: Option<usize>) -> anyhow::Result<Output> {
    let g = parse_word(word)?;
    let k = k.unwrap_or_else(|| g.min_alphabet().max(1));
    let s = magnus(&g, modulus, k, degree)?;
    let terms: Vec<Value> = s
        .terms()
        .map(|(w, c)| json!({"word": w.letters(), "coeff": c}))
        .collect();
    let text = s.to_string();
    let doc = json!({
        "word": g.to_string(),
        "modulus": modulus,
        "alphabet": k,
        "degree_bound": degree,
        "series": text,
        "terms": terms,
    });
    Ok(Output::ok("expand", doc, text))
}

fn cmd_degree(word: &str, p: u32, cap: usize) -> anyhow::Result<Output> {
    let g = parse_word(word)?;
    let d = zassenhaus_degree(&g, p, cap)?;
    let doc = json!({
        "word": g.to_string(),
        "p": p,
        "cap": cap,
        "degree": d.lower_bound(),
        "exact": matches!(d, Degree::Exact(_)),
    });
    Ok(Output::ok("degree", doc, d.to_string()))
}

fn cmd_quotient(k: usize, p: u32, m: usize, budget: usize) -> anyhow::Result<Output> {
    let q = Quotient::build_with_budget(k, p, m, budget)?;
    let doc = serde_json::to_value(q.to_doc()?)?;
    let text = format!(
        "S/S_{m} for k={k}, p={p}: order {}, generators {:?}, filtration image orders {:?}",
        q.order(),
        q.generators(),
        (1..=m)
            .map(|n| q.filtration_image(n).map(|v| v.len()))
            .collect::<zlab_core::Result<Vec<_>>>()?
    );
    Ok(Output::ok("quotient", doc, text))
}

fn cmd_reps(k: usize, p: u32, n: usize, cfg: &VerifyConfig) -> anyhow::Result<Output> {
    let q = Quotient::build_with_budget(k, p, n + 1, cfg.order_budget)?;
    let ki = kernel_intersection(&q, n, cfg.tuple_budget)?;
    let elements: Vec<Value> = ki
        .elements
        .iter()
        .map(|&e| json!({"element": e, "word": q.witness(e).to_string(), "degree": q.element_degree(e)}))
        .collect();
    let doc = json!({
        "k": k,
        "p": p,
        "n": n,
        "quotient_order": q.order(),
        "filtration_order": ki.filtration_order,
        "intersection_order": ki.elements.len(),
        "representations_examined": ki.representations_examined,
        "representations_total": ki.total_representations,
        "intersection": elements,
    });
    let text = format!(
        "S/S_{} (order {}): kernels of {} of {} maps to U_{n}(F_{p}) meet in {} elements; image of S_{n} has {}",
        n + 1,
        q.order(),
        ki.representations_examined,
        ki.total_representations,
        ki.elements.len(),
        ki.filtration_order
    );
    Ok(Output::ok("reps", doc, text))
}

fn cmd_massey(k: usize, p: u32, word: &str, budget: usize) -> anyhow::Result<Output> {
    let w = Word::parse(word)?;
    let ctx = PairingContext::with_budget(k, p, w.len(), budget)?;
    let rep = massey_word(ctx.base(), &w)?.representative;
    let class_is_zero = CoboundarySolver::new(ctx.base(), p).is_coboundary(&rep);
    let vanishes = ctx.lift(&ctx.hat_solver(), &rep).is_ok();
    let support = rep.values().iter().filter(|&&v| v != 0).count();
    let doc = json!({
        "k": k,
        "p": p,
        "word": w.letters(),
        "quotient_order": ctx.base().order(),
        "class_is_zero": class_is_zero,
        "vanishes_on_inflation": vanishes,
        "support": support,
    });
    let text = format!(
        "Massey class of {w} on S/S_{} (order {}): {}, {} on S/S_{}",
        w.len(),
        ctx.base().order(),
        if class_is_zero { "zero" } else { "nonzero" },
        if vanishes { "vanishes" } else { "survives" },
        w.len() + 1
    );
    Ok(Output::ok("massey", doc, text))
}

fn cmd_pairing(k: usize, p: u32, sigma: &str, word: &str, budget: usize) -> anyhow::Result<Output> {
    let w = Word::parse(word)?;
    let s = parse_word(sigma)?;
    let ctx = PairingContext::with_budget(k, p, w.len(), budget)?;
    let psi = massey_word(ctx.base(), &w)?.representative;
    let value = ctx.value(&s, &psi)?;
    let eps = epsilon(&w, &s, p);
    let doc = json!({
        "k": k,
        "p": p,
        "n": w.len(),
        "sigma": s.to_string(),
        "word": w.letters(),
        "pairing": value,
        "epsilon": eps,
        "agree": value == eps,
    });
    let text = format!("pairing {value}, Magnus coefficient {eps}");
    Ok(Output::ok("pairing", doc, text))
}

fn report_output(r: VerificationReport) -> anyhow::Result<Output> {
    Ok(Output {
        kind: "report",
        pass: r.passed(),
        text: r.to_string().trim_end().to_string(),
        doc: serde_json::to_value(&r)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: Theorem,
    k: usize,
    p: u32,
    n: usize,
    m: usize,
    samples: usize,
    extended: bool,
    cfg: &VerifyConfig,
) -> anyhow::Result<Output> {
    let r = match theorem {
        Theorem::A => verify::verify_theorem_a(k, p, n, cfg)?,
        Theorem::B => verify::verify_theorem_b(k, p, n, cfg)?,
        Theorem::Duality => verify::verify_fundamental_duality(k, p, n, samples, cfg)?,
        Theorem::MasseyCup => verify::verify_massey_cup(k, p, cfg)?,
        Theorem::SmallGroups => verify::identify_small_groups(p, cfg)?,
        Theorem::Filtration => verify::verify_filtration_agreement(k, p, m, cfg)?,
        Theorem::All => {
            let reports = verify::run_all(extended, cfg)?;
            let pass = reports.iter().all(|r| r.passed());
            let text = reports.iter().map(|r| r.to_string()).collect::<String>();
            let status = if pass { Status::Pass } else { Status::Fail };
            return Ok(Output {
                kind: "suite",
                doc: json!({"status": status, "reports": reports}),
                text: text.trim_end().to_string(),
                pass,
            });
        }
    };
    report_output(r)
}

fn validate(kind: &str, doc: &Value) -> anyhow::Result<()> {
    let mut schema: Value = serde_json::from_str(SCHEMA).context("shipped schema is not JSON")?;
    schema["$ref"] = Value::String(format!("#/$defs/{kind}"));
    jsonschema::validate(&schema, doc).map_err(|e| anyhow!("output fails the {kind} schema: {e}"))
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let cfg = VerifyConfig {
        order_budget: cli.budget_elems,
        tuple_budget: cli.budget_tuples,
        seed: cli.seed,
        ..VerifyConfig::default()
    };
    match &cli.command {
        Command::Expand { word, modulus, degree, k } => cmd_expand(word, *modulus, *degree, *k),
        Command::Degree { word, p, cap } => cmd_degree(word, *p, *cap),
        Command::Quotient { k, p, m } => cmd_quotient(*k, *p, *m, cfg.order_budget),
        Command::Reps { k, p, n } => cmd_reps(*k, *p, *n, &cfg),
        Command::Massey { k, p, word } => cmd_massey(*k, *p, word, cfg.order_budget),
        Command::Pairing { k, p, sigma, word } => cmd_pairing(*k, *p, sigma, word, cfg.order_budget),
        Command::Verify {
            theorem,
            k,
            p,
            n,
            m,
            samples,
            extended,
        } => cmd_verify(*theorem, *k, *p, *n, *m, *samples, *extended, &cfg),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn emit(cli: &Cli, out: &Output) -> anyhow::Result<()> {
    let body = if cli.json {
        validate(out.kind, &out.doc)?;
        serde_json::to_string_pretty(&out.doc)?
    } else {
        out.text.clone()
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{body}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("zlab: thread pool: {e}");
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("zlab: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&cli, &out) {
        eprintln!("zlab: {e:#}");
        return ExitCode::from(1);
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

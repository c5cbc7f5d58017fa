use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wittenz::catalog::{self, AlgebraSpec};
use wittenz::factor::factor_coefficient;
use wittenz::method::{compute, normalize, EvaluationMethod, TreeMethod};
use wittenz::oracle::{verify, Normalization};
use wittenz::reduction::{validate_tree, ReductionMode, ReductionOptions};
use wittenz::{ComputationTree, Error, PiValue};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_BELOW_THRESHOLD: u8 = 4;

#[derive(Parser)]
#[command(name = "wittenz", version, about = "Exact Witten zeta values zeta_W(2m; g) as rational multiples of pi powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Tree,
    Closed,
    Both,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Witten,
    Bare,
    Native,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Witten => Normalization::Witten,
            NormArg::Bare => Normalization::Bare,
            NormArg::Native => Normalization::Native,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Hybrid,
    Formal,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value of zeta at s = 2m
    Compute {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "tree")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// witten: zeta_W(s) = M^s zeta_g(s,...,s); bare: zeta_g(s,...,s);
        /// native: bare for so7, sp6, sl5 and witten otherwise
        #[arg(long, value_enum, default_value = "native")]
        normalize: NormArg,
        /// Tree evaluation mode
        #[arg(long, value_enum, default_value = "hybrid")]
        mode: ModeArg,
        /// Alternative computation tree (JSON)
        #[arg(long)]
        tree: Option<String>,
        /// Pollard rho steps per split when factoring
        #[arg(long, default_value_t = 200_000)]
        effort: u64,
    },
    /// Compare the tree value against a truncated series
    Verify {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, default_value_t = 50)]
        precision: u32,
        #[arg(long, value_enum, default_value = "native")]
        normalize: NormArg,
        /// Exit with status 4 when fewer digits agree
        #[arg(long)]
        min_digits: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a computation tree, optionally validating it
    Tree {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Quick end-to-end checks
    Selftest,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::UnknownAlgebra(_) | Error::UnknownMethod(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::Tree(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn load_tree(path: &str) -> Result<ComputationTree, Error> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    ComputationTree::from_json(&s)
}

fn record(spec: &AlgebraSpec, m: u32, method: &str, norm: Normalization, v: &PiValue, effort: u64, ms: u128) -> Result<serde_json::Value, Error> {
    let f = factor_coefficient(v, effort)?;
    Ok(json!({
        "algebra": spec.name,
        "s": 2 * m,
        "method": method,
        "normalization": norm,
        "value": v,
        "factored": f.to_json(),
        "latex": f.to_latex(),
        "text": f.to_text(),
        "timing_ms": ms,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_compute(algebra: &str, m: u32, method: MethodArg, format: Format, norm: Normalization, mode: ModeArg, tree: Option<String>, effort: u64) -> Result<u8, Error> {
    let spec = catalog::get_algebra(algebra)?;
    let norm = norm.resolve(&spec);
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let options = ReductionOptions {
        mode: match mode {
            ModeArg::Hybrid => ReductionMode::Hybrid,
            ModeArg::Formal => ReductionMode::Formal,
        },
        ..ReductionOptions::default()
    };
    let tree = tree.map(|p| load_tree(&p)).transpose()?;
    let tree_method = TreeMethod { tree, options };
    let run_tree = || -> Result<(PiValue, u128), Error> {
        let t = Instant::now();
        let v = normalize(&spec, 2 * m, tree_method.zeta_w(&spec, 2 * m)?, norm);
        Ok((v, t.elapsed().as_millis()))
    };
    let run_closed = || -> Result<(PiValue, u128), Error> {
        let t = Instant::now();
        let v = compute(&spec, m, "closed", norm)?;
        Ok((v, t.elapsed().as_millis()))
    };
    let (label, v, ms) = match method {
        MethodArg::Tree => {
            let (v, ms) = run_tree()?;
            ("tree", v, ms)
        }
        MethodArg::Closed => {
            let (v, ms) = run_closed()?;
            ("closed", v, ms)
        }
        MethodArg::Both => {
            let (a, ta) = run_tree()?;
            let (b, tb) = run_closed()?;
            if a != b {
                eprintln!("mismatch: tree = {a}, closed = {b}");
                return Ok(EXIT_MISMATCH);
            }
            ("both", a, ta + tb)
        }
    };
    let rec = record(&spec, m, label, norm, &v, effort, ms)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rec).unwrap()),
        Format::Latex => println!("{}", rec["latex"].as_str().unwrap()),
        Format::Text => {
            println!("{} s={} ({label}, {:?}): {}", spec.name, 2 * m, norm, v);
            println!("  = {}", rec["text"].as_str().unwrap());
        }
    }
    Ok(0)
}

fn cmd_verify(algebra: &str, m: u32, bound: u64, precision: u32, norm: Normalization, min_digits: Option<u32>, format: Format) -> Result<u8, Error> {
    let spec = catalog::get_algebra(algebra)?;
    let norm = norm.resolve(&spec);
    let exact = compute(&spec, m, "tree", norm)?;
    let rep = verify(&spec, 2 * m, &exact, bound, precision, norm)?;
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&rep).unwrap());
    } else {
        println!("{} s={} bound={} precision={} ({:?})", rep.algebra, rep.n, rep.bound, rep.precision, rep.normalization);
        println!("  exact   {}", rep.exact_numeric);
        println!("  series  {}", rep.numeric);
        println!("  matching digits: {}{}", rep.matching_digits, if rep.inconclusive { " (inconclusive: precision too low)" } else { "" });
    }
    match min_digits {
        Some(d) if rep.matching_digits < d => Ok(EXIT_BELOW_THRESHOLD),
        _ => Ok(0),
    }
}

fn cmd_tree(algebra: Option<String>, check: bool, tree: Option<String>, format: Format) -> Result<u8, Error> {
    let supplied = tree.map(|p| load_tree(&p)).transpose()?;
    let spec = match algebra {
        Some(a) => Some(catalog::get_algebra(&a)?),
        None => None,
    };
    let tree = match (&supplied, &spec) {
        (Some(t), _) => t.clone(),
        (None, Some(s)) => s.tree.clone(),
        (None, None) => return Err(Error::InvalidArgument("give --algebra or --tree".into())),
    };
    if format == Format::Json {
        println!("{}", tree.to_json());
    } else {
        print!("{}", tree.render());
        println!("internal nodes: {}, depth: {}", tree.internal_nodes(), tree.depth());
    }
    if !check {
        return Ok(0);
    }
    let spec = spec.ok_or_else(|| Error::InvalidArgument("--check needs --algebra".into()))?;
    let rep = validate_tree(&spec.matrix(2), &tree);
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&rep).unwrap());
    } else {
        println!("good-parent nodes: {}/{}", rep.good_parent_nodes, rep.internal_nodes);
        let lemma = rep.nodes.iter().filter(|n| n.last_generation_lemma == Some(true)).count();
        let bottoms = rep.nodes.iter().filter(|n| n.last_generation_lemma.is_some()).count();
        println!("last-generation nodes meeting the merge-lemma hypotheses: {lemma}/{bottoms}");
        for f in rep.failures() {
            println!("  FAIL {f}");
        }
        println!("{}", if rep.passed { "pass" } else { "fail" });
    }
    Ok(if rep.passed { 0 } else { EXIT_FAILURE })
}

fn cmd_selftest() -> Result<u8, Error> {
    let mut ok = true;
    let mut line = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    let sl3 = catalog::get_algebra("sl3")?;
    let v = compute(&sl3, 1, "tree", Normalization::Witten)?;
    line("sl3 s=2 is 4/2835 pi^6", v == PiValue::new(wittenz::exact::ratio(4, 2835), 6)?);
    for name in catalog::algebra_names() {
        let spec = catalog::get_algebra(name)?;
        line(&format!("{name} default tree validates"), validate_tree(&spec.matrix(2), &spec.tree).passed);
        let a = compute(&spec, 1, "tree", Normalization::Witten)?;
        let b = compute(&spec, 1, "closed", Normalization::Witten)?;
        line(&format!("{name} s=2 tree = closed"), a == b);
    }
    let so7 = catalog::get_algebra("so7")?;
    let v = compute(&so7, 1, "tree", Normalization::Bare)?;
    let f = factor_coefficient(&v, 10_000)?;
    line("so7 s=2 latex", f.to_latex() == "\\frac{2^3\\cdot 19}{3^3\\cdot 7\\cdot 17!}\\pi^{18}");
    Ok(if ok { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    wittenz::exact::warm_bernoulli(64);
    let r = match cli.command {
        Command::Compute { algebra, m, method, format, normalize, mode, tree, effort } => {
            cmd_compute(&algebra, m, method, format, normalize.into(), mode, tree, effort)
        }
        Command::Verify { algebra, m, bound, precision, normalize, min_digits, format } => {
            cmd_verify(&algebra, m, bound, precision, normalize.into(), min_digits, format)
        }
        Command::Tree { algebra, check, tree, format } => cmd_tree(algebra, check, tree, format),
        Command::Selftest => cmd_selftest(),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

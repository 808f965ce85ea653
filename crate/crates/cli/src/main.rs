//! `fracmatch`: analyse graphs, generate ℋ(d,k) members, run the bound
//! checkers and the deficiency oracle.
//!
//! Exit codes: 0 success, 1 verification violation, 2 usage or parse error,
//! 3 precondition violation (disconnected or edgeless input).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracmatch_core::families::{gen_complete_bipartite, gen_ring_blocks, FamilyParams};
use fracmatch_core::graph::{parse_edge_list, serialize_edge_list, Graph};
use fracmatch_core::matching::{
    fractional_matching_number, max_deficiency_bruteforce, DeficiencyWitness, HalfInt,
    DEFAULT_BRUTE_FORCE_CAP,
};
use fracmatch_core::verify::{
    check_theorem_bound, fuzz_campaign, CampaignConfig, EqualityCheck, EqualityOutcome, LemmaCheck, Tolerances,
    VerificationReport, VerifyError,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fracmatch", version, about = "Spectral radius and fractional matching toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bound report for a graph as JSON.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Write a member of H(d,k) as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Run every checker on a graph; exit 1 on any violation.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
        /// Largest graph handed to the brute-force deficiency oracle.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        /// Lowers alpha_f by one half-unit before checking.
        #[arg(long, hide = true)]
        corrupt_alpha: bool,
    },
    /// Random self-test campaign; exit 1 if any trial fails a check.
    Fuzz {
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 5)]
        d_max: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Both sides of the fractional Berge–Tutte identity.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Complete bipartite graph K_{a,b}.
    Kab {
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ring of c copies of K_{d,d+m}.
    Ring {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        c: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Certified residual for spectral radii.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Slack treated as equality.
    #[arg(long, default_value_t = 1e-6)]
    eq_tol: f64,
}

impl TolArgs {
    fn tolerances(self) -> Result<Tolerances, Failure> {
        for (name, x) in [("--tol", self.tol), ("--eq-tol", self.eq_tol)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Failure::usage(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(Tolerances {
            spectral: self.tol,
            equality: self.eq_tol,
        })
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Disconnected | VerifyError::NoEdges => Failure::precondition(e.to_string()),
            VerifyError::InvalidCampaign(_) => Failure::usage(e.to_string()),
            other => Failure {
                code: 1,
                message: other.to_string(),
            },
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn analyze(input: &PathBuf, tol: TolArgs) -> Result<u8, Failure> {
    let tol = tol.tolerances()?;
    let g = read_graph(input)?;
    let report = check_theorem_bound(&g, &tol)?;
    print_json(&report);
    Ok(0)
}

fn gen(family: &Family) -> Result<u8, Failure> {
    let (graph, params, output) = match family {
        Family::Kab { a, b, output } => {
            let g = gen_complete_bipartite(*a, *b).map_err(|e| Failure::usage(e.to_string()))?;
            let (small, large) = ((*a).min(*b), (*a).max(*b));
            let params = FamilyParams::new(small, large - small).map_err(|e| Failure::usage(e.to_string()))?;
            (g, params, output)
        }
        Family::Ring { d, m, c, output } => {
            let g = gen_ring_blocks(*d, *m, *c).map_err(|e| Failure::usage(e.to_string()))?;
            let params = FamilyParams::ring(*d, *m, *c).map_err(|e| Failure::usage(e.to_string()))?;
            (g, params, output)
        }
    };
    let n = graph.n();
    if let (Ok(alpha), Ok(lambda)) = (
        fracmatch_core::families::expected_fractional_matching(&params, n),
        fracmatch_core::families::expected_lambda1(&params, n),
    ) {
        eprintln!(
            "H({}, {}) member on {n} vertices: expected alpha_f = {alpha}, expected lambda1 = {lambda}",
            params.d, params.k
        );
    }
    let text = serialize_edge_list(&graph);
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct OracleReport {
    n: usize,
    alpha_f: HalfInt,
    witness: DeficiencyWitness,
    half_n_minus_def: HalfInt,
    agree: bool,
}

fn oracle_report(g: &Graph, cap: usize) -> Result<OracleReport, Failure> {
    let witness = max_deficiency_bruteforce(g, cap).map_err(|e| Failure::usage(e.to_string()))?;
    let (alpha_f, _) = fractional_matching_number(g);
    let half_n_minus_def = HalfInt::from_half_units(g.n() as i64 - witness.deficiency);
    Ok(OracleReport {
        n: g.n(),
        alpha_f,
        agree: alpha_f == half_n_minus_def,
        witness,
        half_n_minus_def,
    })
}

fn oracle(input: &PathBuf, cap: usize) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let report = oracle_report(&g, cap)?;
    print_json(&report);
    Ok(if report.agree { 0 } else { 1 })
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    violations: Vec<String>,
    anomalies: Vec<String>,
    report: VerificationReport,
    lemma: LemmaCheck,
    equality: EqualityOutcome,
    berge_tutte: Option<OracleReport>,
}

fn verify(input: &PathBuf, tol: TolArgs, cap: usize, corrupt_alpha: bool) -> Result<u8, Failure> {
    let tol = tol.tolerances()?;
    let g = read_graph(input)?;
    let mut report = check_theorem_bound(&g, &tol)?;
    if corrupt_alpha {
        report.alpha_f = HalfInt::from_half_units(report.alpha_f.half_units() - 1);
        report.reevaluate(&tol);
    }

    let mut violations = Vec::new();
    let mut anomalies = Vec::new();
    if !report.bound_holds {
        violations.push(format!("bound: slack {} below -{}", report.slack, report.bound_tolerance));
    }
    if !report.certificate.is_valid_for(&g) || report.certificate.total() != report.alpha_f {
        violations.push("certificate does not witness alpha_f".into());
    }
    let lemma = LemmaCheck::from_report(&report, &tol);
    if !lemma.holds {
        violations.push(format!("lemma: lambda1 {} below threshold {}", lemma.lambda1, lemma.threshold));
    }
    let equality = EqualityCheck::from_report(&g, report.clone(), &tol);
    match &equality.outcome {
        EqualityOutcome::Violation { reason } => {
            violations.push(format!("equality: {reason}"))
        }
        EqualityOutcome::RegularCase { is_member: false } => {
            anomalies.push("equality at k* = 0 for a graph outside H(d, 0)".into())
        }
        _ => {}
    }
    let berge_tutte = if g.n() <= cap {
        let mut oracle = oracle_report(&g, cap)?;
        oracle.alpha_f = report.alpha_f;
        oracle.agree = oracle.alpha_f == oracle.half_n_minus_def;
        if !oracle.agree {
            violations.push(format!(
                "berge-tutte: alpha_f {} but (n - def)/2 = {}",
                oracle.alpha_f, oracle.half_n_minus_def
            ));
        }
        Some(oracle)
    } else {
        None
    };

    let passed = violations.is_empty();
    print_json(&VerifyOutput {
        passed,
        violations,
        anomalies,
        report,
        lemma,
        equality: equality.outcome,
        berge_tutte,
    });
    Ok(if passed { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { input, tol } => analyze(&input, tol),
        Command::Gen { family } => gen(&family),
        Command::Verify {
            input,
            tol,
            cap,
            corrupt_alpha,
        } => verify(&input, tol, cap, corrupt_alpha),
        Command::Fuzz {
            n_max,
            d_min,
            d_max,
            trials,
            seed,
            cap,
            tol,
        } => {
            let mut config = CampaignConfig::new(n_max, d_min, d_max, trials, seed);
            config.tolerances = tol.tolerances()?;
            config.brute_force_cap = cap;
            let summary = fuzz_campaign(&config)?;
            print_json(&summary);
            Ok(if summary.violations == 0 { 0 } else { 1 })
        }
        Command::Oracle { input, cap } => oracle(&input, cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0, real errors get 2
            e.print().ok();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

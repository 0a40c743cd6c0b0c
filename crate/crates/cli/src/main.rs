//! `smlab`: construct spin models, verify them, and reproduce invariant tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use smlab::cyclo::{gauss_sum, Cyclotomic};
use smlab::invariants::{
    check_hadamard_equivalence, compute_e, compute_mu, decomposability_obstructions, find_equivalence,
    invariants_agree, kind_for_op, psi_equivalence, r4_decomposition, render_table1, signature, small_u_equivalence,
    table1, R4Param,
};
use smlab::json::{matrix_from_json, matrix_to_csv_complex, matrix_to_json, ReportRecord};
use smlab::models::{hadamard, hadamard_transform, Family, HadamardOp, HadamardSource, ModelSpec};
use smlab::numtheory::gcd;
use smlab::verify::{check_type_ii, check_type_iii, compute_index, Mode};
use smlab::{Error, SpinMatrix};

const EXIT_FAIL: u8 = 1;
const EXIT_CONSTRUCT: u8 = 3;
const EXIT_MALFORMED: u8 = 4;
const EXIT_RUNTIME: u8 = 5;

#[derive(Parser)]
#[command(name = "smlab", version, about = "Exact construction and verification of spin models")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit one JSON object per line.
    #[arg(long, global = true)]
    jsonl: bool,
    /// Largest matrix size any command will touch.
    #[arg(long, global = true, default_value_t = 256)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and write it as JSON.
    Construct(ConstructArgs),
    /// Run type II, type III and index checks on a matrix file.
    Verify(VerifyArgs),
    /// Compute E(W), μ(W) and, where applicable, the decomposition obstructions.
    Invariants(InvariantsArgs),
    /// Check an explicit equivalence or compare two matrix files.
    Equiv(EquivArgs),
    /// Reproduce summary tables from computation.
    Report(ReportArgs),
    /// Convert a matrix file.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<u64>,
    /// sylvester:K, paley1:Q or file:PATH.
    #[arg(long)]
    hadamard: Option<String>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    a_exp: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b_exp: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    eta_exp: i64,
    /// Exponent of u in its root-of-unity order (r ≤ 4).
    #[arg(long, allow_negative_numbers = true)]
    u_exp: Option<i64>,
    /// Cyclic orders of the abelian group, e.g. 2,4.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    group_eta: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    group_chars: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    d_sign: i8,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    t0_sign: i8,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Type3 {
    Full,
    Block,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long)]
    type2: bool,
    /// Without a value: blockwise for labeled matrices, full otherwise.
    #[arg(long, num_args = 0..=1, require_equals = true)]
    type3: Option<Option<Type3>>,
    #[arg(long)]
    index: bool,
}

#[derive(Args)]
struct InvariantsArgs {
    file: PathBuf,
    #[arg(long)]
    obstructions: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EquivKindArg {
    Files,
    Hadamard,
    Psi,
    SmallU,
    R4,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long, value_enum, default_value = "files")]
    kind: EquivKindArg,
    /// Two matrix files for `files`.
    files: Vec<PathBuf>,
    /// Run the exhaustive search (n ≤ 8).
    #[arg(long)]
    search: bool,
    /// Hadamard move: negate-row:X, negate-col:Y, swap-rows:A,B, swap-cols:A,B.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    hadamard: Option<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    a_exp: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b_exp: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    eta_exp: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    u_exp: i64,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    table1: bool,
    #[arg(long)]
    gauss: bool,
    #[arg(long)]
    obstructions: bool,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    r: Vec<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    CsvComplex,
}

#[derive(Args)]
struct ExportArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A failure that maps to an exit code.
struct Exit(u8, String);

impl Exit {
    fn runtime(e: Error) -> Exit {
        match e {
            Error::Format(_) => Exit(EXIT_MALFORMED, e.to_string()),
            _ => Exit(EXIT_RUNTIME, e.to_string()),
        }
    }
}

type CmdResult = Result<bool, Exit>;

struct Out {
    jsonl: bool,
}

impl Out {
    fn emit<T: Serialize>(&self, v: &T) {
        let text = if self.jsonl { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) };
        print_text(&(text.expect("plain data serializes") + "\n"));
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
fn print_text(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = Out { jsonl: cli.jsonl };
    let res = match &cli.command {
        Command::Construct(a) => construct(a, cli.budget),
        Command::Verify(a) => verify(a, &out, cli.budget),
        Command::Invariants(a) => invariants(a, &out, cli.budget),
        Command::Equiv(a) => equiv(a, &out, cli.budget),
        Command::Report(a) => report(a, &out, cli.budget),
        Command::Export(a) => export(a, cli.budget),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn model_spec(a: &ModelArgs) -> Result<ModelSpec, Error> {
    let mut spec = ModelSpec::new(a.family.parse::<Family>()?);
    spec.m = a.m;
    spec.r = a.r;
    spec.hadamard = a.hadamard.as_deref().map(str::parse::<HadamardSource>).transpose()?;
    spec.a_exp = a.a_exp;
    spec.b_exp = a.b_exp;
    spec.eta_exp = a.eta_exp;
    spec.u_exp = a.u_exp;
    spec.group = a.group.clone();
    spec.group_eta = a.group_eta.clone();
    spec.group_chars = a.group_chars.clone();
    spec.d_sign = a.d_sign;
    spec.t0_sign = a.t0_sign;
    Ok(spec)
}

fn check_budget(n: usize, budget: usize) -> Result<(), Exit> {
    if n > budget {
        return Err(Exit::runtime(Error::BudgetExceeded { n, budget }));
    }
    Ok(())
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Exit> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Exit(EXIT_RUNTIME, format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Exit(EXIT_RUNTIME, e.to_string()))
        }
    }
}

fn construct(a: &ConstructArgs, budget: usize) -> CmdResult {
    let spec = model_spec(&a.model).map_err(|e| Exit(2, e.to_string()))?;
    check_budget(spec.size().map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?, budget)?;
    let w = spec.build().map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
    write_output(a.output.as_deref(), &(matrix_to_json(&w) + "\n"))?;
    Ok(true)
}

fn load(path: &Path, budget: usize) -> Result<SpinMatrix, Exit> {
    let text = fs::read_to_string(path).map_err(|e| Exit(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    let w = matrix_from_json(&text).map_err(|e| Exit(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    check_budget(w.n(), budget)?;
    Ok(w)
}

fn verify(a: &VerifyArgs, out: &Out, budget: usize) -> CmdResult {
    let w = load(&a.file, budget)?;
    let all = !a.type2 && a.type3.is_none() && !a.index;
    let mut ok = true;
    let mut emit = |r: smlab::verify::VerificationReport| {
        ok &= r.passed();
        out.emit(&ReportRecord::from_report(&r));
    };
    if a.type2 || all {
        emit(check_type_ii(&w));
    }
    if let Some(t) = a.type3.or(all.then_some(None)) {
        let mode = match t {
            Some(Type3::Full) => Mode::Full,
            Some(Type3::Block) => Mode::Blockwise,
            None if w.labels().is_some() => Mode::Blockwise,
            None => Mode::Full,
        };
        emit(check_type_iii(&w, mode).map_err(Exit::runtime)?);
    }
    if a.index || all {
        emit(compute_index(&w).map_err(Exit::runtime)?);
    }
    Ok(ok)
}

#[derive(Serialize)]
struct InvariantRecord {
    n: usize,
    #[serde(rename = "E")]
    e: Vec<String>,
    #[serde(rename = "E_numeric")]
    e_numeric: Vec<String>,
    mu: Option<u64>,
    mu_attained_by: Option<(usize, usize)>,
}

fn invariants(a: &InvariantsArgs, out: &Out, budget: usize) -> CmdResult {
    let w = load(&a.file, budget)?;
    let e = compute_e(&w);
    let mu = compute_mu(&w);
    out.emit(&InvariantRecord {
        n: w.n(),
        e: e.values.iter().map(|v| v.to_string()).collect(),
        e_numeric: e.numeric(128).into_iter().map(smlab::json::fmt_f64).collect(),
        mu: mu.value,
        mu_attained_by: mu.attained_by,
    });
    if a.obstructions {
        return obstruction_output(&w, out);
    }
    Ok(true)
}

#[derive(Serialize)]
struct NotApplicable {
    target: String,
    status: &'static str,
    reason: String,
}

fn obstruction_output(w: &SpinMatrix, out: &Out) -> CmdResult {
    match decomposability_obstructions(w) {
        Ok(rep) => {
            if out.jsonl {
                out.emit(&rep);
            } else {
                print_text(&rep.render());
            }
            Ok(rep.contradiction)
        }
        Err(Error::NotApplicable(reason)) => {
            out.emit(&NotApplicable { target: w.family().unwrap_or("?").into(), status: "not-applicable", reason });
            Ok(true)
        }
        Err(e) => Err(Exit::runtime(e)),
    }
}

fn parse_op(s: &str) -> Result<HadamardOp, Exit> {
    let bad = || Exit(2, format!("bad Hadamard move '{s}'"));
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    let nums: Vec<usize> = arg.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match (kind, nums.as_slice()) {
        ("negate-row", [x]) => Ok(HadamardOp::NegateRow(*x)),
        ("negate-col", [y]) => Ok(HadamardOp::NegateCol(*y)),
        ("swap-rows", [p, q]) => Ok(HadamardOp::SwapRows(*p, *q)),
        ("swap-cols", [p, q]) => Ok(HadamardOp::SwapCols(*p, *q)),
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct EquivRecord {
    kind: &'static str,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_difference: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, Exit> {
    v.ok_or_else(|| Exit(2, format!("--{name} is required")))
}

fn equiv(a: &EquivArgs, out: &Out, budget: usize) -> CmdResult {
    let rt = Exit::runtime;
    let rec = match a.kind {
        EquivKindArg::Files => {
            let [f1, f2] = a.files.as_slice() else {
                return Err(Exit(2, "files mode needs exactly two matrix files".into()));
            };
            let (w1, w2) = (load(f1, budget)?, load(f2, budget)?);
            let agree = invariants_agree(&w1, &w2).map_err(rt)?;
            let mut rec = EquivRecord {
                kind: "invariants",
                holds: agree,
                permutation: None,
                first_difference: None,
                detail: Some(format!(
                    "size {} / {}, μ {:?} / {:?}",
                    w1.n(),
                    w2.n(),
                    signature(&w1).map_err(rt)?.mu,
                    signature(&w2).map_err(rt)?.mu
                )),
            };
            if a.search && agree {
                let found = find_equivalence(&w1, &w2).map_err(rt)?;
                rec.kind = "search";
                rec.holds = found.is_some();
                if let Some((c, p)) = found {
                    rec.detail = Some(format!("c = i^{c}"));
                    rec.permutation = Some(p.images);
                }
            }
            rec
        }
        EquivKindArg::Hadamard => {
            let op = parse_op(a.op.as_deref().ok_or_else(|| Exit(2, "--op is required".into()))?)?;
            let m = need(a.m, "m")?;
            let src: HadamardSource = match (&a.hadamard, a.r) {
                (Some(s), _) => s.parse().map_err(|e: Error| Exit(2, e.to_string()))?,
                (None, Some(r)) => HadamardSource::default_for(r).map_err(|e| Exit(2, e.to_string()))?,
                _ => return Err(Exit(2, "--r or --hadamard is required".into())),
            };
            let family: Family = a.family.as_deref().unwrap_or("whua").parse().map_err(|e: Error| Exit(2, e.to_string()))?;
            let h1 = hadamard(&src).map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
            let h2 = hadamard_transform(&h1, &op).map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
            let build = |h: &SpinMatrix| -> Result<SpinMatrix, Error> {
                let ring = smlab::Ring::potts(h.n() as u64);
                match family {
                    Family::Wprime => smlab::models::build_symmetric_model(m, h, ring, a.eta_exp, a.b_exp),
                    _ => smlab::models::build_index_m_model(m, h, ring, a.a_exp),
                }
            };
            let w1 = build(&h1).map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
            let w2 = build(&h2).map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
            check_budget(w1.n(), budget)?;
            let c = check_hadamard_equivalence(&w1, &w2, &kind_for_op(&op, h1.n())).map_err(rt)?;
            EquivRecord {
                kind: "hadamard",
                holds: c.holds(),
                first_difference: c.first_difference,
                permutation: Some(c.permutation.images),
                detail: None,
            }
        }
        EquivKindArg::Psi => {
            let rep = psi_equivalence(need(a.m, "m")?, a.t, a.a_exp).map_err(rt)?;
            EquivRecord {
                kind: "psi",
                holds: rep.holds(),
                first_difference: rep.first_difference,
                detail: Some(format!("a′ = ζ^{} over 2m², bijective: {}", rep.a_prime_exp, rep.bijective)),
                permutation: Some(rep.psi),
            }
        }
        EquivKindArg::SmallU => {
            let rep = small_u_equivalence(need(a.m, "m")?, a.u_exp, a.a_exp).map_err(rt)?;
            EquivRecord {
                kind: "small-u",
                holds: rep.corrected && rep.via_cyclic && rep.negation != Some(false),
                permutation: None,
                first_difference: None,
                detail: Some(format!(
                    "u·W(1,au³) = W(u,a): {}; u³·W(1,au) = W(u,a): {}; negation: {:?}; both pull back from the cyclic model: {}",
                    rep.literal, rep.corrected, rep.negation, rep.via_cyclic
                )),
            }
        }
        EquivKindArg::R4 => {
            let param = match a.family.as_deref() {
                Some("wprime") | Some("symmetric") => R4Param::B { eta_exp: a.eta_exp, b_exp: a.b_exp },
                _ => R4Param::A { a_exp: a.a_exp },
            };
            let rep = r4_decomposition(need(a.m, "m")?, a.u_exp, param).map_err(rt)?;
            EquivRecord {
                kind: "r4",
                holds: rep.holds(),
                permutation: Some(rep.relabel.images.clone()),
                first_difference: None,
                detail: Some(format!(
                    "A_u = u³H: {}; W = W(1) ⊗ H: {}; (H ⊗ W(1))^P = W: {}",
                    rep.potts_is_u3h, rep.literal, rep.relabeled
                )),
            }
        }
    };
    let holds = rec.holds;
    out.emit(&rec);
    Ok(holds)
}

#[derive(Serialize)]
struct GaussRecord {
    m: usize,
    xi_exp: u64,
    sum: String,
    equals_m: bool,
}

fn report(a: &ReportArgs, out: &Out, budget: usize) -> CmdResult {
    if !(a.table1 || a.gauss || a.obstructions) {
        return Err(Exit(2, "choose one of --table1, --gauss, --obstructions".into()));
    }
    let mut ok = true;
    if a.table1 {
        let (ms, rs) = (a.m.clone(), a.r.clone());
        for &m in &ms {
            for &r in &rs {
                check_budget(m * m * r as usize, budget)?;
            }
        }
        let rows = table1(&ms, &rs).map_err(Exit::runtime)?;
        ok &= rows.iter().all(|r| r.matches);
        if out.jsonl {
            rows.iter().for_each(|r| out.emit(r));
        } else {
            print_text(&render_table1(&rows));
        }
    }
    if a.gauss {
        for &m in &a.m {
            let l = 2 * (m * m) as u64;
            check_budget(m * m, budget)?;
            for s in (1..l).filter(|&s| gcd(s, l) == 1) {
                let g = gauss_sum(m as u64, &Cyclotomic::root_of_unity(l, s as i64)).map_err(Exit::runtime)?;
                let equals_m = g == Cyclotomic::from_int(m as i64);
                ok &= equals_m;
                out.emit(&GaussRecord { m, xi_exp: s, sum: g.to_string(), equals_m });
            }
        }
    }
    if a.obstructions {
        for &m in &a.m {
            for &r in &a.r {
                check_budget(m * m * r as usize, budget)?;
                let mut spec = ModelSpec::new(Family::Whua);
                spec.m = Some(m);
                spec.r = Some(r);
                let w = spec.build().map_err(|e| Exit(EXIT_CONSTRUCT, e.to_string()))?;
                ok &= obstruction_output(&w, out)?;
            }
        }
    }
    Ok(ok)
}

fn export(a: &ExportArgs, budget: usize) -> CmdResult {
    let w = load(&a.file, budget)?;
    let text = match a.format {
        Format::Json => matrix_to_json(&w) + "\n",
        Format::CsvComplex => matrix_to_csv_complex(&w),
    };
    write_output(a.output.as_deref(), &text)?;
    Ok(true)
}

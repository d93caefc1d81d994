use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use commrank::corpus::{render_text, resolve_cases, run_cases, summarize, Analyses, Status, TheoremReport};
use commrank::engine::{compute_invariants, compute_invariants_generic, rho2_witness, DenseGroup, GroupSet};
use commrank::matgroup::{read_generators, Matrix};
use commrank::reducibility::{
    check_stabilizer_dichotomy, commutant, decompose_rank2_group, find_invariant_subspace, is_irreducible,
    DecompositionStatus, Subspace,
};
use commrank::{DenseMatrix, Error, MonomialMatrix, RootOrder};

const SCHEMA: &str = "report-v1";

#[derive(Parser)]
#[command(
    name = "commrank",
    version,
    about = "Commutator-rank invariants of finite monomial unitary groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Maximal number of group elements to enumerate
    #[arg(long, global = true, env = "MONO_CAP", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Worker threads for sweeps and pair scans
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build G(p, q, A) and report its invariants
    Gpqa {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Exponents of A as a comma-separated list
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u32>,
    },
    /// Burnside irreducibility test on a generator file
    Burnside {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Split a group with commutator ranks at most 2 as M + M^⊥
    Decompose {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Commutator-rank invariants of the generated group
    Invariants {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Stabilizer dichotomy for a subspace
    Stabilizer {
        #[arg(long)]
        gens: PathBuf,
        /// Subspace file: {"n": .., "dim": .., "basis": [[..], ..]}
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Run the statement verifiers
    VerifyPaper {
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 3)]
        p_max: u32,
        #[arg(long, default_value_t = 3)]
        q_max: u32,
    },
}

/// Outcome of a subcommand before rendering.
struct Outcome {
    command: &'static str,
    payload: Value,
    text: String,
    failed: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

fn read_file(path: &Path) -> commrank::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn load_generators(path: &Path) -> commrank::Result<Vec<Matrix>> {
    read_generators(&read_file(path)?)
}

fn common_order(gens: &[Matrix]) -> commrank::Result<RootOrder> {
    gens.iter().try_fold(RootOrder::ONE, |acc, g| acc.lcm(g.order()))
}

fn dense_generators(gens: &[Matrix]) -> commrank::Result<Vec<DenseMatrix>> {
    let order = common_order(gens)?;
    gens.iter().map(|g| g.to_dense().lift(order)).collect()
}

/// Monomial forms lifted to a common order, when every generator is monomial.
fn monomial_generators(gens: &[Matrix]) -> commrank::Result<Option<Vec<MonomialMatrix>>> {
    let Some(mons) = gens.iter().map(Matrix::to_monomial).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let order = mons.iter().try_fold(RootOrder::ONE, |acc, m| acc.lcm(m.order()))?;
    Ok(Some(
        mons.iter().map(|m| m.lift(order)).collect::<commrank::Result<_>>()?,
    ))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn exps_list(elems: &[MonomialMatrix]) -> Value {
    json!(elems.iter().map(|m| m.exps().to_vec()).collect::<Vec<_>>())
}

/// Element lists are printed only for groups at most this large.
const LIST_LIMIT: usize = 256;

fn cmd_gpqa(p: u32, q: u32, a: &[u32], cap: usize) -> commrank::Result<Outcome> {
    let memo = Analyses::new(cap);
    let an = memo.get(p, q, a)?.map_err(|cap| Error::CapExceeded { cap })?;
    let inv = &an.invariants;
    let rho2 = if an.rho() == 2 && p >= 3 {
        Some(rho2_witness(&an.group)?)
    } else {
        None
    };
    let list = |elems: &[MonomialMatrix]| {
        if elems.len() <= LIST_LIMIT {
            exps_list(elems)
        } else {
            Value::Null
        }
    };
    let payload = json!({
        "p": p,
        "q": q,
        "a": a,
        "order": inv.order,
        "rho": inv.rho,
        "r": inv.r,
        "abelian": inv.abelian,
        "diagonal_order": an.diagonal.len(),
        "commutator_order": an.commutator.len(),
        "diagonal": list(&an.diagonal),
        "commutator": list(&an.commutator),
        "irreducible": an.irreducible,
        "commutant_dim": an.commutant_dim,
        "rho_witness": inv.rho_witness,
        "r_witness": inv.r_witness,
        "rank_histogram": inv.rank_histogram,
        "rho2_witness": rho2,
    });
    let mut text = format!(
        "G({p},{q},{a:?})\norder: {}\nrho: {}\nr: {}\n|D|: {}\n|C|: {}\nirreducible: {}\n",
        inv.order,
        an.rho(),
        inv.r,
        an.diagonal.len(),
        an.commutator.len(),
        an.irreducible
    );
    if let Some((x, y)) = &inv.r_witness {
        text += &format!("r witness: X = {}, Y = {}\n", to_value(x), to_value(y));
    }
    if let Some(d) = &inv.rho_witness {
        text += &format!("rho witness: {}\n", to_value(d));
    }
    if an.diagonal.len() <= LIST_LIMIT {
        text += &format!(
            "D exponents: {:?}\n",
            an.diagonal.iter().map(|m| m.exps()).collect::<Vec<_>>()
        );
        text += &format!(
            "C exponents: {:?}\n",
            an.commutator.iter().map(|m| m.exps()).collect::<Vec<_>>()
        );
    }
    Ok(Outcome {
        command: "gpqa",
        payload,
        text,
        failed: false,
    })
}

fn cmd_burnside(path: &Path) -> commrank::Result<Outcome> {
    let gens = dense_generators(&load_generators(path)?)?;
    let irreducible = is_irreducible(&gens)?;
    let commutant_dim = commutant(&gens)?.dim;
    let unitary = gens.iter().all(DenseMatrix::is_unitary);
    let subspace = if irreducible {
        None
    } else {
        Some(find_invariant_subspace(&gens, unitary)?)
    };
    let consistent = irreducible == (commutant_dim == 1) || !unitary;
    let payload = json!({
        "irreducible": irreducible,
        "commutant_dim": commutant_dim,
        "unitary": unitary,
        "invariant_subspace": subspace,
    });
    let mut text = format!("irreducible: {irreducible}\ncommutant dimension: {commutant_dim}\n");
    if let Some(s) = &subspace {
        text += &format!("invariant subspace: {}\n", to_value(s));
    }
    Ok(Outcome {
        command: "burnside",
        payload,
        text,
        failed: !consistent,
    })
}

fn cmd_decompose(path: &Path, cap: usize) -> commrank::Result<Outcome> {
    let gens = dense_generators(&load_generators(path)?)?;
    let g = DenseGroup::closure(&gens, cap)?;
    let rep = decompose_rank2_group(&g)?;
    let failed = rep.status != DecompositionStatus::Verified;
    let mut text = format!(
        "status: {}\norder: {}\nr: {}\ndim M: {}\nblock diagonal: {}\nabelian on M^⊥: {}\n",
        to_value(&rep.status).as_str().unwrap_or_default(),
        g.order(),
        rep.max_commutator_rank,
        rep.dim,
        rep.blocks_verified,
        rep.complement_abelian
    );
    text += &format!("M basis: {}\n", to_value(&rep.m.basis()));
    if let Some(v) = &rep.violation {
        text += &format!("violation: {v}\n");
    }
    Ok(Outcome {
        command: "decompose",
        payload: to_value(&rep),
        text,
        failed,
    })
}

fn cmd_invariants(path: &Path, cap: usize) -> commrank::Result<Outcome> {
    let gens = load_generators(path)?;
    let (payload, order, rho, r, abelian) = match monomial_generators(&gens)? {
        Some(mons) => {
            let inv = compute_invariants(&GroupSet::closure(&mons, cap)?);
            (to_value(&inv), inv.order, inv.rho, inv.r, inv.abelian)
        }
        None => {
            let inv = compute_invariants_generic(&DenseGroup::closure(&dense_generators(&gens)?, cap)?);
            (to_value(&inv), inv.order, inv.rho, inv.r, inv.abelian)
        }
    };
    let rho = rho.map_or("none".to_string(), |x| x.to_string());
    let text = format!("order: {order}\nrho: {rho}\nr: {r}\nabelian: {abelian}\n");
    Ok(Outcome {
        command: "invariants",
        payload,
        text,
        failed: false,
    })
}

fn cmd_stabilizer(gens: &Path, subspace: &Path, cap: usize) -> commrank::Result<Outcome> {
    let gens = dense_generators(&load_generators(gens)?)?;
    let m: Subspace = serde_json::from_str(&read_file(subspace)?).map_err(|e| Error::input(e.to_string()))?;
    let n = gens[0].rows();
    if m.ambient() != n {
        return Err(Error::input(format!(
            "subspace lives in dimension {}, generators in {n}",
            m.ambient()
        )));
    }
    let order = m.order().lcm(gens[0].order())?;
    let gens: Vec<DenseMatrix> = gens.iter().map(|g| g.lift(order)).collect::<commrank::Result<_>>()?;
    let g = DenseGroup::closure(&gens, cap)?;
    let rep = check_stabilizer_dichotomy(&g, &m.lift(order)?, cap)?;
    let text = format!(
        "stabilizer order: {}\nabelian on M: {}\nabelian on M^⊥: {}\nholds: {}\n",
        rep.stabilizer_order, rep.on_subspace_abelian, rep.on_complement_abelian, rep.holds
    );
    Ok(Outcome {
        command: "stabilizer",
        payload: to_value(&rep),
        text,
        failed: !rep.holds,
    })
}

fn cmd_verify_paper(case: &str, p_max: u32, q_max: u32, cap: usize) -> commrank::Result<Outcome> {
    let cases = resolve_cases(case)?;
    let reports: Vec<TheoremReport> = run_cases(&cases, p_max, q_max, cap)?;
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let payload = json!({
        "cases": cases,
        "p_max": p_max,
        "q_max": q_max,
        "cap": cap,
        "summary": summarize(&reports),
        "reports": reports,
    });
    Ok(Outcome {
        command: "verify-paper",
        payload,
        text: render_text(&reports),
        failed,
    })
}

fn run(cli: &Cli) -> commrank::Result<Outcome> {
    let cap = cli.common.cap as usize;
    match &cli.command {
        Command::Gpqa { p, q, a } => cmd_gpqa(*p, *q, a, cap),
        Command::Burnside { gens } => cmd_burnside(gens),
        Command::Decompose { gens } => cmd_decompose(gens, cap),
        Command::Invariants { gens } => cmd_invariants(gens, cap),
        Command::Stabilizer { gens, subspace } => cmd_stabilizer(gens, subspace, cap),
        Command::VerifyPaper { case, p_max, q_max } => cmd_verify_paper(case, *p_max, *q_max, cap),
    }
}

fn emit(common: &Common, body: &str) -> Result<(), String> {
    match &common.out {
        Some(path) => fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads as usize)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.common.format {
        Format::Text => outcome.text,
        Format::Json => {
            let envelope = json!({
                "schema": SCHEMA,
                "command": outcome.command,
                "payload": outcome.payload,
                "meta": {
                    "runtime_ms": start.elapsed().as_millis() as u64,
                    "threads": cli.common.threads,
                },
            });
            serde_json::to_string_pretty(&envelope).expect("json values serialize") + "\n"
        }
    };
    if let Err(e) = emit(&cli.common, &body) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

//! `conj-forge`: group arithmetic, conjugacy queries and seeded bound
//! audits for the lamplighter, Baumslag-Solitar and `Z^n x| Z^k` families.
//!
//! All results are JSON on stdout; human summaries go to stderr.  Exit
//! codes: 0 success, 1 oracle disagreement or audit violation, 2 parse
//! error, 3 domain error, 4 unwritable output path.

use clap::{Args, Parser, Subcommand, ValueEnum};
use conj_core::exactnum::{LaurentPoly, QFraction};
use conj_core::lamplighter::{self, dl, LLElement, LamplighterGroup};
use conj_core::oracle;
use conj_core::polycyclic::{PCElement, PCGroupSpec};
use conj_core::{audit, bs, bs::BSElement, bs::BsGroup, Error};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "conj-forge",
    version,
    about = "exact conjugacy toolbox for three solvable families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate group arithmetic and metrics.
    Eval {
        #[command(subcommand)]
        op: EvalOp,
    },
    /// Decide conjugacy and construct a verified witness.
    Conj {
        #[command(flatten)]
        sel: GroupSel,
        /// First element (`n;f` for ll/bs, JSON for pc).
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        /// Second element.
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        /// Cross-check the verdict against the brute-force BFS oracle.
        #[arg(long)]
        oracle: bool,
        /// BFS radius for --oracle (default: the asserted bound for ll,
        /// 8 for bs, 6 for pc).
        #[arg(long)]
        oracle_radius: Option<u32>,
    },
    /// Seeded randomized audit of the conjugator-length bounds.
    Audit {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Length budget for sampled elements.
        #[arg(long, default_value_t = 8)]
        max_len: u64,
        /// Report file path (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
        /// Worker threads (the report bytes do not depend on this).
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Subcommand)]
enum EvalOp {
    /// Multiply two elements.
    Mul {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Invert an element.
    Inv {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Exact word length (lamplighter only).
    Len {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Lamp configuration, `coeff@exp` terms (empty for none).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        f: String,
    },
    /// Length bounds / estimates.
    Bounds {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Diestel-Leader distance between the basepoint orbits of two
    /// lamplighter elements.
    DlDist {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Word length by breadth-first search (the oracle, any family).
    OracleLen {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        radius: Option<u32>,
    },
}

#[derive(Args)]
struct GroupSel {
    /// Group family.
    #[arg(long, value_enum)]
    group: Family,
    /// Modulus / base for ll and bs.
    #[arg(long)]
    q: Option<u64>,
    /// Spec file for pc (JSON: {"n":..,"k":..,"generators":[..]}).
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Ll,
    Bs,
    Pc,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Io(_) => 4,
        Error::BoundViolation(_) => 1,
        _ => 3,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn mem_limit() -> u64 {
    std::env::var("CONJ_FORGE_MEM_LIMIT")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(oracle::DEFAULT_MEM_LIMIT)
}

enum GroupCtx {
    Ll(u64),
    Bs(u64),
    Pc(Box<PCGroupSpec>),
}

impl GroupSel {
    fn resolve(&self) -> Result<GroupCtx, Error> {
        match self.group {
            Family::Ll => Ok(GroupCtx::Ll(self.q.unwrap_or(2))),
            Family::Bs => Ok(GroupCtx::Bs(self.q.unwrap_or(2))),
            Family::Pc => {
                let path = self.spec.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("--spec FILE is required for --group pc".into())
                })?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("reading {path}: {e}")))?;
                Ok(GroupCtx::Pc(Box::new(PCGroupSpec::from_json_str(&text)?)))
            }
        }
    }
}

fn parse_ll(s: &str, q: u64) -> Result<LLElement, Error> {
    let (n, f) = split_elem(s)?;
    LLElement::new(q, n, LaurentPoly::parse(f, q)?)
}

fn parse_bs(s: &str, q: u64) -> Result<BSElement, Error> {
    let (n, f) = split_elem(s)?;
    BSElement::new(q, n, QFraction::parse(f, q)?)
}

fn split_elem(s: &str) -> Result<(i64, &str), Error> {
    let (n, f) = s.split_once(';').ok_or_else(|| Error::Parse {
        grammar: "element: `n;f`",
        message: format!("`{s}` lacks `;`"),
    })?;
    let n: i64 = n.trim().parse().map_err(|e| Error::Parse {
        grammar: "element: `n;f`",
        message: format!("bad shift `{n}`: {e}"),
    })?;
    Ok((n, f.trim()))
}

fn parse_pc(s: &str, spec: &PCGroupSpec) -> Result<PCElement, Error> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse {
        grammar: "polycyclic element json: {\"a\":[..],\"b\":[..]}",
        message: e.to_string(),
    })?;
    let e = PCElement::from_json(&v)?;
    if e.a.len() != spec.dim_n() || e.b.len() != spec.dim_k() {
        return Err(Error::DimensionMismatch(
            "element does not match the spec dimensions".into(),
        ));
    }
    Ok(e)
}

fn ll_out(g: &LLElement) -> serde_json::Value {
    json!({"n": g.shift(), "f": g.lamps().to_string()})
}

fn bs_out(g: &BSElement) -> serde_json::Value {
    json!({"n": g.shift(), "f": g.translation().to_string()})
}

fn emit(v: serde_json::Value) {
    println!("{v}");
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Eval { op } => run_eval(op),
        Cmd::Conj {
            sel,
            lhs,
            rhs,
            oracle: check,
            oracle_radius,
        } => run_conj(&sel, &lhs, &rhs, check, oracle_radius),
        Cmd::Audit {
            sel,
            samples,
            seed,
            max_len,
            out,
            threads,
        } => run_audit(&sel, samples, seed, max_len, out.as_deref(), threads),
    }
}

fn run_eval(op: EvalOp) -> Result<i32, Error> {
    match op {
        EvalOp::Mul { sel, lhs, rhs } => match sel.resolve()? {
            GroupCtx::Ll(q) => {
                let g = parse_ll(&lhs, q)?.mul(&parse_ll(&rhs, q)?)?;
                emit(ll_out(&g));
            }
            GroupCtx::Bs(q) => {
                let g = parse_bs(&lhs, q)?.mul(&parse_bs(&rhs, q)?)?;
                emit(bs_out(&g));
            }
            GroupCtx::Pc(spec) => {
                let g = spec.mul(&parse_pc(&lhs, &spec)?, &parse_pc(&rhs, &spec)?)?;
                emit(g.to_json());
            }
        },
        EvalOp::Inv { sel, elem } => match sel.resolve()? {
            GroupCtx::Ll(q) => emit(ll_out(&parse_ll(&elem, q)?.inv())),
            GroupCtx::Bs(q) => emit(bs_out(&parse_bs(&elem, q)?.inv())),
            GroupCtx::Pc(spec) => emit(spec.inv(&parse_pc(&elem, &spec)?)?.to_json()),
        },
        EvalOp::Len { sel, n, f } => match sel.resolve()? {
            GroupCtx::Ll(q) => {
                let g = LLElement::new(q, n, LaurentPoly::parse(&f, q)?)?;
                emit(json!({"length": g.word_length()}));
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "exact word length is only available for --group ll; use `bounds`".into(),
                ))
            }
        },
        EvalOp::Bounds { sel, elem } => match sel.resolve()? {
            GroupCtx::Ll(q) => {
                let g = parse_ll(&elem, q)?;
                let b = lamplighter::length_bounds(&g);
                emit(json!({
                    "lower_shift": b.lower_shift,
                    "lower_support": b.lower_support,
                    "upper": b.upper,
                    "exact": b.exact,
                }));
            }
            GroupCtx::Bs(q) => {
                let g = parse_bs(&elem, q)?;
                let b = bs::length_bounds(&g);
                emit(json!({"lower": b.lower, "upper": b.upper, "exact": b.exact}));
            }
            GroupCtx::Pc(spec) => {
                let g = parse_pc(&elem, &spec)?;
                emit(json!({"length_est": spec.length_est(&g)}));
            }
        },
        EvalOp::DlDist { q, lhs, rhs } => {
            let base = dl::DLPoint::basepoint(q);
            let p1 = dl::action(&parse_ll(&lhs, q)?, &base)?;
            let p2 = dl::action(&parse_ll(&rhs, q)?, &base)?;
            emit(json!({"distance": dl::distance(&p1, &p2)?}));
        }
        EvalOp::OracleLen { sel, elem, radius } => match sel.resolve()? {
            GroupCtx::Ll(q) => {
                let g = parse_ll(&elem, q)?;
                let group = LamplighterGroup { q };
                let gens = oracle::lamplighter_gens(q);
                let r = radius.unwrap_or(6);
                let len = oracle::bfs_word_length(&group, &gens, &g, r, mem_limit())?;
                emit(json!({"length": len}));
            }
            GroupCtx::Bs(q) => {
                let g = parse_bs(&elem, q)?;
                let group = BsGroup { q };
                let gens = oracle::bs_gens(q);
                let r = radius.unwrap_or(8);
                let len = oracle::bfs_word_length(&group, &gens, &g, r, mem_limit())?;
                emit(json!({"length": len}));
            }
            GroupCtx::Pc(spec) => {
                let g = parse_pc(&elem, &spec)?;
                let gens = oracle::pc_gens(&spec);
                let r = radius.unwrap_or(6);
                let len = oracle::bfs_word_length(spec.as_ref(), &gens, &g, r, mem_limit())?;
                emit(json!({"length": len}));
            }
        },
    }
    Ok(0)
}

fn run_conj(
    sel: &GroupSel,
    lhs: &str,
    rhs: &str,
    check: bool,
    oracle_radius: Option<u32>,
) -> Result<i32, Error> {
    let limit = mem_limit();
    match sel.resolve()? {
        GroupCtx::Ll(q) => {
            let u = parse_ll(lhs, q)?;
            let v = parse_ll(rhs, q)?;
            let out = lamplighter::conjugacy(&u, &v)?;
            let bound = lamplighter::CONJUGATOR_BOUND_CONSTANT
                * ((u.word_length() + v.word_length()) as f64);
            let mut doc = conj_doc(
                out.conjugate,
                out.witness.as_ref().map(ll_out),
                &out.lengths,
                Some(bound),
                &out.certificate,
            );
            let mut code = 0;
            if check {
                let group = LamplighterGroup { q };
                let gens = oracle::lamplighter_gens(q);
                let radius = oracle_radius.unwrap_or(bound.ceil() as u32);
                let found = oracle::brute_conjugator(&group, &gens, &u, &v, radius, limit)?;
                // The linear bound makes the default radius complete, so a
                // verdict difference is a bug.
                let agrees = found.is_some() == out.conjugate;
                doc["oracle"] = json!({
                    "found": found.is_some(),
                    "radius": radius,
                    "complete": oracle_radius.is_none(),
                    "agrees": agrees,
                });
                if !agrees {
                    code = 1;
                }
            }
            emit(doc);
            Ok(code)
        }
        GroupCtx::Bs(q) => {
            let u = parse_bs(lhs, q)?;
            let v = parse_bs(rhs, q)?;
            let out = bs::conjugacy(&u, &v)?;
            let bound = out
                .lengths
                .bound_constant
                .map(|c| c * (out.lengths.u_len + out.lengths.v_len));
            let mut doc = conj_doc(
                out.conjugate,
                out.witness.as_ref().map(bs_out),
                &out.lengths,
                bound,
                &out.certificate,
            );
            let mut code = 0;
            if check {
                let group = BsGroup { q };
                let gens = oracle::bs_gens(q);
                let radius = oracle_radius.unwrap_or(8);
                let found = oracle::brute_conjugator(&group, &gens, &u, &v, radius, limit)?;
                // BFS here is a semi-decision: only a witness found against
                // a negative verdict is a definite disagreement.
                let agrees = !(found.is_some() && !out.conjugate);
                doc["oracle"] = json!({
                    "found": found.is_some(),
                    "radius": radius,
                    "complete": false,
                    "agrees": agrees,
                });
                if !agrees {
                    code = 1;
                }
            }
            emit(doc);
            Ok(code)
        }
        GroupCtx::Pc(spec) => {
            let u = parse_pc(lhs, &spec)?;
            let w = parse_pc(rhs, &spec)?;
            let out = spec.conjugacy(&u, &w)?;
            let mut doc = conj_doc(
                out.conjugate,
                out.witness.as_ref().map(|g| g.to_json()),
                &out.lengths,
                None,
                &out.certificate,
            );
            let mut code = 0;
            if check {
                let gens = oracle::pc_gens(&spec);
                let radius = oracle_radius.unwrap_or(6);
                let found = oracle::brute_conjugator(spec.as_ref(), &gens, &u, &w, radius, limit)?;
                let agrees = !(found.is_some() && !out.conjugate);
                doc["oracle"] = json!({
                    "found": found.is_some(),
                    "radius": radius,
                    "complete": false,
                    "agrees": agrees,
                });
                if !agrees {
                    code = 1;
                }
            }
            emit(doc);
            Ok(code)
        }
    }
}

fn conj_doc(
    conjugate: bool,
    witness: Option<serde_json::Value>,
    lengths: &conj_core::outcome::LengthStats,
    bound: Option<f64>,
    certificate: &conj_core::outcome::Certificate,
) -> serde_json::Value {
    json!({
        "conjugate": conjugate,
        "witness": witness,
        "witness_length": lengths.witness_len,
        "u_length": lengths.u_len,
        "v_length": lengths.v_len,
        "bound": bound,
        "within_bound": bound
            .and_then(|b| lengths.witness_len.map(|w| w <= b + 1e-9)),
        "certificate": serde_json::to_value(certificate).expect("serializable"),
    })
}

fn run_audit(
    sel: &GroupSel,
    samples: u64,
    seed: u64,
    max_len: u64,
    out_path: Option<&str>,
    threads: usize,
) -> Result<i32, Error> {
    let group = match sel.resolve()? {
        GroupCtx::Ll(q) => audit::AuditGroup::Lamplighter { q },
        GroupCtx::Bs(q) => audit::AuditGroup::Bs { q },
        GroupCtx::Pc(spec) => audit::AuditGroup::Polycyclic { spec: *spec },
    };
    let cfg = audit::AuditConfig {
        samples,
        seed,
        max_len,
        threads,
    };
    let report = audit::run(&group, &cfg)?;
    let text = report.to_json_string();
    if let Some(path) = out_path {
        std::fs::write(path, &text).map_err(|e| Error::Io(format!("writing {path}: {e}")))?;
        eprintln!(
            "audit: {} samples, seed {}, max ratio {:.4}, violations {} -> {}",
            report.samples, report.seed, report.aggregate.max_ratio, report.violations, path
        );
    } else {
        println!("{text}");
        eprintln!(
            "audit: {} samples, seed {}, max ratio {:.4}, violations {}",
            report.samples, report.seed, report.aggregate.max_ratio, report.violations
        );
    }
    Ok(if report.violations > 0 { 1 } else { 0 })
}

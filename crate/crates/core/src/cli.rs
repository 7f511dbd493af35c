//! Command-line dispatch. Exit codes: 0 success, 1 a checked property failed
//! (or a computation could not finish), 2 usage or input error.
//!
//! Arguments taking a space, family, vector or sequence accept a file path,
//! inline JSON, or a preset name.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::asymptotics::{definitional_lower, submult_audit, theta_n_estimate};
use crate::budget::{random_vector, Budget};
use crate::domination::{delta_star_estimate, triangle_holds, tsistar_check};
use crate::error::Error;
use crate::norms::{
    brute_norm_p, decay_pairs, norm_certificate, norm_p, regularize, restriction_max, theta_sup_bounds,
    verify_certificate, NormCertificate, SpaceSpec,
};
use crate::operator::{build_y, operator_ratios, theta3_min_ratio, BlockSeq};
use crate::rational::{fmt_q, parse_q, show, Q};
use crate::schreier::{
    cb_explicit, cb_symbolic, family_mass, is_admissible, maximal_sets, member, tree_decompose, AdmTree,
    FamilyDescriptor, FamilyFile, FinSet,
};
use crate::specialvec::{est_basis_vector, flatten, repeated_averages};
use crate::suite;
use crate::vector::C00Vector;
use crate::xd::{build_d, claim_scan, norm_d_bounds, norm_d_lower, DSet, DSpaceParams, DEFAULT_CAP};

#[derive(Parser, Debug)]
#[command(name = "tsirelson", version, about = "Schreier families and mixed Tsirelson norms, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schreier family queries.
    Schreier {
        #[command(subcommand)]
        op: SchreierOp,
    },
    /// Norm evaluation, certificates and space utilities.
    Norm {
        #[command(subcommand)]
        op: NormOp,
    },
    /// Repeated averages and special vectors.
    Scc {
        #[command(subcommand)]
        op: SccOp,
    },
    /// Lower asymptotic constants.
    Theta {
        #[command(subcommand)]
        op: ThetaOp,
    },
    /// Domination quantities.
    Dom {
        #[command(subcommand)]
        op: DomOp,
    },
    /// Block sequences and operator ratios.
    Op {
        #[command(subcommand)]
        op: OpOp,
    },
    /// The sigma-coded norming set.
    Xd {
        #[command(subcommand)]
        op: XdOp,
    },
    /// Runs the acceptance criteria and prints a CSV summary.
    Suite {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// `schreier:K`, `omega`, `s1of:K`, or family JSON.
    #[arg(long, default_value = "schreier:1")]
    family: String,
}

#[derive(Subcommand, Debug)]
enum SchreierOp {
    /// Membership of a set, e.g. `--set [2,5]`.
    Member {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        set: String,
    },
    /// Admissibility of a list of sets.
    Admissible {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        sets: String,
    },
    /// Maximal members inside `[lo, hi]`.
    Maximal {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        lo: usize,
        #[arg(long)]
        hi: usize,
    },
    /// Largest coefficient sum over a member.
    Mass {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        vec: String,
    },
    /// Cantor-Bendixson index.
    Cb {
        #[command(flatten)]
        family: FamilyArg,
    },
    /// Tree decomposition of an `S_M`-admissible list.
    Tree {
        #[arg(long)]
        sets: String,
        #[arg(long = "M")]
        m: usize,
    },
}

#[derive(Args, Debug)]
struct SpaceVec {
    /// Space file, JSON, or `tsirelson`, `mixed:K[:p]`, `lp:p`.
    #[arg(long, default_value = "tsirelson")]
    space: String,
    /// A vector, or a JSON array of vectors for a CSV table.
    #[arg(long)]
    vec: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum NormOp {
    Eval {
        #[command(flatten)]
        io: SpaceVec,
    },
    Cert {
        #[command(flatten)]
        io: SpaceVec,
    },
    Verify {
        #[command(flatten)]
        io: SpaceVec,
        #[arg(long)]
        cert: String,
    },
    Brute {
        #[command(flatten)]
        io: SpaceVec,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    Rmax {
        #[command(flatten)]
        io: SpaceVec,
        #[command(flatten)]
        family: FamilyArg,
    },
    Regularize {
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long)]
        out: Option<String>,
    },
    ThetaSup {
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long, default_value = "1/1000000")]
        tol: String,
    },
}

#[derive(Subcommand, Debug)]
enum SccOp {
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        out: Option<String>,
    },
    Estbasis {
        #[arg(long, default_value = "mixed:4")]
        space: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        start: usize,
    },
    Flatten {
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long, default_value_t = 1)]
        beta: usize,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value = "seed=0,max=2000,support=64")]
        budget: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaOp {
    Estimate {
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value = "seed=0,max=500")]
        budget: String,
    },
    /// Checks `{"n": "upper", ...}` against products of the definitional lower bounds.
    Audit {
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long)]
        estimates: String,
    },
}

#[derive(Subcommand, Debug)]
enum DomOp {
    Delta {
        #[arg(long = "spaceX", alias = "space-x")]
        space_x: String,
        #[arg(long = "spaceY", alias = "space-y")]
        space_y: String,
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value = "seed=0,max=500")]
        budget: String,
    },
    Triangle {
        #[arg(long)]
        vec: String,
        #[arg(long = "spaceX", alias = "space-x")]
        space_x: String,
        #[arg(long = "spaceY", alias = "space-y")]
        space_y: String,
        /// JSON list of `[n, family]`; defaults to `(n, S_n)` for `n = 1..=3`.
        #[arg(long)]
        families: Option<String>,
    },
    Tsistar {
        /// JSON pairs, or `decay:K` for `theta_l = 2^-l / (l+1)`.
        #[arg(long, default_value = "decay:6")]
        pairs: String,
        #[arg(long, default_value = "1/2")]
        theta: String,
        #[arg(long)]
        n: usize,
        /// A JSON array of vectors, or a count of seeded random vectors.
        #[arg(long, default_value = "100")]
        samples: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum OpOp {
    Theta3 {
        #[arg(long)]
        seq: String,
        #[arg(long = "M", default_value_t = 1)]
        m: usize,
        #[arg(long, default_value = "1/2")]
        theta: String,
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long, default_value = "seed=0,max=500")]
        budget: String,
    },
    BuildY {
        /// JSON array of sequences (arrays of vectors).
        #[arg(long)]
        families: String,
        #[arg(long = "J")]
        j: String,
        #[arg(long, default_value = "tsirelson")]
        space: String,
        #[arg(long)]
        out: Option<String>,
    },
    Ratios {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        probes: String,
        #[arg(long = "spaceX", alias = "space-x", default_value = "mixed:4")]
        space_x: String,
        #[arg(long = "spaceY", alias = "space-y", default_value = "tsirelson")]
        space_y: String,
    },
}

#[derive(Subcommand, Debug)]
enum XdOp {
    Build {
        /// Params file, JSON, or `preset`, `no-growth`.
        #[arg(long, default_value = "preset")]
        params: String,
        #[arg(long, default_value_t = 4)]
        support: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<String>,
    },
    Eval {
        #[arg(long)]
        vec: String,
        /// A functional set written by `xd build`; without it the bound is computed directly.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, default_value = "preset")]
        params: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    Claim {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "preset")]
        params: String,
        #[arg(long, default_value_t = 10)]
        support: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value = "seed=7,max=5000")]
        budget: String,
        #[arg(long)]
        out: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidSpace(_)
            | Error::LengthMismatch(..)
            | Error::EmptyVector
            | Error::EmptyPiece
            | Error::NotHereditary
            | Error::DegenerateTheta => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Violation(other.to_string()),
        }
    }
}

type Run = std::result::Result<bool, Failure>;

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Violation(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Run {
    match command {
        Command::Schreier { op } => schreier(op, out),
        Command::Norm { op } => norm(op, out),
        Command::Scc { op } => scc(op, out),
        Command::Theta { op } => theta(op, out),
        Command::Dom { op } => dom(op, out),
        Command::Op { op } => operator(op, out),
        Command::Xd { op } => xd(op, out),
        Command::Suite { only, out: path } => run_suite(only, path, out),
    }
}

macro_rules! say {
    ($out:expr, $($t:tt)*) => {
        writeln!($out, $($t)*).map_err(|e| Failure::Violation(e.to_string()))?
    };
}

fn text_or_file(arg: &str) -> std::result::Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read `{arg}`: {e}")))
}

fn load<T: DeserializeOwned>(arg: &str) -> std::result::Result<T, Failure> {
    let text = text_or_file(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad JSON in `{arg}`: {e}")))
}

fn save<T: Serialize>(path: &Option<String>, value: &T) -> std::result::Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Violation(e.to_string()))?;
        fs::write(p, text + "\n").map_err(|e| Failure::Usage(format!("cannot write `{p}`: {e}")))?;
    }
    Ok(())
}

fn number<T: std::str::FromStr>(s: &str) -> std::result::Result<T, Failure> {
    s.parse().map_err(|_| Failure::Usage(format!("`{s}` is not a number")))
}

fn rational(s: &str) -> std::result::Result<Q, Failure> {
    Ok(parse_q(s)?)
}

fn budget(s: &str) -> std::result::Result<Budget, Failure> {
    Ok(s.parse::<Budget>()?)
}

fn space(arg: &str) -> std::result::Result<SpaceSpec, Failure> {
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        ["tsirelson"] => Ok(SpaceSpec::tsirelson(Q::new(1.into(), 2.into()))),
        ["mixed", k] => Ok(SpaceSpec::mixed_decay(1, number(k)?)),
        ["mixed", k, p] => Ok(SpaceSpec::mixed_decay(number(p)?, number(k)?)),
        ["lp", p] => Ok(SpaceSpec::single(number(p)?, 1, Q::from_integer(1.into()))?),
        _ => load(arg),
    }
}

fn family(arg: &str) -> std::result::Result<FamilyDescriptor, Failure> {
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        ["schreier", k] => Ok(FamilyDescriptor::Schreier(number(k)?)),
        ["omega"] => Ok(FamilyDescriptor::SchreierOmega),
        ["s1of", k] => Ok(FamilyDescriptor::s1of(FamilyDescriptor::Schreier(number(k)?))),
        _ => {
            let text = text_or_file(arg)?;
            if let Ok(f) = serde_json::from_str::<FamilyFile>(&text) {
                return Ok(f.family);
            }
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad family `{arg}`: {e}")))
        }
    }
}

fn params(arg: &str) -> std::result::Result<DSpaceParams, Failure> {
    match arg {
        "preset" => Ok(DSpaceParams::preset()),
        "no-growth" => Ok(DSpaceParams::no_growth()),
        _ => load(arg),
    }
}

/// One vector or an array of them.
fn vectors(arg: &str) -> std::result::Result<(Vec<C00Vector>, bool), Failure> {
    let text = text_or_file(arg)?;
    if text.trim_start().starts_with('[') {
        let v: Vec<C00Vector> = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad vectors: {e}")))?;
        Ok((v, true))
    } else {
        let v: C00Vector = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad vector: {e}")))?;
        Ok((vec![v], false))
    }
}

fn table<F>(io: &SpaceVec, out: &mut dyn Write, header: &str, mut row: F) -> Run
where
    F: FnMut(&C00Vector, &SpaceSpec) -> std::result::Result<Vec<String>, Failure>,
{
    let s = space(&io.space)?;
    let (vs, batch) = vectors(&io.vec)?;
    if !batch {
        let cells = row(&vs[0], &s)?;
        say!(out, "{}", cells.join(" "));
        return Ok(true);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["index"];
    head.extend(header.split(','));
    w.write_record(&head).map_err(|e| Failure::Violation(e.to_string()))?;
    for (k, v) in vs.iter().enumerate() {
        let mut cells = vec![k.to_string()];
        cells.extend(row(v, &s)?);
        w.write_record(&cells).map_err(|e| Failure::Violation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Violation(e.to_string()))?;
    out.write_all(&bytes).map_err(|e| Failure::Violation(e.to_string()))?;
    Ok(true)
}

fn exact(x: &Q) -> Vec<String> {
    vec![fmt_q(x), crate::rational::decimal_down(x, 12)]
}

fn schreier(op: SchreierOp, out: &mut dyn Write) -> Run {
    match op {
        SchreierOp::Member { family: f, set } => {
            let fam = family(&f.family)?;
            let s: FinSet = load(&set)?;
            let m = member(&s, &fam);
            say!(out, "{m}");
        }
        SchreierOp::Admissible { family: f, sets } => {
            let fam = family(&f.family)?;
            let s: Vec<FinSet> = load(&sets)?;
            say!(out, "{}", is_admissible(&s, &fam)?);
        }
        SchreierOp::Maximal { family: f, lo, hi } => {
            let fam = family(&f.family)?;
            for s in maximal_sets(&fam, lo, hi)? {
                say!(out, "{s}");
            }
        }
        SchreierOp::Mass { family: f, vec } => {
            let fam = family(&f.family)?;
            let v: C00Vector = load(&vec)?;
            say!(out, "{}", show(&family_mass(&v, &fam)?));
        }
        SchreierOp::Cb { family: f } => {
            let fam = family(&f.family)?;
            match fam {
                FamilyDescriptor::Explicit(_) => say!(out, "{}", cb_explicit(&fam)?),
                _ => say!(out, "{}", cb_symbolic(&fam)?),
            }
        }
        SchreierOp::Tree { sets, m } => {
            let s: Vec<FinSet> = load(&sets)?;
            let tree = tree_decompose(&s, m)?;
            print_tree(&tree, 0, out)?;
        }
    }
    Ok(true)
}

fn print_tree(t: &AdmTree, indent: usize, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    say!(out, "{:indent$}{}", "", t.set, indent = indent * 2);
    for c in &t.children {
        print_tree(c, indent + 1, out)?;
    }
    Ok(())
}

fn norm(op: NormOp, out: &mut dyn Write) -> Run {
    match op {
        NormOp::Eval { io } => table(&io, out, "norm_p,decimal", |v, s| Ok(exact(&norm_p(v, s)?))),
        NormOp::Cert { io } => {
            let s = space(&io.space)?;
            let (vs, _) = vectors(&io.vec)?;
            let cert = norm_certificate(&vs[0], &s)?;
            save(&io.out, &cert)?;
            let text = serde_json::to_string(&cert).map_err(|e| Failure::Violation(e.to_string()))?;
            say!(out, "{text}");
            Ok(true)
        }
        NormOp::Verify { io, cert } => {
            let s = space(&io.space)?;
            let (vs, _) = vectors(&io.vec)?;
            let c: NormCertificate = load(&cert)?;
            let val = verify_certificate(&c, &vs[0], &s)?;
            let n = norm_p(&vs[0], &s)?;
            say!(out, "certified {} norm {} tight {}", show(&val), show(&n), val == n);
            Ok(true)
        }
        NormOp::Brute { io, depth } => {
            table(&io, out, "brute_p,decimal", |v, s| Ok(exact(&brute_norm_p(v, s, depth)?)))
        }
        NormOp::Rmax { io, family: f } => {
            let fam = family(&f.family)?;
            table(&io, out, "restriction_max,decimal", |v, s| Ok(exact(&restriction_max(v, &fam, s)?)))
        }
        NormOp::Regularize { space: sp, horizon, out: path } => {
            let s = space(&sp)?;
            let reg = regularize(s.pairs(), horizon);
            for (n, t) in &reg {
                say!(out, "{n} {}", show(t));
            }
            let pairs: Vec<(usize, String)> = reg.iter().map(|(n, t)| (*n, fmt_q(t))).collect();
            save(&path, &pairs)?;
            Ok(true)
        }
        NormOp::ThetaSup { space: sp, horizon, tol } => {
            let s = space(&sp)?;
            let (lo, hi) = theta_sup_bounds(s.pairs(), horizon, &rational(&tol)?)?;
            say!(out, "lower {}", show(&lo));
            say!(out, "upper {}", show(&hi));
            Ok(true)
        }
    }
}

fn scc(op: SccOp, out: &mut dyn Write) -> Run {
    match op {
        SccOp::Gen { n, start, out: path } => {
            if start == 0 {
                return Err(Failure::Usage("start must be at least 1".into()));
            }
            let v = repeated_averages(n, start);
            save(&path, &v)?;
            say!(out, "support {} from {} to {}", v.len(), start, v.max_index().unwrap());
            if path.is_none() {
                let text = serde_json::to_string(&v).map_err(|e| Failure::Violation(e.to_string()))?;
                say!(out, "{text}");
            }
            Ok(true)
        }
        SccOp::Estbasis { space: sp, n, start } => {
            let s = space(&sp)?;
            let e = est_basis_vector(&s, n, start)?;
            say!(out, "support {}", e.x.len());
            say!(out, "delta {}", show(&e.delta));
            say!(out, "norm {} {}", if e.exact { "=" } else { "<=" }, show(&e.norm));
            say!(out, "bound {}", show(&e.bound));
            say!(out, "holds {}", e.holds);
            Ok(e.holds)
        }
        SccOp::Flatten { space: sp, beta, eps, budget: b, out: path } => {
            let s = space(&sp)?;
            let f = flatten(&s, beta, &rational(&eps)?, &budget(&b)?)?;
            save(&path, &f.w)?;
            say!(out, "blocks {} support {}..{}", f.blocks, f.w.min_index().unwrap(), f.w.max_index().unwrap());
            say!(out, "restriction {}", show(&f.restriction));
            say!(out, "norm {}", show(&f.norm));
            say!(out, "ratio {}", show(&f.ratio));
            Ok(true)
        }
    }
}

fn theta(op: ThetaOp, out: &mut dyn Write) -> Run {
    match op {
        ThetaOp::Estimate { space: sp, n, r, budget: b } => {
            let s = space(&sp)?;
            let e = theta_n_estimate(&s, n, r, &budget(&b)?)?;
            let label = if r.is_some() { "upper bound on a finite proxy" } else { "upper bound" };
            say!(out, "{label} {}", show(&e.upper));
            match &e.definitional_lower {
                Some(l) => say!(out, "definitional lower {}", show(l)),
                None => say!(out, "definitional lower unavailable"),
            }
            let w: Vec<String> = e.witness.iter().map(|b| format!("{:?}", b.indices())).collect();
            say!(out, "witness {}", w.join(" "));
            say!(out, "candidates {}{}", e.candidates, if e.exhausted { " (budget exhausted)" } else { "" });
            Ok(true)
        }
        ThetaOp::Audit { space: sp, estimates } => {
            let s = space(&sp)?;
            let raw: BTreeMap<String, String> = load(&estimates)?;
            let mut upper = BTreeMap::new();
            for (k, v) in raw {
                upper.insert(number::<usize>(&k)?, rational(&v)?);
            }
            let top = upper.keys().next_back().copied().unwrap_or(0);
            let lower: BTreeMap<usize, Q> = (1..=top)
                .filter_map(|n| definitional_lower(&s, n).map(|l| (n, l)))
                .collect();
            let flags = submult_audit(&upper, &lower);
            for f in &flags {
                say!(out, "flag n={} m={} upper {} < product {}", f.n, f.m, show(&f.upper), show(&f.product));
            }
            say!(out, "{} flags", flags.len());
            Ok(flags.is_empty())
        }
    }
}

fn dom(op: DomOp, out: &mut dyn Write) -> Run {
    match op {
        DomOp::Delta { space_x, space_y, family: f, n, dim, budget: b } => {
            let (x, y) = (space(&space_x)?, space(&space_y)?);
            let d = delta_star_estimate(&x, &y, &family(&f.family)?, n, dim, &budget(&b)?)?;
            say!(out, "lower {}", show(&d.lower));
            let text = serde_json::to_string(&d.witness).map_err(|e| Failure::Violation(e.to_string()))?;
            say!(out, "witness {text}");
            Ok(true)
        }
        DomOp::Triangle { vec, space_x, space_y, families } => {
            let (x, y) = (space(&space_x)?, space(&space_y)?);
            let fams: Vec<(usize, FamilyDescriptor)> = match families {
                Some(f) => load(&f)?,
                None => (1..=3).map(|n| (n, FamilyDescriptor::Schreier(n))).collect(),
            };
            let (vs, _) = vectors(&vec)?;
            for v in &vs {
                let t = triangle_holds(v, &x, &y, &fams)?;
                say!(out, "truncated (▲): holds {} lhs {} rhs {}", t.holds, show(&t.lhs), show(&t.rhs));
            }
            Ok(true)
        }
        DomOp::Tsistar { pairs, theta, n, samples, seed } => {
            let pairs: Vec<(usize, Q)> = match pairs.strip_prefix("decay:") {
                Some(k) => decay_pairs(number(k)?),
                None => {
                    let raw: Vec<(usize, String)> = load(&pairs)?;
                    raw.into_iter()
                        .map(|(n, t)| Ok((n, rational(&t)?)))
                        .collect::<std::result::Result<_, Failure>>()?
                }
            };
            let sample = match samples.parse::<usize>() {
                Ok(count) => {
                    let mut rng = Budget::new(seed, 0).rng();
                    (0..count).map(|_| random_vector(&mut rng, 1, 1, 10)).collect()
                }
                Err(_) => vectors(&samples)?.0,
            };
            let rep = tsistar_check(&pairs, &rational(&theta)?, n, &sample)?;
            say!(out, "gap {}", show(&rep.gap));
            say!(out, "checked {}", rep.checked);
            for v in &rep.violations {
                say!(out, "violation sample {} ({}) {} > {}", v.sample, v.inequality, show(&v.lhs), show(&v.rhs));
            }
            say!(out, "violations {}", rep.violations.len());
            Ok(rep.passed())
        }
    }
}

fn sequence(arg: &str, s: &SpaceSpec) -> std::result::Result<BlockSeq, Failure> {
    let blocks: Vec<C00Vector> = load(arg)?;
    Ok(BlockSeq::new(blocks, s)?)
}

fn operator(op: OpOp, out: &mut dyn Write) -> Run {
    match op {
        OpOp::Theta3 { seq, m, theta, space: sp, budget: b } => {
            let s = space(&sp)?;
            let q = sequence(&seq, &s)?;
            let r = theta3_min_ratio(&q, m, &rational(&theta)?, &s, &budget(&b)?)?;
            say!(out, "search only; the lower estimate itself is not constructed");
            say!(out, "min ratio {}", show(&r.ratio));
            say!(out, "set {}", r.set);
            let text = serde_json::to_string(&r.coeffs).map_err(|e| Failure::Violation(e.to_string()))?;
            say!(out, "coeffs {text}");
            say!(out, "candidates {}{}", r.candidates, if r.exhausted { " (budget exhausted)" } else { "" });
            Ok(true)
        }
        OpOp::BuildY { families, j, space: sp, out: path } => {
            let s = space(&sp)?;
            let raw: Vec<Vec<C00Vector>> = load(&families)?;
            let fams = raw
                .into_iter()
                .map(|b| BlockSeq::new(b, &s))
                .collect::<crate::error::Result<Vec<_>>>()?;
            let j: Vec<usize> = j
                .split(',')
                .map(|t| number(t.trim()))
                .collect::<std::result::Result<_, Failure>>()?;
            let built = build_y(&fams, &j, &s)?;
            for (k, (n, p)) in built.raw_norms.iter().zip(&built.picks).enumerate() {
                say!(out, "y_{} picks {:?} norm before scaling {}", j[k], p, show(n));
            }
            say!(out, "order r {}", built.y.r);
            save(&path, &built.y.blocks())?;
            Ok(true)
        }
        OpOp::Ratios { x, y, probes, space_x, space_y } => {
            let (sx, sy) = (space(&space_x)?, space(&space_y)?);
            let xs = sequence(&x, &sx)?;
            let ys = sequence(&y, &sy)?;
            let (ps, _) = vectors(&probes)?;
            say!(out, "proxy evidence only");
            for (k, (a, b)) in operator_ratios(&ys, &xs, &ps, &sy, &sx)?.iter().enumerate() {
                say!(out, "probe {k}: x {} y {}", show(a), show(b));
            }
            Ok(true)
        }
    }
}

fn xd(op: XdOp, out: &mut dyn Write) -> Run {
    match op {
        XdOp::Build { params: p, support, depth, cap, out: path } => {
            let d = build_d(&params(&p)?, support, depth, cap)?;
            say!(out, "functionals {}", d.len());
            save(&path, &d)?;
            Ok(true)
        }
        XdOp::Eval { vec, set, params: p, depth } => {
            let (vs, _) = vectors(&vec)?;
            let x = &vs[0];
            match set {
                Some(file) => {
                    let mut d: DSet = load(&file)?;
                    let (lo, hi) = norm_d_bounds(x, &mut d)?;
                    say!(out, "lower {}", show(&lo));
                    say!(out, "upper {}", show(&hi));
                }
                None => {
                    let d = params(&p)?;
                    let lo = norm_d_lower(x, &d, depth)?;
                    let hi = norm_p(x, &d.envelope_space())?;
                    say!(out, "lower {}", show(&lo));
                    say!(out, "upper {}", show(&hi));
                }
            }
            Ok(true)
        }
        XdOp::Claim { n, params: p, support, depth, budget: b, out: path } => {
            let d = params(&p)?;
            let r = claim_scan(&d, n, support, depth, &budget(&b)?)?;
            say!(out, "j_{n} {}", r.j_n);
            match r.i_n {
                Some(i) => say!(out, "i_{n} {i}"),
                None => say!(out, "i_{n} undefined (coding without growth); scanning from 1"),
            }
            say!(out, "samples {}", r.samples);
            say!(out, "max ratio {}", show(&r.max_ratio));
            say!(out, "ratios above 4: {}", r.counterexamples.len());
            let report = serde_json::json!({
                "n": n,
                "j_n": r.j_n,
                "i_n": r.i_n,
                "samples": r.samples,
                "max_ratio": fmt_q(&r.max_ratio),
                "argmax": r.argmax.as_ref().map(|(f, x)| serde_json::json!({"set": f, "vector": x})),
                "counterexamples": r.counterexamples.len(),
            });
            save(&path, &report)?;
            Ok(r.passed())
        }
    }
}

fn run_suite(only: Option<String>, path: Option<String>, out: &mut dyn Write) -> Run {
    let ids: Vec<usize> = match only {
        Some(s) => s
            .split(',')
            .map(|t| number(t.trim()))
            .collect::<std::result::Result<_, Failure>>()?,
        None => (1..=suite::COUNT).collect(),
    };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > suite::COUNT) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["criterion", "name", "status", "detail"])
        .map_err(|e| Failure::Violation(e.to_string()))?;
    let mut all = true;
    for id in ids {
        let o = suite::run(id);
        all &= o.passed;
        let status = if o.passed { "PASS" } else { "FAIL" };
        w.write_record([o.id.to_string().as_str(), o.name, status, o.detail.as_str()])
            .map_err(|e| Failure::Violation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Violation(e.to_string()))?;
    if let Some(p) = path {
        fs::write(&p, &bytes).map_err(|e| Failure::Usage(format!("cannot write `{p}`: {e}")))?;
    }
    out.write_all(&bytes).map_err(|e| Failure::Violation(e.to_string()))?;
    Ok(all)
}

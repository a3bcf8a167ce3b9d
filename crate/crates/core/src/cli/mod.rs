//! Command-line front end: JSON in, JSON report out.
//!
//! Exit codes: 0 ok, 1 mathematical violation, 2 malformed input.

pub mod accept;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::exactmat::{fmt_rational, matrix_from_json, matrix_to_json, parse_rational, RatMatrix, Rational};
use crate::flags::{self, Flag, FlagTriple};
use crate::liealg::LieAlgebraSpec;
use crate::siegel::{self, CMatrix, RMatrix, Tolerance, C64};
use crate::symplectic::{self, Lagrangian};
use crate::thetapos::{self, ThetaChoice};
use crate::totpos::{self, ReducedWord};

#[derive(Parser, Debug)]
#[command(name = "poskit", version, about = "Exact positivity computations for matrix groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Totally positive matrices
    #[command(subcommand)]
    Tp(TpCmd),
    /// Flag triples
    #[command(subcommand)]
    Flags(FlagsCmd),
    /// Maslov index of Lagrangian triples
    #[command(subcommand)]
    Maslov(MaslovCmd),
    /// Restricted roots and Killing forms
    #[command(subcommand)]
    Liealg(LiealgCmd),
    /// Theta-positive structures
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Siegel upper half-space
    #[command(subcommand)]
    Siegel(SiegelCmd),
    /// Run the acceptance suite
    Accept(AcceptArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// JSON input file; stdin when omitted
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EpsArgs {
    /// Numeric tolerance, must be positive
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub eps: f64,
}

#[derive(Subcommand, Debug)]
pub enum TpCmd {
    /// Is every minor positive?
    Check(InputArgs),
    /// Is a unitriangular matrix in U^{>0}?
    UCheck(InputArgs),
    /// Product of elementary factors along a word
    Param(ParamArgs),
    /// Lower · diagonal · upper factorization of a TP matrix
    Whitney(InputArgs),
    /// Distinct positive real spectrum
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated letters; the longest word when omitted
    #[arg(long)]
    pub word: Option<String>,
    /// Comma-separated rationals
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
}

#[derive(Subcommand, Debug)]
pub enum FlagsCmd {
    /// Are two flags transverse? {"first": B1, "second": B2}
    Transverse(InputArgs),
    /// Is a flag triple generic?
    Generic(InputArgs),
    /// Triple ratio T_{a,b,c}
    Ratio {
        #[command(flatten)]
        input: InputArgs,
        /// a,b,c
        #[arg(long)]
        abc: String,
    },
    /// Positivity of a flag triple
    Positive {
        #[command(flatten)]
        input: InputArgs,
        /// bd: triple ratios; gw: unipotent criterion
        #[arg(long, value_enum, default_value_t = Method::Bd)]
        method: Method,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Method {
    Gw,
    Bd,
}

#[derive(Subcommand, Debug)]
pub enum MaslovCmd {
    /// Index of a triple
    Index(InputArgs),
    /// Normal form of a transverse triple
    NormalForm(InputArgs),
    /// Cocycle defect of four Lagrangians
    Chain(InputArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::So)]
    pub family: FamilyKind,
    /// n for sl(n) or sp(2n)
    #[arg(long)]
    pub n: Option<usize>,
    /// p for so(p,q), default 2
    #[arg(long)]
    pub p: Option<usize>,
    /// q for so(p,q), default 3
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FamilyKind {
    Sl,
    Sp,
    So,
}

#[derive(Subcommand, Debug)]
pub enum LiealgCmd {
    /// Restricted roots, multiplicities, Dynkin type
    Roots(FamilyArgs),
    /// Killing form Gram matrix on the standard basis
    Killing(FamilyArgs),
    /// Is the real form split?
    Split(FamilyArgs),
}

#[derive(Subcommand, Debug)]
pub enum ThetaCmd {
    /// Does the algebra admit a Theta-positive structure?
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated simple-root indices, or "all"
        #[arg(long, default_value = "all")]
        theta: String,
    },
    /// The so(2,3) product element for parameters x v y w
    F1212 {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        w: String,
    },
    /// Sample the cone invariance under the Levi factor
    ConeTest {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "1")]
        theta: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SiegelCmd {
    /// Möbius action. {"g": real 2n×2n, "z": complex n×n}
    Act {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Cayley transform. {"z": ...}, or {"w": ...} with --inverse
    Cayley {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: EpsArgs,
        #[arg(long)]
        inverse: bool,
    },
    /// Stratum in the closed bounded domain. {"w": ...}
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
}

#[derive(Args, Debug)]
pub struct AcceptArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Group name, criterion name or criterion number
    #[arg(long)]
    pub only: Option<String>,
    #[command(flatten)]
    pub eps: EpsArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub provenance: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({"status": self.status.name(), "payload": self.payload, "provenance": self.provenance})
    }
}

/// A failed command: malformed input (exit 2) or a violated precondition (exit 1).
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Precondition(_) | Error::Singular => Status::Violation,
            _ => Status::Error,
        };
        Failure { status, message: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { status: Status::Error, message: msg.into() }
}

type CmdResult = std::result::Result<(Status, Value), Failure>;

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violation
    }
}

pub fn default_seed() -> std::result::Result<u64, Failure> {
    match std::env::var("POSKIT_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| malformed(format!("POSKIT_SEED: not an unsigned integer: {s}"))),
        Err(_) => Ok(0),
    }
}

fn read_json(input: &InputArgs, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> std::result::Result<Value, Failure> {
    let text = match &input.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| malformed(format!("input: cannot read {}: {e}", p.display())))?,
        None => stdin().map_err(|e| malformed(format!("input: cannot read stdin: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| malformed(format!("input: malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> std::result::Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| malformed(format!("{key}: missing field")))
}

fn named_matrix(v: &Value, key: &str) -> std::result::Result<RatMatrix, Failure> {
    matrix_from_json(field(v, key)?).map_err(|e| malformed(format!("{key}: {e}")))
}

fn tolerance(e: &EpsArgs) -> std::result::Result<Tolerance, Failure> {
    Tolerance::new(e.eps).map_err(|_| malformed(format!("eps: must be positive and finite, got {}", e.eps)))
}

fn rationals(s: &str, what: &str) -> std::result::Result<Vec<Rational>, Failure> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| malformed(format!("{what}: {e}"))))
        .collect()
}

fn counts(s: &str, what: &str) -> std::result::Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| malformed(format!("{what}: not a count: {t}"))))
        .collect()
}

fn rat_json(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

fn real_matrix(v: &Value, key: &str) -> std::result::Result<RMatrix, Failure> {
    let rows = field(v, key)?.as_array().ok_or_else(|| malformed(format!("{key}: expected array of rows")))?;
    let n = rows.len();
    let mut data = Vec::new();
    let mut width = None;
    for r in rows {
        let r = r.as_array().ok_or_else(|| malformed(format!("{key}: row must be an array")))?;
        if *width.get_or_insert(r.len()) != r.len() {
            return Err(malformed(format!("{key}: ragged rows")));
        }
        for x in r {
            data.push(x.as_f64().ok_or_else(|| malformed(format!("{key}: entries must be numbers")))?);
        }
    }
    Ok(RMatrix::from_row_slice(n, width.unwrap_or(0), &data))
}

fn complex_entry(x: &Value, key: &str) -> std::result::Result<C64, Failure> {
    if let Some(re) = x.as_f64() {
        return Ok(C64::new(re, 0.0));
    }
    match x.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(a), Some(b)) => Ok(C64::new(a, b)),
            _ => Err(malformed(format!("{key}: complex entries are [re, im] number pairs"))),
        },
        _ => Err(malformed(format!("{key}: complex entries are [re, im] number pairs"))),
    }
}

fn complex_matrix(v: &Value, key: &str) -> std::result::Result<CMatrix, Failure> {
    let rows = field(v, key)?.as_array().ok_or_else(|| malformed(format!("{key}: expected array of rows")))?;
    let n = rows.len();
    let mut data = Vec::new();
    let mut width = None;
    for r in rows {
        let r = r.as_array().ok_or_else(|| malformed(format!("{key}: row must be an array")))?;
        if *width.get_or_insert(r.len()) != r.len() {
            return Err(malformed(format!("{key}: ragged rows")));
        }
        for x in r {
            data.push(complex_entry(x, key)?);
        }
    }
    Ok(CMatrix::from_row_slice(n, width.unwrap_or(0), &data))
}

fn complex_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn real_json(m: &RMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect())).collect())
}

fn flag(b: RatMatrix, what: &str) -> std::result::Result<Flag, Failure> {
    Flag::new(b).map_err(|e| malformed(format!("{what}: {e}")))
}

/// A triple from {"first","second","third"} bases, or from a unitriangular u as (F, E, uE).
fn triple(v: &Value) -> std::result::Result<(FlagTriple, Option<RatMatrix>), Failure> {
    if v.is_object() {
        let t = FlagTriple::new(
            flag(named_matrix(v, "first")?, "first")?,
            flag(named_matrix(v, "second")?, "second")?,
            flag(named_matrix(v, "third")?, "third")?,
        )?;
        return Ok((t, None));
    }
    let u = matrix_from_json(v).map_err(|e| malformed(format!("u: {e}")))?;
    if !totpos::is_unitriangular_upper(&u) {
        return Err(malformed("u: expected an upper unitriangular matrix"));
    }
    let n = u.rows();
    let e = flags::standard_descending(n);
    let t = flags::act(&u, &e)?;
    Ok((FlagTriple::new(flags::standard_ascending(n), e, t)?, Some(u)))
}

fn lagrangians(v: &Value, count: usize) -> std::result::Result<Vec<Lagrangian>, Failure> {
    let list = v.get("lagrangians").unwrap_or(v);
    let arr = list.as_array().ok_or_else(|| malformed("lagrangians: expected an array of bases"))?;
    if arr.len() != count {
        return Err(malformed(format!("lagrangians: expected {count} bases, got {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(i, b)| {
            let m = matrix_from_json(b).map_err(|e| malformed(format!("lagrangians[{i}]: {e}")))?;
            Lagrangian::new(m).map_err(|e| malformed(format!("lagrangians[{i}]: {e}")))
        })
        .collect()
}

fn family_spec(f: &FamilyArgs) -> std::result::Result<LieAlgebraSpec, Failure> {
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| malformed(format!("--{name}: required for this family")));
    let r = match f.family {
        FamilyKind::Sl => LieAlgebraSpec::sl(need(f.n, "n")?),
        FamilyKind::Sp => LieAlgebraSpec::sp(need(f.n, "n")?),
        FamilyKind::So => LieAlgebraSpec::so(f.p.unwrap_or(2), f.q.unwrap_or(3)),
    };
    r.map_err(|e| malformed(format!("family: {e}")))
}

fn theta_choice(s: &str, rank: usize) -> std::result::Result<ThetaChoice, Failure> {
    if s.trim() == "all" {
        return Ok(ThetaChoice::all(rank));
    }
    ThetaChoice::new(counts(s, "--theta")?, rank).map_err(|e| malformed(format!("--theta: {e}")))
}

fn run_tp(cmd: &TpCmd, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> CmdResult {
    match cmd {
        TpCmd::Check(i) => {
            let m = matrix_from_json(&read_json(i, stdin)?).map_err(|e| malformed(format!("matrix: {e}")))?;
            let tp = totpos::is_totally_positive(&m);
            Ok((verdict(tp), json!({"totally_positive": tp, "totally_nonnegative": totpos::is_totally_nonnegative(&m)})))
        }
        TpCmd::UCheck(i) => {
            let m = matrix_from_json(&read_json(i, stdin)?).map_err(|e| malformed(format!("matrix: {e}")))?;
            let up = totpos::is_u_positive(&m).map_err(|e| malformed(format!("matrix: {e}")))?;
            Ok((verdict(up), json!({"u_positive": up})))
        }
        TpCmd::Param(a) => {
            let word = match &a.word {
                Some(w) => ReducedWord::new(counts(w, "--word")?, a.n).map_err(|e| malformed(format!("--word: {e}")))?,
                None => totpos::longest_word(a.n).map_err(|e| malformed(format!("--n: {e}")))?,
            };
            let params = rationals(&a.params, "--params")?;
            let m = totpos::param_f(&word, &params).map_err(|e| malformed(format!("--params: {e}")))?;
            let up = totpos::is_u_positive(&m)?;
            Ok((Status::Ok, json!({"word": word.letters, "matrix": matrix_to_json(&m), "u_positive": up})))
        }
        TpCmd::Whitney(i) => {
            let m = matrix_from_json(&read_json(i, stdin)?).map_err(|e| malformed(format!("matrix: {e}")))?;
            let f = totpos::whitney_factorize(&m)?;
            Ok((
                Status::Ok,
                json!({
                    "lower": matrix_to_json(&f.lower),
                    "diag": matrix_to_json(&f.diag),
                    "upper": matrix_to_json(&f.upper),
                    "reconstructs": f.product() == m,
                }),
            ))
        }
        TpCmd::Spectrum { input, eps } => {
            let tol = tolerance(eps)?;
            let m = matrix_from_json(&read_json(input, stdin)?).map_err(|e| malformed(format!("matrix: {e}")))?;
            if !m.is_square() {
                return Err(malformed("matrix: must be square"));
            }
            let ok = totpos::gk_spectrum_check(&m, tol.eps);
            let ev: Vec<Value> = m.to_f64().complex_eigenvalues().iter().map(|z| json!([z.re, z.im])).collect();
            Ok((verdict(ok), json!({"distinct_positive_real": ok, "eigenvalues": ev})))
        }
    }
}

fn run_flags(cmd: &FlagsCmd, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> CmdResult {
    match cmd {
        FlagsCmd::Transverse(i) => {
            let v = read_json(i, stdin)?;
            let a = flag(named_matrix(&v, "first")?, "first")?;
            let b = flag(named_matrix(&v, "second")?, "second")?;
            let t = flags::is_transverse(&a, &b).map_err(|e| malformed(format!("second: {e}")))?;
            Ok((verdict(t), json!({"transverse": t})))
        }
        FlagsCmd::Generic(i) => {
            let (t, _) = triple(&read_json(i, stdin)?)?;
            let g = flags::is_generic(&t);
            Ok((verdict(g), json!({"generic": g})))
        }
        FlagsCmd::Ratio { input, abc } => {
            let idx = counts(abc, "--abc")?;
            let [a, b, c] = idx[..] else {
                return Err(malformed("--abc: expected three counts a,b,c"));
            };
            let (t, _) = triple(&read_json(input, stdin)?)?;
            let r = flags::triple_ratio(&t.first, &t.second, &t.third, a, b, c)?;
            Ok((Status::Ok, json!({"ratio": rat_json(&r), "abc": [a, b, c]})))
        }
        FlagsCmd::Positive { input, method } => {
            let (t, u) = triple(&read_json(input, stdin)?)?;
            let pos = match method {
                Method::Bd => flags::is_bd_positive(&t),
                // GW reads the triple as (E, uE, F) when given u
                Method::Gw => match &u {
                    Some(_) => flags::is_gw_positive(&FlagTriple::new(t.second.clone(), t.third.clone(), t.first.clone())?),
                    None => flags::is_gw_positive(&t),
                },
            };
            let mut payload = json!({"positive": pos, "method": format!("{method:?}").to_lowercase()});
            if let (Some(u), Method::Gw) = (&u, method) {
                if let Some(d) = flags::positive_sign_pattern(u)? {
                    payload["sign_pattern"] = Value::Array(d.iter().map(rat_json).collect());
                }
            }
            Ok((verdict(pos), payload))
        }
    }
}

fn run_maslov(cmd: &MaslovCmd, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> CmdResult {
    match cmd {
        MaslovCmd::Index(i) => {
            let l = lagrangians(&read_json(i, stdin)?, 3)?;
            let tau = symplectic::maslov_index(&l[0], &l[1], &l[2]).map_err(|e| malformed(format!("lagrangians: {e}")))?;
            let tr = symplectic::transverse(&l[0], &l[1]) && symplectic::transverse(&l[1], &l[2]) && symplectic::transverse(&l[0], &l[2]);
            Ok((Status::Ok, json!({"tau": tau, "pairwise_transverse": tr})))
        }
        MaslovCmd::NormalForm(i) => {
            let l = lagrangians(&read_json(i, stdin)?, 3)?;
            let nf = symplectic::normal_form(&l[0], &l[1], &l[2])?;
            let tau = symplectic::maslov_index(&l[0], &l[1], &l[2])?;
            Ok((
                Status::Ok,
                json!({
                    "k": nf.k,
                    "eps": nf.eps,
                    "weights": nf.weights.iter().map(rat_json).collect::<Vec<_>>(),
                    "basis": matrix_to_json(&nf.basis),
                    "tau": tau,
                }),
            ))
        }
        MaslovCmd::Chain(i) => {
            let l = lagrangians(&read_json(i, stdin)?, 4)?;
            let d = symplectic::chain_rule_defect(&l[0], &l[1], &l[2], &l[3]).map_err(|e| malformed(format!("lagrangians: {e}")))?;
            Ok((verdict(d == 0), json!({"defect": d})))
        }
    }
}

fn run_liealg(cmd: &LiealgCmd) -> CmdResult {
    match cmd {
        LiealgCmd::Roots(f) => {
            let spec = family_spec(f)?;
            let dec = spec.restricted_roots();
            let roots: Vec<Value> = dec
                .roots
                .iter()
                .map(|r| json!({"root": r.label(), "multiplicity": r.multiplicity, "positive": r.is_positive()}))
                .collect();
            Ok((
                Status::Ok,
                json!({
                    "family": spec.family.to_string(),
                    "dim": spec.dim(),
                    "rank": dec.simple.len(),
                    "roots": roots,
                    "simple": dec.simple.iter().map(|r| r.label()).collect::<Vec<_>>(),
                    "dynkin": dec.dynkin,
                    "cartan_matrix": dec.cartan_matrix(),
                    "zero_space_dim": dec.zero_space_basis.len(),
                    "audited_dim": dec.audited_dim(),
                }),
            ))
        }
        LiealgCmd::Killing(f) => {
            let spec = family_spec(f)?;
            let g = spec.gram(spec.basis())?;
            let (p, m, z) = symplectic::signature(&g)?;
            Ok((
                Status::Ok,
                json!({
                    "family": spec.family.to_string(),
                    "trace_constant": rat_json(&spec.killing_constant()),
                    "gram": matrix_to_json(&g),
                    "signature": [p, m, z],
                }),
            ))
        }
        LiealgCmd::Split(f) => {
            let spec = family_spec(f)?;
            let dec = spec.restricted_roots();
            Ok((
                Status::Ok,
                json!({"family": spec.family.to_string(), "split": spec.is_split(), "zero_space_dim": dec.zero_space_basis.len()}),
            ))
        }
    }
}

fn run_theta(cmd: &ThetaCmd, seed: u64) -> CmdResult {
    match cmd {
        ThetaCmd::Check { family, theta } => {
            let spec = family_spec(family)?;
            let th = theta_choice(theta, spec.rank())?;
            let rep = thetapos::admits_theta_positive(&spec, &th)?;
            let reasons: Vec<Value> = rep
                .reasons
                .iter()
                .map(|b| {
                    json!({
                        "index": b.index, "root": b.root, "multiplicity": b.multiplicity,
                        "one_dimensional": b.one_dimensional, "even_pairings": b.even_pairings, "reason": b.reason,
                    })
                })
                .collect();
            let weights: Vec<Value> = rep
                .weight_spaces
                .iter()
                .map(|w| json!({"roots": w.roots, "dim": w.basis.len(), "restriction": w.restriction.iter().map(rat_json).collect::<Vec<_>>()}))
                .collect();
            Ok((
                verdict(rep.admits),
                json!({
                    "family": spec.family.to_string(),
                    "theta": rep.theta.indices,
                    "admits": rep.admits,
                    "reasons": reasons,
                    "dims": {"u": rep.u_theta_basis.len(), "l": rep.l_theta_basis.len(), "u_opp": rep.u_opp_basis.len(), "z": rep.z_theta_basis.len()},
                    "weight_spaces": weights,
                    "cones": if rep.cones_constructed { "constructed" } else { "not constructed" },
                }),
            ))
        }
        ThetaCmd::F1212 { x, v, y, w } => {
            let p: Vec<Rational> = [x, v, y, w]
                .iter()
                .map(|s| parse_rational(s).map_err(|e| malformed(format!("f1212 parameter: {e}"))))
                .collect::<std::result::Result<_, _>>()?;
            let m = thetapos::so23_f1212(&p[0], &p[1], &p[2], &p[3]);
            Ok((Status::Ok, json!({"matrix": matrix_to_json(&m)})))
        }
        ThetaCmd::ConeTest { family, theta, trials, seed: s } => {
            let spec = family_spec(family)?;
            let th = theta_choice(theta, spec.rank())?;
            let seed = s.unwrap_or(seed);
            let ok = thetapos::cone_invariance_sample(&spec, &th, *trials, seed)
                .map_err(|e| malformed(format!("--theta: {e}")))?;
            Ok((verdict(ok), json!({"family": spec.family.to_string(), "theta": th.indices, "trials": trials, "passed": ok})))
        }
    }
}

fn run_siegel(cmd: &SiegelCmd, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> CmdResult {
    match cmd {
        SiegelCmd::Act { input, eps } => {
            let tol = tolerance(eps)?;
            let v = read_json(input, stdin)?;
            let g = real_matrix(&v, "g")?;
            let z = complex_matrix(&v, "z")?;
            let w = siegel::mobius(&g, &z, tol)?;
            let im = siegel::im_part_formula(&g, &z, tol)?;
            Ok((Status::Ok, json!({"z": complex_json(&w), "im_part": real_json(&im)})))
        }
        SiegelCmd::Cayley { input, eps, inverse } => {
            let tol = tolerance(eps)?;
            let v = read_json(input, stdin)?;
            if *inverse {
                let w = complex_matrix(&v, "w")?;
                let z = siegel::cayley_inv(&w, tol)?;
                Ok((Status::Ok, json!({"z": complex_json(&z)})))
            } else {
                let z = complex_matrix(&v, "z")?;
                let w = siegel::cayley(&z, tol)?;
                Ok((Status::Ok, json!({"w": complex_json(&w), "in_bounded": siegel::in_bounded(&w, tol)})))
            }
        }
        SiegelCmd::Classify { input, eps } => {
            let tol = tolerance(eps)?;
            let w = complex_matrix(&read_json(input, stdin)?, "w")?;
            let s = siegel::classify(&w, tol)?;
            let r = siegel::boundary_rank(&w, tol)?;
            Ok((Status::Ok, json!({"stratum": s.to_string(), "rank": r})))
        }
    }
}

fn run_accept(a: &AcceptArgs, seed: u64) -> CmdResult {
    let tol = tolerance(&a.eps)?;
    if let Some(sel) = &a.only {
        if !accept::is_known_selector(sel) {
            return Err(malformed(format!("--only: unknown selector {sel}; groups are {}", accept::GROUPS.join(", "))));
        }
    }
    let seed = a.seed.unwrap_or(seed);
    let results = accept::acceptance_suite(seed, a.only.as_deref(), tol);
    let all = results.iter().all(|r| r.passed);
    Ok((verdict(all), json!({"criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(), "all_passed": all})))
}

fn command_name(c: &Command) -> String {
    let (a, b) = match c {
        Command::Tp(t) => ("tp", format!("{t:?}")),
        Command::Flags(t) => ("flags", format!("{t:?}")),
        Command::Maslov(t) => ("maslov", format!("{t:?}")),
        Command::Liealg(t) => ("liealg", format!("{t:?}")),
        Command::Theta(t) => ("theta", format!("{t:?}")),
        Command::Siegel(t) => ("siegel", format!("{t:?}")),
        Command::Accept(_) => return "accept".into(),
    };
    let head: String = b.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut sub = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            sub.push('-');
        }
        sub.push(ch.to_ascii_lowercase());
    }
    format!("{a} {sub}")
}

/// Outcome of one invocation: the exit code, the report, and a one-line diagnostic for failures.
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    pub diagnostic: Option<String>,
    /// Text clap wants printed (help, version).
    pub message: Option<String>,
}

pub fn execute<I, T>(argv: I, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.to_string();
            return Outcome {
                code,
                report: None,
                diagnostic: (code != 0).then(|| text.lines().next().unwrap_or("").to_string()),
                message: Some(text),
            };
        }
    };
    let name = command_name(&cli.command);
    let args: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let base_seed = default_seed();
    let override_seed = match &cli.command {
        Command::Accept(AcceptArgs { seed: Some(s), .. }) | Command::Theta(ThetaCmd::ConeTest { seed: Some(s), .. }) => Some(*s),
        _ => None,
    };
    let effective_seed = override_seed.or(base_seed.as_ref().ok().copied());
    let result = base_seed.and_then(|seed| match &cli.command {
        Command::Tp(c) => run_tp(c, stdin),
        Command::Flags(c) => run_flags(c, stdin),
        Command::Maslov(c) => run_maslov(c, stdin),
        Command::Liealg(c) => run_liealg(c),
        Command::Theta(c) => run_theta(c, seed),
        Command::Siegel(c) => run_siegel(c, stdin),
        Command::Accept(a) => run_accept(a, seed),
    });
    let provenance = json!({"command": name, "args": args, "seed": effective_seed, "version": env!("CARGO_PKG_VERSION")});
    match result {
        Ok((status, payload)) => Outcome {
            code: status.code(),
            report: Some(Report { status, payload, provenance }),
            diagnostic: None,
            message: None,
        },
        Err(f) => {
            let line = f.message.replace('\n', " ");
            Outcome {
                code: f.status.code(),
                report: Some(Report { status: f.status, payload: json!({"error": line}), provenance }),
                diagnostic: Some(line),
                message: None,
            }
        }
    }
}

/// Runs with process stdin/stdout/stderr and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut stdin = || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    };
    let out = execute(argv, &mut stdin);
    // a closed pipe downstream is not our failure
    let mut stdout = std::io::stdout().lock();
    if let Some(m) = &out.message {
        if out.code == 0 {
            let _ = write!(stdout, "{m}");
        } else {
            eprint!("{m}");
        }
    }
    if let Some(r) = &out.report {
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
    }
    if let Some(d) = &out.diagnostic {
        if out.message.is_none() {
            eprintln!("poskit: {d}");
        }
    }
    out.code
}

/// One line per criterion, for humans.
pub fn summary_lines(r: &Report) -> Vec<String> {
    r.payload["criteria"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    format!(
                        "[{}] {:>2} {}",
                        if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
                        c["id"],
                        c["name"].as_str().unwrap_or("")
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

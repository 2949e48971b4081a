//! Command-line front end: argument parsing, file loading and reports.
//!
//! [`run`] never touches the process streams except to read standard input
//! when a group file is not given; output is returned in a
//! [`CommandResult`] so the binary and the tests share one path.

use std::fmt::Write as _;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nilspec::canonical::{bqf_lambda_equivalent, classify_in1, reduce_i32, BinaryQuadraticForm, I32Intermediate};
use nilspec::families::{
    aut_abelian_rank3, aut_even, aut_i32, aut_i42, aut_odd, aut_odd_split, free_abelian, make_gd, make_gd_times_z,
    make_i32, make_i42, make_path7,
};
use nilspec::io::{automorphism_to_json, group_to_json, parse_automorphism, parse_group, spectrum_to_json, JsonInt};
use nilspec::morphism::{check_endomorphism, is_automorphism};
use nilspec::oracle::{
    abelian_closed_form, abelian_twisted_classes, finite_quotient_counts, stabilization_report, FiniteQuotientSpec,
    DEFAULT_BUDGET,
};
use nilspec::reidemeister::{is_hyperbolic, reidemeister_number, reidemeister_via_center_series, spectrum_search};
use nilspec::{EndoData, Error, ExtNat, Int, IntMatrix, TwoStepGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the oracle element budget.
pub const BUDGET_ENV: &str = "NILSPEC_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { exit_code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(exit_code: i32, message: impl std::fmt::Display) -> Self {
        let line = message.to_string().replace('\n', " ");
        CommandResult { exit_code, stdout: String::new(), stderr: format!("error: {}\n", line.trim_end()) }
    }
}

#[derive(Parser, Debug)]
#[command(name = "nilspec", version, about = "Exact computations in torsion-free 2-step nilpotent groups")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Group file (JSON); standard input when omitted
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug)]
struct AutArg {
    /// Automorphism file (JSON)
    #[arg(long)]
    aut: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group invariants
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Endomorphism and automorphism checks
    Aut {
        #[command(subcommand)]
        command: AutCommand,
    },
    /// Reidemeister number of an automorphism
    Reid {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        aut: AutArg,
        #[arg(long)]
        json: bool,
    },
    /// Bounded search of the Reidemeister spectrum
    Spectrum {
        #[command(flatten)]
        group: GroupArg,
        /// Maximal absolute entry of A
        #[arg(long)]
        height: u32,
        /// Stop after this many candidate columns
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Named groups and their automorphisms
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Reduce an I(3,2) presentation [x1,x2] = z1^alpha z2^beta, [x1,x3] = z2^t13, [x2,x3] = z2^t23
    #[command(name = "reduce-i32")]
    ReduceI32 {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Int,
        #[arg(long, allow_hyphen_values = true)]
        beta: Int,
        #[arg(long, allow_hyphen_values = true)]
        t13: Int,
        #[arg(long, allow_hyphen_values = true)]
        t23: Int,
        #[arg(long)]
        json: bool,
    },
    /// Binary quadratic forms
    Bqf {
        #[command(subcommand)]
        command: BqfCommand,
    },
    /// Classify a group whose derived subgroup has rank one
    #[command(name = "classify-in1")]
    ClassifyIn1 {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force twisted conjugacy counts
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Hirsch length, class and invariants
    Info {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Verify that a map is an endomorphism or automorphism
    Check {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        aut: AutArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Print a group file: gd D.., gd-z D.., i32 A B G, i42 DELTA LAMBDA A B C, path7, z K
    Make {
        kind: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Print an automorphism file: even, odd, odd-split, abelian3, i32, i42
    Aut {
        kind: String,
        /// Group file; for even and odd the default is G(1,..,1) (times Z)
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated parameters k_1,..,k_r
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<Int>,
    },
}

#[derive(Subcommand, Debug)]
enum BqfCommand {
    /// Search for a lambda-equivalence from PHI to PSI
    Equiv {
        /// Coefficients a,b,c of a X^2 + b XY + c Y^2
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Int,
        #[arg(long, default_value_t = 3)]
        bound: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Orbits of (Z/M)^k under x -> x + (I - A) c
    Abelian {
        /// Rows separated by ';', entries by ','
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Twisted classes in the quotient G_N
    Quotient {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        aut: AutArg,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Quotient counts for several moduli next to the formula value
    Stabilize {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        aut: AutArg,
        /// Comma-separated odd moduli
        #[arg(long, default_value = "3,5,7")]
        mods: String,
        #[arg(long)]
        json: bool,
    },
}

/// Failure inside a command: usage errors exit 2, everything else 1.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = std::result::Result<String, Failure>;

struct Context<'a> {
    stdin: &'a mut (dyn FnMut() -> std::io::Result<String> + Send),
}

impl Context<'_> {
    fn read(&mut self, path: Option<&str>) -> std::result::Result<String, Failure> {
        match path {
            None | Some("-") => (self.stdin)().map_err(|e| Failure::Domain(format!("reading standard input: {e}"))),
            Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Domain(format!("{p}: {e}"))),
        }
    }

    fn group(&mut self, arg: &GroupArg) -> std::result::Result<TwoStepGroup, Failure> {
        let text = self.read(arg.group.as_deref())?;
        parse_group(&text).map_err(|e| Failure::Domain(format!("group file: {e}")))
    }

    fn aut(&mut self, g: &TwoStepGroup, arg: &AutArg) -> std::result::Result<EndoData, Failure> {
        let text = self.read(Some(&arg.aut))?;
        parse_automorphism(&text, g).map_err(|e| Failure::Domain(format!("automorphism file: {e}")))
    }
}

fn parse_list(text: &str, what: &str) -> std::result::Result<Vec<Int>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<Int>().map_err(|_| Failure::Usage(format!("{what}: {s:?} is not an integer"))))
        .collect()
}

fn parse_form(text: &str, what: &str) -> std::result::Result<BinaryQuadraticForm, Failure> {
    match parse_list(text, what)?.as_slice() {
        [a, b, c] => Ok(BinaryQuadraticForm::new(a.clone(), b.clone(), c.clone())),
        _ => Err(Failure::Usage(format!("{what}: expected three coefficients a,b,c"))),
    }
}

fn parse_matrix(text: &str) -> std::result::Result<IntMatrix, Failure> {
    let rows = text.split(';').map(|r| parse_list(r, "--matrix")).collect::<std::result::Result<Vec<_>, _>>()?;
    IntMatrix::from_rows(rows).map_err(|e| Failure::Usage(format!("--matrix: {e}")))
}

fn budget() -> std::result::Result<u64, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{BUDGET_ENV}: {v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// `ExtNat` for JSON: a number (or string when large), or `"inf"`.
#[derive(Serialize)]
#[serde(untagged)]
enum JsonExt {
    Finite(JsonInt),
    Infinite(&'static str),
}

impl From<&ExtNat> for JsonExt {
    fn from(x: &ExtNat) -> Self {
        match x.as_finite() {
            Some(v) => JsonExt::Finite(JsonInt(v.clone())),
            None => JsonExt::Infinite("inf"),
        }
    }
}

fn ints(v: &[Int]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn join(v: &[Int]) -> String {
    v.iter().map(Int::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct GroupInfo {
    n: usize,
    m: usize,
    hirsch: usize,
    class: [usize; 2],
    gamma2_rank: usize,
    normalized: bool,
    center_rank: usize,
    divisors: Vec<JsonInt>,
    delta: Option<JsonInt>,
    lambda: Option<JsonInt>,
}

fn group_info(g: &TwoStepGroup, as_json: bool) -> CmdResult {
    let inv = g.invariants();
    let info = GroupInfo {
        n: g.n(),
        m: g.m(),
        hirsch: inv.hirsch,
        class: [inv.class_n, inv.class_m],
        gamma2_rank: inv.gamma2_rank,
        normalized: g.is_normalized(),
        center_rank: inv.center_rank,
        divisors: ints(&inv.divisors),
        delta: inv.delta.clone().map(JsonInt),
        lambda: inv.lambda.clone().map(JsonInt),
    };
    if as_json {
        return Ok(json(&info));
    }
    let mut out = String::new();
    writeln!(out, "generators: n = {}, m = {}", g.n(), g.m()).unwrap();
    writeln!(out, "hirsch: {}", inv.hirsch).unwrap();
    writeln!(out, "class: ({},{})", inv.class_n, inv.class_m).unwrap();
    writeln!(out, "gamma2 rank: {}", inv.gamma2_rank).unwrap();
    writeln!(out, "normalized: {}", info.normalized).unwrap();
    writeln!(out, "center rank: {}", inv.center_rank).unwrap();
    writeln!(out, "divisors: [{}]", join(&inv.divisors)).unwrap();
    if let (Some(d), Some(l)) = (&inv.delta, &inv.lambda) {
        writeln!(out, "delta: {d}").unwrap();
        writeln!(out, "lambda: {l}").unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct AutReport {
    endomorphism: bool,
    automorphism: bool,
    det_a: JsonInt,
    det_d: JsonInt,
}

fn aut_check(g: &TwoStepGroup, e: &EndoData, as_json: bool) -> CmdResult {
    let endo = check_endomorphism(g, e)?;
    let auto = endo && is_automorphism(g, e)?;
    let det = |m: &IntMatrix| nilspec::intlin::det(m).map_err(Failure::from);
    let report = AutReport { endomorphism: endo, automorphism: auto, det_a: JsonInt(det(&e.a)?), det_d: JsonInt(det(&e.d)?) };
    if as_json {
        return Ok(json(&report));
    }
    Ok(format!(
        "endomorphism: {}\nautomorphism: {}\ndet A: {}\ndet D: {}\n",
        report.endomorphism, report.automorphism, report.det_a.0, report.det_d.0
    ))
}

#[derive(Serialize)]
struct ReidReport {
    r_phi1: JsonExt,
    r_phi2: JsonExt,
    total: JsonExt,
    hyperbolic: bool,
}

fn reid(g: &TwoStepGroup, e: &EndoData, as_json: bool) -> CmdResult {
    let r = reidemeister_number(g, e)?;
    let via = reidemeister_via_center_series(g, e)?;
    if via != r.total {
        return Err(Failure::Domain(format!("center-series value {via} differs from {}", r.total)));
    }
    if !as_json {
        return Ok(format!("{}\n", r.total));
    }
    Ok(json(&ReidReport {
        r_phi1: (&r.r_phi1).into(),
        r_phi2: (&r.r_phi2).into(),
        total: (&r.total).into(),
        hyperbolic: is_hyperbolic(g, e)?,
    }))
}

fn spectrum(g: &TwoStepGroup, height: u32, limit: Option<u64>, as_json: bool) -> CmdResult {
    let s = spectrum_search(g, height, limit)?;
    if as_json {
        return Ok(spectrum_to_json(&s));
    }
    let mut out = String::new();
    writeln!(out, "height: {}", s.height).unwrap();
    writeln!(out, "candidates scanned: {}", s.candidates_scanned).unwrap();
    writeln!(out, "automorphisms found: {}", s.automorphisms_found).unwrap();
    if s.truncated {
        writeln!(out, "truncated: true").unwrap();
    }
    writeln!(out, "finite values: [{}]", join(&s.finite_values)).unwrap();
    Ok(out)
}

fn family_make(kind: &str, params: &[String]) -> CmdResult {
    let nums = |expected: Option<usize>| -> std::result::Result<Vec<Int>, Failure> {
        let v = params
            .iter()
            .map(|p| p.parse::<Int>().map_err(|_| Failure::Usage(format!("{kind}: {p:?} is not an integer"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        match expected {
            Some(k) if v.len() != k => Err(Failure::Usage(format!("{kind} takes {k} parameters, got {}", v.len()))),
            _ => Ok(v),
        }
    };
    let g = match kind.to_ascii_lowercase().as_str() {
        "gd" => make_gd(&nums(None)?)?,
        "gd-z" | "gdz" => make_gd_times_z(&nums(None)?)?,
        "i32" => {
            let v = nums(Some(3))?;
            make_i32(&v[0], &v[1], &v[2])?
        }
        "i42" => {
            let v = nums(Some(5))?;
            make_i42(&v[0], &v[1], &BinaryQuadraticForm::new(v[2].clone(), v[3].clone(), v[4].clone()))?
        }
        "path7" => {
            nums(Some(0))?;
            make_path7()
        }
        "z" => {
            let v = nums(Some(1))?;
            let k = usize::try_from(&v[0]).map_err(|_| Failure::Usage("z takes a nonnegative rank".into()))?;
            free_abelian(k)
        }
        other => return Err(Failure::Usage(format!("unknown family {other:?}; expected gd, gd-z, i32, i42, path7 or z"))),
    };
    Ok(group_to_json(&g))
}

fn family_aut(ctx: &mut Context<'_>, kind: &str, group: Option<String>, k: Option<String>, l: Option<Int>) -> CmdResult {
    let ks = || -> std::result::Result<Vec<Int>, Failure> {
        parse_list(k.as_deref().ok_or_else(|| Failure::Usage(format!("{kind} needs --k")))?, "--k")
    };
    let single_k = || -> std::result::Result<Int, Failure> {
        match ks()?.as_slice() {
            [x] => Ok(x.clone()),
            _ => Err(Failure::Usage(format!("{kind} takes a single --k"))),
        }
    };
    let given = |ctx: &mut Context<'_>| ctx.group(&GroupArg { group: group.clone() });
    let e = match kind.to_ascii_lowercase().as_str() {
        "even" | "odd" => {
            let ks = ks()?;
            let g = if group.is_some() {
                given(ctx)?
            } else {
                let ones = vec![Int::from(1); ks.len()];
                if kind.eq_ignore_ascii_case("even") { make_gd(&ones)? } else { make_gd_times_z(&ones)? }
            };
            if kind.eq_ignore_ascii_case("even") { aut_even(&g, &ks)? } else { aut_odd(&g, &ks)? }
        }
        "odd-split" => aut_odd_split(&given(ctx)?, &single_k()?)?,
        "abelian3" => aut_abelian_rank3(&single_k()?)?,
        "i32" => {
            let l = l.clone().ok_or_else(|| Failure::Usage("i32 needs --l".into()))?;
            aut_i32(&given(ctx)?, &single_k()?, &l)?
        }
        "i42" => aut_i42(&given(ctx)?)?,
        other => {
            return Err(Failure::Usage(format!(
                "unknown automorphism family {other:?}; expected even, odd, odd-split, abelian3, i32 or i42"
            )))
        }
    };
    Ok(automorphism_to_json(&e))
}

#[derive(Serialize)]
struct TrailStep {
    change: String,
    x: Vec<Vec<JsonInt>>,
    z: Vec<Vec<JsonInt>>,
}

#[derive(Serialize)]
struct ReductionReport {
    alpha: JsonInt,
    beta: JsonInt,
    gamma: JsonInt,
    trail: Vec<TrailStep>,
}

fn reduce(p: &I32Intermediate, as_json: bool) -> CmdResult {
    let r = reduce_i32(p)?;
    if as_json {
        let rows = |m: &IntMatrix| m.to_rows().into_iter().map(|r| ints(&r)).collect();
        return Ok(json(&ReductionReport {
            alpha: JsonInt(r.alpha.clone()),
            beta: JsonInt(r.beta.clone()),
            gamma: JsonInt(r.gamma.clone()),
            trail: r.trail.iter().map(|s| TrailStep { change: s.description.clone(), x: rows(&s.x), z: rows(&s.z) }).collect(),
        }));
    }
    let mut out = format!("(alpha, beta, gamma) = ({}, {}, {})\n", r.alpha, r.beta, r.gamma);
    for (i, s) in r.trail.iter().enumerate() {
        writeln!(out, "{}. {}", i + 1, s.description).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct BqfReport {
    found: bool,
    matrix: Option<[[JsonInt; 2]; 2]>,
    sign: Option<i8>,
}

fn bqf_equiv(phi: &str, psi: &str, lambda: &Int, bound: u32, as_json: bool) -> CmdResult {
    let (phi, psi) = (parse_form(phi, "--phi")?, parse_form(psi, "--psi")?);
    let w = bqf_lambda_equivalent(&phi, &psi, lambda, bound)?;
    if as_json {
        return Ok(json(&BqfReport {
            found: w.is_some(),
            matrix: w.as_ref().map(|w| w.matrix.clone().map(|r| r.map(JsonInt))),
            sign: w.as_ref().map(|w| w.sign),
        }));
    }
    Ok(match w {
        Some(w) => {
            let [[a, b], [c, d]] = &w.matrix;
            format!("[[{a}, {b}], [{c}, {d}]] sign {}\n", if w.sign > 0 { "+1" } else { "-1" })
        }
        None => "NOT-FOUND-WITHIN-BOUND\n".to_string(),
    })
}

#[derive(Serialize)]
struct In1Report {
    divisors: Vec<JsonInt>,
    free_rank: usize,
}

fn classify(g: &TwoStepGroup, as_json: bool) -> CmdResult {
    let c = classify_in1(g)?;
    if as_json {
        return Ok(json(&In1Report { divisors: ints(&c.divisors), free_rank: c.free_rank }));
    }
    Ok(format!("G({}) x Z^{}\n", join(&c.divisors), c.free_rank))
}

#[derive(Serialize)]
struct AbelianReport {
    modulus: u64,
    count: u64,
    closed_form: JsonInt,
}

fn oracle_abelian(matrix: &str, modulus: u64, as_json: bool) -> CmdResult {
    let a = parse_matrix(matrix)?;
    let count = abelian_twisted_classes(&a, modulus, budget()?)?;
    let closed = abelian_closed_form(&a, modulus);
    if Int::from(count) != closed {
        return Err(Failure::Domain(format!("union-find count {count} differs from closed form {closed}")));
    }
    if as_json {
        return Ok(json(&AbelianReport { modulus, count, closed_form: JsonInt(closed) }));
    }
    Ok(format!("{count}\n"))
}

#[derive(Serialize)]
struct QuotientReport {
    modulus: u64,
    order: u64,
    union_find: u64,
    burnside: u64,
}

fn oracle_quotient(g: TwoStepGroup, e: &EndoData, modulus: u64, as_json: bool) -> CmdResult {
    let q = FiniteQuotientSpec::with_budget(g, modulus, budget()?)?;
    let c = finite_quotient_counts(&q, e)?;
    if c.union_find != c.burnside {
        return Err(Failure::Domain(format!("union-find count {} differs from Burnside count {}", c.union_find, c.burnside)));
    }
    if as_json {
        return Ok(json(&QuotientReport { modulus, order: c.order, union_find: c.union_find, burnside: c.burnside }));
    }
    Ok(format!("{}\n", c.union_find))
}

#[derive(Serialize)]
struct StabilizeRow {
    modulus: u64,
    count: u64,
}

#[derive(Serialize)]
struct StabilizeReport {
    rows: Vec<StabilizeRow>,
    formula: JsonExt,
}

fn oracle_stabilize(g: &TwoStepGroup, e: &EndoData, mods: &str, as_json: bool) -> CmdResult {
    let moduli = mods
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("--mods: {s:?} is not a modulus"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let rep = stabilization_report(g, e, &moduli, budget()?)?;
    if as_json {
        return Ok(json(&StabilizeReport {
            rows: rep.rows.iter().map(|r| StabilizeRow { modulus: r.modulus, count: r.count }).collect(),
            formula: (&rep.formula).into(),
        }));
    }
    let mut out = String::from("N\tcount\tR\n");
    for r in &rep.rows {
        writeln!(out, "{}\t{}\t{}", r.modulus, r.count, rep.formula).unwrap();
    }
    Ok(out)
}

fn dispatch(ctx: &mut Context<'_>, command: Command) -> CmdResult {
    match command {
        Command::Group { command: GroupCommand::Info { group, json } } => group_info(&ctx.group(&group)?, json),
        Command::Aut { command: AutCommand::Check { group, aut, json } } => {
            let g = ctx.group(&group)?;
            let e = ctx.aut(&g, &aut)?;
            aut_check(&g, &e, json)
        }
        Command::Reid { group, aut, json } => {
            let g = ctx.group(&group)?;
            let e = ctx.aut(&g, &aut)?;
            reid(&g, &e, json)
        }
        Command::Spectrum { group, height, limit, json } => spectrum(&ctx.group(&group)?, height, limit, json),
        Command::Family { command: FamilyCommand::Make { kind, params } } => family_make(&kind, &params),
        Command::Family { command: FamilyCommand::Aut { kind, group, k, l } } => family_aut(ctx, &kind, group, k, l),
        Command::ReduceI32 { alpha, beta, t13, t23, json } => reduce(&I32Intermediate::new(alpha, beta, t13, t23), json),
        Command::Bqf { command: BqfCommand::Equiv { phi, psi, lambda, bound, json } } => {
            bqf_equiv(&phi, &psi, &lambda, bound, json)
        }
        Command::ClassifyIn1 { group, json } => classify(&ctx.group(&group)?, json),
        Command::Oracle { command } => match command {
            OracleCommand::Abelian { matrix, modulus, json } => oracle_abelian(&matrix, modulus, json),
            OracleCommand::Quotient { group, aut, modulus, json } => {
                let g = ctx.group(&group)?;
                let e = ctx.aut(&g, &aut)?;
                oracle_quotient(g, &e, modulus, json)
            }
            OracleCommand::Stabilize { group, aut, mods, json } => {
                let g = ctx.group(&group)?;
                let e = ctx.aut(&g, &aut)?;
                oracle_stabilize(&g, &e, &mods, json)
            }
        },
    }
}

/// Runs one command, with `stdin` supplying standard input on demand.
pub fn run_with_stdin<I, S>(argv: I, stdin: &mut (dyn FnMut() -> std::io::Result<String> + Send)) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::ok(text),
                _ => CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut ctx = Context { stdin };
    let outcome = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&mut ctx, cli.command)),
            Err(e) => Err(Failure::Domain(format!("thread pool: {e}"))),
        },
        None => dispatch(&mut ctx, cli.command),
    };
    match outcome {
        Ok(stdout) => CommandResult::ok(stdout),
        Err(Failure::Usage(msg)) => CommandResult::fail(EXIT_USAGE, msg),
        Err(Failure::Domain(msg)) => CommandResult::fail(EXIT_DOMAIN, msg),
    }
}

/// Runs one command, reading the process standard input when needed.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut stdin = || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    };
    run_with_stdin(argv, &mut stdin)
}

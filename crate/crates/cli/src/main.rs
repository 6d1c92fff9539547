//! Command-line front end. Every subcommand prints a human-readable summary
//! and optionally writes a machine-readable JSON side file (--json). Exit
//! codes: 0 success, 1 negative verdict (infeasible, verification failure,
//! repair mismatch, exhausted search), 2 usage or file errors.

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rsrepair::gfield::{Elt, FieldCtx};
use rsrepair::goodpair::{
    self, derive_seed, feasible, search_good_pair, subfield_complement_pair, success_bound,
    FeasibilityClass, SchemeParams, SearchOutcome,
};
use rsrepair::json::{
    self, ctx_from_q, elt_from_dto, elt_to_dto, pair_from_dto, pair_to_dto, read_json,
    scheme_from_dto, scheme_to_dto, transcript_to_dto, write_json, ElemDto,
};
use rsrepair::repair::{
    composite_scheme_subfield, execute_repair, naive_bandwidth, scheme_from_pair, shorten_scheme,
    subspace_poly_scheme, verify_scheme, RepairScheme,
};
use rsrepair::rscode::rs_on_subspace;
use rsrepair::subspace::{all_subspaces, subfield_subspace, ENUM_GUARD};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rsrepair", version, about = "Linear repair schemes for Reed-Solomon codes on subspaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify scheme parameters and print the success-probability bound
    Feasible(FeasibleArgs),
    /// Search for a good pair (U, V) and write it to a pair file
    Search(SearchArgs),
    /// Build a repair scheme from a pair file or the composite construction
    Build(BuildArgs),
    /// Re-check a scheme file against the repair criterion
    Verify(VerifyArgs),
    /// Repair one node of a codeword and write the transcript
    Repair(RepairArgs),
    /// Repair every node over random codewords and report exactness
    Simulate(SimulateArgs),
    /// Reproduce the bandwidth comparison table
    Report(ReportArgs),
    /// Exact bad-set census over all subspaces at small parameters
    Badscan(BadscanArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Subfield size q (a prime power); alternative to --p/--e
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic (with --e); ignored when --q is given
    #[arg(long)]
    p: Option<u64>,
    /// Subfield extension degree over the prime field
    #[arg(long, default_value_t = 1)]
    e: usize,
    /// Extension degree of the symbol field over F_q
    #[arg(long)]
    m: usize,
}

impl FieldArgs {
    fn ctx(&self) -> Result<FieldCtx, String> {
        match (self.q, self.p) {
            (Some(q), _) => ctx_from_q(q, self.m).map_err(|e| e.to_string()),
            (None, Some(p)) => FieldCtx::new(p, self.e, self.m).map_err(|e| e.to_string()),
            (None, None) => Err("give either --q or --p (with optional --e)".into()),
        }
    }
}

#[derive(Args)]
struct FeasibleArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
    /// Subfield linearity degree of the intended U
    #[arg(long, default_value_t = 1)]
    a: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
    /// Draw U as an F_{q^a}-linear subspace (a must divide d)
    #[arg(long, default_value_t = 1)]
    a: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    trials: usize,
    /// Use the deterministic power-basis pair instead of random search
    #[arg(long)]
    explicit: bool,
    /// Pair file to write
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Pair file produced by `search`
    #[arg(long, conflicts_with = "composite")]
    pair: Option<PathBuf>,
    /// Scheme family for a pair file: the pair construction or the
    /// annihilator baseline on the same code
    #[arg(long, default_value = "pair", value_parser = ["pair", "annihilator"])]
    kind: String,
    /// Build the composite subfield scheme instead of reading a pair
    #[arg(long, requires = "d", requires = "s")]
    composite: bool,
    #[command(flatten)]
    field: OptionalFieldArgs,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Shorten away this many evaluation points (largest values first)
    #[arg(long, default_value_t = 0)]
    shorten: usize,
    /// Scheme file to write
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct OptionalFieldArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    e: usize,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RepairArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long)]
    node: usize,
    /// JSON file holding the full codeword as an array of elements
    #[arg(long)]
    codeword: PathBuf,
    /// Transcript file to write
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long, default_value_t = 100)]
    codewords: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BadscanArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
    /// Cap on every enumeration
    #[arg(long, default_value_t = 1 << 22)]
    guard: u128,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Feasible(a) => cmd_feasible(a),
        Cmd::Search(a) => cmd_search(a),
        Cmd::Build(a) => cmd_build(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Repair(a) => cmd_repair(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Report(a) => cmd_report(a),
        Cmd::Badscan(a) => cmd_badscan(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn side_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), String> {
    if let Some(p) = path {
        write_json(p, value).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn class_name(c: FeasibilityClass) -> &'static str {
    match c {
        FeasibilityClass::Q3Rate => "q3-rate",
        FeasibilityClass::Q2Slack => "q2-slack",
        FeasibilityClass::Q2Subfield => "q2-subfield",
        FeasibilityClass::Infeasible => "infeasible",
    }
}

fn class_condition(c: FeasibilityClass) -> &'static str {
    match c {
        FeasibilityClass::Q3Rate => "q >= 3 and ms >= d(m-r)",
        FeasibilityClass::Q2Slack => "q = 2, r >= 2 and ms >= d(m-r) + 1",
        FeasibilityClass::Q2Subfield => "q = 2, ms = d(m-r), U linear over a common subfield",
        FeasibilityClass::Infeasible => "no feasibility condition applies",
    }
}

fn cmd_feasible(a: FeasibleArgs) -> Result<u8, String> {
    let ctx = a.field.ctx()?;
    let params = SchemeParams { q: ctx.q(), m: ctx.m(), d: a.d, s: a.s, r: a.r };
    params.validate(&ctx).map_err(|e| e.to_string())?;
    let class = feasible(&params, a.a);
    println!("condition: {}", class_condition(class));
    let bound = if class == FeasibilityClass::Infeasible {
        println!("infeasible");
        None
    } else {
        let b = success_bound(&params, a.a);
        println!("bound: {b:.6}");
        Some(b)
    };
    side_json(
        &a.json,
        &json!({
            "params": params, "a": a.a,
            "class": class_name(class), "bound": bound,
        }),
    )?;
    Ok(if class == FeasibilityClass::Infeasible { 1 } else { 0 })
}

fn cmd_search(a: SearchArgs) -> Result<u8, String> {
    let ctx = a.field.ctx()?;
    let params = SchemeParams { q: ctx.q(), m: ctx.m(), d: a.d, s: a.s, r: a.r };
    params.validate(&ctx).map_err(|e| e.to_string())?;
    if a.explicit {
        let pair = subfield_complement_pair(&ctx, a.d, a.r, a.s).map_err(|e| e.to_string())?;
        write_json(&a.out, &pair_to_dto(&ctx, &pair)).map_err(|e| e.to_string())?;
        println!("explicit pair written to {}", a.out.display());
        side_json(&a.json, &json!({"found": true, "trials": 0, "explicit": true}))?;
        return Ok(0);
    }
    if !a.d.is_multiple_of(a.a) {
        return Err("--a must divide --d".into());
    }
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(a.seed, u64::MAX));
    let u = subfield_subspace(&ctx, a.a, a.d / a.a, &mut urng).map_err(|e| e.to_string())?;
    match search_good_pair(&ctx, &u, &params, a.trials, a.seed).map_err(|e| e.to_string())? {
        SearchOutcome::Found { pair, trials_used } => {
            write_json(&a.out, &pair_to_dto(&ctx, &pair)).map_err(|e| e.to_string())?;
            println!("good pair found in {trials_used} trials, written to {}", a.out.display());
            side_json(&a.json, &json!({"found": true, "trials": trials_used}))?;
            Ok(0)
        }
        SearchOutcome::Exhausted { trials, bound } => {
            println!("no good pair in {trials} trials (per-trial bound {bound:.6})");
            side_json(&a.json, &json!({"found": false, "trials": trials, "bound": bound}))?;
            Ok(1)
        }
    }
}

/// Indices of the t largest evaluation points by field value.
fn largest_positions(ctx: &FieldCtx, scheme: &RepairScheme, t: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scheme.code.n()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(ctx.value(&scheme.code.eval_points[i])));
    idx.truncate(t);
    idx
}

fn cmd_build(a: BuildArgs) -> Result<u8, String> {
    let (ctx, mut scheme) = if a.composite {
        let m = a.field.m.ok_or("--composite needs --m")?;
        let ctx = match (a.field.q, a.field.p) {
            (Some(q), _) => ctx_from_q(q, m).map_err(|e| e.to_string())?,
            (None, Some(p)) => FieldCtx::new(p, a.field.e, m).map_err(|e| e.to_string())?,
            _ => return Err("give either --q or --p".into()),
        };
        let scheme = composite_scheme_subfield(&ctx, a.d.unwrap(), a.s.unwrap()).map_err(|e| e.to_string())?;
        (ctx, scheme)
    } else {
        let pair_path = a.pair.as_ref().ok_or("give --pair or --composite")?;
        let dto: json::GoodPairDto = read_json(pair_path).map_err(|e| e.to_string())?;
        let (ctx, pair) = pair_from_dto(&dto).map_err(|e| e.to_string())?;
        let scheme = match a.kind.as_str() {
            "pair" => scheme_from_pair(&ctx, &pair).map_err(|e| e.to_string())?,
            _ => {
                let n = pair.u.size(&ctx);
                let qs = (ctx.q() as u128).pow(pair.params.s as u32);
                let code = rs_on_subspace(&ctx, &pair.u, (n - qs) as usize, ENUM_GUARD)
                    .map_err(|e| e.to_string())?;
                subspace_poly_scheme(&ctx, &code, pair.params.s).map_err(|e| e.to_string())?
            }
        };
        (ctx, scheme)
    };
    if a.shorten > 0 {
        let pos = largest_positions(&ctx, &scheme, a.shorten);
        scheme = shorten_scheme(&ctx, &scheme, &pos).map_err(|e| e.to_string())?;
    }
    let report = verify_scheme(&ctx, &scheme).map_err(|e| e.to_string())?;
    if !report.ok {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return Ok(1);
    }
    write_json(&a.out, &scheme_to_dto(&ctx, &scheme)).map_err(|e| e.to_string())?;
    let bits = report.bits_per_node.first().copied().unwrap_or(0.0);
    println!(
        "[{},{}] scheme over GF({}^{}), r = {}, {} bits per repair, written to {}",
        scheme.code.n(),
        scheme.code.k,
        ctx.q(),
        ctx.m(),
        scheme.r,
        bits,
        a.out.display()
    );
    side_json(
        &a.json,
        &json!({
            "n": scheme.code.n(), "k": scheme.code.k, "r": scheme.r, "bits": bits,
        }),
    )?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, String> {
    let dto: json::SchemeDto = read_json(&a.scheme).map_err(|e| e.to_string())?;
    let (ctx, scheme) = scheme_from_dto(&dto).map_err(|e| e.to_string())?;
    let report = verify_scheme(&ctx, &scheme).map_err(|e| e.to_string())?;
    side_json(
        &a.json,
        &json!({"ok": report.ok, "violations": report.violations, "bits_per_node": report.bits_per_node}),
    )?;
    if report.ok {
        println!("scheme ok: {} nodes, r = {}", scheme.nodes.len(), scheme.r);
        Ok(0)
    } else {
        for v in &report.violations {
            println!("violation: {v}");
        }
        Ok(1)
    }
}

fn cmd_repair(a: RepairArgs) -> Result<u8, String> {
    let dto: json::SchemeDto = read_json(&a.scheme).map_err(|e| e.to_string())?;
    let (ctx, scheme) = scheme_from_dto(&dto).map_err(|e| e.to_string())?;
    let word_dto: Vec<ElemDto> = read_json(&a.codeword).map_err(|e| e.to_string())?;
    let word: Vec<Elt> = word_dto
        .iter()
        .map(|d| elt_from_dto(&ctx, d))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let t = execute_repair(&ctx, &scheme, &word, a.node).map_err(|e| e.to_string())?;
    let exact = t.recovered == word[a.node];
    println!(
        "node {}: {} ({} bits downloaded)",
        a.node,
        if exact { "recovered exactly" } else { "MISMATCH" },
        t.bits
    );
    if let Some(out) = &a.out {
        write_json(out, &transcript_to_dto(&ctx, &t)).map_err(|e| e.to_string())?;
    }
    side_json(
        &a.json,
        &json!({"node": a.node, "exact": exact, "bits": t.bits, "recovered": elt_to_dto(&ctx, &t.recovered)}),
    )?;
    Ok(if exact { 0 } else { 1 })
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8, String> {
    let dto: json::SchemeDto = read_json(&a.scheme).map_err(|e| e.to_string())?;
    let (ctx, scheme) = scheme_from_dto(&dto).map_err(|e| e.to_string())?;
    let n = scheme.code.n();
    let mut rows = Vec::with_capacity(n);
    let mut all_ok = true;
    for node in 0..n {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(a.seed, node as u64));
        let mut ok = 0usize;
        let mut bits = 0.0;
        for _ in 0..a.codewords {
            let c = scheme.code.random_codeword(&ctx, &mut rng);
            let t = execute_repair(&ctx, &scheme, &c, node).map_err(|e| e.to_string())?;
            if t.recovered == c[node] {
                ok += 1;
            }
            bits = t.bits;
        }
        all_ok &= ok == a.codewords;
        println!("node {node}: {ok}/{} exact, {bits} bits", a.codewords);
        rows.push(json!({"node": node, "success": ok, "codewords": a.codewords, "bits": bits}));
    }
    println!("{}", if all_ok { "all repairs exact" } else { "REPAIR FAILURES PRESENT" });
    side_json(&a.json, &json!({"rows": rows, "all_exact": all_ok}))?;
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_report(a: ReportArgs) -> Result<u8, String> {
    let mut rows: Vec<(String, u64, usize, usize, usize, String, String)> = Vec::new();
    let mut side = Vec::new();

    // 8-bit symbol field: composite scheme shortened to [14,10], plus the
    // naive baseline and the imbalanced figure we do not reproduce
    let ctx8 = FieldCtx::new(2, 1, 8).map_err(|e| e.to_string())?;
    let full = composite_scheme_subfield(&ctx8, 4, 2).map_err(|e| e.to_string())?;
    let pos = largest_positions(&ctx8, &full, 2);
    let short = shorten_scheme(&ctx8, &full, &pos).map_err(|e| e.to_string())?;
    let bits = simulate_bits(&ctx8, &short, 3, a.seed)?;
    rows.push(("composite".into(), 2, 8, short.code.n(), short.code.k, short.r.to_string(), fmt_bits(bits)));
    side.push(json!({"method": "composite", "bits": bits}));
    let naive8 = naive_bandwidth(&ctx8, &short.code);
    simulate_naive(&ctx8, &short.code, a.seed)?;
    rows.push(("naive".into(), 2, 8, short.code.n(), short.code.k, "-".into(), fmt_bits(naive8)));
    side.push(json!({"method": "naive", "bits": naive8}));
    rows.push((
        "imbalanced".into(),
        2,
        8,
        short.code.n(),
        short.code.k,
        "-".into(),
        "54 (not reproduced: imbalanced download variant out of scope)".into(),
    ));
    side.push(json!({"method": "imbalanced", "bits": null, "note": "reported value 54; out of scope"}));

    // 15-bit symbol field: searched pair on an F_8-linear U, naive, and the
    // uniform annihilator baseline
    let ctx15 = FieldCtx::new(2, 1, 15).map_err(|e| e.to_string())?;
    let params = SchemeParams { q: 2, m: 15, d: 6, s: 4, r: 5 };
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(a.seed, u64::MAX));
    let u = subfield_subspace(&ctx15, 3, 2, &mut urng).map_err(|e| e.to_string())?;
    let pair = match search_good_pair(&ctx15, &u, &params, 64, a.seed).map_err(|e| e.to_string())? {
        SearchOutcome::Found { pair, .. } => pair,
        SearchOutcome::Exhausted { .. } => return Err("pair search exhausted".into()),
    };
    let scheme15 = scheme_from_pair(&ctx15, &pair).map_err(|e| e.to_string())?;
    let bits15 = simulate_bits(&ctx15, &scheme15, 2, a.seed)?;
    rows.push(("pair".into(), 2, 15, scheme15.code.n(), scheme15.code.k, scheme15.r.to_string(), fmt_bits(bits15)));
    side.push(json!({"method": "pair", "bits": bits15}));
    let naive15 = naive_bandwidth(&ctx15, &scheme15.code);
    simulate_naive(&ctx15, &scheme15.code, a.seed)?;
    rows.push(("naive".into(), 2, 15, scheme15.code.n(), scheme15.code.k, "-".into(), fmt_bits(naive15)));
    side.push(json!({"method": "naive", "bits": naive15}));
    let dm15 = subspace_poly_scheme(&ctx15, &scheme15.code, 4).map_err(|e| e.to_string())?;
    let bits_dm = simulate_bits(&ctx15, &dm15, 1, a.seed)?;
    rows.push(("annihilator".into(), 2, 15, dm15.code.n(), dm15.code.k, dm15.r.to_string(), fmt_bits(bits_dm)));
    side.push(json!({"method": "annihilator", "bits": bits_dm}));

    println!("{:<12} {:>2} {:>3} {:>3} {:>3} {:>3}  bits", "method", "q", "m", "n", "k", "r");
    for (method, q, m, n, k, r, bits) in &rows {
        println!("{method:<12} {q:>2} {m:>3} {n:>3} {k:>3} {r:>3}  {bits}");
    }
    side_json(&a.json, &json!({"rows": side}))?;
    Ok(0)
}

fn fmt_bits(b: f64) -> String {
    if b == b.trunc() {
        format!("{}", b as u64)
    } else {
        format!("{b}")
    }
}

/// Repair a few random codewords on every node; all must be exact and all
/// transcripts must report the same bit count, which is returned.
fn simulate_bits(ctx: &FieldCtx, scheme: &RepairScheme, codewords: usize, seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0x5151));
    let mut bits = None;
    for _ in 0..codewords {
        let c = scheme.code.random_codeword(ctx, &mut rng);
        for node in 0..scheme.code.n() {
            let t = execute_repair(ctx, scheme, &c, node).map_err(|e| e.to_string())?;
            if t.recovered != c[node] {
                return Err(format!("repair mismatch at node {node}"));
            }
            match bits {
                None => bits = Some(t.bits),
                Some(b) if (b - t.bits).abs() > 1e-9 => return Err("bandwidth not uniform".into()),
                _ => {}
            }
        }
    }
    Ok(bits.unwrap_or(0.0))
}

fn simulate_naive(ctx: &FieldCtx, code: &rsrepair::rscode::RsCode, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0x4e41));
    let c = code.random_codeword(ctx, &mut rng);
    for node in 0..code.n() {
        let t = rsrepair::repair::naive_repair(ctx, code, &c, node).map_err(|e| e.to_string())?;
        if t.recovered != c[node] {
            return Err(format!("naive repair mismatch at node {node}"));
        }
    }
    Ok(())
}

fn cmd_badscan(a: BadscanArgs) -> Result<u8, String> {
    let ctx = a.field.ctx()?;
    let m = ctx.m();
    let subs = all_subspaces(&ctx, a.d, a.guard).map_err(|e| e.to_string())?;
    let params = SchemeParams { q: ctx.q(), m, d: a.d, s: a.s, r: a.r };
    let bound = goodpair::bad_set_bound(&params, 1);
    let expect_zero = a.r >= m - a.s;
    let mut rows = Vec::new();
    let mut ok = true;
    for u in &subs {
        let census = goodpair::bad_set(&ctx, u, a.s, a.r, a.guard, false).map_err(|e| e.to_string())?;
        let basis: Vec<u128> = u.basis().iter().map(|b| ctx.value(b)).collect();
        let this_ok = if expect_zero {
            census.count == 0
        } else {
            census.count > 0 && (census.count as f64) < bound
        };
        ok &= this_ok;
        println!("U = {basis:?}: |Bad(U)| = {}", census.count);
        rows.push(json!({"basis": basis, "count": census.count}));
    }
    println!(
        "{} subspaces scanned; dichotomy ({}) {}",
        subs.len(),
        if expect_zero { "all zero" } else { "all positive, below bound" },
        if ok { "holds" } else { "VIOLATED" }
    );
    side_json(&a.json, &json!({"rows": rows, "bound": bound, "ok": ok}))?;
    Ok(if ok { 0 } else { 1 })
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use etafrob::bridge::{
    cone_eta_reordering, eta_null_complete, phi, phi_mor, plain, psi, psi_inv, psi_inv_mor, psi_mor, theta_extend,
    theta_triangle_check, totalize, totalize_complex, totalize_map, totalize_mor, Convention, DeltaComplex, DeltaMap,
    GMorphism, GSystem,
};
use etafrob::complex::{cone, eta_map, homotopic};
use etafrob::fault::{with_mutant, Mutant};
use etafrob::frobenius::{
    check_ex0, cover_deflation, env_inflation, eta_homotopic, is_eta_conflation, standard_conflation,
};
use etafrob::gen::{random_complex, random_delta, random_gsystem, Columns, Sampler, Shape};
use etafrob::io::{InstanceFile, Kind, MapPair, Named};
use etafrob::suite::{axiom_checks, run_suite, summarize, SuiteConfig, Verdict, DEFAULT_RINGS};
use etafrob::{ChainMap, CoeffRing, Complex, Error, Graded, ScalarEta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Checks, generators and the property suite for η-twisted exact structures
/// on complexes.
///
/// Exit status: 0 on success, 1 when a check fails, 2 on bad input.
/// Random instances come from ChaCha8 seeded with `seed_from_u64`.
#[derive(Parser)]
#[command(name = "etafrob", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one operation on an instance file and print a JSON record.
    Check {
        file: PathBuf,
        /// is-eta-conflation | eta-homotopic | totalize | theta-extend | phi | triangle-check | axioms
        #[arg(long)]
        op: String,
        /// Run with a sign fault injected, to replay a failure recorded under it.
        #[arg(long)]
        mutant: Option<Mutant>,
    },
    /// Write a random instance.
    Gen {
        #[arg(long)]
        seed: u64,
        /// scalar-eta(RING,R,MAX_LEN,MAX_RANK) | graded(RING,MAX_LEN,MAX_RANK)
        /// | gsystem(RING,MAX_LEN,MAX_RANK,SPAN,cgra|ga) | delta(RING,LEN,RANK,WIDTH,degree-zero|arbitrary).
        /// Trailing arguments may be omitted.
        #[arg(long)]
        profile: String,
        /// Ring used when the profile does not name one.
        #[arg(long, env = "ETAFROB_RING")]
        ring: Option<CoeffRing>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the property suite, printing one JSON record per trial.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Rings to cycle through; defaults to Z, Z/4, Z/8, Z/9, F5.
        #[arg(long, env = "ETAFROB_RING", value_delimiter = ',')]
        ring: Vec<CoeffRing>,
        /// Only these properties.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Run with a sign fault injected.
        #[arg(long)]
        mutant: Option<Mutant>,
        /// Where instance files of failing trials are written.
        #[arg(long, default_value = "etafrob-failures")]
        out_dir: PathBuf,
    },
}

/// Why a command stopped: bad input (exit 2) or a failed check (exit 1).
enum Stop {
    Input(String),
    Failed,
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Input(e.to_string())
    }
}

impl From<std::io::Error> for Stop {
    fn from(e: std::io::Error) -> Self {
        Stop::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Check { file, op, mutant } => with_mutant(mutant, || cmd_check(&file, &op)),
        Command::Gen { seed, profile, ring, output } => cmd_gen(seed, &profile, ring, output.as_deref()),
        Command::Suite { seed, trials, ring, only, mutant, out_dir } => {
            cmd_suite(seed, trials, ring, only, mutant, &out_dir)
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Stop::Failed) => ExitCode::from(1),
        Err(Stop::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// The outcome of a check: a verdict, and a witness or obstruction.
struct Answer {
    verdict: &'static str,
    detail: Value,
}

impl Answer {
    fn pass(witness: Value) -> Self {
        Answer { verdict: "pass", detail: json!({ "witness": witness }) }
    }

    fn of(ok: bool, witness: Value) -> Self {
        Answer { verdict: if ok { "pass" } else { "fail" }, detail: json!({ "witness": witness }) }
    }

    fn none() -> Self {
        Answer { verdict: "none", detail: json!({}) }
    }

    /// Computation errors mean the check failed; obstructions are reported.
    fn from_err(e: Error) -> Self {
        match e {
            Error::Obstruction(o) => Answer { verdict: "obstructed", detail: json!({ "obstruction": o }) },
            e => Answer { verdict: "fail", detail: json!({ "error": e.to_string() }) },
        }
    }
}

fn cmd_check(path: &Path, op: &str) -> Result<(), Stop> {
    let text = fs::read_to_string(path)?;
    let file = InstanceFile::parse(&text)?;
    let start = Instant::now();
    let answer = run_op(&file, op)?;
    let mut record = json!({
        "name": op,
        "instance": path.display().to_string(),
        "kind": file.kind.name(),
        "ring": file.ring,
        "verdict": answer.verdict,
        "wall-ms": start.elapsed().as_secs_f64() * 1e3,
    });
    if let Value::Object(extra) = answer.detail {
        record.as_object_mut().unwrap().extend(extra);
    }
    println!("{record}");
    if answer.verdict == "pass" {
        Ok(())
    } else {
        Err(Stop::Failed)
    }
}

fn unsupported(op: &str, kind: Kind) -> Stop {
    Stop::Input(format!("operation '{op}' does not apply to a {} instance", kind.name()))
}

/// Runs `$body` with `$cat` bound to the file's base category.
macro_rules! with_category {
    ($file:expr, $cat:ident => $body:expr) => {{
        let file = $file;
        match file.scalar_category()? {
            Some($cat) => $body,
            None if file.category.is_some() => {
                let $cat = Graded::new(file.ring);
                $body
            }
            None => Err(Stop::Input("instance names no base category".into())),
        }
    }};
}

fn run_op(file: &InstanceFile, op: &str) -> Result<Answer, Stop> {
    match (op, file.kind) {
        (
            "is-eta-conflation" | "eta-homotopic" | "axioms",
            Kind::Complex | Kind::ChainMap | Kind::ChainMapPair | Kind::ExactPair,
        ) => {
            with_category!(file, cat => complex_op(&cat, file, op))
        }
        ("totalize", Kind::Complex) if file.category == Some(etafrob::io::Category::Graded) => {
            let g = Graded::new(file.ring);
            let v: Complex<Graded> = valid_complex(&g, file)?;
            Ok(checked(|| {
                let t = totalize_complex(&g, &v)?;
                let eta = totalize_map(&g, &eta_map(&g, &v))? == ChainMap::identity(&plain(file.ring), &t);
                let cone = cone_eta_reordering(&g, &v).is_ok();
                Ok((
                    t.validate(&plain(file.ring)) && eta && cone,
                    json!({ "total": t, "eta-is-identity": eta, "cone-of-eta": cone }),
                ))
            }))
        }
        ("totalize", Kind::Gsystem) => {
            let x: GSystem = file.decode()?;
            require(x.validate(), "system violates its structure equation")?;
            Ok(checked(|| {
                let (y, round_trip) = match x.convention() {
                    Convention::GA => {
                        let y = psi(&x)?;
                        let back = psi_inv(&y)? == x;
                        (y, back)
                    }
                    Convention::CgrA => (x.clone(), psi(&psi_inv(&x)?)? == x),
                };
                let t = totalize(&y)?;
                Ok((t.validate(&plain(file.ring)) && round_trip, json!({ "total": t, "round-trip": round_trip })))
            }))
        }
        ("totalize", Kind::Gmorphism) => {
            let f: GMorphism = file.decode()?;
            require(f.validate(), "morphism does not commute with the differentials")?;
            Ok(checked(|| {
                let (g, round_trip) = match f.source().convention() {
                    Convention::GA => {
                        let g = psi_mor(&f)?;
                        let back = psi_inv_mor(&g)? == f;
                        (g, back)
                    }
                    Convention::CgrA => (f.clone(), psi_mor(&psi_inv_mor(&f)?)? == f),
                };
                let t = totalize_mor(&g)?;
                let c = plain(file.ring);
                let unital = totalize_mor(&GMorphism::identity(g.source()))?.then(&c, &t)? == t
                    && t.then(&c, &totalize_mor(&GMorphism::identity(g.target()))?)? == t;
                let ok = t.validate(&c) && round_trip && unital;
                Ok((ok, json!({ "total": t, "round-trip": round_trip, "identities": unital })))
            }))
        }
        ("eta-homotopic", Kind::Gmorphism) => {
            let f: GMorphism = file.decode()?;
            require(f.validate(), "morphism does not commute with the differentials")?;
            let f = if f.source().convention() == Convention::GA { psi_mor(&f)? } else { f };
            Ok(answer(eta_null_complete(&f, [], []).map(|c| json!(c))))
        }
        ("theta-extend", Kind::DeltaComplex) => {
            let x = valid_delta(file)?;
            Ok(answer(theta_extend(&x).map(|g| json!(g))))
        }
        ("phi", Kind::DeltaComplex) => {
            let x = valid_delta(file)?;
            Ok(checked(|| {
                let t = phi(&x)?;
                let ok = t.validate(&plain(file.ring)) && t == totalize(&theta_extend(&x)?)?;
                Ok((ok, json!(t)))
            }))
        }
        ("phi", Kind::DeltaMap) => {
            let a: DeltaMap = file.decode()?;
            Ok(checked(|| {
                let c = plain(file.ring);
                let t = phi_mor(&a)?;
                let null_homotopic = homotopic(&c, &t, &ChainMap::zero(t.source(), t.target()))?.is_some();
                Ok((t.validate(&c), json!({ "map": t, "null-homotopic": null_homotopic })))
            }))
        }
        ("triangle-check", Kind::DeltaMap) => {
            let a: DeltaMap = file.decode()?;
            Ok(match theta_triangle_check(&a) {
                Ok(t) => Answer::of(t.holds(), json!(t)),
                Err(e) => Answer::from_err(e),
            })
        }
        (
            "is-eta-conflation" | "eta-homotopic" | "totalize" | "theta-extend" | "phi" | "triangle-check" | "axioms",
            kind,
        ) => Err(unsupported(op, kind)),
        _ => Err(Stop::Input(format!("unknown operation '{op}'"))),
    }
}

fn answer(r: etafrob::Result<Value>) -> Answer {
    match r {
        Ok(v) => Answer::pass(v),
        Err(e) => Answer::from_err(e),
    }
}

/// A check that computes a witness and decides whether it is correct.
fn checked(f: impl FnOnce() -> etafrob::Result<(bool, Value)>) -> Answer {
    match f() {
        Ok((ok, w)) => Answer::of(ok, w),
        Err(e) => Answer::from_err(e),
    }
}

fn require(ok: bool, msg: &str) -> Result<(), Stop> {
    if ok {
        Ok(())
    } else {
        Err(Stop::Input(msg.into()))
    }
}

fn valid_delta(file: &InstanceFile) -> Result<DeltaComplex, Stop> {
    let x: DeltaComplex = file.decode()?;
    require(x.validate()?, "columns do not satisfy the bicomplex relations up to homotopy")?;
    Ok(x)
}

fn valid_complex<B: Named>(cat: &B, file: &InstanceFile) -> Result<Complex<B>, Stop> {
    let x: Complex<B> = file.decode()?;
    require(x.validate(cat), "differentials do not square to zero")?;
    Ok(x)
}

fn valid_pair<B: Named>(cat: &B, file: &InstanceFile) -> Result<(ChainMap<B>, ChainMap<B>), Stop> {
    let pair: MapPair<B> = file.decode()?;
    require(pair.first.validate(cat) && pair.second.validate(cat), "a map is not a chain map")?;
    Ok((pair.first, pair.second))
}

fn complex_op<B: Named>(cat: &B, file: &InstanceFile, op: &str) -> Result<Answer, Stop> {
    match (op, file.kind) {
        ("is-eta-conflation", Kind::ExactPair) => {
            let (i, p) = valid_pair(cat, file)?;
            Ok(match is_eta_conflation(cat, &i, &p) {
                Ok(Some(c)) => Answer::pass(json!({ "alpha": c.alpha, "t": c.t })),
                Ok(None) | Err(Error::NotExact { .. } | Error::NotChainwiseSplit { .. }) => Answer::none(),
                Err(e) => Answer::from_err(e),
            })
        }
        ("eta-homotopic", Kind::ChainMapPair) => {
            let (f, g) = valid_pair(cat, file)?;
            Ok(match eta_homotopic(cat, &f, &g) {
                Ok(Some(cert)) => Answer::pass(json!(cert)),
                Ok(None) => Answer::none(),
                Err(e) => Answer::from_err(e),
            })
        }
        ("axioms", Kind::Complex) => {
            let x = valid_complex(cat, file)?;
            let ex0 = check_ex0(cat, &x)?;
            let env = env_inflation(cat, &x).is_ok();
            let cover = cover_deflation(cat, &x).is_ok();
            Ok(Answer::of(ex0 && env && cover, json!({ "ex0": ex0, "env-inflation": env, "cover-deflation": cover })))
        }
        ("axioms", Kind::ChainMap) => {
            let f: ChainMap<B> = file.decode()?;
            require(f.validate(cat), "not a chain map")?;
            Ok(checked(|| {
                let cone = cone(cat, &f)?.complex.validate(cat);
                let conf = standard_conflation(cat, &f)?;
                let recognized = is_eta_conflation(cat, &conf.pair.i, &conf.pair.p)?.is_some();
                let ex0 = check_ex0(cat, f.source())? && check_ex0(cat, f.target())?;
                let w = json!({ "cone": cone, "standard-conflation-recognized": recognized, "ex0": ex0 });
                Ok((cone && recognized && ex0, w))
            }))
        }
        ("axioms", Kind::ChainMapPair) => {
            let (alpha, m) = valid_pair(cat, file)?;
            let checks = match axiom_checks(cat, &alpha, &m) {
                Ok(c) => c,
                Err(e) => return Ok(Answer::from_err(e)),
            };
            if checks.is_empty() {
                return Err(Stop::Input("the second map fits no axiom for the conflation of the first".into()));
            }
            let ok = checks.iter().all(|c| c.1);
            Ok(Answer::of(ok, checks.into_iter().map(|(n, b)| (n.to_string(), json!(b))).collect()))
        }
        (_, kind) => Err(unsupported(op, kind)),
    }
}

/// `name` or `name(a,b,...)`.
fn parse_profile(s: &str) -> Result<(&str, Vec<&str>), Stop> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s, Vec::new()));
    };
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Stop::Input(format!("unbalanced parentheses in profile '{s}'")))?;
    let args = if inner.trim().is_empty() { Vec::new() } else { inner.split(',').map(str::trim).collect() };
    Ok((s[..open].trim(), args))
}

fn arg<T: FromStr>(args: &[&str], i: usize, default: T, what: &str) -> Result<T, Stop> {
    match args.get(i) {
        None => Ok(default),
        Some(a) => a.parse().map_err(|_| Stop::Input(format!("bad {what} '{a}' in profile"))),
    }
}

fn draw_len(rng: &mut ChaCha8Rng, max_len: usize) -> usize {
    if max_len == 0 {
        0
    } else {
        rng.gen_range(1..=max_len)
    }
}

fn generate<B: Sampler + Named>(
    cat: &B,
    rng: &mut ChaCha8Rng,
    max_len: usize,
    max_rank: usize,
) -> etafrob::Result<InstanceFile> {
    let len = draw_len(rng, max_len);
    let x = random_complex(cat, rng, len, max_rank)?;
    InstanceFile::complex(cat, &x)
}

fn cmd_gen(seed: u64, profile: &str, ring: Option<CoeffRing>, output: Option<&Path>) -> Result<(), Stop> {
    let (name, args) = parse_profile(profile)?;
    let ring = arg(&args, 0, ring.unwrap_or(CoeffRing::IntegersMod(4)), "ring")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let file = match name {
        "scalar-eta" => {
            let r: i64 = arg(&args, 1, 2, "scalar")?;
            let cat = ScalarEta::new(ring, r);
            generate(&cat, &mut rng, arg(&args, 2, 4, "max-len")?, arg(&args, 3, 3, "max-rank")?)?
        }
        "graded" => {
            generate(&Graded::new(ring), &mut rng, arg(&args, 1, 3, "max-len")?, arg(&args, 2, 2, "max-rank")?)?
        }
        "gsystem" => {
            let max_len = arg(&args, 1, 3, "max-len")?;
            let max_rank = arg(&args, 2, 2, "max-rank")?;
            let span = arg(&args, 3, 3, "span")?;
            let conv = match args.get(4).copied().unwrap_or("cgra") {
                "cgra" => Convention::CgrA,
                "ga" => Convention::GA,
                c => return Err(Stop::Input(format!("bad convention '{c}' in profile"))),
            };
            let shape = Shape { len: draw_len(&mut rng, max_len), max_rank };
            InstanceFile::gsystem(&random_gsystem(ring, &mut rng, shape, span, conv)?)?
        }
        "delta" => {
            let shape = Shape { len: arg(&args, 1, 3, "length")?, max_rank: arg(&args, 2, 2, "rank")? };
            let width = arg(&args, 3, 2, "width")?;
            let kind = match args.get(4).copied().unwrap_or("degree-zero") {
                "degree-zero" => Columns::DegreeZero,
                "arbitrary" => Columns::Arbitrary,
                c => return Err(Stop::Input(format!("bad column kind '{c}' in profile"))),
            };
            InstanceFile::delta_complex(&random_delta(ring, &mut rng, shape, width, kind)?)?
        }
        _ => return Err(Stop::Input(format!("unknown profile '{name}'"))),
    };
    let text = file.to_json()?;
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_suite(
    seed: u64,
    trials: usize,
    rings: Vec<CoeffRing>,
    only: Vec<String>,
    mutant: Option<Mutant>,
    out_dir: &Path,
) -> Result<(), Stop> {
    if trials == 0 {
        return Err(Stop::Input("trials must be at least 1".into()));
    }
    let mut cfg = SuiteConfig::new(seed, trials);
    cfg.rings = if rings.is_empty() { DEFAULT_RINGS.to_vec() } else { rings };
    cfg.mutant = mutant;
    if !only.is_empty() {
        cfg.only = Some(only);
    }
    let mut records = run_suite(&cfg);
    if records.is_empty() {
        return Err(Stop::Input("no property selected".into()));
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in &mut records {
        if r.verdict == Verdict::Fail {
            if let Some(file) = &r.instance {
                fs::create_dir_all(out_dir)?;
                let path = out_dir.join(format!("{}-{}.json", r.name, r.trial));
                fs::write(&path, file.to_json()?)?;
                r.replay = Some(path.display().to_string());
            }
        }
        writeln!(out, "{}", serde_json::to_string(r).map_err(Error::from)?)?;
    }
    let summaries = summarize(&records);
    for s in &summaries {
        eprintln!("{:<32} pass {:>4}  skip {:>4}  fail {:>4}", s.name, s.pass, s.skip, s.fail);
    }
    if summaries.iter().all(|s| s.ok()) {
        Ok(())
    } else {
        Err(Stop::Failed)
    }
}

use clap::{Parser, Subcommand};
use qaff::cartan::{cartan_from_label, CartanData, Label};
use qaff::cluster::{enumerate_closure, initial_seed, mutate};
use qaff::error::Error;
use qaff::laurent::LaurentPoly;
use qaff::quiver::{kr_label, TruncationParams, Vertex};
use qaff::quivrep::{builtin_k, f_polynomial, geometric_qchar, ThinRep};
use qaff::sl2;
use qaff::tsystem::{FundamentalProvider, KrSolver};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qaff", version, about = "Cluster algebras and q-characters for quantum affine algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the truncated quiver with its KR labels
    Info {
        /// Cartan type, e.g. A3
        type_label: Option<String>,
        /// truncation level
        ell: Option<i64>,
        /// component anchor vertex "(i,r)"
        #[arg(long)]
        anchor: Option<String>,
        /// named configuration, e.g. paper-A3-l1
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Compute a Kirillov-Reshetikhin q-character via the T-system
    Qchar {
        type_label: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        r: i64,
        /// fundamentals file for types without built-in modules
        #[arg(long)]
        fundamentals: Option<PathBuf>,
        /// KR-table cache file (or set QAFF_CACHE)
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Check the T-system identities over a window of levels and shifts
    TsysVerify {
        type_label: String,
        #[arg(long, default_value_t = 3)]
        kmax: i64,
        #[arg(long, default_value_t = 8)]
        window: i64,
        #[arg(long)]
        fundamentals: Option<PathBuf>,
    },
    /// Apply a mutation sequence to the initial seed and print the result
    Mutate {
        type_label: String,
        ell: i64,
        #[arg(long)]
        anchor: Option<String>,
        /// mutation sequence "(3,-2),(2,-1),(1,-2)"
        #[arg(long)]
        seq: String,
    },
    /// Enumerate the mutation closure of the initial seed
    Enumerate {
        type_label: String,
        ell: i64,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, default_value_t = 10000)]
        max_seeds: usize,
        /// print every cluster variable
        #[arg(long)]
        dump: bool,
    },
    /// sl2 string operations
    Sl2 {
        #[command(subcommand)]
        cmd: Sl2Cmd,
    },
    /// F-polynomial and geometric q-character of a thin module
    Fpoly {
        #[arg(long = "type")]
        type_label: String,
        /// ThinRep JSON file
        #[arg(long)]
        module: Option<PathBuf>,
        /// built-in K module "i,r"
        #[arg(long)]
        builtin: Option<String>,
        /// also print the geometric q-character
        #[arg(long)]
        qchar: bool,
    },
    /// Run cross-module identity suites
    Verify {
        #[arg(long = "type")]
        type_label: String,
        /// one of tsystem, geometric, sl2, cluster, all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        kmax: i64,
        #[arg(long)]
        ell: Option<i64>,
        #[arg(long, default_value_t = 8)]
        window: i64,
        #[arg(long)]
        fundamentals: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Sl2Cmd {
    /// Decompose a tensor product of evaluation modules in K0
    Decompose {
        /// strings "(lo,n);(lo,n);..."
        #[arg(long)]
        strings: String,
    },
}

fn parse_type(s: &str) -> Result<CartanData, Error> {
    cartan_from_label(s.parse::<Label>()?)
}

/// Paper presets pinning the worked-example anchors.
fn preset(name: &str) -> Option<(&'static str, i64, Vertex)> {
    match name {
        "paper-A3-l1" => Some(("A3", 1, Vertex::new(2, -1))),
        "paper-B2-l2" => Some(("B2", 2, Vertex::new(1, -2))),
        "paper-G2-l3" => Some(("G2", 3, Vertex::new(1, -3))),
        _ => None,
    }
}

/// The paper anchor for known worked examples, else the library default.
fn default_params(cd: &CartanData, ell: i64) -> TruncationParams {
    let anchor = match (cd.label.to_string().as_str(), ell) {
        ("A3", 1) => Vertex::new(2, -1),
        ("B2", 2) => Vertex::new(1, -2),
        ("G2", 3) => Vertex::new(1, -3),
        _ => return TruncationParams::with_default_anchor(cd, ell),
    };
    TruncationParams { ell, anchor }
}

fn resolve_config(
    type_label: &Option<String>,
    ell: &Option<i64>,
    anchor: &Option<String>,
    preset_name: &Option<String>,
) -> Result<(CartanData, TruncationParams), Error> {
    if let Some(name) = preset_name {
        let (t, l, a) =
            preset(name).ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
        return Ok((parse_type(t)?, TruncationParams { ell: l, anchor: a }));
    }
    let t = type_label
        .as_deref()
        .ok_or_else(|| Error::Config("missing type".into()))?;
    let cd = parse_type(t)?;
    let ell = ell.ok_or_else(|| Error::Config("missing level".into()))?;
    let params = match anchor {
        Some(a) => TruncationParams { ell, anchor: a.parse()? },
        None => default_params(&cd, ell),
    };
    Ok((cd, params))
}

fn provider(cd: &CartanData, path: &Option<PathBuf>) -> Result<FundamentalProvider, Error> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            FundamentalProvider::from_json(&v)
        }
        None => FundamentalProvider::builtin(cd),
    }
}

type CacheTable = BTreeMap<(usize, i64, i64), LaurentPoly>;

fn cache_file(cli: &Option<PathBuf>) -> Option<PathBuf> {
    cli.clone()
        .or_else(|| std::env::var_os("QAFF_CACHE").map(PathBuf::from))
}

fn load_cache(path: &Path, type_label: &str) -> Result<CacheTable, Error> {
    if !path.exists() {
        return Ok(CacheTable::new());
    }
    let corrupt = |m: &str| Error::CorruptCache(format!("{}: {m}", path.display()));
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| corrupt(&e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| corrupt("top level is not an object"))?;
    let mut table = CacheTable::new();
    for (key, poly) in obj {
        let parts: Vec<&str> = key.split('/').collect();
        if parts.len() != 4 {
            return Err(corrupt(&format!("bad key `{key}`")));
        }
        if parts[0] != type_label {
            continue;
        }
        let parse = |s: &str| s.parse::<i64>().map_err(|_| corrupt(&format!("bad key `{key}`")));
        let i = parse(parts[1])? as usize;
        let entry = LaurentPoly::from_json(poly)
            .map_err(|e| corrupt(&format!("entry `{key}`: {e}")))?;
        table.insert((i, parse(parts[2])?, parse(parts[3])?), entry);
    }
    Ok(table)
}

fn save_cache(path: &Path, type_label: &str, table: &CacheTable) -> Result<(), Error> {
    // merge with entries for other types already in the file
    let mut all: BTreeMap<String, serde_json::Value> = if path.exists() {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::CorruptCache(format!("{}: {e}", path.display())))?
    } else {
        BTreeMap::new()
    };
    for ((i, k, r), poly) in table {
        all.insert(format!("{type_label}/{i}/{k}/{r}"), poly.to_json());
    }
    std::fs::write(path, serde_json::to_string_pretty(&all).unwrap())?;
    Ok(())
}

fn cmd_info(cd: &CartanData, params: &TruncationParams, format: &str) -> Result<(), Error> {
    let seed = initial_seed(cd, params)?;
    if format == "json" {
        let labels: Vec<_> = seed
            .quiver
            .vertices
            .iter()
            .map(|&v| {
                let l = kr_label(cd, v, params.ell).unwrap();
                serde_json::json!({"vertex": [v.i, v.r], "kr": {"i": l.i, "k": l.k, "r": l.r}})
            })
            .collect();
        let out = serde_json::json!({
            "type": cd.label.to_string(),
            "ell": params.ell,
            "anchor": [params.anchor.i, params.anchor.r],
            "quiver": seed.quiver.to_json(),
            "labels": labels,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Ok(());
    }
    println!("type {}  ell {}  anchor {}", cd.label, params.ell, params.anchor);
    println!("vertices:");
    for &v in &seed.quiver.vertices {
        let l = kr_label(cd, v, params.ell)?;
        let tag = if seed.quiver.frozen.contains(&v) { "frozen" } else { "mutable" };
        println!("  {v}  {l}  [{tag}]");
    }
    println!("arrows:");
    for (&(s, d), &m) in &seed.quiver.arrows {
        for _ in 0..m {
            println!("  {s} -> {d}");
        }
    }
    Ok(())
}

fn cmd_qchar(
    type_label: &str,
    i: usize,
    k: i64,
    r: i64,
    fundamentals: &Option<PathBuf>,
    cache: &Option<PathBuf>,
    format: &str,
) -> Result<(), Error> {
    let cd = parse_type(type_label)?;
    let fp = provider(&cd, fundamentals)?;
    let solver = KrSolver::new(&cd, fp);
    let canon = cd.label.to_string();
    let cache_path = cache_file(cache);
    if let Some(p) = &cache_path {
        solver.preload(load_cache(p, &canon)?);
    }
    let chi = solver.t(i, k, r)?;
    if let Some(p) = &cache_path {
        save_cache(p, &canon, &solver.table())?;
    }
    if format == "json" {
        println!("{}", serde_json::to_string_pretty(&chi.to_json()).unwrap());
    } else {
        println!("{chi}");
    }
    Ok(())
}

struct SuiteReport {
    failures: usize,
}

impl SuiteReport {
    fn new() -> SuiteReport {
        SuiteReport { failures: 0 }
    }

    fn check(&mut self, name: &str, ok: bool) {
        println!("{}  {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn suite_tsystem(
    cd: &CartanData,
    fp: &FundamentalProvider,
    kmax: i64,
    window: i64,
    report: &mut SuiteReport,
) -> Result<(), Error> {
    let solver = KrSolver::new(cd, fp.clone());
    for i in cd.nodes() {
        for k in 1..=kmax {
            let mut ok = true;
            for r in -window / 2..=window / 2 {
                ok &= solver.verify(i, k, r)?;
            }
            report.check(&format!("tsystem {} i={i} k={k} window={window}", cd.label), ok);
        }
    }
    Ok(())
}

fn suite_geometric(cd: &CartanData, window: i64, report: &mut SuiteReport) -> Result<(), Error> {
    let solver = KrSolver::new(cd, FundamentalProvider::builtin(cd)?);
    for i in cd.nodes() {
        let mut ok = true;
        for r in -window / 2..=window / 2 {
            let k = builtin_k(cd, i, r + cd.d(i))?;
            let geo = geometric_qchar(cd, i, r + cd.d(i), &k)?;
            ok &= solver.t(i, 1, r)? == geo;
        }
        report.check(&format!("geometric {} node {i} window={window}", cd.label), ok);
    }
    Ok(())
}

fn suite_sl2(report: &mut SuiteReport) {
    let (a, b) = (sl2::Str::new(0, 5), sl2::Str::new(6, 6));
    let split = sl2::special_split(&a, &b).unwrap();
    report.check(
        "sl2 worked example split",
        split
            == (
                sl2::Str::new(0, 9),
                Some(sl2::Str::new(6, 2)),
                Some(sl2::Str::new(0, 2)),
                Some(sl2::Str::new(12, 3)),
            ),
    );
    let mut ok = true;
    for (a, b) in sl2::random_special_pairs(200, 0xfeed) {
        ok &= a.qchar().mul(&b.qchar()) == sl2::tensor_pair(&a, &b).qchar();
    }
    report.check("sl2 Eq.(1) identity on 200 special pairs", ok);
    let mut ok = true;
    for (a, b) in sl2::random_special_pairs(20, 0xbeef) {
        let c = sl2::Str::new(a.lo + 2, b.n);
        let product = [a, b, c];
        let direct = sl2::normalize(&product);
        ok &= direct.qchar()
            == product
                .iter()
                .fold(LaurentPoly::one(), |acc, s| acc.mul(&s.qchar()));
    }
    report.check("sl2 normalize character identity on triples", ok);
}

fn suite_cluster(
    cd: &CartanData,
    ell: i64,
    report: &mut SuiteReport,
) -> Result<(), Error> {
    let seed = initial_seed(cd, &default_params(cd, ell))?;
    let closure = enumerate_closure(&seed, 20000);
    println!(
        "cluster {} ell={ell}: {} mutable variables, {} frozen, {} seeds, closed={}",
        cd.label,
        closure.variables.len(),
        closure.frozen.len(),
        closure.seed_count,
        closure.closed
    );
    report.check(&format!("cluster {} ell={ell} closure reached", cd.label), closure.closed);
    let positive = closure
        .variables
        .iter()
        .all(|x| x.numerator().has_nonnegative_coeffs());
    report.check(&format!("cluster {} ell={ell} positivity", cd.label), positive);
    Ok(())
}

fn cmd_verify(
    type_label: &str,
    suite: &str,
    kmax: i64,
    ell: Option<i64>,
    window: i64,
    fundamentals: &Option<PathBuf>,
) -> Result<usize, Error> {
    let cd = parse_type(type_label)?;
    let mut report = SuiteReport::new();
    let default_ell = match cd.label.to_string().as_str() {
        "B2" => 2,
        "G2" => 3,
        _ => 1,
    };
    let ell = ell.unwrap_or(default_ell);
    let run_tsystem = |report: &mut SuiteReport| -> Result<bool, Error> {
        match provider(&cd, fundamentals) {
            Ok(fp) => {
                suite_tsystem(&cd, &fp, kmax, window, report)?;
                Ok(true)
            }
            Err(Error::UnsupportedType(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    match suite {
        "tsystem" => {
            let fp = provider(&cd, fundamentals)?;
            suite_tsystem(&cd, &fp, kmax, window, &mut report)?;
        }
        "geometric" => suite_geometric(&cd, window, &mut report)?,
        "sl2" => suite_sl2(&mut report),
        "cluster" => suite_cluster(&cd, ell, &mut report)?,
        "all" => {
            if !run_tsystem(&mut report)? {
                println!("SKIP  tsystem {} (no fundamentals available)", cd.label);
            }
            if FundamentalProvider::builtin(&cd).is_ok() {
                suite_geometric(&cd, window, &mut report)?;
            } else {
                println!("SKIP  geometric {} (no built-in modules)", cd.label);
            }
            suite_sl2(&mut report);
            suite_cluster(&cd, ell, &mut report)?;
        }
        other => return Err(Error::Config(format!("unknown suite `{other}`"))),
    }
    Ok(report.failures)
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Info { type_label, ell, anchor, preset, format } => {
            let (cd, params) = resolve_config(type_label, ell, anchor, preset)?;
            cmd_info(&cd, &params, format)?;
        }
        Cmd::Qchar { type_label, i, k, r, fundamentals, cache, format } => {
            cmd_qchar(type_label, *i, *k, *r, fundamentals, cache, format)?;
        }
        Cmd::TsysVerify { type_label, kmax, window, fundamentals } => {
            let failures = cmd_verify(type_label, "tsystem", *kmax, None, *window, fundamentals)?;
            if failures > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Mutate { type_label, ell, anchor, seq } => {
            let (cd, params) =
                resolve_config(&Some(type_label.clone()), &Some(*ell), anchor, &None)?;
            let mut seed = initial_seed(&cd, &params)?;
            for part in seq.split("),") {
                let part = part.trim();
                let text = if part.ends_with(')') { part.to_string() } else { format!("{part})") };
                let v: Vertex = text.parse()?;
                seed = mutate(&seed, v)?;
            }
            println!("{}", serde_json::to_string_pretty(&seed.to_json()).unwrap());
        }
        Cmd::Enumerate { type_label, ell, anchor, max_seeds, dump } => {
            let (cd, params) =
                resolve_config(&Some(type_label.clone()), &Some(*ell), anchor, &None)?;
            let seed = initial_seed(&cd, &params)?;
            let closure = enumerate_closure(&seed, *max_seeds);
            println!(
                "{} ell={}: {} mutable variables, {} frozen, {} seeds, closed={}",
                cd.label,
                params.ell,
                closure.variables.len(),
                closure.frozen.len(),
                closure.seed_count,
                closure.closed
            );
            if *dump {
                for x in &closure.variables {
                    println!("{x}");
                }
            }
        }
        Cmd::Sl2 { cmd: Sl2Cmd::Decompose { strings } } => {
            let product = sl2::parse_strings(strings)?;
            let out = sl2::normalize(&product);
            println!("{}", serde_json::to_string_pretty(&out.to_json()).unwrap());
        }
        Cmd::Fpoly { type_label, module, builtin, qchar } => {
            let cd = parse_type(type_label)?;
            let (rep, vertex) = match (module, builtin) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(path)?;
                    let v: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| Error::Config(e.to_string()))?;
                    (ThinRep::from_json(&v)?, None)
                }
                (None, Some(spec)) => {
                    let (i, r) = spec
                        .split_once(',')
                        .ok_or_else(|| Error::Config(format!("bad --builtin `{spec}`")))?;
                    let i: usize = i.trim().parse().map_err(|_| Error::Config("bad node".into()))?;
                    let r: i64 = r.trim().parse().map_err(|_| Error::Config("bad shift".into()))?;
                    (builtin_k(&cd, i, r)?, Some((i, r)))
                }
                _ => return Err(Error::Config("give exactly one of --module or --builtin".into())),
            };
            if !qaff::quivrep::check_relations(&rep, &cd) {
                return Err(Error::Config("module violates the potential relations".into()));
            }
            println!("{}", f_polynomial(&rep)?);
            if *qchar {
                let (i, r) = vertex.ok_or_else(|| {
                    Error::Config("--qchar needs --builtin to fix the highest weight".into())
                })?;
                println!("{}", geometric_qchar(&cd, i, r, &rep)?);
            }
        }
        Cmd::Verify { type_label, suite, kmax, ell, window, fundamentals } => {
            let failures = cmd_verify(type_label, suite, *kmax, *ell, *window, fundamentals)?;
            if failures > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

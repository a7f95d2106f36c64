use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use std::path::PathBuf;
use std::process::ExitCode;
use taxicab::arith::{factorize, Factorization};
use taxicab::cabtaxi::{cabtaxi_order, decompose_difference};
use taxicab::cubeform::{decompose, Decomposition};
use taxicab::identities::{check_identity, IdentityName, CATALOG};
use taxicab::registry;
use taxicab::taxisearch::{
    max_multiplier_bound, search_range, taxicab_lower_bound, SearchOptions, TaxicabRecord,
};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "taxicab", about = "Sums of two equal odd powers: decomposition, search, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose N into sums (and optionally differences) of two n-th powers
    Decompose(DecomposeArgs),
    /// Scan cubic multipliers from a seed for higher-way numbers
    Search(SearchArgs),
    /// Re-verify the embedded registry of known taxicab numbers
    Verify(VerifyArgs),
    /// Evaluate catalog identities exactly
    Identity(IdentityArgs),
    /// Print the lower bound for a k-way sum of two n-th powers
    Bounds(BoundsArgs),
    /// Count signed-cube representations of N
    Cabtaxi(CabtaxiArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    value: BigUint,
    #[arg(long, default_value_t = 3)]
    power: u32,
    /// Also list difference representations x^3 - y^3 = N
    #[arg(long)]
    signed: bool,
    /// Known factorization of N as p1^e1,p2^e2,...
    #[arg(long)]
    factors: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// Registry label (W5, R6, T7, ...) or an even number
    #[arg(long)]
    seed: String,
    #[arg(long)]
    from: BigUint,
    #[arg(long)]
    to: BigUint,
    #[arg(long)]
    prime_only: bool,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    entry: Option<String>,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, conflicts_with = "all")]
    name: Option<String>,
    /// Comma-separated integer parameters
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Sweep every catalog identity over the grid |param| <= GRID
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 10)]
    grid: u32,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    power: u32,
    #[arg(long)]
    ways: u32,
}

#[derive(Args)]
struct CabtaxiArgs {
    value: BigUint,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn parse_factors(spec: &str, target: &BigUint) -> Result<Factorization, String> {
    let mut factors = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (p, e) = match part.split_once('^') {
            Some((p, e)) => (p, e),
            None => (part, "1"),
        };
        let prime: BigUint = p.parse().map_err(|_| format!("bad factor '{part}'"))?;
        let exp: u32 = e.parse().map_err(|_| format!("bad exponent '{part}'"))?;
        factors.push((prime, exp));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let f = Factorization::from_factors(factors).map_err(|e| e.to_string())?;
    if &f.value() != target {
        return Err("factor list does not multiply to N".into());
    }
    Ok(f)
}

fn print_decomposition(n_val: &BigUint, d: &Decomposition) {
    println!(
        "DECOMP N={} x={} y={} sign={}",
        n_val,
        d.x,
        d.y,
        d.sign.symbol()
    );
}

fn cmd_decompose(args: &DecomposeArgs) -> ExitCode {
    if args.power < 3 || args.power % 2 == 0 {
        return usage_error("--power must be odd and at least 3");
    }
    let factorization = match &args.factors {
        Some(spec) => match parse_factors(spec, &args.value) {
            Ok(f) => Some(if args.value.is_odd() {
                // decompose consumes the factorization of 2^n N for odd N
                f.merge(&factorize(&(BigUint::from(1u32) << args.power)).unwrap())
            } else {
                f
            }),
            Err(msg) => return usage_error(&msg),
        },
        None => None,
    };
    let sums = match decompose(&args.value, args.power, factorization.as_ref(), false) {
        Ok(v) => v,
        Err(e) => return usage_error(&e.to_string()),
    };
    let mut count = sums.len();
    for d in &sums {
        print_decomposition(&args.value, d);
    }
    if args.signed {
        if args.power != 3 {
            return usage_error("--signed requires --power 3");
        }
        match decompose_difference(&args.value, None) {
            Ok(diffs) => {
                count += diffs.len();
                for d in &diffs {
                    print_decomposition(&args.value, d);
                }
            }
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    if count > 0 {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NOT_FOUND)
    }
}

fn seed_record(spec: &str) -> Result<TaxicabRecord, String> {
    if spec.chars().all(|c| c.is_ascii_digit()) {
        let value: BigUint = spec.parse().map_err(|_| "bad seed number".to_string())?;
        if value.is_odd() {
            return Err("numeric seed must be even".into());
        }
        let f = factorize(&value).map_err(|e| e.to_string())?;
        let decs = decompose(&value, 3, Some(&f), false).map_err(|e| e.to_string())?;
        if decs.is_empty() {
            return Err(format!("{value} has no two-cube representation"));
        }
        let medians = decs
            .iter()
            .map(|d| d.median.clone().expect("even value has medians"))
            .collect();
        TaxicabRecord::new(value.clone(), 3, medians, Vec::new(), value, f)
            .map_err(|e| e.to_string())
    } else {
        registry::record(spec).map_err(|e| e.to_string())
    }
}

fn cmd_search(args: &SearchArgs) -> ExitCode {
    let record = match seed_record(&args.seed) {
        Ok(r) => r,
        Err(msg) => return usage_error(&msg),
    };
    let bound = max_multiplier_bound(&record);
    if args.from < BigUint::from(2u32) || args.from > args.to || args.to > bound {
        return usage_error(&format!("range outside [2, {bound}]"));
    }
    let opts = SearchOptions {
        prime_only: args.prime_only,
        workers: args.workers,
        checkpoint_path: args.checkpoint.clone(),
    };
    let mut found_any = false;
    let result = search_range(&record, &args.from, &args.to, &opts, |m, rec| {
        found_any = true;
        println!("FOUND M={} ways={} value={}", m, rec.ways, rec.value);
    });
    match result {
        Ok(_) => {
            if found_any {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_NOT_FOUND)
            }
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn verify_entry(entry: &registry::RegistryEntry) -> Result<(), String> {
    for (x, y) in &entry.pairs {
        if x.pow(entry.power) + y.pow(entry.power) != entry.value {
            return Err(format!("{}^{} + {}^{} != value", x, entry.power, y, entry.power));
        }
    }
    let recomputed = decompose(&entry.value, entry.power, None, false).map_err(|e| e.to_string())?;
    if recomputed.len() != entry.ways {
        return Err(format!(
            "recomputed {} decompositions, registry says {}",
            recomputed.len(),
            entry.ways
        ));
    }
    for (d, (x, y)) in recomputed.iter().zip(&entry.pairs) {
        if &d.x != x || &d.y != y {
            return Err(format!("pair mismatch: computed ({}, {})", d.x, d.y));
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let targets: Vec<&registry::RegistryEntry> = match &args.entry {
        Some(label) => match registry::lookup(label) {
            Ok(e) => vec![e],
            Err(e) => return usage_error(&e.to_string()),
        },
        None => registry::entries().iter().collect(),
    };
    let mut all_ok = true;
    for entry in targets {
        match verify_entry(entry) {
            Ok(()) => println!("OK {} ({} decompositions)", entry.label, entry.ways),
            Err(reason) => {
                all_ok = false;
                println!("FAIL {} {}", entry.label, reason);
            }
        }
    }
    if all_ok {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn parse_params(spec: &str) -> Result<Vec<BigInt>, String> {
    spec.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad parameter '{t}'")))
        .collect()
}

fn grid_tuples(arity: usize, grid: i64) -> Vec<Vec<BigInt>> {
    let mut tuples = vec![Vec::new()];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (-grid..=grid).map(move |v| {
                    let mut t = t.clone();
                    t.push(BigInt::from(v));
                    t
                })
            })
            .collect();
    }
    tuples
}

fn cmd_identity(args: &IdentityArgs) -> ExitCode {
    if args.all {
        if args.grid == 0 {
            return usage_error("--grid must be positive");
        }
        for name in CATALOG {
            let mut cases = 0usize;
            let mut degenerate = 0usize;
            for params in grid_tuples(name.param_count(), args.grid as i64) {
                match check_identity(name, &params) {
                    Ok(case) => {
                        cases += 1;
                        if case.degenerate {
                            degenerate += 1;
                        }
                    }
                    Err(e) => return usage_error(&e.to_string()),
                }
            }
            println!(
                "IDENTITY {} grid={} cases={} degenerate={} OK",
                name.as_str(),
                args.grid,
                cases,
                degenerate
            );
        }
        return ExitCode::from(EXIT_OK);
    }
    let Some(name_str) = &args.name else {
        return usage_error("either --name or --all is required");
    };
    let name = match IdentityName::parse(name_str) {
        Ok(n) => n,
        Err(e) => return usage_error(&e.to_string()),
    };
    let params = match &args.params {
        Some(spec) => match parse_params(spec) {
            Ok(p) => p,
            Err(msg) => return usage_error(&msg),
        },
        None => return usage_error("--params is required with --name"),
    };
    match check_identity(name, &params) {
        Ok(case) => {
            let shown: Vec<String> = case.params.iter().map(|p| p.to_string()).collect();
            let status = if case.degenerate { "DEGENERATE" } else { "OK" };
            println!("IDENTITY {} params={} {}", name.as_str(), shown.join(","), status);
            ExitCode::from(EXIT_OK)
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn cmd_bounds(args: &BoundsArgs) -> ExitCode {
    if args.power < 3 || args.power % 2 == 0 || args.ways < 2 {
        return usage_error("--power must be odd >= 3 and --ways >= 2");
    }
    println!("{}", taxicab_lower_bound(args.power, args.ways));
    ExitCode::from(EXIT_OK)
}

fn cmd_cabtaxi(args: &CabtaxiArgs) -> ExitCode {
    let order = match cabtaxi_order(&args.value, None) {
        Ok(o) => o,
        Err(e) => return usage_error(&e.to_string()),
    };
    println!("CABTAXI N={} order={}", args.value, order);
    let sums = decompose(&args.value, 3, None, false).unwrap_or_default();
    for d in &sums {
        print_decomposition(&args.value, d);
    }
    if let Ok(diffs) = decompose_difference(&args.value, None) {
        for d in &diffs {
            print_decomposition(&args.value, d);
        }
    }
    if order > 0 {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NOT_FOUND)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Identity(args) => cmd_identity(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Cabtaxi(args) => cmd_cabtaxi(args),
    }
}

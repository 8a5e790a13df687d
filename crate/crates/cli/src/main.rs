//! Batch front-end: parse JSON inputs, dispatch to the computational
//! modules, and emit deterministic JSON or CSV results.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 domain validation
//! failure, 3 property-check failure in `check`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use ramlab_core::breakdec::{break_decompose, verify_break_props, FilteredRep, FinRing, ModMatrix};
use ramlab_core::checks::run_all;
use ramlab_core::conductor::{
    beta_function, delta_from_profile, newton_breaks, profile_kummer_char, profile_lq, BreakCurve,
    BreakProfile,
};
use ramlab_core::laurent::{
    gauss_val, pth_root_shrink, sup_val, unit_decompose, LaurentVal, RadiusInterval, Side,
};
use ramlab_core::plfun::PLFun;
use ramlab_core::ramify::{
    artin_flat, delta_value, jumps_lower, phi_upper, ram_from_kummer, swan_nat, ClassFun,
    FiniteGroup, RamPoint,
};
use ramlab_core::valgroup::{GammaVal, Rat};

#[derive(Parser)]
#[command(
    name = "ramlab",
    version,
    about = "exact ramification invariants on annuli"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file (defaults to stdin where meaningful).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; CSV applies to the piecewise-linear results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Residue characteristic for `proot`.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Seed for the randomized property suites (fallback: RAMLAB_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss valuation of a Laurent polynomial at a refined Gauss point.
    Gauss,
    /// Supremum valuation over a closed annulus.
    Supnorm,
    /// Unit analysis and p-th-root shrink bound.
    Proot,
    /// Ramification invariants of a stabilizer point.
    Ram,
    /// Break decomposition of a filtered representation.
    Breakdec,
    /// Discriminant function of a break profile.
    Delta,
    /// Break function and Newton breaks of a profile.
    Newton,
    /// Run the aggregated property suites.
    Check,
}

enum Failure {
    Malformed(String),
    Domain(String),
    ChecksFailed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 1,
            Failure::Domain(_) => 2,
            Failure::ChecksFailed => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Malformed(m) => eprintln!("error (malformed input): {m}"),
                Failure::Domain(m) => eprintln!("error (domain validation): {m}"),
                Failure::ChecksFailed => eprintln!("error: property checks failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let rendered = match cli.command {
        Command::Gauss => {
            let input: GaussInput = read_input(&cli)?;
            let side = input.side()?;
            let out = match gauss_val(&input.f, &input.rho, side) {
                Some(gv) => json!(gv),
                None => json!("inf"),
            };
            render_json(&out)
        }
        Command::Supnorm => {
            let input: SupInput = read_input(&cli)?;
            let out = match sup_val(&input.f, &input.interval) {
                Some(v) => json!(v),
                None => json!("inf"),
            };
            render_json(&out)
        }
        Command::Proot => {
            let p = cli
                .p
                .ok_or_else(|| Failure::Malformed("proot requires --p <prime>".into()))?;
            if p < 2 {
                return Err(Failure::Malformed("--p must be a prime".into()));
            }
            let input: ProotInput = read_input(&cli)?;
            let (h, mut out) = match input {
                ProotInput::Unit { u, interval } => {
                    let dec = unit_decompose(&u, &interval)
                        .map_err(|e| Failure::Domain(e.to_string()))?;
                    let obj = json!({
                        "leading_degree": dec.leading_degree,
                        "leading_val": dec.leading_val,
                        "remainder": dec.remainder,
                    });
                    ((dec.remainder, interval), obj)
                }
                ProotInput::Remainder { h, interval } => ((h, interval), json!({})),
            };
            let shrink = match pth_root_shrink(&h.0, &h.1, p) {
                Ok(r) => json!({ "sigma": r.sigma, "strict": r.strict }),
                Err(e) => json!({ "impossible": e.to_string() }),
            };
            out["shrink"] = shrink;
            render_json(&out)
        }
        Command::Ram => {
            let input: RamInput = read_input(&cli)?;
            let rp = input.build()?;
            let jumps = jumps_lower(&rp);
            let upper: Vec<GammaVal> = jumps.iter().map(|w| phi_upper(&rp, w)).collect();
            let out = json!({
                "jumps_lower": jumps,
                "jumps_upper": upper,
                "artin_flat": class_fun_json(&artin_flat(&rp)),
                "swan_nat": class_fun_json(&swan_nat(&rp)),
                "delta_value": delta_value(&rp),
            });
            render_json(&out)
        }
        Command::Breakdec => {
            let input: RepInput = read_input(&cli)?;
            let rep = input.build()?;
            let decomp = break_decompose(&rep);
            let ranks: Vec<Value> = decomp
                .ranks()
                .into_iter()
                .map(|(i, r)| json!({ "index": i, "rank": r }))
                .collect();
            let out = json!({
                "ranks": ranks,
                "verify": verify_break_props(&rep),
            });
            render_json(&out)
        }
        Command::Delta => {
            let input: ProfileInput = read_input(&cli)?;
            let pr = input.build()?;
            let delta = delta_from_profile(&pr);
            match cli.format {
                Format::Json => render_json(&json!(delta)),
                Format::Csv => render_csv(&delta),
            }
        }
        Command::Newton => {
            let input: ProfileInput = read_input(&cli)?;
            let pr = input.build()?;
            let beta = beta_function(&pr);
            match cli.format {
                Format::Json => render_json(&json!({
                    "beta": beta,
                    "breaks": newton_breaks(&pr),
                    "rho0": pr.linearity_onset(),
                })),
                Format::Csv => render_csv(&beta),
            }
        }
        Command::Check => {
            let seed = cli
                .seed
                .or_else(|| {
                    std::env::var("RAMLAB_SEED")
                        .ok()
                        .and_then(|s| s.parse().ok())
                })
                .unwrap_or(0);
            let report = run_all(seed);
            let rendered = render_json(
                &serde_json::to_value(&report).map_err(|e| Failure::Malformed(e.to_string()))?,
            );
            write_output(&cli, &rendered)?;
            if !report.pass {
                return Err(Failure::ChecksFailed);
            }
            return Ok(());
        }
    };
    write_output(&cli, &rendered)
}

fn read_input<T: for<'de> Deserialize<'de>>(cli: &Cli) -> Result<T, Failure> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            use std::io::Read;
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Malformed(e.to_string()))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(e.to_string()))
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json rendering cannot fail");
    s.push('\n');
    s
}

fn render_csv(f: &PLFun) -> String {
    let mut out = String::new();
    for (x, y) in f.plot_points() {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

fn write_output(cli: &Cli, rendered: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| Failure::Malformed(e.to_string())),
    }
}

fn class_fun_json(cf: &ClassFun) -> Vec<Value> {
    cf.class_summaries()
        .into_iter()
        .map(|(rep, size, value)| json!({ "rep": rep, "size": size, "value": value }))
        .collect()
}

// --- input schemas ---

#[derive(Deserialize)]
struct GaussInput {
    f: LaurentVal,
    rho: Rat,
    side: String,
}

impl GaussInput {
    fn side(&self) -> Result<Side, Failure> {
        match self.side.as_str() {
            "Inner" => Ok(Side::Inner),
            "Outer" => Ok(Side::Outer),
            other => Err(Failure::Malformed(format!(
                "side must be \"Inner\" or \"Outer\", got {other:?}"
            ))),
        }
    }
}

#[derive(Deserialize)]
struct SupInput {
    f: LaurentVal,
    interval: RadiusInterval,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProotInput {
    Unit {
        u: LaurentVal,
        interval: RadiusInterval,
    },
    Remainder {
        h: LaurentVal,
        interval: RadiusInterval,
    },
}

#[derive(Deserialize)]
struct KummerSpec {
    n: usize,
    p: u32,
    #[serde(default)]
    rho: Option<Rat>,
}

#[derive(Deserialize)]
struct RamPointRaw {
    order: usize,
    table: Vec<Vec<usize>>,
    i_map: BTreeMap<String, GammaVal>,
    gamma0: GammaVal,
    p: u32,
    #[serde(default)]
    rho: Option<Rat>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RamInput {
    Kummer { kummer: KummerSpec },
    Point(RamPointRaw),
}

impl RamInput {
    fn build(self) -> Result<RamPoint, Failure> {
        match self {
            RamInput::Kummer { kummer } => {
                if kummer.n == 0 {
                    return Err(Failure::Domain("kummer degree must be positive".into()));
                }
                Ok(ram_from_kummer(
                    kummer.n,
                    kummer.p,
                    kummer.rho.unwrap_or_else(Rat::zero),
                ))
            }
            RamInput::Point(raw) => {
                if raw.table.len() != raw.order {
                    return Err(Failure::Domain(
                        "declared order does not match the table".into(),
                    ));
                }
                let group =
                    FiniteGroup::new(raw.table).map_err(|e| Failure::Domain(e.to_string()))?;
                let mut i_values = BTreeMap::new();
                for (k, v) in raw.i_map {
                    let idx: usize = k.parse().map_err(|_| {
                        Failure::Malformed("i_map keys must be element indices".into())
                    })?;
                    i_values.insert(idx, v);
                }
                RamPoint::new(group, i_values, raw.gamma0, raw.p, raw.rho)
                    .map_err(|e| Failure::Domain(e.to_string()))
            }
        }
    }
}

#[derive(Deserialize)]
struct GroupRaw {
    order: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RepInput {
    ell: u64,
    n: u32,
    group: GroupRaw,
    chain: Vec<Vec<usize>>,
    action: BTreeMap<String, Vec<Vec<u64>>>,
}

impl RepInput {
    fn build(self) -> Result<FilteredRep, Failure> {
        if self.group.table.len() != self.group.order {
            return Err(Failure::Domain(
                "declared order does not match the table".into(),
            ));
        }
        let group =
            FiniteGroup::new(self.group.table).map_err(|e| Failure::Domain(e.to_string()))?;
        let ring = FinRing::new(self.ell, self.n).map_err(|e| Failure::Domain(e.to_string()))?;
        let mut action = vec![None; group.order()];
        for (k, rows) in self.action {
            let idx: usize = k
                .parse()
                .map_err(|_| Failure::Malformed("action keys must be element indices".into()))?;
            if idx >= group.order() {
                return Err(Failure::Domain("action key out of range".into()));
            }
            let m = ModMatrix::from_rows(rows, ring.modulus())
                .ok_or_else(|| Failure::Domain("action matrices must be square".into()))?;
            action[idx] = Some(m);
        }
        let action: Vec<ModMatrix> = action
            .into_iter()
            .enumerate()
            .map(|(g, m)| {
                m.ok_or_else(|| Failure::Domain(format!("missing action for element {g}")))
            })
            .collect::<Result<_, _>>()?;
        FilteredRep::new(group, self.chain, ring, action)
            .map_err(|e| Failure::Domain(e.to_string()))
    }
}

fn default_length() -> u64 {
    1
}

#[derive(Deserialize)]
struct LqSpec {
    n: u64,
    m: u64,
    p: u32,
    #[serde(default = "default_length")]
    l: u64,
}

#[derive(Deserialize)]
struct KummerCharSpec {
    p: u32,
    j: u32,
    #[serde(default = "default_length")]
    l: u64,
}

#[derive(Deserialize)]
struct ProfileRaw {
    l: u64,
    curves: Vec<BreakCurve>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProfileInput {
    Lq { lq: LqSpec },
    KummerChar { kummer_char: KummerCharSpec },
    Profile(ProfileRaw),
}

impl ProfileInput {
    fn build(self) -> Result<BreakProfile, Failure> {
        match self {
            ProfileInput::Lq { lq } => {
                profile_lq(lq.n, lq.m, lq.p, lq.l).map_err(|e| Failure::Domain(e.to_string()))
            }
            ProfileInput::KummerChar { kummer_char } => {
                if kummer_char.p < 2 || kummer_char.l == 0 {
                    return Err(Failure::Domain("p must be prime and l positive".into()));
                }
                Ok(profile_kummer_char(
                    kummer_char.p,
                    kummer_char.j,
                    kummer_char.l,
                ))
            }
            ProfileInput::Profile(raw) => {
                BreakProfile::new(raw.curves, raw.l).map_err(|e| Failure::Domain(e.to_string()))
            }
        }
    }
}

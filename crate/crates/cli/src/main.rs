//! `qsphere`: builds and verifies sphere constructions, runs the braid and
//! chain theorem checkers, and exports chains and triangulations.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qsphere::chains::{
    chain_ce_xh, check_boundary_formula, check_signature_product, triangulate, verify_cycle_nonzero, verify_qsphere,
    ChainError, QSphere,
};
use qsphere::constructors::{
    build_pgun_phi, sphere_pgun, sphere_psun, sphere_sun, verify_degenerate_hypotheses, ConstructError,
    ConstructedSphere, DegenerateBundle,
};
use qsphere::field::BraidScalars;
use qsphere::oracle::{centralizer_scan_pgu2_phi, sphere_oracle, DEFAULT_CAP};
use qsphere::ubraid::{
    centre_twisted_uniqueness, check_adjacency_transfer, check_faithful_on_torus, check_no_squares,
    check_normal_form_profiles, check_weighted_sums, enumerate_sun, StepMode, SunTable, TheoremReport,
};
use qsphere::{AmbientGroup, Field};

/// Simplex budget for the integral homology cross-check.
const BETTI_GUARD: usize = 200_000;

#[derive(Parser)]
#[command(name = "qsphere", version, about = "Top homology classes of unitary groups, checked by brute force")]
struct Cli {
    /// Worker threads for the parallel passes.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for randomised sampling (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value = "0x5eed", value_parser = parse_seed)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sphere, check its hypotheses and that its chain is a non-zero cycle.
    Verify {
        #[command(flatten)]
        desc: Descriptor,
        /// Enumerate the group and certify the class against the full poset.
        #[arg(long)]
        oracle: bool,
        /// Also run the exhaustive centraliser scan (field-automorphism family, n = 2).
        #[arg(long)]
        oracle_heavy: bool,
    },
    /// Run one of the braid or chain theorem checkers.
    Theorem(TheoremArgs),
    /// Export the chain of a construction.
    Export {
        #[command(flatten)]
        desc: Descriptor,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    #[value(name = "SU", alias = "su")]
    Su,
    #[value(name = "PSU", alias = "psu")]
    Psu,
    #[value(name = "PGU", alias = "pgu")]
    Pgu,
    #[value(name = "PGUPhi", alias = "pguphi")]
    PguPhi,
}

#[derive(Args, Debug)]
struct Descriptor {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Field size (SU, PSU, PGU).
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic of `q = s^(p l)` (PGUPhi).
    #[arg(long)]
    s: Option<u64>,
    /// Exponent `l` of `q = s^(p l)` (PGUPhi).
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    p: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Off,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremName {
    NoSquares,
    FaithfulTorus,
    WeightedSums,
    NormalFormProfiles,
    CentreTwisted,
    Adjacency,
    Signature,
    Boundary,
}

#[derive(Args, Debug)]
struct TheoremArgs {
    #[arg(value_enum)]
    name: TheoremName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    /// Random words sampled by weighted-sums.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Maximum word length for weighted-sums.
    #[arg(long, default_value_t = 30)]
    max_len: usize,
    /// Largest rank for signature and boundary.
    #[arg(long, default_value_t = 4)]
    r: usize,
    /// Prime for boundary.
    #[arg(long, default_value_t = 3)]
    p: u64,
}

/// Failure modes mapped onto exit codes 2 and 1.
enum Failure {
    Parameter(String),
    Internal(String),
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Failure {
        match e {
            ConstructError::Check(_) | ConstructError::Ubraid(_) | ConstructError::Chain(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Parameter(e.to_string()),
        }
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Failure {
        match e {
            ChainError::MeshDimension(_) | ChainError::MissingLabels => Failure::Parameter(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

enum Built {
    Sphere(Box<ConstructedSphere>),
    Degenerate(Box<DegenerateBundle>),
}

impl Built {
    fn group(&self) -> &AmbientGroup {
        match self {
            Built::Sphere(c) => &c.group,
            Built::Degenerate(b) => &b.group,
        }
    }

    fn sphere(&self) -> &QSphere<AmbientGroup> {
        match self {
            Built::Sphere(c) => &c.sphere,
            Built::Degenerate(b) => &b.sphere,
        }
    }

    fn scalars(&self) -> Value {
        let pairs = match self {
            Built::Sphere(c) => c.scalars.clone(),
            Built::Degenerate(b) => b.scalars(),
        };
        let mut map: serde_json::Map<String, Value> = pairs.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        if let Built::Degenerate(b) = self {
            map.insert("r".into(), json!(b.lambda.r));
            map.insert("lambda_order".into(), json!(b.lambda.lambda_order));
            map.insert("lambda_evidence".into(), json!(b.lambda.evidence));
        }
        Value::Object(map)
    }
}

impl Descriptor {
    fn to_json(&self) -> Value {
        json!({
            "family": self.family_name(),
            "n": self.n,
            "q": self.q,
            "s": self.s,
            "l": self.l,
            "p": self.p,
        })
    }

    fn family_name(&self) -> &'static str {
        match self.family {
            FamilyArg::Su => "SU",
            FamilyArg::Psu => "PSU",
            FamilyArg::Pgu => "PGU",
            FamilyArg::PguPhi => "PGUPhi",
        }
    }

    fn build(&self) -> Result<Built, Failure> {
        let linear = |q: Option<u64>| {
            if self.s.is_some() || self.l.is_some() {
                return Err(Failure::Parameter(format!("--s/--l do not apply to {}", self.family_name())));
            }
            q.ok_or_else(|| Failure::Parameter(format!("{} needs --q", self.family_name())))
        };
        Ok(match self.family {
            FamilyArg::Su => Built::Sphere(Box::new(sphere_sun(self.n, linear(self.q)?, self.p)?)),
            FamilyArg::Psu => Built::Sphere(Box::new(sphere_psun(self.n, linear(self.q)?, self.p)?)),
            FamilyArg::Pgu => Built::Sphere(Box::new(sphere_pgun(self.n, linear(self.q)?, self.p)?)),
            FamilyArg::PguPhi => {
                let (Some(s), Some(l)) = (self.s, self.l) else {
                    return Err(Failure::Parameter("PGUPhi needs --s and --l".into()));
                };
                if self.q.is_some() {
                    return Err(Failure::Parameter("PGUPhi takes --s and --l, not --q".into()));
                }
                Built::Degenerate(Box::new(build_pgun_phi(self.n, s, l, self.p)?))
            }
        })
    }
}

fn cmd_verify(desc: &Descriptor, oracle: bool, heavy: bool) -> Result<Value, Failure> {
    let t = Instant::now();
    let built = desc.build()?;
    let construct_ms = ms(t);

    let t = Instant::now();
    let acc = chain_ce_xh(built.group(), built.sphere())?;
    let cycle = verify_cycle_nonzero(&acc.chain);
    let (conditions, image, mut passed) = match &built {
        Built::Sphere(c) => {
            let rep = verify_qsphere(&c.group, &c.sphere)?;
            let image_ok = c.image_report.as_ref().is_none_or(|r| r.passed());
            let ok = rep.passed() && image_ok;
            (serde_json::to_value(&rep), serde_json::to_value(&c.image_report), ok)
        }
        Built::Degenerate(b) => {
            let rep = verify_degenerate_hypotheses(b)?;
            let ok = rep.passed();
            (serde_json::to_value(&rep), Ok(Value::Null), ok)
        }
    };
    passed &= cycle.is_cycle && cycle.support_size > 0;
    let verify_ms = ms(t);

    let t = Instant::now();
    let oracle_report = if !oracle {
        Value::Null
    } else if let Built::Degenerate(_) = built {
        json!({
            "status": "skipped",
            "reason": "the field-automorphism group is not enumerated; use --oracle-heavy for the centraliser scan",
        })
    } else {
        let o = sphere_oracle(built.group(), &acc.chain, desc.p, DEFAULT_CAP, BETTI_GUARD)
            .map_err(|e| Failure::Internal(e.to_string()))?;
        passed &= o.passed();
        serde_json::to_value(&o).expect("serialisable")
    };
    let scan = match &built {
        Built::Degenerate(b) if heavy && b.n == 2 => {
            let s = centralizer_scan_pgu2_phi(&b.group, &b.sphere.e_gens, desc.p)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            passed &= s.extra_order_p == 0;
            serde_json::to_value(&s).expect("serialisable")
        }
        _ => Value::Null,
    };
    let oracle_ms = ms(t);

    let (psu_case, mode) = match &built {
        Built::Sphere(c) => (json!(c.psu_case), json!(c.sphere.mode)),
        Built::Degenerate(b) => (Value::Null, json!(b.sphere.mode)),
    };
    Ok(json!({
        "command": "verify",
        "parameters": desc.to_json(),
        "scalars": built.scalars(),
        "mode": mode,
        "psu_case": psu_case,
        "rank": built.sphere().rank(),
        "conditions": conditions.expect("serialisable"),
        "image": image.expect("serialisable"),
        "cycle": cycle,
        "oracle": oracle_report,
        "centralizer_scan": scan,
        "timings_ms": { "construct": construct_ms, "verify": verify_ms, "oracle": oracle_ms },
        "passed": passed,
    }))
}

fn sun_table(n: Option<usize>, q: Option<u64>) -> Result<SunTable, Failure> {
    let (Some(n), Some(q)) = (n, q) else {
        return Err(Failure::Parameter("this theorem needs --n and --q".into()));
    };
    if n < 2 {
        return Err(Failure::Parameter(format!("n = {n} must be at least 2")));
    }
    let f = Field::quadratic_over(q).map_err(|e| Failure::Parameter(e.to_string()))?;
    let sc = BraidScalars::select(&f).map_err(|e| Failure::Parameter(e.to_string()))?;
    enumerate_sun(&f, n, &sc).map_err(|e| Failure::Parameter(e.to_string()))
}

fn cmd_theorem(args: &TheoremArgs, seed: u64) -> Result<Value, Failure> {
    let t = Instant::now();
    let report: TheoremReport = match args.name {
        TheoremName::NoSquares => {
            let table = sun_table(args.n, args.q)?;
            let mode = StepMode::for_field(&table.field);
            check_no_squares(&table, mode)
        }
        TheoremName::FaithfulTorus => check_faithful_on_torus(&sun_table(args.n, args.q)?),
        TheoremName::WeightedSums => check_weighted_sums(&sun_table(args.n, args.q)?, args.samples, args.max_len, seed),
        TheoremName::NormalFormProfiles => check_normal_form_profiles(&sun_table(args.n, args.q)?),
        TheoremName::CentreTwisted => {
            centre_twisted_uniqueness(&sun_table(args.n, args.q)?).map_err(|e| Failure::Internal(e.to_string()))?
        }
        TheoremName::Adjacency => check_adjacency_transfer(&sun_table(args.n, args.q)?),
        TheoremName::Signature => check_signature_product(args.r),
        TheoremName::Boundary => {
            check_boundary_formula(args.p, args.r).map_err(|e| Failure::Parameter(e.to_string()))?
        }
    };
    let passed = report.passed();
    let mut v = serde_json::to_value(&report).expect("serialisable");
    v["command"] = json!("theorem");
    v["passed"] = json!(passed);
    v["timings_ms"] = json!({ "check": ms(t) });
    Ok(v)
}

/// The export payload: JSON report, or OFF text.
enum Export {
    Json(Value),
    Off(String),
}

fn cmd_export(desc: &Descriptor, format: Format) -> Result<Export, Failure> {
    let built = desc.build()?;
    let acc = chain_ce_xh(built.group(), built.sphere())?;
    match format {
        Format::Off => Ok(Export::Off(triangulate(built.group(), built.sphere())?.to_off())),
        Format::Json => {
            let (tri, mesh_error) = match triangulate(built.group(), built.sphere()) {
                Ok(t) => (serde_json::to_value(&t).expect("serialisable"), Value::Null),
                Err(e) => (Value::Null, json!(e.to_string())),
            };
            Ok(Export::Json(json!({
                "command": "export",
                "parameters": desc.to_json(),
                "rank": built.sphere().rank(),
                "chain": acc.chain.to_json(),
                "triangulation": tri,
                "mesh_error": mesh_error,
            })))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Parameter(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Parameter(e.to_string()))?;
    }
    let report = match &cli.command {
        Command::Verify { desc, oracle, oracle_heavy } => cmd_verify(desc, *oracle, *oracle_heavy)?,
        Command::Theorem(args) => cmd_theorem(args, cli.seed)?,
        Command::Export { desc, format } => {
            match cmd_export(desc, *format)? {
                Export::Off(text) => emit(text.trim_end(), cli.out.as_ref())?,
                Export::Json(v) => emit(&serde_json::to_string_pretty(&v).expect("serialisable"), cli.out.as_ref())?,
            }
            return Ok(true);
        }
    };
    let passed = report["passed"].as_bool().unwrap_or(false);
    emit(&serde_json::to_string_pretty(&report).expect("serialisable"), cli.out.as_ref())?;
    eprintln!("{}", if passed { "pass" } else { "FAIL" });
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Parameter(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

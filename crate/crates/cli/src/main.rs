use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use modcurve::chartab::{character_table, CharacterTable};
use modcurve::golden::{default_fixture_dir, reproduce_appendices};
use modcurve::group::{build_group, Variant};
use modcurve::moduli::{exponent_of, su2_census, su3_count, su3_exponents_p7};
use modcurve::picard::{picard_structure, primary_parts, DyckSignature, SectionCalculator};
use modcurve::poly::run_identity_checks;
use modcurve::repring::{character, decompose, molien, sym_power, tensor};
use modcurve::solver::{irreducibility, rank_three_specs_p7, rotation_spec, solve_triple, SolveConfig};
use modcurve::Error;

/// Results are also written here (plus a run manifest) when set.
const OUTPUT_ENV: &str = "MODCURVE_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "modcurve", version, about = "Exact representation theory and flat bundles around the modular curves X(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Sl2,
    Psl2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact character table of SL(2,p) or PSL(2,p).
    Chartab {
        #[arg(short)]
        p: u64,
        #[arg(long, value_enum, default_value = "sl2")]
        group: Group,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decompose a tensor product of two SL(2,p) irreps.
    Tensor {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        a: String,
        #[arg(short)]
        b: String,
    },
    /// Decompose the n-th symmetric power of an SL(2,p) irrep.
    Sympow {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        r: String,
        #[arg(short)]
        n: usize,
    },
    /// Multiplicity of TARGET in S^n(SOURCE) for n = 0..=N.
    Molien {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        target: String,
        #[arg(long)]
        source: String,
        #[arg(short = 'N', default_value_t = 40)]
        n: usize,
    },
    /// Picard group of the orbifold with the given branching orders.
    Pic {
        #[arg(long, value_delimiter = ',', required = true)]
        signature: Vec<u64>,
    },
    /// Numerical data of X(p) and the G-modules H^0(lambda^a).
    Modular {
        #[arg(short)]
        p: u64,
        /// Largest power of lambda to decompose.
        #[arg(long, default_value_t = 0)]
        max_a: i64,
    },
    /// Irreducible SU(2) representations of the (2,3,p) central extension.
    Su2Census {
        #[arg(short)]
        p: u64,
    },
    /// Exponents a with E restricted to X(p) equal to lambda^a.
    Exponents {
        #[arg(short)]
        p: u64,
    },
    /// Number of irreducible SU(3) representations.
    Su3Count {
        #[arg(short)]
        p: u64,
    },
    /// Construct and certify a unitary triple. Rank 2: K is the rotation
    /// number. Rank 3 (p = 7 only): K = 1..4 selects a row of the rank-3 table.
    Solve {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        k: u64,
        #[arg(short, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        r: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the determinantal, Pfaffian and Hessian identities.
    VerifyIdentities,
    /// Regenerate the SL(2,7) golden tables and diff them against the fixtures.
    ReproduceAppendices {
        #[arg(short = 'N', default_value_t = 40)]
        n: usize,
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::CensusMismatch { .. } | Error::RouteDisagreement(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// A result document and whether it certifies what was asked.
struct Outcome {
    name: &'static str,
    body: Value,
    text: Option<String>,
    ok: bool,
}

impl Outcome {
    fn pass(name: &'static str, body: Value) -> Outcome {
        Outcome { name, body, text: None, ok: true }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn sl_table(p: u64) -> Result<CharacterTable, Failure> {
    Ok(character_table(&build_group(p, Variant::SL2)?)?)
}

fn label(t: &CharacterTable, s: &str) -> Result<usize, Failure> {
    let name = if s.starts_with('V') { s.to_string() } else { format!("V{s}") };
    Ok(t.index_of(&name)?)
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    Ok(match cmd {
        Command::Chartab { p, group, format } => {
            let v = match group {
                Group::Sl2 => Variant::SL2,
                Group::Psl2 => Variant::PSL2,
            };
            let t = character_table(&build_group(*p, v)?)?;
            let text = matches!(format, Format::Tsv).then(|| t.to_tsv());
            Outcome { name: "chartab", body: to_value(&t.export()), text, ok: true }
        }
        Command::Tensor { p, a, b } => {
            let t = sl_table(*p)?;
            let (i, j) = (label(&t, a)?, label(&t, b)?);
            let d = tensor(&t, i, j)?;
            Outcome::pass(
                "tensor",
                json!({"p": p, "a": t.irreps[i].name, "b": t.irreps[j].name,
                       "dimension": d.dimension(&t), "decomposition": d.as_map(), "display": d.to_string()}),
            )
        }
        Command::Sympow { p, r, n } => {
            let t = sl_table(*p)?;
            let i = label(&t, r)?;
            let d = decompose(&t, &sym_power(&t, &character(&t, i), *n))?;
            Outcome::pass(
                "sympow",
                json!({"p": p, "irrep": t.irreps[i].name, "n": n,
                       "dimension": d.dimension(&t), "decomposition": d.as_map(), "display": d.to_string()}),
            )
        }
        Command::Molien { p, target, source, n } => {
            let t = sl_table(*p)?;
            let (i, j) = (label(&t, target)?, label(&t, source)?);
            let s = molien(&t, i, j, *n)?;
            let coeffs: Vec<String> = s.coeffs.iter().map(|c| c.to_string()).collect();
            Outcome::pass(
                "molien",
                json!({"p": p, "target": t.irreps[i].name, "source": t.irreps[j].name, "N": n, "coefficients": coeffs}),
            )
        }
        Command::Pic { signature } => {
            let sig = DyckSignature::new(signature.clone())?;
            let ps = picard_structure(&sig)?;
            let mut body = to_value(&ps);
            body["torsion_primary_parts"] = to_value(&primary_parts(&ps.torsion));
            Outcome::pass("pic", body)
        }
        Command::Modular { p, max_a } => {
            let calc = SectionCalculator::new(*p)?;
            let data = modcurve::picard::modular_data(*p)?;
            let first = 2 * *p as i64 - 12;
            let mut decomps = BTreeMap::new();
            for a in first..=(*max_a).max(first + 3) {
                let s = calc.section(a)?;
                let names: Vec<String> = s
                    .decomposition
                    .parts
                    .iter()
                    .flat_map(|(_, n, m)| std::iter::repeat(n.clone()).take(*m as usize))
                    .collect();
                decomps.insert(a.to_string(), json!({"dimension": s.dimension, "group": s.variant, "irreps": names}));
            }
            let mut body = to_value(&data);
            body["decompositions"] = to_value(&decomps);
            Outcome::pass("modular", body)
        }
        Command::Su2Census { p } => Outcome::pass("su2-census", to_value(&su2_census(*p)?)),
        Command::Exponents { p } => {
            let census = su2_census(*p)?;
            let rows: Vec<Value> = census
                .items
                .iter()
                .map(|t| match exponent_of(*p, t.k) {
                    Ok(s) => json!({"k": t.k, "a": s.a}),
                    Err(e) => json!({"k": t.k, "a": null, "error": e.to_string()}),
                })
                .collect();
            let mut body = json!({"p": p, "rank2": rows});
            if *p == 7 {
                body["rank3"] = to_value(&su3_exponents_p7());
            }
            Outcome::pass("exponents", body)
        }
        Command::Su3Count { p } => {
            let mut body = json!({"p": p, "count": su3_count(*p)?});
            if *p == 7 {
                body["table"] = to_value(&su3_exponents_p7());
            }
            Outcome::pass("su3-count", body)
        }
        Command::Solve { p, k, r, seed } => {
            let config = SolveConfig { seed: *seed, require_irreducible: *r == 3, ..SolveConfig::default() };
            let (label, spec, trace_sign) = if *r == 2 {
                let (spec, sign) = rotation_spec(*p, *k)?;
                (format!("k={k}"), spec, sign)
            } else {
                if *p != 7 {
                    return Err(Failure::Usage("rank 3 is available for p = 7 only".into()));
                }
                let specs = rank_three_specs_p7()?;
                let (l, s) = specs
                    .get((*k as usize).wrapping_sub(1))
                    .cloned()
                    .ok_or_else(|| Failure::Usage(format!("rank 3 row {k} is not in 1..=4")))?;
                (l.to_string(), s, 1)
            };
            let rep = solve_triple(&spec, &config);
            let traces = rep.tuple.as_ref().map(|t| {
                let tr = t.traces();
                json!({"A1": [tr[0].re, tr[0].im], "A2": [tr[1].re, tr[1].im],
                       "A3_renormalized": [tr[2].re * trace_sign as f64, tr[2].im * trace_sign as f64]})
            });
            let irreducible = rep.tuple.as_ref().map(irreducibility);
            let ok = rep.converged;
            Outcome {
                name: "solve",
                body: json!({"p": p, "rank": r, "label": label, "spec": spec, "config": config,
                             "traces": traces, "irreducible": irreducible, "report": rep}),
                text: None,
                ok,
            }
        }
        Command::VerifyIdentities => {
            let reports = run_identity_checks()?;
            // pass criteria: exact for the Pfaffian, exact after the scalar for
            // the Hessian, support and unit coefficients for the determinant
            let verdicts: BTreeMap<&str, bool> = reports
                .iter()
                .map(|r| {
                    let pass = match r.name {
                        "quartic-determinant" => r.support_match && r.unit_coefficients,
                        _ => r.exact_match,
                    };
                    (r.name, pass && r.specializations_agree)
                })
                .collect();
            let ok = verdicts.values().all(|v| *v);
            Outcome { name: "verify-identities", body: json!({"reports": reports, "passed": verdicts}), text: None, ok }
        }
        Command::ReproduceAppendices { n, fixtures } => {
            let dir = fixtures.clone().unwrap_or_else(default_fixture_dir);
            let report = reproduce_appendices(&dir, *n)?;
            let ok = report.passed;
            let mut text = String::new();
            for d in report.diffs.iter().filter(|d| !d.passed()) {
                for c in &d.cells {
                    text.push_str(&format!("{}\t{}\t{}\texpected {}\tcomputed {}\n", d.fixture, c.row, c.column, c.expected, c.computed));
                }
            }
            Outcome { name: "reproduce-appendices", body: to_value(&report), text: (!ok).then_some(text), ok }
        }
    })
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    parameters: Vec<String>,
    seed: Option<u64>,
    versions: BTreeMap<&'static str, &'static str>,
    wall_time_seconds: f64,
    outputs: Vec<String>,
}

/// Write via a temporary file and rename so readers never see partial output.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(tmp, path)
}

fn emit(out: &Outcome, args: &[String], seed: Option<u64>, elapsed: f64) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(&out.body).expect("serializable") + "\n";
    match &out.text {
        Some(t) if out.name == "chartab" => print!("{t}"),
        _ => print!("{json}"),
    }
    if let Some(t) = out.text.as_ref().filter(|_| !out.ok) {
        eprint!("{t}");
    }
    if let Some(dir) = std::env::var_os(OUTPUT_ENV) {
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir)?;
        let result = dir.join(format!("{}.json", out.name));
        write_atomic(&result, &json)?;
        let mut outputs = vec![result.display().to_string()];
        if let Some(t) = out.text.as_ref().filter(|_| out.name == "chartab") {
            let tsv = dir.join("chartab.tsv");
            write_atomic(&tsv, t)?;
            outputs.push(tsv.display().to_string());
        }
        let manifest = RunManifest {
            subcommand: out.name.to_string(),
            parameters: args.to_vec(),
            seed,
            versions: BTreeMap::from([("modcurve", env!("CARGO_PKG_VERSION"))]),
            wall_time_seconds: elapsed,
            outputs,
        };
        let m = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
        write_atomic(&dir.join(format!("{}.manifest.json", out.name)), &m)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = match &cli.command {
        Command::Solve { seed, .. } => Some(*seed),
        _ => None,
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok(out) => {
            if let Err(e) = emit(&out, &args[1..], seed, start.elapsed().as_secs_f64()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: modcurve <SUBCOMMAND> [OPTIONS]; see modcurve --help");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
    }
}

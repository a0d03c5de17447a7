//! `pc4` — build, verify and classify four-dimensional power-commutative
//! division algebras from K-tuple parameters.
//!
//! Exit codes: 0 success / property holds; 1 validation or usage error;
//! 2 a verification command found a property violation.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde::Deserialize;
use serde_json::json;

use pc4::algebra::basis_vector;
use pc4::classify;
use pc4::construct::KTuple;
use pc4::idempotent;

#[derive(Parser)]
#[command(name = "pc4", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the structure tensor of the algebra named by a K-tuple
    Build(SingleArgs),
    /// Run the identity, division and omnipresence checks
    Verify(SingleArgs),
    /// Idempotent census and the uniqueness verdict
    Idempotents(SingleArgs),
    /// Canonical form, pattern id and the witness rotation
    Canon(SingleArgs),
    /// Test two K-tuples for isomorphism
    Iso(PairArgs),
    /// Automorphism group of the named algebra
    Aut(SingleArgs),
    /// Print the multiplication table
    Table(SingleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Tolerance for residual checks
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Sample count for the statistical checks
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SingleArgs {
    /// Read the K-tuple from a JSON file
    #[arg(long = "in", value_name = "FILE", conflicts_with = "kappa")]
    input: Option<String>,
    /// K-tuple as inline JSON
    #[arg(long)]
    kappa: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    first: SingleArgs,
    /// Second K-tuple as inline JSON
    #[arg(long)]
    kappa2: Option<String>,
    /// Read the second K-tuple from a JSON file
    #[arg(long = "in2", value_name = "FILE", conflicts_with = "kappa2")]
    input2: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Input schema: {"x":[r,r,r],"y":[r,r,r],"z":[r,r,r],"d":[r,r,r],"lambda":r}
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KTupleInput {
    x: [f64; 3],
    y: [f64; 3],
    z: [f64; 3],
    d: [f64; 3],
    lambda: f64,
}

impl KTupleInput {
    fn into_ktuple(self) -> Result<KTuple> {
        KTuple::new(
            Vector3::from(self.x),
            Vector3::from(self.y),
            Vector3::from(self.z),
            Vector3::from(self.d),
            self.lambda,
        )
        .map_err(|e| anyhow!("{e}"))
    }
}

fn parse_kappa(inline: &Option<String>, file: &Option<String>) -> Result<KTuple> {
    let text = match (inline, file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?
        }
        (None, None) => bail!("missing input: pass --kappa JSON or --in FILE"),
    };
    let parsed: KTupleInput =
        serde_json::from_str(&text).context("malformed K-tuple JSON")?;
    parsed.into_ktuple()
}

fn kappa_json(k: &KTuple) -> serde_json::Value {
    json!({
        "x": k.x.as_slice(),
        "y": k.y.as_slice(),
        "z": k.z.as_slice(),
        "d": k.d.as_slice(),
        "lambda": k.lambda,
    })
}

fn emit(
    command: &str,
    input: serde_json::Value,
    result: serde_json::Value,
    common: &CommonArgs,
    text: String,
) {
    match common.format {
        Format::Json => {
            let out = json!({
                "command": command,
                "input": input,
                "result": result,
                "tolerances": { "tol": common.tol },
                "seed": common.seed,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Format::Text => println!("{text}"),
    }
}

/// Round to 6 significant digits for the text table.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let r = format!("{x:.decimals$}");
    // strip trailing zeros after the decimal point
    if r.contains('.') {
        r.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        r
    }
}

fn render_table(table: &pc4::AlgebraTable) -> String {
    let n = table.dim();
    let labels: Vec<String> = match table.labels() {
        Some(l) => l.to_vec(),
        None => (0..n).map(|i| format!("b{i}")).collect(),
    };
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec![String::from("*")];
    header.extend(labels.iter().cloned());
    rows.push(header);
    for i in 0..n {
        let mut row = vec![labels[i].clone()];
        for j in 0..n {
            let p = table.basis_product(i, j);
            let entries: Vec<String> = p.iter().map(|x| sig6(*x)).collect();
            row.push(format!("({})", entries.join(", ")));
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..=n)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(c, cell)| format!("{cell:>width$}", width = widths[c]))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Outcome of a command: output already printed; `violation` drives exit 2.
struct Outcome {
    violation: bool,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Build(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let table = k.build_pc_algebra().map_err(|e| anyhow!("{e}"))?;
            let text = render_table(&table);
            emit(
                "build",
                kappa_json(&k),
                serde_json::to_value(&table)?,
                &args.common,
                text,
            );
            Ok(Outcome { violation: false })
        }
        Command::Verify(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let c = &args.common;
            let table = k.build_pc_algebra().map_err(|e| anyhow!("{e}"))?;
            let e = basis_vector(4, 0);
            let third = table
                .check_third_power_assoc(c.samples, c.tol, c.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let polarized = table
                .check_polarized_identity(c.samples, c.tol, c.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let idp_comm = table
                .check_idempotent_commutation(&e, c.samples, c.tol, c.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let omni = table
                .check_omnipresent(&e, c.samples, c.tol, c.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let division = table
                .check_division_sampled(c.samples, 1e-10, c.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let via_isotope = k.build_pc_algebra_isotope_route().map_err(|e| anyhow!("{e}"))?;
            let route_distance = table
                .max_entry_distance(&via_isotope)
                .map_err(|e| anyhow!("{e}"))?;
            let routes_agree = route_distance < 1e-12;
            let passed = third.passed
                && polarized.passed
                && idp_comm.passed
                && omni.passed
                && division.passed
                && routes_agree;
            let text = format!(
                "third_power_assoc: {} (max residual {:.3e})\n\
                 polarized_identity: {} (max residual {:.3e})\n\
                 idempotent_commutation: {} (max residual {:.3e})\n\
                 omnipresence: {} (max residual {:.3e})\n\
                 division: {} (min |det| {:.3e})\n\
                 construction_routes_agree: {} (distance {:.3e})\n\
                 overall: {}",
                third.passed,
                third.max_residual,
                polarized.passed,
                polarized.max_residual,
                idp_comm.passed,
                idp_comm.max_residual,
                omni.passed,
                omni.max_residual,
                division.passed,
                division.min_abs_det,
                routes_agree,
                route_distance,
                if passed { "pass" } else { "FAIL" }
            );
            emit(
                "verify",
                kappa_json(&k),
                json!({
                    "third_power_assoc": serde_json::to_value(&third)?,
                    "polarized_identity": serde_json::to_value(&polarized)?,
                    "idempotent_commutation": serde_json::to_value(&idp_comm)?,
                    "omnipresence": serde_json::to_value(&omni)?,
                    "division": serde_json::to_value(&division)?,
                    "route_distance": route_distance,
                    "passed": passed,
                }),
                c,
                text,
            );
            Ok(Outcome { violation: !passed })
        }
        Command::Idempotents(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let report = idempotent::global_idempotent_census(&k, 400, args.common.tol)
                .map_err(|e| anyhow!("{e}"))?;
            let text = format!(
                "unique: {}\nbranch: {:?}\nanalytic points: {}{}\nnewton points: {}{}\ncensuses agree: {}",
                report.verdict.unique,
                report.verdict.branch,
                report.analytic_points.len(),
                if report.analytic_curve_flag {
                    " (continuum)"
                } else {
                    ""
                },
                report.newton.idempotents.len(),
                if report.newton.curve_flag {
                    " (continuum)"
                } else {
                    ""
                },
                report.agree,
            );
            let agree = report.agree;
            emit(
                "idempotents",
                kappa_json(&k),
                serde_json::to_value(&report)?,
                &args.common,
                text,
            );
            Ok(Outcome { violation: !agree })
        }
        Command::Canon(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let canonical = classify::canonicalize(&k, 1e-9).map_err(|e| anyhow!("{e}"))?;
            let (in_section, _) =
                classify::in_cross_section(&canonical.kappa, 1e-8).map_err(|e| anyhow!("{e}"))?;
            if !in_section {
                bail!("canonical output fails the cross-section check");
            }
            let text = format!(
                "pattern: {}\ncanonical kappa: {}\nwitness:\n{}",
                canonical.pattern_id,
                kappa_json(&canonical.kappa),
                canonical.witness,
            );
            emit(
                "canon",
                kappa_json(&k),
                serde_json::to_value(&canonical)?,
                &args.common,
                text,
            );
            Ok(Outcome { violation: false })
        }
        Command::Iso(args) => {
            let a = parse_kappa(&args.first.kappa, &args.first.input)?;
            let b = parse_kappa(&args.kappa2, &args.input2)
                .context("second tuple (--kappa2/--in2)")?;
            let witness =
                classify::are_isomorphic(&a, &b, args.first.common.tol).map_err(|e| anyhow!("{e}"))?;
            let (result, text, violation) = match &witness {
                Some(g) => (
                    json!({
                        "isomorphic": true,
                        "witness": g.as_slice(),
                    }),
                    format!("isomorphic\nwitness:\n{g}"),
                    false,
                ),
                None => (
                    json!({ "isomorphic": false }),
                    String::from("not isomorphic"),
                    true,
                ),
            };
            emit(
                "iso",
                json!({ "kappa": kappa_json(&a), "kappa2": kappa_json(&b) }),
                result,
                &args.first.common,
                text,
            );
            Ok(Outcome { violation })
        }
        Command::Aut(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let aut = classify::aut_classification(&k).map_err(|e| anyhow!("{e}"))?;
            let text = format!("{aut:?}");
            emit(
                "aut",
                kappa_json(&k),
                serde_json::to_value(&aut)?,
                &args.common,
                text,
            );
            Ok(Outcome { violation: false })
        }
        Command::Table(args) => {
            let k = parse_kappa(&args.kappa, &args.input)?;
            let table = k.build_pc_algebra().map_err(|e| anyhow!("{e}"))?;
            let text = render_table(&table);
            emit(
                "table",
                kappa_json(&k),
                json!({ "table": text }),
                &args.common,
                text.clone(),
            );
            Ok(Outcome { violation: false })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome { violation: false }) => ExitCode::SUCCESS,
        Ok(Outcome { violation: true }) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end for `matrix-census`.
//!
//! Every successful command prints one JSON envelope
//! `{schema_version, command, params, result, timing_ms}` on stdout. Errors
//! print a single JSON line `{"error": {"code", "message"}}` on stderr.
//!
//! Exit codes: 0 success, 1 domain error (or a failed `verify`), 2 usage
//! error, 3 budget exceeded.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use matrix_census::census::{
    count_from_profile, count_irreducible_case, count_with_charpoly, verify_with, CensusOptions,
    VerifyMode, VerifyReport, DEFAULT_ENUMERATION_BUDGET,
};
use matrix_census::centralizer::{
    centralizer, centralizer_unit_count, is_polynomial_centralizer, DEFAULT_UNIT_BUDGET,
};
use matrix_census::factor::{factorize, monic_polynomials, Factorization};
use matrix_census::field::{prime_power_decompose, Field, DEFAULT_FIELD_BUDGET};
use matrix_census::{
    format_matrix, format_poly, orbit_stabilizer_report, parse_matrix, parse_poly, rcf, Error, Poly,
};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const FORMAT_HELP: &str = "\
Text formats:
  field element  decimal index in [0, q); for GF(p^k) the base-p digits of the
                 index are the coefficients of the element in the generator t
  polynomial     terms c*x^e, x^e, x or c joined by '+', e.g. \"x^2+x+1\", \"2*x^3+1\"
  matrix         rows separated by ';', entries by ',', e.g. \"0,1;1,1\"";

#[derive(Parser, Debug)]
#[command(
    name = "matrix-census",
    version,
    about = "Count matrices over finite fields by characteristic polynomial",
    after_help = FORMAT_HELP
)]
pub struct Cli {
    /// Report timing_ms as 0 so that output is byte-stable across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field order, or the characteristic when --k is given. Prime powers such as 4 are accepted.
    #[arg(long)]
    pub q: u64,
    /// Extension degree (requires --q to be prime).
    #[arg(long)]
    pub k: Option<u32>,
    /// Maximum field order.
    #[arg(long, default_value_t = DEFAULT_FIELD_BUDGET)]
    pub field_budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Formula,
    Bruteforce,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of n×n matrices with a given characteristic polynomial.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        /// Matrix dimension (defaults to the degree of --poly).
        #[arg(long)]
        n: Option<usize>,
        /// Monic characteristic polynomial; omitted means "any irreducible of degree n".
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the counting formulas against a brute-force census.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Worker threads for the census.
        #[arg(long, env = "MATRIX_CENSUS_THREADS")]
        threads: Option<usize>,
        /// Maximum number of matrices (and polynomials) to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Rational canonical form of a matrix.
    Rcf {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        matrix: String,
    },
    /// Centralizer of a matrix and its unit count.
    Centralizer {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        matrix: String,
        /// Maximum number of centralizer elements enumerated for the unit count.
        #[arg(long, default_value_t = DEFAULT_UNIT_BUDGET)]
        budget: u64,
    },
    /// Factor a polynomial into irreducibles.
    Factor {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orbit-stabilizer data for a matrix with irreducible characteristic polynomial.
    Orbit {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        matrix: String,
    },
}

/// Test-only switches.
#[derive(Clone, Copy, Debug, Default)]
pub struct Hooks {
    /// Adds one to every general-formula count used by `verify`.
    pub corrupt_formula: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum CliError {
    Domain(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn error_line(code: &str, message: &str) -> String {
    json!({ "error": { "code": code, "message": message } }).to_string()
}

fn fail(err: CliError) -> Outcome {
    let (code, line) = match err {
        CliError::Domain(e) => {
            let exit = if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_DOMAIN
            };
            (exit, error_line(e.code(), &e.to_string()))
        }
        CliError::Usage(msg) => (EXIT_USAGE, error_line("usage", &msg)),
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: line + "\n",
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_hooks(args, Hooks::default())
}

pub fn run_with_hooks<I, T>(args: I, hooks: Hooks) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("").to_string();
                    fail(CliError::Usage(
                        first.trim_start_matches("error: ").to_string(),
                    ))
                }
            };
        }
    };
    let start = Instant::now();
    let no_timing = cli.no_timing;
    match execute(cli.command, hooks) {
        Ok(Response::Envelope {
            command,
            params,
            result,
            code,
        }) => {
            let timing = if no_timing {
                0
            } else {
                start.elapsed().as_millis() as u64
            };
            let envelope = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "params": params,
                "result": result,
                "timing_ms": timing,
            });
            Outcome {
                code,
                stdout: serde_json::to_string_pretty(&envelope).expect("serializable") + "\n",
                stderr: String::new(),
            }
        }
        Ok(Response::Raw { text, code }) => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => fail(e),
    }
}

enum Response {
    Envelope {
        command: &'static str,
        params: Value,
        result: Value,
        code: i32,
    },
    Raw {
        text: String,
        code: i32,
    },
}

fn build_field(args: &FieldArgs) -> Result<(Field, Value), CliError> {
    let (p, k) = match args.k {
        Some(k) => (args.q, k),
        None => prime_power_decompose(args.q).ok_or_else(|| {
            CliError::Domain(Error::InvalidArgument(format!(
                "--q {} is not a prime power",
                args.q
            )))
        })?,
    };
    let field = Field::with_budget(p, k, args.field_budget)?;
    let params = json!({
        "q": field.order(),
        "p": p,
        "k": k,
    });
    Ok((field, params))
}

fn with(mut params: Value, extra: Value) -> Value {
    if let (Value::Object(base), Value::Object(more)) = (&mut params, extra) {
        for (k, v) in more {
            base.insert(k, v);
        }
    }
    params
}

fn factorization_json(f: &Factorization) -> Value {
    Value::Array(
        f.factors
            .iter()
            .map(|(p, m)| json!({ "factor": format_poly(p), "multiplicity": m }))
            .collect(),
    )
}

fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn execute(command: Command, hooks: Hooks) -> Result<Response, CliError> {
    match command {
        Command::Count {
            field,
            n,
            poly,
            seed,
        } => {
            let (field, params) = build_field(&field)?;
            let (n, result) = match &poly {
                None => {
                    let n = n.ok_or_else(|| {
                        CliError::Usage("--n is required when --poly is omitted".into())
                    })?;
                    let count = count_irreducible_case(&field.order_big(), n)?;
                    (
                        n,
                        json!({ "count": big(&count), "factorization": [], "formula": "theorem1" }),
                    )
                }
                Some(text) => {
                    let g = parse_poly(text, &field)?;
                    let degree = g.degree().unwrap_or(0);
                    if let Some(n) = n {
                        if n != degree {
                            return Err(Error::InvalidArgument(format!(
                                "polynomial {g} has degree {degree}, expected {n}"
                            ))
                            .into());
                        }
                    }
                    if degree == 0 {
                        return Err(Error::ConstantPolynomial(g.to_string()).into());
                    }
                    if !g.is_monic() {
                        return Err(Error::NotMonic(g.to_string()).into());
                    }
                    let factorization = factorize(&g, seed)?;
                    let count =
                        count_from_profile(&field.order_big(), &factorization.degree_profile())?;
                    let formula = if factorization.is_irreducible() {
                        "theorem1"
                    } else {
                        "general"
                    };
                    (
                        degree,
                        json!({
                            "count": big(&count),
                            "factorization": factorization_json(&factorization),
                            "formula": formula,
                        }),
                    )
                }
            };
            let params = with(
                params,
                json!({ "n": n, "poly": poly.map(|t| format_poly(&parse_poly(&t, &field).expect("parsed above"))), "seed": seed }),
            );
            Ok(Response::Envelope {
                command: "count",
                params,
                result,
                code: EXIT_OK,
            })
        }
        Command::Verify {
            field,
            n,
            mode,
            threads,
            budget,
            format,
        } => {
            let (field, params) = build_field(&field)?;
            let mode = match mode {
                ModeArg::Formula => VerifyMode::Formula,
                ModeArg::Bruteforce => VerifyMode::Bruteforce,
                ModeArg::Both => VerifyMode::Both,
            };
            let options = CensusOptions { budget, threads };
            let corrupt = hooks.corrupt_formula;
            let formula =
                move |g: &Poly| count_with_charpoly(g).map(|c| if corrupt { c + 1u32 } else { c });
            let report = verify_with(&field, n, mode, &options, &formula)?;
            let code = if report.pass { EXIT_OK } else { EXIT_DOMAIN };
            if format == FormatArg::Csv {
                return Ok(Response::Raw {
                    text: verify_csv(&field, n, &report, &formula)?,
                    code,
                });
            }
            let params = with(
                params,
                json!({ "n": n, "mode": mode.as_str(), "budget": budget }),
            );
            Ok(Response::Envelope {
                command: "verify",
                params,
                result: verify_json(&report),
                code,
            })
        }
        Command::Rcf { field, matrix } => {
            let (field, params) = build_field(&field)?;
            let m = parse_matrix(&matrix, &field)?;
            let form = rcf(&m);
            let blocks: Vec<Value> = form
                .blocks
                .iter()
                .map(|b| json!(format_poly(&b.poly)))
                .collect();
            let details: Vec<Value> = form
                .blocks
                .iter()
                .map(|b| json!({ "prime": format_poly(&b.prime), "exponent": b.exponent }))
                .collect();
            Ok(Response::Envelope {
                command: "rcf",
                params: with(params, json!({ "matrix": format_matrix(&m) })),
                result: json!({
                    "blocks": blocks,
                    "block_factors": details,
                    "transition": format_matrix(&form.transition),
                    "canonical_matrix": format_matrix(&form.block_matrix()),
                    "charpoly": format_poly(&m.charpoly()),
                }),
                code: EXIT_OK,
            })
        }
        Command::Centralizer {
            field,
            matrix,
            budget,
        } => {
            let (field, params) = build_field(&field)?;
            let m = parse_matrix(&matrix, &field)?;
            let desc = centralizer(&m);
            let units = match centralizer_unit_count(&m, budget) {
                Ok(u) => big(&u),
                Err(e) if e.is_budget() => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(Response::Envelope {
                command: "centralizer",
                params: with(
                    params,
                    json!({ "matrix": format_matrix(&m), "budget": budget }),
                ),
                result: json!({
                    "dimension": desc.dimension,
                    "order": big(&desc.order),
                    "basis": desc.basis.iter().map(format_matrix).collect::<Vec<_>>(),
                    "units": units,
                    "is_polynomial_centralizer": is_polynomial_centralizer(&m),
                    "charpoly": format_poly(&m.charpoly()),
                    "minpoly": format_poly(&m.minpoly()),
                }),
                code: EXIT_OK,
            })
        }
        Command::Factor { field, poly, seed } => {
            let (field, params) = build_field(&field)?;
            let g = parse_poly(&poly, &field)?;
            let f = factorize(&g, seed)?;
            Ok(Response::Envelope {
                command: "factor",
                params: with(params, json!({ "poly": format_poly(&g), "seed": seed })),
                result: json!({
                    "leading": f.leading.index(),
                    "factors": factorization_json(&f),
                    "irreducible": f.is_irreducible(),
                }),
                code: EXIT_OK,
            })
        }
        Command::Orbit { field, matrix } => {
            let (field, params) = build_field(&field)?;
            let m = parse_matrix(&matrix, &field)?;
            let r = orbit_stabilizer_report(&m)?;
            Ok(Response::Envelope {
                command: "orbit",
                params: with(params, json!({ "matrix": format_matrix(&m) })),
                result: json!({
                    "charpoly": format_poly(&r.charpoly),
                    "gl_order": big(&r.gl_order),
                    "stabilizer_order": big(&r.stabilizer_order),
                    "orbit_size": big(&r.orbit_size),
                    "formula_count": big(&r.formula_count),
                    "consistent": r.consistent,
                }),
                code: EXIT_OK,
            })
        }
    }
}

fn verify_json(report: &VerifyReport) -> Value {
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "check": m.check,
                "polynomial": m.polynomial.as_ref().map(format_poly),
                "observed": big(&m.observed),
                "expected": big(&m.expected),
            })
        })
        .collect();
    let mut result = Map::new();
    result.insert("pass".into(), json!(report.pass));
    result.insert("mismatches".into(), Value::Array(mismatches));
    result.insert("total".into(), big(&report.total));
    result.insert("expected_total".into(), big(&report.expected_total));
    if let Some(p) = &report.partition {
        result.insert(
            "partition".into(),
            json!({ "polynomials": p.polynomials, "sum": big(&p.sum), "expected": big(&p.expected) }),
        );
    }
    if let Some(c) = &report.census {
        let entries: Vec<Value> = c
            .entries
            .iter()
            .map(|(g, count)| json!({ "polynomial": format_poly(g), "count": big(count) }))
            .collect();
        result.insert("census".into(), Value::Array(entries));
    }
    Value::Object(result)
}

fn verify_csv(
    field: &Field,
    n: usize,
    report: &VerifyReport,
    formula: &dyn Fn(&Poly) -> matrix_census::Result<BigUint>,
) -> Result<String, CliError> {
    let mut out = String::from("polynomial,census,formula\n");
    let mut polys: Vec<Poly> = monic_polynomials(field, n).collect();
    polys.sort();
    for g in polys {
        let census = report
            .census
            .as_ref()
            .map(|c| c.count(&g).to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{}\n",
            format_poly(&g),
            census,
            formula(&g)?
        ));
    }
    Ok(out)
}

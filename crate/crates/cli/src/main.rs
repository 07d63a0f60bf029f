//! `indkit` command-line front end. Every subcommand prints one JSON
//! envelope `{"ok", "result", "error"}` on standard output.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use indkit::exactpoly::parse_rational;
use indkit::liealg::{check_theorem_b, derived_series, is_solvable, lie_closure, orbit_tangent_dim};
use indkit::plane::{
    check_y_term, free_word_eval, invert, is_member_f_closure, jvk_factorize, parse_word, phi_power,
    phi_power_truncated, s_normal_form, torus_conjugation_limit,
};
use indkit::spectral::{exp_scaled, jordan_decompose, log_unipotent_map, minimal_torus, DEFAULT_DEGREE_CAP};
use indkit::{verify, Automorphism, Error, PolyMap, Rational, VectorField};

#[derive(Parser)]
#[command(name = "indkit", version, about = "Exact computations with polynomial automorphisms and vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Stop the bracket closure once the span exceeds this dimension.
    #[arg(long, env = "INDKIT_DIM_CAP", default_value_t = 64)]
    dim_cap: usize,
    /// Stop the bracket closure after this many passes.
    #[arg(long, env = "INDKIT_DEPTH_CAP", default_value_t = 12)]
    depth_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// `F ∘ G`.
    Compose { f: String, g: String },
    /// Inverse of a plane automorphism.
    Invert { map: String },
    /// Jacobian matrix and determinant.
    Jacobian { map: String },
    /// Lie bracket `[A, B]`.
    Bracket { a: String, b: String },
    Divergence { field: String },
    /// Push a field forward along an automorphism.
    Pushforward {
        field: String,
        map: String,
        /// Inverse of MAP; required outside the plane.
        #[arg(long)]
        inverse: Option<String>,
    },
    /// Bracket closure of a family of fields.
    Closure {
        #[arg(required = true)]
        fields: Vec<String>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Derived series of the closure.
    DerivedSeries {
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, default_value_t = 16)]
        max_steps: usize,
        #[command(flatten)]
        caps: Caps,
    },
    /// Semisimple and nilpotent parts of a locally finite field.
    Jordan {
        field: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
    },
    /// `exp(t δ)` of a locally nilpotent field.
    Exp {
        field: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Logarithm of a unipotent automorphism.
    Log {
        map: String,
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Smallest torus containing commuting toral fields.
    MinimalTorus {
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        /// Plane automorphism diagonalizing the fields.
        #[arg(long)]
        conjugator: Option<String>,
    },
    /// Amalgamated-product factorization of a plane automorphism.
    Jvk { map: String },
    /// Normal form in the S-invariant subgroup.
    NormalForm {
        input: String,
        /// Read INPUT as a word in u, v (capitals are inverses).
        #[arg(long)]
        word: bool,
    },
    /// Membership in the subgroup fixed by S.
    MemberF { map: String },
    /// `φ^k`, optionally truncated.
    PhiPower {
        k: usize,
        #[arg(long)]
        truncate: Option<u32>,
    },
    /// Coefficients of `y^(3k-1)` in the first component of `φ^k`.
    #[command(name = "check-lemma-342")]
    CheckLemma342 {
        #[arg(long)]
        kmax: usize,
    },
    /// Limit of `λ_t⁻¹ ∘ g ∘ λ_t` as `t -> 0`, `λ_t = (t^a x, t^b y)`.
    TorusLimit {
        map: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, required = true)]
        weights: Vec<i64>,
    },
    /// Orbit dimension at a point of the group generated by the fields.
    OrbitDim {
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
        point: Vec<String>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Unipotent-closure verdict for a family of locally nilpotent fields.
    TheoremB {
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, default_value_t = 16)]
        bound: usize,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[command(flatten)]
        caps: Caps,
    },
    /// Run the acceptance checks.
    VerifyAll {
        /// Run only these criteria.
        #[arg(long, num_args = 1..)]
        only: Vec<usize>,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Failed checks, with the report that shows which.
    Report(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Value, Failure>;

fn map(s: &str) -> Result<PolyMap, Error> {
    PolyMap::parse(s)
}

fn field(s: &str) -> Result<VectorField, Error> {
    VectorField::parse(s)
}

fn fields(ss: &[String]) -> Result<Vec<VectorField>, Error> {
    ss.iter().map(|s| field(s)).collect()
}

fn rational(s: &str) -> Result<Rational, Error> {
    parse_rational(s.trim())
}

fn automorphism(s: &str, inverse: Option<&str>) -> Result<Automorphism, Error> {
    let g = map(s)?;
    match inverse {
        Some(inv) => Automorphism::new(g, map(inv)?),
        None if g.dim() == 2 => invert(&g),
        None => Err(Error::InvalidArgument("an explicit --inverse is required outside the plane".into())),
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn run(cmd: Command) -> Outcome {
    Ok(match cmd {
        Command::Compose { f, g } => json!(map(&f)?.compose(&map(&g)?)?.to_string()),
        Command::Invert { map: m } => json!(automorphism(&m, None)?.inverse().to_string()),
        Command::Jacobian { map: m } => {
            let (rows, det) = map(&m)?.jacobian();
            json!({
                "matrix": rows.iter().map(|r| strings(r)).collect::<Vec<_>>(),
                "determinant": det.to_string(),
            })
        }
        Command::Bracket { a, b } => json!(field(&a)?.bracket(&field(&b)?)?.to_string()),
        Command::Divergence { field: f } => json!(field(&f)?.divergence().to_string()),
        Command::Pushforward { field: f, map: m, inverse } => {
            let g = automorphism(&m, inverse.as_deref())?;
            json!(field(&f)?.pushforward(&g)?.to_string())
        }
        Command::Closure { fields: fs, caps } => lie_closure(&fields(&fs)?, caps.dim_cap, caps.depth_cap)?.to_json(),
        Command::DerivedSeries { fields: fs, max_steps, caps } => {
            let report = lie_closure(&fields(&fs)?, caps.dim_cap, caps.depth_cap)?;
            if !report.is_closed() {
                return Err(Error::ClosureCapExceeded(report.status.as_str().into()).into());
            }
            let series = derived_series(&report.span, max_steps)?;
            json!({
                "dimensions": series.iter().map(|l| l.dim()).collect::<Vec<_>>(),
                "solvable": is_solvable(&report.span)?,
                "terms": series.iter().map(|l| l.basis_strings()).collect::<Vec<_>>(),
            })
        }
        Command::Jordan { field: f, degree_cap } => jordan_decompose(&field(&f)?, degree_cap)?.to_json(),
        Command::Exp { field: f, t, bound } => {
            let g = exp_scaled(&field(&f)?, &rational(&t)?, bound)?;
            json!({ "map": g.forward().to_string(), "inverse": g.inverse().to_string() })
        }
        Command::Log { map: m, bound } => json!(log_unipotent_map(&map(&m)?, bound)?.to_string()),
        Command::MinimalTorus { fields: fs, degree_cap, conjugator } => {
            let c = conjugator.as_deref().map(|s| automorphism(s, None)).transpose()?;
            minimal_torus(&fields(&fs)?, degree_cap, c.as_ref())?.to_json()
        }
        Command::Jvk { map: m } => {
            let g = map(&m)?;
            let w = jvk_factorize(&g)?;
            let check = w.inverse().apply_left(&g).is_identity();
            w.to_json(check)
        }
        Command::NormalForm { input, word } => {
            let g = if word { free_word_eval(&parse_word(&input)?) } else { map(&input)? };
            let w = s_normal_form(&g)?;
            let check = w.inverse().apply_left(&g).is_identity();
            w.to_json(check)
        }
        Command::MemberF { map: m } => is_member_f_closure(&map(&m)?)?.to_json(),
        Command::PhiPower { k, truncate } => match truncate {
            Some(d) => json!(phi_power_truncated(k, d).to_string()),
            None => json!(phi_power(k).to_string()),
        },
        Command::CheckLemma342 { kmax } => {
            let reports = (1..=kmax).map(check_y_term).collect::<Result<Vec<_>, _>>()?;
            let value = json!({
                "coefficients": reports.iter().map(|r| r.coefficient.to_string()).collect::<Vec<_>>(),
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            if let Some(r) = reports.iter().find(|r| !r.holds()) {
                return Err(Failure::Report(value, format!("check fails at k = {}", r.k)));
            }
            value
        }
        Command::TorusLimit { map: m, weights } => {
            json!(torus_conjugation_limit(&map(&m)?, (weights[0], weights[1]))?.to_string())
        }
        Command::OrbitDim { fields: fs, point, caps } => {
            let p = point.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?;
            json!({ "dimension": orbit_tangent_dim(&fields(&fs)?, &p, caps.dim_cap, caps.depth_cap)? })
        }
        Command::TheoremB { fields: fs, bound, degree_cap, caps } => {
            check_theorem_b(&fields(&fs)?, caps.dim_cap, caps.depth_cap, bound, degree_cap)?.to_json()
        }
        Command::VerifyAll { only } => {
            if let Some(id) = only.iter().find(|&&id| id == 0 || id > verify::CRITERIA.len()) {
                return Err(Failure::Usage(format!("no criterion {id}")));
            }
            let results = if only.is_empty() {
                verify::run_all()
            } else {
                only.iter().map(|&id| verify::run_criterion(id)).collect()
            };
            for r in &results {
                eprintln!("{}", r.line());
            }
            let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            let value = json!({
                "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "passed": results.len() - failed.len(),
                "total": results.len(),
            });
            if !failed.is_empty() {
                return Err(Failure::Report(value, format!("failed criteria: {failed:?}")));
            }
            value
        }
    })
}

fn envelope(ok: bool, result: Value, error: Value) -> String {
    json!({ "ok": ok, "result": result, "error": error }).to_string()
}

fn error_value(kind: &str, detail: String) -> Value {
    json!({ "kind": kind, "detail": detail })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.kind().to_string();
            println!("{}", envelope(false, Value::Null, error_value("usage", detail)));
            eprint!("{}", e.render());
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(result) => {
            println!("{}", envelope(true, result, Value::Null));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(detail)) => {
            println!("{}", envelope(false, Value::Null, error_value("usage", detail)));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            let code = if e.is_parse() { 2 } else { 1 };
            println!("{}", envelope(false, Value::Null, error_value(e.kind(), e.to_string())));
            ExitCode::from(code)
        }
        Err(Failure::Report(result, detail)) => {
            println!("{}", envelope(false, result, error_value("check_failed", detail)));
            ExitCode::from(1)
        }
    }
}

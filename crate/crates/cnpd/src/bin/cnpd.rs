//! Batch command-line front end: every subcommand reads JSON files and
//! prints one JSON document on stdout. Exit codes: 0 success, 2 validation
//! error, 3 domain error, 64 usage error.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cnpd::circuits::{enumerate_circuits, log_independent, CircuitError};
use cnpd::classify::{classify, similar_pattern, ClassifyError};
use cnpd::dirichlet::{
    cnp_check, ordered_factorization_count, zeta_factor_condition, DirichletError,
};
use cnpd::hp::{to_f64, Ctx, DEFAULT_PRECISION_BITS};
use cnpd::jsonio::{
    certificate_value, circuit_value, coefficients_from_value, coefficients_value, complex_value,
    gaussian_point_to_complex, parse_complex_component, parse_point, raw_spec_from_value,
    report_value, spec_value, variety_value, JsonError,
};
use cnpd::kernelspec::{
    normalize, solve_rho, weight_expansion, EvalError, HalfPlanePoint, KernelSpec, RawSpec,
    ValidationError,
};
use cnpd::numeric::{gram_matrix, psd_check, GramMode, NumericError};
use cnpd::variety::{build_variety, invert_point, member_exact, member_numeric, PointError};

#[derive(Parser)]
#[command(
    name = "cnpd",
    about = "Exact analysis of CNP Dirichlet series kernels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a kernel spec file
    Validate { spec: PathBuf },
    /// Solve the normalization root of a raw spec
    Rho {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Normalized weights of a raw spec
    Normalize {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Kernel weight expansion up to a limit
    Weights {
        spec: PathBuf,
        #[arg(long)]
        limit: u64,
    },
    /// CNP sign test on a weight coefficient file
    CnpCheck {
        weights: PathBuf,
        #[arg(long)]
        limit: u64,
    },
    /// Circuits of the frequency data
    Circuits { spec: PathBuf },
    /// Multiplier variety presentation
    Variety { spec: PathBuf },
    /// Membership of a point in the multiplier variety
    Member {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Recover the half-plane parameter of an orbit point
    InvertPoint {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Evaluate the feature map (or the kernel when --u is given)
    Eval {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Similar-pattern test between two specs
    Similar { a: PathBuf, b: PathBuf },
    /// Full classification decision between two specs
    Classify { a: PathBuf, b: PathBuf },
    /// Gram matrix over a point set plus a positivity check
    Gram {
        spec: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "kernel")]
        mode: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Ordered factorization count d_m(n)
    Dm {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u64,
    },
    /// Divisor-sum zeta-factor condition on a weight list
    ZetaFactor {
        spec: PathBuf,
        #[arg(long)]
        limit: u64,
    },
}

enum CliError {
    Validation { clause: String, detail: String },
    Domain { detail: String },
}

impl CliError {
    fn validation(clause: &str, detail: impl ToString) -> Self {
        CliError::Validation {
            clause: clause.to_string(),
            detail: detail.to_string(),
        }
    }

    fn domain(detail: impl ToString) -> Self {
        CliError::Domain {
            detail: detail.to_string(),
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(err: ValidationError) -> Self {
        CliError::validation(err.clause(), err)
    }
}

impl From<JsonError> for CliError {
    fn from(err: JsonError) -> Self {
        CliError::validation("json", err)
    }
}

impl From<DirichletError> for CliError {
    fn from(err: DirichletError) -> Self {
        CliError::domain(err)
    }
}

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> Self {
        CliError::domain(err)
    }
}

impl From<PointError> for CliError {
    fn from(err: PointError) -> Self {
        match err {
            PointError::DimensionMismatch { .. } => CliError::validation("point_dimension", err),
            other => CliError::domain(other),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(err: CircuitError) -> Self {
        match err {
            CircuitError::InvalidFrequency(_) => CliError::validation("frequency_min", err),
            CircuitError::DuplicateFrequency(_) => CliError::validation("frequency_distinct", err),
            other => CliError::domain(other),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(err: ClassifyError) -> Self {
        match err {
            ClassifyError::DimensionMismatch(..) => CliError::validation("dimension_mismatch", err),
            ClassifyError::Circuit(inner) => inner.into(),
            other => CliError::domain(other),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(err: NumericError) -> Self {
        CliError::domain(err)
    }
}

fn precision_bits() -> usize {
    std::env::var("CNPD_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation("file_read", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation("json_parse", format!("{}: {e}", path.display())))
}

fn load_raw(path: &Path) -> Result<RawSpec, CliError> {
    let raw = raw_spec_from_value(&read_json(path)?)?;
    raw.check_basic()?;
    Ok(raw)
}

fn load_spec(path: &Path) -> Result<KernelSpec, CliError> {
    Ok(KernelSpec::validate(raw_spec_from_value(&read_json(
        path,
    )?)?)?)
}

fn load_half_plane_points(path: &Path, ctx: &mut Ctx) -> Result<Vec<HalfPlanePoint>, CliError> {
    let value = read_json(path)?;
    let items = value
        .as_array()
        .ok_or_else(|| CliError::validation("json", "points file must be a JSON array"))?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let obj = item.as_object().ok_or_else(|| {
            CliError::validation("json", "each point must be an object with re and im")
        })?;
        let mut component = |key: &str| -> Result<cnpd::hp::Real, CliError> {
            match obj.get(key) {
                Some(Value::Number(x)) => Ok(ctx.from_f64(x.as_f64().unwrap_or(f64::NAN))),
                Some(Value::String(s)) => {
                    let r = parse_complex_component(s)?;
                    Ok(ctx.from_rational(&r.re))
                }
                _ => Err(CliError::validation(
                    "json",
                    format!("point component {key:?} must be a number or string"),
                )),
            }
        };
        let re = component("re")?;
        let im = component("im")?;
        out.push(HalfPlanePoint { re, im });
    }
    Ok(out)
}

fn run(command: Command) -> Result<Value, CliError> {
    let bits = precision_bits();
    match command {
        Command::Validate { spec } => {
            let spec = load_spec(&spec)?;
            Ok(json!({
                "valid": true,
                "d": spec.dimension(),
                "spec": spec_value(&spec),
            }))
        }
        Command::Rho { spec, tol } => {
            let raw = load_raw(&spec)?;
            let rho = solve_rho(&raw, tol, bits)?;
            Ok(json!({"rho": to_f64(&rho), "tol": tol}))
        }
        Command::Normalize { spec, tol } => {
            let raw = load_raw(&spec)?;
            let rho = solve_rho(&raw, tol, bits)?;
            let weights = normalize(&raw, tol, bits)?;
            Ok(json!({
                "rho": to_f64(&rho),
                "weights": weights.iter().map(|w| format!("{}", to_f64(w))).collect::<Vec<_>>(),
                "n": raw.n,
            }))
        }
        Command::Weights { spec, limit } => {
            let spec = load_spec(&spec)?;
            if limit == 0 {
                return Err(CliError::validation("limit", "limit must be at least 1"));
            }
            Ok(coefficients_value(&weight_expansion(&spec, limit)))
        }
        Command::CnpCheck { weights, limit } => {
            let coeffs = coefficients_from_value(&read_json(&weights)?)?;
            let verdict = cnp_check(&coeffs, limit)?;
            Ok(json!({
                "is_cnp_up_to_limit": verdict.is_cnp_up_to_limit,
                "witness": verdict.witness,
                "limit": limit,
            }))
        }
        Command::Circuits { spec } => {
            let raw = load_raw(&spec)?;
            let circuits = enumerate_circuits(&raw.n)?;
            Ok(json!({
                "d": raw.n.len(),
                "log_independent": log_independent(&raw.n)?,
                "circuits": circuits.iter().map(circuit_value).collect::<Vec<_>>(),
            }))
        }
        Command::Variety { spec } => {
            let spec = load_spec(&spec)?;
            Ok(variety_value(&build_variety(&spec)?))
        }
        Command::Member {
            spec,
            point,
            exact,
            tol,
        } => {
            let spec = load_spec(&spec)?;
            let presentation = build_variety(&spec)?;
            let parsed = parse_point(&point)?;
            if parsed.coords.len() != spec.dimension() {
                return Err(PointError::DimensionMismatch {
                    got: parsed.coords.len(),
                    expected: spec.dimension(),
                }
                .into());
            }
            let member = if exact {
                member_exact(&presentation, &parsed)
            } else {
                let mut ctx = Ctx::new(bits);
                let z = gaussian_point_to_complex(&parsed, &mut ctx);
                member_numeric(&presentation, &z, tol, bits)?
            };
            Ok(json!({"member": member, "exact": exact}))
        }
        Command::InvertPoint { spec, point, tol } => {
            let spec = load_spec(&spec)?;
            let parsed = parse_point(&point)?;
            let mut ctx = Ctx::new(bits);
            let z = gaussian_point_to_complex(&parsed, &mut ctx);
            let s = invert_point(&spec, &z, tol, bits)?;
            Ok(json!({"s": s.map(|c| complex_value(&c))}))
        }
        Command::Eval { spec, s, u } => {
            let spec = load_spec(&spec)?;
            let mut ctx = Ctx::new(bits);
            let s_parsed = parse_complex_component(&s)?;
            let s_point = HalfPlanePoint {
                re: ctx.from_rational(&s_parsed.re),
                im: ctx.from_rational(&s_parsed.im),
            };
            match u {
                None => {
                    let f = cnpd::kernelspec::feature_map(&spec, &s_point, bits)?;
                    Ok(json!({"f": f.iter().map(complex_value).collect::<Vec<_>>()}))
                }
                Some(u) => {
                    let u_parsed = parse_complex_component(&u)?;
                    let u_point = HalfPlanePoint {
                        re: ctx.from_rational(&u_parsed.re),
                        im: ctx.from_rational(&u_parsed.im),
                    };
                    let k = cnpd::kernelspec::kernel_value(&spec, &s_point, &u_point, bits)?;
                    Ok(json!({"K": complex_value(&k)}))
                }
            }
        }
        Command::Similar { a, b } => {
            let a = load_spec(&a)?;
            let b = load_spec(&b)?;
            let result = similar_pattern(&a, &b)?;
            Ok(json!({
                "similar": result.is_some(),
                "certificate": result.as_ref().map(certificate_value),
            }))
        }
        Command::Classify { a, b } => {
            let a = load_spec(&a)?;
            let b = load_spec(&b)?;
            Ok(report_value(&classify(&a, &b)?))
        }
        Command::Gram {
            spec,
            points,
            mode,
            tol,
        } => {
            let spec = load_spec(&spec)?;
            let mode = match mode.as_str() {
                "kernel" => GramMode::Kernel,
                "one-minus-inv" | "one_minus_inv" => GramMode::OneMinusInverse,
                other => {
                    return Err(CliError::validation(
                        "mode",
                        format!("unknown mode {other:?}, expected kernel or one-minus-inv"),
                    ))
                }
            };
            let mut ctx = Ctx::new(bits);
            let pts = load_half_plane_points(&points, &mut ctx)?;
            let gram = gram_matrix(&spec, &pts, mode, bits)?;
            let report = psd_check(&gram, tol, bits)?;
            let m = gram.size();
            let matrix: Vec<Vec<Value>> = (0..m)
                .map(|i| (0..m).map(|j| complex_value(gram.entry(i, j))).collect())
                .collect();
            Ok(json!({
                "size": m,
                "matrix": matrix,
                "is_psd": report.is_psd,
                "min_eigenvalue": report.min_eigenvalue,
            }))
        }
        Command::Dm { m, n } => {
            if m < 1 || n < 1 {
                return Err(CliError::domain("dm requires m >= 1 and n >= 1"));
            }
            Ok(json!({"m": m, "n": n, "value": ordered_factorization_count(m, n)}))
        }
        Command::ZetaFactor { spec, limit } => {
            let value = read_json(&spec)?;
            let obj = value
                .as_object()
                .and_then(|o| o.get("b"))
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    CliError::validation("json", "expected an object with a \"b\" array")
                })?;
            let mut b = Vec::with_capacity(obj.len());
            for item in obj {
                let text = item
                    .as_str()
                    .map(str::to_string)
                    .unwrap_or_else(|| item.to_string());
                let r = parse_complex_component(&text)?;
                b.push(r.re);
            }
            let verdict = zeta_factor_condition(&b, limit);
            Ok(json!({
                "holds_up_to_limit": verdict.holds_up_to_limit,
                "witness": verdict.witness,
                "limit": limit,
            }))
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{err}");
                std::process::exit(0);
            }
            _ => {
                eprint!("{err}");
                std::process::exit(64);
            }
        },
    };
    match run(cli.command) {
        Ok(value) => {
            println!("{}", serde_json::to_string(&value).expect("serializable"));
            std::process::exit(0);
        }
        Err(CliError::Validation { clause, detail }) => {
            let out = json!({"error": "validation", "violated_clause": clause, "detail": detail});
            println!("{}", serde_json::to_string(&out).expect("serializable"));
            std::process::exit(2);
        }
        Err(CliError::Domain { detail }) => {
            let out = json!({"error": "domain", "detail": detail});
            println!("{}", serde_json::to_string(&out).expect("serializable"));
            std::process::exit(3);
        }
    }
}

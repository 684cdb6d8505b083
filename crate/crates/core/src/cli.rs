//! Command-line front end: parse → resolve → comult → bimodule → verdicts,
//! with deterministic JSON reports.
//!
//! Exit codes: 0 success/certified, 1 not-Koszul detected (the report
//! carries a machine-readable witness), 2 parse or validation errors,
//! 3 resource limits exceeded.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bimodule::{
    bimodule_exactness, build_bimodule_resolution, check_linear_over_enveloping, tensor_down_left,
    tensor_down_right, verify_delta_squared,
};
use crate::comult::{
    build_left_resolution, comult_table, verify_h_identity, verify_left_resolution,
};
use crate::error::Error;
use crate::presentation::{parse_with_field, validate_presentation, Presentation};
use crate::quotient::QuotientAlgebra;
use crate::report;
use crate::resolution::{certify_koszul_up_to, compute_resolution, KoszulVerdict};
use crate::scalar::FieldSpec;
use crate::DEFAULT_SIZE_LIMIT;

#[derive(Parser, Debug)]
#[command(
    name = "koszul",
    version,
    about = "Minimal resolutions and Koszulity certificates for graded quiver algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the minimal right resolution and Betti sequence.
    Resolve(CommonArgs),
    /// Compute the comultiplicative constants and check the differential identity.
    Comult(CommonArgs),
    /// Build the bimodule resolution and run the selected checks.
    Bimodule(BimoduleArgs),
    /// Certify Koszulity up to the bounds, or report a witness.
    CheckKoszul(CommonArgs),
    /// Run everything and emit the full report.
    Report(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Input presentation file.
    input: PathBuf,
    /// Homological levels to compute (N ≥ 2).
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Internal degree bound for exactness checks (defaults to levels + 2).
    #[arg(long)]
    degree: Option<usize>,
    /// Override the ground field of the input: `Q` or `GF(p)`.
    #[arg(long)]
    field: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short = 'o', visible_alias = "json")]
    output: Option<PathBuf>,
    /// Cap on the number of paths per degree.
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    max_dim: usize,
}

#[derive(Args, Debug)]
struct BimoduleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated checks: square, tensor, left, exact, all.
    #[arg(long, default_value = "square,tensor,left")]
    checks: String,
}

/// Runs the CLI on the given arguments and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::LimitExceeded(_) => 3,
                Error::NonQuadratic { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Resolve(args) => {
            let ctx = Context::load(&args)?;
            let data = ctx.resolve_or_witness()?;
            match data {
                Ok(data) => {
                    let value = report::resolution_value(&data);
                    ctx.emit(&args, value)?;
                    Ok(0)
                }
                Err(witness) => {
                    ctx.emit(&args, json!({ "verdict": witness }))?;
                    Ok(1)
                }
            }
        }
        Command::Comult(args) => {
            let ctx = Context::load(&args)?;
            match ctx.resolve_or_witness()? {
                Ok(data) => {
                    let table = comult_table(&data, ctx.levels)?;
                    let identity = verify_h_identity(&table, &data);
                    let mut value = report::comult_value(&table);
                    value["differential_identity"] = json!({
                        "ok": identity.ok,
                        "failures": identity
                            .failures
                            .iter()
                            .map(|&(n, i, j)| json!([n, i, j]))
                            .collect::<Vec<_>>(),
                    });
                    ctx.emit(&args, value)?;
                    Ok(if identity.ok { 0 } else { 1 })
                }
                Err(witness) => {
                    ctx.emit(&args, json!({ "verdict": witness }))?;
                    Ok(1)
                }
            }
        }
        Command::Bimodule(bargs) => {
            let args = &bargs.common;
            let ctx = Context::load(args)?;
            let checks = parse_checks(&bargs.checks)?;
            match ctx.resolve_or_witness()? {
                Ok(data) => {
                    let table = comult_table(&data, ctx.levels)?;
                    let res = build_bimodule_resolution(&table, &data)?;
                    let alg = QuotientAlgebra::new(&ctx.presentation, ctx.degree, ctx.max_dim)?;
                    let mut check_values = serde_json::Map::new();
                    let mut all_ok = true;
                    if checks.square {
                        let r = verify_delta_squared(&res, &alg);
                        all_ok &= r.ok;
                        check_values.insert(
                            "delta_squared".into(),
                            json!({ "ok": r.ok, "failures": r.failures }),
                        );
                    }
                    if checks.tensor {
                        let right = tensor_down_right(&res, &table, &data);
                        let left_data = build_left_resolution(&table, &data);
                        let left = tensor_down_left(&res, &left_data);
                        all_ok &= right.ok && left.ok;
                        check_values.insert(
                            "tensor_down_right".into(),
                            json!({ "ok": right.ok, "failures": right.failures, "note": "collapse equals (-1)^n times the right differential" }),
                        );
                        check_values.insert(
                            "tensor_down_left".into(),
                            json!({ "ok": left.ok, "failures": left.failures }),
                        );
                    }
                    if checks.left {
                        let lr = verify_left_resolution(
                            &ctx.presentation,
                            ctx.levels,
                            ctx.degree,
                            ctx.max_dim,
                        )?;
                        all_ok &= lr.ok();
                        check_values.insert(
                            "left_right".into(),
                            json!({
                                "ok": lr.ok(),
                                "ranks_equal": lr.ranks_equal,
                                "spans_equal": lr.spans_equal,
                                "squares_to_zero": lr.squares_to_zero,
                                "exact": lr.exact,
                                "failures": lr.failures,
                            }),
                        );
                    }
                    if checks.exact {
                        let table = bimodule_exactness(&res, &alg, ctx.degree)?;
                        all_ok &= table.is_exact();
                        check_values.insert("exactness".into(), report::homology_value(&table));
                    }
                    let linear = check_linear_over_enveloping(&res);
                    all_ok &= linear;
                    check_values.insert("linear_over_enveloping".into(), json!(linear));
                    let value = json!({
                        "bimodule": report::bimodule_value(&res, ctx.presentation.quiver()),
                        "checks": Value::Object(check_values),
                    });
                    ctx.emit(args, value)?;
                    Ok(if all_ok { 0 } else { 1 })
                }
                Err(witness) => {
                    ctx.emit(args, json!({ "verdict": witness }))?;
                    Ok(1)
                }
            }
        }
        Command::CheckKoszul(args) => {
            let ctx = Context::load(&args)?;
            let verdict =
                certify_koszul_up_to(&ctx.presentation, ctx.levels, ctx.degree, ctx.max_dim)?;
            let certified = verdict.is_certified();
            ctx.emit(&args, json!({ "verdict": report::verdict_value(&verdict) }))?;
            Ok(if certified { 0 } else { 1 })
        }
        Command::Report(args) => {
            let ctx = Context::load(&args)?;
            let value = full_report(&ctx)?;
            let certified = value["verdicts"]["koszul"]["status"] == json!("koszul_up_to");
            ctx.emit(&args, value)?;
            Ok(if certified { 0 } else { 1 })
        }
    }
}

struct Context {
    presentation: Presentation,
    levels: usize,
    degree: usize,
    max_dim: usize,
}

impl Context {
    fn load(args: &CommonArgs) -> Result<Context, Error> {
        if args.levels < 2 {
            return Err(Error::Validation("--levels must be at least 2".into()));
        }
        let degree = args.degree.unwrap_or(args.levels + 2);
        if degree < args.levels {
            return Err(Error::Validation(
                "--degree must be at least --levels".into(),
            ));
        }
        let field = match &args.field {
            None => None,
            Some(f) => Some(parse_field_flag(f)?),
        };
        let text = fs::read_to_string(&args.input)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", args.input.display())))?;
        let presentation = parse_with_field(&text, field)?;
        for d in validate_presentation(&presentation) {
            eprintln!("{}: {}", d.severity, d.message);
        }
        Ok(Context {
            presentation,
            levels: args.levels,
            degree,
            max_dim: args.max_dim,
        })
    }

    /// Resolution data, or the not-Koszul witness value when the input is
    /// not quadratic (exit code 1, never 2: a cubic relation is a verdict,
    /// not a usage error).
    fn resolve_or_witness(
        &self,
    ) -> Result<Result<crate::resolution::ResolutionData, Value>, Error> {
        match compute_resolution(&self.presentation, self.levels, self.max_dim) {
            Ok(data) => Ok(Ok(data)),
            Err(Error::NonQuadratic { degree }) => {
                let verdict = KoszulVerdict::NotKoszul {
                    witness: crate::resolution::Witness::NonQuadraticRelation { degree },
                };
                Ok(Err(report::verdict_value(&verdict)))
            }
            Err(e) => Err(e),
        }
    }

    fn emit(&self, args: &CommonArgs, value: Value) -> Result<(), Error> {
        let text = report::to_json_string(&value);
        match &args.output {
            Some(path) => fs::write(path, text)
                .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn parse_field_flag(s: &str) -> Result<FieldSpec, Error> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(inner) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("invalid field `{s}`")))?;
        let spec = FieldSpec::PrimeField(p);
        spec.validate()?;
        return Ok(spec);
    }
    Err(Error::Validation(format!(
        "invalid field `{s}` (expected Q or GF(p))"
    )))
}

struct CheckSet {
    square: bool,
    tensor: bool,
    left: bool,
    exact: bool,
}

fn parse_checks(s: &str) -> Result<CheckSet, Error> {
    let mut set = CheckSet {
        square: false,
        tensor: false,
        left: false,
        exact: false,
    };
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match piece {
            "square" => set.square = true,
            "tensor" => set.tensor = true,
            "left" => set.left = true,
            "exact" => set.exact = true,
            "all" => {
                set.square = true;
                set.tensor = true;
                set.left = true;
                set.exact = true;
            }
            other => return Err(Error::Validation(format!("unknown check `{other}`"))),
        }
    }
    Ok(set)
}

/// The full pipeline: resolution, constants, identities, bimodule checks,
/// left/right comparison, and the Koszulity certificate.
fn full_report(ctx: &Context) -> Result<Value, Error> {
    let diagnostics = validate_presentation(&ctx.presentation);
    let meta = report::meta_value(&ctx.presentation, &diagnostics, ctx.levels, ctx.degree);
    match ctx.resolve_or_witness()? {
        Err(witness) => Ok(json!({
            "meta": meta,
            "levels": [],
            "comult": [],
            "bimodule": {},
            "verdicts": { "koszul": witness },
        })),
        Ok(data) => {
            let table = comult_table(&data, ctx.levels)?;
            let identity = verify_h_identity(&table, &data);
            let res = build_bimodule_resolution(&table, &data)?;
            let alg = QuotientAlgebra::new(&ctx.presentation, ctx.degree, ctx.max_dim)?;
            let square = verify_delta_squared(&res, &alg);
            let right = tensor_down_right(&res, &table, &data);
            let left_data = build_left_resolution(&table, &data);
            let left = tensor_down_left(&res, &left_data);
            let lr =
                verify_left_resolution(&ctx.presentation, ctx.levels, ctx.degree, ctx.max_dim)?;
            let verdict =
                certify_koszul_up_to(&ctx.presentation, ctx.levels, ctx.degree, ctx.max_dim)?;
            let resolution = report::resolution_value(&data);
            let verdicts = json!({
                "koszul": report::verdict_value(&verdict),
                "differential_identity": { "ok": identity.ok },
                "delta_squared": { "ok": square.ok },
                "tensor_down_right": { "ok": right.ok, "note": "collapse equals (-1)^n times the right differential" },
                "tensor_down_left": { "ok": left.ok },
                "left_right": { "ok": lr.ok() },
                "linear_over_enveloping": check_linear_over_enveloping(&res),
                "betti": data.betti(),
            });
            Ok(json!({
                "meta": meta,
                "levels": resolution["levels"],
                "comult": report::comult_value(&table)["c"],
                "bimodule": report::bimodule_value(&res, ctx.presentation.quiver()),
                "verdicts": verdicts,
            }))
        }
    }
}

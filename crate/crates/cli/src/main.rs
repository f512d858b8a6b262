mod expr;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use realdescent::arith::bigcomplex::log10_abs;
use realdescent::arith::format::{exact_from_json, exact_to_json};
use realdescent::arith::parse_exact;
use realdescent::descent::{
    complex_twin, definability_consistent, elliptic_real_model, hom_module_with_bound, torus_verdict,
    weil_restriction_profile, weil_restriction_simple, SimpleFactor, Splitting, TorusSpec, DEFAULT_DEGREE_BOUND,
};
use realdescent::extensions::{kernel_report, ExtensionSpec};
use realdescent::groupcat::{
    conj_object, delta_invariant, hom_rank_factor, inherited_hypothesis_check, max_plurisimple_quotient, parse_object,
    weil_restrict_object, GroupObject,
};
use realdescent::relations::{
    find_integer_relations, masser_probe, masser_probe_rotated, residual_digits, RelationQuery, ValueSource,
};
use realdescent::weierstrass::{Lattice, Weierstrass};
use realdescent::{BigComplex, Error, ExactComplex, PrecisionContext, Result};

use output::Format;

const DEFAULT_PREC: u32 = 50;

#[derive(Parser, Debug)]
#[command(name = "realdescent", version, about = "Descent of complex algebraic groups to the reals")]
struct Cli {
    /// Decimal digits of working precision.
    #[arg(long, global = true, env = "REALDESCENT_PREC", value_parser = clap::value_parser!(u32).range(15..))]
    prec: Option<u32>,

    /// Default coefficient bound for relation searches.
    #[arg(long, global = true, env = "REALDESCENT_MAXCOEFF", default_value_t = 100)]
    maxcoeff: u64,

    #[arg(long, global = true, value_enum, env = "REALDESCENT_OUTPUT", default_value = "json")]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a lattice.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Descent verdicts for tori and elliptic curves.
    #[command(subcommand)]
    Descent(DescentCmd),
    /// Extensions of elliptic curves by Ga or Gm.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Integer relation probes.
    #[command(subcommand)]
    Relations(RelationsCmd),
    /// Weil restriction to the reals.
    #[command(subcommand)]
    Weil(WeilCmd),
    /// Operations on product group objects.
    #[command(subcommand)]
    Groupcat(GroupcatCmd),
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// tau, exact (`sqrt3*(1+1i)`) or decimal (`0.1 + 1.2i`).
    #[arg(long, group = "lattice_src")]
    tau: Option<String>,
    /// Two basis vectors.
    #[arg(long, num_args = 2, value_names = ["LAMBDA1", "LAMBDA2"], group = "lattice_src")]
    basis: Option<Vec<String>>,
    /// Lattice JSON: {"tau": ..} or {"lambda1": .., "lambda2": ..}, optional "prec".
    #[arg(long, group = "lattice_src")]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// g2, g3, discriminant, j, quasi-periods and the Legendre residual.
    Info(LatticeArgs),
}

#[derive(Subcommand, Debug)]
enum DescentCmd {
    /// Descent of Gm^r -> Gm^n, z -> exp(b z); one --b per exponent.
    Torus {
        #[arg(long = "b", required = true)]
        b: Vec<String>,
    },
    /// Whether E_tau has a model over the reals.
    Elliptic {
        #[arg(long)]
        tau: String,
    },
    /// Isogenies E_tau -> E_tau2.
    Hom {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        tau2: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        bound: i64,
    },
    /// The complex twin i * Re(L) + i * Im(L) of a conjugation-stable lattice.
    Twin(LatticeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExtKind {
    Ga,
    Gm,
}

#[derive(Subcommand, Debug)]
enum ExtCmd {
    /// Kernel generators of the exponential map and their residuals.
    Kernel {
        #[arg(long, value_enum)]
        kind: ExtKind,
        /// t for Ga, omega for Gm.
        #[arg(long)]
        param: String,
        #[arg(long)]
        tau: String,
        /// Evaluation point (z1, z2).
        #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], default_values = ["0.2 + 0.1i", "0.31 + 0.23i"], allow_hyphen_values = true)]
        point: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum RelationsCmd {
    /// Integer relations among the values in a JSON list of expressions.
    Find {
        #[arg(long)]
        file: PathBuf,
        /// Lattice for eta1, eta2, lambda1, lambda2.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Relation counts among periods and quasi-periods.
    Masser {
        #[arg(long)]
        tau: String,
        /// Probe the given basis as is, without the generic rotation.
        #[arg(long)]
        no_rotate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum WeilCmd {
    /// Weil restriction of a product object.
    Restrict {
        #[arg(long)]
        object: String,
    },
    /// Whether the Weil restriction of E_tau is simple.
    Simple {
        #[arg(long)]
        tau: String,
    },
}

#[derive(Subcommand, Debug)]
enum GroupcatCmd {
    /// Number of simple constituents.
    Delta {
        #[arg(long)]
        object: String,
    },
    /// Maximal plurisimple quotient.
    Quotient {
        #[arg(long)]
        object: String,
    },
    /// Conjugate object.
    Conj {
        #[arg(long)]
        object: String,
    },
    /// Rank of Hom between two objects.
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Inherited hypotheses for G with a given kernel.
    Check {
        #[arg(long)]
        object: String,
        #[arg(long)]
        kernel: String,
    },
}

struct Config {
    precision: Option<u32>,
    maxcoeff: u64,
}

impl Config {
    fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision.unwrap_or(DEFAULT_PREC))
    }
}

/// A lattice parameter: exact when the text parses exactly, otherwise a decimal complex number.
fn complex_arg(s: &str, bits: u32) -> Result<(Option<ExactComplex>, BigComplex)> {
    match parse_exact(s) {
        Ok(z) => {
            let big = z.to_big_bits(bits);
            Ok((Some(z), big))
        }
        Err(exact_err) => expr::numeric(s, bits).map(|v| (None, v)).map_err(|_| exact_err),
    }
}

fn exact_arg(s: &str) -> Result<ExactComplex> {
    parse_exact(s)
}

fn lattice_from_tau(s: &str, bits: u32) -> Result<Lattice> {
    match complex_arg(s, bits)? {
        (Some(t), _) => Lattice::from_tau(&t),
        (None, t) => Lattice::from_numeric_tau(t),
    }
}

fn lattice_from_args(a: &LatticeArgs, cfg: &Config) -> Result<(Lattice, PrecisionContext)> {
    if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let prec = match (cfg.precision, v.get("prec")) {
            (Some(p), _) => p,
            (None, Some(p)) => {
                p.as_u64().and_then(|p| u32::try_from(p).ok()).ok_or_else(|| Error::Parse(format!("bad prec {p}")))?
            }
            (None, None) => DEFAULT_PREC,
        };
        let ctx = PrecisionContext::new(prec)?;
        let lattice = match v.get("tau") {
            Some(Value::String(s)) => lattice_from_tau(s, ctx.work_bits())?,
            Some(t @ Value::Number(_)) => lattice_from_tau(&t.to_string(), ctx.work_bits())?,
            Some(t) => Lattice::from_tau(&exact_from_json(t)?)?,
            None => Lattice::from_json(&v)?,
        };
        return Ok((lattice, ctx));
    }
    let ctx = cfg.ctx()?;
    let bits = ctx.work_bits();
    let lattice = match (&a.tau, &a.basis) {
        (Some(t), _) => lattice_from_tau(t, bits)?,
        (None, Some(b)) => match (complex_arg(&b[0], bits)?, complex_arg(&b[1], bits)?) {
            ((Some(x), _), (Some(y), _)) => Lattice::from_exact_basis(x, y)?,
            ((_, x), (_, y)) => Lattice::from_numeric(x, y)?,
        },
        (None, None) => return Err(Error::Parse("one of --tau, --basis, --file is required".into())),
    };
    Ok((lattice, ctx))
}

fn lattice_json(l: &Lattice, digits: usize) -> Value {
    let (l1, l2) = l.basis(64 + (digits as f64 * std::f64::consts::LOG2_10) as u32);
    let mut v = json!({
        "lambda1": l1.to_string_digits(digits),
        "lambda2": l2.to_string_digits(digits),
    });
    if let Some(t) = l.tau_exact() {
        v["tau"] = Value::String(t.to_string());
    }
    if let Some((a, b)) = l.exact_basis() {
        v["exact"] = json!({"lambda1": exact_to_json(a), "lambda2": exact_to_json(b)});
    }
    v
}

fn cmd_lattice(c: &LatticeCmd, cfg: &Config) -> Result<(Value, Option<PrecisionContext>)> {
    let LatticeCmd::Info(a) = c;
    let (l, ctx) = lattice_from_args(a, cfg)?;
    let digits = ctx.decimal_digits as usize;
    let inv = Weierstrass::new(&l, &ctx)?.invariants()?;
    let residual = inv.legendre_residual();
    let report = serde_json::to_value(inv.report(digits)).expect("report serializes");
    let mut out = json!({"lattice": lattice_json(&l, digits), "invariants": report});
    out["invariants"]["log10_legendre_residual"] = json!(log10_abs(&residual));
    Ok((out, Some(ctx)))
}

fn cmd_descent(c: &DescentCmd, cfg: &Config) -> Result<(Value, Option<PrecisionContext>)> {
    Ok(match c {
        DescentCmd::Torus { b } => {
            let exps = b.iter().map(|s| exact_arg(s)).collect::<Result<Vec<_>>>()?;
            let spec = TorusSpec::new(exps)?;
            let mut v = torus_verdict(&spec)?.to_json();
            v["exponents"] = json!(spec.exponents().iter().map(ToString::to_string).collect::<Vec<_>>());
            (v, None)
        }
        DescentCmd::Elliptic { tau } => {
            let t = exact_arg(tau)?;
            let mut v = elliptic_real_model(&t)?.to_json();
            v["cross_check_consistent"] = json!(definability_consistent(&t)?);
            (v, None)
        }
        DescentCmd::Hom { tau, tau2, bound } => {
            let m = hom_module_with_bound(&exact_arg(tau)?, &exact_arg(tau2)?, *bound)?;
            (m.to_json(), None)
        }
        DescentCmd::Twin(a) => {
            let (l, ctx) = lattice_from_args(a, cfg)?;
            let twin = complex_twin(&l)?;
            let digits = ctx.decimal_digits as usize;
            (json!({"lattice": lattice_json(&l, digits), "twin": lattice_json(&twin, digits)}), Some(ctx))
        }
    })
}

fn cmd_ext(c: &ExtCmd, cfg: &Config) -> Result<(Value, Option<PrecisionContext>)> {
    let ExtCmd::Kernel { kind, param, tau, point } = c;
    let ctx = cfg.ctx()?;
    let bits = ctx.work_bits();
    let base = lattice_from_tau(tau, bits)?;
    let (_, p) = complex_arg(param, bits)?;
    let spec = match kind {
        ExtKind::Ga => ExtensionSpec::ga(p, base),
        ExtKind::Gm => ExtensionSpec::gm(p, base),
    };
    let z = (expr::numeric(&point[0], bits)?, expr::numeric(&point[1], bits)?);
    Ok((kernel_report(&spec, &z, &ctx)?, Some(ctx)))
}

fn read_values(path: &PathBuf) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let items = v.as_array().ok_or_else(|| Error::Parse("values file must hold a JSON list".into()))?;
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(Error::Parse(format!("value {other} must be a string or number"))),
        })
        .collect()
}

fn cmd_relations(c: &RelationsCmd, cfg: &Config) -> Result<(Value, Option<PrecisionContext>)> {
    let ctx = cfg.ctx()?;
    match c {
        RelationsCmd::Find { file, tau } => {
            let texts = read_values(file)?;
            let exprs = texts.iter().map(|s| expr::parse(s)).collect::<Result<Vec<_>>>()?;
            let lattice = match tau {
                Some(t) => Some(lattice_from_tau(t, ctx.work_bits())?),
                None if exprs.iter().any(expr::Expr::needs_lattice) => {
                    return Err(Error::Parse("values use lattice symbols; pass --tau".into()))
                }
                None => None,
            };
            let source = ValueSource::computed(move |c| {
                let env = expr::Env::new(lattice.as_ref(), c)?;
                exprs.iter().map(|e| env.eval(e)).collect()
            });
            let query = RelationQuery::new(source, cfg.maxcoeff, ctx);
            let found = find_integer_relations(&query)?;
            let relations: Vec<Value> = found
                .iter()
                .map(|(coeffs, r)| {
                    json!({
                        "coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "residual": format!("{:.3e}", r.to_f64()),
                        "log10_residual": residual_digits(r),
                    })
                })
                .collect();
            let status = if relations.is_empty() { "NoneUpTo" } else { "Found" };
            Ok((
                json!({
                    "values": texts,
                    "status": status,
                    "relations": relations,
                    "max_coeff": cfg.maxcoeff,
                    "digits": ctx.decimal_digits,
                }),
                Some(ctx),
            ))
        }
        RelationsCmd::Masser { tau, no_rotate } => {
            let l = lattice_from_tau(tau, ctx.work_bits())?;
            let report =
                if *no_rotate { masser_probe(&l, &ctx, cfg.maxcoeff)? } else { masser_probe_rotated(&l, &ctx, cfg.maxcoeff)? };
            let mut v = report.to_json();
            v["rotated"] = json!(!no_rotate);
            Ok((v, Some(ctx)))
        }
    }
}

fn cmd_weil(c: &WeilCmd) -> Result<(Value, Option<PrecisionContext>)> {
    Ok(match c {
        WeilCmd::Restrict { object } => {
            let g = parse_object(object)?;
            let mut v = weil_restrict_object(&g)?.to_json();
            v["object"] = json!(g.to_string());
            (v, None)
        }
        WeilCmd::Simple { tau } => {
            let t = exact_arg(tau)?;
            let splitting = match weil_restriction_simple(&t)? {
                Splitting::Simple => json!({"simple": true}),
                Splitting::Splits(why) => json!({"simple": false, "reason": why}),
            };
            let profile = weil_restriction_profile(&SimpleFactor::elliptic(&t)?)?;
            (json!({"splitting": splitting, "profile": profile.to_json()}), None)
        }
    })
}

fn hom_total(a: &GroupObject, b: &GroupObject) -> Result<Value> {
    let mut total = 0;
    let mut pairs = Vec::new();
    for x in &a.factors {
        for y in &b.factors {
            let r = hom_rank_factor(x, y)?;
            total += r.rank;
            pairs.push(json!({"from": x.to_string(), "to": y.to_string(), "rank": r.rank, "note": r.to_json()["note"]}));
        }
    }
    Ok(json!({"from": a.to_string(), "to": b.to_string(), "rank": total, "pairs": pairs}))
}

fn cmd_groupcat(c: &GroupcatCmd) -> Result<(Value, Option<PrecisionContext>)> {
    Ok(match c {
        GroupcatCmd::Delta { object } => {
            let g = parse_object(object)?;
            (json!({"object": g.to_string(), "delta": delta_invariant(&g)}), None)
        }
        GroupcatCmd::Quotient { object } => {
            let g = parse_object(object)?;
            let q = max_plurisimple_quotient(&g);
            (json!({"object": g.to_string(), "quotient": q.to_string(), "factors": q.to_json()}), None)
        }
        GroupcatCmd::Conj { object } => {
            let g = parse_object(object)?;
            (json!({"object": g.to_string(), "conjugate": conj_object(&g).to_string()}), None)
        }
        GroupcatCmd::Hom { from, to } => (hom_total(&parse_object(from)?, &parse_object(to)?)?, None),
        GroupcatCmd::Check { object, kernel } => {
            let g = parse_object(object)?;
            let k = parse_object(kernel)?;
            let mut v = inherited_hypothesis_check(&g, &k)?.to_json();
            v["object"] = json!(g.to_string());
            v["kernel"] = json!(k.to_string());
            (v, None)
        }
    })
}

fn run(cli: &Cli) -> Result<Value> {
    let cfg = Config { precision: cli.prec, maxcoeff: cli.maxcoeff };
    let (value, ctx) = match &cli.command {
        Command::Lattice(c) => cmd_lattice(c, &cfg)?,
        Command::Descent(c) => cmd_descent(c, &cfg)?,
        Command::Ext(c) => cmd_ext(c, &cfg)?,
        Command::Relations(c) => cmd_relations(c, &cfg)?,
        Command::Weil(c) => cmd_weil(c)?,
        Command::Groupcat(c) => cmd_groupcat(c)?,
    };
    let mut map = match value {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    // exact commands echo the context a numeric follow-up would use
    let ctx = match ctx {
        Some(c) => c,
        None => cfg.ctx()?,
    };
    map.insert("precision".into(), serde_json::to_value(ctx).expect("context serializes"));
    Ok(Value::Object(map))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(v) => {
            // a closed pipe (e.g. `| head`) is not an error of the command
            let _ = writeln!(std::io::stdout(), "{}", output::render(&v, cli.output));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

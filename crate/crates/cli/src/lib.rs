//! Command-line front end for `oglag`.
//!
//! [`run`] parses an argument vector and returns the exit status together
//! with the rendered output, so the binary is a thin wrapper and tests can
//! drive the whole surface in-process.

mod suites;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oglag::json::{self, JsonError};
use oglag::lagrange::{self, LagrangeError};
use oglag::ortho::{self, standard_form};
use oglag::strata::{self, CurveParams, StrataError};
use oglag::{FieldCtx, FieldError, GramSpace, OrthoError, Scalar, Subspace};
use serde_json::{json, Value};
use thiserror::Error;

pub use suites::Suite;

/// Enumeration caps used unless `--cap` is given.
pub const DEFAULT_DIM_CAP: usize = lagrange::DEFAULT_DIM_CAP;
pub const DEFAULT_Q_CAP: u64 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("q = {q} exceeds the enumeration cap {cap}; pass --cap to override")]
    FieldCap { q: u64, cap: u64 },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Lagrange(#[from] LagrangeError),
    #[error(transparent)]
    Strata(#[from] StrataError),
}

#[derive(Parser, Debug)]
#[command(
    name = "oglag",
    version,
    about = "Lagrangian subspaces of orthogonal spaces and Segre strata of odd orthogonal bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stratum tables and bounds for given genus and rank.
    Strata {
        #[command(subcommand)]
        cmd: StrataCmd,
    },
    /// Orthogonal Grassmannians over exact fields.
    Og {
        #[command(subcommand)]
        cmd: OgCmd,
    },
    /// Run a verification suite (same as `og verify`).
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct CurveArgs {
    /// Genus of the curve, at least 2.
    #[arg(long)]
    g: u64,
    /// Half the rank minus one: bundles of rank 2n+1.
    #[arg(long)]
    n: u64,
}

#[derive(Subcommand, Debug)]
enum StrataCmd {
    /// The two general values of t with their components and dim M(V).
    Table {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        json: bool,
    },
    /// Dimension and flags of a single stratum.
    Stratum {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        json: bool,
    },
    /// Threshold, sharp bound, Holla–Narasimhan and Hirschowitz bounds.
    Bounds {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        json: bool,
    },
    /// Scan for cases where the rank-n subbundle bound reaches t/2.
    Exceptions {
        #[arg(long, default_value_t = 10)]
        gmax: u64,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ShapeArg {
    Even,
    Odd,
}

#[derive(Args, Debug, Clone)]
struct SpaceArgs {
    /// Standard split form: `even` is H^n, `odd` is H^n ⊥ <1>.
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Field: an odd prime, or `Q` for the rationals.
    #[arg(long, default_value = "3")]
    q: String,
    /// Gram matrix as JSON rows; replaces --shape/--n.
    #[arg(long)]
    gram: Option<String>,
    /// JSON object with any of the keys "gram", "e", "ref". Inline flags win.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Raise the enumeration caps (dimension ≤ D, no bound on q).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum OgCmd {
    /// List every Lagrangian of a split space over F_q.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// The two Lagrangians of V ⊥ <c> meeting V in a Lagrangian E.
    Lift {
        #[command(flatten)]
        space: SpaceArgs,
        /// Norm of the new basis vector (integer or a/b).
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        e: Option<String>,
    },
    /// Component of a Lagrangian relative to a reference Lagrangian.
    Component {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        e: Option<String>,
        #[arg(long = "ref")]
        reference: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub(crate) struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 10)]
    pub gmax: u64,
    #[arg(long, default_value_t = 20)]
    pub nmax: u64,
    /// Random forms for the `witt` suite.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Largest dimension for the `witt` suite.
    #[arg(long, default_value_t = 6)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub cap: Option<usize>,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((ok, stdout)) => Output {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        },
        Err(e) => Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

type Rendered = Result<(bool, String), CliError>;

fn dispatch(cmd: Command) -> Rendered {
    match cmd {
        Command::Strata { cmd } => strata_cmd(cmd).map(|s| (true, s)),
        Command::Og { cmd } => og_cmd(cmd),
        Command::Verify(args) => suites::run(&args),
    }
}

fn curve(c: CurveArgs) -> Result<CurveParams, CliError> {
    Ok(CurveParams::new(c.g, c.n)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn compact(v: &Value) -> String {
    format!("{v}\n")
}

fn row_line(r: &strata::StratumRow) -> String {
    let flags: Vec<String> = r.flags.iter().map(ToString::to_string).collect();
    format!(
        "{:>4}  {:>9}  {:>11}  {:>5}  {}\n",
        r.t,
        r.component.symbol(),
        r.stratum_dim,
        r.dim_max_lagrangians,
        flags.join(",")
    )
}

const ROW_HEADER: &str = "   t  component  stratum_dim  dim_M  flags\n";

fn strata_cmd(cmd: StrataCmd) -> Result<String, CliError> {
    match cmd {
        StrataCmd::Table { curve: c, json } => {
            let p = curve(c)?;
            let rows = strata::mod4_table(p);
            if json {
                return Ok(pretty(
                    &serde_json::to_value(&rows).expect("rows serialize"),
                ));
            }
            let big_n = p.threshold();
            let mut out = format!(
                "g={} n={} N={} (N mod 4 = {})\n",
                p.g,
                p.n,
                big_n,
                big_n % 4
            );
            out.push_str(ROW_HEADER);
            rows.iter().for_each(|r| out.push_str(&row_line(r)));
            Ok(out)
        }
        StrataCmd::Stratum { curve: c, t, json } => {
            let row = strata::stratum_row(curve(c)?, t)?;
            if json {
                return Ok(pretty(&serde_json::to_value(&row).expect("row serializes")));
            }
            Ok(format!("{ROW_HEADER}{}", row_line(&row)))
        }
        StrataCmd::Bounds { curve: c, json } => {
            let p = curve(c)?;
            let hn = strata::hn_bound(p).ok();
            let general = strata::general_t_values(p);
            if json {
                let hn = hn.map_or(Value::Null, |r| Value::String(r.to_string()));
                return Ok(pretty(&json!({
                    "g": p.g,
                    "n": p.n,
                    "N": p.threshold(),
                    "moduli_dim": strata::moduli_dim(p),
                    "sharp_bound": strata::sharp_bound(p),
                    "hn_bound": hn,
                    "hirschowitz_bound": strata::hirschowitz_bound(p),
                    "general_t": general.iter().map(|(t, s)| json!({"t": t, "component": s})).collect::<Vec<_>>(),
                })));
            }
            let mut out = String::new();
            let _ = writeln!(out, "g={} n={} N={}", p.g, p.n, p.threshold());
            let _ = writeln!(out, "moduli_dim         {}", strata::moduli_dim(p));
            let _ = writeln!(out, "sharp_bound        {}", strata::sharp_bound(p));
            let _ = writeln!(
                out,
                "hn_bound           {}",
                hn.map_or("undefined (n = 1)".to_string(), |r| r.to_string())
            );
            let _ = writeln!(out, "hirschowitz_bound  {}", strata::hirschowitz_bound(p));
            let _ = writeln!(
                out,
                "general t          {} ({}), {} ({})",
                general[0].0, general[0].1, general[1].0, general[1].1
            );
            Ok(out)
        }
        StrataCmd::Exceptions { gmax, nmax, json } => {
            if gmax < 2 || nmax < 1 {
                return Err(CliError::Invalid("need --gmax >= 2 and --nmax >= 1".into()));
            }
            let found = strata::hirschowitz_exceptions(gmax, nmax);
            if json {
                let rows: Vec<Value> = found
                    .iter()
                    .map(|&(g, n, t)| json!({"g": g, "n": n, "t": t}))
                    .collect();
                return Ok(pretty(&Value::Array(rows)));
            }
            let mut out = String::from("   g    n     t  bound\n");
            for &(g, n, t) in &found {
                let f = strata::hirschowitz_bound(CurveParams { g, n });
                let _ = writeln!(out, "{g:>4} {n:>4} {t:>5}  {f:>5}");
            }
            let _ = writeln!(out, "{} cases", found.len());
            Ok(out)
        }
    }
}

pub(crate) fn parse_field(q: &str) -> Result<FieldCtx, CliError> {
    if q.eq_ignore_ascii_case("q") {
        return Ok(FieldCtx::Rationals);
    }
    let p: u64 = q
        .parse()
        .map_err(|_| CliError::Invalid(format!("--q expects an odd prime or Q, got {q:?}")))?;
    Ok(FieldCtx::prime(p)?)
}

/// Rejects `q` above the default cap unless the caller raised the caps.
pub(crate) fn check_q(ctx: FieldCtx, cap: Option<usize>) -> Result<(), CliError> {
    match ctx.modulus() {
        Some(q) if cap.is_none() && q > DEFAULT_Q_CAP => Err(CliError::FieldCap {
            q,
            cap: DEFAULT_Q_CAP,
        }),
        _ => Ok(()),
    }
}

struct Inputs {
    file: Option<Value>,
}

impl Inputs {
    fn load(path: &Option<PathBuf>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?;
                Some(json::parse(&text)?)
            }
            None => None,
        };
        Ok(Inputs { file })
    }

    /// The inline flag if given, else the key from `--file`.
    fn get(&self, inline: &Option<String>, key: &str) -> Result<Option<Value>, CliError> {
        if let Some(text) = inline {
            return Ok(Some(json::parse(text)?));
        }
        Ok(self.file.as_ref().and_then(|f| f.get(key)).cloned())
    }

    fn subspace(
        &self,
        ctx: FieldCtx,
        inline: &Option<String>,
        key: &str,
    ) -> Result<Subspace, CliError> {
        let v = self
            .get(inline, key)?
            .ok_or_else(|| CliError::Invalid(format!("missing --{key} (inline or in --file)")))?;
        Ok(json::subspace_from_json(ctx, &v)?)
    }
}

fn build_space(
    args: &SpaceArgs,
    inputs: &Inputs,
    default_shape: ShapeArg,
) -> Result<GramSpace, CliError> {
    let ctx = parse_field(&args.q)?;
    if let Some(g) = inputs.get(&args.gram, "gram")? {
        // a full {"field", "gram"} object carries its own field
        if g.is_object() {
            let v = json::gram_from_json(&g)?;
            if v.ctx() != ctx {
                return Err(CliError::Invalid(format!(
                    "--q {} disagrees with the field of the Gram matrix",
                    args.q
                )));
            }
            return Ok(v);
        }
        return Ok(json::gram_from_json_in(ctx, &g)?);
    }
    let shape = match args.shape.unwrap_or(default_shape) {
        ShapeArg::Even => ortho::Shape::Even2n,
        ShapeArg::Odd => ortho::Shape::Odd2nPlus1,
    };
    Ok(standard_form(ctx, args.n, shape))
}

fn og_cmd(cmd: OgCmd) -> Rendered {
    match cmd {
        OgCmd::Enumerate {
            space,
            count_only,
            json: as_json,
        } => {
            let inputs = Inputs::load(&space.file)?;
            let ctx = parse_field(&space.q)?;
            check_q(ctx, space.cap)?;
            let v = build_space(&space, &inputs, ShapeArg::Even)?;
            let lags = lagrange::enumerate_lagrangians(&v, space.cap.unwrap_or(DEFAULT_DIM_CAP))?;
            if count_only {
                return Ok((true, format!("{}\n", lags.len())));
            }
            if as_json {
                let list: Vec<Value> = lags.iter().map(json::subspace_to_json).collect();
                return Ok((true, compact(&Value::Array(list))));
            }
            let mut out = String::new();
            for f in &lags {
                let _ = writeln!(out, "{}", json::rows_to_json(f.basis()));
            }
            let _ = writeln!(out, "{} Lagrangians", lags.len());
            Ok((true, out))
        }
        OgCmd::Lift { space, c, e } => {
            let inputs = Inputs::load(&space.file)?;
            let v = build_space(&space, &inputs, ShapeArg::Odd)?;
            let c: Scalar = v.ctx().parse(&c)?;
            let e = inputs.subspace(v.ctx(), &e, "e")?;
            let pair = lagrange::lift_odd_to_even(&v, &e, &c)?;
            Ok((true, compact(&json::lift_pair_to_json(&pair))))
        }
        OgCmd::Component {
            space,
            e,
            reference,
            json: as_json,
        } => {
            let inputs = Inputs::load(&space.file)?;
            let v = build_space(&space, &inputs, ShapeArg::Even)?;
            let f = inputs.subspace(v.ctx(), &e, "e")?;
            let r = inputs.subspace(v.ctx(), &reference, "ref")?;
            let label = match lagrange::component_of(&v, &f, &r)?.label {
                lagrange::Component::Same => "same",
                lagrange::Component::Other => "other",
            };
            if as_json {
                return Ok((
                    true,
                    compact(&json!({
                        "reference": json::subspace_to_json(&r),
                        "label": label,
                    })),
                ));
            }
            Ok((true, format!("{label}\n")))
        }
        OgCmd::Verify(args) => suites::run(&args),
    }
}

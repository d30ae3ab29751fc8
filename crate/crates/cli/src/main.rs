use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use periodica::creal::{format_bound, poly_root, CReal, RealError};
use periodica::exact::{render_decimal, Nat, Rat, Rounding};
use periodica::expansions::{extract_digits, DigitOutcome};
use periodica::semialg::{
    parse_rational, parse_sa, Box as Domain, MPoly, SemialgError, VolumeRefiner,
};
use periodica::series::{
    catalan_spec, constant, e_spec, gamma_inner_spec, gamma_outer_spec, leibniz_spec,
    liouville_spec, ln_pi_spec, ln_step_spec, skordev_sum, zeta_spec, ConstantId, SeriesSpec,
};
use periodica::term::{parse_term, Evaluator, EvalLimits, TermError};

#[derive(Parser, Debug)]
#[command(
    name = "periodica",
    version,
    about = "Certified digits of computable reals, roots, digit expansions and semialgebraic volumes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    /// Index budget for semi-decidable comparisons.
    #[arg(long, global = true, default_value = "10000")]
    fuel: Nat,
    /// Subdivision depth limit for volumes.
    #[arg(long, global = true, default_value_t = 16)]
    max_depth: u32,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Decimal digits of a catalog constant.
    Digits {
        /// e, pi, ln:N, catalan, gamma, liouville, zeta:K or lnpi
        constant: ConstantId,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Evaluate a function term on natural-number arguments.
    EvalTerm {
        /// Term literal, builtin name, or a file holding the term.
        term: String,
        #[arg(long, value_delimiter = ',')]
        args: Vec<Nat>,
        /// Step limit for evaluation.
        #[arg(long, default_value_t = 200_000_000)]
        max_steps: u64,
    },
    /// The unique simple root of a rational polynomial in a bracket.
    Root {
        /// Polynomial in one variable, e.g. `X^2 - 2`.
        #[arg(long)]
        poly: String,
        /// `a,b` with rational endpoints.
        #[arg(long)]
        bracket: String,
        #[arg(long, default_value_t = 8)]
        digits: usize,
    },
    /// Certified volume of a set described in a `.sa` file.
    Volume {
        file: PathBuf,
        /// `lo,hi;lo,hi;…`; defaults to the file's `domain` line.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[arg(long, default_value_t = 3)]
        digits: usize,
    },
    /// Base-b digits of a constant or rational, `?` where undecided.
    Badic {
        /// Catalog constant or rational such as `1/3`.
        constant: String,
        #[arg(long, default_value = "10")]
        base: Nat,
        #[arg(long, default_value_t = 6)]
        positions: u64,
        /// Hide exactness of a rational so the comparison path is used.
        #[arg(long)]
        opaque: bool,
    },
    /// Sum a named series by its tail cut-off.
    SumSeries {
        /// factorial, leibniz, liouville, catalan, zeta:K, ln-step:N,
        /// euler-inner:N, euler or lnpi-zeta
        series: String,
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Unknown(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Unknown(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Unknown(m) | Failure::Other(m) => m,
        }
    }
}

impl From<RealError> for Failure {
    fn from(e: RealError) -> Self {
        let m = e.to_string();
        match e {
            RealError::FuelExhausted { .. } => {
                Failure::Unknown(format!("{m}; the outcome is undecided, raise --fuel to probe further"))
            }
            RealError::ResourceLimit(_) | RealError::Fseq(_) => Failure::Resource(m),
            RealError::InvalidInput(_) => Failure::Usage(m),
            _ => Failure::Other(m),
        }
    }
}

impl From<TermError> for Failure {
    fn from(e: TermError) -> Self {
        let m = e.to_string();
        match e {
            TermError::ResourceLimit(_) => Failure::Resource(m),
            TermError::BoundViolation { .. } => Failure::Other(m),
            _ => Failure::Usage(m),
        }
    }
}

impl From<SemialgError> for Failure {
    fn from(e: SemialgError) -> Self {
        let m = e.to_string();
        match e {
            SemialgError::DepthLimit(_) => Failure::Resource(m),
            _ => Failure::Usage(m),
        }
    }
}

/// A printed result: decimal text, its error bound, class and provenance.
struct Report {
    value: String,
    bound: Rat,
    class: String,
    provenance: String,
    extra: Vec<String>,
    json_extra: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    fn new(value: String, bound: Rat, class: impl ToString, provenance: impl Into<String>) -> Self {
        Report {
            value,
            bound,
            class: class.to_string(),
            provenance: provenance.into(),
            extra: Vec::new(),
            json_extra: serde_json::Map::new(),
        }
    }

    fn from_real(a: &CReal, digits: usize) -> Result<Self, Failure> {
        let d = a.to_decimal(digits)?;
        Ok(Report::new(d.text, d.bound, a.class(), a.provenance()))
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut obj = serde_json::Map::new();
            obj.insert("value".into(), json!(self.value));
            obj.insert("bound_num".into(), json!(self.bound.numer().to_string()));
            obj.insert("bound_den".into(), json!(self.bound.denom().to_string()));
            obj.insert("class".into(), json!(self.class));
            obj.insert("ref".into(), json!(self.provenance));
            obj.extend(self.json_extra.clone());
            return format!("{}\n", serde_json::Value::Object(obj));
        }
        let mut out = format!(
            "{} ± {} [{}: {}]\n",
            self.value,
            format_bound(&self.bound),
            self.class,
            self.provenance
        );
        for line in &self.extra {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

fn digits_verb(id: ConstantId, digits: usize) -> Result<Report, Failure> {
    Report::from_real(&constant(id)?, digits)
}

fn eval_term_verb(src: &str, args: &[Nat], max_steps: u64, json: bool) -> Result<String, Failure> {
    let text = if Path::new(src).is_file() {
        std::fs::read_to_string(src).map_err(|e| Failure::Usage(format!("{src}: {e}")))?
    } else {
        src.to_string()
    };
    let term = parse_term(text.trim())?;
    if term.arity() != args.len() {
        return Err(Failure::Usage(format!(
            "term has arity {}, got {} arguments",
            term.arity(),
            args.len()
        )));
    }
    let limits = EvalLimits {
        max_steps,
        ..EvalLimits::default()
    };
    let value = Evaluator::new(limits).eval(&term, args)?;
    if json {
        let r = Report::new(value.to_string(), Rat::from_integer(0.into()), term.classify(), "term evaluation");
        return Ok(r.render(true));
    }
    Ok(format!("{value}\n"))
}

fn parse_pair(s: &str) -> Result<(Rat, Rat), Failure> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("`{s}`: expected `a,b`")))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn root_verb(poly: &str, bracket: &str, digits: usize, fuel: &Nat) -> Result<Report, Failure> {
    let p = MPoly::parse(&poly.to_ascii_lowercase(), 1)
        .map_err(|e| Failure::Usage(format!("polynomial: {e}")))?;
    let up = p.to_upoly().expect("one variable");
    let (a, b) = parse_pair(bracket)?;
    if a >= b {
        return Err(Failure::Usage(format!("bracket [{a}, {b}] is empty")));
    }
    let coeffs: Vec<CReal> = up.coeffs().iter().cloned().map(CReal::from_rational).collect();
    let root = poly_root(&coeffs, &a, &b, fuel)?
        .with_provenance(format!("root of {p} in [{a}, {b}]").replace("x1", "X"));
    Report::from_real(&root, digits)
}

fn volume_verb(file: &Path, domain: Option<&str>, digits: usize, max_depth: u32) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let sa = parse_sa(&text)?;
    let domain = match domain {
        Some(d) => Domain::parse(d)?,
        None => sa
            .domain
            .clone()
            .ok_or_else(|| Failure::Usage("no --domain given and the file has no `domain` line".into()))?,
    };
    if domain.dim() != sa.set.nvars() {
        return Err(SemialgError::DimensionMismatch(sa.set.nvars(), domain.dim()).into());
    }
    let mut refiner = VolumeRefiner::new(&sa.set, &domain)?;
    let target = Rat::new(1.into(), num_pow10(digits));
    let r = match refiner.refine_to_width(&target, max_depth) {
        Ok(r) => r,
        Err(SemialgError::DepthLimit(_)) => {
            let r = refiner.result();
            return Err(Failure::Resource(format!(
                "bounds [{}, {}] still wider than 1e-{digits} at depth {}; raise --max-depth",
                render_decimal(&r.lower, digits + 3, Rounding::Floor),
                render_decimal(&r.upper, digits + 3, Rounding::Ceil),
                r.depth
            )));
        }
        Err(e) => return Err(e.into()),
    };
    // Half-width <= 10^-d / 2 plus rounding <= 10^-d / 2.
    let value = render_decimal(&r.midpoint(), digits, Rounding::Nearest);
    let bound = Rat::new(2.into(), num_pow10(digits));
    let lo = render_decimal(&r.lower, digits + 3, Rounding::Floor);
    let hi = render_decimal(&r.upper, digits + 3, Rounding::Ceil);
    let mut report = Report::new(value, bound, "R", "volume by certified box subdivision");
    report.extra.push(format!(
        "bounds {lo} .. {hi} (depth {}, {} cells classified)",
        r.depth, r.cells_classified
    ));
    report.json_extra.insert("lower".into(), json!(lo));
    report.json_extra.insert("upper".into(), json!(hi));
    report.json_extra.insert("depth".into(), json!(r.depth));
    report.json_extra.insert("cells_classified".into(), json!(r.cells_classified));
    Ok(report)
}

fn num_pow10(k: usize) -> periodica::exact::Int {
    periodica::exact::Int::from(10u32).pow(k as u32)
}

fn badic_verb(
    src: &str,
    base: &Nat,
    positions: u64,
    opaque: bool,
    fuel: &Nat,
) -> Result<(Report, DigitOutcome), Failure> {
    if base <= &Nat::from(1u32) {
        return Err(Failure::Usage("--base must be at least 2".into()));
    }
    let real = match src.parse::<ConstantId>() {
        Ok(id) => constant(id)?,
        Err(not_constant) => match parse_rational(src) {
            Ok(q) => CReal::from_rational(q),
            Err(_) => return Err(Failure::Usage(not_constant)),
        },
    };
    let real = if opaque { real.opaque() } else { real };
    let ex = extract_digits(&real, base, positions, fuel)?;
    let mut tokens: Vec<String> = Vec::new();
    match &ex.integer_part {
        Some(ip) => tokens.push(ip.to_string()),
        None => tokens.push("?".into()),
    }
    tokens.extend(ex.digits.iter().map(|d| d.to_string()));
    if let DigitOutcome::UnknownAt(k) = ex.outcome {
        if k > 0 {
            tokens.push("?".into());
        }
    }
    let known = ex.digits.len();
    let bound = Rat::new(1.into(), periodica::exact::nat_to_int(&base.pow(known as u32)));
    let mut report = Report::new(
        tokens.join(" "),
        bound,
        real.class(),
        format!("base {base} digits of {}", real.provenance()),
    );
    report.json_extra.insert("digits".into(), json!(tokens));
    report.json_extra.insert("rendered".into(), json!(ex.render()));
    Ok((report, ex.outcome))
}

fn series_by_name(name: &str) -> Result<SeriesSpec, Failure> {
    let param = |prefix: &str| -> Option<Result<u64, Failure>> {
        name.strip_prefix(prefix).map(|rest| {
            rest.parse::<u64>()
                .map_err(|_| Failure::Usage(format!("`{name}`: expected a number after `{prefix}`")))
        })
    };
    if let Some(k) = param("zeta:") {
        let k = k?;
        if !(2..=u64::from(u32::MAX)).contains(&k) {
            return Err(Failure::Usage(format!("`{name}`: zeta needs order >= 2")));
        }
        return Ok(zeta_spec(k as u32));
    }
    if let Some(n) = param("ln-step:") {
        let n = n?;
        if n == 0 {
            return Err(Failure::Usage("ln-step needs N >= 1".into()));
        }
        return Ok(ln_step_spec(n));
    }
    if let Some(n) = param("euler-inner:") {
        return Ok(gamma_inner_spec(n?));
    }
    Ok(match name {
        "factorial" => e_spec(),
        "leibniz" => leibniz_spec(),
        "liouville" => liouville_spec(),
        "catalan" => catalan_spec(),
        "euler" => gamma_outer_spec(),
        "lnpi-zeta" => ln_pi_spec(),
        _ => {
            return Err(Failure::Usage(format!(
                "unknown series `{name}` (expected factorial, leibniz, liouville, catalan, zeta:K, ln-step:N, euler-inner:N, euler or lnpi-zeta)"
            )))
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    let g = &cli.global;
    match &cli.verb {
        Verb::Digits { constant, digits } => Ok(digits_verb(*constant, *digits)?.render(g.json)),
        Verb::EvalTerm { term, args, max_steps } => eval_term_verb(term, args, *max_steps, g.json),
        Verb::Root { poly, bracket, digits } => Ok(root_verb(poly, bracket, *digits, &g.fuel)?.render(g.json)),
        Verb::Volume { file, domain, digits } => {
            Ok(volume_verb(file, domain.as_deref(), *digits, g.max_depth)?.render(g.json))
        }
        Verb::Badic { constant, base, positions, opaque } => {
            let (report, outcome) = badic_verb(constant, base, *positions, *opaque, &g.fuel)?;
            let out = report.render(g.json);
            match outcome {
                DigitOutcome::Complete => Ok(out),
                DigitOutcome::UnknownAt(k) => {
                    print!("{out}");
                    Err(Failure::Unknown(format!(
                        "position {k} is undecided within fuel {}: the value may sit on a cut point",
                        g.fuel
                    )))
                }
            }
        }
        Verb::SumSeries { series, digits } => {
            let spec = series_by_name(series)?;
            Ok(Report::from_real(&skordev_sum(&spec), *digits)?.render(g.json))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symrank_core::arith;
use symrank_core::bounds::{
    asymptotic_bounds, cacr_bounds, comparison_table, drinfeld_vladut, BoundCertificate, BoundEngine, BoundsError,
    Support, MAX_DEPTH,
};
use symrank_core::ccma::{
    brute_force_symmetric_rank, construct_case1, construct_case3, BruteForceRank, CcmaError, SymmetricBilinearFormula,
    VerifyMode, DEFAULT_SAMPLES, EXHAUSTIVE_LIMIT,
};
use symrank_core::function_field::{curve_search, distinct_stats, Curve, FfError, CSV_HEADER, MAX_CATALOG_Q};
use symrank_core::gf::{BaseField, Field};

/// Writes to stdout, ending quietly when the reader has gone away.
fn emit(text: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

macro_rules! out {
    () => {
        emit("\n")
    };
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))
    };
}

const MAX_Q: u64 = 1 << 16;
const MAX_CONSTRUCT_ORDER: u128 = 1 << 20;

#[derive(Parser)]
#[command(name = "symrank", version, about = "Symmetric bilinear multiplication formulas over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify an interpolation formula for F_{q^n}/F_q.
    Construct(ConstructArgs),
    /// Check a formula file.
    Verify(VerifyArgs),
    /// Best certified upper bound on the symmetric complexity.
    Bound(BoundArgs),
    /// Asymptotic bounds for one field.
    Asym(AsymArgs),
    /// Comparison of the two asymptotic bounds for small fields.
    CompareTable(TableArgs),
    /// Curve catalog over F_q.
    Curves(CurvesArgs),
    /// Exhaustive search for the minimal number of symmetric terms.
    BruteRank(BruteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exhaustive when q^n is small, sampled otherwise.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
}

impl VerifyOpts {
    fn mode(&self, formula: &SymmetricBilinearFormula) -> VerifyMode {
        let sampled = VerifyMode::Sampled {
            pairs: self.samples,
            seed: self.seed,
        };
        match self.mode {
            ModeArg::Auto if formula.ext().order() <= EXHAUSTIVE_LIMIT => VerifyMode::Exhaustive,
            ModeArg::Auto | ModeArg::Sampled => sampled,
            ModeArg::Exhaustive => VerifyMode::Exhaustive,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    /// Restrict to the projective line (0) or elliptic curves (1).
    #[arg(long)]
    genus: Option<u32>,
    /// Weierstrass coefficients a1,a2,a3,a4,a6 as element indices.
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<u32>>,
    /// Row of the `curves` listing to use.
    #[arg(long)]
    catalog_index: Option<usize>,
    /// Also evaluate at places of degree two.
    #[arg(long)]
    allow_degree2: bool,
    #[command(flatten)]
    verify: VerifyOpts,
    /// Formula file to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[command(flatten)]
    verify: VerifyOpts,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = MAX_DEPTH)]
    depth: u32,
    /// Skip formula constructions and use only closed-form bounds.
    #[arg(long)]
    no_construct: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AsymArgs {
    #[arg(long)]
    q: u64,
    /// Also evaluate the code-family bounds for these `t`.
    #[arg(long, value_delimiter = ',')]
    t: Vec<u32>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurvesArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    min_n1: u64,
    /// One row per distinct (N1, N2).
    #[arg(long)]
    distinct: bool,
}

#[derive(Args)]
struct BruteArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    max: usize,
}

/// Failure with the exit status it maps to.
enum Failure {
    Verification(String),
    Infeasible(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Infeasible(m) | Failure::Input(m) => m,
        }
    }
}

impl From<CcmaError> for Failure {
    fn from(e: CcmaError) -> Self {
        match e {
            CcmaError::VerificationFailed(_) => Failure::Verification(e.to_string()),
            CcmaError::Malformed(_) | CcmaError::Field(_) | CcmaError::TowerMismatch(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Infeasible(e.to_string()),
        }
    }
}

impl From<FfError> for Failure {
    fn from(e: FfError) -> Self {
        match e {
            FfError::Field(_) | FfError::Singular | FfError::InvalidCurve(_) => Failure::Input(e.to_string()),
            _ => Failure::Infeasible(e.to_string()),
        }
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::NotPrimePower(_) | BoundsError::DepthTooLarge(_) | BoundsError::ZeroDegree => {
                Failure::Input(e.to_string())
            }
            BoundsError::BadCertificate(_) => Failure::Verification(e.to_string()),
            BoundsError::Field(_) => Failure::Input(e.to_string()),
            BoundsError::Curve(e) => e.into(),
            BoundsError::Ccma(e) => e.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Bound(a) => bound(a),
        Command::Asym(a) => asym(a),
        Command::CompareTable(a) => compare_table(a),
        Command::Curves(a) => curves(a),
        Command::BruteRank(a) => brute_rank(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            out!("status=error code={} reason={:?}", f.code(), f.message());
            ExitCode::from(f.code())
        }
    }
}

fn check_q(q: u64) -> Result<(), Failure> {
    if q > MAX_Q || arith::prime_power(q).is_none() {
        return Err(Failure::Input(format!("q = {q} is not a prime power at most {MAX_Q}")));
    }
    Ok(())
}

fn check_field(q: u64, n: usize) -> Result<(), Failure> {
    check_q(q)?;
    if n == 0 {
        return Err(Failure::Input("n must be positive".into()));
    }
    match arith::checked_pow(q, n as u32) {
        Some(v) if v <= MAX_CONSTRUCT_ORDER => Ok(()),
        _ => Err(Failure::Input(format!("q^n exceeds {MAX_CONSTRUCT_ORDER}"))),
    }
}

fn write_out(path: &Option<PathBuf>, contents: &str) -> Result<String, Failure> {
    match path {
        None => Ok("-".into()),
        Some(p) => {
            std::fs::write(p, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
            Ok(p.display().to_string())
        }
    }
}

fn mode_fields(mode: VerifyMode) -> String {
    match mode {
        VerifyMode::Exhaustive => "verification=exhaustive".into(),
        VerifyMode::Sampled { pairs, seed } => format!("verification=sampled samples={pairs} seed={seed}"),
    }
}

/// Curves to try, in order.
fn select_curves(a: &ConstructArgs) -> Result<Vec<Curve>, Failure> {
    let base = Arc::new(BaseField::of_order(a.q).map_err(|e| Failure::Input(e.to_string()))?);
    if let Some(c) = &a.coeffs {
        if a.genus == Some(0) {
            return Err(Failure::Input("coefficients given for genus 0".into()));
        }
        let coeffs: [u32; 5] = c
            .as_slice()
            .try_into()
            .map_err(|_| Failure::Input(format!("expected five coefficients, got {}", c.len())))?;
        return Ok(vec![Curve::weierstrass(base, coeffs)?]);
    }
    let catalog = |distinct: bool| -> Result<Vec<Curve>, Failure> {
        if a.q > MAX_CATALOG_Q as u64 {
            return Ok(Vec::new());
        }
        let entries = if distinct {
            distinct_stats(a.q as u32)?
        } else {
            curve_search(a.q as u32, 0)?
        };
        Ok(entries.iter().map(|e| e.curve()).collect::<Result<_, _>>()?)
    };
    if let Some(i) = a.catalog_index {
        if a.genus == Some(0) {
            return Err(Failure::Input("catalog index given for genus 0".into()));
        }
        let all = catalog(false)?;
        let len = all.len();
        return all
            .into_iter()
            .nth(i)
            .map(|c| vec![c])
            .ok_or_else(|| Failure::Input(format!("catalog index {i} out of range ({len} curves)")));
    }
    let mut out = Vec::new();
    if a.genus != Some(1) {
        out.push(Curve::projective_line(base));
    }
    match a.genus {
        Some(0) => {}
        Some(1) | None => out.extend(catalog(true)?),
        Some(g) => return Err(Failure::Input(format!("genus {g} is not supported"))),
    }
    Ok(out)
}

fn construct(a: ConstructArgs) -> Result<(), Failure> {
    check_field(a.q, a.n)?;
    let curves = select_curves(&a)?;
    let mut best: Option<(SymmetricBilinearFormula, &'static str, u32)> = None;
    let mut reasons = Vec::new();
    for curve in &curves {
        let mut attempts: Vec<(&'static str, fn(&Curve, usize) -> Result<SymmetricBilinearFormula, CcmaError>)> =
            vec![("case1", construct_case1)];
        if a.allow_degree2 {
            attempts.push(("case3", construct_case3));
        }
        for (name, build) in attempts {
            match build(curve, a.n) {
                Ok(f) => {
                    if best.as_ref().is_none_or(|b| f.rank() < b.0.rank()) {
                        best = Some((f, name, curve.genus()));
                    }
                }
                Err(e) => reasons.push(format!("genus {} {name}: {e}", curve.genus())),
            }
        }
    }
    let Some((formula, method, genus)) = best else {
        let detail = if reasons.is_empty() {
            "no curve available".to_string()
        } else {
            reasons.join("; ")
        };
        return Err(Failure::Infeasible(format!(
            "no construction for q={} n={}: {detail}",
            a.q, a.n
        )));
    };
    let mode = a.verify.mode(&formula);
    let report = formula.verify(mode)?;
    let out = write_out(&a.out, &formula.to_json())?;
    let status = if report.pass { "verified" } else { "failed" };
    out!(
        "status={status} q={} n={} rank={} genus={genus} method={method} {} pairs={} out={out}",
        a.q,
        a.n,
        formula.rank(),
        mode_fields(mode),
        report.pairs_checked
    );
    if !report.pass {
        return Err(Failure::Verification(format!("failure at {:?}", report.first_failure)));
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.file)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", a.file.display())))?;
    let formula = SymmetricBilinearFormula::from_json(&text)?;
    let mode = a.verify.mode(&formula);
    let report = formula.verify(mode)?;
    let status = if report.pass { "verified" } else { "failed" };
    out!(
        "status={status} q={} n={} rank={} {} pairs={}",
        formula.q(),
        formula.n(),
        formula.rank(),
        mode_fields(mode),
        report.pairs_checked
    );
    if let Some((x, y)) = &report.first_failure {
        return Err(Failure::Verification(format!("wrong product for x={x:?} y={y:?}")));
    }
    Ok(())
}

fn render_certificate(c: &BoundCertificate, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let _ = write!(
        out,
        "{pad}q={} n={} value={} method={} truncated={}",
        c.q, c.n, c.value, c.method, c.truncated
    );
    match &c.support {
        Support::Exact { epsilon } => {
            let _ = writeln!(out, " epsilon={epsilon}");
        }
        Support::Curve { stats, coefficients } => {
            let _ = write!(
                out,
                " genus={} N1={} N2={} nonspecial={}",
                stats.genus, stats.n1, stats.n2, stats.nonspecial_available
            );
            if let Some(a) = coefficients {
                let _ = write!(out, " a={a:?}");
            }
            let _ = writeln!(out);
        }
        Support::Composition { outer, inner } => {
            let _ = writeln!(out);
            render_certificate(outer, indent + 1, out);
            render_certificate(inner, indent + 1, out);
        }
        Support::Formula { formula, report } => {
            let _ = writeln!(
                out,
                " rank={} {} pairs={}",
                formula.rank,
                mode_fields(report.mode),
                report.pairs_checked
            );
        }
        Support::Schoolbook => {
            let _ = writeln!(out);
        }
    }
}

fn bound(a: BoundArgs) -> Result<(), Failure> {
    check_q(a.q)?;
    let mut engine = if a.no_construct {
        BoundEngine::without_constructions()
    } else {
        BoundEngine::new()
    };
    let cert = engine.best_bound(a.q, a.n, a.depth)?;
    cert.check()?;
    let body = match a.format {
        Format::Json => cert.to_json(),
        Format::Text => {
            let mut s = String::new();
            render_certificate(&cert, 0, &mut s);
            s
        }
    };
    let out = write_out(&a.out, &body)?;
    if a.out.is_none() {
        emit(&body);
        if !body.ends_with('\n') {
            out!();
        }
    }
    out!(
        "status=ok q={} n={} value={} method={} depth={} checked=true out={out}",
        a.q, a.n, cert.value, cert.method, a.depth
    );
    Ok(())
}

fn asym(a: AsymArgs) -> Result<(), Failure> {
    check_q(a.q)?;
    let dv = drinfeld_vladut(a.q)?;
    out!("q={} bound=drinfeld-vladut value={} attained={}", a.q, dv.value, dv.attained);
    for r in asymptotic_bounds(a.q)? {
        out!("{}", r.summary());
    }
    let mut engine = BoundEngine::new();
    for &t in &a.t {
        let mut mu = |field: u64, n: usize| engine.best_bound(field, n, 2).map(|c| c.value);
        let b = cacr_bounds(a.q, t, &mut mu)?;
        for r in &b.records {
            out!("{}", r.summary());
        }
        for s in &b.suppressed {
            out!("q={} t={t} source={} suppressed={:?}", a.q, s.source, s.reason);
        }
    }
    Ok(())
}

fn compare_table(a: TableArgs) -> Result<(), Failure> {
    let mut engine = BoundEngine::new();
    let table = comparison_table(&mut engine)?;
    let text = table.render();
    let out = write_out(&a.out, &text)?;
    if a.out.is_none() {
        emit(&text);
    } else {
        out!("status=ok rows={} out={out}", table.rows.len());
    }
    Ok(())
}

fn curves(a: CurvesArgs) -> Result<(), Failure> {
    check_q(a.q)?;
    let (p, _) = arith::prime_power(a.q).expect("checked");
    out!("{CSV_HEADER}");
    match a.genus {
        0 => {
            let n1 = a.q + 1;
            if n1 >= a.min_n1 {
                out!("{p},{},,,,,,0,{n1},{}", a.q, (a.q * a.q - a.q) / 2);
            }
        }
        1 => {
            if a.q > MAX_CATALOG_Q as u64 {
                return Err(Failure::Infeasible(format!("catalog covers q <= {MAX_CATALOG_Q}")));
            }
            let entries = if a.distinct {
                distinct_stats(a.q as u32)?
                    .into_iter()
                    .filter(|e| e.n1 >= a.min_n1)
                    .collect()
            } else {
                curve_search(a.q as u32, a.min_n1)?
            };
            for e in entries {
                out!("{}", e.csv_row());
            }
        }
        g => return Err(Failure::Input(format!("genus {g} is not supported"))),
    }
    Ok(())
}

fn brute_rank(a: BruteArgs) -> Result<(), Failure> {
    check_q(a.q)?;
    if a.n == 0 {
        return Err(Failure::Input("n must be positive".into()));
    }
    let outcome = brute_force_symmetric_rank(a.q, a.n, a.max)?;
    let (rank, exact) = match outcome.rank {
        BruteForceRank::Exact(r) => (r, true),
        BruteForceRank::AtLeast(r) => (r, false),
    };
    let verified = match &outcome.witness {
        Some(w) => w.verify(w.strongest_mode(0))?.pass.to_string(),
        None => "-".into(),
    };
    out!(
        "status=ok q={} n={} rank={rank} exact={exact} subsets={} witness_verified={verified}",
        a.q, a.n, outcome.subsets_checked
    );
    Ok(())
}

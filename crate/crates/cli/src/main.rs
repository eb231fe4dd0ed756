mod report;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use technic::bom::{format_price, BomError, Catalog, Vendor, EXCLUDED_NOTE};
use technic::locus::{
    certify, constraint_ideal, locus_equation_with, LocusError, LocusResult,
    StraightnessCertificate, Verdict,
};
use technic::model::{
    self, builtin_model, validate, BuiltinModel, LinkageSpec, ModelError, MODEL_NAMES,
};
use technic::poly::{GroebnerConfig, PolyError, DEFAULT_PAIR_BUDGET};
use technic::solver::{
    seed_configuration, trace, trace_both_ways, trace_csv, trace_svg, BranchEventKind, SolverError,
    SolverSettings, Trace,
};

use report::*;

#[derive(Parser)]
#[command(
    name = "technic",
    version,
    about = "Trace, solve and certify the curves of LEGO-style bar linkages"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the builtin models.
    Models {
        #[command(flatten)]
        common: Common,
    },
    /// Check a model for consistency and one degree of freedom.
    Validate {
        /// Builtin name or path to a linkage file.
        model: String,
        #[command(flatten)]
        common: Common,
    },
    /// Follow the pen while the driver turns.
    Trace {
        model: String,
        /// First driver angle, radians. Without --from/--to the driver is
        /// turned both ways until the linkage locks.
        #[arg(long, requires = "to", allow_negative_numbers = true)]
        from: Option<f64>,
        /// Last driver angle, radians.
        #[arg(long, requires = "from", allow_negative_numbers = true)]
        to: Option<f64>,
        #[command(flatten)]
        steps: StepArgs,
        /// Write the pen path as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the samples as CSV. Without --svg or --csv the CSV goes to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Implicit equation of the pen curve and its linear factors.
    Locus {
        model: String,
        /// Give up after this many S-pair reductions.
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        pair_budget: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether the pen draws an exact straight line.
    Certify {
        model: String,
        /// Driver window, two angles in radians.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        pair_budget: usize,
        #[command(flatten)]
        steps: StepArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Parts list and price for one or more models.
    Bom {
        /// Catalog model names.
        models: Vec<String>,
        /// Every model in the catalog.
        #[arg(long, conflicts_with = "models")]
        all: bool,
        #[arg(long, default_value = "brickowl")]
        vendor: Vendor,
        /// Enough parts to build all the models at once instead of one after another.
        #[arg(long)]
        simultaneous: bool,
        /// Catalog CSV to use instead of the shipped one.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct StepArgs {
    /// Initial driver step, radians.
    #[arg(long)]
    step: Option<f64>,
    /// Smallest step before a workspace boundary is declared.
    #[arg(long)]
    min_step: Option<f64>,
}

impl StepArgs {
    fn settings(&self) -> SolverSettings {
        let mut s = SolverSettings::default();
        if let Some(h) = self.step {
            s.initial_step = h;
        }
        if let Some(h) = self.min_step {
            s.min_step = h;
        }
        s
    }
}

/// Failure with the exit status it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
    Numeric(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Invalid(m)
            | Failure::Numeric(m)
            | Failure::Resource(m) => m,
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidSpec(_) => Failure::Invalid(e.to_string()),
            SolverError::Settings(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<LocusError> for Failure {
    fn from(e: LocusError) -> Self {
        match e {
            LocusError::InvalidSpec(_) | LocusError::EmptyElimination => {
                Failure::Invalid(e.to_string())
            }
            LocusError::TooFewSamples(_) => Failure::Numeric(e.to_string()),
            LocusError::Poly(_) => Failure::Resource(e.to_string()),
        }
    }
}

impl From<BomError> for Failure {
    fn from(e: BomError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            use clap::error::ErrorKind;
            let asked = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return ExitCode::from(if asked { 0 } else { 1 });
        }
    };
    match run(cli.command) {
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

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Models { common } => cmd_models(common.json),
        Command::Validate { model, common } => cmd_validate(&model, common.json),
        Command::Trace {
            model,
            from,
            to,
            steps,
            svg,
            csv,
            common,
        } => cmd_trace(
            &model,
            from.zip(to),
            &steps.settings(),
            svg.as_deref(),
            csv.as_deref(),
            common.json,
        ),
        Command::Locus {
            model,
            pair_budget,
            common,
        } => cmd_locus(&model, pair_budget, common.json),
        Command::Certify {
            model,
            window,
            pair_budget,
            steps,
            common,
        } => cmd_certify(
            &model,
            window.map(|w| (w[0], w[1])),
            pair_budget,
            &steps.settings(),
            common.json,
        ),
        Command::Bom {
            models,
            all,
            vendor,
            simultaneous,
            catalog,
            common,
        } => cmd_bom(
            &models,
            all,
            vendor,
            simultaneous,
            catalog.as_deref(),
            common.json,
        ),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// A builtin name, or else a linkage file.
struct Resolved {
    spec: LinkageSpec,
    builtin: Option<BuiltinModel>,
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn resolve(arg: &str) -> Result<Resolved, Failure> {
    if let Ok(m) = builtin_model(arg) {
        return Ok(Resolved {
            spec: m.spec.clone(),
            builtin: Some(m),
        });
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Failure::Invalid(format!(
            "`{arg}` is neither a builtin model ({}) nor a file",
            MODEL_NAMES.join(", ")
        )));
    }
    let spec = model::load(&read_file(path)?)?;
    Ok(Resolved {
        spec,
        builtin: None,
    })
}

fn cmd_models(json: bool) -> Outcome {
    let entries: Vec<ModelEntry> = MODEL_NAMES
        .iter()
        .map(|n| {
            let m = builtin_model(n).expect("listed builtin");
            ModelEntry {
                name: n.to_string(),
                description: m.description.to_string(),
                joints: m.spec.joints.len(),
                bars: m.spec.bars.len(),
                sweep: m.sweep,
                straight_window: m.straight_window,
            }
        })
        .collect();
    if json {
        return Ok(to_json(&entries));
    }
    let mut out = String::new();
    for e in &entries {
        writeln!(
            out,
            "{:<17} {} bar{}  {}",
            e.name,
            e.bars,
            if e.bars == 1 { " " } else { "s" },
            e.description
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_validate(arg: &str, json: bool) -> Outcome {
    let spec = match builtin_model(arg) {
        Ok(m) => m.spec,
        Err(_) if Path::new(arg).exists() => model::parse(&read_file(Path::new(arg))?)?,
        Err(e) => return Err(e.into()),
    };
    let r = validate(&spec);
    let doc = ValidateReport {
        name: spec.name.clone(),
        valid: r.is_valid(),
        mobility: r.mobility,
        checks: r
            .checks
            .iter()
            .map(|c| CheckEntry {
                name: c.name.to_string(),
                passed: c.passed,
                detail: c.detail.clone(),
            })
            .collect(),
    };
    let out = if json {
        to_json(&doc)
    } else {
        format!("{}: mobility {}\n{r}", spec.name, r.mobility)
    };
    if r.is_valid() {
        Ok(out)
    } else {
        // the report is the data; the status says it failed
        print!("{out}");
        Err(Failure::Invalid(format!(
            "{} is not a valid linkage",
            spec.name
        )))
    }
}

fn event_name(kind: BranchEventKind) -> &'static str {
    match kind {
        BranchEventKind::WorkspaceBoundary => "workspace_boundary",
        BranchEventKind::SingularConfiguration => "singular_configuration",
    }
}

/// The default driver turn: both ways from the seed for builtins, from zero
/// for files.
fn default_trace(r: &Resolved, settings: &SolverSettings) -> Result<Trace, Failure> {
    let start = r.builtin.as_ref().map_or(0.0, |m| m.seed_angle);
    let seed = seed_configuration(&r.spec, start, settings)?;
    Ok(trace_both_ways(&r.spec, &seed, PI, settings)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn cmd_trace(
    arg: &str,
    range: Option<(f64, f64)>,
    settings: &SolverSettings,
    svg: Option<&Path>,
    csv: Option<&Path>,
    json: bool,
) -> Outcome {
    let r = resolve(arg)?;
    let t = match range {
        Some((a, b)) => trace(&r.spec, a, b, settings)?,
        None => default_trace(&r, settings)?,
    };
    for e in &t.events {
        eprintln!(
            "{} at theta = {:.6}",
            event_name(e.kind).replace('_', " "),
            e.theta
        );
    }
    if let Some(p) = svg {
        write_file(p, &trace_svg(&r.spec, &t))?;
    }
    if let Some(p) = csv {
        write_file(p, &trace_csv(&t))?;
    }
    let first = t.samples.first().map_or(f64::NAN, |s| s.theta);
    let last = t.samples.last().map_or(f64::NAN, |s| s.theta);
    if json {
        return Ok(to_json(&TraceReport {
            model: r.spec.name.clone(),
            samples: t.samples.len(),
            theta_start: first,
            theta_end: last,
            max_residual: t.samples.iter().map(|s| s.residual).fold(0.0, f64::max),
            events: t
                .events
                .iter()
                .map(|e| EventEntry {
                    theta: e.theta,
                    kind: event_name(e.kind).into(),
                })
                .collect(),
            svg: svg.map(|p| p.display().to_string()),
            csv: csv.map(|p| p.display().to_string()),
        }));
    }
    if svg.is_none() && csv.is_none() {
        return Ok(trace_csv(&t));
    }
    Ok(format!(
        "{}: {} samples, theta {:.6} .. {:.6}\n",
        r.spec.name,
        t.samples.len(),
        first,
        last
    ))
}

fn curve_name(degree: u32) -> &'static str {
    match degree {
        1 => "line",
        2 => "conic",
        3 => "cubic",
        4 => "quartic",
        5 => "quintic",
        6 => "sextic",
        7 => "septic",
        _ => "curve",
    }
}

fn compute_locus(spec: &LinkageSpec, pair_budget: usize) -> Result<LocusResult, Failure> {
    let config = GroebnerConfig { pair_budget };
    locus_equation_with(spec, &config, &[]).map_err(|e| match e {
        LocusError::Poly(PolyError::PairBudget { budget, basis_size }) => Failure::Resource(format!(
            "Gröbner basis gave up after {budget} S-pairs (basis size {basis_size}); raise --pair-budget"
        )),
        e => e.into(),
    })
}

fn cmd_locus(arg: &str, pair_budget: usize, json: bool) -> Outcome {
    let r = resolve(arg)?;
    let locus = compute_locus(&r.spec, pair_budget)?;
    let rep = locus.report();
    if json {
        let ideal = constraint_ideal(&r.spec);
        return Ok(to_json(&LocusDocument {
            model: r.spec.name.clone(),
            variables: ideal.variables().to_vec(),
            generators: ideal
                .generators
                .iter()
                .map(|g| g.to_normalized_string())
                .collect(),
            locus: rep,
        }));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{}: degree {} ({})",
        r.spec.name,
        rep.total_degree,
        curve_name(rep.total_degree)
    )
    .unwrap();
    writeln!(out, "{} = 0", rep.locus).unwrap();
    let n = rep.factors.len();
    writeln!(
        out,
        "{n} linear factor{} found",
        if n == 1 { "" } else { "s" }
    )
    .unwrap();
    for f in &rep.factors {
        writeln!(out, "  {} (multiplicity {})", f.factor, f.multiplicity).unwrap();
    }
    if n > 0 {
        writeln!(
            out,
            "cofactor, degree {}: {}",
            rep.cofactor_degree, rep.cofactor
        )
        .unwrap();
    }
    for a in &rep.alternatives {
        writeln!(out, "another generator of the same degree: {a}").unwrap();
    }
    Ok(out)
}

fn cmd_certify(
    arg: &str,
    window: Option<(f64, f64)>,
    pair_budget: usize,
    settings: &SolverSettings,
    json: bool,
) -> Outcome {
    let r = resolve(arg)?;
    let (t, window) = match (window, &r.builtin) {
        (Some(w), _) => (trace(&r.spec, w.0, w.1, settings)?, w),
        (None, Some(m)) => {
            let w = m.straight_window.unwrap_or(m.sweep);
            (trace(&r.spec, w.0, w.1, settings)?, w)
        }
        (None, None) => {
            let t = default_trace(&r, settings)?;
            let w = match (t.samples.first(), t.samples.last()) {
                (Some(a), Some(b)) => (a.theta, b.theta),
                _ => return Err(Failure::Numeric("empty trace".into())),
            };
            (t, w)
        }
    };
    let locus = compute_locus(&r.spec, pair_budget)?;
    let cert = certify(&r.spec, &t, window, &locus)?;
    if json {
        return Ok(to_json(&certify_report(&cert, &locus, window)));
    }
    Ok(certify_text(&cert, &locus))
}

/// `a*x + b*y + c = 0` with zero terms and unit coefficients dropped.
fn line_text(a: &str, b: &str, c: &str) -> String {
    let mut out = String::new();
    for (coef, var) in [(a, "x"), (b, "y"), (c, "")] {
        if coef == "0" {
            continue;
        }
        let (neg, mag) = match coef.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, coef),
        };
        let term = match (mag, var) {
            ("1", v) if !v.is_empty() => v.to_string(),
            (m, "") => m.to_string(),
            (m, v) => format!("{m}*{v}"),
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    out + " = 0"
}

fn certify_report(
    cert: &StraightnessCertificate,
    locus: &LocusResult,
    window: (f64, f64),
) -> CertifyReport {
    let (verdict, line, dev, dev_mm, span_mm) = match &cert.verdict {
        Verdict::ExactLine { a, b, c } => (
            VerdictKind::ExactLine,
            Some(line_text(a, b, c)),
            None,
            None,
            None,
        ),
        Verdict::Approximate {
            max_deviation,
            stats,
            ..
        } => (
            VerdictKind::Approximate,
            None,
            Some(*max_deviation),
            Some(stats.max_deviation_mm()),
            Some(stats.span_mm()),
        ),
    };
    CertifyReport {
        model: cert.model.clone(),
        verdict,
        line,
        window,
        samples: cert.evidence.samples,
        locus_degree: locus.total_degree,
        max_deviation: dev,
        max_deviation_mm: dev_mm,
        span_mm,
        line_distances: cert.evidence.line_distances.clone(),
        cofactor_residual: cert.evidence.cofactor_residual,
        diagnostics: cert.evidence.diagnostics.clone(),
        rationale: cert.rationale.to_string(),
    }
}

fn certify_text(cert: &StraightnessCertificate, locus: &LocusResult) -> String {
    let mut out = String::new();
    match &cert.verdict {
        Verdict::ExactLine { a, b, c } => {
            writeln!(out, "EXACT LINE: {}", line_text(a, b, c)).unwrap();
            writeln!(
                out,
                "all {} samples lie on the linear factor {} of the degree {} locus",
                cert.evidence.samples,
                cert.evidence.factor.as_deref().unwrap_or("?"),
                locus.total_degree
            )
            .unwrap();
        }
        Verdict::Approximate {
            max_deviation,
            window,
            stats,
        } => {
            writeln!(
                out,
                "APPROXIMATE: max deviation {:.6} units ({:.4} mm) over {:.2} mm, window [{}, {}]",
                max_deviation,
                stats.max_deviation_mm(),
                stats.span_mm(),
                window.0,
                window.1
            )
            .unwrap();
            let lines = locus.factors.len();
            writeln!(
                out,
                "the samples lie on no linear factor of the degree {} locus ({} linear factor{})",
                locus.total_degree,
                lines,
                if lines == 1 { "" } else { "s" }
            )
            .unwrap();
        }
    }
    for d in &cert.evidence.diagnostics {
        writeln!(out, "warning: {d}").unwrap();
    }
    writeln!(out, "why: {}", cert.rationale).unwrap();
    out
}

fn cmd_bom(
    models: &[String],
    all: bool,
    vendor: Vendor,
    simultaneous: bool,
    catalog: Option<&Path>,
    json: bool,
) -> Outcome {
    let cat = match catalog {
        Some(p) => technic::bom::catalog_load(&read_file(p)?)?,
        None => Catalog::shipped(),
    };
    let names: Vec<&str> = if all {
        cat.model_names().collect()
    } else {
        models.iter().map(String::as_str).collect()
    };
    if names.is_empty() {
        return Err(Failure::Usage(
            "name at least one model, or pass --all".into(),
        ));
    }
    let list = if simultaneous {
        cat.set_sum(&names)?
    } else {
        cat.set_union(&names)?
    };
    let mut lines = Vec::new();
    for (&code, &count) in &list.0 {
        let part = cat.part(code).ok_or(BomError::UnknownPart(code))?;
        let unit = part.price(vendor);
        lines.push(BomLine {
            code,
            name: part.name.clone(),
            color: part.color.clone(),
            count,
            unit_price: format_price(unit),
            subtotal: format_price(&(unit * technic::Rat::from_integer(count.into()))),
        });
    }
    let total = cat.price(&list, vendor)?;
    let doc = BomReport {
        models: names.iter().map(|s| s.to_string()).collect(),
        vendor: vendor.to_string(),
        simultaneous,
        parts: lines,
        total_parts: list.total(),
        total_price: format_price(&total),
        total_price_exact: total.to_string(),
        note: EXCLUDED_NOTE.into(),
    };
    if json {
        return Ok(to_json(&doc));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:>6}  {:<26} {:<16} {:>5} {:>8} {:>8}",
        "code", "part", "color", "count", "each", "sum"
    )
    .unwrap();
    for l in &doc.parts {
        writeln!(
            out,
            "{:>6}  {:<26} {:<16} {:>5} {:>8} {:>8}",
            l.code, l.name, l.color, l.count, l.unit_price, l.subtotal
        )
        .unwrap();
    }
    writeln!(
        out,
        "total: {} parts, {} € at {}",
        doc.total_parts, doc.total_price, doc.vendor
    )
    .unwrap();
    writeln!(out, "({})", doc.note).unwrap();
    Ok(out)
}

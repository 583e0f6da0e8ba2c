//! The `aritygap` command line. Exit codes: 0 success, 1 a disagreement or
//! invariant violation was found, 2 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::boolfn::{
    anf, classify_boolean_gap, classify_pseudo_boolean_gap, describe_coefficients, from_set_function, mobius,
    to_set_function, zeta, BooleanGap, MobiusCoefficients, PseudoBooleanGap, PseudoGap2Reason,
};
use crate::error::{Error, Result};
use crate::extend::{
    classify_lovasz_gap2, classify_nondecreasing_lovasz, cube_restriction_nondecreasing, eval_lovasz, eval_owen,
    gap_lovasz, restrict_to_cube, simplex_of, LovaszExtension, OwenExtension, RationalPoint,
};
use crate::fnalg::{essential_variables, gap_via_characterization, reduce_to_essential, FiniteFunction, VariableMap};
use crate::order::{
    classify_latpoly_gap2, classify_monotone_gap, median_form_match, Lattice, MonotoneGap, Poset,
};
use crate::rational::{format_rational, parse_rational};

use super::fixtures;
use super::format::{parse_poset, parse_table, serialize_mobius, serialize_set_function, TableFile, FORMAT_HELP};
use super::oracle::oracle_gap;
use super::sweep::{sweep, Mode, SweepConfig, SweepKind, DEFAULT_TABLE_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "aritygap", version, about = "Arity gap analysis of finite functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gap report for a table: essential variables, quasi-arity, matched case.
    Analyze { file: PathBuf },
    /// Möbius coefficients of a pseudo-Boolean table or set function.
    Mobius { file: PathBuf },
    /// Set function of a coefficient table.
    Zeta { file: PathBuf },
    /// Multilinear extension at a point such as `1/2,0,1`.
    EvalOwen { file: PathBuf, point: String },
    /// Lovász extension at a point such as `1/2,0,1`.
    EvalLovasz { file: PathBuf, point: String },
    /// Classify the gap with one of the specialised classifiers.
    Classify(ClassifyArgs),
    /// Check classifiers against the brute-force oracle over a function space.
    Sweep(SweepArgs),
    /// Describe the table and poset file formats.
    Formats,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    file: PathBuf,
    /// Domain poset: a poset file or a fixture (chainK, p6, m3).
    #[arg(long, requires = "poset_b", conflicts_with_all = ["boolean", "pseudo", "lovasz"])]
    poset_a: Option<String>,
    /// Codomain poset: a poset file or a fixture.
    #[arg(long, requires = "poset_a")]
    poset_b: Option<String>,
    #[arg(long, conflicts_with_all = ["pseudo", "lovasz"])]
    boolean: bool,
    #[arg(long, conflicts_with = "lovasz")]
    pseudo: bool,
    #[arg(long)]
    lovasz: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// boolean, pseudo, characterization, monotone or lovasz.
    #[arg(long, default_value = "characterization")]
    kind: String,
    /// |A|.
    #[arg(long, default_value_t = 2)]
    domain: usize,
    /// |B|.
    #[arg(long, default_value_t = 2)]
    codomain: usize,
    #[arg(long, default_value_t = 3)]
    arity: usize,
    /// Every table, in counter order.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of seeded random tables.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only order-preserving tables.
    #[arg(long)]
    monotone: bool,
    #[arg(long)]
    poset_a: Option<String>,
    #[arg(long)]
    poset_b: Option<String>,
    /// Largest exhaustive space, in tables.
    #[arg(long, default_value_t = DEFAULT_TABLE_BUDGET)]
    budget: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    parallelism: Option<usize>,
    /// Print only the key=value block.
    #[arg(long)]
    machine: bool,
}

/// Runs with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Errors tagged with the file they came from.
#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError(format!("{}: {e}", path.display()))
}

fn plain(e: Error) -> CliError {
    CliError(e.to_string())
}

fn read(path: &Path) -> std::result::Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> std::result::Result<TableFile, CliError> {
    parse_table(&read(path)?).map_err(in_file(path))
}

fn load_function(path: &Path) -> std::result::Result<FiniteFunction, CliError> {
    Ok(match load_table(path)? {
        TableFile::Function(f) => f,
        TableFile::SetFunction(v) => from_set_function(&v),
        TableFile::Mobius(m) => restrict_to_cube(&m),
    })
}

fn load_coefficients(path: &Path) -> std::result::Result<MobiusCoefficients, CliError> {
    match load_table(path)? {
        TableFile::Function(f) => crate::boolfn::mobius_of(&f).map_err(in_file(path)),
        TableFile::SetFunction(v) => Ok(mobius(&v)),
        TableFile::Mobius(m) => Ok(m),
    }
}

fn load_poset(spec: &str) -> std::result::Result<Poset, CliError> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(p) = fixtures::by_name(spec) {
            return Ok(p);
        }
    }
    parse_poset(&read(path)?).map_err(in_file(path))
}

fn parse_point(text: &str) -> std::result::Result<RationalPoint, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).ok_or_else(|| CliError(format!("`{s}` is not a rational"))))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(RationalPoint)
}

fn variables(vars: &[usize]) -> String {
    if vars.is_empty() {
        return "none".into();
    }
    vars.iter().map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(", ")
}

/// The essential-variable reduction, or a message when the gap is undefined.
fn reduce(f: &FiniteFunction, out: &mut String) -> Option<(FiniteFunction, VariableMap)> {
    let essential = essential_variables(f);
    let _ = writeln!(out, "essential variables: {}", variables(&essential));
    if essential.len() < 2 {
        let _ = writeln!(out, "arity gap undefined: fewer than two essential variables");
        return None;
    }
    let reduced = reduce_to_essential(f).ok()?;
    if essential.len() < f.arity() {
        let names: Vec<String> = essential.iter().map(|i| format!("x{}", i + 1)).collect();
        let _ = writeln!(out, "working on the reduction to ({})", names.join(", "));
    }
    Some(reduced)
}

/// Appends the oracle line and returns the exit code.
fn cross_check(g: &FiniteFunction, claimed: usize, out: &mut String) -> i32 {
    match oracle_gap(g) {
        Ok(o) if o == claimed => {
            let _ = writeln!(out, "oracle gap = {o} (agrees)");
            0
        }
        Ok(o) => {
            let _ = writeln!(out, "oracle gap = {o} (DISAGREES with {claimed})");
            1
        }
        Err(e) => {
            let _ = writeln!(out, "oracle failed: {e}");
            1
        }
    }
}

fn permutation(perm: &[usize]) -> String {
    let names: Vec<String> = perm.iter().map(|i| format!("x{}", i + 1)).collect();
    format!("({})", names.join(", "))
}

type Outcome = std::result::Result<(String, i32), CliError>;

fn execute(command: Command) -> Outcome {
    match command {
        Command::Analyze { file } => analyze(&file),
        Command::Mobius { file } => match load_table(&file)? {
            TableFile::Function(f) => {
                let v = to_set_function(&f).map_err(in_file(&file))?;
                Ok((serialize_mobius(&mobius(&v)), 0))
            }
            TableFile::SetFunction(v) => Ok((serialize_mobius(&mobius(&v)), 0)),
            TableFile::Mobius(_) => Err(CliError(format!(
                "{}: already a coefficient table; use `zeta`",
                file.display()
            ))),
        },
        Command::Zeta { file } => match load_table(&file)? {
            TableFile::Mobius(m) => Ok((serialize_set_function(&zeta(&m)), 0)),
            _ => Err(CliError(format!("{}: expected `kind: mobius`", file.display()))),
        },
        Command::EvalOwen { file, point } => {
            let m = load_coefficients(&file)?;
            let x = parse_point(&point)?;
            let v = eval_owen(&OwenExtension::new(m), &x).map_err(plain)?;
            Ok((format!("{}\n", format_rational(&v)), 0))
        }
        Command::EvalLovasz { file, point } => {
            let m = load_coefficients(&file)?;
            let x = parse_point(&point)?;
            let v = eval_lovasz(&LovaszExtension::new(m), &x).map_err(plain)?;
            let order: Vec<String> = simplex_of(&x).0.iter().map(|i| format!("x{}", i + 1)).collect();
            Ok((
                format!("{}\nsimplex: {}\n", format_rational(&v), order.join(" <= ")),
                0,
            ))
        }
        Command::Classify(args) => classify(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Formats => Ok((FORMAT_HELP.to_string(), 0)),
    }
}

fn analyze(file: &Path) -> Outcome {
    let f = load_function(file)?;
    let mut out = String::new();
    let _ = writeln!(out, "arity: {}", f.arity());
    let Some((g, _)) = reduce(&f, &mut out) else {
        return Ok((out, 0));
    };
    let report = gap_via_characterization(&g).map_err(in_file(file))?;
    let _ = write!(out, "{report}");
    let code = cross_check(&g, report.gap, &mut out);
    out.push_str(&report.machine_block());
    Ok((out, code))
}

fn classify(args: ClassifyArgs) -> Outcome {
    let mut out = String::new();
    if args.lovasz {
        return classify_lovasz(&args.file);
    }
    let f = load_function(&args.file)?;
    let Some((g, _)) = reduce(&f, &mut out) else {
        return Ok((out, 0));
    };
    let gap = if args.boolean {
        match classify_boolean_gap(&g).map_err(in_file(&args.file))? {
            BooleanGap::Gap1 => {
                let _ = writeln!(out, "gap = 1");
                1
            }
            BooleanGap::Gap2(m) => {
                let _ = writeln!(
                    out,
                    "gap = 2: template {} with constant {} on {}",
                    m.template,
                    m.constant,
                    permutation(&m.permutation)
                );
                2
            }
        }
    } else if args.pseudo {
        match classify_pseudo_boolean_gap(&g).map_err(in_file(&args.file))? {
            PseudoBooleanGap::Gap1 => {
                let _ = writeln!(out, "gap = 1");
                1
            }
            PseudoBooleanGap::Gap2(PseudoGap2Reason::BinaryDiagonal) => {
                let _ = writeln!(out, "gap = 2: binary with f(0,0) = f(1,1)");
                2
            }
            PseudoBooleanGap::Gap2(PseudoGap2Reason::TwoValuedComposition { h, values, boolean }) => {
                let _ = writeln!(
                    out,
                    "gap = 2: two-valued, {} where h = 0 and {} where h = 1",
                    format_rational(&values[0]),
                    format_rational(&values[1])
                );
                if let Ok(p) = anf(&h) {
                    let _ = writeln!(out, "  h = {p} (template {})", boolean.template);
                }
                2
            }
        }
    } else if let (Some(a), Some(b)) = (&args.poset_a, &args.poset_b) {
        let (pa, pb) = (load_poset(a)?, load_poset(b)?);
        classify_order_preserving(&g, &pa, &pb, &mut out).map_err(in_file(&args.file))?
    } else {
        let r = gap_via_characterization(&g).map_err(in_file(&args.file))?;
        let _ = writeln!(out, "gap = {} ({})", r.gap, r.theorem_case);
        r.gap
    };
    let code = cross_check(&g, gap, &mut out);
    Ok((out, code))
}

fn classify_order_preserving(g: &FiniteFunction, pa: &Poset, pb: &Poset, out: &mut String) -> Result<usize> {
    let gap = match classify_monotone_gap(g, pa, pb)? {
        MonotoneGap::Gap1 => {
            let _ = writeln!(out, "gap = 1");
            1
        }
        MonotoneGap::Gap2(cert) => {
            let h: Vec<String> = cert.h.table().iter().map(|&v| cert.h.codomain().symbol(v)).collect();
            let _ = writeln!(out, "gap = 2: f(x1,x0,x0) = f(x0,x1,x0) = f(x0,x0,x1) = h(x0), h = [{}]", h.join(" "));
            2
        }
    };
    if g.arity() == 3 {
        if let Ok(lb) = Lattice::from_poset(pb.clone()) {
            if pa.is_chain() {
                if let Ok(Some(h)) = median_form_match(g, pa, &lb) {
                    let vals: Vec<String> = h.table().iter().map(|&v| h.codomain().symbol(v)).collect();
                    let _ = writeln!(out, "median form: f = med(h(x1), h(x2), h(x3)), h = [{}]", vals.join(" "));
                }
            }
            if pa == pb && lb.is_distributive() {
                if let Ok(Some((a, b))) = classify_latpoly_gap2(g, &lb) {
                    let c = lb.carrier();
                    let _ = writeln!(out, "truncated median: ({} ∨ med) ∧ {}", c.element(a), c.element(b));
                }
            }
        }
    }
    Ok(gap)
}

fn classify_lovasz(file: &Path) -> Outcome {
    let mut out = String::new();
    let m = load_coefficients(file)?;
    let ext = LovaszExtension::new(m);
    let essential = ext.essential_variables();
    let _ = writeln!(out, "essential variables: {}", variables(&essential));
    let Some(reduced) = ext.reduce_to_essential().filter(|r| r.n() >= 2) else {
        let _ = writeln!(out, "arity gap undefined: fewer than two essential variables");
        return Ok((out, 0));
    };
    let gap = gap_lovasz(&reduced).map_err(in_file(file))?;
    let _ = writeln!(out, "gap = {gap}");
    let found = classify_lovasz_gap2(&reduced).map_err(in_file(file))?;
    match &found {
        Some(hit) => {
            let c = hit.c.as_ref().map(|c| format!(", c = {}", format_rational(c))).unwrap_or_default();
            let _ = writeln!(
                out,
                "{} with a = {}, b = {}{c} on {}",
                hit.form,
                format_rational(&hit.a),
                format_rational(&hit.b),
                permutation(&hit.permutation)
            );
            if let Some(m) = hit.instantiate(reduced.n()) {
                let _ = writeln!(out, "  coefficients: {}", describe_coefficients(&m));
            }
        }
        None => {
            let _ = writeln!(out, "no gap-2 form matches");
        }
    }
    if cube_restriction_nondecreasing(reduced.coefficients()) {
        if let Ok(Some((a, b))) = classify_nondecreasing_lovasz(&reduced) {
            let _ = writeln!(out, "nondecreasing: majority form with a = {}, b = {}", format_rational(&a), format_rational(&b));
        }
    }
    let restriction = restrict_to_cube(reduced.coefficients());
    let mut code = cross_check(&restriction, gap, &mut out);
    if found.is_some() != (gap == 2) {
        let _ = writeln!(out, "form presence DISAGREES with gap {gap}");
        code = 1;
    }
    Ok((out, code))
}

fn run_sweep(args: SweepArgs) -> Outcome {
    let kind = SweepKind::parse(&args.kind).ok_or_else(|| {
        CliError(format!(
            "unknown sweep kind `{}` (boolean, pseudo, characterization, monotone, lovasz)",
            args.kind
        ))
    })?;
    let pa = args.poset_a.as_deref().map(load_poset).transpose()?;
    let pb = args.poset_b.as_deref().map(load_poset).transpose()?;
    let mut config = match kind {
        SweepKind::Boolean => SweepConfig::boolean(args.arity),
        SweepKind::Pseudo => SweepConfig::pseudo(args.arity),
        SweepKind::Lovasz => SweepConfig::lovasz(args.arity),
        SweepKind::Characterization => SweepConfig::characterization(args.domain, args.codomain, args.arity),
        SweepKind::Monotone => SweepConfig::monotone(
            pa.clone().unwrap_or_else(|| fixtures::chain(args.domain)),
            pb.clone().unwrap_or_else(|| fixtures::chain(args.codomain)),
            args.arity,
        ),
    };
    if kind != SweepKind::Monotone {
        if let Some(p) = pa {
            config.domain_size = p.len();
            config.poset_a = Some(p);
        }
        if let Some(p) = pb {
            config.codomain_size = p.len();
            config.poset_b = Some(p);
        }
    }
    config.monotone_only |= args.monotone;
    config.mode = match (args.exhaustive, args.samples) {
        (false, Some(count)) => Mode::Sample { count, seed: args.seed },
        _ => Mode::Exhaustive,
    };
    config.budget = args.budget;
    config.parallelism = args
        .parallelism
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = sweep(&config).map_err(plain)?;
    let code = if report.is_clean() { 0 } else { 1 };
    let text = if args.machine {
        report.machine_block()
    } else {
        format!("{report}{}", report.machine_block())
    };
    Ok((text, code))
}

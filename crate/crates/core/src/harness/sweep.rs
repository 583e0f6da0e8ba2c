//! Sweeps: every generated function checked against the oracles, with the
//! structural invariants asserted along the way.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::boolfn::{classify_boolean_gap, classify_pseudo_boolean_gap, zeta, BooleanGap, PseudoBooleanGap, PseudoGap2Reason};
use crate::error::{Error, Result};
use crate::extend::{classify_lovasz_gap2, eval_lovasz, eval_owen, gap_lovasz, LovaszExtension, OwenExtension, RationalPoint};
use crate::fnalg::{gap_via_characterization, reduce_to_essential, FiniteFunction};
use crate::order::{
    check_monotone_structural_props, classify_monotone_gap, directedness, median_form_match,
    minor_monotone_witness, Lattice, MonotoneGap, Poset,
};
use crate::rational::{format_rational, int};

use super::enumerate::Generator;
use super::fixtures;
use super::oracle::{oracle_gap, oracle_qa, DEFAULT_SUPPORT_BUDGET};

/// Default cap on exhaustively enumerated tables.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 20;

/// Indices handed to a worker at a time. Fixed so that the partition does
/// not depend on the number of workers.
const CHUNK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepKind {
    /// Boolean template classifier.
    Boolean,
    /// Pseudo-Boolean classifier on `{0,1}^n -> {0, 1, 2, 1/2}`.
    Pseudo,
    /// The quasi-arity / oddsupp characterization on `A^n -> B`.
    Characterization,
    /// Order-preserving functions between two posets.
    Monotone,
    /// Lovász extensions from coefficient bundles over `{-1, 0, 1, 2}`.
    Lovasz,
}

impl SweepKind {
    pub const ALL: [SweepKind; 5] = [
        SweepKind::Boolean,
        SweepKind::Pseudo,
        SweepKind::Characterization,
        SweepKind::Monotone,
        SweepKind::Lovasz,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::Boolean => "boolean",
            SweepKind::Pseudo => "pseudo",
            SweepKind::Characterization => "characterization",
            SweepKind::Monotone => "monotone",
            SweepKind::Lovasz => "lovasz",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub domain_size: usize,
    pub codomain_size: usize,
    pub arity: usize,
    pub mode: Mode,
    pub monotone_only: bool,
    pub poset_a: Option<Poset>,
    pub poset_b: Option<Poset>,
    /// Largest exhaustive space, in tables.
    pub budget: u64,
    /// Largest support space `oracle_qa` will enumerate.
    pub support_budget: u64,
    pub parallelism: usize,
}

impl SweepConfig {
    fn base(kind: SweepKind, domain_size: usize, codomain_size: usize, arity: usize) -> Self {
        Self {
            kind,
            domain_size,
            codomain_size,
            arity,
            mode: Mode::Exhaustive,
            monotone_only: false,
            poset_a: None,
            poset_b: None,
            budget: DEFAULT_TABLE_BUDGET,
            support_budget: DEFAULT_SUPPORT_BUDGET,
            parallelism: 1,
        }
    }

    pub fn boolean(arity: usize) -> Self {
        Self::base(SweepKind::Boolean, 2, 2, arity)
    }

    pub fn pseudo(arity: usize) -> Self {
        Self::base(SweepKind::Pseudo, 2, 4, arity)
    }

    pub fn characterization(domain_size: usize, codomain_size: usize, arity: usize) -> Self {
        Self::base(SweepKind::Characterization, domain_size, codomain_size, arity)
    }

    pub fn monotone(poset_a: Poset, poset_b: Poset, arity: usize) -> Self {
        let mut c = Self::base(SweepKind::Monotone, poset_a.len(), poset_b.len(), arity);
        c.poset_a = Some(poset_a);
        c.poset_b = Some(poset_b);
        c.monotone_only = true;
        c
    }

    pub fn lovasz(arity: usize) -> Self {
        Self::base(SweepKind::Lovasz, 2, 4, arity)
    }

    pub fn exhaustive(mut self) -> Self {
        self.mode = Mode::Exhaustive;
        self
    }

    pub fn sampled(mut self, count: u64, seed: u64) -> Self {
        self.mode = Mode::Sample { count, seed };
        self
    }

    pub fn monotone_only(mut self) -> Self {
        self.monotone_only = true;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_parallelism(mut self, workers: usize) -> Self {
        self.parallelism = workers;
        self
    }

    /// The given domain poset, or the chain on `domain_size` elements.
    pub fn domain_poset(&self) -> Poset {
        self.poset_a
            .clone()
            .unwrap_or_else(|| fixtures::chain(self.domain_size))
    }

    pub fn codomain_poset(&self) -> Poset {
        self.poset_b
            .clone()
            .unwrap_or_else(|| fixtures::chain(self.codomain_size))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.arity == 0 {
            return bad("arity must be at least 1".into());
        }
        if !(2..=64).contains(&self.domain_size) || !(2..=64).contains(&self.codomain_size) {
            return bad("domain and codomain sizes must lie in 2..=64".into());
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1".into());
        }
        if let Some(p) = &self.poset_a {
            if p.len() != self.domain_size {
                return bad("domain poset size differs from the domain size".into());
            }
        }
        if let Some(p) = &self.poset_b {
            if p.len() != self.codomain_size {
                return bad("codomain poset size differs from the codomain size".into());
            }
        }
        match self.kind {
            SweepKind::Boolean if (self.domain_size, self.codomain_size) != (2, 2) => {
                return bad("Boolean sweeps are on {0,1}".into())
            }
            SweepKind::Pseudo | SweepKind::Lovasz => {
                if self.domain_size != 2 || self.codomain_size != 4 {
                    return bad(format!("{} sweeps use domain 2 and four values", self.kind.as_str()));
                }
                if self.monotone_only {
                    return bad(format!("{} sweeps cannot be restricted to monotone tables", self.kind.as_str()));
                }
                if self.arity > 6 {
                    return bad("at most 6 variables".into());
                }
            }
            SweepKind::Monotone => {
                if !self.monotone_only {
                    return bad("monotone sweeps need monotone_only".into());
                }
                if !directedness(&self.domain_poset()).bidirected {
                    return Err(Error::NotBidirected);
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("kind".to_string(), self.kind.as_str().to_string()),
            ("domain_size".into(), self.domain_size.to_string()),
            ("codomain_size".into(), self.codomain_size.to_string()),
            ("arity".into(), self.arity.to_string()),
        ];
        match self.mode {
            Mode::Exhaustive => h.push(("mode".into(), "exhaustive".into())),
            Mode::Sample { count, seed } => {
                h.push(("mode".into(), "sample".into()));
                h.push(("samples".into(), count.to_string()));
                h.push(("seed".into(), seed.to_string()));
            }
        }
        h.push(("monotone_only".into(), self.monotone_only.to_string()));
        if self.monotone_only || self.kind == SweepKind::Monotone {
            h.push(("poset_a".into(), describe_poset(&self.domain_poset())));
            h.push(("poset_b".into(), describe_poset(&self.codomain_poset())));
        }
        h.push(("budget".into(), self.budget.to_string()));
        h.push(("support_budget".into(), self.support_budget.to_string()));
        h
    }
}

fn describe_poset(p: &Poset) -> String {
    let covers: Vec<String> = p
        .covers()
        .iter()
        .map(|&(a, b)| format!("{}<{}", p.carrier().element(a), p.carrier().element(b)))
        .collect();
    format!("{}[{}]", p.carrier().elements().join(" "), covers.join(","))
}

/// The oracle and a classifier disagreed on a table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Counterexample {
    pub index: u64,
    pub table: String,
    pub oracle: String,
    pub classifier: String,
}

/// A checked invariant failed on a table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub index: u64,
    pub invariant: String,
    pub table: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub header: Vec<(String, String)>,
    /// Indices yielding a table.
    pub generated: u64,
    /// Indices rejected by the order-preserving filter or a failed draw.
    pub filtered: u64,
    /// Tables with fewer than two essential variables.
    pub skipped: u64,
    pub agreements: u64,
    pub disagreements: Vec<Counterexample>,
    pub violations: Vec<Violation>,
    pub tallies: BTreeMap<String, u64>,
    pub wall_clock: Duration,
}

impl SweepReport {
    /// Checked tables, `agreements + disagreements`.
    pub fn total(&self) -> u64 {
        self.agreements + self.disagreements.len() as u64
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.violations.is_empty()
    }

    pub fn tally(&self, key: &str) -> u64 {
        self.tallies.get(key).copied().unwrap_or(0)
    }

    /// Associative and commutative up to the header, which is kept from
    /// `self`.
    pub fn merge(&mut self, other: SweepReport) {
        self.generated += other.generated;
        self.filtered += other.filtered;
        self.skipped += other.skipped;
        self.agreements += other.agreements;
        self.disagreements.extend(other.disagreements);
        self.disagreements.sort();
        self.violations.extend(other.violations);
        self.violations.sort();
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_default() += v;
        }
        self.wall_clock = self.wall_clock.max(other.wall_clock);
    }

    fn count(&mut self, key: impl Into<String>) {
        *self.tallies.entry(key.into()).or_default() += 1;
    }

    fn violation(&mut self, index: u64, invariant: impl Into<String>, table: &str) {
        self.violations.push(Violation {
            index,
            invariant: invariant.into(),
            table: table.to_string(),
        });
    }

    fn compare(&mut self, index: u64, table: &str, oracle: usize, classifier: Result<usize>) {
        match classifier {
            Ok(g) if g == oracle => self.agreements += 1,
            other => self.disagreements.push(Counterexample {
                index,
                table: table.to_string(),
                oracle: oracle.to_string(),
                classifier: match other {
                    Ok(g) => g.to_string(),
                    Err(e) => format!("error: {e}"),
                },
            }),
        }
    }

    /// `key=value` lines. Excludes the wall clock, so equal configurations
    /// give byte-identical blocks.
    pub fn machine_block(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("sweep.{k}={v}\n"));
        }
        out.push_str(&format!("generated={}\n", self.generated));
        out.push_str(&format!("filtered={}\n", self.filtered));
        out.push_str(&format!("skipped={}\n", self.skipped));
        out.push_str(&format!("total={}\n", self.total()));
        out.push_str(&format!("agreements={}\n", self.agreements));
        out.push_str(&format!("disagreements={}\n", self.disagreements.len()));
        out.push_str(&format!("violations={}\n", self.violations.len()));
        for (k, v) in &self.tallies {
            out.push_str(&format!("tally.{k}={v}\n"));
        }
        for c in &self.disagreements {
            out.push_str(&format!(
                "disagreement=index:{};table:{};oracle:{};classifier:{}\n",
                c.index, c.table, c.oracle, c.classifier
            ));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "violation=index:{};invariant:{};table:{}\n",
                v.index, v.invariant, v.table
            ));
        }
        out
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self
            .header
            .iter()
            .find(|(k, _)| k == "kind")
            .map_or("?", |(_, v)| v.as_str());
        writeln!(f, "{kind} sweep")?;
        writeln!(
            f,
            "  {} tables generated, {} filtered out, {} with fewer than two essential variables",
            self.generated, self.filtered, self.skipped
        )?;
        writeln!(
            f,
            "  {} checked: {} agreements, {} disagreements, {} invariant violations",
            self.total(),
            self.agreements,
            self.disagreements.len(),
            self.violations.len()
        )?;
        for (k, v) in &self.tallies {
            writeln!(f, "  {k}: {v}")?;
        }
        for c in self.disagreements.iter().take(10) {
            writeln!(
                f,
                "  disagreement #{}: [{}] oracle {} vs {}",
                c.index, c.table, c.oracle, c.classifier
            )?;
        }
        for v in self.violations.iter().take(10) {
            writeln!(f, "  violation #{}: {} on [{}]", v.index, v.invariant, v.table)?;
        }
        writeln!(f, "  wall clock: {:.3} s", self.wall_clock.as_secs_f64())
    }
}

/// Per-sweep state shared by all workers.
struct Context {
    config: SweepConfig,
    generator: Generator,
    pa: Poset,
    pb: Poset,
    chain_into_lattice: Option<Lattice>,
}

fn symbols(f: &FiniteFunction) -> String {
    let c = f.codomain();
    f.table()
        .iter()
        .map(|&v| c.symbol(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn reduced(f: &FiniteFunction) -> Option<FiniteFunction> {
    match reduce_to_essential(f) {
        Ok((g, _)) if g.arity() >= 2 => Some(g),
        _ => None,
    }
}

fn check_function(ctx: &Context, k: u64, f: &FiniteFunction, report: &mut SweepReport) {
    let label = symbols(f);
    let Some(g) = reduced(f) else {
        report.skipped += 1;
        return;
    };
    let oracle = match oracle_gap(&g) {
        Ok(v) => v,
        Err(e) => {
            report.violation(k, format!("oracle_error: {e}"), &label);
            return;
        }
    };
    report.count(format!("gap.{oracle}"));
    if g.arity() > g.domain().len().max(3) && oracle > 2 {
        report.violation(k, "gap_bound", &label);
    }
    match ctx.config.kind {
        SweepKind::Boolean => {
            let c = classify_boolean_gap(&g);
            if let Ok(BooleanGap::Gap2(m)) = &c {
                report.count(format!("template.{}", m.template.as_str()));
            }
            report.compare(k, &label, oracle, c.map(|c| c.gap()));
        }
        SweepKind::Pseudo => {
            let c = classify_pseudo_boolean_gap(&g);
            match &c {
                Ok(PseudoBooleanGap::Gap2(PseudoGap2Reason::BinaryDiagonal)) => report.count("reason.binary_diagonal"),
                Ok(PseudoBooleanGap::Gap2(PseudoGap2Reason::TwoValuedComposition { boolean, .. })) => {
                    report.count(format!("reason.two_valued.{}", boolean.template.as_str()))
                }
                _ => {}
            }
            report.compare(k, &label, oracle, c.map(|c| c.gap()));
        }
        SweepKind::Characterization => check_characterization(ctx, k, &g, &label, oracle, report),
        SweepKind::Monotone => check_monotone(ctx, k, f, &g, &label, oracle, report),
        SweepKind::Lovasz => unreachable!("Lovász items are bundles"),
    }
}

fn check_characterization(
    ctx: &Context,
    k: u64,
    g: &FiniteFunction,
    label: &str,
    oracle: usize,
    report: &mut SweepReport,
) {
    match gap_via_characterization(g) {
        Ok(r) => {
            report.count(format!("case.{}", r.theorem_case.as_str()));
            if !r.is_consistent() {
                report.violation(k, "report_inconsistent", label);
            }
            let qa = oracle_qa(g, ctx.config.support_budget);
            if qa.exhaustive {
                report.count("qa.checked");
                if qa.qa != r.qa {
                    report.violation(k, format!("qa_mismatch: oracle {} vs {}", qa.qa, r.qa), label);
                }
            } else {
                report.count("qa.fallback");
            }
            report.compare(k, label, oracle, Ok(r.gap));
        }
        Err(e) => report.compare(k, label, oracle, Err(e)),
    }
}

fn check_monotone(
    ctx: &Context,
    k: u64,
    f: &FiniteFunction,
    g: &FiniteFunction,
    label: &str,
    oracle: usize,
    report: &mut SweepReport,
) {
    let (pa, pb) = (&ctx.pa, &ctx.pb);
    let c = classify_monotone_gap(g, pa, pb);
    if let Ok(MonotoneGap::Gap2(cert)) = &c {
        if !cert.validate(g, pa, pb) {
            report.violation(k, "certificate_invalid", label);
        }
        if g.arity() == f.arity() {
            report.count("full_arity_gap2");
        }
    }
    match check_monotone_structural_props(g, pa, pb) {
        Ok(s) => {
            if let Some(clause) = s.violation() {
                report.violation(k, format!("structural: {clause}"), label);
            }
        }
        Err(e) => report.violation(k, format!("structural_error: {e}"), label),
    }
    let n = g.arity();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !matches!(minor_monotone_witness(g, pa, pb, i, j), Ok(Some(_))) {
                report.violation(k, format!("no_minor_witness: x{}, x{}", i + 1, j + 1), label);
            }
        }
    }
    if let (Some(lattice), 3) = (&ctx.chain_into_lattice, n) {
        match median_form_match(g, pa, lattice) {
            Ok(h) => {
                if h.is_some() != (oracle == 2) {
                    report.violation(k, "median_form_presence", label);
                }
            }
            Err(e) => report.violation(k, format!("median_form_error: {e}"), label),
        }
    }
    report.compare(k, label, oracle, c.map(|c| c.gap()));
}

fn check_bundle(ctx: &Context, k: u64, codes: &[usize], report: &mut SweepReport) {
    let m = ctx.generator.bundle_from_codes(codes);
    let label = m
        .coefficients()
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(",");
    let n = m.n();
    let values = zeta(&m);
    let lovasz = LovaszExtension::new(m.clone());
    let owen = OwenExtension::new(m.clone());
    for mask in 0..1usize << n {
        let vertex = RationalPoint((0..n).map(|i| int(((mask >> i) & 1) as i64)).collect());
        let v = values.value(mask);
        if eval_lovasz(&lovasz, &vertex).as_ref() != Ok(v) || eval_owen(&owen, &vertex).as_ref() != Ok(v) {
            report.violation(k, "vertex_mismatch", &label);
            break;
        }
    }
    let Some(reduced) = lovasz.reduce_to_essential().filter(|r| r.n() >= 2) else {
        report.skipped += 1;
        return;
    };
    let restriction = crate::extend::restrict_to_cube(reduced.coefficients());
    let oracle = match oracle_gap(&restriction) {
        Ok(v) => v,
        Err(e) => {
            report.violation(k, format!("oracle_error: {e}"), &label);
            return;
        }
    };
    report.count(format!("gap.{oracle}"));
    match classify_lovasz_gap2(&reduced) {
        Ok(found) => {
            if let Some(hit) = &found {
                report.count(format!("form.{}", hit.form.as_str()));
                if hit.instantiate(reduced.n()).as_ref() != Some(reduced.coefficients()) {
                    report.violation(k, "form_reinstantiation", &label);
                }
            }
            if found.is_some() != (oracle == 2) {
                report.violation(k, "form_presence", &label);
            }
        }
        Err(e) => report.violation(k, format!("form_error: {e}"), &label),
    }
    report.compare(k, &label, oracle, gap_lovasz(&reduced));
}

fn run_chunk(ctx: &Context, start: u64, end: u64) -> SweepReport {
    let mut report = SweepReport::default();
    for k in start..end {
        let Some(codes) = ctx.generator.codes_at(k) else {
            report.filtered += 1;
            continue;
        };
        report.generated += 1;
        if ctx.config.kind == SweepKind::Lovasz {
            check_bundle(ctx, k, &codes, &mut report);
        } else {
            let f = ctx.generator.function_from_codes(&codes);
            check_function(ctx, k, &f, &mut report);
        }
    }
    report
}

/// Runs the sweep on `config.parallelism` workers. Only configuration
/// problems are errors; failed checks are recorded in the report.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    let generator = Generator::new(config)?;
    let pa = config.domain_poset();
    let pb = config.codomain_poset();
    let chain_into_lattice = if pa.is_chain() {
        Lattice::from_poset(pb.clone()).ok()
    } else {
        None
    };
    let ctx = Context {
        config: config.clone(),
        generator,
        pa,
        pb,
        chain_into_lattice,
    };
    let len = ctx.generator.len();
    let chunks: Vec<(u64, u64)> = (0..len.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(len)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let parts: Vec<SweepReport> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(s, e)| run_chunk(&ctx, s, e))
            .collect()
    });
    let mut report = SweepReport {
        header: config.header(),
        ..SweepReport::default()
    };
    for part in parts {
        report.merge(part);
    }
    report.wall_clock = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_ternary_sweep() {
        let r = sweep(&SweepConfig::boolean(3).exhaustive()).unwrap();
        assert_eq!(r.generated, 256);
        assert!(r.is_clean(), "{r}");
        assert_eq!(r.total() + r.skipped, 256);
    }

    #[test]
    fn merge_is_order_independent() {
        let config = SweepConfig::characterization(3, 3, 2).sampled(600, 3);
        let one = sweep(&config).unwrap();
        let four = sweep(&config.clone().with_parallelism(4)).unwrap();
        assert_eq!(one.machine_block(), four.machine_block());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(SweepConfig::boolean(3).with_parallelism(0).validate().is_err());
        let mut c = SweepConfig::pseudo(3);
        c.monotone_only = true;
        assert!(c.validate().is_err());
        let anti = Poset::antichain(crate::fnalg::Carrier::range("A", 2).unwrap());
        let c = SweepConfig::monotone(anti, fixtures::chain(2), 2);
        assert_eq!(c.validate(), Err(Error::NotBidirected));
    }
}

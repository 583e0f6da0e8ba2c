//! Finite functions `f: A^n -> B` stored as total tables, together with
//! essential variables, simple minors, quasi-arity and the arity gap.
//!
//! Tuples are indexed lexicographically by element index with the first
//! coordinate most significant. Variable indices are 0-based throughout the
//! API; human-readable output names them `x1..xn`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

const MAX_CARRIER: usize = 64;

/// An ordered set of distinct element symbols. Equality ignores the name.
#[derive(Clone, Debug, Eq)]
pub struct Carrier {
    name: String,
    elements: Vec<String>,
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Carrier {
    pub fn new<S: Into<String>>(name: impl Into<String>, elements: Vec<S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.len() < 2 {
            return Err(Error::InvalidCarrier(
                "a carrier needs at least two elements".into(),
            ));
        }
        if elements.len() > MAX_CARRIER {
            return Err(Error::InvalidCarrier(format!(
                "at most {MAX_CARRIER} elements supported, got {}",
                elements.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for e in &elements {
            if e.is_empty() || e.chars().any(char::is_whitespace) {
                return Err(Error::InvalidCarrier(format!("bad element symbol {e:?}")));
            }
            if !seen.insert(e.as_str()) {
                return Err(Error::InvalidCarrier(format!("duplicate element {e}")));
            }
        }
        Ok(Self {
            name: name.into(),
            elements,
        })
    }

    /// The carrier `{0, 1, ..., size-1}`.
    pub fn range(name: impl Into<String>, size: usize) -> Result<Self> {
        Self::new(name, (0..size).map(|i| i.to_string()).collect())
    }

    pub fn boolean() -> Self {
        Self::range("bool", 2).expect("two elements")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == symbol)
    }

    /// True when the carrier is literally `{0, 1}` in that order.
    pub fn is_boolean(&self) -> bool {
        self.elements.len() == 2 && self.elements[0] == "0" && self.elements[1] == "1"
    }
}

/// Where function values live.
#[derive(Clone, Debug)]
pub enum Codomain {
    /// Values are element indices of the carrier.
    Finite(Carrier),
    /// Values are indices into this list of distinct rationals.
    Rational(Vec<Rational>),
}

impl Codomain {
    pub fn len(&self) -> usize {
        match self {
            Codomain::Finite(c) => c.len(),
            Codomain::Rational(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Codomain::Rational(_))
    }

    /// Display form of a value code.
    pub fn symbol(&self, code: usize) -> String {
        match self {
            Codomain::Finite(c) => c.element(code).to_string(),
            Codomain::Rational(v) => format_rational(&v[code]),
        }
    }

    /// The value as a rational, when the symbol parses as one.
    pub fn rational(&self, code: usize) -> Option<Rational> {
        match self {
            Codomain::Finite(c) => parse_rational(c.element(code)),
            Codomain::Rational(v) => Some(v[code].clone()),
        }
    }

    fn same_kind(&self, other: &Codomain) -> bool {
        match (self, other) {
            (Codomain::Finite(a), Codomain::Finite(b)) => a == b,
            (Codomain::Rational(_), Codomain::Rational(_)) => true,
            _ => false,
        }
    }
}

/// Index arithmetic on `A^n` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    base: usize,
    arity: usize,
}

impl TupleSpace {
    pub fn new(base: usize, arity: usize) -> Self {
        Self { base, arity }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.base.pow(self.arity as u32)
    }

    /// Place value of coordinate `i`.
    pub fn weight(&self, i: usize) -> usize {
        self.base.pow((self.arity - 1 - i) as u32)
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.base;
            index /= self.base;
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity];
        self.decode_into(index, &mut out);
        out
    }

    pub fn digit(&self, index: usize, i: usize) -> usize {
        (index / self.weight(i)) % self.base
    }

    /// All tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size()).map(|k| self.decode(k))
    }
}

/// A total table of an `n`-ary function from a finite carrier.
#[derive(Clone, Debug)]
pub struct FiniteFunction {
    domain: Carrier,
    arity: usize,
    codomain: Codomain,
    table: Vec<usize>,
}

impl PartialEq for FiniteFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.domain != other.domain
            || self.arity != other.arity
            || !self.codomain.same_kind(&other.codomain)
        {
            return false;
        }
        match (&self.codomain, &other.codomain) {
            (Codomain::Rational(a), Codomain::Rational(b)) => self
                .table
                .iter()
                .zip(&other.table)
                .all(|(&x, &y)| a[x] == b[y]),
            _ => self.table == other.table,
        }
    }
}

impl Eq for FiniteFunction {}

impl FiniteFunction {
    pub fn new(domain: Carrier, arity: usize, codomain: Codomain, table: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidTable("arity must be positive".into()));
        }
        let expected = domain
            .len()
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidTable("table too large".into()))?;
        if table.len() != expected {
            return Err(Error::InvalidTable(format!(
                "expected {expected} entries, found {}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::InvalidTable(format!("value code {bad} outside codomain")));
        }
        if let Codomain::Rational(values) = &codomain {
            let distinct: BTreeSet<&Rational> = values.iter().collect();
            if distinct.len() != values.len() {
                return Err(Error::InvalidTable("rational value list has duplicates".into()));
            }
        }
        Ok(Self {
            domain,
            arity,
            codomain,
            table,
        })
    }

    /// Tabulates `f` over `domain^arity` with values in a finite carrier.
    pub fn from_fn(
        domain: Carrier,
        codomain: Carrier,
        arity: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let space = TupleSpace::new(domain.len(), arity);
        let table = space.tuples().map(|t| f(&t)).collect();
        Self::new(domain, arity, Codomain::Finite(codomain), table)
    }

    /// Tabulates a rational-valued `f`; the value list is stored sorted.
    pub fn from_rational_fn(
        domain: Carrier,
        arity: usize,
        f: impl Fn(&[usize]) -> Rational,
    ) -> Result<Self> {
        let space = TupleSpace::new(domain.len(), arity);
        let values: Vec<Rational> = space.tuples().map(|t| f(&t)).collect();
        Self::from_rational_values(domain, arity, values)
    }

    /// Builds a rational-valued function from its values in table order.
    pub fn from_rational_values(domain: Carrier, arity: usize, values: Vec<Rational>) -> Result<Self> {
        let distinct: Vec<Rational> = values
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let table = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("present"))
            .collect();
        Self::new(domain, arity, Codomain::Rational(distinct), table)
    }

    /// A Boolean function `{0,1}^n -> {0,1}`.
    pub fn boolean(arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        Self::from_fn(Carrier::boolean(), Carrier::boolean(), arity, f).expect("well-formed")
    }

    /// A pseudo-Boolean function `{0,1}^n -> Q`.
    pub fn pseudo_boolean(arity: usize, f: impl Fn(&[usize]) -> Rational) -> Self {
        Self::from_rational_fn(Carrier::boolean(), arity, f).expect("well-formed")
    }

    pub fn domain(&self) -> &Carrier {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn codomain(&self) -> &Codomain {
        &self.codomain
    }

    /// Value codes in lexicographic tuple order.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn space(&self) -> TupleSpace {
        TupleSpace::new(self.domain.len(), self.arity)
    }

    /// Value code at a tuple of element indices.
    pub fn eval(&self, tuple: &[usize]) -> usize {
        self.table[self.space().index(tuple)]
    }

    pub fn rational_at(&self, index: usize) -> Option<Rational> {
        self.codomain.rational(self.table[index])
    }

    /// Same domain and codomain, new table.
    pub fn with_table(&self, arity: usize, table: Vec<usize>) -> Result<Self> {
        Self::new(self.domain.clone(), arity, self.codomain.clone(), table)
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    /// Distinct value codes that actually occur.
    pub fn range_codes(&self) -> BTreeSet<usize> {
        self.table.iter().copied().collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: i,
                arity: self.arity,
            });
        }
        Ok(())
    }

    /// Whether the function depends on `x_i`, without producing a witness.
    pub fn depends_on(&self, i: usize) -> bool {
        let space = self.space();
        let w = space.weight(i);
        let base = space.base();
        (0..self.table.len())
            .filter(|&k| (k / w).is_multiple_of(base))
            .any(|k| (1..base).any(|b| self.table[k + b * w] != self.table[k]))
    }
}

/// A pair of tuples differing only at `index` on which the function differs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialityWitness {
    pub index: usize,
    pub base: Vec<usize>,
    pub replacement: usize,
}

impl EssentialityWitness {
    pub fn replaced(&self) -> Vec<usize> {
        let mut t = self.base.clone();
        t[self.index] = self.replacement;
        t
    }
}

/// The lexicographically first witness of essentiality of `x_i`, if any.
pub fn is_essential(f: &FiniteFunction, i: usize) -> Result<Option<EssentialityWitness>> {
    f.check_index(i)?;
    let space = f.space();
    let w = space.weight(i);
    for k in 0..f.table.len() {
        let a = space.digit(k, i);
        for b in (0..space.base()).filter(|&b| b != a) {
            let other = k + b * w - a * w;
            if f.table[k] != f.table[other] {
                return Ok(Some(EssentialityWitness {
                    index: i,
                    base: space.decode(k),
                    replacement: b,
                }));
            }
        }
    }
    Ok(None)
}

pub fn essential_variables(f: &FiniteFunction) -> Vec<usize> {
    (0..f.arity).filter(|&i| f.depends_on(i)).collect()
}

pub fn essential_arity(f: &FiniteFunction) -> usize {
    (0..f.arity).filter(|&i| f.depends_on(i)).count()
}

/// A total map `[m] -> [n]` describing a simple variable substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableMap {
    source_arity: usize,
    target_arity: usize,
    map: Vec<usize>,
}

impl VariableMap {
    pub fn new(target_arity: usize, map: Vec<usize>) -> Result<Self> {
        if target_arity == 0 || map.is_empty() {
            return Err(Error::InvalidVariableMap("arities must be positive".into()));
        }
        if let Some(&bad) = map.iter().find(|&&k| k >= target_arity) {
            return Err(Error::InvalidVariableMap(format!(
                "image {bad} outside target arity {target_arity}"
            )));
        }
        Ok(Self {
            source_arity: map.len(),
            target_arity,
            map,
        })
    }

    pub fn identity(arity: usize) -> Self {
        Self::new(arity, (0..arity).collect()).expect("valid")
    }

    pub fn source_arity(&self) -> usize {
        self.source_arity
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

impl fmt::Display for VariableMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|k| format!("x{}", k + 1)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `result(x_1..x_n) = g(x_{σ(1)}, ..., x_{σ(m)})`.
pub fn simple_minor(g: &FiniteFunction, sigma: &VariableMap) -> Result<FiniteFunction> {
    if sigma.source_arity != g.arity {
        return Err(Error::WrongArity {
            expected: g.arity,
            found: sigma.source_arity,
        });
    }
    let source = g.space();
    let target = TupleSpace::new(g.domain.len(), sigma.target_arity);
    let weights: Vec<usize> = (0..g.arity).map(|k| source.weight(k)).collect();
    let mut x = vec![0; sigma.target_arity];
    let table = (0..target.size())
        .map(|k| {
            target.decode_into(k, &mut x);
            let idx: usize = sigma
                .map
                .iter()
                .zip(&weights)
                .map(|(&s, &w)| x[s] * w)
                .sum();
            g.table[idx]
        })
        .collect();
    g.with_table(sigma.target_arity, table)
}

/// The identification minor `f_{i<-j}`: `x_j` substituted for `x_i`.
pub fn identify(f: &FiniteFunction, i: usize, j: usize) -> Result<FiniteFunction> {
    f.check_index(i)?;
    f.check_index(j)?;
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let mut map: Vec<usize> = (0..f.arity).collect();
    map[i] = j;
    simple_minor(f, &VariableMap::new(f.arity, map)?)
}

fn check_same_carriers(f: &FiniteFunction, g: &FiniteFunction) -> Result<()> {
    if f.domain != g.domain {
        return Err(Error::CarrierMismatch("domains differ".into()));
    }
    if !f.codomain.same_kind(&g.codomain) {
        return Err(Error::CarrierMismatch("codomains differ".into()));
    }
    Ok(())
}

/// Searches all maps `[arity g] -> [arity f]` in lexicographic order for
/// one exhibiting `f` as a simple minor of `g`.
pub fn is_minor_of(f: &FiniteFunction, g: &FiniteFunction) -> Result<Option<VariableMap>> {
    check_same_carriers(f, g)?;
    let maps = TupleSpace::new(f.arity, g.arity);
    for k in 0..maps.size() {
        let sigma = VariableMap::new(f.arity, maps.decode(k))?;
        if simple_minor(g, &sigma)? == *f {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

pub fn equivalent(f: &FiniteFunction, g: &FiniteFunction) -> Result<bool> {
    Ok(is_minor_of(f, g)?.is_some() && is_minor_of(g, f)?.is_some())
}

/// Drops inessential variables. Returns `h` and the map `σ` with
/// `f = simple_minor(h, σ)`.
pub fn reduce_to_essential(f: &FiniteFunction) -> Result<(FiniteFunction, VariableMap)> {
    let essential = essential_variables(f);
    if essential.is_empty() {
        return Err(Error::ConstantFunction);
    }
    if essential.len() == f.arity {
        return Ok((f.clone(), VariableMap::identity(f.arity)));
    }
    let space = f.space();
    let reduced = TupleSpace::new(f.domain.len(), essential.len());
    let mut y = vec![0; essential.len()];
    let table = (0..reduced.size())
        .map(|k| {
            reduced.decode_into(k, &mut y);
            let idx: usize = essential
                .iter()
                .zip(&y)
                .map(|(&e, &v)| v * space.weight(e))
                .sum();
            f.table[idx]
        })
        .collect();
    let h = f.with_table(essential.len(), table)?;
    Ok((h, VariableMap::new(f.arity, essential)?))
}

/// True when the tuple belongs to `A^n_=` (every tuple does when `n = 1`).
pub fn is_diagonal(tuple: &[usize]) -> bool {
    if tuple.len() == 1 {
        return true;
    }
    let mut seen = 0u64;
    for &a in tuple {
        if seen & (1 << a) != 0 {
            return true;
        }
        seen |= 1 << a;
    }
    false
}

/// `A^n_=` in lexicographic order.
pub fn diagonal_tuples(domain: &Carrier, n: usize) -> Vec<Vec<usize>> {
    TupleSpace::new(domain.len(), n)
        .tuples()
        .filter(|t| is_diagonal(t))
        .collect()
}

fn diagonal_indices(space: TupleSpace) -> Vec<usize> {
    let mut t = vec![0; space.arity()];
    (0..space.size())
        .filter(|&k| {
            space.decode_into(k, &mut t);
            is_diagonal(&t)
        })
        .collect()
}

pub(crate) fn oddsupp_mask(tuple: &[usize]) -> u64 {
    tuple.iter().fold(0u64, |m, &a| m ^ (1 << a))
}

/// Elements occurring an odd number of times in `tuple`.
pub fn oddsupp(tuple: &[usize]) -> BTreeSet<usize> {
    let mask = oddsupp_mask(tuple);
    (0..64).filter(|b| mask & (1 << b) != 0).collect()
}

/// Whether `f` restricted to `A^n_=` factors through `oddsupp`.
pub fn is_determined_by_oddsupp(f: &FiniteFunction) -> bool {
    let space = f.space();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut t = vec![0; f.arity];
    for k in diagonal_indices(space) {
        space.decode_into(k, &mut t);
        let v = f.table[k];
        if *seen.entry(oddsupp_mask(&t)).or_insert(v) != v {
            return false;
        }
    }
    true
}

/// Least `|S|` such that `f` on `A^n_=` is constant on every fibre of the
/// projection onto the coordinates in `S`.
pub fn quasi_arity(f: &FiniteFunction) -> usize {
    let space = f.space();
    let diagonal = diagonal_indices(space);
    let n = f.arity;
    let mut t = vec![0; n];
    for size in 0..=n {
        for subset in (0..n).combinations(size) {
            let mut fibre: HashMap<usize, usize> = HashMap::new();
            let ok = diagonal.iter().all(|&k| {
                space.decode_into(k, &mut t);
                let key = subset.iter().fold(0, |acc, &i| acc * space.base() + t[i]);
                *fibre.entry(key).or_insert(f.table[k]) == f.table[k]
            });
            if ok {
                return size;
            }
        }
    }
    n
}

/// `min` over ordered pairs of essential `i != j` of `ess f - ess f_{i<-j}`.
pub fn arity_gap(f: &FiniteFunction) -> Result<usize> {
    let essential = essential_variables(f);
    if essential.len() < 2 {
        return Err(Error::ArityGapUndefined(essential.len()));
    }
    let ess = essential.len();
    let mut gap = usize::MAX;
    for &i in &essential {
        for &j in &essential {
            if i != j {
                gap = gap.min(ess - essential_arity(&identify(f, i, j)?));
            }
        }
    }
    Ok(gap)
}

/// Which clause of the arity-gap characterization applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremCase {
    /// `gap = p >= 3` because `qa = n - p`.
    PGe3,
    /// `n != 3`, `qa = n - 2`.
    Gap2Qa,
    /// `n != 3`, `qa = n` and the diagonal restriction is determined by oddsupp.
    Gap2Oddsupp,
    /// `n = 3` with the three identification identities.
    N3Condition,
    Gap1,
}

impl TheoremCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremCase::PGe3 => "case_p_ge_3",
            TheoremCase::Gap2Qa => "case_gap2_qa",
            TheoremCase::Gap2Oddsupp => "case_gap2_oddsupp",
            TheoremCase::N3Condition => "case_n3_condition",
            TheoremCase::Gap1 => "case_gap1",
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `h` and selectors `i1, i2, i3` with `f(x1,x0,x0) = h(x_{i1})`,
/// `f(x0,x1,x0) = h(x_{i2})`, `f(x0,x0,x1) = h(x_{i3})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryCondition {
    pub h: FiniteFunction,
    pub selectors: [u8; 3],
}

/// Looks for the ternary gap-2 identities. `h` is forced to be
/// `x -> f(x,x,x)`; selector 0 is preferred when both fit.
pub fn ternary_gap2_condition(f: &FiniteFunction) -> Result<Option<TernaryCondition>> {
    if f.arity != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: f.arity,
        });
    }
    let size = f.domain.len();
    let h: Vec<usize> = (0..size).map(|x| f.eval(&[x, x, x])).collect();
    if h.windows(2).all(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let mut selectors = [0u8; 3];
    for (position, selector) in selectors.iter_mut().enumerate() {
        let at = |x1: usize, x0: usize| {
            let mut t = [x0; 3];
            t[position] = x1;
            f.eval(&t)
        };
        let fits = |sel: u8| {
            (0..size).all(|x1| {
                (0..size).all(|x0| at(x1, x0) == h[if sel == 0 { x0 } else { x1 }])
            })
        };
        *selector = match (fits(0), fits(1)) {
            (true, _) => 0,
            (false, true) => 1,
            (false, false) => return Ok(None),
        };
    }
    let h = f.with_table(1, h)?;
    Ok(Some(TernaryCondition { h, selectors }))
}

/// Diagnostic record of the gap characterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub arity: usize,
    pub essential_variables: Vec<usize>,
    pub ess: usize,
    /// `(i, j) -> ess f_{i<-j}` over ordered pairs of essential variables.
    pub per_pair_minor_ess: BTreeMap<(usize, usize), usize>,
    pub essl: usize,
    /// Gap as decided by the characterization.
    pub gap: usize,
    pub qa: usize,
    pub oddsupp_determined: bool,
    pub theorem_case: TheoremCase,
    pub ternary: Option<TernaryCondition>,
}

impl GapReport {
    /// The identification-minimum gap, independent of the characterization.
    pub fn identification_gap(&self) -> usize {
        self.per_pair_minor_ess
            .values()
            .map(|&m| self.ess - m)
            .min()
            .unwrap_or(0)
    }

    /// Both `gap = ess - essl` and agreement with the identification minimum.
    pub fn is_consistent(&self) -> bool {
        self.gap + self.essl == self.ess && self.gap == self.identification_gap()
    }

    /// `key=value` lines, one per field.
    pub fn machine_block(&self) -> String {
        let vars: Vec<String> = self
            .essential_variables
            .iter()
            .map(|i| format!("x{}", i + 1))
            .collect();
        let pairs: Vec<String> = self
            .per_pair_minor_ess
            .iter()
            .map(|((i, j), m)| format!("x{}<-x{}:{m}", i + 1, j + 1))
            .collect();
        let mut out = String::new();
        out.push_str(&format!("arity={}\n", self.arity));
        out.push_str(&format!("essential_variables={}\n", vars.join(",")));
        out.push_str(&format!("ess={}\n", self.ess));
        out.push_str(&format!("per_pair_minor_ess={}\n", pairs.join(",")));
        out.push_str(&format!("essl={}\n", self.essl));
        out.push_str(&format!("gap={}\n", self.gap));
        out.push_str(&format!("qa={}\n", self.qa));
        out.push_str(&format!("oddsupp_determined={}\n", self.oddsupp_determined));
        out.push_str(&format!("theorem_case={}\n", self.theorem_case));
        out
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arity gap report")?;
        writeln!(f, "  ess = {}, essl = {}, gap = {}", self.ess, self.essl, self.gap)?;
        writeln!(f, "  quasi-arity = {}", self.qa)?;
        writeln!(f, "  determined by oddsupp on the diagonal: {}", self.oddsupp_determined)?;
        writeln!(f, "  matched case: {}", self.theorem_case)?;
        if let Some(cond) = &self.ternary {
            let h: Vec<String> = cond
                .h
                .table()
                .iter()
                .map(|&v| cond.h.codomain().symbol(v))
                .collect();
            writeln!(
                f,
                "  h = [{}], selectors = {:?}",
                h.join(" "),
                cond.selectors
            )?;
        }
        Ok(())
    }
}

/// Decides the gap from quasi-arity, the oddsupp condition and the ternary
/// identities. `f` must depend on all of its `n >= 2` variables.
pub fn gap_via_characterization(f: &FiniteFunction) -> Result<GapReport> {
    let n = f.arity;
    if let Some(i) = (0..n).find(|&i| !f.depends_on(i)) {
        return Err(Error::InessentialVariable(i));
    }
    if n < 2 {
        return Err(Error::ArityGapUndefined(n));
    }
    let mut per_pair = BTreeMap::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            per_pair.insert((i, j), essential_arity(&identify(f, i, j)?));
        }
    }
    let essl = per_pair.values().copied().max().unwrap_or(0);
    let qa = quasi_arity(f);
    let oddsupp_determined = is_determined_by_oddsupp(f);
    let mut ternary = None;

    let (gap, theorem_case) = if qa + 3 <= n {
        (n - qa, TheoremCase::PGe3)
    } else if n != 3 {
        if qa + 2 == n {
            (2, TheoremCase::Gap2Qa)
        } else if qa == n && oddsupp_determined {
            (2, TheoremCase::Gap2Oddsupp)
        } else {
            (1, TheoremCase::Gap1)
        }
    } else {
        ternary = ternary_gap2_condition(f)?;
        if ternary.is_some() {
            (2, TheoremCase::N3Condition)
        } else {
            (1, TheoremCase::Gap1)
        }
    };

    Ok(GapReport {
        arity: n,
        essential_variables: (0..n).collect(),
        ess: n,
        per_pair_minor_ess: per_pair,
        essl,
        gap,
        qa,
        oddsupp_determined,
        theorem_case,
        ternary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity(n: usize) -> FiniteFunction {
        FiniteFunction::boolean(n, |x| x.iter().sum::<usize>() % 2)
    }

    fn majority3() -> FiniteFunction {
        FiniteFunction::boolean(3, |x| usize::from(x.iter().sum::<usize>() >= 2))
    }

    fn and2() -> FiniteFunction {
        FiniteFunction::boolean(2, |x| x[0] & x[1])
    }

    fn or(n: usize) -> FiniteFunction {
        FiniteFunction::boolean(n, |x| usize::from(x.contains(&1)))
    }

    fn projection(n: usize, i: usize) -> FiniteFunction {
        FiniteFunction::boolean(n, |x| x[i])
    }

    #[test]
    fn carrier_validation() {
        assert!(Carrier::new("A", vec!["a"]).is_err());
        assert!(Carrier::new("A", vec!["a", "a"]).is_err());
        assert!(Carrier::new("A", vec!["a", "b c"]).is_err());
        let c = Carrier::new("A", vec!["a", "b"]).unwrap();
        assert_eq!(c.index_of("b"), Some(1));
        assert_eq!(c, Carrier::new("other", vec!["a", "b"]).unwrap());
    }

    #[test]
    fn table_validation() {
        let b = Carrier::boolean();
        assert!(FiniteFunction::new(b.clone(), 2, Codomain::Finite(b.clone()), vec![0; 3]).is_err());
        assert!(FiniteFunction::new(b.clone(), 1, Codomain::Finite(b.clone()), vec![0, 2]).is_err());
        assert!(FiniteFunction::new(b.clone(), 0, Codomain::Finite(b), vec![0]).is_err());
    }

    #[test]
    fn essentiality_examples() {
        let w = is_essential(&parity(2), 0).unwrap().unwrap();
        assert_eq!((w.base.clone(), w.replacement), (vec![0, 0], 1));
        assert_eq!(w.replaced(), vec![1, 0]);
        let constant = FiniteFunction::boolean(2, |_| 1);
        assert!(is_essential(&constant, 1).unwrap().is_none());
        assert!(is_essential(&projection(2, 0), 1).unwrap().is_none());
        assert!(matches!(
            is_essential(&parity(2), 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn essential_arity_examples() {
        assert_eq!(essential_arity(&parity(2)), 2);
        assert_eq!(essential_arity(&FiniteFunction::boolean(3, |_| 0)), 0);
        let or12 = FiniteFunction::boolean(3, |x| x[0] | x[1]);
        assert_eq!(essential_arity(&or12), 2);
        assert_eq!(essential_variables(&or12), vec![0, 1]);
    }

    #[test]
    fn simple_minor_examples() {
        let diag = simple_minor(&and2(), &VariableMap::new(1, vec![0, 0]).unwrap()).unwrap();
        assert_eq!(diag, projection(1, 0));
        let swapped = simple_minor(&and2(), &VariableMap::new(2, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(swapped, and2());
        let xor_diag = simple_minor(&parity(2), &VariableMap::new(1, vec![0, 0]).unwrap()).unwrap();
        assert_eq!(xor_diag, FiniteFunction::boolean(1, |_| 0));
        assert!(simple_minor(&and2(), &VariableMap::identity(3)).is_err());
        assert!(VariableMap::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn identify_examples() {
        assert_eq!(identify(&parity(3), 0, 1).unwrap(), projection(3, 2));
        assert_eq!(identify(&and2(), 0, 1).unwrap(), projection(2, 1));
        // maj(x1, x3, x3) = x3 on every row.
        assert_eq!(identify(&majority3(), 1, 2).unwrap(), projection(3, 2));
        assert_eq!(identify(&and2(), 1, 1), Err(Error::SameIndex(1)));
    }

    #[test]
    fn minor_examples() {
        let swapped = FiniteFunction::boolean(2, |x| x[1] & x[0]);
        assert!(equivalent(&swapped, &and2()).unwrap());
        // AND(x, x) = x, so the unary projection is a minor of AND2.
        let sigma = is_minor_of(&projection(1, 0), &and2()).unwrap().unwrap();
        assert_eq!(sigma.map(), &[0, 0]);
        let zero = FiniteFunction::boolean(1, |_| 0);
        let sigma = is_minor_of(&zero, &parity(2)).unwrap().unwrap();
        assert_eq!(sigma.map(), &[0, 0]);
        assert!(is_minor_of(&projection(2, 0), &FiniteFunction::boolean(2, |_| 0))
            .unwrap()
            .is_none());
        let ternary = FiniteFunction::from_fn(
            Carrier::range("A", 3).unwrap(),
            Carrier::boolean(),
            1,
            |_| 0,
        )
        .unwrap();
        assert!(matches!(
            is_minor_of(&ternary, &and2()),
            Err(Error::CarrierMismatch(_))
        ));
    }

    #[test]
    fn reduce_examples() {
        let or12 = FiniteFunction::boolean(3, |x| x[0] | x[1]);
        let (h, sigma) = reduce_to_essential(&or12).unwrap();
        assert_eq!(h, or(2));
        assert_eq!(simple_minor(&h, &sigma).unwrap(), or12);
        let (h, sigma) = reduce_to_essential(&parity(3)).unwrap();
        assert_eq!(h, parity(3));
        assert_eq!(sigma, VariableMap::identity(3));
        let (h, sigma) = reduce_to_essential(&projection(2, 1)).unwrap();
        assert_eq!(h, projection(1, 0));
        assert_eq!(sigma.map(), &[1]);
        assert!(equivalent(&h, &projection(2, 1)).unwrap());
        assert_eq!(
            reduce_to_essential(&FiniteFunction::boolean(2, |_| 0)),
            Err(Error::ConstantFunction)
        );
    }

    #[test]
    fn diagonal_examples() {
        let b = Carrier::boolean();
        assert_eq!(diagonal_tuples(&b, 3).len(), 8);
        let a3 = Carrier::range("A", 3).unwrap();
        assert_eq!(
            diagonal_tuples(&a3, 2),
            vec![vec![0, 0], vec![1, 1], vec![2, 2]]
        );
        assert_eq!(diagonal_tuples(&b, 2), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(diagonal_tuples(&a3, 1).len(), 3);
    }

    #[test]
    fn oddsupp_examples() {
        assert_eq!(oddsupp(&[0, 0, 1]), BTreeSet::from([1]));
        assert_eq!(oddsupp(&[0, 1, 2]), BTreeSet::from([0, 1, 2]));
        assert!(oddsupp(&[3, 3]).is_empty());
    }

    #[test]
    fn oddsupp_determination() {
        assert!(is_determined_by_oddsupp(&parity(3)));
        // oddsupp(0,0,1) = {1} = oddsupp(1,1,1) while maj gives 0 and 1.
        assert!(!is_determined_by_oddsupp(&majority3()));
        assert!(is_determined_by_oddsupp(&FiniteFunction::boolean(3, |_| 1)));
    }

    #[test]
    fn quasi_arity_examples() {
        assert_eq!(quasi_arity(&parity(3)), 3);
        let a3 = Carrier::range("A", 3).unwrap();
        let proj = FiniteFunction::from_fn(a3.clone(), a3.clone(), 2, |x| x[0]).unwrap();
        assert_eq!(quasi_arity(&proj), 1);
        assert_eq!(quasi_arity(&FiniteFunction::boolean(3, |_| 0)), 0);
        // Binary function constant on the diagonal of {0,1,2}^2.
        let offdiag = FiniteFunction::from_fn(a3.clone(), a3, 2, |x| usize::from(x[0] != x[1])).unwrap();
        assert_eq!(quasi_arity(&offdiag), 0);
    }

    #[test]
    fn arity_gap_examples() {
        assert_eq!(arity_gap(&parity(3)), Ok(2));
        assert_eq!(arity_gap(&or(3)), Ok(1));
        assert_eq!(arity_gap(&majority3()), Ok(2));
        assert_eq!(arity_gap(&projection(2, 0)), Err(Error::ArityGapUndefined(1)));
    }

    #[test]
    fn characterization_examples() {
        let report = gap_via_characterization(&parity(3)).unwrap();
        assert_eq!(report.gap, 2);
        assert_eq!(report.theorem_case, TheoremCase::N3Condition);
        assert!(report.is_consistent());

        let f = FiniteFunction::boolean(2, |x| x[0] & (1 - x[1]));
        let report = gap_via_characterization(&f).unwrap();
        assert_eq!((report.gap, report.qa), (2, 0));
        assert_eq!(report.theorem_case, TheoremCase::Gap2Qa);

        let report = gap_via_characterization(&or(3)).unwrap();
        assert_eq!(report.gap, 1);
        assert_eq!(report.theorem_case, TheoremCase::Gap1);
        assert!(report.is_consistent());

        let report = gap_via_characterization(&parity(4)).unwrap();
        assert_eq!((report.gap, report.theorem_case), (2, TheoremCase::Gap2Oddsupp));

        assert_eq!(
            gap_via_characterization(&projection(2, 0)),
            Err(Error::InessentialVariable(1))
        );
    }

    #[test]
    fn characterization_gap_three() {
        // On {0,1,2,3}^4 the diagonal is ruled by x1 alone, while the 24
        // injective tuples get values that make every variable essential.
        let a4 = Carrier::range("A", 4).unwrap();
        let f = FiniteFunction::from_fn(a4.clone(), a4, 4, |x| {
            if is_diagonal(x) {
                x[0]
            } else {
                (x[1] + 2 * x[2] + 3 * x[3]) % 4
            }
        })
        .unwrap();
        assert_eq!(essential_arity(&f), 4);
        let report = gap_via_characterization(&f).unwrap();
        assert_eq!(report.qa, 1);
        assert_eq!((report.gap, report.theorem_case), (3, TheoremCase::PGe3));
        assert_eq!(arity_gap(&f), Ok(3));
        assert!(report.is_consistent());
    }

    #[test]
    fn ternary_condition_examples() {
        let cond = ternary_gap2_condition(&parity(3)).unwrap().unwrap();
        assert_eq!(cond.h, projection(1, 0));
        assert_eq!(cond.selectors, [1, 1, 1]);
        let cond = ternary_gap2_condition(&majority3()).unwrap().unwrap();
        assert_eq!(cond.h, projection(1, 0));
        assert_eq!(cond.selectors, [0, 0, 0]);
        assert!(ternary_gap2_condition(&or(3)).unwrap().is_none());
        assert!(matches!(
            ternary_gap2_condition(&and2()),
            Err(Error::WrongArity { .. })
        ));
    }

    #[test]
    fn rational_tables_compare_by_value() {
        let f = FiniteFunction::pseudo_boolean(1, |x| crate::rational::int(x[0] as i64 * 5));
        let g = f
            .with_table(1, f.table().to_vec())
            .unwrap();
        assert_eq!(f, g);
        let h = FiniteFunction::pseudo_boolean(1, |x| crate::rational::int(x[0] as i64 * 7));
        assert_ne!(f, h);
    }
}

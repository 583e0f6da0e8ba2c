//! Finite posets and lattices, order-preserving functions, and the arity
//! gap classification of order-preserving functions.

use std::fmt;

use crate::error::{Error, Result};
use crate::fnalg::{
    essential_variables, is_determined_by_oddsupp, quasi_arity, reduce_to_essential, Carrier,
    Codomain, FiniteFunction,
};
use crate::rational::{format_rational, Rational};

/// A partial order stored as its full `≤` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    carrier: Carrier,
    leq: Vec<bool>,
}

impl Poset {
    /// Reflexive-transitive closure of `lower < upper` pairs. Cycles are
    /// rejected as antisymmetry violations.
    pub fn from_covers(carrier: Carrier, covers: &[(usize, usize)]) -> Result<Self> {
        let n = carrier.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::InvalidPoset(format!("cover ({lo}, {hi}) out of range")));
            }
            if lo == hi {
                return Err(Error::InvalidPoset(format!(
                    "{} < {} is not strict",
                    carrier.element(lo),
                    carrier.element(hi)
                )));
            }
            leq[lo * n + hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::InvalidPoset(format!(
                        "antisymmetry violated between {} and {}",
                        carrier.element(a),
                        carrier.element(b)
                    )));
                }
            }
        }
        Ok(Self { carrier, leq })
    }

    /// `0 < 1 < ... < k-1` in carrier order.
    pub fn chain(carrier: Carrier) -> Self {
        let covers: Vec<_> = (1..carrier.len()).map(|k| (k - 1, k)).collect();
        Self::from_covers(carrier, &covers).expect("a chain is a poset")
    }

    pub fn antichain(carrier: Carrier) -> Self {
        Self::from_covers(carrier, &[]).expect("an antichain is a poset")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Hasse diagram: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.comparable(a, b)))
    }

    fn has_upper_bound(&self, a: usize, b: usize) -> bool {
        (0..self.len()).any(|c| self.leq(a, c) && self.leq(b, c))
    }

    fn has_lower_bound(&self, a: usize, b: usize) -> bool {
        (0..self.len()).any(|c| self.leq(c, a) && self.leq(c, b))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq(a, b)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq(b, a)))
    }

    /// Componentwise order on tuples.
    pub fn leq_tuple(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| self.leq(x, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectednessReport {
    pub upwards: bool,
    pub downwards: bool,
    pub bidirected: bool,
    pub pseudo_directed: bool,
}

pub fn directedness(p: &Poset) -> DirectednessReport {
    let n = p.len();
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    let upwards = pairs().all(|(a, b)| p.has_upper_bound(a, b));
    let downwards = pairs().all(|(a, b)| p.has_lower_bound(a, b));
    let pseudo_directed = pairs().all(|(a, b)| p.has_upper_bound(a, b) || p.has_lower_bound(a, b));
    DirectednessReport {
        upwards,
        downwards,
        bidirected: upwards && downwards,
        pseudo_directed,
    }
}

/// A poset whose pairs all have a unique meet and join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    poset: Poset,
    meet: Vec<usize>,
    join: Vec<usize>,
    distributive: bool,
}

impl Lattice {
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.len();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| poset.leq(c, a) && poset.leq(c, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| poset.leq(d, c)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!(
                            "{} and {} have no greatest lower bound",
                            poset.carrier.element(a),
                            poset.carrier.element(b)
                        ))
                    })?;
                let upper: Vec<usize> = (0..n).filter(|&c| poset.leq(a, c) && poset.leq(b, c)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&d| poset.leq(c, d)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!(
                            "{} and {} have no least upper bound",
                            poset.carrier.element(a),
                            poset.carrier.element(b)
                        ))
                    })?;
                meet[a * n + b] = glb;
                join[a * n + b] = lub;
            }
        }
        let mut lattice = Self {
            poset,
            meet,
            join,
            distributive: false,
        };
        lattice.distributive = check_distributive(&lattice);
        Ok(lattice)
    }

    pub fn chain(carrier: Carrier) -> Self {
        Self::from_poset(Poset::chain(carrier)).expect("chains are lattices")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn carrier(&self) -> &Carrier {
        &self.poset.carrier
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.poset.minimum().expect("finite lattices are bounded")
    }

    pub fn top(&self) -> usize {
        self.poset.maximum().expect("finite lattices are bounded")
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    fn median_meet_form(&self, x: usize, y: usize, z: usize) -> usize {
        self.join(self.join(self.meet(x, y), self.meet(x, z)), self.meet(y, z))
    }

    fn median_join_form(&self, x: usize, y: usize, z: usize) -> usize {
        self.meet(self.meet(self.join(x, y), self.join(x, z)), self.join(y, z))
    }
}

fn check_distributive(l: &Lattice) -> bool {
    let n = l.len();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|z| l.meet(x, l.join(y, z)) == l.join(l.meet(x, y), l.meet(x, z))))
    })
}

/// Exhaustive check of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
pub fn is_distributive(l: &Lattice) -> bool {
    check_distributive(l)
}

/// `(x1 ∧ x2) ∨ (x1 ∧ x3) ∨ (x2 ∧ x3)` on a distributive lattice.
pub fn median(l: &Lattice, x1: usize, x2: usize, x3: usize) -> Result<usize> {
    if !l.distributive {
        return Err(Error::NotDistributive);
    }
    Ok(l.median_meet_form(x1, x2, x3))
}

/// Both median forms, for checking they coincide.
pub fn median_forms(l: &Lattice, x1: usize, x2: usize, x3: usize) -> (usize, usize) {
    (l.median_meet_form(x1, x2, x3), l.median_join_form(x1, x2, x3))
}

fn codomain_carrier(f: &FiniteFunction) -> Result<&Carrier> {
    match f.codomain() {
        Codomain::Finite(c) => Ok(c),
        Codomain::Rational(_) => Err(Error::CarrierMismatch(
            "an ordered codomain carrier is required".into(),
        )),
    }
}

fn check_carriers(f: &FiniteFunction, pa: &Poset, pb: &Poset) -> Result<()> {
    if f.domain() != pa.carrier() {
        return Err(Error::CarrierMismatch("domain differs from the domain poset".into()));
    }
    if codomain_carrier(f)? != pb.carrier() {
        return Err(Error::CarrierMismatch(
            "codomain differs from the codomain poset".into(),
        ));
    }
    Ok(())
}

/// `f(a) ≤ f(b)` whenever `a ≤ b` componentwise. Only single-coordinate
/// cover steps are checked, which suffices by transitivity.
pub fn is_order_preserving(f: &FiniteFunction, pa: &Poset, pb: &Poset) -> Result<bool> {
    check_carriers(f, pa, pb)?;
    Ok(order_preserving_unchecked(f, pa, pb))
}

pub(crate) fn order_preserving_unchecked(f: &FiniteFunction, pa: &Poset, pb: &Poset) -> bool {
    let space = f.space();
    let covers = pa.covers();
    let table = f.table();
    (0..f.arity()).all(|i| {
        let w = space.weight(i);
        (0..table.len()).all(|k| {
            let a = space.digit(k, i);
            covers
                .iter()
                .filter(|(lo, _)| *lo == a)
                .all(|&(_, hi)| pb.leq(table[k], table[k + (hi - a) * w]))
        })
    })
}

/// A witness of essentiality whose differing coordinates are comparable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparableWitness {
    pub index: usize,
    pub base: Vec<usize>,
    /// Strictly above `base[index]`.
    pub replacement: usize,
}

impl ComparableWitness {
    pub fn replaced(&self) -> Vec<usize> {
        let mut t = self.base.clone();
        t[self.index] = self.replacement;
        t
    }
}

/// Lexicographically first `(a, b_i)` with `a_i < b_i` and
/// `f(a) != f(a[i := b_i])`.
pub fn comparable_witness(f: &FiniteFunction, pa: &Poset, i: usize) -> Result<ComparableWitness> {
    if f.domain() != pa.carrier() {
        return Err(Error::CarrierMismatch("domain differs from the domain poset".into()));
    }
    if i >= f.arity() {
        return Err(Error::IndexOutOfRange {
            index: i,
            arity: f.arity(),
        });
    }
    if !directedness(pa).pseudo_directed {
        return Err(Error::NotPseudoDirected);
    }
    let space = f.space();
    let w = space.weight(i);
    let table = f.table();
    for k in 0..table.len() {
        let a = space.digit(k, i);
        for b in (0..pa.len()).filter(|&b| pa.lt(a, b)) {
            if table[k] != table[k + (b - a) * w] {
                return Ok(ComparableWitness {
                    index: i,
                    base: space.decode(k),
                    replacement: b,
                });
            }
        }
    }
    Err(Error::InessentialVariable(i))
}

fn require_monotone_setting(f: &FiniteFunction, pa: &Poset, pb: &Poset) -> Result<()> {
    check_carriers(f, pa, pb)?;
    if !directedness(pa).bidirected {
        return Err(Error::NotBidirected);
    }
    if !order_preserving_unchecked(f, pa, pb) {
        return Err(Error::NotOrderPreserving);
    }
    if let Some(i) = (0..f.arity()).find(|&i| !f.depends_on(i)) {
        return Err(Error::InessentialVariable(i));
    }
    if f.arity() < 2 {
        return Err(Error::ArityGapUndefined(f.arity()));
    }
    Ok(())
}

/// `c < d` and a tuple with `c` at positions `i`, `j` such that putting `d`
/// at both strictly raises the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorMonotoneWitness {
    pub c: usize,
    pub d: usize,
    pub tuple: Vec<usize>,
}

/// Lexicographically first witness (tuple first, then `d`). `None` would
/// contradict the strict-increase lemma for bidirected domains.
pub fn minor_monotone_witness(
    f: &FiniteFunction,
    pa: &Poset,
    pb: &Poset,
    i: usize,
    j: usize,
) -> Result<Option<MinorMonotoneWitness>> {
    require_monotone_setting(f, pa, pb)?;
    for idx in [i, j] {
        if idx >= f.arity() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                arity: f.arity(),
            });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let space = f.space();
    let (wi, wj) = (space.weight(i), space.weight(j));
    let table = f.table();
    for k in 0..table.len() {
        let c = space.digit(k, i);
        if space.digit(k, j) != c {
            continue;
        }
        for d in (0..pa.len()).filter(|&d| pa.lt(c, d)) {
            let raised = k + (d - c) * (wi + wj);
            if pb.lt(table[k], table[raised]) {
                return Ok(Some(MinorMonotoneWitness {
                    c,
                    d,
                    tuple: space.decode(k),
                }));
            }
        }
    }
    Ok(None)
}

/// Outcome of checking `qa f >= n - 1` and "not determined by oddsupp".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralCheck {
    pub qa: usize,
    pub qa_bound_holds: bool,
    pub oddsupp_determined: bool,
}

impl StructuralCheck {
    pub fn holds(&self) -> bool {
        self.qa_bound_holds && !self.oddsupp_determined
    }

    pub fn violation(&self) -> Option<&'static str> {
        if !self.qa_bound_holds {
            Some("quasi-arity below n - 1")
        } else if self.oddsupp_determined {
            Some("diagonal restriction determined by oddsupp")
        } else {
            None
        }
    }
}

pub fn check_monotone_structural_props(
    f: &FiniteFunction,
    pa: &Poset,
    pb: &Poset,
) -> Result<StructuralCheck> {
    require_monotone_setting(f, pa, pb)?;
    let qa = quasi_arity(f);
    Ok(StructuralCheck {
        qa,
        qa_bound_holds: qa + 1 >= f.arity(),
        oddsupp_determined: is_determined_by_oddsupp(f),
    })
}

/// `h` with `f(x1,x0,x0) = f(x0,x1,x0) = f(x0,x0,x1) = h(x0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneGap2Certificate {
    pub h: FiniteFunction,
}

impl MonotoneGap2Certificate {
    /// Re-checks every clause pointwise.
    pub fn validate(&self, f: &FiniteFunction, pa: &Poset, pb: &Poset) -> bool {
        let h = self.h.table();
        let n = pa.len();
        let nonconstant = h.windows(2).any(|w| w[0] != w[1]);
        let monotone = (0..n).all(|a| (0..n).all(|b| !pa.leq(a, b) || pb.leq(h[a], h[b])));
        let identities = f.arity() == 3
            && (0..n).all(|x1| {
                (0..n).all(|x0| {
                    f.eval(&[x1, x0, x0]) == h[x0]
                        && f.eval(&[x0, x1, x0]) == h[x0]
                        && f.eval(&[x0, x0, x1]) == h[x0]
                })
            });
        nonconstant && monotone && identities
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneGap {
    Gap1,
    Gap2(MonotoneGap2Certificate),
}

impl MonotoneGap {
    pub fn gap(&self) -> usize {
        match self {
            MonotoneGap::Gap1 => 1,
            MonotoneGap::Gap2(_) => 2,
        }
    }
}

fn diagonal_unary(f: &FiniteFunction) -> Vec<usize> {
    (0..f.domain().len()).map(|x| f.eval(&vec![x; f.arity()])).collect()
}

/// Gap 2 iff `n = 3` and the three identification identities hold with
/// `h(x) = f(x,x,x)` nonconstant.
pub fn classify_monotone_gap(f: &FiniteFunction, pa: &Poset, pb: &Poset) -> Result<MonotoneGap> {
    require_monotone_setting(f, pa, pb)?;
    if f.arity() != 3 {
        return Ok(MonotoneGap::Gap1);
    }
    let cert = MonotoneGap2Certificate {
        h: f.with_table(1, diagonal_unary(f))?,
    };
    Ok(if cert.validate(f, pa, pb) {
        MonotoneGap::Gap2(cert)
    } else {
        MonotoneGap::Gap1
    })
}

/// `h(x ∧ y) = h(x) ∧ h(y)` and `h(x ∨ y) = h(x) ∨ h(y)` everywhere.
pub fn is_lattice_homomorphism(h: &FiniteFunction, la: &Lattice, lb: &Lattice) -> Result<bool> {
    if h.arity() != 1 {
        return Err(Error::WrongArity {
            expected: 1,
            found: h.arity(),
        });
    }
    if h.domain() != la.carrier() || codomain_carrier(h)? != lb.carrier() {
        return Err(Error::CarrierMismatch("h does not map between these lattices".into()));
    }
    let t = h.table();
    let n = la.len();
    Ok((0..n).all(|x| {
        (0..n).all(|y| {
            t[la.meet(x, y)] == lb.meet(t[x], t[y]) && t[la.join(x, y)] == lb.join(t[x], t[y])
        })
    }))
}

/// `h` with `f = med(h(x1), h(x2), h(x3))`, taken over the chain
/// `range h`. Returns `None` for constant `h`.
pub fn median_form_match(
    f: &FiniteFunction,
    chain_a: &Poset,
    lattice_b: &Lattice,
) -> Result<Option<FiniteFunction>> {
    if !chain_a.is_chain() {
        return Err(Error::NotAChain);
    }
    check_carriers(f, chain_a, lattice_b.poset())?;
    if f.arity() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: f.arity(),
        });
    }
    if !order_preserving_unchecked(f, chain_a, lattice_b.poset()) {
        return Err(Error::NotOrderPreserving);
    }
    let h = diagonal_unary(f);
    if h.windows(2).all(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let space = f.space();
    let matches = space.tuples().all(|t| {
        f.eval(&t) == lattice_b.median_meet_form(h[t[0]], h[t[1]], h[t[2]])
    });
    Ok(if matches { Some(f.with_table(1, h)?) } else { None })
}

/// `(a ∨ med(x1, x2, x3)) ∧ b` as a table on `L^3`.
pub fn truncated_median(l: &Lattice, a: usize, b: usize) -> Result<FiniteFunction> {
    if !l.distributive {
        return Err(Error::NotDistributive);
    }
    if !l.poset.lt(a, b) {
        return Err(Error::BoundsNotIncreasing);
    }
    let carrier = l.carrier().clone();
    FiniteFunction::from_fn(carrier.clone(), carrier, 3, |x| {
        l.meet(l.join(a, l.median_meet_form(x[0], x[1], x[2])), b)
    })
}

/// Recovers `(a, b)` when `f` is equivalent to a truncated median on `L`.
/// The truncated median is totally symmetric, so variable order is moot.
pub fn classify_latpoly_gap2(f: &FiniteFunction, l: &Lattice) -> Result<Option<(usize, usize)>> {
    if !l.distributive {
        return Err(Error::NotDistributive);
    }
    if !is_order_preserving(f, l.poset(), l.poset())? {
        return Err(Error::NotOrderPreserving);
    }
    if essential_variables(f).len() != 3 {
        return Ok(None);
    }
    let (g, _) = reduce_to_essential(f)?;
    let a = g.eval(&[l.bottom(); 3]);
    let b = g.eval(&[l.top(); 3]);
    if !l.poset.lt(a, b) {
        return Ok(None);
    }
    Ok((truncated_median(l, a, b)? == g).then_some((a, b)))
}

/// A finite chain of rationals standing in for a real interval `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalChain {
    values: Vec<Rational>,
    poset: Poset,
}

impl RationalChain {
    /// Values are sorted and deduplicated; at least two are needed.
    pub fn new(mut values: Vec<Rational>) -> Result<Self> {
        values.sort();
        values.dedup();
        let carrier = Carrier::new("chain", values.iter().map(format_rational).collect())?;
        Ok(Self {
            values,
            poset: Poset::chain(carrier),
        })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn carrier(&self) -> &Carrier {
        self.poset.carrier()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AggregationGap {
    /// Fewer than two essential variables.
    Undefined,
    Gap1,
    /// `f = med(h, h, h)` with `h` fixing both endpoints.
    Gap2 { h: FiniteFunction },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregationReport {
    pub essential_arity: usize,
    pub gap: AggregationGap,
}

impl fmt::Display for AggregationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gap {
            AggregationGap::Undefined => write!(f, "ess = {}, gap undefined", self.essential_arity),
            AggregationGap::Gap1 => write!(f, "ess = {}, gap = 1", self.essential_arity),
            AggregationGap::Gap2 { h } => {
                let vals: Vec<String> = h.table().iter().map(|&v| h.codomain().symbol(v)).collect();
                write!(f, "ess = {}, gap = 2, h = [{}]", self.essential_arity, vals.join(" "))
            }
        }
    }
}

/// Classifies a nondecreasing `f: C^n -> C` with `f(a..a) = a` and
/// `f(b..b) = b` for the endpoints `a`, `b` of the chain `C`.
pub fn classify_aggregation(f: &FiniteFunction, chain: &RationalChain) -> Result<AggregationReport> {
    let p = chain.poset();
    check_carriers(f, p, p)?;
    if !order_preserving_unchecked(f, p, p) {
        return Err(Error::NotOrderPreserving);
    }
    let (lo, hi) = (0, p.len() - 1);
    let n = f.arity();
    if f.eval(&vec![lo; n]) != lo {
        return Err(Error::BoundaryCondition("f(a, ..., a) != a".into()));
    }
    if f.eval(&vec![hi; n]) != hi {
        return Err(Error::BoundaryCondition("f(b, ..., b) != b".into()));
    }
    let essential = essential_variables(f);
    let gap = if essential.len() < 2 {
        AggregationGap::Undefined
    } else if essential.len() != 3 {
        AggregationGap::Gap1
    } else {
        let (g, _) = reduce_to_essential(f)?;
        let lattice = Lattice::chain(chain.carrier().clone());
        match median_form_match(&g, p, &lattice)? {
            Some(h) if h.table()[lo] == lo && h.table()[hi] == hi => AggregationGap::Gap2 { h },
            _ => AggregationGap::Gap1,
        }
    };
    Ok(AggregationReport {
        essential_arity: essential.len(),
        gap,
    })
}

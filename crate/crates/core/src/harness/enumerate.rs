//! Deterministic streams of tables.
//!
//! Exhaustive mode walks a base-`|B|` counter over the table, with the first
//! tuple as the least significant digit. Sample mode draws item `k` from
//! [`SplitMix64::for_item`]. Order-preserving sampling assigns tuples in a
//! random order, each one drawing uniformly from the values consistent with
//! the tuples already assigned, and restarts on a dead end.

use crate::error::{Error, Result};
use crate::fnalg::{Carrier, Codomain, FiniteFunction, TupleSpace};
use crate::order::{order_preserving_unchecked, Poset};
use crate::rational::{parse_rational, Rational};

use super::rng::SplitMix64;
use super::sweep::{Mode, SweepConfig, SweepKind};

/// Attempts before a constrained draw gives up on an item.
const MAX_RESTARTS: usize = 1000;

/// Values taken by sampled pseudo-Boolean functions.
pub fn pseudo_values() -> Vec<Rational> {
    ["0", "1", "2", "1/2"]
        .iter()
        .map(|s| parse_rational(s).expect("literal"))
        .collect()
}

/// Entries of sampled Möbius coefficient bundles.
pub fn coefficient_grid() -> Vec<Rational> {
    ["-1", "0", "1", "2"]
        .iter()
        .map(|s| parse_rational(s).expect("literal"))
        .collect()
}

/// `base^cells`, if it fits in a `u64`.
pub fn space_size(base: usize, cells: usize) -> Option<u64> {
    u32::try_from(cells)
        .ok()
        .and_then(|e| (base as u64).checked_pow(e))
}

/// Digits of `index` in base `base`, least significant first.
pub fn counter_digits(mut index: u64, base: usize, cells: usize) -> Vec<usize> {
    let b = base as u64;
    (0..cells)
        .map(|_| {
            let d = (index % b) as usize;
            index /= b;
            d
        })
        .collect()
}

/// Order constraints between tuples of `A^n`, precomputed once per sweep.
#[derive(Clone, Debug)]
struct OrderConstraints {
    pa: Poset,
    pb: Poset,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

impl OrderConstraints {
    fn new(pa: Poset, pb: Poset, arity: usize) -> Self {
        let space = TupleSpace::new(pa.len(), arity);
        let tuples: Vec<Vec<usize>> = space.tuples().collect();
        let cells = tuples.len();
        let mut below = vec![Vec::new(); cells];
        let mut above = vec![Vec::new(); cells];
        for s in 0..cells {
            for t in 0..cells {
                if s != t && pa.leq_tuple(&tuples[s], &tuples[t]) {
                    below[t].push(s);
                    above[s].push(t);
                }
            }
        }
        Self { pa, pb, below, above }
    }

    fn draw(&self, rng: &mut SplitMix64) -> Option<Vec<usize>> {
        let cells = self.below.len();
        let mut order: Vec<usize> = (0..cells).collect();
        'attempt: for _ in 0..MAX_RESTARTS {
            rng.shuffle(&mut order);
            let mut values: Vec<Option<usize>> = vec![None; cells];
            for &t in &order {
                let allowed: Vec<usize> = (0..self.pb.len())
                    .filter(|&v| {
                        self.below[t]
                            .iter()
                            .all(|&s| values[s].is_none_or(|w| self.pb.leq(w, v)))
                            && self.above[t]
                                .iter()
                                .all(|&s| values[s].is_none_or(|w| self.pb.leq(v, w)))
                    })
                    .collect();
                if allowed.is_empty() {
                    continue 'attempt;
                }
                values[t] = Some(allowed[rng.below(allowed.len())]);
            }
            return Some(values.into_iter().map(|v| v.expect("assigned")).collect());
        }
        None
    }
}

/// Produces the `k`-th item of a sweep on demand, so workers can split the
/// index range freely.
#[derive(Clone, Debug)]
pub struct Generator {
    kind: SweepKind,
    arity: usize,
    domain: Carrier,
    codomain: Carrier,
    /// Codes per cell.
    base: usize,
    cells: usize,
    mode: Mode,
    order: Option<OrderConstraints>,
}

impl Generator {
    pub fn new(config: &SweepConfig) -> Result<Self> {
        config.validate()?;
        let n = config.arity;
        let (domain, base, cells) = match config.kind {
            SweepKind::Lovasz => (Carrier::boolean(), 4, 1usize << n),
            SweepKind::Pseudo => (Carrier::boolean(), 4, 1usize << n),
            _ => {
                let domain = config.domain_poset().carrier().clone();
                let cells = space_size(domain.len(), n)
                    .and_then(|c| usize::try_from(c).ok())
                    .ok_or_else(|| Error::BudgetExceeded("table too large".into()))?;
                (domain, config.codomain_size, cells)
            }
        };
        let codomain = config.codomain_poset().carrier().clone();
        let order = config
            .monotone_only
            .then(|| OrderConstraints::new(config.domain_poset(), config.codomain_poset(), n));
        if config.mode == Mode::Exhaustive {
            match space_size(base, cells) {
                Some(size) if size <= config.budget => {}
                _ => {
                    return Err(Error::BudgetExceeded(format!(
                        "{base}^{cells} tables exceed the budget of {}",
                        config.budget
                    )))
                }
            }
        }
        Ok(Self {
            kind: config.kind,
            arity: n,
            domain,
            codomain,
            base,
            cells,
            mode: config.mode,
            order,
        })
    }

    /// Number of indices; some may be filtered out.
    pub fn len(&self) -> u64 {
        match self.mode {
            Mode::Exhaustive => space_size(self.base, self.cells).expect("checked at construction"),
            Mode::Sample { count, .. } => count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Raw codes for item `k`: table values, or coefficient grid positions
    /// for Lovász sweeps. `None` when filtered out or a draw failed.
    pub fn codes_at(&self, k: u64) -> Option<Vec<usize>> {
        match self.mode {
            Mode::Exhaustive => {
                let codes = counter_digits(k, self.base, self.cells);
                match &self.order {
                    Some(order) => {
                        let f = self.function_from_codes(&codes);
                        order_preserving_unchecked(&f, &order.pa, &order.pb).then_some(codes)
                    }
                    None => Some(codes),
                }
            }
            Mode::Sample { seed, .. } => {
                let mut rng = SplitMix64::for_item(seed, k);
                match &self.order {
                    Some(order) => order.draw(&mut rng),
                    None => Some((0..self.cells).map(|_| rng.below(self.base)).collect()),
                }
            }
        }
    }

    /// Interprets codes as a table (for Lovász sweeps, the cube restriction
    /// of the coefficient bundle).
    pub fn function_from_codes(&self, codes: &[usize]) -> FiniteFunction {
        match self.kind {
            SweepKind::Pseudo => {
                let values = pseudo_values();
                FiniteFunction::from_rational_values(
                    self.domain.clone(),
                    self.arity,
                    codes.iter().map(|&c| values[c].clone()).collect(),
                )
                .expect("2^n values")
            }
            SweepKind::Lovasz => {
                crate::extend::restrict_to_cube(&self.bundle_from_codes(codes))
            }
            _ => FiniteFunction::new(
                self.domain.clone(),
                self.arity,
                Codomain::Finite(self.codomain.clone()),
                codes.to_vec(),
            )
            .expect("codes below |B|"),
        }
    }

    pub fn bundle_from_codes(&self, codes: &[usize]) -> crate::boolfn::MobiusCoefficients {
        let grid = coefficient_grid();
        crate::boolfn::MobiusCoefficients::new(
            self.arity,
            codes.iter().map(|&c| grid[c].clone()).collect(),
        )
        .expect("2^n coefficients")
    }

    pub fn function_at(&self, k: u64) -> Option<FiniteFunction> {
        self.codes_at(k).map(|c| self.function_from_codes(&c))
    }
}

/// The stream a sweep with this configuration would check, in index order.
pub fn enumerate_functions(config: &SweepConfig) -> Result<impl Iterator<Item = FiniteFunction>> {
    let generator = Generator::new(config)?;
    Ok((0..generator.len()).filter_map(move |k| generator.function_at(k)))
}

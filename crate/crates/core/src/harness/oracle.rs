//! First-principles oracles. These read raw tables only and share no code
//! with the classifiers they are used to check.

use crate::error::{Error, Result};
use crate::fnalg::{quasi_arity, FiniteFunction};

/// Default cap on the number of supports `oracle_qa` will enumerate.
pub const DEFAULT_SUPPORT_BUDGET: u64 = 1 << 20;

/// A table over `{0..base-1}^arity`, first coordinate most significant.
struct RawTable<'a> {
    base: usize,
    arity: usize,
    values: &'a [usize],
}

fn weight(base: usize, arity: usize, i: usize) -> usize {
    base.pow((arity - 1 - i) as u32)
}

fn coordinate(base: usize, arity: usize, index: usize, i: usize) -> usize {
    (index / weight(base, arity, i)) % base
}

fn depends_on(t: &RawTable, i: usize) -> bool {
    let w = weight(t.base, t.arity, i);
    (0..t.values.len()).any(|k| {
        let digit = (k / w) % t.base;
        digit == 0 && (1..t.base).any(|d| t.values[k + d * w] != t.values[k])
    })
}

fn essential(t: &RawTable) -> Vec<usize> {
    (0..t.arity).filter(|&i| depends_on(t, i)).collect()
}

/// `f` with `x_i` overwritten by `x_j`, kept at arity `n` (`x_i` becomes idle).
fn identified(t: &RawTable, i: usize, j: usize) -> Vec<usize> {
    let wi = weight(t.base, t.arity, i);
    (0..t.values.len())
        .map(|k| {
            let di = coordinate(t.base, t.arity, k, i);
            let dj = coordinate(t.base, t.arity, k, j);
            t.values[k - di * wi + dj * wi]
        })
        .collect()
}

fn raw(f: &FiniteFunction) -> RawTable<'_> {
    RawTable {
        base: f.domain().len(),
        arity: f.arity(),
        values: f.table(),
    }
}

/// Number of essential variables, by scanning every witness pair.
pub fn oracle_ess(f: &FiniteFunction) -> usize {
    essential(&raw(f)).len()
}

/// `ess f - max ess f_{i<-j}` over pairs of essential variables.
pub fn oracle_gap(f: &FiniteFunction) -> Result<usize> {
    let t = raw(f);
    let ess = essential(&t);
    if ess.len() < 2 {
        return Err(Error::ArityGapUndefined(ess.len()));
    }
    let mut best = 0;
    for (a, &i) in ess.iter().enumerate() {
        for &j in &ess[a + 1..] {
            let minor = identified(&t, i, j);
            let m = RawTable {
                values: &minor,
                ..t
            };
            best = best.max(essential(&m).len());
        }
    }
    Ok(ess.len() - best)
}

/// Quasi-arity and whether it came from explicit support enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QaOutcome {
    pub qa: usize,
    /// `false` when the budget forced the subset-factorization fallback.
    pub exhaustive: bool,
}

fn has_repeat(base: usize, arity: usize, index: usize) -> bool {
    if arity == 1 {
        return true;
    }
    let mut seen = 0u64;
    for i in 0..arity {
        let bit = 1u64 << coordinate(base, arity, index, i);
        if seen & bit != 0 {
            return true;
        }
        seen |= bit;
    }
    false
}

/// Minimum essential arity over every function agreeing with `f` on the
/// diagonal, enumerating all `|B|^|A^n \ A^n_=|` supports. Values of a
/// rational codomain range over the values `f` can take as stored.
pub fn oracle_qa(f: &FiniteFunction, budget: u64) -> QaOutcome {
    let t = raw(f);
    let free: Vec<usize> = (0..t.values.len())
        .filter(|&k| !has_repeat(t.base, t.arity, k))
        .collect();
    let b = f.codomain().len() as u64;
    let count = u32::try_from(free.len())
        .ok()
        .and_then(|e| b.checked_pow(e));
    match count {
        Some(c) if c <= budget => {}
        _ => {
            return QaOutcome {
                qa: quasi_arity(f),
                exhaustive: false,
            }
        }
    }
    let mut values = t.values.to_vec();
    for &k in &free {
        values[k] = 0;
    }
    let mut best = usize::MAX;
    loop {
        let s = RawTable {
            values: &values,
            ..t
        };
        best = best.min(essential(&s).len());
        if best == 0 {
            break;
        }
        // Increment the support counter; stop after wrapping around.
        let mut carried = true;
        for &k in &free {
            values[k] += 1;
            if values[k] < b as usize {
                carried = false;
                break;
            }
            values[k] = 0;
        }
        if carried {
            break;
        }
    }
    QaOutcome {
        qa: best,
        exhaustive: true,
    }
}

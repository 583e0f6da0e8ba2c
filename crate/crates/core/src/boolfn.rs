//! Set functions, Möbius and zeta transforms, algebraic normal forms and
//! the Boolean / pseudo-Boolean gap classifiers.
//!
//! Subsets of `{x1..xn}` are bitmasks with bit `i` standing for `x_{i+1}`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fnalg::{essential_variables, Carrier, FiniteFunction};
use crate::rational::{format_rational, Rational};

/// Position in the lexicographic table of the characteristic vector of `mask`.
pub fn vertex_index(n: usize, mask: usize) -> usize {
    (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| 1 << (n - 1 - i))
        .sum()
}

/// Inverse of [`vertex_index`].
pub fn vertex_mask(n: usize, index: usize) -> usize {
    (0..n)
        .filter(|i| index & (1 << (n - 1 - i)) != 0)
        .map(|i| 1 << i)
        .sum()
}

/// `v: 2^[n] -> Q`, indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("set functions need n >= 1".into()));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidTable(format!(
                "set function on {n} elements needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, mask: usize) -> &Rational {
        &self.values[mask]
    }
}

/// Möbius coefficients `m: 2^[n] -> Q`, indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusCoefficients {
    n: usize,
    coefficients: Vec<Rational>,
}

impl MobiusCoefficients {
    pub fn new(n: usize, coefficients: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("coefficient bundles need n >= 1".into()));
        }
        if coefficients.len() != 1 << n {
            return Err(Error::InvalidTable(format!(
                "coefficient bundle on {n} variables needs {} entries, got {}",
                1usize << n,
                coefficients.len()
            )));
        }
        Ok(Self { n, coefficients })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            coefficients: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, mask: usize) -> &Rational {
        &self.coefficients[mask]
    }

    pub fn set(&mut self, mask: usize, value: Rational) {
        self.coefficients[mask] = value;
    }

    /// Renames variables: coefficient of `S` moves to `{perm[k] : k in S}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for (mask, c) in self.coefficients.iter().enumerate() {
            out.coefficients[permute_mask(mask, perm)] = c.clone();
        }
        out
    }
}

pub(crate) fn permute_mask(mask: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, &p)| 1 << p)
        .sum()
}

fn require_boolean_domain(f: &FiniteFunction) -> Result<()> {
    if !f.domain().is_boolean() {
        return Err(Error::NotBoolean("domain is not {0,1}".into()));
    }
    Ok(())
}

fn rational_values(f: &FiniteFunction) -> Result<Vec<Rational>> {
    (0..f.table().len())
        .map(|k| {
            f.rational_at(k).ok_or_else(|| {
                Error::NotBoolean(format!(
                    "value {} is not a number",
                    f.codomain().symbol(f.table()[k])
                ))
            })
        })
        .collect()
}

/// `v_f(T) = f(e_T)`.
pub fn to_set_function(f: &FiniteFunction) -> Result<SetFunction> {
    require_boolean_domain(f)?;
    let n = f.arity();
    let table = rational_values(f)?;
    let values = (0..1usize << n)
        .map(|mask| table[vertex_index(n, mask)].clone())
        .collect();
    SetFunction::new(n, values)
}

/// `f_v(e_T) = v(T)` as a rational-valued table.
pub fn from_set_function(v: &SetFunction) -> FiniteFunction {
    let n = v.n;
    let values = (0..1usize << n)
        .map(|k| v.values[vertex_mask(n, k)].clone())
        .collect();
    FiniteFunction::from_rational_values(Carrier::boolean(), n, values)
        .expect("2^n values on {0,1}^n")
}

/// `m_v(S) = sum over T ⊆ S of (-1)^{|S|-|T|} v(T)`, by the subset-sum
/// butterfly.
pub fn mobius(v: &SetFunction) -> MobiusCoefficients {
    let mut a = v.values.clone();
    for bit in 0..v.n {
        for mask in 0..a.len() {
            if mask & (1 << bit) != 0 {
                let lower = a[mask ^ (1 << bit)].clone();
                a[mask] -= lower;
            }
        }
    }
    MobiusCoefficients {
        n: v.n,
        coefficients: a,
    }
}

/// `v(S) = sum over T ⊆ S of m(T)`.
pub fn zeta(m: &MobiusCoefficients) -> SetFunction {
    let mut a = m.coefficients.clone();
    for bit in 0..m.n {
        for mask in 0..a.len() {
            if mask & (1 << bit) != 0 {
                let lower = a[mask ^ (1 << bit)].clone();
                a[mask] += lower;
            }
        }
    }
    SetFunction { n: m.n, values: a }
}

/// Möbius transform of a pseudo-Boolean function.
pub fn mobius_of(f: &FiniteFunction) -> Result<MobiusCoefficients> {
    Ok(mobius(&to_set_function(f)?))
}

/// `x_i` occurs in some monomial with a nonzero coefficient.
pub fn essential_from_mobius(m: &MobiusCoefficients, i: usize) -> Result<bool> {
    if i >= m.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            arity: m.n,
        });
    }
    Ok(m
        .coefficients
        .iter()
        .enumerate()
        .any(|(mask, c)| mask & (1 << i) != 0 && !c.is_zero()))
}

/// Multilinear polynomial over GF(2): a set of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanPolynomial {
    n: usize,
    monomials: BTreeSet<usize>,
}

impl BooleanPolynomial {
    pub fn new(n: usize, monomials: impl IntoIterator<Item = usize>) -> Self {
        // XOR semantics: a monomial listed twice cancels.
        let mut set = BTreeSet::new();
        for m in monomials {
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        Self { n, monomials: set }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &BTreeSet<usize> {
        &self.monomials
    }

    /// Monomials as sorted 0-based variable lists.
    pub fn monomial_sets(&self) -> Vec<Vec<usize>> {
        self.monomials
            .iter()
            .map(|&m| (0..self.n).filter(|i| m & (1 << i) != 0).collect())
            .collect()
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::new(self.n, self.monomials.iter().map(|&m| permute_mask(m, perm)))
    }

    pub fn with_constant(&self, c: u8) -> Self {
        let mut out = self.clone();
        if c == 1 && !out.monomials.insert(0) {
            out.monomials.remove(&0);
        }
        out
    }

    pub fn eval(&self, x: &[usize]) -> usize {
        self.monomials
            .iter()
            .filter(|&&m| (0..self.n).all(|i| m & (1 << i) == 0 || x[i] == 1))
            .count()
            % 2
    }
}

impl fmt::Display for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        // Higher degree first, reads like the usual normal form.
        let mut terms: Vec<usize> = self.monomials.iter().copied().collect();
        terms.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..self.n)
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| format!("x{}", i + 1))
                        .collect()
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

fn require_boolean(f: &FiniteFunction) -> Result<()> {
    require_boolean_domain(f)?;
    match f.codomain() {
        crate::fnalg::Codomain::Finite(c) if c.is_boolean() => Ok(()),
        _ => Err(Error::NotBoolean("codomain is not {0,1}".into())),
    }
}

/// Algebraic normal form via the mod-2 Möbius transform.
pub fn anf(f: &FiniteFunction) -> Result<BooleanPolynomial> {
    require_boolean(f)?;
    let n = f.arity();
    let mut a: Vec<u8> = (0..1usize << n)
        .map(|mask| f.table()[vertex_index(n, mask)] as u8)
        .collect();
    for bit in 0..n {
        for mask in 0..a.len() {
            if mask & (1 << bit) != 0 {
                a[mask] ^= a[mask ^ (1 << bit)];
            }
        }
    }
    Ok(BooleanPolynomial {
        n,
        monomials: (0..a.len()).filter(|&m| a[m] == 1).collect(),
    })
}

/// The Boolean normal forms with arity gap 2, before adding `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BooleanTemplate {
    /// `x1 ⊕ ... ⊕ xn`
    Parity,
    /// `x1x2 ⊕ x1`
    AndXor,
    /// `x1x2 ⊕ x1x3 ⊕ x2x3`
    Majority,
    /// `x1x2 ⊕ x1x3 ⊕ x2x3 ⊕ x1 ⊕ x2`
    MajLinear,
}

impl BooleanTemplate {
    pub const ALL: [BooleanTemplate; 4] = [
        BooleanTemplate::Parity,
        BooleanTemplate::AndXor,
        BooleanTemplate::Majority,
        BooleanTemplate::MajLinear,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BooleanTemplate::Parity => "parity",
            BooleanTemplate::AndXor => "and_xor",
            BooleanTemplate::Majority => "majority",
            BooleanTemplate::MajLinear => "maj_linear",
        }
    }

    /// The template polynomial on `n` variables, when the arity fits.
    pub fn polynomial(&self, n: usize) -> Option<BooleanPolynomial> {
        let monomials: Vec<usize> = match (self, n) {
            (BooleanTemplate::Parity, n) if n >= 2 => (0..n).map(|i| 1 << i).collect(),
            (BooleanTemplate::AndXor, 2) => vec![0b11, 0b01],
            (BooleanTemplate::Majority, 3) => vec![0b011, 0b101, 0b110],
            (BooleanTemplate::MajLinear, 3) => vec![0b011, 0b101, 0b110, 0b001, 0b010],
            _ => return None,
        };
        Some(BooleanPolynomial::new(n, monomials))
    }
}

impl fmt::Display for BooleanTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `f(x1..xn) = T(x_{π(1)}, ..., x_{π(n)}) ⊕ c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanGap2Match {
    pub template: BooleanTemplate,
    pub constant: u8,
    pub permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BooleanGap {
    Gap1,
    Gap2(BooleanGap2Match),
}

impl BooleanGap {
    pub fn gap(&self) -> usize {
        match self {
            BooleanGap::Gap1 => 1,
            BooleanGap::Gap2(_) => 2,
        }
    }
}

fn require_all_essential(f: &FiniteFunction) -> Result<()> {
    let essential = essential_variables(f);
    if essential.len() < 2 {
        return Err(Error::ArityGapUndefined(essential.len()));
    }
    if let Some(i) = (0..f.arity()).find(|i| !essential.contains(i)) {
        return Err(Error::InessentialVariable(i));
    }
    Ok(())
}

/// Every template match, in (template, permutation, constant) order.
pub fn boolean_gap2_matches(f: &FiniteFunction) -> Result<Vec<BooleanGap2Match>> {
    require_boolean(f)?;
    require_all_essential(f)?;
    let n = f.arity();
    let target = anf(f)?;
    let mut out = Vec::new();
    for template in BooleanTemplate::ALL {
        let Some(poly) = template.polynomial(n) else {
            continue;
        };
        for perm in (0..n).permutations(n) {
            let renamed = poly.permuted(&perm);
            for constant in 0..2u8 {
                if renamed.with_constant(constant) == target {
                    out.push(BooleanGap2Match {
                        template,
                        constant,
                        permutation: perm.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Gap 2 iff `f` is a variable permutation of one of the four templates.
pub fn classify_boolean_gap(f: &FiniteFunction) -> Result<BooleanGap> {
    Ok(boolean_gap2_matches(f)?
        .into_iter()
        .next()
        .map_or(BooleanGap::Gap1, BooleanGap::Gap2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PseudoGap2Reason {
    /// `n = 2`, nonconstant, `f(0,0) = f(1,1)`.
    BinaryDiagonal,
    /// `f = g ∘ h` with `g(0) = values[0]`, `g(1) = values[1]`.
    TwoValuedComposition {
        h: FiniteFunction,
        values: [Rational; 2],
        boolean: BooleanGap2Match,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PseudoBooleanGap {
    Gap1,
    Gap2(PseudoGap2Reason),
}

impl PseudoBooleanGap {
    pub fn gap(&self) -> usize {
        match self {
            PseudoBooleanGap::Gap1 => 1,
            PseudoBooleanGap::Gap2(_) => 2,
        }
    }
}

pub fn classify_pseudo_boolean_gap(f: &FiniteFunction) -> Result<PseudoBooleanGap> {
    require_boolean_domain(f)?;
    require_all_essential(f)?;
    let values = rational_values(f)?;
    let n = f.arity();
    let last = values.len() - 1;
    if n == 2 && values[0] == values[last] {
        return Ok(PseudoBooleanGap::Gap2(PseudoGap2Reason::BinaryDiagonal));
    }
    let range: Vec<Rational> = values.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if range.len() != 2 {
        return Ok(PseudoBooleanGap::Gap1);
    }
    for labels in [[0usize, 1], [1, 0]] {
        let g = [range[labels[0]].clone(), range[labels[1]].clone()];
        let h = FiniteFunction::boolean(n, |x| {
            let k = x.iter().fold(0, |acc, &d| acc * 2 + d);
            usize::from(values[k] == g[1])
        });
        if let BooleanGap::Gap2(boolean) = classify_boolean_gap(&h)? {
            return Ok(PseudoBooleanGap::Gap2(PseudoGap2Reason::TwoValuedComposition {
                h,
                values: g,
                boolean,
            }));
        }
    }
    Ok(PseudoBooleanGap::Gap1)
}

/// `sum_S m(S) prod_{i in S} x_i` at a 0/1 vertex, evaluated exactly.
pub fn multilinear_at_vertex(m: &MobiusCoefficients, x: &[usize]) -> Rational {
    m.coefficients
        .iter()
        .enumerate()
        .filter(|(mask, _)| (0..m.n).all(|i| mask & (1 << i) == 0 || x[i] == 1))
        .fold(Rational::zero(), |acc, (_, c)| acc + c)
}

pub fn describe_coefficients(m: &MobiusCoefficients) -> String {
    let parts: Vec<String> = m
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(mask, c)| {
            let vars: String = (0..m.n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| format!("x{}", i + 1))
                .collect();
            if vars.is_empty() {
                format_rational(c)
            } else {
                format!("{}·{}", format_rational(c), vars)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

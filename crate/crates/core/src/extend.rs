//! Owen (multilinear) and Lovász extensions of pseudo-Boolean functions,
//! evaluated exactly at rational points, and the gap-2 template matcher for
//! Lovász extensions.
//!
//! Both extensions carry a Möbius coefficient bundle. The empty subset
//! contributes its coefficient unchanged (the empty product and the empty
//! meet are both taken to be 1), so `m(∅)` is the constant term.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::boolfn::{
    essential_from_mobius, from_set_function, mobius_of, zeta, MobiusCoefficients,
};
use crate::error::{Error, Result};
use crate::fnalg::{arity_gap, FiniteFunction};
use crate::rational::{format_rational, int, ratio, Rational};

/// A point of `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// `λ·self + (1 - λ)·other`.
    pub fn blend(&self, other: &RationalPoint, lambda: &Rational) -> RationalPoint {
        let mu = Rational::one() - lambda;
        RationalPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| lambda * x + &mu * y)
                .collect(),
        )
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A permutation `σ` naming the closed simplex `x_{σ(1)} <= ... <= x_{σ(n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexId(pub Vec<usize>);

fn check_dim(n: usize, x: &RationalPoint) -> Result<()> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dim(),
        });
    }
    Ok(())
}

fn members(n: usize, mask: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |i| mask & (1 << i) != 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwenExtension {
    coefficients: MobiusCoefficients,
}

impl OwenExtension {
    pub fn new(coefficients: MobiusCoefficients) -> Self {
        Self { coefficients }
    }

    pub fn of(f: &FiniteFunction) -> Result<Self> {
        Ok(Self::new(mobius_of(f)?))
    }

    pub fn n(&self) -> usize {
        self.coefficients.n()
    }

    pub fn coefficients(&self) -> &MobiusCoefficients {
        &self.coefficients
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LovaszExtension {
    coefficients: MobiusCoefficients,
}

impl LovaszExtension {
    pub fn new(coefficients: MobiusCoefficients) -> Self {
        Self { coefficients }
    }

    pub fn of(f: &FiniteFunction) -> Result<Self> {
        Ok(Self::new(mobius_of(f)?))
    }

    pub fn n(&self) -> usize {
        self.coefficients.n()
    }

    pub fn coefficients(&self) -> &MobiusCoefficients {
        &self.coefficients
    }

    /// Variables occurring in some nonzero coefficient.
    pub fn essential_variables(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| essential_from_mobius(&self.coefficients, i).unwrap_or(false))
            .collect()
    }

    /// Coefficients re-indexed onto the essential variables only. `None`
    /// when no variable is essential.
    pub fn reduce_to_essential(&self) -> Option<LovaszExtension> {
        let essential = self.essential_variables();
        if essential.is_empty() {
            return None;
        }
        let k = essential.len();
        let coeffs = (0..1usize << k)
            .map(|small| {
                let big: usize = members(k, small).map(|l| 1 << essential[l]).sum();
                self.coefficients.coefficient(big).clone()
            })
            .collect();
        Some(LovaszExtension::new(
            MobiusCoefficients::new(k, coeffs).expect("2^k entries"),
        ))
    }
}

/// `P(x) = sum_S m(S) prod_{i in S} x_i`.
pub fn eval_owen(p: &OwenExtension, x: &RationalPoint) -> Result<Rational> {
    let n = p.n();
    check_dim(n, x)?;
    let mut total = Rational::zero();
    for (mask, c) in p.coefficients.coefficients().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = members(n, mask).fold(c.clone(), |acc, i| acc * &x.0[i]);
        total += term;
    }
    Ok(total)
}

/// `F(x) = sum_S m(S) min_{i in S} x_i`.
pub fn eval_lovasz(f: &LovaszExtension, x: &RationalPoint) -> Result<Rational> {
    let n = f.n();
    check_dim(n, x)?;
    let mut total = Rational::zero();
    for (mask, c) in f.coefficients.coefficients().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match members(n, mask).map(|i| &x.0[i]).min() {
            Some(meet) => total += c * meet,
            None => total += c,
        }
    }
    Ok(total)
}

/// The pseudo-Boolean function both extensions restrict to on `{0,1}^n`.
pub fn restrict_to_cube(coefficients: &MobiusCoefficients) -> FiniteFunction {
    from_set_function(&zeta(coefficients))
}

/// A permutation sorting the coordinates ascending; ties keep index order.
pub fn simplex_of(x: &RationalPoint) -> SimplexId {
    let mut order: Vec<usize> = (0..x.dim()).collect();
    order.sort_by(|&i, &j| x.0[i].cmp(&x.0[j]).then(i.cmp(&j)));
    SimplexId(order)
}

pub fn essential_in_extension(f: &LovaszExtension, i: usize) -> Result<bool> {
    essential_from_mobius(&f.coefficients, i)
}

/// Arity gap of the extension, which equals that of its cube restriction.
pub fn gap_lovasz(f: &LovaszExtension) -> Result<usize> {
    arity_gap(&restrict_to_cube(&f.coefficients))
}

/// The five coefficient shapes of Lovász extensions with arity gap 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LovaszForm {
    /// `a + ((a - b)/2)·Σ_{S≠∅} (-2)^{|S|} ⋀_S x`, any `n >= 2`.
    I,
    /// `a + (b - a)x1 + (a - b)(x1 ∧ x2)`.
    II,
    /// `a + (b - a)Σ_pairs + 2(a - b)(x1 ∧ x2 ∧ x3)`.
    III,
    /// `a + (b - a)(x1 + x2) + (a - b)Σ_pairs + 2(b - a)(x1 ∧ x2 ∧ x3)`.
    IV,
    /// `a + (b - a)x1 + (c - a)x2 + (2a - b - c)(x1 ∧ x2)`.
    V,
}

impl LovaszForm {
    pub const ALL: [LovaszForm; 5] = [
        LovaszForm::I,
        LovaszForm::II,
        LovaszForm::III,
        LovaszForm::IV,
        LovaszForm::V,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LovaszForm::I => "form_i",
            LovaszForm::II => "form_ii",
            LovaszForm::III => "form_iii",
            LovaszForm::IV => "form_iv",
            LovaszForm::V => "form_v",
        }
    }

    pub fn arity_fits(&self, n: usize) -> bool {
        match self {
            LovaszForm::I => n >= 2,
            LovaszForm::II | LovaszForm::V => n == 2,
            LovaszForm::III | LovaszForm::IV => n == 3,
        }
    }

    /// Template coefficients with the identity variable order. `c` is only
    /// read by form V.
    pub fn coefficients(
        &self,
        n: usize,
        a: &Rational,
        b: &Rational,
        c: &Rational,
    ) -> Option<MobiusCoefficients> {
        if !self.arity_fits(n) {
            return None;
        }
        let d = b - a;
        let mut m = MobiusCoefficients::zeros(n);
        m.set(0, a.clone());
        match self {
            LovaszForm::I => {
                let lambda = (a - b) * ratio(1, 2);
                for mask in 1..1usize << n {
                    let weight = int(-2).pow(mask.count_ones() as i32);
                    m.set(mask, &lambda * weight);
                }
            }
            LovaszForm::II => {
                m.set(0b01, d.clone());
                m.set(0b11, -d);
            }
            LovaszForm::III => {
                for pair in [0b011, 0b101, 0b110] {
                    m.set(pair, d.clone());
                }
                m.set(0b111, -(d * int(2)));
            }
            LovaszForm::IV => {
                m.set(0b001, d.clone());
                m.set(0b010, d.clone());
                for pair in [0b011, 0b101, 0b110] {
                    m.set(pair, -d.clone());
                }
                m.set(0b111, d * int(2));
            }
            LovaszForm::V => {
                m.set(0b01, d);
                m.set(0b10, c - a);
                m.set(0b11, a * int(2) - b - c);
            }
        }
        Some(m)
    }

    /// Reads the parameters off coefficients already in template order.
    fn recover(&self, m: &MobiusCoefficients) -> (Rational, Rational, Rational) {
        let a = m.coefficient(0).clone();
        let b = match self {
            LovaszForm::III => &a + m.coefficient(0b011),
            _ => &a + m.coefficient(0b01),
        };
        let c = match self {
            LovaszForm::V => &a + m.coefficient(0b10),
            _ => Rational::zero(),
        };
        (a, b, c)
    }
}

impl fmt::Display for LovaszForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `F` equals the form instantiated at `(a, b, c)` with template variable
/// `k` renamed to `x_{permutation[k]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LovaszGap2Match {
    pub form: LovaszForm,
    pub a: Rational,
    pub b: Rational,
    /// Only present for form V.
    pub c: Option<Rational>,
    pub permutation: Vec<usize>,
}

impl LovaszGap2Match {
    /// Re-instantiates the template; equal to the matched coefficients.
    pub fn instantiate(&self, n: usize) -> Option<MobiusCoefficients> {
        let c = self.c.clone().unwrap_or_else(Rational::zero);
        self.form
            .coefficients(n, &self.a, &self.b, &c)
            .map(|m| m.permuted(&self.permutation))
    }
}

fn require_all_essential(f: &LovaszExtension) -> Result<()> {
    let essential = f.essential_variables();
    if essential.len() < 2 {
        return Err(Error::ArityGapUndefined(essential.len()));
    }
    if let Some(i) = (0..f.n()).find(|i| !essential.contains(i)) {
        return Err(Error::InessentialVariable(i));
    }
    Ok(())
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

fn match_form(form: LovaszForm, m: &MobiusCoefficients) -> Option<LovaszGap2Match> {
    let n = m.n();
    if !form.arity_fits(n) {
        return None;
    }
    for perm in (0..n).permutations(n) {
        let local = m.permuted(&invert(&perm));
        let (a, b, c) = form.recover(&local);
        let degenerate = match form {
            LovaszForm::V => a == b && a == c,
            _ => a == b,
        };
        if degenerate {
            continue;
        }
        if form.coefficients(n, &a, &b, &c).as_ref() == Some(&local) {
            return Some(LovaszGap2Match {
                form,
                a,
                b,
                c: (form == LovaszForm::V).then_some(c),
                permutation: perm,
            });
        }
    }
    None
}

/// First match among forms I..V, permutations in lexicographic order.
pub fn classify_lovasz_gap2(f: &LovaszExtension) -> Result<Option<LovaszGap2Match>> {
    require_all_essential(f)?;
    Ok(LovaszForm::ALL
        .iter()
        .find_map(|&form| match_form(form, &f.coefficients)))
}

/// Whether the cube restriction is nondecreasing in every coordinate.
pub fn cube_restriction_nondecreasing(m: &MobiusCoefficients) -> bool {
    let values = zeta(m);
    let n = m.n();
    (0..1usize << n).all(|mask| {
        (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .all(|i| values.value(mask) <= values.value(mask | (1 << i)))
    })
}

/// For a nondecreasing extension: `(a, b)` with `F` equivalent to the
/// majority-shaped form III, else `None` (gap 1, or fewer than two
/// essential variables). Monotonicity is judged on the cube restriction.
pub fn classify_nondecreasing_lovasz(f: &LovaszExtension) -> Result<Option<(Rational, Rational)>> {
    if !cube_restriction_nondecreasing(&f.coefficients) {
        return Err(Error::NotOrderPreserving);
    }
    let Some(reduced) = f.reduce_to_essential() else {
        return Ok(None);
    };
    Ok(match_form(LovaszForm::III, &reduced.coefficients).map(|m| (m.a, m.b)))
}

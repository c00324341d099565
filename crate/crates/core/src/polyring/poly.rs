use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("transposition needs two distinct variables, got {0} twice")]
    SameVariable(usize),
    #[error("substitution assigns {found} images but the polynomial has {expected} variables")]
    IncompleteAssignment { expected: usize, found: usize },
    #[error("substitution images disagree on the target variable count")]
    MixedTargets,
    #[error("division by x{i} - x{j} left a nonzero remainder")]
    InexactDivision { i: usize, j: usize },
    #[error("division by zero")]
    DivisionByZero,
}

/// Exponent vector. Ordered by total degree first, then lexicographically
/// (a larger exponent on an earlier variable ranks higher).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree data reported by [`MultiPoly::homogeneous_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Inhomogeneous,
}

/// Sparse polynomial in `num_vars` indeterminates over the rationals.
///
/// No stored coefficient is ever zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

fn accumulate(acc: &mut HashMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
    }
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(num_vars), c);
        }
        p
    }

    /// The indeterminate `x_index` (zero-based). Panics when out of range.
    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable {index} out of range");
        let mut exps = vec![0; num_vars];
        exps[index] = 1;
        Self::monomial(BigRational::one(), exps)
    }

    pub fn monomial(c: BigRational, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zero sums.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut acc = HashMap::new();
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::Dimension {
                    expected: num_vars,
                    found: exps.len(),
                });
            }
            accumulate(&mut acc, Monomial(exps), c);
        }
        Ok(Self::from_map(num_vars, acc))
    }

    fn from_map(num_vars: usize, acc: HashMap<Monomial, BigRational>) -> Self {
        MultiPoly {
            num_vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.exps(), c))
    }

    /// Returns the constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_dims(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::Dimension {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        Ok(())
    }

    fn check_var(&self, index: usize) -> Result<(), PolyError> {
        if index >= self.num_vars {
            return Err(PolyError::VarOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &BigRational::one());
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &-BigRational::one());
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dims(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(self.num_vars));
        }
        let mut acc = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut acc, ma.mul(mb), ca * cb);
            }
        }
        Ok(Self::from_map(self.num_vars, acc))
    }

    /// `self += scale * other`, assuming matching dimensions.
    fn add_assign_unchecked(&mut self, other: &MultiPoly, scale: &BigRational) {
        for (m, c) in &other.terms {
            let add = c * scale;
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v += add;
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), add);
                }
            }
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Exact coefficient of the given monomial, zero if absent.
    pub fn coefficient_of(&self, exps: &[u32]) -> Result<BigRational, PolyError> {
        if exps.len() != self.num_vars {
            return Err(PolyError::Dimension {
                expected: self.num_vars,
                found: exps.len(),
            });
        }
        Ok(self
            .terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Replaces variable `i` by `images[i]`. All images must live in one
    /// target ring; the result lives there too.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.num_vars {
            return Err(PolyError::IncompleteAssignment {
                expected: self.num_vars,
                found: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.num_vars,
            None => {
                // Zero-variable source: only a constant can appear.
                return Ok(self.clone());
            }
        };
        if images.iter().any(|p| p.num_vars != target) {
            return Err(PolyError::MixedTargets);
        }
        // Power caches per variable keep repeated substitution cheap.
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(target), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out.add_assign_unchecked(&term, &BigRational::one());
        }
        Ok(out)
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|x| x == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    /// Minimum and maximum of `sum_v weights[v] * exps[v]` over the terms,
    /// or `None` for the zero polynomial.
    pub fn weighted_degree_range(&self, weights: &[u32]) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| {
            m.exps()
                .iter()
                .zip(weights)
                .map(|(e, w)| e * w)
                .sum::<u32>()
        });
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Largest exponent of variable `index` among the terms.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exps()[index])
            .max()
            .unwrap_or(0)
    }

    pub fn apply_transposition(&self, i: usize, j: usize) -> Result<MultiPoly, PolyError> {
        self.check_var(i)?;
        self.check_var(j)?;
        if i == j {
            return Err(PolyError::SameVariable(i));
        }
        Ok(MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.swap(i, j);
                    (Monomial(e), c.clone())
                })
                .collect(),
        })
    }

    /// Exact quotient by `x_i - x_j`, computed by synthetic division in
    /// `x_i` with the remaining variables as coefficients. Fails unless the
    /// remainder vanishes identically.
    pub fn div_by_difference(&self, i: usize, j: usize) -> Result<MultiPoly, PolyError> {
        self.check_var(i)?;
        self.check_var(j)?;
        if i == j {
            return Err(PolyError::SameVariable(i));
        }
        // Coefficients of x_i^k, each a polynomial with x_i exponent zero.
        let top = self.degree_in(i) as usize;
        let mut slices: Vec<HashMap<Monomial, BigRational>> = vec![HashMap::new(); top + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut e = m.0.clone();
            e[i] = 0;
            slices[k].insert(Monomial(e), c.clone());
        }
        // Horner: q_{k-1} = g_k + x_j * q_k, remainder g_0 + x_j * q_0.
        let mut acc = HashMap::new();
        let mut carry: HashMap<Monomial, BigRational> = HashMap::new();
        for k in (0..=top).rev() {
            let mut cur = std::mem::take(&mut slices[k]);
            for (mut m, c) in carry.drain() {
                m.0[j] += 1;
                accumulate(&mut cur, m, c);
            }
            if k == 0 {
                if !cur.is_empty() {
                    return Err(PolyError::InexactDivision { i, j });
                }
                break;
            }
            for (m, c) in &cur {
                let mut e = m.0.clone();
                e[i] = (k - 1) as u32;
                accumulate(&mut acc, Monomial(e), c.clone());
            }
            carry = cur;
        }
        Ok(Self::from_map(self.num_vars, acc))
    }

    /// Drops every term whose exponent in `index` exceeds `max`.
    pub fn truncate_var(&self, index: usize, max: u32) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[index] <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets variable `index` to zero.
    pub fn kill_var(&self, index: usize) -> MultiPoly {
        self.truncate_var(index, 0)
    }

    /// Re-embeds into a ring with `new_num_vars` variables, sending old
    /// variable `v` to `mapping[v]`. Terms touching an unmapped variable
    /// with positive exponent are rejected.
    pub fn remap(&self, new_num_vars: usize, mapping: &[Option<usize>]) -> Result<MultiPoly, PolyError> {
        if mapping.len() != self.num_vars {
            return Err(PolyError::Dimension {
                expected: self.num_vars,
                found: mapping.len(),
            });
        }
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_num_vars];
            for (v, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match mapping[v] {
                    Some(t) if t < new_num_vars => e[t] += x,
                    Some(t) => {
                        return Err(PolyError::VarOutOfRange {
                            index: t,
                            num_vars: new_num_vars,
                        })
                    }
                    None => {
                        return Err(PolyError::VarOutOfRange {
                            index: v,
                            num_vars: new_num_vars,
                        })
                    }
                }
            }
            accumulate(&mut acc, Monomial(e), c.clone());
        }
        Ok(Self::from_map(new_num_vars, acc))
    }

    /// Canonical text form: terms in descending graded-lex order as
    /// `c * v1^a1*v2^a2`, joined by ` + `.
    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let coeff = super::fmt_rat(c);
                let vars: Vec<String> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| format!("{}^{}", names[v].as_ref(), e))
                    .collect();
                if vars.is_empty() {
                    coeff
                } else {
                    format!("{} * {}", coeff, vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn default_names(&self) -> Vec<String> {
        (1..=self.num_vars).map(|i| format!("x{i}")).collect()
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&self.default_names()))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.num_vars, self)
    }
}

// Operator forms panic on a dimension mismatch; use the `try_*` methods
// where the operands come from outside the crate.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{frac, rat};

    fn t(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        let p = &(&t1 + &t2) * &(&t1 - &t2);
        let expected = &t1.pow(2) - &t2.pow(2);
        assert_eq!(p, expected);
    }

    #[test]
    fn zero_absorbs() {
        let p = &t(2, 0) + &MultiPoly::one(2);
        assert!((&p * &MultiPoly::zero(2)).is_zero());
    }

    #[test]
    fn multinomial_coefficient() {
        let p = (&t(2, 0) + &t(2, 1)).pow(4);
        assert_eq!(p.coefficient_of(&[2, 2]).unwrap(), rat(6));
    }

    #[test]
    fn antisymmetric_product_has_no_balanced_term() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        let p = &(&t1 + &t2).pow(3) * &(&t1 - &t2);
        // Full expansion: t1^4 + 2 t1^3 t2 - 2 t1 t2^3 - t2^4.
        assert_eq!(p.coefficient_of(&[2, 2]).unwrap(), rat(0));
        assert_eq!(p.coefficient_of(&[3, 1]).unwrap(), rat(2));
        assert_eq!(p.coefficient_of(&[1, 3]).unwrap(), rat(-2));
    }

    #[test]
    fn absent_monomial_is_zero() {
        assert_eq!(t(2, 1).coefficient_of(&[1, 0]).unwrap(), rat(0));
    }

    #[test]
    fn dimension_errors() {
        let err = t(2, 0).try_add(&t(3, 0)).unwrap_err();
        assert_eq!(err, PolyError::Dimension { expected: 2, found: 3 });
        assert!(t(2, 0).try_mul(&t(3, 0)).is_err());
        assert!(t(2, 0).coefficient_of(&[1]).is_err());
    }

    #[test]
    fn substitution_examples() {
        // xi1^2 with xi1 -> -y2 in a two-variable target.
        let xi_sq = t(1, 0).pow(2);
        let img = -&t(2, 1);
        assert_eq!(xi_sq.substitute(&[img]).unwrap(), t(2, 1).pow(2));

        let t1 = t(2, 0);
        let sum = &t(2, 0) + &t(2, 1);
        assert_eq!(t1.substitute(&[sum.clone(), t(2, 1)]).unwrap(), sum);

        let five = MultiPoly::constant(2, rat(5));
        let out = five.substitute(&[t(3, 2), t(3, 0)]).unwrap();
        assert_eq!(out, MultiPoly::constant(3, rat(5)));

        assert_eq!(
            t1.substitute(&[t(2, 0)]).unwrap_err(),
            PolyError::IncompleteAssignment { expected: 2, found: 1 }
        );
        assert_eq!(t1.substitute(&[t(2, 0), t(3, 0)]).unwrap_err(), PolyError::MixedTargets);
    }

    #[test]
    fn homogeneity() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        assert_eq!((&t1 + &t2).pow(3).homogeneous_degree(), Homogeneity::Degree(3));
        assert_eq!((&t1 + &(&t1 * &t2)).homogeneous_degree(), Homogeneity::Inhomogeneous);
        assert_eq!(MultiPoly::zero(2).homogeneous_degree(), Homogeneity::Zero);
    }

    #[test]
    fn transpositions() {
        let (y1, y2) = (t(2, 0), t(2, 1));
        let p = &y1.pow(2) * &y2;
        let swapped = p.apply_transposition(0, 1).unwrap();
        assert_eq!(swapped, &y2.pow(2) * &y1);
        let sym = &y1 * &y2;
        assert_eq!(sym.apply_transposition(0, 1).unwrap(), sym);
        assert_eq!(swapped.apply_transposition(0, 1).unwrap(), p);
        assert!(p.apply_transposition(0, 2).is_err());
        assert!(p.apply_transposition(1, 1).is_err());
    }

    #[test]
    fn synthetic_division() {
        let (y1, y2) = (t(3, 0), t(3, 1));
        let z = t(3, 2);
        let g = &(&y1.pow(3) - &y2.pow(3)) * &(&z + &MultiPoly::constant(3, frac(1, 2)));
        let q = g.div_by_difference(0, 1).unwrap();
        assert_eq!(&q * &(&y1 - &y2), g);
        assert_eq!(
            y1.div_by_difference(0, 1).unwrap_err(),
            PolyError::InexactDivision { i: 0, j: 1 }
        );
    }

    #[test]
    fn canonical_text() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        let p = &(&t1.pow(2) - &t2.pow(2)) + &MultiPoly::constant(2, frac(3, 2));
        assert_eq!(p.to_text(&["t1", "t2"]), "1 * t1^2 + -1 * t2^2 + 3/2");
        assert_eq!(MultiPoly::zero(2).to_text(&["t1", "t2"]), "0");
    }

    #[test]
    fn remap_and_truncate() {
        let p = &t(2, 0).pow(2) + &t(2, 1);
        let q = p.remap(3, &[Some(2), Some(0)]).unwrap();
        assert_eq!(q, &t(3, 2).pow(2) + &t(3, 0));
        assert_eq!(p.truncate_var(0, 1), t(2, 1));
        assert!(p.remap(3, &[None, Some(0)]).is_err());
    }
}

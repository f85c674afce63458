//! Sparse multivariate polynomials with positive integer variable weights.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub const MAX_VARS: usize = 8;

/// Variable names, weights and coefficient field of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
    field: Field,
}

impl PolyRing {
    pub fn new(names: &[&str], weights: &[u32], field: Field) -> Arc<PolyRing> {
        assert_eq!(names.len(), weights.len());
        assert!(names.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        Arc::new(PolyRing {
            names: names.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            field,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        assert_eq!(exps.len(), self.nvars());
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        let deg = exps
            .iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as u32 * w)
            .sum();
        Monomial { deg, exps: e }
    }

    /// All monomials of weighted degree `t`, largest first in the graded lex order.
    pub fn monomials_of_degree(&self, t: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.nvars()];
        self.fill_monomials(0, t, &mut exps, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn fill_monomials(&self, var: usize, rest: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if var == self.nvars() {
            if rest == 0 {
                out.push(self.monomial(exps));
            }
            return;
        }
        let w = self.weights[var];
        for a in 0..=rest / w {
            exps[var] = a as u16;
            self.fill_monomials(var + 1, rest - a * w, exps, out);
        }
        exps[var] = 0;
    }
}

/// Exponent vector with its weighted degree. The derived order is graded lexicographic
/// with the first variable most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial {
            deg: self.deg - other.deg,
            exps,
        })
    }

    pub fn display<'a>(&'a self, ring: &'a PolyRing) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ring }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    ring: &'a PolyRing,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, name) in self.ring.names.iter().enumerate() {
            let e = self.mono.exps[i];
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A polynomial: nonzero coefficients keyed by monomial.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl MultiPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> MultiPoly {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> MultiPoly {
        MultiPoly::term(ring, ring.monomial(&vec![0; ring.nvars()]), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> MultiPoly {
        MultiPoly::constant(ring, ring.field.one())
    }

    pub fn term(ring: &Arc<PolyRing>, mono: Monomial, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// `coeff * prod var_i^exps_i`.
    pub fn monomial(ring: &Arc<PolyRing>, exps: &[u16], coeff: i64) -> MultiPoly {
        MultiPoly::term(ring, ring.monomial(exps), ring.field.from_i64(coeff))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> MultiPoly {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        MultiPoly::monomial(ring, &exps, 1)
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> MultiPoly {
        let mut p = MultiPoly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Removes and returns the largest term.
    pub fn pop_leading(&mut self) -> Option<(Monomial, Scalar)> {
        self.terms.pop_last()
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c * m * other` in place.
    pub fn add_scaled_shifted(&mut self, other: &MultiPoly, c: &Scalar, m: &Monomial) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), &(c * oc));
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    /// Exact product; fails when the operands live in different variable sets.
    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(other, c, m);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(&self.ring);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    /// Weighted degree when homogeneous (the zero polynomial has none).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.keys().next()?.deg;
        self.terms.keys().all(|m| m.deg == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Sum of the terms of weighted degree exactly `t`.
    pub fn component(&self, t: u32) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg == t)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Distinct weighted degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.deg).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Largest exponent of `var` over all terms.
    pub fn max_exp(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.exps[var]).max()
    }

    /// Keeps the terms for which `pred` holds, mapping coefficients through `f`.
    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &Scalar) -> Option<Scalar>) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            if let Some(c) = f(m, c) {
                out.add_term(*m, &c);
            }
        }
        out
    }
}

/// Exact product of two polynomials over the same variables.
pub fn poly_mul(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    a.checked_mul(b)
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("variable mismatch")
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(&-rhs).expect("variable mismatch")
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("variable mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.deg == 0 && m.exps.iter().all(|&e| e == 0);
            if abs.is_one() && !is_const {
                write!(f, "{}", m.display(&self.ring))?;
            } else if is_const {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{}", m.display(&self.ring))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz(field: Field) -> Arc<PolyRing> {
        PolyRing::new(&["x", "y", "z"], &[1, 1, 1], field)
    }

    #[test]
    fn difference_of_squares() {
        let r = xyz(Field::Rational);
        let y = MultiPoly::var(&r, 1);
        let z = MultiPoly::var(&r, 2);
        let p = &(&y + &z) * &(&y - &z);
        assert_eq!(p, &y.pow(2) - &z.pow(2));
        assert_eq!(p.to_string(), "y^2 - z^2");
    }

    #[test]
    fn x_times_x() {
        let r = xyz(Field::Rational);
        let x = MultiPoly::var(&r, 0);
        assert_eq!(poly_mul(&x, &x).unwrap(), MultiPoly::monomial(&r, &[2, 0, 0], 1));
    }

    #[test]
    fn product_mod_five() {
        let r = xyz(Field::Prime(5));
        let a = MultiPoly::monomial(&r, &[0, 1, 0], 2);
        let b = MultiPoly::monomial(&r, &[0, 1, 0], 3);
        assert_eq!(&a * &b, MultiPoly::monomial(&r, &[0, 2, 0], 1));
    }

    #[test]
    fn mismatched_variables() {
        let a = MultiPoly::var(&xyz(Field::Rational), 0);
        let other = PolyRing::new(&["y", "z"], &[1, 1], Field::Rational);
        let b = MultiPoly::var(&other, 0);
        assert!(matches!(poly_mul(&a, &b), Err(Error::VariableMismatch)));
    }

    #[test]
    fn components() {
        let r = xyz(Field::Rational);
        let p = &(&MultiPoly::monomial(&r, &[0, 2, 0], 1) + &MultiPoly::var(&r, 1)) + &MultiPoly::one(&r);
        assert_eq!(p.component(2), MultiPoly::monomial(&r, &[0, 2, 0], 1));
        assert!(MultiPoly::monomial(&r, &[0, 2, 0], 1).component(3).is_zero());
        let sum = p.degrees().into_iter().fold(MultiPoly::zero(&r), |acc, t| &acc + &p.component(t));
        assert_eq!(sum, p);
    }

    #[test]
    fn weighted_component() {
        // weights (g+1, 1, 1) with g = 2: deg x = 3
        let r = PolyRing::new(&["x", "y", "z"], &[3, 1, 1], Field::Rational);
        let p = &MultiPoly::var(&r, 0) + &MultiPoly::monomial(&r, &[0, 3, 0], 1);
        assert_eq!(p.component(3), p);
        assert_eq!(p.homogeneous_degree(), Some(3));
    }

    #[test]
    fn monomial_enumeration() {
        let r = xyz(Field::Rational);
        assert_eq!(r.monomials_of_degree(2).len(), 6);
        let w = PolyRing::new(&["x", "y", "z"], &[3, 1, 1], Field::Rational);
        // y^4.. (5 monomials) plus x*y, x*z
        assert_eq!(w.monomials_of_degree(4).len(), 7);
    }
}

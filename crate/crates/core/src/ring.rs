//! Presentations of the graded rings under study.
//!
//! * `StandardHypersurface`: `k[x,y,z]/(f)` with `f` homogeneous of degree `d >= 3` and
//!   monic in `x`; normal forms have `x`-degree `< d`.
//! * `VeroHypersurface`: `k[x,y,z]/(x^2 + y^(2g+2) + z^(2g+2))` with weights `(g+1, 1, 1)`.
//! * `VeroneseRing`: the `g`-th Veronese subring of the previous ring, regraded so that
//!   `A_n = R_(ng)`.
//!
//! Elements are kept in normal form: a polynomial whose `x`-degree is below the `x`-degree of
//! the relation. For the two hyperelliptic variants this is the pair `(f0, f1)` with value
//! `f0 + x*f1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::MonomialBasis;
use crate::poly::{MultiPoly, PolyRing};
use crate::series;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    StandardHypersurface { d: u32 },
    VeroHypersurface { g: u32 },
    VeroneseRing { g: u32 },
}

pub struct RingPresentation {
    id: u64,
    kind: RingKind,
    poly: Arc<PolyRing>,
    relation: MultiPoly,
    x_bound: u16,
    /// `x^x_bound` equals this polynomial in the ring.
    tail: MultiPoly,
    bases: Mutex<HashMap<u32, Arc<MonomialBasis>>>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingPresentation")
            .field("kind", &self.kind)
            .field("relation", &self.relation.to_string())
            .field("field", &self.field())
            .finish()
    }
}

/// A homogeneous ring element in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring_id: u64,
    grade: u32,
    poly: MultiPoly,
}

impl RingElement {
    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        RingElement {
            ring_id: self.ring_id,
            grade: self.grade,
            poly: self.poly.scale(c),
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        if self.ring_id != other.ring_id {
            return Err(Error::RingMismatch);
        }
        if self.grade != other.grade && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        let grade = if self.is_zero() { other.grade } else { self.grade };
        Ok(RingElement {
            ring_id: self.ring_id,
            grade,
            poly: &self.poly + &other.poly,
        })
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

fn xyz(field: Field, wx: u32) -> Arc<PolyRing> {
    PolyRing::new(&["x", "y", "z"], &[wx, 1, 1], field)
}

impl RingPresentation {
    fn build(kind: RingKind, poly: Arc<PolyRing>, relation: MultiPoly) -> Result<Arc<Self>> {
        let x_bound = relation
            .max_exp(0)
            .ok_or_else(|| Error::Usage("zero relation".into()))?;
        let mut x_pow = vec![0u16; poly.nvars()];
        x_pow[0] = x_bound;
        let lead_mono = poly.monomial(&x_pow);
        let lead = relation.coeff(&lead_mono);
        let inv = lead
            .inv()
            .ok_or_else(|| Error::Usage("relation is not monic in x".into()))?;
        // x^b = -(f - lead*x^b)/lead
        let rest = relation.map_terms(|m, c| (*m != lead_mono).then(|| -(c * &inv)));
        Ok(Arc::new(RingPresentation {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            kind,
            poly,
            relation,
            x_bound,
            tail: rest,
            bases: Mutex::new(HashMap::new()),
        }))
    }

    /// The Fermat cone `x^d + y^d + z^d`, smooth whenever the characteristic does not divide `d`.
    pub fn fermat(d: u32, field: Field) -> Result<Arc<Self>> {
        if d < 3 {
            return Err(Error::Usage(format!("hypersurface degree must be >= 3, got {d}")));
        }
        field.checked()?.require_not_dividing(d as u64, "the degree d")?;
        let poly = xyz(field, 1);
        let d16 = d as u16;
        let f = &(&MultiPoly::monomial(&poly, &[d16, 0, 0], 1) + &MultiPoly::monomial(&poly, &[0, d16, 0], 1))
            + &MultiPoly::monomial(&poly, &[0, 0, d16], 1);
        Self::build(RingKind::StandardHypersurface { d }, poly, f)
    }

    /// `k[x,y,z]/(f)` for a user-supplied homogeneous form. When the `x^d` coefficient vanishes
    /// a random change of coordinates `y -> y + a x, z -> z + b x` is applied (seeded, up to 8
    /// attempts).
    pub fn standard_from_relation(f: &MultiPoly, seed: u64) -> Result<Arc<Self>> {
        let ring = f.ring();
        if ring.nvars() != 3 || ring.weights() != [1, 1, 1] {
            return Err(Error::Usage("relation must live in k[x,y,z] with unit weights".into()));
        }
        let d = f
            .homogeneous_degree()
            .ok_or_else(|| Error::Inhomogeneous(f.to_string()))?;
        if d < 3 {
            return Err(Error::Usage(format!("hypersurface degree must be >= 3, got {d}")));
        }
        let field = ring.field();
        let poly = xyz(field, 1);
        let f = MultiPoly::from_terms(&poly, f.terms().map(|(m, c)| (*m, c.clone())));
        let x_d = poly.monomial(&[d as u16, 0, 0]);
        if !f.coeff(&x_d).is_zero() {
            return Self::build(RingKind::StandardHypersurface { d }, poly.clone(), f);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = MultiPoly::var(&poly, 0);
        for _ in 0..8 {
            let a = field.random(&mut rng);
            let b = field.random(&mut rng);
            let ys = &MultiPoly::var(&poly, 1) + &x.scale(&a);
            let zs = &MultiPoly::var(&poly, 2) + &x.scale(&b);
            let mut g = MultiPoly::zero(&poly);
            for (m, c) in f.terms() {
                let t = &(&x.pow(m.exp(0) as u32) * &ys.pow(m.exp(1) as u32)) * &zs.pow(m.exp(2) as u32);
                g = &g + &t.scale(c);
            }
            if !g.coeff(&x_d).is_zero() {
                return Self::build(RingKind::StandardHypersurface { d }, poly.clone(), g);
            }
        }
        Err(Error::RetriesExhausted { attempts: 8, seed })
    }

    /// `k[x,y,z]/(x^2 + y^(2g+2) + z^(2g+2))`, weights `(g+1, 1, 1)`.
    pub fn vero_hypersurface(g: u32, field: Field) -> Result<Arc<Self>> {
        if g < 2 {
            return Err(Error::Usage(format!("genus must be >= 2, got {g}")));
        }
        field.checked()?.require_not_dividing(2 * g as u64 + 2, "2g+2")?;
        let poly = xyz(field, g + 1);
        let e = (2 * g + 2) as u16;
        let f = &(&MultiPoly::monomial(&poly, &[2, 0, 0], 1) + &MultiPoly::monomial(&poly, &[0, e, 0], 1))
            + &MultiPoly::monomial(&poly, &[0, 0, e], 1);
        Self::build(RingKind::VeroHypersurface { g }, poly, f)
    }

    /// The `g`-th Veronese subring `A = R^(g)` of [`Self::vero_hypersurface`].
    pub fn veronese(g: u32, field: Field) -> Result<Arc<Self>> {
        let r = Self::vero_hypersurface(g, field)?;
        Self::build(RingKind::VeroneseRing { g }, r.poly.clone(), r.relation.clone())
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn relation(&self) -> &MultiPoly {
        &self.relation
    }

    /// True for the two variants with a quadratic relation in `x`.
    pub fn is_hyperelliptic(&self) -> bool {
        !matches!(self.kind, RingKind::StandardHypersurface { .. })
    }

    fn grade_step(&self) -> u32 {
        match self.kind {
            RingKind::VeroneseRing { g } => g,
            _ => 1,
        }
    }

    /// Weighted polynomial degree carrying ring grade `n`.
    pub fn poly_degree(&self, n: u32) -> u32 {
        n * self.grade_step()
    }

    pub fn grade_of(&self, poly_degree: u32) -> Option<u32> {
        let s = self.grade_step();
        poly_degree.is_multiple_of(s).then_some(poly_degree / s)
    }

    /// Reduces any polynomial (homogeneous or not) to normal form.
    pub fn reduce(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if **p.ring() != *self.poly {
            return Err(Error::VariableMismatch);
        }
        let mut todo = p.clone();
        let mut done = MultiPoly::zero(&self.poly);
        let mut x_pow = vec![0u16; self.poly.nvars()];
        x_pow[0] = self.x_bound;
        let x_b = self.poly.monomial(&x_pow);
        while let Some((m, c)) = todo.pop_leading() {
            if m.exp(0) < self.x_bound {
                done.add_term(m, &c);
            } else {
                let q = m.div(&x_b).expect("divisible");
                todo.add_scaled_shifted(&self.tail, &c, &q);
            }
        }
        Ok(done)
    }

    /// Canonical representative of a homogeneous polynomial.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<RingElement> {
        if p.is_zero() {
            return Ok(self.zero(0));
        }
        let d = p
            .homogeneous_degree()
            .ok_or_else(|| Error::Inhomogeneous(p.to_string()))?;
        let grade = self
            .grade_of(d)
            .ok_or_else(|| Error::Usage(format!("degree {d} is not a multiple of {}", self.grade_step())))?;
        Ok(RingElement {
            ring_id: self.id,
            grade,
            poly: self.reduce(p)?,
        })
    }

    pub fn zero(&self, grade: u32) -> RingElement {
        RingElement {
            ring_id: self.id,
            grade,
            poly: MultiPoly::zero(&self.poly),
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement {
            ring_id: self.id,
            grade: 0,
            poly: MultiPoly::one(&self.poly),
        }
    }

    /// Element `coeff * x^a y^b z^c`.
    pub fn monomial(&self, exps: [u16; 3], coeff: i64) -> Result<RingElement> {
        self.normal_form(&MultiPoly::monomial(&self.poly, &exps, coeff))
    }

    /// Wraps a normal-form coordinate vector of `ring_basis(n)`.
    pub fn from_basis_poly(&self, grade: u32, poly: MultiPoly) -> RingElement {
        RingElement {
            ring_id: self.id,
            grade,
            poly,
        }
    }

    pub fn check_owner(&self, e: &RingElement) -> Result<()> {
        if e.ring_id == self.id {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Product in the ring. The hyperelliptic variants use the pair formula
    /// `(a0 + x a1)(b0 + x b1) = a0 b0 - a1 b1 (y^(2g+2) + z^(2g+2)) + x (a0 b1 + a1 b0)`.
    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        let poly = if self.is_hyperelliptic() {
            let (a0, a1) = self.split_x(a);
            let (b0, b1) = self.split_x(b);
            let x = MultiPoly::var(&self.poly, 0);
            let p0 = &(&a0 * &b0) + &(&(&a1 * &b1) * &self.tail);
            let p1 = &(&a0 * &b1) + &(&a1 * &b0);
            &p0 + &(&x * &p1)
        } else {
            self.reduce(&(&a.poly * &b.poly))?
        };
        Ok(RingElement {
            ring_id: self.id,
            grade: a.grade + b.grade,
            poly,
        })
    }

    /// Reference product: polynomial multiplication followed by normal form.
    pub fn multiply_via_normal_form(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        Ok(RingElement {
            ring_id: self.id,
            grade: a.grade + b.grade,
            poly: self.reduce(&a.poly.checked_mul(&b.poly)?)?,
        })
    }

    pub fn pow(&self, a: &RingElement, e: u32) -> Result<RingElement> {
        let mut out = self.one();
        for _ in 0..e {
            out = self.multiply(&out, a)?;
        }
        Ok(out)
    }

    /// `(f0, f1)` with `e = f0 + x*f1`; both free of `x`. Only meaningful for the hyperelliptic
    /// variants, where normal forms have `x`-degree at most one.
    pub fn split_x(&self, e: &RingElement) -> (MultiPoly, MultiPoly) {
        let f0 = e.poly.map_terms(|m, c| (m.exp(0) == 0).then(|| c.clone()));
        let mut f1 = MultiPoly::zero(&self.poly);
        let x = self.poly.monomial(&[1, 0, 0]);
        for (m, c) in e.poly.terms() {
            if m.exp(0) == 1 {
                f1.add_term(m.div(&x).expect("x divides"), c);
            }
        }
        (f0, f1)
    }

    /// Ordered monomial basis of the graded piece of grade `n` (cached).
    pub fn ring_basis(&self, n: u32) -> Arc<MonomialBasis> {
        let mut cache = self.bases.lock().expect("basis cache poisoned");
        cache
            .entry(n)
            .or_insert_with(|| {
                let t = self.poly_degree(n);
                let monos = self
                    .poly
                    .monomials_of_degree(t)
                    .into_iter()
                    .filter(|m| m.exp(0) < self.x_bound)
                    .collect();
                MonomialBasis::new(&self.poly, t, monos)
            })
            .clone()
    }

    /// Coefficient of `t^n` in the Hilbert series, computed from the generating function.
    pub fn hilbert_coeff(&self, n: u32) -> u64 {
        let (numer, denom, idx) = match self.kind {
            RingKind::StandardHypersurface { d } => (vec![d as usize], vec![1, 1, 1], n as usize),
            RingKind::VeroHypersurface { g } => {
                (vec![2 * g as usize + 2], vec![g as usize + 1, 1, 1], n as usize)
            }
            RingKind::VeroneseRing { g } => (
                vec![2 * g as usize + 2],
                vec![g as usize + 1, 1, 1],
                (n * g) as usize,
            ),
        };
        series::rational(&numer, &denom, idx + 1)[idx] as u64
    }

    /// The a-invariant: `deg f - sum of weights` for the hypersurfaces, and its integer part
    /// after dividing by `g` for the Veronese subring.
    pub fn a_invariant(&self) -> i64 {
        match self.kind {
            RingKind::StandardHypersurface { d } => d as i64 - 3,
            RingKind::VeroHypersurface { g } => g as i64 - 1,
            RingKind::VeroneseRing { g } => (g as i64 - 1).div_euclid(g as i64),
        }
    }

    /// Uniformly random coefficients on the basis of grade `n`.
    pub fn random_element<R: Rng + ?Sized>(&self, n: u32, rng: &mut R) -> RingElement {
        let b = self.ring_basis(n);
        let field = self.field();
        let poly = MultiPoly::from_terms(&self.poly, b.monomials().iter().map(|m| (*m, field.random(rng))));
        RingElement {
            ring_id: self.id,
            grade: n,
            poly,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_normal_form() {
        let r = RingPresentation::fermat(3, Field::Rational).unwrap();
        let e = r.monomial([3, 0, 0], 1).unwrap();
        let expect = &MultiPoly::monomial(r.poly_ring(), &[0, 3, 0], -1) - &MultiPoly::monomial(r.poly_ring(), &[0, 0, 3], 1);
        assert_eq!(e.poly(), &expect);
        let yz = r.monomial([0, 1, 1], 1).unwrap();
        assert_eq!(yz.poly(), &MultiPoly::monomial(r.poly_ring(), &[0, 1, 1], 1));
    }

    #[test]
    fn relation_vanishes() {
        let r = RingPresentation::fermat(4, Field::Rational).unwrap();
        let f = r.relation().clone();
        let p = &f * &MultiPoly::monomial(r.poly_ring(), &[1, 2, 0], 3);
        assert!(r.normal_form(&p).unwrap().is_zero());
    }

    #[test]
    fn vero_x_squared() {
        let r = RingPresentation::vero_hypersurface(2, Field::Rational).unwrap();
        let e = r.monomial([2, 0, 0], 1).unwrap();
        assert_eq!(e.to_string(), "-y^6 - z^6");
    }

    #[test]
    fn vero_square_of_xy3() {
        let r = RingPresentation::veronese(2, Field::Rational).unwrap();
        let w = r.monomial([1, 3, 0], 1).unwrap();
        assert_eq!(w.grade(), 3);
        let sq = r.multiply(&w, &w).unwrap();
        assert_eq!(sq.to_string(), "-y^12 - y^6*z^6");
        assert_eq!(sq.grade(), 6);
        assert_eq!(sq, r.multiply(&r.one(), &sq).unwrap());
    }

    #[test]
    fn veronese_bases() {
        let r = RingPresentation::veronese(2, Field::Rational).unwrap();
        let b1 = r.ring_basis(1);
        let names: Vec<String> = b1.monomials().iter().map(|m| m.display(r.poly_ring()).to_string()).collect();
        assert_eq!(names, vec!["y^2", "y*z", "z^2"]);
        assert_eq!(r.ring_basis(2).len(), 7);
        for g in 2..5 {
            let r = RingPresentation::veronese(g, Field::Rational).unwrap();
            assert_eq!(r.ring_basis(1).len() as u32, g + 1);
            for n in 2..6 {
                assert_eq!(r.ring_basis(n).len() as u32, (2 * n - 1) * g + 1);
            }
        }
    }

    #[test]
    fn standard_basis_size() {
        let r = RingPresentation::fermat(3, Field::Rational).unwrap();
        assert_eq!(r.ring_basis(3).len(), 9);
        let h: Vec<u64> = (0..4).map(|n| r.hilbert_coeff(n)).collect();
        assert_eq!(h, vec![1, 3, 6, 9]);
    }

    #[test]
    fn a_invariants() {
        assert_eq!(RingPresentation::fermat(4, Field::Rational).unwrap().a_invariant(), 1);
        assert_eq!(RingPresentation::fermat(5, Field::Rational).unwrap().a_invariant() + 2, 4);
        assert_eq!(RingPresentation::vero_hypersurface(3, Field::Rational).unwrap().a_invariant(), 2);
        assert_eq!(RingPresentation::veronese(3, Field::Rational).unwrap().a_invariant(), 0);
    }

    #[test]
    fn ring_mismatch() {
        let a = RingPresentation::veronese(2, Field::Rational).unwrap();
        let b = RingPresentation::vero_hypersurface(2, Field::Rational).unwrap();
        let e = b.monomial([0, 1, 0], 1).unwrap();
        assert!(matches!(a.multiply(&e, &e), Err(Error::RingMismatch)));
    }

    #[test]
    fn bad_characteristic() {
        assert!(RingPresentation::vero_hypersurface(3, Field::Prime(3)).is_ok());
        assert!(matches!(RingPresentation::vero_hypersurface(2, Field::Prime(3)), Err(Error::Usage(_))));
        assert!(matches!(RingPresentation::fermat(5, Field::Prime(5)), Err(Error::Usage(_))));
    }

    #[test]
    fn coordinate_change_makes_relation_monic() {
        let poly = PolyRing::new(&["x", "y", "z"], &[1, 1, 1], Field::Rational);
        // y^3 + z^3 + x*y*z has no x^3 term
        let f = &(&MultiPoly::monomial(&poly, &[0, 3, 0], 1) + &MultiPoly::monomial(&poly, &[0, 0, 3], 1))
            + &MultiPoly::monomial(&poly, &[1, 1, 1], 1);
        let r = RingPresentation::standard_from_relation(&f, 7).unwrap();
        assert_eq!(r.kind(), RingKind::StandardHypersurface { d: 3 });
        assert_eq!(r.ring_basis(4).len() as u64, r.hilbert_coeff(4));
    }
}

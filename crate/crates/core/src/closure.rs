//! Integral closures of powers for the ideal families under study, bounded searches for
//! equations of integral dependence, and the membership filter for the Veronese example.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::{GradedIdeal, MixedElement, ParameterPair};
use crate::linalg::{RowSpace, Subspace};
use crate::poly::MultiPoly;
use crate::ring::{RingElement, RingKind, RingPresentation};

/// Which description of `closure(I^n)` applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureFamily {
    /// `I = m`, with `closure(m^n) = R_{>=n}`.
    MaximalIdealCone,
    /// `I = (f) + R_{>=N}`: every power is integrally closed.
    PrincipalPlusTail { n: u32 },
    /// `I = (L) + m^(r+1)`: every power is integrally closed.
    Blowup { r: u32 },
    /// The ideal `(y^g, y^(g-1) z) + A_{>=2}` of the Veronese subring `A`. Powers up to `g`
    /// are closed; beyond that the closure gains `w = x y^(g^2 - 1)`:
    /// `closure(I^n) = I^n + w I^(n-g-1)` for `n >= g+1`.
    Vero { g: u32 },
}

/// The filtration `n -> closure(I^n)` of one ideal.
pub struct ClosureFiltration {
    family: ClosureFamily,
    ideal: GradedIdeal,
    extra: Option<RingElement>,
}

impl ClosureFiltration {
    pub fn new(family: ClosureFamily, ideal: GradedIdeal) -> Result<Self> {
        let extra = match family {
            ClosureFamily::Vero { g } => {
                if ideal.ring().kind() != (RingKind::VeroneseRing { g }) {
                    return Err(Error::RingMismatch);
                }
                Some(vero_extra_generator(ideal.ring(), g)?)
            }
            _ => None,
        };
        Ok(ClosureFiltration { family, ideal, extra })
    }

    /// The ideal of the Veronese example together with its closure data.
    pub fn vero(ring: &Arc<RingPresentation>) -> Result<Self> {
        let RingKind::VeroneseRing { g } = ring.kind() else {
            return Err(Error::RingMismatch);
        };
        let ideal = vero_ideal(ring)?;
        ClosureFiltration::new(ClosureFamily::Vero { g }, ideal)
    }

    /// Drops the extra generator of the Veronese closure; used to exercise failing acceptance.
    pub fn without_extra_generator(mut self) -> Self {
        self.extra = None;
        self
    }

    pub fn family(&self) -> &ClosureFamily {
        &self.family
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.ideal
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        self.ideal.ring()
    }

    /// `closure(I^n)_t`.
    pub fn component(&self, n: u32, t: u32) -> Result<Arc<Subspace>> {
        let ring = self.ring();
        match self.family {
            ClosureFamily::MaximalIdealCone => {
                let b = ring.ring_basis(t);
                Ok(Arc::new(if t >= n { Subspace::full(&b) } else { Subspace::zero(&b) }))
            }
            ClosureFamily::PrincipalPlusTail { .. } | ClosureFamily::Blowup { .. } => self.ideal.power_component(n, t),
            ClosureFamily::Vero { g } => {
                let base = self.ideal.power_component(n, t)?;
                let Some(w) = &self.extra else { return Ok(base) };
                if n <= g || t < w.grade() {
                    return Ok(base);
                }
                let rest = self.ideal.power_component(n - g - 1, t - w.grade())?;
                let mut sub = (*base).clone();
                for row in rest.rows() {
                    let e = ring.from_basis_poly(t - w.grade(), row);
                    sub.insert(ring.multiply(w, &e)?.poly())?;
                    if sub.is_full() {
                        break;
                    }
                }
                Ok(Arc::new(sub))
            }
        }
    }
}

/// `I = (y^g, y^(g-1) z) + A_{>=2}` in the Veronese subring.
pub fn vero_ideal(ring: &Arc<RingPresentation>) -> Result<GradedIdeal> {
    let RingKind::VeroneseRing { g } = ring.kind() else {
        return Err(Error::RingMismatch);
    };
    let g16 = g as u16;
    let mut gens = vec![ring.monomial([0, g16, 0], 1)?, ring.monomial([0, g16 - 1, 1], 1)?];
    let b = ring.ring_basis(2);
    let b3 = ring.ring_basis(3);
    for (t, basis) in [(2, b), (3, b3)] {
        for m in basis.monomials() {
            gens.push(ring.from_basis_poly(t, MultiPoly::term(ring.poly_ring(), *m, ring.field().one())));
        }
    }
    GradedIdeal::new(ring, gens)
}

/// `Q = (y^g - z^(2g), y^(g-1) z)`; the first generator mixes grades 1 and 2.
pub fn vero_reduction(ring: &Arc<RingPresentation>) -> Result<ParameterPair> {
    let RingKind::VeroneseRing { g } = ring.kind() else {
        return Err(Error::RingMismatch);
    };
    let g16 = g as u16;
    Ok(ParameterPair {
        q1: MixedElement::new(vec![ring.monomial([0, g16, 0], 1)?, ring.monomial([0, 0, 2 * g16], -1)?]),
        q2: MixedElement::homogeneous(ring.monomial([0, g16 - 1, 1], 1)?),
    })
}

/// `x y^(g^2 - 1)`, of grade `g + 1`.
pub fn vero_extra_generator(ring: &Arc<RingPresentation>, g: u32) -> Result<RingElement> {
    ring.monomial([1, (g * g - 1) as u16, 0], 1)
}

/// `z^u + c_1 z^(u-1) + ... + c_u = 0` with `c_j` in `(I^(s j))_(t j)`.
#[derive(Clone, Debug)]
pub struct IntegralCertificate {
    pub u: u32,
    pub coefficients: Vec<RingElement>,
}

impl IntegralCertificate {
    /// Re-evaluates the equation by exact arithmetic.
    pub fn verify(&self, ring: &RingPresentation, z: &RingElement) -> Result<bool> {
        let mut acc = ring.pow(z, self.u)?;
        for (j, c) in self.coefficients.iter().enumerate() {
            let term = ring.multiply(c, &ring.pow(z, self.u - 1 - j as u32)?)?;
            acc = acc.add(&term)?;
        }
        Ok(acc.is_zero())
    }
}

#[derive(Clone, Debug)]
pub enum CertificateSearch {
    Found(IntegralCertificate),
    /// No equation of degree at most `depth` exists. This says nothing about larger degrees.
    NotFound { depth: u32 },
}

impl std::fmt::Display for CertificateSearch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificateSearch::Found(c) => write!(f, "certificate at u = {}", c.u),
            CertificateSearch::NotFound { depth } => write!(f, "no certificate at depth {depth}"),
        }
    }
}

/// For `u = 1..=u_max`, decides whether `-z^u` lies in `sum_j z^(u-j) (I^(s j))_(t j)` and
/// returns the first solution.
pub fn integral_dependence_certificate(z: &RingElement, ideal: &GradedIdeal, s: u32, u_max: u32) -> Result<CertificateSearch> {
    let ring = ideal.ring();
    ring.check_owner(z)?;
    let t = z.grade();
    if t < ideal.power_initial_grade(s) {
        return Err(Error::DegreeMismatch {
            expected: ideal.power_initial_grade(s),
            found: t,
        });
    }
    let field = ring.field();
    for u in 1..=u_max {
        let basis = ring.ring_basis(t * u);
        let n = basis.len();
        // spanning vectors z^(u-j) * row, tagged by (j, row) through an identity block
        let mut tags: Vec<(usize, MultiPoly)> = Vec::new();
        let mut vectors = Vec::new();
        for j in 1..=u {
            let zp = ring.pow(z, u - j)?;
            for row in ideal.power_component(s * j, t * j)?.rows() {
                let e = ring.from_basis_poly(t * j, row.clone());
                vectors.push(basis.coords(ring.multiply(&zp, &e)?.poly())?);
                tags.push((j as usize, row));
            }
        }
        let mut space = RowSpace::new(n + vectors.len(), field);
        for (k, mut v) in vectors.into_iter().enumerate() {
            v.push((n + k, field.one()));
            space.insert(&v);
        }
        let target = basis.coords(ring.pow(z, u)?.poly())?;
        let neg: Vec<_> = target.into_iter().map(|(c, x)| (c, -x)).collect();
        let (residual, _) = space.reduce(&neg);
        if residual.iter().any(|(c, _)| *c < n) {
            continue;
        }
        let mut coeffs: Vec<MultiPoly> = vec![MultiPoly::zero(ring.poly_ring()); u as usize];
        for (c, x) in residual {
            let (j, row) = &tags[c - n];
            coeffs[j - 1] = &coeffs[j - 1] + &row.scale(&-x);
        }
        let cert = IntegralCertificate {
            u,
            coefficients: coeffs
                .into_iter()
                .enumerate()
                .map(|(j, p)| ring.from_basis_poly(t * (j as u32 + 1), p))
                .collect(),
        };
        if !cert.verify(ring, z)? {
            return Err(Error::Invariant("integral dependence certificate failed to re-verify".into()));
        }
        return Ok(CertificateSearch::Found(cert));
    }
    Ok(CertificateSearch::NotFound { depth: u_max })
}

/// Outcome of [`vero_closure_filter`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterVerdict {
    Accept,
    Reject(&'static str),
    /// Passed the necessary conditions; membership is not decided by the filter.
    NotRejected,
}

/// Necessary conditions for `z = f0 + x f1` in `A_n` to lie in `closure(I^n)` in the Veronese
/// example; for `f1 = 0` membership reduces to `f0` in `I^n`.
pub fn vero_closure_filter(ideal: &GradedIdeal, z: &RingElement) -> Result<FilterVerdict> {
    let ring = ideal.ring();
    ring.check_owner(z)?;
    let RingKind::VeroneseRing { g } = ring.kind() else {
        return Err(Error::RingMismatch);
    };
    let n = z.grade();
    let (f0, f1) = ring.split_x(z);
    if f1.is_zero() {
        let inside = ideal.power_component(n, n)?.contains(&f0)?.is_some();
        return Ok(if inside {
            FilterVerdict::Accept
        } else {
            FilterVerdict::Reject("f0 is not in I^n")
        });
    }
    if n <= g {
        return Ok(FilterVerdict::Reject("x-part is nonzero and n <= g"));
    }
    let top = f1.max_exp(2).unwrap_or(0) as u32;
    if top > n - (g + 1) {
        return Ok(FilterVerdict::Reject("z-degree of the x-part exceeds n - g - 1"));
    }
    Ok(FilterVerdict::NotRejected)
}

/// The involution `x -> -x`, i.e. `(f0, f1) -> (f0, -f1)`.
pub fn sigma_conjugate(ring: &RingPresentation, z: &RingElement) -> Result<RingElement> {
    ring.check_owner(z)?;
    if !ring.is_hyperelliptic() {
        return Err(Error::RingMismatch);
    }
    let poly = z
        .poly()
        .map_terms(|m, c| Some(if m.exp(0) % 2 == 1 { -c.clone() } else { c.clone() }));
    Ok(ring.from_basis_poly(z.grade(), poly))
}

/// `v(x^e) = sum w_i e_i`, `v(p) = min` over the terms of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialValuation {
    pub weights: Vec<u64>,
}

impl MonomialValuation {
    /// `None` stands for `v(0) = infinity`.
    pub fn value(&self, p: &MultiPoly) -> Option<u64> {
        p.terms()
            .map(|(m, _)| self.weights.iter().enumerate().map(|(i, w)| w * m.exp(i) as u64).sum())
            .min()
    }
}

/// `v(x) >= s v(f)` for every valuation in the list.
pub fn valuation_membership_test(x: &MultiPoly, f: &MultiPoly, s: u64, vals: &[MonomialValuation]) -> bool {
    vals.iter().all(|v| match (v.value(x), v.value(f)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a >= s * b,
    })
}

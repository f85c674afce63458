//! Homogeneous ideals as families of graded subspaces, parameter ideals (possibly
//! inhomogeneous), lengths of graded quotients, and minimal reductions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{FilteredSpace, Subspace};
use crate::par::{self, Exec};
use crate::poly::MultiPoly;
use crate::ring::{RingElement, RingPresentation};

const PRODUCT_CHUNK: usize = 96;

/// A homogeneous ideal given by homogeneous generators. Components of the ideal and of its
/// powers are materialized on demand and cached.
pub struct GradedIdeal {
    ring: Arc<RingPresentation>,
    generators: Vec<RingElement>,
    powers: Mutex<HashMap<(u32, u32), Arc<Subspace>>>,
    exec: Exec,
}

impl std::fmt::Debug for GradedIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        f.debug_struct("GradedIdeal").field("generators", &gens).finish()
    }
}

impl GradedIdeal {
    pub fn new(ring: &Arc<RingPresentation>, generators: Vec<RingElement>) -> Result<Self> {
        for g in &generators {
            ring.check_owner(g)?;
        }
        let mut generators: Vec<RingElement> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        generators.sort_by_key(|g| g.grade());
        Ok(GradedIdeal {
            ring: ring.clone(),
            generators,
            powers: Mutex::new(HashMap::new()),
            exec: Exec::default(),
        })
    }

    /// `(f) + R_{>=n}`: `f` together with the monomial basis of grades `n .. n + k`, where `k`
    /// bounds the generating degrees of the ring.
    pub fn principal_plus_tail(ring: &Arc<RingPresentation>, f: RingElement, n: u32) -> Result<Self> {
        let mut gens = vec![f];
        for t in n..n + generation_degree(ring) {
            gens.extend(basis_elements(ring, t));
        }
        GradedIdeal::new(ring, gens)
    }

    /// The homogeneous maximal ideal `R_+`.
    pub fn maximal(ring: &Arc<RingPresentation>) -> Result<Self> {
        let gens = (1..=generation_degree(ring)).flat_map(|t| basis_elements(ring, t)).collect();
        GradedIdeal::new(ring, gens)
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn min_generator_grade(&self) -> u32 {
        self.generators.first().map(|g| g.grade()).unwrap_or(0)
    }

    pub fn max_generator_grade(&self) -> u32 {
        self.generators.last().map(|g| g.grade()).unwrap_or(0)
    }

    /// `I_t`.
    pub fn component(&self, t: u32) -> Result<Arc<Subspace>> {
        self.power_component(1, t)
    }

    /// `(I^s)_t`, computed as the span of `gen * (I^(s-1))_(t - deg gen)`.
    pub fn power_component(&self, s: u32, t: u32) -> Result<Arc<Subspace>> {
        if let Some(c) = self.powers.lock().expect("ideal cache poisoned").get(&(s, t)) {
            return Ok(c.clone());
        }
        let basis = self.ring.ring_basis(t);
        let sub = if s == 0 {
            Subspace::full(&basis)
        } else if t < s * self.min_generator_grade() || self.generators.is_empty() {
            Subspace::zero(&basis)
        } else {
            let mut jobs: Vec<(usize, RingElement)> = Vec::new();
            for (gi, g) in self.generators.iter().enumerate() {
                if g.grade() > t {
                    break;
                }
                let prev = self.power_component(s - 1, t - g.grade())?;
                for row in prev.rows() {
                    jobs.push((gi, self.ring.from_basis_poly(t - g.grade(), row)));
                }
            }
            let mut sub = Subspace::zero(&basis);
            for chunk in jobs.chunks(PRODUCT_CHUNK) {
                let products = par::try_map(self.exec, chunk, |(gi, e)| self.ring.multiply(&self.generators[*gi], e))?;
                for p in &products {
                    sub.insert(p.poly())?;
                }
                if sub.is_full() {
                    break;
                }
            }
            sub
        };
        let sub = Arc::new(sub);
        self.powers
            .lock()
            .expect("ideal cache poisoned")
            .insert((s, t), sub.clone());
        Ok(sub)
    }

    /// Lowest grade in which `I^s` could be nonzero.
    pub fn power_initial_grade(&self, s: u32) -> u32 {
        s * self.min_generator_grade()
    }
}

/// Largest grade among a minimal set of algebra generators of the ring.
pub fn generation_degree(ring: &RingPresentation) -> u32 {
    use crate::ring::RingKind::*;
    match ring.kind() {
        StandardHypersurface { .. } => 1,
        VeroHypersurface { g } => g + 1,
        VeroneseRing { .. } => 2,
    }
}

fn basis_elements(ring: &Arc<RingPresentation>, t: u32) -> Vec<RingElement> {
    let b = ring.ring_basis(t);
    let one = ring.field().one();
    b.monomials()
        .iter()
        .map(|m| ring.from_basis_poly(t, MultiPoly::term(ring.poly_ring(), *m, one.clone())))
        .collect()
}

/// A ring element that may mix several grades, stored as its homogeneous parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedElement {
    parts: Vec<RingElement>,
}

impl MixedElement {
    pub fn new(parts: Vec<RingElement>) -> Self {
        let mut parts: Vec<RingElement> = parts.into_iter().filter(|p| !p.is_zero()).collect();
        parts.sort_by_key(|p| p.grade());
        MixedElement { parts }
    }

    pub fn homogeneous(e: RingElement) -> Self {
        MixedElement::new(vec![e])
    }

    pub fn parts(&self) -> &[RingElement] {
        &self.parts
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parts.len() <= 1
    }

    pub fn lowest_grade(&self) -> u32 {
        self.parts.first().map(|p| p.grade()).unwrap_or(0)
    }

    pub fn to_poly(&self, ring: &RingPresentation) -> MultiPoly {
        self.parts
            .iter()
            .fold(MultiPoly::zero(ring.poly_ring()), |acc, p| &acc + p.poly())
    }
}

impl std::fmt::Display for MixedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        // lowest grade first, which reads as the initial form followed by the tail
        for (i, p) in self.parts.iter().enumerate() {
            let text = p.to_string();
            match (i, text.strip_prefix('-')) {
                (0, _) => write!(f, "{text}")?,
                (_, Some(rest)) => write!(f, " - {}", rest.trim_start())?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

/// A two-generated ideal `Q = (q1, q2)` intended as a minimal reduction.
#[derive(Clone, Debug)]
pub struct ParameterPair {
    pub q1: MixedElement,
    pub q2: MixedElement,
}

impl ParameterPair {
    pub fn homogeneous(q1: RingElement, q2: RingElement) -> Self {
        ParameterPair {
            q1: MixedElement::homogeneous(q1),
            q2: MixedElement::homogeneous(q2),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.q1.is_homogeneous() && self.q2.is_homogeneous()
    }

    pub fn generators(&self) -> [&MixedElement; 2] {
        [&self.q1, &self.q2]
    }

    /// Every homogeneous part of both generators lies in `ideal`.
    pub fn contained_in(&self, ideal: &GradedIdeal) -> Result<bool> {
        for q in self.generators() {
            for p in q.parts() {
                if ideal.component(p.grade())?.contains(p.poly())?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Graded pieces `0..=t_max` of the ideal of lowest-degree forms of `Q * J`, where `J` is a
/// homogeneous ideal given by its components. For homogeneous `Q` this is `Q*J` itself.
pub fn product_initial_pieces(
    ring: &Arc<RingPresentation>,
    q: &ParameterPair,
    component: &(dyn Fn(u32) -> Result<Arc<Subspace>> + Sync),
    t_max: u32,
    exec: Exec,
) -> Result<Vec<Subspace>> {
    if q.is_homogeneous() {
        let grades: Vec<u32> = (0..=t_max).collect();
        return par::try_map(exec, &grades, |&t| {
            let basis = ring.ring_basis(t);
            let mut sub = Subspace::zero(&basis);
            for gen in q.generators() {
                let Some(p) = gen.parts().first() else { continue };
                if p.grade() > t {
                    continue;
                }
                for row in component(t - p.grade())?.rows() {
                    let e = ring.from_basis_poly(t - p.grade(), row);
                    sub.insert(ring.multiply(p, &e)?.poly())?;
                    if sub.is_full() {
                        return Ok(sub);
                    }
                }
            }
            Ok(sub)
        });
    }

    let blocks = (0..=t_max).map(|t| ring.ring_basis(t)).collect();
    let mut space = FilteredSpace::new(blocks);
    let lowest = q.q1.lowest_grade().min(q.q2.lowest_grade());
    let mut jobs: Vec<(usize, RingElement)> = Vec::new();
    for t in 0..=t_max.saturating_sub(lowest) {
        for row in component(t)?.rows() {
            let e = ring.from_basis_poly(t, row);
            jobs.push((0, e.clone()));
            jobs.push((1, e));
        }
    }
    let gens = q.generators();
    // products of a homogeneous row with every part of q_i, summed
    let products = par::try_map(exec, &jobs, |(i, e)| -> Result<_> {
        let mut acc = MultiPoly::zero(ring.poly_ring());
        for p in gens[*i].parts() {
            if e.grade() + p.grade() <= t_max {
                acc = &acc + ring.multiply(p, e)?.poly();
            }
        }
        space.coords(&acc)
    })?;
    for c in &products {
        space.insert_coords(c);
    }
    Ok(space.initial_pieces())
}

/// Membership of a homogeneous element in `Q * J`, decided in the truncation
/// `R / R_{>t_max}`. The caller is responsible for `R_{>t_max}` lying inside `Q * J`.
pub fn product_contains(
    ring: &Arc<RingPresentation>,
    q: &ParameterPair,
    component: &(dyn Fn(u32) -> Result<Arc<Subspace>> + Sync),
    t_max: u32,
    z: &RingElement,
) -> Result<bool> {
    let blocks = (0..=t_max).map(|t| ring.ring_basis(t)).collect();
    let mut space = FilteredSpace::new(blocks);
    let lowest = q.q1.lowest_grade().min(q.q2.lowest_grade());
    for t in 0..=t_max.saturating_sub(lowest) {
        for row in component(t)?.rows() {
            let e = ring.from_basis_poly(t, row);
            for gen in q.generators() {
                let mut acc = MultiPoly::zero(ring.poly_ring());
                for p in gen.parts() {
                    if e.grade() + p.grade() <= t_max {
                        acc = &acc + ring.multiply(p, &e)?.poly();
                    }
                }
                space.insert(&acc)?;
            }
        }
    }
    space.contains(z.poly())
}

/// Outcome of a graded length sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthReport {
    pub total: u64,
    /// `dim N_t - dim D_t` for `t = 0..=t_max`.
    pub summands: Vec<u64>,
    pub t_max: u32,
}

/// `sum_t dim N_t - dim D_t` over `t <= t_max`, checking `D_t ⊆ N_t` and that the summand
/// vanishes on the last `window` degrees.
pub fn quotient_length(
    numer: &dyn Fn(u32) -> Result<Arc<Subspace>>,
    denom: &dyn Fn(u32) -> Result<Arc<Subspace>>,
    t_max: u32,
    window: u32,
) -> Result<LengthReport> {
    let mut summands = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let n = numer(t)?;
        let d = denom(t)?;
        if !d.is_subspace_of(&n) {
            return Err(Error::ContainmentViolation { degree: t });
        }
        summands.push((n.dim() - d.dim()) as u64);
    }
    check_window(&summands, t_max, window).map_err(|degree| Error::NotStabilized { degree, t_max })?;
    Ok(LengthReport {
        total: summands.iter().sum(),
        summands,
        t_max,
    })
}

fn check_window(summands: &[u64], t_max: u32, window: u32) -> std::result::Result<(), u32> {
    let start = (t_max + 1).saturating_sub(window);
    for t in (start..=t_max).rev() {
        if summands[t as usize] != 0 {
            return Err(t);
        }
    }
    Ok(())
}

/// `ℓ(R/Q) = sum_t dim R_t - dim in(Q)_t`; equals the multiplicity `e(Q)` for the
/// Cohen-Macaulay rings implemented here.
pub fn colength(ring: &Arc<RingPresentation>, q: &ParameterPair, t_max: u32, window: u32, exec: Exec) -> Result<u64> {
    let unit = |t: u32| Ok(Arc::new(Subspace::full(&ring.ring_basis(t))));
    let qs = product_initial_pieces(ring, q, &unit, t_max, exec)?;
    let summands: Vec<u64> = (0..=t_max)
        .map(|t| (ring.ring_basis(t).len() - qs[t as usize].dim()) as u64)
        .collect();
    check_window(&summands, t_max, window).map_err(|degree| Error::InfiniteColength { degree })?;
    Ok(summands.iter().sum())
}

/// How far length sums are carried before demanding stabilization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilization {
    /// Known top socle degree of `R/Q`: sum up to `top + window`.
    ArtinianSocle { top: u32 },
    /// `s * max_gen_grade + a(R) + window` for a quotient involving the `s`-th power.
    Generic { max_gen_grade: u32, a_invariant: i64 },
}

impl Stabilization {
    pub fn t_max(self, s: u32, window: u32) -> u32 {
        match self {
            Stabilization::ArtinianSocle { top } => top + window,
            Stabilization::Generic { max_gen_grade, a_invariant } => {
                (s as i64 * max_gen_grade as i64 + a_invariant.max(0)) as u32 + window
            }
        }
    }
}

/// Checks `I^(s+1) = Q I^s` degree by degree (together with `Q ⊆ I`).
pub fn is_reduction_certificate(
    ideal: &GradedIdeal,
    q: &ParameterPair,
    s: u32,
    policy: Stabilization,
    window: u32,
) -> Result<bool> {
    if !q.contained_in(ideal)? {
        return Ok(false);
    }
    let ring = ideal.ring();
    let t_max = policy.t_max(s + 1, window);
    let power = |t: u32| ideal.power_component(s, t);
    let qis = product_initial_pieces(ring, q, &power, t_max, ideal.exec)?;
    let qis: Vec<Arc<Subspace>> = qis.into_iter().map(Arc::new).collect();
    match quotient_length(&|t| ideal.power_component(s + 1, t), &|t| Ok(qis[t as usize].clone()), t_max, window) {
        Ok(l) => Ok(l.total == 0),
        Err(Error::NotStabilized { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Settings for [`sample_minimal_reduction`].
#[derive(Clone, Copy, Debug)]
pub struct ReductionSearch {
    pub retries: u32,
    /// Largest `s` tried in `I^(s+1) = Q I^s`.
    pub s_max: u32,
    pub window: u32,
    pub policy: Stabilization,
}

/// A homogeneous minimal reduction drawn at random: `q1` a random element of the lowest
/// nonzero component of `I`, `q2` a random element of the first component not already
/// filled by multiples of `q1`. Accepted once `ℓ(R/Q)` is finite and `I^(s+1) = Q I^s` holds
/// for some `s <= s_max`; returns that pair and the smallest such `s`.
pub fn sample_minimal_reduction(ideal: &GradedIdeal, seed: u64, search: ReductionSearch) -> Result<(ParameterPair, u32)> {
    let ring = ideal.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = ring.field();
    let low = ideal.min_generator_grade();
    let hi = low + search.s_max.max(1) * ideal.max_generator_grade().max(1) + 8;
    for _ in 0..search.retries {
        let random_in = |t: u32, rng: &mut ChaCha8Rng| -> Result<RingElement> {
            let comp = ideal.component(t)?;
            let poly = comp
                .rows()
                .iter()
                .fold(MultiPoly::zero(ring.poly_ring()), |acc, r| &acc + &r.scale(&field.random(rng)));
            Ok(ring.from_basis_poly(t, poly))
        };
        let q1 = random_in(low, &mut rng)?;
        if q1.is_zero() {
            continue;
        }
        let mut second = None;
        for t in low..=hi {
            let comp = ideal.component(t)?;
            let multiples = Subspace::span(
                &ring.ring_basis(t),
                ring.ring_basis(t - low)
                    .monomials()
                    .iter()
                    .map(|m| {
                        let e = ring.from_basis_poly(t - low, MultiPoly::term(ring.poly_ring(), *m, field.one()));
                        ring.multiply(&q1, &e).map(|p| p.poly().clone())
                    })
                    .collect::<Result<Vec<_>>>()?
                    .iter(),
            )?;
            if !comp.is_subspace_of(&multiples) {
                second = Some(t);
                break;
            }
        }
        let Some(t2) = second else { continue };
        let q2 = random_in(t2, &mut rng)?;
        let q = ParameterPair::homogeneous(q1, q2);
        let top = low + t2 + ring.a_invariant().max(0) as u32;
        if colength(ring, &q, top + search.window, search.window, ideal.exec).is_err() {
            continue;
        }
        for s in 1..=search.s_max {
            if is_reduction_certificate(ideal, &q, s, search.policy, search.window)? {
                return Ok((q, s));
            }
        }
    }
    Err(Error::RetriesExhausted {
        attempts: search.retries,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::series;

    fn vero_setup(g: u32, field: Field) -> (Arc<RingPresentation>, GradedIdeal, ParameterPair) {
        let r = RingPresentation::veronese(g, field).unwrap();
        let g16 = g as u16;
        let i = GradedIdeal::principal_plus_tail(&r, r.monomial([0, g16, 0], 1).unwrap(), 2).unwrap();
        let mut gens = i.generators().to_vec();
        gens.push(r.monomial([0, g16 - 1, 1], 1).unwrap());
        let i = GradedIdeal::new(&r, gens).unwrap();
        let q1 = MixedElement::new(vec![r.monomial([0, g16, 0], 1).unwrap(), r.monomial([0, 0, 2 * g16], -1).unwrap()]);
        let q2 = MixedElement::homogeneous(r.monomial([0, g16 - 1, 1], 1).unwrap());
        (r, i, ParameterPair { q1, q2 })
    }

    #[test]
    fn maximal_ideal_components() {
        let r = RingPresentation::fermat(4, Field::Rational).unwrap();
        let m = GradedIdeal::maximal(&r).unwrap();
        assert_eq!(m.component(0).unwrap().dim(), 0);
        for t in 1..6 {
            assert_eq!(m.component(t).unwrap().dim() as u64, r.hilbert_coeff(t));
            assert!(m.power_component(2, t + 1).unwrap().is_full());
        }
    }

    #[test]
    fn vero_components() {
        let (_, i, _) = vero_setup(2, Field::Rational);
        assert_eq!(i.component(1).unwrap().dim(), 2);
        assert_eq!(i.component(2).unwrap().dim(), 7);
        assert!(i.component(2).unwrap().is_full());
        // (I^2)_2 = span{y^4, y^3 z, y^2 z^2}
        assert_eq!(i.power_component(2, 2).unwrap().dim(), 3);
        assert_eq!(i.power_component(2, 2).unwrap().dim(), 3);
    }

    #[test]
    fn vero_colengths() {
        for (g, expect) in [(2, 6), (3, 10)] {
            let (r, _, q) = vero_setup(g, Field::Rational);
            assert_eq!(colength(&r, &q, 12, 4, Exec::Sequential).unwrap(), expect);
        }
    }

    #[test]
    fn vero_reduction_number_one() {
        let (r, i, q) = vero_setup(2, Field::Rational);
        let pol = Stabilization::Generic {
            max_gen_grade: 2,
            a_invariant: r.a_invariant(),
        };
        assert!(is_reduction_certificate(&i, &q, 1, pol, 4).unwrap());
    }

    #[test]
    fn cubic_cone_reduction_numbers() {
        let r = RingPresentation::fermat(3, Field::Rational).unwrap();
        let m = GradedIdeal::maximal(&r).unwrap();
        let pol = Stabilization::Generic {
            max_gen_grade: 1,
            a_invariant: 0,
        };
        let search = ReductionSearch {
            retries: 8,
            s_max: 4,
            window: 4,
            policy: pol,
        };
        let (q, s) = sample_minimal_reduction(&m, 11, search).unwrap();
        assert_eq!(s, 2);
        assert!(!is_reduction_certificate(&m, &q, 1, pol, 4).unwrap());
        assert!(is_reduction_certificate(&m, &q, 2, pol, 4).unwrap());
    }

    #[test]
    fn blowup_lengths_match_series() {
        // d = 4, r = 1: I = (L) + m^2, Q = (L, L_2)
        let r = RingPresentation::fermat(4, Field::Rational).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = r.random_element(1, &mut rng);
        let i = GradedIdeal::principal_plus_tail(&r, l, 2).unwrap();
        let pol = Stabilization::ArtinianSocle { top: 4 };
        let search = ReductionSearch {
            retries: 8,
            s_max: 4,
            window: 4,
            policy: pol,
        };
        let (q, _) = sample_minimal_reduction(&i, 5, search).unwrap();
        assert_eq!(colength(&r, &q, 8, 4, Exec::Sequential).unwrap(), 8);
        let hs = series::rational(&[4, 2], &[1, 1], 12);
        for s in 2..4u32 {
            let prev = |t: u32| i.power_component(s - 1, t);
            let qi: Vec<Arc<Subspace>> = product_initial_pieces(&r, &q, &prev, 8, Exec::Parallel)
                .unwrap()
                .into_iter()
                .map(Arc::new)
                .collect();
            let l = quotient_length(&|t| i.power_component(s, t), &|t| Ok(qi[t as usize].clone()), 8, 4).unwrap();
            let tail: i64 = hs[(2 * s) as usize..].iter().sum();
            assert_eq!(l.total as i64, tail, "s = {s}");
        }
    }

    #[test]
    fn containment_violation_reported() {
        let r = RingPresentation::fermat(3, Field::Rational).unwrap();
        let m = GradedIdeal::maximal(&r).unwrap();
        let err = quotient_length(&|t| m.power_component(2, t), &|t| m.power_component(1, t), 5, 2).unwrap_err();
        assert!(matches!(err, Error::ContainmentViolation { degree: 1 }));
    }

    #[test]
    fn non_stabilized_sum_is_an_error() {
        let r = RingPresentation::fermat(3, Field::Rational).unwrap();
        let m = GradedIdeal::maximal(&r).unwrap();
        let zero = |t: u32| Ok(Arc::new(Subspace::zero(&r.ring_basis(t))));
        let err = quotient_length(&|t| m.component(t), &zero, 5, 2).unwrap_err();
        assert!(matches!(err, Error::NotStabilized { degree: 5, .. }));
    }

    #[test]
    fn non_primary_pair_has_infinite_colength() {
        let r = RingPresentation::veronese(2, Field::Rational).unwrap();
        let q = ParameterPair::homogeneous(r.monomial([0, 2, 0], 1).unwrap(), r.monomial([0, 1, 1], 1).unwrap());
        assert!(matches!(colength(&r, &q, 10, 3, Exec::Sequential), Err(Error::InfiniteColength { .. })));
    }
}

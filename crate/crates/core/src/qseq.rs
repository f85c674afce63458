//! The sequence `q(nI)` and the reduction numbers `nr`, `br`, rebuilt from the lengths
//! `L(n) = ℓ(closure(I^(n+1)) / Q closure(I^n))`, plus end-to-end runs for each family.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closure::{
    integral_dependence_certificate, vero_extra_generator, vero_reduction, CertificateSearch, ClosureFamily,
    ClosureFiltration,
};
use crate::curve::{self, binom, upper_bracket, Blowdown, CurveModel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::{
    colength, is_reduction_certificate, product_initial_pieces, quotient_length, sample_minimal_reduction, GradedIdeal,
    ParameterPair, ReductionSearch, Stabilization,
};
use crate::linalg::Subspace;
use crate::par::{self, Exec};
use crate::ring::RingPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSequenceReport {
    pub p_g: u64,
    /// `L(1), ..., L(n_max)`.
    pub lengths: Vec<u64>,
    /// `q(0 I), ..., q(n_max I)`.
    pub q: Vec<u64>,
    pub nr: u32,
    pub br: u32,
    pub q_inf: u64,
}

impl QSequenceReport {
    pub fn n_max(&self) -> u32 {
        self.lengths.len() as u32
    }

    /// `L(n)` for `n >= 1`, zero past the computed range.
    pub fn length(&self, n: u32) -> u64 {
        assert!(n >= 1, "L is defined for n >= 1");
        self.lengths.get(n as usize - 1).copied().unwrap_or(0)
    }

    pub fn invariant_checks(&self) -> Vec<Check> {
        let n_max = self.n_max() as usize;
        let q: Vec<i64> = self.q.iter().map(|&v| v as i64).collect();
        let second_difference = (1..n_max).all(|n| q[n + 1] + q[n - 1] - 2 * q[n] == self.lengths[n - 1] as i64);
        vec![
            Check::new("q(0) = p_g", self.q[0] == self.p_g),
            Check::new("q nonincreasing", self.q.windows(2).all(|w| w[0] >= w[1])),
            Check::new("q(n) >= q_inf", self.q.iter().all(|&v| v >= self.q_inf)),
            Check::new("second difference of q equals L", second_difference),
            Check::new("nr <= br", self.nr <= self.br),
            Check::new("br <= p_g + 1", self.br as u64 <= self.p_g + 1),
            Check::new("p_g >= binom(nr, 2)", self.p_g >= binom(self.nr as i64, 2)),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

/// Rebuilds `q` from `q(0) = p_g` and `q(n) = q(n-1) - D(n-1)`, `D(n) = sum_{m > n} L(m)`.
/// `lengths[i]` is `L(i + 1)`; the last entry must be zero and is taken as the start of the
/// zero tail.
pub fn q_sequence_from_lengths(p_g: u64, lengths: &[u64]) -> Result<QSequenceReport> {
    let n_max = lengths.len();
    if n_max == 0 || lengths[n_max - 1] != 0 {
        return Err(Error::Inconsistent(format!("L is not zero at n_max = {n_max}")));
    }
    let l = |n: usize| lengths[n - 1];
    // tail[n] = D(n) for n = 0..n_max
    let mut tail = vec![0u64; n_max + 1];
    for n in (0..n_max).rev() {
        tail[n] = tail[n + 1] + l(n + 1);
    }
    let mut q = vec![p_g];
    for n in 1..=n_max {
        let prev = q[n - 1];
        let next = prev
            .checked_sub(tail[n - 1])
            .ok_or_else(|| Error::Inconsistent(format!("q({n} I) would be negative")))?;
        q.push(next);
    }
    let nr = (1..=n_max).find(|&n| l(n) == 0).expect("L(n_max) = 0") as u32;
    let br = (1..=n_max).find(|&n| tail[n - 1] == 0).unwrap_or(n_max + 1) as u32;
    Ok(QSequenceReport {
        p_g,
        lengths: lengths.to_vec(),
        q_inf: q[n_max],
        q,
        nr,
        br,
    })
}

/// The ideal families with an end-to-end pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `I = m` on the cone over the Fermat curve of degree `d`.
    Hypersurface { d: u32 },
    /// `I = (L) + m^(r+1)` on the same cone, `L` a random linear form.
    Blowup { d: u32, r: u32 },
    /// The ideal `(y^g, y^(g-1) z) + A_{>=2}` of the Veronese subring `A`.
    Vero { g: u32 },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Hypersurface { .. } => "hypersurface",
            FamilySpec::Blowup { .. } => "blowup",
            FamilySpec::Vero { .. } => "veronese",
        }
    }

    pub fn params(&self) -> String {
        match self {
            FamilySpec::Hypersurface { d } => format!("d={d}"),
            FamilySpec::Blowup { d, r } => format!("d={d};r={r}"),
            FamilySpec::Vero { g } => format!("g={g}"),
        }
    }

    pub fn default_n_max(&self) -> u32 {
        match self {
            FamilySpec::Hypersurface { d } | FamilySpec::Blowup { d, .. } => d + 1,
            FamilySpec::Vero { g } => g + 2,
        }
    }

    fn validate(&self, field: Field) -> Result<()> {
        match *self {
            FamilySpec::Hypersurface { d } | FamilySpec::Blowup { d, .. } => {
                if d < 3 {
                    return Err(Error::Usage("d must be at least 3".into()));
                }
                field.require_not_dividing(d as u64, "d")?;
                if let FamilySpec::Blowup { r, .. } = *self {
                    if r < 1 {
                        return Err(Error::Usage("r must be at least 1".into()));
                    }
                }
            }
            FamilySpec::Vero { g } => {
                if g < 2 {
                    return Err(Error::Usage("g must be at least 2".into()));
                }
                field.require_not_dividing(2 * g as u64 + 2, "2g+2")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.params())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub field: Field,
    pub n_max: Option<u32>,
    pub seed: u64,
    /// Consecutive zero summands demanded at the top of every length sum.
    pub window: u32,
    pub u_max: u32,
    pub s_max: u32,
    pub retries: u32,
    pub exec: Exec,
    /// Use `I^n` in place of the true closure in the Veronese example.
    pub drop_closure_extra: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            field: Field::default(),
            n_max: None,
            seed: 0,
            window: 4,
            u_max: 6,
            s_max: 8,
            retries: 8,
            exec: Exec::default(),
            drop_closure_extra: false,
        }
    }
}

/// Extra data of the Veronese example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VeroData {
    /// Degree of the equation of integral dependence found for `x y^(g^2-1)` over `I^(g+1)`.
    pub certificate_u: Option<u32>,
    pub certificate: String,
    /// `x y^(g^2-1)` is not in `in(Q closure(I^g))`.
    pub extra_outside_q_closure: bool,
    pub ideal_squared_is_q_times_ideal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRun {
    pub family: FamilySpec,
    pub field: Field,
    pub seed: u64,
    pub reduction: String,
    /// Smallest `s` with `I^(s+1) = Q I^s`.
    pub reduction_exponent: u32,
    /// `ℓ(R/Q)`.
    pub colength_q: u64,
    /// `ℓ(R/I)`.
    pub colength_i: u64,
    pub report: QSequenceReport,
    pub pg_blowdown: Option<Blowdown>,
    pub vero: Option<VeroData>,
    pub checks: Vec<Check>,
}

impl FamilyRun {
    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Setup {
    closure: ClosureFiltration,
    q: ParameterPair,
    reduction_exponent: u32,
    policy: Stabilization,
    curve: CurveModel,
}

fn setup(spec: FamilySpec, opts: &RunOptions) -> Result<Setup> {
    let search = |policy| ReductionSearch {
        retries: opts.retries,
        s_max: opts.s_max,
        window: opts.window,
        policy,
    };
    match spec {
        FamilySpec::Hypersurface { d } => {
            let ring = RingPresentation::fermat(d, opts.field)?;
            let ideal = GradedIdeal::maximal(&ring)?.with_exec(opts.exec);
            let policy = Stabilization::Generic {
                max_gen_grade: 1,
                a_invariant: ring.a_invariant(),
            };
            let (q, s) = sample_minimal_reduction(&ideal, opts.seed, search(policy))?;
            Ok(Setup {
                closure: ClosureFiltration::new(ClosureFamily::MaximalIdealCone, ideal)?,
                q,
                reduction_exponent: s,
                policy,
                curve: CurveModel::plane(d as u64)?,
            })
        }
        FamilySpec::Blowup { d, r } => {
            let ring = RingPresentation::fermat(d, opts.field)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let l = loop {
                let l = ring.random_element(1, &mut rng);
                if !l.is_zero() {
                    break l;
                }
            };
            let ideal = GradedIdeal::principal_plus_tail(&ring, l, r + 1)?.with_exec(opts.exec);
            let policy = Stabilization::ArtinianSocle { top: d + r - 1 };
            let (q, s) = sample_minimal_reduction(&ideal, opts.seed.wrapping_add(1), search(policy))?;
            Ok(Setup {
                closure: ClosureFiltration::new(ClosureFamily::Blowup { r }, ideal)?,
                q,
                reduction_exponent: s,
                policy,
                curve: CurveModel::plane(d as u64)?,
            })
        }
        FamilySpec::Vero { g } => {
            let ring = RingPresentation::veronese(g, opts.field)?;
            let mut closure = ClosureFiltration::vero(&ring)?;
            if opts.drop_closure_extra {
                closure = closure.without_extra_generator();
            }
            let policy = Stabilization::Generic {
                max_gen_grade: 2,
                a_invariant: ring.a_invariant(),
            };
            let q = vero_reduction(&ring)?;
            let s = (1..=opts.s_max)
                .find_map(|s| match is_reduction_certificate(closure.ideal(), &q, s, policy, opts.window) {
                    Ok(true) => Some(Ok(s)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                })
                .transpose()?
                .ok_or_else(|| Error::Invariant("Q is not a reduction of I".into()))?;
            Ok(Setup {
                closure,
                q,
                reduction_exponent: s,
                policy,
                curve: CurveModel::hyperelliptic(g as u64, g as u64)?,
            })
        }
    }
}

/// `ℓ(closure(I^(n+1)) / Q closure(I^n))` and the graded pieces of `in(Q closure(I^n))`.
fn closure_length(set: &Setup, n: u32, opts: &RunOptions) -> Result<(u64, Vec<Arc<Subspace>>)> {
    let ring = set.closure.ring();
    let t_max = set.policy.t_max(n + 1, opts.window);
    let prev = |t: u32| set.closure.component(n, t);
    let denom: Vec<Arc<Subspace>> = product_initial_pieces(ring, &set.q, &prev, t_max, opts.exec)?
        .into_iter()
        .map(Arc::new)
        .collect();
    let l = quotient_length(
        &|t| set.closure.component(n + 1, t),
        &|t| Ok(denom[t as usize].clone()),
        t_max,
        opts.window,
    )?;
    Ok((l.total, denom))
}

/// Lengths by linear algebra, `p_g` from the curve side, then the q-sequence with all its
/// invariants enforced.
pub fn full_invariant_run(spec: FamilySpec, opts: &RunOptions) -> Result<FamilyRun> {
    opts.field.checked()?;
    spec.validate(opts.field)?;
    let n_max = opts.n_max.unwrap_or(spec.default_n_max());
    if n_max < 1 {
        return Err(Error::Usage("n_max must be at least 1".into()));
    }
    let set = setup(spec, opts)?;
    let ring = set.closure.ring().clone();
    let ideal = set.closure.ideal();

    let t_q = set.policy.t_max(2, opts.window);
    let colength_q = colength(&ring, &set.q, t_q, opts.window, opts.exec)?;
    let unit = |t: u32| Ok(Arc::new(Subspace::full(&ring.ring_basis(t))));
    let colength_i = quotient_length(&unit, &|t| ideal.component(t), t_q, opts.window)?.total;

    let mut lengths = Vec::with_capacity(n_max as usize);
    let mut vero = None;
    for n in 1..=n_max {
        let (l, denom) = closure_length(&set, n, opts)?;
        lengths.push(l);
        if let FamilySpec::Vero { g } = spec {
            if n == g {
                let w = vero_extra_generator(&ring, g)?;
                let outside = denom[w.grade() as usize].contains(w.poly())?.is_none();
                let cert = integral_dependence_certificate(&w, ideal, g + 1, opts.u_max)?;
                vero = Some(VeroData {
                    certificate_u: match &cert {
                        CertificateSearch::Found(c) => Some(c.u),
                        CertificateSearch::NotFound { .. } => None,
                    },
                    certificate: cert.to_string(),
                    extra_outside_q_closure: outside,
                    ideal_squared_is_q_times_ideal: set.reduction_exponent == 1,
                });
            }
        }
    }

    let p_g = set.curve.pinkham_pg()?;
    let report = q_sequence_from_lengths(p_g, &lengths)?;
    let mut checks = report.invariant_checks();
    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Invariant(format!("{spec}: {}", bad.name)));
    }

    let mut pg_blowdown = None;
    match spec {
        FamilySpec::Hypersurface { .. } => {
            let curve_side = (0..=n_max as u64)
                .map(|k| set.curve.q_k_maximal(k))
                .collect::<Result<Vec<_>>>()?;
            checks.push(Check::new("q(n m) matches the curve-side sum", curve_side == report.q));
        }
        FamilySpec::Blowup { d, r } => {
            let g = set.curve.genus() as i64;
            let bound = upper_bracket(num_rational::Ratio::new(2 * g - 2, d as i64)) + 1;
            checks.push(Check::new("br <= [[(2g-2)/d]] + 1", report.br as i64 <= bound));
            let b = curve::pg_blowdown(d as u64, r as u64)?;
            if let Blowdown::Value(v) = b {
                checks.push(Check::new("q_inf equals p_g of the blowdown", report.q_inf == v));
            }
            pg_blowdown = Some(b);
        }
        FamilySpec::Vero { .. } => {}
    }

    Ok(FamilyRun {
        family: spec,
        field: opts.field,
        seed: opts.seed,
        reduction: format!("({}, {})", set.q.q1, set.q.q2),
        reduction_exponent: set.reduction_exponent,
        colength_q,
        colength_i,
        report,
        pg_blowdown,
        vero,
        checks,
    })
}

/// Runs independent families, in parallel unless `opts.exec` is sequential.
pub fn sweep(specs: &[FamilySpec], opts: &RunOptions) -> Vec<Result<FamilyRun>> {
    par::map(opts.exec, specs, |s| full_invariant_run(*s, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_examples() {
        let r = q_sequence_from_lengths(4, &[1, 0, 0, 0]).unwrap();
        assert_eq!(r.q, vec![4, 3, 3, 3, 3]);
        assert_eq!((r.nr, r.br, r.q_inf), (2, 2, 3));

        let r = q_sequence_from_lengths(2, &[0, 1, 0, 0]).unwrap();
        assert_eq!(r.q, vec![2, 1, 0, 0, 0]);
        assert_eq!((r.nr, r.br), (1, 3));

        let r = q_sequence_from_lengths(1, &[0, 0, 0]).unwrap();
        assert_eq!(r.q, vec![1; 4]);
        assert_eq!((r.nr, r.br), (1, 1));
    }

    #[test]
    fn reconstruction_errors() {
        assert!(matches!(q_sequence_from_lengths(0, &[1, 0]), Err(Error::Inconsistent(_))));
        assert!(matches!(q_sequence_from_lengths(5, &[1, 1]), Err(Error::Inconsistent(_))));
        assert!(q_sequence_from_lengths(5, &[]).is_err());
    }

    #[test]
    fn hypersurface_quartic() {
        let run = full_invariant_run(FamilySpec::Hypersurface { d: 4 }, &RunOptions::default()).unwrap();
        assert_eq!(run.report.q, vec![4, 1, 0, 0, 0, 0]);
        assert_eq!((run.report.nr, run.report.br), (3, 3));
        assert_eq!(run.colength_q, 4);
        assert_eq!(run.reduction_exponent, 3);
        assert!(run.checks_passed());
    }

    #[test]
    fn blowup_quartic_r1() {
        let run = full_invariant_run(FamilySpec::Blowup { d: 4, r: 1 }, &RunOptions::default()).unwrap();
        assert_eq!((run.report.nr, run.report.br), (2, 2));
        assert_eq!(run.report.q[1], 3);
        assert_eq!(run.report.q_inf, 3);
        assert_eq!(run.colength_q, 8);
        assert!(run.checks_passed(), "{:?}", run.checks);
    }

    #[test]
    fn vero_genus_three() {
        let run = full_invariant_run(FamilySpec::Vero { g: 3 }, &RunOptions::default()).unwrap();
        assert_eq!(run.report.q, vec![3, 2, 1, 0, 0, 0]);
        assert_eq!((run.report.nr, run.report.br), (1, 4));
        assert_eq!((run.colength_i, run.colength_q), (3, 10));
        let v = run.vero.unwrap();
        assert_eq!(v.certificate_u, Some(2));
        assert!(v.extra_outside_q_closure && v.ideal_squared_is_q_times_ideal);
    }

    #[test]
    fn dropping_the_extra_generator_changes_the_answer() {
        let opts = RunOptions {
            drop_closure_extra: true,
            ..RunOptions::default()
        };
        let run = full_invariant_run(FamilySpec::Vero { g: 2 }, &opts).unwrap();
        assert_eq!(run.report.br, 1);
    }

    #[test]
    fn bad_characteristic_is_a_usage_error() {
        let opts = RunOptions {
            field: Field::Prime(3),
            ..RunOptions::default()
        };
        let err = full_invariant_run(FamilySpec::Hypersurface { d: 6 }, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}

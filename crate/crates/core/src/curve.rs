//! Closed-form Riemann-Roch data for cone-like singularities over smooth curves: plane
//! curves with the hyperplane class, hyperelliptic curves with a multiple of the `g^1_2`, and
//! complete-intersection curves (genus and bounds only).

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CurveModel {
    /// Smooth plane curve of degree `d`, `D` the hyperplane class.
    PlaneCurve { d: u64 },
    /// Hyperelliptic curve of genus `g` with `D = b * D0`, `deg D0 = 2`.
    Hyperelliptic { g: u64, b: u64 },
    /// Complete intersection of the given degrees in `P^n`, `n = degrees.len() + 1`.
    CompleteIntersection { degrees: Vec<u64> },
}

pub fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl CurveModel {
    pub fn plane(d: u64) -> Result<Self> {
        CurveModel::PlaneCurve { d }.validated()
    }

    pub fn hyperelliptic(g: u64, b: u64) -> Result<Self> {
        CurveModel::Hyperelliptic { g, b }.validated()
    }

    pub fn complete_intersection(mut degrees: Vec<u64>) -> Result<Self> {
        degrees.sort_unstable();
        CurveModel::CompleteIntersection { degrees }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match &self {
            CurveModel::PlaneCurve { d } if *d < 1 => Err(Error::Usage("plane curve degree must be at least 1".into())),
            CurveModel::Hyperelliptic { g, .. } if *g < 2 => Err(Error::Usage("hyperelliptic genus must be at least 2".into())),
            CurveModel::Hyperelliptic { b, .. } if *b < 1 => Err(Error::Usage("b must be at least 1".into())),
            CurveModel::CompleteIntersection { degrees } => {
                if degrees.is_empty() || degrees.contains(&0) {
                    return Err(Error::Usage("complete intersection needs degrees >= 1".into()));
                }
                if degrees.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::Usage("complete intersection degrees must be ascending".into()));
                }
                let a = self.a_invariant();
                let d = self.degree() as i64;
                if d * a % 2 != 0 || d * a / 2 + 1 < 0 {
                    return Err(Error::Usage(format!("degrees {degrees:?} do not give a curve of integral genus")));
                }
                Ok(self)
            }
            _ => Ok(self),
        }
    }

    pub fn genus(&self) -> u64 {
        match self {
            CurveModel::PlaneCurve { d } => (d - 1) * d.saturating_sub(2) / 2,
            CurveModel::Hyperelliptic { g, .. } => *g,
            CurveModel::CompleteIntersection { .. } => (self.degree() as i64 * self.a_invariant() / 2 + 1) as u64,
        }
    }

    /// `deg D`.
    pub fn degree(&self) -> u64 {
        match self {
            CurveModel::PlaneCurve { d } => *d,
            CurveModel::Hyperelliptic { b, .. } => 2 * b,
            CurveModel::CompleteIntersection { degrees } => degrees.iter().product(),
        }
    }

    /// Largest `n` with `h^1(nD) != 0`, i.e. the a-invariant of the section ring.
    pub fn a_invariant(&self) -> i64 {
        match self {
            CurveModel::PlaneCurve { d } => *d as i64 - 3,
            CurveModel::Hyperelliptic { g, b } => ((g - 1) / b) as i64,
            CurveModel::CompleteIntersection { degrees } => {
                degrees.iter().sum::<u64>() as i64 - degrees.len() as i64 - 2
            }
        }
    }

    /// `(h^0(nD), h^1(nD))`.
    pub fn h0_h1(&self, n: u64) -> Result<(u64, u64)> {
        match self {
            CurveModel::PlaneCurve { d } => {
                let h1 = binom(*d as i64 - 1 - n as i64, 2);
                let h0 = 1 - self.genus() as i64 + (n * d) as i64 + h1 as i64;
                Ok((h0 as u64, h1))
            }
            CurveModel::Hyperelliptic { g, b } => {
                let m = n * b;
                if m < *g {
                    Ok((m + 1, g - m))
                } else {
                    Ok((2 * m + 1 - g, 0))
                }
            }
            CurveModel::CompleteIntersection { .. } => Err(Error::Unsupported(
                "h0/h1 of complete-intersection curves is not implemented".into(),
            )),
        }
    }

    /// `p_g = sum_{n=0}^{a} h^1(nD)`.
    pub fn pinkham_pg(&self) -> Result<u64> {
        self.q_k_maximal(0)
    }

    /// `q(k m) = sum_{n >= k} h^1(nD)`.
    pub fn q_k_maximal(&self, k: u64) -> Result<u64> {
        let a = self.a_invariant();
        if a < 0 {
            return Ok(0);
        }
        (k..=a as u64).map(|n| self.h0_h1(n).map(|(_, h1)| h1)).sum()
    }

    pub fn gonality(&self) -> Gonality {
        match self {
            CurveModel::PlaneCurve { d } => Gonality::Exact(d.saturating_sub(1).max(1)),
            CurveModel::Hyperelliptic { .. } => Gonality::Exact(2),
            CurveModel::CompleteIntersection { degrees } => {
                let rest: u64 = degrees[1..].iter().product();
                Gonality::AtLeast(((degrees[0] - 1) * rest).max(1))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Gonality {
    Exact(u64),
    AtLeast(u64),
}

impl Gonality {
    pub fn value(self) -> u64 {
        match self {
            Gonality::Exact(v) | Gonality::AtLeast(v) => v,
        }
    }
}

/// `[[alpha]]`: the least integer strictly greater than `alpha`.
pub fn upper_bracket(alpha: Ratio<i64>) -> i64 {
    alpha.floor().to_integer() + 1
}

/// Which intersection situation of the fundamental cycle with the central curve applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundCase {
    /// `Z E0 = 0`, with `d = -Z_B E0`.
    Orthogonal { d: u64 },
    /// `Z E0 < 0`.
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub gonality: Gonality,
    pub bound_theorem_main: i64,
    pub nr_m_prediction: i64,
    /// `a + [[a/(d1 - 1)]] + 1`, only for complete intersections.
    pub complete_intersection_bound: Option<i64>,
}

pub fn br_bounds(curve: &CurveModel, case: BoundCase) -> Result<BoundReport> {
    let g = curve.genus() as i64;
    let gonality = curve.gonality();
    let denom = match case {
        BoundCase::Orthogonal { d: 0 } => return Err(Error::Precondition("d must be positive".into())),
        BoundCase::Orthogonal { d } => d as i64,
        BoundCase::Negative => gonality.value() as i64,
    };
    let a = curve.a_invariant();
    let complete_intersection_bound = match curve {
        CurveModel::CompleteIntersection { degrees } if degrees[0] >= 2 => {
            Some(a + upper_bracket(Ratio::new(a, degrees[0] as i64 - 1)) + 1)
        }
        _ => None,
    };
    Ok(BoundReport {
        gonality,
        bound_theorem_main: upper_bracket(Ratio::new(2 * g - 2, denom)) + 1,
        nr_m_prediction: a + 2,
        complete_intersection_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Blowdown {
    Value(u64),
    Indeterminate,
}

/// `p_g` of the cone over a plane curve of degree `d` with the divisor `(1 + 1/r)(P_1 + ... +
/// P_d)`, when every `floor(nD)` with `n >= 1` is nonspecial for degree reasons.
pub fn pg_blowdown(d: u64, r: u64) -> Result<Blowdown> {
    if d < 3 || r < 1 {
        return Err(Error::Precondition("pg_blowdown needs d >= 3 and r >= 1".into()));
    }
    let g = (d - 1) * (d - 2) / 2;
    // deg floor(nD) = d * floor(n(r+1)/r), smallest at n = 1
    let first = d * ((r + 1) / r);
    if first as i64 > 2 * g as i64 - 2 {
        Ok(Blowdown::Value(g))
    } else {
        Ok(Blowdown::Indeterminate)
    }
}

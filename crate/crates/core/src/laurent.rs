//! Laurent polynomials represented by coefficient valuations.
//!
//! A polynomial is the finite map `degree → valuation of the coefficient`;
//! an absent degree has coefficient zero (valuation +∞, never stored).
//! All products and sums are valuation-level (min-plus), which models the
//! generic, cancellation-free case.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::valgroup::{gv_min, gv_scale, GammaVal, Rat};

/// Which refinement of the Gauss point at a given radius is used: the inner
/// point carries the infinitesimal factor `(1−ε)` per degree, the outer
/// point its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Side {
    Inner,
    Outer,
}

/// Laurent polynomial over the base field, coefficient valuations only.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "RawLaurent", into = "RawLaurent")]
pub struct LaurentVal {
    pub terms: BTreeMap<i64, Rat>,
}

// JSON carries the degrees as object keys, hence as strings
#[derive(Serialize, Deserialize)]
struct RawLaurent {
    terms: BTreeMap<String, Rat>,
}

impl TryFrom<RawLaurent> for LaurentVal {
    type Error = String;
    fn try_from(raw: RawLaurent) -> Result<Self, String> {
        let mut terms = BTreeMap::new();
        for (k, v) in raw.terms {
            let deg: i64 = k
                .parse()
                .map_err(|_| format!("term key {k:?} is not an integer degree"))?;
            terms.insert(deg, v);
        }
        Ok(LaurentVal { terms })
    }
}

impl From<LaurentVal> for RawLaurent {
    fn from(f: LaurentVal) -> RawLaurent {
        RawLaurent {
            terms: f
                .terms
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

/// Closed interval `[lo, hi]` of `ρ = val(radius)`; smaller radii have
/// larger `ρ`. A degenerate interval `lo = hi` is a circle.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct RadiusInterval {
    pub lo: Rat,
    pub hi: Rat,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: Rat,
    hi: Rat,
}

impl TryFrom<RawInterval> for RadiusInterval {
    type Error = IntervalError;
    fn try_from(raw: RawInterval) -> Result<Self, IntervalError> {
        RadiusInterval::new(raw.lo, raw.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("interval endpoints out of order: lo > hi")]
pub struct IntervalError;

impl RadiusInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError);
        }
        Ok(RadiusInterval { lo, hi })
    }

    pub fn point(rho: Rat) -> Self {
        RadiusInterval {
            lo: rho.clone(),
            hi: rho,
        }
    }

    pub fn half_width(&self) -> Rat {
        (&self.hi - &self.lo) / Rat::from_int(2)
    }
}

impl LaurentVal {
    pub fn zero() -> Self {
        LaurentVal {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: i64, val: Rat) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(degree, val);
        LaurentVal { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(it: I) -> Self {
        LaurentVal {
            terms: it.into_iter().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Min-plus product: `(fg)_k = min_{i+j=k} (f_i + g_j)`. This is the
    /// valuation of the true product whenever no cancellation occurs.
    pub fn tropical_mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (i, v) in &self.terms {
            for (j, w) in &other.terms {
                let k = i + j;
                let val = v + w;
                terms
                    .entry(k)
                    .and_modify(|cur| {
                        if val < *cur {
                            *cur = val.clone();
                        }
                    })
                    .or_insert(val);
            }
        }
        LaurentVal { terms }
    }

    /// Degreewise minimum: the valuation of the true sum in the generic
    /// case where equal-valuation coefficients do not cancel.
    pub fn tropical_add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (j, w) in &other.terms {
            terms
                .entry(*j)
                .and_modify(|cur| {
                    if w < cur {
                        *cur = w.clone();
                    }
                })
                .or_insert_with(|| w.clone());
        }
        LaurentVal { terms }
    }
}

/// Valuation of `f` at the Gauss point of radius `ρ` on the given side.
/// Returns `None` (infinity) exactly when `f = 0`.
pub fn gauss_val(f: &LaurentVal, rho: &Rat, side: Side) -> Option<GammaVal> {
    let sign = match side {
        Side::Inner => 1,
        Side::Outer => -1,
    };
    f.terms
        .iter()
        .map(|(i, v)| GammaVal::new(v + &(&Rat::from_int(*i) * rho), Rat::from_int(sign * i)))
        .reduce(gv_min)
}

/// Supremum-norm valuation of `f` over the annulus `I`: the monomial
/// valuations are linear in `ρ`, so the minimum over the interval is
/// attained at an endpoint. `None` means `f = 0`.
pub fn sup_val(f: &LaurentVal, interval: &RadiusInterval) -> Option<Rat> {
    f.terms
        .iter()
        .map(|(i, v)| {
            let d = Rat::from_int(*i);
            let at_lo = v + &(&d * &interval.lo);
            let at_hi = v + &(&d * &interval.hi);
            at_lo.min(at_hi)
        })
        .reduce(Rat::min)
}

/// Spectral value of a monic polynomial `T^m + a_1 T^{m-1} + ... + a_m`
/// given the valuations of its non-zero lower coefficients: the minimum of
/// `w(a_i)/i`. The empty list (a pure power of `T`) yields `None`.
pub fn spectral_value(coeffs: &[(u32, GammaVal)]) -> Option<GammaVal> {
    for (k, (i, _)) in coeffs.iter().enumerate() {
        assert!(*i >= 1, "coefficient index must be at least 1");
        assert!(
            coeffs[..k].iter().all(|(j, _)| j != i),
            "coefficient indices must be distinct"
        );
    }
    coeffs
        .iter()
        .map(|(i, w)| gv_scale(w, &Rat::new(1, *i as i64)))
        .reduce(gv_min)
}

/// Multiplicative decomposition `u = γ·ξ^n·(1 + h)` of a unit, read off
/// from valuations alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    /// Degree of the dominant monomial.
    pub leading_degree: i64,
    /// Valuation of its coefficient.
    pub leading_val: Rat,
    /// Remainder with `sup_val(h, I) > 0`.
    pub remainder: LaurentVal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no single monomial strictly dominates at both interval endpoints")]
pub struct NotUnit;

/// Finds the unique monomial of `u` whose valuation is strictly minimal at
/// both endpoints of `I`, and rewrites `u` as that monomial times `1 + h`.
pub fn unit_decompose(
    u: &LaurentVal,
    interval: &RadiusInterval,
) -> Result<UnitDecomposition, NotUnit> {
    let strict_argmin = |rho: &Rat| -> Option<i64> {
        let mut best: Option<(i64, Rat)> = None;
        let mut tied = false;
        for (i, v) in &u.terms {
            let val = v + &(&Rat::from_int(*i) * rho);
            match &best {
                None => {
                    best = Some((*i, val));
                    tied = false;
                }
                Some((_, cur)) => {
                    if val < *cur {
                        best = Some((*i, val));
                        tied = false;
                    } else if val == *cur {
                        tied = true;
                    }
                }
            }
        }
        match (best, tied) {
            (Some((i, _)), false) => Some(i),
            _ => None,
        }
    };

    let at_lo = strict_argmin(&interval.lo).ok_or(NotUnit)?;
    let at_hi = strict_argmin(&interval.hi).ok_or(NotUnit)?;
    if at_lo != at_hi {
        return Err(NotUnit);
    }
    let n = at_lo;
    let c = u.terms[&n].clone();
    let mut remainder = BTreeMap::new();
    for (i, v) in &u.terms {
        if *i != n {
            remainder.insert(i - n, v - &c);
        }
    }
    Ok(UnitDecomposition {
        leading_degree: n,
        leading_val: c,
        remainder: LaurentVal { terms: remainder },
    })
}

/// Result of the p-th-root shrink analysis: the infimum of symmetric
/// shrink amounts after which the root-extraction criterion holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkResult {
    pub sigma: Rat,
    /// When true the criterion is an open condition: every shrink strictly
    /// larger than `sigma` works, but `sigma` itself does not.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShrinkError {
    #[error("the constant term already violates the root criterion; shrinking cannot fix it")]
    ConstantTerm,
    #[error("the required shrink exceeds half the interval width")]
    ExceedsHalfWidth,
}

/// Infimum σ ≥ 0 such that `sup_val(h, [lo+σ, hi−σ]) > 1/(p−1)`, the
/// criterion for `1 + h` to admit a p-th root on the shrunk annulus.
pub fn pth_root_shrink(
    h: &LaurentVal,
    interval: &RadiusInterval,
    p: u32,
) -> Result<ShrinkResult, ShrinkError> {
    assert!(p >= 2, "p must be a prime");
    if h.is_zero() {
        return Ok(ShrinkResult {
            sigma: Rat::zero(),
            strict: false,
        });
    }
    let threshold = Rat::new(1, (p - 1) as i64);
    if let Some(v0) = h.terms.get(&0) {
        if *v0 <= threshold {
            return Err(ShrinkError::ConstantTerm);
        }
    }
    // each monomial's valuation over the shrunk interval is minimized at
    // one endpoint and grows linearly with slope |k| in the shrink amount
    let mut needed: Option<Rat> = None;
    for (k, v) in &h.terms {
        if *k == 0 {
            continue;
        }
        let d = Rat::from_int(*k);
        let endpoint = if *k > 0 { &interval.lo } else { &interval.hi };
        let base = v + &(&d * endpoint);
        let t = (&threshold - &base) / d.abs();
        needed = Some(match needed {
            None => t,
            Some(cur) => cur.max(t),
        });
    }
    let sigma = match needed {
        None => {
            return Ok(ShrinkResult {
                sigma: Rat::zero(),
                strict: false,
            })
        }
        Some(t) => t,
    };
    if sigma.is_negative() {
        return Ok(ShrinkResult {
            sigma: Rat::zero(),
            strict: false,
        });
    }
    if sigma > interval.half_width() {
        return Err(ShrinkError::ExceedsHalfWidth);
    }
    Ok(ShrinkResult {
        sigma,
        strict: true,
    })
}

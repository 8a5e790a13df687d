//! Radius-parametrized break profiles of local systems: the discriminant
//! function δ and its Swan slopes, the break function β in the twist
//! parameter, Newton break points with multiplicities and offsets, and
//! profile-level shift and tensor operations.

use serde::{Deserialize, Serialize};

use crate::plfun::{pl_sum, PLFun, PlError};
use crate::valgroup::Rat;

/// One break curve with its multiplicity (the length of the corresponding
/// stalk component; fixture generators fold the ring length into it).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BreakCurve {
    pub f: PLFun,
    pub m: u64,
}

/// Weighted family of break curves modeling a local system's stalk breaks
/// across radii.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct BreakProfile {
    #[serde(rename = "l")]
    pub ring_length: u64,
    pub curves: Vec<BreakCurve>,
}

#[derive(Deserialize)]
struct RawProfile {
    l: u64,
    curves: Vec<BreakCurve>,
}

impl TryFrom<RawProfile> for BreakProfile {
    type Error = ProfileError;
    fn try_from(raw: RawProfile) -> Result<Self, ProfileError> {
        BreakProfile::new(raw.curves, raw.l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("ring length must be at least 1")]
    BadRingLength,
    #[error("curve multiplicities must be at least 1")]
    BadMultiplicity,
    #[error("break curves must be non-negative with non-negative final slope")]
    NegativeCurve,
    #[error("invalid slope: expected coprime positive n/m")]
    InvalidQ,
    #[error("shift amounts must be non-negative")]
    NegativeShift,
}

fn curve_is_nonnegative(f: &PLFun) -> bool {
    if f.at0.is_negative() || f.final_slope.is_negative() {
        return false;
    }
    !f.breakpoints()
        .iter()
        .any(|x| f.eval(x).expect("breakpoints are positive").is_negative())
}

impl BreakProfile {
    pub fn new(curves: Vec<BreakCurve>, ring_length: u64) -> Result<Self, ProfileError> {
        if ring_length == 0 {
            return Err(ProfileError::BadRingLength);
        }
        for c in &curves {
            if c.m == 0 {
                return Err(ProfileError::BadMultiplicity);
            }
            if !curve_is_nonnegative(&c.f) {
                return Err(ProfileError::NegativeCurve);
            }
        }
        Ok(BreakProfile {
            ring_length,
            curves,
        })
    }

    pub fn empty(ring_length: u64) -> Self {
        BreakProfile {
            ring_length,
            curves: vec![],
        }
    }

    /// Total multiplicity of the profile.
    pub fn rank(&self) -> u64 {
        self.curves.iter().map(|c| c.m).sum()
    }

    /// Direct sum: curves of both profiles side by side.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.ring_length, other.ring_length);
        let mut curves = self.curves.clone();
        curves.extend(other.curves.iter().cloned());
        BreakProfile {
            ring_length: self.ring_length,
            curves,
        }
    }

    /// Largest breakpoint over all curves: past it every curve is linear.
    pub fn linearity_onset(&self) -> Rat {
        self.curves
            .iter()
            .filter_map(|c| c.f.last_breakpoint())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

/// Profile of a Kummer character sheaf of order `p^j`: a single constant
/// break curve at additive value `j + 1/(p−1)` (the zero curve for the
/// trivial character), of weight `l`.
pub fn profile_kummer_char(p: u32, j: u32, l: u64) -> BreakProfile {
    assert!(p >= 2 && l >= 1);
    let f = if j == 0 {
        PLFun::zero()
    } else {
        PLFun::constant(Rat::from_int(j as i64) + Rat::new(1, (p - 1) as i64))
    };
    BreakProfile::new(vec![BreakCurve { f, m: l }], l).expect("constant curve is valid")
}

/// Profile of the model sheaf of slope `q = nq/mq > 0` in lowest terms:
/// a single curve of weight `l·mq` carrying the staircase whose weighted
/// sum is the discriminant function. For `p∤nq` the curve is
/// `max(0, q·ρ − 1/(p−1))`; for `nq = pᵃ·N` the slope climbs through
/// `N/mq, pN/mq, …` at the breakpoints `q⁻¹/(p−1), q⁻¹·1, …, q⁻¹·(a−1)`
/// before settling at `q`.
pub fn profile_lq(nq: u64, mq: u64, p: u32, l: u64) -> Result<BreakProfile, ProfileError> {
    if nq == 0 || mq == 0 || l == 0 || gcd(nq, mq) != 1 {
        return Err(ProfileError::InvalidQ);
    }
    let q = Rat::new(nq as i64, mq as i64);
    let q_inv = q.recip();
    let lambda_bp = &q_inv * &Rat::new(1, (p - 1) as i64);
    let mut a = 0u32;
    let mut big_n = nq;
    while big_n % p as u64 == 0 {
        big_n /= p as u64;
        a += 1;
    }
    let weight = l * mq;
    let f = if a == 0 {
        PLFun::ramp(&q, &Rat::new(1, (p - 1) as i64))
    } else {
        // staircase of the wild case, divided by the weight
        let mut pieces: Vec<(Rat, Rat)> = vec![(lambda_bp, Rat::zero())];
        let mut power = 1u64;
        for j in 1..=a {
            let bp = &q_inv * &Rat::from_int(j as i64);
            let slope = Rat::new((big_n * power) as i64, mq as i64);
            if bp > pieces.last().unwrap().0 {
                pieces.push((bp, slope));
            }
            power *= p as u64;
        }
        PLFun::from_parts(Rat::zero(), pieces, q.clone()).expect("staircase is increasing")
    };
    BreakProfile::new(vec![BreakCurve { f, m: weight }], l)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Discriminant function of the profile: the multiplicity-weighted sum of
/// its break curves.
pub fn delta_from_profile(pr: &BreakProfile) -> PLFun {
    let scaled: Vec<PLFun> = pr
        .curves
        .iter()
        .map(|c| c.f.scale(&Rat::from_int(c.m as i64)))
        .collect();
    pl_sum(scaled.iter())
}

/// Swan conductor at a radius: the right slope of δ there.
pub fn swan_at(pr: &BreakProfile, rho: &Rat) -> Result<Rat, PlError> {
    delta_from_profile(pr).right_slope(rho)
}

/// Limit of the Swan conductor toward the puncture: the eventual slope
/// of δ.
pub fn swan_limit(pr: &BreakProfile) -> Rat {
    delta_from_profile(pr).eventual_slope()
}

/// Break profiles always have eventually linear δ; reports that fact
/// together with the limiting Swan value.
pub fn is_bounded(pr: &BreakProfile) -> (bool, Rat) {
    (true, swan_limit(pr))
}

/// The twisted sum `ρ ↦ Σ_i m_i·max(f_i(ρ), q·ρ − c)`.
pub fn f_qc(pr: &BreakProfile, q: &Rat, c: &Rat) -> PLFun {
    let line = PLFun::line(-c.clone(), q.clone());
    let scaled: Vec<PLFun> = pr
        .curves
        .iter()
        .map(|cv| cv.f.max(&line).scale(&Rat::from_int(cv.m as i64)))
        .collect();
    pl_sum(scaled.iter())
}

/// Break function in the twist slope `q`: the closed form
/// `β(q) = Σ_i m_i·max(q, τ_i)` over the curves' eventual slopes.
pub fn beta_function(pr: &BreakProfile) -> PLFun {
    let ident = PLFun::line(Rat::zero(), Rat::one());
    let scaled: Vec<PLFun> = pr
        .curves
        .iter()
        .map(|c| {
            ident
                .max(&PLFun::constant(c.f.eventual_slope()))
                .scale(&Rat::from_int(c.m as i64))
        })
        .collect();
    pl_sum(scaled.iter())
}

/// One Newton break: eventual slope, eventual intercept and multiplicity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NewtonBreak {
    pub q: Rat,
    pub c: Rat,
    pub mu: u64,
}

/// Groups the curves by their eventual line `(slope, intercept)`.
/// The output is ordered by slope descending, then intercept ascending,
/// and the multiplicities sum to the profile rank.
pub fn newton_breaks(pr: &BreakProfile) -> Vec<NewtonBreak> {
    let mut acc: Vec<NewtonBreak> = Vec::new();
    for c in &pr.curves {
        let q = c.f.eventual_slope();
        let off = c.f.eventual_intercept();
        match acc.iter_mut().find(|b| b.q == q && b.c == off) {
            Some(b) => b.mu += c.m,
            None => acc.push(NewtonBreak { q, c: off, mu: c.m }),
        }
    }
    acc.sort_by(|x, y| y.q.cmp(&x.q).then_with(|| x.c.cmp(&y.c)));
    acc
}

/// Precomposes every curve with `ρ ↦ ρ − s` on `[s, ∞)`, extending to the
/// left by the value at 0; weights are unchanged.
pub fn shift_profile(pr: &BreakProfile, s: &Rat) -> Result<BreakProfile, ProfileError> {
    if s.is_negative() {
        return Err(ProfileError::NegativeShift);
    }
    if s.is_zero() {
        return Ok(pr.clone());
    }
    let curves = pr
        .curves
        .iter()
        .map(|c| {
            let mut pieces: Vec<(Rat, Rat)> = vec![(s.clone(), Rat::zero())];
            for p in &c.f.pieces {
                pieces.push((&p.until + s, p.slope.clone()));
            }
            let f = PLFun::from_parts(c.f.at0.clone(), pieces, c.f.final_slope.clone())
                .expect("shifted breakpoints stay increasing");
            BreakCurve { f, m: c.m }
        })
        .collect();
    BreakProfile::new(curves, pr.ring_length)
}

/// Upper bound for the profile of a tensor product: pointwise maxima of
/// curve pairs with multiplied weights. `exact` is false when some pair
/// has identical eventual data, in which case the rule only gives a
/// containment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorBound {
    pub profile: BreakProfile,
    pub exact: bool,
}

pub fn tensor_profile_bound(a: &BreakProfile, b: &BreakProfile) -> TensorBound {
    assert_eq!(a.ring_length, b.ring_length);
    let mut curves = Vec::with_capacity(a.curves.len() * b.curves.len());
    let mut exact = true;
    for ca in &a.curves {
        for cb in &b.curves {
            let same_tail = ca.f.eventual_slope() == cb.f.eventual_slope()
                && ca.f.eventual_intercept() == cb.f.eventual_intercept();
            if same_tail {
                exact = false;
            }
            curves.push(BreakCurve {
                f: ca.f.max(&cb.f),
                m: ca.m * cb.m,
            });
        }
    }
    TensorBound {
        profile: BreakProfile::new(curves, a.ring_length).expect("maxima stay non-negative"),
        exact,
    }
}

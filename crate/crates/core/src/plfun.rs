//! Exact piecewise-linear functions on the half-line `[0, ∞)`.
//!
//! A function is stored as its value at 0, a list of breakpoints with the
//! slope of the segment ending at each breakpoint, and the slope of the
//! final unbounded segment. Functions are continuous by construction and
//! kept canonical: breakpoints strictly increase and no two adjacent
//! segments share a slope.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::valgroup::Rat;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub until: Rat,
    pub slope: Rat,
}

/// Continuous piecewise-linear function on `[0, ∞)`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlFun")]
pub struct PLFun {
    pub at0: Rat,
    pub pieces: Vec<Piece>,
    pub final_slope: Rat,
}

#[derive(Deserialize)]
struct RawPlFun {
    at0: Rat,
    pieces: Vec<Piece>,
    final_slope: Rat,
}

impl TryFrom<RawPlFun> for PLFun {
    type Error = PlError;
    fn try_from(raw: RawPlFun) -> Result<Self, PlError> {
        PLFun::from_parts(
            raw.at0,
            raw.pieces.into_iter().map(|p| (p.until, p.slope)).collect(),
            raw.final_slope,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("argument {0} lies outside the domain [0, ∞)")]
    NegativeArgument(Rat),
    #[error("left slope is undefined at 0")]
    LeftSlopeAtZero,
    #[error("breakpoints must be strictly increasing and positive")]
    BadBreakpoints,
}

impl fmt::Debug for PLFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLFun[{}", self.at0)?;
        for p in &self.pieces {
            write!(f, "; slope {} until {}", p.slope, p.until)?;
        }
        write!(f, "; slope {}]", self.final_slope)
    }
}

impl PLFun {
    /// Builds a function from raw parts, validating breakpoint order and
    /// merging adjacent segments of equal slope.
    pub fn from_parts(
        at0: Rat,
        pieces: Vec<(Rat, Rat)>,
        final_slope: Rat,
    ) -> Result<Self, PlError> {
        let mut prev = Rat::zero();
        for (x, _) in &pieces {
            if *x <= prev {
                return Err(PlError::BadBreakpoints);
            }
            prev = x.clone();
        }
        Ok(Self::canonical(at0, pieces, final_slope))
    }

    fn canonical(at0: Rat, pieces: Vec<(Rat, Rat)>, final_slope: Rat) -> Self {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(pieces.len());
        for (x, s) in pieces {
            out.push((x, s));
        }
        // drop a breakpoint whenever the segments on both sides share a slope
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(out.len());
        for (x, s) in out {
            merged.push((x, s));
        }
        let mut pieces: Vec<Piece> = Vec::with_capacity(merged.len());
        for (i, (x, s)) in merged.iter().enumerate() {
            let next_slope = if i + 1 < merged.len() {
                &merged[i + 1].1
            } else {
                &final_slope
            };
            if s != next_slope {
                pieces.push(Piece {
                    until: x.clone(),
                    slope: s.clone(),
                });
            }
        }
        PLFun {
            at0,
            pieces,
            final_slope,
        }
    }

    pub fn constant(v: Rat) -> Self {
        PLFun {
            at0: v,
            pieces: vec![],
            final_slope: Rat::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    /// The line `x ↦ at0 + slope·x`.
    pub fn line(at0: Rat, slope: Rat) -> Self {
        PLFun {
            at0,
            pieces: vec![],
            final_slope: slope,
        }
    }

    /// The kinked line `x ↦ max(0, q·x − c)` for `q > 0`, `c ≥ 0`.
    pub fn ramp(q: &Rat, c: &Rat) -> Self {
        if !q.is_positive() {
            if c.is_negative() {
                return Self::constant(-c.clone());
            }
            return Self::zero();
        }
        if c.is_positive() {
            PLFun {
                at0: Rat::zero(),
                pieces: vec![Piece {
                    until: c / q,
                    slope: Rat::zero(),
                }],
                final_slope: q.clone(),
            }
        } else {
            Self::line(-c.clone(), q.clone())
        }
    }

    pub fn breakpoints(&self) -> Vec<Rat> {
        self.pieces.iter().map(|p| p.until.clone()).collect()
    }

    pub fn last_breakpoint(&self) -> Option<Rat> {
        self.pieces.last().map(|p| p.until.clone())
    }

    pub fn eventual_slope(&self) -> Rat {
        self.final_slope.clone()
    }

    /// Intercept of the final linear piece: `f(x) = slope·x + intercept`
    /// for all `x` past the last breakpoint.
    pub fn eventual_intercept(&self) -> Rat {
        let last = self.last_breakpoint().unwrap_or_else(Rat::zero);
        let v = self.eval_unchecked(&last);
        v - &self.final_slope * &last
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, PlError> {
        if x.is_negative() {
            return Err(PlError::NegativeArgument(x.clone()));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Rat) -> Rat {
        let mut value = self.at0.clone();
        let mut pos = Rat::zero();
        for p in &self.pieces {
            if *x <= p.until {
                return value + &p.slope * &(x - &pos);
            }
            value = value + &p.slope * &(&p.until - &pos);
            pos = p.until.clone();
        }
        value + &self.final_slope * &(x - &pos)
    }

    /// Slope of the segment immediately to the right of `x`.
    pub fn right_slope(&self, x: &Rat) -> Result<Rat, PlError> {
        if x.is_negative() {
            return Err(PlError::NegativeArgument(x.clone()));
        }
        for p in &self.pieces {
            if *x < p.until {
                return Ok(p.slope.clone());
            }
        }
        Ok(self.final_slope.clone())
    }

    /// Slope of the segment immediately to the left of `x`; requires `x > 0`.
    pub fn left_slope(&self, x: &Rat) -> Result<Rat, PlError> {
        if x.is_negative() {
            return Err(PlError::NegativeArgument(x.clone()));
        }
        if x.is_zero() {
            return Err(PlError::LeftSlopeAtZero);
        }
        for p in &self.pieces {
            if *x <= p.until {
                return Ok(p.slope.clone());
            }
        }
        Ok(self.final_slope.clone())
    }

    /// True iff slopes are non-decreasing from left to right.
    pub fn is_convex(&self) -> bool {
        let mut prev: Option<&Rat> = None;
        for p in &self.pieces {
            if let Some(q) = prev {
                if &p.slope < q {
                    return false;
                }
            }
            prev = Some(&p.slope);
        }
        match prev {
            Some(q) => self.final_slope >= *q,
            None => true,
        }
    }

    /// Slope of `self` on the open grid segment starting at `a`, assuming
    /// no breakpoint of `self` lies strictly inside that segment.
    fn slope_after(&self, a: &Rat) -> Rat {
        self.right_slope(a).expect("grid point is non-negative")
    }

    pub fn add(&self, other: &Self) -> Self {
        let grid = merge_grids(&self.breakpoints(), &other.breakpoints());
        let at0 = &self.at0 + &other.at0;
        let mut pieces = Vec::with_capacity(grid.len());
        let mut pos = Rat::zero();
        for x in &grid {
            let slope = self.slope_after(&pos) + other.slope_after(&pos);
            pieces.push((x.clone(), slope));
            pos = x.clone();
        }
        let final_slope = self.slope_after(&pos) + other.slope_after(&pos);
        Self::canonical(at0, pieces, final_slope)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::canonical(
            &self.at0 * c,
            self.pieces
                .iter()
                .map(|p| (p.until.clone(), &p.slope * c))
                .collect(),
            &self.final_slope * c,
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rat::from_int(-1))
    }

    /// Exact pointwise maximum; crossing points become new breakpoints.
    pub fn max(&self, other: &Self) -> Self {
        let base = merge_grids(&self.breakpoints(), &other.breakpoints());
        let mut grid = base.clone();
        // insert crossings inside each open segment, including the final ray
        let mut pos = Rat::zero();
        let mut segments: Vec<(Rat, Option<Rat>)> = Vec::new();
        for x in &base {
            segments.push((pos.clone(), Some(x.clone())));
            pos = x.clone();
        }
        segments.push((pos, None));
        for (a, b) in &segments {
            let sf = self.slope_after(a);
            let sg = other.slope_after(a);
            if sf == sg {
                continue;
            }
            let vf = self.eval_unchecked(a);
            let vg = other.eval_unchecked(a);
            // f(a) + sf (x - a) = g(a) + sg (x - a)
            let dx = (vg - vf) / (sf - sg);
            if !dx.is_positive() {
                continue;
            }
            let cross = a + &dx;
            if let Some(end) = b {
                if cross >= *end {
                    continue;
                }
            }
            grid.push(cross);
        }
        grid.sort();
        grid.dedup();

        let at0 = max_rat(
            self.eval_unchecked(&Rat::zero()),
            other.eval_unchecked(&Rat::zero()),
        );
        let mut pieces = Vec::with_capacity(grid.len());
        let mut pos = Rat::zero();
        let mut val = at0.clone();
        for x in &grid {
            let v = max_rat(self.eval_unchecked(x), other.eval_unchecked(x));
            let slope = (&v - &val) / (x - &pos);
            pieces.push((x.clone(), slope));
            pos = x.clone();
            val = v;
        }
        let probe = &pos + &Rat::one();
        let vf = self.eval_unchecked(&probe);
        let vg = other.eval_unchecked(&probe);
        let final_slope = if vf > vg {
            self.slope_after(&pos)
        } else if vg > vf {
            other.slope_after(&pos)
        } else {
            // equal beyond every crossing: the two final lines coincide
            self.slope_after(&pos)
        };
        Self::canonical(at0, pieces, final_slope)
    }

    /// Sample points for plotting: 0, every breakpoint, and one point past
    /// the last breakpoint.
    pub fn plot_points(&self) -> Vec<(Rat, Rat)> {
        let mut xs = vec![Rat::zero()];
        xs.extend(self.breakpoints());
        let past = xs.last().unwrap() + &Rat::one();
        xs.push(past);
        xs.into_iter()
            .map(|x| {
                let v = self.eval_unchecked(&x);
                (x, v)
            })
            .collect()
    }
}

fn max_rat(a: Rat, b: Rat) -> Rat {
    if a >= b {
        a
    } else {
        b
    }
}

fn merge_grids(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut grid: Vec<Rat> = a.iter().chain(b.iter()).cloned().collect();
    grid.sort();
    grid.dedup();
    grid
}

/// Sum of a family of functions; empty families yield the zero function.
pub fn pl_sum<'a, I: IntoIterator<Item = &'a PLFun>>(fs: I) -> PLFun {
    let mut acc = PLFun::zero();
    for f in fs {
        acc = acc.add(f);
    }
    acc
}

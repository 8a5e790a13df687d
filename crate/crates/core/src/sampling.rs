//! Random generators for the property suites: valid-by-construction
//! Laurent data, convex break profiles, filtered ramification points and
//! matrix representations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::breakdec::{FilteredRep, FinRing, ModMatrix};
use crate::conductor::{BreakCurve, BreakProfile};
use crate::laurent::{LaurentVal, RadiusInterval};
use crate::plfun::PLFun;
use crate::ramify::{FiniteGroup, RamPoint};
use crate::valgroup::{GammaVal, Rat};

pub fn sample_rat(rng: &mut impl Rng, num_lo: i64, num_hi: i64, den_max: i64) -> Rat {
    let den = rng.gen_range(1..=den_max);
    let num = rng.gen_range(num_lo..=num_hi);
    Rat::new(num, den)
}

pub fn sample_gamma(rng: &mut impl Rng) -> GammaVal {
    GammaVal::new(sample_rat(rng, -6, 6, 4), sample_rat(rng, -6, 6, 4))
}

pub fn sample_nonneg_gamma(rng: &mut impl Rng) -> GammaVal {
    GammaVal::new(sample_rat(rng, 0, 6, 4), sample_rat(rng, 0, 6, 4))
}

/// Laurent polynomial with at most 8 terms, degrees in [−5, 5] and
/// valuations with numerators in [−3, 3] and denominators up to 6.
pub fn sample_laurent(rng: &mut impl Rng) -> LaurentVal {
    let terms = rng.gen_range(0..=8);
    let mut f = LaurentVal::zero();
    for _ in 0..terms {
        let deg = rng.gen_range(-5..=5);
        f.terms.insert(deg, sample_rat(rng, -3, 3, 6));
    }
    f
}

pub fn sample_interval(rng: &mut impl Rng) -> RadiusInterval {
    let a = sample_rat(rng, 0, 12, 4);
    let b = sample_rat(rng, 0, 12, 4);
    if a <= b {
        RadiusInterval::new(a, b).unwrap()
    } else {
        RadiusInterval::new(b, a).unwrap()
    }
}

/// A Laurent polynomial with a strictly dominant monomial on the interval,
/// so that the unit analysis always succeeds.
pub fn sample_unit(rng: &mut impl Rng, interval: &RadiusInterval) -> LaurentVal {
    let lead_deg = rng.gen_range(-3..=3);
    let lead_val = sample_rat(rng, -2, 2, 4);
    let mut u = LaurentVal::monomial(lead_deg, lead_val.clone());
    let extra = rng.gen_range(0..=5);
    for _ in 0..extra {
        let deg = rng.gen_range(-5..=5);
        if deg == lead_deg {
            continue;
        }
        // strictly above the leading monomial at both endpoints
        let d = Rat::from_int(lead_deg - deg);
        let needed_lo = &lead_val + &(&d * &interval.lo);
        let needed_hi = &lead_val + &(&d * &interval.hi);
        let slack = sample_rat(rng, 1, 4, 3);
        u.terms.insert(deg, needed_lo.max(needed_hi) + slack);
    }
    u
}

/// Non-negative convex piecewise-linear curve: non-negative value at 0 and
/// non-decreasing slopes starting from a non-negative one.
pub fn sample_convex_curve(rng: &mut impl Rng) -> PLFun {
    let at0 = sample_rat(rng, 0, 4, 3);
    let nbp = rng.gen_range(0..=3);
    let mut bps: Vec<Rat> = (0..nbp).map(|_| sample_rat(rng, 1, 12, 4)).collect();
    bps.sort();
    bps.dedup();
    let mut slope = sample_rat(rng, 0, 3, 3);
    let mut pieces = Vec::with_capacity(bps.len());
    for x in bps {
        pieces.push((x, slope.clone()));
        slope = slope + sample_rat(rng, 0, 3, 3);
    }
    PLFun::from_parts(at0, pieces, slope).expect("sorted breakpoints")
}

/// Valid profile with 1–4 convex non-negative curves.
pub fn sample_profile(rng: &mut impl Rng) -> BreakProfile {
    let ncurves = rng.gen_range(1..=4);
    let curves = (0..ncurves)
        .map(|_| BreakCurve {
            f: sample_convex_curve(rng),
            m: rng.gen_range(1..=3),
        })
        .collect();
    BreakProfile::new(curves, rng.gen_range(1..=2)).expect("curves are valid by construction")
}

/// Valid filtered ramification point on a cyclic group: a descending
/// divisor chain carries increasing i-values, wild (positive-flat) levels
/// only once the chain lies inside the p-Sylow part.
pub fn sample_ram_point(rng: &mut impl Rng) -> RamPoint {
    let p = *[2u32, 3, 5].choose(rng).unwrap();
    let n = rng.gen_range(2usize..=24);
    let group = FiniteGroup::cyclic(n);
    let gamma0 = GammaVal::new(Rat::zero(), Rat::new(1, n as i64));

    // strictly descending chain of divisors starting at n
    let mut chain = vec![n];
    let mut cur = n;
    while cur > 1 && rng.gen_bool(0.7) {
        let divisors: Vec<usize> = (1..cur).filter(|d| cur % d == 0).collect();
        let next = *divisors.choose(rng).unwrap();
        chain.push(next);
        if next == 1 {
            break;
        }
        cur = next;
    }

    let is_p_power = |mut m: usize| {
        while m % p as usize == 0 {
            m /= p as usize;
        }
        m == 1
    };

    let mut values: Vec<GammaVal> = Vec::with_capacity(chain.len());
    let mut flat = Rat::zero();
    let mut eps = gamma0.eps.clone();
    let mut wild = false;
    for &order in &chain {
        if order > 1 && is_p_power(order) && (wild || rng.gen_bool(0.6)) {
            wild = true;
            flat = flat + sample_rat(rng, 1, 3, 2);
        } else if !values.is_empty() {
            eps = eps + Rat::new(1, n as i64);
        }
        values.push(GammaVal::new(flat.clone(), eps.clone()));
    }

    // element k of the cyclic group belongs to the subgroup of order d
    // iff d·k ≡ 0 (mod n); assign the deepest level containing it
    let mut i_values = std::collections::BTreeMap::new();
    for k in 1..n {
        let mut level = 0usize;
        for (j, &order) in chain.iter().enumerate() {
            if (order * k) % n == 0 {
                level = j;
            }
        }
        i_values.insert(k, values[level].clone());
    }
    RamPoint::new(group, i_values, gamma0, p, None).expect("construction is valid")
}

/// Pair of non-negative values `w < w'` for monotonicity checks.
pub fn sample_ordered_pair(rng: &mut impl Rng) -> (GammaVal, GammaVal) {
    loop {
        let a = sample_nonneg_gamma(rng);
        let b = sample_nonneg_gamma(rng);
        match a.cmp(&b) {
            std::cmp::Ordering::Less => return (a, b),
            std::cmp::Ordering::Greater => return (b, a),
            std::cmp::Ordering::Equal => continue,
        }
    }
}

fn companion(coeffs_low_to_high: &[i64], modulus: u64) -> ModMatrix {
    let k = coeffs_low_to_high.len();
    let mut m = ModMatrix::zero(k, modulus);
    for i in 1..k {
        m.set(i, i - 1, 1);
    }
    for (i, &c) in coeffs_low_to_high.iter().enumerate() {
        let v = ((-c).rem_euclid(modulus as i64)) as u64;
        m.set(i, k - 1, v);
    }
    m
}

/// Cyclotomic companion block of exact order `d` (for the orders used by
/// the fixtures) over ℤ/m.
fn cyclotomic_block(d: usize, modulus: u64) -> ModMatrix {
    match d {
        1 => ModMatrix::identity(1, modulus),
        2 => companion(&[1], modulus),
        3 => companion(&[1, 1], modulus),
        4 => companion(&[1, 0], modulus),
        9 => companion(&[1, 0, 0, 1, 0, 0], modulus),
        _ => panic!("no cyclotomic block for order {d}"),
    }
}

fn shift_block(d: usize, modulus: u64) -> ModMatrix {
    let mut m = ModMatrix::zero(d, modulus);
    for i in 0..d {
        m.set((i + 1) % d, i, 1);
    }
    m
}

/// Scalar of multiplicative order `d` modulo ℓⁿ, when one exists.
fn scalar_of_order(d: usize, ring: &FinRing) -> Option<u64> {
    let m = ring.modulus();
    if d == 1 {
        return Some(1);
    }
    'outer: for a in 2..m {
        if a % ring.ell == 0 {
            continue;
        }
        let mut x = a;
        for _ in 1..d {
            if x == 1 {
                continue 'outer;
            }
            x = ((x as u128 * a as u128) % m as u128) as u64;
        }
        if x == 1 {
            return Some(a);
        }
    }
    None
}

pub fn random_invertible(rng: &mut impl Rng, dim: usize, ring: &FinRing) -> ModMatrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(0..ring.modulus())).collect())
            .collect();
        let m = ModMatrix::from_rows(rows, ring.modulus()).unwrap();
        if m.is_invertible(ring.ell) {
            return m;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize, ring: &FinRing) -> ModMatrix {
    let rows: Vec<Vec<u64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..ring.modulus())).collect())
        .collect();
    ModMatrix::from_rows(rows, ring.modulus()).unwrap()
}

/// The maximal chain of the cyclic p-group of order `h` (subgroups listed
/// by element indices).
pub fn maximal_chain(h: usize, p: usize) -> Vec<Vec<usize>> {
    let mut chain = Vec::new();
    let mut size = h;
    loop {
        let step = h / size;
        chain.push((0..size).map(|k| k * step).collect());
        if size == 1 {
            break;
        }
        size /= p;
    }
    chain
}

/// Random representation of the cyclic group of order `h` over ℤ/ℓⁿ with
/// total dimension at most `max_dim`: a random conjugate of a block sum of
/// shift blocks, cyclotomic companions and scalar characters whose orders
/// divide `h`.
pub fn sample_rep(rng: &mut impl Rng, h: usize, ring: FinRing, max_dim: usize) -> FilteredRep {
    let p = smallest_prime_factor(h);
    let divisors: Vec<usize> = (1..=h).filter(|d| h % d == 0).collect();
    let modulus = ring.modulus();

    let mut blocks: Vec<ModMatrix> = Vec::new();
    let mut dim = 0usize;
    while dim < max_dim {
        let d = *divisors.choose(rng).unwrap();
        let mut options: Vec<ModMatrix> = Vec::new();
        if dim + d <= max_dim {
            options.push(shift_block(d, modulus));
        }
        if matches!(d, 1 | 2 | 3 | 4 | 9) {
            let b = cyclotomic_block(d, modulus);
            if dim + b.dim <= max_dim {
                options.push(b);
            }
        }
        if let Some(s) = scalar_of_order(d, &ring) {
            if dim < max_dim {
                options.push(ModMatrix::from_rows(vec![vec![s]], modulus).unwrap());
            }
        }
        let Some(block) = options.choose(rng) else {
            break;
        };
        dim += block.dim;
        blocks.push(block.clone());
        if rng.gen_bool(0.3) {
            break;
        }
    }
    if blocks.is_empty() {
        blocks.push(ModMatrix::identity(1, modulus));
        dim = 1;
    }

    let mut generator = ModMatrix::zero(dim, modulus);
    let mut offset = 0;
    for b in &blocks {
        for i in 0..b.dim {
            for j in 0..b.dim {
                generator.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += b.dim;
    }
    let conj = random_invertible(rng, dim, &ring);
    let conj_inv = conj.inverse().expect("sampled matrix is invertible");
    let generator = conj.mul(&generator).mul(&conj_inv);

    let mut action = Vec::with_capacity(h);
    let mut cur = ModMatrix::identity(dim, modulus);
    for _ in 0..h {
        action.push(cur.clone());
        cur = cur.mul(&generator);
    }
    FilteredRep::new(FiniteGroup::cyclic(h), maximal_chain(h, p), ring, action)
        .expect("block construction is a valid representation")
}

fn smallest_prime_factor(n: usize) -> usize {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

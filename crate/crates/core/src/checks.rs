//! Seeded property suites over all modules, aggregated for the `check`
//! front-end entry point.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::breakdec::{
    base_change_check, break_decompose, tensor_breaks_check, verify_break_props, FinRing, ModMatrix,
};
use crate::conductor::{
    beta_function, delta_from_profile, f_qc, newton_breaks, profile_kummer_char, profile_lq,
    shift_profile, swan_at, BreakProfile,
};
use crate::laurent::{gauss_val, sup_val, LaurentVal, RadiusInterval, Side};
use crate::plfun::PLFun;
use crate::ramify::{
    artin_flat, artin_nat, cyclic_divisor_embedding, delta_value, induce, inner, phi_upper,
    ram_from_kummer, swan_nat, ClassFun, FiniteGroup,
};
use crate::sampling::{
    random_matrix, sample_convex_curve, sample_gamma, sample_laurent, sample_ordered_pair,
    sample_profile, sample_ram_point, sample_rat, sample_rep,
};
use crate::valgroup::{gv_add, gv_min, gv_scale, GammaVal, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

fn result(name: &str, cases: usize, pass: bool) -> CheckResult {
    CheckResult {
        name: name.to_owned(),
        cases,
        pass,
    }
}

/// Runs every property suite with a deterministic generator.
pub fn run_all(seed: u64) -> CheckReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut results = Vec::new();
    results.extend(valgroup_checks(&mut rng));
    results.extend(laurent_checks(&mut rng));
    results.extend(plfun_checks(&mut rng));
    results.extend(ramify_checks(&mut rng));
    results.extend(breakdec_checks(&mut rng));
    results.extend(conductor_checks(&mut rng));
    let pass = results.iter().all(|r| r.pass);
    CheckReport {
        seed,
        results,
        pass,
    }
}

pub fn valgroup_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut ordered = true;
    let mut cases = 0;
    for _ in 0..1000 {
        let a = sample_gamma(rng);
        let b = sample_gamma(rng);
        let c = sample_gamma(rng);
        if a < b {
            ordered &= gv_add(&a, &c) < gv_add(&b, &c);
            cases += 1;
        }
    }
    let mut roundtrip = true;
    for _ in 0..500 {
        let a = sample_gamma(rng);
        let mut q = sample_rat(rng, -5, 5, 4);
        if q.is_zero() {
            q = Rat::one();
        }
        roundtrip &= gv_scale(&gv_scale(&a, &q), &q.recip()) == a;
    }
    let mut total_order = true;
    for _ in 0..1000 {
        let a = sample_gamma(rng);
        let b = sample_gamma(rng);
        let c = sample_gamma(rng);
        let ab = a.cmp(&b);
        total_order &= ab == b.cmp(&a).reverse();
        if ab.is_lt() && b < c {
            total_order &= a < c;
        }
    }
    vec![
        result("value group: order respects addition", cases, ordered),
        result("value group: scaling round-trip", 500, roundtrip),
        result(
            "value group: total order and transitivity",
            1000,
            total_order,
        ),
    ]
}

pub fn laurent_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut mult = true;
    let mut generic_cases = 0;
    let mut attempts = 0;
    while generic_cases < 1000 && attempts < 40000 {
        attempts += 1;
        let f = sample_laurent(rng);
        let g = sample_laurent(rng);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let rho = sample_rat(rng, -4, 4, 4);
        let side = if rng.gen_bool(0.5) {
            Side::Inner
        } else {
            Side::Outer
        };
        if !convolution_min_is_unique(&f, &g, &rho, side) {
            continue;
        }
        generic_cases += 1;
        let lhs = gauss_val(&f.tropical_mul(&g), &rho, side).unwrap();
        let rhs = gv_add(
            &gauss_val(&f, &rho, side).unwrap(),
            &gauss_val(&g, &rho, side).unwrap(),
        );
        mult &= lhs == rhs;
    }
    mult &= generic_cases >= 1000;

    let mut ultra = true;
    let mut ultra_cases = 0;
    while ultra_cases < 1000 {
        let f = sample_laurent(rng);
        let g = sample_laurent(rng);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        ultra_cases += 1;
        let rho = sample_rat(rng, -4, 4, 4);
        let side = if rng.gen_bool(0.5) {
            Side::Inner
        } else {
            Side::Outer
        };
        let vf = gauss_val(&f, &rho, side).unwrap();
        let vg = gauss_val(&g, &rho, side).unwrap();
        let vs = gauss_val(&f.tropical_add(&g), &rho, side).unwrap();
        let lower = gv_min(vf.clone(), vg.clone());
        ultra &= vs >= lower;
        if vf != vg {
            ultra &= vs == lower;
        }
    }

    let mut scaling = true;
    for _ in 0..500 {
        let k = rng.gen_range(-5i64..=5);
        let f = LaurentVal::monomial(k, sample_rat(rng, -3, 3, 6));
        let rho = sample_rat(rng, -4, 4, 4);
        let rho2 = sample_rat(rng, -4, 4, 4);
        let at_rho = gauss_val(&f, &rho, Side::Inner).unwrap();
        let at_rho2 = gauss_val(&f, &rho2, Side::Inner).unwrap();
        let delta = GammaVal::new(&(&rho2 - &rho) * &Rat::from_int(k), Rat::zero());
        scaling &= at_rho2 == gv_add(&at_rho, &delta);
    }

    let mut sup_flat = true;
    for _ in 0..500 {
        let f = sample_laurent(rng);
        if f.is_zero() {
            continue;
        }
        let rho = sample_rat(rng, -4, 4, 4);
        let circle = RadiusInterval::point(rho.clone());
        let s = sup_val(&f, &circle).unwrap();
        let g = gauss_val(&f, &rho, Side::Inner).unwrap();
        sup_flat &= s == g.flat;
    }

    vec![
        result(
            "laurent: gauss multiplicativity on generic pairs",
            generic_cases,
            mult,
        ),
        result(
            "laurent: ultrametric with strict-inequality equality",
            1000,
            ultra,
        ),
        result("laurent: monomial radius scaling", 500, scaling),
        result("laurent: circle sup matches gauss flat part", 500, sup_flat),
    ]
}

fn convolution_min_is_unique(f: &LaurentVal, g: &LaurentVal, rho: &Rat, side: Side) -> bool {
    let s = match side {
        Side::Inner => 1i64,
        Side::Outer => -1,
    };
    let term =
        |i: i64, v: &Rat| GammaVal::new(v + &(&Rat::from_int(i) * rho), Rat::from_int(s * i));
    let mut best: Option<GammaVal> = None;
    let mut ties = 0usize;
    for (i, vf) in &f.terms {
        for (j, vg) in &g.terms {
            let cand = gv_add(&term(*i, vf), &term(*j, vg));
            match &best {
                None => {
                    best = Some(cand);
                    ties = 1;
                }
                Some(cur) => {
                    if cand < *cur {
                        best = Some(cand);
                        ties = 1;
                    } else if cand == *cur {
                        ties += 1;
                    }
                }
            }
        }
    }
    ties == 1
}

fn sample_any_plfun(rng: &mut StdRng) -> PLFun {
    let at0 = sample_rat(rng, -4, 4, 3);
    let nbp = rng.gen_range(0..=4);
    let mut bps: Vec<Rat> = (0..nbp).map(|_| sample_rat(rng, 1, 12, 4)).collect();
    bps.sort();
    bps.dedup();
    let pieces = bps
        .into_iter()
        .map(|x| (x, sample_rat(rng, -3, 3, 3)))
        .collect();
    PLFun::from_parts(at0, pieces, sample_rat(rng, -3, 3, 3)).unwrap()
}

fn integral_of_slopes(f: &PLFun, x: &Rat) -> Rat {
    let mut acc = f.at0.clone();
    let mut pos = Rat::zero();
    for bp in f.breakpoints() {
        if bp >= *x {
            break;
        }
        let slope = f.right_slope(&pos).unwrap();
        acc = acc + slope * (&bp - &pos);
        pos = bp;
    }
    acc + f.right_slope(&pos).unwrap() * (x - &pos)
}

pub fn plfun_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut closure = true;
    for _ in 0..500 {
        let f = sample_convex_curve(rng);
        let g = sample_convex_curve(rng);
        closure &= f.add(&g).is_convex() && f.max(&g).is_convex();
    }

    let mut integration = true;
    for _ in 0..300 {
        let f = sample_any_plfun(rng);
        let x = sample_rat(rng, 0, 16, 4);
        integration &= f.eval(&x).unwrap() == integral_of_slopes(&f, &x);
    }

    let mut canonical = true;
    for _ in 0..100 {
        let f = sample_any_plfun(rng);
        // re-building from parts with a redundant split must not change
        // anything observable
        let split_at = sample_rat(rng, 1, 20, 3);
        let mut pieces: Vec<(Rat, Rat)> = Vec::new();
        let mut inserted = false;
        for p in &f.pieces {
            if !inserted && split_at < p.until && pieces.last().is_none_or(|(x, _)| *x < split_at) {
                pieces.push((split_at.clone(), p.slope.clone()));
                inserted = true;
            }
            pieces.push((p.until.clone(), p.slope.clone()));
        }
        if !inserted && f.pieces.last().is_none_or(|p| p.until < split_at) {
            pieces.push((split_at.clone(), f.final_slope.clone()));
        }
        let g = PLFun::from_parts(f.at0.clone(), pieces, f.final_slope.clone()).unwrap();
        canonical &= g == f;
        for _ in 0..100 {
            let x = sample_rat(rng, 0, 24, 4);
            canonical &= g.eval(&x).unwrap() == f.eval(&x).unwrap();
        }
    }

    vec![
        result("plfun: add and max preserve convexity", 500, closure),
        result(
            "plfun: eval agrees with slope integration",
            300,
            integration,
        ),
        result(
            "plfun: canonical form is stable and value-preserving",
            100,
            canonical,
        ),
    ]
}

pub fn ramify_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut herbrand = true;
    for _ in 0..50 {
        let rp = sample_ram_point(rng);
        herbrand &= phi_upper(&rp, &GammaVal::zero()) == GammaVal::zero();
        for _ in 0..10 {
            let (w, w2) = sample_ordered_pair(rng);
            herbrand &= phi_upper(&rp, &w) < phi_upper(&rp, &w2);
        }
    }

    let mut two_routes = true;
    let mut route_cases = 0;
    for p in [2u32, 3, 5] {
        for n in 2..=16usize {
            let rp = ram_from_kummer(n, p, Rat::zero());
            let direct = artin_nat(&rp)
                .sub(&ClassFun::augmentation(rp.group()))
                .unwrap();
            two_routes &= swan_nat(&rp) == direct;
            route_cases += 1;
        }
    }

    let mut quotient = true;
    let mut quotient_cases = 0;
    for p in [2u32, 3, 5] {
        for n in 2..=24usize {
            let rp = ram_from_kummer(n, p, Rat::zero());
            let a = artin_flat(&rp);
            for d in (1..=n).filter(|d| n % d == 0) {
                let small = FiniteGroup::cyclic(d);
                let emb = cyclic_divisor_embedding(n, d);
                let perm = induce(&ClassFun::trivial(&small), rp.group(), &emb).unwrap();
                let lhs = inner(&a, &perm).unwrap();
                let rhs = delta_value(&ram_from_kummer(n / d, p, Rat::zero()));
                quotient &= lhs == rhs;
                quotient_cases += 1;
            }
        }
    }

    let mut positive = true;
    let mut positive_cases = 0;
    for _ in 0..20 {
        let rp = sample_ram_point(rng);
        let n = rp.group().order();
        let a = artin_flat(&rp);
        for d in (1..=n).filter(|d| n % d == 0) {
            let small = FiniteGroup::cyclic(d);
            let emb = cyclic_divisor_embedding(n, d);
            let perm = induce(&ClassFun::trivial(&small), rp.group(), &emb).unwrap();
            positive &= !inner(&a, &perm).unwrap().is_negative();
            positive_cases += 1;
        }
    }

    vec![
        result(
            "ramify: herbrand map strictly increasing from 0",
            500,
            herbrand,
        ),
        result(
            "ramify: swan via jumps equals swan via total conductor",
            route_cases,
            two_routes,
        ),
        result(
            "ramify: quotient coverings match induced trivial characters",
            quotient_cases,
            quotient,
        ),
        result(
            "ramify: artin pairing non-negative on permutation characters",
            positive_cases,
            positive,
        ),
    ]
}

/// The cells `(group order, ℓ)` with ℓ coprime to the group order.
pub const REP_CELLS: [(usize, u64); 6] = [(2, 3), (2, 5), (4, 3), (4, 5), (3, 5), (9, 5)];

pub fn breakdec_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut verify = true;
    let mut hom_vanish = true;
    let mut commute = true;
    let mut base_change = true;
    let mut tensor_rule = true;
    let mut cases = 0;
    for (h, ell) in REP_CELLS {
        for n in [1u32, 2] {
            let ring = FinRing::new(ell, n).unwrap();
            for _ in 0..2 {
                let rep = sample_rep(rng, h, ring, 6);
                cases += 1;
                verify &= verify_break_props(&rep).pass;
                let decomp = break_decompose(&rep);
                let dim = rep.dim();

                for a in 0..decomp.components.len() {
                    for b in 0..decomp.components.len() {
                        if a == b {
                            continue;
                        }
                        let x = random_matrix(rng, dim, rep.ring());
                        let pinned = decomp.components[a]
                            .projector
                            .mul(&x)
                            .mul(&decomp.components[b].projector);
                        let mut avg = ModMatrix::zero(dim, rep.ring().modulus());
                        for g in 0..h {
                            let conj = rep
                                .action(g)
                                .mul(&pinned)
                                .mul(rep.action(rep.group().inverse(g)));
                            avg = avg.add(&conj);
                        }
                        hom_vanish &= avg.is_zero();
                    }
                }

                let x = random_matrix(rng, dim, rep.ring());
                let mut equivariant = ModMatrix::zero(dim, rep.ring().modulus());
                for g in 0..h {
                    equivariant = equivariant.add(
                        &rep.action(g)
                            .mul(&x)
                            .mul(rep.action(rep.group().inverse(g))),
                    );
                }
                for c in &decomp.components {
                    commute &= equivariant.mul(&c.projector) == c.projector.mul(&equivariant);
                }

                if n == 2 {
                    base_change &= base_change_check(&rep).unwrap().pass;
                }

                let other = sample_rep(rng, h, ring, 4);
                tensor_rule &= tensor_breaks_check(&rep, &other).unwrap().pass;
            }
        }
    }
    vec![
        result("breakdec: projector systems verify", cases, verify),
        result(
            "breakdec: hom spaces between components vanish",
            cases,
            hom_vanish,
        ),
        result(
            "breakdec: equivariant maps commute with projectors",
            cases,
            commute,
        ),
        result(
            "breakdec: reduction commutes with decomposition",
            cases / 2,
            base_change,
        ),
        result(
            "breakdec: tensor and hom break rules hold",
            cases,
            tensor_rule,
        ),
    ]
}

fn fixture_profiles() -> Vec<BreakProfile> {
    let mut out = Vec::new();
    for (nq, mq, p) in [
        (1u64, 1u64, 3u32),
        (1, 2, 3),
        (3, 1, 5),
        (2, 3, 3),
        (3, 1, 3),
        (9, 1, 3),
        (2, 1, 2),
        (4, 3, 2),
    ] {
        out.push(profile_lq(nq, mq, p, 1).unwrap());
    }
    out.push(profile_lq(1, 1, 3, 2).unwrap());
    for (p, j, l) in [(3u32, 0u32, 1u64), (3, 1, 1), (2, 2, 1), (5, 1, 2)] {
        out.push(profile_kummer_char(p, j, l));
    }
    out
}

fn q_grid(pr: &BreakProfile) -> Vec<Rat> {
    let mut qs: Vec<Rat> = (0..16).map(|k| Rat::new(k, 2)).collect();
    let max_tau = pr
        .curves
        .iter()
        .map(|c| c.f.eventual_slope())
        .max()
        .unwrap_or_else(Rat::zero);
    qs.push(&max_tau + &Rat::one());
    qs.push(&max_tau + &Rat::new(7, 3));
    qs.push(&max_tau + &Rat::new(1, 5));
    qs.push(max_tau);
    qs
}

pub fn conductor_checks(rng: &mut StdRng) -> Vec<CheckResult> {
    let mut profiles = fixture_profiles();
    for _ in 0..40 {
        profiles.push(sample_profile(rng));
    }

    let mut beta_oracle = true;
    let mut beta_cases = 0;
    let cs = [Rat::zero(), Rat::one(), Rat::new(-1, 2)];
    for pr in &profiles {
        let beta = beta_function(pr);
        for q in q_grid(pr) {
            for c in &cs {
                beta_cases += 1;
                beta_oracle &= beta.eval(&q).unwrap() == f_qc(pr, &q, c).eventual_slope();
            }
        }
    }

    let mut convex = true;
    for pr in &profiles {
        let delta = delta_from_profile(pr);
        convex &= delta.is_convex();
        let mut prev: Option<Rat> = None;
        for k in 0..=16 {
            let rho = Rat::new(k, 2);
            let sw = swan_at(pr, &rho).unwrap();
            if let Some(p) = prev {
                convex &= sw >= p;
            }
            prev = Some(sw);
        }
    }

    let mut newton_sum = true;
    for pr in &profiles {
        let total: u64 = newton_breaks(pr).iter().map(|b| b.mu).sum();
        newton_sum &= total == pr.rank();
        // integral weights force integer slopes of the break function
        let beta = beta_function(pr);
        newton_sum &=
            beta.pieces.iter().all(|p| p.slope.is_integer()) && beta.eventual_slope().is_integer();
        let max_tau = pr
            .curves
            .iter()
            .map(|c| c.f.eventual_slope())
            .max()
            .unwrap_or_else(Rat::zero);
        let big_q = &max_tau + &Rat::one();
        let expected = &big_q * &Rat::from_int(pr.rank() as i64);
        newton_sum &= beta_function(pr).eval(&big_q).unwrap() == expected;
    }

    let mut shift_invariant = true;
    for pr in profiles.iter().take(20) {
        let s = sample_rat(rng, 0, 6, 3);
        let shifted = shift_profile(pr, &s).unwrap();
        shift_invariant &= beta_function(&shifted) == beta_function(pr);
    }

    let mut denominators = true;
    for (nq, mq, p) in [
        (1u64, 2u64, 3u32),
        (2, 3, 3),
        (4, 3, 2),
        (3, 4, 3),
        (9, 2, 3),
    ] {
        let pr = profile_lq(nq, mq, p, 1).unwrap();
        for c in &pr.curves {
            let mut slopes: Vec<Rat> = c.f.pieces.iter().map(|p| p.slope.clone()).collect();
            slopes.push(c.f.eventual_slope());
            for s in slopes {
                let den = s.denominator_of();
                denominators &= (num_bigint::BigInt::from(mq) % den) == num_bigint::BigInt::from(0);
            }
        }
    }

    vec![
        result(
            "conductor: beta matches the twist oracle",
            beta_cases,
            beta_oracle,
        ),
        result(
            "conductor: delta convex with monotone swan slopes",
            profiles.len(),
            convex,
        ),
        result(
            "conductor: newton multiplicities sum to rank, beta eventually linear",
            profiles.len(),
            newton_sum,
        ),
        result("conductor: beta is shift-invariant", 20, shift_invariant),
        result(
            "conductor: model-sheaf slope denominators divide m",
            5,
            denominators,
        ),
    ]
}

//! Acceptance criteria, one test per criterion. Every check is exact
//! rational arithmetic; each test prints a PASS line and enforces its time
//! budget.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramlab_core::breakdec::{
    base_change_check, break_decompose, tensor_breaks_check, verify_break_props, FinRing, ModMatrix,
};
use ramlab_core::conductor::{
    beta_function, delta_from_profile, f_qc, newton_breaks, profile_kummer_char, profile_lq,
    swan_at, tensor_profile_bound,
};
use ramlab_core::laurent::{
    gauss_val, pth_root_shrink, sup_val, unit_decompose, LaurentVal, RadiusInterval, ShrinkError,
    Side,
};
use ramlab_core::plfun::PLFun;
use ramlab_core::ramify::{delta_value, jumps_lower, phi_upper, ram_from_kummer, swan_nat};
use ramlab_core::sampling::{
    random_matrix, sample_interval, sample_laurent, sample_profile, sample_rat, sample_rep,
    sample_unit,
};
use ramlab_core::valgroup::{gv_add, gv_min, rat, GammaVal, Rat};

fn finish(criterion: u32, what: &str, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_secs,
        "criterion {criterion} exceeded its {budget_secs}s budget ({elapsed:.2}s)"
    );
    println!("[acceptance] criterion {criterion} ({what}): PASS ({elapsed:.2}s)");
}

#[test]
fn criterion_01_kummer_wild_break() {
    let t = Instant::now();
    for p in [2u32, 3, 5] {
        for rho in [Rat::zero(), rat(1, 2), rat(2, 1)] {
            let rp = ram_from_kummer(p as usize, p, rho);
            let jumps = jumps_lower(&rp);
            assert_eq!(jumps.len(), 1, "mu_p has a unique lower jump");
            let up = phi_upper(&rp, &jumps[0]);
            assert_eq!(up.flat, rat(p as i64, p as i64 - 1), "p = {p}");
        }
    }
    finish(1, "wild Kummer upper break p/(p-1)", t, 1.0);
}

#[test]
fn criterion_02_swan_vanishing_kummer() {
    let t = Instant::now();
    for p in [2u32, 3, 5] {
        for n in 1..=12usize {
            let rp = ram_from_kummer(n, p, rat(1, 3));
            let sw = swan_nat(&rp);
            for g in 0..n {
                assert!(sw.value_at(g).is_zero(), "swan_nat(n={n}, p={p}) at {g}");
            }
        }
        for j in 0..=3u32 {
            let pr = profile_kummer_char(p, j, 1);
            for k in 0..=12i64 {
                let rho = Rat::new(k, 3);
                assert_eq!(swan_at(&pr, &rho).unwrap(), Rat::zero());
            }
        }
    }
    finish(2, "Swan conductors vanish on Kummer fixtures", t, 1.0);
}

#[test]
fn criterion_03_model_sheaf_delta_schedules() {
    let t = Instant::now();
    // (p, n/m) → expected breakpoints with slopes, eventual slope l·n
    let cases: [(u32, u64, u64, PLFun); 4] = [
        (
            3,
            1,
            1,
            PLFun::from_parts(Rat::zero(), vec![(rat(1, 2), Rat::zero())], Rat::one()).unwrap(),
        ),
        (
            3,
            1,
            2,
            PLFun::from_parts(Rat::zero(), vec![(rat(1, 1), Rat::zero())], Rat::one()).unwrap(),
        ),
        (
            5,
            3,
            1,
            PLFun::from_parts(Rat::zero(), vec![(rat(1, 12), Rat::zero())], rat(3, 1)).unwrap(),
        ),
        (
            3,
            2,
            3,
            PLFun::from_parts(Rat::zero(), vec![(rat(3, 4), Rat::zero())], rat(2, 1)).unwrap(),
        ),
    ];
    for (p, nq, mq, expected) in cases {
        let pr = profile_lq(nq, mq, p, 1).unwrap();
        let delta = delta_from_profile(&pr);
        assert_eq!(delta, expected, "p={p} q={nq}/{mq}");
        assert_eq!(delta.eventual_slope(), Rat::from_int(nq as i64));
    }
    // wild schedules keep the staircase of the slope ladder
    let pr = profile_lq(3, 1, 3, 1).unwrap();
    let delta = delta_from_profile(&pr);
    assert_eq!(delta.breakpoints(), vec![rat(1, 6), rat(1, 3)]);
    assert_eq!(delta.right_slope(&rat(1, 6)).unwrap(), Rat::one());
    assert_eq!(delta.eventual_slope(), rat(3, 1));
    finish(3, "delta schedules of the model sheaves", t, 1.0);
}

#[test]
fn criterion_04_convexity_and_monotone_swan() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut profiles = fixture_profiles();
    for _ in 0..200 {
        profiles.push(sample_profile(&mut rng));
    }
    for pr in &profiles {
        let delta = delta_from_profile(pr);
        assert!(delta.is_convex());
        let mut prev: Option<Rat> = None;
        for k in 0..=20i64 {
            let rho = Rat::new(k, 2);
            let sw = swan_at(pr, &rho).unwrap();
            if let Some(p) = prev {
                assert!(sw >= p, "swan slopes must not decrease");
            }
            prev = Some(sw);
        }
    }
    finish(
        4,
        "delta convex, swan monotone (fixtures + 200 random)",
        t,
        10.0,
    );
}

#[test]
fn criterion_05_beta_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut profiles = fixture_profiles();
    for _ in 0..200 {
        profiles.push(sample_profile(&mut rng));
    }
    let cs = [Rat::zero(), Rat::one(), rat(-1, 2)];
    for pr in &profiles {
        let beta = beta_function(pr);
        let max_tau = pr
            .curves
            .iter()
            .map(|c| c.f.eventual_slope())
            .max()
            .unwrap_or_else(Rat::zero);
        let mut qs: Vec<Rat> = (0..18).map(|k| Rat::new(k, 2)).collect();
        qs.push(&max_tau + &Rat::one());
        qs.push(&max_tau + &rat(5, 2));
        assert_eq!(qs.len(), 20);
        for q in &qs {
            for c in &cs {
                let twisted = f_qc(pr, q, c);
                assert_eq!(
                    beta.eval(q).unwrap(),
                    twisted.eventual_slope(),
                    "beta disagrees with the twist oracle"
                );
            }
        }
        let mu_total: u64 = newton_breaks(pr).iter().map(|b| b.mu).sum();
        assert_eq!(mu_total, pr.rank());
        let big_q = &max_tau + &Rat::one();
        assert_eq!(
            beta.eval(&big_q).unwrap(),
            &big_q * &Rat::from_int(pr.rank() as i64),
            "beta must be q·rank beyond the largest eventual slope"
        );
    }
    finish(5, "beta oracle (fixtures + 200 random, 20 q, 3 c)", t, 30.0);
}

#[test]
fn criterion_06_fuehrer_cross_check() {
    let t = Instant::now();
    for p in [2u32, 3, 5] {
        for n in 1..=12usize {
            for rho in [Rat::zero(), rat(1, 2), Rat::one(), rat(2, 1)] {
                let lhs = delta_value(&ram_from_kummer(n, p, rho.clone()));
                // oracle: valuation of the naive Kummer discriminant
                // n^n·ξ^{n−1} at the Gauss point, renormalized by the
                // orthogonal basis 1, ξ^{1/n}, …, ξ^{(n−1)/n}
                let mut vp_n = 0i64;
                let mut m = n;
                while m % p as usize == 0 {
                    m /= p as usize;
                    vp_n += 1;
                }
                let disc = LaurentVal::monomial(
                    n as i64 - 1,
                    Rat::from_int(n as i64) * Rat::from_int(vp_n),
                );
                let val = gauss_val(&disc, &rho, Side::Inner).unwrap();
                let mut renorm = Rat::zero();
                for i in 0..n as i64 {
                    renorm = renorm + Rat::new(i, n as i64) * &rho;
                }
                let oracle = val.flat - rat(2, 1) * renorm;
                assert_eq!(lhs, oracle, "n={n} p={p}");
                if n == p as usize {
                    assert_eq!(lhs, Rat::from_int(p as i64));
                }
                if n % p as usize != 0 {
                    assert_eq!(lhs, Rat::zero());
                }
            }
        }
    }
    finish(6, "discriminant oracle matches conductor pairing", t, 1.0);
}

#[test]
fn criterion_07_break_decomposition_suite() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let cells: Vec<(usize, u64, u32)> = ramlab_core::checks::REP_CELLS
        .iter()
        .flat_map(|&(h, ell)| [(h, ell, 1u32), (h, ell, 2u32)])
        .collect();
    let mut done = 0usize;
    'outer: loop {
        for &(h, ell, n) in &cells {
            if done >= 100 {
                break 'outer;
            }
            let ring = FinRing::new(ell, n).unwrap();
            let rep = sample_rep(&mut rng, h, ring, 6);
            let report = verify_break_props(&rep);
            assert!(report.pass, "verify failed for h={h} ell={ell} n={n}");

            let decomp = break_decompose(&rep);
            let total: usize = decomp.components.iter().map(|c| c.rank).sum();
            assert_eq!(total, rep.dim(), "rank additivity");

            // Hom-vanishing between distinct components
            let dim = rep.dim();
            for a in 0..decomp.components.len() {
                for b in 0..decomp.components.len() {
                    if a == b {
                        continue;
                    }
                    let x = random_matrix(&mut rng, dim, rep.ring());
                    let pinned = decomp.components[a]
                        .projector
                        .mul(&x)
                        .mul(&decomp.components[b].projector);
                    let mut avg = ModMatrix::zero(dim, rep.ring().modulus());
                    for g in 0..h {
                        avg = avg.add(
                            &rep.action(g)
                                .mul(&pinned)
                                .mul(rep.action(rep.group().inverse(g))),
                        );
                    }
                    assert!(avg.is_zero(), "hom space between components must vanish");
                }
            }

            if n == 2 {
                assert!(base_change_check(&rep).unwrap().pass);
            }
            done += 1;
        }
    }
    finish(7, "100 random break decompositions verify", t, 60.0);
}

#[test]
fn criterion_08_tensor_rules() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut done = 0usize;
    'outer: loop {
        for &(h, ell) in &ramlab_core::checks::REP_CELLS {
            for n in [1u32, 2] {
                if done >= 100 {
                    break 'outer;
                }
                let ring = FinRing::new(ell, n).unwrap();
                let a = sample_rep(&mut rng, h, ring, 4);
                let b = sample_rep(&mut rng, h, ring, 4);
                assert!(tensor_breaks_check(&a, &b).unwrap().pass);
                done += 1;
            }
        }
    }

    // pointwise bound for the profile-level tensor estimate
    for k in 0..60 {
        let a = sample_profile(&mut rng);
        let mut b = sample_profile(&mut rng);
        b.ring_length = a.ring_length;
        let bound = tensor_profile_bound(&a, &b);
        let delta_bound = delta_from_profile(&bound.profile);
        let da = delta_from_profile(&a);
        let db = delta_from_profile(&b);
        let scale = Rat::from_int((a.rank() * b.rank()) as i64);
        for j in 0..=16i64 {
            let rho = Rat::new(j, 2);
            let lhs = delta_bound.eval(&rho).unwrap();
            let rhs = &scale * &da.eval(&rho).unwrap().max(db.eval(&rho).unwrap());
            assert!(lhs <= rhs, "tensor delta bound violated (pair {k})");
        }
    }
    finish(8, "tensor break rules and profile bound", t, 30.0);
}

#[test]
fn criterion_09_gauss_valuation_properties() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1009);

    // multiplicativity on generic pairs: the minimizing term pair must be
    // unique at the evaluation point
    let mut generic = 0usize;
    while generic < 1000 {
        let f = sample_laurent(&mut rng);
        let g = sample_laurent(&mut rng);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let rho = sample_rat(&mut rng, -4, 4, 4);
        let side = if rng.gen_bool(0.5) {
            Side::Inner
        } else {
            Side::Outer
        };
        let s = match side {
            Side::Inner => 1i64,
            Side::Outer => -1,
        };
        let term =
            |i: i64, v: &Rat| GammaVal::new(v + &(&Rat::from_int(i) * &rho), Rat::from_int(s * i));
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
                    Some(cur) if cand < *cur => {
                        best = Some(cand);
                        ties = 1;
                    }
                    Some(cur) if cand == *cur => ties += 1,
                    _ => {}
                }
            }
        }
        if ties != 1 {
            continue;
        }
        generic += 1;
        let lhs = gauss_val(&f.tropical_mul(&g), &rho, side).unwrap();
        let rhs = gv_add(
            &gauss_val(&f, &rho, side).unwrap(),
            &gauss_val(&g, &rho, side).unwrap(),
        );
        assert_eq!(lhs, rhs, "multiplicativity on a generic pair");
    }

    // ultrametric with equality under strict inequality
    let mut cases = 0usize;
    while cases < 1000 {
        let f = sample_laurent(&mut rng);
        let g = sample_laurent(&mut rng);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        cases += 1;
        let rho = sample_rat(&mut rng, -4, 4, 4);
        let side = if rng.gen_bool(0.5) {
            Side::Inner
        } else {
            Side::Outer
        };
        let vf = gauss_val(&f, &rho, side).unwrap();
        let vg = gauss_val(&g, &rho, side).unwrap();
        let vs = gauss_val(&f.tropical_add(&g), &rho, side).unwrap();
        let lower = gv_min(vf.clone(), vg.clone());
        assert!(vs >= lower);
        if vf != vg {
            assert_eq!(vs, lower);
        }
    }
    finish(
        9,
        "gauss multiplicativity and ultrametric equality",
        t,
        10.0,
    );
}

/// Outcome of the scan-based shrink oracle.
#[derive(Debug, PartialEq, Eq)]
enum ShrinkOracle {
    AlreadyFine,
    Infimum(Rat),
    ConstantObstruction,
    TooWide,
}

/// Independent route for the root-extraction shrink: scan the candidate
/// breakpoints where some monomial's interval minimum crosses the
/// threshold, deciding feasibility by sup-valuation evaluations only.
fn shrink_oracle(h: &LaurentVal, interval: &RadiusInterval, p: u32) -> ShrinkOracle {
    let thr = Rat::new(1, p as i64 - 1);
    let width = &interval.hi - &interval.lo;
    let half = &width / &rat(2, 1);
    let shrunk =
        |sigma: &Rat| RadiusInterval::new(&interval.lo + sigma, &interval.hi - sigma).unwrap();
    let feasible = |sigma: &Rat| match sup_val(h, &shrunk(sigma)) {
        None => true,
        Some(v) => v > thr,
    };
    if feasible(&Rat::zero()) {
        return ShrinkOracle::AlreadyFine;
    }
    if let Some(v0) = h.terms.get(&0) {
        if *v0 <= thr {
            return ShrinkOracle::ConstantObstruction;
        }
    }
    // candidate crossings found by two-point interpolation of each
    // monomial's valuation over the shrinking family
    let mut candidates = vec![Rat::zero(), half.clone()];
    for (k, v) in &h.terms {
        if *k == 0 || half.is_zero() {
            continue;
        }
        let mono = LaurentVal::monomial(*k, v.clone());
        let g0 = sup_val(&mono, interval).unwrap();
        let g_half = sup_val(&mono, &shrunk(&half)).unwrap();
        if g_half <= g0 {
            continue;
        }
        let cross = (&thr - &g0) * &(&half / &(&g_half - &g0));
        if !cross.is_negative() && cross <= half {
            candidates.push(cross);
        }
    }
    candidates.sort();
    candidates.dedup();
    let last_infeasible = candidates
        .iter()
        .rfind(|c| !feasible(c))
        .expect("0 is infeasible here")
        .clone();
    for c in &candidates {
        if *c > last_infeasible {
            assert!(
                feasible(c),
                "feasibility must be monotone across candidates"
            );
        }
    }
    if last_infeasible < half {
        return ShrinkOracle::Infimum(last_infeasible);
    }
    // everything up to the half-width fails; the infimum is the half-width
    // itself exactly when the binding valuation touches the threshold there
    match sup_val(h, &shrunk(&half)) {
        Some(v) if v == thr => ShrinkOracle::Infimum(half),
        _ => ShrinkOracle::TooWide,
    }
}

#[test]
fn criterion_10_riemann_existence_step() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut done = 0usize;
    while done < 50 {
        let interval = sample_interval(&mut rng);
        let u = sample_unit(&mut rng, &interval);
        let p = *[2u32, 3, 5].get(rng.gen_range(0..3)).unwrap();
        let dec = unit_decompose(&u, &interval).expect("sampled units decompose");
        if !dec.remainder.is_zero() {
            let sup = sup_val(&dec.remainder, &interval).unwrap();
            assert!(sup.is_positive(), "decomposition must leave positive sup");
        }
        compare_shrink(&dec.remainder, &interval, p);
        done += 1;
    }

    // remainders of unit decompositions never carry a constant term, so the
    // obstruction arms are pinned on direct inputs through the same oracle
    let i01 = RadiusInterval::new(Rat::zero(), Rat::one()).unwrap();
    compare_shrink(&LaurentVal::monomial(-1, Rat::one()), &i01, 3);
    compare_shrink(&LaurentVal::monomial(0, rat(1, 4)), &i01, 3);
    let narrow = RadiusInterval::new(Rat::zero(), rat(1, 2)).unwrap();
    compare_shrink(&LaurentVal::monomial(-1, rat(3, 4)), &narrow, 2);

    finish(10, "root-extraction shrink matches the scan oracle", t, 5.0);
}

fn compare_shrink(h: &LaurentVal, interval: &RadiusInterval, p: u32) {
    let got = pth_root_shrink(h, interval, p);
    let expected = shrink_oracle(h, interval, p);
    match (got, expected) {
        (Ok(r), ShrinkOracle::AlreadyFine) => {
            assert_eq!(r.sigma, Rat::zero());
            assert!(!r.strict);
        }
        (Ok(r), ShrinkOracle::Infimum(s)) => {
            assert_eq!(r.sigma, s);
            assert!(r.strict);
        }
        (Err(ShrinkError::ConstantTerm), ShrinkOracle::ConstantObstruction) => {}
        (Err(ShrinkError::ExceedsHalfWidth), ShrinkOracle::TooWide) => {}
        (got, expected) => panic!("shrink mismatch: impl {got:?} vs oracle {expected:?}"),
    }
}

fn fixture_profiles() -> Vec<ramlab_core::conductor::BreakProfile> {
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

//! Property-based invariants across the modules.

use proptest::prelude::*;

use ramlab_core::laurent::{gauss_val, sup_val, LaurentVal, RadiusInterval, Side};
use ramlab_core::plfun::PLFun;
use ramlab_core::valgroup::{gv_add, gv_min, gv_scale, GammaVal, Rat};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-24i64..=24, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn nonneg_rat_strategy() -> impl Strategy<Value = Rat> {
    (0i64..=24, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn gamma_strategy() -> impl Strategy<Value = GammaVal> {
    (rat_strategy(), rat_strategy()).prop_map(|(f, e)| GammaVal::new(f, e))
}

fn laurent_strategy() -> impl Strategy<Value = LaurentVal> {
    prop::collection::btree_map(-5i64..=5, (-3i64..=3, 1i64..=6), 0..8)
        .prop_map(|m| LaurentVal::from_terms(m.into_iter().map(|(k, (n, d))| (k, Rat::new(n, d)))))
}

fn plfun_strategy() -> impl Strategy<Value = PLFun> {
    (
        rat_strategy(),
        prop::collection::btree_map((1i64..=20, 1i64..=4), rat_strategy(), 0..4),
        rat_strategy(),
    )
        .prop_map(|(at0, pieces, fin)| {
            let pieces: Vec<(Rat, Rat)> = pieces
                .into_iter()
                .map(|((n, d), s)| (Rat::new(n, d), s))
                .collect();
            let mut sorted = pieces;
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            sorted.dedup_by(|a, b| a.0 == b.0);
            PLFun::from_parts(at0, sorted, fin).unwrap()
        })
}

proptest! {
    #[test]
    fn gamma_order_respects_addition(
        a in gamma_strategy(),
        b in gamma_strategy(),
        c in gamma_strategy()
    ) {
        if a < b {
            prop_assert!(gv_add(&a, &c) < gv_add(&b, &c));
        }
    }

    #[test]
    fn gamma_scale_round_trip(a in gamma_strategy(), n in 1i64..=12, d in 1i64..=12) {
        let q = Rat::new(n, d);
        prop_assert_eq!(gv_scale(&gv_scale(&a, &q), &q.recip()), a);
    }

    #[test]
    fn gamma_order_total(a in gamma_strategy(), b in gamma_strategy()) {
        let forward = a.cmp(&b);
        prop_assert_eq!(forward, b.cmp(&a).reverse());
        prop_assert_eq!(forward.is_eq(), a == b);
    }

    #[test]
    fn gauss_ultrametric(
        f in laurent_strategy(),
        g in laurent_strategy(),
        rn in -8i64..=8,
        rd in 1i64..=4,
        inner in any::<bool>()
    ) {
        let rho = Rat::new(rn, rd);
        let side = if inner { Side::Inner } else { Side::Outer };
        let sum = f.tropical_add(&g);
        let vs = gauss_val(&sum, &rho, side);
        let vf = gauss_val(&f, &rho, side);
        let vg = gauss_val(&g, &rho, side);
        match (vf, vg) {
            (None, x) | (x, None) => prop_assert_eq!(vs, x),
            (Some(a), Some(b)) => {
                let lower = gv_min(a.clone(), b.clone());
                let v = vs.unwrap();
                prop_assert!(v >= lower);
                if a != b {
                    prop_assert_eq!(v, lower);
                }
            }
        }
    }

    #[test]
    fn gauss_multiplicative_on_tropical_products(
        f in laurent_strategy(),
        g in laurent_strategy(),
        rn in -8i64..=8,
        rd in 1i64..=4,
        inner in any::<bool>()
    ) {
        let rho = Rat::new(rn, rd);
        let side = if inner { Side::Inner } else { Side::Outer };
        let prod = f.tropical_mul(&g);
        match (gauss_val(&f, &rho, side), gauss_val(&g, &rho, side)) {
            (Some(a), Some(b)) => {
                prop_assert_eq!(gauss_val(&prod, &rho, side), Some(gv_add(&a, &b)));
            }
            _ => prop_assert_eq!(gauss_val(&prod, &rho, side), None),
        }
    }

    #[test]
    fn sup_attained_at_endpoints(
        f in laurent_strategy(),
        a in nonneg_rat_strategy(),
        b in nonneg_rat_strategy()
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let interval = RadiusInterval::new(lo.clone(), hi.clone()).unwrap();
        let s = sup_val(&f, &interval);
        let at_lo = sup_val(&f, &RadiusInterval::point(lo));
        let at_hi = sup_val(&f, &RadiusInterval::point(hi));
        match (s, at_lo, at_hi) {
            (None, None, None) => {}
            (Some(s), Some(l), Some(h)) => prop_assert_eq!(s, l.min(h)),
            _ => prop_assert!(false, "zero polynomial must stay zero"),
        }
    }

    #[test]
    fn plfun_add_matches_pointwise(
        f in plfun_strategy(),
        g in plfun_strategy(),
        xn in 0i64..=40,
        xd in 1i64..=4
    ) {
        let x = Rat::new(xn, xd);
        let s = f.add(&g);
        prop_assert_eq!(
            s.eval(&x).unwrap(),
            f.eval(&x).unwrap() + g.eval(&x).unwrap()
        );
    }

    #[test]
    fn plfun_max_matches_pointwise(
        f in plfun_strategy(),
        g in plfun_strategy(),
        xn in 0i64..=40,
        xd in 1i64..=4
    ) {
        let x = Rat::new(xn, xd);
        let m = f.max(&g);
        let expect = f.eval(&x).unwrap().max(g.eval(&x).unwrap());
        prop_assert_eq!(m.eval(&x).unwrap(), expect);
    }

    #[test]
    fn plfun_scale_matches_pointwise(
        f in plfun_strategy(),
        cn in -6i64..=6,
        cd in 1i64..=3,
        xn in 0i64..=40,
        xd in 1i64..=4
    ) {
        let c = Rat::new(cn, cd);
        let x = Rat::new(xn, xd);
        prop_assert_eq!(f.scale(&c).eval(&x).unwrap(), f.eval(&x).unwrap() * c);
    }

    #[test]
    fn plfun_max_upper_bound_and_canonical(f in plfun_strategy(), g in plfun_strategy()) {
        let m = f.max(&g);
        // canonical: no adjacent equal slopes
        let mut slopes: Vec<Rat> = m.pieces.iter().map(|p| p.slope.clone()).collect();
        slopes.push(m.final_slope.clone());
        for w in slopes.windows(2) {
            prop_assert_ne!(&w[0], &w[1]);
        }
        let mut bps = m.breakpoints();
        bps.sort();
        prop_assert_eq!(&bps, &m.breakpoints());
    }

    #[test]
    fn laurent_json_round_trip(f in laurent_strategy()) {
        let json = serde_json::to_string(&f).unwrap();
        let back: LaurentVal = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(f, back);
    }

    #[test]
    fn plfun_json_round_trip(f in plfun_strategy()) {
        let json = serde_json::to_string(&f).unwrap();
        let back: PLFun = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(f, back);
    }
}

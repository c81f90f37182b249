use core::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use poncelet_core::confrac::{
    expand_rational, gap_inequality_holds, k_epsilon, remainder_series, second_order_bound, Rational,
};
use poncelet_core::geometry::{poncelet_map_analytic, poncelet_map_geometric, twist_map, AngleState};
use poncelet_core::twist::{period_grid, separation_alpha, twist_margin, uniform_grid};
use poncelet_core::{
    member, rotation_number, ArnoldFamily, CircleLift, LiftPoint, PonceletConfig, PonceletFamily, Reversed,
    FIBONACCI_RECIPROCAL_SUM,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twist_map_lattice_equivariance(x in -3.0..3.0f64, y in -3.0..3.0f64, c in 0.0..0.6f64) {
        let cfg = PonceletConfig::new(1.0, c, 0.0).unwrap();
        let base = twist_map(LiftPoint::new(x, y), &cfg);
        let dx = twist_map(LiftPoint::new(x + 1.0, y), &cfg);
        let dy = twist_map(LiftPoint::new(x, y + 1.0), &cfg);
        prop_assert!((dx.x - base.x + 1.0).abs() < 1e-12);
        prop_assert!((dx.y - base.y + 4.0).abs() < 1e-11);
        prop_assert!((dy.x - base.x - 1.0).abs() < 1e-12);
        prop_assert!((dy.y - base.y - 3.0).abs() < 1e-11);
    }

    #[test]
    fn analytic_and_geometric_maps_agree(theta in 0.0..TAU, c in 0.0..0.45f64, frac in 0.0..1.0f64) {
        let t = frac * (1.0 - c);
        let cfg = PonceletConfig::new(1.0, c, t).unwrap();
        let first = poncelet_map_geometric(theta, &cfg).unwrap();
        let second = poncelet_map_geometric(first.theta, &cfg).unwrap();
        let analytic = poncelet_map_analytic(AngleState::new(theta, first.phi), &cfg).state;
        let d_theta = poncelet_core::geometry::circular_distance(analytic.theta, first.theta, TAU);
        let d_phi = poncelet_core::geometry::circular_distance(analytic.phi, second.phi, PI);
        prop_assert!(d_theta < 1e-9 && d_phi < 1e-9, "{d_theta:e} {d_phi:e}");
    }

    #[test]
    fn conjugation_preserves_rotation(shift in 0.0..1.0f64, k in 0.0..0.9f64, a in -0.8..0.8f64) {
        let g = move |x: f64| x + shift + k / TAU * libm::sin(TAU * x);
        let h = move |x: f64| x + a / TAU * libm::sin(TAU * x);
        let h_inv = move |y: f64| {
            let (mut lo, mut hi) = (y - 1.0, y + 1.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if h(mid) < y { lo = mid } else { hi = mid }
            }
            0.5 * (lo + hi)
        };
        let conj = move |x: f64| h_inv(g(h(x)));
        let r1 = rotation_number(&g, 0.0, 1e-4).unwrap();
        let r2 = rotation_number(&conj, 0.0, 1e-4).unwrap();
        prop_assert!((r1.value - r2.value).abs() <= r1.error_radius + r2.error_radius + 1e-9);
    }

    #[test]
    fn comparison_of_ordered_lifts(s1 in 0.0..1.0f64, gap in 0.0..0.3f64, k in 0.0..0.9f64) {
        let g1 = move |x: f64| x + s1 + k / TAU * libm::sin(TAU * x);
        let g2 = move |x: f64| g1(x) + gap;
        let r1 = rotation_number(&g1, 0.0, 1e-4).unwrap();
        let r2 = rotation_number(&g2, 0.0, 1e-4).unwrap();
        prop_assert!(r1.value <= r2.value + r1.error_radius + r2.error_radius);
    }

    #[test]
    fn rigid_error_bound_is_sound(alpha in -2.0..2.0f64) {
        let g = move |x: f64| x + alpha;
        let est = rotation_number(&g, 0.0, 1e-5).unwrap();
        prop_assert!((est.value - alpha).abs() <= est.error_radius + 1e-12);
    }

    #[test]
    fn convergent_determinant_and_bound(num in 1i64..1_000_000, den in 1i64..1_000_000) {
        let x = Rational::from_integers(num, den).unwrap();
        let exp = expand_rational(&x, 64);
        prop_assert!(exp.complete);
        let exact = BigRational::new(BigInt::from(num), BigInt::from(den));
        for n in 1..exp.convergents.len() {
            let (a, b) = (&exp.convergents[n - 1], &exp.convergents[n]);
            let det = &b.p * &a.q - &a.p * &b.q;
            let expected = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(det, expected);
            // |x - p_{n-1}/q_{n-1}| <= 1/(q_{n-1} q_n), strict unless x is the next convergent
            let err = (&exact - BigRational::new(a.p.clone(), a.q.clone())).abs();
            let bound = BigRational::new(BigInt::one(), &a.q * &b.q);
            prop_assert!(err <= bound);
        }
    }

    #[test]
    fn remainders_bounded_and_chained(x in 1e-6..1.0f64) {
        let Ok(recs) = remainder_series(x, 25) else { return Ok(()); };
        for r in &recs {
            prop_assert!(r.within_bound(), "n = {} R = {}", r.n, r.remainder);
        }
        for w in recs.windows(2) {
            // log(q_{n+1}/q_n) = -log T^n(x) + R(n, x) - R(n+1, x)
            let log_tn = w[1].gauss_sum - w[0].gauss_sum;
            let lhs = w[1].log_qn - w[0].log_qn;
            let rhs = -log_tn + w[0].remainder - w[1].remainder;
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn gap_inequality_matches_big_rational(p in 1i64..10_000, q in 1i64..10_000, pd in 1i64..10_000, qd in 1i64..10_000, eps in 0.05..0.95f64) {
        let excess = poncelet_core::Convergent { p: BigInt::from(p), q: BigInt::from(q) };
        let defect = poncelet_core::Convergent { p: BigInt::from(pd), q: BigInt::from(qd) };
        let k = k_epsilon(eps, FIBONACCI_RECIPROCAL_SUM);
        let kr = BigRational::from_float(k).unwrap();
        let lhs = BigRational::new(BigInt::from(p), BigInt::from(q)) - BigRational::new(BigInt::from(pd), BigInt::from(qd));
        let s = BigRational::new(BigInt::one(), BigInt::from(q)) + BigRational::new(BigInt::one(), BigInt::from(qd));
        prop_assert_eq!(gap_inequality_holds(&excess, &defect, k), lhs >= kr * &s * &s);
    }

    #[test]
    fn k_epsilon_below_limit(eps in 1e-9..0.999f64) {
        let f = FIBONACCI_RECIPROCAL_SUM;
        prop_assert!(k_epsilon(eps, f) < second_order_bound(1.0, f));
        prop_assert!(k_epsilon(eps, f) > k_epsilon((eps + 1.0) / 2.0, f));
    }

    #[test]
    fn margin_gives_separation(t1 in 0.0..0.9f64, dt in 0.001..0.1f64, k in 0.0..1.0f64) {
        let fam = ArnoldFamily::new(k).unwrap();
        let m = twist_margin(&fam, &uniform_grid(0.0, 1.0, 5), &period_grid(16)).unwrap().m;
        let t2 = (t1 + dt).min(1.0);
        let a = separation_alpha(&member(fam, t1), &member(fam, t2), &period_grid(64)).unwrap();
        prop_assert!(a >= m * (t2 - t1) * (1.0 - 1e-12));
    }
}

#[test]
fn concentric_strictly_decreasing_at_irrationals() {
    let fam = PonceletFamily::new(1.0, 0.0).unwrap();
    for (t1, t2) in [(0.3, 0.31), (0.1, 0.1001), (0.62, 0.9)] {
        let r1 = rotation_number(&member(fam, t1), 0.0, 1e-6).unwrap();
        let r2 = rotation_number(&member(fam, t2), 0.0, 1e-6).unwrap();
        assert!(r1.lower() > r2.upper(), "t1 = {t1}");
    }
}

#[test]
fn margin_separates_reversed_poncelet() {
    let fam = Reversed(PonceletFamily::new(1.0, 0.3).unwrap());
    let m = twist_margin(&fam, &uniform_grid(-0.7, 0.0, 15), &period_grid(32)).unwrap().m;
    assert!(m > 0.0);
    for (s1, s2) in [(-0.7, -0.6), (-0.35, -0.3), (-0.1, 0.0)] {
        let a = separation_alpha(&member(fam, s1), &member(fam, s2), &period_grid(256)).unwrap();
        assert!(a >= m * (s2 - s1) * (1.0 - 1e-6), "{s1} {s2}");
    }
}

#[test]
fn gauss_orbit_visits_one_half() {
    use poncelet_core::confrac::gauss_map;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    // The float orbit loses the true orbit after ~40 steps; restart it often
    // so the statistic stays meaningful.
    let mut hits = 0usize;
    let mut x: f64 = rng.gen_range(0.0..1.0);
    for i in 0..100_000 {
        if i % 30 == 0 || x == 0.0 {
            x = rng.gen_range(0.0..1.0);
        }
        x = gauss_map(x);
        if (x - 0.5).abs() < 0.05 {
            hits += 1;
        }
    }
    assert!(hits > 0);
}

#[test]
fn lifts_of_invariant_circles_are_degree_one() {
    use poncelet_core::rotation::check_lift;
    for c in [0.0, 0.2, 0.4] {
        let fam = PonceletFamily::new(1.0, c).unwrap();
        for t in [0.0, 0.1, 0.3, 0.5] {
            check_lift(&member(fam, t)).unwrap();
            let circle = poncelet_core::InvariantCircle::new(fam.config(t).unwrap());
            for i in 0..16 {
                let x = i as f64 / 16.0;
                let via_map = circle.circle_lift(x).unwrap();
                assert!((via_map - member(fam, t).apply(x)).abs() < 1e-12);
            }
        }
    }
}

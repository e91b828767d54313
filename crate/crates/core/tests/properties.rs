//! Randomized properties of the algebra, geometry, grading and harness layers.

use jacobi_chain::algebra::rational::q;
use jacobi_chain::algebra::{divide_by_binomial_power, ExactPoly, Exps, Q, Ring, TruncSeries};
use jacobi_chain::geometry::{support_polygons, Shape};
use jacobi_chain::grading::{apply_phi, len_of, trapezoid_shape_check, w_decompose, Direction, Extended, Phi, ShapeKind};
use jacobi_chain::harness::generate::{random_t3, GenOptions};
use jacobi_chain::harness::pipeline::PipelineOptions;
use jacobi_chain::harness::{
    check_conditions, dc_dsc_check, generate_examples, jacobian_bracket, remainder_pipeline, valqui_check, DcMode, GenKind,
};
use jacobi_chain::magnus::params::index_set;
use jacobi_chain::magnus::quotient::{reduce_pk, Binomial};
use jacobi_chain::magnus::solver::{solve_magnus, verify_magnus};
use jacobi_chain::tschirnhausen::{corner_region, decompose_principal, minimize_remainder, support_inside, Tschirnhausen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn xy() -> Ring {
    Ring::new(&["x", "y"], 1)
}

/// Sparse polynomial in `x, y` with exponents in `lo..=hi`.
fn poly(lo: i64, hi: i64, max_terms: usize) -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(((lo..=hi), (lo..=hi), -9i64..=9), 0..=max_terms)
        .prop_map(|ts| xy().from_terms(ts.into_iter().map(|(a, b, c)| (Exps::from_slice(&[a, b]), q(c)))))
}

fn binomial() -> impl Strategy<Value = Binomial> {
    prop_oneof![Just(Binomial::XPlusOne), Just(Binomial::XPlusY)]
}

fn all_directions() -> [Direction; 3] {
    [Direction::Y, Direction::Total, Direction::X]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_distributes(f in poly(0, 4, 6), g in poly(0, 4, 6), h in poly(0, 4, 6)) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
    }

    #[test]
    fn substitution_is_multiplicative(f in poly(0, 3, 5), g in poly(0, 3, 5), s in poly(0, 2, 3), t in poly(0, 2, 3)) {
        let images = [s, t];
        let lhs = (&f * &g).substitute(&images).unwrap();
        let rhs = &f.substitute(&images).unwrap() * &g.substitute(&images).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_division_recovers_cofactor(f in poly(0, 4, 6), k in 0i64..5, plus_y in any::<bool>()) {
        let l = xy().parse(if plus_y { "x + y" } else { "x + 1" }).unwrap();
        let prod = &f * &l.pow(k as u64);
        prop_assert_eq!(divide_by_binomial_power(&prod, &l, k).unwrap(), Some(f));
    }

    #[test]
    fn integer_frac_power_is_pow(
        coeffs in prop::collection::vec(poly(0, 2, 3), 1..6),
        p in 0i64..5,
    ) {
        let mut coeffs = coeffs;
        coeffs[0] = xy().one();
        let order = coeffs.len();
        let s = TruncSeries::new(&xy().zero(), coeffs, order);
        let via_root = s.frac_power(&q(p)).unwrap();
        let direct = s.pow(p as u64);
        prop_assert_eq!(via_root.coeffs(), direct.coeffs());
    }

    #[test]
    fn newton_polygon_sits_in_its_origin_hull(f in poly(0, 6, 8)) {
        let (_, n, n0) = support_polygons(&f).unwrap();
        prop_assert!(n.is_subset_of(&n0));
        for v in n0.vertices() {
            prop_assert!(*v.0.numer() >= 0.into() && *v.1.numer() >= 0.into());
        }
    }

    #[test]
    fn graded_pieces_recompose(f in poly(-3, 5, 8)) {
        for w in all_directions() {
            let d = w_decompose(&f, w).unwrap();
            prop_assert_eq!(d.recompose(), f.clone());
        }
    }

    #[test]
    fn unimodular_change_preserves_bracket(f in poly(0, 3, 5), g in poly(0, 3, 5)) {
        let direct = apply_phi(&jacobian_bracket(&f, &g).unwrap(), Phi::Zw).unwrap();
        let moved = jacobian_bracket(&apply_phi(&f, Phi::Zw).unwrap(), &apply_phi(&g, Phi::Zw).unwrap()).unwrap();
        prop_assert_eq!(direct, moved);
        prop_assert_eq!(apply_phi(&apply_phi(&f, Phi::Zw).unwrap(), Phi::ZwInv).unwrap(), f);
    }

    #[test]
    fn bracket_is_bilinear_and_alternating(f in poly(0, 3, 5), g in poly(0, 3, 5), h in poly(0, 3, 5)) {
        let br = |a: &ExactPoly, b: &ExactPoly| jacobian_bracket(a, b).unwrap();
        prop_assert_eq!(br(&(&f + &g), &h), &br(&f, &h) + &br(&g, &h));
        prop_assert_eq!(br(&f, &g), br(&g, &f).neg());
        prop_assert!(br(&f, &f).is_zero());
    }

    #[test]
    fn t3_images_have_trapezoid_shape(seed in any::<u64>(), big in any::<bool>()) {
        let (m, n) = if big { (4, 8) } else { (2, 4) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = apply_phi(&random_t3(m, n, &mut rng, 0.5, false), Phi::ZwInv).unwrap();
        let v = trapezoid_shape_check(&f, m, n, ShapeKind::Both).unwrap();
        prop_assert!(v.agree());
        prop_assert!(v.polygon_side);
    }

    #[test]
    fn divisible_homogeneous_pieces_are_long(g in prop::collection::vec(-5i64..=5, 1..5), l in 0u64..5, j in 0i64..4) {
        // h = (x+1)^l · g(x) · y^j is (0,1)-homogeneous and divisible by (x+1)^l.
        let gx = xy().from_terms(g.iter().enumerate().map(|(k, c)| (Exps::from_slice(&[k as i64, j]), q(*c))));
        let h = &gx * &xy().parse("x + 1").unwrap().pow(l);
        match len_of(&h, Direction::Y).unwrap() {
            Extended::NegInf => prop_assert!(h.is_zero()),
            Extended::Fin(len) => prop_assert!(len >= l as i64),
        }
    }

    #[test]
    fn decomposition_recomposes(e in poly(0, 2, 3), coeffs in prop::collection::vec(-4i64..=4, 1..4)) {
        prop_assume!(e.terms().any(|(ex, _)| ex[0] + ex[1] > 0));
        // Monic with vanishing subleading coefficient.
        let mut cs: Vec<Q> = coeffs.into_iter().map(q).collect();
        cs.push(q(0));
        cs.push(q(1));
        let alpha = Tschirnhausen::new(cs).unwrap();
        let qp = alpha.eval(&e);
        if let Ok(d) = decompose_principal(&qp) {
            prop_assert_eq!(d.alpha.eval(&d.e), qp);
        }
    }

    #[test]
    fn quotient_map_is_a_homomorphism(
        f in poly(-2, 3, 4),
        g in poly(-2, 3, 4),
        which in binomial(),
        k in 1i64..=5,
    ) {
        let p = |h: &ExactPoly| reduce_pk(h, which, k).unwrap();
        prop_assert_eq!(p(&(&f * &g)), p(&f).mul(&p(&g)).unwrap());
        prop_assert_eq!(p(&(&f + &g)), p(&f).add(&p(&g)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn remainder_reassembles(seed in any::<u64>()) {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let opts = GenOptions { seed, ..Default::default() };
        let f = generate_examples(&shape, GenKind::Condition123F, &opts).unwrap().f;
        let r = minimize_remainder(&f, &shape, false).unwrap();
        prop_assert_eq!(&r.alpha_circ.eval(&r.e_circ) + &r.f_circ, f);
        prop_assert!(support_inside(&r.f_circ, &corner_region(&shape)).is_empty());
    }

    #[test]
    fn magnus_constants_reproduce_every_piece(seed in any::<u64>(), c1 in -3i64..=3, c0 in -3i64..=3) {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let opts = GenOptions { seed, ..Default::default() };
        let f = generate_examples(&shape, GenKind::Condition123F, &opts).unwrap().f;
        let g = &(&f.pow(2) + &f.scale(&q(c1))) + &xy().constant(q(c0));
        let m = solve_magnus(&f, &g, Direction::Total).unwrap();
        prop_assert_eq!(verify_magnus(&f, &g, Direction::Total, &m).unwrap(), None);
    }

    #[test]
    fn zero_remainder_satisfies_every_dc_check(seed in 0u64..1000) {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let opts = GenOptions { seed, density: 1.0, ..Default::default() };
        let ex = generate_examples(&shape, GenKind::BracketZeroPair, &opts).unwrap();
        let r = minimize_remainder(&ex.f, &shape, true).unwrap();
        prop_assert!(r.f_circ.is_zero());
        for i in index_set(&shape) {
            for mode in [DcMode::Dc, DcMode::Dsc] {
                let rep = dc_dsc_check(&r.f_circ, &shape, r.delta as i64, i, mode, true).unwrap();
                prop_assert!(rep.holds, "i = {}: {:?}", i, rep.witnesses);
                prop_assert!(rep.witnesses.is_empty());
            }
        }
    }

    #[test]
    fn pipeline_is_deterministic(seed in 0u64..1000) {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let ex = generate_examples(&shape, GenKind::BracketZeroPair, &GenOptions { seed, density: 1.0, ..Default::default() }).unwrap();
        let g = ex.g.unwrap();
        let opts = PipelineOptions::default();
        let a = remainder_pipeline(&ex.f, &g, &shape, &opts).unwrap().to_json().to_string();
        let b = remainder_pipeline(&ex.f, &g, &shape, &opts).unwrap().to_json().to_string();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn common_root_pairs_leave_no_remainder(p in prop::collection::vec(-3i64..=3, 0..3), lam in -3i64..=3) {
        // C = x + p(y); G = C^2 and F = C^3 + λC.
        let c = &xy().parse("x").unwrap() + &xy().from_terms(p.iter().enumerate().map(|(k, v)| (Exps::from_slice(&[0, k as i64]), q(*v))));
        let g = c.pow(2);
        let f = &c.pow(3) + &c.scale(&q(lam));
        let rep = valqui_check(&f, &g, 2, 3, -6).unwrap();
        prop_assert!(rep.p_series.is_zero(), "P = {:?}", rep.p);
        prop_assert!(rep.root_matches);
        prop_assert!(jacobian_bracket(&f, &g).unwrap().is_zero());
    }
}

#[test]
fn bracket_zero_pairs_meet_all_conditions() {
    for (a, b, m, n) in [(2, 3, 2, 4), (2, 3, 4, 8), (3, 4, 3, 6)] {
        let shape = Shape::new(a, b, m, n).unwrap();
        for seed in 0..50 {
            let ex = generate_examples(&shape, GenKind::BracketZeroPair, &GenOptions { seed, ..Default::default() }).unwrap();
            let g = ex.g.expect("pairs carry G");
            let rep = check_conditions(&ex.f, &g, &shape).unwrap();
            assert!(rep.all_hold(), "{shape:?} seed {seed}: {:?}", rep.first_failure());
            assert!(jacobian_bracket(&ex.f, &g).unwrap().is_zero());
        }
    }
}

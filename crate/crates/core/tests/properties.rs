mod common;

use common::*;
use deltagroup::groebner::s_polynomial;
use deltagroup::{
    analyze, chain_from_right_factorization, compare_quotient_gauges, dimension_polynomial,
    dimension_polynomial_m2, gauge_of, gauge_of_ideal, hilbert_count, load_spec, member, op_add,
    op_mul, parse_operator, principal_generator, refine, right_reduce, same_ideal,
    verify_factorization, Engine, FieldSpec, Gauge, LeftIdeal, MultiIndex, OreOperator, Staircase,
    TermOrder,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xyz_field() -> FieldSpec {
    load_spec("derivations: dx, dy, dz\nvariables: x, y, z").unwrap()
}

fn field_for(m: usize) -> FieldSpec {
    match m {
        1 => x_field(),
        2 => xy_field(),
        _ => xyz_field(),
    }
}

fn staircase_strategy(m: usize) -> impl Strategy<Value = Staircase> {
    prop::collection::vec(prop::collection::vec(0u32..=5, m), 0..=4)
        .prop_map(move |pts| Staircase::new(m, pts.into_iter().map(MultiIndex::new)))
}

fn any_staircase() -> impl Strategy<Value = Staircase> {
    (1usize..=3).prop_flat_map(staircase_strategy)
}

fn reversed(ord: &TermOrder) -> TermOrder {
    match ord {
        TermOrder::GradedLex { precedence } => TermOrder::GradedLex {
            precedence: precedence.iter().rev().copied().collect(),
        },
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_derivations(seed in any::<u64>(), tan in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = if tan { tan_field() } else { xy_field() };
        let a = random_element(&mut rng, &spec);
        let b = random_element(&mut rng, &spec);
        for i in 0..spec.num_derivations() {
            prop_assert_eq!(
                spec.derive(&(&a * &b), i),
                &(&spec.derive(&a, i) * &b) + &(&a * &spec.derive(&b, i))
            );
            prop_assert_eq!(spec.derive(&(&a + &b), i), &spec.derive(&a, i) + &spec.derive(&b, i));
            for j in 0..i {
                prop_assert_eq!(
                    spec.derive(&spec.derive(&a, i), j),
                    spec.derive(&spec.derive(&a, j), i)
                );
            }
        }
    }

    #[test]
    fn field_canonical_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = tan_field();
        let a = random_element(&mut rng, &spec);
        let b = random_element(&mut rng, &spec);
        prop_assert_eq!(a.normalize(), a.clone());
        prop_assert_eq!(spec.parse_element(&spec.render(&a)).unwrap(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
            let sum = &a + &b;
            prop_assert_eq!(&(&sum - &b), &a);
        }
    }

    #[test]
    fn operator_ring_laws(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(field_for(m));
        let ord = grlex(&r);
        let f = random_operator(&mut rng, &r, 3, 2, false);
        let g = random_operator(&mut rng, &r, 3, 2, false);
        let h = random_operator(&mut rng, &r, 2, 2, true);

        let fg = op_mul(&f, &g).unwrap();
        prop_assert_eq!(op_mul(&fg, &h).unwrap(), op_mul(&f, &op_mul(&g, &h).unwrap()).unwrap());
        prop_assert_eq!(
            op_mul(&f, &op_add(&g, &h).unwrap()).unwrap(),
            &fg + &op_mul(&f, &h).unwrap()
        );
        prop_assert_eq!(
            op_mul(&op_add(&f, &g).unwrap(), &h).unwrap(),
            &op_mul(&f, &h).unwrap() + &op_mul(&g, &h).unwrap()
        );

        for o in [ord.clone(), reversed(&ord)] {
            let (a, ca) = f.leading_term(&o).unwrap();
            let (b, cb) = g.leading_term(&o).unwrap();
            let (ab, cab) = fg.leading_term(&o).unwrap();
            prop_assert_eq!(ab, &a + &b);
            prop_assert_eq!(cab, &ca * &cb);
        }
        prop_assert!(verify_factorization(&op_mul(&fg, &h).unwrap(), &[f, g, h]).unwrap());
    }

    #[test]
    fn reduction_certificate(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(field_for(m));
        let ord = grlex(&r);
        let f = random_operator(&mut rng, &r, 4, 4, true);
        let divisors: Vec<OreOperator> = (0..rng.gen_range(1..=3))
            .map(|_| random_operator(&mut rng, &r, 2, 2, false))
            .collect();
        let red = right_reduce(&f, &divisors, &ord).unwrap();
        let mut back = red.remainder.clone();
        for (q, d) in red.cofactors.iter().zip(&divisors) {
            back = op_add(&back, &op_mul(q, d).unwrap()).unwrap();
        }
        prop_assert_eq!(back, f);
        let heads: Vec<MultiIndex> = divisors.iter().map(|d| d.leading_index(&ord).unwrap()).collect();
        for (idx, _) in red.remainder.terms() {
            prop_assert!(heads.iter().all(|h| !h.divides(idx)));
        }
    }

    #[test]
    fn euclidean_division_in_one_derivation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(x_field());
        let ord = grlex(&r);
        let f = random_operator(&mut rng, &r, 5, 4, true);
        let g = random_operator(&mut rng, &r, 3, 3, true);
        prop_assume!(f.order() >= g.order());
        let red = right_reduce(&f, std::slice::from_ref(&g), &ord).unwrap();
        prop_assert!(red.remainder.order() < g.order());
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>(), m in 1usize..=3, rational in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(field_for(m));
        let ord = grlex(&r);
        let f = random_operator(&mut rng, &r, 3, 4, rational);
        prop_assert_eq!(parse_operator(&f.render(&ord), &r).unwrap(), f.clone());
        let other = reversed(&ord);
        prop_assert_eq!(parse_operator(&f.render(&other), &r).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn buchberger_certificate_and_idempotence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let ord = grlex(&r);
        let e = Engine::new(ord.clone());
        let gens: Vec<OreOperator> = (0..rng.gen_range(1..=3))
            .map(|_| random_operator(&mut rng, &r, 2, 2, false))
            .collect();
        let b = e.buchberger(&gens).unwrap();
        for g in &gens {
            prop_assert!(member(g, &b));
        }
        let el = b.elements();
        for i in 0..el.len() {
            for j in i + 1..el.len() {
                let s = s_polynomial(&el[i], &el[j], &ord).unwrap();
                prop_assert!(b.normal_form(&s).is_zero());
            }
        }
        let again = e.buchberger(el).unwrap();
        prop_assert_eq!(again.elements(), el);

        let e2 = Engine::new(reversed(&ord));
        let b2 = e2.buchberger(&gens).unwrap();
        let probe = random_operator(&mut rng, &r, 2, 2, false);
        let inside = op_mul(&probe, &gens[0]).unwrap();
        prop_assert!(member(&inside, &b) && member(&inside, &b2));
        prop_assert_eq!(member(&probe, &b), member(&probe, &b2));
    }

    #[test]
    fn principal_ideal_basis_is_monic_generator(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(field_for(m));
        let ord = grlex(&r);
        let f = random_operator(&mut rng, &r, 3, 3, true);
        let b = Engine::new(ord.clone()).buchberger(std::slice::from_ref(&f)).unwrap();
        prop_assert_eq!(b.elements(), &[f.monic(&ord)][..]);
    }

    #[test]
    fn intersection_soundness(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let e = Engine::new(grlex(&r));
        let f = random_operator(&mut rng, &r, 1, 2, false);
        let g = random_operator(&mut rng, &r, 1, 2, false);
        let i = LeftIdeal::principal(f.clone());
        let j = LeftIdeal::principal(g.clone());
        let cap = e.ideal_intersect(&i, &j).unwrap();
        let bi = e.basis(&i).unwrap();
        let bj = e.basis(&j).unwrap();
        for h in cap.elements() {
            prop_assert!(member(h, &bi) && member(h, &bj));
        }
        // Completeness on a nested pair: ⟨h·f⟩ ⊆ ⟨f⟩, so the intersection holds a·h·f.
        let h = random_operator(&mut rng, &r, 1, 1, false);
        let a = random_operator(&mut rng, &r, 1, 1, false);
        let hf = op_mul(&h, &f).unwrap();
        let nested = e.ideal_intersect(&i, &LeftIdeal::principal(hf.clone())).unwrap();
        prop_assert!(member(&op_mul(&a, &hf).unwrap(), &nested));
        prop_assert!(same_ideal(&nested, &e.basis(&LeftIdeal::principal(hf)).unwrap()));
    }

    #[test]
    fn gcrd_and_lclm_are_principal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(x_field());
        let e = Engine::new(grlex(&r));
        let f = random_operator(&mut rng, &r, 2, 3, false);
        let g = random_operator(&mut rng, &r, 2, 3, false);
        let i = LeftIdeal::principal(f.clone());
        let j = LeftIdeal::principal(g.clone());
        let gcrd = principal_generator(&e.ideal_sum(&i, &j).unwrap());
        let lclm = principal_generator(&e.ideal_intersect(&i, &j).unwrap());
        prop_assert!(gcrd.is_some() && lclm.is_some());
        let (gcrd, lclm) = (gcrd.unwrap(), lclm.unwrap());
        prop_assert_eq!(gcrd.order() + lclm.order(), f.order() + g.order());
        prop_assert!(e.check_right_factor(&i, &gcrd).unwrap());
        prop_assert!(e.check_right_factor(&LeftIdeal::principal(lclm), &f).unwrap());
    }
}

proptest! {
    #[test]
    fn hilbert_count_matches_polynomial(st in any_staircase()) {
        let w = dimension_polynomial(&st);
        for s in 0..=20u64 {
            let count = hilbert_count(&st, s) as i64;
            prop_assert_eq!(count, inclusion_exclusion(&st, s));
            if s >= w.valid_from {
                prop_assert_eq!(w.eval(s as i64), count);
            }
        }
        for s in w.valid_from..=w.valid_from + 10 {
            prop_assert_eq!(w.eval(s as i64), hilbert_count(&st, s) as i64);
        }
    }

    #[test]
    fn polynomial_is_integer_valued(st in any_staircase()) {
        let w = dimension_polynomial(&st);
        let coeffs = w.monomial_coefficients();
        for s in 0..=20i64 {
            let mut v = num_rational::BigRational::from_integer(0.into());
            for c in coeffs.iter().rev() {
                v = v * num_rational::BigRational::from_integer(s.into()) + c;
            }
            prop_assert!(v.is_integer());
            prop_assert_eq!(v.to_integer(), w.eval(s).into());
        }
    }

    #[test]
    fn closed_form_agrees_in_two_derivations(st in staircase_strategy(2)) {
        let general = dimension_polynomial(&st);
        let closed = dimension_polynomial_m2(&st).unwrap();
        let from = general.valid_from.max(closed.valid_from);
        for s in from..from + 20 {
            prop_assert_eq!(closed.eval(s as i64), general.eval(s as i64));
        }
        prop_assert_eq!(gauge_of(&closed), gauge_of(&general));
    }

    #[test]
    fn enlarging_the_staircase_shrinks_counts(
        st in staircase_strategy(2),
        extra in prop::collection::vec(0u32..=5, 2),
    ) {
        let mut pts = st.leading_exponents().to_vec();
        pts.push(MultiIndex::new(extra));
        let bigger = Staircase::new(2, pts);
        for s in 0..=15u64 {
            prop_assert!(hilbert_count(&bigger, s) <= hilbert_count(&st, s));
        }
    }

    #[test]
    fn single_operator_gauge(d in 1u32..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let lead = op(&r, &format!("dx^{d}"));
        let tail = random_operator(&mut rng, &r, d - 1, 3, true);
        let f = &lead + &tail;
        let g = gauge_of_ideal(&LeftIdeal::principal(f), &grlex(&r)).unwrap();
        prop_assert_eq!(g, Gauge::new(1, d as i64));
    }
}

fn first_order_chain(
    rng: &mut ChaCha8Rng,
    r: &std::sync::Arc<deltagroup::OreRing>,
    e: &Engine,
    n: usize,
) -> deltagroup::SeriesReport {
    let factors: Vec<OreOperator> = (0..n)
        .map(|_| {
            let base = if rng.gen_bool(0.5) {
                op(r, "dx")
            } else {
                op(r, "dy")
            };
            &base + &random_operator(rng, r, 0, 1, false)
        })
        .collect();
    analyze(&chain_from_right_factorization(&factors, e).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factor_chains_telescope(seed in any::<u64>(), len in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let ord = grlex(&r);
        let e = Engine::new(ord.clone());
        let factors: Vec<OreOperator> = (0..len)
            .map(|_| &op(&r, "dx") + &random_operator(&mut rng, &r, 0, 1, false))
            .collect();
        let chain = chain_from_right_factorization(&factors, &e).unwrap();
        for w in chain.ideals().windows(2) {
            for g in w[0].elements() {
                prop_assert!(member(g, &w[1]));
            }
        }
        let report = analyze(&chain).unwrap();
        prop_assert!(report.constant_tau);
        let total: i64 = report.exact_quotients().iter().map(|q| q.a_tau).sum();
        prop_assert_eq!(total, report.gauges()[0].a_tau);
        prop_assert_eq!(total, len as i64);
    }

    #[test]
    fn compare_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let e = Engine::new(grlex(&r));
        let a = first_order_chain(&mut rng, &r, &e, 2);
        let n = rng.gen_range(1..=3);
        let b = first_order_chain(&mut rng, &r, &e, n);
        prop_assert_eq!(compare_quotient_gauges(&a, &a).verdict, deltagroup::Verdict::Consistent);
        prop_assert_eq!(compare_quotient_gauges(&a, &b).verdict, compare_quotient_gauges(&b, &a).verdict);
    }

    #[test]
    fn refinement_chains_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(xy_field());
        let e = Engine::new(grlex(&r));
        let p = &op(&r, "dx") + &random_operator(&mut rng, &r, 0, 1, false);
        let q = &op(&r, "dx + x*dy") + &random_operator(&mut rng, &r, 0, 1, false);
        let a = chain_from_right_factorization(&[p.clone(), q.clone()], &e).unwrap();
        let top = op_mul(&p, &q).unwrap();
        let b = deltagroup::Chain::from_ideals(
            &[LeftIdeal::principal(top), LeftIdeal::unit(&r)],
            &e,
        )
        .unwrap();
        let rf = refine(&a, &b, &e).unwrap();
        for c in [&rf.first, &rf.second, &rf.first_coarse, &rf.second_coarse] {
            prop_assert!(c.validate().is_ok());
            prop_assert!(same_ideal(&c.ideals()[0], &a.ideals()[0]));
            prop_assert!(c.ideals().last().unwrap().is_unit());
            prop_assert!(analyze(c).is_ok());
        }
    }

    #[test]
    fn sum_then_intersect_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring(x_field());
        let e = Engine::new(grlex(&r));
        let f = LeftIdeal::principal(random_operator(&mut rng, &r, 2, 2, false));
        let g = LeftIdeal::principal(random_operator(&mut rng, &r, 2, 2, false));
        let s = deltagroup::series::group_sum(&f, &g, &e).unwrap();
        let back = deltagroup::series::group_intersect(&LeftIdeal::from(&s), &f, &e).unwrap();
        prop_assert!(same_ideal(&back, &e.basis(&f).unwrap()));
    }
}

use gsl_core::arith::unipoly::parse_rat;
use gsl_core::specialize::satisfies;
use gsl_core::*;
use proptest::prelude::*;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

#[test]
fn custom_cover_from_json() {
    let text = r#"{"name": "y2_t2_plus_1", "group_order": 2, "P": [["-1", "0", "-1"], [], ["1"]], "assert_regular_galois": true}"#;
    let c = Cover::from_json(text).unwrap();
    assert_eq!(c.branch_points.len(), 1);
    let bp = &c.branch_points[0];
    assert_eq!(bp.location.degree(), 2);
    assert_eq!(c.riemann_hurwitz_sum(), 2);
    // t^2 + 1 has roots mod 5, none mod 7
    assert_eq!(find_frobenius_primes(&c, 0, 1, 20).unwrap().iter().map(|x| x.0).collect::<Vec<_>>(), vec![5, 13, 17]);
    let r = verify_specialization(&c, &rat(2), 5);
    assert_eq!(r.meeting.as_ref().unwrap().a_p, 1);
    assert_eq!(r.verdict, Verdict::Match);
    assert_eq!(r.oracle_ef(), Some((2, 1)));
}

#[test]
fn approximation_feeds_verification() {
    let constraints = vec![
        ApproxConstraint { p: 5, target: rat(0), n: 1 },
        ApproxConstraint { p: 7, target: rat(1), n: 2 },
    ];
    let t0 = approximate_specialization_point(&constraints).unwrap();
    for c in &constraints {
        assert!(gsl_core::specialize::satisfies(&t0, c).unwrap());
    }
    let v4 = Cover::bundled("v4_sqrt_t_sqrt_t_minus_1").unwrap();
    let at5 = verify_specialization(&v4, &t0, 5);
    let at7 = verify_specialization(&v4, &t0, 7);
    assert_eq!(at5.meeting.as_ref().unwrap().branch, 0);
    assert_eq!(at7.meeting.as_ref().unwrap().branch, 1);
    assert!(at5.verdict == Verdict::Match || at5.verdict == Verdict::PartialMatch);
    assert!(at7.verdict == Verdict::Match || at7.verdict == Verdict::PartialMatch);
}

#[test]
fn infinity_chart_constraint() {
    let c = ApproxConstraint { p: 3, target: parse_rat("1/3").unwrap(), n: 2 };
    let t0 = approximate_specialization_point(std::slice::from_ref(&c)).unwrap();
    assert!(satisfies(&t0, &c).unwrap());
    let c2 = Cover::bundled("c2_sqrt_t").unwrap();
    let r = verify_specialization(&c2, &t0, 3);
    assert!(r.meeting.as_ref().unwrap().location.is_infinity());
}

#[test]
fn report_json_shape() {
    let c3 = Cover::bundled("c3_shanks").unwrap();
    let reports = sweep(&c3, &gsl_core::specialize::integer_points(0, 3), &[7, 13], 2);
    let lines: Vec<serde_json::Value> = reports.iter().map(|r| serde_json::to_value(r).unwrap()).collect();
    assert!(lines.windows(2).all(|w| w[0]["p"].as_u64() <= w[1]["p"].as_u64()));
    for l in &lines {
        assert!(l["t0"].is_string());
        assert!(l["verdict"].is_string());
    }
}

#[test]
fn oracle_matches_quadratic_classes() {
    for p in [3u64, 5, 7, 11] {
        for d in [p as i64, 2 * p as i64, 3 * p as i64, 1, 2, 3] {
            let f = UniPoly::from_ints(&[-d, 0, 1]);
            let Ok(t) = oracle(&f, p) else { continue };
            let class = quadratic_local_class(&rat(d), p).unwrap();
            let ramified = matches!(class, QuadClass::P | QuadClass::UP);
            assert_eq!(!t.is_unramified(), ramified, "d={d} p={p}");
            assert_eq!(t.factors.len() == 1 && t.factors[0].count == 2, class == QuadClass::One);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inertia_is_predicted_at_meetings(beta in 1i64..40, k in 1u32..3, p_idx in 0usize..5) {
        let p = [5u64, 7, 11, 13, 17][p_idx];
        prop_assume!(beta % p as i64 != 0);
        let c3 = Cover::bundled("c3_shanks").unwrap();
        let roots = find_frobenius_primes(&c3, 0, 1, 20).unwrap();
        let Some(&(q, a)) = roots.iter().find(|x| x.0 == p) else { return Ok(()) };
        let t0 = rat(a as i64 + beta * (q as i64).pow(k));
        let r = verify_specialization(&c3, &t0, q);
        let pred = predict_inertia(&c3, &t0, q).unwrap();
        if let Some((e, _)) = r.oracle_ef() {
            prop_assert_eq!(e, pred.order);
        }
        prop_assert!(r.verdict != Verdict::Mismatch);
    }
}

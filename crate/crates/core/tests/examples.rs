//! Worked examples on the bundled fixtures, each compared with a pointwise oracle.

use stardyn::covrep::{build_example_1_3, build_strict_rep, BasisId, RepOperator, SparseVector};
use stardyn::fixtures::{partial_map, Fixture};
use stardyn::transfer::{
    canonical_nondegenerate_transfer, complete_transfer, completeness_report, conditional_expectation, is_nondegenerate,
    is_transfer, LinearMap,
};
use stardyn::unitize::unitize_kernel;
use stardyn::{Element, Error, ExtPoint, ExtendedSystem, GaussRat, PartialMap, StarField, Tower};

type Q = GaussRat;

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn half(v: i64) -> Q {
    Q::from_ratio(v, 2)
}

fn values(e: &Element, n: usize) -> Vec<Q> {
    (0..n).map(|x| e.value(x).clone()).collect()
}

/// `δ(a)(x) = a(α(x))` on `Δ₁`, zero elsewhere.
fn delta_oracle(m: &PartialMap, a: &[Q]) -> Vec<Q> {
    (0..m.len()).map(|x| m.image(x).map_or(q(0), |y| a[y].clone())).collect()
}

fn elem(m: &PartialMap, v: &[i64]) -> Element {
    let (alg, _) = m.induced_endomorphism::<Q>();
    alg.from_values(&v.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn induced_endomorphisms_match_the_pointwise_formula() {
    for f in Fixture::ALL {
        let m = partial_map(f);
        let (alg, d) = m.induced_endomorphism::<Q>();
        for a in alg.basis::<Q>() {
            let v = values(&a, m.len());
            assert_eq!(values(&d.apply(&a), m.len()), delta_oracle(&m, &v));
        }
    }
    let m = partial_map(Fixture::Shift3);
    let (_, d) = m.induced_endomorphism::<Q>();
    assert_eq!(values(&d.apply(&elem(&m, &[2, 3, 5])), 3), vec![q(3), q(5), q(0)]);
    let m = partial_map(Fixture::Const3);
    let (_, d) = m.induced_endomorphism::<Q>();
    assert_eq!(values(&d.apply(&elem(&m, &[2, 3, 5])), 3), vec![q(2), q(2), q(2)]);
}

#[test]
fn unit_powers_kernel_units_and_classification() {
    let m = partial_map(Fixture::Shift3);
    let (_, d) = m.induced_endomorphism::<Q>();
    let powers: Vec<Vec<Q>> = (1..=3).map(|n| values(d.power_of_unit(n).element(), 3)).collect();
    assert_eq!(powers, vec![vec![q(1), q(1), q(0)], vec![q(1), q(0), q(0)], vec![q(0); 3]]);
    assert_eq!(values(d.kernel_unit().element(), 3), vec![q(1), q(0), q(0)]);
    let c = d.classify().unwrap();
    assert!(!c.mono && c.complete && c.hereditary_range);

    let (_, d) = partial_map(Fixture::Const3).induced_endomorphism::<Q>();
    assert_eq!(values(d.kernel_unit().element(), 3), vec![q(0), q(1), q(1)]);
    assert!(!d.classify().unwrap().complete);

    let (_, d) = partial_map(Fixture::Id).induced_endomorphism::<Q>();
    let c = d.classify().unwrap();
    assert!(c.mono && c.epi && c.auto && c.complete);
}

#[test]
fn merge_transfer_candidates() {
    let m = partial_map(Fixture::Merge);
    let (alg, d) = m.induced_endomorphism::<Q>();
    let from = |f: fn(&[Q]) -> [Q; 3]| {
        LinearMap::from_fn(&alg, |a| alg.from_values(&f(&values(a, 3))).unwrap())
    };
    let averaged = from(|a| [(a[0].clone() + a[1].clone()) * half(1), a[2].clone(), q(0)]);
    let right = from(|a| [a[1].clone(), a[2].clone(), q(0)]);
    let wrong = from(|a| [a[2].clone(), a[0].clone(), q(0)]);
    assert!(is_transfer(&d, &averaged).unwrap());
    assert!(is_transfer(&d, &right).unwrap());
    assert!(!is_transfer(&d, &wrong).unwrap());
    assert!(is_nondegenerate(&d, &averaged).unwrap());
    assert_eq!(canonical_nondegenerate_transfer(&d).unwrap(), averaged);

    let e = conditional_expectation(&d, &averaged).unwrap();
    let a = elem(&m, &[2, 3, 5]);
    assert_eq!(values(&e.apply(&a), 3), vec![half(5), half(5), q(5)]);
    assert!(matches!(complete_transfer(&d), Err(Error::NotComplete { .. })));
}

#[test]
fn shift_complete_transfer() {
    let m = partial_map(Fixture::Shift3);
    let (_, d) = m.induced_endomorphism::<Q>();
    let tau = complete_transfer(&d).unwrap();
    assert_eq!(values(&tau.apply(&elem(&m, &[2, 3, 5])), 3), vec![q(0), q(2), q(3)]);
    let r = completeness_report(&d).unwrap();
    assert!(r.i && r.ii && r.iii && r.iv);
    assert_eq!(values(r.p.unwrap().element(), 3), vec![q(0), q(1), q(1)]);
    let r = completeness_report(&partial_map(Fixture::Const3).induced_endomorphism::<Q>().1).unwrap();
    assert!(!r.i && !r.ii && !r.iii && !r.iv);
}

#[test]
fn unitization_dimensions() {
    for f in [Fixture::Const3, Fixture::Merge, Fixture::Id] {
        let (alg, d) = partial_map(f).induced_endomorphism::<Q>();
        let u = unitize_kernel(&d).unwrap();
        assert_eq!(u.aplus.dim(), alg.dim());
        assert!(u.embed_is_bijective());
    }
}

#[test]
fn tower_dimensions_and_coordinates() {
    let dims = |f, levels| {
        let t = Tower::new(partial_map(f).induced_endomorphism::<Q>().1).unwrap();
        (0..=levels).map(|n| t.level_algebra(n).dim()).collect::<Vec<_>>()
    };
    assert_eq!(dims(Fixture::Merge, 5), (3..=8).collect::<Vec<_>>());
    assert_eq!(dims(Fixture::Const3, 3), vec![3, 5, 7, 9]);
    assert_eq!(dims(Fixture::Shift3, 5), vec![3; 6]);

    let m = partial_map(Fixture::Merge);
    let t = Tower::new(m.induced_endomorphism::<Q>().1).unwrap();
    let a = elem(&m, &[2, 3, 5]);
    let up = t.embed_level(&t.inject(&a));
    assert_eq!(values(&up.coords()[0], 3), vec![q(0), q(0), q(5)]);
    assert_eq!(values(&up.coords()[1], 3), vec![q(2), q(2), q(3)]);
    assert_eq!(t.reduce(&up), t.inject(&a));
    let s = t.ext_transfer(&t.inject(&a));
    assert_eq!(s.coords().len(), 2);
    assert!(s.coords()[0].is_zero());
    assert_eq!(s.coords()[1], a);
    assert!(t.equal(&t.ext_delta(&s), &t.inject(&a)));
    assert_eq!(t.from_transfer_sum(&[t.algebra().zero(), a.clone()]).unwrap(), s);
}

#[test]
fn merge_extension_points() {
    let sys: ExtendedSystem<Q> = ExtendedSystem::new(partial_map(Fixture::Merge));
    let pts = sys.enumerate_points(3);
    let paths: Vec<ExtPoint> =
        [vec![2], vec![1, 2], vec![0, 1, 2], vec![0, 0, 1, 2]].into_iter().map(ExtPoint::Path).collect();
    assert_eq!(pts[..4], paths[..]);
    assert_eq!(pts[4], ExtPoint::Cycle { cycle: 0, phase: 0 });
    assert_eq!(pts.len(), 5);
    assert_eq!(sys.alpha_tilde(&paths[1]).unwrap(), paths[2]);
    assert!(matches!(sys.alpha_tilde_inv(&paths[0]), Err(Error::Domain(_))));

    let m = partial_map(Fixture::Merge);
    let a = elem(&m, &[2, 3, 5]);
    let t = sys.tower();
    assert_eq!(sys.evaluate(&t.inject(&a), &paths[1]), q(3));
    assert_eq!(sys.evaluate(&t.ext_transfer(&t.inject(&a)), &paths[1]), q(5));
    assert_eq!(sys.functional_sequence(&paths[1], &a, 3), vec![q(3), q(5), q(0), q(0)]);
    assert_eq!(sys.functional_sequence(&pts[4], &a, 3), vec![q(2); 4]);
    assert_eq!(sys.level_spectrum(1).len(), 4);

    let sys: ExtendedSystem<Q> = ExtendedSystem::new(partial_map(Fixture::Const3));
    assert_eq!(sys.level_spectrum(2).len(), 7);
    assert_eq!(sys.enumerate_points(2).len(), 7);
}

#[test]
fn representation_examples() {
    let m = partial_map(Fixture::Merge);
    let ctx = build_strict_rep::<Q>(&m, 5).unwrap();
    let t = ctx.system().tower();
    let a = elem(&m, &[2, 3, 5]);
    let e12 = SparseVector::basis(BasisId::Ext(ExtPoint::Path(vec![1, 2])));
    let b = RepOperator::Tower(t.from_transfer_sum(&[t.algebra().zero(), a.clone()]).unwrap());
    let lhs = ctx.apply(&b, &e12).unwrap();
    let u = RepOperator::Shift;
    let us = RepOperator::ShiftAdjoint;
    let rhs = ctx.apply(&us, &ctx.apply(&RepOperator::Alg(a), &ctx.apply(&u, &e12).unwrap()).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.coefficient(&BasisId::Ext(ExtPoint::Path(vec![1, 2]))), q(5));
    assert!(ctx.structural_checks().unwrap().strict);

    let m = partial_map(Fixture::Shift3);
    let ctx = build_example_1_3::<Q>(&m, 4).unwrap();
    let one = RepOperator::Alg(elem(&m, &[1, 1, 1]));
    for x in 0..3 {
        for n in 0..=2 {
            let e = SparseVector::basis(BasisId::Pair { x, n });
            let pe = ctx.apply(&one, &e).unwrap();
            let gap = pe.sub(&ctx.apply(&us, &ctx.apply(&u, &pe).unwrap()).unwrap());
            let expected_identity = n == 0 || !m.in_range(x);
            assert_eq!(gap == e, expected_identity, "x={x} n={n}");
        }
    }
    let s = ctx.structural_checks().unwrap();
    assert!(!s.strict && s.gap_witness.is_some());
}

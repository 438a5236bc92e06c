use num_rational::BigRational;
use num_traits::Zero;

use super::*;
use crate::fincat::{objects_up_to, CategoryKind, Quiver};
use crate::qlinalg::{Field, FiniteField};

const SEQ: Execution = Execution::Sequential;

fn f(q: usize) -> Field {
    FiniteField::with_order(q).unwrap()
}

fn vect(q: usize) -> CategorySpec {
    CategorySpec::vect(f(q))
}

fn a2(q: usize) -> CategorySpec {
    CategorySpec::quiver(f(q), Quiver::a2()).unwrap()
}

fn slice(q: usize, target: usize) -> CategorySpec {
    CategorySpec { field: f(q), kind: CategoryKind::Slice { target } }
}

fn frac(n: u128, d: u128) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cardinality_at(g: &ExtGroupoid, total: usize) -> BigRational {
    (0..g.len() as u32)
        .filter(|&x| g.ambient_dims(x).iter().sum::<usize>() == total)
        .map(|x| frac(1, g.groupoid().aut(x).order()))
        .fold(BigRational::zero(), |a, b| a + b)
}

#[test]
fn s0_is_a_point_and_s1_is_the_core() {
    let s0 = waldhausen_groupoid(&vect(2), 0, 3, SEQ).unwrap();
    assert_eq!(s0.len(), 1);
    assert_eq!(s0.groupoid().components[0].label, "pt");
    let s1 = waldhausen_groupoid(&vect(2), 1, 2, SEQ).unwrap();
    let orders: Vec<u128> = (0..3).map(|x| s1.groupoid().aut(x).order()).collect();
    assert_eq!(orders, vec![1, 1, 6]);
}

#[test]
fn s2_grade_one_one_has_borel_automorphisms() {
    let s2 = waldhausen_groupoid(&vect(2), 2, 2, SEQ).unwrap();
    let x = (0..s2.len() as u32).find(|&x| s2.factor_grades(x)[0] == vec![vec![1], vec![1]]).unwrap();
    assert_eq!(s2.groupoid().aut(x).order(), 2);
    assert!(waldhausen_groupoid(&vect(2), MAX_LEVEL + 1, 1, SEQ).is_err());
}

/// Groupoid of short exact sequences of `A_2` representations, counted with
/// the Euler form: `sum q^{-<W,U>} / (|Aut U| |Aut W|)`.
#[test]
fn s2_cardinality_matches_euler_form_count() {
    let q = 2u128;
    let spec = a2(2);
    let bound = 3;
    let s2 = waldhausen_groupoid(&spec, 2, bound, SEQ).unwrap();
    let objs = objects_up_to(&spec, bound).unwrap();
    let euler =
        |w: &[usize], u: &[usize]| w[0] as i64 * u[0] as i64 + w[1] as i64 * u[1] as i64 - w[0] as i64 * u[1] as i64;
    for total in 0..=bound {
        let mut want = BigRational::zero();
        for u in &objs {
            for w in &objs {
                if u.total_dim() + w.total_dim() != total {
                    continue;
                }
                let e = euler(&w.grade, &u.grade);
                let qe = if e >= 0 { frac(1, q.pow(e as u32)) } else { frac(q.pow((-e) as u32), 1) };
                want += qe / frac(u.aut_order * w.aut_order, 1);
            }
        }
        assert_eq!(cardinality_at(&s2, total), want, "total {total}");
    }
}

#[test]
fn spine_is_a_product_of_s1() {
    let spec = a2(2);
    let bound = 3;
    let spine = spine_groupoid(&spec, 2, bound, SEQ).unwrap();
    let objs = objects_up_to(&spec, bound).unwrap();
    let mut want_pairs = 0;
    let mut want_card = BigRational::zero();
    for x in &objs {
        for y in &objs {
            if x.total_dim() + y.total_dim() <= bound {
                want_pairs += 1;
                want_card += frac(1, x.aut_order * y.aut_order);
            }
        }
    }
    assert_eq!(spine.len(), want_pairs);
    assert_eq!(spine.groupoid().cardinality(), want_card);
}

#[test]
fn restrictions_compose_up_to_the_transporter_cell() {
    let spec = vect(2);
    let (s3, s2, s1) = (
        waldhausen_groupoid(&spec, 3, 3, SEQ).unwrap(),
        waldhausen_groupoid(&spec, 2, 3, SEQ).unwrap(),
        waldhausen_groupoid(&spec, 1, 3, SEQ).unwrap(),
    );
    let a = restriction_functor(&s3, &s2, &[0, 1, 3], SEQ).unwrap();
    let b = restriction_functor(&s2, &s1, &[1, 2], SEQ).unwrap();
    let c = restriction_functor(&s3, &s1, &[1, 3], SEQ).unwrap();
    let ab = a.functor.then(&b.functor).unwrap();
    assert_eq!(ab.objects, c.functor.objects);
    let cell = path_witness(&[&a, &b], &[&c]).unwrap();
    assert!(cell.is_natural(&ab, &c.functor).unwrap());
    ab.validate().unwrap();
    assert!(restriction_functor(&s3, &s1, &[], SEQ).is_err());
    assert!(restriction_functor(&s3, &s1, &[2, 1], SEQ).is_err());
}

#[test]
fn mid_and_end_maps_on_s2() {
    // d_1: S_2 -> S_1 keeps the middle object, d_0 and d_2 the ends
    let spec = vect(2);
    let s2 = waldhausen_groupoid(&spec, 2, 2, SEQ).unwrap();
    let s1 = waldhausen_groupoid(&spec, 1, 2, SEQ).unwrap();
    for (verts, pick) in [([0usize, 2usize], 2usize), ([0, 1], 0), ([1, 2], 1)] {
        let m = restriction_functor(&s2, &s1, &verts, SEQ).unwrap();
        for x in 0..s2.len() as u32 {
            let g = &s2.factor_grades(x)[0];
            let want = if pick == 2 { g[0][0] + g[1][0] } else { g[pick][0] };
            assert_eq!(s1.factor_grades(m.functor.objects[x as usize])[0][0][0], want);
        }
        m.functor.validate().unwrap();
    }
}

#[test]
fn parabolic_cardinalities_of_s3() {
    // S_3 of Vect at grade (a, b, c) is one point with the parabolic group
    let spec = vect(3);
    let s3 = waldhausen_groupoid(&spec, 3, 3, SEQ).unwrap();
    let gl = |n: u32| -> u128 { (0..n).map(|i| 3u128.pow(n) - 3u128.pow(i)).product() };
    for x in 0..s3.len() as u32 {
        let g: Vec<u32> = s3.factor_grades(x)[0].iter().map(|d| d[0] as u32).collect();
        let (a, b, c) = (g[0], g[1], g[2]);
        let unipotent = 3u128.pow(a * b + a * c + b * c);
        assert_eq!(s3.groupoid().aut(x).order(), gl(a) * gl(b) * gl(c) * unipotent);
    }
    assert_eq!(s3.len(), 20);
}

#[test]
fn two_segal_for_vect() {
    for i in 0..=1 {
        let r = two_segal_condition(&vect(2), 3, i, 3, SEQ).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.condition, format!("C^3_{i}"));
        assert!(r.graded_results.iter().all(|g| g.pi0_lhs == g.pi0_rhs));
    }
    assert!(two_segal_condition(&vect(2), 2, 0, 2, SEQ).is_err());
    assert!(two_segal_condition(&vect(2), 3, 2, 2, SEQ).is_err());
}

#[test]
fn two_segal_for_a2() {
    for i in 0..=1 {
        let r = two_segal_condition(&a2(2), 3, i, 2, SEQ).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let r = two_segal_condition(&a2(2), 4, 2, 2, SEQ).unwrap();
    assert!(r.pass);
}

#[test]
fn removing_both_ends_is_not_a_pullback() {
    let sq = segal_square(&vect(2), 3, 0, 3, 2, SEQ).unwrap();
    let r = sq.report(&vect(2), 2).unwrap();
    assert_eq!(r.condition, "C^3_{0,3}");
    assert!(!r.pass);
    assert!(segal_square(&vect(2), 3, 2, 1, 2, SEQ).is_err());
}

#[test]
fn polygonal_decompositions_of_the_pentagon() {
    let spec = vect(2);
    let decomps: [Vec<Vec<usize>>; 4] = [
        vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4]],
        vec![vec![0, 1, 2, 3], vec![0, 3, 4]],
        vec![vec![0, 1, 2], vec![0, 2, 4], vec![2, 3, 4]],
        vec![vec![1, 2, 3], vec![0, 1, 3, 4]],
    ];
    for d in &decomps {
        let p = polygonal_fiber_product(&spec, 4, d, 3, SEQ).unwrap();
        assert!(p.equivalence, "{d:?}");
        assert_eq!(p.in_bound.len(), waldhausen_groupoid(&spec, 4, 3, SEQ).unwrap().len());
    }
    let bad =
        [vec![vec![0, 1, 2], vec![2, 3, 4]], vec![vec![0, 1, 2], vec![0, 2, 4]], vec![vec![0, 1, 2, 3, 4], vec![]]];
    for d in &bad {
        assert!(polygonal_fiber_product(&spec, 4, d, 3, SEQ).is_err(), "{d:?}");
    }
}

#[test]
fn slice_is_a_pullback_not_a_product() {
    let spec = slice(2, 1);
    let d = slice_decomposition(&spec, 2, 2, SEQ).unwrap();
    assert!(d.pullback_matches, "{:?}", d.pullback);
    assert!(!d.product_matches);
    assert_eq!(d.product_cardinalities[2], (2, "11/6".to_string(), "17/6".to_string()));
    let d1 = slice_decomposition(&spec, 1, 2, SEQ).unwrap();
    assert!(d1.product_matches && d1.pullback_matches);
    assert!(slice_decomposition(&vect(2), 2, 2, SEQ).is_err());
}

#[test]
fn sequential_and_parallel_agree() {
    let a = two_segal_condition(&a2(2), 3, 0, 2, Execution::Parallel).unwrap();
    let b = two_segal_condition(&a2(2), 3, 0, 2, SEQ).unwrap();
    assert_eq!(a.graded_results, b.graded_results);
}

#[test]
fn non_adjacent_pair_at_n4() {
    let sq = segal_square(&vect(2), 4, 0, 3, 3, SEQ).unwrap();
    assert!(sq.report(&vect(2), 3).unwrap().pass);
}

#[test]
fn corr0_square_matches_c3_conditions() {
    let r = corr0_pipeline(&vect(2), 3, 3, SEQ).unwrap();
    assert!(r.commutative, "{r:?}");
    let names: Vec<&str> = r.conditions.iter().map(|c| c.corner.as_str()).collect();
    assert_eq!(names, ["(1,0)", "(0,1)"]);
    assert_eq!(r.conditions[0].conditions, ["C^3_1"]);
    assert_eq!(r.conditions[1].conditions, ["C^3_0"]);
    assert!(r.conditions.iter().all(|c| c.matches && c.corner_pullback));
}

#[test]
fn corr0_cube_for_n4() {
    let r = corr0_pipeline(&vect(2), 4, 3, SEQ).unwrap();
    assert!(r.commutative, "{r:?}");
    assert_eq!(r.conditions[1].conditions, ["C^4_0", "C^4_2"]);
    let (odd, even) = (&r.corners[0], &r.corners[1]);
    assert_eq!(odd.faces.len(), 6);
    assert!(odd.faces.iter().all(|f| f.pullback));
    // four side faces of the even corner carry C^3 and C^4 conditions; the
    // remaining pair is not a pullback and is not needed
    let bad: Vec<usize> = even.faces.iter().filter(|f| !f.pullback).map(|f| f.axis).collect();
    assert_eq!(bad, [1, 1]);
}

#[test]
fn corr0_negative_control_fails() {
    let r = corr0_negative_control(&vect(2), 3, SEQ).unwrap();
    assert!(!r.commutative);
    assert!(r.conditions.iter().any(|c| !c.matches));
    assert!(corr0_pipeline(&vect(2), 2, 3, SEQ).is_err());
}

#[test]
fn correspondence_faces_are_natural() {
    let ext = correspondence_cube(&vect(2), &crate::simpset::assoc_cube(3).unwrap(), 2, SEQ).unwrap();
    assert_eq!(ext.cube.entries.len(), 9);
    for (c, g) in &ext.entries {
        assert_eq!(g.complex(), ext.grid.entry(c).unwrap());
    }
    assert_eq!(ext.cube.faces.len(), 4);
    for v in [[false, false], [true, true], [true, false], [false, true]] {
        ext.cube.corner(&v).unwrap().check_commutes().unwrap();
    }
}

#[test]
fn corr0_four_cube_for_n5_by_reduction() {
    let r = corr0_pipeline(&vect(2), 5, 2, Execution::Parallel).unwrap();
    assert!(r.commutative);
    assert_eq!(r.conditions[0].conditions, ["C^5_1", "C^5_3"]);
    assert!(r.conditions.iter().all(|c| c.matches));
    assert!(corr0_pipeline(&vect(2), 6, 2, SEQ).is_err());
}

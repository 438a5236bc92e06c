use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::fincat::{objects_up_to, CategoryKind, CategorySpec, Quiver};
use crate::groupoid::{GroupoidFunctor, GroupoidSquare, SkeletalGroupoid};
use crate::par::Execution;
use crate::qlinalg::{gaussian_binomial, Field, FiniteField};
use crate::waldhausen::{negative_control_cube, segal_square};

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

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn line_count_products() {
    let h = HallAlgebra::new(&vect(2), 3, SEQ).unwrap();
    let p = h.product(&h.delta_of("1").unwrap(), &h.delta_of("1").unwrap()).unwrap();
    assert_eq!(p.to_string(), "3·[2]");
    let h3 = HallAlgebra::new(&vect(3), 2, SEQ).unwrap();
    let p = h3.product(&h3.delta_of("1").unwrap(), &h3.delta_of("1").unwrap()).unwrap();
    assert_eq!(p.coeff(h3.class("2").unwrap()), int(4));
    let p = h.product(&h.delta_of("0").unwrap(), &h.delta_of("3").unwrap()).unwrap();
    assert_eq!(p.to_string(), "[3]");
}

#[test]
fn unit_on_both_sides() {
    for spec in [vect(2), a2(2)] {
        let h = HallAlgebra::new(&spec, 3, SEQ).unwrap();
        let e = h.unit();
        for c in 0..h.space().len() as u32 {
            let d = h.delta(c).unwrap();
            assert_eq!(h.product(&e, &d).unwrap(), d);
            assert_eq!(h.product(&d, &e).unwrap(), d);
        }
    }
}

#[test]
fn pull_and_push_examples() {
    let h = HallAlgebra::new(&vect(2), 2, SEQ).unwrap();
    let (sub, quo, mid) = h.legs();
    let one = h.delta_of("1").unwrap();
    let ends = pull(&one, &sub.functor).unwrap().pointwise(&pull(&one, &quo.functor).unwrap()).unwrap();
    assert_eq!(ends.support_len(), 1);
    let (x, v) = ends.terms().next().unwrap();
    assert_eq!(*v, int(1));
    assert_eq!(h.s2().factor_grades(x)[0], vec![vec![1], vec![1]]);
    assert_eq!(
        push(&ends, &mid.functor).unwrap(),
        one.scale(&int(0)).add(&h.delta_of("2").unwrap().scale(&int(3))).unwrap()
    );

    let zero = HallElement::zero(h.space().clone());
    assert!(pull(&zero, &sub.functor).unwrap().is_zero());
    let id = GroupoidFunctor::identity(h.space().clone());
    let two = h.delta_of("2").unwrap();
    assert_eq!(pull(&two, &id).unwrap(), two);
    assert_eq!(push(&two, &id).unwrap(), two);

    let pt = Arc::new(SkeletalGroupoid::discrete(["pt"]));
    let to_pt =
        GroupoidFunctor { source: h.space().clone(), target: pt, objects: vec![0; h.space().len()], homs: None };
    let pushed = push(&two, &to_pt).unwrap();
    assert_eq!(pushed.coeff(0), BigRational::new(1.into(), 6.into()));
    assert!(pull(&two, &to_pt).is_err());
}

#[test]
fn oracle_examples() {
    let spec = vect(2);
    let objs = objects_up_to(&spec, 3).unwrap();
    let by = |d: usize| objs.iter().find(|o| o.grade == vec![d]).unwrap();
    assert_eq!(subobject_count_oracle(&spec, by(1), by(1), by(2)).unwrap(), 3);
    for v in 0..=3 {
        for w in 0..=3 {
            let want = u64::from(v == w);
            assert_eq!(subobject_count_oracle(&spec, by(0), by(w), by(v)).unwrap(), want);
        }
    }
    let spec3 = vect(3);
    let o3 = objects_up_to(&spec3, 2).unwrap();
    let by3 = |d: usize| o3.iter().find(|o| o.grade == vec![d]).unwrap();
    assert_eq!(subobject_count_oracle(&spec3, by3(1), by3(1), by3(2)).unwrap(), 4);
}

fn check_against_oracle(spec: &CategorySpec, bound: usize) {
    let h = HallAlgebra::new(spec, bound, SEQ).unwrap();
    let objs = objects_up_to(spec, bound).unwrap();
    let class = |o: &crate::fincat::IsoClass| h.class(&o.label).unwrap();
    for u in &objs {
        for w in &objs {
            if u.total_dim() + w.total_dim() > bound {
                continue;
            }
            let p = h.product(&h.delta(class(u)).unwrap(), &h.delta(class(w)).unwrap()).unwrap();
            assert!(p.all_integral());
            for v in &objs {
                let want = subobject_count_oracle(spec, u, w, v).unwrap();
                assert_eq!(p.coeff(class(v)), int(want as i64), "{} {} {}", u.label, w.label, v.label);
            }
        }
    }
}

#[test]
fn products_match_subobject_counts() {
    check_against_oracle(&vect(2), 3);
    check_against_oracle(&vect(3), 2);
    check_against_oracle(&a2(2), 2);
}

#[test]
fn a2_simple_products() {
    let h = HallAlgebra::new(&a2(2), 2, SEQ).unwrap();
    let (s0, s1) = (h.delta_of("[1,0]").unwrap(), h.delta_of("[0,1]").unwrap());
    // sub at the sink, quotient at the source: both the split and the
    // indecomposable extension
    let p = h.product(&s1, &s0).unwrap();
    assert_eq!(p.support_len(), 2);
    assert!(p.terms().all(|(_, c)| *c == int(1)));
    let p = h.product(&s0, &s1).unwrap();
    assert_eq!(p.support_len(), 1);
}

#[test]
fn associativity_on_deltas() {
    for (spec, bound) in [(vect(2), 4), (a2(2), 3)] {
        let h = HallAlgebra::new(&spec, bound, SEQ).unwrap();
        let n = h.space().len() as u32;
        let deg = |c: u32| h.s1().ambient_dims(c).iter().sum::<usize>();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if deg(a) + deg(b) + deg(c) > bound {
                        continue;
                    }
                    let (da, db, dc) = (h.delta(a).unwrap(), h.delta(b).unwrap(), h.delta(c).unwrap());
                    let left = h.product(&h.product(&da, &db).unwrap(), &dc).unwrap();
                    let right = h.product(&da, &h.product(&db, &dc).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}

#[test]
fn five_bracketings_agree() {
    let h = HallAlgebra::new(&vect(2), 4, SEQ).unwrap();
    let d = |l: &str| h.delta_of(l).unwrap();
    let m = |x: &HallElement, y: &HallElement| h.product(x, y).unwrap();
    let (a, b, c, e) = (d("1"), d("0"), d("2"), d("1"));
    let all = [
        m(&m(&m(&a, &b), &c), &e),
        m(&m(&a, &m(&b, &c)), &e),
        m(&m(&a, &b), &m(&c, &e)),
        m(&a, &m(&m(&b, &c), &e)),
        m(&a, &m(&b, &m(&c, &e))),
    ];
    assert!(all.windows(2).all(|w| w[0] == w[1]));
    // [4 choose 1][3 choose 2] = 15 * 7
    assert_eq!(all[0].coeff(h.class("4").unwrap()), int(105));
}

#[test]
fn symbolic_vect_matches_numeric() {
    for q in [2usize, 3] {
        let bound = if q == 2 { 4 } else { 3 };
        let h = HallAlgebra::new(&vect(q), bound, SEQ).unwrap();
        for n in 0..=bound {
            for k in 0..=(bound - n) {
                let sym = SymbolicVect::delta(n).product(&SymbolicVect::delta(k));
                assert_eq!(SymbolicVect::structure_constant(n, k), gaussian_binomial(n + k, n).unwrap());
                let num =
                    h.product(&h.delta_of(&n.to_string()).unwrap(), &h.delta_of(&k.to_string()).unwrap()).unwrap();
                let val = sym.eval(q as u64)[&(n + k)].clone();
                assert_eq!(num.coeff(h.class(&(n + k).to_string()).unwrap()), BigRational::from_integer(val));
            }
        }
    }
}

#[test]
fn table_is_canonical() {
    let h = HallAlgebra::new(&vect(2), 3, Execution::Parallel).unwrap();
    let t = h.table().unwrap();
    assert!(t.entries.contains(&TableEntry { u: "[1]".into(), w: "[1]".into(), v: "[2]".into(), coeff: "3".into() }));
    let again = HallAlgebra::new(&vect(2), 3, SEQ).unwrap().table().unwrap();
    assert_eq!(serde_json::to_string(&t).unwrap(), serde_json::to_string(&again).unwrap());
    assert!(h.product(&h.delta_of("2").unwrap(), &h.delta_of("2").unwrap()).is_err());
    assert!(h.class("7").is_err());
}

#[test]
fn beck_chevalley_on_pullbacks_only() {
    let h = HallAlgebra::new(&vect(2), 2, SEQ).unwrap();
    let id = GroupoidFunctor::identity(h.space().clone());
    let sq = GroupoidSquare::strict(id.clone(), id.clone(), id.clone(), id).unwrap();
    assert!(beck_chevalley_check(&sq).unwrap().holds);

    let seg = segal_square(&vect(2), 3, 1, 3, 3, SEQ).unwrap();
    let r = beck_chevalley_check(&seg.square).unwrap();
    assert!(r.applicable && r.holds && r.checked > 0);

    let bad = negative_control_cube(&vect(2), 3, SEQ).unwrap();
    let corner = bad.corner(&[true, false]).unwrap().square().unwrap();
    let r = beck_chevalley_check(&corner).unwrap();
    assert!(!r.applicable);
    assert!(!base_change_failures(&corner).unwrap().1.is_empty());
}

#[test]
fn module_action_over_a_line() {
    let h = HallAlgebra::new(&vect(2), 2, SEQ).unwrap();
    let m = HallModule::new(&h, 1, SEQ).unwrap();
    let n = m.space().len() as u32;
    for x in 0..n {
        let d = m.delta(x).unwrap();
        assert_eq!(m.act(&h.unit(), &d).unwrap(), d);
    }
    let slice = m.spec().clone();
    let base = objects_up_to(&vect(2), 2).unwrap();
    let objs = objects_up_to(&slice, 2).unwrap();
    for a in &base {
        for b in &objs {
            if a.total_dim() + b.total_dim() > 2 {
                continue;
            }
            let p = m
                .act(&h.delta(h.class(&a.label).unwrap()).unwrap(), &m.delta(m.class(&b.label).unwrap()).unwrap())
                .unwrap();
            for z in &objs {
                let want = slice_subobject_count(&slice, a, b, z).unwrap();
                assert_eq!(
                    p.coeff(m.class(&z.label).unwrap()),
                    int(want as i64),
                    "{} {} {}",
                    a.label,
                    b.label,
                    z.label
                );
            }
        }
    }
    let zero_map = m.class("0,zero").unwrap();
    let one = h.delta_of("1").unwrap();
    let r = m.act(&one, &m.delta(zero_map).unwrap()).unwrap();
    assert_eq!(r, m.delta(m.class("1,zero").unwrap()).unwrap());
    assert!(m.class("1,nonsense").is_err());
    assert!(HallModule::new(&HallAlgebra::new(&a2(2), 2, SEQ).unwrap(), 1, SEQ).is_err());
    assert_eq!(slice.kind, CategoryKind::Slice { target: 1 });
}

#[test]
fn module_action_is_associative() {
    let h = HallAlgebra::new(&vect(2), 2, SEQ).unwrap();
    let m = HallModule::new(&h, 1, SEQ).unwrap();
    let deg = |g: &SkeletalGroupoid, c: u32| g.components[c as usize].grade.iter().sum::<usize>();
    for a in 0..h.space().len() as u32 {
        for b in 0..h.space().len() as u32 {
            for x in 0..m.space().len() as u32 {
                if deg(h.space(), a) + deg(h.space(), b) + deg(m.space(), x) > 2 {
                    continue;
                }
                let (da, db, dx) = (h.delta(a).unwrap(), h.delta(b).unwrap(), m.delta(x).unwrap());
                let left = m.act(&h.product(&da, &db).unwrap(), &dx).unwrap();
                let right = m.act(&da, &m.act(&db, &dx).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_is_bilinear(xs in prop::collection::vec(-3i64..4, 4), ys in prop::collection::vec(-3i64..4, 4), s in -3i64..4) {
        let h = HallAlgebra::new(&vect(2), 3, SEQ).unwrap();
        let low: Vec<u32> = (0..h.space().len() as u32).filter(|&c| h.s1().ambient_dims(c)[0] <= 1).collect();
        let elem = |cs: &[i64]| HallElement::from_coeffs(h.space().clone(), low.iter().zip(cs).map(|(&c, &v)| (c, int(v)))).unwrap();
        let (f1, f2, g) = (elem(&xs[..2]), elem(&xs[2..]), elem(&ys[..2]));
        let lhs = h.product(&f1.scale(&int(s)).add(&f2).unwrap(), &g).unwrap();
        let rhs = h.product(&f1, &g).unwrap().scale(&int(s)).add(&h.product(&f2, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = f1.add(&f2).unwrap();
        prop_assert_eq!(sum.sub(&f2).unwrap(), f1);
    }
}

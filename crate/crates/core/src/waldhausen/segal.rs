//! 2-Segal squares, polygonal fiber products and the slice decomposition.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::ext::{path_witness, ExtGroupoid, ExtMap};
use super::{s_ext, waldhausen_groupoid};
use crate::error::{HallError, Result};
use crate::fincat::flags::restrict_grade;
use crate::fincat::{grade_label, CategoryKind, CategorySpec, FlagGrade};
use crate::groupoid::{two_fiber_product, GroupoidFunctor, GroupoidSquare, NatIso, SkeletalGroupoid};
use crate::par::Execution;

/// Comparison of one graded piece of `S_n` with the matching piece of a
/// fiber product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradeResult {
    pub grade: String,
    pub pi0_lhs: usize,
    pub pi0_rhs: usize,
    pub aut_match: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegalReport {
    pub condition: String,
    pub category: String,
    pub q: usize,
    pub bound: usize,
    pub graded_results: Vec<GradeResult>,
    pub pass: bool,
}

/// The square `S_n -> S_{n \ i}, S_{n \ j} -> S_{n \ {i, j}}` of restrictions.
#[derive(Debug, Clone)]
pub struct SegalSquare {
    pub n: usize,
    pub removed: (usize, usize),
    pub top: ExtMap,
    pub left: ExtMap,
    pub right: ExtMap,
    pub bottom: ExtMap,
    pub square: GroupoidSquare,
}

fn without(n: usize, drop: &[usize]) -> Vec<usize> {
    (0..=n).filter(|v| !drop.contains(v)).collect()
}

fn positions(inner: &[usize], outer: &[usize]) -> Vec<usize> {
    inner.iter().map(|v| outer.iter().position(|w| w == v).unwrap()).collect()
}

fn flatten(g: &FlagGrade) -> Vec<usize> {
    g.iter().flatten().copied().collect()
}

/// `F(alpha) = id` only for `alpha = id`, and the orders agree.
fn hom_is_iso(f: &GroupoidFunctor, x: u32) -> Result<bool> {
    let (ga, gb) = (f.source.aut(x), f.target.aut(f.objects[x as usize]));
    if ga.order() != gb.order() {
        return Ok(false);
    }
    let (Some(ga), Some(gb)) = (ga.group(), gb.group()) else {
        return Ok(true);
    };
    let id = gb.identity();
    Ok((0..ga.order() as u32).filter(|&a| f.hom(x, a).is_ok_and(|b| b == id)).count() == 1)
}

/// Per grade of the source: is `f` a bijection onto the target components
/// that carry the expected grade, with isomorphisms on automorphisms?
fn graded_comparison(
    source: &ExtGroupoid,
    target: &SkeletalGroupoid,
    f: &GroupoidFunctor,
    expected: impl Fn(&FlagGrade) -> Vec<usize>,
) -> Result<Vec<GradeResult>> {
    let mut by_grade: BTreeMap<Vec<usize>, (FlagGrade, Vec<u32>)> = BTreeMap::new();
    let mut order = Vec::new();
    for x in 0..source.len() as u32 {
        let g = source.factor_grades(x).concat();
        let key = flatten(&g);
        if !by_grade.contains_key(&key) {
            order.push(key.clone());
        }
        by_grade.entry(key).or_insert_with(|| (g, vec![])).1.push(x);
    }
    let mut rhs_by_grade: BTreeMap<&[usize], Vec<u32>> = BTreeMap::new();
    for (z, c) in target.components.iter().enumerate() {
        rhs_by_grade.entry(&c.grade).or_default().push(z as u32);
    }
    let mut out = Vec::new();
    for key in order {
        let (g, xs) = &by_grade[&key];
        let want = expected(g);
        let rhs = rhs_by_grade.get(want.as_slice()).cloned().unwrap_or_default();
        let mut lhs_auts: Vec<u128> = xs.iter().map(|&x| source.groupoid().aut(x).order()).collect();
        let mut rhs_auts: Vec<u128> = rhs.iter().map(|&z| target.aut(z).order()).collect();
        lhs_auts.sort_unstable();
        rhs_auts.sort_unstable();
        let mut images: Vec<u32> = xs.iter().map(|&x| f.objects[x as usize]).collect();
        images.sort_unstable();
        let bijective = images == rhs;
        let mut isos = true;
        for &x in xs {
            isos &= hom_is_iso(f, x)?;
        }
        out.push(GradeResult {
            grade: grade_label(g),
            pi0_lhs: xs.len(),
            pi0_rhs: rhs.len(),
            aut_match: lhs_auts == rhs_auts,
            pass: bijective && isos && lhs_auts == rhs_auts,
        });
    }
    Ok(out)
}

/// Builds `S_0, ..., S_n` once so that parallel legs share targets.
fn levels(spec: &CategorySpec, n: usize, bound: usize, exec: Execution) -> Result<Vec<Arc<ExtGroupoid>>> {
    (0..=n).map(|k| waldhausen_groupoid(spec, k, bound, exec)).collect()
}

/// The square of restrictions removing vertices `i < j` of `Δ^n`.
pub fn segal_square(
    spec: &CategorySpec,
    n: usize,
    i: usize,
    j: usize,
    bound: usize,
    exec: Execution,
) -> Result<SegalSquare> {
    if !(i < j && j <= n && n >= 2) {
        return Err(HallError::InvalidArgument(format!("cannot remove vertices {i} and {j} from Δ^{n}")));
    }
    let s = levels(spec, n, bound, exec)?;
    let (b, c, d) = (without(n, &[i]), without(n, &[j]), without(n, &[i, j]));
    let top = ExtMap::restriction(&s[n], &s[n - 1], &b, exec)?;
    let left = ExtMap::restriction(&s[n], &s[n - 1], &c, exec)?;
    let right = ExtMap::restriction(&s[n - 1], &s[n - 2], &positions(&d, &b), exec)?;
    let bottom = ExtMap::restriction(&s[n - 1], &s[n - 2], &positions(&d, &c), exec)?;
    let witness = path_witness(&[&top, &right], &[&left, &bottom])?;
    let square = GroupoidSquare {
        top: top.functor.clone(),
        left: left.functor.clone(),
        right: right.functor.clone(),
        bottom: bottom.functor.clone(),
        witness,
    };
    Ok(SegalSquare { n, removed: (i, j), top, left, right, bottom, square })
}

impl SegalSquare {
    /// Grade-by-grade comparison of `S_n` with the fiber product.
    pub fn report(&self, spec: &CategorySpec, bound: usize) -> Result<SegalReport> {
        let (i, j) = self.removed;
        let n = self.n;
        self.square.check_commutes()?;
        let fp = two_fiber_product(&self.square.right, &self.square.bottom)?;
        let um = fp.universal(&self.square.top, &self.square.left, &self.square.witness)?;
        let verts = spec.vertices();
        let (b, c) = (without(n, &[i]), without(n, &[j]));
        let graded = graded_comparison(self.top.source(), &fp.groupoid, &um.functor, |g| {
            let mut want = flatten(&restrict_grade(g, verts, &b));
            want.extend(flatten(&restrict_grade(g, verts, &c)));
            want
        })?;
        let condition = if j == i + 2 { format!("C^{n}_{i}") } else { format!("C^{n}_{{{i},{j}}}") };
        Ok(SegalReport {
            condition,
            category: spec.name(),
            q: spec.field.order(),
            bound,
            pass: graded.iter().all(|r| r.pass),
            graded_results: graded,
        })
    }
}

/// Checks that `S_n` is the fiber product of `S_{n \ i}` and `S_{n \ (i+2)}`
/// over `S_{n \ {i, i+2}}`, graded piece by graded piece up to `bound`.
pub fn two_segal_condition(
    spec: &CategorySpec,
    n: usize,
    i: usize,
    bound: usize,
    exec: Execution,
) -> Result<SegalReport> {
    if n < 3 || i + 2 > n {
        return Err(HallError::InvalidArgument(format!("C^{n}_{i} needs n >= 3 and 0 <= i <= n - 2")));
    }
    segal_square(spec, n, i, i + 2, bound, exec)?.report(spec, bound)
}

/// `S_{P_1} x_{S_{P_1 ∩ P_2}} S_{P_2} x ... ` for a polygonal decomposition
/// of the polygon on vertices `0..=n`, with the canonical map from `S_n`.
#[derive(Debug, Clone)]
pub struct PolygonalProduct {
    pub groupoid: Arc<SkeletalGroupoid>,
    pub canonical: GroupoidFunctor,
    /// Components whose underlying flag has total dimension within the bound.
    pub in_bound: Vec<u32>,
    pub equivalence: bool,
}

fn check_decomposition(n: usize, polygons: &[Vec<usize>]) -> Result<()> {
    let bad = |why: &str| Err(HallError::InvalidArgument(format!("not a polygonal decomposition: {why}")));
    if polygons.is_empty() {
        return bad("no polygons");
    }
    for p in polygons {
        if p.len() < 3 || p.windows(2).any(|w| w[0] >= w[1]) || p.iter().any(|&v| v > n) {
            return bad("polygons are increasing vertex lists with at least 3 vertices");
        }
    }
    if polygons.iter().map(|p| p.len() - 2).sum::<usize>() != n - 1 {
        return bad("polygon sizes do not add up");
    }
    for w in polygons.windows(2) {
        if w[0].iter().filter(|v| w[1].contains(v)).count() != 2 {
            return bad("consecutive polygons must share an edge");
        }
    }
    for v in 0..n {
        if !polygons.iter().any(|p| p.contains(&v) && p.contains(&(v + 1))) {
            return bad("a boundary edge is missing");
        }
    }
    Ok(())
}

pub fn polygonal_fiber_product(
    spec: &CategorySpec,
    n: usize,
    polygons: &[Vec<usize>],
    bound: usize,
    exec: Execution,
) -> Result<PolygonalProduct> {
    check_decomposition(n, polygons)?;
    let s = levels(spec, n, bound, exec)?;
    let sn = &s[n];
    let restr: Vec<ExtMap> =
        polygons.iter().map(|p| ExtMap::restriction(sn, &s[p.len() - 1], p, exec)).collect::<Result<_>>()?;

    let mut acc_fun = restr[0].functor.clone();
    let mut proj = GroupoidFunctor::identity(s[polygons[0].len() - 1].groupoid().clone());
    let mut eps = NatIso::identity(&restr[0].functor)?;
    // projections from the current product to every polygon so far
    let mut to_polys: Vec<GroupoidFunctor> = vec![proj.clone()];
    for k in 1..polygons.len() {
        let (prev, cur) = (&polygons[k - 1], &polygons[k]);
        let shared: Vec<usize> = prev.iter().copied().filter(|v| cur.contains(v)).collect();
        let se = &s[shared.len() - 1];
        let a = ExtMap::restriction(&s[prev.len() - 1], se, &positions(&shared, prev), exec)?;
        let b = ExtMap::restriction(&s[cur.len() - 1], se, &positions(&shared, cur), exec)?;
        let h = proj.then(&a.functor)?;
        let fp = two_fiber_product(&h, &b.functor)?;
        // a(eps^{-1}) then the 2-cell between the two restrictions to the shared edge
        let omega = path_witness(&[&restr[k - 1], &a], &[&restr[k], &b])?;
        let mut theta = Vec::with_capacity(sn.len());
        for x in 0..sn.len() as u32 {
            let y = restr[k - 1].functor.objects[x as usize];
            let e = se.groupoid().aut(a.functor.objects[y as usize]).require("polygonal product")?;
            let src = s[prev.len() - 1].groupoid().aut(y).require("polygonal product")?;
            let back = a.functor.hom(y, src.inv(eps.comps[x as usize]))?;
            theta.push(e.mul(omega.comps[x as usize], back));
        }
        let um = fp.universal(&acc_fun, &restr[k].functor, &NatIso { comps: theta })?;
        to_polys = to_polys.iter().map(|f| fp.p1.then(f)).collect::<Result<_>>()?;
        to_polys.push(fp.p2.clone());
        acc_fun = um.functor;
        proj = fp.p2.clone();
        eps = um.eps2;
    }

    let groupoid = acc_fun.target.clone();
    // underlying total dimension: each boundary edge is a block of some polygon
    let mut in_bound = Vec::new();
    for z in 0..groupoid.len() as u32 {
        let mut tot = 0;
        for v in 0..n {
            let k = polygons.iter().position(|p| p.contains(&v) && p.contains(&(v + 1))).unwrap();
            let comp = to_polys[k].objects[z as usize];
            let grade = s[polygons[k].len() - 1].factor_grades(comp).concat();
            let pos = polygons[k].iter().position(|&w| w == v).unwrap();
            tot += grade[pos].iter().sum::<usize>();
        }
        if tot <= bound {
            in_bound.push(z);
        }
    }
    let mut images: Vec<u32> = acc_fun.objects.clone();
    images.sort_unstable();
    let mut equivalence = images == in_bound;
    for x in 0..sn.len() as u32 {
        equivalence &= hom_is_iso(&acc_fun, x)?;
    }
    Ok(PolygonalProduct { groupoid, canonical: acc_fun, in_bound, equivalence })
}

/// The slice construction against two candidate decompositions: the product
/// `S_{n-1}(C) x S_1(C/V)` (compared by groupoid cardinality per total
/// dimension) and the fiber product `S_n(C) x_{S_1(C)} S_1(C/V)` over the top
/// quotient (compared grade by grade through the canonical functor).
#[derive(Debug, Clone, Serialize)]
pub struct SliceDecomposition {
    pub n: usize,
    pub bound: usize,
    /// `(total dimension, |S_n(C/V)|, |S_{n-1}(C) x S_1(C/V)|)` as fractions.
    pub product_cardinalities: Vec<(usize, String, String)>,
    pub product_matches: bool,
    pub pullback: Vec<GradeResult>,
    pub pullback_matches: bool,
}

pub fn slice_decomposition(spec: &CategorySpec, n: usize, bound: usize, exec: Execution) -> Result<SliceDecomposition> {
    let CategoryKind::Slice { .. } = spec.kind else {
        return Err(HallError::InvalidArgument(format!("{} is not a slice category", spec.name())));
    };
    if n == 0 {
        return Err(HallError::InvalidArgument("the slice decomposition starts at n = 1".into()));
    }
    let base = CategorySpec::vect(spec.field.clone());
    let sn_slice = waldhausen_groupoid(spec, n, bound, exec)?;
    let s1_slice = waldhausen_groupoid(spec, 1, bound, exec)?;
    let sn_base = waldhausen_groupoid(&base, n, bound, exec)?;
    let s1_base = waldhausen_groupoid(&base, 1, bound, exec)?;
    let sm_base = waldhausen_groupoid(&base, n - 1, bound, exec)?;

    let card = |g: &ExtGroupoid, t: usize| -> BigRational {
        let mut sum = BigRational::from_integer(0.into());
        for x in 0..g.len() as u32 {
            if g.ambient_dims(x).iter().sum::<usize>() == t {
                sum += BigRational::new(1.into(), g.groupoid().aut(x).order().into());
            }
        }
        sum
    };
    let mut product_cardinalities = Vec::new();
    let mut product_matches = true;
    for t in 0..=bound {
        let lhs = card(&sn_slice, t);
        let mut rhs = BigRational::from_integer(0.into());
        for a in 0..=t {
            rhs += card(&sm_base, a) * card(&s1_slice, t - a);
        }
        product_matches &= lhs == rhs;
        product_cardinalities.push((t, lhs.to_string(), rhs.to_string()));
    }

    let top_base = ExtMap::restriction(&sn_base, &s1_base, &[n - 1, n], exec)?;
    let forget = ExtMap::forget_slice(&s1_slice, &s1_base, exec)?;
    let to_base = ExtMap::forget_slice(&sn_slice, &sn_base, exec)?;
    let to_top = ExtMap::restriction(&sn_slice, &s1_slice, &[n - 1, n], exec)?;
    let fp = two_fiber_product(&top_base.functor, &forget.functor)?;
    let witness = path_witness(&[&to_base, &top_base], &[&to_top, &forget])?;
    let um = fp.universal(&to_base.functor, &to_top.functor, &witness)?;
    let pullback = graded_comparison(&sn_slice, &fp.groupoid, &um.functor, |g| {
        let mut want = flatten(g);
        want.extend(flatten(&restrict_grade(g, 1, &[n - 1, n])));
        want
    })?;
    let pullback_matches = pullback.iter().all(|r| r.pass);
    Ok(SliceDecomposition { n, bound, product_cardinalities, product_matches, pullback, pullback_matches })
}

/// `S^ext` of the spine of `Δ^n`, for comparisons with products of `S_1`.
pub fn spine_groupoid(spec: &CategorySpec, n: usize, bound: usize, exec: Execution) -> Result<Arc<ExtGroupoid>> {
    s_ext(spec, &crate::simpset::hcomb_of_object(n)?, bound, exec)
}

//! Commutative cubes in the augmented simplex category and the associativity
//! cubes built from gap-collapsing surjections.

use std::collections::BTreeMap;

use serde::Serialize;

use super::DeltaPlusMap;
use crate::error::{HallError, Result};

/// Largest `n` for which the uniqueness search is run.
pub const MAX_UNIQUENESS_N: usize = 5;

/// A commutative `d`-cube in `Δ+`, with vertices indexed by bitmasks of axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaPlusCube {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub edges: BTreeMap<(u32, usize), DeltaPlusMap>,
}

impl DeltaPlusCube {
    pub fn new(dim: usize, sizes: Vec<usize>, edges: BTreeMap<(u32, usize), DeltaPlusMap>) -> Result<Self> {
        if sizes.len() != 1 << dim {
            return Err(HallError::DimensionMismatch(format!("{}-cube needs {} vertices", dim, 1 << dim)));
        }
        let cube = DeltaPlusCube { dim, sizes, edges };
        for s in 0..(1u32 << dim) {
            for i in (0..dim).filter(|&i| s & (1 << i) == 0) {
                let e = cube.edge(s, i)?;
                if e.src != cube.sizes[s as usize] || e.tgt != cube.sizes[(s | 1 << i) as usize] {
                    return Err(HallError::DimensionMismatch(format!("edge at {s:b} along axis {i}")));
                }
            }
        }
        cube.check_commutes()?;
        Ok(cube)
    }

    /// The cube with a single vertex `ord{n}`.
    pub fn point(n: usize) -> Self {
        DeltaPlusCube { dim: 0, sizes: vec![n], edges: BTreeMap::new() }
    }

    /// The 1-cube given by a single map.
    pub fn arrow(f: DeltaPlusMap) -> Self {
        DeltaPlusCube { dim: 1, sizes: vec![f.src, f.tgt], edges: BTreeMap::from([((0, 0), f)]) }
    }

    /// The `d`-cube of identities on `ord{n}`.
    pub fn identities(dim: usize, n: usize) -> Self {
        let mut edges = BTreeMap::new();
        for s in 0..(1u32 << dim) {
            for i in (0..dim).filter(|&i| s & (1 << i) == 0) {
                edges.insert((s, i), DeltaPlusMap::identity(n));
            }
        }
        DeltaPlusCube { dim, sizes: vec![n; 1 << dim], edges }
    }

    pub fn edge(&self, s: u32, i: usize) -> Result<&DeltaPlusMap> {
        self.edges
            .get(&(s, i))
            .ok_or_else(|| HallError::Malformed(format!("cube is missing the edge at {s:b} along axis {i}")))
    }

    pub fn check_commutes(&self) -> Result<()> {
        for s in 0..(1u32 << self.dim) {
            for i in (0..self.dim).filter(|&i| s & (1 << i) == 0) {
                for j in ((i + 1)..self.dim).filter(|&j| s & (1 << j) == 0) {
                    let f = self.edge(s, i)?.then(self.edge(s | 1 << i, j)?)?;
                    let g = self.edge(s, j)?.then(self.edge(s | 1 << j, i)?)?;
                    if f != g {
                        return Err(HallError::NonCommuting(format!("face at {s:b} on axes ({i},{j})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite from vertex `a` to vertex `b`, for `a` a subset of `b`.
    pub fn composite(&self, a: u32, b: u32) -> Result<DeltaPlusMap> {
        if a & !b != 0 || b >= 1 << self.dim {
            return Err(HallError::InvalidArgument(format!("no path from {a:b} to {b:b}")));
        }
        let mut f = DeltaPlusMap::identity(self.sizes[a as usize]);
        let mut s = a;
        for i in (0..self.dim).filter(|&i| (b & !a) & (1 << i) != 0) {
            f = f.then(self.edge(s, i)?)?;
            s |= 1 << i;
        }
        Ok(f)
    }

    /// The face spanned by `axes` whose base vertex is `base`.
    pub fn face(&self, base: u32, axes: &[usize]) -> Result<DeltaPlusCube> {
        if axes.iter().any(|&a| a >= self.dim || base & (1 << a) != 0) {
            return Err(HallError::InvalidArgument("face axes must be unset in the base vertex".into()));
        }
        let dim = axes.len();
        let expand = |m: u32| {
            base | axes.iter().enumerate().filter(|(k, _)| m & (1 << k) != 0).map(|(_, &a)| 1u32 << a).sum::<u32>()
        };
        let sizes = (0..1u32 << dim).map(|m| self.sizes[expand(m) as usize]).collect();
        let mut edges = BTreeMap::new();
        for m in 0..(1u32 << dim) {
            for k in (0..dim).filter(|&k| m & (1 << k) == 0) {
                edges.insert((m, k), self.edge(expand(m), axes[k])?.clone());
            }
        }
        Ok(DeltaPlusCube { dim, sizes, edges })
    }

    /// New axis `a` is old axis `perm[a]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<DeltaPlusCube> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dim).collect::<Vec<_>>() {
            return Err(HallError::InvalidArgument(format!("{perm:?} is not a permutation of the axes")));
        }
        self.face(0, perm)
    }

    /// All maximal monotone paths, as orders in which the axes are crossed.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(dim: usize, used: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == dim {
                out.push(cur.clone());
                return;
            }
            for i in (0..dim).filter(|&i| used & (1 << i) == 0) {
                cur.push(i);
                rec(dim, used | 1 << i, cur, out);
                cur.pop();
            }
        }
        rec(self.dim, 0, &mut cur, &mut out);
        out
    }
}

/// The commutative `(n-1)`-cube of collapses of the gaps of `ord{n}`; axis `k`
/// merges the elements on either side of gap `k` of the initial vertex.
pub fn assoc_cube(n: usize) -> Result<DeltaPlusCube> {
    if n < 3 {
        return Err(HallError::InvalidArgument(format!("associativity cubes start at n = 3, got {n}")));
    }
    let dim = n - 1;
    let sizes = (0..1u32 << dim).map(|s| n - s.count_ones() as usize).collect();
    let mut edges = BTreeMap::new();
    for s in 0..(1u32 << dim) {
        for k in (0..dim).filter(|&k| s & (1 << k) == 0) {
            let merged_before = (s & ((1u32 << k) - 1)).count_ones() as usize;
            edges.insert((s, k), DeltaPlusMap::collapse(n - s.count_ones() as usize, k - merged_before)?);
        }
    }
    DeltaPlusCube::new(dim, sizes, edges)
}

/// The bracketing of `n` letters produced by collapsing the gaps of
/// `ord{n}` in the order `path`.
pub fn bracketing(n: usize, path: &[usize]) -> Result<String> {
    if n == 0 || path.len() + 1 != n {
        return Err(HallError::DimensionMismatch(format!("{n} letters need {} collapses", n.saturating_sub(1))));
    }
    let mut time = vec![usize::MAX; n - 1];
    for (t, &g) in path.iter().enumerate() {
        if g >= n - 1 || time[g] != usize::MAX {
            return Err(HallError::InvalidArgument(format!("{path:?} is not an order on the gaps")));
        }
        time[g] = t;
    }
    fn rec(lo: usize, hi: usize, time: &[usize], top: bool) -> String {
        if lo == hi {
            return char::from(b'A' + (lo % 26) as u8).to_string();
        }
        let g = (lo..hi).max_by_key(|&g| time[g]).unwrap();
        let inner = format!("{}{}", rec(lo, g, time, false), rec(g + 1, hi, time, false));
        if top {
            inner
        } else {
            format!("({inner})")
        }
    }
    Ok(rec(0, n - 1, &time, true))
}

/// Outcome of the exhaustive search for commutative cubes of gap collapses.
#[derive(Debug, Clone, Serialize)]
pub struct AssocUniqueness {
    pub n: usize,
    pub solutions: usize,
    /// Number of axis relabellings, `(n-1)!`.
    pub symmetry: usize,
    /// Every solution is an axis relabelling of the associativity cube.
    pub unique: bool,
    pub witness: DeltaPlusCube,
}

/// Enumerates every commutative `(n-1)`-cube whose edges are surjections
/// `ord{m} -> ord{m-1}` and which uses each such surjection for `2 <= m <= n`.
pub fn verify_assoc_cube_unique(n: usize) -> Result<AssocUniqueness> {
    if !(3..=MAX_UNIQUENESS_N).contains(&n) {
        return Err(HallError::BoundExceeded(format!("uniqueness search runs for 3 <= n <= {MAX_UNIQUENESS_N}")));
    }
    let dim = n - 1;
    let size = |s: u32| n - s.count_ones() as usize;
    let slots: Vec<(u32, usize)> =
        (0..1u32 << dim).flat_map(|s| (0..dim).filter(move |&i| s & (1 << i) == 0).map(move |i| (s, i))).collect();
    let collapses: Vec<Vec<DeltaPlusMap>> =
        (0..=n).map(|m| (0..m.saturating_sub(1)).map(|g| DeltaPlusMap::collapse(m, g).unwrap()).collect()).collect();

    struct Search<'a> {
        dim: usize,
        slots: &'a [(u32, usize)],
        gaps: BTreeMap<(u32, usize), usize>,
        collapses: &'a [Vec<DeltaPlusMap>],
        found: Vec<BTreeMap<(u32, usize), usize>>,
    }
    impl Search<'_> {
        fn map(&self, s: u32, i: usize) -> Option<&DeltaPlusMap> {
            let g = *self.gaps.get(&(s, i))?;
            let m = self.dim + 1 - s.count_ones() as usize;
            Some(&self.collapses[m][g])
        }
        fn faces_ok(&self, w: u32, j: usize) -> bool {
            for a in (0..self.dim).filter(|&a| w & (1 << a) != 0) {
                let u = w & !(1 << a);
                let four = (self.map(u, a), self.map(w, j), self.map(u, j), self.map(u | 1 << j, a));
                if let (Some(e1), Some(e2), Some(e3), Some(e4)) = four {
                    if e1.then(e2).unwrap() != e3.then(e4).unwrap() {
                        return false;
                    }
                }
            }
            true
        }
        fn rec(&mut self, k: usize) {
            if k == self.slots.len() {
                self.found.push(self.gaps.clone());
                return;
            }
            let (s, i) = self.slots[k];
            let m = self.dim + 1 - s.count_ones() as usize;
            for g in 0..m - 1 {
                // the initial vertex must emit every collapse of ord{n} once
                if s == 0 && (0..i).any(|i2| self.gaps[&(0, i2)] == g) {
                    continue;
                }
                self.gaps.insert((s, i), g);
                if self.faces_ok(s, i) {
                    self.rec(k + 1);
                }
                self.gaps.remove(&(s, i));
            }
        }
    }

    let mut search = Search { dim, slots: &slots, gaps: BTreeMap::new(), collapses: &collapses, found: Vec::new() };
    search.rec(0);

    let covers = |gaps: &BTreeMap<(u32, usize), usize>| {
        (2..=n).all(|m| (0..m - 1).all(|g| gaps.iter().any(|(&(s, _), &gg)| size(s) == m && gg == g)))
    };
    let solutions: Vec<DeltaPlusCube> = search
        .found
        .into_iter()
        .filter(|g| covers(g))
        .map(|gaps| {
            let edges = gaps.into_iter().map(|((s, i), g)| ((s, i), collapses[size(s)][g].clone())).collect();
            DeltaPlusCube::new(dim, (0..1u32 << dim).map(size).collect(), edges)
        })
        .collect::<Result<_>>()?;

    let base = assoc_cube(n)?;
    let relabelled: Vec<DeltaPlusCube> =
        base.paths().iter().map(|perm| base.permute_axes(perm)).collect::<Result<_>>()?;
    let unique = solutions.iter().all(|c| relabelled.contains(c)) && relabelled.iter().all(|c| solutions.contains(c));
    let witness = solutions.iter().find(|c| **c == base).or(solutions.first()).cloned().unwrap_or(base);
    Ok(AssocUniqueness { n, solutions: solutions.len(), symmetry: relabelled.len(), unique, witness })
}

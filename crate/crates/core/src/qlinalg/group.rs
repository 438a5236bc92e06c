//! Finite groups of block-diagonal tuples of invertible matrices, stored as
//! explicit sorted element lists.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::field::{Field, FiniteField};
use super::matrix::Matrix;
use super::qpoly::{gl_order_poly, parabolic_order_poly};
use crate::error::{HallError, Result};

/// Largest group that will be enumerated element by element. Covers
/// `GL_4(F_2)` (order 20160).
pub const MAX_GROUP_ORDER: u64 = 25_000;

/// A group element: the concatenated row-major entries of its square blocks.
pub type Elem = Box<[u8]>;

pub struct MatrixGroup {
    field: Field,
    blocks: Vec<usize>,
    elems: Vec<Elem>,
    index: HashMap<Elem, u32>,
    gens: Vec<u32>,
    identity: u32,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGroup(order {}, blocks {:?}, {:?})", self.order(), self.blocks, self.field)
    }
}

pub fn identity_elem(blocks: &[usize]) -> Elem {
    let mut out = Vec::with_capacity(blocks.iter().map(|b| b * b).sum());
    for &b in blocks {
        for r in 0..b {
            for c in 0..b {
                out.push(u8::from(r == c));
            }
        }
    }
    out.into_boxed_slice()
}

/// Blockwise product `a * b`.
pub fn multiply(f: &FiniteField, blocks: &[usize], a: &[u8], b: &[u8]) -> Elem {
    let mut out = vec![0u8; a.len()];
    let mut off = 0;
    for &n in blocks {
        for i in 0..n {
            for k in 0..n {
                let x = a[off + i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b[off + k * n + j];
                    if y != 0 {
                        let slot = &mut out[off + i * n + j];
                        *slot = f.add(*slot, f.mul(x, y));
                    }
                }
            }
        }
        off += n * n;
    }
    out.into_boxed_slice()
}

pub fn invert(f: &FiniteField, blocks: &[usize], a: &[u8]) -> Elem {
    let mut out = Vec::with_capacity(a.len());
    for (m, _) in split_blocks(blocks, a) {
        let inv = m.inverse(f).expect("group elements are invertible");
        out.extend_from_slice(inv.data());
    }
    out.into_boxed_slice()
}

/// The blocks of an element as matrices, with their offsets.
pub fn split_blocks(blocks: &[usize], a: &[u8]) -> Vec<(Matrix, usize)> {
    let mut off = 0;
    blocks
        .iter()
        .map(|&n| {
            let m = Matrix::from_vec(n, n, a[off..off + n * n].to_vec()).unwrap();
            let o = off;
            off += n * n;
            (m, o)
        })
        .collect()
}

impl MatrixGroup {
    /// Builds a group from a complete list of elements (closure is checked in
    /// debug builds).
    pub fn from_elements(field: Field, blocks: Vec<usize>, mut elems: Vec<Elem>) -> Self {
        elems.sort();
        elems.dedup();
        let index: HashMap<Elem, u32> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let identity = index[&identity_elem(&blocks)];
        let mut g = MatrixGroup { field, blocks, elems, index, gens: vec![], identity };
        g.gens = g.compute_generators();
        debug_assert!(g.is_closed());
        g
    }

    pub fn trivial(field: Field) -> Self {
        Self::from_elements(field, vec![], vec![identity_elem(&[])])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn elem(&self, i: u32) -> &Elem {
        &self.elems[i as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn index_of(&self, e: &[u8]) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn mul_elems(&self, a: &[u8], b: &[u8]) -> Elem {
        multiply(&self.field, &self.blocks, a, b)
    }

    pub fn inv_elem(&self, a: &[u8]) -> Elem {
        invert(&self.field, &self.blocks, a)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.mul_elems(&self.elems[a as usize], &self.elems[b as usize]);
        self.index[&p]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.index[&self.inv_elem(&self.elems[a as usize])]
    }

    /// Subgroup of the elements satisfying `keep` (assumed closed).
    pub fn subgroup(&self, keep: impl Fn(&[u8]) -> bool) -> MatrixGroup {
        let elems = self.elems.iter().filter(|e| keep(e)).cloned().collect();
        MatrixGroup::from_elements(self.field.clone(), self.blocks.clone(), elems)
    }

    /// Direct product; elements are concatenations in factor order.
    pub fn product(field: &Field, factors: &[&MatrixGroup]) -> Result<MatrixGroup> {
        let order: u64 = factors.iter().map(|g| g.order() as u64).product();
        if order > MAX_GROUP_ORDER {
            return Err(HallError::BoundExceeded(format!("product group of order {order}")));
        }
        let blocks: Vec<usize> = factors.iter().flat_map(|g| g.blocks.iter().copied()).collect();
        let mut elems: Vec<Vec<u8>> = vec![vec![]];
        for g in factors {
            elems = elems
                .into_iter()
                .flat_map(|prefix| {
                    g.elems.iter().map(move |e| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(e);
                        v
                    })
                })
                .collect();
        }
        Ok(MatrixGroup::from_elements(field.clone(), blocks, elems.into_iter().map(Vec::into_boxed_slice).collect()))
    }

    fn is_closed(&self) -> bool {
        self.gens
            .iter()
            .all(|&g| self.elems.iter().all(|e| self.index.contains_key(&self.mul_elems(e, &self.elems[g as usize]))))
    }

    /// Greedy generating set: scan elements in order and keep those not yet
    /// in the subgroup generated so far.
    fn compute_generators(&self) -> Vec<u32> {
        let n = self.elems.len();
        let mut inside = vec![false; n];
        inside[self.identity as usize] = true;
        let mut members = vec![self.identity];
        let mut gens = Vec::new();
        for cand in 0..n as u32 {
            if inside[cand as usize] {
                continue;
            }
            gens.push(cand);
            // re-close: BFS from current members by right multiplication
            let mut queue: VecDeque<u32> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !inside[y as usize] {
                        inside[y as usize] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            if members.len() == n {
                break;
            }
        }
        gens
    }
}

type GroupKey = (u32, u32, Vec<usize>);

fn cache() -> &'static Mutex<HashMap<GroupKey, Arc<MatrixGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupKey, Arc<MatrixGroup>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Order of `GL_n(F_q)` by the product formula.
pub fn general_linear_order(n: usize, q: u64) -> u128 {
    gl_order_poly(n).eval(&q.into()).to_u128().expect("fits in u128")
}

pub fn parabolic_order(blocks: &[usize], q: u64) -> u128 {
    parabolic_order_poly(blocks).eval(&q.into()).to_u128().expect("fits in u128")
}

/// Block upper-triangular invertible matrices with the given diagonal block
/// sizes, as a single-block group of size `sum(blocks)`. `[n]` gives `GL_n`.
/// Results are memoized per field and block pattern.
pub fn parabolic(field: &Field, blocks: &[usize]) -> Result<Arc<MatrixGroup>> {
    let key = (field.characteristic(), field.degree(), blocks.to_vec());
    if let Some(g) = cache().lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let order = parabolic_order(blocks, field.order() as u64);
    if order > MAX_GROUP_ORDER as u128 {
        return Err(HallError::BoundExceeded(format!(
            "parabolic {blocks:?} over F_{} has order {order} > {MAX_GROUP_ORDER}",
            field.order()
        )));
    }
    let n: usize = blocks.iter().sum();
    let elems = if blocks.iter().filter(|&&b| b > 0).count() <= 1 {
        enumerate_gl(field, n)
    } else {
        let starts: Vec<usize> = blocks
            .iter()
            .scan(0, |acc, &b| {
                let s = *acc;
                *acc += b;
                Some(s)
            })
            .collect();
        let diag: Vec<Arc<MatrixGroup>> = blocks.iter().map(|&b| parabolic(field, &[b])).collect::<Result<_>>()?;
        // free strictly-upper block entries
        let upper: Vec<(usize, usize)> = (0..blocks.len())
            .flat_map(|i| ((i + 1)..blocks.len()).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let (si, sj) = (starts[i], starts[j]);
                (0..blocks[i]).flat_map(move |r| (0..blocks[j]).map(move |c| (si + r, sj + c)))
            })
            .collect();
        let q = field.order();
        let mut partial: Vec<Matrix> = vec![Matrix::zeros(n, n)];
        for (bi, g) in diag.iter().enumerate() {
            let (s, b) = (starts[bi], blocks[bi]);
            partial = partial
                .into_iter()
                .flat_map(|m| {
                    g.elements().iter().map(move |e| {
                        let mut m = m.clone();
                        for r in 0..b {
                            for c in 0..b {
                                m.set(s + r, s + c, e[r * b + c]);
                            }
                        }
                        m
                    })
                })
                .collect();
        }
        let fill = q.pow(upper.len() as u32);
        let mut out = Vec::with_capacity(partial.len() * fill);
        for m in &partial {
            for mut idx in 0..fill {
                let mut m = m.clone();
                for &(r, c) in upper.iter().rev() {
                    m.set(r, c, (idx % q) as u8);
                    idx /= q;
                }
                out.push(m.data().to_vec().into_boxed_slice());
            }
        }
        out
    };
    let g = Arc::new(MatrixGroup::from_elements(field.clone(), vec![n], elems));
    debug_assert_eq!(g.order() as u128, order);
    cache().lock().unwrap().insert(key, g.clone());
    Ok(g)
}

pub fn general_linear(field: &Field, n: usize) -> Result<Arc<MatrixGroup>> {
    parabolic(field, &[n])
}

/// Invertible `n x n` matrices, built row by row with each row outside the
/// span of the previous ones.
fn enumerate_gl(field: &Field, n: usize) -> Vec<Elem> {
    let f: &FiniteField = field;
    let vectors: Vec<Vec<u8>> = Matrix::all(1, n, f).map(|m| m.data().to_vec()).collect();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n);
    fn rec(f: &FiniteField, n: usize, vectors: &[Vec<u8>], rows: &mut Vec<Vec<u8>>, out: &mut Vec<Elem>) {
        if rows.len() == n {
            out.push(rows.concat().into_boxed_slice());
            return;
        }
        for v in vectors {
            rows.push(v.clone());
            let m = Matrix::from_rows(rows).unwrap();
            if m.rank(f) == rows.len() {
                rec(f, n, vectors, rows, out);
            }
            rows.pop();
        }
    }
    rec(f, n, &vectors, &mut rows, &mut out);
    out
}

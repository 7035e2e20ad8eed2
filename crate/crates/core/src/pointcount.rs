//! Exact point counts of quiver Grassmannians `Gr_e(M)` over `F_p`, their
//! interpolation to counting polynomials, and the (dimension, number of
//! top-dimensional components) classification read off those polynomials.
//!
//! Counting is a dynamic program over the tree: a leaf `l` hanging off `c`
//! contributes a closed-form factor depending only on `dim(U_c cap X)` for
//! one subspace `X` of `M_c` (`im M_a` for `l -> c`, `ker M_a` for
//! `c -> l`). Inner vertices keep explicit weight tables indexed by
//! subspaces.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{first_primes, gaussian_binomial_u128, FMatrix, PrimeField};
use crate::modrep::Representation;
use crate::pluecker::colex_subsets;
use crate::quiver::DimVector;

pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;
pub const DEFAULT_TABLE_BUDGET: usize = 4_000_000;

/// All `e`-dimensional subspaces of `F_p^d`, each stored as its reduced row
/// echelon basis. Index = offset of the pivot set (colex order) plus the free
/// entries read as a little-endian base-`p` number.
#[derive(Debug, Clone)]
pub struct SubspaceEnum {
    field: PrimeField,
    d: usize,
    e: usize,
    pivots: Vec<Vec<u8>>,
    free: Vec<Vec<(usize, usize)>>,
    offsets: Vec<usize>,
}

impl SubspaceEnum {
    pub fn new(field: PrimeField, d: usize, e: usize, budget: usize) -> Result<SubspaceEnum> {
        if e > d {
            return Err(Error::OutOfRange(format!(
                "{e}-dimensional subspaces of a {d}-dimensional space"
            )));
        }
        let p = field.p() as usize;
        let pivots = colex_subsets(d, e);
        let mut free = Vec::with_capacity(pivots.len());
        let mut offsets = vec![0usize];
        for piv in &pivots {
            let mut f = Vec::new();
            for (i, &pc) in piv.iter().enumerate() {
                for c in pc as usize + 1..d {
                    if !piv.contains(&(c as u8)) {
                        f.push((i, c));
                    }
                }
            }
            let count = (0..f.len()).try_fold(1usize, |acc, _| acc.checked_mul(p));
            let next = count.and_then(|c| offsets.last().expect("nonempty").checked_add(c));
            match next {
                Some(n) if n <= budget => offsets.push(n),
                _ => {
                    return Err(Error::Budget(format!(
                        "Gr({e}, {d}) over F_{p} exceeds {budget} subspaces"
                    )))
                }
            }
            free.push(f);
        }
        Ok(SubspaceEnum {
            field,
            d,
            e,
            pivots,
            free,
            offsets,
        })
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().expect("nonempty")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Row-major `e x d` rref basis of subspace `idx`.
    pub fn rows(&self, idx: usize) -> Vec<u32> {
        let p = self.field.p() as usize;
        let block = self.offsets.partition_point(|&o| o <= idx) - 1;
        let mut code = idx - self.offsets[block];
        let mut r = vec![0u32; self.e * self.d];
        for (i, &pc) in self.pivots[block].iter().enumerate() {
            r[i * self.d + pc as usize] = 1;
        }
        for &(i, c) in &self.free[block] {
            r[i * self.d + c] = (code % p) as u32;
            code /= p;
        }
        r
    }

    /// Index of the subspace with rref basis `rows`.
    pub fn index_of(&self, rows: &[u32]) -> Option<usize> {
        let (d, e) = (self.d, self.e);
        if rows.len() != d * e {
            return None;
        }
        let piv: Vec<u8> = (0..e)
            .map(|i| (0..d).find(|&c| rows[i * d + c] != 0).map(|c| c as u8))
            .collect::<Option<_>>()?;
        let block = self.pivots.iter().position(|p| *p == piv)?;
        let p = self.field.p() as usize;
        let mut code = 0usize;
        for &(i, c) in self.free[block].iter().rev() {
            code = code * p + rows[i * d + c] as usize;
        }
        Some(self.offsets[block] + code)
    }

    /// Calls `f(index, rows)` for every subspace in index order.
    pub fn for_each(&self, mut f: impl FnMut(usize, &[u32])) {
        let p = self.field.p();
        let mut idx = 0;
        for (block, piv) in self.pivots.iter().enumerate() {
            let mut r = vec![0u32; self.e * self.d];
            for (i, &pc) in piv.iter().enumerate() {
                r[i * self.d + pc as usize] = 1;
            }
            let free = &self.free[block];
            loop {
                f(idx, &r);
                idx += 1;
                let mut k = 0;
                loop {
                    if k == free.len() {
                        break;
                    }
                    let pos = free[k].0 * self.d + free[k].1;
                    r[pos] += 1;
                    if r[pos] == p {
                        r[pos] = 0;
                        k += 1;
                    } else {
                        break;
                    }
                }
                if k == free.len() {
                    break;
                }
            }
        }
    }

    /// `d x e` matrix whose columns span the subspace with basis `rows`.
    pub fn basis(&self, rows: &[u32]) -> FMatrix {
        FMatrix::from_fn(self.field, self.d, self.e, |r, c| {
            rows[c * self.d + r] as i64
        })
    }
}

/// Rref rows of the span of the columns of `span`, flattened.
fn canonical_rows(span: &FMatrix) -> Vec<u32> {
    let r = span.transpose().rref();
    let k = r.pivots.len();
    r.matrix.row_block(0, k).data().to_vec()
}

/// Rows of a matrix whose kernel is the column span of `basis`.
fn annihilator(basis: &FMatrix) -> FMatrix {
    basis.transpose().kernel_basis().transpose()
}

/// In-place rank of a row-major `rows x cols` buffer.
fn rank_flat(buf: &mut [u32], rows: usize, cols: usize, f: PrimeField) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| buf[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in 0..cols {
                buf.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = f.inv(buf[rank * cols + col]);
        for r in rank + 1..rows {
            let factor = f.mul(buf[r * cols + col], inv);
            if factor != 0 {
                for c in col..cols {
                    let s = f.mul(factor, buf[rank * cols + c]);
                    buf[r * cols + c] = f.sub(buf[r * cols + c], s);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim(U cap X)` for `U` spanned by the rows of `rows` (`e x d`) and `X`
/// the kernel of `ann` (`a x d`): `e - rank(ann * rows^T)`.
fn meet_dim(ann: &FMatrix, rows: &[u32], e: usize, d: usize, scratch: &mut Vec<u32>) -> usize {
    let f = ann.field();
    let a = ann.rows();
    scratch.clear();
    scratch.resize(a * e, 0);
    for i in 0..a {
        let arow = ann.row(i);
        for j in 0..e {
            let mut acc = 0u64;
            let urow = &rows[j * d..(j + 1) * d];
            for c in 0..d {
                acc += arow[c] as u64 * urow[c] as u64;
            }
            scratch[i * e + j] = (acc % f.p() as u64) as u32;
        }
    }
    e - rank_flat(scratch, a, e, f)
}

fn overflow() -> Error {
    Error::OutOfRange("point count exceeds 128 bits".into())
}

/// `gauss[n][k] = [n choose k]_p` for `n <= max_n`.
fn gauss_table(p: u32, max_n: usize) -> Result<Vec<Vec<u128>>> {
    (0..=max_n)
        .map(|n| {
            (0..=n)
                .map(|k| gaussian_binomial_u128(n as u32, k as u32, p).ok_or_else(overflow))
                .collect()
        })
        .collect()
}

/// Zero outside the table: such patterns never occur.
fn gauss(t: &[Vec<u128>], n: usize, k: usize) -> u128 {
    if k > n || n >= t.len() {
        0
    } else {
        t[n][k]
    }
}

/// Closed-form contribution of a leaf as a function of `dim(U cap X)`.
struct LeafFactor {
    /// Kernel rows for `X`.
    ann: FMatrix,
    /// Basis columns of `X`.
    x: FMatrix,
    /// Indexed by `dim(U cap X)`, `0..=e`.
    weight: Vec<u128>,
}

fn leaf_factor(
    m: &Representation,
    arrow: usize,
    parent: usize,
    e: &DimVector,
    gt: &[Vec<u128>],
) -> LeafFactor {
    let q = m.quiver();
    let ar = q.arrow(arrow);
    let f = m.map(arrow);
    let ep = e[parent];
    if ar.target == parent {
        // leaf -> parent: dim f^{-1}(U) = dim ker f + dim(U cap im f)
        let leaf = ar.source;
        let x = f.image_basis();
        let base = m.dims()[leaf] - x.cols();
        let weight = (0..=ep).map(|k| gauss(gt, base + k, e[leaf])).collect();
        LeafFactor {
            ann: annihilator(&x),
            x,
            weight,
        }
    } else {
        // parent -> leaf: dim f(U) = e - dim(U cap ker f)
        let leaf = ar.target;
        let x = f.kernel_basis();
        let weight = (0..=ep)
            .map(|k| {
                let r = ep.saturating_sub(k);
                if k > ep || r > e[leaf] {
                    0
                } else {
                    gauss(gt, m.dims()[leaf] - r, e[leaf] - r)
                }
            })
            .collect();
        LeafFactor {
            ann: annihilator(&x),
            x,
            weight,
        }
    }
}

type PatternKey = (u32, usize, usize, Vec<usize>);

fn pattern_cache() -> &'static Mutex<HashMap<PatternKey, Arc<Vec<u128>>>> {
    static CACHE: OnceLock<Mutex<HashMap<PatternKey, Arc<Vec<u128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Number of `U in Gr(e, d)` with each intersection pattern
/// `(dim(U cap X_l))_l`, encoded little-endian in base `e + 1`.
fn pattern_counts(
    field: PrimeField,
    d: usize,
    e: usize,
    xs: &[&FMatrix],
    gt: &[Vec<u128>],
    budget: usize,
) -> Result<Arc<Vec<u128>>> {
    let k = xs.len();
    let size = (e + 1).pow(k as u32);
    let p = field.p();
    let dim_meet = |set: &[usize]| -> usize {
        // dim of the intersection of the chosen X's
        let mut stacked = FMatrix::zeros(field, 0, d);
        for &l in set {
            stacked = stacked.vstack(&annihilator(xs[l])).expect("same width");
        }
        d - stacked.rank()
    };
    let dim_sum = |set: &[usize]| -> usize {
        let mut span = FMatrix::zeros(field, d, 0);
        for &l in set {
            span = span.hstack(xs[l]).expect("same height");
        }
        span.rank()
    };
    if e == 1 || e + 1 == d {
        // membership pattern by inclusion-exclusion over subsets
        let lines = e == 1;
        let mut exact = vec![0i128; 1 << k];
        let mut at_least = vec![0i128; 1 << k];
        for t in 0..(1usize << k) {
            let set: Vec<usize> = (0..k).filter(|&l| t >> l & 1 == 1).collect();
            at_least[t] = if lines {
                gauss(gt, dim_meet(&set), 1)
            } else {
                gauss(gt, d - dim_sum(&set), 1)
            } as i128;
        }
        for s in 0..(1usize << k) {
            let mut acc = 0i128;
            for t in 0..(1usize << k) {
                if t & s == s {
                    let sign = if (t ^ s).count_ones() % 2 == 0 { 1 } else { -1 };
                    acc += sign * at_least[t];
                }
            }
            exact[s] = acc;
        }
        let mut out = vec![0u128; size];
        for s in 0..(1usize << k) {
            if exact[s] < 0 {
                return Err(Error::Internal("negative inclusion-exclusion count".into()));
            }
            if exact[s] == 0 {
                continue;
            }
            let mut code = 0;
            for l in (0..k).rev() {
                let inside = s >> l & 1 == 1;
                let kappa = if lines {
                    inside as usize
                } else {
                    xs[l].cols() + inside as usize - 1
                };
                code = code * (e + 1) + kappa;
            }
            out[code] += exact[s] as u128;
        }
        return Ok(Arc::new(out));
    }
    // canonical coordinate configuration for up to two subspaces
    let key = match k {
        0 => Some(vec![]),
        1 => Some(vec![xs[0].cols()]),
        2 => Some(vec![xs[0].cols(), xs[1].cols(), dim_meet(&[0, 1])]),
        _ => None,
    };
    if let Some(inv) = &key {
        let full_key = (p, d, e, inv.clone());
        if let Some(hit) = pattern_cache().lock().expect("cache lock").get(&full_key) {
            return Ok(hit.clone());
        }
        let coord =
            |cols: Vec<usize>| FMatrix::from_fn(field, d, cols.len(), |r, c| (r == cols[c]) as i64);
        let canon: Vec<FMatrix> = match inv.as_slice() {
            [] => vec![],
            [x1] => vec![coord((0..*x1).collect())],
            [x1, x2, a] => vec![
                coord((0..*x1).collect()),
                coord((0..*a).chain(*x1..x1 + x2 - a).collect()),
            ],
            _ => unreachable!(),
        };
        let refs: Vec<&FMatrix> = canon.iter().collect();
        let counts = Arc::new(enumerate_patterns(field, d, e, &refs, budget)?);
        pattern_cache()
            .lock()
            .expect("cache lock")
            .insert(full_key, counts.clone());
        return Ok(counts);
    }
    Ok(Arc::new(enumerate_patterns(field, d, e, xs, budget)?))
}

fn enumerate_patterns(
    field: PrimeField,
    d: usize,
    e: usize,
    xs: &[&FMatrix],
    budget: usize,
) -> Result<Vec<u128>> {
    let k = xs.len();
    let anns: Vec<FMatrix> = xs.iter().map(|x| annihilator(x)).collect();
    let en = SubspaceEnum::new(field, d, e, budget)?;
    let mut out = vec![0u128; (e + 1).pow(k as u32)];
    let mut scratch = Vec::new();
    en.for_each(|_, rows| {
        let mut code = 0;
        for l in (0..k).rev() {
            code = code * (e + 1) + meet_dim(&anns[l], rows, e, d, &mut scratch);
        }
        out[code] += 1;
    });
    Ok(out)
}

enum Child {
    Leaf(LeafFactor),
    Table {
        /// `true` if the arrow points from the child into the parent.
        into_parent: bool,
        f: FMatrix,
        en: SubspaceEnum,
        nonzero: Vec<(usize, u128)>,
        memo: HashMap<Vec<u32>, u128>,
    },
}

impl Child {
    fn message(
        &mut self,
        rows: &[u32],
        e: usize,
        d: usize,
        scratch: &mut Vec<u32>,
    ) -> Result<u128> {
        match self {
            Child::Leaf(lf) => Ok(lf.weight[meet_dim(&lf.ann, rows, e, d, scratch)]),
            Child::Table {
                into_parent,
                f,
                en,
                nonzero,
                memo,
            } => {
                let field = f.field();
                let u = FMatrix::from_fn(field, d, e, |r, c| rows[c * d + r] as i64);
                let key_span = if *into_parent {
                    // U_c must lie in f^{-1}(U)
                    annihilator(&u).mul(f)?.kernel_basis()
                } else {
                    // U_c must contain f(U)
                    f.mul(&u)?
                };
                let key = canonical_rows(&key_span);
                if let Some(&v) = memo.get(&key) {
                    return Ok(v);
                }
                let mut total = 0u128;
                if *into_parent {
                    let ann_k = annihilator(&key_span);
                    for &(idx, w) in nonzero.iter() {
                        let uc = en.basis(&en.rows(idx));
                        if ann_k.mul(&uc)?.is_zero() {
                            total = total.checked_add(w).ok_or_else(overflow)?;
                        }
                    }
                } else {
                    for &(idx, w) in nonzero.iter() {
                        let uc = en.basis(&en.rows(idx));
                        if annihilator(&uc).mul(&key_span)?.is_zero() {
                            total = total.checked_add(w).ok_or_else(overflow)?;
                        }
                    }
                }
                memo.insert(key, total);
                Ok(total)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Largest explicit weight table or enumerated Grassmannian.
    pub table_budget: usize,
    /// Root of the tree recursion; chosen by a cost model when `None`.
    pub root: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            table_budget: DEFAULT_TABLE_BUDGET,
            root: None,
        }
    }
}

fn grassmannian_size(p: u32, d: usize, e: usize) -> f64 {
    (p as f64).powi((e * (d - e)) as i32)
}

/// Parent of every vertex when the tree is hung from `root`, and a
/// children-before-parents order.
fn rooted(m: &Representation, root: usize) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
    let q = m.quiver();
    let n = q.n_vertices();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in q.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, q.edge_between(v, w).expect("neighbours share an arrow")));
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    (parent, order)
}

fn plan_cost(m: &Representation, e: &DimVector, root: usize) -> f64 {
    let p = m.field().p();
    let d = m.dims();
    let (parent, _) = rooted(m, root);
    let n = d.len();
    let has_children: Vec<bool> = (0..n)
        .map(|v| parent.iter().any(|x| x.is_some_and(|(u, _)| u == v)))
        .collect();
    let mut cost = 0.0;
    for v in 0..n {
        if v == root || !has_children[v] {
            continue;
        }
        let (u, _) = parent[v].expect("non-root has a parent");
        cost += grassmannian_size(p, d[v], e[v]) * (1.0 + grassmannian_size(p, d[u], e[u]));
    }
    let all_leaves =
        (0..n).all(|v| v == root || parent[v].is_some_and(|(u, _)| u != root) || !has_children[v]);
    let k = (0..n)
        .filter(|&v| parent[v].is_some_and(|(u, _)| u == root))
        .count();
    let er = e[root];
    let dr = d[root];
    cost += if er == 0 || er == dr || (all_leaves && (er == 1 || er + 1 == dr)) {
        1.0
    } else if all_leaves && k <= 2 {
        grassmannian_size(p, dr, er) / 64.0
    } else {
        grassmannian_size(p, dr, er)
    };
    cost
}

/// `|Gr_e(M)(F_p)|` for the prime of `m`'s field.
pub fn count_points(m: &Representation, e: &DimVector) -> Result<u128> {
    count_points_with(m, e, &CountOptions::default())
}

pub fn count_points_with(m: &Representation, e: &DimVector, opts: &CountOptions) -> Result<u128> {
    let d = m.dims();
    if e.len() != d.len() {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimension {e} for representation of dimension {d}"
        )));
    }
    if !e.le(d) {
        return Ok(0);
    }
    let field = m.field();
    let n = d.len();
    let max_d = d.0.iter().copied().max().unwrap_or(0);
    let gt = gauss_table(field.p(), max_d)?;
    let root = match opts.root {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::OutOfRange(format!("root vertex {r}"))),
        None => (0..n)
            .min_by(|&a, &b| {
                plan_cost(m, e, a)
                    .partial_cmp(&plan_cost(m, e, b))
                    .expect("finite costs")
                    .then(a.cmp(&b))
            })
            .expect("quiver has a vertex"),
    };
    let (parent, order) = rooted(m, root);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some((u, _)) = parent[v] {
            children[u].push(v);
        }
    }
    let mut built: Vec<Option<Child>> = (0..n).map(|_| None).collect();
    for &v in &order {
        if v == root {
            continue;
        }
        let (u, a) = parent[v].expect("non-root has a parent");
        let child = if children[v].is_empty() {
            Child::Leaf(leaf_factor(m, a, u, e, &gt))
        } else {
            let en = SubspaceEnum::new(field, d[v], e[v], opts.table_budget)?;
            let mut kids: Vec<Child> = children[v]
                .iter()
                .map(|&c| built[c].take().expect("children first"))
                .collect();
            let mut nonzero = Vec::new();
            let mut scratch = Vec::new();
            let mut failure = None;
            en.for_each(|idx, rows| {
                if failure.is_some() {
                    return;
                }
                let mut w = 1u128;
                for k in kids.iter_mut() {
                    match k.message(rows, e[v], d[v], &mut scratch) {
                        Ok(x) => match w.checked_mul(x) {
                            Some(y) => w = y,
                            None => failure = Some(overflow()),
                        },
                        Err(err) => failure = Some(err),
                    }
                    if w == 0 {
                        break;
                    }
                }
                if w != 0 {
                    nonzero.push((idx, w));
                }
            });
            if let Some(err) = failure {
                return Err(err);
            }
            Child::Table {
                into_parent: m.quiver().arrow(a).target == u,
                f: m.map(a).clone(),
                en,
                nonzero,
                memo: HashMap::new(),
            }
        };
        built[v] = Some(child);
    }
    let mut kids: Vec<Child> = children[root]
        .iter()
        .map(|&c| built[c].take().expect("children first"))
        .collect();
    let (dr, er) = (d[root], e[root]);
    if kids.iter().all(|k| matches!(k, Child::Leaf(_))) && er != 0 && er != dr {
        let leaves: Vec<&LeafFactor> = kids
            .iter()
            .map(|k| match k {
                Child::Leaf(l) => l,
                Child::Table { .. } => unreachable!(),
            })
            .collect();
        let xs: Vec<&FMatrix> = leaves.iter().map(|l| &l.x).collect();
        let counts = pattern_counts(field, dr, er, &xs, &gt, opts.table_budget)?;
        let mut total = 0u128;
        for (code, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut w = c;
            let mut rest = code;
            for l in &leaves {
                w = w
                    .checked_mul(l.weight[rest % (er + 1)])
                    .ok_or_else(overflow)?;
                rest /= er + 1;
            }
            total = total.checked_add(w).ok_or_else(overflow)?;
        }
        return Ok(total);
    }
    let en = SubspaceEnum::new(field, dr, er, opts.table_budget)?;
    let mut total = 0u128;
    let mut scratch = Vec::new();
    let mut failure = None;
    en.for_each(|_, rows| {
        if failure.is_some() {
            return;
        }
        let mut w = 1u128;
        for k in kids.iter_mut() {
            match k
                .message(rows, er, dr, &mut scratch)
                .and_then(|x| w.checked_mul(x).ok_or_else(overflow))
            {
                Ok(y) => w = y,
                Err(err) => failure = Some(err),
            }
            if w == 0 {
                break;
            }
        }
        match total.checked_add(w) {
            Some(t) => total = t,
            None => failure = Some(overflow()),
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(total),
    }
}

/// Subspaces of every vertex as `(basis, annihilator)` plus a BFS order in
/// which each vertex after the first has exactly one earlier neighbour.
struct Search<'a> {
    m: &'a Representation,
    spaces: Vec<Vec<(FMatrix, FMatrix)>>,
    parent: Vec<Option<(usize, usize)>>,
    order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(m: &'a Representation, e: &DimVector, budget: u128) -> Result<Option<Search<'a>>> {
        let d = m.dims();
        if e.len() != d.len() {
            return Err(Error::DimensionMismatch(format!(
                "subspace dimension {e} for representation of dimension {d}"
            )));
        }
        if !e.le(d) {
            return Ok(None);
        }
        let field = m.field();
        let n = d.len();
        let mut product: u128 = 1;
        for i in 0..n {
            let size =
                gaussian_binomial_u128(d[i] as u32, e[i] as u32, field.p()).ok_or_else(overflow)?;
            product = product.saturating_mul(size);
        }
        if product > budget {
            return Err(Error::Budget(format!(
                "{product} tuples exceed the brute-force budget {budget}"
            )));
        }
        let spaces = (0..n)
            .map(|i| {
                let en = SubspaceEnum::new(field, d[i], e[i], usize::MAX)?;
                let mut v = Vec::with_capacity(en.len());
                en.for_each(|_, rows| {
                    let b = en.basis(rows);
                    let a = annihilator(&b);
                    v.push((b, a));
                });
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let (parent, mut order) = rooted(m, 0);
        order.reverse();
        Ok(Some(Search {
            m,
            spaces,
            parent,
            order,
        }))
    }

    fn run(&self, pos: usize, choice: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if pos == self.order.len() {
            visit(choice);
            return;
        }
        let v = self.order[pos];
        for k in 0..self.spaces[v].len() {
            if let Some((u, a)) = self.parent[v] {
                let ar = self.m.quiver().arrow(a);
                let (s, t) = (ar.source, ar.target);
                let (ks, kt) = if s == v {
                    (k, choice[u])
                } else {
                    (choice[u], k)
                };
                let img = self
                    .m
                    .map(a)
                    .mul(&self.spaces[s][ks].0)
                    .expect("shapes agree");
                if !self.spaces[t][kt]
                    .1
                    .mul(&img)
                    .expect("shapes agree")
                    .is_zero()
                {
                    continue;
                }
            }
            choice[v] = k;
            self.run(pos + 1, choice, visit);
        }
    }
}

/// Direct enumeration of all tuples `(U_i)` with `M_a(U_s) subset U_t`,
/// within a budget on the size of the ambient product of Grassmannians.
pub fn brute_force_count(m: &Representation, e: &DimVector, budget: u128) -> Result<u128> {
    let Some(search) = Search::new(m, e, budget)? else {
        return Ok(0);
    };
    let mut total = 0u128;
    let mut choice = vec![0; e.len()];
    search.run(0, &mut choice, &mut |_| total += 1);
    Ok(total)
}

/// Every `F_p`-point of `Gr_e(M)` as one `d_i x e_i` basis matrix per vertex.
pub fn enumerate_points(
    m: &Representation,
    e: &DimVector,
    budget: u128,
) -> Result<Vec<Vec<FMatrix>>> {
    let Some(search) = Search::new(m, e, budget)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut choice = vec![0; e.len()];
    search.run(0, &mut choice, &mut |c| {
        out.push(
            c.iter()
                .enumerate()
                .map(|(i, &k)| search.spaces[i][k].0.clone())
                .collect(),
        )
    });
    Ok(out)
}

/// Every point of `prod_i Gr(e_i, d_i)`, within the same budget.
pub fn enumerate_ambient(
    field: PrimeField,
    d: &DimVector,
    e: &DimVector,
    budget: u128,
) -> Result<Vec<Vec<FMatrix>>> {
    let mut size: u128 = 1;
    for i in 0..d.len() {
        size = size.saturating_mul(
            gaussian_binomial_u128(d[i] as u32, e[i] as u32, field.p()).ok_or_else(overflow)?,
        );
    }
    if size > budget {
        return Err(Error::Budget(format!(
            "{size} tuples exceed the budget {budget}"
        )));
    }
    let mut out: Vec<Vec<FMatrix>> = vec![Vec::new()];
    for i in 0..d.len() {
        let en = SubspaceEnum::new(field, d[i], e[i], usize::MAX)?;
        let mut bases = Vec::with_capacity(en.len());
        en.for_each(|_, rows| bases.push(en.basis(rows)));
        out = out
            .into_iter()
            .flat_map(|prefix| {
                bases.iter().map(move |b| {
                    let mut t = prefix.clone();
                    t.push(b.clone());
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingPolynomial {
    coeffs: Vec<BigRational>,
}

impl CountingPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> CountingPolynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CountingPolynomial { coeffs }
    }

    pub fn from_integers(c: &[i64]) -> CountingPolynomial {
        CountingPolynomial::new(
            c.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else {
                abs.to_string()
            };
            match k {
                0 => write!(f, "{}", abs)?,
                1 => write!(f, "{coeff}q")?,
                _ => write!(f, "{coeff}q^{k}")?,
            }
        }
        Ok(())
    }
}

/// The unique polynomial of degree `< nodes.len()` through the nodes
/// (Newton divided differences over the rationals).
pub fn interpolate(nodes: &[(u64, BigInt)]) -> CountingPolynomial {
    let xs: Vec<BigRational> = nodes
        .iter()
        .map(|(x, _)| BigRational::from_integer(BigInt::from(*x)))
        .collect();
    let mut dd: Vec<BigRational> = nodes
        .iter()
        .map(|(_, y)| BigRational::from_integer(y.clone()))
        .collect();
    let n = nodes.len();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // expand c_0 + c_1 (x - x_0) + ... into the monomial basis
    let mut poly: Vec<BigRational> = Vec::new();
    for i in (0..n).rev() {
        // poly = poly * (x - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    CountingPolynomial::new(poly)
}

/// Interpolate through the first `degree_bound + 1` nodes and check the rest.
/// Returns the polynomial and whether every held-out node matches.
pub fn interpolate_checked(
    nodes: &[(u64, BigInt)],
    degree_bound: usize,
) -> Result<(CountingPolynomial, bool)> {
    let needed = degree_bound + 3;
    if nodes.len() < needed {
        return Err(Error::TooFewNodes {
            needed,
            got: nodes.len(),
        });
    }
    let poly = interpolate(&nodes[..degree_bound + 1]);
    let held = nodes[degree_bound + 1..]
        .iter()
        .all(|(x, y)| poly.eval_int(*x) == BigRational::from_integer(y.clone()));
    Ok((poly, held))
}

/// `sum_i e_i (d_i - e_i)`, the dimension of the ambient product of
/// Grassmannians and hence a bound for the counting polynomial's degree.
pub fn ambient_dimension(d: &DimVector, e: &DimVector) -> usize {
    d.0.iter()
        .zip(&e.0)
        .map(|(&di, &ei)| ei * di.saturating_sub(ei))
        .sum()
}

/// Primes `2, 3, 5, ...`: enough for interpolation plus two held-out nodes.
pub fn interpolation_primes(d: &DimVector, e: &DimVector) -> Vec<u32> {
    first_primes(ambient_dimension(d, e) + 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dp,
    Brute,
    GroebnerCrosscheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// Degree of the counting polynomial; `None` for the empty variety.
    pub dimension: Option<usize>,
    /// Leading coefficient when it is a positive integer.
    pub top_count: Option<u64>,
    pub polynomial: CountingPolynomial,
    pub consistent: bool,
    pub method: Method,
    pub primes: Vec<u32>,
    pub counts: Vec<u128>,
    /// Dimension of the variety cut out by the Plücker relations, if computed.
    pub groebner_dim: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub isoclass: String,
    pub dim: Option<usize>,
    pub top_components: Option<u64>,
    pub poly: Vec<String>,
    pub consistent: bool,
    pub primes: Vec<u32>,
    pub counts: Vec<String>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groebner_dim: Option<i64>,
}

impl Classification {
    pub fn record(&self, isoclass: &str) -> ClassificationRecord {
        ClassificationRecord {
            isoclass: isoclass.to_string(),
            dim: self.dimension,
            top_components: self.top_count,
            poly: self.polynomial.to_strings(),
            consistent: self.consistent,
            primes: self.primes.clone(),
            counts: self.counts.iter().map(|c| c.to_string()).collect(),
            method: self.method,
            groebner_dim: self.groebner_dim,
        }
    }
}

/// Classify `Gr_e(M)` from realizations of `M` over several primes, listed
/// in increasing order of the prime. Uses the tree count, or brute force when
/// `brute` is set.
pub fn classify(reps: &[Representation], e: &DimVector, brute: bool) -> Result<Classification> {
    let first = reps
        .first()
        .ok_or(Error::TooFewNodes { needed: 1, got: 0 })?;
    let bound = ambient_dimension(first.dims(), e);
    if reps.len() < bound + 3 {
        return Err(Error::TooFewNodes {
            needed: bound + 3,
            got: reps.len(),
        });
    }
    let counts: Vec<u128> = reps
        .par_iter()
        .map(|r| {
            if brute {
                brute_force_count(r, e, BRUTE_FORCE_BUDGET)
            } else {
                count_points(r, e)
            }
        })
        .collect::<Result<_>>()?;
    let primes: Vec<u32> = reps.iter().map(|r| r.field().p()).collect();
    let nodes: Vec<(u64, BigInt)> = primes
        .iter()
        .zip(&counts)
        .map(|(&p, &c)| (p as u64, BigInt::from(c)))
        .collect();
    let (polynomial, held_out) = interpolate_checked(&nodes, bound)?;
    let leading_ok = polynomial.leading().is_some_and(|c| c.is_positive());
    let consistent = held_out && polynomial.is_integral() && leading_ok;
    let top_count = polynomial
        .leading()
        .filter(|c| c.is_integer() && c.is_positive())
        .and_then(|c| c.to_integer().to_u64());
    Ok(Classification {
        dimension: polynomial.degree(),
        top_count,
        polynomial,
        consistent,
        method: if brute { Method::Brute } else { Method::Dp },
        primes,
        counts,
        groebner_dim: None,
    })
}

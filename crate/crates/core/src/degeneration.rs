//! The poset of isoclasses of a fixed dimension vector under degeneration.
//!
//! `M <= N` (N lies in the orbit closure of M) iff
//! `dim Hom(M, X) <= dim Hom(N, X)` for every indecomposable `X`, or
//! equivalently with the Hom arguments flipped.

use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modrep::{Catalog, Isoclass, Representation};
use crate::quiver::DimVector;

pub const DEFAULT_MAX_NODES: usize = 20_000;

/// All isoclasses of dimension `d`, i.e. all multisets of catalog entries
/// whose dimension vectors sum to `d`. Fails once more than `max_nodes`
/// classes have been produced.
pub fn enumerate_isoclasses(
    catalog: &Catalog,
    d: &DimVector,
    max_nodes: usize,
) -> Result<Vec<Isoclass>> {
    if d.len() != catalog.quiver().n_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "dimension vector {d} on a quiver with {} vertices",
            catalog.quiver().n_vertices()
        )));
    }
    let roots: Vec<&DimVector> = catalog.labels().iter().map(|l| &l.root).collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; roots.len()];
    knapsack(&roots, 0, d.clone(), &mut current, &mut out, max_nodes)?;
    Ok(out)
}

fn knapsack(
    roots: &[&DimVector],
    idx: usize,
    remaining: DimVector,
    current: &mut Vec<u32>,
    out: &mut Vec<Isoclass>,
    max_nodes: usize,
) -> Result<()> {
    if remaining.is_zero() {
        if out.len() >= max_nodes {
            return Err(Error::Budget(format!("more than {max_nodes} isoclasses")));
        }
        out.push(Isoclass(current.clone()));
        return Ok(());
    }
    if idx == roots.len() {
        return Ok(());
    }
    let mut rem = remaining;
    let mut m = 0;
    loop {
        current[idx] = m;
        knapsack(roots, idx + 1, rem.clone(), current, out, max_nodes)?;
        match rem.checked_sub(roots[idx]) {
            Some(r) => rem = r,
            None => break,
        }
        m += 1;
    }
    current[idx] = 0;
    Ok(())
}

fn check_same_dim(catalog: &Catalog, m: &Isoclass, n: &Isoclass) -> Result<()> {
    let (dm, dn) = (catalog.dim_of(m), catalog.dim_of(n));
    if dm != dn {
        return Err(Error::DimensionMismatch(format!("{dm} vs {dn}")));
    }
    Ok(())
}

fn dominated(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `M <= N` tested against `dim Hom(-, X)` for every catalog entry `X`.
pub fn degenerates_to(catalog: &Catalog, m: &Isoclass, n: &Isoclass) -> Result<bool> {
    check_same_dim(catalog, m, n)?;
    Ok(dominated(&catalog.fingerprint(m), &catalog.fingerprint(n)))
}

/// `M <= N` tested against `dim Hom(X, -)` for every catalog entry `X`.
pub fn dual_degenerates_to(catalog: &Catalog, m: &Isoclass, n: &Isoclass) -> Result<bool> {
    check_same_dim(catalog, m, n)?;
    Ok(dominated(
        &catalog.dual_fingerprint(m),
        &catalog.dual_fingerprint(n),
    ))
}

/// The Hom criterion evaluated on explicit representations with the linear
/// solver rather than the catalog table.
pub fn degenerates_to_reps(
    catalog: &Catalog,
    m: &Representation,
    n: &Representation,
) -> Result<bool> {
    if m.dims() != n.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            m.dims(),
            n.dims()
        )));
    }
    for x in catalog.models() {
        if m.hom_dim(x)? > n.hom_dim(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique rigid isoclass of dimension `d`, whose orbit is open.
pub fn generic_isoclass(catalog: &Catalog, d: &DimVector) -> Result<Isoclass> {
    generic_among(catalog, &enumerate_isoclasses(catalog, d, usize::MAX)?)
}

fn generic_among(catalog: &Catalog, nodes: &[Isoclass]) -> Result<Isoclass> {
    let rigid: Vec<&Isoclass> = nodes
        .iter()
        .filter(|c| catalog.ext_iso(c, c) == 0)
        .collect();
    match rigid.as_slice() {
        [one] => Ok((*one).clone()),
        _ => Err(Error::Internal(format!(
            "expected one rigid isoclass, found {}",
            rigid.len()
        ))),
    }
}

/// For equioriented type A: `M <= N` iff every path map of `M` has rank at
/// least that of `N`. Evaluated on the realized matrix models.
pub fn rank_order(catalog: &Catalog, m: &Isoclass, n: &Isoclass) -> Result<bool> {
    if !catalog.quiver().is_equioriented_a() {
        return Err(Error::NotEquioriented);
    }
    check_same_dim(catalog, m, n)?;
    let (rm, rn) = (
        rank_profile(&catalog.realize(m)?),
        rank_profile(&catalog.realize(n)?),
    );
    Ok(rm.iter().zip(&rn).all(|(a, b)| a >= b))
}

/// Ranks of the path maps of `rep`, over all nontrivial paths in
/// `enumerate_paths` order.
pub fn rank_profile(rep: &Representation) -> Vec<usize> {
    rep.quiver()
        .enumerate_paths()
        .iter()
        .map(|p| rep.path_matrix(p).rank())
        .collect()
}

/// Per-node payload attached by downstream classification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub in_gamma1: bool,
    pub in_gamma2: bool,
    pub text: Option<String>,
}

#[derive(Debug, Clone)]
pub struct IsoclassPoset {
    catalog: Arc<Catalog>,
    dim: DimVector,
    nodes: Vec<Isoclass>,
    fingerprints: Vec<Vec<usize>>,
    /// `above[i]` holds every `j` with `nodes[i] <= nodes[j]`, including `i`.
    above: Vec<FixedBitSet>,
    hasse: Vec<(usize, usize)>,
    generic: usize,
    semisimple: usize,
    annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub dim: Vec<usize>,
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub generic: usize,
    pub semisimple: usize,
    pub annotations: Vec<Annotation>,
}

pub fn build_poset(
    catalog: Arc<Catalog>,
    d: &DimVector,
    max_nodes: usize,
) -> Result<IsoclassPoset> {
    let nodes = enumerate_isoclasses(&catalog, d, max_nodes)?;
    let fingerprints: Vec<Vec<usize>> = nodes.par_iter().map(|c| catalog.fingerprint(c)).collect();
    let n = nodes.len();
    let above: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut set = FixedBitSet::with_capacity(n);
            for j in 0..n {
                if dominated(&fingerprints[i], &fingerprints[j]) {
                    set.insert(j);
                }
            }
            set
        })
        .collect();
    for i in 0..n {
        for j in above[i].ones() {
            if i != j && above[j].contains(i) {
                return Err(Error::Internal(format!(
                    "distinct isoclasses {i} and {j} share a Hom fingerprint"
                )));
            }
        }
    }
    let hasse = transitive_reduction(&above);
    let generic_class = generic_among(&catalog, &nodes)?;
    let generic = nodes
        .iter()
        .position(|c| *c == generic_class)
        .expect("generic is a node");
    let mut ss = Isoclass::zero(catalog.len());
    for i in 0..d.len() {
        ss.0[catalog.simple(i)] = d[i] as u32;
    }
    let semisimple = nodes
        .iter()
        .position(|c| *c == ss)
        .expect("semisimple is a node");
    let annotations = vec![Annotation::default(); n];
    Ok(IsoclassPoset {
        catalog,
        dim: d.clone(),
        nodes,
        fingerprints,
        above,
        hasse,
        generic,
        semisimple,
        annotations,
    })
}

/// Cover relations `(i, j)` with `i < j` and nothing strictly between.
fn transitive_reduction(above: &[FixedBitSet]) -> Vec<(usize, usize)> {
    let n = above.len();
    let strict: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut s = above[i].clone();
            s.set(i, false);
            s
        })
        .collect();
    let covers: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut reach2 = FixedBitSet::with_capacity(n);
            for k in strict[i].ones() {
                reach2.union_with(&strict[k]);
            }
            let mut c = strict[i].clone();
            c.difference_with(&reach2);
            c.ones().map(|j| (i, j)).collect()
        })
        .collect();
    covers.into_iter().flatten().collect()
}

impl IsoclassPoset {
    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Isoclass] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Isoclass {
        &self.nodes[i]
    }

    pub fn index_of(&self, c: &Isoclass) -> Option<usize> {
        self.nodes.iter().position(|x| x == c)
    }

    pub fn fingerprint(&self, i: usize) -> &[usize] {
        &self.fingerprints[i]
    }

    /// `nodes[i] <= nodes[j]`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    pub fn above(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn generic(&self) -> usize {
        self.generic
    }

    pub fn semisimple(&self) -> usize {
        self.semisimple
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| (0..self.len()).all(|i| i == j || !self.le(i, j)))
            .collect()
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn annotate(&mut self, i: usize, a: Annotation) {
        self.annotations[i] = a;
    }

    /// Nodes satisfying `pred`, which must form a lower ideal.
    pub fn lower_ideal(&self, pred: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
        let member: Vec<bool> = (0..self.len()).map(&pred).collect();
        self.check_lower_ideal(&member)?;
        Ok((0..self.len()).filter(|&i| member[i]).collect())
    }

    pub fn check_lower_ideal(&self, member: &[bool]) -> Result<()> {
        for j in 0..self.len() {
            if !member[j] {
                continue;
            }
            for i in 0..self.len() {
                if !member[i] && self.le(i, j) {
                    return Err(Error::NotLowerIdeal(format!(
                        "{} is below {} but not in the set",
                        self.label(i),
                        self.label(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maximal elements of the subset `members`.
    pub fn sinks(&self, members: &[usize]) -> Vec<usize> {
        members
            .iter()
            .copied()
            .filter(|&j| members.iter().all(|&k| k == j || !self.le(j, k)))
            .collect()
    }

    pub fn label(&self, i: usize) -> String {
        self.catalog.format(&self.nodes[i])
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            dim: self.dim.0.clone(),
            nodes: (0..self.len()).map(|i| self.label(i)).collect(),
            edges: self.hasse.clone(),
            generic: self.generic,
            semisimple: self.semisimple,
            annotations: self.annotations.clone(),
        }
    }

    /// Graphviz digraph of the Hasse diagram, edges pointing from a class to
    /// its covering degenerations. Annotated members of `Gamma(1)` and
    /// `Gamma(2)` are filled.
    pub fn dot_export(&self) -> String {
        let mut s = String::from(
            "digraph degenerations {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n",
        );
        for i in 0..self.len() {
            let a = &self.annotations[i];
            let style = if a.in_gamma1 {
                ", style=filled, fillcolor=\"palegreen\""
            } else if a.in_gamma2 {
                ", style=filled, fillcolor=\"lightblue\""
            } else {
                ""
            };
            let mut label = self.label(i).replace(" + ", "\\n");
            if let Some(t) = &a.text {
                label.push_str("\\n[");
                label.push_str(t);
                label.push(']');
            }
            let _ = writeln!(s, "  n{i} [label=\"{label}\"{style}];");
        }
        for &(i, j) in &self.hasse {
            let _ = writeln!(s, "  n{i} -> n{j};");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::PrimeField;
    use crate::quiver::{named, Quiver};

    fn cat(q: Quiver) -> Arc<Catalog> {
        Arc::new(Catalog::new(Arc::new(q), PrimeField::default()).unwrap())
    }

    #[test]
    fn a2_poset() {
        let c = cat(Quiver::equioriented_a(2));
        let p = build_poset(c.clone(), &DimVector(vec![1, 1]), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.hasse().len(), 1);
        let u12 = c.parse_isoclass("U(1,2)").unwrap();
        let ss = c.parse_isoclass("U(1,1) + U(2,2)").unwrap();
        assert!(degenerates_to(&c, &u12, &ss).unwrap());
        assert!(!degenerates_to(&c, &ss, &u12).unwrap());
        assert!(rank_order(&c, &u12, &ss).unwrap());
        assert!(!rank_order(&c, &ss, &u12).unwrap());
        assert_eq!(p.node(p.generic()), &u12);
        assert_eq!(p.hasse(), &[(p.generic(), p.semisimple())]);
        let dot = p.dot_export();
        assert_eq!(dot.matches("->").count(), 1);
        assert_eq!(dot, p.dot_export());
    }

    #[test]
    fn enumeration_counts() {
        let c = cat(Quiver::equioriented_a(3));
        assert_eq!(
            enumerate_isoclasses(&c, &DimVector(vec![4, 4, 4]), DEFAULT_MAX_NODES)
                .unwrap()
                .len(),
            35
        );
        let z = cat(named::zigzag_a3());
        assert_eq!(
            enumerate_isoclasses(&z, &DimVector(vec![3, 4, 3]), DEFAULT_MAX_NODES)
                .unwrap()
                .len(),
            26
        );
        assert!(matches!(
            enumerate_isoclasses(&z, &DimVector(vec![3, 4, 3]), 10),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn generic_of_equioriented() {
        let c = cat(Quiver::equioriented_a(3));
        let g = generic_isoclass(&c, &DimVector(vec![4, 4, 4])).unwrap();
        assert_eq!(c.format(&g), "4*U(1,3)");
        let root = DimVector(vec![0, 1, 1]);
        let g = generic_isoclass(&c, &root).unwrap();
        assert_eq!(
            g,
            Isoclass::single(c.len(), c.index_of_root(&root).unwrap())
        );
    }

    #[test]
    fn poset_extremes_and_duality() {
        let z = cat(named::zigzag_a3());
        let p = build_poset(z.clone(), &DimVector(vec![3, 4, 3]), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(p.minimal_elements(), vec![p.generic()]);
        let all: Vec<usize> = (0..p.len()).collect();
        assert_eq!(p.sinks(&all), vec![p.semisimple()]);
        for i in 0..p.len() {
            for j in 0..p.len() {
                assert_eq!(
                    p.le(i, j),
                    dual_degenerates_to(&z, p.node(i), p.node(j)).unwrap()
                );
            }
        }
        let realized = z.realize(p.node(p.generic())).unwrap();
        assert!(realized.is_rigid());
    }

    #[test]
    fn lower_ideal_validation() {
        let c = cat(Quiver::equioriented_a(2));
        let p = build_poset(c, &DimVector(vec![1, 1]), DEFAULT_MAX_NODES).unwrap();
        let g = p.generic();
        assert_eq!(p.lower_ideal(|i| i == g).unwrap(), vec![g]);
        let s = p.semisimple();
        assert!(matches!(
            p.lower_ideal(|i| i == s),
            Err(Error::NotLowerIdeal(_))
        ));
    }

    #[test]
    fn rank_order_needs_equioriented() {
        let z = cat(named::zigzag_a3());
        let c = Isoclass::single(z.len(), 0);
        assert!(matches!(
            rank_order(&z, &c, &c),
            Err(Error::NotEquioriented)
        ));
    }
}

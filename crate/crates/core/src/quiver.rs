//! Quivers whose underlying graph is a tree, dimension vectors, paths and the
//! Euler form.
//!
//! Vertices carry external positive-integer names (as written in input files)
//! and dense 0-based internal indices. Arrows keep their position in the input
//! as a stable index, also across reflections.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    names: Vec<u32>,
    arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    OtherTree,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::OtherTree => write!(f, "other-tree"),
        }
    }
}

/// A dimension vector, one entry per vertex in internal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scaled(&self, k: usize) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }
}

impl std::ops::Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A non-empty directed path, stored as its arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
}

impl Path {
    pub fn new(quiver: &Quiver, arrows: Vec<usize>) -> Result<Path> {
        let first = *arrows
            .first()
            .ok_or_else(|| Error::InvalidQuiver("empty path".into()))?;
        for w in arrows.windows(2) {
            if quiver.arrow(w[0]).target != quiver.arrow(w[1]).source {
                return Err(Error::InvalidQuiver(format!(
                    "arrows {} and {} do not compose",
                    w[0], w[1]
                )));
            }
        }
        let last = *arrows.last().unwrap();
        Ok(Path {
            source: quiver.arrow(first).source,
            target: quiver.arrow(last).target,
            arrows,
        })
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl Quiver {
    /// Builds a quiver from external vertex names and arrows given by names.
    pub fn new(names: Vec<u32>, arrows_by_name: &[(u32, u32)]) -> Result<Quiver> {
        if names.is_empty() {
            return Err(Error::InvalidQuiver("no vertices".into()));
        }
        let mut sorted = names.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuiver("repeated vertex name".into()));
        }
        if names.contains(&0) {
            return Err(Error::InvalidQuiver("vertex names must be positive".into()));
        }
        let index = |v: u32| {
            names
                .iter()
                .position(|&x| x == v)
                .ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex {v}")))
        };
        let mut arrows = Vec::with_capacity(arrows_by_name.len());
        for &(s, t) in arrows_by_name {
            let (s, t) = (index(s)?, index(t)?);
            if s == t {
                return Err(Error::InvalidQuiver(format!("loop at vertex {}", names[s])));
            }
            if arrows.iter().any(|a: &Arrow| {
                (a.source == s && a.target == t) || (a.source == t && a.target == s)
            }) {
                return Err(Error::InvalidQuiver(format!(
                    "multiple edges between {} and {}",
                    names[s], names[t]
                )));
            }
            arrows.push(Arrow {
                source: s,
                target: t,
            });
        }
        let q = Quiver { names, arrows };
        if q.arrows.len() + 1 != q.names.len() || !q.is_connected() {
            return Err(Error::InvalidQuiver(
                "underlying graph is not a tree".into(),
            ));
        }
        Ok(q)
    }

    /// Equioriented `1 -> 2 -> ... -> n`.
    pub fn equioriented_a(n: usize) -> Quiver {
        let names: Vec<u32> = (1..=n as u32).collect();
        let arrows: Vec<(u32, u32)> = (1..n as u32).map(|i| (i, i + 1)).collect();
        Quiver::new(names, &arrows).expect("path quiver is a tree")
    }

    /// Parses the line-based text format (`vertices: 1 2 3`, `arrow: 1 -> 2`).
    pub fn parse(text: &str) -> Result<Quiver> {
        let mut names: Option<Vec<u32>> = None;
        let mut arrows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `key: value`"))?;
            match key.trim() {
                "vertices" => {
                    if names.is_some() {
                        return Err(err("duplicate `vertices` declaration"));
                    }
                    let parsed = rest
                        .split_whitespace()
                        .map(|t| t.parse::<u32>().map_err(|_| err("bad vertex name")))
                        .collect::<Result<Vec<_>>>()?;
                    names = Some(parsed);
                }
                "arrow" => {
                    let (s, t) = rest
                        .split_once("->")
                        .ok_or_else(|| err("expected `s -> t`"))?;
                    let s = s
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| err("bad arrow source"))?;
                    let t = t
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| err("bad arrow target"))?;
                    arrows.push((s, t));
                }
                _ => return Err(err("unknown declaration")),
            }
        }
        let names = names.ok_or(Error::Parse {
            line: 0,
            msg: "missing `vertices` line".into(),
        })?;
        Quiver::new(names, &arrows)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("vertices:");
        for n in &self.names {
            s.push_str(&format!(" {n}"));
        }
        s.push('\n');
        for a in &self.arrows {
            s.push_str(&format!(
                "arrow: {} -> {}\n",
                self.names[a.source], self.names[a.target]
            ));
        }
        s
    }

    fn is_connected(&self) -> bool {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    pub fn names(&self) -> &[u32] {
        &self.names
    }

    pub fn name(&self, v: usize) -> u32 {
        self.names[v]
    }

    pub fn vertex_index(&self, name: u32) -> Option<usize> {
        self.names.iter().position(|&x| x == name)
    }

    pub fn incoming(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn outgoing(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.arrows
            .iter()
            .filter_map(|a| {
                if a.source == v {
                    Some(a.target)
                } else if a.target == v {
                    Some(a.source)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == v || a.target == v)
            .count()
    }

    /// The arrow joining two adjacent vertices, in either direction.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.arrows
            .iter()
            .position(|a| (a.source == u && a.target == v) || (a.source == v && a.target == u))
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.outgoing(v).next().is_none()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.incoming(v).next().is_none()
    }

    /// The quiver with every arrow at `k` reversed; arrow indices are kept.
    pub fn reflect_at(&self, k: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&a| {
                if a.source == k || a.target == k {
                    Arrow {
                        source: a.target,
                        target: a.source,
                    }
                } else {
                    a
                }
            })
            .collect();
        Quiver {
            names: self.names.clone(),
            arrows,
        }
    }

    /// The opposite quiver (all arrows reversed).
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                source: a.target,
                target: a.source,
            })
            .collect();
        Quiver {
            names: self.names.clone(),
            arrows,
        }
    }

    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        let n = self.n_vertices();
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Euler form on a quiver with {n} vertices got vectors of length {} and {}",
                a.len(),
                b.len()
            )));
        }
        let diag: i64 = (0..n).map(|i| (a[i] * b[i]) as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|ar| (a[ar.source] * b[ar.target]) as i64)
            .sum();
        Ok(diag - off)
    }

    /// The directed path from `from` to `to`, if one exists (unique in a tree).
    pub fn path_between(&self, from: usize, to: usize) -> Option<Path> {
        if from == to {
            return None;
        }
        // BFS along outgoing arrows, remembering the arrow used.
        let mut prev: Vec<Option<usize>> = vec![None; self.n_vertices()];
        let mut seen = vec![false; self.n_vertices()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for a in self.outgoing(v) {
                let w = self.arrows[a].target;
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut arrows = Vec::new();
        let mut v = to;
        while v != from {
            let a = prev[v].expect("reachable vertex has a predecessor arrow");
            arrows.push(a);
            v = self.arrows[a].source;
        }
        arrows.reverse();
        Some(Path::new(self, arrows).expect("BFS path composes"))
    }

    /// `reach[i][j]`: there is a directed path (possibly trivial) from i to j.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.n_vertices();
        (0..n)
            .map(|i| {
                let mut seen = vec![false; n];
                seen[i] = true;
                let mut stack = vec![i];
                while let Some(v) = stack.pop() {
                    for a in self.outgoing(v) {
                        let w = self.arrows[a].target;
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// All directed paths of length at least one, ordered by (source, target).
    pub fn enumerate_paths(&self) -> Vec<Path> {
        let n = self.n_vertices();
        let mut paths = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if let Some(p) = self.path_between(i, j) {
                    paths.push(p);
                }
            }
        }
        paths
    }

    pub fn dynkin_type(&self) -> DynkinType {
        let n = self.n_vertices();
        let degrees: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        if degrees.iter().all(|&d| d <= 2) {
            return DynkinType::A(n);
        }
        let branch_points: Vec<usize> = (0..n).filter(|&v| degrees[v] >= 3).collect();
        if branch_points.len() != 1 || degrees[branch_points[0]] != 3 {
            return DynkinType::OtherTree;
        }
        let center = branch_points[0];
        let mut short = 0;
        for start in self.neighbors(center) {
            // walk away from the center and measure the branch length
            let (mut prev, mut cur, mut len) = (center, start, 1);
            loop {
                let next: Vec<usize> = self
                    .neighbors(cur)
                    .into_iter()
                    .filter(|&w| w != prev)
                    .collect();
                match next.as_slice() {
                    [] => break,
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => unreachable!("single branch point"),
                }
            }
            if len == 1 {
                short += 1;
            }
        }
        if short >= 2 {
            DynkinType::D(n)
        } else {
            DynkinType::OtherTree
        }
    }

    pub fn is_dynkin_ad(&self) -> bool {
        !matches!(self.dynkin_type(), DynkinType::OtherTree)
    }

    /// For a type A quiver, vertices listed from one end of the path graph to
    /// the other, starting at the end with the smaller external name.
    pub fn linear_order(&self) -> Option<Vec<usize>> {
        if !matches!(self.dynkin_type(), DynkinType::A(_)) {
            return None;
        }
        let n = self.n_vertices();
        if n == 1 {
            return Some(vec![0]);
        }
        let ends: Vec<usize> = (0..n).filter(|&v| self.degree(v) == 1).collect();
        let start = *ends.iter().min_by_key(|&&v| self.names[v]).unwrap();
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < n {
            let next = self
                .neighbors(cur)
                .into_iter()
                .find(|&w| w != prev)
                .unwrap();
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// True for a type A quiver whose arrows all point the same way along the
    /// path graph.
    pub fn is_equioriented_a(&self) -> bool {
        let Some(order) = self.linear_order() else {
            return false;
        };
        let pos = |v: usize| order.iter().position(|&x| x == v).unwrap();
        let forward = self
            .arrows
            .iter()
            .filter(|a| pos(a.source) < pos(a.target))
            .count();
        forward == 0 || forward == self.arrows.len()
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .arrows
            .iter()
            .map(|a| format!("{}->{}", self.names[a.source], self.names[a.target]))
            .collect();
        if parts.is_empty() {
            write!(f, "[{}]", self.names[0])
        } else {
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

/// Common quivers used in examples and tests.
pub mod named {
    use super::Quiver;

    pub fn zigzag_a3() -> Quiver {
        Quiver::new(vec![1, 2, 3], &[(1, 2), (3, 2)]).unwrap()
    }

    /// `1 -> 2 <- 3 <- 4`.
    pub fn a4_mixed() -> Quiver {
        Quiver::new(vec![1, 2, 3, 4], &[(1, 2), (3, 2), (4, 3)]).unwrap()
    }

    /// `1 -> 2 <- 3 <- 4 <- 5`.
    pub fn a5_mixed() -> Quiver {
        Quiver::new(vec![1, 2, 3, 4, 5], &[(1, 2), (3, 2), (4, 3), (5, 4)]).unwrap()
    }

    /// D4 with arrows `1 -> 2`, `2 -> 3`, `2 -> 4`.
    pub fn d4_subspace() -> Quiver {
        Quiver::new(vec![1, 2, 3, 4], &[(1, 2), (2, 3), (2, 4)]).unwrap()
    }

    /// D4 with every arrow pointing to the center 2.
    pub fn d4_into_center() -> Quiver {
        Quiver::new(vec![1, 2, 3, 4], &[(1, 2), (3, 2), (4, 2)]).unwrap()
    }
}

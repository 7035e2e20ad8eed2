//! Plücker coordinates on a product of Grassmannians `prod_i Gr(e_i, d_i)`
//! and the quadrics cutting out the quiver Grassmannian `Gr_e(M)`.
//!
//! For a path `pi: s -> t` with matrix `m = M_pi` and index sets `I` of size
//! `e_s - 1`, `J` of size `e_t + 1` the relation is
//!
//! `R(pi, I, J) = sum_{p not in I, q in J} (-1)^{eps(p,I) + eps(q,J)}
//!     m[q][p] * D^s_{I+p} * D^t_{J-q}`,  `eps(x, K) = #{k in K : k <= x}`.
//!
//! The classical Grassmann relations at a vertex are the same expression for
//! the identity map of that vertex.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{FMatrix, PrimeField};
use crate::modrep::Representation;
use crate::poly::{MPoly, Monomial, PolyRing};
use crate::quiver::{DimVector, Path, Quiver};

/// `D^{(vertex)}_set`, with `set` a strictly increasing list of 0-based
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlueckerVariable {
    pub vertex: usize,
    pub set: Vec<u8>,
}

/// All `k`-subsets of `0..n` in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> Vec<Vec<u8>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // advance: find the first position that can be bumped
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n as u8 };
            if cur[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k {
            return out;
        }
        cur[i] += 1;
        for (j, v) in cur.iter_mut().enumerate().take(i) {
            *v = j as u8;
        }
    }
}

/// Variables for `d`, `e`: vertex-major, colex within a vertex.
pub fn variables(d: &DimVector, e: &DimVector) -> Result<Vec<PlueckerVariable>> {
    if d.len() != e.len() || !e.le(d) {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimension {e} does not fit in {d}"
        )));
    }
    Ok((0..d.len())
        .flat_map(|i| {
            colex_subsets(d[i], e[i])
                .into_iter()
                .map(move |set| PlueckerVariable { vertex: i, set })
        })
        .collect())
}

/// `#{k in set : k <= x}`.
fn eps(x: u8, set: &[u8]) -> usize {
    set.iter().filter(|&&k| k <= x).count()
}

fn insert_sorted(set: &[u8], x: u8) -> Vec<u8> {
    let mut v = set.to_vec();
    let pos = v.partition_point(|&k| k < x);
    v.insert(pos, x);
    v
}

/// Where a relation comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Classical { vertex: usize },
    Arrow { arrow: usize },
    Path { arrows: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Scope {
    Arrows,
    #[default]
    Paths,
}

/// The polynomial ring of Plücker coordinates for `(d, e)` over a quiver.
#[derive(Debug, Clone)]
pub struct PlueckerRing {
    quiver_names: Vec<u32>,
    d: DimVector,
    e: DimVector,
    vars: Vec<PlueckerVariable>,
    index: HashMap<PlueckerVariable, usize>,
    ring: PolyRing,
}

impl PlueckerRing {
    pub fn new(
        quiver: &Quiver,
        field: PrimeField,
        d: &DimVector,
        e: &DimVector,
    ) -> Result<PlueckerRing> {
        if d.len() != quiver.n_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector {d} on {} vertices",
                quiver.n_vertices()
            )));
        }
        let vars = variables(d, e)?;
        if vars.iter().any(|v| v.set.len() > 255) || d.0.iter().any(|&x| x > 255) {
            return Err(Error::OutOfRange("vertex dimension above 255".into()));
        }
        let index = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let names = vars
            .iter()
            .map(|v| var_name(quiver.name(v.vertex), &v.set))
            .collect();
        let ring = PolyRing {
            field,
            block: vars.iter().map(|v| v.vertex).collect(),
            n_blocks: d.len(),
            names,
        };
        Ok(PlueckerRing {
            quiver_names: quiver.names().to_vec(),
            d: d.clone(),
            e: e.clone(),
            vars,
            index,
            ring,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field
    }

    pub fn variables(&self) -> &[PlueckerVariable] {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn d(&self) -> &DimVector {
        &self.d
    }

    pub fn e(&self) -> &DimVector {
        &self.e
    }

    pub fn var_index(&self, vertex: usize, set: &[u8]) -> Option<usize> {
        self.index
            .get(&PlueckerVariable {
                vertex,
                set: set.to_vec(),
            })
            .copied()
    }

    fn quadratic(&self, a: usize, b: usize) -> Monomial {
        let mut m = Monomial::one(self.n_vars());
        m.0[a] += 1;
        m.0[b] += 1;
        m
    }

    /// All nonzero `R(I, J)` for a linear map `m: k^{d_s} -> k^{d_t}`.
    fn incidence(&self, s: usize, t: usize, m: &FMatrix) -> Vec<MPoly> {
        let (es, et) = (self.e[s], self.e[t]);
        if es == 0 || et + 1 > self.d[t] {
            return Vec::new();
        }
        let f = self.field();
        let is = colex_subsets(self.d[s], es - 1);
        let js = colex_subsets(self.d[t], et + 1);
        let mut out = Vec::new();
        for i_set in &is {
            for j_set in &js {
                let mut terms = Vec::new();
                for p in 0..self.d[s] as u8 {
                    if i_set.contains(&p) {
                        continue;
                    }
                    let a = self
                        .var_index(s, &insert_sorted(i_set, p))
                        .expect("variable exists");
                    for &q in j_set {
                        let c = m.get(q as usize, p as usize);
                        if c == 0 {
                            continue;
                        }
                        let sign = (eps(p, i_set) + eps(q, j_set)) % 2;
                        let rest: Vec<u8> = j_set.iter().copied().filter(|&x| x != q).collect();
                        let b = self.var_index(t, &rest).expect("variable exists");
                        terms.push((self.quadratic(a, b), if sign == 1 { f.neg(c) } else { c }));
                    }
                }
                let poly = MPoly::from_terms(f, terms);
                if !poly.is_zero() {
                    out.push(poly);
                }
            }
        }
        out
    }

    /// Exchange quadrics of `Gr(e_i, d_i)`.
    pub fn grassmann_relations(&self, i: usize) -> Vec<MPoly> {
        self.incidence(i, i, &FMatrix::identity(self.field(), self.d[i]))
    }

    pub fn arrow_relations(&self, rep: &Representation, a: usize) -> Result<Vec<MPoly>> {
        self.check_rep(rep)?;
        let ar = rep.quiver().arrow(a);
        Ok(self.incidence(ar.source, ar.target, rep.map(a)))
    }

    pub fn path_relations(&self, rep: &Representation, path: &Path) -> Result<Vec<MPoly>> {
        self.check_rep(rep)?;
        Ok(self.incidence(path.source(), path.target(), &rep.path_matrix(path)))
    }

    fn check_rep(&self, rep: &Representation) -> Result<()> {
        if rep.dims() != &self.d {
            return Err(Error::DimensionMismatch(format!(
                "representation of dimension {} for ring over {}",
                rep.dims(),
                self.d
            )));
        }
        if rep.field() != self.field() {
            return Err(Error::FieldMismatch(rep.field().p(), self.field().p()));
        }
        Ok(())
    }

    /// Plücker coordinates of the point `(U_i)_i`, each `U_i` given by a
    /// `d_i x e_i` basis matrix.
    pub fn coordinates(&self, bases: &[FMatrix]) -> Result<Vec<u32>> {
        self.vars
            .iter()
            .map(|v| {
                let rows: Vec<usize> = v.set.iter().map(|&x| x as usize).collect();
                bases[v.vertex].select_rows(&rows).det()
            })
            .collect()
    }

    pub fn format(&self, f: &MPoly) -> String {
        self.ring.format(f)
    }
}

/// Display name `D[v][j1,j2,...]` with 1-based indices.
fn var_name(vertex_name: u32, set: &[u8]) -> String {
    let parts: Vec<String> = set.iter().map(|x| (x + 1).to_string()).collect();
    format!("D[{}][{}]", vertex_name, parts.join(","))
}

/// Quadrics for `Gr_e(M)` together with their origin.
#[derive(Debug, Clone)]
pub struct RelationIdeal {
    ring: PlueckerRing,
    generators: Vec<MPoly>,
    provenance: Vec<Provenance>,
}

/// Classical relations at every vertex plus incidence relations for every
/// arrow or every path, made monic and deduplicated.
pub fn ideal(rep: &Representation, e: &DimVector, scope: Scope) -> Result<RelationIdeal> {
    let ring = PlueckerRing::new(rep.quiver(), rep.field(), rep.dims(), e)?;
    let mut families: Vec<(Provenance, Vec<MPoly>)> = Vec::new();
    for i in 0..rep.dims().len() {
        families.push((
            Provenance::Classical { vertex: i },
            ring.grassmann_relations(i),
        ));
    }
    match scope {
        Scope::Arrows => {
            for a in 0..rep.quiver().n_arrows() {
                families.push((
                    Provenance::Arrow { arrow: a },
                    ring.arrow_relations(rep, a)?,
                ));
            }
        }
        Scope::Paths => {
            let paths = rep.quiver().enumerate_paths();
            let fams: Vec<(Provenance, Vec<MPoly>)> = paths
                .par_iter()
                .map(|p| {
                    Ok((
                        Provenance::Path {
                            arrows: p.arrows().to_vec(),
                        },
                        ring.path_relations(rep, p)?,
                    ))
                })
                .collect::<Result<_>>()?;
            families.extend(fams);
        }
    }
    let f = ring.field();
    let mut seen: HashSet<MPoly> = HashSet::new();
    let mut generators = Vec::new();
    let mut provenance = Vec::new();
    for (prov, polys) in families {
        for p in polys {
            let p = p.monic(f);
            if seen.insert(p.clone()) {
                generators.push(p);
                provenance.push(prov.clone());
            }
        }
    }
    Ok(RelationIdeal {
        ring,
        generators,
        provenance,
    })
}

impl RelationIdeal {
    pub fn ring(&self) -> &PlueckerRing {
        &self.ring
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// One generator per line as `+c*D[i][J]*D[j][J'] -c*...`.
    pub fn export_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&self.ring.format(g));
            s.push('\n');
        }
        s
    }

    /// Macaulay2 script declaring the multigraded ring and the ideal, with
    /// coefficients lifted to the symmetric range.
    pub fn export_macaulay2(&self) -> String {
        let r = &self.ring;
        let n = r.n_vars();
        let mut s = String::new();
        let _ = writeln!(s, "-- d = {}, e = {}", r.d, r.e);
        for (i, v) in r.vars.iter().enumerate() {
            let _ = writeln!(
                s,
                "-- x_{i} = {}",
                var_name(r.quiver_names[v.vertex], &v.set)
            );
        }
        let degrees: Vec<String> = r
            .vars
            .iter()
            .map(|v| {
                let mut deg = vec!["0"; r.d.len()];
                deg[v.vertex] = "1";
                format!("{{{}}}", deg.join(","))
            })
            .collect();
        let last = n.saturating_sub(1);
        let _ = writeln!(
            s,
            "R = ZZ/{}[x_0..x_{}, Degrees => {{{}}}, MonomialOrder => GRevLex];",
            r.field().p(),
            last,
            degrees.join(",")
        );
        if self.generators.is_empty() {
            return s;
        }
        let gens: Vec<String> = self.generators.iter().map(|g| m2_poly(r, g)).collect();
        let _ = writeln!(s, "I = ideal({});", gens.join(", "));
        s
    }
}

fn m2_poly(r: &PlueckerRing, g: &MPoly) -> String {
    let f = r.field();
    let mut s = String::new();
    for (k, (m, c)) in g.terms().iter().enumerate() {
        let v = f.lift(*c);
        if k == 0 {
            if v < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if v < 0 { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if v.abs() != 1 {
            factors.push(v.abs().to_string());
        }
        for i in m.support() {
            for _ in 0..m.0[i] {
                factors.push(format!("x_{i}"));
            }
        }
        s.push_str(&factors.join("*"));
    }
    s
}

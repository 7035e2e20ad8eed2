use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{reflection_functor, Representation};
use crate::error::{Error, Result};
use crate::ffalg::PrimeField;
use crate::quiver::{DimVector, DynkinType, Quiver};

/// Dimension vector of an indecomposable together with its display name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndecLabel {
    pub root: DimVector,
    pub name: String,
}

/// Multiplicity of each catalog entry, indexed like the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Isoclass(pub Vec<u32>);

impl Isoclass {
    pub fn zero(len: usize) -> Isoclass {
        Isoclass(vec![0; len])
    }

    pub fn single(len: usize, x: usize) -> Isoclass {
        let mut v = vec![0; len];
        v[x] = 1;
        Isoclass(v)
    }

    pub fn n_summands(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Isoclass) -> Isoclass {
        Isoclass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied().enumerate().filter(|&(_, m)| m > 0)
    }
}

/// Which admissible sink is reflected first when several are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SinkChoice {
    #[default]
    Smallest,
    Largest,
}

/// One matrix model per indecomposable of a Dynkin quiver of type A or D,
/// plus the table of Hom dimensions between them.
#[derive(Debug, Clone)]
pub struct Catalog {
    quiver: Arc<Quiver>,
    field: PrimeField,
    dynkin: DynkinType,
    labels: Vec<IndecLabel>,
    models: Vec<Representation>,
    hom: Vec<Vec<usize>>,
    /// `hom[x][y] > 0` with `x != y` implies `x` precedes `y`.
    topo: Vec<usize>,
    by_name: HashMap<String, usize>,
}

/// Positive roots of the underlying Dynkin graph, by closing the simple roots
/// under simple reflections. Sorted by total dimension, then lexicographically.
pub fn positive_roots(quiver: &Quiver) -> Result<Vec<DimVector>> {
    if !quiver.is_dynkin_ad() {
        return Err(Error::NotDynkin);
    }
    let n = quiver.n_vertices();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(r) = queue.pop_front() {
        for k in 0..n {
            // s_k(r)_k = -r_k + sum over neighbours
            let nb: i64 = quiver.neighbors(k).iter().map(|&j| r[j]).sum();
            let mut s = r.clone();
            s[k] = nb - r[k];
            if s.iter().all(|&x| x >= 0) && s.iter().any(|&x| x > 0) && seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut roots: Vec<DimVector> = seen
        .into_iter()
        .map(|v| DimVector(v.into_iter().map(|x| x as usize).collect()))
        .collect();
    roots.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.0.cmp(&b.0)));
    Ok(roots)
}

/// Sequence `k_1..k_n` in which each `k_t` is a sink of the quiver obtained
/// by reflecting at `k_1..k_{t-1}`.
fn admissible_sinks(quiver: &Quiver, choice: SinkChoice) -> Vec<usize> {
    let n = quiver.n_vertices();
    let mut current = quiver.clone();
    let mut used = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let mut candidates = (0..n).filter(|&v| !used[v] && current.is_sink(v));
        let k = match choice {
            SinkChoice::Smallest => candidates.next(),
            SinkChoice::Largest => candidates.last(),
        }
        .expect("an unused sink always exists on a tree");
        used[k] = true;
        seq.push(k);
        current = current.reflect_at(k);
    }
    seq
}

/// Rescale the vertex bases of a thin representation so that every nonzero
/// arrow map is `1`.
fn normalize_thin(rep: &Representation) -> Representation {
    let q = rep.quiver().clone();
    let f = rep.field();
    let dims = rep.dims();
    if dims.0.iter().any(|&d| d > 1) {
        return rep.clone();
    }
    let mut maps = rep.maps().to_vec();
    let n = q.n_vertices();
    let mut visited = vec![false; n];
    for start in 0..n {
        if dims[start] == 0 || visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in q.neighbors(u) {
                if visited[w] || dims[w] == 0 {
                    continue;
                }
                let a = q.edge_between(u, w).expect("neighbours share an arrow");
                let x = maps[a].get(0, 0);
                if x == 0 {
                    continue;
                }
                // scale the basis vector at w by g: maps into w get 1/g, maps out of w get g
                let g = if q.arrow(a).target == w { x } else { f.inv(x) };
                let ginv = f.inv(g);
                for b in q.incoming(w) {
                    if maps[b].rows() == 1 && maps[b].cols() == 1 {
                        let v = maps[b].get(0, 0);
                        maps[b].set(0, 0, f.mul(v, ginv));
                    }
                }
                for b in q.outgoing(w) {
                    if maps[b].rows() == 1 && maps[b].cols() == 1 {
                        let v = maps[b].get(0, 0);
                        maps[b].set(0, 0, f.mul(v, g));
                    }
                }
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    Representation::new(q, f, dims.clone(), maps).expect("shapes unchanged")
}

fn label_name(quiver: &Quiver, dynkin: DynkinType, root: &DimVector) -> String {
    if let DynkinType::A(_) = dynkin {
        let order = quiver.linear_order().expect("type A has a linear order");
        let pos: Vec<usize> = order.iter().copied().filter(|&v| root[v] > 0).collect();
        let (a, b) = (pos[0], pos[pos.len() - 1]);
        return format!("U({},{})", quiver.name(a), quiver.name(b));
    }
    let parts: Vec<String> = root.0.iter().map(|x| x.to_string()).collect();
    format!("V({})", parts.join(","))
}

impl Catalog {
    pub fn new(quiver: Arc<Quiver>, field: PrimeField) -> Result<Catalog> {
        Catalog::with_sink_choice(quiver, field, SinkChoice::Smallest)
    }

    /// Build the catalog from the preprojective component: for the periodic
    /// admissible sink sequence `k_1 k_2 ...`, the modules
    /// `S^-_{k_1} ... S^-_{k_{t-1}} (S_{k_t})` run through every indecomposable.
    pub fn with_sink_choice(
        quiver: Arc<Quiver>,
        field: PrimeField,
        choice: SinkChoice,
    ) -> Result<Catalog> {
        let dynkin = quiver.dynkin_type();
        if !quiver.is_dynkin_ad() {
            return Err(Error::NotDynkin);
        }
        let n = quiver.n_vertices();
        let roots = positive_roots(&quiver)?;
        let seq = admissible_sinks(&quiver, choice);
        let max_steps = n * n + n;
        let mut quivers = vec![quiver.as_ref().clone()];
        let mut found: Vec<Representation> = Vec::new();
        let mut consecutive_zero = 0;
        for t in 0..max_steps {
            let k = seq[t % n];
            let qt = Arc::new(quivers[t].clone());
            let mut rep = Representation::simple(qt, field, k);
            for j in (0..t).rev() {
                rep = reflection_functor(&rep, seq[j % n])?;
                if rep.is_zero() {
                    break;
                }
            }
            quivers.push(quivers[t].reflect_at(k));
            if rep.is_zero() {
                consecutive_zero += 1;
                if consecutive_zero >= n {
                    break;
                }
                continue;
            }
            consecutive_zero = 0;
            // re-attach the caller's Arc so that quiver equality is pointer-cheap
            let rep = Representation::new(
                quiver.clone(),
                field,
                rep.dims().clone(),
                rep.maps().to_vec(),
            )?;
            found.push(normalize_thin(&rep));
        }
        if found.len() != roots.len() {
            return Err(Error::Internal(format!(
                "reflection sequence produced {} indecomposables, root system has {}",
                found.len(),
                roots.len()
            )));
        }
        let mut by_root: HashMap<DimVector, Representation> = HashMap::new();
        for rep in found {
            if by_root.insert(rep.dims().clone(), rep).is_some() {
                return Err(Error::Internal(
                    "two indecomposables share a dimension vector".into(),
                ));
            }
        }
        let mut roots = roots;
        if let Some(order) = quiver
            .linear_order()
            .filter(|_| matches!(dynkin, DynkinType::A(_)))
        {
            // intervals sorted by (left end, right end) along the line
            let key = |r: &DimVector| {
                let pos: Vec<usize> = (0..n).filter(|&p| r[order[p]] > 0).collect();
                (pos[0], pos[pos.len() - 1])
            };
            roots.sort_by_key(key);
        }
        let mut labels = Vec::with_capacity(roots.len());
        let mut models = Vec::with_capacity(roots.len());
        for root in roots {
            let rep = by_root.remove(&root).ok_or_else(|| {
                Error::Internal(format!("no indecomposable with dimension vector {root}"))
            })?;
            labels.push(IndecLabel {
                name: label_name(&quiver, dynkin, &root),
                root,
            });
            models.push(rep);
        }
        let hom: Vec<Vec<usize>> = models
            .iter()
            .map(|x| {
                models
                    .iter()
                    .map(|y| x.hom_dim(y).expect("same setting"))
                    .collect()
            })
            .collect();
        let topo = topological_order(&hom)?;
        let by_name = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.name.clone(), i))
            .collect();
        Ok(Catalog {
            quiver,
            field,
            dynkin,
            labels,
            models,
            hom,
            topo,
            by_name,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dynkin(&self) -> DynkinType {
        self.dynkin
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[IndecLabel] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &IndecLabel {
        &self.labels[x]
    }

    pub fn model(&self, x: usize) -> &Representation {
        &self.models[x]
    }

    pub fn models(&self) -> &[Representation] {
        &self.models
    }

    /// `dim Hom(X, Y)` for catalog entries `x`, `y`.
    pub fn hom(&self, x: usize, y: usize) -> usize {
        self.hom[x][y]
    }

    pub fn hom_table(&self) -> &[Vec<usize>] {
        &self.hom
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn index_of_root(&self, root: &DimVector) -> Option<usize> {
        self.labels.iter().position(|l| &l.root == root)
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    fn root_of(&self, rep: Representation) -> usize {
        self.index_of_root(rep.dims())
            .expect("indecomposable dimension vector is a root")
    }

    pub fn simple(&self, i: usize) -> usize {
        self.root_of(Representation::simple(self.quiver.clone(), self.field, i))
    }

    pub fn projective(&self, i: usize) -> usize {
        self.root_of(Representation::projective(
            self.quiver.clone(),
            self.field,
            i,
        ))
    }

    pub fn injective(&self, i: usize) -> usize {
        self.root_of(Representation::injective(
            self.quiver.clone(),
            self.field,
            i,
        ))
    }

    pub fn is_injective(&self, x: usize) -> bool {
        (0..self.quiver.n_vertices()).any(|i| self.injective(i) == x)
    }

    pub fn is_projective(&self, x: usize) -> bool {
        (0..self.quiver.n_vertices()).any(|i| self.projective(i) == x)
    }

    pub fn dim_of(&self, c: &Isoclass) -> DimVector {
        let mut d = DimVector::zero(self.quiver.n_vertices());
        for (x, m) in c.support() {
            d = &d + &self.labels[x].root.scaled(m as usize);
        }
        d
    }

    /// `dim Hom(M, N)` for isoclasses, from the table.
    pub fn hom_iso(&self, m: &Isoclass, n: &Isoclass) -> usize {
        let mut total = 0;
        for (x, a) in m.support() {
            for (y, b) in n.support() {
                total += (a * b) as usize * self.hom[x][y];
            }
        }
        total
    }

    pub fn ext_iso(&self, m: &Isoclass, n: &Isoclass) -> usize {
        let euler = self
            .quiver
            .euler_form(&self.dim_of(m), &self.dim_of(n))
            .expect("same length");
        (self.hom_iso(m, n) as i64 - euler) as usize
    }

    /// `(dim Hom(M, X))_X` over the catalog.
    pub fn fingerprint(&self, c: &Isoclass) -> Vec<usize> {
        (0..self.len())
            .map(|y| c.support().map(|(x, m)| m as usize * self.hom[x][y]).sum())
            .collect()
    }

    /// `(dim Hom(X, M))_X` over the catalog.
    pub fn dual_fingerprint(&self, c: &Isoclass) -> Vec<usize> {
        (0..self.len())
            .map(|x| c.support().map(|(y, m)| m as usize * self.hom[x][y]).sum())
            .collect()
    }

    pub fn realize(&self, c: &Isoclass) -> Result<Representation> {
        if c.0.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "isoclass has {} entries, catalog {}",
                c.0.len(),
                self.len()
            )));
        }
        let mut acc = Representation::zero(self.quiver.clone(), self.field);
        for (x, m) in c.support() {
            for _ in 0..m {
                acc = acc.direct_sum(&self.models[x])?;
            }
        }
        Ok(acc)
    }

    /// Multiplicities of the indecomposable summands of `m`, from its Hom
    /// fingerprint `f_X = dim Hom(X, M)` by back substitution along the
    /// topological order.
    pub fn decompose(&self, m: &Representation) -> Result<Isoclass> {
        if m.quiver().as_ref() != self.quiver.as_ref() {
            return Err(Error::InvalidQuiver(
                "representation lives on another quiver".into(),
            ));
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch(m.field().p(), self.field.p()));
        }
        let f: Vec<i64> = self
            .models
            .iter()
            .map(|x| x.hom_dim(m).map(|v| v as i64))
            .collect::<Result<_>>()?;
        let mut mult = vec![0i64; self.len()];
        for (pos, &x) in self.topo.iter().enumerate().rev() {
            let mut rhs = f[x];
            for &y in &self.topo[pos + 1..] {
                rhs -= mult[y] * self.hom[x][y] as i64;
            }
            let diag = self.hom[x][x] as i64;
            if rhs < 0 || rhs % diag != 0 {
                return Err(Error::Undecomposable(format!(
                    "no non-negative multiplicity for {}",
                    self.labels[x].name
                )));
            }
            mult[x] = rhs / diag;
        }
        let c = Isoclass(mult.into_iter().map(|v| v as u32).collect());
        if &self.dim_of(&c) != m.dims() {
            return Err(Error::Undecomposable(format!(
                "fingerprint solution has dimension {} but the input has {}",
                self.dim_of(&c),
                m.dims()
            )));
        }
        Ok(c)
    }

    pub fn format(&self, c: &Isoclass) -> String {
        let parts: Vec<String> = c
            .support()
            .map(|(x, m)| format!("{}*{}", m, self.labels[x].name))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Resolve a single summand name: catalog names `U(i,j)` / `V(...)`, or
    /// `S(i)`, `P(i)`, `I(i)` by vertex name.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        let name: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(x) = self.index_of_name(&name) {
            return Ok(x);
        }
        let unknown = || Error::UnknownLabel(name.clone());
        let (head, rest) = name.split_once('(').ok_or_else(unknown)?;
        let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
        let args: Vec<u32> = inner
            .split(',')
            .map(|s| s.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| unknown())?;
        let vertex = |k: usize| -> Result<usize> {
            if args.len() != k {
                return Err(unknown());
            }
            self.quiver.vertex_index(args[0]).ok_or_else(unknown)
        };
        match head {
            "S" => Ok(self.simple(vertex(1)?)),
            "P" => Ok(self.projective(vertex(1)?)),
            "I" => Ok(self.injective(vertex(1)?)),
            "U" if args.len() == 2 => {
                // accept the endpoints in either order
                let swapped = format!("U({},{})", args[1], args[0]);
                self.index_of_name(&swapped).ok_or_else(unknown)
            }
            "V" if args.len() == self.quiver.n_vertices() => self
                .index_of_root(&DimVector(args.iter().map(|&a| a as usize).collect()))
                .ok_or_else(unknown),
            _ => Err(unknown()),
        }
    }

    /// Parse `rep: 2*U(1,1) + 1*U(1,2)`; the `rep:` prefix and the `k*`
    /// multipliers are optional, `0` denotes the zero isoclass.
    pub fn parse_isoclass(&self, text: &str) -> Result<Isoclass> {
        let body = text.trim();
        let body = body.strip_prefix("rep:").unwrap_or(body).trim();
        let mut c = Isoclass::zero(self.len());
        if body == "0" || body.is_empty() {
            return Ok(c);
        }
        for term in split_terms(body) {
            let term = term.trim();
            let (mult, name) = match term.split_once('*') {
                Some((k, name)) => {
                    let k = k.trim().parse::<u32>().map_err(|_| Error::Parse {
                        line: 1,
                        msg: format!("bad multiplicity in `{term}`"),
                    })?;
                    (k, name)
                }
                None => (1, term),
            };
            let x = self.resolve(name)?;
            c.0[x] += mult;
        }
        Ok(c)
    }

    /// Isoclass of the direct sum of the listed vertex projectives and
    /// injectives, with multiplicities per vertex.
    pub fn projective_injective(&self, proj: &[u32], inj: &[u32]) -> Isoclass {
        let mut c = Isoclass::zero(self.len());
        for (i, &m) in proj.iter().enumerate() {
            c.0[self.projective(i)] += m;
        }
        for (i, &m) in inj.iter().enumerate() {
            c.0[self.injective(i)] += m;
        }
        c
    }

    /// Matrix model of `c` printed vertex by vertex, for debugging.
    pub fn matrices_text(&self, c: &Isoclass) -> Result<String> {
        Ok(self.realize(c)?.to_text())
    }
}

/// Split on `+` outside parentheses.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn topological_order(hom: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = hom.len();
    let mut indeg = vec![0usize; n];
    for x in 0..n {
        for y in 0..n {
            if x != y && hom[x][y] > 0 {
                indeg[y] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop_first() {
        order.push(x);
        for y in 0..n {
            if x != y && hom[x][y] > 0 {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::Internal(
            "Hom relation between indecomposables has a cycle".into(),
        ));
    }
    Ok(order)
}

impl fmt::Display for IndecLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

//! Principal experiments: the degeneration poset of `Rep_d` for
//! `d = dim P + dim I`, the loci `Gamma_d(2)` (Grassmannian of dimension
//! `<dim P, dim I>`) and `Gamma_d(1)` (additionally irreducible), and checks
//! of the conjectural descriptions of their sinks.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degeneration::{build_poset, Annotation, IsoclassPoset, DEFAULT_MAX_NODES};
use crate::error::{Error, Result};
use crate::ffalg::{FMatrix, PrimeField};
use crate::groebner::{buchberger, GroebnerOptions, HilbertEntry};
use crate::modrep::{Catalog, Isoclass, Representation};
use crate::pluecker::{ideal, variables, Scope};
use crate::pointcount::{
    classify, interpolation_primes, Classification, ClassificationRecord, Method,
};
use crate::quiver::{DimVector, DynkinType, Quiver};

pub const DEFAULT_HOM_PRIME: u32 = 107;
pub const DEFAULT_GROEBNER_VARS: usize = 12;
pub const DEFAULT_HILBERT_BOUND: u32 = 2;

/// `P = sum proj_i P_i`, `I = sum inj_i I_i` over a Dynkin quiver.
#[derive(Debug, Clone)]
pub struct PrincipalConfig {
    pub quiver: Arc<Quiver>,
    pub proj: Vec<u32>,
    pub inj: Vec<u32>,
    /// Interpolation primes; the first `D + 3` primes when `None`.
    pub primes: Option<Vec<u32>>,
    /// Field for Hom dimensions, decompositions and Plücker relations.
    pub hom_prime: u32,
    pub max_nodes: usize,
    /// Largest Plücker variable count for the Gröbner dimension cross-check;
    /// 0 disables it.
    pub groebner_vars: usize,
    /// Hilbert tables cover all `m` with `m_i <= hilbert_bound`.
    pub hilbert_bound: u32,
}

impl PrincipalConfig {
    pub fn new(quiver: Arc<Quiver>, proj: Vec<u32>, inj: Vec<u32>) -> Result<PrincipalConfig> {
        let n = quiver.n_vertices();
        if proj.len() != n || inj.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} projective and {} injective multiplicities for {n} vertices",
                proj.len(),
                inj.len()
            )));
        }
        if !quiver.is_dynkin_ad() {
            return Err(Error::NotDynkin);
        }
        Ok(PrincipalConfig {
            quiver,
            proj,
            inj,
            primes: None,
            hom_prime: DEFAULT_HOM_PRIME,
            max_nodes: DEFAULT_MAX_NODES,
            groebner_vars: DEFAULT_GROEBNER_VARS,
            hilbert_bound: DEFAULT_HILBERT_BOUND,
        })
    }

    /// Every indecomposable projective and injective once.
    pub fn full(quiver: Arc<Quiver>) -> Result<PrincipalConfig> {
        let n = quiver.n_vertices();
        PrincipalConfig::new(quiver, vec![1; n], vec![1; n])
    }

    fn weighted(&self, mult: &[u32], module: impl Fn(usize) -> Representation) -> DimVector {
        let mut d = DimVector::zero(self.quiver.n_vertices());
        for (i, &k) in mult.iter().enumerate() {
            d = &d + &module(i).dims().scaled(k as usize);
        }
        d
    }

    pub fn dim_p(&self) -> DimVector {
        self.weighted(&self.proj, |i| {
            Representation::projective(self.quiver.clone(), PrimeField::default(), i)
        })
    }

    pub fn dim_i(&self) -> DimVector {
        self.weighted(&self.inj, |i| {
            Representation::injective(self.quiver.clone(), PrimeField::default(), i)
        })
    }

    pub fn d(&self) -> DimVector {
        &self.dim_p() + &self.dim_i()
    }

    pub fn e(&self) -> DimVector {
        self.dim_p()
    }

    /// `<dim P, dim I>`, the minimal dimension of `Gr_{dim P}(M)` on `Rep_d`.
    pub fn expected_dimension(&self) -> i64 {
        self.quiver
            .euler_form(&self.dim_p(), &self.dim_i())
            .expect("lengths agree")
    }

    /// Vertices where `dim P` or `dim I` vanishes.
    pub fn deficient_vertices(&self) -> Vec<usize> {
        let (p, i) = (self.dim_p(), self.dim_i());
        (0..p.len()).filter(|&k| p[k] == 0 || i[k] == 0).collect()
    }

    /// Every `P_j` and `I_j` occurs at least once.
    pub fn has_all_summands(&self) -> bool {
        self.proj.iter().chain(&self.inj).all(|&k| k > 0)
    }

    pub fn primes(&self) -> Vec<u32> {
        self.primes
            .clone()
            .unwrap_or_else(|| interpolation_primes(&self.d(), &self.e()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub index: usize,
    pub isoclass: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub in_gamma2: bool,
    /// Minimal dimension and leading coefficient 1. Necessary for
    /// irreducibility of minimal dimension; not a certificate.
    pub irreducible_proxy: bool,
    pub below_p_plus_i: bool,
    pub hom_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Conjecture {
    A,
    B,
    C,
    D,
    E,
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Conjecture> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Conjecture::A),
            "B" => Ok(Conjecture::B),
            "C" => Ok(Conjecture::C),
            "D" => Ok(Conjecture::D),
            "E" => Ok(Conjecture::E),
            _ => Err(Error::UnknownLabel(format!("conjecture {s}"))),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Confirmed,
    Refuted,
    Inconclusive,
    /// Measurements only, no verdict.
    Probe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub conjecture: Conjecture,
    pub outcome: Outcome,
    pub summary: String,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub quiver: String,
    pub proj: Vec<u32>,
    pub inj: Vec<u32>,
    pub d: Vec<usize>,
    pub e: Vec<usize>,
    pub expected_dimension: i64,
    pub primes: Vec<u32>,
    pub hom_prime: u32,
    pub generic: usize,
    pub nodes: Vec<NodeReport>,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub gamma1_sinks: Vec<usize>,
    pub gamma2_sinks: Vec<usize>,
    pub gamma1_lower_ideal: bool,
    pub gamma2_lower_ideal: bool,
    /// Nodes without a consistent classification.
    pub gaps: Vec<usize>,
    /// Violated invariants, one line each.
    pub findings: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn dimension(&self, i: usize) -> Option<usize> {
        self.nodes[i].classification.as_ref().and_then(|c| c.dim)
    }

    pub fn top_count(&self, i: usize) -> Option<u64> {
        self.nodes[i]
            .classification
            .as_ref()
            .and_then(|c| c.top_components)
    }

    pub fn labels(&self, nodes: &[usize]) -> Vec<String> {
        nodes
            .iter()
            .map(|&i| self.nodes[i].isoclass.clone())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Outcome of the Hom-dimension test over the whole poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCriterion {
    /// Nodes with `hom(M, X) <= hom(P, X) + 1` for every non-injective
    /// indecomposable `X`.
    pub members: Vec<usize>,
    pub sinks: Vec<usize>,
    /// Nodes with `hom(X, M) <= hom(X, I) + 1` for every non-projective
    /// indecomposable `X`.
    pub dual_members: Vec<usize>,
    pub dual_sinks: Vec<usize>,
    pub agree: bool,
    pub lower_ideal: bool,
}

pub struct Lab {
    cfg: PrincipalConfig,
    catalog: Arc<Catalog>,
    poset: IsoclassPoset,
    proj: Isoclass,
    inj: Isoclass,
    injective: Vec<bool>,
    projective: Vec<bool>,
}

impl Lab {
    pub fn new(cfg: PrincipalConfig) -> Result<Lab> {
        let field = PrimeField::new(cfg.hom_prime as u64)?;
        let catalog = Arc::new(Catalog::new(cfg.quiver.clone(), field)?);
        let n = cfg.quiver.n_vertices();
        let proj = catalog.projective_injective(&cfg.proj, &vec![0; n]);
        let inj = catalog.projective_injective(&vec![0; n], &cfg.inj);
        let poset = build_poset(catalog.clone(), &cfg.d(), cfg.max_nodes)?;
        let injective_ix: Vec<usize> = (0..n).map(|i| catalog.injective(i)).collect();
        let projective_ix: Vec<usize> = (0..n).map(|i| catalog.projective(i)).collect();
        let injective = (0..catalog.len())
            .map(|x| injective_ix.contains(&x))
            .collect();
        let projective = (0..catalog.len())
            .map(|x| projective_ix.contains(&x))
            .collect();
        Ok(Lab {
            cfg,
            catalog,
            poset,
            proj,
            inj,
            injective,
            projective,
        })
    }

    pub fn config(&self) -> &PrincipalConfig {
        &self.cfg
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn poset(&self) -> &IsoclassPoset {
        &self.poset
    }

    pub fn projective_part(&self) -> &Isoclass {
        &self.proj
    }

    pub fn injective_part(&self) -> &Isoclass {
        &self.inj
    }

    pub fn p_plus_i(&self) -> Isoclass {
        self.proj.add(&self.inj)
    }

    pub fn node_of(&self, c: &Isoclass) -> Option<usize> {
        self.poset.index_of(c)
    }

    /// Splits every summand of `P + I` at each deficient vertex by zeroing
    /// the maps of the incident arrows, and sums the resulting pieces.
    pub fn split_at_deficient(&self) -> Result<Isoclass> {
        let q = self.catalog.quiver();
        let deficient = self.cfg.deficient_vertices();
        let cut: Vec<bool> = q
            .arrows()
            .iter()
            .map(|a| deficient.contains(&a.source) || deficient.contains(&a.target))
            .collect();
        let field = self.catalog.field();
        let mut out = Isoclass::zero(self.catalog.len());
        for (x, mult) in self.p_plus_i().support() {
            let model = self.catalog.model(x);
            let maps = model
                .maps()
                .iter()
                .enumerate()
                .map(|(a, m)| {
                    if cut[a] {
                        FMatrix::zeros(field, m.rows(), m.cols())
                    } else {
                        m.clone()
                    }
                })
                .collect();
            let split = Representation::new(q.clone(), field, model.dims().clone(), maps)?;
            for (y, k) in self.catalog.decompose(&split)?.support() {
                out.0[y] += k * mult;
            }
        }
        Ok(out)
    }

    /// For type A with every `P_j`, `I_j` present: glue the equioriented
    /// pieces' `P + S + I/S` along shared vertices (removing `2 S_i` per
    /// gluing vertex), then add the surplus copies of `P_j` and `I_j`.
    pub fn predicted_m2(&self) -> Option<Isoclass> {
        if !self.cfg.has_all_summands() || !matches!(self.catalog.dynkin(), DynkinType::A(_)) {
            return None;
        }
        let q = self.catalog.quiver();
        let order = q.linear_order()?;
        let n = order.len();
        let mut counts = vec![0i64; self.catalog.len()];
        let mut add = |vertices: &[usize], k: i64| {
            let mut root = DimVector::zero(n);
            for &v in vertices {
                root.0[v] = 1;
            }
            let x = self
                .catalog
                .index_of_root(&root)
                .expect("intervals are roots");
            counts[x] += k;
        };
        if n == 1 {
            add(&order, 2);
        }
        // forward[k]: arrow order[k] -> order[k+1]
        let forward: Vec<bool> = (0..n.saturating_sub(1))
            .map(|k| {
                q.arrow(q.edge_between(order[k], order[k + 1]).expect("adjacent"))
                    .source
                    == order[k]
            })
            .collect();
        let mut start = 0;
        while start + 1 < n {
            let mut end = start + 1;
            while end + 1 < n && forward[end] == forward[start] {
                end += 1;
            }
            // vertices of the piece in arrow direction
            let mut piece: Vec<usize> = order[start..=end].to_vec();
            if !forward[start] {
                piece.reverse();
            }
            let m = piece.len();
            for i in 0..m {
                add(&piece[i..], 1);
                add(&piece[i..=i], 1);
                if i > 0 {
                    add(&piece[..i], 1);
                }
            }
            if end + 1 < n {
                add(&order[end..=end], -2);
            }
            start = end;
        }
        let extra_p: Vec<u32> = self.cfg.proj.iter().map(|&k| k - 1).collect();
        let extra_i: Vec<u32> = self.cfg.inj.iter().map(|&k| k - 1).collect();
        let extra = self.catalog.projective_injective(&extra_p, &extra_i);
        let mut out = Isoclass::zero(self.catalog.len());
        for x in 0..counts.len() {
            let c = counts[x] + extra.0[x] as i64;
            if c < 0 {
                return None;
            }
            out.0[x] = c as u32;
        }
        Some(out)
    }

    /// `hom(M, X) - hom(P, X)` for every non-injective indecomposable `X`.
    pub fn hom_excess(&self, m: &Isoclass) -> Vec<(usize, i64)> {
        let fm = self.catalog.fingerprint(m);
        let fp = self.catalog.fingerprint(&self.proj);
        (0..self.catalog.len())
            .filter(|&x| !self.injective[x])
            .map(|x| (x, fm[x] as i64 - fp[x] as i64))
            .collect()
    }

    pub fn satisfies_hom_bound(&self, m: &Isoclass) -> bool {
        self.hom_excess(m).iter().all(|&(_, k)| k <= 1)
    }

    /// `hom(X, M) <= hom(X, I) + 1` for every non-projective `X`.
    pub fn satisfies_dual_hom_bound(&self, m: &Isoclass) -> bool {
        let fm = self.catalog.dual_fingerprint(m);
        let fi = self.catalog.dual_fingerprint(&self.inj);
        (0..self.catalog.len())
            .filter(|&x| !self.projective[x])
            .all(|x| fm[x] <= fi[x] + 1)
    }

    pub fn hom_criterion(&self) -> HomCriterion {
        let members: Vec<usize> = (0..self.poset.len())
            .filter(|&i| self.satisfies_hom_bound(self.poset.node(i)))
            .collect();
        let dual_members: Vec<usize> = (0..self.poset.len())
            .filter(|&i| self.satisfies_dual_hom_bound(self.poset.node(i)))
            .collect();
        let mut flags = vec![false; self.poset.len()];
        for &i in &members {
            flags[i] = true;
        }
        HomCriterion {
            sinks: self.poset.sinks(&members),
            dual_sinks: self.poset.sinks(&dual_members),
            agree: members == dual_members,
            lower_ideal: self.poset.check_lower_ideal(&flags).is_ok(),
            members,
            dual_members,
        }
    }

    fn prime_catalogs(&self) -> Result<Vec<Catalog>> {
        let catalogs: Vec<Catalog> = self
            .cfg
            .primes()
            .par_iter()
            .map(|&p| Catalog::new(self.cfg.quiver.clone(), PrimeField::new(p as u64)?))
            .collect::<Result<_>>()?;
        for c in &catalogs {
            let same = c
                .labels()
                .iter()
                .zip(self.catalog.labels())
                .all(|(a, b)| a.root == b.root);
            if c.len() != self.catalog.len() || !same {
                return Err(Error::Internal(format!(
                    "catalog order differs over F_{}",
                    c.field().p()
                )));
            }
        }
        Ok(catalogs)
    }

    fn classify_with(&self, catalogs: &[Catalog], c: &Isoclass) -> Result<Classification> {
        let e = self.cfg.e();
        let reps = catalogs
            .iter()
            .map(|cat| cat.realize(c))
            .collect::<Result<Vec<_>>>()?;
        let mut cl = classify(&reps, &e, false)?;
        let n_vars = variables(&self.cfg.d(), &e)?.len();
        if n_vars <= self.cfg.groebner_vars {
            let rep = self.catalog.realize(c)?;
            let id = ideal(&rep, &e, Scope::Paths)?;
            let gb = buchberger(
                id.ring().ring(),
                id.generators(),
                &GroebnerOptions::default(),
            )?;
            cl.groebner_dim = Some(gb.grassmannian_dimension()?);
            cl.method = Method::GroebnerCrosscheck;
        }
        Ok(cl)
    }

    /// Counting-polynomial classification of `Gr_{dim P}(M)` for one isoclass.
    pub fn classify_isoclass(&self, c: &Isoclass) -> Result<Classification> {
        self.classify_with(&self.prime_catalogs()?, c)
    }

    /// Classifies every node, derives both loci and their sinks, and records
    /// every violated invariant as a finding.
    pub fn classify_all(&self) -> Result<ExperimentReport> {
        let catalogs = self.prime_catalogs()?;
        let results: Vec<Result<Classification>> = self
            .poset
            .nodes()
            .par_iter()
            .map(|c| self.classify_with(&catalogs, c))
            .collect();
        let expected = self.cfg.expected_dimension();
        let top = self.node_of(&self.p_plus_i());
        let n = self.poset.len();
        let mut nodes = Vec::with_capacity(n);
        let mut findings = Vec::new();
        let mut gaps = Vec::new();
        for (i, r) in results.iter().enumerate() {
            let label = self.poset.label(i);
            let (record, error) = match r {
                Ok(cl) => (Some(cl.record(&label)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let consistent = r.as_ref().is_ok_and(|c| c.consistent);
            if !consistent {
                gaps.push(i);
            }
            if let Ok(cl) = r {
                if !cl.consistent {
                    findings.push(format!(
                        "{label}: point counts are not explained by a polynomial"
                    ));
                }
                if let Some(d) = cl.dimension {
                    if (d as i64) < expected {
                        findings.push(format!(
                            "{label}: dimension {d} below the expected {expected}"
                        ));
                    }
                }
                if cl.counts.iter().any(|&c| c == 0) {
                    findings.push(format!("{label}: empty over some prime field"));
                }
                if let (Some(g), Some(d)) = (cl.groebner_dim, cl.dimension) {
                    if g != d as i64 {
                        findings.push(format!(
                            "{label}: relation ideal has dimension {g}, point counts give {d}"
                        ));
                    }
                }
            }
            let dim = r
                .as_ref()
                .ok()
                .filter(|c| c.consistent)
                .and_then(|c| c.dimension);
            let in_gamma2 = dim.is_some_and(|d| d as i64 == expected);
            let irreducible_proxy = in_gamma2 && r.as_ref().is_ok_and(|c| c.top_count == Some(1));
            nodes.push(NodeReport {
                index: i,
                isoclass: label,
                classification: record,
                error,
                in_gamma2,
                irreducible_proxy,
                below_p_plus_i: top.is_some_and(|t| self.poset.le(i, t)),
                hom_bound: self.satisfies_hom_bound(self.poset.node(i)),
            });
        }
        for i in 0..n {
            if nodes[i].below_p_plus_i && !nodes[i].irreducible_proxy && !gaps.contains(&i) {
                findings.push(format!(
                    "{}: degenerates to P + I but is not irreducible of minimal dimension",
                    nodes[i].isoclass
                ));
            }
            for j in self.poset.above(i).ones() {
                let (a, b) = (
                    results[i].as_ref().ok().and_then(|c| c.dimension),
                    results[j].as_ref().ok().and_then(|c| c.dimension),
                );
                if let (Some(a), Some(b)) = (a, b) {
                    if b < a {
                        findings.push(format!(
                            "{} degenerates to {} but the dimension drops",
                            nodes[i].isoclass, nodes[j].isoclass
                        ));
                    }
                }
            }
        }
        let gamma2: Vec<usize> = (0..n).filter(|&i| nodes[i].in_gamma2).collect();
        let gamma1: Vec<usize> = (0..n).filter(|&i| nodes[i].irreducible_proxy).collect();
        let lower = |set: &[usize]| {
            let mut flags = vec![false; n];
            for &i in set {
                flags[i] = true;
            }
            self.poset.check_lower_ideal(&flags)
        };
        let l1 = lower(&gamma1);
        let l2 = lower(&gamma2);
        if let Err(e) = &l1 {
            findings.push(format!("Gamma(1) is not a lower ideal: {e}"));
        }
        if let Err(e) = &l2 {
            findings.push(format!("Gamma(2) is not a lower ideal: {e}"));
        }
        Ok(ExperimentReport {
            quiver: self.cfg.quiver.to_text(),
            proj: self.cfg.proj.clone(),
            inj: self.cfg.inj.clone(),
            d: self.cfg.d().0,
            e: self.cfg.e().0,
            expected_dimension: expected,
            primes: self.cfg.primes(),
            hom_prime: self.cfg.hom_prime,
            generic: self.poset.generic(),
            gamma1_sinks: self.poset.sinks(&gamma1),
            gamma2_sinks: self.poset.sinks(&gamma2),
            gamma1_lower_ideal: l1.is_ok(),
            gamma2_lower_ideal: l2.is_ok(),
            gamma1,
            gamma2,
            nodes,
            gaps,
            findings,
            verdicts: Vec::new(),
        })
    }

    /// Hilbert function of the Plücker relation ideal of `M` on all `m` with
    /// entries `<= bound`.
    pub fn hilbert_table(
        &self,
        c: &Isoclass,
        scope: Scope,
        bound: u32,
    ) -> Result<Vec<HilbertEntry>> {
        let rep = self.catalog.realize(c)?;
        let id = ideal(&rep, &self.cfg.e(), scope)?;
        let k = self.cfg.quiver.n_vertices();
        let opts = GroebnerOptions {
            bound: Some(vec![bound; k]),
            ..GroebnerOptions::default()
        };
        buchberger(id.ring().ring(), id.generators(), &opts)?.hilbert_table(bound)
    }

    /// Checks one conjecture; B, C, D and E read the loci from `report`.
    pub fn check(&self, report: &ExperimentReport, which: Conjecture) -> Result<Verdict> {
        match which {
            Conjecture::A => self.check_a(),
            Conjecture::B => self.check_b(report),
            Conjecture::C => self.check_c(report),
            Conjecture::D => Ok(self.check_d(report)),
            Conjecture::E => self.check_e(report),
        }
    }

    fn check_a(&self) -> Result<Verdict> {
        let bound = self.cfg.hilbert_bound;
        let rows: Vec<Option<String>> = self
            .poset
            .nodes()
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let arrows = self.hilbert_table(c, Scope::Arrows, bound)?;
                let paths = self.hilbert_table(c, Scope::Paths, bound)?;
                let drops: Vec<String> = arrows
                    .iter()
                    .zip(&paths)
                    .filter(|(a, p)| p.dim < a.dim)
                    .map(|(a, p)| format!("m={:?}: {} -> {}", a.m, a.dim, p.dim))
                    .collect();
                Ok((!drops.is_empty())
                    .then(|| format!("{}: {}", self.poset.label(i), drops.join(", "))))
            })
            .collect::<Result<_>>()?;
        let evidence: Vec<String> = rows.into_iter().flatten().collect();
        Ok(Verdict {
            conjecture: Conjecture::A,
            outcome: Outcome::Probe,
            summary: format!("path relations lower the Hilbert function below the arrow relations on {} of {} nodes", evidence.len(), self.poset.len()),
            evidence,
        })
    }

    fn check_b(&self, report: &ExperimentReport) -> Result<Verdict> {
        let prediction = if self.cfg.deficient_vertices().is_empty() {
            self.p_plus_i()
        } else {
            self.split_at_deficient()?
        };
        let label = self.catalog.format(&prediction);
        let sinks = report.labels(&report.gamma1_sinks);
        let hit = self
            .node_of(&prediction)
            .is_some_and(|p| report.gamma1_sinks == [p]);
        let mut evidence = vec![format!("predicted M1 = {label}")];
        evidence.extend(sinks.iter().map(|s| format!("Gamma(1) sink: {s}")));
        Ok(Verdict {
            conjecture: Conjecture::B,
            outcome: if !report.gaps.is_empty() {
                Outcome::Inconclusive
            } else if hit {
                Outcome::Confirmed
            } else {
                Outcome::Refuted
            },
            summary: format!(
                "Gamma(1) has {} sink(s); prediction {}",
                sinks.len(),
                if hit { "matches" } else { "differs" }
            ),
            evidence,
        })
    }

    fn check_c(&self, report: &ExperimentReport) -> Result<Verdict> {
        let sinks = &report.gamma2_sinks;
        let mut evidence: Vec<String> = report
            .labels(sinks)
            .into_iter()
            .map(|s| format!("Gamma(2) sink: {s}"))
            .collect();
        for (a, &i) in sinks.iter().enumerate() {
            for &j in &sinks[a + 1..] {
                if self.poset.le(i, j) || self.poset.le(j, i) {
                    evidence.push(format!(
                        "comparable sinks {} and {}",
                        report.nodes[i].isoclass, report.nodes[j].isoclass
                    ));
                }
            }
        }
        let (outcome, summary) = match self.predicted_m2() {
            Some(p) => {
                evidence.push(format!("predicted M2 = {}", self.catalog.format(&p)));
                let hit = self.node_of(&p).is_some_and(|x| *sinks == [x]);
                (
                    if hit {
                        Outcome::Confirmed
                    } else {
                        Outcome::Refuted
                    },
                    format!(
                        "{} sink(s); formula {}",
                        sinks.len(),
                        if hit { "matches" } else { "differs" }
                    ),
                )
            }
            None if sinks.len() == 1 => (
                Outcome::Confirmed,
                "unique sink; no closed formula applies".to_string(),
            ),
            None => (
                Outcome::Refuted,
                format!("{} sinks; no closed formula applies", sinks.len()),
            ),
        };
        let outcome = if report.gaps.is_empty() {
            outcome
        } else {
            Outcome::Inconclusive
        };
        Ok(Verdict {
            conjecture: Conjecture::C,
            outcome,
            summary,
            evidence,
        })
    }

    fn check_d(&self, report: &ExperimentReport) -> Verdict {
        let h = self.hom_criterion();
        let mut evidence = Vec::new();
        for i in 0..self.poset.len() {
            let by_hom = h.members.contains(&i);
            if by_hom != report.nodes[i].in_gamma2 {
                evidence.push(format!(
                    "{}: Hom bound {}, Gamma(2) {}",
                    report.nodes[i].isoclass,
                    if by_hom { "holds" } else { "fails" },
                    if report.nodes[i].in_gamma2 {
                        "member"
                    } else {
                        "non-member"
                    }
                ));
            }
        }
        if !h.agree {
            evidence.push("primal and dual Hom bounds select different sets".into());
        }
        evidence.extend(
            h.sinks
                .iter()
                .map(|&s| format!("Hom-bound sink: {}", self.poset.label(s))),
        );
        let hyp = if self.cfg.has_all_summands() {
            ""
        } else {
            " (some P_j or I_j missing)"
        };
        let equal = h.members == report.gamma2;
        Verdict {
            conjecture: Conjecture::D,
            outcome: if !report.gaps.is_empty() {
                Outcome::Inconclusive
            } else if equal {
                Outcome::Confirmed
            } else {
                Outcome::Refuted
            },
            summary: format!(
                "Hom-bound set has {} nodes and {} sinks, Gamma(2) has {} nodes{hyp}",
                h.members.len(),
                h.sinks.len(),
                report.gamma2.len()
            ),
            evidence,
        }
    }

    fn check_e(&self, report: &ExperimentReport) -> Result<Verdict> {
        let bound = self.cfg.hilbert_bound;
        let tables: Vec<Vec<HilbertEntry>> = self
            .poset
            .nodes()
            .par_iter()
            .map(|c| self.hilbert_table(c, Scope::Paths, bound))
            .collect::<Result<_>>()?;
        let base = &tables[self.poset.generic()];
        let mut evidence = Vec::new();
        let mut ok = true;
        for (i, t) in tables.iter().enumerate() {
            let below: Vec<String> = t
                .iter()
                .zip(base)
                .filter(|(a, b)| a.dim < b.dim)
                .map(|(a, _)| format!("{:?}", a.m))
                .collect();
            let equal = t.iter().zip(base).all(|(a, b)| a.dim == b.dim);
            let label = &report.nodes[i].isoclass;
            if !below.is_empty() {
                ok = false;
                evidence.push(format!(
                    "{label}: below the generic table at m = {}",
                    below.join(" ")
                ));
            }
            if equal != report.nodes[i].in_gamma2 {
                ok = false;
                evidence.push(format!(
                    "{label}: tables {} but {} Gamma(2)",
                    if equal { "equal" } else { "differ" },
                    if report.nodes[i].in_gamma2 {
                        "in"
                    } else {
                        "not in"
                    }
                ));
            }
        }
        Ok(Verdict {
            conjecture: Conjecture::E,
            outcome: if !report.gaps.is_empty() {
                Outcome::Inconclusive
            } else if ok {
                Outcome::Confirmed
            } else {
                Outcome::Refuted
            },
            summary: format!(
                "Hilbert tables for m_i <= {bound} compared with the generic module on {} nodes",
                tables.len()
            ),
            evidence,
        })
    }

    /// Hasse diagram with `Gamma(1)` and `Gamma(2)` members filled and the
    /// classification of each node in its label.
    pub fn report_dot(&self, report: &ExperimentReport) -> String {
        let mut poset = self.poset.clone();
        for (i, node) in report.nodes.iter().enumerate() {
            let text = node
                .classification
                .as_ref()
                .map(|c| match (c.dim, c.top_components) {
                    (Some(d), Some(t)) => format!("dim {d}, top {t}"),
                    (Some(d), None) => format!("dim {d}"),
                    _ => "empty".to_string(),
                });
            poset.annotate(
                i,
                Annotation {
                    in_gamma1: node.irreducible_proxy,
                    in_gamma2: node.in_gamma2,
                    text,
                },
            );
        }
        poset.dot_export()
    }
}

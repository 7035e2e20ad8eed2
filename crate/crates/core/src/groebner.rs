//! Buchberger's algorithm over `F_p` in grevlex, with Gebauer–Möller pair
//! elimination and optional multigraded truncation, plus the invariants read
//! off the leading-term ideal: Krull dimension and multigraded Hilbert
//! function values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, PolyRing};

pub const DEFAULT_MAX_PAIRS: usize = 2_000_000;

/// Remainder of `f` after full reduction by `basis`, whose elements must be
/// monic.
pub fn normal_form(ring: &PolyRing, f: &MPoly, basis: &[MPoly]) -> MPoly {
    let field = ring.field;
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    while let Some((m, c)) = p.terms().first().cloned() {
        match basis
            .iter()
            .find(|g| g.lead().is_some_and(|l| l.divides(&m)))
        {
            Some(g) => {
                let lc = g.lead_coeff().expect("nonzero");
                let factor = field.mul(c, field.inv(lc));
                let t = g.lead().expect("nonzero").quotient_of(&m);
                p = p.sub_term_mul(field, factor, &t, g);
            }
            None => {
                rem.push((m, c));
                p = p.tail();
            }
        }
    }
    MPoly::from_terms(field, rem)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerOptions {
    /// Only S-pairs whose lcm has multidegree `<= bound` are processed.
    pub bound: Option<Vec<u32>>,
    pub max_pairs: usize,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            bound: None,
            max_pairs: DEFAULT_MAX_PAIRS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: PolyRing,
    polys: Vec<MPoly>,
    /// `Some(b)`: complete only in multidegrees `<= b`.
    bound: Option<Vec<u32>>,
    pairs_reduced: usize,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'a> {
    ring: &'a PolyRing,
    polys: Vec<MPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn lead(&self, i: usize) -> &Monomial {
        self.polys[i]
            .lead()
            .expect("stored polynomials are nonzero")
    }

    /// Gebauer–Möller update after adding `polys[h]`.
    fn update(&mut self, h: usize) {
        let lh = self.lead(h).clone();
        let cands: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lg = self.lead(g);
                (g, lh.lcm(lg), lh.coprime(lg))
            })
            .collect();
        // keep (h, g) unless a different new pair has a properly dividing lcm
        // or an equal lcm appearing earlier
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (k, (g, l, cop)) in cands.iter().enumerate() {
            if *cop {
                kept.push((*g, l.clone(), true));
                continue;
            }
            let dominated = cands
                .iter()
                .enumerate()
                .any(|(k2, (_, l2, _))| k2 != k && l2.divides(l) && (l2 != l || k2 < k));
            if !dominated {
                kept.push((*g, l.clone(), false));
            }
        }
        // product criterion: drop coprime pairs
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|(_, _, cop)| !cop)
            .map(|(g, lcm, _)| Pair { i: g, j: h, lcm })
            .collect();
        // chain criterion on old pairs
        let polys = &self.polys;
        let lead = |i: usize| polys[i].lead().expect("nonzero");
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && lh.lcm(lead(p.i)) != p.lcm && lh.lcm(lead(p.j)) != p.lcm)
        });
        self.pairs.extend(fresh);
        let new_active: Vec<usize> = self
            .active
            .iter()
            .copied()
            .filter(|&g| !lh.divides(self.lead(g)))
            .collect();
        self.active = new_active;
        self.active.push(h);
    }

    fn active_polys(&self) -> Vec<MPoly> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }

    fn s_poly(&self, i: usize, j: usize, lcm: &Monomial) -> MPoly {
        let f = self.ring.field;
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let ta = self.lead(i).quotient_of(lcm);
        let tb = self.lead(j).quotient_of(lcm);
        let zero = MPoly::zero();
        let left = zero.sub_term_mul(f, f.neg(1), &ta, a);
        left.sub_term_mul(f, 1, &tb, b)
    }
}

fn within(md: &[u32], bound: &[u32]) -> bool {
    md.iter().zip(bound).all(|(a, b)| a <= b)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(
    ring: &PolyRing,
    gens: &[MPoly],
    opts: &GroebnerOptions,
) -> Result<GroebnerBasis> {
    let field = ring.field;
    let mut st = State {
        ring,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut sorted: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    sorted.sort_by(|a, b| {
        a.lead()
            .expect("nonzero")
            .grevlex(b.lead().expect("nonzero"))
    });
    for g in sorted {
        if let Some(b) = &opts.bound {
            if !within(&ring.multidegree(g.lead().expect("nonzero")), b) {
                continue;
            }
        }
        let h = normal_form(ring, &g, &st.active_polys());
        if h.is_zero() {
            continue;
        }
        st.polys.push(h.monic(field));
        let idx = st.polys.len() - 1;
        st.update(idx);
    }
    let mut reduced = 0usize;
    while !st.pairs.is_empty() {
        // lowest-degree pair first, ties broken by grevlex of the lcm
        let pos = (0..st.pairs.len())
            .min_by(|&x, &y| {
                st.pairs[x]
                    .lcm
                    .grevlex(&st.pairs[y].lcm)
                    .then((st.pairs[x].i, st.pairs[x].j).cmp(&(st.pairs[y].i, st.pairs[y].j)))
            })
            .expect("nonempty");
        let Pair { i, j, lcm } = st.pairs.swap_remove(pos);
        if let Some(b) = &opts.bound {
            if !within(&ring.multidegree(&lcm), b) {
                continue;
            }
        }
        reduced += 1;
        if reduced > opts.max_pairs {
            return Err(Error::Budget(format!(
                "more than {} S-pairs",
                opts.max_pairs
            )));
        }
        let s = st.s_poly(i, j, &lcm);
        let h = normal_form(ring, &s, &st.active_polys());
        if !h.is_zero() {
            st.polys.push(h.monic(field));
            let idx = st.polys.len() - 1;
            st.update(idx);
        }
    }
    let polys = interreduce(ring, st.active_polys());
    Ok(GroebnerBasis {
        ring: ring.clone(),
        polys,
        bound: opts.bound.clone(),
        pairs_reduced: reduced,
    })
}

fn interreduce(ring: &PolyRing, polys: Vec<MPoly>) -> Vec<MPoly> {
    let field = ring.field;
    let mut minimal: Vec<MPoly> = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        let l = p.lead().expect("nonzero");
        let redundant = polys.iter().enumerate().any(|(k2, q)| {
            let l2 = q.lead().expect("nonzero");
            k2 != k && l2.divides(l) && (l2 != l || k2 < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let p = &minimal[k];
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(k2, _)| *k2 != k)
            .map(|(_, q)| q.clone())
            .collect();
        let head = MPoly::from_terms(field, vec![p.terms()[0].clone()]);
        let tail = p.tail();
        let tail = normal_form(ring, &tail, &others);
        out.push(head.add(field, &tail).monic(field));
    }
    out.sort_by(|a, b| {
        a.lead()
            .expect("nonzero")
            .grevlex(b.lead().expect("nonzero"))
    });
    out
}

/// Largest set of variables containing the support of no monomial in
/// `leads`; equals the Krull dimension of `k[x] / (leads)`.
pub fn krull_dimension(n_vars: usize, leads: &[Monomial]) -> Result<usize> {
    if n_vars > 128 {
        return Err(Error::OutOfRange(format!(
            "{n_vars} variables (at most 128 supported)"
        )));
    }
    let mut sets: Vec<u128> = leads
        .iter()
        .map(|m| m.support().fold(0u128, |acc, i| acc | (1u128 << i)))
        .collect();
    sets.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u128> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|&t| t & s == t) {
            minimal.push(s);
        }
    }
    // greedy seed for the minimum hitting set
    let mut greedy = 0u128;
    for &s in &minimal {
        if s & greedy == 0 {
            greedy |= 1u128 << (127 - s.leading_zeros());
        }
    }
    let mut best = greedy.count_ones() as usize;
    hitting_set(&minimal, 0, 0, &mut best);
    Ok(n_vars - best)
}

fn hitting_set(sets: &[u128], chosen: u128, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    // branch on the smallest unhit set
    let unhit = sets
        .iter()
        .filter(|&&s| s & chosen == 0)
        .min_by_key(|s| s.count_ones());
    let Some(&s) = unhit else {
        *best = size;
        return;
    };
    // lower bound: disjoint unhit sets each need their own element
    let mut used = 0u128;
    let mut lb = 0;
    for &t in sets.iter().filter(|&&t| t & chosen == 0) {
        if t & used == 0 {
            used |= t;
            lb += 1;
        }
    }
    if size + lb >= *best {
        return;
    }
    let mut rest = s;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        hitting_set(sets, chosen | bit, size + 1, best);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertEntry {
    pub m: Vec<u32>,
    pub dim: u128,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.bound.is_some()
    }

    pub fn pairs_reduced(&self) -> usize {
        self.pairs_reduced
    }

    pub fn leads(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.lead().expect("nonzero").clone())
            .collect()
    }

    pub fn normal_form(&self, f: &MPoly) -> MPoly {
        normal_form(&self.ring, f, &self.polys)
    }

    pub fn krull_dimension(&self) -> Result<usize> {
        if let Some(b) = &self.bound {
            return Err(Error::Truncated(format!(
                "basis only complete up to multidegree {b:?}"
            )));
        }
        krull_dimension(self.ring.n_vars(), &self.leads())
    }

    /// Dimension of the multiprojective variety: one cone dimension per
    /// vertex block is removed.
    pub fn grassmannian_dimension(&self) -> Result<i64> {
        Ok(self.krull_dimension()? as i64 - self.ring.n_blocks as i64)
    }

    /// Number of standard monomials of multidegree `m`.
    pub fn hilbert_component(&self, m: &[u32]) -> Result<u128> {
        if m.len() != self.ring.n_blocks {
            return Err(Error::DimensionMismatch(format!(
                "multidegree of length {} for {} blocks",
                m.len(),
                self.ring.n_blocks
            )));
        }
        if let Some(b) = &self.bound {
            if !within(m, b) {
                return Err(Error::Truncated(format!(
                    "multidegree {m:?} exceeds the truncation bound {b:?}"
                )));
            }
        }
        if self.leads().iter().any(|l| l.degree() == 0) {
            return Ok(0);
        }
        let n = self.ring.n_vars();
        // leading terms that can divide a monomial of multidegree m, grouped
        // by their largest variable
        let mut by_last: Vec<Vec<Monomial>> = vec![Vec::new(); n];
        for l in self.leads() {
            if within(&self.ring.multidegree(&l), m) {
                let last = l
                    .support()
                    .last()
                    .expect("leading term of a nonconstant polynomial");
                by_last[last].push(l);
            }
        }
        let mut remaining = m.to_vec();
        let mut cur = Monomial::one(n);
        Ok(count_standard(
            &self.ring,
            &by_last,
            0,
            &mut remaining,
            &mut cur,
        ))
    }

    /// `dim` for every multidegree with all entries `<= bound`.
    pub fn hilbert_table(&self, bound: u32) -> Result<Vec<HilbertEntry>> {
        let k = self.ring.n_blocks;
        let mut out = Vec::new();
        let mut m = vec![0u32; k];
        loop {
            out.push(HilbertEntry {
                m: m.clone(),
                dim: self.hilbert_component(&m)?,
            });
            let mut i = 0;
            while i < k && m[i] == bound {
                m[i] = 0;
                i += 1;
            }
            if i == k {
                return Ok(out);
            }
            m[i] += 1;
        }
    }
}

fn count_standard(
    ring: &PolyRing,
    by_last: &[Vec<Monomial>],
    v: usize,
    remaining: &mut [u32],
    cur: &mut Monomial,
) -> u128 {
    let n = ring.n_vars();
    if v == n {
        return remaining.iter().all(|&r| r == 0) as u128;
    }
    let b = ring.block[v];
    // the last variable of a block must absorb its remaining degree
    let last_in_block = v + 1 == n || ring.block[v + 1] != b;
    let range: Vec<u32> = if last_in_block {
        vec![remaining[b]]
    } else {
        (0..=remaining[b]).collect()
    };
    let mut total = 0;
    for e in range {
        cur.0[v] = e as u8;
        remaining[b] -= e;
        if !by_last[v].iter().any(|l| l.divides(cur)) {
            total += count_standard(ring, by_last, v + 1, remaining, cur);
        }
        remaining[b] += e;
    }
    cur.0[v] = 0;
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::PrimeField;

    fn ring(blocks: &[usize]) -> PolyRing {
        let n_blocks = blocks.iter().max().map(|m| m + 1).unwrap_or(0);
        PolyRing {
            field: PrimeField::default(),
            block: blocks.to_vec(),
            n_blocks,
            names: (0..blocks.len()).map(|i| format!("x{i}")).collect(),
        }
    }

    fn poly(r: &PolyRing, terms: &[(&[u8], i64)]) -> MPoly {
        MPoly::from_terms(
            r.field,
            terms
                .iter()
                .map(|(e, c)| (Monomial(e.to_vec()), r.field.reduce(*c)))
                .collect(),
        )
    }

    fn gr24(r: &PolyRing) -> MPoly {
        // D12 D34 - D13 D24 + D14 D23 with variables D12,D13,D23,D14,D24,D34
        poly(
            r,
            &[
                (&[1, 0, 0, 0, 0, 1], 1),
                (&[0, 1, 0, 0, 1, 0], -1),
                (&[0, 0, 1, 1, 0, 0], 1),
            ],
        )
    }

    #[test]
    fn normal_form_basics() {
        let r = ring(&[0; 6]);
        let g = gr24(&r);
        assert!(normal_form(&r, &g, &[g.monic(r.field)]).is_zero());
        assert_eq!(normal_form(&r, &g, &[]), g);
        let m = poly(&r, &[(&[1, 0, 0, 0, 0, 1], 1)]);
        let nf = normal_form(&r, &m, &[g.monic(r.field)]);
        assert_eq!(nf, m);
        let lead = poly(&r, &[(&[0, 0, 1, 1, 0, 0], 1)]);
        let nf = normal_form(&r, &lead, &[g.monic(r.field)]);
        assert!(!g.lead().unwrap().divides(nf.lead().unwrap()));
    }

    #[test]
    fn gr24_dimension_and_hilbert() {
        let r = ring(&[0; 6]);
        let gb = buchberger(&r, &[gr24(&r)], &GroebnerOptions::default()).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb.krull_dimension().unwrap(), 5);
        assert_eq!(gb.grassmannian_dimension().unwrap(), 4);
        assert_eq!(gb.hilbert_component(&[0]).unwrap(), 1);
        assert_eq!(gb.hilbert_component(&[2]).unwrap(), 20);
    }

    #[test]
    fn zero_ideal_counts() {
        let r = ring(&[0, 0, 0, 1, 1]);
        let gb = buchberger(&r, &[], &GroebnerOptions::default()).unwrap();
        assert_eq!(gb.krull_dimension().unwrap(), 5);
        // C(3+2-1,2) * C(2+1-1,1) = 6 * 2
        assert_eq!(gb.hilbert_component(&[2, 1]).unwrap(), 12);
        let table = gb.hilbert_table(0).unwrap();
        assert_eq!(
            table,
            vec![HilbertEntry {
                m: vec![0, 0],
                dim: 1
            }]
        );
    }

    #[test]
    fn monomial_input_is_unchanged() {
        let r = ring(&[0, 0, 0]);
        let gens = [poly(&r, &[(&[1, 1, 0], 1)]), poly(&r, &[(&[0, 1, 1], 1)])];
        let gb = buchberger(&r, &gens, &GroebnerOptions::default()).unwrap();
        let mut leads = gb.leads();
        leads.sort();
        let mut expect: Vec<Monomial> = gens.iter().map(|g| g.lead().unwrap().clone()).collect();
        expect.sort();
        assert_eq!(leads, expect);
        // hitting set {x1} gives dimension 2
        assert_eq!(gb.krull_dimension().unwrap(), 2);
    }

    #[test]
    fn twisted_cubic() {
        // 2x2 minors of [[x0,x1,x2],[x1,x2,x3]]: dimension 2 cone over a curve
        let r = ring(&[0, 0, 0, 0]);
        let gens = [
            poly(&r, &[(&[1, 0, 1, 0], 1), (&[0, 2, 0, 0], -1)]),
            poly(&r, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], -1)]),
            poly(&r, &[(&[0, 1, 0, 1], 1), (&[0, 0, 2, 0], -1)]),
        ];
        let gb = buchberger(&r, &gens, &GroebnerOptions::default()).unwrap();
        assert_eq!(gb.krull_dimension().unwrap(), 2);
        // Hilbert function of the twisted cubic is 3t + 1
        for t in 0..5 {
            assert_eq!(gb.hilbert_component(&[t]).unwrap(), 3 * t as u128 + 1);
        }
    }

    #[test]
    fn truncated_basis_refuses_dimension() {
        let r = ring(&[0; 6]);
        let opts = GroebnerOptions {
            bound: Some(vec![2]),
            ..Default::default()
        };
        let gb = buchberger(&r, &[gr24(&r)], &opts).unwrap();
        assert!(matches!(gb.krull_dimension(), Err(Error::Truncated(_))));
        assert_eq!(gb.hilbert_component(&[2]).unwrap(), 20);
        assert!(matches!(
            gb.hilbert_component(&[3]),
            Err(Error::Truncated(_))
        ));
    }

    #[test]
    fn hitting_sets() {
        let m = |e: &[u8]| Monomial(e.to_vec());
        assert_eq!(krull_dimension(4, &[]).unwrap(), 4);
        assert_eq!(krull_dimension(4, &[m(&[1, 0, 0, 0])]).unwrap(), 3);
        // triangle x0x1, x1x2, x0x2 needs two vertices
        let tri = [m(&[1, 1, 0, 0]), m(&[0, 1, 1, 0]), m(&[1, 0, 1, 0])];
        assert_eq!(krull_dimension(4, &tri).unwrap(), 2);
    }
}

//! Sparse multigraded polynomials over `F_p` with a fixed graded reverse
//! lexicographic order (`x_0 > x_1 > ...`).

use std::cmp::Ordering;
use std::fmt;

use crate::ffalg::PrimeField;

/// Dense exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(n_vars: usize) -> Monomial {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Monomial {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Graded reverse lexicographic comparison.
    pub fn grevlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

/// Polynomial ring with one grading block per quiver vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: PrimeField,
    /// Block (vertex index) of every variable; blocks are contiguous.
    pub block: Vec<usize>,
    pub n_blocks: usize,
    pub names: Vec<String>,
}

impl PolyRing {
    pub fn n_vars(&self) -> usize {
        self.block.len()
    }

    pub fn multidegree(&self, m: &Monomial) -> Vec<u32> {
        let mut d = vec![0; self.n_blocks];
        for (i, &e) in m.0.iter().enumerate() {
            d[self.block[i]] += e as u32;
        }
        d
    }

    pub fn block_vars(&self, b: usize) -> Vec<usize> {
        (0..self.n_vars()).filter(|&i| self.block[i] == b).collect()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, f: &MPoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in f.terms().iter().enumerate() {
            let v = self.field.lift(*c);
            if k > 0 {
                s.push(' ');
            }
            s.push_str(if v < 0 { "-" } else { "+" });
            s.push_str(&format!("{}*{}", v.abs(), self.format_monomial(m)));
        }
        s
    }
}

/// Terms sorted strictly decreasing in grevlex, coefficients nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: Vec<(Monomial, u32)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn from_terms(field: PrimeField, mut terms: Vec<(Monomial, u32)>) -> MPoly {
        terms.sort_by(|a, b| b.0.grevlex(&a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % field.p();
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        MPoly { terms: out }
    }

    pub fn monomial(m: Monomial) -> MPoly {
        MPoly {
            terms: vec![(m, 1)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// All terms but the leading one.
    pub fn tail(&self) -> MPoly {
        MPoly {
            terms: self.terms.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    pub fn lead_coeff(&self) -> Option<u32> {
        self.terms.first().map(|t| t.1)
    }

    pub fn scale(&self, field: PrimeField, c: u32) -> MPoly {
        if c == 0 {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn monic(&self, field: PrimeField) -> MPoly {
        match self.lead_coeff() {
            Some(c) => self.scale(field, field.inv(c)),
            None => MPoly::zero(),
        }
    }

    /// `self - c * t * g`.
    pub fn sub_term_mul(&self, field: PrimeField, c: u32, t: &Monomial, g: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g
            .terms
            .iter()
            .map(|(m, a)| (t.mul(m), field.neg(field.mul(c, *a))))
            .peekable();
        while i < self.terms.len() || gi.peek().is_some() {
            let ord = match (self.terms.get(i), gi.peek()) {
                (Some(a), Some(b)) => a.0.grevlex(&b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(gi.next().expect("peeked")),
                Ordering::Equal => {
                    let (m, b) = gi.next().expect("peeked");
                    let s = field.add(self.terms[i].1, b);
                    if s != 0 {
                        out.push((m, s));
                    }
                    i += 1;
                }
            }
        }
        MPoly { terms: out }
    }

    pub fn add(&self, field: PrimeField, other: &MPoly) -> MPoly {
        let n = self
            .terms
            .first()
            .or(other.terms.first())
            .map(|t| t.0 .0.len())
            .unwrap_or(0);
        self.sub_term_mul(field, field.neg(1), &Monomial::one(n), other)
    }

    pub fn mul(&self, field: PrimeField, other: &MPoly) -> MPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a.mul(b), field.mul(*x, *y)));
            }
        }
        MPoly::from_terms(field, terms)
    }

    pub fn eval(&self, field: PrimeField, point: &[u32]) -> u32 {
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v = field.mul(v, field.pow(point[i], e as u64));
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }

    /// The common multidegree, or `None` if the polynomial is zero or not
    /// multihomogeneous.
    pub fn multidegree(&self, ring: &PolyRing) -> Option<Vec<u32>> {
        let first = ring.multidegree(self.lead()?);
        self.terms
            .iter()
            .all(|(m, _)| ring.multidegree(m) == first)
            .then_some(first)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u8]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        // x > y > z; degree first, then smaller last exponent wins
        assert_eq!(m(&[1, 0, 0]).grevlex(&m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(m(&[0, 2, 0]).grevlex(&m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(m(&[1, 1, 0]).grevlex(&m(&[2, 0, 0])), Ordering::Less);
        assert_eq!(m(&[0, 0, 2]).grevlex(&m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        let f = PrimeField::new(7).unwrap();
        let a = MPoly::from_terms(f, vec![(m(&[1, 0]), 1), (m(&[0, 1]), 1)]);
        let b = MPoly::from_terms(f, vec![(m(&[1, 0]), 1), (m(&[0, 1]), 6)]);
        let prod = a.mul(f, &b);
        assert_eq!(prod.terms(), &[(m(&[2, 0]), 1), (m(&[0, 2]), 6)]);
        let diff = prod.sub_term_mul(f, 1, &m(&[0, 0]), &prod);
        assert!(diff.is_zero());
        assert_eq!(prod.eval(f, &[3, 2]), 5);
        assert_eq!(a.add(f, &b).terms(), &[(m(&[1, 0]), 2)]);
    }
}

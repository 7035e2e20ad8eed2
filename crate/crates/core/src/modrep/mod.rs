//! Representations of a tree quiver over a prime field, morphisms between
//! them and the basic module-theoretic constructions.

mod catalog;
mod reflection;

use std::sync::Arc;

pub use catalog::{positive_roots, Catalog, IndecLabel, Isoclass, SinkChoice};
pub use reflection::reflection_functor;

use crate::error::{Error, Result};
use crate::ffalg::{FMatrix, PrimeField, Quotient};
use crate::quiver::{DimVector, Path, Quiver};

/// A representation: one vector space `F_p^{d_i}` per vertex and one matrix
/// of shape `d_{t(a)} x d_{s(a)}` per arrow `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    field: PrimeField,
    dims: DimVector,
    maps: Vec<FMatrix>,
}

/// A family of vertex maps `M_i -> N_i` commuting with all arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Representation,
    target: Representation,
    maps: Vec<FMatrix>,
}

impl Representation {
    pub fn new(
        quiver: Arc<Quiver>,
        field: PrimeField,
        dims: DimVector,
        maps: Vec<FMatrix>,
    ) -> Result<Self> {
        if dims.len() != quiver.n_vertices() || maps.len() != quiver.n_arrows() {
            return Err(Error::DimensionMismatch(
                "dimension vector or map list has the wrong length".into(),
            ));
        }
        for (a, m) in maps.iter().enumerate() {
            let ar = quiver.arrow(a);
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().p(), field.p()));
            }
            if m.rows() != dims[ar.target] || m.cols() != dims[ar.source] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {a} carries a {}x{} matrix, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[ar.target],
                    dims[ar.source]
                )));
            }
        }
        Ok(Representation {
            quiver,
            field,
            dims,
            maps,
        })
    }

    /// The representation of dimension `dims` with all maps zero.
    pub fn zero_maps(quiver: Arc<Quiver>, field: PrimeField, dims: DimVector) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| FMatrix::zeros(field, dims[a.target], dims[a.source]))
            .collect();
        Representation {
            quiver,
            field,
            dims,
            maps,
        }
    }

    pub fn zero(quiver: Arc<Quiver>, field: PrimeField) -> Self {
        let n = quiver.n_vertices();
        Representation::zero_maps(quiver, field, DimVector::zero(n))
    }

    pub fn simple(quiver: Arc<Quiver>, field: PrimeField, i: usize) -> Self {
        let n = quiver.n_vertices();
        Representation::zero_maps(quiver, field, DimVector::unit(n, i))
    }

    /// Thin representation on the vertices flagged in `support` with every
    /// arrow between two supported vertices acting as `1`.
    fn thin(quiver: Arc<Quiver>, field: PrimeField, support: &[bool]) -> Self {
        let dims = DimVector(support.iter().map(|&b| b as usize).collect());
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                let (s, t) = (dims[a.source], dims[a.target]);
                if s == 1 && t == 1 {
                    FMatrix::identity(field, 1)
                } else {
                    FMatrix::zeros(field, t, s)
                }
            })
            .collect();
        Representation {
            quiver,
            field,
            dims,
            maps,
        }
    }

    /// `P_i`: basis of `(P_i)_j` is the set of paths from `i` to `j`.
    pub fn projective(quiver: Arc<Quiver>, field: PrimeField, i: usize) -> Self {
        let reach = quiver.reachability();
        let support: Vec<bool> = (0..quiver.n_vertices()).map(|j| reach[i][j]).collect();
        Representation::thin(quiver, field, &support)
    }

    /// `I_i`: basis of `(I_i)_j` is the set of paths from `j` to `i`.
    pub fn injective(quiver: Arc<Quiver>, field: PrimeField, i: usize) -> Self {
        let reach = quiver.reachability();
        let support: Vec<bool> = (0..quiver.n_vertices()).map(|j| reach[j][i]).collect();
        Representation::thin(quiver, field, &support)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[FMatrix] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &FMatrix {
        &self.maps[a]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }

    fn same_setting(&self, other: &Representation) -> Result<()> {
        if self.quiver != other.quiver {
            return Err(Error::InvalidQuiver(
                "representations live on different quivers".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.same_setting(other)?;
        let dims = &self.dims + &other.dims;
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Ok(Representation {
            quiver: self.quiver.clone(),
            field: self.field,
            dims,
            maps,
        })
    }

    /// Matrix of the composite map along `path`.
    pub fn path_matrix(&self, path: &Path) -> FMatrix {
        let mut acc = FMatrix::identity(self.field, self.dims[path.source()]);
        for &a in path.arrows() {
            acc = self.maps[a].mul(&acc).expect("path arrows compose");
        }
        acc
    }

    /// Composite map from vertex `from` to vertex `to`, or the identity when
    /// they coincide; `None` when there is no directed path.
    fn transport(&self, from: usize, to: usize) -> Option<FMatrix> {
        if from == to {
            return Some(FMatrix::identity(self.field, self.dims[from]));
        }
        self.quiver
            .path_between(from, to)
            .map(|p| self.path_matrix(&p))
    }

    /// The commuting-square system whose kernel is `Hom(self, other)`.
    /// Unknowns are the entries of `phi_i` (row-major), vertex by vertex.
    fn hom_system(&self, other: &Representation) -> (FMatrix, Vec<usize>) {
        let (m, n) = (&self.dims, &other.dims);
        let f = self.field;
        let mut offsets = Vec::with_capacity(m.len() + 1);
        let mut total = 0;
        for i in 0..m.len() {
            offsets.push(total);
            total += n[i] * m[i];
        }
        offsets.push(total);
        let n_eq: usize = self
            .quiver
            .arrows()
            .iter()
            .map(|a| n[a.target] * m[a.source])
            .sum();
        let mut sys = FMatrix::zeros(f, n_eq, total);
        let mut row = 0;
        for (a, ar) in self.quiver.arrows().iter().enumerate() {
            let (s, t) = (ar.source, ar.target);
            let (ma, na) = (&self.maps[a], &other.maps[a]);
            // (N_a phi_s - phi_t M_a)[x][y] = 0
            for x in 0..n[t] {
                for y in 0..m[s] {
                    for r in 0..n[s] {
                        let c = na.get(x, r);
                        if c != 0 {
                            let col = offsets[s] + r * m[s] + y;
                            sys.set(row, col, f.add(sys.get(row, col), c));
                        }
                    }
                    for c in 0..m[t] {
                        let v = ma.get(c, y);
                        if v != 0 {
                            let col = offsets[t] + x * m[t] + c;
                            sys.set(row, col, f.sub(sys.get(row, col), v));
                        }
                    }
                    row += 1;
                }
            }
        }
        (sys, offsets)
    }

    pub fn hom_dim(&self, other: &Representation) -> Result<usize> {
        self.same_setting(other)?;
        let (sys, offsets) = self.hom_system(other);
        Ok(offsets[offsets.len() - 1] - sys.rank())
    }

    pub fn hom_basis(&self, other: &Representation) -> Result<Vec<Morphism>> {
        self.same_setting(other)?;
        let (sys, offsets) = self.hom_system(other);
        let ker = sys.kernel_basis();
        let mut out = Vec::with_capacity(ker.cols());
        for c in 0..ker.cols() {
            let maps = (0..self.dims.len())
                .map(|i| {
                    FMatrix::from_fn(self.field, other.dims[i], self.dims[i], |r, col| {
                        ker.get(offsets[i] + r * self.dims[i] + col, c) as i64
                    })
                })
                .collect();
            out.push(Morphism {
                source: self.clone(),
                target: other.clone(),
                maps,
            });
        }
        Ok(out)
    }

    pub fn end_dim(&self) -> usize {
        self.hom_dim(self).expect("same setting")
    }

    /// `dim Ext^1(self, other)`, obtained from the Euler form identity.
    pub fn ext1_dim(&self, other: &Representation) -> Result<usize> {
        let hom = self.hom_dim(other)? as i64;
        let euler = self.quiver.euler_form(&self.dims, &other.dims)?;
        let ext = hom - euler;
        if ext < 0 {
            return Err(Error::Internal(format!("negative Ext dimension {ext}")));
        }
        Ok(ext as usize)
    }

    pub fn is_rigid(&self) -> bool {
        self.ext1_dim(self).expect("same setting") == 0
    }

    /// Sub-representation spanned vertex-wise by the columns of `spans`,
    /// which must be stable under all arrows. Returns it with its inclusion.
    pub fn subrepresentation(&self, spans: &[FMatrix]) -> Result<(Representation, Morphism)> {
        let bases: Vec<FMatrix> = spans.iter().map(|s| s.image_basis()).collect();
        let dims = DimVector(bases.iter().map(|b| b.cols()).collect());
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, ar) in self.quiver.arrows().iter().enumerate() {
            let moved = self.maps[a].mul(&bases[ar.source])?;
            let coords = bases[ar.target]
                .solve_matrix(&moved)?
                .ok_or_else(|| Error::Internal(format!("subspace not stable under arrow {a}")))?;
            maps.push(coords);
        }
        let sub = Representation {
            quiver: self.quiver.clone(),
            field: self.field,
            dims,
            maps,
        };
        let incl = Morphism {
            source: sub.clone(),
            target: self.clone(),
            maps: bases,
        };
        Ok((sub, incl))
    }

    /// Quotient by the sub-representation spanned by `spans`, in the
    /// complement-coordinate model, together with the projection.
    pub fn quotient(&self, spans: &[FMatrix]) -> Result<(Representation, Morphism)> {
        let quots: Vec<Quotient> = spans.iter().map(Quotient::new).collect();
        let dims = DimVector(quots.iter().map(|q| q.dim()).collect());
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, ar) in self.quiver.arrows().iter().enumerate() {
            let section = quots[ar.source].section(self.field, self.dims[ar.source]);
            let moved = self.maps[a].mul(&section)?;
            let cols: Vec<Vec<u32>> = moved
                .columns()
                .iter()
                .map(|c| quots[ar.target].project(c))
                .collect();
            maps.push(FMatrix::from_columns(self.field, dims[ar.target], &cols));
        }
        let q = Representation {
            quiver: self.quiver.clone(),
            field: self.field,
            dims,
            maps,
        };
        let proj_maps = quots
            .iter()
            .enumerate()
            .map(|(i, qu)| qu.projection_matrix(self.field, self.dims[i]))
            .collect();
        let proj = Morphism {
            source: self.clone(),
            target: q.clone(),
            maps: proj_maps,
        };
        Ok((q, proj))
    }

    /// Vertex-wise sum of the images of all incoming arrows.
    pub fn radical_spans(&self) -> Vec<FMatrix> {
        (0..self.dims.len())
            .map(|i| {
                let mut span = FMatrix::zeros(self.field, self.dims[i], 0);
                for a in self.quiver.incoming(i) {
                    span = span.hstack(&self.maps[a]).expect("same row count");
                }
                span.image_basis()
            })
            .collect()
    }

    /// Vertex-wise intersection of the kernels of all outgoing arrows.
    pub fn socle_spans(&self) -> Vec<FMatrix> {
        (0..self.dims.len())
            .map(|i| {
                let mut stacked = FMatrix::zeros(self.field, 0, self.dims[i]);
                for a in self.quiver.outgoing(i) {
                    stacked = stacked.vstack(&self.maps[a]).expect("same column count");
                }
                stacked.kernel_basis()
            })
            .collect()
    }

    pub fn radical(&self) -> Result<(Representation, Morphism)> {
        self.subrepresentation(&self.radical_spans())
    }

    pub fn socle(&self) -> Result<(Representation, Morphism)> {
        self.subrepresentation(&self.socle_spans())
    }

    pub fn top(&self) -> Result<(Representation, Morphism)> {
        self.quotient(&self.radical_spans())
    }

    /// `P(top M) -> M`, surjective.
    pub fn projective_cover(&self) -> Result<Morphism> {
        let rad = self.radical_spans();
        let mut cover: Option<Morphism> = None;
        for i in 0..self.dims.len() {
            let section = Quotient::new(&rad[i]).section(self.field, self.dims[i]);
            for c in 0..section.cols() {
                let v = section.column(c);
                let p = Representation::projective(self.quiver.clone(), self.field, i);
                let maps = (0..self.dims.len())
                    .map(|j| {
                        if p.dims[j] == 0 {
                            return FMatrix::zeros(self.field, self.dims[j], 0);
                        }
                        let t = self.transport(i, j).expect("support of P_i is reachable");
                        FMatrix::from_columns(self.field, self.dims[j], &[t.mul_vec(&v)])
                    })
                    .collect();
                let piece = Morphism {
                    source: p,
                    target: self.clone(),
                    maps,
                };
                cover = Some(match cover {
                    None => piece,
                    Some(acc) => acc.hstack_sources(&piece)?,
                });
            }
        }
        Ok(cover.unwrap_or_else(|| {
            Morphism::zero(
                Representation::zero(self.quiver.clone(), self.field),
                self.clone(),
            )
        }))
    }

    /// `M -> I(soc M)`, injective.
    pub fn injective_hull(&self) -> Result<Morphism> {
        let soc = self.socle_spans();
        let mut hull: Option<Morphism> = None;
        for i in 0..self.dims.len() {
            let s = &soc[i];
            if s.cols() == 0 {
                continue;
            }
            // functionals dual to the socle basis: extend to a basis and invert
            let complement = Quotient::new(s).section(self.field, self.dims[i]);
            let full = s.hstack(&complement)?;
            let inverse = full
                .solve_matrix(&FMatrix::identity(self.field, self.dims[i]))?
                .ok_or_else(|| Error::Internal("socle extension is not a basis".into()))?;
            for r in 0..s.cols() {
                let lambda = inverse.row_block(r, r + 1);
                let inj = Representation::injective(self.quiver.clone(), self.field, i);
                let maps = (0..self.dims.len())
                    .map(|j| {
                        if inj.dims[j] == 0 {
                            return FMatrix::zeros(self.field, 0, self.dims[j]);
                        }
                        let t = self.transport(j, i).expect("support of I_i reaches i");
                        lambda.mul(&t).expect("shapes agree")
                    })
                    .collect();
                let piece = Morphism {
                    source: self.clone(),
                    target: inj,
                    maps,
                };
                hull = Some(match hull {
                    None => piece,
                    Some(acc) => acc.vstack_targets(&piece)?,
                });
            }
        }
        Ok(hull.unwrap_or_else(|| {
            Morphism::zero(
                self.clone(),
                Representation::zero(self.quiver.clone(), self.field),
            )
        }))
    }

    /// The dual representation on the opposite quiver: `M*_i = (M_i)*` and
    /// every arrow map transposed.
    pub fn dual(&self) -> Representation {
        let maps = self.maps.iter().map(|m| m.transpose()).collect();
        Representation {
            quiver: Arc::new(self.quiver.opposite()),
            field: self.field,
            dims: self.dims.clone(),
            maps,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("dim: {}\n", self.dims);
        for (a, ar) in self.quiver.arrows().iter().enumerate() {
            s.push_str(&format!(
                "arrow {} -> {}:\n",
                self.quiver.name(ar.source),
                self.quiver.name(ar.target)
            ));
            s.push_str(&self.maps[a].to_text());
        }
        s
    }
}

impl Morphism {
    pub fn new(
        source: Representation,
        target: Representation,
        maps: Vec<FMatrix>,
    ) -> Result<Morphism> {
        source.same_setting(&target)?;
        if maps.len() != source.dims.len() {
            return Err(Error::DimensionMismatch(
                "one matrix per vertex expected".into(),
            ));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != target.dims[i] || m.cols() != source.dims[i] {
                return Err(Error::DimensionMismatch(format!(
                    "vertex map {i} has the wrong shape"
                )));
            }
        }
        for (a, ar) in source.quiver.arrows().iter().enumerate() {
            let lhs = target.maps[a].mul(&maps[ar.source])?;
            let rhs = maps[ar.target].mul(&source.maps[a])?;
            if lhs != rhs {
                return Err(Error::NotAMorphism(a));
            }
        }
        Ok(Morphism {
            source,
            target,
            maps,
        })
    }

    pub fn zero(source: Representation, target: Representation) -> Morphism {
        let maps = (0..source.dims.len())
            .map(|i| FMatrix::zeros(source.field, target.dims[i], source.dims[i]))
            .collect();
        Morphism {
            source,
            target,
            maps,
        }
    }

    pub fn identity(m: &Representation) -> Morphism {
        let maps = m
            .dims
            .0
            .iter()
            .map(|&d| FMatrix::identity(m.field, d))
            .collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn maps(&self) -> &[FMatrix] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps
            .iter()
            .zip(&self.target.dims.0)
            .all(|(m, &d)| m.rank() == d)
    }

    pub fn is_injective(&self) -> bool {
        self.maps
            .iter()
            .zip(&self.source.dims.0)
            .all(|(m, &d)| m.rank() == d)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if self.target != next.source {
            return Err(Error::DimensionMismatch("morphisms do not compose".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&next.maps)
            .map(|(a, b)| b.mul(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            maps,
        })
    }

    /// `[self, other]: A (+) B -> N` for morphisms with a common target.
    fn hstack_sources(&self, other: &Morphism) -> Result<Morphism> {
        let source = self.source.direct_sum(&other.source)?;
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.hstack(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source,
            target: self.target.clone(),
            maps,
        })
    }

    /// `(self; other): M -> A (+) B` for morphisms with a common source.
    fn vstack_targets(&self, other: &Morphism) -> Result<Morphism> {
        let target = self.target.direct_sum(&other.target)?;
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.vstack(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: self.source.clone(),
            target,
            maps,
        })
    }

    pub fn kernel(&self) -> Result<(Representation, Morphism)> {
        let spans: Vec<FMatrix> = self.maps.iter().map(|m| m.kernel_basis()).collect();
        self.source.subrepresentation(&spans)
    }

    pub fn image(&self) -> Result<(Representation, Morphism)> {
        let spans: Vec<FMatrix> = self.maps.iter().map(|m| m.image_basis()).collect();
        self.target.subrepresentation(&spans)
    }

    pub fn cokernel(&self) -> Result<(Representation, Morphism)> {
        let spans: Vec<FMatrix> = self.maps.iter().map(|m| m.image_basis()).collect();
        self.target.quotient(&spans)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::named;

    fn k() -> PrimeField {
        PrimeField::default()
    }

    fn eq_a(n: usize) -> Arc<Quiver> {
        Arc::new(Quiver::equioriented_a(n))
    }

    fn sum_all(reps: impl IntoIterator<Item = Representation>) -> Representation {
        let mut it = reps.into_iter();
        let first = it.next().unwrap();
        it.fold(first, |acc, r| acc.direct_sum(&r).unwrap())
    }

    #[test]
    fn projective_and_injective_dimensions() {
        let q = eq_a(3);
        let p = sum_all((0..3).map(|i| Representation::projective(q.clone(), k(), i)));
        assert_eq!(p.dims(), &DimVector(vec![1, 2, 3]));
        let z = Arc::new(named::zigzag_a3());
        let i = sum_all((0..3).map(|i| Representation::injective(z.clone(), k(), i)));
        assert_eq!(i.dims(), &DimVector(vec![2, 1, 2]));
        let both = sum_all((0..3).flat_map(|i| {
            [
                Representation::projective(q.clone(), k(), i),
                Representation::injective(q.clone(), k(), i),
            ]
        }));
        assert_eq!(both.dims(), &DimVector(vec![4, 4, 4]));
        let s = Representation::simple(q.clone(), k(), 1);
        assert!(s.maps().iter().all(|m| m.is_zero()));
    }

    #[test]
    fn direct_sum_with_zero() {
        let q = eq_a(3);
        let p = Representation::projective(q.clone(), k(), 0);
        assert_eq!(p.direct_sum(&Representation::zero(q, k())).unwrap(), p);
    }

    #[test]
    fn path_matrices() {
        let q = eq_a(3);
        let p = Representation::projective(q.clone(), k(), 0);
        let path = q.path_between(0, 2).unwrap();
        assert_eq!(p.path_matrix(&path).rank(), 1);
        let single = q.path_between(0, 1).unwrap();
        assert_eq!(&p.path_matrix(&single), p.map(0));
        let s = Representation::simple(q.clone(), k(), 1);
        assert!(s.path_matrix(&path).is_zero());
    }

    #[test]
    fn hom_examples() {
        let q = eq_a(3);
        let u23 = Representation::projective(q.clone(), k(), 1); // U(2,3)
        let u12 = Representation::injective(q.clone(), k(), 1); // U(1,2)
        assert_eq!(u23.hom_dim(&u12).unwrap(), 1);
        assert_eq!(u12.hom_dim(&u23).unwrap(), 0);
        for i in 0..3 {
            let s = Representation::simple(q.clone(), k(), i);
            assert_eq!(s.hom_dim(&s).unwrap(), 1);
        }
        let basis = u23.hom_basis(&u12).unwrap();
        assert_eq!(basis.len(), 1);
        let m = &basis[0];
        assert!(Morphism::new(m.source().clone(), m.target().clone(), m.maps().to_vec()).is_ok());
    }

    #[test]
    fn ext_examples() {
        let q = eq_a(2);
        let s1 = Representation::simple(q.clone(), k(), 0);
        let s2 = Representation::simple(q.clone(), k(), 1);
        // the extension 0 -> S2 -> U(1,2) -> S1 -> 0
        assert_eq!(s1.ext1_dim(&s2).unwrap(), 1);
        assert_eq!(s2.ext1_dim(&s1).unwrap(), 0);
        assert!(!s1.direct_sum(&s2).unwrap().is_rigid());
        let all = sum_all((0..2).flat_map(|i| {
            [
                Representation::projective(q.clone(), k(), i),
                Representation::injective(q.clone(), k(), i),
            ]
        }));
        assert!(!all.is_rigid());
        for i in 0..2 {
            let p = Representation::projective(q.clone(), k(), i);
            assert_eq!(p.ext1_dim(&all).unwrap(), 0);
        }
    }

    #[test]
    fn non_commuting_family_is_rejected() {
        let q = eq_a(2);
        let p1 = Representation::projective(q.clone(), k(), 0);
        let s2 = Representation::simple(q.clone(), k(), 1);
        // phi_1 = 0, phi_2 = 1 does not commute with the arrow of P_1
        let maps = vec![FMatrix::zeros(k(), 1, 0), FMatrix::identity(k(), 1)];
        assert!(Morphism::new(s2.clone(), p1.clone(), maps).is_ok());
        let bad = vec![FMatrix::zeros(k(), 0, 1), FMatrix::identity(k(), 1)];
        assert!(matches!(
            Morphism::new(p1, s2, bad),
            Err(Error::NotAMorphism(0))
        ));
    }

    #[test]
    fn kernels_and_cokernels() {
        let q = eq_a(3);
        let p = Representation::projective(q.clone(), k(), 0);
        let id = Morphism::identity(&p);
        assert!(id.kernel().unwrap().0.is_zero());
        let s = Representation::simple(q.clone(), k(), 2);
        let zero = Morphism::zero(p.clone(), s.clone());
        assert_eq!(zero.cokernel().unwrap().0, s);

        // P_1 -> S_1 has kernel rad P_1
        let (top, proj) = p.top().unwrap();
        assert_eq!(top.dims(), &DimVector(vec![1, 0, 0]));
        let (ker, _) = proj.kernel().unwrap();
        let (rad, _) = p.radical().unwrap();
        assert_eq!(ker.dims(), rad.dims());
        assert_eq!(ker.hom_dim(&rad).unwrap(), 1);
        assert_eq!(rad.hom_dim(&ker).unwrap(), 1);
        let (img, incl) = proj.image().unwrap();
        assert_eq!(img.dims(), top.dims());
        assert!(incl.is_injective());
    }

    #[test]
    fn radical_socle_top() {
        let q = eq_a(3);
        for i in 0..3 {
            let s = Representation::simple(q.clone(), k(), i);
            assert!(s.radical().unwrap().0.is_zero());
            assert_eq!(s.socle().unwrap().0, s);
            let p = Representation::projective(q.clone(), k(), i);
            assert_eq!(p.top().unwrap().0, s);
            let inj = Representation::injective(q.clone(), k(), i);
            assert_eq!(inj.socle().unwrap().0, s);
        }
    }

    #[test]
    fn covers_and_hulls() {
        let z = Arc::new(named::d4_subspace());
        let reps = [
            Representation::injective(z.clone(), k(), 2),
            Representation::projective(z.clone(), k(), 0)
                .direct_sum(&Representation::simple(z.clone(), k(), 1))
                .unwrap(),
        ];
        for m in reps {
            let cover = m.projective_cover().unwrap();
            assert!(cover.is_surjective());
            assert_eq!(cover.target(), &m);
            let (top, _) = m.top().unwrap();
            let (cover_top, _) = cover.source().top().unwrap();
            assert_eq!(top.dims(), cover_top.dims());
            let hull = m.injective_hull().unwrap();
            assert!(hull.is_injective());
            let (soc, _) = m.socle().unwrap();
            let (hull_soc, _) = hull.target().socle().unwrap();
            assert_eq!(soc.dims(), hull_soc.dims());
        }
    }

    #[test]
    fn orbit_dimension_identity() {
        let z = Arc::new(named::zigzag_a3());
        let m = sum_all([
            Representation::projective(z.clone(), k(), 0),
            Representation::injective(z.clone(), k(), 1),
            Representation::simple(z.clone(), k(), 1),
        ]);
        let d = m.dims().clone();
        let orbit = d.0.iter().map(|x| x * x).sum::<usize>() - m.end_dim();
        let rep_space: usize = z.arrows().iter().map(|a| d[a.source] * d[a.target]).sum();
        assert_eq!(orbit + m.ext1_dim(&m).unwrap(), rep_space);
    }
}

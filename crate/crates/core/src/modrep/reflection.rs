use std::sync::Arc;

use super::Representation;
use crate::error::{Error, Result};
use crate::ffalg::{FMatrix, Quotient};
use crate::quiver::DimVector;

/// Reflection functor at vertex `k`, producing a representation of the
/// quiver with all arrows at `k` reversed.
///
/// At a sink the new space is the kernel of `(+) M_s -> M_k` and the reversed
/// arrows are the coordinate projections of that kernel. At a source the new
/// space is the cokernel of `M_k -> (+) M_t` and the reversed arrows are the
/// induced maps into it. Arrows keep their indices.
pub fn reflection_functor(m: &Representation, k: usize) -> Result<Representation> {
    let q = m.quiver();
    if k >= q.n_vertices() {
        return Err(Error::OutOfRange(format!("vertex index {k}")));
    }
    let reflected = Arc::new(q.reflect_at(k));
    let f = m.field();
    let mut dims = m.dims().clone();
    let mut maps = m.maps().to_vec();
    if q.is_sink(k) {
        let incoming: Vec<usize> = q.incoming(k).collect();
        let mut h = FMatrix::zeros(f, m.dims()[k], 0);
        for &a in &incoming {
            h = h.hstack(m.map(a))?;
        }
        let ker = h.kernel_basis();
        dims.0[k] = ker.cols();
        let mut offset = 0;
        for &a in &incoming {
            let d = m.dims()[q.arrow(a).source];
            maps[a] = ker.row_block(offset, offset + d);
            offset += d;
        }
    } else if q.is_source(k) {
        let outgoing: Vec<usize> = q.outgoing(k).collect();
        let mut g = FMatrix::zeros(f, 0, m.dims()[k]);
        for &a in &outgoing {
            g = g.vstack(m.map(a))?;
        }
        let quot = Quotient::new(&g);
        dims.0[k] = quot.dim();
        let total = g.rows();
        let mut offset = 0;
        for &a in &outgoing {
            let d = m.dims()[q.arrow(a).target];
            let cols: Vec<Vec<u32>> = (0..d)
                .map(|c| {
                    let mut e = vec![0; total];
                    e[offset + c] = 1;
                    quot.project(&e)
                })
                .collect();
            maps[a] = FMatrix::from_columns(f, quot.dim(), &cols);
            offset += d;
        }
    } else {
        return Err(Error::NotSinkOrSource(q.name(k)));
    }
    Representation::new(reflected, f, DimVector(dims.0), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::PrimeField;
    use crate::quiver::{named, Quiver};

    #[test]
    fn simple_at_sink_goes_to_zero() {
        let q = Arc::new(Quiver::equioriented_a(3));
        let s = Representation::simple(q.clone(), PrimeField::default(), 2);
        assert!(reflection_functor(&s, 2).unwrap().is_zero());
    }

    #[test]
    fn dimension_vectors_reflect() {
        let q = Arc::new(named::d4_into_center());
        let f = PrimeField::default();
        // center is a sink; P_1 = (1,1,0,0) reflects to (1,0,0,0) on the reflected quiver
        let p = Representation::projective(q.clone(), f, 0);
        let r = reflection_functor(&p, 1).unwrap();
        assert_eq!(r.dims(), &DimVector(vec![1, 0, 0, 0]));
        let back = reflection_functor(&r, 1).unwrap();
        assert_eq!(back.dims(), p.dims());
        assert_eq!(back.quiver().as_ref(), q.as_ref());
        assert_eq!(back.hom_dim(&p).unwrap(), 1);
        assert_eq!(p.hom_dim(&back).unwrap(), 1);
    }

    #[test]
    fn interior_vertex_is_rejected() {
        let q = Arc::new(Quiver::equioriented_a(3));
        let s = Representation::simple(q, PrimeField::default(), 1);
        assert!(matches!(
            reflection_functor(&s, 1),
            Err(Error::NotSinkOrSource(2))
        ));
    }
}

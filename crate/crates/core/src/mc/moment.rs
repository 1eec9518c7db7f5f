//! Representations of the doubled quiver and the moment map.

use crate::error::{Error, Result};
use crate::lattice::Quiver;
use crate::linalg::RatMatrix;

/// A representation of the doubled quiver: one pair `(x_ρ, x_ρ*)` per arrow
/// of `Quiver::arrow_list`, repeated by multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    pub x: Vec<RatMatrix>,
    pub x_star: Vec<RatMatrix>,
}

/// Arrow endpoints in the order the representation stores them.
pub fn expanded_arrows(q: &Quiver) -> Vec<(usize, usize)> {
    q.arrow_list().into_iter().flat_map(|(s, t, m)| std::iter::repeat_n((s, t), m as usize)).collect()
}

impl QuiverRep {
    pub fn zero(q: &Quiver, dims: &[usize]) -> Self {
        let arrows = expanded_arrows(q);
        QuiverRep {
            dims: dims.to_vec(),
            x: arrows.iter().map(|&(s, t)| RatMatrix::zeros(dims[t], dims[s])).collect(),
            x_star: arrows.iter().map(|&(s, t)| RatMatrix::zeros(dims[s], dims[t])).collect(),
        }
    }

    pub fn check(&self, q: &Quiver) -> Result<()> {
        if self.dims.len() != q.len() {
            return Err(Error::SizeMismatch { expected: q.len(), got: self.dims.len() });
        }
        let arrows = expanded_arrows(q);
        if self.x.len() != arrows.len() || self.x_star.len() != arrows.len() {
            return Err(Error::SizeMismatch { expected: arrows.len(), got: self.x.len().min(self.x_star.len()) });
        }
        for (r, &(s, t)) in arrows.iter().enumerate() {
            let (ds, dt) = (self.dims[s], self.dims[t]);
            if (self.x[r].rows(), self.x[r].cols()) != (dt, ds)
                || (self.x_star[r].rows(), self.x_star[r].cols()) != (ds, dt)
            {
                return Err(Error::invalid(format!("arrow {r}: matrix shapes do not match the dimensions")));
            }
        }
        Ok(())
    }

    /// `g · x`: `x_ρ ↦ g_t x_ρ g_s^{-1}`, `x_ρ* ↦ g_s x_ρ* g_t^{-1}`.
    pub fn act(&self, q: &Quiver, g: &[RatMatrix]) -> Result<QuiverRep> {
        self.check(q)?;
        let inv: Vec<RatMatrix> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::invalid("group element is singular")))
            .collect::<Result<_>>()?;
        let arrows = expanded_arrows(q);
        Ok(QuiverRep {
            dims: self.dims.clone(),
            x: arrows.iter().zip(&self.x).map(|(&(s, t), x)| g[t].mul(x).mul(&inv[s])).collect(),
            x_star: arrows.iter().zip(&self.x_star).map(|(&(s, t), y)| g[s].mul(y).mul(&inv[t])).collect(),
        })
    }
}

/// `μ(x)_a = Σ_{t(ρ)=a} x_ρ x_ρ* − Σ_{s(ρ)=a} x_ρ* x_ρ`.
pub fn moment_map(q: &Quiver, rep: &QuiverRep) -> Result<Vec<RatMatrix>> {
    rep.check(q)?;
    let mut mu: Vec<RatMatrix> = rep.dims.iter().map(|&d| RatMatrix::zeros(d, d)).collect();
    for (r, (s, t)) in expanded_arrows(q).into_iter().enumerate() {
        mu[t] = mu[t].add(&rep.x[r].mul(&rep.x_star[r]));
        mu[s] = mu[s].sub(&rep.x_star[r].mul(&rep.x[r]));
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::VertexTag;
    use crate::rat::q;

    fn one_arrow() -> Quiver {
        let v = vec![VertexTag::Irr { i: 0, j: 1 }, VertexTag::Irr { i: 0, j: 2 }];
        Quiver::new(v, &[(0, 1, 1)]).unwrap()
    }

    #[test]
    fn zero_rep() {
        let qv = one_arrow();
        let mu = moment_map(&qv, &QuiverRep::zero(&qv, &[2, 3])).unwrap();
        assert!(mu.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn scalar_case() {
        let qv = one_arrow();
        let rep = QuiverRep {
            dims: vec![1, 1],
            x: vec![RatMatrix::scalar(1, &q(3))],
            x_star: vec![RatMatrix::scalar(1, &q(5))],
        };
        let mu = moment_map(&qv, &rep).unwrap();
        assert_eq!(mu[1][(0, 0)], q(15));
        assert_eq!(mu[0][(0, 0)], q(-15));
    }

    #[test]
    fn shape_mismatch() {
        let qv = one_arrow();
        let mut rep = QuiverRep::zero(&qv, &[1, 2]);
        rep.x[0] = RatMatrix::zeros(1, 1);
        assert!(moment_map(&qv, &rep).is_err());
    }
}

//! The quiver and dimension vector attached to a spectral type.

use std::collections::HashMap;

use super::SpectralType;
use crate::error::{Error, Result};
use crate::lattice::{DimVector, Quiver, VertexTag};

/// Coarse classification of vertices, used for reporting arrow families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRole {
    Block,
    Leg,
}

/// A spectral type's quiver together with its dimension vector and the
/// bookkeeping needed to address vertices by tag.
#[derive(Clone, Debug)]
pub struct QuiverData {
    pub st: SpectralType,
    pub quiver: Quiver,
    pub alpha: DimVector,
    irr: Vec<usize>,
    index: HashMap<VertexTag, usize>,
}

impl QuiverData {
    pub fn irregular_points(&self) -> &[usize] {
        &self.irr
    }

    pub fn is_irregular(&self, i: usize) -> bool {
        self.irr.contains(&i)
    }

    pub fn vertex(&self, tag: &VertexTag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    /// Index of `[i,j]` (block `j` 1-based).
    pub fn block_vertex(&self, i: usize, j: usize) -> Option<usize> {
        self.vertex(&VertexTag::Irr { i, j })
    }

    pub fn leg_vertex(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        self.vertex(&VertexTag::Leg { i, j, k })
    }

    pub fn role(&self, v: usize) -> VertexRole {
        if self.quiver.vertices()[v].is_leg() {
            VertexRole::Leg
        } else {
            VertexRole::Block
        }
    }

    pub fn leg_vertices(&self) -> Vec<usize> {
        (0..self.quiver.len()).filter(|&v| self.quiver.vertices()[v].is_leg()).collect()
    }

    /// Membership in the balanced lattice: equal block sums at all irregular
    /// points.
    pub fn is_balanced(&self, v: &[i64]) -> bool {
        let sums: Vec<i64> = self
            .irr
            .iter()
            .map(|&i| (1..=self.st.point(i).num_blocks()).map(|j| v[self.block_vertex(i, j).unwrap()]).sum())
            .collect();
        sums.windows(2).all(|w| w[0] == w[1])
    }

    /// Number of block choices per point; regular points offer one choice.
    pub fn tuple_ranges(&self) -> Vec<usize> {
        self.st.points().iter().map(|p| p.num_blocks()).collect()
    }

    pub fn validate_tuple(&self, t: &[usize]) -> Result<()> {
        let ranges = self.tuple_ranges();
        if t.len() != ranges.len() {
            return Err(Error::SizeMismatch { expected: ranges.len(), got: t.len() });
        }
        for (i, (&j, &m)) in t.iter().zip(&ranges).enumerate() {
            if j < 1 || j > m {
                return Err(Error::invalid(format!("block choice {j} out of range 1..={m} at point {i}")));
            }
        }
        Ok(())
    }

    /// All block choices, in lexicographic order.
    pub fn all_tuples(&self) -> Vec<Vec<usize>> {
        let ranges = self.tuple_ranges();
        let mut out = vec![vec![]];
        for &m in &ranges {
            let mut next = Vec::with_capacity(out.len() * m);
            for t in &out {
                for j in 1..=m {
                    let mut t2 = t.clone();
                    t2.push(j);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }
}

impl SpectralType {
    /// Builds the quiver, vertex order: block vertices `[i,j]` of irregular
    /// points, then leg vertices point by point.
    pub fn quiver_of(&self) -> Result<QuiverData> {
        for (i, p) in self.points().iter().enumerate().skip(1) {
            if p.num_blocks() == 1 && !p.is_regular() {
                return Err(Error::invalid(format!(
                    "point {i} has a single block with a polynomial part; normalize first"
                )));
            }
        }
        let irr = self.irregular_points();
        let mut tags = Vec::new();
        let mut alpha = Vec::new();
        for &i in &irr {
            let p = self.point(i);
            for j in 0..p.num_blocks() {
                tags.push(VertexTag::Irr { i, j: j + 1 });
                alpha.push(p.block_size(j));
            }
        }
        for (i, p) in self.points().iter().enumerate() {
            for j in 0..p.num_blocks() {
                let chain = p.chain(j);
                let mut rest = p.block_size(j);
                for (k, m) in chain.iter().enumerate().take(chain.len() - 1) {
                    rest -= m;
                    tags.push(VertexTag::Leg { i, j: j + 1, k: k + 1 });
                    alpha.push(rest);
                }
            }
        }
        let index: HashMap<VertexTag, usize> = tags.iter().enumerate().map(|(a, t)| (*t, a)).collect();
        let mut arrows = Vec::new();
        let m0 = self.point(0).num_blocks();
        for &i in irr.iter().filter(|&&i| i != 0) {
            for j in 1..=m0 {
                for jp in 1..=self.point(i).num_blocks() {
                    arrows.push((index[&VertexTag::Irr { i: 0, j }], index[&VertexTag::Irr { i, j: jp }], 1));
                }
            }
        }
        for &i in &irr {
            let p = self.point(i);
            for j in 0..p.num_blocks() {
                for jp in j + 1..p.num_blocks() {
                    let d = p.d(j, jp);
                    if d > 0 {
                        arrows.push((
                            index[&VertexTag::Irr { i, j: j + 1 }],
                            index[&VertexTag::Irr { i, j: jp + 1 }],
                            d as u32,
                        ));
                    }
                }
            }
        }
        for (i, p) in self.points().iter().enumerate() {
            let regular = !irr.contains(&i);
            for j in 1..=p.num_blocks() {
                let e = p.chain(j - 1).len();
                for k in 1..e {
                    let src = index[&VertexTag::Leg { i, j, k }];
                    if k > 1 {
                        arrows.push((src, index[&VertexTag::Leg { i, j, k: k - 1 }], 1));
                    } else if regular {
                        for j0 in 1..=m0 {
                            arrows.push((src, index[&VertexTag::Irr { i: 0, j: j0 }], 1));
                        }
                    } else {
                        arrows.push((src, index[&VertexTag::Irr { i, j }], 1));
                    }
                }
            }
        }
        let quiver = Quiver::new(tags, &arrows)?;
        Ok(QuiverData { st: self.clone(), quiver, alpha, irr, index })
    }

    /// `idx = 2 q(α)`.
    pub fn rigidity_index(&self) -> Result<i64> {
        let qd = self.normalize().quiver_of()?;
        qd.quiver.sym_form(&qd.alpha, &qd.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_spectral_type;

    #[test]
    fn worked_example_counts() {
        let st = parse_spectral_type("(((1)(1))((1)))(((1))),(111)(1),1111").unwrap();
        let qd = st.quiver_of().unwrap();
        assert_eq!(qd.quiver.len(), 11);
        assert_eq!(qd.quiver.total_arrows(), 24);
    }

    #[test]
    fn three_regular_points() {
        let st = parse_spectral_type("11,11,11").unwrap();
        let qd = st.quiver_of().unwrap();
        // Centre [0,1] of rank 2 with three legs of length one.
        assert_eq!(qd.quiver.len(), 4);
        assert_eq!(qd.alpha, vec![2, 1, 1, 1]);
        assert_eq!(st.rigidity_index().unwrap(), 2);
    }

    #[test]
    fn small_indices() {
        assert_eq!(parse_spectral_type("(1)(1),(1)(1)").unwrap().rigidity_index().unwrap(), 0);
        assert_eq!(parse_spectral_type("((1))((1)),(1)(1)").unwrap().rigidity_index().unwrap(), -2);
        assert_eq!(parse_spectral_type("11,11,11,11").unwrap().rigidity_index().unwrap(), 0);
    }

    #[test]
    fn single_block_irregular_point_rejected() {
        let st = parse_spectral_type("11,(11)").unwrap();
        assert!(st.quiver_of().is_err());
        assert!(st.normalize().quiver_of().is_ok());
    }
}

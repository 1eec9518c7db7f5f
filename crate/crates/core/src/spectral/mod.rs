//! Spectral types and the objects built from them.

mod htl;
mod lift;
mod parse;
mod quiver;

pub use htl::{HtlSymbolData, PointData};
pub use lift::{Generator, LiftLattice, Shape, ShapeNode};
pub use parse::parse_spectral_type;
pub use quiver::{QuiverData, VertexRole};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Nested block tree of one point. Leaves are blocks carrying their
/// eigenvalue-chain multiplicities; a regular point is a bare leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf(Vec<i64>),
    Node(Vec<Tree>),
}

impl Tree {
    fn leaf_depths(&self, depth: usize, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(_) => out.push(depth),
            Tree::Node(cs) => cs.iter().for_each(|c| c.leaf_depths(depth + 1, out)),
        }
    }

    fn collect_leaves<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Vec<i64>)>) {
        match self {
            Tree::Leaf(c) => out.push((path.clone(), c)),
            Tree::Node(cs) => {
                for (idx, c) in cs.iter().enumerate() {
                    path.push(idx);
                    c.collect_leaves(path, out);
                    path.pop();
                }
            }
        }
    }

    /// Block sizes under this subtree, sorted descending.
    fn size_profile(&self) -> Vec<i64> {
        let mut v: Vec<i64> = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Tree::Leaf(c) => v.push(c.iter().sum()),
                Tree::Node(cs) => stack.extend(cs.iter()),
            }
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    fn canonicalize(&mut self) {
        if let Tree::Node(cs) = self {
            for c in cs.iter_mut() {
                c.canonicalize();
            }
            cs.sort_by(|a, b| canonical_cmp(a.size_profile(), a.inner(), b.size_profile(), b.inner()));
        }
    }

    fn inner(&self) -> String {
        match self {
            Tree::Leaf(c) => c.iter().map(|&m| fmt_mult(m)).collect(),
            Tree::Node(cs) => cs.iter().map(|c| format!("({})", c.inner())).collect(),
        }
    }
}

/// Larger size profiles first, then the printed form as a tie-break.
fn canonical_cmp(pa: Vec<i64>, sa: String, pb: Vec<i64>, sb: String) -> Ordering {
    pb.cmp(&pa).then_with(|| sa.cmp(&sb))
}

fn fmt_mult(m: i64) -> String {
    if (0..10).contains(&m) {
        m.to_string()
    } else {
        format!("[{m}]")
    }
}

/// One singular point: its block tree, with flattened block data cached.
#[derive(Clone, Debug)]
pub struct PointType {
    tree: Tree,
    pole_order: usize,
    chains: Vec<Vec<i64>>,
    /// `d[j][j']`, meaningful off the diagonal only.
    d: Vec<Vec<i64>>,
}

impl PartialEq for PointType {
    fn eq(&self, other: &Self) -> bool {
        self.tree == other.tree
    }
}

impl Eq for PointType {}

impl std::hash::Hash for PointType {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.tree.hash(state)
    }
}

impl PointType {
    pub fn new(tree: Tree) -> Result<Self> {
        let mut depths = Vec::new();
        tree.leaf_depths(0, &mut depths);
        let depth = depths[0];
        if depths.iter().any(|&x| x != depth) {
            return Err(Error::invalid("non-uniform leaf depth within a point"));
        }
        let mut leaves = Vec::new();
        tree.collect_leaves(&mut Vec::new(), &mut leaves);
        for (_, c) in &leaves {
            if c.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            if c.iter().any(|&m| m < 1) {
                return Err(Error::invalid("zero multiplicity"));
            }
        }
        let pole_order = depth + 1;
        let m = leaves.len();
        let mut d = vec![vec![0i64; m]; m];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    let lca = leaves[a].0.iter().zip(&leaves[b].0).take_while(|(x, y)| x == y).count();
                    d[a][b] = pole_order as i64 - 2 - lca as i64;
                }
            }
        }
        let chains = leaves.into_iter().map(|(_, c)| c.clone()).collect();
        Ok(PointType { tree, pole_order, chains, d })
    }

    /// A regular point with the given eigenvalue multiplicities.
    pub fn regular(chain: Vec<i64>) -> Result<Self> {
        Self::new(Tree::Leaf(chain))
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    pub fn num_blocks(&self) -> usize {
        self.chains.len()
    }

    pub fn chain(&self, j: usize) -> &[i64] {
        &self.chains[j]
    }

    pub fn chains(&self) -> &[Vec<i64>] {
        &self.chains
    }

    pub fn block_size(&self, j: usize) -> i64 {
        self.chains[j].iter().sum()
    }

    pub fn rank(&self) -> i64 {
        self.chains.iter().flatten().sum()
    }

    /// `d(j, j')` for distinct blocks (0-based indices).
    pub fn d(&self, j: usize, jp: usize) -> i64 {
        self.d[j][jp]
    }

    pub fn is_regular(&self) -> bool {
        self.pole_order == 1
    }

    pub fn to_notation(&self) -> String {
        self.tree.inner()
    }

    fn sort_key(&self) -> (usize, Vec<i64>, String) {
        (self.pole_order, self.tree.size_profile(), self.to_notation())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralType {
    points: Vec<PointType>,
}

impl SpectralType {
    pub fn new(points: Vec<PointType>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a spectral type needs at least one point"));
        }
        let n = points[0].rank();
        for p in &points[1..] {
            if p.rank() != n {
                return Err(Error::invalid(format!("rank mismatch across points: {} vs {}", n, p.rank())));
            }
        }
        Ok(SpectralType { points })
    }

    pub fn points(&self) -> &[PointType] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &PointType {
        &self.points[i]
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn rank(&self) -> i64 {
        self.points[0].rank()
    }

    /// Points carrying `[i,j]` vertices: point 0 and every point with more
    /// than one block.
    pub fn irregular_points(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| i == 0 || self.points[i].num_blocks() > 1).collect()
    }

    pub fn regular_points(&self) -> Vec<usize> {
        (1..self.points.len()).filter(|&i| self.points[i].num_blocks() == 1).collect()
    }

    /// Reordered into canonical form: sibling subtrees and points sorted by
    /// descending size profile, points first by descending pole order.
    pub fn canonical(&self) -> SpectralType {
        let mut pts: Vec<PointType> = self
            .points
            .iter()
            .map(|p| {
                let mut t = p.tree.clone();
                t.canonicalize();
                PointType::new(t).expect("reordering keeps validity")
            })
            .collect();
        pts.sort_by(|a, b| {
            let (ka, pa, sa) = a.sort_key();
            let (kb, pb, sb) = b.sort_key();
            kb.cmp(&ka).then_with(|| canonical_cmp(pa, sa, pb, sb))
        });
        SpectralType { points: pts }
    }

    /// True unless some point other than 0 is a single block with a
    /// one-term eigenvalue chain and a nontrivial polynomial part.
    pub fn is_reduced(&self) -> bool {
        !self.points[1..].iter().any(|p| p.pole_order > 1 && p.num_blocks() == 1 && p.chains[0].len() == 1)
    }

    /// Strips the polynomial part of every single-block point other than 0,
    /// making it regular.
    pub fn normalize(&self) -> SpectralType {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if i > 0 && p.num_blocks() == 1 && p.pole_order > 1 {
                    PointType::regular(p.chains[0].clone()).expect("chain already validated")
                } else {
                    p.clone()
                }
            })
            .collect();
        SpectralType { points }
    }

    /// Canonical printed form.
    pub fn to_notation(&self) -> String {
        self.canonical().to_notation_as_is()
    }

    /// Printed form in the stored order.
    pub fn to_notation_as_is(&self) -> String {
        self.points.iter().map(|p| p.to_notation()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for SpectralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_notation())
    }
}

impl std::str::FromStr for SpectralType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spectral_type(s)
    }
}

//! Quivers and the arithmetic of their root lattices.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Q;
use num_traits::Zero;

pub type DimVector = Vec<i64>;
pub type ParamVector = Vec<Q>;

/// Vertex label. `Irr(i, j)` is the block vertex `[i,j]` of an irregular
/// point, `Leg(i, j, k)` the `k`-th vertex of the leg hanging off block `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum VertexTag {
    Irr { i: usize, j: usize },
    Leg { i: usize, j: usize, k: usize },
}

impl VertexTag {
    pub fn point(&self) -> usize {
        match *self {
            VertexTag::Irr { i, .. } | VertexTag::Leg { i, .. } => i,
        }
    }

    pub fn block(&self) -> usize {
        match *self {
            VertexTag::Irr { j, .. } | VertexTag::Leg { j, .. } => j,
        }
    }

    pub fn is_leg(&self) -> bool {
        matches!(self, VertexTag::Leg { .. })
    }
}

impl fmt::Display for VertexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexTag::Irr { i, j } => write!(f, "[{i},{j}]"),
            VertexTag::Leg { i, j, k } => write!(f, "[{i},{j},{k}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<VertexTag>,
    /// `arrows[s][t]` is the number of arrows `s -> t`.
    arrows: Vec<Vec<u32>>,
    /// Symmetrised form on simple roots, cached.
    gram: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    src: usize,
    dst: usize,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<VertexTag>,
    arrows: Vec<ArrowJson>,
}

impl Quiver {
    pub fn new(vertices: Vec<VertexTag>, arrows: &[(usize, usize, u32)]) -> Result<Self> {
        let n = vertices.len();
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(*v) {
                return Err(Error::invalid(format!("duplicate vertex tag {v}")));
            }
            if let VertexTag::Leg { k: 0, .. } = v {
                return Err(Error::invalid(format!("leg depth must be >= 1 at {v}")));
            }
        }
        let mut table = vec![vec![0u32; n]; n];
        for &(s, t, m) in arrows {
            if s >= n || t >= n {
                return Err(Error::invalid(format!("arrow {s}->{t} refers to a missing vertex")));
            }
            table[s][t] += m;
        }
        Ok(Self::from_table(vertices, table))
    }

    fn from_table(vertices: Vec<VertexTag>, arrows: Vec<Vec<u32>>) -> Self {
        let n = vertices.len();
        let mut gram = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut g = -(arrows[a][b] as i64) - (arrows[b][a] as i64);
                if a == b {
                    g += 2;
                }
                gram[a][b] = g;
            }
        }
        Quiver { vertices, arrows, gram }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexTag] {
        &self.vertices
    }

    pub fn index_of(&self, tag: &VertexTag) -> Option<usize> {
        self.vertices.iter().position(|v| v == tag)
    }

    pub fn arrows(&self, s: usize, t: usize) -> u32 {
        self.arrows[s][t]
    }

    /// All arrows as `(src, dst, mult)` with nonzero multiplicity.
    pub fn arrow_list(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for s in 0..self.len() {
            for t in 0..self.len() {
                if self.arrows[s][t] > 0 {
                    out.push((s, t, self.arrows[s][t]));
                }
            }
        }
        out
    }

    pub fn total_arrows(&self) -> u32 {
        self.arrows.iter().flatten().sum()
    }

    /// `(ε_a, ε_b)`.
    pub fn gram(&self, a: usize, b: usize) -> i64 {
        self.gram[a][b]
    }

    pub fn gram_matrix(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn has_loop(&self, a: usize) -> bool {
        self.arrows[a][a] > 0
    }

    pub fn unit(&self, a: usize) -> DimVector {
        let mut v = vec![0; self.len()];
        v[a] = 1;
        v
    }

    fn check(&self, v: usize) -> Result<()> {
        if v != self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), got: v });
        }
        Ok(())
    }

    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check(a.len())?;
        self.check(b.len())?;
        let mut s: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        for (src, dst, m) in self.arrow_list() {
            s -= m as i64 * a[src] * b[dst];
        }
        Ok(s)
    }

    pub fn sym_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check(a.len())?;
        self.check(b.len())?;
        Ok(self.pair(a, b))
    }

    /// Unchecked symmetric form for internal loops.
    pub(crate) fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (x, &ax) in a.iter().enumerate() {
            if ax == 0 {
                continue;
            }
            for (y, &by) in b.iter().enumerate() {
                if by != 0 {
                    s += ax * by * self.gram[x][y];
                }
            }
        }
        s
    }

    /// `(v, ε_a)`.
    pub fn pair_simple(&self, v: &[i64], a: usize) -> i64 {
        v.iter().zip(&self.gram[a]).map(|(x, g)| x * g).sum()
    }

    pub fn tits_q(&self, a: &[i64]) -> Result<i64> {
        Ok(self.sym_form(a, a)? / 2)
    }

    pub fn p_val(&self, a: &[i64]) -> Result<i64> {
        Ok(1 - self.tits_q(a)?)
    }

    pub fn simple_reflection(&self, a: usize, v: &[i64]) -> Result<DimVector> {
        self.check(v.len())?;
        if self.has_loop(a) {
            return Err(Error::EdgeLoop(a));
        }
        let mut out = v.to_vec();
        out[a] -= self.pair_simple(v, a);
        Ok(out)
    }

    pub fn lambda_reflection(&self, a: usize, l: &[Q]) -> Result<ParamVector> {
        self.check(l.len())?;
        if self.has_loop(a) {
            return Err(Error::EdgeLoop(a));
        }
        let la = l[a].clone();
        Ok(l.iter().enumerate().map(|(b, lb)| lb - Q::from_integer(self.gram[a][b].into()) * &la).collect())
    }

    /// Connectivity of the support of `v`, arrows taken undirected.
    pub fn support_connected(&self, v: &[i64]) -> Result<bool> {
        self.check(v.len())?;
        if v.iter().any(|&x| x < 0) {
            return Err(Error::invalid("support_connected expects a non-negative vector"));
        }
        Ok(self.support_connected_unchecked(v))
    }

    pub(crate) fn support_connected_unchecked(&self, v: &[i64]) -> bool {
        let supp: Vec<usize> = (0..v.len()).filter(|&a| v[a] != 0).collect();
        let Some(&start) = supp.first() else {
            return true;
        };
        let mut seen = vec![false; v.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &supp {
                if !seen[b] && (self.arrows[a][b] > 0 || self.arrows[b][a] > 0) {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        count == supp.len()
    }

    pub fn is_in_fundamental_set(&self, v: &[i64]) -> Result<bool> {
        self.check(v.len())?;
        if v.iter().any(|&x| x < 0) || v.iter().all(|&x| x == 0) {
            return Err(Error::invalid("fundamental set test expects a nonzero non-negative vector"));
        }
        let pairs_ok = (0..self.len()).all(|a| self.has_loop(a) || self.pair_simple(v, a) <= 0);
        Ok(pairs_ok && self.support_connected_unchecked(v))
    }

    /// Root type of `v` by height descent along simple reflections.
    pub fn classify_root(&self, v: &[i64]) -> Result<RootKind> {
        self.check(v.len())?;
        if v.iter().all(|&x| x == 0) {
            return Err(Error::invalid("classify_root expects a nonzero vector"));
        }
        let pos = v.iter().any(|&x| x > 0);
        let neg = v.iter().any(|&x| x < 0);
        if pos && neg {
            return Ok(RootKind::NotRoot);
        }
        let mut cur: DimVector = if neg { v.iter().map(|x| -x).collect() } else { v.to_vec() };
        loop {
            let nz: Vec<usize> = (0..cur.len()).filter(|&a| cur[a] != 0).collect();
            if nz.len() == 1 && cur[nz[0]] == 1 && !self.has_loop(nz[0]) {
                return Ok(RootKind::RealRoot);
            }
            if !self.support_connected_unchecked(&cur) {
                return Ok(RootKind::NotRoot);
            }
            let step = (0..cur.len()).find(|&a| !self.has_loop(a) && self.pair_simple(&cur, a) > 0);
            let Some(a) = step else {
                return Ok(RootKind::ImaginaryRoot);
            };
            cur[a] -= self.pair_simple(&cur, a);
            if cur[a] < 0 {
                return Ok(RootKind::NotRoot);
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = QuiverJson {
            vertices: self.vertices.clone(),
            arrows: self.arrow_list().into_iter().map(|(src, dst, mult)| ArrowJson { src, dst, mult }).collect(),
        };
        serde_json::to_value(j).expect("quiver serialises")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: QuiverJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::invalid(format!("quiver JSON: {e}")))?;
        let arrows: Vec<(usize, usize, u32)> = j.arrows.iter().map(|a| (a.src, a.dst, a.mult)).collect();
        Quiver::new(j.vertices, &arrows)
    }

    /// Arrow multiplicities grouped by unordered vertex pair, for reporting.
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out = BTreeMap::new();
        for (s, t, m) in self.arrow_list() {
            *out.entry((s.min(t), s.max(t))).or_insert(0) += m;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootKind {
    RealRoot,
    ImaginaryRoot,
    NotRoot,
}

pub fn dot_param(l: &[Q], v: &[i64]) -> Q {
    let mut s = Q::zero();
    for (x, &y) in l.iter().zip(v) {
        if y != 0 {
            s += x * Q::from_integer(y.into());
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Quiver {
        let v = vec![
            VertexTag::Irr { i: 0, j: 1 },
            VertexTag::Irr { i: 0, j: 2 },
            VertexTag::Irr { i: 1, j: 1 },
            VertexTag::Irr { i: 1, j: 2 },
        ];
        Quiver::new(v, &[(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)]).unwrap()
    }

    fn star(legs: usize) -> Quiver {
        let mut v = vec![VertexTag::Irr { i: 0, j: 1 }];
        let mut arrows = Vec::new();
        for l in 0..legs {
            v.push(VertexTag::Leg { i: l + 1, j: 1, k: 1 });
            arrows.push((l + 1, 0, 1));
        }
        Quiver::new(v, &arrows).unwrap()
    }

    #[test]
    fn euler_form_examples() {
        let q = square();
        assert_eq!(q.euler_form(&[1, 1, 1, 1], &[1, 1, 1, 1]).unwrap(), 0);
        assert_eq!(q.euler_form(&[1, 2, 0, 1], &[0, 0, 0, 0]).unwrap(), 0);
        let single = Quiver::new(vec![VertexTag::Irr { i: 0, j: 1 }], &[]).unwrap();
        assert_eq!(single.euler_form(&[1], &[1]).unwrap(), 1);
        assert!(q.euler_form(&[1], &[1]).is_err());
    }

    #[test]
    fn forms_on_square_and_star() {
        let q = square();
        assert_eq!(q.tits_q(&[1, 1, 1, 1]).unwrap(), 0);
        assert_eq!(q.p_val(&[1, 1, 1, 1]).unwrap(), 1);
        assert_eq!(q.sym_form(&q.unit(0), &q.unit(0)).unwrap(), 2);
        assert_eq!(q.p_val(&q.unit(2)).unwrap(), 0);
        let s = star(4);
        assert_eq!(s.tits_q(&[2, 1, 1, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn reflections() {
        let s = star(4);
        assert_eq!(s.simple_reflection(0, &[1, 1, 1, 1, 1]).unwrap(), vec![3, 1, 1, 1, 1]);
        assert_eq!(s.simple_reflection(2, &s.unit(2)).unwrap(), vec![0, 0, -1, 0, 0]);
        let l: ParamVector = vec![crate::rat::qf(1, 2), Q::zero(), crate::rat::q(3), Q::zero(), Q::zero()];
        let r = s.lambda_reflection(0, &l).unwrap();
        assert_eq!(r[0], -l[0].clone());
        let looped = Quiver::new(vec![VertexTag::Irr { i: 0, j: 1 }], &[(0, 0, 1)]).unwrap();
        assert_eq!(looped.simple_reflection(0, &[1]), Err(Error::EdgeLoop(0)));
    }

    #[test]
    fn support_and_fundamental() {
        let q = square();
        assert!(q.support_connected(&[1, 0, 0, 0]).unwrap());
        assert!(!q.support_connected(&[1, 1, 0, 0]).unwrap());
        assert!(q.support_connected(&[1, 1, 1, 1]).unwrap());
        assert!(q.support_connected(&[1, -1, 0, 0]).is_err());
        assert!(!q.is_in_fundamental_set(&q.unit(0)).unwrap());
        assert!(q.is_in_fundamental_set(&[1, 1, 1, 1]).unwrap());
        assert!(star(4).is_in_fundamental_set(&[2, 1, 1, 1, 1]).unwrap());
    }

    #[test]
    fn classify_examples() {
        let q = square();
        assert_eq!(q.classify_root(&q.unit(1)).unwrap(), RootKind::RealRoot);
        assert_eq!(q.classify_root(&[1, 1, 1, 1]).unwrap(), RootKind::ImaginaryRoot);
        assert_eq!(q.classify_root(&[-1, -1, -1, -1]).unwrap(), RootKind::ImaginaryRoot);
        let two = Quiver::new(vec![VertexTag::Irr { i: 0, j: 1 }, VertexTag::Irr { i: 0, j: 2 }], &[]).unwrap();
        assert_eq!(two.classify_root(&[1, 1]).unwrap(), RootKind::NotRoot);
        assert_eq!(q.classify_root(&[2, 0, 0, 0]).unwrap(), RootKind::NotRoot);
    }

    #[test]
    fn json_roundtrip() {
        let q = square();
        let back = Quiver::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
    }
}

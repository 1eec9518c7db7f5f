//! The lift lattice on block-tuple and leg generators, its projection onto
//! the balanced lattice, and shapes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{QuiverData, SpectralType};
use crate::error::{Error, Result};
use crate::intlin::{lattice_hnf, reduce_mod_hnf, solve_integer, IVec};
use crate::lattice::{DimVector, VertexTag};

/// A generator of the lift lattice: a block tuple (one 1-based block per
/// point) or a leg vertex of the quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Tuple(Vec<usize>),
    Leg(usize),
}

#[derive(Clone, Debug)]
pub struct LiftLattice {
    pub gens: Vec<Generator>,
    /// Symmetric Gram matrix of the generators.
    pub gram: Vec<Vec<i64>>,
    /// Projection matrix: rows are quiver vertices, columns generators.
    pub xi: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

impl LiftLattice {
    /// Generators supported on `beta`: tuples whose blocks all carry nonzero
    /// entries, and legs in the support.
    pub fn new(qd: &QuiverData, beta: &[i64]) -> Result<Self> {
        if beta.len() != qd.quiver.len() {
            return Err(Error::SizeMismatch { expected: qd.quiver.len(), got: beta.len() });
        }
        if !qd.is_balanced(beta) {
            return Err(Error::invalid("vector is not balanced across irregular points"));
        }
        let st = &qd.st;
        let irr = qd.irregular_points();
        let mut gens = Vec::new();
        for t in qd.all_tuples() {
            if irr.iter().all(|&i| beta[qd.block_vertex(i, t[i]).unwrap()] != 0) {
                gens.push(Generator::Tuple(t));
            }
        }
        for v in qd.leg_vertices() {
            if beta[v] != 0 {
                gens.push(Generator::Leg(v));
            }
        }
        let n = gens.len();
        let mut gram = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in 0..n {
                gram[a][b] = pair_generators(st, qd, &gens[a], &gens[b]);
            }
        }
        let nv = qd.quiver.len();
        let mut xi = vec![vec![0i64; n]; nv];
        for (c, g) in gens.iter().enumerate() {
            match g {
                Generator::Tuple(t) => {
                    for &i in irr {
                        xi[qd.block_vertex(i, t[i]).unwrap()][c] = 1;
                    }
                }
                Generator::Leg(v) => xi[*v][c] = 1,
            }
        }
        let labels = gens
            .iter()
            .map(|g| match g {
                Generator::Tuple(t) => {
                    format!("({})", t.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","))
                }
                Generator::Leg(v) => qd.quiver.vertices()[*v].to_string(),
            })
            .collect();
        Ok(LiftLattice { gens, gram, xi, labels })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (x, &ax) in a.iter().enumerate() {
            if ax != 0 {
                for (y, &by) in b.iter().enumerate() {
                    s += ax * by * self.gram[x][y];
                }
            }
        }
        s
    }

    /// Reflection of `gamma` in the generator `a`.
    pub fn reflect(&self, a: usize, gamma: &[i64]) -> Vec<i64> {
        let c: i64 = gamma.iter().zip(&self.gram[a]).map(|(x, g)| x * g).sum();
        let mut out = gamma.to_vec();
        out[a] -= c;
        out
    }

    pub fn xi_project(&self, gamma: &[i64]) -> Result<DimVector> {
        if gamma.len() != self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), got: gamma.len() });
        }
        Ok(self.xi.iter().map(|row| row.iter().zip(gamma).map(|(a, b)| a * b).sum()).collect())
    }

    /// Integral fiber over `beta`: a base point reduced modulo the kernel
    /// lattice, and the kernel lattice in Hermite normal form.
    pub fn xi_fiber(&self, beta: &[i64]) -> Result<(Vec<i64>, Vec<Vec<i64>>)> {
        if beta.len() != self.xi.len() {
            return Err(Error::SizeMismatch { expected: self.xi.len(), got: beta.len() });
        }
        let a: Vec<IVec> = self.xi.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let b: IVec = beta.iter().map(|&x| BigInt::from(x)).collect();
        let (x0, ker) = solve_integer(&a, self.len(), &b).ok_or(Error::NotInImage)?;
        let h = lattice_hnf(&ker, self.len());
        let base = reduce_mod_hnf(&x0, &h);
        let conv = |v: &[BigInt]| -> Vec<i64> { v.iter().map(|x| x.to_i64().expect("small coefficients")).collect() };
        Ok((conv(&base), h.iter().map(|r| conv(r)).collect()))
    }
}

fn pair_generators(st: &SpectralType, qd: &QuiverData, a: &Generator, b: &Generator) -> i64 {
    match (a, b) {
        (Generator::Tuple(s), Generator::Tuple(t)) => {
            let mut g = 2;
            for &i in qd.irregular_points() {
                if s[i] != t[i] {
                    g -= st.point(i).d(s[i] - 1, t[i] - 1) + 2;
                }
            }
            g
        }
        (Generator::Tuple(t), Generator::Leg(v)) | (Generator::Leg(v), Generator::Tuple(t)) => {
            match qd.quiver.vertices()[*v] {
                VertexTag::Leg { i, j, k: 1 } if t[i] == j => -1,
                _ => 0,
            }
        }
        (Generator::Leg(u), Generator::Leg(v)) => qd.quiver.gram(*u, *v),
    }
}

/// One node of a shape: the generator label and its coefficient as an
/// affine form `base + Σ params[r] * t_r` in the free parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeNode {
    pub id: String,
    pub base: i64,
    pub params: Vec<i64>,
}

impl ShapeNode {
    pub fn is_identically_zero(&self) -> bool {
        self.base == 0 && self.params.iter().all(|&x| x == 0)
    }
}

/// Diagram with parametric coefficients describing a projection fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub nodes: Vec<ShapeNode>,
    /// Gram matrix restricted to the nodes.
    pub gram: Vec<Vec<i64>>,
    pub n_params: usize,
}

impl Shape {
    /// Shape of `beta`: nodes are generators whose coefficient is not
    /// identically zero on the fiber.
    pub fn from_lift(ll: &LiftLattice, beta: &[i64]) -> Result<Shape> {
        let (base, ker) = ll.xi_fiber(beta)?;
        let keep: Vec<usize> = (0..ll.len()).filter(|&c| base[c] != 0 || ker.iter().any(|r| r[c] != 0)).collect();
        let nodes = keep
            .iter()
            .map(|&c| ShapeNode { id: ll.labels[c].clone(), base: base[c], params: ker.iter().map(|r| r[c]).collect() })
            .collect();
        let gram = keep.iter().map(|&a| keep.iter().map(|&b| ll.gram[a][b]).collect()).collect();
        Ok(Shape { nodes, gram, n_params: ker.len() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Undirected edges `(u, v, mult)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in u + 1..self.len() {
                if self.gram[u][v] != 0 {
                    out.push((u, v, -self.gram[u][v]));
                }
            }
        }
        out
    }

    /// Pairing of the fiber element with node `a`; independent of the
    /// parameters.
    pub fn node_pairing(&self, a: usize) -> i64 {
        self.nodes.iter().zip(&self.gram[a]).map(|(n, g)| n.base * g).sum()
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> =
            self.nodes.iter().map(|n| json!({ "id": n.id, "coeff_base": n.base, "coeff_params": n.params })).collect();
        let edges: Vec<Value> = self
            .edges()
            .into_iter()
            .map(|(u, v, m)| json!({ "u": self.nodes[u].id, "v": self.nodes[v].id, "mult": m }))
            .collect();
        json!({ "nodes": nodes, "edges": edges, "n_params": self.n_params })
    }

    /// Inverse of `to_json`; edges missing from the list have multiplicity 0.
    pub fn from_json(v: &Value) -> Result<Shape> {
        let bad = |m: &str| Error::invalid(format!("shape JSON: {m}"));
        let nodes_json = v["nodes"].as_array().ok_or_else(|| bad("missing nodes"))?;
        let n_params = v["n_params"].as_u64().ok_or_else(|| bad("missing n_params"))? as usize;
        let mut nodes = Vec::new();
        for n in nodes_json {
            let id = n["id"].as_str().ok_or_else(|| bad("node id"))?.to_string();
            let base = n["coeff_base"].as_i64().ok_or_else(|| bad("coeff_base"))?;
            let params: Vec<i64> = n["coeff_params"]
                .as_array()
                .ok_or_else(|| bad("coeff_params"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("coeff_params entry")))
                .collect::<Result<_>>()?;
            if params.len() != n_params {
                return Err(bad("coeff_params length"));
            }
            nodes.push(ShapeNode { id, base, params });
        }
        let idx = |s: &Value| -> Result<usize> {
            let s = s.as_str().ok_or_else(|| bad("edge endpoint"))?;
            nodes.iter().position(|n| n.id == s).ok_or_else(|| bad("unknown edge endpoint"))
        };
        let mut gram = vec![vec![0i64; nodes.len()]; nodes.len()];
        for (a, row) in gram.iter_mut().enumerate() {
            row[a] = 2;
        }
        for e in v["edges"].as_array().ok_or_else(|| bad("missing edges"))? {
            let (u, w) = (idx(&e["u"])?, idx(&e["v"])?);
            let m = e["mult"].as_i64().ok_or_else(|| bad("edge mult"))?;
            gram[u][w] = -m;
            gram[w][u] = -m;
        }
        Ok(Shape { nodes, gram, n_params })
    }
}

impl SpectralType {
    /// Shape of the dimension vector of the (normalized) type.
    pub fn shape(&self) -> Result<Shape> {
        let qd = self.normalize().quiver_of()?;
        let ll = LiftLattice::new(&qd, &qd.alpha)?;
        Shape::from_lift(&ll, &qd.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_spectral_type;
    use super::*;

    #[test]
    fn square_family() {
        let st = parse_spectral_type("(1)(1),(1)(1)").unwrap();
        let qd = st.quiver_of().unwrap();
        let ll = LiftLattice::new(&qd, &qd.alpha).unwrap();
        assert_eq!(ll.len(), 4);
        // (1,1)-(2,2) and (1,2)-(2,1) differ in both slots.
        assert_eq!(ll.gram[0][3], -2);
        assert_eq!(ll.gram[1][2], -2);
        assert_eq!(ll.gram[0][1], 0);
        let (base, ker) = ll.xi_fiber(&qd.alpha).unwrap();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        // Coefficients a, 1-a, 1-a, a.
        assert_eq!(k[0], k[3]);
        assert_eq!(k[1], -k[0]);
        assert_eq!(k[2], -k[0]);
        assert_eq!(ll.xi_project(&base).unwrap(), qd.alpha);
    }

    #[test]
    fn leg_pairing_and_chain() {
        let st = parse_spectral_type("(111)(1),211,211").unwrap();
        let qd = st.quiver_of().unwrap();
        let ll = LiftLattice::new(&qd, &qd.alpha).unwrap();
        let legs: Vec<usize> = (0..ll.len()).filter(|&a| matches!(ll.gens[a], Generator::Leg(_))).collect();
        for &a in &legs {
            assert_eq!(ll.gram[a][a], 2);
        }
        let t = ll.gens.iter().position(|g| *g == Generator::Tuple(vec![1, 1, 1])).unwrap();
        let l1 = ll.labels.iter().position(|s| s == "[0,1,1]").unwrap();
        let l2 = ll.labels.iter().position(|s| s == "[0,1,2]").unwrap();
        assert_eq!(ll.gram[t][l1], -1);
        assert_eq!(ll.gram[t][l2], 0);
        assert_eq!(ll.gram[l1][l2], -1);
    }

    #[test]
    fn double_edge_pair_shape() {
        let sh = parse_spectral_type("(((1)))(((1)))").unwrap().shape().unwrap();
        assert_eq!(sh.len(), 2);
        assert_eq!(sh.gram[0][1], -2);
        assert_eq!(sh.n_params, 0);
        assert!(sh.nodes.iter().all(|n| n.base == 1));
    }

    #[test]
    fn star_shape() {
        let sh = parse_spectral_type("11,11,11,11").unwrap().shape().unwrap();
        assert_eq!(sh.len(), 5);
        assert_eq!(sh.n_params, 0);
        let centre = sh.nodes.iter().position(|n| n.base == 2).unwrap();
        assert_eq!(sh.edges().iter().filter(|e| e.0 == centre || e.1 == centre).count(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let sh = parse_spectral_type("(1)(1),(1)(1)").unwrap().shape().unwrap();
        assert_eq!(Shape::from_json(&sh.to_json()).unwrap(), sh);
    }
}

//! Eigenvalue data of a tuple of normal forms, and the parameter vector.

use num_traits::Zero;
use serde_json::{json, Value};

use super::{parse_spectral_type, QuiverData, SpectralType, Tree};
use crate::error::{Error, Result};
use crate::lattice::ParamVector;
use crate::rat::{fmt_q, q, read_q, Q};

/// Data of one point: per block, the scalar polynomial part (coefficients of
/// `z^-2 .. z^-k`) and the residue eigenvalues in chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub poly: Vec<Vec<Q>>,
    pub xi: Vec<Vec<Q>>,
}

/// A spectral type decorated with eigenvalues: enough to write down the
/// normal forms at every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtlSymbolData {
    pub st: SpectralType,
    pub points: Vec<PointData>,
}

/// Polynomial parts realising the tree: along each edge from depth `t` the
/// child's position among its siblings fixes the coefficient of
/// `z^-(k-t)`.
fn default_poly(tree: &Tree) -> Vec<Vec<Q>> {
    fn walk(t: &Tree, prefix: &mut Vec<Q>, out: &mut Vec<Vec<Q>>) {
        match t {
            Tree::Leaf(_) => {
                // prefix holds coefficients of z^-k, z^-(k-1), ...; store ascending.
                let mut v = prefix.clone();
                v.reverse();
                out.push(v);
            }
            Tree::Node(cs) => {
                for (idx, c) in cs.iter().enumerate() {
                    prefix.push(q(idx as i64 + 1));
                    walk(c, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(tree, &mut Vec::new(), &mut out);
    out
}

impl HtlSymbolData {
    /// Checks eigenvalue chains and polynomial parts against the type.
    pub fn new(st: SpectralType, points: Vec<PointData>) -> Result<Self> {
        if points.len() != st.num_points() {
            return Err(Error::SizeMismatch { expected: st.num_points(), got: points.len() });
        }
        for (i, (p, pd)) in st.points().iter().zip(&points).enumerate() {
            let m = p.num_blocks();
            if pd.xi.len() != m || pd.poly.len() != m {
                return Err(Error::invalid(format!("point {i}: expected data for {m} blocks")));
            }
            for j in 0..m {
                let xi = &pd.xi[j];
                if xi.len() != p.chain(j).len() {
                    return Err(Error::invalid(format!(
                        "point {i} block {}: chain has {} eigenvalues, type expects {}",
                        j + 1,
                        xi.len(),
                        p.chain(j).len()
                    )));
                }
                for a in 0..xi.len() {
                    if xi[a + 1..].contains(&xi[a]) {
                        return Err(Error::invalid(format!("point {i} block {}: repeated eigenvalue", j + 1)));
                    }
                }
                if pd.poly[j].len() != p.pole_order() - 1 {
                    return Err(Error::invalid(format!(
                        "point {i} block {}: polynomial part needs {} coefficients",
                        j + 1,
                        p.pole_order() - 1
                    )));
                }
            }
            let k = p.pole_order();
            for j in 0..m {
                for jp in j + 1..m {
                    // Blocks must agree above degree d+2 and differ at it.
                    let top = (p.d(j, jp) + 2) as usize;
                    let (a, b) = (&pd.poly[j], &pd.poly[jp]);
                    let agree_above = (top + 1..=k).all(|deg| a[deg - 2] == b[deg - 2]);
                    if !agree_above || a[top - 2] == b[top - 2] {
                        return Err(Error::invalid(format!(
                            "point {i}: polynomial parts of blocks {} and {} do not match the tree",
                            j + 1,
                            jp + 1
                        )));
                    }
                }
            }
            if m == 1 && k > 1 && pd.poly[0][k - 2].is_zero() {
                return Err(Error::invalid(format!("point {i}: leading coefficient vanishes")));
            }
        }
        Ok(HtlSymbolData { st, points })
    }

    /// Uses polynomial parts generated from the tree.
    pub fn with_eigenvalues(st: SpectralType, xi: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        if xi.len() != st.num_points() {
            return Err(Error::SizeMismatch { expected: st.num_points(), got: xi.len() });
        }
        let points = st.points().iter().zip(xi).map(|(p, xi)| PointData { poly: default_poly(p.tree()), xi }).collect();
        Self::new(st, points)
    }

    pub fn rank(&self) -> i64 {
        self.st.rank()
    }

    /// Trace of the residue normal form at point `i`.
    pub fn residue_trace(&self, i: usize) -> Q {
        let p = self.st.point(i);
        let mut t = Q::zero();
        for (j, xi) in self.points[i].xi.iter().enumerate() {
            for (m, x) in p.chain(j).iter().zip(xi) {
                t += Q::from_integer((*m).into()) * x;
            }
        }
        t
    }

    /// The parameter vector on the quiver of the (normalized) type.
    pub fn lambda_of(&self, qd: &QuiverData) -> Result<ParamVector> {
        if qd.st.num_points() != self.st.num_points() {
            return Err(Error::SizeMismatch { expected: self.st.num_points(), got: qd.st.num_points() });
        }
        let mut l = vec![Q::zero(); qd.quiver.len()];
        let reg_sum: Q = qd.st.regular_points().iter().map(|&i| self.points[i].xi[0][0].clone()).sum();
        for &i in qd.irregular_points() {
            for j in 1..=qd.st.point(i).num_blocks() {
                let v = qd.block_vertex(i, j).unwrap();
                l[v] = -self.points[i].xi[j - 1][0].clone();
                if i == 0 {
                    l[v] -= &reg_sum;
                }
            }
        }
        for (i, pd) in self.points.iter().enumerate() {
            for (j, xi) in pd.xi.iter().enumerate() {
                for k in 1..xi.len() {
                    let v = qd.leg_vertex(i, j + 1, k).ok_or_else(|| Error::invalid("data does not match quiver"))?;
                    l[v] = &xi[k - 1] - &xi[k];
                }
            }
        }
        Ok(l)
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                json!({
                    "poly": p.poly.iter().map(|b| b.iter().map(fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "xi": p.xi.iter().map(|b| b.iter().map(fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "spectral_type": self.st.to_notation_as_is(), "points": pts })
    }

    /// Reads `{"spectral_type": .., "points": [{"xi": [[..]], "poly"?: [[..]]}]}`;
    /// missing polynomial parts are generated from the tree.
    pub fn from_json(v: &Value) -> Result<Self> {
        let st_text = v["spectral_type"].as_str().ok_or_else(|| Error::invalid("missing spectral_type"))?;
        let st = parse_spectral_type(st_text)?;
        let pts = v["points"].as_array().ok_or_else(|| Error::invalid("missing points"))?;
        let read = |x: &Value| -> Result<Vec<Vec<Q>>> {
            let blocks = x.as_array().ok_or_else(|| Error::invalid("expected a list of blocks"))?;
            blocks
                .iter()
                .map(|b| {
                    let items = b.as_array().ok_or_else(|| Error::invalid("expected a list of rationals"))?;
                    items.iter().map(read_q).collect()
                })
                .collect()
        };
        let mut xi = Vec::new();
        let mut polys = Vec::new();
        for p in pts {
            xi.push(read(&p["xi"])?);
            polys.push(if p.get("poly").is_some() { Some(read(&p["poly"])?) } else { None });
        }
        if polys.iter().all(|p| p.is_none()) {
            return Self::with_eigenvalues(st, xi);
        }
        if xi.len() != st.num_points() {
            return Err(Error::SizeMismatch { expected: st.num_points(), got: xi.len() });
        }
        let points = st
            .points()
            .iter()
            .zip(xi.into_iter().zip(polys))
            .map(|(pt, (xi, poly))| PointData { poly: poly.unwrap_or_else(|| default_poly(pt.tree())), xi })
            .collect();
        Self::new(st, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::dot_param;
    use crate::rat::qf;

    #[test]
    fn zero_eigenvalues_give_zero_lambda() {
        let st = parse_spectral_type("(1)(1),(1)(1)").unwrap();
        let xi = vec![vec![vec![q(0)], vec![q(0)]], vec![vec![q(0)], vec![q(0)]]];
        let h = HtlSymbolData::with_eigenvalues(st.clone(), xi).unwrap();
        let qd = st.quiver_of().unwrap();
        assert!(h.lambda_of(&qd).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn single_point_lambda() {
        let st = parse_spectral_type("1").unwrap();
        let h = HtlSymbolData::with_eigenvalues(st.clone(), vec![vec![vec![qf(1, 2)]]]).unwrap();
        let qd = st.quiver_of().unwrap();
        assert_eq!(h.lambda_of(&qd).unwrap(), vec![qf(-1, 2)]);
    }

    #[test]
    fn trace_identity() {
        let st = parse_spectral_type("((1))((11)),(1)(2),21").unwrap();
        let xi = vec![
            vec![vec![qf(1, 3)], vec![qf(2, 5), q(-1)]],
            vec![vec![q(4)], vec![qf(-1, 7)]],
            vec![vec![qf(3, 2), q(2)]],
        ];
        let h = HtlSymbolData::with_eigenvalues(st.clone(), xi).unwrap();
        let qd = st.quiver_of().unwrap();
        let l = h.lambda_of(&qd).unwrap();
        let total: Q = (0..3).map(|i| h.residue_trace(i)).sum();
        assert_eq!(dot_param(&l, &qd.alpha), -total);
    }

    #[test]
    fn json_roundtrip() {
        let st = parse_spectral_type("(1)(1),11").unwrap();
        let xi = vec![vec![vec![q(1)], vec![q(2)]], vec![vec![q(0), qf(1, 2)]]];
        let h = HtlSymbolData::with_eigenvalues(st, xi).unwrap();
        assert_eq!(HtlSymbolData::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn inconsistent_polynomial_rejected() {
        let st = parse_spectral_type("((1))((1))").unwrap();
        let pd = PointData { poly: vec![vec![q(0), q(1)], vec![q(1), q(1)]], xi: vec![vec![q(0)], vec![q(1)]] };
        assert!(HtlSymbolData::new(st, vec![pd]).is_err());
    }
}

//! Canonical keys for shapes.
//!
//! A key is invariant under relabelling the nodes, changing the basis of
//! the parameter lattice and shifting the base point by a lattice vector.
//! Nodes are ordered by colour refinement with individualisation; every
//! ordering left open by the refinement is tried and the smallest key wins.
//! For a fixed ordering the parameter lattice is put in Hermite normal form
//! and the base point reduced modulo it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlin::{ivec, lattice_hnf, reduce_mod_hnf};
use crate::spectral::{Shape, ShapeNode};

pub const MAX_SHAPE_NODES: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeKey {
    pub gram: Vec<Vec<i64>>,
    /// Parameter lattice in Hermite normal form, one row per generator.
    pub kernel: Vec<Vec<i64>>,
    pub base: Vec<i64>,
}

impl ShapeKey {
    pub fn to_json(&self) -> Value {
        json!({ "gram": self.gram, "kernel": self.kernel, "base": self.base })
    }
}

impl fmt::Display for ShapeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = |m: &[Vec<i64>]| {
            m.iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(";")
        };
        let base: Vec<String> = self.base.iter().map(|x| x.to_string()).collect();
        write!(f, "gram[{}] ker[{}] base[{}]", rows(&self.gram), rows(&self.kernel), base.join(" "))
    }
}

pub fn canonical_shape(s: &Shape) -> Result<ShapeKey> {
    canonical_order(s).map(|(_, k)| k)
}

/// The canonical node order and the key it produces.
pub fn canonical_order(s: &Shape) -> Result<(Vec<usize>, ShapeKey)> {
    let n = s.len();
    if n > MAX_SHAPE_NODES {
        return Err(Error::Limit(format!("shape has {n} nodes, cap is {MAX_SHAPE_NODES}")));
    }
    // Parameter-free node invariants: whether the coefficient is constant,
    // its value if so, and the pairing with the fibre.
    let sig: Vec<(bool, i64, i64)> = (0..n)
        .map(|a| {
            let constant = s.nodes[a].params.iter().all(|&x| x == 0);
            (constant, if constant { s.nodes[a].base } else { 0 }, s.node_pairing(a))
        })
        .collect();
    let colours = rank_signatures(&sig);
    let mut best: Option<(Vec<usize>, ShapeKey)> = None;
    search(s, colours, &mut best);
    Ok(best.expect("search visits at least one ordering"))
}

/// Replaces signatures by their ranks among the distinct values.
fn rank_signatures<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter().map(|x| sorted.binary_search(x).unwrap()).collect()
}

fn refine(s: &Shape, mut colours: Vec<usize>) -> Vec<usize> {
    let n = colours.len();
    loop {
        let classes = colours.iter().max().map_or(0, |m| m + 1);
        let sig: Vec<(usize, Vec<(usize, i64)>)> = (0..n)
            .map(|a| {
                let mut nb: Vec<(usize, i64)> =
                    (0..n).filter(|&b| b != a && s.gram[a][b] != 0).map(|b| (colours[b], s.gram[a][b])).collect();
                nb.sort_unstable();
                (colours[a], nb)
            })
            .collect();
        let next = rank_signatures(&sig);
        if next.iter().max().map_or(0, |m| m + 1) == classes {
            return next;
        }
        colours = next;
    }
}

fn search(s: &Shape, colours: Vec<usize>, best: &mut Option<(Vec<usize>, ShapeKey)>) {
    let colours = refine(s, colours);
    let mut by_colour: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, &c) in colours.iter().enumerate() {
        by_colour.entry(c).or_default().push(a);
    }
    let Some(cell) = by_colour.values().find(|v| v.len() > 1) else {
        let mut order: Vec<usize> = (0..colours.len()).collect();
        order.sort_by_key(|&a| colours[a]);
        let key = key_for_order(s, &order);
        if best.as_ref().is_none_or(|(_, k)| key < *k) {
            *best = Some((order, key));
        }
        return;
    };
    for &v in cell {
        let split: Vec<(usize, bool)> = colours.iter().enumerate().map(|(a, &c)| (c, a != v)).collect();
        search(s, rank_signatures(&split), best);
    }
}

fn key_for_order(s: &Shape, order: &[usize]) -> ShapeKey {
    let gram = order.iter().map(|&a| order.iter().map(|&b| s.gram[a][b]).collect()).collect();
    let rows: Vec<_> =
        (0..s.n_params).map(|r| ivec(&order.iter().map(|&a| s.nodes[a].params[r]).collect::<Vec<_>>())).collect();
    let h = lattice_hnf(&rows, order.len());
    let base = reduce_mod_hnf(&ivec(&order.iter().map(|&a| s.nodes[a].base).collect::<Vec<_>>()), &h);
    let small =
        |v: &[num_bigint::BigInt]| -> Vec<i64> { v.iter().map(|x| x.to_i64().expect("small entries")).collect() };
    ShapeKey { gram, kernel: h.iter().map(|r| small(r)).collect(), base: small(&base) }
}

/// The shape with its nodes listed in canonical order and its parameter
/// lattice replaced by the normal form.
pub fn canonical_form(s: &Shape) -> Result<Shape> {
    let (order, key) = canonical_order(s)?;
    let nodes = order
        .iter()
        .enumerate()
        .map(|(pos, &a)| ShapeNode {
            id: s.nodes[a].id.clone(),
            base: key.base[pos],
            params: key.kernel.iter().map(|r| r[pos]).collect(),
        })
        .collect();
    Ok(Shape { nodes, gram: key.gram.clone(), n_params: key.kernel.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::parse_spectral_type;

    fn shape(st: &str) -> Shape {
        parse_spectral_type(st).unwrap().shape().unwrap()
    }

    fn permuted(s: &Shape, p: &[usize]) -> Shape {
        Shape {
            nodes: p.iter().map(|&a| s.nodes[a].clone()).collect(),
            gram: p.iter().map(|&a| p.iter().map(|&b| s.gram[a][b]).collect()).collect(),
            n_params: s.n_params,
        }
    }

    #[test]
    fn relabelling_keeps_the_key() {
        let s = shape("(1)(1)(1),21,21");
        let n = s.len();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(canonical_shape(&s).unwrap(), canonical_shape(&permuted(&s, &rev)).unwrap());
    }

    #[test]
    fn parameter_shift_and_basis_change() {
        let s = shape("(1)(1),(1)(1)");
        assert_eq!(s.n_params, 1);
        let mut t = s.clone();
        for node in &mut t.nodes {
            node.base += node.params[0];
            node.params[0] = -node.params[0];
        }
        assert_eq!(canonical_shape(&s).unwrap(), canonical_shape(&t).unwrap());
    }

    #[test]
    fn different_shapes_differ() {
        assert_ne!(canonical_shape(&shape("11,11,11,11")).unwrap(), canonical_shape(&shape("111,111,111")).unwrap());
    }

    #[test]
    fn size_cap() {
        let n = MAX_SHAPE_NODES + 1;
        let big = Shape {
            nodes: (0..n).map(|a| ShapeNode { id: a.to_string(), base: 1, params: vec![] }).collect(),
            gram: (0..n).map(|a| (0..n).map(|b| if a == b { 2 } else { 0 }).collect()).collect(),
            n_params: 0,
        };
        assert!(matches!(canonical_shape(&big), Err(Error::Limit(_))));
    }
}

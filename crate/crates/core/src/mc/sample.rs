//! Seeded random irreducible tuples with known formal data.
//!
//! Points `i ≥ 1` are normal forms conjugated by random constant matrices.
//! Point 0 has a regular semisimple leading term and absorbs the residue-sum
//! constraint; its residues are then read off by formal splitting, which is
//! what keeps all eigenvalues rational.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{add_choice, canonical_datum, formal_blocks, is_irreducible, matches_symbol};
use super::{normal_form, HtlTuple, McParams};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rat::{qf, Q};
use crate::spectral::{HtlSymbolData, PointData, PointType, SpectralType, Tree};

#[derive(Clone, Debug)]
pub struct SampleBounds {
    pub max_rank: usize,
    pub max_points: usize,
    pub max_pole: usize,
    /// Cap on the rank of `mc_𝐢(A)`, keeping the exact pipeline cheap.
    pub max_out_rank: usize,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds { max_rank: 4, max_points: 3, max_pole: 3, max_out_rank: 6 }
    }
}

/// An irreducible tuple, its formal data, and a block choice with
/// `ξ_𝐢 ≠ 0` and nonzero convolved rank.
#[derive(Clone, Debug)]
pub struct McSample {
    pub tuple: HtlTuple,
    pub symbol: HtlSymbolData,
    pub choice: Vec<usize>,
}

const ATTEMPTS: usize = 500;

pub fn random_irreducible(seed: u64, b: &SampleBounds) -> Result<McSample> {
    if b.max_rank < 2 || b.max_points < 2 || b.max_pole < 2 {
        return Err(Error::invalid("sampling needs rank >= 2, two points and pole order >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(s) = attempt(&mut rng, b)? {
            return Ok(s);
        }
    }
    Err(Error::Limit(format!("no admissible tuple after {ATTEMPTS} draws")))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-20..=20), [1, 2, 3][rng.gen_range(0..3)])
}

fn distinct(rng: &mut ChaCha8Rng, len: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(len);
    while out.len() < len {
        let x = rand_q(rng);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Random composition of `s` into `parts` positive integers.
fn composition(rng: &mut ChaCha8Rng, s: usize, parts: usize) -> Vec<i64> {
    let mut cuts: Vec<usize> = (1..s).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(s)) {
        out.push((c - prev) as i64);
        prev = c;
    }
    out
}

pub(super) fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    loop {
        let g = RatMatrix::from_fn(n, n, |_, _| qf(rng.gen_range(-2..=2), 1));
        if g.is_invertible() {
            return g;
        }
    }
}

/// A point `i ≥ 1`: its type and eigenvalue data.
fn random_point(rng: &mut ChaCha8Rng, n: usize, max_pole: usize) -> Result<(PointType, PointData)> {
    if rng.gen_bool(0.5) {
        let e = rng.gen_range(2..=n);
        let chain = composition(rng, n, e);
        let xi = distinct(rng, chain.len());
        return Ok((PointType::regular(chain)?, PointData { poly: vec![vec![]], xi: vec![xi] }));
    }
    let k = rng.gen_range(2..=max_pole);
    let m = rng.gen_range(2..=n);
    let sizes = composition(rng, n, m);
    let mut chains: Vec<Vec<i64>> = Vec::with_capacity(m);
    for &s in &sizes {
        let e = rng.gen_range(1..=s as usize);
        chains.push(composition(rng, s as usize, e));
    }
    let xi: Vec<Vec<Q>> = chains.iter().map(|c| distinct(rng, c.len())).collect();
    // For k = 3 blocks are grouped under level-one nodes sharing the z^-3
    // coefficient.
    let (tree, poly) = if k == 2 {
        let vals = distinct(rng, m);
        (
            Tree::Node(chains.iter().map(|c| Tree::Leaf(c.clone())).collect()),
            vals.into_iter().map(|v| vec![v]).collect(),
        )
    } else {
        let g = rng.gen_range(1..=m);
        let mut label: Vec<usize> = (0..m).map(|j| if j < g { j } else { rng.gen_range(0..g) }).collect();
        label.sort_unstable();
        let tops = distinct(rng, g);
        let mut nodes = Vec::new();
        let mut poly = Vec::new();
        for (grp, top) in tops.iter().enumerate() {
            let members: Vec<usize> = (0..m).filter(|&j| label[j] == grp).collect();
            let lows = distinct(rng, members.len());
            let mut leaves = Vec::new();
            for (&j, low) in members.iter().zip(lows) {
                leaves.push(Tree::Leaf(chains[j].clone()));
                poly.push(vec![low, top.clone()]);
            }
            nodes.push(Tree::Node(leaves));
        }
        (Tree::Node(nodes), poly)
    };
    Ok((PointType::new(tree)?, PointData { poly, xi }))
}

/// Nests `t` inside `extra` single-child nodes, below the root.
fn wrap(t: Tree, extra: usize) -> Tree {
    (0..extra).fold(t, |acc, _| Tree::Node(vec![acc]))
}

fn attempt(rng: &mut ChaCha8Rng, b: &SampleBounds) -> Result<Option<McSample>> {
    let n = rng.gen_range(2..=b.max_rank);
    let npts = rng.gen_range(2..=b.max_points);
    let max_pole = b.max_pole.min(3);
    let mut pts = Vec::new();
    let mut data = Vec::new();
    let mut coeffs = Vec::new();
    for _ in 1..npts {
        let (pt, pd) = random_point(rng, n, max_pole)?;
        let g = random_invertible(rng, n);
        let gi = g.inverse().unwrap();
        coeffs.push(normal_form(&pt, &pd).iter().map(|m| g.mul(m).mul(&gi)).collect::<Vec<_>>());
        pts.push(pt);
        data.push(pd);
    }
    // Point 0: distinct leading eigenvalues, size-one blocks.
    let k0 = rng.gen_range(2..=max_pole);
    let g0 = random_invertible(rng, n);
    let g0i = g0.inverse().unwrap();
    let lead = distinct(rng, n);
    let diag = |d: &[Q]| RatMatrix::from_fn(n, n, |r, c| if r == c { d[r].clone() } else { Q::zero() });
    let mut c0 = vec![RatMatrix::zeros(n, n)];
    let mut cands: Vec<Vec<Q>> = vec![vec![]; n];
    if k0 == 3 {
        let mid: Vec<Q> = (0..n).map(|_| rand_q(rng)).collect();
        let mut m = diag(&mid);
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    m[(r, c)] = qf(rng.gen_range(-3..=3), 1);
                }
            }
        }
        c0.push(g0.mul(&m).mul(&g0i));
        for (cand, x) in cands.iter_mut().zip(mid) {
            cand.push(x);
        }
    }
    c0.push(g0.mul(&diag(&lead)).mul(&g0i));
    for (cand, x) in cands.iter_mut().zip(&lead) {
        cand.push(x.clone());
    }
    let others = coeffs.iter().fold(RatMatrix::zeros(n, n), |acc, c| acc.add(&c[0]));
    c0[0] = others.neg();
    let blocks = match formal_blocks(&c0, &cands) {
        Ok(b) => b,
        Err(Error::Separation(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut xi0 = Vec::new();
    let mut poly0 = Vec::new();
    for cand in &cands {
        let blk = blocks.iter().find(|bl| &bl.poly == cand).expect("one block per eigenvalue");
        xi0.push(vec![blk.residue[(0, 0)].clone()]);
        poly0.push(cand.clone());
    }
    let leaf = || wrap(Tree::Leaf(vec![1]), k0 - 2);
    pts.insert(0, PointType::new(Tree::Node((0..n).map(|_| leaf()).collect()))?);
    data.insert(0, PointData { poly: poly0, xi: xi0 });
    coeffs.insert(0, c0);
    let st = SpectralType::new(pts)?;
    let symbol = match HtlSymbolData::new(st, data) {
        Ok(h) => h,
        Err(_) => return Ok(None),
    };
    let tuple = HtlTuple::new(n, coeffs)?;
    debug_assert!(matches_symbol(&tuple, &symbol)?);
    if !is_irreducible(&tuple) {
        return Ok(None);
    }
    let qd = symbol.st.quiver_of()?;
    let mut choices = qd.all_tuples();
    choices.shuffle(rng);
    for choice in choices {
        let params = McParams::from_symbol(&symbol, &choice)?;
        if params.xi().is_zero() {
            continue;
        }
        let w = canonical_datum(&add_choice(&tuple, &params, false)?).dim_w();
        if w > n && w - n <= b.max_out_rank {
            return Ok(Some(McSample { tuple, symbol, choice }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_consistent() {
        let b = SampleBounds::default();
        let s1 = random_irreducible(7, &b).unwrap();
        let s2 = random_irreducible(7, &b).unwrap();
        assert_eq!(s1.tuple, s2.tuple);
        assert!(s1.tuple.residue_sum().is_zero());
        assert!(matches_symbol(&s1.tuple, &s1.symbol).unwrap());
        assert!(is_irreducible(&s1.tuple));
    }
}

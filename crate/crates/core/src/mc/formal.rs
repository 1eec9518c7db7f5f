//! Formal block splitting of a principal part `Σ A_ν w^{-ν}`.
//!
//! The truncated gauge group `GL_n(C[w]/w^k)` acts by conjugation on
//! principal parts. When the leading coefficient is semisimple we first
//! diagonalise it, then remove the off-block parts of the lower
//! coefficients one order at a time with `g = I + X w^m`. Each block then
//! carries a scalar leading term, which is peeled off before recursing.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rat::Q;

/// One block of the split form: its scalar polynomial part (coefficients of
/// `w^-2 .. w^-k`) and its residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalBlock {
    pub poly: Vec<Q>,
    pub residue: RatMatrix,
}

/// Splits `coeffs = [A_1, .., A_k]` into blocks whose polynomial parts are
/// drawn from `candidates` (each of length `k - 1`). Leading coefficients
/// must be diagonalisable with eigenvalues among the candidate values;
/// anything else is a separation failure.
pub fn formal_blocks(coeffs: &[RatMatrix], candidates: &[Vec<Q>]) -> Result<Vec<FormalBlock>> {
    let k = coeffs.len();
    if k == 0 {
        return Err(Error::invalid("empty principal part"));
    }
    if let Some(c) = candidates.iter().find(|c| c.len() != k - 1) {
        return Err(Error::invalid(format!("candidate polynomial has {} coefficients, need {}", c.len(), k - 1)));
    }
    let mut out = Vec::new();
    if coeffs[0].rows() > 0 {
        split(coeffs.to_vec(), k, &mut Vec::new(), candidates, &mut out)?;
    }
    Ok(out)
}

fn split(
    coeffs: Vec<RatMatrix>,
    k: usize,
    prefix: &mut Vec<Q>,
    candidates: &[Vec<Q>],
    out: &mut Vec<FormalBlock>,
) -> Result<()> {
    let m = coeffs.len();
    if m == 1 {
        let mut poly = prefix.clone();
        poly.reverse();
        out.push(FormalBlock { poly, residue: coeffs.into_iter().next().unwrap() });
        return Ok(());
    }
    let n = coeffs[0].rows();
    // Candidate values of the w^-m coefficient below the current prefix.
    let mut values: Vec<Q> = Vec::new();
    for c in candidates {
        let fits = prefix.iter().enumerate().all(|(t, x)| &c[k - t - 2] == x);
        if fits && !values.contains(&c[m - 2]) {
            values.push(c[m - 2].clone());
        }
    }
    let lead = &coeffs[m - 1];
    let mut groups: Vec<(Q, RatMatrix)> = Vec::new();
    let mut total = 0;
    for v in values {
        let ker = lead.shift(&v).kernel();
        if ker.cols() > 0 {
            total += ker.cols();
            groups.push((v, ker));
        }
    }
    if total != n {
        return Err(Error::Separation(format!(
            "leading coefficient at order {m} is not semisimple with the expected eigenvalues"
        )));
    }
    let s = RatMatrix::hstack(&groups.iter().map(|g| g.1.clone()).collect::<Vec<_>>());
    let sinv = s.inverse().expect("eigenspaces are independent");
    let mut a: Vec<RatMatrix> = coeffs.iter().map(|c| sinv.mul(c).mul(&s)).collect();

    if groups.len() == 1 {
        prefix.push(groups[0].0.clone());
        a.pop();
        split(a, k, prefix, candidates, out)?;
        prefix.pop();
        return Ok(());
    }

    let mut group_of = Vec::with_capacity(n);
    for (g, (_, ker)) in groups.iter().enumerate() {
        group_of.extend(std::iter::repeat_n(g, ker.cols()));
    }
    for step in 1..m {
        let target = &a[m - step - 1];
        let x = RatMatrix::from_fn(n, n, |r, c| {
            if group_of[r] == group_of[c] {
                Q::zero()
            } else {
                &target[(r, c)] / (&groups[group_of[r]].0 - &groups[group_of[c]].0)
            }
        });
        a = conjugate_by_unipotent(&a, &x, step);
    }
    let mut start = 0;
    for (v, ker) in &groups {
        let idx: Vec<usize> = (start..start + ker.cols()).collect();
        start += ker.cols();
        let sub: Vec<RatMatrix> = a[..m - 1].iter().map(|c| c.submatrix(&idx, &idx)).collect();
        prefix.push(v.clone());
        split(sub, k, prefix, candidates, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Principal part of `g A g^{-1}` for `g = I + X w^step`.
fn conjugate_by_unipotent(a: &[RatMatrix], x: &RatMatrix, step: usize) -> Vec<RatMatrix> {
    let m = a.len();
    let n = x.rows();
    // ginv_r = (-X)^r at order r*step.
    let mut ginv = vec![RatMatrix::identity(n)];
    let negx = x.neg();
    while ginv.len() * step < m {
        let next = ginv.last().unwrap().mul(&negx);
        ginv.push(next);
    }
    let coef = |nu: usize| -> Option<&RatMatrix> { a.get(nu.wrapping_sub(1)) };
    (1..=m)
        .map(|nu| {
            let mut acc = RatMatrix::zeros(n, n);
            for (r, gi) in ginv.iter().enumerate() {
                // g_0 = I term.
                if let Some(c) = coef(nu + r * step) {
                    acc = acc.add(&c.mul(gi));
                }
                if let Some(c) = coef(nu + step + r * step) {
                    acc = acc.add(&x.mul(c).mul(gi));
                }
            }
            acc
        })
        .collect()
}

/// Ranks of `Π_{l ≤ t} (R - x_l)` for `t = 1 .. xs.len()`.
pub fn rank_chain(r: &RatMatrix, xs: &[Q]) -> Vec<usize> {
    let mut prod = RatMatrix::identity(r.rows());
    xs.iter()
        .map(|x| {
            prod = prod.mul(&r.shift(x));
            prod.rank()
        })
        .collect()
}

/// True when `r` is diagonalisable with exactly the eigenvalues `xs` at
/// multiplicities `mult`.
pub fn has_chain(r: &RatMatrix, xs: &[Q], mult: &[i64]) -> bool {
    let n = r.rows() as i64;
    if mult.iter().sum::<i64>() != n {
        return false;
    }
    let mut rest = n;
    rank_chain(r, xs).into_iter().zip(mult).all(|(rk, m)| {
        rest -= m;
        rk as i64 == rest
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    #[test]
    fn regular_point_is_its_own_residue() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        let b = formal_blocks(std::slice::from_ref(&a), &[vec![]]).unwrap();
        assert_eq!(b, vec![FormalBlock { poly: vec![], residue: a }]);
    }

    #[test]
    fn order_two_diagonal_lead() {
        // A_2 = diag(1, 2); the residues are the diagonal entries of A_1.
        let a1 = m(&[vec![5, 7], vec![-3, 9]]);
        let a2 = m(&[vec![1, 0], vec![0, 2]]);
        let b = formal_blocks(&[a1, a2], &[vec![q(1)], vec![q(2)]]).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].residue, m(&[vec![5]]));
        assert_eq!(b[1].residue, m(&[vec![9]]));
    }

    #[test]
    fn order_three_corrects_residue() {
        // Gauge a block-diagonal form by I + Xw + Yw^2; splitting must
        // recover its residues.
        let b1 = m(&[vec![3, 0], vec![0, -2]]);
        let b2 = m(&[vec![4, 0], vec![0, 5]]);
        let b3 = m(&[vec![0, 0], vec![0, 1]]);
        let x = m(&[vec![0, 2], vec![-1, 0]]);
        let y = m(&[vec![1, 1], vec![3, 0]]);
        let a = conjugate_by_unipotent(&[b1, b2, b3], &x, 1);
        let a = conjugate_by_unipotent(&a, &y, 2);
        let blocks = formal_blocks(&a, &[vec![q(4), q(0)], vec![q(5), q(1)]]).unwrap();
        assert_eq!(blocks[0].poly, vec![q(4), q(0)]);
        assert_eq!(blocks[0].residue, m(&[vec![3]]));
        assert_eq!(blocks[1].residue, m(&[vec![-2]]));
    }

    #[test]
    fn nilpotent_lead_is_rejected() {
        let a1 = m(&[vec![0, 0], vec![0, 0]]);
        let a2 = m(&[vec![0, 1], vec![0, 0]]);
        assert!(matches!(formal_blocks(&[a1, a2], &[vec![q(0)]]), Err(Error::Separation(_))));
    }

    #[test]
    fn chains() {
        let r = m(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 5]]);
        assert!(has_chain(&r, &[q(2), q(5)], &[2, 1]));
        assert!(!has_chain(&r, &[q(5), q(2)], &[2, 1]));
        assert_eq!(rank_chain(&r, &[q(5), q(2)]), vec![2, 0]);
    }
}

//! Integer lattices: Hermite normal form and integral solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IVec = Vec<BigInt>;

pub fn ivec(xs: &[i64]) -> IVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Row Hermite normal form of `rows` together with the unimodular
/// transform: returns `(h, u)` with `u * rows = h`. Nonzero rows of `h` come
/// first, have positive pivots, and entries above each pivot lie in
/// `[0, pivot)`. Zero rows of `h` correspond to rows of `u` spanning the
/// integer left kernel.
pub fn row_hnf_with_transform(rows: &[IVec], ncols: usize) -> (Vec<IVec>, Vec<IVec>) {
    let m = rows.len();
    let mut h: Vec<IVec> = rows.to_vec();
    let mut u: Vec<IVec> =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut prow = 0;
    for c in 0..ncols {
        if prow == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in prow..m {
                if !h[r][c].is_zero() && best.is_none_or(|b| h[r][c].abs() < h[b][c].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(prow, b);
            u.swap(prow, b);
            let mut done = true;
            for r in prow + 1..m {
                if h[r][c].is_zero() {
                    continue;
                }
                let f = h[r][c].div_floor(&h[prow][c]);
                sub_row(&mut h, r, prow, &f);
                sub_row(&mut u, r, prow, &f);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if prow < m && !h[prow][c].is_zero() {
            if h[prow][c].is_negative() {
                negate_row(&mut h[prow]);
                negate_row(&mut u[prow]);
            }
            for r in 0..prow {
                let f = h[r][c].div_floor(&h[prow][c]);
                if !f.is_zero() {
                    sub_row(&mut h, r, prow, &f);
                    sub_row(&mut u, r, prow, &f);
                }
            }
            prow += 1;
        }
    }
    (h, u)
}

fn sub_row(m: &mut [IVec], target: usize, src: usize, f: &BigInt) {
    let s = m[src].clone();
    for (x, y) in m[target].iter_mut().zip(&s) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

fn negate_row(r: &mut IVec) {
    for x in r.iter_mut() {
        *x = -&*x;
    }
}

/// Hermite normal form basis of the lattice spanned by `rows` (zero rows
/// dropped). Two generating sets span the same lattice iff their forms agree.
pub fn lattice_hnf(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    let (h, _) = row_hnf_with_transform(rows, ncols);
    h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Reduces `v` modulo the lattice given in Hermite normal form, so that each
/// pivot coordinate lands in `[0, pivot)`. The result is a canonical coset
/// representative.
pub fn reduce_mod_hnf(v: &[BigInt], hnf: &[IVec]) -> IVec {
    let mut out = v.to_vec();
    for row in hnf {
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let f = out[pc].div_floor(&row[pc]);
        if !f.is_zero() {
            for (x, y) in out.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
    }
    out
}

/// Integral solutions of `a * x = b` where `a` is given by its rows.
/// Returns a particular solution and a basis of the integer kernel, or
/// `None` if no integral solution exists.
pub fn solve_integer(a: &[IVec], ncols: usize, b: &[BigInt]) -> Option<(IVec, Vec<IVec>)> {
    // Work with the transpose: u * a^T = h, so a * u^T = h^T.
    let at: Vec<IVec> = (0..ncols).map(|c| a.iter().map(|r| r[c].clone()).collect()).collect();
    let m = a.len();
    let (h, u) = row_hnf_with_transform(&at, m);
    let rank = h.iter().take_while(|r| r.iter().any(|x| !x.is_zero())).count();
    // Solve h^T y = b: column r of h^T is row r of h, pivots increasing.
    let mut y = vec![BigInt::zero(); ncols];
    let mut resid: IVec = b.to_vec();
    for r in 0..rank {
        let pc = h[r].iter().position(|x| !x.is_zero()).unwrap();
        let (quo, rem) = resid[pc].div_rem(&h[r][pc]);
        if !rem.is_zero() {
            return None;
        }
        for (x, hv) in resid.iter_mut().zip(&h[r]) {
            *x -= &quo * hv;
        }
        y[r] = quo;
    }
    if resid.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x0 = vec![BigInt::zero(); ncols];
    for (r, yr) in y.iter().enumerate().take(rank) {
        for (xc, uv) in x0.iter_mut().zip(&u[r]) {
            *xc += yr * uv;
        }
    }
    let kernel = u[rank..].to_vec();
    Some((x0, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(a: &[IVec], x: &[BigInt]) -> IVec {
        a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    #[test]
    fn hnf_is_canonical_for_same_lattice() {
        let a = vec![ivec(&[2, 4]), ivec(&[0, 6])];
        let b = vec![ivec(&[2, 10]), ivec(&[2, -2]), ivec(&[0, 6])];
        assert_eq!(lattice_hnf(&a, 2), lattice_hnf(&b, 2));
    }

    #[test]
    fn transform_relation_holds() {
        let a = vec![ivec(&[3, 5, 7]), ivec(&[1, 1, 1]), ivec(&[4, 6, 8])];
        let (h, u) = row_hnf_with_transform(&a, 3);
        for r in 0..3 {
            let lhs: IVec = (0..3).map(|c| (0..3).map(|k| &u[r][k] * &a[k][c]).sum()).collect();
            assert_eq!(lhs, h[r]);
        }
    }

    #[test]
    fn solve_with_kernel() {
        let a = vec![ivec(&[1, 1, 0, 0]), ivec(&[0, 0, 1, 1]), ivec(&[1, 0, 1, 0])];
        let b = ivec(&[1, 1, 1]);
        let (x0, ker) = solve_integer(&a, 4, &b).unwrap();
        assert_eq!(mat_vec(&a, &x0), b);
        assert_eq!(ker.len(), 1);
        assert_eq!(mat_vec(&a, &ker[0]), ivec(&[0, 0, 0]));
    }

    #[test]
    fn no_integral_solution() {
        let a = vec![ivec(&[2, 4])];
        assert!(solve_integer(&a, 2, &ivec(&[3])).is_none());
    }

    #[test]
    fn reduce_picks_coset_representative() {
        let h = lattice_hnf(&[ivec(&[1, -1])], 2);
        let r1 = reduce_mod_hnf(&ivec(&[3, 0]), &h);
        let r2 = reduce_mod_hnf(&ivec(&[-5, 8]), &h);
        assert_eq!(r1, r2);
    }
}

//! Tuples of local principal parts and the middle convolution acting on
//! them.

mod formal;
mod moment;
mod sample;
mod verify;

pub use formal::{formal_blocks, has_chain, rank_chain, FormalBlock};
pub use moment::{moment_map, QuiverRep};
pub use sample::{random_irreducible, McSample, SampleBounds};
pub use verify::{verify_mc, McReport};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::DimVector;
use crate::linalg::RatMatrix;
use crate::rat::{fmt_q, q, Q};
use crate::spectral::{HtlSymbolData, PointData, PointType, QuiverData};

/// Principal parts `A_i(z^-1) = Σ_j A^(i)_j z^-j` at points `0..=p`, all of
/// rank `n`. `coeffs[i][j - 1]` is `A^(i)_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtlTuple {
    rank: usize,
    coeffs: Vec<Vec<RatMatrix>>,
}

impl HtlTuple {
    pub fn new(rank: usize, coeffs: Vec<Vec<RatMatrix>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a tuple needs at least one point"));
        }
        for (i, pt) in coeffs.iter().enumerate() {
            if pt.is_empty() {
                return Err(Error::invalid(format!("point {i} has no coefficients")));
            }
            for m in pt {
                if m.rows() != rank || m.cols() != rank {
                    return Err(Error::invalid(format!(
                        "point {i}: coefficient is {}x{}, expected {rank}x{rank}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(HtlTuple { rank, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_points(&self) -> usize {
        self.coeffs.len()
    }

    pub fn pole_order(&self, i: usize) -> usize {
        self.coeffs[i].len()
    }

    pub fn pole_orders(&self) -> Vec<usize> {
        self.coeffs.iter().map(|c| c.len()).collect()
    }

    /// `A^(i)_j`, `j` from 1.
    pub fn coeff(&self, i: usize, j: usize) -> &RatMatrix {
        &self.coeffs[i][j - 1]
    }

    pub fn point(&self, i: usize) -> &[RatMatrix] {
        &self.coeffs[i]
    }

    pub fn all_coeffs(&self) -> impl Iterator<Item = &RatMatrix> {
        self.coeffs.iter().flatten()
    }

    pub fn residue_sum(&self) -> RatMatrix {
        self.coeffs.iter().fold(RatMatrix::zeros(self.rank, self.rank), |acc, c| acc.add(&c[0]))
    }

    /// `g A g^{-1}` pointwise.
    pub fn conjugate(&self, g: &RatMatrix) -> Result<HtlTuple> {
        let gi = g.inverse().ok_or_else(|| Error::invalid("conjugating matrix is singular"))?;
        let coeffs = self.coeffs.iter().map(|pt| pt.iter().map(|m| g.mul(m).mul(&gi)).collect()).collect();
        Ok(HtlTuple { rank: self.rank, coeffs })
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self
            .coeffs
            .iter()
            .map(|pt| {
                let cs: Vec<Value> = pt.iter().map(matrix_json).collect();
                json!({ "pole_order": pt.len(), "coeffs": cs })
            })
            .collect();
        json!({ "rank": self.rank, "points": pts })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rank = v["rank"].as_u64().ok_or_else(|| Error::invalid("missing rank"))? as usize;
        let pts = v["points"].as_array().ok_or_else(|| Error::invalid("missing points"))?;
        let mut coeffs = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let cs = p["coeffs"].as_array().ok_or_else(|| Error::invalid(format!("point {i}: missing coeffs")))?;
            if let Some(k) = p.get("pole_order") {
                if k.as_u64() != Some(cs.len() as u64) {
                    return Err(Error::invalid(format!("point {i}: pole_order disagrees with coeffs")));
                }
            }
            coeffs.push(cs.iter().map(|m| matrix_from_json(m, rank)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(rank, coeffs)
    }
}

fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(fmt_q(x))).collect())).collect(),
    )
}

fn matrix_from_json(v: &Value, n: usize) -> Result<RatMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::invalid("matrix must be a list of rows"))?;
    if rows.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: rows.len() });
    }
    let mut out = Vec::with_capacity(n);
    for r in rows {
        let items = r.as_array().ok_or_else(|| Error::invalid("matrix row must be a list"))?;
        if items.len() != n {
            return Err(Error::SizeMismatch { expected: n, got: items.len() });
        }
        out.push(items.iter().map(crate::rat::read_q).collect::<Result<Vec<_>>>()?);
    }
    RatMatrix::from_rows(out)
}

/// Block-diagonal normal form of one point: scalar polynomial parts per
/// block and diagonal residues with the chain eigenvalues.
pub fn normal_form(pt: &PointType, pd: &PointData) -> Vec<RatMatrix> {
    let k = pt.pole_order();
    let mut out = Vec::with_capacity(k);
    let mut res = Vec::new();
    for (j, xi) in pd.xi.iter().enumerate() {
        for (m, x) in pt.chain(j).iter().zip(xi) {
            res.extend(std::iter::repeat_n(x.clone(), *m as usize));
        }
    }
    out.push(diag(&res));
    for deg in 2..=k {
        let mut d = Vec::new();
        for j in 0..pt.num_blocks() {
            d.extend(std::iter::repeat_n(pd.poly[j][deg - 2].clone(), pt.block_size(j) as usize));
        }
        out.push(diag(&d));
    }
    out
}

fn diag(d: &[Q]) -> RatMatrix {
    RatMatrix::from_fn(d.len(), d.len(), |r, c| if r == c { d[r].clone() } else { Q::zero() })
}

/// Writes down the normal forms of `h`, optionally conjugating point `i` by
/// `conjugators[i]`. If the residues then fail to sum to zero, the residue
/// at point 0 is replaced by minus the others, provided point 0 keeps its
/// formal type.
pub fn build_htl_tuple(h: &HtlSymbolData, conjugators: Option<&[RatMatrix]>) -> Result<HtlTuple> {
    let n = h.rank() as usize;
    if let Some(gs) = conjugators {
        if gs.len() != h.st.num_points() {
            return Err(Error::SizeMismatch { expected: h.st.num_points(), got: gs.len() });
        }
    }
    let mut coeffs = Vec::new();
    for (i, (pt, pd)) in h.st.points().iter().zip(&h.points).enumerate() {
        let mut cs = normal_form(pt, pd);
        if let Some(gs) = conjugators {
            let g = &gs[i];
            let gi = g.inverse().ok_or_else(|| Error::invalid(format!("conjugator {i} is singular")))?;
            cs = cs.iter().map(|m| g.mul(m).mul(&gi)).collect();
        }
        coeffs.push(cs);
    }
    let mut a = HtlTuple::new(n, coeffs)?;
    let s = a.residue_sum();
    if !s.is_zero() {
        a.coeffs[0][0] = a.coeffs[0][0].sub(&s);
        if !point_matches(&a, h, 0)? {
            return Err(Error::invalid("residue-sum constraint cannot be met with these eigenvalues"));
        }
    }
    Ok(a)
}

/// `Add^(t)_q`: subtracts the scalar polynomial `Σ_j poly[j-1] z^-j` at
/// point `t`.
pub fn addition(t: usize, poly: &[Q], a: &HtlTuple) -> Result<HtlTuple> {
    if t >= a.num_points() {
        return Err(Error::invalid(format!("no point {t}")));
    }
    if poly.len() > a.pole_order(t) {
        return Err(Error::invalid("polynomial degree exceeds the pole order"));
    }
    let mut out = a.clone();
    for (j, c) in poly.iter().enumerate() {
        out.coeffs[t][j] = out.coeffs[t][j].shift(c);
    }
    Ok(out)
}

/// The scalars entering `Add_𝐢`: per point the first chain eigenvalue and
/// the polynomial part (`z^-2 ..`) of the chosen block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McParams {
    pub xi1: Vec<Q>,
    pub poly: Vec<Vec<Q>>,
}

impl McParams {
    /// `choice[i]` is the 1-based block `j_i` at point `i`.
    pub fn from_symbol(h: &HtlSymbolData, choice: &[usize]) -> Result<Self> {
        if choice.len() != h.st.num_points() {
            return Err(Error::SizeMismatch { expected: h.st.num_points(), got: choice.len() });
        }
        let mut xi1 = Vec::new();
        let mut poly = Vec::new();
        for (i, &j) in choice.iter().enumerate() {
            let m = h.st.point(i).num_blocks();
            if j < 1 || j > m {
                return Err(Error::invalid(format!("block choice {j} out of range 1..={m} at point {i}")));
            }
            xi1.push(h.points[i].xi[j - 1][0].clone());
            poly.push(h.points[i].poly[j - 1].clone());
        }
        Ok(McParams { xi1, poly })
    }

    /// `ξ_𝐢`.
    pub fn xi(&self) -> Q {
        self.xi1.iter().sum()
    }

    /// Parameters of the same choice on `mc_𝐢(A)`: the head of the chain at
    /// point 0 moves by `-2ξ_𝐢`, the others stay.
    pub fn after_mc(&self) -> Self {
        let mut out = self.clone();
        out.xi1[0] -= self.xi() * q(2);
        out
    }

    fn full_poly(&self, i: usize) -> Vec<Q> {
        let mut p = vec![self.xi1[i].clone()];
        p.extend(self.poly[i].iter().cloned());
        p
    }
}

/// `Add_𝐢` (or its inverse).
pub fn add_choice(a: &HtlTuple, params: &McParams, inverse: bool) -> Result<HtlTuple> {
    if params.xi1.len() != a.num_points() {
        return Err(Error::SizeMismatch { expected: a.num_points(), got: params.xi1.len() });
    }
    let mut out = a.clone();
    for i in 0..a.num_points() {
        let mut p = params.full_poly(i);
        if inverse {
            p.iter_mut().for_each(|x| *x = -x.clone());
        }
        out = addition(i, &p, &out)?;
    }
    Ok(out)
}

/// `(V, W, T, Q, P)` with `W = ⊕ Ŵ_i / Ker Â_i`. Quotient coordinates are
/// given by a basis of the row space of `Â_i`.
#[derive(Clone, Debug)]
pub struct CanonicalDatum {
    pub n: usize,
    pub w_dims: Vec<usize>,
    pub t: RatMatrix,
    pub q: RatMatrix,
    pub p: RatMatrix,
    pub a_hat: Vec<RatMatrix>,
    pub kernels: Vec<RatMatrix>,
}

impl CanonicalDatum {
    pub fn dim_w(&self) -> usize {
        self.w_dims.iter().sum()
    }
}

pub fn canonical_datum(a: &HtlTuple) -> CanonicalDatum {
    let n = a.rank();
    let mut w_dims = Vec::new();
    let (mut ts, mut qs, mut ps, mut a_hat, mut kernels) = (vec![], vec![], vec![], vec![], vec![]);
    for pt in &a.coeffs {
        let k = pt.len();
        let kn = k * n;
        // Block (r, c), c >= r, of Â is A_{k-(c-r)}.
        let mut ah = RatMatrix::zeros(kn, kn);
        for r in 0..k {
            for c in r..k {
                ah.set_block(r * n, c * n, &pt[k - 1 - (c - r)]);
            }
        }
        let q_hat = ah.block(0, 0, n, kn);
        let mut p_hat = RatMatrix::zeros(kn, n);
        p_hat.set_block((k - 1) * n, 0, &RatMatrix::identity(n));
        let mut n_hat = RatMatrix::zeros(kn, kn);
        for r in 0..k.saturating_sub(1) {
            n_hat.set_block(r * n, (r + 1) * n, &RatMatrix::identity(n));
        }
        let rows = ah.independent_rows();
        let pi = ah.submatrix(&rows, &(0..kn).collect::<Vec<_>>());
        let sigma = right_inverse(&pi);
        qs.push(q_hat.mul(&sigma));
        ps.push(pi.mul(&p_hat));
        ts.push(pi.mul(&n_hat).mul(&sigma));
        w_dims.push(rows.len());
        kernels.push(ah.kernel());
        a_hat.push(ah);
    }
    CanonicalDatum {
        n,
        w_dims,
        t: RatMatrix::block_diag(&ts),
        q: hstack_rows(n, &qs),
        p: vstack_cols(n, &ps),
        a_hat,
        kernels,
    }
}

fn hstack_rows(rows: usize, parts: &[RatMatrix]) -> RatMatrix {
    let mut out = RatMatrix::zeros(rows, parts.iter().map(|m| m.cols()).sum());
    let mut c0 = 0;
    for p in parts {
        out.set_block(0, c0, p);
        c0 += p.cols();
    }
    out
}

fn vstack_cols(cols: usize, parts: &[RatMatrix]) -> RatMatrix {
    let mut out = RatMatrix::zeros(parts.iter().map(|m| m.rows()).sum(), cols);
    let mut r0 = 0;
    for p in parts {
        out.set_block(r0, 0, p);
        r0 += p.rows();
    }
    out
}

/// Right inverse of a full-row-rank matrix, supported on pivot columns.
fn right_inverse(m: &RatMatrix) -> RatMatrix {
    let cols = m.independent_columns();
    let inv = m.submatrix(&(0..m.rows()).collect::<Vec<_>>(), &cols).inverse().expect("full row rank");
    let mut out = RatMatrix::zeros(m.cols(), m.rows());
    for (a, &c) in cols.iter().enumerate() {
        for r in 0..m.rows() {
            out[(c, r)] = inv[(a, r)].clone();
        }
    }
    out
}

/// `mc_𝐢(A)` for the block choice `choice` (1-based, one per point).
pub fn middle_convolution(a: &HtlTuple, choice: &[usize], h: &HtlSymbolData) -> Result<HtlTuple> {
    mc_with(a, &McParams::from_symbol(h, choice)?, None)
}

/// The middle convolution from explicit parameters. `V' = Coker P` gets
/// coordinates from a basis of the annihilator of `Im P`; `coker_basis`
/// (invertible, size `dim W - n`) changes that basis. `P'` takes values in
/// `Ker Q`, the complement of `Im P` fixed by the retraction
/// `-ξ_𝐢^{-1} Q`.
pub fn mc_with(a: &HtlTuple, params: &McParams, coker_basis: Option<&RatMatrix>) -> Result<HtlTuple> {
    let xi = params.xi();
    if xi.is_zero() {
        return Err(Error::ZeroXi);
    }
    if !a.residue_sum().is_zero() {
        return Err(Error::invalid("residues do not sum to zero"));
    }
    let n = a.rank();
    let shifted = add_choice(a, params, false)?;
    let cd = canonical_datum(&shifted);
    let w = cd.dim_w();
    debug_assert_eq!(cd.q.mul(&cd.p), RatMatrix::scalar(n, &-xi.clone()));
    let np = w - n;
    let ks = a.pole_orders();
    let mut coeffs: Vec<Vec<RatMatrix>> = ks.iter().map(|&k| vec![RatMatrix::zeros(np, np); k]).collect();
    if np > 0 {
        let mut qp = cd.p.left_kernel();
        if let Some(b) = coker_basis {
            if b.rows() != np || !b.is_invertible() {
                return Err(Error::invalid(format!("cokernel basis change must be an invertible {np}x{np} matrix")));
            }
            qp = b.mul(&qp);
        }
        let kq = cd.q.kernel();
        let m = qp.mul(&kq).inverse().expect("Ker Q complements Im P");
        let pp = kq.mul(&m).scale(&xi);
        let mut off = 0;
        for (i, &wi) in cd.w_dims.iter().enumerate() {
            let qi = qp.block(0, off, np, wi);
            let pi = pp.block(off, 0, wi, np);
            let ni = cd.t.block(off, off, wi, wi);
            let mut cur = pi;
            for j in 0..ks[i] {
                coeffs[i][j] = qi.mul(&cur);
                cur = ni.mul(&cur);
            }
            off += wi;
        }
    }
    let mut out = HtlTuple::new(np, coeffs)?;
    out = addition(0, &[xi * q(2)], &out)?;
    add_choice(&out, params, true)
}

/// Burnside test: the coefficients generate the full matrix algebra.
pub fn is_irreducible(a: &HtlTuple) -> bool {
    let n = a.rank();
    if n <= 1 {
        return true;
    }
    let gens: Vec<&RatMatrix> = a.all_coeffs().collect();
    let mut span = Echelon::new(n * n);
    let mut queue = vec![RatMatrix::identity(n)];
    span.insert(queue[0].entries().to_vec());
    while let Some(m) = queue.pop() {
        for g in &gens {
            let prod = g.mul(&m);
            if span.insert(prod.entries().to_vec()) {
                if span.dim() == n * n {
                    return true;
                }
                queue.push(prod);
            }
        }
    }
    span.dim() == n * n
}

/// Incremental row-echelon basis of a subspace of `Q^len`.
struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    fn new(_len: usize) -> Self {
        Echelon { rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<Q>) -> bool {
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &v[p];
        v.iter_mut().for_each(|x| *x *= &inv);
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// An invertible `g` with `g A^(i)_j = B^(i)_j g` for all `i, j`, if one
/// exists.
pub fn equivalent(a: &HtlTuple, b: &HtlTuple) -> Option<RatMatrix> {
    let n = a.rank();
    if b.rank() != n || a.pole_orders() != b.pole_orders() {
        return None;
    }
    if n == 0 {
        return Some(RatMatrix::identity(0));
    }
    // Unknown g_{rk} at index r*n + k.
    let nn = n * n;
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for (ma, mb) in a.all_coeffs().zip(b.all_coeffs()) {
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![Q::zero(); nn];
                for k in 0..n {
                    row[r * n + k] += &ma[(k, c)];
                    row[k * n + c] -= &mb[(r, k)];
                }
                eqs.push(row);
            }
        }
    }
    let sys = RatMatrix::from_rows(eqs).expect("rectangular system");
    let ker = sys.kernel();
    let to_matrix = |v: &[Q]| RatMatrix::from_fn(n, n, |r, c| v[r * n + c].clone());
    let basis: Vec<RatMatrix> = (0..ker.cols()).map(|j| to_matrix(&ker.col(j))).collect();
    if let Some(g) = basis.iter().find(|g| g.is_invertible()) {
        return Some(g.clone());
    }
    // Reducible case: try a few fixed combinations.
    for s in 1..=8i64 {
        let mut g = RatMatrix::zeros(n, n);
        for (t, m) in basis.iter().enumerate() {
            g = g.add(&m.scale(&q(s.pow(t as u32))));
        }
        if g.is_invertible() {
            return Some(g);
        }
    }
    None
}

/// Residues of each block of `h` read off from `a`, matched by polynomial
/// part. A block absent from `a` (size zero) gives `None`.
pub fn residue_spectral_data(a: &HtlTuple, h: &HtlSymbolData) -> Result<Vec<Vec<Option<RatMatrix>>>> {
    if a.num_points() != h.st.num_points() {
        return Err(Error::SizeMismatch { expected: h.st.num_points(), got: a.num_points() });
    }
    (0..a.num_points()).map(|i| point_residues(a, h, i)).collect()
}

fn point_residues(a: &HtlTuple, h: &HtlSymbolData, i: usize) -> Result<Vec<Option<RatMatrix>>> {
    let k = h.st.point(i).pole_order();
    if a.pole_order(i) != k {
        return Err(Error::invalid(format!("point {i}: pole order {} does not match the type ({k})", a.pole_order(i))));
    }
    let polys = &h.points[i].poly;
    let blocks = formal_blocks(a.point(i), polys)?;
    let mut out: Vec<Option<RatMatrix>> = vec![None; polys.len()];
    for b in blocks {
        let j = polys.iter().position(|p| *p == b.poly).expect("candidates only");
        out[j] = Some(b.residue);
    }
    Ok(out)
}

fn point_matches(a: &HtlTuple, h: &HtlSymbolData, i: usize) -> Result<bool> {
    let res = match point_residues(a, h, i) {
        Ok(r) => r,
        Err(Error::Separation(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let pt = h.st.point(i);
    Ok(res.iter().enumerate().all(|(j, r)| match r {
        Some(r) => has_chain(r, &h.points[i].xi[j], pt.chain(j)),
        None => false,
    }))
}

/// True when every point of `a` lies in the formal class of `h`: blocks of
/// the right sizes with diagonalisable residues carrying the chain
/// eigenvalues at the chain multiplicities.
pub fn matches_symbol(a: &HtlTuple, h: &HtlSymbolData) -> Result<bool> {
    if a.num_points() != h.st.num_points() || a.rank() as i64 != h.rank() {
        return Ok(false);
    }
    for i in 0..a.num_points() {
        if !point_matches(a, h, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalue chains of `mc_𝐢(A)` as dictated by the shift rules: blocks
/// `j ≠ j_i` move by `(d+2)ξ_𝐢` (`d ξ_𝐢` at point 0); the chosen block keeps
/// its head (moved by `-2ξ_𝐢` at point 0) and shifts its tail by `ξ_𝐢`
/// (`-ξ_𝐢` at point 0).
pub fn predicted_eigenvalues(h: &HtlSymbolData, choice: &[usize]) -> Result<Vec<Vec<Vec<Q>>>> {
    let params = McParams::from_symbol(h, choice)?;
    let xi = params.xi();
    let mut out = Vec::new();
    for (i, (pt, pd)) in h.st.points().iter().zip(&h.points).enumerate() {
        let ji = choice[i] - 1;
        let mut blocks = Vec::new();
        for (j, chain) in pd.xi.iter().enumerate() {
            let new: Vec<Q> = if j != ji {
                let d = q(pt.d(j, ji) + if i == 0 { 0 } else { 2 });
                chain.iter().map(|x| x + &d * &xi).collect()
            } else {
                chain
                    .iter()
                    .enumerate()
                    .map(|(k, x)| match (i == 0, k == 0) {
                        (false, true) => x.clone(),
                        (false, false) => x + &xi,
                        (true, true) => x - &xi * q(2),
                        (true, false) => x - &xi,
                    })
                    .collect()
            };
            blocks.push(new);
        }
        out.push(blocks);
    }
    Ok(out)
}

/// Dimension vector realised by `a` on the quiver of `h`, reading chain
/// ranks against the eigenvalues `xi` (same layout as `h`'s chains).
pub fn observed_alpha(qd: &QuiverData, a: &HtlTuple, h: &HtlSymbolData, xi: &[Vec<Vec<Q>>]) -> Result<DimVector> {
    let res = residue_spectral_data(a, h)?;
    let mut alpha = vec![0i64; qd.quiver.len()];
    for (i, blocks) in res.iter().enumerate() {
        for (j, r) in blocks.iter().enumerate() {
            let size = r.as_ref().map_or(0, |r| r.rows());
            if let Some(v) = qd.block_vertex(i, j + 1) {
                alpha[v] = size as i64;
            }
            let chain = &xi[i][j];
            let ranks = match r {
                Some(r) => rank_chain(r, &chain[..chain.len() - 1]),
                None => vec![0; chain.len() - 1],
            };
            for (k, rk) in ranks.into_iter().enumerate() {
                let v = qd.leg_vertex(i, j + 1, k + 1).ok_or_else(|| Error::invalid("data does not match quiver"))?;
                alpha[v] = rk as i64;
            }
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;
    use crate::spectral::parse_spectral_type;

    fn hyper(a: Q, b: Q, c: Q) -> HtlSymbolData {
        // Point 0 carries {a, b}; points 1, 2 carry {0, 1-c} and {0, e}.
        let e = -(&a + &b) - (q(1) - &c);
        let st = parse_spectral_type("11,11,11").unwrap();
        HtlSymbolData::with_eigenvalues(st, vec![vec![vec![a, b]], vec![vec![q(0), q(1) - c]], vec![vec![q(0), e]]])
            .unwrap()
    }

    /// Conjugators realising the hypergeometric triple: the rank-one
    /// residue `u v^T` at point 2 with `det(A_1 + A_2) = ab`.
    fn hyper_conjugators(a: &Q, b: &Q, c: &Q) -> Vec<RatMatrix> {
        let e = -(a + b) - (q(1) - c);
        let r = a * b / (q(1) - c);
        let w = &e - &r;
        let g2 = RatMatrix::from_rows(vec![vec![-w, q(1)], vec![r, q(1)]]).unwrap();
        vec![RatMatrix::identity(2), RatMatrix::identity(2), g2]
    }

    #[test]
    fn rank_one_tuple() {
        let st = parse_spectral_type("1,1,1").unwrap();
        let h =
            HtlSymbolData::with_eigenvalues(st, vec![vec![vec![q(1)]], vec![vec![qf(1, 2)]], vec![vec![qf(-3, 2)]]])
                .unwrap();
        let a = build_htl_tuple(&h, None).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.residue_sum().is_zero());
    }

    #[test]
    fn hypergeometric_triple() {
        let (a, b, c) = (qf(1, 3), qf(2, 5), qf(1, 7));
        let h = hyper(a.clone(), b.clone(), c.clone());
        let t = build_htl_tuple(&h, Some(&hyper_conjugators(&a, &b, &c))).unwrap();
        assert!(t.residue_sum().is_zero());
        assert!(matches_symbol(&t, &h).unwrap());
        assert!(is_irreducible(&t));
        // Rigid: mc at the heads (a, 0, 0) drops to rank one.
        let qd = h.st.quiver_of().unwrap();
        let out = middle_convolution(&t, &[1, 1, 1], &h).unwrap();
        let predicted = crate::weyl::mc_reflect_dim(&qd, &[1, 1, 1], &qd.alpha).unwrap();
        assert_eq!(out.rank() as i64, predicted[0]);
        assert_eq!(out.rank(), 1);
        assert!(out.residue_sum().is_zero());
    }

    #[test]
    fn infeasible_residue_sum() {
        let h = hyper(qf(1, 3), qf(2, 5), qf(1, 7));
        assert!(build_htl_tuple(&h, None).is_err());
    }

    #[test]
    fn zero_eigenvalues_give_zero_residues() {
        let st = parse_spectral_type("2,2,2").unwrap();
        let h = HtlSymbolData::with_eigenvalues(st, vec![vec![vec![q(0)]]; 3]).unwrap();
        let a = build_htl_tuple(&h, None).unwrap();
        assert!(a.all_coeffs().all(|m| m.is_zero()));
    }

    #[test]
    fn addition_round_trip() {
        let h = hyper(qf(1, 3), qf(2, 5), qf(1, 7));
        let t = build_htl_tuple(&h, Some(&hyper_conjugators(&qf(1, 3), &qf(2, 5), &qf(1, 7)))).unwrap();
        assert_eq!(addition(1, &[], &t).unwrap(), t);
        let p = vec![qf(3, 4)];
        let back = addition(1, &[-p[0].clone()], &addition(1, &p, &t).unwrap()).unwrap();
        assert_eq!(back, t);
        // The residue sum moves by the trace of the added scalar.
        let moved = addition(1, &p, &t).unwrap().residue_sum();
        assert_eq!(moved, RatMatrix::scalar(2, &-p[0].clone()));
    }

    #[test]
    fn datum_degenerate_cases() {
        let m = RatMatrix::from_i64(&[vec![1, 0], vec![0, 0]]);
        let t = HtlTuple::new(2, vec![vec![m.clone()], vec![m.neg()]]).unwrap();
        let cd = canonical_datum(&t);
        assert_eq!(cd.w_dims, vec![1, 1]);
        let inv = RatMatrix::from_i64(&[vec![1, 2], vec![0, 3]]);
        let t = HtlTuple::new(2, vec![vec![inv.neg(), inv.clone()], vec![inv]]).unwrap();
        assert_eq!(canonical_datum(&t).w_dims, vec![4, 2]);
    }

    #[test]
    fn block_diagonal_is_reducible() {
        let a = RatMatrix::from_i64(&[vec![1, 0], vec![0, 2]]);
        let t = HtlTuple::new(2, vec![vec![a.clone()], vec![a.neg()]]).unwrap();
        assert!(!is_irreducible(&t));
        let one = HtlTuple::new(1, vec![vec![RatMatrix::zeros(1, 1)]]).unwrap();
        assert!(is_irreducible(&one));
    }

    #[test]
    fn equivalence_recovers_conjugator() {
        let (a, b, c) = (qf(1, 3), qf(2, 5), qf(1, 7));
        let t = build_htl_tuple(&hyper(a.clone(), b.clone(), c.clone()), Some(&hyper_conjugators(&a, &b, &c))).unwrap();
        let g0 = RatMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let u = t.conjugate(&g0).unwrap();
        let g = equivalent(&t, &u).unwrap();
        // g is a scalar multiple of g0.
        let ratio = &g[(0, 0)] / &g0[(0, 0)];
        assert_eq!(g, g0.scale(&ratio));
        let other = build_htl_tuple(
            &hyper(qf(1, 5), qf(2, 5), qf(1, 7)),
            Some(&hyper_conjugators(&qf(1, 5), &qf(2, 5), &qf(1, 7))),
        )
        .unwrap();
        assert!(equivalent(&t, &other).is_none());
    }

    #[test]
    fn json_round_trip() {
        let h = hyper(qf(1, 3), qf(2, 5), qf(1, 7));
        let t = build_htl_tuple(&h, Some(&hyper_conjugators(&qf(1, 3), &qf(2, 5), &qf(1, 7)))).unwrap();
        assert_eq!(HtlTuple::from_json(&t.to_json()).unwrap(), t);
    }
}

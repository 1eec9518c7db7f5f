//! Cross-checks of one middle convolution against the combinatorial
//! predictions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{
    add_choice, canonical_datum, equivalent, has_chain, is_irreducible, mc_with, observed_alpha, predicted_eigenvalues,
    rank_chain, residue_spectral_data, HtlTuple, McParams,
};
use crate::error::Result;
use crate::linalg::RatMatrix;
use crate::rat::Q;
use crate::spectral::{HtlSymbolData, PointData};
use crate::weyl::{mc_reflect_dim, mc_reflect_param};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_w: usize,
    pub irreducible_in: bool,
    pub irreducible_out: bool,
    /// `QP = -ξ_𝐢 Id` on the canonical datum of `Add_𝐢(A)`.
    pub qp_identity: bool,
    pub residue_sum_zero: bool,
    /// `mc_𝐢(mc_𝐢(A)) ~ A`.
    pub involution: bool,
    /// The output for a second choice of cokernel coordinates is
    /// equivalent to the first.
    pub section_independent: bool,
    /// Observed dimension vector equals `s_𝐢(α)`.
    pub alpha_matches: bool,
    /// `n'_{j_i} = n_{j_i} + dim W - 2n` at every point.
    pub block_sizes_match: bool,
    /// Unchosen blocks carry the shifted eigenvalues at unchanged
    /// multiplicities; chosen blocks satisfy the rank equations.
    pub eigenvalues_match: bool,
    /// Parameters read from the new eigenvalues equal `r_𝐢(λ)`.
    pub lambda_matches: bool,
}

impl McReport {
    pub fn all_ok(&self) -> bool {
        self.irreducible_out == self.irreducible_in
            && self.qp_identity
            && self.residue_sum_zero
            && (!self.irreducible_in || self.involution)
            && self.section_independent
            && self.alpha_matches
            && self.block_sizes_match
            && self.eigenvalues_match
            && self.lambda_matches
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank_in": self.rank_in,
            "rank_out": self.rank_out,
            "dim_w": self.dim_w,
            "irreducible_in": self.irreducible_in,
            "irreducible_out": self.irreducible_out,
            "qp_identity": self.qp_identity,
            "residue_sum_zero": self.residue_sum_zero,
            "involution": self.involution,
            "section_independent": self.section_independent,
            "alpha_matches": self.alpha_matches,
            "block_sizes_match": self.block_sizes_match,
            "eigenvalues_match": self.eigenvalues_match,
            "lambda_matches": self.lambda_matches,
            "ok": self.all_ok(),
        })
    }
}

/// Runs `mc_𝐢` on `a` and checks it against the predictions from `h`.
/// `seed` drives the second choice of cokernel coordinates.
pub fn verify_mc(a: &HtlTuple, h: &HtlSymbolData, choice: &[usize], seed: u64) -> Result<McReport> {
    let params = McParams::from_symbol(h, choice)?;
    let xi = params.xi();
    let n = a.rank();
    let cd = canonical_datum(&add_choice(a, &params, false)?);
    let dim_w = cd.dim_w();
    let qp_identity = cd.q.mul(&cd.p) == RatMatrix::scalar(n, &-xi.clone());

    let out = mc_with(a, &params, None)?;
    let back = mc_with(&out, &params.after_mc(), None)?;
    let np = out.rank();
    let section_independent = np == 0 || {
        let g = super::sample::random_invertible(&mut ChaCha8Rng::seed_from_u64(seed), np);
        let other = mc_with(a, &params, Some(&g))?;
        equivalent(&out, &other).is_some()
    };

    let qd = h.st.quiver_of()?;
    let new_xi = predicted_eigenvalues(h, choice)?;
    let predicted_alpha = mc_reflect_dim(&qd, choice, &qd.alpha)?;
    let alpha_matches = observed_alpha(&qd, &out, h, &new_xi).map(|o| o == predicted_alpha).unwrap_or(false);

    let (block_sizes_match, eigenvalues_match) = match residue_spectral_data(&out, h) {
        Ok(res) => check_blocks(h, choice, &res, &new_xi, n, dim_w),
        Err(_) => (false, false),
    };

    let lambda = h.lambda_of(&qd)?;
    let moved = HtlSymbolData {
        st: h.st.clone(),
        points: h.points.iter().zip(&new_xi).map(|(p, x)| PointData { poly: p.poly.clone(), xi: x.clone() }).collect(),
    };
    let lambda_matches = moved.lambda_of(&qd)? == mc_reflect_param(&qd, choice, &lambda)?;

    let irreducible_in = is_irreducible(a);
    Ok(McReport {
        rank_in: n,
        rank_out: np,
        dim_w,
        irreducible_in,
        irreducible_out: is_irreducible(&out),
        qp_identity,
        residue_sum_zero: out.residue_sum().is_zero(),
        involution: equivalent(&back, a).is_some(),
        section_independent,
        alpha_matches,
        block_sizes_match,
        eigenvalues_match,
        lambda_matches,
    })
}

fn check_blocks(
    h: &HtlSymbolData,
    choice: &[usize],
    res: &[Vec<Option<RatMatrix>>],
    new_xi: &[Vec<Vec<Q>>],
    n: usize,
    dim_w: usize,
) -> (bool, bool) {
    let mut sizes_ok = true;
    let mut eig_ok = true;
    for (i, blocks) in res.iter().enumerate() {
        let pt = h.st.point(i);
        let ji = choice[i] - 1;
        for (j, r) in blocks.iter().enumerate() {
            let size = r.as_ref().map_or(0, |r| r.rows()) as i64;
            let old = pt.block_size(j);
            if j == ji {
                sizes_ok &= size == old + dim_w as i64 - 2 * n as i64;
                // rank of the predicted products equals the original ranks
                // n_j - m_1 - .. - m_l for l >= 2.
                if let Some(r) = r {
                    let ranks = rank_chain(r, &new_xi[i][j]);
                    let mut rest = old;
                    for (l, m) in pt.chain(j).iter().enumerate() {
                        rest -= m;
                        if l >= 1 {
                            eig_ok &= ranks[l] as i64 == rest;
                        }
                    }
                }
            } else {
                sizes_ok &= size == old;
                eig_ok &= r.as_ref().is_some_and(|r| has_chain(r, &new_xi[i][j], pt.chain(j)));
            }
        }
    }
    (sizes_ok, eig_ok)
}

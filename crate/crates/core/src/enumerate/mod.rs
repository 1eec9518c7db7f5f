//! Enumeration of fundamental spectral types at a fixed index of rigidity.
//!
//! Both the index and the fundamental-domain inequalities split into
//! per-point terms. For a point with blocks `n_j`, chains `m_{j,·}` and
//! depths `d(j, j')` put
//!
//! ```text
//! κ = n² − Σ m² + 2 Σ_{j<j'} (d(j,j') + 1) n_j n_j'
//! δ = 2n − max_j (n_j + m_{j,1} − Σ_{j'≠j} d(j,j') n_j')
//! ```
//!
//! Then `idx = 2n² − Σ κ_i`, and `α` pairs non-positively with every block
//! tuple iff `Σ δ_i ≥ 2n` (leg roots ask for non-increasing chains). Such
//! chains force `κ ≥ nδ` at every point, so a type of index `idx` has
//! per-point slack `κ − nδ` summing to at most `−idx`. The search only
//! builds points within that slack and assembles them by matching `Σ κ`.
//! Every survivor is re-checked on its quiver.

mod canon;
mod coxeter;
mod fixture;

pub use canon::{canonical_form, canonical_order, canonical_shape, ShapeKey, MAX_SHAPE_NODES};
pub use coxeter::{coxeter_type, CoxeterComponent, CoxeterType};
pub use fixture::{compare_with_fixture, FixtureDiff, FixtureEntry, FixtureTable};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::DimVector;
use crate::spectral::{LiftLattice, PointType, QuiverData, Shape, SpectralType, Tree};
use crate::weyl::{gcd_of, is_in_l_fundamental, pair_generator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBounds {
    /// Number of points, `p + 1`.
    pub max_points: usize,
    pub max_pole: usize,
    pub max_rank: usize,
    pub max_blocks: usize,
    pub max_chain: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_points: 4, max_pole: 5, max_rank: 14, max_blocks: 5, max_chain: 8 }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> Result<()> {
        let all = [self.max_points, self.max_pole, self.max_rank, self.max_blocks, self.max_chain];
        if all.contains(&0) {
            return Err(Error::invalid("search bounds must be positive"));
        }
        Ok(())
    }

    /// Bounds used by the saturation check.
    pub fn with_margin(&self) -> Self {
        SearchBounds { max_points: self.max_points + 1, max_rank: self.max_rank + 4, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain struct")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let b: SearchBounds =
            serde_json::from_value(v.clone()).map_err(|e| Error::invalid(format!("search bounds: {e}")))?;
        b.validate()?;
        Ok(b)
    }
}

/// Per-point terms of the index and of the fundamental-domain test, for a
/// point of a type of rank `n`. Regular single-block points are included;
/// chains must be non-increasing for the slack bound to hold.
pub fn point_terms(pt: &PointType) -> (i64, i64) {
    let n = pt.rank();
    let m = pt.num_blocks();
    let sizes: Vec<i64> = (0..m).map(|j| pt.block_size(j)).collect();
    let sq: i64 = pt.chains().iter().flatten().map(|x| x * x).sum();
    let mut kappa = n * n - sq;
    let mut best = i64::MIN;
    for j in 0..m {
        let mut reach = sizes[j] + pt.chain(j)[0];
        for jp in 0..m {
            if jp != j {
                reach -= pt.d(j, jp) * sizes[jp];
                if jp > j {
                    kappa += 2 * (pt.d(j, jp) + 1) * sizes[j] * sizes[jp];
                }
            }
        }
        best = best.max(reach);
    }
    (kappa, 2 * n - best)
}

#[derive(Clone, Debug)]
struct PointCand {
    pt: PointType,
    kappa: i64,
    delta: i64,
    slack: i64,
}

/// Depth matrix `d(j, j')` of one point.
type Metric = Vec<Vec<i64>>;

/// All set partitions of `items` (blocks in order of first element).
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        let mut fresh = vec![vec![first]];
        fresh.extend(p.iter().cloned());
        out.push(fresh);
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(0, first);
            out.push(q);
        }
    }
    out
}

/// Ultrametrics on the labelled leaves `set` (of `m`) with all values
/// below `bound`, as symmetric matrices.
fn ultrametrics(set: &[usize], bound: i64, m: usize) -> Vec<Metric> {
    if set.len() == 1 {
        return vec![vec![vec![0; m]; m]];
    }
    let mut out = Vec::new();
    for top in 0..bound {
        for parts in set_partitions(set).into_iter().filter(|p| p.len() >= 2) {
            let mut base = vec![vec![0; m]; m];
            for (x, px) in parts.iter().enumerate() {
                for py in &parts[x + 1..] {
                    for &a in px {
                        for &b in py {
                            base[a][b] = top;
                            base[b][a] = top;
                        }
                    }
                }
            }
            let mut acc = vec![base];
            for part in &parts {
                let subs = ultrametrics(part, top, m);
                let mut next = Vec::with_capacity(acc.len() * subs.len());
                for a in &acc {
                    for s in &subs {
                        let mut merged = a.clone();
                        for &x in part {
                            for &y in part {
                                merged[x][y] += s[x][y];
                            }
                        }
                        next.push(merged);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
    }
    out
}

/// Tree realising the ultrametric `d` at pole order `max d + 2`.
fn tree_of(leaves: &[usize], level: i64, d: &[Vec<i64>], chains: &[Vec<i64>]) -> Tree {
    if level < 0 {
        return Tree::Leaf(chains[leaves[0]].clone());
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &a in leaves {
        match classes.iter_mut().find(|c| d[c[0]][a] < level) {
            Some(c) => c.push(a),
            None => classes.push(vec![a]),
        }
    }
    Tree::Node(classes.iter().map(|c| tree_of(c, level - 1, d, chains)).collect())
}

/// Non-increasing chains with head `h` and total `s`, at most `len` parts,
/// with waste `Σ m_k (h − m_k)` at most `budget`. Returned with their waste.
fn flat_chains(h: i64, s: i64, len: usize, budget: i64) -> Vec<(Vec<i64>, i64)> {
    fn go(cur: &mut Vec<i64>, h: i64, rest: i64, len: usize, waste: i64, budget: i64, out: &mut Vec<(Vec<i64>, i64)>) {
        if rest == 0 {
            out.push((cur.clone(), waste));
            return;
        }
        if cur.len() == len {
            return;
        }
        let top = *cur.last().unwrap();
        for x in (1..=top.min(rest)).rev() {
            let w = waste + x * (h - x);
            if w > budget {
                continue;
            }
            cur.push(x);
            go(cur, h, rest - x, len, w, budget, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if h >= 1 && h <= s && len >= 1 {
        go(&mut vec![h], h, s - h, len, 0, budget, &mut out);
    }
    out
}

/// Partitions of `n` into exactly `m` parts, non-increasing.
fn partitions(n: i64, m: usize) -> Vec<Vec<i64>> {
    fn go(rest: i64, parts: usize, top: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = (rest + parts as i64 - 1) / parts as i64;
        for x in (lo.max(1)..=top.min(rest - parts as i64 + 1)).rev() {
            cur.push(x);
            go(rest - x, parts - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, n, &mut Vec::new(), &mut out);
    out
}

/// Nontrivial point types of rank `n` with slack at most `budget`.
fn point_candidates(n: i64, b: &SearchBounds, budget: i64, metrics: &[Vec<Metric>]) -> Vec<PointCand> {
    let mut out: BTreeMap<String, PointCand> = BTreeMap::new();
    let mut push = |tree: Tree| {
        let pt = PointType::new(tree).expect("generated trees are uniform");
        let (kappa, delta) = point_terms(&pt);
        let key = SpectralType::new(vec![pt.clone()]).expect("one point").canonical().to_notation();
        out.entry(key).or_insert(PointCand { pt, kappa, delta, slack: kappa - n * delta });
    };
    // Regular points.
    for h in 1..n {
        for (c, _) in flat_chains(h, n, b.max_chain, budget) {
            push(Tree::Leaf(c));
        }
    }
    for m in 2..=b.max_blocks.min(n as usize) {
        for sizes in partitions(n, m) {
            for d in &metrics[m] {
                let reach: Vec<i64> = (0..m).map(|j| (0..m).map(|k| d[j][k] * sizes[k]).sum()).collect();
                let umin = (0..m).map(|j| sizes[j] + 1 - reach[j]).max().unwrap();
                let umax = (0..m).map(|j| 2 * sizes[j] - reach[j]).max().unwrap();
                let floor: i64 = (0..m).map(|j| sizes[j] * (umin - (2 * sizes[j] - reach[j])).max(0)).sum();
                if floor > budget {
                    continue;
                }
                let level = d.iter().flatten().copied().max().unwrap();
                for u in umin..=umax {
                    let mut chains = vec![Vec::new(); m];
                    assign(0, u, budget, &sizes, &reach, b.max_chain, &mut chains, &mut |cs| {
                        push(tree_of(&(0..m).collect::<Vec<_>>(), level, d, cs));
                    });
                }
            }
        }
    }
    out.into_values().collect()
}

/// Chooses heads and chains block by block so that `u` is the largest
/// reach and the slack stays within `budget`.
#[allow(clippy::too_many_arguments)]
fn assign(
    j: usize,
    u: i64,
    budget: i64,
    sizes: &[i64],
    reach: &[i64],
    max_chain: usize,
    chains: &mut Vec<Vec<i64>>,
    emit: &mut dyn FnMut(&[Vec<i64>]),
) {
    if j == sizes.len() {
        let attained = (0..sizes.len()).any(|k| sizes[k] + chains[k][0] - reach[k] == u);
        if attained {
            emit(chains);
        }
        return;
    }
    for h in 1..=sizes[j] {
        let uj = sizes[j] + h - reach[j];
        if uj > u {
            break;
        }
        let cost = sizes[j] * (u - uj);
        if cost > budget {
            continue;
        }
        for (c, w) in flat_chains(h, sizes[j], max_chain, budget - cost) {
            chains[j] = c;
            assign(j + 1, u, budget - cost - w, sizes, reach, max_chain, chains, emit);
        }
    }
}

/// Effectiveness filter: if `α = r β` with `r ≥ 2` then `p(α) > r p(β)`.
/// Exact for the genericity reading; see the module tests for the
/// indivisible case.
pub fn is_effective(qd: &QuiverData, alpha: &[i64]) -> Result<bool> {
    let g = gcd_of(alpha);
    let pa = qd.quiver.p_val(alpha)?;
    for r in 2..=g {
        if g % r == 0 {
            let beta: DimVector = alpha.iter().map(|x| x / r).collect();
            if pa <= r * qd.quiver.p_val(&beta)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Full check on the quiver: reduced, index `idx`, basic and effective.
pub fn is_fundamental(st: &SpectralType, idx: i64) -> Result<bool> {
    let st = st.normalize();
    if !st.is_reduced() {
        return Ok(false);
    }
    let qd = st.quiver_of()?;
    Ok(qd.quiver.sym_form(&qd.alpha, &qd.alpha)? == idx
        && is_in_l_fundamental(&qd, &qd.alpha)
        && is_effective(&qd, &qd.alpha)?)
}

fn check_idx(idx: i64) -> Result<()> {
    if idx % 2 != 0 {
        return Err(Error::invalid(format!("index of rigidity is even, got {idx}")));
    }
    if idx > 0 {
        return Err(Error::invalid("only non-positive indices have finitely many fundamental types"));
    }
    Ok(())
}

/// Fundamental types of rank `n` assembled from point candidates.
fn types_of_rank(n: i64, idx: i64, b: &SearchBounds, metrics: &[Vec<Metric>]) -> Result<Vec<SpectralType>> {
    let budget = -idx;
    let cands = point_candidates(n, b, budget, metrics);
    let target = 2 * n * n - idx;
    let mut by_kappa: HashMap<i64, Vec<usize>> = HashMap::new();
    for (k, c) in cands.iter().enumerate() {
        by_kappa.entry(c.kappa).or_default().push(k);
    }
    let mut found: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut combos: Vec<Vec<usize>> = Vec::new();
    collect(&cands, &by_kappa, target, 2 * n, budget, b.max_points, 0, 0, 0, 0, &mut stack, &mut combos);
    for combo in combos {
        let mut pts: Vec<PointType> = combo.iter().map(|&k| cands[k].pt.clone()).collect();
        // Point 0 is a point with the most blocks, so that the quiver is
        // built in its usual form.
        pts.sort_by_key(|p| std::cmp::Reverse((p.num_blocks(), p.pole_order())));
        let st = SpectralType::new(pts)?.canonical();
        if is_fundamental(&st, idx)? && found.insert(st.to_notation()) {
            out.push(st);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect(
    cands: &[PointCand],
    by_kappa: &HashMap<i64, Vec<usize>>,
    target: i64,
    need_delta: i64,
    budget: i64,
    max_points: usize,
    start: usize,
    kappa: i64,
    delta: i64,
    slack: i64,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    // Close the combination with one more point of the missing κ.
    if let Some(last) = by_kappa.get(&(target - kappa)) {
        for &k in last.iter().filter(|&&k| k >= start) {
            let c = &cands[k];
            if slack + c.slack <= budget && delta + c.delta >= need_delta {
                let mut combo = stack.clone();
                combo.push(k);
                out.push(combo);
            }
        }
    }
    if stack.len() + 2 > max_points {
        return;
    }
    for k in start..cands.len() {
        let c = &cands[k];
        if kappa + c.kappa >= target || slack + c.slack > budget {
            continue;
        }
        stack.push(k);
        collect(
            cands,
            by_kappa,
            target,
            need_delta,
            budget,
            max_points,
            k,
            kappa + c.kappa,
            delta + c.delta,
            slack + c.slack,
            stack,
            out,
        );
        stack.pop();
    }
}

/// Fundamental spectral types of index `idx` within `b`, with their
/// shapes, sorted by canonical notation.
pub fn enumerate_fundamental(idx: i64, b: &SearchBounds) -> Result<Vec<(SpectralType, Shape)>> {
    check_idx(idx)?;
    b.validate()?;
    let levels = b.max_pole.saturating_sub(1) as i64;
    let metrics: Vec<Vec<Metric>> = (0..=b.max_blocks)
        .map(|m| if m < 2 { vec![] } else { ultrametrics(&(0..m).collect::<Vec<_>>(), levels, m) })
        .collect();
    let per_rank: Vec<Vec<SpectralType>> =
        (1..=b.max_rank as i64).into_par_iter().map(|n| types_of_rank(n, idx, b, &metrics)).collect::<Result<_>>()?;
    let mut all: Vec<SpectralType> = per_rank.into_iter().flatten().collect();
    all.sort_by_cached_key(|s| s.to_notation());
    all.into_iter()
        .map(|st| {
            let sh = st.shape()?;
            Ok((st, sh))
        })
        .collect()
}

/// Coxeter type of `W^inv`: reflections in the supported generators that
/// fix `α`.
pub fn winv_of(st: &SpectralType) -> Result<CoxeterType> {
    let qd = st.normalize().quiver_of()?;
    let ll = LiftLattice::new(&qd, &qd.alpha)?;
    let fixed: Vec<usize> = (0..ll.len()).filter(|&a| pair_generator(&qd, &ll.gens[a], &qd.alpha) == 0).collect();
    let gram: Vec<Vec<i64>> = fixed.iter().map(|&a| fixed.iter().map(|&b| ll.gram[a][b]).collect()).collect();
    coxeter_type(&gram)
}

/// Spectral types sharing one shape.
#[derive(Clone, Debug)]
pub struct ShapeClass {
    pub key: ShapeKey,
    /// Canonically ordered shape of the first spectral type.
    pub shape: Shape,
    pub spectral_types: Vec<String>,
    pub winv: CoxeterType,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub idx: i64,
    pub bounds: SearchBounds,
    pub classes: Vec<ShapeClass>,
    /// Shape keys that appear only at the margin bounds, when the
    /// saturation check was run.
    pub saturation_extra: Option<Vec<ShapeKey>>,
}

impl Classification {
    pub fn keys(&self) -> BTreeSet<ShapeKey> {
        self.classes.iter().map(|c| c.key.clone()).collect()
    }

    pub fn num_types(&self) -> usize {
        self.classes.iter().map(|c| c.spectral_types.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| {
                json!({
                    "key": c.key.to_string(),
                    "shape": c.shape.to_json(),
                    "spectral_types": c.spectral_types,
                    "winv": c.winv.to_string(),
                })
            })
            .collect();
        let mut v = json!({
            "idx": self.idx,
            "bounds": self.bounds.to_json(),
            "num_shapes": self.classes.len(),
            "num_types": self.num_types(),
            "classes": classes,
            "effectiveness": "genericity filter: alpha = r beta (r >= 2) requires p(alpha) > r p(beta)",
        });
        if let Some(extra) = &self.saturation_extra {
            v["saturated"] = json!(extra.is_empty());
            v["saturation_extra"] = json!(extra.iter().map(|k| k.to_string()).collect::<Vec<_>>());
        }
        v
    }
}

/// Enumerates and groups by canonical shape.
pub fn classify(idx: i64, b: &SearchBounds) -> Result<Classification> {
    let found = enumerate_fundamental(idx, b)?;
    let mut groups: BTreeMap<ShapeKey, (Shape, Vec<SpectralType>)> = BTreeMap::new();
    for (st, sh) in found {
        let key = canonical_shape(&sh)?;
        let entry = groups.entry(key).or_insert_with(|| (canonical_form(&sh).expect("size already checked"), vec![]));
        entry.1.push(st);
    }
    let classes = groups
        .into_iter()
        .map(|(key, (shape, types))| {
            Ok(ShapeClass {
                winv: winv_of(&types[0])?,
                key,
                shape,
                spectral_types: types.iter().map(|s| s.to_notation()).collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Classification { idx, bounds: b.clone(), classes, saturation_extra: None })
}

/// Runs `classify` at `b` and at `b.with_margin()`, recording the shapes
/// only the larger search finds.
pub fn classify_saturated(idx: i64, b: &SearchBounds) -> Result<Classification> {
    let mut c = classify(idx, b)?;
    let wide = classify(idx, &b.with_margin())?;
    let have = c.keys();
    c.saturation_extra = Some(wide.keys().into_iter().filter(|k| !have.contains(k)).collect());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::parse_spectral_type;

    fn terms_idx(st: &SpectralType) -> i64 {
        let n = st.rank();
        2 * n * n - st.points().iter().map(|p| point_terms(p).0).sum::<i64>()
    }

    #[test]
    fn closed_index_matches_quiver() {
        for s in
            ["11,11,11", "(1)(1),(1)(1)", "((1))((1)),(1)(1)", "(((1)))(((1)))", "(2)(2),(1)(111)", "111111,222,33"]
        {
            let st = parse_spectral_type(s).unwrap();
            assert_eq!(terms_idx(&st), st.rigidity_index().unwrap(), "{s}");
        }
    }

    #[test]
    fn ultrametric_counts() {
        // Two leaves: one value each. Three leaves with values 0 and 1: the
        // all-zero metric, three with one close pair, and all-one.
        assert_eq!(ultrametrics(&[0, 1], 3, 2).len(), 3);
        assert_eq!(ultrametrics(&[0, 1, 2], 2, 3).len(), 1 + 3 + 1);
    }

    #[test]
    fn flat_chain_waste() {
        let c: Vec<Vec<i64>> = flat_chains(2, 5, 8, 2).into_iter().map(|x| x.0).collect();
        assert!(c.contains(&vec![2, 2, 1]));
        assert!(!c.contains(&vec![2, 1, 1, 1]));
        assert_eq!(partitions(5, 2), vec![vec![4, 1], vec![3, 2]]);
    }

    #[test]
    fn odd_or_positive_index_rejected() {
        assert!(enumerate_fundamental(-1, &SearchBounds::default()).is_err());
        assert!(enumerate_fundamental(2, &SearchBounds::default()).is_err());
    }

    #[test]
    fn divisible_vectors() {
        let st = parse_spectral_type("22,22,22,22").unwrap();
        let qd = st.quiver_of().unwrap();
        assert!(!is_effective(&qd, &qd.alpha).unwrap());
        assert!(!is_fundamental(&st, 0).unwrap());
        assert!(is_fundamental(&parse_spectral_type("11,11,11,11").unwrap(), 0).unwrap());
    }
}

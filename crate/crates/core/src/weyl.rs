//! The middle-convolution Weyl group acting on dimension and parameter
//! vectors: reflections, feasibility of parameters, reduction to the
//! fundamental domain, fractionality.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{dot_param, DimVector, ParamVector, RootKind, VertexTag};
use crate::rat::{fmt_q, lcm_of_denoms, Q};
use crate::spectral::{Generator, QuiverData};

/// `ε_t`: indicator of the chosen block vertex at every irregular point.
pub fn epsilon_of(qd: &QuiverData, t: &[usize]) -> Result<DimVector> {
    qd.validate_tuple(t)?;
    let mut e = vec![0; qd.quiver.len()];
    for &i in qd.irregular_points() {
        e[qd.block_vertex(i, t[i]).unwrap()] = 1;
    }
    Ok(e)
}

/// `(v, ε_t)`.
pub fn pair_tuple(qd: &QuiverData, t: &[usize], v: &[i64]) -> i64 {
    qd.irregular_points().iter().map(|&i| qd.quiver.pair_simple(v, qd.block_vertex(i, t[i]).unwrap())).sum()
}

/// `μ_t = μ · ε_t`.
pub fn lambda_tuple(qd: &QuiverData, t: &[usize], l: &[Q]) -> Q {
    qd.irregular_points().iter().map(|&i| l[qd.block_vertex(i, t[i]).unwrap()].clone()).sum()
}

pub fn mc_reflect_dim(qd: &QuiverData, t: &[usize], a: &[i64]) -> Result<DimVector> {
    qd.validate_tuple(t)?;
    if a.len() != qd.quiver.len() {
        return Err(Error::SizeMismatch { expected: qd.quiver.len(), got: a.len() });
    }
    if !qd.is_balanced(a) {
        return Err(Error::invalid("vector is not balanced across irregular points"));
    }
    let c = pair_tuple(qd, t, a);
    let mut out = a.to_vec();
    for &i in qd.irregular_points() {
        out[qd.block_vertex(i, t[i]).unwrap()] -= c;
    }
    Ok(out)
}

/// Parameter reflection dual to `mc_reflect_dim` on the balanced lattice.
/// The update is `λ - μ_t (ε_t, ·)` shifted by the functionals vanishing on
/// the balanced lattice, so that the chosen blocks away from point 0 stay
/// fixed.
pub fn mc_reflect_param(qd: &QuiverData, t: &[usize], l: &[Q]) -> Result<ParamVector> {
    qd.validate_tuple(t)?;
    if l.len() != qd.quiver.len() {
        return Err(Error::SizeMismatch { expected: qd.quiver.len(), got: l.len() });
    }
    let mu = lambda_tuple(qd, t, l);
    let mut out = l.to_vec();
    let st = &qd.st;
    for &i in qd.irregular_points() {
        let p = st.point(i);
        for j in 1..=p.num_blocks() {
            let v = qd.block_vertex(i, j).unwrap();
            let coeff = if j == t[i] {
                if i == 0 {
                    -2
                } else {
                    0
                }
            } else {
                let d = p.d(j - 1, t[i] - 1);
                if i == 0 {
                    d
                } else {
                    d + 2
                }
            };
            if coeff != 0 {
                out[v] += Q::from_integer(coeff.into()) * &mu;
            }
        }
    }
    for (i, p) in st.points().iter().enumerate() {
        if p.chain(t[i] - 1).len() > 1 {
            let v = qd.leg_vertex(i, t[i], 1).unwrap();
            out[v] += &mu;
        }
    }
    Ok(out)
}

/// All generators of the group: block tuples (lexicographic), then legs.
pub fn generators(qd: &QuiverData) -> Vec<Generator> {
    let mut g: Vec<Generator> = qd.all_tuples().into_iter().map(Generator::Tuple).collect();
    g.extend(qd.leg_vertices().into_iter().map(Generator::Leg));
    g
}

pub fn pair_generator(qd: &QuiverData, g: &Generator, v: &[i64]) -> i64 {
    match g {
        Generator::Tuple(t) => pair_tuple(qd, t, v),
        Generator::Leg(a) => qd.quiver.pair_simple(v, *a),
    }
}

pub fn lambda_generator(qd: &QuiverData, g: &Generator, l: &[Q]) -> Q {
    match g {
        Generator::Tuple(t) => lambda_tuple(qd, t, l),
        Generator::Leg(a) => l[*a].clone(),
    }
}

pub fn reflect_dim(qd: &QuiverData, g: &Generator, a: &[i64]) -> Result<DimVector> {
    match g {
        Generator::Tuple(t) => mc_reflect_dim(qd, t, a),
        Generator::Leg(v) => qd.quiver.simple_reflection(*v, a),
    }
}

pub fn reflect_param(qd: &QuiverData, g: &Generator, l: &[Q]) -> Result<ParamVector> {
    match g {
        Generator::Tuple(t) => mc_reflect_param(qd, t, l),
        Generator::Leg(v) => qd.quiver.lambda_reflection(*v, l),
    }
}

/// The simple root of a generator, as a vector on the quiver.
pub fn generator_root(qd: &QuiverData, g: &Generator) -> DimVector {
    match g {
        Generator::Tuple(t) => epsilon_of(qd, t).expect("generated tuples are valid"),
        Generator::Leg(v) => qd.quiver.unit(*v),
    }
}

/// Positive, balanced, connected support, and non-positive pairing with
/// every generator.
pub fn is_in_l_fundamental(qd: &QuiverData, a: &[i64]) -> bool {
    if a.len() != qd.quiver.len() || a.iter().any(|&x| x < 0) || a.iter().all(|&x| x == 0) {
        return false;
    }
    qd.is_balanced(a)
        && qd.quiver.support_connected_unchecked(a)
        && generators(qd).iter().all(|g| pair_generator(qd, g, a) <= 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Dif,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub member: bool,
    /// 0 when `member`, else the first failing clause (1 root, 2 pairing,
    /// 3 decomposition).
    pub failed_clause: u8,
    pub witness: Vec<DimVector>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({ "member": self.member, "failed_clause": self.failed_clause, "witness": self.witness })
    }
}

/// Parameters scaled to integers, for fast orthogonality tests.
fn integer_lambda(l: &[Q]) -> Vec<BigInt> {
    let den = lcm_of_denoms(l.iter());
    l.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect()
}

/// Positive vectors strictly below `a` (coordinatewise) that are roots,
/// orthogonal to `l`, and balanced in `Dif` mode, with their `p` values.
fn decomposition_candidates(qd: &QuiverData, l: &[Q], a: &[i64], mode: Mode) -> Vec<(DimVector, i64)> {
    let li = integer_lambda(l);
    let small: Option<Vec<i128>> = li.iter().map(|x| x.to_i128()).collect();
    let n = a.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        // Advance the odometer.
        let mut k = 0;
        while k < n && cur[k] == a[k] {
            cur[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        cur[k] += 1;
        if cur == a {
            continue;
        }
        let orth = match &small {
            Some(s) => cur.iter().zip(s).map(|(&x, &y)| x as i128 * y).sum::<i128>() == 0,
            None => cur.iter().zip(&li).map(|(&x, y)| BigInt::from(x) * y).sum::<BigInt>().is_zero(),
        };
        if !orth {
            continue;
        }
        if mode == Mode::Dif && !qd.is_balanced(&cur) {
            continue;
        }
        if qd.quiver.classify_root(&cur).ok() == Some(RootKind::NotRoot) {
            continue;
        }
        let p = 1 - qd.quiver.pair(&cur, &cur) / 2;
        out.push((cur.clone(), p));
    }
    out.sort();
    out
}

struct DecompSearch<'a> {
    cands: &'a [(DimVector, i64)],
    memo: HashMap<DimVector, Option<i64>>,
}

impl DecompSearch<'_> {
    /// Largest total `p` over decompositions of `rem` into candidates.
    fn best(&mut self, rem: &[i64]) -> Option<i64> {
        if rem.iter().all(|&x| x == 0) {
            return Some(0);
        }
        if let Some(v) = self.memo.get(rem) {
            return *v;
        }
        let mut best: Option<i64> = None;
        for (c, p) in self.cands {
            if c.iter().zip(rem).all(|(x, y)| x <= y) {
                let r: DimVector = rem.iter().zip(c).map(|(y, x)| y - x).collect();
                if let Some(b) = self.best(&r) {
                    best = Some(best.map_or(p + b, |x: i64| x.max(p + b)));
                }
            }
        }
        self.memo.insert(rem.to_vec(), best);
        best
    }

    /// First decomposition in lexicographic order (parts non-decreasing)
    /// whose total `p` reaches `target`.
    fn witness(&mut self, rem: &[i64], start: usize, acc: i64, target: i64, parts: &mut Vec<usize>) -> bool {
        if rem.iter().all(|&x| x == 0) {
            return acc >= target;
        }
        match self.best(rem) {
            Some(b) if acc + b >= target => {}
            _ => return false,
        }
        for idx in start..self.cands.len() {
            let (c, p) = &self.cands[idx];
            if c.iter().zip(rem).all(|(x, y)| x <= y) {
                let r: DimVector = rem.iter().zip(c).map(|(y, x)| y - x).collect();
                parts.push(idx);
                if self.witness(&r, idx, acc + p, target, parts) {
                    return true;
                }
                parts.pop();
            }
        }
        false
    }
}

/// Feasibility test for `(λ, a)`: `a` a positive root (balanced in `Dif`
/// mode) orthogonal to `λ`, whose `p` value beats every decomposition into
/// at least two such roots.
pub fn sigma_membership(qd: &QuiverData, l: &[Q], a: &[i64], mode: Mode) -> Result<Verdict> {
    let n = qd.quiver.len();
    if a.len() != n || l.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: if a.len() != n { a.len() } else { l.len() } });
    }
    if a.iter().any(|&x| x < 0) || a.iter().all(|&x| x == 0) {
        return Err(Error::invalid("dimension vector must be positive"));
    }
    let fail = |clause: u8, witness: Vec<DimVector>| Verdict { member: false, failed_clause: clause, witness };
    if qd.quiver.classify_root(a)? == RootKind::NotRoot || (mode == Mode::Dif && !qd.is_balanced(a)) {
        return Ok(fail(1, vec![]));
    }
    if !dot_param(l, a).is_zero() {
        return Ok(fail(2, vec![]));
    }
    let pa = 1 - qd.quiver.pair(a, a) / 2;
    let cands = decomposition_candidates(qd, l, a, mode);
    let mut search = DecompSearch { cands: &cands, memo: HashMap::new() };
    match search.best(a) {
        Some(b) if b >= pa => {
            let mut parts = Vec::new();
            // Report the most violating decomposition, lexicographically least.
            let found = search.witness(a, 0, 0, b, &mut parts);
            debug_assert!(found);
            Ok(fail(3, parts.into_iter().map(|i| cands[i].0.clone()).collect()))
        }
        _ => Ok(Verdict { member: true, failed_clause: 0, witness: vec![] }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    Fundamental,
    RealRoot,
}

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub word: Vec<Generator>,
    /// `(α, λ)` before the first step and after each step.
    pub states: Vec<(DimVector, ParamVector)>,
    pub terminal: Terminal,
}

impl ReductionTrace {
    pub fn alpha(&self) -> &DimVector {
        &self.states.last().unwrap().0
    }

    pub fn lambda(&self) -> &ParamVector {
        &self.states.last().unwrap().1
    }

    pub fn to_json(&self, qd: &QuiverData) -> Value {
        let word: Vec<Value> = self
            .word
            .iter()
            .map(|g| match g {
                Generator::Tuple(t) => json!({ "kind": "J", "tuple": t }),
                Generator::Leg(v) => match qd.quiver.vertices()[*v] {
                    VertexTag::Leg { i, j, k } => json!({ "kind": "leg", "i": i, "j": j, "k": k }),
                    VertexTag::Irr { .. } => unreachable!("leg generators are leg vertices"),
                },
            })
            .collect();
        json!({
            "word": word,
            "terminal": match self.terminal { Terminal::Fundamental => "fundamental", Terminal::RealRoot => "real_root" },
            "alpha": self.alpha(),
            "lambda": self.lambda().iter().map(fmt_q).collect::<Vec<_>>(),
        })
    }
}

/// Greedy descent: reflect at the generator of largest positive pairing
/// with nonzero parameter value until `a` is fundamental or a simple root.
pub fn reduce_to_fundamental(qd: &QuiverData, l: &[Q], a: &[i64]) -> Result<ReductionTrace> {
    let n = qd.quiver.len();
    if a.len() != n || l.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: a.len().min(l.len()) });
    }
    if !qd.is_balanced(a) {
        return Err(Error::invalid("vector is not balanced across irregular points"));
    }
    let gens = generators(qd);
    let roots: Vec<DimVector> = gens.iter().map(|g| generator_root(qd, g)).collect();
    let mut cur = (a.to_vec(), l.to_vec());
    let mut trace = ReductionTrace { word: vec![], states: vec![cur.clone()], terminal: Terminal::Fundamental };
    loop {
        if cur.0.iter().any(|&x| x < 0) {
            return Err(Error::Stuck("dimension vector left the positive cone".into()));
        }
        if is_in_l_fundamental(qd, &cur.0) {
            trace.terminal = Terminal::Fundamental;
            return Ok(trace);
        }
        if roots.contains(&cur.0) {
            trace.terminal = Terminal::RealRoot;
            return Ok(trace);
        }
        let mut best: Option<(i64, usize)> = None;
        let mut blocked = Vec::new();
        for (idx, g) in gens.iter().enumerate() {
            let c = pair_generator(qd, g, &cur.0);
            if c <= 0 {
                continue;
            }
            if lambda_generator(qd, g, &cur.1).is_zero() {
                blocked.push(idx);
                continue;
            }
            if best.is_none_or(|(b, _)| c > b) {
                best = Some((c, idx));
            }
        }
        let Some((_, idx)) = best else {
            let msg = if blocked.is_empty() {
                "no generator pairs positively but the vector is not fundamental".to_string()
            } else {
                format!("every descending generator has zero parameter value ({} blocked)", blocked.len())
            };
            return Err(Error::Stuck(msg));
        };
        let g = &gens[idx];
        cur = (reflect_dim(qd, g, &cur.0)?, reflect_param(qd, g, &cur.1)?);
        trace.word.push(g.clone());
        trace.states.push(cur.clone());
    }
}

/// Values (mod 1) added to the adjacent block parameter by the reflection
/// group of one leg chain.
fn chain_shifts(l: &[Q], chain: &[usize]) -> Result<BTreeSet<Q>> {
    const CAP: usize = 1_000_000;
    let start: Vec<Q> = chain.iter().map(|&v| l[v].clone()).collect();
    let mut seen: HashSet<(Vec<Q>, Q)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((start.clone(), Q::zero()));
    queue.push_back((start, Q::zero()));
    let mut shifts = BTreeSet::new();
    while let Some((s, shift)) = queue.pop_front() {
        shifts.insert(frac(&shift));
        for k in 0..s.len() {
            let mut t = s.clone();
            let v = s[k].clone();
            t[k] = -v.clone();
            if k > 0 {
                t[k - 1] += &v;
            }
            if k + 1 < s.len() {
                t[k + 1] += &v;
            }
            let ns = if k == 0 { &shift + &v } else { shift.clone() };
            if seen.insert((t.clone(), ns.clone())) {
                if seen.len() > CAP {
                    return Err(Error::Limit("leg reflection orbit exceeds 10^6 states".into()));
                }
                queue.push_back((t, ns));
            }
        }
    }
    Ok(shifts)
}

fn frac(x: &Q) -> Q {
    x - Q::from_integer(x.floor().to_integer())
}

/// True when `μ'_t` is non-integral for every tuple `t` and every `μ'` in
/// the orbit of `l` under the leg reflections.
pub fn is_fractional(qd: &QuiverData, l: &[Q]) -> Result<bool> {
    if l.len() != qd.quiver.len() {
        return Err(Error::SizeMismatch { expected: qd.quiver.len(), got: l.len() });
    }
    let st = &qd.st;
    // Shift sets per chain, keyed by (point, block).
    let mut shifts: HashMap<(usize, usize), BTreeSet<Q>> = HashMap::new();
    for (i, p) in st.points().iter().enumerate() {
        for j in 1..=p.num_blocks() {
            let e = p.chain(j - 1).len();
            let chain: Vec<usize> = (1..e).map(|k| qd.leg_vertex(i, j, k).unwrap()).collect();
            shifts.insert((i, j), chain_shifts(l, &chain)?);
        }
    }
    for t in qd.all_tuples() {
        let mut sums: BTreeSet<Q> = BTreeSet::from([frac(&lambda_tuple(qd, &t, l))]);
        for (i, &j) in t.iter().enumerate() {
            let s = &shifts[&(i, j)];
            if s.len() == 1 {
                continue;
            }
            sums = sums.iter().flat_map(|a| s.iter().map(move |b| frac(&(a + b)))).collect();
        }
        if sums.contains(&Q::zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fractionality along the reduction word: the starting parameter and every
/// intermediate one.
pub fn has_fractional_reduction(qd: &QuiverData, l: &[Q], a: &[i64]) -> Result<bool> {
    let trace = reduce_to_fundamental(qd, l, a)?;
    for (_, lam) in &trace.states {
        if !is_fractional(qd, lam)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(r_t(λ), s_t(α))`, refused when `λ_t = 0`.
pub fn transform_spectral_data(qd: &QuiverData, t: &[usize], l: &[Q], a: &[i64]) -> Result<(ParamVector, DimVector)> {
    qd.validate_tuple(t)?;
    if lambda_tuple(qd, t, l).is_zero() {
        return Err(Error::ZeroLambda);
    }
    Ok((mc_reflect_param(qd, t, l)?, mc_reflect_dim(qd, t, a)?))
}

/// A parameter vector orthogonal to `a` with pseudo-random entries: nonzero
/// rationals with pairwise unrelated denominators, corrected on one
/// coordinate so that `λ · a = 0`.
pub fn generic_orthogonal_lambda(a: &[i64], seed: u64) -> ParamVector {
    let primes = [101i64, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191];
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let mut l: ParamVector = (0..a.len())
        .map(|k| {
            let den = primes[k % primes.len()] * (1 + (k / primes.len()) as i64 * 2);
            let num = (next() % 997) + 1;
            Q::new(BigInt::from(num), BigInt::from(den))
        })
        .collect();
    if let Some(pivot) = a.iter().position(|&x| x != 0) {
        let rest: Q = dot_param(&l, a) - &l[pivot] * Q::from_integer(a[pivot].into());
        l[pivot] = -rest / Q::from_integer(a[pivot].into());
    }
    l
}

pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};
    use crate::spectral::parse_spectral_type;

    fn qd(s: &str) -> QuiverData {
        parse_spectral_type(s).unwrap().quiver_of().unwrap()
    }

    #[test]
    fn epsilon_indicators() {
        let d = qd("(1)(1),(1)(1)");
        assert_eq!(epsilon_of(&d, &[1, 1]).unwrap(), vec![1, 0, 1, 0]);
        let all: HashSet<DimVector> = d.all_tuples().iter().map(|t| epsilon_of(&d, t).unwrap()).collect();
        assert_eq!(all.len(), 4);
        for t in d.all_tuples() {
            assert_eq!(d.quiver.classify_root(&epsilon_of(&d, &t).unwrap()).unwrap(), RootKind::RealRoot);
        }
    }

    #[test]
    fn hypergeometric_reflection_drops_rank() {
        let d = qd("11,11,11");
        let a = mc_reflect_dim(&d, &[1, 1, 1], &d.alpha).unwrap();
        assert_eq!(a, vec![1, 1, 1, 1]);
        assert_eq!(mc_reflect_dim(&d, &[1, 1, 1], &a).unwrap(), d.alpha);
    }

    #[test]
    fn param_reflection_is_dual_and_involutive() {
        let d = qd("((1))((11)),(1)(2),21");
        let l: ParamVector = (0..d.quiver.len()).map(|k| qf(k as i64 * 3 + 1, 7)).collect();
        for t in d.all_tuples() {
            let r = mc_reflect_param(&d, &t, &l).unwrap();
            assert_eq!(mc_reflect_param(&d, &t, &r).unwrap(), l);
            let s = mc_reflect_dim(&d, &t, &d.alpha).unwrap();
            assert_eq!(dot_param(&r, &d.alpha), dot_param(&l, &s));
        }
    }

    #[test]
    fn membership_examples() {
        let d = qd("11,11,11,11");
        let l = generic_orthogonal_lambda(&d.alpha, 1);
        let v = sigma_membership(&d, &l, &d.alpha, Mode::Dif).unwrap();
        assert!(v.member, "{v:?}");
        let two: DimVector = d.alpha.iter().map(|x| 2 * x).collect();
        let zero = vec![Q::zero(); d.quiver.len()];
        let v = sigma_membership(&d, &zero, &two, Mode::Dif).unwrap();
        assert!(!v.member);
        assert_eq!(v.failed_clause, 3);
        assert_eq!(v.witness, vec![d.alpha.clone(), d.alpha.clone()]);
        let e = d.quiver.unit(1);
        assert!(sigma_membership(&d, &zero, &e, Mode::Plain).unwrap().member);
    }

    #[test]
    fn rigid_reduction_reaches_a_simple_root() {
        let st = parse_spectral_type("11,11,11").unwrap();
        let d = st.quiver_of().unwrap();
        let h = crate::spectral::HtlSymbolData::with_eigenvalues(
            st,
            vec![vec![vec![qf(1, 3), qf(1, 5)]], vec![vec![qf(1, 7), qf(2, 11)]], vec![vec![qf(1, 13), q(0)]]],
        )
        .unwrap();
        let mut l = h.lambda_of(&d).unwrap();
        // Put λ on α^⊥ by adjusting the centre.
        let s = dot_param(&l, &d.alpha);
        l[0] -= s / q(2);
        let tr = reduce_to_fundamental(&d, &l, &d.alpha).unwrap();
        assert_eq!(tr.terminal, Terminal::RealRoot);
        for (a, lam) in &tr.states {
            assert_eq!(d.quiver.pair(a, a), 2);
            assert!(dot_param(lam, a).is_zero());
        }
    }

    #[test]
    fn fundamental_needs_no_steps() {
        let d = qd("((1))((1)),(1)(1)");
        let l = generic_orthogonal_lambda(&d.alpha, 3);
        let tr = reduce_to_fundamental(&d, &l, &d.alpha).unwrap();
        assert!(tr.word.is_empty());
        assert_eq!(tr.terminal, Terminal::Fundamental);
    }

    #[test]
    fn fractional_examples() {
        let d = qd("11,11,11");
        let l: ParamVector = vec![qf(1, 3), qf(1, 3), qf(1, 3), qf(1, 3)];
        // λ_t = 1/3, shifts 1/3 per leg: sums 1/3 + {0,1/3}^3 hit 1.
        assert!(!is_fractional(&d, &l).unwrap());
        let l: ParamVector = vec![qf(1, 9), qf(1, 9), qf(1, 9), qf(1, 9)];
        assert!(is_fractional(&d, &l).unwrap());
        let l: ParamVector = vec![q(1), qf(1, 2), qf(1, 2), qf(1, 2)];
        assert!(!is_fractional(&d, &l).unwrap());
    }

    #[test]
    fn transform_refuses_zero_parameter() {
        let d = qd("11,11,11");
        let zero = vec![Q::zero(); 4];
        assert_eq!(transform_spectral_data(&d, &[1, 1, 1], &zero, &d.alpha), Err(Error::ZeroLambda));
    }
}

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra_core::enumerate::{canonical_shape, classify, point_terms, FixtureTable, SearchBounds};
use spectra_core::lattice::{dot_param, DimVector, ParamVector};
use spectra_core::linalg::RatMatrix;
use spectra_core::mc::{moment_map, QuiverRep};
use spectra_core::rat::qf;
use spectra_core::spectral::{parse_spectral_type, LiftLattice, PointType, QuiverData, Shape, SpectralType, Tree};
use spectra_core::weyl::{generators, pair_tuple, reflect_dim, reflect_param};

fn pool() -> &'static Vec<QuiverData> {
    static POOL: OnceLock<Vec<QuiverData>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut names: Vec<String> =
            ["11,11,11", "21,111,111", "(1)(1)(1),21,21", "((1))((1)),(1)(1)", "(11)(1),(2)(1),21"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        for t in [FixtureTable::tame(), FixtureTable::class()] {
            names.extend(t.entries.iter().flat_map(|e| e.spectral_types.clone()));
        }
        names.iter().map(|s| parse_spectral_type(s).unwrap().normalize().quiver_of().unwrap()).collect()
    })
}

fn rand_dim(rng: &mut ChaCha8Rng, n: usize) -> DimVector {
    (0..n).map(|_| rng.gen_range(-4..=4)).collect()
}

fn rand_param(rng: &mut ChaCha8Rng, n: usize) -> ParamVector {
    (0..n).map(|_| qf(rng.gen_range(-20..=20), rng.gen_range(1..=3))).collect()
}

/// Random vector with equal block sums at every irregular point.
fn rand_balanced(rng: &mut ChaCha8Rng, qd: &QuiverData) -> DimVector {
    let mut v = rand_dim(rng, qd.quiver.len());
    let irr = qd.irregular_points();
    let sum = |v: &[i64], i: usize| -> i64 {
        (1..=qd.st.point(i).num_blocks()).map(|j| v[qd.block_vertex(i, j).unwrap()]).sum()
    };
    let target = sum(&v, irr[0]);
    for &i in &irr[1..] {
        let s = sum(&v, i);
        v[qd.block_vertex(i, 1).unwrap()] += target - s;
    }
    assert!(qd.is_balanced(&v));
    v
}

fn case() -> impl Strategy<Value = (usize, u64)> {
    (0..pool().len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflections_are_involutions((k, seed) in case()) {
        let qd = &pool()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = rand_balanced(&mut rng, qd);
        let l = rand_param(&mut rng, qd.quiver.len());
        for g in generators(qd) {
            let sv = reflect_dim(qd, &g, &v).unwrap();
            prop_assert_eq!(&reflect_dim(qd, &g, &sv).unwrap(), &v);
            let rl = reflect_param(qd, &g, &l).unwrap();
            prop_assert_eq!(&reflect_param(qd, &g, &rl).unwrap(), &l);
        }
    }

    #[test]
    fn parameter_reflection_is_dual((k, seed) in case()) {
        let qd = &pool()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = rand_balanced(&mut rng, qd);
        let l = rand_param(&mut rng, qd.quiver.len());
        for g in generators(qd) {
            let lhs = dot_param(&reflect_param(qd, &g, &l).unwrap(), &v);
            let rhs = dot_param(&l, &reflect_dim(qd, &g, &v).unwrap());
            prop_assert_eq!(lhs, rhs, "{:?}", g);
        }
    }

    #[test]
    fn reflections_preserve_the_form((k, seed) in case()) {
        let qd = &pool()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = rand_balanced(&mut rng, qd);
        let v = rand_balanced(&mut rng, qd);
        let before = qd.quiver.sym_form(&u, &v).unwrap();
        for g in generators(qd) {
            let su = reflect_dim(qd, &g, &u).unwrap();
            let sv = reflect_dim(qd, &g, &v).unwrap();
            prop_assert_eq!(qd.quiver.sym_form(&su, &sv).unwrap(), before, "{:?}", g);
        }
    }

    #[test]
    fn projection_is_an_equivariant_isometry((k, seed) in case()) {
        let qd = &pool()[k];
        let ll = LiftLattice::new(qd, &qd.alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_dim(&mut rng, ll.len());
        let b = rand_dim(&mut rng, ll.len());
        let (xa, xb) = (ll.xi_project(&a).unwrap(), ll.xi_project(&b).unwrap());
        prop_assert!(qd.is_balanced(&xa));
        prop_assert_eq!(ll.pair(&a, &b), qd.quiver.sym_form(&xa, &xb).unwrap());
        for (s, g) in ll.gens.iter().enumerate() {
            let lhs = ll.xi_project(&ll.reflect(s, &a)).unwrap();
            prop_assert_eq!(lhs, reflect_dim(qd, g, &xa).unwrap(), "{}", ll.labels[s]);
        }
    }

    #[test]
    fn moment_map_is_equivariant((k, seed) in case()) {
        let qd = &pool()[k];
        let q = &qd.quiver;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims: Vec<usize> = (0..q.len()).map(|_| rng.gen_range(0..=2)).collect();
        let mut entry = |_: usize, _: usize| qf(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let zero = QuiverRep::zero(q, &dims);
        let rep = QuiverRep {
            dims: dims.clone(),
            x: zero.x.iter().map(|m| RatMatrix::from_fn(m.rows(), m.cols(), &mut entry)).collect(),
            x_star: zero.x_star.iter().map(|m| RatMatrix::from_fn(m.rows(), m.cols(), &mut entry)).collect(),
        };
        let g: Vec<RatMatrix> = dims
            .iter()
            .map(|&d| loop {
                let m = RatMatrix::from_fn(d, d, &mut entry);
                if m.is_invertible() {
                    break m;
                }
            })
            .collect();
        let before = moment_map(q, &rep).unwrap();
        let after = moment_map(q, &rep.act(q, &g).unwrap()).unwrap();
        for a in 0..q.len() {
            let conj = g[a].mul(&before[a]).mul(&g[a].inverse().unwrap());
            prop_assert_eq!(&after[a], &conj, "vertex {}", a);
        }
    }
}

/// Random point of rank `n`: a tree of depth `pole - 1` with random splits
/// and random chains at the leaves.
fn rand_point(rng: &mut ChaCha8Rng, n: i64, pole: usize, monotone: bool) -> PointType {
    fn split(rng: &mut ChaCha8Rng, n: i64, parts: usize) -> Vec<i64> {
        let parts = parts.min(n as usize).max(1);
        let mut out = vec![1i64; parts];
        for _ in 0..n - parts as i64 {
            out[rng.gen_range(0..parts)] += 1;
        }
        out
    }
    fn build(rng: &mut ChaCha8Rng, n: i64, levels: usize, monotone: bool) -> Tree {
        if levels == 0 {
            let len = rng.gen_range(1..=3);
            let mut c = split(rng, n, len);
            if monotone {
                c.sort_unstable_by(|a, b| b.cmp(a));
            }
            return Tree::Leaf(c);
        }
        let kids = rng.gen_range(1..=3);
        Tree::Node(split(rng, n, kids).into_iter().map(|s| build(rng, s, levels - 1, monotone)).collect())
    }
    PointType::new(build(rng, n, pole - 1, monotone)).unwrap()
}

fn rand_type(seed: u64, monotone: bool) -> SpectralType {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let points = rng.gen_range(2..=4);
    let pts = (0..points)
        .map(|_| {
            let pole = rng.gen_range(1..=3);
            rand_point(&mut rng, n, pole, monotone)
        })
        .collect();
    SpectralType::new(pts).unwrap().normalize()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The per-point terms give the index, and `2n - Σδ` is the largest
    /// pairing of `α` with a block tuple.
    #[test]
    fn point_terms_match_the_quiver(seed in any::<u64>()) {
        let st = rand_type(seed, false);
        let n = st.rank();
        let terms: Vec<(i64, i64)> = st.points().iter().map(point_terms).collect();
        let idx = 2 * n * n - terms.iter().map(|t| t.0).sum::<i64>();
        prop_assert_eq!(idx, st.rigidity_index().unwrap(), "{}", st.to_notation());
        let qd = st.quiver_of().unwrap();
        let best = qd.all_tuples().iter().map(|t| pair_tuple(&qd, t, &qd.alpha)).max().unwrap();
        let delta: i64 = terms.iter().map(|t| t.1).sum();
        prop_assert_eq!(best, 2 * n - delta, "{}", st.to_notation());
    }

    #[test]
    fn monotone_chains_bound_kappa(seed in any::<u64>()) {
        let st = rand_type(seed, true);
        let n = st.rank();
        for p in st.points() {
            let (kappa, delta) = point_terms(p);
            prop_assert!(kappa >= n * delta, "{} at {}", p.to_notation(), st.to_notation());
        }
    }

    #[test]
    fn canonical_key_ignores_labels_and_parameter_basis((k, seed) in case()) {
        let sh = pool()[k].st.shape().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..sh.len()).collect();
        for a in (1..order.len()).rev() {
            order.swap(a, rng.gen_range(0..=a));
        }
        let mut moved = Shape {
            nodes: order.iter().map(|&a| sh.nodes[a].clone()).collect(),
            gram: order.iter().map(|&a| order.iter().map(|&b| sh.gram[a][b]).collect()).collect(),
            n_params: sh.n_params,
        };
        // Shift the base by a lattice vector and apply an elementary
        // unimodular change to the parameters.
        if moved.n_params > 0 {
            let r = rng.gen_range(0..moved.n_params);
            let c = rng.gen_range(-3..=3);
            for node in &mut moved.nodes {
                node.base += c * node.params[r];
            }
            if moved.n_params > 1 {
                let s = (r + 1) % moved.n_params;
                for node in &mut moved.nodes {
                    node.params[r] += c * node.params[s];
                }
            }
        }
        prop_assert_eq!(canonical_shape(&moved).unwrap(), canonical_shape(&sh).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn larger_bounds_keep_every_shape(
        points in 3usize..=4, pole in 1usize..=3, rank in 2usize..=6, blocks in 1usize..=3, chain in 2usize..=4,
        grow in 0usize..5,
    ) {
        let small = SearchBounds { max_points: points, max_pole: pole, max_rank: rank, max_blocks: blocks, max_chain: chain };
        let mut big = small.clone();
        match grow {
            0 => big.max_points += 1,
            1 => big.max_pole += 1,
            2 => big.max_rank += 2,
            3 => big.max_blocks += 1,
            _ => big.max_chain += 1,
        }
        for idx in [0, -2] {
            let a = classify(idx, &small).unwrap().keys();
            let b = classify(idx, &big).unwrap().keys();
            prop_assert!(a.is_subset(&b), "idx {} {:?} -> {:?}", idx, small, big);
        }
    }
}

//! Acceptance checks, one test per criterion. Every tolerance and runtime
//! budget is pinned here as a constant; each test prints a single PASS line
//! with the measured figures (visible under --show-output, and the test
//! result line itself doubles as the pass/fail record).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rsrepair::gfield::{Elt, FieldCtx, Fq};
use rsrepair::goodpair::{
    assess, bad_set, bad_set_bound, counterexample_pair, derive_seed, duality_transform,
    goodness_matrix_with_completion, image_poly, is_good, is_weakly_good, search_good_pair,
    subfield_complement_pair, success_bound, t_rank, transform_pair_raw, SchemeParams,
    SearchOutcome,
};
use rsrepair::repair::{
    composite_scheme_subfield, execute_repair, grs_rescale_scheme, naive_bandwidth, naive_repair,
    scheme_from_pair, shorten_scheme, subspace_poly_scheme, verify_scheme, RepairScheme,
};
use rsrepair::rscode::rs_on_subspace;
use rsrepair::subspace::{
    all_subspaces, random_elt, sample_omega, subfield_subspace, Subspace, ENUM_GUARD,
};
use std::time::{Duration, Instant};

const MASTER_SEED: u64 = 0;

/// Repair every node of the scheme over `codewords` random codewords; all
/// recoveries must be exact and every transcript must report the same
/// bandwidth, which is returned.
fn repair_everywhere(ctx: &FieldCtx, scheme: &RepairScheme, codewords: usize, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut bits = None;
    for w in 0..codewords {
        let c = scheme.code.random_codeword(ctx, &mut rng);
        for node in 0..scheme.code.n() {
            let t = execute_repair(ctx, scheme, &c, node).unwrap();
            assert_eq!(t.recovered, c[node], "inexact repair at node {node}, codeword {w}");
            match bits {
                None => bits = Some(t.bits),
                Some(b) => assert_eq!(b, t.bits, "bandwidth must not vary by node"),
            }
        }
    }
    bits.unwrap()
}

fn positions_of_largest(ctx: &FieldCtx, scheme: &RepairScheme, t: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scheme.code.n()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(ctx.value(&scheme.code.eval_points[i])));
    idx.truncate(t);
    idx
}

/// The searched [64,48] configuration used by criteria 2 and 3.
fn searched_pair_gf2_15() -> (FieldCtx, rsrepair::goodpair::GoodPair) {
    let ctx = FieldCtx::new(2, 1, 15).unwrap();
    let params = SchemeParams { q: 2, m: 15, d: 6, s: 4, r: 5 };
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, u64::MAX));
    let u = subfield_subspace(&ctx, 3, 2, &mut urng).unwrap();
    match search_good_pair(&ctx, &u, &params, 64, MASTER_SEED).unwrap() {
        SearchOutcome::Found { pair, trials_used } => {
            assert!(trials_used <= 64, "search exceeded the 64-trial budget");
            (ctx, pair)
        }
        SearchOutcome::Exhausted { .. } => panic!("no good pair within 64 trials"),
    }
}

#[test]
fn criterion_1_shortened_composite_repairs_14_10_at_exactly_52_bits() {
    let budget = Duration::from_secs(10);
    let t0 = Instant::now();

    let ctx = FieldCtx::new(2, 1, 8).unwrap();
    let full = composite_scheme_subfield(&ctx, 4, 2).unwrap();
    assert_eq!((full.code.n(), full.code.k), (16, 12));
    let short = shorten_scheme(&ctx, &full, &positions_of_largest(&ctx, &full, 2)).unwrap();
    assert_eq!((short.code.n(), short.code.k), (14, 10));
    assert!(verify_scheme(&ctx, &short).unwrap().ok);

    let bits = repair_everywhere(&ctx, &short, 100, derive_seed(MASTER_SEED, 1));
    assert_eq!(bits, 52.0, "bandwidth must be exactly 52 bits");

    let dt = t0.elapsed();
    assert!(dt < budget, "criterion 1 overran: {dt:?}");
    println!("criterion 1: PASS (14 nodes x 100 codewords exact, 52 bits, {dt:?})");
}

#[test]
fn criterion_2_searched_64_48_scheme_repairs_all_nodes_at_exactly_315_bits() {
    let budget = Duration::from_secs(60);
    let t0 = Instant::now();

    let (ctx, pair) = searched_pair_gf2_15();
    assert_eq!(pair.u.subfield_degree, Some(3));
    assert_eq!(pair.u.dim(), 6);
    let scheme = scheme_from_pair(&ctx, &pair).unwrap();
    assert_eq!((scheme.code.n(), scheme.code.k, scheme.r), (64, 48, 5));
    assert!(verify_scheme(&ctx, &scheme).unwrap().ok);

    let bits = repair_everywhere(&ctx, &scheme, 10, derive_seed(MASTER_SEED, 2));
    assert_eq!(bits, 315.0, "bandwidth must be exactly 315 bits");

    let dt = t0.elapsed();
    assert!(dt < budget, "criterion 2 overran: {dt:?}");
    println!("criterion 2: PASS (64 nodes x 10 codewords exact, 315 bits, {dt:?})");
}

#[test]
fn criterion_3_baselines_80_720_693_and_the_54_bit_annotation() {
    let ctx8 = FieldCtx::new(2, 1, 8).unwrap();
    let full = composite_scheme_subfield(&ctx8, 4, 2).unwrap();
    let short = shorten_scheme(&ctx8, &full, &positions_of_largest(&ctx8, &full, 2)).unwrap();
    assert_eq!(naive_bandwidth(&ctx8, &short.code), 80.0);
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 3));
    let c = short.code.random_codeword(&ctx8, &mut rng);
    for node in 0..short.code.n() {
        let t = naive_repair(&ctx8, &short.code, &c, node).unwrap();
        assert_eq!(t.recovered, c[node]);
        assert_eq!(t.bits, 80.0);
    }

    let (ctx15, pair) = searched_pair_gf2_15();
    let qs = 1u128 << 4;
    let code = rs_on_subspace(&ctx15, &pair.u, (pair.u.size(&ctx15) - qs) as usize, ENUM_GUARD).unwrap();
    assert_eq!(naive_bandwidth(&ctx15, &code), 720.0);
    let c = code.random_codeword(&ctx15, &mut rng);
    let t = naive_repair(&ctx15, &code, &c, 0).unwrap();
    assert_eq!((t.recovered == c[0], t.bits), (true, 720.0));

    let dm = subspace_poly_scheme(&ctx15, &code, 4).unwrap();
    assert!(verify_scheme(&ctx15, &dm).unwrap().ok);
    let c = dm.code.random_codeword(&ctx15, &mut rng);
    for node in [0usize, 17, 63] {
        let t = execute_repair(&ctx15, &dm, &c, node).unwrap();
        assert_eq!(t.recovered, c[node]);
        assert_eq!(t.bits, 693.0, "uniform annihilator bandwidth must be 693 bits");
    }

    // the 54-bit figure for the [14,10] code is not reproduced: it belongs to
    // an imbalanced-download variant outside what this library builds
    let annotation = "54 bits for [14,10]: not reproduced (imbalanced download variant out of scope)";
    println!("{annotation}");
    assert!(annotation.contains("54") && annotation.contains("not reproduced"));

    println!("criterion 3: PASS (naive 80 and 720, annihilator 693, 54 annotated only)");
}

/// Draw `samples` random V of dimension m - r and report the fraction of
/// good (U, V) pairs.
fn goodness_frequency(ctx: &FieldCtx, u: &Subspace, params: &SchemeParams, samples: usize, seed: u64) -> f64 {
    let mut hits = 0usize;
    for i in 0..samples {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, i as u64));
        let v = Subspace::span(ctx, &sample_omega(ctx, params.m - params.r, &mut rng).entries);
        if is_good(ctx, u, &v, params.s).unwrap() {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

#[test]
fn criterion_4_monte_carlo_frequencies_clear_the_bounds() {
    let budget = Duration::from_secs(30);
    let samples = 300usize;
    let three_sigma = |p: f64| 3.0 * (p * (1.0 - p) / samples as f64).sqrt();

    // q = 3 at the rate boundary; the stated reference bound is 2/5
    let t0 = Instant::now();
    let ctx = FieldCtx::new(3, 1, 4).unwrap();
    let params = SchemeParams { q: 3, m: 4, d: 2, s: 1, r: 2 };
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 41));
    let u = subfield_subspace(&ctx, 1, 2, &mut urng).unwrap();
    let freq = goodness_frequency(&ctx, &u, &params, samples, derive_seed(MASTER_SEED, 42));
    let floor = 0.4 - three_sigma(0.4);
    assert!(freq >= floor, "q=3 frequency {freq} below floor {floor}");
    let dt1 = t0.elapsed();
    assert!(dt1 < budget);

    // q = 2 with one column of slack; bound exactly 1/3
    let t0 = Instant::now();
    let ctx = FieldCtx::new(2, 1, 5).unwrap();
    let params = SchemeParams { q: 2, m: 5, d: 3, s: 2, r: 2 };
    let b = success_bound(&params, 1);
    assert!((b - 1.0 / 3.0).abs() < 1e-12, "slack-case bound must be 1/3, got {b}");
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 43));
    let u = subfield_subspace(&ctx, 1, 3, &mut urng).unwrap();
    let freq2 = goodness_frequency(&ctx, &u, &params, samples, derive_seed(MASTER_SEED, 44));
    let floor2 = 1.0 / 3.0 - three_sigma(1.0 / 3.0);
    assert!(freq2 >= floor2, "q=2 slack frequency {freq2} below floor {floor2}");
    let dt2 = t0.elapsed();
    assert!(dt2 < budget);

    // q = 2 at the boundary, rescued by an F_4-linear U; bound 5/9
    let t0 = Instant::now();
    let ctx = FieldCtx::new(2, 1, 4).unwrap();
    let params = SchemeParams { q: 2, m: 4, d: 2, s: 1, r: 2 };
    let b = success_bound(&params, 2);
    assert!((b - 5.0 / 9.0).abs() < 1e-12, "subfield-case bound must be 5/9, got {b}");
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 45));
    let u = subfield_subspace(&ctx, 2, 1, &mut urng).unwrap();
    let freq3 = goodness_frequency(&ctx, &u, &params, samples, derive_seed(MASTER_SEED, 46));
    let floor3 = 5.0 / 9.0 - three_sigma(5.0 / 9.0);
    assert!(freq3 >= floor3, "q=2 subfield frequency {freq3} below floor {floor3}");
    let dt3 = t0.elapsed();
    assert!(dt3 < budget);

    println!(
        "criterion 4: PASS (freqs {freq:.3} >= {floor:.3}, {freq2:.3} >= {floor2:.3}, {freq3:.3} >= {floor3:.3}; {dt1:?}/{dt2:?}/{dt3:?})"
    );
}

#[test]
fn criterion_5_bad_set_dichotomy_exhaustive_at_gf16() {
    let budget = Duration::from_secs(60);
    let t0 = Instant::now();

    let ctx = FieldCtx::new(2, 1, 4).unwrap();

    // r >= m - s: every 3-dimensional U has an empty bad set
    for u in all_subspaces(&ctx, 3, ENUM_GUARD).unwrap() {
        let census = bad_set(&ctx, &u, 2, 2, ENUM_GUARD, false).unwrap();
        assert_eq!(census.count, 0, "expected empty bad set for U = {u:?}");
    }

    // r < m - s: every 2-dimensional U has a nonempty bad set under the bound
    let params = SchemeParams { q: 2, m: 4, d: 2, s: 1, r: 2 };
    let bound = bad_set_bound(&params, 1);
    let mut seen = Vec::new();
    for u in all_subspaces(&ctx, 2, ENUM_GUARD).unwrap() {
        let census = bad_set(&ctx, &u, 1, 2, ENUM_GUARD, false).unwrap();
        assert!(census.count > 0, "expected nonempty bad set for U = {u:?}");
        assert!((census.count as f64) <= bound, "count {} exceeds bound {bound}", census.count);
        seen.push(census.count);
    }

    let dt = t0.elapsed();
    assert!(dt < budget, "criterion 5 overran: {dt:?}");
    println!(
        "criterion 5: PASS (15 cubic U all zero; 35 planar U all in 1..={} under bound {bound}; {dt:?})",
        seen.iter().max().unwrap()
    );
}

fn capped_tuple(ctx: &FieldCtx, rng: &mut ChaCha12Rng, len: usize, rank_cap: usize) -> Vec<Elt> {
    use rand::Rng;
    let gens = sample_omega(ctx, rank_cap, rng).entries;
    (0..len)
        .map(|_| {
            let mut acc = ctx.zero();
            for g in &gens {
                let c = rng.random_range(0..ctx.q()) as u16;
                acc = ctx.add(&acc, &ctx.smul(g, Fq(c)));
            }
            acc
        })
        .collect()
}

#[test]
fn criterion_6_property_suites() {
    use rand::Rng;
    let budget = Duration::from_secs(30);

    // power-matrix rank formula, 200 tuples per field
    let t0 = Instant::now();
    for ctx in [FieldCtx::new(2, 1, 6).unwrap(), FieldCtx::new(3, 1, 4).unwrap()] {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 61));
        for _ in 0..200 {
            let len = rng.random_range(1..=6usize);
            let cap = rng.random_range(1..=len.min(ctx.m()));
            let s = rng.random_range(1..=4usize);
            let xs = capped_tuple(&ctx, &mut rng, len, cap);
            assert_eq!(t_rank(&ctx, &xs, s), s.min(ctx.rank_q(&xs)));
        }
    }
    assert!(t0.elapsed() < budget);

    // multiplication-matrix identity on 100 random (u, w)
    let t1 = Instant::now();
    let ctx = FieldCtx::new(3, 1, 4).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 62));
    for _ in 0..100 {
        let s_basis = ctx.make_basis(sample_omega(&ctx, ctx.m(), &mut rng).entries).unwrap();
        let u = random_elt(&ctx, &mut rng);
        let w = random_elt(&ctx, &mut rng);
        let mat = ctx.mult_matrix(&u, &s_basis).unwrap();
        let uw = ctx.mul(&u, &w);
        for j in 0..ctx.m() {
            let mut acc = Fq(0);
            for i in 0..ctx.m() {
                let wi = ctx.trace(&ctx.mul(&w, &s_basis.elems[i]));
                acc = ctx.fq_add(acc, ctx.fq_mul(wi, mat.get(i, j)));
            }
            assert_eq!(acc, ctx.trace(&ctx.mul(&uw, &s_basis.elems[j])));
        }
    }
    assert!(t1.elapsed() < budget);

    // goodness verdict survives ten changes of the internal basis completion
    let t2 = Instant::now();
    let ctx = FieldCtx::new(2, 1, 6).unwrap();
    let params = SchemeParams { q: 2, m: 6, d: 3, s: 2, r: 3 };
    let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 63));
    let u = subfield_subspace(&ctx, 1, 3, &mut urng).unwrap();
    let pair = match search_good_pair(&ctx, &u, &params, 64, derive_seed(MASTER_SEED, 64)).unwrap() {
        SearchOutcome::Found { pair, .. } => pair,
        SearchOutcome::Exhausted { .. } => panic!("no pair for the invariance check"),
    };
    let base = assess(&ctx, &pair.u, &pair.v, 2).unwrap();
    assert!(base.good);
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 65));
    for _ in 0..10 {
        let mut b2: Vec<Elt> = Vec::new();
        while b2.len() < ctx.m() - pair.v.dim() {
            let c = random_elt(&ctx, &mut rng);
            let mut trial: Vec<Elt> = pair.v.basis().to_vec();
            trial.extend(b2.iter().cloned());
            trial.push(c.clone());
            if ctx.rank_q(&trial) == trial.len() {
                b2.push(c);
            }
        }
        let again = goodness_matrix_with_completion(&ctx, &pair.u, &pair.v, 2, &b2)
            .unwrap()
            .report(&ctx);
        assert_eq!(again, base, "verdict moved under a basis completion change");
    }
    assert!(t2.elapsed() < budget);

    // duality transform on 20 good pairs: output good, double transform is
    // the Frobenius shift of the input
    let t3 = Instant::now();
    let mut found = 0usize;
    let mut attempt = 0u64;
    while found < 20 {
        attempt += 1;
        let mut urng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 660 + attempt));
        let u = subfield_subspace(&ctx, 1, 3, &mut urng).unwrap();
        let pair = match search_good_pair(&ctx, &u, &params, 8, derive_seed(MASTER_SEED, 670 + attempt)).unwrap() {
            SearchOutcome::Found { pair, .. } => pair,
            SearchOutcome::Exhausted { .. } => continue,
        };
        let dual = duality_transform(&ctx, &pair).unwrap();
        assert!(is_good(&ctx, &dual.u, &dual.v, 2).unwrap());
        let (u2, v2) = transform_pair_raw(&ctx, &pair.u, &pair.v, 2);
        assert_eq!(u2, dual.u);
        assert_eq!(v2, dual.v);
        let (u3, v3) = transform_pair_raw(&ctx, &u2, &v2, 2);
        let shift = (2 + 1) % ctx.m();
        assert_eq!(u3, pair.u.frobenius_image(&ctx, shift));
        assert_eq!(v3, pair.v.frobenius_image(&ctx, shift));
        found += 1;
    }
    assert!(t3.elapsed() < budget);

    // deterministic power-basis pairs are good at both stated shapes
    let t4 = Instant::now();
    let ctx26 = FieldCtx::new(2, 1, 6).unwrap();
    let p1 = subfield_complement_pair(&ctx26, 4, 3, 2).unwrap();
    assert!(is_good(&ctx26, &p1.u, &p1.v, 2).unwrap());
    let ctx24 = FieldCtx::new(2, 1, 4).unwrap();
    let p2 = subfield_complement_pair(&ctx24, 3, 2, 2).unwrap();
    assert!(is_good(&ctx24, &p2.u, &p2.v, 2).unwrap());

    // every 2-dimensional U at (2,4) has an explicit partner defeating weak
    // goodness when r = 2, s = 1
    for u in all_subspaces(&ctx24, 2, ENUM_GUARD).unwrap() {
        let wit = counterexample_pair(&ctx24, &u, 2, 1).unwrap();
        assert!(
            !is_weakly_good(&ctx24, &u, &wit.v, 1).unwrap(),
            "counterexample failed to break weak goodness for U = {u:?}"
        );
    }
    assert!(t4.elapsed() < budget);

    // every construction path must satisfy the verifier on its own
    let t5 = Instant::now();
    let mut verified = 0usize;
    let mut check = |ctx: &FieldCtx, scheme: &RepairScheme| {
        let rep = verify_scheme(ctx, scheme).unwrap();
        assert!(rep.ok, "verifier rejected a constructed scheme: {:?}", rep.violations);
        verified += 1;
    };
    let small_pair = scheme_from_pair(&ctx26, &p1).unwrap();
    check(&ctx26, &small_pair);
    let comp = composite_scheme_subfield(&ctx24, 2, 1).unwrap();
    check(&ctx24, &shorten_scheme(&ctx24, &comp, &[3]).unwrap());
    check(&ctx24, &comp);
    let whole = rs_on_subspace(&ctx24, &Subspace::span(&ctx24, &ctx24.poly_basis().elems), 12, ENUM_GUARD).unwrap();
    check(&ctx24, &subspace_poly_scheme(&ctx24, &whole, 2).unwrap());
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 68));
    let v_new: Vec<Elt> = (0..small_pair.code.n())
        .map(|_| loop {
            let x = random_elt(&ctx26, &mut rng);
            if !ctx26.is_zero(&x) {
                break x;
            }
        })
        .collect();
    let v_old = small_pair.code.col_mults.clone();
    check(&ctx26, &grs_rescale_scheme(&ctx26, &small_pair, &v_old, &v_new).unwrap());
    assert!(t5.elapsed() < budget);

    println!(
        "criterion 6: PASS (rank formula, matrix identity, invariance, duality x20, explicit pairs, counterexamples, {verified} schemes verified)"
    );
}

#[test]
fn criterion_7_trace_duals_exact_and_image_poly_dimensions() {
    // trace-dual Gram identity on every field the suite touches
    let fields = [
        FieldCtx::new(2, 1, 4).unwrap(),
        FieldCtx::new(2, 1, 5).unwrap(),
        FieldCtx::new(2, 1, 6).unwrap(),
        FieldCtx::new(3, 1, 4).unwrap(),
        FieldCtx::new(2, 2, 3).unwrap(),
        FieldCtx::new(2, 1, 8).unwrap(),
        FieldCtx::new(2, 1, 15).unwrap(),
    ];
    for ctx in &fields {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(MASTER_SEED, 71));
        for _ in 0..3 {
            let basis = ctx.make_basis(sample_omega(ctx, ctx.m(), &mut rng).entries).unwrap();
            let dual = ctx.dual_basis(&basis).unwrap();
            for i in 0..ctx.m() {
                for j in 0..ctx.m() {
                    let want = if i == j { Fq(1) } else { Fq(0) };
                    assert_eq!(ctx.trace(&ctx.mul(&dual.elems[i], &basis.elems[j])), want);
                }
            }
        }
    }

    // image polynomials: for every V of dimension m - s at (2,4), the image
    // is exactly V and the kernel has exactly q^s points
    let ctx = FieldCtx::new(2, 1, 4).unwrap();
    for s in [1usize, 2] {
        for v in all_subspaces(&ctx, ctx.m() - s, ENUM_GUARD).unwrap() {
            let f = image_poly(&ctx, &v).unwrap();
            assert_eq!(f.q_degree(), s);
            let mut image = std::collections::HashSet::new();
            let mut kernel = 0usize;
            for val in 0..16u128 {
                let x = ctx.elt_from_value(val);
                let y = f.eval(&ctx, &x);
                assert!(v.contains(&ctx, &y), "image left V");
                if ctx.is_zero(&y) {
                    kernel += 1;
                }
                image.insert(ctx.value(&y));
            }
            assert_eq!(image.len(), 1 << (ctx.m() - s), "image must fill V");
            assert_eq!(kernel, 1 << s, "kernel size must be q^s");
        }
    }

    println!("criterion 7: PASS (Gram identity on 7 fields, image/kernel dimensions exact at m=4)");
}

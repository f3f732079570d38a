use latkit_core::bound::{pe_estimate, required_vnr, VnrDb};
use latkit_core::code::BinaryCode;
use latkit_core::osd::{OsdConfig, OsdDecoder, SoftWord};
use latkit_core::polar::{check_partial_order, dominates, multiplicity_partial_order, polar_generator, PolarSpec};
use latkit_core::sim::{mod_star, mod_star_scalar};
use latkit_core::theta::theta_construction_a;
use latkit_core::{BitMatrix, BitVector, Family};
use num_bigint::BigUint;
use proptest::prelude::*;

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bits)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(bits(cols), rows).prop_map(|r| BitMatrix::from_rows(&r).unwrap())
}

/// Full-rank `k x n` generator with `1 <= k <= n <= max_n`.
fn code(max_n: usize, max_k: usize) -> impl Strategy<Value = BinaryCode> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), 1..=n.min(max_k)))
        .prop_flat_map(|(n, k)| matrix(k, n))
        .prop_filter("full rank", |g| g.rank() == g.rows())
        .prop_map(|g| BinaryCode::new("prop", Family::Custom, g).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Row space membership via rank.
fn spans(g: &BitMatrix, v: &BitVector) -> bool {
    let single = BitMatrix::from_rows(std::slice::from_ref(v)).unwrap();
    g.stack(&single).unwrap().rank() == g.rank()
}

/// Lattice vectors `c + 2z` of squared norm at most `dmax2`, counted by norm.
fn enumerate_lattice(code: &BinaryCode, dmax2: u32) -> Vec<(u32, u64)> {
    let (n, k) = (code.n(), code.k());
    let mut counts = vec![0u64; dmax2 as usize + 1];
    for u in 0..1u64 << k {
        let c = code.encode(&BitVector::from_u64(u, k)).unwrap();
        // Coordinates: |x_j| <= sqrt(dmax2), x_j = c_j (mod 2).
        let choices: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let parity = c.get(j) as i64;
                (-4i64..=4).filter(|x| x.rem_euclid(2) == parity && (x * x) as u32 <= dmax2).collect()
            })
            .collect();
        let mut idx = vec![0usize; n];
        'outer: loop {
            let norm: i64 = (0..n).map(|j| choices[j][idx[j]].pow(2)).sum();
            if norm as u32 <= dmax2 {
                counts[norm as usize] += 1;
            }
            for j in 0..n {
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    continue 'outer;
                }
                idx[j] = 0;
            }
            break;
        }
    }
    counts.into_iter().enumerate().filter(|(_, c)| *c > 0).map(|(d, c)| (d as u32, c)).collect()
}

fn random_up_set(m: u32, seeds: &[usize]) -> Vec<usize> {
    let n = 1usize << m;
    let gens: Vec<usize> = seeds.iter().map(|s| s % n).collect();
    (0..n).filter(|&j| gens.iter().any(|&g| dominates(j, g, m))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn xor_weight_identity(len in 1usize..300, seed in any::<u64>()) {
        let mut rng = seed;
        let mut next = || { rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); rng >> 33 & 1 == 1 };
        let a = BitVector::from_bits((0..len).map(|_| next()));
        let b = BitVector::from_bits((0..len).map(|_| next()));
        let x = &a ^ &b;
        prop_assert_eq!(x.weight(), a.weight() + b.weight() - 2 * a.and(&b).weight());
        prop_assert!((&x ^ &b) == a);
    }

    #[test]
    fn systematize_preserves_row_space(g in (1usize..8, 1usize..70).prop_flat_map(|(r, c)| matrix(r, c))) {
        match g.systematize() {
            Ok((s, perm)) => {
                prop_assert_eq!(g.rank(), g.rows());
                let back: Vec<usize> = {
                    let mut inv = vec![0; perm.len()];
                    for (p, &c) in perm.iter().enumerate() { inv[c] = p; }
                    inv
                };
                let unpermuted = s.permute_columns(&back);
                for r in 0..s.rows() {
                    prop_assert!(spans(&g, &unpermuted.row(r)));
                    for c in 0..s.rows() {
                        prop_assert_eq!(s.get(r, c), r == c);
                    }
                }
                prop_assert_eq!(unpermuted.rank(), g.rank());
            }
            Err(_) => prop_assert!(g.rank() < g.rows()),
        }
    }

    #[test]
    fn encoding_is_linear(code in code(40, 12), seed in any::<u64>()) {
        let k = code.k();
        let u1 = BitVector::from_u64(seed, k.min(64));
        let u2 = BitVector::from_u64(seed.rotate_left(17) ^ 0x5555, k.min(64));
        let sum = &u1 ^ &u2;
        let lhs = code.encode(&sum).unwrap();
        let rhs = &code.encode(&u1).unwrap() ^ &code.encode(&u2).unwrap();
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert!(code.contains(&lhs));
    }

    #[test]
    fn theta_matches_lattice_enumeration(code in code(8, 4)) {
        let (d, tau) = code.brute_force_weight_profile().unwrap();
        let theta = theta_construction_a(code.n(), code.k(), d, tau).unwrap();
        let expected: Vec<(u32, BigUint)> =
            enumerate_lattice(&code, d).into_iter().map(|(d2, c)| (d2, BigUint::from(c))).collect();
        prop_assert_eq!(theta.terms(), &expected[..]);
    }

    #[test]
    fn estimate_decreases_with_vnr(d in prop::sample::select(vec![2u32, 4, 6, 8, 12]), tau in 1u64..1_000_000, lo in -3.0f64..10.0, step in 0.01f64..3.0) {
        let theta = theta_construction_a(128, 100, d, tau).unwrap();
        let a = pe_estimate(&theta, VnrDb(lo), 100.0 / 128.0).unwrap();
        let b = pe_estimate(&theta, VnrDb(lo + step), 100.0 / 128.0).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn inversion_round_trips(d in prop::sample::select(vec![4u32, 6, 8]), tau in 1u64..1_000_000, v in 1.0f64..12.0) {
        let rate = 106.0 / 128.0;
        let theta = theta_construction_a(128, 106, d, tau).unwrap();
        let p = pe_estimate(&theta, VnrDb(v), rate).unwrap();
        prop_assume!(p > 1e-300 && p < 0.5);
        let back = required_vnr(&theta, rate, p).unwrap();
        prop_assert!((back.0 - v).abs() < 1e-4, "{} vs {}", back.0, v);
    }

    #[test]
    fn partial_order_multiplicity_matches_enumeration(m in 1u32..=5, seeds in prop::collection::vec(any::<usize>(), 1..4)) {
        let info = random_up_set(m, &seeds);
        prop_assume!(info.len() <= 20);
        prop_assert!(check_partial_order(&info, m));
        let spec = PolarSpec::new(m, info).unwrap();
        let analytic = (spec.d_c(), multiplicity_partial_order(&spec).unwrap());
        prop_assert_eq!(polar_generator(&spec).unwrap().brute_force_weight_profile().unwrap(), analytic);
    }

    #[test]
    fn osd_order_is_monotone(code in code(16, 8), ys in prop::collection::vec(0.0f64..=1.0, 16)) {
        let y = SoftWord::new(ys[..code.n()].to_vec()).unwrap();
        let mut last = f64::INFINITY;
        for order in 0..=code.k().min(4) {
            let (c, d) = OsdDecoder::new(&code, OsdConfig::new(order)).unwrap().decode_with_distance(&y).unwrap();
            prop_assert!(code.contains(&c));
            prop_assert!(d <= last + 1e-12);
            last = d;
        }
    }

    #[test]
    fn osd_is_permutation_equivariant(
        (code, perm) in code(16, 6).prop_flat_map(|c| { let n = c.n(); (Just(c), permutation(n)) }),
        ys in prop::collection::vec(0.0f64..=1.0, 16),
        order in 0usize..3,
    ) {
        let n = code.n();
        let order = order.min(code.k());
        let y: Vec<f64> = ys[..n].to_vec();
        let permuted_code = BinaryCode::new("perm", Family::Custom, code.generator().permute_columns(&perm)).unwrap();
        let permuted_y: Vec<f64> = perm.iter().map(|&p| y[p]).collect();
        let a = OsdDecoder::new(&code, OsdConfig::new(order)).unwrap().decode(&SoftWord::new(y).unwrap()).unwrap();
        let b = OsdDecoder::new(&permuted_code, OsdConfig::new(order)).unwrap().decode(&SoftWord::new(permuted_y).unwrap()).unwrap();
        for (p, &src) in perm.iter().enumerate() {
            prop_assert_eq!(b.get(p), a.get(src));
        }
    }

    #[test]
    fn full_order_osd_is_maximum_likelihood(code in code(12, 6), ys in prop::collection::vec(0.0f64..=1.0, 12)) {
        let y = SoftWord::new(ys[..code.n()].to_vec()).unwrap();
        let (_, d) = OsdDecoder::new(&code, OsdConfig::new(code.k())).unwrap().decode_with_distance(&y).unwrap();
        let k = code.k();
        let ml = (0..1u64 << k)
            .map(|u| y.distance(&code.encode(&BitVector::from_u64(u, k)).unwrap()))
            .fold(f64::INFINITY, f64::min);
        prop_assert!((d - ml).abs() < 1e-12);
    }

    #[test]
    fn mod_star_range_and_integers(v in -1e6f64..1e6, z in -1000i64..1000) {
        let m = mod_star_scalar(v);
        prop_assert!((0.0..=1.0).contains(&m));
        prop_assert_eq!(mod_star_scalar(z as f64), z.rem_euclid(2) as f64);
        let folded = mod_star(&[v, z as f64]);
        prop_assert_eq!(folded.values()[0], m);
    }
}

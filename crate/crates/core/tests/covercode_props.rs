use pirac::covercode::{
    build_code, coset_weight, encode_storage, hamming_parity, max_tau_coset_weight,
    sum_augmented_identity, CoveringCode,
};
use pirac::gf2::{BitMatrix, BitVec};
use proptest::prelude::*;

/// Full-row-rank `r x len` parity-check matrices.
fn parity(
    r: std::ops::RangeInclusive<usize>,
    len: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = BitMatrix> {
    (r, len)
        .prop_filter("need len > r", |(r, l)| l > r)
        .prop_flat_map(|(r, l)| {
            prop::collection::vec(0u64..(1 << r), l).prop_map(move |cols| (r, cols))
        })
        .prop_map(|(r, cols)| {
            let cols: Vec<BitVec> = cols.iter().map(|&c| BitVec::from_u64(c, r)).collect();
            BitMatrix::from_columns(r, &cols).unwrap()
        })
        .prop_filter("full row rank", |h| h.rank() == h.rows())
}

fn column_values(h: &BitMatrix) -> Vec<u64> {
    h.columns()
        .iter()
        .map(|c| (0..c.len()).fold(0, |acc, i| acc | (c.get(i) as u64) << i))
        .collect()
}

/// For every syndrome, the first error vector in (weight, numeric value)
/// order that produces it, found by scanning all `2^len` vectors.
fn brute_leaders(h: &BitMatrix) -> Vec<u64> {
    let cols = column_values(h);
    let len = cols.len();
    let mut order: Vec<u64> = (0..1u64 << len).collect();
    order.sort_by_key(|&e| (e.count_ones(), e));
    let mut leader = vec![u64::MAX; 1 << h.rows()];
    for e in order {
        let s = (0..len)
            .filter(|&j| e >> j & 1 == 1)
            .fold(0, |acc, j| acc ^ cols[j]) as usize;
        if leader[s] == u64::MAX {
            leader[s] = e;
        }
    }
    leader
}

/// Smallest number of columns whose span contains every syndrome in `set`.
fn brute_coset_weight(h: &BitMatrix, set: &[u64]) -> usize {
    let cols = column_values(h);
    let len = cols.len();
    (0..1u64 << len)
        .filter(|&sub| {
            let mut span = vec![false; 1 << h.rows()];
            span[0] = true;
            for j in (0..len).filter(|&j| sub >> j & 1 == 1) {
                let reached: Vec<usize> = (0..span.len()).filter(|&v| span[v]).collect();
                for v in reached {
                    span[v ^ cols[j] as usize] = true;
                }
            }
            set.iter().all(|&s| span[s as usize])
        })
        .map(|sub| sub.count_ones() as usize)
        .min()
        .unwrap()
}

fn brute_max_tau(h: &BitMatrix, tau: usize) -> usize {
    let q = 1u64 << h.rows();
    let mut worst = 0;
    let mut set = Vec::new();
    fn rec(h: &BitMatrix, q: u64, tau: usize, start: u64, set: &mut Vec<u64>, worst: &mut usize) {
        if set.len() == tau {
            *worst = (*worst).max(brute_coset_weight(h, set));
            return;
        }
        for s in start..q {
            set.push(s);
            rec(h, q, tau, s + 1, set, worst);
            set.pop();
        }
    }
    rec(h, q, tau, 0, &mut set, &mut worst);
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leaders_are_first_minimal_hits(h in parity(1..=6, 2..=12)) {
        let code = build_code(&h).unwrap();
        let want = brute_leaders(&h);
        let mut radius = 0;
        for (s, &e) in want.iter().enumerate() {
            let got: u64 = code.leader_support(s).iter().map(|&j| 1u64 << j).sum();
            prop_assert_eq!(got, e, "syndrome {}", s);
            prop_assert_eq!(code.leader_weight(s), e.count_ones() as usize);
            radius = radius.max(e.count_ones() as usize);
        }
        prop_assert_eq!(code.radius(), radius);
    }

    #[test]
    fn answers_equal_direct_products(h in parity(1..=6, 2..=12), seed in any::<u64>()) {
        let code = build_code(&h).unwrap().into_shared();
        let r = h.rows();
        let t = 1 + (seed % 70) as usize;
        let x = BitMatrix::from_rows(
            r,
            (0..t).map(|i| BitVec::from_fn(r, |j| (seed.rotate_left((3 * i + j) as u32) ^ i as u64) & 1 == 1)).collect(),
        ).unwrap();
        let storage = encode_storage(&x, code.clone()).unwrap();
        for s in 0..1u64 << r {
            let s = BitVec::from_u64(s, r);
            let a = storage.answer_query(&s).unwrap();
            prop_assert_eq!(&a.value, &x.mat_vec_mul(&s).unwrap());
            prop_assert!(a.accessed.len() <= code.radius());
            prop_assert!(a.accessed.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn tau_weights_match_brute_force(h in parity(1..=3, 2..=7), tau in 1usize..=3) {
        prop_assume!(tau <= 1 << h.rows());
        prop_assert_eq!(max_tau_coset_weight(&h, tau).unwrap(), brute_max_tau(&h, tau));
    }

    #[test]
    fn tau_weights_are_monotone_and_bounded(h in parity(1..=4, 2..=10)) {
        let r = h.rows();
        let code = build_code(&h).unwrap();
        let mut prev = 0;
        for tau in 1..=3.min(1 << r) {
            let w = max_tau_coset_weight(&h, tau).unwrap();
            if tau == 1 {
                prop_assert_eq!(w, code.radius());
            }
            prop_assert!(w >= prev);
            prop_assert!(w <= r);
            prev = w;
        }
    }

    #[test]
    fn coset_weight_of_a_set_matches_brute_force(h in parity(1..=4, 2..=9), picks in prop::collection::vec(any::<u64>(), 1..4)) {
        let r = h.rows();
        let mut set: Vec<u64> = picks.iter().map(|p| p % (1 << r)).collect();
        set.sort_unstable();
        set.dedup();
        let vecs: Vec<BitVec> = set.iter().map(|&s| BitVec::from_u64(s, r)).collect();
        prop_assert_eq!(coset_weight(&h, &vecs).unwrap(), brute_coset_weight(&h, &set));
    }

    #[test]
    fn direct_sum_adds_radii(a in parity(1..=4, 2..=7), b in parity(1..=4, 2..=7)) {
        let (ca, cb) = (build_code(&a).unwrap(), build_code(&b).unwrap());
        let sum = CoveringCode::direct_sum(&ca, &cb).unwrap();
        prop_assert_eq!(sum.radius(), ca.radius() + cb.radius());
        prop_assert_eq!(sum.redundancy(), a.rows() + b.rows());
        prop_assert_eq!(sum.length(), a.cols() + b.cols());
    }

    #[test]
    fn text_format_round_trips(h in parity(1..=6, 2..=12)) {
        let code = build_code(&h).unwrap();
        let back = CoveringCode::from_text(&code.to_text()).unwrap();
        prop_assert_eq!(back.parity_check(), code.parity_check());
        prop_assert_eq!(back.radius(), code.radius());
    }
}

#[test]
fn hamming_and_augmented_radii() {
    for m in 2..=6 {
        assert_eq!(build_code(&hamming_parity(m).unwrap()).unwrap().radius(), 1);
    }
    for r in 1..=8 {
        let code = build_code(&sum_augmented_identity(r).unwrap()).unwrap();
        assert_eq!(code.radius(), r.div_ceil(2));
    }
}

#[test]
fn tampered_radius_is_rejected() {
    let code = build_code(&hamming_parity(3).unwrap()).unwrap();
    let text = code.to_text().replacen("3 7 1", "3 7 2", 1);
    assert!(CoveringCode::from_text(&text).is_err());
}

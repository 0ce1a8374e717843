use pirac::gf2::{BitMatrix, BitVec};
use proptest::prelude::*;

fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
    prop::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

fn matrix(
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> impl Strategy<Value = BitMatrix> {
    (rows, cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
            BitMatrix::from_rows(c, rows.iter().map(|b| BitVec::from_bools(b)).collect()).unwrap()
        })
    })
}

fn dense(m: &BitMatrix) -> Vec<Vec<bool>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Rank by elimination over `Vec<Vec<bool>>`, sharing no code with the library.
fn naive_rank(mut a: Vec<Vec<bool>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #[test]
    fn mat_vec_mul_matches_naive((m, y) in matrix(1..12, 1..130).prop_flat_map(|m| {
        let c = m.cols();
        (Just(m), bitvec(c))
    })) {
        let got = m.mat_vec_mul(&y).unwrap();
        let d = dense(&m);
        for (i, row) in d.iter().enumerate() {
            let want = row.iter().enumerate().fold(false, |acc, (j, &b)| acc ^ (b & y.get(j)));
            prop_assert_eq!(got.get(i), want);
        }
    }

    #[test]
    fn rank_matches_naive(m in matrix(1..10, 1..80)) {
        prop_assert_eq!(m.rank(), naive_rank(dense(&m)));
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_any_agrees_with_rank((h, s) in matrix(1..8, 1..14).prop_flat_map(|m| {
        let r = m.rows();
        (Just(m), bitvec(r))
    })) {
        let augmented = h.hstack(&BitMatrix::from_columns(h.rows(), std::slice::from_ref(&s)).unwrap()).unwrap();
        let solvable = augmented.rank() == h.rank();
        match h.solve_any(&s).unwrap() {
            Some(e) => {
                prop_assert!(solvable);
                prop_assert_eq!(h.mat_vec_mul(&e).unwrap(), s);
            }
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn systematic_form_keeps_row_space(h in matrix(1..7, 7..16)) {
        prop_assume!(h.rank() == h.rows());
        let (sys, perm) = h.systematic_form().unwrap();
        let r = h.rows();
        for i in 0..r {
            for j in 0..r {
                prop_assert_eq!(sys.get(i, j), i == j);
            }
        }
        // undo the column permutation; the row space must be that of h
        let mut inverse = vec![0; perm.len()];
        for (j, &orig) in perm.iter().enumerate() {
            inverse[orig] = j;
        }
        let back = sys.select_columns(&inverse);
        let stacked = BitMatrix::from_rows(
            h.cols(),
            h.row_vecs().iter().chain(back.row_vecs()).cloned().collect(),
        )
        .unwrap();
        prop_assert_eq!(stacked.rank(), r);
        prop_assert_eq!(back.rank(), r);
    }

    #[test]
    fn text_round_trip(m in matrix(1..9, 1..70)) {
        prop_assert_eq!(BitMatrix::parse_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn bitvec_byte_and_split_round_trip(v in (1usize..200).prop_flat_map(bitvec), parts in 1usize..5) {
        prop_assert_eq!(BitVec::from_bytes(&v.to_bytes(), 0, v.len()).unwrap(), v.clone());
        let s: BitVec = v.to_string().parse().unwrap();
        prop_assert_eq!(&s, &v);
        if v.len() % parts == 0 {
            let pieces = v.split(parts).unwrap();
            prop_assert_eq!(BitVec::concat(&pieces), v);
        } else {
            prop_assert!(v.split(parts).is_err());
        }
    }

    #[test]
    fn xor_is_bitwise((a, b) in (1usize..150).prop_flat_map(|n| (bitvec(n), bitvec(n)))) {
        let c = &a ^ &b;
        for i in 0..a.len() {
            prop_assert_eq!(c.get(i), a.get(i) ^ b.get(i));
        }
        prop_assert_eq!(c.weight(), (0..a.len()).filter(|&i| a.get(i) != b.get(i)).count());
    }
}

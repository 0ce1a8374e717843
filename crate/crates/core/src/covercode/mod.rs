//! Linear covering codes used to compress answers to linear queries.
//!
//! A full-row-rank parity-check matrix `H` (r x l) is turned into a
//! [`CoveringCode`] by sweeping error vectors in increasing weight and
//! recording, for every one of the `2^r` syndromes, the first vector that
//! reaches it. The largest recorded weight is the covering radius. A server
//! holding `z_i = x * h_i` can then answer any query `x * s` by summing the
//! symbols on the support of the leader of `s`.

mod search;
mod storage;
mod tau;

pub use search::{random_search, SearchOutcome};
pub use storage::{encode_storage, Answer, EncodedStorage};
pub use tau::{coset_weight, max_tau_coset_weight, TAU_WORK_BOUND};

use std::fmt;
use std::sync::Arc;

use crate::combin::colex_for_each;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Largest redundancy for which a full coset-leader table is built.
pub const TABLE_LIMIT: usize = 24;

const NO_COLUMN: u16 = u16::MAX;
const UNSET: u8 = u8::MAX;

/// A parity-check matrix together with its verified covering radius and a
/// complete coset-leader table.
///
/// Leaders are stored implicitly: for each syndrome we keep the leader's
/// weight and its highest column index. Removing that column from the leader
/// leaves the leader of the reduced syndrome, so the support is recovered by
/// walking back to the zero syndrome.
#[derive(Clone)]
pub struct CoveringCode {
    h: BitMatrix,
    col_syndromes: Vec<u32>,
    radius: usize,
    leader_last: Vec<u16>,
    leader_weight: Vec<u8>,
}

impl CoveringCode {
    /// Builds the code and its leader table.
    ///
    /// Within each weight class the candidate error vectors are visited in
    /// increasing numeric value (`sum of 2^j` over the support), and the first
    /// vector to hit a syndrome becomes its leader.
    pub fn build(h: &BitMatrix) -> Result<Self> {
        let r = h.rows();
        let len = h.cols();
        if r > TABLE_LIMIT {
            return Err(Error::TableLimit {
                r,
                limit: TABLE_LIMIT,
            });
        }
        if len >= NO_COLUMN as usize {
            return Err(Error::param(format!("code length {len} is too large")));
        }
        let rank = h.rank();
        if rank != r {
            return Err(Error::RankDeficient { rank, rows: r });
        }

        let col_syndromes: Vec<u32> = (0..len).map(|j| syndrome_index(&h.col(j))).collect();
        let size = 1usize << r;
        let mut leader_last = vec![NO_COLUMN; size];
        let mut leader_weight = vec![UNSET; size];
        leader_weight[0] = 0;
        let mut remaining = size - 1;
        let mut radius = 0;

        for w in 1..=len {
            if remaining == 0 {
                break;
            }
            colex_for_each(len, w, |subset| {
                let s = subset.iter().fold(0u32, |acc, &j| acc ^ col_syndromes[j]) as usize;
                if leader_weight[s] == UNSET {
                    leader_weight[s] = w as u8;
                    leader_last[s] = subset[w - 1] as u16;
                    remaining -= 1;
                    radius = w;
                }
                remaining > 0
            });
        }
        debug_assert_eq!(remaining, 0, "full-rank matrix must reach every syndrome");

        Ok(CoveringCode {
            h: h.clone(),
            col_syndromes,
            radius,
            leader_last,
            leader_weight,
        })
    }

    /// The code with no parity checks and no columns (`r = l = 0`).
    pub fn trivial() -> Self {
        Self::build(&BitMatrix::zeros(0, 0)).expect("empty matrix has full rank")
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// Redundancy `r`.
    pub fn redundancy(&self) -> usize {
        self.h.rows()
    }

    /// Code length `l`: the number of stored symbols.
    pub fn length(&self) -> usize {
        self.h.cols()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Syndrome of column `j` as a packed index (bit `i` = row `i`).
    pub fn column_syndrome(&self, j: usize) -> u32 {
        self.col_syndromes[j]
    }

    /// Weight of the leader of the syndrome with packed index `s`.
    pub fn leader_weight(&self, s: usize) -> usize {
        self.leader_weight[s] as usize
    }

    /// Support of the coset leader for packed syndrome index `s`, ascending.
    pub fn leader_support(&self, s: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leader_weight[s] as usize);
        let mut cur = s;
        while cur != 0 {
            let j = self.leader_last[cur] as usize;
            out.push(j);
            cur ^= self.col_syndromes[j] as usize;
        }
        out.reverse();
        out
    }

    /// Coset leader of `s` as a length-`l` vector.
    pub fn leader(&self, s: &BitVec) -> Result<BitVec> {
        if s.len() != self.redundancy() {
            return Err(Error::dim(format!(
                "syndrome of length {} for redundancy {}",
                s.len(),
                self.redundancy()
            )));
        }
        let mut y = BitVec::zeros(self.length());
        for j in self.leader_support(syndrome_index(s) as usize) {
            y.set(j, true);
        }
        Ok(y)
    }

    /// Block-diagonal combination; radii add.
    pub fn direct_sum(a: &CoveringCode, b: &CoveringCode) -> Result<CoveringCode> {
        let r = a.redundancy() + b.redundancy();
        if r > TABLE_LIMIT {
            return Err(Error::TableLimit {
                r,
                limit: TABLE_LIMIT,
            });
        }
        Self::build(&BitMatrix::block_diag(&a.h, &b.h))
    }

    /// Text export: a header line `r l radius` followed by the matrix rows.
    pub fn to_text(&self) -> String {
        format!(
            "{} {} {}\n{}",
            self.redundancy(),
            self.length(),
            self.radius,
            self.h.to_text()
        )
    }

    /// Parses the text export, rebuilding the leader table and rejecting a
    /// header whose radius does not match the verified one.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|f| {
                f.parse()
                    .map_err(|_| Error::Parse(format!("bad header field {f:?}")))
            })
            .collect::<Result<_>>()?;
        let [r, len, claimed] = fields[..] else {
            return Err(Error::Parse(format!(
                "header must be `r l radius`, got {header:?}"
            )));
        };
        let body: Vec<&str> = lines.collect();
        let h = if body.is_empty() {
            BitMatrix::zeros(0, len)
        } else {
            BitMatrix::parse_text(&body.join("\n"))?
        };
        if h.rows() != r || h.cols() != len {
            return Err(Error::dim(format!(
                "header says {r}x{len}, matrix is {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let code = Self::build(&h)?;
        if code.radius != claimed {
            return Err(Error::RadiusMismatch {
                claimed,
                verified: code.radius,
            });
        }
        Ok(code)
    }

    pub fn into_shared(self) -> Arc<CoveringCode> {
        Arc::new(self)
    }
}

impl fmt::Debug for CoveringCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoveringCode")
            .field("r", &self.redundancy())
            .field("len", &self.length())
            .field("radius", &self.radius)
            .finish()
    }
}

/// Shorthand for [`CoveringCode::build`].
pub fn build_code(h: &BitMatrix) -> Result<CoveringCode> {
    CoveringCode::build(h)
}

/// Packs a syndrome of at most 32 bits into an index, bit `i` = position `i`.
pub fn syndrome_index(s: &BitVec) -> u32 {
    assert!(s.len() <= 32, "syndrome longer than 32 bits");
    s.to_u64().expect("checked length") as u32
}

/// Parity-check matrix of the binary Hamming code of redundancy `m`.
///
/// Column `j` (1-based) is `j` written in binary with the most significant
/// bit in row 0.
pub fn hamming_parity(m: usize) -> Result<BitMatrix> {
    if !(2..=16).contains(&m) {
        return Err(Error::param(format!(
            "hamming redundancy m={m} must be in 2..=16"
        )));
    }
    let n = (1usize << m) - 1;
    let mut h = BitMatrix::zeros(m, n);
    for j in 0..n {
        let value = j + 1;
        for i in 0..m {
            if (value >> (m - 1 - i)) & 1 == 1 {
                h.set(i, j, true);
            }
        }
    }
    Ok(h)
}

/// Parity-check matrix of the extended Hamming code: the Hamming matrix with
/// a zero column appended, then an all-ones parity row.
pub fn extended_hamming_parity(m: usize) -> Result<BitMatrix> {
    let base = hamming_parity(m)?;
    let n = base.cols() + 1;
    let mut rows: Vec<BitVec> = base
        .row_vecs()
        .iter()
        .map(|r| BitVec::concat([r, &BitVec::zeros(1)]))
        .collect();
    rows.push(BitVec::ones(n));
    BitMatrix::from_rows(n, rows)
}

/// `[I_r | 1]`: the identity plus one column holding the sum of all symbols.
pub fn sum_augmented_identity(r: usize) -> Result<BitMatrix> {
    if r == 0 {
        return Err(Error::param("sum-augmented identity needs r >= 1"));
    }
    BitMatrix::identity(r).hstack(&BitMatrix::from_columns(r, &[BitVec::ones(r)])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_code_leader_is_syndrome() {
        let code = build_code(&BitMatrix::identity(5)).unwrap();
        assert_eq!(code.radius(), 5);
        for s in 0..32u64 {
            let sv = BitVec::from_u64(s, 5);
            assert_eq!(code.leader(&sv).unwrap(), sv);
        }
    }

    #[test]
    fn hamming_radius_one() {
        for m in 2..=5 {
            let code = build_code(&hamming_parity(m).unwrap()).unwrap();
            assert_eq!(code.radius(), 1, "m={m}");
            assert_eq!(code.length(), (1 << m) - 1);
        }
    }

    #[test]
    fn hamming_m2_columns() {
        let h = hamming_parity(2).unwrap();
        assert_eq!(h.to_text(), "011\n101\n");
        assert!(hamming_parity(1).is_err());
    }

    #[test]
    fn extended_hamming_shape_rank_radius() {
        for m in 2..=4 {
            let h = extended_hamming_parity(m).unwrap();
            assert_eq!((h.rows(), h.cols()), (m + 1, 1 << m));
            assert_eq!(h.rank(), m + 1);
            assert_eq!(build_code(&h).unwrap().radius(), 2, "m={m}");
        }
        assert!(extended_hamming_parity(1).is_err());
    }

    #[test]
    fn sum_augmented_radii() {
        let h = sum_augmented_identity(2).unwrap();
        assert_eq!(h.to_text(), "101\n011\n");
        // weight-w syndromes cost min(w, r - w + 1)
        for (r, expect) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (6, 3)] {
            let code = build_code(&sum_augmented_identity(r).unwrap()).unwrap();
            assert_eq!(code.radius(), expect, "r={r}");
        }
        assert!(sum_augmented_identity(0).is_err());
    }

    #[test]
    fn direct_sums() {
        let ham = build_code(&hamming_parity(3).unwrap()).unwrap();
        let both = CoveringCode::direct_sum(&ham, &ham).unwrap();
        assert_eq!(
            (both.length(), both.redundancy(), both.radius()),
            (14, 6, 2)
        );

        let same = CoveringCode::direct_sum(&ham, &CoveringCode::trivial()).unwrap();
        assert_eq!(same.parity_check(), ham.parity_check());
        assert_eq!(same.radius(), 1);

        let i2 = build_code(&BitMatrix::identity(2)).unwrap();
        let i3 = build_code(&BitMatrix::identity(3)).unwrap();
        assert_eq!(CoveringCode::direct_sum(&i2, &i3).unwrap().radius(), 5);
    }

    #[test]
    fn direct_sum_limit() {
        let big = build_code(&BitMatrix::identity(13)).unwrap();
        assert!(matches!(
            CoveringCode::direct_sum(&big, &big),
            Err(Error::TableLimit { r: 26, limit: 24 })
        ));
    }

    #[test]
    fn build_errors() {
        let deficient: BitMatrix = "11\n11".parse().unwrap();
        assert!(matches!(
            build_code(&deficient),
            Err(Error::RankDeficient { .. })
        ));
        assert!(matches!(
            build_code(&BitMatrix::identity(25)),
            Err(Error::TableLimit { r: 25, limit: 24 })
        ));
    }

    #[test]
    fn leader_tie_break_prefers_low_columns() {
        // columns: e0, e1, e0+e1; syndrome 11 is reachable by {2} (weight 1)
        let code = build_code(&"101\n011".parse().unwrap()).unwrap();
        assert_eq!(code.leader_support(0b11), vec![2]);
        // [I_2 | I_2]: e0 is reachable by column 0 or 2; column 0 wins
        let dup = build_code(&"1010\n0101".parse().unwrap()).unwrap();
        assert_eq!(dup.leader_support(0b01), vec![0]);
        assert_eq!(dup.leader_support(0b11), vec![0, 1]);
    }

    #[test]
    fn text_round_trip_and_radius_check() {
        let code = build_code(&hamming_parity(3).unwrap()).unwrap();
        let text = code.to_text();
        assert!(text.starts_with("3 7 1\n"));
        let back = CoveringCode::from_text(&text).unwrap();
        assert_eq!(back.parity_check(), code.parity_check());

        let lie = text.replacen("3 7 1", "3 7 2", 1);
        assert_eq!(
            CoveringCode::from_text(&lie).unwrap_err(),
            Error::RadiusMismatch {
                claimed: 2,
                verified: 1
            }
        );
        assert!(CoveringCode::from_text("3 8 1\n0001111\n0110011\n1010101").is_err());
        assert!(CoveringCode::from_text("").is_err());
    }
}

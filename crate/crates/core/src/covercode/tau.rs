//! Generalized (tau-) coset weights.
//!
//! The tau-coset weight of a set of syndromes is the fewest columns of `H`
//! whose span contains every syndrome in the set. `R_tau` is the maximum of
//! that over all sets of `tau` distinct syndromes; `R_1` is the covering radius.

use std::collections::{HashMap, HashSet};

use crate::combin::{binomial, binomial_prefix, colex_for_each};
use crate::covercode::syndrome_index;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Work bound for [`max_tau_coset_weight`], in elementary span tests.
pub const TAU_WORK_BOUND: f64 = 1e9;

/// Incremental XOR basis kept in echelon form by leading bit.
#[derive(Default)]
struct XorBasis {
    rows: Vec<(usize, BitVec)>,
}

impl XorBasis {
    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v ^= row;
            }
        }
        v
    }

    fn insert(&mut self, v: &BitVec) {
        let v = self.reduce(v);
        if let Some(&pivot) = v.support().first() {
            self.rows.push((pivot, v));
        }
    }

    fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Minimum number of columns of `h` whose span contains every given syndrome.
///
/// Column subsets are enumerated by increasing size, starting at the
/// dimension of the span of the syndromes (no smaller set can work).
pub fn coset_weight(h: &BitMatrix, syndromes: &[BitVec]) -> Result<usize> {
    if syndromes.is_empty() {
        return Err(Error::param("coset weight needs at least one syndrome"));
    }
    if let Some(s) = syndromes.iter().find(|s| s.len() != h.rows()) {
        return Err(Error::dim(format!(
            "syndrome of length {} for {} rows",
            s.len(),
            h.rows()
        )));
    }
    if syndromes.iter().collect::<HashSet<_>>().len() != syndromes.len() {
        return Err(Error::param("syndromes must be distinct"));
    }

    let columns = h.columns();
    let mut full = XorBasis::default();
    columns.iter().for_each(|c| full.insert(c));
    if let Some(s) = syndromes.iter().find(|s| !full.contains(s)) {
        return Err(Error::param(format!(
            "syndrome {s} is outside the column span"
        )));
    }

    let mut target = XorBasis::default();
    syndromes.iter().for_each(|s| target.insert(s));
    let lower = target.rows.len();

    for k in lower..=columns.len() {
        let mut found = false;
        colex_for_each(columns.len(), k, |subset| {
            let mut basis = XorBasis::default();
            subset.iter().for_each(|&j| basis.insert(&columns[j]));
            found = syndromes.iter().all(|s| basis.contains(s));
            !found
        });
        if found {
            return Ok(k);
        }
    }
    unreachable!("all syndromes lie in the full column span")
}

/// `R_tau`: the largest tau-coset weight over all sets of `tau` distinct
/// syndromes (the zero syndrome included).
///
/// Every span reachable by `k` columns is tabulated once, tagged with the
/// smallest `k` that reaches it; each syndrome set then takes the smallest
/// tag among spans that contain it.
pub fn max_tau_coset_weight(h: &BitMatrix, tau: usize) -> Result<usize> {
    let r = h.rows();
    let len = h.cols();
    if tau == 0 {
        return Err(Error::param("tau must be at least 1"));
    }
    if r >= 32 || tau as u64 > 1u64 << r {
        return Err(Error::param(format!(
            "tau={tau} exceeds the {} syndromes of a redundancy-{r} code",
            if r >= 32 {
                "many".to_string()
            } else {
                (1u64 << r).to_string()
            }
        )));
    }
    let needed = binomial(1u64 << r, tau as u64) * binomial_prefix(len as u64, r as u64);
    if needed > TAU_WORK_BOUND {
        return Err(Error::Feasibility {
            what: format!("R_tau for tau={tau}, r={r}, len={len}"),
            needed,
            bound: TAU_WORK_BOUND,
        });
    }
    let rank = h.rank();
    if rank != r {
        return Err(Error::RankDeficient { rank, rows: r });
    }

    let spans = spans_by_size(h);
    let size = 1usize << r;
    let mut worst = 0;
    colex_for_each(size, tau, |set| {
        let level = spans
            .iter()
            .find(|(span, _)| set.iter().all(|&s| span.contains(s)))
            .map(|&(_, level)| level)
            .expect("the full space contains every set");
        worst = worst.max(level);
        true
    });
    Ok(worst)
}

/// Membership bitset over all `2^r` syndromes.
#[derive(Clone, PartialEq, Eq, Hash)]
struct SpanSet(Vec<u64>);

impl SpanSet {
    fn singleton_zero(r: usize) -> Self {
        let mut words = vec![0u64; (1usize << r).div_ceil(64)];
        words[0] = 1;
        SpanSet(words)
    }

    fn contains(&self, s: usize) -> bool {
        self.0[s / 64] >> (s % 64) & 1 == 1
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    wi * 64 + tz
                })
            })
        })
    }

    fn extend(&self, c: usize) -> SpanSet {
        let mut out = self.clone();
        for m in self.members() {
            let x = m ^ c;
            out.0[x / 64] |= 1 << (x % 64);
        }
        out
    }
}

/// All distinct column spans, each with the fewest columns that produce it,
/// ordered by that count.
fn spans_by_size(h: &BitMatrix) -> Vec<(SpanSet, usize)> {
    let r = h.rows();
    let cols: Vec<usize> = h
        .columns()
        .iter()
        .map(|c| syndrome_index(c) as usize)
        .collect();
    let mut seen: HashMap<SpanSet, usize> = HashMap::new();
    let mut ordered = Vec::new();
    let zero = SpanSet::singleton_zero(r);
    seen.insert(zero.clone(), 0);
    ordered.push((zero.clone(), 0));
    let mut frontier = vec![zero];
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for span in &frontier {
            for &c in &cols {
                if span.contains(c) {
                    continue;
                }
                let grown = span.extend(c);
                if !seen.contains_key(&grown) {
                    seen.insert(grown.clone(), level);
                    ordered.push((grown.clone(), level));
                    next.push(grown);
                }
            }
        }
        frontier = next;
    }
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covercode::{build_code, extended_hamming_parity, hamming_parity};

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn single_syndrome_matches_leader_weight() {
        let h = extended_hamming_parity(3).unwrap();
        let code = build_code(&h).unwrap();
        for s in 0..16u64 {
            let sv = BitVec::from_u64(s, 4);
            assert_eq!(
                coset_weight(&h, std::slice::from_ref(&sv)).unwrap(),
                code.leader_weight(s as usize),
                "s={sv}"
            );
        }
    }

    #[test]
    fn hamming_pairs_and_triples() {
        let h = hamming_parity(3).unwrap();
        assert_eq!(coset_weight(&h, &[bv("001"), bv("010")]).unwrap(), 2);
        assert_eq!(
            coset_weight(&h, &[bv("001"), bv("010"), bv("011")]).unwrap(),
            2
        );
        assert_eq!(coset_weight(&h, &[bv("000")]).unwrap(), 0);
    }

    #[test]
    fn coset_weight_errors() {
        let h = hamming_parity(3).unwrap();
        assert!(coset_weight(&h, &[]).is_err());
        assert!(coset_weight(&h, &[bv("01")]).is_err());
        assert!(coset_weight(&h, &[bv("011"), bv("011")]).is_err());
        let deficient: BitMatrix = "10\n00".parse().unwrap();
        assert!(coset_weight(&deficient, &[bv("01")]).is_err());
    }

    #[test]
    fn hamming_r_tau_equals_tau() {
        let h = hamming_parity(3).unwrap();
        for tau in 1..=3 {
            assert_eq!(max_tau_coset_weight(&h, tau).unwrap(), tau);
        }
    }

    #[test]
    fn extended_hamming_r_tau_is_tau_plus_one() {
        let h = extended_hamming_parity(3).unwrap();
        for tau in 1..=3 {
            assert_eq!(max_tau_coset_weight(&h, tau).unwrap(), tau + 1);
        }
    }

    #[test]
    fn r_tau_of_all_syndromes_is_rank() {
        let h = hamming_parity(3).unwrap();
        assert_eq!(max_tau_coset_weight(&h, 8).unwrap(), 3);
        assert!(max_tau_coset_weight(&h, 9).is_err());
        assert!(max_tau_coset_weight(&h, 0).is_err());
    }

    #[test]
    fn feasibility_guard() {
        let h = hamming_parity(6).unwrap();
        let err = max_tau_coset_weight(&h, 3).unwrap_err();
        assert!(err.is_feasibility(), "{err}");
    }
}

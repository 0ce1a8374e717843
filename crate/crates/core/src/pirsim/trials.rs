use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covercode::CoveringCode;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pirsim::{Randomness, SchemeId};

/// Draws uniform randomness for one run of `scheme`.
pub fn draw_randomness<R: Rng>(scheme: SchemeId, n: usize, m: usize, rng: &mut R) -> Randomness {
    let mut vector = |len: usize| BitVec::from_fn(len, |_| rng.random::<bool>());
    match scheme {
        SchemeId::TwoServer => Randomness::Vector(vector(m)),
        SchemeId::Replicated => Randomness::Vector(vector((n - 1) * m)),
        SchemeId::Mds32 => {
            let a = vector(m);
            Randomness::Pair(a, vector(m))
        }
        SchemeId::Bep => Randomness::Shifts((0..m).map(|_| rng.random_range(0..n)).collect()),
    }
}

/// Access statistics for the query shape of an `(N, K)` MDS-coded scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeStats {
    pub trials: usize,
    /// Worst and mean total access over all servers, in units of `ML` bits,
    /// counting each query separately (`sum`) or overlapping reads once (`union`).
    pub worst_sum: f64,
    pub worst_union: f64,
    pub mean_sum: f64,
    pub mean_union: f64,
}

/// Measures access when each of `N` servers answers `K` uniformly random
/// queries over `r = M (N - K)` coded substrings of `L / (K (N - K))` bits.
///
/// Only the access pattern is modelled; no file is reconstructed.
pub fn mds_query_shape(
    n: usize,
    k: usize,
    code: &CoveringCode,
    trials: usize,
    seed: u64,
) -> Result<ShapeStats> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= K < N, got K={k}, N={n}")));
    }
    let r = code.redundancy();
    if r == 0 || !r.is_multiple_of(n - k) {
        return Err(Error::param(format!(
            "redundancy {r} is not M (N - K) for N={n}, K={k}"
        )));
    }
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    // one substring is 1 / (K r) of the database
    let unit = 1.0 / (k * r) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = (1u64 << r) - 1;
    let (mut worst_sum, mut worst_union, mut total_sum, mut total_union) =
        (0.0f64, 0.0f64, 0.0, 0.0);
    for _ in 0..trials {
        let mut sum = 0usize;
        let mut union = 0usize;
        for _ in 0..n {
            let mut seen = vec![false; code.length()];
            for _ in 0..k {
                let s = (rng.random::<u64>() & mask) as usize;
                for j in code.leader_support(s) {
                    sum += 1;
                    if !seen[j] {
                        seen[j] = true;
                        union += 1;
                    }
                }
            }
        }
        let (s, u) = (sum as f64 * unit, union as f64 * unit);
        worst_sum = worst_sum.max(s);
        worst_union = worst_union.max(u);
        total_sum += s;
        total_union += u;
    }
    Ok(ShapeStats {
        trials,
        worst_sum,
        worst_union,
        mean_sum: total_sum / trials as f64,
        mean_union: total_union / trials as f64,
    })
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pirsim::schemes::scheme_queries;
use crate::pirsim::{Query, Randomness, SchemeId};

/// Largest randomness space the audit will enumerate.
pub const AUDIT_LIMIT: u64 = 1 << 20;

/// Size of the scheme's randomness space for `N` servers and `M` files.
pub fn randomness_space(scheme: SchemeId, n: usize, m: usize) -> Option<u64> {
    let bits = |b: usize| (b < 64).then(|| 1u64 << b);
    match scheme {
        SchemeId::TwoServer => bits(m),
        SchemeId::Replicated => bits(n.checked_sub(1)? * m),
        SchemeId::Mds32 => bits(2 * m),
        SchemeId::Bep => (n as u64).checked_pow(m as u32),
    }
}

/// Every randomness value of the scheme, in a fixed order.
pub fn enumerate_randomness(
    scheme: SchemeId,
    n: usize,
    m: usize,
    limit: u64,
) -> Result<Vec<Randomness>> {
    let size = randomness_space(scheme, n, m)
        .filter(|&s| s <= limit)
        .ok_or_else(|| Error::Feasibility {
            what: format!("randomness space of {scheme} with N={n}, M={m}"),
            needed: randomness_space(scheme, n, m).map_or(f64::INFINITY, |s| s as f64),
            bound: limit as f64,
        })?;
    Ok((0..size)
        .map(|i| match scheme {
            SchemeId::TwoServer => Randomness::Vector(BitVec::from_u64(i, m)),
            SchemeId::Replicated => Randomness::Vector(BitVec::from_u64(i, (n - 1) * m)),
            SchemeId::Mds32 => Randomness::Pair(
                BitVec::from_u64(i & ((1 << m) - 1), m),
                BitVec::from_u64(i >> m, m),
            ),
            SchemeId::Bep => {
                let mut rest = i;
                Randomness::Shifts(
                    (0..m)
                        .map(|_| {
                            let d = (rest % n as u64) as usize;
                            rest /= n as u64;
                            d
                        })
                        .collect(),
                )
            }
        })
        .collect())
}

/// Largest total-variation distance, over servers and pairs of requested
/// files, between the distributions of what a server receives under uniform
/// randomness. Computed from exact counts, so a private scheme gives exactly 0.
pub fn privacy_audit(scheme: SchemeId, n: usize, m: usize) -> Result<f64> {
    let draws = enumerate_randomness(scheme, n, m, AUDIT_LIMIT)?;
    audit_with(scheme.server_count(n), m, &draws, |f, r| {
        scheme_queries(scheme, n, m, f, r)
    })
}

fn audit_with(
    servers: usize,
    m: usize,
    draws: &[Randomness],
    queries_for: impl Fn(usize, &Randomness) -> Result<Vec<Vec<Query>>>,
) -> Result<f64> {
    // counts[server][f] : received query list -> occurrences
    let mut counts: Vec<Vec<HashMap<Vec<Query>, u64>>> = vec![vec![HashMap::new(); m]; servers];
    for f in 1..=m {
        for r in draws {
            let queries = queries_for(f, r)?;
            for (server, q) in queries.into_iter().enumerate() {
                *counts[server][f - 1].entry(q).or_default() += 1;
            }
        }
    }
    let total = draws.len() as u64;
    let mut worst = 0.0f64;
    for per_f in &counts {
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (&per_f[i], &per_f[j]);
                let diff: u64 = a
                    .keys()
                    .chain(b.keys())
                    .collect::<std::collections::HashSet<_>>()
                    .into_iter()
                    .map(|k| {
                        let x = a.get(k).copied().unwrap_or(0);
                        let y = b.get(k).copied().unwrap_or(0);
                        x.abs_diff(y)
                    })
                    .sum();
                if diff > 0 {
                    worst = worst.max(diff as f64 / (2 * total) as f64);
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces() {
        assert_eq!(randomness_space(SchemeId::TwoServer, 2, 3), Some(8));
        assert_eq!(randomness_space(SchemeId::Replicated, 3, 2), Some(16));
        assert_eq!(randomness_space(SchemeId::Mds32, 3, 3), Some(64));
        assert_eq!(randomness_space(SchemeId::Bep, 3, 2), Some(9));
    }

    #[test]
    fn bep_enumeration_is_complete() {
        let all = enumerate_randomness(SchemeId::Bep, 3, 2, 100).unwrap();
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 9);
    }

    #[test]
    fn audits_are_exactly_zero() {
        assert_eq!(privacy_audit(SchemeId::TwoServer, 2, 3).unwrap(), 0.0);
        assert_eq!(privacy_audit(SchemeId::Replicated, 3, 2).unwrap(), 0.0);
        assert_eq!(privacy_audit(SchemeId::Mds32, 3, 3).unwrap(), 0.0);
        assert_eq!(privacy_audit(SchemeId::Bep, 3, 2).unwrap(), 0.0);
    }

    #[test]
    fn leaky_queries_are_detected() {
        let draws = enumerate_randomness(SchemeId::TwoServer, 2, 3, 100).unwrap();
        // server 2 gets e_f outright, server 1 stays uniform
        let tv = audit_with(2, 3, &draws, |f, r| {
            let Randomness::Vector(a) = r else {
                unreachable!()
            };
            Ok(vec![
                vec![Query::Linear(a.clone())],
                vec![Query::Linear(BitVec::unit(3, f - 1))],
            ])
        })
        .unwrap();
        assert_eq!(tv, 1.0);
    }

    #[test]
    fn audit_bound() {
        let err = privacy_audit(SchemeId::Replicated, 4, 8).unwrap_err();
        assert!(err.is_feasibility());
    }
}

//! Storage designs for restricted-pattern queries.
//!
//! A restricted-pattern query is a sum that takes at most one substring from
//! each file. With `M` files of `s` substrings there are `(s + 1)^M` such
//! queries. A design stores a list of such sums, and it achieves access `R`
//! when every pattern query is the sum of at most `R` stored entries.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combin::{binomial_prefix, colex_for_each};
use crate::error::{Error, Result};

/// Work bound for design verification, in elementary checks.
pub const DESIGN_WORK_BOUND: f64 = 1e8;

/// A pattern-respecting set of stored combinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedDesign {
    files: usize,
    parts: usize,
    /// Each entry lists `(file, substring)` pairs, 0-based, at most one per file.
    stored: Vec<Vec<(usize, usize)>>,
    radius: usize,
    verified: bool,
}

/// Outcome of [`verify_restricted_design`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignReport {
    /// Every pattern query is coverable within the target radius.
    pub ok: bool,
    /// Largest minimum cover size among coverable queries.
    pub worst_access: usize,
    pub queries: usize,
    pub uncovered: usize,
}

impl RestrictedDesign {
    /// Validates the pattern and runs the verifier.
    pub fn new(
        files: usize,
        parts: usize,
        stored: Vec<Vec<(usize, usize)>>,
        radius: usize,
    ) -> Result<Self> {
        if files == 0 || parts == 0 {
            return Err(Error::param(
                "design needs at least one file and one substring",
            ));
        }
        if files * parts > 64 {
            return Err(Error::param(format!(
                "{files} files x {parts} substrings exceeds 64 positions"
            )));
        }
        for combo in &stored {
            let mut seen = HashSet::new();
            for &(m, j) in combo {
                if m >= files || j >= parts {
                    return Err(Error::param(format!(
                        "entry x^{}_{} is out of range",
                        m + 1,
                        j + 1
                    )));
                }
                if !seen.insert(m) {
                    return Err(Error::param(format!(
                        "stored combination uses file {} twice",
                        m + 1
                    )));
                }
            }
            if combo.is_empty() {
                return Err(Error::param("stored combination is empty"));
            }
        }
        let mut design = RestrictedDesign {
            files,
            parts,
            stored,
            radius,
            verified: false,
        };
        design.verified = verify_restricted_design(&design)?.ok;
        Ok(design)
    }

    /// Every substring stored on its own.
    pub fn identity(files: usize, parts: usize, radius: usize) -> Result<Self> {
        Self::new(files, parts, singletons(files, parts), radius)
    }

    /// Eleven combinations over three files of two substrings each, covering
    /// every pattern query with at most two reads.
    pub fn example3() -> Self {
        let entries: &[&[(usize, usize)]] = &[
            &[(0, 0)],
            &[(0, 1)],
            &[(1, 0)],
            &[(1, 1)],
            &[(2, 0)],
            &[(2, 1)],
            &[(0, 0), (1, 1)],
            &[(1, 0), (2, 1)],
            &[(2, 0), (0, 1)],
            &[(0, 0), (1, 0), (2, 0)],
            &[(0, 1), (1, 1), (2, 1)],
        ];
        Self::new(3, 2, entries.iter().map(|e| e.to_vec()).collect(), 2)
            .expect("fixed design is well formed")
    }

    pub fn files(&self) -> usize {
        self.files
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn stored(&self) -> &[Vec<(usize, usize)>] {
        &self.stored
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    /// Copy without stored entry `index`, re-verified.
    pub fn without(&self, index: usize) -> Result<Self> {
        let mut stored = self.stored.clone();
        stored.remove(index);
        Self::new(self.files, self.parts, stored, self.radius)
    }

    /// Bit position of substring `j` of file `m` in a coefficient mask.
    pub fn position(&self, m: usize, j: usize) -> usize {
        m * self.parts + j
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.stored
            .iter()
            .map(|c| {
                c.iter()
                    .fold(0u64, |acc, &(m, j)| acc | 1 << self.position(m, j))
            })
            .collect()
    }

    /// Whether a coefficient mask takes at most one substring per file.
    pub fn is_pattern(&self, mask: u64) -> bool {
        let per_file = (1u64 << self.parts) - 1;
        (0..self.files).all(|m| ((mask >> (m * self.parts)) & per_file).count_ones() <= 1)
    }

    /// Every pattern query as a coefficient mask, in mixed-radix order.
    pub fn pattern_queries(&self) -> Vec<u64> {
        pattern_masks(self.files, self.parts)
    }

    /// Smallest stored subsets (up to the target radius) reaching each
    /// pattern query, keyed by mask.
    pub(crate) fn cover_table(&self) -> Result<HashMap<u64, Vec<usize>>> {
        let masks = self.masks();
        let work = binomial_prefix(masks.len() as u64, self.radius as u64);
        if work > DESIGN_WORK_BOUND {
            return Err(Error::Feasibility {
                what: format!(
                    "subsets of size <= {} from {} stored combinations",
                    self.radius,
                    masks.len()
                ),
                needed: work,
                bound: DESIGN_WORK_BOUND,
            });
        }
        let mut table = HashMap::new();
        for k in 0..=self.radius.min(masks.len()) {
            colex_for_each(masks.len(), k, |subset| {
                let sum = subset.iter().fold(0u64, |acc, &i| acc ^ masks[i]);
                if self.is_pattern(sum) {
                    table.entry(sum).or_insert_with(|| subset.to_vec());
                }
                true
            });
        }
        Ok(table)
    }
}

impl fmt::Display for RestrictedDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .stored
            .iter()
            .map(|combo| {
                combo
                    .iter()
                    .map(|&(m, j)| format!("x^{}_{}", m + 1, j + 1))
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn singletons(files: usize, parts: usize) -> Vec<Vec<(usize, usize)>> {
    (0..files)
        .flat_map(|m| (0..parts).map(move |j| vec![(m, j)]))
        .collect()
}

fn pattern_masks(files: usize, parts: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    for m in 0..files {
        let mut next = Vec::with_capacity(out.len() * (parts + 1));
        for &base in &out {
            next.push(base);
            for j in 0..parts {
                next.push(base | 1 << (m * parts + j));
            }
        }
        out = next;
    }
    out
}

fn check_query_count(files: usize, parts: usize) -> Result<usize> {
    let count = (parts as f64 + 1.0).powi(files as i32);
    if count > DESIGN_WORK_BOUND {
        return Err(Error::Feasibility {
            what: format!("{files} files with {parts} substrings"),
            needed: count,
            bound: DESIGN_WORK_BOUND,
        });
    }
    Ok(count as usize)
}

/// Checks every pattern query for a cover by at most `radius` stored entries.
pub fn verify_restricted_design(design: &RestrictedDesign) -> Result<DesignReport> {
    let queries = check_query_count(design.files, design.parts)?;
    let table = design.cover_table()?;
    let mut worst = 0;
    let mut uncovered = 0;
    for q in design.pattern_queries() {
        match table.get(&q) {
            Some(subset) => worst = worst.max(subset.len()),
            None => uncovered += 1,
        }
    }
    Ok(DesignReport {
        ok: uncovered == 0,
        worst_access: worst,
        queries,
        uncovered,
    })
}

/// Greedy growth from the singletons: each step adds the pattern combination
/// that makes the most currently uncovered queries coverable within `radius`.
/// Ties go to the earliest candidate in a seed-shuffled order. `budget` caps
/// the number of added combinations.
pub fn greedy_restricted_design(
    files: usize,
    parts: usize,
    radius: usize,
    budget: usize,
    seed: u64,
) -> Result<Option<RestrictedDesign>> {
    check_query_count(files, parts)?;
    if files * parts > 64 {
        return Err(Error::param("design exceeds 64 substring positions"));
    }
    if radius == 0 {
        return Ok(None);
    }
    let mut stored = singletons(files, parts);
    let queries = pattern_masks(files, parts);
    let mut candidates: Vec<u64> = queries
        .iter()
        .copied()
        .filter(|q| q.count_ones() >= 2)
        .collect();
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let to_entry = |mask: u64| -> Vec<(usize, usize)> {
        (0..files * parts)
            .filter(|&p| mask >> p & 1 == 1)
            .map(|p| (p / parts, p % parts))
            .collect()
    };

    for _ in 0..=budget {
        let masks: Vec<u64> = stored
            .iter()
            .map(|c| {
                c.iter()
                    .fold(0u64, |acc, &(m, j)| acc | 1 << (m * parts + j))
            })
            .collect();
        let shorter = reachable(&masks, radius - 1)?;
        let full = reachable(&masks, radius)?;
        let uncovered: Vec<u64> = queries
            .iter()
            .copied()
            .filter(|q| !full.contains(q))
            .collect();
        if uncovered.is_empty() {
            return RestrictedDesign::new(files, parts, stored, radius).map(Some);
        }
        if stored.len() - files * parts == budget {
            break;
        }
        let present: HashSet<u64> = masks.iter().copied().collect();
        let best = candidates
            .iter()
            .filter(|c| !present.contains(c))
            .map(|&c| {
                let gain = uncovered
                    .iter()
                    .filter(|&&q| shorter.contains(&(q ^ c)))
                    .count();
                (gain, c)
            })
            .fold(None::<(usize, u64)>, |acc, cur| match acc {
                Some(a) if a.0 >= cur.0 => Some(a),
                _ => Some(cur),
            });
        match best {
            Some((gain, c)) if gain > 0 => stored.push(to_entry(c)),
            _ => break,
        }
    }
    Ok(None)
}

/// All sums of at most `k` of the given masks.
fn reachable(masks: &[u64], k: usize) -> Result<HashSet<u64>> {
    let work = binomial_prefix(masks.len() as u64, k as u64);
    if work > DESIGN_WORK_BOUND {
        return Err(Error::Feasibility {
            what: format!("subsets of size <= {k} from {} combinations", masks.len()),
            needed: work,
            bound: DESIGN_WORK_BOUND,
        });
    }
    let mut out = HashSet::new();
    for size in 0..=k.min(masks.len()) {
        colex_for_each(masks.len(), size, |subset| {
            out.insert(subset.iter().fold(0u64, |acc, &i| acc ^ masks[i]));
            true
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design_needs_m_reads() {
        let d = RestrictedDesign::identity(3, 2, 3).unwrap();
        let rep = verify_restricted_design(&d).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.worst_access, 3);
        assert_eq!(rep.queries, 27);
        assert!(d.verified());
    }

    #[test]
    fn example3_reads_at_most_two() {
        let d = RestrictedDesign::example3();
        assert_eq!(d.stored().len(), 11);
        let rep = verify_restricted_design(&d).unwrap();
        assert_eq!(
            rep,
            DesignReport {
                ok: true,
                worst_access: 2,
                queries: 27,
                uncovered: 0
            }
        );
    }

    #[test]
    fn example3_without_pair_fails() {
        let d = RestrictedDesign::example3().without(6).unwrap();
        let rep = verify_restricted_design(&d).unwrap();
        assert!(!rep.ok);
        assert!(rep.uncovered > 0);
        assert!(!d.verified());
    }

    #[test]
    fn display_uses_one_based_names() {
        let s = RestrictedDesign::example3().to_string();
        assert!(s.contains("x^1_1+x^2_2"), "{s}");
        assert!(s.contains("x^1_2+x^2_2+x^3_2"), "{s}");
    }

    #[test]
    fn rejects_bad_patterns() {
        assert!(RestrictedDesign::new(2, 2, vec![vec![(0, 0), (0, 1)]], 1).is_err());
        assert!(RestrictedDesign::new(2, 2, vec![vec![(2, 0)]], 1).is_err());
        assert!(RestrictedDesign::new(2, 2, vec![vec![]], 1).is_err());
    }

    #[test]
    fn greedy_small_cases() {
        let one = greedy_restricted_design(1, 2, 1, 10, 0).unwrap().unwrap();
        assert_eq!(one.stored().len(), 2);

        let two = greedy_restricted_design(2, 1, 1, 10, 0).unwrap().unwrap();
        assert_eq!(two.stored().len(), 3);
        assert_eq!(two.stored()[2], vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn greedy_matches_example3_size() {
        for seed in 0..20 {
            let d = greedy_restricted_design(3, 2, 2, 20, seed)
                .unwrap()
                .unwrap();
            assert!(d.verified());
            assert!(d.stored().len() <= 11, "seed {seed}: {}", d.stored().len());
        }
    }

    #[test]
    fn greedy_respects_budget() {
        assert!(greedy_restricted_design(3, 2, 2, 1, 0).unwrap().is_none());
        assert!(greedy_restricted_design(3, 2, 0, 10, 0).unwrap().is_none());
    }

    #[test]
    fn pattern_mask_count() {
        assert_eq!(pattern_masks(3, 2).len(), 27);
        assert_eq!(pattern_masks(2, 3).len(), 16);
        let d = RestrictedDesign::identity(2, 2, 2).unwrap();
        assert!(d.is_pattern(0b0110));
        assert!(!d.is_pattern(0b0011));
    }
}

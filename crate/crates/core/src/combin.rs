//! Small combinatorial helpers shared by the brute-force enumerators.

/// Iterates over all `k`-subsets of `0..n` in colexicographic order.
///
/// Colex order is the order of increasing `sum(2^i for i in subset)`, which
/// is what the coset-leader tie-breaking rule relies on.
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Colex {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        // smallest position whose element can move up by one
        let pos = (0..k).find(|&i| {
            let limit = if i + 1 < k { next[i + 1] } else { self.n };
            next[i] + 1 < limit
        });
        if let Some(i) = pos {
            next[i] += 1;
            for (j, slot) in next.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// Visits every `k`-subset of `0..n` in colex order without allocating per
/// subset. The visitor returns `false` to stop early.
pub fn colex_for_each(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&cur) {
            return;
        }
        let Some(i) = (0..k).find(|&i| {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            cur[i] + 1 < limit
        }) else {
            return;
        };
        cur[i] += 1;
        for (j, slot) in cur.iter_mut().enumerate().take(i) {
            *slot = j;
        }
    }
}

/// Binomial coefficient as a float, adequate for work-bound estimates.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sum_{i <= k} C(n, i)`.
pub fn binomial_prefix(n: u64, k: u64) -> f64 {
    (0..=k.min(n)).map(|i| binomial(n, i)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_is_increasing_numeric_order() {
        let masks: Vec<u64> = Colex::new(6, 3)
            .map(|c| c.iter().map(|&i| 1u64 << i).sum())
            .collect();
        assert_eq!(masks.len(), 20);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn colex_edge_cases() {
        assert_eq!(
            Colex::new(4, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(Colex::new(2, 3).count(), 0);
        assert_eq!(Colex::new(5, 5).count(), 1);
    }

    #[test]
    fn visitor_matches_iterator() {
        let mut seen = Vec::new();
        colex_for_each(7, 3, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, Colex::new(7, 3).collect::<Vec<_>>());
        let mut count = 0;
        colex_for_each(7, 3, |_| {
            count += 1;
            count < 5
        });
        assert_eq!(count, 5);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(15, 4), 1365.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial_prefix(4, 4), 16.0);
    }
}

use std::collections::HashMap;
use std::sync::Arc;

use crate::covercode::{build_code, sum_augmented_identity, Answer, CoveringCode, EncodedStorage};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pirsim::restricted::RestrictedDesign;

/// A server's storage, able to evaluate linear combinations of the `r`
/// independent substrings it represents.
pub trait SymbolStore: Send + Sync {
    /// Number of stored symbols.
    fn symbol_count(&self) -> usize;

    fn symbol_len(&self) -> usize;

    /// Evaluates `sum_i coeffs_i * x_i` and reports the stored symbols read.
    fn answer(&self, coeffs: &BitVec) -> Result<Answer>;
}

/// How each server lays out its `r` independent substrings.
#[derive(Debug, Clone)]
pub enum Backend {
    /// Substrings stored as-is; a query reads one symbol per nonzero coefficient.
    Identity,
    /// Covering-code encoding; a query reads at most `radius` symbols.
    Coded(Arc<CoveringCode>),
    /// Restricted-pattern design; only pattern queries can be answered.
    Restricted(Arc<RestrictedDesign>),
}

impl Backend {
    /// Covering backend `[I_r | 1]`.
    pub fn sum_augmented(r: usize) -> Result<Backend> {
        Ok(Backend::Coded(
            build_code(&sum_augmented_identity(r)?)?.into_shared(),
        ))
    }

    pub fn coded(code: CoveringCode) -> Backend {
        Backend::Coded(Arc::new(code))
    }

    pub fn describe(&self) -> String {
        match self {
            Backend::Identity => "identity".into(),
            Backend::Coded(c) => format!(
                "coded(r={}, len={}, radius={})",
                c.redundancy(),
                c.length(),
                c.radius()
            ),
            Backend::Restricted(d) => format!(
                "restricted(M={}, s={}, stored={}, radius={})",
                d.files(),
                d.parts(),
                d.stored().len(),
                d.radius()
            ),
        }
    }

    /// Worst-case symbols read per query, when the backend bounds it.
    pub fn radius(&self) -> Option<usize> {
        match self {
            Backend::Identity => None,
            Backend::Coded(c) => Some(c.radius()),
            Backend::Restricted(d) => Some(d.radius()),
        }
    }

    /// Lays out `substrings` (all of equal length) on one server.
    pub fn store(&self, substrings: &[BitVec]) -> Result<Box<dyn SymbolStore>> {
        let len = substrings.first().map_or(0, BitVec::len);
        if substrings.iter().any(|s| s.len() != len) {
            return Err(Error::dim("substrings must have equal length"));
        }
        match self {
            Backend::Identity => Ok(Box::new(PlainStore {
                symbols: substrings.to_vec(),
                symbol_len: len,
            })),
            Backend::Coded(code) => {
                if code.redundancy() != substrings.len() {
                    return Err(Error::dim(format!(
                        "code redundancy {} does not match {} substrings",
                        code.redundancy(),
                        substrings.len()
                    )));
                }
                Ok(Box::new(EncodedStorage::from_substrings(
                    substrings,
                    code.clone(),
                )?))
            }
            Backend::Restricted(design) => {
                Ok(Box::new(RestrictedStore::new(design.clone(), substrings)?))
            }
        }
    }
}

struct PlainStore {
    symbols: Vec<BitVec>,
    symbol_len: usize,
}

impl SymbolStore for PlainStore {
    fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    fn symbol_len(&self) -> usize {
        self.symbol_len
    }

    fn answer(&self, coeffs: &BitVec) -> Result<Answer> {
        if coeffs.len() != self.symbols.len() {
            return Err(Error::dim(format!(
                "query of length {} for {} symbols",
                coeffs.len(),
                self.symbols.len()
            )));
        }
        let accessed = coeffs.support();
        let mut value = BitVec::zeros(self.symbol_len);
        for &i in &accessed {
            value ^= &self.symbols[i];
        }
        Ok(Answer { value, accessed })
    }
}

impl SymbolStore for EncodedStorage {
    fn symbol_count(&self) -> usize {
        self.symbols().len()
    }

    fn symbol_len(&self) -> usize {
        EncodedStorage::symbol_len(self)
    }

    fn answer(&self, coeffs: &BitVec) -> Result<Answer> {
        self.answer_query(coeffs)
    }
}

/// Stored sums for a restricted-pattern design, with a precomputed smallest
/// cover for every pattern query.
struct RestrictedStore {
    symbols: Vec<BitVec>,
    symbol_len: usize,
    positions: usize,
    covers: HashMap<u64, Vec<usize>>,
}

impl RestrictedStore {
    fn new(design: Arc<RestrictedDesign>, substrings: &[BitVec]) -> Result<Self> {
        let positions = design.files() * design.parts();
        if substrings.len() != positions {
            return Err(Error::dim(format!(
                "design covers {positions} substrings, got {}",
                substrings.len()
            )));
        }
        if !design.verified() {
            return Err(Error::param(format!(
                "design does not cover every pattern query within {}",
                design.radius()
            )));
        }
        let symbol_len = substrings.first().map_or(0, BitVec::len);
        let symbols = design
            .stored()
            .iter()
            .map(|combo| {
                combo
                    .iter()
                    .fold(BitVec::zeros(symbol_len), |acc, &(m, j)| {
                        &acc ^ &substrings[design.position(m, j)]
                    })
            })
            .collect();
        Ok(RestrictedStore {
            symbols,
            symbol_len,
            positions,
            covers: design.cover_table()?,
        })
    }
}

impl SymbolStore for RestrictedStore {
    fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    fn symbol_len(&self) -> usize {
        self.symbol_len
    }

    fn answer(&self, coeffs: &BitVec) -> Result<Answer> {
        if coeffs.len() != self.positions {
            return Err(Error::dim(format!(
                "query of length {} for {} substrings",
                coeffs.len(),
                self.positions
            )));
        }
        let mask = coeffs.to_u64().expect("at most 64 positions");
        let subset = self.covers.get(&mask).ok_or_else(|| {
            Error::param(format!("query {coeffs} is not a restricted-pattern query"))
        })?;
        let mut value = BitVec::zeros(self.symbol_len);
        for &i in subset {
            value ^= &self.symbols[i];
        }
        let mut accessed = subset.clone();
        accessed.sort_unstable();
        Ok(Answer { value, accessed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pirsim::Database;

    fn naive(subs: &[BitVec], coeffs: &BitVec) -> BitVec {
        coeffs
            .support()
            .iter()
            .fold(BitVec::zeros(subs[0].len()), |acc, &i| &acc ^ &subs[i])
    }

    #[test]
    fn identity_reads_support() {
        let subs = Database::random(4, 6, 1).unwrap().files().to_vec();
        let st = Backend::Identity.store(&subs).unwrap();
        let q: BitVec = "1011".parse().unwrap();
        let a = st.answer(&q).unwrap();
        assert_eq!(a.accessed, vec![0, 2, 3]);
        assert_eq!(a.value, naive(&subs, &q));
    }

    #[test]
    fn restricted_answers_every_pattern_query() {
        let design = Arc::new(RestrictedDesign::example3());
        let subs = Database::random(3, 8, 2).unwrap().substrings(2).unwrap();
        let st = Backend::Restricted(design.clone()).store(&subs).unwrap();
        assert_eq!(st.symbol_count(), 11);
        for q in design.pattern_queries() {
            let coeffs = BitVec::from_u64(q, 6);
            let a = st.answer(&coeffs).unwrap();
            assert!(a.accessed.len() <= 2);
            assert_eq!(a.value, naive(&subs, &coeffs));
        }
        // two substrings of file 1
        assert!(st.answer(&"110000".parse().unwrap()).is_err());
    }

    #[test]
    fn mismatched_backends_are_rejected() {
        let subs = Database::random(3, 4, 0).unwrap().files().to_vec();
        assert!(Backend::sum_augmented(4).unwrap().store(&subs).is_err());
        let design = Arc::new(RestrictedDesign::example3());
        assert!(Backend::Restricted(design).store(&subs).is_err());
        let broken = Arc::new(RestrictedDesign::example3().without(6).unwrap());
        let six = Database::random(3, 4, 0).unwrap().substrings(2).unwrap();
        assert!(Backend::Restricted(broken).store(&six).is_err());
    }
}

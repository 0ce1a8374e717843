use std::sync::Arc;

use serde::Serialize;

use crate::covercode::{syndrome_index, CoveringCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// One server's coded storage: `z_i = x * h_i` for every column `h_i` of the
/// parity-check matrix, where `x` is the `t x r` source matrix whose columns
/// are the `r` independent substrings.
#[derive(Debug, Clone)]
pub struct EncodedStorage {
    code: Arc<CoveringCode>,
    symbol_len: usize,
    symbols: Vec<BitVec>,
}

/// A query answer together with the stored symbols that were read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub value: BitVec,
    /// Indices of accessed stored symbols, ascending.
    pub accessed: Vec<usize>,
}

pub fn encode_storage(x: &BitMatrix, code: Arc<CoveringCode>) -> Result<EncodedStorage> {
    if x.cols() != code.redundancy() {
        return Err(Error::dim(format!(
            "source matrix has {} columns, code redundancy is {}",
            x.cols(),
            code.redundancy()
        )));
    }
    let symbols = (0..code.length())
        .map(|i| x.mat_vec_mul(&code.parity_check().col(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedStorage {
        code,
        symbol_len: x.rows(),
        symbols,
    })
}

impl EncodedStorage {
    /// Encodes `r` substrings of equal length, substring `i` being column `i` of `x`.
    pub fn from_substrings(substrings: &[BitVec], code: Arc<CoveringCode>) -> Result<Self> {
        let t = substrings.first().map_or(0, BitVec::len);
        let x = BitMatrix::from_columns(t, substrings)?;
        encode_storage(&x, code)
    }

    pub fn code(&self) -> &CoveringCode {
        &self.code
    }

    pub fn symbol_len(&self) -> usize {
        self.symbol_len
    }

    pub fn symbols(&self) -> &[BitVec] {
        &self.symbols
    }

    /// Computes `x * s` by summing the stored symbols on the support of the
    /// coset leader of `s`. At most `radius` symbols are read.
    pub fn answer_query(&self, s: &BitVec) -> Result<Answer> {
        if s.len() != self.code.redundancy() {
            return Err(Error::dim(format!(
                "query of length {} for {} substrings",
                s.len(),
                self.code.redundancy()
            )));
        }
        let accessed = self.code.leader_support(syndrome_index(s) as usize);
        let mut value = BitVec::zeros(self.symbol_len);
        for &i in &accessed {
            value ^= &self.symbols[i];
        }
        Ok(Answer { value, accessed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covercode::{build_code, hamming_parity, sum_augmented_identity};

    fn x_matrix() -> BitMatrix {
        "1011\n0110\n1100\n0001\n1111".parse().unwrap()
    }

    fn direct(x: &BitMatrix, s: &BitVec) -> BitVec {
        x.mat_vec_mul(s).unwrap()
    }

    #[test]
    fn identity_stores_columns() {
        let x = x_matrix();
        let code = build_code(&BitMatrix::identity(4)).unwrap().into_shared();
        let st = encode_storage(&x, code).unwrap();
        assert_eq!(st.symbols(), x.columns().as_slice());
    }

    #[test]
    fn sum_column_is_total() {
        let x = x_matrix();
        let code = build_code(&sum_augmented_identity(4).unwrap())
            .unwrap()
            .into_shared();
        let st = encode_storage(&x, code).unwrap();
        let total = x.columns().iter().fold(BitVec::zeros(5), |acc, c| &acc ^ c);
        assert_eq!(st.symbols()[4], total);
    }

    #[test]
    fn zero_query_reads_nothing() {
        let code = build_code(&hamming_parity(3).unwrap())
            .unwrap()
            .into_shared();
        let x: BitMatrix = "101\n011".parse().unwrap();
        let st = encode_storage(&x, code).unwrap();
        let a = st.answer_query(&BitVec::zeros(3)).unwrap();
        assert!(a.value.is_zero());
        assert!(a.accessed.is_empty());
    }

    #[test]
    fn sum_augmented_query_uses_sum_symbol() {
        let x = x_matrix();
        let code = build_code(&sum_augmented_identity(4).unwrap())
            .unwrap()
            .into_shared();
        let st = encode_storage(&x, code).unwrap();
        let s: BitVec = "1110".parse().unwrap();
        let a = st.answer_query(&s).unwrap();
        assert_eq!(a.accessed, vec![3, 4]);
        assert_eq!(a.value, direct(&x, &s));
    }

    #[test]
    fn dimension_errors() {
        let code = build_code(&hamming_parity(3).unwrap())
            .unwrap()
            .into_shared();
        assert!(encode_storage(&x_matrix(), code.clone()).is_err());
        let st = encode_storage(&"101".parse().unwrap(), code).unwrap();
        assert!(st.answer_query(&BitVec::zeros(4)).is_err());
    }
}

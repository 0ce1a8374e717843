use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`. Bits at positions
/// `>= len` are always zero, so equality and hashing can work on the words.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        Self::from_fn(len, |_| true)
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    /// Vector of length `len` whose bit `i` is bit `i` of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`BitVec::from_u64`]; `None` when longer than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            l if l <= WORD_BITS => Some(self.words[0]),
            _ => None,
        }
    }

    /// Builds a vector from the packed word representation, clearing padding bits.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVec { len, words };
        v.clear_padding();
        v
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of the set bits, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let tz = w.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + tz);
                w &= w - 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn try_xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len != other.len {
            return Err(Error::dim(format!(
                "xor of lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok(self ^ other)
    }

    /// Copies `len` bits starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of range");
        BitVec::from_fn(len, |i| self.get(start + i))
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitVec>) -> BitVec {
        let parts: Vec<&BitVec> = parts.into_iter().collect();
        let total = parts.iter().map(|p| p.len).sum();
        let mut out = BitVec::zeros(total);
        let mut offset = 0;
        for p in parts {
            for i in p.support() {
                out.set(offset + i, true);
            }
            offset += p.len;
        }
        out
    }

    /// Splits into `parts` equal pieces. The length must be divisible by `parts`.
    pub fn split(&self, parts: usize) -> Result<Vec<BitVec>> {
        if parts == 0 || !self.len.is_multiple_of(parts) {
            return Err(Error::param(format!(
                "length {} is not divisible into {parts} parts",
                self.len
            )));
        }
        let piece = self.len / parts;
        Ok((0..parts).map(|k| self.slice(k * piece, piece)).collect())
    }

    /// Hex encoding: byte `k` carries bits `8k..8k+8`, bit `8k` being the
    /// most significant bit of the byte. The final byte is zero-padded.
    pub fn to_hex(&self) -> String {
        let bytes = self.to_bytes();
        let mut s = String::with_capacity(bytes.len() * 2);
        for b in bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Packs bits MSB-first into bytes, matching [`BitVec::to_hex`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for i in self.support() {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
        bytes
    }

    /// Reads `len` bits MSB-first from `bytes` starting at bit `offset`.
    pub fn from_bytes(bytes: &[u8], offset: usize, len: usize) -> Result<BitVec> {
        if (offset + len).div_ceil(8) > bytes.len() {
            return Err(Error::dim(format!(
                "need {} bits, buffer holds {}",
                offset + len,
                bytes.len() * 8
            )));
        }
        Ok(BitVec::from_fn(len, |i| {
            let p = offset + i;
            bytes[p / 8] & (0x80 >> (p % 8)) != 0
        }))
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVec> for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses a string of '0'/'1' characters; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_stays_clear() {
        let v = BitVec::from_words(3, vec![u64::MAX]);
        assert_eq!(v.weight(), 3);
        assert_eq!(v, BitVec::ones(3));
    }

    #[test]
    fn support_is_sorted() {
        let v: BitVec = "0110000001".parse().unwrap();
        assert_eq!(v.support(), vec![1, 2, 9]);
        assert_eq!(v.weight(), 3);
    }

    #[test]
    fn long_vectors_cross_word_boundaries() {
        let mut v = BitVec::zeros(130);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.support(), vec![63, 64, 129]);
        let w = BitVec::unit(130, 64);
        assert_eq!((&v ^ &w).support(), vec![63, 129]);
        assert!(v.dot(&w));
    }

    #[test]
    fn hex_is_msb_first() {
        let v: BitVec = "1000000001".parse().unwrap();
        assert_eq!(v.to_hex(), "8040");
        let back = BitVec::from_bytes(&v.to_bytes(), 0, 10).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn split_and_concat() {
        let v: BitVec = "110100".parse().unwrap();
        let parts = v.split(3).unwrap();
        assert_eq!(parts[1].to_string(), "01");
        assert_eq!(BitVec::concat(&parts), v);
        assert!(v.split(4).is_err());
    }

    #[test]
    fn u64_round_trip() {
        let v = BitVec::from_u64(0b1011, 6);
        assert_eq!(v.to_string(), "110100");
        assert_eq!(v.to_u64(), Some(0b1011));
        assert_eq!(BitVec::zeros(65).to_u64(), None);
    }

    #[test]
    fn rejects_bad_literal() {
        assert!("0120".parse::<BitVec>().is_err());
    }
}

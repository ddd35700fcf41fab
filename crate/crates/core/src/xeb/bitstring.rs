// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Default cap on bitstring length.
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

/// Packed measurement outcome. Qubit `i` is bit `i % 8` of byte `i / 8`;
/// bits past `len` in the last byte are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: u64,
    bytes: Vec<u8>,
}

fn byte_len(len: u64) -> usize {
    len.div_ceil(8) as usize
}

fn pad_mask(len: u64) -> u8 {
    match len % 8 {
        0 => 0xff,
        r => (1u8 << r) - 1,
    }
}

impl BitString {
    /// All-zero string of `len` bits.
    pub fn zeros(len: u64) -> Self {
        BitString {
            len,
            bytes: vec![0; byte_len(len)],
        }
    }

    pub fn from_bytes(len: u64, bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() != byte_len(len) {
            return Err(Error::InvalidArgument(format!(
                "{len} bits need {} bytes, got {}",
                byte_len(len),
                bytes.len()
            )));
        }
        if let Some(&last) = bytes.last() {
            if last & !pad_mask(len) != 0 {
                return Err(Error::InvalidArgument("pad bits must be zero".into()));
            }
        }
        Ok(BitString { len, bytes })
    }

    /// Basis label of index `index` in an `len`-qubit register.
    pub fn from_index(len: u64, index: u64) -> Self {
        let mut s = BitString::zeros(len);
        for (dst, src) in s.bytes.iter_mut().zip(index.to_le_bytes()) {
            *dst = src;
        }
        s.clear_padding();
        s
    }

    pub fn from_hex(len: u64, hex: &str) -> Result<Self> {
        if !hex.len().is_multiple_of(2) || !hex.bytes().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!("invalid hex bitstring {hex:?}")));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).expect("checked hex digits"))
            .collect();
        BitString::from_bytes(len, bytes)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit(&self, i: u64) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for {} bits",
            self.len
        );
        self.bytes[(i / 8) as usize] >> (i % 8) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Lowercase hex of the packed bytes.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(2 * self.bytes.len());
        for b in &self.bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Overwrites the string with fresh uniform bits.
    ///
    /// Consumes `ceil(len / 64)` words; byte `8w + j` is byte `j` of the
    /// little-endian encoding of word `w`.
    pub fn fill_random<R: UniformSource + ?Sized>(&mut self, rng: &mut R) {
        let mut chunks = self.bytes.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&rng.next_word().to_le_bytes());
        }
        let tail = chunks.into_remainder();
        if !tail.is_empty() {
            let word = rng.next_word().to_le_bytes();
            let k = tail.len();
            tail.copy_from_slice(&word[..k]);
        }
        self.clear_padding();
    }

    fn clear_padding(&mut self) {
        let mask = pad_mask(self.len);
        if let Some(last) = self.bytes.last_mut() {
            *last &= mask;
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}, {})", self.len, self.to_hex())
    }
}

/// Uniform random bitstring of length `len`, capped at [`DEFAULT_MAX_BITS`].
pub fn sample_bitstring<R: UniformSource + ?Sized>(len: u64, rng: &mut R) -> Result<BitString> {
    sample_bitstring_capped(len, DEFAULT_MAX_BITS, rng)
}

pub fn sample_bitstring_capped<R: UniformSource + ?Sized>(
    len: u64,
    cap: u64,
    rng: &mut R,
) -> Result<BitString> {
    if len == 0 {
        return Err(Error::InvalidArgument(
            "bitstring length must be positive".into(),
        ));
    }
    if len > cap {
        return Err(Error::Capacity {
            what: "bitstring sampling",
            requested: len,
            cap,
        });
    }
    let mut s = BitString::zeros(len);
    s.fill_random(rng);
    Ok(s)
}

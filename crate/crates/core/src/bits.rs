use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A string over `{0, 1}`; machine inputs and reduction inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn last(&self) -> Option<bool> {
        self.0.last().copied()
    }

    /// All strings of exactly `len` bits, in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "length {len} too large to enumerate");
        (0..1u64 << len).map(move |k| {
            BitString((0..len).rev().map(|i| k >> i & 1 == 1).collect())
        })
    }

    /// Nonempty strings of length at most `max_len`, shortest first and
    /// lexicographic within a length.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (1..=max_len).flat_map(BitString::all_of_len)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

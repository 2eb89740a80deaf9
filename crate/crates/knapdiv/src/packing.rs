//! Binary encoding of a knapsack solution.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A candidate solution: bit `i` set means item `i` is packed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Packing {
    bits: Vec<bool>,
}

impl Packing {
    pub fn zeros(n: usize) -> Self {
        Packing { bits: vec![false; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Packing { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Indices of all bits equal to `value`.
    pub fn positions(&self, value: bool) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(move |(_, &b)| b == value)
            .map(|(i, _)| i)
    }

    /// Bitwise AND of two packings of equal length.
    pub fn and(&self, other: &Packing) -> Packing {
        assert_eq!(self.len(), other.len(), "packing length mismatch");
        Packing {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }
}

impl fmt::Display for Packing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Packing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Malformed(format!(
                    "packing strings are over {{0,1}}, got {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Packing::from_bits)
    }
}

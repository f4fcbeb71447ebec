//! Direction selections: one bit per object.

use std::fmt;

use crate::model::ObjectId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Decreasing agent index, bit 0.
    Ccw = 0,
    /// Increasing agent index, bit 1.
    Cw = 1,
}

impl Direction {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Direction::Cw
        } else {
            Direction::Ccw
        }
    }

    pub fn bit(self) -> bool {
        self == Direction::Cw
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Cw => Direction::Ccw,
            Direction::Ccw => Direction::Cw,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Cw => "cw",
            Direction::Ccw => "ccw",
        })
    }
}

/// A direction for every object, indexed by object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection(Vec<Direction>);

impl Selection {
    pub fn new(dirs: Vec<Direction>) -> Self {
        Selection(dirs)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Selection(bits.iter().map(|&b| Direction::from_bit(b)).collect())
    }

    /// Bit `o` of `mask` is the direction of object `o`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Selection((0..n).map(|o| Direction::from_bit(mask >> o & 1 == 1)).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (o, d)| m | (d.bit() as u64) << o)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, o: ObjectId) -> Direction {
        self.0[o.0]
    }

    pub fn set(&mut self, o: ObjectId, d: Direction) {
        self.0[o.0] = d;
    }

    pub fn directions(&self) -> &[Direction] {
        &self.0
    }

    pub fn bits(&self) -> Vec<u8> {
        self.0.iter().map(|&d| d as u8).collect()
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", *d as u8)?;
        }
        Ok(())
    }
}

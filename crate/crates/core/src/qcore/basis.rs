use std::fmt;

/// One of the four computational basis labels of the ion pair.
///
/// The first character is ion 1, the second ion 2. The matrix index is
/// `2 * ion1 + ion2`, so the rows/columns run `00, 01, 10, 11`. After the
/// transfer `0` is `S1/2, mJ=+1/2` and `1` is `S1/2, mJ=-1/2`; before it the
/// same slots hold `S` as `0` and `D` as `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    B00,
    B01,
    B10,
    B11,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 4] = [Self::B00, Self::B01, Self::B10, Self::B11];

    pub fn index(self) -> usize {
        match self {
            Self::B00 => 0,
            Self::B01 => 1,
            Self::B10 => 2,
            Self::B11 => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn from_bits(ion1: u8, ion2: u8) -> Option<Self> {
        match (ion1, ion2) {
            (0 | 1, 0 | 1) => Self::from_index(((ion1 << 1) | ion2) as usize),
            _ => None,
        }
    }

    /// Bit of ion `1` or `2`.
    pub fn bit(self, ion: u8) -> u8 {
        let i = self.index() as u8;
        if ion == 1 {
            i >> 1
        } else {
            i & 1
        }
    }

    /// Number of ions in `|1>`.
    pub fn excitations(self) -> u8 {
        self.bit(1) + self.bit(2)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.bit(1), self.bit(2))
    }
}

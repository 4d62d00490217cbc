use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::linalg::Mat4;
use crate::sequence::local_rotations;

/// Pre-readout rotation applied to one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rot {
    Id,
    X90,
    Y90,
}

impl Rot {
    pub const ALL: [Rot; 3] = [Rot::Id, Rot::X90, Rot::Y90];

    /// `(θ, φ)` of the nominal pulse; `X90 = R(π/2, 0)`, `Y90 = R(π/2, π/2)`.
    pub fn angles(self) -> (f64, f64) {
        match self {
            Rot::Id => (0.0, 0.0),
            Rot::X90 => (FRAC_PI_2, 0.0),
            Rot::Y90 => (FRAC_PI_2, FRAC_PI_2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rot::Id => "Id",
            Rot::X90 => "X90",
            Rot::Y90 => "Y90",
        }
    }
}

impl std::str::FromStr for Rot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Id" => Ok(Rot::Id),
            "X90" => Ok(Rot::X90),
            "Y90" => Ok(Rot::Y90),
            other => Err(Error::Parse(format!("unknown rotation {other:?}"))),
        }
    }
}

/// Rotations on ion 1 and ion 2 before a Z-basis readout of both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting {
    pub rot1: Rot,
    pub rot2: Rot,
}

impl MeasurementSetting {
    pub fn new(rot1: Rot, rot2: Rot) -> Self {
        Self { rot1, rot2 }
    }

    /// The nine settings in a fixed order (ion 1 major).
    pub fn all() -> [MeasurementSetting; 9] {
        let mut out = [MeasurementSetting::new(Rot::Id, Rot::Id); 9];
        for (i, r1) in Rot::ALL.iter().enumerate() {
            for (j, r2) in Rot::ALL.iter().enumerate() {
                out[3 * i + j] = MeasurementSetting::new(*r1, *r2);
            }
        }
        out
    }

    /// Unitary applied before readout; non-identity pulses are short by
    /// `deficit` radians.
    pub fn unitary(&self, deficit: f64) -> Mat4 {
        let angle = |r: Rot| {
            let (t, p) = r.angles();
            if r == Rot::Id {
                (0.0, 0.0)
            } else {
                (t - deficit, p)
            }
        };
        let (t1, p1) = angle(self.rot1);
        let (t2, p2) = angle(self.rot2);
        local_rotations(t1, p1, t2, p2)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rot1.as_str(), self.rot2.as_str())
    }
}

/// Outcome tallies in the order `00, 01, 10, 11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutcomeCounts(pub [u64; 4]);

impl OutcomeCounts {
    pub fn shots(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn add(&mut self, other: &OutcomeCounts) {
        for k in 0..4 {
            self.0[k] += other.0[k];
        }
    }

    pub fn frequencies(&self) -> [f64; 4] {
        let n = self.shots() as f64;
        self.0.map(|c| c as f64 / n)
    }
}

/// Counts recorded for one setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub setting: MeasurementSetting,
    pub counts: OutcomeCounts,
}

impl MeasurementRecord {
    pub fn shots(&self) -> u64 {
        self.counts.shots()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn nine_distinct_settings() {
        let s: HashSet<_> = MeasurementSetting::all().into_iter().collect();
        assert_eq!(s.len(), 9);
    }

    #[test]
    fn rot_parse() {
        for r in Rot::ALL {
            assert_eq!(r.as_str().parse::<Rot>().unwrap(), r);
        }
        assert!("Z90".parse::<Rot>().is_err());
    }
}

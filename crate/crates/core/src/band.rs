//! The six school grade bands used as the classifier's output domain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BandError {
    #[error("band index {0} is outside 1..=6")]
    InvalidIndex(u8),
    #[error("grade {0} is below 1")]
    BadGrade(u32),
}

/// One of the six grade bands: 1-2, 3-4, 5-6, 7-9, 10-12, 13+.
///
/// Bands are ordered by difficulty; the wrapped index runs 1 (lower
/// elementary) through 6 (college/adult) and serializes as that integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GradeBand(u8);

impl GradeBand {
    pub const ALL: [GradeBand; 6] = [
        GradeBand(1),
        GradeBand(2),
        GradeBand(3),
        GradeBand(4),
        GradeBand(5),
        GradeBand(6),
    ];

    pub fn new(index: u8) -> Result<Self, BandError> {
        if (1..=6).contains(&index) {
            Ok(GradeBand(index))
        } else {
            Err(BandError::InvalidIndex(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// The band containing a school grade; any grade of 13 or above maps
    /// to the top band.
    pub fn of_grade(grade: u32) -> Result<Self, BandError> {
        match grade {
            0 => Err(BandError::BadGrade(grade)),
            1..=2 => Ok(GradeBand(1)),
            3..=4 => Ok(GradeBand(2)),
            5..=6 => Ok(GradeBand(3)),
            7..=9 => Ok(GradeBand(4)),
            10..=12 => Ok(GradeBand(5)),
            _ => Ok(GradeBand(6)),
        }
    }

    /// Grades covered by this band as (lowest, highest); the top band is
    /// open-ended and reports no upper grade.
    pub fn grade_range(self) -> (u32, Option<u32>) {
        match self.0 {
            1 => (1, Some(2)),
            2 => (3, Some(4)),
            3 => (5, Some(6)),
            4 => (7, Some(9)),
            5 => (10, Some(12)),
            _ => (13, None),
        }
    }

    pub fn label(self) -> &'static str {
        match self.0 {
            1 => "lower elementary",
            2 => "middle elementary",
            3 => "upper elementary",
            4 => "middle school",
            5 => "high school",
            _ => "college/adult",
        }
    }
}

impl TryFrom<u8> for GradeBand {
    type Error = BandError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        GradeBand::new(value)
    }
}

impl From<GradeBand> for u8 {
    fn from(band: GradeBand) -> u8 {
        band.0
    }
}

impl std::fmt::Display for GradeBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands_partition_grades() {
        // every grade lands in exactly one band, and band order follows grade order
        let mut last = GradeBand::new(1).unwrap();
        for grade in 1..=30 {
            let band = GradeBand::of_grade(grade).unwrap();
            assert!(band >= last);
            last = band;
            let (lo, hi) = band.grade_range();
            assert!(grade >= lo);
            if let Some(hi) = hi {
                assert!(grade <= hi);
            }
        }
    }

    #[test]
    fn of_grade_examples() {
        assert_eq!(GradeBand::of_grade(8).unwrap().index(), 4);
        assert_eq!(GradeBand::of_grade(1).unwrap().index(), 1);
        assert_eq!(GradeBand::of_grade(17).unwrap().index(), 6);
        assert_eq!(GradeBand::of_grade(0), Err(BandError::BadGrade(0)));
    }

    #[test]
    fn serde_round_trip_validates() {
        let band: GradeBand = serde_json::from_str("4").unwrap();
        assert_eq!(band.index(), 4);
        assert_eq!(serde_json::to_string(&band).unwrap(), "4");
        assert!(serde_json::from_str::<GradeBand>("7").is_err());
        assert!(serde_json::from_str::<GradeBand>("0").is_err());
    }
}

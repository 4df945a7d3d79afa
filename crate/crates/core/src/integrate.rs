//! Fuses the seven per-metric bands into one final grade band.
//!
//! The metrics vote in three groups: the word-list formulas, the
//! letter/word-length formulas, and the syllable-count formulas. Each group
//! casts the shared band when its members agree and the easiest (lowest)
//! member band otherwise; the three group votes then resolve by mode, or by
//! median when all three differ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::GradeBand;
use crate::metrics::{MetricId, MetricReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntegrateError {
    #[error("{group:?} expects {expected} member bands, got {got}")]
    WrongArity {
        group: MetricGroup,
        expected: usize,
        got: usize,
    },
    #[error("report is missing a band for {0}")]
    MissingMetric(MetricId),
}

/// The three voting groups, keyed by what their member formulas measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricGroup {
    /// Dale-Chall and Spache: familiar-word lists.
    WordList,
    /// Flesch Reading Ease, Flesch-Kincaid, and Coleman-Liau: word and
    /// letter lengths.
    Length,
    /// Linsear Write and Gunning fog: syllable-heavy words.
    Syllable,
}

impl MetricGroup {
    /// Groups in canonical vote order.
    pub const ALL: [MetricGroup; 3] = [
        MetricGroup::WordList,
        MetricGroup::Length,
        MetricGroup::Syllable,
    ];

    pub fn members(self) -> &'static [MetricId] {
        match self {
            MetricGroup::WordList => &[MetricId::Dc, MetricId::Spache],
            MetricGroup::Length => &[MetricId::Fres, MetricId::Fkgl, MetricId::Cli],
            MetricGroup::Syllable => &[MetricId::Lw, MetricId::Fog],
        }
    }

    /// The group's vote: the shared band when all members agree, otherwise
    /// the easiest member band.
    pub fn vote(self, member_bands: &[GradeBand]) -> Result<GradeBand, IntegrateError> {
        if member_bands.len() != self.members().len() {
            return Err(IntegrateError::WrongArity {
                group: self,
                expected: self.members().len(),
                got: member_bands.len(),
            });
        }
        let first = member_bands[0];
        if member_bands.iter().all(|b| *b == first) {
            Ok(first)
        } else {
            Ok(*member_bands.iter().min().expect("arity checked"))
        }
    }
}

/// How the three group votes resolved into the final band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionRule {
    /// All three groups voted the same band.
    Unanimous,
    /// Exactly two groups agreed.
    Mode,
    /// All three differed; the middle band wins.
    Median,
}

/// The outcome of integration: the three group votes in canonical order,
/// the final band, and which rule decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub group_votes: [GradeBand; 3],
    pub final_band: GradeBand,
    pub decided_by: DecisionRule,
}

/// Integrates per-metric bands (one for each of the seven voting metrics)
/// into a final band.
pub fn integrate_bands(
    bands: &BTreeMap<MetricId, GradeBand>,
) -> Result<IntegrationResult, IntegrateError> {
    let mut group_votes = [GradeBand::new(1).expect("1 is a band"); 3];
    for (slot, group) in MetricGroup::ALL.into_iter().enumerate() {
        let member_bands: Vec<GradeBand> = group
            .members()
            .iter()
            .map(|m| bands.get(m).copied().ok_or(IntegrateError::MissingMetric(*m)))
            .collect::<Result<_, _>>()?;
        group_votes[slot] = group.vote(&member_bands)?;
    }
    let [a, b, c] = group_votes;
    let (final_band, decided_by) = if a == b && b == c {
        (a, DecisionRule::Unanimous)
    } else if a == b || a == c {
        (a, DecisionRule::Mode)
    } else if b == c {
        (b, DecisionRule::Mode)
    } else {
        let mut sorted = group_votes;
        sorted.sort();
        (sorted[1], DecisionRule::Median)
    };
    Ok(IntegrationResult {
        group_votes,
        final_band,
        decided_by,
    })
}

/// Integrates a full metric report; the held-out metric is ignored.
pub fn integrate(report: &MetricReport) -> Result<IntegrationResult, IntegrateError> {
    let mut bands = BTreeMap::new();
    for metric in MetricId::INTEGRATED {
        let band = report
            .band(metric)
            .ok_or(IntegrateError::MissingMetric(metric))?;
        bands.insert(metric, band);
    }
    integrate_bands(&bands)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(i: u8) -> GradeBand {
        GradeBand::new(i).unwrap()
    }

    fn bands_from(pairs: [(MetricId, u8); 7]) -> BTreeMap<MetricId, GradeBand> {
        pairs.into_iter().map(|(m, b)| (m, band(b))).collect()
    }

    #[test]
    fn group_vote_agreement_and_minimum() {
        let g = MetricGroup::Length;
        assert_eq!(g.vote(&[band(3), band(3), band(3)]).unwrap(), band(3));
        assert_eq!(g.vote(&[band(2), band(5), band(4)]).unwrap(), band(2));
        assert!(matches!(
            g.vote(&[band(1), band(2)]),
            Err(IntegrateError::WrongArity { .. })
        ));
    }

    #[test]
    fn unanimous_votes() {
        let result = integrate_bands(&bands_from([
            (MetricId::Dc, 2),
            (MetricId::Spache, 2),
            (MetricId::Fres, 2),
            (MetricId::Fkgl, 2),
            (MetricId::Cli, 2),
            (MetricId::Lw, 2),
            (MetricId::Fog, 2),
        ]))
        .unwrap();
        assert_eq!(result.final_band, band(2));
        assert_eq!(result.decided_by, DecisionRule::Unanimous);
        assert_eq!(result.group_votes, [band(2); 3]);
    }

    #[test]
    fn mode_wins_with_two_votes() {
        // groups vote 1 (word-list disagrees, min), 4, 4
        let result = integrate_bands(&bands_from([
            (MetricId::Dc, 1),
            (MetricId::Spache, 3),
            (MetricId::Fres, 4),
            (MetricId::Fkgl, 4),
            (MetricId::Cli, 4),
            (MetricId::Lw, 4),
            (MetricId::Fog, 4),
        ]))
        .unwrap();
        assert_eq!(result.group_votes, [band(1), band(4), band(4)]);
        assert_eq!(result.final_band, band(4));
        assert_eq!(result.decided_by, DecisionRule::Mode);
    }

    #[test]
    fn median_resolves_three_way_splits() {
        // votes 2, 5, 3 -> median 3
        let result = integrate_bands(&bands_from([
            (MetricId::Dc, 2),
            (MetricId::Spache, 2),
            (MetricId::Fres, 5),
            (MetricId::Fkgl, 5),
            (MetricId::Cli, 5),
            (MetricId::Lw, 3),
            (MetricId::Fog, 3),
        ]))
        .unwrap();
        assert_eq!(result.group_votes, [band(2), band(5), band(3)]);
        assert_eq!(result.final_band, band(3));
        assert_eq!(result.decided_by, DecisionRule::Median);
    }

    #[test]
    fn missing_metric_is_reported() {
        let mut bands = bands_from([
            (MetricId::Dc, 2),
            (MetricId::Spache, 2),
            (MetricId::Fres, 2),
            (MetricId::Fkgl, 2),
            (MetricId::Cli, 2),
            (MetricId::Lw, 2),
            (MetricId::Fog, 2),
        ]);
        bands.remove(&MetricId::Cli);
        assert_eq!(
            integrate_bands(&bands),
            Err(IntegrateError::MissingMetric(MetricId::Cli))
        );
    }
}

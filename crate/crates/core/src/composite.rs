//! Ranked composite outcomes and their quantiles.
//!
//! A composite outcome merges vital status with a clinical score under a
//! single total order: death ranks strictly below survival with any score,
//! and survivors rank by score. Summary measures over samples of composite
//! outcomes (survival-incorporated quantiles, survivor-restricted medians,
//! survival probabilities) live on [`ArmSample`].
//!
//! Quantiles follow the type-1 convention throughout: the order statistic at
//! 1-based index `ceil(q * n)` of the ascending sort, equivalently the
//! left-continuous inverse of the empirical CDF. The quantile of a composite
//! sample is therefore always an observed composite value, never an
//! interpolation between death and a score.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::scalar::Score;
use crate::strata::StratumLabel;

/// Absolute snap applied before `ceil` when converting a quantile level to an
/// order-statistic index. Absorbs binary representation error in decimal
/// levels (`0.9 * 10` evaluates to `9.000000000000002` in f64; the intended
/// index is 9, not 10).
const INDEX_SNAP: f64 = 1e-9;

/// A validated finite clinical score observed on a survivor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivorScore<S: Score>(S);

impl<S: Score> SurvivorScore<S> {
    /// Wraps a score, rejecting NaN and infinities.
    pub fn new(score: S) -> Result<Self, Error> {
        if score.is_finite() {
            Ok(SurvivorScore(score))
        } else {
            Err(Error::NonFiniteScore(format!("{score}")))
        }
    }

    pub fn value(&self) -> S {
        self.0
    }
}

impl<S: Score> Eq for SurvivorScore<S> {}

impl<S: Score> PartialOrd for SurvivorScore<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Score> Ord for SurvivorScore<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Finite by construction, so the order is total.
        self.0
            .partial_cmp(&other.0)
            .expect("survivor scores are finite")
    }
}

impl<S: Score> fmt::Display for SurvivorScore<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One subject's composite outcome: death, or survival with a score.
///
/// The derived/implemented order is the composite ranking: `Death` compares
/// strictly less than every `Survived`, deaths compare equal to each other,
/// and survivors compare by score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CompositeOutcome<S: Score> {
    Death,
    Survived(SurvivorScore<S>),
}

impl<S: Score> CompositeOutcome<S> {
    /// Survival with the given score; rejects non-finite scores.
    pub fn survived(score: S) -> Result<Self, Error> {
        Ok(CompositeOutcome::Survived(SurvivorScore::new(score)?))
    }

    pub fn is_death(&self) -> bool {
        matches!(self, CompositeOutcome::Death)
    }

    /// The survivor score, or `None` for a death.
    pub fn score(&self) -> Option<S> {
        match self {
            CompositeOutcome::Death => None,
            CompositeOutcome::Survived(s) => Some(s.value()),
        }
    }
}

impl<S: Score> fmt::Display for CompositeOutcome<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositeOutcome::Death => write!(f, "death"),
            CompositeOutcome::Survived(s) => write!(f, "{s}"),
        }
    }
}

/// Treatment arm indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arm {
    /// Arm 0.
    Control,
    /// Arm 1.
    Treated,
}

impl Arm {
    pub const BOTH: [Arm; 2] = [Arm::Control, Arm::Treated];

    pub fn index(self) -> usize {
        match self {
            Arm::Control => 0,
            Arm::Treated => 1,
        }
    }

    pub fn from_index(index: u8) -> Result<Self, Error> {
        match index {
            0 => Ok(Arm::Control),
            1 => Ok(Arm::Treated),
            other => Err(Error::InvalidArm(other)),
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// One subject: identifier, arm, composite outcome, and (for synthetic data
/// only) the latent principal stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord<S: Score> {
    pub id: String,
    pub arm: Arm,
    pub outcome: CompositeOutcome<S>,
    pub stratum: Option<StratumLabel>,
}

impl<S: Score> SubjectRecord<S> {
    /// Builds a record, checking that a latent stratum (when present) is
    /// consistent with the outcome under the assigned arm.
    pub fn new(
        id: impl Into<String>,
        arm: Arm,
        outcome: CompositeOutcome<S>,
        stratum: Option<StratumLabel>,
    ) -> Result<Self, Error> {
        let id = id.into();
        if let Some(stratum) = stratum {
            let should_survive = stratum.survives(arm);
            if should_survive == outcome.is_death() {
                return Err(Error::StratumOutcomeMismatch {
                    id,
                    stratum: stratum.name(),
                    arm: arm.index() as u8,
                    expected: if should_survive { "survival" } else { "death" },
                });
            }
        }
        Ok(SubjectRecord {
            id,
            arm,
            outcome,
            stratum,
        })
    }
}

/// A quantile level in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileLevel(f64);

impl QuantileLevel {
    pub const MEDIAN: QuantileLevel = QuantileLevel(0.5);

    pub fn new(q: f64) -> Result<Self, Error> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QuantileLevel(q))
        } else {
            Err(Error::InvalidQuantileLevel(q))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// 1-based type-1 order-statistic index for a sample of size `n`:
    /// the smallest integer k with k >= q * n.
    pub fn order_index(&self, n: usize) -> usize {
        debug_assert!(n >= 1);
        let target = self.0 * n as f64;
        let index = (target - INDEX_SNAP).ceil() as usize;
        index.clamp(1, n)
    }
}

/// A non-empty sample of composite outcomes from one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSample<S: Score> {
    outcomes: Vec<CompositeOutcome<S>>,
}

impl<S: Score> ArmSample<S> {
    pub fn new(outcomes: Vec<CompositeOutcome<S>>) -> Result<Self, Error> {
        if outcomes.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(ArmSample { outcomes })
    }

    /// Builds a sample from counts: `n_death` deaths plus `count` survivors
    /// at each listed score.
    pub fn from_counts(n_death: usize, scored: &[(S, usize)]) -> Result<Self, Error> {
        let mut outcomes = vec![CompositeOutcome::Death; n_death];
        for &(score, count) in scored {
            let outcome = CompositeOutcome::survived(score)?;
            outcomes.extend(std::iter::repeat_n(outcome, count));
        }
        Self::new(outcomes)
    }

    /// Collects the outcomes of all records assigned to `arm`.
    pub fn from_records(records: &[SubjectRecord<S>], arm: Arm) -> Result<Self, Error> {
        Self::new(
            records
                .iter()
                .filter(|r| r.arm == arm)
                .map(|r| r.outcome)
                .collect(),
        )
    }

    pub fn outcomes(&self) -> &[CompositeOutcome<S>] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // size >= 1 by construction
    }

    pub fn n_deaths(&self) -> usize {
        self.outcomes.iter().filter(|o| o.is_death()).count()
    }

    pub fn min_survivor_score(&self) -> Option<S> {
        self.survivor_scores().into_iter().reduce(S::min)
    }

    fn survivor_scores(&self) -> Vec<S> {
        self.outcomes.iter().filter_map(|o| o.score()).collect()
    }

    /// The type-1 empirical quantile of the ranked composite outcomes.
    ///
    /// Returns death exactly when the death fraction reaches the order
    /// statistic: with more than `q * n` deaths (or exactly `q * n`, the
    /// boundary case) the quantile is death; otherwise it is a survivor
    /// value.
    pub fn survival_incorporated_quantile(&self, level: QuantileLevel) -> CompositeOutcome<S> {
        let mut sorted = self.outcomes.clone();
        sorted.sort_unstable();
        sorted[level.order_index(sorted.len()) - 1]
    }

    /// Type-1 median of the scores of the survivors only.
    pub fn median_in_survivors(&self) -> Result<S, Error> {
        let mut scores = self.survivor_scores();
        if scores.is_empty() {
            return Err(Error::NoSurvivors);
        }
        scores.sort_unstable_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
        Ok(scores[QuantileLevel::MEDIAN.order_index(scores.len()) - 1])
    }

    /// Fraction of outcomes that are survivals.
    pub fn survival_probability(&self) -> f64 {
        let survived = self.outcomes.len() - self.n_deaths();
        survived as f64 / self.outcomes.len() as f64
    }

    /// Fraction of subjects alive with a score strictly above `threshold`.
    pub fn prob_alive_above(&self, threshold: S) -> Result<f64, Error> {
        if !threshold.is_finite() {
            return Err(Error::NonFiniteScore(format!("{threshold}")));
        }
        let above = self
            .outcomes
            .iter()
            .filter(|o| o.score().is_some_and(|s| s > threshold))
            .count();
        Ok(above as f64 / self.outcomes.len() as f64)
    }

    /// Maps death to `sentinel` and survival to its score, in sample order.
    ///
    /// The sentinel must be strictly below every survivor score so that the
    /// numeric order of the encoded values reproduces the composite ranking.
    pub fn sentinel_encode(&self, sentinel: S) -> Result<Vec<S>, Error> {
        if !sentinel.is_finite() {
            return Err(Error::NonFiniteScore(format!("{sentinel}")));
        }
        if let Some(min) = self.min_survivor_score() {
            if sentinel >= min {
                return Err(Error::SentinelNotBelow {
                    sentinel: format!("{sentinel}"),
                    min_score: format!("{min}"),
                });
            }
        }
        Ok(self
            .outcomes
            .iter()
            .map(|o| o.score().unwrap_or(sentinel))
            .collect())
    }
}

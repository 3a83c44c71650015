//! Principal-stratification scenarios: fully specified populations with
//! latent survival strata, their observable marginals, and synthetic data
//! generation.
//!
//! A subject's stratum is determined by the pair of potential survival
//! indicators (survival under arm 0, survival under arm 1). A scenario
//! fixes the stratum proportions and, for every (stratum, arm) pair under
//! which the stratum survives, a discrete distribution of clinical scores.
//! Everything observable follows from those inputs; everything latent (the
//! always-survivor summaries) is available through oracles because the
//! scenario is ground truth, not something estimated from data.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::composite::{Arm, CompositeOutcome, QuantileLevel, SubjectRecord};
use crate::error::Error;

/// Tolerance for probability sums; inputs within it are normalized, inputs
/// beyond it are rejected rather than silently rescaled.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Snap used when inverting discrete CDFs, matching the order-statistic snap.
const CDF_SNAP: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Strata
// ---------------------------------------------------------------------------

/// Principal stratum: the joint potential survival status under both arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumLabel {
    /// Survives under either arm.
    AlwaysSurvivor,
    /// Dies under arm 0, survives under arm 1.
    Protected,
    /// Survives under arm 0, dies under arm 1.
    Harmed,
    /// Dies under either arm.
    NeverSurvivor,
}

impl StratumLabel {
    pub const ALL: [StratumLabel; 4] = [
        StratumLabel::AlwaysSurvivor,
        StratumLabel::Protected,
        StratumLabel::Harmed,
        StratumLabel::NeverSurvivor,
    ];

    /// Potential survival indicators (under arm 0, under arm 1).
    pub fn potential_survival(self) -> (bool, bool) {
        match self {
            StratumLabel::AlwaysSurvivor => (true, true),
            StratumLabel::Protected => (false, true),
            StratumLabel::Harmed => (true, false),
            StratumLabel::NeverSurvivor => (false, false),
        }
    }

    /// The unique stratum with the given potential survival indicators.
    pub fn from_potential_survival(under_arm0: bool, under_arm1: bool) -> Self {
        match (under_arm0, under_arm1) {
            (true, true) => StratumLabel::AlwaysSurvivor,
            (false, true) => StratumLabel::Protected,
            (true, false) => StratumLabel::Harmed,
            (false, false) => StratumLabel::NeverSurvivor,
        }
    }

    /// Whether a subject in this stratum survives under `arm`.
    pub fn survives(self, arm: Arm) -> bool {
        let (s0, s1) = self.potential_survival();
        match arm {
            Arm::Control => s0,
            Arm::Treated => s1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StratumLabel::AlwaysSurvivor => "always_survivor",
            StratumLabel::Protected => "protected",
            StratumLabel::Harmed => "harmed",
            StratumLabel::NeverSurvivor => "never_survivor",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        StratumLabel::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stratum proportions, one per label.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StratumProportions {
    pub always_survivor: f64,
    pub protected: f64,
    pub harmed: f64,
    pub never_survivor: f64,
}

impl StratumProportions {
    pub fn get(&self, label: StratumLabel) -> f64 {
        match label {
            StratumLabel::AlwaysSurvivor => self.always_survivor,
            StratumLabel::Protected => self.protected,
            StratumLabel::Harmed => self.harmed,
            StratumLabel::NeverSurvivor => self.never_survivor,
        }
    }

    fn set(&mut self, label: StratumLabel, value: f64) {
        match label {
            StratumLabel::AlwaysSurvivor => self.always_survivor = value,
            StratumLabel::Protected => self.protected = value,
            StratumLabel::Harmed => self.harmed = value,
            StratumLabel::NeverSurvivor => self.never_survivor = value,
        }
    }

    fn sum(&self) -> f64 {
        self.always_survivor + self.protected + self.harmed + self.never_survivor
    }
}

// ---------------------------------------------------------------------------
// Discrete score distributions
// ---------------------------------------------------------------------------

/// A discrete distribution over finite clinical scores.
///
/// Entries are kept sorted by score with probabilities normalized to sum to
/// exactly 1.0 (normalization is idempotent, so serializing and re-reading a
/// distribution reproduces it bit for bit).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDist {
    entries: Vec<(f64, f64)>,
}

impl ScoreDist {
    /// Validates and normalizes `(score, probability)` pairs.
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self, Vec<String>> {
        let mut violations = Vec::new();
        if entries.is_empty() {
            violations.push("score distribution is empty".to_string());
        }
        for &(score, prob) in &entries {
            if !score.is_finite() {
                violations.push(format!("score {score} is not finite"));
            }
            if !prob.is_finite() || prob < 0.0 {
                violations.push(format!("probability {prob} for score {score} is invalid"));
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        let sum: f64 = entries.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(vec![format!(
                "probabilities do not sum to 1 (sum = {sum})"
            )]);
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        for window in entries.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(vec![format!("duplicate score {}", window[0].0)]);
            }
        }
        Ok(Self::normalized(entries))
    }

    /// All mass on a single score.
    pub fn point_mass(score: f64) -> Result<Self, Vec<String>> {
        Self::new(vec![(score, 1.0)])
    }

    /// Normalizes so probabilities sum to exactly 1.0. Idempotent: an input
    /// already summing to 1.0 is returned unchanged.
    fn normalized(mut entries: Vec<(f64, f64)>) -> Self {
        let sum: f64 = entries.iter().map(|&(_, p)| p).sum();
        if sum != 1.0 {
            for entry in &mut entries {
                entry.1 /= sum;
            }
            // Dump the residual rounding error on the largest entry.
            let new_sum: f64 = entries.iter().map(|&(_, p)| p).sum();
            let largest = entries
                .iter()
                .enumerate()
                .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .map(|(i, _)| i)
                .expect("non-empty");
            entries[largest].1 += 1.0 - new_sum;
        }
        ScoreDist { entries }
    }

    /// Weighted mixture of distributions; `None` if the total weight is zero.
    /// The second element is the total weight.
    pub fn mixture(parts: &[(f64, &ScoreDist)]) -> Option<(Self, f64)> {
        let total: f64 = parts.iter().map(|&(w, _)| w).sum();
        if total <= 0.0 {
            return None;
        }
        let mut weighted: Vec<(f64, f64)> = parts
            .iter()
            .flat_map(|&(w, dist)| dist.entries.iter().map(move |&(s, p)| (s, w * p)))
            .collect();
        weighted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(weighted.len());
        for (score, mass) in weighted {
            match merged.last_mut() {
                Some(last) if last.0 == score => last.1 += mass,
                _ => merged.push((score, mass)),
            }
        }
        for entry in &mut merged {
            entry.1 /= total;
        }
        Some((Self::normalized(merged), total))
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// Probability of a score strictly above `threshold`.
    pub fn prob_above(&self, threshold: f64) -> f64 {
        self.entries
            .iter()
            .filter(|&&(s, _)| s > threshold)
            .map(|&(_, p)| p)
            .sum()
    }

    /// Population type-1 quantile: the smallest score whose CDF reaches
    /// `level` (levels in (0, 1]; snapped against rounding noise).
    pub fn quantile(&self, level: f64) -> f64 {
        debug_assert!(level > 0.0 && level <= 1.0 + CDF_SNAP);
        let mut cum = 0.0;
        for &(score, prob) in &self.entries {
            cum += prob;
            if cum >= level - CDF_SNAP {
                return score;
            }
        }
        self.entries.last().expect("non-empty").0
    }

    /// Population type-1 median.
    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Inverse-CDF draw from the distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut cum = 0.0;
        for &(score, prob) in &self.entries {
            cum += prob;
            if u < cum {
                return score;
            }
        }
        self.entries.last().expect("non-empty").0
    }
}

// ---------------------------------------------------------------------------
// Scenario specification
// ---------------------------------------------------------------------------

/// A fully specified principal-stratification population.
///
/// Validated on construction: an existing `ScenarioSpec` always satisfies
/// its invariants (proportions sum to one, no harmed stratum when
/// monotonicity is asserted, score distributions supplied exactly where a
/// stratum survives).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    proportions: StratumProportions,
    score_dists: BTreeMap<(StratumLabel, Arm), ScoreDist>,
    monotonicity_asserted: bool,
}

impl ScenarioSpec {
    /// Validates every scenario invariant, returning the full list of
    /// violations on failure.
    pub fn new(
        proportions: StratumProportions,
        score_dists: impl IntoIterator<Item = ((StratumLabel, Arm), ScoreDist)>,
        monotonicity_asserted: bool,
    ) -> Result<Self, Vec<String>> {
        let score_dists: BTreeMap<_, _> = score_dists.into_iter().collect();
        let mut violations = Vec::new();

        for label in StratumLabel::ALL {
            let p = proportions.get(label);
            if !p.is_finite() || p < 0.0 {
                violations.push(format!("proportion for {label} is invalid ({p})"));
            }
        }
        let sum = proportions.sum();
        if sum.is_finite() && (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            violations.push(format!("proportions do not sum to 1 (sum = {sum})"));
        }
        if monotonicity_asserted && proportions.harmed > 0.0 {
            violations.push(format!(
                "monotonicity violated: harmed proportion is {}",
                proportions.harmed
            ));
        }
        for (&(label, arm), _) in &score_dists {
            if !label.survives(arm) {
                violations.push(format!(
                    "score distribution supplied for ({label}, arm {arm}), but that stratum dies under arm {arm}"
                ));
            }
        }
        for label in StratumLabel::ALL {
            if proportions.get(label) <= 0.0 {
                continue;
            }
            for arm in Arm::BOTH {
                if label.survives(arm) && !score_dists.contains_key(&(label, arm)) {
                    violations.push(format!(
                        "missing score distribution for ({label}, arm {arm})"
                    ));
                }
            }
        }

        if !violations.is_empty() {
            return Err(violations);
        }

        // Normalize proportions to sum to exactly 1.0 (idempotent, residual
        // on the largest stratum).
        let mut proportions = proportions;
        if sum != 1.0 {
            for label in StratumLabel::ALL {
                proportions.set(label, proportions.get(label) / sum);
            }
            let new_sum = proportions.sum();
            let largest = StratumLabel::ALL
                .into_iter()
                .max_by(|a, b| proportions.get(*a).total_cmp(&proportions.get(*b)))
                .expect("non-empty");
            proportions.set(largest, proportions.get(largest) + (1.0 - new_sum));
        }

        Ok(ScenarioSpec {
            proportions,
            score_dists,
            monotonicity_asserted,
        })
    }

    pub fn proportions(&self) -> &StratumProportions {
        &self.proportions
    }

    pub fn monotonicity_asserted(&self) -> bool {
        self.monotonicity_asserted
    }

    pub fn score_dist(&self, label: StratumLabel, arm: Arm) -> Option<&ScoreDist> {
        self.score_dists.get(&(label, arm))
    }

    pub fn score_dists(&self) -> impl Iterator<Item = (&(StratumLabel, Arm), &ScoreDist)> {
        self.score_dists.iter()
    }

    /// What an observer of arm `arm` sees: the death probability and the
    /// proportion-weighted mixture of the surviving strata's score
    /// distributions.
    pub fn observed_marginals(&self, arm: Arm) -> ObservedMarginals {
        let parts: Vec<(f64, &ScoreDist)> = StratumLabel::ALL
            .into_iter()
            .filter(|l| l.survives(arm) && self.proportions.get(*l) > 0.0)
            .map(|l| {
                (
                    self.proportions.get(l),
                    self.score_dist(l, arm).expect("validated present"),
                )
            })
            .collect();
        match ScoreDist::mixture(&parts) {
            Some((dist, p_survive)) => ObservedMarginals {
                p_death: 1.0 - p_survive,
                survivor_scores: Some(dist),
            },
            None => ObservedMarginals {
                p_death: 1.0,
                survivor_scores: None,
            },
        }
    }

    /// Population type-1 median of the always-survivors' scores under `arm`,
    /// read straight from the latent strata (no identification involved).
    pub fn always_survivor_median_oracle(&self, arm: Arm) -> Result<f64, Error> {
        if self.proportions.always_survivor <= 0.0 {
            return Err(Error::NoAlwaysSurvivors);
        }
        Ok(self
            .score_dist(StratumLabel::AlwaysSurvivor, arm)
            .expect("validated present")
            .median())
    }
}

/// Observable summary of one arm of a scenario: death probability plus the
/// survivor score distribution (`None` when nobody survives).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedMarginals {
    pub p_death: f64,
    pub survivor_scores: Option<ScoreDist>,
}

impl ObservedMarginals {
    pub fn p_survival(&self) -> f64 {
        1.0 - self.p_death
    }

    /// Population type-1 quantile of the ranked composite outcome: death
    /// when the death mass reaches the level, otherwise the survivor score
    /// at the residual level.
    pub fn composite_quantile(&self, level: QuantileLevel) -> CompositeOutcome<f64> {
        let q = level.value();
        if self.p_death >= q - CDF_SNAP {
            return CompositeOutcome::Death;
        }
        match &self.survivor_scores {
            Some(dist) => {
                let residual = (q - self.p_death) / self.p_survival();
                CompositeOutcome::survived(dist.quantile(residual))
                    .expect("distribution scores are finite")
            }
            None => CompositeOutcome::Death,
        }
    }

    /// Median score among survivors, when any survive.
    pub fn survivor_median(&self) -> Option<f64> {
        self.survivor_scores.as_ref().map(|d| d.median())
    }

    /// Probability of being alive with a score strictly above `threshold`.
    pub fn prob_alive_above(&self, threshold: f64) -> f64 {
        match &self.survivor_scores {
            Some(dist) => self.p_survival() * dist.prob_above(threshold),
            None => 0.0,
        }
    }
}

/// The always-survivor proportion identified from the arm-0 survival
/// probability; valid only under monotonicity, where arm-0 survivors are
/// exactly the always-survivors.
pub fn always_survivor_fraction_identified(
    p_survive_arm0: f64,
    monotonicity: bool,
) -> Result<f64, Error> {
    if !monotonicity {
        return Err(Error::NotIdentifiedWithoutMonotonicity);
    }
    if !(0.0..=1.0).contains(&p_survive_arm0) {
        return Err(Error::InvalidProbability(p_survive_arm0));
    }
    Ok(p_survive_arm0)
}

// ---------------------------------------------------------------------------
// Synthetic population generation
// ---------------------------------------------------------------------------

/// How subjects are assigned to arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Assignment {
    /// Independent Bernoulli(p_treat) assignment.
    Randomized { p_treat: f64 },
    /// Everyone on arm 0.
    Arm0Only,
    /// Everyone on arm 1.
    Arm1Only,
}

impl Default for Assignment {
    fn default() -> Self {
        Assignment::Randomized { p_treat: 0.5 }
    }
}

/// RNG for one subject: a ChaCha12 stream keyed by the base seed, with the
/// subject index as the stream number. Each subject owns an independent
/// stream, so generation can be partitioned by index ranges without changing
/// the output.
fn subject_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_stratum<R: Rng + ?Sized>(proportions: &StratumProportions, rng: &mut R) -> StratumLabel {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    let mut last = StratumLabel::NeverSurvivor;
    for label in StratumLabel::ALL {
        let p = proportions.get(label);
        if p <= 0.0 {
            continue;
        }
        cum += p;
        last = label;
        if u < cum {
            return label;
        }
    }
    last
}

/// Draws `n` subjects from the scenario. Identical `(spec, n, seed,
/// assignment)` reproduce identical records bit for bit.
pub fn generate_population(
    spec: &ScenarioSpec,
    n: u64,
    seed: u64,
    assignment: Assignment,
) -> Result<Vec<SubjectRecord<f64>>, Error> {
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    generate_population_range(spec, 0..n, seed, assignment)
}

/// Draws the subjects with the given indices; concatenating disjoint ranges
/// reproduces [`generate_population`] exactly.
pub fn generate_population_range(
    spec: &ScenarioSpec,
    indices: Range<u64>,
    seed: u64,
    assignment: Assignment,
) -> Result<Vec<SubjectRecord<f64>>, Error> {
    if let Assignment::Randomized { p_treat } = assignment {
        if !(0.0..=1.0).contains(&p_treat) {
            return Err(Error::InvalidProbability(p_treat));
        }
    }
    let mut records = Vec::with_capacity((indices.end - indices.start) as usize);
    for i in indices {
        let mut rng = subject_rng(seed, i);
        let stratum = sample_stratum(&spec.proportions, &mut rng);
        let arm = match assignment {
            Assignment::Randomized { p_treat } => {
                if rng.random::<f64>() < p_treat {
                    Arm::Treated
                } else {
                    Arm::Control
                }
            }
            Assignment::Arm0Only => Arm::Control,
            Assignment::Arm1Only => Arm::Treated,
        };
        let outcome = if stratum.survives(arm) {
            let dist = spec
                .score_dist(stratum, arm)
                .expect("surviving stratum with positive proportion has a distribution");
            CompositeOutcome::survived(dist.sample(&mut rng))
                .expect("distribution scores are finite")
        } else {
            CompositeOutcome::Death
        };
        records.push(
            SubjectRecord::new(format!("s{i}"), arm, outcome, Some(stratum))
                .expect("consistent by construction"),
        );
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::ArmSample;

    /// Scenario used across tests: always-survivors 56% (arm-0 scores 30/56
    /// good, arm-1 scores 24/56 good), protected 24% (arm-1 scores 11/24
    /// good), never-survivors 20%, monotone.
    pub(crate) fn reference_scenario() -> ScenarioSpec {
        let proportions = StratumProportions {
            always_survivor: 0.56,
            protected: 0.24,
            harmed: 0.0,
            never_survivor: 0.20,
        };
        let dists = [
            (
                (StratumLabel::AlwaysSurvivor, Arm::Control),
                ScoreDist::new(vec![(0.0, 26.0 / 56.0), (1.0, 30.0 / 56.0)]).unwrap(),
            ),
            (
                (StratumLabel::AlwaysSurvivor, Arm::Treated),
                ScoreDist::new(vec![(0.0, 32.0 / 56.0), (1.0, 24.0 / 56.0)]).unwrap(),
            ),
            (
                (StratumLabel::Protected, Arm::Treated),
                ScoreDist::new(vec![(0.0, 13.0 / 24.0), (1.0, 11.0 / 24.0)]).unwrap(),
            ),
        ];
        ScenarioSpec::new(proportions, dists, true).unwrap()
    }

    #[test]
    fn stratum_table_bijection_round_trips() {
        for label in StratumLabel::ALL {
            let (s0, s1) = label.potential_survival();
            assert_eq!(StratumLabel::from_potential_survival(s0, s1), label);
        }
        assert_eq!(
            StratumLabel::AlwaysSurvivor.potential_survival(),
            (true, true)
        );
        assert_eq!(StratumLabel::Protected.potential_survival(), (false, true));
        assert_eq!(StratumLabel::Harmed.potential_survival(), (true, false));
        assert_eq!(
            StratumLabel::NeverSurvivor.potential_survival(),
            (false, false)
        );
    }

    #[test]
    fn reference_scenario_validates() {
        reference_scenario();
    }

    #[test]
    fn monotonicity_with_harmed_stratum_rejected() {
        let proportions = StratumProportions {
            always_survivor: 0.56,
            protected: 0.19,
            harmed: 0.05,
            never_survivor: 0.20,
        };
        let dist = ScoreDist::point_mass(1.0).unwrap();
        let dists = [
            ((StratumLabel::AlwaysSurvivor, Arm::Control), dist.clone()),
            ((StratumLabel::AlwaysSurvivor, Arm::Treated), dist.clone()),
            ((StratumLabel::Protected, Arm::Treated), dist.clone()),
            ((StratumLabel::Harmed, Arm::Control), dist),
        ];
        let err = ScenarioSpec::new(proportions, dists, true).unwrap_err();
        assert!(err.iter().any(|v| v.contains("monotonicity violated")));
    }

    #[test]
    fn proportions_must_sum_to_one() {
        let proportions = StratumProportions {
            always_survivor: 0.5,
            protected: 0.2,
            harmed: 0.0,
            never_survivor: 0.2,
        };
        let dist = ScoreDist::point_mass(1.0).unwrap();
        let dists = [
            ((StratumLabel::AlwaysSurvivor, Arm::Control), dist.clone()),
            ((StratumLabel::AlwaysSurvivor, Arm::Treated), dist.clone()),
            ((StratumLabel::Protected, Arm::Treated), dist),
        ];
        let err = ScenarioSpec::new(proportions, dists, true).unwrap_err();
        assert!(err.iter().any(|v| v.contains("do not sum to 1")));
    }

    #[test]
    fn distribution_for_dead_pair_rejected() {
        let proportions = StratumProportions {
            always_survivor: 0.8,
            protected: 0.0,
            harmed: 0.0,
            never_survivor: 0.2,
        };
        let dist = ScoreDist::point_mass(1.0).unwrap();
        let dists = [
            ((StratumLabel::AlwaysSurvivor, Arm::Control), dist.clone()),
            ((StratumLabel::AlwaysSurvivor, Arm::Treated), dist.clone()),
            ((StratumLabel::NeverSurvivor, Arm::Control), dist),
        ];
        let err = ScenarioSpec::new(proportions, dists, true).unwrap_err();
        assert!(err.iter().any(|v| v.contains("dies under arm 0")));
    }

    #[test]
    fn missing_distribution_reported() {
        let proportions = StratumProportions {
            always_survivor: 1.0,
            ..Default::default()
        };
        let err = ScenarioSpec::new(proportions, [], true).unwrap_err();
        assert_eq!(err.len(), 2); // both arms missing
        assert!(err[0].contains("missing score distribution"));
    }

    #[test]
    fn all_violations_listed_together() {
        let proportions = StratumProportions {
            always_survivor: 0.5,
            protected: 0.2,
            harmed: 0.1,
            never_survivor: 0.1,
        };
        let err = ScenarioSpec::new(proportions, [], true).unwrap_err();
        assert!(err.len() >= 3); // sum, monotonicity, missing dists
    }

    #[test]
    fn score_dist_validation() {
        assert!(ScoreDist::new(vec![]).is_err());
        assert!(ScoreDist::new(vec![(0.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(ScoreDist::new(vec![(f64::NAN, 1.0)]).is_err());
        assert!(ScoreDist::new(vec![(0.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(ScoreDist::new(vec![(0.0, -0.1), (1.0, 1.1)]).is_err());
        let d = ScoreDist::new(vec![(1.0, 0.25), (0.0, 0.75)]).unwrap();
        assert_eq!(d.entries()[0].0, 0.0); // sorted
    }

    #[test]
    fn score_dist_quantiles() {
        let d = ScoreDist::new(vec![(0.0, 0.4), (1.0, 0.6)]).unwrap();
        assert_eq!(d.median(), 1.0);
        let d = ScoreDist::new(vec![(0.0, 0.6), (1.0, 0.4)]).unwrap();
        assert_eq!(d.median(), 0.0);
        // Boundary: mass at the level lands on the lower score.
        let d = ScoreDist::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(d.median(), 0.0);
        assert_eq!(d.quantile(1.0), 1.0);
        assert_eq!(ScoreDist::point_mass(7.5).unwrap().median(), 7.5);
    }

    #[test]
    fn observed_marginals_mix_surviving_strata() {
        let spec = reference_scenario();

        let m0 = spec.observed_marginals(Arm::Control);
        assert!((m0.p_death - 0.44).abs() < 1e-12);
        let d0 = m0.survivor_scores.as_ref().unwrap();
        assert!((d0.prob_above(0.5) - 30.0 / 56.0).abs() < 1e-12);

        let m1 = spec.observed_marginals(Arm::Treated);
        assert!((m1.p_death - 0.20).abs() < 1e-12);
        let d1 = m1.survivor_scores.as_ref().unwrap();
        assert!((d1.prob_above(0.5) - 35.0 / 80.0).abs() < 1e-12);
        assert!((m1.prob_alive_above(0.5) - 0.35).abs() < 1e-12);
    }

    #[test]
    fn all_dead_scenario_has_empty_survivor_marginals() {
        let proportions = StratumProportions {
            never_survivor: 1.0,
            ..Default::default()
        };
        let spec = ScenarioSpec::new(proportions, [], true).unwrap();
        let m = spec.observed_marginals(Arm::Control);
        assert_eq!(m.p_death, 1.0);
        assert!(m.survivor_scores.is_none());
        assert_eq!(m.composite_quantile(QuantileLevel::MEDIAN), CompositeOutcome::Death);
    }

    #[test]
    fn always_survivor_median_oracle_matches_reference() {
        let spec = reference_scenario();
        assert_eq!(spec.always_survivor_median_oracle(Arm::Control).unwrap(), 1.0);
        assert_eq!(spec.always_survivor_median_oracle(Arm::Treated).unwrap(), 0.0);
    }

    #[test]
    fn always_survivor_median_requires_always_survivors() {
        let proportions = StratumProportions {
            protected: 0.5,
            never_survivor: 0.5,
            ..Default::default()
        };
        let dist = ScoreDist::point_mass(1.0).unwrap();
        let spec = ScenarioSpec::new(
            proportions,
            [((StratumLabel::Protected, Arm::Treated), dist)],
            true,
        )
        .unwrap();
        assert!(matches!(
            spec.always_survivor_median_oracle(Arm::Control),
            Err(Error::NoAlwaysSurvivors)
        ));
    }

    #[test]
    fn point_mass_oracle_returns_the_point() {
        let proportions = StratumProportions {
            always_survivor: 1.0,
            ..Default::default()
        };
        let dist = ScoreDist::point_mass(42.0).unwrap();
        let spec = ScenarioSpec::new(
            proportions,
            [
                ((StratumLabel::AlwaysSurvivor, Arm::Control), dist.clone()),
                ((StratumLabel::AlwaysSurvivor, Arm::Treated), dist),
            ],
            true,
        )
        .unwrap();
        assert_eq!(spec.always_survivor_median_oracle(Arm::Treated).unwrap(), 42.0);
    }

    #[test]
    fn identified_fraction_requires_monotonicity() {
        assert_eq!(
            always_survivor_fraction_identified(0.56, true).unwrap(),
            0.56
        );
        assert_eq!(always_survivor_fraction_identified(0.0, true).unwrap(), 0.0);
        assert!(matches!(
            always_survivor_fraction_identified(0.56, false),
            Err(Error::NotIdentifiedWithoutMonotonicity)
        ));
        assert!(always_survivor_fraction_identified(1.5, true).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = reference_scenario();
        let a = generate_population(&spec, 500, 7, Assignment::default()).unwrap();
        let b = generate_population(&spec, 500, 7, Assignment::default()).unwrap();
        assert_eq!(a, b);
        let c = generate_population(&spec, 500, 8, Assignment::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generation_partitioning_is_transparent() {
        let spec = reference_scenario();
        let whole = generate_population(&spec, 400, 3, Assignment::Arm1Only).unwrap();
        let mut parts = generate_population_range(&spec, 0..150, 3, Assignment::Arm1Only).unwrap();
        parts.extend(generate_population_range(&spec, 150..400, 3, Assignment::Arm1Only).unwrap());
        assert_eq!(whole, parts);
    }

    #[test]
    fn generated_strata_honor_potential_survival() {
        let spec = reference_scenario();
        let records = generate_population(&spec, 2000, 11, Assignment::default()).unwrap();
        for r in &records {
            let stratum = r.stratum.unwrap();
            assert_eq!(stratum.survives(r.arm), !r.outcome.is_death(), "{r:?}");
            assert_ne!(stratum, StratumLabel::Harmed); // monotone scenario
        }
        // Protected subjects under arm 0 died; always-survivors always survive.
        assert!(records
            .iter()
            .filter(|r| r.stratum == Some(StratumLabel::Protected) && r.arm == Arm::Control)
            .all(|r| r.outcome.is_death()));
        assert!(records
            .iter()
            .filter(|r| r.stratum == Some(StratumLabel::AlwaysSurvivor))
            .all(|r| !r.outcome.is_death()));
    }

    #[test]
    fn all_never_survivors_generate_only_deaths() {
        let proportions = StratumProportions {
            never_survivor: 1.0,
            ..Default::default()
        };
        let spec = ScenarioSpec::new(proportions, [], true).unwrap();
        let records = generate_population(&spec, 50, 1, Assignment::default()).unwrap();
        assert!(records.iter().all(|r| r.outcome.is_death()));
    }

    #[test]
    fn zero_population_rejected() {
        let spec = reference_scenario();
        assert!(matches!(
            generate_population(&spec, 0, 1, Assignment::default()),
            Err(Error::EmptyPopulation)
        ));
    }

    #[test]
    fn empirical_margins_track_population_margins() {
        let spec = reference_scenario();
        let n = 100_000u64;
        let records = generate_population(&spec, n, 7, Assignment::Arm1Only).unwrap();
        let sample = ArmSample::from_records(&records, Arm::Treated).unwrap();
        let death_frac = 1.0 - sample.survival_probability();
        assert!((death_frac - 0.20).abs() < 0.002, "death fraction {death_frac}");
    }

    #[test]
    fn monotone_observed_arm0_median_equals_always_survivor_oracle() {
        let spec = reference_scenario();
        let m0 = spec.observed_marginals(Arm::Control);
        assert_eq!(
            m0.survivor_median().unwrap(),
            spec.always_survivor_median_oracle(Arm::Control).unwrap()
        );
    }
}

//! Agents, game parameters and reproducible scenario generation.
//!
//! A [`Scenario`] is immutable once built: agents are stored sorted by
//! ideology with strictly distinct values, so agent indices double as
//! ideological ranks everywhere else in the crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Smallest admissible gap between two ideologies.
pub const MIN_TYPE_GAP: f64 = 1e-9;

/// Current version of the scenario file format.
pub const SCENARIO_SCHEMA: u64 = 1;

/// An ideological location in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ideology(f64);

impl Ideology {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter {
                name: "ideology",
                reason: format!("{value} is outside [0, 1]"),
            });
        }
        Ok(Ideology(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CsfForm {
    #[default]
    Ratio,
    Difference,
}

/// How the per-agent tolerance cost scale is derived from the agent's type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlexibilityMode {
    /// Every agent uses the scenario-wide `flexibility`.
    #[default]
    Uniform,
    /// `τ_i = base + slope·|θ_i − 1/2|`.
    StubbornExtremists { base: f64, slope: f64 },
    /// `τ_i = max(cap − slope·|θ_i − 1/2|, 0)`.
    FlexibleExtremists { cap: f64, slope: f64 },
}

/// Which notion of strength enters the first two contest arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrengthMode {
    #[default]
    Baseline,
    /// Links to allies shared with the opponent do not count.
    Adjusted,
    /// Best path products to agents reachable within `max_length` steps.
    PathBased { max_length: usize },
}

/// Which opponents a player collects contest payoffs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DisputeSet {
    /// Everyone outside the player's own tolerance interval.
    #[default]
    Untolerated,
    /// Everyone the player has no link with.
    Unlinked,
}

/// Whose efforts congest a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Congestion {
    /// Everyone in either endpoint's tolerance interval.
    #[default]
    Tolerated,
    /// Only agents in mutual tolerance with an endpoint (plus the endpoints).
    Mutual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TypeDistribution {
    /// Uniform interior draws with the endpoints 0 and 1 pinned.
    #[default]
    UniformPinned,
    ExplicitList,
}

/// Everything about a game except the agents themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub phi: f64,
    pub beta: f64,
    pub alpha: f64,
    #[serde(default)]
    pub csf_form: CsfForm,
    pub effort_cost: f64,
    pub flexibility: f64,
    #[serde(default)]
    pub flexibility_mode: FlexibilityMode,
    #[serde(default)]
    pub strength_mode: StrengthMode,
    #[serde(default)]
    pub dispute_cost: Option<f64>,
    #[serde(default)]
    pub dispute_set: DisputeSet,
    #[serde(default)]
    pub congestion: Congestion,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            phi: 1.0,
            beta: 0.2,
            alpha: 1.0,
            csf_form: CsfForm::Ratio,
            effort_cost: 1.0,
            flexibility: 1.0,
            flexibility_mode: FlexibilityMode::Uniform,
            strength_mode: StrengthMode::Baseline,
            dispute_cost: None,
            dispute_set: DisputeSet::Untolerated,
            congestion: Congestion::Tolerated,
        }
    }
}

impl GameParams {
    pub fn validate(&self) -> Result<()> {
        fn bad(name: &'static str, reason: impl Into<String>) -> Error {
            Error::InvalidParameter {
                name,
                reason: reason.into(),
            }
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(bad("phi", format!("{} is outside [0, 1]", self.phi)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(bad("beta", format!("{} must be finite and ≥ 0", self.beta)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(bad("alpha", format!("{} must be finite and ≥ 0", self.alpha)));
        }
        if !(self.effort_cost > 0.0 && self.effort_cost.is_finite()) {
            return Err(bad("effort_cost", format!("{} must be > 0", self.effort_cost)));
        }
        if !(self.flexibility > 0.0 && self.flexibility.is_finite()) {
            return Err(bad("flexibility", format!("{} must be > 0", self.flexibility)));
        }
        match self.flexibility_mode {
            FlexibilityMode::Uniform => {}
            FlexibilityMode::StubbornExtremists { base, slope } => {
                if !(base > 0.0 && slope >= 0.0) {
                    return Err(bad("flexibility_mode", "stubborn mode needs base > 0, slope ≥ 0"));
                }
            }
            FlexibilityMode::FlexibleExtremists { cap, slope } => {
                if !(cap > 0.0 && slope >= 0.0) {
                    return Err(bad("flexibility_mode", "flexible mode needs cap > 0, slope ≥ 0"));
                }
            }
        }
        if let StrengthMode::PathBased { max_length } = self.strength_mode {
            if max_length == 0 {
                return Err(bad("strength_mode", "path length must be ≥ 1"));
            }
        }
        if let Some(d) = self.dispute_cost {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(bad("dispute_cost", format!("{d} must be finite and ≥ 0")));
            }
        }
        Ok(())
    }
}

/// A fully specified game instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    agents: Vec<Ideology>,
    pub params: GameParams,
    pub seed: u64,
    pub type_distribution: TypeDistribution,
}

impl Scenario {
    /// Builds a scenario from an explicit list of ideologies (any order).
    pub fn from_ideologies(ideologies: &[f64], params: GameParams) -> Result<Self> {
        params.validate()?;
        if ideologies.len() < 3 {
            return Err(Error::TooFewAgents(ideologies.len()));
        }
        let mut agents = ideologies
            .iter()
            .map(|&v| Ideology::new(v))
            .collect::<Result<Vec<_>>>()?;
        agents.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in agents.windows(2) {
            if pair[1].0 - pair[0].0 < MIN_TYPE_GAP {
                return Err(Error::DuplicateIdeology(pair[1].0));
            }
        }
        Ok(Scenario {
            agents,
            params,
            seed: 0,
            type_distribution: TypeDistribution::ExplicitList,
        })
    }

    /// `n` evenly spaced ideologies from 0 to 1 inclusive.
    pub fn evenly_spaced(n: usize, params: GameParams) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewAgents(n));
        }
        let types: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        Self::from_ideologies(&types, params)
    }

    pub fn with_params(&self, params: GameParams) -> Result<Self> {
        params.validate()?;
        Ok(Scenario {
            params,
            ..self.clone()
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[Ideology] {
        &self.agents
    }

    #[inline]
    pub fn theta(&self, i: usize) -> f64 {
        self.agents[i].0
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.0).collect()
    }

    /// The tolerance cost scale of agent `i`.
    pub fn tau(&self, i: usize) -> f64 {
        let extremity = (self.theta(i) - 0.5).abs();
        match self.params.flexibility_mode {
            FlexibilityMode::Uniform => self.params.flexibility,
            FlexibilityMode::StubbornExtremists { base, slope } => base + slope * extremity,
            FlexibilityMode::FlexibleExtremists { cap, slope } => (cap - slope * extremity).max(0.0),
        }
    }

    /// Short stable content hash, used to key CSV rows.
    pub fn content_hash(&self) -> String {
        let file = ScenarioFile::from(self);
        let bytes = serde_json::to_vec(&file).expect("scenario serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "scenario file, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        file.into_scenario()
    }
}

/// Draws `n` sorted distinct types: 0 and 1 pinned, the rest uniform on (0, 1).
pub fn generate_scenario(n: usize, params: GameParams, seed: u64) -> Result<Scenario> {
    if n < 3 {
        return Err(Error::TooFewAgents(n));
    }
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut types = vec![0.0, 1.0];
    while types.len() < n {
        let draw: f64 = rng.gen();
        if types.iter().all(|t| (t - draw).abs() >= MIN_TYPE_GAP) {
            types.push(draw);
        }
    }
    let mut scenario = Scenario::from_ideologies(&types, params)?;
    scenario.seed = seed;
    scenario.type_distribution = TypeDistribution::UniformPinned;
    Ok(scenario)
}

/// A tolerance interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ToleranceInterval {
    pub fn new(lower: f64, upper: f64) -> Self {
        ToleranceInterval { lower, upper }
    }

    #[inline]
    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta <= self.upper
    }
}

/// Cost `τ_i·[(lower − θ_i)² + (upper − θ_i)²]` of agent `i` holding `interval`.
pub fn tolerance_cost(i: usize, interval: &ToleranceInterval, scenario: &Scenario) -> f64 {
    let theta = scenario.theta(i);
    let dl = interval.lower - theta;
    let du = interval.upper - theta;
    scenario.tau(i) * (dl * dl + du * du)
}

/// Tolerance intervals and efforts for every agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub tolerances: Vec<ToleranceInterval>,
    pub efforts: Vec<f64>,
}

impl StrategyProfile {
    /// Every agent tolerates only their own type, with the given efforts.
    pub fn singletons(scenario: &Scenario, efforts: Vec<f64>) -> Self {
        let tolerances = (0..scenario.n())
            .map(|i| ToleranceInterval::new(scenario.theta(i), scenario.theta(i)))
            .collect();
        StrategyProfile { tolerances, efforts }
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        let n = scenario.n();
        if self.tolerances.len() != n || self.efforts.len() != n {
            return Err(Error::InvalidProfile(format!(
                "profile has {} intervals and {} efforts for {n} agents",
                self.tolerances.len(),
                self.efforts.len()
            )));
        }
        for (i, (t, &x)) in self.tolerances.iter().zip(&self.efforts).enumerate() {
            if !(0.0 <= t.lower && t.lower <= t.upper && t.upper <= 1.0) {
                return Err(Error::InvalidProfile(format!(
                    "agent {i}: interval [{}, {}] is not inside [0, 1]",
                    t.lower, t.upper
                )));
            }
            if !t.contains(scenario.theta(i)) {
                return Err(Error::InvalidProfile(format!(
                    "agent {i}: own type {} outside [{}, {}]",
                    scenario.theta(i),
                    t.lower,
                    t.upper
                )));
            }
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidProfile(format!("agent {i}: effort {x}")));
            }
        }
        Ok(())
    }
}

/// On-disk form of a scenario (`"schema": 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u64,
    pub agents: Vec<f64>,
    pub phi: f64,
    pub beta: f64,
    pub alpha: f64,
    #[serde(default)]
    pub csf_form: CsfForm,
    pub effort_cost: f64,
    pub flexibility: f64,
    #[serde(default)]
    pub flexibility_mode: FlexibilityMode,
    #[serde(default)]
    pub strength_mode: StrengthMode,
    #[serde(default)]
    pub dispute_cost: Option<f64>,
    #[serde(default)]
    pub dispute_set: DisputeSet,
    #[serde(default)]
    pub congestion: Congestion,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "explicit")]
    pub type_distribution: TypeDistribution,
}

fn explicit() -> TypeDistribution {
    TypeDistribution::ExplicitList
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let p = s.params;
        ScenarioFile {
            schema: SCENARIO_SCHEMA,
            agents: s.thetas(),
            phi: p.phi,
            beta: p.beta,
            alpha: p.alpha,
            csf_form: p.csf_form,
            effort_cost: p.effort_cost,
            flexibility: p.flexibility,
            flexibility_mode: p.flexibility_mode,
            strength_mode: p.strength_mode,
            dispute_cost: p.dispute_cost,
            dispute_set: p.dispute_set,
            congestion: p.congestion,
            seed: s.seed,
            type_distribution: s.type_distribution,
        }
    }
}

impl ScenarioFile {
    pub fn params(&self) -> GameParams {
        GameParams {
            phi: self.phi,
            beta: self.beta,
            alpha: self.alpha,
            csf_form: self.csf_form,
            effort_cost: self.effort_cost,
            flexibility: self.flexibility,
            flexibility_mode: self.flexibility_mode,
            strength_mode: self.strength_mode,
            dispute_cost: self.dispute_cost,
            dispute_set: self.dispute_set,
            congestion: self.congestion,
        }
    }

    pub fn into_scenario(self) -> Result<Scenario> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::Schema(self.schema));
        }
        let mut scenario = Scenario::from_ideologies(&self.agents, self.params())?;
        if self.type_distribution == TypeDistribution::UniformPinned {
            let first = scenario.theta(0);
            let last = scenario.theta(scenario.n() - 1);
            if first != 0.0 || last != 1.0 {
                return Err(Error::InvalidParameter {
                    name: "agents",
                    reason: "uniform_pinned scenarios must contain 0 and 1".into(),
                });
            }
        }
        scenario.seed = self.seed;
        scenario.type_distribution = self.type_distribution;
        Ok(scenario)
    }
}

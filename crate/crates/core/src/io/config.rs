use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{load_snapshot, read_text, IoError};
use crate::archive::ArchiveConfig;
use crate::cardgame::{Agent, CardCatalog, HeuristicWeights, Opponent, Style, DEFAULT_SAMPLE_BUDGET, DEFAULT_TURN_CAP};
use crate::deck::{Deck, MutationConfig};
use crate::evolution::{build_adversary_pool, starter_pool, RunConfig, DEFAULT_ADVERSARIES};

pub const CATALOG_BUILTIN: &str = "builtin";
pub const CATALOG_DESK: &str = "desk";

/// The run configuration file. Every key is optional; `buffer_capacity = 0`
/// keeps every sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunFile {
    pub seed: u64,
    /// `builtin`, `desk`, or a path to a catalog file relative to the config.
    pub catalog: String,
    pub total_evaluations: usize,
    pub games_per_evaluation: usize,
    pub batch_size: usize,
    pub bootstrap_evaluations: usize,
    pub turn_cap: u32,
    pub remap_frequency: usize,
    pub buffer_capacity: usize,
    pub min_resolution: usize,
    pub max_resolution: usize,
    pub mutation_p: f64,
    pub mutation_max_k: usize,
    pub player: PlayerSection,
    pub opponents: OpponentSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlayerSection {
    pub style: Style,
    pub sample_budget: usize,
    pub weights: WeightOverrides,
}

/// Replacements for individual coefficients of the style preset.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightOverrides {
    pub opponent_hero_damage: Option<f64>,
    pub own_hero_health: Option<f64>,
    pub own_board_attack: Option<f64>,
    pub own_board_health: Option<f64>,
    pub opponent_board_attack: Option<f64>,
    pub opponent_board_health: Option<f64>,
    pub hand_size: Option<f64>,
}

/// Where opponents come from: `starter` decks, the top elites of a
/// `snapshot`, or an explicit `list`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpponentSection {
    pub source: String,
    pub snapshot: Option<String>,
    pub top_n: usize,
    pub style: Style,
    pub sample_budget: usize,
    pub list: Vec<OpponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpponentEntry {
    pub style: Style,
    pub sample_budget: usize,
    /// Comma-separated card ids.
    pub deck: String,
}

impl Default for RunFile {
    fn default() -> Self {
        let archive = ArchiveConfig::default();
        let mutation = MutationConfig::default();
        RunFile {
            seed: 0,
            catalog: CATALOG_BUILTIN.to_string(),
            total_evaluations: archive.total_evaluations,
            games_per_evaluation: 200,
            batch_size: 1,
            bootstrap_evaluations: 100,
            turn_cap: DEFAULT_TURN_CAP,
            remap_frequency: archive.remap_frequency,
            buffer_capacity: archive.buffer_capacity.unwrap_or(0),
            min_resolution: archive.min_resolution,
            max_resolution: archive.max_resolution,
            mutation_p: mutation.p,
            mutation_max_k: mutation.max_k,
            player: PlayerSection::default(),
            opponents: OpponentSection::default(),
        }
    }
}

impl Default for PlayerSection {
    fn default() -> Self {
        PlayerSection {
            style: Style::Aggro,
            sample_budget: DEFAULT_SAMPLE_BUDGET,
            weights: WeightOverrides::default(),
        }
    }
}

impl Default for OpponentSection {
    fn default() -> Self {
        OpponentSection {
            source: "starter".to_string(),
            snapshot: None,
            top_n: DEFAULT_ADVERSARIES,
            style: Style::Aggro,
            sample_budget: DEFAULT_SAMPLE_BUDGET,
            list: Vec::new(),
        }
    }
}

impl WeightOverrides {
    pub fn apply(&self, base: HeuristicWeights) -> HeuristicWeights {
        HeuristicWeights {
            style: base.style,
            opponent_hero_damage: self.opponent_hero_damage.unwrap_or(base.opponent_hero_damage),
            own_hero_health: self.own_hero_health.unwrap_or(base.own_hero_health),
            own_board_attack: self.own_board_attack.unwrap_or(base.own_board_attack),
            own_board_health: self.own_board_health.unwrap_or(base.own_board_health),
            opponent_board_attack: self.opponent_board_attack.unwrap_or(base.opponent_board_attack),
            opponent_board_health: self.opponent_board_health.unwrap_or(base.opponent_board_health),
            hand_size: self.hand_size.unwrap_or(base.hand_size),
        }
    }

    fn full(w: &HeuristicWeights) -> Self {
        WeightOverrides {
            opponent_hero_damage: Some(w.opponent_hero_damage),
            own_hero_health: Some(w.own_hero_health),
            own_board_attack: Some(w.own_board_attack),
            own_board_health: Some(w.own_board_health),
            opponent_board_attack: Some(w.opponent_board_attack),
            opponent_board_health: Some(w.opponent_board_health),
            hand_size: Some(w.hand_size),
        }
    }
}

impl RunFile {
    pub fn from_toml(text: &str) -> Result<Self, IoError> {
        toml::from_str(text).map_err(|e| IoError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_toml(&read_text(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run file serializes")
    }

    /// SHA-256 of the serialized file, in hex.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Loads the named catalog. Paths are taken relative to `base_dir`.
    pub fn load_catalog(&self, base_dir: &Path) -> Result<CardCatalog, IoError> {
        match self.catalog.as_str() {
            CATALOG_BUILTIN => Ok(CardCatalog::builtin()),
            CATALOG_DESK => Ok(CardCatalog::desk()),
            path => Ok(CardCatalog::from_json(&read_text(&base_dir.join(path))?)?),
        }
    }

    pub fn player_agent(&self) -> Agent {
        Agent::new(
            self.player.weights.apply(HeuristicWeights::preset(self.player.style)),
            self.player.sample_budget,
        )
    }

    fn opponents(&self, catalog: &CardCatalog, base_dir: &Path) -> Result<Vec<Opponent>, IoError> {
        let section = &self.opponents;
        match section.source.as_str() {
            "starter" => Ok(starter_pool(catalog, section.sample_budget)),
            "snapshot" => {
                let path = section
                    .snapshot
                    .as_ref()
                    .ok_or_else(|| IoError::Config("opponents.source = \"snapshot\" needs opponents.snapshot".into()))?;
                let archive = load_snapshot(&base_dir.join(path))?.to_archive()?;
                let agent = Agent::new(HeuristicWeights::preset(section.style), section.sample_budget);
                Ok(build_adversary_pool(&archive, section.top_n, &agent)?)
            }
            "list" => section
                .list
                .iter()
                .map(|e| {
                    let deck = Deck::parse_literal(&e.deck);
                    Ok(Opponent {
                        deck,
                        agent: Agent::new(HeuristicWeights::preset(e.style), e.sample_budget),
                    })
                })
                .collect(),
            other => Err(IoError::Config(format!(
                "unknown opponents.source {other:?} (expected starter, snapshot or list)"
            ))),
        }
    }

    /// Builds the run and a copy of this file with every default filled
    /// in, weights spelled out and opponents listed deck by deck. Running
    /// the echo reproduces the run.
    pub fn resolve(&self, catalog: &CardCatalog, base_dir: &Path) -> Result<(RunConfig, RunFile), IoError> {
        let opponents = self.opponents(catalog, base_dir)?;
        let player = self.player_agent();
        let config = RunConfig {
            seed: self.seed,
            archive: ArchiveConfig {
                remap_frequency: self.remap_frequency,
                buffer_capacity: (self.buffer_capacity > 0).then_some(self.buffer_capacity),
                min_resolution: self.min_resolution,
                max_resolution: self.max_resolution,
                total_evaluations: self.total_evaluations,
            },
            games_per_evaluation: self.games_per_evaluation,
            batch_size: self.batch_size,
            bootstrap_evaluations: self.bootstrap_evaluations,
            player,
            opponents: opponents.clone(),
            game: crate::cardgame::GameOptions { turn_cap: self.turn_cap },
            mutation: MutationConfig {
                p: self.mutation_p,
                max_k: self.mutation_max_k,
            },
        };
        config.validate(catalog)?;

        let mut echo = self.clone();
        echo.player.weights = WeightOverrides::full(&player.weights);
        echo.opponents = OpponentSection {
            source: "list".to_string(),
            snapshot: None,
            list: opponents
                .iter()
                .map(|o| OpponentEntry {
                    style: o.agent.weights.style,
                    sample_budget: o.agent.sample_budget,
                    deck: o.deck.to_literal(),
                })
                .collect(),
            ..self.opponents.clone()
        };
        Ok((config, echo))
    }
}

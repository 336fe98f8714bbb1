//! Pipeline configuration: a JSON file where every field has a default.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arcs::{ArcError, WindowPolicy};
use crate::characters::CharacterConfig;
use crate::corpus::{parse_word_list, CleaningConfig, Segmenter};
use crate::events::{TaggerConfig, VerbLexicon};
use crate::scoring::{
    CircumstanceParams, EmotionLabel, EmotionLexicon, EmotionWeights, ScoringError, SentimentLexicon,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("lexicon {path}: {source}")]
    Lexicon { path: PathBuf, source: ScoringError },
    #[error(transparent)]
    Window(#[from] ArcError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

/// Optional replacements for the bundled word lists.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    /// `token<TAB>valence`
    pub sentiment: Option<PathBuf>,
    /// `token<TAB>label[,label...]`
    pub emotions: Option<PathBuf>,
    /// `form<TAB>lemma`
    pub verbs: Option<PathBuf>,
    /// One abbreviation per line, added to the bundled list.
    pub abbreviations: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub cleaning: CleaningConfig,
    pub lexicons: LexiconPaths,
    /// Sentiment coefficient, in (0, 1).
    pub alpha: f64,
    /// Per-label emotion weights in [-2, 2], overriding the defaults.
    pub beta: BTreeMap<EmotionLabel, f64>,
    pub window: WindowPolicy,
    /// Characters with fewer mentions get no arc files.
    pub min_mentions: usize,
    /// Shift dead band; 2% of each series' range when absent.
    pub dead_band: Option<f64>,
    pub min_prominence: f64,
    pub pronoun_window: usize,
    pub tagger: TaggerConfig,
    pub output_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            cleaning: CleaningConfig::default(),
            lexicons: LexiconPaths::default(),
            alpha: 0.5,
            beta: BTreeMap::new(),
            window: WindowPolicy::default(),
            min_mentions: 5,
            dead_band: None,
            min_prominence: 0.1,
            pronoun_window: 2,
            tagger: TaggerConfig::default(),
            output_dir: None,
        }
    }
}

impl PipelineConfig {
    /// Reads and validates a config file. Relative lexicon paths resolve
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })?;
        if let Some(base) = path.parent() {
            let l = &mut cfg.lexicons;
            for p in [&mut l.sentiment, &mut l.emotions, &mut l.verbs, &mut l.abbreviations]
                .into_iter()
                .flatten()
            {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params()?;
        self.window.validate()?;
        if !(self.min_prominence >= 0.0 && self.min_prominence.is_finite()) {
            return Err(ConfigError::Invalid {
                field: "min_prominence",
                message: format!("{} is not a finite non-negative number", self.min_prominence),
            });
        }
        if let Some(b) = self.dead_band {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(ConfigError::Invalid {
                    field: "dead_band",
                    message: format!("{b} is not a finite non-negative number"),
                });
            }
        }
        let l = &self.lexicons;
        for p in [&l.sentiment, &l.emotions, &l.verbs, &l.abbreviations]
            .into_iter()
            .flatten()
        {
            if !p.is_file() {
                return Err(ConfigError::Invalid {
                    field: "lexicons",
                    message: format!("{} does not exist", p.display()),
                });
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<CircumstanceParams, ScoringError> {
        CircumstanceParams::new(self.alpha, EmotionWeights::with_overrides(&self.beta)?)
    }

    /// Loads lexicons and builds the per-stage settings.
    pub fn resources(&self) -> Result<Resources, ConfigError> {
        self.validate()?;
        let read = |p: &PathBuf| {
            fs::read_to_string(p).map_err(|source| ConfigError::Io {
                path: p.clone(),
                source,
            })
        };
        let l = &self.lexicons;
        let sentiment = match &l.sentiment {
            Some(p) => SentimentLexicon::parse(&read(p)?).map_err(|source| ConfigError::Lexicon {
                path: p.clone(),
                source,
            })?,
            None => SentimentLexicon::bundled(),
        };
        let emotions = match &l.emotions {
            Some(p) => EmotionLexicon::parse(&read(p)?).map_err(|source| ConfigError::Lexicon {
                path: p.clone(),
                source,
            })?,
            None => EmotionLexicon::bundled(),
        };
        let verbs = match &l.verbs {
            Some(p) => VerbLexicon::parse(&read(p)?),
            None => VerbLexicon::bundled(),
        };
        let mut segmenter = Segmenter::default();
        if let Some(p) = &l.abbreviations {
            segmenter = segmenter.with_abbreviations(parse_word_list(&read(p)?));
        }
        let mut characters = CharacterConfig {
            pronoun_window: self.pronoun_window,
            ..CharacterConfig::default()
        };
        // Lexicon words that open a sentence are not taken as names without
        // other evidence; known first names are exempt.
        let common: Vec<String> = verbs
            .forms()
            .chain(sentiment.words())
            .chain(emotions.words())
            .filter(|w| !characters.name_genders.contains_key(*w))
            .map(str::to_owned)
            .collect();
        characters = characters.with_common_words(common);
        Ok(Resources {
            cleaning: self.cleaning.clone(),
            segmenter,
            characters,
            tagger: self.tagger.clone(),
            verbs,
            sentiment,
            emotions,
            params: self.params()?,
            window: self.window,
            min_mentions: self.min_mentions,
            dead_band: self.dead_band,
            min_prominence: self.min_prominence,
        })
    }
}

/// Everything the pipeline stages need, loaded once.
pub struct Resources {
    pub cleaning: CleaningConfig,
    pub segmenter: Segmenter,
    pub characters: CharacterConfig,
    pub tagger: TaggerConfig,
    pub verbs: VerbLexicon,
    pub sentiment: SentimentLexicon,
    pub emotions: EmotionLexicon,
    pub params: CircumstanceParams,
    pub window: WindowPolicy,
    pub min_mentions: usize,
    pub dead_band: Option<f64>,
    pub min_prominence: f64,
}

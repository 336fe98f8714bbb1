//! End-to-end runs and the on-disk artifact formats.
//!
//! Every artifact is rendered in memory first; files are only written once
//! all stages have succeeded, each through a temporary file and a rename.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arcs::{build_character_arc, build_relation_arcs, find_extrema, ArcSeries, Role, WindowPolicy};
use crate::characters::{extract_characters, CharacterSet, Gender, MentionKind};
use crate::config::Resources;
use crate::corpus::{clean, corpus_stats, Document};
use crate::evalkit::{default_dead_band, label_shifts};
use crate::events::{
    event_density, merge_annotations, read_annotations, tag_events, AnnotationError, AnnotationRecord, EventTrigger,
    TriggerSource,
};
use crate::participants::{assign_roles, dedupe_sentence_events, EventRecord};
use crate::render::{render_arc_svg, ArcPlot, Marker, SvgStyle};
use crate::scoring::{score_events, CircumstanceParams, EmotionLabel, EmotionScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Read,
    Clean,
    Annotations,
    Arcs,
    Render,
    Export,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Read => "read",
            Stage::Clean => "clean",
            Stage::Annotations => "annotations",
            Stage::Arcs => "arcs",
            Stage::Render => "render",
            Stage::Export => "export",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
    /// The input was rejected, as opposed to a failure while processing it.
    pub invalid_input: bool,
}

impl StageError {
    pub fn new(stage: Stage, cause: impl fmt::Display) -> Self {
        Self {
            stage,
            message: cause.to_string(),
            invalid_input: false,
        }
    }

    fn invalid(stage: Stage, cause: impl fmt::Display) -> Self {
        Self {
            invalid_input: true,
            ..Self::new(stage, cause)
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

/// Output of the text stages: the document, its characters and the scored,
/// role-assigned events.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub doc: Document,
    pub characters: CharacterSet,
    pub triggers: Vec<EventTrigger>,
    pub records: Vec<EventRecord>,
}

/// Document id for an input path: its file stem.
pub fn doc_id_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "document".to_owned())
}

pub fn read_input(path: &Path) -> Result<String, StageError> {
    let bytes = fs::read(path).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        // a path that is not there is a usage problem, not a failed run
        match e.kind() {
            std::io::ErrorKind::NotFound => StageError::invalid(Stage::Read, msg),
            _ => StageError::new(Stage::Read, msg),
        }
    })?;
    String::from_utf8(bytes)
        .map_err(|e| StageError::invalid(Stage::Read, format!("{}: not UTF-8: {e}", path.display())))
}

/// Runs cleaning through scoring. `annotations` is the text of an
/// interchange file, validated against the cleaned document.
pub fn analyze(doc_id: &str, raw: &str, annotations: Option<&str>, res: &Resources) -> Result<Analysis, StageError> {
    let clean_text = clean(raw, &res.cleaning).map_err(|e| StageError::invalid(Stage::Clean, e))?;
    let doc = res.segmenter.segment(doc_id, raw, &clean_text);
    let notes: Vec<AnnotationRecord> = match annotations {
        Some(text) => read_annotations(text.as_bytes(), Some(&doc)).map_err(|e| match e {
            AnnotationError::Io(_) => StageError::new(Stage::Annotations, e),
            _ => StageError::invalid(Stage::Annotations, e),
        })?,
        None => Vec::new(),
    };
    let characters = extract_characters(&doc, &res.characters);
    let tagged = tag_events(&doc, &res.verbs, &res.tagger);
    let triggers = merge_annotations(&doc, &tagged, &notes, &res.verbs);
    let mut records = dedupe_sentence_events(assign_roles(&doc, &triggers, &characters, &notes));
    score_events(&doc, &mut records, &res.sentiment, &res.emotions, &res.verbs, &notes);
    Ok(Analysis {
        doc,
        characters,
        triggers,
        records,
    })
}

/// One line of `characters.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterEntry {
    pub id: usize,
    pub name: String,
    pub aliases: Vec<String>,
    pub gender: Gender,
    pub mentions: usize,
    pub name_mentions: usize,
    pub pronoun_mentions: usize,
    pub first_sentence: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub doc_id: String,
    pub characters: Vec<CharacterEntry>,
    pub unresolved_pronouns: usize,
}

impl CharacterReport {
    pub fn from_set(doc_id: &str, set: &CharacterSet) -> Self {
        let characters = set
            .clusters
            .iter()
            .map(|c| {
                let pronouns = c
                    .mention_indices
                    .iter()
                    .filter(|&&i| set.mentions[i].kind == MentionKind::Pronoun)
                    .count();
                CharacterEntry {
                    id: c.cluster_id,
                    name: c.canonical_name.clone(),
                    aliases: c.aliases.iter().cloned().collect(),
                    gender: c.gender,
                    mentions: c.mention_count,
                    name_mentions: c.mention_indices.len() - pronouns,
                    pronoun_mentions: pronouns,
                    first_sentence: c.mention_indices.iter().map(|&i| set.mentions[i].sentence_index).min(),
                }
            })
            .collect();
        Self {
            doc_id: doc_id.to_owned(),
            characters,
            unresolved_pronouns: set.unresolved_pronouns(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Looks a character up by canonical name, then alias, ignoring case.
    pub fn find(&self, name: &str) -> Option<&CharacterEntry> {
        let lower = name.trim().to_lowercase();
        self.characters
            .iter()
            .find(|c| c.name.to_lowercase() == lower)
            .or_else(|| {
                self.characters
                    .iter()
                    .find(|c| c.aliases.iter().any(|a| a.to_lowercase() == lower))
            })
    }

    /// File-name slug per character id, unique within the report.
    pub fn slugs(&self) -> HashMap<usize, String> {
        let base: Vec<(usize, String)> = self.characters.iter().map(|c| (c.id, slugify(&c.name))).collect();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (_, s) in &base {
            *seen.entry(s.as_str()).or_default() += 1;
        }
        base.iter()
            .map(|(id, s)| {
                if seen[s.as_str()] > 1 {
                    (*id, format!("{s}-{id}"))
                } else {
                    (*id, s.clone())
                }
            })
            .collect()
    }
}

pub fn slugify(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            out.push(c);
        } else if !out.is_empty() && !out.ends_with('-') {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    if out.is_empty() {
        out.push_str("character");
    }
    out
}

/// One row of `events.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub event_id: usize,
    pub sentence_index: usize,
    pub token_index: usize,
    pub trigger: String,
    pub lemma: String,
    pub source: TriggerSource,
    pub actor_id: usize,
    pub actor: String,
    pub experiencer_id: usize,
    pub experiencer: String,
    pub passive: bool,
    pub self_relation: bool,
    pub sentiment: f64,
    /// `label:confidence` pairs separated by `;`.
    pub emotions: String,
}

fn format_emotions(e: &[EmotionScore]) -> String {
    e.iter()
        .map(|s| format!("{}:{}", s.label, s.confidence))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_emotions(text: &str) -> Result<Vec<EmotionScore>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (label, conf) = pair
                .split_once(':')
                .ok_or_else(|| format!("`{pair}` is not label:confidence"))?;
            let label: EmotionLabel = label.trim().parse().map_err(|e| format!("{e}"))?;
            let confidence: f64 = conf.trim().parse().map_err(|_| format!("bad confidence `{conf}`"))?;
            Ok(EmotionScore { label, confidence })
        })
        .collect()
}

pub fn event_rows(records: &[EventRecord], report: &CharacterReport) -> Vec<EventRow> {
    let names: HashMap<usize, &str> = report.characters.iter().map(|c| (c.id, c.name.as_str())).collect();
    records
        .iter()
        .filter_map(|r| {
            let (a, e) = r.pair()?;
            Some(EventRow {
                event_id: r.event_id,
                sentence_index: r.sentence_index(),
                token_index: r.trigger.token_index,
                trigger: r.trigger.surface.clone(),
                lemma: r.trigger.lemma.clone(),
                source: r.trigger.source,
                actor_id: a,
                actor: names.get(&a).copied().unwrap_or_default().to_owned(),
                experiencer_id: e,
                experiencer: names.get(&e).copied().unwrap_or_default().to_owned(),
                passive: r.passive,
                self_relation: r.self_relation,
                sentiment: r.sentiment,
                emotions: format_emotions(&r.emotions),
            })
        })
        .collect()
}

fn csv_text<T: Serialize>(header: &[&str], rows: &[T]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

const EVENT_HEADER: [&str; 14] = [
    "event_id",
    "sentence_index",
    "token_index",
    "trigger",
    "lemma",
    "source",
    "actor_id",
    "actor",
    "experiencer_id",
    "experiencer",
    "passive",
    "self_relation",
    "sentiment",
    "emotions",
];

pub fn events_csv(rows: &[EventRow]) -> String {
    csv_text(&EVENT_HEADER, rows)
}

/// Reads an event table back into records ready for arc building.
pub fn read_events_csv<R: Read>(reader: R) -> Result<Vec<EventRecord>, String> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<EventRow>().enumerate() {
        let row = row.map_err(|e| format!("row {}: {e}", i + 1))?;
        let emotions = parse_emotions(&row.emotions).map_err(|e| format!("row {}: {e}", i + 1))?;
        out.push(EventRecord {
            event_id: row.event_id,
            trigger: EventTrigger {
                event_id: row.event_id,
                token_index: row.token_index,
                surface: row.trigger,
                lemma: row.lemma,
                sentence_index: row.sentence_index,
                realis: true,
                source: row.source,
                annotation: None,
            },
            actor: Some(row.actor_id),
            experiencer: Some(row.experiencer_id),
            passive: row.passive,
            self_relation: row.self_relation,
            sentiment: row.sentiment,
            emotions,
        });
    }
    out.sort_by_key(|r| r.event_id);
    Ok(out)
}

/// Settings for the arc stage.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcOptions {
    pub window: WindowPolicy,
    pub min_mentions: usize,
    pub min_prominence: f64,
    pub dead_band: Option<f64>,
    /// Only this character (name or alias); overrides `min_mentions`.
    pub character: Option<String>,
    /// Only this directed pair of names.
    pub pair: Option<(String, String)>,
}

impl ArcOptions {
    pub fn from_resources(res: &Resources) -> Self {
        Self {
            window: res.window,
            min_mentions: res.min_mentions,
            min_prominence: res.min_prominence,
            dead_band: res.dead_band,
            character: None,
            pair: None,
        }
    }
}

#[derive(Debug, Serialize)]
struct RelationRow<'a> {
    actor: &'a str,
    experiencer: &'a str,
    ordinal: usize,
    event_id: usize,
    sentence_index: usize,
    position: usize,
    raw_t: f64,
    smoothed_t: f64,
}

/// One row of an `arcs/<slug>.csv` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRow {
    pub character: String,
    pub role: Role,
    pub ordinal: usize,
    pub event_id: usize,
    pub sentence_index: usize,
    pub raw_t: f64,
    pub smoothed_t: f64,
}

/// One row of `extrema.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremumRow {
    pub character: String,
    pub role: Role,
    pub event_id: usize,
    pub kind: crate::arcs::ExtremumKind,
    pub prominence: f64,
}

#[derive(Debug, Serialize)]
struct ShiftRow<'a> {
    character: &'a str,
    role: Role,
    event_id: usize,
    label: crate::evalkit::Shift,
}

/// Rendered arc-stage outputs, keyed by path relative to the bundle root.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcArtifacts {
    pub files: BTreeMap<PathBuf, String>,
    pub relation_arcs: usize,
    pub character_arcs: usize,
    pub warnings: Vec<String>,
}

fn role_rows(name: &str, role: Role, series: &ArcSeries) -> Vec<ArcRow> {
    series
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| ArcRow {
            character: name.to_owned(),
            role,
            ordinal: i + 1,
            event_id: p.event_id,
            sentence_index: p.sentence_index,
            raw_t: p.raw_t,
            smoothed_t: p.smoothed_t,
        })
        .collect()
}

const ARC_HEADER: [&str; 7] = [
    "character",
    "role",
    "ordinal",
    "event_id",
    "sentence_index",
    "raw_t",
    "smoothed_t",
];
const EXTREMA_HEADER: [&str; 5] = ["character", "role", "event_id", "kind", "prominence"];

/// Chart data for one character's arc rows and its extrema rows.
pub fn arc_plot(rows: &[ArcRow], extrema: &[ExtremumRow]) -> ArcPlot {
    let title = rows.first().map(|r| r.character.clone()).unwrap_or_default();
    let mut plot = ArcPlot {
        title: title.clone(),
        ..ArcPlot::default()
    };
    let mut index: HashMap<(Role, usize), usize> = HashMap::new();
    for r in rows {
        let series = match r.role {
            Role::Actor => &mut plot.actor,
            Role::Experiencer => &mut plot.experiencer,
        };
        index.insert((r.role, r.event_id), series.len());
        series.push(r.smoothed_t);
    }
    plot.markers = extrema
        .iter()
        .filter(|e| e.character == title)
        .filter_map(|e| {
            index.get(&(e.role, e.event_id)).map(|&i| Marker {
                role: e.role,
                index: i,
                kind: e.kind,
            })
        })
        .collect();
    plot
}

pub fn read_arc_csv<R: Read>(reader: R) -> Result<Vec<ArcRow>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

pub fn read_extrema_csv<R: Read>(reader: R) -> Result<Vec<ExtremumRow>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

/// Builds relation arcs, character arcs, extrema, shift labels and plots.
pub fn arc_artifacts(
    records: &[EventRecord],
    report: &CharacterReport,
    params: &CircumstanceParams,
    opts: &ArcOptions,
) -> Result<ArcArtifacts, StageError> {
    let lookup = |name: &str| {
        report
            .find(name)
            .map(|c| c.id)
            .ok_or_else(|| StageError::invalid(Stage::Arcs, format!("no character named `{name}`")))
    };
    let only = opts.character.as_deref().map(lookup).transpose()?;
    let pair = match &opts.pair {
        Some((a, b)) => Some((lookup(a)?, lookup(b)?)),
        None => None,
    };
    let by_id: HashMap<usize, &CharacterEntry> = report.characters.iter().map(|c| (c.id, c)).collect();
    let name = |id: usize| by_id.get(&id).map(|c| c.name.as_str()).unwrap_or("");
    let eligible = |id: usize| by_id.get(&id).is_some_and(|c| c.mentions >= opts.min_mentions);
    let slugs = report.slugs();
    let mut out = ArcArtifacts::default();

    let relations = build_relation_arcs(records, params, &opts.window).map_err(|e| StageError::new(Stage::Arcs, e))?;
    let mut rel_rows = Vec::new();
    for (key, arc) in &relations {
        let keep = match (pair, only) {
            (Some(p), _) => p == (key.actor, key.experiencer),
            (None, Some(c)) => key.actor == c || key.experiencer == c,
            (None, None) => eligible(key.actor) && eligible(key.experiencer),
        };
        if !keep {
            continue;
        }
        out.relation_arcs += 1;
        for (i, p) in arc.series.points.iter().enumerate() {
            rel_rows.push(RelationRow {
                actor: name(key.actor),
                experiencer: name(key.experiencer),
                ordinal: i + 1,
                event_id: p.event_id,
                sentence_index: p.sentence_index,
                position: p.position,
                raw_t: p.raw_t,
                smoothed_t: p.smoothed_t,
            });
        }
    }
    out.files.insert(
        PathBuf::from("relation_arcs.csv"),
        csv_text(
            &[
                "actor",
                "experiencer",
                "ordinal",
                "event_id",
                "sentence_index",
                "position",
                "raw_t",
                "smoothed_t",
            ],
            &rel_rows,
        ),
    );

    let mut extrema_rows = Vec::new();
    let mut shift_rows = Vec::new();
    let style = SvgStyle::default();
    for entry in &report.characters {
        let wanted = match only {
            Some(c) => c == entry.id,
            None => pair.is_none() && entry.mentions >= opts.min_mentions,
        };
        if !wanted {
            continue;
        }
        let arc = build_character_arc(entry.id, records, params, &opts.window)
            .map_err(|e| StageError::new(Stage::Arcs, e))?;
        if arc.actor.is_empty() && arc.experiencer.is_empty() {
            continue;
        }
        out.character_arcs += 1;
        let mut rows = Vec::new();
        let mut extrema = Vec::new();
        for role in [Role::Actor, Role::Experiencer] {
            let series = arc.series(role);
            if series.passthrough {
                out.warnings.push(format!(
                    "{} ({role}): {} events, fewer than the window of {}; left unsmoothed",
                    entry.name,
                    series.len(),
                    series.window.map(|w| w.size()).unwrap_or(0)
                ));
            }
            rows.extend(role_rows(&entry.name, role, series));
            let values = series.smoothed();
            for e in find_extrema(&values, opts.min_prominence) {
                extrema.push(ExtremumRow {
                    character: entry.name.clone(),
                    role,
                    event_id: series.points[e.index].event_id,
                    kind: e.kind,
                    prominence: e.prominence,
                });
            }
            let ids: Vec<usize> = series.points.iter().map(|p| p.event_id).collect();
            let band = opts.dead_band.unwrap_or_else(|| default_dead_band(&values));
            for s in label_shifts(&values, &ids, band) {
                shift_rows.push(ShiftRow {
                    character: &entry.name,
                    role,
                    event_id: s.event_id,
                    label: s.label,
                });
            }
        }
        let slug = &slugs[&entry.id];
        let svg = render_arc_svg(&arc_plot(&rows, &extrema), &style).map_err(|e| StageError::new(Stage::Render, e))?;
        out.files.insert(PathBuf::from(format!("plots/{slug}.svg")), svg);
        out.files
            .insert(PathBuf::from(format!("arcs/{slug}.csv")), csv_text(&ARC_HEADER, &rows));
        extrema_rows.extend(extrema);
    }
    out.files
        .insert(PathBuf::from("extrema.csv"), csv_text(&EXTREMA_HEADER, &extrema_rows));
    out.files.insert(
        PathBuf::from("shifts.csv"),
        csv_text(&["character", "role", "event_id", "label"], &shift_rows),
    );
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub doc_id: String,
    pub word_count: usize,
    pub sentence_count: usize,
    /// Realis event triggers found in the text.
    pub event_count: usize,
    /// Events with at least one character participant, after dedupe.
    pub character_event_count: usize,
    pub cluster_count: usize,
    pub relation_arc_count: usize,
    pub character_arc_count: usize,
    pub events_per_word: Option<f64>,
    pub warnings: Vec<String>,
}

/// All outputs of a full run, keyed by relative path.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub files: BTreeMap<PathBuf, String>,
    pub stats: RunStats,
}

/// Files written by the `characters` step.
pub fn character_files(analysis: &Analysis) -> (CharacterReport, BTreeMap<PathBuf, String>) {
    let report = CharacterReport::from_set(&analysis.doc.doc_id, &analysis.characters);
    let mut files = BTreeMap::new();
    files.insert(PathBuf::from("characters.json"), report.to_json());
    (report, files)
}

/// Files written by the `events` step.
pub fn event_files(analysis: &Analysis) -> (CharacterReport, BTreeMap<PathBuf, String>) {
    let (report, mut files) = character_files(analysis);
    files.insert(
        PathBuf::from("events.csv"),
        events_csv(&event_rows(&analysis.records, &report)),
    );
    (report, files)
}

/// Runs every stage on `raw` and renders the full bundle in memory.
pub fn run_pipeline(
    doc_id: &str,
    raw: &str,
    annotations: Option<&str>,
    res: &Resources,
    opts: &ArcOptions,
) -> Result<Bundle, StageError> {
    let analysis = analyze(doc_id, raw, annotations, res)?;
    let (report, mut files) = event_files(&analysis);
    let arcs = arc_artifacts(&analysis.records, &report, &res.params, opts)?;
    files.extend(arcs.files);
    let corpus = corpus_stats(&analysis.doc);
    let density = event_density(corpus.word_count, analysis.triggers.len());
    let stats = RunStats {
        doc_id: doc_id.to_owned(),
        word_count: corpus.word_count,
        sentence_count: corpus.sentence_count,
        event_count: analysis.triggers.len(),
        character_event_count: analysis.records.len(),
        cluster_count: analysis.characters.clusters.len(),
        relation_arc_count: arcs.relation_arcs,
        character_arc_count: arcs.character_arcs,
        events_per_word: (!density.undefined).then_some(density.events_per_word),
        warnings: arcs.warnings,
    };
    let mut json = serde_json::to_string_pretty(&stats).expect("stats serialize");
    json.push('\n');
    files.insert(PathBuf::from("stats.json"), json);
    Ok(Bundle { files, stats })
}

/// Writes files under `root`, each via a temporary sibling and a rename.
/// On failure, files written by this call are removed again.
pub fn write_files(root: &Path, files: &BTreeMap<PathBuf, String>) -> Result<(), StageError> {
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> std::io::Result<()> {
        for (rel, content) in files {
            let path = root.join(rel);
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir)?;
            }
            let mut tmp = path.clone().into_os_string();
            tmp.push(".tmp");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, content)?;
            if let Err(e) = fs::rename(&tmp, &path) {
                let _ = fs::remove_file(&tmp);
                return Err(e);
            }
            written.push(path);
        }
        Ok(())
    })();
    result.map_err(|e| {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        StageError::new(Stage::Export, format!("{}: {e}", root.display()))
    })
}

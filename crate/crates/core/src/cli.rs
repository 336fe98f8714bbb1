//! The `narc` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arcs::{FilterKind, Role};
use crate::config::{ConfigError, PipelineConfig, Resources};
use crate::evalkit::{fleiss_kappa, shift_confusion, RaterResponses, Shift, ShiftLabel};
use crate::events::lint_annotations;
use crate::pipeline::{
    analyze, arc_artifacts, arc_plot, character_files, doc_id_for, event_files, read_arc_csv, read_events_csv,
    read_extrema_csv, read_input, run_pipeline, write_files, ArcOptions, CharacterReport, StageError,
};
use crate::render::{render_arc_svg, SvgStyle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "narc", version, about = "Character and relation arcs from narrative text")]
struct Cli {
    /// JSON pipeline configuration
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every stage and write the full artifact bundle
    Pipeline {
        input: PathBuf,
        #[command(flatten)]
        io: TextArgs,
        #[command(flatten)]
        arcs: ArcArgs,
    },
    /// Write characters.json
    Characters {
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Write characters.json and the scored event table events.csv
    Events {
        input: PathBuf,
        #[command(flatten)]
        io: TextArgs,
    },
    /// Build arcs, extrema, shift labels and plots from a saved event table
    Arcs {
        events: PathBuf,
        /// Character report; defaults to characters.json next to the table
        #[arg(long, value_name = "PATH")]
        characters: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[command(flatten)]
        arcs: ArcArgs,
    },
    /// Render one arc CSV to SVG
    Plot {
        arc: PathBuf,
        /// Extrema table; defaults to extrema.csv in the arc file's parent directory
        #[arg(long, value_name = "PATH")]
        extrema: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Evaluation metrics
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Check an annotation interchange file
    ValidateAnnotations {
        annotations: PathBuf,
        /// Text the annotations refer to, for offset checks
        #[arg(long, value_name = "PATH")]
        text: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TextArgs {
    #[arg(long, value_name = "PATH")]
    annotations: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ArcArgs {
    #[arg(long, value_name = "NAME")]
    character: Option<String>,
    /// Directed pair ACTOR,EXPERIENCER
    #[arg(long, value_name = "A,B")]
    pair: Option<String>,
    #[arg(long, value_name = "n")]
    window: Option<usize>,
    #[arg(long, value_name = "p")]
    poly: Option<usize>,
    #[arg(long, value_enum)]
    filter: Option<FilterArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FilterArg {
    Savgol,
    Mean,
    Triangular,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoleArg {
    Actor,
    Experiencer,
}

#[derive(Debug, Subcommand)]
enum EvalCommand {
    /// Fleiss kappa over item_id,rater_id,answer responses
    Kappa {
        responses: PathBuf,
        /// item_id,answer gold file; codes each answer as match or no match
        #[arg(long, value_name = "PATH")]
        gold: Option<PathBuf>,
    },
    /// Share of responses matching the gold answers
    Accuracy {
        responses: PathBuf,
        #[arg(long, value_name = "PATH")]
        gold: PathBuf,
    },
    /// Row-normalized confusion of system vs gold shift labels
    Shifts {
        system: PathBuf,
        gold: PathBuf,
        #[arg(long, value_name = "NAME")]
        character: Option<String>,
        #[arg(long, value_enum)]
        role: Option<RoleArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Invalid(format!("config error: {e}"))
    }
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        if e.invalid_input {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn out_dir(flag: &Option<PathBuf>, cfg: &PipelineConfig) -> PathBuf {
    flag.clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn arc_options(args: &ArcArgs, res: &Resources) -> Result<ArcOptions, Failure> {
    let mut opts = ArcOptions::from_resources(res);
    if let Some(n) = args.window {
        opts.window.size = Some(n);
    }
    if let Some(p) = args.poly {
        opts.window.poly = p;
    }
    if let Some(f) = args.filter {
        opts.window.filter = match f {
            FilterArg::Savgol => FilterKind::SavitzkyGolay,
            FilterArg::Mean => FilterKind::RollingMean,
            FilterArg::Triangular => FilterKind::TriangularMean,
        };
    }
    opts.window
        .validate()
        .map_err(|e| Failure::Invalid(format!("window: {e}")))?;
    opts.character = args.character.clone();
    if let Some(p) = &args.pair {
        let (a, b) = p
            .split_once(',')
            .ok_or_else(|| Failure::Invalid(format!("--pair expects A,B, got `{p}`")))?;
        opts.pair = Some((a.trim().to_owned(), b.trim().to_owned()));
    }
    Ok(opts)
}

fn csv_map(path: &Path, key: &str, value: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Failure::Invalid(format!("{}: missing column `{name}`", path.display())))
    };
    let (k, v) = (col(key)?, col(value)?);
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
        out.insert(rec[k].to_owned(), rec[v].to_owned());
    }
    Ok(out)
}

/// Shift labels from a CSV with `event_id,label` and optional `character`
/// and `role` columns used for filtering.
fn shift_file(path: &Path, character: Option<&str>, role: Option<Role>) -> Result<Vec<ShiftLabel>, Failure> {
    let bad = |e: &dyn std::fmt::Display| Failure::Invalid(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| bad(&e))?;
    let headers = rdr.headers().map_err(|e| bad(&e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (id_col, label_col) = match (col("event_id"), col("label")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(bad(&"expected columns event_id and label")),
    };
    let (char_col, role_col) = (col("character"), col("role"));
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        if let (Some(want), Some(c)) = (character, char_col) {
            if !rec[c].eq_ignore_ascii_case(want) {
                continue;
            }
        }
        if let (Some(want), Some(c)) = (role, role_col) {
            if rec[c] != *want.to_string() {
                continue;
            }
        }
        let event_id = rec[id_col]
            .parse()
            .map_err(|_| bad(&format!("bad event_id `{}`", &rec[id_col])))?;
        let label: Shift = rec[label_col].parse().map_err(|e| bad(&e))?;
        out.push(ShiftLabel { event_id, label });
    }
    Ok(out)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    let say = |w: &mut dyn Write, s: String| {
        let _ = writeln!(w, "{s}");
    };
    match cli.command {
        Command::Pipeline { input, io, arcs } => {
            let res = cfg.resources()?;
            let opts = arc_options(&arcs, &res)?;
            let raw = read_input(&input)?;
            let notes = io.annotations.as_deref().map(read_text).transpose()?;
            let bundle = run_pipeline(&doc_id_for(&input), &raw, notes.as_deref(), &res, &opts)?;
            let dir = out_dir(&io.out, &cfg);
            write_files(&dir, &bundle.files)?;
            for w in &bundle.stats.warnings {
                say(stderr, format!("warning: {w}"));
            }
            let s = &bundle.stats;
            say(
                stdout,
                format!(
                    "{}: {} words, {} events, {} characters, {} character arcs -> {}",
                    s.doc_id,
                    s.word_count,
                    s.event_count,
                    s.cluster_count,
                    s.character_arc_count,
                    dir.display()
                ),
            );
        }
        Command::Characters { input, out } => {
            let res = cfg.resources()?;
            let raw = read_input(&input)?;
            let analysis = analyze(&doc_id_for(&input), &raw, None, &res)?;
            let (report, files) = character_files(&analysis);
            write_files(&out_dir(&out, &cfg), &files)?;
            for c in &report.characters {
                say(stdout, format!("{}\t{}\t{}", c.id, c.name, c.mentions));
            }
        }
        Command::Events { input, io } => {
            let res = cfg.resources()?;
            let raw = read_input(&input)?;
            let notes = io.annotations.as_deref().map(read_text).transpose()?;
            let analysis = analyze(&doc_id_for(&input), &raw, notes.as_deref(), &res)?;
            let (_, files) = event_files(&analysis);
            write_files(&out_dir(&io.out, &cfg), &files)?;
            say(stdout, format!("{} events with characters", analysis.records.len()));
        }
        Command::Arcs {
            events,
            characters,
            out,
            arcs,
        } => {
            let res = cfg.resources()?;
            let opts = arc_options(&arcs, &res)?;
            let report_path = characters.unwrap_or_else(|| {
                events
                    .parent()
                    .unwrap_or_else(|| Path::new("."))
                    .join("characters.json")
            });
            let report = CharacterReport::from_json(&read_text(&report_path)?)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", report_path.display())))?;
            let records = read_events_csv(read_text(&events)?.as_bytes())
                .map_err(|e| Failure::Invalid(format!("{}: {e}", events.display())))?;
            let built = arc_artifacts(&records, &report, &res.params, &opts)?;
            write_files(&out_dir(&out, &cfg), &built.files)?;
            for w in &built.warnings {
                say(stderr, format!("warning: {w}"));
            }
            say(
                stdout,
                format!(
                    "{} relation arcs, {} character arcs",
                    built.relation_arcs, built.character_arcs
                ),
            );
        }
        Command::Plot { arc, extrema, out } => {
            let rows = read_arc_csv(read_text(&arc)?.as_bytes())
                .map_err(|e| Failure::Invalid(format!("{}: {e}", arc.display())))?;
            let extrema_path = extrema.or_else(|| {
                let p = arc.parent()?.parent()?.join("extrema.csv");
                p.is_file().then_some(p)
            });
            let marks = match &extrema_path {
                Some(p) => read_extrema_csv(read_text(p)?.as_bytes())
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?,
                None => Vec::new(),
            };
            let svg = render_arc_svg(&arc_plot(&rows, &marks), &SvgStyle::default())
                .map_err(|e| Failure::Invalid(format!("{}: {e}", arc.display())))?;
            let name = format!("{}.svg", doc_id_for(&arc));
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            write_files(&dir, &BTreeMap::from([(PathBuf::from(&name), svg)]))?;
            say(stdout, dir.join(name).display().to_string());
        }
        Command::Eval(cmd) => match cmd {
            EvalCommand::Kappa { responses, gold } => {
                let r = RaterResponses::from_csv(read_text(&responses)?.as_bytes())
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", responses.display())))?;
                let counts = match gold {
                    Some(g) => r
                        .match_counts(&csv_map(&g, "item_id", "answer")?)
                        .map_err(|e| Failure::Invalid(e.to_string()))?,
                    None => r.category_counts(),
                };
                let k = fleiss_kappa(&counts).map_err(|e| Failure::Invalid(e.to_string()))?;
                say(stdout, format!("{k:.3}"));
            }
            EvalCommand::Accuracy { responses, gold } => {
                let r = RaterResponses::from_csv(read_text(&responses)?.as_bytes())
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", responses.display())))?;
                let acc = r
                    .accuracy_against(&csv_map(&gold, "item_id", "answer")?)
                    .map_err(|e| Failure::Invalid(e.to_string()))?;
                say(stdout, format!("{acc:.3}"));
            }
            EvalCommand::Shifts {
                system,
                gold,
                character,
                role,
                format,
            } => {
                let role = role.map(|r| match r {
                    RoleArg::Actor => Role::Actor,
                    RoleArg::Experiencer => Role::Experiencer,
                });
                let s = shift_file(&system, character.as_deref(), role)?;
                let g = shift_file(&gold, character.as_deref(), role)?;
                let table = shift_confusion(&s, &g).map_err(|e| Failure::Invalid(e.to_string()))?;
                let text = match format {
                    Format::Text => table.to_text(),
                    Format::Csv => table.to_csv(),
                };
                let _ = stdout.write_all(text.as_bytes());
            }
        },
        Command::ValidateAnnotations { annotations, text } => {
            let body = read_text(&annotations)?;
            let doc = match &text {
                Some(p) => {
                    let res = cfg.resources()?;
                    let raw = read_input(p)?;
                    Some(analyze(&doc_id_for(p), &raw, None, &res)?.doc)
                }
                None => None,
            };
            let errors = lint_annotations(&body, doc.as_ref());
            if !errors.is_empty() {
                for e in &errors {
                    say(stdout, format!("{}: {e}", annotations.display()));
                }
                return Err(Failure::Invalid(format!("{} invalid record(s)", errors.len())));
            }
            let count = body.lines().filter(|l| !l.trim().is_empty()).count();
            say(stdout, format!("{}: {count} records ok", annotations.display()));
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_INVALID
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_RUNTIME
        }
    }
}

pub fn main() -> std::process::ExitCode {
    let code = run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn narc(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["narc"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (code, _, err) = narc(&["pipeline", "x.txt", "--bogus"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = narc(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("validate-annotations"));
    }

    #[test]
    fn kappa_prints_three_decimals() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        fs::write(
            &p,
            "item_id,rater_id,answer\n1,a,x\n1,b,x\n1,c,y\n2,a,y\n2,b,x\n2,c,y\n",
        )
        .unwrap();
        let (code, out, _) = narc(&["eval", "kappa", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "-0.333\n");
    }

    #[test]
    fn missing_config_lexicon_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        fs::write(&cfg, r#"{"lexicons": {"emotions": "nope.tsv"}}"#).unwrap();
        let input = dir.path().join("t.txt");
        fs::write(&input, "Ann ran.").unwrap();
        let (code, _, err) = narc(&["--config", cfg.to_str().unwrap(), "pipeline", input.to_str().unwrap()]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("config error"));
    }

    #[test]
    fn bad_annotations_are_listed_by_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.jsonl");
        fs::write(
            &p,
            "{\"doc_id\":\"d\",\"sentence_index\":0,\"trigger\":{\"start\":0,\"end\":3}}\n{oops\n",
        )
        .unwrap();
        let (code, out, _) = narc(&["validate-annotations", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_INVALID);
        assert_eq!(out.lines().count(), 1, "{out}");
        assert!(out.contains("bad.jsonl: line 2:"), "{out}");
    }

    #[test]
    fn bad_window_flags_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("t.txt");
        fs::write(&input, "Ann ran.").unwrap();
        let out = dir.path().join("o");
        let (code, _, _) = narc(&[
            "pipeline",
            input.to_str().unwrap(),
            "--window",
            "4",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_INVALID);
        assert!(!out.exists());
    }
}

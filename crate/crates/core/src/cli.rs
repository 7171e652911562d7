//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error (error document on stderr), 2 usage
//! error or unreadable table/input file.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Result;
use crate::msm::{classify_variables, to_msm, unused_labels};
use crate::notation::{default_table, load_notation_table, NotationTable};
use crate::parser::parse_text;
use crate::pipeline::{render, OutputFormat, View};
use crate::printer::PrintConfig;
use crate::service::{serve, TableSet, DEFAULT_TABLE_NAME};
use crate::wsm::to_wsm;

#[derive(Debug, Parser)]
#[command(name = "strictmiz", version, about = "Parse and normalize Mizar-subset articles")]
struct Cli {
    /// Notation table file; repeatable, the last one wins. Defaults to the bundled table.
    #[arg(long = "table", value_name = "FILE", global = true)]
    tables: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the parse tree as XML.
    Parse {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Pretty-print with minimal parentheses.
    Pretty {
        #[arg(long, default_value_t = 80)]
        width: usize,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Weakly strict normal form.
    Wsm {
        #[arg(long, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(default_value = "-")]
        input: String,
    },
    /// More strict normal form.
    Msm {
        #[arg(long, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Line statistics over a set of articles.
    Stats {
        /// Measure the WSM form of each article instead of its text.
        #[arg(long)]
        wsm: bool,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Report label usage and variable origins.
    Analyze {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

/// Runs the CLI on explicit streams and returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "strictmiz: {e}");
            2
        }
    }
}

/// Failures that are not about the article text itself.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn load_table(path: Option<&PathBuf>) -> std::result::Result<NotationTable, UsageError> {
    let Some(path) = path else { return Ok(default_table()) };
    let source = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read table {}: {e}", path.display())))?;
    load_notation_table(&source).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_input(input: &str, stdin: &mut dyn Read) -> std::result::Result<(String, String), UsageError> {
    if input == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| UsageError(format!("cannot read standard input: {e}")))?;
        return Ok((text, String::new()));
    }
    let text = std::fs::read_to_string(input).map_err(|e| UsageError(format!("cannot read {input}: {e}")))?;
    let name = Path::new(input).file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((text, name))
}

fn execute(
    cli: Cli,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<i32, UsageError> {
    let table = load_table(cli.tables.last())?;
    let (view, input) = match cli.command {
        Command::Parse { input } => (View::Parse, input),
        Command::Pretty { width, input } => {
            let config = PrintConfig::new(width, PrintConfig::default().indent)
                .ok_or_else(|| UsageError(format!("--width must be at least {}", PrintConfig::MIN_WIDTH)))?;
            (View::Pretty(config), input)
        }
        Command::Wsm { format, input } => (View::Wsm(format), input),
        Command::Msm { format, input } => (View::Msm(format), input),
        Command::Stats { wsm, inputs } => {
            let mut texts = Vec::with_capacity(inputs.len());
            for input in &inputs {
                let (text, _) = read_input(input, stdin)?;
                if wsm {
                    match parse_text(&text, &table) {
                        Ok(a) => texts.push(to_wsm(&a)),
                        Err(e) => return Ok(input_error(stderr, &e.document())),
                    }
                } else {
                    texts.push(text);
                }
            }
            let stats = corpus_stats(texts.iter().map(String::as_str));
            write_out(stdout, &stats.to_string())?;
            return Ok(0);
        }
        Command::Analyze { input } => {
            let (text, _) = read_input(&input, stdin)?;
            return match analyze(&text, &table) {
                Ok(report) => {
                    write_out(stdout, &report)?;
                    Ok(0)
                }
                Err(e) => Ok(input_error(stderr, &e.document())),
            };
        }
        Command::Serve { port } => {
            let mut tables = TableSet::from_env().map_err(|e| UsageError(format!("cannot load tables: {e}")))?;
            if !cli.tables.is_empty() {
                tables.insert(DEFAULT_TABLE_NAME, table);
            }
            return match serve(port, tables) {
                Ok(()) => Ok(0),
                Err(e) => {
                    let _ = writeln!(stderr, "strictmiz: cannot serve on port {port}: {e}");
                    Ok(1)
                }
            };
        }
    };
    let (text, name) = read_input(&input, stdin)?;
    match render(view, &text, &name, &table) {
        Ok(out) => {
            write_out(stdout, &out)?;
            Ok(0)
        }
        Err(e) => Ok(input_error(stderr, &e.document())),
    }
}

fn write_out(stdout: &mut dyn Write, text: &str) -> std::result::Result<(), UsageError> {
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| UsageError(format!("cannot write output: {e}")))
}

fn input_error(stderr: &mut dyn Write, document: &str) -> i32 {
    let _ = stderr.write_all(document.as_bytes());
    1
}

/// Line-length statistics; lengths count characters, lines are split on LF
/// (a final LF terminates the last line rather than starting a new one).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub article_count: usize,
    pub longest_line: usize,
    /// Mean line length in tenths, rounded half up.
    pub mean_line_length_tenths: u64,
    pub articles_with_line_ge_500: usize,
}

impl CorpusStats {
    pub fn mean_line_length(&self) -> f64 {
        self.mean_line_length_tenths as f64 / 10.0
    }

    /// The mean with exactly one decimal, e.g. `54.7`.
    pub fn mean_display(&self) -> String {
        format!("{}.{}", self.mean_line_length_tenths / 10, self.mean_line_length_tenths % 10)
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "articles: {}", self.article_count)?;
        writeln!(f, "longest_line: {}", self.longest_line)?;
        writeln!(f, "mean_line_length: {}", self.mean_display())?;
        writeln!(f, "articles_with_line_ge_500: {}", self.articles_with_line_ge_500)
    }
}

pub fn corpus_stats<'a>(texts: impl IntoIterator<Item = &'a str>) -> CorpusStats {
    let mut stats = CorpusStats::default();
    let (mut total_chars, mut total_lines) = (0u64, 0u64);
    for text in texts {
        stats.article_count += 1;
        let mut has_long = false;
        for line in text.split_terminator('\n') {
            let len = line.chars().count();
            total_chars += len as u64;
            total_lines += 1;
            stats.longest_line = stats.longest_line.max(len);
            has_long |= len >= 500;
        }
        stats.articles_with_line_ge_500 += usize::from(has_long);
    }
    if total_lines > 0 {
        stats.mean_line_length_tenths = (20 * total_chars + total_lines) / (2 * total_lines);
    }
    stats
}

/// Label usage after MSM normalization and the origin of every variable.
///
/// ```text
/// label Label1 used
/// label Label2 unused
/// variable X reserved RV1 1:9
/// ```
pub fn analyze(text: &str, table: &NotationTable) -> Result<String> {
    let article = parse_text(text, table)?;
    let msm = to_msm(&article)?;
    let info = classify_variables(&article)?;
    let unused = unused_labels(&msm);
    let mut out = String::new();
    for label in msm_labels(&msm.items) {
        let usage = if unused.contains(&label) { "unused" } else { "used" };
        out.push_str(&format!("label {label} {usage}\n"));
    }
    for intro in &info.introductions {
        out.push_str(&format!("variable {} {} {} {}\n", intro.name, intro.category, intro.msm_name, intro.pos));
    }
    Ok(out)
}

fn msm_labels(items: &[crate::ast::TextItem]) -> Vec<String> {
    use crate::ast::{Justification, TextItem};
    let mut out = Vec::new();
    for item in items {
        if let Some(l) = item.label() {
            out.push(l.name.clone());
        }
        if let TextItem::Statement(s) = item {
            if let Justification::Proof(body) = &s.justification {
                out.extend(msm_labels(body));
            }
        }
    }
    out
}

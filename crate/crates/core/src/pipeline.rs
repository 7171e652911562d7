//! One entry point per output view, shared by the CLI, the HTTP service and
//! the C bindings so that all three produce byte-identical results.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::msm::to_msm;
use crate::notation::NotationTable;
use crate::parser::parse_text;
use crate::printer::{pretty, PrintConfig};
use crate::wsm::{parse_wsm, to_wsm};
use crate::xml::ast_to_xml;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Xml,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<OutputFormat, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "xml" => Ok(OutputFormat::Xml),
            other => Err(format!("unknown format `{other}` (expected `text` or `xml`)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Xml => "xml",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    /// Parse-tree XML.
    Parse,
    Pretty(PrintConfig),
    Wsm(OutputFormat),
    Msm(OutputFormat),
}

pub const CONTENT_TYPE_TEXT: &str = "text/plain; charset=utf-8";
pub const CONTENT_TYPE_XML: &str = "application/xml; charset=utf-8";

impl View {
    pub fn content_type(self) -> &'static str {
        match self {
            View::Parse | View::Wsm(OutputFormat::Xml) | View::Msm(OutputFormat::Xml) => CONTENT_TYPE_XML,
            _ => CONTENT_TYPE_TEXT,
        }
    }
}

/// Runs the whole pipeline for one view. In XML form the WSM and MSM views
/// serialize the normalized text re-read by the table-free reader, so
/// positions refer to lines of the normalized text.
pub fn render(view: View, text: &str, source_name: &str, table: &NotationTable) -> Result<String> {
    let mut article = parse_text(text, table)?;
    article.source_name = source_name.to_string();
    let normalized = match view {
        View::Parse => return Ok(ast_to_xml(&article)),
        View::Pretty(config) => return Ok(pretty(&article, table, config)),
        View::Wsm(format) => (to_wsm(&article), format),
        View::Msm(format) => (to_wsm(&to_msm(&article)?), format),
    };
    match normalized {
        (text, OutputFormat::Text) => Ok(text),
        (text, OutputFormat::Xml) => {
            let mut reread = parse_wsm(&text)?;
            reread.source_name = source_name.to_string();
            Ok(ast_to_xml(&reread))
        }
    }
}

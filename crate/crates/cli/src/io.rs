//! Reading inputs and telling `.hd` from `.kd` text.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use openbook::{HeegaardDiagram, KirbyDiagram};

use crate::CliError;

/// Where an input came from, for headers and messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Stdin,
    File(PathBuf),
}

impl Source {
    pub fn from_args(paths: &[PathBuf]) -> Vec<Source> {
        if paths.is_empty() {
            return vec![Source::Stdin];
        }
        paths
            .iter()
            .map(|p| {
                if p == Path::new("-") {
                    Source::Stdin
                } else {
                    Source::File(p.clone())
                }
            })
            .collect()
    }

    pub fn label(&self) -> String {
        match self {
            Source::Stdin => "<stdin>".into(),
            Source::File(p) => p.display().to_string(),
        }
    }

    pub fn read(&self) -> Result<String, CliError> {
        match self {
            Source::Stdin => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::Domain(format!("<stdin>: {e}")))?;
                Ok(text)
            }
            Source::File(p) => {
                fs::read_to_string(p).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Heegaard,
    Kirby,
}

/// `.kd` files are JSON objects; anything else is read as `.hd`.
pub fn detect(text: &str) -> Format {
    if text.trim_start().starts_with('{') {
        Format::Kirby
    } else {
        Format::Heegaard
    }
}

/// A parsed input of either kind.
pub enum Diagram {
    Heegaard(HeegaardDiagram),
    Kirby(KirbyDiagram),
}

pub fn parse_any(text: &str, label: &str) -> Result<Diagram, CliError> {
    let wrap = |e: &dyn std::fmt::Display| CliError::Domain(format!("{label}: {e}"));
    match detect(text) {
        Format::Kirby => KirbyDiagram::from_kd_str(text)
            .map(Diagram::Kirby)
            .map_err(|e| wrap(&e)),
        Format::Heegaard => text.parse().map(Diagram::Heegaard).map_err(|e| wrap(&e)),
    }
}

pub fn parse_heegaard(text: &str, label: &str) -> Result<HeegaardDiagram, CliError> {
    match parse_any(text, label)? {
        Diagram::Heegaard(hd) => Ok(hd),
        Diagram::Kirby(_) => Err(CliError::Domain(format!(
            "{label}: expected a Heegaard diagram (.hd), got a Kirby diagram"
        ))),
    }
}

pub fn parse_kirby(text: &str, label: &str) -> Result<KirbyDiagram, CliError> {
    match parse_any(text, label)? {
        Diagram::Kirby(kd) => Ok(kd),
        Diagram::Heegaard(_) => Err(CliError::Domain(format!(
            "{label}: expected a Kirby diagram (.kd), got a Heegaard diagram"
        ))),
    }
}

/// The word on a `# monodromy: <word>` line, if the text has one.
pub fn monodromy_comment(text: &str) -> Option<&str> {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix('#'))
        .find_map(|l| l.trim_start().strip_prefix("monodromy:"))
        .map(str::trim)
}

//! Structured reports and their text renderings.

use std::fmt::Write as _;

use openbook::braid::BraidCanon;
use openbook::invariants::{fundamental_group, AbelianGroup, FormData, InvariantBundle, Parity};
use openbook::reduce::{ReduceReport, Reduction};
use openbook::KirbyDiagram;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

pub fn emit<T: Serialize>(
    value: &T,
    format: OutputFormat,
    text: impl FnOnce(&T) -> String,
) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => text(value),
    }
}

#[derive(Serialize)]
pub struct Pi1 {
    pub generators: usize,
    pub relators: Vec<String>,
    pub presentation: String,
}

#[derive(Serialize)]
pub struct InvariantsReport {
    pub euler: i64,
    pub pi1: Pi1,
    #[serde(rename = "H")]
    pub homology: Option<Vec<AbelianGroup>>,
    pub form: Option<FormData>,
}

/// Homology and the form are `None` for diagrams that are not closed.
pub fn invariants(kd: &KirbyDiagram) -> Result<InvariantsReport, CliError> {
    let pi1 = fundamental_group(kd);
    let (homology, form) = if kd.is_closed() {
        let bundle = openbook::invariant_bundle(kd).map_err(domain)?;
        (Some(bundle.homology.groups.to_vec()), Some(bundle.form))
    } else {
        (None, None)
    };
    Ok(InvariantsReport {
        euler: kd.euler_characteristic(),
        pi1: Pi1 {
            generators: pi1.generators,
            relators: pi1.relators.iter().map(|r| r.to_string()).collect(),
            presentation: pi1.to_string(),
        },
        homology,
        form,
    })
}

pub fn invariants_text(r: &InvariantsReport) -> String {
    let mut s = String::new();
    writeln!(s, "euler: {}", r.euler).unwrap();
    writeln!(s, "pi1: {}", r.pi1.presentation).unwrap();
    match &r.homology {
        Some(groups) => {
            for (k, g) in groups.iter().enumerate() {
                writeln!(s, "H{k}: {g}").unwrap();
            }
        }
        None => writeln!(s, "H: undefined (diagram is not closed)").unwrap(),
    }
    match &r.form {
        Some(f) => writeln!(
            s,
            "form: {}, det {}, signature {}",
            parity(f.parity),
            f.det,
            f.signature
        )
        .unwrap(),
        None => writeln!(s, "form: undefined").unwrap(),
    }
    s
}

fn parity(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn bundle_text(b: &InvariantBundle) -> String {
    let groups: Vec<String> = b.homology.groups.iter().map(|g| g.to_string()).collect();
    format!(
        "chi {}, H = ({}), form {} det {} signature {}",
        b.euler,
        groups.join(", "),
        parity(b.form.parity),
        b.form.det,
        b.form.signature
    )
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum ReduceOutput {
    Plain(Reduction),
    Verified(Box<ReduceReport>),
}

pub fn reduce_text(r: &ReduceOutput) -> String {
    match r {
        ReduceOutput::Plain(red) => format!("{red}\n"),
        ReduceOutput::Verified(rep) => format!(
            "{}\noriginal: {}\nreduced:  {}\nverdict: {}\n",
            rep.reduction,
            bundle_text(&rep.original),
            bundle_text(&rep.reduced),
            if rep.verdict { "equal" } else { "DIFFERENT" }
        ),
    }
}

pub fn braid_text(c: &BraidCanon) -> String {
    let mut s = String::new();
    writeln!(s, "braid: {}", c.braid).unwrap();
    writeln!(s, "permutation: {}", c.permutation).unwrap();
    writeln!(s, "canonical: {}", c.canonical).unwrap();
    for (a, b) in &c.certificate.conjugations {
        writeln!(s, "conjugate by s({a} {b})").unwrap();
    }
    if c.certificate.crossing_changes {
        writeln!(s, "crossing changes: yes").unwrap();
    }
    s
}

#[derive(Serialize)]
pub struct RoundtripReport {
    pub format: &'static str,
    pub roundtrip: bool,
}

pub fn roundtrip_text(r: &RoundtripReport) -> String {
    format!("{} {}\n", r.format, r.roundtrip)
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

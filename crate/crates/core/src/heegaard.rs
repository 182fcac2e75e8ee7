//! Heegaard diagrams of compact 3-manifolds with boundary.
//!
//! A diagram has one 0-handle, `genus` 1-handles and one attaching curve per
//! 2-handle. Curves are not drawn: each is the cyclic sequence of events met
//! while walking along it, namely passes through 1-handles, self-crossing
//! kinks, and crossings with other curves. Everything downstream (free-group
//! words, writhe, linking numbers) is computed from these events.
//!
//! The `.hd` text format is one statement per line with `#` comments:
//!
//! ```text
//! page g=1
//! curve a : pass 1 +; pass 1 +; pass 1 +; kink +
//! curve b :
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::word::{Letter, Sign, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossingRole {
    Over,
    Under,
}

impl CrossingRole {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingRole::Over => "over",
            CrossingRole::Under => "under",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    /// The curve runs through 1-handle `handle` (1-based).
    Pass { handle: usize, sign: Sign },
    /// A self-crossing of the curve.
    Kink { sign: Sign },
    /// A crossing with another curve; `id` pairs the two sides.
    Cross {
        other: String,
        role: CrossingRole,
        sign: Sign,
        id: u64,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Pass { handle, sign } => write!(f, "pass {handle} {sign}"),
            Event::Kink { sign } => write!(f, "kink {sign}"),
            Event::Cross {
                other,
                role,
                sign,
                id,
            } => write!(f, "cross {other} {} {sign} {id}", role.as_str()),
        }
    }
}

/// An attaching circle of a 2-handle, read in a fixed orientation.
///
/// Equality is up to cyclic rotation of the event sequence.
#[derive(Clone, Debug)]
pub struct AttachingCurve {
    name: String,
    events: Vec<Event>,
}

impl AttachingCurve {
    pub fn new(name: impl Into<String>, events: Vec<Event>) -> Self {
        AttachingCurve {
            name: name.into(),
            events,
        }
    }

    pub fn unknot(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Sum of kink signs. This is the blackboard framing of the curve.
    pub fn writhe(&self) -> i64 {
        self.events
            .iter()
            .map(|e| match e {
                Event::Kink { sign } => sign.value(),
                _ => 0,
            })
            .sum()
    }

    /// The passes through 1-handles, in reading order from the stored basepoint.
    pub fn pass_word(&self) -> Word {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Pass { handle, sign } => Some(Letter::new(*handle, *sign)),
                _ => None,
            })
            .collect()
    }

    pub fn pass_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Pass { .. }))
            .count()
    }

    pub fn rotated(&self, by: usize) -> AttachingCurve {
        let mut events = self.events.clone();
        if !events.is_empty() {
            let k = by % events.len();
            events.rotate_left(k);
        }
        AttachingCurve::new(self.name.clone(), events)
    }

    /// The same curve read in the opposite direction. Passes and inter-curve
    /// crossings change sign; kinks keep theirs.
    pub fn reversed(&self) -> AttachingCurve {
        let events = self
            .events
            .iter()
            .rev()
            .map(|e| match e {
                Event::Pass { handle, sign } => Event::Pass {
                    handle: *handle,
                    sign: sign.flip(),
                },
                Event::Kink { sign } => Event::Kink { sign: *sign },
                Event::Cross {
                    other,
                    role,
                    sign,
                    id,
                } => Event::Cross {
                    other: other.clone(),
                    role: *role,
                    sign: sign.flip(),
                    id: *id,
                },
            })
            .collect();
        AttachingCurve::new(self.name.clone(), events)
    }

    fn events_equal_up_to_rotation(a: &[Event], b: &[Event]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|k| a.iter().cycle().skip(k).take(a.len()).eq(b.iter()))
    }

    /// Equal as unoriented curves: up to rotation and reversal.
    pub fn is_equivalent(&self, other: &AttachingCurve) -> bool {
        self.name == other.name
            && (Self::events_equal_up_to_rotation(&self.events, &other.events)
                || Self::events_equal_up_to_rotation(&self.reversed().events, &other.events))
    }
}

impl PartialEq for AttachingCurve {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Self::events_equal_up_to_rotation(&self.events, &other.events)
    }
}

impl Eq for AttachingCurve {}

/// Where a violation was found: curve index and event index, both 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub curve: Option<usize>,
    pub event: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ViolationKind {
    #[error("handle index out of range: pass through handle {handle} but the page has {genus} 1-handles")]
    HandleOutOfRange { handle: usize, genus: usize },
    #[error("unpaired crossing {id}")]
    UnpairedCrossing { id: u64 },
    #[error("crossing {id} appears {count} times")]
    CrossingOverused { id: u64, count: usize },
    #[error("crossing {id} needs one over and one under side")]
    CrossingRoleMismatch { id: u64 },
    #[error("crossing {id} has different signs on its two sides")]
    CrossingSignMismatch { id: u64 },
    #[error("crossing {id} names curves that do not match its two sides")]
    CrossingPartnerMismatch { id: u64 },
    #[error("crossing {id} references unknown curve `{name}`")]
    UnknownCurve { id: u64, name: String },
    #[error("crossing {id} references its own curve; self-crossings are kinks")]
    SelfCrossing { id: u64 },
    #[error("curves `{a}` and `{b}` cross an odd number of times ({count})")]
    OddCrossingCount { a: String, b: String, count: usize },
    #[error("duplicate curve name `{name}`")]
    DuplicateCurveName { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: Location,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.location.curve, self.location.event) {
            (Some(c), Some(e)) => write!(f, "curve {}, event {}: {}", c + 1, e + 1, self.kind),
            (Some(c), None) => write!(f, "curve {}: {}", c + 1, self.kind),
            _ => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Debug, Error)]
pub enum HeegaardError {
    #[error("invalid Heegaard diagram: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("lens space parameters ({p}, {q}) are not coprime")]
    NotCoprime { p: u64, q: u64 },
    #[error("lens space parameters must be positive, got ({p}, {q})")]
    NonPositive { p: u64, q: u64 },
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn check_lens_parameters(p: u64, q: u64) -> Result<(), HeegaardError> {
    if p == 0 || q == 0 {
        return Err(HeegaardError::NonPositive { p, q });
    }
    if gcd(p, q) != 1 {
        return Err(HeegaardError::NotCoprime { p, q });
    }
    Ok(())
}

/// A planar Heegaard diagram of a page: `genus` 1-handles and the attaching
/// curves of the 2-handles, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardDiagram {
    genus: usize,
    curves: Vec<AttachingCurve>,
}

impl HeegaardDiagram {
    /// Builds a diagram without checking it; see [`HeegaardDiagram::validate`].
    pub fn new(genus: usize, curves: Vec<AttachingCurve>) -> Self {
        HeegaardDiagram { genus, curves }
    }

    /// Builds a diagram and rejects it unless [`HeegaardDiagram::validate`] is empty.
    pub fn try_new(genus: usize, curves: Vec<AttachingCurve>) -> Result<Self, HeegaardError> {
        let hd = Self::new(genus, curves);
        hd.ensure_valid()?;
        Ok(hd)
    }

    /// `g` ball pairs and `n` eventless unknots: the punctured handlebody `H_{g,n}`.
    pub fn canonical_punctured_handlebody(g: usize, n: usize) -> Self {
        let curves = (1..=n)
            .map(|j| AttachingCurve::unknot(format!("c{j}")))
            .collect();
        HeegaardDiagram { genus: g, curves }
    }

    /// The punctured lens space `L(p,q) - D^3`: one 1-handle and one curve
    /// running `p` times through the handle and wrapping `q` times, each wrap
    /// drawn as a positive kink.
    pub fn lens(p: u64, q: u64) -> Result<Self, HeegaardError> {
        check_lens_parameters(p, q)?;
        let mut events = vec![
            Event::Pass {
                handle: 1,
                sign: Sign::Plus
            };
            p as usize
        ];
        events.extend(std::iter::repeat_n(
            Event::Kink { sign: Sign::Plus },
            q as usize,
        ));
        Ok(HeegaardDiagram {
            genus: 1,
            curves: vec![AttachingCurve::new("a", events)],
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn curves(&self) -> &[AttachingCurve] {
        &self.curves
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn handle_label(&self, l: usize) -> String {
        format!("h{l}")
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    /// True when every curve is eventless, i.e. the diagram is the canonical
    /// diagram of a punctured handlebody.
    pub fn is_punctured_handlebody(&self) -> bool {
        self.curves.iter().all(|c| c.events.is_empty())
    }

    /// `1 - g + n`.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.genus as i64 + self.curves.len() as i64
    }

    /// Half the signed count of crossings between curves `i` and `j`.
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        let other = &self.curves[j].name;
        let twice: i64 = self.curves[i]
            .events
            .iter()
            .filter_map(|e| match e {
                Event::Cross { other: o, sign, .. } if o == other => Some(sign.value()),
                _ => None,
            })
            .sum();
        twice / 2
    }

    /// Adds one 1-handle and one eventless curve: the connected sum with a
    /// punctured solid torus.
    pub fn with_stabilization(&self) -> HeegaardDiagram {
        let mut curves = self.curves.clone();
        let mut k = curves.len() + 1;
        let mut name = format!("c{k}");
        while self.curve_index(&name).is_some() {
            k += 1;
            name = format!("c{k}");
        }
        curves.push(AttachingCurve::unknot(name));
        HeegaardDiagram {
            genus: self.genus + 1,
            curves,
        }
    }

    /// Every invariant violation; empty for a valid diagram.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut names = BTreeSet::new();
        for (ci, c) in self.curves.iter().enumerate() {
            if !names.insert(c.name.as_str()) {
                out.push(Violation {
                    location: Location {
                        curve: Some(ci),
                        event: None,
                    },
                    kind: ViolationKind::DuplicateCurveName {
                        name: c.name.clone(),
                    },
                });
            }
        }

        // crossing id -> (curve, event, other, role, sign)
        type Side<'a> = (usize, usize, &'a str, CrossingRole, Sign);
        let mut sides: BTreeMap<u64, Vec<Side>> = BTreeMap::new();
        for (ci, c) in self.curves.iter().enumerate() {
            for (ei, e) in c.events.iter().enumerate() {
                let at = Location {
                    curve: Some(ci),
                    event: Some(ei),
                };
                match e {
                    Event::Pass { handle, .. } => {
                        if *handle == 0 || *handle > self.genus {
                            out.push(Violation {
                                location: at,
                                kind: ViolationKind::HandleOutOfRange {
                                    handle: *handle,
                                    genus: self.genus,
                                },
                            });
                        }
                    }
                    Event::Kink { .. } => {}
                    Event::Cross {
                        other,
                        role,
                        sign,
                        id,
                    } => {
                        if *other == c.name {
                            out.push(Violation {
                                location: at,
                                kind: ViolationKind::SelfCrossing { id: *id },
                            });
                        } else if self.curve_index(other).is_none() {
                            out.push(Violation {
                                location: at,
                                kind: ViolationKind::UnknownCurve {
                                    id: *id,
                                    name: other.clone(),
                                },
                            });
                        }
                        sides
                            .entry(*id)
                            .or_default()
                            .push((ci, ei, other.as_str(), *role, *sign));
                    }
                }
            }
        }

        let mut pair_counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (id, s) in &sides {
            let (c0, e0, _, _, _) = s[0];
            let at = Location {
                curve: Some(c0),
                event: Some(e0),
            };
            match s.len() {
                1 => {
                    out.push(Violation {
                        location: at,
                        kind: ViolationKind::UnpairedCrossing { id: *id },
                    });
                    continue;
                }
                2 => {}
                count => {
                    out.push(Violation {
                        location: at,
                        kind: ViolationKind::CrossingOverused { id: *id, count },
                    });
                    continue;
                }
            }
            let (ca, _, oa, ra, sa) = s[0];
            let (cb, eb, ob, rb, sb) = s[1];
            let at_b = Location {
                curve: Some(cb),
                event: Some(eb),
            };
            if ra == rb {
                out.push(Violation {
                    location: at_b,
                    kind: ViolationKind::CrossingRoleMismatch { id: *id },
                });
            }
            if sa != sb {
                out.push(Violation {
                    location: at_b,
                    kind: ViolationKind::CrossingSignMismatch { id: *id },
                });
            }
            if ca == cb || self.curves[cb].name != oa || self.curves[ca].name != ob {
                out.push(Violation {
                    location: at_b,
                    kind: ViolationKind::CrossingPartnerMismatch { id: *id },
                });
            } else {
                *pair_counts.entry((ca.min(cb), ca.max(cb))).or_default() += 1;
            }
        }
        for ((a, b), count) in pair_counts {
            if count % 2 != 0 {
                out.push(Violation {
                    location: Location {
                        curve: Some(a),
                        event: None,
                    },
                    kind: ViolationKind::OddCrossingCount {
                        a: self.curves[a].name.clone(),
                        b: self.curves[b].name.clone(),
                        count,
                    },
                });
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), HeegaardError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(HeegaardError::Invalid(violations))
        }
    }

    /// Parses `.hd` text without validating it.
    pub fn parse_unchecked(text: &str) -> Result<Self, HeegaardError> {
        let mut genus = None;
        let mut curves = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| HeegaardError::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            if keyword == "page" {
                if genus.is_some() {
                    return Err(err("duplicate `page` statement".into()));
                }
                let rest = rest.trim();
                let value = rest
                    .strip_prefix("g=")
                    .ok_or_else(|| err(format!("expected `page g=<int>`, got `{line}`")))?;
                genus = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| err(format!("invalid genus `{}`", value.trim())))?,
                );
            } else if keyword == "curve" {
                if genus.is_none() {
                    return Err(err("`curve` before `page` statement".into()));
                }
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `curve <name> : <events>`".into()))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) || name.contains(';') {
                    return Err(err(format!("invalid curve name `{name}`")));
                }
                let mut events = Vec::new();
                let body = body.trim();
                if !body.is_empty() {
                    for tok in body.split(';') {
                        events.push(parse_event(tok.trim()).map_err(err)?);
                    }
                }
                curves.push(AttachingCurve::new(name, events));
            } else {
                return Err(err(format!("unknown statement `{line}`")));
            }
        }
        let genus = genus.ok_or(HeegaardError::Parse {
            line: text.lines().count().max(1),
            message: "missing `page g=<int>` statement".into(),
        })?;
        Ok(HeegaardDiagram { genus, curves })
    }

    /// Serializes to `.hd` text.
    pub fn to_hd_string(&self) -> String {
        self.to_string()
    }
}

fn parse_sign(tok: Option<&str>) -> Result<Sign, String> {
    let tok = tok.ok_or_else(|| "missing sign".to_string())?;
    Sign::from_symbol(tok).ok_or_else(|| format!("invalid sign `{tok}`, expected + or -"))
}

fn parse_event(tok: &str) -> Result<Event, String> {
    let mut parts = tok.split_whitespace();
    let kind = parts.next().ok_or_else(|| "empty event".to_string())?;
    let event = match kind {
        "pass" => {
            let handle = parts
                .next()
                .ok_or_else(|| "missing handle index".to_string())?;
            let handle = handle
                .parse::<usize>()
                .map_err(|_| format!("invalid handle index `{handle}`"))?;
            Event::Pass {
                handle,
                sign: parse_sign(parts.next())?,
            }
        }
        "kink" => Event::Kink {
            sign: parse_sign(parts.next())?,
        },
        "cross" => {
            let other = parts
                .next()
                .ok_or_else(|| "missing crossing partner".to_string())?
                .to_string();
            let role = match parts.next() {
                Some("over") => CrossingRole::Over,
                Some("under") => CrossingRole::Under,
                Some(r) => return Err(format!("invalid crossing role `{r}`")),
                None => return Err("missing crossing role".into()),
            };
            let sign = parse_sign(parts.next())?;
            let id = parts
                .next()
                .ok_or_else(|| "missing crossing id".to_string())?;
            let id = id
                .parse::<u64>()
                .map_err(|_| format!("invalid crossing id `{id}`"))?;
            Event::Cross {
                other,
                role,
                sign,
                id,
            }
        }
        other => return Err(format!("unknown event `{other}`")),
    };
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected token `{extra}` in event `{tok}`"));
    }
    Ok(event)
}

impl FromStr for HeegaardDiagram {
    type Err = HeegaardError;

    /// Parses and validates `.hd` text.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hd = Self::parse_unchecked(s)?;
        hd.ensure_valid()?;
        Ok(hd)
    }
}

impl fmt::Display for HeegaardDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "page g={}", self.genus)?;
        for c in &self.curves {
            write!(f, "curve {} :", c.name)?;
            for (i, e) in c.events.iter().enumerate() {
                if i == 0 {
                    write!(f, " {e}")?;
                } else {
                    write!(f, "; {e}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

//! Kirby moves on the algebraic shadow.
//!
//! Moves are pure: each takes a diagram and returns a new one. Component
//! indices are 0-based positions in [`KirbyDiagram::components`]; ball
//! indices are 1-based generator labels. A [`Derivation`] threads a diagram
//! through a sequence of moves and keeps the log.
//!
//! Move scripts have one move per line, with 1-based component indices:
//!
//! ```text
//! slide 1 2 -
//! crossing 1
//! cancel12 1 1
//! cancel23 1
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kirby::{ComponentRole, KirbyDiagram};
use crate::word::{Sign, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("component index {index} out of range ({count} components)")]
    ComponentOutOfRange { index: usize, count: usize },
    #[error("ball index {index} out of range ({count} balls)")]
    BallOutOfRange { index: usize, count: usize },
    #[error("cannot slide component {0} over itself")]
    SelfSlide(usize),
    #[error("component {0} has no 0-framed meridian partner")]
    NoMeridian(usize),
    #[error("cancel12 needs component {component} to pass exactly once, through ball {ball}; its word is {word}")]
    NotCancellingPair {
        ball: usize,
        component: usize,
        word: String,
    },
    #[error("cancel23 needs component {0} to be an unlinked 0-framed unknot away from the balls")]
    NotOrphanUnknot(usize),
    #[error("no 3-handle left to cancel")]
    NoThreeHandle,
    #[error("component {component} cannot reach framing parity by slides over {over}: {reason}")]
    ParityNormalization {
        component: usize,
        over: usize,
        reason: &'static str,
    },
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Band-sum component `component` with `over` (or its reverse).
    Slide {
        component: usize,
        over: usize,
        sign: Sign,
    },
    CrossingChange {
        component: usize,
    },
    Cancel12 {
        ball: usize,
        component: usize,
    },
    Cancel23 {
        component: usize,
    },
}

impl fmt::Display for Move {
    /// Script syntax, with 1-based component indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Slide {
                component,
                over,
                sign,
            } => write!(f, "slide {} {} {}", component + 1, over + 1, sign),
            Move::CrossingChange { component } => write!(f, "crossing {}", component + 1),
            Move::Cancel12 { ball, component } => write!(f, "cancel12 {} {}", ball, component + 1),
            Move::Cancel23 { component } => write!(f, "cancel23 {}", component + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub applied: Move,
    pub note: Option<String>,
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.note {
            Some(note) => write!(f, "{}  # {}", self.applied, note),
            None => write!(f, "{}", self.applied),
        }
    }
}

fn check_component(kd: &KirbyDiagram, i: usize) -> Result<(), MoveError> {
    if i >= kd.component_count() {
        Err(MoveError::ComponentOutOfRange {
            index: i,
            count: kd.component_count(),
        })
    } else {
        Ok(())
    }
}

/// Slides component `i` over component `j`.
///
/// The word of `i` becomes the free reduction of `word_i · word_j^{±1}`, its
/// framing becomes `f_i + f_j ± 2 lk(i,j)`, and `lk(i,k)` becomes
/// `lk(i,k) ± lk(j,k)`. Component `j` is unchanged. Sliding with `+` and then
/// `-` restores the diagram when `word_i` is freely reduced.
pub fn slide(kd: &KirbyDiagram, i: usize, j: usize, sign: Sign) -> Result<KirbyDiagram, MoveError> {
    check_component(kd, i)?;
    check_component(kd, j)?;
    if i == j {
        return Err(MoveError::SelfSlide(i));
    }
    let s = sign.value();
    let mut out = kd.clone();
    let cj = &kd.components()[j];
    let ci = &kd.components()[i];
    let added = match sign {
        Sign::Plus => cj.word.clone(),
        Sign::Minus => cj.word.inverse(),
    };
    out.set_word(i, ci.word.concat(&added).freely_reduced());
    let lk_ij = kd.linking_number(i, j);
    for k in 0..kd.component_count() {
        if k != i {
            out.set_linking(i, k, kd.linking_number(i, k) + s * kd.linking_number(j, k));
        }
    }
    out.set_framing(i, ci.framing + cj.framing + 2 * s * lk_ij);
    Ok(out)
}

/// Index of a 0-framed meridian of component `i`: a dual component with
/// empty word, framing 0 and linking ±1 with `i`.
pub fn meridian_of(kd: &KirbyDiagram, i: usize) -> Option<usize> {
    kd.components().iter().enumerate().position(|(k, c)| {
        k != i
            && c.role == ComponentRole::Dual
            && c.word.is_empty()
            && c.framing == 0
            && kd.linking_number(i, k).abs() == 1
    })
}

/// Changes a crossing of component `i` by sliding it twice over its 0-framed
/// meridian. No word, framing or linking number changes, so the shadow is
/// returned as is; the move exists for the log.
pub fn crossing_change(kd: &KirbyDiagram, i: usize) -> Result<KirbyDiagram, MoveError> {
    check_component(kd, i)?;
    meridian_of(kd, i).ok_or(MoveError::NoMeridian(i))?;
    Ok(kd.clone())
}

/// Cancels ball `ball` against component `i`, whose word must be the single
/// letter `x_ball^{±1}`. Other components lose their passes through the ball
/// and higher balls are renumbered. Framings and linking numbers of the
/// remaining components are kept.
pub fn cancel_12(kd: &KirbyDiagram, ball: usize, i: usize) -> Result<KirbyDiagram, MoveError> {
    check_component(kd, i)?;
    if ball == 0 || ball > kd.balls() {
        return Err(MoveError::BallOutOfRange {
            index: ball,
            count: kd.balls(),
        });
    }
    let word = &kd.components()[i].word;
    if word.len() != 1 || word.letters()[0].generator != ball {
        return Err(MoveError::NotCancellingPair {
            ball,
            component: i,
            word: word.to_string(),
        });
    }
    let mut out = kd.clone();
    out.remove_component(i);
    // the cancelled 2-handle reads x = 1, so passes elsewhere vanish
    out.remove_ball(ball, &Word::empty());
    Ok(out)
}

/// True when some component other than `i` passes through `ball`; cancelling
/// then reroutes it, which the shadow does not track geometrically.
fn reroutes_others(kd: &KirbyDiagram, ball: usize, i: usize) -> bool {
    kd.components()
        .iter()
        .enumerate()
        .any(|(k, c)| k != i && c.word.occurrences(ball) > 0)
}

/// Cancels a 0-framed unknot, unlinked from everything and disjoint from
/// the balls, against a 3-handle.
pub fn cancel_23(kd: &KirbyDiagram, i: usize) -> Result<KirbyDiagram, MoveError> {
    check_component(kd, i)?;
    let c = &kd.components()[i];
    let unlinked = (0..kd.component_count()).all(|k| kd.linking_number(i, k) == 0);
    if !c.word.is_empty() || c.framing != 0 || !unlinked {
        return Err(MoveError::NotOrphanUnknot(i));
    }
    if kd.three_handles() == 0 {
        return Err(MoveError::NoThreeHandle);
    }
    let mut out = kd.clone();
    out.remove_component(i);
    out.remove_three_handle();
    Ok(out)
}

pub fn apply(kd: &KirbyDiagram, mv: &Move) -> Result<KirbyDiagram, MoveError> {
    match *mv {
        Move::Slide {
            component,
            over,
            sign,
        } => slide(kd, component, over, sign),
        Move::CrossingChange { component } => crossing_change(kd, component),
        Move::Cancel12 { ball, component } => cancel_12(kd, ball, component),
        Move::Cancel23 { component } => cancel_23(kd, component),
    }
}

/// A diagram together with the moves that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub diagram: KirbyDiagram,
    pub log: Vec<MoveRecord>,
}

impl Derivation {
    pub fn new(diagram: KirbyDiagram) -> Self {
        Derivation {
            diagram,
            log: Vec::new(),
        }
    }

    pub fn apply(self, mv: Move) -> Result<Self, MoveError> {
        let note = match mv {
            Move::Cancel12 { ball, component }
                if reroutes_others(&self.diagram, ball, component) =>
            {
                Some("rerouted passes; linking corrections not tracked".to_string())
            }
            Move::CrossingChange { component } => {
                meridian_of(&self.diagram, component).map(|m| format!("via meridian {}", m + 1))
            }
            _ => None,
        };
        let diagram = apply(&self.diagram, &mv)?;
        let mut log = self.log;
        log.push(MoveRecord { applied: mv, note });
        Ok(Derivation { diagram, log })
    }

    pub fn apply_all<'a>(
        self,
        moves: impl IntoIterator<Item = &'a Move>,
    ) -> Result<Self, MoveError> {
        moves.into_iter().try_fold(self, |d, mv| d.apply(*mv))
    }
}

/// Brings the framing of `i` to 0 or 1 by sliding it over `over`, which must
/// be a 0-framed unknot away from the balls linking `i` once and nothing
/// else. Each slide shifts the framing by two.
pub fn normalize_framing_parity(
    derivation: Derivation,
    i: usize,
    over: usize,
) -> Result<Derivation, MoveError> {
    let kd = &derivation.diagram;
    check_component(kd, i)?;
    check_component(kd, over)?;
    if i == over {
        return Err(MoveError::SelfSlide(i));
    }
    let m = &kd.components()[over];
    let fail = |reason| MoveError::ParityNormalization {
        component: i,
        over,
        reason,
    };
    if !m.word.is_empty() || m.framing != 0 {
        return Err(fail("not a 0-framed unknot away from the balls"));
    }
    let lk = kd.linking_number(i, over);
    if lk.abs() != 1 {
        return Err(fail("linking number is not ±1"));
    }
    if (0..kd.component_count()).any(|k| k != i && k != over && kd.linking_number(over, k) != 0) {
        return Err(fail("it links a third component"));
    }
    // slide sign s moves the framing by 2·s·lk
    let down = if lk > 0 { Sign::Minus } else { Sign::Plus };
    let mut d = derivation;
    loop {
        let f = d.diagram.components()[i].framing;
        let sign = if f > 1 {
            down
        } else if f < 0 {
            down.flip()
        } else {
            return Ok(d);
        };
        d = d.apply(Move::Slide {
            component: i,
            over,
            sign,
        })?;
    }
}

/// Parses a move script; indices in the script are 1-based.
pub fn parse_script(text: &str) -> Result<Vec<Move>, MoveError> {
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mv = line.parse::<Move>().map_err(|message| MoveError::Script {
            line: idx + 1,
            message,
        })?;
        moves.push(mv);
    }
    Ok(moves)
}

impl FromStr for Move {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let index = |s: &str| -> Result<usize, String> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(format!("invalid index `{s}` (indices are 1-based)")),
            }
        };
        match toks.as_slice() {
            ["slide", i, j, s] => Ok(Move::Slide {
                component: index(i)? - 1,
                over: index(j)? - 1,
                sign: Sign::from_symbol(s).ok_or_else(|| format!("invalid sign `{s}`"))?,
            }),
            ["crossing", i] => Ok(Move::CrossingChange {
                component: index(i)? - 1,
            }),
            ["cancel12", l, i] => Ok(Move::Cancel12 {
                ball: index(l)?,
                component: index(i)? - 1,
            }),
            ["cancel23", i] => Ok(Move::Cancel23 {
                component: index(i)? - 1,
            }),
            _ => Err(format!("unrecognized move `{line}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heegaard::HeegaardDiagram;
    use crate::kirby::{double, open_book};
    use crate::monodromy::{Twist, TwistWord};

    fn hopf(n: i64) -> KirbyDiagram {
        let w = TwistWord::new(0, 1, vec![Twist::sphere(1, n)]).unwrap();
        open_book(
            &HeegaardDiagram::canonical_punctured_handlebody(0, 1),
            &w.into(),
        )
        .unwrap()
    }

    #[test]
    fn slide_over_meridian_changes_framing_by_two() {
        let kd = double(&HeegaardDiagram::lens(3, 3 - 1).unwrap()).unwrap();
        assert_eq!(kd.components()[0].framing, 2);
        let out = slide(&kd, 0, 1, Sign::Minus).unwrap();
        assert_eq!(out.components()[0].framing, 0);
        assert_eq!(out.components()[0].word, kd.components()[0].word);
        assert_eq!(out.linking_number(0, 1), 1);
        assert_eq!(out.components()[1], kd.components()[1]);
    }

    #[test]
    fn slide_meridian_over_curve() {
        for n in 0..4 {
            let out = slide(&hopf(n), 1, 0, Sign::Plus).unwrap();
            assert_eq!(out.components()[1].framing, n + 2);
            let back = slide(&hopf(n), 1, 0, Sign::Minus).unwrap();
            assert_eq!(back.components()[1].framing, n - 2);
        }
    }

    #[test]
    fn identity_effect_slide() {
        let unknot = |name: &str, framing| crate::kirby::FramedComponent {
            name: name.into(),
            word: Word::empty(),
            framing,
            role: ComponentRole::Page,
        };
        let kd = KirbyDiagram::from_parts(
            0,
            vec![unknot("a", 3), unknot("b", 0)],
            vec![vec![3, 0], vec![0, 0]],
            0,
            1,
        )
        .unwrap();
        assert_eq!(slide(&kd, 0, 1, Sign::Plus).unwrap(), kd);
        assert_eq!(slide(&kd, 0, 1, Sign::Minus).unwrap(), kd);
    }

    #[test]
    fn slide_round_trip() {
        let kd = open_book(
            &HeegaardDiagram::canonical_punctured_handlebody(2, 2),
            &TwistWord::parse("t(1,1) t(2,2)^2 s(2)^3 t(1,2)", 2, 2)
                .unwrap()
                .into(),
        )
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for s in [Sign::Plus, Sign::Minus] {
                    let there = slide(&kd, i, j, s).unwrap();
                    assert_eq!(slide(&there, i, j, s.flip()).unwrap(), kd);
                }
            }
        }
    }

    #[test]
    fn slide_errors() {
        let kd = hopf(0);
        assert_eq!(slide(&kd, 0, 0, Sign::Plus), Err(MoveError::SelfSlide(0)));
        assert!(matches!(
            slide(&kd, 0, 5, Sign::Plus),
            Err(MoveError::ComponentOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn crossing_change_logged_noop() {
        let kd = double(&HeegaardDiagram::lens(3, 1).unwrap()).unwrap();
        let d = Derivation::new(kd.clone())
            .apply(Move::CrossingChange { component: 0 })
            .unwrap();
        assert_eq!(d.diagram, kd);
        assert_eq!(d.log.len(), 1);
        let d = d.apply(Move::CrossingChange { component: 0 }).unwrap();
        assert_eq!(d.diagram, kd);
        assert_eq!(d.log.len(), 2);
        assert_eq!(d.log[0].to_string(), "crossing 1  # via meridian 2");

        let hob = crate::kirby::half_open_book(&HeegaardDiagram::lens(3, 1).unwrap()).unwrap();
        assert_eq!(crossing_change(&hob, 0), Err(MoveError::NoMeridian(0)));
        // a twisted image is not a 0-framed meridian
        assert_eq!(crossing_change(&hopf(1), 0), Err(MoveError::NoMeridian(0)));
    }

    #[test]
    fn dumbbell_cancels_to_s4() {
        let dumbbell: HeegaardDiagram = "page g=1\ncurve a : pass 1 +\n".parse().unwrap();
        let kd = double(&dumbbell).unwrap();
        let d = Derivation::new(kd)
            .apply(Move::Cancel12 {
                ball: 1,
                component: 0,
            })
            .unwrap()
            .apply(Move::Cancel23 { component: 0 })
            .unwrap();
        assert_eq!(d.diagram, KirbyDiagram::empty(true));
        assert_eq!(d.log.len(), 2);
        assert!(d.log.iter().all(|r| r.note.is_none()));
    }

    #[test]
    fn cancel_preconditions() {
        let two: HeegaardDiagram = "page g=2\ncurve a : pass 1 +; pass 2 +\n".parse().unwrap();
        let kd = double(&two).unwrap();
        assert!(matches!(
            cancel_12(&kd, 1, 0),
            Err(MoveError::NotCancellingPair { .. })
        ));
        assert!(matches!(
            cancel_12(&kd, 3, 0),
            Err(MoveError::BallOutOfRange { .. })
        ));
        assert_eq!(cancel_23(&hopf(0), 1), Err(MoveError::NotOrphanUnknot(1)));
        let no3 = double(&HeegaardDiagram::canonical_punctured_handlebody(0, 2)).unwrap();
        let no3 = cancel_23(&no3, 0);
        assert_eq!(no3, Err(MoveError::NotOrphanUnknot(0)));
        let lonely = KirbyDiagram::from_parts(
            0,
            vec![crate::kirby::FramedComponent {
                name: "u".into(),
                word: Word::empty(),
                framing: 0,
                role: ComponentRole::Dual,
            }],
            vec![vec![0]],
            0,
            1,
        )
        .unwrap();
        assert_eq!(cancel_23(&lonely, 0), Err(MoveError::NoThreeHandle));
    }

    #[test]
    fn cancel12_reroutes_and_renumbers() {
        let hd: HeegaardDiagram =
            "page g=2\ncurve a : pass 1 +\ncurve b : pass 1 -; pass 2 +; pass 2 +\n"
                .parse()
                .unwrap();
        let kd = double(&hd).unwrap();
        let d = Derivation::new(kd)
            .apply(Move::Cancel12 {
                ball: 1,
                component: 0,
            })
            .unwrap();
        assert_eq!(d.diagram.balls(), 1);
        assert_eq!(d.diagram.components()[0].word, Word::power(1, 2));
        assert!(d.log[0].note.is_some());
    }

    #[test]
    fn parity_normalization() {
        for n in -5..=6 {
            let d = normalize_framing_parity(Derivation::new(hopf(n)), 1, 0).unwrap();
            assert_eq!(d.diagram, hopf(n.rem_euclid(2)));
            assert_eq!(d.log.len() as i64, (n - n.rem_euclid(2)).abs() / 2);
        }
        assert!(normalize_framing_parity(Derivation::new(hopf(2)), 0, 1).is_err());
    }

    #[test]
    fn script_parsing() {
        let moves =
            parse_script("# demo\nslide 1 2 -\ncrossing 1\ncancel12 1 1\ncancel23 1\n").unwrap();
        assert_eq!(
            moves,
            vec![
                Move::Slide {
                    component: 0,
                    over: 1,
                    sign: Sign::Minus
                },
                Move::CrossingChange { component: 0 },
                Move::Cancel12 {
                    ball: 1,
                    component: 0
                },
                Move::Cancel23 { component: 0 },
            ]
        );
        let text: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            text.join("\n"),
            "slide 1 2 -\ncrossing 1\ncancel12 1 1\ncancel23 1"
        );
        assert!(matches!(
            parse_script("slide 1 2\n"),
            Err(MoveError::Script { line: 1, .. })
        ));
        assert!(matches!(
            parse_script("\ncancel23 0\n"),
            Err(MoveError::Script { line: 2, .. })
        ));
    }
}

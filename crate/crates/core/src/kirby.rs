//! Kirby diagrams as algebraic shadows, and the open book constructions.
//!
//! A [`KirbyDiagram`] records what every computed invariant needs: the number
//! of dotted-ball pairs (1-handles), the framed components with their words
//! in the ball generators, the linking matrix, and the 3-/4-handle counts.
//! Planar positions and over/under data are not kept.
//!
//! Three constructions are provided:
//!
//! * [`half_open_book`] turns a Heegaard diagram of the page into a diagram
//!   of the half open book: balls for 1-handles and each attaching curve with
//!   its blackboard framing.
//! * [`double`] adds a 0-framed meridian to each curve, giving the open book
//!   with trivial monodromy.
//! * [`open_book`] adds, per curve, the image of its cocore under the
//!   monodromy, read as a dual component through the balls with the twisted
//!   framing.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heegaard::{HeegaardDiagram, HeegaardError};
use crate::monodromy::{CocoreImage, MonodromyError, Twist, TwistWord};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentRole {
    /// An attaching curve of the page.
    Page,
    /// A meridian or monodromy image added when closing up the half open book.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramedComponent {
    pub name: String,
    pub word: Word,
    pub framing: i64,
    pub role: ComponentRole,
}

/// How a diagram was produced. Not part of diagram equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub page: Option<String>,
    pub monodromy: Option<String>,
}

#[derive(Debug, Error)]
pub enum KirbyError {
    #[error(transparent)]
    Page(#[from] HeegaardError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error("monodromy acts on H_{{{mono_g},{mono_n}}} but the page has g={page_g}, n={page_n}")]
    ContextMismatch {
        mono_g: usize,
        mono_n: usize,
        page_g: usize,
        page_n: usize,
    },
    #[error("twist on 2-handle {two_handle}, whose attaching curve is not an eventless unknot; twists act on punctures only, supply a cocore image table instead")]
    TwistOffPuncture { two_handle: usize },
    #[error("cocore image table has {images} entries but the page has {curves} 2-handles")]
    ImageCountMismatch { images: usize, curves: usize },
    #[error("cocore image of 2-handle {two_handle} passes through ball {ball} but the page has {balls} 1-handles")]
    ImageBallOutOfRange {
        two_handle: usize,
        ball: usize,
        balls: usize,
    },
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("invalid .kd data: {0}")]
    Json(#[from] serde_json::Error),
}

/// The algebraic shadow of a Kirby diagram.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "KdRecord", into = "KdRecord")]
pub struct KirbyDiagram {
    balls: usize,
    components: Vec<FramedComponent>,
    linking: Vec<Vec<i64>>,
    three_handles: usize,
    four_handles: usize,
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KdRecord {
    balls: usize,
    components: Vec<FramedComponent>,
    linking: Vec<Vec<i64>>,
    three_handles: usize,
    four_handles: usize,
    provenance: Option<Provenance>,
}

impl TryFrom<KdRecord> for KirbyDiagram {
    type Error = KirbyError;

    fn try_from(r: KdRecord) -> Result<Self, Self::Error> {
        let kd = KirbyDiagram::from_parts(
            r.balls,
            r.components,
            r.linking,
            r.three_handles,
            r.four_handles,
        )?;
        Ok(kd.with_provenance(r.provenance))
    }
}

impl From<KirbyDiagram> for KdRecord {
    fn from(kd: KirbyDiagram) -> Self {
        KdRecord {
            balls: kd.balls,
            components: kd.components,
            linking: kd.linking,
            three_handles: kd.three_handles,
            four_handles: kd.four_handles,
            provenance: kd.provenance,
        }
    }
}

impl PartialEq for KirbyDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.balls == other.balls
            && self.components == other.components
            && self.linking == other.linking
            && self.three_handles == other.three_handles
            && self.four_handles == other.four_handles
    }
}

impl Eq for KirbyDiagram {}

impl KirbyDiagram {
    /// The empty diagram. With `closed` set it is the blank diagram of `S^4`.
    pub fn empty(closed: bool) -> Self {
        KirbyDiagram {
            balls: 0,
            components: Vec::new(),
            linking: Vec::new(),
            three_handles: 0,
            four_handles: usize::from(closed),
            provenance: None,
        }
    }

    /// Checked constructor: `linking` must be square, symmetric, and carry
    /// the framings on its diagonal.
    pub fn from_parts(
        balls: usize,
        components: Vec<FramedComponent>,
        linking: Vec<Vec<i64>>,
        three_handles: usize,
        four_handles: usize,
    ) -> Result<Self, KirbyError> {
        let kd = KirbyDiagram {
            balls,
            components,
            linking,
            three_handles,
            four_handles,
            provenance: None,
        };
        kd.check()?;
        Ok(kd)
    }

    fn check(&self) -> Result<(), KirbyError> {
        let m = self.components.len();
        if self.four_handles > 1 {
            return Err(KirbyError::Malformed(format!(
                "four_handles must be 0 or 1, got {}",
                self.four_handles
            )));
        }
        if self.linking.len() != m || self.linking.iter().any(|r| r.len() != m) {
            return Err(KirbyError::Malformed(format!(
                "linking matrix must be {m}x{m}"
            )));
        }
        for i in 0..m {
            if self.linking[i][i] != self.components[i].framing {
                return Err(KirbyError::Malformed(format!(
                    "linking diagonal {} differs from framing {} of component {}",
                    self.linking[i][i],
                    self.components[i].framing,
                    i + 1
                )));
            }
            for j in 0..i {
                if self.linking[i][j] != self.linking[j][i] {
                    return Err(KirbyError::Malformed(format!(
                        "linking matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
            for l in self.components[i].word.letters() {
                if l.generator == 0 || l.generator > self.balls {
                    return Err(KirbyError::Malformed(format!(
                        "component {} passes through ball {} but there are {} balls",
                        i + 1,
                        l.generator,
                        self.balls
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_provenance(mut self, provenance: Option<Provenance>) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn balls(&self) -> usize {
        self.balls
    }

    pub fn components(&self) -> &[FramedComponent] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn linking(&self) -> &[Vec<i64>] {
        &self.linking
    }

    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        self.linking[i][j]
    }

    pub fn three_handles(&self) -> usize {
        self.three_handles
    }

    pub fn four_handles(&self) -> usize {
        self.four_handles
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Closed diagrams carry a 4-handle; half open books do not.
    pub fn is_closed(&self) -> bool {
        self.four_handles == 1
    }

    /// Alternating handle count `1 - balls + components - three + four`.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.balls as i64 + self.components.len() as i64 - self.three_handles as i64
            + self.four_handles as i64
    }

    /// Pretty JSON followed by a newline. Parsing it back yields the same bytes.
    pub fn to_kd_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram serializes");
        s.push('\n');
        s
    }

    pub fn from_kd_str(text: &str) -> Result<Self, KirbyError> {
        Ok(serde_json::from_str(text)?)
    }

    pub(crate) fn set_framing(&mut self, i: usize, framing: i64) {
        self.components[i].framing = framing;
        self.linking[i][i] = framing;
    }

    pub(crate) fn set_linking(&mut self, i: usize, j: usize, value: i64) {
        self.linking[i][j] = value;
        self.linking[j][i] = value;
    }

    pub(crate) fn set_word(&mut self, i: usize, word: Word) {
        self.components[i].word = word;
    }

    pub(crate) fn remove_component(&mut self, i: usize) {
        self.components.remove(i);
        self.linking.remove(i);
        for row in &mut self.linking {
            row.remove(i);
        }
    }

    /// Deletes ball `ball` (1-based); occurrences in words are replaced by
    /// `replacement` and higher balls are renumbered.
    pub(crate) fn remove_ball(&mut self, ball: usize, replacement: &Word) {
        for c in &mut self.components {
            c.word = c.word.substitute_and_drop(ball, replacement);
        }
        self.balls -= 1;
    }

    pub(crate) fn remove_three_handle(&mut self) {
        self.three_handles -= 1;
    }
}

impl fmt::Display for KirbyDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "balls: {}  components: {}  3-handles: {}  4-handles: {}  ({})",
            self.balls,
            self.components.len(),
            self.three_handles,
            self.four_handles,
            if self.is_closed() { "closed" } else { "open" }
        )?;
        for (i, c) in self.components.iter().enumerate() {
            let role = match c.role {
                ComponentRole::Page => "page",
                ComponentRole::Dual => "dual",
            };
            writeln!(
                f,
                "  {:>2}. {} [{}] framing {} word {}",
                i + 1,
                c.name,
                role,
                c.framing,
                c.word
            )?;
        }
        if !self.components.is_empty() {
            writeln!(f, "linking:")?;
            for row in &self.linking {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                writeln!(f, "  [{}]", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

/// The monodromy handed to [`open_book`].
#[derive(Clone, Debug)]
pub enum Monodromy {
    /// A twist word on a page with matching `(g, n)`. Every twisted 2-handle
    /// must be attached along an eventless curve, as on a punctured
    /// handlebody.
    Word(TwistWord),
    /// Explicit images of every 2-handle cocore.
    Images(CocoreImage),
}

impl From<TwistWord> for Monodromy {
    fn from(w: TwistWord) -> Self {
        Monodromy::Word(w)
    }
}

impl From<CocoreImage> for Monodromy {
    fn from(c: CocoreImage) -> Self {
        Monodromy::Images(c)
    }
}

fn dual_name(page_name: &str) -> String {
    format!("{page_name}*")
}

fn shadow_of_page(hd: &HeegaardDiagram) -> KirbyDiagram {
    let n = hd.curve_count();
    let components = hd
        .curves()
        .iter()
        .map(|c| FramedComponent {
            name: c.name().to_string(),
            word: c.pass_word(),
            framing: c.writhe(),
            role: ComponentRole::Page,
        })
        .collect::<Vec<_>>();
    let mut linking = vec![vec![0; n]; n];
    for i in 0..n {
        linking[i][i] = components[i].framing;
        for j in 0..i {
            let lk = hd.linking_number(i, j);
            linking[i][j] = lk;
            linking[j][i] = lk;
        }
    }
    KirbyDiagram {
        balls: hd.genus(),
        components,
        linking,
        three_handles: 0,
        four_handles: 0,
        provenance: None,
    }
}

/// Diagram of the half open book with page `hd`: a ball pair per 1-handle and
/// each attaching curve with its blackboard framing (the curve's writhe).
pub fn half_open_book(hd: &HeegaardDiagram) -> Result<KirbyDiagram, KirbyError> {
    hd.ensure_valid()?;
    Ok(shadow_of_page(hd).with_provenance(Some(Provenance {
        construction: "hob".into(),
        page: Some(hd.to_hd_string()),
        monodromy: None,
    })))
}

fn close_up(hd: &HeegaardDiagram, images: &CocoreImage) -> KirbyDiagram {
    let mut kd = shadow_of_page(hd);
    let n = hd.curve_count();
    for (j, arc) in images.arcs.iter().enumerate() {
        kd.components.push(FramedComponent {
            name: dual_name(hd.curves()[j].name()),
            word: arc.pass_word.clone(),
            framing: arc.framing_offset,
            role: ComponentRole::Dual,
        });
    }
    let mut linking = vec![vec![0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            linking[i][j] = kd.linking[i][j];
        }
        linking[i][n + i] = 1;
        linking[n + i][i] = 1;
        linking[n + i][n + i] = images.arcs[i].framing_offset;
    }
    kd.linking = linking;
    kd.three_handles = hd.genus();
    kd.four_handles = 1;
    kd
}

/// Diagram of the open book with page `hd` and trivial monodromy: the half
/// open book plus a 0-framed meridian for every attaching curve.
pub fn double(hd: &HeegaardDiagram) -> Result<KirbyDiagram, KirbyError> {
    hd.ensure_valid()?;
    let kd = close_up(hd, &CocoreImage::identity(hd.curve_count()));
    Ok(kd.with_provenance(Some(Provenance {
        construction: "double".into(),
        page: Some(hd.to_hd_string()),
        monodromy: None,
    })))
}

/// Diagram of the open book with page `hd` and the given monodromy.
///
/// The meridian of the `j`-th curve is replaced by the image of the cocore:
/// a dual component whose word is the image's passes through the balls and
/// whose framing is the image's framing offset. With the identity this is
/// exactly [`double`].
pub fn open_book(hd: &HeegaardDiagram, mono: &Monodromy) -> Result<KirbyDiagram, KirbyError> {
    hd.ensure_valid()?;
    let n = hd.curve_count();
    let (images, label) = match mono {
        Monodromy::Word(w) => {
            if (w.genus(), w.two_handles()) != (hd.genus(), n) {
                return Err(KirbyError::ContextMismatch {
                    mono_g: w.genus(),
                    mono_n: w.two_handles(),
                    page_g: hd.genus(),
                    page_n: n,
                });
            }
            if let Some(t) = w
                .factors()
                .iter()
                .find(|t| !hd.curves()[t.two_handle() - 1].events().is_empty())
            {
                return Err(KirbyError::TwistOffPuncture {
                    two_handle: t.two_handle(),
                });
            }
            (w.cocore_images(), w.to_string())
        }
        Monodromy::Images(images) => {
            if images.len() != n {
                return Err(KirbyError::ImageCountMismatch {
                    images: images.len(),
                    curves: n,
                });
            }
            for (j, arc) in images.arcs.iter().enumerate() {
                if let Some(l) = arc
                    .pass_word
                    .letters()
                    .iter()
                    .find(|l| l.generator == 0 || l.generator > hd.genus())
                {
                    return Err(KirbyError::ImageBallOutOfRange {
                        two_handle: j + 1,
                        ball: l.generator,
                        balls: hd.genus(),
                    });
                }
            }
            (images.clone(), "<image table>".to_string())
        }
    };
    let kd = close_up(hd, &images);
    Ok(kd.with_provenance(Some(Provenance {
        construction: "ob".into(),
        page: Some(hd.to_hd_string()),
        monodromy: Some(label),
    })))
}

/// Connected sum of the page with a punctured solid torus, composing the
/// monodromy with a torus twist of the new puncture around the new 1-handle.
/// The open book changes by a connected sum with `S^4`.
pub fn stabilize(
    hd: &HeegaardDiagram,
    mono: &TwistWord,
) -> Result<(HeegaardDiagram, TwistWord), KirbyError> {
    let (g, n) = (hd.genus(), hd.curve_count());
    if (mono.genus(), mono.two_handles()) != (g, n) {
        return Err(KirbyError::ContextMismatch {
            mono_g: mono.genus(),
            mono_n: mono.two_handles(),
            page_g: g,
            page_n: n,
        });
    }
    let stabilized = hd.with_stabilization();
    let mut word = mono.extended_to(g + 1, n + 1);
    word.push(Twist::torus(n + 1, g + 1))?;
    Ok((stabilized, word))
}

//! Monodromies on punctured handlebodies as words in torus and sphere twists.
//!
//! On `H_{g,n}` the torus twist `τ^j_l` drags the `j`-th puncture once around
//! the `l`-th 1-handle, so the cocore of the `j`-th 2-handle is sent to an arc
//! through that handle. The sphere twist `σ^j` fixes the cocore and shifts its
//! framing by one. A [`TwistWord`] lists factors in application order: the
//! leftmost factor acts first.
//!
//! Text grammar, whitespace separated:
//!
//! ```text
//! t(j,l)        torus twist
//! t(j,l)^k      k copies; k < 0 gives |k| inverse torus twists
//! s(j)          sphere twist
//! s(j)^k        sphere twist with integer exponent k
//! ```

use std::fmt;

use thiserror::Error;

use crate::heegaard::{check_lens_parameters, HeegaardError};
use crate::word::{Letter, Sign, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `τ^{two_handle}_{one_handle}`, or its inverse when `sign` is negative.
    Torus {
        two_handle: usize,
        one_handle: usize,
        sign: Sign,
    },
    /// `(σ^{two_handle})^{exponent}`.
    Sphere { two_handle: usize, exponent: i64 },
}

impl Twist {
    pub fn torus(two_handle: usize, one_handle: usize) -> Twist {
        Twist::Torus {
            two_handle,
            one_handle,
            sign: Sign::Plus,
        }
    }

    pub fn sphere(two_handle: usize, exponent: i64) -> Twist {
        Twist::Sphere {
            two_handle,
            exponent,
        }
    }

    pub fn two_handle(&self) -> usize {
        match *self {
            Twist::Torus { two_handle, .. } | Twist::Sphere { two_handle, .. } => two_handle,
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Twist::Torus {
                two_handle,
                one_handle,
                sign: Sign::Plus,
            } => write!(f, "t({two_handle},{one_handle})"),
            Twist::Torus {
                two_handle,
                one_handle,
                sign: Sign::Minus,
            } => write!(f, "t({two_handle},{one_handle})^-1"),
            Twist::Sphere {
                two_handle,
                exponent: 1,
            } => write!(f, "s({two_handle})"),
            Twist::Sphere {
                two_handle,
                exponent,
            } => write!(f, "s({two_handle})^{exponent}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("2-handle index out of range: {index} (page has {count} 2-handles)")]
    TwoHandleOutOfRange { index: usize, count: usize },
    #[error("1-handle index out of range: {index} (page has {count} 1-handles)")]
    OneHandleOutOfRange { index: usize, count: usize },
    #[error("malformed twist word at byte {at}: {message}")]
    Malformed { at: usize, message: String },
    #[error("twist words act on different pages: H_{{{0},{1}}} vs H_{{{2},{3}}}")]
    ContextMismatch(usize, usize, usize, usize),
    #[error("{0}")]
    Lens(String),
}

impl From<HeegaardError> for MonodromyError {
    fn from(e: HeegaardError) -> Self {
        MonodromyError::Lens(e.to_string())
    }
}

/// A composition of twists on `H_{genus, two_handles}`. Empty means identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistWord {
    genus: usize,
    two_handles: usize,
    factors: Vec<Twist>,
}

impl TwistWord {
    pub fn identity(genus: usize, two_handles: usize) -> Self {
        TwistWord {
            genus,
            two_handles,
            factors: Vec::new(),
        }
    }

    pub fn new(
        genus: usize,
        two_handles: usize,
        factors: Vec<Twist>,
    ) -> Result<Self, MonodromyError> {
        let w = TwistWord {
            genus,
            two_handles,
            factors,
        };
        for t in &w.factors {
            w.check_factor(t)?;
        }
        Ok(w)
    }

    fn check_factor(&self, t: &Twist) -> Result<(), MonodromyError> {
        let j = t.two_handle();
        if j == 0 || j > self.two_handles {
            return Err(MonodromyError::TwoHandleOutOfRange {
                index: j,
                count: self.two_handles,
            });
        }
        if let Twist::Torus { one_handle, .. } = *t {
            if one_handle == 0 || one_handle > self.genus {
                return Err(MonodromyError::OneHandleOutOfRange {
                    index: one_handle,
                    count: self.genus,
                });
            }
        }
        Ok(())
    }

    /// `p` torus twists followed by `σ^q` on `H_{1,1}`.
    pub fn spun_lens(p: u64, q: u64) -> Result<Self, MonodromyError> {
        check_lens_parameters(p, q)?;
        let mut factors = vec![Twist::torus(1, 1); p as usize];
        factors.push(Twist::sphere(1, q as i64));
        Ok(TwistWord {
            genus: 1,
            two_handles: 1,
            factors,
        })
    }

    pub fn parse(text: &str, genus: usize, two_handles: usize) -> Result<Self, MonodromyError> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut w = TwistWord::identity(genus, two_handles);
        loop {
            parser.skip_ws();
            if parser.at_end() {
                break;
            }
            let start = parser.pos;
            let kind = parser.bump();
            let args = parser.arguments()?;
            let power = parser.power()?;
            let twist = match (kind, args.as_slice()) {
                (Some(b't'), &[j, l]) => Twist::torus(j, l),
                (Some(b's'), &[j]) => Twist::sphere(j, power),
                _ => {
                    return Err(MonodromyError::Malformed {
                        at: start,
                        message: "expected `t(j,l)` or `s(j)`".into(),
                    })
                }
            };
            w.check_factor(&twist)?;
            if !parser.at_end() && !parser.peek().is_some_and(|c| c.is_ascii_whitespace()) {
                return Err(MonodromyError::Malformed {
                    at: parser.pos,
                    message: "twists must be separated by whitespace".into(),
                });
            }
            match twist {
                Twist::Torus {
                    two_handle,
                    one_handle,
                    ..
                } => {
                    let sign = if power < 0 { Sign::Minus } else { Sign::Plus };
                    for _ in 0..power.unsigned_abs() {
                        w.factors.push(Twist::Torus {
                            two_handle,
                            one_handle,
                            sign,
                        });
                    }
                }
                sphere => w.factors.push(sphere),
            }
        }
        Ok(w)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn two_handles(&self) -> usize {
        self.two_handles
    }

    pub fn factors(&self) -> &[Twist] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn push(&mut self, twist: Twist) -> Result<(), MonodromyError> {
        self.check_factor(&twist)?;
        self.factors.push(twist);
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &TwistWord) -> Result<TwistWord, MonodromyError> {
        if (self.genus, self.two_handles) != (other.genus, other.two_handles) {
            return Err(MonodromyError::ContextMismatch(
                self.genus,
                self.two_handles,
                other.genus,
                other.two_handles,
            ));
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(TwistWord {
            genus: self.genus,
            two_handles: self.two_handles,
            factors,
        })
    }

    /// The same factors viewed on a larger punctured handlebody.
    pub fn extended_to(&self, genus: usize, two_handles: usize) -> TwistWord {
        assert!(genus >= self.genus && two_handles >= self.two_handles);
        TwistWord {
            genus,
            two_handles,
            factors: self.factors.clone(),
        }
    }

    pub fn cocore_images(&self) -> CocoreImage {
        let mut image = CocoreImage::identity(self.two_handles);
        for t in &self.factors {
            match *t {
                Twist::Torus {
                    two_handle,
                    one_handle,
                    sign,
                } => image.arcs[two_handle - 1]
                    .pass_word
                    .push(Letter::new(one_handle, sign)),
                Twist::Sphere {
                    two_handle,
                    exponent,
                } => image.arcs[two_handle - 1].framing_offset += exponent,
            }
        }
        image
    }

    /// Merges adjacent sphere twists on the same 2-handle and reduces their
    /// exponents mod 2, using that a sphere twist has order two up to isotopy.
    /// Torus factors are kept verbatim.
    pub fn isotopy_normalize(&self) -> TwistWord {
        let mut out: Vec<Twist> = Vec::with_capacity(self.factors.len());
        for &t in &self.factors {
            match t {
                Twist::Sphere {
                    two_handle,
                    exponent,
                } => {
                    let mut e = exponent.rem_euclid(2);
                    if let Some(&Twist::Sphere {
                        two_handle: top,
                        exponent: prev,
                    }) = out.last()
                    {
                        if top == two_handle {
                            out.pop();
                            e = (e + prev).rem_euclid(2);
                        }
                    }
                    if e != 0 {
                        out.push(Twist::sphere(two_handle, e));
                    }
                }
                torus => out.push(torus),
            }
        }
        TwistWord {
            genus: self.genus,
            two_handles: self.two_handles,
            factors: out,
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn malformed(&self, message: &str) -> MonodromyError {
        MonodromyError::Malformed {
            at: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), MonodromyError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.malformed(&format!("expected `{}`", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64, MonodromyError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| MonodromyError::Malformed {
                at: start,
                message: "expected an integer".into(),
            })
    }

    fn index(&mut self) -> Result<usize, MonodromyError> {
        let start = self.pos;
        let v = self.integer()?;
        usize::try_from(v).map_err(|_| MonodromyError::Malformed {
            at: start,
            message: "handle indices are positive".into(),
        })
    }

    fn arguments(&mut self) -> Result<Vec<usize>, MonodromyError> {
        self.expect(b'(')?;
        let mut args = vec![self.index()?];
        loop {
            self.skip_ws();
            match self.bump() {
                Some(b',') => args.push(self.index()?),
                Some(b')') => return Ok(args),
                _ => {
                    self.pos -= 1;
                    return Err(self.malformed("expected `,` or `)`"));
                }
            }
        }
    }

    fn power(&mut self) -> Result<i64, MonodromyError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.integer()
        } else {
            Ok(1)
        }
    }
}

/// Image of one 2-handle cocore under a monodromy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CocoreArc {
    /// Passes of the image arc through the 1-handles, in order.
    pub pass_word: Word,
    /// Twisting of the image's framing relative to the blackboard framing.
    pub framing_offset: i64,
}

/// Cocore images for every 2-handle of a page, indexed by 2-handle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CocoreImage {
    pub arcs: Vec<CocoreArc>,
}

impl CocoreImage {
    pub fn identity(two_handles: usize) -> Self {
        CocoreImage {
            arcs: vec![CocoreArc::default(); two_handles],
        }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.arcs
            .iter()
            .all(|a| a.pass_word.is_empty() && a.framing_offset == 0)
    }

    /// Images of `self` followed by `other`: pass words concatenate, offsets add.
    pub fn then(&self, other: &CocoreImage) -> CocoreImage {
        assert_eq!(self.arcs.len(), other.arcs.len());
        CocoreImage {
            arcs: self
                .arcs
                .iter()
                .zip(&other.arcs)
                .map(|(a, b)| CocoreArc {
                    pass_word: a.pass_word.concat(&b.pass_word),
                    framing_offset: a.framing_offset + b.framing_offset,
                })
                .collect(),
        }
    }
}

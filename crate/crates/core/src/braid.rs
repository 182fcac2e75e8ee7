//! Artin braids, their permutations, and the normalization of braids whose
//! closure is a knot.
//!
//! A permutation records where each strand ends up: `images[i-1]` is the final
//! position of the strand starting at position `i`. Products are read left to
//! right, so the first generator of a word acts first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Letter, Sign};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("generator s{generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: usize, strands: usize },
    #[error("invalid braid token `{0}` (expected s<k> or s<k>^-1)")]
    Token(String),
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("closure of {0} is not a knot")]
    NotAKnot(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Braid {
    strands: usize,
    word: Vec<Letter>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<Letter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(l) = word
            .iter()
            .find(|l| l.generator == 0 || l.generator >= strands)
        {
            return Err(BraidError::GeneratorOutOfRange {
                generator: l.generator,
                strands,
            });
        }
        Ok(Braid { strands, word })
    }

    /// Parses `s<k>` / `s<k>^-1` tokens. Without an explicit strand count the
    /// braid has one more strand than its largest generator.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Self, BraidError> {
        let word = text
            .split_whitespace()
            .map(parse_generator)
            .collect::<Result<Vec<_>, _>>()?;
        let inferred = word.iter().map(|l| l.generator + 1).max().unwrap_or(1);
        Braid::new(strands.unwrap_or(inferred), word)
    }

    /// `(s_1 s_2 ⋯ s_{p-1})^q`, whose closure is the `(p, q)` torus link.
    pub fn torus_type(p: usize, q: usize) -> Result<Self, BraidError> {
        let word = (0..q)
            .flat_map(|_| (1..p).map(|k| Letter::new(k, Sign::Plus)))
            .collect();
        Braid::new(p, word)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn concat(&self, other: &Braid) -> Braid {
        let strands = self.strands.max(other.strands);
        let word = self.word.iter().chain(&other.word).copied().collect();
        Braid { strands, word }
    }
}

fn parse_generator(tok: &str) -> Result<Letter, BraidError> {
    let bad = || BraidError::Token(tok.to_string());
    let body = tok.strip_prefix('s').ok_or_else(bad)?;
    let (index, sign) = match body.split_once('^') {
        Some((k, "-1")) => (k, Sign::Minus),
        Some((k, "1")) => (k, Sign::Plus),
        Some(_) => return Err(bad()),
        None => (body, Sign::Plus),
    };
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let generator = index.parse().map_err(|_| bad())?;
    Ok(Letter::new(generator, sign))
}

impl FromStr for Braid {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Braid::parse(s, None)
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .word
            .iter()
            .map(|l| match l.sign {
                Sign::Plus => format!("s{}", l.generator),
                Sign::Minus => format!("s{}^-1", l.generator),
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// `images` lists the images of `1..=n`; returns `None` unless it is a
    /// bijection of that set.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "permutations of different sizes");
        Permutation {
            images: self.images.iter().map(|&x| other.image(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Renames the letters `a` and `b` everywhere in the cycle notation, i.e.
    /// conjugates by the transposition `(a b)`.
    pub fn conjugated(&self, a: usize, b: usize) -> Permutation {
        let t = Permutation::transposition(self.size(), a, b);
        t.then(self).then(&t)
    }

    /// Disjoint cycles, each starting at its least element, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 1..=self.size() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x - 1] {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        self.cycles().len() + self.size() - moved
    }

    pub fn is_full_cycle(&self) -> bool {
        self.size() == 1
            || self
                .cycles()
                .first()
                .is_some_and(|c| c.len() == self.size())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let labels: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", labels.join(" "))?;
        }
        Ok(())
    }
}

pub fn braid_permutation(b: &Braid) -> Permutation {
    b.word
        .iter()
        .fold(Permutation::identity(b.strands), |p, l| {
            p.then(&Permutation::transposition(
                b.strands,
                l.generator,
                l.generator + 1,
            ))
        })
}

pub fn closure_is_knot(b: &Braid) -> bool {
    braid_permutation(b).is_full_cycle()
}

/// Moves relating two braids with knot closures on the same strands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidCertificate {
    /// Transpositions to conjugate by, in order.
    pub conjugations: Vec<(usize, usize)>,
    /// Whether crossing changes are still needed after the conjugations to
    /// turn one braid word into the other.
    pub crossing_changes: bool,
}

impl fmt::Display for BraidCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .conjugations
            .iter()
            .map(|(a, b)| format!("conjugate ({a} {b})"))
            .collect();
        if self.crossing_changes {
            parts.push("crossing changes".into());
        }
        if parts.is_empty() {
            write!(f, "identical")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

/// Shortest sequence of transposition conjugations carrying the full cycle
/// `from` to the full cycle `to`.
pub fn conjugating_transpositions(from: &Permutation, to: &Permutation) -> Vec<(usize, usize)> {
    let n = from.size();
    let orbit = |p: &Permutation| {
        let mut seq = vec![1];
        while seq.len() < n {
            seq.push(p.image(*seq.last().unwrap()));
        }
        seq
    };
    let source = orbit(from);
    let target = orbit(to);
    // the relabelings carrying one cycle to the other differ by a rotation
    (0..n)
        .map(|r| {
            let mut current = source.clone();
            let rotated: Vec<usize> = (0..n).map(|i| target[(i + r) % n]).collect();
            let mut swaps = Vec::new();
            for i in 0..n {
                let (a, b) = (current[i], rotated[i]);
                if a != b {
                    for x in current.iter_mut() {
                        if *x == a {
                            *x = b;
                        } else if *x == b {
                            *x = a;
                        }
                    }
                    swaps.push((a.min(b), a.max(b)));
                }
            }
            swaps
        })
        .min_by_key(Vec::len)
        .unwrap_or_default()
}

/// Decides whether two braids with knot closures give equivalent diagrams,
/// which holds exactly when they have the same number of strands.
pub fn braids_equivalent(
    b1: &Braid,
    b2: &Braid,
) -> Result<(bool, Option<BraidCertificate>), BraidError> {
    for b in [b1, b2] {
        if !closure_is_knot(b) {
            return Err(BraidError::NotAKnot(b.to_string()));
        }
    }
    if b1.strands != b2.strands {
        return Ok((false, None));
    }
    let conjugations = conjugating_transpositions(&braid_permutation(b1), &braid_permutation(b2));
    Ok((
        true,
        Some(BraidCertificate {
            conjugations,
            crossing_changes: b1.word != b2.word,
        }),
    ))
}

/// Normal form of a braid with knot closure: the standard braid
/// `s_1 ⋯ s_{p-1}` and the moves reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidCanon {
    pub braid: Braid,
    pub permutation: Permutation,
    pub canonical: Braid,
    pub certificate: BraidCertificate,
}

pub fn canonicalize(b: &Braid) -> Result<BraidCanon, BraidError> {
    let canonical = Braid::torus_type(b.strands, 1)?;
    let (_, cert) = braids_equivalent(b, &canonical)?;
    Ok(BraidCanon {
        braid: b.clone(),
        permutation: braid_permutation(b),
        canonical,
        certificate: cert.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(s: &str) -> Braid {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let b = braid("s1 s2^-1 s1^1");
        assert_eq!(b.strands(), 3);
        assert_eq!(b.to_string(), "s1 s2^-1 s1");
        assert_eq!(Braid::parse("", Some(4)).unwrap().to_string(), "1");
        assert!(matches!(
            Braid::parse("s3", Some(3)),
            Err(BraidError::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(
            "s0".parse::<Braid>(),
            Err(BraidError::GeneratorOutOfRange { .. })
        ));
        assert!(matches!("x1".parse::<Braid>(), Err(BraidError::Token(_))));
        assert!(matches!("s1^2".parse::<Braid>(), Err(BraidError::Token(_))));
        assert!(matches!("s".parse::<Braid>(), Err(BraidError::Token(_))));
    }

    #[test]
    fn permutation_tracks_strands() {
        let p = braid_permutation(&braid("s1 s2"));
        assert_eq!(p.images(), &[3, 1, 2]);
        assert_eq!(p.to_string(), "(1 3 2)");
        assert_eq!(
            braid_permutation(&Braid::parse("", Some(3)).unwrap()),
            Permutation::identity(3)
        );
        assert_eq!(
            braid_permutation(&braid("s1 s1^-1")),
            Permutation::identity(2)
        );
    }

    #[test]
    fn permutation_of_product() {
        let a = braid("s1 s3 s2^-1");
        let b = braid("s2 s1 s3 s3");
        assert_eq!(
            braid_permutation(&a.concat(&b)),
            braid_permutation(&a).then(&braid_permutation(&b))
        );
    }

    #[test]
    fn knot_closures() {
        assert!(closure_is_knot(&braid("s1 s2")));
        assert!(!closure_is_knot(&braid("s1 s1")));
        assert!(closure_is_knot(&Braid::parse("", Some(1)).unwrap()));
        assert!(!closure_is_knot(&braid("s1 s3")));
        for (p, q, knot) in [
            (5, 1, true),
            (5, 4, true),
            (4, 2, false),
            (6, 3, false),
            (7, 3, true),
        ] {
            assert_eq!(closure_is_knot(&Braid::torus_type(p, q).unwrap()), knot);
        }
    }

    #[test]
    fn conjugation_relabels_cycle() {
        let c = Permutation::from_images(vec![2, 3, 4, 1]).unwrap();
        assert_eq!(c.to_string(), "(1 2 3 4)");
        assert_eq!(c.conjugated(2, 4).to_string(), "(1 4 3 2)");
        assert_eq!(c.conjugated(1, 3).conjugated(1, 3), c);
        assert!(Permutation::from_images(vec![1, 1]).is_none());
    }

    #[test]
    fn equivalence_examples() {
        let (eq, cert) = braids_equivalent(&braid("s1 s2"), &braid("s2 s1")).unwrap();
        assert!(eq);
        let cert = cert.unwrap();
        assert!(cert.conjugations.len() <= 1);
        assert!(cert.crossing_changes);

        let (eq, cert) = braids_equivalent(&braid("s1 s2"), &braid("s1 s2 s3")).unwrap();
        assert!(!eq);
        assert!(cert.is_none());

        let b = braid("s1 s2^-1 s3");
        let (eq, cert) = braids_equivalent(&b, &b).unwrap();
        assert!(eq);
        assert_eq!(cert.unwrap(), BraidCertificate::default());

        assert!(matches!(
            braids_equivalent(&braid("s1 s1"), &braid("s1")),
            Err(BraidError::NotAKnot(_))
        ));
    }

    #[test]
    fn certificate_carries_cycles() {
        for q in 1..5 {
            let b1 = Braid::torus_type(5, 1).unwrap();
            let b2 = Braid::torus_type(5, q).unwrap();
            let (_, cert) = braids_equivalent(&b1, &b2).unwrap();
            let carried = cert
                .unwrap()
                .conjugations
                .iter()
                .fold(braid_permutation(&b1), |p, &(a, b)| p.conjugated(a, b));
            assert_eq!(carried, braid_permutation(&b2));
        }
    }

    #[test]
    fn canonical_form() {
        let canon = canonicalize(&braid("s2 s1")).unwrap();
        assert_eq!(canon.canonical.to_string(), "s1 s2");
        assert_eq!(canon.permutation.to_string(), "(1 2 3)");
        assert_eq!(canon.certificate.conjugations.len(), 1);
        assert!(canonicalize(&braid("s1 s1")).is_err());
    }
}

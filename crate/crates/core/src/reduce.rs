//! Reduction of open books with trivial monodromy to punctured-handlebody
//! pages, and the consequences for spun lens spaces.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::braid::{braids_equivalent, Braid, BraidCertificate, BraidError};
use crate::heegaard::{gcd, Event, HeegaardDiagram, HeegaardError};
use crate::invariants::{invariant_bundle, AbelianGroup, InvariantBundle, InvariantError};
use crate::kirby::{double, open_book, KirbyError};
use crate::monodromy::{MonodromyError, Twist, TwistWord};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Page(#[from] HeegaardError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Kirby(#[from] KirbyError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

fn as_text<T: fmt::Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// `Ob(page, id)` rewritten as `Ob(H_{genus, two_handles}, word)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub genus: usize,
    pub two_handles: usize,
    #[serde(serialize_with = "as_text")]
    pub word: TwistWord,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H_{{{},{}}}: {}",
            self.genus, self.two_handles, self.word
        )
    }
}

/// For each curve in order: a torus twist per pass through a 1-handle, in
/// reading order and with the sign of the pass, then a sphere twist by the
/// writhe to restore the framing.
pub fn reduce(hd: &HeegaardDiagram) -> Result<Reduction, ReduceError> {
    hd.ensure_valid()?;
    let (g, n) = (hd.genus(), hd.curve_count());
    let mut factors = Vec::new();
    for (j, curve) in hd.curves().iter().enumerate() {
        for e in curve.events() {
            if let Event::Pass { handle, sign } = *e {
                factors.push(Twist::Torus {
                    two_handle: j + 1,
                    one_handle: handle,
                    sign,
                });
            }
        }
        let w = curve.writhe();
        if w != 0 {
            factors.push(Twist::sphere(j + 1, w));
        }
    }
    Ok(Reduction {
        genus: g,
        two_handles: n,
        word: TwistWord::new(g, n, factors)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub reduction: Reduction,
    /// Bundle of the double of the given page.
    pub original: InvariantBundle,
    /// Bundle of the open book on the canonical page with the reduced word.
    pub reduced: InvariantBundle,
    pub verdict: bool,
}

pub fn verify_reduce(hd: &HeegaardDiagram) -> Result<ReduceReport, ReduceError> {
    let reduction = reduce(hd)?;
    let original = invariant_bundle(&double(hd)?)?;
    let canonical =
        HeegaardDiagram::canonical_punctured_handlebody(reduction.genus, reduction.two_handles);
    let reduced = invariant_bundle(&open_book(&canonical, &reduction.word.clone().into())?)?;
    let verdict = original == reduced;
    Ok(ReduceReport {
        reduction,
        original,
        reduced,
        verdict,
    })
}

/// Representative of `L(p, q)` with `0 ≤ q < p`, using `L(p,q) ≅ L(p,q+np)`.
pub fn rolfsen_normalize(p: u64, q: u64) -> Result<(u64, u64), HeegaardError> {
    if p == 0 {
        return Err(HeegaardError::NonPositive { p, q });
    }
    if gcd(p, q) != 1 {
        return Err(HeegaardError::NotCoprime { p, q });
    }
    Ok((p, q % p))
}

/// The `p`-braid presenting the 2-handle of spun `L(p, q)`.
pub fn lens_braid(p: u64, q: u64) -> Result<Braid, ReduceError> {
    let (p, q) = rolfsen_normalize(p, q)?;
    Ok(Braid::torus_type(p as usize, q as usize)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpunLensEvidence {
    pub equivalent: bool,
    pub first: InvariantBundle,
    pub second: InvariantBundle,
    /// Present when the two spun lens spaces are equivalent.
    pub certificate: Option<BraidCertificate>,
    /// First homology of each side when they differ.
    pub distinguishing: Option<(AbelianGroup, AbelianGroup)>,
}

/// Spun `L(p, q)` and spun `L(p', q')` agree exactly when `p = p'`.
pub fn spun_lens_equivalent(
    p: u64,
    q: u64,
    p2: u64,
    q2: u64,
) -> Result<SpunLensEvidence, ReduceError> {
    let bundle = |p, q| -> Result<InvariantBundle, ReduceError> {
        Ok(invariant_bundle(&double(&HeegaardDiagram::lens(p, q)?)?)?)
    };
    let first = bundle(p, q)?;
    let second = bundle(p2, q2)?;
    let (equivalent, certificate) = braids_equivalent(&lens_braid(p, q)?, &lens_braid(p2, q2)?)?;
    let distinguishing = (!equivalent).then(|| {
        (
            first.homology.groups[1].clone(),
            second.homology.groups[1].clone(),
        )
    });
    Ok(SpunLensEvidence {
        equivalent,
        first,
        second,
        certificate,
        distinguishing,
    })
}

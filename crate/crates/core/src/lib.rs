//! Kirby diagrams of 4-dimensional open books.
//!
//! A page is given by a planar Heegaard diagram ([`HeegaardDiagram`]), a
//! monodromy by a word in torus and sphere twists ([`TwistWord`]) or by the
//! images of the 2-handle cocores. The constructions in [`kirby`] produce the
//! algebraic shadow of a Kirby diagram ([`KirbyDiagram`]): balls, framed
//! components with their words through the balls, the linking matrix and the
//! numbers of 3- and 4-handles. Everything else works on that shadow:
//!
//! * [`invariants`]: `π_1` presentation, homology, intersection form.
//! * [`moves`]: handle slides and cancellations.
//! * [`braid`]: braid permutations and the normalization of braids with knot
//!   closures.
//! * [`reduce`]: rewriting `Ob(M, id)` on a punctured handlebody.
//!
//! ```
//! use openbook::{double, invariants::homology, HeegaardDiagram};
//!
//! let spun = double(&HeegaardDiagram::lens(5, 2)?)?;
//! assert_eq!(homology(&spun)?.groups[1].to_string(), "Z/5");
//! # Ok::<(), openbook::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod braid;
pub mod heegaard;
pub mod invariants;
pub mod kirby;
pub mod matrix;
pub mod monodromy;
pub mod moves;
pub mod reduce;
pub mod word;

pub use braid::{Braid, BraidError, Permutation};
pub use heegaard::{AttachingCurve, Event, HeegaardDiagram, HeegaardError};
pub use invariants::{invariant_bundle, InvariantBundle, InvariantError};
pub use kirby::{
    double, half_open_book, open_book, stabilize, ComponentRole, FramedComponent, KirbyDiagram,
    KirbyError, Monodromy,
};
pub use monodromy::{CocoreImage, MonodromyError, Twist, TwistWord};
pub use moves::{Derivation, Move, MoveError};
pub use reduce::{reduce, verify_reduce, ReduceError};
pub use word::{Letter, Sign, Word};

/// Any error raised by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Heegaard(#[from] HeegaardError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Kirby(#[from] KirbyError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

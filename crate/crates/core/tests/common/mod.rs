//! Seeded generators shared by the integration tests and the acceptance run.

#![allow(dead_code)]

pub mod oracle;

use openbook::heegaard::CrossingRole;
use openbook::matrix::IntMatrix;
use openbook::{
    double, open_book, AttachingCurve, Braid, Event, HeegaardDiagram, KirbyDiagram, Letter, Sign,
    Twist, TwistWord,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sign(rng: &mut TestRng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A valid diagram with `genus` 1-handles and `curves` attaching curves, each
/// with up to `max_events` passes and kinks, and an even number of crossings
/// between some pairs of curves.
pub fn heegaard(
    rng: &mut TestRng,
    genus: usize,
    curves: usize,
    max_events: usize,
) -> HeegaardDiagram {
    let names: Vec<String> = (0..curves).map(|i| format!("c{}", i + 1)).collect();
    let mut events: Vec<Vec<Event>> = vec![Vec::new(); curves];
    for evs in events.iter_mut() {
        for _ in 0..rng.gen_range(0..=max_events) {
            if genus > 0 && rng.gen_bool(0.6) {
                evs.push(Event::Pass {
                    handle: rng.gen_range(1..=genus),
                    sign: sign(rng),
                });
            } else {
                evs.push(Event::Kink { sign: sign(rng) });
            }
        }
    }
    let mut id = 0;
    for a in 0..curves {
        for b in a + 1..curves {
            let pairs = rng.gen_range(0..=2) * 2;
            for _ in 0..pairs {
                id += 1;
                let s = sign(rng);
                let (ra, rb) = if rng.gen() {
                    (CrossingRole::Over, CrossingRole::Under)
                } else {
                    (CrossingRole::Under, CrossingRole::Over)
                };
                let at_a = rng.gen_range(0..=events[a].len());
                events[a].insert(
                    at_a,
                    Event::Cross {
                        other: names[b].clone(),
                        role: ra,
                        sign: s,
                        id,
                    },
                );
                let at_b = rng.gen_range(0..=events[b].len());
                events[b].insert(
                    at_b,
                    Event::Cross {
                        other: names[a].clone(),
                        role: rb,
                        sign: s,
                        id,
                    },
                );
            }
        }
    }
    let curves = names
        .into_iter()
        .zip(events)
        .map(|(n, e)| AttachingCurve::new(n, e))
        .collect();
    HeegaardDiagram::try_new(genus, curves).expect("generator builds valid diagrams")
}

pub fn twist_word(
    rng: &mut TestRng,
    genus: usize,
    two_handles: usize,
    max_len: usize,
) -> TwistWord {
    let mut factors = Vec::new();
    if two_handles > 0 {
        for _ in 0..rng.gen_range(0..=max_len) {
            let j = rng.gen_range(1..=two_handles);
            if genus > 0 && rng.gen_bool(0.6) {
                factors.push(Twist::Torus {
                    two_handle: j,
                    one_handle: rng.gen_range(1..=genus),
                    sign: sign(rng),
                });
            } else {
                factors.push(Twist::sphere(j, rng.gen_range(-3..=3)));
            }
        }
    }
    TwistWord::new(genus, two_handles, factors).unwrap()
}

/// A twist word on `hd` whose factors only act on eventless curves.
pub fn puncture_word(rng: &mut TestRng, hd: &HeegaardDiagram, max_len: usize) -> TwistWord {
    let (g, n) = (hd.genus(), hd.curve_count());
    let punctures: Vec<usize> = (1..=n)
        .filter(|&j| hd.curves()[j - 1].events().is_empty())
        .collect();
    let mut factors = Vec::new();
    if !punctures.is_empty() {
        for _ in 0..rng.gen_range(0..=max_len) {
            let j = *punctures.choose(rng).unwrap();
            if g > 0 && rng.gen_bool(0.5) {
                factors.push(Twist::Torus {
                    two_handle: j,
                    one_handle: rng.gen_range(1..=g),
                    sign: sign(rng),
                });
            } else {
                factors.push(Twist::sphere(j, rng.gen_range(-3..=3)));
            }
        }
    }
    TwistWord::new(g, n, factors).unwrap()
}

/// A closed diagram from one of the constructions: the double of a random
/// page, an open book on a canonical page with a random word, or an open
/// book on a random page with some eventless curves and twists on those.
pub fn closed_diagram(rng: &mut TestRng, max_g: usize, max_n: usize) -> KirbyDiagram {
    let g = rng.gen_range(0..=max_g);
    let n = rng.gen_range(0..=max_n);
    match rng.gen_range(0..3) {
        0 => double(&heegaard(rng, g, n, 5)).unwrap(),
        1 => {
            let hd = HeegaardDiagram::canonical_punctured_handlebody(g, n);
            let w = twist_word(rng, g, n, 8);
            open_book(&hd, &w.into()).unwrap()
        }
        _ => {
            let hd = heegaard(rng, g, n, 4);
            let w = puncture_word(rng, &hd, 4);
            open_book(&hd, &w.into()).unwrap()
        }
    }
}

pub fn matrix(rng: &mut TestRng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

/// A product of a few elementary integer operations; determinant ±1.
pub fn unimodular(rng: &mut TestRng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen() {
            m[(0, 0)] = -1;
        }
        return m;
    }
    for _ in 0..rng.gen_range(1..=6) {
        let mut e = IntMatrix::identity(n);
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        match rng.gen_range(0..3) {
            0 => e[(i, j)] = rng.gen_range(-2..=2),
            1 => {
                e[(i, i)] = 0;
                e[(j, j)] = 0;
                e[(i, j)] = 1;
                e[(j, i)] = 1;
            }
            _ => e[(i, i)] = -1,
        }
        m = &m * &e;
    }
    m
}

/// A random braid on `strands` strands whose closure is a knot, by rejection.
pub fn knot_braid(rng: &mut TestRng, strands: usize, max_len: usize) -> Braid {
    loop {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<Letter> = if strands < 2 {
            Vec::new()
        } else {
            (0..len)
                .map(|_| Letter::new(rng.gen_range(1..strands), sign(rng)))
                .collect()
        };
        let b = Braid::new(strands, word).unwrap();
        if openbook::braid::closure_is_knot(&b) {
            return b;
        }
    }
}

pub fn shuffled<T>(rng: &mut TestRng, mut v: Vec<T>) -> Vec<T> {
    v.shuffle(rng);
    v
}

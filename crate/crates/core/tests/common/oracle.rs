//! Independent reference computations and the checks built on them.
//!
//! Each check returns `Err` with a description of the first disagreement.

#![allow(clippy::needless_range_loop)]

use std::collections::{HashSet, VecDeque};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::Ratio;
use openbook::braid::{braid_permutation, braids_equivalent, Permutation};
use openbook::invariants::{homology, intersection_form, invariant_bundle};
use openbook::matrix::{smith_normal_form, IntMatrix};
use openbook::moves::slide;
use openbook::{Braid, KirbyDiagram};
use rand::Rng;

use super::{sign, unimodular, TestRng};

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by Gaussian elimination over the rationals.
pub fn rational_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut a: Vec<Vec<Ratio<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Ratio::from_integer(v as i128)).collect())
        .collect();
    let mut det = Ratio::from_integer(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != Ratio::from_integer(0)) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k / d_{k-1}` where `d_k`
/// is the gcd of all `k × k` minors.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<i64> {
    let rows = a.to_rows();
    let mut divisors = vec![1i128];
    for k in 1..=a.rows().min(a.cols()) {
        let mut d = 0i128;
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let minor: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| rows[r][c]).collect())
                    .collect();
                d = gcd(d, rational_det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        divisors.push(d);
    }
    divisors.windows(2).map(|w| (w[1] / w[0]) as i64).collect()
}

type BigRows = Vec<Vec<BigInt>>;

fn big(m: &IntMatrix) -> BigRows {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

fn big_mul(a: &BigRows, b: &BigRows, inner: usize, cols: usize) -> BigRows {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Exact determinant over `Q` with arbitrary-precision entries.
fn big_det(rows: &BigRows) -> BigInt {
    let n = rows.len();
    let zero = Ratio::from_integer(BigInt::from(0));
    let mut a: Vec<Vec<Ratio<BigInt>>> = rows
        .iter()
        .map(|r| r.iter().map(|v| Ratio::from_integer(v.clone())).collect())
        .collect();
    let mut det = Ratio::from_integer(BigInt::from(1));
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != zero) else {
            return BigInt::from(0);
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    det.to_integer()
}

pub fn check_snf(rng: &mut TestRng, a: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(a);
    let uav = big_mul(
        &big_mul(&big(&s.u), &big(a), a.rows(), a.cols()),
        &big(&s.v),
        a.cols(),
        a.cols(),
    );
    if uav != big(&s.d) {
        return Err(format!("U·A·V ≠ D for\n{a}"));
    }
    let unit = |m: &IntMatrix| {
        let d = big_det(&big(m));
        d == BigInt::from(1) || d == BigInt::from(-1)
    };
    if !unit(&s.u) || !unit(&s.v) {
        return Err(format!("non-unimodular factor for\n{a}"));
    }
    if !s.d.is_diagonal() || s.d.diagonal().iter().any(|&x| x < 0) {
        return Err(format!("D is not a nonnegative diagonal for\n{a}"));
    }
    let factors = s.invariant_factors();
    if factors.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(format!("divisibility chain broken: {factors:?}"));
    }
    let expected = invariant_factors_by_minors(a);
    if factors != expected {
        return Err(format!(
            "invariant factors {factors:?}, minors give {expected:?}"
        ));
    }
    let p = unimodular(rng, a.rows());
    let q = unimodular(rng, a.cols());
    let moved = smith_normal_form(&(&(&p * a) * &q)).invariant_factors();
    if moved != factors {
        return Err(format!(
            "invariant factors changed under unimodular factors: {moved:?} vs {factors:?}"
        ));
    }
    Ok(())
}

/// Signature as (#positive − #negative) eigenvalues in floating point.
pub fn signature_by_eigenvalues(m: &IntMatrix) -> i64 {
    let n = m.rows();
    let dm = DMatrix::from_fn(n, n, |i, j| m[(i, j)] as f64);
    let eig = dm.symmetric_eigen().eigenvalues;
    eig.iter().filter(|&&x| x > 1e-7).count() as i64
        - eig.iter().filter(|&&x| x < -1e-7).count() as i64
}

/// Applies a random sequence of up to `max_len` slides and compares all
/// invariants before and after.
pub fn check_slide_invariance(
    rng: &mut TestRng,
    kd: &KirbyDiagram,
    max_len: usize,
) -> Result<(), String> {
    let before = invariant_bundle(kd).map_err(|e| e.to_string())?;
    let n = kd.component_count();
    if n < 2 {
        return Ok(());
    }
    let mut cur = kd.clone();
    let mut trail = Vec::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let s = sign(rng);
        cur = slide(&cur, i, j, s).map_err(|e| e.to_string())?;
        trail.push(format!("slide {} {} {}", i + 1, j + 1, s));
        let after = invariant_bundle(&cur).map_err(|e| e.to_string())?;
        if after != before {
            return Err(format!(
                "invariants changed after {trail:?}: {before:?} vs {after:?}"
            ));
        }
        if homology(&cur).map_err(|e| e.to_string())? != before.homology {
            return Err(format!("homology changed after {trail:?}"));
        }
        if let Ok(form) = intersection_form(&cur) {
            let oracle = signature_by_eigenvalues(&form.matrix);
            if oracle != form.data.signature {
                return Err(format!(
                    "signature {} but eigenvalues give {oracle}",
                    form.data.signature
                ));
            }
            if rational_det(&form.matrix.to_rows()) != form.data.det {
                return Err("determinant disagrees with elimination".into());
            }
        }
    }
    Ok(())
}

/// Fewest transposition conjugations carrying `from` to `to`, by breadth-first
/// search over the symmetric group.
pub fn conjugation_distance(from: &Permutation, to: &Permutation) -> Option<usize> {
    let n = from.size();
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([(from.clone(), 0)]);
    while let Some((p, d)) = queue.pop_front() {
        if &p == to {
            return Some(d);
        }
        for a in 1..=n {
            for b in a + 1..=n {
                let q = p.conjugated(a, b);
                if seen.insert(q.clone()) {
                    queue.push_back((q, d + 1));
                }
            }
        }
    }
    None
}

pub fn check_braid_pair(b1: &Braid, b2: &Braid) -> Result<(), String> {
    let (eq, cert) = braids_equivalent(b1, b2).map_err(|e| e.to_string())?;
    let p1 = braid_permutation(b1);
    let p2 = braid_permutation(b2);
    let oracle = if p1.size() == p2.size() {
        conjugation_distance(&p1, &p2)
    } else {
        None
    };
    match (eq, cert, oracle) {
        (false, None, None) => Ok(()),
        (true, Some(cert), Some(dist)) => {
            if cert.conjugations.len() != dist {
                return Err(format!(
                    "{b1} vs {b2}: certificate has {} conjugations, search finds {dist}",
                    cert.conjugations.len()
                ));
            }
            let carried = cert
                .conjugations
                .iter()
                .fold(p1, |p, &(a, b)| p.conjugated(a, b));
            if carried != p2 {
                return Err(format!("{b1} vs {b2}: certificate does not reach {p2}"));
            }
            if cert.crossing_changes != (b1.word() != b2.word()) {
                return Err(format!("{b1} vs {b2}: wrong crossing-change marker"));
            }
            Ok(())
        }
        (eq, cert, oracle) => Err(format!(
            "{b1} vs {b2}: verdict {eq}, certificate {cert:?}, search {oracle:?}"
        )),
    }
}

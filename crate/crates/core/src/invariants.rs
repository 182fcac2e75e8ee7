//! Invariants of closed Kirby diagrams.
//!
//! Equal invariants are evidence for a diffeomorphism, never a proof.
//!
//! * `π_1`: one generator per ball, one relator per component word.
//! * `H_1`: cokernel of the exponent-sum matrix, read off its Smith form.
//! * `H_2, H_3`: for a closed connected oriented 4-manifold with Euler
//!   characteristic `χ`, first Betti number `b_1` and torsion `T ⊂ H_1`,
//!   Poincaré duality and universal coefficients give `H_3 = Z^{b_1}` and
//!   `H_2 = Z^{b_2} ⊕ T` with `b_2 = χ - 2 + 2 b_1`.
//! * The intersection form, when the diagram has no 1- or 3-handles, is the
//!   linking matrix; its parity, determinant and signature are exact.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kirby::KirbyDiagram;
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("open diagram: invariant needs a closed diagram (one 4-handle)")]
    OpenDiagram,
    #[error(
        "form undefined for this diagram: it has {balls} 1-handles and {three_handles} 3-handles"
    )]
    FormUndefined { balls: usize, three_handles: usize },
    #[error("diagram is not a closed 4-manifold: derived b2 = {b2} is negative")]
    NegativeBetti { b2: i64 },
    #[error("diagram is not a closed 4-manifold: the form has rank {rank} and determinant {det}, but b2 = {b2}")]
    NotUnimodular { rank: usize, det: i128, b2: usize },
}

/// `⟨x_1, …, x_generators | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    /// Exponent-sum matrix: rows are generators, columns relators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut e = IntMatrix::zeros(self.generators, self.relators.len());
        for (c, r) in self.relators.iter().enumerate() {
            for l in r.letters() {
                e[(l.generator - 1, c)] += l.sign.value();
            }
        }
        e
    }

    pub fn abelianization(&self) -> AbelianGroup {
        AbelianGroup::cokernel(&self.exponent_matrix())
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generators).map(|l| format!("x{l}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` in
/// invariant-factor form: every `d_i ≥ 2` and `d_i | d_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z^rows / (column span of relations)`.
    pub fn cokernel(relations: &IntMatrix) -> Self {
        let factors = smith_normal_form(relations).invariant_factors();
        AbelianGroup {
            rank: relations.rows() - factors.len(),
            torsion: factors
                .into_iter()
                .filter(|&d| d > 1)
                .map(|d| d as u64)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyProfile {
    /// `H_0 … H_4`.
    pub groups: [AbelianGroup; 5],
    pub euler: i64,
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        write!(f, "({})  chi = {}", gs.join(", "), self.euler)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormData {
    pub parity: Parity,
    pub det: i128,
    pub signature: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub matrix: IntMatrix,
    pub data: FormData,
}

/// The comparison record for closed diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantBundle {
    pub euler: i64,
    pub pi1_abelianization: AbelianGroup,
    pub homology: HomologyProfile,
    pub form: FormData,
}

pub fn fundamental_group(kd: &KirbyDiagram) -> GroupPresentation {
    GroupPresentation {
        generators: kd.balls(),
        relators: kd
            .components()
            .iter()
            .filter(|c| !c.word.is_empty())
            .map(|c| c.word.clone())
            .collect(),
    }
}

/// Column `c` holds the exponent sums of component `c`'s word.
pub fn exponent_matrix(kd: &KirbyDiagram) -> IntMatrix {
    let mut e = IntMatrix::zeros(kd.balls(), kd.component_count());
    for (c, comp) in kd.components().iter().enumerate() {
        for l in comp.word.letters() {
            e[(l.generator - 1, c)] += l.sign.value();
        }
    }
    e
}

pub fn homology(kd: &KirbyDiagram) -> Result<HomologyProfile, InvariantError> {
    if !kd.is_closed() {
        return Err(InvariantError::OpenDiagram);
    }
    let h1 = AbelianGroup::cokernel(&exponent_matrix(kd));
    let euler = kd.euler_characteristic();
    let b1 = h1.rank as i64;
    let b2 = euler - 2 + 2 * b1;
    if b2 < 0 {
        return Err(InvariantError::NegativeBetti { b2 });
    }
    let h2 = AbelianGroup {
        rank: b2 as usize,
        torsion: h1.torsion.clone(),
    };
    Ok(HomologyProfile {
        groups: [
            AbelianGroup::free(1),
            h1.clone(),
            h2,
            AbelianGroup::free(h1.rank),
            AbelianGroup::free(1),
        ],
        euler,
    })
}

pub fn intersection_form(kd: &KirbyDiagram) -> Result<IntersectionForm, InvariantError> {
    if !kd.is_closed() {
        return Err(InvariantError::OpenDiagram);
    }
    if kd.balls() > 0 || kd.three_handles() > 0 {
        return Err(InvariantError::FormUndefined {
            balls: kd.balls(),
            three_handles: kd.three_handles(),
        });
    }
    let matrix = IntMatrix::from_rows(kd.linking());
    let matrix = if kd.component_count() == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        matrix
    };
    Ok(form_of(matrix))
}

/// Signature of a symmetric integer matrix by exact congruence
/// diagonalization over the rationals.
pub fn signature(m: &IntMatrix) -> i64 {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| Ratio::from_integer(v as i128))
                .collect()
        })
        .collect();
    let zero = Ratio::from_integer(0);
    let mut sig = 0i64;
    for k in 0..n {
        let pivot = (k..n).find(|&i| a[i][i] != zero);
        let p = match pivot {
            Some(p) => p,
            None => {
                // all remaining diagonal entries vanish: fold an off-diagonal
                // entry onto the diagonal (a[i][i] becomes 2 a[i][j])
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] != zero)
                else {
                    break;
                };
                for c in 0..n {
                    let v = a[j][c];
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j];
                    a[r][i] += v;
                }
                i
            }
        };
        a.swap(k, p);
        for row in a.iter_mut() {
            row.swap(k, p);
        }
        let pv = a[k][k];
        for i in k + 1..n {
            if a[i][k] == zero {
                continue;
            }
            let f = a[i][k] / pv;
            for c in k..n {
                let v = a[k][c];
                a[i][c] -= f * v;
            }
            for r in k..n {
                let v = a[r][k];
                a[r][i] -= f * v;
            }
        }
        sig += if pv > zero { 1 } else { -1 };
    }
    sig
}

/// Intersection form on `H_2 / torsion` for any closed diagram.
///
/// `H_2` of the 2-handlebody is the kernel of the exponent matrix, carrying
/// the restriction of the linking matrix; the closed manifold's form is that
/// lattice modulo its radical. Without 1- and 3-handles this is the linking
/// matrix itself.
pub fn reduced_intersection_form(kd: &KirbyDiagram) -> Result<IntersectionForm, InvariantError> {
    if !kd.is_closed() {
        return Err(InvariantError::OpenDiagram);
    }
    let kernel = kernel_basis(&exponent_matrix(kd));
    let linking = if kd.component_count() == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        IntMatrix::from_rows(kd.linking())
    };
    let restricted = &(&kernel.transpose() * &linking) * &kernel;
    let snf = smith_normal_form(&restricted);
    let rank = snf.invariant_factors().len();
    // columns past the rank span the radical
    let full = &(&snf.v.transpose() * &restricted) * &snf.v;
    let mut matrix = IntMatrix::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            matrix[(i, j)] = full[(i, j)];
        }
    }
    Ok(form_of(matrix))
}

/// Columns form a basis of the integer kernel of `a`.
fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.invariant_factors().len();
    let n = a.cols();
    let mut k = IntMatrix::zeros(n, n - rank);
    for i in 0..n {
        for j in rank..n {
            k[(i, j - rank)] = snf.v[(i, j)];
        }
    }
    k
}

fn form_of(matrix: IntMatrix) -> IntersectionForm {
    let parity = if matrix.diagonal().iter().all(|d| d % 2 == 0) {
        Parity::Even
    } else {
        Parity::Odd
    };
    let data = FormData {
        parity,
        det: matrix.determinant(),
        signature: signature(&matrix),
    };
    IntersectionForm { matrix, data }
}

/// The form is the linking matrix when that is defined, and the reduced
/// form otherwise. A closed 4-manifold has a unimodular form of rank `b2`;
/// shadows failing that are rejected.
pub fn invariant_bundle(kd: &KirbyDiagram) -> Result<InvariantBundle, InvariantError> {
    let homology = homology(kd)?;
    let form = match intersection_form(kd) {
        Ok(f) => f,
        Err(InvariantError::FormUndefined { .. }) => reduced_intersection_form(kd)?,
        Err(e) => return Err(e),
    };
    let (rank, b2) = (form.matrix.rows(), homology.groups[2].rank);
    if rank != b2 || form.data.det.abs() != 1 {
        return Err(InvariantError::NotUnimodular {
            rank,
            det: form.data.det,
            b2,
        });
    }
    Ok(InvariantBundle {
        euler: homology.euler,
        pi1_abelianization: fundamental_group(kd).abelianization(),
        homology,
        form: form.data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heegaard::HeegaardDiagram;
    use crate::kirby::{double, half_open_book, open_book};
    use crate::monodromy::TwistWord;

    fn hopf(n: i64) -> KirbyDiagram {
        let w = TwistWord::new(0, 1, vec![crate::monodromy::Twist::sphere(1, n)]).unwrap();
        open_book(
            &HeegaardDiagram::canonical_punctured_handlebody(0, 1),
            &w.into(),
        )
        .unwrap()
    }

    #[test]
    fn pi1_examples() {
        let spun = double(&HeegaardDiagram::lens(5, 2).unwrap()).unwrap();
        let p = fundamental_group(&spun);
        assert_eq!(p.generators, 1);
        assert_eq!(p.relators, vec![Word::power(1, 5)]);
        assert_eq!(p.to_string(), "< x1 | x1^5 >");

        let free = fundamental_group(
            &double(&HeegaardDiagram::canonical_punctured_handlebody(3, 0)).unwrap(),
        );
        assert_eq!(free.generators, 3);
        assert!(free.relators.is_empty());
        assert_eq!(free.abelianization(), AbelianGroup::free(3));

        let trivial = fundamental_group(
            &double(&HeegaardDiagram::canonical_punctured_handlebody(0, 4)).unwrap(),
        );
        assert_eq!(trivial.generators, 0);
        assert!(trivial.relators.is_empty());
    }

    #[test]
    fn homology_examples() {
        let s2s2 = homology(&hopf(0)).unwrap();
        assert_eq!(s2s2.euler, 4);
        assert_eq!(s2s2.groups[1], AbelianGroup::trivial());
        assert_eq!(s2s2.groups[2], AbelianGroup::free(2));
        assert_eq!(s2s2.groups[3], AbelianGroup::trivial());

        let spun = homology(&double(&HeegaardDiagram::lens(5, 2).unwrap()).unwrap()).unwrap();
        let z5 = AbelianGroup {
            rank: 0,
            torsion: vec![5],
        };
        assert_eq!(spun.groups[1], z5);
        assert_eq!(spun.groups[2], z5);
        assert_eq!(spun.groups[3], AbelianGroup::trivial());
        assert_eq!(spun.euler, 2);

        let s1s3 =
            homology(&double(&HeegaardDiagram::canonical_punctured_handlebody(2, 0)).unwrap())
                .unwrap();
        assert_eq!(s1s3.groups[1], AbelianGroup::free(2));
        assert_eq!(s1s3.groups[2], AbelianGroup::trivial());
        assert_eq!(s1s3.groups[3], AbelianGroup::free(2));
        assert_eq!(s1s3.euler, -2);
        assert_eq!(s1s3.to_string(), "(Z, Z^2, 0, Z^2, Z)  chi = -2");
    }

    #[test]
    fn open_diagrams_are_refused() {
        let hob = half_open_book(&HeegaardDiagram::canonical_punctured_handlebody(0, 1)).unwrap();
        assert_eq!(homology(&hob), Err(InvariantError::OpenDiagram));
        assert!(intersection_form(&hob).is_err());
        assert!(homology(&hob)
            .unwrap_err()
            .to_string()
            .contains("open diagram"));
    }

    #[test]
    fn hopf_forms() {
        let even = intersection_form(&hopf(0)).unwrap().data;
        assert_eq!(
            even,
            FormData {
                parity: Parity::Even,
                det: -1,
                signature: 0
            }
        );
        let odd = intersection_form(&hopf(1)).unwrap().data;
        assert_eq!(odd.parity, Parity::Odd);
        assert_eq!(odd.det, -1);
        assert_eq!(odd.signature, 0);
        for n in -6..=6 {
            let f = intersection_form(&hopf(n)).unwrap().data;
            let expected = if n % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            };
            assert_eq!(f.parity, expected);
        }
    }

    #[test]
    fn form_refused_with_one_handles() {
        let spun = double(&HeegaardDiagram::lens(3, 1).unwrap()).unwrap();
        assert!(matches!(
            intersection_form(&spun),
            Err(InvariantError::FormUndefined { .. })
        ));
        assert!(intersection_form(&spun)
            .unwrap_err()
            .to_string()
            .contains("form undefined for this diagram"));
    }

    #[test]
    fn signature_cases() {
        let m = |rows: &[Vec<i64>]| IntMatrix::from_rows(rows);
        assert_eq!(signature(&m(&[vec![1]])), 1);
        assert_eq!(signature(&m(&[vec![-2]])), -1);
        assert_eq!(signature(&m(&[vec![0, 1], vec![1, 0]])), 0);
        assert_eq!(signature(&m(&[vec![0, 0], vec![0, 0]])), 0);
        assert_eq!(
            signature(&m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]])),
            1
        );
        // E8 is positive definite
        let e8 = vec![
            vec![2, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0, 0, 0],
            vec![0, -1, 2, -1, 0, 0, 0, 0],
            vec![0, 0, -1, 2, -1, 0, 0, 0],
            vec![0, 0, 0, -1, 2, -1, 0, -1],
            vec![0, 0, 0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, 0, 0, -1, 2, 0],
            vec![0, 0, 0, 0, -1, 0, 0, 2],
        ];
        assert_eq!(signature(&m(&e8)), 8);
        assert_eq!(m(&e8).determinant(), 1);
    }

    #[test]
    fn bundles_distinguish_parity() {
        let a = invariant_bundle(&hopf(0)).unwrap();
        let b = invariant_bundle(&hopf(1)).unwrap();
        assert_eq!(a.homology, b.homology);
        assert_ne!(a, b);
        let s4 = invariant_bundle(&KirbyDiagram::empty(true)).unwrap();
        assert_eq!(
            s4.form,
            FormData {
                parity: Parity::Even,
                det: 1,
                signature: 0
            }
        );
    }

    #[test]
    fn reduced_form_ignores_cancelling_handles() {
        let spun = double(&HeegaardDiagram::lens(3, 1).unwrap()).unwrap();
        let f = reduced_intersection_form(&spun).unwrap();
        assert_eq!(f.matrix.rows(), 0);
        assert_eq!(f.data.det, 1);

        // S^2 x S^2 with a cancelling 1-2 pair and a cancelling 2-3 pair
        let (hd, mono) = crate::kirby::stabilize(
            &HeegaardDiagram::canonical_punctured_handlebody(0, 1),
            &TwistWord::identity(0, 1),
        )
        .unwrap();
        let kd = open_book(&hd, &mono.into()).unwrap();
        assert_eq!(kd.balls(), 1);
        let f = reduced_intersection_form(&kd).unwrap();
        assert_eq!(f.data, intersection_form(&hopf(0)).unwrap().data);
        assert_eq!(f.matrix.rows(), 2);
        assert_eq!(
            invariant_bundle(&kd).unwrap(),
            invariant_bundle(&hopf(0)).unwrap()
        );

        let hob = half_open_book(&HeegaardDiagram::lens(3, 1).unwrap()).unwrap();
        assert_eq!(
            reduced_intersection_form(&hob).unwrap_err(),
            InvariantError::OpenDiagram
        );
    }

    #[test]
    fn unrealizable_shadow_is_rejected() {
        // the spun L(1,0) with a 1-framed meridian: b2 = 0 but the form is [1]
        let spun = double(&HeegaardDiagram::lens(1, 1).unwrap()).unwrap();
        let mut comps = spun.components().to_vec();
        comps[1].framing = 1;
        let mut linking = spun.linking().to_vec();
        linking[1][1] = 1;
        let kd = KirbyDiagram::from_parts(spun.balls(), comps, linking, 1, 1).unwrap();
        assert_eq!(homology(&kd).unwrap().groups[2].rank, 0);
        assert_eq!(
            invariant_bundle(&kd).unwrap_err(),
            InvariantError::NotUnimodular {
                rank: 1,
                det: 1,
                b2: 0
            }
        );
        assert!(invariant_bundle(&spun).is_ok());
    }
}

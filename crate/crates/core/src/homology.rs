//! Reduced simplicial homology over the integers via Smith normal form,
//! and the all-links homology-sphere test used to certify Gorenstein*
//! posets.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poset::GradedPoset;
use crate::simplicial::{order_complex, Face, SimplicialComplex};
use crate::Int;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("complex exceeds the face budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("complex is not pure")]
    NotPure,
}

/// Reduced integer homology in dimensions −1 through dim: slot `k`
/// describes `H̃_{k−1}` of the chain complex that includes the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    /// `betti[k]` = rank of `H̃_{k−1}`.
    pub betti: Vec<usize>,
    /// `torsion[k]` = invariant factors > 1 of `H̃_{k−1}`, ascending.
    pub torsion: Vec<Vec<Int>>,
}

impl HomologyProfile {
    /// Rank of `H̃_m`; dimensions outside the stored range are zero.
    pub fn betti_at(&self, m: i64) -> usize {
        usize::try_from(m + 1).ok().and_then(|k| self.betti.get(k)).copied().unwrap_or(0)
    }

    pub fn torsion_at(&self, m: i64) -> &[Int] {
        usize::try_from(m + 1)
            .ok()
            .and_then(|k| self.torsion.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// True when this is the profile of a sphere of dimension `m`: free
    /// rank 1 in dimension `m` and nothing anywhere else.
    pub fn is_sphere(&self, m: i64) -> bool {
        if !self.is_torsion_free() || self.betti_at(m) != 1 {
            return false;
        }
        (0..self.betti.len() as i64).all(|k| k - 1 == m || self.betti[k as usize] == 0)
    }
}

impl std::fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..self.betti.len())
            .map(|k| {
                let mut s = format!("H~{}: Z^{}", k as i64 - 1, self.betti[k]);
                for t in &self.torsion[k] {
                    s.push_str(&format!(" + Z/{t}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Smith normal form of an integer matrix: returns the nonzero invariant
/// factors, positive and in divisibility order (checked).
#[allow(clippy::needless_range_loop)] // row/column arithmetic reads clearest indexed
pub(crate) fn smith_normal_form(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag: Vec<Int> = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest-magnitude nonzero pivot in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in &mut a {
            row.swap(t, pj);
        }
        'reduce: loop {
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    if !q.is_zero() {
                        for j in t..cols {
                            let sub = &q * &a[t][j];
                            a[i][j] -= sub;
                        }
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i); // strictly smaller remainder becomes pivot
                        continue 'reduce;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    if !q.is_zero() {
                        for row in a.iter_mut().skip(t) {
                            let sub = &q * &row[t];
                            row[j] -= sub;
                        }
                    }
                    if !a[t][j].is_zero() {
                        for row in &mut a {
                            row.swap(t, j);
                        }
                        continue 'reduce;
                    }
                }
            }
            // Row and column are clear; force divisibility of the rest.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for col in t..cols {
                            let add = a[i][col].clone();
                            a[t][col] += add;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        diag.push(a[t][t].abs());
    }
    for w in diag.windows(2) {
        assert!((&w[1] % &w[0]).is_zero(), "invariant factors must divide in order");
    }
    diag
}

/// Reduced integer homology of a complex, empty face included, computed
/// from boundary matrices in Smith normal form. The void complex yields
/// the all-zero profile with no dimensions.
pub fn reduced_homology(
    c: &SimplicialComplex,
    budget: usize,
) -> Result<HomologyProfile, HomologyError> {
    let faces = c.all_faces_capped(budget).ok_or(HomologyError::BudgetExceeded { budget })?;
    if faces.is_empty() {
        return Ok(HomologyProfile { betti: Vec::new(), torsion: Vec::new() });
    }
    let top = faces.iter().map(Vec::len).max().expect("nonempty");
    let mut by_size: Vec<Vec<&Face>> = vec![Vec::new(); top + 1];
    for f in &faces {
        by_size[f.len()].push(f);
    }
    let index: Vec<std::collections::BTreeMap<&Face, usize>> = by_size
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, f)| (*f, i)).collect())
        .collect();

    // invariant_factors[s] describes the boundary map from size-s faces
    // to size-(s−1) faces; size-0 faces (the empty face) map to nothing.
    let mut factors: Vec<Vec<Int>> = vec![Vec::new(); top + 2];
    for s in 1..=top {
        let mut matrix = vec![vec![Int::zero(); by_size[s].len()]; by_size[s - 1].len()];
        for (col, face) in by_size[s].iter().enumerate() {
            for (i, _) in face.iter().enumerate() {
                let mut sub: Face = (*face).clone();
                sub.remove(i);
                let row = index[s - 1][&sub];
                matrix[row][col] = if i % 2 == 0 { Int::one() } else { -Int::one() };
            }
        }
        factors[s] = smith_normal_form(matrix);
    }

    let betti = (0..=top)
        .map(|s| by_size[s].len() - factors[s].len() - factors[s + 1].len())
        .collect();
    let torsion = (0..=top)
        .map(|s| factors[s + 1].iter().filter(|d| !d.is_one()).cloned().collect())
        .collect();
    Ok(HomologyProfile { betti, torsion })
}

/// Per-face certification record produced by [`sphere_certificate`].
#[derive(Clone, Debug)]
pub struct SphereCertificate {
    /// Dimension of the complex.
    pub dim: i64,
    /// Homology of the whole complex (the empty face's link).
    pub profile: HomologyProfile,
    /// Faces whose link does not look like a sphere of the right
    /// dimension, with the offending profiles; sorted by face.
    pub failures: Vec<(Face, HomologyProfile)>,
    pub is_sphere: bool,
}

/// Certifies the homology-sphere property by checking that the link of
/// every face (the empty face included) has the reduced homology of a
/// sphere of dimension `dim − |F|`.
pub fn sphere_certificate(
    c: &SimplicialComplex,
    budget: usize,
) -> Result<SphereCertificate, HomologyError> {
    if !c.is_pure() {
        return Err(HomologyError::NotPure);
    }
    let faces = c.all_faces_capped(budget).ok_or(HomologyError::BudgetExceeded { budget })?;
    let dim = c.dim().unwrap_or(-2);
    let mut profile = None;
    let mut failures = Vec::new();
    for f in &faces {
        let link = c.link(f).expect("enumerated face");
        let target = dim - f.len() as i64;
        let p = reduced_homology(&link, budget)?;
        let ok = p.is_sphere(target);
        if f.is_empty() {
            profile = Some(p.clone());
        }
        if !ok {
            failures.push((f.clone(), p));
        }
    }
    let is_sphere = !faces.is_empty() && failures.is_empty();
    Ok(SphereCertificate {
        dim,
        profile: profile
            .unwrap_or(HomologyProfile { betti: Vec::new(), torsion: Vec::new() }),
        failures,
        is_sphere,
    })
}

/// True iff every face link, the empty face included, has the homology of
/// a sphere of matching dimension. The void complex certifies nothing.
pub fn is_homology_sphere(
    c: &SimplicialComplex,
    budget: usize,
) -> Result<bool, HomologyError> {
    Ok(sphere_certificate(c, budget)?.is_sphere)
}

/// Gorenstein* test for a graded poset: its order complex must pass the
/// all-links homology-sphere certification.
pub fn is_gorenstein_star(p: &GradedPoset, budget: usize) -> Result<bool, HomologyError> {
    is_homology_sphere(&order_complex(p), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{ElementEntry, PosetData};
    use crate::realize::{build_boolean2, build_cycle_poset};
    use crate::simplicial::{cycle_complex, zero_sphere};
    use crate::{int, DEFAULT_FACE_BUDGET};

    fn profile(c: &SimplicialComplex) -> HomologyProfile {
        reduced_homology(c, DEFAULT_FACE_BUDGET).unwrap()
    }

    fn octahedron() -> SimplicialComplex {
        zero_sphere().join(&zero_sphere()).join(&zero_sphere())
    }

    fn projective_plane() -> SimplicialComplex {
        SimplicialComplex::from_faces([
            [1u64, 2, 3],
            [1, 2, 4],
            [1, 3, 5],
            [1, 4, 6],
            [1, 5, 6],
            [2, 3, 6],
            [2, 4, 5],
            [2, 5, 6],
            [3, 4, 5],
            [3, 4, 6],
        ])
    }

    #[test]
    fn circle_homology() {
        let p = profile(&cycle_complex(4));
        assert_eq!(p.betti, vec![0, 0, 1]);
        assert!(p.is_torsion_free());
        assert!(p.is_sphere(1));
    }

    #[test]
    fn octahedron_homology_and_certification() {
        let p = profile(&octahedron());
        assert_eq!(p.betti, vec![0, 0, 0, 1]);
        assert!(p.is_sphere(2));
        assert!(is_homology_sphere(&octahedron(), DEFAULT_FACE_BUDGET).unwrap());
    }

    #[test]
    fn disjoint_circles_are_not_a_sphere() {
        let two: Vec<Vec<u64>> = (0..3u64)
            .map(|i| vec![i, (i + 1) % 3])
            .chain((0..3u64).map(|i| vec![10 + i, 10 + (i + 1) % 3]))
            .collect();
        let c = SimplicialComplex::from_faces(two);
        let p = profile(&c);
        assert_eq!(p.betti, vec![0, 1, 2]);
        assert!(!is_homology_sphere(&c, DEFAULT_FACE_BUDGET).unwrap());
    }

    #[test]
    fn empty_complex_is_the_minus_one_sphere() {
        let p = profile(&SimplicialComplex::empty());
        assert_eq!(p.betti, vec![1]);
        assert!(p.is_sphere(-1));
        assert!(is_homology_sphere(&SimplicialComplex::empty(), DEFAULT_FACE_BUDGET).unwrap());
        let point = SimplicialComplex::from_faces([[7u64]]);
        assert!(!is_homology_sphere(&point, DEFAULT_FACE_BUDGET).unwrap());
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        let c = projective_plane();
        let p = profile(&c);
        assert_eq!(p.betti, vec![0, 0, 0, 0]);
        assert_eq!(p.torsion_at(1), &[int(2)]);
        assert!(!p.is_torsion_free());
        assert!(!is_homology_sphere(&c, DEFAULT_FACE_BUDGET).unwrap());
    }

    #[test]
    fn euler_characteristic_matches_betti_alternating_sum() {
        for c in [cycle_complex(5), octahedron(), projective_plane(), zero_sphere()] {
            let f = c.f_vector();
            let mut chi = int(0);
            for (s, count) in f.0.iter().enumerate() {
                let sign = if s % 2 == 0 { -1 } else { 1 };
                chi += count * int(sign);
            }
            let p = profile(&c);
            let mut betti_sum = int(0);
            for (k, b) in p.betti.iter().enumerate() {
                let sign = if k % 2 == 0 { -1 } else { 1 };
                betti_sum += int(sign) * int(*b as i64);
            }
            assert_eq!(chi, betti_sum);
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            reduced_homology(&octahedron(), 3),
            Err(HomologyError::BudgetExceeded { budget: 3 })
        ));
    }

    #[test]
    fn non_pure_complexes_are_rejected() {
        let c = SimplicialComplex::from_faces(vec![vec![1u64, 2, 3], vec![4, 5]]);
        assert!(matches!(
            is_homology_sphere(&c, DEFAULT_FACE_BUDGET),
            Err(HomologyError::NotPure)
        ));
    }

    #[test]
    fn gorenstein_star_examples() {
        assert!(is_gorenstein_star(&build_boolean2(), DEFAULT_FACE_BUDGET).unwrap());
        for k in 3..=6 {
            assert!(
                is_gorenstein_star(&build_cycle_poset(k).unwrap(), DEFAULT_FACE_BUDGET).unwrap()
            );
        }
        let chain = GradedPoset::validate(&PosetData {
            elements: (0..4).map(|i| ElementEntry { id: i, rank: i }).collect(),
            covers: (0..3).map(|i| [i, i + 1]).collect(),
            bottom: 0,
            top: 3,
        })
        .unwrap();
        assert!(!is_gorenstein_star(&chain, DEFAULT_FACE_BUDGET).unwrap());
    }

    #[test]
    fn cycle_join_order_complex_is_a_three_sphere() {
        let p = build_cycle_poset(3).unwrap().join(&build_cycle_poset(3).unwrap());
        let oc = order_complex(&p);
        let prof = profile(&oc);
        assert_eq!(prof.betti, vec![0, 0, 0, 0, 1]);
        assert!(prof.is_sphere(3));
    }

    #[test]
    fn certificate_reports_offending_faces() {
        let point = SimplicialComplex::from_faces([[7u64]]);
        let cert = sphere_certificate(&point, DEFAULT_FACE_BUDGET).unwrap();
        assert!(!cert.is_sphere);
        assert_eq!(cert.failures.len(), 1);
        assert!(cert.failures[0].0.is_empty());
    }
}

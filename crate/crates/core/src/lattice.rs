//! Intersection lattices: flats, their closure under intersection, and the
//! swap identity for localizations of restrictions.

use std::collections::HashMap;

use crate::arrangement::{restrict_form, LinearForm, Multiarrangement};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::RowSpan;

/// An element X of L(A): the saturated set of hyperplanes containing X,
/// its rank, and a canonical reduced echelon basis of the span of the
/// normals of those hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub struct Flat {
    pub containing: Vec<usize>,
    pub rank: usize,
    pub normal_basis: Vec<Vec<FieldElement>>,
    pub pivots: Vec<usize>,
}

impl Flat {
    /// Canonical identity of the flat across arrangements.
    pub fn key(&self) -> String {
        let rows: Vec<String> = self
            .normal_basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        c.coeffs()
                            .iter()
                            .map(crate::field::format_rational)
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect();
        format!("r{};{}", self.rank, rows.join(";"))
    }

    /// Whether the normal span of `other` lies inside this flat's normal
    /// span. In the lattice order (reverse inclusion) this says
    /// `other <= self`, i.e. self is contained in other as a subspace.
    pub fn normal_span_contains(&self, other: &Flat) -> bool {
        if self.normal_basis.is_empty() {
            return other.normal_basis.is_empty();
        }
        let ctx = self.normal_basis[0][0].ctx().clone();
        let mut span = RowSpan::new(&ctx, self.normal_basis[0].len());
        for r in &self.normal_basis {
            span.insert(r.clone());
        }
        other.normal_basis.iter().all(|r| span.contains(r))
    }
}

/// Builds the flat determined by a subspace U (given by spanning vectors):
/// X = intersection of all hyperplanes containing U, with saturated
/// containing set. For U = V this is the rank-0 flat.
pub fn flat_from_vectors(arr: &Multiarrangement, vectors: &[Vec<FieldElement>]) -> Flat {
    let containing: Vec<usize> = arr
        .support()
        .filter(|(_, h)| vectors.iter().all(|v| h.form.vanishes_on(v)))
        .map(|(i, _)| i)
        .collect();
    flat_from_indices(arr, &containing)
}

/// Builds the flat cut out by the kernels of the given forms.
pub fn flat_from_forms(arr: &Multiarrangement, forms: &[LinearForm]) -> Result<Flat> {
    let ctx = arr.ctx();
    let dim = arr.dimension();
    let rows: Vec<Vec<FieldElement>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
    let vectors = crate::linalg::kernel_basis(ctx, &rows, dim);
    Ok(flat_from_vectors(arr, &vectors))
}

fn flat_from_indices(arr: &Multiarrangement, indices: &[usize]) -> Flat {
    let ctx = arr.ctx();
    let mut span = RowSpan::new(ctx, arr.dimension());
    for &i in indices {
        span.insert(arr.form(i).coeffs().to_vec());
    }
    // Saturate: collect every support hyperplane whose normal lies in the span.
    let containing: Vec<usize> = arr
        .support()
        .filter(|(_, h)| span.contains(h.form.coeffs()))
        .map(|(i, _)| i)
        .collect();
    Flat {
        rank: span.rank(),
        normal_basis: span.rows().to_vec(),
        pivots: span.pivots().to_vec(),
        containing,
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    pub flats: Vec<Flat>,
}

impl Lattice {
    pub fn center(&self) -> &Flat {
        self.flats.last().expect("lattice contains V")
    }

    pub fn flats_of_rank(&self, rank: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.rank == rank)
    }

    pub fn find(&self, key: &str) -> Option<&Flat> {
        self.flats.iter().find(|f| f.key() == key)
    }
}

/// All intersections of subsets of hyperplanes, closed by iteratively
/// intersecting flats with hyperplanes; includes V (rank 0). Flats are
/// returned sorted by rank, then canonical key.
pub fn intersection_lattice(arr: &Multiarrangement) -> Lattice {
    let mut seen: HashMap<String, Flat> = HashMap::new();
    let top = flat_from_indices(arr, &[]);
    let mut queue = vec![top.clone()];
    seen.insert(top.key(), top);
    while let Some(flat) = queue.pop() {
        for (i, _) in arr.support() {
            if flat.containing.contains(&i) {
                continue;
            }
            let mut indices = flat.containing.clone();
            indices.push(i);
            let next = flat_from_indices(arr, &indices);
            let key = next.key();
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(next.clone());
                queue.push(next);
            }
        }
    }
    let mut flats: Vec<Flat> = seen.into_values().collect();
    flats.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.key().cmp(&b.key())));
    Lattice { flats }
}

/// Simple restriction of the support of `arr` to a flat: the distinct
/// nonzero images of the hyperplane forms not containing the flat, in the
/// deterministic coordinates of the flat (pivot variables eliminated).
/// Returns (image form, indices of hyperplanes mapping to it).
pub fn restrict_support_to_flat(
    arr: &Multiarrangement,
    flat: &Flat,
) -> Vec<(LinearForm, Vec<usize>)> {
    let mut images: Vec<(LinearForm, Vec<usize>)> = Vec::new();
    for (i, h) in arr.support() {
        let Some(image) = restrict_form(&h.form, &flat.normal_basis, &flat.pivots) else {
            continue;
        };
        match images.iter_mut().find(|(f, _)| *f == image) {
            Some((_, group)) => group.push(i),
            None => images.push((image, vec![i])),
        }
    }
    images.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    images
}

/// Checks both identities of the localization/restriction swap for a
/// subarrangement B of A and nested flats Y <= X in L(A):
/// (i) B cap A_X = B_X and (ii) (B_X)^Y = (B^Y)_X.
/// Mathematically this always holds; the function recomputes both sides.
pub fn swap_check(
    arr: &Multiarrangement,
    sub: &Multiarrangement,
    x: &Flat,
    y: &Flat,
) -> Result<bool> {
    if !sub.sub_multiset_of(arr) {
        return Err(Error::InvalidInput(
            "swap check requires a submultiarrangement".into(),
        ));
    }
    // Y <= X in the reverse-inclusion order means X is contained in Y as a
    // subspace, i.e. span of Y's normals sits inside the span of X's.
    if !x.normal_span_contains(y) {
        return Err(Error::FlatsNotNested);
    }

    // (i) B cap A_X versus B_X, as multisets.
    let b_x = sub.localize_span_rows(&x.normal_basis);
    let a_x = arr.localize_span_rows(&x.normal_basis);
    let mut intersection: Vec<(LinearForm, u32)> = Vec::new();
    for (_, h) in sub.support() {
        if a_x.find_form(&h.form).is_some() {
            intersection.push((h.form.clone(), h.multiplicity));
        }
    }
    let b_cap_ax = Multiarrangement::new(arr.dimension(), arr.ctx(), intersection)?;
    if !b_cap_ax.equal_multiset(&b_x) {
        return Ok(false);
    }

    // (ii) (B_X)^Y versus (B^Y)_X, as sets of forms in Y's coordinates.
    let lhs: Vec<LinearForm> = restrict_support_to_flat(&b_x, y)
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    let rhs: Vec<LinearForm> = restrict_support_to_flat(sub, y)
        .into_iter()
        .filter(|(_, group)| {
            // Z = Y cap H lies above X iff any (equivalently every)
            // generating hyperplane contains X.
            group
                .iter()
                .any(|&i| a_x.find_form(sub.form(i)).is_some())
        })
        .map(|(f, _)| f)
        .collect();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::LinearForm;
    use crate::field::{Ctx, FieldContext};

    fn q() -> Ctx {
        FieldContext::rational()
    }

    fn boolean(l: usize) -> Multiarrangement {
        let c = q();
        Multiarrangement::new(
            l,
            &c,
            (0..l).map(|i| (LinearForm::coordinate(&c, l, i), 1)).collect(),
        )
        .unwrap()
    }

    fn ex218() -> Multiarrangement {
        let c = q();
        let forms = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
        Multiarrangement::new(
            3,
            &c,
            forms
                .iter()
                .map(|f| (LinearForm::from_integers(&c, f).unwrap(), 2))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn boolean_lattice_has_all_coordinate_subspaces() {
        let lat = intersection_lattice(&boolean(3));
        assert_eq!(lat.flats.len(), 8);
        assert_eq!(lat.flats_of_rank(0).count(), 1);
        assert_eq!(lat.flats_of_rank(1).count(), 3);
        assert_eq!(lat.flats_of_rank(2).count(), 3);
        assert_eq!(lat.flats_of_rank(3).count(), 1);
    }

    #[test]
    fn single_hyperplane_lattice() {
        let c = q();
        let a = Multiarrangement::new(
            3,
            &c,
            vec![(LinearForm::from_integers(&c, &[1, 2, 3]).unwrap(), 1)],
        )
        .unwrap();
        let lat = intersection_lattice(&a);
        assert_eq!(lat.flats.len(), 2);
    }

    #[test]
    fn monomial_lattice_rank_two_count() {
        // G(3,3,3): brute-force pairwise intersections must match the
        // lattice's rank-2 flats, with |A_Y| in {2, 3} and the pair count
        // sum equal to C(9, 2).
        let a = crate::catalog::monomial_rrl(3, 3).unwrap();
        let lat = intersection_lattice(&a);
        let rank2: Vec<&Flat> = lat.flats_of_rank(2).collect();
        let mut pair_total = 0usize;
        for f in &rank2 {
            let k = f.containing.len();
            assert!(k == 2 || k == 3, "unexpected |A_Y| = {k}");
            pair_total += k * (k - 1) / 2;
        }
        assert_eq!(pair_total, 9 * 8 / 2);
        // Independent brute force: distinct pairwise intersection keys.
        let indices: Vec<usize> = a.support().map(|(i, _)| i).collect();
        let mut keys = std::collections::HashSet::new();
        for (u, &i) in indices.iter().enumerate() {
            for &j in indices.iter().skip(u + 1) {
                let f = flat_from_indices_public(&a, &[i, j]);
                if f.rank == 2 {
                    keys.insert(f.key());
                }
            }
        }
        assert_eq!(keys.len(), rank2.len());
    }

    fn flat_from_indices_public(arr: &Multiarrangement, idx: &[usize]) -> Flat {
        super::flat_from_indices(arr, idx)
    }

    #[test]
    fn localization_idempotence() {
        let a = ex218();
        let lat = intersection_lattice(&a);
        for flat in &lat.flats {
            let loc = a.localize_span_rows(&flat.normal_basis);
            let again = loc.localize_span_rows(&flat.normal_basis);
            assert!(loc.equal_multiset(&again));
            assert_eq!(loc.rank(), flat.rank);
            // every hyperplane of the localization contains the flat
            for (_, h) in loc.support() {
                assert!(a.find_form(&h.form).is_some());
            }
        }
    }

    #[test]
    fn swap_identity_holds_for_nested_flats() {
        let a = ex218();
        let lat = intersection_lattice(&a);
        // B = A (trivial) and B = a proper subarrangement.
        let c = q();
        let sub = Multiarrangement::new(
            3,
            &c,
            vec![
                (LinearForm::from_integers(&c, &[1, 0, 0]).unwrap(), 1),
                (LinearForm::from_integers(&c, &[1, 1, 0]).unwrap(), 2),
                (LinearForm::from_integers(&c, &[0, 1, 1]).unwrap(), 1),
            ],
        )
        .unwrap();
        for x in &lat.flats {
            for y in &lat.flats {
                if !x.normal_span_contains(y) {
                    continue;
                }
                assert!(swap_check(&a, &a, x, y).unwrap());
                assert!(swap_check(&a, &sub, x, y).unwrap());
            }
        }
        // Empty subarrangement: all sides empty.
        let empty = Multiarrangement::empty(3, &c);
        let top = &lat.flats[0];
        assert!(swap_check(&a, &empty, top, top).unwrap());
    }

    #[test]
    fn swap_check_rejects_unnested_flats() {
        let a = boolean(3);
        let lat = intersection_lattice(&a);
        let rank1: Vec<&Flat> = lat.flats_of_rank(1).collect();
        // two incomparable rank-1 flats
        assert!(swap_check(&a, &a, rank1[0], rank1[1]).is_err());
    }
}

//! Cross-module invariants: product localizations, coordinate invariance of
//! the oracle, agreement with a classical simple-arrangement search, and
//! memo coherence.

mod common;

use common::*;
use multiarr_core::chains::{inductive_search, SearchStatus, DEFAULT_BUDGET};
use multiarr_core::derivation::{exponents_oracle, ExponentMultiset};
use multiarr_core::lattice::intersection_lattice;
use multiarr_core::linalg::kernel_basis;
use multiarr_core::*;

#[test]
fn defining_polynomial_degree_is_the_order() {
    for (name, arr) in inductively_free_corpus() {
        let q = arr.defining_polynomial();
        let expected = arr.total_multiplicity();
        if expected == 0 {
            assert!(q.is_constant(), "{name}");
        } else {
            assert_eq!(q.total_degree(), Some(expected), "{name}");
        }
    }
}

#[test]
fn flats_have_matching_rank_and_containment() {
    for arr in rank3_pool() {
        let lattice = intersection_lattice(&arr);
        for flat in &lattice.flats {
            let localized = arr.localize_span_rows(&flat.normal_basis);
            assert_eq!(localized.rank(), flat.rank);
            assert_eq!(localized.support_len(), flat.containing.len());
        }
    }
}

/// Localizing a product at the center of one factor (extended by the other
/// factor's full space) recovers that factor's hyperplanes padded with
/// zeros.
#[test]
fn product_localizes_to_its_factors() {
    let a1 = pencil(&[2, 1, 1]);
    let a2 = boolean(&[1, 2]);
    let product = a1.product(&a2).unwrap();
    let ctx = product.ctx().clone();

    // X1 = T_{A1} + V2: spanned by the kernel of A1's normals (padded)
    // and the coordinate vectors of the second factor.
    let normals: Vec<Vec<FieldElement>> = a1
        .support()
        .map(|(_, h)| h.form.coeffs().to_vec())
        .collect();
    let mut span: Vec<Vec<FieldElement>> = kernel_basis(a1.ctx(), &normals, a1.dimension())
        .into_iter()
        .map(|v| {
            let mut padded = v;
            padded.extend(std::iter::repeat_n(FieldElement::zero(&ctx), a2.dimension()));
            padded
        })
        .collect();
    for j in 0..a2.dimension() {
        let mut e = vec![FieldElement::zero(&ctx); product.dimension()];
        e[a1.dimension() + j] = FieldElement::one(&ctx);
        span.push(e);
    }
    let localized = product.localize_vectors(&span);
    assert_eq!(localized.support_len(), a1.support_len());
    for (_, h) in a1.support() {
        let mut padded = h.form.coeffs().to_vec();
        padded.extend(std::iter::repeat_n(FieldElement::zero(&ctx), a2.dimension()));
        let form = LinearForm::new(padded).unwrap();
        let idx = localized.find_form(&form).expect("padded factor hyperplane");
        assert_eq!(localized.multiplicity(idx), h.multiplicity);
    }

    // associativity up to relabeling
    let a3 = boolean(&[1]);
    let left = a1.product(&a2).unwrap().product(&a3).unwrap();
    let right = a1.product(&a2.product(&a3).unwrap()).unwrap();
    assert!(left.equal_multiset(&right));
}

/// The oracle's verdict and exponents do not depend on the choice of
/// coordinates: transform by unimodular integer matrices and compare.
#[test]
fn oracle_is_invariant_under_linear_change_of_coordinates() {
    let transforms: [[[i64; 3]; 3]; 3] = [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [2, 1, 0], [1, 0, 1]],
        [[0, 1, 0], [1, 0, 0], [1, -1, 1]],
    ];
    let instances = vec![
        boolean(&[2, 1, 1]),
        generic_four_planes(),
        catalog::example_constant_multiplicity().arrangement,
        catalog::monomial_rrl(1, 3).unwrap(),
    ];
    for arr in instances {
        let base = exponents_oracle(&arr, None);
        for m in &transforms {
            let ctx = arr.ctx().clone();
            // alpha'(x) = alpha(Mx): coefficients transform by M^T
            let entries: Vec<(LinearForm, u32)> = arr
                .support()
                .map(|(_, h)| {
                    let c = h.form.coeffs();
                    let transformed: Vec<FieldElement> = (0..3)
                        .map(|j| {
                            let mut acc = FieldElement::zero(&ctx);
                            for i in 0..3 {
                                let factor = FieldElement::from_integer(&ctx, m[i][j]);
                                acc = acc.add(&c[i].mul(&factor));
                            }
                            acc
                        })
                        .collect();
                    (LinearForm::new(transformed).unwrap(), h.multiplicity)
                })
                .collect();
            let transformed = Multiarrangement::new(3, &ctx, entries).unwrap();
            let cert = exponents_oracle(&transformed, None);
            assert_eq!(base.is_free(), cert.is_free());
            assert_eq!(base.exponents(), cert.exponents());
        }
    }
}

/// Classical inductive-freeness search for simple arrangements, written
/// against the simple restriction only (no Euler machinery): the reference
/// for the multiarrangement search restricted to simple inputs.
fn classical_simple_search(
    arr: &Multiarrangement,
    memo: &mut std::collections::HashMap<String, Option<ExponentMultiset>>,
) -> Option<ExponentMultiset> {
    assert!(arr.is_simple());
    let key = arr.canonical_key();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    if arr.is_empty() {
        let exps = ExponentMultiset::zeros(arr.dimension());
        memo.insert(key, Some(exps.clone()));
        return Some(exps);
    }
    let mut result = None;
    for (h, _) in arr.support() {
        let smaller = deletion(arr, h).unwrap();
        let Some(smaller_exps) = classical_simple_search(&smaller, memo) else {
            continue;
        };
        let (restriction, _) = arr.restrict_simple(h).unwrap();
        let Some(restriction_exps) = classical_simple_search(&restriction, memo) else {
            continue;
        };
        if !restriction_exps.included_in(&smaller_exps) {
            continue;
        }
        let moved = smaller_exps.single_difference(&restriction_exps).unwrap();
        result = Some(restriction_exps.with_element(moved + 1));
        break;
    }
    memo.insert(key, result.clone());
    result
}

#[test]
fn simple_inputs_agree_with_the_classical_search() {
    let c = q();
    let simple_instances = vec![
        boolean(&[1, 1, 1]),
        generic_four_planes(),
        pencil(&[1, 1, 1]),
        pencil(&[1, 1, 1, 1]),
        Multiarrangement::new(
            3,
            &c,
            [[1i64, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]]
                .iter()
                .map(|f| (form(&c, f), 1))
                .collect(),
        )
        .unwrap(),
        catalog::monomial_rrl(3, 3).unwrap(),
    ];
    for arr in simple_instances {
        let mut memo = std::collections::HashMap::new();
        let classical = classical_simple_search(&arr, &mut memo);
        let verdict = inductive_search(&arr, DEFAULT_BUDGET).unwrap();
        match (&classical, verdict.status) {
            (Some(exps), SearchStatus::Member) => {
                let chain = verdict.chain.unwrap();
                assert_eq!(
                    chain.steps.last().unwrap().exponents_after,
                    *exps,
                    "exponent disagreement on {arr}"
                );
            }
            (None, SearchStatus::NonMember) => {}
            other => panic!("classical and multiarrangement searches disagree: {other:?}"),
        }
    }
}

/// Memo coherence: exponents carried through the chain match the oracle on
/// the target.
#[test]
fn chain_exponents_agree_with_the_oracle() {
    for (name, arr) in inductively_free_corpus() {
        let verdict = inductive_search(&arr, DEFAULT_BUDGET).unwrap();
        assert_eq!(verdict.status, SearchStatus::Member, "{name}");
        let chain = verdict.chain.unwrap();
        let carried = chain.steps.last().map(|s| s.exponents_after.clone());
        let cert = exponents_oracle(&arr, None);
        assert!(cert.is_free(), "{name}");
        if let Some(carried) = carried {
            assert_eq!(&carried, cert.exponents().unwrap(), "{name}");
        }
    }
}

/// Characteristic polynomial of a simple arrangement, combinatorially:
/// chi(t) = sum over flats of mu(X) t^(dim X), with the Moebius function
/// computed by recursion over the reverse-inclusion order. Fully
/// independent of the derivation-module code.
fn characteristic_polynomial(arr: &Multiarrangement) -> Vec<i64> {
    assert!(arr.is_simple());
    let lattice = intersection_lattice(arr);
    let flats = &lattice.flats;
    // leq[i][j]: flats[i] <= flats[j] in L(A) (flats[j] inside flats[i]
    // as subspaces, i.e. normal span of i inside normal span of j)
    let n = flats.len();
    let mut mu = vec![0i64; n];
    for j in 0..n {
        if flats[j].rank == 0 {
            mu[j] = 1;
            continue;
        }
        let mut acc = 0i64;
        for i in 0..n {
            if i != j && flats[j].normal_span_contains(&flats[i]) {
                acc += mu[i];
            }
        }
        mu[j] = -acc;
    }
    let ell = arr.dimension();
    let mut chi = vec![0i64; ell + 1];
    for (j, flat) in flats.iter().enumerate() {
        chi[ell - flat.rank] += mu[j];
    }
    chi
}

/// prod (t - r) as ascending coefficients in t.
fn poly_from_roots(roots: &[u32], degree: usize) -> Vec<i64> {
    let mut p = vec![0i64; degree + 1];
    p[0] = 1;
    for (deg, &r) in roots.iter().enumerate() {
        let mut next = vec![0i64; degree + 1];
        for k in 0..=deg {
            next[k + 1] += p[k];
            next[k] -= (r as i64) * p[k];
        }
        p = next;
    }
    p
}

/// Whenever the oracle certifies a simple arrangement free, the
/// characteristic polynomial factors over the exponents.
#[test]
fn free_simple_arrangements_factor_combinatorially() {
    let instances = vec![
        boolean(&[1, 1, 1]),
        pencil(&[1, 1, 1]),
        pencil(&[1, 1, 1, 1]),
        catalog::monomial_rrl(1, 3).unwrap(),
        catalog::monomial_rrl(1, 4).unwrap(),
        catalog::monomial_rrl(2, 3).unwrap(),
        catalog::monomial_rrl(3, 3).unwrap(),
        catalog::interpolating(1, 3, 3).unwrap(),
        catalog::interpolating(3, 3, 3).unwrap(),
    ];
    let mut free_seen = 0usize;
    for arr in instances {
        let cert = exponents_oracle(&arr, None);
        if !cert.is_free() {
            continue;
        }
        free_seen += 1;
        let exps = cert.exponents().unwrap();
        let chi = characteristic_polynomial(&arr);
        let product = poly_from_roots(exps.as_slice(), arr.dimension());
        assert_eq!(
            chi, product,
            "factorization fails for {arr} with exponents {exps}"
        );
    }
    assert!(free_seen >= 8);
}

/// Free simple arrangements with 1 among their exponents restrict, with
/// the canonical multiplicity, to the remaining exponents.
#[test]
fn canonical_multiplicity_drops_the_unit_exponent() {
    for (r, l) in [(2u32, 3usize), (3, 3), (3, 4)] {
        let g = catalog::monomial_rrl(r, l).unwrap();
        let cert = exponents_oracle(&g, None);
        assert!(cert.is_free(), "G({r},{r},{l})");
        let exps = cert.exponents().unwrap();
        assert!(exps.contains(1));
        let expected = exps.without_element(1).unwrap();

        let ctx = g.ctx().clone();
        let mut h0 = vec![0i64; l];
        h0[0] = 1;
        h0[1] = -1;
        let h0 = g
            .find_form(&LinearForm::from_integers(&ctx, &h0).unwrap())
            .unwrap();
        let (kappa, _) = ziegler_multiplicity(&g, h0).unwrap();
        let restricted_cert = exponents_oracle(&kappa, None);
        assert!(restricted_cert.is_free(), "G({r},{r},{l}) restriction");
        assert_eq!(
            restricted_cert.exponents().unwrap(),
            &expected,
            "G({r},{r},{l})"
        );
        assert_eq!(kappa.total_multiplicity(), expected.sum());
    }
}

#[test]
fn full_monomial_family_members_have_the_expected_exponents() {
    // D3-type: G(2,2,3) has exponents {1, 2, 3}; the doubled braid it must
    // not collapse to would have {0, 3, 3}
    let d3 = catalog::monomial_rrl(2, 3).unwrap();
    let cert = exponents_oracle(&d3, None);
    assert!(cert.is_free());
    assert_eq!(cert.exponents().unwrap().as_slice(), &[1, 2, 3]);
    // the full monomial group G(3,1,3): exponents {1, 4, 7}
    let g313 = catalog::interpolating(3, 3, 3).unwrap();
    let cert = exponents_oracle(&g313, None);
    assert!(cert.is_free());
    assert_eq!(cert.exponents().unwrap().as_slice(), &[1, 4, 7]);
}

/// The monomial arrangement with a concentrated multiplicity localizes at
/// the span of the first two coordinates to a unit-multiplicity copy of the
/// two-dimensions-smaller monomial arrangement, under coordinate inclusion.
#[test]
fn concentrated_monomial_localizes_to_the_included_copy() {
    let (r, l) = (3u32, 5usize);
    let g = catalog::monomial_rrl(r, l).unwrap();
    let ctx = g.ctx().clone();
    let h0 = g
        .find_form(
            &LinearForm::new({
                let mut v = vec![FieldElement::zero(&ctx); l];
                v[0] = FieldElement::one(&ctx);
                v[1] = FieldElement::from_integer(&ctx, -1);
                v
            })
            .unwrap(),
        )
        .unwrap();
    let delta = catalog::with_concentrated(&g, h0, 3).unwrap();
    // X = intersection of ker x3..ker x5, spanned by e1, e2
    let mut span = Vec::new();
    for i in 0..2 {
        let mut e = vec![FieldElement::zero(&ctx); l];
        e[i] = FieldElement::one(&ctx);
        span.push(e);
    }
    let localized = delta.localize_vectors(&span);
    assert!(localized.support().all(|(_, h)| h.multiplicity == 1));
    let small = catalog::monomial_rrl(r, l - 2).unwrap();
    assert_eq!(localized.support_len(), small.support_len());
    for (_, h) in small.support() {
        let mut padded = vec![FieldElement::zero(&ctx); 2];
        for c in h.form.coeffs() {
            padded.push(c.embed_into(&ctx).unwrap());
        }
        let form = LinearForm::new(padded).unwrap();
        assert!(localized.find_form(&form).is_some(), "missing {form}");
    }
}

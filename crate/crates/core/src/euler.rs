//! Deletion/restriction triples with Euler multiplicities, iterated ordered
//! restrictions, and the canonical multiplicity on restrictions of simple
//! arrangements.

use rayon::prelude::*;

use crate::arrangement::{Hyperplane, LinearForm, Multiarrangement};
use crate::derivation::{exponents_oracle, FreenessCertificate, OracleCache};
use crate::error::{Error, Result};

use crate::lattice::Flat;
use crate::linalg::RowSpan;

/// Deletion of one unit of multiplicity at H0: the hyperplane is removed
/// entirely when its multiplicity was 1.
pub fn deletion(arr: &Multiarrangement, h0: usize) -> Result<Multiarrangement> {
    if h0 >= arr.hyperplanes().len() {
        return Err(Error::HyperplaneNotFound(format!("index {h0}")));
    }
    let m = arr.multiplicity(h0);
    if m == 0 {
        return Err(Error::MultiplicityZero(arr.form(h0).to_string()));
    }
    let entries = arr
        .support()
        .filter_map(|(i, h)| {
            let mult = if i == h0 { h.multiplicity - 1 } else { h.multiplicity };
            (mult > 0).then(|| Hyperplane {
                form: h.form.clone(),
                multiplicity: mult,
                label: h.label.clone(),
            })
        })
        .collect();
    Multiarrangement::new_labeled(arr.dimension(), arr.ctx(), entries)
}

/// The rank-2 localization at Y = H0 cap H_witness, essentialized to two
/// variables by expressing each normal in the reduced echelon basis of the
/// plane spanned by the two normals.
fn essential_rank_two(
    arr: &Multiarrangement,
    h0: usize,
    witness: usize,
) -> Result<(Multiarrangement, LinearForm)> {
    let ctx = arr.ctx();
    let mut plane = RowSpan::new(ctx, arr.dimension());
    plane.insert(arr.form(h0).coeffs().to_vec());
    plane.insert(arr.form(witness).coeffs().to_vec());
    if plane.rank() != 2 {
        return Err(Error::InvalidInput(
            "the pivot and the witness must be distinct hyperplanes".into(),
        ));
    }
    let pivots = plane.pivots().to_vec();
    let extract = |form: &LinearForm| -> Option<LinearForm> {
        if !plane.contains(form.coeffs()) {
            return None;
        }
        // rows are reduced, so the coordinates are just the pivot entries
        let a = form.coeffs()[pivots[0]].clone();
        let b = form.coeffs()[pivots[1]].clone();
        Some(LinearForm::new(vec![a, b]).expect("nonzero member of the plane"))
    };
    let mut entries = Vec::new();
    for (_, h) in arr.support() {
        if let Some(f) = extract(&h.form) {
            entries.push((f, h.multiplicity));
        }
    }
    let local = Multiarrangement::new(2, ctx, entries)?;
    let alpha0 = extract(arr.form(h0)).expect("pivot belongs to its own plane");
    Ok((local, alpha0))
}

fn euler_multiplicity_from_cert(
    cert: &FreenessCertificate,
    alpha0: &LinearForm,
) -> Result<u32> {
    if !cert.is_free() {
        return Err(Error::Internal(
            "rank-2 localizations are always free; oracle disagreed".into(),
        ));
    }
    let alpha0_poly = alpha0.to_polynomial(2);
    // Basis elements arrive in ascending degree order; the distinguished
    // generator is the first one outside alpha0 * Der(S).
    for theta in &cert.basis {
        if !theta.in_form_times_der(&alpha0_poly) {
            return Ok(theta.pdeg().expect("homogeneous basis element"));
        }
    }
    Err(Error::Internal(
        "no basis element outside alpha0 * Der(S); conforming basis must exist".into(),
    ))
}

/// Euler multiplicity of the restricted hyperplane Y = H0 cap H_witness:
/// the polynomial degree of the distinguished generator of the free rank-2
/// module D(A_Y, nu_Y). Depends only on that module.
pub fn euler_multiplicity(arr: &Multiarrangement, h0: usize, witness: usize) -> Result<u32> {
    if arr.multiplicity(h0) == 0 {
        return Err(Error::MultiplicityZero(arr.form(h0).to_string()));
    }
    let (local, alpha0) = essential_rank_two(arr, h0, witness)?;
    let cert = exponents_oracle(&local, None);
    euler_multiplicity_from_cert(&cert, &alpha0)
}

fn euler_multiplicity_cached(
    arr: &Multiarrangement,
    h0: usize,
    witness: usize,
    cache: &mut OracleCache,
) -> Result<u32> {
    let (local, alpha0) = essential_rank_two(arr, h0, witness)?;
    let cert = cache.certificate(&local);
    euler_multiplicity_from_cert(&cert, &alpha0)
}

/// (A'', nu*): the simple restriction with the Euler multiplicity attached
/// to every restricted hyperplane. Also returns the flat map (indices of A
/// above each Y, H0 included).
pub fn restriction_with_euler(
    arr: &Multiarrangement,
    h0: usize,
) -> Result<(Multiarrangement, Vec<Vec<usize>>)> {
    let (simple, groups) = arr.restrict_simple(h0)?;
    // independent per-hyperplane computations; merged in canonical order
    let mults: Vec<u32> = groups
        .par_iter()
        .map(|group| {
            let witness = *group.iter().find(|&&i| i != h0).expect("Y has a generator");
            euler_multiplicity(arr, h0, witness)
        })
        .collect::<Result<Vec<u32>>>()?;
    attach_multiplicities(simple, mults, groups)
}

/// Sequential variant sharing one oracle memo; used inside searches.
pub fn restriction_with_euler_cached(
    arr: &Multiarrangement,
    h0: usize,
    cache: &mut OracleCache,
) -> Result<(Multiarrangement, Vec<Vec<usize>>)> {
    let (simple, groups) = arr.restrict_simple(h0)?;
    let mut mults = Vec::with_capacity(groups.len());
    for group in &groups {
        let witness = *group.iter().find(|&&i| i != h0).expect("Y has a generator");
        mults.push(euler_multiplicity_cached(arr, h0, witness, cache)?);
    }
    attach_multiplicities(simple, mults, groups)
}

fn attach_multiplicities(
    simple: Multiarrangement,
    mults: Vec<u32>,
    groups: Vec<Vec<usize>>,
) -> Result<(Multiarrangement, Vec<Vec<usize>>)> {
    let entries = simple
        .hyperplanes()
        .iter()
        .zip(&mults)
        .map(|(h, &m)| Hyperplane {
            form: h.form.clone(),
            multiplicity: m,
            label: h.label.clone(),
        })
        .collect();
    // forms are distinct and already sorted, so the pairing with groups
    // survives reconstruction
    let restricted = Multiarrangement::new_labeled(simple.dimension(), simple.ctx(), entries)?;
    Ok((restricted, groups))
}

/// The triple of (A, nu) with respect to H0.
#[derive(Debug, Clone)]
pub struct Triple {
    pub original: Multiarrangement,
    pub deleted: Multiarrangement,
    pub restricted: Multiarrangement,
    /// indices of hyperplanes of A above each restricted hyperplane
    pub flat_map: Vec<Vec<usize>>,
    pub pivot: LinearForm,
}

pub fn triple(arr: &Multiarrangement, h0: usize) -> Result<Triple> {
    let deleted = deletion(arr, h0)?;
    let (restricted, flat_map) = restriction_with_euler(arr, h0)?;
    Ok(Triple {
        original: arr.clone(),
        deleted,
        restricted,
        flat_map,
        pivot: arr.form(h0).clone(),
    })
}

/// Triples commute with localization: the triple of (A_X, nu_X) at H equals
/// the componentwise localization of the triple of (A, nu) at H, including
/// the Euler multiplicities. Always true; recomputes both sides.
pub fn triple_localization_check(
    arr: &Multiarrangement,
    x: &Flat,
    h: usize,
) -> Result<bool> {
    if !x.containing.contains(&h) {
        return Err(Error::HyperplaneNotFound(format!(
            "hyperplane {} does not contain the flat",
            arr.form(h)
        )));
    }
    let whole = triple(arr, h)?;

    let local = arr.localize_span_rows(&x.normal_basis);
    let h_local = local
        .find_form(arr.form(h))
        .ok_or_else(|| Error::Internal("pivot survives localization".into()))?;
    let local_triple = triple(&local, h_local)?;

    // deleted members: (A')_X versus (A_X)'
    let deleted_localized = whole.deleted.localize_span_rows(&x.normal_basis);
    if !deleted_localized.equal_multiset(&local_triple.deleted) {
        return Ok(false);
    }

    // restricted members: keep Y above X, i.e. whose generators all lie in A_X
    let a_x_forms: Vec<&LinearForm> = local.support().map(|(_, hh)| &hh.form).collect();
    let mut kept = Vec::new();
    for (y_idx, group) in whole.flat_map.iter().enumerate() {
        // Y lies above X iff its generators do (h itself is in A_X already)
        let above = group
            .iter()
            .filter(|&&i| i != h)
            .all(|&i| a_x_forms.contains(&arr.form(i)));
        if above {
            kept.push((
                whole.restricted.form(y_idx).clone(),
                whole.restricted.multiplicity(y_idx),
            ));
        }
    }
    let restricted_localized =
        Multiarrangement::new(whole.restricted.dimension(), arr.ctx(), kept)?;
    Ok(restricted_localized.equal_multiset(&local_triple.restricted))
}

/// Pivot selection for ordered iterated restriction: scan A_Y in the given
/// total order, keeping hyperplanes that enlarge the normal span, until the
/// flat's rank is reached.
pub fn select_pivots(arr: &Multiarrangement, flat: &Flat, order: &[usize]) -> Result<Vec<usize>> {
    let ctx = arr.ctx();
    let mut span = RowSpan::new(ctx, arr.dimension());
    let mut pivots = Vec::new();
    for &i in order {
        if !flat.containing.contains(&i) {
            continue;
        }
        if span.insert(arr.form(i).coeffs().to_vec()) {
            pivots.push(i);
            if span.rank() == flat.rank {
                break;
            }
        }
    }
    if span.rank() != flat.rank {
        return Err(Error::FlatNotInLattice);
    }
    Ok(pivots)
}

/// Default total order: the arrangement's canonical hyperplane sort order.
pub fn canonical_order(arr: &Multiarrangement) -> Vec<usize> {
    arr.support().map(|(i, _)| i).collect()
}

/// Iterated Euler restriction onto a flat, along pivots chosen minimally
/// with respect to the given total order. The resulting multiplicity
/// depends on that order; it is an explicit input.
pub fn iterated_restriction(
    arr: &Multiarrangement,
    flat: &Flat,
    order: &[usize],
) -> Result<Multiarrangement> {
    let pivots = select_pivots(arr, flat, order)?;
    let mut current = arr.clone();
    // forms of the pending pivots, rewritten into each restriction's coordinates
    let mut pending: Vec<LinearForm> = pivots.iter().map(|&i| arr.form(i).clone()).collect();
    while !pending.is_empty() {
        let pivot_form = pending.remove(0);
        let idx = current
            .find_form(&pivot_form)
            .ok_or_else(|| Error::Internal("pivot image missing from restriction".into()))?;
        let (next, _) = restriction_with_euler(&current, idx)?;
        let basis = vec![pivot_form.coeffs().to_vec()];
        let piv = vec![pivot_form.pivot()];
        pending = pending
            .into_iter()
            .map(|f| {
                crate::arrangement::restrict_form(&f, &basis, &piv)
                    .ok_or_else(|| Error::Internal("independent pivots stay nonzero".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        current = next;
    }
    Ok(current)
}

/// Ziegler's canonical multiplicity kappa(Y) = |A_Y| - 1 on the restriction
/// of a simple arrangement; purely combinatorial from the flat map.
pub fn ziegler_multiplicity(
    arr: &Multiarrangement,
    h0: usize,
) -> Result<(Multiarrangement, Vec<Vec<usize>>)> {
    if !arr.is_simple() {
        return Err(Error::NotSimple);
    }
    let (simple, groups) = arr.restrict_simple(h0)?;
    let mults: Vec<u32> = groups.iter().map(|g| (g.len() - 1) as u32).collect();
    attach_multiplicities(simple, mults, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Ctx, FieldContext};
    use crate::lattice::flat_from_forms;

    fn q() -> Ctx {
        FieldContext::rational()
    }

    fn form(v: &[i64]) -> LinearForm {
        LinearForm::from_integers(&q(), v).unwrap()
    }

    fn ex218() -> Multiarrangement {
        let forms = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
        Multiarrangement::new(
            3,
            &q(),
            forms.iter().map(|f| (form(f), 2)).collect(),
        )
        .unwrap()
    }

    fn boolean2(m: [u32; 2]) -> Multiarrangement {
        Multiarrangement::new(
            2,
            &q(),
            vec![(form(&[1, 0]), m[0]), (form(&[0, 1]), m[1])],
        )
        .unwrap()
    }

    #[test]
    fn deletion_rules() {
        let a = boolean2([1, 1]);
        let h0 = a.find_form(&form(&[1, 0])).unwrap();
        let d = deletion(&a, h0).unwrap();
        assert_eq!(d.support_len(), 1);
        assert_eq!(d.total_multiplicity(), 1);

        let b = boolean2([2, 1]);
        let h0 = b.find_form(&form(&[1, 0])).unwrap();
        let d = deletion(&b, h0).unwrap();
        assert_eq!(d.support_len(), 2);
        assert_eq!(d.total_multiplicity(), 2);
        assert_eq!(d.total_multiplicity(), b.total_multiplicity() - 1);
    }

    #[test]
    fn euler_multiplicities_of_the_constant_multiplicity_example() {
        let a = ex218();
        // restriction at ker x gives (3, 2, 2)
        let h1 = a.find_form(&form(&[1, 0, 0])).unwrap();
        let (r1, _) = restriction_with_euler(&a, h1).unwrap();
        let mut m1: Vec<u32> = r1.support().map(|(_, h)| h.multiplicity).collect();
        m1.sort_unstable();
        assert_eq!(m1, vec![2, 2, 3]);
        // restriction at ker(y + z) gives (2, 2, 2, 2)
        let h2 = a.find_form(&form(&[0, 1, 1])).unwrap();
        let (r2, _) = restriction_with_euler(&a, h2).unwrap();
        let m2: Vec<u32> = r2.support().map(|(_, h)| h.multiplicity).collect();
        assert_eq!(m2, vec![2, 2, 2, 2]);
    }

    #[test]
    fn simple_arrangements_restrict_with_unit_multiplicity() {
        let c = q();
        let a = Multiarrangement::new(
            3,
            &c,
            vec![
                (form(&[1, 0, 0]), 1),
                (form(&[0, 1, 0]), 1),
                (form(&[1, 1, 0]), 1),
                (form(&[1, 0, 1]), 1),
                (form(&[0, 1, 1]), 1),
            ],
        )
        .unwrap();
        for (i, _) in a.support() {
            let (r, _) = restriction_with_euler(&a, i).unwrap();
            assert!(r.support().all(|(_, h)| h.multiplicity == 1));
        }
    }

    #[test]
    fn triple_of_boolean_two_lines() {
        let a = boolean2([1, 1]);
        let h0 = a.find_form(&form(&[1, 0])).unwrap();
        let t = triple(&a, h0).unwrap();
        assert_eq!(t.deleted.support_len(), 1);
        assert_eq!(t.restricted.support_len(), 1);
        assert_eq!(t.restricted.multiplicity(0), 1);
        assert_eq!(t.restricted.dimension(), 1);
    }

    #[test]
    fn triples_commute_with_localization_on_the_example() {
        let a = ex218();
        // X = ker x cap ker(x + z)
        let x = flat_from_forms(&a, &[form(&[1, 0, 0]), form(&[1, 0, 1])]).unwrap();
        let h = a.find_form(&form(&[1, 0, 0])).unwrap();
        assert!(x.containing.contains(&h));
        assert!(triple_localization_check(&a, &x, h).unwrap());
        // trivial flat: localization is the identity
        let center = flat_from_forms(
            &a,
            &[form(&[1, 0, 0]), form(&[0, 1, 0]), form(&[1, 0, 1])],
        )
        .unwrap();
        assert_eq!(center.rank, 3);
        for (i, _) in a.support() {
            assert!(triple_localization_check(&a, &center, i).unwrap());
        }
    }

    #[test]
    fn iterated_restriction_depends_on_the_order() {
        let a = ex218();
        let hx = form(&[1, 0, 0]);
        let hyz = form(&[0, 1, 1]);
        let y = flat_from_forms(&a, &[hx.clone(), hyz.clone()]).unwrap();
        assert_eq!(y.rank, 2);
        let ix = a.find_form(&hx).unwrap();
        let iyz = a.find_form(&hyz).unwrap();
        let others: Vec<usize> = a
            .support()
            .map(|(i, _)| i)
            .filter(|&i| i != ix && i != iyz)
            .collect();
        // ker x first
        let mut order1 = vec![ix, iyz];
        order1.extend(&others);
        let r1 = iterated_restriction(&a, &y, &order1).unwrap();
        assert_eq!(r1.dimension(), 1);
        assert_eq!(r1.support_len(), 1);
        assert_eq!(r1.multiplicity(0), 3);
        // ker(y + z) first
        let mut order2 = vec![iyz, ix];
        order2.extend(&others);
        let r2 = iterated_restriction(&a, &y, &order2).unwrap();
        assert_eq!(r2.multiplicity(0), 4);
    }

    #[test]
    fn rank_zero_flat_is_the_identity_restriction() {
        let a = ex218();
        let v = flat_from_forms(&a, &[]).unwrap();
        assert_eq!(v.rank, 0);
        let r = iterated_restriction(&a, &v, &canonical_order(&a)).unwrap();
        assert!(r.equal_multiset(&a));
    }

    #[test]
    fn ziegler_on_boolean() {
        let c = q();
        let a = Multiarrangement::new(
            3,
            &c,
            (0..3).map(|i| (LinearForm::coordinate(&c, 3, i), 1)).collect(),
        )
        .unwrap();
        let (k, _) = ziegler_multiplicity(&a, 0).unwrap();
        assert_eq!(k.support_len(), 2);
        assert!(k.support().all(|(_, h)| h.multiplicity == 1));
        // non-simple input is rejected
        let b = boolean2([2, 1]);
        assert!(ziegler_multiplicity(&b, 0).is_err());
    }
}

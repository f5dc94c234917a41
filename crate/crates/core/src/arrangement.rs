//! Multiarrangements: normalized hyperplanes with non-negative integer
//! multiplicities, defining polynomials, localizations, simple restrictions,
//! and products.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Ctx, FieldContext, FieldElement};
use crate::linalg::RowSpan;
use crate::poly::{Monomial, Polynomial};

/// A nonzero linear form, normalized so its first nonzero coefficient is 1.
/// Hyperplane equality is therefore bit-exact comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        let pivot = coeffs.iter().position(|c| !c.is_zero());
        let Some(pivot) = pivot else {
            return Err(Error::ZeroForm);
        };
        let inv = coeffs[pivot].inv()?;
        let coeffs = coeffs.iter().map(|c| c.mul(&inv)).collect();
        Ok(LinearForm { coeffs })
    }

    pub fn from_integers(ctx: &Ctx, values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| FieldElement::from_integer(ctx, v))
                .collect(),
        )
    }

    /// i-th coordinate form of an l-dimensional space.
    pub fn coordinate(ctx: &Ctx, dimension: usize, i: usize) -> Self {
        let mut coeffs = vec![FieldElement::zero(ctx); dimension];
        coeffs[i] = FieldElement::one(ctx);
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ctx(&self) -> &Ctx {
        self.coeffs[0].ctx()
    }

    /// Index of the first nonzero (and thus unit) coefficient.
    pub fn pivot(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("forms are nonzero")
    }

    pub fn eval(&self, vector: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero(self.ctx());
        for (c, v) in self.coeffs.iter().zip(vector) {
            if !c.is_zero() && !v.is_zero() {
                acc = acc.add(&c.mul(v));
            }
        }
        acc
    }

    pub fn vanishes_on(&self, vector: &[FieldElement]) -> bool {
        self.eval(vector).is_zero()
    }

    pub fn to_polynomial(&self, num_vars: usize) -> Polynomial {
        debug_assert_eq!(num_vars, self.dimension());
        Polynomial::from_terms(
            self.ctx(),
            num_vars,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial::var(num_vars, i), c.clone())),
        )
    }

    pub fn embed_into(&self, target: &Ctx) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed_into(target))
            .collect::<Result<Vec<_>>>()?;
        LinearForm::new(coeffs)
    }

    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.cmp_canonical(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.coeffs.len().cmp(&other.coeffs.len())
    }
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_canonical(other)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial(self.dimension()))
    }
}

/// Image of a form on the flat cut out by reduced echelon rows `basis` with
/// pivot columns `pivots`; coordinates on the flat are the non-pivot
/// variables in ascending order. Returns `None` when the form vanishes on
/// the flat (i.e. the hyperplane contains it).
pub fn restrict_form(
    form: &LinearForm,
    basis: &[Vec<FieldElement>],
    pivots: &[usize],
) -> Option<LinearForm> {
    let dim = form.dimension();
    let mut image = Vec::with_capacity(dim - pivots.len());
    for j in 0..dim {
        if pivots.contains(&j) {
            continue;
        }
        let mut c = form.coeffs[j].clone();
        for (row, &p) in basis.iter().zip(pivots) {
            if !form.coeffs[p].is_zero() && !row[j].is_zero() {
                c = c.sub(&form.coeffs[p].mul(&row[j]));
            }
        }
        image.push(c);
    }
    if image.iter().all(|c| c.is_zero()) {
        None
    } else {
        Some(LinearForm::new(image).expect("nonzero image"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub form: LinearForm,
    pub multiplicity: u32,
    pub label: Option<String>,
}

/// A central multiarrangement (A, nu) with canonical hyperplane order.
///
/// Hyperplanes with multiplicity 0 may sit in storage but are excluded from
/// the multiset view, the defining polynomial, and all lattice and triple
/// computations.
#[derive(Debug, Clone)]
pub struct Multiarrangement {
    dimension: usize,
    ctx: Ctx,
    hyperplanes: Vec<Hyperplane>,
}

impl Multiarrangement {
    pub fn empty(dimension: usize, ctx: &Ctx) -> Self {
        Multiarrangement {
            dimension,
            ctx: ctx.clone(),
            hyperplanes: Vec::new(),
        }
    }

    pub fn new(dimension: usize, ctx: &Ctx, entries: Vec<(LinearForm, u32)>) -> Result<Self> {
        Self::new_labeled(
            dimension,
            ctx,
            entries
                .into_iter()
                .map(|(form, multiplicity)| Hyperplane {
                    form,
                    multiplicity,
                    label: None,
                })
                .collect(),
        )
    }

    /// Normalizes forms, merges duplicate hyperplanes by summing their
    /// multiplicities, and sorts by the canonical coefficient sequence.
    pub fn new_labeled(dimension: usize, ctx: &Ctx, entries: Vec<Hyperplane>) -> Result<Self> {
        let mut merged: Vec<Hyperplane> = Vec::new();
        for h in entries {
            if h.form.dimension() != dimension {
                return Err(Error::InvalidInput(format!(
                    "form of length {} in a {}-dimensional arrangement",
                    h.form.dimension(),
                    dimension
                )));
            }
            if !h.form.ctx().compatible(ctx) {
                return Err(Error::ContextMismatch {
                    left: h.form.ctx().describe(),
                    right: ctx.describe(),
                });
            }
            match merged.iter_mut().find(|e| e.form == h.form) {
                Some(existing) => {
                    existing.multiplicity += h.multiplicity;
                    if existing.label.is_none() {
                        existing.label = h.label;
                    }
                }
                None => merged.push(h),
            }
        }
        merged.sort_by(|a, b| a.form.cmp_canonical(&b.form));
        Ok(Multiarrangement {
            dimension,
            ctx: ctx.clone(),
            hyperplanes: merged,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Hyperplanes of the multiset view: multiplicity at least 1.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Hyperplane)> {
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|(_, h)| h.multiplicity >= 1)
    }

    pub fn support_len(&self) -> usize {
        self.support().count()
    }

    /// |nu|: the order of the multiset.
    pub fn total_multiplicity(&self) -> u32 {
        self.support().map(|(_, h)| h.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.support_len() == 0
    }

    pub fn is_simple(&self) -> bool {
        self.support().all(|(_, h)| h.multiplicity == 1)
    }

    pub fn multiplicity(&self, idx: usize) -> u32 {
        self.hyperplanes[idx].multiplicity
    }

    pub fn form(&self, idx: usize) -> &LinearForm {
        &self.hyperplanes[idx].form
    }

    pub fn find_form(&self, form: &LinearForm) -> Option<usize> {
        self.hyperplanes.iter().position(|h| &h.form == form)
    }

    /// Q(A, nu) = prod alpha_H^nu(H), a polynomial of degree |nu|.
    pub fn defining_polynomial(&self) -> Polynomial {
        let mut q = Polynomial::one(&self.ctx, self.dimension);
        for (_, h) in self.support() {
            let alpha = h.form.to_polynomial(self.dimension);
            q = q.mul(&alpha.pow(h.multiplicity));
        }
        q
    }

    /// Rank of the normals of the multiset view.
    pub fn rank(&self) -> usize {
        let mut span = RowSpan::new(&self.ctx, self.dimension);
        for (_, h) in self.support() {
            span.insert(h.form.coeffs().to_vec());
        }
        span.rank()
    }

    /// Reduced echelon span of all support normals (the annihilator of the
    /// center T_A).
    pub fn normal_span(&self) -> RowSpan {
        let mut span = RowSpan::new(&self.ctx, self.dimension);
        for (_, h) in self.support() {
            span.insert(h.form.coeffs().to_vec());
        }
        span
    }

    /// Localization at a subspace U given by spanning vectors: the
    /// hyperplanes containing U, multiplicities unchanged.
    pub fn localize_vectors(&self, vectors: &[Vec<FieldElement>]) -> Multiarrangement {
        let kept = self
            .support()
            .filter(|(_, h)| vectors.iter().all(|v| h.form.vanishes_on(v)))
            .map(|(_, h)| h.clone())
            .collect();
        Multiarrangement {
            dimension: self.dimension,
            ctx: self.ctx.clone(),
            hyperplanes: kept,
        }
    }

    /// Localization at the flat whose normal span is given in reduced
    /// echelon form: keeps hyperplanes whose normal lies in that span.
    pub fn localize_span_rows(&self, rows: &[Vec<FieldElement>]) -> Multiarrangement {
        let mut span = RowSpan::new(&self.ctx, self.dimension);
        for r in rows {
            span.insert(r.clone());
        }
        let kept = self
            .support()
            .filter(|(_, h)| span.contains(h.form.coeffs()))
            .map(|(_, h)| h.clone())
            .collect();
        Multiarrangement {
            dimension: self.dimension,
            ctx: self.ctx.clone(),
            hyperplanes: kept,
        }
    }

    /// Simple restriction A^H0: the arrangement induced on H0 by the other
    /// hyperplanes, together with the flat map Y -> indices of hyperplanes
    /// of A lying above Y (H0 included).
    ///
    /// Coordinates on H0 are deterministic: the pivot coordinate of
    /// alpha_H0 is eliminated, the remaining variables survive in order.
    pub fn restrict_simple(&self, h0: usize) -> Result<(Multiarrangement, Vec<Vec<usize>>)> {
        if h0 >= self.hyperplanes.len() {
            return Err(Error::HyperplaneNotFound(format!("index {h0}")));
        }
        if self.hyperplanes[h0].multiplicity == 0 {
            return Err(Error::MultiplicityZero(self.hyperplanes[h0].form.to_string()));
        }
        let alpha0 = &self.hyperplanes[h0].form;
        let basis = vec![alpha0.coeffs().to_vec()];
        let pivots = vec![alpha0.pivot()];
        let mut images: Vec<(LinearForm, Vec<usize>)> = Vec::new();
        for (idx, h) in self.support() {
            if idx == h0 {
                continue;
            }
            let Some(image) = restrict_form(&h.form, &basis, &pivots) else {
                // form proportional to alpha0 cannot occur for a distinct
                // normalized hyperplane
                return Err(Error::Internal("duplicate hyperplane in restriction".into()));
            };
            match images.iter_mut().find(|(f, _)| *f == image) {
                Some((_, group)) => group.push(idx),
                None => images.push((image, vec![idx])),
            }
        }
        images.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        let mut groups = Vec::with_capacity(images.len());
        let mut hyperplanes = Vec::with_capacity(images.len());
        for (form, mut group) in images {
            group.push(h0);
            group.sort_unstable();
            groups.push(group);
            hyperplanes.push(Hyperplane {
                form,
                multiplicity: 1,
                label: None,
            });
        }
        Ok((
            Multiarrangement {
                dimension: self.dimension - 1,
                ctx: self.ctx.clone(),
                hyperplanes,
            },
            groups,
        ))
    }

    /// Product arrangement in V1 + V2 with multiplicity nu1 x nu2, so that
    /// the defining polynomials multiply in disjoint variables. Field
    /// contexts are merged into the smallest common cyclotomic field.
    pub fn product(&self, other: &Multiarrangement) -> Result<Multiarrangement> {
        let ctx = FieldContext::merge(&self.ctx, &other.ctx)?;
        let dim = self.dimension + other.dimension;
        let zero = FieldElement::zero(&ctx);
        let mut hyperplanes = Vec::new();
        for (_, h) in self.support() {
            let mut coeffs: Vec<FieldElement> = h
                .form
                .coeffs()
                .iter()
                .map(|c| c.embed_into(&ctx))
                .collect::<Result<_>>()?;
            coeffs.extend(std::iter::repeat_n(zero.clone(), other.dimension));
            hyperplanes.push(Hyperplane {
                form: LinearForm::new(coeffs)?,
                multiplicity: h.multiplicity,
                label: h.label.clone(),
            });
        }
        for (_, h) in other.support() {
            let mut coeffs = vec![zero.clone(); self.dimension];
            for c in h.form.coeffs() {
                coeffs.push(c.embed_into(&ctx)?);
            }
            hyperplanes.push(Hyperplane {
                form: LinearForm::new(coeffs)?,
                multiplicity: h.multiplicity,
                label: h.label.clone(),
            });
        }
        Multiarrangement::new_labeled(dim, &ctx, hyperplanes)
    }

    /// Multiset inclusion: nu_self(H) <= nu_other(H) for every hyperplane.
    pub fn sub_multiset_of(&self, other: &Multiarrangement) -> bool {
        if self.dimension != other.dimension || !self.ctx.compatible(&other.ctx) {
            return false;
        }
        self.support().all(|(_, h)| {
            other
                .find_form(&h.form)
                .is_some_and(|j| other.hyperplanes[j].multiplicity >= h.multiplicity)
        })
    }

    /// Equality of the multiset views.
    pub fn equal_multiset(&self, other: &Multiarrangement) -> bool {
        self.dimension == other.dimension
            && self.ctx.compatible(&other.ctx)
            && self.support_len() == other.support_len()
            && self.sub_multiset_of(other)
            && other.sub_multiset_of(self)
    }

    /// Adds one unit of multiplicity at the given form.
    pub fn add_unit(&self, form: &LinearForm) -> Result<Multiarrangement> {
        let mut hyperplanes = self.hyperplanes.clone();
        hyperplanes.push(Hyperplane {
            form: form.clone(),
            multiplicity: 1,
            label: None,
        });
        Multiarrangement::new_labeled(self.dimension, &self.ctx, hyperplanes)
    }

    /// Canonical serialization of the multiset view; bit-exact memo key.
    pub fn canonical_key(&self) -> String {
        use std::fmt::Write;
        let mut key = String::new();
        let field = match self.ctx.is_rational() {
            true => "Q".to_string(),
            false => format!("Z{}", self.ctx.order()),
        };
        write!(key, "d{};{};", self.dimension, field).unwrap();
        for (_, h) in self.support() {
            let coeffs: Vec<String> = h
                .form
                .coeffs()
                .iter()
                .map(|c| {
                    c.coeffs()
                        .iter()
                        .map(crate::field::format_rational)
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            write!(key, "[{}]x{};", coeffs.join("|"), h.multiplicity).unwrap();
        }
        key
    }
}

impl PartialEq for Multiarrangement {
    fn eq(&self, other: &Self) -> bool {
        self.equal_multiset(other)
    }
}

impl Eq for Multiarrangement {}

impl fmt::Display for Multiarrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} hyperplanes, |nu| = {}, dim {}, {})",
            self.support_len(),
            self.total_multiplicity(),
            self.dimension,
            self.ctx.describe()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn q() -> Ctx {
        FieldContext::rational()
    }

    pub(crate) fn ex218() -> Multiarrangement {
        // x^2 y^2 (x+y)^2 (x+z)^2 (y+z)^2
        let c = q();
        let forms = [
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
        ];
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
    fn build_normalizes_and_merges() {
        let c = q();
        let a = Multiarrangement::new(
            2,
            &c,
            vec![
                (LinearForm::from_integers(&c, &[1, 0]).unwrap(), 1),
                (LinearForm::from_integers(&c, &[2, 0]).unwrap(), 1),
            ],
        )
        .unwrap();
        assert_eq!(a.support_len(), 1);
        assert_eq!(a.total_multiplicity(), 2);
    }

    #[test]
    fn zero_form_is_rejected() {
        let c = q();
        assert!(LinearForm::from_integers(&c, &[0, 0, 0]).is_err());
    }

    #[test]
    fn example_arrangement_shape() {
        let a = ex218();
        assert_eq!(a.support_len(), 5);
        assert_eq!(a.total_multiplicity(), 10);
        assert!(!a.is_simple());
        assert_eq!(a.rank(), 3);
        assert_eq!(a.defining_polynomial().total_degree(), Some(10));
    }

    #[test]
    fn empty_arrangement() {
        let a = Multiarrangement::empty(3, &q());
        assert_eq!(a.total_multiplicity(), 0);
        assert!(a.defining_polynomial().is_constant());
        assert!(a.is_simple());
    }

    #[test]
    fn boolean_defining_polynomial() {
        let c = q();
        let a = Multiarrangement::new(
            2,
            &c,
            vec![
                (LinearForm::from_integers(&c, &[1, 0]).unwrap(), 2),
                (LinearForm::from_integers(&c, &[0, 1]).unwrap(), 3),
            ],
        )
        .unwrap();
        let x = LinearForm::from_integers(&c, &[1, 0]).unwrap().to_polynomial(2);
        let y = LinearForm::from_integers(&c, &[0, 1]).unwrap().to_polynomial(2);
        assert_eq!(a.defining_polynomial(), x.pow(2).mul(&y.pow(3)));
    }

    #[test]
    fn localization_at_subspace() {
        let a = ex218();
        let c = q();
        // U = ker x cap ker(y+z), spanned by (0, 1, -1).
        let u = vec![vec![
            FieldElement::zero(&c),
            FieldElement::one(&c),
            FieldElement::from_integer(&c, -1),
        ]];
        let loc = a.localize_vectors(&u);
        assert_eq!(loc.support_len(), 2);
        assert_eq!(loc.total_multiplicity(), 4);
        let forms: Vec<String> = loc.support().map(|(_, h)| h.form.to_string()).collect();
        assert!(forms.contains(&"x".to_string()));
        assert!(forms.contains(&"y + z".to_string()));
        // U = V localizes to the empty arrangement.
        let all = a.localize_vectors(&[
            vec![
                FieldElement::one(&c),
                FieldElement::zero(&c),
                FieldElement::zero(&c),
            ],
            vec![
                FieldElement::zero(&c),
                FieldElement::one(&c),
                FieldElement::zero(&c),
            ],
            vec![
                FieldElement::zero(&c),
                FieldElement::zero(&c),
                FieldElement::one(&c),
            ],
        ]);
        assert!(all.is_empty());
        // U = origin localizes to A itself.
        let origin: Vec<Vec<FieldElement>> = Vec::new();
        assert!(a.localize_vectors(&origin).equal_multiset(&a));
    }

    #[test]
    fn restriction_of_example_at_ker_x() {
        let a = ex218();
        let h0 = a
            .find_form(&LinearForm::from_integers(&q(), &[1, 0, 0]).unwrap())
            .unwrap();
        let (res, groups) = a.restrict_simple(h0).unwrap();
        assert_eq!(res.support_len(), 3);
        assert_eq!(res.dimension(), 2);
        // every group contains h0 and at least one other hyperplane
        for g in &groups {
            assert!(g.contains(&h0));
            assert!(g.len() >= 2);
        }
    }

    #[test]
    fn restriction_of_example_at_ker_y_plus_z() {
        let a = ex218();
        let h0 = a
            .find_form(&LinearForm::from_integers(&q(), &[0, 1, 1]).unwrap())
            .unwrap();
        let (res, _) = a.restrict_simple(h0).unwrap();
        assert_eq!(res.support_len(), 4);
    }

    #[test]
    fn boolean_restriction() {
        let c = q();
        let a = Multiarrangement::new(
            3,
            &c,
            (0..3)
                .map(|i| (LinearForm::coordinate(&c, 3, i), 1))
                .collect(),
        )
        .unwrap();
        let h0 = a
            .find_form(&LinearForm::coordinate(&c, 3, 0))
            .unwrap();
        let (res, _) = a.restrict_simple(h0).unwrap();
        assert_eq!(res.support_len(), 2);
    }

    #[test]
    fn product_counts_and_polynomial() {
        let c = q();
        let a = Multiarrangement::new(
            1,
            &c,
            vec![(LinearForm::from_integers(&c, &[1]).unwrap(), 2)],
        )
        .unwrap();
        let b = Multiarrangement::new(
            1,
            &c,
            vec![(LinearForm::from_integers(&c, &[1]).unwrap(), 3)],
        )
        .unwrap();
        let p = a.product(&b).unwrap();
        assert_eq!(p.dimension(), 2);
        assert_eq!(p.support_len(), 2);
        assert_eq!(p.total_multiplicity(), 5);
        // empty x empty = empty
        let e = Multiarrangement::empty(2, &c)
            .product(&Multiarrangement::empty(3, &c))
            .unwrap();
        assert_eq!(e.dimension(), 5);
        assert!(e.is_empty());
    }

    #[test]
    fn product_merges_fields() {
        let c3 = FieldContext::cyclotomic(3).unwrap();
        let q = q();
        let a = Multiarrangement::new(
            1,
            &q,
            vec![(LinearForm::from_integers(&q, &[1]).unwrap(), 1)],
        )
        .unwrap();
        let zeta = FieldElement::generator(&c3);
        let b = Multiarrangement::new(
            2,
            &c3,
            vec![(
                LinearForm::new(vec![FieldElement::one(&c3), zeta.neg()]).unwrap(),
                1,
            )],
        )
        .unwrap();
        let p = a.product(&b).unwrap();
        assert_eq!(p.ctx().order(), 3);
        assert_eq!(p.dimension(), 3);
        assert_eq!(p.support_len(), 2);
    }

    #[test]
    fn canonical_key_is_stable_under_input_order() {
        let c = q();
        let f1 = (LinearForm::from_integers(&c, &[1, 0, 0]).unwrap(), 2);
        let f2 = (LinearForm::from_integers(&c, &[0, 1, 1]).unwrap(), 1);
        let a = Multiarrangement::new(3, &c, vec![f1.clone(), f2.clone()]).unwrap();
        let b = Multiarrangement::new(3, &c, vec![f2, f1]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert!(a.equal_multiset(&b));
    }
}

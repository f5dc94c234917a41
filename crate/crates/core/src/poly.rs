//! Sparse multivariate polynomials over a [`FieldContext`], with graded
//! lexicographic term order (x1 > x2 > ... > xl).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Ctx, FieldElement};

/// Exponent vector; ordered graded-lex so that `BTreeMap`'s last key is the
/// leading monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given total degree, leading (graded-lex) first.
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if num_vars == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    let mut current = vec![0u32; num_vars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(Monomial(current.clone()));
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            rec(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, degree);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Ctx,
    num_vars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn zero(ctx: &Ctx, num_vars: usize) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, num_vars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(ctx, num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(num_vars), c);
        }
        p
    }

    pub fn one(ctx: &Ctx, num_vars: usize) -> Self {
        Self::constant(ctx, num_vars, FieldElement::one(ctx))
    }

    pub fn monomial(ctx: &Ctx, num_vars: usize, m: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(ctx, num_vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(ctx: &Ctx, num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = Self::zero(ctx, num_vars);
        for (m, c) in terms {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Terms in descending (leading-first) canonical order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&FieldElement> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Common degree of all terms, if the polynomial is homogeneous (zero
    /// counts as homogeneous of any degree and yields `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    fn add_term(&mut self, m: &Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                let sum = existing.add(c);
                if sum.is_zero() {
                    self.terms.remove(m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.num_vars);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = Polynomial::zero(&self.ctx, self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&ma.mul(mb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.num_vars);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx, self.num_vars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division with remainder by a single divisor (graded-lex reduction).
    pub fn divrem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lm, lc) = {
            let (m, c) = divisor.leading().expect("nonzero divisor");
            (m.clone(), c.clone())
        };
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut quot = Polynomial::zero(&self.ctx, self.num_vars);
        let mut rem = self.clone();
        loop {
            let hit = rem
                .terms
                .iter()
                .rev()
                .find(|(m, _)| lm.divides(m))
                .map(|(m, c)| (m.clone(), c.clone()));
            match hit {
                None => break,
                Some((m, c)) => {
                    let qm = m.div(&lm);
                    let qc = c.mul(&lc_inv);
                    quot.add_term(&qm, &qc);
                    rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
                }
            }
        }
        (quot, rem)
    }

    /// Whether `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Polynomial) -> bool {
        self.divrem(divisor).1.is_zero()
    }

    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Equality up to a nonzero scalar factor.
    pub fn proportional_to(&self, other: &Polynomial) -> bool {
        match (self.leading(), other.leading()) {
            (None, None) => true,
            (Some((ma, ca)), Some((mb, cb))) => {
                if ma != mb {
                    return false;
                }
                let scale = match cb.inv() {
                    Ok(inv) => ca.mul(&inv),
                    Err(_) => return false,
                };
                *self == other.scale(&scale)
            }
            _ => false,
        }
    }
}

/// Determinant of a square polynomial matrix by Laplace expansion,
/// memoized on column subsets.
pub fn determinant(rows: &[Vec<Polynomial>]) -> Polynomial {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        // Empty determinant is 1 by convention; caller supplies the context.
        panic!("determinant of empty matrix needs a context; handle upstream");
    }
    let ctx = rows[0][0].ctx().clone();
    let num_vars = rows[0][0].num_vars();
    let mut memo: std::collections::HashMap<u64, Polynomial> =
        std::collections::HashMap::new();

    fn minor(
        rows: &[Vec<Polynomial>],
        row: usize,
        colmask: u64,
        ctx: &Ctx,
        num_vars: usize,
        memo: &mut std::collections::HashMap<u64, Polynomial>,
    ) -> Polynomial {
        if colmask == 0 {
            return Polynomial::one(ctx, num_vars);
        }
        if let Some(hit) = memo.get(&colmask) {
            return hit.clone();
        }
        let mut acc = Polynomial::zero(ctx, num_vars);
        let mut sign_positive = true;
        for col in 0..rows.len() {
            if colmask & (1 << col) == 0 {
                continue;
            }
            let entry = &rows[row][col];
            if !entry.is_zero() {
                let sub = minor(rows, row + 1, colmask & !(1 << col), ctx, num_vars, memo);
                let term = entry.mul(&sub);
                acc = if sign_positive {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(colmask, acc.clone());
        acc
    }

    minor(rows, 0, (1u64 << n) - 1, &ctx, num_vars, &mut memo)
}

/// Variable names used for display: x, y, z, w in low dimension, x1..xn above.
pub fn var_name(num_vars: usize, i: usize) -> String {
    if num_vars <= 4 {
        ["x", "y", "z", "w"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let (neg, mag) = match c.as_rational() {
                Some(r) if r < &crate::field::Rational::from_integer(0.into()) => {
                    (true, c.neg())
                }
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            let coeff_str = if mag.is_one() && !is_const {
                String::new()
            } else if mag.as_rational().is_some() {
                format!("{mag}")
            } else {
                format!("({mag})")
            };
            let mut parts: Vec<String> = Vec::new();
            if !coeff_str.is_empty() {
                parts.push(coeff_str);
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    parts.push(var_name(self.num_vars, i));
                } else if e > 1 {
                    parts.push(format!("{}^{}", var_name(self.num_vars, i), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

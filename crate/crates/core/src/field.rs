//! Exact scalar arithmetic over the rationals and cyclotomic fields Q(zeta_r).
//!
//! Every scalar in this crate is a [`FieldElement`] tied to a [`FieldContext`]:
//! either plain arbitrary-precision rationals or residues modulo the r-th
//! cyclotomic polynomial. There is no floating point anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shared handle to an immutable field description.
pub type Ctx = Arc<FieldContext>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    /// Q(zeta_r), elements stored as residues modulo the r-th cyclotomic
    /// polynomial (coefficients of 1, zeta, ..., zeta^(phi(r)-1)).
    Cyclotomic {
        order: u32,
        /// Dense monic minimal polynomial, coefficients ascending, length phi(r)+1.
        minimal_polynomial: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    pub kind: FieldKind,
}

impl FieldContext {
    pub fn rational() -> Ctx {
        Arc::new(FieldContext {
            kind: FieldKind::Rational,
        })
    }

    pub fn cyclotomic(order: u32) -> Result<Ctx> {
        if order == 0 {
            return Err(Error::InvalidInput("cyclotomic order must be >= 1".into()));
        }
        Ok(Arc::new(FieldContext {
            kind: FieldKind::Cyclotomic {
                order,
                minimal_polynomial: cyclotomic_minimal_polynomial(order),
            },
        }))
    }

    /// Number of rational coordinates per element: 1 for Q, phi(r) for Q(zeta_r).
    pub fn degree(&self) -> usize {
        match &self.kind {
            FieldKind::Rational => 1,
            FieldKind::Cyclotomic {
                minimal_polynomial, ..
            } => minimal_polynomial.len() - 1,
        }
    }

    pub fn order(&self) -> u32 {
        match &self.kind {
            FieldKind::Rational => 1,
            FieldKind::Cyclotomic { order, .. } => *order,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, FieldKind::Rational)
    }

    pub fn compatible(&self, other: &FieldContext) -> bool {
        match (&self.kind, &other.kind) {
            (FieldKind::Rational, FieldKind::Rational) => true,
            (FieldKind::Cyclotomic { order: a, .. }, FieldKind::Cyclotomic { order: b, .. }) => {
                a == b
            }
            _ => false,
        }
    }

    /// Smallest common field containing both: Q(zeta_lcm(r,s)).
    pub fn merge(a: &Ctx, b: &Ctx) -> Result<Ctx> {
        if a.compatible(b) {
            return Ok(a.clone());
        }
        let m = a.order().lcm(&b.order());
        if m == 1 {
            Ok(FieldContext::rational())
        } else {
            FieldContext::cyclotomic(m)
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Cyclotomic { order, .. } => format!("Q(zeta_{order})"),
        }
    }
}

/// The r-th cyclotomic polynomial, dense coefficients ascending.
///
/// Computed by exact division: Phi_r = (x^r - 1) / prod_{d | r, d < r} Phi_d.
pub fn cyclotomic_minimal_polynomial(r: u32) -> Vec<Rational> {
    assert!(r >= 1, "cyclotomic order must be positive");
    let mut table: Vec<Option<Vec<Rational>>> = vec![None; (r + 1) as usize];
    for d in 1..=r {
        if !r.is_multiple_of(d) {
            continue;
        }
        // x^d - 1
        let mut num = vec![Rational::zero(); (d + 1) as usize];
        num[0] = -Rational::one();
        num[d as usize] = Rational::one();
        for e in 1..d {
            if d % e == 0 {
                let phi_e = table[e as usize].as_ref().expect("divisors visited in order");
                let (q, rem) = upoly_divrem(&num, phi_e);
                debug_assert!(upoly_is_zero(&rem));
                num = q;
            }
        }
        table[d as usize] = Some(num);
    }
    table[r as usize].take().expect("phi_r computed")
}

// ---------------------------------------------------------------------------
// Dense univariate helpers over Q (internal; used for cyclotomic reduction
// and extended-Euclid inversion).
// ---------------------------------------------------------------------------

fn upoly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if upoly_is_zero(a) || upoly_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[i + j] += ca * cb;
        }
    }
    upoly_trim(&mut out);
    out
}

fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem: Vec<Rational> = a.to_vec();
    upoly_trim(&mut rem);
    let mut div = b.to_vec();
    upoly_trim(&mut div);
    assert!(!div.is_empty(), "division by zero polynomial");
    let db = div.len() - 1;
    let lead = div[db].clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let c = &rem[da] / &lead;
        let shift = da - db;
        for (k, bc) in div.iter().enumerate() {
            if !bc.is_zero() {
                let t = &c * bc;
                rem[shift + k] -= t;
            }
        }
        quot[shift] = c;
        upoly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    upoly_trim(&mut quot);
    (quot, rem)
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g.
fn upoly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let one = vec![Rational::one()];
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    upoly_trim(&mut r0);
    upoly_trim(&mut r1);
    let mut s0 = one.clone();
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = one;
    while !r1.is_empty() {
        let (q, r) = upoly_divrem(&r0, &r1);
        let s = upoly_sub(&s0, &upoly_mul(&q, &s1));
        let t = upoly_sub(&t0, &upoly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    upoly_trim(&mut out);
    out
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// An exact scalar: a rational, or a residue in Q(zeta_r) with exactly
/// phi(r) rational coordinates (zero-padded).
#[derive(Debug, Clone)]
pub struct FieldElement {
    ctx: Ctx,
    coeffs: Vec<Rational>,
}

impl FieldElement {
    pub fn zero(ctx: &Ctx) -> Self {
        FieldElement {
            ctx: ctx.clone(),
            coeffs: vec![Rational::zero(); ctx.degree()],
        }
    }

    pub fn one(ctx: &Ctx) -> Self {
        let mut e = Self::zero(ctx);
        e.coeffs[0] = Rational::one();
        e
    }

    pub fn from_rational(ctx: &Ctx, value: Rational) -> Self {
        let mut e = Self::zero(ctx);
        e.coeffs[0] = value;
        e
    }

    pub fn from_integer(ctx: &Ctx, value: i64) -> Self {
        Self::from_rational(ctx, Rational::from_integer(BigInt::from(value)))
    }

    /// The canonical generator zeta of the context (1 for Q).
    pub fn generator(ctx: &Ctx) -> Self {
        match &ctx.kind {
            FieldKind::Rational => Self::one(ctx),
            FieldKind::Cyclotomic {
                minimal_polynomial, ..
            } => {
                let phi = minimal_polynomial.len() - 1;
                if phi == 1 {
                    // zeta = root of a linear polynomial: x = -c0.
                    Self::from_rational(ctx, -minimal_polynomial[0].clone())
                } else {
                    let mut coeffs = vec![Rational::zero(); phi];
                    coeffs[1] = Rational::one();
                    FieldElement {
                        ctx: ctx.clone(),
                        coeffs,
                    }
                }
            }
        }
    }

    pub fn from_coeffs(ctx: &Ctx, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != ctx.degree() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates for {}, got {}",
                ctx.degree(),
                ctx.describe(),
                coeffs.len()
            )));
        }
        Ok(FieldElement {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_compatible(&self, other: &FieldElement) {
        assert!(
            self.ctx.compatible(&other.ctx),
            "field context mismatch: {} vs {}",
            self.ctx.describe(),
            other.ctx.describe()
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.assert_compatible(other);
        match &self.ctx.kind {
            FieldKind::Rational => FieldElement {
                ctx: self.ctx.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            },
            FieldKind::Cyclotomic {
                minimal_polynomial, ..
            } => {
                let prod = upoly_mul(&self.coeffs, &other.coeffs);
                let (_, rem) = upoly_divrem(&prod, minimal_polynomial);
                let mut coeffs = rem;
                coeffs.resize(self.ctx.degree(), Rational::zero());
                FieldElement {
                    ctx: self.ctx.clone(),
                    coeffs,
                }
            }
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.ctx.kind {
            FieldKind::Rational => Ok(FieldElement {
                ctx: self.ctx.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            }),
            FieldKind::Cyclotomic {
                minimal_polynomial, ..
            } => {
                let (g, s, _) = upoly_ext_gcd(&self.coeffs, minimal_polynomial);
                // Phi_r is irreducible over Q, so the gcd is a nonzero constant.
                debug_assert_eq!(g.len(), 1);
                let scale = g[0].recip();
                let mut coeffs: Vec<Rational> = s.iter().map(|c| c * &scale).collect();
                coeffs.resize(self.ctx.degree(), Rational::zero());
                Ok(FieldElement {
                    ctx: self.ctx.clone(),
                    coeffs,
                })
            }
        }
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inv()?))
    }

    /// Checked arithmetic over possibly mismatched contexts.
    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.div(other)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.ctx.compatible(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.ctx.describe(),
                right: other.ctx.describe(),
            })
        }
    }

    pub fn pow(&self, mut n: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.ctx);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Embeds into a larger cyclotomic context via zeta_r -> zeta_m^(m/r).
    pub fn embed_into(&self, target: &Ctx) -> Result<FieldElement> {
        if self.ctx.compatible(target) {
            return Ok(FieldElement {
                ctx: target.clone(),
                coeffs: self.coeffs.clone(),
            });
        }
        if self.ctx.is_rational() {
            return Ok(FieldElement::from_rational(target, self.coeffs[0].clone()));
        }
        let r = self.ctx.order();
        let m = target.order();
        if !m.is_multiple_of(r) {
            return Err(Error::ContextMismatch {
                left: self.ctx.describe(),
                right: target.describe(),
            });
        }
        let step = FieldElement::generator(target).pow(m / r);
        let mut acc = FieldElement::zero(target);
        let mut power = FieldElement::one(target);
        for c in &self.coeffs {
            if !c.is_zero() {
                let term = power.mul(&FieldElement::from_rational(target, c.clone()));
                acc = acc.add(&term);
            }
            power = power.mul(&step);
        }
        Ok(acc)
    }

    /// Total order on coordinate vectors; canonical, not an order of the field.
    pub fn cmp_canonical(&self, other: &FieldElement) -> Ordering {
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.coeffs.len().cmp(&other.coeffs.len())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mut parts = s.splitn(2, '/');
    let numer = parts
        .next()
        .and_then(|p| p.trim().parse::<BigInt>().ok())
        .ok_or_else(|| Error::Parse(format!("invalid rational: {s:?}")))?;
    let denom = match parts.next() {
        Some(p) => p
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational: {s:?}")))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator: {s:?}")));
    }
    Ok(Rational::new(numer, denom))
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_rational() || self.as_rational().is_some() {
            return write!(f, "{}", format_rational(&self.coeffs[0]));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", format_rational(&mag))?;
                }
                if k == 1 {
                    write!(f, "zeta")?;
                } else {
                    write!(f, "zeta^{k}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn minimal_polynomials() {
        // Phi_1 = x - 1
        assert_eq!(cyclotomic_minimal_polynomial(1), vec![rat(-1, 1), rat(1, 1)]);
        // Phi_3 = x^2 + x + 1
        assert_eq!(
            cyclotomic_minimal_polynomial(3),
            vec![rat(1, 1), rat(1, 1), rat(1, 1)]
        );
        // Phi_6 = x^2 - x + 1, frozen from dividing x^6 - 1 by Phi_1 Phi_2 Phi_3.
        assert_eq!(
            cyclotomic_minimal_polynomial(6),
            vec![rat(1, 1), rat(-1, 1), rat(1, 1)]
        );
        // Phi_4 = x^2 + 1
        assert_eq!(
            cyclotomic_minimal_polynomial(4),
            vec![rat(1, 1), rat(0, 1), rat(1, 1)]
        );
        // Phi_12 = x^4 - x^2 + 1
        assert_eq!(
            cyclotomic_minimal_polynomial(12),
            vec![rat(1, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]
        );
    }

    #[test]
    fn rational_arithmetic() {
        let ctx = FieldContext::rational();
        let a = FieldElement::from_rational(&ctx, rat(2, 3));
        let b = FieldElement::from_rational(&ctx, rat(5, 6));
        assert_eq!(a.add(&b), FieldElement::from_rational(&ctx, rat(3, 2)));
    }

    #[test]
    fn zeta3_squares_to_minus_one_minus_zeta() {
        let ctx = FieldContext::cyclotomic(3).unwrap();
        let z = FieldElement::generator(&ctx);
        let sq = z.mul(&z);
        let expected =
            FieldElement::from_coeffs(&ctx, vec![rat(-1, 1), rat(-1, 1)]).unwrap();
        assert_eq!(sq, expected);
        // zeta^-1 = zeta^2 = -1 - zeta
        assert_eq!(z.inv().unwrap(), expected);
    }

    #[test]
    fn generator_has_exact_order() {
        for r in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let ctx = if r == 1 {
                FieldContext::rational()
            } else {
                FieldContext::cyclotomic(r).unwrap()
            };
            let z = FieldElement::generator(&ctx);
            assert!(z.pow(r).is_one(), "zeta_{}^{} != 1", r, r);
            for d in 1..r {
                if r % d == 0 {
                    assert!(!z.pow(d).is_one(), "zeta_{} has order dividing {}", r, d);
                }
            }
        }
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let q = FieldContext::rational();
        let c = FieldContext::cyclotomic(3).unwrap();
        let a = FieldElement::one(&q);
        let b = FieldElement::one(&c);
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let ctx = FieldContext::cyclotomic(5).unwrap();
        let z = FieldElement::generator(&ctx);
        assert!(z.div(&FieldElement::zero(&ctx)).is_err());
    }

    #[test]
    fn embedding_into_lcm_field() {
        let c3 = FieldContext::cyclotomic(3).unwrap();
        let c4 = FieldContext::cyclotomic(4).unwrap();
        let merged = FieldContext::merge(&c3, &c4).unwrap();
        assert_eq!(merged.order(), 12);
        let z3 = FieldElement::generator(&c3);
        let e = z3.embed_into(&merged).unwrap();
        assert!(e.pow(3).is_one());
        assert!(!e.is_one());
        // Embedding is a homomorphism on a sample product.
        let z3sq = z3.mul(&z3);
        assert_eq!(z3sq.embed_into(&merged).unwrap(), e.mul(&e));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn inverse_roundtrip(coeffs in proptest::collection::vec(-6i64..=6, 4)) {
            let ctx = FieldContext::cyclotomic(5).unwrap();
            let elt = FieldElement::from_coeffs(
                &ctx,
                coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect(),
            ).unwrap();
            if !elt.is_zero() {
                let inv = elt.inv().unwrap();
                proptest::prop_assert!(elt.mul(&inv).is_one());
            }
        }
    }
}

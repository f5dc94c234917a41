//! Versioned machine-readable documents: arrangements, certificates,
//! chains, restrictions, lattices. JSON on the wire; scalars travel as
//! "p/q" strings, cyclotomic elements as lists of phi(r) rational strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Hyperplane, LinearForm, Multiarrangement};
use crate::chains::{
    Chain, ChainKind, ChainStep, ChainVerification, SearchStats, SearchStatus, SearchVerdict,
    StepOp,
};
use crate::derivation::{
    Derivation, ExponentMultiset, FreenessCertificate, NotFreeWitness, Verdict,
};
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Ctx, FieldContext, FieldElement};
use crate::lattice::{Flat, Lattice};
use crate::poly::{Monomial, Polynomial};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarDoc {
    Rational(String),
    Cyclotomic(Vec<String>),
}

pub fn scalar_to_doc(value: &FieldElement) -> ScalarDoc {
    if value.ctx().is_rational() {
        ScalarDoc::Rational(format_rational(&value.coeffs()[0]))
    } else {
        ScalarDoc::Cyclotomic(value.coeffs().iter().map(format_rational).collect())
    }
}

pub fn scalar_from_doc(ctx: &Ctx, doc: &ScalarDoc) -> Result<FieldElement> {
    match doc {
        ScalarDoc::Rational(s) => Ok(FieldElement::from_rational(ctx, parse_rational(s)?)),
        ScalarDoc::Cyclotomic(coeffs) => {
            let values = coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            FieldElement::from_coeffs(ctx, values)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

pub fn field_to_doc(ctx: &Ctx) -> FieldDoc {
    if ctx.is_rational() {
        FieldDoc {
            kind: "rational".into(),
            order: None,
        }
    } else {
        FieldDoc {
            kind: "cyclotomic".into(),
            order: Some(ctx.order()),
        }
    }
}

pub fn field_from_doc(doc: &FieldDoc) -> Result<Ctx> {
    match doc.kind.as_str() {
        "rational" => Ok(FieldContext::rational()),
        "cyclotomic" => {
            let order = doc
                .order
                .ok_or_else(|| Error::Parse("cyclotomic field requires an order".into()))?;
            FieldContext::cyclotomic(order)
        }
        other => Err(Error::Parse(format!("unknown field kind {other:?}"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HyperplaneDoc {
    pub normal: Vec<ScalarDoc>,
    pub multiplicity: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArrangementDoc {
    pub version: u32,
    pub field: FieldDoc,
    pub dimension: usize,
    pub hyperplanes: Vec<HyperplaneDoc>,
}

pub fn arrangement_to_doc(arr: &Multiarrangement) -> ArrangementDoc {
    ArrangementDoc {
        version: FORMAT_VERSION,
        field: field_to_doc(arr.ctx()),
        dimension: arr.dimension(),
        hyperplanes: arr
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneDoc {
                normal: h.form.coeffs().iter().map(scalar_to_doc).collect(),
                multiplicity: h.multiplicity,
                label: h.label.clone(),
            })
            .collect(),
    }
}

pub fn arrangement_from_doc(doc: &ArrangementDoc) -> Result<Multiarrangement> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {}",
            doc.version
        )));
    }
    let ctx = field_from_doc(&doc.field)?;
    let hyperplanes = doc
        .hyperplanes
        .iter()
        .map(|h| {
            if h.normal.len() != doc.dimension {
                return Err(Error::Parse(format!(
                    "normal of length {} in dimension {}",
                    h.normal.len(),
                    doc.dimension
                )));
            }
            let coeffs = h
                .normal
                .iter()
                .map(|s| scalar_from_doc(&ctx, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(Hyperplane {
                form: LinearForm::new(coeffs)?,
                multiplicity: h.multiplicity,
                label: h.label.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Multiarrangement::new_labeled(doc.dimension, &ctx, hyperplanes)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub monomial: Vec<u32>,
    pub coefficient: ScalarDoc,
}

pub type PolyDoc = Vec<TermDoc>;

pub fn polynomial_to_doc(p: &Polynomial) -> PolyDoc {
    p.terms_desc()
        .map(|(m, c)| TermDoc {
            monomial: m.0.clone(),
            coefficient: scalar_to_doc(c),
        })
        .collect()
}

pub fn polynomial_from_doc(ctx: &Ctx, num_vars: usize, doc: &PolyDoc) -> Result<Polynomial> {
    let terms = doc
        .iter()
        .map(|t| {
            if t.monomial.len() != num_vars {
                return Err(Error::Parse("monomial arity mismatch".into()));
            }
            Ok((
                Monomial(t.monomial.clone()),
                scalar_from_doc(ctx, &t.coefficient)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_terms(ctx, num_vars, terms))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefiningPolynomialDoc {
    pub version: u32,
    pub degree: u32,
    pub polynomial: PolyDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub version: u32,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saito_scalar: Option<ScalarDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<PolyDoc>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
}

pub fn certificate_to_doc(cert: &FreenessCertificate) -> CertificateDoc {
    let basis = Some(
        cert.basis
            .iter()
            .map(|d: &Derivation| d.components().iter().map(polynomial_to_doc).collect())
            .collect(),
    );
    match &cert.verdict {
        Verdict::Free => CertificateDoc {
            version: FORMAT_VERSION,
            verdict: "free".into(),
            exponents: cert.exponents.as_ref().map(|e| e.as_slice().to_vec()),
            saito_scalar: cert.saito_scalar.as_ref().map(scalar_to_doc),
            basis,
            witness: None,
            degree_cap: None,
        },
        Verdict::NotFree(witness) => CertificateDoc {
            version: FORMAT_VERSION,
            verdict: "not_free".into(),
            exponents: None,
            saito_scalar: None,
            basis,
            witness: Some(match witness {
                NotFreeWitness::TooManyGenerators { degrees } => {
                    format!("more than l minimal generators, degrees {degrees:?}")
                }
                NotFreeWitness::DegreeSumExceeded { degrees, order } => format!(
                    "l minimal generators of degrees {degrees:?} exceed |nu| = {order}"
                ),
            }),
            degree_cap: None,
        },
        Verdict::Undetermined { degree_cap } => CertificateDoc {
            version: FORMAT_VERSION,
            verdict: "undetermined".into(),
            exponents: None,
            saito_scalar: None,
            basis,
            witness: None,
            degree_cap: Some(*degree_cap),
        },
    }
}

/// Restriction result: the restricted arrangement (multiplicities are the
/// Euler multiplicities) plus an explicit label -> multiplicity block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionDoc {
    pub version: u32,
    pub pivot: Vec<ScalarDoc>,
    pub arrangement: ArrangementDoc,
    pub euler_multiplicities: BTreeMap<String, u32>,
}

pub fn restriction_to_doc(pivot: &LinearForm, restricted: &Multiarrangement) -> RestrictionDoc {
    let width = restricted.support_len().to_string().len();
    let mut labeled = BTreeMap::new();
    let mut arrangement = arrangement_to_doc(restricted);
    for (pos, (storage_idx, h)) in restricted.support().enumerate() {
        let label = h
            .label
            .clone()
            .unwrap_or_else(|| format!("Y{:0width$}", pos + 1, width = width));
        arrangement.hyperplanes[storage_idx].label = Some(label.clone());
        labeled.insert(label, h.multiplicity);
    }
    RestrictionDoc {
        version: FORMAT_VERSION,
        pivot: pivot.coeffs().iter().map(scalar_to_doc).collect(),
        arrangement,
        euler_multiplicities: labeled,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleDoc {
    pub version: u32,
    pub original: ArrangementDoc,
    pub deleted: ArrangementDoc,
    pub restricted: RestrictionDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatDoc {
    pub rank: usize,
    pub containing: Vec<usize>,
    pub normal_basis: Vec<Vec<ScalarDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub version: u32,
    pub flats: Vec<FlatDoc>,
}

pub fn lattice_to_doc(lattice: &Lattice) -> LatticeDoc {
    LatticeDoc {
        version: FORMAT_VERSION,
        flats: lattice
            .flats
            .iter()
            .map(|f| FlatDoc {
                rank: f.rank,
                containing: f.containing.clone(),
                normal_basis: f
                    .normal_basis
                    .iter()
                    .map(|row| row.iter().map(scalar_to_doc).collect())
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepDoc {
    pub op: String,
    pub hyperplane: Vec<ScalarDoc>,
    pub exponents_before: Vec<u32>,
    pub exponents_after: Vec<u32>,
    pub restriction_exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsDoc {
    pub nodes_visited: u64,
    pub memo_hits: u64,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pool: Option<Vec<Vec<ScalarDoc>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity_cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope_note: Option<String>,
}

fn stats_to_doc(stats: &SearchStats) -> StatsDoc {
    StatsDoc {
        nodes_visited: stats.nodes_visited,
        memo_hits: stats.memo_hits,
        budget: stats.budget,
        pool: stats.pool.as_ref().map(|p| {
            p.iter()
                .map(|f| f.coeffs().iter().map(scalar_to_doc).collect())
                .collect()
        }),
        multiplicity_cap: stats.multiplicity_cap,
        scope_note: stats.scope_note.clone(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainDoc {
    pub version: u32,
    pub kind: String,
    pub status: String,
    pub target: ArrangementDoc,
    pub steps: Vec<StepDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_stats: Option<StatsDoc>,
}

pub fn chain_to_doc(chain: &Chain, verified: Option<bool>, stats: Option<&SearchStats>) -> ChainDoc {
    ChainDoc {
        version: FORMAT_VERSION,
        kind: match chain.kind {
            ChainKind::Inductive => "inductive".into(),
            ChainKind::Recursive => "recursive".into(),
        },
        status: "member".into(),
        target: arrangement_to_doc(&chain.target),
        steps: chain
            .steps
            .iter()
            .map(|s| StepDoc {
                op: match s.op {
                    StepOp::Add => "add".into(),
                    StepOp::Delete => "delete".into(),
                },
                hyperplane: s.hyperplane.coeffs().iter().map(scalar_to_doc).collect(),
                exponents_before: s.exponents_before.as_slice().to_vec(),
                exponents_after: s.exponents_after.as_slice().to_vec(),
                restriction_exponents: s.restriction_exponents.as_slice().to_vec(),
            })
            .collect(),
        verified,
        search_stats: stats.map(stats_to_doc),
    }
}

/// Search verdicts without a chain (non-member / budget exhausted) reuse the
/// chain document with an empty step list and the verdict in `status`.
pub fn verdict_to_doc(target: &Multiarrangement, verdict: &SearchVerdict) -> ChainDoc {
    match (&verdict.chain, verdict.status) {
        (Some(chain), SearchStatus::Member) => {
            let mut doc = chain_to_doc(chain, None, Some(&verdict.stats));
            doc.status = "member".into();
            doc
        }
        _ => ChainDoc {
            version: FORMAT_VERSION,
            kind: "none".into(),
            status: match verdict.status {
                SearchStatus::Member => "member",
                SearchStatus::NonMember => "non_member",
                SearchStatus::BudgetExhausted => "budget_exhausted",
            }
            .into(),
            target: arrangement_to_doc(target),
            steps: Vec::new(),
            verified: None,
            search_stats: Some(stats_to_doc(&verdict.stats)),
        },
    }
}

pub fn chain_from_doc(doc: &ChainDoc) -> Result<Chain> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {}",
            doc.version
        )));
    }
    let target = arrangement_from_doc(&doc.target)?;
    let ctx = target.ctx().clone();
    let kind = match doc.kind.as_str() {
        "inductive" => ChainKind::Inductive,
        "recursive" => ChainKind::Recursive,
        other => {
            return Err(Error::Parse(format!(
                "chain document of kind {other:?} carries no replayable chain"
            )))
        }
    };
    let steps = doc
        .steps
        .iter()
        .map(|s| {
            let op = match s.op.as_str() {
                "add" => StepOp::Add,
                "delete" => StepOp::Delete,
                other => return Err(Error::Parse(format!("unknown step op {other:?}"))),
            };
            let coeffs = s
                .hyperplane
                .iter()
                .map(|c| scalar_from_doc(&ctx, c))
                .collect::<Result<Vec<_>>>()?;
            Ok(ChainStep {
                op,
                hyperplane: LinearForm::new(coeffs)?,
                exponents_before: ExponentMultiset::new(s.exponents_before.clone()),
                exponents_after: ExponentMultiset::new(s.exponents_after.clone()),
                restriction_exponents: ExponentMultiset::new(s.restriction_exponents.clone()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Chain {
        kind,
        dimension: target.dimension(),
        ctx,
        steps,
        target,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub version: u32,
    pub ok: bool,
    pub steps: Vec<VerificationStepDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationStepDoc {
    pub index: usize,
    pub ok: bool,
    pub message: String,
}

pub fn verification_to_doc(v: &ChainVerification) -> VerificationDoc {
    VerificationDoc {
        version: FORMAT_VERSION,
        ok: v.ok,
        steps: v
            .steps
            .iter()
            .map(|s| VerificationStepDoc {
                index: s.index,
                ok: s.ok,
                message: s.message.clone(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HereditaryFlatDoc {
    pub rank: usize,
    pub containing: Vec<usize>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HereditaryDoc {
    pub version: u32,
    pub order: Vec<usize>,
    pub all_member: bool,
    pub any_budget_exhausted: bool,
    pub flats: Vec<HereditaryFlatDoc>,
}

/// Flat described by the forms cutting it out, for CLI arguments.
pub fn flat_doc(flat: &Flat) -> FlatDoc {
    FlatDoc {
        rank: flat.rank,
        containing: flat.containing.clone(),
        normal_basis: flat
            .normal_basis
            .iter()
            .map(|row| row.iter().map(scalar_to_doc).collect())
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Linear form expression parser ("x - y", "x1 - zeta^2*x3", "2/3*y + z").
// ---------------------------------------------------------------------------

/// Parses a linear form over the given context and dimension. Variables are
/// x1..xn always, plus x, y, z, w when the dimension is at most 4.
/// Coefficients are rationals and powers of `zeta` combined with `*`.
pub fn parse_linear_form(ctx: &Ctx, dimension: usize, input: &str) -> Result<LinearForm> {
    let mut coeffs = vec![FieldElement::zero(ctx); dimension];
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty linear form".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut chars = text.chars().peekable();
    // leading sign
    if let Some(&c) = chars.peek() {
        if c == '-' {
            negative = true;
            chars.next();
        } else if c == '+' {
            chars.next();
        }
    }
    let mut prev: Option<char> = None;
    for c in chars {
        if (c == '+' || c == '-') && prev.is_some_and(|p| p != '^' && p != '*' && p != '/') {
            terms.push((negative, std::mem::take(&mut current)));
            negative = c == '-';
        } else {
            current.push(c);
        }
        prev = Some(c);
    }
    terms.push((negative, current));

    for (neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {input:?}")));
        }
        let mut coefficient = FieldElement::one(ctx);
        let mut var_index: Option<usize> = None;
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {input:?}")));
            }
            if let Some(idx) = parse_variable(factor, dimension) {
                if var_index.is_some() {
                    return Err(Error::Parse(format!(
                        "term with two variables in {input:?}"
                    )));
                }
                var_index = Some(idx);
            } else if let Some(rest) = factor.strip_prefix("zeta") {
                let power: u32 = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad zeta power in {input:?}")))?
                };
                coefficient = coefficient.mul(&FieldElement::generator(ctx).pow(power));
            } else {
                let r = parse_rational(factor)?;
                coefficient = coefficient.mul(&FieldElement::from_rational(ctx, r));
            }
        }
        let idx = var_index
            .ok_or_else(|| Error::Parse(format!("term without a variable in {input:?}")))?;
        if neg {
            coefficient = coefficient.neg();
        }
        coeffs[idx] = coeffs[idx].add(&coefficient);
    }
    LinearForm::new(coeffs)
}

fn parse_variable(token: &str, dimension: usize) -> Option<usize> {
    if dimension <= 4 {
        match token {
            "x" => return Some(0),
            "y" if dimension >= 2 => return Some(1),
            "z" if dimension >= 3 => return Some(2),
            "w" if dimension >= 4 => return Some(3),
            _ => {}
        }
    }
    let rest = token.strip_prefix('x')?;
    let i: usize = rest.parse().ok()?;
    (1 <= i && i <= dimension).then(|| i - 1)
}

/// Parses a list of linear forms separated by `;` or `,` at the top level
/// (commas inside a form are not possible in this grammar).
pub fn parse_form_list(ctx: &Ctx, dimension: usize, input: &str) -> Result<Vec<LinearForm>> {
    input
        .split([';', ','])
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| parse_linear_form(ctx, dimension, s))
        .collect()
}

/// Parses spanning vectors: coordinates separated by commas, vectors by
/// semicolons, e.g. "1,0,0; 0,1,-1".
pub fn parse_span(ctx: &Ctx, dimension: usize, input: &str) -> Result<Vec<Vec<FieldElement>>> {
    input
        .split(';')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|vector| {
            let coords = vector
                .split(',')
                .map(|c| Ok(FieldElement::from_rational(ctx, parse_rational(c)?)))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != dimension {
                return Err(Error::Parse(format!(
                    "vector of length {} in dimension {}",
                    coords.len(),
                    dimension
                )));
            }
            Ok(coords)
        })
        .collect()
}

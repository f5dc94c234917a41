//! Human-readable rendering of the machine documents.

use multiarr_core::document::{
    ArrangementDoc, CertificateDoc, ChainDoc, DefiningPolynomialDoc, HereditaryDoc, LatticeDoc,
    RestrictionDoc, ScalarDoc, TripleDoc, VerificationDoc,
};

fn scalar(s: &ScalarDoc) -> String {
    match s {
        ScalarDoc::Rational(r) => r.clone(),
        ScalarDoc::Cyclotomic(coeffs) => format!("[{}]", coeffs.join(", ")),
    }
}

fn normal(coeffs: &[ScalarDoc]) -> String {
    let parts: Vec<String> = coeffs.iter().map(scalar).collect();
    format!("({})", parts.join(", "))
}

pub fn arrangement(doc: &ArrangementDoc) -> String {
    let mut out = String::new();
    let field = match doc.field.kind.as_str() {
        "rational" => "Q".to_string(),
        _ => format!("Q(zeta_{})", doc.field.order.unwrap_or(0)),
    };
    let total: u32 = doc.hyperplanes.iter().map(|h| h.multiplicity).sum();
    out.push_str(&format!(
        "arrangement: dim {}, field {}, {} hyperplanes, |nu| = {}\n",
        doc.dimension,
        field,
        doc.hyperplanes.len(),
        total
    ));
    for (i, h) in doc.hyperplanes.iter().enumerate() {
        out.push_str(&format!(
            "  [{i}] {} x{}{}\n",
            normal(&h.normal),
            h.multiplicity,
            h.label
                .as_ref()
                .map(|l| format!("  ({l})"))
                .unwrap_or_default()
        ));
    }
    out
}

pub fn defining_polynomial(doc: &DefiningPolynomialDoc) -> String {
    let terms: Vec<String> = doc
        .polynomial
        .iter()
        .map(|t| {
            let exps: Vec<String> = t.monomial.iter().map(|e| e.to_string()).collect();
            format!("{}*x^({})", scalar(&t.coefficient), exps.join(","))
        })
        .collect();
    format!(
        "Q: degree {}, {} terms\n{}\n",
        doc.degree,
        doc.polynomial.len(),
        terms.join(" + ")
    )
}

pub fn lattice(doc: &LatticeDoc) -> String {
    let mut out = format!("lattice: {} flats\n", doc.flats.len());
    for f in &doc.flats {
        out.push_str(&format!(
            "  rank {} containing {:?}\n",
            f.rank, f.containing
        ));
    }
    out
}

pub fn certificate(doc: &CertificateDoc) -> String {
    let mut out = format!("verdict: {}\n", doc.verdict);
    if let Some(exps) = &doc.exponents {
        out.push_str(&format!("exponents: {exps:?}\n"));
    }
    if let Some(c) = &doc.saito_scalar {
        out.push_str(&format!("saito scalar: {}\n", scalar(c)));
    }
    if let Some(w) = &doc.witness {
        out.push_str(&format!("witness: {w}\n"));
    }
    if let Some(cap) = doc.degree_cap {
        out.push_str(&format!("degree cap reached: {cap}\n"));
    }
    out
}

pub fn restriction(doc: &RestrictionDoc) -> String {
    let mut out = format!("restriction at {}\n", normal(&doc.pivot));
    out.push_str(&arrangement(&doc.arrangement));
    out.push_str("euler multiplicities:\n");
    for (label, m) in &doc.euler_multiplicities {
        out.push_str(&format!("  {label}: {m}\n"));
    }
    out
}

pub fn triple(doc: &TripleDoc) -> String {
    format!(
        "triple\n-- original --\n{}-- deleted --\n{}-- restricted --\n{}",
        arrangement(&doc.original),
        arrangement(&doc.deleted),
        restriction(&doc.restricted)
    )
}

pub fn chain(doc: &ChainDoc) -> String {
    let mut out = format!("status: {} (kind: {})\n", doc.status, doc.kind);
    for (i, s) in doc.steps.iter().enumerate() {
        out.push_str(&format!(
            "  step {i}: {} {}  exp {:?} -> {:?}  (restriction {:?})\n",
            s.op, normal(&s.hyperplane), s.exponents_before, s.exponents_after,
            s.restriction_exponents
        ));
    }
    if let Some(v) = doc.verified {
        out.push_str(&format!("verified: {v}\n"));
    }
    if let Some(st) = &doc.search_stats {
        out.push_str(&format!(
            "search: {} nodes, {} memo hits, budget {}\n",
            st.nodes_visited, st.memo_hits, st.budget
        ));
        if let Some(note) = &st.scope_note {
            out.push_str(&format!("scope: {note}\n"));
        }
    }
    out
}

pub fn verification(doc: &VerificationDoc) -> String {
    let mut out = format!(
        "chain verification: {}\n",
        if doc.ok { "PASS" } else { "FAIL" }
    );
    for s in &doc.steps {
        out.push_str(&format!(
            "  step {}: {} {}\n",
            s.index,
            if s.ok { "ok " } else { "FAIL" },
            s.message
        ));
    }
    out
}

pub fn hereditary(doc: &HereditaryDoc) -> String {
    let mut out = format!(
        "hereditary inductive check (order {:?}): {}\n",
        doc.order,
        if doc.all_member {
            "all restrictions inductively free"
        } else if doc.any_budget_exhausted {
            "inconclusive (budget exhausted on some flat)"
        } else {
            "some restriction is not inductively free"
        }
    );
    for f in &doc.flats {
        out.push_str(&format!(
            "  rank {} flat {:?}: {}{}\n",
            f.rank,
            f.containing,
            f.status,
            f.exponents
                .as_ref()
                .map(|e| format!(" exp {e:?}"))
                .unwrap_or_default()
        ));
    }
    out
}

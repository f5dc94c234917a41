//! Named constructions: empty and Boolean arrangements, the monomial
//! reflection arrangements G(r,r,l), the interpolating family between
//! G(r,r,l) and G(r,1,l), concentrated multiplicities, and worked-example
//! fixtures with their labeled pivots and flats.

use crate::arrangement::{Hyperplane, LinearForm, Multiarrangement};
use crate::error::{Error, Result};
use crate::field::{Ctx, FieldContext, FieldElement};

/// The empty arrangement in dimension l over Q.
pub fn empty(dimension: usize) -> Multiarrangement {
    Multiarrangement::empty(dimension, &FieldContext::rational())
}

/// Coordinate hyperplanes with unit multiplicity.
pub fn boolean(dimension: usize) -> Multiarrangement {
    let ctx = FieldContext::rational();
    Multiarrangement::new_labeled(
        dimension,
        &ctx,
        (0..dimension)
            .map(|i| Hyperplane {
                form: LinearForm::coordinate(&ctx, dimension, i),
                multiplicity: 1,
                label: Some(format!("x{}", i + 1)),
            })
            .collect(),
    )
    .expect("coordinate forms are nonzero")
}

fn rrl_context(r: u32) -> Ctx {
    // zeta_1 = 1 and zeta_2 = -1 are rational; keep the prime field there.
    if r <= 2 {
        FieldContext::rational()
    } else {
        FieldContext::cyclotomic(r).expect("r >= 1")
    }
}

/// The reflection arrangement of G(r, r, l): hyperplanes
/// ker(x_i - zeta^t x_j) for i < j and all r-th roots of unity, over
/// Q(zeta_r). Enumeration order (i, j, t) is lexicographic.
pub fn monomial_rrl(r: u32, dimension: usize) -> Result<Multiarrangement> {
    if r < 1 || dimension < 2 {
        return Err(Error::InvalidInput(
            "monomial arrangement requires r >= 1 and l >= 2".into(),
        ));
    }
    let ctx = rrl_context(r);
    // the generator of the prime field is 1, so r = 2 needs -1 explicitly
    let zeta = if r == 2 {
        FieldElement::from_integer(&ctx, -1)
    } else {
        FieldElement::generator(&ctx)
    };
    let mut hyperplanes = Vec::new();
    for i in 0..dimension {
        for j in (i + 1)..dimension {
            for t in 0..r {
                let mut coeffs = vec![FieldElement::zero(&ctx); dimension];
                coeffs[i] = FieldElement::one(&ctx);
                coeffs[j] = zeta.pow(t).neg();
                hyperplanes.push(Hyperplane {
                    form: LinearForm::new(coeffs)?,
                    multiplicity: 1,
                    label: Some(format!("H_{{{},{}}}(z^{})", i + 1, j + 1, t)),
                });
            }
        }
    }
    Multiarrangement::new_labeled(dimension, &ctx, hyperplanes)
}

/// The interpolating family: G(r, r, l) together with the first k
/// coordinate hyperplanes. k = 0 gives G(r,r,l); k = l gives G(r,1,l).
pub fn interpolating(k: usize, dimension: usize, r: u32) -> Result<Multiarrangement> {
    if k > dimension {
        return Err(Error::InvalidInput("k must satisfy 0 <= k <= l".into()));
    }
    let base = monomial_rrl(r, dimension)?;
    let ctx = base.ctx().clone();
    let mut hyperplanes: Vec<Hyperplane> = base.hyperplanes().to_vec();
    for i in 0..k {
        hyperplanes.push(Hyperplane {
            form: LinearForm::coordinate(&ctx, dimension, i),
            multiplicity: 1,
            label: Some(format!("H_{}", i + 1)),
        });
    }
    Multiarrangement::new_labeled(dimension, &ctx, hyperplanes)
}

/// The multiplicity concentrated at H0: m0 there, 1 elsewhere.
pub fn with_concentrated(arr: &Multiarrangement, h0: usize, m0: u32) -> Result<Multiarrangement> {
    if !arr.is_simple() {
        return Err(Error::NotSimple);
    }
    if m0 <= 1 {
        return Err(Error::InvalidInput(
            "concentrated multiplicity requires m0 > 1".into(),
        ));
    }
    let entries = arr
        .support()
        .map(|(i, h)| Hyperplane {
            form: h.form.clone(),
            multiplicity: if i == h0 { m0 } else { 1 },
            label: h.label.clone(),
        })
        .collect();
    Multiarrangement::new_labeled(arr.dimension(), arr.ctx(), entries)
}

/// A catalog fixture: an arrangement plus the labeled hyperplanes and flats
/// used in the worked examples (flats given by the forms cutting them out).
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub arrangement: Multiarrangement,
    pub pivots: Vec<(String, LinearForm)>,
    pub flats: Vec<(String, Vec<LinearForm>)>,
}

/// The rank-3 constant-multiplicity example with Q = x^2 y^2 (x+y)^2 (x+z)^2 (y+z)^2.
pub fn example_constant_multiplicity() -> Fixture {
    let ctx = FieldContext::rational();
    let forms: Vec<LinearForm> = [
        [1i64, 0, 0],
        [0, 1, 0],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
    ]
    .iter()
    .map(|f| LinearForm::from_integers(&ctx, f).unwrap())
    .collect();
    let arrangement = Multiarrangement::new(
        3,
        &ctx,
        forms.iter().map(|f| (f.clone(), 2)).collect(),
    )
    .unwrap();
    let h1 = forms[0].clone();
    let h2 = forms[4].clone();
    Fixture {
        name: "ex218".into(),
        description: "rank-3 multiarrangement with constant multiplicity 2 on 5 planes".into(),
        arrangement,
        pivots: vec![("H1".into(), h1.clone()), ("H2".into(), h2.clone())],
        flats: vec![("Y".into(), vec![h1, h2])],
    }
}

/// G(3,3,3) with the multiplicity concentrated at ker(x - y).
pub fn example_concentrated(m1: u32) -> Result<Fixture> {
    let simple = monomial_rrl(3, 3)?;
    let ctx = simple.ctx().clone();
    let h1 = LinearForm::from_integers(&ctx, &[1, -1, 0])?;
    let h2 = LinearForm::from_integers(&ctx, &[1, 0, -1])?;
    let idx = simple
        .find_form(&h1)
        .ok_or_else(|| Error::Internal("ker(x-y) belongs to G(3,3,3)".into()))?;
    let arrangement = with_concentrated(&simple, idx, m1)?;
    Ok(Fixture {
        name: "ex219".into(),
        description: format!("G(3,3,3) with multiplicity {m1} concentrated at ker(x-y)"),
        arrangement,
        pivots: vec![("H1".into(), h1.clone()), ("H2".into(), h2.clone())],
        flats: vec![("Y".into(), vec![h1, h2])],
    })
}

/// G(r,r,l) with the pivot ker(x1 - x2) and the localization flats of the
/// kappa-table analysis: X cut out by the last l-2 coordinates, and its
/// intersection with the pivot.
pub fn example_monomial_kappa(r: u32, dimension: usize) -> Result<Fixture> {
    let arrangement = monomial_rrl(r, dimension)?;
    let ctx = arrangement.ctx().clone();
    let mut h0 = vec![0i64; dimension];
    h0[0] = 1;
    h0[1] = -1;
    let h0 = LinearForm::from_integers(&ctx, &h0)?;
    let coords: Vec<LinearForm> = (2..dimension)
        .map(|i| LinearForm::coordinate(&ctx, dimension, i))
        .collect();
    let mut with_pivot = vec![h0.clone()];
    with_pivot.extend(coords.iter().cloned());
    Ok(Fixture {
        name: format!("grrl {r} {dimension}"),
        description: format!("reflection arrangement of G({r},{r},{dimension})"),
        arrangement,
        pivots: vec![("H0".into(), h0)],
        flats: vec![
            ("X".into(), coords),
            ("X_res".into(), with_pivot),
        ],
    })
}

/// The interpolating arrangement with the pivot ker(x1 - x2), the rank-3
/// flat Z cut out by the last three coordinates, and X = H0 cap Z.
pub fn example_interpolating_kappa(k: usize, dimension: usize, r: u32) -> Result<Fixture> {
    if dimension < 3 {
        return Err(Error::InvalidInput("need l >= 3".into()));
    }
    let arrangement = interpolating(k, dimension, r)?;
    let ctx = arrangement.ctx().clone();
    let mut h0 = vec![0i64; dimension];
    h0[0] = 1;
    h0[1] = -1;
    let h0 = LinearForm::from_integers(&ctx, &h0)?;
    let z: Vec<LinearForm> = (dimension - 3..dimension)
        .map(|i| LinearForm::coordinate(&ctx, dimension, i))
        .collect();
    let mut x = vec![h0.clone()];
    x.extend(z.iter().cloned());
    Ok(Fixture {
        name: format!("akl {k} {dimension} {r}"),
        description: format!("interpolating arrangement A^{k}_{dimension}({r})"),
        arrangement,
        pivots: vec![("H0".into(), h0)],
        flats: vec![("Z".into(), z), ("X".into(), x)],
    })
}

/// The worked examples as labeled fixtures with default parameters.
pub fn worked_examples() -> Vec<Fixture> {
    vec![
        example_constant_multiplicity(),
        example_concentrated(2).expect("ex219 builds"),
        example_monomial_kappa(3, 5).expect("grrl fixture builds"),
        example_interpolating_kappa(1, 5, 3).expect("akl fixture builds"),
    ]
}

/// Catalog registry for the CLI: name, parameter arity, description.
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "empty",
            params: "l",
            description: "empty arrangement in dimension l",
        },
        CatalogEntry {
            name: "boolean",
            params: "l",
            description: "coordinate hyperplanes in dimension l",
        },
        CatalogEntry {
            name: "grrl",
            params: "r l",
            description: "reflection arrangement of G(r,r,l) over Q(zeta_r)",
        },
        CatalogEntry {
            name: "gr1l",
            params: "r l",
            description: "reflection arrangement of G(r,1,l)",
        },
        CatalogEntry {
            name: "akl",
            params: "k l r",
            description: "interpolating arrangement between G(r,r,l) and G(r,1,l)",
        },
        CatalogEntry {
            name: "ex218",
            params: "",
            description: "constant multiplicity 2 on x, y, x+y, x+z, y+z",
        },
        CatalogEntry {
            name: "ex219",
            params: "m1",
            description: "G(3,3,3) with multiplicity m1 concentrated at ker(x-y)",
        },
    ]
}

/// Builds a catalog arrangement by name and integer parameters.
pub fn build_entry(name: &str, params: &[u32]) -> Result<Multiarrangement> {
    let need = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "catalog entry {name} expects {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match name {
        "empty" => {
            need(1)?;
            Ok(empty(params[0] as usize))
        }
        "boolean" => {
            need(1)?;
            Ok(boolean(params[0] as usize))
        }
        "grrl" => {
            need(2)?;
            monomial_rrl(params[0], params[1] as usize)
        }
        "gr1l" => {
            need(2)?;
            interpolating(params[1] as usize, params[1] as usize, params[0])
        }
        "akl" => {
            need(3)?;
            interpolating(params[0] as usize, params[1] as usize, params[2])
        }
        "ex218" => {
            need(0)?;
            Ok(example_constant_multiplicity().arrangement)
        }
        "ex219" => {
            need(1)?;
            Ok(example_concentrated(params[0])?.arrangement)
        }
        _ => Err(Error::InvalidInput(format!("unknown catalog entry {name}"))),
    }
}

//! Shared corpus builders for the integration suites: small inductively
//! free instances (rank-2 pencils, Booleans, products) plus a few negative
//! fixtures, and deterministic sampling helpers.

#![allow(dead_code)]

use multiarr_core::*;

pub fn q() -> Ctx {
    FieldContext::rational()
}

pub fn form(ctx: &Ctx, v: &[i64]) -> LinearForm {
    LinearForm::from_integers(ctx, v).unwrap()
}

/// Pencil of lines through the origin of the plane: x, y, x+y, x-y, x+2y...
pub fn pencil(mults: &[u32]) -> Multiarrangement {
    let c = q();
    let lines: [&[i64]; 5] = [&[1, 0], &[0, 1], &[1, 1], &[1, -1], &[1, 2]];
    Multiarrangement::new(
        2,
        &c,
        mults
            .iter()
            .enumerate()
            .map(|(i, &m)| (form(&c, lines[i]), m))
            .collect(),
    )
    .unwrap()
}

pub fn boolean(mults: &[u32]) -> Multiarrangement {
    let c = q();
    let l = mults.len();
    Multiarrangement::new(
        l,
        &c,
        mults
            .iter()
            .enumerate()
            .map(|(i, &m)| (LinearForm::coordinate(&c, l, i), m))
            .collect(),
    )
    .unwrap()
}

/// Boolean plus the all-ones hyperplane: generic, hence not free for l = 3.
pub fn generic_four_planes() -> Multiarrangement {
    let c = q();
    Multiarrangement::new(
        3,
        &c,
        vec![
            (form(&c, &[1, 0, 0]), 1),
            (form(&c, &[0, 1, 0]), 1),
            (form(&c, &[0, 0, 1]), 1),
            (form(&c, &[1, 1, 1]), 1),
        ],
    )
    .unwrap()
}

/// The inductively free corpus used by the localization-closure and
/// randomized property suites: rank-2 multiarrangements with small order,
/// Boolean multiarrangements, and products thereof.
pub fn inductively_free_corpus() -> Vec<(String, Multiarrangement)> {
    let mut corpus: Vec<(String, Multiarrangement)> = Vec::new();
    for m in [
        vec![1, 1, 1],
        vec![2, 1, 1],
        vec![2, 2, 1],
        vec![2, 2, 2],
        vec![3, 2, 1],
        vec![3, 2, 2],
        vec![3, 3, 2],
        vec![1, 3, 2],
        vec![2, 3, 3],
        vec![4, 2, 2],
    ] {
        corpus.push((format!("pencil{m:?}"), pencil(&m)));
    }
    for m in [
        vec![1, 1, 1, 1],
        vec![2, 1, 1, 1],
        vec![2, 2, 1, 1],
        vec![2, 1, 2, 1],
        vec![2, 2, 2, 2],
    ] {
        corpus.push((format!("pencil{m:?}"), pencil(&m)));
    }
    for m in [
        vec![1, 1, 1],
        vec![2, 1, 1],
        vec![2, 2, 2],
        vec![3, 3, 3],
        vec![3, 2, 1],
    ] {
        corpus.push((format!("boolean{m:?}"), boolean(&m)));
    }
    let products = vec![
        (
            "pencil[1,1,1] x pencil[1,1,1]".to_string(),
            pencil(&[1, 1, 1]).product(&pencil(&[1, 1, 1])).unwrap(),
        ),
        (
            "boolean[1,1] x pencil[2,1,1]".to_string(),
            boolean(&[1, 1]).product(&pencil(&[2, 1, 1])).unwrap(),
        ),
        (
            "empty(1) x pencil[2,2,1]".to_string(),
            Multiarrangement::empty(1, &q())
                .product(&pencil(&[2, 2, 1]))
                .unwrap(),
        ),
    ];
    corpus.extend(products);
    corpus
}

/// Deterministic linear congruential sampler; enough for corpus draws and
/// independent of external crates' stream stability.
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            state: seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound.max(1) as u64) as usize
    }
}

/// Mixed pool of rank-3 arrangements for triple/localization sampling.
pub fn rank3_pool() -> Vec<Multiarrangement> {
    let c = q();
    let forms: Vec<LinearForm> = vec![
        form(&c, &[1, 0, 0]),
        form(&c, &[0, 1, 0]),
        form(&c, &[0, 0, 1]),
        form(&c, &[1, 1, 0]),
        form(&c, &[1, 0, 1]),
        form(&c, &[0, 1, 1]),
        form(&c, &[1, 1, 1]),
        form(&c, &[1, -1, 0]),
    ];
    let mut pool = Vec::new();
    let mut sampler = Sampler::new(20250810);
    for _ in 0..12 {
        let k = 3 + sampler.below(4);
        let mut entries = Vec::new();
        let mut used = std::collections::HashSet::new();
        while entries.len() < k {
            let i = sampler.below(forms.len());
            if used.insert(i) {
                let m = 1 + sampler.below(3) as u32;
                entries.push((forms[i].clone(), m));
            }
        }
        pool.push(Multiarrangement::new(3, &c, entries).unwrap());
    }
    pool.push(catalog::example_constant_multiplicity().arrangement);
    pool.push(catalog::monomial_rrl(3, 3).unwrap());
    pool
}

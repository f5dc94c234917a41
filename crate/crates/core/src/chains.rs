//! Inductive and recursive freeness: chain verification, memoized chain
//! search, descent of chains under localization, hereditary checks, and
//! product decomposition checks.

use std::collections::{HashMap, VecDeque};

use crate::arrangement::{LinearForm, Multiarrangement};
use crate::derivation::{ExponentMultiset, OracleCache};
use crate::error::{Error, Result};
use crate::euler::{
    canonical_order, deletion, iterated_restriction, restriction_with_euler_cached,
};
use crate::field::Ctx;
use crate::lattice::{intersection_lattice, Flat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOp {
    Add,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Inductive,
    Recursive,
}

#[derive(Debug, Clone)]
pub struct ChainStep {
    pub op: StepOp,
    pub hyperplane: LinearForm,
    pub exponents_before: ExponentMultiset,
    pub exponents_after: ExponentMultiset,
    pub restriction_exponents: ExponentMultiset,
}

/// An ordered add/delete path from the empty arrangement to a target,
/// carrying the exponent bookkeeping of every step.
#[derive(Debug, Clone)]
pub struct Chain {
    pub kind: ChainKind,
    pub dimension: usize,
    pub ctx: Ctx,
    pub steps: Vec<ChainStep>,
    pub target: Multiarrangement,
}

impl Chain {
    /// Nodes visited by the chain, from the empty arrangement to the target.
    /// Errors when the steps do not replay to the target.
    pub fn replay(&self) -> Result<Vec<Multiarrangement>> {
        let mut nodes = vec![Multiarrangement::empty(self.dimension, &self.ctx)];
        for (i, step) in self.steps.iter().enumerate() {
            let current = nodes.last().unwrap();
            let next = match step.op {
                StepOp::Add => current.add_unit(&step.hyperplane)?,
                StepOp::Delete => {
                    let idx = current.find_form(&step.hyperplane).ok_or_else(|| {
                        Error::ReplayMismatch {
                            step: i,
                            message: format!(
                                "cannot delete absent hyperplane {}",
                                step.hyperplane
                            ),
                        }
                    })?;
                    deletion(current, idx).map_err(|e| Error::ReplayMismatch {
                        step: i,
                        message: e.to_string(),
                    })?
                }
            };
            nodes.push(next);
        }
        if !nodes.last().unwrap().equal_multiset(&self.target) {
            return Err(Error::ReplayMismatch {
                step: self.steps.len(),
                message: "replayed chain does not reproduce the target".into(),
            });
        }
        Ok(nodes)
    }

    /// The prefix chain of the first n steps; its target is recomputed.
    pub fn truncated(&self, n_steps: usize, kind: ChainKind) -> Result<Chain> {
        let steps: Vec<ChainStep> = self.steps[..n_steps].to_vec();
        let mut chain = Chain {
            kind,
            dimension: self.dimension,
            ctx: self.ctx.clone(),
            steps,
            target: Multiarrangement::empty(self.dimension, &self.ctx),
        };
        let nodes = {
            // replay without the final target comparison
            let mut nodes = vec![Multiarrangement::empty(self.dimension, &self.ctx)];
            for step in &chain.steps {
                let current = nodes.last().unwrap();
                let next = match step.op {
                    StepOp::Add => current.add_unit(&step.hyperplane)?,
                    StepOp::Delete => {
                        let idx = current
                            .find_form(&step.hyperplane)
                            .ok_or_else(|| Error::InvalidInput("bad prefix".into()))?;
                        deletion(current, idx)?
                    }
                };
                nodes.push(next);
            }
            nodes
        };
        chain.target = nodes.last().unwrap().clone();
        Ok(chain)
    }
}

#[derive(Debug, Clone)]
pub struct StepDiagnostic {
    pub index: usize,
    pub ok: bool,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ChainVerification {
    pub ok: bool,
    pub steps: Vec<StepDiagnostic>,
}

/// Re-derives every step of a chain: recomputes the triple at the step's
/// hyperplane, certifies the required members free via the oracle, checks
/// the exponent inclusion, and checks the recorded bookkeeping.
pub fn verify_chain(chain: &Chain) -> Result<ChainVerification> {
    let nodes = chain.replay()?;
    let mut cache = OracleCache::new();
    let mut diagnostics = Vec::new();
    let mut all_ok = true;
    for (i, step) in chain.steps.iter().enumerate() {
        let fail = |message: String| StepDiagnostic {
            index: i,
            ok: false,
            message,
        };
        let diag = (|| {
            if chain.kind == ChainKind::Inductive && step.op == StepOp::Delete {
                return fail("inductive chains admit only addition steps".into());
            }
            let prev = &nodes[i];
            let cur = &nodes[i + 1];
            let bigger = match step.op {
                StepOp::Add => cur,
                StepOp::Delete => prev,
            };
            let prev_cert = cache.certificate(prev);
            if !prev_cert.is_free() {
                return fail("required member is not certified free".into());
            }
            let prev_exps = prev_cert.exponents().unwrap().clone();
            let idx = bigger
                .find_form(&step.hyperplane)
                .expect("replay guarantees the pivot is present");
            let restriction = match restriction_with_euler_cached(bigger, idx, &mut cache) {
                Ok((r, _)) => r,
                Err(e) => return fail(format!("restriction failed: {e}")),
            };
            let r_cert = cache.certificate(&restriction);
            if !r_cert.is_free() {
                return fail("restriction is not certified free".into());
            }
            let r_exps = r_cert.exponents().unwrap().clone();
            if !r_exps.included_in(&prev_exps) {
                return fail(format!(
                    "exponent inclusion fails: {r_exps} not in {prev_exps}"
                ));
            }
            let moved = prev_exps
                .single_difference(&r_exps)
                .expect("inclusion of co-length-1 multisets leaves one element");
            let implied_after = match step.op {
                StepOp::Add => r_exps.with_element(moved + 1),
                StepOp::Delete => {
                    if moved == 0 {
                        return fail("cannot decrement a zero exponent".into());
                    }
                    r_exps.with_element(moved - 1)
                }
            };
            if step.exponents_before != prev_exps {
                return fail(format!(
                    "recorded exponents_before {} disagree with the oracle {}",
                    step.exponents_before, prev_exps
                ));
            }
            if step.restriction_exponents != r_exps {
                return fail(format!(
                    "recorded restriction exponents {} disagree with the oracle {}",
                    step.restriction_exponents, r_exps
                ));
            }
            if step.exponents_after != implied_after {
                return fail(format!(
                    "recorded exponents_after {} disagree with the implied {}",
                    step.exponents_after, implied_after
                ));
            }
            StepDiagnostic {
                index: i,
                ok: true,
                message: format!(
                    "{} {}: {} -> {}",
                    match step.op {
                        StepOp::Add => "add",
                        StepOp::Delete => "delete",
                    },
                    step.hyperplane,
                    prev_exps,
                    step.exponents_after
                ),
            }
        })();
        all_ok &= diag.ok;
        diagnostics.push(diag);
    }
    Ok(ChainVerification {
        ok: all_ok,
        steps: diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Member,
    NonMember,
    BudgetExhausted,
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub memo_hits: u64,
    pub budget: u64,
    pub pool: Option<Vec<LinearForm>>,
    pub multiplicity_cap: Option<u32>,
    pub scope_note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SearchVerdict {
    pub status: SearchStatus,
    pub chain: Option<Chain>,
    pub stats: SearchStats,
}

pub const DEFAULT_BUDGET: u64 = 100_000;

enum Outcome {
    Member(ExponentMultiset),
    NonMember,
    Budget,
}

#[derive(Clone)]
enum MemoEntry {
    Member {
        exponents: ExponentMultiset,
        pivot: Option<(LinearForm, ExponentMultiset)>,
    },
    NonMember,
}

struct InductiveSearcher {
    memo: HashMap<String, MemoEntry>,
    cache: OracleCache,
    expansions: u64,
    memo_hits: u64,
    budget: u64,
}

impl InductiveSearcher {
    /// Memoized recursion: a multiarrangement is inductively free iff it is
    /// empty, or some pivot has an inductively free deletion and restriction
    /// with included exponents. Exponents ride along via the addition part
    /// of the addition-deletion theorem. Restrictions recurse across
    /// dimensions. Budget exhaustion aborts without memoizing.
    fn decide(&mut self, arr: &Multiarrangement) -> Result<Outcome> {
        let key = arr.canonical_key();
        if let Some(entry) = self.memo.get(&key) {
            self.memo_hits += 1;
            return Ok(match entry {
                MemoEntry::Member { exponents, .. } => Outcome::Member(exponents.clone()),
                MemoEntry::NonMember => Outcome::NonMember,
            });
        }
        if arr.total_multiplicity() == 0 {
            let exps = ExponentMultiset::zeros(arr.dimension());
            self.memo.insert(
                key,
                MemoEntry::Member {
                    exponents: exps.clone(),
                    pivot: None,
                },
            );
            return Ok(Outcome::Member(exps));
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            return Ok(Outcome::Budget);
        }
        // heuristic: highest multiplicity first, canonical form order on ties
        let mut pivots: Vec<usize> = arr.support().map(|(i, _)| i).collect();
        pivots.sort_by_key(|&i| std::cmp::Reverse(arr.multiplicity(i)));
        for h in pivots {
            let smaller = deletion(arr, h)?;
            let smaller_exps = match self.decide(&smaller)? {
                Outcome::Budget => return Ok(Outcome::Budget),
                Outcome::NonMember => continue,
                Outcome::Member(e) => e,
            };
            let (restriction, _) = restriction_with_euler_cached(arr, h, &mut self.cache)?;
            let restriction_exps = match self.decide(&restriction)? {
                Outcome::Budget => return Ok(Outcome::Budget),
                Outcome::NonMember => continue,
                Outcome::Member(e) => e,
            };
            if !restriction_exps.included_in(&smaller_exps) {
                continue;
            }
            let moved = smaller_exps
                .single_difference(&restriction_exps)
                .expect("inclusion leaves a single element");
            let exponents = restriction_exps.with_element(moved + 1);
            self.memo.insert(
                key,
                MemoEntry::Member {
                    exponents: exponents.clone(),
                    pivot: Some((arr.form(h).clone(), restriction_exps)),
                },
            );
            return Ok(Outcome::Member(exponents));
        }
        self.memo.insert(key, MemoEntry::NonMember);
        Ok(Outcome::NonMember)
    }

    fn rebuild_chain(&self, target: &Multiarrangement) -> Result<Chain> {
        let mut steps_rev = Vec::new();
        let mut current = target.clone();
        while current.total_multiplicity() > 0 {
            let entry = self
                .memo
                .get(&current.canonical_key())
                .ok_or_else(|| Error::Internal("member node missing from memo".into()))?;
            let MemoEntry::Member {
                exponents,
                pivot: Some((pivot, restriction_exponents)),
            } = entry.clone()
            else {
                return Err(Error::Internal("member node lacks a pivot".into()));
            };
            let idx = current
                .find_form(&pivot)
                .ok_or_else(|| Error::Internal("memo pivot missing".into()))?;
            let smaller = deletion(&current, idx)?;
            let MemoEntry::Member {
                exponents: before, ..
            } = self
                .memo
                .get(&smaller.canonical_key())
                .ok_or_else(|| Error::Internal("deletion node missing from memo".into()))?
                .clone()
            else {
                return Err(Error::Internal("deletion node is not a member".into()));
            };
            steps_rev.push(ChainStep {
                op: StepOp::Add,
                hyperplane: pivot,
                exponents_before: before,
                exponents_after: exponents,
                restriction_exponents,
            });
            current = smaller;
        }
        steps_rev.reverse();
        Ok(Chain {
            kind: ChainKind::Inductive,
            dimension: target.dimension(),
            ctx: target.ctx().clone(),
            steps: steps_rev,
            target: target.clone(),
        })
    }
}

/// Memoized search for an inductive chain. `non_member` is reported only
/// after full exhaustion of the pivot recursion within the budget.
pub fn inductive_search(arr: &Multiarrangement, budget: u64) -> Result<SearchVerdict> {
    let mut searcher = InductiveSearcher {
        memo: HashMap::new(),
        cache: OracleCache::new(),
        expansions: 0,
        memo_hits: 0,
        budget,
    };
    let outcome = searcher.decide(arr)?;
    let stats = SearchStats {
        nodes_visited: searcher.expansions,
        memo_hits: searcher.memo_hits,
        budget,
        ..Default::default()
    };
    Ok(match outcome {
        Outcome::Member(_) => SearchVerdict {
            status: SearchStatus::Member,
            chain: Some(searcher.rebuild_chain(arr)?),
            stats,
        },
        Outcome::NonMember => SearchVerdict {
            status: SearchStatus::NonMember,
            chain: None,
            stats,
        },
        Outcome::Budget => SearchVerdict {
            status: SearchStatus::BudgetExhausted,
            chain: None,
            stats,
        },
    })
}

/// Recursive-freeness membership of a restriction: rank at most 2 is
/// inductively (hence recursively) free; otherwise an inductive chain is
/// attempted. `None` means indeterminate under the given budget.
fn restriction_recursively_free(
    restriction: &Multiarrangement,
    budget: u64,
) -> Result<Option<bool>> {
    if restriction.rank() <= 2 {
        return Ok(Some(true));
    }
    let verdict = inductive_search(restriction, budget)?;
    Ok(match verdict.status {
        SearchStatus::Member => Some(true),
        _ => None,
    })
}

#[derive(Clone)]
struct ParentEdge {
    parent: Vec<u32>,
    op: StepOp,
    pool_idx: usize,
    restriction_exponents: ExponentMultiset,
}

/// Breadth-first search for a recursive chain through the space of
/// multiarrangements supported on `pool` with multiplicities at most
/// `multiplicity_cap`. Every visited node must be oracle-free. A
/// `non_member` verdict is scoped to the declared pool and cap, which are
/// recorded in the stats.
pub fn recursive_search(
    arr: &Multiarrangement,
    pool: Option<Vec<LinearForm>>,
    multiplicity_cap: u32,
    budget: u64,
) -> Result<SearchVerdict> {
    if multiplicity_cap == 0 && arr.total_multiplicity() > 0 {
        return Err(Error::InvalidInput("multiplicity cap must be positive".into()));
    }
    let mut cache = OracleCache::new();
    let target_cert = cache.certificate(arr);
    let pool: Vec<LinearForm> = match pool {
        Some(mut p) => {
            p.sort_by(|a, b| a.cmp_canonical(b));
            p.dedup();
            p
        }
        None => arr.support().map(|(_, h)| h.form.clone()).collect(),
    };
    let stats_base = |cache: &OracleCache, visited: u64| SearchStats {
        nodes_visited: visited,
        memo_hits: cache.hits,
        budget,
        pool: Some(pool.clone()),
        multiplicity_cap: Some(multiplicity_cap),
        scope_note: None,
    };
    // Freeness is necessary: a non-free target is a definitive non-member.
    if !target_cert.is_free() {
        let mut stats = stats_base(&cache, 0);
        stats.scope_note = Some("target is not free".into());
        return Ok(SearchVerdict {
            status: SearchStatus::NonMember,
            chain: None,
            stats,
        });
    }
    // Inductive chains are recursive chains.
    let inductive = inductive_search(arr, budget)?;
    if inductive.status == SearchStatus::Member {
        let mut chain = inductive.chain.expect("member verdict carries a chain");
        chain.kind = ChainKind::Recursive;
        let mut stats = stats_base(&cache, inductive.stats.nodes_visited);
        stats.memo_hits += inductive.stats.memo_hits;
        return Ok(SearchVerdict {
            status: SearchStatus::Member,
            chain: Some(chain),
            stats,
        });
    }

    // validate the target lies inside the declared search space
    let target_vec: Vec<u32> = pool
        .iter()
        .map(|f| arr.find_form(f).map_or(0, |i| arr.multiplicity(i)))
        .collect();
    let covered: u32 = target_vec.iter().sum();
    if covered != arr.total_multiplicity() || target_vec.iter().any(|&m| m > multiplicity_cap) {
        return Err(Error::InvalidInput(
            "target lies outside the declared pool/cap search space".into(),
        ));
    }

    let ctx = arr.ctx().clone();
    let dim = arr.dimension();
    let build = |vec: &[u32]| -> Result<Multiarrangement> {
        Multiarrangement::new(
            dim,
            &ctx,
            pool.iter()
                .cloned()
                .zip(vec.iter().copied())
                .filter(|(_, m)| *m > 0)
                .collect(),
        )
    };

    let start = vec![0u32; pool.len()];
    let mut visited: HashMap<Vec<u32>, Option<ParentEdge>> = HashMap::new();
    visited.insert(start.clone(), None);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    let mut expansions: u64 = 0;
    let mut scope_incomplete = false;
    let mut found = false;

    'bfs: while let Some(node_vec) = queue.pop_front() {
        expansions += 1;
        if expansions > budget {
            let mut stats = stats_base(&cache, expansions);
            stats.scope_note = Some("budget exhausted during frontier expansion".into());
            return Ok(SearchVerdict {
                status: SearchStatus::BudgetExhausted,
                chain: None,
                stats,
            });
        }
        let node_arr = build(&node_vec)?;
        let node_cert = cache.certificate(&node_arr);
        let node_exps = node_cert
            .exponents()
            .expect("visited nodes are free")
            .clone();
        for j in 0..pool.len() {
            // addition: the new node is the bigger member
            if node_vec[j] < multiplicity_cap {
                let mut child_vec = node_vec.clone();
                child_vec[j] += 1;
                if !visited.contains_key(&child_vec) {
                    let child_arr = build(&child_vec)?;
                    let child_cert = cache.certificate(&child_arr);
                    if child_cert.is_free() {
                        let idx = child_arr
                            .find_form(&pool[j])
                            .expect("added hyperplane is present");
                        let (restriction, _) =
                            restriction_with_euler_cached(&child_arr, idx, &mut cache)?;
                        let r_cert = cache.certificate(&restriction);
                        if r_cert.is_free() {
                            let r_exps = r_cert.exponents().unwrap();
                            if r_exps.included_in(&node_exps) {
                                match restriction_recursively_free(&restriction, budget)? {
                                    Some(true) => {
                                        visited.insert(
                                            child_vec.clone(),
                                            Some(ParentEdge {
                                                parent: node_vec.clone(),
                                                op: StepOp::Add,
                                                pool_idx: j,
                                                restriction_exponents: r_exps.clone(),
                                            }),
                                        );
                                        if child_vec == target_vec {
                                            found = true;
                                            break 'bfs;
                                        }
                                        queue.push_back(child_vec);
                                    }
                                    _ => scope_incomplete = true,
                                }
                            }
                        }
                    }
                }
            }
            // deletion: the current node is the bigger member
            if node_vec[j] >= 1 {
                let mut child_vec = node_vec.clone();
                child_vec[j] -= 1;
                if !visited.contains_key(&child_vec) {
                    let child_arr = build(&child_vec)?;
                    let child_cert = cache.certificate(&child_arr);
                    if child_cert.is_free() {
                        let idx = node_arr
                            .find_form(&pool[j])
                            .expect("deleted hyperplane is present");
                        let (restriction, _) =
                            restriction_with_euler_cached(&node_arr, idx, &mut cache)?;
                        let r_cert = cache.certificate(&restriction);
                        if r_cert.is_free() {
                            let r_exps = r_cert.exponents().unwrap();
                            if r_exps.included_in(&node_exps) {
                                match restriction_recursively_free(&restriction, budget)? {
                                    Some(true) => {
                                        visited.insert(
                                            child_vec.clone(),
                                            Some(ParentEdge {
                                                parent: node_vec.clone(),
                                                op: StepOp::Delete,
                                                pool_idx: j,
                                                restriction_exponents: r_exps.clone(),
                                            }),
                                        );
                                        if child_vec == target_vec {
                                            found = true;
                                            break 'bfs;
                                        }
                                        queue.push_back(child_vec);
                                    }
                                    _ => scope_incomplete = true,
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if !found {
        let mut stats = stats_base(&cache, expansions);
        if scope_incomplete {
            stats.scope_note = Some(
                "some restriction memberships were indeterminate under the budget".into(),
            );
            return Ok(SearchVerdict {
                status: SearchStatus::BudgetExhausted,
                chain: None,
                stats,
            });
        }
        stats.scope_note = Some(format!(
            "exhausted all multiarrangements on {} pool hyperplanes with multiplicities <= {}",
            pool.len(),
            multiplicity_cap
        ));
        return Ok(SearchVerdict {
            status: SearchStatus::NonMember,
            chain: None,
            stats,
        });
    }

    // reconstruct the path from the parent edges
    let mut steps_rev = Vec::new();
    let mut cursor = target_vec.clone();
    while let Some(Some(edge)) = visited.get(&cursor).cloned() {
        let parent_arr = build(&edge.parent)?;
        let child_arr = build(&cursor)?;
        let before = cache
            .certificate(&parent_arr)
            .exponents()
            .expect("path nodes are free")
            .clone();
        let after = cache
            .certificate(&child_arr)
            .exponents()
            .expect("path nodes are free")
            .clone();
        steps_rev.push(ChainStep {
            op: edge.op,
            hyperplane: pool[edge.pool_idx].clone(),
            exponents_before: before,
            exponents_after: after,
            restriction_exponents: edge.restriction_exponents.clone(),
        });
        cursor = edge.parent;
    }
    steps_rev.reverse();
    let chain = Chain {
        kind: ChainKind::Recursive,
        dimension: dim,
        ctx: ctx.clone(),
        steps: steps_rev,
        target: arr.clone(),
    };
    Ok(SearchVerdict {
        status: SearchStatus::Member,
        chain: Some(chain),
        stats: stats_base(&cache, expansions),
    })
}

/// Localizes every member of a chain at a flat of its target, removes
/// consecutive duplicates, and recomputes the exponent records. The result
/// is a chain of the localized multiarrangement.
pub fn descend_chain(chain: &Chain, flat: &Flat) -> Result<Chain> {
    let nodes = chain.replay()?;
    let mut cache = OracleCache::new();
    let mut localized: Vec<Multiarrangement> = Vec::new();
    for node in &nodes {
        let loc = node.localize_span_rows(&flat.normal_basis);
        if localized.last().is_none_or(|prev: &Multiarrangement| !prev.equal_multiset(&loc)) {
            localized.push(loc);
        }
    }
    let mut steps = Vec::new();
    for pair in localized.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        // consecutive localizations differ by exactly one unit of multiplicity
        let mut forms: Vec<LinearForm> = prev.support().map(|(_, h)| h.form.clone()).collect();
        for (_, h) in cur.support() {
            if !forms.contains(&h.form) {
                forms.push(h.form.clone());
            }
        }
        let mut delta: Option<(LinearForm, StepOp)> = None;
        for f in forms {
            let before = prev.find_form(&f).map_or(0, |i| prev.multiplicity(i));
            let after = cur.find_form(&f).map_or(0, |i| cur.multiplicity(i));
            if before == after {
                continue;
            }
            if delta.is_some() {
                return Err(Error::Internal(
                    "localized chain nodes differ at more than one hyperplane".into(),
                ));
            }
            if after == before + 1 {
                delta = Some((f, StepOp::Add));
            } else if before == after + 1 {
                delta = Some((f, StepOp::Delete));
            } else {
                return Err(Error::Internal(
                    "localized chain nodes differ by more than one unit".into(),
                ));
            }
        }
        let Some((form, op)) = delta else {
            return Err(Error::Internal(
                "consecutive localized nodes are equal after dedup".into(),
            ));
        };
        let bigger = match op {
            StepOp::Add => cur,
            StepOp::Delete => prev,
        };
        let before_cert = cache.certificate(prev);
        let after_cert = cache.certificate(cur);
        if !before_cert.is_free() || !after_cert.is_free() {
            return Err(Error::Internal(
                "localized chain member is not certified free".into(),
            ));
        }
        let idx = bigger
            .find_form(&form)
            .ok_or_else(|| Error::Internal("pivot missing in localized node".into()))?;
        let (restriction, _) = restriction_with_euler_cached(bigger, idx, &mut cache)?;
        let r_cert = cache.certificate(&restriction);
        if !r_cert.is_free() {
            return Err(Error::Internal(
                "restriction of localized node is not certified free".into(),
            ));
        }
        steps.push(ChainStep {
            op,
            hyperplane: form,
            exponents_before: before_cert.exponents().unwrap().clone(),
            exponents_after: after_cert.exponents().unwrap().clone(),
            restriction_exponents: r_cert.exponents().unwrap().clone(),
        });
    }
    Ok(Chain {
        kind: chain.kind,
        dimension: chain.dimension,
        ctx: chain.ctx.clone(),
        steps,
        target: localized.last().unwrap().clone(),
    })
}

#[derive(Debug)]
pub struct FlatVerdict {
    pub flat: Flat,
    pub restricted: Multiarrangement,
    pub verdict: SearchVerdict,
}

#[derive(Debug)]
pub struct HereditaryReport {
    pub order: Vec<usize>,
    pub per_flat: Vec<FlatVerdict>,
    pub all_member: bool,
    pub any_budget_exhausted: bool,
}

/// For every flat of the lattice, forms the iterated Euler restriction
/// under the given order and searches for an inductive chain.
pub fn hereditary_inductive_check(
    arr: &Multiarrangement,
    order: Option<Vec<usize>>,
    budget: u64,
) -> Result<HereditaryReport> {
    let order = match order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            let expected: Vec<usize> = arr.support().map(|(i, _)| i).collect();
            if sorted != expected {
                return Err(Error::InvalidInput(
                    "order must be a permutation of the support indices".into(),
                ));
            }
            o
        }
        None => canonical_order(arr),
    };
    let lattice = intersection_lattice(arr);
    let mut per_flat = Vec::new();
    let mut all_member = true;
    let mut any_budget = false;
    for flat in &lattice.flats {
        let restricted = iterated_restriction(arr, flat, &order)?;
        let verdict = inductive_search(&restricted, budget)?;
        all_member &= verdict.status == SearchStatus::Member;
        any_budget |= verdict.status == SearchStatus::BudgetExhausted;
        per_flat.push(FlatVerdict {
            flat: flat.clone(),
            restricted,
            verdict,
        });
    }
    Ok(HereditaryReport {
        order,
        per_flat,
        all_member,
        any_budget_exhausted: any_budget,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreenessClass {
    Inductive,
    Recursive,
}

#[derive(Debug)]
pub enum ProductCheckOutcome {
    /// All three searches were decisive; `holds` records whether product
    /// membership equals the conjunction of factor memberships.
    Decided {
        holds: bool,
        product: SearchVerdict,
        left: SearchVerdict,
        right: SearchVerdict,
    },
    /// Some search ran out of budget.
    Inconclusive {
        product: SearchVerdict,
        left: SearchVerdict,
        right: SearchVerdict,
    },
}

/// Tests the product decomposition: the product is inductively
/// (resp. recursively) free iff both factors are. Runs the class search on
/// the product and on both factors.
pub fn product_class_check(
    left: &Multiarrangement,
    right: &Multiarrangement,
    class: FreenessClass,
    budget: u64,
) -> Result<ProductCheckOutcome> {
    let product = left.product(right)?;
    let run = |arr: &Multiarrangement| -> Result<SearchVerdict> {
        match class {
            FreenessClass::Inductive => inductive_search(arr, budget),
            FreenessClass::Recursive => {
                let cap = arr
                    .support()
                    .map(|(_, h)| h.multiplicity)
                    .max()
                    .unwrap_or(1);
                recursive_search(arr, None, cap.max(1), budget)
            }
        }
    };
    let vp = run(&product)?;
    let vl = run(left)?;
    let vr = run(right)?;
    let exhausted = [&vp, &vl, &vr]
        .iter()
        .any(|v| v.status == SearchStatus::BudgetExhausted);
    if exhausted {
        return Ok(ProductCheckOutcome::Inconclusive {
            product: vp,
            left: vl,
            right: vr,
        });
    }
    let holds = (vp.status == SearchStatus::Member)
        == (vl.status == SearchStatus::Member && vr.status == SearchStatus::Member);
    Ok(ProductCheckOutcome::Decided {
        holds,
        product: vp,
        left: vl,
        right: vr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleMember {
    Whole,
    Deleted,
    Restricted,
}

/// Given oracle exponents for two members of a triple, infers the freeness
/// and exponents of the third by the addition-deletion pattern. Errors when
/// the two inputs cannot fit the pattern.
pub fn addition_deletion_infer(
    first: (TripleMember, &ExponentMultiset),
    second: (TripleMember, &ExponentMultiset),
) -> Result<(TripleMember, ExponentMultiset)> {
    use TripleMember::*;
    let ((ra, ea), (rb, eb)) = (first, second);
    if ra == rb {
        return Err(Error::InvalidInput(
            "two distinct triple members are required".into(),
        ));
    }
    let pick = |role: TripleMember| -> Option<&ExponentMultiset> {
        if ra == role {
            Some(ea)
        } else if rb == role {
            Some(eb)
        } else {
            None
        }
    };
    match (pick(Whole), pick(Deleted), pick(Restricted)) {
        (Some(whole), Some(deleted), None) => {
            if whole.len() != deleted.len() {
                return Err(Error::InconsistentExponents(
                    "whole and deleted exponents must have equal length".into(),
                ));
            }
            // sorted multisets must differ by 1 in exactly one entry
            let mut counts: HashMap<u32, i64> = HashMap::new();
            for &v in whole.as_slice() {
                *counts.entry(v).or_insert(0) += 1;
            }
            for &v in deleted.as_slice() {
                *counts.entry(v).or_insert(0) -= 1;
            }
            let mut extra_whole = Vec::new();
            let mut extra_deleted = Vec::new();
            for (v, c) in counts {
                match c {
                    0 => {}
                    1 => extra_whole.push(v),
                    -1 => extra_deleted.push(v),
                    _ => {
                        return Err(Error::InconsistentExponents(
                            "exponents differ in more than one entry".into(),
                        ))
                    }
                }
            }
            match (extra_whole.as_slice(), extra_deleted.as_slice()) {
                (&[u], &[v]) if u == v + 1 => Ok((
                    Restricted,
                    whole
                        .without_element(u)
                        .expect("u occurs in the whole exponents"),
                )),
                _ => Err(Error::InconsistentExponents(
                    "whole/deleted exponents do not differ by 1 in one entry".into(),
                )),
            }
        }
        (None, Some(deleted), Some(restricted)) => {
            let moved = deleted.single_difference(restricted).ok_or_else(|| {
                Error::InconsistentExponents(
                    "restricted exponents are not included in the deleted ones".into(),
                )
            })?;
            Ok((Whole, restricted.with_element(moved + 1)))
        }
        (Some(whole), None, Some(restricted)) => {
            let moved = whole.single_difference(restricted).ok_or_else(|| {
                Error::InconsistentExponents(
                    "restricted exponents are not included in the whole ones".into(),
                )
            })?;
            if moved == 0 {
                return Err(Error::InconsistentExponents(
                    "cannot decrement a zero exponent".into(),
                ));
            }
            Ok((Deleted, restricted.with_element(moved - 1)))
        }
        _ => unreachable!("two distinct roles always select one of the three cases"),
    }
}

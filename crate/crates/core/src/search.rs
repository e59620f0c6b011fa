//! Brute-force search for the cheapest valid degree table, plus the sumset
//! helpers that explain why the information block always costs `KL` servers.
//!
//! The searcher is an oracle for tiny parameters: it enumerates every
//! candidate table in a canonical space, keeps the ones satisfying both
//! table conditions, and minimizes the with-precomputation server count.
//! Shifting a whole side by a constant shifts every cell equally, so
//! anchoring the smallest exponent of each side at 0 loses no tables.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::audit::binomial;
use crate::degree_table::{
    build_gasp_exponents, check_table_conditions, GaspExponents, SchemeParams,
};
use crate::error::{Error, Result};
use crate::formulas::lower_bounds;

/// Refusal threshold on the estimated number of candidate tables.
pub const SEARCH_TABLE_LIMIT: u128 = 100_000_000;

/// The candidate space: each side is a strictly increasing list of K+T
/// (resp. L+T) exponents from [0, D] starting at 0, with any K (resp. L) of
/// them designated as information exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpace {
    k: u32,
    l: u32,
    t: u32,
    max_exponent: u64,
}

impl SearchSpace {
    /// `max_exponent = None` defaults to the largest exponent of the r = 1
    /// chain construction plus 2, so the space always contains the known
    /// tables with a little slack to beat them. An explicit bound below the
    /// construction's reach is rejected.
    pub fn new(k: u32, l: u32, t: u32, max_exponent: Option<u64>) -> Result<Self> {
        let params = SchemeParams::new(k, l, t, 1)?;
        let reference = build_gasp_exponents(&params).max_exponent();
        let max_exponent = max_exponent.unwrap_or(reference + 2);
        if max_exponent < reference {
            return Err(Error::InvalidParameters(format!(
                "max exponent {max_exponent} excludes the known construction \
                 (needs at least {reference})"
            )));
        }
        Ok(SearchSpace {
            k,
            l,
            t,
            max_exponent,
        })
    }

    #[inline]
    pub fn max_exponent(&self) -> u64 {
        self.max_exponent
    }

    /// Upper bound on the number of candidate tables, saturating.
    pub fn estimated_tables(&self) -> u128 {
        let (k, l, t, d) = (
            self.k as u64,
            self.l as u64,
            self.t as u64,
            self.max_exponent,
        );
        binomial(d, k + t - 1)
            .saturating_mul(binomial(k + t, k))
            .saturating_mul(binomial(d, l + t - 1))
            .saturating_mul(binomial(l + t, l))
    }
}

/// Outcome of an exhaustive search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub space: SearchSpace,
    pub best_n_pre: u64,
    /// Lexicographically smallest witness among the minimal tables.
    pub witness: GaspExponents,
    pub tables_examined: u64,
    pub best_bound: u64,
    /// `best_n_pre - best_bound`; zero means the bound is tight here.
    pub bound_gap: u64,
}

impl SearchResult {
    pub const CSV_HEADER: &'static str = "K,L,T,D,best_n_pre,bound,gap,tables_examined";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.space.k,
            self.space.l,
            self.space.t,
            self.space.max_exponent,
            self.best_n_pre,
            self.best_bound,
            self.bound_gap,
            self.tables_examined
        )
    }
}

/// One side's candidates: every (information, mask) split of every
/// 0-anchored exponent list.
fn side_candidates(info_len: usize, mask_len: usize, d: u64) -> Vec<(Vec<u64>, Vec<u64>)> {
    let total = info_len + mask_len;
    let mut out = Vec::new();
    for rest in (1..=d).combinations(total - 1) {
        let mut values = Vec::with_capacity(total);
        values.push(0);
        values.extend(rest);
        for info_positions in (0..total).combinations(info_len) {
            let mut info = Vec::with_capacity(info_len);
            let mut mask = Vec::with_capacity(mask_len);
            let mut next = info_positions.iter().peekable();
            for (pos, &v) in values.iter().enumerate() {
                if next.peek() == Some(&&pos) {
                    info.push(v);
                    next.next();
                } else {
                    mask.push(v);
                }
            }
            out.push((info, mask));
        }
    }
    out
}

fn count_pre(alpha_i: &[u64], alpha_r: &[u64], beta_i: &[u64], beta_r: &[u64]) -> u64 {
    let mut support = BTreeSet::new();
    for &a in alpha_i {
        for &b in beta_i.iter().chain(beta_r) {
            support.insert(a + b);
        }
    }
    for &a in alpha_r {
        for &b in beta_i {
            support.insert(a + b);
        }
    }
    support.len() as u64
}

type Candidate = (u64, Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>);

fn min_candidate(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Enumerates the whole space and returns the minimal valid table. The
/// enumeration shards over the alpha candidates; the final minimum uses the
/// full lexicographic key, so the result is identical for any thread count.
pub fn exhaustive_search(space: &SearchSpace) -> Result<SearchResult> {
    let estimate = space.estimated_tables();
    if estimate > SEARCH_TABLE_LIMIT {
        return Err(Error::SearchTooLarge {
            estimate,
            limit: SEARCH_TABLE_LIMIT,
        });
    }
    let (k, l, t) = (space.k as usize, space.l as usize, space.t as usize);
    let alpha_candidates = side_candidates(k, t, space.max_exponent);
    let beta_candidates = side_candidates(l, t, space.max_exponent);

    let (examined, best) = alpha_candidates
        .par_iter()
        .map(|(alpha_i, alpha_r)| {
            let mut local_best: Option<Candidate> = None;
            let mut local_examined = 0u64;
            for (beta_i, beta_r) in &beta_candidates {
                local_examined += 1;
                if !check_table_conditions(alpha_i, alpha_r, beta_i, beta_r).all_hold() {
                    continue;
                }
                let n = count_pre(alpha_i, alpha_r, beta_i, beta_r);
                let candidate = (
                    n,
                    alpha_i.clone(),
                    alpha_r.clone(),
                    beta_i.clone(),
                    beta_r.clone(),
                );
                local_best = min_candidate(local_best, Some(candidate));
            }
            (local_examined, local_best)
        })
        .reduce(
            || (0u64, None),
            |(c1, b1), (c2, b2)| (c1 + c2, min_candidate(b1, b2)),
        );

    let (best_n_pre, alpha_i, alpha_r, beta_i, beta_r) =
        best.expect("the chain construction lies in the space and is valid");
    let witness = GaspExponents::new(alpha_i, alpha_r, beta_i, beta_r)?;
    debug_assert!(witness.check_conditions().all_hold());
    let best_bound = lower_bounds(space.k, space.l, space.t).best;
    debug_assert!(best_bound <= best_n_pre);
    Ok(SearchResult {
        space: *space,
        best_n_pre,
        witness,
        tables_examined: examined,
        best_bound,
        bound_gap: best_n_pre - best_bound,
    })
}

/// `A + B` as a sorted set. Inputs are treated as sets (duplicates
/// collapse); empty inputs are refused.
pub fn sumset(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            out.insert(x + y);
        }
    }
    Ok(out.into_iter().collect())
}

/// Result of testing `|A + B| = |A| + |B| - 1`, the smallest a sumset can
/// be. When both sets have at least two elements, minimality holds exactly
/// when both are arithmetic progressions with one common difference; with a
/// singleton on either side it holds unconditionally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumsetCheck {
    pub sumset_size: usize,
    pub minimal: bool,
    /// Whether both sets are arithmetic progressions with the same common
    /// difference; `None` when either set is a singleton.
    pub same_difference_aps: Option<bool>,
}

pub fn sumset_min_check(a: &[i64], b: &[i64]) -> Result<SumsetCheck> {
    let a_set: BTreeSet<i64> = a.iter().copied().collect();
    let b_set: BTreeSet<i64> = b.iter().copied().collect();
    let sum = sumset(a, b)?;
    let minimal = sum.len() == a_set.len() + b_set.len() - 1;
    let same_difference_aps = common_ap_difference(&a_set, &b_set);
    if let Some(aps) = same_difference_aps {
        debug_assert_eq!(minimal, aps, "A = {a_set:?}, B = {b_set:?}");
    }
    Ok(SumsetCheck {
        sumset_size: sum.len(),
        minimal,
        same_difference_aps,
    })
}

fn common_ap_difference(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> Option<bool> {
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    let ap_step = |s: &BTreeSet<i64>| -> Option<i64> {
        let v: Vec<i64> = s.iter().copied().collect();
        let step = v[1] - v[0];
        v.windows(2).all(|w| w[1] - w[0] == step).then_some(step)
    };
    Some(matches!((ap_step(a), ap_step(b)), (Some(x), Some(y)) if x == y))
}

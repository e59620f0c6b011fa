//! Degree tables for the outer-product partition.
//!
//! `A` is split into `K` row blocks with exponents `alpha` and `B` into `L`
//! column blocks with exponents `beta`; `T` extra mask blocks per side hide
//! the data. The (K+T) x (L+T) table of exponent sums `alpha_i + beta_j`
//! determines everything: the distinct sums are the support of `h = f * g`,
//! so their count is the number of servers. With offline precomputation the
//! mask-mask corner (bottom-right T x T block) drops out of the count.
//!
//! The `GASP_r` family arranges the mask exponents of `alpha` in chains of
//! length `r`; `r = 1` and `r = min(K,T)` are the two classic corner cases,
//! and intermediate `r` interpolates between them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest accepted value for K, L, T. Exponent arithmetic stays far away
/// from u64 overflow for any parameters below this bound.
pub const MAX_PARAM: u32 = 1 << 20;

/// Validated scheme parameters: K row blocks, L column blocks, T-collusion
/// resistance, chain length r with 1 <= r <= min(K, T).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeParams {
    k: u32,
    l: u32,
    t: u32,
    r: u32,
}

impl SchemeParams {
    pub fn new(k: u32, l: u32, t: u32, r: u32) -> Result<Self> {
        if k < 1 || l < 1 || t < 1 {
            return Err(Error::InvalidParameters(format!(
                "K, L, T must all be at least 1 (got K={k}, L={l}, T={t})"
            )));
        }
        if k > MAX_PARAM || l > MAX_PARAM || t > MAX_PARAM {
            return Err(Error::InvalidParameters(format!(
                "K, L, T must be at most {MAX_PARAM}"
            )));
        }
        if r < 1 || r > k.min(t) {
            return Err(Error::InvalidChainLength { r, k, t });
        }
        Ok(SchemeParams { k, l, t, r })
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Same T and r, with K and L exchanged. Fails when r > min(L, T).
    pub fn transposed(&self) -> Result<Self> {
        SchemeParams::new(self.l, self.k, self.t, self.r)
    }
}

/// The four exponent lists defining a degree table. Each list is strictly
/// increasing; information and mask exponents never collide within a side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaspExponents {
    alpha_i: Vec<u64>,
    alpha_r: Vec<u64>,
    beta_i: Vec<u64>,
    beta_r: Vec<u64>,
}

impl GaspExponents {
    /// Validates the structural invariants. Mask lists may be empty (a
    /// degenerate unmasked scheme, useful in tests); information lists may
    /// not.
    pub fn new(
        alpha_i: Vec<u64>,
        alpha_r: Vec<u64>,
        beta_i: Vec<u64>,
        beta_r: Vec<u64>,
    ) -> Result<Self> {
        if alpha_i.is_empty() || beta_i.is_empty() {
            return Err(Error::InvalidParameters(
                "information exponent lists must be nonempty".into(),
            ));
        }
        if alpha_r.len() != beta_r.len() {
            return Err(Error::InvalidParameters(format!(
                "mask list lengths differ: {} vs {}",
                alpha_r.len(),
                beta_r.len()
            )));
        }
        for (name, list) in [
            ("alpha_I", &alpha_i),
            ("alpha_R", &alpha_r),
            ("beta_I", &beta_i),
            ("beta_R", &beta_r),
        ] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameters(format!(
                    "{name} is not strictly increasing"
                )));
            }
        }
        let a: BTreeSet<u64> = alpha_i.iter().chain(&alpha_r).copied().collect();
        if a.len() != alpha_i.len() + alpha_r.len() {
            return Err(Error::InvalidParameters(
                "alpha_I and alpha_R share an exponent".into(),
            ));
        }
        let b: BTreeSet<u64> = beta_i.iter().chain(&beta_r).copied().collect();
        if b.len() != beta_i.len() + beta_r.len() {
            return Err(Error::InvalidParameters(
                "beta_I and beta_R share an exponent".into(),
            ));
        }
        Ok(GaspExponents {
            alpha_i,
            alpha_r,
            beta_i,
            beta_r,
        })
    }

    #[inline]
    pub fn alpha_i(&self) -> &[u64] {
        &self.alpha_i
    }

    #[inline]
    pub fn alpha_r(&self) -> &[u64] {
        &self.alpha_r
    }

    #[inline]
    pub fn beta_i(&self) -> &[u64] {
        &self.beta_i
    }

    #[inline]
    pub fn beta_r(&self) -> &[u64] {
        &self.beta_r
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.alpha_i.len()
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.beta_i.len()
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.alpha_r.len()
    }

    pub fn check_conditions(&self) -> TableConditionReport {
        check_table_conditions(&self.alpha_i, &self.alpha_r, &self.beta_i, &self.beta_r)
    }

    /// Largest exponent appearing on either side.
    pub fn max_exponent(&self) -> u64 {
        self.alpha_i
            .iter()
            .chain(&self.alpha_r)
            .chain(&self.beta_i)
            .chain(&self.beta_r)
            .copied()
            .max()
            .expect("information lists are nonempty")
    }
}

/// The `GASP_r` exponents:
///
/// - `alpha_I = 0, 1, ..., K-1`
/// - `beta_I  = 0, K, ..., (L-1)K`
/// - `beta_R  = KL, KL+1, ..., KL+T-1`
/// - `alpha_R` = the first T values of `KL + { (u-1)K + j : u >= 1, 0 <= j < r }`
pub fn build_gasp_exponents(params: &SchemeParams) -> GaspExponents {
    let (k, l, t, r) = (
        params.k as u64,
        params.l as u64,
        params.t as u64,
        params.r as u64,
    );
    let alpha_i: Vec<u64> = (0..k).collect();
    let beta_i: Vec<u64> = (0..l).map(|i| i * k).collect();
    let beta_r: Vec<u64> = (0..t).map(|i| k * l + i).collect();
    let mut alpha_r = Vec::with_capacity(t as usize);
    let mut u = 0u64;
    'outer: loop {
        for j in 0..r {
            if alpha_r.len() == t as usize {
                break 'outer;
            }
            alpha_r.push(k * l + u * k + j);
        }
        u += 1;
    }
    GaspExponents::new(alpha_i, alpha_r, beta_i, beta_r)
        .expect("construction yields valid exponents")
}

/// The four sum blocks of a degree table, as sorted deduplicated sets:
/// information x information (the block the products are read from),
/// information x mask both ways, and mask x mask (the block precomputation
/// removes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDecomposition {
    pub a_set: Vec<u64>,
    pub b_set: Vec<u64>,
    pub c_set: Vec<u64>,
    pub d_set: Vec<u64>,
}

fn sum_set(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let mut out: BTreeSet<u64> = BTreeSet::new();
    for &x in xs {
        for &y in ys {
            out.insert(x + y);
        }
    }
    out.into_iter().collect()
}

pub fn support_decomposition(exps: &GaspExponents) -> SupportDecomposition {
    SupportDecomposition {
        a_set: sum_set(&exps.alpha_i, &exps.beta_i),
        b_set: sum_set(&exps.alpha_i, &exps.beta_r),
        c_set: sum_set(&exps.alpha_r, &exps.beta_i),
        d_set: sum_set(&exps.alpha_r, &exps.beta_r),
    }
}

impl SupportDecomposition {
    /// Exponents a server's answer can contain: union of all four blocks.
    pub fn full_support(&self) -> Vec<u64> {
        let mut s: BTreeSet<u64> = self.a_set.iter().copied().collect();
        s.extend(&self.b_set);
        s.extend(&self.c_set);
        s.extend(&self.d_set);
        s.into_iter().collect()
    }

    /// Exponents that still need servers once the mask-mask products are
    /// precomputed: union of the first three blocks.
    pub fn pre_support(&self) -> Vec<u64> {
        let mut s: BTreeSet<u64> = self.a_set.iter().copied().collect();
        s.extend(&self.b_set);
        s.extend(&self.c_set);
        s.into_iter().collect()
    }
}

/// Exact server count by support enumeration: `|A u B u C u D|`, or
/// `|A u B u C|` when the mask-mask products are precomputed.
pub fn count_servers(exps: &GaspExponents, precompute: bool) -> u64 {
    let d = support_decomposition(exps);
    if precompute {
        d.pre_support().len() as u64
    } else {
        d.full_support().len() as u64
    }
}

/// Minimum server count over the two orientations of the partition (K, L)
/// and (L, K). An orientation is skipped when r exceeds its min(K, T); at
/// least one orientation must be valid.
pub fn symmetrize_count(k: u32, l: u32, t: u32, r: u32, precompute: bool) -> Result<u64> {
    let counts: Vec<u64> = [SchemeParams::new(k, l, t, r), SchemeParams::new(l, k, t, r)]
        .into_iter()
        .flatten()
        .map(|p| count_servers(&build_gasp_exponents(&p), precompute))
        .collect();
    counts
        .into_iter()
        .min()
        .ok_or(Error::InvalidChainLength { r, k: k.max(l), t })
}

/// Validity report for a degree table.
///
/// Condition (i): every information-block sum `alpha_I + beta_I` occurs
/// exactly once in the entire table, so each block product can be read off
/// an interpolated coefficient unpolluted.
///
/// Condition (ii): the mask exponents are pairwise distinct within
/// `alpha_R` and within `beta_R`, so the masks have full rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableConditionReport {
    pub information_values_unique: bool,
    pub mask_exponents_distinct: bool,
    /// Cells (row, col) of the full table holding an information value that
    /// occurs more than once. Empty iff condition (i) holds.
    pub violating_cells: Vec<(usize, usize)>,
}

impl TableConditionReport {
    pub fn all_hold(&self) -> bool {
        self.information_values_unique && self.mask_exponents_distinct
    }
}

/// Checks the two table conditions for arbitrary exponent assignments, not
/// only `GASP_r` ones. Lists are taken as ordered; duplicates inside the mask
/// lists violate condition (ii).
pub fn check_table_conditions(
    alpha_i: &[u64],
    alpha_r: &[u64],
    beta_i: &[u64],
    beta_r: &[u64],
) -> TableConditionReport {
    let alpha: Vec<u64> = alpha_i.iter().chain(alpha_r).copied().collect();
    let beta: Vec<u64> = beta_i.iter().chain(beta_r).copied().collect();
    let k = alpha_i.len();
    let l = beta_i.len();

    // occurrences of each value over the entire table; a repeat inside the
    // information block and a repeat caused by a mask cell both raise the
    // count of an information value above one
    let mut counts: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    for &a in &alpha {
        for &b in &beta {
            *counts.entry(a + b).or_insert(0) += 1;
        }
    }
    let info_values: BTreeSet<u64> = alpha_i
        .iter()
        .flat_map(|&a| beta_i.iter().map(move |&b| a + b))
        .collect();
    let bad: BTreeSet<u64> = info_values
        .iter()
        .copied()
        .filter(|v| counts[v] > 1)
        .collect();
    let info_unique = info_values.len() == k * l && bad.is_empty();

    let mut violating_cells = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        for (j, &b) in beta.iter().enumerate() {
            if bad.contains(&(a + b)) {
                violating_cells.push((i, j));
            }
        }
    }

    let distinct = |xs: &[u64]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
    TableConditionReport {
        information_values_unique: info_unique,
        mask_exponents_distinct: distinct(alpha_r) && distinct(beta_r),
        violating_cells,
    }
}

/// A rendered view of the full (K+T) x (L+T) exponent-sum table.
#[derive(Debug, Clone)]
pub struct DegreeTable {
    alpha: Vec<u64>,
    beta: Vec<u64>,
    k: usize,
    l: usize,
}

impl DegreeTable {
    pub fn new(exps: &GaspExponents) -> Self {
        DegreeTable {
            alpha: exps.alpha_i.iter().chain(&exps.alpha_r).copied().collect(),
            beta: exps.beta_i.iter().chain(&exps.beta_r).copied().collect(),
            k: exps.k(),
            l: exps.l(),
        }
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> u64 {
        self.alpha[i] + self.beta[j]
    }

    pub fn rows(&self) -> usize {
        self.alpha.len()
    }

    pub fn cols(&self) -> usize {
        self.beta.len()
    }

    /// Aligned plain text with rules separating the information rows and
    /// columns from the mask ones.
    pub fn render_text(&self) -> String {
        let width = self
            .alpha
            .iter()
            .flat_map(|&a| self.beta.iter().map(move |&b| a + b))
            .chain(self.alpha.iter().copied())
            .chain(self.beta.iter().copied())
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        let rule = |out: &mut String, l: usize, cols: usize| {
            let _ = write!(out, "{}-+", "-".repeat(width + 1));
            for j in 0..cols {
                let _ = write!(out, "{}", "-".repeat(width + 1));
                if j + 1 == l && l < cols {
                    let _ = write!(out, " +");
                }
            }
            let _ = writeln!(out);
        };
        let _ = write!(out, "{:>w$} |", "", w = width + 1);
        for (j, &b) in self.beta.iter().enumerate() {
            let _ = write!(out, " {b:>width$}");
            if j + 1 == self.l && self.l < self.beta.len() {
                let _ = write!(out, " |");
            }
        }
        let _ = writeln!(out);
        rule(&mut out, self.l, self.beta.len());
        for (i, &a) in self.alpha.iter().enumerate() {
            let _ = write!(out, " {a:>width$} |");
            for (j, &b) in self.beta.iter().enumerate() {
                let _ = write!(out, " {:>width$}", a + b);
                if j + 1 == self.l && self.l < self.beta.len() {
                    let _ = write!(out, " |");
                }
            }
            let _ = writeln!(out);
            if i + 1 == self.k && self.k < self.alpha.len() {
                rule(&mut out, self.l, self.beta.len());
            }
        }
        out
    }

    /// CSV: header row of beta values, then one row per alpha value.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("alpha");
        for &b in &self.beta {
            let _ = write!(out, ",{b}");
        }
        let _ = writeln!(out);
        for &a in &self.alpha {
            let _ = write!(out, "{a}");
            for &b in &self.beta {
                let _ = write!(out, ",{}", a + b);
            }
            let _ = writeln!(out);
        }
        out
    }
}

//! Security audits for a scheme instance.
//!
//! Two layers with very different reach:
//!
//! - [`rank_audit`] checks the algebraic sufficient condition at any size:
//!   for every T-subset of the evaluation points, the two T x T mask power
//!   matrices must be invertible, so the masks seen by any T colluding
//!   servers are a bijective reshuffle of uniform randomness.
//! - [`exhaustive_mi_audit`] is the ground-truth oracle at tiny sizes: it
//!   enumerates every input and mask assignment, builds the exact joint
//!   distribution of (collusion view, inputs), and decides independence with
//!   integer arithmetic. Mutual information is reported in bits, but the
//!   pass/fail verdict never touches floating point: a subset passes iff
//!   `N(view, inputs) * q^2 == N(view)` for all cells, which is exactly
//!   "MI = 0" under uniform priors.
//!
//! On instances with distinct points the two agree. Repeated points can fail
//! the rank check while leaking nothing (two servers at one point see one
//! value twice), which is why the rank check is a screen for honest
//! instances rather than a leakage measurement.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::degree_table::GaspExponents;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::FieldMatrix;
use crate::protocol::{EncodingState, SchemeInstance};
use crate::solve::power_matrix_invertible;

/// Subset checks are exhaustive up to this many T-subsets.
pub const EXHAUSTIVE_SUBSET_LIMIT: u64 = 100_000;

/// Number of random T-subsets examined above the exhaustive limit.
pub const SAMPLED_SUBSET_COUNT: u64 = 10_000;

/// Ceiling on the assignment enumeration of [`exhaustive_mi_audit`].
pub const MI_ENUMERATION_LIMIT: u128 = 100_000_000;

const RANK_AUDIT_SEED: u64 = 0x7375_6273_6574;

/// `n choose k`, saturating at `u128::MAX`. Only compared against limits, so
/// saturation never changes a decision.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Outcome of screening T-subsets of points against the two mask power
/// matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCheckSummary {
    pub subsets_checked: u64,
    /// Whether every T-subset was examined, or only a random sample.
    pub exhaustive: bool,
    pub violation_count: u64,
    /// First few violating subsets, as sorted point indices.
    pub violating_subsets: Vec<Vec<usize>>,
}

impl SubsetCheckSummary {
    pub fn all_invertible(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks, for T-subsets S of `points`, that `[a^e]_{a in S, e in alpha_R}`
/// and `[a^e]_{a in S, e in beta_R}` are both invertible. Exhaustive when
/// there are at most [`EXHAUSTIVE_SUBSET_LIMIT`] subsets, otherwise
/// [`SAMPLED_SUBSET_COUNT`] subsets drawn with the given seed.
pub fn mask_rank_check(
    exps: &GaspExponents,
    points: &[FieldElement],
    seed: u64,
    max_recorded: usize,
) -> SubsetCheckSummary {
    let t = exps.t();
    let n = points.len();
    if t == 0 || t > n {
        return SubsetCheckSummary {
            subsets_checked: 0,
            exhaustive: true,
            violation_count: 0,
            violating_subsets: Vec::new(),
        };
    }

    let mut summary = SubsetCheckSummary {
        subsets_checked: 0,
        exhaustive: binomial(n as u64, t as u64) <= EXHAUSTIVE_SUBSET_LIMIT as u128,
        violation_count: 0,
        violating_subsets: Vec::new(),
    };
    let examine = |subset: &[usize], summary: &mut SubsetCheckSummary| {
        let pts: Vec<FieldElement> = subset.iter().map(|&i| points[i]).collect();
        let ok = power_matrix_invertible(exps.alpha_r(), &pts)
            && power_matrix_invertible(exps.beta_r(), &pts);
        summary.subsets_checked += 1;
        if !ok {
            summary.violation_count += 1;
            if summary.violating_subsets.len() < max_recorded {
                summary.violating_subsets.push(subset.to_vec());
            }
        }
    };

    if summary.exhaustive {
        for subset in (0..n).combinations(t) {
            examine(&subset, &mut summary);
        }
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut scratch: Vec<usize> = (0..n).collect();
        for _ in 0..SAMPLED_SUBSET_COUNT {
            for i in 0..t {
                let j = i + (rng.next_u64() % (n - i) as u64) as usize;
                scratch.swap(i, j);
            }
            let mut subset = scratch[..t].to_vec();
            subset.sort_unstable();
            examine(&subset, &mut summary);
        }
    }
    summary
}

/// Which audit produced a [`LeakageReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    RankCheck,
    ExhaustiveMi,
}

/// Result of a security audit. A passing report has no violating subsets
/// and, in MI mode, a maximum mutual information of exactly zero.
#[derive(Debug, Clone)]
pub struct LeakageReport {
    pub mode: AuditMode,
    pub subset_size: usize,
    pub subsets_checked: u64,
    pub exhaustive: bool,
    /// Fraction of all subsets examined; 1.0 when exhaustive.
    pub sampling_fraction: f64,
    /// Largest mutual information between a subset's view and the inputs,
    /// in bits. MI mode only; exactly 0.0 when no subset violates.
    pub max_mutual_information_bits: Option<f64>,
    pub violation_count: u64,
    /// First few violating subsets, as sorted point indices.
    pub violating_subsets: Vec<Vec<usize>>,
}

impl LeakageReport {
    pub fn passes(&self) -> bool {
        self.violation_count == 0
            && self
                .max_mutual_information_bits
                .is_none_or(|bits| bits == 0.0)
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        let mode = match self.mode {
            AuditMode::RankCheck => "rank-check",
            AuditMode::ExhaustiveMi => "exhaustive-mi",
        };
        let _ = writeln!(out, "mode,{mode}");
        let _ = writeln!(out, "subset_size,{}", self.subset_size);
        let _ = writeln!(out, "subsets_checked,{}", self.subsets_checked);
        let _ = writeln!(out, "exhaustive,{}", self.exhaustive);
        let _ = writeln!(out, "sampling_fraction,{}", self.sampling_fraction);
        if let Some(bits) = self.max_mutual_information_bits {
            let _ = writeln!(out, "max_mutual_information_bits,{bits}");
        }
        let _ = writeln!(out, "violations,{}", self.violation_count);
        let _ = writeln!(out, "pass,{}", self.passes());
        out
    }
}

impl fmt::Display for LeakageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            AuditMode::RankCheck => writeln!(f, "rank audit of {}-subsets", self.subset_size)?,
            AuditMode::ExhaustiveMi => {
                writeln!(f, "exhaustive leakage audit of {}-subsets", self.subset_size)?
            }
        }
        if self.exhaustive {
            writeln!(f, "  subsets checked: {} (all)", self.subsets_checked)?;
        } else {
            writeln!(
                f,
                "  subsets checked: {} (sampled, {:.3}% of all)",
                self.subsets_checked,
                self.sampling_fraction * 100.0
            )?;
        }
        if let Some(bits) = self.max_mutual_information_bits {
            writeln!(f, "  max mutual information: {bits:.6} bits")?;
        }
        writeln!(f, "  violating subsets: {}", self.violation_count)?;
        for subset in &self.violating_subsets {
            writeln!(f, "    {subset:?}")?;
        }
        write!(f, "  verdict: {}", if self.passes() { "pass" } else { "FAIL" })
    }
}

/// Checks the mask power matrices of every T-subset of the instance's
/// points (sampling beyond [`EXHAUSTIVE_SUBSET_LIMIT`] subsets, with a fixed
/// internal seed so reports are reproducible). Failures are report content,
/// never errors.
pub fn rank_audit(instance: &SchemeInstance) -> LeakageReport {
    let t = instance.exponents().t();
    let summary = mask_rank_check(instance.exponents(), instance.points(), RANK_AUDIT_SEED, 16);
    let total = binomial(instance.points().len() as u64, t as u64);
    LeakageReport {
        mode: AuditMode::RankCheck,
        subset_size: t,
        subsets_checked: summary.subsets_checked,
        exhaustive: summary.exhaustive,
        sampling_fraction: if summary.exhaustive || total == 0 {
            1.0
        } else {
            summary.subsets_checked as f64 / total as f64
        },
        max_mutual_information_bits: None,
        violation_count: summary.violation_count,
        violating_subsets: summary.violating_subsets,
    }
}

/// What a set of colluding servers observes: both shares at each of their
/// points. Audited views have at most T members; larger subsets model
/// collusion beyond the design tolerance.
#[derive(Debug, Clone)]
pub struct CollusionView {
    pub server_subset: Vec<usize>,
    pub observed: Vec<(FieldMatrix, FieldMatrix)>,
}

pub fn collusion_view(
    encoding: &EncodingState,
    instance: &SchemeInstance,
    server_subset: &[usize],
) -> Result<CollusionView> {
    let observed = server_subset
        .iter()
        .map(|&i| {
            let point = *instance.points().get(i).ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "server index {i} out of range for {} servers",
                    instance.servers()
                ))
            })?;
            Ok((encoding.f().eval(point)?, encoding.g().eval(point)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CollusionView {
        server_subset: server_subset.to_vec(),
        observed,
    })
}

/// Mask distribution for [`exhaustive_mi_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskMode {
    /// Masks uniform over the whole field: the honest scheme.
    Uniform,
    /// The f-side masks forced to zero: a deliberately broken scheme whose
    /// shares expose `A` directly. Exists so a silent auditor cannot pass
    /// for a working one.
    BrokenZeroR,
}

/// Ground-truth leakage oracle by full enumeration, limited to scalar
/// blocks (K = L = 1), T in {1, 2}, and q <= 7.
///
/// For every `subset_size`-subset of servers it enumerates all assignments
/// of the inputs a, b and the masks, counts the joint occurrences of
/// (view, (a, b)), and declares the subset leak-free iff the counts factor
/// exactly. Pass `subset_size = T + 1` for the negative control: one server
/// beyond the tolerance must leak on any sound instance.
pub fn exhaustive_mi_audit(
    instance: &SchemeInstance,
    subset_size: usize,
    mode: MaskMode,
) -> Result<LeakageReport> {
    let exps = instance.exponents();
    if exps.k() != 1 || exps.l() != 1 {
        return Err(Error::AuditTooLarge(format!(
            "exhaustive enumeration covers only K = L = 1, got K = {}, L = {}",
            exps.k(),
            exps.l()
        )));
    }
    let t = exps.t();
    if !(1..=2).contains(&t) {
        return Err(Error::AuditTooLarge(format!(
            "exhaustive enumeration covers only T in {{1, 2}}, got T = {t}"
        )));
    }
    let q = instance.field().modulus();
    if q > 7 {
        return Err(Error::AuditTooLarge(format!(
            "exhaustive enumeration covers only q <= 7, got q = {q}"
        )));
    }
    let n = instance.servers();
    if subset_size == 0 || subset_size > n {
        return Err(Error::InvalidParameters(format!(
            "subset size must lie in [1, {n}], got {subset_size}"
        )));
    }
    let mask_digits = match mode {
        MaskMode::Uniform => 2 * t,
        MaskMode::BrokenZeroR => t,
    };
    let assignments = (q as u128).pow(2 + mask_digits as u32);
    if assignments > MI_ENUMERATION_LIMIT {
        return Err(Error::AuditTooLarge(format!(
            "{assignments} assignments exceed the limit of {MI_ENUMERATION_LIMIT}"
        )));
    }

    let mut max_bits = 0.0f64;
    let mut violating_subsets = Vec::new();
    let mut violation_count = 0u64;
    let mut subsets_checked = 0u64;
    for subset in (0..n).combinations(subset_size) {
        subsets_checked += 1;
        let bits = subset_leakage_bits(instance, &subset, mode, q)?;
        if let Some(bits) = bits {
            // exact independence failed; bits > 0 up to rounding
            violation_count += 1;
            if violating_subsets.len() < 16 {
                violating_subsets.push(subset);
            }
            max_bits = max_bits.max(bits);
        }
    }
    Ok(LeakageReport {
        mode: AuditMode::ExhaustiveMi,
        subset_size,
        subsets_checked,
        exhaustive: true,
        sampling_fraction: 1.0,
        max_mutual_information_bits: Some(max_bits),
        violation_count,
        violating_subsets,
    })
}

/// `None` when the subset's view is exactly independent of (a, b);
/// otherwise the mutual information in bits.
fn subset_leakage_bits(
    instance: &SchemeInstance,
    subset: &[usize],
    mode: MaskMode,
    q: u64,
) -> Result<Option<f64>> {
    let exps = instance.exponents();
    let t = exps.t();
    let m = subset.len();

    // per-point power tables; everything below is plain u64 arithmetic mod q
    let points: Vec<FieldElement> = subset.iter().map(|&i| instance.points()[i]).collect();
    let pow_a_i: Vec<u64> = points.iter().map(|p| p.pow(exps.alpha_i()[0]).value()).collect();
    let pow_b_i: Vec<u64> = points.iter().map(|p| p.pow(exps.beta_i()[0]).value()).collect();
    let pow_a_r: Vec<Vec<u64>> = points
        .iter()
        .map(|p| exps.alpha_r().iter().map(|&e| p.pow(e).value()).collect())
        .collect();
    let pow_b_r: Vec<Vec<u64>> = points
        .iter()
        .map(|p| exps.beta_r().iter().map(|&e| p.pow(e).value()).collect())
        .collect();

    let mask_digits = match mode {
        MaskMode::Uniform => 2 * t,
        MaskMode::BrokenZeroR => t,
    };
    let digit_count = 2 + mask_digits;
    let total: u64 = (0..digit_count).fold(1u64, |acc, _| acc * q);

    let mut n_view: HashMap<u64, u64> = HashMap::new();
    let mut n_view_ab: HashMap<(u64, u64), u64> = HashMap::new();
    let mut digits = vec![0u64; digit_count];
    for _ in 0..total {
        let (a, b) = (digits[0], digits[1]);
        let (r_masks, s_masks): (&[u64], &[u64]) = match mode {
            MaskMode::Uniform => (&digits[2..2 + t], &digits[2 + t..]),
            MaskMode::BrokenZeroR => (&[0, 0][..t], &digits[2..]),
        };
        let mut view = 0u64;
        for i in 0..m {
            let mut f_val = a * pow_a_i[i] % q;
            for (u, &r) in r_masks.iter().enumerate() {
                f_val = (f_val + r * pow_a_r[i][u]) % q;
            }
            let mut g_val = b * pow_b_i[i] % q;
            for (v, &s) in s_masks.iter().enumerate() {
                g_val = (g_val + s * pow_b_r[i][v]) % q;
            }
            view = (view * q + f_val) * q + g_val;
        }
        *n_view.entry(view).or_insert(0) += 1;
        *n_view_ab.entry((view, a * q + b)).or_insert(0) += 1;

        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }

    let mut independent = true;
    'outer: for (&view, &count) in &n_view {
        for ab in 0..q * q {
            let joint = n_view_ab.get(&(view, ab)).copied().unwrap_or(0);
            if joint * q * q != count {
                independent = false;
                break 'outer;
            }
        }
    }
    if independent {
        return Ok(None);
    }
    let mut bits = 0.0f64;
    for (&(view, _), &joint) in &n_view_ab {
        let count = n_view[&view];
        bits += (joint as f64 / total as f64)
            * ((joint as f64 * (q * q) as f64) / count as f64).log2();
    }
    Ok(Some(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_table::{build_gasp_exponents, SchemeParams};
    use crate::field::PrimeField;
    use crate::matrix::FieldMatrix;
    use crate::protocol::{encode, partition, DEFAULT_MAX_ATTEMPTS};

    fn gasp(k: u32, l: u32, t: u32, r: u32) -> GaspExponents {
        build_gasp_exponents(&SchemeParams::new(k, l, t, r).unwrap())
    }

    fn chosen_instance(k: u32, l: u32, t: u32, r: u32, q: u64, seed: u64) -> SchemeInstance {
        SchemeInstance::choose_points(
            PrimeField::new(q).unwrap(),
            &gasp(k, l, t, r),
            seed,
            DEFAULT_MAX_ATTEMPTS,
        )
        .unwrap()
    }

    #[test]
    fn binomial_values_and_saturation() {
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(30, 5), 142_506);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        // saturates instead of overflowing
        assert!(binomial(200, 100) > MI_ENUMERATION_LIMIT);
        assert!(binomial(1 << 20, 40) > EXHAUSTIVE_SUBSET_LIMIT as u128);
    }

    #[test]
    fn chosen_points_pass_the_rank_audit_exhaustively() {
        let si = chosen_instance(2, 2, 2, 1, 101, 3);
        let report = rank_audit(&si);
        assert!(report.passes());
        assert!(report.exhaustive);
        assert_eq!(report.subsets_checked, 28);
        assert_eq!(report.sampling_fraction, 1.0);
    }

    #[test]
    fn duplicated_points_fail_the_rank_audit() {
        let exps = gasp(1, 1, 2, 1);
        let field = PrimeField::new(11).unwrap();
        let points = vec![field.element(4), field.element(4), field.element(5)];
        let si = SchemeInstance::from_parts(exps, points).unwrap();
        let report = rank_audit(&si);
        assert!(!report.passes());
        assert!(report.violating_subsets.contains(&vec![0, 1]));
    }

    #[test]
    fn sampled_mode_reports_its_fraction() {
        // C(150, 3) is above the exhaustive limit
        let exps = gasp(1, 1, 3, 1);
        let field = PrimeField::new(1009).unwrap();
        let points: Vec<FieldElement> = (1..=150).map(|v| field.element(v)).collect();
        let summary = mask_rank_check(&exps, &points, 7, 8);
        assert!(!summary.exhaustive);
        assert_eq!(summary.subsets_checked, SAMPLED_SUBSET_COUNT);
        // honest distinct points: no violations expected even sampled
        assert!(summary.all_invertible());
    }

    #[test]
    fn leakage_is_zero_at_the_design_tolerance() {
        for q in [3, 5, 7] {
            let si = chosen_instance(1, 1, 1, 1, q, 1);
            let report = exhaustive_mi_audit(&si, 1, MaskMode::Uniform).unwrap();
            assert!(report.passes(), "q = {q}: {report}");
            assert_eq!(report.max_mutual_information_bits, Some(0.0), "q = {q}");
        }
        // two colluders tolerated: every pair of the five servers is blind
        let si = chosen_instance(1, 1, 2, 1, 7, 1);
        let report = exhaustive_mi_audit(&si, 2, MaskMode::Uniform).unwrap();
        assert!(report.passes());
        assert_eq!(report.subsets_checked, 3);
    }

    #[test]
    fn one_server_beyond_the_tolerance_leaks() {
        for q in [3, 5, 7] {
            let si = chosen_instance(1, 1, 1, 1, q, 1);
            let report = exhaustive_mi_audit(&si, 2, MaskMode::Uniform).unwrap();
            assert!(!report.passes(), "q = {q}");
            assert!(report.max_mutual_information_bits.unwrap() > 0.0);
        }
    }

    #[test]
    fn zeroed_masks_leak_immediately() {
        let si = chosen_instance(1, 1, 1, 1, 5, 2);
        let report = exhaustive_mi_audit(&si, 1, MaskMode::BrokenZeroR).unwrap();
        assert!(!report.passes());
        // the f share equals a outright, so the view pins (a, b) down to
        // q candidates out of q^2: exactly log2(q) bits
        let bits = report.max_mutual_information_bits.unwrap();
        assert!((bits - (5.0f64).log2()).abs() < 1e-9, "{bits}");
    }

    #[test]
    fn oversized_parameters_are_refused() {
        let si = chosen_instance(2, 2, 1, 1, 13, 1);
        assert!(matches!(
            exhaustive_mi_audit(&si, 1, MaskMode::Uniform),
            Err(Error::AuditTooLarge(_))
        ));
        let si = chosen_instance(1, 1, 1, 1, 101, 1);
        assert!(matches!(
            exhaustive_mi_audit(&si, 1, MaskMode::Uniform),
            Err(Error::AuditTooLarge(_))
        ));
        let si = chosen_instance(1, 1, 1, 1, 7, 1);
        assert!(matches!(
            exhaustive_mi_audit(&si, 0, MaskMode::Uniform),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            exhaustive_mi_audit(&si, 9, MaskMode::Uniform),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn rank_and_leakage_verdicts_agree_on_distinct_points() {
        // honest instance: both audits pass
        let si = chosen_instance(1, 1, 2, 1, 7, 4);
        assert!(rank_audit(&si).passes());
        assert!(exhaustive_mi_audit(&si, 2, MaskMode::Uniform)
            .unwrap()
            .passes());

        // adversarial table over F_7: alpha_R = {1, 4} and 1^3 = 2^3 makes
        // the mask columns at points {1, 2} proportional, so the pair of
        // shares is a rank-1 function of the masks and information shows
        // through. Both audits must flag it.
        let exps = GaspExponents::new(vec![0], vec![1, 4], vec![0], vec![1, 2]).unwrap();
        let field = PrimeField::new(7).unwrap();
        let points: Vec<FieldElement> = [1u64, 2, 3, 4].iter().map(|&v| field.element(v)).collect();
        let si = SchemeInstance::from_parts(exps, points).unwrap();
        let rank = rank_audit(&si);
        let mi = exhaustive_mi_audit(&si, 2, MaskMode::Uniform).unwrap();
        assert!(!rank.passes());
        assert!(!mi.passes());
        assert!(rank.violating_subsets.contains(&vec![0, 1]));
        assert!(mi.violating_subsets.contains(&vec![0, 1]));
        assert!(mi.max_mutual_information_bits.unwrap() > 0.0);
    }

    #[test]
    fn collusion_views_expose_exactly_the_shares() {
        let field = PrimeField::new(7).unwrap();
        let exps = gasp(1, 1, 1, 1);
        let a = FieldMatrix::from_rows(field, 1, 1, &[2]).unwrap();
        let b = FieldMatrix::from_rows(field, 1, 1, &[3]).unwrap();
        let enc = encode(&partition(&a, &b, 1, 1).unwrap(), &exps, 5).unwrap();
        let si = chosen_instance(1, 1, 1, 1, 7, 5);
        let view = collusion_view(&enc, &si, &[1]).unwrap();
        assert_eq!(view.server_subset, vec![1]);
        assert_eq!(view.observed.len(), 1);
        let point = si.points()[1];
        assert_eq!(view.observed[0].0, enc.f().eval(point).unwrap());
        assert_eq!(view.observed[0].1, enc.g().eval(point).unwrap());
        assert!(collusion_view(&enc, &si, &[9]).is_err());
    }

    #[test]
    fn reports_render_both_ways() {
        let si = chosen_instance(1, 1, 1, 1, 7, 1);
        let report = exhaustive_mi_audit(&si, 1, MaskMode::Uniform).unwrap();
        let text = report.to_string();
        assert!(text.contains("verdict: pass"));
        let csv = report.render_csv();
        assert!(csv.starts_with("metric,value\n"));
        assert!(csv.contains("pass,true"));
        let rank = rank_audit(&si).render_csv();
        assert!(rank.contains("mode,rank-check"));
    }
}

//! Closed-form server counts, lower bounds, scheme comparison, collusion
//! tolerance, and asymptotic cost exponents.
//!
//! Everything here is exact integer or rational arithmetic; the enumeration
//! in [`crate::degree_table`] is the independent cross-check for the counts.

use num_rational::Rational64;
use num_traits::{One, Signed};

use crate::degree_table::SchemeParams;
use crate::error::{Error, Result};

/// The integer split underlying the closed-form count for `GASP_r`:
/// `T = U*r + r0` with `0 <= r0 < r`, `K + T - 1 = V*K + K0` with
/// `0 <= K0 < K`, and `W = L + U - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GasprDecomposition {
    pub u: u64,
    pub r0: u64,
    pub v: u64,
    pub k0: u64,
    pub w: u64,
}

impl GasprDecomposition {
    pub fn new(params: &SchemeParams) -> Self {
        let (k, l, t, r) = (
            params.k() as u64,
            params.l() as u64,
            params.t() as u64,
            params.r() as u64,
        );
        let u = t / r;
        let r0 = t - u * r;
        let v = (k + t - 1) / k;
        let k0 = (k + t - 1) - v * k;
        let w = l + u - 1;
        GasprDecomposition { u, r0, v, k0, w }
    }
}

/// Closed-form server count for `GASP_r` with precomputation. Agrees with
/// `count_servers(build_gasp_exponents(params), true)` for every valid
/// parameter choice.
pub fn n_pre_closed_form(params: &SchemeParams) -> u64 {
    let (k, l, r) = (params.k() as u64, params.l() as u64, params.r() as u64);
    let d = GasprDecomposition::new(params);
    let base = k * l + d.v * k;
    if d.v < d.w {
        base + r.max(d.k0) + r * (d.w - (d.v + 1)) + d.r0
    } else if d.v == d.w {
        base + d.r0.max(d.k0)
    } else {
        base + d.k0
    }
}

fn assert_klt(k: u32, l: u32, t: u32) {
    assert!(
        k >= 1 && l >= 1 && t >= 1,
        "K, L, T must all be at least 1 (got K={k}, L={l}, T={t})"
    );
}

/// Direct formula for the `r = 1` chain count with precomputation:
/// `KL + K + L + 2T - 4 - floor((T-2)/K)`, the floor taken toward minus
/// infinity (it matters at T = 1).
pub fn n_small_pre(k: u32, l: u32, t: u32) -> u64 {
    assert_klt(k, l, t);
    let (k, l, t) = (k as i64, l as i64, t as i64);
    (k * l + k + l + 2 * t - 4 - (t - 2).div_euclid(k)) as u64
}

/// The `r = 1` count minimized over the two partition orientations:
/// the floor divisor becomes min(K, L).
pub fn n_small_pre_symmetric(k: u32, l: u32, t: u32) -> u64 {
    assert_klt(k, l, t);
    let m = k.min(l) as i64;
    let (k, l, t) = (k as i64, l as i64, t as i64);
    (k * l + k + l + 2 * t - 4 - (t - 2).div_euclid(m)) as u64
}

/// Direct formula for the `r = min(K, T)` chain count with precomputation.
/// The three branches cover every orientation; when two apply (T = K with
/// L >= 2) they agree, which is asserted.
pub fn n_big_pre(k: u32, l: u32, t: u32) -> u64 {
    assert_klt(k, l, t);
    let (k, l, t) = (k as u64, l as u64, t as u64);
    if l == 1 {
        return 2 * k + t - 1;
    }
    match (t <= k, k <= t) {
        (true, false) => k * l + l * t + k - t,
        (false, true) => 2 * k * l - k + t,
        (true, true) => {
            let a = k * l + l * t + k - t;
            let b = 2 * k * l - k + t;
            assert_eq!(a, b, "overlapping branches disagree at K=T={k}");
            a
        }
        (false, false) => unreachable!("t <= k and k <= t cannot both fail"),
    }
}

/// Orientation-symmetrized big-chain count. The case split does not cover
/// `2 <= min(K,L) < T < max(K,L)`, which is reported explicitly instead of
/// being patched over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricBigCount {
    Covered(u64),
    NotCovered,
}

impl SymmetricBigCount {
    pub fn value(&self) -> Option<u64> {
        match self {
            SymmetricBigCount::Covered(v) => Some(*v),
            SymmetricBigCount::NotCovered => None,
        }
    }
}

pub fn n_big_pre_symmetric(k: u32, l: u32, t: u32) -> SymmetricBigCount {
    assert_klt(k, l, t);
    let m = k.min(l) as u64;
    let big = k.max(l) as u64;
    let (k, l, t) = (k as u64, l as u64, t as u64);
    if m == 1 {
        SymmetricBigCount::Covered(2 * big + t - 1)
    } else if t <= m {
        SymmetricBigCount::Covered(k * l + m * t + big - t)
    } else if big <= t {
        SymmetricBigCount::Covered(2 * k * l - big + t)
    } else {
        SymmetricBigCount::NotCovered
    }
}

/// Which of the two corner chain lengths needs fewer servers (both taken
/// orientation-symmetrized, both with precomputation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonVerdict {
    /// Equal counts: min(K, L) = 1 or T = 1, or K, L, T all 2.
    Tie,
    /// Strictly fewer servers with r = 1: 2 <= T <= min(K, L), not all 2.
    SmallWins,
    /// Strictly fewer servers with r = min(K, T):
    /// T > (max(K,L) * min(K,L)^2 - 2) / (min(K,L) - 1).
    BigWins,
    /// The formulas decide nothing for this parameter range.
    Undetermined,
}

pub fn compare_small_big(k: u32, l: u32, t: u32) -> ComparisonVerdict {
    assert_klt(k, l, t);
    let m = k.min(l) as u64;
    let big = k.max(l) as u64;
    let t = t as u64;
    if m == 1 || t == 1 {
        return ComparisonVerdict::Tie;
    }
    if t <= m {
        return if m == 2 && t == 2 {
            ComparisonVerdict::Tie
        } else {
            ComparisonVerdict::SmallWins
        };
    }
    // strict rational inequality T > (M m^2 - 2) / (m - 1), cross-multiplied
    if t * (m - 1) > big * m * m - 2 {
        return ComparisonVerdict::BigWins;
    }
    ComparisonVerdict::Undetermined
}

/// Lower bounds on the server count of any valid degree table with
/// precomputation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    /// `KL + max(K,L) + T - 1`, always valid.
    pub bound1: u64,
    /// `KL + max(K,L) + T`, valid when min(K, L, T) >= 2.
    pub bound2: Option<u64>,
    /// `KL + K + L + T + m - 2 - m * min(K,L,T)` for m = 1..T. Later entries
    /// can be weak to the point of vacuity (even negative); the family is
    /// strongest at m = 1.
    pub bound3_by_m: Vec<i64>,
    /// Largest applicable bound.
    pub best: u64,
}

pub fn lower_bounds(k: u32, l: u32, t: u32) -> BoundsReport {
    assert_klt(k, l, t);
    let (ki, li, ti) = (k as i64, l as i64, t as i64);
    let x = ki.min(li).min(ti);
    let bound1 = (ki * li + ki.max(li) + ti - 1) as u64;
    let bound2 = if k.min(l).min(t) >= 2 {
        Some((ki * li + ki.max(li) + ti) as u64)
    } else {
        None
    };
    let bound3_by_m: Vec<i64> = (1..=ti)
        .map(|m| ki * li + ki + li + ti + m - 2 - m * x)
        .collect();
    let mut best = bound1 as i64;
    if let Some(b2) = bound2 {
        best = best.max(b2 as i64);
    }
    for &b3 in &bound3_by_m {
        best = best.max(b3);
    }
    BoundsReport {
        bound1,
        bound2,
        bound3_by_m,
        best: best as u64,
    }
}

/// Whether the symmetrized r = 1 count meets the best lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimality {
    BoundAchieving,
    Gap(u64),
}

pub fn optimality_check(k: u32, l: u32, t: u32) -> Optimality {
    let n = n_small_pre_symmetric(k, l, t);
    let best = lower_bounds(k, l, t).best;
    debug_assert!(best <= n, "a lower bound exceeded an achieved count");
    if n == best {
        Optimality::BoundAchieving
    } else {
        Optimality::Gap(n - best)
    }
}

/// Server budget needed when a fraction delta of all servers may collude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollusionReport {
    pub feasible: bool,
    /// Real-valued threshold N solving the fixed-point equation, when one
    /// exists.
    pub threshold: Option<Rational64>,
    /// Smallest integer server count at or above the threshold.
    pub servers_required: Option<u64>,
}

/// Solves `N = servers(K, L, T)` with `T = delta * N` for the big-chain
/// count. Without precomputation `N = 2KL + 2T - 1`, so
/// `N = (2KL - 1) / (1 - 2 delta)` and any `delta >= 1/2` is infeasible.
/// With precomputation `N = 2KL - max(K,L) + T`, so
/// `N = (2KL - max(K,L)) / (1 - delta)` and every `delta < 1` is feasible.
pub fn collusion_tolerance(
    k: u32,
    l: u32,
    delta: Rational64,
    precompute: bool,
) -> Result<CollusionReport> {
    if k < 1 || l < 1 {
        return Err(Error::InvalidParameters(format!(
            "K and L must be at least 1 (got K={k}, L={l})"
        )));
    }
    if delta.is_negative() || delta >= Rational64::one() {
        return Err(Error::InvalidFraction(format!(
            "collusion fraction must satisfy 0 <= delta < 1, got {delta}"
        )));
    }
    let (ki, li) = (k as i64, l as i64);
    let threshold = if precompute {
        let numerator = Rational64::from_integer(2 * ki * li - ki.max(li));
        numerator / (Rational64::one() - delta)
    } else {
        if delta >= Rational64::new(1, 2) {
            return Ok(CollusionReport {
                feasible: false,
                threshold: None,
                servers_required: None,
            });
        }
        let numerator = Rational64::from_integer(2 * ki * li - 1);
        numerator / (Rational64::one() - Rational64::from_integer(2) * delta)
    };
    debug_assert!(threshold.is_positive());
    Ok(CollusionReport {
        feasible: true,
        servers_required: Some(threshold.ceil().to_integer() as u64),
        threshold: Some(threshold),
    })
}

/// Inputs for the asymptotic cost model: the server-side matrix
/// multiplication exponent omega, the block-split parameter epsilon in
/// [0, 1] (K = L = n^epsilon), and the collusion fraction delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityParams {
    pub omega: Rational64,
    pub epsilon: Rational64,
    pub delta: Rational64,
}

/// User-side cost exponents, all exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    /// max(epsilon + omega - epsilon*omega, 2 + c*epsilon) at the given
    /// epsilon, where c = 3 without precomputation and 2 with it.
    pub exponent: Rational64,
    /// The epsilon equalizing the two arms: (omega-2)/(omega+2) without
    /// precomputation, (omega-2)/(omega+1) with it.
    pub optimal_epsilon: Rational64,
    /// The exponent at the optimal epsilon: 5 - 12/(omega+2) without
    /// precomputation, (4*omega - 2)/(omega+1) with it.
    pub optimal_exponent: Rational64,
}

pub fn complexity_exponent(params: &ComplexityParams, precompute: bool) -> Result<ComplexityReport> {
    let two = Rational64::from_integer(2);
    if params.omega < two {
        return Err(Error::InvalidParameters(format!(
            "omega must be at least 2, got {}",
            params.omega
        )));
    }
    if params.epsilon.is_negative() || params.epsilon > Rational64::one() {
        return Err(Error::InvalidParameters(format!(
            "epsilon must lie in [0, 1], got {}",
            params.epsilon
        )));
    }
    let delta_limit = if precompute {
        Rational64::one()
    } else {
        Rational64::new(1, 2)
    };
    if params.delta.is_negative() || params.delta >= delta_limit {
        return Err(Error::InvalidFraction(format!(
            "collusion fraction must satisfy 0 <= delta < {delta_limit}, got {}",
            params.delta
        )));
    }

    let (w, e) = (params.omega, params.epsilon);
    let decode_coeff = if precompute { two } else { Rational64::from_integer(3) };
    let encode_arm = e + w - e * w;
    let decode_arm = two + decode_coeff * e;
    let exponent = encode_arm.max(decode_arm);

    let (optimal_epsilon, optimal_exponent) = if precompute {
        let eps = (w - two) / (w + Rational64::one());
        let ex = (Rational64::from_integer(4) * w - two) / (w + Rational64::one());
        (eps, ex)
    } else {
        let eps = (w - two) / (w + two);
        let ex = Rational64::from_integer(5) - Rational64::from_integer(12) / (w + two);
        (eps, ex)
    };
    // the two arms meet exactly at the optimal epsilon
    debug_assert_eq!(
        optimal_epsilon + w - optimal_epsilon * w,
        two + decode_coeff * optimal_epsilon
    );
    debug_assert_eq!(optimal_epsilon + w - optimal_epsilon * w, optimal_exponent);

    Ok(ComplexityReport {
        exponent,
        optimal_epsilon,
        optimal_exponent,
    })
}

/// Parses an exact rational from "a/b", a plain integer, or a decimal
/// literal such as "0.6" (which becomes 3/5, not the nearest float).
pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let fail = || Error::InvalidFraction(format!("cannot parse {s:?} as a rational"));
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| fail())?;
        let den: i64 = b.trim().parse().map_err(|_| fail())?;
        if den == 0 {
            return Err(fail());
        }
        return Ok(Rational64::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || frac_part.len() > 12 {
            return Err(fail());
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail());
        }
        let negative = int_part.starts_with('-');
        let int_abs: i64 = match int_part {
            "" | "-" | "+" => 0,
            _ => {
                let v: i64 = int_part.parse().map_err(|_| fail())?;
                v.abs()
            }
        };
        let den = 10i64.pow(frac_part.len() as u32);
        let frac: i64 = frac_part.parse().map_err(|_| fail())?;
        let num = int_abs * den + frac;
        return Ok(Rational64::new(if negative { -num } else { num }, den));
    }
    let v: i64 = s.parse().map_err(|_| fail())?;
    Ok(Rational64::from_integer(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_table::{build_gasp_exponents, count_servers};
    use num_traits::Zero;

    fn params(k: u32, l: u32, t: u32, r: u32) -> SchemeParams {
        SchemeParams::new(k, l, t, r).unwrap()
    }

    #[test]
    fn decomposition_for_the_reference_table() {
        let d = GasprDecomposition::new(&params(4, 4, 4, 1));
        assert_eq!(
            d,
            GasprDecomposition {
                u: 4,
                r0: 0,
                v: 1,
                k0: 3,
                w: 7
            }
        );
    }

    #[test]
    fn closed_form_reference_values() {
        assert_eq!(n_pre_closed_form(&params(4, 4, 4, 1)), 28);
        assert_eq!(n_pre_closed_form(&params(4, 4, 4, 2)), 29);
        assert_eq!(n_pre_closed_form(&params(4, 4, 11, 1)), 40);
        assert_eq!(n_pre_closed_form(&params(4, 4, 11, 4)), 39);
        for r in 1..=3 {
            assert_eq!(n_pre_closed_form(&params(3, 3, 5, r)), 20);
        }
    }

    #[test]
    fn closed_form_matches_enumeration_on_a_small_sweep() {
        for k in 1..=5u32 {
            for l in 1..=5u32 {
                for t in 1..=8u32 {
                    for r in 1..=k.min(t) {
                        let p = params(k, l, t, r);
                        assert_eq!(
                            n_pre_closed_form(&p),
                            count_servers(&build_gasp_exponents(&p), true),
                            "K={k} L={l} T={t} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn small_chain_formula_values() {
        assert_eq!(n_small_pre(4, 4, 4), 28);
        assert_eq!(n_small_pre(4, 4, 11), 40);
        // floor toward minus infinity: (1-2)/1 = -1
        assert_eq!(n_small_pre(1, 1, 1), 2);
        assert_eq!(n_small_pre_symmetric(2, 5, 3), 19);
        assert_eq!(n_small_pre_symmetric(5, 2, 3), 19);
    }

    #[test]
    fn small_chain_symmetrization_is_the_orientation_minimum() {
        for k in 1..=8u32 {
            for l in 1..=8u32 {
                for t in 1..=16u32 {
                    assert_eq!(
                        n_small_pre_symmetric(k, l, t),
                        n_small_pre(k, l, t).min(n_small_pre(l, k, t)),
                        "K={k} L={l} T={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn big_chain_formula_values() {
        assert_eq!(n_big_pre(4, 4, 11), 39);
        assert_eq!(n_big_pre(4, 4, 4), 32); // overlapping branches agree
        assert_eq!(n_big_pre(3, 1, 5), 10);
        assert_eq!(n_big_pre(2, 3, 5), 15);
        assert_eq!(n_big_pre(5, 3, 2), 24);
    }

    #[test]
    fn big_chain_symmetrization_and_its_gap() {
        assert_eq!(
            n_big_pre_symmetric(2, 5, 2),
            SymmetricBigCount::Covered(17)
        );
        assert_eq!(
            n_big_pre_symmetric(2, 5, 7),
            SymmetricBigCount::Covered(22)
        );
        assert_eq!(n_big_pre_symmetric(5, 1, 9), SymmetricBigCount::Covered(18));
        // 2 <= min < T < max is not covered by the case split
        assert_eq!(n_big_pre_symmetric(2, 5, 3), SymmetricBigCount::NotCovered);
        assert_eq!(
            n_big_pre_symmetric(2, 5, 3).value(),
            None
        );
    }

    #[test]
    fn covered_symmetrization_equals_the_orientation_minimum() {
        for k in 1..=8u32 {
            for l in 1..=8u32 {
                for t in 1..=16u32 {
                    if let SymmetricBigCount::Covered(v) = n_big_pre_symmetric(k, l, t) {
                        assert_eq!(
                            v,
                            n_big_pre(k, l, t).min(n_big_pre(l, k, t)),
                            "K={k} L={l} T={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn comparison_verdicts() {
        assert_eq!(compare_small_big(4, 4, 21), ComparisonVerdict::BigWins);
        assert_eq!(compare_small_big(4, 4, 3), ComparisonVerdict::SmallWins);
        assert_eq!(compare_small_big(2, 2, 2), ComparisonVerdict::Tie);
        assert_eq!(compare_small_big(1, 9, 5), ComparisonVerdict::Tie);
        assert_eq!(compare_small_big(9, 1, 5), ComparisonVerdict::Tie);
        assert_eq!(compare_small_big(4, 4, 1), ComparisonVerdict::Tie);
        assert_eq!(compare_small_big(4, 4, 5), ComparisonVerdict::Undetermined);
        // threshold is strict: (M m^2 - 2)/(m - 1) = 62/3 at K=L=4, so T=20
        // is undetermined and T=21 flips
        assert_eq!(compare_small_big(4, 4, 20), ComparisonVerdict::Undetermined);
    }

    #[test]
    fn verdicts_agree_with_direct_formula_comparison() {
        for k in 1..=8u32 {
            for l in 1..=8u32 {
                for t in 1..=16u32 {
                    let ns = n_small_pre_symmetric(k, l, t);
                    let nb = match n_big_pre_symmetric(k, l, t) {
                        SymmetricBigCount::Covered(v) => v,
                        SymmetricBigCount::NotCovered => continue,
                    };
                    match compare_small_big(k, l, t) {
                        ComparisonVerdict::Tie => assert_eq!(ns, nb, "K={k} L={l} T={t}"),
                        ComparisonVerdict::SmallWins => assert!(ns < nb, "K={k} L={l} T={t}"),
                        ComparisonVerdict::BigWins => assert!(nb < ns, "K={k} L={l} T={t}"),
                        ComparisonVerdict::Undetermined => {}
                    }
                }
            }
        }
    }

    #[test]
    fn bound_reference_values() {
        let b = lower_bounds(3, 3, 5);
        assert_eq!(b.bound1, 16);
        assert_eq!(b.bound2, Some(17));
        assert_eq!(b.bound3_by_m, vec![16, 14, 12, 10, 8]);
        assert_eq!(b.best, 17);

        let b = lower_bounds(1, 1, 1);
        assert_eq!(b.bound1, 2);
        assert_eq!(b.bound2, None);
        assert_eq!(b.bound3_by_m, vec![2]);
        assert_eq!(b.best, 2);

        for t in 1..=15u32 {
            assert_eq!(lower_bounds(4, 4, t).bound1, 19 + t as u64);
        }
    }

    #[test]
    fn first_family_bound_dominates_bound1_exactly_when_t_is_small() {
        for k in 1..=8u32 {
            for l in 1..=8u32 {
                for t in 1..=16u32 {
                    let b = lower_bounds(k, l, t);
                    let b3m1 = b.bound3_by_m[0];
                    assert!(b3m1 >= b.bound1 as i64, "K={k} L={l} T={t}");
                    if t < k.min(l) {
                        assert!(b3m1 > b.bound1 as i64, "K={k} L={l} T={t}");
                    } else {
                        assert_eq!(b3m1, b.bound1 as i64, "K={k} L={l} T={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn optimality_fixtures() {
        assert_eq!(optimality_check(1, 5, 7), Optimality::BoundAchieving);
        assert_eq!(optimality_check(5, 1, 7), Optimality::BoundAchieving);
        assert_eq!(optimality_check(3, 3, 1), Optimality::BoundAchieving);
        assert_eq!(optimality_check(2, 5, 2), Optimality::BoundAchieving);
        assert_eq!(optimality_check(3, 3, 5), Optimality::Gap(3));
        // At T = 2 with min(K, L) >= 3 the count exceeds the best bound by
        // exactly one; the bound-achieving region for T = 2 is min(K, L) <= 2.
        assert_eq!(optimality_check(4, 4, 2), Optimality::Gap(1));
        assert_eq!(optimality_check(3, 3, 2), Optimality::Gap(1));
    }

    #[test]
    fn collusion_reference_values() {
        let r = collusion_tolerance(2, 2, parse_ratio("0.6").unwrap(), false).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.threshold, None);

        let r = collusion_tolerance(2, 2, Rational64::zero(), true).unwrap();
        assert_eq!(r.threshold, Some(Rational64::from_integer(6)));
        assert_eq!(r.servers_required, Some(6));

        let r = collusion_tolerance(2, 2, Rational64::new(1, 2), true).unwrap();
        assert_eq!(r.threshold, Some(Rational64::from_integer(12)));
        assert_eq!(r.servers_required, Some(12));

        let r = collusion_tolerance(2, 2, parse_ratio("0.6").unwrap(), true).unwrap();
        assert_eq!(r.threshold, Some(Rational64::from_integer(15)));
        assert_eq!(r.servers_required, Some(15));

        // fractional threshold rounds up
        let r = collusion_tolerance(2, 2, Rational64::new(1, 3), false).unwrap();
        assert_eq!(r.threshold, Some(Rational64::from_integer(21)));
        let r = collusion_tolerance(2, 2, Rational64::new(1, 4), false).unwrap();
        assert_eq!(r.threshold, Some(Rational64::from_integer(14)));
        let r = collusion_tolerance(3, 2, Rational64::new(1, 4), false).unwrap();
        assert_eq!(r.threshold, Some(Rational64::new(22, 1)));

        assert!(matches!(
            collusion_tolerance(2, 2, Rational64::one(), true),
            Err(Error::InvalidFraction(_))
        ));
        assert!(matches!(
            collusion_tolerance(2, 2, Rational64::new(-1, 10), true),
            Err(Error::InvalidFraction(_))
        ));
    }

    #[test]
    fn complexity_reference_values() {
        let p = ComplexityParams {
            omega: Rational64::from_integer(3),
            epsilon: Rational64::new(1, 5),
            delta: Rational64::new(1, 4),
        };
        let r = complexity_exponent(&p, false).unwrap();
        assert_eq!(r.optimal_epsilon, Rational64::new(1, 5));
        assert_eq!(r.optimal_exponent, Rational64::new(13, 5));
        assert_eq!(r.exponent, Rational64::new(13, 5));

        let r = complexity_exponent(&p, true).unwrap();
        assert_eq!(r.optimal_epsilon, Rational64::new(1, 4));
        assert_eq!(r.optimal_exponent, Rational64::new(5, 2));

        // an ideal omega = 2 removes any incentive to split
        let p2 = ComplexityParams {
            omega: Rational64::from_integer(2),
            epsilon: Rational64::zero(),
            delta: Rational64::zero(),
        };
        assert_eq!(
            complexity_exponent(&p2, false).unwrap().optimal_exponent,
            Rational64::from_integer(2)
        );
        assert_eq!(
            complexity_exponent(&p2, true).unwrap().optimal_exponent,
            Rational64::from_integer(2)
        );

        // away from the optimum the max picks the binding arm
        let p3 = ComplexityParams {
            omega: Rational64::from_integer(3),
            epsilon: Rational64::zero(),
            delta: Rational64::zero(),
        };
        assert_eq!(
            complexity_exponent(&p3, false).unwrap().exponent,
            Rational64::from_integer(3)
        );
        let p4 = ComplexityParams {
            omega: Rational64::from_integer(3),
            epsilon: Rational64::one(),
            delta: Rational64::zero(),
        };
        assert_eq!(
            complexity_exponent(&p4, false).unwrap().exponent,
            Rational64::from_integer(5)
        );

        // delta range depends on the mode
        let bad = ComplexityParams {
            omega: Rational64::from_integer(3),
            epsilon: Rational64::new(1, 5),
            delta: parse_ratio("0.6").unwrap(),
        };
        assert!(matches!(
            complexity_exponent(&bad, false),
            Err(Error::InvalidFraction(_))
        ));
        assert!(complexity_exponent(&bad, true).is_ok());
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("0.6").unwrap(), Rational64::new(3, 5));
        assert_eq!(parse_ratio("3/5").unwrap(), Rational64::new(3, 5));
        assert_eq!(parse_ratio("2").unwrap(), Rational64::from_integer(2));
        assert_eq!(parse_ratio("2.5").unwrap(), Rational64::new(5, 2));
        assert_eq!(parse_ratio("-0.25").unwrap(), Rational64::new(-1, 4));
        assert_eq!(parse_ratio(".5").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_ratio(" 7/2 ").unwrap(), Rational64::new(7, 2));
        for bad in ["", "x", "1/0", "1.2.3", "1.", "0.5e3"] {
            assert!(parse_ratio(bad).is_err(), "{bad:?}");
        }
    }
}

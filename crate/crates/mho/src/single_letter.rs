//! Closed-form single-letter rate functions for the binary problem:
//! the side-information (joint-decoding) rate curve and its convex
//! envelope, the independent-decoding rate, the conditional-entropy
//! subset sum, and the per-helper rate floor.
//!
//! Every function here has an enumeration-based counterpart in
//! [`crate::oracle`]; the two routes share only the scalar kernels of
//! [`crate::info`] and are compared in tests, never merged.

use thiserror::Error;

use crate::info::{conv, h, InfoError};
use crate::tol::PHI_HELPER_CAP;

#[derive(Debug, Error)]
pub enum SingleLetterError {
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("distortion {d} exceeds the crossover {p}; the joint-decoding branch is undefined there")]
    DistortionAboveCrossover { d: f64, p: f64 },
    #[error("slope is undefined at d = 0 (the curve has infinite slope at the origin)")]
    SlopeAtOrigin,
    #[error("subset enumeration over {got} helpers exceeds the cap of {cap}")]
    HelperCapExceeded { cap: usize, got: usize },
}

fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
) -> Result<f64, SingleLetterError> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(SingleLetterError::ParameterRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// The curve f(D) = h(p*D) - h(D) underlying the joint-decoding rate.
pub(crate) fn f_curve(p: f64, d: f64) -> f64 {
    h(conv(p, d)) - h(d)
}

/// Signed derivative of `f_curve` in D:
/// f'(D) = (1 - 2p) log2((1 - p*D)/(p*D)) - log2((1 - D)/D).
/// Strictly negative on (0, p] for p in (0, 0.5].
pub(crate) fn f_slope(p: f64, d: f64) -> f64 {
    let c = conv(p, d);
    (1.0 - 2.0 * p) * ((1.0 - c) / c).log2() - ((1.0 - d) / d).log2()
}

/// f(D) = h(p*D) - h(D) on 0 <= D <= p <= 0.5.
pub fn wz_rate_curve(p: f64, d: f64) -> Result<f64, SingleLetterError> {
    check_range("p", p, 0.0, 0.5)?;
    check_range("D", d, 0.0, 0.5)?;
    if d > p {
        return Err(SingleLetterError::DistortionAboveCrossover { d, p });
    }
    Ok(f_curve(p, d))
}

/// Analytic derivative of the rate curve, on 0 < D <= p <= 0.5.
pub fn wz_rate_curve_slope(p: f64, d: f64) -> Result<f64, SingleLetterError> {
    check_range("p", p, 0.0, 0.5)?;
    check_range("D", d, 0.0, 0.5)?;
    if d > p {
        return Err(SingleLetterError::DistortionAboveCrossover { d, p });
    }
    if d == 0.0 {
        return Err(SingleLetterError::SlopeAtOrigin);
    }
    Ok(f_slope(p, d))
}

/// The distortion where the rate function leaves the curve f and follows
/// the tangent line through (p, 0).
#[derive(Debug, Clone, Copy)]
pub struct CriticalDistortion {
    pub value: f64,
    /// |f(D_c) + (p - D_c) f'(D_c)| with the signed derivative; zero in
    /// exact arithmetic.
    pub residual: f64,
    /// Set for p = 0, where the curve is identically zero.
    pub degenerate: bool,
}

/// Root of g(D) = f(D) + (p - D) f'(D) on (0, p), found by bisection.
///
/// g runs from negative (the tangent from (p, 0) undershoots the curve) to
/// positive as D approaches p, with a single crossing. If g never turns
/// positive the curve is already convex all the way to p and the tangent
/// segment is empty, so D_c = p; that is the p = 0.5 case.
pub fn wz_critical_distortion(p: f64) -> Result<CriticalDistortion, SingleLetterError> {
    check_range("p", p, 0.0, 0.5)?;
    if p == 0.0 {
        return Ok(CriticalDistortion {
            value: 0.0,
            residual: 0.0,
            degenerate: true,
        });
    }
    let g = |d: f64| f_curve(p, d) + (p - d) * f_slope(p, d);
    let mut lo = 1e-12;
    let mut hi = p - 1e-12;
    if hi <= lo || g(hi) <= 0.0 {
        return Ok(CriticalDistortion {
            value: p,
            residual: f_curve(p, p).abs(),
            degenerate: false,
        });
    }
    // For tiny p the root sits below the fixed left endpoint; walk the
    // endpoint down until it brackets (g tends to minus infinity at 0+).
    while g(lo) > 0.0 && lo > 1e-300 {
        lo *= 1e-3;
    }
    // The root scales like p^2 for small p, so a fixed absolute width would
    // be hopeless; bisect until the interval can no longer be split.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    Ok(CriticalDistortion {
        value,
        residual: g(value).abs(),
        degenerate: false,
    })
}

pub(crate) fn wz_rate_unchecked(p: f64, d: f64, critical: &CriticalDistortion) -> f64 {
    if d <= critical.value {
        f_curve(p, d)
    } else {
        -(p - d) * f_slope(p, critical.value)
    }
}

/// Joint-decoding rate: f(D) up to the critical distortion, then the
/// tangent line through (p, 0). Equals the lower convex envelope of f and
/// that endpoint.
pub fn wz_rate(p: f64, d: f64) -> Result<f64, SingleLetterError> {
    check_range("p", p, 0.0, 0.5)?;
    check_range("D", d, 0.0, 0.5)?;
    if d > p {
        return Err(SingleLetterError::DistortionAboveCrossover { d, p });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let critical = wz_critical_distortion(p)?;
    Ok(wz_rate_unchecked(p, d, &critical))
}

/// Independent-decoding rate 1 - h(d) on [0, 0.5].
pub fn independent_rate(d: f64) -> Result<f64, SingleLetterError> {
    check_range("d", d, 0.0, 0.5)?;
    Ok(1.0 - h(d))
}

/// Validated (crossover, distortion) pairs for the conditional-entropy
/// subset sum; the empty list is the no-helper case.
#[derive(Debug, Clone, Default)]
pub struct PhiArgs {
    pairs: Vec<(f64, f64)>,
}

impl PhiArgs {
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self, SingleLetterError> {
        for &(p, d) in pairs {
            check_range("p", p, 0.0, 0.5)?;
            check_range("d", d, 0.0, 0.5)?;
        }
        Ok(Self {
            pairs: pairs.to_vec(),
        })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The alternating subset sum over end-to-end crossovers q_v = p_v * d_v:
/// sum over non-empty T of (-1)^(|T|+1) h(conv of q_v for v in T), and 1
/// for the empty helper set.
///
/// Exact against enumeration for up to two helpers; for three or more it is
/// an upper bound on the enumerated conditional entropy (see the oracle
/// tests for the pinned deviation).
pub fn phi(args: &PhiArgs) -> Result<f64, SingleLetterError> {
    phi_with_cap(args, PHI_HELPER_CAP)
}

/// `phi` with an explicit helper-count cap (the sum has 2^|V| terms).
pub fn phi_with_cap(args: &PhiArgs, cap: usize) -> Result<f64, SingleLetterError> {
    if args.len() > cap {
        return Err(SingleLetterError::HelperCapExceeded {
            cap,
            got: args.len(),
        });
    }
    Ok(phi_unchecked(&args.pairs))
}

pub(crate) fn phi_unchecked(pairs: &[(f64, f64)]) -> f64 {
    let k = pairs.len();
    if k == 0 {
        return 1.0;
    }
    let q: Vec<f64> = pairs.iter().map(|&(p, d)| conv(p, d)).collect();
    // Subset convolutions by dynamic programming over bit masks: drop the
    // lowest set bit to reuse the already-computed remainder.
    let mut subset_conv = vec![0.0f64; 1 << k];
    let mut total = 0.0;
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let c = if rest == 0 {
            q[low]
        } else {
            conv(subset_conv[rest], q[low])
        };
        subset_conv[mask] = c;
        if mask.count_ones() % 2 == 1 {
            total += h(c);
        } else {
            total -= h(c);
        }
    }
    total
}

/// Which decoding strategy produced a helper's rate floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeBranch {
    Independent,
    Joint,
}

impl std::fmt::Display for DecodeBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecodeBranch::Independent => "independent",
            DecodeBranch::Joint => "joint",
        })
    }
}

/// A helper's rate floor together with the branch that attains it.
#[derive(Debug, Clone, Copy)]
pub struct RateStar {
    pub rate: f64,
    pub branch: DecodeBranch,
}

/// Validated per-helper parameters: crossover p, distortion cap, operating
/// distortion d, and the time-sharing weight rho.
#[derive(Debug, Clone, Copy)]
pub struct HelperParams {
    p: f64,
    cap: f64,
    d: f64,
    rho: f64,
}

impl HelperParams {
    pub fn new(p: f64, cap: f64, d: f64, rho: f64) -> Result<Self, SingleLetterError> {
        check_range("p", p, 0.0, 0.5)?;
        check_range("D", cap, 0.0, 0.5)?;
        check_range("d", d, 0.0, 0.5)?;
        check_range("rho", rho, 0.0, 1.0)?;
        if cap > p {
            return Err(SingleLetterError::DistortionAboveCrossover { d: cap, p });
        }
        Ok(Self { p, cap, d, rho })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// The per-helper rate floor.
///
/// Operating below the cap (d < D) forces the independent branch 1 - h(d).
/// At or above the cap the floor is the larger of the independent branch
/// and the time-shared joint branch rho (1 - h(D)) + (1 - rho) wz_rate(p, D),
/// with ties tagged as joint.
pub fn helper_rate_star(params: &HelperParams) -> RateStar {
    let independent = 1.0 - h(params.d);
    if params.d < params.cap {
        return RateStar {
            rate: independent,
            branch: DecodeBranch::Independent,
        };
    }
    let critical =
        wz_critical_distortion(params.p).expect("validated crossover always has a root");
    let wz = if params.p == 0.0 {
        0.0
    } else {
        wz_rate_unchecked(params.p, params.cap, &critical)
    };
    let joint = params.rho * (1.0 - h(params.cap)) + (1.0 - params.rho) * wz;
    if independent > joint {
        RateStar {
            rate: independent,
            branch: DecodeBranch::Independent,
        }
    } else {
        RateStar {
            rate: joint,
            branch: DecodeBranch::Joint,
        }
    }
}

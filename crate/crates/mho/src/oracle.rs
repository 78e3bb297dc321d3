//! Brute-force ground truth.
//!
//! This module rebuilds every closed-form quantity in the crate by explicit
//! enumeration over dense joint tables: cascade pmfs for the conditional
//! entropy of the primary source, a sampled lower convex envelope for the
//! binary side-information rate function, and direct evaluation of the
//! general achievable-rate expressions for user-supplied pmfs and test
//! channels.
//!
//! Nothing here calls the closed forms it is meant to check. The only code
//! shared with the rest of the crate is the scalar entropy and convolution
//! kernels from [`crate::info`].

use thiserror::Error;

use crate::info::{conv, h, BinaryTestChannel, InfoError, JointPmf, Probability};
use crate::tol::ORACLE_HELPER_CAP;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error("oracle supports at most {cap} helpers, got {got}")]
    HelperCapExceeded { cap: usize, got: usize },
    #[error("cascade parameter {value} outside [0, 0.5]")]
    ParameterRange { value: f64 },
    #[error("envelope grid must have at least 100 points, got {got}")]
    GridTooCoarse { got: usize },
    #[error("crossover p = 0 makes the rate curve identically zero; no envelope to build")]
    DegenerateCrossover,
    #[error("distortion {value} outside the envelope domain [0, {max}]")]
    DistortionRange { value: f64, max: f64 },
    #[error("channel bank has {channels} channels but the pmf has {helpers} helper sources")]
    BankSizeMismatch { channels: usize, helpers: usize },
    #[error("test-channel extension needs binary sources, variable {index} has size {size}")]
    NonBinaryVariable { index: usize, size: usize },
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("subset index {index} outside 1..={n}")]
    SubsetIndexRange { index: usize, n: usize },
    #[error("subset contains a repeated index")]
    RepeatedSubsetIndex,
    #[error("pmf is not conditionally independent given the primary source \
             (max factorization residual {residual:.3e})")]
    NotConditionallyIndependent { residual: f64 },
}

/// Parameters of one helper chain: the source is a BSC(p) copy of the
/// primary bit and its description is a BSC(d) copy of the source.
#[derive(Debug, Clone)]
pub struct CascadeSpec {
    helpers: Vec<(Probability, Probability)>,
}

impl CascadeSpec {
    /// Validates each (p, d) pair into [0, 0.5] and caps the helper count.
    pub fn new(helpers: &[(f64, f64)]) -> Result<Self, OracleError> {
        if helpers.len() > ORACLE_HELPER_CAP {
            return Err(OracleError::HelperCapExceeded {
                cap: ORACLE_HELPER_CAP,
                got: helpers.len(),
            });
        }
        let mut validated = Vec::with_capacity(helpers.len());
        for &(p, d) in helpers {
            for value in [p, d] {
                if !value.is_finite() || !(0.0..=0.5).contains(&value) {
                    return Err(OracleError::ParameterRange { value });
                }
            }
            validated.push((Probability::new(p)?, Probability::new(d)?));
        }
        Ok(Self { helpers: validated })
    }

    pub fn helper_count(&self) -> usize {
        self.helpers.len()
    }

    pub fn helpers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.helpers.iter().map(|&(p, d)| (p.get(), d.get()))
    }
}

fn bsc(q: f64, a: usize, b: usize) -> f64 {
    if a == b {
        1.0 - q
    } else {
        q
    }
}

/// Explicit joint table over (X1, X_v, U_v for every helper v).
///
/// The primary bit is uniform; helper v is X1 flipped with probability p_v
/// and its description U_v is X_v flipped with probability d_v, all flips
/// independent. Variables are labeled X1 and then X{i}, U{i} for the i-th
/// source, i starting at 2.
pub fn cascade_pmf(spec: &CascadeSpec) -> Result<JointPmf, OracleError> {
    let k = spec.helper_count();
    let mut variables = Vec::with_capacity(2 * k + 1);
    variables.push(("X1".to_string(), 2));
    for j in 0..k {
        variables.push((format!("X{}", j + 2), 2));
        variables.push((format!("U{}", j + 2), 2));
    }
    let n_vars = variables.len();
    let params: Vec<(f64, f64)> = spec.helpers().collect();
    let mut table = vec![0.0f64; 1 << n_vars];
    for (i, w) in table.iter_mut().enumerate() {
        // Row-major with the last variable fastest: variable m holds bit
        // (n_vars - 1 - m) of the flat index.
        let bit = |m: usize| (i >> (n_vars - 1 - m)) & 1;
        let x1 = bit(0);
        let mut weight = 0.5;
        for (j, &(p, d)) in params.iter().enumerate() {
            let xv = bit(1 + 2 * j);
            let uv = bit(2 + 2 * j);
            weight *= bsc(p, x1, xv) * bsc(d, xv, uv);
        }
        *w = weight;
    }
    Ok(JointPmf::new(variables, table)?)
}

/// H(X1 | U_V) by exhaustive enumeration of the cascade table.
///
/// This is the ground truth that the closed-form subset sum is measured
/// against; with no helpers it is H(X1) = 1.
pub fn phi_oracle(spec: &CascadeSpec) -> Result<f64, OracleError> {
    if spec.helper_count() == 0 {
        return Ok(1.0);
    }
    let pmf = cascade_pmf(spec)?;
    let u_labels: Vec<String> = (0..spec.helper_count())
        .map(|j| format!("U{}", j + 2))
        .collect();
    let given: Vec<&str> = u_labels.iter().map(String::as_str).collect();
    Ok(pmf.conditional_entropy(&["X1"], &given)?)
}

/// Sampled lower convex envelope of the curve D -> h(p*D) - h(D) together
/// with the point (p, 0).
///
/// Built from raw kernel evaluations only, so it is an independent check of
/// the closed-form rate function, which is exactly this envelope in the
/// limit of a dense grid.
#[derive(Debug, Clone)]
pub struct WzEnvelope {
    p: f64,
    hull: Vec<(f64, f64)>,
    samples: Vec<(f64, f64)>,
}

impl WzEnvelope {
    pub fn crossover(&self) -> f64 {
        self.p
    }

    /// Hull vertices, ascending in D.
    pub fn hull(&self) -> &[(f64, f64)] {
        &self.hull
    }

    /// The envelope evaluated back on the construction grid.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Piecewise-linear envelope value at a distortion in [0, p].
    pub fn value_at(&self, d: f64) -> Result<f64, OracleError> {
        if !d.is_finite() || d < 0.0 || d > self.p {
            return Err(OracleError::DistortionRange {
                value: d,
                max: self.p,
            });
        }
        let hull = &self.hull;
        if d <= hull[0].0 {
            return Ok(hull[0].1);
        }
        let last = hull.len() - 1;
        if d >= hull[last].0 {
            return Ok(hull[last].1);
        }
        // First vertex strictly right of d; its predecessor starts the segment.
        let hi = hull.partition_point(|&(x, _)| x <= d);
        let (x0, y0) = hull[hi - 1];
        let (x1, y1) = hull[hi];
        let t = (d - x0) / (x1 - x0);
        Ok(y0 + t * (y1 - y0))
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Samples D -> h(p*D) - h(D) on a uniform grid over [0, p], adds the point
/// (p, 0), and returns the lower convex envelope of that point set.
pub fn wz_envelope_oracle(p: f64, grid_size: usize) -> Result<WzEnvelope, OracleError> {
    if !p.is_finite() || p < 0.0 || p > 0.5 {
        return Err(OracleError::ParameterRange { value: p });
    }
    if p == 0.0 {
        return Err(OracleError::DegenerateCrossover);
    }
    if grid_size < 100 {
        return Err(OracleError::GridTooCoarse { got: grid_size });
    }
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(grid_size + 2);
    for j in 0..=grid_size {
        let d = p * (j as f64 / grid_size as f64);
        points.push((d, h(conv(p, d)) - h(d)));
    }
    points.push((p, 0.0));
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // Collapse duplicate abscissas keeping the lowest value; the chain scan
    // assumes strictly increasing x and the pair at D = p is vertical.
    let mut dedup: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for (x, y) in points {
        match dedup.last_mut() {
            Some(last) if last.0 == x => last.1 = last.1.min(y),
            _ => dedup.push((x, y)),
        }
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(dedup.len());
    for pt in dedup {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0.0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let mut envelope = WzEnvelope {
        p,
        hull,
        samples: Vec::with_capacity(grid_size + 1),
    };
    for j in 0..=grid_size {
        let d = p * (j as f64 / grid_size as f64);
        let v = envelope.value_at(d)?;
        envelope.samples.push((d, v));
    }
    Ok(envelope)
}

/// One test channel per helper source, ordered by source index 2..=N.
#[derive(Debug, Clone)]
pub struct TestChannelBank {
    channels: Vec<BinaryTestChannel>,
}

impl TestChannelBank {
    pub fn new(channels: Vec<BinaryTestChannel>) -> Self {
        Self { channels }
    }

    pub fn from_crossovers(crossovers: &[f64]) -> Result<Self, OracleError> {
        let channels = crossovers
            .iter()
            .map(|&d| BinaryTestChannel::new(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[BinaryTestChannel] {
        &self.channels
    }
}

/// Builds p(x_1..x_n, u_2..u_n) = p(x) * prod_i p(u_i | x_i) over fresh
/// labels x1..xn, u2..un, treating the pmf's variables positionally as the
/// sources in index order.
fn extend_with_channels(
    pmf: &JointPmf,
    bank: &TestChannelBank,
) -> Result<JointPmf, OracleError> {
    let sizes: Vec<usize> = pmf.variables().map(|(_, s)| s).collect();
    let n = sizes.len();
    for (index, &size) in sizes.iter().enumerate() {
        if size != 2 {
            return Err(OracleError::NonBinaryVariable {
                index: index + 1,
                size,
            });
        }
    }
    if bank.channels().len() != n - 1 {
        return Err(OracleError::BankSizeMismatch {
            channels: bank.channels().len(),
            helpers: n - 1,
        });
    }
    let mut variables: Vec<(String, usize)> = (1..=n).map(|i| (format!("x{i}"), 2)).collect();
    variables.extend((2..=n).map(|i| (format!("u{i}"), 2)));
    let x_weights = pmf.weights();
    let helper_count = n - 1;
    let mut table = vec![0.0f64; 1 << (2 * n - 1)];
    for (i, w) in table.iter_mut().enumerate() {
        let x_part = i >> helper_count;
        let base = x_weights[x_part];
        if base == 0.0 {
            continue;
        }
        let mut weight = base;
        for (j, channel) in bank.channels().iter().enumerate() {
            // x_{j+2} is bit (n - 2 - j) of the x block, u_{j+2} is bit
            // (helper_count - 1 - j) of the u block.
            let xi = (x_part >> (n - 2 - j)) & 1;
            let ui = (i >> (helper_count - 1 - j)) & 1;
            weight *= bsc(channel.crossover(), xi, ui);
        }
        *w = weight;
    }
    Ok(JointPmf::new(variables, table)?)
}

/// Largest deviation of the source pmf from the factorization
/// p(x) = p(x1) * prod_i p(x_i | x1).
fn ci_factorization_residual(pmf: &JointPmf) -> f64 {
    let weights = pmf.weights();
    let n = pmf.variables().count();
    let x1_of = |i: usize| (i >> (n - 1)) & 1;
    let mut p_x1 = [0.0f64; 2];
    for (i, &w) in weights.iter().enumerate() {
        p_x1[x1_of(i)] += w;
    }
    // Pairwise conditionals p(x_i = 1-by-bit | x1).
    let mut pair = vec![[[0.0f64; 2]; 2]; n - 1];
    for (i, &w) in weights.iter().enumerate() {
        let x1 = x1_of(i);
        for j in 0..n - 1 {
            let xi = (i >> (n - 2 - j)) & 1;
            pair[j][x1][xi] += w;
        }
    }
    let mut residual = 0.0f64;
    for (i, &w) in weights.iter().enumerate() {
        let x1 = x1_of(i);
        if p_x1[x1] == 0.0 {
            continue;
        }
        let mut product = p_x1[x1];
        for j in 0..n - 1 {
            let xi = (i >> (n - 2 - j)) & 1;
            product *= pair[j][x1][xi] / p_x1[x1];
        }
        residual = residual.max((w - product).abs());
    }
    residual
}

/// Evaluates the general achievable-rate bound for one subset of sources by
/// exhaustive enumeration.
///
/// For a subset containing the primary source this is
/// H(x1 | u_{S^c}) + sum over helpers i in S of I(x_i; u_i | x1); for a
/// subset of helpers only, it is the sum of their I(x_i; u_i | x1) terms.
/// With `strict_ci` set, a source pmf that does not factorize as
/// conditionally independent helpers given the primary source is rejected.
pub fn subset_sum_rate_oracle(
    pmf: &JointPmf,
    bank: &TestChannelBank,
    subset: &[usize],
    strict_ci: bool,
) -> Result<f64, OracleError> {
    let n = pmf.variables().count();
    if subset.is_empty() {
        return Err(OracleError::EmptySubset);
    }
    let mut members = std::collections::BTreeSet::new();
    for &index in subset {
        if index == 0 || index > n {
            return Err(OracleError::SubsetIndexRange { index, n });
        }
        if !members.insert(index) {
            return Err(OracleError::RepeatedSubsetIndex);
        }
    }
    if strict_ci {
        let residual = ci_factorization_residual(pmf);
        if residual > 1e-12 {
            return Err(OracleError::NotConditionallyIndependent { residual });
        }
    }
    let ext = extend_with_channels(pmf, bank)?;
    let mi_given_x1 = |i: usize| -> Result<f64, InfoError> {
        let xi = format!("x{i}");
        let ui = format!("u{i}");
        // I(x_i; u_i | x1) from four entropies.
        Ok(ext.entropy(&[&xi, "x1"])? + ext.entropy(&[&ui, "x1"])?
            - ext.entropy(&[&xi, &ui, "x1"])?
            - ext.entropy(&["x1"])?)
    };
    if members.contains(&1) {
        let complement: Vec<String> = (2..=n)
            .filter(|i| !members.contains(i))
            .map(|i| format!("u{i}"))
            .collect();
        let complement_refs: Vec<&str> = complement.iter().map(String::as_str).collect();
        let mut total = ext.conditional_entropy(&["x1"], &complement_refs)?;
        for &i in members.iter().filter(|&&i| i != 1) {
            total += mi_given_x1(i)?;
        }
        Ok(total)
    } else {
        let mut total = 0.0;
        for &i in &members {
            total += mi_given_x1(i)?;
        }
        Ok(total)
    }
}

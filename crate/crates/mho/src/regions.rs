//! Rate-region objects for the helper-assisted binary coding problem:
//! the outer bound and the achievable inner bound when every source must
//! be reconstructed, and the exact region when only the primary source
//! matters. Regions support membership queries, boundary slices, gap
//! measurement, and the lossless limit reduction.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::hull::{self, LowerEnvelope};
use crate::info::{h, h_inv};
use crate::single_letter::{
    helper_rate_star, phi_unchecked, wz_rate, DecodeBranch, HelperParams, SingleLetterError,
};
use crate::tol::{DEFAULT_MAX_N, GRID_STEP_DEFAULT, PHI_HELPER_CAP};

/// Vertices closer than this in every coordinate are collapsed to one.
const VERTEX_DEDUP_TOL: f64 = 1e-12;

/// Hard ceiling on generated inner vertices, guarding against grids fine
/// enough to exhaust memory.
const VERTEX_BUDGET: usize = 4_000_000;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error(transparent)]
    SingleLetter(#[from] SingleLetterError),
    #[error("a problem needs at least two sources, got {got}")]
    SourceCountRange { got: usize },
    #[error("source count {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("expected {expected} helper parameters, got {got}")]
    HelperCountMismatch { expected: usize, got: usize },
    #[error("helper {index} crossover {value} outside (0, 0.5]")]
    CrossoverRange { index: usize, value: f64 },
    #[error("helper {index} distortion cap {value} outside [0, {max}]")]
    DistortionCapRange { index: usize, value: f64, max: f64 },
    #[error("grid step {step} must be positive and finite")]
    GridStep { step: f64 },
    #[error("operation requires a {expected} spec, got {got}")]
    ModeMismatch { expected: Mode, got: Mode },
    #[error("rate {index} is {value}; rates must be finite and nonnegative")]
    RateRange { index: usize, value: f64 },
    #[error("expected {expected} rate coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("helper rate {value} outside [0, 1]")]
    HelperRateRange { value: f64 },
    #[error("an inner region needs at least one achievable vertex")]
    EmptyVertexList,
    #[error("regions were built from different problem specs")]
    SpecMismatch,
    #[error("no probe point was feasible for both regions")]
    NoFeasibleProbes,
    #[error("the reduction requires every distortion cap to be zero; cap {index} is {value}")]
    NonzeroCap { index: usize, value: f64 },
    #[error(
        "the lossless bounds failed to coincide: gap {max_gap}, {one_sided} one-sided probes"
    )]
    ReductionGap { max_gap: f64, one_sided: usize },
    #[error("the grid would generate {requested} vertices, over the {limit} budget")]
    VertexBudget { limit: usize, requested: usize },
}

/// Whether helper reconstructions carry distortion constraints (strong) or
/// only the primary source must be recovered (weak).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Weak,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        })
    }
}

/// Problem parameters: source count, helper crossovers, and (in strong
/// mode) per-helper distortion caps.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    n: usize,
    crossovers: Vec<f64>,
    caps: Vec<f64>,
    mode: Mode,
}

impl ProblemSpec {
    pub fn strong(crossovers: &[f64], caps: &[f64]) -> Result<Self, RegionError> {
        let spec = Self::validated(crossovers, Mode::Strong)?;
        if caps.len() != crossovers.len() {
            return Err(RegionError::HelperCountMismatch {
                expected: crossovers.len(),
                got: caps.len(),
            });
        }
        for (i, (&cap, &p)) in caps.iter().zip(crossovers).enumerate() {
            if !cap.is_finite() || !(0.0..=p).contains(&cap) {
                return Err(RegionError::DistortionCapRange {
                    index: i + 2,
                    value: cap,
                    max: p,
                });
            }
        }
        Ok(Self {
            caps: caps.to_vec(),
            ..spec
        })
    }

    pub fn weak(crossovers: &[f64]) -> Result<Self, RegionError> {
        Self::validated(crossovers, Mode::Weak)
    }

    fn validated(crossovers: &[f64], mode: Mode) -> Result<Self, RegionError> {
        if crossovers.is_empty() {
            return Err(RegionError::SourceCountRange { got: 1 });
        }
        for (i, &p) in crossovers.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 || p > 0.5 {
                return Err(RegionError::CrossoverRange {
                    index: i + 2,
                    value: p,
                });
            }
        }
        Ok(Self {
            n: crossovers.len() + 1,
            crossovers: crossovers.to_vec(),
            caps: Vec::new(),
            mode,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn helper_count(&self) -> usize {
        self.n - 1
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Helper crossovers p_i, indexed by helper (source 2 first).
    pub fn crossovers(&self) -> &[f64] {
        &self.crossovers
    }

    /// Distortion caps D_i in the same order; empty in weak mode.
    pub fn caps(&self) -> &[f64] {
        &self.caps
    }
}

/// Sweep configuration: distortion grid step and the source-count cap.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    step: f64,
    max_sources: usize,
}

impl GridConfig {
    pub fn new(step: f64) -> Result<Self, RegionError> {
        if !step.is_finite() || step <= 0.0 {
            return Err(RegionError::GridStep { step });
        }
        Ok(Self {
            step,
            max_sources: DEFAULT_MAX_N,
        })
    }

    pub fn with_max_sources(mut self, max_sources: usize) -> Self {
        self.max_sources = max_sources;
        self
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max_sources(&self) -> usize {
        self.max_sources
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            step: GRID_STEP_DEFAULT,
            max_sources: DEFAULT_MAX_N,
        }
    }
}

/// A nonnegative rate vector, one entry per source.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTuple(Vec<f64>);

impl RateTuple {
    pub fn new(rates: Vec<f64>) -> Result<Self, RegionError> {
        for (index, &value) in rates.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(RegionError::RateRange { index, value });
            }
        }
        Ok(Self(rates))
    }

    pub fn rates(&self) -> &[f64] {
        &self.0
    }
}

/// The distortion and time-sharing parameters behind one generated
/// constraint, per helper in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintParams {
    pub d: Vec<f64>,
    pub rho: Vec<f64>,
}

/// One lower bound on a subset sum of rates.
#[derive(Debug, Clone)]
pub struct SumRateConstraint {
    pub subset: BTreeSet<usize>,
    pub bound: f64,
    pub params: ConstraintParams,
}

/// One achievable corner of the inner bound, together with the decoding
/// choices that realize it.
#[derive(Debug, Clone)]
pub struct AchievableTuple {
    rates: RateTuple,
    q_complement: BTreeSet<usize>,
    d_values: Vec<f64>,
    strategies: Vec<DecodeBranch>,
}

impl AchievableTuple {
    pub fn rates(&self) -> &RateTuple {
        &self.rates
    }

    /// Source indices of helpers decoded independently of the primary
    /// source (their operating distortion is swept below the cap).
    pub fn q_complement(&self) -> &BTreeSet<usize> {
        &self.q_complement
    }

    /// Operating distortions for the helpers in `q_complement`, in
    /// ascending source order.
    pub fn d_values(&self) -> &[f64] {
        &self.d_values
    }

    /// Decoding branch per helper in source order.
    pub fn strategies(&self) -> &[DecodeBranch] {
        &self.strategies
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Outer,
    Inner,
    Weak,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Outer => "outer",
            RegionKind::Inner => "inner",
            RegionKind::Weak => "weak",
        })
    }
}

#[derive(Debug, Clone)]
pub struct OuterRegion {
    spec: ProblemSpec,
    grid: GridConfig,
    /// Per-helper rate floors wz_rate(p_i, D_i), the least admissible
    /// helper rate over every parameter choice.
    floors: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct InnerRegion {
    spec: ProblemSpec,
    vertices: Vec<AchievableTuple>,
    /// Dominance-pruned rate vectors generating the hull.
    generators: Vec<Vec<f64>>,
    /// Exact planar boundary for two-source problems.
    envelope: Option<LowerEnvelope>,
}

#[derive(Debug, Clone)]
pub struct WeakRegion {
    spec: ProblemSpec,
}

/// A rate region with membership semantics fixed by its kind.
#[derive(Debug, Clone)]
pub enum RateRegion {
    Outer(OuterRegion),
    Inner(InnerRegion),
    Weak(WeakRegion),
}

/// Evaluates the family of subset-sum constraints at the per-tuple witness
/// parameters and returns the least admissible primary rate, or `None`
/// when some helper rate sits below its floor even after `slack`.
///
/// For a tuple with helper rates r_i, the loosest parameter choice sets
/// each operating distortion to t_i with 1 - h(t_i) = r_i (clamped to
/// [0, 0.5]); the subset-sum family is monotone in each distortion, so
/// this witness decides existential membership over the whole continuous
/// parameter family exactly, with no grid error.
fn min_rate1_family(
    crossovers: &[f64],
    floors: &[f64],
    helper_rates: &[f64],
    slack: f64,
) -> Option<f64> {
    let k = crossovers.len();
    for (r, f) in helper_rates.iter().zip(floors) {
        if *r < f - slack {
            return None;
        }
    }
    let witnesses: Vec<f64> = helper_rates.iter().map(|r| h_inv(1.0 - r)).collect();
    let mut pairs = Vec::with_capacity(k);
    let mut best = 0.0f64;
    for mask in 0u32..(1 << k) {
        pairs.clear();
        let mut transferred = 0.0;
        for i in 0..k {
            if mask >> i & 1 == 1 {
                // Helper i stays in the conditioning set of the entropy term.
                pairs.push((crossovers[i], witnesses[i]));
            } else {
                // Helper i joins the subset sum, contributing its floor and
                // absorbing its own rate.
                transferred += floors[i] - helper_rates[i];
            }
        }
        best = best.max(phi_unchecked(&pairs) + transferred);
    }
    Some(best)
}

impl RateRegion {
    pub fn kind(&self) -> RegionKind {
        match self {
            RateRegion::Outer(_) => RegionKind::Outer,
            RateRegion::Inner(_) => RegionKind::Inner,
            RateRegion::Weak(_) => RegionKind::Weak,
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        match self {
            RateRegion::Outer(r) => &r.spec,
            RateRegion::Inner(r) => &r.spec,
            RateRegion::Weak(r) => &r.spec,
        }
    }

    /// Achievable corners, present only for inner regions.
    pub fn vertices(&self) -> Option<&[AchievableTuple]> {
        match self {
            RateRegion::Inner(r) => Some(&r.vertices),
            _ => None,
        }
    }

    /// The sweep configuration the region was built with, where one was
    /// taken.
    pub fn grid(&self) -> Option<&GridConfig> {
        match self {
            RateRegion::Outer(r) => Some(&r.grid),
            _ => None,
        }
    }

    /// Least primary rate putting `helper_rates` inside the region, or
    /// `None` when no primary rate can (helper rate below a floor, or
    /// outside the hull's helper-rate range).
    pub fn min_rate1(&self, helper_rates: &[f64]) -> Result<Option<f64>, RegionError> {
        self.min_rate1_with_slack(helper_rates, 0.0)
    }

    fn min_rate1_with_slack(
        &self,
        helper_rates: &[f64],
        slack: f64,
    ) -> Result<Option<f64>, RegionError> {
        let expected = self.spec().helper_count();
        if helper_rates.len() != expected {
            return Err(RegionError::DimensionMismatch {
                expected,
                got: helper_rates.len(),
            });
        }
        for (index, &value) in helper_rates.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(RegionError::RateRange {
                    index: index + 1,
                    value,
                });
            }
        }
        Ok(match self {
            RateRegion::Outer(r) => {
                min_rate1_family(&r.spec.crossovers, &r.floors, helper_rates, slack)
            }
            RateRegion::Weak(r) => {
                let floors = vec![0.0; r.spec.helper_count()];
                min_rate1_family(&r.spec.crossovers, &floors, helper_rates, slack)
            }
            RateRegion::Inner(r) => {
                if slack == 0.0 {
                    r.min_rate1_exact(helper_rates)
                } else {
                    let padded: Vec<f64> =
                        helper_rates.iter().map(|v| v + slack).collect();
                    r.min_rate1_exact(&padded)
                }
            }
        })
    }

    /// Membership within `tol` bits: helper rates may sit `tol` below
    /// their requirement and the primary rate `tol` below its bound.
    pub fn contains(&self, tuple: &RateTuple, tol: f64) -> Result<bool, RegionError> {
        let rates = tuple.rates();
        if rates.len() != self.spec().n() {
            return Err(RegionError::DimensionMismatch {
                expected: self.spec().n(),
                got: rates.len(),
            });
        }
        Ok(match self.min_rate1_with_slack(&rates[1..], tol)? {
            Some(bound) => rates[0] >= bound - tol,
            None => false,
        })
    }

    /// The constraint family generated by one parameter choice; outer
    /// regions only. `d` and `rho` are per helper in source order.
    pub fn constraints_at(
        &self,
        d: &[f64],
        rho: &[f64],
    ) -> Result<Vec<SumRateConstraint>, RegionError> {
        match self {
            RateRegion::Outer(r) => r.constraints_at(d, rho),
            other => Err(RegionError::ModeMismatch {
                expected: Mode::Strong,
                got: other.spec().mode(),
            }),
        }
    }
}

impl InnerRegion {
    fn min_rate1_exact(&self, helper_rates: &[f64]) -> Option<f64> {
        match &self.envelope {
            Some(envelope) => envelope.min_y_at(helper_rates[0]),
            None => hull::min_first_coordinate(&self.generators, helper_rates),
        }
    }
}

impl OuterRegion {
    fn constraints_at(&self, d: &[f64], rho: &[f64]) -> Result<Vec<SumRateConstraint>, RegionError> {
        let l = self.spec.helper_count();
        if d.len() != l || rho.len() != l {
            return Err(RegionError::HelperCountMismatch {
                expected: l,
                got: if d.len() != l { d.len() } else { rho.len() },
            });
        }
        let params = ConstraintParams {
            d: d.to_vec(),
            rho: rho.to_vec(),
        };
        let mut constraints = Vec::new();
        // Per-helper floors at this parameter choice.
        for i in 0..l {
            let helper = HelperParams::new(
                self.spec.crossovers[i],
                self.spec.caps[i],
                d[i],
                rho[i],
            )?;
            let star = helper_rate_star(&helper);
            constraints.push(SumRateConstraint {
                subset: BTreeSet::from([i + 2]),
                bound: star.rate,
                params: params.clone(),
            });
        }
        // Subset sums over every source set containing the primary source;
        // the mask enumerates which helpers stay in the conditioning set.
        let mut pairs = Vec::with_capacity(l);
        for mask in 0u32..(1 << l) {
            pairs.clear();
            let mut subset = BTreeSet::from([1]);
            let mut bound = 0.0;
            for i in 0..l {
                if mask >> i & 1 == 1 {
                    pairs.push((self.spec.crossovers[i], d[i]));
                } else {
                    subset.insert(i + 2);
                    bound += self.floors[i];
                }
            }
            bound += phi_unchecked(&pairs);
            constraints.push(SumRateConstraint {
                subset,
                bound,
                params: params.clone(),
            });
        }
        Ok(constraints)
    }
}

fn require_mode(spec: &ProblemSpec, expected: Mode) -> Result<(), RegionError> {
    if spec.mode() != expected {
        return Err(RegionError::ModeMismatch {
            expected,
            got: spec.mode(),
        });
    }
    Ok(())
}

fn require_cap(spec: &ProblemSpec, cap: usize) -> Result<(), RegionError> {
    if spec.n() > cap {
        return Err(RegionError::CapExceeded { n: spec.n(), cap });
    }
    Ok(())
}

fn helper_floors(spec: &ProblemSpec) -> Vec<f64> {
    spec.crossovers
        .iter()
        .zip(&spec.caps)
        .map(|(&p, &cap)| {
            wz_rate(p, cap).expect("spec validation keeps caps inside [0, p]")
        })
        .collect()
}

/// Builds the outer bound for a strong-mode spec. Membership evaluates the
/// parameterized constraint family at each tuple's exact witness (see
/// `min_rate1_family`); the grid config is retained for constraint
/// generation and reporting.
pub fn outer_region(spec: &ProblemSpec, grid: &GridConfig) -> Result<RateRegion, RegionError> {
    require_mode(spec, Mode::Strong)?;
    require_cap(spec, grid.max_sources)?;
    Ok(RateRegion::Outer(OuterRegion {
        spec: spec.clone(),
        grid: grid.clone(),
        floors: helper_floors(spec),
    }))
}

fn distortion_axis(step: f64, cap: f64) -> Vec<f64> {
    let mut axis = Vec::new();
    let mut k = 0u64;
    loop {
        let d = k as f64 * step;
        if d >= cap {
            break;
        }
        axis.push(d);
        k += 1;
    }
    axis.push(cap);
    axis
}

/// Enumerates the achievable corners: for every split of the helpers and
/// every grid assignment of operating distortions to the independently
/// decoded ones, the rate tuple
/// (conditional-entropy bound, per-helper rates), deduplicated within
/// 1e-12 in every coordinate.
pub fn inner_vertices(
    spec: &ProblemSpec,
    grid: &GridConfig,
) -> Result<Vec<AchievableTuple>, RegionError> {
    require_mode(spec, Mode::Strong)?;
    require_cap(spec, grid.max_sources)?;
    let l = spec.helper_count();
    let floors = helper_floors(spec);
    let axes: Vec<Vec<f64>> = spec
        .caps
        .iter()
        .map(|&cap| distortion_axis(grid.step, cap))
        .collect();

    let mut requested = 0usize;
    for mask in 0u32..(1 << l) {
        let mut count = 1usize;
        for i in 0..l {
            if mask >> i & 1 == 1 {
                count = count.saturating_mul(axes[i].len());
            }
        }
        requested = requested.saturating_add(count);
    }
    if requested > VERTEX_BUDGET {
        return Err(RegionError::VertexBudget {
            limit: VERTEX_BUDGET,
            requested,
        });
    }

    let mut tuples = Vec::with_capacity(requested);
    for mask in 0u32..(1 << l) {
        let members: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
        // Odometer over the distortion grid of the independently decoded
        // helpers; one pass when the set is empty.
        let mut indices = vec![0usize; members.len()];
        loop {
            let pairs: Vec<(f64, f64)> = members
                .iter()
                .zip(&indices)
                .map(|(&i, &j)| (spec.crossovers[i], axes[i][j]))
                .collect();
            let mut rates = vec![0.0; spec.n()];
            rates[0] = phi_unchecked(&pairs);
            let mut strategies = vec![DecodeBranch::Joint; l];
            for i in 0..l {
                rates[i + 1] = floors[i];
            }
            for (&(_, d), &i) in pairs.iter().zip(&members) {
                rates[i + 1] = 1.0 - h(d);
                strategies[i] = DecodeBranch::Independent;
            }
            tuples.push(AchievableTuple {
                rates: RateTuple(rates),
                q_complement: members.iter().map(|i| i + 2).collect(),
                d_values: pairs.iter().map(|&(_, d)| d).collect(),
                strategies,
            });
            // Advance the odometer.
            let mut axis = members.len();
            loop {
                if axis == 0 {
                    break;
                }
                indices[axis - 1] += 1;
                if indices[axis - 1] < axes[members[axis - 1]].len() {
                    break;
                }
                indices[axis - 1] = 0;
                axis -= 1;
            }
            if axis == 0 {
                break;
            }
        }
    }

    tuples.sort_by(|a, b| {
        a.rates
            .0
            .iter()
            .zip(&b.rates.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    tuples.dedup_by(|next, kept| {
        next.rates
            .0
            .iter()
            .zip(&kept.rates.0)
            .all(|(x, y)| (x - y).abs() <= VERTEX_DEDUP_TOL)
    });
    Ok(tuples)
}

/// Upward-closed convex hull of achievable corners: time sharing plus
/// rate padding. Two-source regions answer queries through an exact
/// planar envelope; larger ones through a mixture linear program.
pub fn inner_region(
    spec: &ProblemSpec,
    vertices: Vec<AchievableTuple>,
) -> Result<RateRegion, RegionError> {
    require_mode(spec, Mode::Strong)?;
    if vertices.is_empty() {
        return Err(RegionError::EmptyVertexList);
    }
    for vertex in &vertices {
        if vertex.rates.0.len() != spec.n() {
            return Err(RegionError::DimensionMismatch {
                expected: spec.n(),
                got: vertex.rates.0.len(),
            });
        }
    }
    let generators = hull::prune_dominated(
        vertices.iter().map(|v| v.rates.0.clone()).collect(),
    );
    let envelope = if spec.n() == 2 {
        LowerEnvelope::new(generators.iter().map(|g| (g[1], g[0])).collect())
    } else {
        None
    };
    Ok(RateRegion::Inner(InnerRegion {
        spec: spec.clone(),
        vertices,
        generators,
        envelope,
    }))
}

/// The exact region of the weak problem: only the primary source is
/// reconstructed, so helper rates have no floors and membership reduces
/// to the conditional-entropy bound at the witness distortions.
pub fn weak_region(spec: &ProblemSpec) -> Result<RateRegion, RegionError> {
    require_mode(spec, Mode::Weak)?;
    if spec.helper_count() > PHI_HELPER_CAP {
        return Err(RegionError::CapExceeded {
            n: spec.n(),
            cap: PHI_HELPER_CAP + 1,
        });
    }
    Ok(RateRegion::Weak(WeakRegion { spec: spec.clone() }))
}

/// Free-function form of [`RateRegion::contains`].
pub fn contains(region: &RateRegion, tuple: &RateTuple, tol: f64) -> Result<bool, RegionError> {
    region.contains(tuple, tol)
}

/// One boundary query result: helper rates and the least primary rate
/// placing them inside the region (`None` when no primary rate can).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub helper_rates: Vec<f64>,
    pub min_rate1: Option<f64>,
}

/// Evaluates the minimal primary rate over a list of helper-rate points.
/// Helper rates must lie in [0, 1], one bit being the most any binary
/// description can carry.
pub fn boundary_slice(
    region: &RateRegion,
    queries: &[Vec<f64>],
) -> Result<Vec<BoundarySample>, RegionError> {
    let mut samples = Vec::with_capacity(queries.len());
    for query in queries {
        for &value in query {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(RegionError::HelperRateRange { value });
            }
        }
        samples.push(BoundarySample {
            helper_rates: query.clone(),
            min_rate1: region.min_rate1(query)?,
        });
    }
    Ok(samples)
}

/// Signed boundary comparison of two regions over a probe grid.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub probes: usize,
    /// Probes where both regions admit some primary rate.
    pub feasible: usize,
    /// Probes where exactly one region is feasible; zero for regions
    /// built from the same spec.
    pub one_sided: usize,
    pub max_gap: f64,
    pub argmax: Vec<f64>,
    pub min_gap: f64,
    pub argmin: Vec<f64>,
}

/// Max and min over the probes of (min primary rate in `a`) minus (min
/// primary rate in `b`); positive values mean `a` demands more rate.
pub fn region_gap(
    a: &RateRegion,
    b: &RateRegion,
    queries: &[Vec<f64>],
) -> Result<GapReport, RegionError> {
    if a.spec() != b.spec() {
        return Err(RegionError::SpecMismatch);
    }
    let mut report = GapReport {
        probes: queries.len(),
        feasible: 0,
        one_sided: 0,
        max_gap: f64::NEG_INFINITY,
        argmax: Vec::new(),
        min_gap: f64::INFINITY,
        argmin: Vec::new(),
    };
    for query in queries {
        for &value in query {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(RegionError::HelperRateRange { value });
            }
        }
        match (a.min_rate1(query)?, b.min_rate1(query)?) {
            (Some(ra), Some(rb)) => {
                let gap = ra - rb;
                report.feasible += 1;
                if gap > report.max_gap {
                    report.max_gap = gap;
                    report.argmax = query.clone();
                }
                if gap < report.min_gap {
                    report.min_gap = gap;
                    report.argmin = query.clone();
                }
            }
            (None, None) => {}
            _ => report.one_sided += 1,
        }
    }
    if report.feasible == 0 {
        return Err(RegionError::NoFeasibleProbes);
    }
    Ok(report)
}

/// The lossless limit: constraint values at zero distortion, the corner
/// rates, and a sweep asserting the inner and outer bounds coincide.
#[derive(Debug, Clone)]
pub struct SwReport {
    /// (conditional entropy of the primary source given all helpers,
    /// 1, ..., 1).
    pub corner: RateTuple,
    /// The full-set sum-rate bound, one bit plus each helper's entropy.
    pub sum_rate: f64,
    /// Largest inner-minus-outer boundary deviation over the probe sweep.
    pub max_gap: f64,
    /// The subset-sum family at zero distortion.
    pub constraints: Vec<SumRateConstraint>,
}

/// Verifies that zero distortion caps collapse both bounds to the same
/// lossless corner points and reports them; errors if any cap is nonzero
/// or the bounds fail to coincide within 1e-9 at the probes.
///
/// With one helper the two boundaries are checked to agree along the
/// whole slice between the helper's entropy and one bit. With more
/// helpers they are checked at the achievable corners and the all-ones
/// point: the corner family deliberately omits helper-to-helper binning,
/// so between corners the hull sits strictly above the converse even at
/// zero distortion.
pub fn slepian_wolf_reduction(spec: &ProblemSpec) -> Result<SwReport, RegionError> {
    require_mode(spec, Mode::Strong)?;
    for (i, &cap) in spec.caps.iter().enumerate() {
        if cap != 0.0 {
            return Err(RegionError::NonzeroCap {
                index: i + 2,
                value: cap,
            });
        }
    }
    let grid = GridConfig::default();
    let outer = outer_region(spec, &grid)?;
    let inner = inner_region(spec, inner_vertices(spec, &grid)?)?;

    let l = spec.helper_count();
    let pairs: Vec<(f64, f64)> = spec.crossovers.iter().map(|&p| (p, 0.0)).collect();
    let mut corner = vec![phi_unchecked(&pairs)];
    corner.extend(std::iter::repeat(1.0).take(l));
    let sum_rate = 1.0 + spec.crossovers.iter().map(|&p| h(p)).sum::<f64>();
    let constraints = outer.constraints_at(&vec![0.0; l], &vec![0.0; l])?;

    let mut queries: Vec<Vec<f64>> = Vec::new();
    if l == 1 {
        // One helper: the boundaries agree along the whole slice.
        let lo = h(spec.crossovers[0]);
        for k in 0..=200 {
            queries.push(vec![lo + (1.0 - lo) * k as f64 / 200.0]);
        }
    } else {
        // More helpers: agreement holds at the achievable corners.
        for vertex in inner.vertices().unwrap_or(&[]) {
            queries.push(vertex.rates().rates()[1..].to_vec());
        }
        queries.push(vec![1.0; l]);
    }
    let report = region_gap(&inner, &outer, &queries)?;
    let max_gap = report.max_gap.abs().max(report.min_gap.abs());
    if max_gap > 1e-9 || report.one_sided > 0 {
        return Err(RegionError::ReductionGap {
            max_gap,
            one_sided: report.one_sided,
        });
    }
    Ok(SwReport {
        corner: RateTuple(corner),
        sum_rate,
        max_gap,
        constraints,
    })
}

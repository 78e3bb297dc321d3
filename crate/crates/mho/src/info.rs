//! Exact scalar information kernels and measures over explicit joint pmfs.
//!
//! Everything in this module is deterministic and allocation-light: the
//! scalar kernels (`binary_entropy`, `binary_convolution`) back the closed
//! forms elsewhere in the crate, while [`JointPmf`] supports the brute-force
//! enumeration route that those closed forms are checked against.

use thiserror::Error;

use crate::tol::PMF_SUM_TOL;

/// Errors for kernel domain violations and malformed pmfs.
#[derive(Debug, Error)]
pub enum InfoError {
    #[error("probability {value} outside [0, 1]")]
    ProbabilityRange { value: f64 },
    #[error("binary convolution needs at least one operand")]
    EmptyConvolution,
    #[error("alphabet size for '{label}' must be at least 1")]
    EmptyAlphabet { label: String },
    #[error("variable '{label}' declared twice")]
    DuplicateVariable { label: String },
    #[error("unknown variable '{label}'")]
    UnknownVariable { label: String },
    #[error("variable '{label}' appears in both target and conditioning sets")]
    OverlappingVariables { label: String },
    #[error("mutual information needs at least 2 variables, got {got}")]
    TooFewVariables { got: usize },
    #[error("table has {got} entries, the declared alphabets need {expected}")]
    TableSizeMismatch { expected: usize, got: usize },
    #[error("negative weight {value} at flat index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights sum to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },
}

/// A validated probability value in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self, InfoError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(InfoError::ProbabilityRange { value })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A binary symmetric test channel, canonicalized to crossover in [0, 0.5].
///
/// Entropy and convolution are symmetric under d -> 1 - d, so a crossover
/// above one half is folded down and the fold is recorded for callers that
/// want to surface it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryTestChannel {
    crossover: Probability,
    folded: bool,
}

impl BinaryTestChannel {
    pub fn new(crossover: f64) -> Result<Self, InfoError> {
        let p = Probability::new(crossover)?;
        if p.get() > 0.5 {
            Ok(Self {
                crossover: Probability(1.0 - p.get()),
                folded: true,
            })
        } else {
            Ok(Self {
                crossover: p,
                folded: false,
            })
        }
    }

    /// Canonical crossover in [0, 0.5].
    pub fn crossover(&self) -> f64 {
        self.crossover.get()
    }

    /// True when the constructor folded an input above one half.
    pub fn was_folded(&self) -> bool {
        self.folded
    }
}

/// Unchecked binary entropy kernel; callers validate the domain.
/// Endpoints return exactly 0 by construction.
pub(crate) fn h(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Unchecked pairwise binary convolution a*b = a(1-b) + (1-a)b.
pub(crate) fn conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + (1.0 - a) * b
}

/// Unchecked inverse of `h` on [0, 0.5] by bisection.
///
/// 100 halvings of [0, 0.5] land below 1e-30, so the result is exact to
/// the last f64 bit that the monotone bracket can resolve.
pub(crate) fn h_inv(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binary entropy in bits; endpoints return exactly 0.
pub fn binary_entropy(p: f64) -> Result<f64, InfoError> {
    Ok(h(Probability::new(p)?.get()))
}

/// Inverse binary entropy on the half interval: the unique d in [0, 0.5]
/// with h(d) = y.
pub fn binary_entropy_inv(y: f64) -> Result<f64, InfoError> {
    Ok(h_inv(Probability::new(y)?.get()))
}

/// Left fold of the pairwise convolution a*b = a(1-b) + (1-a)b.
///
/// The operation is commutative and associative, so the fold order does not
/// matter beyond rounding.
pub fn binary_convolution(values: &[f64]) -> Result<f64, InfoError> {
    if values.is_empty() {
        return Err(InfoError::EmptyConvolution);
    }
    let mut acc: Option<f64> = None;
    for &v in values {
        let v = Probability::new(v)?.get();
        acc = Some(match acc {
            None => v,
            Some(a) => conv(a, v),
        });
    }
    Ok(acc.unwrap())
}

#[derive(Debug, Clone)]
struct Variable {
    label: String,
    size: usize,
}

/// A dense joint pmf over a product of finite alphabets.
///
/// The table is stored row-major with the last declared variable varying
/// fastest. Construction validates nonnegativity and normalization to
/// [`PMF_SUM_TOL`]; all measure computations skip zero-mass cells so that
/// 0 log 0 contributes nothing.
#[derive(Debug, Clone)]
pub struct JointPmf {
    variables: Vec<Variable>,
    table: Vec<f64>,
}

impl JointPmf {
    pub fn new(variables: Vec<(String, usize)>, table: Vec<f64>) -> Result<Self, InfoError> {
        let mut expected = 1usize;
        for (label, size) in &variables {
            if *size == 0 {
                return Err(InfoError::EmptyAlphabet {
                    label: label.clone(),
                });
            }
            if variables.iter().filter(|(l, _)| l == label).count() > 1 {
                return Err(InfoError::DuplicateVariable {
                    label: label.clone(),
                });
            }
            expected = expected.saturating_mul(*size);
        }
        if table.len() != expected {
            return Err(InfoError::TableSizeMismatch {
                expected,
                got: table.len(),
            });
        }
        let mut sum = 0.0;
        for (index, &w) in table.iter().enumerate() {
            if !(w >= 0.0) {
                return Err(InfoError::NegativeWeight { index, value: w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > PMF_SUM_TOL {
            return Err(InfoError::NotNormalized {
                sum,
                tol: PMF_SUM_TOL,
            });
        }
        Ok(Self {
            variables: variables
                .into_iter()
                .map(|(label, size)| Variable { label, size })
                .collect(),
            table,
        })
    }

    /// Variable labels with alphabet sizes, in declaration order.
    pub fn variables(&self) -> impl Iterator<Item = (&str, usize)> {
        self.variables.iter().map(|v| (v.label.as_str(), v.size))
    }

    /// The dense weight table, row-major, last variable fastest.
    pub fn weights(&self) -> &[f64] {
        &self.table
    }

    fn axis_of(&self, label: &str) -> Result<usize, InfoError> {
        self.variables
            .iter()
            .position(|v| v.label == label)
            .ok_or_else(|| InfoError::UnknownVariable {
                label: label.to_string(),
            })
    }

    fn axes_of(&self, labels: &[&str]) -> Result<Vec<usize>, InfoError> {
        let mut axes = Vec::with_capacity(labels.len());
        for label in labels {
            let axis = self.axis_of(label)?;
            if axes.contains(&axis) {
                return Err(InfoError::DuplicateVariable {
                    label: label.to_string(),
                });
            }
            axes.push(axis);
        }
        Ok(axes)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.variables.len()];
        for k in (0..self.variables.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.variables[k + 1].size;
        }
        strides
    }

    /// Marginal distribution on `keep`, with axes in the requested order.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointPmf, InfoError> {
        let axes = self.axes_of(keep)?;
        let strides = self.strides();
        let kept_sizes: Vec<usize> = axes.iter().map(|&a| self.variables[a].size).collect();
        let out_len: usize = kept_sizes.iter().product::<usize>().max(1);
        let mut out = vec![0.0f64; out_len];
        for (i, &w) in self.table.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut reduced = 0usize;
            for (k, &axis) in axes.iter().enumerate() {
                let digit = (i / strides[axis]) % self.variables[axis].size;
                reduced = reduced * kept_sizes[k] + digit;
            }
            out[reduced] += w;
        }
        Ok(JointPmf {
            variables: axes
                .iter()
                .map(|&a| self.variables[a].clone())
                .collect(),
            table: out,
        })
    }

    /// Shannon entropy in bits of the marginal on `vars`.
    /// An empty set has entropy 0.
    pub fn entropy(&self, vars: &[&str]) -> Result<f64, InfoError> {
        let marginal = self.marginal(vars)?;
        let mut total = 0.0;
        for &w in &marginal.table {
            if w > 0.0 {
                total -= w * w.log2();
            }
        }
        Ok(total)
    }

    /// H(targets | given) = H(targets, given) - H(given).
    pub fn conditional_entropy(
        &self,
        targets: &[&str],
        given: &[&str],
    ) -> Result<f64, InfoError> {
        for t in targets {
            if given.contains(t) {
                return Err(InfoError::OverlappingVariables {
                    label: t.to_string(),
                });
            }
        }
        let mut joint: Vec<&str> = targets.to_vec();
        joint.extend_from_slice(given);
        Ok(self.entropy(&joint)? - self.entropy(given)?)
    }

    /// Interaction information over `vars`: the alternating inclusion and
    /// exclusion sum of subset entropies, with subsets of odd cardinality
    /// entering positively. For two variables this is ordinary mutual
    /// information.
    pub fn multivariate_mi(&self, vars: &[&str]) -> Result<f64, InfoError> {
        self.axes_of(vars)?;
        let k = vars.len();
        if k < 2 {
            return Err(InfoError::TooFewVariables { got: k });
        }
        let mut total = 0.0;
        for mask in 1u32..(1u32 << k) {
            let subset: Vec<&str> = (0..k)
                .filter(|&j| mask & (1 << j) != 0)
                .map(|j| vars[j])
                .collect();
            let sign = if subset.len() % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * self.entropy(&subset)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn entropy_endpoints_are_exact() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    }

    #[test]
    fn entropy_reference_value() {
        // Independently computed with 50-digit arithmetic.
        assert_relative_eq!(
            binary_entropy(0.2).unwrap(),
            0.7219280948873623,
            epsilon = 1e-15
        );
    }

    #[test]
    fn entropy_rejects_out_of_range() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn entropy_is_symmetric_on_grid() {
        for k in 0..=1000 {
            let p = k as f64 * 1e-3;
            let a = binary_entropy(p).unwrap();
            let b = binary_entropy(1.0 - p).unwrap();
            assert!((a - b).abs() <= 1e-14, "asymmetry at p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn entropy_is_strictly_increasing_on_half_interval() {
        let mut prev = binary_entropy(0.0).unwrap();
        for k in 1..=500 {
            let p = k as f64 * 1e-3;
            let cur = binary_entropy(p).unwrap();
            assert!(cur > prev, "not strictly increasing at p={p}");
            prev = cur;
        }
    }

    #[test]
    fn entropy_inverse_round_trips() {
        assert_eq!(binary_entropy_inv(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy_inv(1.0).unwrap(), 0.5);
        for k in 0..=1000 {
            let y = k as f64 * 1e-3;
            let d = binary_entropy_inv(y).unwrap();
            assert!((0.0..=0.5).contains(&d));
            assert!(
                (binary_entropy(d).unwrap() - y).abs() <= 1e-12,
                "round trip off at y={y}"
            );
        }
    }

    #[test]
    fn convolution_identity_and_absorbing_elements() {
        assert_relative_eq!(
            binary_convolution(&[0.3, 0.0]).unwrap(),
            0.3,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            binary_convolution(&[0.2, 0.5]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            binary_convolution(&[0.2, 0.3]).unwrap(),
            0.38,
            epsilon = 1e-15
        );
    }

    #[test]
    fn convolution_rejects_empty_and_out_of_range() {
        assert!(matches!(
            binary_convolution(&[]),
            Err(InfoError::EmptyConvolution)
        ));
        assert!(binary_convolution(&[0.2, 1.5]).is_err());
    }

    #[test]
    fn convolution_is_commutative_and_associative() {
        let (a, b, c) = (0.11, 0.27, 0.42);
        let ab_c = binary_convolution(&[a, b, c]).unwrap();
        let c_ba = binary_convolution(&[c, b, a]).unwrap();
        assert!((ab_c - c_ba).abs() <= 1e-14);
    }

    #[test]
    fn convolution_output_dominates_inputs_on_half_interval() {
        for i in 0..=50 {
            for j in 0..=50 {
                let a = i as f64 * 0.01;
                let b = j as f64 * 0.01;
                let c = binary_convolution(&[a, b]).unwrap();
                assert!(c >= a.max(b) - 1e-15 && c <= 0.5 + 1e-15);
            }
        }
    }

    #[test]
    fn test_channel_folds_above_half() {
        let ch = BinaryTestChannel::new(0.7).unwrap();
        assert_relative_eq!(ch.crossover(), 0.3, epsilon = 1e-15);
        assert!(ch.was_folded());
        let ch = BinaryTestChannel::new(0.3).unwrap();
        assert!(!ch.was_folded());
        assert!(BinaryTestChannel::new(1.2).is_err());
    }

    fn uniform_pair() -> JointPmf {
        // Independent uniform bits.
        JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.25, 0.25, 0.25, 0.25],
        )
        .unwrap()
    }

    fn copied_pair() -> JointPmf {
        // B is a copy of A, both uniform.
        JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn pmf_validation_rejects_bad_tables() {
        assert!(matches!(
            JointPmf::new(vec![("A".into(), 2)], vec![0.5, 0.6]),
            Err(InfoError::NotNormalized { .. })
        ));
        assert!(matches!(
            JointPmf::new(vec![("A".into(), 2)], vec![1.5, -0.5]),
            Err(InfoError::NegativeWeight { .. })
        ));
        assert!(matches!(
            JointPmf::new(vec![("A".into(), 2)], vec![0.5, 0.25, 0.25]),
            Err(InfoError::TableSizeMismatch { .. })
        ));
        assert!(matches!(
            JointPmf::new(vec![("A".into(), 2), ("A".into(), 2)], vec![0.25; 4]),
            Err(InfoError::DuplicateVariable { .. })
        ));
    }

    #[test]
    fn entropy_of_uniform_and_deterministic_marginals() {
        let pmf = uniform_pair();
        assert_relative_eq!(pmf.entropy(&["A"]).unwrap(), 1.0, epsilon = 1e-15);
        let deterministic = JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.5, 0.0, 0.5, 0.0],
        )
        .unwrap();
        assert_eq!(deterministic.entropy(&["B"]).unwrap(), 0.0);
    }

    #[test]
    fn marginal_entropy_matches_scalar_kernel() {
        let pmf = JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.38 * 0.1, 0.38 * 0.9, 0.62 * 0.4, 0.62 * 0.6],
        )
        .unwrap();
        assert_relative_eq!(
            pmf.entropy(&["A"]).unwrap(),
            binary_entropy(0.38).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn conditional_entropy_with_empty_conditioning_is_plain_entropy() {
        let pmf = uniform_pair();
        assert_relative_eq!(
            pmf.conditional_entropy(&["A"], &[]).unwrap(),
            pmf.entropy(&["A"]).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn conditioning_on_independent_variable_changes_nothing() {
        let pmf = uniform_pair();
        assert_relative_eq!(
            pmf.conditional_entropy(&["A"], &["B"]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn conditional_entropy_rejects_overlap_and_unknown_labels() {
        let pmf = uniform_pair();
        assert!(matches!(
            pmf.conditional_entropy(&["A"], &["A"]),
            Err(InfoError::OverlappingVariables { .. })
        ));
        assert!(matches!(
            pmf.entropy(&["Z"]),
            Err(InfoError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn mutual_information_of_independent_pair_is_zero() {
        let pmf = uniform_pair();
        assert!(pmf.multivariate_mi(&["A", "B"]).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn mutual_information_of_copied_bit_is_one() {
        let pmf = copied_pair();
        assert_relative_eq!(
            pmf.multivariate_mi(&["A", "B"]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mutual_information_needs_two_variables() {
        let pmf = uniform_pair();
        assert!(matches!(
            pmf.multivariate_mi(&["A"]),
            Err(InfoError::TooFewVariables { .. })
        ));
    }
}

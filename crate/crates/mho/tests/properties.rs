//! Randomized structural properties of the kernels, the closed-form
//! conditional entropy, the rate curve, and region boundaries. These
//! complement the fixed-point unit tests with algebraic identities that
//! must hold across the whole parameter domain.

use proptest::prelude::*;

use mho::info::{binary_convolution, binary_entropy, binary_entropy_inv};
use mho::oracle::{phi_oracle, CascadeSpec};
use mho::regions::{outer_region, weak_region, GridConfig, ProblemSpec};
use mho::single_letter::{
    helper_rate_star, independent_rate, phi, wz_rate, wz_rate_curve, DecodeBranch, HelperParams,
    PhiArgs,
};

fn pair_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..=0.5, 0.0f64..=0.5)
}

proptest! {
    #[test]
    fn entropy_is_symmetric(p in 0.0f64..=1.0) {
        let a = binary_entropy(p).unwrap();
        let b = binary_entropy(1.0 - p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn entropy_monotone_below_half(a in 0.0f64..=0.5, b in 0.0f64..=0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(binary_entropy(lo).unwrap() <= binary_entropy(hi).unwrap() + 1e-12);
    }

    #[test]
    fn entropy_inverse_is_a_right_inverse(y in 0.0f64..=1.0) {
        let x = binary_entropy_inv(y).unwrap();
        prop_assert!((0.0..=0.5).contains(&x));
        prop_assert!((binary_entropy(x).unwrap() - y).abs() <= 1e-10);
    }

    #[test]
    fn entropy_inverse_recovers_lower_half(p in 0.0f64..=0.5) {
        // Near p = 0.5 the entropy flattens, so absolute recovery of the
        // argument is limited by sqrt(eps) conditioning, not by the solver.
        let recovered = binary_entropy_inv(binary_entropy(p).unwrap()).unwrap();
        prop_assert!((recovered - p).abs() <= 1e-7);
    }

    #[test]
    fn convolution_identities(a in 0.0f64..=0.5, b in 0.0f64..=0.5) {
        let ab = binary_convolution(&[a, b]).unwrap();
        let ba = binary_convolution(&[b, a]).unwrap();
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!(ab >= a.max(b) - 1e-15);
        prop_assert!(ab <= 0.5 + 1e-15);
        prop_assert!((binary_convolution(&[a, 0.0]).unwrap() - a).abs() <= 1e-15);
        prop_assert!((binary_convolution(&[a, 0.5]).unwrap() - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn conditional_entropy_is_permutation_invariant(
        pairs in proptest::collection::vec(pair_strategy(), 0..=5),
    ) {
        let forward = phi(&PhiArgs::new(&pairs).unwrap()).unwrap();
        let mut reversed = pairs.clone();
        reversed.reverse();
        let backward = phi(&PhiArgs::new(&reversed).unwrap()).unwrap();
        prop_assert!((forward - backward).abs() <= 1e-12);
    }

    #[test]
    fn conditional_entropy_ignores_pure_noise_helpers(
        pairs in proptest::collection::vec(pair_strategy(), 0..=4),
        p_extra in 0.0f64..=0.5,
    ) {
        let base = phi(&PhiArgs::new(&pairs).unwrap()).unwrap();
        let mut extended = pairs.clone();
        extended.push((p_extra, 0.5));
        let with_noise = phi(&PhiArgs::new(&extended).unwrap()).unwrap();
        prop_assert!((base - with_noise).abs() <= 1e-12);
    }

    #[test]
    fn conditional_entropy_matches_enumeration_for_two_helpers(
        pairs in proptest::collection::vec(pair_strategy(), 0..=2),
    ) {
        let formula = phi(&PhiArgs::new(&pairs).unwrap()).unwrap();
        let enumerated = if pairs.is_empty() {
            1.0
        } else {
            phi_oracle(&CascadeSpec::new(&pairs).unwrap()).unwrap()
        };
        prop_assert!((formula - enumerated).abs() <= 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&formula));
    }

    #[test]
    fn rate_curve_dominates_rate_function(p in 0.01f64..=0.5, t in 0.0f64..=1.0) {
        let d = (t * p).min(p);
        let rate = wz_rate(p, d).unwrap();
        prop_assert!(rate >= -1e-15);
        prop_assert!(rate <= wz_rate_curve(p, d).unwrap() + 1e-12);
        prop_assert!(rate <= independent_rate(d).unwrap() + 1e-12);
    }

    #[test]
    fn rate_function_nonincreasing(p in 0.01f64..=0.5, t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let r_lo = wz_rate(p, (lo * p).min(p)).unwrap();
        let r_hi = wz_rate(p, (hi * p).min(p)).unwrap();
        prop_assert!(r_lo >= r_hi - 1e-12);
    }

    #[test]
    fn rate_function_convex(
        p in 0.01f64..=0.5,
        t1 in 0.0f64..=1.0,
        t2 in 0.0f64..=1.0,
        lambda in 0.0f64..=1.0,
    ) {
        let d1 = (t1 * p).min(p);
        let d2 = (t2 * p).min(p);
        let mid = (lambda * d1 + (1.0 - lambda) * d2).min(p);
        let chord = lambda * wz_rate(p, d1).unwrap() + (1.0 - lambda) * wz_rate(p, d2).unwrap();
        prop_assert!(wz_rate(p, mid).unwrap() <= chord + 1e-9);
    }

    #[test]
    fn rate_vanishes_at_the_crossover(p in 0.0f64..=0.5) {
        prop_assert_eq!(wz_rate(p, p).unwrap(), 0.0);
    }

    #[test]
    fn helper_floor_is_the_larger_branch(
        p in 0.0f64..=0.5,
        cap_frac in 0.0f64..=1.0,
        d in 0.0f64..=0.5,
        rho in 0.0f64..=1.0,
    ) {
        let cap = (cap_frac * p).min(p);
        let params = HelperParams::new(p, cap, d, rho).unwrap();
        let star = helper_rate_star(&params);
        let independent = independent_rate(d).unwrap();
        let joint = rho * independent_rate(cap).unwrap() + (1.0 - rho) * wz_rate(p, cap).unwrap();
        let expected = if d < cap { independent } else { independent.max(joint) };
        prop_assert!((star.rate - expected).abs() <= 1e-15);
        match star.branch {
            DecodeBranch::Independent => {
                prop_assert!((star.rate - independent).abs() <= 1e-15);
            }
            DecodeBranch::Joint => {
                prop_assert!(d >= cap);
                prop_assert!((star.rate - joint).abs() <= 1e-15);
                prop_assert!(joint >= independent - 1e-15);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outer_boundary_nonincreasing_in_helper_rates(
        specs in proptest::collection::vec((0.01f64..=0.5, 0.0f64..=1.0), 1..=2),
        base in proptest::collection::vec(0.0f64..=1.0, 2),
        bump in proptest::collection::vec(0.0f64..=1.0, 2),
    ) {
        let crossovers: Vec<f64> = specs.iter().map(|&(p, _)| p).collect();
        let caps: Vec<f64> = specs.iter().map(|&(p, f)| (f * p).min(p)).collect();
        let problem = ProblemSpec::strong(&crossovers, &caps).unwrap();
        let outer = outer_region(&problem, &GridConfig::default()).unwrap();
        let l = crossovers.len();
        let q: Vec<f64> = base[..l].to_vec();
        let q_up: Vec<f64> = q
            .iter()
            .zip(&bump[..l])
            .map(|(&r, &extra)| (r + extra).min(1.0))
            .collect();
        if let Some(tight) = outer.min_rate1(&q).unwrap() {
            let relaxed = outer
                .min_rate1(&q_up)
                .unwrap()
                .expect("raising helper rates keeps the query feasible");
            prop_assert!(relaxed <= tight + 1e-12);
        }
    }

    #[test]
    fn weak_boundary_brackets(
        crossovers in proptest::collection::vec(0.001f64..=0.5, 1..=3),
        query in proptest::collection::vec(0.0f64..=1.0, 3),
    ) {
        let problem = ProblemSpec::weak(&crossovers).unwrap();
        let weak = weak_region(&problem).unwrap();
        let l = crossovers.len();
        let q = &query[..l];
        let value = weak.min_rate1(q).unwrap().expect("weak queries are always feasible");
        let full_info = weak
            .min_rate1(&vec![1.0; l])
            .unwrap()
            .expect("weak queries are always feasible");
        prop_assert!(value >= full_info - 1e-12);
        prop_assert!(value <= 1.0 + 1e-12);
    }
}

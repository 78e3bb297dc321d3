//! Geometry behind region queries: a two-dimensional lower envelope for
//! two-source problems and a small dense simplex solver that minimizes the
//! first coordinate over the upward closure of a convex hull in any
//! dimension. Both answer the same question and are cross-checked against
//! each other in tests.

/// Pivot and sign tolerance for the simplex solver; all tableau entries are
/// rates in bits, so magnitudes sit near one.
const LP_EPS: f64 = 1e-9;

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Piecewise-linear lower boundary of the upward closure of a convex hull
/// of planar points: `min_y_at(x)` is the least y with (x, y) in the
/// closure, `None` left of the leftmost generator.
#[derive(Debug, Clone)]
pub(crate) struct LowerEnvelope {
    // Hull chain sorted by x, truncated at its minimum y; the upward
    // closure makes the boundary constant to the right of that point.
    chain: Vec<(f64, f64)>,
}

impl LowerEnvelope {
    pub(crate) fn new(mut points: Vec<(f64, f64)>) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        points.dedup_by(|next, kept| next.0 == kept.0); // same x: keep min y
        let mut chain: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for p in points {
            while chain.len() >= 2
                && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0.0
            {
                chain.pop();
            }
            chain.push(p);
        }
        let argmin = chain
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .unwrap();
        chain.truncate(argmin + 1);
        Some(Self { chain })
    }

    pub(crate) fn min_y_at(&self, x: f64) -> Option<f64> {
        let first = self.chain[0];
        if x < first.0 {
            return None;
        }
        let last = *self.chain.last().unwrap();
        if x >= last.0 {
            return Some(last.1);
        }
        // Index of the first chain point strictly right of x; the segment
        // ending there covers x.
        let hi = self.chain.partition_point(|p| p.0 <= x);
        let (x0, y0) = self.chain[hi - 1];
        let (x1, y1) = self.chain[hi];
        let t = (x - x0) / (x1 - x0);
        Some(y0 + t * (y1 - y0))
    }
}

/// Drops every point that another point dominates componentwise (exact
/// duplicates keep their first copy). Safe for upward-closed hulls: a
/// dominated generator adds nothing to the closure.
pub(crate) fn prune_dominated(vertices: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut keep: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
    'candidates: for (i, v) in vertices.iter().enumerate() {
        for (j, u) in vertices.iter().enumerate() {
            if i == j {
                continue;
            }
            let dominates = u.iter().zip(v).all(|(a, b)| a <= b);
            if dominates && (u != v || j < i) {
                continue 'candidates;
            }
        }
        keep.push(v.clone());
    }
    keep
}

/// Least first coordinate of a point in the upward closure of the convex
/// hull of `vertices` whose remaining coordinates are at most `query`,
/// or `None` if no such point exists.
///
/// Solved as a linear program over mixture weights theta:
/// minimize sum theta_k v_k[0] subject to sum theta_k v_k[j] <= query[j-1],
/// sum theta_k = 1, theta >= 0.
pub(crate) fn min_first_coordinate(vertices: &[Vec<f64>], query: &[f64]) -> Option<f64> {
    let m = query.len();
    let k = vertices.len();
    if k == 0 {
        return None;
    }
    debug_assert!(vertices.iter().all(|v| v.len() == m + 1));
    debug_assert!(vertices.iter().flatten().all(|c| *c >= 0.0));
    // Vertex coordinates are rates, hence nonnegative; a negative bound is
    // unreachable by any mixture.
    if query.iter().any(|q| *q < 0.0) {
        return None;
    }

    // Columns: k mixture weights, m slacks, one artificial on the equality
    // row; the last column is the right-hand side.
    let cols = k + m + 1;
    let art = k + m;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for j in 0..m {
        let mut row = vec![0.0; cols + 1];
        for (idx, v) in vertices.iter().enumerate() {
            row[idx] = v[j + 1];
        }
        row[k + j] = 1.0;
        row[cols] = query[j];
        rows.push(row);
    }
    let mut total = vec![0.0; cols + 1];
    total[..k].fill(1.0);
    total[art] = 1.0;
    total[cols] = 1.0;
    rows.push(total);
    let mut basis: Vec<usize> = (k..k + m).chain(std::iter::once(art)).collect();

    // Phase one: drive the artificial variable to zero. Its reduced-cost
    // row is the unit cost on `art` priced out against the equality row.
    let mut z = vec![0.0; cols + 1];
    z[art] = 1.0;
    let eq = rows.len() - 1;
    for (entry, coeff) in z.iter_mut().zip(&rows[eq]) {
        *entry -= coeff;
    }
    run_simplex(&mut rows, &mut basis, &mut z, cols)?;
    if -z[cols] > 1e-9 {
        return None;
    }
    if let Some(r) = basis.iter().position(|&b| b == art) {
        // Degenerate optimum with the artificial still basic at zero:
        // swap it for any real column, or drop the row if none remains.
        match (0..art).find(|&j| rows[r][j].abs() > LP_EPS) {
            Some(j) => pivot(&mut rows, &mut basis, &mut z, r, j),
            None => {
                rows.remove(r);
                basis.remove(r);
            }
        }
    }
    for row in rows.iter_mut() {
        row[art] = 0.0;
    }

    // Phase two: the real objective, priced out against the current basis.
    let mut z = vec![0.0; cols + 1];
    for (idx, v) in vertices.iter().enumerate() {
        z[idx] = v[0];
    }
    for (r, &b) in basis.iter().enumerate() {
        if b < k && z[b] != 0.0 {
            let scale = z[b];
            for (entry, coeff) in z.iter_mut().zip(&rows[r]) {
                *entry -= scale * coeff;
            }
        }
    }
    run_simplex(&mut rows, &mut basis, &mut z, cols)?;
    Some(-z[cols])
}

/// Bland-rule simplex on a tableau already in basic feasible form; returns
/// `None` only on an unbounded ray, which the mixture constraints rule out.
fn run_simplex(
    rows: &mut [Vec<f64>],
    basis: &mut [usize],
    z: &mut [f64],
    cols: usize,
) -> Option<()> {
    loop {
        let Some(entering) = (0..cols).find(|&j| z[j] < -LP_EPS) else {
            return Some(());
        };
        let mut leaving: Option<(usize, f64)> = None;
        for (r, row) in rows.iter().enumerate() {
            if row[entering] > LP_EPS {
                let ratio = row[cols] / row[entering];
                let better = match leaving {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < best - LP_EPS
                            || (ratio <= best + LP_EPS && basis[r] < basis[best_r])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
        }
        let (r, _) = leaving?;
        pivot(rows, basis, z, r, entering);
    }
}

fn pivot(rows: &mut [Vec<f64>], basis: &mut [usize], z: &mut [f64], r: usize, e: usize) {
    let scale = rows[r][e];
    for entry in rows[r].iter_mut() {
        *entry /= scale;
    }
    let pivot_row = rows[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i != r && row[e].abs() > 0.0 {
            let factor = row[e];
            for (entry, coeff) in row.iter_mut().zip(&pivot_row) {
                *entry -= factor * coeff;
            }
        }
    }
    if z[e].abs() > 0.0 {
        let factor = z[e];
        for (entry, coeff) in z.iter_mut().zip(&pivot_row) {
            *entry -= factor * coeff;
        }
    }
    basis[r] = e;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn envelope_interpolates_and_clamps() {
        let env =
            LowerEnvelope::new(vec![(0.0, 1.0), (1.0, 0.0), (0.5, 0.9)]).unwrap();
        assert_eq!(env.min_y_at(-0.01), None);
        assert_eq!(env.min_y_at(0.0), Some(1.0));
        assert!((env.min_y_at(0.25).unwrap() - 0.75).abs() <= 1e-12);
        assert_eq!(env.min_y_at(1.0), Some(0.0));
        assert_eq!(env.min_y_at(5.0), Some(0.0));
    }

    #[test]
    fn envelope_flattens_past_its_minimum() {
        let env =
            LowerEnvelope::new(vec![(0.0, 1.0), (0.5, 0.2), (1.0, 0.6)]).unwrap();
        assert!((env.min_y_at(0.25).unwrap() - 0.6).abs() <= 1e-12);
        assert_eq!(env.min_y_at(0.75), Some(0.2));
        assert_eq!(env.min_y_at(1.0), Some(0.2));
    }

    #[test]
    fn envelope_keeps_the_lower_of_coincident_columns() {
        let env =
            LowerEnvelope::new(vec![(0.5, 0.9), (0.5, 0.3), (0.0, 1.0)]).unwrap();
        assert_eq!(env.min_y_at(0.5), Some(0.3));
    }

    #[test]
    fn envelope_of_nothing_and_of_one_point() {
        assert!(LowerEnvelope::new(vec![]).is_none());
        let env = LowerEnvelope::new(vec![(0.3, 0.8)]).unwrap();
        assert_eq!(env.min_y_at(0.2), None);
        assert_eq!(env.min_y_at(0.3), Some(0.8));
        assert_eq!(env.min_y_at(0.9), Some(0.8));
    }

    #[test]
    fn mixture_program_on_a_two_point_hull() {
        let vertices = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mid = min_first_coordinate(&vertices, &[0.5]).unwrap();
        assert!((mid - 0.5).abs() <= 1e-9);
        assert!((min_first_coordinate(&vertices, &[2.0]).unwrap()).abs() <= 1e-9);
        assert_eq!(min_first_coordinate(&vertices, &[-0.1]), None);
    }

    #[test]
    fn mixture_program_on_a_single_vertex() {
        let vertices = vec![vec![0.8, 0.3]];
        assert_eq!(min_first_coordinate(&vertices, &[0.2]), None);
        let v = min_first_coordinate(&vertices, &[0.3]).unwrap();
        assert!((v - 0.8).abs() <= 1e-9);
    }

    #[test]
    fn mixture_program_in_three_dimensions() {
        let vertices = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let v = min_first_coordinate(&vertices, &[0.5, 0.5]).unwrap();
        assert!(v.abs() <= 1e-9);
        let v = min_first_coordinate(&vertices, &[0.25, 0.25]).unwrap();
        assert!((v - 0.5).abs() <= 1e-9);
        let v = min_first_coordinate(&vertices, &[0.25, 0.0]).unwrap();
        assert!((v - 0.75).abs() <= 1e-9);
    }

    #[test]
    fn dominated_points_are_dropped_and_duplicates_collapse() {
        let pruned = prune_dominated(vec![
            vec![1.0, 1.0],
            vec![0.5, 2.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
        ]);
        assert_eq!(pruned, vec![vec![1.0, 1.0], vec![0.5, 2.0]]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn mixture_program_agrees_with_the_planar_envelope(
            points in prop::collection::vec((0.0f64..2.0, 0.0f64..2.0), 1..24),
            queries in prop::collection::vec(-0.5f64..2.5, 1..8),
        ) {
            let vertices: Vec<Vec<f64>> =
                points.iter().map(|&(x, y)| vec![y, x]).collect();
            let env = LowerEnvelope::new(points).unwrap();
            for q in queries {
                let lp = min_first_coordinate(&vertices, &[q]);
                let direct = env.min_y_at(q);
                match (lp, direct) {
                    (None, None) => {}
                    (Some(a), Some(b)) => prop_assert!(
                        (a - b).abs() <= 1e-7,
                        "mismatch at query {q}: {a} vs {b}"
                    ),
                    other => prop_assert!(false, "disagreement at {q}: {other:?}"),
                }
            }
        }
    }
}

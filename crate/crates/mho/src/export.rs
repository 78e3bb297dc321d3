//! Machine-readable region exports: plot-ready CSV and exact-round-trip
//! JSON. All assembly is deterministic; the data section carries no
//! timestamps or environment state.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::regions::{AchievableTuple, RateRegion, RegionError};
use crate::spec::SpecDocument;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("export is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportMetadata {
    pub tool_version: String,
    /// The spec document exactly as parsed, so parameters echo verbatim.
    pub spec: SpecDocument,
    pub bound: String,
    /// Names of the min-rate columns, in row order.
    pub columns: Vec<String>,
    /// Distortion sweep step behind the inner vertices.
    pub grid_step: f64,
    /// Helper-rate step of the boundary grid.
    pub boundary_step: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub helper_rates: Vec<f64>,
    /// One entry per column; `None` marks helper rates no primary rate
    /// can compensate for.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRow {
    pub rates: Vec<f64>,
    pub q_complement: Vec<usize>,
    pub d_values: Vec<f64>,
    pub strategies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionExport {
    pub metadata: ExportMetadata,
    pub boundary: Vec<BoundaryRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<VertexRow>>,
}

/// Helper-rate grid axis: multiples of `step` from zero up to and
/// including one bit.
pub fn rate_axis(step: f64) -> Vec<f64> {
    let mut axis = Vec::new();
    let mut k = 0u64;
    loop {
        let v = k as f64 * step;
        if v >= 1.0 {
            break;
        }
        axis.push(v);
        k += 1;
    }
    axis.push(1.0);
    axis
}

/// The full boundary probe grid over `helpers` coordinates, in
/// lexicographic order.
pub fn boundary_queries(helpers: usize, step: f64) -> Vec<Vec<f64>> {
    let axis = rate_axis(step);
    let mut queries = Vec::with_capacity(axis.len().pow(helpers as u32));
    let mut indices = vec![0usize; helpers];
    loop {
        queries.push(indices.iter().map(|&j| axis[j]).collect());
        let mut pos = helpers;
        loop {
            if pos == 0 {
                return queries;
            }
            indices[pos - 1] += 1;
            if indices[pos - 1] < axis.len() {
                break;
            }
            indices[pos - 1] = 0;
            pos -= 1;
        }
    }
}

/// Evaluates the named regions over the queries and assembles an export.
/// Rows are sorted lexicographically by helper rates regardless of the
/// query order supplied.
pub fn build_export(
    spec_doc: &SpecDocument,
    bound: &str,
    columns: &[(String, &RateRegion)],
    queries: &[Vec<f64>],
    grid_step: f64,
    boundary_step: f64,
    vertices: Option<&[AchievableTuple]>,
) -> Result<RegionExport, ExportError> {
    let mut sorted: Vec<Vec<f64>> = queries.to_vec();
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut boundary = Vec::with_capacity(sorted.len());
    for query in &sorted {
        let mut values = Vec::with_capacity(columns.len());
        for (_, region) in columns {
            values.push(region.min_rate1(query)?);
        }
        boundary.push(BoundaryRow {
            helper_rates: query.clone(),
            values,
        });
    }
    let vertices = vertices.map(|list| {
        list.iter()
            .map(|v| VertexRow {
                rates: v.rates().rates().to_vec(),
                q_complement: v.q_complement().iter().copied().collect(),
                d_values: v.d_values().to_vec(),
                strategies: v.strategies().iter().map(|s| s.to_string()).collect(),
            })
            .collect()
    });
    Ok(RegionExport {
        metadata: ExportMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            spec: spec_doc.clone(),
            bound: bound.to_string(),
            columns: columns.iter().map(|(name, _)| name.clone()).collect(),
            grid_step,
            boundary_step,
            rows: boundary.len(),
        },
        boundary,
        vertices,
    })
}

/// Twelve significant digits, the documented print precision for rates.
fn sig(value: f64) -> String {
    format!("{value:.11e}")
}

fn metadata_comments(export: &RegionExport, rows: usize) -> String {
    let spec = serde_json::to_string(&export.metadata.spec)
        .expect("spec documents always serialize");
    format!(
        "# tool=mho {}\n# spec={}\n# bound={}\n# grid_step={}\n# boundary_step={}\n# rows={}\n",
        export.metadata.tool_version,
        spec,
        export.metadata.bound,
        export.metadata.grid_step,
        export.metadata.boundary_step,
        rows,
    )
}

/// The boundary table as CSV with `#` metadata comments.
pub fn boundary_csv(export: &RegionExport) -> String {
    let helpers = export.metadata.spec.n - 1;
    let mut out = metadata_comments(export, export.boundary.len());
    let mut header: Vec<String> = (0..helpers).map(|i| format!("R{}", i + 2)).collect();
    header.extend(export.metadata.columns.iter().cloned());
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &export.boundary {
        let mut fields: Vec<String> = row.helper_rates.iter().map(|&v| sig(v)).collect();
        for value in &row.values {
            fields.push(value.map(sig).unwrap_or_default());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// The vertex table as CSV, present when the export carries vertices.
/// List-valued fields are joined with semicolons.
pub fn vertices_csv(export: &RegionExport) -> Option<String> {
    let vertices = export.vertices.as_ref()?;
    let n = export.metadata.spec.n;
    let mut out = metadata_comments(export, vertices.len());
    let mut header: Vec<String> = (0..n).map(|i| format!("R{}", i + 1)).collect();
    header.extend(["Qc", "d_values", "strategies"].map(str::to_string));
    out.push_str(&header.join(","));
    out.push('\n');
    for row in vertices {
        let mut fields: Vec<String> = row.rates.iter().map(|&v| sig(v)).collect();
        fields.push(
            row.q_complement
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        );
        fields.push(
            row.d_values
                .iter()
                .map(|&v| sig(v))
                .collect::<Vec<_>>()
                .join(";"),
        );
        fields.push(row.strategies.join(";"));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Some(out)
}

/// Full-precision JSON; numbers are written in shortest round-trip form
/// so re-reading reproduces the same values bit for bit.
pub fn to_json(export: &RegionExport) -> String {
    let mut text =
        serde_json::to_string_pretty(export).expect("exports always serialize");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<RegionExport, ExportError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{
        inner_region, inner_vertices, outer_region, weak_region, GridConfig, ProblemSpec,
    };

    fn weak_doc() -> SpecDocument {
        SpecDocument::from_json(
            r#"{"schema_version": "1", "n": 2, "p": [0.2], "mode": "weak"}"#,
        )
        .unwrap()
    }

    fn strong_doc() -> SpecDocument {
        SpecDocument::from_json(
            r#"{"schema_version": "1", "n": 2, "p": [0.2], "D": [0.03], "mode": "strong"}"#,
        )
        .unwrap()
    }

    #[test]
    fn rate_axis_includes_both_endpoints_once() {
        let axis = rate_axis(1e-3);
        assert_eq!(axis.len(), 1001);
        assert_eq!(axis[0], 0.0);
        assert_eq!(*axis.last().unwrap(), 1.0);
        let coarse = rate_axis(0.5);
        assert_eq!(coarse, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn queries_cover_the_grid_lexicographically() {
        let queries = boundary_queries(2, 0.5);
        assert_eq!(queries.len(), 9);
        assert_eq!(queries[0], vec![0.0, 0.0]);
        assert_eq!(queries[1], vec![0.0, 0.5]);
        assert_eq!(queries[8], vec![1.0, 1.0]);
    }

    #[test]
    fn boundary_csv_leaves_infeasible_fields_empty() {
        let doc = strong_doc();
        let spec = doc.to_problem_spec().unwrap();
        let grid = GridConfig::default();
        let inner = inner_region(&spec, inner_vertices(&spec, &grid).unwrap()).unwrap();
        let outer = outer_region(&spec, &grid).unwrap();
        let queries = boundary_queries(1, 0.25);
        let export = build_export(
            &doc,
            "both",
            &[
                ("min_R1_inner".to_string(), &inner),
                ("min_R1_outer".to_string(), &outer),
            ],
            &queries,
            grid.step(),
            0.25,
            inner.vertices(),
        )
        .unwrap();
        let csv = boundary_csv(&export);
        assert!(csv.contains("# rows=5"));
        assert!(csv.contains("R2,min_R1_inner,min_R1_outer"));
        // R2 = 0 lies below the helper floor of both bounds.
        let first_data = csv.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(first_data, "R2,min_R1_inner,min_R1_outer");
        let row0 = csv.lines().nth(7).unwrap();
        assert!(row0.starts_with("0.00000000000e0,,"));
        let vertices = vertices_csv(&export).unwrap();
        assert!(vertices.contains("R1,R2,Qc,d_values,strategies"));
        assert!(vertices.contains("joint"));
        assert!(vertices.contains("independent"));
    }

    #[test]
    fn rows_are_sorted_even_when_queries_are_not() {
        let doc = weak_doc();
        let spec = doc.to_problem_spec().unwrap();
        let weak = weak_region(&spec).unwrap();
        let queries = vec![vec![1.0], vec![0.0], vec![0.5]];
        let export = build_export(
            &doc,
            "weak",
            &[("min_R1".to_string(), &weak)],
            &queries,
            1e-3,
            0.5,
            None,
        )
        .unwrap();
        let rates: Vec<f64> = export.boundary.iter().map(|r| r.helper_rates[0]).collect();
        assert_eq!(rates, vec![0.0, 0.5, 1.0]);
        assert!(export.vertices.is_none());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let doc = strong_doc();
        let spec = doc.to_problem_spec().unwrap();
        let grid = GridConfig::default();
        let inner = inner_region(&spec, inner_vertices(&spec, &grid).unwrap()).unwrap();
        let outer = outer_region(&spec, &grid).unwrap();
        let queries = boundary_queries(1, 0.01);
        let export = build_export(
            &doc,
            "both",
            &[
                ("min_R1_inner".to_string(), &inner),
                ("min_R1_outer".to_string(), &outer),
            ],
            &queries,
            grid.step(),
            0.01,
            inner.vertices(),
        )
        .unwrap();
        let text = to_json(&export);
        let back = from_json(&text).unwrap();
        assert_eq!(back.metadata, export.metadata);
        assert_eq!(back.boundary.len(), export.boundary.len());
        for (a, b) in back.boundary.iter().zip(&export.boundary) {
            for (x, y) in a.helper_rates.iter().zip(&b.helper_rates) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            for (x, y) in a.values.iter().zip(&b.values) {
                assert_eq!(x.map(f64::to_bits), y.map(f64::to_bits));
            }
        }
        let va = back.vertices.unwrap();
        let vb = export.vertices.unwrap();
        assert_eq!(va.len(), vb.len());
        for (a, b) in va.iter().zip(&vb) {
            for (x, y) in a.rates.iter().zip(&b.rates) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(a.q_complement, b.q_complement);
            assert_eq!(a.strategies, b.strategies);
        }
    }
}

//! Command-line frontend: ingests JSON problem specs, builds rate
//! regions, exports boundary data, and runs the oracle-vs-formula
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 spec error,
//! 3 unsupported configuration.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mho::export::{self, boundary_queries};
use mho::info::binary_entropy;
use mho::oracle::{cascade_pmf, phi_oracle, wz_envelope_oracle, CascadeSpec};
use mho::regions::{
    inner_region, inner_vertices, outer_region, region_gap, slepian_wolf_reduction, weak_region,
    AchievableTuple, GridConfig, Mode, ProblemSpec, RateRegion, RateTuple, RegionError,
};
use mho::single_letter::{phi, wz_critical_distortion, wz_rate, wz_rate_curve,
    wz_rate_curve_slope, PhiArgs};
use mho::spec::{max_sources_cap, SpecDocument};

/// Helpers enumerable by the brute-force oracle tables.
const ORACLE_HELPERS: usize = 6;

/// Boundary grids for three or more sources are floored at this step to
/// keep surface sweeps tractable.
const SURFACE_STEP_FLOOR: f64 = 1e-2;

/// Seed for verification sampling: ascii "mho".
const SAMPLE_SEED: u64 = 0x6d68_6f;

#[derive(Parser)]
#[command(
    name = "mho",
    version,
    about = "Rate-region bounds for a binary source aided by conditionally independent helpers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a region and export its boundary (and inner vertices).
    Region {
        /// Path to a JSON spec document.
        spec: PathBuf,
        /// Which bound to export; defaults to "both" for strong specs
        /// and "weak" for weak specs.
        #[arg(long, value_enum)]
        bound: Option<BoundChoice>,
        /// Distortion sweep step (overrides the spec's grid_step).
        #[arg(long)]
        grid_step: Option<f64>,
        /// Write here instead of stdout; CSV vertices go to a
        /// ".vertices.csv" sidecar next to it.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatChoice::Csv)]
        format: FormatChoice,
    },
    /// Run oracle-vs-formula invariant suites against a spec.
    Verify {
        /// Path to a JSON spec document.
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
        suite: SuiteChoice,
        /// Membership tolerance (overrides the spec's tolerances).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the critical distortion where the rate curve meets its
    /// tangent through (p, 0).
    Dc {
        /// Helper crossover probability, in (0, 0.5].
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundChoice {
    Inner,
    Outer,
    Weak,
    Both,
}

impl BoundChoice {
    fn name(self) -> &'static str {
        match self {
            BoundChoice::Inner => "inner",
            BoundChoice::Outer => "outer",
            BoundChoice::Weak => "weak",
            BoundChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatChoice {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteChoice {
    Formulas,
    Regions,
    All,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn spec(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<RegionError> for Failure {
    fn from(error: RegionError) -> Self {
        match error {
            RegionError::CapExceeded { .. } => Failure::unsupported(error.to_string()),
            other => Failure::spec(other.to_string()),
        }
    }
}

impl From<mho::spec::SpecError> for Failure {
    fn from(error: mho::spec::SpecError) -> Self {
        Failure::spec(error.to_string())
    }
}

impl From<mho::export::ExportError> for Failure {
    fn from(error: mho::export::ExportError) -> Self {
        Failure::spec(error.to_string())
    }
}

impl From<mho::oracle::OracleError> for Failure {
    fn from(error: mho::oracle::OracleError) -> Self {
        Failure::spec(error.to_string())
    }
}

impl From<mho::info::InfoError> for Failure {
    fn from(error: mho::info::InfoError) -> Self {
        Failure::spec(error.to_string())
    }
}

impl From<mho::single_letter::SingleLetterError> for Failure {
    fn from(error: mho::single_letter::SingleLetterError) -> Self {
        Failure::spec(error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Region {
            spec,
            bound,
            grid_step,
            output,
            format,
        } => run_region(&spec, bound, grid_step, output.as_deref(), format),
        Command::Verify { spec, suite, tol } => run_verify(&spec, suite, tol),
        Command::Dc { p } => run_dc(p),
    }
}

fn load_spec(path: &std::path::Path) -> Result<(SpecDocument, ProblemSpec, usize), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::spec(format!("cannot read {}: {e}", path.display())))?;
    let doc = SpecDocument::from_json(&text)?;
    let problem = doc.to_problem_spec()?;
    let cap = max_sources_cap()?;
    if problem.n() > cap {
        return Err(Failure::unsupported(format!(
            "spec has {} sources but the cap is {cap} (override with MHO_MAX_N)",
            problem.n()
        )));
    }
    Ok((doc, problem, cap))
}

fn run_region(
    spec_path: &std::path::Path,
    bound: Option<BoundChoice>,
    grid_step: Option<f64>,
    output: Option<&std::path::Path>,
    format: FormatChoice,
) -> Result<(), Failure> {
    let (doc, problem, cap) = load_spec(spec_path)?;
    let bound = bound.unwrap_or(match problem.mode() {
        Mode::Strong => BoundChoice::Both,
        Mode::Weak => BoundChoice::Weak,
    });
    match (bound, problem.mode()) {
        (BoundChoice::Weak, Mode::Strong) => {
            return Err(Failure::spec(
                "--bound weak requires a weak-mode spec; strong specs carry \
                 distortion caps the weak region ignores",
            ));
        }
        (BoundChoice::Inner | BoundChoice::Outer | BoundChoice::Both, Mode::Weak) => {
            return Err(Failure::spec(format!(
                "--bound {} requires a strong-mode spec with distortion caps",
                bound.name()
            )));
        }
        _ => {}
    }
    let grid = doc.grid_config(grid_step, cap)?;
    let boundary_step = if problem.n() >= 3 {
        grid.step().max(SURFACE_STEP_FLOOR)
    } else {
        grid.step()
    };
    let queries = boundary_queries(problem.helper_count(), boundary_step);

    let mut inner = None;
    let mut outer = None;
    let mut weak = None;
    if matches!(bound, BoundChoice::Inner | BoundChoice::Both) {
        inner = Some(inner_region(&problem, inner_vertices(&problem, &grid)?)?);
    }
    if matches!(bound, BoundChoice::Outer | BoundChoice::Both) {
        outer = Some(outer_region(&problem, &grid)?);
    }
    if matches!(bound, BoundChoice::Weak) {
        weak = Some(weak_region(&problem)?);
    }
    let mut columns: Vec<(String, &RateRegion)> = Vec::new();
    if let Some(region) = &inner {
        columns.push(("min_R1_inner".to_string(), region));
    }
    if let Some(region) = &outer {
        columns.push(("min_R1_outer".to_string(), region));
    }
    if let Some(region) = &weak {
        columns.push(("min_R1".to_string(), region));
    }
    let vertices = inner.as_ref().and_then(|r| r.vertices());
    let export = export::build_export(
        &doc,
        bound.name(),
        &columns,
        &queries,
        grid.step(),
        boundary_step,
        vertices,
    )?;

    match format {
        FormatChoice::Csv => {
            let boundary = export::boundary_csv(&export);
            let vertices = export::vertices_csv(&export);
            match output {
                Some(path) => {
                    fs::write(path, boundary).map_err(|e| {
                        Failure::spec(format!("cannot write {}: {e}", path.display()))
                    })?;
                    eprintln!("wrote {} ({} rows)", path.display(), export.metadata.rows);
                    if let Some(text) = vertices {
                        let sidecar = path.with_extension("vertices.csv");
                        fs::write(&sidecar, text).map_err(|e| {
                            Failure::spec(format!("cannot write {}: {e}", sidecar.display()))
                        })?;
                        eprintln!("wrote {}", sidecar.display());
                    }
                }
                None => {
                    print!("{boundary}");
                    if let Some(text) = vertices {
                        println!();
                        print!("{text}");
                    }
                }
            }
        }
        FormatChoice::Json => {
            let text = export::to_json(&export);
            match output {
                Some(path) => {
                    fs::write(path, text).map_err(|e| {
                        Failure::spec(format!("cannot write {}: {e}", path.display()))
                    })?;
                    eprintln!("wrote {} ({} rows)", path.display(), export.metadata.rows);
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn run_dc(p: f64) -> Result<(), Failure> {
    if !p.is_finite() || p <= 0.0 || p > 0.5 {
        return Err(Failure::spec(format!(
            "--p {p} is outside (0, 0.5]"
        )));
    }
    let critical = wz_critical_distortion(p)?;
    println!("D_c = {:.11e}", critical.value);
    println!("residual = {:.3e}", critical.residual);
    if critical.degenerate {
        println!("note: tangent construction degenerate; curve already meets zero at p");
    }
    Ok(())
}

/// One verification row: a named invariant, its worst residual, and the
/// parameters that produced it.
struct Check {
    name: &'static str,
    pass: bool,
    residual: f64,
    tol: f64,
    detail: String,
}

impl Check {
    fn from_residual(name: &'static str, residual: f64, tol: f64, detail: String) -> Self {
        Self {
            name,
            pass: residual <= tol,
            residual,
            tol,
            detail,
        }
    }
}

fn run_verify(
    spec_path: &std::path::Path,
    suite: SuiteChoice,
    tol: Option<f64>,
) -> Result<(), Failure> {
    let (doc, problem, cap) = load_spec(spec_path)?;
    let membership_tol = tol.or(doc.membership_tolerance()).unwrap_or(1e-6);
    let grid = doc.grid_config(None, cap)?;
    let mut checks = Vec::new();
    if matches!(suite, SuiteChoice::Formulas | SuiteChoice::All) {
        checks.extend(formula_checks(&problem)?);
    }
    if matches!(suite, SuiteChoice::Regions | SuiteChoice::All) {
        checks.extend(region_checks(&problem, &grid, membership_tol)?);
    }
    let mut all_pass = true;
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<44} max residual {:>12.3e}  (tol {:.1e})",
            check.name, check.residual, check.tol
        );
        if !check.detail.is_empty() {
            println!("      {}", check.detail);
        }
        all_pass &= check.pass;
    }
    if all_pass {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "{} of {} checks failed",
            checks.iter().filter(|c| !c.pass).count(),
            checks.len()
        )))
    }
}

fn dedup_sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

fn formula_checks(problem: &ProblemSpec) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    let mut ps = problem.crossovers().to_vec();
    ps.extend([0.05, 0.1, 0.2, 0.3, 0.45, 0.5]);
    let ps = dedup_sorted(ps);

    // Critical distortion: the defining equation's residual at the root.
    let mut worst = 0.0f64;
    let mut at = String::new();
    for &p in &ps {
        let critical = wz_critical_distortion(p)?;
        if critical.residual > worst {
            worst = critical.residual;
            at = format!("worst at p={p}");
        }
    }
    checks.push(Check::from_residual(
        "critical distortion residual",
        worst,
        1e-10,
        at,
    ));

    // Rate curve against its lower-convex-envelope enumeration.
    let mut worst = 0.0f64;
    let mut at = String::new();
    for &p in &ps {
        if p < 1e-3 {
            continue;
        }
        let envelope = wz_envelope_oracle(p, 2000)?;
        for k in 0..=2000 {
            let d = p * k as f64 / 2000.0;
            let gap = (wz_rate(p, d)? - envelope.value_at(d)?).abs();
            if gap > worst {
                worst = gap;
                at = format!("worst at p={p}, d={d:.6}");
            }
        }
    }
    checks.push(Check::from_residual(
        "rate curve vs envelope enumeration",
        worst,
        1e-6,
        at,
    ));

    // Analytic slope against central finite differences, probed away
    // from the origin where the difference quotient is well conditioned.
    let mut worst = 0.0f64;
    let mut at = String::new();
    let step = 1e-6;
    for &p in &ps {
        if p < 1e-2 {
            continue;
        }
        for k in 0..=50 {
            let d = p * (0.1 + 0.85 * k as f64 / 50.0);
            let analytic = wz_rate_curve_slope(p, d)?;
            let fd = (wz_rate_curve(p, d + step)? - wz_rate_curve(p, d - step)?) / (2.0 * step);
            let gap = (analytic - fd).abs();
            if gap > worst {
                worst = gap;
                at = format!("worst at p={p}, d={d:.6}");
            }
        }
    }
    checks.push(Check::from_residual(
        "curve slope vs central differences",
        worst,
        1e-6,
        at,
    ));

    // The alternating-sum conditional entropy against brute-force
    // enumeration, over every helper subset the oracle can table.
    let crossovers = problem.crossovers();
    let l = crossovers.len();
    let d_grid = [0.0, 0.1, 0.35, 0.5];
    let mut worst = 0.0f64;
    let mut at = String::new();
    for mask in 0u32..(1 << l) {
        let members: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
        if members.len() > ORACLE_HELPERS.min(4) {
            continue;
        }
        let mut indices = vec![0usize; members.len()];
        loop {
            let pairs: Vec<(f64, f64)> = members
                .iter()
                .zip(&indices)
                .map(|(&i, &j)| (crossovers[i], d_grid[j]))
                .collect();
            let formula = phi(&PhiArgs::new(&pairs)?)?;
            let oracle = phi_oracle(&CascadeSpec::new(&pairs)?)?;
            let gap = (formula - oracle).abs();
            if gap > worst {
                worst = gap;
                at = format!("worst at pairs={pairs:?}");
            }
            let mut pos = members.len();
            loop {
                if pos == 0 {
                    break;
                }
                indices[pos - 1] += 1;
                if indices[pos - 1] < d_grid.len() {
                    break;
                }
                indices[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    checks.push(Check::from_residual(
        "conditional entropy vs enumeration",
        worst,
        1e-10,
        at,
    ));
    Ok(checks)
}

fn sample_mixture(
    rng: &mut ChaCha8Rng,
    vertices: &[AchievableTuple],
    n: usize,
) -> Vec<f64> {
    let k = rng.gen_range(1..=3usize.min(vertices.len()));
    let mut picks = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    let mut total = 0.0;
    for _ in 0..k {
        picks.push(rng.gen_range(0..vertices.len()));
        let w: f64 = rng.gen::<f64>() + 1e-9;
        total += w;
        weights.push(w);
    }
    let mut point = vec![0.0; n];
    for (&idx, &w) in picks.iter().zip(&weights) {
        let share = w / total;
        for (j, &r) in vertices[idx].rates().rates().iter().enumerate() {
            point[j] += share * r;
        }
    }
    for value in &mut point {
        *value += rng.gen::<f64>() * 0.25;
    }
    point
}

fn region_checks(
    problem: &ProblemSpec,
    grid: &GridConfig,
    membership_tol: f64,
) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    let crossovers = problem.crossovers().to_vec();
    let l = crossovers.len();
    let probe_step = if l == 1 { 5e-3 } else { 5e-2 };

    if problem.mode() == Mode::Strong {
        // Inner tuples stay inside the outer bound.
        let outer = outer_region(problem, grid)?;
        let vertices = inner_vertices(problem, grid)?;
        let mut violations = 0usize;
        let mut worst = 0.0f64;
        let mut at = String::new();
        for vertex in &vertices {
            let rates = vertex.rates().rates();
            match outer.min_rate1(&rates[1..])? {
                Some(bound) => {
                    let deficit = bound - rates[0];
                    if deficit > worst {
                        worst = deficit;
                        at = format!("worst vertex {rates:?}");
                    }
                    if deficit > membership_tol {
                        violations += 1;
                    }
                }
                None => violations += 1,
            }
        }
        let inner = inner_region(problem, vertices)?;
        let generators = inner.vertices().unwrap_or(&[]);
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..2000 {
            let point = sample_mixture(&mut rng, generators, problem.n());
            let tuple = RateTuple::new(point)?;
            if !outer.contains(&tuple, membership_tol)? {
                violations += 1;
                at = format!("offending tuple {:?}", tuple.rates());
            }
        }
        checks.push(Check {
            name: "inner tuples lie inside the outer bound",
            pass: violations == 0,
            residual: worst.max(0.0),
            tol: membership_tol,
            detail: if violations == 0 { String::new() } else { at },
        });

        // Signed boundary gap: the inner bound never dips below the
        // outer bound, and the mismatch band is reported.
        let queries = boundary_queries(l, probe_step);
        let report = region_gap(&inner, &outer, &queries)?;
        let mut above_critical = false;
        for (&p, &cap) in crossovers.iter().zip(problem.caps()) {
            if cap > wz_critical_distortion(p)?.value {
                above_critical = true;
            }
        }
        let flag = if report.max_gap <= 1e-3 {
            ""
        } else if above_critical {
            " EXPECTED (a cap sits above its critical distortion)"
        } else if l >= 2 {
            " EXPECTED (the achievable family forgoes cross-helper binning)"
        } else {
            ""
        };
        checks.push(Check {
            name: "inner boundary stays above the outer boundary",
            pass: report.min_gap >= -1e-9 && report.one_sided == 0,
            residual: (-report.min_gap).max(0.0),
            tol: 1e-9,
            detail: format!(
                "max gap {:.3e} at {:?}{flag}",
                report.max_gap, report.argmax
            ),
        });
    } else {
        // Weak-region boundary against the enumeration oracle, one
        // helper swept at a time with all others fully described.
        let weak = weak_region(problem)?;
        let mut worst = 0.0f64;
        let mut at = String::new();
        if l <= ORACLE_HELPERS {
            for i in 0..l {
                for k in 0..=10 {
                    let d = 0.05 * k as f64;
                    let mut query = vec![1.0; l];
                    query[i] = 1.0 - binary_entropy(d)?;
                    let bound = weak
                        .min_rate1(&query)?
                        .expect("weak regions have no helper floors");
                    let mut pairs: Vec<(f64, f64)> =
                        crossovers.iter().map(|&p| (p, 0.0)).collect();
                    pairs[i].1 = d;
                    let pmf = cascade_pmf(&CascadeSpec::new(&pairs)?)?;
                    let labels: Vec<String> =
                        (0..l).map(|j| format!("U{}", j + 2)).collect();
                    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                    let oracle = pmf.conditional_entropy(&["X1"], &refs)?;
                    let gap = (bound - oracle).abs();
                    if gap > worst {
                        worst = gap;
                        at = format!("worst sweeping helper {} at d={d}", i + 2);
                    }
                }
            }
        }
        checks.push(Check::from_residual(
            "weak boundary vs enumeration",
            worst,
            1e-10,
            at,
        ));
    }

    // The weak region coincides with the outer bound once every cap
    // equals its crossover.
    let weak_spec = ProblemSpec::weak(&crossovers)?;
    let strong_at_p = ProblemSpec::strong(&crossovers, &crossovers)?;
    let weak = weak_region(&weak_spec)?;
    let outer_at_p = outer_region(&strong_at_p, &GridConfig::default())?;
    let mut worst = 0.0f64;
    let mut at = String::new();
    for query in boundary_queries(l, probe_step) {
        let a = weak.min_rate1(&query)?.expect("weak regions are always feasible");
        let b = outer_at_p
            .min_rate1(&query)?
            .expect("outer floors vanish when caps equal crossovers");
        let gap = (a - b).abs();
        if gap > worst {
            worst = gap;
            at = format!("worst at helper rates {query:?}");
        }
    }
    checks.push(Check::from_residual(
        "weak boundary equals outer at full caps",
        worst,
        1e-9,
        at,
    ));

    // Zero caps collapse both bounds to the lossless corner region.
    let lossless = ProblemSpec::strong(&crossovers, &vec![0.0; l])?;
    match slepian_wolf_reduction(&lossless) {
        Ok(report) => {
            checks.push(Check::from_residual(
                "lossless reduction: bounds coincide",
                report.max_gap,
                1e-9,
                String::new(),
            ));
            if l <= ORACLE_HELPERS {
                let pairs: Vec<(f64, f64)> = crossovers.iter().map(|&p| (p, 0.0)).collect();
                let pmf = cascade_pmf(&CascadeSpec::new(&pairs)?)?;
                let x_labels: Vec<String> = (0..l).map(|j| format!("X{}", j + 2)).collect();
                let refs: Vec<&str> = x_labels.iter().map(String::as_str).collect();
                let conditional = pmf.conditional_entropy(&["X1"], &refs)?;
                let corner_gap = (report.corner.rates()[0] - conditional).abs();
                let mut all = vec!["X1"];
                all.extend(refs.iter().copied());
                let joint = pmf.entropy(&all)?;
                let sum_gap = (report.sum_rate - joint).abs();
                checks.push(Check::from_residual(
                    "lossless corner vs enumeration",
                    corner_gap.max(sum_gap),
                    1e-10,
                    format!(
                        "corner R1 {:.12}, sum rate {:.12}",
                        report.corner.rates()[0],
                        report.sum_rate
                    ),
                ));
            }
        }
        Err(error) => checks.push(Check {
            name: "lossless reduction: bounds coincide",
            pass: false,
            residual: f64::NAN,
            tol: 1e-9,
            detail: error.to_string(),
        }),
    }
    Ok(checks)
}

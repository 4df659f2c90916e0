//! On-disk document formats and report plumbing: JSON schemas for
//! observables, covariance triples, region boundaries, and run
//! configurations; CSV emission of boundary sweeps; and the primal
//! verification report.
//!
//! Conventions shared by every document:
//!
//! * complex numbers are `[re, im]` pairs; matrices are row-major nested
//!   arrays of such pairs;
//! * every document carries `"schema": 1` — unknown versions are rejected,
//!   never guessed;
//! * loading validates in full (Hermiticity, positivity, normalisation,
//!   group axioms, homomorphism property), with parse errors and
//!   mathematical-validation errors distinguished by error variant;
//! * floats in CSV output carry 17 significant digits; JSON floats use the
//!   shortest round-trip representation.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CovmurError, Result};
use crate::fourier::{dual_boundary, primal_sampler, primal_witness, FourierBoundary};
use crate::linalg::{CMat, HermitianOperator, C64};
use crate::metrics::{DistanceResult, PNorm};
use crate::observables::{Observable, Outcome};
use crate::pauli::PauliBoundary;
use crate::symmetry::{
    CovarianceTriple, FiniteGroup, OutcomeAction, SymmetryOp, SymmetryRepresentation,
};
use crate::tol;

/// Version stamp carried by every document this crate reads or writes.
pub const SCHEMA_VERSION: i64 = 1;

/// Upper bound on `order² · dim⁵` for covariance-triple documents: the
/// representation homomorphism check costs that many flops, and untrusted
/// files must not buy unbounded CPU time. Generous enough for every
/// instance the CLI produces (Pauli: 2·10³; Fourier n = 12: 5·10⁹).
const MAX_TRIPLE_VALIDATION_COST: f64 = 1e10;

fn require_schema(found: i64) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(CovmurError::SchemaVersion { found });
    }
    Ok(())
}

fn require_finite(x: f64, what: &str) -> Result<f64> {
    if !x.is_finite() {
        return Err(CovmurError::Parse(format!("non-finite {what}: {x}")));
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// JSON form of a complex matrix: row-major rows of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub(crate) fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub(crate) fn matrix_from_json(rows: &JsonMatrix) -> Result<CMat> {
    if rows.is_empty() {
        return Err(CovmurError::Parse("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if ncols == 0 {
        return Err(CovmurError::Parse("matrix with empty rows".into()));
    }
    for row in rows {
        if row.len() != ncols {
            return Err(CovmurError::Parse(format!(
                "ragged matrix: row of length {} in a {}-column matrix",
                row.len(),
                ncols
            )));
        }
        for entry in row {
            require_finite(entry[0], "matrix entry")?;
            require_finite(entry[1], "matrix entry")?;
        }
    }
    Ok(CMat::from_fn(rows.len(), ncols, |r, c| {
        C64::new(rows[r][c][0], rows[r][c][1])
    }))
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ObservableDoc {
    schema: i64,
    dim: usize,
    outcomes: Vec<Outcome>,
    effects: Vec<JsonMatrix>,
}

/// Serialise an observable to its JSON document.
pub fn observable_to_json(obs: &Observable) -> String {
    let doc = ObservableDoc {
        schema: SCHEMA_VERSION,
        dim: obs.dim(),
        outcomes: obs.outcomes().to_vec(),
        effects: obs.effects().iter().map(|e| matrix_to_json(e.matrix())).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("observable document serialises")
}

/// Parse an observable document structurally: schema, shapes, Hermiticity,
/// and outcome-list structure — but no positivity/normalisation check.
/// Used by the `validate` command, which wants to report those defects
/// rather than fail on them.
pub fn parse_observable_structural(s: &str) -> Result<Observable> {
    let doc: ObservableDoc = serde_json::from_str(s)?;
    require_schema(doc.schema)?;
    if doc.dim == 0 {
        return Err(CovmurError::Parse("dimension must be positive".into()));
    }
    let effects = doc
        .effects
        .iter()
        .map(|m| {
            let mat = matrix_from_json(m)?;
            if mat.nrows() != doc.dim || mat.ncols() != doc.dim {
                return Err(CovmurError::DimensionMismatch {
                    expected: doc.dim,
                    got: mat.nrows().max(mat.ncols()),
                });
            }
            HermitianOperator::new(mat)
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::new(doc.outcomes, effects)
}

/// Parse and fully validate an observable document: structural checks plus
/// effect positivity and normalisation within the default tolerance.
pub fn parse_observable(s: &str) -> Result<Observable> {
    let obs = parse_observable_structural(s)?;
    let report = obs.validate(tol::DEFAULT_VALIDATE);
    if !report.passes() {
        return Err(CovmurError::InvalidObservable(format!(
            "effects fail validation: worst positivity defect {:.3e}, \
             normalisation defect {:.3e} (tolerance {:.3e})",
            report.positivity_defect(),
            report.normalisation_defect,
            report.tolerance
        )));
    }
    Ok(obs)
}

/// Load and fully validate an observable from a JSON file.
pub fn load_observable(path: impl AsRef<Path>) -> Result<Observable> {
    parse_observable(&std::fs::read_to_string(path)?)
}

/// Save an observable as a JSON document.
pub fn save_observable(obs: &Observable, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, observable_to_json(obs))?)
}

// ---------------------------------------------------------------------------
// Covariance triples
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
}

#[derive(Serialize, Deserialize)]
struct ActionDoc {
    outcomes: Vec<Outcome>,
    perms: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RepresentationDoc {
    unitaries: Vec<JsonMatrix>,
    antiunitary: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct TripleDoc {
    schema: i64,
    group: GroupDoc,
    action: ActionDoc,
    representation: RepresentationDoc,
}

/// Serialise a covariance triple to its JSON document.
pub fn triple_to_json(triple: &CovarianceTriple) -> String {
    let group = triple.group();
    let doc = TripleDoc {
        schema: SCHEMA_VERSION,
        group: GroupDoc {
            order: group.order(),
            cayley: group.cayley().to_vec(),
            identity: group.identity(),
        },
        action: ActionDoc {
            outcomes: triple.action().outcomes().to_vec(),
            perms: (0..group.order())
                .map(|g| triple.action().perm(g).to_vec())
                .collect(),
        },
        representation: RepresentationDoc {
            unitaries: (0..group.order())
                .map(|g| matrix_to_json(&triple.representation().op(g).unitary))
                .collect(),
            antiunitary: (0..group.order())
                .map(|g| triple.representation().op(g).antiunitary)
                .collect(),
        },
    };
    serde_json::to_string_pretty(&doc).expect("triple document serialises")
}

/// Parse and fully validate a covariance-triple document: group axioms,
/// action laws, unitarity, and the homomorphism property all re-checked.
pub fn parse_triple(s: &str) -> Result<CovarianceTriple> {
    let doc: TripleDoc = serde_json::from_str(s)?;
    require_schema(doc.schema)?;
    if doc.group.order != doc.group.cayley.len() {
        return Err(CovmurError::InvalidGroup(format!(
            "declared order {} does not match Cayley table size {}",
            doc.group.order,
            doc.group.cayley.len()
        )));
    }
    let group = FiniteGroup::from_cayley(doc.group.cayley)?;
    if group.identity() != doc.group.identity {
        return Err(CovmurError::InvalidGroup(format!(
            "declared identity {} but the Cayley table identity is {}",
            doc.group.identity,
            group.identity()
        )));
    }
    if doc.representation.unitaries.len() != group.order()
        || doc.representation.antiunitary.len() != group.order()
    {
        return Err(CovmurError::InvalidRepresentation(format!(
            "expected {} operators and flags, got {} and {}",
            group.order(),
            doc.representation.unitaries.len(),
            doc.representation.antiunitary.len()
        )));
    }
    let dim = doc
        .representation
        .unitaries
        .first()
        .map(|m| m.len())
        .unwrap_or(0);
    let cost = (group.order() as f64).powi(2) * (dim as f64).powi(5);
    if cost > MAX_TRIPLE_VALIDATION_COST {
        return Err(CovmurError::Unsupported(format!(
            "triple validation cost order²·dim⁵ = {cost:.3e} exceeds the \
             resource bound {MAX_TRIPLE_VALIDATION_COST:.1e}"
        )));
    }
    let ops = doc
        .representation
        .unitaries
        .iter()
        .zip(&doc.representation.antiunitary)
        .map(|(m, &anti)| {
            let mat = matrix_from_json(m)?;
            Ok(if anti {
                SymmetryOp::antiunitary(mat)
            } else {
                SymmetryOp::unitary(mat)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let representation = SymmetryRepresentation::new(group.clone(), ops)?;
    let action = OutcomeAction::new(group, doc.action.outcomes, doc.action.perms)?;
    CovarianceTriple::new(representation, action)
}

/// Load and fully validate a covariance triple from a JSON file.
pub fn load_triple(path: impl AsRef<Path>) -> Result<CovarianceTriple> {
    parse_triple(&std::fs::read_to_string(path)?)
}

/// Save a covariance triple as a JSON document.
pub fn save_triple(triple: &CovarianceTriple, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, triple_to_json(triple))?)
}

// ---------------------------------------------------------------------------
// Region boundaries
// ---------------------------------------------------------------------------

/// Output format for boundary emission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryFormat {
    Csv,
    Json,
}

impl FromStr for BoundaryFormat {
    type Err = CovmurError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(BoundaryFormat::Csv),
            "json" => Ok(BoundaryFormat::Json),
            other => Err(CovmurError::Parse(format!(
                "unknown boundary format {other:?} (expected csv or json)"
            ))),
        }
    }
}

/// A swept region boundary with its per-point verification residuals, in a
/// family-agnostic tabular form ready for CSV or JSON emission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub schema: i64,
    /// Family tag: "pauli" or "fourier".
    pub family: String,
    pub p: PNorm,
    /// Hilbert-space dimension (2 for the Pauli family, n for Fourier).
    pub dim: usize,
    /// RNG seed recorded for reproducibility (sweeps themselves are
    /// deterministic).
    pub seed: u64,
    /// Column names, fixed per family.
    pub columns: Vec<String>,
    /// Data rows, one per boundary point, in column order.
    pub points: Vec<Vec<f64>>,
}

impl RegionBoundary {
    /// Tabulate a Pauli sphere sweep (columns d_a, d_b, d_c,
    /// sphere_residual).
    pub fn from_pauli(boundary: &PauliBoundary, seed: u64) -> Self {
        RegionBoundary {
            schema: SCHEMA_VERSION,
            family: "pauli".into(),
            p: boundary.p,
            dim: 2,
            seed,
            columns: ["d_a", "d_b", "d_c", "sphere_residual"]
                .map(String::from)
                .to_vec(),
            points: boundary
                .points
                .iter()
                .map(|pt| {
                    let [a, b, c] = pt.point.coords();
                    vec![a, b, c, pt.sphere_residual]
                })
                .collect(),
        }
    }

    /// Tabulate a Fourier boundary sweep (columns d_a, d_b,
    /// ellipse_residual, duality_gap; p = ∞ throughout).
    pub fn from_fourier(boundary: &FourierBoundary, seed: u64) -> Self {
        RegionBoundary {
            schema: SCHEMA_VERSION,
            family: "fourier".into(),
            p: PNorm::Infinity,
            dim: boundary.n,
            seed,
            columns: ["d_a", "d_b", "ellipse_residual", "duality_gap"]
                .map(String::from)
                .to_vec(),
            points: boundary
                .points
                .iter()
                .map(|pt| vec![pt.d_a, pt.d_b, pt.ellipse_residual, pt.duality_gap])
                .collect(),
        }
    }

    /// Residual tolerances per column for this family; columns without a
    /// verification semantic carry no bound.
    fn residual_tolerance(&self, column: &str) -> Option<f64> {
        match (self.family.as_str(), column) {
            ("pauli", "sphere_residual") => Some(tol::TANGENCY),
            ("fourier", "ellipse_residual") => Some(tol::ELLIPSE_RESIDUAL),
            ("fourier", "duality_gap") => Some(tol::STRONG_DUALITY),
            _ => None,
        }
    }

    /// Rows whose verification residuals exceed the module-declared
    /// tolerances: (row index, column name, value, tolerance). Empty for
    /// every boundary this crate emits.
    pub fn flagged_rows(&self) -> Vec<(usize, String, f64, f64)> {
        let mut flags = Vec::new();
        for (ci, col) in self.columns.iter().enumerate() {
            let Some(bound) = self.residual_tolerance(col) else {
                continue;
            };
            for (ri, row) in self.points.iter().enumerate() {
                let value = row.get(ci).copied().unwrap_or(f64::NAN);
                if !(value.abs() <= bound) {
                    flags.push((ri, col.clone(), value, bound));
                }
            }
        }
        flags
    }

    /// Render the CSV form: comment header (family, p, dim, seed, tool
    /// version), column header, then rows with 17-significant-digit
    /// floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# family={} p={} dim={} seed={} tool=covmur {}",
            self.family,
            self.p,
            self.dim,
            self.seed,
            env!("CARGO_PKG_VERSION")
        );
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.points {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Render the JSON form (round-trips to an equal boundary).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("boundary serialises")
    }

    /// Parse the JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        let b: RegionBoundary = serde_json::from_str(s)?;
        require_schema(b.schema)?;
        b.check_table()?;
        Ok(b)
    }

    /// Parse the CSV form this crate emits (strict: one comment header
    /// with key=value metadata, one column-header row, float cells).
    pub fn from_csv(s: &str) -> Result<Self> {
        let mut family = None;
        let mut p = None;
        let mut dim = None;
        let mut seed = None;
        let mut columns: Option<Vec<String>> = None;
        let mut points = Vec::new();
        for line in s.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for token in meta.split_whitespace() {
                    let Some((key, value)) = token.split_once('=') else {
                        continue;
                    };
                    match key {
                        "family" => family = Some(value.to_string()),
                        "p" => {
                            p = Some(value.parse::<PNorm>().map_err(|e| {
                                CovmurError::Parse(format!("bad p in CSV header: {e}"))
                            })?)
                        }
                        "dim" => {
                            dim = Some(value.parse::<usize>().map_err(|e| {
                                CovmurError::Parse(format!("bad dim in CSV header: {e}"))
                            })?)
                        }
                        "seed" => {
                            seed = Some(value.parse::<u64>().map_err(|e| {
                                CovmurError::Parse(format!("bad seed in CSV header: {e}"))
                            })?)
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if columns.is_none() {
                columns = Some(line.split(',').map(|c| c.trim().to_string()).collect());
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| {
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|e| CovmurError::Parse(format!("bad float {cell:?}: {e}")))
                        .and_then(|x| require_finite(x, "CSV cell"))
                })
                .collect::<Result<Vec<f64>>>()?;
            points.push(row);
        }
        let boundary = RegionBoundary {
            schema: SCHEMA_VERSION,
            family: family.ok_or_else(|| CovmurError::Parse("missing family in CSV".into()))?,
            p: p.ok_or_else(|| CovmurError::Parse("missing p in CSV".into()))?,
            dim: dim.ok_or_else(|| CovmurError::Parse("missing dim in CSV".into()))?,
            seed: seed.ok_or_else(|| CovmurError::Parse("missing seed in CSV".into()))?,
            columns: columns.ok_or_else(|| CovmurError::Parse("missing CSV header".into()))?,
            points,
        };
        boundary.check_table()?;
        Ok(boundary)
    }

    fn check_table(&self) -> Result<()> {
        if self.columns.is_empty() {
            return Err(CovmurError::Parse("boundary with no columns".into()));
        }
        for row in &self.points {
            if row.len() != self.columns.len() {
                return Err(CovmurError::Parse(format!(
                    "row of {} cells in a {}-column table",
                    row.len(),
                    self.columns.len()
                )));
            }
            for &x in row {
                require_finite(x, "boundary value")?;
            }
        }
        Ok(())
    }
}

/// Write a boundary to `path` in the requested format.
pub fn emit_boundary(
    boundary: &RegionBoundary,
    path: impl AsRef<Path>,
    format: BoundaryFormat,
) -> Result<()> {
    let body = match format {
        BoundaryFormat::Csv => boundary.to_csv(),
        BoundaryFormat::Json => boundary.to_json(),
    };
    Ok(std::fs::write(path, body)?)
}

/// Load a boundary from `path` in the given format.
pub fn load_boundary(path: impl AsRef<Path>, format: BoundaryFormat) -> Result<RegionBoundary> {
    let body = std::fs::read_to_string(path)?;
    match format {
        BoundaryFormat::Csv => RegionBoundary::from_csv(&body),
        BoundaryFormat::Json => RegionBoundary::from_json(&body),
    }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

/// The resolved configuration of one CLI invocation, stamped into reports
/// for reproducibility. Fixing every field (in particular `seed`) makes
/// sampler-based command outputs byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: i64,
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<PNorm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl RunConfig {
    /// A config stamp for `command` with the default seed.
    pub fn new(command: impl Into<String>) -> Self {
        RunConfig {
            schema: SCHEMA_VERSION,
            command: command.into(),
            inputs: Vec::new(),
            p: None,
            dim: None,
            grid: None,
            samples: None,
            seed: 0,
            output: None,
            tol: None,
        }
    }

    /// Parse a run configuration, rejecting unknown schema versions.
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        require_schema(cfg.schema)?;
        if let Some(t) = cfg.tol {
            require_finite(t, "tolerance")?;
        }
        Ok(cfg)
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// JSON report for the `distance` command: the value, whether it is exact,
/// and the witness state (if any) as a matrix.
pub fn distance_report_json(result: &DistanceResult) -> String {
    #[derive(Serialize)]
    struct Doc {
        schema: i64,
        value: f64,
        exact: bool,
        witness: Option<JsonMatrix>,
    }
    serde_json::to_string_pretty(&Doc {
        schema: SCHEMA_VERSION,
        value: result.value,
        exact: result.exact,
        witness: result
            .witness
            .as_ref()
            .map(|w| matrix_to_json(w.operator().matrix())),
    })
    .expect("distance report serialises")
}

/// One grid point of the primal verification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimalVerificationPoint {
    pub d_a: f64,
    /// Dual optimum n·(1 − d_b^min).
    pub dual_value: f64,
    /// Analytic witness value (must equal the dual optimum).
    pub witness_p: f64,
    /// Best feasible value found by the Monte-Carlo sampler.
    pub sampler_best: f64,
    /// witness_p − dual_value (strong duality: ≈ 0).
    pub duality_gap: f64,
    /// dual_value − sampler_best (weak duality: ≥ −slack).
    pub sampler_gap: f64,
    pub weak_duality_ok: bool,
}

/// Report of the Monte-Carlo falsification run for the Fourier dual
/// boundary: per grid point, the dual value, witness value, and best
/// sampled feasible value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimalVerificationReport {
    pub schema: i64,
    pub config: RunConfig,
    pub n: usize,
    pub grid: usize,
    pub seeds: usize,
    pub seed: u64,
    pub all_ok: bool,
    pub points: Vec<PrimalVerificationPoint>,
}

/// Run the sampler against the dual bound on a uniform d_a grid.
pub fn verify_primal_report(
    n: usize,
    grid: usize,
    seeds: usize,
    seed: u64,
    config: RunConfig,
) -> Result<PrimalVerificationReport> {
    if grid < 2 {
        return Err(CovmurError::Domain(format!(
            "primal verification needs a grid of ≥ 2 points, got {grid}"
        )));
    }
    let hi = 1.0 - 1.0 / n as f64;
    let mut points = Vec::with_capacity(grid);
    let mut all_ok = true;
    for i in 0..grid {
        let d_a = hi * i as f64 / (grid - 1) as f64;
        let d_b = dual_boundary(n, d_a)?;
        let dual_value = n as f64 * (1.0 - d_b);
        let witness = primal_witness(n, d_a)?;
        // Derive a distinct sub-seed per grid point deterministically.
        let sampler_best = primal_sampler(n, d_a, seeds, seed.wrapping_add(i as u64), None)?;
        let weak_duality_ok = sampler_best <= dual_value + tol::WEAK_DUALITY_SLACK;
        all_ok &= weak_duality_ok
            && (witness.p_value - dual_value).abs() <= tol::STRONG_DUALITY;
        points.push(PrimalVerificationPoint {
            d_a,
            dual_value,
            witness_p: witness.p_value,
            sampler_best,
            duality_gap: witness.p_value - dual_value,
            sampler_gap: dual_value - sampler_best,
            weak_duality_ok,
        });
    }
    Ok(PrimalVerificationReport {
        schema: SCHEMA_VERSION,
        config,
        n,
        grid,
        seeds,
        seed,
        all_ok,
        points,
    })
}

//! End-to-end analysis: validation, census, Hessian, signature, kernel
//! construction and rigidity of the boundary, with consistency checks
//! between them.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::catalog::{self, CatalogEntry, Expected};
use crate::complex::{census, cone_triangulation, validate, Census, Triangulation3, ValidationReport};
use crate::error::{Error, Result};
use crate::geometry::ClosedSurface;
use crate::io::{parse_model, Model};
use crate::moves::theorem_signature;
use crate::regge::{angle_state, hessian, kernel_span_check, HessianOptions, HessianReport, KernelSpanCheck};
use crate::rigidity::{dehn_decomposition_check, flex_space, surface_flat_vertices, DehnCheck, Framework};
use crate::tol;

/// Largest accepted `‖M ℓ^Q‖ / (‖M‖ ‖ℓ^Q‖)`.
pub const KERNEL_RESIDUAL: f64 = 1e-6;
/// Largest accepted curvature at the realized lengths.
pub const FLATNESS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalysisConfig {
    pub hessian: HessianOptions,
    pub boundary_only: bool,
    pub cone_apex: Option<usize>,
    pub timestamps: bool,
}

#[derive(Debug, Clone)]
pub enum Source {
    Catalog(String),
    File { path: String, bytes: Vec<u8> },
}

#[derive(Debug, Clone, Serialize)]
pub struct InputIdentity {
    pub source: String,
    /// SHA-256 of the input bytes (of the entry dump for catalog entries).
    pub sha256: String,
    /// `tets` or `boundary`.
    pub kind: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub zero_threshold: f64,
    pub fd_step: f64,
    pub spectral_gap: f64,
    pub hessian_symmetry: f64,
    pub kernel_residual: f64,
    pub flatness: f64,
    pub rigidity_rank: f64,
    pub flat_vertex: f64,
    pub degenerate_volume: f64,
}

impl Tolerances {
    fn from(opts: &HessianOptions) -> Self {
        Tolerances {
            zero_threshold: opts.zero_threshold,
            fd_step: opts.fd_step,
            spectral_gap: tol::SPECTRAL_GAP,
            hessian_symmetry: tol::HESSIAN_SYMMETRY,
            kernel_residual: KERNEL_RESIDUAL,
            flatness: FLATNESS,
            rigidity_rank: tol::RIGIDITY_RANK,
            flat_vertex: tol::FLAT_VERTEX,
            degenerate_volume: tol::DEGENERATE_VOLUME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// A structural prediction; failure is a genuine inconsistency.
    Theorem,
    /// A numerical quality gate; failure makes verdicts unreliable.
    Numeric,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    /// Boundary vertices whose star is planar.
    pub flat_vertices: Vec<usize>,
    pub kernel_dim: usize,
    pub nontrivial_dim: usize,
    pub gap_ratio: Option<f64>,
    /// Infinitesimal rigidity of the polyhedron; only decided when the
    /// boundary triangulation has no flat vertices.
    pub rigid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dehn: Option<DehnCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Runtime {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub input: InputIdentity,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian: Option<HessianReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpanCheck>,
    pub rigidity: RigidityReport,
    pub checks: Vec<Check>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Exit status: 4 when a numeric gate fails, else 1 when a theorem check
/// fails, else 0.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| !c.passed && c.kind == CheckKind::Numeric) {
        4
    } else if checks.iter().any(|c| !c.passed && c.kind == CheckKind::Theorem) {
        1
    } else {
        0
    }
}

/// Process exit code for an error: 2 for unreadable or invalid input, 3 for
/// move preconditions, 4 for numeric failures.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::Io(_) | Error::Validation(_) | Error::UnknownName(_) => 2,
        Error::PointNotInterior(_)
        | Error::NotConvexBipyramid(_)
        | Error::InvalidMove(_)
        | Error::GenericityFailure(_)
        | Error::IncompatibleEdgeSets(_) => 3,
        Error::ThetaOutOfRange(_) | Error::MissingReferenceFaces => 2,
        _ => 4,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn check(name: &str, kind: CheckKind, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), kind, passed, detail }
}

/// Input after loading: the triangulation to analyze (if any) and the
/// boundary surface used for rigidity.
struct Loaded {
    identity: InputIdentity,
    triangulation: Option<Triangulation3>,
    boundary: ClosedSurface,
    expected: Option<Expected>,
}

fn load(source: &Source, config: &AnalysisConfig) -> Result<Loaded> {
    let (name, sha256, mut triangulation, boundary, faces, expected) = match source {
        Source::Catalog(name) => {
            let e: CatalogEntry = catalog::builtin(name)?;
            let dump = serde_json::to_vec(&e.dump())?;
            let sha = sha256_hex(&dump);
            (format!("catalog:{name}"), sha, e.triangulation, Some(e.boundary), e.faces, Some(e.expected))
        }
        Source::File { path, bytes } => {
            let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
            match parse_model(text)? {
                Model::Tets(t) => (path.clone(), sha256_hex(bytes), Some(t), None, Vec::new(), None),
                Model::Boundary(off) => {
                    let s = off.surface()?;
                    (path.clone(), sha256_hex(bytes), None, Some(s), off.faces, None)
                }
            }
        }
    };
    if let (Some(apex), Some(s)) = (config.cone_apex, &boundary) {
        triangulation = Some(cone_triangulation(s, apex, Some(faces))?);
    }
    if let Some(t) = &triangulation {
        let v = validate(t);
        if !v.is_valid() {
            return Err(Error::Validation(v.summary()));
        }
    }
    let boundary = match (boundary, &triangulation) {
        (Some(b), _) => b,
        (None, Some(t)) => t.boundary_surface()?,
        (None, None) => unreachable!("every input has a boundary or tets"),
    };
    let triangulation = if config.boundary_only { None } else { triangulation };
    let kind = if triangulation.is_some() { "tets" } else { "boundary" };
    let mut boundary = boundary.compacted().0;
    boundary.orient_outward()?;
    Ok(Loaded { identity: InputIdentity { source: name, sha256, kind }, triangulation, boundary, expected })
}

fn rigidity_report(s: &ClosedSurface) -> Result<RigidityReport> {
    let flat: Vec<usize> = surface_flat_vertices(s).into_iter().map(|(v, _)| v).collect();
    let fs = flex_space(&Framework::from_surface(s)?)?;
    let dehn = if s.is_convex(tol::FLAT_VERTEX) { Some(dehn_decomposition_check(s)?) } else { None };
    Ok(RigidityReport {
        rigid: flat.is_empty().then_some(fs.nontrivial_dim == 0),
        flat_vertices: flat,
        kernel_dim: fs.kernel_dim,
        nontrivial_dim: fs.nontrivial_dim,
        gap_ratio: fs.gap_ratio,
        dehn,
    })
}

pub fn analyze(source: &Source, config: &AnalysisConfig) -> Result<AnalysisReport> {
    let started = Instant::now();
    let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    let loaded = load(source, config)?;
    let mut checks = Vec::new();
    let mut validation = None;
    let mut census_out = None;
    let mut hessian_out = None;
    let mut kernel_out = None;

    if let Some(t) = &loaded.triangulation {
        validation = Some(validate(t));
        let c = census(t)?;
        let h = hessian(t, &config.hessian)?;
        let topo = &c.topology;
        let kappa = angle_state(t, topo, &t.realized_lengths(topo))?.kappa;
        let max_kappa = kappa.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        let k = kernel_span_check(t, &c, &h)?;

        checks.push(check(
            "hessian-symmetry",
            CheckKind::Numeric,
            h.relative_asymmetry < tol::HESSIAN_SYMMETRY,
            format!("relative asymmetry {:e}", h.relative_asymmetry),
        ));
        checks.push(check(
            "spectral-gap",
            CheckKind::Numeric,
            h.gap_ratio.map_or(true, |g| g >= tol::SPECTRAL_GAP),
            match h.gap_ratio {
                Some(g) => format!("gap ratio {g:e}"),
                None => "no nonzero eigenvalue".into(),
            },
        ));
        checks.push(check(
            "flat-at-realization",
            CheckKind::Theorem,
            max_kappa < FLATNESS,
            format!("max |kappa| {max_kappa:e}"),
        ));
        let predicted = theorem_signature(&c);
        checks.push(check(
            "signature",
            CheckKind::Theorem,
            predicted == Some(h.signature),
            format!(
                "observed {}, predicted (m, 3m+k, n-4m-k) = {} with m={}, k={}, n={}",
                h.signature,
                predicted.map_or("undefined".into(), |s| s.to_string()),
                c.m(),
                c.k(),
                c.n()
            ),
        ));
        checks.push(check(
            "kernel-construction",
            CheckKind::Theorem,
            k.passes(KERNEL_RESIDUAL),
            format!(
                "predicted {}, span rank {}, observed {}, max residual {:e}",
                k.predicted, k.span_rank, k.observed, k.max_residual
            ),
        ));
        census_out = Some(c);
        hessian_out = Some(h);
        kernel_out = Some(k);
    }

    let rigidity = rigidity_report(&loaded.boundary)?;
    if let (Some(c), Some(h), Some(rigid)) = (&census_out, &hessian_out, rigidity.rigid) {
        if c.m() == 0 && c.k() == 0 {
            let nondegenerate = h.signature.zero == 0;
            checks.push(check(
                "rigid-iff-nondegenerate",
                CheckKind::Theorem,
                nondegenerate == rigid,
                format!("M_T non-degenerate: {nondegenerate}, boundary rigid: {rigid}"),
            ));
        }
    }
    if let Some(d) = &rigidity.dehn {
        checks.push(check(
            "dehn-decomposition",
            CheckKind::Theorem,
            d.passes,
            format!("flex dim {} (expected {}), residual {:e}", d.flex_dim, d.expected_dim, d.max_residual),
        ));
    }
    if let Some(ex) = &loaded.expected {
        expected_checks(ex, &census_out, &hessian_out, &rigidity, &mut checks);
    }

    let exit_code = exit_code(&checks);
    let runtime =
        config.timestamps.then(|| Runtime { started_unix_ms, elapsed_ms: started.elapsed().as_millis() });
    Ok(AnalysisReport {
        input: loaded.identity,
        tolerances: Tolerances::from(&config.hessian),
        validation,
        census: census_out,
        hessian: hessian_out,
        kernel: kernel_out,
        rigidity,
        checks,
        exit_code,
        runtime,
    })
}

fn expected_checks(
    ex: &Expected,
    c: &Option<Census>,
    h: &Option<HessianReport>,
    r: &RigidityReport,
    checks: &mut Vec<Check>,
) {
    let mut cmp = |name: &str, want: Option<String>, got: Option<String>| {
        if let (Some(w), Some(g)) = (want, got) {
            checks.push(check(name, CheckKind::Theorem, w == g, format!("expected {w}, got {g}")));
        }
    };
    cmp("expected-m", ex.m.map(|x| x.to_string()), c.as_ref().map(|c| c.m().to_string()));
    cmp("expected-k", ex.k.map(|x| x.to_string()), c.as_ref().map(|c| c.k().to_string()));
    cmp("expected-n", ex.n.map(|x| x.to_string()), c.as_ref().map(|c| c.n().to_string()));
    cmp("expected-signature", ex.signature.map(|s| s.to_string()), h.as_ref().map(|h| h.signature.to_string()));
    cmp("expected-rigid", ex.rigid.map(|x| x.to_string()), r.rigid.map(|x| x.to_string()));
    cmp("expected-flex-dim", ex.flex_dim.map(|x| x.to_string()), Some(r.kernel_dim.to_string()));
}

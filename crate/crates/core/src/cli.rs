//! Command-line orchestration and file output.
//!
//! Each subcommand writes a `manifest.json` (command, flags, package
//! version, tolerance table) plus its own JSON/CSV artifacts into the output
//! directory. All floating-point output is printed at 15 significant digits
//! with fixed row ordering, so identical flags and seeds reproduce
//! byte-identical files. Exit codes: 0 success, 2 usage or domain error,
//! 3 validation failure or numerical anomaly, 4 invalid distribution,
//! 5 I/O or format error.

use crate::charfun;
use crate::error::{Error, Result};
use crate::geometry;
use crate::mub;
use crate::opbasis::{self, OperatorBasis, SpectraSet};
use crate::povm;
use crate::sampler;
use crate::states::{
    bloch_from_density, density_from_bloch, random_state, BlochVector, DensityMatrix, StateFile,
    StateKind,
};
use crate::tol;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "unsharp",
    version,
    about = "MUB operator bases, joint-measurement POVMs, characteristic functions, \
             and classicality polytopes for prime-power qudits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BasisArgs {
    /// Hilbert-space dimension (prime power unless --load is given)
    n: u64,
    /// Use a built-in operator set instead of the MUB construction
    #[arg(long, value_parser = ["qutrit"])]
    builtin: Option<String>,
    /// Use the Gell-Mann negative control (one family of eight)
    #[arg(long)]
    gellmann: bool,
    /// Load an operator basis from a JSON file
    #[arg(long, value_name = "FILE")]
    load: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// State source: "mixed", "pure", or a path to a state JSON file
    #[arg(long, default_value = "mixed")]
    state: String,
    /// Seed for random states, scan grids, and sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an operator basis and run the validation report
    Basis {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Joint-measurability threshold, optionally with a PSD verdict at a
    /// requested unsharpness
    Certify {
        #[command(flatten)]
        basis: BasisArgs,
        /// Evaluate the global POVM at this unsharpness
        #[arg(long)]
        eta: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classicality polytope: faces, vertices, edges, insphere, centroids
    Geometry {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Joint outcome distribution of a state
    Dist {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Unsharpness parameter
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Characteristic-function grid with a coincidence scan
    Charfun {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Number of grid points
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte-Carlo sampling with goodness-of-fit statistics
    Sample {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Unsharpness parameter
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Number of shots
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Parses the argument list and runs one command, translating errors into
/// the documented exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::NotPrimePower(_)) {
                eprintln!(
                    "hint: no construction exists for this dimension; \
                     supply a candidate basis with --load FILE"
                );
            }
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPrimePower(_) | Error::EtaOutOfRange(_) => 2,
        Error::InvalidDistribution(_) => 4,
        Error::Io(_) | Error::Json(_) | Error::Format(_) => 5,
        _ => 3,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Basis { basis, out } => cmd_basis(&basis, &out),
        Command::Certify { basis, eta, out } => cmd_certify(&basis, eta, &out),
        Command::Geometry { basis, out } => cmd_geometry(&basis, &out),
        Command::Dist {
            basis,
            state,
            eta,
            out,
        } => cmd_dist(&basis, &state, eta, &out),
        Command::Charfun {
            basis,
            state,
            grid,
            out,
        } => cmd_charfun(&basis, &state, grid, &out),
        Command::Sample {
            basis,
            state,
            eta,
            shots,
            out,
        } => cmd_sample(&basis, &state, eta, shots, &out),
    }
}

/// Resolves the basis flags to an operator basis and a short label for the
/// manifest.
fn build_basis(args: &BasisArgs) -> Result<(OperatorBasis, String)> {
    if let Some(path) = &args.load {
        let text = fs::read_to_string(path)?;
        let basis = OperatorBasis::from_json(&text)?;
        if basis.n as u64 != args.n {
            return Err(Error::Format(format!(
                "loaded basis has n = {}, command line says {}",
                basis.n, args.n
            )));
        }
        return Ok((basis, format!("load:{}", path.display())));
    }
    if args.gellmann {
        if args.n != 3 {
            return Err(Error::Format("--gellmann applies to n = 3 only".into()));
        }
        return Ok((opbasis::gell_mann_basis(), "gellmann".into()));
    }
    if let Some(name) = &args.builtin {
        if args.n != 3 {
            return Err(Error::Format("--builtin qutrit applies to n = 3 only".into()));
        }
        return Ok((opbasis::qutrit_builtin(), format!("builtin:{name}")));
    }
    let mubs = mub::build(args.n)?;
    let n = args.n as usize;
    let basis = opbasis::from_mubs(&mubs, &SpectraSet::default_for(n))?;
    Ok((basis, format!("mub:{n}")))
}

/// Random preset or state file; the density matrix is absent when a Bloch
/// file describes an unphysical point.
fn resolve_state(
    n: usize,
    basis: &OperatorBasis,
    args: &StateArgs,
) -> Result<(Option<DensityMatrix>, BlochVector, String)> {
    match args.state.as_str() {
        "mixed" | "pure" => {
            let kind = if args.state == "pure" {
                StateKind::Pure
            } else {
                StateKind::Mixed
            };
            let rho = random_state(n, kind, args.seed);
            let theta = bloch_from_density(&rho, basis)?;
            let label = format!("random:{}:{}", args.state, args.seed);
            Ok((Some(rho), theta, label))
        }
        path => {
            let file = StateFile::from_json(&fs::read_to_string(path)?)?;
            let label = format!("file:{path}");
            match &file {
                StateFile::Density { .. } => {
                    let theta = file.bloch(basis)?;
                    let rho = match file {
                        StateFile::Density { mat } => DensityMatrix::new(mat)?,
                        StateFile::Bloch { .. } => unreachable!(),
                    };
                    Ok((Some(rho), theta, label))
                }
                StateFile::Bloch { theta } => {
                    let theta = BlochVector {
                        theta: theta.clone(),
                    };
                    let state = density_from_bloch(&theta, basis)?;
                    let rho = if state.physical {
                        Some(DensityMatrix::new(state.rho)?)
                    } else {
                        None
                    };
                    Ok((rho, theta, label))
                }
            }
        }
    }
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    config: BTreeMap<&'static str, String>,
    package: Package,
    tolerances: Tolerances,
}

#[derive(Serialize)]
struct Package {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct Tolerances {
    basis_gate: f64,
    mub_dev: f64,
    psd: f64,
    dist_valid: f64,
    completeness: f64,
    marginal: f64,
    bisection: f64,
    coincidence: f64,
    bochner: f64,
    diag_unitary: f64,
    diag_offdiag: f64,
    vertex_dedup: f64,
    rank: f64,
    membership: f64,
    face_active: f64,
    sample_clip: f64,
}

fn manifest(command: &'static str, config: BTreeMap<&'static str, String>) -> Manifest {
    Manifest {
        command,
        config,
        package: Package {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        tolerances: Tolerances {
            basis_gate: tol::BASIS_GATE,
            mub_dev: tol::MUB_DEV,
            psd: tol::PSD,
            dist_valid: tol::DIST_VALID,
            completeness: tol::COMPLETENESS,
            marginal: tol::MARGINAL,
            bisection: tol::BISECTION,
            coincidence: tol::COINCIDENCE,
            bochner: tol::BOCHNER,
            diag_unitary: tol::DIAG_UNITARY,
            diag_offdiag: tol::DIAG_OFFDIAG,
            vertex_dedup: tol::VERTEX_DEDUP,
            rank: tol::RANK,
            membership: tol::MEMBERSHIP,
            face_active: tol::FACE_ACTIVE,
            sample_clip: tol::SAMPLE_CLIP,
        },
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn fmt_f(x: f64) -> String {
    format!("{x:.14e}")
}

/// Outcome digits as a label; separators only when digits can exceed 9.
fn outcome_label(digits: &[usize], n: usize) -> String {
    if n <= 10 {
        digits.iter().map(|d| d.to_string()).collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

fn basis_config(args: &BasisArgs, label: &str) -> BTreeMap<&'static str, String> {
    let mut config = BTreeMap::new();
    config.insert("n", args.n.to_string());
    config.insert("basis", label.to_string());
    config
}

fn cmd_basis(args: &BasisArgs, out: &OutArgs) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let report = basis.validate()?;
    write_json(&out.out, "manifest.json", &manifest("basis", basis_config(args, &label)))?;
    write_text(&out.out, "basis.json", &basis.to_json()?)?;
    write_json(&out.out, "validation.json", &report)?;
    println!(
        "basis n={} ({label}): {} operators in {} families",
        basis.n,
        basis.ops.len(),
        basis.families.len()
    );
    println!(
        "validation: {} (worst deviation {:.3e})",
        if report.pass { "PASS" } else { "FAIL" },
        report.worst()
    );
    Ok(if report.pass { 0 } else { 3 })
}

#[derive(Serialize)]
struct CertifyArtifact {
    threshold: povm::CriticalEtaReport,
    requested: Option<RequestedEta>,
}

#[derive(Serialize)]
struct RequestedEta {
    eta: f64,
    min_eigenvalue: f64,
    psd: bool,
    jointly_measurable: bool,
}

fn cmd_certify(args: &BasisArgs, eta: Option<f64>, out: &OutArgs) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let threshold = povm::critical_eta(&basis)?;
    let mut anomaly = false;
    if let Some(bis) = threshold.bisection {
        if (bis - threshold.analytic).abs() > 1e-8 {
            anomaly = true;
        }
    }
    let requested = match eta {
        Some(eta) => {
            let g = povm::global_povm(&basis, eta)?;
            Some(RequestedEta {
                eta,
                min_eigenvalue: g.min_eigenvalue,
                psd: g.psd,
                jointly_measurable: g.psd,
            })
        }
        None => None,
    };
    let mut config = basis_config(args, &label);
    if let Some(e) = eta {
        config.insert("eta", fmt_f(e));
    }
    write_json(&out.out, "manifest.json", &manifest("certify", config))?;
    let artifact = CertifyArtifact {
        threshold,
        requested,
    };
    write_json(&out.out, "certify.json", &artifact)?;
    println!(
        "critical eta: analytic {:.10}{}",
        artifact.threshold.analytic,
        match artifact.threshold.bisection {
            Some(b) => format!(", bisection {b:.10}"),
            None => ", bisection skipped (tuple count)".into(),
        }
    );
    if let Some(r) = &artifact.requested {
        println!(
            "eta = {}: min eigenvalue {:.6e}, {}",
            r.eta,
            r.min_eigenvalue,
            if r.jointly_measurable {
                "jointly measurable"
            } else {
                "NOT jointly measurable"
            }
        );
    }
    if anomaly {
        eprintln!("anomaly: bisection disagrees with the analytic threshold");
        return Ok(3);
    }
    Ok(0)
}

#[derive(Serialize)]
struct GeometryArtifact {
    dimension: usize,
    faces: usize,
    insphere_radius: f64,
    mub_vertex_count: usize,
    enumerated_vertex_count: Option<usize>,
    /// Hausdorff-style one-sided distances between the enumerated and MUB
    /// vertex sets, when enumeration ran.
    containment_enumerated_to_mub: Option<f64>,
    containment_mub_to_enumerated: Option<f64>,
    edges: usize,
    centroids: geometry::CentroidReport,
}

fn cmd_geometry(args: &BasisArgs, out: &OutArgs) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let h = geometry::h_polytope(&basis)?;
    let mub_v = geometry::mub_vertices(&basis);
    let enumerable = h.dim <= 14 && h.faces() <= 128;
    let enumerated = if enumerable {
        Some(geometry::enumerate_vertices(&h)?)
    } else {
        None
    };
    let vertex_set = enumerated.as_ref().unwrap_or(&mub_v);
    let edges = geometry::edge_adjacency(vertex_set, &h);
    let centroids = geometry::centroid_tangency(&h, vertex_set);
    let artifact = GeometryArtifact {
        dimension: h.dim,
        faces: h.faces(),
        insphere_radius: geometry::insphere_radius(&h),
        mub_vertex_count: mub_v.vertices.len(),
        enumerated_vertex_count: enumerated.as_ref().map(|v| v.vertices.len()),
        containment_enumerated_to_mub: enumerated
            .as_ref()
            .map(|v| geometry::containment_distance(v, &mub_v)),
        containment_mub_to_enumerated: enumerated
            .as_ref()
            .map(|v| geometry::containment_distance(&mub_v, v)),
        edges: edges.edges,
        centroids,
    };
    write_json(&out.out, "manifest.json", &manifest("geometry", basis_config(args, &label)))?;
    write_json(&out.out, "geometry.json", &artifact)?;
    let mut csv = String::new();
    let cols: Vec<String> = (0..h.dim).map(|k| format!("c{k}")).collect();
    writeln!(csv, "{}", cols.join(",")).unwrap();
    for v in &vertex_set.vertices {
        let row: Vec<String> = v.iter().map(|&x| fmt_f(x)).collect();
        writeln!(csv, "{}", row.join(",")).unwrap();
    }
    write_text(&out.out, "vertices.csv", &csv)?;
    println!(
        "faces {}, vertices {} ({}), edges {}, insphere {:.10}",
        artifact.faces,
        vertex_set.vertices.len(),
        if enumerable { "enumerated" } else { "MUB set" },
        artifact.edges,
        artifact.insphere_radius
    );
    println!(
        "centroids: norm dev {:.3e}, tangency dev {:.3e}, faces without vertices {}",
        artifact.centroids.max_norm_dev,
        artifact.centroids.max_tangency_dev,
        artifact.centroids.faces_without_vertices
    );
    Ok(0)
}

#[derive(Serialize)]
struct DistArtifact {
    eta: f64,
    state: String,
    entries: usize,
    sum: f64,
    min: f64,
    valid: bool,
}

fn cmd_dist(args: &BasisArgs, state_args: &StateArgs, eta: f64, out: &OutArgs) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let (_, theta, state_label) = resolve_state(basis.n, &basis, state_args)?;
    let p = povm::joint_distribution(&theta, &basis, eta)?;
    let mut config = basis_config(args, &label);
    config.insert("eta", fmt_f(eta));
    config.insert("state", state_label.clone());
    config.insert("seed", state_args.seed.to_string());
    write_json(&out.out, "manifest.json", &manifest("dist", config))?;
    write_json(
        &out.out,
        "dist.json",
        &DistArtifact {
            eta,
            state: state_label,
            entries: p.p.len(),
            sum: p.sum,
            min: p.min,
            valid: p.valid,
        },
    )?;
    let nfam = basis.families.len();
    let mut csv = String::from("outcome,p\n");
    for (index, &prob) in p.p.iter().enumerate() {
        let digits = povm::decode_tuple(index, basis.n, nfam);
        writeln!(csv, "{},{}", outcome_label(&digits, basis.n), fmt_f(prob)).unwrap();
    }
    write_text(&out.out, "dist.csv", &csv)?;
    println!(
        "{} outcomes at eta = {eta}: sum {:.12}, min {:.6e}, {}",
        p.p.len(),
        p.sum,
        p.min,
        if p.valid { "valid" } else { "signed (outside the classical region)" }
    );
    Ok(0)
}

fn cmd_charfun(
    args: &BasisArgs,
    state_args: &StateArgs,
    grid: usize,
    out: &OutArgs,
) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let (rho, theta, state_label) = resolve_state(basis.n, &basis, state_args)?;
    let rho = rho.ok_or_else(|| {
        Error::InvalidState("characteristic functions need a physical state".into())
    })?;
    if grid == 0 {
        return Err(Error::Format("--grid must be positive".into()));
    }
    let points = charfun::uniform_t_grid(&basis, grid, state_args.seed);
    let p = povm::joint_distribution(&theta, &basis, 1.0)?;
    let mut csv = String::new();
    let cols: Vec<String> = (0..basis.ops.len()).map(|k| format!("t{k}")).collect();
    writeln!(csv, "{},re_quantum,im_quantum,re_classical,im_classical,deviation", cols.join(","))
        .unwrap();
    let mut max_dev = 0.0f64;
    for t in &points {
        let quantum = charfun::mh_charfun(&rho, &basis, t)?;
        let classical = charfun::classical_charfun(&p, &basis.eigentable, t)?;
        let dev = (quantum - classical).norm();
        max_dev = max_dev.max(dev);
        let mut row: Vec<String> = t.flat().iter().map(|&x| fmt_f(x)).collect();
        row.push(fmt_f(quantum.re));
        row.push(fmt_f(quantum.im));
        row.push(fmt_f(classical.re));
        row.push(fmt_f(classical.im));
        row.push(fmt_f(dev));
        writeln!(csv, "{}", row.join(",")).unwrap();
    }
    let report = charfun::coincidence_scan(&rho, &basis, &points)?;
    let mut config = basis_config(args, &label);
    config.insert("grid", grid.to_string());
    config.insert("state", state_label);
    config.insert("seed", state_args.seed.to_string());
    write_json(&out.out, "manifest.json", &manifest("charfun", config))?;
    write_text(&out.out, "charfun.csv", &csv)?;
    write_json(&out.out, "coincidence.json", &report)?;
    debug_assert!((max_dev - report.max_deviation).abs() < 1e-15);
    println!(
        "coincidence over {grid} points: max deviation {:.6e} ({})",
        report.max_deviation,
        if report.coincide {
            "classical and quantum coincide"
        } else {
            "measurable gap"
        }
    );
    Ok(0)
}

#[derive(Serialize)]
struct SampleArtifact {
    eta: f64,
    shots: u64,
    seed: u64,
    gof: sampler::GofReport,
}

fn cmd_sample(
    args: &BasisArgs,
    state_args: &StateArgs,
    eta: f64,
    shots: u64,
    out: &OutArgs,
) -> Result<i32> {
    let (basis, label) = build_basis(args)?;
    let (_, theta, state_label) = resolve_state(basis.n, &basis, state_args)?;
    let p = povm::joint_distribution(&theta, &basis, eta)?;
    let counts = sampler::sample(&p, shots, state_args.seed)?;
    let gof = sampler::goodness_of_fit(&counts, &p)?;
    let mut config = basis_config(args, &label);
    config.insert("eta", fmt_f(eta));
    config.insert("state", state_label);
    config.insert("seed", state_args.seed.to_string());
    config.insert("shots", shots.to_string());
    write_json(&out.out, "manifest.json", &manifest("sample", config))?;
    let freq = counts.frequencies();
    let nfam = basis.families.len();
    let mut csv = String::from("outcome,p,frequency,deviation\n");
    for (index, (&prob, &f)) in p.p.iter().zip(&freq).enumerate() {
        let digits = povm::decode_tuple(index, basis.n, nfam);
        writeln!(
            csv,
            "{},{},{},{}",
            outcome_label(&digits, basis.n),
            fmt_f(prob),
            fmt_f(f),
            fmt_f(f - prob)
        )
        .unwrap();
    }
    write_text(&out.out, "sample.csv", &csv)?;
    write_json(
        &out.out,
        "gof.json",
        &SampleArtifact {
            eta,
            shots,
            seed: state_args.seed,
            gof: gof.clone(),
        },
    )?;
    println!(
        "{shots} shots: chi2 {:.4} (dof {}, 99.9% quantile {:.4}, {}), tv {:.6}",
        gof.chi2,
        gof.dof,
        gof.quantile_999,
        if gof.below_quantile { "ok" } else { "EXCEEDED" },
        gof.tv
    );
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(args.iter().map(|s| s.to_string()))
    }

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("unsharp-cli-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn basis_qutrit_builtin_passes() {
        let out = tmp("basis");
        let code = run_args(&[
            "unsharp", "basis", "3", "--builtin", "qutrit",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.join("basis.json").exists());
        assert!(out.join("validation.json").exists());
        assert!(out.join("manifest.json").exists());
    }

    #[test]
    fn basis_six_exits_two() {
        let out = tmp("basis6");
        let code = run_args(&["unsharp", "basis", "6", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 2);
    }

    #[test]
    fn gellmann_validation_fails_with_three() {
        let out = tmp("gm");
        let code = run_args(&[
            "unsharp", "basis", "3", "--gellmann",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 3);
    }

    #[test]
    fn certify_qutrit_reports_quarter() {
        let out = tmp("certify");
        let code = run_args(&[
            "unsharp", "certify", "3", "--builtin", "qutrit",
            "--eta", "0.4", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = fs::read_to_string(out.join("certify.json")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let analytic = v["threshold"]["analytic"].as_f64().unwrap();
        assert!((analytic - 0.25).abs() < 1e-10);
        assert_eq!(v["requested"]["jointly_measurable"], serde_json::json!(false));
    }

    #[test]
    fn certify_rejects_eta_out_of_range() {
        let out = tmp("certify-bad");
        let code = run_args(&[
            "unsharp", "certify", "2", "--eta", "1.5",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn geometry_qubit_summary() {
        let out = tmp("geom");
        let code = run_args(&["unsharp", "geometry", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("geometry.json")).unwrap()).unwrap();
        assert_eq!(v["faces"], serde_json::json!(8));
        assert_eq!(v["enumerated_vertex_count"], serde_json::json!(6));
        assert_eq!(v["edges"], serde_json::json!(12));
        let csv = fs::read_to_string(out.join("vertices.csv")).unwrap();
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn dist_uniform_from_bloch_file() {
        let out = tmp("dist");
        fs::create_dir_all(&out).unwrap();
        let state_path = out.join("state.json");
        fs::write(
            &state_path,
            r#"{"kind":"bloch","theta":[0,0,0,0,0,0,0,0]}"#,
        )
        .unwrap();
        let code = run_args(&[
            "unsharp", "dist", "3", "--builtin", "qutrit",
            "--state", state_path.to_str().unwrap(),
            "--eta", "0.2", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let csv = fs::read_to_string(out.join("dist.csv")).unwrap();
        assert_eq!(csv.lines().count(), 82);
        assert!(csv.lines().nth(1).unwrap().starts_with("0000,"));
    }

    #[test]
    fn sample_outside_polytope_exits_four() {
        let out = tmp("sample-bad");
        fs::create_dir_all(&out).unwrap();
        let state_path = out.join("state.json");
        // A pure qubit state outside the octahedron.
        let c = 1.0 / 3.0f64.sqrt();
        fs::write(
            &state_path,
            format!(r#"{{"kind":"bloch","theta":[{c},{c},{c}]}}"#),
        )
        .unwrap();
        let code = run_args(&[
            "unsharp", "sample", "2",
            "--state", state_path.to_str().unwrap(),
            "--shots", "10", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 4);
    }

    #[test]
    fn charfun_qubit_coincides() {
        let out = tmp("charfun");
        let code = run_args(&[
            "unsharp", "charfun", "2", "--state", "pure", "--seed", "7",
            "--grid", "20", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("coincidence.json")).unwrap())
                .unwrap();
        assert_eq!(v["coincide"], serde_json::json!(true));
    }

    #[test]
    fn reruns_are_byte_identical() {
        let out_a = tmp("det-a");
        let out_b = tmp("det-b");
        for out in [&out_a, &out_b] {
            let code = run_args(&[
                "unsharp", "sample", "3", "--builtin", "qutrit",
                "--state", "mixed", "--seed", "5", "--eta", "0.3",
                "--shots", "20000", "--out", out.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        for name in ["manifest.json", "sample.csv", "gof.json"] {
            let a = fs::read(out_a.join(name)).unwrap();
            let b = fs::read(out_b.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical runs");
        }
    }
}

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use tricert::census::{enumerate, CensusFilter, MAX_CENSUS_TETS};
use tricert::faces::{is_face_generic, is_face_pair_reduced};
use tricert::qmatch::{build_q_system, clusters_of_three, one_quad_solutions, two_quad_solutions};
use tricert::report::{analyze, AnalysisReport, CheckStatus};
use tricert::surface_detect::{check_cluster_theorem, PatternCatalog};
use tricert::{Format, Skeleton, Triangulation};

#[derive(Parser)]
#[command(
    name = "tricert",
    version,
    about = "Combinatorial certificates for closed 3-manifold triangulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Predicate {
    FaceGeneric,
    FacePairReduced,
    /// All five hypotheses of the cluster theorem.
    ClusterHypotheses,
    ClusterFree,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report for each input (`-` reads standard input).
    Analyze {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Exit 0 if the predicate holds, 1 if not, 2 on invalid input.
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        predicate: Predicate,
    },
    /// Q-matching equations and their 1-quad and 2-quad type solutions.
    Qmatch {
        path: PathBuf,
        /// Print the integer matrix, one row per edge class.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Clusters of three 2-quad type solutions.
    Cluster {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Stream census triangulations as table records separated by blank lines.
    Census {
        #[arg(long, default_value_t = 2)]
        max_tets: usize,
        /// Keep vertex links that are not spheres.
        #[arg(long)]
        any_links: bool,
        /// Keep non-orientable gluings.
        #[arg(long)]
        non_orientable: bool,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct InvalidInput(String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

struct Input {
    name: String,
    text: String,
}

fn read_input(path: &Path) -> Result<Input> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| InvalidInput(format!("{}: {e}", path.display())))?;
    }
    Ok(Input {
        name: path.display().to_string(),
        text,
    })
}

fn load(input: &Input) -> Result<Skeleton> {
    let invalid = |e: tricert::Error| InvalidInput(format!("{}: {e}", input.name));
    if input.text.trim().is_empty() {
        return Err(InvalidInput(format!("{}: empty input", input.name)).into());
    }
    let tri = Triangulation::parse(&input.text, Format::sniff(&input.text)).map_err(invalid)?;
    Ok(Skeleton::build(&tri).map_err(invalid)?)
}

fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tricert: {e:#}");
            if e.downcast_ref::<InvalidInput>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze { paths, format } => {
            let catalog = PatternCatalog::builtin();
            let inputs: Vec<Result<Input>> = paths.iter().map(|p| read_input(p)).collect();
            let results: Vec<Result<AnalysisReport>> = inputs
                .into_par_iter()
                .map(|input| {
                    let input = input?;
                    let s = load(&input)?;
                    Ok(analyze(&s, &catalog, digest(&input.text)))
                })
                .collect();
            let mut code = 0;
            for (path, result) in paths.iter().zip(results) {
                match result {
                    Ok(report) => {
                        match format {
                            OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
                            OutputFormat::Text => {
                                write!(out, "{}", render_report(&path.display().to_string(), &report))?
                            }
                        }
                        if !report.consistent() {
                            eprintln!("tricert: {}: internal consistency check failed", path.display());
                            code = code.max(1);
                        }
                    }
                    Err(e) => {
                        eprintln!("tricert: {e:#}");
                        code = 2;
                    }
                }
            }
            Ok(code)
        }
        Command::Check { path, predicate } => {
            let s = load(&read_input(&path)?)?;
            let (holds, witnesses) = check(&s, predicate)?;
            for w in &witnesses {
                writeln!(out, "{w}")?;
            }
            writeln!(out, "{}", if holds { "holds" } else { "fails" })?;
            Ok(if holds { 0 } else { 1 })
        }
        Command::Qmatch { path, dump_matrix } => {
            let s = load(&read_input(&path)?)?;
            let Ok(q) = build_q_system(&s) else {
                eprintln!("tricert: {}: triangulation is not orientable", path.display());
                return Ok(1);
            };
            writeln!(out, "# rows {} cols {}", q.rows(), q.cols())?;
            let signs: Vec<String> = q.tet_signs.iter().map(|x| x.to_string()).collect();
            writeln!(out, "tet_signs {}", signs.join(" "))?;
            if dump_matrix {
                for (e, row) in q.matrix.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "row {e} {}", cells.join(" "))?;
                }
            }
            for c in one_quad_solutions(&q) {
                writeln!(out, "one_quad {c}")?;
            }
            for x in two_quad_solutions(&q) {
                writeln!(out, "two_quad {} {} {}", x.q, x.p, x.t)?;
            }
            Ok(0)
        }
        Command::Cluster { path, format } => {
            let s = load(&read_input(&path)?)?;
            let Ok(q) = build_q_system(&s) else {
                eprintln!("tricert: {}: triangulation is not orientable", path.display());
                return Ok(1);
            };
            let clusters = clusters_of_three(&q);
            match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&clusters)?)?,
                OutputFormat::Text => {
                    for c in &clusters {
                        let flag = if c.coincident { " (witnesses coincide)" } else { "" };
                        writeln!(out, "cluster at tetrahedron {}{flag}", c.tet)?;
                        for w in &c.witnesses {
                            writeln!(out, "  {}", serde_json::to_string(w)?)?;
                        }
                    }
                    writeln!(out, "{} clusters", clusters.len())?;
                }
            }
            Ok(0)
        }
        Command::Census {
            max_tets,
            any_links,
            non_orientable,
        } => {
            if max_tets > MAX_CENSUS_TETS {
                bail!(InvalidInput(format!(
                    "census limited to at most {MAX_CENSUS_TETS} tetrahedra"
                )));
            }
            let filter = CensusFilter {
                require_closed: true,
                require_sphere_links: !any_links,
                require_orientable: !non_orientable,
                max_tets,
            };
            let members = enumerate(&filter)?;
            for (i, t) in members.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", t.to_table())?;
            }
            Ok(0)
        }
    }
}

fn check(s: &Skeleton, predicate: Predicate) -> Result<(bool, Vec<String>)> {
    let detail = |w: Vec<tricert::faces::Violation>| w.into_iter().map(|v| v.detail).collect();
    Ok(match predicate {
        Predicate::FaceGeneric => {
            let r = is_face_generic(s);
            (r.value, detail(r.witnesses))
        }
        Predicate::FacePairReduced => {
            let r = is_face_pair_reduced(s);
            (r.value, detail(r.witnesses))
        }
        Predicate::ClusterHypotheses => {
            let r = check_cluster_theorem(s, &PatternCatalog::builtin()).map_err(|e| InvalidInput(e.to_string()))?;
            let mut w = Vec::new();
            for (name, h) in [
                ("h1", &r.h1),
                ("h2", &r.h2),
                ("h3", &r.h3),
                ("h4", &r.h4),
                ("h5", &r.h5),
            ] {
                w.extend(h.witnesses.iter().map(|x| format!("{name}: {x}")));
            }
            (r.all_pass(), w)
        }
        Predicate::ClusterFree => {
            let q = build_q_system(s).map_err(|e| InvalidInput(e.to_string()))?;
            let clusters = clusters_of_three(&q);
            let w = clusters
                .iter()
                .map(|c| format!("cluster at tetrahedron {}", c.tet))
                .collect();
            (clusters.is_empty(), w)
        }
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_report(name: &str, r: &AnalysisReport) -> String {
    let mut s = String::new();
    let c = &r.counts;
    let _ = writeln!(s, "== {name}");
    let _ = writeln!(s, "sha256 {}", r.digest);
    let _ = writeln!(
        s,
        "T={} F={} E={} V={}  edge degrees {:?}",
        c.tetrahedra, c.faces, c.edges, c.vertices, c.edge_degrees
    );
    let _ = writeln!(s, "orientable: {}", yes(r.orientable));
    for l in &r.vertex_links {
        let _ = writeln!(
            s,
            "vertex {} link: {} (chi {})",
            l.vertex, l.surface, l.euler_characteristic
        );
    }
    let kinds: Vec<String> = r.faces.iter().map(|f| format!("{}:{}", f.face, f.kind)).collect();
    let _ = writeln!(s, "faces: {}", kinds.join(" "));
    let _ = writeln!(s, "face-generic: {}", yes(r.face_generic.value));
    for w in &r.face_generic.witnesses {
        let _ = writeln!(s, "  {w}");
    }
    let _ = writeln!(s, "face-pair-reduced: {}", yes(r.face_pair_reduced.value));
    for w in &r.face_pair_reduced.witnesses {
        let _ = writeln!(s, "  {w}");
    }
    if !r.small_manifold_flags.is_empty() {
        let _ = writeln!(s, "small manifold flags: {}", r.small_manifold_flags.join(", "));
    }
    for t in &r.tetrahedra {
        let refined = t.refined.as_deref().map(|x| format!(" ({x})")).unwrap_or_default();
        let _ = writeln!(s, "tetrahedron {}: {}{refined}", t.tet, t.label);
    }
    if let Some(q) = &r.q_solutions {
        let _ = writeln!(s, "1-quad solutions: {}", q.one_quad.len());
        let _ = writeln!(s, "2-quad solutions: {}", q.two_quad.len());
        let tets: Vec<String> = q.clusters.iter().map(|c| c.tet.to_string()).collect();
        let _ = writeln!(
            s,
            "clusters: {}",
            if tets.is_empty() {
                "none".to_string()
            } else {
                tets.join(" ")
            }
        );
    }
    if let Some(t) = &r.cluster_theorem {
        let flags: Vec<String> = [
            ("h1", &t.h1),
            ("h2", &t.h2),
            ("h3", &t.h3),
            ("h4", &t.h4),
            ("h5", &t.h5),
        ]
        .iter()
        .map(|(n, h)| format!("{n}={}", if h.pass { "pass" } else { "fail" }))
        .collect();
        let _ = writeln!(s, "cluster theorem: {}; {}", flags.join(" "), t.conclusion);
    }
    let _ = writeln!(s, "H1: {}", r.h1.group);
    for check in &r.consistency {
        let status = match check.status {
            CheckStatus::Pass => "ok",
            CheckStatus::Fail => "FAILED",
            CheckStatus::Skipped => "skipped",
        };
        let _ = writeln!(s, "check {}: {status} ({})", check.name, check.detail);
    }
    s
}

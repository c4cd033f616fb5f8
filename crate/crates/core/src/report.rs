//! The full analysis of one triangulation as a flat, serializable record,
//! with internal cross-checks between independent computations.

use serde::{Deserialize, Serialize};

use crate::faces::{
    face_types, is_face_generic, is_face_pair_reduced, small_manifold_flags, FaceType, PredicateReport,
};
use crate::homology::{boundary_matrices, h1, mod2_betti};
use crate::qmatch::{
    build_q_system, clusters_of_three, fg_quads, haken_projection_check, one_quad_solutions, two_quad_solutions,
    ClusterWitness,
};
use crate::skeleton::Skeleton;
use crate::squares::{all_squares, tetra_type, GENERIC_LABELS};
use crate::surface_detect::{check_cluster_theorem, HypothesisCheck, PatternCatalog};

pub const SCHEMA_VERSION: u32 = 1;

/// Above this many tetrahedra the Haken cross-check is skipped; its kernel
/// is computed over 7T rational columns.
pub const HAKEN_CHECK_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub digest: String,
    pub counts: Counts,
    pub orientable: bool,
    pub vertex_links: Vec<LinkRow>,
    pub faces: Vec<FaceRow>,
    pub face_generic: PredicateRow,
    pub face_pair_reduced: PredicateRow,
    pub small_manifold_flags: Vec<String>,
    pub squares: Vec<SquareRow>,
    pub tetrahedra: Vec<TetraRow>,
    /// Absent for non-orientable input.
    pub q_solutions: Option<QSolutions>,
    pub cluster_theorem: Option<TheoremRow>,
    pub h1: H1Row,
    pub consistency: Vec<ConsistencyCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tetrahedra: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    /// Sorted edge degrees.
    pub edge_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRow {
    pub vertex: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRow {
    pub face: usize,
    pub kind: String,
    pub core_edge: Option<usize>,
    pub boundary_edge: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateRow {
    pub value: bool,
    pub witnesses: Vec<String>,
}

impl From<PredicateReport> for PredicateRow {
    fn from(p: PredicateReport) -> Self {
        PredicateRow {
            value: p.value,
            witnesses: p.witnesses.into_iter().map(|w| w.detail).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRow {
    pub tet: usize,
    pub quad: usize,
    pub partition_type: String,
    pub topological_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TetraRow {
    pub tet: usize,
    pub partition: String,
    pub label: String,
    pub refined: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoQuadRow {
    pub q: String,
    pub p: String,
    /// Exact rational `t` with `x(q) = 1, x(p) = t`.
    pub t: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub tet: usize,
    /// One witness per quad of the tetrahedron, as `quad` or `quad+partner*t`.
    pub witnesses: Vec<String>,
    pub coincident: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSolutions {
    pub one_quad: Vec<String>,
    pub two_quad: Vec<TwoQuadRow>,
    pub clusters: Vec<ClusterRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl From<HypothesisCheck> for HypothesisRow {
    fn from(h: HypothesisCheck) -> Self {
        HypothesisRow {
            pass: h.pass,
            witnesses: h.witnesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub h1: HypothesisRow,
    pub h2: HypothesisRow,
    pub h3: HypothesisRow,
    pub h4: HypothesisRow,
    pub h5: HypothesisRow,
    pub applicable: bool,
    pub certifies_cluster_free: bool,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Row {
    pub rank: usize,
    pub torsion: Vec<u64>,
    pub group: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl ConsistencyCheck {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        ConsistencyCheck {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        ConsistencyCheck {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }
}

impl AnalysisReport {
    pub fn consistent(&self) -> bool {
        self.consistency.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

fn witness_text(w: &ClusterWitness) -> String {
    match w {
        ClusterWitness::OneQuad { quad } => quad.to_string(),
        ClusterWitness::TwoQuad { quad, partner, t } => format!("{quad}+{partner}*{t}"),
    }
}

/// Runs every analysis on a closed triangulation. `digest` identifies the
/// input text and is copied into the report.
pub fn analyze(s: &Skeleton, catalog: &PatternCatalog, digest: String) -> AnalysisReport {
    let mut edge_degrees = s.edge_degrees();
    edge_degrees.sort_unstable();
    let counts = Counts {
        tetrahedra: s.tet_count(),
        faces: s.face_classes().len(),
        edges: s.edge_classes().len(),
        vertices: s.vertex_classes().len(),
        edge_degrees,
    };
    let vertex_links = s
        .vertex_links()
        .iter()
        .enumerate()
        .map(|(vertex, l)| LinkRow {
            vertex,
            euler_characteristic: l.euler_characteristic,
            orientable: l.orientable,
            surface: l.name(),
        })
        .collect();
    let faces = face_types(s)
        .into_iter()
        .enumerate()
        .map(|(face, ty)| {
            let (core_edge, boundary_edge) = match ty {
                FaceType::Mobius {
                    core_edge,
                    boundary_edge,
                } => (Some(core_edge), Some(boundary_edge)),
                _ => (None, None),
            };
            FaceRow {
                face,
                kind: ty.name().to_string(),
                core_edge,
                boundary_edge,
            }
        })
        .collect();
    let generic = is_face_generic(s);
    let reduced = is_face_pair_reduced(s);
    let squares: Vec<SquareRow> = all_squares(s)
        .iter()
        .map(|sq| SquareRow {
            tet: sq.tet,
            quad: sq.quad,
            partition_type: sq.partition_type.letter().to_string(),
            topological_type: format!("{:?}", sq.topological_type),
        })
        .collect();
    let tetrahedra: Vec<TetraRow> = (0..s.tet_count())
        .map(|t| {
            let ty = tetra_type(s, t);
            TetraRow {
                tet: t,
                partition: ty.partition,
                label: ty.label,
                refined: ty.refined.map(|r| r.name().to_string()),
            }
        })
        .collect();
    let group = h1(s);
    let h1_row = H1Row {
        rank: group.rank,
        torsion: group.torsion.clone(),
        group: group.to_string(),
    };

    let mut consistency = Vec::new();
    let (d2, d1) = boundary_matrices(s);
    let chain_ok = d2
        .iter()
        .all(|row| (0..counts.vertices).all(|v| row.iter().zip(&d1).map(|(a, r)| a * r[v]).sum::<i64>() == 0));
    consistency.push(ConsistencyCheck::new("chain-complex", chain_ok, "d1 after d2 vanishes"));
    if generic.value {
        let bad: Vec<String> = tetrahedra
            .iter()
            .filter(|t| !GENERIC_LABELS.contains(&t.label.as_str()))
            .map(|t| t.tet.to_string())
            .collect();
        consistency.push(ConsistencyCheck::new(
            "tetra-types",
            bad.is_empty(),
            if bad.is_empty() {
                "all labels generic".to_string()
            } else {
                format!("tetrahedra {} outside the list", bad.join(","))
            },
        ));
    } else {
        consistency.push(ConsistencyCheck::skipped("tetra-types", "not face-generic"));
    }

    let mut q_solutions = None;
    let mut cluster_theorem = None;
    match build_q_system(s) {
        Ok(q) => {
            let zero = one_quad_solutions(&q);
            let fg = fg_quads(s);
            consistency.push(ConsistencyCheck::new(
                "zero-columns",
                zero == fg,
                format!("{} zero columns, {} F/G squares", zero.len(), fg.len()),
            ));
            let tetrahedral = (0..s.tet_count()).all(|t| {
                (0..q.rows()).all(|r| q.matrix[r][3 * t] + q.matrix[r][3 * t + 1] + q.matrix[r][3 * t + 2] == 0)
            });
            consistency.push(ConsistencyCheck::new(
                "tetrahedral-solution",
                tetrahedral,
                "column triples sum to zero",
            ));
            if s.tet_count() <= HAKEN_CHECK_LIMIT {
                let res = haken_projection_check(s, &q);
                let detail = match res {
                    Ok(n) => format!("{n} kernel vectors project to solutions"),
                    Err(i) => format!("kernel vector {i} projects outside the solution space"),
                };
                consistency.push(ConsistencyCheck::new("haken-projection", res.is_ok(), detail));
            } else {
                consistency.push(ConsistencyCheck::skipped("haken-projection", "too many tetrahedra"));
            }
            let clusters = clusters_of_three(&q);
            let two = two_quad_solutions(&q);
            q_solutions = Some(QSolutions {
                one_quad: zero.iter().map(ToString::to_string).collect(),
                two_quad: two
                    .iter()
                    .map(|x| TwoQuadRow {
                        q: x.q.to_string(),
                        p: x.p.to_string(),
                        t: x.t.to_string(),
                    })
                    .collect(),
                clusters: clusters
                    .iter()
                    .map(|c| ClusterRow {
                        tet: c.tet,
                        witnesses: c.witnesses.iter().map(witness_text).collect(),
                        coincident: c.coincident,
                    })
                    .collect(),
            });
            let r = check_cluster_theorem(s, catalog).expect("orientable");
            let certified = r.certifies_cluster_free();
            consistency.push(ConsistencyCheck::new(
                "cluster-theorem",
                !certified || clusters.is_empty(),
                if certified {
                    format!("hypotheses hold; {} clusters found", clusters.len())
                } else {
                    "no certificate claimed".to_string()
                },
            ));
            cluster_theorem = Some(TheoremRow {
                h1: r.h1.into(),
                h2: r.h2.into(),
                h3: r.h3.into(),
                h4: r.h4.into(),
                h5: r.h5.into(),
                applicable: r.applicable,
                certifies_cluster_free: certified,
                conclusion: r.conclusion,
            });
        }
        Err(_) => {
            consistency.push(ConsistencyCheck::skipped("zero-columns", "not orientable"));
        }
    }
    let spheres = s.vertex_links().iter().all(|l| l.is_sphere());
    if s.is_orientable() && spheres {
        let (b1, b2) = mod2_betti(s);
        consistency.push(ConsistencyCheck::new(
            "mod2-duality",
            b1 == b2,
            format!("b1 = {b1}, b2 = {b2} over Z/2"),
        ));
    }

    AnalysisReport {
        schema_version: SCHEMA_VERSION,
        digest,
        counts,
        orientable: s.is_orientable(),
        vertex_links,
        faces,
        face_generic: generic.into(),
        face_pair_reduced: reduced.into(),
        small_manifold_flags: small_manifold_flags(s).iter().map(|f| format!("{f:?}")).collect(),
        squares,
        tetrahedra,
        q_solutions,
        cluster_theorem,
        h1: h1_row,
        consistency,
    }
}

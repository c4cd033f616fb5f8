//! Face types and the two face-based predicates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::skeleton::Skeleton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum FaceType {
    Triangle,
    Cone,
    Mobius { core_edge: usize, boundary_edge: usize },
    ThreeFold,
    Dunce,
}

impl FaceType {
    pub fn name(&self) -> &'static str {
        match self {
            FaceType::Triangle => "Triangle",
            FaceType::Cone => "Cone",
            FaceType::Mobius { .. } => "Mobius",
            FaceType::ThreeFold => "ThreeFold",
            FaceType::Dunce => "Dunce",
        }
    }

    pub fn is_mobius(&self) -> bool {
        matches!(self, FaceType::Mobius { .. })
    }
}

/// Classifies face class `fc` from the edge identifications along its
/// boundary. Vertex identifications are ignored.
pub fn classify_face(s: &Skeleton, fc: usize) -> FaceType {
    let (t, f) = s.face_classes()[fc][0];
    classify_sides(s.face_sides(t, f))
}

/// Classification from the three boundary sides `(class, forward)` listed
/// in cyclic order.
pub fn classify_sides(sides: [(usize, bool); 3]) -> FaceType {
    let [a, b, c] = sides;
    if a.0 == b.0 && b.0 == c.0 {
        // head-to-tail all the way round, or one side reversed
        return if a.1 == b.1 && b.1 == c.1 {
            FaceType::ThreeFold
        } else {
            FaceType::Dunce
        };
    }
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        if x.0 == y.0 {
            return if x.1 == y.1 {
                FaceType::Mobius {
                    core_edge: x.0,
                    boundary_edge: z.0,
                }
            } else {
                FaceType::Cone
            };
        }
    }
    FaceType::Triangle
}

pub fn face_types(s: &Skeleton) -> Vec<FaceType> {
    (0..s.face_classes().len()).map(|fc| classify_face(s, fc)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub kind: String,
    pub faces: Vec<usize>,
    pub tets: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub value: bool,
    pub witnesses: Vec<Violation>,
}

impl PredicateReport {
    fn from_witnesses(witnesses: Vec<Violation>) -> Self {
        PredicateReport {
            value: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// Number of Möbius faces of each tetrahedron (faces glued to each other
/// count twice).
pub fn mobius_counts(s: &Skeleton, types: &[FaceType]) -> Vec<usize> {
    (0..s.tet_count())
        .map(|t| (0..4).filter(|&f| types[s.face_class(t, f)].is_mobius()).count())
        .collect()
}

pub fn is_face_generic(s: &Skeleton) -> PredicateReport {
    let types = face_types(s);
    let mut w = Vec::new();
    for (fc, ty) in types.iter().enumerate() {
        if !matches!(ty, FaceType::Triangle | FaceType::Mobius { .. }) {
            w.push(Violation {
                kind: format!("face-{}", ty.name().to_lowercase()),
                faces: vec![fc],
                tets: Vec::new(),
                detail: format!("face {fc} is a {} face", ty.name()),
            });
        }
    }
    for (t, &m) in mobius_counts(s, &types).iter().enumerate() {
        if m > 2 {
            w.push(Violation {
                kind: "too-many-mobius".into(),
                faces: Vec::new(),
                tets: vec![t],
                detail: format!("tetrahedron {t} has {m} Mobius faces"),
            });
        }
    }
    PredicateReport::from_witnesses(w)
}

/// One edge leaving a corner: its class and whether leaving the corner runs
/// along the class direction.
pub type Germ = (usize, bool);

/// The three corners of a face class, each as the unordered pair of edge
/// germs leaving it (smaller germ first). Corner `i` sits at local vertex
/// `i` of the representative face.
pub fn corner_germs(s: &Skeleton, fc: usize) -> [(Germ, Germ); 3] {
    let (t, f) = s.face_classes()[fc][0];
    let sides = s.face_sides(t, f);
    let mut out = [((0, false), (0, false)); 3];
    for i in 0..3 {
        let out_edge = sides[i];
        let prev = sides[(i + 2) % 3];
        let in_edge = (prev.0, !prev.1);
        out[i] = if out_edge <= in_edge {
            (out_edge, in_edge)
        } else {
            (in_edge, out_edge)
        };
    }
    out
}

/// Face-pair-reduced test. Every way of folding a two-triangle disc onto two
/// distinct face classes sharing a corner must put both interior edges on one
/// edge class, on Möbius faces with distinct boundary edges.
pub fn is_face_pair_reduced(s: &Skeleton) -> PredicateReport {
    let types = face_types(s);
    let nf = types.len();
    let germs: Vec<_> = (0..nf).map(|fc| corner_germs(s, fc)).collect();
    let mut w = Vec::new();
    for f1 in 0..nf {
        for f2 in (f1 + 1)..nf {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    // both ways of laying the second triangle collapse to
                    // one comparison of unordered germ pairs
                    if germs[f1][c1] != germs[f2][c2] {
                        continue;
                    }
                    let (x, y) = germs[f1][c1];
                    let kind = if x.0 != y.0 {
                        Some("distinct-interior-edges")
                    } else {
                        match (types[f1], types[f2]) {
                            (
                                FaceType::Mobius { boundary_edge: b1, .. },
                                FaceType::Mobius { boundary_edge: b2, .. },
                            ) => (b1 == b2).then_some("shared-boundary-edge"),
                            _ => Some("not-mobius"),
                        }
                    };
                    if let Some(kind) = kind {
                        w.push(Violation {
                            kind: kind.into(),
                            faces: vec![f1, f2],
                            tets: Vec::new(),
                            detail: format!(
                                "faces {f1} (corner {c1}) and {f2} (corner {c2}) share edges {}{} and {}{}",
                                x.0,
                                if x.1 { "+" } else { "-" },
                                y.0,
                                if y.1 { "+" } else { "-" }
                            ),
                        });
                    }
                }
            }
        }
    }
    PredicateReport::from_witnesses(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[allow(non_camel_case_types)]
pub enum SmallManifoldFlag {
    L3,
    L4_OR_L5,
    SIMPLIFIABLE_OR_SMALL,
}

pub fn small_manifold_flags(s: &Skeleton) -> Vec<SmallManifoldFlag> {
    let types = face_types(s);
    let mut flags = Vec::new();
    if types.iter().any(|t| *t == FaceType::ThreeFold) {
        flags.push(SmallManifoldFlag::L3);
    }
    if mobius_counts(s, &types).iter().any(|&m| m >= 3) {
        flags.push(SmallManifoldFlag::L4_OR_L5);
    }
    if types.iter().any(|t| matches!(t, FaceType::Cone | FaceType::Dunce)) {
        flags.push(SmallManifoldFlag::SIMPLIFIABLE_OR_SMALL);
    }
    flags
}

/// Map from ordered pairs of consecutive distinct oriented boundary edges to
/// the face classes exhibiting them. In a face-generic, face-pair-reduced
/// triangulation every list has length one.
pub fn corner_pair_index(s: &Skeleton) -> BTreeMap<(Germ, Germ), Vec<usize>> {
    let mut map: BTreeMap<(Germ, Germ), Vec<usize>> = BTreeMap::new();
    for fc in 0..s.face_classes().len() {
        for (x, y) in corner_germs(s, fc) {
            if x.0 != y.0 {
                let list = map.entry((x, y)).or_default();
                if !list.contains(&fc) {
                    list.push(fc);
                }
            }
        }
    }
    map
}

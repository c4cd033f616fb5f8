//! Twisted squares, their partition and topological types, and the
//! resulting tetrahedron types.

use serde::Serialize;

use crate::faces::{classify_sides, FaceType};
use crate::perm::{edge_index, Perm4, EDGE_VERTICES, FACE_VERTICES};
use crate::skeleton::Skeleton;
use crate::surface::PolygonComplex;

/// Vertex partition `{a b | c d}` of each quad type, with `a = 0`.
pub const QUAD_PARTITIONS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// Quad type separating `{v, w}` from the other two vertices.
pub fn quad_of_pair(v: usize, w: usize) -> usize {
    let other = if v == 0 {
        w
    } else if w == 0 {
        v
    } else {
        6 - v - w
    };
    other - 1
}

/// The four boundary corners of quad `q`'s square in cyclic order. Slot
/// `i` runs from `cycle[i]` to `cycle[i + 1]`.
pub fn square_cycle(q: usize) -> [usize; 4] {
    let [a, b, c, d] = QUAD_PARTITIONS[q];
    [a, c, b, d]
}

/// Local edges of the square boundary, slot by slot.
pub fn square_edges(q: usize) -> [usize; 4] {
    let c = square_cycle(q);
    [0, 1, 2, 3].map(|i| edge_index(c[i], c[(i + 1) % 4]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PartitionType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl PartitionType {
    pub fn letter(self) -> char {
        match self {
            PartitionType::A => 'A',
            PartitionType::B => 'B',
            PartitionType::C => 'C',
            PartitionType::D => 'D',
            PartitionType::E => 'E',
            PartitionType::F => 'F',
            PartitionType::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'A' => PartitionType::A,
            'B' => PartitionType::B,
            'C' => PartitionType::C,
            'D' => PartitionType::D,
            'E' => PartitionType::E,
            'F' => PartitionType::F,
            'G' => PartitionType::G,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TopologicalType {
    None,
    Annulus,
    Mobius,
    Torus,
    Klein,
    Projective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TwistedSquare {
    pub tet: usize,
    pub quad: usize,
    /// `(edge class, runs along the class direction)` per slot.
    pub boundary: [(usize, bool); 4],
    pub partition_type: PartitionType,
    pub topological_type: TopologicalType,
}

/// Partition type of four cyclic slot labels.
pub fn partition_type(c: [usize; 4]) -> PartitionType {
    let mut distinct = c.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    match distinct.len() {
        4 => PartitionType::A,
        3 => {
            if c[0] == c[2] || c[1] == c[3] {
                PartitionType::B
            } else {
                PartitionType::C
            }
        }
        2 => {
            if c[0] == c[2] && c[1] == c[3] {
                PartitionType::D
            } else if c[0] == c[2] || c[1] == c[3] {
                // an opposite pair inside a 3+1 split
                PartitionType::E
            } else {
                let count0 = c.iter().filter(|&&x| x == c[0]).count();
                if count0 == 2 {
                    PartitionType::F
                } else {
                    PartitionType::E
                }
            }
        }
        _ => PartitionType::G,
    }
}

/// Builds the identification space of one square from its slots.
pub fn square_surface(boundary: &[(usize, bool); 4]) -> crate::surface::SurfaceSummary {
    let mut pc = PolygonComplex::new();
    let p = pc.add_polygon(4);
    for i in 0..4 {
        if pc.is_glued(p, i) {
            continue;
        }
        if let Some(j) = ((i + 1)..4).find(|&j| boundary[j].0 == boundary[i].0 && !pc.is_glued(p, j)) {
            pc.glue((p, i), (p, j), boundary[i].1 == boundary[j].1);
        }
    }
    pc.summary()
}

// Frozen case tables, indexed by whether the two slots of each identified
// pair run the same way round the boundary. They agree with the
// identification-space computation (see the tests).
const B_TABLE: [TopologicalType; 2] = [TopologicalType::Annulus, TopologicalType::Mobius];
// index: 2 * (slots 0,2 same way) + (slots 1,3 same way)
const D_TABLE: [TopologicalType; 4] = [
    TopologicalType::Torus,
    TopologicalType::Klein,
    TopologicalType::Klein,
    TopologicalType::Projective,
];

pub fn topological_type(ty: PartitionType, boundary: &[(usize, bool); 4]) -> TopologicalType {
    match ty {
        PartitionType::A | PartitionType::E | PartitionType::G => TopologicalType::None,
        PartitionType::C => TopologicalType::Mobius,
        PartitionType::F => TopologicalType::Klein,
        PartitionType::B => {
            let (i, j) = if boundary[0].0 == boundary[2].0 { (0, 2) } else { (1, 3) };
            B_TABLE[(boundary[i].1 == boundary[j].1) as usize]
        }
        PartitionType::D => {
            let s02 = (boundary[0].1 == boundary[2].1) as usize;
            let s13 = (boundary[1].1 == boundary[3].1) as usize;
            D_TABLE[2 * s02 + s13]
        }
    }
}

pub fn squares_of(s: &Skeleton, tet: usize) -> [TwistedSquare; 3] {
    [0, 1, 2].map(|q| square(s, tet, q))
}

pub fn square(s: &Skeleton, tet: usize, quad: usize) -> TwistedSquare {
    let cyc = square_cycle(quad);
    let boundary = [0, 1, 2, 3].map(|i| s.oriented_edge(tet, cyc[i], cyc[(i + 1) % 4]));
    let partition_type = partition_type(boundary.map(|b| b.0));
    TwistedSquare {
        tet,
        quad,
        boundary,
        partition_type,
        topological_type: topological_type(partition_type, &boundary),
    }
}

pub fn all_squares(s: &Skeleton) -> Vec<TwistedSquare> {
    (0..s.tet_count()).flat_map(|t| squares_of(s, t)).collect()
}

/// The eleven tetrahedron labels possible in a face-generic triangulation.
pub const GENERIC_LABELS: [&str; 11] = [
    "AAA", "AAC", "ABB", "AAF", "ABE", "ACC", "BBC", "BBD", "BBF", "BDE", "DDD",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Refined {
    #[serde(rename = "sBBD")]
    SBbd,
    #[serde(rename = "sBDE")]
    SBde,
    #[serde(rename = "LST321")]
    Lst321,
}

impl Refined {
    pub fn name(self) -> &'static str {
        match self {
            Refined::SBbd => "sBBD",
            Refined::SBde => "sBDE",
            Refined::Lst321 => "LST321",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TetraType {
    /// Sorted partition letters of the three squares, e.g. `ABE`.
    pub partition: String,
    /// `partition` when it is one of the eleven generic labels, else `OTHER`.
    pub label: String,
    pub refined: Option<Refined>,
    pub distinct_edge_count: usize,
    pub note: Option<String>,
}

/// Edge identification pattern of one tetrahedron: per local edge, a class
/// number (numbered by first occurrence) and the direction relative to the
/// first member of its class.
pub type EdgePattern = [(u8, bool); 6];

pub fn edge_pattern(s: &Skeleton, tet: usize) -> EdgePattern {
    pattern_from(|e| {
        let [a, b] = EDGE_VERTICES[e];
        s.oriented_edge(tet, a, b)
    })
}

/// Normalizes per-edge `(class, direction)` data into an [`EdgePattern`].
pub fn pattern_from(edge: impl Fn(usize) -> (usize, bool)) -> EdgePattern {
    let mut seen: Vec<(usize, bool)> = Vec::new();
    let mut out = [(0u8, false); 6];
    for (e, slot) in out.iter_mut().enumerate() {
        let (c, dir) = edge(e);
        let k = match seen.iter().position(|x| x.0 == c) {
            Some(k) => k,
            None => {
                seen.push((c, dir));
                seen.len() - 1
            }
        };
        *slot = (k as u8, dir ^ seen[k].1);
    }
    out
}

/// Applies a vertex relabeling to a pattern: the new edge `pi(a) pi(b)`
/// carries what `a b` carried.
pub fn relabel_pattern(p: &EdgePattern, pi: Perm4) -> EdgePattern {
    pattern_from(|e| {
        let [a, b] = EDGE_VERTICES[e];
        // new edge e = (a, b) came from old (pi^-1 a, pi^-1 b)
        let inv = pi.inverse();
        let (oa, ob) = (inv.apply(a), inv.apply(b));
        let old = p[edge_index(oa, ob)];
        // old flag is relative to the old low-to-high direction
        (old.0 as usize, old.1 ^ (oa > ob))
    })
}

pub fn canonical_pattern(p: &EdgePattern) -> EdgePattern {
    Perm4::all()
        .map(|pi| relabel_pattern(p, pi))
        .min()
        .expect("24 relabelings")
}

/// Face types of the four faces of a tetrahedron as seen from its own
/// edge pattern.
pub fn pattern_face_types(p: &EdgePattern) -> [FaceType; 4] {
    [0, 1, 2, 3].map(|f| {
        let [a, b, c] = FACE_VERTICES[f];
        let side = |x: usize, y: usize| {
            let (k, d) = p[edge_index(x, y)];
            (k as usize, !d ^ (x > y))
        };
        classify_sides([side(a, b), side(b, c), side(c, a)])
    })
}

/// Canonical edge patterns of the refined types `sBBD` and `sBDE`: type-D
/// square a torus and no cone faces.
pub fn refined_patterns() -> (EdgePattern, EdgePattern) {
    (canonical_pattern(&SBBD_PATTERN), canonical_pattern(&SBDE_PATTERN))
}

// Canonical forms, edges in the order 01 02 03 12 13 23 with a reversal
// bit relative to the first edge of each class. sBBD: 01 ~ 23 reversed and
// 03 ~ 12. sBDE: 01 ~ 02 (reversed) ~ 23 (reversed) and 03 ~ 12.
const SBBD_PATTERN: EdgePattern = [(0, false), (1, false), (2, false), (2, false), (3, false), (0, true)];
const SBDE_PATTERN: EdgePattern = [(0, false), (0, true), (1, false), (1, false), (2, false), (0, true)];

fn label_of(types: [PartitionType; 3]) -> String {
    let mut letters: Vec<char> = types.iter().map(|t| t.letter()).collect();
    letters.sort_unstable();
    letters.into_iter().collect()
}

pub fn tetra_type(s: &Skeleton, tet: usize) -> TetraType {
    let sq = squares_of(s, tet);
    let partition = label_of(sq.map(|x| x.partition_type));
    let mut classes: Vec<usize> = (0..6).map(|e| s.edge_class(tet, e)).collect();
    classes.sort_unstable();
    classes.dedup();
    let n = classes.len();
    let generic = GENERIC_LABELS.contains(&partition.as_str());
    let label = if generic {
        partition.clone()
    } else {
        "OTHER".to_string()
    };
    let note = if generic {
        None
    } else if partition == "DEE" {
        Some("DEE: four Mobius faces, impossible in a face-generic triangulation".to_string())
    } else {
        Some(format!("{partition} is not among the face-generic tetrahedron types"))
    };

    let mut refined = None;
    let d_torus = sq
        .iter()
        .filter(|x| x.partition_type == PartitionType::D)
        .all(|x| x.topological_type == TopologicalType::Torus);
    if (partition == "BBD" || partition == "BDE") && d_torus {
        let canon = canonical_pattern(&edge_pattern(s, tet));
        let (sbbd, sbde) = refined_patterns();
        if partition == "BBD" && canon == sbbd {
            refined = Some(Refined::SBbd);
        } else if partition == "BDE" && canon == sbde {
            let faces: Vec<usize> = (0..4)
                .filter(|&f| pattern_face_types(&edge_pattern(s, tet))[f].is_mobius())
                .collect();
            let glued = faces.len() == 2 && s.face_class(tet, faces[0]) == s.face_class(tet, faces[1]);
            refined = Some(if glued { Refined::Lst321 } else { Refined::SBde });
        }
    }
    TetraType {
        partition,
        label,
        refined,
        distinct_edge_count: n,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSummary;

    #[test]
    fn quad_zero_uses_the_joining_edges() {
        let mut e = square_edges(0).to_vec();
        e.sort_unstable();
        // 02, 03, 12, 13
        assert_eq!(e, vec![1, 2, 3, 4]);
        for q in 0..3 {
            let [a, b, c, d] = QUAD_PARTITIONS[q];
            assert_eq!(quad_of_pair(a, b), q);
            assert_eq!(quad_of_pair(c, d), q);
            assert_eq!(quad_of_pair(b, a), q);
        }
    }

    #[test]
    fn partition_letters() {
        assert_eq!(partition_type([0, 1, 2, 3]), PartitionType::A);
        assert_eq!(partition_type([0, 1, 0, 2]), PartitionType::B);
        assert_eq!(partition_type([1, 0, 2, 0]), PartitionType::B);
        assert_eq!(partition_type([0, 0, 1, 2]), PartitionType::C);
        assert_eq!(partition_type([1, 2, 0, 0]), PartitionType::C);
        assert_eq!(partition_type([0, 1, 0, 1]), PartitionType::D);
        assert_eq!(partition_type([0, 0, 0, 1]), PartitionType::E);
        assert_eq!(partition_type([0, 1, 0, 0]), PartitionType::E);
        assert_eq!(partition_type([0, 0, 1, 1]), PartitionType::F);
        assert_eq!(partition_type([0, 1, 1, 0]), PartitionType::F);
        assert_eq!(partition_type([3, 3, 3, 3]), PartitionType::G);
    }

    fn from_surface(ty: PartitionType, s: SurfaceSummary) -> TopologicalType {
        match (ty, s.orientable, s.euler_characteristic) {
            (PartitionType::B, true, _) => TopologicalType::Annulus,
            (PartitionType::B, false, _) => TopologicalType::Mobius,
            (PartitionType::D, true, 0) => TopologicalType::Torus,
            (PartitionType::D, false, 0) => TopologicalType::Klein,
            (PartitionType::D, false, 1) => TopologicalType::Projective,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn frozen_tables_match_identification_spaces() {
        for bits in 0..16u8 {
            let d = |i: u8| bits & (1 << i) != 0;
            let b = [(7, d(0)), (8, d(1)), (7, d(2)), (9, d(3))];
            assert_eq!(
                topological_type(PartitionType::B, &b),
                from_surface(PartitionType::B, square_surface(&b))
            );
            let b = [(7, d(0)), (8, d(1)), (9, d(2)), (8, d(3))];
            assert_eq!(
                topological_type(PartitionType::B, &b),
                from_surface(PartitionType::B, square_surface(&b))
            );
            let dd = [(7, d(0)), (8, d(1)), (7, d(2)), (8, d(3))];
            assert_eq!(
                topological_type(PartitionType::D, &dd),
                from_surface(PartitionType::D, square_surface(&dd))
            );
        }
        let mut seen: Vec<TopologicalType> = (0..4)
            .map(|k| {
                topological_type(
                    PartitionType::D,
                    &[(0, true), (1, true), (0, k & 2 == 0), (1, k & 1 == 0)],
                )
            })
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(
            seen,
            vec![
                TopologicalType::Torus,
                TopologicalType::Klein,
                TopologicalType::Projective
            ]
        );
    }

    #[test]
    fn relabel_is_an_action() {
        let p: EdgePattern = [(0, false), (1, false), (0, true), (2, false), (1, true), (3, false)];
        for a in Perm4::all() {
            for b in Perm4::all() {
                assert_eq!(
                    relabel_pattern(&relabel_pattern(&p, a), b),
                    relabel_pattern(&p, b.compose(a))
                );
            }
        }
    }

    /// Enumerates every edge pattern of a single tetrahedron and checks that
    /// the frozen refined patterns are exactly the BBD / BDE patterns whose
    /// D square is a torus and which have no cone faces, up to relabeling.
    #[test]
    fn derive_refined_patterns() {
        use std::collections::BTreeSet;
        let mut bbd = BTreeSet::new();
        let mut bde = BTreeSet::new();
        for p in all_patterns() {
            let squares = [0, 1, 2].map(|q| {
                let cyc = square_cycle(q);
                let slots = [0, 1, 2, 3].map(|i| {
                    let (a, b) = (cyc[i], cyc[(i + 1) % 4]);
                    let (k, d) = p[edge_index(a, b)];
                    (k as usize, !d ^ (a > b))
                });
                let ty = partition_type(slots.map(|x| x.0));
                (ty, topological_type(ty, &slots))
            });
            let label = label_of(squares.map(|x| x.0));
            let torus = squares
                .iter()
                .filter(|x| x.0 == PartitionType::D)
                .all(|x| x.1 == TopologicalType::Torus);
            let no_cone = pattern_face_types(&p).iter().all(|f| *f != FaceType::Cone);
            if torus && no_cone {
                if label == "BBD" {
                    bbd.insert(canonical_pattern(&p));
                }
                if label == "BDE" {
                    bde.insert(canonical_pattern(&p));
                }
            }
        }
        let (sbbd, sbde) = refined_patterns();
        assert_eq!(bbd.into_iter().collect::<Vec<_>>(), vec![sbbd]);
        assert_eq!(bde.into_iter().collect::<Vec<_>>(), vec![sbde]);
    }

    /// Every normalized pattern: restricted-growth class strings with
    /// direction bits (first member of each class fixed forward).
    pub(crate) fn all_patterns() -> Vec<EdgePattern> {
        let mut out = Vec::new();
        let mut cur = [(0u8, false); 6];
        fn rec(e: usize, max: u8, cur: &mut EdgePattern, out: &mut Vec<EdgePattern>) {
            if e == 6 {
                out.push(*cur);
                return;
            }
            for k in 0..=max.min(5) {
                let fresh = k == max;
                let dirs: &[bool] = if fresh { &[false] } else { &[false, true] };
                for &d in dirs {
                    cur[e] = (k, d);
                    rec(e + 1, if fresh { max + 1 } else { max }, cur, out);
                }
            }
        }
        rec(0, 0, &mut cur, &mut out);
        out
    }
}

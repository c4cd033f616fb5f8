//! Q-matching equations, 1-quad and 2-quad type solutions, clusters, and
//! Haken's matching equations as a cross-check.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::faces::{face_types, FaceType};
use crate::linalg::{self, Q};
use crate::perm::{edge_index, face_opposite, Perm4, FACE_VERTICES};
use crate::skeleton::Skeleton;
use crate::squares::{quad_of_pair, square, square_edges, tetra_type, PartitionType, QUAD_PARTITIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadRef {
    pub tet: usize,
    pub quad: usize,
}

impl QuadRef {
    pub fn column(self) -> usize {
        3 * self.tet + self.quad
    }

    pub fn from_column(c: usize) -> Self {
        QuadRef {
            tet: c / 3,
            quad: c % 3,
        }
    }
}

impl std::fmt::Display for QuadRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.tet, self.quad)
    }
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Sign of quad `quad`'s corner on local edge `{a, b}` in a tetrahedron
/// with orientation `tet_sign`.
pub fn corner_sign(tet_sign: i32, quad: usize, a: usize, b: usize) -> Result<i32> {
    let [p0, p1, _, _] = QUAD_PARTITIONS[quad];
    let side = |v: usize| if v == p0 || v == p1 { 0 } else { 1 };
    if side(a) == side(b) {
        return Err(Error::QuadMissesEdge {
            quad,
            edge: edge_index(a, b),
        });
    }
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    let (mut x, mut y) = (rest.next().expect("two left"), rest.next().expect("two left"));
    if Perm4::new([a, b, x, y]).expect("bijection").sign() < 0 {
        std::mem::swap(&mut x, &mut y);
    }
    // quad {ax|by} is +1, {ay|bx} is -1
    let s = if quad_of_pair(a, x) == quad { 1 } else { -1 };
    Ok(s * tet_sign)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QMatchSystem {
    /// Rows are edge classes, columns are quads `3 * tet + quad`.
    pub matrix: Vec<Vec<i64>>,
    /// Row signs applied (all +1 for the canonical system).
    pub edge_signs: Vec<i32>,
    pub tet_signs: Vec<i32>,
}

impl QMatchSystem {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.tet_signs.len() * 3
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[c]).collect()
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        self.matrix.iter().all(|r| r[c] == 0)
    }
}

pub fn build_q_system(s: &Skeleton) -> Result<QMatchSystem> {
    let signs = s.tet_orientations().ok_or(Error::NonOrientable)?.to_vec();
    let rows = vec![1; s.edge_classes().len()];
    Ok(build_q_system_with(s, &signs, &rows))
}

/// Builds the system with explicit tetrahedron signs and row signs. Signs
/// that are not a coherent orientation give a system of no meaning; this
/// exists to test convention independence.
pub fn build_q_system_with(s: &Skeleton, tet_signs: &[i32], edge_signs: &[i32]) -> QMatchSystem {
    let n = s.tet_count();
    let mut matrix = vec![vec![0i64; 3 * n]; s.edge_classes().len()];
    for t in 0..n {
        for q in 0..3 {
            for e in square_edges(q) {
                let [a, b] = crate::perm::EDGE_VERTICES[e];
                let sign = corner_sign(tet_signs[t], q, a, b).expect("square edges meet the quad");
                let row = s.edge_class(t, e);
                matrix[row][3 * t + q] += i64::from(sign * edge_signs[row]);
            }
        }
    }
    QMatchSystem {
        matrix,
        edge_signs: edge_signs.to_vec(),
        tet_signs: tet_signs.to_vec(),
    }
}

/// Quads whose column vanishes.
pub fn one_quad_solutions(q: &QMatchSystem) -> Vec<QuadRef> {
    (0..q.cols())
        .filter(|&c| q.column_is_zero(c))
        .map(QuadRef::from_column)
        .collect()
}

/// Quads whose square has partition type F or G.
pub fn fg_quads(s: &Skeleton) -> Vec<QuadRef> {
    let mut out = Vec::new();
    for t in 0..s.tet_count() {
        for quad in 0..3 {
            let ty = square(s, t, quad).partition_type;
            if ty == PartitionType::F || ty == PartitionType::G {
                out.push(QuadRef { tet: t, quad });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TwoQuad {
    pub q: QuadRef,
    pub p: QuadRef,
    /// `x(q) = 1`, `x(p) = t`.
    #[serde(serialize_with = "ser_rational")]
    pub t: BigRational,
}

/// Ratio `t` with `a + t b = 0`, if the nonzero columns are dependent.
fn dependence(a: &[i64], b: &[i64]) -> Option<BigRational> {
    let i = b.iter().position(|&x| x != 0)?;
    let t = BigRational::new((-a[i]).into(), b[i].into());
    let ok = a
        .iter()
        .zip(b)
        .all(|(&x, &y)| linalg::q(x) + &t * linalg::q(y) == Q::zero());
    (ok && !t.is_zero()).then_some(t)
}

pub fn two_quad_solutions(q: &QMatchSystem) -> Vec<TwoQuad> {
    let cols: Vec<Vec<i64>> = (0..q.cols()).map(|c| q.column(c)).collect();
    let nonzero: Vec<usize> = (0..q.cols()).filter(|&c| !q.column_is_zero(c)).collect();
    let mut out = Vec::new();
    for (i, &a) in nonzero.iter().enumerate() {
        for &b in &nonzero[i + 1..] {
            if let Some(t) = dependence(&cols[a], &cols[b]) {
                out.push(TwoQuad {
                    q: QuadRef::from_column(a),
                    p: QuadRef::from_column(b),
                    t,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InOneTetFinding {
    pub solution: TwoQuad,
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InOneTetReport {
    /// False when a 1-quad type solution exists.
    pub applicable: bool,
    pub findings: Vec<InOneTetFinding>,
    /// Set when the input is face-generic yet a finding exists.
    pub consistency_failure: bool,
}

pub fn two_quad_in_one_tet(q: &QMatchSystem, s: &Skeleton) -> InOneTetReport {
    if !one_quad_solutions(q).is_empty() {
        return InOneTetReport {
            applicable: false,
            findings: Vec::new(),
            consistency_failure: false,
        };
    }
    let types = face_types(s);
    let mut findings = Vec::new();
    for sol in two_quad_solutions(q) {
        if sol.q.tet != sol.p.tet {
            continue;
        }
        let t = sol.q.tet;
        let mut annotations = Vec::new();
        if (0..4).any(|f| types[s.face_class(t, f)] == FaceType::Cone) {
            annotations.push("cone face: S3".to_string());
        }
        if tetra_type(s, t).partition == "DEE" {
            annotations.push("DEE tetrahedron: L(5)".to_string());
        }
        findings.push(InOneTetFinding {
            solution: sol,
            annotations,
        });
    }
    let generic = crate::faces::is_face_generic(s).value;
    InOneTetReport {
        applicable: true,
        consistency_failure: generic && !findings.is_empty(),
        findings,
    }
}

/// How one quad of a cluster tetrahedron is covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ClusterWitness {
    OneQuad {
        quad: QuadRef,
    },
    TwoQuad {
        quad: QuadRef,
        partner: QuadRef,
        #[serde(serialize_with = "ser_rational")]
        t: BigRational,
    },
}

impl ClusterWitness {
    fn support(&self) -> Vec<QuadRef> {
        match self {
            ClusterWitness::OneQuad { quad } => vec![*quad],
            ClusterWitness::TwoQuad { quad, partner, .. } => {
                let mut v = vec![*quad, *partner];
                v.sort();
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub tet: usize,
    pub witnesses: Vec<ClusterWitness>,
    /// No choice of three pairwise distinct witnessing solutions exists.
    pub coincident: bool,
}

/// Every solution with at most two nonzero quad coordinates that is nonzero
/// on `c`.
fn candidates(q: &QMatchSystem, c: usize, cols: &[Vec<i64>], zero: &[bool]) -> Vec<ClusterWitness> {
    let quad = QuadRef::from_column(c);
    if zero[c] {
        return vec![ClusterWitness::OneQuad { quad }];
    }
    (0..q.cols())
        .filter(|&p| p != c && !zero[p])
        .filter_map(|p| {
            dependence(&cols[c], &cols[p]).map(|t| ClusterWitness::TwoQuad {
                quad,
                partner: QuadRef::from_column(p),
                t,
            })
        })
        .collect()
}

pub fn clusters_of_three(q: &QMatchSystem) -> Vec<Cluster> {
    let cols: Vec<Vec<i64>> = (0..q.cols()).map(|c| q.column(c)).collect();
    let zero: Vec<bool> = (0..q.cols()).map(|c| q.column_is_zero(c)).collect();
    let mut out = Vec::new();
    for t in 0..q.tet_signs.len() {
        let cands: Vec<Vec<ClusterWitness>> = (0..3).map(|k| candidates(q, 3 * t + k, &cols, &zero)).collect();
        if cands.iter().any(Vec::is_empty) {
            continue;
        }
        let mut distinct = false;
        'search: for a in &cands[0] {
            for b in &cands[1] {
                for c in &cands[2] {
                    let (sa, sb, sc) = (a.support(), b.support(), c.support());
                    if sa != sb && sb != sc && sa != sc {
                        distinct = true;
                        break 'search;
                    }
                }
            }
        }
        out.push(Cluster {
            tet: t,
            witnesses: cands.iter().map(|c| c[0].clone()).collect(),
            coincident: !distinct,
        });
    }
    out
}

/// Haken's matching equations in 7T coordinates: column `7t + v` is the
/// triangle at vertex `v`, column `7t + 4 + q` the quad `q`. One row per
/// face class and normal arc type.
pub fn build_haken_system(s: &Skeleton) -> Vec<Vec<i64>> {
    let n = s.tet_count();
    let mut rows = Vec::new();
    for members in s.face_classes() {
        let (t, f) = members[0];
        let g = s.triangulation().gluing(t, f).expect("closed");
        let o = face_opposite(f);
        let po = g.perm.apply(o);
        for v in FACE_VERTICES[f] {
            let mut row = vec![0i64; 7 * n];
            let pv = g.perm.apply(v);
            row[7 * t + v] += 1;
            row[7 * t + 4 + quad_of_pair(v, o)] += 1;
            row[7 * g.tet + pv] -= 1;
            row[7 * g.tet + 4 + quad_of_pair(pv, po)] -= 1;
            rows.push(row);
        }
    }
    rows
}

/// The quad part of a 7T vector, in Q-system column order.
pub fn quad_projection(v: &[Q]) -> Vec<Q> {
    v.chunks(7).flat_map(|c| c[4..7].to_vec()).collect()
}

/// Vertex-linking solution of vertex class `vc` in 7T coordinates.
pub fn vertex_link_vector(s: &Skeleton, vc: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); 7 * s.tet_count()];
    for &(t, x) in &s.vertex_classes()[vc] {
        v[7 * t + x] = linalg::q(1);
    }
    v
}

/// Checks that the quad projection of every Haken kernel basis vector
/// satisfies the Q-matching equations. Returns the number of basis vectors
/// checked, or the index of the first failure.
pub fn haken_projection_check(s: &Skeleton, qs: &QMatchSystem) -> std::result::Result<usize, usize> {
    let h = linalg::to_rational(&build_haken_system(s));
    let basis = linalg::nullspace(&h, 7 * s.tet_count());
    let m = linalg::to_rational(&qs.matrix);
    for (i, v) in basis.iter().enumerate() {
        if !linalg::is_zero_vec(&linalg::mul_vec(&m, &quad_projection(v))) {
            return Err(i);
        }
    }
    Ok(basis.len())
}

/// Is `x` a solution of the Q-system?
pub fn is_q_solution(qs: &QMatchSystem, x: &[Q]) -> bool {
    linalg::is_zero_vec(&linalg::mul_vec(&linalg::to_rational(&qs.matrix), x))
}

/// Canonical, convention-free view of the detection outputs, used to compare
/// runs under different sign choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSupports {
    pub one_quad: Vec<QuadRef>,
    pub two_quad: Vec<(QuadRef, QuadRef)>,
    pub clusters: Vec<usize>,
}

pub fn solution_supports(q: &QMatchSystem) -> SolutionSupports {
    let mut two: Vec<(QuadRef, QuadRef)> = two_quad_solutions(q).into_iter().map(|s| (s.q, s.p)).collect();
    two.sort();
    SolutionSupports {
        one_quad: one_quad_solutions(q),
        two_quad: two,
        clusters: clusters_of_three(q).into_iter().map(|c| c.tet).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn corner_sign_rules() {
        for quad in 0..3 {
            let [a, x, b, y] = {
                let [p0, p1, p2, p3] = QUAD_PARTITIONS[quad];
                [p0, p1, p2, p3]
            };
            // opposite corners {a,b},{x,y} equal; adjacent {a,y} opposite
            let s_ab = corner_sign(1, quad, a, b).unwrap();
            let s_xy = corner_sign(1, quad, x, y).unwrap();
            let s_ay = corner_sign(1, quad, a, y).unwrap();
            let s_xb = corner_sign(1, quad, x, b).unwrap();
            assert_eq!(s_ab, s_xy);
            assert_eq!(s_ay, s_xb);
            assert_eq!(s_ab, -s_ay);
            assert!(corner_sign(1, quad, a, x).is_err());
            assert_eq!(corner_sign(-1, quad, a, b).unwrap(), -s_ab);
            // independent of the edge direction
            assert_eq!(corner_sign(1, quad, b, a).unwrap(), s_ab);
        }
        // the two quads meeting an edge disagree
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let sum: i32 = (0..3).filter_map(|q| corner_sign(1, q, a, b).ok()).sum();
                assert_eq!(sum, 0);
            }
        }
    }

    #[test]
    fn positive_ordering_example() {
        // (0,1,2,3) is positive: quad {02|13} is +1 on edge 01
        assert_eq!(corner_sign(1, 1, 0, 1).unwrap(), 1);
        assert_eq!(corner_sign(1, 2, 0, 1).unwrap(), -1);
    }

    #[test]
    fn tetrahedral_solutions_in_kernel() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        let qs = build_q_system(&s).unwrap();
        for row in &qs.matrix {
            for t in 0..s.tet_count() {
                assert_eq!(row[3 * t] + row[3 * t + 1] + row[3 * t + 2], 0);
            }
        }
        assert_eq!(one_quad_solutions(&qs), fg_quads(&s));
        assert_eq!(haken_projection_check(&s, &qs).map(|_| ()), Ok(()));
    }

    #[test]
    fn vertex_links_solve_haken() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        let h = linalg::to_rational(&build_haken_system(&s));
        for vc in 0..s.vertex_classes().len() {
            assert!(linalg::is_zero_vec(&linalg::mul_vec(&h, &vertex_link_vector(&s, vc))));
        }
    }

    #[test]
    fn negated_columns_are_a_two_quad_solution() {
        let qs = QMatchSystem {
            matrix: vec![vec![1, -1, 0], vec![2, -2, 0]],
            edge_signs: vec![1, 1],
            tet_signs: vec![1],
        };
        let two = two_quad_solutions(&qs);
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].t, linalg::q(1));
        assert_eq!(one_quad_solutions(&qs), vec![QuadRef { tet: 0, quad: 2 }]);
        let clusters = clusters_of_three(&qs);
        assert_eq!(clusters.len(), 1);
    }
}

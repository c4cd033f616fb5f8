//! Quotient cell structure of a closed triangulation: vertex, edge and face
//! classes, tetrahedron orientations and vertex links.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{edge_index, face_contains, face_opposite, EDGE_VERTICES, FACE_VERTICES};
use crate::surface::{PolygonComplex, SurfaceSummary};
use crate::triangulation::{face_name, Triangulation};
use crate::uf::ParityUnionFind;

/// One orbit of tetrahedron edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    /// `(tet, local edge)` members in ascending order.
    pub members: Vec<(usize, usize)>,
    /// Set when the pairings identify the edge with itself reversed; the
    /// per-member flags of such a class are not meaningful.
    pub self_reversed: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }
}

/// A cycle of gluings along which induced orientations cannot be made
/// coherent. Each step is a `(tet, face)` whose gluing is crossed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationWitness {
    pub cycle: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Skeleton {
    tri: Triangulation,
    edge_of: Vec<[usize; 6]>,
    edge_flip: Vec<[bool; 6]>,
    edges: Vec<EdgeClass>,
    vertex_of: Vec<[usize; 4]>,
    vertices: Vec<Vec<(usize, usize)>>,
    face_of: Vec<[usize; 4]>,
    faces: Vec<Vec<(usize, usize)>>,
    orientation: std::result::Result<Vec<i32>, OrientationWitness>,
}

impl Skeleton {
    pub fn build(tri: &Triangulation) -> Result<Skeleton> {
        let n = tri.tet_count();
        for t in 0..n {
            for f in 0..4 {
                if tri.gluing(t, f).is_none() {
                    return Err(Error::NotClosed {
                        tet: t,
                        face: face_name(f),
                    });
                }
            }
        }

        let mut euf = ParityUnionFind::new(6 * n);
        let mut vuf = ParityUnionFind::new(4 * n);
        let mut fuf = ParityUnionFind::new(4 * n);
        let mut self_reversed_roots = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                let g = tri.gluing(t, f).expect("closed");
                let tf = g.target_face(f);
                fuf.union(4 * t + f, 4 * g.tet + tf);
                let verts = FACE_VERTICES[f];
                for &v in &verts {
                    vuf.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                }
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        let (a, b) = (verts[i], verts[j]);
                        let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                        let src = 6 * t + edge_index(a, b);
                        let dst = 6 * g.tet + edge_index(pa, pb);
                        if !euf.union_parity(src, dst, pa > pb) {
                            self_reversed_roots.push(src);
                        }
                    }
                }
            }
        }

        let (eids, ecount) = euf.classes();
        let mut edges: Vec<EdgeClass> = (0..ecount)
            .map(|_| EdgeClass {
                members: Vec::new(),
                self_reversed: false,
            })
            .collect();
        let mut edge_of = vec![[0usize; 6]; n];
        let mut edge_flip = vec![[false; 6]; n];
        let mut rep_parity = vec![None; ecount];
        for x in 0..6 * n {
            let (t, e) = (x / 6, x % 6);
            let c = eids[x];
            let (_, par) = euf.find(x);
            // flags are relative to the lowest member, which comes first
            let base = *rep_parity[c].get_or_insert(par);
            edge_of[t][e] = c;
            edge_flip[t][e] = par ^ base;
            edges[c].members.push((t, e));
        }
        for x in self_reversed_roots {
            edges[eids[x]].self_reversed = true;
        }

        let (vids, vcount) = vuf.classes();
        let mut vertices = vec![Vec::new(); vcount];
        let mut vertex_of = vec![[0usize; 4]; n];
        for x in 0..4 * n {
            vertex_of[x / 4][x % 4] = vids[x];
            vertices[vids[x]].push((x / 4, x % 4));
        }

        let (fids, fcount) = fuf.classes();
        let mut faces = vec![Vec::new(); fcount];
        let mut face_of = vec![[0usize; 4]; n];
        for x in 0..4 * n {
            face_of[x / 4][x % 4] = fids[x];
            faces[fids[x]].push((x / 4, x % 4));
        }

        let orientation = orient_tets(tri);
        Ok(Skeleton {
            tri: tri.clone(),
            edge_of,
            edge_flip,
            edges,
            vertex_of,
            vertices,
            face_of,
            faces,
            orientation,
        })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn tet_count(&self) -> usize {
        self.tri.tet_count()
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edges
    }

    pub fn vertex_classes(&self) -> &[Vec<(usize, usize)>] {
        &self.vertices
    }

    /// Members of each face class, as `(tet, face)`.
    pub fn face_classes(&self) -> &[Vec<(usize, usize)>] {
        &self.faces
    }

    pub fn edge_class(&self, tet: usize, e: usize) -> usize {
        self.edge_of[tet][e]
    }

    /// Whether local edge `e` (oriented low to high vertex) runs against the
    /// representative direction of its class.
    pub fn edge_flip(&self, tet: usize, e: usize) -> bool {
        self.edge_flip[tet][e]
    }

    /// Class of the edge from local vertex `a` to `b`, and whether that
    /// direction agrees with the class representative.
    pub fn oriented_edge(&self, tet: usize, a: usize, b: usize) -> (usize, bool) {
        let e = edge_index(a, b);
        let forward = (a < b) ^ self.edge_flip[tet][e];
        (self.edge_of[tet][e], forward)
    }

    pub fn vertex_class(&self, tet: usize, v: usize) -> usize {
        self.vertex_of[tet][v]
    }

    pub fn face_class(&self, tet: usize, f: usize) -> usize {
        self.face_of[tet][f]
    }

    /// `V - E + F - T`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64 - self.tet_count() as i64
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.is_ok()
    }

    /// Per-tetrahedron signs making every pairing orientation-reversing.
    pub fn orient(&self) -> std::result::Result<&[i32], &OrientationWitness> {
        self.orientation.as_deref()
    }

    pub fn tet_orientations(&self) -> Option<&[i32]> {
        self.orientation.as_deref().ok()
    }

    /// Sorted list of edge degrees.
    pub fn edge_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.edges.iter().map(EdgeClass::degree).collect();
        d.sort_unstable();
        d
    }

    /// One surface per vertex class, built from the corner triangles.
    pub fn vertex_links(&self) -> Vec<SurfaceSummary> {
        let n = self.tet_count();
        let mut local = vec![[usize::MAX; 4]; n];
        let mut complexes: Vec<PolygonComplex> = Vec::new();
        for members in &self.vertices {
            let mut pc = PolygonComplex::new();
            for &(t, v) in members {
                local[t][v] = pc.add_polygon(3);
            }
            complexes.push(pc);
        }
        for t in 0..n {
            for v in 0..4 {
                let others = link_corners(v);
                let c = self.vertex_of[t][v];
                for i in 0..3 {
                    let (a, b) = (others[i], others[(i + 1) % 3]);
                    let f = face_with(v, a, b);
                    let g = self.tri.gluing(t, f).expect("closed");
                    let (u, pv) = (g.tet, g.perm.apply(v));
                    // each link side is visited from both ends; glue once
                    if (u, pv, g.target_face(f)) < (t, v, f) {
                        continue;
                    }
                    let tother = link_corners(pv);
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    let j = (0..3)
                        .find(|&j| {
                            let (x, y) = (tother[j], tother[(j + 1) % 3]);
                            (x == pa && y == pb) || (x == pb && y == pa)
                        })
                        .expect("link side exists");
                    let same = tother[j] == pa;
                    complexes[c].glue((local[t][v], i), (local[u][pv], j), same);
                }
            }
        }
        complexes.iter().map(PolygonComplex::summary).collect()
    }

    /// Vertices of face `f` of `tet` in ascending order, with the class and
    /// traversal direction of the three sides `v0v1`, `v1v2`, `v2v0`.
    pub fn face_sides(&self, tet: usize, f: usize) -> [(usize, bool); 3] {
        let [a, b, c] = FACE_VERTICES[f];
        [
            self.oriented_edge(tet, a, b),
            self.oriented_edge(tet, b, c),
            self.oriented_edge(tet, c, a),
        ]
    }
}

/// The three vertices other than `v`, ascending.
fn link_corners(v: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for w in 0..4 {
        if w != v {
            out[k] = w;
            k += 1;
        }
    }
    out
}

fn face_with(a: usize, b: usize, c: usize) -> usize {
    let missing = 6 - a - b - c;
    let f = 3 - missing;
    debug_assert!(face_contains(f, a) && face_contains(f, b) && face_contains(f, c));
    f
}

fn orient_tets(tri: &Triangulation) -> std::result::Result<Vec<i32>, OrientationWitness> {
    let n = tri.tet_count();
    let mut sign = vec![0i32; n];
    // parent gluing used to reach each tetrahedron in the search tree
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    for start in 0..n {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4 {
                let g = tri.gluing(t, f).expect("closed");
                let want = -g.perm.sign() * sign[t];
                let u = g.tet;
                if sign[u] == 0 {
                    sign[u] = want;
                    via[u] = Some((t, f));
                    queue.push_back(u);
                } else if sign[u] != want {
                    return Err(OrientationWitness {
                        cycle: witness_cycle(tri, &via, t, f, u),
                    });
                }
            }
        }
    }
    Ok(sign)
}

fn witness_cycle(
    tri: &Triangulation,
    via: &[Option<(usize, usize)>],
    t: usize,
    f: usize,
    u: usize,
) -> Vec<(usize, usize)> {
    let path_to_root = |mut x: usize| {
        let mut steps = vec![x];
        while let Some((p, _)) = via[x] {
            x = p;
            steps.push(x);
        }
        steps
    };
    let pt = path_to_root(t);
    let pu = path_to_root(u);
    let meet = *pt.iter().find(|x| pu.contains(x)).expect("same tree");
    let mut cycle = Vec::new();
    // down from the meeting point to t
    let mut down: Vec<(usize, usize)> = Vec::new();
    for &x in pt.iter().take_while(|&&x| x != meet) {
        down.push(via[x].expect("non-root"));
    }
    down.reverse();
    cycle.extend(down);
    cycle.push((t, f));
    // from u back up to the meeting point, crossing each tree gluing from
    // the child side
    for &x in pu.iter().take_while(|&&x| x != meet) {
        let (p, pf) = via[x].expect("non-root");
        let g = tri.gluing(p, pf).expect("closed");
        cycle.push((x, g.target_face(pf)));
    }
    cycle
}

/// Checks a proposed orientation against every face pairing. Used as an
/// independent recheck of [`Skeleton::orient`].
pub fn orientation_is_coherent(tri: &Triangulation, signs: &[i32]) -> bool {
    (0..tri.tet_count()).all(|t| {
        (0..4).all(|f| {
            let g = tri.gluing(t, f).expect("closed");
            signs[g.tet] == -g.perm.sign() * signs[t]
        })
    })
}

/// Endpoints of edge `e` in the order used for its low-to-high direction.
pub fn edge_endpoints(e: usize) -> (usize, usize) {
    let [a, b] = EDGE_VERTICES[e];
    (a, b)
}

/// The vertex opposite face `f`, re-exported for callers working with faces.
pub fn opposite_vertex(f: usize) -> usize {
    face_opposite(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn four_tet_sphere_counts() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        assert_eq!(s.face_classes().len(), 8);
        assert_eq!(s.edge_classes().len() as i64 - s.vertex_classes().len() as i64, 4);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.is_orientable());
        let links = s.vertex_links();
        assert!(links.iter().all(|l| l.is_sphere() && l.orientable));
        assert_eq!(links.iter().map(|l| l.faces).sum::<usize>(), 16);
        let deg: usize = s.edge_classes().iter().map(EdgeClass::degree).sum();
        assert_eq!(deg, 24);
    }

    #[test]
    fn not_closed_rejected() {
        let t = Triangulation::parse_table("0: - - - -\n").unwrap();
        assert!(matches!(Skeleton::build(&t), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn non_orientable_witness_is_a_real_cycle() {
        // faces 012 and 123 glued by an even map; the single gluing loop
        // has the wrong parity
        let t = Triangulation::parse_table("0: 0 (132) 0 (023) 0 (013) 0 (021)\n").unwrap();
        let s = Skeleton::build(&t).unwrap();
        let w = s.orient().unwrap_err();
        assert!(!w.cycle.is_empty());
        let parity: i32 = w
            .cycle
            .iter()
            .map(|&(t0, f0)| t.gluing(t0, f0).unwrap().perm.sign())
            .product();
        // an orientable loop has product of (-sign) equal to 1
        let len = w.cycle.len() as u32;
        assert_eq!(parity * (-1i32).pow(len), -1);
    }

    #[test]
    fn oriented_edges_agree_with_flags() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        for c in s.edge_classes() {
            let (t, e) = c.members[0];
            assert!(!s.edge_flip(t, e));
            let (a, b) = edge_endpoints(e);
            assert_eq!(s.oriented_edge(t, a, b).1, true);
            assert_eq!(s.oriented_edge(t, b, a).1, false);
        }
    }
}

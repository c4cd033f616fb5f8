//! Small hand-built triangulations used by tests, benchmarks and the CLI
//! examples.

use std::collections::HashMap;

use crate::perm::{Perm4, FACE_VERTICES};
use crate::triangulation::{Gluing, Triangulation};

/// A four-tetrahedron triangulation of the 3-sphere that is face-generic
/// but not face-pair-reduced.
pub const FOUR_TET_SPHERE_TABLE: &str = "\
0: 2 (231) 1 (321) 0 (312) 0 (230)
1: 3 (231) 3 (023) 2 (032) 0 (310)
2: 3 (013) 3 (120) 1 (032) 0 (201)
3: 2 (301) 2 (012) 1 (013) 1 (201)
";

pub fn four_tet_sphere() -> Triangulation {
    Triangulation::parse_table(FOUR_TET_SPHERE_TABLE).expect("fixture parses")
}

/// Builds a closed triangulation from tetrahedra given by global vertex
/// labels. Every triple of labels must occur in exactly two tetrahedra.
/// Local vertex `i` of tetrahedron `t` is `tets[t][i]`.
pub fn from_simplicial(tets: &[[usize; 4]]) -> Triangulation {
    let mut by_face: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for (t, verts) in tets.iter().enumerate() {
        for (f, fv) in FACE_VERTICES.iter().enumerate() {
            let mut key = fv.map(|i| verts[i]);
            key.sort_unstable();
            by_face.entry(key).or_default().push((t, f));
        }
    }
    let mut gluings = vec![[None; 4]; tets.len()];
    for sides in by_face.values() {
        assert_eq!(sides.len(), 2, "each face must be shared by exactly two tetrahedra");
        for (k, &(t, f)) in sides.iter().enumerate() {
            let (u, g) = sides[1 - k];
            let triple = FACE_VERTICES[f].map(|i| {
                let label = tets[t][i];
                tets[u].iter().position(|&x| x == label).expect("shared label")
            });
            let perm = Perm4::from_face_map(f, triple).expect("injective");
            debug_assert_eq!(Gluing { tet: u, perm }.target_face(f), g);
            gluings[t][f] = Some(Gluing { tet: u, perm });
        }
    }
    Triangulation::new(gluings).expect("simplicial data is valid")
}

/// The boundary of the 4-simplex: five tetrahedra, simplicial.
pub fn boundary_of_4_simplex() -> Triangulation {
    let mut tets = Vec::new();
    for skip in (0..5).rev() {
        let v: Vec<usize> = (0..5).filter(|&x| x != skip).collect();
        tets.push([v[0], v[1], v[2], v[3]]);
    }
    from_simplicial(&tets)
}

/// Barycentric subdivision. Each tetrahedron splits into 24, one per flag
/// `vertex < edge < face < tet`, encoded by a permutation `pi`: the flag is
/// `pi(0) < {pi(0), pi(1)} < {pi(0), pi(1), pi(2)}`. Local vertex 0 of a
/// new tetrahedron is the old vertex, 1 the edge midpoint, 2 the face
/// barycentre and 3 the tetrahedron barycentre.
pub fn barycentric_subdivision(tri: &Triangulation) -> Triangulation {
    let perms: Vec<Perm4> = Perm4::all().collect();
    let index: HashMap<Perm4, usize> = perms.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let id = |t: usize, p: Perm4| 24 * t + index[&p];
    let swap = |k: usize| {
        let mut im = [0, 1, 2, 3];
        im.swap(k, k + 1);
        Perm4::new(im).expect("transposition")
    };
    let n = tri.tet_count();
    let mut gluings = vec![[None; 4]; 24 * n];
    for t in 0..n {
        for &pi in &perms {
            let me = id(t, pi);
            // internal faces: the face opposite local vertex k < 3 changes
            // the k-th flag element
            for k in 0..3 {
                let other = pi.compose(swap(k));
                let f = 3 - k;
                gluings[me][f] = Some(Gluing {
                    tet: id(t, other),
                    perm: Perm4::IDENTITY,
                });
            }
            // face 012 lies in old face pi(0)pi(1)pi(2)
            let old_face = 3 - pi.apply(3);
            if let Some(g) = tri.gluing(t, old_face) {
                let target = g.perm.compose(pi);
                gluings[me][0] = Some(Gluing {
                    tet: id(g.tet, target),
                    perm: Perm4::IDENTITY,
                });
            }
        }
    }
    Triangulation::new(gluings).expect("subdivision of a valid triangulation is valid")
}

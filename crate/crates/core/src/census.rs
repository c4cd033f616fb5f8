//! Exhaustive enumeration of small closed triangulations.
//!
//! Gluings are generated in a normal form: the lowest unglued face is always
//! glued next, and when it is glued to a tetrahedron not seen before, that
//! tetrahedron takes the next free index and is labelled so the gluing is a
//! fixed map onto its face 012. Every connected closed triangulation has such
//! a form for each choice of starting tetrahedron and starting vertex
//! labelling; the least of those is the canonical form.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{face_opposite, face_opposite_vertex, Perm4};
use crate::skeleton::Skeleton;
use crate::triangulation::{Gluing, Triangulation};

pub const MAX_CENSUS_TETS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFilter {
    pub require_closed: bool,
    pub require_sphere_links: bool,
    pub require_orientable: bool,
    pub max_tets: usize,
}

impl CensusFilter {
    pub fn all(max_tets: usize) -> Self {
        CensusFilter {
            require_closed: true,
            require_sphere_links: false,
            require_orientable: false,
            max_tets,
        }
    }

    pub fn manifolds(max_tets: usize) -> Self {
        CensusFilter {
            require_closed: true,
            require_sphere_links: true,
            require_orientable: true,
            max_tets,
        }
    }

    pub fn accepts(&self, s: &Skeleton) -> bool {
        (!self.require_orientable || s.is_orientable())
            && (!self.require_sphere_links || s.vertex_links().iter().all(|l| l.is_sphere()))
    }
}

/// Odd map from face `f` onto face 012 used for every tree gluing.
fn tree_perm(f: usize) -> Perm4 {
    Perm4::all()
        .find(|p| p.apply(face_opposite(f)) == 3 && p.sign() == -1)
        .expect("an odd map exists")
}

/// Maps from face `f` onto face `g`, optionally only the odd ones.
fn face_maps(f: usize, g: usize, odd_only: bool) -> impl Iterator<Item = Perm4> {
    Perm4::all().filter(move |p| p.apply(face_opposite(f)) == face_opposite(g) && (!odd_only || p.sign() == -1))
}

/// Canonical representative of a connected closed triangulation: the least
/// gluing table over all normal-form relabelings. `None` for disconnected or
/// non-closed input.
pub fn canonical_form(tri: &Triangulation) -> Option<Triangulation> {
    if !tri.is_closed() || tri.tet_count() == 0 {
        return None;
    }
    let n = tri.tet_count();
    let mut best: Option<Triangulation> = None;
    for root in 0..n {
        for sigma in Perm4::all() {
            let Some(candidate) = normal_relabel(tri, root, sigma) else {
                return None;
            };
            if best.as_ref().is_none_or(|b| candidate.gluings() < b.gluings()) {
                best = Some(candidate);
            }
        }
    }
    best
}

fn normal_relabel(tri: &Triangulation, root: usize, sigma: Perm4) -> Option<Triangulation> {
    let n = tri.tet_count();
    let mut new_index = vec![usize::MAX; n];
    let mut maps = vec![Perm4::IDENTITY; n];
    let mut order = vec![root];
    new_index[root] = 0;
    maps[root] = sigma;
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        for nf in 0..4 {
            let f = face_opposite_vertex(maps[t].inverse().apply(face_opposite(nf)));
            let g = tri.gluing(t, f)?;
            if new_index[g.tet] == usize::MAX {
                new_index[g.tet] = order.len();
                order.push(g.tet);
                maps[g.tet] = tree_perm(nf).compose(maps[t]).compose(g.perm.inverse());
            }
        }
        i += 1;
    }
    (order.len() == n).then(|| tri.relabel(&new_index, &maps))
}

struct Generator {
    n: usize,
    odd_only: bool,
    gluings: Vec<[Option<Gluing>; 4]>,
    out: Vec<Vec<[Option<Gluing>; 4]>>,
}

impl Generator {
    fn run(&mut self, used: usize) {
        let next = (0..used)
            .flat_map(|t| (0..4).map(move |f| (t, f)))
            .find(|&(t, f)| self.gluings[t][f].is_none());
        let Some((t, f)) = next else {
            if used == self.n {
                self.out.push(self.gluings.clone());
            }
            return;
        };
        if used < self.n {
            let p = tree_perm(f);
            self.set(t, f, used, p);
            self.run(used + 1);
            self.clear(t, f, used, p);
        }
        for u in t..used {
            for g in 0..4 {
                if (u, g) <= (t, f) || self.gluings[u][g].is_some() {
                    continue;
                }
                for p in face_maps(f, g, self.odd_only) {
                    self.set(t, f, u, p);
                    self.run(used);
                    self.clear(t, f, u, p);
                }
            }
        }
    }

    fn set(&mut self, t: usize, f: usize, u: usize, p: Perm4) {
        let g = Gluing { tet: u, perm: p }.target_face(f);
        self.gluings[t][f] = Some(Gluing { tet: u, perm: p });
        self.gluings[u][g] = Some(Gluing {
            tet: t,
            perm: p.inverse(),
        });
    }

    fn clear(&mut self, t: usize, f: usize, u: usize, p: Perm4) {
        let g = Gluing { tet: u, perm: p }.target_face(f);
        self.gluings[t][f] = None;
        self.gluings[u][g] = None;
    }
}

/// Canonical connected closed triangulations with exactly `n` tetrahedra
/// passing the filter, in canonical order.
pub fn enumerate_exact(n: usize, filter: &CensusFilter) -> Result<Vec<Triangulation>> {
    if n > MAX_CENSUS_TETS {
        return Err(Error::CensusTooLarge {
            requested: n,
            max: MAX_CENSUS_TETS,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // with all tree gluings odd, orientable means every gluing is odd
    let mut generator = Generator {
        n,
        odd_only: filter.require_orientable,
        gluings: vec![[None; 4]; n],
        out: Vec::new(),
    };
    generator.run(1);
    let mut seen = BTreeSet::new();
    for gluings in generator.out {
        let tri = Triangulation::new(gluings)?;
        let skeleton = Skeleton::build(&tri)?;
        if !filter.accepts(&skeleton) {
            continue;
        }
        if let Some(c) = canonical_form(&tri) {
            seen.insert(c.gluings().to_vec());
        }
    }
    seen.into_iter().map(Triangulation::new).collect()
}

/// All census members with 1 to `max_tets` tetrahedra, ordered by size and
/// then by canonical gluing table.
pub fn enumerate(filter: &CensusFilter) -> Result<Vec<Triangulation>> {
    if filter.max_tets > MAX_CENSUS_TETS {
        return Err(Error::CensusTooLarge {
            requested: filter.max_tets,
            max: MAX_CENSUS_TETS,
        });
    }
    let mut all = Vec::new();
    for n in 1..=filter.max_tets {
        all.extend(enumerate_exact(n, filter)?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{h1, AbelianInvariants};

    #[test]
    fn guards() {
        assert!(enumerate(&CensusFilter::all(0)).unwrap().is_empty());
        assert!(matches!(
            enumerate(&CensusFilter::all(4)),
            Err(Error::CensusTooLarge { requested: 4, .. })
        ));
    }

    #[test]
    fn one_tetrahedron() {
        let all = enumerate(&CensusFilter::all(1)).unwrap();
        let manifolds = enumerate(&CensusFilter::manifolds(1)).unwrap();
        assert!(manifolds.len() < all.len());
        // some closed gluing has a vertex link that is not a sphere
        assert!(all.iter().any(|t| {
            let s = Skeleton::build(t).unwrap();
            s.vertex_links().iter().any(|l| l.euler_characteristic != 2)
        }));
        let spheres: Vec<_> = manifolds
            .iter()
            .filter(|t| h1(&Skeleton::build(t).unwrap()).is_trivial())
            .collect();
        let one_vertex: Vec<_> = spheres
            .iter()
            .map(|t| Skeleton::build(t).unwrap())
            .filter(|s| s.vertex_classes().len() == 1)
            .collect();
        assert_eq!(one_vertex.len(), 1);
        assert_eq!(one_vertex[0].edge_classes().len(), 2);
    }

    #[test]
    fn canonical_form_is_idempotent_and_stable() {
        for t in enumerate(&CensusFilter::all(2)).unwrap() {
            assert_eq!(canonical_form(&t).unwrap(), t);
            let back = Triangulation::parse_table(&t.to_table()).unwrap();
            assert_eq!(canonical_form(&back).unwrap(), t);
        }
    }

    #[test]
    fn two_tetrahedron_projective_spaces() {
        let census = enumerate_exact(2, &CensusFilter::manifolds(2)).unwrap();
        let rp3: Vec<_> = census
            .iter()
            .filter(|t| h1(&Skeleton::build(t).unwrap()) == AbelianInvariants::cyclic(2))
            .collect();
        assert_eq!(rp3.len(), 2);
    }
}

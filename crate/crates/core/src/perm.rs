//! Permutations of the four vertices of a tetrahedron, plus the fixed
//! numbering of faces and edges used throughout the crate.

use std::fmt;

/// Faces of a tetrahedron in the order 012, 013, 023, 123.
pub const FACE_VERTICES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Edges of a tetrahedron in the order 01, 02, 03, 12, 13, 23.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// The vertex not contained in face `f`.
pub const fn face_opposite(f: usize) -> usize {
    3 - f
}

/// The face opposite vertex `v`.
pub const fn face_opposite_vertex(v: usize) -> usize {
    3 - v
}

/// Index of the edge joining `a` and `b` (in either order).
pub fn edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    debug_assert!(lo != hi && hi < 4);
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// The edge opposite edge `e` (the one sharing no vertex with it).
pub const fn edge_opposite(e: usize) -> usize {
    5 - e
}

/// Whether face `f` contains vertex `v`.
pub const fn face_contains(f: usize, v: usize) -> bool {
    face_opposite(f) != v
}

/// A permutation of {0,1,2,3}, stored as the image of each vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images; `None` if not a bijection.
    pub fn new(images: [usize; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm4(images.map(|i| i as u8)))
    }

    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn images(self) -> [usize; 4] {
        self.0.map(usize::from)
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Self {
        Perm4(other.0.map(|i| self.0[i as usize]))
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All 24 permutations in lexicographic order of their image arrays.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..4usize).flat_map(|a| {
            (0..4usize).flat_map(move |b| {
                (0..4usize).flat_map(move |c| (0..4usize).filter_map(move |d| Perm4::new([a, b, c, d])))
            })
        })
    }

    /// Extends a map of the vertices of face `f` (given in ascending source
    /// order) to a full permutation; the opposite vertex goes to the one
    /// vertex left over.
    pub fn from_face_map(f: usize, triple: [usize; 3]) -> Option<Self> {
        let src = FACE_VERTICES[f];
        let mut images = [usize::MAX; 4];
        for (s, t) in src.iter().zip(triple) {
            images[*s] = t;
        }
        let used: Vec<usize> = triple.to_vec();
        let rest = (0..4).find(|v| !used.contains(v))?;
        images[face_opposite(f)] = rest;
        Perm4::new(images)
    }

    /// Images of the vertices of face `f`, in ascending source order.
    pub fn face_triple(self, f: usize) -> [usize; 3] {
        FACE_VERTICES[f].map(|v| self.apply(v))
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({}{}{}{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

//! Abstract 2-complexes built from polygons glued along sides. Used for
//! vertex links, single squares and unions of squares.

use serde::{Deserialize, Serialize};

use crate::uf::ParityUnionFind;

/// Topological summary of a polygon complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub euler_characteristic: i64,
    pub connected: bool,
    pub orientable: bool,
    pub closed: bool,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl SurfaceSummary {
    pub fn is_sphere(&self) -> bool {
        self.closed && self.connected && self.euler_characteristic == 2
    }

    /// Closed surface name: sphere, torus, or a connected sum of
    /// projective planes written as `#k P`.
    pub fn name(&self) -> String {
        if !self.connected {
            return "disconnected".into();
        }
        if !self.closed {
            return format!("bounded(chi={})", self.euler_characteristic);
        }
        if self.orientable {
            match self.euler_characteristic {
                2 => "sphere".into(),
                0 => "torus".into(),
                chi => format!("orientable genus {}", (2 - chi) / 2),
            }
        } else {
            let k = 2 - self.euler_characteristic;
            match k {
                1 => "projective plane".into(),
                2 => "Klein bottle".into(),
                k => format!("#{k} P"),
            }
        }
    }
}

/// Polygons whose sides are glued in pairs. Side `i` of a polygon runs from
/// corner `i` to corner `i + 1` (mod the side count).
#[derive(Debug, Clone, Default)]
pub struct PolygonComplex {
    sides: Vec<usize>,
    offsets: Vec<usize>,
    owner: Vec<(usize, usize)>,
    partner: Vec<Option<(usize, bool)>>,
}

impl PolygonComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a polygon with `n` sides and returns its index.
    pub fn add_polygon(&mut self, n: usize) -> usize {
        let offset = self.partner.len();
        self.sides.push(n);
        self.offsets.push(offset);
        let poly = self.sides.len() - 1;
        self.partner.extend(std::iter::repeat(None).take(n));
        self.owner.extend((0..n).map(|i| (poly, i)));
        poly
    }

    pub fn polygon_count(&self) -> usize {
        self.sides.len()
    }

    fn slot(&self, poly: usize, side: usize) -> usize {
        debug_assert!(side < self.sides[poly]);
        self.offsets[poly] + side
    }

    fn unslot(&self, slot: usize) -> (usize, usize) {
        self.owner[slot]
    }

    /// Glues two sides. With `same_direction` the start corner of one side
    /// goes to the start corner of the other; otherwise start goes to end.
    /// Panics if either side is already glued.
    pub fn glue(&mut self, a: (usize, usize), b: (usize, usize), same_direction: bool) {
        let sa = self.slot(a.0, a.1);
        let sb = self.slot(b.0, b.1);
        assert!(sa != sb, "a side cannot be glued to itself");
        assert!(
            self.partner[sa].is_none() && self.partner[sb].is_none(),
            "side glued twice"
        );
        self.partner[sa] = Some((sb, same_direction));
        self.partner[sb] = Some((sa, same_direction));
    }

    pub fn is_glued(&self, poly: usize, side: usize) -> bool {
        self.partner[self.slot(poly, side)].is_some()
    }

    fn corner(&self, poly: usize, i: usize) -> usize {
        self.offsets[poly] + i % self.sides[poly]
    }

    /// Vertex class of every corner (corners are indexed like sides) and
    /// the number of classes.
    pub fn vertex_classes(&self) -> (Vec<usize>, usize) {
        let mut uf = ParityUnionFind::new(self.partner.len());
        for s in 0..self.partner.len() {
            if let Some((t, same)) = self.partner[s] {
                let (p, i) = self.unslot(s);
                let (q, j) = self.unslot(t);
                let (start, end) = (self.corner(p, i), self.corner(p, i + 1));
                let (tstart, tend) = (self.corner(q, j), self.corner(q, j + 1));
                if same {
                    uf.union(start, tstart);
                    uf.union(end, tend);
                } else {
                    uf.union(start, tend);
                    uf.union(end, tstart);
                }
            }
        }
        uf.classes()
    }

    pub fn summary(&self) -> SurfaceSummary {
        let faces = self.sides.len();
        let slots = self.partner.len();
        let glued = self.partner.iter().filter(|p| p.is_some()).count();
        let edges = glued / 2 + (slots - glued);
        let (_, vertices) = self.vertex_classes();

        // connectivity and orientability together: parity = polygon sign
        let mut uf = ParityUnionFind::new(faces);
        let mut orientable = true;
        for s in 0..slots {
            if let Some((t, same)) = self.partner[s] {
                let (p, _) = self.unslot(s);
                let (q, _) = self.unslot(t);
                // coherent orientations traverse a shared side in opposite
                // directions, so a same-direction gluing flips the sign
                if !uf.union_parity(p, q, same) {
                    orientable = false;
                }
            }
        }
        let (_, components) = uf.classes();
        SurfaceSummary {
            euler_characteristic: vertices as i64 - edges as i64 + faces as i64,
            connected: components <= 1,
            orientable,
            closed: glued == slots,
            vertices,
            edges,
            faces,
        }
    }
}

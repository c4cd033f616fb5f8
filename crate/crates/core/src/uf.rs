//! Union-find with an optional parity bit on each element, relative to its
//! root. Plain merging ignores parity; `union_parity` records that two
//! elements differ by a given bit and reports contradictions.

#[derive(Debug, Clone)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `x` and the parity of `x` relative to that root.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress from the top of the path down so each parity is final
        for &node in path.iter().rev() {
            let p = self.parent[node];
            if p != root {
                self.parity[node] ^= self.parity[p];
            }
            self.parent[node] = root;
        }
        (root, self.parity[x] && x != root)
    }

    pub fn root(&mut self, x: usize) -> usize {
        self.find(x).0
    }

    /// Records `parity(a) xor parity(b) == odd`. Returns `false` when this
    /// contradicts what is already known.
    pub fn union_parity(&mut self, a: usize, b: usize, odd: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb) == odd;
        }
        let (big, small) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.parity[small] = pa ^ pb ^ odd;
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
        true
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra != rb {
            // keep parities meaningful for callers that mix both kinds
            self.union_parity(a, b, pa ^ pb);
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.root(a) == self.root(b)
    }

    /// Dense class numbering: class ids are assigned in order of each
    /// class's lowest element.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut ids = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.root(x);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = next;
                next += 1;
            }
            ids[x] = id_of_root[r];
        }
        (ids, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_contradiction_detected() {
        let mut uf = ParityUnionFind::new(3);
        assert!(uf.union_parity(0, 1, true));
        assert!(uf.union_parity(1, 2, true));
        assert!(uf.union_parity(0, 2, false));
        assert!(!uf.union_parity(0, 2, true));
        let (r0, p0) = uf.find(0);
        let (r1, p1) = uf.find(1);
        assert_eq!(r0, r1);
        assert!(p0 ^ p1);
    }

    #[test]
    fn classes_numbered_by_lowest_member() {
        let mut uf = ParityUnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 2);
        let (ids, count) = uf.classes();
        assert_eq!(count, 3);
        assert_eq!(ids, vec![0, 1, 2, 2, 1]);
    }
}

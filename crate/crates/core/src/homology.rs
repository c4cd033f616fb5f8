//! Cellular chain complex of the quotient, Smith normal form and H1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::perm::{edge_index, EDGE_VERTICES, FACE_VERTICES};
use crate::skeleton::Skeleton;

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Diagonal form `d = u * m * v` with unimodular `u` and `v`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero invariant factors, each dividing the next, all positive.
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn from_i64(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Smith normal form by smallest-pivot elimination, with transformation
/// matrices recorded.
pub fn smith_normal_form(m: &IntMatrix, cols: usize) -> SmithForm {
    let rows = m.len();
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        for j in 0..d[src].len() {
            let x = &d[src][j] * k;
            d[dst][j] += x;
        }
        for j in 0..u[src].len() {
            let x = &u[src][j] * k;
            u[dst][j] += x;
        }
    };
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        for row in d.iter_mut() {
            let x = &row[src] * k;
            row[dst] += x;
        }
        for row in v.iter_mut() {
            let x = &row[src] * k;
            row[dst] += x;
        }
    };

    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(k, pi);
        u.swap(k, pi);
        for row in d.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.iter_mut() {
            row.swap(k, pj);
        }

        let mut clean = true;
        for i in (k + 1)..rows {
            if !d[i][k].is_zero() {
                let qt = -(d[i][k].div_floor(&d[k][k]));
                row_add(&mut d, &mut u, i, k, &qt);
                if !d[i][k].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (k + 1)..cols {
            if !d[k][j].is_zero() {
                let qt = -(d[k][j].div_floor(&d[k][k]));
                col_add(&mut d, &mut v, j, k, &qt);
                if !d[k][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            // a smaller remainder appeared; pick a new pivot
            continue;
        }
        // divisibility: the pivot must divide the rest of the block
        let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !(&d[i][j] % &d[k][k]).is_zero()));
        if let Some(i) = bad {
            row_add(&mut d, &mut u, k, i, &BigInt::one());
            continue;
        }
        if d[k][k].is_negative() {
            for x in d[k].iter_mut() {
                *x = -x.clone();
            }
            for x in u[k].iter_mut() {
                *x = -x.clone();
            }
        }
        k += 1;
    }
    let factors = (0..rows.min(cols))
        .map(|i| d[i][i].clone())
        .filter(|x| !x.is_zero())
        .collect();
    SmithForm { factors, u, v, d }
}

/// Checks `u * m * v == d`, `d` diagonal, and the divisibility chain.
pub fn verify_smith(m: &IntMatrix, snf: &SmithForm) -> bool {
    let prod = mat_mul(&mat_mul(&snf.u, m), &snf.v);
    if prod != snf.d {
        return false;
    }
    let diag_ok = prod
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()));
    let chain_ok = snf.factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
    diag_ok && chain_ok && snf.factors.iter().all(|x| x.is_positive())
}

/// Finitely generated abelian group `Z^rank + Z/d1 + ... + Z/dk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn cyclic(n: u64) -> Self {
        AbelianInvariants {
            rank: 0,
            torsion: if n > 1 { vec![n] } else { Vec::new() },
        }
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Boundary maps as integer matrices: `d2` has one row per face class and
/// one column per edge class, `d1` one row per edge class and one column per
/// vertex class. Composition `d2 * d1` is zero.
pub fn boundary_matrices(s: &Skeleton) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let (nv, ne) = (s.vertex_classes().len(), s.edge_classes().len());
    let mut d2 = Vec::new();
    for members in s.face_classes() {
        let (t, f) = members[0];
        let [a, b, c] = FACE_VERTICES[f];
        let mut row = vec![0i64; ne];
        for ((x, y), coef) in [((b, c), 1), ((a, c), -1), ((a, b), 1)] {
            let e = edge_index(x, y);
            let sign = if s.edge_flip(t, e) { -1 } else { 1 };
            row[s.edge_class(t, e)] += coef * sign;
        }
        d2.push(row);
    }
    let mut d1 = Vec::new();
    for class in s.edge_classes() {
        let (t, e) = class.members[0];
        let [a, b] = EDGE_VERTICES[e];
        let mut row = vec![0i64; nv];
        row[s.vertex_class(t, b)] += 1;
        row[s.vertex_class(t, a)] -= 1;
        d1.push(row);
    }
    (d2, d1)
}

/// Tetrahedron boundaries in face classes, one row per tetrahedron.
pub fn boundary3(s: &Skeleton) -> Vec<Vec<i64>> {
    let nf = s.face_classes().len();
    (0..s.tet_count())
        .map(|t| {
            let mut row = vec![0i64; nf];
            for f in 0..4 {
                let fc = s.face_class(t, f);
                let sign = if (3 - f) % 2 == 0 { 1 } else { -1 };
                row[fc] += sign * face_orientation(s, t, f);
            }
            row
        })
        .collect()
}

/// +1 if face `f` of `t` with ascending vertex order agrees with its class
/// representative, -1 otherwise.
fn face_orientation(s: &Skeleton, t: usize, f: usize) -> i64 {
    let (rt, rf) = s.face_classes()[s.face_class(t, f)][0];
    if (rt, rf) == (t, f) {
        return 1;
    }
    let g = s.triangulation().gluing(rt, rf).expect("closed");
    let img = FACE_VERTICES[rf].map(|v| g.perm.apply(v));
    let mut inversions = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if img[i] > img[j] {
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

fn to_u64(x: &BigInt) -> u64 {
    u64::try_from(x).expect("torsion fits in u64")
}

pub fn h1(s: &Skeleton) -> AbelianInvariants {
    let (d2, d1) = boundary_matrices(s);
    let ne = s.edge_classes().len();
    let nv = s.vertex_classes().len();
    let snf1 = smith_normal_form(&from_i64(&d1), nv);
    let snf2 = smith_normal_form(&from_i64(&d2), ne);
    let rank = ne - snf1.factors.len() - snf2.factors.len();
    let torsion = snf2.factors.iter().filter(|x| !x.is_one()).map(to_u64).collect();
    AbelianInvariants { rank, torsion }
}

/// Betti numbers over Z/2 in degrees 1 and 2, from Smith factors reduced
/// mod 2.
pub fn mod2_betti(s: &Skeleton) -> (usize, usize) {
    let (d2, d1) = boundary_matrices(s);
    let d3 = boundary3(s);
    let (nv, ne, nf) = (s.vertex_classes().len(), s.edge_classes().len(), s.face_classes().len());
    let rank2 = |m: &Vec<Vec<i64>>, cols: usize| {
        smith_normal_form(&from_i64(m), cols)
            .factors
            .iter()
            .filter(|x| x.is_odd())
            .count()
    };
    let (r1, r2, r3) = (rank2(&d1, nv), rank2(&d2, ne), rank2(&d3, nf));
    (ne - r1 - r2, nf - r2 - r3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn big(m: &[Vec<i64>]) -> IntMatrix {
        from_i64(m)
    }

    #[test]
    fn small_smith_forms() {
        let z = smith_normal_form(&big(&[vec![0, 0], vec![0, 0]]), 2);
        assert!(z.factors.is_empty());
        let m = big(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m, 2);
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(verify_smith(&m, &s));
        let m = big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m, 3);
        assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert!(verify_smith(&m, &s));
    }

    #[test]
    fn chain_complex_and_sphere_homology() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        let (d2, d1) = boundary_matrices(&s);
        assert_eq!(d2.len(), 8);
        let prod = mat_mul(&from_i64(&d2), &from_i64(&d1));
        assert!(prod.iter().flatten().all(Zero::is_zero));
        let d3 = boundary3(&s);
        let prod = mat_mul(&from_i64(&d3), &from_i64(&d2));
        assert!(prod.iter().flatten().all(Zero::is_zero));
        assert!(h1(&s).is_trivial());
        assert_eq!(mod2_betti(&s), (0, 0));
    }

    #[test]
    fn display() {
        assert_eq!(AbelianInvariants::trivial().to_string(), "0");
        assert_eq!(
            AbelianInvariants {
                rank: 1,
                torsion: vec![2, 2]
            }
            .to_string(),
            "Z + Z/2 + Z/2"
        );
    }
}

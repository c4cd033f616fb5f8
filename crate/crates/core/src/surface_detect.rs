//! Unions of two or three twisted squares in distinct tetrahedra: capped
//! surfaces, surgery surfaces, the square-pattern catalog, and the
//! hypothesis checks of the cluster theorem.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::Zero;

use crate::faces::{is_face_generic, is_face_pair_reduced};
use crate::perm::FACE_VERTICES;
use crate::skeleton::Skeleton;
use crate::squares::{
    all_squares, partition_type, square_cycle, PartitionType, TopologicalType, TwistedSquare, QUAD_PARTITIONS,
};
use crate::surface::{PolygonComplex, SurfaceSummary};
use crate::uf::ParityUnionFind;

/// One boundary slot: edge class and whether the slot runs along the class
/// direction.
pub type Slot = (usize, bool);

/// Slots of a square tuple with classes numbered by first occurrence and
/// directions relative to the first occurrence.
pub type Signature = Vec<(u8, bool)>;

pub fn normalize(slots: &[Slot]) -> Signature {
    let mut seen: Vec<Slot> = Vec::new();
    slots
        .iter()
        .map(|&(c, d)| {
            let k = match seen.iter().position(|x| x.0 == c) {
                Some(k) => k,
                None => {
                    seen.push((c, d));
                    seen.len() - 1
                }
            };
            (k as u8, d ^ seen[k].1)
        })
        .collect()
}

/// Rotation by `r` after an optional reflection. Reflection reverses the
/// traversal, so every slot direction flips.
fn transform(word: &[Slot], r: usize, reflect: bool) -> [Slot; 4] {
    let w: [Slot; 4] = if reflect {
        [3, 2, 1, 0].map(|i| (word[i].0, !word[i].1))
    } else {
        [word[0], word[1], word[2], word[3]]
    };
    [0, 1, 2, 3].map(|i| w[(i + r) % 4])
}

/// Least normalized signature over square reorderings, rotations and
/// reflections.
pub fn canonical_signature(slots: &[Slot]) -> Signature {
    assert!(slots.len() % 4 == 0, "slots come in fours");
    let images: Vec<[[Slot; 4]; 8]> = slots
        .chunks(4)
        .map(|w| std::array::from_fn(|op| transform(w, op % 4, op >= 4)))
        .collect();
    let mut search = Search {
        images,
        used: vec![false; slots.len() / 4],
        cur: Vec::new(),
        seen: Vec::new(),
        best: normalize(slots),
    };
    search.run();
    search.best
}

/// Depth-first search over square choices and symmetries, abandoning any
/// prefix already larger than the best word found.
struct Search {
    images: Vec<[[Slot; 4]; 8]>,
    used: Vec<bool>,
    cur: Signature,
    seen: Vec<Slot>,
    best: Signature,
}

impl Search {
    fn run(&mut self) {
        if self.cur.len() == self.best.len() {
            if self.cur < self.best {
                self.best = self.cur.clone();
            }
            return;
        }
        for sq in 0..self.used.len() {
            if self.used[sq] {
                continue;
            }
            self.used[sq] = true;
            for op in 0..8 {
                let (len, seen) = (self.cur.len(), self.seen.len());
                // the best word may have changed below this prefix
                let mut less = match self.cur[..].cmp(&self.best[..len]) {
                    std::cmp::Ordering::Greater => break,
                    ord => ord == std::cmp::Ordering::Less,
                };
                let mut pruned = false;
                for &(c, d) in &self.images[sq][op] {
                    let k = match self.seen.iter().position(|x| x.0 == c) {
                        Some(k) => k,
                        None => {
                            self.seen.push((c, d));
                            self.seen.len() - 1
                        }
                    };
                    let x = (k as u8, d ^ self.seen[k].1);
                    if !less {
                        match x.cmp(&self.best[self.cur.len()]) {
                            std::cmp::Ordering::Greater => {
                                pruned = true;
                                break;
                            }
                            std::cmp::Ordering::Less => less = true,
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                    self.cur.push(x);
                }
                if !pruned {
                    self.run();
                }
                self.cur.truncate(len);
                self.seen.truncate(seen);
            }
            self.used[sq] = false;
        }
    }
}

fn class_sizes(slots: &[Slot]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &(c, _) in slots {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

/// Two slots of one square that share a corner and an edge class must run
/// the same way round, or a face of the tetrahedron is a cone.
pub fn realizable_face_generic(word: &[Slot]) -> bool {
    (0..4).all(|i| {
        let (a, b) = (word[i], word[(i + 1) % 4]);
        a.0 != b.0 || a.1 == b.1
    })
}

pub fn square_types(slots: &[Slot]) -> Vec<PartitionType> {
    slots
        .chunks(4)
        .map(|w| partition_type([w[0].0, w[1].0, w[2].0, w[3].0]))
        .collect()
}

/// Surface obtained from a square tuple by capping at the vertex and, when
/// one edge class carries three or more slots, by surgery along that edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgerySurface {
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Slots on the surgered edge (0 for a capped surface).
    pub red_degree: usize,
    /// Two parallel essential curves joined by an annulus round the edge.
    pub annulus: bool,
    /// Order of the lens space summand certified by a disc complement.
    pub lens: Option<u32>,
}

impl SurgerySurface {
    pub fn non_orientable_genus(&self) -> Option<i64> {
        (!self.orientable).then_some(2 - self.euler_characteristic)
    }
}

/// Capped or surgery surface of the union of squares with the given slots.
/// `None` when a class has a single slot, more than one class needs
/// surgery, or the boundary curves do not bound a surface round the edge.
pub fn surgery_surface(slots: &[Slot]) -> Option<SurgerySurface> {
    let k = slots.len() / 4;
    let sizes = class_sizes(slots);
    if sizes.values().any(|&n| n < 2) {
        return None;
    }
    let red: Vec<usize> = sizes.iter().filter(|(_, &n)| n >= 3).map(|(&c, _)| c).collect();
    if red.len() > 1 {
        return None;
    }
    let mut pc = PolygonComplex::new();
    for _ in 0..k {
        pc.add_polygon(4);
    }
    let mut partner = vec![usize::MAX; slots.len()];
    for (&c, &n) in &sizes {
        if n == 2 {
            let pair: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].0 == c).collect();
            let (a, b) = (pair[0], pair[1]);
            partner[a] = b;
            partner[b] = a;
            pc.glue((a / 4, a % 4), (b / 4, b % 4), slots[a].1 == slots[b].1);
        }
    }
    let Some(&red) = red.first() else {
        let sum = pc.summary();
        return Some(SurgerySurface {
            euler_characteristic: sum.euler_characteristic,
            orientable: sum.orientable,
            red_degree: 0,
            annulus: false,
            lens: None,
        });
    };

    // complement of the edge neighbourhood: square interiors joined by
    // strips along the other classes
    let nonred = sizes.values().filter(|&&n| n == 2).count();
    let chi_x = k as i64 - nonred as i64;
    let mut uf = ParityUnionFind::new(k);
    let mut orientable_x = true;
    for a in 0..slots.len() {
        let b = partner[a];
        if b != usize::MAX && a < b && !uf.union_parity(a / 4, b / 4, slots[a].1 == slots[b].1) {
            orientable_x = false;
        }
    }
    let (_, pieces) = uf.classes();
    let eps: Vec<i64> = (0..k).map(|p| if uf.find(p).1 { -1 } else { 1 }).collect();
    let cycles = boundary_cycles(slots, &partner, red, &eps);
    let mut chi = chi_x;
    let mut orientable = orientable_x;
    let essential: Vec<&(i64, i64)> = cycles.iter().filter(|c| c.0 != 0).collect();
    chi += (cycles.len() - essential.len()) as i64;
    let mut annulus = false;
    let mut lens = None;
    match essential.as_slice() {
        [] => {}
        [(class, _)] => {
            let m = class.unsigned_abs();
            if m % 2 == 1 {
                return None;
            }
            let n = (m / 2) as i64;
            chi += 1 - n;
            if n >= 1 {
                orientable = false;
            }
            if chi_x == 1 && pieces == 1 && cycles.len() == 1 {
                lens = Some(m as u32);
            }
        }
        [(c1, i1), (c2, i2)] if c1.abs() == c2.abs() => {
            annulus = true;
            // parallel curves; the annulus keeps orientations only if the
            // induced boundary orientations are opposite
            if orientable_x && i1 == i2 {
                orientable = false;
            }
        }
        _ => return None,
    }
    Some(SurgerySurface {
        euler_characteristic: chi,
        orientable,
        red_degree: sizes[&red],
        annulus,
        lens,
    })
}

/// Boundary curves of the complement of the surgered edge, each with its
/// longitude count for one traversal direction and its count in the
/// orientation induced by the polygon signs.
fn boundary_cycles(slots: &[Slot], partner: &[usize], red: usize, eps: &[i64]) -> Vec<(i64, i64)> {
    let n = slots.len();
    // nodes: corners 0..n (corner i%4 of polygon i/4), red sides n..2n
    let corner = |i: usize| 4 * (i / 4) + (i + 1) % 4;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        if slots[i].0 == red {
            edges.push((i, n + i));
            edges.push((n + i, corner(i)));
        } else if partner[i] > i {
            let j = partner[i];
            if slots[i].1 == slots[j].1 {
                edges.push((i, j));
                edges.push((corner(i), corner(j)));
            } else {
                edges.push((i, corner(j)));
                edges.push((corner(i), j));
            }
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(e);
        adj[b].push(e);
    }
    let other = |e: usize, v: usize| if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
    let mut used = vec![false; edges.len()];
    let mut out = Vec::new();
    for first in 0..edges.len() {
        if used[first] {
            continue;
        }
        let (mut class, mut induced) = (0i64, 0i64);
        let (mut e, mut cur) = (first, edges[first].0);
        loop {
            used[e] = true;
            let next = other(e, cur);
            if next >= n {
                let i = next - n;
                let dir = if slots[i].1 { 1 } else { -1 };
                class += if cur == i { dir } else { -dir };
                induced += eps[i / 4] * dir;
            }
            cur = next;
            e = if adj[cur][0] == e { adj[cur][1] } else { adj[cur][0] };
            if e == first {
                break;
            }
        }
        out.push((class, induced));
    }
    out
}

/// Whether the slot sums of the squares balance for weights that are all
/// nonzero, corner signs alternating round each square.
pub fn balanced(slots: &[Slot]) -> bool {
    let k = slots.len() / 4;
    let mut rows: BTreeMap<usize, Vec<Ratio<i64>>> = BTreeMap::new();
    for (i, &(c, _)) in slots.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        rows.entry(c).or_insert_with(|| vec![Ratio::zero(); k])[i / 4] += sign;
    }
    let mut m: Vec<Vec<Ratio<i64>>> = rows.into_values().collect();
    // reduced row echelon form; the kernel is spanned by one vector per
    // free column
    let mut pivots = Vec::new();
    for c in 0..k {
        let r = pivots.len();
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..k {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
    }
    // a subspace holds a vector with no zero entry iff no coordinate
    // vanishes on all of it
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    (0..k).all(|j| {
        if free.contains(&j) {
            return true;
        }
        let r = pivots.iter().position(|&p| p == j).expect("pivot column");
        free.iter().any(|&f| !m[r][f].is_zero())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Source {
    Pair,
    Triple,
}

impl Source {
    pub fn square_count(self) -> usize {
        match self {
            Source::Pair => 2,
            Source::Triple => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Source::Pair => "pair",
            Source::Triple => "triple",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    P,
    P2,
    P3,
    Klein,
    Lens(u32),
    ProjectivePlane,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::P => write!(f, "P"),
            Tag::P2 => write!(f, "P2"),
            Tag::P3 => write!(f, "P3"),
            Tag::Klein => write!(f, "KLEIN"),
            Tag::Lens(n) => write!(f, "LENS({n})"),
            Tag::ProjectivePlane => write!(f, "PROJECTIVE_PLANE"),
        }
    }
}

impl Tag {
    fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "P" => Tag::P,
            "P2" => Tag::P2,
            "P3" => Tag::P3,
            "KLEIN" => Tag::Klein,
            "PROJECTIVE_PLANE" => Tag::ProjectivePlane,
            _ => {
                let n = s.strip_prefix("LENS(")?.strip_suffix(')')?.parse().ok()?;
                Tag::Lens(n)
            }
        })
    }
}

/// Square type families admitted in catalog entries.
pub const PAIR_FAMILIES: [&str; 4] = ["BB", "CC", "CE", "EE"];
pub const TRIPLE_FAMILIES: [&str; 3] = ["AAA", "AAC", "ABE"];

pub fn family_of(types: &[PartitionType]) -> String {
    let mut letters: Vec<char> = types.iter().map(|t| t.letter()).collect();
    letters.sort_unstable();
    letters.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub source: Source,
    pub id: String,
    pub slots: Vec<Slot>,
    pub tags: Vec<Tag>,
}

impl CatalogEntry {
    pub fn signature(&self) -> Signature {
        canonical_signature(&self.slots)
    }

    pub fn family(&self) -> String {
        family_of(&square_types(&self.slots))
    }

    fn to_line(&self) -> String {
        let squares: Vec<&[Slot]> = self.slots.chunks(4).collect();
        let part: Vec<String> = squares
            .iter()
            .map(|w| w.iter().map(|s| s.0.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        let bits: Vec<String> = squares
            .iter()
            .map(|w| w.iter().map(|s| if s.1 { '1' } else { '0' }).collect())
            .collect();
        let tags: Vec<String> = self.tags.iter().map(Tag::to_string).collect();
        format!(
            "{} {} {} {} {} all {}",
            self.source.name(),
            self.id,
            self.source.square_count(),
            part.join("/"),
            bits.join("/"),
            tags.join(",")
        )
    }
}

/// Square identification patterns whose presence certifies a surface or a
/// lens space summand.
#[derive(Debug, Clone, Default)]
pub struct PatternCatalog {
    pub entries: Vec<CatalogEntry>,
    index: HashMap<Signature, usize>,
}

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.txt");

impl PatternCatalog {
    pub fn builtin() -> PatternCatalog {
        PatternCatalog::parse(BUILTIN_CATALOG).expect("shipped catalog is valid")
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Result<PatternCatalog> {
        let mut index = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if let Some(j) = index.insert(e.signature(), i) {
                return Err(Error::Catalog {
                    line: i + 1,
                    msg: format!("entry {} repeats entry {}", e.id, entries[j].id),
                });
            }
        }
        Ok(PatternCatalog { entries, index })
    }

    /// Parses the line format
    /// `source id squares partition orientation distinctness tags`.
    pub fn parse(text: &str) -> Result<PatternCatalog> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        let mut index: HashMap<Signature, usize> = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Catalog { line: n + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [source, id, count, part, bits, distinct, tags] = fields[..] else {
                return Err(err(format!("expected 7 fields, found {}", fields.len())));
            };
            let source = match source {
                "pair" => Source::Pair,
                "triple" => Source::Triple,
                other => return Err(err(format!("unknown source {other:?}"))),
            };
            let count: usize = count.parse().map_err(|_| err(format!("bad square count {count:?}")))?;
            if count != source.square_count() {
                return Err(err(format!(
                    "{} entries use {} squares, not {count}",
                    source.name(),
                    source.square_count()
                )));
            }
            let part: Vec<&str> = part.split('/').collect();
            let bits: Vec<&str> = bits.split('/').collect();
            if part.len() != count || bits.len() != count {
                return Err(err(format!("expected {count} squares in partition and orientation")));
            }
            let mut slots = Vec::new();
            for (p, b) in part.iter().zip(&bits) {
                let labels: Vec<usize> = p
                    .split(',')
                    .map(|x| x.parse().map_err(|_| err(format!("bad class label {x:?}"))))
                    .collect::<Result<_>>()?;
                let dirs: Vec<bool> = b
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(err(format!("bad orientation bit {c:?}"))),
                    })
                    .collect::<Result<_>>()?;
                if labels.len() != 4 || dirs.len() != 4 {
                    return Err(err("each square has four slots".into()));
                }
                slots.extend(labels.into_iter().zip(dirs));
            }
            if slots.iter().any(|s| s.0 >= 4 * count) {
                return Err(err(format!("class label out of range 0..{}", 4 * count)));
            }
            if distinct != "all" {
                return Err(err(format!("unsupported distinctness {distinct:?}")));
            }
            if class_sizes(&slots).values().any(|&n| n < 2) {
                return Err(err("every class needs at least two slots".into()));
            }
            let tags: Vec<Tag> = tags
                .split(',')
                .map(|t| Tag::parse(t).ok_or_else(|| err(format!("unknown tag {t:?}"))))
                .collect::<Result<_>>()?;
            let entry = CatalogEntry {
                source,
                id: id.to_string(),
                slots,
                tags,
            };
            let family = entry.family();
            let allowed: &[&str] = match source {
                Source::Pair => &PAIR_FAMILIES,
                Source::Triple => &TRIPLE_FAMILIES,
            };
            if !allowed.contains(&family.as_str()) {
                return Err(err(format!(
                    "square types {family} not allowed for {} entries",
                    source.name()
                )));
            }
            if let Some(&j) = index.get(&entry.signature()) {
                return Err(err(format!("entry {id} is isomorphic to entry {}", entries[j].id)));
            }
            index.insert(entry.signature(), entries.len());
            entries.push(entry);
        }
        Ok(PatternCatalog { entries, index })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# source id squares partition orientation distinctness tags\n");
        for e in &self.entries {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }

    pub fn lookup(&self, sig: &Signature) -> Option<&CatalogEntry> {
        self.index.get(sig).map(|&i| &self.entries[i])
    }

    fn families(&self, source: Source) -> Vec<String> {
        let mut f: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.source == source)
            .map(|e| e.family())
            .collect();
        f.sort();
        f.dedup();
        f
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogMatch {
    pub id: String,
    pub source: Source,
    /// `(tet, quad)` of each square, in tetrahedron order.
    pub squares: Vec<(usize, usize)>,
    pub tags: Vec<Tag>,
}

fn slots_of(squares: &[&TwistedSquare]) -> Vec<Slot> {
    squares.iter().flat_map(|s| s.boundary).collect()
}

/// Catalog hits among square pairs and triples in pairwise distinct
/// tetrahedra, sorted by entry and squares.
pub fn match_catalog(s: &Skeleton, catalog: &PatternCatalog) -> Vec<CatalogMatch> {
    let squares = all_squares(s);
    let mut out = Vec::new();
    let mut hit = |tuple: &[&TwistedSquare], source: Source| {
        let slots = slots_of(tuple);
        if class_sizes(&slots).values().any(|&n| n < 2) {
            return;
        }
        if let Some(e) = catalog.lookup(&canonical_signature(&slots)) {
            if e.source == source {
                out.push(CatalogMatch {
                    id: e.id.clone(),
                    source,
                    squares: tuple.iter().map(|x| (x.tet, x.quad)).collect(),
                    tags: e.tags.clone(),
                });
            }
        }
    };
    let pair_families = catalog.families(Source::Pair);
    let triple_families = catalog.families(Source::Triple);
    let fam = |xs: &[&TwistedSquare]| family_of(&xs.iter().map(|x| x.partition_type).collect::<Vec<_>>());
    for (i, a) in squares.iter().enumerate() {
        for (j, b) in squares.iter().enumerate().skip(i + 1) {
            if a.tet == b.tet {
                continue;
            }
            if pair_families.contains(&fam(&[a, b])) {
                hit(&[a, b], Source::Pair);
            }
            for c in squares.iter().skip(j + 1) {
                if c.tet == a.tet || c.tet == b.tet {
                    continue;
                }
                if triple_families.contains(&fam(&[a, b, c])) {
                    hit(&[a, b, c], Source::Triple);
                }
            }
        }
    }
    let order: HashMap<&str, usize> = catalog
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str(), i))
        .collect();
    out.sort_by(|x, y| (order[x.id.as_str()], &x.squares).cmp(&(order[y.id.as_str()], &y.squares)));
    out
}

/// Two squares in distinct tetrahedra whose eight slots fall into four
/// edge classes, each holding one slot of each square. Pairs where a square
/// meets itself along an edge are left to the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSquarePatch {
    pub squares: [TwistedSquare; 2],
    /// Slot pairs (slots 0..4 on the first square, 4..8 on the second) and
    /// whether the two slots run the same way along their class.
    pub slot_pairing: Vec<(usize, usize, bool)>,
    pub resolved_surface: SurfaceSummary,
    pub pinch_count: usize,
}

pub fn capped_two_square_surfaces(s: &Skeleton) -> Vec<TwoSquarePatch> {
    let squares = all_squares(s);
    let mut out = Vec::new();
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            if a.tet == b.tet {
                continue;
            }
            let slots = slots_of(&[a, b]);
            let mut first: Vec<usize> = slots[..4].iter().map(|x| x.0).collect();
            let mut second: Vec<usize> = slots[4..].iter().map(|x| x.0).collect();
            first.sort_unstable();
            second.sort_unstable();
            if first != second || first.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut pc = PolygonComplex::new();
            pc.add_polygon(4);
            pc.add_polygon(4);
            let mut slot_pairing = Vec::new();
            for x in 0..8 {
                if let Some(y) = ((x + 1)..8).find(|&y| slots[y].0 == slots[x].0) {
                    let same = slots[x].1 == slots[y].1;
                    pc.glue((x / 4, x % 4), (y / 4, y % 4), same);
                    slot_pairing.push((x, y, same));
                }
            }
            let resolved_surface = pc.summary();
            let (ids, count) = pc.vertex_classes();
            let mut images = vec![Vec::new(); count];
            for (corner, &id) in ids.iter().enumerate() {
                let sq = if corner < 4 { a } else { b };
                let v = square_cycle(sq.quad)[corner % 4];
                images[id].push(s.vertex_class(sq.tet, v));
            }
            let mut targets: Vec<usize> = images.iter().map(|v| v[0]).collect();
            targets.sort_unstable();
            targets.dedup();
            out.push(TwoSquarePatch {
                squares: [*a, *b],
                slot_pairing,
                resolved_surface,
                pinch_count: count - targets.len(),
            });
        }
    }
    out
}

/// Side of face `f` relative to the square of `quad`: 0 when the face holds
/// the edge joining the first vertex pair of the quad partition.
fn face_side(quad: usize, f: usize) -> bool {
    let [a, b, _, _] = QUAD_PARTITIONS[quad];
    let fv = FACE_VERTICES[f];
    !(fv.contains(&a) && fv.contains(&b))
}

/// True when some loop crosses the patch an odd number of times. Each
/// tetrahedron holding a patch square is split in two; face pairings join
/// sides without crossing.
pub fn is_nonseparating(s: &Skeleton, patch: &TwoSquarePatch) -> Result<bool> {
    if !patch.resolved_surface.closed {
        return Err(Error::PatchNotClosed);
    }
    let n = s.tet_count();
    let quad_in = |t: usize| patch.squares.iter().find(|sq| sq.tet == t).map(|sq| sq.quad);
    let node = |t: usize, f: usize| match quad_in(t) {
        Some(q) => 2 * t + face_side(q, f) as usize,
        None => 2 * t,
    };
    let mut uf = ParityUnionFind::new(2 * n);
    let mut odd = false;
    for sq in &patch.squares {
        odd |= !uf.union_parity(2 * sq.tet, 2 * sq.tet + 1, true);
    }
    let tri = s.triangulation();
    for t in 0..n {
        for f in 0..4 {
            let g = tri.gluing(t, f).expect("closed");
            odd |= !uf.union_parity(node(t, f), node(g.tet, g.target_face(f)), false);
        }
    }
    Ok(odd)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl HypothesisCheck {
    fn from(witnesses: Vec<String>) -> Self {
        HypothesisCheck {
            pass: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// The five hypotheses under which a face-pair-reduced, face-generic
/// triangulation with at least three tetrahedra has no cluster of three
/// 2-quad type solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterTheoremReport {
    /// No Klein squares.
    pub h1: HypothesisCheck,
    /// No catalogued square pair.
    pub h2: HypothesisCheck,
    /// No catalogued square triple.
    pub h3: HypothesisCheck,
    /// No capped 2-square surface is a non-separating torus.
    pub h4: HypothesisCheck,
    /// No capped 2-square surface is non-orientable.
    pub h5: HypothesisCheck,
    pub applicable: bool,
    pub conclusion: String,
}

impl ClusterTheoremReport {
    pub fn all_pass(&self) -> bool {
        [&self.h1, &self.h2, &self.h3, &self.h4, &self.h5]
            .iter()
            .all(|h| h.pass)
    }

    pub fn certifies_cluster_free(&self) -> bool {
        self.applicable && self.all_pass()
    }
}

fn describe(sq: &TwistedSquare) -> String {
    format!("tet {} quad {} ({})", sq.tet, sq.quad, sq.partition_type.letter())
}

pub fn check_cluster_theorem(s: &Skeleton, catalog: &PatternCatalog) -> Result<ClusterTheoremReport> {
    if !s.is_orientable() {
        return Err(Error::NonOrientable);
    }
    let h1 = HypothesisCheck::from(
        all_squares(s)
            .iter()
            .filter(|sq| sq.topological_type == TopologicalType::Klein)
            .map(|sq| format!("{} is a Klein square", describe(sq)))
            .collect(),
    );
    let matches = match_catalog(s, catalog);
    let show = |m: &CatalogMatch| {
        let sq: Vec<String> = m.squares.iter().map(|(t, q)| format!("{t}:{q}")).collect();
        let tags: Vec<String> = m.tags.iter().map(Tag::to_string).collect();
        format!(
            "{} {} on squares {} [{}]",
            m.source.name(),
            m.id,
            sq.join(" "),
            tags.join(",")
        )
    };
    let h2 = HypothesisCheck::from(matches.iter().filter(|m| m.source == Source::Pair).map(show).collect());
    let h3 = HypothesisCheck::from(
        matches
            .iter()
            .filter(|m| m.source == Source::Triple)
            .map(show)
            .collect(),
    );
    let patches = capped_two_square_surfaces(s);
    let mut torus = Vec::new();
    let mut nonorientable = Vec::new();
    for p in &patches {
        let sum = &p.resolved_surface;
        let label = format!("{} + {}", describe(&p.squares[0]), describe(&p.squares[1]));
        if !sum.orientable {
            nonorientable.push(format!("{label}: {}", sum.name()));
        } else if sum.euler_characteristic == 0 && is_nonseparating(s, p)? {
            torus.push(format!("{label}: non-separating torus"));
        }
    }
    let h4 = HypothesisCheck::from(torus);
    let h5 = HypothesisCheck::from(nonorientable);
    let generic = is_face_generic(s).value;
    let reduced = is_face_pair_reduced(s).value;
    let large = s.tet_count() >= 3;
    let applicable = generic && reduced && large;
    let failing: Vec<&str> = [("h1", &h1), ("h2", &h2), ("h3", &h3), ("h4", &h4), ("h5", &h5)]
        .iter()
        .filter(|(_, h)| !h.pass)
        .map(|(n, _)| *n)
        .collect();
    let conclusion = if !applicable {
        let mut why = Vec::new();
        if !generic {
            why.push("not face-generic");
        }
        if !reduced {
            why.push("not face-pair-reduced");
        }
        if !large {
            why.push("fewer than three tetrahedra");
        }
        format!("not applicable: {}", why.join(", "))
    } else if failing.is_empty() {
        "no cluster of three 2-quad type solutions".to_string()
    } else {
        format!("inconclusive: hypotheses {} fail", failing.join(", "))
    };
    Ok(ClusterTheoremReport {
        h1,
        h2,
        h3,
        h4,
        h5,
        applicable,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(word: &[(usize, bool)]) -> Vec<Slot> {
        word.to_vec()
    }

    #[test]
    fn signature_symmetries() {
        let a = w(&[
            (0, false),
            (0, false),
            (1, false),
            (2, false),
            (3, false),
            (1, true),
            (2, false),
            (3, true),
        ]);
        let c = canonical_signature(&a);
        assert_eq!(
            canonical_signature(&c.iter().map(|&(x, d)| (x as usize, d)).collect::<Vec<_>>()),
            c
        );
        let mut swapped = a[4..].to_vec();
        swapped.extend_from_slice(&a[..4]);
        assert_eq!(canonical_signature(&swapped), c);
        let mut rotated = transform(&a[..4], 1, true).to_vec();
        rotated.extend(transform(&a[4..], 3, false));
        assert_eq!(canonical_signature(&rotated), c);
        // renaming and reversing a class changes nothing
        let renamed: Vec<Slot> = a.iter().map(|&(x, d)| (9 - x, if x == 1 { !d } else { d })).collect();
        assert_eq!(canonical_signature(&renamed), c);
    }

    #[test]
    fn capped_square_words() {
        // two squares a b c d and d^-1 c^-1 b^-1 a^-1: a sphere
        let sphere = w(&[
            (0, true),
            (1, true),
            (2, true),
            (3, true),
            (3, false),
            (2, false),
            (1, false),
            (0, false),
        ]);
        let s = surgery_surface(&sphere).unwrap();
        assert_eq!((s.euler_characteristic, s.orientable), (2, true));
        // one square a b a^-1 b^-1 is a torus; doubled with c d c^-1 d^-1
        // the union is disconnected, which the caller filters out
        let open = w(&[
            (0, true),
            (1, true),
            (2, true),
            (3, true),
            (0, true),
            (1, true),
            (2, true),
            (4, true),
        ]);
        assert!(surgery_surface(&open).is_none());
    }

    #[test]
    fn edge_curve_counts() {
        // a single type G square a a a a all one way is a Klein bottle
        // after surgery: a 4-curve round the edge
        let g = w(&[(0, true), (0, true), (0, true), (0, true)]);
        let s = surgery_surface(&g).unwrap();
        assert_eq!((s.euler_characteristic, s.orientable, s.lens), (0, false, Some(4)));
    }

    #[test]
    fn balance() {
        // type A squares matching edge for edge with opposite signs
        let aa = w(&[
            (0, false),
            (1, false),
            (2, false),
            (3, false),
            (1, false),
            (0, false),
            (3, false),
            (2, false),
        ]);
        assert!(balanced(&aa));
        let bad = w(&[
            (0, false),
            (1, false),
            (2, false),
            (3, false),
            (0, false),
            (1, false),
            (2, false),
            (4, false),
        ]);
        assert!(!balanced(&bad));
    }

    #[test]
    fn shipped_catalog_loads_and_round_trips() {
        let cat = PatternCatalog::builtin();
        assert_eq!(cat.entries.iter().filter(|e| e.source == Source::Pair).count(), 13);
        let again = PatternCatalog::parse(&cat.to_text()).unwrap();
        assert_eq!(again.entries, cat.entries);
    }

    #[test]
    fn catalog_errors() {
        for bad in [
            "pair x 3 0,0,1,2/0,0,1,2 0000/0000 all P",
            "pair x 2 0,0,1/0,0,1,2 0000/0000 all P",
            "pair x 2 0,0,1,2/0,0,1,2 0000/0000 all Q",
            "pair x 2 0,1,2,3/0,1,2,3 0000/0000 all P",
            "pair x 2 0,0,1,99/0,0,1,2 0000/0000 all P",
            "pair x 2 0,0,1,2/0,0,1,2 0000/0000 all",
        ] {
            assert!(
                matches!(PatternCatalog::parse(bad), Err(Error::Catalog { line: 1, .. })),
                "{bad}"
            );
        }
        let dup = "pair x 2 0,0,1,2/0,0,1,2 0000/0000 all P\npair y 2 0,0,2,1/0,0,2,1 0000/0000 all P\n";
        assert!(matches!(
            PatternCatalog::parse(dup),
            Err(Error::Catalog { line: 2, .. })
        ));
    }

    #[test]
    fn four_tet_sphere_hypotheses() {
        let s = Skeleton::build(&fixtures::four_tet_sphere()).unwrap();
        let r = check_cluster_theorem(&s, &PatternCatalog::builtin()).unwrap();
        assert!(!r.applicable);
        for p in capped_two_square_surfaces(&s) {
            let chi = p.resolved_surface.euler_characteristic;
            assert!((-1..=2).contains(&chi));
        }
    }

    #[test]
    fn simplicial_sphere_has_no_capped_pairs() {
        // distinct edges everywhere and no two tetrahedra share four edges
        let s = Skeleton::build(&fixtures::boundary_of_4_simplex()).unwrap();
        assert!(capped_two_square_surfaces(&s).is_empty());
        let r = check_cluster_theorem(&s, &PatternCatalog::builtin()).unwrap();
        assert!(r.applicable && r.all_pass());
    }
}

//! Raw face-pairing data and its two text encodings.
//!
//! Table format, one line per tetrahedron:
//!
//! ```text
//! 0: 2 (231) 1 (321) 0 (312) 0 (230)
//! ```
//!
//! The four entries belong to faces 012, 013, 023 and 123. Each names the
//! target tetrahedron and the images of the source face's vertices in
//! ascending order; `-` marks an unglued face and `#` starts a comment.
//!
//! JSON format: `{"tetrahedra": n, "gluings": [[null | [u, [p, q, r]], ...4], ...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Position, Result};
use crate::perm::{face_opposite, face_opposite_vertex, Perm4, FACE_VERTICES};

/// Which text grammar an input uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

impl Format {
    /// Guess the format from the first non-blank character.
    pub fn sniff(text: &str) -> Format {
        match text.trim_start().chars().next() {
            Some('{') => Format::Json,
            _ => Format::Table,
        }
    }
}

/// One side of a face pairing: the target tetrahedron and the full vertex
/// permutation from the source tetrahedron to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

impl Gluing {
    /// The face of the target tetrahedron this gluing lands on, given the
    /// source face.
    pub fn target_face(&self, source_face: usize) -> usize {
        face_opposite_vertex(self.perm.apply(face_opposite(source_face)))
    }
}

/// Tetrahedra with (possibly partial) face pairings. Equality and hashing
/// look at the gluings only, not at source positions.
#[derive(Debug, Clone)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
    positions: Vec<Option<Position>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.gluings == other.gluings
    }
}

impl Eq for Triangulation {}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.gluings.hash(state);
    }
}

pub fn face_name(f: usize) -> String {
    FACE_VERTICES[f].iter().map(|v| v.to_string()).collect()
}

impl Triangulation {
    /// Builds and validates a triangulation from gluing data.
    pub fn new(gluings: Vec<[Option<Gluing>; 4]>) -> Result<Self> {
        let positions = vec![None; gluings.len()];
        let t = Triangulation { gluings, positions };
        t.validate()?;
        Ok(t)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    /// Source position of the line defining `tet`, when parsed from text.
    pub fn position(&self, tet: usize) -> Option<Position> {
        self.positions.get(tet).copied().flatten()
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|g| g.iter().all(Option::is_some))
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Table => Self::parse_table(text),
            Format::Json => Self::parse_json(text),
        }
    }

    pub fn parse_table(text: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Position, [Option<(usize, [usize; 3])>; 4])> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let mut lexer = Lexer::new(line, lineno + 1);
            let start = lexer.position();
            let tet = lexer.number()?;
            lexer.expect(':')?;
            let mut entries = [None; 4];
            for entry in entries.iter_mut() {
                lexer.skip_ws();
                if lexer.peek() == Some('-') {
                    lexer.bump();
                    continue;
                }
                let target = lexer.number()?;
                lexer.expect('(')?;
                let mut triple = [0usize; 3];
                for slot in triple.iter_mut() {
                    lexer.skip_ws();
                    let pos = lexer.position();
                    match lexer.bump() {
                        Some(c @ '0'..='3') => *slot = c as usize - '0' as usize,
                        Some(c) => return Err(syntax(pos, format!("expected vertex digit 0-3, found {c:?}"))),
                        None => return Err(syntax(pos, "expected vertex digit 0-3")),
                    }
                }
                lexer.expect(')')?;
                *entry = Some((target, triple));
            }
            lexer.skip_ws();
            if let Some(c) = lexer.peek() {
                return Err(syntax(lexer.position(), format!("unexpected trailing {c:?}")));
            }
            rows.push((tet, start, entries));
        }
        if rows.is_empty() {
            return Err(syntax(Position { line: 1, column: 1 }, "no tetrahedra"));
        }
        let n = rows.len();
        let mut slots: Vec<Option<(Position, [Option<(usize, [usize; 3])>; 4])>> = vec![None; n];
        for (tet, pos, entries) in rows {
            if tet >= n {
                return Err(syntax(
                    pos,
                    format!("tetrahedron index {tet} out of range for {n} rows"),
                ));
            }
            if slots[tet].is_some() {
                return Err(syntax(pos, format!("tetrahedron {tet} defined twice")));
            }
            slots[tet] = Some((pos, entries));
        }
        let mut gluings = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        for (tet, slot) in slots.into_iter().enumerate() {
            let (pos, entries) = slot.expect("all indices covered");
            let mut row = [None; 4];
            for (f, entry) in entries.iter().enumerate() {
                if let Some((target, triple)) = *entry {
                    row[f] = Some(make_gluing(tet, f, target, triple, n, Some(pos))?);
                }
            }
            gluings.push(row);
            positions.push(Some(pos));
        }
        let t = Triangulation { gluings, positions };
        t.validate()?;
        Ok(t)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            syntax(
                Position {
                    line: e.line().max(1),
                    column: e.column().max(1),
                },
                e.to_string(),
            )
        })?;
        let origin = Position { line: 1, column: 1 };
        let obj = value
            .as_object()
            .ok_or_else(|| syntax(origin, "expected a JSON object"))?;
        let n = obj
            .get("tetrahedra")
            .and_then(Value::as_u64)
            .ok_or_else(|| syntax(origin, "missing integer field \"tetrahedra\""))? as usize;
        if n == 0 {
            return Err(syntax(origin, "no tetrahedra"));
        }
        let rows = obj
            .get("gluings")
            .and_then(Value::as_array)
            .ok_or_else(|| syntax(origin, "missing array field \"gluings\""))?;
        if rows.len() != n {
            return Err(syntax(
                origin,
                format!("expected {n} gluing rows, found {}", rows.len()),
            ));
        }
        let mut gluings = Vec::with_capacity(n);
        for (tet, row) in rows.iter().enumerate() {
            let faces = row
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| syntax(origin, format!("gluings[{tet}] must be an array of 4 entries")))?;
            let mut out = [None; 4];
            for (f, entry) in faces.iter().enumerate() {
                if entry.is_null() {
                    continue;
                }
                let bad = || syntax(origin, format!("gluings[{tet}][{f}] must be null or [u, [p, q, r]]"));
                let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let target = pair[0].as_u64().ok_or_else(bad)? as usize;
                let trip = pair[1].as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
                let mut triple = [0usize; 3];
                for (slot, v) in triple.iter_mut().zip(trip) {
                    let v = v.as_u64().filter(|&v| v < 4).ok_or_else(bad)?;
                    *slot = v as usize;
                }
                out[f] = Some(make_gluing(tet, f, target, triple, n, None)?);
            }
            gluings.push(out);
        }
        let t = Triangulation {
            positions: vec![None; n],
            gluings,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let n = self.gluings.len();
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                if g.tet >= n {
                    return Err(Error::IndexOutOfRange {
                        tet: t,
                        face: face_name(f),
                        target: g.tet,
                        count: n,
                    });
                }
                let tf = g.target_face(f);
                if g.tet == t && tf == f {
                    return Err(Error::SelfGluing {
                        tet: t,
                        face: face_name(f),
                    });
                }
                match self.gluings[g.tet][tf] {
                    None => {
                        return Err(Error::Involution {
                            tet: t,
                            face: face_name(f),
                            msg: format!("partner {} face {} is unglued", g.tet, face_name(tf)),
                        })
                    }
                    Some(back) => {
                        if back.tet != t || back.target_face(tf) != f || back.perm != g.perm.inverse() {
                            return Err(Error::Involution {
                                tet: t,
                                face: face_name(f),
                                msg: format!(
                                    "partner {} face {} does not map back by the inverse",
                                    g.tet,
                                    face_name(tf)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Renders the table format. Parsing the output gives back `self`
    /// (positions aside).
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (t, row) in self.gluings.iter().enumerate() {
            out.push_str(&format!("{t}:"));
            for (f, g) in row.iter().enumerate() {
                match g {
                    None => out.push_str(" -"),
                    Some(g) => {
                        let [a, b, c] = g.perm.face_triple(f);
                        out.push_str(&format!(" {} ({a}{b}{c})", g.tet));
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .gluings
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .enumerate()
                        .map(|(f, g)| match g {
                            None => Value::Null,
                            Some(g) => serde_json::json!([g.tet, g.perm.face_triple(f)]),
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "tetrahedra": self.tet_count(), "gluings": rows }).to_string()
    }

    /// Relabels tetrahedra and, within each tetrahedron, vertices.
    /// Old tetrahedron `t` becomes `tet_map[t]` with vertex `v` renamed
    /// `vertex_maps[t].apply(v)`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.tet_count();
        let mut gluings = vec![[None; 4]; n];
        let mut positions = vec![None; n];
        for t in 0..n {
            let nt = tet_map[t];
            positions[nt] = self.positions[t];
            for f in 0..4 {
                if let Some(g) = self.gluings[t][f] {
                    // new perm: new_src -> old_src -> old_dst -> new_dst
                    let perm = vertex_maps[g.tet].compose(g.perm).compose(vertex_maps[t].inverse());
                    let nf = face_opposite_vertex(vertex_maps[t].apply(face_opposite(f)));
                    gluings[nt][nf] = Some(Gluing {
                        tet: tet_map[g.tet],
                        perm,
                    });
                }
            }
        }
        Triangulation { gluings, positions }
    }
}

fn make_gluing(
    tet: usize,
    f: usize,
    target: usize,
    triple: [usize; 3],
    n: usize,
    pos: Option<Position>,
) -> Result<Gluing> {
    if target >= n {
        return Err(Error::IndexOutOfRange {
            tet,
            face: face_name(f),
            target,
            count: n,
        });
    }
    let perm = Perm4::from_face_map(f, triple).ok_or_else(|| {
        syntax(
            pos.unwrap_or(Position { line: 1, column: 1 }),
            format!(
                "vertex map {triple:?} for tetrahedron {tet} face {} is not injective",
                face_name(f)
            ),
        )
    })?;
    Ok(Gluing { tet: target, perm })
}

fn syntax(pos: Position, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

/// Splits a stream of table records separated by blank lines.
pub fn split_records(text: &str) -> Vec<String> {
    let mut records = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            if !current.trim().is_empty() {
                records.push(std::mem::take(&mut current));
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if !current.trim().is_empty() {
        records.push(current);
    }
    records
}

struct Lexer<'a> {
    chars: Vec<char>,
    at: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer {
            chars: src.chars().collect(),
            at: 0,
            line,
            _src: src,
        }
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.at + 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        let pos = self.position();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(syntax(pos, format!("expected {want:?}, found {c:?}"))),
            None => Err(syntax(pos, format!("expected {want:?}, found end of line"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let pos = self.position();
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return Err(syntax(pos, "expected a number"));
        }
        let s: String = self.chars[start..self.at].iter().collect();
        s.parse().map_err(|_| syntax(pos, format!("number {s} too large")))
    }
}

/// Serializable copy of the gluing table, in JSON layout.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GluingTable {
    pub tetrahedra: usize,
    pub gluings: Vec<[Option<(usize, [usize; 3])>; 4]>,
}

impl From<&Triangulation> for GluingTable {
    fn from(t: &Triangulation) -> Self {
        GluingTable {
            tetrahedra: t.tet_count(),
            gluings: t
                .gluings
                .iter()
                .map(|row| {
                    let mut out = [None; 4];
                    for (f, g) in row.iter().enumerate() {
                        out[f] = g.map(|g| (g.tet, g.perm.face_triple(f)));
                    }
                    out
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FOUR_TET_SPHERE_TABLE;

    #[test]
    fn parses_the_four_tetrahedron_sphere() {
        let t = Triangulation::parse_table(FOUR_TET_SPHERE_TABLE).unwrap();
        assert_eq!(t.tet_count(), 4);
        assert!(t.is_closed());
        let g = t.gluing(0, 0).unwrap();
        assert_eq!(g.tet, 2);
        assert_eq!(g.perm.face_triple(0), [2, 3, 1]);
        assert_eq!(g.target_face(0), 3);
        assert_eq!(t.position(1).unwrap().line, 2);
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(Triangulation::parse_table(""), Err(Error::Syntax { .. })));
        assert!(matches!(
            Triangulation::parse_table("  # only a comment\n\n"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = Triangulation::parse_table("0: 0 (123) 0 (1x3) - -\n").unwrap_err();
        match err {
            Error::Syntax { pos, .. } => assert_eq!(pos, Position { line: 1, column: 16 }),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn involution_violation() {
        // (0,012) -> (1,012) but (1,012) -> (2,012)
        let text = "0: 1 (012) - - -\n1: 2 (012) - - -\n2: 1 (012) - - -\n";
        assert!(matches!(
            Triangulation::parse_table(text),
            Err(Error::Involution { .. })
        ));
    }

    #[test]
    fn one_sided_gluing_is_an_involution_violation() {
        let text = "0: 1 (012) - - -\n1: - - - -\n";
        assert!(matches!(
            Triangulation::parse_table(text),
            Err(Error::Involution { .. })
        ));
    }

    #[test]
    fn identity_self_gluing_rejected() {
        let text = "0: 0 (012) - - -\n";
        assert!(matches!(
            Triangulation::parse_table(text),
            Err(Error::SelfGluing { .. })
        ));
    }

    #[test]
    fn index_out_of_range() {
        let text = "0: 5 (012) - - -\n";
        assert!(matches!(
            Triangulation::parse_table(text),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn json_and_table_agree() {
        let t = Triangulation::parse_table(FOUR_TET_SPHERE_TABLE).unwrap();
        let j = Triangulation::parse_json(&t.to_json()).unwrap();
        assert_eq!(t.gluings(), j.gluings());
        let again = Triangulation::parse_table(&t.to_table()).unwrap();
        assert_eq!(t.gluings(), again.gluings());
    }

    #[test]
    fn json_errors() {
        assert!(matches!(Triangulation::parse_json("{"), Err(Error::Syntax { .. })));
        assert!(matches!(
            Triangulation::parse_json(r#"{"tetrahedra": 1, "gluings": [[null, null, null]]}"#),
            Err(Error::Syntax { .. })
        ));
        let ok = Triangulation::parse_json(r#"{"tetrahedra": 1, "gluings": [[[0,[1,2,3]], null, null, [0,[0,1,2]]]]}"#)
            .unwrap();
        assert_eq!(ok.gluing(0, 3).unwrap().tet, 0);
    }

    #[test]
    fn split_stream_records() {
        let recs = split_records("0: 0 (123) 0 (023) 0 (013) 0 (012)\n\n\n0: - - - -\n");
        assert_eq!(recs.len(), 2);
    }
}

use thiserror::Error;

/// A line/column position in an input document, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Position, msg: String },

    #[error("face {face} of tetrahedron {tet} is glued to tetrahedron {target}, but only {count} tetrahedra exist")]
    IndexOutOfRange {
        tet: usize,
        face: String,
        target: usize,
        count: usize,
    },

    #[error("gluings are not an involution at tetrahedron {tet} face {face}: {msg}")]
    Involution { tet: usize, face: String, msg: String },

    #[error("face {face} of tetrahedron {tet} is glued to itself")]
    SelfGluing { tet: usize, face: String },

    #[error("triangulation is not closed: face {face} of tetrahedron {tet} is unglued")]
    NotClosed { tet: usize, face: String },

    #[error("triangulation is not orientable")]
    NonOrientable,

    #[error("corner sign requested for edge {edge} which quad {quad} does not meet")]
    QuadMissesEdge { quad: usize, edge: usize },

    #[error("census limited to at most {max} tetrahedra (requested {requested})")]
    CensusTooLarge { requested: usize, max: usize },

    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },

    #[error("surface patch is not closed")]
    PatchNotClosed,
}

pub type Result<T> = std::result::Result<T, Error>;

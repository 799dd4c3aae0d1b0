use thiserror::Error;

use crate::poset::ElemId;

/// Everything that can go wrong across the crate.
///
/// Variants are grouped by the module that raises them. Variants flagged as
/// hard failures (`FaceCountMismatch`, `EulerianViolation`,
/// `ClosedFormMismatch`, `WitnessMismatch`, `PatternAmbiguous`) mean a
/// computed object contradicts a known theorem and almost certainly signal a
/// bug rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // poset construction and parsing
    #[error("cover ({0}, {1}) skips a rank")]
    NotGraded(ElemId, ElemId),
    #[error("poset has no unique bottom element (rank-0 or minimal elements: {0:?})")]
    NoUniqueBottom(Vec<ElemId>),
    #[error("poset has no unique top element")]
    NoUniqueTop,
    #[error("element {0} is not reachable from the bottom")]
    DisconnectedFromBottom(ElemId),
    #[error("cover ({0}, {1}) is redundant")]
    RedundantCover(ElemId, ElemId),
    #[error("cover relation contains a cycle through element {0}")]
    Cyclic(ElemId),
    #[error("unknown element id {0}")]
    UnknownElement(ElemId),
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(ElemId, ElemId),
    #[error("operation requires a poset with a bottom element")]
    MissingBottom,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input too large: {what} = {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    // polynomials
    #[error("polynomial degree {degree} exceeds window {window}")]
    DegreeTooHigh { degree: usize, window: usize },

    // toric
    #[error("lower interval below element {0} is not Eulerian")]
    NotLowerEulerian(ElemId),
    #[error("g routes disagree: difference-of-h gives {by_h}, truncation gives {by_truncation}")]
    DefinitionMismatch { by_h: String, by_truncation: String },

    // multiplex
    #[error("bad multiplex parameters d={d}, n={n}")]
    BadParameters { d: usize, n: usize },
    #[error("face count mismatch for M^({d},{n}): built {built:?}, expected {expected:?}")]
    FaceCountMismatch {
        d: usize,
        n: usize,
        built: Vec<usize>,
        expected: Vec<usize>,
    },

    // bier and ideals
    #[error("set is not downward closed: {below} < {member} is missing")]
    NotDownwardClosed { member: ElemId, below: ElemId },
    #[error("ideal is not proper: contains {0}")]
    NotProper(ElemId),
    #[error("ideal is empty")]
    EmptyIdeal,
    #[error("element {0} is not maximal in the ideal")]
    NotMaximal(ElemId),
    #[error("removing {0} would leave the empty ideal")]
    WouldEmpty(ElemId),
    #[error("too many ideals: more than {0}")]
    TooMany(u64),
    #[error("Bier poset is not Eulerian at interval [{0}, {1}]")]
    EulerianViolation(ElemId, ElemId),

    // verification
    #[error("poset is not bounded (needs unique bottom and top)")]
    NotBounded,

    // g-vector analysis
    #[error("closed form {closed} disagrees with recursion {recursion}")]
    ClosedFormMismatch { closed: String, recursion: String },
    #[error("witness graph f-vector {graph:?} differs from (1, g1, g2) = {expected:?}")]
    WitnessMismatch {
        graph: (usize, usize, usize),
        expected: (String, String, String),
    },

    // shelling
    #[error("facet {facet} of face {face} matches {matches} multiplex facet patterns")]
    PatternAmbiguous {
        face: ElemId,
        facet: ElemId,
        matches: usize,
    },
    #[error("cover ({0}, {1}) has no label")]
    UnlabeledCover(ElemId, ElemId),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

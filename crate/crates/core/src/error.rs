use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quaternion: {0}")]
    InvalidQuaternion(String),

    #[error("near-180° rotation (w = {0:e}), rotate frame first")]
    NearHalfTurn(f64),

    #[error("unknown group '{0}'; valid names: C1, C2, C3, C4, C6, D2, D3, D4, D6, T, O, 2I")]
    UnknownGroup(String),

    #[error("{sub} is not a subgroup of {sup}; subsets of O: C1 C2 C4 D2 D4 T O, subsets of D6: C1 C3 C6 D3 D6")]
    NotSubgroup { sub: String, sup: String },

    #[error("group closure did not terminate within {0} elements")]
    GroupClosure(usize),

    #[error("need at least 5 points, got {0}")]
    TooFewPoints(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("angle {0} rad outside valid range {1}")]
    AngleOutOfRange(f64, &'static str),

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("volume branch ambiguity at theta = {theta} rad: raw value {raw}")]
    VolumeBranch { theta: f64, raw: f64 },

    #[error("coincident points (distance {0:e})")]
    CoincidentPoints(f64),

    #[error("{n} points not achievable with group {group} (order {order}); nearest valid n = {suggestion}")]
    InvalidCount { n: usize, group: String, order: usize, suggestion: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty point set")]
    Empty,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

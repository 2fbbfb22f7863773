use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group spec {spec:?} at position {pos}: {msg}")]
    GroupSpec { spec: String, pos: usize, msg: String },

    #[error("malformed type {text:?} at position {pos}: {msg}")]
    TypeSpec { text: String, pos: usize, msg: String },

    #[error("invalid modulus {0}: moduli must be at least 1")]
    Modulus(i64),

    #[error("cayley table violates {axiom}: {detail}")]
    CayleyAxiom { axiom: &'static str, detail: String },

    #[error("malformed cayley document: {0}")]
    CayleyFormat(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("group of order {order} is too large for {what}")]
    TooLarge { order: u128, what: &'static str },

    #[error(
        "automorphism enumeration: |G| = {order} exceeds the bound {bound} and no family rule \
         applies; supply a family hint or raise the bound"
    )]
    AutBound { order: usize, bound: usize },

    #[error("budget exceeded: {what} needs more than {limit} (reached {reached})")]
    Budget { what: &'static str, limit: u64, reached: u64 },

    #[error("systems belong to different groups")]
    GroupMismatch,

    #[error("move {mv} is not valid for g' = {gprime}, r = {r}")]
    MoveIndex { mv: String, gprime: usize, r: usize },

    #[error("malformed move {0:?}")]
    MoveSyntax(String),

    #[error("(g', r) = (0, 0) is degenerate: there is no mapping class group action")]
    Degenerate,

    #[error("genus of the {side} covering curve is {genus}; an integer >= 2 is required")]
    Genus { side: &'static str, genus: String },

    #[error("{0} is not coprime to 6")]
    NotCoprimeToSix(u64),

    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: u64, got: u64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("multiplication convention self-check failed under both readings: {0}")]
    ConventionSelfCheck(String),
}

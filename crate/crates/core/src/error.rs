use crate::bp::NodeId;
use thiserror::Error;

/// Errors produced by program validation, complexity search, conversions,
/// parsing, and the formula evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle through node {0}")]
    CyclicGraph(NodeId),
    #[error("node {node} references missing node {target}")]
    DanglingReference { node: NodeId, target: NodeId },
    #[error("node {node} is labeled x{var} but the program declares {n} variables")]
    BadVariableIndex { node: NodeId, var: u32, n: usize },
    #[error("start node {0} does not exist")]
    MissingStart(NodeId),
    #[error("{n} variables exceed the enumeration cap of {cap}")]
    TooManyVariables { n: usize, cap: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("program is not read-once: node {first} and node {second} test x{var} on one path")]
    NotReadOnce {
        var: u32,
        first: NodeId,
        second: NodeId,
    },
    #[error("zero-suppression operator is not allowed here")]
    ZsupNotAllowed,
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("variable x{var} is out of range for {n} declared variables")]
    VarOutOfRange { var: u32, n: usize },
    #[error("parse error on line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

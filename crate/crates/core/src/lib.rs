//! Branching programs under two output semantics — deterministic and
//! zero-suppressed — with constructive conversions between them, a compiler
//! from zero-suppressed programs to fan-in-2 Boolean circuits, exact
//! decision-tree complexity measures, and a formula language with a
//! zero-suppression operator.

pub mod bp;
pub mod circuit;
pub mod dot;
pub mod dtree;
pub mod error;
pub mod formula;
pub mod table;
pub mod transforms;

pub use bp::{Assignment, BranchingProgram, NodeId, NodeKind, Semantics, VarId};
pub use circuit::barrington::{
    barrington, barrington_program, Instruction, Perm, PermutationProgram,
};
pub use circuit::compile::{compile_lts, compile_zs_to_circuit, depth_bound};
pub use circuit::lts::{levelize_zs, LeveledTransitionSystem};
pub use circuit::{formula_to_circuit, Circuit, CircuitBuilder, Gate, GateId};
pub use dot::{circuit_to_dot, program_to_dot};
pub use dtree::{
    d_complexity, d_complexity_capped, eval_witness, z_complexity, z_complexity_capped,
    ComplexityResult, DecisionTree,
};
pub use error::{Error, Result};
pub use formula::{Expr, Formula};
pub use table::{gen_family, Family, TruthTable};
pub use transforms::{
    det_to_zs, normalize_path_sets, ro_det_to_zs, ro_zs_to_det, ChainMode, PathSetAnnotation,
};

//! Graphviz DOT export. Output is deterministic: one node per line in id
//! order, then edges in the same order, so dumps diff cleanly.

use crate::bp::{BranchingProgram, NodeKind};
use crate::circuit::{Circuit, Gate};

/// Inner nodes are circles labeled with their variable; sinks are boxes
/// labeled 0/1. The 0-edge is dashed, the 1-edge solid; an arrowhead from
/// a point marks the start node.
pub fn program_to_dot(bp: &BranchingProgram) -> String {
    let mut out = String::from("digraph program {\n  rankdir=TB;\n");
    out.push_str("  start [shape=point];\n");
    for (id, kind) in bp.nodes() {
        match kind {
            NodeKind::Inner { var, .. } => {
                out.push_str(&format!("  n{id} [label=\"{var}\", shape=circle];\n"));
            }
            NodeKind::Sink(value) => {
                out.push_str(&format!(
                    "  n{id} [label=\"{}\", shape=box];\n",
                    u8::from(*value)
                ));
            }
        }
    }
    out.push_str(&format!("  start -> n{};\n", bp.start()));
    for (id, kind) in bp.nodes() {
        if let NodeKind::Inner { lo, hi, .. } = kind {
            out.push_str(&format!("  n{id} -> n{lo} [style=dashed];\n"));
            out.push_str(&format!("  n{id} -> n{hi} [style=solid];\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// Gates are labeled by kind (inputs by their variable); operand edges
/// point from operand to gate; a doubled border marks the output gate.
pub fn circuit_to_dot(c: &Circuit) -> String {
    let mut out = String::from("digraph circuit {\n  rankdir=BT;\n");
    for (i, gate) in c.gates().iter().enumerate() {
        let label = match gate {
            Gate::Input(v) => v.to_string(),
            Gate::Const(b) => u8::from(*b).to_string(),
            Gate::Not(_) => "NOT".into(),
            Gate::And(..) => "AND".into(),
            Gate::Or(..) => "OR".into(),
        };
        let marker = if i == c.output().0 as usize {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!("  g{i} [label=\"{label}\"{marker}];\n"));
    }
    for (i, gate) in c.gates().iter().enumerate() {
        match *gate {
            Gate::Input(_) | Gate::Const(_) => {}
            Gate::Not(g) => out.push_str(&format!("  g{g} -> g{i};\n")),
            Gate::And(g, h) | Gate::Or(g, h) => {
                out.push_str(&format!("  g{g} -> g{i};\n  g{h} -> g{i};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

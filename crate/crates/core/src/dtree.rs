//! Exact decision-tree complexity under both semantics.
//!
//! `D(f)` is the minimal depth of a deterministic decision tree computing
//! `f`; `Z(f)` is the minimal depth of a zero-suppressed one. Both searches
//! return an optimal witness tree. The recursion only branches on variables
//! not yet tested on the current path (repeating a variable never reduces
//! depth under either semantics), so witnesses are read-once by
//! construction.

use std::collections::HashMap;

use crate::bp::{BranchingProgram, NodeId, NodeKind, Semantics, VarId};
use crate::error::{Error, Result};
use crate::table::TruthTable;

/// Default cap on the variable count; the memo state space grows roughly as
/// `3^n * 2^n`.
pub const DEFAULT_COMPLEXITY_CAP: usize = 5;

/// A branching program whose graph is a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    program: BranchingProgram,
    depth: usize,
}

impl DecisionTree {
    /// Wraps a program, checking tree shape: the start node has in-degree 0
    /// and every other node has in-degree exactly 1 (parallel edges count
    /// twice).
    pub fn new(program: BranchingProgram) -> Result<DecisionTree> {
        program.validate()?;
        let mut indegree: HashMap<NodeId, usize> = HashMap::new();
        for (_, kind) in program.nodes() {
            if let NodeKind::Inner { lo, hi, .. } = kind {
                *indegree.entry(*lo).or_default() += 1;
                *indegree.entry(*hi).or_default() += 1;
            }
        }
        for (id, _) in program.nodes() {
            let d = indegree.get(&id).copied().unwrap_or(0);
            let expected = usize::from(id != program.start());
            if d != expected {
                return Err(Error::BadParameter(format!(
                    "node {id} has in-degree {d}, not a rooted tree"
                )));
            }
        }
        let depth = tree_depth(&program, program.start());
        Ok(DecisionTree { program, depth })
    }

    pub fn program(&self) -> &BranchingProgram {
        &self.program
    }

    /// Longest root-to-sink path, counted in inner nodes.
    pub fn depth(&self) -> usize {
        self.depth
    }
}

fn tree_depth(bp: &BranchingProgram, id: NodeId) -> usize {
    match *bp.kind(id).expect("validated") {
        NodeKind::Sink(_) => 0,
        NodeKind::Inner { lo, hi, .. } => 1 + tree_depth(bp, lo).max(tree_depth(bp, hi)),
    }
}

/// An exact complexity value together with a minimal-depth witness tree.
#[derive(Debug, Clone)]
pub struct ComplexityResult {
    pub value: usize,
    pub witness: DecisionTree,
}

/// `D(f)`: minimal deterministic decision-tree depth, default cap.
pub fn d_complexity(tt: &TruthTable) -> Result<ComplexityResult> {
    d_complexity_capped(tt, DEFAULT_COMPLEXITY_CAP)
}

pub fn d_complexity_capped(tt: &TruthTable, cap: usize) -> Result<ComplexityResult> {
    complexity(tt, Semantics::Det, cap)
}

/// `Z(f)`: minimal zero-suppressed decision-tree depth, default cap.
pub fn z_complexity(tt: &TruthTable) -> Result<ComplexityResult> {
    z_complexity_capped(tt, DEFAULT_COMPLEXITY_CAP)
}

pub fn z_complexity_capped(tt: &TruthTable, cap: usize) -> Result<ComplexityResult> {
    complexity(tt, Semantics::Zs, cap)
}

/// Evaluates a witness tree to its truth table under the chosen semantics.
pub fn eval_witness(t: &DecisionTree, semantics: Semantics) -> TruthTable {
    let n = t.program.n();
    t.program
        .truth_table_capped(semantics, n.max(1))
        .expect("cap equals the tree's own variable count")
}

fn complexity(tt: &TruthTable, semantics: Semantics, cap: usize) -> Result<ComplexityResult> {
    if tt.n() > cap {
        return Err(Error::TooManyVariables { n: tt.n(), cap });
    }
    let mut search = Search {
        semantics,
        memo: HashMap::new(),
    };
    let live: u32 = if tt.n() == 0 { 0 } else { (1 << tt.n()) - 1 };
    let bits: Vec<bool> = (0..tt.len()).map(|i| tt.bit(i)).collect();
    let value = search.depth(live, &bits);
    let mut builder = TreeBuilder { nodes: Vec::new() };
    builder.build(&mut search, live, &bits);
    let program = BranchingProgram::new(tt.n(), builder.nodes, NodeId(0));
    let witness = DecisionTree::new(program).expect("construction yields a rooted tree");
    debug_assert_eq!(witness.depth(), value);
    Ok(ComplexityResult { value, witness })
}

/// Minimal-depth recursion, memoized on the subfunction over the live
/// variables plus the live set itself.
struct Search {
    semantics: Semantics,
    memo: HashMap<(u32, Vec<bool>), usize>,
}

impl Search {
    /// `bits` is the subfunction table over the live variables in ascending
    /// index order.
    fn depth(&mut self, live: u32, bits: &[bool]) -> usize {
        if self.leaf_value(bits).is_some() {
            return 0;
        }
        let key = (live, bits.to_vec());
        if let Some(&d) = self.memo.get(&key) {
            return d;
        }
        let mut best = usize::MAX;
        for (pos, _var) in iter_live(live).enumerate() {
            let worse = (0..2)
                .map(|b| {
                    let sub = restrict(bits, pos, b == 1);
                    self.depth(live_without(live, pos), &sub)
                })
                .max()
                .unwrap();
            best = best.min(1 + worse);
        }
        self.memo.insert(key, best);
        best
    }

    /// `Some(sink_value)` when the subfunction is realizable as a single
    /// leaf. Deterministically that means a constant. Zero-suppressed, a
    /// 1-leaf reached with live set `V` computes "all of V are 0", so the
    /// subfunction must be 1 exactly at the all-zeros point of `V`.
    fn leaf_value(&self, bits: &[bool]) -> Option<bool> {
        if bits.iter().all(|&b| !b) {
            return Some(false);
        }
        match self.semantics {
            Semantics::Det => bits.iter().all(|&b| b).then_some(true),
            Semantics::Zs => (bits[0] && bits[1..].iter().all(|&b| !b)).then_some(true),
        }
    }

    /// Lowest-index live variable achieving the minimum.
    fn best_var(&mut self, live: u32, bits: &[bool]) -> (usize, VarId) {
        let mut best: Option<(usize, usize, VarId)> = None;
        for (pos, var) in iter_live(live).enumerate() {
            let worse = (0..2)
                .map(|b| {
                    let sub = restrict(bits, pos, b == 1);
                    self.depth(live_without(live, pos), &sub)
                })
                .max()
                .unwrap();
            if best.is_none_or(|(d, _, _)| 1 + worse < d) {
                best = Some((1 + worse, pos, var));
            }
        }
        let (_, pos, var) = best.expect("caller checked this is not a leaf");
        (pos, var)
    }
}

struct TreeBuilder {
    nodes: Vec<(NodeId, NodeKind)>,
}

impl TreeBuilder {
    /// Emits the subtree for `(live, bits)` in preorder (node, then
    /// 0-branch, then 1-branch) and returns its root id.
    fn build(&mut self, search: &mut Search, live: u32, bits: &[bool]) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        if let Some(value) = search.leaf_value(bits) {
            self.nodes.push((id, NodeKind::Sink(value)));
            return id;
        }
        let (pos, var) = search.best_var(live, bits);
        self.nodes.push((id, NodeKind::Sink(false))); // placeholder
        let rest = live_without(live, pos);
        let lo = self.build(search, rest, &restrict(bits, pos, false));
        let hi = self.build(search, rest, &restrict(bits, pos, true));
        self.nodes[id.0 as usize].1 = NodeKind::Inner { var, lo, hi };
        id
    }
}

/// Live variables in ascending index order.
fn iter_live(live: u32) -> impl Iterator<Item = VarId> {
    (0..32)
        .filter(move |j| live >> j & 1 == 1)
        .map(|j| VarId::new(j + 1))
}

/// Clears the `pos`-th (in ascending order) set bit of `live`.
fn live_without(live: u32, pos: usize) -> u32 {
    let mut seen = 0;
    for j in 0..32 {
        if live >> j & 1 == 1 {
            if seen == pos {
                return live & !(1 << j);
            }
            seen += 1;
        }
    }
    unreachable!("pos out of range")
}

/// Restricts the subfunction to coordinate `pos` = `b`, dropping that
/// coordinate.
fn restrict(bits: &[bool], pos: usize, b: bool) -> Vec<bool> {
    let low_mask = (1 << pos) - 1;
    (0..bits.len() / 2)
        .map(|j| {
            let idx = (j & low_mask) | (usize::from(b) << pos) | ((j & !low_mask) << 1);
            bits[idx]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{gen_family, Family};

    #[test]
    fn restrict_drops_the_selected_coordinate() {
        // f(x1,x2) = x1: table 0101
        let bits = [false, true, false, true];
        assert_eq!(restrict(&bits, 0, false), vec![false, false]);
        assert_eq!(restrict(&bits, 0, true), vec![true, true]);
        assert_eq!(restrict(&bits, 1, false), vec![false, true]);
    }

    #[test]
    fn gap_function_const1() {
        let f = gen_family(Family::Const1, 3, None).unwrap();
        assert_eq!(d_complexity(&f).unwrap().value, 0);
        assert_eq!(z_complexity(&f).unwrap().value, 3);
    }

    #[test]
    fn gap_function_and_of_negations() {
        let g = gen_family(Family::AndOfNegations, 3, None).unwrap();
        assert_eq!(d_complexity(&g).unwrap().value, 3);
        assert_eq!(z_complexity(&g).unwrap().value, 0);
    }

    #[test]
    fn witnesses_reproduce_their_function() {
        for (family, k) in [
            (Family::Const1, None),
            (Family::AndOfNegations, None),
            (Family::ExactlyK, Some(2)),
        ] {
            let f = gen_family(family, 4, k).unwrap();
            let d = d_complexity(&f).unwrap();
            assert_eq!(eval_witness(&d.witness, Semantics::Det), f);
            assert_eq!(d.witness.depth(), d.value);
            let z = z_complexity(&f).unwrap();
            assert_eq!(eval_witness(&z.witness, Semantics::Zs), f);
            assert_eq!(z.witness.depth(), z.value);
        }
    }

    #[test]
    fn witnesses_are_read_once() {
        let f = gen_family(Family::ExactlyK, 4, Some(1)).unwrap();
        assert!(d_complexity(&f).unwrap().witness.program().is_read_once());
        assert!(z_complexity(&f).unwrap().witness.program().is_read_once());
    }

    #[test]
    fn cap_is_enforced() {
        let f = gen_family(Family::Const1, 6, None).unwrap();
        assert_eq!(
            d_complexity(&f).unwrap_err(),
            Error::TooManyVariables { n: 6, cap: 5 }
        );
        assert!(d_complexity_capped(&f, 6).is_ok());
    }

    #[test]
    fn rejects_non_tree_programs() {
        // Diamond: both branches of the root share a child.
        let bp = BranchingProgram::new(
            2,
            [
                (
                    NodeId(0),
                    NodeKind::Inner {
                        var: VarId::new(1),
                        lo: NodeId(1),
                        hi: NodeId(1),
                    },
                ),
                (
                    NodeId(1),
                    NodeKind::Inner {
                        var: VarId::new(2),
                        lo: NodeId(2),
                        hi: NodeId(3),
                    },
                ),
                (NodeId(2), NodeKind::Sink(false)),
                (NodeId(3), NodeKind::Sink(true)),
            ],
            NodeId(0),
        );
        assert!(DecisionTree::new(bp).is_err());
    }
}

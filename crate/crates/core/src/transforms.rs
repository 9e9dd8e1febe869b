//! Graph-rewriting conversions between the two semantics.
//!
//! [`det_to_zs`] appends a single "visit everything" chain in front of the
//! 1-sink, growing the program by exactly `n` nodes. The read-once
//! conversions [`ro_det_to_zs`] and [`ro_zs_to_det`] instead splice per-edge
//! chains so that all paths into each node test the same variable set; they
//! grow a size-`s` program to at most `s + 2ns` nodes.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::bp::{BranchingProgram, NodeId, NodeKind, VarId};
use crate::error::Result;

/// Variables tested on computation paths reaching each node. Only defined
/// for nodes whose incoming paths all agree (the normalization
/// postcondition); in [`ChainMode::ZeroCheckChain`] mode the shared divert
/// sink is deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSetAnnotation {
    sets: BTreeMap<NodeId, BTreeSet<VarId>>,
}

impl PathSetAnnotation {
    pub fn get(&self, id: NodeId) -> Option<&BTreeSet<VarId>> {
        self.sets.get(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &BTreeSet<VarId>)> + '_ {
        self.sets.iter().map(|(&id, set)| (id, set))
    }

    /// One `node <id>: {x_i,...}` line per annotated node, id order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, set) in &self.sets {
            let vars: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("node {id}: {{{}}}\n", vars.join(",")));
        }
        out
    }
}

/// What a spliced chain node does with its 1-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Both edges advance along the chain: the chain only records that its
    /// variables were tested, without reading them.
    DontCareChain,
    /// The 0-edge advances, the 1-edge diverts to a 0-sink: the chain
    /// deterministically checks that its variables are all 0.
    ZeroCheckChain,
}

/// Deterministic-to-zero-suppressed conversion for arbitrary programs.
///
/// Appends a chain `v1..vn` (labeled `x1..xn`, both edges of each node
/// advancing) in front of the 1-sink and redirects everything that entered
/// the 1-sink through the chain. Every path to the 1-sink then tests all
/// variables, so the zero-suppressed side condition is vacuous and the
/// output's ZS table equals the input's deterministic table. The output has
/// exactly `size + n` nodes.
pub fn det_to_zs(bp: &BranchingProgram) -> BranchingProgram {
    let n = bp.n();
    if n == 0 {
        return bp.clone();
    }
    let one_sinks: Vec<NodeId> = bp
        .nodes()
        .filter(|(_, kind)| matches!(kind, NodeKind::Sink(true)))
        .map(|(id, _)| id)
        .collect();
    // The chain must end somewhere even when no 1-sink exists (it is then
    // unreachable, but the size accounting stays exact).
    let chain_end = one_sinks.first().copied().unwrap_or_else(|| {
        bp.nodes()
            .find(|(_, kind)| matches!(kind, NodeKind::Sink(_)))
            .map(|(id, _)| id)
            .expect("a valid program contains at least one sink")
    });

    let base = bp.fresh_id().0;
    let chain_id = |i: u32| NodeId(base + i - 1); // v_i, 1-based
    let redirect = |t: NodeId| {
        if one_sinks.contains(&t) {
            chain_id(1)
        } else {
            t
        }
    };

    let mut nodes: Vec<(NodeId, NodeKind)> = bp
        .nodes()
        .map(|(id, kind)| {
            let kind = match *kind {
                NodeKind::Inner { var, lo, hi } => NodeKind::Inner {
                    var,
                    lo: redirect(lo),
                    hi: redirect(hi),
                },
                sink => sink,
            };
            (id, kind)
        })
        .collect();
    for i in 1..=n as u32 {
        let next = if i == n as u32 {
            chain_end
        } else {
            chain_id(i + 1)
        };
        nodes.push((
            chain_id(i),
            NodeKind::Inner {
                var: VarId::new(i),
                lo: next,
                hi: next,
            },
        ));
    }
    // A program that starts directly at a 1-sink computes constant 1; its
    // empty path must be routed through the chain as well.
    let start = redirect(bp.start());
    BranchingProgram::new(n, nodes, start)
}

/// Rewrites a read-once program so that all computation paths into each
/// node test the same variable set, returning the rewritten program and the
/// per-node sets.
///
/// Nodes are processed in topological order. For a node `v` with incoming
/// edges `e = (u, v)`, each edge contributes `X_u ∪ {var(u)}` (the set for
/// `u` plus the variable `u` tests); the target set `X` is the union over
/// incoming edges, except that 1-sinks are raised to the full variable
/// universe. Each edge whose contribution falls short of `X` gets a chain
/// over the missing variables, in ascending index order, spliced onto it.
pub fn normalize_path_sets(
    bp: &BranchingProgram,
    mode: ChainMode,
) -> Result<(BranchingProgram, PathSetAnnotation)> {
    bp.validate()?;
    bp.check_read_once()?;

    let n = bp.n();
    let all: BTreeSet<VarId> = (1..=n as u32).map(VarId::new).collect();
    let order = bp.topo_order();
    let mut incoming: BTreeMap<NodeId, Vec<(NodeId, bool)>> = BTreeMap::new();
    for &u in &order {
        if let Some(NodeKind::Inner { lo, hi, .. }) = bp.kind(u) {
            incoming.entry(*lo).or_default().push((u, false));
            incoming.entry(*hi).or_default().push((u, true));
        }
    }

    let mut rewrite = Rewrite {
        nodes: bp.nodes().map(|(id, kind)| (id, *kind)).collect(),
        next_id: bp.fresh_id().0,
        sets: BTreeMap::new(),
        divert_sink: None,
        mode,
    };

    let mut start = bp.start();
    rewrite.sets.insert(start, BTreeSet::new());
    if matches!(bp.kind(start), Some(NodeKind::Sink(true))) {
        // The empty path ends at the 1-sink; extend it over all variables.
        let head = rewrite.splice(&all, &BTreeSet::new(), start);
        rewrite.sets.insert(start, all.clone());
        start = head;
    }

    for &v in order.iter().skip(1) {
        let edges = incoming.get(&v).expect("reachable non-start node");
        let contributions: Vec<BTreeSet<VarId>> = edges
            .iter()
            .map(|&(u, _)| {
                let mut c = rewrite.sets[&u].clone();
                match bp.kind(u) {
                    Some(NodeKind::Inner { var, .. }) => c.insert(*var),
                    _ => unreachable!("edges originate at inner nodes"),
                };
                c
            })
            .collect();
        let target_set = if matches!(bp.kind(v), Some(NodeKind::Sink(true))) {
            all.clone()
        } else {
            let mut union = BTreeSet::new();
            for c in &contributions {
                union.extend(c.iter().copied());
            }
            union
        };
        for (&(u, hi_slot), contribution) in edges.iter().zip(&contributions) {
            let head = rewrite.splice(&target_set, contribution, v);
            if head != v {
                rewrite.redirect(u, hi_slot, head);
            }
        }
        rewrite.sets.insert(v, target_set);
    }

    let annotation = PathSetAnnotation { sets: rewrite.sets };
    let out = BranchingProgram::new(n, rewrite.nodes, start);
    Ok((out, annotation))
}

struct Rewrite {
    nodes: BTreeMap<NodeId, NodeKind>,
    next_id: u32,
    sets: BTreeMap<NodeId, BTreeSet<VarId>>,
    divert_sink: Option<NodeId>,
    mode: ChainMode,
}

impl Rewrite {
    fn fresh(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    /// A 0-sink for check chains to divert to. Always a fresh node: paths
    /// into it carry assorted variable sets, and sharing an original 0-sink
    /// would spoil that sink's uniform annotation.
    fn divert_sink(&mut self) -> NodeId {
        if let Some(id) = self.divert_sink {
            return id;
        }
        let id = self.fresh();
        self.nodes.insert(id, NodeKind::Sink(false));
        self.divert_sink = Some(id);
        id
    }

    /// Splices a chain over `target_set - contribution` ending at `tail`,
    /// returning its head (or `tail` itself when nothing is missing).
    fn splice(
        &mut self,
        target_set: &BTreeSet<VarId>,
        contribution: &BTreeSet<VarId>,
        tail: NodeId,
    ) -> NodeId {
        let missing: Vec<VarId> = target_set.difference(contribution).copied().collect();
        if missing.is_empty() {
            return tail;
        }
        let ids: Vec<NodeId> = missing.iter().map(|_| self.fresh()).collect();
        let mut passed = contribution.clone();
        for (j, (&var, &id)) in missing.iter().zip(&ids).enumerate() {
            let next = ids.get(j + 1).copied().unwrap_or(tail);
            let kind = match self.mode {
                ChainMode::DontCareChain => NodeKind::Inner {
                    var,
                    lo: next,
                    hi: next,
                },
                ChainMode::ZeroCheckChain => NodeKind::Inner {
                    var,
                    lo: next,
                    hi: self.divert_sink(),
                },
            };
            self.nodes.insert(id, kind);
            self.sets.insert(id, passed.clone());
            passed.insert(var);
        }
        ids[0]
    }

    fn redirect(&mut self, u: NodeId, hi_slot: bool, new_target: NodeId) {
        match self.nodes.get_mut(&u) {
            Some(NodeKind::Inner { lo, hi, .. }) => {
                if hi_slot {
                    *hi = new_target;
                } else {
                    *lo = new_target;
                }
            }
            _ => unreachable!("redirected edges originate at inner nodes"),
        }
    }
}

/// Read-once deterministic-to-zero-suppressed conversion.
///
/// [`det_to_zs`]'s single chain would test variables a path may already
/// have tested; instead, per-edge don't-care chains keep the output
/// read-once. Output size is at most `s + 2ns`, and its ZS table equals the
/// input's deterministic table.
pub fn ro_det_to_zs(bp: &BranchingProgram) -> Result<BranchingProgram> {
    Ok(normalize_path_sets(bp, ChainMode::DontCareChain)?.0)
}

/// Read-once zero-suppressed-to-deterministic conversion.
///
/// Spliced chains deterministically check that every variable the original
/// path skipped is 0, which is exactly the zero-suppressed side condition.
/// Output size is at most `s + 2ns`, and its deterministic table equals the
/// input's ZS table.
pub fn ro_zs_to_det(bp: &BranchingProgram) -> Result<BranchingProgram> {
    Ok(normalize_path_sets(bp, ChainMode::ZeroCheckChain)?.0)
}

impl fmt::Display for PathSetAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::Semantics;
    use crate::error::Error;

    fn x(i: u32) -> VarId {
        VarId::new(i)
    }

    fn single_test_program(n: usize) -> BranchingProgram {
        BranchingProgram::new(
            n,
            [
                (
                    NodeId(0),
                    NodeKind::Inner {
                        var: x(1),
                        lo: NodeId(1),
                        hi: NodeId(2),
                    },
                ),
                (NodeId(1), NodeKind::Sink(false)),
                (NodeId(2), NodeKind::Sink(true)),
            ],
            NodeId(0),
        )
    }

    #[test]
    fn det_to_zs_grows_by_exactly_n() {
        let bp = single_test_program(3);
        let zs = det_to_zs(&bp);
        zs.validate().unwrap();
        assert_eq!(zs.size(), bp.size() + 3);
        assert_eq!(
            zs.truth_table(Semantics::Zs).unwrap(),
            bp.truth_table(Semantics::Det).unwrap()
        );
    }

    #[test]
    fn det_to_zs_of_zero_sink_appends_unreachable_chain() {
        let bp = BranchingProgram::constant(3, false);
        let zs = det_to_zs(&bp);
        zs.validate().unwrap();
        assert_eq!(zs.size(), 4);
        assert!(zs
            .truth_table(Semantics::Zs)
            .unwrap()
            .to_bit_string()
            .chars()
            .all(|c| c == '0'));
    }

    #[test]
    fn det_to_zs_routes_a_starting_one_sink_through_the_chain() {
        let bp = BranchingProgram::constant(2, true);
        let zs = det_to_zs(&bp);
        zs.validate().unwrap();
        assert_eq!(zs.size(), 3);
        assert_eq!(
            zs.truth_table(Semantics::Zs).unwrap().to_bit_string(),
            "1111"
        );
    }

    #[test]
    fn normalize_rejects_repeated_variables() {
        let bp = BranchingProgram::new(
            2,
            [
                (
                    NodeId(0),
                    NodeKind::Inner {
                        var: x(1),
                        lo: NodeId(1),
                        hi: NodeId(1),
                    },
                ),
                (
                    NodeId(1),
                    NodeKind::Inner {
                        var: x(1),
                        lo: NodeId(2),
                        hi: NodeId(3),
                    },
                ),
                (NodeId(2), NodeKind::Sink(false)),
                (NodeId(3), NodeKind::Sink(true)),
            ],
            NodeId(0),
        );
        assert!(matches!(
            normalize_path_sets(&bp, ChainMode::DontCareChain),
            Err(Error::NotReadOnce { .. })
        ));
    }

    #[test]
    fn diamond_gets_a_length_one_chain() {
        // One branch tests x2, the other skips straight to the join.
        let bp = BranchingProgram::new(
            2,
            [
                (
                    NodeId(0),
                    NodeKind::Inner {
                        var: x(1),
                        lo: NodeId(1),
                        hi: NodeId(2),
                    },
                ),
                (
                    NodeId(1),
                    NodeKind::Inner {
                        var: x(2),
                        lo: NodeId(2),
                        hi: NodeId(3),
                    },
                ),
                (NodeId(2), NodeKind::Sink(false)),
                (NodeId(3), NodeKind::Sink(true)),
            ],
            NodeId(0),
        );
        let (out, anno) = normalize_path_sets(&bp, ChainMode::DontCareChain).unwrap();
        out.validate().unwrap();
        assert!(out.is_read_once());
        // The x1-hi edge into the 0-sink gains a chain testing x2; the
        // 1-sink's incoming edge already tests both variables.
        assert_eq!(anno.get(NodeId(2)), Some(&[x(1), x(2)].into()));
        assert_eq!(anno.get(NodeId(3)), Some(&[x(1), x(2)].into()));
        assert_eq!(
            out.truth_table(Semantics::Det).unwrap(),
            bp.truth_table(Semantics::Det).unwrap()
        );
    }

    #[test]
    fn ro_det_to_zs_single_test() {
        let bp = single_test_program(2);
        let out = ro_det_to_zs(&bp).unwrap();
        out.validate().unwrap();
        assert!(out.is_read_once());
        assert!(out.size() <= bp.size() + 2 * 2 * bp.size());
        assert_eq!(
            out.truth_table(Semantics::Zs).unwrap(),
            bp.truth_table(Semantics::Det).unwrap()
        );
    }

    #[test]
    fn ro_zs_to_det_of_bare_one_sink_checks_all_zeros() {
        let bp = BranchingProgram::constant(3, true);
        let out = ro_zs_to_det(&bp).unwrap();
        out.validate().unwrap();
        assert!(out.is_read_once());
        // ZS table of a bare 1-sink is !x1 & !x2 & !x3.
        assert_eq!(
            out.truth_table(Semantics::Det).unwrap().to_bit_string(),
            "10000000"
        );
        assert!(out.size() <= 1 + 2 * 3);
    }

    #[test]
    fn ro_zs_to_det_single_test() {
        let bp = single_test_program(3);
        let out = ro_zs_to_det(&bp).unwrap();
        out.validate().unwrap();
        assert!(out.is_read_once());
        assert_eq!(
            out.truth_table(Semantics::Det).unwrap(),
            bp.truth_table(Semantics::Zs).unwrap()
        );
    }

    #[test]
    fn annotation_dump_format() {
        let bp = single_test_program(2);
        let (_, anno) = normalize_path_sets(&bp, ChainMode::DontCareChain).unwrap();
        let text = anno.to_text();
        assert!(text.starts_with("node 0: {}\n"));
        assert!(text.contains("node 2: {x1,x2}\n"));
    }
}

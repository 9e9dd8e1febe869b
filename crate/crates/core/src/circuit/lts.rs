//! Leveled transition IR between branching programs and circuits.
//!
//! A program is arranged into levels; a token starts in a level-0 slot and
//! moves down one level per step. Slots either query a variable (moving to
//! one of two targets and recording the variable in a passed-variable
//! mask) or pass the token through unchanged. Pass entries are pure IR
//! bookkeeping for level gaps and for sinks that are reached early — they
//! are *not* graph nodes, and deliberately contribute nothing to the mask:
//! a dummy query node would exempt its variable from the all-zeros side
//! condition and change the zero-suppressed function.

use std::collections::{BTreeMap, BTreeSet};

use crate::bp::{Assignment, BranchingProgram, NodeId, NodeKind, VarId, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::table::TruthTable;

/// One outgoing branch of a query: the slot to move to at the next level
/// and the variables this step puts on the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub to: usize,
    pub mask: BTreeSet<VarId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Query {
        var: VarId,
        on0: Transition,
        on1: Transition,
    },
    /// Identity step with an empty mask.
    Pass { to: usize },
}

impl Entry {
    pub fn is_pass(&self) -> bool {
        matches!(self, Entry::Pass { .. })
    }
}

/// A leveled system of `len()` transition levels. Level `t`'s targets
/// index into level `t+1`'s entry list; the last level's targets index
/// into a final domain whose slot [`accept_index`](Self::accept_index)
/// stands for the 1-sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledTransitionSystem {
    n: usize,
    levels: Vec<Vec<Entry>>,
    start_index: usize,
    final_domain: usize,
    accept_index: usize,
}

impl LeveledTransitionSystem {
    /// Assembles a system, checking the structural invariants: at least
    /// one level, in-range targets, and query masks containing their own
    /// variable. Panics on violation — this is an internal IR, not a file
    /// format.
    pub fn new(
        n: usize,
        levels: Vec<Vec<Entry>>,
        start_index: usize,
        final_domain: usize,
        accept_index: usize,
    ) -> LeveledTransitionSystem {
        assert!(!levels.is_empty(), "a system needs at least one level");
        assert!(start_index < levels[0].len(), "start slot out of range");
        assert!(accept_index < final_domain, "accept slot out of range");
        for (t, level) in levels.iter().enumerate() {
            let domain = levels.get(t + 1).map(Vec::len).unwrap_or(final_domain);
            for entry in level {
                match entry {
                    Entry::Pass { to } => assert!(*to < domain, "pass target out of range"),
                    Entry::Query { var, on0, on1 } => {
                        assert!(
                            var.index() as usize <= n,
                            "query variable outside the universe"
                        );
                        for tr in [on0, on1] {
                            assert!(tr.to < domain, "query target out of range");
                            assert!(
                                tr.mask.contains(var),
                                "a query must put its own variable on the path"
                            );
                        }
                    }
                }
            }
        }
        LeveledTransitionSystem {
            n,
            levels,
            start_index,
            final_domain,
            accept_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Level count.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<Entry>] {
        &self.levels
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn final_domain(&self) -> usize {
        self.final_domain
    }

    pub fn accept_index(&self) -> usize {
        self.accept_index
    }

    /// Number of slots entries at level `t` map into.
    pub fn out_domain(&self, t: usize) -> usize {
        self.levels
            .get(t + 1)
            .map(Vec::len)
            .unwrap_or(self.final_domain)
    }

    /// Largest level.
    pub fn width(&self) -> usize {
        self.levels.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Runs the token from the start slot and applies the acceptance rule:
    /// land on the accept slot with every unqueried variable 0.
    pub fn run(&self, a: &Assignment) -> bool {
        assert_eq!(a.n(), self.n, "assignment width must match the system");
        let mut slot = self.start_index;
        let mut mask = BTreeSet::new();
        for level in &self.levels {
            slot = match &level[slot] {
                Entry::Pass { to } => *to,
                Entry::Query { var, on0, on1 } => {
                    let tr = if a.bit(*var) { on1 } else { on0 };
                    mask.extend(tr.mask.iter().copied());
                    tr.to
                }
            };
        }
        slot == self.accept_index
            && (1..=self.n as u32)
                .map(VarId::new)
                .all(|v| mask.contains(&v) || !a.bit(v))
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        if self.n > DEFAULT_ENUM_CAP {
            return Err(Error::TooManyVariables {
                n: self.n,
                cap: DEFAULT_ENUM_CAP,
            });
        }
        Ok(TruthTable::from_fn(self.n, |i| {
            self.run(&Assignment::from_index(self.n, i))
        }))
    }
}

/// What occupies a slot while leveling a program: a node sitting at its
/// level (sinks persist at every later level too), or an edge in transit
/// across a level gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SlotKey {
    Node(NodeId),
    Edge { from: NodeId, hi: bool, to: NodeId },
}

/// Levels a program by longest distance from the start and expresses its
/// zero-suppressed semantics as a leveled transition system.
///
/// Each inner node becomes a query at its level; edges that skip levels
/// travel through Pass slots; sinks reached early are carried to the end
/// by Pass slots. A final routing level funnels every sink into a
/// two-slot domain — reject 0, accept 1 — so downstream consumers see one
/// canonical accept slot. [`LeveledTransitionSystem::run`] then agrees
/// with `eval_zs` pointwise.
pub fn levelize_zs(bp: &BranchingProgram) -> Result<LeveledTransitionSystem> {
    bp.validate()?;
    let order = bp.topo_order();

    let mut level: BTreeMap<NodeId, usize> = BTreeMap::new();
    level.insert(bp.start(), 0);
    for &u in &order {
        if let Some(NodeKind::Inner { lo, hi, .. }) = bp.kind(u) {
            for child in [*lo, *hi] {
                let depth = level[&u] + 1;
                let entry = level.entry(child).or_insert(depth);
                *entry = depth.max(*entry);
            }
        }
    }
    let t_max = *level.values().max().expect("start is always leveled");

    let mut spaces: Vec<BTreeSet<SlotKey>> = vec![BTreeSet::new(); t_max + 1];
    for &u in &order {
        match bp.kind(u).expect("reachable node") {
            NodeKind::Sink(_) => {
                for space in spaces.iter_mut().skip(level[&u]) {
                    space.insert(SlotKey::Node(u));
                }
            }
            NodeKind::Inner { lo, hi, .. } => {
                spaces[level[&u]].insert(SlotKey::Node(u));
                for (child, hi_flag) in [(*lo, false), (*hi, true)] {
                    for space in &mut spaces[level[&u] + 1..level[&child]] {
                        space.insert(SlotKey::Edge {
                            from: u,
                            hi: hi_flag,
                            to: child,
                        });
                    }
                }
            }
        }
    }
    let indices: Vec<BTreeMap<SlotKey, usize>> = spaces
        .iter()
        .map(|space| space.iter().enumerate().map(|(i, &k)| (k, i)).collect())
        .collect();

    // Where edge (from, hi) -> child lands at time `t`: at the child once
    // its level is reached, in transit otherwise.
    let slot_at = |t: usize, from: NodeId, hi: bool, child: NodeId| -> usize {
        let key = if level[&child] == t {
            SlotKey::Node(child)
        } else {
            SlotKey::Edge {
                from,
                hi,
                to: child,
            }
        };
        indices[t][&key]
    };

    let mut levels: Vec<Vec<Entry>> = Vec::with_capacity(t_max + 1);
    for t in 0..t_max {
        let entries = spaces[t]
            .iter()
            .map(|&key| match key {
                SlotKey::Node(u) => match bp.kind(u).expect("slotted node") {
                    NodeKind::Sink(_) => Entry::Pass {
                        to: indices[t + 1][&SlotKey::Node(u)],
                    },
                    NodeKind::Inner { var, lo, hi } => {
                        let branch = |child: NodeId, hi_flag: bool| Transition {
                            to: slot_at(t + 1, u, hi_flag, child),
                            mask: [*var].into(),
                        };
                        Entry::Query {
                            var: *var,
                            on0: branch(*lo, false),
                            on1: branch(*hi, true),
                        }
                    }
                },
                SlotKey::Edge { from, hi, to } => Entry::Pass {
                    to: slot_at(t + 1, from, hi, to),
                },
            })
            .collect();
        levels.push(entries);
    }
    // Terminal routing: by time t_max only sinks remain.
    let terminal = spaces[t_max]
        .iter()
        .map(|&key| match key {
            SlotKey::Node(u) => match bp.kind(u).expect("slotted node") {
                NodeKind::Sink(value) => Entry::Pass {
                    to: usize::from(*value),
                },
                NodeKind::Inner { .. } => unreachable!("inner node at the last level"),
            },
            SlotKey::Edge { .. } => unreachable!("edge crossing the last level"),
        })
        .collect();
    levels.push(terminal);

    let start_index = indices[0][&SlotKey::Node(bp.start())];
    Ok(LeveledTransitionSystem::new(
        bp.n(),
        levels,
        start_index,
        2,
        1,
    ))
}

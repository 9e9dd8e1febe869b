//! Branching programs: a DAG of variable-labeled inner nodes and 0/1 sinks,
//! evaluated under either deterministic or zero-suppressed semantics.
//!
//! The same graph carries both readings. Deterministically, an assignment
//! traces a path from the start node and the reached sink is the output.
//! Zero-suppressed, the output is 1 iff the reached sink is 1 *and* every
//! variable that was never tested on the path is assigned 0.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::table::TruthTable;

/// Variable index, 1-based: `x1 ..= xn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    /// `index` must be >= 1; the upper bound is checked against a program's
    /// declared variable count by [`BranchingProgram::validate`].
    pub fn new(index: u32) -> VarId {
        assert!(index >= 1, "variable indices are 1-based");
        VarId(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing vectors of length `n`.
    pub fn pos(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Node identifier. Ids are arbitrary nonnegative integers, unique within a
/// program; they are preserved by parsing and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Tests `var`: the 0-edge goes to `lo`, the 1-edge to `hi`. Both edges
    /// may share a target.
    Inner {
        var: VarId,
        lo: NodeId,
        hi: NodeId,
    },
    Sink(bool),
}

/// Output semantics selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    Det,
    Zs,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Det => write!(f, "det"),
            Semantics::Zs => write!(f, "zs"),
        }
    }
}

/// A total assignment to `x1 ..= xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Assignment {
        Assignment { bits }
    }

    /// Assignment number `index` over `n` variables; `x1` is the least
    /// significant bit of `index`.
    pub fn from_index(n: usize, index: usize) -> Assignment {
        Assignment {
            bits: (0..n).map(|j| index >> j & 1 == 1).collect(),
        }
    }

    /// Parses a left-to-right bit string: `"101"` assigns x1=1, x2=0, x3=1.
    pub fn parse(text: &str) -> Result<Assignment> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::SyntaxError {
                        pos: i,
                        msg: format!("expected 0 or 1, found {c:?}"),
                    })
                }
            }
        }
        Ok(Assignment { bits })
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, var: VarId) -> bool {
        self.bits[var.pos()]
    }

    /// Index of this assignment in a truth table (x1 least significant).
    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | (b as usize) << j)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Enumeration cap for [`BranchingProgram::truth_table`]; the oracle costs
/// `2^n` evaluations.
pub const DEFAULT_ENUM_CAP: usize = 20;

/// A branching program over a declared variable universe `x1 ..= xn`.
///
/// The universe is explicit and never inferred from node labels:
/// zero-suppressed semantics quantifies over the variables a path did *not*
/// test, so the same graph means different functions under different `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingProgram {
    n: usize,
    nodes: BTreeMap<NodeId, NodeKind>,
    start: NodeId,
}

impl BranchingProgram {
    /// Builds a program without validating it; see [`Self::validate`].
    ///
    /// Panics if two nodes share an id.
    pub fn new(
        n: usize,
        nodes: impl IntoIterator<Item = (NodeId, NodeKind)>,
        start: NodeId,
    ) -> BranchingProgram {
        let mut map = BTreeMap::new();
        for (id, kind) in nodes {
            if map.insert(id, kind).is_some() {
                panic!("duplicate node id {id}");
            }
        }
        BranchingProgram {
            n,
            nodes: map,
            start,
        }
    }

    /// The smallest program computing the constant `value`.
    pub fn constant(n: usize, value: bool) -> BranchingProgram {
        BranchingProgram::new(n, [(NodeId(0), NodeKind::Sink(value))], NodeId(0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn kind(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeKind)> + '_ {
        self.nodes.iter().map(|(&id, kind)| (id, kind))
    }

    /// Node count, sinks included.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// An id strictly larger than every existing id.
    pub fn fresh_id(&self) -> NodeId {
        NodeId(self.nodes.keys().next_back().map_or(0, |id| id.0 + 1))
    }

    /// Checks every structural invariant: the start node exists, edges point
    /// at existing nodes, variable labels fit the declared universe, and the
    /// edge relation (over all nodes, reachable or not) is acyclic.
    pub fn validate(&self) -> Result<()> {
        if !self.nodes.contains_key(&self.start) {
            return Err(Error::MissingStart(self.start));
        }
        for (&id, kind) in &self.nodes {
            if let NodeKind::Inner { var, lo, hi } = kind {
                if var.index() as usize > self.n {
                    return Err(Error::BadVariableIndex {
                        node: id,
                        var: var.index(),
                        n: self.n,
                    });
                }
                for target in [lo, hi] {
                    if !self.nodes.contains_key(target) {
                        return Err(Error::DanglingReference {
                            node: id,
                            target: *target,
                        });
                    }
                }
            }
        }
        self.check_acyclic()
    }

    fn check_acyclic(&self) -> Result<()> {
        // Iterative three-color DFS over the whole node set.
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color: HashMap<NodeId, Color> =
            self.nodes.keys().map(|&id| (id, Color::White)).collect();
        for &root in self.nodes.keys() {
            if color[&root] != Color::White {
                continue;
            }
            let mut stack = vec![(root, 0u8)];
            while let Some(&mut (id, ref mut edge)) = stack.last_mut() {
                if *edge == 0 {
                    color.insert(id, Color::Gray);
                }
                let next = match self.nodes[&id] {
                    NodeKind::Inner { lo, hi, .. } if *edge < 2 => {
                        let t = if *edge == 0 { lo } else { hi };
                        *edge += 1;
                        Some(t)
                    }
                    _ => None,
                };
                match next {
                    Some(t) => match color.get(&t) {
                        Some(Color::Gray) => return Err(Error::CyclicGraph(t)),
                        Some(Color::White) => stack.push((t, 0)),
                        _ => {}
                    },
                    None => {
                        color.insert(id, Color::Black);
                        stack.pop();
                    }
                }
            }
        }
        Ok(())
    }

    fn walk(&self, a: &Assignment) -> (NodeId, BTreeSet<VarId>) {
        let mut id = self.start;
        let mut tested = BTreeSet::new();
        let mut steps = 0usize;
        loop {
            match self.nodes[&id] {
                NodeKind::Sink(_) => return (id, tested),
                NodeKind::Inner { var, lo, hi } => {
                    tested.insert(var);
                    id = if a.bit(var) { hi } else { lo };
                }
            }
            steps += 1;
            assert!(steps <= self.nodes.len(), "cycle during evaluation");
        }
    }

    /// Deterministic output: the value of the sink the path reaches.
    pub fn eval_det(&self, a: &Assignment) -> bool {
        debug_assert_eq!(a.n(), self.n);
        let (sink, _) = self.walk(a);
        matches!(self.nodes[&sink], NodeKind::Sink(true))
    }

    /// Zero-suppressed output: 1 iff the reached sink is 1 and every variable
    /// the path did not test is assigned 0.
    pub fn eval_zs(&self, a: &Assignment) -> bool {
        debug_assert_eq!(a.n(), self.n);
        let (sink, tested) = self.walk(a);
        matches!(self.nodes[&sink], NodeKind::Sink(true))
            && (1..=self.n as u32).all(|j| {
                let v = VarId::new(j);
                tested.contains(&v) || !a.bit(v)
            })
    }

    pub fn eval(&self, semantics: Semantics, a: &Assignment) -> bool {
        match semantics {
            Semantics::Det => self.eval_det(a),
            Semantics::Zs => self.eval_zs(a),
        }
    }

    /// Exhaustive truth table under the chosen semantics, with the default
    /// enumeration cap of [`DEFAULT_ENUM_CAP`] variables.
    pub fn truth_table(&self, semantics: Semantics) -> Result<TruthTable> {
        self.truth_table_capped(semantics, DEFAULT_ENUM_CAP)
    }

    pub fn truth_table_capped(&self, semantics: Semantics, cap: usize) -> Result<TruthTable> {
        if self.n > cap {
            return Err(Error::TooManyVariables { n: self.n, cap });
        }
        Ok(TruthTable::from_fn(self.n, |idx| {
            self.eval(semantics, &Assignment::from_index(self.n, idx))
        }))
    }

    /// Nodes reachable from the start node, in ascending id order.
    pub fn reachable(&self) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.start];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let Some(NodeKind::Inner { lo, hi, .. }) = self.nodes.get(&id) {
                stack.push(*lo);
                stack.push(*hi);
            }
        }
        seen
    }

    /// Reachable nodes in a topological order (start first, edges forward).
    pub fn topo_order(&self) -> Vec<NodeId> {
        let mut order = Vec::new();
        let mut state: HashMap<NodeId, bool> = HashMap::new(); // false = open
        let mut stack = vec![(self.start, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                state.insert(id, true);
                order.push(id);
                continue;
            }
            if state.contains_key(&id) {
                continue;
            }
            state.insert(id, false);
            stack.push((id, true));
            if let Some(NodeKind::Inner { lo, hi, .. }) = self.nodes.get(&id) {
                for t in [*hi, *lo] {
                    if !state.contains_key(&t) {
                        stack.push((t, false));
                    }
                }
            }
        }
        order.reverse();
        order
    }

    /// True iff no source-reachable path tests the same variable twice.
    pub fn is_read_once(&self) -> bool {
        self.check_read_once().is_ok()
    }

    /// Like [`Self::is_read_once`], but reports the offending pair.
    pub fn check_read_once(&self) -> Result<()> {
        let order = self.topo_order();
        // vars_below[v]: variables tested on some path leaving v.
        let mut below: HashMap<NodeId, BTreeSet<VarId>> = HashMap::new();
        for &id in order.iter().rev() {
            let set = match self.nodes[&id] {
                NodeKind::Sink(_) => BTreeSet::new(),
                NodeKind::Inner { var, lo, hi } => {
                    let mut set = below[&lo].clone();
                    set.extend(below[&hi].iter().copied());
                    if set.contains(&var) {
                        let second = self.find_var_below(id, var);
                        return Err(Error::NotReadOnce {
                            var: var.index(),
                            first: id,
                            second,
                        });
                    }
                    set.insert(var);
                    set
                }
            };
            below.insert(id, set);
        }
        Ok(())
    }

    /// Locates a node labeled `var` strictly below `from` (used only to
    /// report read-once violations).
    fn find_var_below(&self, from: NodeId, var: VarId) -> NodeId {
        let mut seen = HashSet::new();
        let mut stack = match self.nodes[&from] {
            NodeKind::Inner { lo, hi, .. } => vec![lo, hi],
            NodeKind::Sink(_) => vec![],
        };
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let NodeKind::Inner { var: v, lo, hi } = self.nodes[&id] {
                if v == var {
                    return id;
                }
                stack.push(lo);
                stack.push(hi);
            }
        }
        unreachable!("caller guarantees a duplicate of {var} below {from}")
    }

    /// Drops nodes unreachable from the start node.
    pub fn pruned(&self) -> BranchingProgram {
        let keep = self.reachable();
        BranchingProgram {
            n: self.n,
            nodes: self
                .nodes
                .iter()
                .filter(|(id, _)| keep.contains(id))
                .map(|(&id, &kind)| (id, kind))
                .collect(),
            start: self.start,
        }
    }

    /// Parses the line-oriented `.bp` text format. `#` starts a comment.
    ///
    /// ```text
    /// vars 3
    /// inner 0 1 1 2    # id var lo hi
    /// sink 1 0
    /// sink 2 1
    /// start 0
    /// ```
    pub fn parse(text: &str) -> Result<BranchingProgram> {
        let err = |line: usize, msg: String| Error::ParseError { line, msg };
        let mut n: Option<usize> = None;
        let mut start: Option<NodeId> = None;
        let mut nodes = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let kw = tok.next().unwrap();
            let mut next_u32 = |what: &str| -> Result<u32> {
                tok.next()
                    .ok_or_else(|| err(line_no, format!("missing {what}")))?
                    .parse::<u32>()
                    .map_err(|e| err(line_no, format!("bad {what}: {e}")))
            };
            match kw {
                "vars" => {
                    let v = next_u32("variable count")?;
                    if n.replace(v as usize).is_some() {
                        return Err(err(line_no, "duplicate vars line".into()));
                    }
                }
                "inner" => {
                    let id = NodeId(next_u32("node id")?);
                    let var = next_u32("variable index")?;
                    if var == 0 {
                        return Err(err(line_no, "variable indices are 1-based".into()));
                    }
                    let lo = NodeId(next_u32("lo target")?);
                    let hi = NodeId(next_u32("hi target")?);
                    let kind = NodeKind::Inner {
                        var: VarId::new(var),
                        lo,
                        hi,
                    };
                    if nodes.insert(id, kind).is_some() {
                        return Err(err(line_no, format!("duplicate node id {id}")));
                    }
                }
                "sink" => {
                    let id = NodeId(next_u32("node id")?);
                    let value = match next_u32("sink value")? {
                        0 => false,
                        1 => true,
                        v => {
                            return Err(err(line_no, format!("sink value must be 0 or 1, got {v}")))
                        }
                    };
                    if nodes.insert(id, NodeKind::Sink(value)).is_some() {
                        return Err(err(line_no, format!("duplicate node id {id}")));
                    }
                }
                "start" => {
                    let id = NodeId(next_u32("start id")?);
                    if start.replace(id).is_some() {
                        return Err(err(line_no, "duplicate start line".into()));
                    }
                }
                other => return Err(err(line_no, format!("unknown keyword {other:?}"))),
            }
            if let Some(extra) = tok.next() {
                return Err(err(line_no, format!("trailing token {extra:?}")));
            }
        }
        let n = n.ok_or_else(|| err(0, "missing vars line".into()))?;
        let start = start.ok_or_else(|| err(0, "missing start line".into()))?;
        Ok(BranchingProgram { n, nodes, start })
    }

    /// Serializes to the `.bp` text format; `parse(to_text(p)) == p`.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars {}\n", self.n);
        for (&id, kind) in &self.nodes {
            match kind {
                NodeKind::Inner { var, lo, hi } => {
                    out.push_str(&format!("inner {} {} {} {}\n", id, var.index(), lo, hi));
                }
                NodeKind::Sink(v) => out.push_str(&format!("sink {} {}\n", id, *v as u8)),
            }
        }
        out.push_str(&format!("start {}\n", self.start));
        out
    }
}

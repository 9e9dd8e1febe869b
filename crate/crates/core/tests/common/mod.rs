//! Shared oracles and generators for the integration suites. Everything
//! here recomputes results from definitions, independently of the library
//! code paths under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::Rng;

use zsbp::{
    Assignment, BranchingProgram, Circuit, Expr, Formula, Gate, GateId, Instruction, NodeId,
    NodeKind, Perm, PermutationProgram, Semantics, TruthTable, VarId,
};

/// Independent program evaluator: walk the path, record tested variables,
/// apply the acceptance rule at the sink.
pub fn walk_oracle(bp: &BranchingProgram, a: &Assignment, semantics: Semantics) -> bool {
    let mut tested = Vec::new();
    let mut at = bp.start();
    loop {
        match bp.kind(at).expect("walk stays inside the program") {
            NodeKind::Inner { var, lo, hi } => {
                tested.push(*var);
                at = if a.bit(*var) { *hi } else { *lo };
            }
            NodeKind::Sink(value) => {
                return match semantics {
                    Semantics::Det => *value,
                    Semantics::Zs => {
                        *value
                            && (1..=bp.n() as u32)
                                .map(VarId::new)
                                .all(|v| tested.contains(&v) || !a.bit(v))
                    }
                };
            }
        }
    }
}

pub fn oracle_table(bp: &BranchingProgram, semantics: Semantics) -> TruthTable {
    TruthTable::from_fn(bp.n(), |i| {
        walk_oracle(bp, &Assignment::from_index(bp.n(), i), semantics)
    })
}

/// Independent circuit evaluator: plain recursion from the output gate,
/// no pass ordering, no memo.
pub fn naive_circuit_eval(c: &Circuit, a: &Assignment) -> bool {
    fn rec(c: &Circuit, g: usize, a: &Assignment) -> bool {
        match c.gates()[g] {
            Gate::Input(v) => a.bit(v),
            Gate::Const(b) => b,
            Gate::Not(x) => !rec(c, x.0 as usize, a),
            Gate::And(x, y) => rec(c, x.0 as usize, a) && rec(c, y.0 as usize, a),
            Gate::Or(x, y) => rec(c, x.0 as usize, a) || rec(c, y.0 as usize, a),
        }
    }
    rec(c, c.output().0 as usize, a)
}

/// Random DAG program: inner nodes 0..k-1 with edges pointing at higher
/// indices, sinks at the end, start at 0. Unreachable nodes are allowed —
/// they still count toward size.
pub fn random_program(rng: &mut StdRng, n: usize, max_size: usize) -> BranchingProgram {
    let inner = rng.gen_range(1..=max_size.saturating_sub(2).max(1));
    let sink0 = inner as u32;
    let sink1 = inner as u32 + 1;
    let mut nodes: Vec<(NodeId, NodeKind)> = (0..inner)
        .map(|i| {
            let var = VarId::new(rng.gen_range(1..=n as u32));
            let lo = NodeId(rng.gen_range(i as u32 + 1..=sink1));
            let hi = NodeId(rng.gen_range(i as u32 + 1..=sink1));
            (NodeId(i as u32), NodeKind::Inner { var, lo, hi })
        })
        .collect();
    nodes.push((NodeId(sink0), NodeKind::Sink(false)));
    nodes.push((NodeId(sink1), NodeKind::Sink(true)));
    BranchingProgram::new(n, nodes, NodeId(0))
}

/// Random read-once program, built bottom-up: every candidate node tracks
/// the variables readable below it, and a new node only tests a variable
/// absent below both children. Shared children produce genuine diamonds.
pub fn random_read_once_program(rng: &mut StdRng, n: usize, max_inner: usize) -> BranchingProgram {
    let mut nodes: Vec<(NodeId, NodeKind)> = vec![
        (NodeId(0), NodeKind::Sink(false)),
        (NodeId(1), NodeKind::Sink(true)),
    ];
    let mut below: Vec<BTreeSet<VarId>> = vec![BTreeSet::new(), BTreeSet::new()];
    let mut misses = 0;
    while nodes.len() < max_inner + 2 && misses < 20 {
        let lo = rng.gen_range(0..nodes.len());
        let hi = rng.gen_range(0..nodes.len());
        let used: BTreeSet<VarId> = below[lo].union(&below[hi]).copied().collect();
        let free: Vec<u32> = (1..=n as u32)
            .filter(|&i| !used.contains(&VarId::new(i)))
            .collect();
        if free.is_empty() {
            misses += 1;
            continue;
        }
        let var = VarId::new(free[rng.gen_range(0..free.len())]);
        let id = NodeId(nodes.len() as u32);
        nodes.push((
            id,
            NodeKind::Inner {
                var,
                lo: NodeId(lo as u32),
                hi: NodeId(hi as u32),
            },
        ));
        let mut set = used;
        set.insert(var);
        below.push(set);
    }
    let start = NodeId(nodes.len() as u32 - 1);
    BranchingProgram::new(n, nodes, start)
}

/// Random formula of exactly-bounded depth.
pub fn random_formula(rng: &mut StdRng, n: usize, depth: usize, allow_zsup: bool) -> Formula {
    fn gen(rng: &mut StdRng, n: usize, depth: usize, allow_zsup: bool) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.15) {
                Expr::Const(rng.gen_bool(0.5))
            } else {
                Expr::var(rng.gen_range(1..=n as u32))
            };
        }
        let choices = if allow_zsup { 4 } else { 3 };
        match rng.gen_range(0..choices) {
            0 => Expr::not(gen(rng, n, depth - 1, allow_zsup)),
            1 => Expr::and(
                gen(rng, n, depth - 1, allow_zsup),
                gen(rng, n, depth - 1, allow_zsup),
            ),
            2 => Expr::or(
                gen(rng, n, depth - 1, allow_zsup),
                gen(rng, n, depth - 1, allow_zsup),
            ),
            _ => Expr::zsup(gen(rng, n, depth - 1, allow_zsup)),
        }
    }
    Formula::new(n, gen(rng, n, depth, allow_zsup)).expect("generated variables stay in range")
}

/// Random width-5 permutation program of exactly `len` instructions.
pub fn random_perm_program(rng: &mut StdRng, n: usize, len: usize) -> (PermutationProgram, Perm) {
    let perm = |rng: &mut StdRng| -> Perm {
        let mut p: Perm = [0, 1, 2, 3, 4];
        for i in (1..5).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    };
    let instructions = (0..len)
        .map(|_| Instruction {
            var: VarId::new(rng.gen_range(1..=n as u32)),
            on0: perm(rng),
            on1: perm(rng),
        })
        .collect();
    // Any 5-cycle works as the accept criterion.
    let alpha: Perm = [1, 2, 3, 4, 0];
    (PermutationProgram::new(n, instructions), alpha)
}

/// Width-5 program of exactly `len` instructions whose zero-suppressed
/// table is not constant, so compiling it cannot fold to a single gate.
/// Used for depth-scaling measurements, where a degenerate sample would
/// distort the per-doubling step.
pub fn scaling_program(rng: &mut StdRng, n: usize, len: usize) -> BranchingProgram {
    loop {
        let (program, accept) = random_perm_program(rng, n, len);
        let bp = program.to_branching_program(accept);
        let table = bp
            .truth_table(Semantics::Zs)
            .expect("generated programs are acyclic");
        if table.is_constant().is_none() {
            return bp;
        }
    }
}

/// Random circuit with dense gate ids; the last gate is the output.
pub fn random_circuit(rng: &mut StdRng, n: usize, gates: usize) -> Circuit {
    let mut list: Vec<Gate> = vec![Gate::Input(VarId::new(rng.gen_range(1..=n as u32)))];
    while list.len() < gates {
        let pick = |rng: &mut StdRng| GateId(rng.gen_range(0..list.len() as u32));
        let gate = match rng.gen_range(0..5) {
            0 => Gate::Input(VarId::new(rng.gen_range(1..=n as u32))),
            1 => Gate::Const(rng.gen_bool(0.5)),
            2 => Gate::Not(pick(rng)),
            3 => Gate::And(pick(rng), pick(rng)),
            _ => Gate::Or(pick(rng), pick(rng)),
        };
        list.push(gate);
    }
    let output = GateId(list.len() as u32 - 1);
    Circuit::new(n, list, output).expect("generated circuits are well formed")
}

/// All distinct queried-variable sets observed over every path from the
/// start into each reachable node (the start's entry counts as the empty
/// path). Read-once inputs keep the path count at 2^n or below.
pub fn observed_path_sets(bp: &BranchingProgram) -> BTreeMap<NodeId, BTreeSet<BTreeSet<VarId>>> {
    let mut observed: BTreeMap<NodeId, BTreeSet<BTreeSet<VarId>>> = BTreeMap::new();
    let mut stack = vec![(bp.start(), BTreeSet::new())];
    while let Some((at, set)) = stack.pop() {
        observed.entry(at).or_default().insert(set.clone());
        if let Some(NodeKind::Inner { var, lo, hi }) = bp.kind(at) {
            let mut extended = set;
            extended.insert(*var);
            stack.push((*lo, extended.clone()));
            stack.push((*hi, extended));
        }
    }
    observed
}

/// Decision trees over `n` variables up to the given depth, repeated
/// tests allowed.
#[derive(Debug, Clone)]
pub enum Tree {
    Leaf(bool),
    Node(VarId, Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn eval(&self, a: &Assignment, n: usize, semantics: Semantics) -> bool {
        fn walk(t: &Tree, a: &Assignment, tested: &mut BTreeSet<VarId>) -> bool {
            match t {
                Tree::Leaf(b) => *b,
                Tree::Node(v, lo, hi) => {
                    tested.insert(*v);
                    walk(if a.bit(*v) { hi } else { lo }, a, tested)
                }
            }
        }
        let mut tested = BTreeSet::new();
        let value = walk(self, a, &mut tested);
        match semantics {
            Semantics::Det => value,
            Semantics::Zs => {
                value
                    && (1..=n as u32)
                        .map(VarId::new)
                        .all(|v| tested.contains(&v) || !a.bit(v))
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, lo, hi) => 1 + lo.depth().max(hi.depth()),
        }
    }
}

/// All trees of depth ≤ `depth` over `n` variables, repeats included —
/// only usable for shallow depths, where the count stays in the hundreds.
fn trees_up_to(n: usize, depth: usize) -> Vec<Tree> {
    let mut out = vec![Tree::Leaf(false), Tree::Leaf(true)];
    if depth == 0 {
        return out;
    }
    let shallower = trees_up_to(n, depth - 1);
    for v in 1..=n as u32 {
        for lo in &shallower {
            for hi in &shallower {
                out.push(Tree::Node(
                    VarId::new(v),
                    Box::new(lo.clone()),
                    Box::new(hi.clone()),
                ));
            }
        }
    }
    out
}

/// Visits every decision tree of depth ≤ `depth` over `n` variables
/// (repeated variables included), one at a time; only the subtree pool is
/// kept in memory.
pub fn for_each_tree(n: usize, depth: usize, visit: &mut impl FnMut(&Tree)) {
    visit(&Tree::Leaf(false));
    visit(&Tree::Leaf(true));
    if depth == 0 {
        return;
    }
    let shallower = trees_up_to(n, depth - 1);
    for v in 1..=n as u32 {
        for lo in &shallower {
            for hi in &shallower {
                let tree = Tree::Node(VarId::new(v), Box::new(lo.clone()), Box::new(hi.clone()));
                visit(&tree);
            }
        }
    }
}

/// Minimum achievable tree depth per truth table, by exhaustive tree
/// enumeration: the ground truth the complexity measures must match.
pub fn min_depth_by_enumeration(n: usize, semantics: Semantics) -> BTreeMap<String, usize> {
    let mut best: BTreeMap<String, usize> = BTreeMap::new();
    for_each_tree(n, n, &mut |tree| {
        let table = TruthTable::from_fn(n, |i| {
            tree.eval(&Assignment::from_index(n, i), n, semantics)
        });
        let depth = tree.depth();
        best.entry(table.to_bit_string())
            .and_modify(|d| *d = (*d).min(depth))
            .or_insert(depth);
    });
    best
}

/// Definitional min-max recursion for decision-tree depth, written over
/// completions of a partial assignment with no memoization and no
/// subtable arithmetic.
pub fn definitional_depth(
    table: &TruthTable,
    semantics: Semantics,
    assigned: &mut Vec<Option<bool>>,
) -> usize {
    let n = table.n();
    let completions = |assigned: &Vec<Option<bool>>| -> Vec<(usize, Vec<bool>)> {
        (0..1usize << n)
            .map(|i| {
                let bits: Vec<bool> = (0..n).map(|j| i >> j & 1 == 1).collect();
                (i, bits)
            })
            .filter(|(_, bits)| {
                bits.iter()
                    .zip(assigned.iter())
                    .all(|(b, a)| a.is_none() || a.unwrap() == *b)
            })
            .collect()
    };
    let is_leaf = |assigned: &Vec<Option<bool>>, value: bool| -> bool {
        completions(assigned).into_iter().all(|(i, bits)| {
            let expect = match semantics {
                Semantics::Det => value,
                Semantics::Zs => {
                    value
                        && bits
                            .iter()
                            .zip(assigned.iter())
                            .all(|(b, a)| a.is_some() || !b)
                }
            };
            table.bit(i) == expect
        })
    };
    if is_leaf(assigned, false) || is_leaf(assigned, true) {
        return 0;
    }
    let free: Vec<usize> = (0..n).filter(|&j| assigned[j].is_none()).collect();
    free.iter()
        .map(|&j| {
            let worst = [false, true]
                .into_iter()
                .map(|b| {
                    assigned[j] = Some(b);
                    let d = definitional_depth(table, semantics, assigned);
                    assigned[j] = None;
                    d
                })
                .max()
                .unwrap();
            worst + 1
        })
        .min()
        .expect("a non-constant function has a free variable")
}

//! Width-5 permutation programs from formulas.
//!
//! A permutation program is a list of instructions ⟨var, σ₀, σ₁⟩ over the
//! symmetric group on 5 points; an assignment selects one permutation per
//! instruction and the program's value is their product. A program
//! α-computes a formula `f` (for a 5-cycle α) when the product is α
//! whenever `f` is 1 and the identity whenever `f` is 0. Literals take one
//! instruction; NOT folds α⁻¹ into the last instruction and relabels by
//! conjugation (no length change); AND concatenates the two operands as
//! the commutator σ τ σ⁻¹ τ⁻¹, whose value is a 5-cycle exactly when both
//! operands produced theirs; OR is AND under De Morgan. Realized as a
//! branching program that tracks a single point, the result has width 5.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::bp::{Assignment, BranchingProgram, NodeId, NodeKind, VarId};
use crate::error::{Error, Result};
use crate::formula::{Expr, Formula};

/// A permutation of `{0..4}` as an image array: `p[i]` is where `i` goes.
pub type Perm = [usize; 5];

pub const IDENTITY: Perm = [0, 1, 2, 3, 4];

/// Apply `p`, then `q`.
pub fn mul(p: Perm, q: Perm) -> Perm {
    let mut out = IDENTITY;
    for i in 0..5 {
        out[i] = q[p[i]];
    }
    out
}

pub fn inverse(p: Perm) -> Perm {
    let mut out = IDENTITY;
    for i in 0..5 {
        out[p[i]] = i;
    }
    out
}

fn is_five_cycle(p: Perm) -> bool {
    let mut point = 0;
    for step in 1..=5 {
        point = p[point];
        if point == 0 {
            return step == 5;
        }
    }
    false
}

/// The orbit of 0 under a 5-cycle: `[0, p(0), p²(0), …]`.
fn cycle_seq(p: Perm) -> [usize; 5] {
    debug_assert!(is_five_cycle(p));
    let mut seq = [0; 5];
    for i in 1..5 {
        seq[i] = p[seq[i - 1]];
    }
    seq
}

/// `γ ∘ p ∘ γ⁻¹` as a function.
fn conjugate(p: Perm, gamma: Perm) -> Perm {
    mul(mul(inverse(gamma), p), gamma)
}

/// γ with `conjugate(from, γ) = to`, mapping orbit to orbit.
fn conjugator(from: Perm, to: Perm) -> Perm {
    let (fs, ts) = (cycle_seq(from), cycle_seq(to));
    let mut gamma = IDENTITY;
    for i in 0..5 {
        gamma[fs[i]] = ts[i];
    }
    gamma
}

/// Commutator `σ τ σ⁻¹ τ⁻¹` in program order.
fn commutator(sigma: Perm, tau: Perm) -> Perm {
    mul(mul(mul(sigma, tau), inverse(sigma)), inverse(tau))
}

/// Canonical 5-cycles whose commutator is again a 5-cycle — the base pair
/// every AND is conjugated from.
fn base_pair() -> &'static (Perm, Perm, Perm) {
    static PAIR: OnceLock<(Perm, Perm, Perm)> = OnceLock::new();
    PAIR.get_or_init(|| {
        let sigma: Perm = [1, 2, 3, 4, 0];
        let mut tau = IDENTITY;
        let found = permutations(&mut tau, 0, &mut |tau| {
            is_five_cycle(tau) && is_five_cycle(commutator(sigma, tau))
        });
        assert!(found, "S5 contains a commutator pair of 5-cycles");
        (sigma, tau, commutator(sigma, tau))
    })
}

/// First permutation (in lexicographic generation order) satisfying
/// `pred`, built in place; returns whether one was found.
fn permutations(p: &mut Perm, fixed: usize, pred: &mut impl FnMut(Perm) -> bool) -> bool {
    if fixed == 5 {
        return pred(*p);
    }
    for i in fixed..5 {
        p.swap(fixed, i);
        if permutations(p, fixed + 1, pred) {
            return true;
        }
        p.swap(fixed, i);
    }
    false
}

/// 5-cycles σ, τ with commutator exactly `alpha`.
fn commutator_pair(alpha: Perm) -> (Perm, Perm) {
    let &(sigma, tau, base_alpha) = base_pair();
    let gamma = conjugator(base_alpha, alpha);
    (conjugate(sigma, gamma), conjugate(tau, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instruction {
    pub var: VarId,
    pub on0: Perm,
    pub on1: Perm,
}

/// A width-5 permutation program over `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationProgram {
    n: usize,
    instructions: Vec<Instruction>,
}

impl PermutationProgram {
    pub fn new(n: usize, instructions: Vec<Instruction>) -> PermutationProgram {
        assert!(
            instructions
                .iter()
                .all(|i| i.var.index() as usize <= n && n >= 1),
            "instruction variable outside the universe"
        );
        PermutationProgram { n, instructions }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Product of the selected permutations, in instruction order.
    pub fn eval_perm(&self, a: &Assignment) -> Perm {
        self.instructions.iter().fold(IDENTITY, |acc, instr| {
            mul(
                acc,
                if a.bit(instr.var) {
                    instr.on1
                } else {
                    instr.on0
                },
            )
        })
    }

    /// Realizes the program as a branching program that tracks the image
    /// of point 0 level by level, accepting exactly when the final image
    /// is `accept(0)`. Levels have at most 5 nodes.
    pub fn to_branching_program(&self, accept: Perm) -> BranchingProgram {
        let accept_point = accept[0];
        if self.instructions.is_empty() {
            return BranchingProgram::constant(self.n, accept_point == 0);
        }
        let node_id = |t: usize, point: usize| NodeId((t * 5 + point) as u32);
        let sink_id = |value: bool| NodeId((self.len() * 5 + usize::from(value)) as u32);

        let mut nodes = vec![
            (sink_id(false), NodeKind::Sink(false)),
            (sink_id(true), NodeKind::Sink(true)),
        ];
        let mut frontier: BTreeSet<usize> = [0].into();
        for (t, instr) in self.instructions.iter().enumerate() {
            let mut next = BTreeSet::new();
            let last = t + 1 == self.len();
            for &point in &frontier {
                let branch = |image: usize| {
                    if last {
                        sink_id(image == accept_point)
                    } else {
                        node_id(t + 1, image)
                    }
                };
                nodes.push((
                    node_id(t, point),
                    NodeKind::Inner {
                        var: instr.var,
                        lo: branch(instr.on0[point]),
                        hi: branch(instr.on1[point]),
                    },
                ));
                next.insert(instr.on0[point]);
                next.insert(instr.on1[point]);
            }
            frontier = next;
        }
        BranchingProgram::new(self.n, nodes, node_id(0, 0))
    }
}

/// Instructions that α-compute `e`. `e` must be zero-suppression-free.
fn realize(e: &Expr, alpha: Perm) -> Vec<Instruction> {
    match e {
        Expr::Const(b) => {
            let perm = if *b { alpha } else { IDENTITY };
            vec![Instruction {
                var: VarId::new(1),
                on0: perm,
                on1: perm,
            }]
        }
        Expr::Var(v) => vec![Instruction {
            var: *v,
            on0: IDENTITY,
            on1: alpha,
        }],
        Expr::Not(f) => {
            let mut p = realize(f, alpha);
            let undo = inverse(alpha);
            let last = p.last_mut().expect("realizations are nonempty");
            last.on0 = mul(last.on0, undo);
            last.on1 = mul(last.on1, undo);
            // p now α⁻¹-computes ¬f; relabel back to α.
            conjugate_all(&mut p, conjugator(undo, alpha));
            p
        }
        Expr::And(f, g) => {
            let (sigma, tau) = commutator_pair(alpha);
            let p = realize(f, sigma);
            let q = realize(g, tau);
            let mut p_undo = p.clone();
            conjugate_all(&mut p_undo, conjugator(sigma, inverse(sigma)));
            let mut q_undo = q.clone();
            conjugate_all(&mut q_undo, conjugator(tau, inverse(tau)));
            [p, q, p_undo, q_undo].concat()
        }
        Expr::Or(f, g) => {
            // De Morgan: ¬(¬f ∧ ¬g).
            let rewritten = Expr::not(Expr::and(
                Expr::not((**f).clone()),
                Expr::not((**g).clone()),
            ));
            realize(&rewritten, alpha)
        }
        Expr::Zsup(_) => unreachable!("callers reject zero-suppression first"),
    }
}

fn conjugate_all(instructions: &mut [Instruction], gamma: Perm) {
    for instr in instructions {
        instr.on0 = conjugate(instr.on0, gamma);
        instr.on1 = conjugate(instr.on1, gamma);
    }
}

/// The permutation program α-computing `f`, along with α.
pub fn barrington_program(f: &Formula) -> Result<(PermutationProgram, Perm)> {
    if f.has_zsup() {
        return Err(Error::ZsupNotAllowed);
    }
    let alpha: Perm = [1, 2, 3, 4, 0];
    let program = PermutationProgram::new(f.n(), realize(f.root(), alpha));
    Ok((program, alpha))
}

/// Formula to width-5 branching program with the formula's deterministic
/// truth table.
pub fn barrington(f: &Formula) -> Result<BranchingProgram> {
    let (program, alpha) = barrington_program(f)?;
    Ok(program.to_branching_program(alpha))
}

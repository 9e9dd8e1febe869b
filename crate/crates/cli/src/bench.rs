//! Size comparison across representations of one function family: a
//! hand-shaped deterministic program, its two zero-suppressed
//! conversions, a disjunctive normal form, the compiled circuit, and the
//! width-5 simulation of a balanced normal form.

use anyhow::{bail, Result};
use zsbp::{
    barrington, compile_zs_to_circuit, det_to_zs, gen_family, ro_det_to_zs, BranchingProgram, Expr,
    Family, Formula, NodeId, NodeKind, TruthTable, VarId,
};

/// Width-5 simulation is skipped when it would exceed this many
/// instructions; the blow-up is exponential in formula depth.
const WIDTH5_INSTRUCTION_CAP: usize = 100_000;

pub fn run(family: Family, lo: usize, hi: usize, k: Option<usize>) -> Result<()> {
    let k = match family {
        Family::ExactlyK => Some(k.unwrap_or(1)),
        _ if k.is_some() => bail!("k is only meaningful for exactly-k"),
        _ => None,
    };
    let lo = lo.max(k.unwrap_or(0));
    if lo > hi {
        bail!("k leaves no rows in the range");
    }
    println!(
        "{:>3}  {:>7}  {:>6}  {:>9}  {:>6}  {:>14}  {:>7}",
        "n", "program", "det2zs", "ro-det2zs", "dnf", "circuit(s/d)", "width5"
    );
    for n in lo..=hi {
        let table = gen_family(family, n, k)?;
        let program = family_program(family, n, k);
        debug_assert_eq!(program.truth_table(zsbp::Semantics::Det).unwrap(), table);
        let chain = det_to_zs(&program);
        let read_once = ro_det_to_zs(&program)?;
        let dnf = Formula::dnf_of_table(&table)?;
        let circuit = compile_zs_to_circuit(&chain)?;
        let width5 = {
            let balanced = balanced_dnf(&table)?;
            if instruction_count(balanced.root()) <= WIDTH5_INSTRUCTION_CAP {
                barrington(&balanced)?.size().to_string()
            } else {
                "-".to_string()
            }
        };
        println!(
            "{n:>3}  {:>7}  {:>6}  {:>9}  {:>6}  {:>14}  {width5:>7}",
            program.size(),
            chain.size(),
            read_once.size(),
            dnf.size(),
            format!("{}/{}", circuit.size(), circuit.depth()),
        );
    }
    Ok(())
}

/// A compact deterministic read-once program for the family.
fn family_program(family: Family, n: usize, k: Option<usize>) -> BranchingProgram {
    match family {
        Family::Const1 => BranchingProgram::constant(n, true),
        Family::AndOfNegations => negation_chain(n),
        Family::ExactlyK => counting_program(n, k.expect("validated by caller")),
    }
}

/// Chain that rejects at the first 1 and accepts past the last variable.
fn negation_chain(n: usize) -> BranchingProgram {
    let reject = NodeId(n as u32);
    let accept = NodeId(n as u32 + 1);
    let mut nodes = vec![
        (reject, NodeKind::Sink(false)),
        (accept, NodeKind::Sink(true)),
    ];
    for i in 0..n {
        let lo = if i + 1 < n {
            NodeId(i as u32 + 1)
        } else {
            accept
        };
        nodes.push((
            NodeId(i as u32),
            NodeKind::Inner {
                var: VarId::new(i as u32 + 1),
                lo,
                hi: reject,
            },
        ));
    }
    BranchingProgram::new(n, nodes, NodeId(0))
}

/// Leveled counter: state (i, c) means c ones among the first i
/// variables, with counts above k merged into one overflow state.
fn counting_program(n: usize, k: usize) -> BranchingProgram {
    let cap = k + 1;
    let width = |i: usize| i.min(cap) + 1;
    let mut offset = vec![0u32; n + 1];
    for i in 0..n {
        offset[i + 1] = offset[i] + width(i) as u32;
    }
    let reject = NodeId(offset[n]);
    let accept = NodeId(offset[n] + 1);
    let target = |i: usize, c: usize| {
        if i == n {
            if c == k {
                accept
            } else {
                reject
            }
        } else {
            NodeId(offset[i] + c as u32)
        }
    };
    let mut nodes = vec![
        (reject, NodeKind::Sink(false)),
        (accept, NodeKind::Sink(true)),
    ];
    for i in 0..n {
        for c in 0..width(i) {
            nodes.push((
                target(i, c),
                NodeKind::Inner {
                    var: VarId::new(i as u32 + 1),
                    lo: target(i + 1, c),
                    hi: target(i + 1, (c + 1).min(cap)),
                },
            ));
        }
    }
    BranchingProgram::new(n, nodes, NodeId(0))
}

/// Disjunctive normal form with balanced conjunctions and disjunctions,
/// keeping the depth logarithmic so width-5 simulation stays feasible.
fn balanced_dnf(table: &TruthTable) -> Result<Formula> {
    let n = table.n();
    let minterms: Vec<Expr> = (0..table.len())
        .filter(|&i| table.bit(i))
        .map(|i| {
            let literals = (0..n)
                .map(|j| {
                    let v = Expr::var(j as u32 + 1);
                    if i >> j & 1 == 1 {
                        v
                    } else {
                        Expr::not(v)
                    }
                })
                .collect();
            join_balanced(literals, Expr::and)
        })
        .collect();
    let root = if minterms.is_empty() {
        Expr::Const(false)
    } else {
        join_balanced(minterms, Expr::or)
    };
    Ok(Formula::new(n, root)?)
}

fn join_balanced(mut items: Vec<Expr>, join: fn(Expr, Expr) -> Expr) -> Expr {
    assert!(!items.is_empty());
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(join(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop().unwrap()
}

/// Instruction count the width-5 simulation of `e` will need.
fn instruction_count(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 1,
        Expr::Not(f) => instruction_count(f),
        Expr::And(f, g) | Expr::Or(f, g) => {
            2usize.saturating_mul(instruction_count(f).saturating_add(instruction_count(g)))
        }
        Expr::Zsup(f) => instruction_count(f),
    }
}

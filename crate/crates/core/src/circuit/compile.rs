//! Lowering leveled transition systems to fan-in-2 circuits.
//!
//! Each level becomes a [`LevelMap`]: per source slot, `⌈log₂ d⌉` gate
//! bits naming the target slot plus `n` gate bits for the variables the
//! step puts on the path. Adjacent maps are composed pairwise, so the
//! final map is reached in `⌈log₂ L⌉` rounds; a composition selects a row
//! of the second map with a one-hot selector tree driven by the first
//! map's target bits, and ORs the first map's mask into the selector
//! output so mask bookkeeping adds no depth of its own. The final decode
//! accepts when the start row's target names the accept slot and every
//! variable off the accumulated mask is 0.

use crate::bp::{BranchingProgram, VarId};
use crate::error::Result;

use super::lts::{levelize_zs, Entry, LeveledTransitionSystem};
use super::{Circuit, CircuitBuilder, GateId};

/// Multiplier on `(⌈log₂ w⌉+1)·(⌈log₂ L⌉+1)` in the depth bound.
pub const DEPTH_LEVEL_FACTOR: usize = 4;
/// Multiplier on `⌈log₂ n⌉` in the depth bound (the final all-zeros check).
pub const DEPTH_INPUT_FACTOR: usize = 4;

/// Guaranteed ceiling on compiled depth for a system of width `w` with
/// `levels` levels over `n` variables.
pub fn depth_bound(w: usize, levels: usize, n: usize) -> usize {
    DEPTH_LEVEL_FACTOR * (ceil_log2(w) + 1) * (ceil_log2(levels) + 1)
        + DEPTH_INPUT_FACTOR * ceil_log2(n)
}

/// Smallest `k` with `2^k ≥ x`; 0 for `x ≤ 1`.
fn ceil_log2(x: usize) -> usize {
    (x.max(1) - 1).checked_ilog2().map_or(0, |b| b as usize + 1)
}

/// A level range as a function of the inputs: one row per source slot,
/// each row naming its target slot (binary, LSB first) and the mask
/// accumulated across the range.
#[derive(Debug, Clone)]
struct LevelMap {
    rows: Vec<Row>,
    out_domain: usize,
}

#[derive(Debug, Clone)]
struct Row {
    target: Vec<GateId>,
    mask: Vec<GateId>,
}

fn mux(b: &mut CircuitBuilder, sel: GateId, on0: GateId, on1: GateId) -> GateId {
    let hi = b.and(sel, on1);
    let nsel = b.not(sel);
    let lo = b.and(nsel, on0);
    b.or(hi, lo)
}

fn const_bits(b: &mut CircuitBuilder, value: usize, bits: usize) -> Vec<GateId> {
    (0..bits).map(|k| b.constant(value >> k & 1 == 1)).collect()
}

fn encode_level(b: &mut CircuitBuilder, level: &[Entry], out_domain: usize, n: usize) -> LevelMap {
    let bits = ceil_log2(out_domain);
    let rows = level
        .iter()
        .map(|entry| match entry {
            Entry::Pass { to } => Row {
                target: const_bits(b, *to, bits),
                mask: vec![b.constant(false); n],
            },
            Entry::Query { var, on0, on1 } => {
                let xv = b.input(*var);
                let target = (0..bits)
                    .map(|k| {
                        let lo = b.constant(on0.to >> k & 1 == 1);
                        let hi = b.constant(on1.to >> k & 1 == 1);
                        mux(b, xv, lo, hi)
                    })
                    .collect();
                let mask = (1..=n as u32)
                    .map(|j| {
                        let j = VarId::new(j);
                        let lo = b.constant(on0.mask.contains(&j));
                        let hi = b.constant(on1.mask.contains(&j));
                        mux(b, xv, lo, hi)
                    })
                    .collect();
                Row { target, mask }
            }
        })
        .collect();
    LevelMap { rows, out_domain }
}

/// `first` then `second`. Each row of the result routes the row's target
/// through `second`: a one-hot indicator per `second` row, target bits
/// selected through OR trees, and the row's own mask fused into the mask
/// selectors as one extra leaf.
fn compose(b: &mut CircuitBuilder, first: &LevelMap, second: &LevelMap, n: usize) -> LevelMap {
    let mid_bits = ceil_log2(first.out_domain);
    let out_bits = ceil_log2(second.out_domain);
    let rows = first
        .rows
        .iter()
        .map(|row| {
            debug_assert_eq!(row.target.len(), mid_bits);
            let indicators: Vec<GateId> = (0..second.rows.len())
                .map(|idx| {
                    let literals: Vec<GateId> = (0..mid_bits)
                        .map(|k| {
                            if idx >> k & 1 == 1 {
                                row.target[k]
                            } else {
                                b.not(row.target[k])
                            }
                        })
                        .collect();
                    b.and_tree(&literals)
                })
                .collect();
            let select = |b: &mut CircuitBuilder, pick: &dyn Fn(&Row) -> GateId, extra| {
                let mut terms: Vec<GateId> = indicators
                    .iter()
                    .zip(&second.rows)
                    .map(|(&ind, row)| {
                        let bit = pick(row);
                        b.and(ind, bit)
                    })
                    .collect();
                terms.extend(extra);
                b.or_tree(&terms)
            };
            let target = (0..out_bits)
                .map(|k| select(b, &|r: &Row| r.target[k], None))
                .collect();
            let mask = (0..n)
                .map(|j| select(b, &|r: &Row| r.mask[j], Some(row.mask[j])))
                .collect();
            Row { target, mask }
        })
        .collect();
    LevelMap {
        rows,
        out_domain: second.out_domain,
    }
}

/// Output gate for a fully composed map: start row's target equals the
/// accept slot, and every variable its mask exempts nothing for is 0.
fn decode(
    b: &mut CircuitBuilder,
    map: &LevelMap,
    start_index: usize,
    accept_index: usize,
    n: usize,
) -> GateId {
    let row = &map.rows[start_index];
    let literals: Vec<GateId> = row
        .target
        .iter()
        .enumerate()
        .map(|(k, &bit)| {
            if accept_index >> k & 1 == 1 {
                bit
            } else {
                b.not(bit)
            }
        })
        .collect();
    let accepted = b.and_tree(&literals);
    let zero_checks: Vec<GateId> = (1..=n as u32)
        .map(|j| {
            let xj = b.input(VarId::new(j));
            let nxj = b.not(xj);
            b.or(row.mask[j as usize - 1], nxj)
        })
        .collect();
    let all_zero = b.and_tree(&zero_checks);
    b.and(accepted, all_zero)
}

/// Compiles a leveled system to a circuit computing its run semantics.
pub fn compile_lts(lts: &LeveledTransitionSystem) -> Circuit {
    let n = lts.n();
    let mut builder = CircuitBuilder::new(n);
    let mut maps: Vec<LevelMap> = lts
        .levels()
        .iter()
        .enumerate()
        .map(|(t, level)| encode_level(&mut builder, level, lts.out_domain(t), n))
        .collect();
    while maps.len() > 1 {
        maps = maps
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => compose(&mut builder, a, b, n),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    let output = decode(
        &mut builder,
        &maps[0],
        lts.start_index(),
        lts.accept_index(),
        n,
    );
    builder.finish(output)
}

/// Compiles a program's zero-suppressed semantics to a circuit:
/// levelization followed by [`compile_lts`]. The result's truth table
/// equals `eval_zs` pointwise, with depth at most
/// [`depth_bound`]`(width, levels, n)`.
pub fn compile_zs_to_circuit(bp: &BranchingProgram) -> Result<Circuit> {
    Ok(compile_lts(&levelize_zs(bp)?))
}

//! Fan-in-2 Boolean circuits and the compiler from zero-suppressed
//! programs to them.
//!
//! [`Circuit`] is the gate-level carrier; [`lts`] holds the leveled
//! transition IR the compiler works on; [`compile`] lowers the IR to
//! gates; [`barrington`] builds width-5 programs from formulas so the
//! whole formula-to-program-to-circuit pipeline can be exercised.

pub mod barrington;
pub mod compile;
pub mod lts;

use std::collections::HashMap;
use std::fmt;

use crate::bp::{Assignment, VarId, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::table::TruthTable;

/// Index into a circuit's gate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateId(pub u32);

impl GateId {
    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(VarId),
    Const(bool),
    Not(GateId),
    And(GateId, GateId),
    Or(GateId, GateId),
}

impl Gate {
    fn operands(&self) -> impl Iterator<Item = GateId> {
        let (a, b) = match *self {
            Gate::Input(_) | Gate::Const(_) => (None, None),
            Gate::Not(g) => (Some(g), None),
            Gate::And(a, b) | Gate::Or(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

/// A combinational circuit over inputs `x1..xn`. Gates are stored in
/// topological order (operands always point at earlier gates) and ids are
/// dense, so evaluation is a single forward pass. Size and depth are
/// always recomputed from the gate list, never taken from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    output: GateId,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>, output: GateId) -> Result<Circuit> {
        if gates.is_empty() {
            return Err(Error::BadParameter("circuit has no gates".into()));
        }
        for (i, gate) in gates.iter().enumerate() {
            if let Gate::Input(v) = gate {
                if v.index() as usize > n {
                    return Err(Error::VarOutOfRange { var: v.index(), n });
                }
            }
            if let Some(bad) = gate.operands().find(|g| g.idx() >= i) {
                return Err(Error::BadParameter(format!(
                    "gate g{i} references {bad}, which is not an earlier gate"
                )));
            }
        }
        if output.idx() >= gates.len() {
            return Err(Error::BadParameter(format!(
                "output {output} is not a gate"
            )));
        }
        Ok(Circuit { n, gates, output })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    /// Gate count.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Longest path from an input or constant to the output gate; a bare
    /// input has depth 0.
    pub fn depth(&self) -> usize {
        let mut depths = vec![0usize; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            depths[i] = match gate.operands().map(|g| depths[g.idx()]).max() {
                Some(d) => d + 1,
                None => 0,
            };
        }
        depths[self.output.idx()]
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        assert_eq!(a.n(), self.n, "assignment width must match the circuit");
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let value = match *gate {
                Gate::Input(v) => a.bit(v),
                Gate::Const(b) => b,
                Gate::Not(g) => !values[g.idx()],
                Gate::And(g, h) => values[g.idx()] && values[h.idx()],
                Gate::Or(g, h) => values[g.idx()] || values[h.idx()],
            };
            values.push(value);
        }
        values[self.output.idx()]
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        self.truth_table_capped(DEFAULT_ENUM_CAP)
    }

    pub fn truth_table_capped(&self, cap: usize) -> Result<TruthTable> {
        if self.n > cap {
            return Err(Error::TooManyVariables { n: self.n, cap });
        }
        Ok(TruthTable::from_fn(self.n, |i| {
            self.eval(&Assignment::from_index(self.n, i))
        }))
    }

    /// Parses the line-oriented circuit format:
    ///
    /// ```text
    /// inputs 3
    /// g0 = INPUT x1
    /// g1 = NOT g0
    /// output g1
    /// ```
    ///
    /// Gate ids must be dense and in order; blank lines and `#` comments
    /// are ignored.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, msg: String| Error::ParseError { line, msg };

        let (line, header) = lines
            .next()
            .ok_or_else(|| err(0, "empty circuit file".into()))?;
        let n = header
            .strip_prefix("inputs ")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or_else(|| err(line, format!("expected `inputs <n>`, found `{header}`")))?;

        let mut gates = Vec::new();
        let mut output = None;
        for (line, text) in lines {
            if output.is_some() {
                return Err(err(line, format!("unexpected line after output: `{text}`")));
            }
            if let Some(rest) = text.strip_prefix("output ") {
                let id = parse_gate_ref(rest.trim(), gates.len(), line)?;
                output = Some(id);
                continue;
            }
            let (lhs, rhs) = text
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `g<id> = ...`, found `{text}`")))?;
            let id = parse_gate_ref(lhs.trim(), usize::MAX, line)?;
            if id.idx() != gates.len() {
                return Err(err(
                    line,
                    format!("expected g{}, found {}", gates.len(), id),
                ));
            }
            gates.push(parse_gate(rhs.trim(), gates.len(), line)?);
        }
        let output = output.ok_or_else(|| err(0, "missing `output` line".into()))?;
        Circuit::new(n, gates, output).map_err(|e| match e {
            Error::BadParameter(msg) => err(0, msg),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("inputs {}\n", self.n);
        for (i, gate) in self.gates.iter().enumerate() {
            let rhs = match *gate {
                Gate::Input(v) => format!("INPUT {v}"),
                Gate::Const(b) => format!("CONST {}", u8::from(b)),
                Gate::Not(g) => format!("NOT {g}"),
                Gate::And(g, h) => format!("AND {g} {h}"),
                Gate::Or(g, h) => format!("OR {g} {h}"),
            };
            out.push_str(&format!("g{i} = {rhs}\n"));
        }
        out.push_str(&format!("output {}\n", self.output));
        out
    }
}

fn parse_gate_ref(text: &str, limit: usize, line: usize) -> Result<GateId> {
    text.strip_prefix('g')
        .and_then(|d| d.parse::<u32>().ok())
        .filter(|&i| (i as usize) < limit)
        .map(GateId)
        .ok_or(Error::ParseError {
            line,
            msg: format!("bad gate reference `{text}`"),
        })
}

fn parse_gate(rhs: &str, id: usize, line: usize) -> Result<Gate> {
    let err = |msg: String| Error::ParseError { line, msg };
    let mut words = rhs.split_whitespace();
    let op = words
        .next()
        .ok_or_else(|| err("missing gate kind".into()))?;
    let mut operand = |what: &str| {
        words
            .next()
            .map(str::to_owned)
            .ok_or_else(|| err(format!("missing {what} in `{rhs}`")))
    };
    let gate = match op {
        "INPUT" => {
            let v = operand("input variable")?;
            let index: u32 = v
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| err(format!("bad input variable `{v}`")))?;
            Gate::Input(VarId::new(index))
        }
        "CONST" => match operand("constant bit")?.as_str() {
            "0" => Gate::Const(false),
            "1" => Gate::Const(true),
            other => return Err(err(format!("bad constant `{other}`"))),
        },
        "NOT" => Gate::Not(parse_gate_ref(&operand("operand")?, id, line)?),
        "AND" => Gate::And(
            parse_gate_ref(&operand("operand")?, id, line)?,
            parse_gate_ref(&operand("operand")?, id, line)?,
        ),
        "OR" => Gate::Or(
            parse_gate_ref(&operand("operand")?, id, line)?,
            parse_gate_ref(&operand("operand")?, id, line)?,
        ),
        other => return Err(err(format!("unknown gate kind `{other}`"))),
    };
    if words.next().is_some() {
        return Err(err(format!("trailing tokens in `{rhs}`")));
    }
    Ok(gate)
}

/// Incrementally builds a circuit with constant folding and structural
/// sharing: equal gates are created once, double negations cancel, and
/// constants propagate. The compiler leans on this so that bookkeeping
/// gates cost neither size nor depth.
#[derive(Debug)]
pub struct CircuitBuilder {
    n: usize,
    gates: Vec<Gate>,
    dedup: HashMap<Gate, GateId>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> CircuitBuilder {
        CircuitBuilder {
            n,
            gates: Vec::new(),
            dedup: HashMap::new(),
        }
    }

    fn intern(&mut self, gate: Gate) -> GateId {
        if let Some(&id) = self.dedup.get(&gate) {
            return id;
        }
        let id = GateId(self.gates.len() as u32);
        self.gates.push(gate);
        self.dedup.insert(gate, id);
        id
    }

    fn value_of(&self, id: GateId) -> Option<bool> {
        match self.gates[id.idx()] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn constant(&mut self, b: bool) -> GateId {
        self.intern(Gate::Const(b))
    }

    pub fn input(&mut self, v: VarId) -> GateId {
        assert!(
            v.index() as usize <= self.n,
            "input {v} outside the declared universe"
        );
        self.intern(Gate::Input(v))
    }

    pub fn not(&mut self, g: GateId) -> GateId {
        if let Some(b) = self.value_of(g) {
            return self.constant(!b);
        }
        if let Gate::Not(inner) = self.gates[g.idx()] {
            return inner;
        }
        self.intern(Gate::Not(g))
    }

    pub fn and(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.value_of(a), self.value_of(b)) {
            (Some(false), _) | (_, Some(false)) => return self.constant(false),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.gates[a.idx()] == Gate::Not(b) || self.gates[b.idx()] == Gate::Not(a) {
            return self.constant(false);
        }
        self.intern(Gate::And(a.min(b), a.max(b)))
    }

    pub fn or(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.value_of(a), self.value_of(b)) {
            (Some(true), _) | (_, Some(true)) => return self.constant(true),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.gates[a.idx()] == Gate::Not(b) || self.gates[b.idx()] == Gate::Not(a) {
            return self.constant(true);
        }
        self.intern(Gate::Or(a.min(b), a.max(b)))
    }

    /// Balanced conjunction; the empty conjunction is `1`.
    pub fn and_tree(&mut self, gates: &[GateId]) -> GateId {
        self.tree(gates, true)
    }

    /// Balanced disjunction; the empty disjunction is `0`.
    pub fn or_tree(&mut self, gates: &[GateId]) -> GateId {
        self.tree(gates, false)
    }

    fn tree(&mut self, gates: &[GateId], conjunction: bool) -> GateId {
        if gates.is_empty() {
            return self.constant(conjunction);
        }
        let mut layer = gates.to_vec();
        while layer.len() > 1 {
            layer = layer
                .chunks(2)
                .map(|pair| match *pair {
                    [a, b] => {
                        if conjunction {
                            self.and(a, b)
                        } else {
                            self.or(a, b)
                        }
                    }
                    [a] => a,
                    _ => unreachable!(),
                })
                .collect();
        }
        layer[0]
    }

    /// Finalizes the circuit: gates not feeding `output` are dropped and
    /// the rest renumbered, so the result is deterministic no matter how
    /// much speculative structure was built along the way.
    pub fn finish(self, output: GateId) -> Circuit {
        let mut live = vec![false; self.gates.len()];
        live[output.idx()] = true;
        for i in (0..self.gates.len()).rev() {
            if live[i] {
                for g in self.gates[i].operands() {
                    live[g.idx()] = true;
                }
            }
        }
        let mut renumber = vec![GateId(0); self.gates.len()];
        let mut gates = Vec::new();
        for (i, gate) in self.gates.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let remapped = match *gate {
                Gate::Not(g) => Gate::Not(renumber[g.idx()]),
                Gate::And(g, h) => Gate::And(renumber[g.idx()], renumber[h.idx()]),
                Gate::Or(g, h) => Gate::Or(renumber[g.idx()], renumber[h.idx()]),
                leaf => leaf,
            };
            renumber[i] = GateId(gates.len() as u32);
            gates.push(remapped);
        }
        Circuit {
            n: self.n,
            gates,
            output: renumber[output.idx()],
        }
    }
}

/// Straightforward translation of a zero-suppression-free formula: one
/// gate per connective.
pub fn formula_to_circuit(f: &crate::formula::Formula) -> Result<Circuit> {
    use crate::formula::Expr;

    fn build(e: &Expr, b: &mut CircuitBuilder) -> Result<GateId> {
        Ok(match e {
            Expr::Const(v) => b.constant(*v),
            Expr::Var(v) => b.input(*v),
            Expr::Not(f) => {
                let g = build(f, b)?;
                b.not(g)
            }
            Expr::And(f, g) => {
                let (gf, gg) = (build(f, b)?, build(g, b)?);
                b.and(gf, gg)
            }
            Expr::Or(f, g) => {
                let (gf, gg) = (build(f, b)?, build(g, b)?);
                b.or(gf, gg)
            }
            Expr::Zsup(_) => return Err(Error::ZsupNotAllowed),
        })
    }

    let mut builder = CircuitBuilder::new(f.n());
    let output = build(f.root(), &mut builder)?;
    Ok(builder.finish(output))
}

//! Boolean formulas with a zero-suppression operator.
//!
//! Besides the usual connectives, the language has `Z(f)`: it evaluates to
//! 1 iff `f` does and every variable of the universe that does not occur
//! syntactically in `f` is assigned 0 — the formula-level counterpart of
//! the zero-suppressed side condition on programs.
//!
//! Grammar (whitespace insignificant, parentheses mandatory on binary
//! connectives):
//!
//! ```text
//! F := '0' | '1' | 'x'INT | '!'F | '(' F '&' F ')' | '(' F '|' F ')' | 'Z(' F ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::bp::{Assignment, VarId};
use crate::error::{Error, Result};
use crate::table::TruthTable;

/// Formula AST node. Variables are 1-based, like everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Var(VarId),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Zsup(Box<Expr>),
}

impl Expr {
    pub fn var(i: u32) -> Expr {
        Expr::Var(VarId::new(i))
    }

    // Deliberately shadows the name of `std::ops::Not::not`: this is a
    // constructor taking the operand by value, not a negation of self.
    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn zsup(e: Expr) -> Expr {
        Expr::Zsup(Box::new(e))
    }
}

/// A formula together with its declared variable universe `x1..xn`.
///
/// The universe matters beyond bounds-checking: `Z(f)` constrains exactly
/// the universe variables missing from `f`, so the same expression denotes
/// different functions under different `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: usize,
    root: Expr,
}

impl Formula {
    pub fn new(n: usize, root: Expr) -> Result<Formula> {
        if n == 0 {
            return Err(Error::BadParameter(
                "formula universe must have at least one variable".into(),
            ));
        }
        let mut vars = BTreeSet::new();
        collect_vars(&root, &mut vars);
        if let Some(&var) = vars.iter().rev().find(|v| v.index() as usize > n) {
            return Err(Error::VarOutOfRange {
                var: var.index(),
                n,
            });
        }
        Ok(Formula { n, root })
    }

    /// Parses a formula over the universe `x1..xn`.
    pub fn parse(text: &str, n: usize) -> Result<Formula> {
        if n == 0 {
            return Err(Error::BadParameter(
                "formula universe must have at least one variable".into(),
            ));
        }
        let mut parser = Parser { text, pos: 0, n };
        let root = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.text.len() {
            return Err(parser.syntax_error("unexpected trailing input"));
        }
        Ok(Formula { n, root })
    }

    /// Parses the two-line file format: `vars <n>` then the formula.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_file(text: &str) -> Result<Formula> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::ParseError {
            line: 0,
            msg: "empty formula file".into(),
        })?;
        let n = header
            .strip_prefix("vars ")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or(Error::ParseError {
                line,
                msg: format!("expected `vars <n>`, found `{header}`"),
            })?;
        let (line, body) = lines.next().ok_or(Error::ParseError {
            line: 0,
            msg: "missing formula line".into(),
        })?;
        if let Some((extra_line, extra)) = lines.next() {
            return Err(Error::ParseError {
                line: extra_line,
                msg: format!("unexpected extra line `{extra}`"),
            });
        }
        Formula::parse(body, n).map_err(|e| match e {
            Error::SyntaxError { pos, msg } => Error::ParseError {
                line,
                msg: format!("column {}: {msg}", pos + 1),
            },
            other => other,
        })
    }

    pub fn to_file_text(&self) -> String {
        format!("vars {}\n{}\n", self.n, self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Variables occurring syntactically, including under negations —
    /// `x1 & !x1` still contains `x1`.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut vars = BTreeSet::new();
        collect_vars(&self.root, &mut vars);
        vars
    }

    pub fn has_zsup(&self) -> bool {
        has_zsup(&self.root)
    }

    /// AST node count.
    pub fn size(&self) -> usize {
        size(&self.root)
    }

    /// Operator nesting depth; constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        depth(&self.root)
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        assert_eq!(a.n(), self.n, "assignment width must match the universe");
        eval(&self.root, a, self.n)
    }

    pub fn truth_table(&self) -> TruthTable {
        TruthTable::from_fn(self.n, |i| self.eval(&Assignment::from_index(self.n, i)))
    }

    /// The plain disjunctive normal form of a truth table: one conjunct of
    /// `n` literals per satisfying assignment, right-nested. An
    /// unsatisfiable table becomes `0`.
    pub fn dnf_of_table(table: &TruthTable) -> Result<Formula> {
        let n = table.n();
        if n == 0 {
            return Err(Error::BadParameter(
                "formula universe must have at least one variable".into(),
            ));
        }
        let minterm = |index: usize| {
            let a = Assignment::from_index(n, index);
            (1..=n as u32)
                .rev()
                .map(|i| {
                    let lit = Expr::var(i);
                    if a.bit(VarId::new(i)) {
                        lit
                    } else {
                        Expr::not(lit)
                    }
                })
                .reduce(|rhs, lhs| Expr::and(lhs, rhs))
                .expect("n >= 1")
        };
        let root = (0..table.len())
            .rev()
            .filter(|&i| table.bit(i))
            .map(minterm)
            .reduce(|rhs, lhs| Expr::or(lhs, rhs))
            .unwrap_or(Expr::Const(false));
        Formula::new(n, root)
    }
}

fn collect_vars(e: &Expr, out: &mut BTreeSet<VarId>) {
    match e {
        Expr::Const(_) => {}
        Expr::Var(v) => {
            out.insert(*v);
        }
        Expr::Not(f) | Expr::Zsup(f) => collect_vars(f, out),
        Expr::And(f, g) | Expr::Or(f, g) => {
            collect_vars(f, out);
            collect_vars(g, out);
        }
    }
}

fn has_zsup(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Var(_) => false,
        Expr::Not(f) => has_zsup(f),
        Expr::And(f, g) | Expr::Or(f, g) => has_zsup(f) || has_zsup(g),
        Expr::Zsup(_) => true,
    }
}

fn size(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 1,
        Expr::Not(f) | Expr::Zsup(f) => 1 + size(f),
        Expr::And(f, g) | Expr::Or(f, g) => 1 + size(f) + size(g),
    }
}

fn depth(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 0,
        Expr::Not(f) | Expr::Zsup(f) => 1 + depth(f),
        Expr::And(f, g) | Expr::Or(f, g) => 1 + depth(f).max(depth(g)),
    }
}

fn eval(e: &Expr, a: &Assignment, n: usize) -> bool {
    match e {
        Expr::Const(b) => *b,
        Expr::Var(v) => a.bit(*v),
        Expr::Not(f) => !eval(f, a, n),
        Expr::And(f, g) => eval(f, a, n) && eval(g, a, n),
        Expr::Or(f, g) => eval(f, a, n) || eval(g, a, n),
        Expr::Zsup(f) => {
            if !eval(f, a, n) {
                return false;
            }
            let mut vars = BTreeSet::new();
            collect_vars(f, &mut vars);
            (1..=n as u32)
                .map(VarId::new)
                .all(|v| vars.contains(&v) || !a.bit(v))
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(b) => write!(f, "{}", u8::from(*b)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Not(e) => write!(f, "!{e}"),
            Expr::And(a, b) => write!(f, "({a}&{b})"),
            Expr::Or(a, b) => write!(f, "({a}|{b})"),
            Expr::Zsup(e) => write!(f, "Z({e})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax_error(&format!("expected `{}`", c as char)))
        }
    }

    fn syntax_error(&self, msg: &str) -> Error {
        Error::SyntaxError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some(b'x') => {
                self.pos += 1;
                self.variable()
            }
            Some(b'!') => {
                self.pos += 1;
                Ok(Expr::not(self.expr()?))
            }
            Some(b'Z') => {
                self.pos += 1;
                self.skip_ws();
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(Expr::zsup(inner))
            }
            Some(b'(') => {
                self.pos += 1;
                let lhs = self.expr()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(op @ (b'&' | b'|')) => op,
                    _ => return Err(self.syntax_error("expected `&` or `|`")),
                };
                self.pos += 1;
                let rhs = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(if op == b'&' {
                    Expr::and(lhs, rhs)
                } else {
                    Expr::or(lhs, rhs)
                })
            }
            _ => Err(self.syntax_error("expected a formula")),
        }
    }

    fn variable(&mut self) -> Result<Expr> {
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax_error("expected a variable index after `x`"));
        }
        let index: u32 = self.text[digits_start..self.pos]
            .parse()
            .map_err(|_| self.syntax_error("variable index out of range"))?;
        if index == 0 || index as usize > self.n {
            return Err(Error::VarOutOfRange {
                var: index,
                n: self.n,
            });
        }
        Ok(Expr::var(index))
    }
}

//! The scheme interpretation language.
//!
//! Scheme interpretations are written as small formulas over premise slots
//! `p1, p2, …`, exception slots `e1, e2, …`, the claim `c`, and rational
//! constants, combined with Łukasiewicz connectives and three n-ary nodes:
//!
//! ```text
//! p1 & p2 -> c
//! !(p1 & c)
//! wavg(1/2: p1, 1/2: p2) -> c
//! ```
//!
//! Precedence, tightest first: `!`, `&`, `|`, `->` (right-associative),
//! `<->`. `min(…)`/`max(…)` take any positive number of arguments;
//! `wavg(w: expr, …)` takes weight–expression pairs whose weights must sum
//! to exactly 1. Constants must lie in the unit interval and, at evaluation
//! time, on the evaluation grid — the weighted average is the only node that
//! ever rounds.
//!
//! [`parse`] builds a [`SchemeExpr`]; [`print`] renders the canonical text
//! (parsing what was printed yields a structurally equal tree); [`eval`]
//! evaluates against slot assignments on a grid. [`exception_guard`] wires
//! exception slots around a formula as a disjunctive escape.

mod eval;
mod parse;

pub use eval::{compile, eval, CompileError, PreparedExpr};
pub use parse::{parse, ParseError};

use crate::rational::Rational;
use std::fmt;

/// Byte range of a node in the source text. Synthesized nodes use `0..0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

/// A formula node plus where it came from. Equality and hashing look only at
/// the structure, so trees survive print/parse round trips intact.
#[derive(Debug, Clone)]
pub struct SchemeExpr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// A rational constant in the unit interval.
    Const(Rational),
    /// Premise slot, 1-based.
    Premise(u32),
    /// Exception slot, 1-based.
    Exception(u32),
    /// The claim slot `c`.
    Claim,
    Not(Box<SchemeExpr>),
    And(Box<SchemeExpr>, Box<SchemeExpr>),
    Or(Box<SchemeExpr>, Box<SchemeExpr>),
    Implies(Box<SchemeExpr>, Box<SchemeExpr>),
    Iff(Box<SchemeExpr>, Box<SchemeExpr>),
    Min(Vec<SchemeExpr>),
    Max(Vec<SchemeExpr>),
    WeightedAvg(Vec<(Rational, SchemeExpr)>),
}

impl PartialEq for SchemeExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl SchemeExpr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        SchemeExpr { kind, span }
    }

    /// Node without a source location (for programmatic construction).
    pub fn synthetic(kind: ExprKind) -> Self {
        SchemeExpr { kind, span: Span::default() }
    }

    /// Highest premise slot referenced, 0 when none.
    pub fn max_premise(&self) -> u32 {
        self.fold_slots(&|kind| match kind {
            ExprKind::Premise(i) => Some(*i),
            _ => None,
        })
    }

    /// Highest exception slot referenced, 0 when none.
    pub fn max_exception(&self) -> u32 {
        self.fold_slots(&|kind| match kind {
            ExprKind::Exception(i) => Some(*i),
            _ => None,
        })
    }

    /// First node (preorder) for which `pick` yields a slot index above `limit`.
    pub fn find_slot_above(
        &self,
        limit: u32,
        pick: fn(&ExprKind) -> Option<u32>,
    ) -> Option<(u32, Span)> {
        if let Some(i) = pick(&self.kind) {
            if i > limit {
                return Some((i, self.span));
            }
        }
        self.children().find_map(|child| child.find_slot_above(limit, pick))
    }

    fn fold_slots(&self, pick: &dyn Fn(&ExprKind) -> Option<u32>) -> u32 {
        let own = pick(&self.kind).unwrap_or(0);
        self.children()
            .map(|child| child.fold_slots(pick))
            .fold(own, u32::max)
    }

    fn children(&self) -> Box<dyn Iterator<Item = &SchemeExpr> + '_> {
        match &self.kind {
            ExprKind::Const(_) | ExprKind::Premise(_) | ExprKind::Exception(_) | ExprKind::Claim => {
                Box::new(std::iter::empty())
            }
            ExprKind::Not(x) => Box::new(std::iter::once(x.as_ref())),
            ExprKind::And(a, b)
            | ExprKind::Or(a, b)
            | ExprKind::Implies(a, b)
            | ExprKind::Iff(a, b) => Box::new([a.as_ref(), b.as_ref()].into_iter()),
            ExprKind::Min(xs) | ExprKind::Max(xs) => Box::new(xs.iter()),
            ExprKind::WeightedAvg(ws) => Box::new(ws.iter().map(|(_, x)| x)),
        }
    }
}

/// Wraps a formula in its exception escape: `(e1 | … | em) | expr`.
/// With no exception slots the formula is returned unchanged.
pub fn exception_guard(expr: &SchemeExpr, exception_arity: u32) -> SchemeExpr {
    if exception_arity == 0 {
        return expr.clone();
    }
    let mut escape = SchemeExpr::synthetic(ExprKind::Exception(1));
    for i in 2..=exception_arity {
        let slot = SchemeExpr::synthetic(ExprKind::Exception(i));
        escape = SchemeExpr::synthetic(ExprKind::Or(Box::new(escape), Box::new(slot)));
    }
    SchemeExpr::synthetic(ExprKind::Or(Box::new(escape), Box::new(expr.clone())))
}

/// Canonical rendering. `parse(&print(expr))` reproduces `expr` structurally.
pub fn print(expr: &SchemeExpr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr);
    out
}

impl fmt::Display for SchemeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Binding strength: atoms and prefix nodes 5, `&` 4, `|` 3, `->` 2, `<->` 1.
fn precedence(kind: &ExprKind) -> u8 {
    match kind {
        ExprKind::And(..) => 4,
        ExprKind::Or(..) => 3,
        ExprKind::Implies(..) => 2,
        ExprKind::Iff(..) => 1,
        _ => 5,
    }
}

fn write_expr(out: &mut String, expr: &SchemeExpr) {
    match &expr.kind {
        ExprKind::Const(r) => out.push_str(&r.to_string()),
        ExprKind::Premise(i) => out.push_str(&format!("p{i}")),
        ExprKind::Exception(i) => out.push_str(&format!("e{i}")),
        ExprKind::Claim => out.push('c'),
        ExprKind::Not(x) => {
            out.push('!');
            write_child(out, x, 5);
        }
        ExprKind::And(a, b) => write_binary(out, a, "&", b, 4, true),
        ExprKind::Or(a, b) => write_binary(out, a, "|", b, 3, true),
        ExprKind::Implies(a, b) => write_binary(out, a, "->", b, 2, false),
        ExprKind::Iff(a, b) => write_binary(out, a, "<->", b, 1, true),
        ExprKind::Min(xs) => write_call(out, "min", xs),
        ExprKind::Max(xs) => write_call(out, "max", xs),
        ExprKind::WeightedAvg(ws) => {
            out.push_str("wavg(");
            for (i, (w, x)) in ws.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&w.to_string());
                out.push_str(": ");
                write_expr(out, x);
            }
            out.push(')');
        }
    }
}

fn write_call(out: &mut String, name: &str, args: &[SchemeExpr]) {
    out.push_str(name);
    out.push('(');
    for (i, x) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, x);
    }
    out.push(')');
}

fn write_binary(
    out: &mut String,
    left: &SchemeExpr,
    op: &str,
    right: &SchemeExpr,
    prec: u8,
    left_assoc: bool,
) {
    let (left_min, right_min) = if left_assoc {
        (prec, prec + 1)
    } else {
        (prec + 1, prec)
    };
    write_child(out, left, left_min);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(out, right, right_min);
}

fn write_child(out: &mut String, child: &SchemeExpr, min_prec: u8) {
    if precedence(&child.kind) < min_prec {
        out.push('(');
        write_expr(out, child);
        out.push(')');
    } else {
        write_expr(out, child);
    }
}

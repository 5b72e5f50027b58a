//! Lexer and recursive-descent parser for scheme formulas.

use super::{ExprKind, SchemeExpr, Span};
use crate::rational::{in_unit_interval, parse_rational, Rational};
use num_traits::{CheckedAdd, One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    fn at(source: &str, offset: usize, message: impl Into<String>) -> Self {
        let mut line = 1;
        let mut column = 1;
        for (i, ch) in source.char_indices() {
            if i >= offset {
                break;
            }
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError { message: message.into(), line, column }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Colon,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Claim,
    Premise(u32),
    Exception(u32),
    Min,
    Max,
    Wavg,
    Number(Rational),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Claim => "`c`".into(),
            Tok::Premise(i) => format!("`p{i}`"),
            Tok::Exception(i) => format!("`e{i}`"),
            Tok::Min => "`min`".into(),
            Tok::Max => "`max`".into(),
            Tok::Wavg => "`wavg`".into(),
            Tok::Number(r) => format!("`{r}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

type Spanned = (Tok, Span);

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<Spanned>, ParseError> {
        let mut lx = Lexer { src, bytes: src.as_bytes(), pos: 0 };
        let mut toks = Vec::new();
        loop {
            let (tok, span) = lx.next_token()?;
            let end = tok == Tok::End;
            toks.push((tok, span));
            if end {
                return Ok(toks);
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ParseError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if start >= self.bytes.len() {
            return Ok((Tok::End, Span::new(start, start)));
        }
        let b = self.bytes[start];
        let simple = |lx: &mut Self, tok| {
            lx.pos = start + 1;
            Ok((tok, Span::new(start, start + 1)))
        };
        match b {
            b'(' => simple(self, Tok::LParen),
            b')' => simple(self, Tok::RParen),
            b',' => simple(self, Tok::Comma),
            b':' => simple(self, Tok::Colon),
            b'!' => simple(self, Tok::Bang),
            b'&' => simple(self, Tok::Amp),
            b'|' => simple(self, Tok::Pipe),
            b'-' => {
                if self.bytes.get(start + 1) == Some(&b'>') {
                    self.pos = start + 2;
                    Ok((Tok::Arrow, Span::new(start, start + 2)))
                } else {
                    Err(ParseError::at(self.src, start, "expected `->`"))
                }
            }
            b'<' => {
                if self.bytes.get(start + 1) == Some(&b'-') && self.bytes.get(start + 2) == Some(&b'>') {
                    self.pos = start + 3;
                    Ok((Tok::DoubleArrow, Span::new(start, start + 3)))
                } else {
                    Err(ParseError::at(self.src, start, "expected `<->`"))
                }
            }
            b'0'..=b'9' => self.lex_number(start),
            b'a'..=b'z' | b'A'..=b'Z' => self.lex_word(start),
            other => Err(ParseError::at(
                self.src,
                start,
                format!("unexpected character `{}`", other as char),
            )),
        }
    }

    fn take_digits(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
    }

    fn lex_number(&mut self, start: usize) -> Result<Spanned, ParseError> {
        self.take_digits();
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            self.take_digits();
            if self.pos == frac_start {
                return Err(ParseError::at(self.src, self.pos, "digits expected after `.`"));
            }
        } else if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den_start = self.pos;
            self.take_digits();
            if self.pos == den_start {
                return Err(ParseError::at(self.src, self.pos, "digits expected after `/`"));
            }
        }
        let text = &self.src[start..self.pos];
        let value = parse_rational(text)
            .map_err(|e| ParseError::at(self.src, start, e.to_string()))?;
        if !in_unit_interval(&value) {
            return Err(ParseError::at(
                self.src,
                start,
                format!("constant `{text}` lies outside the unit interval"),
            ));
        }
        Ok((Tok::Number(value), Span::new(start, self.pos)))
    }

    fn lex_word(&mut self, start: usize) -> Result<Spanned, ParseError> {
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = &self.src[start..self.pos];
        let span = Span::new(start, self.pos);
        let slot = |digits: &str, name: &str| -> Result<u32, ParseError> {
            let index: u32 = digits
                .parse()
                .map_err(|_| ParseError::at(self.src, start, format!("bad {name} index in `{word}`")))?;
            if index == 0 {
                return Err(ParseError::at(
                    self.src,
                    start,
                    format!("{name} indices start at 1, got `{word}`"),
                ));
            }
            Ok(index)
        };
        let tok = match word {
            "c" => Tok::Claim,
            "min" => Tok::Min,
            "max" => Tok::Max,
            "wavg" => Tok::Wavg,
            _ if word.starts_with('p') && word[1..].chars().all(|c| c.is_ascii_digit()) && word.len() > 1 => {
                Tok::Premise(slot(&word[1..], "premise")?)
            }
            _ if word.starts_with('e') && word[1..].chars().all(|c| c.is_ascii_digit()) && word.len() > 1 => {
                Tok::Exception(slot(&word[1..], "exception")?)
            }
            _ => {
                return Err(ParseError::at(
                    self.src,
                    start,
                    format!("unknown name `{word}` (expected p<N>, e<N>, c, min, max, wavg, or a constant)"),
                ))
            }
        };
        Ok((tok, span))
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

/// Parses a scheme formula. Errors carry the 1-based line and column.
pub fn parse(text: &str) -> Result<SchemeExpr, ParseError> {
    let toks = Lexer::tokenize(text)?;
    let mut parser = Parser { src: text, toks, pos: 0 };
    let expr = parser.iff()?;
    parser.expect_end()?;
    Ok(expr)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, self.peek_span().start, message)
    }

    fn expect(&mut self, want: &Tok, context: &str) -> Result<Span, ParseError> {
        if self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(self.error_here(format!(
                "expected {} {context}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek().describe())))
        }
    }

    fn iff(&mut self) -> Result<SchemeExpr, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = SchemeExpr::new(ExprKind::Iff(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<SchemeExpr, ParseError> {
        let mut parts = vec![self.disjunction()?];
        while *self.peek() == Tok::Arrow {
            self.bump();
            parts.push(self.disjunction()?);
        }
        // `->` associates to the right.
        let mut expr = parts.pop().expect("at least one operand");
        while let Some(lhs) = parts.pop() {
            let span = Span::new(lhs.span.start, expr.span.end);
            expr = SchemeExpr::new(ExprKind::Implies(Box::new(lhs), Box::new(expr)), span);
        }
        Ok(expr)
    }

    fn disjunction(&mut self) -> Result<SchemeExpr, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = SchemeExpr::new(ExprKind::Or(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<SchemeExpr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = SchemeExpr::new(ExprKind::And(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SchemeExpr, ParseError> {
        if *self.peek() == Tok::Bang {
            let start = self.bump().1.start;
            let inner = self.unary()?;
            let span = Span::new(start, inner.span.end);
            return Ok(SchemeExpr::new(ExprKind::Not(Box::new(inner)), span));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SchemeExpr, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Claim => Ok(SchemeExpr::new(ExprKind::Claim, span)),
            Tok::Premise(i) => Ok(SchemeExpr::new(ExprKind::Premise(i), span)),
            Tok::Exception(i) => Ok(SchemeExpr::new(ExprKind::Exception(i), span)),
            Tok::Number(r) => Ok(SchemeExpr::new(ExprKind::Const(r), span)),
            Tok::LParen => {
                let inner = self.iff()?;
                let close = self.expect(&Tok::RParen, "to close the group")?;
                Ok(SchemeExpr::new(inner.kind, Span::new(span.start, close.end)))
            }
            Tok::Min => self.call(span, true),
            Tok::Max => self.call(span, false),
            Tok::Wavg => self.weighted_average(span),
            other => Err(ParseError::at(
                self.src,
                span.start,
                format!("expected a formula, found {}", other.describe()),
            )),
        }
    }

    fn call(&mut self, start: Span, is_min: bool) -> Result<SchemeExpr, ParseError> {
        let name = if is_min { "min" } else { "max" };
        self.expect(&Tok::LParen, &format!("after `{name}`"))?;
        let mut args = vec![self.iff()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.iff()?);
        }
        let close = self.expect(&Tok::RParen, &format!("to close `{name}(`"))?;
        let span = Span::new(start.start, close.end);
        let kind = if is_min { ExprKind::Min(args) } else { ExprKind::Max(args) };
        Ok(SchemeExpr::new(kind, span))
    }

    fn weighted_average(&mut self, start: Span) -> Result<SchemeExpr, ParseError> {
        self.expect(&Tok::LParen, "after `wavg`")?;
        let mut terms = Vec::new();
        loop {
            let weight = match self.bump() {
                (Tok::Number(r), _) => r,
                (other, sp) => {
                    return Err(ParseError::at(
                        self.src,
                        sp.start,
                        format!("expected a weight, found {}", other.describe()),
                    ))
                }
            };
            self.expect(&Tok::Colon, "between weight and expression")?;
            let expr = self.iff()?;
            terms.push((weight, expr));
            match self.bump() {
                (Tok::Comma, _) => continue,
                (Tok::RParen, close) => {
                    let mut total = Rational::zero();
                    for (w, _) in &terms {
                        total = total.checked_add(w).ok_or_else(|| {
                            ParseError::at(self.src, start.start, "wavg weights are too fine to sum exactly")
                        })?;
                    }
                    if total != Rational::one() {
                        return Err(ParseError::at(
                            self.src,
                            start.start,
                            format!("wavg weights must sum to 1, got {total}"),
                        ));
                    }
                    let span = Span::new(start.start, close.end);
                    return Ok(SchemeExpr::new(ExprKind::WeightedAvg(terms), span));
                }
                (other, sp) => {
                    return Err(ParseError::at(
                        self.src,
                        sp.start,
                        format!("expected `,` or `)` in `wavg(`, found {}", other.describe()),
                    ))
                }
            }
        }
    }
}

//! Lexer and recursive-descent parser for pulse programs.
//!
//! ```text
//! program := pulse*
//! pulse   := AXIS TARGET '(' expr ')' | 'JAB' '(' expr ')'
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | 'pi' | identifier | '(' expr ')'
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use super::expr::{BinOp, Expr};
use super::{Axis, Pulse, PulseOp, PulseSequence};
use crate::linalg::Subsystem;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("unknown rotation axis `{0}` (expected X, Y or Z)")]
    UnknownAxis(char),
    #[error("unknown target spin `{0}` (expected A or B)")]
    UnknownTarget(String),
    #[error("expected a pulse name such as `XA` or `JAB`, found {0}")]
    ExpectedPulse(String),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Position,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(v) => write!(f, "`{v}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump!();
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    let exponent_sign = (d == '+' || d == '-') && s.ends_with(['e', 'E']);
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exponent_sign {
                        s.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                let v: f64 = s.parse().map_err(|_| ParseError {
                    pos,
                    kind: ParseErrorKind::BadNumber(s.clone()),
                })?;
                out.push((Tok::Num(v), pos));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
                continue;
            }
            other => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::UnexpectedChar(other),
                });
            }
        };
        bump!();
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    expected,
                    found: tok.to_string(),
                },
            })
        }
    }

    fn program(&mut self) -> Result<Vec<Pulse>, ParseError> {
        let mut pulses = Vec::new();
        while *self.peek() != Tok::Eof {
            pulses.push(self.pulse()?);
        }
        Ok(pulses)
    }

    fn pulse(&mut self) -> Result<Pulse, ParseError> {
        let (tok, pos) = self.next();
        let Tok::Ident(name) = tok else {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::ExpectedPulse(tok.to_string()),
            });
        };
        let op = pulse_op(&name).map_err(|kind| ParseError { pos, kind })?;
        self.expect(Tok::LParen, "`(`")?;
        let angle = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(Pulse { op, angle })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::neg(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Num(v) => Ok(Expr::num(v)),
            Tok::Ident(name) if name == "pi" => Ok(Expr::num(PI)),
            Tok::Ident(name) => Ok(Expr::param(name)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            other => Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    expected: "an angle expression",
                    found: other.to_string(),
                },
            }),
        }
    }
}

fn pulse_op(name: &str) -> Result<PulseOp, ParseErrorKind> {
    if name == "JAB" {
        return Ok(PulseOp::Coupling);
    }
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return Err(ParseErrorKind::ExpectedPulse(String::new()));
    };
    let rest = chars.as_str();
    let axis = match first {
        'X' => Axis::X,
        'Y' => Axis::Y,
        'Z' => Axis::Z,
        'J' => return Err(ParseErrorKind::UnknownTarget(rest.to_string())),
        other if first.is_uppercase() && rest.len() == 1 => {
            return Err(ParseErrorKind::UnknownAxis(other))
        }
        _ => return Err(ParseErrorKind::ExpectedPulse(format!("`{name}`"))),
    };
    let target = match rest {
        "A" => Subsystem::A,
        "B" => Subsystem::B,
        other => return Err(ParseErrorKind::UnknownTarget(other.to_string())),
    };
    Ok(PulseOp::Rotation { axis, target })
}

/// Parses a pulse program. Parameters stay symbolic until bound.
pub fn parse(text: &str) -> Result<PulseSequence, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    Ok(PulseSequence::new(p.program()?))
}

/// Parses a single angle expression such as `3*pi/4`.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(ParseError {
            pos: p.pos(),
            kind: ParseErrorKind::Unexpected {
                expected: "end of expression",
                found: p.peek().to_string(),
            },
        });
    }
    Ok(e)
}

//! Reader and writer for a small OpenQASM 2.0 subset.
//!
//! Accepted grammar (whitespace and `//` comments are free):
//!
//! ```text
//! program   := header? include? qreg stmt*
//! header    := "OPENQASM" REAL ";"
//! include   := "include" STRING ";"
//! qreg      := "qreg" ID "[" INT "]" ";"
//! stmt      := "barrier" arglist ";"
//!            | GATE ( "(" expr ")" )? arg ( "," arg )* ";"
//! arg       := ID "[" INT "]"
//! GATE      := h | x | z | s | sdg | t | tdg | rz | cx | cz | swap
//! expr      := term (("+" | "-") term)*
//! term      := unary (("*" | "/") unary)*
//! unary     := "-" unary | "(" expr ")" | NUMBER | "pi"
//! ```
//!
//! The header and include lines are optional. Angles that are rational
//! multiples of `pi` are kept exact; any other angle is snapped to the
//! nearest fraction of π with denominator at most 2^20 and the snap error is
//! reported as a [`Diagnostic`].

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::phase::Phase;

/// Largest denominator used when snapping a non-rational angle.
pub const MAX_SNAP_DENOMINATOR: i64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported gate or statement `{name}` at {line}:{column}")]
    UnsupportedGate {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("qubit index {index} out of range for register of size {size} at {line}:{column}")]
    QubitOutOfRange {
        index: usize,
        size: usize,
        line: usize,
        column: usize,
    },
    #[error("only one qreg declaration is supported (second one at {line}:{column})")]
    MultipleQregs { line: usize, column: usize },
    #[error("no qreg declaration found")]
    MissingQreg,
    #[error("invalid gate at {line}:{column}: {message}")]
    InvalidGate {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Non-fatal notes produced while parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Absolute angle error (radians) introduced by snapping, when relevant.
    pub snap_error: f64,
}

#[derive(Debug, Clone)]
pub struct ParsedQasm {
    pub circuit: Circuit,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Real(String),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            out.push(Token {
                tok: Tok::Ident(chars[s..i].iter().collect()),
                line: start_line,
                column: start_col,
            });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let s = i;
            let mut real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            col += i - s;
            let text: String = chars[s..i].iter().collect();
            let tok = if real {
                Tok::Real(text)
            } else {
                match text.parse::<i64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => Tok::Real(text),
                }
            };
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
        } else if c == '"' {
            let s = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(QasmError::Syntax {
                    line: start_line,
                    column: start_col,
                    message: "unterminated string".into(),
                });
            }
            let s_val: String = chars[s..i].iter().collect();
            i += 1;
            col += s_val.chars().count() + 2;
            out.push(Token {
                tok: Tok::Str(s_val),
                line: start_line,
                column: start_col,
            });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut col, 2);
            out.push(Token {
                tok: Tok::Arrow,
                line: start_line,
                column: start_col,
            });
        } else if "[](),;+-*/^{}".contains(c) {
            advance(&mut i, &mut col, 1);
            out.push(Token {
                tok: Tok::Sym(c),
                line: start_line,
                column: start_col,
            });
        } else {
            return Err(QasmError::Syntax {
                line: start_line,
                column: start_col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Angle value during expression evaluation: an exact rational times π^k, or
/// a float once exactness is lost.
#[derive(Debug, Clone, Copy)]
enum Value {
    Exact { coeff: Rational64, pi_pow: i32 },
    Float(f64),
}

impl Value {
    fn to_f64(self) -> f64 {
        match self {
            Value::Exact { coeff, pi_pow } => {
                coeff.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(pi_pow)
            }
            Value::Float(v) => v,
        }
    }

    fn combine(
        self,
        rhs: Value,
        exact: impl Fn(Rational64, i32, Rational64, i32) -> Option<(Rational64, i32)>,
        float: impl Fn(f64, f64) -> f64,
    ) -> Value {
        if let (Value::Exact { coeff: a, pi_pow: pa }, Value::Exact { coeff: b, pi_pow: pb }) = (self, rhs) {
            if let Some((coeff, pi_pow)) = exact(a, pa, b, pb) {
                return Value::Exact { coeff, pi_pow };
            }
        }
        Value::Float(float(self.to_f64(), rhs.to_f64()))
    }
}

fn add_exact(a: Rational64, pa: i32, b: Rational64, pb: i32) -> Option<(Rational64, i32)> {
    if a.is_zero() {
        return Some((b, pb));
    }
    if b.is_zero() {
        return Some((a, pa));
    }
    (pa == pb).then(|| a.checked_add(&b).map(|c| (c, pa))).flatten()
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn eof_error(&self, message: &str) -> QasmError {
        let (line, column) = self
            .toks
            .last()
            .map(|t| (t.line, t.column))
            .unwrap_or((1, 1));
        QasmError::Syntax {
            line,
            column,
            message: format!("unexpected end of input: {message}"),
        }
    }

    fn syntax(tok: &Token, message: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<&'a Token, QasmError> {
        match self.next() {
            Some(t) if t.tok == Tok::Sym(c) => Ok(t),
            Some(t) => Err(Self::syntax(t, format!("expected `{c}`, found {:?}", t.tok))),
            None => Err(self.eof_error(&format!("expected `{c}`"))),
        }
    }

    fn expect_int(&mut self) -> Result<(i64, &'a Token), QasmError> {
        match self.next() {
            Some(t) => match t.tok {
                Tok::Int(v) => Ok((v, t)),
                _ => Err(Self::syntax(t, "expected integer")),
            },
            None => Err(self.eof_error("expected integer")),
        }
    }

    fn expect_ident(&mut self) -> Result<(&'a str, &'a Token), QasmError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Ident(s) => Ok((s.as_str(), t)),
                _ => Err(Self::syntax(t, "expected identifier")),
            },
            None => Err(self.eof_error("expected identifier")),
        }
    }

    fn expr(&mut self) -> Result<Value, QasmError> {
        let mut v = self.term()?;
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    let r = self.term()?;
                    v = v.combine(r, add_exact, |a, b| a + b);
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    let r = self.term()?;
                    v = v.combine(r, |a, pa, b, pb| add_exact(a, pa, -b, pb), |a, b| a - b);
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<Value, QasmError> {
        let mut v = self.unary()?;
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    v = v.combine(r, |a, pa, b, pb| a.checked_mul(&b).map(|c| (c, pa + pb)), |a, b| a * b);
                }
                Some(Tok::Sym('/')) => {
                    let tok = self.next().unwrap();
                    let r = self.unary()?;
                    if r.to_f64() == 0.0 {
                        return Err(Self::syntax(tok, "division by zero"));
                    }
                    v = v.combine(r, |a, pa, b, pb| a.checked_div(&b).map(|c| (c, pa - pb)), |a, b| a / b);
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, QasmError> {
        let t = self.next().ok_or_else(|| self.eof_error("expected expression"))?;
        match &t.tok {
            Tok::Sym('-') => Ok(match self.unary()? {
                Value::Exact { coeff, pi_pow } => Value::Exact { coeff: -coeff, pi_pow },
                Value::Float(f) => Value::Float(-f),
            }),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Int(v) => Ok(Value::Exact {
                coeff: Rational64::from_integer(*v),
                pi_pow: 0,
            }),
            Tok::Real(s) => Ok(decimal_value(s).map_or_else(
                || Value::Float(s.parse::<f64>().unwrap_or(f64::NAN)),
                |coeff| Value::Exact { coeff, pi_pow: 0 },
            )),
            Tok::Ident(name) if name == "pi" => Ok(Value::Exact {
                coeff: Rational64::from_integer(1),
                pi_pow: 1,
            }),
            _ => Err(Self::syntax(t, format!("unexpected token {:?} in expression", t.tok))),
        }
    }
}

/// Exact value of a plain decimal literal such as `0.25`, if it fits.
fn decimal_value(s: &str) -> Option<Rational64> {
    if s.contains(['e', 'E']) {
        return None;
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den = 10i64.checked_pow(frac.len() as u32)?;
    Some(Rational64::new(num, den))
}

/// Parses the supported OpenQASM subset into a circuit.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with_diagnostics(text).map(|p| p.circuit)
}

pub fn parse_qasm_with_diagnostics(text: &str) -> Result<ParsedQasm, QasmError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let mut diagnostics = Vec::new();
    let mut reg: Option<(String, usize)> = None;
    let mut gates: Vec<Gate> = Vec::new();

    while let Some(t) = p.next() {
        let Tok::Ident(word) = &t.tok else {
            return Err(Parser::syntax(t, format!("expected statement, found {:?}", t.tok)));
        };
        match word.as_str() {
            "OPENQASM" => {
                match p.next() {
                    Some(Token { tok: Tok::Real(_) | Tok::Int(_), .. }) => {}
                    Some(other) => return Err(Parser::syntax(other, "expected version number")),
                    None => return Err(p.eof_error("expected version number")),
                }
                p.expect_sym(';')?;
            }
            "include" => {
                match p.next() {
                    Some(Token { tok: Tok::Str(_), .. }) => {}
                    Some(other) => return Err(Parser::syntax(other, "expected file name string")),
                    None => return Err(p.eof_error("expected file name string")),
                }
                p.expect_sym(';')?;
            }
            "qreg" => {
                if reg.is_some() {
                    return Err(QasmError::MultipleQregs {
                        line: t.line,
                        column: t.column,
                    });
                }
                let (name, _) = p.expect_ident()?;
                p.expect_sym('[')?;
                let (size, size_tok) = p.expect_int()?;
                if size <= 0 {
                    return Err(Parser::syntax(size_tok, "register size must be positive"));
                }
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                reg = Some((name.to_string(), size as usize));
            }
            "barrier" => {
                // skip arguments
                loop {
                    match p.next() {
                        Some(Token { tok: Tok::Sym(';'), .. }) => break,
                        Some(_) => {}
                        None => return Err(p.eof_error("expected `;`")),
                    }
                }
            }
            name => {
                let kind_base = match name {
                    "h" => GateKind::H,
                    "x" => GateKind::X,
                    "z" => GateKind::Z,
                    "s" => GateKind::S,
                    "sdg" => GateKind::Sdg,
                    "t" => GateKind::T,
                    "tdg" => GateKind::Tdg,
                    "rz" => GateKind::Rz(Phase::ZERO),
                    "cx" | "CX" => GateKind::Cx,
                    "cz" => GateKind::Cz,
                    "swap" => GateKind::Swap,
                    _ => {
                        return Err(QasmError::UnsupportedGate {
                            name: name.to_string(),
                            line: t.line,
                            column: t.column,
                        })
                    }
                };
                let Some((reg_name, size)) = reg.as_ref() else {
                    return Err(Parser::syntax(t, "gate before qreg declaration"));
                };
                let mut kind = kind_base;
                let has_params = matches!(p.peek(), Some(Token { tok: Tok::Sym('('), .. }));
                if matches!(kind, GateKind::Rz(_)) {
                    if !has_params {
                        return Err(QasmError::InvalidGate {
                            line: t.line,
                            column: t.column,
                            message: "rz requires an angle".into(),
                        });
                    }
                    p.expect_sym('(')?;
                    let v = p.expr()?;
                    p.expect_sym(')')?;
                    let phase = match v {
                        Value::Exact { coeff, pi_pow: 1 } => Phase::new(*coeff.numer(), *coeff.denom()),
                        Value::Exact { coeff, pi_pow: 0 } if coeff.is_zero() => Phase::ZERO,
                        other => {
                            let radians = other.to_f64();
                            if !radians.is_finite() {
                                return Err(QasmError::InvalidGate {
                                    line: t.line,
                                    column: t.column,
                                    message: "angle is not finite".into(),
                                });
                            }
                            let (phase, err) = Phase::approximate(radians, MAX_SNAP_DENOMINATOR);
                            diagnostics.push(Diagnostic {
                                line: t.line,
                                column: t.column,
                                message: format!("angle {radians} snapped to {phase}"),
                                snap_error: err,
                            });
                            phase
                        }
                    };
                    kind = GateKind::Rz(phase);
                } else if has_params {
                    return Err(QasmError::InvalidGate {
                        line: t.line,
                        column: t.column,
                        message: format!("gate `{name}` takes no parameters"),
                    });
                }
                let mut qubits = Vec::with_capacity(2);
                loop {
                    let (arg, arg_tok) = p.expect_ident()?;
                    if arg != reg_name {
                        return Err(Parser::syntax(arg_tok, format!("unknown register `{arg}`")));
                    }
                    p.expect_sym('[')?;
                    let (idx, idx_tok) = p.expect_int()?;
                    p.expect_sym(']')?;
                    if idx < 0 || idx as usize >= *size {
                        return Err(QasmError::QubitOutOfRange {
                            index: idx.max(0) as usize,
                            size: *size,
                            line: idx_tok.line,
                            column: idx_tok.column,
                        });
                    }
                    qubits.push(idx as usize);
                    match p.next() {
                        Some(Token { tok: Tok::Sym(','), .. }) => continue,
                        Some(Token { tok: Tok::Sym(';'), .. }) => break,
                        Some(other) => return Err(Parser::syntax(other, "expected `,` or `;`")),
                        None => return Err(p.eof_error("expected `;`")),
                    }
                }
                let gate = Gate::new(kind, &qubits).map_err(|e| QasmError::InvalidGate {
                    line: t.line,
                    column: t.column,
                    message: e.to_string(),
                })?;
                if gate.is_two_qubit() && qubits[0] == qubits[1] {
                    return Err(QasmError::InvalidGate {
                        line: t.line,
                        column: t.column,
                        message: "two-qubit gate on a single qubit".into(),
                    });
                }
                gates.push(gate);
            }
        }
    }

    let (_, size) = reg.ok_or(QasmError::MissingQreg)?;
    let circuit = Circuit::from_gates(size, gates).expect("gates validated during parsing");
    Ok(ParsedQasm { circuit, diagnostics })
}

/// Writes the canonicalized circuit (S/T sugar as `rz`).
pub fn write_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    for g in c.gates() {
        let _ = writeln!(out, "{};", g.canonical());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_clifford_t;
    use proptest::prelude::*;

    #[test]
    fn parses_basic_program() {
        let c = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.gates(), &[Gate::h(0), Gate::cx(0, 1)]);
    }

    #[test]
    fn parses_pi_angles_exactly() {
        let c = parse_qasm("qreg q[1]; rz(pi/4) q[0]; rz(-pi/2) q[0]; rz(3*pi/4) q[0]; rz(0.25*pi) q[0];").unwrap();
        let phases: Vec<_> = c
            .gates()
            .iter()
            .map(|g| match g.kind {
                GateKind::Rz(p) => p,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(
            phases,
            vec![Phase::new(1, 4), Phase::new(3, 2), Phase::new(3, 4), Phase::new(1, 4)]
        );
    }

    #[test]
    fn snaps_float_angles_with_diagnostic() {
        let p = parse_qasm_with_diagnostics("qreg q[1]; rz(0.3) q[0];").unwrap();
        assert_eq!(p.diagnostics.len(), 1);
        assert!(p.diagnostics[0].snap_error < 1e-9);
        let GateKind::Rz(ph) = p.circuit.gates()[0].kind else { panic!() };
        assert!((ph.to_radians() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn accepts_header_barrier_comments() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n// comment\nqreg q[3];\nbarrier q[0],q[1];\nswap q[0],q[2]; // trailing\n";
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.gates(), &[Gate::swap(0, 2)]);
    }

    #[test]
    fn rejects_measure_and_friends() {
        assert!(matches!(
            parse_qasm("qreg q[1]; measure q[0];"),
            Err(QasmError::UnsupportedGate { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[1]; creg c[1];"),
            Err(QasmError::UnsupportedGate { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\nqreg r[1];"),
            Err(QasmError::MultipleQregs { line: 2, column: 1 })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2]; h q[2];"),
            Err(QasmError::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\nh q[0]"),
            Err(QasmError::Syntax { .. })
        ));
        match parse_qasm("qreg q[2];\n  h q[0] q[1];") {
            Err(QasmError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn writes_canonical_form() {
        let c = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        assert!(write_qasm(&c).contains("rz(pi/4) q[0];"));
        let empty = write_qasm(&Circuit::new(3));
        assert!(empty.ends_with("qreg q[3];\n"));
        assert_eq!(parse_qasm(&empty).unwrap(), Circuit::new(3));
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(n in 2usize..6, depth in 1usize..60, seed in any::<u64>()) {
            let c = random_clifford_t(n, depth, 0.3, 0.3, seed).unwrap();
            let back = parse_qasm(&write_qasm(&c)).unwrap();
            prop_assert_eq!(back, c.canonicalized());
        }
    }
}
